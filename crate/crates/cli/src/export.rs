//! DOT and JSON diagrams. Nodes are named by their {u,m} strings; marked
//! edges are drawn bold and red, inert arrows dashed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use fatdelta_core::arities::psi;
use fatdelta_core::fat::{elementary_arrows, enumerate_objects, FatMorphism, FatObject};
use fatdelta_core::relgraph::RelGraph;

use crate::render::Output;
use crate::ExportKind;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poset {
    pub bound: usize,
    pub objects: Vec<FatObject>,
    pub arrows: Vec<Arrow>,
}

/// `count` parallel arrows `dom → cod` of one kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub dom: FatObject,
    pub cod: FatObject,
    pub kind: Kind,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Active,
    Inert,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub morphism: FatMorphism,
    pub dom: RelGraph,
    pub cod: RelGraph,
    pub bottom: Vec<usize>,
}

pub fn poset(bound: usize) -> Poset {
    let mut counts: BTreeMap<(FatObject, FatObject, Kind), usize> = BTreeMap::new();
    for f in elementary_arrows(bound) {
        let kind = if f.is_active() { Kind::Active } else { Kind::Inert };
        *counts.entry((f.dom().clone(), f.cod().clone(), kind)).or_default() += 1;
    }
    Poset {
        bound,
        objects: enumerate_objects(bound),
        arrows: counts
            .into_iter()
            .map(|((dom, cod, kind), count)| Arrow { dom, cod, kind, count })
            .collect(),
    }
}

pub fn diagram(f: FatMorphism) -> Diagram {
    Diagram {
        dom: psi(f.dom()),
        cod: psi(f.cod()),
        bottom: f.pi_codomain().images().to_vec(),
        morphism: f,
    }
}

fn node(x: &FatObject) -> String {
    format!("\"{x}\"")
}

pub fn poset_dot(p: &Poset) -> String {
    let mut out = String::from("digraph objects {\n  rankdir=BT;\n");
    for x in &p.objects {
        // label shows the quotes so that "" stays visible
        writeln!(out, "  {} [label=\"\\\"{x}\\\"\"];", node(x)).unwrap();
    }
    for a in &p.arrows {
        let style = match a.kind {
            Kind::Active => "solid",
            Kind::Inert => "dashed",
        };
        let label = if a.count > 1 { format!("label=\"{}\", ", a.count) } else { String::new() };
        writeln!(out, "  {} -> {} [{label}style={style}];", node(&a.dom), node(&a.cod)).unwrap();
    }
    out.push_str("}\n");
    out
}

fn column(out: &mut String, name: &str, prefix: char, x: &FatObject) {
    writeln!(out, "  subgraph cluster_{name} {{\n    label=\"\\\"{x}\\\"\";").unwrap();
    for v in 0..=x.edges() {
        writeln!(out, "    {prefix}{v} [label=\"{v}\"];").unwrap();
    }
    for (i, &m) in x.marking().iter().enumerate() {
        let style = if m { " [style=bold, color=red]" } else { "" };
        writeln!(out, "    {prefix}{i} -> {prefix}{}{style};", i + 1).unwrap();
    }
    out.push_str("  }\n");
}

pub fn diagram_dot(d: &Diagram) -> String {
    let f = &d.morphism;
    let mut out = String::from("digraph morphism {\n  rankdir=TB;\n");
    column(&mut out, "dom", 'd', f.dom());
    column(&mut out, "cod", 'c', f.cod());
    for (i, &t) in f.top().iter().enumerate() {
        writeln!(out, "  d{i} -> c{t} [style=dotted, constraint=false];").unwrap();
    }
    out.push_str("}\n");
    out
}

/// DOT in text and dot formats.
pub fn run(kind: &ExportKind) -> anyhow::Result<Output> {
    Ok(match kind {
        ExportKind::ObjectsPoset { bound } => {
            let p = poset(*bound);
            let dot = poset_dot(&p);
            Output::new(dot.clone(), serde_json::to_value(&p)?).with_dot(dot)
        }
        ExportKind::MorphismDiagram { morphism } => {
            let f: FatMorphism = morphism.parse()?;
            let d = diagram(f);
            let dot = diagram_dot(&d);
            Output::new(dot.clone(), serde_json::to_value(&d)?).with_dot(dot)
        }
    })
}
