//! One function per verb: each computes its result and renders it both as
//! text and as JSON.

use std::fmt::Write as _;

use anyhow::Context;
use serde::Serialize;
use serde_json::{json, Value};

use fatdelta_core::delta::{vee_active, OrdinalMap};
use fatdelta_core::fat::{enumerate_hom_fat, enumerate_objects, pushout_active_inert, verify_pushout, FatClass, FatMorphism, FatObject};
use fatdelta_core::hypermoment::{gamma_morphism, gamma_object, hypermoment_check, HypermomentReport, Suite, SuiteReport};
use fatdelta_core::nerve::{nerve, segal_check, PresheafJson};
use fatdelta_core::nerve_corpus::{corpus_check, CorpusOptions, CorpusReport};
use fatdelta_core::relgraph::RelGraph;
use fatdelta_core::semicat::RelSemiCategory;
use fatdelta_core::verify::{
    check_cartesian_universe, check_contraction, check_descent, check_directness, check_factorization_system,
    check_genericity, Verdict,
};
use fatdelta_core::arities::check_cartesian;

use crate::{Format, VerifyTarget, SCHEMA_VERSION};

/// A usage problem found after argument parsing; exits with code 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub struct Output {
    pub text: String,
    pub json: Value,
    pub dot: Option<String>,
    /// False when a check ran to completion but found counterexamples.
    pub ok: bool,
}

impl Output {
    pub fn new(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            dot: None,
            ok: true,
        }
    }

    pub fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }

    pub fn render(&self, format: Format, command: &str) -> String {
        match format {
            Format::Text => with_newline(&self.text),
            Format::Dot => with_newline(self.dot.as_deref().unwrap_or(&self.text)),
            Format::Json => {
                let v = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": command,
                    "ok": self.ok,
                    "result": self.json,
                });
                with_newline(&serde_json::to_string_pretty(&v).expect("values serialize"))
            }
        }
    }
}

fn with_newline(s: &str) -> String {
    if s.is_empty() || s.ends_with('\n') {
        s.to_string()
    } else {
        format!("{s}\n")
    }
}

/// `{"schema_version":1,"error":{"kind":..,"message":..}}`.
pub fn error_object(e: &anyhow::Error) -> String {
    let kind = match e.downcast_ref::<fatdelta_core::Error>() {
        Some(core) => core_kind(core),
        None if e.downcast_ref::<std::io::Error>().is_some() || e.chain().any(|c| c.is::<std::io::Error>()) => "io",
        None => "input",
    };
    let message = e.chain().map(|c| c.to_string()).collect::<Vec<_>>().join(": ");
    json!({"schema_version": SCHEMA_VERSION, "error": {"kind": kind, "message": message}}).to_string()
}

fn core_kind(e: &fatdelta_core::Error) -> &'static str {
    use fatdelta_core::Error::*;
    match e {
        CompositionMismatch { .. } => "composition_mismatch",
        IndexOutOfRange { .. } => "index_out_of_range",
        InvalidMap(_) => "invalid_map",
        InvalidMorphism(_) => "invalid_morphism",
        Precondition(_) => "precondition",
        Parse(_) => "parse",
        UnboundedFreeObject => "unbounded_free_object",
        TruncationOverflow { .. } => "truncation_overflow",
        Semicategory(_) => "semicategory",
        Presheaf(_) => "presheaf",
        BoundMismatch(..) => "bound_mismatch",
    }
}

fn object(s: &str) -> anyhow::Result<FatObject> {
    s.parse().with_context(|| format!("reading object `{s}`"))
}

/// Shape errors are parse errors; a well-formed triple that is not a
/// morphism is reported as an invalid morphism.
#[derive(serde::Deserialize)]
struct RawMorphism {
    dom: FatObject,
    cod: FatObject,
    top: Vec<usize>,
}

fn morphism(s: &str) -> anyhow::Result<FatMorphism> {
    let raw: RawMorphism = serde_json::from_str(s.trim())
        .map_err(|e| fatdelta_core::Error::Parse(e.to_string()))
        .with_context(|| format!("reading morphism `{s}`"))?;
    Ok(FatMorphism::new(raw.dom, raw.cod, raw.top)?)
}

fn quoted(x: &FatObject) -> String {
    format!("\"{x}\"")
}

/// A morphism with its bottom map, for JSON output.
#[derive(Serialize)]
struct MorphismView<'a> {
    dom: &'a FatObject,
    cod: &'a FatObject,
    top: &'a [usize],
    bottom: Vec<usize>,
    active: bool,
    inert: bool,
}

fn view(f: &FatMorphism) -> MorphismView<'_> {
    MorphismView {
        dom: f.dom(),
        cod: f.cod(),
        top: f.top(),
        bottom: f.pi_codomain().images().to_vec(),
        active: f.is_active(),
        inert: f.is_inert(),
    }
}

fn line(f: &FatMorphism) -> String {
    format!("{f} bottom {:?}", f.pi_codomain().images())
}

pub fn objects(max_edges: usize, count: bool) -> anyhow::Result<Output> {
    let objects = enumerate_objects(max_edges);
    if count {
        return Ok(Output::new(objects.len().to_string(), json!({ "count": objects.len() })));
    }
    let text = objects.iter().map(quoted).collect::<Vec<_>>().join("\n");
    Ok(Output::new(text, json!({ "objects": objects })))
}

pub fn hom(dom: &str, cod: &str, class: FatClass, count: bool) -> anyhow::Result<Output> {
    let (x, y) = (object(dom)?, object(cod)?);
    let homs = enumerate_hom_fat(&x, &y, class);
    if count {
        return Ok(Output::new(homs.len().to_string(), json!({ "count": homs.len() })));
    }
    let text = homs.iter().map(line).collect::<Vec<_>>().join("\n");
    let views: Vec<_> = homs.iter().map(view).collect();
    Ok(Output::new(text, json!({ "dom": x, "cod": y, "morphisms": views })))
}

pub fn compose(g: &str, f: &str) -> anyhow::Result<Output> {
    let (g, f) = (morphism(g)?, morphism(f)?);
    let gf = g.compose(&f)?;
    Ok(Output::new(line(&gf), json!({ "composite": view(&gf) })))
}

pub fn factorize(f: &str) -> anyhow::Result<Output> {
    let f = morphism(f)?;
    let (a, i) = f.active_inert_factor();
    let text = format!("middle {}\nactive {}\ninert {}", quoted(a.cod()), line(&a), line(&i));
    Ok(Output::new(
        text,
        json!({ "morphism": view(&f), "middle": a.cod(), "active": view(&a), "inert": view(&i) }),
    ))
}

pub fn pushout(inert: &str, active: &str) -> anyhow::Result<Output> {
    let (f, g) = (morphism(inert)?, morphism(active)?);
    let po = pushout_active_inert(&f, &g)?;
    // every cocone into an object with up to one more edge than the corner
    let targets = enumerate_objects(po.corner.edges() + 1);
    let verdict = verify_pushout(&f, &g, &po, &targets);
    let mut text = format!("corner {}\ninert leg {}\nactive leg {}", quoted(&po.corner), po.u, po.v);
    write!(
        text,
        "\ncocones into objects with at most {} edges: {}, {}",
        po.corner.edges() + 1,
        verdict.cocones,
        if verdict.passed() { "each mediated once" } else { "NOT universal" }
    )?;
    let mut out = Output::new(
        text,
        json!({ "corner": po.corner, "inert_leg": view(&po.u), "active_leg": view(&po.v), "universal": verdict }),
    );
    out.ok = verdict.passed();
    Ok(out)
}

pub fn vee(left: &str, right: &str) -> anyhow::Result<Output> {
    if let (Ok(x), Ok(y)) = (left.parse::<FatObject>(), right.parse::<FatObject>()) {
        let v = x.vee(&y);
        return Ok(Output::new(quoted(&v), json!({ "object": v })));
    }
    let f: OrdinalMap = left.parse().with_context(|| format!("reading `{left}` as an object or a map of Δ"))?;
    let g: OrdinalMap = right.parse().with_context(|| format!("reading `{right}` as an object or a map of Δ"))?;
    let v = vee_active(&f, &g)?;
    Ok(Output::new(v.to_string(), json!({ "map": v })))
}

pub fn nerve_of(source: &str, bound: usize) -> anyhow::Result<Output> {
    let c: RelSemiCategory = serde_json::from_str(source).context("reading a relative semicategory")?;
    let p = nerve(&c, bound)?;
    let j = PresheafJson::from(&p);
    let mut text = String::new();
    for (x, elements) in p.site().objects().iter().zip(p.sets()) {
        write!(text, "{} ({}):", quoted(x), elements.len())?;
        for e in elements {
            write!(text, " {e}")?;
        }
        text.push('\n');
    }
    Ok(Output::new(text, serde_json::to_value(&j)?))
}

/// Reads a bare presheaf or the JSON output of `nerve`.
pub fn segal(source: &str) -> anyhow::Result<Output> {
    let mut v: serde_json::Value = serde_json::from_str(source).context("reading a presheaf")?;
    if v.get("schema_version").is_some() {
        v = v["result"].take();
    }
    let j: PresheafJson = serde_json::from_value(v).context("reading a presheaf")?;
    let p = j.to_presheaf()?;
    let r = segal_check(&p)?;
    let mut text = format!(
        "{} ({} objects checked)",
        if r.passed { "Segal" } else { "not Segal" },
        r.checked_objects
    );
    for f in &r.failures {
        write!(text, "\n  \"{}\": {:?}: {}", f.object, f.kind, f.detail)?;
    }
    let mut out = Output::new(text, serde_json::to_value(&r)?);
    out.ok = r.passed;
    Ok(out)
}

pub fn gamma(target: &str) -> anyhow::Result<Output> {
    if target.trim_start().starts_with('{') {
        let f = morphism(target)?;
        let g = gamma_morphism(&f);
        return Ok(Output::new(g.to_string(), json!({ "map": g })));
    }
    let x = object(target)?;
    let g = gamma_object(&x);
    Ok(Output::new(g.size.to_string(), json!({ "object": g })))
}

/// One check as printed by `verify`.
struct Check {
    name: String,
    passed: bool,
    detail: String,
    failures: Vec<String>,
    json: Value,
}

fn from_verdict(v: Verdict) -> anyhow::Result<Check> {
    let mut detail = format!("{} checked", v.checked);
    for n in &v.notes {
        write!(detail, "; {n}")?;
    }
    if v.failure_count > 0 {
        write!(detail, "; {} failures", v.failure_count)?;
    }
    Ok(Check {
        name: v.check.clone(),
        passed: v.passed(),
        detail,
        failures: v.failures.clone(),
        json: serde_json::to_value(&v)?,
    })
}

fn from_suite(s: &SuiteReport) -> anyhow::Result<Check> {
    let mut detail = format!("{} checked at bound {}", s.checked, s.bound);
    for (what, n) in &s.observations {
        write!(detail, "; {what}: {n}")?;
    }
    Ok(Check {
        name: s.suite.clone(),
        passed: s.passed(),
        detail,
        failures: s.counterexamples.iter().take(20).cloned().collect(),
        json: serde_json::to_value(s)?,
    })
}

fn from_hypermoment(r: &HypermomentReport) -> anyhow::Result<Vec<Check>> {
    let mut out: Vec<Check> = r.suites.iter().map(from_suite).collect::<anyhow::Result<_>>()?;
    if let Some(u) = &r.unitality {
        out.push(Check {
            name: "unitality report".into(),
            passed: true,
            detail: format!(
                "{} objects; {} mixed-marking objects receive no active map from a unit (recorded, not asserted)",
                u.rows.len(),
                u.mixed_without_active_unit
            ),
            failures: Vec::new(),
            json: serde_json::to_value(u)?,
        });
    }
    Ok(out)
}

fn from_corpus(r: &CorpusReport) -> anyhow::Result<Check> {
    let mut detail = format!(
        "{} classes, {} pairs, {} functors, {} natural transformations; mutations tried {}, survivors {}",
        r.classes,
        r.pairs,
        r.functors,
        r.natural_transformations,
        r.mutations.tried(),
        r.mutations.survivors.len()
    );
    for d in &r.direct {
        write!(detail, "; bound {} direct: {} pairs, {} mismatches", d.bound, d.pairs, d.mismatches.len())?;
    }
    let mut failures: Vec<String> = r
        .mismatches
        .iter()
        .map(|m| format!("classes {} -> {}: {} functors, {} transformations", m.source, m.target, m.functors, m.natural_transformations))
        .collect();
    failures.extend(r.segal_failures.iter().map(|(b, i)| format!("class {i} fails the Segal check at bound {b}")));
    failures.extend(r.non_coskeletal.iter().map(|i| format!("class {i} is not 2-coskeletal")));
    failures.extend(r.mutations.survivors.iter().cloned());
    failures.truncate(20);
    Ok(Check {
        name: "nerve".into(),
        passed: r.passed(),
        detail,
        failures,
        json: serde_json::to_value(r)?,
    })
}

fn corpus(max_objects: usize, max_morphisms: usize) -> anyhow::Result<Check> {
    let options = CorpusOptions {
        max_objects,
        max_morphisms,
        ..CorpusOptions::default()
    };
    from_corpus(&corpus_check(&options)?)
}

fn cartesian(bound: usize, graph: Option<&str>, max_vertices: usize, max_edges: usize) -> anyhow::Result<Check> {
    let Some(path) = graph else {
        return from_verdict(check_cartesian_universe(max_vertices, max_edges, bound)?);
    };
    let source = std::fs::read_to_string(path).with_context(|| format!("cannot read `{path}`"))?;
    let x: RelGraph = source.parse()?;
    let r = check_cartesian(&x, bound)?;
    Ok(Check {
        name: "cartesian".into(),
        passed: r.passed(),
        detail: format!("{} checks on {x}", r.checks.len()),
        failures: r
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} at length {}: {}", c.name, c.length, c.witness))
            .collect(),
        json: serde_json::to_value(&r)?,
    })
}

pub fn verify(target: &VerifyTarget) -> anyhow::Result<Output> {
    let checks = match target {
        VerifyTarget::Factorization { bound } => vec![from_verdict(check_factorization_system(*bound))?],
        VerifyTarget::PhiPsi { max_edges } => {
            let k = *max_edges;
            vec![from_verdict(check_descent(k, k.min(4), k.min(4))?)?]
        }
        VerifyTarget::Cartesian {
            bound,
            graph,
            max_vertices,
            max_edges,
        } => vec![cartesian(*bound, graph.as_deref(), *max_vertices, *max_edges)?],
        VerifyTarget::Generic {
            bound,
            max_vertices,
            max_edges,
        } => vec![from_verdict(check_genericity(*max_vertices, *max_edges, *bound)?)?],
        VerifyTarget::Hypermoment { bound, suite } => from_hypermoment(&hypermoment_check(*bound, *suite))?,
        VerifyTarget::Directness { bound } => vec![from_verdict(check_directness(*bound))?],
        VerifyTarget::Contraction { bound } => vec![from_verdict(check_contraction(*bound))?],
        VerifyTarget::Nerve {
            max_objects,
            max_morphisms,
        } => vec![corpus(*max_objects, *max_morphisms)?],
        VerifyTarget::All { bound } => {
            let b = *bound;
            let mut all = vec![
                from_verdict(check_factorization_system(b))?,
                from_verdict(check_descent(b, b.min(4), b.min(4))?)?,
                from_verdict(check_cartesian_universe(3, b, b)?)?,
                from_verdict(check_genericity(3, 3, b)?)?,
            ];
            all.extend(from_hypermoment(&hypermoment_check(b, Suite::All))?);
            all.push(from_verdict(check_directness(b))?);
            all.push(from_verdict(check_contraction(b))?);
            all.push(corpus(2, 3)?);
            all
        }
    };
    let mut text = String::new();
    for c in &checks {
        writeln!(text, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        for f in &c.failures {
            writeln!(text, "  {f}")?;
        }
    }
    let ok = checks.iter().all(|c| c.passed);
    let json = json!({
        "passed": ok,
        "checks": checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "report": c.json})).collect::<Vec<_>>(),
    });
    let mut out = Output::new(text, json);
    out.ok = ok;
    Ok(out)
}
