//! Exhaustive checks of the structural facts about Δ and fat Delta on
//! bounded truncations.
//!
//! Every check enumerates independently of the construction it tests: a
//! factorization is compared with a search over all middle objects, the
//! φ/ψ correspondence with round trips, and so on. A check passes exactly
//! when no counterexample turns up.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arities::{
    arity_of, arity_specs, check_cartesian, free_functor_count, generic_factor_string, generic_sweep,
    non_generic_example, phi, phi_on_morphism, psi, psi_on_morphism, Uniform,
};
use crate::delta::{enumerate_hom, MapClass, Ordinal};
use crate::error::Result;
use crate::fat::{enumerate_hom_fat, enumerate_objects, rso, FatClass, FatMorphism, FatObject};
use crate::relgraph::{enumerate_relgraph_maps, linear_relgraph, relgraph_universe};
use crate::semicat::count_functors;

/// At most this many counterexamples are kept.
const KEEP: usize = 20;

/// Outcome of a check.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub checked: u64,
    pub failure_count: u64,
    pub failures: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    fn new(check: &str) -> Self {
        Verdict {
            check: check.into(),
            ..Verdict::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    fn fail(&mut self, why: impl FnOnce() -> String) {
        self.failure_count += 1;
        if self.failures.len() < KEEP {
            self.failures.push(why());
        }
    }

    fn merge(mut self, other: Verdict) -> Verdict {
        self.checked += other.checked;
        self.failure_count += other.failure_count;
        for f in other.failures {
            if self.failures.len() < KEEP {
                self.failures.push(f);
            }
        }
        self.notes.extend(other.notes);
        self
    }
}

/// All morphisms between objects with at most `bound` edges, grouped by
/// `(dom, cod)` index.
struct Homs {
    objects: Vec<FatObject>,
    all: Vec<Vec<FatMorphism>>,
}

impl Homs {
    fn new(bound: usize) -> Self {
        let objects = enumerate_objects(bound);
        let all = objects
            .iter()
            .flat_map(|x| objects.iter().map(move |y| enumerate_hom_fat(x, y, FatClass::All)))
            .collect();
        Homs { objects, all }
    }

    fn hom(&self, x: usize, y: usize) -> &[FatMorphism] {
        &self.all[x * self.objects.len() + y]
    }
}

/// `g ∘ f` on tops.
fn then(f: &FatMorphism, g: &FatMorphism) -> Vec<usize> {
    f.top().iter().map(|&v| g.top()[v]).collect()
}

/// Every morphism between objects with at most `bound` edges has exactly
/// one factorization `inert ∘ active` among all middle objects within the
/// bound, and it is the computed one; every square from an active to an
/// inert morphism has exactly one diagonal.
pub fn check_factorization_system(bound: usize) -> Verdict {
    let homs = Homs::new(bound);
    let n = homs.objects.len();
    let factorizations = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut v = Verdict::new("factorization");
            for z in 0..n {
                for f in homs.hom(x, z) {
                    v.checked += 1;
                    let mut found = Vec::new();
                    for w in 0..n {
                        for a in homs.hom(x, w).iter().filter(|a| a.is_active()) {
                            for i in homs.hom(w, z).iter().filter(|i| i.is_inert()) {
                                if then(a, i) == f.top() {
                                    found.push((a, i));
                                }
                            }
                        }
                    }
                    let (ca, ci) = f.active_inert_factor();
                    if found.len() != 1 || *found[0].0 != ca || *found[0].1 != ci {
                        v.fail(|| format!("{f} has {} factorizations", found.len()));
                    }
                }
            }
            v
        })
        .reduce(|| Verdict::new("factorization"), Verdict::merge);
    let squares = (0..n)
        .into_par_iter()
        .map(|ai| {
            let mut v = Verdict::new("lifting");
            for bi in 0..n {
                for a in homs.hom(ai, bi).iter().filter(|a| a.is_active()) {
                    for di in 0..n {
                        for vm in homs.hom(bi, di) {
                            let va = then(a, vm);
                            for ci in 0..n {
                                for i in homs.hom(ci, di).iter().filter(|i| i.is_inert()) {
                                    for u in homs.hom(ai, ci) {
                                        if then(u, i) != va {
                                            continue;
                                        }
                                        v.checked += 1;
                                        let diagonals = homs
                                            .hom(bi, ci)
                                            .iter()
                                            .filter(|d| then(a, d) == u.top() && then(d, i) == vm.top())
                                            .count();
                                        if diagonals != 1 {
                                            v.fail(|| format!("square {a} / {i} with {u}, {vm} has {diagonals} diagonals"));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
            v
        })
        .reduce(|| Verdict::new("lifting"), Verdict::merge);
    let mut out = Verdict::new("factorization system");
    out.notes.push(format!("{} morphisms, {} squares", factorizations.checked, squares.checked));
    out.merge(factorizations).merge(squares)
}

/// φ and ψ are inverse on objects with at most `object_bound` edges and on
/// inert morphisms between objects with at most `morphism_bound` edges, and
/// hom-sets between objects with at most `hom_bound` edges count the
/// functors between the relative semiordinals, and between the free
/// relative semicategories on ψ.
pub fn check_descent(object_bound: usize, morphism_bound: usize, hom_bound: usize) -> Result<Verdict> {
    let mut v = Verdict::new("descent");
    for x in enumerate_objects(object_bound) {
        v.checked += 1;
        let alpha = linear_relgraph(x.marking());
        if phi(&psi(&x))? != x {
            v.fail(|| format!("φψ(\"{x}\") differs"));
        }
        if psi(&phi(&alpha)?) != alpha {
            v.fail(|| format!("ψφ of the linear graph \"{x}\" differs"));
        }
    }
    let objects = enumerate_objects(morphism_bound);
    for x in &objects {
        for y in &objects {
            let inert = enumerate_hom_fat(x, y, FatClass::Inert);
            for f in &inert {
                v.checked += 1;
                if phi_on_morphism(&psi_on_morphism(f)?, &psi(x), &psi(y))? != *f {
                    v.fail(|| format!("φψ({f}) differs"));
                }
            }
            let maps = enumerate_relgraph_maps(&psi(x), &psi(y));
            if maps.len() != inert.len() {
                v.fail(|| format!("{} graph maps \"{x}\" → \"{y}\" but {} inert morphisms", maps.len(), inert.len()));
            }
            for g in maps {
                v.checked += 1;
                if psi_on_morphism(&phi_on_morphism(&g, &psi(x), &psi(y))?)? != g {
                    v.fail(|| format!("ψφ of {:?} differs", g.vertex_map));
                }
            }
        }
    }
    let objects = enumerate_objects(hom_bound);
    for x in &objects {
        for y in &objects {
            v.checked += 1;
            let homs = enumerate_hom_fat(x, y, FatClass::All).len();
            let functors = count_functors(&rso(x), &rso(y));
            let free = free_functor_count(x, y)?;
            if homs != functors || homs != free {
                v.fail(|| format!("\"{x}\" → \"{y}\": {homs} morphisms, {functors} functors, {free} free functors"));
            }
        }
    }
    Ok(v)
}

/// Cartesianness checks on every relative graph with at most `max_vertices`
/// vertices and `max_edges` edges, at lengths up to `bound`.
pub fn check_cartesian_universe(max_vertices: usize, max_edges: usize, bound: usize) -> Result<Verdict> {
    let universe = relgraph_universe(max_vertices, max_edges);
    let reports = universe
        .par_iter()
        .map(|x| check_cartesian(x, bound).map(|r| (x, r)))
        .collect::<Result<Vec<_>>>()?;
    let mut v = Verdict::new("cartesian");
    for (x, r) in reports {
        for c in r.checks {
            v.checked += 1;
            if !c.passed {
                v.fail(|| format!("{x}: {} at length {}: {}", c.name, c.length, c.witness));
            }
        }
    }
    v.notes.push(format!("{} graphs", universe.len()));
    Ok(v)
}

/// Every generic map built by the string and arity constructors with paths
/// of length at most `bound` has a unique filler for every square into the
/// universe of relative graphs with at most `max_vertices` vertices and
/// `max_edges` edges; the standard non-generic map is caught.
pub fn check_genericity(max_vertices: usize, max_edges: usize, bound: usize) -> Result<Verdict> {
    let universe = relgraph_universe(max_vertices, max_edges);
    let mut v = Verdict::new("generic");
    let mut maps = Vec::new();
    for sigma in [Uniform::Flat, Uniform::Sharp] {
        for n in 1..=bound {
            let g = generic_factor_string(sigma, n)?;
            maps.push((format!("maximal path {sigma:?} {n}"), g.generator, g.middle, g.generic));
        }
    }
    for spec in arity_specs(bound) {
        let a = arity_of(&spec);
        maps.push((
            format!("arity ε={} {:?}", spec.epsilon, spec.lengths),
            a.generator,
            a.middle,
            a.generic,
        ));
    }
    for (name, generator, middle, left) in &maps {
        let sweep = generic_sweep(generator, middle, left, &universe, bound);
        v.checked += sweep.squares;
        if !sweep.passed() {
            v.fail(|| format!("{name}: {} bad squares, e.g. {:?}", sweep.failure_count, sweep.failures.first()));
        }
    }
    let (a, b, left) = non_generic_example();
    let sweep = generic_sweep(&a, &b, &left, &universe, bound);
    if sweep.passed() {
        v.fail(|| "the non-generic example passed".into());
    }
    v.notes.push(format!(
        "{} generic maps, {} graphs; non-generic example has {} bad squares",
        maps.len(),
        universe.len(),
        sweep.failure_count
    ));
    Ok(v)
}

/// No morphism lowers the degree (edges, then marks), and every object has
/// only its identity as endomorphism.
pub fn check_directness(bound: usize) -> Verdict {
    let objects = enumerate_objects(bound);
    let mut v = Verdict::new("directness");
    for x in &objects {
        for y in &objects {
            v.checked += 1;
            let hom = enumerate_hom_fat(x, y, FatClass::All);
            if x.degree() > y.degree() && !hom.is_empty() {
                v.fail(|| format!("\"{x}\" → \"{y}\" lowers the degree yet has {} morphisms", hom.len()));
            }
            if x == y && (hom.len() != 1 || !hom[0].is_identity()) {
                v.fail(|| format!("\"{x}\" has {} endomorphisms", hom.len()));
            }
        }
    }
    v
}

/// For every monotone map between ordinals up to `[bound]`, the two
/// factorizations agree exactly when the map never skips a vertex.
pub fn check_contraction(bound: usize) -> Verdict {
    let mut v = Verdict::new("contraction");
    for m in 0..=bound {
        for n in 0..=bound {
            for f in enumerate_hom(Ordinal(m), Ordinal(n), MapClass::All) {
                v.checked += 1;
                let steps = f.images().windows(2).all(|w| w[1] <= w[0] + 1);
                let agree = f.epi_mono_factor() == f.active_inert_factor();
                if steps != agree {
                    v.fail(|| format!("{f}: steps of at most one {steps}, factorizations agree {agree}"));
                }
            }
        }
    }
    v
}
