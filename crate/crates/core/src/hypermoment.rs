//! Segal's category Γ, the cardinality functor from fat Delta, and checkers
//! for the hypermoment clauses on bounded truncations.
//!
//! An object of Γ is a finite set `{0, .., n-1}`. A map `m → n` sends each
//! element of the source to a subset of the target, with the subsets
//! pairwise disjoint. It is active if the subsets cover the target and inert
//! if they are all singletons.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fat::{enumerate_hom_fat, enumerate_objects, pushout_active_inert, verify_pushout, FatClass, FatMorphism, FatObject};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GammaObject {
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GammaMap {
    dom: GammaObject,
    cod: GammaObject,
    assignment: Vec<Vec<usize>>,
}

impl GammaMap {
    /// Subsets are sorted on the way in.
    pub fn new(dom: GammaObject, cod: GammaObject, mut assignment: Vec<Vec<usize>>) -> Result<Self> {
        if assignment.len() != dom.size {
            return Err(Error::InvalidMap(format!(
                "{} subsets for a source of size {}",
                assignment.len(),
                dom.size
            )));
        }
        let mut seen = vec![false; cod.size];
        for subset in &mut assignment {
            subset.sort_unstable();
            for &j in subset.iter() {
                if j >= cod.size {
                    return Err(Error::IndexOutOfRange {
                        what: "target element",
                        index: j,
                        valid: format!("0..{}", cod.size),
                    });
                }
                if std::mem::replace(&mut seen[j], true) {
                    return Err(Error::InvalidMap(format!("element {j} is assigned twice")));
                }
            }
        }
        Ok(GammaMap { dom, cod, assignment })
    }

    pub fn identity(x: GammaObject) -> Self {
        GammaMap {
            dom: x,
            cod: x,
            assignment: (0..x.size).map(|i| vec![i]).collect(),
        }
    }

    /// Rebuilds a map from the owner of each target element.
    pub fn from_owners(dom: GammaObject, owners: &[Option<usize>]) -> Result<Self> {
        let mut assignment = vec![Vec::new(); dom.size];
        for (j, owner) in owners.iter().enumerate() {
            if let Some(i) = *owner {
                assignment
                    .get_mut(i)
                    .ok_or_else(|| Error::IndexOutOfRange {
                        what: "source element",
                        index: i,
                        valid: format!("0..{}", dom.size),
                    })?
                    .push(j);
            }
        }
        GammaMap::new(dom, GammaObject { size: owners.len() }, assignment)
    }

    pub fn dom(&self) -> GammaObject {
        self.dom
    }

    pub fn cod(&self) -> GammaObject {
        self.cod
    }

    pub fn assignment(&self) -> &[Vec<usize>] {
        &self.assignment
    }

    /// For each target element, the source element whose subset holds it.
    /// This is the pointed map in the other direction.
    pub fn owners(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.cod.size];
        for (i, subset) in self.assignment.iter().enumerate() {
            for &j in subset {
                out[j] = Some(i);
            }
        }
        out
    }

    /// `self ∘ f`: each element goes to the union of the images of its
    /// subset under `f`.
    pub fn compose(&self, f: &GammaMap) -> Result<GammaMap> {
        if f.cod != self.dom {
            return Err(Error::CompositionMismatch {
                cod: f.cod.size.to_string(),
                dom: self.dom.size.to_string(),
            });
        }
        let assignment = f
            .assignment
            .iter()
            .map(|subset| {
                let mut out: Vec<usize> = subset.iter().flat_map(|&j| self.assignment[j].iter().copied()).collect();
                out.sort_unstable();
                out
            })
            .collect();
        Ok(GammaMap {
            dom: f.dom,
            cod: self.cod,
            assignment,
        })
    }

    pub fn is_active(&self) -> bool {
        self.assignment.iter().map(Vec::len).sum::<usize>() == self.cod.size
    }

    pub fn is_inert(&self) -> bool {
        self.assignment.iter().all(|s| s.len() == 1)
    }
}

impl fmt::Display for GammaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {:?}", self.dom.size, self.cod.size, self.assignment)
    }
}

/// Every map `m → n` of Γ, ordered by owner vectors.
pub fn enumerate_gamma(m: usize, n: usize) -> Vec<GammaMap> {
    let dom = GammaObject { size: m };
    let mut out = Vec::new();
    let mut owners = vec![None; n];
    loop {
        out.push(GammaMap::from_owners(dom, &owners).expect("owners are in range"));
        // odometer over None, Some(0), .., Some(m - 1)
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            owners[k] = match owners[k] {
                None if m > 0 => Some(0),
                Some(i) if i + 1 < m => Some(i + 1),
                _ => None,
            };
            if owners[k].is_some() {
                break;
            }
            k += 1;
        }
    }
}

/// The number of edges.
pub fn gamma_object(x: &FatObject) -> GammaObject {
    GammaObject { size: x.edges() }
}

/// Edge `i` of the domain goes to the codomain edges in
/// `[top[i], top[i+1])`.
pub fn gamma_morphism(f: &FatMorphism) -> GammaMap {
    let top = f.top();
    GammaMap {
        dom: gamma_object(f.dom()),
        cod: gamma_object(f.cod()),
        assignment: top.windows(2).map(|w| (w[0]..w[1]).collect()).collect(),
    }
}

/// Outcome of one checker: how many instances were examined and the ones
/// that failed. `observations` holds counts that are recorded but not
/// asserted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub bound: usize,
    pub checked: usize,
    pub counterexamples: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<(String, usize)>,
}

impl SuiteReport {
    fn new(suite: &str, bound: usize) -> Self {
        SuiteReport {
            suite: suite.into(),
            bound,
            ..SuiteReport::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn all_morphisms(bound: usize) -> impl Iterator<Item = FatMorphism> {
    let objects = enumerate_objects(bound);
    let pairs: Vec<(FatObject, FatObject)> = objects
        .iter()
        .flat_map(|x| objects.iter().map(move |y| (x.clone(), y.clone())))
        .collect();
    pairs.into_iter().flat_map(|(x, y)| enumerate_hom_fat(&x, &y, FatClass::All))
}

/// Active morphisms go to active maps of Γ and inert ones to inert maps.
pub fn check_gamma_preserves(bound: usize) -> SuiteReport {
    let mut report = SuiteReport::new("gamma", bound);
    for f in all_morphisms(bound) {
        report.checked += 1;
        let g = gamma_morphism(&f);
        if f.is_active() && !g.is_active() {
            report.counterexamples.push(format!("active {f} goes to {g}"));
        }
        if f.is_inert() && !g.is_inert() {
            report.counterexamples.push(format!("inert {f} goes to {g}"));
        }
    }
    report
}

/// The inclusion of edge `j` of `x`, from the unmarked edge.
pub fn inert_unit_lift(x: &FatObject, j: usize) -> Result<FatMorphism> {
    if j >= x.edges() {
        return Err(Error::IndexOutOfRange {
            what: "edge",
            index: j,
            valid: format!("0..{}", x.edges()),
        });
    }
    FatMorphism::new(FatObject::flat(1), x.clone(), vec![j, j + 1])
}

fn units() -> (FatObject, FatObject) {
    (FatObject::flat(1), FatObject::sharp(1))
}

/// For every edge `j` of every object: the lift exists, is inert and picks
/// out `{j}` under Γ; it is the only such inert map from `"u"`; there is one
/// from `"m"` exactly when `j` is marked, and then it restricts to the lift
/// along `"u" → "m"`.
pub fn check_unit_lifts(bound: usize) -> SuiteReport {
    let mut report = SuiteReport::new("lifts", bound);
    let (u, m) = units();
    let forget = FatMorphism::new(u.clone(), m.clone(), vec![0, 1]).expect("u → m is a morphism");
    let mut doubled = 0;
    for x in enumerate_objects(bound) {
        for j in 0..x.edges() {
            report.checked += 1;
            let lift = match inert_unit_lift(&x, j) {
                Ok(l) => l,
                Err(e) => {
                    report.counterexamples.push(format!("no lift of edge {j} of \"{x}\": {e}"));
                    continue;
                }
            };
            let picks = |f: &FatMorphism| gamma_morphism(f).assignment == [vec![j]];
            if !lift.is_inert() || !picks(&lift) {
                report.counterexamples.push(format!("lift {lift} is not an inert lift of {j}"));
            }
            let from_u: Vec<_> = enumerate_hom_fat(&u, &x, FatClass::Inert).into_iter().filter(picks).collect();
            if from_u != [lift.clone()] {
                report
                    .counterexamples
                    .push(format!("edge {j} of \"{x}\" has {} inert lifts from \"u\"", from_u.len()));
            }
            let from_m: Vec<_> = enumerate_hom_fat(&m, &x, FatClass::Inert).into_iter().filter(picks).collect();
            if from_m.len() != usize::from(x.is_marked(j)) {
                report
                    .counterexamples
                    .push(format!("edge {j} of \"{x}\" has {} inert lifts from \"m\"", from_m.len()));
            }
            if let Some(l) = from_m.first() {
                doubled += 1;
                if l.compose(&forget).ok().as_ref() != Some(&lift) {
                    report
                        .counterexamples
                        .push(format!("lift {l} does not restrict to {lift}"));
                }
            }
        }
    }
    report.observations.push(("edges with lifts from both units".into(), doubled));
    report
}

/// Every active morphism into `unit` from an object with at most `bound`
/// edges is the identity, and each has exactly one inert section.
pub fn check_unit_condition(unit: &FatObject, bound: usize) -> Result<SuiteReport> {
    let (u, m) = units();
    if *unit != u && *unit != m {
        return Err(Error::Precondition(format!("\"{unit}\" is not a unit")));
    }
    let mut report = SuiteReport::new("units", bound);
    for x in enumerate_objects(bound) {
        for a in enumerate_hom_fat(&x, unit, FatClass::Active) {
            report.checked += 1;
            if !a.is_identity() {
                report.counterexamples.push(format!("active {a} is not the identity"));
            }
            let sections = enumerate_hom_fat(unit, &x, FatClass::Inert)
                .into_iter()
                .filter(|s| a.compose(s).is_ok_and(|c| c.is_identity()))
                .count();
            if sections != 1 {
                report.counterexamples.push(format!("active {a} has {sections} inert sections"));
            }
        }
    }
    Ok(report)
}

/// Active morphisms into `x` from each unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitalityRow {
    pub object: FatObject,
    pub from_u: usize,
    pub from_m: usize,
}

/// Counts of active morphisms from the units into every object, recorded
/// without any claim about them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitalityReport {
    pub bound: usize,
    pub rows: Vec<UnitalityRow>,
    /// Objects with both kinds of edge that receive no active map from
    /// either unit.
    pub mixed_without_active_unit: usize,
}

pub fn unitality_report(bound: usize) -> UnitalityReport {
    let (u, m) = units();
    let rows: Vec<UnitalityRow> = enumerate_objects(bound)
        .into_iter()
        .map(|x| UnitalityRow {
            from_u: enumerate_hom_fat(&u, &x, FatClass::Active).len(),
            from_m: enumerate_hom_fat(&m, &x, FatClass::Active).len(),
            object: x,
        })
        .collect();
    let mixed_without_active_unit = rows
        .iter()
        .filter(|r| r.object.marked_count() > 0 && r.object.marked_count() < r.object.edges())
        .filter(|r| r.from_u + r.from_m == 0)
        .count();
    UnitalityReport {
        bound,
        rows,
        mixed_without_active_unit,
    }
}

/// For all objects `x, z`, composing with the inert maps from `""`, `"u"`
/// and `"m"` into `x` is a bijection from inert maps `x → z` onto the
/// families of inert maps into `z` compatible along inert maps between those
/// three objects.
pub fn segal_core_density_check(bound: usize) -> SuiteReport {
    let mut report = SuiteReport::new("density", bound);
    let (u, m) = units();
    let core = [FatObject::default(), u, m];
    let objects = enumerate_objects(bound);
    for x in &objects {
        // the elements of the cover and the maps between them
        let elements: Vec<FatMorphism> = core
            .iter()
            .flat_map(|c| enumerate_hom_fat(c, x, FatClass::Inert))
            .collect();
        let mut relations = Vec::new();
        for (a, ea) in elements.iter().enumerate() {
            for (b, eb) in elements.iter().enumerate() {
                for h in enumerate_hom_fat(ea.dom(), eb.dom(), FatClass::Inert) {
                    if eb.compose(&h).ok().as_ref() == Some(ea) {
                        relations.push((a, b, h));
                    }
                }
            }
        }
        for z in &objects {
            report.checked += 1;
            let choices: Vec<Vec<FatMorphism>> = elements
                .iter()
                .map(|e| enumerate_hom_fat(e.dom(), z, FatClass::Inert))
                .collect();
            let families = count_families(&choices, &relations);
            let mut images: HashMap<Vec<FatMorphism>, usize> = HashMap::new();
            let maps = enumerate_hom_fat(x, z, FatClass::Inert);
            for f in &maps {
                let family: Vec<FatMorphism> = elements.iter().map(|e| f.compose(e).expect("e lands in x")).collect();
                *images.entry(family).or_default() += 1;
            }
            if images.len() != maps.len() || families != maps.len() {
                report.counterexamples.push(format!(
                    "\"{x}\" → \"{z}\": {} inert maps, {} distinct families among them, {families} compatible families",
                    maps.len(),
                    images.len()
                ));
            }
        }
    }
    report
}

/// Number of ways to pick one map per element so that `pick[b] ∘ h ==
/// pick[a]` for every relation `(a, b, h)`.
fn count_families(choices: &[Vec<FatMorphism>], relations: &[(usize, usize, FatMorphism)]) -> usize {
    fn go(k: usize, choices: &[Vec<FatMorphism>], relations: &[(usize, usize, FatMorphism)], pick: &mut Vec<usize>) -> usize {
        if k == choices.len() {
            return 1;
        }
        let mut total = 0;
        for c in 0..choices[k].len() {
            pick.push(c);
            let fits = relations.iter().filter(|(a, b, _)| a.max(b) == &k).all(|(a, b, h)| {
                choices[*b][pick[*b]].compose(h).ok().as_ref() == Some(&choices[*a][pick[*a]])
            });
            if fits {
                total += go(k + 1, choices, relations, pick);
            }
            pick.pop();
        }
        total
    }
    go(0, choices, relations, &mut Vec::new())
}

/// For every inert `f` and active `g` out of a common object, with all three
/// objects within `bound`, the computed pushout has an inert leg out of the
/// target of `g`, an active leg out of the target of `f`, and the universal
/// property against every object with at most `bound + 2` edges.
pub fn extensionality_check(bound: usize) -> SuiteReport {
    let mut report = SuiteReport::new("extensionality", bound);
    let objects = enumerate_objects(bound);
    let targets = enumerate_objects(bound + 2);
    let mut cocones = 0;
    for x in &objects {
        for y in &objects {
            for f in enumerate_hom_fat(x, y, FatClass::Inert) {
                for z in &objects {
                    for g in enumerate_hom_fat(x, z, FatClass::Active) {
                        report.checked += 1;
                        let po = match pushout_active_inert(&f, &g) {
                            Ok(po) => po,
                            Err(e) => {
                                report.counterexamples.push(format!("no pushout of {f} and {g}: {e}"));
                                continue;
                            }
                        };
                        if !po.u.is_inert() || !po.v.is_active() {
                            report
                                .counterexamples
                                .push(format!("pushout of {f} and {g} has legs {} and {}", po.u, po.v));
                        }
                        let verdict = verify_pushout(&f, &g, &po, &targets);
                        cocones += verdict.cocones;
                        report.counterexamples.extend(
                            verdict
                                .failures
                                .into_iter()
                                .map(|e| format!("pushout of {f} and {g}: {e}")),
                        );
                    }
                }
            }
        }
    }
    report.observations.push(("cocones".into(), cocones));
    report
}

/// Which checkers [`hypermoment_check`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Gamma,
    Lifts,
    Units,
    Density,
    Extensionality,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gamma" => Suite::Gamma,
            "lifts" => Suite::Lifts,
            "units" => Suite::Units,
            "density" => Suite::Density,
            "extensionality" => Suite::Extensionality,
            "all" => Suite::All,
            other => return Err(Error::Parse(format!("unknown suite `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypermomentReport {
    pub bound: usize,
    pub suites: Vec<SuiteReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitality: Option<UnitalityReport>,
}

impl HypermomentReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

/// Runs the selected checkers at `bound`. Extensionality runs at `bound`
/// too, which is expensive beyond 3.
pub fn hypermoment_check(bound: usize, suite: Suite) -> HypermomentReport {
    let on = |s: Suite| suite == Suite::All || suite == s;
    let mut suites = Vec::new();
    if on(Suite::Gamma) {
        suites.push(check_gamma_preserves(bound));
    }
    if on(Suite::Lifts) {
        suites.push(check_unit_lifts(bound));
    }
    let mut unitality = None;
    if on(Suite::Units) {
        let (u, m) = units();
        for unit in [u, m] {
            let mut r = check_unit_condition(&unit, bound).expect("a unit");
            r.suite = format!("units \"{unit}\"");
            suites.push(r);
        }
        unitality = Some(unitality_report(bound));
    }
    if on(Suite::Density) {
        suites.push(segal_core_density_check(bound));
    }
    if on(Suite::Extensionality) {
        suites.push(extensionality_check(bound));
    }
    HypermomentReport {
        bound,
        suites,
        unitality,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obj(s: &str) -> FatObject {
        s.parse().unwrap()
    }

    fn mor(dom: &str, cod: &str, top: &[usize]) -> FatMorphism {
        FatMorphism::new(obj(dom), obj(cod), top.to_vec()).unwrap()
    }

    #[test]
    fn sizes() {
        assert_eq!(gamma_object(&obj("")).size, 0);
        assert_eq!(gamma_object(&obj("um")).size, 2);
    }

    #[test]
    fn edge_spread_over_two_edges_is_active() {
        let g = gamma_morphism(&mor("u", "um", &[0, 2]));
        assert_eq!(g.assignment(), [vec![0, 1]]);
        assert!(g.is_active());
        assert!(!g.is_inert());
    }

    #[test]
    fn worked_active_map_covers() {
        let g = gamma_morphism(&mor("mu", "muu", &[0, 1, 3]));
        assert_eq!(g.assignment(), [vec![0], vec![1, 2]]);
        assert!(g.is_active());
    }

    #[test]
    fn owners_round_trip() {
        for m in 0..3 {
            for n in 0..3 {
                for g in enumerate_gamma(m, n) {
                    assert_eq!(GammaMap::from_owners(g.dom(), &g.owners()).unwrap(), g);
                }
            }
        }
        assert_eq!(enumerate_gamma(2, 3).len(), 27);
    }

    #[test]
    fn overlapping_subsets_are_rejected() {
        let two = GammaObject { size: 2 };
        assert!(GammaMap::new(two, two, vec![vec![0], vec![0, 1]]).is_err());
        assert!(GammaMap::new(two, two, vec![vec![2], vec![]]).is_err());
    }

    #[test]
    fn unit_lift_examples() {
        assert_eq!(inert_unit_lift(&obj("um"), 1).unwrap(), mor("u", "um", &[1, 2]));
        assert_eq!(inert_unit_lift(&obj("u"), 0).unwrap(), mor("u", "u", &[0, 1]));
        assert!(inert_unit_lift(&obj("um"), 2).is_err());
    }

    #[test]
    fn actives_from_units_into_uuu() {
        let r = unitality_report(3);
        let row = r.rows.iter().find(|r| r.object == obj("uuu")).unwrap();
        assert_eq!((row.from_u, row.from_m), (1, 0));
        let row = r.rows.iter().find(|r| r.object == obj("um")).unwrap();
        assert_eq!((row.from_u, row.from_m), (0, 0));
    }

    #[test]
    fn density_example() {
        let r = segal_core_density_check(3);
        assert!(r.passed(), "{:?}", r.counterexamples);
        assert_eq!(enumerate_hom_fat(&obj("uu"), &obj("uum"), FatClass::Inert).len(), 2);
    }

    #[test]
    fn small_suites_pass() {
        let r = hypermoment_check(2, Suite::All);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.suites.len(), 6);
    }
}
