//! Fat Delta in its epimorphism presentation.
//!
//! An object is an epimorphism `[m] ↠ [n]` of Δ, stored as the marking of the
//! edges of `[m]` it collapses and written as a string over `{u, m}`. A
//! morphism is a commuting square whose top is a mono of Δ; the bottom is
//! determined by the top, so only the top is stored.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::delta::{Ordinal, OrdinalMap};
use crate::error::{Error, Result};
use crate::relgraph::parse_marking;
use crate::semicat::{interval_pairs, linear_semicat, RelFunctor, RelSemiCategory};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FatObject {
    marking: Vec<bool>,
}

impl FatObject {
    pub fn new(marking: Vec<bool>) -> Self {
        FatObject { marking }
    }

    /// `[n]^♭`: nothing marked.
    pub fn flat(n: usize) -> Self {
        FatObject::new(vec![false; n])
    }

    /// `[n]^♯`: everything marked.
    pub fn sharp(n: usize) -> Self {
        FatObject::new(vec![true; n])
    }

    pub fn marking(&self) -> &[bool] {
        &self.marking
    }

    pub fn edges(&self) -> usize {
        self.marking.len()
    }

    pub fn is_marked(&self, i: usize) -> bool {
        self.marking[i]
    }

    pub fn marked_count(&self) -> usize {
        self.marking.iter().filter(|&&b| b).count()
    }

    /// `(edge count, marked count)`, compared lexicographically.
    pub fn degree(&self) -> (usize, usize) {
        (self.edges(), self.marked_count())
    }

    /// The epimorphism `[m] ↠ [m − k]` collapsing the marked edges.
    pub fn epi(&self) -> OrdinalMap {
        let mut images = Vec::with_capacity(self.edges() + 1);
        let mut v = 0;
        images.push(0);
        for &m in &self.marking {
            if !m {
                v += 1;
            }
            images.push(v);
        }
        OrdinalMap::from_parts_unchecked(Ordinal(self.edges()), Ordinal(v), images)
    }

    pub fn from_epi(e: &OrdinalMap) -> Result<Self> {
        if !e.is_epi() {
            return Err(Error::InvalidMap(format!("{e} is not an epimorphism")));
        }
        Ok(FatObject::new(e.images().windows(2).map(|w| w[0] == w[1]).collect()))
    }

    /// Concatenation of markings.
    pub fn vee(&self, other: &FatObject) -> FatObject {
        let mut marking = self.marking.clone();
        marking.extend_from_slice(&other.marking);
        FatObject::new(marking)
    }

    pub fn identity(&self) -> FatMorphism {
        FatMorphism {
            dom: self.clone(),
            cod: self.clone(),
            top: (0..=self.edges()).collect(),
        }
    }
}

impl Ord for FatObject {
    /// Edge count first, then lexicographic with `u < m`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.edges()
            .cmp(&other.edges())
            .then_with(|| self.marking.cmp(&other.marking))
    }
}

impl PartialOrd for FatObject {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FatObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &m in &self.marking {
            f.write_str(if m { "m" } else { "u" })?;
        }
        Ok(())
    }
}

impl FromStr for FatObject {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t
            .strip_prefix('"')
            .and_then(|t| t.strip_suffix('"'))
            .unwrap_or(t);
        Ok(FatObject::new(parse_marking(t)?))
    }
}

impl Serialize for FatObject {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FatObject {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Every object with at most `max_edges` edges, in canonical order.
pub fn enumerate_objects(max_edges: usize) -> Vec<FatObject> {
    (0..=max_edges).flat_map(objects_with_edges).collect()
}

/// The `2^m` objects with exactly `m` edges, `u < m` lexicographically.
pub fn objects_with_edges(m: usize) -> Vec<FatObject> {
    (0..1usize << m)
        .map(|bits| FatObject::new((0..m).map(|i| bits >> (m - 1 - i) & 1 == 1).collect()))
        .collect()
}

/// A morphism of fat Delta, determined by its top mono.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawFatMorphism")]
pub struct FatMorphism {
    dom: FatObject,
    cod: FatObject,
    top: Vec<usize>,
}

#[derive(Deserialize)]
struct RawFatMorphism {
    dom: FatObject,
    cod: FatObject,
    top: Vec<usize>,
}

impl TryFrom<RawFatMorphism> for FatMorphism {
    type Error = Error;

    fn try_from(raw: RawFatMorphism) -> Result<Self> {
        FatMorphism::new(raw.dom, raw.cod, raw.top)
    }
}

/// Selector for [`enumerate_hom_fat`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FatClass {
    All,
    Active,
    Inert,
}

impl FromStr for FatClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(FatClass::All),
            "active" => Ok(FatClass::Active),
            "inert" => Ok(FatClass::Inert),
            other => Err(Error::Parse(format!("unknown morphism class `{other}`"))),
        }
    }
}

/// Top strictly increasing, and every marked edge of `dom` lands on a run of
/// marked edges of `cod`.
pub fn is_morphism(dom: &FatObject, cod: &FatObject, top: &[usize]) -> bool {
    top.len() == dom.edges() + 1
        && top.iter().all(|&v| v <= cod.edges())
        && top.windows(2).all(|w| w[0] < w[1])
        && (0..dom.edges()).all(|i| !dom.is_marked(i) || (top[i]..top[i + 1]).all(|j| cod.is_marked(j)))
}

impl FatMorphism {
    pub fn new(dom: FatObject, cod: FatObject, top: Vec<usize>) -> Result<Self> {
        if !is_morphism(&dom, &cod, &top) {
            return Err(Error::InvalidMorphism(format!(
                "top {top:?} does not define a morphism \"{dom}\" -> \"{cod}\""
            )));
        }
        Ok(FatMorphism { dom, cod, top })
    }

    pub(crate) fn new_unchecked(dom: FatObject, cod: FatObject, top: Vec<usize>) -> Self {
        debug_assert!(is_morphism(&dom, &cod, &top));
        FatMorphism { dom, cod, top }
    }

    pub fn dom(&self) -> &FatObject {
        &self.dom
    }

    pub fn cod(&self) -> &FatObject {
        &self.cod
    }

    pub fn top(&self) -> &[usize] {
        &self.top
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.top.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// The top mono, a map of Δ₊.
    pub fn pi_domain(&self) -> OrdinalMap {
        OrdinalMap::from_parts_unchecked(Ordinal(self.dom.edges()), Ordinal(self.cod.edges()), self.top.clone())
    }

    /// The bottom map, a map of Δ.
    pub fn pi_codomain(&self) -> OrdinalMap {
        let section = self.canonical_section();
        self.bottom_via_section(&section)
            .expect("canonical section is a section")
    }

    /// Least preimage of each vertex under the domain epi.
    pub fn canonical_section(&self) -> Vec<usize> {
        let epi = self.dom.epi();
        let mut section = vec![usize::MAX; epi.cod().vertex_count()];
        for (v, &w) in epi.images().iter().enumerate() {
            if section[w] == usize::MAX {
                section[w] = v;
            }
        }
        section
    }

    /// `η₁ ∘ top ∘ s` for a given section `s` of the domain epi.
    pub fn bottom_via_section(&self, section: &[usize]) -> Result<OrdinalMap> {
        let dom_epi = self.dom.epi();
        let cod_epi = self.cod.epi();
        if section.len() != dom_epi.cod().vertex_count()
            || section
                .iter()
                .enumerate()
                .any(|(w, &v)| v > self.dom.edges() || dom_epi.apply(v) != w)
        {
            return Err(Error::Precondition(format!("{section:?} is not a section")));
        }
        let images = section.iter().map(|&v| cod_epi.apply(self.top[v])).collect();
        OrdinalMap::new(dom_epi.cod(), cod_epi.cod(), images)
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &FatMorphism) -> Result<FatMorphism> {
        if f.cod != self.dom {
            return Err(Error::CompositionMismatch {
                cod: format!("\"{}\"", f.cod),
                dom: format!("\"{}\"", self.dom),
            });
        }
        Ok(FatMorphism {
            dom: f.dom.clone(),
            cod: self.cod.clone(),
            top: f.top.iter().map(|&v| self.top[v]).collect(),
        })
    }

    /// Distance-preserving top.
    pub fn is_inert(&self) -> bool {
        self.top.windows(2).all(|w| w[1] == w[0] + 1)
    }

    /// Endpoint-preserving top, and each edge of the domain covers a block of
    /// codomain edges carrying its own mark.
    pub fn is_active(&self) -> bool {
        let last = self.dom.edges();
        self.top[0] == 0
            && self.top[last] == self.cod.edges()
            && (0..last).all(|i| (self.top[i]..self.top[i + 1]).all(|j| self.cod.is_marked(j) == self.dom.is_marked(i)))
    }

    /// The unique factorization `inert ∘ active`.
    pub fn active_inert_factor(&self) -> (FatMorphism, FatMorphism) {
        let start = self.top[0];
        let end = self.top[self.dom.edges()];
        let mut marking = Vec::with_capacity(end - start);
        for i in 0..self.dom.edges() {
            for _ in self.top[i]..self.top[i + 1] {
                marking.push(self.dom.is_marked(i));
            }
        }
        let middle = FatObject::new(marking);
        let active = FatMorphism::new_unchecked(
            self.dom.clone(),
            middle.clone(),
            self.top.iter().map(|&v| v - start).collect(),
        );
        let inert = FatMorphism::new_unchecked(middle, self.cod.clone(), (start..=end).collect());
        (active, inert)
    }
}

impl fmt::Display for FatMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\" -> \"{}\" top {:?}", self.dom, self.cod, self.top)
    }
}

impl FromStr for FatMorphism {
    type Err = Error;

    /// JSON `{"dom":..,"cod":..,"top":[..]}`.
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_str(s.trim()).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `flat` and `sharp` on a mono of Δ₊, with the mono as top.
pub fn flat_on_mono(f: &OrdinalMap) -> Result<FatMorphism> {
    on_mono(f, FatObject::flat)
}

pub fn sharp_on_mono(f: &OrdinalMap) -> Result<FatMorphism> {
    on_mono(f, FatObject::sharp)
}

fn on_mono(f: &OrdinalMap, object: fn(usize) -> FatObject) -> Result<FatMorphism> {
    if !f.is_mono() {
        return Err(Error::Precondition(format!("{f} is not a mono")));
    }
    FatMorphism::new(object(f.dom().n()), object(f.cod().n()), f.images().to_vec())
}

/// Every morphism `dom → cod` in `class`, lexicographic in the top.
pub fn enumerate_hom_fat(dom: &FatObject, cod: &FatObject, class: FatClass) -> Vec<FatMorphism> {
    let mut out = Vec::new();
    let len = dom.edges() + 1;
    if len > cod.edges() + 1 {
        return out;
    }
    let mut top = Vec::with_capacity(len);
    increasing(len, cod.edges(), &mut top, &mut |top| {
        if !is_morphism(dom, cod, top) {
            return;
        }
        let f = FatMorphism::new_unchecked(dom.clone(), cod.clone(), top.to_vec());
        let keep = match class {
            FatClass::All => true,
            FatClass::Active => f.is_active(),
            FatClass::Inert => f.is_inert(),
        };
        if keep {
            out.push(f);
        }
    });
    out
}

fn increasing(len: usize, max: usize, prefix: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if prefix.len() == len {
        emit(prefix);
        return;
    }
    let floor = prefix.last().map_or(0, |&v| v + 1);
    // leave room for the remaining entries
    let remaining = len - prefix.len() - 1;
    if floor + remaining > max {
        return;
    }
    for v in floor..=max - remaining {
        prefix.push(v);
        increasing(len, max, prefix, emit);
        prefix.pop();
    }
}

/// The arrows of the usual picture of the objects with at most `max_edges`
/// edges: active or inert morphisms between distinct objects that add at
/// most one edge and at most one mark.
pub fn elementary_arrows(max_edges: usize) -> Vec<FatMorphism> {
    let objects = enumerate_objects(max_edges);
    let mut out = Vec::new();
    for x in &objects {
        for y in &objects {
            if x == y || y.edges() > x.edges() + 1 || y.marked_count() > x.marked_count() + 1 {
                continue;
            }
            out.extend(
                enumerate_hom_fat(x, y, FatClass::All)
                    .into_iter()
                    .filter(|f| f.is_active() || f.is_inert()),
            );
        }
    }
    out
}

/// Pushout of an inert `f: X → Y` and an active `g: X → Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FatPushout {
    pub corner: FatObject,
    /// Inert leg `Z → corner`.
    pub u: FatMorphism,
    /// Active leg `Y → corner`.
    pub v: FatMorphism,
}

/// Substitutes the block structure of `g` into the interval of `Y` hit by
/// `f`: each edge `a + i` of `Y` is replaced by as many copies of itself as
/// `g` stretches edge `i`.
pub fn pushout_active_inert(f: &FatMorphism, g: &FatMorphism) -> Result<FatPushout> {
    if f.dom != g.dom {
        return Err(Error::Precondition("pushout legs have different domains".into()));
    }
    if !f.is_inert() {
        return Err(Error::Precondition(format!("{f} is not inert")));
    }
    if !g.is_active() {
        return Err(Error::Precondition(format!("{g} is not active")));
    }
    let m = f.dom.edges();
    let a = f.top[0];
    let y = &f.cod;
    let mut marking = y.marking[..a].to_vec();
    for i in 0..m {
        for _ in g.top[i]..g.top[i + 1] {
            marking.push(y.is_marked(a + i));
        }
    }
    marking.extend_from_slice(&y.marking[a + m..]);
    let corner = FatObject::new(marking);
    let stretch = g.cod.edges() - m;
    let u_top = (0..=g.cod.edges()).map(|v| v + a).collect();
    let mut v_top: Vec<usize> = (0..a).collect();
    v_top.extend(g.top.iter().map(|&t| t + a));
    v_top.extend((a + m + 1..=y.edges()).map(|t| t + stretch));
    Ok(FatPushout {
        u: FatMorphism::new(g.cod.clone(), corner.clone(), u_top)?,
        v: FatMorphism::new(y.clone(), corner.clone(), v_top)?,
        corner,
    })
}

/// Outcome of checking a pushout square against every cocone into a list
/// of targets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoconeVerdict {
    pub cocones: usize,
    /// Cocones with no mediating map, or more than one.
    pub failures: Vec<String>,
}

impl CoconeVerdict {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `(v, u)` is a pushout of the span `(f, g)` relative to the
/// given targets: every cocone `(p: Y → W, q: Z → W)` with `p f = q g`
/// factors through the corner by exactly one map.
pub fn verify_pushout(f: &FatMorphism, g: &FatMorphism, po: &FatPushout, targets: &[FatObject]) -> CoconeVerdict {
    let mut cocones = 0;
    let mut failures = Vec::new();
    for w in targets {
        let mut mediated: HashMap<(Vec<usize>, Vec<usize>), usize> = HashMap::new();
        for h in enumerate_hom_fat(&po.corner, w, FatClass::All) {
            let p = h.compose(&po.v).expect("v lands in the corner");
            let q = h.compose(&po.u).expect("u lands in the corner");
            *mediated.entry((p.top, q.top)).or_default() += 1;
        }
        for p in enumerate_hom_fat(&f.cod, w, FatClass::All) {
            let pf = p.compose(f).expect("p starts at Y");
            for q in enumerate_hom_fat(&g.cod, w, FatClass::All) {
                if q.compose(g).expect("q starts at Z").top != pf.top {
                    continue;
                }
                cocones += 1;
                let count = mediated.remove(&(p.top.clone(), q.top.clone())).unwrap_or(0);
                if count != 1 {
                    failures.push(format!(
                        "cocone into \"{w}\" with tops {:?}, {:?} has {count} mediating maps",
                        p.top, q.top
                    ));
                }
            }
        }
        // every mediating map yields a cocone, so leftovers would mean the
        // square itself does not commute
        for ((p, q), _) in mediated {
            failures.push(format!("map out of the corner into \"{w}\" gives non-cocone {p:?}, {q:?}"));
        }
    }
    CoconeVerdict { cocones, failures }
}

/// The relative semiordinal of `x`: the linear semicategory on `[m]` with
/// `i → j` marked iff every edge between them is marked.
pub fn rso(x: &FatObject) -> RelSemiCategory {
    let n = x.edges();
    let marked = interval_pairs(n)
        .into_iter()
        .map(|(i, j)| (i..j).all(|e| x.is_marked(e)))
        .collect();
    RelSemiCategory::unchecked(linear_semicat(n), marked).expect("one bit per interval")
}

/// Index of the interval `i → j` in the morphism list of `rso` on `[n]`.
pub fn interval_index(n: usize, i: usize, j: usize) -> usize {
    let len = j - i;
    // intervals of length l number n + 1 - l
    let before: usize = (1..len).map(|l| n + 1 - l).sum();
    before + i
}

/// Precomposition with the top, as a functor `rso(dom) → rso(cod)`.
pub fn rso_on_morphism(f: &FatMorphism) -> RelFunctor {
    let n = f.cod.edges();
    RelFunctor {
        object_map: f.top.clone(),
        morphism_map: interval_pairs(f.dom.edges())
            .into_iter()
            .map(|(i, j)| interval_index(n, f.top[i], f.top[j]))
            .collect(),
    }
}

/// Inverse of [`rso_on_morphism`] on functors between relative semiordinals.
pub fn morphism_of_functor(dom: &FatObject, cod: &FatObject, functor: &RelFunctor) -> Result<FatMorphism> {
    FatMorphism::new(dom.clone(), cod.clone(), functor.object_map.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semicat::enumerate_functors;

    fn obj(s: &str) -> FatObject {
        s.parse().unwrap()
    }

    fn mor(dom: &str, cod: &str, top: &[usize]) -> FatMorphism {
        FatMorphism::new(obj(dom), obj(cod), top.to_vec()).unwrap()
    }

    fn map(dom: usize, cod: usize, images: &[usize]) -> OrdinalMap {
        OrdinalMap::new(Ordinal(dom), Ordinal(cod), images.to_vec()).unwrap()
    }

    #[test]
    fn epi_round_trips() {
        assert_eq!(obj("").epi(), OrdinalMap::identity(Ordinal(0)));
        assert_eq!(obj("mu").epi(), map(2, 1, &[0, 0, 1]));
        assert_eq!(FatObject::from_epi(&map(3, 1, &[0, 0, 0, 1])).unwrap(), obj("mmu"));
        assert!(FatObject::from_epi(&map(1, 2, &[0, 2])).is_err());
        for x in enumerate_objects(5) {
            assert_eq!(FatObject::from_epi(&x.epi()).unwrap(), x);
        }
    }

    #[test]
    fn morphism_validity() {
        assert!(is_morphism(&obj("m"), &obj("um"), &[1, 2]));
        assert!(!is_morphism(&obj("m"), &obj("um"), &[0, 1]));
        assert!(is_morphism(&obj("u"), &obj("m"), &[0, 1]));
        assert!(!is_morphism(&obj("u"), &obj("uu"), &[1, 1]));
        let f = mor("mu", "mmu", &[0, 1, 3]);
        assert_eq!(f.pi_codomain(), map(1, 1, &[0, 1]));
        assert_eq!(f.pi_domain(), map(2, 3, &[0, 1, 3]));
    }

    #[test]
    fn bottom_is_independent_of_section() {
        for x in enumerate_objects(3) {
            for y in enumerate_objects(3) {
                for f in enumerate_hom_fat(&x, &y, FatClass::All) {
                    let epi = x.epi();
                    let fibres: Vec<Vec<usize>> = (0..=epi.cod().n())
                        .map(|w| (0..=x.edges()).filter(|&v| epi.apply(v) == w).collect())
                        .collect();
                    let expected = f.pi_codomain();
                    // every choice of section
                    let mut section = vec![0; fibres.len()];
                    let mut count = 0;
                    loop {
                        let s: Vec<usize> = section.iter().enumerate().map(|(w, &k)| fibres[w][k]).collect();
                        assert_eq!(f.bottom_via_section(&s).unwrap(), expected);
                        // the square commutes
                        assert_eq!(
                            y.epi().compose(&f.pi_domain()).unwrap(),
                            expected.compose(&epi).unwrap()
                        );
                        count += 1;
                        let mut k = 0;
                        while k < section.len() {
                            section[k] += 1;
                            if section[k] < fibres[k].len() {
                                break;
                            }
                            section[k] = 0;
                            k += 1;
                        }
                        if k == section.len() {
                            break;
                        }
                    }
                    assert!(count >= 1);
                }
            }
        }
    }

    #[test]
    fn hom_counts() {
        assert_eq!(enumerate_hom_fat(&obj("u"), &obj("um"), FatClass::All).len(), 3);
        assert_eq!(enumerate_hom_fat(&obj("m"), &obj("um"), FatClass::All).len(), 1);
        assert_eq!(enumerate_hom_fat(&obj("m"), &obj("u"), FatClass::All).len(), 0);
        let names: Vec<String> = enumerate_objects(1).iter().map(|x| x.to_string()).collect();
        assert_eq!(names, ["", "u", "m"]);
    }

    #[test]
    fn classes() {
        assert!(!mor("mu", "mmu", &[0, 1, 3]).is_active());
        assert!(mor("mu", "muu", &[0, 1, 3]).is_active());
        let id = obj("mum").identity();
        assert!(id.is_active() && id.is_inert());
    }

    #[test]
    fn factorization_example() {
        let f = mor("mu", "mmu", &[0, 1, 3]);
        let (a, i) = f.active_inert_factor();
        assert_eq!(a.cod(), &obj("muu"));
        assert_eq!(a.top(), &[0, 1, 3]);
        assert_eq!(i.top(), &[0, 1, 2, 3]);
        assert_eq!(a.pi_codomain(), map(1, 2, &[0, 2]));
        assert_eq!(i.pi_codomain(), map(2, 1, &[0, 0, 1]));
        assert_eq!(i.compose(&a).unwrap(), f);

        let g = mor("m", "umu", &[1, 2]);
        let (a, i) = g.active_inert_factor();
        assert!(a.is_identity());
        assert_eq!(i, g);
    }

    #[test]
    fn vee_and_inclusions() {
        assert_eq!(obj("u").vee(&obj("m")), obj("um"));
        assert_eq!(obj("").vee(&obj("mu")), obj("mu"));
        assert_eq!(obj("mm").vee(&obj("uuu")).epi(), map(5, 3, &[0, 0, 0, 1, 2, 3]));
        assert_eq!(FatObject::flat(2), obj("uu"));
        assert_eq!(FatObject::sharp(1), obj("m"));
        let d0 = OrdinalMap::face(Ordinal(1), 0).unwrap();
        let s = sharp_on_mono(&d0).unwrap();
        assert_eq!(s, mor("m", "mm", &[1, 2]));
        assert_eq!(s.pi_codomain(), OrdinalMap::identity(Ordinal(0)));
        assert!(flat_on_mono(&map(2, 1, &[0, 0, 1])).is_err());
    }

    #[test]
    fn degrees() {
        assert_eq!(obj("").degree(), (0, 0));
        assert_eq!(obj("um").degree(), (2, 1));
        let order: Vec<String> = enumerate_objects(2).iter().map(|x| x.to_string()).collect();
        assert_eq!(order, ["", "u", "m", "uu", "um", "mu", "mm"]);
    }

    #[test]
    fn pushout_examples() {
        let f = mor("u", "uu", &[1, 2]);
        let g = mor("u", "uu", &[0, 2]);
        let po = pushout_active_inert(&f, &g).unwrap();
        assert_eq!(po.corner, obj("uuu"));
        assert_eq!(po.u.top(), &[1, 2, 3]);
        assert_eq!(po.v.top(), &[0, 1, 3]);
        assert!(po.u.is_inert() && po.v.is_active());
        let targets = enumerate_objects(4);
        assert!(verify_pushout(&f, &g, &po, &targets).passed());

        let f = mor("m", "um", &[1, 2]);
        let g = mor("m", "mm", &[0, 2]);
        let po = pushout_active_inert(&f, &g).unwrap();
        assert_eq!(po.corner, obj("umm"));
        assert!(verify_pushout(&f, &g, &po, &targets).passed());

        let id = obj("u").identity();
        let f = mor("u", "mu", &[1, 2]);
        let po = pushout_active_inert(&f, &id).unwrap();
        assert_eq!((po.corner.clone(), po.u.clone()), (obj("mu"), f.clone()));
        assert!(po.v.is_identity());
        assert!(pushout_active_inert(&g, &f).is_err());
    }

    #[test]
    fn wrong_corner_fails_cocone_check() {
        let f = mor("u", "uu", &[1, 2]);
        let g = mor("u", "uu", &[0, 2]);
        let mut po = pushout_active_inert(&f, &g).unwrap();
        // a cocone that is not universal: corner with an extra edge
        po.corner = obj("uuuu");
        po.u = mor("uu", "uuuu", &[1, 2, 3]);
        po.v = mor("uu", "uuuu", &[0, 1, 3]);
        assert!(!verify_pushout(&f, &g, &po, &enumerate_objects(4)).passed());
    }

    #[test]
    fn rso_examples() {
        let u = rso(&obj("u"));
        assert_eq!((u.base().object_count(), u.base().morphism_count(), u.marked_count()), (2, 1, 0));
        let um = rso(&obj("um"));
        let marked: Vec<&str> = (0..3).filter(|&k| um.is_marked(k)).map(|k| um.base().name(k)).collect();
        assert_eq!(marked, ["12"]);
        for x in enumerate_objects(3) {
            assert!(rso(&x).validate().is_ok());
        }
        let f = mor("u", "uu", &[0, 2]);
        let functor = rso_on_morphism(&f);
        assert!(functor.is_valid(&rso(&obj("u")), &rso(&obj("uu"))));
        assert_eq!(functor.morphism_map, [2]);
    }

    #[test]
    fn rso_is_fully_faithful_small() {
        for x in enumerate_objects(2) {
            for y in enumerate_objects(3) {
                let homs = enumerate_hom_fat(&x, &y, FatClass::All);
                let functors = enumerate_functors(&rso(&x), &rso(&y));
                let images: Vec<RelFunctor> = homs.iter().map(rso_on_morphism).collect();
                assert_eq!(images, functors, "{x} -> {y}");
            }
        }
    }

    #[test]
    fn json_form() {
        let f = mor("mu", "mmu", &[0, 1, 3]);
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"dom":"mu","cod":"mmu","top":[0,1,3]}"#);
        assert_eq!(text.parse::<FatMorphism>().unwrap(), f);
        assert!(r#"{"dom":"m","cod":"um","top":[0,1]}"#.parse::<FatMorphism>().is_err());
    }
}
