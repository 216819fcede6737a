//! The simplex category Δ and its semisimplex subcategory Δ₊.
//!
//! Monotone maps `[m] → [n]` are stored as full vertex-image tables. Equality,
//! classification and composition are then plain table operations, and every
//! enumeration is emitted in lexicographic order of the image table.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ordinal `[n]`: vertices `0..=n`, edges `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ordinal(pub usize);

impl Ordinal {
    pub fn n(self) -> usize {
        self.0
    }

    pub fn vertex_count(self) -> usize {
        self.0 + 1
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

/// A weakly monotone map `[dom] → [cod]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawOrdinalMap")]
pub struct OrdinalMap {
    dom: Ordinal,
    cod: Ordinal,
    images: Vec<usize>,
}

#[derive(Deserialize)]
struct RawOrdinalMap {
    dom: Ordinal,
    cod: Ordinal,
    images: Vec<usize>,
}

impl TryFrom<RawOrdinalMap> for OrdinalMap {
    type Error = Error;

    fn try_from(raw: RawOrdinalMap) -> Result<Self> {
        OrdinalMap::new(raw.dom, raw.cod, raw.images)
    }
}

/// The five classes of maps in Δ the rest of the crate cares about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub is_mono: bool,
    pub is_epi: bool,
    pub is_active: bool,
    pub is_inert: bool,
    pub is_contraction: bool,
}

/// Selector for [`enumerate_hom`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapClass {
    All,
    Mono,
    Epi,
    Active,
    Inert,
}

impl FromStr for MapClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(MapClass::All),
            "mono" => Ok(MapClass::Mono),
            "epi" => Ok(MapClass::Epi),
            "active" => Ok(MapClass::Active),
            "inert" => Ok(MapClass::Inert),
            other => Err(Error::Parse(format!("unknown map class `{other}`"))),
        }
    }
}

impl OrdinalMap {
    /// Builds a map from its image table, checking range and monotonicity.
    pub fn new(dom: Ordinal, cod: Ordinal, images: Vec<usize>) -> Result<Self> {
        if images.len() != dom.vertex_count() {
            return Err(Error::InvalidMap(format!(
                "{} images given for domain {dom}",
                images.len()
            )));
        }
        if let Some(&v) = images.iter().find(|&&v| v > cod.n()) {
            return Err(Error::InvalidMap(format!("image {v} outside {cod}")));
        }
        if images.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidMap(format!("{images:?} is not monotone")));
        }
        Ok(OrdinalMap { dom, cod, images })
    }

    pub(crate) fn from_parts_unchecked(dom: Ordinal, cod: Ordinal, images: Vec<usize>) -> Self {
        debug_assert!(OrdinalMap::new(dom, cod, images.clone()).is_ok());
        OrdinalMap { dom, cod, images }
    }

    pub fn identity(n: Ordinal) -> Self {
        OrdinalMap {
            dom: n,
            cod: n,
            images: (0..=n.n()).collect(),
        }
    }

    pub fn dom(&self) -> Ordinal {
        self.dom
    }

    pub fn cod(&self) -> Ordinal {
        self.cod
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, v: usize) -> usize {
        self.images[v]
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &OrdinalMap) -> Result<OrdinalMap> {
        if f.cod != self.dom {
            return Err(Error::CompositionMismatch {
                cod: f.cod.to_string(),
                dom: self.dom.to_string(),
            });
        }
        Ok(OrdinalMap {
            dom: f.dom,
            cod: self.cod,
            images: f.images.iter().map(|&v| self.images[v]).collect(),
        })
    }

    /// The face `δ_i : [n] → [n+1]` omitting vertex `i`.
    pub fn face(n: Ordinal, i: usize) -> Result<OrdinalMap> {
        if i > n.n() + 1 {
            return Err(Error::IndexOutOfRange {
                what: "face",
                index: i,
                valid: format!("0..={}", n.n() + 1),
            });
        }
        Ok(OrdinalMap {
            dom: n,
            cod: Ordinal(n.n() + 1),
            images: (0..=n.n()).map(|v| if v < i { v } else { v + 1 }).collect(),
        })
    }

    /// The degeneracy `σ_i : [n] → [n-1]` repeating value `i`.
    pub fn degeneracy(n: Ordinal, i: usize) -> Result<OrdinalMap> {
        if n.n() == 0 || i >= n.n() {
            return Err(Error::IndexOutOfRange {
                what: "degeneracy",
                index: i,
                valid: if n.n() == 0 {
                    "none".to_string()
                } else {
                    format!("0..={}", n.n() - 1)
                },
            });
        }
        Ok(OrdinalMap {
            dom: n,
            cod: Ordinal(n.n() - 1),
            images: (0..=n.n()).map(|v| if v <= i { v } else { v - 1 }).collect(),
        })
    }

    pub fn is_mono(&self) -> bool {
        self.images.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_epi(&self) -> bool {
        // monotone, so surjective iff it hits both ends and never skips
        self.images[0] == 0
            && self.images[self.dom.n()] == self.cod.n()
            && self.images.windows(2).all(|w| w[1] <= w[0] + 1)
    }

    /// Endpoint preserving.
    pub fn is_active(&self) -> bool {
        self.images[0] == 0 && self.images[self.dom.n()] == self.cod.n()
    }

    /// Distance preserving.
    pub fn is_inert(&self) -> bool {
        self.images.windows(2).all(|w| w[1] == w[0] + 1)
    }

    /// `f(i+1) ≤ f(i) + 1` for every edge `i`.
    pub fn is_contraction(&self) -> bool {
        self.images.windows(2).all(|w| w[1] <= w[0] + 1)
    }

    pub fn classify(&self) -> Classification {
        Classification {
            is_mono: self.is_mono(),
            is_epi: self.is_epi(),
            is_active: self.is_active(),
            is_inert: self.is_inert(),
            is_contraction: self.is_contraction(),
        }
    }

    /// The unique factorization `mono ∘ epi` through the image ordinal.
    pub fn epi_mono_factor(&self) -> (OrdinalMap, OrdinalMap) {
        let mut image: Vec<usize> = self.images.clone();
        image.dedup();
        let k = image.len() - 1;
        let mut epi = Vec::with_capacity(self.images.len());
        let mut rank = 0;
        for (i, &v) in self.images.iter().enumerate() {
            if i > 0 && v != self.images[i - 1] {
                rank += 1;
            }
            epi.push(rank);
        }
        (
            OrdinalMap::from_parts_unchecked(self.dom, Ordinal(k), epi),
            OrdinalMap::from_parts_unchecked(Ordinal(k), self.cod, image),
        )
    }

    /// The unique factorization `inert ∘ active`.
    pub fn active_inert_factor(&self) -> (OrdinalMap, OrdinalMap) {
        let start = self.images[0];
        let len = self.images[self.dom.n()] - start;
        let active = self.images.iter().map(|&v| v - start).collect();
        let inert = (start..=start + len).collect();
        (
            OrdinalMap::from_parts_unchecked(self.dom, Ordinal(len), active),
            OrdinalMap::from_parts_unchecked(Ordinal(len), self.cod, inert),
        )
    }

    /// The simplicial word for this map: degeneracies applied first
    /// (listed innermost first), then faces.
    pub fn generator_word(&self) -> String {
        let (epi, mono) = self.epi_mono_factor();
        let mut parts = Vec::new();
        // σ's: collapsed edges, highest first so indices stay valid
        for i in (0..epi.dom.n()).rev() {
            if epi.images[i] == epi.images[i + 1] {
                parts.push(format!("σ{i}"));
            }
        }
        let mut faces = Vec::new();
        let hit: Vec<bool> = {
            let mut hit = vec![false; self.cod.vertex_count()];
            for &v in &mono.images {
                hit[v] = true;
            }
            hit
        };
        for (v, h) in hit.iter().enumerate() {
            if !h {
                faces.push(format!("δ{v}"));
            }
        }
        parts.extend(faces);
        if parts.is_empty() {
            "id".to_string()
        } else {
            parts.reverse();
            parts.join("")
        }
    }
}

impl fmt::Display for OrdinalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}:(", self.dom, self.cod)?;
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for OrdinalMap {
    type Err = Error;

    /// Parses `"[m]->[n]:(i0 i1 ... im)"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected `[m]->[n]:(i0 ... im)`, got `{s}`"));
        let (head, body) = s.trim().split_once(':').ok_or_else(bad)?;
        let (dom, cod) = head.split_once("->").ok_or_else(bad)?;
        let ordinal = |t: &str| -> Result<Ordinal> {
            let t = t.trim();
            let inner = t
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(bad)?;
            inner.trim().parse().map(Ordinal).map_err(|_| bad())
        };
        let body = body
            .trim()
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(bad)?;
        let images = body
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        OrdinalMap::new(ordinal(dom)?, ordinal(cod)?, images)
    }
}

/// `[n] ∨ [n2] = [n + n2]`.
pub fn vee(n: Ordinal, n2: Ordinal) -> Ordinal {
    Ordinal(n.n() + n2.n())
}

/// The ∨-product of two active maps: `f` on the first block, `f2` shifted
/// onto the second.
pub fn vee_active(f: &OrdinalMap, f2: &OrdinalMap) -> Result<OrdinalMap> {
    if !f.is_active() || !f2.is_active() {
        return Err(Error::Precondition(
            "the ∨-product is only functorial on active maps".into(),
        ));
    }
    let shift = f.cod.n();
    let mut images = f.images.clone();
    images.extend(f2.images[1..].iter().map(|&v| v + shift));
    Ok(OrdinalMap::from_parts_unchecked(
        vee(f.dom, f2.dom),
        vee(f.cod, f2.cod),
        images,
    ))
}

/// The pushout square of an active mono `a` along an epi `e` sharing a domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaPushout {
    pub corner: Ordinal,
    /// Epi out of `a.cod()`.
    pub right: OrdinalMap,
    /// Active mono out of `e.cod()`.
    pub bottom: OrdinalMap,
}

/// Pushout of an active monomorphism along an epimorphism.
///
/// Edge `j` of `a.cod()` is collapsed exactly when it lies in the interval
/// `[a(i), a(i+1))` of an edge `i` collapsed by `e`.
pub fn pushout_mono_along_epi(a: &OrdinalMap, e: &OrdinalMap) -> Result<DeltaPushout> {
    if a.dom != e.dom {
        return Err(Error::Precondition(format!(
            "pushout legs have different domains {} and {}",
            a.dom, e.dom
        )));
    }
    if !a.is_mono() || !a.is_active() {
        return Err(Error::Precondition(format!("{a} is not an active mono")));
    }
    if !e.is_epi() {
        return Err(Error::Precondition(format!("{e} is not an epi")));
    }
    let mut collapsed = vec![false; a.cod.n()];
    for i in 0..a.dom.n() {
        if e.images[i] == e.images[i + 1] {
            for slot in &mut collapsed[a.images[i]..a.images[i + 1]] {
                *slot = true;
            }
        }
    }
    let corner = Ordinal(collapsed.iter().filter(|&&c| !c).count());
    let mut right = Vec::with_capacity(a.cod.vertex_count());
    let mut v = 0;
    right.push(0);
    for &c in &collapsed {
        if !c {
            v += 1;
        }
        right.push(v);
    }
    let mut bottom = vec![0; e.cod.vertex_count()];
    for (x, &w) in e.images.iter().enumerate() {
        bottom[w] = right[a.images[x]];
    }
    Ok(DeltaPushout {
        corner,
        right: OrdinalMap::from_parts_unchecked(a.cod, corner, right),
        bottom: OrdinalMap::from_parts_unchecked(e.cod, corner, bottom),
    })
}

/// Every map `[m] → [n]` in `class`, in lexicographic order of image tables.
pub fn enumerate_hom(m: Ordinal, n: Ordinal, class: MapClass) -> Vec<OrdinalMap> {
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(m.vertex_count());
    monotone_tables(m.vertex_count(), n.n(), 0, &mut images, &mut |table| {
        let f = OrdinalMap {
            dom: m,
            cod: n,
            images: table.to_vec(),
        };
        let keep = match class {
            MapClass::All => true,
            MapClass::Mono => f.is_mono(),
            MapClass::Epi => f.is_epi(),
            MapClass::Active => f.is_active(),
            MapClass::Inert => f.is_inert(),
        };
        if keep {
            out.push(f);
        }
    });
    out
}

fn monotone_tables(
    len: usize,
    max: usize,
    floor: usize,
    prefix: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if prefix.len() == len {
        emit(prefix);
        return;
    }
    for v in floor..=max {
        prefix.push(v);
        monotone_tables(len, max, v, prefix, emit);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(dom: usize, cod: usize, images: &[usize]) -> OrdinalMap {
        OrdinalMap::new(Ordinal(dom), Ordinal(cod), images.to_vec()).unwrap()
    }

    fn binomial(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn identity_tables() {
        assert_eq!(OrdinalMap::identity(Ordinal(0)).images(), &[0]);
        assert_eq!(OrdinalMap::identity(Ordinal(2)).images(), &[0, 1, 2]);
        let sigma = map(2, 1, &[0, 0, 1]);
        let id2 = OrdinalMap::identity(Ordinal(2));
        assert_eq!(sigma.compose(&id2).unwrap(), sigma);
        assert_eq!(OrdinalMap::identity(Ordinal(1)).compose(&sigma).unwrap(), sigma);
    }

    #[test]
    fn compose_examples() {
        let s0 = OrdinalMap::degeneracy(Ordinal(2), 0).unwrap();
        let d0 = OrdinalMap::face(Ordinal(1), 0).unwrap();
        assert_eq!(d0.images(), &[1, 2]);
        assert_eq!(s0.compose(&d0).unwrap(), OrdinalMap::identity(Ordinal(1)));

        let s0_3 = OrdinalMap::degeneracy(Ordinal(3), 0).unwrap();
        assert_eq!(s0.compose(&s0_3).unwrap().images(), &[0, 0, 0, 1]);

        let err = s0.compose(&s0).unwrap_err();
        assert!(matches!(err, Error::CompositionMismatch { .. }));
    }

    #[test]
    fn face_and_degeneracy() {
        assert_eq!(OrdinalMap::face(Ordinal(1), 2).unwrap().images(), &[0, 1]);
        assert_eq!(OrdinalMap::degeneracy(Ordinal(2), 0).unwrap().images(), &[0, 0, 1]);
        assert!(OrdinalMap::face(Ordinal(1), 3).is_err());
        assert!(OrdinalMap::degeneracy(Ordinal(2), 2).is_err());
        assert!(OrdinalMap::degeneracy(Ordinal(0), 0).is_err());
    }

    #[test]
    fn classification_examples() {
        let id = OrdinalMap::identity(Ordinal(3)).classify();
        assert!(id.is_mono && id.is_epi && id.is_active && id.is_inert && id.is_contraction);

        let s0 = map(2, 1, &[0, 0, 1]).classify();
        assert!(s0.is_epi && s0.is_active && s0.is_contraction);
        assert!(!s0.is_mono && !s0.is_inert);

        let d2 = map(2, 3, &[0, 1, 3]).classify();
        assert!(d2.is_mono && d2.is_active);
        assert!(!d2.is_inert && !d2.is_epi);
    }

    #[test]
    fn factorization_examples() {
        let (e, m) = map(2, 1, &[0, 0, 1]).epi_mono_factor();
        assert_eq!((e.images(), m.images()), (&[0, 0, 1][..], &[0, 1][..]));

        let (e, m) = map(1, 2, &[0, 2]).epi_mono_factor();
        assert_eq!(e, OrdinalMap::identity(Ordinal(1)));
        assert_eq!(m.images(), &[0, 2]);

        let (e, m) = map(2, 3, &[0, 0, 2]).epi_mono_factor();
        assert_eq!(e, map(2, 1, &[0, 0, 1]));
        assert_eq!(m, map(1, 3, &[0, 2]));

        let (a, i) = map(1, 3, &[1, 2]).active_inert_factor();
        assert_eq!(a, OrdinalMap::identity(Ordinal(1)));
        assert_eq!(i, map(1, 3, &[1, 2]));

        let (a, i) = map(2, 3, &[1, 1, 3]).active_inert_factor();
        assert_eq!(a, map(2, 2, &[0, 0, 2]));
        assert_eq!(i, map(2, 3, &[1, 2, 3]));

        let active = map(2, 2, &[0, 1, 2]);
        let (a, i) = active.active_inert_factor();
        assert_eq!((a, i), (active.clone(), OrdinalMap::identity(Ordinal(2))));
    }

    #[test]
    fn vee_examples() {
        assert_eq!(vee(Ordinal(2), Ordinal(3)), Ordinal(5));
        let id1 = OrdinalMap::identity(Ordinal(1));
        assert_eq!(vee_active(&id1, &id1).unwrap(), OrdinalMap::identity(Ordinal(2)));

        let s0 = map(2, 1, &[0, 0, 1]);
        let d1 = map(1, 2, &[0, 2]);
        let glued = vee_active(&s0, &d1).unwrap();
        assert_eq!(glued, map(3, 3, &[0, 0, 1, 3]));
        // block squares: first block is f, second block is f2 shifted
        for (i, &v) in s0.images().iter().enumerate() {
            assert_eq!(glued.apply(i), v);
        }
        for (i, &v) in d1.images().iter().enumerate() {
            assert_eq!(glued.apply(i + 2), v + 1);
        }
        assert!(glued.is_active());
        assert!(vee_active(&map(1, 2, &[1, 2]), &id1).is_err());
    }

    #[test]
    fn pushout_examples() {
        let e = map(2, 1, &[0, 0, 1]);
        let po = pushout_mono_along_epi(&OrdinalMap::identity(Ordinal(2)), &e).unwrap();
        assert_eq!(po.corner, Ordinal(1));
        assert_eq!(po.right, e);
        assert_eq!(po.bottom, OrdinalMap::identity(Ordinal(1)));

        let d2 = map(2, 3, &[0, 1, 3]);
        let po = pushout_mono_along_epi(&d2, &e).unwrap();
        assert_eq!(po.corner, Ordinal(2));
        assert_eq!(po.right, map(3, 2, &[0, 0, 1, 2]));
        assert_eq!(po.bottom, map(1, 2, &[0, 2]));
        assert_eq!(po.right.compose(&d2).unwrap(), po.bottom.compose(&e).unwrap());

        assert!(pushout_mono_along_epi(&map(1, 2, &[1, 2]), &OrdinalMap::identity(Ordinal(1))).is_err());
        assert!(pushout_mono_along_epi(&d2, &map(2, 2, &[0, 1, 1])).is_err());
    }

    #[test]
    fn hom_examples() {
        let monos = enumerate_hom(Ordinal(1), Ordinal(2), MapClass::Mono);
        let tables: Vec<&[usize]> = monos.iter().map(|f| f.images()).collect();
        assert_eq!(tables, vec![&[0, 1][..], &[0, 2], &[1, 2]]);
        for n in 0..5 {
            assert_eq!(
                enumerate_hom(Ordinal(n), Ordinal(n), MapClass::Epi),
                vec![OrdinalMap::identity(Ordinal(n))]
            );
        }
        let to_zero = enumerate_hom(Ordinal(2), Ordinal(0), MapClass::All);
        assert_eq!(to_zero.len(), 1);
        assert_eq!(to_zero[0].images(), &[0, 0, 0]);
    }

    #[test]
    fn hom_counts_match_binomials() {
        for m in 0..5 {
            for n in 0..5 {
                let count = |c| enumerate_hom(Ordinal(m), Ordinal(n), c).len();
                assert_eq!(count(MapClass::All), binomial(n + m + 1, m + 1));
                assert_eq!(count(MapClass::Mono), binomial(n + 1, m + 1));
                assert_eq!(count(MapClass::Epi), binomial(m, n));
                assert_eq!(count(MapClass::Inert), if m <= n { n - m + 1 } else { 0 });
            }
        }
    }

    #[test]
    fn text_notation() {
        let f: OrdinalMap = "[2]->[3]:(0 1 3)".parse().unwrap();
        assert_eq!(f, map(2, 3, &[0, 1, 3]));
        assert_eq!(f.to_string(), "[2]->[3]:(0 1 3)");
        assert!("[2]->[3]:(0 3 1)".parse::<OrdinalMap>().is_err());
        assert!("[2]->[3]".parse::<OrdinalMap>().is_err());
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"dom":2,"cod":3,"images":[0,1,3]}"#);
        assert!(serde_json::from_str::<OrdinalMap>(r#"{"dom":1,"cod":1,"images":[1,0]}"#).is_err());
    }

    #[test]
    fn generator_words() {
        assert_eq!(OrdinalMap::identity(Ordinal(2)).generator_word(), "id");
        assert_eq!(map(2, 3, &[0, 1, 3]).generator_word(), "δ2");
        assert_eq!(map(2, 1, &[0, 0, 1]).generator_word(), "σ0");
    }
}
