//! Finite semicategories and relative semicategories.
//!
//! Composition is an explicit dense table indexed by `(g, f)`; an entry is
//! present exactly when `tgt(f) = src(g)`. Nothing here assumes identities.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::relgraph::{Graph, Path, RelGraph, RelGraphMap};

/// First violated law found by [`SemiCategory::validate`] or
/// [`RelSemiCategory::validate`], in a fixed search order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("{g}∘{f} is listed but {f} and {g} are not composable")]
    NotComposable { g: String, f: String },
    #[error("{g}∘{f} is listed twice")]
    DuplicateComposite { g: String, f: String },
    #[error("composite {g}∘{f} is missing")]
    MissingComposite { g: String, f: String },
    #[error("composite {g}∘{f} = {gf} has the wrong source or target")]
    MisTargeted { g: String, f: String, gf: String },
    #[error("associativity fails at ({h}, {g}, {f})")]
    NonAssociative { h: String, g: String, f: String },
    #[error("marked morphisms not closed: {g}∘{f} = {gf} is unmarked")]
    NotClosed { g: String, f: String, gf: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Morphism {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite semicategory. Construct through [`SemiCategory::new`] to get a
/// validated value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemiCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    table: Vec<Option<usize>>,
}

impl SemiCategory {
    /// Builds and validates a semicategory. `compose` lists `(g, f, g∘f)` by
    /// morphism index.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        compose: &[(usize, usize, usize)],
    ) -> Result<Self> {
        let c = SemiCategory::unchecked(objects, morphisms, compose)?;
        c.validate()?;
        Ok(c)
    }

    /// Builds the table without checking the laws; structural errors (bad
    /// indices, non-composable entries) are still reported.
    pub fn unchecked(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        compose: &[(usize, usize, usize)],
    ) -> Result<Self> {
        let n = morphisms.len();
        for m in &morphisms {
            if m.src >= objects.len() || m.tgt >= objects.len() {
                return Err(Violation::UnknownObject(format!("{} endpoint", m.id)).into());
            }
        }
        let mut table = vec![None; n * n];
        for &(g, f, gf) in compose {
            let name = |i: usize| {
                morphisms
                    .get(i)
                    .map(|m| m.id.clone())
                    .ok_or_else(|| Violation::UnknownMorphism(format!("#{i}")))
            };
            let (gn, fn_) = (name(g)?, name(f)?);
            name(gf)?;
            if morphisms[f].tgt != morphisms[g].src {
                return Err(Violation::NotComposable { g: gn, f: fn_ }.into());
            }
            let slot = &mut table[g * n + f];
            if slot.is_some() {
                return Err(Violation::DuplicateComposite { g: gn, f: fn_ }.into());
            }
            *slot = Some(gf);
        }
        Ok(SemiCategory {
            objects,
            morphisms,
            table,
        })
    }

    pub fn empty() -> Self {
        SemiCategory {
            objects: Vec::new(),
            morphisms: Vec::new(),
            table: Vec::new(),
        }
    }

    /// Checks totality, endpoint correctness and associativity.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let mut seen = HashMap::new();
        for name in &self.objects {
            if seen.insert(("o", name.as_str()), ()).is_some() {
                return Err(Violation::DuplicateName(name.clone()));
            }
        }
        for m in &self.morphisms {
            if seen.insert(("m", m.id.as_str()), ()).is_some() {
                return Err(Violation::DuplicateName(m.id.clone()));
            }
        }
        let n = self.morphisms.len();
        for g in 0..n {
            for f in 0..n {
                if !self.composable(g, f) {
                    continue;
                }
                match self.table[g * n + f] {
                    None => {
                        return Err(Violation::MissingComposite {
                            g: self.name(g).into(),
                            f: self.name(f).into(),
                        })
                    }
                    Some(gf) => {
                        if self.morphisms[gf].src != self.morphisms[f].src
                            || self.morphisms[gf].tgt != self.morphisms[g].tgt
                        {
                            return Err(Violation::MisTargeted {
                                g: self.name(g).into(),
                                f: self.name(f).into(),
                                gf: self.name(gf).into(),
                            });
                        }
                    }
                }
            }
        }
        for h in 0..n {
            for g in 0..n {
                let Some(hg) = self.compose(h, g) else { continue };
                for f in 0..n {
                    let Some(gf) = self.compose(g, f) else { continue };
                    if self.compose(h, gf) != self.compose(hg, f) {
                        return Err(Violation::NonAssociative {
                            h: self.name(h).into(),
                            g: self.name(g).into(),
                            f: self.name(f).into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn name(&self, f: usize) -> &str {
        &self.morphisms[f].id
    }

    pub fn src(&self, f: usize) -> usize {
        self.morphisms[f].src
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.morphisms[f].tgt
    }

    pub fn composable(&self, g: usize, f: usize) -> bool {
        self.morphisms[f].tgt == self.morphisms[g].src
    }

    /// `g ∘ f`, if composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.table[g * self.morphisms.len() + f]
    }

    /// All `(g, f, g∘f)` entries in index order.
    pub fn compose_entries(&self) -> Vec<(usize, usize, usize)> {
        let n = self.morphisms.len();
        let mut out = Vec::new();
        for g in 0..n {
            for f in 0..n {
                if let Some(gf) = self.table[g * n + f] {
                    out.push((g, f, gf));
                }
            }
        }
        out
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.id == name)
    }
}

/// A semicategory with a composition-closed set of marked morphisms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelSemiCategory {
    base: SemiCategory,
    marked: Vec<bool>,
}

impl RelSemiCategory {
    pub fn new(base: SemiCategory, marked: Vec<bool>) -> Result<Self> {
        let c = RelSemiCategory::unchecked(base, marked)?;
        c.validate()?;
        Ok(c)
    }

    pub fn unchecked(base: SemiCategory, marked: Vec<bool>) -> Result<Self> {
        if marked.len() != base.morphism_count() {
            return Err(Error::Precondition(format!(
                "{} marking bits for {} morphisms",
                marked.len(),
                base.morphism_count()
            )));
        }
        Ok(RelSemiCategory { base, marked })
    }

    /// Associativity, then closure of the marked part.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        self.base.validate()?;
        for (g, f, gf) in self.base.compose_entries() {
            if self.marked[g] && self.marked[f] && !self.marked[gf] {
                return Err(Violation::NotClosed {
                    g: self.base.name(g).into(),
                    f: self.base.name(f).into(),
                    gf: self.base.name(gf).into(),
                });
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &SemiCategory {
        &self.base
    }

    pub fn marked(&self) -> &[bool] {
        &self.marked
    }

    pub fn is_marked(&self, f: usize) -> bool {
        self.marked[f]
    }

    pub fn marked_count(&self) -> usize {
        self.marked.iter().filter(|&&b| b).count()
    }
}

/// A marking-preserving semifunctor, given by index tables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RelFunctor {
    pub object_map: Vec<usize>,
    pub morphism_map: Vec<usize>,
}

impl RelFunctor {
    /// Whether the tables form a marking-preserving semifunctor `c → d`.
    pub fn is_valid(&self, c: &RelSemiCategory, d: &RelSemiCategory) -> bool {
        let (cb, db) = (c.base(), d.base());
        if self.object_map.len() != cb.object_count()
            || self.morphism_map.len() != cb.morphism_count()
            || self.object_map.iter().any(|&o| o >= db.object_count())
            || self.morphism_map.iter().any(|&m| m >= db.morphism_count())
        {
            return false;
        }
        for f in 0..cb.morphism_count() {
            let ff = self.morphism_map[f];
            if db.src(ff) != self.object_map[cb.src(f)] || db.tgt(ff) != self.object_map[cb.tgt(f)] {
                return false;
            }
            if c.is_marked(f) && !d.is_marked(ff) {
                return false;
            }
        }
        cb.compose_entries().into_iter().all(|(g, f, gf)| {
            db.compose(self.morphism_map[g], self.morphism_map[f]) == Some(self.morphism_map[gf])
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &RelFunctor) -> RelFunctor {
        RelFunctor {
            object_map: other.object_map.iter().map(|&o| self.object_map[o]).collect(),
            morphism_map: other.morphism_map.iter().map(|&m| self.morphism_map[m]).collect(),
        }
    }
}

/// All marking-preserving semifunctors `c → d`, in lexicographic order of
/// `(object_map, morphism_map)`.
pub fn enumerate_functors(c: &RelSemiCategory, d: &RelSemiCategory) -> Vec<RelFunctor> {
    let mut out = Vec::new();
    for_each_functor(c, d, |objects, morphisms| {
        out.push(RelFunctor {
            object_map: objects.to_vec(),
            morphism_map: morphisms.to_vec(),
        })
    });
    out
}

/// Number of marking-preserving semifunctors `c → d`.
pub fn count_functors(c: &RelSemiCategory, d: &RelSemiCategory) -> usize {
    let mut n = 0;
    for_each_functor(c, d, |_, _| n += 1);
    n
}

/// Calls `visit(object_map, morphism_map)` for every marking-preserving
/// semifunctor `c → d`, in lexicographic order.
///
/// The object map is chosen first, then morphisms one at a time from the
/// matching hom-set; each composite `(g, f, g∘f)` is checked as soon as its
/// largest index is assigned.
pub fn for_each_functor<F: FnMut(&[usize], &[usize])>(c: &RelSemiCategory, d: &RelSemiCategory, mut visit: F) {
    let (cb, db) = (c.base(), d.base());
    if cb.object_count() > 0 && db.object_count() == 0 {
        return;
    }
    let dn = db.object_count();
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); dn * dn];
    for m in 0..db.morphism_count() {
        candidates[db.src(m) * dn + db.tgt(m)].push(m);
    }
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); cb.morphism_count()];
    for (g, f, gf) in cb.compose_entries() {
        checks[g.max(f).max(gf)].push((g, f, gf));
    }
    let ctx = Ctx {
        c,
        d,
        dn,
        candidates,
        checks,
    };
    let mut objects = vec![0; cb.object_count()];
    let mut morphisms = vec![0; cb.morphism_count()];
    assign_objects(0, &mut objects, &mut morphisms, &ctx, &mut visit);

    struct Ctx<'a> {
        c: &'a RelSemiCategory,
        d: &'a RelSemiCategory,
        dn: usize,
        candidates: Vec<Vec<usize>>,
        checks: Vec<Vec<(usize, usize, usize)>>,
    }

    fn assign_objects<F: FnMut(&[usize], &[usize])>(
        i: usize,
        objects: &mut Vec<usize>,
        morphisms: &mut Vec<usize>,
        ctx: &Ctx<'_>,
        visit: &mut F,
    ) {
        if i == objects.len() {
            assign_morphisms(0, objects, morphisms, ctx, visit);
            return;
        }
        for o in 0..ctx.dn {
            objects[i] = o;
            assign_objects(i + 1, objects, morphisms, ctx, visit);
        }
    }

    fn assign_morphisms<F: FnMut(&[usize], &[usize])>(
        i: usize,
        objects: &[usize],
        morphisms: &mut Vec<usize>,
        ctx: &Ctx<'_>,
        visit: &mut F,
    ) {
        if i == morphisms.len() {
            visit(objects, morphisms);
            return;
        }
        let cb = ctx.c.base();
        let pool = &ctx.candidates[objects[cb.src(i)] * ctx.dn + objects[cb.tgt(i)]];
        for &m in pool {
            if ctx.c.is_marked(i) && !ctx.d.is_marked(m) {
                continue;
            }
            morphisms[i] = m;
            let ok = ctx.checks[i]
                .iter()
                .all(|&(g, f, gf)| ctx.d.base().compose(morphisms[g], morphisms[f]) == Some(morphisms[gf]));
            if ok {
                assign_morphisms(i + 1, objects, morphisms, ctx, visit);
            }
        }
    }
}

/// Marks nothing.
pub fn flat(c: &SemiCategory) -> RelSemiCategory {
    RelSemiCategory {
        base: c.clone(),
        marked: vec![false; c.morphism_count()],
    }
}

/// Marks everything.
pub fn sharp(c: &SemiCategory) -> RelSemiCategory {
    RelSemiCategory {
        base: c.clone(),
        marked: vec![true; c.morphism_count()],
    }
}

/// The linear semicategory on `[n]`: one morphism `i → j` for each `i < j`.
///
/// Morphisms are listed by length, then by start, and named `"ij"` (or
/// `"i-j"` once indices reach two digits).
pub fn linear_semicat(n: usize) -> SemiCategory {
    let objects = (0..=n).map(|v| v.to_string()).collect();
    let pairs = interval_pairs(n);
    let index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let morphisms = pairs
        .iter()
        .map(|&(i, j)| Morphism {
            id: interval_name(n, i, j),
            src: i,
            tgt: j,
        })
        .collect();
    let mut compose = Vec::new();
    for (f, &(i, j)) in pairs.iter().enumerate() {
        for (g, &(j2, k)) in pairs.iter().enumerate() {
            if j == j2 {
                compose.push((g, f, index[&(i, k)]));
            }
        }
    }
    SemiCategory::unchecked(objects, morphisms, &compose).expect("linear table is well formed")
}

pub(crate) fn interval_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for len in 1..=n {
        for i in 0..=n - len {
            pairs.push((i, i + len));
        }
    }
    pairs
}

pub(crate) fn interval_name(n: usize, i: usize, j: usize) -> String {
    if n < 10 {
        format!("{i}{j}")
    } else {
        format!("{i}-{j}")
    }
}

/// The free relative semicategory on an acyclic relative graph: morphisms
/// are the non-empty paths, composition is concatenation.
///
/// Paths are listed by length, then lexicographically by edge sequence, and
/// named `p` followed by their dot-separated edge indices.
pub fn free_relsemicat(x: &RelGraph) -> Result<RelSemiCategory> {
    if x.carrier().has_cycle() {
        return Err(Error::UnboundedFreeObject);
    }
    let mut paths: Vec<Path> = Vec::new();
    let mut len = 1;
    loop {
        let layer = x.paths(len);
        if layer.is_empty() {
            break;
        }
        paths.extend(layer);
        len += 1;
    }
    let index: HashMap<&[usize], usize> =
        paths.iter().enumerate().map(|(k, p)| (p.edges(), k)).collect();
    let objects = (0..x.carrier().vertex_count()).map(|v| v.to_string()).collect();
    let morphisms = paths
        .iter()
        .map(|p| Morphism {
            id: path_name(p),
            src: p.source(),
            tgt: p.target(),
        })
        .collect();
    let mut compose = Vec::new();
    for (f, p) in paths.iter().enumerate() {
        for (g, q) in paths.iter().enumerate() {
            if p.target() == q.source() {
                let mut edges = p.edges().to_vec();
                edges.extend_from_slice(q.edges());
                compose.push((g, f, index[edges.as_slice()]));
            }
        }
    }
    let marked = paths.iter().map(|p| x.path_is_marked(p)).collect();
    let base = SemiCategory::unchecked(objects, morphisms, &compose)?;
    Ok(RelSemiCategory { base, marked })
}

pub(crate) fn path_name(p: &Path) -> String {
    let parts: Vec<String> = p.edges().iter().map(|e| e.to_string()).collect();
    format!("p{}", parts.join("."))
}

/// The underlying relative graph: vertices are objects, edges are morphisms.
pub fn forgetful(c: &RelSemiCategory) -> RelGraph {
    let b = c.base();
    let edges = b.morphisms().iter().map(|m| (m.src, m.tgt)).collect();
    RelGraph::from_parts_unsorted(Graph::from_edges_unsorted(b.object_count(), edges), c.marked().to_vec())
}

/// Unit of the adjunction: each edge of `x` is sent to its length-one path.
pub fn adjunction_unit(x: &RelGraph, free: &RelSemiCategory) -> RelGraphMap {
    let b = free.base();
    let edge_map = (0..x.carrier().edge_count())
        .map(|e| b.morphism_index(&format!("p{e}")).expect("length-one path present"))
        .collect();
    RelGraphMap {
        vertex_map: (0..x.carrier().vertex_count()).collect(),
        edge_map,
    }
}

/// Counit of the adjunction: a path of morphisms is sent to its composite.
pub fn adjunction_counit(c: &RelSemiCategory) -> Result<RelFunctor> {
    let u = forgetful(c);
    let free = free_relsemicat(&u)?;
    let b = c.base();
    let fb = free.base();
    let mut morphism_map = Vec::with_capacity(fb.morphism_count());
    for p in 0..fb.morphism_count() {
        let name = fb.name(p);
        let edges: Vec<usize> = name[1..].split('.').map(|t| t.parse().expect("path name")).collect();
        let mut acc = edges[0];
        for &e in &edges[1..] {
            acc = b.compose(e, acc).expect("consecutive morphisms compose");
        }
        morphism_map.push(acc);
    }
    Ok(RelFunctor {
        object_map: (0..b.object_count()).collect(),
        morphism_map,
    })
}

/// Transpose of a functor `free(x) → c` along the adjunction.
pub fn transpose_to_graph_map(x: &RelGraph, free: &RelSemiCategory, f: &RelFunctor) -> RelGraphMap {
    let unit = adjunction_unit(x, free);
    RelGraphMap {
        vertex_map: f.object_map.clone(),
        edge_map: unit.edge_map.iter().map(|&p| f.morphism_map[p]).collect(),
    }
}

/// Transpose of a graph map `x → forgetful(c)` along the adjunction.
pub fn transpose_to_functor(c: &RelSemiCategory, free: &RelSemiCategory, g: &RelGraphMap) -> RelFunctor {
    let fb = free.base();
    let b = c.base();
    let morphism_map = (0..fb.morphism_count())
        .map(|p| {
            let name = fb.name(p);
            let mut acc: Option<usize> = None;
            for e in name[1..].split('.') {
                let m = g.edge_map[e.parse::<usize>().expect("path name")];
                acc = Some(match acc {
                    None => m,
                    Some(a) => b.compose(m, a).expect("image path composes"),
                });
            }
            acc.expect("non-empty path")
        })
        .collect();
    RelFunctor {
        object_map: g.vertex_map.clone(),
        morphism_map,
    }
}

/// JSON form: `{"objects":[...],"morphisms":[{id,src,tgt,marked}],"compose":[[g,f,gf]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelSemiCategoryJson {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismJson>,
    pub compose: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub id: String,
    pub src: String,
    pub tgt: String,
    #[serde(default)]
    pub marked: bool,
}

impl From<&RelSemiCategory> for RelSemiCategoryJson {
    fn from(c: &RelSemiCategory) -> Self {
        let b = c.base();
        RelSemiCategoryJson {
            objects: b.objects().to_vec(),
            morphisms: b
                .morphisms()
                .iter()
                .enumerate()
                .map(|(k, m)| MorphismJson {
                    id: m.id.clone(),
                    src: b.objects()[m.src].clone(),
                    tgt: b.objects()[m.tgt].clone(),
                    marked: c.is_marked(k),
                })
                .collect(),
            compose: b
                .compose_entries()
                .into_iter()
                .map(|(g, f, gf)| [b.name(g).into(), b.name(f).into(), b.name(gf).into()])
                .collect(),
        }
    }
}

impl TryFrom<RelSemiCategoryJson> for RelSemiCategory {
    type Error = Error;

    fn try_from(j: RelSemiCategoryJson) -> Result<Self> {
        let object = |name: &str| {
            j.objects
                .iter()
                .position(|o| o == name)
                .ok_or_else(|| Error::from(Violation::UnknownObject(name.into())))
        };
        let mut morphisms = Vec::with_capacity(j.morphisms.len());
        for m in &j.morphisms {
            morphisms.push(Morphism {
                id: m.id.clone(),
                src: object(&m.src)?,
                tgt: object(&m.tgt)?,
            });
        }
        let morphism = |name: &str| {
            j.morphisms
                .iter()
                .position(|m| m.id == name)
                .ok_or_else(|| Error::from(Violation::UnknownMorphism(name.into())))
        };
        let mut compose = Vec::with_capacity(j.compose.len());
        for [g, f, gf] in &j.compose {
            compose.push((morphism(g)?, morphism(f)?, morphism(gf)?));
        }
        let marked = j.morphisms.iter().map(|m| m.marked).collect();
        RelSemiCategory::new(SemiCategory::new(j.objects.clone(), morphisms, &compose)?, marked)
    }
}

impl Serialize for RelSemiCategory {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RelSemiCategoryJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RelSemiCategory {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RelSemiCategoryJson::deserialize(d)?;
        RelSemiCategory::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for RelSemiCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.base();
        write!(f, "objects: {}", b.objects().join(" "))?;
        for (k, m) in b.morphisms().iter().enumerate() {
            let mark = if self.is_marked(k) { " (marked)" } else { "" };
            write!(f, "\n{}: {} -> {}{}", m.id, b.objects()[m.src], b.objects()[m.tgt], mark)?;
        }
        Ok(())
    }
}

/// All relative semicategories with at most `max_objects` objects and
/// `max_morphisms` morphisms, one per isomorphism class.
///
/// Objects are named `a`, `b`, ... and morphisms `f0`, `f1`, ...; each class
/// is represented by its least encoding over all relabellings.
pub fn relsemicat_corpus(max_objects: usize, max_morphisms: usize) -> Vec<RelSemiCategory> {
    let mut classes: Vec<Vec<u8>> = Vec::new();
    for k in 0..=max_objects {
        let object_perms = permutations_of(k);
        for n in 0..=max_morphisms {
            if k == 0 && n > 0 {
                break;
            }
            let morphism_perms = permutations_of(n);
            let mut seen = std::collections::BTreeSet::new();
            for ends in endpoint_choices(k, n) {
                for table in composition_tables(&ends) {
                    for marked in closed_markings(&table, n) {
                        let code = canonical_code(k, &ends, &table, &marked, &object_perms, &morphism_perms);
                        seen.insert(code);
                    }
                }
            }
            classes.extend(seen);
        }
    }
    classes.iter().map(|c| decode(c)).collect()
}

fn permutations_of(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations_of(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Non-decreasing sequences of `(src, tgt)` pairs.
fn endpoint_choices(k: usize, n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|s| (0..k).map(move |t| (s, t))).collect();
    let mut out = Vec::new();
    fn go(pairs: &[(usize, usize)], from: usize, n: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in from..pairs.len() {
            cur.push(pairs[i]);
            go(pairs, i, n, cur, out);
            cur.pop();
        }
    }
    go(&pairs, 0, n, &mut Vec::new(), &mut out);
    out
}

/// Associative composition tables `table[g * n + f]` for fixed endpoints,
/// filled cell by cell with associativity checked as soon as it is decidable.
fn composition_tables(ends: &[(usize, usize)]) -> Vec<Vec<Option<usize>>> {
    let n = ends.len();
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|g| (0..n).map(move |f| (g, f)))
        .filter(|&(g, f)| ends[f].1 == ends[g].0)
        .collect();
    let mut table = vec![None; n * n];
    let mut out = Vec::new();
    fn associative_so_far(ends: &[(usize, usize)], table: &[Option<usize>]) -> bool {
        let n = ends.len();
        for f in 0..n {
            for g in 0..n {
                let Some(gf) = table[g * n + f] else { continue };
                for h in 0..n {
                    let Some(hg) = table[h * n + g] else { continue };
                    if let (Some(a), Some(b)) = (table[hg * n + f], table[h * n + gf]) {
                        if a != b {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
    fn go(
        i: usize,
        ends: &[(usize, usize)],
        cells: &[(usize, usize)],
        table: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<Option<usize>>>,
    ) {
        if i == cells.len() {
            out.push(table.clone());
            return;
        }
        let n = ends.len();
        let (g, f) = cells[i];
        for gf in 0..n {
            if ends[gf] != (ends[f].0, ends[g].1) {
                continue;
            }
            table[g * n + f] = Some(gf);
            if associative_so_far(ends, table) {
                go(i + 1, ends, cells, table, out);
            }
        }
        table[g * n + f] = None;
    }
    go(0, ends, &cells, &mut table, &mut out);
    out
}

fn closed_markings(table: &[Option<usize>], n: usize) -> Vec<Vec<bool>> {
    (0u32..1 << n)
        .map(|bits| (0..n).map(|i| bits >> i & 1 == 1).collect::<Vec<bool>>())
        .filter(|m| {
            (0..n).all(|g| (0..n).all(|f| !(m[g] && m[f]) || table[g * n + f].map_or(true, |gf| m[gf])))
        })
        .collect()
}

fn canonical_code(
    k: usize,
    ends: &[(usize, usize)],
    table: &[Option<usize>],
    marked: &[bool],
    object_perms: &[Vec<usize>],
    morphism_perms: &[Vec<usize>],
) -> Vec<u8> {
    let n = ends.len();
    let mut best: Option<Vec<u8>> = None;
    for op in object_perms {
        for mp in morphism_perms {
            // mp[old] = new
            let mut inv = vec![0; n];
            for (old, &new) in mp.iter().enumerate() {
                inv[new] = old;
            }
            let mut code = Vec::with_capacity(2 + 3 * n + n * n);
            code.push(k as u8);
            code.push(n as u8);
            for &old in &inv {
                let (s, t) = ends[old];
                code.push(op[s] as u8);
                code.push(op[t] as u8);
            }
            if let Some(b) = &best {
                if code[..] > b[..code.len()] {
                    continue;
                }
            }
            for &g in &inv {
                for &f in &inv {
                    code.push(table[g * n + f].map_or(u8::MAX, |gf| mp[gf] as u8));
                }
            }
            code.extend(inv.iter().map(|&old| marked[old] as u8));
            if best.as_ref().map_or(true, |b| code < *b) {
                best = Some(code);
            }
        }
    }
    best.expect("at least one permutation")
}

fn decode(code: &[u8]) -> RelSemiCategory {
    let (k, n) = (code[0] as usize, code[1] as usize);
    let objects = (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let morphisms = (0..n)
        .map(|i| Morphism {
            id: format!("f{i}"),
            src: code[2 + 2 * i] as usize,
            tgt: code[3 + 2 * i] as usize,
        })
        .collect();
    let table = &code[2 + 2 * n..2 + 2 * n + n * n];
    let compose: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|g| (0..n).map(move |f| (g, f)))
        .filter(|&(g, f)| table[g * n + f] != u8::MAX)
        .map(|(g, f)| (g, f, table[g * n + f] as usize))
        .collect();
    let marked = code[2 + 2 * n + n * n..].iter().map(|&b| b == 1).collect();
    let base = SemiCategory::new(objects, morphisms, &compose).expect("corpus tables are associative");
    RelSemiCategory::new(base, marked).expect("corpus markings are closed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn morphism(id: &str, src: usize, tgt: usize) -> Morphism {
        Morphism {
            id: id.into(),
            src,
            tgt,
        }
    }

    /// x --f--> y --g--> z with h = g∘f.
    fn chain(gf: usize) -> Result<SemiCategory> {
        SemiCategory::unchecked(
            vec!["x".into(), "y".into(), "z".into()],
            vec![morphism("f", 0, 1), morphism("g", 1, 2), morphism("h", 0, 2)],
            &[(1, 0, gf)],
        )
    }

    #[test]
    fn linear_table_validates() {
        for n in 0..5 {
            let c = linear_semicat(n);
            assert_eq!(c.validate(), Ok(()));
            assert_eq!(c.morphism_count(), n * (n + 1) / 2);
        }
        let c = linear_semicat(2);
        let names: Vec<&str> = c.morphisms().iter().map(|m| m.id.as_str()).collect();
        assert_eq!(names, ["01", "12", "02"]);
    }

    #[test]
    fn mistargeted_composite_is_named() {
        assert_eq!(chain(2).unwrap().validate(), Ok(()));
        let bad = chain(0).unwrap();
        assert_eq!(
            bad.validate(),
            Err(Violation::MisTargeted {
                g: "g".into(),
                f: "f".into(),
                gf: "f".into()
            })
        );
    }

    #[test]
    fn closure_only_quantifies_over_marked_pairs() {
        let base = chain(2).unwrap();
        let one = RelSemiCategory::new(base.clone(), vec![true, false, false]);
        assert!(one.is_ok());
        let other = RelSemiCategory::new(base.clone(), vec![false, true, false]);
        assert!(other.is_ok());
        let both = RelSemiCategory::new(base, vec![true, true, false]).unwrap_err();
        assert!(matches!(both, Error::Semicategory(Violation::NotClosed { .. })));
    }

    #[test]
    fn flat_and_sharp() {
        let c = linear_semicat(2);
        assert_eq!(sharp(&c).marked_count(), 3);
        assert_eq!(flat(&c).marked_count(), 0);
        assert!(sharp(&c).validate().is_ok());
    }

    #[test]
    fn functor_counts() {
        let u = flat(&linear_semicat(1));
        let uu = flat(&linear_semicat(2));
        assert_eq!(enumerate_functors(&u, &uu).len(), 3);
        let m = sharp(&linear_semicat(1));
        assert_eq!(enumerate_functors(&m, &u).len(), 0);
        let empty = flat(&SemiCategory::empty());
        assert_eq!(enumerate_functors(&u, &empty).len(), 0);
        assert_eq!(enumerate_functors(&empty, &u).len(), 1);
        for f in enumerate_functors(&uu, &uu) {
            assert!(f.is_valid(&uu, &uu));
        }
    }

    #[test]
    fn json_round_trip() {
        let c = sharp(&linear_semicat(2));
        let text = serde_json::to_string(&c).unwrap();
        let back: RelSemiCategory = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn json_rejects_nonassociative() {
        // one object, two loops a, b with a∘a = b, b∘x = a, x∘b = a, a∘b = b, b∘a = a
        let text = r#"{"objects":["*"],"morphisms":[
            {"id":"a","src":"*","tgt":"*"},{"id":"b","src":"*","tgt":"*"}],
            "compose":[["a","a","b"],["a","b","b"],["b","a","a"],["b","b","a"]]}"#;
        let err = serde_json::from_str::<RelSemiCategory>(text).unwrap_err();
        assert!(err.to_string().contains("associativity"), "{err}");
    }
}
