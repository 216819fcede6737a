//! Presheaves on bounded truncations of fat Delta, the nerve of a relative
//! semicategory, the Segal condition and natural transformations.
//!
//! A truncation is shared by every presheaf built on it, so the (large)
//! tables of morphisms and composable pairs are computed once.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fat::{enumerate_hom_fat, enumerate_objects, FatClass, FatMorphism, FatObject};
use crate::relgraph::RelGraph;
use crate::semicat::{count_functors, enumerate_functors, RelFunctor, RelSemiCategory};

/// Which morphisms a truncation carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    All,
    Inert,
}

/// Objects with at most `bound` edges and the morphisms between them.
#[derive(Debug)]
pub struct TruncatedSite {
    bound: usize,
    scope: Scope,
    objects: Vec<FatObject>,
    object_index: HashMap<FatObject, usize>,
    morphisms: Vec<FatMorphism>,
    /// `(dom, cod)` object indices per morphism.
    ends: Vec<(usize, usize)>,
    morphism_index: HashMap<FatMorphism, usize>,
    identities: Vec<usize>,
    /// Non-identity morphisms into each object.
    incoming: Vec<Vec<usize>>,
    /// Indecomposable morphisms into each object. Every morphism is a
    /// composite of these, so naturality only needs checking on them.
    generators: Vec<Vec<usize>>,
    /// `(g, f, g∘f)` for all composable non-identity pairs.
    composites: Vec<(usize, usize, usize)>,
    /// The composites with `g` indecomposable. Functoriality on these
    /// implies it on all, by induction on the length of `g`.
    generating_composites: Vec<(usize, usize, usize)>,
    matching: OnceLock<Vec<Matching>>,
    /// Per object, per edge: the inclusion of `"u"` on that edge and, for a
    /// marked edge, of `"m"`.
    segal_core: Vec<Vec<(usize, Option<usize>)>>,
}

/// How the morphisms into an object factor through its indecomposables.
#[derive(Debug)]
struct Matching {
    generators: Vec<usize>,
    /// `constraints[j]`: `(i, a, b)` with `i < j` and
    /// `generators[i] ∘ a = generators[j] ∘ b`, one per maximal common
    /// factorization; together they imply all the others.
    constraints: Vec<Vec<(usize, usize, usize)>>,
}

impl TruncatedSite {
    pub fn new(bound: usize, scope: Scope) -> Arc<TruncatedSite> {
        let objects = enumerate_objects(bound);
        let object_index: HashMap<FatObject, usize> =
            objects.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
        let class = match scope {
            Scope::All => FatClass::All,
            Scope::Inert => FatClass::Inert,
        };
        let mut morphisms = Vec::new();
        let mut ends = Vec::new();
        for (i, x) in objects.iter().enumerate() {
            for (j, y) in objects.iter().enumerate() {
                for f in enumerate_hom_fat(x, y, class) {
                    morphisms.push(f);
                    ends.push((i, j));
                }
            }
        }
        let morphism_index: HashMap<FatMorphism, usize> =
            morphisms.iter().enumerate().map(|(k, f)| (f.clone(), k)).collect();
        let identities = objects.iter().map(|x| morphism_index[&x.identity()]).collect();
        let mut incoming = vec![Vec::new(); objects.len()];
        let mut outgoing = vec![Vec::new(); objects.len()];
        for (k, f) in morphisms.iter().enumerate() {
            if !f.is_identity() {
                incoming[ends[k].1].push(k);
                outgoing[ends[k].0].push(k);
            }
        }
        let mut composites = Vec::new();
        for (f, fm) in morphisms.iter().enumerate() {
            if fm.is_identity() {
                continue;
            }
            for &g in &outgoing[ends[f].1] {
                let gf = morphisms[g].compose(fm).expect("composable by construction");
                composites.push((g, f, morphism_index[&gf]));
            }
        }
        let mut decomposable = vec![false; morphisms.len()];
        for &(_, _, gf) in &composites {
            decomposable[gf] = true;
        }
        let generators = incoming
            .iter()
            .map(|fs: &Vec<usize>| fs.iter().copied().filter(|&f| !decomposable[f]).collect())
            .collect();
        let find = |dom: &FatObject, cod: &FatObject, top: Vec<usize>| {
            FatMorphism::new(dom.clone(), cod.clone(), top)
                .ok()
                .and_then(|f| morphism_index.get(&f).copied())
        };
        let (u, m) = (FatObject::flat(1), FatObject::sharp(1));
        let segal_core = objects
            .iter()
            .map(|x| {
                (0..x.edges())
                    .filter_map(|i| {
                        let edge = find(&u, x, vec![i, i + 1])?;
                        Some((edge, if x.is_marked(i) { find(&m, x, vec![i, i + 1]) } else { None }))
                    })
                    .collect()
            })
            .collect();
        Arc::new(TruncatedSite {
            bound,
            scope,
            objects,
            object_index,
            morphisms,
            ends,
            morphism_index,
            identities,
            incoming,
            generators,
            generating_composites: composites.iter().copied().filter(|&(g, _, _)| !decomposable[g]).collect(),
            composites,
            matching: OnceLock::new(),
            segal_core,
        })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    pub fn objects(&self) -> &[FatObject] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[FatMorphism] {
        &self.morphisms
    }

    pub fn object(&self, x: &FatObject) -> Option<usize> {
        self.object_index.get(x).copied()
    }

    pub fn morphism(&self, f: &FatMorphism) -> Option<usize> {
        self.morphism_index.get(f).copied()
    }

    pub fn ends(&self, f: usize) -> (usize, usize) {
        self.ends[f]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn incoming(&self, y: usize) -> &[usize] {
        &self.incoming[y]
    }

    pub fn generators(&self, y: usize) -> &[usize] {
        &self.generators[y]
    }

    pub fn composites(&self) -> &[(usize, usize, usize)] {
        &self.composites
    }

    fn matching(&self) -> &[Matching] {
        self.matching.get_or_init(|| {
            (0..self.objects.len())
                .map(|y| {
                    let generators = self.generators[y].clone();
                    let mut factorizations: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
                    for (i, &g) in generators.iter().enumerate() {
                        let x = self.ends[g].0;
                        let into_x = self.incoming[x].iter().copied().chain([self.identities[x]]);
                        for a in into_x {
                            let h = self.morphisms[g].compose(&self.morphisms[a]).expect("composable");
                            factorizations.entry(self.morphism_index[&h]).or_default().push((i, a));
                        }
                    }
                    // pairs of factorizations of the same morphism; a pair is
                    // implied by one at h' whenever h = h'∘c, since generators
                    // are monic, so only maximal h are kept
                    let mut shared: HashMap<(usize, usize), Vec<(usize, usize, usize)>> = HashMap::new();
                    for (&h, group) in &factorizations {
                        for (x, &(i, a)) in group.iter().enumerate() {
                            for &(j, b) in &group[x + 1..] {
                                let (i, a, j, b) = if i < j { (i, a, j, b) } else { (j, b, i, a) };
                                shared.entry((i, j)).or_default().push((h, a, b));
                            }
                        }
                    }
                    let mut constraints = vec![Vec::new(); generators.len()];
                    let mut pairs: Vec<_> = shared.into_iter().collect();
                    pairs.sort();
                    for ((i, j), list) in pairs {
                        let members: std::collections::HashSet<usize> = list.iter().map(|&(h, _, _)| h).collect();
                        let mut implied = std::collections::HashSet::new();
                        for &(g, _, gf) in &self.composites {
                            if members.contains(&g) && members.contains(&gf) {
                                implied.insert(gf);
                            }
                        }
                        for &(h, a, b) in &list {
                            if !implied.contains(&h) {
                                constraints[j].push((i, a, b));
                            }
                        }
                    }
                    // bucket on the constraint through the largest object
                    for c in &mut constraints {
                        c.sort_by_key(|&(i, a, _)| (std::cmp::Reverse(self.objects[self.ends[a].0].degree()), i, a));
                    }
                    Matching {
                        generators,
                        constraints,
                    }
                })
                .collect()
        })
    }

}

/// A presheaf on a truncation: a finite set of labelled elements per object
/// and, per morphism `f: x → y`, a table `sets[y] → sets[x]`.
#[derive(Debug, Clone)]
pub struct Presheaf {
    site: Arc<TruncatedSite>,
    sets: Vec<Arc<Vec<String>>>,
    actions: Vec<Arc<Vec<usize>>>,
}

impl PartialEq for Presheaf {
    fn eq(&self, other: &Self) -> bool {
        self.site.bound == other.site.bound
            && self.site.scope == other.site.scope
            && self.sets == other.sets
            && self.actions == other.actions
    }
}

impl Eq for Presheaf {}

impl Presheaf {
    /// Builds and validates a presheaf from raw tables.
    pub fn new(site: Arc<TruncatedSite>, sets: Vec<Vec<String>>, actions: Vec<Vec<usize>>) -> Result<Self> {
        let p = Presheaf::unchecked(site, sets, actions);
        p.validate()?;
        Ok(p)
    }

    pub fn unchecked(site: Arc<TruncatedSite>, sets: Vec<Vec<String>>, actions: Vec<Vec<usize>>) -> Self {
        Presheaf {
            site,
            sets: sets.into_iter().map(Arc::new).collect(),
            actions: actions.into_iter().map(Arc::new).collect(),
        }
    }

    pub fn site(&self) -> &Arc<TruncatedSite> {
        &self.site
    }

    pub fn bound(&self) -> usize {
        self.site.bound
    }

    pub fn sets(&self) -> impl ExactSizeIterator<Item = &[String]> {
        self.sets.iter().map(|s| s.as_slice())
    }

    pub fn set(&self, x: usize) -> &[String] {
        &self.sets[x]
    }

    pub fn action(&self, f: usize) -> &[usize] {
        &self.actions[f]
    }

    pub fn actions(&self) -> impl ExactSizeIterator<Item = &[usize]> {
        self.actions.iter().map(|a| a.as_slice())
    }

    /// Table shapes, identities act as identities, and
    /// `action(g∘f) = action(f) ∘ action(g)`. Checking this for indecomposable
    /// `g` suffices.
    pub fn validate(&self) -> Result<()> {
        let site = &self.site;
        if self.sets.len() != site.objects.len() || self.actions.len() != site.morphisms.len() {
            return Err(Error::Presheaf("table sizes do not match the truncation".into()));
        }
        for (f, table) in self.actions.iter().enumerate() {
            let (x, y) = site.ends[f];
            if table.len() != self.sets[y].len() || table.iter().any(|&v| v >= self.sets[x].len()) {
                return Err(Error::Presheaf(format!("action of {} has the wrong shape", site.morphisms[f])));
            }
        }
        for (x, &id) in site.identities.iter().enumerate() {
            if self.actions[id].iter().enumerate().any(|(i, &v)| i != v) {
                return Err(Error::Presheaf(format!(
                    "identity of \"{}\" does not act as the identity",
                    site.objects[x]
                )));
            }
        }
        for &(g, f, gf) in &site.generating_composites {
            let (ag, af, agf) = (&self.actions[g], &self.actions[f], &self.actions[gf]);
            if let Some(i) = (0..agf.len()).find(|&i| agf[i] != af[ag[i]]) {
                return Err(Error::Presheaf(format!(
                    "composite {} acts on `{}` differently from its factors",
                    site.morphisms[gf],
                    self.sets[site.ends[gf].1][i]
                )));
            }
        }
        Ok(())
    }

    /// Restriction to the inert morphisms.
    pub fn restrict_to_inerts(&self) -> Presheaf {
        let inert = TruncatedSite::new(self.site.bound, Scope::Inert);
        let actions = inert
            .morphisms
            .iter()
            .map(|f| self.actions[self.site.morphism_index[f]].clone())
            .collect();
        Presheaf {
            site: inert,
            sets: self.sets.clone(),
            actions,
        }
    }
}

impl Presheaf {
    /// Restriction to the objects with at most `bound` edges.
    pub fn truncate(&self, bound: usize) -> Result<Presheaf> {
        if bound > self.site.bound {
            return Err(Error::BoundMismatch(bound, self.site.bound));
        }
        let site = TruncatedSite::new(bound, self.site.scope);
        let sets = site
            .objects
            .iter()
            .map(|x| self.sets[self.site.object_index[x]].clone())
            .collect();
        let actions = site
            .morphisms
            .iter()
            .map(|f| self.actions[self.site.morphism_index[f]].clone())
            .collect();
        Ok(Presheaf { site, sets, actions })
    }

    /// Whether the matching map at object `y` is a bijection: each element is
    /// determined by its restrictions along the non-identity morphisms into
    /// `y`, and every compatible family of such restrictions occurs.
    ///
    /// When this holds at every object with more than `k` edges, each natural
    /// transformation into this presheaf from any presheaf is determined by
    /// its components on the `k`-truncation, and every transformation there
    /// extends (objects are added in order of edges, then marks; every
    /// non-identity morphism raises one of the two).
    pub fn matching_is_bijective(&self, y: usize) -> bool {
        let m = &self.site.matching()[y];
        let gens = &m.generators;
        let mut families = std::collections::HashSet::with_capacity(self.sets[y].len());
        for t in 0..self.sets[y].len() {
            let family: Vec<usize> = gens.iter().map(|&g| self.actions[g][t]).collect();
            if !families.insert(family) {
                return false;
            }
        }
        let limit = self.sets[y].len();
        // candidates for generator j, bucketed by its first constraint
        let buckets: Vec<Vec<Vec<usize>>> = gens
            .iter()
            .enumerate()
            .map(|(j, &g)| {
                let size = self.sets[self.site.ends[g].0].len();
                match m.constraints[j].first() {
                    None => vec![(0..size).collect()],
                    Some(&(_, _, b)) => {
                        let mut out = vec![Vec::new(); self.sets[self.site.ends[b].0].len()];
                        for t in 0..size {
                            out[self.actions[b][t]].push(t);
                        }
                        out
                    }
                }
            })
            .collect();
        let mut choice = vec![0usize; gens.len()];
        let mut count = 0usize;
        self.count_families(m, &buckets, 0, &mut choice, &mut count, limit);
        count == limit
    }

    /// Counts compatible families, stopping once `limit` is exceeded.
    fn count_families(
        &self,
        m: &Matching,
        buckets: &[Vec<Vec<usize>>],
        j: usize,
        choice: &mut Vec<usize>,
        count: &mut usize,
        limit: usize,
    ) {
        if *count > limit {
            return;
        }
        if j == m.generators.len() {
            *count += 1;
            return;
        }
        let constraints = &m.constraints[j];
        let bucket = match constraints.first() {
            None => &buckets[j][0],
            Some(&(i, a, _)) => &buckets[j][self.actions[a][choice[i]]],
        };
        for &t in bucket {
            let fits = constraints
                .iter()
                .skip(1)
                .all(|&(i, a, b)| self.actions[a][choice[i]] == self.actions[b][t]);
            if fits {
                choice[j] = t;
                self.count_families(m, buckets, j + 1, choice, count, limit);
            }
        }
    }

    /// Objects with more than `k` edges where the matching map is not a
    /// bijection.
    pub fn non_coskeletal_objects(&self, k: usize) -> Vec<FatObject> {
        (0..self.site.objects.len())
            .filter(|&y| self.site.objects[y].edges() > k && !self.matching_is_bijective(y))
            .map(|y| self.site.objects[y].clone())
            .collect()
    }
}

/// Elements of the nerve at an object with `m` edges: a vertex for `m = 0`,
/// otherwise a composable morphism sequence.
fn nerve_elements(c: &RelSemiCategory, x: &FatObject) -> Vec<Vec<usize>> {
    let b = c.base();
    if x.edges() == 0 {
        return (0..b.object_count()).map(|o| vec![o]).collect();
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn extend(c: &RelSemiCategory, x: &FatObject, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let i = stack.len();
        if i == x.edges() {
            out.push(stack.clone());
            return;
        }
        let b = c.base();
        for f in 0..b.morphism_count() {
            if x.is_marked(i) && !c.is_marked(f) {
                continue;
            }
            if let Some(&prev) = stack.last() {
                if b.tgt(prev) != b.src(f) {
                    continue;
                }
            }
            stack.push(f);
            extend(c, x, stack, out);
            stack.pop();
        }
    }
    extend(c, x, &mut stack, &mut out);
    out
}

fn element_label(c: &RelSemiCategory, x: &FatObject, e: &[usize]) -> String {
    let b = c.base();
    match x.edges() {
        0 => b.objects()[e[0]].clone(),
        1 => b.name(e[0]).to_string(),
        _ => {
            let names: Vec<&str> = e.iter().map(|&f| b.name(f)).collect();
            format!("({})", names.join(","))
        }
    }
}

/// Restriction of a chain along a top, written into `out`: vertex `k` of the
/// chain, or the composites of its edges between consecutive vertices.
fn restrict_chain(c: &RelSemiCategory, chain: &[usize], n: usize, top: &[usize], out: &mut Vec<usize>) {
    let b = c.base();
    out.clear();
    if top.len() == 1 {
        let k = top[0];
        out.push(if n == 0 {
            chain[0]
        } else if k < n {
            b.src(chain[k])
        } else {
            b.tgt(chain[n - 1])
        });
        return;
    }
    out.extend(top.windows(2).map(|w| {
        let mut acc = chain[w[0]];
        for &f in &chain[w[0] + 1..w[1]] {
            acc = b.compose(f, acc).expect("chain is composable");
        }
        acc
    }));
}

/// The nerve of `c` on the truncation at `bound`.
pub fn nerve(c: &RelSemiCategory, bound: usize) -> Result<Presheaf> {
    nerve_on(c, &TruncatedSite::new(bound, Scope::All))
}

/// The nerve of `c` on a given truncation.
pub fn nerve_on(c: &RelSemiCategory, site: &Arc<TruncatedSite>) -> Result<Presheaf> {
    c.validate()?;
    let elements: Vec<Vec<Vec<usize>>> = site.objects.iter().map(|x| nerve_elements(c, x)).collect();
    // elements come out in lexicographic order, so restrictions are found
    // by binary search
    let mut buf = Vec::new();
    let actions = site
        .morphisms
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let (x, y) = site.ends[k];
            let n = site.objects[y].edges();
            elements[y]
                .iter()
                .map(|e| {
                    restrict_chain(c, e, n, f.top(), &mut buf);
                    elements[x]
                        .binary_search_by(|probe| probe.as_slice().cmp(buf.as_slice()))
                        .expect("restriction of a chain is a chain")
                })
                .collect()
        })
        .collect();
    let sets = site
        .objects
        .iter()
        .zip(&elements)
        .map(|(x, es)| es.iter().map(|e| element_label(c, x, e)).collect())
        .collect();
    Ok(Presheaf::unchecked(site.clone(), sets, actions))
}

/// The nerve of a relative graph on the inert truncation at `bound`:
/// composable edge sequences, acting by restriction to sub-intervals.
pub fn nerve0(x: &RelGraph, bound: usize) -> Presheaf {
    let site = TruncatedSite::new(bound, Scope::Inert);
    let g = x.carrier();
    let elements: Vec<Vec<Vec<usize>>> = site
        .objects
        .iter()
        .map(|obj| {
            if obj.edges() == 0 {
                return (0..x.vertex_count()).map(|v| vec![v]).collect();
            }
            let mut out = Vec::new();
            for e in 0..x.edge_count() {
                if obj.is_marked(0) && !x.is_marked(e) {
                    continue;
                }
                let mut stack = vec![e];
                extend_edges(x, obj, &mut stack, &mut out);
            }
            out
        })
        .collect();
    let index: Vec<HashMap<&[usize], usize>> = elements
        .iter()
        .map(|es| es.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect())
        .collect();
    let actions = site
        .morphisms
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let (a, b) = site.ends[k];
            let n = site.objects[b].edges();
            elements[b]
                .iter()
                .map(|e| {
                    let top = f.top();
                    let restricted: Vec<usize> = if top.len() == 1 {
                        let v = top[0];
                        vec![if n == 0 {
                            e[0]
                        } else if v < n {
                            g.src(e[v])
                        } else {
                            g.tgt(e[n - 1])
                        }]
                    } else {
                        e[top[0]..top[top.len() - 1]].to_vec()
                    };
                    index[a][restricted.as_slice()]
                })
                .collect()
        })
        .collect();
    let sets = site
        .objects
        .iter()
        .zip(&elements)
        .map(|(obj, es)| {
            es.iter()
                .map(|e| match obj.edges() {
                    0 => format!("v{}", e[0]),
                    1 => format!("e{}", e[0]),
                    _ => {
                        let parts: Vec<String> = e.iter().map(|i| format!("e{i}")).collect();
                        format!("({})", parts.join(","))
                    }
                })
                .collect()
        })
        .collect();
    Presheaf::unchecked(site, sets, actions)
}

fn extend_edges(x: &RelGraph, obj: &FatObject, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let i = stack.len();
    if i == obj.edges() {
        out.push(stack.clone());
        return;
    }
    let g = x.carrier();
    let v = g.tgt(stack[i - 1]);
    for e in 0..x.edge_count() {
        if g.src(e) == v && (!obj.is_marked(i) || x.is_marked(e)) {
            stack.push(e);
            extend_edges(x, obj, stack, out);
            stack.pop();
        }
    }
}

/// Whether `sub` embeds in `p` by label: every set of `sub` is a subset of
/// the corresponding set of `p`, and actions agree on it.
pub fn is_subpresheaf(sub: &Presheaf, p: &Presheaf) -> bool {
    if sub.site.bound != p.site.bound || sub.site.scope != p.site.scope {
        return false;
    }
    let position: Vec<HashMap<&str, usize>> = p
        .sets
        .iter()
        .map(|s| s.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect())
        .collect();
    let embed: Option<Vec<Vec<usize>>> = sub
        .sets
        .iter()
        .enumerate()
        .map(|(x, s)| s.iter().map(|l| position[x].get(l.as_str()).copied()).collect())
        .collect();
    let Some(embed) = embed else { return false };
    (0..sub.actions.len()).all(|f| {
        let (x, y) = sub.site.ends[f];
        (0..sub.sets[y].len()).all(|i| embed[x][sub.actions[f][i]] == p.actions[f][embed[y][i]])
    })
}

/// One failure of the Segal condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegalFailure {
    pub object: String,
    pub kind: SegalFailureKind,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegalFailureKind {
    /// Two elements have the same Segal-core family.
    NotInjective,
    /// A compatible family is not hit.
    NotSurjective,
    /// Two marked elements lie over one edge.
    MarkedNotSeparated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegalReport {
    pub passed: bool,
    pub checked_objects: usize,
    pub failures: Vec<SegalFailure>,
}

impl SegalReport {
    pub fn first_failure(&self) -> Option<&SegalFailure> {
        self.failures.first()
    }
}

/// Checks that each `sets[x]` is the set of compatible families over the
/// Segal core of `x` (vertices, edges, and marked edges), and that marked
/// elements over an edge are unique.
pub fn segal_check(p: &Presheaf) -> Result<SegalReport> {
    p.validate()?;
    let site = &p.site;
    let mut failures = Vec::new();
    let mut checked = 0;
    let (Some(v), Some(u), Some(m)) = (
        site.object(&FatObject::default()),
        site.object(&FatObject::flat(1)),
        site.object(&FatObject::sharp(1)),
    ) else {
        return Ok(SegalReport {
            passed: true,
            checked_objects: 0,
            failures,
        });
    };
    checked += 1;
    let forget = &p.actions[site.segal_core[m][0].0];
    let mut over: Vec<Option<usize>> = vec![None; p.sets[u].len()];
    for (i, &e) in forget.iter().enumerate() {
        if let Some(j) = over[e] {
            failures.push(SegalFailure {
                object: "m".into(),
                kind: SegalFailureKind::MarkedNotSeparated,
                detail: format!("`{}` and `{}` both lie over `{}`", p.sets[m][j], p.sets[m][i], p.sets[u][e]),
            });
            break;
        }
        over[e] = Some(i);
    }
    let source = &p.actions[site.morphism(&FatMorphism::new(FatObject::default(), FatObject::flat(1), vec![0])?).expect("vertex inclusion")];
    let target = &p.actions[site.morphism(&FatMorphism::new(FatObject::default(), FatObject::flat(1), vec![1])?).expect("vertex inclusion")];
    // marked lifts per edge element
    let mut lifts = vec![0usize; p.sets[u].len()];
    for &e in forget.iter() {
        lifts[e] += 1;
    }
    let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); p.sets[v].len()];
    for e in 0..p.sets[u].len() {
        out_of[source[e]].push(e);
    }
    for (xi, x) in site.objects.iter().enumerate() {
        if x.edges() >= 2 {
            checked += 1;
            failures.extend(segal_at(p, xi, x, &lifts, &out_of, target));
        }
    }
    Ok(SegalReport {
        passed: failures.is_empty(),
        checked_objects: checked,
        failures,
    })
}

fn segal_at(p: &Presheaf, xi: usize, x: &FatObject, lifts: &[usize], out_of: &[Vec<usize>], target: &[usize]) -> Option<SegalFailure> {
    let core = &p.site.segal_core[xi];
    let size = p.sets[xi].len();
    // vertices are determined by edges, so a family is its edge and
    // marked-edge restrictions
    let width = core.len() + core.iter().filter(|(_, m)| m.is_some()).count();
    let mut families = Vec::with_capacity(size * width);
    for s in 0..size {
        for &(edge, marked) in core {
            families.push(p.actions[edge][s]);
            if let Some(mm) = marked {
                families.push(p.actions[mm][s]);
            }
        }
    }
    let family = |s: usize| &families[s * width..(s + 1) * width];
    let mut by_family: Vec<usize> = (0..size).collect();
    by_family.sort_by(|&a, &b| family(a).cmp(family(b)).then(a.cmp(&b)));
    if let Some(w) = by_family.windows(2).find(|w| family(w[0]) == family(w[1])) {
        return Some(SegalFailure {
            object: x.to_string(),
            kind: SegalFailureKind::NotInjective,
            detail: format!("`{}` and `{}` have the same restrictions", p.sets[xi][w[0]], p.sets[xi][w[1]]),
        });
    }
    let count = count_families(x, lifts, out_of, target);
    (count != size as u64).then(|| SegalFailure {
        object: x.to_string(),
        kind: SegalFailureKind::NotSurjective,
        detail: format!("{size} elements but {count} compatible families"),
    })
}

/// Number of chains `e_0, ..., e_{n-1}` of edge elements, each marked edge
/// weighted by its number of marked lifts.
fn count_families(x: &FatObject, lifts: &[usize], out_of: &[Vec<usize>], target: &[usize]) -> u64 {
    let n = x.edges();
    let weight = |i: usize, e: usize| if x.is_marked(i) { lifts[e] as u64 } else { 1 };
    // ways[e] = number of partial families ending with edge element e
    let mut ways: Vec<u64> = (0..lifts.len()).map(|e| weight(0, e)).collect();
    for i in 1..n {
        let mut next = vec![0u64; lifts.len()];
        for (e, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for &f in &out_of[target[e]] {
                next[f] += w * weight(i, f);
            }
        }
        ways = next;
    }
    ways.iter().sum()
}

/// A natural transformation, as one table `p.sets[x] → q.sets[x]` per object.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NatTrans {
    pub components: Vec<Vec<usize>>,
}

/// All natural transformations `p → q`, sorted by component tables.
pub fn enumerate_nat(p: &Presheaf, q: &Presheaf) -> Result<Vec<NatTrans>> {
    let mut out = Vec::new();
    for_each_nat(p, &NatIndex::new(p), q, &NatIndex::new(q), |components| {
        out.push(NatTrans {
            components: components.to_vec(),
        })
    })?;
    out.sort();
    Ok(out)
}

/// Search tables for a presheaf, used on either side of [`for_each_nat`].
///
/// As a target, elements are bucketed by their restriction along the first
/// indecomposable morphism into their object; the other indecomposables are
/// checked directly. Every morphism is a composite of indecomposables, so an
/// image is admissible exactly when all those restrictions match.
///
/// As a source, elements are ordered so that each comes right after the last
/// of its restrictions; a failed match then cuts the search as early as
/// possible.
#[derive(Debug, Clone)]
pub struct NatIndex {
    /// Global element id of `(y, s)` is `offsets[y] + s`.
    offsets: Vec<usize>,
    /// All action tables laid end to end; the table of `f` starts at
    /// `action_offsets[f]`.
    action_offsets: Vec<usize>,
    actions: Vec<u32>,
    /// Bucket `v` of object `y` is `items[bucket_starts[bucket_base[y] + v]..
    /// bucket_starts[bucket_base[y] + v + 1]]`.
    bucket_base: Vec<usize>,
    bucket_starts: Vec<u32>,
    items: Vec<u32>,
    /// Elements in search order, as `(object, global id)`.
    order: Vec<(u32, u32)>,
    /// Restrictions of `order[k]` are `sources[starts[k]..starts[k + 1]]`,
    /// as `(morphism, global id of the restriction)`.
    starts: Vec<u32>,
    sources: Vec<(u32, u32)>,
}

impl NatIndex {
    pub fn new(p: &Presheaf) -> Self {
        let site = &p.site;
        let offsets: Vec<usize> = p
            .sets
            .iter()
            .scan(0, |acc, s| {
                let o = *acc;
                *acc += s.len();
                Some(o)
            })
            .collect();
        let total: usize = p.sets.iter().map(|s| s.len()).sum();
        let mut action_offsets = Vec::with_capacity(p.actions.len());
        let mut actions = Vec::new();
        for table in &p.actions {
            action_offsets.push(actions.len());
            actions.extend(table.iter().map(|&v| v as u32));
        }
        let mut bucket_base = Vec::with_capacity(site.objects.len());
        let mut bucket_starts = Vec::new();
        let mut items = Vec::new();
        for y in 0..site.objects.len() {
            bucket_base.push(bucket_starts.len());
            let mut buckets: Vec<Vec<u32>> = match site.generators[y].first() {
                None => vec![Vec::new()],
                Some(&g) => vec![Vec::new(); p.sets[site.ends[g].0].len()],
            };
            for t in 0..p.sets[y].len() {
                let v = site.generators[y].first().map_or(0, |&g| p.actions[g][t]);
                buckets[v].push(t as u32);
            }
            for b in buckets {
                bucket_starts.push(items.len() as u32);
                items.extend(b);
            }
        }
        bucket_starts.push(items.len() as u32);
        let offsets_ref = &offsets;
        let restrictions = |y: usize, s: usize| {
            site.generators[y]
                .iter()
                .map(move |&f| (f, offsets_ref[site.ends[f].0] + p.actions[f][s]))
        };
        // readiness order: place an element as soon as all its restrictions are
        let mut waiting = vec![0usize; total];
        let mut dependents: Vec<Vec<(usize, usize)>> = vec![Vec::new(); total];
        for y in 0..site.objects.len() {
            for s in 0..p.sets[y].len() {
                let mut deps: Vec<usize> = restrictions(y, s).map(|(_, d)| d).collect();
                deps.sort_unstable();
                deps.dedup();
                waiting[offsets[y] + s] = deps.len();
                for d in deps {
                    dependents[d].push((y, s));
                }
            }
        }
        let mut placed = vec![false; total];
        let mut order = Vec::with_capacity(total);
        let mut starts = Vec::with_capacity(total + 1);
        let mut sources = Vec::new();
        let mut stack = Vec::new();
        for y in 0..site.objects.len() {
            for s in 0..p.sets[y].len() {
                stack.push((y, s));
                while let Some((y, s)) = stack.pop() {
                    let id = offsets[y] + s;
                    if placed[id] {
                        continue;
                    }
                    placed[id] = true;
                    order.push((y as u32, id as u32));
                    starts.push(sources.len() as u32);
                    sources.extend(restrictions(y, s).map(|(f, d)| (f as u32, d as u32)));
                    for &(dy, ds) in dependents[id].iter().rev() {
                        let did = offsets[dy] + ds;
                        waiting[did] -= 1;
                        if waiting[did] == 0 {
                            stack.push((dy, ds));
                        }
                    }
                }
            }
        }
        starts.push(sources.len() as u32);
        NatIndex {
            offsets,
            action_offsets,
            actions,
            bucket_base,
            bucket_starts,
            items,
            order,
            starts,
            sources,
        }
    }
}

/// Calls `visit` with the component tables of every natural transformation
/// `p → q`; `pi` and `qi` are the indices of `p` and `q`.
pub fn for_each_nat<F: FnMut(&[Vec<usize>])>(
    p: &Presheaf,
    pi: &NatIndex,
    q: &Presheaf,
    qi: &NatIndex,
    mut visit: F,
) -> Result<()> {
    if p.site.bound != q.site.bound || p.site.scope != q.site.scope {
        return Err(Error::BoundMismatch(p.site.bound, q.site.bound));
    }
    let mut components: Vec<Vec<usize>> = p.sets.iter().map(|s| vec![0; s.len()]).collect();
    let offsets = &pi.offsets;
    search_nat(pi, qi, |image| {
        for (y, c) in components.iter_mut().enumerate() {
            for (s, v) in c.iter_mut().enumerate() {
                *v = image[offsets[y] + s] as usize;
            }
        }
        visit(&components);
    });
    Ok(())
}

/// Number of natural transformations `p → q`.
pub fn count_nat(p: &Presheaf, pi: &NatIndex, q: &Presheaf, qi: &NatIndex) -> Result<usize> {
    if p.site.bound != q.site.bound || p.site.scope != q.site.scope {
        return Err(Error::BoundMismatch(p.site.bound, q.site.bound));
    }
    let mut n = 0;
    search_nat(pi, qi, |_| n += 1);
    Ok(n)
}

/// Depth-first search over `pi.order`; `visit` receives the image of every
/// element by global id.
fn search_nat<F: FnMut(&[u32])>(pi: &NatIndex, qi: &NatIndex, mut visit: F) {
    thread_local! {
        static SCRATCH: std::cell::RefCell<(Vec<u32>, Vec<(u32, u32)>)> = const { std::cell::RefCell::new((Vec::new(), Vec::new())) };
    }
    let (mut image, mut cursor) = SCRATCH.with(|s| std::mem::take(&mut *s.borrow_mut()));
    let n = pi.order.len();
    image.clear();
    image.resize(n, 0);
    // cursor[k]: next bucket position to try at depth k, and its end
    cursor.clear();
    cursor.resize(n + 1, (0, 0));
    search_from(pi, qi, &mut image, &mut cursor, &mut visit);
    SCRATCH.with(|s| *s.borrow_mut() = (image, cursor));
}

fn search_from<F: FnMut(&[u32])>(pi: &NatIndex, qi: &NatIndex, image: &mut [u32], cursor: &mut [(u32, u32)], visit: &mut F) {
    let n = pi.order.len();
    let mut k = 0;
    let open = |k: usize, image: &[u32]| -> (u32, u32) {
        let (y, _) = pi.order[k];
        let base = qi.bucket_base[y as usize];
        let (a, b) = (pi.starts[k] as usize, pi.starts[k + 1] as usize);
        let v = if a < b { image[pi.sources[a].1 as usize] as usize } else { 0 };
        (qi.bucket_starts[base + v], qi.bucket_starts[base + v + 1])
    };
    if n == 0 {
        visit(image);
        return;
    }
    cursor[0] = open(0, image);
    loop {
        let (pos, end) = cursor[k];
        if pos == end {
            if k == 0 {
                return;
            }
            k -= 1;
            continue;
        }
        cursor[k].0 += 1;
        let t = qi.items[pos as usize];
        let (a, b) = (pi.starts[k] as usize, pi.starts[k + 1] as usize);
        let fits = pi.sources[a..b]
            .iter()
            .skip(1)
            .all(|&(f, d)| qi.actions[qi.action_offsets[f as usize] + t as usize] == image[d as usize]);
        if !fits {
            continue;
        }
        image[pi.order[k].1 as usize] = t;
        if k + 1 == n {
            visit(image);
            continue;
        }
        k += 1;
        cursor[k] = open(k, image);
    }
}

/// Whether the tables commute with every action.
pub fn is_natural(p: &Presheaf, q: &Presheaf, n: &NatTrans) -> bool {
    let site = &p.site;
    (0..site.morphisms.len()).all(|f| {
        let (x, y) = site.ends[f];
        (0..p.sets[y].len()).all(|s| n.components[x][p.actions[f][s]] == q.actions[f][n.components[y][s]])
    })
}

/// The natural transformation induced by a functor between nerves: apply the
/// functor to every chain.
pub fn nerve_on_functor(c: &RelSemiCategory, d: &RelSemiCategory, f: &RelFunctor, site: &Arc<TruncatedSite>) -> NatTrans {
    let index: Vec<HashMap<Vec<usize>, usize>> = site
        .objects
        .iter()
        .map(|x| nerve_elements(d, x).into_iter().enumerate().map(|(i, e)| (e, i)).collect())
        .collect();
    let components = site
        .objects
        .iter()
        .enumerate()
        .map(|(xi, x)| {
            nerve_elements(c, x)
                .into_iter()
                .map(|e| {
                    let image: Vec<usize> = if x.edges() == 0 {
                        vec![f.object_map[e[0]]]
                    } else {
                        e.iter().map(|&m| f.morphism_map[m]).collect()
                    };
                    index[xi][&image]
                })
                .collect()
        })
        .collect();
    NatTrans { components }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NerveTheoremReport {
    pub bound: usize,
    pub functors: usize,
    pub natural_transformations: usize,
    /// `F ↦ N(F)` lands in the natural transformations and hits each once.
    pub bijection: bool,
}

impl NerveTheoremReport {
    pub fn passed(&self) -> bool {
        self.functors == self.natural_transformations && self.bijection
    }
}

/// Compares `RelFunctor(c, d)` with `Nat(N c, N d)` through `F ↦ N(F)`,
/// enumerating both sides in full.
pub fn nerve_theorem_check(c: &RelSemiCategory, d: &RelSemiCategory, bound: usize) -> Result<NerveTheoremReport> {
    let site = TruncatedSite::new(bound, Scope::All);
    let (nc, nd) = (nerve_on(c, &site)?, nerve_on(d, &site)?);
    let functors = enumerate_functors(c, d);
    let nats = enumerate_nat(&nc, &nd)?;
    let mut images = Vec::with_capacity(functors.len());
    let mut bijection = true;
    for f in &functors {
        let n = nerve_on_functor(c, d, f, &site);
        bijection &= is_natural(&nc, &nd, &n);
        images.push(n);
    }
    images.sort();
    images.dedup();
    bijection &= images.len() == functors.len() && images == nats;
    Ok(NerveTheoremReport {
        bound,
        functors: functors.len(),
        natural_transformations: nats.len(),
        bijection,
    })
}

/// Counts for one pair, from nerves already built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NerveCounts {
    pub functors: usize,
    pub natural_transformations: usize,
    /// Every transformation restricts, on vertices and edges, to a
    /// marking-preserving semifunctor.
    pub restrictions_are_functors: bool,
}

/// Counts `RelFunctor(c, d)` and `Nat(nc, nd)` without storing either, and
/// checks that each transformation restricts to a functor.
///
/// If the Segal maps of `nd` are injective, restriction is injective too, so
/// equal counts make it a bijection whose inverse is `F ↦ N(F)`.
pub fn nerve_theorem_counts(
    c: &RelSemiCategory,
    d: &RelSemiCategory,
    nc: &Presheaf,
    nci: &NatIndex,
    nd: &Presheaf,
    ndi: &NatIndex,
) -> Result<NerveCounts> {
    if nc.site.bound != nd.site.bound || nc.site.scope != nd.site.scope {
        return Err(Error::BoundMismatch(nc.site.bound, nd.site.bound));
    }
    if nc.site.bound == 0 {
        return Err(Error::Precondition("nerve theorem check needs bound at least 1".into()));
    }
    let (v, u) = core_objects(&nc.site);
    let (vo, uo) = (nci.offsets[v], nci.offsets[u]);
    let (cb, db) = (c.base(), d.base());
    let entries = cb.compose_entries();
    let mut nats = 0;
    let mut valid = true;
    search_nat(nci, ndi, |image| {
        nats += 1;
        let obj = |o: usize| image[vo + o] as usize;
        let mor = |m: usize| image[uo + m] as usize;
        valid &= (0..cb.morphism_count()).all(|m| {
            db.src(mor(m)) == obj(cb.src(m)) && db.tgt(mor(m)) == obj(cb.tgt(m)) && (!c.is_marked(m) || d.is_marked(mor(m)))
        }) && entries
            .iter()
            .all(|&(g, f, gf)| db.compose(mor(g), mor(f)) == Some(mor(gf)));
    });
    Ok(NerveCounts {
        functors: count_functors(c, d),
        natural_transformations: nats,
        restrictions_are_functors: valid,
    })
}

fn core_objects(site: &TruncatedSite) -> (usize, usize) {
    let v = site.object(&FatObject::default()).expect("bound covers \"\"");
    let u = site.object(&FatObject::flat(1)).expect("bound covers \"u\"");
    (v, u)
}

/// Rebuilds a transformation from its components at `""`, `"u"` and `"m"`
/// alone, by forcing every higher component through the restriction index.
/// Returns `None` if some element has no image or more than one.
pub fn reconstruct_from_core(p: &Presheaf, q: &Presheaf, core: &NatTrans) -> Option<NatTrans> {
    let site = &p.site;
    let mut components = core.components.clone();
    for (y, x) in site.objects.iter().enumerate() {
        if x.edges() <= 1 {
            continue;
        }
        for s in 0..p.sets[y].len() {
            let key: Vec<usize> = site.incoming[y]
                .iter()
                .map(|&f| components[site.ends[f].0][p.actions[f][s]])
                .collect();
            let matches: Vec<usize> = (0..q.sets[y].len())
                .filter(|&t| site.incoming[y].iter().map(|&f| q.actions[f][t]).eq(key.iter().copied()))
                .collect();
            if matches.len() != 1 {
                return None;
            }
            components[y][s] = matches[0];
        }
    }
    Some(NatTrans { components })
}

/// JSON form of a presheaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafJson {
    pub bound: usize,
    pub sets: std::collections::BTreeMap<String, Vec<String>>,
    pub actions: Vec<ActionJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionJson {
    pub morphism: FatMorphism,
    pub map: std::collections::BTreeMap<String, String>,
}

impl From<&Presheaf> for PresheafJson {
    fn from(p: &Presheaf) -> Self {
        let site = &p.site;
        PresheafJson {
            bound: site.bound,
            sets: site
                .objects
                .iter()
                .zip(&p.sets)
                .map(|(x, s)| (x.to_string(), s.to_vec()))
                .collect(),
            actions: site
                .morphisms
                .iter()
                .enumerate()
                .filter(|(_, f)| !f.is_identity())
                .map(|(k, f)| {
                    let (x, y) = site.ends[k];
                    ActionJson {
                        morphism: f.clone(),
                        map: p.actions[k]
                            .iter()
                            .enumerate()
                            .map(|(i, &v)| (p.sets[y][i].clone(), p.sets[x][v].clone()))
                            .collect(),
                    }
                })
                .collect(),
        }
    }
}

impl PresheafJson {
    /// Rebuilds the presheaf on the full truncation; identity actions may be
    /// omitted.
    pub fn to_presheaf(&self) -> Result<Presheaf> {
        let site = TruncatedSite::new(self.bound, Scope::All);
        let mut sets = vec![Vec::new(); site.objects.len()];
        for (name, elems) in &self.sets {
            let x: FatObject = name.parse()?;
            let i = site
                .object(&x)
                .ok_or_else(|| Error::Presheaf(format!("object \"{x}\" exceeds bound {}", self.bound)))?;
            sets[i] = elems.clone();
        }
        let positions: Vec<HashMap<&str, usize>> = sets
            .iter()
            .map(|s| s.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect())
            .collect();
        let mut actions: Vec<Option<Vec<usize>>> = vec![None; site.morphisms.len()];
        for (x, &id) in site.identities.iter().enumerate() {
            actions[id] = Some((0..sets[x].len()).collect());
        }
        for a in &self.actions {
            let k = site
                .morphism(&a.morphism)
                .ok_or_else(|| Error::Presheaf(format!("morphism {} exceeds the bound", a.morphism)))?;
            let (x, y) = site.ends[k];
            let mut table = Vec::with_capacity(sets[y].len());
            for label in &sets[y] {
                let image = a
                    .map
                    .get(label)
                    .ok_or_else(|| Error::Presheaf(format!("action of {} misses `{label}`", a.morphism)))?;
                table.push(
                    *positions[x]
                        .get(image.as_str())
                        .ok_or_else(|| Error::Presheaf(format!("unknown element `{image}`")))?,
                );
            }
            actions[k] = Some(table);
        }
        let actions = actions
            .into_iter()
            .enumerate()
            .map(|(k, a)| a.ok_or_else(|| Error::Presheaf(format!("missing action of {}", site.morphisms[k]))))
            .collect::<Result<Vec<_>>>()?;
        Presheaf::new(site, sets, actions)
    }
}

/// Single-cell mutations used to test the Segal checker.
pub mod mutation {
    use super::*;

    /// Adds a copy of element `s` at object `x`: it restricts like `s` and
    /// nothing restricts to it.
    pub fn phantom(p: &Presheaf, x: usize, s: usize) -> Presheaf {
        let site = &p.site;
        let mut out = p.clone();
        let label = format!("{}'", p.sets[x][s]);
        Arc::make_mut(&mut out.sets[x]).push(label);
        let new = p.sets[x].len();
        for f in 0..site.morphisms.len() {
            if site.ends[f].1 == x {
                let table = Arc::make_mut(&mut out.actions[f]);
                table.push(if site.ends[f].0 == x { new } else { table[s] });
            }
        }
        out
    }

    /// Whether element `s` at `x` is the restriction of nothing else.
    pub fn deletable(p: &Presheaf, x: usize, s: usize) -> bool {
        let site = &p.site;
        (0..site.morphisms.len()).all(|f| {
            let (a, b) = site.ends[f];
            a != x || b == x || !p.actions[f].contains(&s)
        })
    }

    /// Removes element `s` at `x`, which must be [`deletable`].
    pub fn delete(p: &Presheaf, x: usize, s: usize) -> Presheaf {
        let site = &p.site;
        let mut out = p.clone();
        Arc::make_mut(&mut out.sets[x]).remove(s);
        for f in 0..site.morphisms.len() {
            let (a, b) = site.ends[f];
            if a != x && b != x {
                continue;
            }
            let table = Arc::make_mut(&mut out.actions[f]);
            if b == x {
                table.remove(s);
            }
            if a == x {
                for v in table.iter_mut() {
                    if *v > s {
                        *v -= 1;
                    }
                }
            }
        }
        out
    }

    /// Outcome of [`sweep`].
    #[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
    pub struct Sweep {
        pub phantoms: u64,
        pub deletions: u64,
        pub redirects: u64,
        /// Mutants that still pass [`segal_check`](super::segal_check).
        pub survivors: Vec<String>,
    }

    impl Sweep {
        pub fn tried(&self) -> u64 {
            self.phantoms + self.deletions + self.redirects
        }

        pub fn merge(&mut self, other: Sweep) {
            self.phantoms += other.phantoms;
            self.deletions += other.deletions;
            self.redirects += other.redirects;
            self.survivors.extend(other.survivors);
        }
    }

    /// Runs [`segal_check`](super::segal_check) on every mutant of `p`:
    /// a phantom of each element over an object with at least two edges or
    /// over `"m"`, the deletion of each [`deletable`] element over an object
    /// with at least two edges, and, for each decomposable morphism, each
    /// action entry moved to the next element. Redirects are skipped unless
    /// `redirects` is set.
    pub fn sweep(p: &Presheaf, redirects: bool) -> Sweep {
        let site = &p.site;
        let mut out = Sweep::default();
        let passes = |m: &Presheaf| super::segal_check(m).map(|r| r.passed).unwrap_or(false);
        for (x, obj) in site.objects.iter().enumerate() {
            let phantoms = obj.edges() >= 2 || (obj.edges() == 1 && obj.is_marked(0));
            for s in 0..p.sets[x].len() {
                if phantoms {
                    out.phantoms += 1;
                    if passes(&phantom(p, x, s)) {
                        out.survivors.push(format!("phantom of `{}` at \"{obj}\"", p.sets[x][s]));
                    }
                }
                if obj.edges() >= 2 && deletable(p, x, s) {
                    out.deletions += 1;
                    if passes(&delete(p, x, s)) {
                        out.survivors.push(format!("deletion of `{}` at \"{obj}\"", p.sets[x][s]));
                    }
                }
            }
        }
        if redirects {
            out.merge(sweep_redirects(p));
        }
        out
    }

    /// The redirect part of [`sweep`]. Only the composition laws through the
    /// changed entry can break, so those are tried first: a broken one makes
    /// [`Presheaf::validate`], and with it the Segal check, fail. The full
    /// check runs only when none of them breaks.
    pub fn sweep_redirects(p: &Presheaf) -> Sweep {
        let site = &p.site;
        let passes = |m: &Presheaf| super::segal_check(m).map(|r| r.passed).unwrap_or(false);
        let mut out = Sweep::default();
        let mut decomposable: Vec<usize> = site.generating_composites.iter().map(|&(_, _, gf)| gf).collect();
        decomposable.sort_unstable();
        decomposable.dedup();
        let mut m = p.clone();
        for f in decomposable {
            let size = p.sets[site.ends[f].0].len();
            if size < 2 {
                continue;
            }
            let laws: Vec<(usize, usize, usize)> = site
                .generating_composites
                .iter()
                .copied()
                .filter(|&(g, h, gh)| g == f || h == f || gh == f)
                .collect();
            for entry in 0..p.actions[f].len() {
                let old = m.actions[f][entry];
                Arc::make_mut(&mut m.actions[f])[entry] = (old + 1) % size;
                out.redirects += 1;
                let broken = laws.iter().any(|&(g, h, gh)| {
                    let (ag, ah, agh) = (&m.actions[g], &m.actions[h], &m.actions[gh]);
                    (0..agh.len()).any(|i| agh[i] != ah[ag[i]])
                });
                if !broken && passes(&m) {
                    out.survivors.push(format!("redirect of {} at entry {entry}", site.morphisms[f]));
                }
                Arc::make_mut(&mut m.actions[f])[entry] = old;
            }
        }
        out
    }

    /// Redirects one entry of the action table of morphism `f`.
    pub fn redirect(p: &Presheaf, f: usize, entry: usize, value: usize) -> Presheaf {
        let mut out = p.clone();
        Arc::make_mut(&mut out.actions[f])[entry] = value;
        out
    }
}
