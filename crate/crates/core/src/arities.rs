//! Generic maps into bounded free objects, the arity construction, the φ/ψ
//! correspondence between linear relative graphs and fat Delta, and the
//! cartesianness checks for the free monads.
//!
//! Maps `A → F(X)` into a free object are Kleisli data: a vertex table and
//! one path of `X` per edge of `A`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fat::{FatMorphism, FatObject};
use crate::relgraph::{
    enumerate_relgraph_maps, free_bounded, linear_relgraph, pullback_relgraph, terminal_map, terminal_relgraph,
    Graph, Path, RelGraph, RelGraphMap,
};

/// A map `A → F(X)`: vertices to vertices, edges to paths.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KleisliMap {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<Path>,
}

impl KleisliMap {
    /// Endpoints match, marked edges go to marked paths, and every path fits
    /// in the truncation.
    pub fn is_valid(&self, a: &RelGraph, x: &RelGraph, bound: usize) -> bool {
        self.vertex_map.len() == a.vertex_count()
            && self.edge_map.len() == a.edge_count()
            && self.vertex_map.iter().all(|&v| v < x.vertex_count())
            && (0..a.edge_count()).all(|e| {
                let p = &self.edge_map[e];
                let (s, t) = a.carrier().edges()[e];
                Path::new(x, p.edges().to_vec()).is_ok()
                    && p.len() <= bound
                    && p.source() == self.vertex_map[s]
                    && p.target() == self.vertex_map[t]
                    && (!a.is_marked(e) || x.path_is_marked(p))
            })
    }

    /// `F(g) ∘ self`.
    pub fn then(&self, g: &RelGraphMap) -> KleisliMap {
        KleisliMap {
            vertex_map: self.vertex_map.iter().map(|&v| g.vertex_map[v]).collect(),
            edge_map: self.edge_map.iter().map(|p| g.apply_path(p)).collect(),
        }
    }
}

/// A square
///
/// ```text
///   A --top--> F(X)
///   |           |
/// left        F(right)
///   v           v
///  F(B) --F(bottom)--> F(Y)
/// ```
///
/// whose fillers are maps `δ: B → X` with `F(δ) ∘ left = top` and
/// `right ∘ δ = bottom`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericSquare {
    pub generator: RelGraph,
    pub middle: RelGraph,
    pub left: KleisliMap,
    pub ambient: RelGraph,
    pub top: KleisliMap,
    pub target: RelGraph,
    pub right: RelGraphMap,
    pub bottom: RelGraphMap,
    pub bound: usize,
}

impl GenericSquare {
    pub fn validate(&self) -> Result<()> {
        let ok = self.left.is_valid(&self.generator, &self.middle, self.bound)
            && self.top.is_valid(&self.generator, &self.ambient, self.bound)
            && self.right.is_valid(&self.ambient, &self.target)
            && self.bottom.is_valid(&self.middle, &self.target);
        if !ok {
            return Err(Error::Precondition("square has an invalid side".into()));
        }
        if self.top.then(&self.right) != self.left.then(&self.bottom) {
            return Err(Error::Precondition("square does not commute".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FillerVerdict {
    UniqueFiller { filler: RelGraphMap },
    NoFiller,
    MultipleFillers { fillers: Vec<RelGraphMap> },
}

/// Exhaustive filler search over all maps `B → X`.
pub fn check_generic(square: &GenericSquare) -> Result<FillerVerdict> {
    square.validate()?;
    let mut fillers: Vec<RelGraphMap> = enumerate_relgraph_maps(&square.middle, &square.ambient)
        .into_iter()
        .filter(|d| square.right.compose(d) == square.bottom && square.left.then(d) == square.top)
        .collect();
    Ok(match fillers.len() {
        0 => FillerVerdict::NoFiller,
        1 => FillerVerdict::UniqueFiller {
            filler: fillers.remove(0),
        },
        _ => FillerVerdict::MultipleFillers { fillers },
    })
}

/// Uniformly marked strings: `[n]^♭` or `[n]^♯`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Uniform {
    Flat,
    Sharp,
}

impl Uniform {
    pub fn marked(self) -> bool {
        self == Uniform::Sharp
    }
}

/// A generic map out of a one-edge generator followed by the free image of
/// the terminal map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericFactorization {
    pub generator: RelGraph,
    pub middle: RelGraph,
    pub generic: KleisliMap,
    pub free_map: RelGraphMap,
}

/// The string of length `n` in `F(1)` factors through `[n]^σ` by the maximal path.
pub fn generic_factor_string(sigma: Uniform, n: usize) -> Result<GenericFactorization> {
    if n == 0 {
        return Err(Error::Precondition("strings have length at least one".into()));
    }
    let generator = linear_relgraph(&[sigma.marked()]);
    let middle = linear_relgraph(&vec![sigma.marked(); n]);
    let generic = KleisliMap {
        vertex_map: vec![0, n],
        edge_map: vec![Path::new(&middle, (0..n).collect())?],
    };
    let free_map = terminal_map(&middle);
    Ok(GenericFactorization {
        generator,
        middle,
        generic,
        free_map,
    })
}

/// Alternating marking choice and block lengths `m_1, ..., m_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AritySpec {
    pub epsilon: u8,
    pub lengths: Vec<usize>,
}

impl AritySpec {
    pub fn new(epsilon: u8, lengths: Vec<usize>) -> Result<Self> {
        if epsilon > 1 {
            return Err(Error::Precondition(format!("epsilon must be 0 or 1, got {epsilon}")));
        }
        if lengths.is_empty() || lengths.contains(&0) {
            return Err(Error::Precondition("block lengths must be a non-empty list of positive numbers".into()));
        }
        Ok(AritySpec { epsilon, lengths })
    }

    /// Whether block `i` is marked: `ε = 0` starts marked, then alternates.
    pub fn block_marked(&self, i: usize) -> bool {
        (i + self.epsilon as usize) % 2 == 0
    }

    /// The alternating linear generator with one edge per block.
    pub fn generator(&self) -> RelGraph {
        let marking: Vec<bool> = (0..self.lengths.len()).map(|i| self.block_marked(i)).collect();
        linear_relgraph(&marking)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arity {
    pub eta_p: FatObject,
    pub generator: RelGraph,
    pub middle: RelGraph,
    pub generic: KleisliMap,
}

/// Concatenates uniform blocks and sends edge `i` of the generator to the
/// path of length `m_i` starting at `m_1 + ... + m_{i-1}`.
pub fn arity_of(spec: &AritySpec) -> Arity {
    let mut marking = Vec::new();
    for (i, &m) in spec.lengths.iter().enumerate() {
        marking.extend(std::iter::repeat(spec.block_marked(i)).take(m));
    }
    let eta_p = FatObject::new(marking);
    let middle = psi(&eta_p);
    let mut vertex_map = vec![0];
    let mut edge_map = Vec::new();
    let mut start = 0;
    for &m in &spec.lengths {
        edge_map.push(Path::new(&middle, (start..start + m).collect()).expect("block lies in the string"));
        start += m;
        vertex_map.push(start);
    }
    Arity {
        eta_p,
        generator: spec.generator(),
        middle,
        generic: KleisliMap { vertex_map, edge_map },
    }
}

/// Every arity spec with total length at most `max_total`, both values of ε.
pub fn arity_specs(max_total: usize) -> Vec<AritySpec> {
    let mut out = Vec::new();
    for epsilon in 0..=1u8 {
        let mut current = Vec::new();
        compositions(max_total, &mut current, &mut |c| {
            out.push(AritySpec {
                epsilon,
                lengths: c.to_vec(),
            })
        });
    }
    out
}

fn compositions(room: usize, current: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if !current.is_empty() {
        emit(current);
    }
    for k in 1..=room {
        current.push(k);
        compositions(room - k, current, emit);
        current.pop();
    }
}

/// φ: the fat Delta object of a linear relative graph.
///
/// Collapses each connected component of the marked part to a point; the
/// resulting quotient of `[m]` is the epimorphism of the object.
pub fn phi(alpha: &RelGraph) -> Result<FatObject> {
    let marking = alpha
        .linear_marking()
        .ok_or_else(|| Error::Precondition("φ is defined on linear relative graphs".into()))?;
    let components = marked_components(&marking);
    let epi = crate::delta::OrdinalMap::new(
        crate::delta::Ordinal(marking.len()),
        crate::delta::Ordinal(*components.last().expect("at least one vertex")),
        components,
    )?;
    FatObject::from_epi(&epi)
}

/// Component index of each vertex of a linear graph, components of the
/// marked part numbered left to right.
fn marked_components(marking: &[bool]) -> Vec<usize> {
    let n = marking.len() + 1;
    // union-find over vertices joined by marked edges
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while parent[r] != r {
            r = parent[r];
        }
        parent[v] = r;
        r
    }
    for (i, &m) in marking.iter().enumerate() {
        if m {
            let (a, b) = (find(&mut parent, i), find(&mut parent, i + 1));
            parent[b.max(a)] = a.min(b);
        }
    }
    let mut label: HashMap<usize, usize> = HashMap::new();
    (0..n)
        .map(|v| {
            let r = find(&mut parent, v);
            let next = label.len();
            *label.entry(r).or_insert(next)
        })
        .collect()
}

/// φ on a map of linear relative graphs: its vertex table becomes the top.
pub fn phi_on_morphism(g: &RelGraphMap, dom: &RelGraph, cod: &RelGraph) -> Result<FatMorphism> {
    if !g.is_valid(dom, cod) {
        return Err(Error::InvalidMap("not a map of relative graphs".into()));
    }
    FatMorphism::new(phi(dom)?, phi(cod)?, g.vertex_map.clone())
}

/// The bottom of φ(g), read off from the map it induces on marked components.
pub fn phi_bottom(g: &RelGraphMap, dom: &RelGraph, cod: &RelGraph) -> Result<Vec<usize>> {
    let dm = dom.linear_marking().ok_or_else(|| Error::Precondition("linear domain".into()))?;
    let cm = cod.linear_marking().ok_or_else(|| Error::Precondition("linear codomain".into()))?;
    let (dc, cc) = (marked_components(&dm), marked_components(&cm));
    let mut bottom = vec![usize::MAX; dc.last().map_or(0, |&k| k + 1)];
    for (v, &c) in dc.iter().enumerate() {
        let image = cc[g.vertex_map[v]];
        if bottom[c] != usize::MAX && bottom[c] != image {
            return Err(Error::InvalidMap("map does not respect marked components".into()));
        }
        bottom[c] = image;
    }
    Ok(bottom)
}

/// ψ: the linear relative graph marking the edges the epi collapses.
pub fn psi(x: &FatObject) -> RelGraph {
    let epi = x.epi();
    let marking: Vec<bool> = (0..x.edges()).map(|i| epi.apply(i) == epi.apply(i + 1)).collect();
    linear_relgraph(&marking)
}

/// ψ on an inert morphism: the top as a graph map.
pub fn psi_on_morphism(f: &FatMorphism) -> Result<RelGraphMap> {
    if !f.is_inert() {
        return Err(Error::Precondition(format!("ψ is defined on inert morphisms; {f} is not inert")));
    }
    Ok(RelGraphMap {
        vertex_map: f.top().to_vec(),
        edge_map: f.top()[..f.dom().edges()].to_vec(),
    })
}

/// Verdict of a generic-map sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericSweep {
    pub squares: u64,
    pub unique: u64,
    /// Up to ten squares without a unique filler, described in words.
    pub failures: Vec<String>,
    pub failure_count: u64,
}

impl GenericSweep {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

/// Checks `left: A → F(B)` against every commuting square whose right leg is
/// a map `γ: X → Y` between graphs of `universe`.
///
/// Write `φ_X(δ) = F(δ) ∘ left`. The squares over a fixed `γ` are the pairs
/// `(α, β)` with `F(γ) ∘ α = φ_Y(β)`, and each `δ: B → X` yields the square
/// `(φ_X(δ), γ ∘ δ)`. When `φ_X` is injective this assignment is injective,
/// so every square has exactly one filler iff the number of squares equals
/// `|hom(B, X)|`. Otherwise each `β` is examined separately.
pub fn generic_sweep(
    generator: &RelGraph,
    middle: &RelGraph,
    left: &KleisliMap,
    universe: &[RelGraph],
    bound: usize,
) -> GenericSweep {
    assert!(left.is_valid(generator, middle, bound), "left leg must be a valid map into F(B)");
    let lengths: Vec<usize> = left.edge_map.iter().map(Path::len).collect();
    // φ_Y as a multiset, per target graph
    let images: Vec<HashMap<KleisliMap, u64>> = universe
        .par_iter()
        .map(|y| {
            let mut m = HashMap::new();
            for beta in enumerate_relgraph_maps(middle, y) {
                *m.entry(left.then(&beta)).or_insert(0u64) += 1;
            }
            m
        })
        .collect();
    let per_x: Vec<GenericSweep> = universe
        .par_iter()
        .map(|x| {
            let mut acc = GenericSweep::default();
            let deltas = enumerate_relgraph_maps(middle, x);
            let mut phi_x: Vec<KleisliMap> = deltas.iter().map(|d| left.then(d)).collect();
            phi_x.sort_unstable();
            phi_x.dedup();
            let injective = phi_x.len() == deltas.len();
            let alphas = kleisli_maps_of_shape(generator, x, &lengths);
            for (y, image) in universe.iter().zip(&images) {
                if image.is_empty() {
                    continue;
                }
                for gamma in enumerate_relgraph_maps(x, y) {
                    if injective {
                        let squares: u64 = alphas.iter().map(|a| image.get(&a.then(&gamma)).copied().unwrap_or(0)).sum();
                        acc.squares += squares;
                        if squares == deltas.len() as u64 {
                            acc.unique += squares;
                        } else {
                            acc.failure_count += squares - deltas.len() as u64;
                            if acc.failures.len() < 10 {
                                acc.failures.push(format!(
                                    "X = {x}; Y = {y}; γ = {:?}: {squares} squares but {} candidate fillers",
                                    gamma.edge_map,
                                    deltas.len()
                                ));
                            }
                        }
                    } else {
                        sweep_per_beta(generator, middle, left, x, y, &gamma, &mut acc);
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = GenericSweep::default();
    for s in per_x {
        total.squares += s.squares;
        total.unique += s.unique;
        total.failure_count += s.failure_count;
        for f in s.failures {
            if total.failures.len() < 10 {
                total.failures.push(f);
            }
        }
    }
    total
}

/// Filler counts over each `β: B → Y` separately.
fn sweep_per_beta(
    generator: &RelGraph,
    middle: &RelGraph,
    left: &KleisliMap,
    x: &RelGraph,
    y: &RelGraph,
    gamma: &RelGraphMap,
    acc: &mut GenericSweep,
) {
    for beta in enumerate_relgraph_maps(middle, y) {
        let target = left.then(&beta);
        let alphas = kleisli_lifts(generator, x, gamma, &target);
        let deltas = map_lifts(middle, x, gamma, &beta);
        acc.squares += alphas.len() as u64;
        let mut hit: HashMap<KleisliMap, usize> = HashMap::new();
        for d in &deltas {
            *hit.entry(left.then(d)).or_default() += 1;
        }
        for alpha in &alphas {
            let n = hit.get(alpha).copied().unwrap_or(0);
            if n == 1 {
                acc.unique += 1;
            } else {
                acc.failure_count += 1;
                if acc.failures.len() < 10 {
                    acc.failures.push(format!(
                        "X = {x}; Y = {y}; γ = {:?}; β = {:?}; α = {:?}: {n} fillers",
                        gamma.edge_map, beta.edge_map, alpha.edge_map
                    ));
                }
            }
        }
    }
}

/// All `α: A → F(X)` sending edge `i` to a path of length `lengths[i]`.
pub fn kleisli_maps_of_shape(a: &RelGraph, x: &RelGraph, lengths: &[usize]) -> Vec<KleisliMap> {
    let path_sets: Vec<Vec<Path>> = (0..a.edge_count())
        .map(|e| {
            x.paths(lengths[e])
                .into_iter()
                .filter(|p| !a.is_marked(e) || x.path_is_marked(p))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut vertex_map = vec![0; a.vertex_count()];
    let mut edge_map: Vec<Option<Path>> = vec![None; a.edge_count()];
    let choices: Vec<Vec<usize>> = vec![(0..x.vertex_count()).collect(); a.vertex_count()];
    choose_any_vertices(a, &choices, &path_sets, 0, &mut vertex_map, &mut edge_map, &mut out);
    out
}

fn choose_any_vertices(
    a: &RelGraph,
    choices: &[Vec<usize>],
    path_sets: &[Vec<Path>],
    v: usize,
    vertex_map: &mut Vec<usize>,
    edge_map: &mut Vec<Option<Path>>,
    out: &mut Vec<KleisliMap>,
) {
    if v == vertex_map.len() {
        choose_paths(a, path_sets, 0, vertex_map, edge_map, out);
        return;
    }
    for &c in &choices[v] {
        vertex_map[v] = c;
        choose_any_vertices(a, choices, path_sets, v + 1, vertex_map, edge_map, out);
    }
}

/// All `α: A → F(X)` with `F(γ) ∘ α = target`.
fn kleisli_lifts(a: &RelGraph, x: &RelGraph, gamma: &RelGraphMap, target: &KleisliMap) -> Vec<KleisliMap> {
    let mut fibre: HashMap<usize, Vec<usize>> = HashMap::new();
    for (e, &img) in gamma.edge_map.iter().enumerate() {
        fibre.entry(img).or_default().push(e);
    }
    let mut vertex_fibre: Vec<Vec<usize>> = vec![Vec::new(); target.vertex_map.iter().max().map_or(0, |&m| m + 1)];
    for (v, &img) in gamma.vertex_map.iter().enumerate() {
        if img < vertex_fibre.len() {
            vertex_fibre[img].push(v);
        }
    }
    // lifts of each target path, keyed by endpoints
    let path_lifts: Vec<Vec<Path>> = (0..a.edge_count())
        .map(|e| {
            let p = &target.edge_map[e];
            let mut out = Vec::new();
            let mut stack = Vec::new();
            lift_path(x, &fibre, p.edges(), a.is_marked(e), &mut stack, &mut out);
            out
        })
        .collect();
    let mut out = Vec::new();
    let mut vertex_map = vec![0; a.vertex_count()];
    let mut edge_map: Vec<Option<Path>> = vec![None; a.edge_count()];
    choose_vertices(a, target, &vertex_fibre, &path_lifts, 0, &mut vertex_map, &mut edge_map, &mut out);
    out
}

fn lift_path(
    x: &RelGraph,
    fibre: &HashMap<usize, Vec<usize>>,
    target: &[usize],
    marked: bool,
    stack: &mut Vec<usize>,
    out: &mut Vec<Path>,
) {
    if stack.len() == target.len() {
        out.push(Path::new(x, stack.clone()).expect("lifted edges are composable"));
        return;
    }
    let Some(pool) = fibre.get(&target[stack.len()]) else {
        return;
    };
    for &e in pool {
        if marked && !x.is_marked(e) {
            continue;
        }
        if let Some(&prev) = stack.last() {
            if x.carrier().tgt(prev) != x.carrier().src(e) {
                continue;
            }
        }
        stack.push(e);
        lift_path(x, fibre, target, marked, stack, out);
        stack.pop();
    }
}

#[allow(clippy::too_many_arguments)]
fn choose_vertices(
    a: &RelGraph,
    target: &KleisliMap,
    vertex_fibre: &[Vec<usize>],
    path_lifts: &[Vec<Path>],
    v: usize,
    vertex_map: &mut Vec<usize>,
    edge_map: &mut Vec<Option<Path>>,
    out: &mut Vec<KleisliMap>,
) {
    if v == vertex_map.len() {
        choose_paths(a, path_lifts, 0, vertex_map, edge_map, out);
        return;
    }
    for &lift in &vertex_fibre[target.vertex_map[v]] {
        vertex_map[v] = lift;
        choose_vertices(a, target, vertex_fibre, path_lifts, v + 1, vertex_map, edge_map, out);
    }
}

fn choose_paths(
    a: &RelGraph,
    path_lifts: &[Vec<Path>],
    e: usize,
    vertex_map: &[usize],
    edge_map: &mut Vec<Option<Path>>,
    out: &mut Vec<KleisliMap>,
) {
    if e == edge_map.len() {
        out.push(KleisliMap {
            vertex_map: vertex_map.to_vec(),
            edge_map: edge_map.iter().map(|p| p.clone().expect("assigned")).collect(),
        });
        return;
    }
    let (s, t) = a.carrier().edges()[e];
    for p in &path_lifts[e] {
        if p.source() == vertex_map[s] && p.target() == vertex_map[t] {
            edge_map[e] = Some(p.clone());
            choose_paths(a, path_lifts, e + 1, vertex_map, edge_map, out);
        }
    }
}

/// All `δ: B → X` with `γ ∘ δ = β`.
fn map_lifts(b: &RelGraph, x: &RelGraph, gamma: &RelGraphMap, beta: &RelGraphMap) -> Vec<RelGraphMap> {
    // vertex lifts first, then each edge independently
    let mut out = Vec::new();
    let vertex_choices: Vec<Vec<usize>> = beta
        .vertex_map
        .iter()
        .map(|&w| (0..x.vertex_count()).filter(|&v| gamma.vertex_map[v] == w).collect())
        .collect();
    let mut vertex_map = vec![0; b.vertex_count()];
    lift_vertices(b, x, gamma, beta, &vertex_choices, 0, &mut vertex_map, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn lift_vertices(
    b: &RelGraph,
    x: &RelGraph,
    gamma: &RelGraphMap,
    beta: &RelGraphMap,
    choices: &[Vec<usize>],
    v: usize,
    vertex_map: &mut Vec<usize>,
    out: &mut Vec<RelGraphMap>,
) {
    if v == vertex_map.len() {
        let mut edge_map = vec![0; b.edge_count()];
        lift_edges(b, x, gamma, beta, vertex_map, 0, &mut edge_map, out);
        return;
    }
    for &c in &choices[v] {
        vertex_map[v] = c;
        lift_vertices(b, x, gamma, beta, choices, v + 1, vertex_map, out);
    }
}

#[allow(clippy::too_many_arguments)]
fn lift_edges(
    b: &RelGraph,
    x: &RelGraph,
    gamma: &RelGraphMap,
    beta: &RelGraphMap,
    vertex_map: &[usize],
    e: usize,
    edge_map: &mut Vec<usize>,
    out: &mut Vec<RelGraphMap>,
) {
    if e == edge_map.len() {
        out.push(RelGraphMap {
            vertex_map: vertex_map.to_vec(),
            edge_map: edge_map.clone(),
        });
        return;
    }
    let (s, t) = b.carrier().edges()[e];
    for c in 0..x.edge_count() {
        if gamma.edge_map[c] == beta.edge_map[e]
            && x.carrier().edges()[c] == (vertex_map[s], vertex_map[t])
            && (!b.is_marked(e) || x.is_marked(c))
        {
            edge_map[e] = c;
            lift_edges(b, x, gamma, beta, vertex_map, e + 1, edge_map, out);
        }
    }
}

/// The standard example of a map that is not generic: a single edge sent to
/// the first edge of `[2]^♭`, leaving the second edge unconstrained.
pub fn non_generic_example() -> (RelGraph, RelGraph, KleisliMap) {
    let generator = linear_relgraph(&[false]);
    let middle = linear_relgraph(&[false, false]);
    let left = KleisliMap {
        vertex_map: vec![0, 1],
        edge_map: vec![Path::new(&middle, vec![0]).expect("edge 0 exists")],
    };
    (generator, middle, left)
}

/// One row of a cartesianness report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartesianCheck {
    pub name: String,
    pub length: usize,
    pub passed: bool,
    /// Sizes of the two sides of the comparison, or the first mismatch.
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartesianReport {
    pub bound: usize,
    pub checks: Vec<CartesianCheck>,
}

impl CartesianReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CartesianCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Test hook: deliberately break part of the computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CartesianMutation {
    /// Make `μ₁` send every composition of this total length to the length
    /// one shorter.
    pub corrupt_mu_at: Option<usize>,
}

/// Runs the ν-square, μ-square and path-pullback checks on `x` at every
/// length up to `bound`.
pub fn check_cartesian(x: &RelGraph, bound: usize) -> Result<CartesianReport> {
    check_cartesian_with(x, bound, CartesianMutation::default())
}

pub fn check_cartesian_with(x: &RelGraph, bound: usize, mutation: CartesianMutation) -> Result<CartesianReport> {
    if bound < 2 {
        return Err(Error::Precondition("cartesianness checks need bound at least 2".into()));
    }
    let mut checks = Vec::new();
    let fx = free_bounded(x, bound)?;
    let one = terminal_relgraph();
    let f1 = free_bounded(&one, bound)?;
    let bang = terminal_map(x);
    let f_bang = crate::relgraph::free_on_map(&bang, &fx, &f1);

    // ν-square: X ≅ F(X) ×_{F(1)} 1 along ν₁
    let nu_one = RelGraphMap {
        vertex_map: vec![0],
        edge_map: vec![f1.edge_of(&Path::new(&one, vec![0])?).expect("length one loop")],
    };
    let pb = pullback_relgraph(&fx.graph, &f_bang, &one, &nu_one, &f1.graph)?;
    let comparison = RelGraphMap {
        vertex_map: (0..x.vertex_count()).collect(),
        edge_map: (0..x.edge_count())
            .map(|e| fx.edge_of(&Path::new(x, vec![e]).expect("edge")).expect("length one path"))
            .collect(),
    };
    checks.push(iso_check("nu", 1, x, &pb.graph, |v| (comparison.vertex_map[v], 0), |e| {
        (comparison.edge_map[e], 0)
    }, &pb));

    // μ-square: FF(X) ≅ F(X) ×_{F(1)} FF(1) along μ₁, degreewise in total length
    let ffx = paths_of_paths(x, bound);
    let ff1 = paths_of_paths(&one, bound);
    let ff1_graph = ff_graph(&one, &ff1);
    let mu_one = RelGraphMap {
        vertex_map: vec![0],
        edge_map: ff1
            .iter()
            .map(|pp| {
                let mut total: usize = pp.iter().map(Path::len).sum();
                if mutation.corrupt_mu_at == Some(total) && total > 1 {
                    total -= 1;
                }
                f1.edge_of(&Path::new(&one, vec![0; total]).expect("loop")).expect("within bound")
            })
            .collect(),
    };
    let pb = pullback_relgraph(&fx.graph, &f_bang, &ff1_graph, &mu_one, &f1.graph)?;
    let ff1_index: HashMap<Vec<usize>, usize> = ff1
        .iter()
        .enumerate()
        .map(|(k, pp)| (pp.iter().map(Path::len).collect(), k))
        .collect();
    let pb_edge: HashMap<(usize, usize), usize> = (0..pb.graph.edge_count())
        .map(|k| ((pb.left.edge_map[k], pb.right.edge_map[k]), k))
        .collect();
    for n in 1..=bound {
        let domain: Vec<&Vec<Path>> = ffx
            .iter()
            .filter(|pp| pp.iter().map(Path::len).sum::<usize>() == n)
            .collect();
        let codomain: Vec<usize> = (0..pb.graph.edge_count())
            .filter(|&k| fx.paths[pb.left.edge_map[k]].len() == n)
            .collect();
        let mut images = Vec::with_capacity(domain.len());
        let mut marking_ok = true;
        for pp in &domain {
            let whole = crate::relgraph::mult(pp, bound)?;
            let shape: Vec<usize> = pp.iter().map(Path::len).collect();
            let key = (fx.edge_of(&whole).expect("within bound"), ff1_index[&shape]);
            match pb_edge.get(&key) {
                Some(&k) => {
                    images.push(k);
                    let marked = pp.iter().all(|p| x.path_is_marked(p));
                    marking_ok &= marked == pb.graph.is_marked(k);
                }
                None => images.push(usize::MAX),
            }
        }
        let mut sorted = images.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let bijective = !images.contains(&usize::MAX) && sorted.len() == images.len() && sorted.len() == codomain.len();
        checks.push(CartesianCheck {
            name: "mu".into(),
            length: n,
            passed: bijective && marking_ok,
            witness: format!(
                "{} paths of paths, {} partitioned paths{}",
                domain.len(),
                codomain.len(),
                if marking_ok { "" } else { ", marking differs" }
            ),
        });
    }

    // path-set pullback preservation on three cospans
    let um = linear_relgraph(&[false, true]);
    let cospans: Vec<(&str, RelGraph, RelGraphMap, RelGraph, RelGraphMap, RelGraph)> = vec![
        ("product", x.clone(), terminal_map(x), x.clone(), terminal_map(x), one.clone()),
        (
            "identity",
            x.clone(),
            RelGraphMap::identity(x),
            x.clone(),
            RelGraphMap::identity(x),
            x.clone(),
        ),
        ("with um", x.clone(), terminal_map(x), um.clone(), terminal_map(&um), one.clone()),
    ];
    for (name, g, f, h, k, base) in &cospans {
        let pb = pullback_relgraph(g, f, h, k, base)?;
        for n in 1..=bound {
            checks.push(path_pullback_check(name, n, g, f, h, k, &pb));
        }
    }
    Ok(CartesianReport { bound, checks })
}

#[allow(clippy::too_many_arguments)]
fn iso_check(
    name: &str,
    length: usize,
    x: &RelGraph,
    p: &RelGraph,
    vertex: impl Fn(usize) -> (usize, usize),
    edge: impl Fn(usize) -> (usize, usize),
    pb: &crate::relgraph::Pullback,
) -> CartesianCheck {
    let vindex: HashMap<(usize, usize), usize> = (0..p.vertex_count())
        .map(|k| ((pb.left.vertex_map[k], pb.right.vertex_map[k]), k))
        .collect();
    let eindex: HashMap<(usize, usize), usize> = (0..p.edge_count())
        .map(|k| ((pb.left.edge_map[k], pb.right.edge_map[k]), k))
        .collect();
    let vimg: Vec<Option<usize>> = (0..x.vertex_count()).map(|v| vindex.get(&vertex(v)).copied()).collect();
    let eimg: Vec<Option<usize>> = (0..x.edge_count()).map(|e| eindex.get(&edge(e)).copied()).collect();
    let bij = |imgs: &[Option<usize>], size: usize| {
        let mut seen = vec![false; size];
        imgs.iter().all(|i| match i {
            Some(k) if !seen[*k] => {
                seen[*k] = true;
                true
            }
            _ => false,
        }) && imgs.len() == size
    };
    let marking_ok = eimg
        .iter()
        .enumerate()
        .all(|(e, k)| k.map_or(false, |k| p.is_marked(k) == x.is_marked(e)));
    let passed = bij(&vimg, p.vertex_count()) && bij(&eimg, p.edge_count()) && marking_ok;
    CartesianCheck {
        name: name.into(),
        length,
        passed,
        witness: format!(
            "{} vertices / {} edges against {} / {}",
            x.vertex_count(),
            x.edge_count(),
            p.vertex_count(),
            p.edge_count()
        ),
    }
}

/// Composable sequences of paths with total length at most `bound`, found by
/// depth-first search.
pub fn paths_of_paths(x: &RelGraph, bound: usize) -> Vec<Vec<Path>> {
    let by_source: Vec<Vec<Path>> = {
        let mut by = vec![Vec::new(); x.vertex_count()];
        for n in 1..=bound {
            for p in x.paths(n) {
                by[p.source()].push(p);
            }
        }
        by
    };
    let mut out = Vec::new();
    let mut stack: Vec<Path> = Vec::new();
    for v in 0..x.vertex_count() {
        for p in &by_source[v] {
            stack.push(p.clone());
            extend_pp(&by_source, bound - p.len(), &mut stack, &mut out);
            stack.pop();
        }
    }
    out
}

fn extend_pp(by_source: &[Vec<Path>], room: usize, stack: &mut Vec<Path>, out: &mut Vec<Vec<Path>>) {
    out.push(stack.clone());
    let v = stack.last().expect("non-empty").target();
    for p in &by_source[v] {
        if p.len() <= room {
            stack.push(p.clone());
            extend_pp(by_source, room - p.len(), stack, out);
            stack.pop();
        }
    }
}

fn ff_graph(x: &RelGraph, pps: &[Vec<Path>]) -> RelGraph {
    let edges = pps
        .iter()
        .map(|pp| (pp[0].source(), pp.last().expect("non-empty").target()))
        .collect();
    let marked = pps.iter().map(|pp| pp.iter().all(|p| x.path_is_marked(p))).collect();
    RelGraph::from_parts_unsorted(Graph::from_edges_unsorted(x.vertex_count(), edges), marked)
}

/// `Path_n(G ×_K H) → Path_n G ×_{Path_n K} Path_n H` is a bijection.
fn path_pullback_check(
    name: &str,
    n: usize,
    g: &RelGraph,
    f: &RelGraphMap,
    h: &RelGraph,
    k: &RelGraphMap,
    pb: &crate::relgraph::Pullback,
) -> CartesianCheck {
    let mut pairs: HashMap<(Vec<usize>, Vec<usize>), bool> = HashMap::new();
    let hp = h.paths(n);
    for p in g.paths(n) {
        let fp = f.apply_path(&p);
        for q in &hp {
            if k.apply_path(q) == fp {
                pairs.insert((p.edges().to_vec(), q.edges().to_vec()), g.path_is_marked(&p) && h.path_is_marked(q));
            }
        }
    }
    let expected = pairs.len();
    let mut hits = 0;
    let mut ok = true;
    let paths = pb.graph.paths(n);
    for p in &paths {
        let key = (pb.left.apply_path(p).edges().to_vec(), pb.right.apply_path(p).edges().to_vec());
        match pairs.remove(&key) {
            Some(marked) => {
                hits += 1;
                ok &= marked == pb.graph.path_is_marked(p);
            }
            None => ok = false,
        }
    }
    CartesianCheck {
        name: format!("paths ({name})"),
        length: n,
        passed: ok && hits == expected && paths.len() == expected,
        witness: format!("{} paths in the pullback, {expected} compatible pairs", paths.len()),
    }
}

/// Hom-sets of fat Delta against functors between free relative
/// semicategories on ψ of the objects.
pub fn free_functor_count(x: &FatObject, y: &FatObject) -> Result<usize> {
    let c = crate::semicat::free_relsemicat(&psi(x))?;
    let d = crate::semicat::free_relsemicat(&psi(y))?;
    Ok(crate::semicat::count_functors(&c, &d))
}
