//! Directed multigraphs, relative graphs and the bounded free monads on them.
//!
//! Edges are identified by position. [`Graph::new`] sorts its input so that
//! equal edge multisets give equal values; graphs derived from other data
//! (forgetful images, pullbacks, truncated free objects) keep the positional
//! order their construction defines.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// A graph with its edge list sorted.
    pub fn new(vertex_count: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        check_endpoints(vertex_count, &edges)?;
        edges.sort_unstable();
        Ok(Graph { vertex_count, edges })
    }

    pub fn from_edges_unsorted(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        debug_assert!(check_endpoints(vertex_count, &edges).is_ok());
        Graph { vertex_count, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn src(&self, e: usize) -> usize {
        self.edges[e].0
    }

    pub fn tgt(&self, e: usize) -> usize {
        self.edges[e].1
    }

    /// Outgoing edge indices per vertex, ascending.
    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertex_count];
        for (e, &(s, _)) in self.edges.iter().enumerate() {
            out[s].push(e);
        }
        out
    }

    pub fn has_cycle(&self) -> bool {
        // Kahn's algorithm
        let mut indegree = vec![0usize; self.vertex_count];
        for &(_, t) in &self.edges {
            indegree[t] += 1;
        }
        let out = self.out_edges();
        let mut stack: Vec<usize> = (0..self.vertex_count).filter(|&v| indegree[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = stack.pop() {
            removed += 1;
            for &e in &out[v] {
                let t = self.edges[e].1;
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    stack.push(t);
                }
            }
        }
        removed < self.vertex_count
    }
}

fn check_endpoints(vertex_count: usize, edges: &[(usize, usize)]) -> Result<()> {
    match edges.iter().find(|&&(s, t)| s >= vertex_count || t >= vertex_count) {
        Some(&(s, t)) => Err(Error::IndexOutOfRange {
            what: "edge endpoint",
            index: s.max(t),
            valid: format!("0..{vertex_count}"),
        }),
        None => Ok(()),
    }
}

/// A graph with a wide subgraph of marked edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelGraph {
    carrier: Graph,
    marked: Vec<bool>,
}

impl RelGraph {
    /// Sorts `(src, tgt, marked)` triples into canonical order.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize, bool)>) -> Result<Self> {
        let mut edges = edges;
        edges.sort_unstable();
        let marked = edges.iter().map(|e| e.2).collect();
        let carrier = Graph::new(vertex_count, edges.iter().map(|e| (e.0, e.1)).collect())?;
        Ok(RelGraph { carrier, marked })
    }

    pub fn from_parts_unsorted(carrier: Graph, marked: Vec<bool>) -> Self {
        assert_eq!(carrier.edge_count(), marked.len(), "one marking bit per edge");
        RelGraph { carrier, marked }
    }

    pub fn carrier(&self) -> &Graph {
        &self.carrier
    }

    pub fn marked(&self) -> &[bool] {
        &self.marked
    }

    pub fn is_marked(&self, e: usize) -> bool {
        self.marked[e]
    }

    pub fn vertex_count(&self) -> usize {
        self.carrier.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.carrier.edges.len()
    }

    /// Edge triples in positional order.
    pub fn edge_triples(&self) -> Vec<(usize, usize, bool)> {
        self.carrier
            .edges
            .iter()
            .zip(&self.marked)
            .map(|(&(s, t), &m)| (s, t, m))
            .collect()
    }

    /// All paths of length `n ≥ 1`, lexicographic in their edge sequences.
    pub fn paths(&self, n: usize) -> Vec<Path> {
        if n == 0 {
            return Vec::new();
        }
        let out = self.carrier.out_edges();
        let mut result = Vec::new();
        let mut stack = Vec::with_capacity(n);
        for e in 0..self.edge_count() {
            stack.push(e);
            self.extend_paths(n, &out, &mut stack, &mut result);
            stack.pop();
        }
        result
    }

    fn extend_paths(&self, n: usize, out: &[Vec<usize>], stack: &mut Vec<usize>, result: &mut Vec<Path>) {
        if stack.len() == n {
            result.push(Path {
                source: self.carrier.src(stack[0]),
                target: self.carrier.tgt(stack[n - 1]),
                edges: stack.clone(),
            });
            return;
        }
        let v = self.carrier.tgt(*stack.last().expect("non-empty"));
        for &e in &out[v] {
            stack.push(e);
            self.extend_paths(n, out, stack, result);
            stack.pop();
        }
    }

    pub fn path_is_marked(&self, p: &Path) -> bool {
        p.edges.iter().all(|&e| self.marked[e])
    }

    /// Whether the graph is `0 → 1 → ... → m` with edges in that order.
    pub fn linear_marking(&self) -> Option<Vec<bool>> {
        let m = self.edge_count();
        if self.vertex_count() != m + 1 {
            return None;
        }
        let ok = self.carrier.edges.iter().enumerate().all(|(i, &(s, t))| s == i && t == i + 1);
        ok.then(|| self.marked.clone())
    }
}

impl fmt::Display for RelGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vertices;", self.vertex_count())?;
        for (s, t, m) in self.edge_triples() {
            write!(f, " {s}{}{t}", if m { "=>" } else { "->" })?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct RelGraphJson {
    vertices: usize,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    src: usize,
    tgt: usize,
    #[serde(default)]
    marked: bool,
}

impl Serialize for RelGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RelGraphJson {
            vertices: self.vertex_count(),
            edges: self
                .edge_triples()
                .into_iter()
                .map(|(src, tgt, marked)| EdgeJson { src, tgt, marked })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RelGraph {
    /// Keeps the edge order given in the input, since edge identity is positional.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RelGraphJson::deserialize(d)?;
        let edges: Vec<(usize, usize)> = j.edges.iter().map(|e| (e.src, e.tgt)).collect();
        check_endpoints(j.vertices, &edges).map_err(serde::de::Error::custom)?;
        Ok(RelGraph {
            carrier: Graph {
                vertex_count: j.vertices,
                edges,
            },
            marked: j.edges.iter().map(|e| e.marked).collect(),
        })
    }
}

/// A non-empty sequence of composable edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Path {
    source: usize,
    target: usize,
    edges: Vec<usize>,
}

impl Path {
    pub fn new(x: &RelGraph, edges: Vec<usize>) -> Result<Path> {
        if edges.is_empty() {
            return Err(Error::InvalidMap("paths have length at least one".into()));
        }
        if let Some(&e) = edges.iter().find(|&&e| e >= x.edge_count()) {
            return Err(Error::IndexOutOfRange {
                what: "edge",
                index: e,
                valid: format!("0..{}", x.edge_count()),
            });
        }
        let g = x.carrier();
        if let Some(w) = edges.windows(2).find(|w| g.tgt(w[0]) != g.src(w[1])) {
            return Err(Error::InvalidMap(format!("edges {} and {} do not meet", w[0], w[1])));
        }
        Ok(Path {
            source: g.src(edges[0]),
            target: g.tgt(*edges.last().expect("non-empty")),
            edges,
        })
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `p` followed by `q`.
pub fn concat(p: &Path, q: &Path) -> Result<Path> {
    if p.target != q.source {
        return Err(Error::CompositionMismatch {
            cod: format!("vertex {}", p.target),
            dom: format!("vertex {}", q.source),
        });
    }
    let mut edges = p.edges.clone();
    edges.extend_from_slice(&q.edges);
    Ok(Path {
        source: p.source,
        target: q.target,
        edges,
    })
}

/// The linear relative graph `0 → 1 → ... → m`.
pub fn linear_relgraph(marking: &[bool]) -> RelGraph {
    let m = marking.len();
    RelGraph {
        carrier: Graph {
            vertex_count: m + 1,
            edges: (0..m).map(|i| (i, i + 1)).collect(),
        },
        marked: marking.to_vec(),
    }
}

/// One vertex, one marked loop.
pub fn terminal_relgraph() -> RelGraph {
    RelGraph {
        carrier: Graph {
            vertex_count: 1,
            edges: vec![(0, 0)],
        },
        marked: vec![true],
    }
}

/// Parses a `{u,m}` marking string.
pub fn parse_marking(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            'u' => Ok(false),
            'm' => Ok(true),
            other => Err(Error::Parse(format!("marking character `{other}` is not u or m"))),
        })
        .collect()
}

impl FromStr for RelGraph {
    type Err = Error;

    /// A `{u,m}` string is read as a linear relative graph; anything else as JSON.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('{') {
            serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))
        } else {
            Ok(linear_relgraph(&parse_marking(t)?))
        }
    }
}

/// A map of relative graphs, by vertex and edge tables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RelGraphMap {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

impl RelGraphMap {
    pub fn identity(x: &RelGraph) -> RelGraphMap {
        RelGraphMap {
            vertex_map: (0..x.vertex_count()).collect(),
            edge_map: (0..x.edge_count()).collect(),
        }
    }

    pub fn is_valid(&self, dom: &RelGraph, cod: &RelGraph) -> bool {
        self.vertex_map.len() == dom.vertex_count()
            && self.edge_map.len() == dom.edge_count()
            && self.vertex_map.iter().all(|&v| v < cod.vertex_count())
            && self.edge_map.iter().all(|&e| e < cod.edge_count())
            && (0..dom.edge_count()).all(|e| {
                let (s, t) = dom.carrier().edges[e];
                let img = self.edge_map[e];
                cod.carrier().edges[img] == (self.vertex_map[s], self.vertex_map[t])
                    && (!dom.is_marked(e) || cod.is_marked(img))
            })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &RelGraphMap) -> RelGraphMap {
        RelGraphMap {
            vertex_map: other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            edge_map: other.edge_map.iter().map(|&e| self.edge_map[e]).collect(),
        }
    }

    pub fn apply_path(&self, p: &Path) -> Path {
        Path {
            source: self.vertex_map[p.source],
            target: self.vertex_map[p.target],
            edges: p.edges.iter().map(|&e| self.edge_map[e]).collect(),
        }
    }
}

/// All maps `x → y`, lexicographic in `(vertex_map, edge_map)`.
pub fn enumerate_relgraph_maps(x: &RelGraph, y: &RelGraph) -> Vec<RelGraphMap> {
    let mut out = Vec::new();
    let mut by_ends: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (e, &(s, t)) in y.carrier().edges.iter().enumerate() {
        by_ends.entry((s, t)).or_default().push(e);
    }
    let mut vertex_map = vec![0; x.vertex_count()];
    enumerate_vertex_maps(x, y, &by_ends, 0, &mut vertex_map, &mut out);
    out
}

fn enumerate_vertex_maps(
    x: &RelGraph,
    y: &RelGraph,
    by_ends: &HashMap<(usize, usize), Vec<usize>>,
    i: usize,
    vertex_map: &mut Vec<usize>,
    out: &mut Vec<RelGraphMap>,
) {
    if i == vertex_map.len() {
        let mut edge_map = vec![0; x.edge_count()];
        enumerate_edge_maps(x, y, by_ends, 0, vertex_map, &mut edge_map, out);
        return;
    }
    for v in 0..y.vertex_count() {
        vertex_map[i] = v;
        enumerate_vertex_maps(x, y, by_ends, i + 1, vertex_map, out);
    }
}

fn enumerate_edge_maps(
    x: &RelGraph,
    y: &RelGraph,
    by_ends: &HashMap<(usize, usize), Vec<usize>>,
    e: usize,
    vertex_map: &[usize],
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
    let (s, t) = x.carrier().edges[e];
    let Some(pool) = by_ends.get(&(vertex_map[s], vertex_map[t])) else {
        return;
    };
    for &img in pool {
        if x.is_marked(e) && !y.is_marked(img) {
            continue;
        }
        edge_map[e] = img;
        enumerate_edge_maps(x, y, by_ends, e + 1, vertex_map, edge_map, out);
    }
}

/// The pullback `G ×_K H` with its two projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pullback {
    pub graph: RelGraph,
    pub left: RelGraphMap,
    pub right: RelGraphMap,
}

/// Pullback of `f: g → k` and `h_map: h → k`. Vertices and edges are the
/// fiber products, listed lexicographically by their component pairs; an
/// edge is marked iff both components are.
pub fn pullback_relgraph(
    g: &RelGraph,
    f: &RelGraphMap,
    h: &RelGraph,
    h_map: &RelGraphMap,
    k: &RelGraph,
) -> Result<Pullback> {
    if !f.is_valid(g, k) || !h_map.is_valid(h, k) {
        return Err(Error::Precondition("pullback legs must be maps into the same graph".into()));
    }
    let mut vertex_index = HashMap::new();
    let mut left_v = Vec::new();
    let mut right_v = Vec::new();
    for a in 0..g.vertex_count() {
        for b in 0..h.vertex_count() {
            if f.vertex_map[a] == h_map.vertex_map[b] {
                vertex_index.insert((a, b), left_v.len());
                left_v.push(a);
                right_v.push(b);
            }
        }
    }
    let mut edges = Vec::new();
    let mut marked = Vec::new();
    let mut left_e = Vec::new();
    let mut right_e = Vec::new();
    for a in 0..g.edge_count() {
        for b in 0..h.edge_count() {
            if f.edge_map[a] == h_map.edge_map[b] {
                let (sa, ta) = g.carrier().edges[a];
                let (sb, tb) = h.carrier().edges[b];
                edges.push((vertex_index[&(sa, sb)], vertex_index[&(ta, tb)]));
                marked.push(g.is_marked(a) && h.is_marked(b));
                left_e.push(a);
                right_e.push(b);
            }
        }
    }
    Ok(Pullback {
        graph: RelGraph::from_parts_unsorted(Graph::from_edges_unsorted(left_v.len(), edges), marked),
        left: RelGraphMap {
            vertex_map: left_v,
            edge_map: left_e,
        },
        right: RelGraphMap {
            vertex_map: right_v,
            edge_map: right_e,
        },
    })
}

/// The free relative graph on `x` truncated at path length `bound`.
///
/// Edge `k` of `graph` is the path `paths[k]`; paths are listed by length,
/// then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeBounded {
    pub bound: usize,
    pub graph: RelGraph,
    pub paths: Vec<Path>,
    index: HashMap<Vec<usize>, usize>,
}

impl FreeBounded {
    pub fn edge_of(&self, p: &Path) -> Option<usize> {
        self.index.get(&p.edges).copied()
    }

    pub fn path_count(&self) -> usize {
        self.paths.len()
    }
}

pub fn free_bounded(x: &RelGraph, bound: usize) -> Result<FreeBounded> {
    if bound == 0 {
        return Err(Error::Precondition("truncation bound must be at least 1".into()));
    }
    let paths: Vec<Path> = (1..=bound).flat_map(|n| x.paths(n)).collect();
    let edges = paths.iter().map(|p| (p.source, p.target)).collect();
    let marked = paths.iter().map(|p| x.path_is_marked(p)).collect();
    let index = paths.iter().enumerate().map(|(k, p)| (p.edges.clone(), k)).collect();
    Ok(FreeBounded {
        bound,
        graph: RelGraph::from_parts_unsorted(Graph::from_edges_unsorted(x.vertex_count(), edges), marked),
        paths,
        index,
    })
}

/// The unit: edge `e` as a path of length one.
pub fn unit_edge(x: &RelGraph, e: usize) -> Result<Path> {
    Path::new(x, vec![e])
}

/// The multiplication: concatenates a composable sequence of paths. The
/// result must fit in the truncation `bound`.
pub fn mult(pp: &[Path], bound: usize) -> Result<Path> {
    let (first, rest) = pp
        .split_first()
        .ok_or_else(|| Error::Precondition("cannot multiply an empty path of paths".into()))?;
    let mut acc = first.clone();
    for p in rest {
        acc = concat(&acc, p)?;
    }
    if acc.len() > bound {
        return Err(Error::TruncationOverflow {
            length: acc.len(),
            bound,
        });
    }
    Ok(acc)
}

/// The image of a map under the bounded free functor.
pub fn free_on_map(f: &RelGraphMap, dom: &FreeBounded, cod: &FreeBounded) -> RelGraphMap {
    RelGraphMap {
        vertex_map: f.vertex_map.clone(),
        edge_map: dom
            .paths
            .iter()
            .map(|p| cod.edge_of(&f.apply_path(p)).expect("image path within bound"))
            .collect(),
    }
}

/// The unique map into the terminal relative graph.
pub fn terminal_map(x: &RelGraph) -> RelGraphMap {
    RelGraphMap {
        vertex_map: vec![0; x.vertex_count()],
        edge_map: vec![0; x.edge_count()],
    }
}

/// Canonical form of a relative graph under vertex relabelling: the least
/// sorted edge list over all vertex permutations.
pub fn canonical_form(x: &RelGraph) -> RelGraph {
    let n = x.vertex_count();
    let mut best: Option<Vec<(usize, usize, bool)>> = None;
    for perm in permutations(n) {
        let mut edges: Vec<(usize, usize, bool)> =
            x.edge_triples().into_iter().map(|(s, t, m)| (perm[s], perm[t], m)).collect();
        edges.sort_unstable();
        if best.as_ref().map_or(true, |b| edges < *b) {
            best = Some(edges);
        }
    }
    RelGraph::new(n, best.unwrap_or_default()).expect("permuted endpoints stay in range")
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut out);
    out.sort();
    out
}

fn permute(perm: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == perm.len() {
        out.push(perm.clone());
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, out);
        perm.swap(k, i);
    }
}

/// Every relative graph with `1..=max_vertices` vertices and at most
/// `max_edges` edges, one per isomorphism class, in canonical order.
pub fn relgraph_universe(max_vertices: usize, max_edges: usize) -> Vec<RelGraph> {
    let mut seen = BTreeSet::new();
    for v in 1..=max_vertices {
        let mut kinds = Vec::new();
        for s in 0..v {
            for t in 0..v {
                kinds.push((s, t, false));
                kinds.push((s, t, true));
            }
        }
        let mut chosen = Vec::new();
        multisets(&kinds, 0, max_edges, &mut chosen, &mut |edges| {
            let g = RelGraph::new(v, edges.to_vec()).expect("endpoints in range");
            seen.insert((g.vertex_count(), g.edge_count(), canonical_form(&g)));
        });
    }
    seen.into_iter().map(|(_, _, g)| g).collect()
}

fn multisets<T: Copy>(kinds: &[T], from: usize, room: usize, chosen: &mut Vec<T>, emit: &mut impl FnMut(&[T])) {
    emit(chosen);
    if room == 0 {
        return;
    }
    for k in from..kinds.len() {
        chosen.push(kinds[k]);
        multisets(kinds, k, room - 1, chosen, emit);
        chosen.pop();
    }
}
