//! Combinatorial maps `[σ, α, φ]` on signed darts.
//!
//! Every edge `e` owns exactly two darts, `e+` (head) and `e-` (tail). The
//! involution `α` pairs them and `φ = σ⁻¹α⁻¹`, so a map is fully described by
//! its labels and `σ`. Because the sign of each dart is part of its name, a
//! map here is always a directed map; the underlying undirected map is the
//! same value with the signs ignored.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::perm::Permutation;

pub type EdgeSet = BTreeSet<Label>;

/// Builds an [`EdgeSet`] from anything label-like.
pub fn edge_set<I, L>(labels: I) -> EdgeSet
where
    I: IntoIterator<Item = L>,
    L: Into<Label>,
{
    labels.into_iter().map(Into::into).collect()
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }
}

/// A half-edge: an edge label together with the head/tail sign.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Dart {
    pub edge: Label,
    pub sign: Sign,
}

impl Dart {
    pub fn new(edge: impl Into<Label>, sign: Sign) -> Self {
        Dart {
            edge: edge.into(),
            sign,
        }
    }

    pub fn plus(edge: impl Into<Label>) -> Self {
        Dart::new(edge, Sign::Plus)
    }

    pub fn minus(edge: impl Into<Label>) -> Self {
        Dart::new(edge, Sign::Minus)
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.edge, self.sign.as_char())
    }
}

/// Dart `e-` of edge index `e` is `2e`, dart `e+` is `2e + 1`; `α` is `d ^ 1`.
#[inline]
pub(crate) fn dart_index(edge: usize, sign: Sign) -> usize {
    2 * edge + (sign == Sign::Plus) as usize
}

#[inline]
pub(crate) fn edge_of(dart: usize) -> usize {
    dart / 2
}

#[inline]
fn sign_of(dart: usize) -> Sign {
    if dart & 1 == 1 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// A combinatorial map with signed darts.
///
/// Edge labels are kept sorted; rows and columns of every matrix built from
/// the map follow that order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CombMap {
    labels: Vec<Label>,
    sigma: Permutation,
}

/// A directed map is a [`CombMap`] read with its `+`/`-` sign assignment.
pub type DirectedMap = CombMap;

/// One directed edge of an [`AbstractGraph`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GraphEdge {
    pub label: Label,
    pub tail: usize,
    pub head: usize,
}

/// An abstract multigraph on vertices `0..vertex_count`. Edges carry a
/// direction; undirected uses simply ignore it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbstractGraph {
    pub vertex_count: usize,
    pub edges: Vec<GraphEdge>,
}

impl AbstractGraph {
    pub fn new(vertex_count: usize) -> Self {
        AbstractGraph {
            vertex_count,
            edges: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, label: impl Into<Label>, tail: usize, head: usize) {
        assert!(
            tail < self.vertex_count && head < self.vertex_count,
            "vertex out of range"
        );
        self.edges.push(GraphEdge {
            label: label.into(),
            tail,
            head,
        });
    }

    /// Builds a graph from endpoint pairs, labelling edges `1, 2, ...`.
    pub fn from_pairs(vertex_count: usize, pairs: &[(usize, usize)]) -> Self {
        let mut g = AbstractGraph::new(vertex_count);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            g.add_edge(i + 1, u, v);
        }
        g
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|e| e.tail == e.head)
    }

    pub fn without_loops(&self) -> AbstractGraph {
        AbstractGraph {
            vertex_count: self.vertex_count,
            edges: self
                .edges
                .iter()
                .filter(|e| e.tail != e.head)
                .cloned()
                .collect(),
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut uf = UnionFind::new(self.vertex_count);
        for e in &self.edges {
            uf.union(e.tail, e.head);
        }
        (0..self.vertex_count).all(|v| uf.find(v) == uf.find(0))
    }

    pub fn edge_position(&self, label: &Label) -> Option<usize> {
        self.edges.iter().position(|e| &e.label == label)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut y = x;
        while self.parent[y] != root {
            let next = self.parent[y];
            self.parent[y] = root;
            y = next;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Builds and validates a map from the cycles of `σ`.
///
/// An empty cycle list, or a single empty cycle, yields the empty map.
pub fn make_map(sigma_cycles: &[Vec<Dart>]) -> Result<CombMap> {
    let all_empty = sigma_cycles.iter().all(Vec::is_empty);
    if all_empty {
        if sigma_cycles.len() > 1 {
            return Err(Error::EmptyCycleInNonEmptyMap);
        }
        return Ok(CombMap::empty());
    }
    if sigma_cycles.iter().any(Vec::is_empty) {
        return Err(Error::EmptyCycleInNonEmptyMap);
    }

    let mut seen = BTreeSet::new();
    for dart in sigma_cycles.iter().flatten() {
        if !seen.insert(dart.clone()) {
            return Err(Error::DuplicateDart(dart.edge.clone(), dart.sign.as_char()));
        }
    }
    let labels: Vec<Label> = seen
        .iter()
        .map(|d| d.edge.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    for label in &labels {
        for sign in [Sign::Minus, Sign::Plus] {
            if !seen.contains(&Dart::new(label.clone(), sign)) {
                return Err(Error::MissingDart(label.clone(), sign.as_char()));
            }
        }
    }

    let index = |d: &Dart| {
        let e = labels
            .binary_search(&d.edge)
            .expect("label collected above");
        dart_index(e, d.sign)
    };
    let cycles: Vec<Vec<usize>> = sigma_cycles
        .iter()
        .map(|c| c.iter().map(index).collect())
        .collect();
    let sigma = Permutation::from_cycles(2 * labels.len(), &cycles).expect("darts are distinct");
    Ok(CombMap { labels, sigma })
}

impl CombMap {
    pub fn empty() -> Self {
        CombMap {
            labels: Vec::new(),
            sigma: Permutation::identity(0),
        }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn edge_count(&self) -> usize {
        self.labels.len()
    }

    pub fn dart_count(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn edge_index(&self, label: &Label) -> Result<usize> {
        self.labels
            .binary_search(label)
            .map_err(|_| Error::UnknownEdge(label.clone()))
    }

    pub(crate) fn sigma_perm(&self) -> &Permutation {
        &self.sigma
    }

    pub(crate) fn dart(&self, index: usize) -> Dart {
        Dart::new(self.labels[edge_of(index)].clone(), sign_of(index))
    }

    /// Index mask of an edge set, validated against the map's edges.
    pub(crate) fn edge_mask(&self, set: &EdgeSet) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.edge_count()];
        for label in set {
            mask[self.edge_index(label)?] = true;
        }
        Ok(mask)
    }

    pub(crate) fn set_from_mask(&self, mask: &[bool]) -> EdgeSet {
        self.labels
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(l, _)| l.clone())
            .collect()
    }

    pub fn alpha(&self) -> Permutation {
        Permutation::from_image((0..self.dart_count()).map(|d| d ^ 1).collect())
            .expect("involution")
    }

    /// `α^A`: swaps the two darts of each edge in the mask, fixes the rest.
    pub(crate) fn alpha_restricted(&self, mask: &[bool]) -> Permutation {
        let image = (0..self.dart_count())
            .map(|d| if mask[edge_of(d)] { d ^ 1 } else { d })
            .collect();
        Permutation::from_image(image).expect("involution")
    }

    pub fn phi(&self) -> Permutation {
        // φ(d) = σ⁻¹(α(d))
        let inv = self.sigma.inverse();
        let image = (0..self.dart_count()).map(|d| inv.apply(d ^ 1)).collect();
        Permutation::from_image(image).expect("bijection")
    }

    fn named_cycles(&self, p: &Permutation) -> Vec<Vec<Dart>> {
        p.cycles()
            .into_iter()
            .map(|c| c.into_iter().map(|d| self.dart(d)).collect())
            .collect()
    }

    /// Cycles of `σ` in canonical form. The empty map has one empty cycle.
    pub fn sigma_cycles(&self) -> Vec<Vec<Dart>> {
        if self.is_empty() {
            return vec![Vec::new()];
        }
        self.named_cycles(&self.sigma)
    }

    pub fn phi_cycles(&self) -> Vec<Vec<Dart>> {
        if self.is_empty() {
            return vec![Vec::new()];
        }
        self.named_cycles(&self.phi())
    }

    pub fn vertex_count(&self) -> usize {
        if self.is_empty() {
            1
        } else {
            self.sigma.cycle_count()
        }
    }

    pub fn face_count(&self) -> usize {
        if self.is_empty() {
            1
        } else {
            self.phi().cycle_count()
        }
    }

    pub fn is_bouquet(&self) -> bool {
        self.sigma.is_cyclic()
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut uf = UnionFind::new(self.dart_count());
        for d in 0..self.dart_count() {
            uf.union(d, self.sigma.apply(d));
            uf.union(d, d ^ 1);
        }
        (0..self.dart_count()).all(|d| uf.find(d) == uf.find(0))
    }

    /// Edge sets of the connected components, ordered by least edge.
    pub fn component_edge_sets(&self) -> Vec<EdgeSet> {
        let mut uf = UnionFind::new(self.dart_count());
        for d in 0..self.dart_count() {
            uf.union(d, self.sigma.apply(d));
            uf.union(d, d ^ 1);
        }
        let mut groups: Vec<(usize, EdgeSet)> = Vec::new();
        for e in 0..self.edge_count() {
            let root = uf.find(2 * e);
            match groups.iter_mut().find(|(r, _)| *r == root) {
                Some((_, set)) => {
                    set.insert(self.labels[e].clone());
                }
                None => groups.push((root, std::iter::once(self.labels[e].clone()).collect())),
            }
        }
        groups.into_iter().map(|(_, s)| s).collect()
    }

    pub fn genus(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let euler = 2 + self.edge_count() as isize
            - self.vertex_count() as isize
            - self.face_count() as isize;
        debug_assert!(euler >= 0 && euler % 2 == 0);
        Ok((euler / 2) as usize)
    }

    pub(crate) fn partial_dual_mask(&self, mask: &[bool]) -> CombMap {
        let sigma = self.alpha_restricted(mask).compose(&self.sigma);
        CombMap {
            labels: self.labels.clone(),
            sigma,
        }
    }

    /// `G^A = [α^A σ, α, σ⁻¹ α^{A^c}]`.
    pub fn partial_dual(&self, set: &EdgeSet) -> Result<CombMap> {
        Ok(self.partial_dual_mask(&self.edge_mask(set)?))
    }

    /// The geometric dual, i.e. the partial dual with respect to every edge.
    pub fn dual(&self) -> CombMap {
        self.partial_dual_mask(&vec![true; self.edge_count()])
    }

    /// The submap induced by `set`: darts of other edges are deleted from `σ`.
    pub fn induced_submap(&self, set: &EdgeSet) -> Result<CombMap> {
        let mask = self.edge_mask(set)?;
        Ok(self.induced_submap_mask(&mask))
    }

    pub(crate) fn induced_submap_mask(&self, mask: &[bool]) -> CombMap {
        let kept: Vec<usize> = (0..self.edge_count()).filter(|&e| mask[e]).collect();
        let mut new_index = vec![usize::MAX; self.edge_count()];
        for (i, &e) in kept.iter().enumerate() {
            new_index[e] = i;
        }
        let remap = |d: usize| 2 * new_index[edge_of(d)] + (d & 1);
        let mut image = vec![0; 2 * kept.len()];
        for &e in &kept {
            for d in [2 * e, 2 * e + 1] {
                let mut next = self.sigma.apply(d);
                while !mask[edge_of(next)] {
                    next = self.sigma.apply(next);
                }
                image[remap(d)] = remap(next);
            }
        }
        CombMap {
            labels: kept.iter().map(|&e| self.labels[e].clone()).collect(),
            sigma: Permutation::from_image(image).expect("restriction of a bijection"),
        }
    }

    /// Whether `α^T σ` is a single cycle, for an edge mask over this map.
    pub(crate) fn is_quasitree_mask(&self, mask: &[bool]) -> bool {
        let n = self.dart_count();
        if n == 0 {
            return true;
        }
        let step = |d: usize| {
            let s = self.sigma.apply(d);
            if mask[edge_of(s)] {
                s ^ 1
            } else {
                s
            }
        };
        let mut x = step(0);
        let mut steps = 1;
        while x != 0 {
            x = step(x);
            steps += 1;
        }
        steps == n
    }

    /// Same test on a bit mask; requires at most 64 edges.
    #[inline]
    pub(crate) fn is_quasitree_bits(&self, bits: u64) -> bool {
        let n = self.dart_count();
        if n == 0 {
            return true;
        }
        let image = self.sigma.image();
        let mut x = 0usize;
        let mut steps = 0;
        loop {
            let s = image[x];
            x = s ^ ((bits >> (s >> 1)) & 1) as usize;
            steps += 1;
            if x == 0 {
                return steps == n;
            }
        }
    }

    pub fn is_spanning_quasitree(&self, set: &EdgeSet) -> Result<bool> {
        let mask = self.edge_mask(set)?;
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.is_quasitree_mask(&mask))
    }

    /// Vertex index (canonical `σ`-cycle order) of every dart.
    pub(crate) fn dart_vertices(&self) -> Vec<usize> {
        let mut vertex = vec![0; self.dart_count()];
        for (v, cycle) in self.sigma.cycles().into_iter().enumerate() {
            for d in cycle {
                vertex[d] = v;
            }
        }
        vertex
    }

    /// A BFS spanning tree of the underlying graph, scanning edges in label
    /// order. Its edge set always induces a one-face spanning submap.
    pub fn find_spanning_quasitree(&self) -> Result<EdgeSet> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let mask = self.spanning_tree_mask();
        Ok(self.set_from_mask(&mask))
    }

    pub(crate) fn spanning_tree_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.edge_count()];
        if self.is_empty() {
            return mask;
        }
        let vertex = self.dart_vertices();
        let nv = self.sigma.cycle_count();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for e in 0..self.edge_count() {
            let (t, h) = (vertex[2 * e], vertex[2 * e + 1]);
            if t != h {
                incident[t].push(e);
                incident[h].push(e);
            }
        }
        let mut visited = vec![false; nv];
        let mut queue = VecDeque::from([0]);
        visited[0] = true;
        while let Some(v) = queue.pop_front() {
            for &e in &incident[v] {
                let other = if vertex[2 * e] == v {
                    vertex[2 * e + 1]
                } else {
                    vertex[2 * e]
                };
                if !visited[other] {
                    visited[other] = true;
                    mask[e] = true;
                    queue.push_back(other);
                }
            }
        }
        mask
    }

    /// Swaps the head and tail darts of every edge in `set`:
    /// `[α^A σ α^A, α, α^A φ α^A]`.
    pub fn reverse_edges(&self, set: &EdgeSet) -> Result<CombMap> {
        let swap = self.alpha_restricted(&self.edge_mask(set)?);
        let sigma = swap.compose(&self.sigma).compose(&swap);
        Ok(CombMap {
            labels: self.labels.clone(),
            sigma,
        })
    }

    /// The same embedding read in the opposite surface orientation (`σ⁻¹`).
    pub fn reverse_orientation(&self) -> CombMap {
        CombMap {
            labels: self.labels.clone(),
            sigma: self.sigma.inverse(),
        }
    }

    /// One vertex per `σ`-cycle; edge `e` runs from the cycle of `e-` to the
    /// cycle of `e+`.
    pub fn underlying_graph(&self) -> AbstractGraph {
        let vertex = self.dart_vertices();
        let mut g = AbstractGraph::new(self.vertex_count());
        for (e, label) in self.labels.iter().enumerate() {
            g.add_edge(label.clone(), vertex[2 * e], vertex[2 * e + 1]);
        }
        g
    }

    /// Whether `set` is the edge set of a spanning tree of the underlying graph.
    pub fn is_spanning_tree(&self, set: &EdgeSet) -> Result<bool> {
        let mask = self.edge_mask(set)?;
        let vertex = self.dart_vertices();
        let nv = self.vertex_count();
        if mask.iter().filter(|&&m| m).count() + 1 != nv {
            return Ok(false);
        }
        let mut uf = UnionFind::new(nv);
        for e in (0..self.edge_count()).filter(|&e| mask[e]) {
            if !uf.union(vertex[2 * e], vertex[2 * e + 1]) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub(crate) fn format_cycles(cycles: &[Vec<Dart>]) -> String {
    let mut out = String::new();
    for cycle in cycles {
        out.push('(');
        for (i, d) in cycle.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&d.to_string());
        }
        out.push(')');
    }
    out
}

impl fmt::Display for CombMap {
    /// Canonical cycle notation of `σ`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_cycles(&self.sigma_cycles()))
    }
}
