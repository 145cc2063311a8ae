//! Matrices built from maps and abstract graphs: the interlacement matrix
//! `A(G, T)`, its unsigned shadow, the tree block decomposition, the signed
//! cycle–cocycle matrix and the graph Laplacian.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::linalg::IntMatrix;
use crate::map::{AbstractGraph, CombMap, EdgeSet, UnionFind};

/// `A(G, T)` for a spanning quasi-tree `T`.
pub fn build_a(m: &CombMap, tree: &EdgeSet) -> Result<IntMatrix> {
    if !m.is_spanning_quasitree(tree)? {
        return Err(Error::NotQuasiTree);
    }
    Ok(build_a_mask(m, &m.edge_mask(tree)?))
}

/// `A(G, T)` without validation; `mask` must mark a spanning quasi-tree.
#[allow(clippy::needless_range_loop)]
pub(crate) fn build_a_mask(m: &CombMap, mask: &[bool]) -> IntMatrix {
    let n = m.dart_count();
    let walk = m.alpha_restricted(mask).compose(m.sigma_perm());
    let mut pos = vec![usize::MAX; n];
    let mut d = 0;
    for step in 0..n {
        pos[d] = step;
        d = walk.apply(d);
    }
    debug_assert!(pos.iter().all(|&p| p < n), "α^T σ is not cyclic");

    let edges = m.edge_count();
    let mut entries = vec![vec![BigInt::zero(); edges]; edges];
    for e in 0..edges {
        let start = pos[2 * e + 1];
        let rel = |dart: usize| (pos[dart] + n - start) % n;
        let e_minus = rel(2 * e);
        for f in e + 1..edges {
            let (f_minus, f_plus) = (rel(2 * f), rel(2 * f + 1));
            let value = if f_plus < e_minus && e_minus < f_minus {
                1
            } else if f_minus < e_minus && e_minus < f_plus {
                -1
            } else {
                0
            };
            if value != 0 {
                entries[e][f] = BigInt::from(value);
                entries[f][e] = BigInt::from(-value);
            }
        }
    }
    IntMatrix::square(m.labels().to_vec(), entries)
}

/// `A₂(G, T)`: the entrywise absolute value of `A(G, T)`.
pub fn build_a2(m: &CombMap, tree: &EdgeSet) -> Result<IntMatrix> {
    Ok(build_a(m, tree)?.abs())
}

/// The blocks of `A(G, T)` for a spanning tree `T` of the underlying graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TreeDecomposedMatrix {
    pub tree: EdgeSet,
    /// `A(G, T)[T, E − T]`.
    pub b: IntMatrix,
    /// `A(G, T)[E − T]`.
    pub d_prime: IntMatrix,
}

impl TreeDecomposedMatrix {
    /// `BᵗB + D′ + I`, whose cokernel is the critical group.
    pub fn form(&self) -> IntMatrix {
        self.b
            .transpose()
            .mul(&self.b)
            .add(&self.d_prime)
            .plus_identity()
    }
}

pub fn tree_decompose(m: &CombMap, tree: &EdgeSet) -> Result<TreeDecomposedMatrix> {
    if !m.is_connected() {
        return Err(Error::Disconnected);
    }
    if !m.is_spanning_tree(tree)? {
        return Err(Error::NotSpanningTree);
    }
    let a = build_a_mask(m, &m.edge_mask(tree)?);
    let rest: EdgeSet = m
        .labels()
        .iter()
        .filter(|l| !tree.contains(*l))
        .cloned()
        .collect();
    Ok(TreeDecomposedMatrix {
        tree: tree.clone(),
        b: a.submatrix(tree, &rest)?,
        d_prime: a.submatrix(&rest, &rest)?,
    })
}

/// `M(G, T)`: rows of tree edges are signed fundamental cocycles, the other
/// rows are signed fundamental cycles.
pub fn signed_cycle_cocycle(g: &AbstractGraph, tree: &EdgeSet) -> Result<IntMatrix> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut in_tree = vec![false; g.edges.len()];
    for label in tree {
        in_tree[g
            .edge_position(label)
            .ok_or_else(|| Error::UnknownEdge(label.clone()))?] = true;
    }
    let mut uf = UnionFind::new(g.vertex_count);
    let tree_size = in_tree.iter().filter(|&&t| t).count();
    if tree_size + 1 != g.vertex_count
        || g.edges
            .iter()
            .zip(&in_tree)
            .any(|(e, &t)| t && !uf.union(e.tail, e.head))
    {
        return Err(Error::NotSpanningTree);
    }

    let n = g.edges.len();
    let mut tree_adj: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count];
    for (i, e) in g.edges.iter().enumerate().filter(|&(i, _)| in_tree[i]) {
        tree_adj[e.tail].push(i);
        tree_adj[e.head].push(i);
    }

    let mut entries = vec![vec![BigInt::zero(); n]; n];
    for (row, e) in g.edges.iter().enumerate() {
        if in_tree[row] {
            let mut side = UnionFind::new(g.vertex_count);
            for (i, f) in g.edges.iter().enumerate() {
                if in_tree[i] && i != row {
                    side.union(f.tail, f.head);
                }
            }
            let head_side = side.find(e.head);
            for (i, f) in g.edges.iter().enumerate() {
                let (t, h) = (side.find(f.tail), side.find(f.head));
                if t != h {
                    entries[row][i] = BigInt::from(if h == head_side { 1 } else { -1 });
                }
            }
        } else {
            entries[row][row] = BigInt::from(1);
            // Continue the walk from the head of e back to its tail through T.
            for (i, forward) in tree_path(g, &tree_adj, e.head, e.tail) {
                entries[row][i] = BigInt::from(if forward { 1 } else { -1 });
            }
        }
    }
    let labels = g.edges.iter().map(|e| e.label.clone()).collect();
    Ok(IntMatrix::square(labels, entries))
}

/// Edges on the tree path from `from` to `to`, each flagged with whether it
/// is traversed tail to head.
fn tree_path(g: &AbstractGraph, adj: &[Vec<usize>], from: usize, to: usize) -> Vec<(usize, bool)> {
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; g.vertex_count];
    let mut seen = vec![false; g.vertex_count];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &i in &adj[v] {
            let e = &g.edges[i];
            let w = if e.tail == v { e.head } else { e.tail };
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((v, i));
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut v = to;
    while let Some((u, i)) = parent[v] {
        path.push((i, g.edges[i].tail == u));
        v = u;
    }
    path.reverse();
    path
}

fn vertex_labels(n: usize) -> Vec<Label> {
    (0..n).map(Label::from).collect()
}

/// The Laplacian `Δ(G)` of a connected loopless graph, indexed by vertex.
pub fn graph_laplacian(g: &AbstractGraph) -> Result<IntMatrix> {
    if g.has_loops() {
        return Err(Error::HasLoops);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count;
    let mut entries = vec![vec![BigInt::zero(); n]; n];
    for e in &g.edges {
        entries[e.tail][e.tail] += 1;
        entries[e.head][e.head] += 1;
        entries[e.tail][e.head] -= 1;
        entries[e.head][e.tail] -= 1;
    }
    Ok(IntMatrix::square(vertex_labels(n), entries))
}

/// `Δ^q(G)`: the Laplacian with the row and column of vertex `q` deleted.
pub fn reduced_graph_laplacian(g: &AbstractGraph, q: usize) -> Result<IntMatrix> {
    if q >= g.vertex_count {
        return Err(Error::UnknownVertex(Label::from(q)));
    }
    graph_laplacian(g)?.delete(&Label::from(q))
}
