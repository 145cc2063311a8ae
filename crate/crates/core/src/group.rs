//! Finitely generated abelian groups and the three presentations of the
//! critical group of a map.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::label::Label;
use crate::linalg::{smith_diagonal, smith_normal_form, IntMatrix, SmithForm};
use crate::map::{AbstractGraph, CombMap, EdgeSet};
use crate::matrices::{build_a, build_a_mask, reduced_graph_laplacian, tree_decompose};
use crate::medial::medial_digraph;

/// `ℤ^free_rank ⊕ ⊕ ℤ/tᵢℤ` with `t₁ | t₂ | …` and every `tᵢ > 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct AbelianGroup {
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup::default()
    }

    /// Canonical form of an arbitrary list of cyclic factors; zeros count as
    /// free summands and units are dropped.
    pub fn from_factors<I: IntoIterator<Item = BigInt>>(factors: I) -> Self {
        let mut free_rank = 0;
        let mut finite = Vec::new();
        for f in factors {
            if f.is_zero() {
                free_rank += 1;
            } else {
                finite.push(f);
            }
        }
        let n = finite.len();
        let diag: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            finite[i].clone()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let torsion = smith_diagonal(diag, n, n)
            .into_iter()
            .filter(|f| !f.is_one())
            .collect();
        AbelianGroup { torsion, free_rank }
    }

    pub fn from_i64(factors: &[i64]) -> Self {
        AbelianGroup::from_factors(factors.iter().map(|&f| BigInt::from(f)))
    }

    /// The cokernel described by a Smith form.
    pub fn from_smith(snf: &SmithForm) -> Self {
        AbelianGroup {
            torsion: snf
                .invariant_factors
                .iter()
                .filter(|f| !f.is_one())
                .cloned()
                .collect(),
            free_rank: snf.free_rank(),
        }
    }

    /// Cokernel of a matrix whose rows are relations among its columns.
    pub fn cokernel(m: &IntMatrix) -> Self {
        AbelianGroup::from_smith(&smith_normal_form(m))
    }

    pub fn direct_sum(groups: &[AbelianGroup]) -> Self {
        let factors = groups.iter().flat_map(|g| {
            g.torsion
                .iter()
                .cloned()
                .chain(std::iter::repeat_n(BigInt::zero(), g.free_rank))
        });
        AbelianGroup::from_factors(factors)
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn torsion_i64(&self) -> Vec<i64> {
        self.torsion
            .iter()
            .map(|t| i64::try_from(t).expect("factor fits in i64"))
            .collect()
    }
}

pub fn group_order(g: &AbelianGroup) -> Result<BigInt> {
    if !g.is_finite() {
        return Err(Error::InfiniteGroup);
    }
    Ok(g.torsion.iter().product())
}

impl fmt::Display for AbelianGroup {
    /// E.g. `(Z/5Z)^2 + Z/10Z`; the trivial group is `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.torsion.len() {
            let t = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == t).count();
            parts.push(if run == 1 {
                format!("Z/{t}Z")
            } else {
                format!("(Z/{t}Z)^{run}")
            });
            i += run;
        }
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let torsion: Vec<serde_json::Value> = self
            .torsion
            .iter()
            .map(|t| match i64::try_from(t) {
                Ok(v) => serde_json::Value::from(v),
                Err(_) => serde_json::Value::from(t.to_string()),
            })
            .collect();
        let mut st = s.serialize_struct("AbelianGroup", 2)?;
        st.serialize_field("torsion", &torsion)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        st.end()
    }
}

/// `K(G)`: the cokernel of `A(G, T) + I`, summed over connected components.
pub fn critical_group(m: &CombMap) -> AbelianGroup {
    let parts: Vec<AbelianGroup> = m
        .component_edge_sets()
        .iter()
        .map(|edges| {
            let comp = m
                .induced_submap(edges)
                .expect("component edges belong to the map");
            let a = build_a_mask(&comp, &comp.spanning_tree_mask());
            AbelianGroup::cokernel(&a.plus_identity())
        })
        .collect();
    AbelianGroup::direct_sum(&parts)
}

/// Cokernel of `A(G, T) + I` for a given spanning quasi-tree.
pub fn critical_group_for_tree(m: &CombMap, tree: &EdgeSet) -> Result<AbelianGroup> {
    Ok(AbelianGroup::cokernel(&build_a(m, tree)?.plus_identity()))
}

/// Cokernel of `BᵗB + D′ + I` for the default spanning tree.
pub fn critical_group_via_tree_form(m: &CombMap) -> Result<AbelianGroup> {
    let tree = m.find_spanning_quasitree()?;
    Ok(AbelianGroup::cokernel(&tree_decompose(m, &tree)?.form()))
}

/// Cokernel of the reduced medial Laplacian `Δ^q`.
pub fn critical_group_via_laplacian(m: &CombMap, q: &Label) -> Result<AbelianGroup> {
    let d = medial_digraph(m)?;
    m.edge_index(q)?;
    Ok(AbelianGroup::cokernel(&d.reduced_laplacian(q)?))
}

/// The classical critical group of a connected graph, with loops removed.
pub fn classical_critical_group(g: &AbstractGraph) -> Result<AbelianGroup> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.vertex_count == 0 {
        return Ok(AbelianGroup::trivial());
    }
    Ok(AbelianGroup::cokernel(&reduced_graph_laplacian(
        &g.without_loops(),
        0,
    )?))
}
