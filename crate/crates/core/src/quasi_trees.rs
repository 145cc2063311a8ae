//! Spanning quasi-trees: enumeration, counting, generating polynomials and
//! the bicycle space.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::linalg::{char_poly, determinant, gf2_kernel, rational_determinant};
use crate::map::{CombMap, EdgeSet};
use crate::matrices::build_a_mask;
use crate::poly::{MultiPoly, UniPoly};

/// Default bound on the edge count for exhaustive subset scans.
pub const ENUMERATION_LIMIT: usize = 22;

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct QuasiTree {
    pub edges: EdgeSet,
    /// Genus of the one-face submap induced by `edges`.
    pub genus: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuasiTreeReport {
    /// Sorted by size, then lexicographically.
    pub sets: Vec<QuasiTree>,
    pub count: usize,
    /// `Σ t^{2g(T)}` over the listed quasi-trees.
    pub genus_poly: UniPoly,
}

/// Masks of every spanning quasi-tree, in canonical order.
pub(crate) fn quasitree_masks(m: &CombMap, limit: usize) -> Result<Vec<u64>> {
    if !m.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = m.edge_count();
    if n > limit || n > 63 {
        return Err(Error::TooLarge { size: n, limit });
    }
    let mut found: Vec<u64> = (0..1u64 << n)
        .filter(|&bits| m.is_quasitree_bits(bits))
        .collect();
    // Bit i is the i-th label in sorted order, so comparing the reversed bit
    // strings compares the label lists lexicographically.
    found.sort_by_key(|&bits| (bits.count_ones(), std::cmp::Reverse(bits.reverse_bits())));
    Ok(found)
}

pub(crate) fn mask_to_bools(bits: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| bits >> i & 1 == 1).collect()
}

pub fn enumerate_quasitrees(m: &CombMap) -> Result<QuasiTreeReport> {
    enumerate_quasitrees_with_limit(m, ENUMERATION_LIMIT)
}

pub fn enumerate_quasitrees_with_limit(m: &CombMap, limit: usize) -> Result<QuasiTreeReport> {
    let masks = quasitree_masks(m, limit)?;
    let v = m.vertex_count();
    let mut genus_poly = UniPoly::zero();
    let sets: Vec<QuasiTree> = masks
        .iter()
        .map(|&bits| {
            let size = bits.count_ones() as usize;
            let genus = (1 + size - v) / 2;
            genus_poly.add_term(2 * genus, BigInt::one());
            QuasiTree {
                edges: m.set_from_mask(&mask_to_bools(bits, m.edge_count())),
                genus,
            }
        })
        .collect();
    Ok(QuasiTreeReport {
        count: sets.len(),
        sets,
        genus_poly,
    })
}

/// `det(A(G, T) + I)` for the default spanning quasi-tree.
pub fn count_quasitrees(m: &CombMap) -> Result<BigInt> {
    if !m.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(determinant(
        &build_a_mask(m, &m.spanning_tree_mask()).plus_identity(),
    ))
}

/// `t^m P_{A(B)}(1/t)`, which counts the quasi-trees of a bouquet by genus.
pub fn genus_polynomial(b: &CombMap) -> Result<UniPoly> {
    if !b.is_bouquet() {
        return Err(Error::NotBouquet);
    }
    let a = build_a_mask(b, &vec![false; b.edge_count()]);
    Ok(char_poly(&a).reversed(b.edge_count()))
}

/// `Q(G) = Σ_T Π_{i∈T} z_i` over spanning quasi-trees, by enumeration.
pub fn weighted_quasitree_poly(m: &CombMap) -> Result<MultiPoly> {
    let mut q = MultiPoly::zero();
    for t in enumerate_quasitrees(m)?.sets {
        q.add_monomial(&t.edges, BigInt::one());
    }
    Ok(q)
}

fn weight_of(weights: &BTreeMap<Label, BigRational>, label: &Label) -> Result<BigRational> {
    weights
        .get(label)
        .cloned()
        .ok_or_else(|| Error::UnknownEdge(label.clone()))
}

/// `det(A(G, T) Z_T + I) · Z(T)` where `Z_T` carries `z_i⁻¹` for `i ∈ T`
/// and `z_i` otherwise. With `T = ∅` on a bouquet this is `det(A(B) Z + I)`.
pub fn weighted_determinant(
    m: &CombMap,
    tree: &EdgeSet,
    weights: &BTreeMap<Label, BigRational>,
) -> Result<BigRational> {
    let mask = m.edge_mask(tree)?;
    if !m.is_connected() {
        return Err(Error::Disconnected);
    }
    if !m.is_quasitree_mask(&mask) {
        return Err(Error::NotQuasiTree);
    }
    let a = build_a_mask(m, &mask);
    let n = m.edge_count();
    let mut scale = Vec::with_capacity(n);
    let mut z_tree = BigRational::one();
    for (j, label) in m.labels().iter().enumerate() {
        let z = weight_of(weights, label)?;
        if mask[j] {
            if z.is_zero() {
                return Err(Error::InvalidState(format!(
                    "weight of tree edge {label} is zero"
                )));
            }
            scale.push(z.recip());
            z_tree *= z;
        } else {
            scale.push(z);
        }
    }
    let rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let base = BigRational::from_integer(a.get(i, j).clone()) * &scale[j];
                    if i == j {
                        base + BigRational::one()
                    } else {
                        base
                    }
                })
                .collect()
        })
        .collect();
    Ok(rational_determinant(&rows) * z_tree)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct BicycleSpace {
    pub dimension: usize,
    /// `2^dimension`.
    #[serde(serialize_with = "crate::io::serialize_bigint")]
    pub order: BigInt,
}

/// The GF(2) kernel of `A₂(G, T) + I` for the default quasi-tree.
pub fn bicycle_space(m: &CombMap) -> Result<BicycleSpace> {
    if !m.is_connected() {
        return Err(Error::Disconnected);
    }
    bicycle_space_for(m, &m.set_from_mask(&m.spanning_tree_mask()))
}

pub fn bicycle_space_for(m: &CombMap, tree: &EdgeSet) -> Result<BicycleSpace> {
    let a2 = crate::matrices::build_a2(m, tree)?;
    let dimension = gf2_kernel(&a2.plus_identity()).dimension;
    Ok(BicycleSpace {
        dimension,
        order: BigInt::one() << dimension,
    })
}

/// Evaluates `Q(G)` at `trials` random points with positive real parts and
/// reports whether every value is nonzero. A sampled witness, not a proof.
pub fn hurwitz_sample_check(m: &CombMap, trials: usize) -> Result<bool> {
    hurwitz_sample_check_with_rng(m, trials, &mut ChaCha8Rng::seed_from_u64(0x5eed))
}

pub fn hurwitz_sample_check_with_rng<R: Rng>(
    m: &CombMap,
    trials: usize,
    rng: &mut R,
) -> Result<bool> {
    let masks = quasitree_masks(m, ENUMERATION_LIMIT)?;
    let n = m.edge_count();
    let rational = |rng: &mut R, lo: i64, hi: i64| {
        BigRational::new(
            BigInt::from(rng.random_range(lo..=hi)),
            BigInt::from(rng.random_range(1..=16i64)),
        )
    };
    for _ in 0..trials {
        let point: Vec<Complex<BigRational>> = (0..n)
            .map(|_| Complex::new(rational(rng, 1, 64), rational(rng, -64, 64)))
            .collect();
        let zero = Complex::new(BigRational::zero(), BigRational::zero());
        let value = masks.iter().fold(zero, |acc, &bits| {
            let term = (0..n).filter(|&i| bits >> i & 1 == 1).fold(
                Complex::new(BigRational::one(), BigRational::zero()),
                |p, i| p * &point[i],
            );
            acc + term
        });
        if value.re.is_zero() && value.im.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
