//! Brute-force oracles written directly from the definitions, sharing no
//! code paths with the library beyond reading rotation cycles.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use critical_maps::label::Label;
use critical_maps::map::{CombMap, Dart, EdgeSet, Sign};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn flip(d: &Dart) -> Dart {
    Dart {
        edge: d.edge.clone(),
        sign: if d.sign == Sign::Plus {
            Sign::Minus
        } else {
            Sign::Plus
        },
    }
}

/// Number of boundary components of the spanning submap with edge set `t`.
/// Vertices left without edges each count as one disc.
pub fn spanning_faces(m: &CombMap, t: &EdgeSet) -> usize {
    let mut next: HashMap<Dart, Dart> = HashMap::new();
    let mut isolated = 0;
    for cycle in m.sigma_cycles() {
        let kept: Vec<Dart> = cycle.into_iter().filter(|d| t.contains(&d.edge)).collect();
        if kept.is_empty() {
            isolated += 1;
        }
        for (i, d) in kept.iter().enumerate() {
            next.insert(d.clone(), kept[(i + 1) % kept.len()].clone());
        }
    }
    let mut seen: BTreeSet<Dart> = BTreeSet::new();
    let mut faces = isolated;
    for start in next.keys() {
        if seen.contains(start) {
            continue;
        }
        faces += 1;
        let mut d = start.clone();
        while seen.insert(d.clone()) {
            d = next[&flip(&d)].clone();
        }
    }
    faces
}

pub fn is_quasitree(m: &CombMap, t: &EdgeSet) -> bool {
    spanning_faces(m, t) == 1
}

/// Every subset of edges, as sets.
pub fn subsets(m: &CombMap) -> Vec<EdgeSet> {
    let labels = m.labels();
    (0u64..1 << labels.len())
        .map(|bits| {
            labels
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, l)| l.clone())
                .collect()
        })
        .collect()
}

pub fn brute_quasitrees(m: &CombMap) -> Vec<EdgeSet> {
    subsets(m)
        .into_iter()
        .filter(|t| is_quasitree(m, t))
        .collect()
}

/// Genus of a map from its rotation cycles, counting faces by hand.
pub fn genus(m: &CombMap) -> usize {
    let v = m.sigma_cycles().len().max(1);
    let all: EdgeSet = m.labels().iter().cloned().collect();
    let f = if m.edge_count() == 0 {
        1
    } else {
        spanning_faces(m, &all)
    };
    (2 + m.edge_count() - v - f) / 2
}

pub fn weight_sum(sets: &[EdgeSet], w: &BTreeMap<Label, BigRational>) -> BigRational {
    sets.iter()
        .map(|t| t.iter().map(|l| w[l].clone()).product::<BigRational>())
        .sum()
}

pub fn det_small(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if rows[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = rows[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &rows[0][j] * det_small(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Invariant factors of a small integer matrix from determinantal divisors:
/// `d_k` is the gcd of all `k × k` minors and the `k`-th factor is
/// `d_k / d_{k-1}`. Zero factors stand for free summands.
pub fn invariant_factors(rows: &[Vec<i64>]) -> Vec<BigInt> {
    let n = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=n.min(c) {
        let mut d = BigInt::zero();
        for rs in combinations(n, k) {
            for cs in combinations(c, k) {
                let minor: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| BigInt::from(rows[i][j])).collect())
                    .collect();
                d = d.gcd(&det_small(&minor));
            }
        }
        if d.is_zero() {
            out.extend(std::iter::repeat_n(BigInt::zero(), n.min(c) - k + 1));
            return out;
        }
        out.push(&d / &prev);
        prev = d;
    }
    out
}
