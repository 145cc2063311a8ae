//! Random connected maps for property testing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::map::{make_map, CombMap, Dart, EdgeSet, Sign};

fn build(cycles: Vec<Vec<Dart>>) -> CombMap {
    make_map(&cycles).expect("generated rotation system is valid")
}

fn random_sign<R: Rng>(rng: &mut R) -> (Sign, Sign) {
    if rng.random_bool(0.5) {
        (Sign::Minus, Sign::Plus)
    } else {
        (Sign::Plus, Sign::Minus)
    }
}

/// Inserts `dart` into a random corner of vertex `v`.
fn insert_at<R: Rng>(rng: &mut R, cycles: &mut [Vec<Dart>], v: usize, dart: Dart) {
    let pos = rng.random_range(0..=cycles[v].len());
    cycles[v].insert(pos, dart);
}

/// A connected map with `edges` edges labelled `1..=edges`, grown one edge at
/// a time. Each new edge is either pendant on a new vertex or joins two
/// random corners, so loops, multiple edges and any genus can occur.
pub fn random_map<R: Rng>(rng: &mut R, edges: usize) -> CombMap {
    if edges == 0 {
        return CombMap::empty();
    }
    let mut cycles: Vec<Vec<Dart>> = Vec::new();
    for e in 1..=edges {
        let (s1, s2) = random_sign(rng);
        let (x, y) = (Dart::new(e, s1), Dart::new(e, s2));
        if cycles.is_empty() {
            if rng.random_bool(0.3) {
                cycles.push(vec![x, y]);
            } else {
                cycles.push(vec![x]);
                cycles.push(vec![y]);
            }
            continue;
        }
        let u = rng.random_range(0..cycles.len());
        insert_at(rng, &mut cycles, u, x);
        if rng.random_bool(0.4) {
            cycles.push(vec![y]);
        } else {
            let v = rng.random_range(0..cycles.len());
            insert_at(rng, &mut cycles, v, y);
        }
    }
    build(cycles)
}

/// A connected genus-zero map with `edges` edges, grown by adding edges
/// that stay within a single face.
pub fn random_plane_map<R: Rng>(rng: &mut R, edges: usize) -> CombMap {
    if edges == 0 {
        return CombMap::empty();
    }
    let mut current = random_map(rng, 1);
    while current.edge_count() < edges {
        let e = current.edge_count() + 1;
        let mut cycles = current.sigma_cycles();
        let (s1, s2) = random_sign(rng);
        let (x, y) = (Dart::new(e, s1), Dart::new(e, s2));
        let u = rng.random_range(0..cycles.len());
        insert_at(rng, &mut cycles, u, x);
        if rng.random_bool(0.4) {
            cycles.push(vec![y]);
        } else {
            let v = rng.random_range(0..cycles.len());
            insert_at(rng, &mut cycles, v, y);
        }
        let candidate = build(cycles);
        if candidate.genus() == Ok(0) {
            current = candidate;
        }
    }
    current
}

/// A bouquet whose single rotation is a uniformly random cyclic order of the
/// `2 · edges` darts.
pub fn random_bouquet<R: Rng>(rng: &mut R, edges: usize) -> CombMap {
    if edges == 0 {
        return CombMap::empty();
    }
    let mut darts: Vec<Dart> = (1..=edges)
        .flat_map(|e| [Dart::minus(e), Dart::plus(e)])
        .collect();
    darts.shuffle(rng);
    build(vec![darts])
}

/// Each edge of `m` independently with probability one half.
pub fn random_edge_set<R: Rng>(rng: &mut R, m: &CombMap) -> EdgeSet {
    m.labels()
        .iter()
        .filter(|_| rng.random_bool(0.5))
        .cloned()
        .collect()
}

/// `m` with a random set of edges reversed.
pub fn random_redirection<R: Rng>(rng: &mut R, m: &CombMap) -> CombMap {
    m.reverse_edges(&random_edge_set(rng, m))
        .expect("edges belong to the map")
}
