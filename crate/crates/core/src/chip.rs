//! The chip-firing game on the edges of a map.
//!
//! Firing an edge `e` takes two chips from `e` and puts one on each edge
//! holding `σ(e⁻)` and `σ(e⁺)`. The source `q` may fire only when no other
//! edge can.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::label::Label;
use crate::linalg::{solve_left, IntMatrix};
use crate::map::{edge_of, CombMap, EdgeSet};
use crate::medial::medial_digraph;

/// Default bound on the edge count for the exhaustive critical-state scan.
pub const CRITICAL_SCAN_LIMIT: usize = 20;

/// Chips on each edge, in the map's label order, with a distinguished source.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct ChipState {
    pub chips: Vec<i64>,
    pub source: Label,
}

impl ChipState {
    /// Validates that the chips sum to zero and are nonnegative off `source`.
    pub fn new(m: &CombMap, chips: Vec<i64>, source: impl Into<Label>) -> Result<Self> {
        let s = ChipState {
            chips,
            source: source.into(),
        };
        s.validate(m)?;
        Ok(s)
    }

    pub fn zero(m: &CombMap, source: impl Into<Label>) -> Result<Self> {
        ChipState::new(m, vec![0; m.edge_count()], source)
    }

    fn validate(&self, m: &CombMap) -> Result<usize> {
        if self.chips.len() != m.edge_count() {
            return Err(Error::InvalidState(format!(
                "{} chip values for a map with {} edges",
                self.chips.len(),
                m.edge_count()
            )));
        }
        let q = m.edge_index(&self.source)?;
        if self.chips.iter().sum::<i64>() != 0 {
            return Err(Error::InvalidState("chips do not sum to zero".into()));
        }
        if let Some(e) = (0..self.chips.len()).find(|&e| e != q && self.chips[e] < 0) {
            return Err(Error::InvalidState(format!(
                "edge {} holds a negative number of chips",
                m.labels()[e]
            )));
        }
        Ok(q)
    }

    pub fn get(&self, m: &CombMap, edge: &Label) -> Result<i64> {
        Ok(self.chips[m.edge_index(edge)?])
    }
}

impl fmt::Display for ChipState {
    /// E.g. `(-1,0,1,0)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.chips.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn require_connected(m: &CombMap) -> Result<()> {
    if m.is_connected() {
        Ok(())
    } else {
        Err(Error::Disconnected)
    }
}

fn fireable_indices(chips: &[i64], q: usize) -> Vec<usize> {
    let others: Vec<usize> = (0..chips.len())
        .filter(|&e| e != q && chips[e] >= 2)
        .collect();
    if others.is_empty() {
        vec![q]
    } else {
        others
    }
}

fn fire_in_place(m: &CombMap, chips: &mut [i64], e: usize) {
    let sigma = m.sigma_perm();
    chips[e] -= 2;
    chips[edge_of(sigma.apply(2 * e))] += 1;
    chips[edge_of(sigma.apply(2 * e + 1))] += 1;
}

/// Edges allowed to fire: those other than `q` holding at least two chips,
/// or `q` alone when there are none.
pub fn fireable(m: &CombMap, s: &ChipState) -> Result<EdgeSet> {
    let q = s.validate(m)?;
    Ok(fireable_indices(&s.chips, q)
        .into_iter()
        .map(|e| m.labels()[e].clone())
        .collect())
}

pub fn fire(m: &CombMap, s: &ChipState, e: &Label) -> Result<ChipState> {
    let q = s.validate(m)?;
    let i = m.edge_index(e)?;
    if !fireable_indices(&s.chips, q).contains(&i) {
        return Err(Error::IllegalFire(e.clone()));
    }
    let mut next = s.clone();
    fire_in_place(m, &mut next.chips, i);
    Ok(next)
}

/// A stable state together with how often each edge fired to reach it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Stabilization {
    pub state: ChipState,
    /// Firing counts in the map's label order.
    pub firings: Vec<u64>,
}

/// Fires edges other than `q` until none can fire, always choosing the
/// least fireable label.
pub fn stabilize(m: &CombMap, s: &ChipState) -> Result<Stabilization> {
    Ok(stabilize_traced(m, s)?.0)
}

/// Like [`stabilize`], also returning each firing with the state after it.
pub fn stabilize_traced(
    m: &CombMap,
    s: &ChipState,
) -> Result<(Stabilization, Vec<(Label, ChipState)>)> {
    let q = s.validate(m)?;
    require_connected(m)?;
    let mut trace = Vec::new();
    let mut chips = s.chips.clone();
    let mut firings = vec![0; chips.len()];
    while let Some(e) = (0..chips.len()).find(|&e| e != q && chips[e] >= 2) {
        fire_in_place(m, &mut chips, e);
        firings[e] += 1;
        trace.push((
            m.labels()[e].clone(),
            ChipState {
                chips: chips.clone(),
                source: s.source.clone(),
            },
        ));
    }
    Ok((
        Stabilization {
            state: ChipState {
                chips,
                source: s.source.clone(),
            },
            firings,
        },
        trace,
    ))
}

/// Stabilizes in a caller-chosen order: `pick` selects among the currently
/// fireable edges other than `q`.
pub fn stabilize_with<F>(m: &CombMap, s: &ChipState, mut pick: F) -> Result<Stabilization>
where
    F: FnMut(&[usize]) -> usize,
{
    let q = s.validate(m)?;
    require_connected(m)?;
    let mut chips = s.chips.clone();
    let mut firings = vec![0; chips.len()];
    loop {
        let ready: Vec<usize> = (0..chips.len())
            .filter(|&e| e != q && chips[e] >= 2)
            .collect();
        if ready.is_empty() {
            break;
        }
        let e = ready[pick(&ready) % ready.len()];
        fire_in_place(m, &mut chips, e);
        firings[e] += 1;
    }
    Ok(Stabilization {
        state: ChipState {
            chips,
            source: s.source.clone(),
        },
        firings,
    })
}

/// One round of play: stabilize if anything other than `q` can fire,
/// otherwise fire `q` and then stabilize. Returns every firing in order.
pub fn firing_round(m: &CombMap, s: &ChipState) -> Result<Vec<(Label, ChipState)>> {
    let q = s.validate(m)?;
    require_connected(m)?;
    let mut trace = Vec::new();
    let mut start = s.clone();
    if fireable_indices(&s.chips, q) == [q] {
        fire_in_place(m, &mut start.chips, q);
        trace.push((s.source.clone(), start.clone()));
    }
    trace.extend(stabilize_traced(m, &start)?.1);
    Ok(trace)
}

fn is_stable(chips: &[i64], q: usize) -> bool {
    (0..chips.len()).all(|e| e == q || chips[e] < 2)
}

/// A stable state is critical when firing `q` and stabilizing fires every
/// edge exactly once and returns to it.
pub fn is_critical(m: &CombMap, s: &ChipState) -> Result<bool> {
    let q = s.validate(m)?;
    require_connected(m)?;
    Ok(is_critical_unchecked(m, &s.chips, q))
}

fn is_critical_unchecked(m: &CombMap, chips: &[i64], q: usize) -> bool {
    if !is_stable(chips, q) {
        return false;
    }
    let mut work = chips.to_vec();
    fire_in_place(m, &mut work, q);
    let mut fired = vec![false; work.len()];
    fired[q] = true;
    while let Some(e) = (0..work.len()).find(|&e| e != q && work[e] >= 2) {
        if fired[e] {
            return false;
        }
        fired[e] = true;
        fire_in_place(m, &mut work, e);
    }
    fired.iter().all(|&f| f) && work == chips
}

/// All critical states for source `q`, found by testing every stable state
/// with zero or one chip on each other edge.
pub fn critical_states(m: &CombMap, q: &Label) -> Result<Vec<ChipState>> {
    critical_states_with_limit(m, q, CRITICAL_SCAN_LIMIT)
}

pub fn critical_states_with_limit(m: &CombMap, q: &Label, limit: usize) -> Result<Vec<ChipState>> {
    let qi = m.edge_index(q)?;
    require_connected(m)?;
    let n = m.edge_count();
    if n > limit {
        return Err(Error::TooLarge { size: n, limit });
    }
    let others: Vec<usize> = (0..n).filter(|&e| e != qi).collect();
    let mut found = Vec::new();
    let mut chips = vec![0i64; n];
    for bits in 0u64..1 << others.len() {
        for (k, &e) in others.iter().enumerate() {
            chips[e] = (bits >> k & 1) as i64;
        }
        chips[qi] = -(bits.count_ones() as i64);
        if is_critical_unchecked(m, &chips, qi) {
            found.push(ChipState {
                chips: chips.clone(),
                source: q.clone(),
            });
        }
    }
    found.sort_by(|a, b| {
        b.chips[qi]
            .cmp(&a.chips[qi])
            .then_with(|| a.chips.cmp(&b.chips))
    });
    Ok(found)
}

/// Whether `s1 − s2` lies in the integer row lattice of the medial Laplacian.
pub fn same_coset(m: &CombMap, s1: &ChipState, s2: &ChipState) -> Result<bool> {
    if s1.source != s2.source {
        return Err(Error::InvalidState("states have different sources".into()));
    }
    if s1.chips.len() != m.edge_count() || s2.chips.len() != m.edge_count() {
        return Err(Error::InvalidState(
            "state length does not match the map".into(),
        ));
    }
    let q = m.edge_index(&s1.source)?;
    let reduced = medial_digraph(m)?.reduced_laplacian(&s1.source)?;
    let diff: Vec<i64> = s1.chips.iter().zip(&s2.chips).map(|(a, b)| a - b).collect();
    if diff.iter().sum::<i64>() != 0 {
        return Err(Error::InvalidState("states have different totals".into()));
    }
    Ok(in_row_lattice(&reduced, &diff, q))
}

/// The rows of `Δ` sum to zero, so for zero-sum vectors membership in the
/// row lattice of `Δ` is decided by `Δ^q` on the coordinates other than `q`.
fn in_row_lattice(reduced: &IntMatrix, diff: &[i64], q: usize) -> bool {
    let target: Vec<BigInt> = diff
        .iter()
        .enumerate()
        .filter(|&(e, _)| e != q)
        .map(|(_, &x)| BigInt::from(x))
        .collect();
    match solve_left(reduced, &target) {
        Some(x) => x.iter().all(|v| v.is_integer()),
        None => false,
    }
}

/// The critical state in the coset of `s`: stabilize, then repeatedly fire
/// `q` and stabilize until a state recurs.
pub fn coset_representative(m: &CombMap, s: &ChipState) -> Result<ChipState> {
    let q = s.validate(m)?;
    let mut x = stabilize(m, s)?.state;
    let mut seen = BTreeSet::new();
    while seen.insert(x.chips.clone()) {
        let mut fired = x.clone();
        fire_in_place(m, &mut fired.chips, q);
        x = stabilize(m, &fired)?.state;
    }
    assert!(same_coset(m, s, &x)?, "representative left the coset");
    Ok(x)
}

/// The critical state in the coset of `s1 + s2`.
pub fn add_critical(m: &CombMap, s1: &ChipState, s2: &ChipState) -> Result<ChipState> {
    if s1.source != s2.source {
        return Err(Error::InvalidState("states have different sources".into()));
    }
    if !is_critical(m, s1)? || !is_critical(m, s2)? {
        return Err(Error::NotCritical);
    }
    let q = m.edge_index(&s1.source)?;
    let mut sum = s1.clone();
    for (a, b) in sum.chips.iter_mut().zip(&s2.chips) {
        *a += b;
    }
    debug_assert!(sum.chips.iter().enumerate().all(|(e, &c)| e == q || c >= 0));
    coset_representative(m, &sum)
}

/// The addition table of the critical states: `table[i][j]` is the index of
/// `states[i] + states[j]`.
pub fn cayley_table(m: &CombMap, states: &[ChipState]) -> Result<Vec<Vec<usize>>> {
    let index: HashMap<&[i64], usize> = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.chips.as_slice(), i))
        .collect();
    let mut table = vec![vec![0; states.len()]; states.len()];
    for i in 0..states.len() {
        for j in i..states.len() {
            let sum = add_critical(m, &states[i], &states[j])?;
            let k = *index.get(sum.chips.as_slice()).ok_or(Error::NotCritical)?;
            table[i][j] = k;
            table[j][i] = k;
        }
    }
    Ok(table)
}

/// The abelian group presented by generators `0..n` and relations
/// `[i] + [j] = [table[i][j]]`.
pub fn group_from_table(table: &[Vec<usize>]) -> AbelianGroup {
    let n = table.len();
    let labels: Vec<Label> = (0..n).map(Label::from).collect();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut row = vec![BigInt::from(0); n];
            row[i] += 1;
            row[j] += 1;
            row[table[i][j]] -= 1;
            rows.push(row);
        }
    }
    let row_labels = (0..rows.len()).map(Label::from).collect();
    AbelianGroup::cokernel(&IntMatrix::new(row_labels, labels, rows))
}

/// The group of critical states under [`add_critical`], read off its
/// addition table.
pub fn critical_state_group(m: &CombMap, q: &Label) -> Result<AbelianGroup> {
    let states = critical_states(m, q)?;
    Ok(group_from_table(&cayley_table(m, &states)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{make_map, Dart, Sign};

    fn map(text: &str) -> CombMap {
        let cycles: Vec<Vec<Dart>> = text
            .trim_matches(|c| c == '(' || c == ')')
            .split(")(")
            .map(|c| {
                c.split_whitespace()
                    .map(|tok| {
                        let (l, s) = tok.split_at(tok.len() - 1);
                        Dart::new(l, if s == "+" { Sign::Plus } else { Sign::Minus })
                    })
                    .collect()
            })
            .collect();
        make_map(&cycles).unwrap()
    }

    fn ex1() -> CombMap {
        map("(a- b+ c- b- d-)(a+ c+ d+)")
    }

    fn st(m: &CombMap, chips: &[i64]) -> ChipState {
        ChipState::new(m, chips.to_vec(), "a").unwrap()
    }

    #[test]
    fn fireable_sets() {
        let m = ex1();
        assert_eq!(
            fireable(&m, &st(&m, &[-1, 0, 1, 0])).unwrap(),
            crate::map::edge_set(["a"])
        );
        assert_eq!(
            fireable(&m, &st(&m, &[-3, 1, 2, 0])).unwrap(),
            crate::map::edge_set(["c"])
        );
        assert_eq!(
            fireable(&m, &st(&m, &[0, 0, 0, 0])).unwrap(),
            crate::map::edge_set(["a"])
        );
    }

    #[test]
    fn firings_follow_sigma() {
        let m = ex1();
        let s = fire(&m, &st(&m, &[-1, 0, 1, 0]), &"a".into()).unwrap();
        assert_eq!(s.chips, [-3, 1, 2, 0]);
        let s = fire(&m, &s, &"c".into()).unwrap();
        assert_eq!(s.chips, [-3, 2, 0, 1]);
        let s = fire(&m, &st(&m, &[-3, 0, 1, 2]), &"d".into()).unwrap();
        assert_eq!(s.chips, [-1, 0, 1, 0]);
        assert_eq!(
            fire(&m, &st(&m, &[-3, 1, 2, 0]), &"b".into()),
            Err(Error::IllegalFire("b".into()))
        );
    }

    #[test]
    fn invalid_states() {
        let m = ex1();
        assert!(matches!(
            ChipState::new(&m, vec![1, 0, 0, 0], "a"),
            Err(Error::InvalidState(_))
        ));
        assert!(matches!(
            ChipState::new(&m, vec![1, -1, 0, 0], "a"),
            Err(Error::InvalidState(_))
        ));
        assert!(matches!(
            ChipState::new(&m, vec![0, 0, 0], "a"),
            Err(Error::InvalidState(_))
        ));
        assert_eq!(
            ChipState::new(&m, vec![0; 4], "z"),
            Err(Error::UnknownEdge("z".into()))
        );
    }

    #[test]
    fn stabilization() {
        let m = ex1();
        let result = stabilize(&m, &st(&m, &[-3, 1, 2, 0])).unwrap();
        assert_eq!(result.state.chips, [-1, 0, 1, 0]);
        assert_eq!(result.firings, [0, 1, 1, 1]);
        let stable = st(&m, &[-1, 0, 1, 0]);
        assert_eq!(
            stabilize(&m, &stable).unwrap(),
            Stabilization {
                state: stable.clone(),
                firings: vec![0; 4]
            }
        );

        let busy = st(&m, &[-4, 4, 0, 0]);
        let first = stabilize(&m, &busy).unwrap();
        let last = stabilize_with(&m, &busy, |ready| ready.len() - 1).unwrap();
        assert_eq!(first, last);
        assert!(same_coset(&m, &busy, &first.state).unwrap());
    }

    #[test]
    fn the_worked_trace() {
        let m = ex1();
        let trace = firing_round(&m, &st(&m, &[-1, 0, 1, 0])).unwrap();
        let lines: Vec<String> = trace.iter().map(|(e, s)| format!("{e} {s}")).collect();
        assert_eq!(
            lines,
            [
                "a (-3,1,2,0)",
                "c (-3,2,0,1)",
                "b (-3,0,1,2)",
                "d (-1,0,1,0)"
            ]
        );
    }

    #[test]
    fn critical_states_of_ex1() {
        let m = ex1();
        assert!(is_critical(&m, &st(&m, &[-1, 0, 1, 0])).unwrap());
        assert!(is_critical(&m, &st(&m, &[-3, 1, 1, 1])).unwrap());
        assert!(!is_critical(&m, &st(&m, &[0, 0, 0, 0])).unwrap());
        let found: Vec<Vec<i64>> = critical_states(&m, &"a".into())
            .unwrap()
            .into_iter()
            .map(|s| s.chips)
            .collect();
        let expected = [
            [-1, 0, 1, 0],
            [-1, 1, 0, 0],
            [-2, 0, 1, 1],
            [-2, 1, 0, 1],
            [-2, 1, 1, 0],
            [-3, 1, 1, 1],
        ]
        .map(|r| r.to_vec());
        assert_eq!(found, expected);
    }

    #[test]
    fn small_maps() {
        let l = map("(e+ e-)");
        let states = critical_states(&l, &"e".into()).unwrap();
        assert_eq!(
            states,
            [ChipState {
                chips: vec![0],
                source: "e".into()
            }]
        );
        let n2 = map("(1+ 2+ 1- 2-)");
        assert_eq!(critical_states(&n2, &"1".into()).unwrap().len(), 2);
    }

    #[test]
    fn group_structure_of_ex1() {
        let m = ex1();
        let states = critical_states(&m, &"a".into()).unwrap();
        let table = cayley_table(&m, &states).unwrap();
        let identity = (0..states.len())
            .find(|&i| (0..states.len()).all(|j| table[i][j] == j))
            .unwrap();
        for s in &states {
            assert_eq!(&add_critical(&m, s, &states[identity]).unwrap(), s);
        }
        assert_eq!(group_from_table(&table), AbelianGroup::from_i64(&[6]));
        assert_eq!(
            add_critical(&m, &states[0], &st(&m, &[0, 0, 0, 0])),
            Err(Error::NotCritical)
        );
    }

    #[test]
    fn cosets() {
        let m = ex1();
        let states = critical_states(&m, &"a".into()).unwrap();
        for (i, s) in states.iter().enumerate() {
            assert!(same_coset(&m, s, s).unwrap());
            for t in &states[i + 1..] {
                assert!(!same_coset(&m, s, t).unwrap());
            }
        }
        let s = st(&m, &[-3, 1, 2, 0]);
        let fired = fire(&m, &s, &"c".into()).unwrap();
        assert!(same_coset(&m, &s, &fired).unwrap());
        let rep = coset_representative(&m, &st(&m, &[-7, 3, 0, 4])).unwrap();
        assert!(states.contains(&rep));
    }
}
