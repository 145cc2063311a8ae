//! Dense arbitrary-precision integer matrices indexed by edge labels.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::label::Label;
use crate::poly::UniPoly;

/// Default bound on the order of matrices checked for principal unimodularity.
pub const PU_LIMIT: usize = 16;

/// An integer matrix whose rows and columns are named by labels.
///
/// Most matrices here are square with identical row and column labels; the
/// `B` block of a tree decomposition is the rectangular exception.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: Vec<Label>,
    cols: Vec<Label>,
    entries: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Label>, cols: Vec<Label>, entries: Vec<Vec<BigInt>>) -> Self {
        assert_eq!(entries.len(), rows.len(), "row count");
        assert!(
            entries.iter().all(|r| r.len() == cols.len()),
            "column count"
        );
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn square(labels: Vec<Label>, entries: Vec<Vec<BigInt>>) -> Self {
        IntMatrix::new(labels.clone(), labels, entries)
    }

    pub fn zeros(rows: Vec<Label>, cols: Vec<Label>) -> Self {
        let entries = vec![vec![BigInt::zero(); cols.len()]; rows.len()];
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(labels: Vec<Label>) -> Self {
        let mut m = IntMatrix::zeros(labels.clone(), labels);
        for i in 0..m.nrows() {
            m.entries[i][i] = BigInt::one();
        }
        m
    }

    /// Square matrix from small integers, labelled `1..=n`.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let labels: Vec<Label> = (1..=rows.len()).map(Label::from).collect();
        let cols = rows.first().map_or(0, Vec::len);
        let col_labels = (1..=cols).map(Label::from).collect();
        let entries = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        IntMatrix::new(labels, col_labels, entries)
    }

    pub fn with_labels(mut self, labels: Vec<Label>) -> Self {
        assert!(self.is_square() && labels.len() == self.nrows());
        self.rows = labels.clone();
        self.cols = labels;
        self
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    /// Row labels, which equal the column labels of a square matrix.
    pub fn labels(&self) -> &[Label] {
        &self.rows
    }

    pub fn row_labels(&self) -> &[Label] {
        &self.rows
    }

    pub fn col_labels(&self) -> &[Label] {
        &self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i][j] = value;
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn row_index(&self, label: &Label) -> Result<usize> {
        self.rows
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.clone()))
    }

    pub fn col_index(&self, label: &Label) -> Result<usize> {
        self.cols
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.clone()))
    }

    pub fn entry(&self, row: &Label, col: &Label) -> Result<&BigInt> {
        Ok(&self.entries[self.row_index(row)?][self.col_index(col)?])
    }

    /// Entries as `i64`, panicking on overflow. Convenient for small matrices.
    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        self.entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_i64().expect("entry fits in i64"))
                    .collect()
            })
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let entries = (0..self.ncols())
            .map(|j| {
                (0..self.nrows())
                    .map(|i| self.entries[i][j].clone())
                    .collect()
            })
            .collect();
        IntMatrix {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            entries,
        }
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.nrows(), self.ncols()), (other.nrows(), other.ncols()));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        IntMatrix {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries,
        }
    }

    pub fn neg(&self) -> IntMatrix {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|x| -x).collect())
            .collect();
        IntMatrix {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries,
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols(), other.nrows());
        let mut out = IntMatrix::zeros(self.rows.clone(), other.cols.clone());
        for i in 0..self.nrows() {
            for k in 0..self.ncols() {
                let a = &self.entries[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols() {
                    out.entries[i][j] += a * &other.entries[k][j];
                }
            }
        }
        out
    }

    pub fn plus_identity(&self) -> IntMatrix {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..m.nrows() {
            m.entries[i][i] += 1;
        }
        m
    }

    /// Entrywise absolute value.
    pub fn abs(&self) -> IntMatrix {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(Signed::abs).collect())
            .collect();
        IntMatrix {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries,
        }
    }

    /// Entrywise reduction into `{0, 1}`.
    pub fn mod2(&self) -> IntMatrix {
        let two = BigInt::from(2);
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|x| x.mod_floor(&two)).collect())
            .collect();
        IntMatrix {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries,
        }
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.nrows())
                .all(|i| (0..=i).all(|j| self.entries[i][j] == -&self.entries[j][i]))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.nrows()).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Rows and columns restricted to the labels in `rows` and `cols`,
    /// keeping the original order.
    pub fn submatrix(&self, rows: &BTreeSet<Label>, cols: &BTreeSet<Label>) -> Result<IntMatrix> {
        for l in rows {
            self.row_index(l)?;
        }
        for l in cols {
            self.col_index(l)?;
        }
        let ri: Vec<usize> = (0..self.nrows())
            .filter(|&i| rows.contains(&self.rows[i]))
            .collect();
        let ci: Vec<usize> = (0..self.ncols())
            .filter(|&j| cols.contains(&self.cols[j]))
            .collect();
        Ok(self.select(&ri, &ci))
    }

    pub(crate) fn select(&self, ri: &[usize], ci: &[usize]) -> IntMatrix {
        IntMatrix {
            rows: ri.iter().map(|&i| self.rows[i].clone()).collect(),
            cols: ci.iter().map(|&j| self.cols[j].clone()).collect(),
            entries: ri
                .iter()
                .map(|&i| ci.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
        }
    }

    /// Drops the row and column named `label` from a square matrix.
    pub fn delete(&self, label: &Label) -> Result<IntMatrix> {
        let k = self.row_index(label)?;
        let keep: Vec<usize> = (0..self.nrows()).filter(|&i| i != k).collect();
        Ok(self.select(&keep, &keep))
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

/// `A[X]`, the principal submatrix on `X`.
pub fn principal_submatrix(m: &IntMatrix, x: &BTreeSet<Label>) -> Result<IntMatrix> {
    m.submatrix(x, x)
}

/// Invariant factors of an integer matrix.
///
/// `size` is the number of columns, i.e. the number of generators when the
/// rows are read as relations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
    pub size: usize,
}

impl SmithForm {
    /// Diagonal of the normal form, padded with zeros to `size`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let mut d = self.invariant_factors.clone();
        d.resize(self.size, BigInt::zero());
        d
    }

    pub fn free_rank(&self) -> usize {
        self.size - self.rank
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let size = m.ncols();
    let factors = smith_diagonal(m.entries.clone(), m.nrows(), m.ncols());
    SmithForm {
        rank: factors.len(),
        invariant_factors: factors,
        size,
    }
}

/// Nonzero diagonal of the Smith form of an `r × c` array, in divisibility
/// order.
#[allow(clippy::needless_range_loop)]
pub(crate) fn smith_diagonal(mut a: Vec<Vec<BigInt>>, r: usize, c: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = smallest_nonzero(&a, t, t, r, c) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    let (head, tail) = a.split_at_mut(i);
                    let pivot_row = &head[t];
                    for j in t..c {
                        let delta = &q * &pivot_row[j];
                        tail[0][j] -= delta;
                    }
                    dirty |= !a[i][t].is_zero();
                }
            }
            for j in t + 1..c {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for i in t..r {
                        let delta = &q * &a[i][t];
                        a[i][j] -= delta;
                    }
                    dirty |= !a[t][j].is_zero();
                }
            }
            if dirty {
                let (pi, pj) = smallest_in_cross(&a, t, r, c);
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            // Row and column t are clear; enforce divisibility on the rest.
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let (head, tail) = a.split_at_mut(i);
                    for j in t..c {
                        head[t][j] += &tail[0][j];
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

fn smallest_nonzero(
    a: &[Vec<BigInt>],
    r0: usize,
    c0: usize,
    r: usize,
    c: usize,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in r0..r {
        for j in c0..c {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].magnitude() < a[bi][bj].magnitude()) {
                best = Some((i, j));
                if a[i][j].magnitude().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

/// Smallest nonzero entry in row `t` or column `t`; one exists by the caller.
fn smallest_in_cross(a: &[Vec<BigInt>], t: usize, r: usize, c: usize) -> (usize, usize) {
    let candidates = (t..r).map(|i| (i, t)).chain((t + 1..c).map(|j| (t, j)));
    candidates
        .filter(|&(i, j)| !a[i][j].is_zero())
        .min_by(|&(i, j), &(k, l)| a[i][j].magnitude().cmp(a[k][l].magnitude()))
        .expect("nonzero entry in pivot cross")
}

/// Exact determinant by Bareiss fraction-free elimination. The empty matrix
/// has determinant 1.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.nrows();
    let mut a = m.entries.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    let (r, c) = (m.nrows(), m.ncols());
    let mut a = m.entries.clone();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..c {
        let Some(p) = (rank..r).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..r {
            for j in col + 1..c {
                let v = &a[i][j] * &a[rank][col] - &a[i][col] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == r {
            break;
        }
    }
    rank
}

/// `det(tI − M)` by the Faddeev–LeVerrier recursion.
pub fn char_poly(m: &IntMatrix) -> UniPoly {
    assert!(
        m.is_square(),
        "characteristic polynomial of a non-square matrix"
    );
    let n = m.nrows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    // mk holds M_k; M_1 = I.
    let mut mk: Vec<Vec<BigInt>> = IntMatrix::identity(m.rows.clone()).entries;
    for k in 1..=n {
        let amk = mat_mul(&m.entries, &mk);
        let trace: BigInt = (0..n).map(|i| amk[i][i].clone()).sum();
        let (c, rem) = (-trace).div_rem(&BigInt::from(k));
        debug_assert!(rem.is_zero());
        coeffs[n - k] = c.clone();
        mk = amk;
        for (i, row) in mk.iter_mut().enumerate() {
            row[i] += &c;
        }
    }
    UniPoly::from_coefficients(coeffs)
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let c = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![BigInt::zero(); c]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..c {
                out[i][j] += &a[i][k] * &bk[j];
            }
        }
    }
    out
}

/// The pivot `M ∗ {e, f}` of a skew-symmetric matrix on the nonzero entry
/// `M[e, f] = z`.
pub fn pivot(m: &IntMatrix, e: &Label, f: &Label) -> Result<IntMatrix> {
    if !m.is_skew_symmetric() {
        return Err(Error::NotSkewSymmetric);
    }
    let (ie, jf) = (m.row_index(e)?, m.row_index(f)?);
    let z = m.entries[ie][jf].clone();
    if z.is_zero() || ie == jf {
        return Err(Error::ZeroPivot(e.clone(), f.clone()));
    }
    // With u = row e and v = row f restricted to E' = E − {e, f}:
    //   [e]  0     -z    -z v
    //   [f]  z      0     z u
    //   [E'] z vᵗ  -z uᵗ  M' + z (vᵗ u − uᵗ v)
    let n = m.nrows();
    let mut out = m.clone();
    let u = &m.entries[ie];
    let v = &m.entries[jf];
    for i in 0..n {
        for j in 0..n {
            let value = match (i == ie, i == jf, j == ie, j == jf) {
                (true, _, true, _) | (_, true, _, true) => BigInt::zero(),
                (true, _, _, true) => -&z,
                (_, true, true, _) => z.clone(),
                (true, _, _, _) => -&z * &v[j],
                (_, true, _, _) => &z * &u[j],
                (_, _, true, _) => &z * &v[i],
                (_, _, _, true) => -&z * &u[i],
                _ => &m.entries[i][j] + &z * (&v[i] * &u[j] - &u[i] * &v[j]),
            };
            out.entries[i][j] = value;
        }
    }
    Ok(out)
}

/// Kernel of a square matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gf2Kernel {
    pub dimension: usize,
    pub basis: Vec<Vec<bool>>,
}

pub fn gf2_kernel(m: &IntMatrix) -> Gf2Kernel {
    let (r, c) = (m.nrows(), m.ncols());
    let mut a: Vec<Vec<bool>> = m
        .entries
        .iter()
        .map(|row| row.iter().map(BigInt::is_odd).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..c {
        let Some(p) = (row..r).find(|&i| a[i][col]) else {
            continue;
        };
        a.swap(row, p);
        for i in 0..r {
            if i != row && a[i][col] {
                let (src, dst) = if i < row {
                    let (head, tail) = a.split_at_mut(row);
                    (&tail[0], &mut head[i])
                } else {
                    let (head, tail) = a.split_at_mut(i);
                    (&head[row], &mut tail[0])
                };
                for (d, s) in dst.iter_mut().zip(src) {
                    *d ^= *s;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..c).filter(|j| !pivots.contains(j)).collect();
    let basis = free
        .iter()
        .map(|&fcol| {
            let mut v = vec![false; c];
            v[fcol] = true;
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = a[prow][fcol];
            }
            v
        })
        .collect();
    Gf2Kernel {
        dimension: free.len(),
        basis,
    }
}

/// Whether every nonsingular principal submatrix has determinant `±1`.
pub fn is_principally_unimodular(m: &IntMatrix) -> Result<bool> {
    is_principally_unimodular_with_limit(m, PU_LIMIT)
}

pub fn is_principally_unimodular_with_limit(m: &IntMatrix, limit: usize) -> Result<bool> {
    let n = m.nrows();
    if n > limit {
        return Err(Error::TooLarge { size: n, limit });
    }
    for bits in 1u64..(1u64 << n) {
        let idx: Vec<usize> = (0..n).filter(|&i| bits >> i & 1 == 1).collect();
        let d = determinant(&m.select(&idx, &idx));
        if !d.is_zero() && !d.magnitude().is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Determinant of a square rational array by Gaussian elimination.
pub fn rational_determinant(rows: &[Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            a.swap(col, p);
            det = -det;
        }
        det *= &a[col][col];
        let (head, tail) = a.split_at_mut(col + 1);
        let pivot_row = &head[col];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for j in col..n {
                let delta = &factor * &pivot_row[j];
                row[j] -= delta;
            }
        }
    }
    det
}

/// Inverse over the rationals, or `None` when singular.
pub fn rational_inverse(m: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    assert!(m.is_square());
    let n = m.nrows();
    let mut a: Vec<Vec<BigRational>> = m
        .entries
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> =
                row.iter().cloned().map(BigRational::from_integer).collect();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let factor = a[i][col].clone();
                let (src, dst) = if i < col {
                    let (head, tail) = a.split_at_mut(col);
                    (&tail[0], &mut head[i])
                } else {
                    let (head, tail) = a.split_at_mut(i);
                    (&head[col], &mut tail[0])
                };
                for (d, s) in dst.iter_mut().zip(src) {
                    *d -= &factor * s;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Inverse as an integer matrix, or `None` when singular or not unimodular.
pub fn integer_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    let inv = rational_inverse(m)?;
    let entries = inv
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| x.is_integer().then(|| x.to_integer()))
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    Some(IntMatrix {
        rows: m.cols.clone(),
        cols: m.rows.clone(),
        entries,
    })
}

/// Solves `x · M = v` over the rationals for nonsingular square `M`.
pub fn solve_left(m: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigRational>> {
    let inv = rational_inverse(m)?;
    let n = m.nrows();
    Some(
        (0..n)
            .map(|j| {
                (0..n).fold(BigRational::zero(), |acc, k| {
                    acc + BigRational::from_integer(v[k].clone()) * &inv[k][j]
                })
            })
            .collect(),
    )
}
