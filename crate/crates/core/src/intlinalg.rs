//! Exact integer matrix algebra.
//!
//! Everything here works over arbitrary-precision integers. The two normal
//! forms come with unimodular certificates so callers can re-verify them
//! without trusting the reduction loop:
//!
//! * [`hnf`] returns `(H, U)` with `U·A = H`, `H` in row-style Hermite form
//!   (row echelon, positive pivots, entries above a pivot reduced into
//!   `[0, pivot)`).
//! * [`snf`] returns `(D, U, V)` with `U·A·V = D` and the invariant factors
//!   on the diagonal forming a divisibility chain.
//!
//! Linear systems, kernels and lattice membership are all routed through the
//! Smith form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Converts a slice of machine integers into a big-integer vector.
pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed so that zero-row matrices
    /// still know their width.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix row");
            data.extend(r);
        }
        IntMatrix { rows: nrows, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| ints(r)).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.rows, v.len(), "vector-matrix dimension mismatch");
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| &v[i] * self.get(i, j)).sum())
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "vstack width mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hstack height mismatch");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend(self.row(i).iter().cloned());
            data.extend(other.row(i).iter().cloned());
        }
        IntMatrix { rows: self.rows, cols, data }
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] -= k * row[src]
    fn row_sub_multiple(&mut self, target: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let d = self.get(src, j) * k;
            self.data[target * self.cols + j] -= d;
        }
    }

    /// col[target] -= k * col[src]
    fn col_sub_multiple(&mut self, target: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let d = self.get(i, src) * k;
            self.data[i * self.cols + target] -= d;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfResult {
    pub h: IntMatrix,
    pub u: IntMatrix,
}

impl HnfResult {
    /// Number of nonzero rows of `H`.
    pub fn rank(&self) -> usize {
        (0..self.h.rows()).take_while(|&i| self.h.row(i).iter().any(|x| !x.is_zero())).count()
    }

    /// Nonzero rows of `H`: a canonical basis of the row lattice.
    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        (0..self.rank()).map(|i| self.h.row(i).to_vec()).collect()
    }
}

/// Row-style Hermite normal form with transform: `U·A = H`.
pub fn hnf(a: &IntMatrix) -> HnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let piv = (r..m).filter(|&i| !h.get(i, c).is_zero()).min_by_key(|&i| h.get(i, c).abs());
            let Some(p) = piv else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..m {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = h.get(i, c).div_floor(h.get(r, c));
                h.row_sub_multiple(i, r, &q);
                u.row_sub_multiple(i, r, &q);
                if !h.get(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h.get(i, c).div_floor(h.get(r, c));
            h.row_sub_multiple(i, r, &q);
            u.row_sub_multiple(i, r, &q);
        }
        r += 1;
    }
    HnfResult { h, u }
}

/// Canonical basis (HNF rows) of the lattice spanned by `rows`.
pub fn lattice_basis(dim: usize, rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    hnf(&IntMatrix::from_rows(dim, rows.to_vec())).basis()
}

/// Reduces `v` against a Hermite basis so that the entry in each pivot
/// column lands in `[0, pivot)`. Two vectors are congruent modulo the lattice
/// iff their reductions coincide.
pub fn reduce_mod_hnf(v: &[BigInt], basis: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut out = v.to_vec();
    for row in basis {
        let Some(p) = row.iter().position(|x| !x.is_zero()) else { continue };
        let q = out[p].div_floor(&row[p]);
        if q.is_zero() {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row) {
            *o -= &q * r;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d.get(i, i).clone()).take_while(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form with transforms: `U·A·V = D`.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let k = m.min(n);
    for t in 0..k {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = d.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        u.swap_rows(t, bi);
        d.swap_cols(t, bj);
        v.swap_cols(t, bj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(d.get(t, t));
                d.row_sub_multiple(i, t, &q);
                u.row_sub_multiple(i, t, &q);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(d.get(t, t));
                d.col_sub_multiple(j, t, &q);
                v.col_sub_multiple(j, t, &q);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                // a remainder smaller than the pivot survived; promote it
                let mut best = (t, t);
                for i in t + 1..m {
                    let x = d.get(i, t);
                    if !x.is_zero() && x.abs() < d.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    let x = d.get(t, j);
                    if !x.is_zero() && x.abs() < d.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                d.swap_rows(t, best.0);
                u.swap_rows(t, best.0);
                d.swap_cols(t, best.1);
                v.swap_cols(t, best.1);
                continue;
            }
            let pivot = d.get(t, t).clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    d.row_sub_multiple(t, i, &minus_one);
                    u.row_sub_multiple(t, i, &minus_one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfResult { d, u, v }
}

/// Solution set of an integer linear system: `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineLattice {
    pub particular: Option<Vec<BigInt>>,
    pub kernel: Vec<Vec<BigInt>>,
}

impl AffineLattice {
    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }
}

/// All integer solutions of `A·x = b`.
///
/// The kernel basis is returned in Hermite form and the particular solution
/// is reduced against it, so the output is canonical for the solution set.
pub fn solve_linear(a: &IntMatrix, b: &[BigInt]) -> Result<AffineLattice, LinAlgError> {
    if b.len() != a.rows() {
        return Err(LinAlgError::DimensionMismatch { expected: a.rows(), found: b.len() });
    }
    let n = a.cols();
    let s = snf(a);
    let r = s.rank();
    let kernel_raw: Vec<Vec<BigInt>> = (r..n).map(|j| s.v.column(j)).collect();
    let kernel = lattice_basis(n, &kernel_raw);
    let c = s.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); n];
    let mut feasible = c[r..].iter().all(|x| x.is_zero());
    if feasible {
        for i in 0..r {
            let (q, rem) = c[i].div_rem(s.d.get(i, i));
            if !rem.is_zero() {
                feasible = false;
                break;
            }
            y[i] = q;
        }
    }
    let particular = feasible.then(|| reduce_mod_hnf(&s.v.mul_vec(&y), &kernel));
    Ok(AffineLattice { particular, kernel })
}

/// Basis of the integer kernel `{x : A·x = 0}`.
pub fn kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let zero = vec![BigInt::zero(); a.rows()];
    solve_linear(a, &zero).expect("dimensions agree by construction").kernel
}

/// Coordinates `c` with `Σ c_i·basis_i = v` (componentwise modulo `moduli`
/// when given; a zero modulus means "exact"), or `None` if `v` is not in the
/// lattice.
pub fn lattice_member(v: &[BigInt], basis: &[Vec<BigInt>], moduli: Option<&[BigInt]>) -> Option<Vec<BigInt>> {
    let dim = v.len();
    let mut columns: Vec<Vec<BigInt>> = basis.to_vec();
    for b in basis {
        assert_eq!(b.len(), dim, "basis vector dimension mismatch");
    }
    if let Some(ms) = moduli {
        assert_eq!(ms.len(), dim, "moduli dimension mismatch");
        for (i, m) in ms.iter().enumerate() {
            if !m.is_zero() {
                let mut e = vec![BigInt::zero(); dim];
                e[i] = m.clone();
                columns.push(e);
            }
        }
    }
    let mat = IntMatrix::from_columns(dim, &columns);
    let sol = solve_linear(&mat, v).expect("dimensions agree by construction");
    sol.particular.map(|p| p[..basis.len()].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    fn is_hnf_shape(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for i in 0..h.rows() {
            match h.row(i).iter().position(|x| !x.is_zero()) {
                None => seen_zero = true,
                Some(p) => {
                    if seen_zero || last_pivot.is_some_and(|lp| p <= lp) || !h.get(i, p).is_positive() {
                        return false;
                    }
                    for k in 0..i {
                        let x = h.get(k, p);
                        if x.is_negative() || x >= h.get(i, p) {
                            return false;
                        }
                    }
                    last_pivot = Some(p);
                }
            }
        }
        true
    }

    fn check_snf(a: &IntMatrix, s: &SnfResult) {
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(f.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn hnf_identity_and_zero() {
        let id = IntMatrix::identity(2);
        let r = hnf(&id);
        assert_eq!(r.h, id);
        assert_eq!(r.u, id);
        let z = IntMatrix::zeros(2, 3);
        let r = hnf(&z);
        assert_eq!(r.h, z);
        assert_eq!(r.u, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_small_example() {
        let a = m(&[&[2, 0], &[1, 1]]);
        let r = hnf(&a);
        assert_eq!(r.h, m(&[&[1, 1], &[0, 2]]));
        assert_eq!(r.u.mul(&a), r.h);
        assert!(r.u.is_unimodular());
        // same row lattice: every row of each lies in the other
        for row in a.row_vecs() {
            assert!(lattice_member(&row, &r.h.row_vecs(), None).is_some());
        }
        for row in r.h.row_vecs() {
            assert!(lattice_member(&row, &a.row_vecs(), None).is_some());
        }
    }

    #[test]
    fn snf_examples() {
        let s = snf(&m(&[&[3, 0], &[0, 1]]));
        assert_eq!(s.d, m(&[&[1, 0], &[0, 3]]));
        let a = m(&[&[2, 4], &[6, 8]]);
        let s = snf(&a);
        assert_eq!(s.d, m(&[&[2, 0], &[0, 4]]));
        check_snf(&a, &s);
        let s = snf(&m(&[&[0]]));
        assert_eq!(s.d, m(&[&[0]]));
    }

    #[test]
    fn solve_examples() {
        let s = solve_linear(&m(&[&[2]]), &ints(&[4])).unwrap();
        assert_eq!(s.particular, Some(ints(&[2])));
        assert!(s.kernel.is_empty());

        let a = m(&[&[1, 1]]);
        let s = solve_linear(&a, &ints(&[3])).unwrap();
        let p = s.particular.clone().unwrap();
        assert_eq!(a.mul_vec(&p), ints(&[3]));
        // [3,0] differs from the canonical particular by a kernel multiple
        let diff: Vec<BigInt> = ints(&[3, 0]).iter().zip(&p).map(|(x, y)| x - y).collect();
        assert!(lattice_member(&diff, &s.kernel, None).is_some());
        assert_eq!(s.kernel, vec![ints(&[1, -1])]);

        assert!(solve_linear(&m(&[&[2]]), &ints(&[3])).unwrap().is_empty());
        assert_eq!(
            solve_linear(&m(&[&[1, 2]]), &ints(&[1, 2])),
            Err(LinAlgError::DimensionMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn membership_examples() {
        assert_eq!(lattice_member(&ints(&[2, 2]), &[ints(&[1, 1])], None), Some(ints(&[2])));
        assert_eq!(lattice_member(&ints(&[1, 0]), &[ints(&[1, 1])], None), None);
        assert_eq!(
            lattice_member(&ints(&[3, 1]), &[ints(&[1, 1]), ints(&[0, 2])], None),
            Some(ints(&[3, -1]))
        );
        // with moduli: [1,-1] ≡ 1·[1,1] mod (0, 2)
        let c = lattice_member(&ints(&[1, -1]), &[ints(&[1, 1])], Some(&ints(&[0, 2]))).unwrap();
        assert_eq!(c, ints(&[1]));
    }

    #[test]
    fn det_matches_expansion() {
        assert_eq!(m(&[&[2, 1], &[7, 4]]).det(), BigInt::from(1));
        assert_eq!(m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]).det(), BigInt::from(-5));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det(), BigInt::from(0));
    }

    fn arb_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-10i64..=10, r * c)
                .prop_map(move |v| IntMatrix::from_rows(c, v.chunks(c).map(ints).collect()))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn hnf_certificate(a in arb_matrix()) {
            let r = hnf(&a);
            prop_assert_eq!(r.u.mul(&a), r.h.clone());
            prop_assert!(r.u.is_unimodular());
            prop_assert!(is_hnf_shape(&r.h));
            prop_assert_eq!(hnf(&a), r);
        }

        #[test]
        fn snf_certificate(a in arb_matrix()) {
            let s = snf(&a);
            check_snf(&a, &s);
            prop_assert_eq!(snf(&a), s);
        }

        #[test]
        fn reduction_is_idempotent(a in arb_matrix(), v in proptest::collection::vec(-30i64..=30, 5)) {
            let basis = hnf(&a).basis();
            let v = ints(&v[..a.cols()]);
            let once = reduce_mod_hnf(&v, &basis);
            prop_assert_eq!(reduce_mod_hnf(&once, &basis), once);
        }
    }

    /// Exhaustive box search as the oracle for 3×3 systems.
    #[test]
    fn solve_against_box_search() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..12 {
            let vals: Vec<i64> = (0..9).map(|_| rng.gen_range(-3..=3)).collect();
            let a = IntMatrix::from_rows(3, vals.chunks(3).map(ints).collect());
            let b: Vec<i64> = (0..3).map(|_| rng.gen_range(-6..=6)).collect();
            let sol = solve_linear(&a, &ints(&b)).unwrap();
            let mut found = Vec::new();
            for x in -20i64..=20 {
                for y in -20i64..=20 {
                    for z in -20i64..=20 {
                        let ok = (0..3).all(|i| vals[3 * i] * x + vals[3 * i + 1] * y + vals[3 * i + 2] * z == b[i]);
                        if ok {
                            found.push(ints(&[x, y, z]));
                        }
                    }
                }
            }
            match &sol.particular {
                None => assert!(found.is_empty()),
                Some(p) => {
                    assert_eq!(a.mul_vec(p), ints(&b));
                    for k in &sol.kernel {
                        assert!(a.mul_vec(k).iter().all(|x| x.is_zero()));
                    }
                    for f in &found {
                        let diff: Vec<BigInt> = f.iter().zip(p).map(|(x, y)| x - y).collect();
                        assert!(lattice_member(&diff, &sol.kernel, None).is_some());
                    }
                    // the box contains the canonical particular or something close; at least
                    // one box solution exists whenever the particular itself is in range
                    if p.iter().all(|x| x.abs() <= BigInt::from(20)) {
                        assert!(!found.is_empty());
                    }
                }
            }
        }
    }
}
