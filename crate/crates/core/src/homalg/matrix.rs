//! Dense integer matrices with arbitrary-precision entries, Smith normal form,
//! and the lattice operations the spectral-sequence engine is built on.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::json_int::JsonInt;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<JsonInt>>", into = "Vec<Vec<JsonInt>>")]
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
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds from row lists. All rows must have equal length; with no rows the
    /// column count is `cols_if_empty`.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>], cols_if_empty: usize) -> Result<Self, String> {
        let cols = rows.first().map_or(cols_if_empty, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(format!("row {i} has {} entries, expected {cols}", row.len()));
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        IntMatrix { rows, cols, data: entries.iter().map(|&x| BigInt::from(x)).collect() }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row_lists(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        let a = &self[(i, j)];
                        if !a.is_zero() {
                            acc += a * x;
                        }
                    }
                }
                acc
            })
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

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let v = s * k;
                self.data[dst * self.cols + j] += v;
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let v = s * k;
                self.data[i * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = -std::mem::take(x);
        }
    }

    /// Rows `a`, `b` replaced by `(p·a + q·b, r·a + s·b)`; unimodular when `ps - qr = ±1`.
    fn mix_rows(&mut self, a: usize, b: usize, [p, q, r, s]: [&BigInt; 4]) {
        for j in 0..self.cols {
            let x = self.data[a * self.cols + j].clone();
            let y = self.data[b * self.cols + j].clone();
            self.data[a * self.cols + j] = p * &x + q * &y;
            self.data[b * self.cols + j] = r * &x + s * &y;
        }
    }

    fn mix_cols(&mut self, a: usize, b: usize, [p, q, r, s]: [&BigInt; 4]) {
        for i in 0..self.rows {
            let x = self.data[i * self.cols + a].clone();
            let y = self.data[i * self.cols + b].clone();
            self.data[i * self.cols + a] = p * &x + q * &y;
            self.data[i * self.cols + b] = r * &x + s * &y;
        }
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        smith(self).rank()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}{:?}", self.rows, self.cols, self.row_lists())
    }
}

// Serialized as row lists, so a matrix with no rows reads back as 0x0.
impl TryFrom<Vec<Vec<JsonInt>>> for IntMatrix {
    type Error = String;
    fn try_from(rows: Vec<Vec<JsonInt>>) -> Result<Self, String> {
        let rows: Vec<Vec<BigInt>> =
            rows.into_iter().map(|r| r.into_iter().map(BigInt::try_from).collect()).collect::<Result<_, _>>()?;
        IntMatrix::from_rows(&rows, 0)
    }
}

impl From<IntMatrix> for Vec<Vec<JsonInt>> {
    fn from(m: IntMatrix) -> Self {
        m.row_lists().iter().map(|r| r.iter().map(JsonInt::from).collect()).collect()
    }
}

/// `P · A · Q = D` with `P`, `Q` unimodular and `D` diagonal, each diagonal
/// entry dividing the next. `P⁻¹` and `Q⁻¹` are tracked alongside.
#[derive(Debug, Clone)]
pub struct Smith {
    pub diagonal: Vec<BigInt>,
    pub p: IntMatrix,
    pub p_inv: IntMatrix,
    pub q: IntMatrix,
    pub q_inv: IntMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|d| !d.is_zero()).count()
    }

    /// Elementary divisors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect()
    }
}

pub fn smith(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut p = IntMatrix::identity(m);
    let mut p_inv = IntMatrix::identity(m);
    let mut q = IntMatrix::identity(n);
    let mut q_inv = IntMatrix::identity(n);
    let steps = m.min(n);
    let mut t = 0;
    while t < steps {
        // pivot: smallest nonzero magnitude in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = &d[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        p.swap_rows(t, pi);
        p_inv.swap_cols(t, pi);
        d.swap_cols(t, pj);
        q.swap_cols(t, pj);
        q_inv.swap_rows(t, pj);

        loop {
            let mut dirty = false;
            // clear column t below the pivot
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let a0 = d[(t, t)].clone();
                let b0 = d[(i, t)].clone();
                if (&b0 % &a0).is_zero() {
                    let k = -(&b0 / &a0);
                    d.add_row(i, t, &k);
                    p.add_row(i, t, &k);
                    p_inv.add_col(t, i, &-k);
                } else {
                    let e = a0.extended_gcd(&b0);
                    let (g, x, y) = (e.gcd, e.x, e.y);
                    let (u, v) = (&a0 / &g, &b0 / &g);
                    let nv = -v.clone();
                    // [x y; -v u] has determinant 1; inverse is [u -y; v x]
                    d.mix_rows(t, i, [&x, &y, &nv, &u]);
                    p.mix_rows(t, i, [&x, &y, &nv, &u]);
                    let ny = -y.clone();
                    p_inv.mix_cols(t, i, [&u, &v, &ny, &x]);
                    dirty = true;
                }
            }
            // clear row t right of the pivot
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let a0 = d[(t, t)].clone();
                let b0 = d[(t, j)].clone();
                if (&b0 % &a0).is_zero() {
                    let k = -(&b0 / &a0);
                    d.add_col(j, t, &k);
                    q.add_col(j, t, &k);
                    q_inv.add_row(t, j, &-k);
                } else {
                    let e = a0.extended_gcd(&b0);
                    let (g, x, y) = (e.gcd, e.x, e.y);
                    let (u, v) = (&a0 / &g, &b0 / &g);
                    let nv = -v.clone();
                    d.mix_cols(t, j, [&x, &y, &nv, &u]);
                    q.mix_cols(t, j, [&x, &y, &nv, &u]);
                    let ny = -y.clone();
                    q_inv.mix_rows(t, j, [&u, &v, &ny, &x]);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility: pivot must divide the rest of the block
            let pivot = d[(t, t)].clone();
            let mut offender = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !(&d[(i, j)] % &pivot).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    p.add_row(t, i, &one);
                    p_inv.add_col(i, t, &-one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            p.negate_row(t);
            // P⁻¹ column t negated
            for i in 0..m {
                let x = &mut p_inv[(i, t)];
                *x = -std::mem::take(x);
            }
        }
        t += 1;
    }
    let diagonal = (0..steps).map(|i| d[(i, i)].clone()).collect();
    Smith { diagonal, p, p_inv, q, q_inv }
}

/// Basis (as columns of the returned matrix) of the integer kernel of `a`.
/// The kernel lattice is saturated.
pub fn kernel(a: &IntMatrix) -> IntMatrix {
    let s = smith(a);
    let r = s.rank();
    let cols: Vec<usize> = (r..a.cols).collect();
    let rows: Vec<usize> = (0..a.cols).collect();
    s.q.select(&rows, &cols)
}

/// Basis of the lattice spanned by the given columns.
pub fn lattice_basis(generators: &IntMatrix) -> IntMatrix {
    let s = smith(generators);
    let r = s.rank();
    // image = P⁻¹ D, first r columns
    let mut basis = IntMatrix::zeros(generators.rows, r);
    for j in 0..r {
        for i in 0..generators.rows {
            basis[(i, j)] = &s.p_inv[(i, j)] * &s.diagonal[j];
        }
    }
    basis
}

/// Solves `basis · x = v` for integer `x`, given `basis` of full column rank.
/// Returns `None` when `v` is not in the lattice.
pub fn lattice_coordinates(basis_smith: &Smith, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let k = basis_smith.q.rows();
    let pv = basis_smith.p.apply(v);
    let r = basis_smith.rank();
    debug_assert_eq!(r, k, "basis must have full column rank");
    let mut y = Vec::with_capacity(k);
    for (i, x) in pv.iter().enumerate() {
        if i < r {
            let (q, rem) = x.div_rem(&basis_smith.diagonal[i]);
            if !rem.is_zero() {
                return None;
            }
            y.push(q);
        } else if !x.is_zero() {
            return None;
        }
    }
    Some(basis_smith.q.apply(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, e: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(rows, cols, e)
    }

    fn check_smith(a: &IntMatrix) -> Smith {
        let s = smith(a);
        let d = &(&s.p * a) * &s.q;
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j {
                    assert!(d[(i, j)].is_zero(), "off-diagonal entry in {d:?}");
                } else {
                    assert_eq!(d[(i, i)], s.diagonal[i]);
                }
            }
        }
        assert_eq!(&s.p * &s.p_inv, IntMatrix::identity(a.rows()));
        assert_eq!(&s.q * &s.q_inv, IntMatrix::identity(a.cols()));
        for w in s.diagonal.windows(2) {
            if !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
        s
    }

    #[test]
    fn smith_small_cases() {
        let s = check_smith(&m(2, 2, &[2, 4, 6, 8]));
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(4)]);
        let s = check_smith(&m(1, 1, &[2]));
        assert_eq!(s.torsion(), vec![BigInt::from(2)]);
        let s = check_smith(&m(2, 3, &[0, 0, 0, 0, 0, 0]));
        assert_eq!(s.rank(), 0);
        let s = check_smith(&m(3, 3, &[2, 0, 0, 0, 3, 0, 0, 0, 5]));
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(1), BigInt::from(30)]);
    }

    #[test]
    fn kernel_is_saturated() {
        let a = m(1, 2, &[2, 4]);
        let k = kernel(&a);
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert!(a.apply(&v).iter().all(Zero::is_zero));
        // primitive vector ±(2,-1)
        assert_eq!(v[0].abs(), BigInt::from(2));
        assert_eq!(v[1].abs(), BigInt::from(1));
    }

    #[test]
    fn coordinates_in_sublattice() {
        let basis = m(2, 1, &[2, 0]);
        let s = smith(&basis);
        assert_eq!(lattice_coordinates(&s, &[BigInt::from(6), BigInt::zero()]), Some(vec![BigInt::from(3)]));
        assert_eq!(lattice_coordinates(&s, &[BigInt::from(3), BigInt::zero()]), None);
        assert_eq!(lattice_coordinates(&s, &[BigInt::from(2), BigInt::one()]), None);
    }

    #[test]
    fn random_smith_invariants() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let r = rng.random_range(0..6);
            let c = rng.random_range(0..6);
            let e: Vec<i64> = (0..r * c).map(|_| rng.random_range(-4..=4)).collect();
            check_smith(&m(r, c, &e));
        }
    }
}
