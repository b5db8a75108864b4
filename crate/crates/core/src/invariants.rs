//! Seifert matrix, signature and determinant of a braid closure.
//!
//! The Seifert surface is the one produced by Seifert's algorithm on the
//! closed braid diagram: one disk per strand, stacked, and one half-twisted
//! band per letter. First homology is generated by the loops that run through
//! two consecutive bands of the same column (strand pair `i, i+1`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::braid::{require_knot, BraidError, BraidWord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertMatrix {
    size: usize,
    entries: Vec<i64>,
}

impl SeifertMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.size + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.size.max(1)).take(self.size).map(<[i64]>::to_vec).collect()
    }

    /// `V + Vᵀ`
    pub fn symmetrized(&self) -> Vec<Vec<i64>> {
        let n = self.size;
        (0..n).map(|i| (0..n).map(|j| self.get(i, j) + self.get(j, i)).collect()).collect()
    }
}

struct Loop {
    column: usize,
    start: usize,
    end: usize,
}

/// Seifert matrix of the closure; `g = letters - strands + 1` square.
pub fn seifert_matrix(b: &BraidWord) -> Result<SeifertMatrix, BraidError> {
    require_knot(b)?;
    let letters = b.letters();
    let mut loops = Vec::new();
    for column in 1..b.strands() as usize {
        let positions: Vec<usize> =
            letters.iter().enumerate().filter(|(_, e)| e.unsigned_abs() as usize == column).map(|(k, _)| k).collect();
        // a knot closure never leaves a column empty (that would split the closure)
        debug_assert!(!positions.is_empty());
        for w in positions.windows(2) {
            loops.push(Loop { column, start: w[0], end: w[1] });
        }
    }
    let g = loops.len();
    debug_assert_eq!(g + b.strands() as usize, letters.len() + 1);
    let positive = |k: usize| letters[k] > 0;
    let mut entries = vec![0i64; g * g];
    for (a, la) in loops.iter().enumerate() {
        entries[a * g + a] = match (positive(la.start), positive(la.end)) {
            (true, true) => -1,
            (false, false) => 1,
            _ => 0,
        };
        for (c, lc) in loops.iter().enumerate() {
            if lc.column == la.column && lc.start == la.end {
                // consecutive loops sharing band `la.end`
                if positive(la.end) {
                    entries[a * g + c] = 1;
                } else {
                    entries[c * g + a] = -1;
                }
            } else if lc.column == la.column + 1 {
                let (p, q, r, s) = (la.start, la.end, lc.start, lc.end);
                if p < r && r < q && q < s {
                    entries[a * g + c] = -1;
                } else if r < p && p < s && s < q {
                    entries[a * g + c] = 1;
                }
            }
        }
    }
    Ok(SeifertMatrix { size: g, entries })
}

/// Signature of a symmetric integer matrix, by exact congruence diagonalization.
pub fn symmetric_signature(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|row| row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut signature = 0i64;
    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()) {
            let p = active.swap_remove(pos);
            let pivot = a[p][p].clone();
            signature += if pivot.is_positive() { 1 } else { -1 };
            for &i in &active {
                if a[i][p].is_zero() {
                    continue;
                }
                let f = &a[i][p] / &pivot;
                for &j in &active {
                    let v = &f * &a[p][j];
                    a[i][j] -= v;
                }
            }
            continue;
        }
        // zero diagonal: find an off-diagonal entry and fold row/col j into i
        let mut pair = None;
        'find: for &i in &active {
            for &j in &active {
                if i != j && !a[i][j].is_zero() {
                    pair = Some((i, j));
                    break 'find;
                }
            }
        }
        let Some((i, j)) = pair else { break };
        // row_i += row_j, then col_i += col_j; new a[i][i] = 2 a[i][j]
        for k in 0..n {
            let v = a[j][k].clone();
            a[i][k] += v;
        }
        for k in 0..n {
            let v = a[k][j].clone();
            a[k][i] += v;
        }
    }
    signature
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn integer_determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Knot signature: signature of `V + Vᵀ`.
pub fn signature(b: &BraidWord) -> Result<i64, BraidError> {
    let v = seifert_matrix(b)?;
    Ok(symmetric_signature(&v.symmetrized()))
}

/// Knot determinant `|det(V + Vᵀ)|`; 1 for an empty Seifert matrix.
pub fn determinant(b: &BraidWord) -> Result<BigInt, BraidError> {
    let v = seifert_matrix(b)?;
    Ok(integer_determinant(&v.symmetrized()).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;

    fn w(t: &str) -> BraidWord {
        parse_braid(t).unwrap()
    }

    #[test]
    fn trefoil_matrix() {
        let v = seifert_matrix(&w("s1^3")).unwrap();
        assert_eq!(v.rows(), vec![vec![-1, 1], vec![0, -1]]);
    }

    #[test]
    fn unknot_matrix_is_empty() {
        let v = seifert_matrix(&w("s1")).unwrap();
        assert_eq!(v.size(), 0);
        assert_eq!(determinant(&w("s1")).unwrap(), BigInt::from(1));
        assert_eq!(signature(&w("s1")).unwrap(), 0);
    }

    #[test]
    fn figure_eight_matrix() {
        let v = seifert_matrix(&w("s1 s2^-1 s1 s2^-1")).unwrap();
        assert_eq!(v.size(), 2);
        assert_eq!(integer_determinant(&v.symmetrized()).abs(), BigInt::from(5));
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature(&w("s1^3")).unwrap(), -2);
        assert_eq!(signature(&w("s1^-3")).unwrap(), 2);
        assert_eq!(signature(&w("s1 s2^-1 s1 s2^-1")).unwrap(), 0);
        assert_eq!(signature(&w("s1^3 s2^3")).unwrap(), -4);
        assert_eq!(determinant(&w("s1^3")).unwrap(), BigInt::from(3));
        assert_eq!(determinant(&w("s1 s2^-1 s1 s2^-1")).unwrap(), BigInt::from(5));
    }

    #[test]
    fn zero_diagonal_signature() {
        // hyperbolic plane
        assert_eq!(symmetric_signature(&[vec![0, 1], vec![1, 0]]), 0);
        assert_eq!(symmetric_signature(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -3]]), -1);
        assert_eq!(symmetric_signature(&[vec![0, 0], vec![0, 0]]), 0);
    }

    #[test]
    fn rejects_links() {
        assert!(matches!(signature(&w("s1^2")), Err(BraidError::NotAKnot(2))));
    }
}
