//! Independent checks of the Seifert matrices: `det(V - tVᵀ)` against the
//! Alexander polynomial from the unreduced Burau matrix of the braid, whose
//! `I - ψ(β)` with one row and column deleted gives `Δ(t)` up to `±tᵏ`, and
//! signatures against the known values for torus knots.

mod common;

use knotfloer::braid::{parse_braid, BraidWord};
use knotfloer::invariants::{determinant, integer_determinant, seifert_matrix, signature};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type M = Vec<Vec<BigInt>>;

fn identity(n: usize) -> M {
    (0..n).map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect()).collect()
}

fn mul(a: &M, b: &M) -> M {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

/// Unreduced Burau matrix of `σᵢ^{±1}` at integer `t`, scaled by `t` for the
/// inverse so everything stays integral. Returns `(matrix, t-power divided out)`.
fn burau_letter(n: usize, letter: i32, t: i64) -> (M, u32) {
    let i = letter.unsigned_abs() as usize - 1;
    let mut m = identity(n);
    let t = BigInt::from(t);
    if letter > 0 {
        m[i][i] = BigInt::one() - &t;
        m[i][i + 1] = t.clone();
        m[i + 1][i] = BigInt::one();
        m[i + 1][i + 1] = BigInt::zero();
        (m, 0)
    } else {
        // t·ψ(σᵢ)⁻¹ = [[0, t], [1, t - 1]] in the block; other diagonal entries scale by t
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = t.clone();
        }
        m[i][i] = BigInt::zero();
        m[i][i + 1] = t.clone();
        m[i + 1][i] = BigInt::one();
        m[i + 1][i + 1] = &t - BigInt::one();
        (m, 1)
    }
}

/// `det(I - ψ(β))` minor at integer `t`, as a rational `num / t^k`.
fn burau_alexander(b: &BraidWord, t: i64) -> (BigInt, BigInt) {
    let n = b.strands() as usize;
    let mut p = identity(n);
    let mut scale = 0;
    for &l in b.letters() {
        let (m, s) = burau_letter(n, l, t);
        p = mul(&p, &m);
        scale += s;
    }
    let denom = BigInt::from(t).pow(scale);
    // (denom·I - P)/denom, drop last row and column
    let minor: Vec<Vec<BigInt>> = (0..n - 1)
        .map(|i| (0..n - 1).map(|j| if i == j { &denom - &p[i][j] } else { -&p[i][j] }).collect())
        .collect();
    (bigint_det(&minor), denom.pow(n as u32 - 1))
}

/// Fraction-free elimination over `BigInt`.
fn bigint_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn seifert_alexander(b: &BraidWord, t: i64) -> BigInt {
    let v = seifert_matrix(b).unwrap();
    let n = v.size();
    let m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| v.get(i, j) - t * v.get(j, i)).collect()).collect();
    integer_determinant(&m)
}

/// `num / den = ±tᵏ` for some integer `k`; returns `(sign, k)`.
fn unit(num: &BigInt, den: &BigInt, t: i64) -> Option<(bool, i64)> {
    let (mut a, mut b) = (num.abs(), den.abs());
    let tb = BigInt::from(t.abs());
    let mut k = 0;
    while a != b {
        if a > b && (&a % &tb).is_zero() {
            a /= &tb;
            k += 1;
        } else if b > a && (&b % &tb).is_zero() {
            b /= &tb;
            k -= 1;
        } else {
            return None;
        }
    }
    let negative = num.is_negative() != den.is_negative();
    // for negative t the sign of t^k flips with odd k
    let negative = if t < 0 && k % 2 != 0 { !negative } else { negative };
    Some((negative, k))
}

fn agree(b: &BraidWord) -> Result<(), String> {
    let mut seen: Option<(bool, i64)> = None;
    for t in [3i64, 5, -2, 7] {
        let s = seifert_alexander(b, t);
        let (num, den) = burau_alexander(b, t);
        if s.is_zero() || num.is_zero() {
            if s.is_zero() != num.is_zero() {
                return Err(format!("{b}: zero on one side only at t = {t}"));
            }
            continue;
        }
        let u = unit(&(num.clone()), &(den * &s), t).ok_or_else(|| format!("{b}: ratio at t = {t} is not ±tᵏ"))?;
        match seen {
            None => seen = Some(u),
            Some(prev) if prev == u => {}
            Some(prev) => return Err(format!("{b}: unit {u:?} at t = {t}, {prev:?} before")),
        }
    }
    Ok(())
}

#[test]
fn known_polynomials() {
    // Δ(3) for trefoil 1 - t + t² = 7, figure-eight -1 + 3t - t² = -1, 5₁ = 61
    for (w, at3) in [("s1^3", 7i64), ("s1 s2^-1 s1 s2^-1", -1), ("s1^5", 61)] {
        let b = parse_braid(w).unwrap();
        assert_eq!(seifert_alexander(&b, 3).abs(), BigInt::from(at3.abs()), "{w}");
        agree(&b).unwrap();
    }
}

#[test]
fn random_knots_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..150 {
        let b = common::random_knot_braid(&mut rng, 5, 14);
        agree(&b).unwrap();
    }
}

#[test]
fn determinant_is_alexander_at_minus_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..100 {
        let b = common::random_knot_braid(&mut rng, 5, 12);
        let (num, den) = burau_alexander(&b, -1);
        assert_eq!(num.abs() / den.abs(), determinant(&b).unwrap(), "{b}");
    }
}

#[test]
fn torus_knot_signatures() {
    // T(2, 2k+1): -2k. T(3, 4): -6. T(3, 5): -8. T(4, 5) has signature -8.
    for k in 1..6 {
        let b = parse_braid(&format!("s1^{}", 2 * k + 1)).unwrap();
        assert_eq!(signature(&b).unwrap(), -2 * k);
        assert_eq!(signature(&b.mirror()).unwrap(), 2 * k);
    }
    for (w, s) in [("s1 s2 s1 s2 s1 s2 s1 s2", -6), ("s1 s2 s1 s2 s1 s2 s1 s2 s1 s2", -8)] {
        assert_eq!(signature(&parse_braid(w).unwrap()).unwrap(), s, "{w}");
    }
    let t45 = parse_braid(&"s1 s2 s3 ".repeat(5)).unwrap();
    assert_eq!(signature(&t45).unwrap(), -8);
}
