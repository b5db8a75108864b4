//! Traceless SU(2) representations of a knot group as fixed points of the
//! braid action on `(S²)ⁿ`.
//!
//! A traceless element of SU(2) is a unit pure quaternion, stored here as a unit
//! 3-vector. The meridian images at the top of the braid are `v₁..vₙ`; a
//! representation of the closure is a tuple fixed by the braid action.

mod compose;
mod solver;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::{BraidError, BraidWord};

pub use compose::{compose_strata, diff_strata};
pub use solver::{find_strata, SolverConfig, StrataReport};

pub type V3 = Vector3<f64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error("expected {expected} vectors, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("determinant {0} is even; knot determinants are odd")]
    EvenDeterminant(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<V3> for UnitVec3 {
    fn from(v: V3) -> Self {
        UnitVec3 { x: v.x, y: v.y, z: v.z }
    }
}

impl From<UnitVec3> for V3 {
    fn from(u: UnitVec3) -> Self {
        V3::new(u.x, u.y, u.z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepPoint {
    pub vectors: Vec<UnitVec3>,
    pub residual: f64,
    pub fingerprint: Vec<f64>,
}

impl RepPoint {
    pub fn new(vs: &[V3], residual: f64) -> Self {
        RepPoint { vectors: vs.iter().map(|&v| v.into()).collect(), residual, fingerprint: fingerprint(vs) }
    }

    pub fn vecs(&self) -> Vec<V3> {
        self.vectors.iter().map(|&u| u.into()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StratumKind {
    Isolated,
    Circle,
    Unclassified,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepStratum {
    pub kind: StratumKind,
    pub samples: Vec<RepPoint>,
    pub tangent_dim: usize,
    /// Restarts that landed in this stratum (predicted strata report 0).
    #[serde(default)]
    pub hits: usize,
}

impl RepStratum {
    /// Smallest sample fingerprint, used for ordering.
    pub fn key(&self) -> &[f64] {
        self.samples
            .iter()
            .map(|p| p.fingerprint.as_slice())
            .min_by(|a, b| cmp_fingerprint(a, b))
            .unwrap_or(&[])
    }
}

pub(crate) fn cmp_fingerprint(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Max-norm distance between two fingerprints.
pub fn fingerprint_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Rotation by π about the axis `a`: `2(a·w)a - w` for unit `a`.
/// Dividing by `|a|²` keeps rounding in `|a|` from compounding over long words.
pub fn half_turn(a: &V3, w: &V3) -> V3 {
    2.0 * a.dot(w) / a.norm_squared() * a - w
}

/// Action of one letter on `v`, in place.
pub(crate) fn apply_letter(e: i32, v: &mut [V3]) {
    let i = e.unsigned_abs() as usize - 1;
    let (a, b) = (v[i], v[i + 1]);
    if e > 0 {
        v[i] = half_turn(&a, &b);
        v[i + 1] = a;
    } else {
        v[i] = b;
        v[i + 1] = half_turn(&b, &a);
    }
}

/// Same as [`apply_letter`], also pushing tangent vectors `dv[dir][strand]` forward.
pub(crate) fn apply_letter_tangent(e: i32, v: &mut [V3], dv: &mut [Vec<V3>]) {
    let i = e.unsigned_abs() as usize - 1;
    let (a, b) = (v[i], v[i + 1]);
    // d(R_a w) with s = |a|²: 2(da·w + a·dw)a/s - 4(a·w)(a·da)a/s² + 2(a·w)da/s - dw
    let d_half = |a: &V3, w: &V3, da: &V3, dw: &V3| {
        let s = a.norm_squared();
        let aw = a.dot(w);
        (2.0 * (da.dot(w) + a.dot(dw)) / s - 4.0 * aw * a.dot(da) / (s * s)) * a + 2.0 * aw / s * da - dw
    };
    for d in dv.iter_mut() {
        let (da, db) = (d[i], d[i + 1]);
        if e > 0 {
            d[i] = d_half(&a, &b, &da, &db);
            d[i + 1] = da;
        } else {
            d[i] = db;
            d[i + 1] = d_half(&b, &a, &db, &da);
        }
    }
    apply_letter(e, v);
}

/// Image of the meridian tuple under the braid, letters applied left to right.
pub fn braid_action(b: &BraidWord, v: &[V3]) -> Result<Vec<V3>, RepError> {
    let n = b.strands() as usize;
    if v.len() != n {
        return Err(RepError::LengthMismatch { expected: n, got: v.len() });
    }
    let mut out = v.to_vec();
    for &e in b.letters() {
        apply_letter(e, &mut out);
    }
    Ok(out)
}

/// `‖action(v) - v‖₂`.
pub fn residual(b: &BraidWord, v: &[V3]) -> f64 {
    let w = braid_action(b, v).expect("length checked by caller");
    w.iter().zip(v).map(|(x, y)| (x - y).norm_squared()).sum::<f64>().sqrt()
}

fn round6(x: f64) -> f64 {
    let r = (x * 1e6).round() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Conjugation-invariant fingerprint: all `vᵢ·vⱼ` for `i < j`, then all
/// `det(vᵢ, vⱼ, vₖ)` for `i < j < k`, in lexicographic index order, rounded
/// to 6 decimals.
pub fn fingerprint(v: &[V3]) -> Vec<f64> {
    let n = v.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(round6(v[i].dot(&v[j])));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push(round6(v[i].dot(&v[j].cross(&v[k]))));
            }
        }
    }
    out
}

/// True when every pair of vectors is parallel within `tol` (abelian image).
pub fn is_reducible(v: &[V3], tol: f64) -> bool {
    v.iter().all(|a| v.iter().all(|b| a.cross(b).norm() < tol))
}

/// Rotates so that `v₁ = e₃` and the first vector not parallel to `v₁` lies
/// in the xz-plane with positive x.
pub fn gauge_fix(v: &[V3]) -> Vec<V3> {
    let Some(first) = v.first() else { return Vec::new() };
    let e3 = first.normalize();
    let other = v.iter().map(|w| w - w.dot(&e3) * e3).find(|w| w.norm() > 1e-6);
    let e1 = match other {
        Some(w) => w.normalize(),
        None => {
            let trial = if e3.x.abs() < 0.9 { V3::x() } else { V3::y() };
            (trial - trial.dot(&e3) * e3).normalize()
        }
    };
    let e2 = e3.cross(&e1);
    let r = Matrix3::from_rows(&[e1.transpose(), e2.transpose(), e3.transpose()]);
    v.iter().map(|w| (r * w).normalize()).collect()
}

/// Number of binary dihedral traceless classes of a knot with determinant `det`.
pub fn dihedral_count_check(det: u64) -> Result<u64, RepError> {
    if det.is_multiple_of(2) {
        return Err(RepError::EvenDeterminant(det));
    }
    Ok((det - 1) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;
    use nalgebra::Quaternion;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_unit<R: Rng>(rng: &mut R) -> V3 {
        let z: f64 = rng.random_range(-1.0..1.0);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let r = (1.0 - z * z).sqrt();
        V3::new(r * phi.cos(), r * phi.sin(), z)
    }

    fn quat(v: &V3) -> Quaternion<f64> {
        Quaternion::new(0.0, v.x, v.y, v.z)
    }

    fn product(v: &[V3]) -> Quaternion<f64> {
        v.iter().fold(Quaternion::new(1.0, 0.0, 0.0, 0.0), |acc, x| acc * quat(x))
    }

    #[test]
    fn identity_and_equal_axes() {
        let e3 = V3::z();
        let b = parse_braid("@2").unwrap();
        assert_eq!(braid_action(&b, &[e3, V3::x()]).unwrap(), vec![e3, V3::x()]);
        let s1 = parse_braid("s1").unwrap();
        assert_eq!(braid_action(&s1, &[e3, e3]).unwrap(), vec![e3, e3]);
        assert!(matches!(braid_action(&s1, &[e3]), Err(RepError::LengthMismatch { expected: 2, got: 1 })));
    }

    #[test]
    fn half_turn_is_quaternion_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let (a, w) = (random_unit(&mut rng), random_unit(&mut rng));
            let q = quat(&a) * quat(&w) * quat(&a).conjugate();
            let r = half_turn(&a, &w);
            assert!((V3::new(q.i, q.j, q.k) - r).norm() < 1e-12);
        }
    }

    #[test]
    fn sigma_squared_formula_and_product_conservation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b = parse_braid("s1^2").unwrap();
        for _ in 0..100 {
            let (a, c) = (random_unit(&mut rng), random_unit(&mut rng));
            let out = braid_action(&b, &[a, c]).unwrap();
            let ra = half_turn(&a, &c);
            assert!((out[0] - half_turn(&ra, &a)).norm() < 1e-12);
            assert!((out[1] - ra).norm() < 1e-12);
            for v in &out {
                assert!((v.norm() - 1.0).abs() < 1e-12);
            }
            let (p, q) = (product(&[a, c]), product(&out));
            assert!((p - q).norm() < 1e-12);
        }
    }

    #[test]
    fn tangent_propagation_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = parse_braid("s1 s2^-1 s1^2 s3^-1 s2").unwrap();
        let v: Vec<V3> = (0..4).map(|_| random_unit(&mut rng)).collect();
        let d: Vec<V3> = (0..4).map(|_| random_unit(&mut rng)).collect();
        let mut vv = v.clone();
        let mut dv = vec![d.clone()];
        for &e in b.letters() {
            apply_letter_tangent(e, &mut vv, &mut dv);
        }
        let h = 1e-6;
        let plus: Vec<V3> = v.iter().zip(&d).map(|(x, y)| x + h * y).collect();
        let minus: Vec<V3> = v.iter().zip(&d).map(|(x, y)| x - h * y).collect();
        // the action extends polynomially off the sphere, so plain differences apply
        let (fp, fm) = (braid_action(&b, &plus).unwrap(), braid_action(&b, &minus).unwrap());
        for k in 0..4 {
            let fd = (fp[k] - fm[k]) / (2.0 * h);
            assert!((fd - dv[0][k]).norm() < 1e-6, "{fd} vs {}", dv[0][k]);
        }
    }

    #[test]
    fn fingerprint_is_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let v: Vec<V3> = (0..4).map(|_| random_unit(&mut rng)).collect();
        let rot = nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(random_unit(&mut rng)), 1.1);
        let w: Vec<V3> = v.iter().map(|x| rot * x).collect();
        assert!(fingerprint_distance(&fingerprint(&v), &fingerprint(&w)) < 2e-6);
        assert_eq!(fingerprint(&v).len(), 6 + 4);
        let g = gauge_fix(&v);
        assert!((g[0] - V3::z()).norm() < 1e-12);
        assert!(g[1].y.abs() < 1e-12 && g[1].x > 0.0);
        assert!(fingerprint_distance(&fingerprint(&v), &fingerprint(&g)) < 2e-6);
    }

    #[test]
    fn reducible_detection() {
        let e = V3::z();
        assert!(is_reducible(&[e, -e, e], 1e-8));
        assert!(!is_reducible(&[e, V3::x()], 1e-8));
    }

    #[test]
    fn dihedral_counts() {
        assert_eq!(dihedral_count_check(3).unwrap(), 1);
        assert_eq!(dihedral_count_check(1).unwrap(), 0);
        assert_eq!(dihedral_count_check(5).unwrap(), 2);
        assert!(dihedral_count_check(4).is_err());
    }
}
