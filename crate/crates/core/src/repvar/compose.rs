//! Predicted strata of a connected sum `β₁ Σⁿ⁻¹(β₂)`.
//!
//! Strand `n` is shared. A fixed tuple `a` of `β₁` and a fixed tuple `b` of
//! `β₂` glue along it once `b₁` is rotated onto `aₙ`; rotating further about
//! `aₙ` gives the U(1) of gluings. Pairing with the reducible (all meridians
//! equal) gives the isolated classes.

use nalgebra::{Rotation3, Unit};

use super::{cmp_fingerprint, fingerprint_distance, RepPoint, RepStratum, StratumKind, V3};

/// Number of gluing angles sampled on each predicted circle.
const CIRCLE_SAMPLES: usize = 16;

fn rotation_onto(from: &V3, to: &V3) -> Rotation3<f64> {
    Rotation3::rotation_between(from, to).unwrap_or_else(|| {
        // antiparallel: half turn about any perpendicular axis
        let trial = if from.x.abs() < 0.9 { V3::x() } else { V3::y() };
        let axis = Unit::new_normalize(from.cross(&trial));
        Rotation3::from_axis_angle(&axis, std::f64::consts::PI)
    })
}

fn glue(a: &[V3], b: &[V3], theta: f64) -> Vec<V3> {
    let an = a[a.len() - 1];
    let q = Rotation3::from_axis_angle(&Unit::new_normalize(an), theta) * rotation_onto(&b[0], &an);
    a.iter().copied().chain(b[1..].iter().map(|w| (q * w).normalize())).collect()
}

fn witness(vs: Vec<V3>) -> RepPoint {
    RepPoint::new(&vs, 0.0)
}

/// Predicted strata for `K₁ # K₂` on `strands1 + strands2 - 1` strands.
pub fn compose_strata(s1: &[RepStratum], strands1: usize, s2: &[RepStratum], strands2: usize) -> Vec<RepStratum> {
    let mut out = Vec::new();
    for r1 in s1 {
        let samples = r1
            .samples
            .iter()
            .map(|p| {
                let a = p.vecs();
                let an = a[a.len() - 1];
                witness(a.iter().copied().chain(std::iter::repeat_n(an, strands2 - 1)).collect())
            })
            .collect();
        out.push(RepStratum { kind: r1.kind, samples, tangent_dim: r1.tangent_dim, hits: 0 });
    }
    for r2 in s2 {
        let samples = r2
            .samples
            .iter()
            .map(|p| {
                let b = p.vecs();
                witness(std::iter::repeat_n(b[0], strands1).chain(b[1..].iter().copied()).collect())
            })
            .collect();
        out.push(RepStratum { kind: r2.kind, samples, tangent_dim: r2.tangent_dim, hits: 0 });
    }
    for r1 in s1 {
        for r2 in s2 {
            let (a, b) = (r1.samples[0].vecs(), r2.samples[0].vecs());
            let samples = (0..CIRCLE_SAMPLES)
                .map(|k| witness(glue(&a, &b, std::f64::consts::TAU * k as f64 / CIRCLE_SAMPLES as f64)))
                .collect();
            let tangent_dim = r1.tangent_dim + r2.tangent_dim + 1;
            let kind = if tangent_dim == 1 { StratumKind::Circle } else { StratumKind::Unclassified };
            out.push(RepStratum { kind, samples, tangent_dim, hits: 0 });
        }
    }
    out.sort_by(|a, b| cmp_fingerprint(a.key(), b.key()).then(a.kind.cmp(&b.kind)));
    out
}

/// Differences between a predicted and a directly enumerated strata list:
/// count, kind and tangent dimension per kind, and for isolated strata the
/// fingerprints themselves. Empty when they agree.
pub fn diff_strata(predicted: &[RepStratum], direct: &[RepStratum], tol: f64) -> Vec<String> {
    let mut out = Vec::new();
    let profile = |s: &[RepStratum]| {
        let mut v: Vec<(StratumKind, usize)> = s.iter().map(|x| (x.kind, x.tangent_dim)).collect();
        v.sort();
        v
    };
    let (p, d) = (profile(predicted), profile(direct));
    if p != d {
        out.push(format!("kind/dimension profile differs: predicted {p:?}, found {d:?}"));
    }
    for s in predicted.iter().filter(|s| s.kind == StratumKind::Isolated) {
        let fp = &s.samples[0].fingerprint;
        let found = direct
            .iter()
            .filter(|t| t.kind == StratumKind::Isolated)
            .any(|t| t.samples.iter().any(|q| fingerprint_distance(&q.fingerprint, fp) < tol));
        if !found {
            out.push(format!("predicted isolated class {fp:?} not found"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{connected_sum, parse_braid};
    use crate::repvar::residual;

    fn isolated(vs: Vec<V3>) -> RepStratum {
        RepStratum { kind: StratumKind::Isolated, samples: vec![RepPoint::new(&vs, 0.0)], tangent_dim: 0, hits: 0 }
    }

    /// The trefoil class of `σ₁³`: unit vectors at 120 degrees.
    fn trefoil_class() -> RepStratum {
        let t = 2.0 * std::f64::consts::PI / 3.0;
        isolated(vec![V3::z(), V3::new(t.sin(), 0.0, t.cos())])
    }

    #[test]
    fn counting() {
        let t = trefoil_class();
        let c = compose_strata(std::slice::from_ref(&t), 2, std::slice::from_ref(&t), 2);
        assert_eq!(c.iter().filter(|s| s.kind == StratumKind::Isolated).count(), 2);
        let circles: Vec<_> = c.iter().filter(|s| s.kind == StratumKind::Circle).collect();
        assert_eq!(circles.len(), 1);
        assert_eq!(circles[0].tangent_dim, 1);
        assert!(compose_strata(&[], 2, &[], 2).is_empty());
        let one = compose_strata(&[t], 2, &[], 2);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].kind, StratumKind::Isolated);
    }

    #[test]
    fn witnesses_are_fixed_points() {
        let t = trefoil_class();
        let b = parse_braid("s1^3").unwrap();
        assert!(residual(&b, &t.samples[0].vecs()) < 1e-12);
        let sum = connected_sum(&b, &b).unwrap();
        for s in compose_strata(std::slice::from_ref(&t), 2, std::slice::from_ref(&t), 2) {
            for p in &s.samples {
                assert!(residual(&sum, &p.vecs()) < 1e-12, "{:?}", s.kind);
            }
            if s.kind == StratumKind::Circle {
                let distinct = s.samples.windows(2).filter(|w| fingerprint_distance(&w[0].fingerprint, &w[1].fingerprint) > 1e-5).count();
                assert!(distinct >= 10);
            }
        }
    }
}
