//! The first differential of the composite complex.
//!
//! With `ε = (-1)^{μ(ρ₁)}` on every map acting on the right factor:
//!
//! ```text
//! d₁(ρ₁⋆s)      = ∂ρ₁⋆s + ε·(ρ₁⋆δ₂s)₀
//! d₁(s⋆ρ₂)      = s⋆∂ρ₂ + (δ₁s⋆ρ₂)₀
//! d₁(ρ₁⋆ρ₂)₀    = (∂ρ₁⋆ρ₂)₀ + ε·(ρ₁⋆∂ρ₂)₀ + d₁(ρ₁)·s⋆ρ₂ + ε·d₂(ρ₂)·ρ₁⋆s
//! d₁(ρ₁⋆ρ₂)₁    = (∂ρ₁⋆ρ₂)₁ + ε·(ρ₁⋆∂ρ₂)₁
//! ```
//!
//! The circle's own cell differential is zero.
//!
//! Squaring this map leaves, besides terms that cancel by `d∂ = 0` and
//! `∂δ = 0`, the compositions through the reducible: `δⱼ∘dⱼ` on either factor
//! and `d₁ ⊗ δ₂`, `d₂ ⊗ δ₁` across factors. [`predicted_square`] writes these
//! out; [`build_d1`] rejects any package pair for which they do not vanish.

use super::composite::CompositeFloerData;
use super::data::first_nonzero;
use super::{invariant, FloerError};
use crate::homalg::IntMatrix;

fn sign(maslov: i64) -> i64 {
    if maslov.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `d₁` as assembled from the six constituent maps, without checks.
/// Column `j` is `d₁` of composite generator `j`.
pub fn assemble_d1(c: &CompositeFloerData) -> IntMatrix {
    let (k1, k2) = (&c.left, &c.right);
    let (n1, n2) = (k1.len(), k2.len());
    let mu1 = k1.lifts();
    let mut d = IntMatrix::zeros(c.len(), c.len());
    for i in 0..n1 {
        let col = c.left_star(i);
        let eps = sign(mu1[i]);
        for i2 in 0..n1 {
            d[(c.left_star(i2), col)] += k1.boundary[i2][i];
        }
        for h in 0..n2 {
            d[(c.circle(i, h, 0), col)] += eps * k2.special_delta[h];
        }
    }
    for j in 0..n2 {
        let col = c.star_right(j);
        for j2 in 0..n2 {
            d[(c.star_right(j2), col)] += k2.boundary[j2][j];
        }
        for h in 0..n1 {
            d[(c.circle(h, j, 0), col)] += k1.special_delta[h];
        }
    }
    for i in 0..n1 {
        let eps = sign(mu1[i]);
        for j in 0..n2 {
            for q in 0..2 {
                let col = c.circle(i, j, q);
                for i2 in 0..n1 {
                    d[(c.circle(i2, j, q), col)] += k1.boundary[i2][i];
                }
                for j2 in 0..n2 {
                    d[(c.circle(i, j2, q), col)] += eps * k2.boundary[j2][j];
                }
            }
            let col = c.circle(i, j, 0);
            d[(c.star_right(j), col)] += k1.special_d[i];
            d[(c.left_star(i), col)] += eps * k2.special_d[j];
        }
    }
    d
}

/// Closed form of `d₁∘d₁` for packages satisfying the single-knot relations:
///
/// ```text
/// (ρ₁⋆ρ₂)₀ ↦ d₁(ρ₁)·(δ₁s⋆ρ₂)₀ + d₂(ρ₂)·(ρ₁⋆δ₂s)₀
/// ρ₁⋆s     ↦ -d₁(ρ₁)·s⋆δ₂s
/// s⋆ρ₂     ↦ -d₂(ρ₂)·δ₁s⋆s
/// ```
pub fn predicted_square(c: &CompositeFloerData) -> IntMatrix {
    let (k1, k2) = (&c.left, &c.right);
    let (n1, n2) = (k1.len(), k2.len());
    let mut m = IntMatrix::zeros(c.len(), c.len());
    for i in 0..n1 {
        for j in 0..n2 {
            let col = c.circle(i, j, 0);
            for h in 0..n1 {
                m[(c.circle(h, j, 0), col)] += k1.special_d[i] * k1.special_delta[h];
            }
            for h in 0..n2 {
                m[(c.circle(i, h, 0), col)] += k2.special_d[j] * k2.special_delta[h];
            }
        }
        for h in 0..n2 {
            m[(c.star_right(h), c.left_star(i))] -= k1.special_d[i] * k2.special_delta[h];
        }
    }
    for j in 0..n2 {
        for h in 0..n1 {
            m[(c.left_star(h), c.star_right(j))] -= k2.special_d[j] * k1.special_delta[h];
        }
    }
    m
}

/// `d₁∘d₁` of the assembled map.
pub fn d1_square(c: &CompositeFloerData) -> IntMatrix {
    let d = assemble_d1(c);
    &d * &d
}

fn offending(c: &CompositeFloerData, m: &IntMatrix) -> Vec<(String, String, i64)> {
    let ids = |k: usize| c.strata_generators[k].id.clone();
    let mut out = Vec::new();
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            let v = &m[(i, j)];
            if !num_traits::Zero::is_zero(v) {
                out.push((ids(j), ids(i), i64::try_from(v).unwrap_or(i64::MAX)));
            }
        }
    }
    out
}

/// `d₁`, checked to have degree `-1` and square zero.
pub fn build_d1(c: &CompositeFloerData) -> Result<IntMatrix, FloerError> {
    c.left.validate()?;
    c.right.validate()?;
    let d = assemble_d1(c);
    let mu = c.maslovs();
    let mut wrong = Vec::new();
    for j in 0..d.cols() {
        for i in 0..d.rows() {
            if !num_traits::Zero::is_zero(&d[(i, j)]) && mu[i] != mu[j] - 1 {
                wrong.push((c.strata_generators[j].id.clone(), c.strata_generators[i].id.clone(), 0));
            }
        }
    }
    if !wrong.is_empty() {
        return Err(FloerError::Composite { name: invariant::COMPOSITE_DEGREE, terms: wrong });
    }
    let sq = &d * &d;
    if first_nonzero(&sq).is_some() {
        return Err(FloerError::Composite { name: invariant::COMPOSITE_BOUNDARY_SQUARE, terms: offending(c, &sq) });
    }
    Ok(d)
}
