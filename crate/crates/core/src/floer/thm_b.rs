//! The Maslov filtration on the composite complex.
//!
//! `F_p` is spanned by generators of level `≤ p`, the level of `(ρ₁⋆ρ₂)_q`
//! being `μ₁ + μ₂` and that of `ρ₁⋆s`, `s⋆ρ₂` their own grading. `d₁` lowers
//! the level by exactly one. An optional second differential lowers it by two,
//! from a `q = 0` generator to a `q = 1` one.

use super::composite::CompositeFloerData;
use super::d1::build_d1;
use super::data::first_nonzero;
use super::{invariant, FloerError};
use crate::exec::Execution;
use crate::homalg::{spectral_sequence_with, Direction, FilteredComplex, GradedComplex, IntMatrix, SpectralSequence};

/// The filtered composite complex with boundary `d₁ + d₂`.
pub fn thm_b_complex(c: &CompositeFloerData, d2: Option<&IntMatrix>) -> Result<FilteredComplex, FloerError> {
    let d1 = build_d1(c)?;
    let n = c.len();
    let boundary = match d2 {
        None => d1,
        Some(d2) => {
            if d2.rows() != n || d2.cols() != n {
                return Err(FloerError::Plugin {
                    name: invariant::PLUGIN_BIDEGREE,
                    detail: format!("d₂ is {}x{}, expected {n}x{n}", d2.rows(), d2.cols()),
                });
            }
            let g = &c.strata_generators;
            for j in 0..n {
                for i in 0..n {
                    let fits = g[j].q() == 0 && g[i].q() == 1 && g[i].level() == g[j].level() - 2;
                    if !num_traits::Zero::is_zero(&d2[(i, j)]) && !fits {
                        return Err(FloerError::Plugin {
                            name: invariant::PLUGIN_BIDEGREE,
                            detail: format!(
                                "{} (p={}, q={}) -> {} (p={}, q={}) is not a (-2, +1) map",
                                g[j].id,
                                g[j].level(),
                                g[j].q(),
                                g[i].id,
                                g[i].level(),
                                g[i].q()
                            ),
                        });
                    }
                }
            }
            let total = d1.add(d2);
            if let Some((i, j)) = first_nonzero(&(&total * &total)) {
                return Err(FloerError::Plugin {
                    name: invariant::PLUGIN_SQUARE,
                    detail: format!("(d₁ + d₂)² sends {} to a nonzero multiple of {}", g[j].id, g[i].id),
                });
            }
            total
        }
    };
    let ids = c.strata_generators.iter().map(|g| g.id.clone()).collect();
    let complex = GradedComplex::new(ids, c.maslovs(), boundary, 0);
    Ok(FilteredComplex::new(complex, c.levels(), Direction::Increasing, 1))
}

pub fn thm_b_spectral(c: &CompositeFloerData, d2: Option<&IntMatrix>) -> Result<SpectralSequence, FloerError> {
    thm_b_spectral_with(c, d2, Execution::default())
}

/// Pages of the Maslov filtration. Checks that every entry has `q ∈ {0, 1}`,
/// that no differential survives from page 3 on, and that `E³ = E^∞`.
pub fn thm_b_spectral_with(
    c: &CompositeFloerData,
    d2: Option<&IntMatrix>,
    exec: Execution,
) -> Result<SpectralSequence, FloerError> {
    let fc = thm_b_complex(c, d2)?;
    let ss = spectral_sequence_with(&fc, exec)?;
    for page in &ss.pages {
        if let Some(e) = page.entries.iter().find(|e| e.bidegree.1 != 0 && e.bidegree.1 != 1) {
            return Err(FloerError::Structure(format!("E^{} has an entry at q = {}", page.r, e.bidegree.1)));
        }
        if page.r >= 3 && !page.differentials_vanish() {
            return Err(FloerError::Structure(format!("E^{} has a nonzero differential", page.r)));
        }
    }
    let e3 = &ss.pages[3.min(ss.pages.len() - 1)];
    if e3.entries != ss.limit().entries {
        return Err(FloerError::Structure("E³ differs from E^∞".into()));
    }
    Ok(ss)
}
