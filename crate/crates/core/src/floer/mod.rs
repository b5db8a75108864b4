//! Floer-type chain data for knots and their connected sums.
//!
//! Boundary counts, the maps to and from the reducible class, and gradings are
//! input data ([`KnotFloerData`]). From them this module builds the lifted
//! ℤ-graded window complexes and the lift filtration of a single knot, the
//! composite complex of a connected sum with its first differential, the
//! filtration by Maslov index on that complex, and the Euler characteristic
//! and Poincaré–Laurent identities tying the pages together.

mod composite;
mod d1;
mod data;
mod identities;
mod laurent;
mod lift;
pub mod packages;
pub mod random;
mod thm_b;

use num_rational::Ratio;
use thiserror::Error;

use crate::homalg::{SpectralError, Violation};

pub use composite::{compose, CompositeFloerData, CompositeGenerator, Origin};
pub use d1::{assemble_d1, build_d1, d1_square, predicted_square};
pub use data::{BoundaryTerm, DataViolation, FloerGenerator, KnotFloerData};
pub use identities::{check_composite, check_knot, IdentityCheck, IdentityReport, Status};
pub use laurent::{euler, laurent, recursion_check, LaurentPoly};
pub use lift::{lift_window, thm_a_complex, thm_a_spectral, thm_a_spectral_with, window_gradings, window_steps};
pub use thm_b::{thm_b_complex, thm_b_spectral, thm_b_spectral_with};

pub type Q = Ratio<i64>;

pub mod invariant {
    pub use super::data::{
        ACTION_WINDOW, BOUNDARY_DEGREE, BOUNDARY_SQUARE, CROSS_WINDOW_DEGREE, MONOTONICITY, SHAPE, SPECIAL_MAP_RELATION,
        SPECIAL_MAP_SUPPORT, TOTAL_BOUNDARY_SQUARE,
    };
    pub const COMPOSITE_BOUNDARY_SQUARE: &str = "composite-boundary-square";
    pub const COMPOSITE_DEGREE: &str = "composite-degree";
    pub const PLUGIN_BIDEGREE: &str = "plugin-bidegree";
    pub const PLUGIN_SQUARE: &str = "plugin-square";
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FloerError {
    #[error(transparent)]
    Data(#[from] DataViolation),
    #[error("window r = {r} meets the action of {generator}")]
    ActionCollision { r: String, generator: String },
    #[error("{0}")]
    Complex(#[from] Violation),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    /// A composite map failed a named invariant; `terms` lists offending
    /// `(source, target, coefficient)` entries.
    #[error("{name} violated: {}", fmt_terms(.terms))]
    Composite { name: &'static str, terms: Vec<(String, String, i64)> },
    #[error("{name} violated: {detail}")]
    Plugin { name: &'static str, detail: String },
    #[error("page structure: {0}")]
    Structure(String),
}

impl FloerError {
    /// Name of the violated invariant, when the error is one.
    pub fn invariant(&self) -> Option<&'static str> {
        match self {
            FloerError::Data(v) => Some(v.name),
            FloerError::Complex(v) => Some(v.name()),
            FloerError::Spectral(SpectralError::Invalid(v)) => Some(v.name()),
            FloerError::Composite { name, .. } | FloerError::Plugin { name, .. } => Some(name),
            _ => None,
        }
    }
}

fn fmt_terms(terms: &[(String, String, i64)]) -> String {
    let shown: Vec<String> = terms.iter().take(4).map(|(s, t, c)| format!("{s} -> {c}·{t}")).collect();
    let more = if terms.len() > 4 { format!(" (+{} more)", terms.len() - 4) } else { String::new() };
    format!("{}{more}", shown.join(", "))
}

/// Rationals as `"p/q"` strings.
pub mod rational_text {
    use super::Q;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(q)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let text = String::deserialize(d)?;
        text.trim().parse().map_err(|_| serde::de::Error::custom(format!("not a rational: {text:?}")))
    }
}
