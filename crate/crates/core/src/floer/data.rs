//! Per-knot Floer chain data and its validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{rational_text, Q};
use crate::braid::BraidWord;
use crate::homalg::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloerGenerator {
    pub id: String,
    #[serde(with = "rational_text")]
    pub action: Q,
    pub maslov_lift: i64,
}

/// A boundary component between different lift windows: `source` to the
/// deck translate of `target` whose grading is `maslov_lift(source) - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryTerm {
    pub source: String,
    pub target: String,
    pub coefficient: i64,
}

/// Generators, actions, gradings and boundary counts of one knot, with the
/// two maps to and from the reducible `s_K` (graded at 0).
///
/// `boundary_Z[i][j]` is the coefficient of generator `i` in `∂` of generator `j`.
/// `special_d[j]` is the coefficient of `s_K` in `d_β` of generator `j`;
/// `special_delta[i]` the coefficient of generator `i` in `δ_β(s_K)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotFloerData {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub braid: Option<BraidWord>,
    #[serde(rename = "chern_N")]
    pub chern_n: u32,
    #[serde(with = "rational_text")]
    pub alpha: Q,
    pub generators: Vec<FloerGenerator>,
    #[serde(rename = "boundary_Z")]
    pub boundary: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub higher_boundary: Vec<BoundaryTerm>,
    #[serde(default)]
    pub special_d: Vec<i64>,
    #[serde(default)]
    pub special_delta: Vec<i64>,
}

/// A violated package invariant, by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataViolation {
    pub name: &'static str,
    pub detail: String,
}

impl DataViolation {
    fn new(name: &'static str, detail: impl Into<String>) -> Self {
        DataViolation { name, detail: detail.into() }
    }
}

impl fmt::Display for DataViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated: {}", self.name, self.detail)
    }
}

impl std::error::Error for DataViolation {}

pub const SHAPE: &str = "shape";
pub const MONOTONICITY: &str = "monotonicity-constant";
pub const ACTION_WINDOW: &str = "action-window";
pub const BOUNDARY_DEGREE: &str = "boundary-degree";
pub const BOUNDARY_SQUARE: &str = "boundary-square";
pub const CROSS_WINDOW_DEGREE: &str = "cross-window-degree";
pub const TOTAL_BOUNDARY_SQUARE: &str = "total-boundary-square";
pub const SPECIAL_MAP_SUPPORT: &str = "special-map-support";
pub const SPECIAL_MAP_RELATION: &str = "special-map-relation";

impl KnotFloerData {
    /// Package with no generators.
    pub fn empty(name: &str, braid: Option<BraidWord>, chern_n: u32, alpha: Q) -> Self {
        KnotFloerData {
            name: name.into(),
            braid,
            chern_n,
            alpha,
            generators: Vec::new(),
            boundary: Vec::new(),
            higher_boundary: Vec::new(),
            special_d: Vec::new(),
            special_delta: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Action period `2αN`.
    pub fn action_period(&self) -> Q {
        self.alpha * Q::from(2 * self.chern_n as i64)
    }

    /// Grading period `2N`.
    pub fn grading_period(&self) -> i64 {
        2 * self.chern_n as i64
    }

    pub fn lifts(&self) -> Vec<i64> {
        self.generators.iter().map(|g| g.maslov_lift).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.id == id)
    }

    pub fn boundary_matrix(&self) -> IntMatrix {
        let n = self.len();
        let flat: Vec<i64> = self.boundary.iter().flatten().copied().collect();
        IntMatrix::from_i64(n, n, &flat)
    }

    /// Missing special maps become zero vectors; out-of-window actions are moved
    /// into `[0, 2αN)` by deck translation, which shifts the lift by `2N` per step.
    pub fn normalize(&mut self) {
        let n = self.len();
        for v in [&mut self.special_d, &mut self.special_delta] {
            if v.is_empty() {
                *v = vec![0; n];
            }
        }
        if n > 0 && self.boundary.is_empty() {
            self.boundary = vec![vec![0; n]; n];
        }
        let period = self.action_period();
        if period.is_positive() {
            let step = self.grading_period();
            for g in &mut self.generators {
                let deck = (g.action / period).floor().to_integer();
                g.action -= period * Q::from(deck);
                g.maslov_lift -= step * deck;
            }
        }
    }

    /// Checks every package invariant, reporting the first failure.
    pub fn validate(&self) -> Result<(), DataViolation> {
        self.check_shape()?;
        let n = self.len();
        if !self.alpha.is_positive() {
            return Err(DataViolation::new(MONOTONICITY, format!("alpha = {} must be positive", self.alpha)));
        }
        let period = self.action_period();
        for g in &self.generators {
            if g.action.is_negative() || g.action >= period {
                return Err(DataViolation::new(
                    ACTION_WINDOW,
                    format!("action {} of {} is outside [0, {period})", g.action, g.id),
                ));
            }
        }
        let lift = self.lifts();
        for (i, row) in self.boundary.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c != 0 && lift[i] != lift[j] - 1 {
                    return Err(DataViolation::new(
                        BOUNDARY_DEGREE,
                        format!("{} -> {} changes the grading by {}", self.generators[j].id, self.generators[i].id, lift[i] - lift[j]),
                    ));
                }
            }
        }
        let dz = self.boundary_matrix();
        if let Some((i, j)) = first_nonzero(&(&dz * &dz)) {
            return Err(DataViolation::new(
                BOUNDARY_SQUARE,
                format!("∂∂ sends {} to a nonzero multiple of {}", self.generators[j].id, self.generators[i].id),
            ));
        }
        for t in &self.higher_boundary {
            let (s, d) = (self.index_of(&t.source).unwrap(), self.index_of(&t.target).unwrap());
            let shift = lift[d] - lift[s] + 1;
            if shift <= 0 || shift % self.grading_period() != 0 {
                return Err(DataViolation::new(
                    CROSS_WINDOW_DEGREE,
                    format!("{} -> {}: lift change {} is not -1 + 2N·k with k >= 1", t.source, t.target, lift[d] - lift[s]),
                ));
            }
        }
        let total = self.total_boundary();
        if let Some((i, j)) = first_nonzero(&(&total * &total)) {
            return Err(DataViolation::new(
                TOTAL_BOUNDARY_SQUARE,
                format!("the full boundary squares to a nonzero map {} -> {}", self.generators[j].id, self.generators[i].id),
            ));
        }
        for j in 0..n {
            if self.special_d[j] != 0 && lift[j] != 1 {
                return Err(DataViolation::new(SPECIAL_MAP_SUPPORT, format!("d_β is nonzero on {} at grading {}", self.generators[j].id, lift[j])));
            }
            if self.special_delta[j] != 0 && lift[j] != -1 {
                return Err(DataViolation::new(SPECIAL_MAP_SUPPORT, format!("δ_β hits {} at grading {}", self.generators[j].id, lift[j])));
            }
        }
        for j in 0..n {
            let dd: i64 = (0..n).map(|i| self.special_d[i] * self.boundary[i][j]).sum();
            if dd != 0 {
                return Err(DataViolation::new(SPECIAL_MAP_RELATION, format!("d_β ∘ ∂ is nonzero on {}", self.generators[j].id)));
            }
            let bd: i64 = (0..n).map(|k| self.boundary[j][k] * self.special_delta[k]).sum();
            if bd != 0 {
                return Err(DataViolation::new(SPECIAL_MAP_RELATION, format!("∂ ∘ δ_β has a nonzero {} component", self.generators[j].id)));
            }
        }
        Ok(())
    }

    fn check_shape(&self) -> Result<(), DataViolation> {
        let n = self.len();
        if self.chern_n == 0 {
            return Err(DataViolation::new(SHAPE, "chern_N must be positive"));
        }
        let mut seen = BTreeSet::new();
        for g in &self.generators {
            if g.id.is_empty() || !seen.insert(g.id.as_str()) {
                return Err(DataViolation::new(SHAPE, format!("generator id {:?} is empty or repeated", g.id)));
            }
        }
        if self.boundary.len() != n || self.boundary.iter().any(|r| r.len() != n) {
            return Err(DataViolation::new(SHAPE, format!("boundary_Z must be {n}x{n}")));
        }
        if self.special_d.len() != n || self.special_delta.len() != n {
            return Err(DataViolation::new(SHAPE, format!("special_d and special_delta must have {n} entries")));
        }
        for t in &self.higher_boundary {
            for id in [&t.source, &t.target] {
                if self.index_of(id).is_none() {
                    return Err(DataViolation::new(SHAPE, format!("higher_boundary names unknown generator {id:?}")));
                }
            }
        }
        Ok(())
    }

    /// `boundary_Z` plus the cross-window terms.
    pub fn total_boundary(&self) -> IntMatrix {
        let mut m = self.boundary_matrix();
        for t in &self.higher_boundary {
            let (s, d) = (self.index_of(&t.source).unwrap(), self.index_of(&t.target).unwrap());
            m[(d, s)] += t.coefficient;
        }
        m
    }

    /// Generator counts per lift.
    pub fn lift_counts(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for g in &self.generators {
            *out.entry(g.maslov_lift).or_insert(0) += 1;
        }
        out
    }
}

pub(crate) fn first_nonzero(m: &IntMatrix) -> Option<(usize, usize)> {
    (0..m.cols()).flat_map(|j| (0..m.rows()).map(move |i| (i, j))).find(|&(i, j)| !m[(i, j)].is_zero())
}
