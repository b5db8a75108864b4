use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::matrix::{smith, IntMatrix};

/// A free chain complex over the integers with one generator per basis element.
///
/// `boundary` is square; column `j` holds the coefficients of `∂(generator j)`.
/// Degrees are integers; with `period > 0` they are read modulo `period` and
/// the boundary lowers the degree class by one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradedComplex {
    pub ids: Vec<String>,
    pub degrees: Vec<i64>,
    pub boundary: IntMatrix,
    #[serde(default)]
    pub period: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// A graded complex with an integer filtration level per generator.
///
/// Increasing: `F_p` is spanned by generators of level `≤ p` and `∂` preserves it.
/// Decreasing: `F_n` is spanned by generators of level `≥ n` and `∂F_n ⊂ F_{n-1}`;
/// levels sit on the progression `level ≡ degree (mod step)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilteredComplex {
    pub complex: GradedComplex,
    pub levels: Vec<i64>,
    pub direction: Direction,
    pub step: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    Shape { detail: String },
    Degree { source: String, target: String },
    BoundarySquare { source: String, target: String },
    Filtration { source: String, target: String },
    Progression { generator: String },
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::Shape { .. } => "shape",
            Violation::Degree { .. } => "degree",
            Violation::BoundarySquare { .. } => "boundary-square",
            Violation::Filtration { .. } => "filtration",
            Violation::Progression { .. } => "progression",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { detail } => write!(f, "shape: {detail}"),
            Violation::Degree { source, target } => {
                write!(f, "degree: boundary of {source} hits {target} outside degree - 1")
            }
            Violation::BoundarySquare { source, target } => {
                write!(f, "boundary-square: coefficient of {target} in the double boundary of {source} is nonzero")
            }
            Violation::Filtration { source, target } => {
                write!(f, "filtration: boundary of {source} hits {target} outside the allowed levels")
            }
            Violation::Progression { generator } => {
                write!(f, "progression: level of {generator} is off the filtration progression")
            }
        }
    }
}

impl std::error::Error for Violation {}

/// Free rank and elementary divisors `> 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupShape {
    pub free_rank: usize,
    #[serde(with = "super::json_int::vec")]
    pub torsion: Vec<BigInt>,
}

impl GroupShape {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl GradedComplex {
    pub fn new(ids: Vec<String>, degrees: Vec<i64>, boundary: IntMatrix, period: u32) -> Self {
        GradedComplex { ids, degrees, boundary, period }
    }

    /// Complex with generated ids `g0, g1, ...`.
    pub fn anonymous(degrees: Vec<i64>, boundary: IntMatrix) -> Self {
        let ids = (0..degrees.len()).map(|i| format!("g{i}")).collect();
        GradedComplex { ids, degrees, boundary, period: 0 }
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Degree reduced to its class: itself when `period == 0`, else in `0..period`.
    pub fn class_of(&self, degree: i64) -> i64 {
        if self.period == 0 {
            degree
        } else {
            degree.rem_euclid(self.period as i64)
        }
    }

    pub fn class(&self, g: usize) -> i64 {
        self.class_of(self.degrees[g])
    }

    fn shape_violation(&self) -> Option<Violation> {
        let n = self.len();
        if self.ids.len() != n {
            return Some(Violation::Shape { detail: format!("{} ids for {n} degrees", self.ids.len()) });
        }
        if self.boundary.rows() != n || self.boundary.cols() != n {
            return Some(Violation::Shape {
                detail: format!("boundary is {}x{}, expected {n}x{n}", self.boundary.rows(), self.boundary.cols()),
            });
        }
        None
    }

    /// Checks shape, degree `-1` and `∂∘∂ = 0`.
    pub fn validate(&self) -> Result<(), Violation> {
        if let Some(v) = self.shape_violation() {
            return Err(v);
        }
        let n = self.len();
        for j in 0..n {
            for i in 0..n {
                if !self.boundary[(i, j)].is_zero() && self.class(i) != self.class_of(self.degrees[j] - 1) {
                    return Err(Violation::Degree { source: self.ids[j].clone(), target: self.ids[i].clone() });
                }
            }
        }
        let sq = &self.boundary * &self.boundary;
        for j in 0..n {
            for i in 0..n {
                if !sq[(i, j)].is_zero() {
                    return Err(Violation::BoundarySquare { source: self.ids[j].clone(), target: self.ids[i].clone() });
                }
            }
        }
        Ok(())
    }

    /// Generators grouped by degree class, in index order.
    pub fn classes(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut out: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for g in 0..self.len() {
            out.entry(self.class(g)).or_default().push(g);
        }
        out
    }

    /// Homology per degree class. Classes with no generators are omitted.
    pub fn homology(&self) -> BTreeMap<i64, GroupShape> {
        let classes = self.classes();
        let empty = Vec::new();
        let mut out = BTreeMap::new();
        for (&d, gens) in &classes {
            let below = classes.get(&self.class_of(d - 1)).unwrap_or(&empty);
            let above = classes.get(&self.class_of(d + 1)).unwrap_or(&empty);
            let out_rank = smith(&self.boundary.select(below, gens)).rank();
            let incoming = smith(&self.boundary.select(gens, above));
            out.insert(
                d,
                GroupShape { free_rank: gens.len() - out_rank - incoming.rank(), torsion: incoming.torsion() },
            );
        }
        out
    }
}

impl FilteredComplex {
    pub fn new(complex: GradedComplex, levels: Vec<i64>, direction: Direction, step: u32) -> Self {
        FilteredComplex { complex, levels, direction, step }
    }

    /// Checks the complex and then filtration compatibility; reports the first offender.
    pub fn validate(&self) -> Result<(), Violation> {
        let c = &self.complex;
        if self.levels.len() != c.len() {
            return Err(Violation::Shape { detail: format!("{} levels for {} generators", self.levels.len(), c.len()) });
        }
        if self.step == 0 {
            return Err(Violation::Shape { detail: "filtration step must be positive".into() });
        }
        c.validate()?;
        let s = self.step as i64;
        for g in 0..c.len() {
            let on = match self.direction {
                Direction::Increasing => self.levels[g].rem_euclid(s) == 0,
                Direction::Decreasing => (self.levels[g] - c.degrees[g]).rem_euclid(s) == 0,
            };
            if !on {
                return Err(Violation::Progression { generator: c.ids[g].clone() });
            }
        }
        for j in 0..c.len() {
            for i in 0..c.len() {
                if c.boundary[(i, j)].is_zero() {
                    continue;
                }
                let ok = match self.direction {
                    Direction::Increasing => self.levels[i] <= self.levels[j],
                    Direction::Decreasing => self.levels[i] >= self.levels[j] - 1,
                };
                if !ok {
                    return Err(Violation::Filtration { source: c.ids[j].clone(), target: c.ids[i].clone() });
                }
            }
        }
        Ok(())
    }
}
