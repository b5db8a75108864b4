//! Spectral sequence of a bounded filtered complex, computed exactly.
//!
//! Both filtration directions are run by one engine. Each generator gets a
//! normalized level `λ` (the level itself for a decreasing filtration, its
//! negative for an increasing one) so that `F_a` is always spanned by the
//! generators with `λ ≥ a`. With `s` the step and `σ` the level drop allowed
//! for `∂` (1 decreasing, 0 increasing):
//!
//! ```text
//! Z^k_a = { x ∈ F_a : ∂x ∈ F_{a-σ+sk} }
//! E^k_a = Z^k_a / (Z^{k-1}_{a+s} + ∂ Z^{k-1}_{a+σ-s(k-1)})
//! d^k : E^k_a → E^k_{a-σ+sk}
//! ```
//!
//! everything taken per degree class. Page 0 is the associated graded.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::complex::{Direction, FilteredComplex, Violation};
use super::matrix::{kernel, lattice_coordinates, smith, IntMatrix, Smith};
use crate::exec::Execution;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageEntry {
    /// `(n, j)` for a decreasing filtration, `(p, q)` for an increasing one.
    pub bidegree: (i64, i64),
    pub level: i64,
    /// Degree class of the entry.
    pub degree: i64,
    /// Exponent of `t` in the Poincaré–Laurent polynomial: the level for a
    /// decreasing filtration, the total degree for an increasing one.
    pub exponent: i64,
    pub free_rank: usize,
    #[serde(with = "super::json_int::vec")]
    pub torsion: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageDifferential {
    pub source: (i64, i64),
    pub target: (i64, i64),
    pub source_exponent: i64,
    pub target_exponent: i64,
    /// Rows index the target cells, columns the source cells, in entry order
    /// (torsion cells first, then free cells).
    pub matrix: IntMatrix,
    /// Rank over the rationals.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Page {
    pub r: usize,
    pub direction: Direction,
    pub step: u32,
    pub entries: Vec<PageEntry>,
    /// Nonzero differentials only.
    pub differentials: Vec<PageDifferential>,
}

impl Page {
    pub fn entry(&self, bidegree: (i64, i64)) -> Option<&PageEntry> {
        self.entries.iter().find(|e| e.bidegree == bidegree)
    }

    pub fn free_rank(&self, bidegree: (i64, i64)) -> usize {
        self.entry(bidegree).map_or(0, |e| e.free_rank)
    }

    pub fn total_free_rank(&self) -> usize {
        self.entries.iter().map(|e| e.free_rank).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn differentials_vanish(&self) -> bool {
        self.differentials.is_empty()
    }

    /// `Σ (-1)^degree · free_rank`.
    pub fn euler(&self) -> i64 {
        self.entries.iter().map(|e| if e.degree.rem_euclid(2) == 0 { 1 } else { -1 } * e.free_rank as i64).sum()
    }

    /// Free ranks summed per Laurent exponent.
    pub fn exponent_ranks(&self) -> BTreeMap<i64, i64> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            if e.free_rank > 0 {
                *out.entry(e.exponent).or_insert(0) += e.free_rank as i64;
            }
        }
        out
    }

    /// Ranks of the differentials, graded at their source exponent.
    pub fn image_ranks(&self) -> BTreeMap<i64, i64> {
        let mut out = BTreeMap::new();
        for d in &self.differentials {
            if d.rank > 0 {
                *out.entry(d.source_exponent).or_insert(0) += d.rank as i64;
            }
        }
        out
    }

    /// Free ranks summed per degree class.
    pub fn degree_ranks(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            if e.free_rank > 0 {
                *out.entry(e.degree).or_insert(0) += e.free_rank;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralSequence {
    /// Pages `0..=last`; the last page equals `E^∞`.
    pub pages: Vec<Page>,
    /// Smallest `r` with every differential on pages `≥ r` equal to zero.
    pub converged_at: usize,
}

impl SpectralSequence {
    pub fn limit(&self) -> &Page {
        self.pages.last().expect("at least one page")
    }

    pub fn page(&self, r: usize) -> &Page {
        let last = self.pages.len() - 1;
        &self.pages[r.min(last)]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("invalid filtered complex: {0}")]
    Invalid(#[from] Violation),
    #[error("E-infinity free rank {page} in degree {degree} differs from homology free rank {homology}")]
    ConvergenceMismatch { degree: i64, page: usize, homology: usize },
}

struct Cell {
    z_smith: Smith,
    p: IntMatrix,
    /// Order of each adapted coordinate of `Z`: 0 for free, `d > 1` for torsion.
    kept: Vec<(usize, BigInt)>,
    generators: Vec<Vec<BigInt>>,
}

impl Cell {
    fn shape(&self) -> (usize, Vec<BigInt>) {
        let free = self.kept.iter().filter(|(_, d)| d.is_zero()).count();
        let torsion = self.kept.iter().filter(|(_, d)| !d.is_zero()).map(|(_, d)| d.clone()).collect();
        (free, torsion)
    }

    /// Class of an ambient cycle in the cell coordinates.
    fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let c = lattice_coordinates(&self.z_smith, v).expect("vector lies in the cycle lattice");
        let y = self.p.apply(&c);
        self.kept
            .iter()
            .map(|(i, d)| if d.is_zero() { y[*i].clone() } else { y[*i].mod_floor(d) })
            .collect()
    }
}

struct Engine<'a> {
    fc: &'a FilteredComplex,
    lambda: Vec<i64>,
    sigma: i64,
    step: i64,
    classes: BTreeMap<i64, Vec<usize>>,
    exec: Execution,
}

impl<'a> Engine<'a> {
    fn new(fc: &'a FilteredComplex, exec: Execution) -> Self {
        let (lambda, sigma) = match fc.direction {
            Direction::Decreasing => (fc.levels.clone(), 1),
            Direction::Increasing => (fc.levels.iter().map(|l| -l).collect(), 0),
        };
        Engine { fc, lambda, sigma, step: fc.step as i64, classes: fc.complex.classes(), exec }
    }

    fn gens(&self, j: i64) -> &[usize] {
        self.classes.get(&j).map_or(&[], Vec::as_slice)
    }

    fn below(&self, j: i64) -> i64 {
        self.fc.complex.class_of(j - 1)
    }

    fn above(&self, j: i64) -> i64 {
        self.fc.complex.class_of(j + 1)
    }

    /// Basis of `Z^k_{a,j}` as ambient columns over the class-`j` generators.
    fn cycles(&self, k: i64, a: i64, j: i64) -> IntMatrix {
        let gens = self.gens(j);
        let fa: Vec<usize> = (0..gens.len()).filter(|&p| self.lambda[gens[p]] >= a).collect();
        let fa_global: Vec<usize> = fa.iter().map(|&p| gens[p]).collect();
        let limit = a - self.sigma + self.step * k;
        let bad: Vec<usize> = self.gens(self.below(j)).iter().copied().filter(|&t| self.lambda[t] < limit).collect();
        let ker = if bad.is_empty() {
            IntMatrix::identity(fa.len())
        } else {
            kernel(&self.fc.complex.boundary.select(&bad, &fa_global))
        };
        let mut z = IntMatrix::zeros(gens.len(), ker.cols());
        for (r, &p) in fa.iter().enumerate() {
            for c in 0..ker.cols() {
                z[(p, c)] = ker[(r, c)].clone();
            }
        }
        z
    }

    fn cell(&self, k: i64, a: i64, j: i64) -> Cell {
        let z = self.cycles(k, a, j);
        let z_smith = smith(&z);
        let mut denominators = self.cycles(k - 1, a + self.step, j).columns();
        let src = self.above(j);
        let zb = self.cycles(k - 1, a + self.sigma - self.step * (k - 1), src);
        if zb.cols() > 0 {
            let bnd = self.fc.complex.boundary.select(self.gens(j), self.gens(src));
            denominators.extend((&bnd * &zb).columns());
        }
        let coords: Vec<Vec<BigInt>> = denominators
            .iter()
            .map(|v| lattice_coordinates(&z_smith, v).expect("denominator lies in the cycle lattice"))
            .collect();
        let dz = IntMatrix::from_columns(z.cols(), &coords);
        let s = smith(&dz);
        let mut kept = Vec::new();
        for i in 0..z.cols() {
            let d = s.diagonal.get(i).map_or_else(BigInt::zero, |d| d.abs());
            if !d.is_one() {
                kept.push((i, d));
            }
        }
        // torsion cells first, then free cells
        kept.sort_by_key(|(i, d)| (d.is_zero(), *i));
        let generators = kept.iter().map(|(i, _)| z.apply(&s.p_inv.column(*i))).collect();
        Cell { z_smith, p: s.p, kept, generators }
    }

    fn label(&self, a: i64, j: i64) -> ((i64, i64), i64, i64) {
        match self.fc.direction {
            Direction::Decreasing => ((a, j), a, a),
            Direction::Increasing => ((-a, j + a), -a, j),
        }
    }

    /// Positions `(a, j)` that can carry a nonzero entry.
    fn positions(&self) -> Vec<(i64, i64)> {
        let set: BTreeSet<(i64, i64)> =
            (0..self.fc.complex.len()).map(|g| (self.lambda[g], self.fc.complex.class(g))).collect();
        set.into_iter().collect()
    }

    /// First page index from which every differential leaves the level range.
    fn last_page(&self) -> usize {
        let span = match (self.lambda.iter().min(), self.lambda.iter().max()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        };
        let mut k = 0i64;
        while self.step * k - self.sigma <= span {
            k += 1;
        }
        k as usize
    }

    fn page(&self, r: usize) -> Page {
        let k = r as i64;
        let positions = self.positions();
        let cells: Vec<Cell> = self.exec.map(&positions, |&(a, j)| self.cell(k, a, j));
        let index: BTreeMap<(i64, i64), usize> = positions.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut entries = Vec::new();
        for (&(a, j), cell) in positions.iter().zip(&cells) {
            let (free_rank, torsion) = cell.shape();
            if free_rank == 0 && torsion.is_empty() {
                continue;
            }
            let (bidegree, level, exponent) = self.label(a, j);
            entries.push(PageEntry { bidegree, level, degree: j, exponent, free_rank, torsion });
        }
        let mut differentials = Vec::new();
        for (&(a, j), cell) in positions.iter().zip(&cells) {
            let target = (a - self.sigma + self.step * k, self.below(j));
            let Some(&t) = index.get(&target) else { continue };
            let tcell = &cells[t];
            if cell.kept.is_empty() || tcell.kept.is_empty() {
                continue;
            }
            let bnd = self.fc.complex.boundary.select(self.gens(target.1), self.gens(j));
            let columns: Vec<Vec<BigInt>> = cell.generators.iter().map(|g| tcell.reduce(&bnd.apply(g))).collect();
            let matrix = IntMatrix::from_columns(tcell.kept.len(), &columns);
            if matrix.is_zero() {
                continue;
            }
            let free_rows: Vec<usize> = (0..tcell.kept.len()).filter(|&i| tcell.kept[i].1.is_zero()).collect();
            let free_cols: Vec<usize> = (0..cell.kept.len()).filter(|&i| cell.kept[i].1.is_zero()).collect();
            let rank = matrix.select(&free_rows, &free_cols).rank();
            let (source, _, source_exponent) = self.label(a, j);
            let (target_bd, _, target_exponent) = self.label(target.0, target.1);
            differentials.push(PageDifferential {
                source,
                target: target_bd,
                source_exponent,
                target_exponent,
                matrix,
                rank,
            });
        }
        Page { r, direction: self.fc.direction, step: self.fc.step, entries, differentials }
    }
}

/// Page `E^r`.
pub fn page(fc: &FilteredComplex, r: usize) -> Result<Page, SpectralError> {
    fc.validate()?;
    Ok(Engine::new(fc, Execution::default()).page(r))
}

/// All pages up to the one where the sequence has provably stabilized.
pub fn spectral_sequence(fc: &FilteredComplex) -> Result<SpectralSequence, SpectralError> {
    spectral_sequence_with(fc, Execution::default())
}

pub fn spectral_sequence_with(fc: &FilteredComplex, exec: Execution) -> Result<SpectralSequence, SpectralError> {
    fc.validate()?;
    let engine = Engine::new(fc, exec);
    let last = engine.last_page();
    let pages: Vec<Page> = (0..=last).map(|r| engine.page(r)).collect();
    let converged_at = pages.iter().rposition(|p| !p.differentials_vanish()).map_or(0, |i| i + 1);
    let homology = fc.complex.homology();
    let limit = pages.last().expect("nonempty").degree_ranks();
    for (&degree, shape) in &homology {
        let page = limit.get(&degree).copied().unwrap_or(0);
        if page != shape.free_rank {
            return Err(SpectralError::ConvergenceMismatch { degree, page, homology: shape.free_rank });
        }
    }
    Ok(SpectralSequence { pages, converged_at })
}

/// `(E^∞, converged_at)`.
pub fn limit(fc: &FilteredComplex) -> Result<(Page, usize), SpectralError> {
    let ss = spectral_sequence(fc)?;
    let at = ss.converged_at;
    Ok((ss.pages.into_iter().last().expect("nonempty"), at))
}
