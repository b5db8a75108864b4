//! Integer gradings from an action window, and the spectral sequence of the
//! filtration by lift.
//!
//! For a window parameter `r` each generator `x` with stored action `a` and
//! lift `μ` is represented by its deck translate with action in `(r, r + P)`,
//! `P = 2αN`. That is `m(x) = ⌊(r - a)/P⌋ + 1` deck steps up, and the grading
//! moves with it to `μ + 2N·m(x)`.

use super::data::KnotFloerData;
use super::{FloerError, Q};
use crate::exec::Execution;
use crate::homalg::{spectral_sequence_with, Direction, FilteredComplex, GradedComplex, IntMatrix, SpectralSequence};

/// Deck steps `m(x)` for every generator; errors if `r` meets the action spectrum.
pub fn window_steps(k: &KnotFloerData, r: Q) -> Result<Vec<i64>, FloerError> {
    let period = k.action_period();
    k.generators
        .iter()
        .map(|g| {
            let t = (r - g.action) / period;
            if t.is_integer() {
                Err(FloerError::ActionCollision { r: r.to_string(), generator: g.id.clone() })
            } else {
                Ok(t.floor().to_integer() + 1)
            }
        })
        .collect()
}

/// Integer gradings of the generators in window `r`.
pub fn window_gradings(k: &KnotFloerData, r: Q) -> Result<Vec<i64>, FloerError> {
    let m = window_steps(k, r)?;
    Ok(k.generators.iter().zip(&m).map(|(g, m)| g.maslov_lift + k.grading_period() * m).collect())
}

/// Every boundary component as `(source, target, coefficient, deck shift k)`,
/// where the target grading is `lift(source) - 1 + 2N·k`.
fn components(k: &KnotFloerData) -> Vec<(usize, usize, i64, i64)> {
    let lift = k.lifts();
    let mut out = Vec::new();
    for (i, row) in k.boundary.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c != 0 {
                out.push((j, i, c, 0));
            }
        }
    }
    for t in &k.higher_boundary {
        let (s, d) = (k.index_of(&t.source).unwrap(), k.index_of(&t.target).unwrap());
        out.push((s, d, t.coefficient, (lift[d] - lift[s] + 1) / k.grading_period()));
    }
    out
}

/// The ℤ-graded complex of window `r`: generators at their window gradings,
/// with the boundary components whose endpoints both lie in the window.
pub fn lift_window(k: &KnotFloerData, r: Q) -> Result<GradedComplex, FloerError> {
    k.validate()?;
    let m = window_steps(k, r)?;
    let degrees = window_gradings(k, r)?;
    let n = k.len();
    let mut boundary = IntMatrix::zeros(n, n);
    for (s, d, c, shift) in components(k) {
        if shift + m[d] - m[s] == 0 {
            boundary[(d, s)] += c;
        }
    }
    let ids = k.generators.iter().map(|g| g.id.clone()).collect();
    let complex = GradedComplex::new(ids, degrees, boundary, 0);
    complex.validate()?;
    Ok(complex)
}

/// The ℤ/2N-graded total complex, filtered by window grading with step `2N`.
pub fn thm_a_complex(k: &KnotFloerData, r: Q) -> Result<FilteredComplex, FloerError> {
    let window = lift_window(k, r)?;
    let complex = GradedComplex::new(window.ids.clone(), window.degrees.clone(), k.total_boundary(), 2 * k.chern_n);
    Ok(FilteredComplex::new(complex, window.degrees, Direction::Decreasing, 2 * k.chern_n))
}

pub fn thm_a_spectral(k: &KnotFloerData, r: Q) -> Result<SpectralSequence, FloerError> {
    thm_a_spectral_with(k, r, Execution::default())
}

/// Pages of the lift filtration. Checks that `E¹` at each level is the
/// homology of the window complex in that degree.
pub fn thm_a_spectral_with(k: &KnotFloerData, r: Q, exec: Execution) -> Result<SpectralSequence, FloerError> {
    let fc = thm_a_complex(k, r)?;
    let ss = spectral_sequence_with(&fc, exec)?;
    let window = lift_window(k, r)?.homology();
    let e1 = &ss.pages[1.min(ss.pages.len() - 1)];
    let mut levels: Vec<i64> = window.keys().copied().collect();
    levels.extend(e1.entries.iter().map(|e| e.level));
    for n in levels {
        let h = window.get(&n).cloned().unwrap_or_default();
        let (free, torsion) = e1
            .entries
            .iter()
            .find(|e| e.level == n)
            .map_or((0, Vec::new()), |e| (e.free_rank, e.torsion.clone()));
        if free != h.free_rank || torsion != h.torsion {
            return Err(FloerError::Structure(format!(
                "E¹ at level {n} is Z^{free} + {torsion:?}, window homology is Z^{} + {:?}",
                h.free_rank, h.torsion
            )));
        }
    }
    Ok(ss)
}
