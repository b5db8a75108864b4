use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    apply_letter_tangent, cmp_fingerprint, fingerprint, fingerprint_distance, gauge_fix, is_reducible, RepError,
    RepPoint, RepStratum, StratumKind, V3,
};
use crate::braid::{require_knot, BraidWord};
use crate::exec::Execution;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub seed: u64,
    pub restarts: usize,
    /// Acceptance threshold on `‖action(v) - v‖₂`.
    pub tol: f64,
    /// Singular values below this count toward the kernel.
    pub rank_tol: f64,
    pub reducible_tol: f64,
    /// Two fingerprints closer than this (max-norm) are the same class.
    pub dedup_tol: f64,
    pub max_iterations: usize,
    /// Restart `i` belongs to batch `i % batches`; stability asks every stratum
    /// to be found by every batch.
    pub batches: usize,
    pub min_circle_samples: usize,
    /// Distinct samples kept per stratum in the output.
    pub max_samples: usize,
    pub trace_step: f64,
    pub max_trace_steps: usize,
    pub execution: Execution,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            restarts: 2000,
            tol: 1e-10,
            rank_tol: 1e-6,
            reducible_tol: 1e-8,
            dedup_tol: 1e-5,
            max_iterations: 400,
            batches: 3,
            min_circle_samples: 10,
            max_samples: 32,
            trace_step: 0.02,
            max_trace_steps: 20_000,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrataReport {
    pub strata: Vec<RepStratum>,
    pub config: SolverConfig,
    pub accepted: usize,
    pub reducible: usize,
    pub unconverged: usize,
    /// Number of strata each batch of restarts found.
    pub batch_counts: Vec<usize>,
    pub stable: bool,
}

impl StrataReport {
    pub fn count(&self, kind: StratumKind) -> usize {
        self.strata.iter().filter(|s| s.kind == kind).count()
    }
}

fn tangent_basis(v: &V3) -> (V3, V3) {
    let trial = if v.x.abs() < 0.6 { V3::x() } else { V3::y() };
    let t1 = (trial - trial.dot(v) * v).normalize();
    (t1, v.cross(&t1))
}

struct Linearization {
    jacobian: DMatrix<f64>,
    residual: DVector<f64>,
    basis: Vec<(V3, V3)>,
}

fn linearize(b: &BraidWord, v: &[V3]) -> Linearization {
    let n = v.len();
    let basis: Vec<(V3, V3)> = v.iter().map(tangent_basis).collect();
    let mut dv: Vec<Vec<V3>> = (0..2 * n)
        .map(|c| {
            let mut d = vec![V3::zeros(); n];
            let (t1, t2) = basis[c / 2];
            d[c / 2] = if c % 2 == 0 { t1 } else { t2 };
            d
        })
        .collect();
    let seeds = dv.clone();
    let mut w = v.to_vec();
    for &e in b.letters() {
        apply_letter_tangent(e, &mut w, &mut dv);
    }
    let mut jacobian = DMatrix::zeros(3 * n, 2 * n);
    for c in 0..2 * n {
        for k in 0..n {
            let col = dv[c][k] - seeds[c][k];
            for a in 0..3 {
                jacobian[(3 * k + a, c)] = col[a];
            }
        }
    }
    let residual = DVector::from_iterator(3 * n, (0..n).flat_map(|k| {
        let d = w[k] - v[k];
        [d.x, d.y, d.z]
    }));
    Linearization { jacobian, residual, basis }
}

fn retract(v: &[V3], basis: &[(V3, V3)], step: &DVector<f64>) -> Vec<V3> {
    v.iter()
        .zip(basis)
        .enumerate()
        .map(|(k, (x, (t1, t2)))| (x + step[2 * k] * t1 + step[2 * k + 1] * t2).normalize())
        .collect()
}

fn residual_norm(b: &BraidWord, v: &[V3]) -> f64 {
    super::residual(b, v)
}

/// Levenberg–Marquardt on `(S²)ⁿ`; returns the final point and residual.
fn minimize(b: &BraidWord, start: Vec<V3>, max_iterations: usize) -> (Vec<V3>, f64) {
    let mut v = start;
    let mut lin = linearize(b, &v);
    let mut cost = lin.residual.norm_squared();
    let mut mu = 1e-3;
    for _ in 0..max_iterations {
        if cost.sqrt() < 1e-14 {
            break;
        }
        let jt = lin.jacobian.transpose();
        let a = &jt * &lin.jacobian;
        let g = &jt * &lin.residual;
        let mut accepted = false;
        for _ in 0..12 {
            let mut damped = a.clone();
            for i in 0..damped.nrows() {
                damped[(i, i)] += mu * (1.0 + a[(i, i)]);
            }
            let Some(step) = damped.cholesky().map(|c| c.solve(&(-&g))) else {
                mu *= 10.0;
                continue;
            };
            let trial = retract(&v, &lin.basis, &step);
            let trial_lin = linearize(b, &trial);
            let trial_cost = trial_lin.residual.norm_squared();
            if trial_cost < cost {
                v = trial;
                lin = trial_lin;
                cost = trial_cost;
                mu = (mu / 3.0).max(1e-12);
                accepted = true;
                break;
            }
            mu *= 4.0;
        }
        if !accepted {
            break;
        }
    }
    let r = residual_norm(b, &v);
    (v, r)
}

fn kernel_dimension(lin: &Linearization, rank_tol: f64) -> usize {
    let svd = lin.jacobian.clone().svd(false, false);
    svd.singular_values.iter().filter(|&&s| s < rank_tol).count()
}

/// Unit direction along the solution set at `v`, orthogonal to the conjugation orbit.
fn curve_direction(b: &BraidWord, v: &[V3], rank_tol: f64) -> Option<Vec<V3>> {
    let n = v.len();
    let lin = linearize(b, v);
    let svd = lin.jacobian.clone().svd(false, true);
    let vt = svd.v_t?;
    let kernel: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < rank_tol)
        .map(|(i, _)| vt.row(i).transpose())
        .collect();
    // conjugation directions ω × vₖ in tangent coordinates, orthonormalized
    let mut gauge: Vec<DVector<f64>> = Vec::new();
    for omega in [V3::x(), V3::y(), V3::z()] {
        let mut g = DVector::from_iterator(
            2 * n,
            (0..n).flat_map(|k| {
                let w = omega.cross(&v[k]);
                let (t1, t2) = lin.basis[k];
                [t1.dot(&w), t2.dot(&w)]
            }),
        );
        for q in &gauge {
            let c = q.dot(&g);
            g -= c * q;
        }
        if g.norm() > 1e-9 {
            gauge.push(g.normalize());
        }
    }
    let best = kernel
        .into_iter()
        .map(|mut k| {
            for q in &gauge {
                let c = q.dot(&k);
                k -= c * q;
            }
            k
        })
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))?;
    if best.norm() < 1e-6 {
        return None;
    }
    let best = best.normalize();
    Some((0..n).map(|k| best[2 * k] * lin.basis[k].0 + best[2 * k + 1] * lin.basis[k].1).collect())
}

fn dot_all(a: &[V3], b: &[V3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

/// Follows a one-dimensional family from `start` until it closes up in
/// invariant space. Returns the fingerprints along the way, or `None` if the
/// corrector fails or the loop does not close.
fn trace_circle(b: &BraidWord, start: &[V3], cfg: &SolverConfig) -> Option<Vec<Vec<f64>>> {
    let fp0 = fingerprint(start);
    let mut fps = vec![fp0.clone()];
    let mut v = start.to_vec();
    let mut heading: Option<Vec<V3>> = None;
    let mut max_gap: f64 = 0.0;
    let mut farthest: f64 = 0.0;
    for step in 0..cfg.max_trace_steps {
        let mut dir = curve_direction(b, &v, cfg.rank_tol)?;
        if let Some(h) = &heading {
            if dot_all(&dir, h) < 0.0 {
                dir.iter_mut().for_each(|d| *d = -*d);
            }
        }
        let predicted: Vec<V3> = v.iter().zip(&dir).map(|(x, d)| (x + cfg.trace_step * d).normalize()).collect();
        let (next, r) = minimize(b, predicted, 50);
        if r >= cfg.tol || is_reducible(&next, cfg.reducible_tol) {
            return None;
        }
        let moved: Vec<V3> = next.iter().zip(&v).map(|(x, y)| x - y).collect();
        let norm = dot_all(&moved, &moved).sqrt();
        if norm < 1e-3 * cfg.trace_step {
            return None;
        }
        heading = Some(moved.iter().map(|m| m / norm).collect());
        let fp = fingerprint(&next);
        max_gap = max_gap.max(fingerprint_distance(&fp, fps.last().expect("nonempty")));
        let back = fingerprint_distance(&fp, &fp0);
        farthest = farthest.max(back);
        fps.push(fp);
        v = next;
        if step > 5 && farthest > 4.0 * max_gap && back < 1.5 * max_gap {
            return Some(fps);
        }
    }
    None
}

struct Hit {
    restart: usize,
    point: Vec<V3>,
    residual: f64,
    fingerprint: Vec<f64>,
    tangent_dim: usize,
}

enum Outcome {
    Irreducible(Hit),
    Reducible,
    Unconverged,
}

fn random_unit(rng: &mut ChaCha8Rng) -> V3 {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).sqrt();
    V3::new(r * phi.cos(), r * phi.sin(), z)
}

fn run_restart(b: &BraidWord, cfg: &SolverConfig, restart: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let n = b.strands() as usize;
    let start: Vec<V3> = (0..n).map(|_| random_unit(&mut rng)).collect();
    let (v, r) = minimize(b, start, cfg.max_iterations);
    if !(r < cfg.tol) {
        return Outcome::Unconverged;
    }
    if is_reducible(&v, cfg.reducible_tol) {
        return Outcome::Reducible;
    }
    let point = gauge_fix(&v);
    let kernel = kernel_dimension(&linearize(b, &point), cfg.rank_tol);
    Outcome::Irreducible(Hit {
        restart,
        fingerprint: fingerprint(&point),
        residual: residual_norm(b, &point),
        point,
        tangent_dim: kernel.saturating_sub(3),
    })
}

fn distinct_samples(hits: &[&Hit], tol: f64) -> Vec<RepPoint> {
    let mut out: Vec<RepPoint> = Vec::new();
    for h in hits {
        if out.iter().all(|p| fingerprint_distance(&p.fingerprint, &h.fingerprint) >= tol) {
            out.push(RepPoint { vectors: h.point.iter().map(|&v| v.into()).collect(), residual: h.residual, fingerprint: h.fingerprint.clone() });
        }
    }
    out.sort_by(|a, b| cmp_fingerprint(&a.fingerprint, &b.fingerprint));
    out
}

/// Enumerates strata of irreducible traceless representations of the closure.
pub fn find_strata(b: &BraidWord, cfg: &SolverConfig) -> Result<StrataReport, RepError> {
    require_knot(b)?;
    let outcomes = cfg.execution.map_range(cfg.restarts, |i| run_restart(b, cfg, i));
    let mut hits = Vec::new();
    let (mut reducible, mut unconverged) = (0, 0);
    for o in outcomes {
        match o {
            Outcome::Irreducible(h) => hits.push(h),
            Outcome::Reducible => reducible += 1,
            Outcome::Unconverged => unconverged += 1,
        }
    }
    let accepted = hits.len() + reducible;

    // group hits into strata; each group keeps the restart indices it came from
    let mut groups: Vec<(StratumKind, usize, Vec<usize>)> = Vec::new();
    let mut assigned = vec![false; hits.len()];
    for i in 0..hits.len() {
        if assigned[i] {
            continue;
        }
        assigned[i] = true;
        let mut members = vec![i];
        let dim = hits[i].tangent_dim;
        let kind = match dim {
            0 => {
                for j in i + 1..hits.len() {
                    if !assigned[j]
                        && hits[j].tangent_dim == 0
                        && fingerprint_distance(&hits[i].fingerprint, &hits[j].fingerprint) < cfg.dedup_tol
                    {
                        assigned[j] = true;
                        members.push(j);
                    }
                }
                StratumKind::Isolated
            }
            1 => match trace_circle(b, &hits[i].point, cfg) {
                Some(trace) => {
                    let gap = trace.windows(2).map(|w| fingerprint_distance(&w[0], &w[1])).fold(0.0, f64::max);
                    for j in i + 1..hits.len() {
                        if !assigned[j]
                            && hits[j].tangent_dim == 1
                            && trace.iter().any(|t| fingerprint_distance(t, &hits[j].fingerprint) < gap + cfg.dedup_tol)
                        {
                            assigned[j] = true;
                            members.push(j);
                        }
                    }
                    let samples = distinct_samples(&members.iter().map(|&m| &hits[m]).collect::<Vec<_>>(), cfg.dedup_tol);
                    if samples.len() >= cfg.min_circle_samples {
                        StratumKind::Circle
                    } else {
                        StratumKind::Unclassified
                    }
                }
                None => StratumKind::Unclassified,
            },
            _ => {
                for j in i + 1..hits.len() {
                    if !assigned[j] && hits[j].tangent_dim == dim {
                        assigned[j] = true;
                        members.push(j);
                    }
                }
                StratumKind::Unclassified
            }
        };
        groups.push((kind, dim, members));
    }

    let batches = cfg.batches.max(1);
    let mut batch_counts = vec![0; batches];
    let mut stable = true;
    let mut strata = Vec::new();
    for (kind, tangent_dim, members) in groups {
        let mut seen = vec![false; batches];
        for &m in &members {
            seen[hits[m].restart % batches] = true;
        }
        for (c, s) in batch_counts.iter_mut().zip(&seen) {
            *c += *s as usize;
        }
        stable &= seen.iter().all(|&s| s);
        let mut samples = distinct_samples(&members.iter().map(|&m| &hits[m]).collect::<Vec<_>>(), cfg.dedup_tol);
        if samples.len() > cfg.max_samples.max(1) {
            // evenly spaced in fingerprint order
            let keep = cfg.max_samples.max(1);
            let total = samples.len();
            samples = (0..keep).map(|k| samples[k * total / keep].clone()).collect();
        }
        strata.push(RepStratum { kind, samples, tangent_dim, hits: members.len() });
    }
    strata.sort_by(|a, b| cmp_fingerprint(a.key(), b.key()).then(a.kind.cmp(&b.kind)));
    Ok(StrataReport { strata, config: cfg.clone(), accepted, reducible, unconverged, batch_counts, stable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;

    fn quick(seed: u64) -> SolverConfig {
        SolverConfig { seed, restarts: 300, ..SolverConfig::default() }
    }

    #[test]
    fn unknot_has_no_irreducibles() {
        let r = find_strata(&parse_braid("s1").unwrap(), &quick(1)).unwrap();
        assert!(r.strata.is_empty());
        assert!(r.stable);
    }

    #[test]
    fn trefoil_has_one_isolated_class() {
        let r = find_strata(&parse_braid("s1^3").unwrap(), &quick(7)).unwrap();
        assert_eq!(r.strata.len(), 1, "{:?}", r.strata);
        let s = &r.strata[0];
        assert_eq!(s.kind, StratumKind::Isolated);
        assert_eq!(s.tangent_dim, 0);
        assert_eq!(s.samples.len(), 1);
        assert!(s.samples[0].residual < 1e-10);
        // binary dihedral class: meridians at 120 degrees... or its supplement
        assert!((s.samples[0].fingerprint[0].abs() - 0.5).abs() < 1e-6, "{:?}", s.samples[0].fingerprint);
    }

    #[test]
    fn links_are_rejected() {
        assert!(matches!(find_strata(&parse_braid("s1^2").unwrap(), &quick(0)), Err(RepError::Braid(_))));
    }

    #[test]
    fn restarts_are_deterministic_across_execution_modes() {
        let b = parse_braid("s1 s2^-1 s1 s2^-1").unwrap();
        let mut cfg = quick(3);
        cfg.restarts = 60;
        cfg.execution = Execution::Sequential;
        let a = find_strata(&b, &cfg).unwrap();
        cfg.execution = Execution::Parallel;
        let c = find_strata(&b, &cfg).unwrap();
        assert_eq!(a.strata, c.strata);
    }
}
