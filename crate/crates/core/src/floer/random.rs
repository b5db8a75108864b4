//! Random packages satisfying the single-knot relations, for testing and
//! benchmarking.

use num_traits::ToPrimitive;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use super::data::{BoundaryTerm, FloerGenerator, KnotFloerData};
use super::Q;
use crate::homalg::matrix::kernel;
use crate::homalg::random::{random_filtered_complex, RandomComplexConfig};
use crate::homalg::{Direction, IntMatrix};

/// Which of the two maps through the reducible a package may carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialMaps {
    Both,
    /// `d_β` only.
    Outgoing,
    /// `δ_β` only.
    Incoming,
    Neither,
}

#[derive(Debug, Clone, Copy)]
pub struct PackageConfig {
    pub max_generators: usize,
    pub max_chern: u32,
    pub max_coefficient: i64,
    pub special: SpecialMaps,
}

impl PackageConfig {
    pub fn new(max_generators: usize, special: SpecialMaps) -> Self {
        PackageConfig { max_generators, max_chern: 3, max_coefficient: 3, special }
    }
}

fn random_alpha<R: Rng + ?Sized>(rng: &mut R) -> Q {
    *[Q::new(1, 4), Q::new(1, 2), Q::new(1, 3), Q::new(3, 4), Q::from(1)].choose(rng).unwrap()
}

/// Distinct actions spread over `(0, period)`.
fn actions<R: Rng + ?Sized>(rng: &mut R, n: usize, period: Q) -> Vec<Q> {
    let mut slots: Vec<i64> = (1..=n as i64).collect();
    slots.shuffle(rng);
    slots.into_iter().map(|k| period * Q::new(k, n as i64 + 1)).collect()
}

/// Integer combination of the columns of `basis` with coefficients in `-2..=2`.
fn combination<R: Rng + ?Sized>(rng: &mut R, basis: &IntMatrix) -> Vec<i64> {
    let mut out = vec![0i64; basis.rows()];
    for j in 0..basis.cols() {
        let c = rng.random_range(-2..=2i64);
        for (i, o) in out.iter_mut().enumerate() {
            *o += c * basis[(i, j)].to_i64().expect("small kernel entries");
        }
    }
    out
}

fn block(m: &IntMatrix, rows: &[usize], cols: &[usize]) -> IntMatrix {
    m.select(rows, cols)
}

/// Lifts in `-2..=2` with a random boundary, and special maps drawn from the
/// solutions of `d_β∘∂ = 0` and `∂∘δ_β = 0`.
pub fn random_package<R: Rng + ?Sized>(rng: &mut R, cfg: &PackageConfig, name: &str) -> KnotFloerData {
    let ccfg = RandomComplexConfig {
        spread: 5,
        max_coefficient: cfg.max_coefficient,
        ..RandomComplexConfig::increasing(cfg.max_generators)
    };
    let fc = random_filtered_complex(rng, &ccfg);
    let n = fc.complex.len();
    let lifts: Vec<i64> = fc.complex.degrees.iter().map(|d| d - 2).collect();
    let chern_n = rng.random_range(1..=cfg.max_chern.max(1));
    let mut k = KnotFloerData::empty(name, None, chern_n, random_alpha(rng));
    let acts = actions(rng, n, k.action_period());
    k.generators = (0..n)
        .map(|i| FloerGenerator { id: format!("{name}{i}"), action: acts[i], maslov_lift: lifts[i] })
        .collect();
    k.boundary = fc
        .complex
        .boundary
        .row_lists()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("small boundary entries")).collect())
        .collect();
    k.normalize();
    let at = |l: i64| -> Vec<usize> { (0..n).filter(|&i| lifts[i] == l).collect() };
    let (ones, twos, neg1, neg2) = (at(1), at(2), at(-1), at(-2));
    let dz = fc.complex.boundary;
    let (out_ok, in_ok) = match cfg.special {
        SpecialMaps::Both => (true, true),
        SpecialMaps::Outgoing => (true, false),
        SpecialMaps::Incoming => (false, true),
        SpecialMaps::Neither => (false, false),
    };
    if out_ok && !ones.is_empty() {
        // d·∂ = 0 on C₂: d lies in the kernel of the transposed block
        let b = block(&dz, &ones, &twos).transpose();
        let basis = if twos.is_empty() { IntMatrix::identity(ones.len()) } else { kernel(&b) };
        for (&i, v) in ones.iter().zip(combination(rng, &basis)) {
            k.special_d[i] = v;
        }
    }
    if in_ok && !neg1.is_empty() {
        let b = block(&dz, &neg2, &neg1);
        let basis = if neg2.is_empty() { IntMatrix::identity(neg1.len()) } else { kernel(&b) };
        for (&i, v) in neg1.iter().zip(combination(rng, &basis)) {
            k.special_delta[i] = v;
        }
    }
    k
}

/// Two packages. With `closed`, the maps through the reducible are restricted
/// so that `δⱼ∘dⱼ = 0` and `dᵢ ⊗ δⱼ = 0` across the factors: either both
/// packages carry only `d_β` or both carry only `δ_β`.
pub fn random_pair<R: Rng + ?Sized>(
    rng: &mut R,
    max_generators: usize,
    closed: bool,
) -> (KnotFloerData, KnotFloerData) {
    let special = if !closed {
        SpecialMaps::Both
    } else if rng.random_bool(0.5) {
        SpecialMaps::Outgoing
    } else {
        SpecialMaps::Incoming
    };
    let cfg = PackageConfig::new(max_generators, special);
    (random_package(rng, &cfg, "a"), random_package(rng, &cfg, "b"))
}

/// A package whose lift filtration is a random bounded filtered complex with
/// step `2N`, so boundary terms across windows occur. Special maps are zero.
pub fn random_windowed_package<R: Rng + ?Sized>(rng: &mut R, max_generators: usize, chern_n: u32) -> KnotFloerData {
    let fc = random_filtered_complex(rng, &RandomComplexConfig::decreasing(max_generators, 2 * chern_n));
    debug_assert_eq!(fc.direction, Direction::Decreasing);
    let n = fc.complex.len();
    let lifts = fc.levels.clone();
    let mut k = KnotFloerData::empty("w", None, chern_n, random_alpha(rng));
    let acts = actions(rng, n, k.action_period());
    k.generators = (0..n)
        .map(|i| FloerGenerator { id: format!("w{i}"), action: acts[i], maslov_lift: lifts[i] })
        .collect();
    k.normalize();
    for j in 0..n {
        for i in 0..n {
            let c = fc.complex.boundary[(i, j)].to_i64().expect("small boundary entries");
            if c == 0 {
                continue;
            }
            if lifts[i] == lifts[j] - 1 {
                k.boundary[i][j] = c;
            } else {
                k.higher_boundary.push(BoundaryTerm { source: k.generators[j].id.clone(), target: k.generators[i].id.clone(), coefficient: c });
            }
        }
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn packages_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut with_d = 0;
        let mut with_delta = 0;
        for _ in 0..200 {
            let k = random_package(&mut rng, &PackageConfig::new(10, SpecialMaps::Both), "k");
            k.validate().unwrap_or_else(|v| panic!("{v}: {k:?}"));
            with_d += usize::from(k.special_d.iter().any(|&x| x != 0));
            with_delta += usize::from(k.special_delta.iter().any(|&x| x != 0));
        }
        assert!(with_d > 40 && with_delta > 40, "{with_d} {with_delta}");
    }

    #[test]
    fn windowed_packages_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut crossing = 0;
        for i in 0..100 {
            let k = random_windowed_package(&mut rng, 10, 1 + i % 3);
            k.validate().unwrap_or_else(|v| panic!("{v}: {k:?}"));
            crossing += usize::from(!k.higher_boundary.is_empty());
        }
        assert!(crossing > 10, "{crossing}");
    }
}
