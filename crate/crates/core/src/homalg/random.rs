//! Random bounded filtered complexes for testing and benchmarking.
//!
//! A complex is built as a direct sum of elementary pieces (`∂x = c·y` or a
//! lone cycle) and then conjugated by random filtration-preserving elementary
//! basis changes, so `∂² = 0` and filtration compatibility hold by construction.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use super::complex::{Direction, FilteredComplex, GradedComplex};
use super::matrix::IntMatrix;

#[derive(Debug, Clone, Copy)]
pub struct RandomComplexConfig {
    pub max_generators: usize,
    pub direction: Direction,
    /// Filtration step; for a decreasing filtration also the degree period.
    pub step: u32,
    /// Number of distinct degrees (increasing) or lift windows (decreasing).
    pub spread: i64,
    pub max_coefficient: i64,
    pub mixing_moves: usize,
}

impl RandomComplexConfig {
    pub fn increasing(max_generators: usize) -> Self {
        RandomComplexConfig {
            max_generators,
            direction: Direction::Increasing,
            step: 1,
            spread: 4,
            max_coefficient: 3,
            mixing_moves: 3 * max_generators,
        }
    }

    pub fn decreasing(max_generators: usize, step: u32) -> Self {
        RandomComplexConfig {
            max_generators,
            direction: Direction::Decreasing,
            step,
            spread: 3,
            max_coefficient: 3,
            mixing_moves: 3 * max_generators,
        }
    }
}

fn coefficient<R: Rng + ?Sized>(rng: &mut R, max: i64) -> i64 {
    let c = rng.random_range(1..=max.max(1));
    if rng.random_bool(0.5) {
        c
    } else {
        -c
    }
}

pub fn random_filtered_complex<R: Rng + ?Sized>(rng: &mut R, cfg: &RandomComplexConfig) -> FilteredComplex {
    let n = rng.random_range(1..=cfg.max_generators.max(1));
    let s = cfg.step as i64;
    let (degrees, levels, period): (Vec<i64>, Vec<i64>, u32) = match cfg.direction {
        Direction::Increasing => {
            let d = (0..n).map(|_| rng.random_range(0..cfg.spread)).collect();
            let l = (0..n).map(|_| s * rng.random_range(0..cfg.spread)).collect();
            (d, l, 0)
        }
        Direction::Decreasing => {
            let lifts: Vec<i64> = (0..n).map(|_| rng.random_range(0..cfg.spread * s)).collect();
            (lifts.clone(), lifts, cfg.step)
        }
    };
    let complex = GradedComplex::anonymous(degrees.clone(), IntMatrix::zeros(n, n));
    let mut fc = FilteredComplex::new(GradedComplex { period, ..complex }, levels.clone(), cfg.direction, cfg.step);

    let allowed = |x: usize, y: usize, fc: &FilteredComplex| -> bool {
        let c = &fc.complex;
        if c.class(y) != c.class_of(c.degrees[x] - 1) {
            return false;
        }
        match fc.direction {
            Direction::Increasing => fc.levels[y] <= fc.levels[x],
            Direction::Decreasing => fc.levels[y] >= fc.levels[x] - 1,
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut used = vec![false; n];
    for &x in &order {
        if used[x] || rng.random_bool(0.25) {
            continue;
        }
        let candidates: Vec<usize> = (0..n).filter(|&y| y != x && !used[y] && allowed(x, y, &fc)).collect();
        if let Some(&y) = candidates.as_slice().choose(rng) {
            used[x] = true;
            used[y] = true;
            fc.complex.boundary[(y, x)] = coefficient(rng, cfg.max_coefficient).into();
        }
    }

    // conjugate by g ↦ g + c·h with h in the same degree class and at least as deep in F
    let deeper = |g: usize, h: usize, fc: &FilteredComplex| -> bool {
        g != h
            && fc.complex.class(g) == fc.complex.class(h)
            && match fc.direction {
                Direction::Increasing => fc.levels[h] <= fc.levels[g],
                Direction::Decreasing => fc.levels[h] >= fc.levels[g],
            }
    };
    for _ in 0..cfg.mixing_moves {
        let g = rng.random_range(0..n);
        let hs: Vec<usize> = (0..n).filter(|&h| deeper(g, h, &fc)).collect();
        let Some(&h) = hs.as_slice().choose(rng) else { continue };
        let c: num_bigint::BigInt = coefficient(rng, 2).into();
        let b = &mut fc.complex.boundary;
        // E = I + c·e_{h,g}: rows h += c·row g, then column g -= c·column h
        for j in 0..n {
            let v = &b[(g, j)] * &c;
            b[(h, j)] += v;
        }
        for i in 0..n {
            let v = &b[(i, h)] * &c;
            b[(i, g)] -= v;
        }
    }
    fc
}
