//! The composite complex of a connected sum.
//!
//! Away from the reducible pair the fixed points of `K₁ # K₂` are `ρ₁⋆s₂`,
//! `s₁⋆ρ₂`, and for every pair of irreducibles a circle of gluings, which
//! contributes a Morse minimum `(ρ₁⋆ρ₂)₀` and maximum `(ρ₁⋆ρ₂)₁`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::data::KnotFloerData;
use super::{rational_text, FloerError, Q};
use crate::braid::{connected_sum, BraidWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Origin {
    #[serde(rename = "left*s")]
    LeftStar,
    #[serde(rename = "s*right")]
    StarRight,
    #[serde(rename = "circle0")]
    Circle0,
    #[serde(rename = "circle1")]
    Circle1,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositeGenerator {
    pub id: String,
    pub origin: Origin,
    pub maslov: i64,
    /// Index of the left factor in `left.generators`, if any.
    pub left: Option<usize>,
    pub right: Option<usize>,
}

impl CompositeGenerator {
    /// Position in the circle's cell complex: 1 for the top cell, else 0.
    pub fn q(&self) -> i64 {
        i64::from(self.origin == Origin::Circle1)
    }

    /// Filtration level `p = maslov - q`.
    pub fn level(&self) -> i64 {
        self.maslov - self.q()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositeFloerData {
    pub left: KnotFloerData,
    pub right: KnotFloerData,
    #[serde(rename = "chern_N")]
    pub chern_n: u32,
    #[serde(with = "rational_text")]
    pub alpha: Q,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub braid: Option<BraidWord>,
    pub strata_generators: Vec<CompositeGenerator>,
}

impl CompositeFloerData {
    pub fn len(&self) -> usize {
        self.strata_generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata_generators.is_empty()
    }

    pub fn name(&self) -> String {
        format!("{} # {}", self.left.name, self.right.name)
    }

    pub fn left_star(&self, i: usize) -> usize {
        i
    }

    pub fn star_right(&self, j: usize) -> usize {
        self.left.len() + j
    }

    /// Index of `(ρ₁⋆ρ₂)_q`.
    pub fn circle(&self, i: usize, j: usize, q: usize) -> usize {
        self.left.len() + self.right.len() + 2 * (i * self.right.len() + j) + q
    }

    pub fn maslovs(&self) -> Vec<i64> {
        self.strata_generators.iter().map(|g| g.maslov).collect()
    }

    pub fn levels(&self) -> Vec<i64> {
        self.strata_generators.iter().map(CompositeGenerator::level).collect()
    }
}

/// Strata generators and gradings of `K₁ # K₂`, with `N = gcd(N₁, N₂)` and
/// `α = (α₁N₁ + α₂N₂)/N`.
pub fn compose(k1: &KnotFloerData, k2: &KnotFloerData) -> Result<CompositeFloerData, FloerError> {
    k1.validate()?;
    k2.validate()?;
    let chern_n = k1.chern_n.gcd(&k2.chern_n);
    let alpha = (k1.alpha * Q::from(k1.chern_n as i64) + k2.alpha * Q::from(k2.chern_n as i64)) / Q::from(chern_n as i64);
    let mut gens = Vec::with_capacity(k1.len() + k2.len() + 2 * k1.len() * k2.len());
    for (i, g) in k1.generators.iter().enumerate() {
        gens.push(CompositeGenerator {
            id: format!("{}*s", g.id),
            origin: Origin::LeftStar,
            maslov: g.maslov_lift,
            left: Some(i),
            right: None,
        });
    }
    for (j, g) in k2.generators.iter().enumerate() {
        gens.push(CompositeGenerator {
            id: format!("s*{}", g.id),
            origin: Origin::StarRight,
            maslov: g.maslov_lift,
            left: None,
            right: Some(j),
        });
    }
    for (i, a) in k1.generators.iter().enumerate() {
        for (j, b) in k2.generators.iter().enumerate() {
            for (q, origin) in [(0, Origin::Circle0), (1, Origin::Circle1)] {
                gens.push(CompositeGenerator {
                    id: format!("({}*{}){q}", a.id, b.id),
                    origin,
                    maslov: a.maslov_lift + b.maslov_lift + q,
                    left: Some(i),
                    right: Some(j),
                });
            }
        }
    }
    let braid = match (&k1.braid, &k2.braid) {
        (Some(b1), Some(b2)) => connected_sum(b1, b2).ok(),
        _ => None,
    };
    Ok(CompositeFloerData { left: k1.clone(), right: k2.clone(), chern_n, alpha, braid, strata_generators: gens })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floer::data::FloerGenerator;
    use crate::floer::packages;

    #[test]
    fn trefoil_twice() {
        let t = packages::trefoil();
        let c = compose(&t, &t).unwrap();
        let got: Vec<(Origin, i64)> = c.strata_generators.iter().map(|g| (g.origin, g.maslov)).collect();
        assert_eq!(
            got,
            vec![(Origin::LeftStar, 1), (Origin::StarRight, 1), (Origin::Circle0, 2), (Origin::Circle1, 3)]
        );
        assert_eq!(c.levels(), vec![1, 1, 2, 2]);
        assert_eq!(c.braid.as_ref().unwrap().to_string(), "s1^3 s2^3 @3");
    }

    #[test]
    fn unknot_is_a_unit() {
        let u = packages::unknot();
        let t = packages::figure_eight();
        let c = compose(&u, &t).unwrap();
        assert_eq!(c.maslovs(), t.lifts());
        assert!(c.strata_generators.iter().all(|g| g.origin == Origin::StarRight));
    }

    #[test]
    fn counting_and_constants() {
        let mut k1 = KnotFloerData::empty("a", None, 4, Q::new(1, 3));
        k1.generators = (0..2).map(|i| FloerGenerator { id: format!("a{i}"), action: Q::new(i, 5), maslov_lift: i }).collect();
        k1.normalize();
        let mut k2 = KnotFloerData::empty("b", None, 6, Q::new(1, 2));
        k2.generators = (0..3).map(|i| FloerGenerator { id: format!("b{i}"), action: Q::new(i, 7), maslov_lift: 2 * i }).collect();
        k2.normalize();
        let c = compose(&k1, &k2).unwrap();
        assert_eq!(c.len(), 2 + 3 + 2 * 6);
        assert_eq!(c.chern_n, 2);
        // (4/3 + 3)/2
        assert_eq!(c.alpha, Q::new(13, 6));
        let g = &c.strata_generators[c.circle(1, 2, 1)];
        assert_eq!((g.left, g.right, g.maslov), (Some(1), Some(2), 1 + 4 + 1));
    }
}
