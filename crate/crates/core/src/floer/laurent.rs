//! Poincaré–Laurent polynomials of pages.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::homalg::{Direction, Page};

/// Finitely supported integer Laurent polynomial in `t`; zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "BTreeMap<i64, i64>", into = "BTreeMap<i64, i64>")]
pub struct LaurentPoly {
    coefficients: BTreeMap<i64, i64>,
}

impl From<BTreeMap<i64, i64>> for LaurentPoly {
    fn from(m: BTreeMap<i64, i64>) -> Self {
        LaurentPoly::from_terms(m)
    }
}

impl From<LaurentPoly> for BTreeMap<i64, i64> {
    fn from(p: LaurentPoly) -> Self {
        p.coefficients
    }
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(exponent: i64, coefficient: i64) -> Self {
        Self::from_terms([(exponent, coefficient)])
    }

    /// Sums the terms, dropping whatever cancels.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut coefficients = BTreeMap::new();
        for (e, c) in terms {
            *coefficients.entry(e).or_insert(0) += c;
        }
        coefficients.retain(|_, c| *c != 0);
        LaurentPoly { coefficients }
    }

    pub fn coefficients(&self) -> &BTreeMap<i64, i64> {
        &self.coefficients
    }

    pub fn coefficient(&self, exponent: i64) -> i64 {
        self.coefficients.get(&exponent).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Value at `t = 1`.
    pub fn mass(&self) -> i64 {
        self.coefficients.values().sum()
    }

    /// Value at `t = -1`.
    pub fn at_minus_one(&self) -> i64 {
        self.coefficients.iter().map(|(e, c)| if e.rem_euclid(2) == 0 { *c } else { -c }).sum()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.coefficients.iter().chain(&rhs.coefficients).map(|(&e, &c)| (e, c)))
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let neg = rhs.coefficients.iter().map(|(&e, &c)| (e, -c));
        LaurentPoly::from_terms(self.coefficients.iter().map(|(&e, &c)| (e, c)).chain(neg))
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.coefficients
                .iter()
                .flat_map(|(&a, &x)| rhs.coefficients.iter().map(move |(&b, &y)| (a + b, x * y))),
        )
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (&e, &c)) in self.coefficients.iter().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            match (k, c < 0) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                _ => write!(f, " {sign} ")?,
            }
            let a = c.abs();
            match e {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    match e {
                        1 => write!(f, "t")?,
                        _ => write!(f, "t^{e}")?,
                    }
                }
            }
        }
        Ok(())
    }
}

/// `P(E^r, t)`: free ranks at each Laurent exponent of the page.
pub fn laurent(page: &Page) -> LaurentPoly {
    LaurentPoly::from_terms(page.exponent_ranks())
}

pub fn euler(p: &LaurentPoly) -> i64 {
    p.at_minus_one()
}

/// Exponent shift of every differential on page `r`: `2N·r - 1` along the
/// lift filtration (step `2N`), `-1` along the Maslov filtration.
pub fn page_shift(page: &Page) -> i64 {
    match page.direction {
        Direction::Decreasing => page.step as i64 * page.r as i64 - 1,
        Direction::Increasing => -1,
    }
}

/// Checks `P(E^r) = (1 + t^Δ)·P(B^r) + P(E^{r+1})` with `B^r` the image of
/// `d^r`, graded at its source, and `Δ` from [`page_shift`].
pub fn recursion_check(page: &Page, next: &Page) -> Result<(), String> {
    let shift = page_shift(page);
    if let Some(d) = page.differentials.iter().find(|d| d.target_exponent - d.source_exponent != shift) {
        return Err(format!(
            "d^{} from exponent {} to {} does not shift by {shift}",
            page.r, d.source_exponent, d.target_exponent
        ));
    }
    let b = LaurentPoly::from_terms(page.image_ranks());
    let factor = &LaurentPoly::monomial(0, 1) + &LaurentPoly::monomial(shift, 1);
    let rhs = &(&factor * &b) + &laurent(next);
    let lhs = laurent(page);
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("page {}: P(E) = {lhs}, (1 + t^{shift})·P(B) + P(E next) = {rhs}", page.r))
    }
}
