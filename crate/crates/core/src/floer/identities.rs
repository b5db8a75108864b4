//! Exact identity checks on computed page sequences.

use serde::{Deserialize, Serialize};

use super::composite::CompositeFloerData;
use super::data::KnotFloerData;
use super::laurent::{euler, laurent, recursion_check};
use crate::braid::BraidWord;
use crate::homalg::{Page, SpectralSequence};
use crate::invariants::signature;

pub const RECURSION: &str = "poincare-laurent-recursion";
pub const EULER_CONSTANT: &str = "euler-constant-across-pages";
pub const EULER_ADDITIVE: &str = "euler-additive-under-sum";
pub const SIGNATURE_ADDITIVE: &str = "signature-additive-under-sum";
pub const EULER_HALF_SIGNATURE: &str = "euler-equals-half-signature";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The check needs data the instance does not carry, such as a braid.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    /// True when no check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, ok: Result<String, String>) {
        let (status, detail) = match ok {
            Ok(d) => (Status::Pass, d),
            Err(d) => (Status::Fail, d),
        };
        self.checks.push(IdentityCheck { name: name.into(), status, detail });
    }

    fn skip(&mut self, name: &str, why: &str) {
        self.checks.push(IdentityCheck { name: name.into(), status: Status::Skipped, detail: why.into() });
    }
}

/// `E¹`, or the last page when the sequence is shorter.
pub fn first_page(ss: &SpectralSequence) -> &Page {
    &ss.pages[1.min(ss.pages.len() - 1)]
}

fn recursion(ss: &SpectralSequence) -> Result<String, String> {
    for w in ss.pages.windows(2) {
        recursion_check(&w[0], &w[1])?;
    }
    let moved = ss.pages.iter().filter(|p| !p.differentials_vanish()).count();
    Ok(format!("{} pages, {moved} with a nonzero differential", ss.pages.len()))
}

fn constancy(ss: &SpectralSequence) -> Result<String, String> {
    let chis: Vec<i64> = ss.pages.iter().map(|p| euler(&laurent(p))).collect();
    if chis.windows(2).all(|w| w[0] == w[1]) {
        Ok(format!("χ = {}", chis[0]))
    } else {
        Err(format!("χ per page: {chis:?}"))
    }
}

fn half_signature(report: &mut IdentityReport, braid: Option<&BraidWord>, chi: i64) {
    match braid.map(signature) {
        None => report.skip(EULER_HALF_SIGNATURE, "no braid attached"),
        Some(Err(e)) => report.push(EULER_HALF_SIGNATURE, Err(format!("signature unavailable: {e}"))),
        Some(Ok(s)) => report.push(
            EULER_HALF_SIGNATURE,
            if 2 * chi == s { Ok(format!("χ = {chi}, signature = {s}")) } else { Err(format!("χ = {chi}, signature = {s}")) },
        ),
    }
}

/// Recursion, constancy of χ, and `χ = ½·signature` for one knot's pages.
pub fn check_knot(k: &KnotFloerData, ss: &SpectralSequence) -> IdentityReport {
    let mut report = IdentityReport::default();
    report.push(RECURSION, recursion(ss));
    report.push(EULER_CONSTANT, constancy(ss));
    half_signature(&mut report, k.braid.as_ref(), euler(&laurent(first_page(ss))));
    report
}

/// The single-knot checks on the composite pages, plus additivity of `χ(E¹)`
/// and of the signature against the factors' own pages.
pub fn check_composite(
    c: &CompositeFloerData,
    ss: &SpectralSequence,
    left: &SpectralSequence,
    right: &SpectralSequence,
) -> IdentityReport {
    let mut report = IdentityReport::default();
    report.push(RECURSION, recursion(ss));
    report.push(EULER_CONSTANT, constancy(ss));
    let chi = euler(&laurent(first_page(ss)));
    let (a, b) = (euler(&laurent(first_page(left))), euler(&laurent(first_page(right))));
    let detail = format!("χ = {chi}, χ₁ + χ₂ = {a} + {b}");
    report.push(EULER_ADDITIVE, if chi == a + b { Ok(detail) } else { Err(detail) });
    match (&c.left.braid, &c.right.braid, &c.braid) {
        (Some(b1), Some(b2), Some(b)) => {
            let sig = |w: &BraidWord| signature(w).map_err(|e| e.to_string());
            report.push(
                SIGNATURE_ADDITIVE,
                match (sig(b), sig(b1), sig(b2)) {
                    (Ok(s), Ok(s1), Ok(s2)) if s == s1 + s2 => Ok(format!("{s} = {s1} + {s2}")),
                    (Ok(s), Ok(s1), Ok(s2)) => Err(format!("{s} != {s1} + {s2}")),
                    (r, r1, r2) => Err(format!("signature unavailable: {:?}", [r, r1, r2])),
                },
            );
        }
        _ => report.skip(SIGNATURE_ADDITIVE, "no braid attached"),
    }
    half_signature(&mut report, c.braid.as_ref(), chi);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floer::{compose, packages, thm_a_spectral, thm_b_spectral, Q};

    #[test]
    fn trefoil_twice_passes_everything() {
        let t = packages::trefoil();
        let a = thm_a_spectral(&t, Q::from(0)).unwrap();
        let r = check_knot(&t, &a);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.get(EULER_HALF_SIGNATURE).unwrap().status, Status::Pass);
        let c = compose(&t, &t).unwrap();
        let b = thm_b_spectral(&c, None).unwrap();
        let r = check_composite(&c, &b, &a, &a);
        assert!(r.checks.iter().all(|c| c.status == Status::Pass), "{r:?}");
        assert_eq!(r.get(EULER_CONSTANT).unwrap().detail, "χ = -2");
    }

    #[test]
    fn wrong_euler_is_reported() {
        let mut t = packages::trefoil();
        t.braid = Some(crate::braid::parse_braid("s1^5").unwrap());
        let a = thm_a_spectral(&t, Q::from(0)).unwrap();
        let r = check_knot(&t, &a);
        assert!(!r.passed());
        assert_eq!(r.get(EULER_HALF_SIGNATURE).unwrap().status, Status::Fail);
        t.braid = None;
        assert_eq!(check_knot(&t, &a).get(EULER_HALF_SIGNATURE).unwrap().status, Status::Skipped);
    }
}
