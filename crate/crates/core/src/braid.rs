//! Braid words, closure combinatorics, and the moves used to build composite
//! knots from braid presentations.
//!
//! A letter `+i` is the generator `σ_i` and `-i` is `σ_i⁻¹`. The text form is
//! a whitespace-separated list of `s<i>` tokens with optional `^<k>` powers
//! and an optional trailing `@<n>` strand override, e.g. `s1 s2^-1 s3^3 @4`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("generator index 0 at byte {pos}")]
    ZeroIndex { pos: usize },
    #[error("generator index {index} needs at least {} strands, but {strands} declared", index + 1)]
    IndexOutOfRange { index: u32, strands: u32 },
    #[error("a braid needs at least 2 strands, got {0}")]
    TooFewStrands(u32),
    #[error("shift by {shift} onto {new_strands} strands cannot host a braid on {strands} strands")]
    ShiftTooSmall { shift: u32, strands: u32, new_strands: u32 },
    #[error("strand counts differ: {0} vs {1}")]
    StrandMismatch(u32, u32),
    #[error("closure has {0} components, expected a knot")]
    NotAKnot(usize),
}

/// A word in the braid generators on a fixed number of strands.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: u32,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: u32, letters: Vec<i32>) -> Result<Self, BraidError> {
        if strands < 2 {
            return Err(BraidError::TooFewStrands(strands));
        }
        for &e in &letters {
            let index = e.unsigned_abs();
            if index == 0 {
                return Err(BraidError::ZeroIndex { pos: 0 });
            }
            if index >= strands {
                return Err(BraidError::IndexOutOfRange { index, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: u32) -> Result<Self, BraidError> {
        Self::new(strands, Vec::new())
    }

    pub fn strands(&self) -> u32 {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|&e| i64::from(e.signum())).sum()
    }

    /// Word read right to left with every letter inverted.
    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&e| -e).collect(),
        }
    }

    /// Mirror image: every crossing flipped.
    pub fn mirror(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().map(|&e| -e).collect(),
        }
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        if self.strands != other.strands {
            return Err(BraidError::StrandMismatch(self.strands, other.strands));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }

    /// Cancels adjacent `σ_i σ_i⁻¹` pairs until none remain. Never applied
    /// implicitly by the other operations.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<i32> = Vec::with_capacity(self.letters.len());
        for &e in &self.letters {
            if out.last() == Some(&-e) {
                out.pop();
            } else {
                out.push(e);
            }
        }
        BraidWord { strands: self.strands, letters: out }
    }

    /// Number of letters acting on the strand pair `(i, i+1)`, for `i` in `1..strands`.
    pub fn column_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.strands as usize - 1];
        for &e in &self.letters {
            counts[e.unsigned_abs() as usize - 1] += 1;
        }
        counts
    }
}

impl fmt::Display for BraidWord {
    /// Canonical form: runs of equal letters compressed to `^k`, strand count
    /// always emitted as `@n`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        while i < self.letters.len() {
            let e = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == e {
                run += 1;
            }
            let power = run as i64 * i64::from(e.signum());
            if power == 1 {
                write!(f, "s{} ", e.unsigned_abs())?;
            } else {
                write!(f, "s{}^{} ", e.unsigned_abs(), power)?;
            }
            i += run;
        }
        write!(f, "@{}", self.strands)
    }
}

impl std::str::FromStr for BraidWord {
    type Err = BraidError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_braid(s)
    }
}

impl Serialize for BraidWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BraidWord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_braid(&text).map_err(serde::de::Error::custom)
    }
}

struct Token<'a> {
    pos: usize,
    text: &'a str,
}

fn tokens(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token { pos: s, text: &text[s..i] });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token { pos: s, text: &text[s..] });
    }
    out
}

fn parse_int(text: &str, pos: usize, signed: bool) -> Result<i64, BraidError> {
    let digits = if signed { text.strip_prefix(['-', '+']).unwrap_or(text) } else { text };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(BraidError::Syntax { pos, msg: format!("expected an integer, found {text:?}") });
    }
    text.parse::<i64>()
        .map_err(|_| BraidError::Syntax { pos, msg: format!("integer out of range: {text:?}") })
}

/// Parses the braid-word text grammar.
///
/// `word := item+ ['@' INT] | '@' INT`, `item := 's' INT ('^' SIGNEDINT)?`.
/// Without `@n` the strand count is one more than the largest generator index.
pub fn parse_braid(text: &str) -> Result<BraidWord, BraidError> {
    let toks = tokens(text);
    if toks.is_empty() {
        return Err(BraidError::Syntax { pos: 0, msg: "empty braid word".into() });
    }
    let mut letters = Vec::new();
    let mut declared: Option<(u32, usize)> = None;
    let mut max_index = 0u32;
    for (k, tok) in toks.iter().enumerate() {
        if let Some(rest) = tok.text.strip_prefix('@') {
            if k + 1 != toks.len() {
                return Err(BraidError::Syntax {
                    pos: tok.pos,
                    msg: "strand override must be the last token".into(),
                });
            }
            let n = parse_int(rest, tok.pos + 1, false)?;
            let n = u32::try_from(n)
                .map_err(|_| BraidError::Syntax { pos: tok.pos + 1, msg: "strand count too large".into() })?;
            declared = Some((n, tok.pos));
            continue;
        }
        let Some(body) = tok.text.strip_prefix('s') else {
            return Err(BraidError::Syntax {
                pos: tok.pos,
                msg: format!("expected a generator like s1, found {:?}", tok.text),
            });
        };
        let (index_text, power) = match body.split_once('^') {
            Some((idx, pow)) => (idx, parse_int(pow, tok.pos + 2 + idx.len(), true)?),
            None => (body, 1),
        };
        let index = parse_int(index_text, tok.pos + 1, false)?;
        if index == 0 {
            return Err(BraidError::ZeroIndex { pos: tok.pos });
        }
        let index = i32::try_from(index)
            .map_err(|_| BraidError::Syntax { pos: tok.pos + 1, msg: "generator index too large".into() })?;
        max_index = max_index.max(index as u32);
        let letter = if power < 0 { -index } else { index };
        for _ in 0..power.unsigned_abs() {
            letters.push(letter);
        }
    }
    let strands = match declared {
        Some((n, _)) => n,
        None => max_index + 1,
    };
    if strands < 2 {
        return Err(BraidError::TooFewStrands(strands));
    }
    if max_index >= strands {
        return Err(BraidError::IndexOutOfRange { index: max_index, strands });
    }
    Ok(BraidWord { strands, letters })
}

/// Permutation and component data of a braid closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureInfo {
    /// `permutation[k]` is the (1-based) bottom position of the strand that starts at top position `k + 1`.
    pub permutation: Vec<u32>,
    pub components: usize,
    pub exponent_sum: i64,
}

impl ClosureInfo {
    pub fn is_knot(&self) -> bool {
        self.components == 1
    }
}

pub fn closure_info(b: &BraidWord) -> ClosureInfo {
    let n = b.strands as usize;
    // position[s] = current position of the strand that started at s
    let mut at: Vec<usize> = (0..n).collect();
    for &e in &b.letters {
        let i = e.unsigned_abs() as usize - 1;
        at.swap(i, i + 1);
    }
    // at[p] = starting strand now at position p
    let mut permutation = vec![0u32; n];
    for (p, &s) in at.iter().enumerate() {
        permutation[s] = p as u32 + 1;
    }
    let mut seen = vec![false; n];
    let mut components = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        components += 1;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = permutation[k] as usize - 1;
        }
    }
    ClosureInfo { permutation, components, exponent_sum: b.exponent_sum() }
}

pub fn require_knot(b: &BraidWord) -> Result<ClosureInfo, BraidError> {
    let info = closure_info(b);
    if info.is_knot() {
        Ok(info)
    } else {
        Err(BraidError::NotAKnot(info.components))
    }
}

/// Shift map: every letter `±i` becomes `±(i+k)` on `new_strands` strands.
pub fn shift(b: &BraidWord, k: u32, new_strands: u32) -> Result<BraidWord, BraidError> {
    if new_strands < b.strands + k {
        return Err(BraidError::ShiftTooSmall { shift: k, strands: b.strands, new_strands });
    }
    let k = k as i32;
    let letters = b.letters.iter().map(|&e| if e > 0 { e + k } else { e - k }).collect();
    BraidWord::new(new_strands, letters)
}

/// Braid of the connected sum: `b1 · Σ^{n-1}(b2)` on `n + m - 1` strands.
pub fn connected_sum(b1: &BraidWord, b2: &BraidWord) -> Result<BraidWord, BraidError> {
    require_knot(b1)?;
    require_knot(b2)?;
    let strands = b1.strands + b2.strands - 1;
    let mut letters = b1.letters.clone();
    letters.extend(shift(b2, b1.strands - 1, strands)?.letters);
    BraidWord::new(strands, letters)
}

/// Markov conjugation `x⁻¹ · b · x`. No free reduction is applied.
pub fn markov_conjugate(b: &BraidWord, x: &BraidWord) -> Result<BraidWord, BraidError> {
    if b.strands != x.strands {
        return Err(BraidError::StrandMismatch(b.strands, x.strands));
    }
    x.inverse().concat(b)?.concat(x)
}

/// Markov stabilization: append `σ_n` and add one strand.
pub fn markov_stabilize(b: &BraidWord) -> BraidWord {
    let mut letters = b.letters.clone();
    letters.push(b.strands as i32);
    BraidWord { strands: b.strands + 1, letters }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> BraidWord {
        parse_braid(text).unwrap()
    }

    #[test]
    fn parses_powers_and_infers_strands() {
        let b = w("s1^3");
        assert_eq!(b.strands(), 2);
        assert_eq!(b.letters(), &[1, 1, 1]);

        let b = w("s1 s2^-1 s1 s2^-1 s3^3");
        assert_eq!(b.strands(), 4);
        assert_eq!(b.letters(), &[1, -2, 1, -2, 3, 3, 3]);
    }

    #[test]
    fn rejects_bad_words() {
        assert!(matches!(parse_braid("s3 @3"), Err(BraidError::IndexOutOfRange { index: 3, strands: 3 })));
        assert!(matches!(parse_braid("s0"), Err(BraidError::ZeroIndex { pos: 0 })));
        assert!(matches!(parse_braid("s1 t2"), Err(BraidError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_braid("s1^x"), Err(BraidError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_braid("@3 s1"), Err(BraidError::Syntax { pos: 0, .. })));
        assert!(parse_braid("").is_err());
        assert!(parse_braid("@1").is_err());
    }

    #[test]
    fn empty_word_needs_override() {
        let b = w("@3");
        assert!(b.is_empty());
        assert_eq!(b.strands(), 3);
        assert_eq!(b.to_string(), "@3");
    }

    #[test]
    fn printer_compresses_runs() {
        assert_eq!(w("s1 s2^-1 s1 s2^-1 s3^3").to_string(), "s1 s2^-1 s1 s2^-1 s3^3 @4");
        assert_eq!(w("s2^-1 s2^-1 s1").to_string(), "s2^-2 s1 @3");
    }

    #[test]
    fn closure_examples() {
        let c = closure_info(&w("s1^3"));
        assert_eq!(c.permutation, vec![2, 1]);
        assert_eq!(c.components, 1);
        assert_eq!(c.exponent_sum, 3);

        let c = closure_info(&w("@3"));
        assert_eq!(c.permutation, vec![1, 2, 3]);
        assert_eq!(c.components, 3);

        assert_eq!(closure_info(&w("s1 s2^-1 s1 s2^-1 s3^3")).components, 1);
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&w("s1^3"), 2, 4).unwrap(), w("s3^3 @4"));
        let b = w("s1 s2^-1");
        assert_eq!(shift(&b, 0, b.strands()).unwrap(), b);
        assert!(matches!(shift(&w("s1"), 1, 2), Err(BraidError::ShiftTooSmall { .. })));
    }

    #[test]
    fn connected_sum_examples() {
        let sum = connected_sum(&w("s1 s2^-1 s1 s2^-1"), &w("s1^3")).unwrap();
        assert_eq!(sum, w("s1 s2^-1 s1 s2^-1 s3^3"));
        assert_eq!(sum.strands(), 4);
        assert_eq!(connected_sum(&w("s1^3"), &w("s1^3")).unwrap(), w("s1^3 s2^3"));
        assert_eq!(connected_sum(&w("@3"), &w("s1^3")), Err(BraidError::NotAKnot(3)));
    }

    #[test]
    fn conjugation_examples() {
        let b = w("s1^3");
        let c = markov_conjugate(&b, &w("s1")).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.free_reduce(), b);
        assert_eq!(markov_conjugate(&b, &w("@2")).unwrap(), b);
        let c = markov_conjugate(&w("s1 s2"), &w("s1 @3")).unwrap();
        assert_eq!(c.letters(), &[-1, 1, 2, 1]);
        assert_eq!(c.free_reduce(), w("s2 s1"));
        assert!(matches!(markov_conjugate(&w("s1 s2"), &w("s1")), Err(BraidError::StrandMismatch(3, 2))));
    }

    #[test]
    fn stabilization_examples() {
        assert_eq!(markov_stabilize(&w("s1^3")), w("s1^3 s2"));
        let s = markov_stabilize(&w("@2"));
        assert_eq!(s, w("s2 @3"));
        assert_eq!(closure_info(&s).components, 2);
    }
}
