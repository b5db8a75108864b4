#![allow(dead_code)]

use knotfloer::braid::{require_knot, BraidWord};
use rand::Rng;

/// Random braid whose closure is a knot, on at most `max_strands` strands
/// with at most `max_len` letters.
pub fn random_knot_braid<R: Rng>(rng: &mut R, max_strands: u32, max_len: usize) -> BraidWord {
    loop {
        let strands = rng.random_range(2..=max_strands);
        let len = rng.random_range(1..=max_len);
        let letters: Vec<i32> = (0..len)
            .map(|_| {
                let i = rng.random_range(1..strands as i32);
                if rng.random_bool(0.5) {
                    i
                } else {
                    -i
                }
            })
            .collect();
        let b = BraidWord::new(strands, letters).unwrap();
        if require_knot(&b).is_ok() {
            return b;
        }
    }
}
