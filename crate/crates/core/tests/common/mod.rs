#![allow(dead_code)]

use nisim::BinaryCode;
use proptest::collection::vec;
use proptest::prelude::*;

/// A nonempty code with a nonempty complement, in dimension `n`.
pub fn code_in(n: u32) -> impl Strategy<Value = BinaryCode> {
    vec(any::<bool>(), 1usize << n)
        .prop_filter("nonempty, not full", |m| m.iter().any(|&b| b) && !m.iter().all(|&b| b))
        .prop_map(move |m| {
            let words = m.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64);
            BinaryCode::new(n, words).unwrap()
        })
}

/// Two proper codes of a common dimension drawn from `dims`.
pub fn code_pair(dims: std::ops::RangeInclusive<u32>) -> impl Strategy<Value = (BinaryCode, BinaryCode)> {
    dims.prop_flat_map(|n| (code_in(n), code_in(n)))
}

pub fn rel_close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
}

pub fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Average distance by explicit double loop.
pub fn brute_average(a: &BinaryCode, b: &BinaryCode) -> f64 {
    let total: u64 = a
        .words()
        .iter()
        .flat_map(|x| b.words().iter().map(move |y| (x ^ y).count_ones() as u64))
        .sum();
    total as f64 / (a.len() * b.len()) as f64
}
