//! Distance distributions, enumerators and their duals.

mod average;

pub use average::{
    chang_bound, cross_distance_bounds, fwy_lower_bound, psi, psi_bound, AvgDistanceBounds,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::cube::BinaryCode;
use crate::error::{invalid, Error, Result};
use crate::fourier::{self, level_sums, FourierSpectrum, MAX_TRANSFORM_DIM};

/// Above this many pairs the distance distribution goes through the transform.
pub const PAIRWISE_LIMIT: u128 = 1 << 26;

fn check_same_dim(a: &BinaryCode, b: &BinaryCode) -> Result<u32> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(a.n())
}

/// `Σ_i c_i z^i`.
fn horner(coeffs: &[f64], z: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

/// Distribution of the Hamming distance between independent uniform picks
/// from two codes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceDistribution {
    n: u32,
    counts: Vec<u64>,
    p: Vec<f64>,
}

impl DistanceDistribution {
    pub fn from_counts(n: u32, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != n as usize + 1 {
            return Err(invalid(format!(
                "expected {} distance counts, got {}",
                n + 1,
                counts.len()
            )));
        }
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(invalid("distance counts are all zero"));
        }
        let p = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Ok(Self { n, counts, p })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Pair counts per distance; they sum to `|A||B|`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total_pairs(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// Generating function at any real `z`; callers needing the checked
    /// enumerator use [`distance_enumerator`].
    pub fn generating_fn(&self, z: f64) -> f64 {
        horner(&self.p, z)
    }

    /// `D(A, B)`, the first moment.
    pub fn average(&self) -> f64 {
        distance_moment(self, 1)
    }
}

/// `P^(A,B)`; pairwise popcount for small pair counts, exact transform path
/// otherwise.
pub fn distance_distribution(a: &BinaryCode, b: &BinaryCode) -> Result<DistanceDistribution> {
    let n = check_same_dim(a, b)?;
    let pairs = a.len() as u128 * b.len() as u128;
    if pairs > PAIRWISE_LIMIT && n <= MAX_TRANSFORM_DIM {
        distance_distribution_transform(a, b)
    } else {
        distance_distribution_pairwise(a, b)
    }
}

pub fn distance_distribution_pairwise(
    a: &BinaryCode,
    b: &BinaryCode,
) -> Result<DistanceDistribution> {
    let n = check_same_dim(a, b)?;
    let bins = n as usize + 1;
    let tally = |mut acc: Vec<u64>, x: &u64| {
        for &y in b.words() {
            acc[(x ^ y).count_ones() as usize] += 1;
        }
        acc
    };
    let counts = if a.len() * b.len() > 1 << 16 {
        a.words()
            .par_iter()
            .fold(|| vec![0u64; bins], tally)
            .reduce(
                || vec![0u64; bins],
                |mut l, r| {
                    l.iter_mut().zip(r).for_each(|(x, y)| *x += y);
                    l
                },
            )
    } else {
        a.words().iter().fold(vec![0u64; bins], tally)
    };
    DistanceDistribution::from_counts(n, counts)
}

pub fn distance_distribution_transform(
    a: &BinaryCode,
    b: &BinaryCode,
) -> Result<DistanceDistribution> {
    let counts = fourier::pair_distance_counts(a, b)?;
    DistanceDistribution::from_counts(a.n(), counts)
}

/// `D_k(A,B) = Σ_i P(i) i^k`.
pub fn distance_moment(dist: &DistanceDistribution, k: u32) -> f64 {
    dist.p
        .iter()
        .enumerate()
        .map(|(i, &p)| p * (i as f64).powi(k as i32))
        .sum()
}

/// `Γ_z(A,B) = Σ_i P(i) z^i` for `z ≥ 0`.
pub fn distance_enumerator(dist: &DistanceDistribution, z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(invalid(format!("enumerator argument {z} must be nonnegative")));
    }
    Ok(dist.generating_fn(z))
}

/// The signed dual distance distribution `Q^(A,B)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualDistribution {
    n: u32,
    q: Vec<f64>,
}

impl DualDistribution {
    pub fn new(n: u32, q: Vec<f64>) -> Result<Self> {
        if q.len() != n as usize + 1 {
            return Err(invalid(format!("expected {} dual entries, got {}", n + 1, q.len())));
        }
        Ok(Self { n, q })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }
}

/// `Q^(A,B)(k) = (1/4ab) Σ_{|S|=k} f̂_S ĝ_S` for `k ≥ 1`, `Q(0) = 1`.
pub fn dual_distribution(a: &BinaryCode, b: &BinaryCode) -> Result<DualDistribution> {
    check_same_dim(a, b)?;
    let f = FourierSpectrum::of(a)?;
    let g = FourierSpectrum::of(b)?;
    dual_from_spectra(&f, &g)
}

pub fn dual_from_spectra(f: &FourierSpectrum, g: &FourierSpectrum) -> Result<DualDistribution> {
    let levels = level_sums(f, g)?;
    let scale = 4.0 * f.density() * g.density();
    let mut q: Vec<f64> = levels.sums().iter().map(|s| s / scale).collect();
    q[0] = 1.0;
    DualDistribution::new(f.n(), q)
}

/// `Π_z(A,B) = Σ_i Q(i) z^i`. Defined for every real `z`; the MacWilliams
/// transforms evaluate it at negative arguments when `z > 1`.
pub fn dual_enumerator(dual: &DualDistribution, z: f64) -> f64 {
    horner(&dual.q, z)
}

/// Both sides of an identity, for test harnesses.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentitySides {
    pub lhs: f64,
    pub rhs: f64,
}

impl IdentitySides {
    /// `|lhs − rhs| / max(1, |lhs|)`.
    pub fn relative_gap(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.lhs.abs().max(1.0)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.relative_gap() <= tol
    }
}

/// `Π_z = (1+z)^n Γ_{(1−z)/(1+z)}`.
pub fn macwilliams_forward(a: &BinaryCode, b: &BinaryCode, z: f64) -> Result<IdentitySides> {
    let dist = distance_distribution(a, b)?;
    let dual = dual_distribution(a, b)?;
    Ok(macwilliams_forward_from(&dist, &dual, z))
}

pub fn macwilliams_forward_from(
    dist: &DistanceDistribution,
    dual: &DualDistribution,
    z: f64,
) -> IdentitySides {
    let lhs = dual_enumerator(dual, z);
    let rhs = (1.0 + z).powi(dist.n as i32) * dist.generating_fn((1.0 - z) / (1.0 + z));
    IdentitySides { lhs, rhs }
}

/// `Γ_z = ((1+z)/2)^n Π_{(1−z)/(1+z)}`.
pub fn macwilliams_inverse(a: &BinaryCode, b: &BinaryCode, z: f64) -> Result<IdentitySides> {
    let dist = distance_distribution(a, b)?;
    let dual = dual_distribution(a, b)?;
    Ok(macwilliams_inverse_from(&dist, &dual, z))
}

pub fn macwilliams_inverse_from(
    dist: &DistanceDistribution,
    dual: &DualDistribution,
    z: f64,
) -> IdentitySides {
    let lhs = dist.generating_fn(z);
    let rhs = ((1.0 + z) / 2.0).powi(dist.n as i32) * dual_enumerator(dual, (1.0 - z) / (1.0 + z));
    IdentitySides { lhs, rhs }
}
