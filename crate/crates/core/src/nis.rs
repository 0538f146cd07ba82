//! The doubly symmetric binary source and exact collision probabilities of
//! Boolean function pairs.

use serde::Serialize;

use crate::cube::BinaryCode;
use crate::distance::{distance_distribution, DistanceDistribution};
use crate::error::{invalid, Error, Result};
use crate::fourier::{level_sums, theta_from_levels, FourierSpectrum};

/// Largest dimension at which `collision_prob` also runs the spectral path.
pub const SPECTRAL_CHECK_DIM: u32 = 12;
/// Allowed disagreement between the distance and spectral paths.
pub const PATH_TOLERANCE: f64 = 1e-9;
/// Excursion outside the feasible range tolerated as rounding.
pub const PROB_SLACK: f64 = 1e-12;

/// `n` i.i.d. copies of a ±1 pair with uniform marginals and correlation ρ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DsbsInstance {
    rho: f64,
    n: u32,
}

impl DsbsInstance {
    pub fn new(rho: f64, n: u32) -> Result<Self> {
        check_rho(rho)?;
        if n == 0 {
            return Err(invalid("blocklength must be at least 1"));
        }
        Ok(Self { rho, n })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `P(X = x, Y = y)` for any fixed pair at Hamming distance `d`.
    pub fn pair_prob(&self, d: u32) -> f64 {
        ((1.0 - self.rho) / 4.0).powi(d as i32) * ((1.0 + self.rho) / 4.0).powi((self.n - d) as i32)
    }

    /// `pair_prob(d)` for `d = 0..=n`.
    pub fn pair_weights(&self) -> Vec<f64> {
        (0..=self.n).map(|d| self.pair_prob(d)).collect()
    }
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if !(rho.abs() <= 1.0) {
        return Err(invalid(format!("correlation {rho} must lie in [-1, 1]")));
    }
    Ok(())
}

fn check_dims(a: &BinaryCode, b: &BinaryCode) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(())
}

/// `q` from a distance distribution: `ab(1+ρ)^n Γ_{(1−ρ)/(1+ρ)}`, or direct
/// summation of the pair weights at `ρ = −1`.
pub fn collision_prob_from_distribution(
    dist: &DistanceDistribution,
    a: f64,
    b: f64,
    rho: f64,
) -> Result<f64> {
    check_rho(rho)?;
    let n = dist.n();
    if rho == -1.0 {
        let dsbs = DsbsInstance::new(rho, n)?;
        return Ok(dist
            .counts()
            .iter()
            .enumerate()
            .map(|(d, &c)| c as f64 * dsbs.pair_prob(d as u32))
            .sum());
    }
    let z = (1.0 - rho) / (1.0 + rho);
    Ok(a * b * (1.0 + rho).powi(n as i32) * dist.generating_fn(z))
}

/// `q` through the distance distribution.
pub fn collision_prob_distance_path(a: &BinaryCode, b: &BinaryCode, rho: f64) -> Result<f64> {
    check_dims(a, b)?;
    let dist = distance_distribution(a, b)?;
    collision_prob_from_distribution(&dist, a.density(), b.density(), rho)
}

/// `q = ab + θ_ρ` through the Fourier level sums.
pub fn collision_prob_spectral_path(a: &BinaryCode, b: &BinaryCode, rho: f64) -> Result<f64> {
    check_dims(a, b)?;
    check_rho(rho)?;
    let f = FourierSpectrum::of(a)?;
    let g = FourierSpectrum::of(b)?;
    let theta = theta_from_levels(&level_sums(&f, &g)?, rho)?;
    Ok(a.density() * b.density() + theta)
}

/// Checks `value ∈ [lo, hi]` up to [`PROB_SLACK`] and clamps.
pub(crate) fn clamp_checked(what: &str, value: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(value >= lo - PROB_SLACK && value <= hi + PROB_SLACK) {
        return Err(Error::NumericalConsistency(format!(
            "{what} = {value} outside [{lo}, {hi}]"
        )));
    }
    Ok(value.clamp(lo, hi))
}

/// `P(f(X) = g(Y) = 1)` for `f = 2·1_A − 1`, `g = 2·1_B − 1`. For
/// `n ≤ SPECTRAL_CHECK_DIM` the spectral path is evaluated as a cross-check.
pub fn collision_prob(a: &BinaryCode, b: &BinaryCode, rho: f64) -> Result<f64> {
    let q = collision_prob_distance_path(a, b, rho)?;
    if a.n() <= SPECTRAL_CHECK_DIM {
        let spectral = collision_prob_spectral_path(a, b, rho)?;
        if (q - spectral).abs() > PATH_TOLERANCE {
            return Err(Error::NumericalConsistency(format!(
                "distance path {q} and spectral path {spectral} disagree"
            )));
        }
    }
    clamp_checked("collision probability", q, 0.0, a.density().min(b.density()))
}

/// The four cell probabilities of `(f(X), g(Y))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JointCellProbs {
    pub a: f64,
    pub b: f64,
    pub q_pp: f64,
    pub q_pm: f64,
    pub q_mp: f64,
    pub q_mm: f64,
}

impl JointCellProbs {
    /// Cells from the marginals and `q = q_pp`.
    pub fn from_collision(a: f64, b: f64, q: f64) -> Self {
        Self {
            a,
            b,
            q_pp: q,
            q_pm: a - q,
            q_mp: b - q,
            q_mm: 1.0 - a - b + q,
        }
    }

    /// `θ_ρ = q − ab`.
    pub fn theta(&self) -> f64 {
        self.q_pp - self.a * self.b
    }

    pub fn cells(&self) -> [f64; 4] {
        [self.q_pp, self.q_pm, self.q_mp, self.q_mm]
    }
}

pub fn joint_cells(a: &BinaryCode, b: &BinaryCode, rho: f64) -> Result<JointCellProbs> {
    let q = collision_prob(a, b, rho)?;
    let cells = JointCellProbs::from_collision(a.density(), b.density(), q);
    for c in cells.cells() {
        clamp_checked("cell probability", c, 0.0, 1.0)?;
    }
    Ok(cells)
}

/// A target marginal rounded down to the dyadic grid of blocklength `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DyadicRounding {
    pub a_n: f64,
    /// `target − a_n`, at most `2^{−n}`.
    pub gap_bound: f64,
}

pub fn dyadic_round(target: f64, n: u32) -> Result<DyadicRounding> {
    if !(0.0..=1.0).contains(&target) {
        return Err(invalid(format!("target {target} must lie in [0, 1]")));
    }
    let scale = 2f64.powi(n as i32);
    let a_n = (target * scale).floor() / scale;
    Ok(DyadicRounding {
        a_n,
        gap_bound: target - a_n,
    })
}
