//! Randomized identity suite: every exact identity and inequality relating
//! distance distributions, enumerators, Fourier spectra and collision
//! probabilities, checked on seeded random code pairs.

use nisim::distance::{
    distance_distribution, distance_distribution_pairwise, distance_distribution_transform,
    distance_enumerator, distance_moment, dual_distribution, macwilliams_forward_from,
    macwilliams_inverse_from, DistanceDistribution,
};
use nisim::fourier::{level_sums, FourierSpectrum};
use nisim::nis::{collision_prob, collision_prob_distance_path, collision_prob_spectral_path};
use nisim::BinaryCode;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{CliError, Result, SCHEMA_VERSION};

/// Relative tolerance for identities.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Slack for inequalities between probabilities.
pub const INEQUALITY_SLACK: f64 = 1e-12;
/// Size of an injected perturbation for identities.
const IDENTITY_FAULT: f64 = 1e-6;
/// For inequalities the injected fault replaces the reference side `r` by
/// `r·(1 − f) − f` with `f = 1`, which no instance can satisfy.
const INEQUALITY_FAULT: f64 = 1.0;

pub const DEFAULT_DIMS: [u32; 4] = [4, 6, 8, 10];
pub const DEFAULT_TRIALS: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random code pairs per dimension.
    pub trials: usize,
    pub dims: Vec<u32>,
    /// Perturb one family's reference side, to exercise failure reporting.
    pub inject_fault: Option<String>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: DEFAULT_TRIALS,
            dims: DEFAULT_DIMS.to_vec(),
            inject_fault: None,
        }
    }
}

/// One random instance: a code pair and the evaluation points used by the
/// families that need them.
#[derive(Clone, Debug)]
pub struct Instance {
    pub a: BinaryCode,
    pub b: BinaryCode,
    pub z: f64,
    pub rho: f64,
}

/// A nonempty, non-full code of random density.
fn random_code(n: u32, rng: &mut ChaCha8Rng) -> Result<BinaryCode> {
    let size = 1u64 << n;
    let p: f64 = rng.gen_range(0.05..0.95);
    let mut member: Vec<bool> = (0..size).map(|_| rng.gen_bool(p)).collect();
    let pick = rng.gen_range(0..size) as usize;
    if member.iter().all(|&x| !x) {
        member[pick] = true;
    } else if member.iter().all(|&x| x) {
        member[pick] = false;
    }
    let words = (0..size).filter(|&w| member[w as usize]);
    Ok(BinaryCode::new(n, words)?)
}

/// Deterministic instances for `cfg`, ordered by dimension then trial.
pub fn instances(cfg: &VerifyConfig) -> Result<Vec<(u32, usize, Instance)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.dims.len() * cfg.trials);
    for &n in &cfg.dims {
        if !(1..=16).contains(&n) {
            return Err(CliError::Usage(format!("verification dimension {n} must lie in 1..=16")));
        }
        for trial in 0..cfg.trials {
            let a = random_code(n, &mut rng)?;
            let b = random_code(n, &mut rng)?;
            let z = rng.gen_range(0.05..3.0);
            let rho = rng.gen_range(-1.0..=1.0);
            out.push((n, trial, Instance { a, b, z, rho }));
        }
    }
    Ok(out)
}

/// `|x − y| / max(|x|, |y|, 1)`.
fn rel_err(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(1.0)
}

/// Moves `y` off its exact value when a fault is injected.
fn bump(y: f64, fault: f64) -> f64 {
    y * (1.0 + fault) + fault
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn dist(a: &BinaryCode, b: &BinaryCode) -> nisim::Result<DistanceDistribution> {
    distance_distribution(a, b)
}

type Check = fn(&Instance, f64) -> nisim::Result<f64>;

/// A named identity family: `check` returns an error measure that must not
/// exceed `tol`; `fault` is the perturbation applied when the family is
/// targeted by fault injection.
pub struct Family {
    pub name: &'static str,
    pub tol: f64,
    fault: f64,
    check: Check,
}

fn macwilliams_round_trip(x: &Instance, fault: f64) -> nisim::Result<f64> {
    let d = dist(&x.a, &x.b)?;
    let q = dual_distribution(&x.a, &x.b)?;
    let fwd = macwilliams_forward_from(&d, &q, x.z);
    let inv = macwilliams_inverse_from(&d, &q, x.z);
    // transform Γ to Π and back, touching only the generating function
    let n = x.a.n() as i32;
    let pi = |y: f64| (1.0 + y).powi(n) * d.generating_fn((1.0 - y) / (1.0 + y));
    let back = ((1.0 + x.z) / 2.0).powi(n) * pi((1.0 - x.z) / (1.0 + x.z));
    Ok(rel_err(fwd.lhs, bump(fwd.rhs, fault))
        .max(rel_err(inv.lhs, inv.rhs))
        .max(rel_err(back, d.generating_fn(x.z))))
}

fn parseval(x: &Instance, fault: f64) -> nisim::Result<f64> {
    let mut worst: f64 = 0.0;
    for code in [&x.a, &x.b] {
        let f = FourierSpectrum::of(code)?;
        worst = worst
            .max(rel_err(f.energy(), bump(1.0, fault)))
            .max(rel_err(f.coeff(0), 2.0 * code.density() - 1.0));
    }
    Ok(worst)
}

fn complement_average(x: &Instance, fault: f64) -> nisim::Result<f64> {
    let n = x.a.n();
    let ac = x.a.complement()?;
    let lhs = x.a.len() as f64 * dist(&x.a, &x.b)?.average() + ac.len() as f64 * dist(&ac, &x.b)?.average();
    Ok(rel_err(lhs, bump(n as f64 * 2f64.powi(n as i32 - 1), fault)))
}

fn antipodal_average(x: &Instance, fault: f64) -> nisim::Result<f64> {
    let lhs = dist(&x.a, &x.b)?.average() + dist(&x.a.star(), &x.b)?.average();
    Ok(rel_err(lhs, bump(x.a.n() as f64, fault)))
}

fn moment_negation(x: &Instance, fault: f64) -> nisim::Result<f64> {
    let n = x.a.n() as f64;
    let d = dist(&x.a, &x.b)?;
    let ds = dist(&x.a.star(), &x.b)?;
    let mut worst: f64 = 0.0;
    for k in 0..=4u32 {
        let rhs: f64 = (0..=k)
            .map(|i| {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                binom(k, i) * n.powi((k - i) as i32) * sign * distance_moment(&d, i)
            })
            .sum();
        worst = worst.max(rel_err(distance_moment(&ds, k), bump(rhs, fault)));
    }
    Ok(worst)
}

fn enumerator_complement_antipodal(x: &Instance, fault: f64) -> nisim::Result<f64> {
    let n = x.a.n() as i32;
    let ac = x.a.complement()?;
    let g = |a: &BinaryCode, z: f64| -> nisim::Result<f64> { distance_enumerator(&dist(a, &x.b)?, z) };
    let lhs = x.a.len() as f64 * g(&x.a, x.z)? + ac.len() as f64 * g(&ac, x.z)?;
    let total = rel_err(lhs, bump((1.0 + x.z).powi(n), fault));
    let star = rel_err(g(&x.a.star(), x.z)?, x.z.powi(n) * g(&x.a, 1.0 / x.z)?);
    Ok(total.max(star))
}

fn level_one_distance(x: &Instance, fault: f64) -> nisim::Result<f64> {
    let f = FourierSpectrum::of(&x.a)?;
    let g = FourierSpectrum::of(&x.b)?;
    let c = level_sums(&f, &g)?.c();
    let (a, b) = (x.a.density(), x.b.density());
    let expect = 4.0 * a * b * (x.a.n() as f64 - 2.0 * dist(&x.a, &x.b)?.average());
    Ok(rel_err(c, bump(expect, fault)))
}

fn dual_bridge(x: &Instance, fault: f64) -> nisim::Result<f64> {
    let f = FourierSpectrum::of(&x.a)?;
    let g = FourierSpectrum::of(&x.b)?;
    let s = level_sums(&f, &g)?;
    let q = dual_distribution(&x.a, &x.b)?;
    let scale = 4.0 * x.a.density() * x.b.density();
    Ok((1..=x.a.n() as usize)
        .map(|k| rel_err(q.q()[k], bump(s.level(k) / scale, fault)))
        .fold(0.0, f64::max))
}

fn collision_path_agreement(x: &Instance, fault: f64) -> nisim::Result<f64> {
    let d = collision_prob_distance_path(&x.a, &x.b, x.rho)?;
    let s = collision_prob_spectral_path(&x.a, &x.b, x.rho)?;
    Ok(rel_err(d, bump(s, fault)))
}

/// Excess of `θ = q − ab` beyond `[−ab, a(1−b)]`.
fn theta_range(x: &Instance, fault: f64) -> nisim::Result<f64> {
    let q = collision_prob(&x.a, &x.b, x.rho)?;
    let (a, b) = (x.a.density(), x.b.density());
    let theta = q - a * b;
    let hi = a * (1.0 - b) * (1.0 - fault) - fault;
    Ok((-a * b - theta).max(theta - hi).max(0.0))
}

fn distance_path_agreement(x: &Instance, fault: f64) -> nisim::Result<f64> {
    let p = distance_distribution_pairwise(&x.a, &x.b)?;
    let t = distance_distribution_transform(&x.a, &x.b)?;
    let mismatched = p.counts().iter().zip(t.counts()).filter(|(u, v)| u != v).count();
    Ok(mismatched as f64 + rel_err(p.average(), bump(t.average(), fault)))
}

/// Excess of `|n/2 − D(A,B)|` over `√((n/2 − D(A))(n/2 − D(B)))`.
fn average_cauchy_schwarz(x: &Instance, fault: f64) -> nisim::Result<f64> {
    let half = x.a.n() as f64 / 2.0;
    let lhs = (half - dist(&x.a, &x.b)?.average()).abs();
    let ra = half - dist(&x.a, &x.a)?.average();
    let rb = half - dist(&x.b, &x.b)?.average();
    let rhs = (ra.max(0.0) * rb.max(0.0)).sqrt() * (1.0 - fault) - fault;
    Ok(((lhs - rhs) / half).max(0.0))
}

/// Dual distributions of single codes are nonnegative, and the cross dual
/// obeys Cauchy–Schwarz coordinate-wise.
fn dual_positivity(x: &Instance, fault: f64) -> nisim::Result<f64> {
    let qab = dual_distribution(&x.a, &x.b)?;
    let qa = dual_distribution(&x.a, &x.a)?;
    let qb = dual_distribution(&x.b, &x.b)?;
    let mut worst: f64 = 0.0;
    for k in 0..qab.q().len() {
        let (u, v) = (qa.q()[k], qb.q()[k]);
        worst = worst.max(-u).max(-v);
        let bound = (u.max(0.0) * v.max(0.0)).sqrt() * (1.0 - fault) - fault;
        worst = worst.max(qab.q()[k].abs() - bound);
    }
    Ok(worst.max(0.0))
}

/// All families, in report order.
pub fn families() -> Vec<Family> {
    let identity = |name, check| Family {
        name,
        tol: IDENTITY_TOL,
        fault: IDENTITY_FAULT,
        check,
    };
    let inequality = |name, tol, check| Family {
        name,
        tol,
        fault: INEQUALITY_FAULT,
        check,
    };
    vec![
        identity("macwilliams-round-trip", macwilliams_round_trip as Check),
        identity("parseval", parseval),
        identity("complement-average-distance", complement_average),
        identity("antipodal-average-distance", antipodal_average),
        identity("antipodal-moments", moment_negation),
        identity("enumerator-complement-antipodal", enumerator_complement_antipodal),
        identity("level-one-average-distance", level_one_distance),
        identity("dual-bridge", dual_bridge),
        identity("collision-path-agreement", collision_path_agreement),
        identity("distance-path-agreement", distance_path_agreement),
        inequality("average-distance-cauchy-schwarz", IDENTITY_TOL, average_cauchy_schwarz),
        inequality("dual-positivity", IDENTITY_TOL, dual_positivity),
        inequality("theta-range", INEQUALITY_SLACK, theta_range),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub name: String,
    pub tolerance: f64,
    pub instances: usize,
    pub failures: usize,
    pub max_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub family: String,
    pub n: u32,
    pub trial: usize,
    /// Error measure, absent when the computation itself failed.
    pub error: Option<f64>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<u32>,
    pub passed: bool,
    pub families: Vec<FamilyReport>,
    pub failures: Vec<Failure>,
}

/// Runs every family on every instance.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let fams = families();
    if let Some(name) = &cfg.inject_fault {
        if !fams.iter().any(|f| f.name == name) {
            return Err(CliError::Usage(format!("unknown identity family {name:?}")));
        }
    }
    let inst = instances(cfg)?;
    let mut reports = Vec::with_capacity(fams.len());
    let mut failures = Vec::new();
    for fam in &fams {
        let fault = if cfg.inject_fault.as_deref() == Some(fam.name) { fam.fault } else { 0.0 };
        let outcomes: Vec<nisim::Result<f64>> = inst.par_iter().map(|(_, _, x)| (fam.check)(x, fault)).collect();
        let mut max_error: f64 = 0.0;
        let mut failed = 0;
        for ((n, trial, _), outcome) in inst.iter().zip(outcomes) {
            let failure = match outcome {
                Ok(e) => {
                    max_error = max_error.max(e);
                    (e > fam.tol || e.is_nan()).then(|| (Some(e), format!("error {e:e} exceeds {:e}", fam.tol)))
                }
                Err(err) => Some((None, err.to_string())),
            };
            if let Some((error, message)) = failure {
                failed += 1;
                failures.push(Failure {
                    family: fam.name.to_string(),
                    n: *n,
                    trial: *trial,
                    error,
                    message,
                });
            }
        }
        reports.push(FamilyReport {
            name: fam.name.to_string(),
            tolerance: fam.tol,
            instances: inst.len(),
            failures: failed,
            max_error,
        });
    }
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        seed: cfg.seed,
        trials: cfg.trials,
        dims: cfg.dims.clone(),
        passed: failures.is_empty(),
        families: reports,
        failures,
    })
}
