//! Hypercontractivity bounds on the collision probability, optimized
//! numerically over the three-parameter family `φ(s, t, κ)`.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Half-width of the search box in log coordinates: `ln 10³`.
const LOG_BOX: f64 = 6.907_755_278_982_137;
/// `ln(1 + 10⁻³)`, the grid's closest approach to κ = 1.
const LOG_KAPPA_GAP: f64 = 9.995_003_330_835_332e-4;
/// Below this `|κ'|` the first factor uses its `κ' → 0` limit.
const KAPPA_PRIME_ZERO: f64 = 1e-12;
const INITIAL_STEP: f64 = 0.5;
/// Pattern-search moves must improve by more than this relative amount.
const MIN_RELATIVE_GAIN: f64 = 1e-14;
/// Sweeps over which the objective must improve by the relative tolerance
/// for refinement to continue.
const STALL_WINDOW: usize = 1000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HcOptimizerConfig {
    /// Grid points per axis (and per κ branch).
    pub grid_points: usize,
    /// Cap on pattern-search sweeps.
    pub refine_iters: usize,
    /// Half-width of the excluded band around `s = 1`, `t = 1`, `κ = 1`, in
    /// log coordinates.
    pub exclusion: f64,
    /// Refinement stops once the step falls below `tol` (log coordinates) or
    /// the objective improves by less than `tol` relative over a window of
    /// sweeps.
    pub tol: f64,
}

impl Default for HcOptimizerConfig {
    fn default() -> Self {
        Self {
            grid_points: 33,
            refine_iters: 100_000,
            exclusion: 1e-4,
            tol: 1e-6,
        }
    }
}

impl HcOptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 2 || self.refine_iters == 0 {
            return Err(invalid("grid_points must be ≥ 2 and refine_iters ≥ 1"));
        }
        if !(self.exclusion > 0.0 && self.tol > 0.0) {
            return Err(invalid("exclusion and tol must be positive"));
        }
        Ok(())
    }
}

/// A point of the `(s, t, κ)` domain with its objective value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HcPoint {
    pub s: f64,
    pub t: f64,
    pub kappa: f64,
    pub value: f64,
}

/// Result of the hypercontractivity optimization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HcBounds {
    /// Best lower bound: the numeric supremum, or the `s, t → 1` limit when
    /// that is larger.
    pub lb: f64,
    /// Best upper bound: the numeric infimum, or the `s, t → 1` limit when
    /// that is smaller.
    pub ub: f64,
    /// Optimizer witnesses; `None` when the bound came in closed form.
    pub lb_point: Option<HcPoint>,
    pub ub_point: Option<HcPoint>,
    /// Set when the inputs lie where the optimization domain is degenerate.
    pub warning: Option<String>,
}

/// `φ_{a,b}(s, t, κ)` with `κ' = 1 + ρ²/(κ − 1)`.
pub fn hc_objective(a: f64, b: f64, rho: f64, s: f64, t: f64, kappa: f64) -> f64 {
    hc_objective_log(a, b, rho, s.ln(), t.ln(), kappa)
}

/// `(m^{1/p} − 1)` for `m = 1 + w(e^{pu} − 1)`, accurate for small `u`; the
/// `p → 0` limit is `e^{wu} − 1`.
fn power_mean_minus_one(w: f64, u: f64, p: f64) -> f64 {
    if p.abs() < KAPPA_PRIME_ZERO {
        (w * u).exp_m1()
    } else {
        ((w * (p * u).exp_m1()).ln_1p() / p).exp_m1()
    }
}

/// The objective at `s = e^u`, `t = e^v`, arranged so that the removable
/// singularities at `s = 1` and `t = 1` do not amplify rounding:
/// with `F = 1 + f`, `G = 1 + g`,
/// `φ = (f/(s−1) − a)/(t−1) + (g/(t−1) − b)/(s−1) + f g/((s−1)(t−1))`.
fn hc_objective_log(a: f64, b: f64, rho: f64, u: f64, v: f64, kappa: f64) -> f64 {
    let kp = 1.0 + rho * rho / (kappa - 1.0);
    let (sm1, tm1) = (u.exp_m1(), v.exp_m1());
    let f = power_mean_minus_one(a, u, kp) / sm1;
    let g = power_mean_minus_one(b, v, kappa) / tm1;
    (f - a) / tm1 + (g - b) / sm1 + f * g
}

/// `+1` for the upper-bound region `(s−1)(t−1)(κ−1) > 0`, `−1` for the lower.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Upper,
    Lower,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Upper => 1.0,
            Side::Lower => -1.0,
        }
    }
}

struct Problem {
    a: f64,
    b: f64,
    rho: f64,
    side: Side,
    exclusion: f64,
}

impl Problem {
    /// Objective to minimize at log coordinates, `None` if infeasible.
    fn eval(&self, x: [f64; 3]) -> Option<f64> {
        if x.iter().any(|c| c.abs() > LOG_BOX || c.abs() < self.exclusion) {
            return None;
        }
        // signs of s − 1, t − 1, κ − 1 are those of the log coordinates
        if self.side.sign() * x[0] * x[1] * x[2] <= 0.0 {
            return None;
        }
        let v = hc_objective_log(self.a, self.b, self.rho, x[0], x[1], x[2].exp());
        v.is_finite().then(|| self.side.sign() * v)
    }

    fn point(&self, x: [f64; 3], minimized: f64) -> HcPoint {
        let [s, t, kappa] = x.map(f64::exp);
        HcPoint {
            s,
            t,
            kappa,
            value: self.side.sign() * minimized,
        }
    }
}

fn linspace(lo: f64, hi: f64, k: usize) -> impl Iterator<Item = f64> {
    (0..k).map(move |i| lo + (hi - lo) * i as f64 / (k - 1) as f64)
}

/// Total order used for deterministic argmin: value, then coordinates.
fn candidate_cmp(x: &([f64; 3], f64), y: &([f64; 3], f64)) -> Ordering {
    x.1.total_cmp(&y.1).then_with(|| {
        x.0.iter()
            .zip(&y.0)
            .map(|(p, q)| p.total_cmp(q))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

fn grid_search(p: &Problem, k: usize) -> Option<([f64; 3], f64)> {
    let axis: Vec<f64> = linspace(-LOG_BOX, LOG_BOX, k).collect();
    let kappas: Vec<f64> = linspace(LOG_KAPPA_GAP, LOG_BOX, k)
        .chain(linspace(-LOG_BOX, (-1e-3f64).ln_1p(), k))
        .collect();
    axis.par_iter()
        .filter_map(|&u| {
            let mut best: Option<([f64; 3], f64)> = None;
            for &v in &axis {
                for &w in &kappas {
                    let x = [u, v, w];
                    if let Some(val) = p.eval(x) {
                        let cand = (x, val);
                        if best
                            .as_ref()
                            .is_none_or(|b| candidate_cmp(&cand, b) == Ordering::Less)
                        {
                            best = Some(cand);
                        }
                    }
                }
            }
            best
        })
        .min_by(candidate_cmp)
}

/// Coordinate moves of size `step` around `base`, accepting each that
/// improves on the running best.
fn explore(p: &Problem, base: [f64; 3], f_base: f64, step: f64) -> ([f64; 3], f64) {
    let (mut x, mut fx) = (base, f_base);
    for i in 0..3 {
        for dir in [1.0, -1.0] {
            let mut y = x;
            y[i] += dir * step;
            if let Some(fy) = p.eval(y) {
                if fy < fx - MIN_RELATIVE_GAIN * fx.abs() {
                    x = y;
                    fx = fy;
                    break;
                }
            }
        }
    }
    (x, fx)
}

/// Hooke–Jeeves pattern search from `start`: exploratory coordinate moves,
/// followed by extrapolation along the last successful displacement so that
/// curved valleys are followed at a growing pace. The step halves when no
/// move improves. The search stops once the step falls below `tol`, or when
/// a window of sweeps gains less than `tol` relative.
fn pattern_search(
    p: &Problem,
    start: [f64; 3],
    start_val: f64,
    cfg: &HcOptimizerConfig,
) -> Result<([f64; 3], f64)> {
    let (mut x, mut fx) = (start, start_val);
    let mut step = INITIAL_STEP;
    let mut window_start = fx;
    for sweep in 0..cfg.refine_iters {
        if step < cfg.tol {
            return Ok((x, fx));
        }
        if sweep > 0 && sweep % STALL_WINDOW == 0 {
            if window_start - fx <= cfg.tol * fx.abs() {
                return Ok((x, fx));
            }
            window_start = fx;
        }
        let (y, fy) = explore(p, x, fx, step);
        if fy >= fx {
            step /= 2.0;
            continue;
        }
        // pattern moves: keep extrapolating while they pay off
        let (mut prev, mut base, mut f_base) = (x, y, fy);
        loop {
            let probe = [0, 1, 2].map(|i| 2.0 * base[i] - prev[i]);
            let Some(f_probe) = p.eval(probe) else { break };
            let (z, fz) = explore(p, probe, f_probe, step);
            if fz < f_base - MIN_RELATIVE_GAIN * f_base.abs() {
                prev = base;
                base = z;
                f_base = fz;
            } else {
                break;
            }
        }
        x = base;
        fx = f_base;
    }
    Err(Error::NonConvergence(format!(
        "pattern search did not reach step {} within {} sweeps (a={}, b={}, rho={})",
        cfg.tol, cfg.refine_iters, p.a, p.b, p.rho
    )))
}

fn optimize(p: &Problem, cfg: &HcOptimizerConfig) -> Result<Option<HcPoint>> {
    let Some((x0, f0)) = grid_search(p, cfg.grid_points) else {
        return Ok(None);
    };
    let (x, fx) = pattern_search(p, x0, f0, cfg)?;
    Ok(Some(p.point(x, fx)))
}

/// The value of `φ` in the limit `s, t → 1`, optimized over κ: the
/// maximal-correlation value `ab ± √(aābb̄)ρ`.
fn singular_limit(a: f64, b: f64, rho: f64, side: Side) -> f64 {
    a * b + side.sign() * (a * (1.0 - a) * b * (1.0 - b)).sqrt() * rho
}

/// Lower and upper hypercontractivity bounds on `q` for marginals `a, b` and
/// correlation `ρ ∈ [0, 1]`.
pub fn hc_bounds(a: f64, b: f64, rho: f64, cfg: &HcOptimizerConfig) -> Result<HcBounds> {
    cfg.validate()?;
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return Err(invalid(format!("marginals ({a}, {b}) must lie in [0, 1]")));
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(invalid(format!("correlation {rho} must lie in [0, 1]")));
    }
    let closed = |v: f64| HcBounds {
        lb: v,
        ub: v,
        lb_point: None,
        ub_point: None,
        warning: None,
    };
    if a == 0.0 || b == 0.0 || a == 1.0 || b == 1.0 || rho == 0.0 {
        // q is determined: one function is constant, or X and Y are independent
        return Ok(closed(a * b));
    }
    let warning = (rho == 1.0).then(|| {
        "rho = 1: optimization domain degenerates; values are grid optima without a \
         validity claim beyond the feasible points evaluated"
            .to_string()
    });

    let solve = |side| {
        let p = Problem {
            a,
            b,
            rho,
            side,
            exclusion: cfg.exclusion,
        };
        optimize(&p, cfg)
    };
    let (upper, lower) = rayon::join(|| solve(Side::Upper), || solve(Side::Lower));
    let (upper, lower) = (upper?, lower?);

    let limit_ub = singular_limit(a, b, rho, Side::Upper);
    let limit_lb = singular_limit(a, b, rho, Side::Lower);
    let ub = upper.map_or(limit_ub, |p| p.value.min(limit_ub));
    let lb = lower.map_or(limit_lb, |p| p.value.max(limit_lb));
    Ok(HcBounds {
        lb,
        ub,
        lb_point: lower,
        ub_point: upper,
        warning,
    })
}
