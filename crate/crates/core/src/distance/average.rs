//! Scalar bounds on average Hamming distances.

use serde::Serialize;

use crate::error::{invalid, Result};

/// Golden-section search range for `u = ln t`.
const PSI_U_RANGE: f64 = 14.0;
const PSI_U_TOL: f64 = 1e-10;
/// Coarse scan resolution on each side of `u = 0`.
const PSI_SCAN_POINTS: usize = 280;
/// Below this `|t − 1|` the series expansion replaces the closed form.
const PSI_SERIES_RADIUS: f64 = 1e-4;

fn check_density(name: &str, a: f64, upper: f64) -> Result<()> {
    if !(a > 0.0 && a <= upper) {
        return Err(invalid(format!("{name} = {a} must lie in (0, {upper}]")));
    }
    Ok(())
}

/// Lower bound `n/2 − 1/(4a)` on the minimum average distance of a code of
/// density `a ≤ 1/2`, clamped at 0.
pub fn fwy_lower_bound(n: u32, a: f64) -> Result<f64> {
    check_density("a", a, 0.5)?;
    Ok((n as f64 / 2.0 - 1.0 / (4.0 * a)).max(0.0))
}

/// Bounds on the average distance between codes of densities `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AvgDistanceBounds {
    pub n: u32,
    pub a: f64,
    pub b: f64,
    pub lower: f64,
    pub upper: f64,
}

/// `n/2 ∓ √((a∧ā)(b∧b̄))/(4ab)`, clamped to `[0, n]`.
pub fn cross_distance_bounds(n: u32, a: f64, b: f64) -> Result<AvgDistanceBounds> {
    check_density("a", a, 1.0)?;
    check_density("b", b, 1.0)?;
    let dev = (a.min(1.0 - a) * b.min(1.0 - b)).sqrt() / (4.0 * a * b);
    let half = n as f64 / 2.0;
    Ok(AvgDistanceBounds {
        n,
        a,
        b,
        lower: (half - dev).max(0.0),
        upper: (half + dev).min(n as f64),
    })
}

/// `n/2 − ln(1/a)`, clamped at 0.
pub fn chang_bound(n: u32, a: f64) -> Result<f64> {
    check_density("a", a, 1.0)?;
    Ok((n as f64 / 2.0 + a.ln()).max(0.0))
}

/// `φ(t) = (ta+ā)[a t ln t − (ta+ā) ln(ta+ā)] / (a²(t−1)²)`.
fn psi_objective(a: f64, t: f64) -> f64 {
    let eps = t - 1.0;
    if eps.abs() < PSI_SERIES_RADIUS {
        // expansion around t = 1; the leading term is ā/(2a)
        let a2 = a * a;
        let series =
            (a - a2) / 2.0 - (a - a2 * a) * eps / 6.0 + (a - a2 * a2) * eps * eps / 12.0;
        return (1.0 + a * eps) * series / a2;
    }
    let m = 1.0 + a * eps;
    let num = a * t * t.ln() - m * (a * eps).ln_1p();
    m * num / (a * a * eps * eps)
}

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = (lo + hi) / 2.0;
    (x, f(x))
}

/// Minimizes over one side of `u = 0` (the sign of `side`): coarse scan,
/// then golden-section inside the bracket around the best scan point.
fn psi_side(a: f64, side: f64) -> f64 {
    let f = |u: f64| psi_objective(a, (side * u).exp());
    let step = PSI_U_RANGE / PSI_SCAN_POINTS as f64;
    let best = (1..=PSI_SCAN_POINTS)
        .map(|k| (k, f(k as f64 * step)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(k, _)| k)
        .unwrap_or(1);
    let lo = (best as f64 - 1.0) * step;
    let hi = ((best + 1) as f64 * step).min(PSI_U_RANGE);
    let (_, v) = golden_section(f, lo, hi, PSI_U_TOL);
    v.min(f(best as f64 * step))
}

/// `ψ(a) = inf_{t>0} φ(t)`, with φ extended continuously at `t = 1`.
pub fn psi(a: f64) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(invalid(format!("psi requires a in (0, 1), got {a}")));
    }
    let at_one = (1.0 - a) / (2.0 * a);
    Ok(psi_side(a, 1.0).min(psi_side(a, -1.0)).min(at_one))
}

/// `n/2 − ψ(a)`, clamped at 0; equals `n/2` at `a = 1`.
pub fn psi_bound(n: u32, a: f64) -> Result<f64> {
    check_density("a", a, 1.0)?;
    let half = n as f64 / 2.0;
    if a == 1.0 {
        return Ok(half);
    }
    Ok((half - psi(a)?).max(0.0))
}
