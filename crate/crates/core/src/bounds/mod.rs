//! Closed-form and optimizer-based bounds on the collision probability `q`
//! for prescribed marginals `(a, b)` and correlation `ρ`.

mod hc;

pub use hc::{hc_bounds, hc_objective, HcBounds, HcOptimizerConfig, HcPoint};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub const SCHEMA_VERSION: u32 = 1;
const NORMALIZED_SLACK: f64 = 1e-15;

/// One symmetry reduction applied while normalizing an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    /// `ρ → −ρ` by replacing `A` with its antipodal image; `q` unchanged.
    NegateX,
    /// `A → A^c`: `q = b − q'`.
    ComplementF,
    /// `B → B^c`: `q = a − q'`.
    ComplementG,
    /// `(A, B) → (B, A)`; `q` unchanged.
    Swap,
}

/// The reductions applied, composed into `q_orig = offset + sign · q_norm`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformRecord {
    pub steps: Vec<Reduction>,
    pub offset: f64,
    pub sign: f64,
}

impl TransformRecord {
    fn identity() -> Self {
        Self {
            steps: Vec::new(),
            offset: 0.0,
            sign: 1.0,
        }
    }

    /// Records `q_current = c − q_next`.
    fn push_reflection(&mut self, step: Reduction, c: f64) {
        self.steps.push(step);
        self.offset += self.sign * c;
        self.sign = -self.sign;
    }

    /// Maps a value of `q` in normalized coordinates back to the original.
    pub fn map_value(&self, q_norm: f64) -> f64 {
        self.offset + self.sign * q_norm
    }

    /// Maps a normalized `(lower, upper)` pair to the original coordinates,
    /// swapping the roles when the composite map is decreasing.
    pub fn map_interval(&self, lower: f64, upper: f64) -> (f64, f64) {
        if self.sign > 0.0 {
            (self.map_value(lower), self.map_value(upper))
        } else {
            (self.map_value(upper), self.map_value(lower))
        }
    }

    /// Whether lower bounds in normalized coordinates become upper bounds.
    pub fn flips_order(&self) -> bool {
        self.sign < 0.0
    }
}

/// An instance reduced to `a ≤ b ≤ 1/2`, `ρ ≥ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedInstance {
    pub a: f64,
    pub b: f64,
    pub rho: f64,
    pub record: TransformRecord,
}

fn check_instance(a: f64, b: f64, rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return Err(invalid(format!("marginals ({a}, {b}) must lie in [0, 1]")));
    }
    if !(rho.abs() <= 1.0) {
        return Err(invalid(format!("correlation {rho} must lie in [-1, 1]")));
    }
    Ok(())
}

pub fn normalize_instance(a: f64, b: f64, rho: f64) -> Result<NormalizedInstance> {
    check_instance(a, b, rho)?;
    let mut record = TransformRecord::identity();
    let (mut a, mut b, mut rho) = (a, b, rho);
    if rho < 0.0 {
        record.steps.push(Reduction::NegateX);
        rho = -rho;
    }
    if a > 0.5 {
        record.push_reflection(Reduction::ComplementF, b);
        a = 1.0 - a;
    }
    if b > 0.5 {
        record.push_reflection(Reduction::ComplementG, a);
        b = 1.0 - b;
    }
    if a > b {
        record.steps.push(Reduction::Swap);
        std::mem::swap(&mut a, &mut b);
    }
    Ok(NormalizedInstance { a, b, rho, record })
}

fn is_normalized(a: f64, b: f64, rho: f64) -> bool {
    a >= 0.0 && a <= b + NORMALIZED_SLACK && b <= 0.5 + NORMALIZED_SLACK && (0.0..=1.0).contains(&rho)
}

/// The four closed-form Υ bounds: two lower, two upper.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpsilonBounds {
    pub upsilon1_lb: f64,
    pub upsilon2_lb: f64,
    pub upsilon1_ub: f64,
    pub upsilon2_ub: f64,
}

impl UpsilonBounds {
    pub fn lower(&self) -> f64 {
        self.upsilon1_lb.max(self.upsilon2_lb)
    }

    pub fn upper(&self) -> f64 {
        self.upsilon1_ub.min(self.upsilon2_ub)
    }
}

/// `θ⁺(t) = t² + tρ/2 + (t/2 − t²)ρ²`.
pub fn theta_plus(t: f64, rho: f64) -> f64 {
    t * t + t * rho / 2.0 + (t / 2.0 - t * t) * rho * rho
}

/// `θ⁻(t) = max{0, t² − tρ/2 − (t/2 − t²)ρ²}`.
pub fn theta_minus(t: f64, rho: f64) -> f64 {
    (t * t - t * rho / 2.0 - (t / 2.0 - t * t) * rho * rho).max(0.0)
}

fn upsilon_raw(a: f64, b: f64, rho: f64) -> UpsilonBounds {
    let (ab, sab) = (a * b, (a * b).sqrt());
    let cross = (a * (1.0 - a) * b * (1.0 - b)).sqrt();
    let r2 = rho * rho;
    UpsilonBounds {
        upsilon1_lb: (ab - sab * rho / 2.0 - (ab + cross) * r2 / 2.0).max(0.0),
        upsilon2_lb: (ab - sab * rho / 2.0 - (a + b - 2.0 * ab - sab) * r2 / 2.0).max(0.0),
        upsilon1_ub: a.min(ab + sab * rho / 2.0 + (a * (1.0 - b) + cross - sab) * r2 / 2.0),
        upsilon2_ub: (theta_plus(a, rho) * theta_plus(b, rho)).sqrt(),
    }
}

/// Bounds valid for `0 ≤ a ≤ b ≤ 1/2`, `ρ ∈ [0, 1]`; other instances must go
/// through [`normalize_instance`] first.
pub fn theorem1_bounds(a: f64, b: f64, rho: f64) -> Result<UpsilonBounds> {
    if !is_normalized(a, b, rho) {
        return Err(invalid(format!(
            "({a}, {b}, {rho}) is not normalized; require 0 ≤ a ≤ b ≤ 1/2 and 0 ≤ ρ ≤ 1"
        )));
    }
    Ok(upsilon_raw(a, b, rho))
}

/// `(θ⁻(a), θ⁺(a))` for the symmetric case `a = b`.
pub fn symmetric_bounds(a: f64, rho: f64) -> Result<(f64, f64)> {
    if !(a > 0.0 && a <= 0.5) || !(0.0..=1.0).contains(&rho) {
        return Err(invalid(format!("symmetric bounds need a ∈ (0, 1/2], ρ ∈ [0, 1]; got ({a}, {rho})")));
    }
    Ok((theta_minus(a, rho), theta_plus(a, rho)))
}

/// `ab ∓ √(aābb̄)ρ`, clamped to `[0, min(a, b)]`.
pub fn maximal_correlation_bounds(a: f64, b: f64, rho: f64) -> Result<(f64, f64)> {
    check_instance(a, b, rho)?;
    if rho < 0.0 {
        return Err(invalid("maximal correlation bounds take ρ ∈ [0, 1]"));
    }
    let (lb, ub) = mc_raw(a, b, rho);
    let hi = a.min(b);
    Ok((lb.clamp(0.0, hi), ub.clamp(0.0, hi)))
}

fn mc_raw(a: f64, b: f64, rho: f64) -> (f64, f64) {
    let dev = (a * (1.0 - a) * b * (1.0 - b)).sqrt() * rho;
    (a * b - dev, a * b + dev)
}

/// A bound in original coordinates, clamped to the trivial sandwich.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub value: f64,
    /// Before clamping to `[max(0, a+b−1), min(a, b)]`.
    pub unclamped: f64,
    /// How the value was obtained from the normalized instance.
    pub formula: String,
}

/// Every bound family for one instance, expressed in its original
/// coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub schema_version: u32,
    pub a: f64,
    pub b: f64,
    pub rho: f64,
    pub normalized: NormalizedInstance,
    pub upsilon1_lb: BoundEntry,
    pub upsilon2_lb: BoundEntry,
    pub upsilon1_ub: BoundEntry,
    pub upsilon2_ub: BoundEntry,
    pub upsilon_lb: BoundEntry,
    pub upsilon_ub: BoundEntry,
    pub mc_lb: BoundEntry,
    pub mc_ub: BoundEntry,
    pub hc_lb: BoundEntry,
    pub hc_ub: BoundEntry,
    /// Optimizer output in normalized coordinates, for audit.
    pub hc_raw: HcBounds,
    pub combined_lb: f64,
    pub combined_ub: f64,
}

impl BoundsReport {
    pub fn lower_entries(&self) -> [(&'static str, &BoundEntry); 5] {
        [
            ("upsilon1_lb", &self.upsilon1_lb),
            ("upsilon2_lb", &self.upsilon2_lb),
            ("upsilon_lb", &self.upsilon_lb),
            ("mc_lb", &self.mc_lb),
            ("hc_lb", &self.hc_lb),
        ]
    }

    pub fn upper_entries(&self) -> [(&'static str, &BoundEntry); 5] {
        [
            ("upsilon1_ub", &self.upsilon1_ub),
            ("upsilon2_ub", &self.upsilon2_ub),
            ("upsilon_ub", &self.upsilon_ub),
            ("mc_ub", &self.mc_ub),
            ("hc_ub", &self.hc_ub),
        ]
    }
}

/// Normalizes, evaluates every family, and maps the values back.
pub fn combined_report(a: f64, b: f64, rho: f64) -> Result<BoundsReport> {
    combined_report_with(a, b, rho, &HcOptimizerConfig::default())
}

pub fn combined_report_with(
    a: f64,
    b: f64,
    rho: f64,
    cfg: &HcOptimizerConfig,
) -> Result<BoundsReport> {
    let norm = normalize_instance(a, b, rho)?;
    let (na, nb, nr) = (norm.a, norm.b, norm.rho);
    let ups = theorem1_bounds(na, nb, nr)?;
    let (mc_lb, mc_ub) = mc_raw(na, nb, nr);
    let hc = hc_bounds(na, nb, nr, cfg)?;

    let rec = &norm.record;
    let hi = a.min(b);
    let lo = (a + b - 1.0).max(0.0).min(hi);
    let affine = if rec.steps.iter().any(|s| matches!(s, Reduction::ComplementF | Reduction::ComplementG)) {
        format!("{} {} q'", rec.offset, if rec.sign > 0.0 { "+" } else { "-" })
    } else {
        "q'".to_string()
    };
    let entry = |name: &str, norm_value: f64| {
        let unclamped = rec.map_value(norm_value);
        BoundEntry {
            value: unclamped.clamp(lo, hi),
            unclamped,
            formula: format!("{affine} with q' = {name}({na}, {nb}, {nr})"),
        }
    };
    // a normalized lower bound maps to an upper bound when the map reverses order
    let pair = |lname: &str, l: f64, uname: &str, u: f64| {
        if rec.flips_order() {
            (entry(uname, u), entry(lname, l))
        } else {
            (entry(lname, l), entry(uname, u))
        }
    };
    let (upsilon1_lb, upsilon1_ub) = pair("upsilon1_lb", ups.upsilon1_lb, "upsilon1_ub", ups.upsilon1_ub);
    let (upsilon2_lb, upsilon2_ub) = pair("upsilon2_lb", ups.upsilon2_lb, "upsilon2_ub", ups.upsilon2_ub);
    let (upsilon_lb, upsilon_ub) = pair("upsilon_lb", ups.lower(), "upsilon_ub", ups.upper());
    let (mc_lb, mc_ub) = pair("mc_lb", mc_lb, "mc_ub", mc_ub);
    let (hc_lb, hc_ub) = pair("hc_lb", hc.lb, "hc_ub", hc.ub);

    let combined_lb = [&upsilon_lb, &mc_lb, &hc_lb]
        .iter()
        .map(|e| e.value)
        .fold(lo, f64::max);
    let combined_ub = [&upsilon_ub, &mc_ub, &hc_ub]
        .iter()
        .map(|e| e.value)
        .fold(hi, f64::min);

    Ok(BoundsReport {
        schema_version: SCHEMA_VERSION,
        a,
        b,
        rho,
        normalized: norm.clone(),
        upsilon1_lb,
        upsilon2_lb,
        upsilon1_ub,
        upsilon2_ub,
        upsilon_lb,
        upsilon_ub,
        mc_lb,
        mc_ub,
        hc_lb,
        hc_ub,
        hc_raw: hc,
        combined_lb,
        combined_ub,
    })
}
