//! Human-readable renderings; machine-readable output is plain JSON.

use std::fmt::Write;

use nisim::bounds::BoundsReport;
use nisim::oracle::OracleResult;
use serde::Serialize;

use crate::verify::VerifyReport;
use crate::Result;

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Aligned table of every bound family.
pub fn bounds_text(r: &BoundsReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "a = {}, b = {}, rho = {}", r.a, r.b, r.rho);
    let n = &r.normalized;
    let _ = writeln!(
        out,
        "normalized: a = {}, b = {}, rho = {} via [{}]",
        n.a,
        n.b,
        n.rho,
        n.record
            .steps
            .iter()
            .map(|s| format!("{s:?}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    let _ = writeln!(out, "{:<12} {:>22} {:>22}", "bound", "value", "unclamped");
    for (name, e) in r.lower_entries().into_iter().chain(r.upper_entries()) {
        let _ = writeln!(out, "{:<12} {:>22.15} {:>22.15}", name, e.value, e.unclamped);
    }
    let _ = writeln!(out, "{:<12} {:>22.15}", "combined_lb", r.combined_lb);
    let _ = writeln!(out, "{:<12} {:>22.15}", "combined_ub", r.combined_ub);
    if let Some(w) = &r.hc_raw.warning {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

/// One line per reported extremum.
pub fn oracle_summary(r: &OracleResult) -> String {
    let mut out = String::new();
    let mode = if r.exhaustive { "exhaustive" } else { "local search" };
    let _ = write!(out, "n={} M={} N={}", r.n, r.m, r.n_b);
    if let Some(rho) = r.rho {
        let _ = write!(out, " rho={rho}");
    }
    let _ = writeln!(out, " ({mode}, {} pairs evaluated)", r.stats.pairs_evaluated);
    for (name, v) in [
        ("max_q", r.max_q),
        ("min_q", r.min_q),
        ("max_D", r.max_d),
        ("min_D", r.min_d),
    ] {
        if let Some(v) = v {
            let _ = writeln!(out, "{name} = {v}");
        }
    }
    out
}

/// Per-family pass counts followed by the failures, if any.
pub fn verify_text(r: &VerifyReport) -> String {
    let mut out = String::new();
    for f in &r.families {
        let status = if f.failures == 0 { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{status} {:<34} {:>5} instances, max error {:.3e} (tol {:.0e})",
            f.name, f.instances, f.max_error, f.tolerance
        );
    }
    for f in &r.failures {
        let _ = writeln!(out, "failure: {} n={} trial={}: {}", f.family, f.n, f.trial, f.message);
    }
    out
}
