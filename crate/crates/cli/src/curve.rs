//! Symmetric-marginal (`a = b`) bound curves for plotting.

use std::io::Write;

use nisim::bounds::{combined_report_with, symmetric_bounds, HcOptimizerConfig};
use nisim::oracle::{construction_value, Construction};
use serde::{Deserialize, Serialize};

use crate::{CliError, Result, SCHEMA_VERSION};

/// Column names, in file order.
pub const HEADER: [&str; 11] = [
    "schema_version",
    "rho",
    "a",
    "mc_lb",
    "mc_ub",
    "hc_lb",
    "hc_ub",
    "ours_lb",
    "ours_ub",
    "sym_subcube",
    "antisym_subcube",
];

/// Grid range and resolution of the default curve.
pub const DEFAULT_LO: f64 = 0.02;
pub const DEFAULT_HI: f64 = 0.5;
pub const DEFAULT_POINTS: usize = 50;
/// Dyadic anchors `2^{-i}`, `i = 1..=DYADIC_LEVELS`.
pub const DYADIC_LEVELS: u32 = 5;

/// One row: every bound at `a = b`, plus subcube constructions where `a` is
/// dyadic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub schema_version: u32,
    pub rho: f64,
    pub a: f64,
    pub mc_lb: f64,
    pub mc_ub: f64,
    pub hc_lb: f64,
    pub hc_ub: f64,
    pub ours_lb: f64,
    pub ours_ub: f64,
    pub sym_subcube: Option<f64>,
    pub antisym_subcube: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveDataset {
    pub rho: f64,
    pub rows: Vec<CurveRow>,
}

/// `k` log-spaced points from `lo` to `hi` inclusive, endpoints exact.
pub fn log_grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    match k {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (l, h) = (lo.ln(), hi.ln());
            let mut v: Vec<f64> = (0..k)
                .map(|i| (l + (h - l) * i as f64 / (k - 1) as f64).exp())
                .collect();
            v[0] = lo;
            v[k - 1] = hi;
            v
        }
    }
}

/// The default abscissae: the log grid merged with the dyadic anchors,
/// sorted, with near-duplicates collapsed onto the dyadic value.
pub fn default_grid() -> Vec<f64> {
    let dyadic: Vec<f64> = (1..=DYADIC_LEVELS).map(|i| 0.5f64.powi(i as i32)).collect();
    let log = log_grid(DEFAULT_LO, DEFAULT_HI, DEFAULT_POINTS);
    let mut grid: Vec<f64> = log
        .into_iter()
        .filter(|x| !dyadic.iter().any(|d| (x - d).abs() <= 1e-12 * d))
        .chain(dyadic.iter().copied())
        .collect();
    grid.sort_by(f64::total_cmp);
    grid
}

/// `i` with `a = 2^{-i}` exactly, if any.
fn dyadic_level(a: f64) -> Option<u32> {
    (1..=60u32).find(|&i| a == 0.5f64.powi(i as i32))
}

fn check_inputs(rho: f64, grid: &[f64]) -> Result<()> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(CliError::Usage(format!("rho = {rho} must lie in (0, 1)")));
    }
    if let Some(a) = grid.iter().find(|&&a| !(a > 0.0 && a <= 0.5)) {
        return Err(CliError::Usage(format!("grid point a = {a} must lie in (0, 1/2]")));
    }
    Ok(())
}

/// One row of the dataset.
pub fn curve_row(a: f64, rho: f64, cfg: &HcOptimizerConfig) -> Result<CurveRow> {
    let report = combined_report_with(a, a, rho, cfg)?;
    let (ours_lb, ours_ub) = symmetric_bounds(a, rho)?;
    let construction = |kind| -> Result<Option<f64>> {
        dyadic_level(a)
            .map(|i| construction_value(kind, i, i, rho))
            .transpose()
            .map_err(CliError::from)
    };
    Ok(CurveRow {
        schema_version: SCHEMA_VERSION,
        rho,
        a,
        mc_lb: report.mc_lb.value,
        mc_ub: report.mc_ub.value,
        hc_lb: report.hc_lb.value,
        hc_ub: report.hc_ub.value,
        ours_lb,
        ours_ub,
        sym_subcube: construction(Construction::SymmetricSubcube)?,
        antisym_subcube: construction(Construction::AntisymmetricSubcube)?,
    })
}

/// Computes the dataset over `grid` (sorted on output).
pub fn curve_dataset(rho: f64, grid: &[f64], cfg: &HcOptimizerConfig) -> Result<CurveDataset> {
    check_inputs(rho, grid)?;
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let rows = grid
        .iter()
        .map(|&a| curve_row(a, rho, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveDataset { rho, rows })
}

/// Writes the dataset as CSV with a header row.
pub fn write_csv<W: Write>(data: &CurveDataset, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if data.rows.is_empty() {
        w.write_record(HEADER)?;
    }
    for row in &data.rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Reads a dataset back from CSV.
pub fn read_csv<R: std::io::Read>(input: R) -> Result<CurveDataset> {
    let mut r = csv::Reader::from_reader(input);
    let rows = r.deserialize().collect::<std::result::Result<Vec<CurveRow>, _>>()?;
    let rho = rows.first().map_or(f64::NAN, |r| r.rho);
    Ok(CurveDataset { rho, rows })
}
