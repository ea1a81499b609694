//! Per-mode extrapolation of `ell(n) = log|Trace| / n` and comparison with
//! the normalised volume `vol / (4 pi)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::trace::TraceSeries;

pub const DEFAULT_DEGREE: usize = 4;
pub const DEFAULT_N_CUT: usize = 51;
pub const MIN_POINTS: usize = 10;

/// Least-squares fit of one residue class of `n mod 4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassFit {
    pub residue: usize,
    /// Coefficients of `1, 1/n, 1/n^2, ...`; the first is the extrapolated limit.
    pub coefficients: Vec<f64>,
    pub rms_residual: f64,
    pub points: usize,
}

impl ClassFit {
    pub fn limit(&self) -> f64 {
        self.coefficients[0]
    }

    pub fn eval(&self, n: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc / n + c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub n_cut: usize,
    pub degree: usize,
    pub classes: Vec<ClassFit>,
    /// `(lhat - mhat + nhat) / 2 mod 2`, when known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity_flag: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume_over_4pi: Option<f64>,
}

impl FitResult {
    pub fn class(&self, residue: usize) -> Option<&ClassFit> {
        self.classes.iter().find(|c| c.residue == residue)
    }

    pub fn with_parity(mut self, parity_value: i64) -> Self {
        self.parity_flag = Some(parity_value.rem_euclid(2));
        self
    }

    pub fn max_rms(&self) -> f64 {
        self.classes.iter().map(|c| c.rms_residual).fold(0.0, f64::max)
    }

    /// Fitted curves at the data's `n`: `n,mode,ell,fitted`.
    pub fn write_curves_csv<W: Write>(&self, series: &TraceSeries, mut w: W) -> io::Result<()> {
        writeln!(w, "n,mode,ell,fitted")?;
        for r in series.rows.iter().filter(|r| r.usable() && r.n >= self.n_cut) {
            if let Some(c) = self.class(r.mode) {
                writeln!(w, "{},{},{:.16e},{:.16e}", r.n, r.mode, r.ell, c.eval(r.n as f64))?;
            }
        }
        Ok(())
    }
}

/// Ordinary least squares of `y` against `1, 1/n, ..., 1/n^degree`, by QR.
pub fn fit_points(ns: &[f64], ys: &[f64], degree: usize) -> Result<(Vec<f64>, f64)> {
    let cols = degree + 1;
    if ns.len() < cols {
        return Err(Error::InsufficientData(format!("{} points for {cols} unknowns", ns.len())));
    }
    let design = DMatrix::from_fn(ns.len(), cols, |r, c| ns[r].powi(-(c as i32)));
    let rhs = DVector::from_column_slice(ys);
    let qr = design.clone().qr();
    let qty = qr.q().transpose() * &rhs;
    let coeffs = qr
        .r()
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::InsufficientData("rank-deficient design matrix".into()))?;
    let resid = &design * &coeffs - rhs;
    let rms = (resid.norm_squared() / ns.len() as f64).sqrt();
    Ok((coeffs.iter().copied().collect(), rms))
}

/// Fits each mode `n = 1, 3 mod 4` on the usable rows with `n >= n_cut`.
pub fn fit(series: &TraceSeries, n_cut: usize) -> Result<FitResult> {
    fit_with_degree(series, n_cut, DEFAULT_DEGREE)
}

pub fn fit_with_degree(series: &TraceSeries, n_cut: usize, degree: usize) -> Result<FitResult> {
    let mut classes = Vec::with_capacity(2);
    for residue in [1usize, 3] {
        let (ns, ys): (Vec<f64>, Vec<f64>) = series
            .rows
            .iter()
            .filter(|r| r.mode == residue && r.n >= n_cut && r.usable())
            .map(|r| (r.n as f64, r.ell))
            .unzip();
        if ns.len() < MIN_POINTS.max(degree + 1) {
            return Err(Error::InsufficientData(format!(
                "class n = {residue} mod 4 has {} usable points with n >= {n_cut}, need {}",
                ns.len(),
                MIN_POINTS.max(degree + 1)
            )));
        }
        let (coefficients, rms_residual) = fit_points(&ns, &ys, degree)?;
        classes.push(ClassFit { residue, coefficients, rms_residual, points: ns.len() });
    }
    Ok(FitResult { n_cut, degree, classes, parity_flag: None, volume_over_4pi: None })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassComparison {
    pub residue: usize,
    pub limit: f64,
    pub abs_deviation: f64,
    pub rel_deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The leading terms cancel; no limit is predicted.
    NoPrediction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeReport {
    pub volume: f64,
    pub volume_over_4pi: f64,
    pub tolerance: f64,
    pub classes: Vec<ClassComparison>,
    pub verdict: Verdict,
}

/// Compares each class limit with `vol / (4 pi)`. An odd parity flag yields
/// [`Verdict::NoPrediction`] while the deviations are still reported.
pub fn compare_volume(f: &FitResult, vol: f64, tolerance: f64) -> VolumeReport {
    let target = vol / (4.0 * PI);
    let classes: Vec<ClassComparison> = f
        .classes
        .iter()
        .map(|c| {
            let abs_deviation = (c.limit() - target).abs();
            ClassComparison {
                residue: c.residue,
                limit: c.limit(),
                abs_deviation,
                rel_deviation: abs_deviation / target.abs(),
                pass: abs_deviation <= tolerance,
            }
        })
        .collect();
    let verdict = if f.parity_flag == Some(1) {
        Verdict::NoPrediction
    } else if classes.iter().all(|c| c.pass) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    VolumeReport { volume: vol, volume_over_4pi: target, tolerance, classes, verdict }
}
