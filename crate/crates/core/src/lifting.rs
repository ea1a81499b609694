//! Branch-consistent logarithms of the edge weights along a periodic sweep,
//! the integer correction factors they produce, and the per-`n`
//! representation parameters derived from them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::algebra::{mod_inverse, QRoot};
use crate::charvar::{EdgeWeights, Letter, SweepWeights};
use crate::error::{Error, Result};

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Logarithms `(A_0, B_0, C_0)` of the initial weights and `theta_v = A_0 + B_0 + C_0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialLogs {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub eta: i64,
}

impl InitialLogs {
    pub fn theta_v(&self) -> Complex64 {
        self.a + self.b + self.c
    }
}

/// Principal logarithms, with `A_0` shifted by `2 pi i eta`.
pub fn init_logs(w: &EdgeWeights, eta: i64) -> InitialLogs {
    InitialLogs { a: w.a.ln() + TWO_PI_I * eta as f64, b: w.b.ln(), c: w.c.ln(), eta }
}

/// How `V_k` with `exp(V_k) = 1 + 1/a_k` is chosen.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum BranchRule {
    #[default]
    Principal,
    /// Principal logarithm plus `2 pi i s_k` at step `k` (one shift per letter).
    Shifted(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogLift {
    #[serde(with = "crate::serde_complex::pair")]
    pub theta_v: Complex64,
    pub eta: i64,
    /// `A_k`, `k = 0..=k0`.
    #[serde(rename = "A", with = "crate::serde_complex::vec")]
    pub a: Vec<Complex64>,
    #[serde(rename = "B", with = "crate::serde_complex::vec")]
    pub b: Vec<Complex64>,
    #[serde(rename = "C", with = "crate::serde_complex::vec")]
    pub c: Vec<Complex64>,
    /// `V_k`, `k = 1..=k0`, stored at index `k - 1`.
    #[serde(rename = "V", with = "crate::serde_complex::vec")]
    pub v: Vec<Complex64>,
    pub lhat: i64,
    pub mhat: i64,
    pub nhat: i64,
}

impl LogLift {
    pub fn k0(&self) -> usize {
        self.v.len()
    }

    pub fn hats(&self) -> (i64, i64, i64) {
        (self.lhat, self.mhat, self.nhat)
    }

    /// `(lhat - mhat + nhat) / 2`, whose parity separates the cancelling case.
    pub fn parity_value(&self) -> i64 {
        (self.lhat - self.mhat + self.nhat) / 2
    }

    /// Largest deviation of `A_k + B_k + C_k` from `theta_v`.
    pub fn theta_drift(&self) -> f64 {
        (0..self.a.len())
            .map(|k| (self.a[k] + self.b[k] + self.c[k] - self.theta_v).norm())
            .fold(0.0, f64::max)
    }
}

fn nearest_integer(z: Complex64, what: &str) -> Result<i64> {
    let k = z.re.round();
    let defect = (z - Complex64::new(k, 0.0)).norm();
    if defect >= 1e-6 {
        return Err(Error::BranchInconsistency(format!(
            "{what} winding {z} is {defect:.3e} away from an integer"
        )));
    }
    Ok(k as i64)
}

fn exp_matches(log: Complex64, w: Complex64) -> bool {
    (log.exp() - w).norm() <= 1e-9 * w.norm()
}

/// Propagates the logarithms along the sweep and reads off the integer windings.
pub fn lift(s: &SweepWeights, logs0: &InitialLogs, rule: &BranchRule) -> Result<LogLift> {
    let k0 = s.word.len();
    if !s.is_periodic(1e-9) {
        return Err(Error::InvalidInput(format!(
            "sweep is not periodic (defect {:.3e})",
            s.periodicity_defect()
        )));
    }
    let w0 = s.initial();
    if !(exp_matches(logs0.a, w0.a) && exp_matches(logs0.b, w0.b) && exp_matches(logs0.c, w0.c)) {
        return Err(Error::InvalidInput("initial logarithms do not match the initial weights".into()));
    }
    let shifts = match rule {
        BranchRule::Principal => vec![0; k0],
        BranchRule::Shifted(v) if v.len() == k0 => v.clone(),
        BranchRule::Shifted(v) => return Err(Error::SizeMismatch { expected: k0, got: v.len() }),
    };

    let (mut a, mut b, mut c) = (vec![logs0.a], vec![logs0.b], vec![logs0.c]);
    let mut v = Vec::with_capacity(k0);
    for (k, &letter) in s.word.letters().iter().enumerate() {
        let ak = s.steps[k + 1].a;
        let vk = (ONE + ak.inv()).ln() + TWO_PI_I * shifts[k] as f64;
        let (pa, pb, pc) = (a[k], b[k], c[k]);
        let (na, nb, nc) = match letter {
            Letter::L => (-pb, vk * 2.0 + pa, -vk * 2.0 + pb * 2.0 + pc),
            Letter::R => (-pc, vk * 2.0 + pb, -vk * 2.0 + pc * 2.0 + pa),
        };
        a.push(na);
        b.push(nb);
        c.push(nc);
        v.push(vk);
    }
    let lhat = nearest_integer((a[0] - a[k0]) / TWO_PI_I, "A")?;
    let mhat = nearest_integer((b[0] - b[k0]) / TWO_PI_I, "B")?;
    let nhat = nearest_integer((c[0] - c[k0]) / TWO_PI_I, "C")?;
    if lhat + mhat + nhat != 0 {
        return Err(Error::BranchInconsistency(format!(
            "correction windings ({lhat}, {mhat}, {nhat}) do not sum to zero"
        )));
    }
    Ok(LogLift { theta_v: logs0.theta_v(), eta: logs0.eta, a, b, c, v, lhat, mhat, nhat })
}

/// Parameters of the standard representations used at a given root of unity.
#[derive(Debug, Clone, PartialEq)]
pub struct RepParams {
    pub n: usize,
    /// `u_k`, `v_k` for `k = 1..=k0` at index `k - 1`.
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
    /// `x_k`, `y_k`, `z_k` for `k = 0..=k0`.
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
    pub z: Vec<Complex64>,
    pub h: Complex64,
}

impl RepParams {
    /// The puncture weight `p_v = h + 1/h`.
    pub fn puncture_weight(&self) -> Complex64 {
        self.h + self.h.inv()
    }
}

pub fn rep_params(lift: &LogLift, q: &QRoot) -> RepParams {
    let nf = q.n() as f64;
    let root = |w: &Complex64| (w / nf).exp();
    RepParams {
        n: q.n(),
        u: lift.a[1..].iter().map(|ak| q.value() * (-ak / nf).exp()).collect(),
        v: lift.v.iter().map(root).collect(),
        x: lift.a.iter().map(root).collect(),
        y: lift.b.iter().map(root).collect(),
        z: lift.c.iter().map(root).collect(),
        h: root(&lift.theta_v),
    }
}

/// Twist indices `(l0, m0, n0)` in `0..n`: the windings times the inverse of `4k` mod `n`.
pub fn correction_factors(lift: &LogLift, n: usize, k: i64) -> Result<(i64, i64, i64)> {
    let n = n as i64;
    let inv = mod_inverse(4 * k, n)
        .ok_or_else(|| Error::InvalidInput(format!("4k = {} is not invertible mod {n}", 4 * k)))?;
    let scale = |h: i64| (h.rem_euclid(n) * inv).rem_euclid(n);
    Ok((scale(lift.lhat), scale(lift.mhat), scale(lift.nhat)))
}
