//! Discrete (Faddeev-Kashaev) quantum dilogarithm at an odd root of unity.

use num_complex::Complex64;

use crate::algebra::QRoot;
use crate::error::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Parameters `(u, v)` with `v^n = 1 + u^n != 0`.
#[derive(Debug, Clone, Copy)]
pub struct QdlParams<'q> {
    pub u: Complex64,
    pub v: Complex64,
    pub q: &'q QRoot,
}

fn one_plus_u_n(u: Complex64, n: usize) -> Result<Complex64> {
    let un = u.powu(n as u32);
    let s = ONE + un;
    if s.norm() <= 1e-12 * (1.0 + un.norm()) {
        return Err(Error::DegenerateWeight(format!("1 + u^n vanishes for u = {u}")));
    }
    Ok(s)
}

impl<'q> QdlParams<'q> {
    pub fn new(u: Complex64, v: Complex64, q: &'q QRoot) -> Result<Self> {
        let n = q.n();
        let s = one_plus_u_n(u, n)?;
        let vn = v.powu(n as u32);
        if (vn - s).norm() > 1e-10 * s.norm().max(vn.norm()) {
            return Err(Error::InvalidInput(format!(
                "v^n = {vn} does not match 1 + u^n = {s}"
            )));
        }
        Ok(Self { u, v, q })
    }

    /// Uses the principal `n`-th root of `1 + u^n` for `v`.
    pub fn principal(u: Complex64, q: &'q QRoot) -> Result<Self> {
        let s = one_plus_u_n(u, q.n())?;
        let v = (s.ln() / q.n() as f64).exp();
        Ok(Self { u, v, q })
    }

    /// `qdl(i)` for `i = 0..n`, as prefix products of `(1 + u q^{-2k}) / v`.
    pub fn table(&self) -> Vec<Complex64> {
        let n = self.q.n();
        let mut out = Vec::with_capacity(n);
        let mut acc = ONE;
        out.push(acc);
        for k in 1..n {
            acc *= (ONE + self.u * self.q.pow(-2 * k as i64)) / self.v;
            out.push(acc);
        }
        out
    }
}

/// `QDL(u, v | i) = v^{-i} prod_{k=1}^{i} (1 + u q^{-2k})`, extended to all
/// integers by `n`-periodicity.
pub fn qdl(p: &QdlParams<'_>, i: i64) -> Complex64 {
    let n = p.q.n() as i64;
    let i = i.rem_euclid(n);
    (1..=i).fold(ONE, |acc, k| acc * (ONE + p.u * p.q.pow(-2 * k)) / p.v)
}

/// `log D^q(u)` with `D^q(u) = (1+u^n)^{-(n+1)/2} prod_{k=1}^{n} (1 + u q^{-2k})^{n-k+1}`.
///
/// All exponents are integers, so the imaginary part is only defined mod 2 pi.
pub fn dq_log(u: Complex64, q: &QRoot) -> Result<Complex64> {
    let n = q.n();
    let s = one_plus_u_n(u, n)?;
    let mut acc = -(n.div_ceil(2) as f64) * s.ln();
    for k in 1..=n {
        let f = ONE + u * q.pow(-2 * k as i64);
        acc += (n - k + 1) as f64 * f.ln();
    }
    Ok(acc)
}

pub fn dq(u: Complex64, q: &QRoot) -> Result<Complex64> {
    dq_log(u, q).map(|l| l.exp())
}

/// `|D^q(u)|^{1/n}`, computed in log space.
pub fn dq_abs_nth_root(u: Complex64, q: &QRoot) -> Result<f64> {
    dq_log(u, q).map(|l| (l.re / q.n() as f64).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn qdl_trivial_indices() {
        let q = QRoot::new(7, 1).unwrap();
        let p = QdlParams::principal(c(0.3, -1.1), &q).unwrap();
        assert_eq!(qdl(&p, 0), ONE);
        assert!((qdl(&p, 7) - ONE).norm() < 1e-15);
        // Full period, evaluated without reduction.
        let full = (1..=7).fold(ONE, |acc, k| acc * (ONE + p.u * q.pow(-2 * k)) / p.v);
        assert!((full - ONE).norm() < 1e-12);
    }

    #[test]
    fn qdl_n3_u1() {
        let q = QRoot::new(3, 1).unwrap();
        let v = c(2f64.powf(1.0 / 3.0), 0.0);
        let p = QdlParams::new(ONE, v, &q).unwrap();
        let got = qdl(&p, 1);
        assert!((got - c(0.396850262992050, 0.687364818499301)).norm() < 1e-12, "{got}");
    }

    #[test]
    fn dq_n3_u1() {
        let q = QRoot::new(3, 1).unwrap();
        let d = dq(ONE, &q).unwrap();
        assert!((d - c(0.25, 0.4330127018922193)).norm() < 1e-12, "{d}");
        assert!((dq_abs_nth_root(ONE, &q).unwrap() - 0.5f64.powf(1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn dq_at_zero_is_one() {
        for n in [3usize, 5, 9, 301] {
            let q = QRoot::new(n, 1).unwrap();
            assert!((dq(c(0.0, 0.0), &q).unwrap() - ONE).norm() < 1e-14);
            assert_eq!(dq_abs_nth_root(c(0.0, 0.0), &q).unwrap(), 1.0);
        }
    }

    #[test]
    fn dq_matches_product_of_qdl() {
        for n in [3usize, 5, 7, 9, 11] {
            let q = QRoot::new(n, 1).unwrap();
            let u = c(0.8, 0.45);
            let p = QdlParams::principal(u, &q).unwrap();
            let direct = (1..=n as i64).fold(ONE, |acc, i| acc * qdl(&p, i));
            let even = (1..=n as i64).fold(ONE, |acc, i| acc * qdl(&p, 2 * i));
            let closed = dq(u, &q).unwrap();
            assert!((direct - closed).norm() < 1e-12 * closed.norm());
            assert!((even - closed).norm() < 1e-12 * closed.norm());
        }
    }

    #[test]
    fn large_n_does_not_overflow() {
        let q = QRoot::new(301, 1).unwrap();
        let r = dq_abs_nth_root(c(1.7, -2.2), &q).unwrap();
        assert!(r.is_finite() && r > 0.0);
    }

    #[test]
    fn degenerate_u_rejected() {
        let q = QRoot::new(5, 1).unwrap();
        // u^5 = -1
        let u = Complex64::from_polar(1.0, PI / 5.0);
        assert!(matches!(dq(u, &q), Err(Error::DegenerateWeight(_))));
        assert!(QdlParams::principal(u, &q).is_err());
    }

    #[test]
    fn mismatched_v_rejected() {
        let q = QRoot::new(5, 1).unwrap();
        assert!(QdlParams::new(ONE, ONE, &q).is_err());
    }

    #[test]
    fn table_matches_pointwise() {
        let q = QRoot::new(11, 1).unwrap();
        let p = QdlParams::principal(c(-0.4, 0.9), &q).unwrap();
        let t = p.table();
        for (i, ti) in t.iter().enumerate() {
            assert!((ti - qdl(&p, i as i64)).norm() < 1e-13);
        }
    }
}
