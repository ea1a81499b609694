//! Roots of unity, the quantum torus of the once-punctured torus and its
//! standard representations.
//!
//! The abstract algebra has generators `X, Y, Z` with `XY = q^4 YX`,
//! `YZ = q^4 ZY`, `ZX = q^4 XZ`. Everything here works with the images of
//! the generators under a representation, as dense `n x n` matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Greatest common divisor on signed integers.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Modular inverse of `a` modulo `m`, in `0..m`.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m))
}

/// A primitive `n`-th root of unity `q = exp(2 pi i k / n)` with `n` odd.
///
/// Powers are looked up in a table after reducing the exponent mod `n`, so
/// the quadratic exponents appearing in intertwiner entries stay exact.
#[derive(Debug, Clone, PartialEq)]
pub struct QRoot {
    n: usize,
    k: i64,
    powers: Vec<Complex64>,
}

impl QRoot {
    pub fn new(n: usize, k: i64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInput(format!("root order n = {n} must be at least 3")));
        }
        if n.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!("root order n = {n} must be odd")));
        }
        let g = gcd(k, n as i64);
        if g != 1 {
            return Err(Error::InvalidInput(format!(
                "exponent k = {k} is not coprime to n = {n} (gcd = {g})"
            )));
        }
        let kk = k.rem_euclid(n as i64);
        let powers = (0..n)
            .map(|m| {
                // Reduce k*m first so the angle stays in [0, 2 pi).
                let e = (kk * m as i64) % n as i64;
                Complex64::from_polar(1.0, 2.0 * PI * e as f64 / n as f64)
            })
            .collect();
        Ok(Self { n, k, powers })
    }

    /// `q = exp(2 pi i / n)`.
    pub fn standard(n: usize) -> Result<Self> {
        Self::new(n, 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    /// `q^m` for any integer `m`.
    #[inline]
    pub fn pow(&self, m: i64) -> Complex64 {
        self.powers[m.rem_euclid(self.n as i64) as usize]
    }

    pub fn value(&self) -> Complex64 {
        self.powers[1]
    }

    pub fn powers(&self) -> &[Complex64] {
        &self.powers
    }
}

/// Nonzero parameters `(x, y, z)` of a standard representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepTriple {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl RepTriple {
    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Result<Self> {
        if x == Complex64::new(0.0, 0.0) || y == Complex64::new(0.0, 0.0) || z == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidInput(format!(
                "representation parameters must be nonzero, got ({x}, {y}, {z})"
            )));
        }
        Ok(Self { x, y, z })
    }

    /// The central element `h = xyz`, image of the Weyl-ordered monomial `[XYZ]`.
    pub fn h(&self) -> Complex64 {
        self.x * self.y * self.z
    }
}

/// Images of the three generators under a representation.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrices {
    pub x: CMatrix,
    pub y: CMatrix,
    pub z: CMatrix,
}

impl GeneratorMatrices {
    pub fn dim(&self) -> usize {
        self.x.nrows()
    }

    pub fn as_array(&self) -> [&CMatrix; 3] {
        [&self.x, &self.y, &self.z]
    }

    /// Largest relative defect among `XY - q^4 YX`, `YZ - q^4 ZY`, `ZX - q^4 XZ`.
    pub fn commutation_defect(&self, q: &QRoot) -> f64 {
        let q4 = q.pow(4);
        let pairs = [(&self.x, &self.y), (&self.y, &self.z), (&self.z, &self.x)];
        pairs
            .iter()
            .map(|(a, b)| {
                let ab = *a * *b;
                let ba = *b * *a;
                let scale = ab.norm().max(f64::MIN_POSITIVE);
                (ab - ba * q4).norm() / scale
            })
            .fold(0.0, f64::max)
    }

    /// Conjugate every generator: `W -> P W P^{-1}`.
    pub fn conjugate_by(&self, p: &CMatrix) -> Result<Self> {
        let p_inv = invert(p)?;
        Ok(Self {
            x: p * &self.x * &p_inv,
            y: p * &self.y * &p_inv,
            z: p * &self.z * &p_inv,
        })
    }

    /// Largest relative Frobenius distance to another triple.
    pub fn distance(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (*a - b).norm() / a.norm().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }
}

/// Inverse by LU with partial pivoting; singular input is reported as degenerate.
pub fn invert(m: &CMatrix) -> Result<CMatrix> {
    let n = m.nrows();
    let lu = m.clone().lu();
    let scale = m.norm() / (n as f64).sqrt();
    let u = lu.u();
    let min_pivot = (0..n).map(|i| u[(i, i)].norm()).fold(f64::INFINITY, f64::min);
    if min_pivot.is_nan() || min_pivot <= 1e-12 * scale {
        return Err(Error::DegenerateWeight(format!(
            "matrix is numerically singular (smallest pivot {min_pivot:.3e})"
        )));
    }
    lu.try_inverse()
        .ok_or_else(|| Error::DegenerateWeight("matrix is singular".into()))
}

/// `m^e` by repeated squaring.
pub fn matrix_power(m: &CMatrix, mut e: u32) -> CMatrix {
    let n = m.nrows();
    let mut acc = CMatrix::identity(n, n);
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// Standard representation on the basis `w_1, ..., w_n` (stored 0-based):
/// `X w_i = x q^{4i} w_i`, `Y w_i = y q^{-2i} w_{i+1}`, `Z w_i = z q^{-2i} w_{i-1}`.
pub fn standard_rep(t: &RepTriple, q: &QRoot) -> GeneratorMatrices {
    let n = q.n();
    let zero = Complex64::new(0.0, 0.0);
    let mut x = CMatrix::from_element(n, n, zero);
    let mut y = x.clone();
    let mut z = x.clone();
    for i in 1..=n {
        let col = i - 1;
        let ii = i as i64;
        x[(col, col)] = t.x * q.pow(4 * ii);
        y[(i % n, col)] = t.y * q.pow(-2 * ii);
        z[((i + n - 2) % n, col)] = t.z * q.pow(-2 * ii);
    }
    GeneratorMatrices { x, y, z }
}

// (1 + q W)(1 + q^3 W) and the inverse of (1 + q W^{-1})(1 + q^3 W^{-1}).
fn dilog_factors(w: &CMatrix, w_inv: &CMatrix, q: &QRoot) -> Result<(CMatrix, CMatrix)> {
    let n = w.nrows();
    let id = CMatrix::identity(n, n);
    let (q1, q3) = (q.pow(1), q.pow(3));
    let forward = (&id + w * q1) * (&id + w * q3);
    let a = invert(&(&id + w_inv * q1))?;
    let b = invert(&(&id + w_inv * q3))?;
    Ok((forward, a * b))
}

/// Evaluate the left coordinate change through a representation:
/// `X -> Y^{-1}`, `Y -> (1+qY)(1+q^3Y) X`, `Z -> (1+qY^{-1})^{-1}(1+q^3Y^{-1})^{-1} Z`.
pub fn apply_left_iso(g: &GeneratorMatrices, q: &QRoot) -> Result<GeneratorMatrices> {
    let y_inv = invert(&g.y)?;
    let (forward, backward) = dilog_factors(&g.y, &y_inv, q)?;
    Ok(GeneratorMatrices {
        y: forward * &g.x,
        z: backward * &g.z,
        x: y_inv,
    })
}

/// Evaluate the right coordinate change through a representation:
/// `X -> Z^{-1}`, `Y -> (1+qZ)(1+q^3Z) Y`, `Z -> (1+qZ^{-1})^{-1}(1+q^3Z^{-1})^{-1} X`.
pub fn apply_right_iso(g: &GeneratorMatrices, q: &QRoot) -> Result<GeneratorMatrices> {
    let z_inv = invert(&g.z)?;
    let (forward, backward) = dilog_factors(&g.z, &z_inv, q)?;
    Ok(GeneratorMatrices {
        y: forward * &g.y,
        z: backward * &g.x,
        x: z_inv,
    })
}
