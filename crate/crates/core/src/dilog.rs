//! Bloch-Wigner dilogarithm, the volume of an ideal hyperbolic tetrahedron.

use num_complex::Complex64;

use crate::error::{Error, Result};

// Bernoulli numbers B_2, B_4, ..., B_30.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// `Li_2(z)` for `|z| <= 1`, `Re z <= 1/2`, via the Bernoulli series in `w = -log(1 - z)`.
fn li2_reduced(z: Complex64) -> Complex64 {
    let w = -(Complex64::new(1.0, 0.0) - z).ln();
    let w2 = w * w;
    // B_0 w + B_1 w^2 / 2
    let mut sum = w - w2 * 0.25;
    let mut power = w;
    let mut fact = 1.0f64;
    for (m, b) in BERNOULLI_EVEN.iter().enumerate() {
        let k = 2 * (m + 1);
        power *= w2;
        fact *= (k * (k + 1)) as f64;
        let term = power * (b / fact);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// `D(z) = Im Li_2(z) + arg(1 - z) log|z|`.
///
/// Reduced to `|z| <= 1`, `Re z <= 1/2` with `D(1/z) = -D(z)` and `D(1-z) = -D(z)`.
pub fn bloch_wigner(z: Complex64) -> Result<f64> {
    let one = Complex64::new(1.0, 0.0);
    if z.norm() == 0.0 || (z - one).norm() == 0.0 {
        return Err(Error::InvalidInput(format!("Bloch-Wigner undefined at boundary point {z}")));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite argument {z}")));
    }
    let mut w = z;
    let mut sign = 1.0;
    if w.norm() > 1.0 {
        w = w.inv();
        sign = -sign;
    }
    if w.re > 0.5 {
        w = one - w;
        sign = -sign;
    }
    let d = li2_reduced(w).im + (one - w).arg() * w.norm().ln();
    Ok(sign * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn regular_tetrahedron() {
        let d = bloch_wigner(Complex64::from_polar(1.0, PI / 3.0)).unwrap();
        assert!((d - 1.0149416064096536).abs() < 1e-13, "{d}");
    }

    #[test]
    fn real_axis_is_zero() {
        for x in [-5.0, -1.0, -0.3, 0.2, 0.5, 0.9, 1.5, 3.0] {
            assert!(bloch_wigner(c(x, 0.0)).unwrap().abs() < 1e-15, "x = {x}");
        }
    }

    #[test]
    fn boundary_rejected() {
        assert!(bloch_wigner(c(0.0, 0.0)).is_err());
        assert!(bloch_wigner(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn six_fold_symmetry() {
        let one = c(1.0, 0.0);
        for z in [c(0.3, 0.7), c(-2.0, 0.4), c(1.2, -3.0), c(0.5, 0.001)] {
            let d = bloch_wigner(z).unwrap();
            assert!((bloch_wigner(z.conj()).unwrap() + d).abs() < 1e-13);
            assert!((bloch_wigner(one - z).unwrap() + d).abs() < 1e-13);
            assert!((bloch_wigner(z.inv()).unwrap() + d).abs() < 1e-13);
            assert!((bloch_wigner(one - z.inv()).unwrap() - d).abs() < 1e-13);
        }
    }
}
