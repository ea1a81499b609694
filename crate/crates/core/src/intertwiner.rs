//! Elementary intertwiners `L_{uv}`, `R_{uv}`, `T_{l0 m0 n0}` and their products.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{CMatrix, QRoot};
use crate::error::{Error, Result};
use crate::qdilog::{dq_abs_nth_root, QdlParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IntertwinerKind {
    Left,
    Right,
    Twist,
    Composite,
}

/// A dense intertwiner matrix with `|det| = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Intertwiner {
    pub mat: CMatrix,
    pub kind: IntertwinerKind,
}

impl Intertwiner {
    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    pub fn det(&self) -> Complex64 {
        self.mat.clone().lu().determinant()
    }

    /// Row-major `[re, im]` dump for debugging.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.n())
            .map(|i| (0..self.n()).map(|j| [self.mat[(i, j)].re, self.mat[(i, j)].im]).collect())
            .collect();
        serde_json::json!({ "kind": self.kind, "n": self.n(), "rows": rows })
    }
}

/// Exponent of `q` in entry `(i, j)` (1-based) of the left or right intertwiner.
pub type ExponentPattern = fn(i64, i64) -> i64;

pub fn left_exponent(i: i64, j: i64) -> i64 {
    -i * i + j * j + 4 * i * j + i - j
}

pub fn right_exponent(i: i64, j: i64) -> i64 {
    i * i + 3 * j * j - 4 * i * j + i - j
}

/// Entry `(i, j)` is `qdl(u,v|2j) / (|D^q(u)|^{1/n} sqrt n) * q^{pattern(i,j)}`.
pub fn build_with_pattern(
    p: &QdlParams<'_>,
    pattern: ExponentPattern,
    kind: IntertwinerKind,
) -> Result<Intertwiner> {
    let q = p.q;
    let n = q.n();
    let norm = dq_abs_nth_root(p.u, q)? * (n as f64).sqrt();
    let table = p.table();
    let mat = CMatrix::from_fn(n, n, |r, c| {
        let (i, j) = (r as i64 + 1, c as i64 + 1);
        let column = table[(2 * c + 2) % n] / norm;
        column * q.pow(pattern(i, j))
    });
    Ok(Intertwiner { mat, kind })
}

pub fn build_left(p: &QdlParams<'_>) -> Result<Intertwiner> {
    build_with_pattern(p, left_exponent, IntertwinerKind::Left)
}

pub fn build_right(p: &QdlParams<'_>) -> Result<Intertwiner> {
    build_with_pattern(p, right_exponent, IntertwinerKind::Right)
}

/// `T(w_j) = q^{2j(n0 - m0)} w_{j + l0}`; requires `l0 + m0 + n0 = 0 mod n`.
pub fn build_twist(l0: i64, m0: i64, n0: i64, q: &QRoot) -> Result<Intertwiner> {
    let n = q.n();
    if (l0 + m0 + n0).rem_euclid(n as i64) != 0 {
        return Err(Error::InvalidInput(format!(
            "twist indices ({l0}, {m0}, {n0}) do not sum to 0 mod {n}"
        )));
    }
    let mut mat = CMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for j in 1..=n as i64 {
        let i = (j - 1 + l0).rem_euclid(n as i64) as usize;
        mat[(i, (j - 1) as usize)] = q.pow(2 * j * (n0 - m0));
    }
    Ok(Intertwiner { mat, kind: IntertwinerKind::Twist })
}

/// Product of the parts in the listed order.
pub fn compose(parts: &[Intertwiner]) -> Result<Intertwiner> {
    let first = parts
        .first()
        .ok_or_else(|| Error::InvalidInput("cannot compose an empty list".into()))?;
    let n = first.n();
    let mut mat = first.mat.clone();
    for p in &parts[1..] {
        if p.n() != n {
            return Err(Error::SizeMismatch { expected: n, got: p.n() });
        }
        mat = if p.kind == IntertwinerKind::Twist {
            times_monomial(&mat, &p.mat)
        } else {
            &mat * &p.mat
        };
    }
    Ok(Intertwiner { mat, kind: IntertwinerKind::Composite })
}

// `a * m` where `m` has exactly one nonzero entry per column.
fn times_monomial(a: &CMatrix, m: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut out = CMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for j in 0..n {
        if let Some(i) = (0..n).find(|&i| m[(i, j)] != Complex64::new(0.0, 0.0)) {
            let s = m[(i, j)];
            out.set_column(j, &(a.column(i) * s));
        }
    }
    out
}
