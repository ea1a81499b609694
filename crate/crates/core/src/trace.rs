//! The intertwiner `Lambda = Lambda_1 ... Lambda_k0 T` at each odd `n`, its
//! trace by two independent routes, and scans over `n`.

use num_complex::Complex64;
use rayon::prelude::*;
use std::io::{self, Read, Write};

use crate::algebra::{apply_left_iso, apply_right_iso, mod_inverse, standard_rep, CMatrix, QRoot, RepTriple};
use crate::charvar::{Letter, MonodromyWord};
use crate::error::{Error, Result};
use crate::intertwiner::{build_left, build_right, build_twist, compose, Intertwiner};
use crate::lifting::{correction_factors, rep_params, LogLift};
use crate::qdilog::{dq_abs_nth_root, QdlParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceMethod {
    /// Trace of the explicit matrix product.
    #[default]
    Product,
    /// The closed multi-sum in the hatted correction factors.
    Sum,
    /// Both, cross-checked.
    Both,
}

fn check_inputs(word: &MonodromyWord, lift: &LogLift) -> Result<()> {
    word.require_pseudo_anosov()?;
    if lift.k0() != word.len() {
        return Err(Error::SizeMismatch { expected: word.len(), got: lift.k0() });
    }
    Ok(())
}

fn elementary_parts(word: &MonodromyWord, lift: &LogLift, q: &QRoot) -> Result<Vec<Intertwiner>> {
    check_inputs(word, lift)?;
    let p = rep_params(lift, q);
    let mut parts = Vec::with_capacity(word.len() + 1);
    for (k, letter) in word.letters().iter().enumerate() {
        let params = QdlParams::new(p.u[k], p.v[k], q)?;
        parts.push(match letter {
            Letter::L => build_left(&params)?,
            Letter::R => build_right(&params)?,
        });
    }
    let (l0, m0, n0) = correction_factors(lift, q.n(), q.k())?;
    parts.push(build_twist(l0, m0, n0, q)?);
    Ok(parts)
}

/// `Lambda_1 ... Lambda_k0 T_{l0 m0 n0}` as a single matrix.
pub fn intertwiner_for(word: &MonodromyWord, lift: &LogLift, q: &QRoot) -> Result<Intertwiner> {
    compose(&elementary_parts(word, lift, q)?)
}

fn trace_of_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Trace of the composed intertwiner. Only the last two factors are merged
/// without a full product, since only the trace is needed.
pub fn trace_product(word: &MonodromyWord, lift: &LogLift, q: &QRoot) -> Result<Complex64> {
    let mut parts = elementary_parts(word, lift, q)?;
    let k0 = word.len();
    let tail = compose(&parts.split_off(k0 - 1))?;
    let head = compose(&parts)?;
    Ok(trace_of_product(&head.mat, &tail.mat))
}

/// Closed multi-sum, up to a unit-modulus scalar:
///
/// `n^{-k0/2} prod_k |D(u_k)|^{-1/n} sum_{i_1..i_k0} prod_k QDL(u_k, v_k | 2 i_k)
///  q^{sum_k i_k^2 (e_k + e_{k+1} + 2) - 4 sum_k e_{k+1} i_k i_{k+1}}
///  q^{e_1 lhat i_1 + (-e_1 lhat - mhat + nhat)/2 i_k0}`,
///
/// with cyclic indices and `e_k = -1` for `L`, `+1` for `R`. The cyclic sum
/// is contracted as the trace of a chain of `n x n` transfer matrices in word order.
pub fn trace_sum(word: &MonodromyWord, lift: &LogLift, q: &QRoot) -> Result<Complex64> {
    check_inputs(word, lift)?;
    let n = q.n();
    let k0 = word.len();
    let eps: Vec<i64> = word.letters().iter().map(|l| l.sign()).collect();
    let boundary = -eps[0] * lift.lhat - lift.mhat + lift.nhat;
    if boundary % 2 != 0 {
        return Err(Error::Internal(format!(
            "-e1 lhat - mhat + nhat = {boundary} is odd although the windings sum to zero"
        )));
    }
    // For q = exp(2 pi i k / n) the windings enter through q^{1/k}.
    let kinv = mod_inverse(q.k(), n as i64).expect("k is coprime to n");
    let first_coeff = eps[0] * lift.lhat * kinv;
    let last_coeff = boundary / 2 * kinv;

    let p = rep_params(lift, q);
    let mut prefactor = (n as f64).powf(-(k0 as f64) / 2.0);
    let mut transfer: Option<CMatrix> = None;
    for k in 0..k0 {
        let params = QdlParams::new(p.u[k], p.v[k], q)?;
        prefactor /= dq_abs_nth_root(params.u, q)?;
        let table = params.table();
        let (ek, ek1) = (eps[k], eps[(k + 1) % k0]);
        let m = CMatrix::from_fn(n, n, |r, c| {
            let (i, j) = (r as i64 + 1, c as i64 + 1);
            let mut e = i * i * (ek + ek1 + 2) - 4 * ek1 * i * j;
            if k == 0 {
                e += first_coeff * i;
            }
            if k == k0 - 1 {
                e += last_coeff * i;
            }
            table[(2 * r + 2) % n] * q.pow(e)
        });
        transfer = Some(match transfer {
            None => m,
            Some(acc) if k == k0 - 1 => {
                return Ok(trace_of_product(&acc, &m) * prefactor);
            }
            Some(acc) => acc * m,
        });
    }
    unreachable!("pseudo-Anosov words have at least two letters")
}

/// Largest relative distance between `rho_0 o Phi o Psi` and `Lambda rho_0 Lambda^{-1}` on
/// the three generators, where `Phi` chains the left/right coordinate changes
/// along the word and `rho_0` is the standard representation at `(x_0, y_0, z_0)`.
pub fn global_intertwining_residual(word: &MonodromyWord, lift: &LogLift, q: &QRoot) -> Result<f64> {
    let p = rep_params(lift, q);
    let rho0 = standard_rep(&RepTriple::new(p.x[0], p.y[0], p.z[0])?, q);
    let mut chained = rho0.clone();
    for letter in word.letters() {
        chained = match letter {
            Letter::L => apply_left_iso(&chained, q)?,
            Letter::R => apply_right_iso(&chained, q)?,
        };
    }
    let lambda = intertwiner_for(word, lift, q)?;
    Ok(chained.distance(&rho0.conjugate_by(&lambda.mat)?))
}

/// Per-row status flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RowFlags {
    pub degenerate: bool,
    /// Product and sum disagree in modulus beyond `1e-7` relative.
    pub suspect: bool,
}

impl RowFlags {
    pub fn label(&self) -> String {
        let mut out = Vec::new();
        if self.degenerate {
            out.push("degenerate");
        }
        if self.suspect {
            out.push("suspect");
        }
        out.join("|")
    }

    pub fn parse(label: &str) -> Result<Self> {
        let mut f = Self::default();
        for part in label.split('|').filter(|p| !p.is_empty()) {
            match part {
                "degenerate" => f.degenerate = true,
                "suspect" => f.suspect = true,
                other => return Err(Error::InvalidInput(format!("unknown row flag {other:?}"))),
            }
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    /// `n mod 4`.
    pub mode: usize,
    /// Raw trace; its phase carries no meaning.
    pub trace: Complex64,
    pub abs_trace: f64,
    /// `log(abs_trace) / n`.
    pub ell: f64,
    pub flags: RowFlags,
}

impl TraceRow {
    pub fn usable(&self) -> bool {
        !self.flags.degenerate && !self.flags.suspect && self.ell.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TraceSeries {
    pub rows: Vec<TraceRow>,
}

pub const CSV_HEADER: &str = "n,mode,re_trace,im_trace,abs_trace,ell,flags";

impl TraceSeries {
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                r.n,
                r.mode,
                r.trace.re,
                r.trace.im,
                r.abs_trace,
                r.ell,
                r.flags.label()
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }

    /// Reads the format written by [`TraceSeries::write_csv`].
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let header = rdr.headers().map_err(|e| Error::InvalidInput(format!("trace CSV: {e}")))?;
        if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
            return Err(Error::InvalidInput(format!("trace CSV header must be {CSV_HEADER:?}")));
        }
        let mut rows = Vec::new();
        for rec in rdr.deserialize::<(usize, usize, f64, f64, f64, f64, String)>() {
            let (n, mode, re, im, abs_trace, ell, flags) =
                rec.map_err(|e| Error::InvalidInput(format!("trace CSV: {e}")))?;
            rows.push(TraceRow {
                n,
                mode,
                trace: Complex64::new(re, im),
                abs_trace,
                ell,
                flags: RowFlags::parse(&flags)?,
            });
        }
        Ok(Self { rows })
    }
}

/// Options for [`series`].
#[derive(Debug, Clone)]
pub struct SeriesOptions {
    pub n_min: usize,
    pub n_max: usize,
    pub method: TraceMethod,
    /// Root exponent: `q = exp(2 pi i k / n)`.
    pub k: i64,
    /// Worker threads; `0` uses the global rayon pool.
    pub workers: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self { n_min: 3, n_max: 301, method: TraceMethod::Product, k: 1, workers: 0 }
    }
}

fn degenerate_row(n: usize) -> TraceRow {
    TraceRow {
        n,
        mode: n % 4,
        trace: Complex64::new(f64::NAN, f64::NAN),
        abs_trace: f64::NAN,
        ell: f64::NAN,
        flags: RowFlags { degenerate: true, suspect: false },
    }
}

fn compute_row(word: &MonodromyWord, lift: &LogLift, n: usize, opts: &SeriesOptions) -> TraceRow {
    let Ok(q) = QRoot::new(n, opts.k) else {
        return degenerate_row(n);
    };
    let result = match opts.method {
        TraceMethod::Product => trace_product(word, lift, &q).map(|t| (t, false)),
        TraceMethod::Sum => trace_sum(word, lift, &q).map(|t| (t, false)),
        TraceMethod::Both => trace_product(word, lift, &q).and_then(|t| {
            let s = trace_sum(word, lift, &q)?;
            let rel = (t.norm() - s.norm()).abs() / t.norm().max(f64::MIN_POSITIVE);
            Ok((t, rel.is_nan() || rel > 1e-7))
        }),
    };
    match result {
        Ok((trace, suspect)) => {
            let abs_trace = trace.norm();
            let ell = abs_trace.ln() / n as f64;
            let degenerate = !(abs_trace > 0.0 && ell.is_finite());
            TraceRow { n, mode: n % 4, trace, abs_trace, ell, flags: RowFlags { degenerate, suspect } }
        }
        Err(_) => degenerate_row(n),
    }
}

/// One row per odd `n` in `[n_min, n_max]`; row failures are flagged, never fatal.
pub fn series(word: &MonodromyWord, lift: &LogLift, opts: &SeriesOptions) -> Result<TraceSeries> {
    check_inputs(word, lift)?;
    if opts.n_min > opts.n_max {
        return Err(Error::InvalidInput(format!("n_min = {} exceeds n_max = {}", opts.n_min, opts.n_max)));
    }
    let start = opts.n_min.max(3) | 1;
    let ns: Vec<usize> = (start..=opts.n_max).step_by(2).collect();
    let run = || ns.par_iter().map(|&n| compute_row(word, lift, n, opts)).collect::<Vec<_>>();
    let rows = if opts.workers == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot build worker pool: {e}")))?
            .install(run)
    };
    Ok(TraceSeries { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_labels() {
        assert_eq!(RowFlags::default().label(), "");
        assert_eq!(RowFlags { degenerate: true, suspect: true }.label(), "degenerate|suspect");
    }

    #[test]
    fn csv_roundtrip() {
        let rows = vec![
            TraceRow {
                n: 7,
                mode: 3,
                trace: Complex64::new(-0.1, 2.0 / 3.0),
                abs_trace: 0.6741998624632421,
                ell: -0.05630,
                flags: RowFlags::default(),
            },
            degenerate_row(9),
        ];
        let s = TraceSeries { rows };
        let back = TraceSeries::read_csv(s.to_csv_string().as_bytes()).unwrap();
        assert_eq!(back.to_csv_string(), s.to_csv_string());
        assert_eq!(back.rows[0], s.rows[0]);
        assert!(back.rows[1].flags.degenerate && back.rows[1].ell.is_nan());
    }

    #[test]
    fn csv_format() {
        let s = TraceSeries {
            rows: vec![TraceRow {
                n: 5,
                mode: 1,
                trace: Complex64::new(1.5, -0.25),
                abs_trace: 1.5206906325745548,
                ell: 0.08383,
                flags: RowFlags::default(),
            }],
        };
        let text = s.to_csv_string();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(
            lines.next(),
            Some("5,1,1.5000000000000000e0,-2.5000000000000000e-1,1.5206906325745548e0,8.3830000000000002e-2,")
        );
    }
}
