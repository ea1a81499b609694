//! Periodic edge-weight systems: the closed form for `LLR` and Newton
//! solvers for general words.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use super::{sweep, tetra_shapes, EdgeWeights, MonodromyWord, SweepWeights};
use crate::error::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const MAX_ITER: usize = 100;
const PERIODIC_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// The two components of the periodic locus of `LLR`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    One,
    Two,
}

/// Closed-form periodic systems for the word `LLR`, parametrised by `a0`.
/// Square roots are principal.
pub fn solve_periodic_llr(a0: Complex64, branch: Branch, family: Family) -> Result<EdgeWeights> {
    if a0.norm() < 1e-14 || (a0 + ONE).norm() < 1e-14 {
        return Err(Error::DegenerateWeight(format!("a0 = {a0} is an excluded value")));
    }
    let i = Complex64::new(0.0, 1.0);
    let denom = (a0 + ONE) * 2.0;
    let (lead, disc) = match family {
        Family::One => (a0 * 2.0 + 1.0, a0 * a0 * 8.0 + a0 * 11.0 + 4.0),
        Family::Two => (a0 * 2.0 + 3.0, a0 * 3.0 + 4.0),
    };
    let b0 = -lead / denom + i * branch.sign() * disc.sqrt() / (denom * a0.sqrt());
    let opb = ONE + b0;
    let num = ONE + a0 * opb * opb;
    let c0 = num * num / (a0.powu(3) * b0 * b0 * opb * opb);
    let w = EdgeWeights::new(a0, b0, c0).map_err(|e| Error::DegenerateWeight(e.to_string()))?;
    let s = sweep(&MonodromyWord::parse("LLR", 0)?, w)?;
    if !s.is_periodic(1e-9) {
        return Err(Error::DegenerateWeight(format!(
            "closed-form weights for a0 = {a0} fail to close up (defect {:.3e})",
            s.periodicity_defect()
        )));
    }
    Ok(w)
}

/// Residual of the defining quadratic relation of an `LLR` family at `(a0, b0)`.
pub fn llr_family_relation(family: Family, a0: Complex64, b0: Complex64) -> Complex64 {
    match family {
        Family::One => {
            let t = (a0 + ONE) * b0 * 2.0 + a0 * 2.0 + 1.0;
            a0 * t * t + a0 * a0 * 8.0 + a0 * 11.0 + 4.0
        }
        Family::Two => {
            let t = (a0 + ONE) * b0 * 2.0 + a0 * 2.0 + 3.0;
            a0 * t * t + a0 * 3.0 + 4.0
        }
    }
}

type C2 = [Complex64; 2];

fn max_norm(v: &C2) -> f64 {
    v[0].norm().max(v[1].norm())
}

/// Damped Newton on a holomorphic map `C^2 -> C^2` with a central-difference Jacobian.
fn newton2<F>(f: F, x0: C2, tol: f64) -> Result<C2>
where
    F: Fn(&C2) -> Result<C2>,
{
    let mut x = x0;
    let mut fx = f(&x)?;
    for _ in 0..MAX_ITER {
        if max_norm(&fx) < tol {
            return Ok(x);
        }
        let mut jac = [[Complex64::new(0.0, 0.0); 2]; 2];
        for j in 0..2 {
            let h = 1e-7 * (1.0 + x[j].norm());
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            let (fp, fm) = (f(&xp)?, f(&xm)?);
            for i in 0..2 {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let scale = jac.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
        if det.norm() <= 1e-14 * scale * scale {
            return Err(Error::SolverFailure("singular Jacobian".into()));
        }
        let dx = [
            (jac[1][1] * fx[0] - jac[0][1] * fx[1]) / det,
            (jac[0][0] * fx[1] - jac[1][0] * fx[0]) / det,
        ];
        let current = max_norm(&fx);
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let trial = [x[0] - dx[0] * t, x[1] - dx[1] * t];
            if let Ok(ft) = f(&trial) {
                if max_norm(&ft).is_finite() && max_norm(&ft) < current {
                    accepted = Some((trial, ft));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((nx, nf)) => {
                x = nx;
                fx = nf;
            }
            // No decrease: at the floor of attainable precision or stuck.
            None if current < tol * 100.0 => return Ok(x),
            None => return Err(Error::SolverFailure("line search failed to reduce residual".into())),
        }
    }
    if max_norm(&fx) < tol {
        Ok(x)
    } else {
        Err(Error::SolverFailure(format!(
            "no convergence after {MAX_ITER} iterations (residual {:.3e})",
            max_norm(&fx)
        )))
    }
}

fn scaled_gap(end: Complex64, start: Complex64) -> Complex64 {
    (end - start) / (1.0 + start.norm())
}

/// Periodic system with `a0` frozen, solving for `(b0, c0)`.
pub fn solve_periodic_newton(word: &MonodromyWord, seed: EdgeWeights, fix_a0: Complex64) -> Result<SweepWeights> {
    word.require_pseudo_anosov()?;
    let residual = |v: &C2| -> Result<C2> {
        let w = EdgeWeights::new(fix_a0, v[0], v[1])?;
        let last = *sweep(word, w)?.last();
        Ok([scaled_gap(last.b, v[0]), scaled_gap(last.c, v[1])])
    };
    let sol = newton2(residual, [seed.b, seed.c], 1e-13)?;
    let s = sweep(word, EdgeWeights::new(fix_a0, sol[0], sol[1])?)?;
    if s.periodicity_defect() >= PERIODIC_TOL {
        return Err(Error::SolverFailure(format!(
            "periodicity residual {:.3e} after convergence",
            s.periodicity_defect()
        )));
    }
    Ok(s)
}

/// Periodic system through a given `a0` from `opts.starts` random seeds for
/// `(b0, c0)`; the first converged start wins, so the result is deterministic
/// for a fixed RNG seed.
pub fn solve_periodic_multistart(word: &MonodromyWord, a0: Complex64, opts: &HyperbolicOptions) -> Result<SweepWeights> {
    word.require_pseudo_anosov()?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
    for _ in 0..opts.starts {
        let Ok(seed) = EdgeWeights::new(a0, random_annulus(&mut rng), random_annulus(&mut rng)) else { continue };
        if let Ok(s) = solve_periodic_newton(word, seed, a0) {
            return Ok(s);
        }
    }
    Err(Error::SolverFailure(format!("no periodic solution for {word} through a0 = {a0} among {} starts", opts.starts)))
}

/// Multi-start options for [`solve_hyperbolic_seeded`] and [`solve_periodic_multistart`].
#[derive(Debug, Clone)]
pub struct HyperbolicOptions {
    pub starts: usize,
    pub rng_seed: u64,
}

impl Default for HyperbolicOptions {
    fn default() -> Self {
        Self { starts: 200, rng_seed: 0 }
    }
}

fn known_seeds(word: &MonodromyWord) -> Vec<C2> {
    let s7 = 7f64.sqrt();
    match word.to_string().as_str() {
        "LLR" => vec![[Complex64::new(-0.25, -s7 / 4.0), Complex64::new(-1.5, s7 / 2.0)]],
        _ => Vec::new(),
    }
}

fn random_annulus(rng: &mut ChaCha8Rng) -> Complex64 {
    let r = (rng.random_range(0.3f64.ln()..3f64.ln())).exp();
    Complex64::from_polar(r, rng.random_range(-PI..PI))
}

/// Orientation sign of a shape list: `Some(-1)` or `Some(1)` when every
/// shape lies strictly on one side of the real axis.
fn orientation(shapes: &[Complex64]) -> Option<i8> {
    if shapes.iter().all(|z| z.im < -1e-8) {
        Some(-1)
    } else if shapes.iter().all(|z| z.im > 1e-8) {
        Some(1)
    } else {
        None
    }
}

/// The hyperbolic periodic system, with `a0 b0 c0 = 1` (parabolic puncture).
pub fn solve_hyperbolic(word: &MonodromyWord, seeds: usize) -> Result<SweepWeights> {
    solve_hyperbolic_seeded(word, &HyperbolicOptions { starts: seeds, ..Default::default() })
}

/// Multi-start Newton on the slice `a0 b0 c0 = 1`. Among the converged
/// solutions whose shapes all share one sign of imaginary part, returns the
/// one normalised to negative imaginary parts (conjugating if needed), with
/// ties broken by residual and then lexicographically.
pub fn solve_hyperbolic_seeded(word: &MonodromyWord, opts: &HyperbolicOptions) -> Result<SweepWeights> {
    word.require_pseudo_anosov()?;
    let residual = |v: &C2| -> Result<C2> {
        let w = EdgeWeights::new(v[0], v[1], (v[0] * v[1]).inv())?;
        let last = *sweep(word, w)?.last();
        Ok([scaled_gap(last.a, v[0]), scaled_gap(last.b, v[1])])
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
    let mut starts = known_seeds(word);
    starts.extend((0..opts.starts).map(|_| [random_annulus(&mut rng), random_annulus(&mut rng)]));

    let mut best: Option<(f64, [f64; 6], SweepWeights)> = None;
    for x0 in starts {
        let Ok(sol) = newton2(residual, x0, 1e-13) else { continue };
        let Ok(w) = EdgeWeights::new(sol[0], sol[1], (sol[0] * sol[1]).inv()) else { continue };
        let Ok(s) = sweep(word, w) else { continue };
        let defect = s.periodicity_defect();
        if defect >= PERIODIC_TOL {
            continue;
        }
        let s = match orientation(&tetra_shapes(&s)) {
            Some(-1) => s,
            Some(_) => match sweep(word, w.conj()) {
                Ok(c) => c,
                Err(_) => continue,
            },
            None => continue,
        };
        let w0 = s.steps[0];
        let key = [w0.a.re, w0.a.im, w0.b.re, w0.b.im, w0.c.re, w0.c.im].map(|x| (x * 1e8).round() / 1e8);
        let better = match &best {
            None => true,
            Some((d, k, _)) => {
                // Solutions agreeing to rounding are the same point; keep the lowest residual.
                if *k == key {
                    defect < *d
                } else {
                    key.partial_cmp(k) == Some(std::cmp::Ordering::Less)
                }
            }
        };
        if better {
            best = Some((defect, key, s));
        }
    }
    best.map(|(_, _, s)| s).ok_or_else(|| {
        Error::SolverFailure(format!("no geometric periodic solution for {word} among {} starts", opts.starts))
    })
}
