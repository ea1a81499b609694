//! Invariant suite run by `qintertwine verify`: every structural property of
//! the pipeline checked at small `n` with a seeded RNG.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::algebra::{
    apply_left_iso, apply_right_iso, matrix_power, mod_inverse, standard_rep, CMatrix, GeneratorMatrices, QRoot,
    RepTriple,
};
use crate::charvar::{
    shapes_volume, solve_hyperbolic, solve_periodic_llr, solve_periodic_newton, sweep, tetra_shapes, Branch,
    EdgeWeights, Family, Letter, MonodromyWord,
};
use crate::dilog::bloch_wigner;
use crate::error::Result;
use crate::intertwiner::{
    build_twist, build_with_pattern, left_exponent, right_exponent, ExponentPattern, IntertwinerKind,
};
use crate::lifting::{correction_factors, init_logs, lift, BranchRule};
use crate::presets::{llr_example_one, llr_example_three, Configuration};
use crate::qdilog::{dq, qdl, QdlParams};
use crate::trace::{global_intertwining_residual, trace_product, trace_sum};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl PropertyCheck {
    fn from_max(name: &'static str, worst: Result<f64>, tol: f64) -> Self {
        match worst {
            Ok(w) => Self { name, passed: w < tol, detail: format!("max residual {w:.3e} (tol {tol:.0e})") },
            Err(e) => Self { name, passed: false, detail: format!("error: {e}") },
        }
    }
}

fn random_c(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.random_range(0.4..2.0), rng.random_range(-PI..PI))
}

fn scalar_defect(m: &CMatrix, s: Complex64) -> f64 {
    let n = m.nrows();
    (m - CMatrix::identity(n, n) * s).norm() / (s.norm() * (n as f64).sqrt())
}

fn check_standard_rep(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [3usize, 5, 7, 9, 11] {
        let q = QRoot::standard(n)?;
        for _ in 0..4 {
            let t = RepTriple::new(random_c(rng), random_c(rng), random_c(rng))?;
            let g = standard_rep(&t, &q);
            for (m, s) in [(&g.x, t.x), (&g.y, t.y), (&g.z, t.z)] {
                worst = worst.max(scalar_defect(&matrix_power(m, n as u32), s.powu(n as u32)));
            }
            worst = worst.max(scalar_defect(&(&g.x * &g.y * &g.z * q.pow(-2)), t.h()));
            worst = worst.max(g.commutation_defect(&q));
        }
    }
    Ok(worst)
}

fn check_iso_relations(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [3usize, 5, 7] {
        let q = QRoot::standard(n)?;
        for _ in 0..4 {
            let g = standard_rep(&RepTriple::new(random_c(rng), random_c(rng), random_c(rng))?, &q);
            worst = worst.max(apply_left_iso(&g, &q)?.commutation_defect(&q));
            worst = worst.max(apply_right_iso(&g, &q)?.commutation_defect(&q));
        }
    }
    Ok(worst)
}

fn check_qdl_periodicity(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [3usize, 5, 7, 9, 11] {
        let q = QRoot::standard(n)?;
        let p = QdlParams::principal(random_c(rng), &q)?;
        let ni = n as i64;
        for i in -2 * ni..=2 * ni {
            // Unreduced product for i >= 0 against the reduced evaluation.
            let a = qdl(&p, i + ni);
            let b = qdl(&p, i);
            worst = worst.max((a - b).norm() / b.norm());
            if i >= 0 {
                let direct = (1..=i + ni).fold(ONE, |acc, k| acc * (ONE + p.u * q.pow(-2 * k)) / p.v);
                worst = worst.max((direct - b).norm() / b.norm());
            }
        }
    }
    Ok(worst)
}

fn check_dq_forms(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [3usize, 5, 7, 9, 11] {
        let q = QRoot::standard(n)?;
        let u = random_c(rng);
        let closed = dq(u, &q)?;
        let base = QdlParams::principal(u, &q)?;
        for r in 0..n as i64 {
            // Every admissible v differs from the principal one by an n-th root of unity.
            let p = QdlParams::new(u, base.v * Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64), &q)?;
            let all = (1..=n as i64).fold(ONE, |acc, i| acc * qdl(&p, i));
            let even = (1..=n as i64).fold(ONE, |acc, i| acc * qdl(&p, 2 * i));
            worst = worst.max((all - closed).norm() / closed.norm());
            worst = worst.max((even - closed).norm() / closed.norm());
        }
    }
    Ok(worst)
}

fn check_unit_det(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [3usize, 5, 7, 9] {
        let q = QRoot::standard(n)?;
        for _ in 0..4 {
            let p = QdlParams::principal(random_c(rng), &q)?;
            for (pat, kind) in [(left_exponent as ExponentPattern, IntertwinerKind::Left), (right_exponent, IntertwinerKind::Right)] {
                let m = build_with_pattern(&p, pat, kind)?;
                worst = worst.max((m.det().norm() - 1.0).abs() / n as f64);
            }
        }
    }
    Ok(worst)
}

fn check_twist_det(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [3usize, 5, 7, 9] {
        let q = QRoot::standard(n)?;
        for _ in 0..6 {
            let (l0, m0) = (rng.random_range(-30..30), rng.random_range(-30..30));
            worst = worst.max((build_twist(l0, m0, -l0 - m0, &q)?.det() - ONE).norm());
        }
    }
    Ok(worst)
}

/// Conjugation identities for the left and right intertwiners built from the
/// given exponent patterns, over `draws` random triples for each odd `n` in `3..=9`.
pub fn intertwining_residual(
    left: ExponentPattern,
    right: ExponentPattern,
    draws: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [3usize, 5, 7, 9] {
        let q = QRoot::standard(n)?;
        for _ in 0..draws {
            let (x1, y1, z1) = (random_c(rng), random_c(rng), random_c(rng));
            let rho1 = standard_rep(&RepTriple::new(x1, y1, z1)?, &q);

            let p = QdlParams::principal(q.value() * y1, &q)?;
            let t2 = RepTriple::new(y1.inv(), p.v * p.v * x1, y1 * y1 * z1 / (p.v * p.v))?;
            let l = build_with_pattern(&p, left, IntertwinerKind::Left)?;
            let lhs = apply_left_iso(&rho1, &q)?;
            worst = worst.max(lhs.distance(&standard_rep(&t2, &q).conjugate_by(&l.mat)?));

            let p = QdlParams::principal(q.value() * z1, &q)?;
            let t3 = RepTriple::new(z1.inv(), p.v * p.v * y1, z1 * z1 * x1 / (p.v * p.v))?;
            let r = build_with_pattern(&p, right, IntertwinerKind::Right)?;
            let lhs = apply_right_iso(&rho1, &q)?;
            worst = worst.max(lhs.distance(&standard_rep(&t3, &q).conjugate_by(&r.mat)?));
        }
    }
    Ok(worst)
}

/// `rho_{x1 y1 z1} = T rho_{x2 y2 z2} T^{-1}` for `(x2, y2, z2) = (q^{4 l0} x1, q^{4 m0} y1, q^{4 n0} z1)`.
pub fn twist_conjugation_residual(draws: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [3usize, 5, 7, 9] {
        let q = QRoot::standard(n)?;
        for _ in 0..draws {
            let (x1, y1, z1) = (random_c(rng), random_c(rng), random_c(rng));
            let (l0, m0) = (rng.random_range(-15i64..15), rng.random_range(-15i64..15));
            let n0 = -l0 - m0;
            let rho1 = standard_rep(&RepTriple::new(x1, y1, z1)?, &q);
            let t2 = RepTriple::new(q.pow(4 * l0) * x1, q.pow(4 * m0) * y1, q.pow(4 * n0) * z1)?;
            let t = build_twist(l0, m0, n0, &q)?;
            let conj: GeneratorMatrices = standard_rep(&t2, &q).conjugate_by(&t.mat)?;
            worst = worst.max(rho1.distance(&conj));
        }
    }
    Ok(worst)
}

fn check_product_conservation(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..30 {
        let len = rng.random_range(1..8);
        let letters = (0..len).map(|_| if rng.random_bool(0.5) { Letter::L } else { Letter::R }).collect();
        let word = MonodromyWord::new(letters, 0)?;
        let init = EdgeWeights::new(random_c(rng), random_c(rng), random_c(rng))?;
        if let Ok(s) = sweep(&word, init) {
            worst = worst.max(s.product_drift());
        }
    }
    Ok(worst)
}

fn reference_configs() -> Vec<Configuration> {
    vec![llr_example_one(0), llr_example_one(1), llr_example_one(-2), llr_example_three()]
}

fn check_theta_constancy() -> Result<f64> {
    let mut worst = 0.0f64;
    for cfg in reference_configs() {
        worst = worst.max(cfg.lift.theta_drift());
        let shifted = lift(&cfg.sweep, &init_logs(cfg.sweep.initial(), cfg.lift.eta), &BranchRule::Shifted(vec![1, -2, 1]))?;
        worst = worst.max(shifted.theta_drift());
    }
    Ok(worst)
}

fn check_hats_sum() -> Result<f64> {
    let mut worst = 0.0f64;
    for cfg in reference_configs() {
        let (l, m, n) = cfg.lift.hats();
        worst = worst.max((l + m + n).abs() as f64);
        for nn in [3usize, 5, 7, 9, 11] {
            let (a, b, c) = correction_factors(&cfg.lift, nn, 1)?;
            worst = worst.max(((a + b + c) % nn as i64) as f64);
        }
    }
    Ok(worst)
}

fn check_inverse_of_four() -> Result<f64> {
    let bad = (3..=99i64).step_by(2).filter(|&n| mod_inverse(4, n) != Some(((n - 1) * (n - 1) / 4) % n)).count();
    Ok(bad as f64)
}

fn check_cross_method() -> Result<f64> {
    let mut worst = 0.0f64;
    for cfg in reference_configs() {
        for n in (3..=21).step_by(2) {
            let q = QRoot::standard(n)?;
            let a = trace_product(&cfg.word, &cfg.lift, &q)?.norm();
            let b = trace_sum(&cfg.word, &cfg.lift, &q)?.norm();
            worst = worst.max((a - b).abs() / a);
        }
    }
    Ok(worst)
}

fn check_branch_independence(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    let cfg = llr_example_one(0);
    for _ in 0..3 {
        let shifts: Vec<i64> = (0..3).map(|_| rng.random_range(-2..=2)).collect();
        let shifted = lift(&cfg.sweep, &init_logs(cfg.sweep.initial(), 0), &BranchRule::Shifted(shifts))?;
        for n in (3..=15).step_by(2) {
            let q = QRoot::standard(n)?;
            let a = trace_product(&cfg.word, &cfg.lift, &q)?.norm();
            let b = trace_product(&cfg.word, &shifted, &q)?.norm();
            worst = worst.max((a - b).abs() / a);
        }
    }
    Ok(worst)
}

fn check_global_intertwining() -> Result<f64> {
    let mut worst = 0.0f64;
    for cfg in reference_configs() {
        for n in [3usize, 5] {
            worst = worst.max(global_intertwining_residual(&cfg.word, &cfg.lift, &QRoot::standard(n)?)?);
        }
    }
    Ok(worst)
}

fn check_newton_periodicity() -> Result<f64> {
    let word = MonodromyWord::parse("LLR", 0)?;
    let mut worst = 0.0f64;
    for a0 in [Complex64::new(-0.75, -0.1), Complex64::new(0.4, 0.9)] {
        let exact = solve_periodic_llr(a0, Branch::Minus, Family::One)?;
        let seed = EdgeWeights::new(a0, exact.b * 1.01, exact.c * 0.99)?;
        let s = solve_periodic_newton(&word, seed, a0)?;
        worst = worst.max(s.periodicity_defect()).max(s.initial().distance(&exact) * 1e-2);
    }
    Ok(worst)
}

fn check_hyperbolic_shapes() -> Result<f64> {
    // Returns 0 when every shape lies strictly below the real axis.
    let mut bad = 0.0;
    for w in ["LR", "LLR", "LRR", "LLRR"] {
        let s = solve_hyperbolic(&MonodromyWord::parse(w, 0)?, 200)?;
        if !tetra_shapes(&s).iter().all(|z| z.im < 0.0) {
            bad += 1.0;
        }
        if (s.initial().product() - ONE).norm() >= 1e-10 || shapes_volume(&s)?.volume <= 0.0 {
            bad += 1.0;
        }
    }
    Ok(bad)
}

fn check_bloch_wigner(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let z = random_c(rng) * 1.7;
        worst = worst.max((bloch_wigner(z)? + bloch_wigner(z.conj())?).abs());
        worst = worst.max((bloch_wigner(ONE - z)? + bloch_wigner(z)?).abs());
    }
    Ok(worst)
}

/// Runs every property; deterministic for a fixed seed.
pub fn run_suite(seed: u64) -> Vec<PropertyCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![
        PropertyCheck::from_max("standard representation powers and central element", check_standard_rep(&mut rng), 1e-10),
        PropertyCheck::from_max("coordinate changes preserve q^4-commutation", check_iso_relations(&mut rng), 1e-10),
        PropertyCheck::from_max("QDL periodicity", check_qdl_periodicity(&mut rng), 1e-12),
        PropertyCheck::from_max("D^q closed forms agree, independent of v", check_dq_forms(&mut rng), 1e-12),
        PropertyCheck::from_max("|det| = 1 for left/right intertwiners", check_unit_det(&mut rng), 1e-8),
        PropertyCheck::from_max("det T = 1", check_twist_det(&mut rng), 1e-12),
    ];
    let r = intertwining_residual(left_exponent, right_exponent, 20, &mut rng);
    out.push(PropertyCheck::from_max("left/right intertwining relations", r, 1e-9));
    out.push(PropertyCheck::from_max("twist conjugation", twist_conjugation_residual(20, &mut rng), 1e-9));
    out.push(PropertyCheck::from_max("sweep product conservation", check_product_conservation(&mut rng), 1e-12));
    out.push(PropertyCheck::from_max("A_k + B_k + C_k constant", check_theta_constancy(), 1e-9));
    out.push(PropertyCheck::from_max("lhat + mhat + nhat = 0", check_hats_sum(), 0.5));
    out.push(PropertyCheck::from_max("(n-1)^2/4 is the inverse of 4 mod n", check_inverse_of_four(), 0.5));
    out.push(PropertyCheck::from_max("|trace| by product and by sum agree", check_cross_method(), 1e-9));
    out.push(PropertyCheck::from_max("|trace| independent of V_k branches", check_branch_independence(&mut rng), 1e-8));
    out.push(PropertyCheck::from_max("global intertwining along the word", check_global_intertwining(), 1e-8));
    out.push(PropertyCheck::from_max("Newton periodic solutions close up", check_newton_periodicity(), 1e-10));
    out.push(PropertyCheck::from_max("hyperbolic shapes share one orientation", check_hyperbolic_shapes(), 0.5));
    out.push(PropertyCheck::from_max("Bloch-Wigner symmetries", check_bloch_wigner(&mut rng), 1e-12));
    out
}
