//! One line per acceptance criterion; exits non-zero if any fails.

use num_complex::Complex64;
use qintertwine::asymptotics::{compare_volume, fit, FitResult, Verdict, DEFAULT_N_CUT};
use qintertwine::charvar::{shapes_volume, solve_hyperbolic, volume, MonodromyWord};
use qintertwine::intertwiner::{left_exponent, right_exponent};
use qintertwine::lifting::{lift, BranchRule, InitialLogs};
use qintertwine::presets::{llr_example_one, llr_example_three, Configuration};
use qintertwine::trace::{series, trace_product, trace_sum, SeriesOptions};
use qintertwine::verify::{intertwining_residual, run_suite, twist_conjugation_residual};
use qintertwine::QRoot;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

const TARGET: f64 = 0.212213;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fit_config(cfg: &Configuration) -> FitResult {
    let s = series(&cfg.word, &cfg.lift, &SeriesOptions { n_max: 301, ..Default::default() }).expect("series");
    fit(&s, DEFAULT_N_CUT).expect("fit").with_parity(cfg.lift.parity_value())
}

fn limits(f: &FitResult) -> (f64, f64) {
    (f.class(1).unwrap().limit(), f.class(3).unwrap().limit())
}

fn limits_near_target(f: &FitResult) -> bool {
    let (a, b) = limits(f);
    (a - TARGET).abs() <= 5e-4 && (b - TARGET).abs() <= 5e-4
}

fn example_one(f1: &FitResult, secs: f64) -> Outcome {
    let (a, b) = limits(f1);
    check(limits_near_target(f1), format!("limits n≡1: {a:.6}, n≡3: {b:.6} (target {TARGET} ± 5e-4); {secs:.1}s"))
}

fn example_two(f1: &FitResult, f2: &FitResult, hats: (i64, i64, i64)) -> Outcome {
    let (a, b) = limits(f2);
    let differ = f1.classes.iter().zip(&f2.classes).any(|(x, y)| {
        x.coefficients[1..].iter().zip(&y.coefficients[1..]).any(|(p, q)| (p - q).abs() > 1e-3 * (1.0 + p.abs()))
    });
    check(
        hats == (3, 0, -3) && limits_near_target(f2) && differ,
        format!("hats {hats:?}; limits {a:.6}, {b:.6}; lower-order coefficients differ: {differ}"),
    )
}

fn example_three(f1: &FitResult, f3: &FitResult, hats: (i64, i64, i64), parity: i64) -> Outcome {
    let report = compare_volume(f3, volume(&MonodromyWord::parse("LLR", 0).unwrap()).unwrap(), 5e-4);
    let ratio = f3.max_rms() / f1.max_rms();
    check(
        hats == (-2, -1, 3) && parity == 1 && report.verdict == Verdict::NoPrediction && ratio >= 10.0,
        format!("hats {hats:?}; parity {parity}; verdict {:?}; rms ratio {ratio:.1}", report.verdict),
    )
}

fn cross_method() -> Outcome {
    let cfg = llr_example_one(0);
    let mut worst = (0.0f64, 0);
    for n in (3..=101).step_by(2) {
        let q = QRoot::standard(n).unwrap();
        let a = trace_product(&cfg.word, &cfg.lift, &q).unwrap().norm();
        let b = trace_sum(&cfg.word, &cfg.lift, &q).unwrap().norm();
        let r = (a - b).abs() / a;
        if r > worst.0 {
            worst = (r, n);
        }
    }
    check(worst.0 < 1e-9, format!("max relative gap {:.2e} (n = {}), tol 1e-9", worst.0, worst.1))
}

fn intertwining() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let lr = intertwining_residual(left_exponent, right_exponent, 20, &mut rng).unwrap();
    let t = twist_conjugation_residual(20, &mut rng).unwrap();
    check(lr < 1e-9 && t < 1e-9, format!("left/right residual {lr:.2e}, twist residual {t:.2e}, tol 1e-9"))
}

fn branch_independence() -> Outcome {
    let cfg = llr_example_one(0);
    let logs0 = InitialLogs { a: cfg.lift.a[0], b: cfg.lift.b[0], c: cfg.lift.c[0], eta: 0 };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let shifts: Vec<i64> = (0..3).map(|_| rng.random_range(-3..=3)).collect();
        // The shifted lift carries its own correction windings.
        let other = lift(&cfg.sweep, &logs0, &BranchRule::Shifted(shifts)).unwrap();
        for n in (3..=51).step_by(2) {
            let q = QRoot::standard(n).unwrap();
            let a = trace_product(&cfg.word, &cfg.lift, &q).unwrap().norm();
            let b = trace_product(&cfg.word, &other, &q).unwrap().norm();
            worst = worst.max((a - b).abs() / a);
        }
    }
    check(worst < 1e-8, format!("max relative change {worst:.2e}, tol 1e-8"))
}

fn volumes() -> Outcome {
    let lr = volume(&MonodromyWord::parse("LR", 0).unwrap()).unwrap();
    let s = solve_hyperbolic(&MonodromyWord::parse("LLR", 0).unwrap(), 200).unwrap();
    let llr = shapes_volume(&s).unwrap().volume;
    let s7 = 7f64.sqrt();
    let want = [Complex64::new(-0.25, -s7 / 4.0), Complex64::new(-1.5, s7 / 2.0), Complex64::new(0.625, -s7 / 8.0)];
    let gap = s.initial().as_array().iter().zip(want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    check(
        (lr - 2.029883).abs() <= 1e-5 && (llr - 2.66674).abs() <= 1e-3 && gap < 1e-8,
        format!("LR {lr:.7}; LLR {llr:.6} (4π·{TARGET} = {:.6}); triple gap {gap:.1e}", 4.0 * PI * TARGET),
    )
}

fn property_suite() -> Outcome {
    let checks = run_suite(0);
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| format!("{} ({})", c.name, c.detail)).collect();
    check(failed.is_empty(), if failed.is_empty() { format!("{} properties green", checks.len()) } else { failed.join("; ") })
}

fn main() -> ExitCode {
    let t0 = Instant::now();
    let ex1 = llr_example_one(0);
    let f1 = fit_config(&ex1);
    let secs = t0.elapsed().as_secs_f64();
    let ex2 = llr_example_one(1);
    let f2 = fit_config(&ex2);
    let ex3 = llr_example_three();
    let f3 = fit_config(&ex3);

    let results = [
        ("1 LLR example 1 limits", example_one(&f1, secs)),
        ("2 LLR example 2 (eta = 1)", example_two(&f1, &f2, ex2.lift.hats())),
        ("3 LLR example 3 (cancelling)", example_three(&f1, &f3, ex3.lift.hats(), ex3.lift.parity_value())),
        ("4 product vs sum trace", cross_method()),
        ("5 intertwining relations", intertwining()),
        ("6 branch independence", branch_independence()),
        ("7 volumes and hyperbolic triple", volumes()),
        ("8 property suite", property_suite()),
    ];
    let mut all = true;
    for (name, r) in &results {
        match r {
            Ok(d) => println!("PASS criterion {name}: {d}"),
            Err(d) => {
                all = false;
                println!("FAIL criterion {name}: {d}")
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
