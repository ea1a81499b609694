use qintertwine::lifting::{lift, BranchRule, InitialLogs};
use qintertwine::presets::{llr_example_one, llr_example_three, Configuration};
use qintertwine::trace::{series, trace_product, trace_sum, SeriesOptions, TraceMethod};
use qintertwine::verify::run_suite;
use qintertwine::QRoot;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn configs() -> Vec<(&'static str, Configuration)> {
    vec![("ex1", llr_example_one(0)), ("ex2", llr_example_one(1)), ("ex3", llr_example_three())]
}

#[test]
fn product_and_sum_agree() {
    // The cancelling configuration has an O(1) trace built from exponentially
    // large terms, so the two evaluation orders lose digits there.
    for ((name, cfg), tol) in configs().into_iter().zip([1e-9, 1e-9, 1e-6]) {
        for n in (3..=101).step_by(2) {
            let q = QRoot::standard(n).unwrap();
            let a = trace_product(&cfg.word, &cfg.lift, &q).unwrap().norm();
            let b = trace_sum(&cfg.word, &cfg.lift, &q).unwrap().norm();
            assert!(rel(a, b) < tol, "{name} n = {n}: {a} vs {b}");
        }
    }
}

#[test]
fn other_primitive_roots_agree_across_methods() {
    let cfg = llr_example_one(0);
    for (n, k) in [(7usize, 2i64), (9, 4), (15, 7), (21, 5)] {
        let q = QRoot::new(n, k).unwrap();
        let a = trace_product(&cfg.word, &cfg.lift, &q).unwrap().norm();
        let b = trace_sum(&cfg.word, &cfg.lift, &q).unwrap().norm();
        assert!(rel(a, b) < 1e-9, "n = {n}, k = {k}: {a} vs {b}");
    }
}

#[test]
fn modulus_independent_of_log_branches() {
    let base = llr_example_one(0);
    let logs0 = InitialLogs { a: base.lift.a[0], b: base.lift.b[0], c: base.lift.c[0], eta: 0 };
    for shifts in [vec![1, 0, 0], vec![0, -1, 2], vec![-3, 2, 1]] {
        let shifted = lift(&base.sweep, &logs0, &BranchRule::Shifted(shifts.clone())).unwrap();
        for n in (3..=51).step_by(2) {
            let q = QRoot::standard(n).unwrap();
            let a = trace_product(&base.word, &base.lift, &q).unwrap().norm();
            let b = trace_product(&base.word, &shifted, &q).unwrap().norm();
            assert!(rel(a, b) < 1e-8, "shifts {shifts:?} n = {n}: {a} vs {b}");
        }
    }
}

#[test]
fn modulus_invariant_under_cyclic_rotation() {
    for (name, cfg) in configs() {
        for shift in 1..cfg.word.len() {
            let sweep = cfg.sweep.rotated(shift).unwrap();
            let logs0 = InitialLogs { a: cfg.lift.a[shift], b: cfg.lift.b[shift], c: cfg.lift.c[shift], eta: cfg.lift.eta };
            let rot = lift(&sweep, &logs0, &BranchRule::Principal).unwrap();
            for n in (3..=31).step_by(2) {
                let q = QRoot::standard(n).unwrap();
                let a = trace_product(&cfg.word, &cfg.lift, &q).unwrap().norm();
                let b = trace_product(&sweep.word, &rot, &q).unwrap().norm();
                assert!(rel(a, b) < 1e-8, "{name} shift {shift} n = {n}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn series_deterministic_across_worker_counts() {
    let cfg = llr_example_one(0);
    let mk = |workers| {
        let opts = SeriesOptions { n_max: 61, method: TraceMethod::Product, workers, ..Default::default() };
        series(&cfg.word, &cfg.lift, &opts).unwrap().to_csv_string()
    };
    let one = mk(1);
    assert_eq!(one, mk(4));
    assert_eq!(one, mk(0));
}

#[test]
fn both_method_flags_nothing_on_reference() {
    let cfg = llr_example_three();
    let opts = SeriesOptions { n_max: 41, method: TraceMethod::Both, ..Default::default() };
    let s = series(&cfg.word, &cfg.lift, &opts).unwrap();
    assert_eq!(s.rows.len(), 20);
    assert!(s.rows.iter().all(|r| r.usable() && !r.flags.suspect));
}

#[test]
fn golden_n3_trace() {
    let cfg = llr_example_one(0);
    let t = trace_product(&cfg.word, &cfg.lift, &QRoot::standard(3).unwrap()).unwrap();
    assert!((t.norm() - 1.3640163933357863).abs() < 1e-12, "{}", t.norm());
}

#[test]
fn property_suite_green() {
    for check in run_suite(7) {
        assert!(check.passed, "{}: {}", check.name, check.detail);
    }
}
