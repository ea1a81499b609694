//! Stage runners shared by the subcommands. Each stage writes its artifacts
//! under the output prefix and returns what later stages need.

use anyhow::{Context, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use qintertwine::asymptotics::{compare_volume, fit, FitResult, VolumeReport};
use qintertwine::charvar::{
    hyperbolic_geometry, solve_hyperbolic_seeded, solve_periodic_llr, solve_periodic_multistart, sweep, Branch,
    Family, GeomResult, HyperbolicOptions, Letter, MonodromyWord, SweepWeights,
};
use qintertwine::lifting::BranchRule;
use qintertwine::presets::Configuration;
use qintertwine::trace::{intertwiner_for, series, SeriesOptions, TraceSeries};
use qintertwine::QRoot;

use crate::complex::parse_complex;

pub struct Output {
    prefix: String,
}

impl Output {
    pub fn new(prefix: &str) -> Self {
        Self { prefix: prefix.to_string() }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        PathBuf::from(format!("{}{name}", self.prefix))
    }

    fn create(&self, name: &str) -> Result<fs::File> {
        let path = self.path(name);
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        fs::File::create(&path).with_context(|| format!("creating {}", path.display()))
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.create(name)?.write_all(text.as_bytes()).with_context(|| format!("writing {name}"))
    }

    pub fn trace_csv(&self, s: &TraceSeries) -> Result<()> {
        s.write_csv(std::io::BufWriter::new(self.create("trace.csv")?)).context("writing trace.csv")
    }

    pub fn curves_csv(&self, f: &FitResult, s: &TraceSeries) -> Result<()> {
        f.write_curves_csv(s, std::io::BufWriter::new(self.create("curves.csv")?)).context("writing curves.csv")
    }
}

pub struct SolveSpec<'a> {
    pub word: &'a str,
    pub eps: u8,
    pub a0: &'a str,
    pub family: Family,
    pub branch: Branch,
    pub starts: usize,
    pub seed: u64,
}

impl SolveSpec<'_> {
    pub fn word(&self) -> Result<MonodromyWord> {
        let w = MonodromyWord::parse(self.word, self.eps).context("input")?;
        w.require_pseudo_anosov().context("input")?;
        Ok(w)
    }

    fn options(&self) -> HyperbolicOptions {
        HyperbolicOptions { starts: self.starts, rng_seed: self.seed }
    }
}

pub fn solve(spec: &SolveSpec<'_>) -> Result<SweepWeights> {
    let word = spec.word()?;
    if spec.a0.eq_ignore_ascii_case("hyperbolic") {
        return solve_hyperbolic_seeded(&word, &spec.options()).context("solve");
    }
    let a0: Complex64 = parse_complex(spec.a0).map_err(anyhow::Error::msg).context("--a0")?;
    if word.letters() == [Letter::L, Letter::L, Letter::R] {
        let w = solve_periodic_llr(a0, spec.branch, spec.family).context("solve")?;
        return sweep(&word, w).context("solve");
    }
    solve_periodic_multistart(&word, a0, &spec.options()).context("solve")
}

pub fn configure(spec: &SolveSpec<'_>, eta: i64) -> Result<Configuration> {
    let s = solve(spec)?;
    Configuration::from_sweep(s, eta, &BranchRule::Principal).context("lift")
}

pub fn geometry(spec: &SolveSpec<'_>) -> Result<GeomResult> {
    hyperbolic_geometry(&spec.word()?, &spec.options()).context("volume")
}

pub fn trace(cfg: &Configuration, opts: &SeriesOptions) -> Result<TraceSeries> {
    series(&cfg.word, &cfg.lift, opts).context("trace")
}

pub fn dump_matrix(cfg: &Configuration, n: usize, k: i64, out: &Output) -> Result<PathBuf> {
    let q = QRoot::new(n, k).context("--dump-matrix")?;
    let lambda = intertwiner_for(&cfg.word, &cfg.lift, &q).context("trace")?;
    let name = format!("lambda_n{n}.json");
    out.json(&name, &lambda.to_json())?;
    Ok(out.path(&name))
}

#[derive(Serialize)]
pub struct FitReport {
    pub fit: FitResult,
    pub volume: VolumeReport,
}

pub fn fit_and_compare(
    cfg: &Configuration,
    s: &TraceSeries,
    geom: &GeomResult,
    n_cut: usize,
    tolerance: f64,
) -> Result<FitReport> {
    let mut f = fit(s, n_cut).context("fit")?.with_parity(cfg.lift.parity_value());
    let report = compare_volume(&f, geom.volume, tolerance);
    f.volume_over_4pi = Some(report.volume_over_4pi);
    Ok(FitReport { fit: f, volume: report })
}
