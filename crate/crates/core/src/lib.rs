//! Quantum intertwiners for once-punctured-torus bundles and the asymptotics
//! of their traces at roots of unity.
//!
//! Pipeline: a monodromy word in `L`/`R` → periodic edge weights
//! ([`charvar`]) → logarithm lift ([`lifting`]) → per-`n` intertwiner traces
//! ([`trace`]) → least-squares fit per residue class ([`asymptotics`]).

pub mod algebra;
pub mod asymptotics;
pub mod charvar;
pub mod dilog;
pub mod error;
pub mod intertwiner;
pub mod lifting;
pub mod presets;
pub mod qdilog;
pub mod serde_complex;
pub mod trace;
pub mod verify;

pub use algebra::{CMatrix, GeneratorMatrices, QRoot, RepTriple};
pub use asymptotics::{compare_volume, fit, FitResult, Verdict, VolumeReport};
pub use charvar::{
    solve_hyperbolic, solve_periodic_llr, solve_periodic_newton, sweep, volume, Branch, EdgeWeights, Family,
    GeomResult, HyperbolicOptions, Letter, MonodromyWord, SweepWeights,
};
pub use error::{Error, Result};
pub use intertwiner::{Intertwiner, IntertwinerKind};
pub use lifting::{init_logs, lift, BranchRule, InitialLogs, LogLift};
pub use trace::{series, trace_product, trace_sum, SeriesOptions, TraceMethod, TraceSeries};
