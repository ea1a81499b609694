//! Reference configurations for the word `LLR`.

use num_complex::Complex64;

use crate::charvar::{solve_periodic_llr, sweep, Branch, Family, MonodromyWord, SweepWeights};
use crate::error::Result;
use crate::lifting::{init_logs, lift, BranchRule, LogLift};

/// A periodic sweep together with its logarithm lift.
#[derive(Debug, Clone)]
pub struct Configuration {
    pub word: MonodromyWord,
    pub sweep: SweepWeights,
    pub lift: LogLift,
}

impl Configuration {
    pub fn from_sweep(sweep: SweepWeights, eta: i64, rule: &BranchRule) -> Result<Self> {
        let logs = init_logs(sweep.initial(), eta);
        let lift = lift(&sweep, &logs, rule)?;
        Ok(Self { word: sweep.word.clone(), sweep, lift })
    }
}

/// `LLR` on the closed-form family through `a0`.
pub fn llr(a0: Complex64, family: Family, branch: Branch, eta: i64) -> Result<Configuration> {
    let word = MonodromyWord::parse("LLR", 0)?;
    let w = solve_periodic_llr(a0, branch, family)?;
    Configuration::from_sweep(sweep(&word, w)?, eta, &BranchRule::Principal)
}

/// `a0 = -0.75 - 0.1i`, first family, minus branch, with puncture offset `eta`.
pub fn llr_example_one(eta: i64) -> Configuration {
    llr(Complex64::new(-0.75, -0.1), Family::One, Branch::Minus, eta).expect("reference configuration is valid")
}

/// `a0 = 1 + i`, second family, minus branch; its character does not lift to SL2.
pub fn llr_example_three() -> Configuration {
    llr(Complex64::new(1.0, 1.0), Family::Two, Branch::Minus, 0).expect("reference configuration is valid")
}
