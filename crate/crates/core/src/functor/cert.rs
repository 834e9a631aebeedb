//! Structured verification reports.

use crate::exact::qspec::QSpec;
use crate::exact::rat::{q_to_string, Q};
use serde_json::{json, Value};

/// A machine-checkable verification report for one claim.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Certificate {
    pub claim: String,
    pub anchor: String,
    pub pass: bool,
    pub computed: Value,
    pub expected: Value,
    pub config: Value,
    /// wall-clock runtime; the only nondeterministic field
    pub runtime_ms: u128,
}

impl Certificate {
    pub fn new(
        claim: &str,
        anchor: &str,
        pass: bool,
        computed: Value,
        expected: Value,
        config: Value,
    ) -> Self {
        Certificate {
            claim: claim.to_string(),
            anchor: anchor.to_string(),
            pass,
            computed,
            expected,
            config,
            runtime_ms: 0,
        }
    }
}

/// Shared configuration for the verification drivers.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub qspec: QSpec,
    pub lambda: Q,
    pub trunc: usize,
    pub degree_bound: i64,
    pub i_max: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            qspec: QSpec::default_q4(),
            lambda: crate::exact::rat::qi(1),
            trunc: 4,
            degree_bound: 6,
            i_max: 6,
            seed: 1,
        }
    }
}

impl VerifyConfig {
    pub fn to_json(&self, n: Option<usize>) -> Value {
        json!({
            "n": n,
            "q_sqrt": q_to_string(self.qspec.q_sqrt()),
            "lambda": q_to_string(&self.lambda),
            "trunc": self.trunc,
            "degree_bound": self.degree_bound,
            "i_max": self.i_max,
            "seed": self.seed,
        })
    }
}
