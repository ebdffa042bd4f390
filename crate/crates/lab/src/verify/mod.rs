//! Named property suites run by `permuton-lab verify`.
//!
//! Every check id must also appear in `invariants.manifest`; the build
//! script fails if the two lists drift apart.

mod checks;

use std::io::Write;
use std::time::Instant;

use serde_json::json;

use crate::error::LabResult;
use crate::output::{write_json_line, SCHEMA_VERSION};

/// Overrides for the exhaustive size of a check (`n`, or boxes for shape
/// checks) and for sample counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Scale {
    pub max_n: Option<usize>,
    pub samples: Option<usize>,
}

impl Scale {
    pub(crate) fn n(&self, default: usize) -> usize {
        self.max_n.unwrap_or(default)
    }

    pub(crate) fn samples(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }
}

/// Result of one check: how many cases ran and the first failure, if any.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub cases: u64,
    pub failure: Option<String>,
}

impl Outcome {
    /// Records one case; keeps only the first failure message.
    pub(crate) fn case(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
    }

    pub(crate) fn failed(&self) -> bool {
        self.failure.is_some()
    }
}

pub struct Check {
    pub id: &'static str,
    pub suite: &'static str,
    pub run: fn(&Scale) -> LabResult<Outcome>,
}

pub const SUITES: &[&str] = &["perm", "shape", "greene", "bijection", "sampler", "oneside", "layers"];

pub static CHECKS: &[Check] = &[
    Check { id: "perm.contains-naive", suite: "perm", run: checks::contains_vs_naive },
    Check { id: "perm.avoid-lis", suite: "perm", run: checks::avoid_lis },
    Check { id: "perm.symmetries", suite: "perm", run: checks::symmetries },
    Check { id: "perm.wilf-s3", suite: "perm", run: checks::wilf_s3 },
    Check { id: "shape.square-containment", suite: "shape", run: checks::square_containment },
    Check { id: "shape.count-order", suite: "shape", run: checks::count_order },
    Check { id: "shape.wilf-classes", suite: "shape", run: checks::wilf_classes },
    Check { id: "greene.corner-chains", suite: "greene", run: checks::corner_chains },
    Check { id: "greene.involution", suite: "greene", run: checks::border_involution },
    Check { id: "greene.rsk-round-trip", suite: "greene", run: checks::rsk_round_trip },
    Check { id: "bijection.blue-sw-closed", suite: "bijection", run: checks::blue_sw_closed },
    Check { id: "bijection.frozen-fixed", suite: "bijection", run: checks::frozen_fixed },
    Check { id: "bijection.injective", suite: "bijection", run: checks::pipeline_injective },
    Check { id: "bijection.lambda-stable", suite: "bijection", run: checks::lambda_stable },
    Check { id: "sampler.exact", suite: "sampler", run: checks::sampler_exact },
    Check { id: "sampler.deterministic", suite: "sampler", run: checks::sampler_deterministic },
    Check { id: "sampler.weights-sum", suite: "sampler", run: checks::weights_sum },
    Check { id: "oneside.marginals", suite: "oneside", run: checks::marginals },
    Check { id: "oneside.additivity", suite: "oneside", run: checks::additivity },
    Check { id: "oneside.w-decomposition", suite: "oneside", run: checks::w_decomposition },
    Check { id: "oneside.implication", suite: "oneside", run: checks::oneside_implication },
    Check { id: "oneside.rect-sup-bound", suite: "oneside", run: checks::rect_sup_bound },
    Check { id: "layers.count-is-lis", suite: "layers", run: checks::layer_count },
    Check { id: "layers.partition-decreasing", suite: "layers", run: checks::layer_partition_decreasing },
    Check { id: "layers.partial-chains", suite: "layers", run: checks::partial_chains },
    Check { id: "layers.frozen-sw-bridge", suite: "layers", run: checks::frozen_sw_bridge },
    Check { id: "layers.good-geometric", suite: "layers", run: checks::good_geometric },
];

/// Runs every check of `suite` (or of all suites for `"all"`), writing one
/// JSON line per check. Returns whether all passed.
pub fn run_suite(suite: &str, scale: &Scale, out: &mut dyn Write) -> LabResult<bool> {
    if suite != "all" && !SUITES.contains(&suite) {
        return Err(crate::error::LabError::Usage(format!(
            "unknown suite {suite:?}; expected one of {} or all",
            SUITES.join(", ")
        )));
    }
    let mut all_passed = true;
    for check in CHECKS.iter().filter(|c| suite == "all" || c.suite == suite) {
        let start = Instant::now();
        let outcome = (check.run)(scale)?;
        all_passed &= !outcome.failed();
        let line = json!({
            "schema_version": SCHEMA_VERSION,
            "suite": check.suite,
            "check": check.id,
            "status": if outcome.failed() { "fail" } else { "pass" },
            "cases": outcome.cases,
            "failure": outcome.failure,
            "seconds": (start.elapsed().as_secs_f64() * 1e3).round() / 1e3,
        });
        write_json_line(out, &line)?;
    }
    Ok(all_passed)
}
