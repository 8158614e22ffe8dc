//! Seeded randomized checking with counterexample shrinking.

use std::collections::BTreeMap;

use launchpad_core::arith::{div_rem, mul_div_floor};
use launchpad_core::assets::{calculate_assets, calculate_assets_revert};
use launchpad_core::config::{calculate_original_amount_spec, calculate_weighted_amount_spec};
use launchpad_core::{Amount, Config, Error};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::gen;
use crate::invariants::Violation;
use crate::oracle;
use crate::replay::{replay_with, Mutation, ReplayOptions};
use crate::scenario::Scenario;

pub const MAX_ACTIONS: usize = 50;
const ARITH_SAMPLES: usize = 16;
pub const ARITH_ORACLE: &str = "oracle_agreement.arith";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FuzzError {
    #[error("fuzz needs at least one case")]
    NoCases,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    #[serde_as(as = "DisplayFromStr")]
    pub case: u64,
    #[serde_as(as = "DisplayFromStr")]
    pub original_actions: usize,
    /// The failing scenario after shrinking.
    pub scenario: Scenario,
    pub violations: Vec<Violation>,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    #[serde_as(as = "DisplayFromStr")]
    pub seed: u64,
    #[serde_as(as = "DisplayFromStr")]
    pub cases: u64,
    pub mutation: Mutation,
    #[serde_as(as = "DisplayFromStr")]
    pub failed_cases: u64,
    #[serde_as(as = "DisplayFromStr")]
    pub actions_applied: u64,
    #[serde_as(as = "DisplayFromStr")]
    pub actions_rejected: u64,
    #[serde_as(as = "BTreeMap<_, DisplayFromStr>")]
    pub violations_by_invariant: BTreeMap<String, u64>,
    pub counterexample: Option<Counterexample>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failed_cases == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

struct CaseResult {
    applied: u64,
    rejected: u64,
    violations: Vec<Violation>,
}

fn options(mutation: Mutation) -> ReplayOptions {
    ReplayOptions {
        check_invariants: true,
        oracle: true,
        mutation,
    }
}

/// Generator for case `case` of a run seeded with `seed`. Each case draws from
/// its own ChaCha stream, so cases are independent of scheduling.
pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

pub fn case_scenario(seed: u64, case: u64) -> (Scenario, ChaCha8Rng) {
    let mut rng = case_rng(seed, case);
    let sc = gen::scenario(&mut rng, MAX_ACTIONS);
    (sc, rng)
}

fn run_case(seed: u64, case: u64, mutation: Mutation) -> CaseResult {
    let (sc, mut rng) = case_scenario(seed, case);
    let report = replay_with(&sc, options(mutation)).expect("generated scenarios are valid");
    let applied = report.outcomes.iter().filter(|o| o.applied).count() as u64;
    let mut violations = report.invariant_violations;
    violations.extend(arithmetic_samples(&mut rng, &sc.config));
    CaseResult {
        applied,
        rejected: sc.actions.len() as u64 - applied,
        violations,
    }
}

fn agrees(got: Result<Amount, Error>, exact: &BigInt) -> bool {
    match got {
        Ok(v) => oracle::big(v) == *exact,
        Err(Error::Overflow) => oracle::to_amount(exact).is_none(),
        Err(_) => false,
    }
}

/// Oracle comparison of the scaling primitives on random inputs, including
/// the case's own price and discounts.
pub fn arithmetic_samples(rng: &mut ChaCha8Rng, g: &Config) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut fail = |what: String| out.push(Violation::new(ARITH_ORACLE, None, what));
    for _ in 0..ARITH_SAMPLES {
        let (x, y, k) = (
            gen::amount(rng, 128),
            gen::amount(rng, 128),
            gen::amount(rng, 128),
        );
        let exact = oracle::mul_div(x, y, k);
        if !agrees(mul_div_floor(x, y, k), &exact) {
            fail(format!("mul_div_floor({x}, {y}, {k}), exact {exact}"));
        }
        let (q, r) = div_rem(x, k).expect("nonzero divisor");
        if oracle::big(q) * oracle::big(k) + oracle::big(r) != oracle::big(x) || r >= k {
            fail(format!("div_rem({x}, {k}) = ({q}, {r})"));
        }

        let a = gen::amount(rng, 100);
        let t = rng.gen_range(g.start_date.saturating_sub(100)..g.end_date + 100);
        let ba = oracle::big(a);
        if !agrees(
            calculate_weighted_amount_spec(a, t, g),
            &oracle::weighted(&ba, t, g),
        ) {
            fail(format!("weighted({a}, t={t})"));
        }
        if !agrees(
            calculate_original_amount_spec(a, t, g),
            &oracle::original(&ba, t, g),
        ) {
            fail(format!("original({a}, t={t})"));
        }
        if let Some(price) = g.price() {
            if !agrees(calculate_assets(a, price), &oracle::assets(&ba, price)) {
                fail(format!("assets({a})"));
            }
            if !agrees(
                calculate_assets_revert(a, price),
                &oracle::revert(&ba, price),
            ) {
                fail(format!("revert({a})"));
            }
        }
    }
    out
}

fn still_fails(sc: &Scenario, mutation: Mutation, invariant: &str) -> bool {
    replay_with(sc, options(mutation))
        .map(|r| {
            r.invariant_violations
                .iter()
                .any(|v| v.invariant == invariant)
        })
        .unwrap_or(false)
}

/// Greedy action deletion to a fixpoint, then per-action amount bisection.
pub fn minimize(sc: &Scenario, mutation: Mutation, invariant: &str) -> Scenario {
    let mut best = sc.clone();
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < best.actions.len() {
            let mut candidate = best.clone();
            candidate.actions.remove(i);
            if still_fails(&candidate, mutation, invariant) {
                best = candidate;
                changed = true;
            } else {
                i += 1;
            }
        }
        if !changed {
            break;
        }
    }
    for i in 0..best.actions.len() {
        let Some(mut hi) = best.actions[i].kind.amount() else {
            continue;
        };
        let mut lo = 1;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            let mut candidate = best.clone();
            *candidate.actions[i].kind.amount_mut().expect("has amount") = mid;
            if still_fails(&candidate, mutation, invariant) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        *best.actions[i].kind.amount_mut().expect("has amount") = hi;
    }
    best
}

pub fn fuzz(seed: u64, cases: u64, mutation: Mutation) -> Result<FuzzReport, FuzzError> {
    if cases == 0 {
        return Err(FuzzError::NoCases);
    }
    let results: Vec<CaseResult> = (0..cases)
        .into_par_iter()
        .map(|case| run_case(seed, case, mutation))
        .collect();

    let mut report = FuzzReport {
        seed,
        cases,
        mutation,
        failed_cases: 0,
        actions_applied: 0,
        actions_rejected: 0,
        violations_by_invariant: BTreeMap::new(),
        counterexample: None,
    };
    for (case, r) in results.iter().enumerate() {
        report.actions_applied += r.applied;
        report.actions_rejected += r.rejected;
        if r.violations.is_empty() {
            continue;
        }
        report.failed_cases += 1;
        for v in &r.violations {
            *report
                .violations_by_invariant
                .entry(v.invariant.clone())
                .or_default() += 1;
        }
        if report.counterexample.is_none() {
            report.counterexample =
                Some(counterexample(seed, case as u64, mutation, &r.violations));
        }
    }
    Ok(report)
}

fn counterexample(
    seed: u64,
    case: u64,
    mutation: Mutation,
    violations: &[Violation],
) -> Counterexample {
    let (sc, _) = case_scenario(seed, case);
    let first = &violations[0];
    if first.action_index.is_none() {
        return Counterexample {
            case,
            original_actions: sc.actions.len(),
            scenario: sc,
            violations: violations.to_vec(),
        };
    }
    let small = minimize(&sc, mutation, &first.invariant);
    let violations = replay_with(&small, options(mutation))
        .expect("shrunk scenario stays valid")
        .invariant_violations;
    Counterexample {
        case,
        original_actions: sc.actions.len(),
        scenario: small,
        violations,
    }
}
