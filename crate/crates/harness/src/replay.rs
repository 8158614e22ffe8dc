//! Applies a scenario's actions through the launchpad transitions.

use launchpad_core::arith::{add, sub};
use launchpad_core::assets::{calculate_assets, round_trip_remainders};
use launchpad_core::config::calculate_weighted_amount_spec;
use launchpad_core::deposit::{calculate_refund_spec, deposit_spec};
use launchpad_core::{
    AccountId, Amount, ContractState, DepositOutcome, Error, IntentAccount, Mechanic, SaleStatus,
    Timestamp,
};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::invariants::{self, check_deposit, check_state, Violation};
use crate::oracle;
use crate::scenario::{ActionKind, Scenario, ScenarioError};

/// Deliberate defects used to show that the checks can fail.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mutation {
    #[default]
    None,
    /// Over-cap refunds come out one unit too large.
    RefundPlusOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplayOptions {
    pub check_invariants: bool,
    /// Compare every arithmetic result with the rational oracle.
    pub oracle: bool,
    pub mutation: Mutation,
}

impl Default for ReplayOptions {
    fn default() -> Self {
        Self {
            check_invariants: true,
            oracle: false,
            mutation: Mutation::None,
        }
    }
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionOutcome {
    #[serde_as(as = "DisplayFromStr")]
    pub index: usize,
    #[serde_as(as = "DisplayFromStr")]
    pub time: Timestamp,
    pub kind: String,
    /// Sale status when the action was submitted.
    pub status: SaleStatus,
    pub applied: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deposit: Option<DepositOutcome>,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub final_state: ContractState,
    pub outcomes: Vec<ActionOutcome>,
    pub invariant_violations: Vec<Violation>,
    /// `w − revert(assets(w))` for each applied fixed-price deposit.
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub round_trip_losses: Vec<Amount>,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.invariant_violations.is_empty()
    }

    /// Canonical encoding: equal reports produce identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn replay(sc: &Scenario) -> Result<ReplayReport, ScenarioError> {
    replay_with(sc, ReplayOptions::default())
}

pub fn replay_with(sc: &Scenario, opts: ReplayOptions) -> Result<ReplayReport, ScenarioError> {
    let mut state = sc.initial_state()?;
    let mut r = Replayer {
        opts,
        violations: Vec::new(),
        losses: Vec::new(),
    };
    if opts.check_invariants {
        r.violations.extend(check_state(&state, None));
    }
    let mut outcomes = Vec::with_capacity(sc.actions.len());
    let mut last_status: Option<SaleStatus> = None;
    for (i, action) in sc.actions.iter().enumerate() {
        let t = action.time;
        let status = state.status(t);
        let result = r.step(&state, i, t, &action.kind);
        let mut outcome = ActionOutcome {
            index: i,
            time: t,
            kind: action.kind.name().to_string(),
            status,
            applied: result.is_ok(),
            error: None,
            deposit: None,
        };
        match result {
            Ok((next, deposit)) => {
                outcome.deposit = deposit;
                if opts.check_invariants {
                    r.violations.extend(check_state(&next, Some(i)));
                }
                state = next;
            }
            Err(e) => outcome.error = Some(e.to_string()),
        }
        let now = state.status(t);
        if let (true, Some(before)) = (opts.check_invariants, last_status) {
            if let Some(detail) = progression_error(before, now, t, state.config.end_date) {
                r.violations.push(Violation::new(
                    invariants::STATUS_PROGRESSION,
                    Some(i),
                    detail,
                ));
            }
        }
        last_status = Some(now);
        outcomes.push(outcome);
    }
    Ok(ReplayReport {
        final_state: state,
        outcomes,
        invariant_violations: r.violations,
        round_trip_losses: r.losses,
    })
}

fn phase(s: SaleStatus) -> u8 {
    match s {
        SaleStatus::NotInitialized | SaleStatus::NotStarted => 0,
        SaleStatus::Ongoing => 1,
        SaleStatus::Success | SaleStatus::Failed | SaleStatus::Locked => 2,
    }
}

/// Status along a timeline: no phase goes backwards, an ongoing sale stays
/// ongoing until its end date, and terminal statuses never change.
fn progression_error(
    before: SaleStatus,
    now: SaleStatus,
    t: Timestamp,
    end: Timestamp,
) -> Option<String> {
    let ok = match before {
        SaleStatus::Success
        | SaleStatus::Failed
        | SaleStatus::Locked
        | SaleStatus::NotInitialized => now == before,
        SaleStatus::Ongoing if t < end => now == SaleStatus::Ongoing,
        _ => phase(now) >= phase(before),
    };
    (!ok).then(|| format!("status went from {before} to {now} at time {t}"))
}

struct Replayer {
    opts: ReplayOptions,
    violations: Vec<Violation>,
    losses: Vec<Amount>,
}

type StepResult = Result<(ContractState, Option<DepositOutcome>), Error>;

impl Replayer {
    fn flag(&mut self, name: &str, at: usize, detail: String) {
        self.violations.push(Violation::new(name, Some(at), detail));
    }

    fn step(&mut self, s: &ContractState, i: usize, t: Timestamp, kind: &ActionKind) -> StepResult {
        match kind {
            ActionKind::Deposit {
                account_id,
                intent,
                amount,
            } => self.deposit(s, i, t, account_id, intent, *amount),
            ActionKind::Withdraw { intent, amount } => {
                let next = s.withdraw(intent, *amount, t)?;
                if self.opts.oracle {
                    let inv = &s.investments[intent];
                    let expect = match s.config.mechanic {
                        Mechanic::FixedPrice(_) => BigInt::from(0),
                        Mechanic::PriceDiscovery => {
                            oracle::withdrawn_weight(&s.config, inv, *amount, t)
                        }
                    };
                    let got = next.investments[intent].weight;
                    if oracle::big(got) != expect {
                        self.flag(
                            invariants::ORACLE_AGREEMENT,
                            i,
                            format!("withdraw weight {got}, exact {expect}"),
                        );
                    }
                }
                Ok((next, None))
            }
            ActionKind::Claim { intent } => {
                let next = s.claim(intent, t)?;
                if self.opts.oracle {
                    let expect = oracle::available_for_claim(
                        &s.investments[intent],
                        s.total_sold_tokens,
                        &s.config,
                        t,
                    );
                    let got = next.investments[intent].claimed;
                    if oracle::big(got) != expect {
                        self.flag(
                            invariants::ORACLE_AGREEMENT,
                            i,
                            format!("claimed {got}, exact {expect}"),
                        );
                    }
                }
                Ok((next, None))
            }
            ActionKind::ClaimIndividual { intent } => {
                let next = s.claim_individual_vesting(intent, t)?;
                if self.opts.oracle {
                    let g = &s.config;
                    let p = g
                        .distribution_proportions
                        .stakeholder_proportions
                        .iter()
                        .find(|p| &p.account == intent)
                        .expect("claim succeeded for a stakeholder");
                    let total = oracle::big(p.allocation);
                    let expect = match p.vesting {
                        None => total,
                        Some(v) => {
                            oracle::vesting(&total, g.end_date, v.cliff_period, v.vesting_period, t)
                        }
                    };
                    let got = next.individual_vesting_claimed[intent];
                    if oracle::big(got) != expect {
                        self.flag(
                            invariants::ORACLE_AGREEMENT,
                            i,
                            format!("individual claim {got}, exact {expect}"),
                        );
                    }
                }
                Ok((next, None))
            }
            ActionKind::Distribute => Ok((s.distribute_tokens(t)?, None)),
        }
    }

    fn deposit(
        &mut self,
        s: &ContractState,
        i: usize,
        t: Timestamp,
        account_id: &AccountId,
        intent: &IntentAccount,
        a: Amount,
    ) -> StepResult {
        let g = &s.config;
        let checked_by_oracle = self.opts.oracle
            && s.status(t) == SaleStatus::Ongoing
            && s.accounts.get(account_id).is_none_or(|b| b == intent);
        let result = apply_deposit(s, account_id, intent, a, t, self.opts.mutation);

        if checked_by_oracle {
            let exact = oracle::deposit(g, a, s.total_deposited, s.total_sold_tokens, t);
            let agrees = match (&result, &exact) {
                (Ok((_, o)), Some(x)) => x.fits() && x.matches(o),
                (Err(Error::Overflow), Some(x)) => !x.fits(),
                (Err(Error::Precondition(_)), None) => true,
                _ => false,
            };
            if !agrees {
                let crossed = oracle::refund(g, a, s.total_sold_tokens, t).is_some();
                let name = if crossed {
                    invariants::REFUND_ORACLE
                } else {
                    invariants::ORACLE_AGREEMENT
                };
                let got = match &result {
                    Ok((_, o)) => format!("refund {} kept {}", o.refund, o.new_amount),
                    Err(e) => e.to_string(),
                };
                let want = match &exact {
                    Some(x) => format!("refund {} kept {}", x.refund, x.new_amount),
                    None => "rejection".to_string(),
                };
                self.flag(name, i, format!("deposit of {a}: {got}, exact {want}"));
            }
        }

        let (next, o) = result?;
        if self.opts.check_invariants {
            self.violations.extend(check_deposit(a, &o, i));
        }
        if let Some(price) = g.price() {
            let w = calculate_weighted_amount_spec(a, t, g)?;
            let rt = round_trip_remainders(w, price)?;
            self.losses.push(rt.loss(w));
            if self.opts.oracle {
                let lhs = oracle::big(rt.loss(w)) * oracle::big(price.sale_token_amount);
                let rhs = oracle::big(rt.rem1) + oracle::big(rt.rem2);
                if lhs != rhs {
                    self.flag(
                        invariants::ROUND_TRIP_LOSS,
                        i,
                        format!("loss·sT {lhs} != remainders {rhs}"),
                    );
                }
            }
        }
        Ok((next, Some(o)))
    }
}

/// The deposit transition, optionally with a defective refund.
pub fn apply_deposit(
    s: &ContractState,
    account_id: &AccountId,
    intent: &IntentAccount,
    a: Amount,
    t: Timestamp,
    mutation: Mutation,
) -> Result<(ContractState, DepositOutcome), Error> {
    let (mut next, o) = s.deposit(account_id, a, intent, t)?;
    if mutation == Mutation::None {
        return Ok((next, o));
    }
    let m = mutated_deposit(&s.config, a, s.total_deposited, s.total_sold_tokens, t)?;
    let shortfall = o.new_amount - m.new_amount;
    next.total_deposited -= shortfall;
    next.investments
        .get_mut(intent)
        .expect("deposit created the record")
        .amount -= shortfall;
    Ok((next, m))
}

/// Fixed-price deposit with the refund formula perturbed by +1.
fn mutated_deposit(
    g: &launchpad_core::Config,
    a: Amount,
    deposited: Amount,
    sold: Amount,
    t: Timestamp,
) -> Result<DepositOutcome, Error> {
    let o = deposit_spec(g, a, deposited, sold, t)?;
    let Some(price) = g.price() else {
        return Ok(o);
    };
    let w = calculate_weighted_amount_spec(a, t, g)?;
    if add(sold, calculate_assets(w, price)?)? <= g.sale_amount {
        return Ok(o);
    }
    let refund = add(calculate_refund_spec(g, a, sold, t, price)?, 1)?;
    let kept = sub(a, refund)?;
    Ok(DepositOutcome {
        new_amount: kept,
        new_total_deposited: add(deposited, kept)?,
        refund,
        ..o
    })
}
