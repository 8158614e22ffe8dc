//! State and per-action invariants re-checked after every replayed action.

use std::collections::BTreeSet;

use launchpad_core::claim::{available_for_individual_vesting_claim_spec, user_allocation_spec};
use launchpad_core::{Amount, ContractState, DepositOutcome, Mechanic, SaleStatus};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

pub const LEDGER_COHERENCE: &str = "ledger_coherence";
pub const SALE_CAP: &str = "sale_cap";
pub const CLAIMED_BOUNDS: &str = "claimed_bounds";
pub const UNIQUE_DISTRIBUTIONS: &str = "unique_distributions";
pub const PARTICIPANTS_COUNT: &str = "participants_count";
pub const REFUND_BOUND: &str = "refund_safety.bound";
pub const REFUND_CONSERVATION: &str = "refund_safety.conservation";
pub const REFUND_ORACLE: &str = "refund_safety.oracle";
pub const ORACLE_AGREEMENT: &str = "oracle_agreement";
pub const ROUND_TRIP_LOSS: &str = "round_trip_loss";
pub const STATUS_PROGRESSION: &str = "status_progression";

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub invariant: String,
    /// `None` for the initial state.
    #[serde_as(as = "Option<DisplayFromStr>")]
    pub action_index: Option<usize>,
    pub detail: String,
}

impl Violation {
    pub fn new(invariant: &str, action_index: Option<usize>, detail: impl Into<String>) -> Self {
        Self {
            invariant: invariant.to_string(),
            action_index,
            detail: detail.into(),
        }
    }

    pub fn is_refund_safety(&self) -> bool {
        self.invariant.starts_with("refund_safety")
    }
}

/// Checks every state-level invariant of `s`.
pub fn check_state(s: &ContractState, at: Option<usize>) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut fail = |name: &str, detail: String| out.push(Violation::new(name, at, detail));
    let g = &s.config;

    let deposited = s
        .investments
        .values()
        .try_fold(0u128, |acc, i| acc.checked_add(i.amount));
    let weights = s
        .investments
        .values()
        .try_fold(0u128, |acc, i| acc.checked_add(i.weight));
    if deposited != Some(s.total_deposited) || weights != Some(s.total_sold_tokens) {
        fail(
            LEDGER_COHERENCE,
            format!(
                "totals ({}, {}) but records sum to ({:?}, {:?})",
                s.total_deposited, s.total_sold_tokens, deposited, weights
            ),
        );
    }

    if matches!(g.mechanic, Mechanic::FixedPrice(_)) && s.total_sold_tokens > g.sale_amount {
        fail(
            SALE_CAP,
            format!("sold {} exceeds cap {}", s.total_sold_tokens, g.sale_amount),
        );
    }

    if s.participants_count as usize != s.investments.len() {
        fail(
            PARTICIPANTS_COUNT,
            format!(
                "count {} but {} investment records",
                s.participants_count,
                s.investments.len()
            ),
        );
    }

    let mut seen = BTreeSet::new();
    for a in &s.distributed_accounts {
        if !seen.insert(a) {
            fail(
                UNIQUE_DISTRIBUTIONS,
                format!("{a} distributed more than once"),
            );
        }
    }

    let mut allocated: Option<Amount> = Some(0);
    for (who, inv) in &s.investments {
        let bound = if s.total_sold_tokens == 0 {
            Some(0)
        } else {
            user_allocation_spec(inv.weight, s.total_sold_tokens, g).ok()
        };
        allocated = allocated.zip(bound).and_then(|(x, y)| x.checked_add(y));
        match bound {
            Some(b) if inv.claimed <= b => {}
            _ => fail(
                CLAIMED_BOUNDS,
                format!("{who} claimed {} above allocation {bound:?}", inv.claimed),
            ),
        }
    }
    if s.status(g.end_date) == SaleStatus::Success && allocated.is_none_or(|x| x > g.sale_amount) {
        fail(
            CLAIMED_BOUNDS,
            format!(
                "allocations {allocated:?} exceed sale amount {}",
                g.sale_amount
            ),
        );
    }
    for (who, claimed) in &s.individual_vesting_claimed {
        let limit = g
            .distribution_proportions
            .stakeholder_proportions
            .iter()
            .find(|p| &p.account == who)
            .map(|p| available_for_individual_vesting_claim_spec(p, g, u64::MAX));
        if limit.is_none_or(|l| *claimed > l) {
            fail(
                CLAIMED_BOUNDS,
                format!("{who} claimed {claimed} individually, limit {limit:?}"),
            );
        }
    }
    out
}

/// Refund bound and amount conservation for one applied deposit of `a`.
pub fn check_deposit(a: Amount, o: &DepositOutcome, at: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    if o.refund > a {
        out.push(Violation::new(
            REFUND_BOUND,
            Some(at),
            format!("refund {} exceeds amount {a}", o.refund),
        ));
    }
    if o.new_amount.checked_add(o.refund) != Some(a) {
        out.push(Violation::new(
            REFUND_CONSERVATION,
            Some(at),
            format!("kept {} + refund {} != amount {a}", o.new_amount, o.refund),
        ));
    }
    out
}
