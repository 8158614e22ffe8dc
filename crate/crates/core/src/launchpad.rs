//! Contract state, its status function and the lifecycle transitions.
//!
//! [`ContractState`] is a plain value. Each transition validates its guards
//! against the current state and returns a fresh state; a rejected transition
//! leaves the caller's state untouched.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::account::{AccountId, IntentAccount};
use crate::arith::{add, sub};
use crate::claim::{available_for_claim_spec, available_for_individual_vesting_claim_spec};
use crate::config::{get_stakeholder_proportion, Config, Mechanic};
use crate::deposit::{deposit_spec, DepositOutcome};
use crate::distribution::get_filtered_distributions_spec;
use crate::withdraw::{withdraw_spec, InvestmentAmount};
use crate::{Amount, Error, Result, Timestamp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SaleStatus {
    NotInitialized,
    Locked,
    NotStarted,
    Ongoing,
    Success,
    Failed,
}

impl SaleStatus {
    pub const ALL: [SaleStatus; 6] = [
        SaleStatus::NotInitialized,
        SaleStatus::Locked,
        SaleStatus::NotStarted,
        SaleStatus::Ongoing,
        SaleStatus::Success,
        SaleStatus::Failed,
    ];
}

impl fmt::Display for SaleStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Full launchpad state. Serializes with decimal-string integers and sorted
/// map keys, so equal states always encode to identical bytes.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractState {
    pub config: Config,
    #[serde_as(as = "DisplayFromStr")]
    pub total_deposited: Amount,
    #[serde_as(as = "DisplayFromStr")]
    pub total_sold_tokens: Amount,
    pub is_sale_token_set: bool,
    pub is_locked: bool,
    pub accounts: BTreeMap<AccountId, IntentAccount>,
    #[serde_as(as = "DisplayFromStr")]
    pub participants_count: u64,
    pub investments: BTreeMap<IntentAccount, InvestmentAmount>,
    pub distributed_accounts: Vec<IntentAccount>,
    #[serde_as(as = "BTreeMap<_, DisplayFromStr>")]
    pub individual_vesting_claimed: BTreeMap<IntentAccount, Amount>,
}

impl ContractState {
    /// An initialized, unlocked contract with no activity.
    pub fn new(config: Config) -> Result<Self> {
        let mut s = Self::uninitialized(config)?;
        s.is_sale_token_set = true;
        Ok(s)
    }

    /// A contract whose sale token has not been registered yet.
    pub fn uninitialized(config: Config) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            total_deposited: 0,
            total_sold_tokens: 0,
            is_sale_token_set: false,
            is_locked: false,
            accounts: BTreeMap::new(),
            participants_count: 0,
            investments: BTreeMap::new(),
            distributed_accounts: Vec::new(),
            individual_vesting_claimed: BTreeMap::new(),
        })
    }

    pub fn with_lock(mut self, locked: bool) -> Self {
        self.is_locked = locked;
        self
    }

    pub fn is_valid(&self) -> bool {
        self.config.is_valid()
    }

    /// Status at time `t`. Flags take precedence over dates.
    pub fn status(&self, t: Timestamp) -> SaleStatus {
        let g = &self.config;
        if !self.is_sale_token_set {
            SaleStatus::NotInitialized
        } else if self.is_locked {
            SaleStatus::Locked
        } else if t < g.start_date {
            SaleStatus::NotStarted
        } else if t < g.end_date {
            SaleStatus::Ongoing
        } else if self.total_deposited >= g.soft_cap {
            SaleStatus::Success
        } else {
            SaleStatus::Failed
        }
    }

    fn require(
        &self,
        action: &'static str,
        t: Timestamp,
        ok: impl Fn(SaleStatus) -> bool,
    ) -> Result<()> {
        self.config.validate()?;
        let status = self.status(t);
        if ok(status) {
            Ok(())
        } else {
            Err(Error::InvalidStatus { action, status })
        }
    }

    fn investment(&self, intent: &IntentAccount) -> Result<&InvestmentAmount> {
        self.investments
            .get(intent)
            .ok_or(Error::Precondition("intent account has no investment"))
    }

    /// Deposits `a` for `intent` through `account_id`. Only while the sale is
    /// ongoing. The account id is bound to the intent account on first use and
    /// cannot be re-bound.
    pub fn deposit(
        &self,
        account_id: &AccountId,
        a: Amount,
        intent: &IntentAccount,
        t: Timestamp,
    ) -> Result<(ContractState, DepositOutcome)> {
        self.require("deposit", t, |s| s == SaleStatus::Ongoing)?;
        if self
            .accounts
            .get(account_id)
            .is_some_and(|bound| bound != intent)
        {
            return Err(Error::Precondition(
                "account id is bound to another intent account",
            ));
        }
        let outcome = deposit_spec(
            &self.config,
            a,
            self.total_deposited,
            self.total_sold_tokens,
            t,
        )?;

        let mut next = self.clone();
        next.total_deposited = add(self.total_deposited, outcome.new_amount)?;
        next.total_sold_tokens = add(self.total_sold_tokens, outcome.weight_added)?;
        next.accounts.insert(account_id.clone(), intent.clone());
        let prior = self.investments.get(intent);
        if prior.is_none() {
            next.participants_count += 1;
        }
        let prior = prior.copied().unwrap_or_default();
        next.investments.insert(
            intent.clone(),
            InvestmentAmount {
                amount: add(prior.amount, outcome.new_amount)?,
                weight: add(prior.weight, outcome.weight_added)?,
                claimed: prior.claimed,
            },
        );
        Ok((next, outcome))
    }

    /// Withdraws `a` of `intent`'s principal. Permitted in a failed or locked
    /// sale, and during an ongoing price-discovery sale.
    pub fn withdraw(
        &self,
        intent: &IntentAccount,
        a: Amount,
        t: Timestamp,
    ) -> Result<ContractState> {
        let price_discovery = self.config.mechanic == Mechanic::PriceDiscovery;
        self.require("withdraw", t, |s| match s {
            SaleStatus::Failed | SaleStatus::Locked => true,
            SaleStatus::Ongoing => price_discovery,
            _ => false,
        })?;
        let inv = self.investment(intent)?;
        let (inv, sold) = withdraw_spec(&self.config, inv, a, self.total_sold_tokens, t)?;

        let mut next = self.clone();
        next.total_deposited = sub(self.total_deposited, a)?;
        next.total_sold_tokens = sold;
        next.investments.insert(intent.clone(), inv);
        Ok(next)
    }

    /// Public-sale claim of everything vested and not yet claimed.
    pub fn claim(&self, intent: &IntentAccount, t: Timestamp) -> Result<ContractState> {
        self.require("claim", t, |s| s == SaleStatus::Success)?;
        let inv = self.investment(intent)?;
        let available = available_for_claim_spec(inv, self.total_sold_tokens, &self.config, t)?;
        if available <= inv.claimed {
            return Err(Error::Precondition("nothing available to claim"));
        }
        let updated = inv.add_to_claimed(available - inv.claimed)?;

        let mut next = self.clone();
        next.investments.insert(intent.clone(), updated);
        Ok(next)
    }

    /// Stakeholder claim under the stakeholder's own vesting schedule.
    pub fn claim_individual_vesting(
        &self,
        intent: &IntentAccount,
        t: Timestamp,
    ) -> Result<ContractState> {
        self.require("individual vesting claim", t, |s| s == SaleStatus::Success)?;
        let props = &self.config.distribution_proportions;
        let p = get_stakeholder_proportion(props, intent)
            .ok_or(Error::Precondition("intent account is not a stakeholder"))?;
        let available = available_for_individual_vesting_claim_spec(p, &self.config, t);
        let claimed = self
            .individual_vesting_claimed
            .get(intent)
            .copied()
            .unwrap_or(0);
        if available <= claimed {
            return Err(Error::Precondition("nothing available to claim"));
        }

        let mut next = self.clone();
        next.individual_vesting_claimed
            .insert(intent.clone(), available);
        Ok(next)
    }

    /// Appends the pending payout batch to the distributed accounts.
    pub fn distribute_tokens(&self, t: Timestamp) -> Result<ContractState> {
        self.require("distribution", t, |s| s == SaleStatus::Success)?;
        let batch = get_filtered_distributions_spec(&self.config, &self.distributed_accounts);
        if batch.is_empty() {
            return Err(Error::Precondition("no stakeholders pending distribution"));
        }

        let mut next = self.clone();
        next.distributed_accounts.extend(batch);
        Ok(next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::fixtures::*;
    use crate::config::{StakeholderProportion, VestingSchedule};

    fn id(s: &str) -> AccountId {
        AccountId::new(s).unwrap()
    }

    /// Fixed price 1:1, cap 100, soft cap 10, sale `[100, 200)`.
    fn fixed_state() -> ContractState {
        let mut g = with_price(1, 1, 100);
        g.soft_cap = 10;
        ContractState::new(g).unwrap()
    }

    #[test]
    fn status_table() {
        let s = fixed_state();
        assert_eq!(
            ContractState::uninitialized(s.config.clone())
                .unwrap()
                .status(150),
            SaleStatus::NotInitialized
        );
        assert_eq!(s.clone().with_lock(true).status(150), SaleStatus::Locked);
        assert_eq!(s.status(99), SaleStatus::NotStarted);
        assert_eq!(s.status(100), SaleStatus::Ongoing);
        assert_eq!(s.status(150), SaleStatus::Ongoing);
        assert_eq!(s.status(200), SaleStatus::Failed);
        let mut funded = s.clone();
        funded.total_deposited = 10;
        assert_eq!(funded.status(200), SaleStatus::Success);
        let mut short = s;
        short.total_deposited = 5;
        assert_eq!(short.status(200), SaleStatus::Failed);
    }

    #[test]
    fn invalid_config_rejected() {
        let mut g = fixed_price();
        g.end_date = g.start_date;
        assert!(matches!(
            ContractState::new(g),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn first_deposit() {
        let (s, o) = fixed_state()
            .deposit(&id("alice.near"), 25, &acct("alice"), 150)
            .unwrap();
        assert_eq!(o.refund, 0);
        assert_eq!(
            (s.total_deposited, s.total_sold_tokens, s.participants_count),
            (25, 25, 1)
        );
        assert_eq!(
            s.investments[&acct("alice")],
            InvestmentAmount::new(25, 25, 0)
        );
        assert_eq!(s.accounts[&id("alice.near")], acct("alice"));
    }

    #[test]
    fn deposit_outside_ongoing() {
        let err = fixed_state()
            .deposit(&id("a"), 25, &acct("a"), 50)
            .unwrap_err();
        assert_eq!(
            err,
            Error::InvalidStatus {
                action: "deposit",
                status: SaleStatus::NotStarted
            }
        );
        assert!(fixed_state()
            .deposit(&id("a"), 25, &acct("a"), 200)
            .is_err());
    }

    #[test]
    fn repeat_deposit_sums_record() {
        let (s, _) = fixed_state()
            .deposit(&id("a"), 25, &acct("a"), 150)
            .unwrap();
        let (s, o) = s.deposit(&id("a"), 90, &acct("a"), 151).unwrap();
        assert_eq!(o.refund, 15);
        assert_eq!(s.participants_count, 1);
        assert_eq!(
            s.investments[&acct("a")],
            InvestmentAmount::new(100, 100, 0)
        );
        assert_eq!((s.total_deposited, s.total_sold_tokens), (100, 100));
        // Cap reached: further deposits are rejected.
        assert!(s
            .deposit(&id("b"), 1, &acct("b"), 152)
            .unwrap_err()
            .is_precondition());
    }

    #[test]
    fn account_id_is_write_once() {
        let (s, _) = fixed_state().deposit(&id("x"), 5, &acct("a"), 150).unwrap();
        assert!(s
            .deposit(&id("x"), 5, &acct("b"), 150)
            .unwrap_err()
            .is_precondition());
        assert!(s.deposit(&id("y"), 5, &acct("a"), 150).is_ok());
    }

    #[test]
    fn withdraw_rules() {
        let (s, _) = fixed_state().deposit(&id("a"), 5, &acct("a"), 150).unwrap();
        // Ongoing fixed price: forbidden.
        assert_eq!(
            s.withdraw(&acct("a"), 5, 160).unwrap_err(),
            Error::InvalidStatus {
                action: "withdraw",
                status: SaleStatus::Ongoing
            }
        );
        // Failed (5 < soft cap 10): full withdrawal.
        let w = s.withdraw(&acct("a"), 5, 250).unwrap();
        assert_eq!(w.investments[&acct("a")], InvestmentAmount::new(0, 0, 0));
        assert_eq!((w.total_deposited, w.total_sold_tokens), (0, 0));
        assert_eq!(w.participants_count, 1);
        assert!(s
            .withdraw(&acct("a"), 3, 250)
            .unwrap_err()
            .is_precondition());
        assert!(s
            .withdraw(&acct("nobody"), 5, 250)
            .unwrap_err()
            .is_precondition());

        // Locked: permitted.
        assert!(s
            .clone()
            .with_lock(true)
            .withdraw(&acct("a"), 5, 150)
            .is_ok());

        // Success: forbidden.
        let (s, _) = s.deposit(&id("b"), 20, &acct("b"), 150).unwrap();
        assert!(matches!(
            s.withdraw(&acct("b"), 20, 250),
            Err(Error::InvalidStatus {
                status: SaleStatus::Success,
                ..
            })
        ));
    }

    #[test]
    fn price_discovery_partial_withdraw() {
        let mut g = price_discovery(1000);
        g.discounts = vec![crate::Discount::new(100, 150, 1000)];
        g.soft_cap = 10;
        let s = ContractState::new(g).unwrap();
        let (s, o) = s.deposit(&id("a"), 100, &acct("a"), 120).unwrap();
        assert_eq!(o.weight_added, 110);
        let s = s.withdraw(&acct("a"), 50, 160).unwrap();
        assert_eq!(s.investments[&acct("a")], InvestmentAmount::new(50, 50, 0));
        assert_eq!((s.total_deposited, s.total_sold_tokens), (50, 50));
    }

    #[test]
    fn public_claims() {
        let (s, _) = fixed_state()
            .deposit(&id("a"), 77, &acct("a"), 150)
            .unwrap();
        assert!(matches!(
            s.claim(&acct("a"), 150),
            Err(Error::InvalidStatus { .. })
        ));
        let c = s.claim(&acct("a"), 200).unwrap();
        assert_eq!(c.investments[&acct("a")].claimed, 77);
        assert!(c.claim(&acct("a"), 200).unwrap_err().is_precondition());
        assert!(c.claim(&acct("b"), 200).unwrap_err().is_precondition());
    }

    #[test]
    fn vested_public_claim() {
        let mut g = with_price(1, 1, 1000);
        g.vesting = Some(VestingSchedule::new(50, 200));
        let s = ContractState::new(g).unwrap();
        let (s, _) = s.deposit(&id("a"), 1000, &acct("a"), 150).unwrap();
        assert!(s.claim(&acct("a"), 249).unwrap_err().is_precondition());
        let c = s.claim(&acct("a"), 300).unwrap();
        assert_eq!(c.investments[&acct("a")].claimed, 500);
        let c = c.claim(&acct("a"), 400).unwrap();
        assert_eq!(c.investments[&acct("a")].claimed, 1000);
    }

    fn with_stakeholders() -> ContractState {
        let mut g = with_price(1, 1, 100);
        g.distribution_proportions.solver_account = acct("S");
        g.distribution_proportions.stakeholder_proportions = vec![
            stake("A", 5000),
            StakeholderProportion {
                vesting: Some(VestingSchedule::new(50, 200)),
                ..stake("B", 1000)
            },
        ];
        g.total_sale_amount = 6100;
        let (s, _) = ContractState::new(g)
            .unwrap()
            .deposit(&id("u"), 10, &acct("u"), 150)
            .unwrap();
        s
    }

    #[test]
    fn individual_claims() {
        let s = with_stakeholders();
        let c = s.claim_individual_vesting(&acct("A"), 200).unwrap();
        assert_eq!(c.individual_vesting_claimed[&acct("A")], 5000);
        assert!(c
            .claim_individual_vesting(&acct("A"), 200)
            .unwrap_err()
            .is_precondition());

        let c = s.claim_individual_vesting(&acct("B"), 300).unwrap();
        assert_eq!(c.individual_vesting_claimed[&acct("B")], 500);
        assert!(s
            .claim_individual_vesting(&acct("B"), 200)
            .unwrap_err()
            .is_precondition());
        assert!(s
            .claim_individual_vesting(&acct("u"), 300)
            .unwrap_err()
            .is_precondition());
    }

    #[test]
    fn distribution_rounds() {
        let s = with_stakeholders();
        assert!(s.distribute_tokens(150).is_err());
        let d = s.distribute_tokens(200).unwrap();
        assert_eq!(
            d.distributed_accounts,
            vec![acct("S"), acct("A"), acct("B")]
        );
        assert!(d.distribute_tokens(201).unwrap_err().is_precondition());

        let mut partial = s.clone();
        partial.distributed_accounts = vec![acct("S")];
        let d = partial.distribute_tokens(200).unwrap();
        assert_eq!(
            d.distributed_accounts,
            vec![acct("S"), acct("A"), acct("B")]
        );
    }

    #[test]
    fn canonical_json_is_stable() {
        let (s, _) = fixed_state().deposit(&id("b"), 5, &acct("b"), 150).unwrap();
        let (s, _) = s.deposit(&id("a"), 7, &acct("a"), 150).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.find("\"a\"").unwrap() < json.find("\"b\"").unwrap());
        assert!(json.contains("\"total_deposited\":\"12\""));
        let back: ContractState = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }
}
