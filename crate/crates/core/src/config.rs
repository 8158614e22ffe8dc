//! The immutable sale configuration and the time-aware weighting built on it.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::account::IntentAccount;
use crate::assets::PriceFraction;
use crate::discounts::{
    calculate_original_amount, calculate_weighted_amount, discounts_do_not_overlap,
    find_active_discount, Discount,
};
use crate::{Amount, Error, Result, Timestamp};

/// How the sale prices its tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mechanic {
    /// Fixed exchange rate with a hard cap of `Config::sale_amount`.
    FixedPrice(PriceFraction),
    /// Uncapped deposits; the price is set by the total weight at the end.
    PriceDiscovery,
}

impl Mechanic {
    pub fn price(&self) -> Option<&PriceFraction> {
        match self {
            Mechanic::FixedPrice(p) => Some(p),
            Mechanic::PriceDiscovery => None,
        }
    }
}

/// Cliff followed by linear release, both measured from the vesting start.
#[serde_as]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VestingSchedule {
    #[serde_as(as = "DisplayFromStr")]
    pub cliff_period: Timestamp,
    #[serde_as(as = "DisplayFromStr")]
    pub vesting_period: Timestamp,
}

impl VestingSchedule {
    pub fn new(cliff_period: Timestamp, vesting_period: Timestamp) -> Self {
        Self {
            cliff_period,
            vesting_period,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.vesting_period > 0 && self.cliff_period <= self.vesting_period
    }
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StakeholderProportion {
    pub account: IntentAccount,
    #[serde_as(as = "DisplayFromStr")]
    pub allocation: Amount,
    pub vesting: Option<VestingSchedule>,
}

impl StakeholderProportion {
    pub fn is_valid(&self) -> bool {
        self.allocation > 0 && self.vesting.is_none_or(|v| v.is_valid())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionProportions {
    pub solver_account: IntentAccount,
    pub stakeholder_proportions: Vec<StakeholderProportion>,
}

impl DistributionProportions {
    /// Solver and every stakeholder account pairwise distinct.
    pub fn accounts_unique(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.stakeholder_proportions.len() + 1);
        seen.insert(&self.solver_account);
        self.stakeholder_proportions
            .iter()
            .all(|p| seen.insert(&p.account))
    }

    /// `None` on overflow.
    pub fn total_allocation(&self) -> Option<Amount> {
        self.stakeholder_proportions
            .iter()
            .try_fold(0u128, |acc, p| acc.checked_add(p.allocation))
    }
}

/// Sale parameters. Immutable once a contract is created from it.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    #[serde_as(as = "DisplayFromStr")]
    pub start_date: Timestamp,
    #[serde_as(as = "DisplayFromStr")]
    pub end_date: Timestamp,
    pub mechanic: Mechanic,
    /// Public cap in sale-token units.
    #[serde_as(as = "DisplayFromStr")]
    pub sale_amount: Amount,
    #[serde_as(as = "DisplayFromStr")]
    pub total_sale_amount: Amount,
    /// Minimum total deposit, in deposit-token units, for the sale to succeed.
    #[serde_as(as = "DisplayFromStr")]
    pub soft_cap: Amount,
    pub discounts: Vec<Discount>,
    pub vesting: Option<VestingSchedule>,
    pub distribution_proportions: DistributionProportions,
}

/// A clause of the configuration validity predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConfigClause {
    Dates,
    Mechanics,
    Discounts,
    Vesting,
    Stakeholders,
    Accounting,
}

impl ConfigClause {
    pub const ALL: [ConfigClause; 6] = [
        ConfigClause::Dates,
        ConfigClause::Mechanics,
        ConfigClause::Discounts,
        ConfigClause::Vesting,
        ConfigClause::Stakeholders,
        ConfigClause::Accounting,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConfigClause::Dates => "dates",
            ConfigClause::Mechanics => "mechanics",
            ConfigClause::Discounts => "discounts",
            ConfigClause::Vesting => "vesting",
            ConfigClause::Stakeholders => "stakeholders",
            ConfigClause::Accounting => "accounting",
        }
    }
}

impl fmt::Display for ConfigClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Config {
    fn holds(&self, clause: ConfigClause) -> bool {
        match clause {
            ConfigClause::Dates => self.start_date < self.end_date,
            ConfigClause::Mechanics => self.mechanic.price().is_none_or(|p| p.is_valid()),
            ConfigClause::Discounts => {
                self.discounts.iter().all(Discount::is_valid)
                    && discounts_do_not_overlap(&self.discounts)
            }
            ConfigClause::Vesting => self.vesting.is_none_or(|v| v.is_valid()),
            ConfigClause::Stakeholders => {
                let props = &self.distribution_proportions;
                props.accounts_unique()
                    && props
                        .stakeholder_proportions
                        .iter()
                        .all(StakeholderProportion::is_valid)
            }
            ConfigClause::Accounting => self
                .distribution_proportions
                .total_allocation()
                .and_then(|s| s.checked_add(self.sale_amount))
                .is_some_and(|total| total == self.total_sale_amount),
        }
    }

    /// Every violated clause, in declaration order. Empty iff the config is valid.
    pub fn violations(&self) -> Vec<ConfigClause> {
        ConfigClause::ALL
            .into_iter()
            .filter(|&c| !self.holds(c))
            .collect()
    }

    pub fn is_valid(&self) -> bool {
        ConfigClause::ALL.into_iter().all(|c| self.holds(c))
    }

    /// `Ok` when valid, otherwise [`Error::InvalidConfig`] listing every violation.
    pub fn validate(&self) -> Result<()> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(violations))
        }
    }

    pub fn price(&self) -> Option<&PriceFraction> {
        self.mechanic.price()
    }

    pub fn active_discount(&self, t: Timestamp) -> Option<&Discount> {
        find_active_discount(&self.discounts, t)
    }

    pub fn solver(&self) -> &IntentAccount {
        &self.distribution_proportions.solver_account
    }
}

pub fn valid_config(g: &Config) -> bool {
    g.is_valid()
}

/// Deposit weight at time `t`: `a` unchanged outside every discount window,
/// otherwise the bonus of the active window applied. Requires `a > 0`.
pub fn calculate_weighted_amount_spec(a: Amount, t: Timestamp, g: &Config) -> Result<Amount> {
    if a == 0 {
        return Err(Error::Precondition("amount must be positive"));
    }
    match g.active_discount(t) {
        None => Ok(a),
        Some(d) => calculate_weighted_amount(a, d.percentage),
    }
}

/// Inverse of [`calculate_weighted_amount_spec`] at the same time. Requires `wa > 0`.
pub fn calculate_original_amount_spec(wa: Amount, t: Timestamp, g: &Config) -> Result<Amount> {
    if wa == 0 {
        return Err(Error::Precondition("weighted amount must be positive"));
    }
    match g.active_discount(t) {
        None => Ok(wa),
        Some(d) => calculate_original_amount(wa, d.percentage),
    }
}

pub fn get_stakeholder_proportion<'a>(
    props: &'a DistributionProportions,
    account: &IntentAccount,
) -> Option<&'a StakeholderProportion> {
    props
        .stakeholder_proportions
        .iter()
        .find(|p| &p.account == account)
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn minimal_config_is_valid() {
        assert!(valid_config(&fixed_price()));
        assert_eq!(fixed_price().violations(), vec![]);
    }

    #[test]
    fn equal_dates_violate_dates_clause() {
        let g = Config {
            end_date: 100,
            ..fixed_price()
        };
        assert!(!valid_config(&g));
        assert_eq!(g.violations(), vec![ConfigClause::Dates]);
    }

    #[test]
    fn accounting_mismatch() {
        let g = Config {
            total_sale_amount: 999,
            ..fixed_price()
        };
        assert_eq!(g.violations(), vec![ConfigClause::Accounting]);
    }

    #[test]
    fn reports_every_violation() {
        let mut g = fixed_price();
        g.end_date = 50;
        g.mechanic = Mechanic::FixedPrice(PriceFraction {
            deposit_token_amount: 0,
            sale_token_amount: 1,
        });
        g.discounts = vec![Discount::new(10, 20, 1), Discount::new(15, 25, 1)];
        g.vesting = Some(VestingSchedule::new(10, 5));
        g.distribution_proportions.stakeholder_proportions = vec![stake("solver", 5)];
        assert_eq!(g.violations(), ConfigClause::ALL.to_vec());
        assert_eq!(
            g.validate().unwrap_err().to_string(),
            "invalid configuration: dates, mechanics, discounts, vesting, stakeholders, accounting"
        );
    }

    #[test]
    fn stakeholder_clauses() {
        let mut g = fixed_price();
        g.distribution_proportions.stakeholder_proportions = vec![stake("a", 10), stake("b", 20)];
        g.total_sale_amount = 1030;
        assert!(g.is_valid());

        g.distribution_proportions.stakeholder_proportions[1].account = acct("a");
        assert_eq!(g.violations(), vec![ConfigClause::Stakeholders]);

        g.distribution_proportions.stakeholder_proportions[1] = stake("b", 0);
        g.total_sale_amount = 1010;
        assert_eq!(g.violations(), vec![ConfigClause::Stakeholders]);

        g.distribution_proportions.stakeholder_proportions[1] = StakeholderProportion {
            vesting: Some(VestingSchedule::new(0, 0)),
            ..stake("b", 20)
        };
        g.total_sale_amount = 1030;
        assert_eq!(g.violations(), vec![ConfigClause::Stakeholders]);
    }

    #[test]
    fn accounting_overflow_is_a_violation() {
        let mut g = fixed_price();
        g.distribution_proportions.stakeholder_proportions = vec![stake("a", u128::MAX)];
        assert_eq!(g.violations(), vec![ConfigClause::Accounting]);
    }

    #[test]
    fn weighted_spec_examples() {
        let g = discounted(fixed_price(), 500);
        assert_eq!(calculate_weighted_amount_spec(100, 160, &g), Ok(100));
        assert_eq!(calculate_weighted_amount_spec(100, 120, &g), Ok(105));
        let g1 = discounted(fixed_price(), 1);
        assert_eq!(calculate_weighted_amount_spec(1, 120, &g1), Ok(1));
        assert!(calculate_weighted_amount_spec(0, 120, &g1).is_err());
    }

    #[test]
    fn original_spec_examples() {
        let g = discounted(fixed_price(), 500);
        assert_eq!(calculate_original_amount_spec(105, 120, &g), Ok(100));
        assert_eq!(calculate_original_amount_spec(77, 160, &g), Ok(77));
        let g1 = discounted(fixed_price(), 1);
        assert_eq!(calculate_original_amount_spec(1, 120, &g1), Ok(0));
    }

    #[test]
    fn stakeholder_lookup_examples() {
        let props = DistributionProportions {
            solver_account: acct("s"),
            stakeholder_proportions: vec![stake("A", 100), stake("B", 200)],
        };
        assert_eq!(
            get_stakeholder_proportion(&props, &acct("B")),
            Some(&stake("B", 200))
        );
        let one = DistributionProportions {
            stakeholder_proportions: vec![stake("A", 100)],
            ..props.clone()
        };
        assert_eq!(get_stakeholder_proportion(&one, &acct("C")), None);
        let empty = DistributionProportions {
            stakeholder_proportions: vec![],
            ..props
        };
        assert_eq!(get_stakeholder_proportion(&empty, &acct("A")), None);
    }

    #[test]
    fn json_uses_decimal_strings() {
        let g = fixed_price();
        let json = serde_json::to_value(&g).unwrap();
        assert_eq!(json["sale_amount"], "1000");
        assert_eq!(json["mechanic"]["FixedPrice"]["deposit_token_amount"], "1");
        assert_eq!(serde_json::from_value::<Config>(json).unwrap(), g);
    }

    fn config_with_window() -> impl Strategy<Value = (Config, Timestamp)> {
        (prop::option::of(1..=crate::MULTIPLIER), 90u64..170).prop_map(|(p, t)| match p {
            Some(p) => (discounted(fixed_price(), p), t),
            None => (fixed_price(), t),
        })
    }

    proptest! {
        #[test]
        fn weighting_is_monotonic((g, t) in config_with_window(), a in 1..=(u64::MAX as Amount), b in 1..=(u64::MAX as Amount)) {
            let (lo, hi) = (a.min(b), a.max(b));
            prop_assert!(calculate_weighted_amount_spec(lo, t, &g).unwrap() <= calculate_weighted_amount_spec(hi, t, &g).unwrap());
            prop_assert!(calculate_original_amount_spec(lo, t, &g).unwrap() <= calculate_original_amount_spec(hi, t, &g).unwrap());
        }

        #[test]
        fn weighting_round_trip_loses_at_most_one((g, t) in config_with_window(), a in 1..=(u64::MAX as Amount)) {
            let w = calculate_weighted_amount_spec(a, t, &g).unwrap();
            let back = calculate_original_amount_spec(w, t, &g).unwrap();
            prop_assert!(a - 1 <= back && back <= a);
        }

        #[test]
        fn lookup_matches_linear_search(names in prop::collection::btree_set("[a-e]{1,2}", 0..8), probe in "[a-e]{1,2}") {
            let props = DistributionProportions {
                solver_account: acct("solver"),
                stakeholder_proportions: names.iter().map(|n| stake(n, 1)).collect(),
            };
            let probe = acct(&probe);
            let found = get_stakeholder_proportion(&props, &probe);
            let mut brute = None;
            for p in &props.stakeholder_proportions {
                if p.account == probe {
                    brute = Some(p);
                }
            }
            prop_assert_eq!(found, brute);
        }
    }
}
