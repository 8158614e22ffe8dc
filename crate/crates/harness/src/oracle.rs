//! Independent reference model built on arbitrary-precision rationals.
//!
//! Every quantity is an exact rational floored once, with no shared code path
//! with the fixed-width implementation under test.

use launchpad_core::{
    Amount, Config, InvestmentAmount, Mechanic, PriceFraction, Timestamp, MULTIPLIER,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

pub fn big(x: Amount) -> BigInt {
    BigInt::from(x)
}

/// `⌊x·y/k⌋` over the rationals. `k` must be nonzero.
pub fn floor_ratio(x: &BigInt, y: &BigInt, k: &BigInt) -> BigInt {
    (BigRational::from_integer(x * y) / BigRational::from_integer(k.clone()))
        .floor()
        .to_integer()
}

pub fn mul_div(x: Amount, y: Amount, k: Amount) -> BigInt {
    floor_ratio(&big(x), &big(y), &big(k))
}

pub fn to_amount(x: &BigInt) -> Option<Amount> {
    x.to_u128()
}

fn active_percentage(g: &Config, t: Timestamp) -> Option<Amount> {
    g.discounts
        .iter()
        .find(|d| d.start_date <= t && t < d.end_date)
        .map(|d| d.percentage)
}

pub fn assets(w: &BigInt, price: &PriceFraction) -> BigInt {
    floor_ratio(
        w,
        &big(price.sale_token_amount),
        &big(price.deposit_token_amount),
    )
}

pub fn revert(a: &BigInt, price: &PriceFraction) -> BigInt {
    floor_ratio(
        a,
        &big(price.deposit_token_amount),
        &big(price.sale_token_amount),
    )
}

pub fn weighted(a: &BigInt, t: Timestamp, g: &Config) -> BigInt {
    match active_percentage(g, t) {
        Some(p) => floor_ratio(a, &big(MULTIPLIER + p), &big(MULTIPLIER)),
        None => a.clone(),
    }
}

pub fn original(wa: &BigInt, t: Timestamp, g: &Config) -> BigInt {
    match active_percentage(g, t) {
        Some(p) => floor_ratio(wa, &big(MULTIPLIER), &big(MULTIPLIER + p)),
        None => wa.clone(),
    }
}

/// Exact deposit result in unbounded integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDeposit {
    pub new_amount: BigInt,
    pub weight_added: BigInt,
    pub new_total_deposited: BigInt,
    pub new_total_sold: BigInt,
    pub refund: BigInt,
    /// Every intermediate the fixed-width model must hold.
    pub intermediates: Vec<BigInt>,
}

impl ExactDeposit {
    /// Whether a 128-bit implementation can represent every quantity.
    pub fn fits(&self) -> bool {
        let max = big(Amount::MAX);
        [
            &self.new_amount,
            &self.weight_added,
            &self.new_total_deposited,
            &self.new_total_sold,
            &self.refund,
        ]
        .into_iter()
        .chain(&self.intermediates)
        .all(|x| *x <= max)
    }

    pub fn matches(&self, o: &launchpad_core::DepositOutcome) -> bool {
        self.new_amount == big(o.new_amount)
            && self.weight_added == big(o.weight_added)
            && self.new_total_deposited == big(o.new_total_deposited)
            && self.new_total_sold == big(o.new_total_sold)
            && self.refund == big(o.refund)
    }
}

/// `None` when the deposit's preconditions fail.
pub fn deposit(
    g: &Config,
    a: Amount,
    deposited: Amount,
    sold: Amount,
    t: Timestamp,
) -> Option<ExactDeposit> {
    if a == 0 {
        return None;
    }
    let (a, d, s) = (big(a), big(deposited), big(sold));
    let w = weighted(&a, t, g);
    match &g.mechanic {
        Mechanic::PriceDiscovery => Some(ExactDeposit {
            new_amount: a.clone(),
            weight_added: w.clone(),
            new_total_deposited: &d + &a,
            new_total_sold: &s + &w,
            refund: BigInt::zero(),
            intermediates: vec![w],
        }),
        Mechanic::FixedPrice(price) => {
            let cap = big(g.sale_amount);
            if s >= cap {
                return None;
            }
            let assets = assets(&w, price);
            let potential = &s + &assets;
            if potential <= cap {
                return Some(ExactDeposit {
                    new_amount: a.clone(),
                    weight_added: assets.clone(),
                    new_total_deposited: &d + &a,
                    new_total_sold: potential.clone(),
                    refund: BigInt::zero(),
                    intermediates: vec![w, assets, potential],
                });
            }
            let excess = &potential - &cap;
            let remain = revert(&excess, price);
            let refund = original(&remain, t, g);
            let kept = &a - &refund;
            Some(ExactDeposit {
                new_amount: kept.clone(),
                weight_added: &cap - &s,
                new_total_deposited: &d + &kept,
                new_total_sold: cap,
                refund,
                intermediates: vec![w, assets, potential, excess, remain],
            })
        }
    }
}

/// Exact refund of an over-cap fixed-price deposit.
pub fn refund(g: &Config, a: Amount, sold: Amount, t: Timestamp) -> Option<BigInt> {
    let price = g.price()?;
    let w = weighted(&big(a), t, g);
    let excess = &big(sold) + assets(&w, price) - big(g.sale_amount);
    (excess > BigInt::zero()).then(|| original(&revert(&excess, price), t, g))
}

/// Weight left after a price-discovery withdrawal of `a`.
pub fn withdrawn_weight(g: &Config, inv: &InvestmentAmount, a: Amount, t: Timestamp) -> BigInt {
    let remaining = big(inv.amount) - big(a);
    let rew = if remaining.is_zero() {
        remaining
    } else {
        weighted(&remaining, t, g)
    };
    rew.min(big(inv.weight))
}

pub fn vesting(
    total: &BigInt,
    start: Timestamp,
    cliff: Timestamp,
    period: Timestamp,
    t: Timestamp,
) -> BigInt {
    let (start, t) = (BigInt::from(start), BigInt::from(t));
    if t < &start + BigInt::from(cliff) {
        BigInt::zero()
    } else if t >= &start + BigInt::from(period) {
        total.clone()
    } else {
        floor_ratio(total, &(t - start), &BigInt::from(period))
    }
}

pub fn allocation(w: Amount, sold: Amount, g: &Config) -> BigInt {
    match g.mechanic {
        Mechanic::FixedPrice(_) => big(w),
        Mechanic::PriceDiscovery => mul_div(w, g.sale_amount, sold),
    }
}

pub fn available_for_claim(
    inv: &InvestmentAmount,
    sold: Amount,
    g: &Config,
    t: Timestamp,
) -> BigInt {
    let a = allocation(inv.weight, sold, g);
    match g.vesting {
        None => a,
        Some(v) => vesting(&a, g.end_date, v.cliff_period, v.vesting_period, t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floors() {
        assert_eq!(mul_div(5, 3, 2), BigInt::from(7));
        assert_eq!(
            mul_div(Amount::MAX, Amount::MAX, 1),
            big(Amount::MAX) * big(Amount::MAX)
        );
        assert_eq!(to_amount(&mul_div(Amount::MAX, 2, 1)), None);
    }

    #[test]
    fn vesting_curve() {
        let total = BigInt::from(1000);
        assert_eq!(vesting(&total, 100, 50, 200, 149), BigInt::zero());
        assert_eq!(vesting(&total, 100, 50, 200, 200), BigInt::from(500));
        assert_eq!(vesting(&total, 100, 50, 200, 300), total);
    }
}
