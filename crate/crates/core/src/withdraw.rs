//! Withdrawal workflow.

use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::arith::add;
use crate::config::{calculate_weighted_amount_spec, Config, Mechanic};
use crate::{Amount, Error, Result, Timestamp};

/// Per-participant investment record.
#[serde_as]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvestmentAmount {
    /// Principal, in deposit-token units.
    #[serde_as(as = "DisplayFromStr")]
    pub amount: Amount,
    #[serde_as(as = "DisplayFromStr")]
    pub weight: Amount,
    /// Sale tokens already claimed.
    #[serde_as(as = "DisplayFromStr")]
    pub claimed: Amount,
}

impl InvestmentAmount {
    pub fn new(amount: Amount, weight: Amount, claimed: Amount) -> Self {
        Self {
            amount,
            weight,
            claimed,
        }
    }

    pub fn add_to_claimed(self, delta: Amount) -> Result<Self> {
        Ok(Self {
            claimed: add(self.claimed, delta)?,
            ..self
        })
    }
}

fn check_common(inv: &InvestmentAmount, a: Amount, sold: Amount) -> Result<()> {
    if a == 0 {
        return Err(Error::Precondition("withdrawal amount must be positive"));
    }
    if inv.weight > sold {
        return Err(Error::Precondition("investment weight exceeds total sold"));
    }
    Ok(())
}

/// All-or-nothing withdrawal: `a` must equal the whole principal. Returns the
/// zeroed record and the reduced total sold.
pub fn withdraw_fixed_price_spec(
    inv: &InvestmentAmount,
    a: Amount,
    sold: Amount,
) -> Result<(InvestmentAmount, Amount)> {
    check_common(inv, a, sold)?;
    if a != inv.amount {
        return Err(Error::Precondition(
            "fixed-price withdrawal must be for the full amount",
        ));
    }
    let next = InvestmentAmount {
        amount: 0,
        weight: 0,
        claimed: inv.claimed,
    };
    Ok((next, sold - inv.weight))
}

/// Partial or full withdrawal with the remaining principal re-weighted at `t`.
/// The new weight is the smaller of the old weight and the re-weighted
/// remainder, so withdrawing can never raise a participant's weight.
pub fn withdraw_price_discovery_spec(
    g: &Config,
    inv: &InvestmentAmount,
    a: Amount,
    sold: Amount,
    t: Timestamp,
) -> Result<(InvestmentAmount, Amount)> {
    check_common(inv, a, sold)?;
    if a > inv.amount {
        return Err(Error::Precondition("withdrawal exceeds deposited amount"));
    }
    let remaining = inv.amount - a;
    let recalculated = if remaining == 0 {
        0
    } else {
        calculate_weighted_amount_spec(remaining, t, g)?
    };
    let weight = inv.weight.min(recalculated);
    let next = InvestmentAmount {
        amount: remaining,
        weight,
        claimed: inv.claimed,
    };
    Ok((next, sold - (inv.weight - weight)))
}

pub fn withdraw_spec(
    g: &Config,
    inv: &InvestmentAmount,
    a: Amount,
    sold: Amount,
    t: Timestamp,
) -> Result<(InvestmentAmount, Amount)> {
    match g.mechanic {
        Mechanic::FixedPrice(_) => withdraw_fixed_price_spec(inv, a, sold),
        Mechanic::PriceDiscovery => withdraw_price_discovery_spec(g, inv, a, sold, t),
    }
}
