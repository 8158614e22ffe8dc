//! Deposit workflow: weighting, conversion, the public cap and partial refunds.

use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::arith::{add, sub};
use crate::assets::{calculate_assets, calculate_assets_revert, PriceFraction};
use crate::config::{
    calculate_original_amount_spec, calculate_weighted_amount_spec, Config, Mechanic,
};
use crate::{Amount, Error, Result, Timestamp};

/// Result of a single deposit.
#[serde_as]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepositOutcome {
    /// Principal retained by the contract.
    #[serde_as(as = "DisplayFromStr")]
    pub new_amount: Amount,
    /// Weight (fixed price: sale-token assets) credited to the depositor.
    #[serde_as(as = "DisplayFromStr")]
    pub weight_added: Amount,
    #[serde_as(as = "DisplayFromStr")]
    pub new_total_deposited: Amount,
    #[serde_as(as = "DisplayFromStr")]
    pub new_total_sold: Amount,
    /// Principal returned because the deposit crossed the cap.
    #[serde_as(as = "DisplayFromStr")]
    pub refund: Amount,
}

fn fixed_price(g: &Config) -> Result<&PriceFraction> {
    g.price()
        .ok_or(Error::Precondition("sale mechanic is not fixed price"))
}

/// Principal to hand back when a fixed-price deposit overshoots the cap.
///
/// The excess assets beyond `sale_amount` are converted back to a weighted
/// amount and then un-weighted at the same time `t`. An excess that reverts to
/// zero refunds nothing.
pub fn calculate_refund_spec(
    g: &Config,
    a: Amount,
    sold: Amount,
    t: Timestamp,
    price: &PriceFraction,
) -> Result<Amount> {
    let w = calculate_weighted_amount_spec(a, t, g)?;
    let assets = calculate_assets(w, price)?;
    let potential = add(sold, assets)?;
    if sold >= g.sale_amount || potential <= g.sale_amount {
        return Err(Error::Precondition(
            "refund requires a deposit that crosses the cap",
        ));
    }
    let excess = potential - g.sale_amount;
    let remain = calculate_assets_revert(excess, price)?;
    if remain == 0 {
        return Ok(0);
    }
    calculate_original_amount_spec(remain, t, g)
}

/// Fixed-price deposit of `a` when `deposited` principal and `sold` assets are
/// already recorded. Requires `sold < sale_amount`.
pub fn deposit_fixed_price_spec(
    g: &Config,
    a: Amount,
    deposited: Amount,
    sold: Amount,
    t: Timestamp,
) -> Result<DepositOutcome> {
    let price = fixed_price(g)?;
    if a == 0 {
        return Err(Error::Precondition("deposit amount must be positive"));
    }
    if sold >= g.sale_amount {
        return Err(Error::Precondition("sale cap already reached"));
    }
    let w = calculate_weighted_amount_spec(a, t, g)?;
    let assets = calculate_assets(w, price)?;
    let potential = add(sold, assets)?;
    if potential <= g.sale_amount {
        return Ok(DepositOutcome {
            new_amount: a,
            weight_added: assets,
            new_total_deposited: add(deposited, a)?,
            new_total_sold: potential,
            refund: 0,
        });
    }
    let refund = calculate_refund_spec(g, a, sold, t, price)?;
    let kept = sub(a, refund)?;
    Ok(DepositOutcome {
        new_amount: kept,
        weight_added: g.sale_amount - sold,
        new_total_deposited: add(deposited, kept)?,
        new_total_sold: g.sale_amount,
        refund,
    })
}

/// Price-discovery deposit: the whole principal is kept and the discount
/// weight is accrued. There is no cap, so no refund.
pub fn deposit_price_discovery_spec(
    g: &Config,
    a: Amount,
    deposited: Amount,
    sold: Amount,
    t: Timestamp,
) -> Result<DepositOutcome> {
    if g.mechanic != Mechanic::PriceDiscovery {
        return Err(Error::Precondition("sale mechanic is not price discovery"));
    }
    if a == 0 {
        return Err(Error::Precondition("deposit amount must be positive"));
    }
    let w = calculate_weighted_amount_spec(a, t, g)?;
    Ok(DepositOutcome {
        new_amount: a,
        weight_added: w,
        new_total_deposited: add(deposited, a)?,
        new_total_sold: add(sold, w)?,
        refund: 0,
    })
}

/// Dispatches on the sale mechanic.
pub fn deposit_spec(
    g: &Config,
    a: Amount,
    deposited: Amount,
    sold: Amount,
    t: Timestamp,
) -> Result<DepositOutcome> {
    match g.mechanic {
        Mechanic::FixedPrice(_) => deposit_fixed_price_spec(g, a, deposited, sold, t),
        Mechanic::PriceDiscovery => deposit_price_discovery_spec(g, a, deposited, sold, t),
    }
}
