//! Post-sale allocation and vesting.

use crate::arith::mul_div_floor;
use crate::config::{Config, Mechanic, StakeholderProportion, VestingSchedule};
use crate::withdraw::InvestmentAmount;
use crate::{Amount, Error, Result, Timestamp};

/// Inputs of the vesting curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VestingContext {
    pub total_assets: Amount,
    pub vesting_start: Timestamp,
    pub schedule: VestingSchedule,
}

/// Total sale tokens owed for weight `w` out of `sold`.
///
/// Fixed price: the weight already is the asset amount. Price discovery: the
/// pro-rata share `⌊w·sale_amount/sold⌋`.
pub fn user_allocation_spec(w: Amount, sold: Amount, g: &Config) -> Result<Amount> {
    if w > sold {
        return Err(Error::Precondition("weight exceeds total sold"));
    }
    match g.mechanic {
        Mechanic::FixedPrice(_) => Ok(w),
        Mechanic::PriceDiscovery => {
            if sold == 0 {
                return Err(Error::Precondition("total sold must be positive"));
            }
            mul_div_floor(w, g.sale_amount, sold)
        }
    }
}

/// Zero before the cliff ends, everything once the vesting period has
/// elapsed, and `⌊A·(t−start)/vesting_period⌋` in between.
pub fn calculate_vesting_spec(ctx: &VestingContext, t: Timestamp) -> Amount {
    let start = ctx.vesting_start as u128;
    let t = t as u128;
    let VestingSchedule {
        cliff_period,
        vesting_period,
    } = ctx.schedule;
    if t < start + cliff_period as u128 {
        return 0;
    }
    if t >= start + vesting_period as u128 {
        return ctx.total_assets;
    }
    // t − start < vesting_period here, so the quotient is below total_assets.
    mul_div_floor(ctx.total_assets, t - start, vesting_period as u128)
        .expect("linear vesting quotient is bounded by total assets")
}

/// Public-sale tokens claimable at `t`, vested from the sale end date.
pub fn available_for_claim_spec(
    inv: &InvestmentAmount,
    sold: Amount,
    g: &Config,
    t: Timestamp,
) -> Result<Amount> {
    let allocation = user_allocation_spec(inv.weight, sold, g)?;
    Ok(match g.vesting {
        None => allocation,
        Some(schedule) => calculate_vesting_spec(
            &VestingContext {
                total_assets: allocation,
                vesting_start: g.end_date,
                schedule,
            },
            t,
        ),
    })
}

/// Stakeholder tokens claimable at `t` under the stakeholder's own schedule.
pub fn available_for_individual_vesting_claim_spec(
    p: &StakeholderProportion,
    g: &Config,
    t: Timestamp,
) -> Amount {
    match p.vesting {
        None => p.allocation,
        Some(schedule) => calculate_vesting_spec(
            &VestingContext {
                total_assets: p.allocation,
                vesting_start: g.end_date,
                schedule,
            },
            t,
        ),
    }
}
