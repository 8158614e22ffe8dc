//! Pure transition functions for a capped token-sale launchpad.
//!
//! Every function in this crate is deterministic and side-effect free.
//! Amounts are exact unsigned integers in minimal token units; products are
//! formed in 256-bit intermediates so no operation ever wraps or rounds other
//! than the documented final floor.
//!
//! Layering, bottom to top:
//!
//! - [`arith`]: exact `⌊x·y/k⌋` and Euclidean division.
//! - [`assets`], [`discounts`]: price-fraction conversion and basis-point bonuses.
//! - [`config`]: the immutable sale configuration and time-aware weighting.
//! - [`deposit`], [`withdraw`], [`claim`], [`distribution`]: per-action workflows.
//! - [`launchpad`]: the contract state, its status function and transitions.

#![forbid(unsafe_code)]

pub mod account;
pub mod arith;
pub mod assets;
pub mod claim;
pub mod config;
pub mod deposit;
pub mod discounts;
pub mod distribution;
mod error;
pub mod launchpad;
pub mod withdraw;

pub use account::{AccountId, IntentAccount};
pub use assets::PriceFraction;
pub use config::{
    Config, ConfigClause, DistributionProportions, Mechanic, StakeholderProportion, VestingSchedule,
};
pub use deposit::DepositOutcome;
pub use discounts::{Discount, MULTIPLIER};
pub use error::{Error, Result};
pub use launchpad::{ContractState, SaleStatus};
pub use withdraw::InvestmentAmount;

/// Token amount in minimal units.
pub type Amount = u128;

/// Point in time or duration, in the same units as the sale dates.
pub type Timestamp = u64;
