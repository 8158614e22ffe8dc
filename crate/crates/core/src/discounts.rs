//! Time-windowed percentage bonuses in fixed-point basis points.

use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::arith::mul_div_floor;
use crate::{Amount, Error, Result, Timestamp};

/// Fixed-point basis: a percentage of `MULTIPLIER` is 100%.
pub const MULTIPLIER: Amount = 10_000;

/// A bonus of `percentage / MULTIPLIER` applied to deposits made in
/// `[start_date, end_date)`.
#[serde_as]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discount {
    #[serde_as(as = "DisplayFromStr")]
    pub start_date: Timestamp,
    #[serde_as(as = "DisplayFromStr")]
    pub end_date: Timestamp,
    #[serde_as(as = "DisplayFromStr")]
    pub percentage: Amount,
}

impl Discount {
    pub fn new(start_date: Timestamp, end_date: Timestamp, percentage: Amount) -> Self {
        Self {
            start_date,
            end_date,
            percentage,
        }
    }

    /// `0 < percentage ≤ MULTIPLIER` and `start_date < end_date`.
    pub fn is_valid(&self) -> bool {
        self.percentage > 0 && self.percentage <= MULTIPLIER && self.start_date < self.end_date
    }

    /// Half-open window: active at `start_date`, inactive from `end_date` on.
    pub fn is_active(&self, t: Timestamp) -> bool {
        self.start_date <= t && t < self.end_date
    }

    fn disjoint(&self, other: &Discount) -> bool {
        self.end_date <= other.start_date || other.end_date <= self.start_date
    }
}

fn check_args(amount: Amount, p: Amount) -> Result<()> {
    if amount == 0 {
        return Err(Error::Precondition("amount must be positive"));
    }
    if p == 0 || p > MULTIPLIER {
        return Err(Error::Precondition("percentage must be in (0, MULTIPLIER]"));
    }
    Ok(())
}

/// Applies a bonus: `⌊a·(M+p)/M⌋`.
pub fn calculate_weighted_amount(a: Amount, p: Amount) -> Result<Amount> {
    check_args(a, p)?;
    mul_div_floor(a, MULTIPLIER + p, MULTIPLIER)
}

/// Reverts a bonus: `⌊wa·M/(M+p)⌋`.
pub fn calculate_original_amount(wa: Amount, p: Amount) -> Result<Amount> {
    check_args(wa, p)?;
    mul_div_floor(wa, MULTIPLIER, MULTIPLIER + p)
}

/// True iff every pair of windows is disjoint.
pub fn discounts_do_not_overlap(ds: &[Discount]) -> bool {
    ds.iter()
        .enumerate()
        .all(|(i, a)| ds[i + 1..].iter().all(|b| a.disjoint(b)))
}

/// First discount active at `t`. With non-overlapping windows this is the
/// only active one.
pub fn find_active_discount(ds: &[Discount], t: Timestamp) -> Option<&Discount> {
    ds.iter().find(|d| d.is_active(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: Timestamp, e: Timestamp, p: Amount) -> Discount {
        Discount::new(s, e, p)
    }

    #[test]
    fn activity_boundaries() {
        let x = d(10, 20, 500);
        assert!(x.is_active(10));
        assert!(!x.is_active(20));
        assert!(x.is_active(15));
        assert!(!x.is_active(9));
    }

    #[test]
    fn weighted_examples() {
        assert_eq!(calculate_weighted_amount(100, 500), Ok(105));
        assert_eq!(calculate_weighted_amount(10, 10_000), Ok(20));
        assert_eq!(calculate_weighted_amount(1, 1), Ok(1));
    }

    #[test]
    fn original_examples() {
        assert_eq!(calculate_original_amount(105, 500), Ok(100));
        assert_eq!(calculate_original_amount(20, 10_000), Ok(10));
        assert_eq!(calculate_original_amount(1, 1), Ok(0));
    }

    #[test]
    fn rejects_out_of_range_inputs() {
        assert!(calculate_weighted_amount(0, 1).is_err());
        assert!(calculate_weighted_amount(1, 0).is_err());
        assert!(calculate_original_amount(1, MULTIPLIER + 1).is_err());
        assert_eq!(
            calculate_weighted_amount(u128::MAX, MULTIPLIER),
            Err(Error::Overflow)
        );
    }

    #[test]
    fn validity() {
        assert!(d(1, 2, 1).is_valid());
        assert!(d(1, 2, MULTIPLIER).is_valid());
        assert!(!d(1, 2, 0).is_valid());
        assert!(!d(1, 2, MULTIPLIER + 1).is_valid());
        assert!(!d(2, 2, 5).is_valid());
    }

    #[test]
    fn overlap_examples() {
        assert!(discounts_do_not_overlap(&[d(10, 20, 1), d(20, 30, 1)]));
        assert!(!discounts_do_not_overlap(&[d(10, 20, 1), d(15, 30, 1)]));
        assert!(discounts_do_not_overlap(&[]));
        // Order does not matter.
        assert!(discounts_do_not_overlap(&[d(20, 30, 1), d(10, 20, 1)]));
        assert!(!discounts_do_not_overlap(&[
            d(1, 2, 1),
            d(50, 60, 1),
            d(55, 56, 1)
        ]));
    }

    #[test]
    fn find_examples() {
        let ds = [d(10, 20, 500), d(20, 30, 300)];
        assert_eq!(find_active_discount(&ds, 25), Some(&ds[1]));
        assert_eq!(find_active_discount(&ds[..1], 5), None);
        assert_eq!(find_active_discount(&[], 99), None);
    }

    #[test]
    fn discount_round_trip_exhaustive() {
        for p in [1, 100, 500, 9_999, 10_000] {
            for a in 1..=10_000 {
                let back =
                    calculate_original_amount(calculate_weighted_amount(a, p).unwrap(), p).unwrap();
                assert!(a - 1 <= back && back <= a, "a={a} p={p} back={back}");
            }
        }
    }

    fn windows() -> impl Strategy<Value = Vec<Discount>> {
        prop::collection::vec((0u64..100, 1u64..20, 1..=MULTIPLIER), 0..6)
            .prop_map(|v| v.into_iter().map(|(s, len, p)| d(s, s + len, p)).collect())
    }

    proptest! {
        #[test]
        fn weighting_bounds(a in 1..=(u64::MAX as Amount), p in 1..=MULTIPLIER) {
            let w = calculate_weighted_amount(a, p).unwrap();
            prop_assert!(w >= a);
            prop_assert!(calculate_original_amount(w, p).unwrap() <= w);
        }

        #[test]
        fn at_most_one_active(ds in windows(), t in 0u64..130) {
            let active = ds.iter().filter(|x| x.is_active(t)).count();
            if discounts_do_not_overlap(&ds) {
                prop_assert!(active <= 1);
                prop_assert_eq!(find_active_discount(&ds, t).is_some(), active == 1);
            }
        }

        #[test]
        fn overlap_matches_pointwise_brute_force(ds in windows()) {
            let brute = (0u64..130).all(|t| ds.iter().filter(|x| x.is_active(t)).count() <= 1);
            prop_assert_eq!(discounts_do_not_overlap(&ds), brute);
        }
    }
}
