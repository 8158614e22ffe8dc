//! Conversion between deposit-token amounts and sale-token assets at a fixed
//! price fraction.

use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::arith::{mul_div_floor, mul_div_rem};
use crate::{Amount, Error, Result};

/// Exchange rate `sale_token_amount / deposit_token_amount`: depositing
/// `deposit_token_amount` minimal units buys `sale_token_amount` minimal units.
#[serde_as]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriceFraction {
    #[serde_as(as = "DisplayFromStr")]
    pub deposit_token_amount: Amount,
    #[serde_as(as = "DisplayFromStr")]
    pub sale_token_amount: Amount,
}

impl PriceFraction {
    pub fn new(deposit_token_amount: Amount, sale_token_amount: Amount) -> Result<Self> {
        let price = Self {
            deposit_token_amount,
            sale_token_amount,
        };
        if !price.is_valid() {
            return Err(Error::Precondition("price terms must be positive"));
        }
        Ok(price)
    }

    pub fn is_valid(&self) -> bool {
        self.deposit_token_amount > 0 && self.sale_token_amount > 0
    }
}

/// Forward conversion `⌊w·sT/dT⌋`.
pub fn calculate_assets(w: Amount, price: &PriceFraction) -> Result<Amount> {
    mul_div_floor(w, price.sale_token_amount, price.deposit_token_amount)
}

/// Reverse conversion `⌊a·dT/sT⌋`.
pub fn calculate_assets_revert(assets: Amount, price: &PriceFraction) -> Result<Amount> {
    mul_div_floor(assets, price.deposit_token_amount, price.sale_token_amount)
}

/// A forward-then-reverse conversion together with the two division
/// remainders that account for its loss.
#[serde_as]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTrip {
    #[serde_as(as = "DisplayFromStr")]
    pub assets: Amount,
    #[serde_as(as = "DisplayFromStr")]
    pub reverted: Amount,
    /// `(w·sT) mod dT`
    #[serde_as(as = "DisplayFromStr")]
    pub rem1: Amount,
    /// `(assets·dT) mod sT`
    #[serde_as(as = "DisplayFromStr")]
    pub rem2: Amount,
}

impl RoundTrip {
    /// `w − reverted`. Never negative: `reverted ≤ w` holds for every input.
    pub fn loss(&self, w: Amount) -> Amount {
        w - self.reverted
    }
}

/// Converts `w` to assets and back, exposing the remainders so that
/// `(w − reverted)·sT = rem1 + rem2` can be observed per transaction.
pub fn round_trip_remainders(w: Amount, price: &PriceFraction) -> Result<RoundTrip> {
    let (assets, rem1) = mul_div_rem(w, price.sale_token_amount, price.deposit_token_amount)?;
    let (reverted, rem2) =
        mul_div_rem(assets, price.deposit_token_amount, price.sale_token_amount)?;
    Ok(RoundTrip {
        assets,
        reverted,
        rem1,
        rem2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(d: Amount, s: Amount) -> PriceFraction {
        PriceFraction::new(d, s).unwrap()
    }

    #[test]
    fn forward_examples() {
        assert_eq!(calculate_assets(10, &p(3, 7)), Ok(23));
        assert_eq!(calculate_assets(100, &p(5, 5)), Ok(100));
        assert_eq!(calculate_assets(1, &p(3, 2)), Ok(0));
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(calculate_assets_revert(23, &p(3, 7)), Ok(9));
        assert_eq!(calculate_assets_revert(100, &p(5, 5)), Ok(100));
        assert_eq!(calculate_assets_revert(0, &p(3, 7)), Ok(0));
    }

    #[test]
    fn round_trip_examples() {
        let rt = round_trip_remainders(10, &p(3, 7)).unwrap();
        assert_eq!((rt.assets, rt.reverted, rt.rem1, rt.rem2), (23, 9, 1, 6));
        assert_eq!(rt.loss(10) * 7, rt.rem1 + rt.rem2);

        let rt = round_trip_remainders(100, &p(5, 5)).unwrap();
        assert_eq!((rt.assets, rt.reverted, rt.rem1, rt.rem2), (100, 100, 0, 0));

        let rt = round_trip_remainders(1, &p(2, 3)).unwrap();
        assert_eq!((rt.assets, rt.reverted, rt.rem1, rt.rem2), (1, 0, 1, 2));
        assert_eq!(rt.loss(1) * 3, 3);
    }

    #[test]
    fn invalid_price() {
        assert!(PriceFraction::new(0, 1).is_err());
        assert!(PriceFraction::new(1, 0).is_err());
        let zero = PriceFraction {
            deposit_token_amount: 0,
            sale_token_amount: 1,
        };
        assert!(calculate_assets(5, &zero).unwrap_err().is_precondition());
    }

    #[test]
    fn loss_equation_exhaustive_small_grid() {
        for d in 1..=64 {
            for s in 1..=64 {
                let price = p(d, s);
                for w in 1..=64 {
                    let rt = round_trip_remainders(w, &price).unwrap();
                    assert!(rt.reverted <= w);
                    assert_eq!(rt.loss(w) * s, rt.rem1 + rt.rem2, "w={w} d={d} s={s}");
                }
            }
        }
    }

    fn amount() -> impl Strategy<Value = Amount> {
        1..=(u64::MAX as Amount)
    }

    proptest! {
        #[test]
        fn favourable_price_never_loses(w in amount(), d in amount(), extra in 0..=(u64::MAX as Amount)) {
            let s = d + extra;
            let assets = calculate_assets(w, &p(d, s)).unwrap();
            prop_assert!(assets >= w);
            if extra >= d {
                prop_assert!(assets > w);
            }
        }

        #[test]
        fn unfavourable_price_loses(w in amount(), s in amount(), extra in 1..=(u64::MAX as Amount)) {
            let d = s + extra;
            prop_assert!(calculate_assets(w, &p(d, s)).unwrap() < w);
            prop_assert!(calculate_assets_revert(w, &p(d, s)).unwrap() >= w);
        }

        #[test]
        fn revert_is_monotonic(a in 0..=(u64::MAX as Amount), b in 0..=(u64::MAX as Amount), d in amount(), s in amount()) {
            let (lo, hi) = (a.min(b), a.max(b));
            let price = p(d, s);
            prop_assert!(calculate_assets_revert(lo, &price).unwrap() <= calculate_assets_revert(hi, &price).unwrap());
        }

        #[test]
        fn round_trip_bounded(w in amount(), d in amount(), s in amount()) {
            let rt = round_trip_remainders(w, &p(d, s)).unwrap();
            if rt.assets > 0 {
                prop_assert!(rt.reverted <= w);
                prop_assert!(rt.loss(w) * s < d + s);
            }
        }
    }
}
