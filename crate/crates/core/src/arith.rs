//! Exact unsigned scaling primitives.
//!
//! All financial conversions reduce to `⌊x·y/k⌋`. The product of two 128-bit
//! amounts is formed as a 256-bit value held in two `u128` halves, then divided
//! by `k` with a restoring long division. A quotient that does not fit 128 bits
//! is reported as [`Error::Overflow`]; a zero divisor as a precondition error.

use crate::{Amount, Error, Result};

/// `⌊x·y/k⌋`, exact.
pub fn mul_div_floor(x: Amount, y: Amount, k: Amount) -> Result<Amount> {
    mul_div_rem(x, y, k).map(|(q, _)| q)
}

/// Quotient and remainder of the full-width product `x·y` divided by `k`.
///
/// The remainder is always `< k` and therefore fits even when the product
/// itself needs 256 bits.
pub fn mul_div_rem(x: Amount, y: Amount, k: Amount) -> Result<(Amount, Amount)> {
    if k == 0 {
        return Err(Error::Precondition("divisor must be positive"));
    }
    if let Some(p) = x.checked_mul(y) {
        return Ok((p / k, p % k));
    }
    let (hi, lo) = widening_mul(x, y);
    div_wide(hi, lo, k)
}

/// Euclidean division: `x = q·y + r` with `0 ≤ r < y`.
pub fn div_rem(x: Amount, y: Amount) -> Result<(Amount, Amount)> {
    if y == 0 {
        return Err(Error::Precondition("divisor must be positive"));
    }
    Ok((x / y, x % y))
}

/// `x + y`, or [`Error::Overflow`].
pub fn add(x: Amount, y: Amount) -> Result<Amount> {
    x.checked_add(y).ok_or(Error::Overflow)
}

/// `x − y` for `y ≤ x`.
pub fn sub(x: Amount, y: Amount) -> Result<Amount> {
    x.checked_sub(y)
        .ok_or(Error::Precondition("subtraction would go below zero"))
}

/// Full 256-bit product as `(high, low)` halves.
fn widening_mul(x: u128, y: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (x1, x0) = (x >> 64, x & MASK);
    let (y1, y0) = (y >> 64, y & MASK);

    let p00 = x0 * y0;
    let p01 = x0 * y1;
    let p10 = x1 * y0;
    let p11 = x1 * y1;

    // Middle column: at most three 64-bit values, never overflows u128.
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (p00 & MASK) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

/// Divides the 256-bit value `hi·2^128 + lo` by `k > 0`.
fn div_wide(hi: u128, lo: u128, k: u128) -> Result<(u128, u128)> {
    if hi >= k {
        return Err(Error::Overflow);
    }
    let mut rem = hi;
    let mut quot = 0u128;
    for bit in (0..128).rev() {
        // rem < k before the shift, so the true shifted value is < 2k < 2^129;
        // `carry` holds its 129th bit.
        let carry = rem >> 127;
        rem = (rem << 1) | ((lo >> bit) & 1);
        if carry == 1 || rem >= k {
            rem = rem.wrapping_sub(k);
            quot |= 1 << bit;
        }
    }
    Ok((quot, rem))
}
