//! Every proven lemma of the launchpad model as an executable sampled check,
//! plus the traceability matrix built from them.

use launchpad_core::arith::{div_rem, mul_div_floor};
use launchpad_core::assets::{calculate_assets, calculate_assets_revert, round_trip_remainders};
use launchpad_core::claim::{calculate_vesting_spec, user_allocation_spec, VestingContext};
use launchpad_core::config::{calculate_original_amount_spec, calculate_weighted_amount_spec};
use launchpad_core::deposit::deposit_spec;
use launchpad_core::discounts::{
    calculate_original_amount, calculate_weighted_amount, find_active_discount,
};
use launchpad_core::{
    Amount, Config, ContractState, Error, Mechanic, PriceFraction, SaleStatus, Timestamp,
    VestingSchedule, MULTIPLIER,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::gen;
use crate::oracle::big;

/// Outcome of one sample: `Ok(true)` checked, `Ok(false)` inputs fell outside
/// the 128-bit domain, `Err` a counterexample.
pub type Sample = Result<bool, String>;

pub struct Lemma {
    pub name: &'static str,
    pub module: &'static str,
    pub statement: &'static str,
    /// Unit and property tests that exercise the same statement.
    pub tests: &'static [&'static str],
    pub check: fn(&mut ChaCha8Rng) -> Sample,
}

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> Sample {
    if ok {
        Ok(true)
    } else {
        Err(detail())
    }
}

fn small_or_wide(rng: &mut ChaCha8Rng, bits: u32) -> Amount {
    if rng.gen_bool(0.3) {
        rng.gen_range(1..=64)
    } else {
        gen::amount(rng, bits)
    }
}

fn price(rng: &mut ChaCha8Rng) -> (Amount, Amount, PriceFraction) {
    let (d, s) = (small_or_wide(rng, 64), small_or_wide(rng, 64));
    (d, s, PriceFraction::new(d, s).expect("positive"))
}

fn quotient(x: Amount, k: Amount) -> Amount {
    div_rem(x, k).expect("nonzero divisor").0
}

fn scaled(x: Amount, y: Amount, k: Amount) -> Option<Amount> {
    mul_div_floor(x, y, k).ok()
}

fn div_maintains_gte(rng: &mut ChaCha8Rng) -> Sample {
    let x = gen::amount(rng, 128);
    let y = rng.gen_range(0..=x);
    let k = small_or_wide(rng, 128);
    ensure(quotient(x, k) >= quotient(y, k), || {
        format!("x={x} y={y} k={k}")
    })
}

fn div_maintains_gt(rng: &mut ChaCha8Rng) -> Sample {
    let (b, k, extra) = (
        gen::amount(rng, 126) - 1,
        small_or_wide(rng, 126),
        gen::amount(rng, 126) - 1,
    );
    let a = b + k + extra;
    ensure(quotient(a, k) > quotient(b, k), || {
        format!("a={a} b={b} k={k}")
    })
}

fn mul_div_greater(rng: &mut ChaCha8Rng) -> Sample {
    let (x, k) = (small_or_wide(rng, 64), small_or_wide(rng, 64));
    let y = k + gen::amount(rng, 64) - 1;
    let Some(r) = scaled(x, y, k) else {
        return Ok(false);
    };
    ensure(r >= x, || format!("x={x} y={y} k={k} -> {r}"))
}

fn mul_div_strictly_greater(rng: &mut ChaCha8Rng) -> Sample {
    let (x, k) = (small_or_wide(rng, 64), small_or_wide(rng, 64));
    let y = 2 * k + gen::amount(rng, 64) - 1;
    let Some(r) = scaled(x, y, k) else {
        return Ok(false);
    };
    ensure(r > x, || format!("x={x} y={y} k={k} -> {r}"))
}

fn mul_div_less(rng: &mut ChaCha8Rng) -> Sample {
    let (x, y) = (small_or_wide(rng, 128), small_or_wide(rng, 64));
    let k = y + gen::amount(rng, 64) - 1;
    let Some(r) = scaled(x, y, k) else {
        return Ok(false);
    };
    ensure(r <= x, || format!("x={x} y={y} k={k} -> {r}"))
}

fn mul_div_strictly_less(rng: &mut ChaCha8Rng) -> Sample {
    let (x, y) = (small_or_wide(rng, 128), small_or_wide(rng, 64));
    let k = y + gen::amount(rng, 64);
    let Some(r) = scaled(x, y, k) else {
        return Ok(false);
    };
    ensure(r < x, || format!("x={x} y={y} k={k} -> {r}"))
}

fn div_mul_bounds(rng: &mut ChaCha8Rng) -> Sample {
    let (x, y) = (gen::amount(rng, 128) - 1, small_or_wide(rng, 128));
    let q = quotient(x, y);
    let back = big(q) * big(y);
    ensure(back <= big(x) && big(x) - &back < big(y), || {
        format!("x={x} y={y} q={q}")
    })
}

fn div_lower_bound(rng: &mut ChaCha8Rng) -> Sample {
    let (b, c) = (gen::amount(rng, 63) - 1, small_or_wide(rng, 63));
    let a = b * c + gen::amount(rng, 63);
    ensure(quotient(a, c) >= b, || format!("a={a} b={b} c={c}"))
}

fn assets_ge(rng: &mut ChaCha8Rng) -> Sample {
    let (mut d, mut s, _) = price(rng);
    if s < d {
        std::mem::swap(&mut d, &mut s);
    }
    let w = small_or_wide(rng, 64);
    let c = calculate_assets(w, &PriceFraction::new(d, s).expect("positive")).expect("fits");
    ensure(c >= w, || format!("w={w} d={d} s={s} -> {c}"))
}

fn assets_gt(rng: &mut ChaCha8Rng) -> Sample {
    let d = small_or_wide(rng, 62);
    let s = 2 * d + gen::amount(rng, 62) - 1;
    let w = small_or_wide(rng, 64);
    let c = calculate_assets(w, &PriceFraction::new(d, s).expect("positive")).expect("fits");
    ensure(c > w, || format!("w={w} d={d} s={s} -> {c}"))
}

fn assets_lt(rng: &mut ChaCha8Rng) -> Sample {
    let s = small_or_wide(rng, 63);
    let d = s + gen::amount(rng, 63);
    let w = small_or_wide(rng, 64);
    let c = calculate_assets(w, &PriceFraction::new(d, s).expect("positive")).expect("fits");
    ensure(c < w, || format!("w={w} d={d} s={s} -> {c}"))
}

fn revert_ge(rng: &mut ChaCha8Rng) -> Sample {
    let (mut d, mut s, _) = price(rng);
    if d < s {
        std::mem::swap(&mut d, &mut s);
    }
    let w = small_or_wide(rng, 64);
    let r = calculate_assets_revert(w, &PriceFraction::new(d, s).expect("positive")).expect("fits");
    ensure(r >= w, || format!("w={w} d={d} s={s} -> {r}"))
}

fn revert_monotonic(rng: &mut ChaCha8Rng) -> Sample {
    let (_, _, p) = price(rng);
    let w2 = small_or_wide(rng, 64);
    let w1 = rng.gen_range(0..=w2);
    let (r1, r2) = (
        calculate_assets_revert(w1, &p).expect("fits"),
        calculate_assets_revert(w2, &p).expect("fits"),
    );
    ensure(r1 <= r2, || format!("w1={w1} w2={w2} {p:?}"))
}

fn round_trip_loss_equation(rng: &mut ChaCha8Rng) -> Sample {
    let (_, s, p) = price(rng);
    let w = small_or_wide(rng, 64);
    let rt = round_trip_remainders(w, &p).expect("fits");
    let Some(loss) = w.checked_sub(rt.reverted) else {
        return Err(format!("reverted {} above w={w}", rt.reverted));
    };
    ensure(big(loss) * big(s) == big(rt.rem1) + big(rt.rem2), || {
        format!("w={w} {p:?} {rt:?}")
    })
}

fn round_trip_bounds(rng: &mut ChaCha8Rng) -> Sample {
    let (d, s, p) = price(rng);
    let w = small_or_wide(rng, 64);
    let rt = round_trip_remainders(w, &p).expect("fits");
    if rt.assets == 0 {
        return Ok(false);
    }
    ensure(
        rt.reverted <= w && big(w - rt.reverted) * big(s) < big(d) + big(s),
        || format!("w={w} {p:?} {rt:?}"),
    )
}

fn config_and_time(rng: &mut ChaCha8Rng) -> (Config, Timestamp) {
    let g = gen::config(rng);
    let t = rng.gen_range(g.start_date.saturating_sub(150)..g.end_date + 150);
    (g, t)
}

fn unique_active_discount(rng: &mut ChaCha8Rng) -> Sample {
    let (g, t) = config_and_time(rng);
    let active: Vec<_> = g
        .discounts
        .iter()
        .filter(|d| d.start_date <= t && t < d.end_date)
        .collect();
    ensure(
        active.len() <= 1 && find_active_discount(&g.discounts, t) == active.first().copied(),
        || format!("t={t} discounts={:?}", g.discounts),
    )
}

fn percentage(rng: &mut ChaCha8Rng) -> Amount {
    rng.gen_range(1..=MULTIPLIER)
}

fn weighted_ge(rng: &mut ChaCha8Rng) -> Sample {
    let (a, p) = (small_or_wide(rng, 112), percentage(rng));
    let w = calculate_weighted_amount(a, p).expect("fits");
    ensure(w >= a, || format!("a={a} p={p} -> {w}"))
}

fn original_le(rng: &mut ChaCha8Rng) -> Sample {
    let (wa, p) = (small_or_wide(rng, 128), percentage(rng));
    let o = calculate_original_amount(wa, p).expect("fits");
    ensure(o <= wa, || format!("wa={wa} p={p} -> {o}"))
}

fn weighted_spec_monotonic(rng: &mut ChaCha8Rng) -> Sample {
    let (g, t) = config_and_time(rng);
    let a2 = small_or_wide(rng, 112);
    let a1 = rng.gen_range(1..=a2);
    let (w1, w2) = (
        calculate_weighted_amount_spec(a1, t, &g).expect("fits"),
        calculate_weighted_amount_spec(a2, t, &g).expect("fits"),
    );
    ensure(w1 <= w2, || format!("a1={a1} a2={a2} t={t}"))
}

fn original_spec_monotonic(rng: &mut ChaCha8Rng) -> Sample {
    let (g, t) = config_and_time(rng);
    let a2 = small_or_wide(rng, 128);
    let a1 = rng.gen_range(1..=a2);
    let (o1, o2) = (
        calculate_original_amount_spec(a1, t, &g).expect("fits"),
        calculate_original_amount_spec(a2, t, &g).expect("fits"),
    );
    ensure(o1 <= o2, || format!("a1={a1} a2={a2} t={t}"))
}

fn weight_round_trip(rng: &mut ChaCha8Rng) -> Result<(Amount, Amount), String> {
    let (g, t) = config_and_time(rng);
    let a = small_or_wide(rng, 112);
    let w = calculate_weighted_amount_spec(a, t, &g).expect("fits");
    Ok((a, calculate_original_amount_spec(w, t, &g).expect("fits")))
}

fn weight_round_trip_lte(rng: &mut ChaCha8Rng) -> Sample {
    let (a, back) = weight_round_trip(rng)?;
    ensure(back <= a, || format!("a={a} -> {back}"))
}

fn weight_round_trip_bounds(rng: &mut ChaCha8Rng) -> Sample {
    let (a, back) = weight_round_trip(rng)?;
    ensure(back <= a && a - 1 <= back, || format!("a={a} -> {back}"))
}

/// A fixed-price deposit that crosses the cap about half of the time.
fn fixed_price_deposit(rng: &mut ChaCha8Rng) -> Option<(Amount, launchpad_core::DepositOutcome)> {
    let mut g = gen::config(rng);
    g.mechanic = Mechanic::FixedPrice(price(rng).2);
    let sold = rng.gen_range(0..g.sale_amount);
    let t = rng.gen_range(g.start_date..g.end_date);
    let a = small_or_wide(rng, 96);
    match deposit_spec(&g, a, 0, sold, t) {
        Ok(o) => Some((a, o)),
        Err(Error::Overflow) => None,
        Err(e) => panic!("unexpected rejection {e}"),
    }
}

fn refund_is_safe(rng: &mut ChaCha8Rng) -> Sample {
    let Some((a, o)) = fixed_price_deposit(rng) else {
        return Ok(false);
    };
    ensure(o.refund <= a, || format!("a={a} {o:?}"))
}

fn amount_conservation(rng: &mut ChaCha8Rng) -> Sample {
    let Some((a, o)) = fixed_price_deposit(rng) else {
        return Ok(false);
    };
    ensure(o.new_amount + o.refund == a, || format!("a={a} {o:?}"))
}

fn user_allocation(rng: &mut ChaCha8Rng) -> Sample {
    let mut g = gen::config(rng);
    g.mechanic = Mechanic::PriceDiscovery;
    let sold = small_or_wide(rng, 100);
    let w = rng.gen_range(0..=sold);
    let alloc = user_allocation_spec(w, sold, &g).map_err(|e| e.to_string())?;
    ensure(
        alloc <= g.sale_amount && (g.sale_amount > sold || alloc <= w),
        || format!("w={w} sold={sold} sale={} -> {alloc}", g.sale_amount),
    )
}

fn vesting_context(rng: &mut ChaCha8Rng) -> VestingContext {
    let period = small_or_wide(rng, 40) as Timestamp;
    VestingContext {
        total_assets: small_or_wide(rng, 128),
        vesting_start: rng.gen_range(0..=1 << 40),
        schedule: VestingSchedule::new(rng.gen_range(0..=period), period),
    }
}

fn vesting_time(rng: &mut ChaCha8Rng, ctx: &VestingContext) -> Timestamp {
    let span = ctx.schedule.vesting_period.saturating_mul(2).max(2);
    ctx.vesting_start.saturating_sub(span / 4) + rng.gen_range(0..span)
}

fn vesting_properties(rng: &mut ChaCha8Rng) -> Sample {
    let ctx = vesting_context(rng);
    let t = vesting_time(rng, &ctx);
    let v = calculate_vesting_spec(&ctx, t);
    ensure(v <= ctx.total_assets, || format!("{ctx:?} t={t} -> {v}"))
}

fn vesting_monotonic(rng: &mut ChaCha8Rng) -> Sample {
    let ctx = vesting_context(rng);
    let (t1, t2) = (vesting_time(rng, &ctx), vesting_time(rng, &ctx));
    let (lo, hi) = (t1.min(t2), t1.max(t2));
    ensure(
        calculate_vesting_spec(&ctx, lo) <= calculate_vesting_spec(&ctx, hi),
        || format!("{ctx:?} t1={lo} t2={hi}"),
    )
}

/// The status table written as six independent guards rather than an
/// if-chain, so overlaps or gaps would show up as zero or several matches.
pub fn status_guards(s: &ContractState, t: Timestamp) -> [(SaleStatus, bool); 6] {
    let g = &s.config;
    let live = s.is_sale_token_set && !s.is_locked;
    let ended = t >= g.end_date;
    [
        (SaleStatus::NotInitialized, !s.is_sale_token_set),
        (SaleStatus::Locked, s.is_sale_token_set && s.is_locked),
        (SaleStatus::NotStarted, live && t < g.start_date),
        (
            SaleStatus::Ongoing,
            live && g.start_date <= t && t < g.end_date,
        ),
        (
            SaleStatus::Success,
            live && ended && s.total_deposited >= g.soft_cap,
        ),
        (
            SaleStatus::Failed,
            live && ended && s.total_deposited < g.soft_cap,
        ),
    ]
}

pub fn random_state(rng: &mut ChaCha8Rng) -> ContractState {
    let g = gen::config(rng);
    let mut s = ContractState::new(g).expect("generated configs are valid");
    s.is_sale_token_set = rng.gen_bool(0.9);
    s.is_locked = rng.gen_bool(0.1);
    s.total_deposited = match rng.gen_range(0..3) {
        0 => s.config.soft_cap,
        1 => s.config.soft_cap.saturating_sub(1),
        _ => gen::amount(rng, 72),
    };
    s
}

fn random_time(rng: &mut ChaCha8Rng, g: &Config) -> Timestamp {
    rng.gen_range(g.start_date.saturating_sub(200)..g.end_date + 1_000)
}

fn status_exclusive(rng: &mut ChaCha8Rng) -> Sample {
    let s = random_state(rng);
    let t = random_time(rng, &s.config);
    let matching: Vec<SaleStatus> = status_guards(&s, t)
        .iter()
        .filter(|(_, on)| *on)
        .map(|(st, _)| *st)
        .collect();
    ensure(matching == [s.status(t)], || {
        format!("t={t} guards {matching:?}")
    })
}

fn phase(s: SaleStatus) -> u8 {
    match s {
        SaleStatus::NotStarted => 0,
        SaleStatus::Ongoing => 1,
        _ => 2,
    }
}

fn status_moves_forward(rng: &mut ChaCha8Rng) -> Sample {
    let s = random_state(rng);
    let (t1, t2) = (random_time(rng, &s.config), random_time(rng, &s.config));
    let (lo, hi) = (t1.min(t2), t1.max(t2));
    let (a, b) = (s.status(lo), s.status(hi));
    let ongoing_holds =
        !(a == SaleStatus::Ongoing && hi < s.config.end_date) || b == SaleStatus::Ongoing;
    ensure(phase(a) <= phase(b) && ongoing_holds, || {
        format!("t1={lo} {a} t2={hi} {b}")
    })
}

fn status_terminal(rng: &mut ChaCha8Rng) -> Sample {
    let s = random_state(rng);
    let t1 = random_time(rng, &s.config);
    let t2 = t1 + rng.gen_range(0..=10_000);
    let (a, b) = (s.status(t1), s.status(t2));
    let terminal = matches!(
        a,
        SaleStatus::Success | SaleStatus::Failed | SaleStatus::Locked
    );
    ensure(!terminal || a == b, || format!("t1={t1} {a} t2={t2} {b}"))
}

pub const LEMMAS: &[Lemma] = &[
    Lemma {
        name: "Lemma_Div_Maintains_GTE",
        module: "arith",
        statement: "k > 0 and x >= y imply x/k >= y/k",
        tests: &["launchpad_core::arith::tests::division_is_monotone"],
        check: div_maintains_gte,
    },
    Lemma {
        name: "Lemma_Div_Maintains_GT",
        module: "arith",
        statement: "k > 0 and a >= b + k imply a/k > b/k",
        tests: &["launchpad_core::arith::tests::division_strict_step"],
        check: div_maintains_gt,
    },
    Lemma {
        name: "Lemma_MulDivGreater_From_Scratch",
        module: "arith",
        statement: "x > 0, k > 0, y >= k imply floor(x*y/k) >= x",
        tests: &["launchpad_core::arith::tests::scaling_up_never_loses"],
        check: mul_div_greater,
    },
    Lemma {
        name: "Lemma_MulDivStrictlyGreater_From_Scratch",
        module: "arith",
        statement: "x > 0, k > 0, y >= 2k imply floor(x*y/k) > x",
        tests: &["launchpad_core::arith::tests::scaling_up_never_loses"],
        check: mul_div_strictly_greater,
    },
    Lemma {
        name: "Lemma_MulDivLess_From_Scratch",
        module: "arith",
        statement: "x > 0, y > 0, k >= y imply floor(x*y/k) <= x",
        tests: &["launchpad_core::arith::tests::scaling_down_never_gains"],
        check: mul_div_less,
    },
    Lemma {
        name: "Lemma_MulDivStrictlyLess_From_Scratch",
        module: "arith",
        statement: "x > 0, y > 0, k > y imply floor(x*y/k) < x",
        tests: &["launchpad_core::arith::tests::scaling_down_never_gains"],
        check: mul_div_strictly_less,
    },
    Lemma {
        name: "Lemma_DivMul_Bounds",
        module: "arith",
        statement: "y > 0 implies (x/y)*y <= x and x - (x/y)*y < y",
        tests: &["launchpad_core::arith::tests::euclidean_identity"],
        check: div_mul_bounds,
    },
    Lemma {
        name: "Lemma_DivLowerBound_from_StrictMul",
        module: "arith",
        statement: "c > 0 and a > b*c imply a/c >= b",
        tests: &["launchpad_core::arith::tests::division_lower_bound"],
        check: div_lower_bound,
    },
    Lemma {
        name: "Lemma_CalculateAssets_IsGreaterOrEqual",
        module: "assets",
        statement: "sT >= dT implies assets(w) >= w",
        tests: &["launchpad_core::assets::tests::favourable_price_never_loses"],
        check: assets_ge,
    },
    Lemma {
        name: "Lemma_CalculateAssets_IsGreater",
        module: "assets",
        statement: "sT >= 2*dT implies assets(w) > w",
        tests: &["launchpad_core::assets::tests::favourable_price_never_loses"],
        check: assets_gt,
    },
    Lemma {
        name: "Lemma_CalculateAssets_IsLess",
        module: "assets",
        statement: "sT < dT implies assets(w) < w",
        tests: &["launchpad_core::assets::tests::unfavourable_price_loses"],
        check: assets_lt,
    },
    Lemma {
        name: "Lemma_CalculateAssetsRevert_IsGreaterOrEqual",
        module: "assets",
        statement: "dT >= sT implies revert(w) >= w",
        tests: &["launchpad_core::assets::tests::reverse_examples"],
        check: revert_ge,
    },
    Lemma {
        name: "Lemma_CalculateAssetsRevertSpec_Monotonic",
        module: "assets",
        statement: "w1 <= w2 implies revert(w1) <= revert(w2)",
        tests: &["launchpad_core::assets::tests::revert_is_monotonic"],
        check: revert_monotonic,
    },
    Lemma {
        name: "Lemma_RoundTripLossEquation",
        module: "assets",
        statement: "(w - revert(assets(w))) * sT = rem1 + rem2",
        tests: &["launchpad_core::assets::tests::loss_equation_exhaustive_small_grid"],
        check: round_trip_loss_equation,
    },
    Lemma {
        name: "Lemma_AssetsRevert_RoundTrip_bounds",
        module: "assets",
        statement: "assets(w) > 0 implies revert(assets(w)) <= w and (w - revert(assets(w))) * sT < dT + sT",
        tests: &["launchpad_core::assets::tests::round_trip_bounded"],
        check: round_trip_bounds,
    },
    Lemma {
        name: "Lemma_UniqueActiveDiscount",
        module: "discounts",
        statement: "pairwise disjoint discounts leave at most one active at any time",
        tests: &["launchpad_core::discounts::tests::at_most_one_active"],
        check: unique_active_discount,
    },
    Lemma {
        name: "Lemma_CalculateWeightedAmount_IsGreaterOrEqual",
        module: "discounts",
        statement: "weighted(a, p) >= a",
        tests: &["launchpad_core::discounts::tests::weighting_bounds"],
        check: weighted_ge,
    },
    Lemma {
        name: "Lemma_CalculateOriginalAmount_IsLessOrEqual",
        module: "discounts",
        statement: "original(wa, p) <= wa",
        tests: &["launchpad_core::discounts::tests::weighting_bounds"],
        check: original_le,
    },
    Lemma {
        name: "Lemma_CalculateWeightedAmountSpec_Monotonic",
        module: "config",
        statement: "a1 <= a2 implies weighted_spec(a1, t) <= weighted_spec(a2, t)",
        tests: &["launchpad_core::config::tests::weighting_is_monotonic"],
        check: weighted_spec_monotonic,
    },
    Lemma {
        name: "Lemma_CalculateOriginalAmountSpec_Monotonic",
        module: "config",
        statement: "w1 <= w2 implies original_spec(w1, t) <= original_spec(w2, t)",
        tests: &["launchpad_core::config::tests::weighting_is_monotonic"],
        check: original_spec_monotonic,
    },
    Lemma {
        name: "Lemma_WeightOriginal_RoundTrip_lte",
        module: "config",
        statement: "original_spec(weighted_spec(a, t), t) <= a",
        tests: &["launchpad_core::config::tests::weighting_round_trip_loses_at_most_one"],
        check: weight_round_trip_lte,
    },
    Lemma {
        name: "Lemma_WeightOriginal_RoundTrip_bounds",
        module: "config",
        statement: "a - 1 <= original_spec(weighted_spec(a, t), t) <= a",
        tests: &[
            "launchpad_core::config::tests::weighting_round_trip_loses_at_most_one",
            "launchpad_core::discounts::tests::discount_round_trip_exhaustive",
        ],
        check: weight_round_trip_bounds,
    },
    Lemma {
        name: "Lemma_RefundIsSafe",
        module: "deposit",
        statement: "every fixed-price deposit refunds at most the deposited amount",
        tests: &[
            "launchpad_core::deposit::tests::refund_safety_and_conservation",
            "launchpad_core::deposit::tests::small_exhaustive_sweep",
        ],
        check: refund_is_safe,
    },
    Lemma {
        name: "Lemma_DepositFixedPrice_AmountConservation",
        module: "deposit",
        statement: "kept amount plus refund equals the deposited amount",
        tests: &["launchpad_core::deposit::tests::refund_safety_and_conservation"],
        check: amount_conservation,
    },
    Lemma {
        name: "Lemma_UserAllocationSpec",
        module: "claim",
        statement: "w <= sold implies allocation <= sale_amount; sale_amount <= sold implies allocation <= w",
        tests: &["launchpad_core::claim::tests::allocation_bounds"],
        check: user_allocation,
    },
    Lemma {
        name: "Lemma_CalculateVestingSpec_Properties",
        module: "claim",
        statement: "vested(A, t) <= A",
        tests: &["launchpad_core::claim::tests::vesting_monotone_and_bounded"],
        check: vesting_properties,
    },
    Lemma {
        name: "Lemma_CalculateVestingSpec_Monotonic",
        module: "claim",
        statement: "t1 <= t2 implies vested(A, t1) <= vested(A, t2)",
        tests: &["launchpad_core::claim::tests::vesting_monotone_and_bounded"],
        check: vesting_monotonic,
    },
    Lemma {
        name: "Lemma_StatusIsMutuallyExclusive",
        module: "launchpad",
        statement: "exactly one status guard holds for every state and time",
        tests: &["launchpad_core::launchpad::tests::status_table"],
        check: status_exclusive,
    },
    Lemma {
        name: "Lemma_StatusTimeMovesForward",
        module: "launchpad",
        statement: "status never moves back a phase as time advances; ongoing persists until the end date",
        tests: &["launchpad_core::launchpad::tests::status_table"],
        check: status_moves_forward,
    },
    Lemma {
        name: "Lemma_StatusFinalStatesAreTerminal",
        module: "launchpad",
        statement: "success, failed and locked persist for all later times",
        tests: &["launchpad_core::launchpad::tests::status_table"],
        check: status_terminal,
    },
];

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub lemma: String,
    pub module: String,
    pub statement: String,
    pub tests: Vec<String>,
    #[serde_as(as = "DisplayFromStr")]
    pub samples: u64,
    /// Samples whose inputs overflowed 128 bits and were not evaluated.
    #[serde_as(as = "DisplayFromStr")]
    pub skipped: u64,
    #[serde_as(as = "DisplayFromStr")]
    pub violations: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceMatrix {
    #[serde_as(as = "DisplayFromStr")]
    pub seed: u64,
    pub entries: Vec<TraceEntry>,
}

impl TraceMatrix {
    pub fn passed(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.violations == 0 && e.samples > e.skipped)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("matrix serializes");
        s.push('\n');
        s
    }
}

pub fn run_lemma(lemma: &Lemma, seed: u64, samples: u64) -> TraceEntry {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut skipped, mut violations, mut counterexample) = (0, 0, None);
    for _ in 0..samples {
        match (lemma.check)(&mut rng) {
            Ok(true) => {}
            Ok(false) => skipped += 1,
            Err(detail) => {
                violations += 1;
                counterexample.get_or_insert(detail);
            }
        }
    }
    TraceEntry {
        lemma: lemma.name.to_string(),
        module: lemma.module.to_string(),
        statement: lemma.statement.to_string(),
        tests: lemma.tests.iter().map(|t| t.to_string()).collect(),
        samples,
        skipped,
        violations,
        counterexample,
    }
}

pub fn trace_matrix(seed: u64, samples: u64) -> TraceMatrix {
    let entries = LEMMAS
        .par_iter()
        .enumerate()
        .map(|(i, l)| run_lemma(l, seed.wrapping_add(i as u64), samples))
        .collect();
    TraceMatrix { seed, entries }
}
