//! Random valid configurations and action sequences.

use launchpad_core::{
    AccountId, Amount, Config, Discount, DistributionProportions, IntentAccount, Mechanic,
    PriceFraction, StakeholderProportion, Timestamp, VestingSchedule, MULTIPLIER,
};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::scenario::{Action, ActionKind, InitialFlags, Scenario};

const USERS: [&str; 5] = ["alice", "bob", "carol", "dave", "erin"];
const STAKEHOLDERS: [&str; 4] = ["team", "advisors", "treasury", "market"];

fn intent(s: &str) -> IntentAccount {
    IntentAccount::new(s).expect("generator names are valid")
}

/// A magnitude drawn log-uniformly so small and huge values both appear.
pub fn amount<R: Rng>(rng: &mut R, max_bits: u32) -> Amount {
    let bits = rng.gen_range(1..=max_bits);
    let hi = if bits == 128 {
        Amount::MAX
    } else {
        (1u128 << bits) - 1
    };
    rng.gen_range(1..=hi)
}

fn price<R: Rng>(rng: &mut R) -> PriceFraction {
    let (d, s) = if rng.gen_bool(0.5) {
        (rng.gen_range(1..=10), rng.gen_range(1..=10))
    } else {
        (amount(rng, 64), amount(rng, 64))
    };
    PriceFraction::new(d, s).expect("positive terms")
}

fn percentage<R: Rng>(rng: &mut R) -> Amount {
    if rng.gen_bool(0.5) {
        *[1, 100, 500, 2_500, MULTIPLIER - 1, MULTIPLIER]
            .choose(rng)
            .expect("nonempty")
    } else {
        rng.gen_range(1..=MULTIPLIER)
    }
}

fn vesting<R: Rng>(rng: &mut R) -> VestingSchedule {
    let period = rng.gen_range(1..=2_000);
    VestingSchedule::new(rng.gen_range(0..=period), period)
}

/// Up to three disjoint windows inside `[start − 100, end + 100)`.
fn discounts<R: Rng>(rng: &mut R, start: Timestamp, end: Timestamp) -> Vec<Discount> {
    let lo = start.saturating_sub(100);
    let mut cuts: Vec<Timestamp> = (0..rng.gen_range(0..=6))
        .map(|_| rng.gen_range(lo..end + 100))
        .collect();
    cuts.sort_unstable();
    cuts.dedup();
    cuts.chunks_exact(2)
        .map(|w| Discount::new(w[0], w[1], percentage(rng)))
        .collect()
}

pub fn config<R: Rng>(rng: &mut R) -> Config {
    let start = rng.gen_range(0..=1_000);
    let end = start + rng.gen_range(1..=1_000);
    let mechanic = if rng.gen_bool(0.6) {
        Mechanic::FixedPrice(price(rng))
    } else {
        Mechanic::PriceDiscovery
    };
    let sale_amount = amount(rng, 72);
    let mut names = STAKEHOLDERS.to_vec();
    names.shuffle(rng);
    let stakeholders: Vec<_> = names[..rng.gen_range(0..=names.len())]
        .iter()
        .map(|n| StakeholderProportion {
            account: intent(n),
            allocation: amount(rng, 64),
            vesting: rng.gen_bool(0.5).then(|| vesting(rng)),
        })
        .collect();
    let total_sale_amount = sale_amount + stakeholders.iter().map(|p| p.allocation).sum::<Amount>();
    let soft_cap = if rng.gen_bool(0.2) {
        0
    } else {
        amount(rng, 70)
    };
    Config {
        start_date: start,
        end_date: end,
        mechanic,
        sale_amount,
        total_sale_amount,
        soft_cap,
        discounts: discounts(rng, start, end),
        vesting: rng.gen_bool(0.5).then(|| vesting(rng)),
        distribution_proportions: DistributionProportions {
            solver_account: intent("solver"),
            stakeholder_proportions: stakeholders,
        },
    }
}

fn deposit_amount<R: Rng>(rng: &mut R, g: &Config) -> Amount {
    // Aim near the principal that would fill the cap so crossings are common.
    let target = match &g.mechanic {
        Mechanic::FixedPrice(p) => launchpad_core::arith::mul_div_floor(
            g.sale_amount,
            p.deposit_token_amount,
            p.sale_token_amount,
        )
        .unwrap_or(Amount::MAX)
        .clamp(1, 1 << 90),
        Mechanic::PriceDiscovery => g.sale_amount.clamp(1, 1 << 90),
    };
    match rng.gen_range(0..4) {
        0 => rng.gen_range(1..=1_000),
        1 => rng.gen_range(1..=target),
        2 => rng.gen_range(target / 2 + 1..=target.saturating_mul(2).min(1 << 91)),
        _ => amount(rng, 90),
    }
}

/// Random actions over `len` steps, sorted by time. Some will be rejected.
pub fn actions<R: Rng>(rng: &mut R, g: &Config, len: usize) -> Vec<Action> {
    let participants: Vec<&str> = USERS.iter().chain(&STAKEHOLDERS[..1]).copied().collect();
    let stakeholders: Vec<IntentAccount> = g
        .distribution_proportions
        .stakeholder_proportions
        .iter()
        .map(|p| p.account.clone())
        .collect();
    let last = g.end_date + 2_500;
    let mut put_in: std::collections::BTreeMap<IntentAccount, Amount> = Default::default();
    let mut out: Vec<Action> = (0..len)
        .map(|_| {
            let time = if rng.gen_bool(0.6) {
                rng.gen_range(g.start_date..g.end_date)
            } else {
                rng.gen_range(g.start_date.saturating_sub(50)..=last)
            };
            let who = intent(participants.choose(rng).expect("nonempty"));
            let kind = match rng.gen_range(0..10) {
                0..=4 => {
                    let amount = deposit_amount(rng, g);
                    *put_in.entry(who.clone()).or_default() += amount;
                    let via = if rng.gen_bool(0.9) {
                        who.as_str()
                    } else {
                        "shared"
                    };
                    ActionKind::Deposit {
                        account_id: AccountId::new(format!("{via}.near")).expect("valid id"),
                        intent: who,
                        amount,
                    }
                }
                5 | 6 => {
                    // Often the whole principal so fixed-price withdrawals can succeed.
                    let amount = match put_in.get(&who) {
                        Some(&total) if rng.gen_bool(0.5) => total,
                        Some(&total) if rng.gen_bool(0.5) => rng.gen_range(1..=total),
                        _ => deposit_amount(rng, g),
                    };
                    ActionKind::Withdraw {
                        intent: who,
                        amount,
                    }
                }
                7 => ActionKind::Claim { intent: who },
                8 => ActionKind::ClaimIndividual {
                    intent: stakeholders.choose(rng).cloned().unwrap_or(who),
                },
                _ => ActionKind::Distribute,
            };
            Action { time, kind }
        })
        .collect();
    out.sort_by_key(|a| a.time);
    out
}

pub fn scenario<R: Rng>(rng: &mut R, max_len: usize) -> Scenario {
    let config = config(rng);
    let len = rng.gen_range(0..=max_len);
    let actions = actions(rng, &config, len);
    Scenario {
        config,
        initial: InitialFlags {
            sale_token_set: !rng.gen_bool(0.02),
            locked: rng.gen_bool(0.03),
        },
        actions,
    }
}
