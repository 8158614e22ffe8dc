use std::fs;
use std::path::{Path, PathBuf};

use launchpad_core::SaleStatus;
use launchpad_harness::{load_scenario, replay, ReplayReport};

fn scenarios() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut out: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| {
            p.extension().is_some_and(|e| e == "json")
                && !p.to_string_lossy().ends_with(".report.json")
        })
        .collect();
    out.sort();
    out
}

fn run(name: &str) -> ReplayReport {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(format!("{name}.json"));
    replay(&load_scenario(&fs::read(path).unwrap()).unwrap()).unwrap()
}

#[test]
fn reports_match_golden_files() {
    let all = scenarios();
    assert!(all.len() >= 5);
    for path in all {
        let sc = load_scenario(&fs::read(&path).unwrap()).unwrap();
        let report = replay(&sc).unwrap().to_json();
        let golden = fs::read_to_string(path.with_extension("report.json")).unwrap();
        assert_eq!(
            report,
            golden,
            "{} drifted from its golden report",
            path.display()
        );
        assert_eq!(replay(&sc).unwrap().to_json(), report);
    }
}

#[test]
fn over_cap_refund() {
    let r = run("fixed_price_over_cap");
    assert!(r.passed());
    let o = r.outcomes[1].deposit.unwrap();
    assert_eq!((o.refund, o.new_amount), (15, 10));
    assert!(!r.outcomes[2].applied);
    assert_eq!(r.final_state.total_sold_tokens, 100);
}

#[test]
fn withdraw_during_fixed_price_sale_is_rejected() {
    let r = run("withdraw_rejected_ongoing");
    assert!(r.outcomes[0].applied);
    assert!(!r.outcomes[1].applied);
    assert_eq!(r.outcomes[1].status, SaleStatus::Ongoing);
    let sc = load_scenario(
        &fs::read(
            Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/withdraw_rejected_ongoing.json"),
        )
        .unwrap(),
    )
    .unwrap();
    let mut first = sc.clone();
    first.actions.truncate(1);
    assert_eq!(replay(&first).unwrap().final_state, r.final_state);
}

#[test]
fn empty_scenario() {
    let r = run("empty");
    assert!(r.outcomes.is_empty() && r.passed());
    assert_eq!(r.final_state.total_deposited, 0);
}

#[test]
fn price_discovery_lifecycle() {
    let r = run("price_discovery_lifecycle");
    assert!(r.passed());
    let s = &r.final_state;
    let alice = &s.investments[&"alice".try_into().unwrap()];
    assert_eq!(
        (alice.amount, alice.weight, alice.claimed),
        (600, 630, 2372)
    );
    assert_eq!(s.total_sold_tokens, 2655);
    assert_eq!(s.participants_count, 3);
    assert_eq!(s.distributed_accounts.len(), 3);
}
