//! Scenario files: an initial configuration plus a time-ordered list of actions.

use launchpad_core::{AccountId, Amount, Config, ContractState, IntentAccount, Timestamp};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionKind {
    Deposit {
        account_id: AccountId,
        intent: IntentAccount,
        #[serde_as(as = "DisplayFromStr")]
        amount: Amount,
    },
    Withdraw {
        intent: IntentAccount,
        #[serde_as(as = "DisplayFromStr")]
        amount: Amount,
    },
    Claim {
        intent: IntentAccount,
    },
    ClaimIndividual {
        intent: IntentAccount,
    },
    Distribute,
}

impl ActionKind {
    pub fn name(&self) -> &'static str {
        match self {
            ActionKind::Deposit { .. } => "deposit",
            ActionKind::Withdraw { .. } => "withdraw",
            ActionKind::Claim { .. } => "claim",
            ActionKind::ClaimIndividual { .. } => "claim_individual",
            ActionKind::Distribute => "distribute",
        }
    }

    pub fn amount(&self) -> Option<Amount> {
        match self {
            ActionKind::Deposit { amount, .. } | ActionKind::Withdraw { amount, .. } => {
                Some(*amount)
            }
            _ => None,
        }
    }

    pub fn amount_mut(&mut self) -> Option<&mut Amount> {
        match self {
            ActionKind::Deposit { amount, .. } | ActionKind::Withdraw { amount, .. } => {
                Some(amount)
            }
            _ => None,
        }
    }
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Action {
    #[serde_as(as = "DisplayFromStr")]
    pub time: Timestamp,
    #[serde(flatten)]
    pub kind: ActionKind,
}

/// Contract flags at the start of the scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialFlags {
    pub sale_token_set: bool,
    pub locked: bool,
}

impl Default for InitialFlags {
    fn default() -> Self {
        Self {
            sale_token_set: true,
            locked: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub config: Config,
    #[serde(default)]
    pub initial: InitialFlags,
    pub actions: Vec<Action>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("malformed scenario: {0}")]
    Malformed(String),
    #[error("invalid configuration: {}", .0.join(", "))]
    InvalidConfig(Vec<String>),
    #[error("unsorted actions: action {index} at time {time} precedes time {previous}")]
    Unsorted {
        index: usize,
        time: Timestamp,
        previous: Timestamp,
    },
}

impl Scenario {
    /// Checks the config and the action ordering.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let violations = self.config.violations();
        if !violations.is_empty() {
            return Err(ScenarioError::InvalidConfig(
                violations.iter().map(|c| c.name().to_string()).collect(),
            ));
        }
        for (i, pair) in self.actions.windows(2).enumerate() {
            if pair[1].time < pair[0].time {
                return Err(ScenarioError::Unsorted {
                    index: i + 1,
                    time: pair[1].time,
                    previous: pair[0].time,
                });
            }
        }
        Ok(())
    }

    pub fn initial_state(&self) -> Result<ContractState, ScenarioError> {
        self.validate()?;
        let s = ContractState::uninitialized(self.config.clone()).expect("config validated above");
        Ok(ContractState {
            is_sale_token_set: self.initial.sale_token_set,
            ..s
        }
        .with_lock(self.initial.locked))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

/// Parses and validates a scenario file.
pub fn load_scenario(bytes: &[u8]) -> Result<Scenario, ScenarioError> {
    let sc: Scenario =
        serde_json::from_slice(bytes).map_err(|e| ScenarioError::Malformed(e.to_string()))?;
    sc.validate()?;
    Ok(sc)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONFIG: &str = r#"{
        "start_date": "100", "end_date": "200",
        "mechanic": {"FixedPrice": {"deposit_token_amount": "1", "sale_token_amount": "1"}},
        "sale_amount": "100", "total_sale_amount": "100", "soft_cap": "1",
        "discounts": [], "vesting": null,
        "distribution_proportions": {"solver_account": "solver", "stakeholder_proportions": []}
    }"#;

    fn doc(config: &str, actions: &str) -> String {
        format!(r#"{{"config": {config}, "actions": {actions}}}"#)
    }

    #[test]
    fn minimal_scenario() {
        let sc = load_scenario(doc(CONFIG, "[]").as_bytes()).unwrap();
        assert!(sc.actions.is_empty());
        assert_eq!(sc.initial, InitialFlags::default());
    }

    #[test]
    fn every_action_kind_parses() {
        let actions = r#"[
            {"time": "150", "kind": "deposit", "account_id": "a.near", "intent": "a", "amount": "25"},
            {"time": "150", "kind": "withdraw", "intent": "a", "amount": "25"},
            {"time": "300", "kind": "claim", "intent": "a"},
            {"time": "300", "kind": "claim_individual", "intent": "a"},
            {"time": "301", "kind": "distribute"}
        ]"#;
        let sc = load_scenario(doc(CONFIG, actions).as_bytes()).unwrap();
        let kinds: Vec<_> = sc.actions.iter().map(|a| a.kind.name()).collect();
        assert_eq!(
            kinds,
            [
                "deposit",
                "withdraw",
                "claim",
                "claim_individual",
                "distribute"
            ]
        );
        assert_eq!(sc.actions[0].kind.amount(), Some(25));
        let again: Scenario = serde_json::from_str(&sc.to_json()).unwrap();
        assert_eq!(again, sc);
    }

    #[test]
    fn bad_dates_name_the_clause() {
        let config = CONFIG.replace(r#""end_date": "200""#, r#""end_date": "100""#);
        let err = load_scenario(doc(&config, "[]").as_bytes()).unwrap_err();
        assert_eq!(err, ScenarioError::InvalidConfig(vec!["dates".into()]));
        assert!(err.to_string().contains("dates"));
    }

    #[test]
    fn unsorted_actions_rejected() {
        let actions =
            r#"[{"time": "5", "kind": "distribute"}, {"time": "4", "kind": "distribute"}]"#;
        let err = load_scenario(doc(CONFIG, actions).as_bytes()).unwrap_err();
        assert!(matches!(err, ScenarioError::Unsorted { index: 1, .. }));
        assert!(err.to_string().starts_with("unsorted actions"));
    }

    #[test]
    fn malformed_json() {
        assert!(matches!(
            load_scenario(b"{"),
            Err(ScenarioError::Malformed(_))
        ));
        let actions = r#"[{"time": "5", "kind": "explode"}]"#;
        assert!(matches!(
            load_scenario(doc(CONFIG, actions).as_bytes()),
            Err(ScenarioError::Malformed(_))
        ));
        let numeric = CONFIG.replace(r#""sale_amount": "100""#, r#""sale_amount": 100"#);
        assert!(matches!(
            load_scenario(doc(&numeric, "[]").as_bytes()),
            Err(ScenarioError::Malformed(_))
        ));
    }
}
