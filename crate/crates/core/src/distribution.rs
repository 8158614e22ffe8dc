//! Stakeholder payout queue.

use std::collections::HashSet;

use crate::account::IntentAccount;
use crate::config::{Config, StakeholderProportion};

/// Stakeholders in `props` order whose account is not in `distributed`.
///
/// Entries of `distributed` that are not stakeholders (the solver, for one)
/// are ignored.
pub fn filter_distributed_stakeholders(
    props: &[StakeholderProportion],
    distributed: &[IntentAccount],
) -> Vec<IntentAccount> {
    let paid: HashSet<&IntentAccount> = distributed.iter().collect();
    props
        .iter()
        .map(|p| &p.account)
        .filter(|a| !paid.contains(a))
        .cloned()
        .collect()
}

/// Next payout batch: the solver first if it has not been paid, then every
/// unpaid stakeholder.
pub fn get_filtered_distributions_spec(
    g: &Config,
    distributed: &[IntentAccount],
) -> Vec<IntentAccount> {
    let props = &g.distribution_proportions;
    let rest = filter_distributed_stakeholders(&props.stakeholder_proportions, distributed);
    if distributed.contains(&props.solver_account) {
        rest
    } else {
        let mut queue = Vec::with_capacity(rest.len() + 1);
        queue.push(props.solver_account.clone());
        queue.extend(rest);
        queue
    }
}
