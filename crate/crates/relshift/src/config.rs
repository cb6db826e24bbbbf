//! Budget overrides from the `RELSHIFT_BUDGET` environment variable.
//!
//! The value is either a bare integer, which sets the clone budget, or a
//! comma-separated list of `key=value` with keys `clone`, `relations`,
//! `triples` and `carrier`. Unlisted keys keep their defaults.

use relshift_core::Budget;

pub const BUDGET_VAR: &str = "RELSHIFT_BUDGET";

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
#[error("{BUDGET_VAR}: {0}")]
pub struct BudgetError(String);

pub fn parse_budget(spec: &str) -> Result<Budget, BudgetError> {
    let mut budget = Budget::default();
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(budget);
    }
    if let Ok(n) = spec.parse::<usize>() {
        budget.clone_size = n;
        return Ok(budget);
    }
    for item in spec.split(',') {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| BudgetError(format!("expected key=value, found `{item}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = || BudgetError(format!("`{value}` is not a non-negative integer for `{key}`"));
        match key {
            "clone" => budget.clone_size = value.parse().map_err(|_| bad())?,
            "relations" => budget.max_relations = value.parse().map_err(|_| bad())?,
            "triples" => budget.max_triples = value.parse().map_err(|_| bad())?,
            "carrier" => budget.max_carrier = value.parse().map_err(|_| bad())?,
            _ => return Err(BudgetError(format!("unknown key `{key}`"))),
        }
    }
    Ok(budget)
}

/// Defaults, overridden by the environment when set.
pub fn budget_from_env() -> Result<Budget, BudgetError> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => parse_budget(&v),
        Err(std::env::VarError::NotPresent) => Ok(Budget::default()),
        Err(std::env::VarError::NotUnicode(_)) => Err(BudgetError("not valid UTF-8".into())),
    }
}
