use serde::Serialize;
use serde_json::Value;

use symcoerce_core::coercive_nd::Rule;

pub const SCHEMA: &str = "symcoerce-report/1";

#[derive(Debug, Serialize)]
pub struct RuleCitation {
    pub rule: String,
    pub citation: String,
}

impl From<Rule> for RuleCitation {
    fn from(r: Rule) -> Self {
        Self { rule: format!("{r:?}"), citation: r.citation().to_string() }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    /// Canonical text of every input operator.
    pub input: Vec<String>,
    pub summary: String,
    /// One of "verdict" or "inconclusive".
    pub outcome: &'static str,
    pub payload: Value,
    pub rules: Vec<RuleCitation>,
    pub timing_ms: f64,
    pub seeds: Vec<u64>,
}

/// What a command hands back before timing and input echo are attached.
pub struct Outcome {
    pub summary: String,
    /// Extra lines for the human-readable form.
    pub details: Vec<String>,
    pub conclusive: bool,
    pub payload: Value,
    pub rules: Vec<RuleCitation>,
}

impl Outcome {
    pub fn verdict(summary: impl Into<String>, payload: impl Serialize) -> Self {
        Self {
            summary: summary.into(),
            details: Vec::new(),
            conclusive: true,
            payload: serde_json::to_value(payload).expect("payload serializes"),
            rules: Vec::new(),
        }
    }

    pub fn inconclusive(mut self) -> Self {
        self.conclusive = false;
        self
    }

    pub fn detail(mut self, line: impl Into<String>) -> Self {
        self.details.push(line.into());
        self
    }

    pub fn details(mut self, lines: impl IntoIterator<Item = String>) -> Self {
        self.details.extend(lines);
        self
    }

    pub fn rules(mut self, rules: impl IntoIterator<Item = Rule>) -> Self {
        self.rules.extend(rules.into_iter().map(RuleCitation::from));
        self
    }
}
