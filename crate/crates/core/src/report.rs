//! Named pass/fail check lists shared by the verifiers and the CLI.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report { checks: Vec::new() }
    }

    pub fn record(&mut self, name: &str, pass: bool, witness: Option<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            status: if pass { "pass" } else { "fail" }.to_string(),
            witness: if pass { None } else { witness },
            scalar: None,
        });
    }

    pub fn record_scalar(&mut self, name: &str, pass: bool, scalar: Option<String>, witness: Option<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            status: if pass { "pass" } else { "fail" }.to_string(),
            witness: if pass { None } else { witness },
            scalar,
        });
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    /// Short human-readable summary of failing checks.
    pub fn failure_summary(&self) -> String {
        self.failures()
            .iter()
            .map(|c| {
                if let Some(w) = &c.witness {
                    format!("{} ({})", c.name, w)
                } else {
                    c.name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}
