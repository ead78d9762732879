//! Report plumbing shared by the CLI commands: every claim carries its
//! verdict grade and certificate, never a bare boolean.

use serde::{Deserialize, Serialize};

/// How strongly a claim is established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grade {
    /// Decided exactly, no truncation involved.
    Exact,
    /// Checked up to the stated homological bound.
    Bounded,
    /// Bounded evidence upgraded by a closed-form criterion.
    CriterionCertified,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub grade: Grade,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub engine_version: String,
    pub field: String,
    pub parameters: serde_json::Value,
    pub bound: usize,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(field: String, parameters: serde_json::Value, bound: usize) -> Self {
        Report {
            engine_version: crate::ENGINE_VERSION.to_string(),
            field,
            parameters,
            bound,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, name: &str, passed: bool, grade: Grade, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            grade,
            detail,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "engine {} | field {} | bound H={}\n",
            self.engine_version, self.field, self.bound
        ));
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let grade = match c.grade {
                Grade::Exact => "exact",
                Grade::Bounded => "bounded",
                Grade::CriterionCertified => "criterion-certified",
            };
            out.push_str(&format!("[{status}] {} ({grade}): {}\n", c.name, c.detail));
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.checks.len(),
            failed
        ));
        out
    }
}
