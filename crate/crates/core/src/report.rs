use serde::Serialize;
use std::fmt;

/// One failed rule together with the vertices, pair or point that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub rule: &'static str,
    pub witness: String,
}

/// Outcome of a report-style validator. Empty `failures` means the check passed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fail(&mut self, rule: &'static str, witness: impl Into<String>) {
        self.failures.push(Failure {
            rule,
            witness: witness.into(),
        });
    }

    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn has(&self, rule: &str) -> bool {
        self.failures.iter().any(|f| f.rule == rule)
    }

    pub fn merge(&mut self, other: Report) {
        self.failures.extend(other.failures);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            return write!(f, "ok");
        }
        for (i, x) in self.failures.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {}", x.rule, x.witness)?;
        }
        Ok(())
    }
}
