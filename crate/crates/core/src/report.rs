//! Pass/fail reports shared by every verifier.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::tensormod::TensorElement;

/// One checked identity: `residual` is the first nonzero difference found.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clause {
    pub clause: String,
    pub pass: bool,
    pub residual: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Clause {
    pub fn pass(name: impl Into<String>) -> Self {
        Clause {
            clause: name.into(),
            pass: true,
            residual: None,
            note: None,
        }
    }

    pub fn fail(name: impl Into<String>, residual: Option<&TensorElement>, note: impl Into<String>) -> Self {
        Clause {
            clause: name.into(),
            pass: false,
            residual: residual.map(|r| serde_json::to_value(r.to_json()).expect("tensor json")),
            note: Some(note.into()),
        }
    }

    /// Runs `check` over every labelled input; the clause passes iff every
    /// residual is zero. Errors become failures with the error text as note.
    pub fn over<T, I, F>(name: &str, inputs: I, mut check: F) -> Self
    where
        I: IntoIterator<Item = (String, T)>,
        F: FnMut(T) -> Result<TensorElement>,
    {
        for (label, x) in inputs {
            match check(x) {
                Ok(r) if r.is_zero() => {}
                Ok(r) => return Clause::fail(name, Some(&r), format!("nonzero residual at {label}")),
                Err(e) => return Clause::fail(name, None, format!("{label}: {e}")),
            }
        }
        Clause::pass(name)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", if self.pass { "PASS" } else { "FAIL" }, self.clause)?;
        if let Some(note) = &self.note {
            write!(f, " ({note})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub clauses: Vec<Clause>,
}

impl Report {
    pub fn new(suite: impl Into<String>, clauses: Vec<Clause>) -> Self {
        Report {
            suite: suite.into(),
            clauses,
        }
    }

    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.clause == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.pass)
    }

    pub fn extend(&mut self, other: Report) {
        self.clauses.extend(other.clauses);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.suite, if self.passed() { "PASS" } else { "FAIL" })?;
        for c in &self.clauses {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}
