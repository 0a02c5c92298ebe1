//! Pass/fail verdicts shared by the checks in every module.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotVerified,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotVerified => "not-verified",
        })
    }
}

/// A named verdict. Failures always carry at least one diagnostic line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub diagnostics: Vec<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            verdict: Verdict::Pass,
            diagnostics: Vec::new(),
        }
    }

    pub fn fail(name: impl Into<String>, why: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            verdict: Verdict::Fail,
            diagnostics: vec![why.into()],
        }
    }

    pub fn not_verified(name: impl Into<String>, why: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            verdict: Verdict::NotVerified,
            diagnostics: vec![why.into()],
        }
    }

    /// Pass when `ok`, otherwise fail with the lazily built diagnostic.
    pub fn from_bool(name: impl Into<String>, ok: bool, why: impl FnOnce() -> String) -> Self {
        if ok {
            Check::pass(name)
        } else {
            Check::fail(name, why())
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.diagnostics.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// True when every check passed.
pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(Check::passed)
}
