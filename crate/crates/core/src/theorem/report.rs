use std::fmt;

/// Outcome of one check or of a whole verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    /// The hypothesis could not be established, so nothing was tested.
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Exact values backing the status, as text.
    pub witness: String,
}

/// Named checks and extra facts about one subject.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<Check>,
    pub facts: Vec<(String, String)>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        VerificationReport {
            subject: subject.into(),
            checks: Vec::new(),
            facts: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, status: Status, witness: impl Into<String>) -> Status {
        self.checks.push(Check {
            name: name.into(),
            status,
            witness: witness.into(),
        });
        status
    }

    pub fn fact(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.facts.push((key.into(), value.into()));
    }

    /// Fail if any check failed, otherwise inconclusive if any check was, otherwise pass.
    pub fn overall(&self) -> Status {
        if self.checks.is_empty() {
            return Status::Inconclusive;
        }
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if self.checks.iter().any(|c| c.status == Status::Inconclusive) {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.overall() == Status::Pass
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn fact_value(&self, key: &str) -> Option<&str> {
        self.facts.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// `key=value` lines: subject, one per check, facts, overall.
    pub fn to_key_values(&self) -> String {
        let mut out = format!("subject={}\n", self.subject);
        for c in &self.checks {
            out.push_str(&format!("check.{}={}\n", key_of(&c.name), c.status));
        }
        for (k, v) in &self.facts {
            out.push_str(&format!("{}={}\n", key_of(k), v));
        }
        out.push_str(&format!("overall={}\n", self.overall()));
        out
    }
}

fn key_of(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
        .collect()
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for c in &self.checks {
            writeln!(f, "  [{}] {}: {}", c.status.as_str().to_uppercase(), c.name, c.witness)?;
        }
        for (k, v) in &self.facts {
            writeln!(f, "  {k}: {v}")?;
        }
        writeln!(f, "overall: {}", self.overall().as_str().to_uppercase())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_combines_checks() {
        let mut r = VerificationReport::new("x");
        assert_eq!(r.overall(), Status::Inconclusive);
        r.check("a", Status::Pass, "");
        assert_eq!(r.overall(), Status::Pass);
        r.check("b", Status::Inconclusive, "");
        assert_eq!(r.overall(), Status::Inconclusive);
        r.check("c", Status::Fail, "");
        assert_eq!(r.overall(), Status::Fail);
    }

    #[test]
    fn formats() {
        let mut r = VerificationReport::new("demo");
        r.check("large orbit", Status::Pass, "period 2");
        r.fact("periods", "{1, 2}");
        assert_eq!(r.to_string(), "demo\n  [PASS] large orbit: period 2\n  periods: {1, 2}\noverall: PASS\n");
        assert_eq!(
            r.to_key_values(),
            "subject=demo\ncheck.large_orbit=pass\nperiods={1, 2}\noverall=pass\n"
        );
    }
}
