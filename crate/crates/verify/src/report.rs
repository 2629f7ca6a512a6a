//! Check records and their human and JSON renderings.

use serde::{Deserialize, Serialize};

/// Residual evaluations at random rational points, reported beside the exact
/// verdict and never folded into it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub points: usize,
    pub nonzero: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub eq: String,
    pub pass: bool,
    pub residual_terms: usize,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spot: Option<SpotCheck>,
    pub time_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub scenario_hash: String,
    pub checks: Vec<CheckRecord>,
    pub all_pass: bool,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(scenario_hash: String, checks: Vec<CheckRecord>, warnings: Vec<String>) -> Self {
        let all_pass = checks.iter().all(|c| c.pass);
        Report { scenario_hash, checks, all_pass, warnings }
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass {
            0
        } else {
            1
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Copy with every timing field zeroed.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.time_ms = 0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Report> {
        serde_json::from_str(s)
    }

    pub fn to_human(&self) -> String {
        let name_w = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
        let eq_w = self.checks.iter().map(|c| c.eq.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for w in &self.warnings {
            out += &format!("WARN {w}\n");
        }
        for c in &self.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            let name_pad = " ".repeat(name_w - c.name.chars().count());
            let eq_pad = " ".repeat(eq_w - c.eq.chars().count());
            out += &format!(
                "CHECK {}{name_pad} [{}]{eq_pad} {verdict} residual_terms={} time={}\n",
                c.name, c.eq, c.residual_terms, c.time_ms
            );
            if let Some(e) = &c.error {
                out += &format!("    error: {e}\n");
            }
            for n in &c.notes {
                out += &format!("    note: {n}\n");
            }
            if let Some(s) = &c.spot {
                out += &format!("    spot: {}/{} random points nonzero\n", s.nonzero, s.points);
            }
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        out += &format!("SUMMARY {passed}/{} checks passed scenario={}\n", self.checks.len(), self.scenario_hash);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(name: &str, pass: bool) -> CheckRecord {
        CheckRecord {
            name: name.into(),
            eq: "dP = 0".into(),
            pass,
            residual_terms: if pass { 0 } else { 3 },
            notes: vec!["note".into()],
            error: None,
            spot: Some(SpotCheck { points: 2, nonzero: 0 }),
            time_ms: 5,
        }
    }

    #[test]
    fn json_round_trips() {
        let r = Report::new("abc".into(), vec![record("a", true), record("bb", false)], vec!["w".into()]);
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(!back.all_pass);
        assert_eq!(back.exit_code(), 1);
    }

    #[test]
    fn human_lines_are_aligned() {
        let r = Report::new("abc".into(), vec![record("a", true), record("bbb", true)], Vec::new());
        let text = r.to_human();
        let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("CHECK")).collect();
        assert_eq!(lines[0], "CHECK a   [dP = 0] PASS residual_terms=0 time=5");
        assert_eq!(lines[1], "CHECK bbb [dP = 0] PASS residual_terms=0 time=5");
        assert_eq!(r.exit_code(), 0);
    }
}
