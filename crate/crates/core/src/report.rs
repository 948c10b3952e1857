//! Verification reports shared by every checker.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::time::Instant;

use serde::{Deserialize, Serialize};

/// Number of violations kept verbatim in a report; the total is always in
/// `violation_count`.
pub const MAX_STORED_VIOLATIONS: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub location: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub checked: u64,
    pub violations: Vec<Violation>,
    pub violation_count: u64,
    pub elapsed_ms: u64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Folds several reports into one. Violations keep their order, prefixed
    /// with the name of the report they came from; metrics are namespaced the
    /// same way.
    pub fn combine(name: impl Into<String>, parts: &[VerificationReport]) -> VerificationReport {
        let mut violations = Vec::new();
        let mut metrics = BTreeMap::new();
        let mut notes = Vec::new();
        for p in parts {
            violations.extend(p.violations.iter().map(|v| Violation {
                location: format!("{}: {}", p.name, v.location),
                ..v.clone()
            }));
            for (k, v) in &p.metrics {
                metrics.insert(format!("{}.{k}", p.name), *v);
            }
            metrics.insert(format!("{}.violations", p.name), p.violation_count as f64);
            if let Some(n) = &p.note {
                if !notes.contains(n) {
                    notes.push(n.clone());
                }
            }
        }
        violations.truncate(MAX_STORED_VIOLATIONS);
        let violation_count = parts.iter().map(|p| p.violation_count).sum();
        VerificationReport {
            name: name.into(),
            checked: parts.iter().map(|p| p.checked).sum(),
            violations,
            violation_count,
            elapsed_ms: parts.iter().map(|p| p.elapsed_ms).sum(),
            pass: violation_count == 0,
            note: (!notes.is_empty()).then(|| notes.join("; ")),
            metrics,
        }
    }
}

/// Accumulates checks and violations. Violations carry a sort key so that
/// partial results from parallel workers merge lowest-index-first.
#[derive(Debug)]
pub struct ReportBuilder {
    name: String,
    started: Instant,
    checked: u64,
    violation_count: u64,
    violations: Vec<(u64, Violation)>,
    note: Option<String>,
    metrics: BTreeMap<String, f64>,
}

impl ReportBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        ReportBuilder {
            name: name.into(),
            started: Instant::now(),
            checked: 0,
            violation_count: 0,
            violations: Vec::new(),
            note: None,
            metrics: BTreeMap::new(),
        }
    }

    pub fn checked(&mut self, n: u64) {
        self.checked += n;
    }

    pub fn violation(&mut self, index: u64, location: impl Display, expected: impl Display, actual: impl Display) {
        self.violation_count += 1;
        self.violations.push((
            index,
            Violation { location: location.to_string(), expected: expected.to_string(), actual: actual.to_string() },
        ));
        if self.violations.len() > 2 * MAX_STORED_VIOLATIONS {
            self.trim();
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.note = Some(note.into());
    }

    pub fn metric(&mut self, key: impl Into<String>, value: f64) {
        self.metrics.insert(key.into(), value);
    }

    fn trim(&mut self) {
        self.violations.sort_by_key(|(i, _)| *i);
        self.violations.truncate(MAX_STORED_VIOLATIONS);
    }

    /// Folds another partial result into this one.
    pub fn merge(&mut self, other: ReportBuilder) {
        self.checked += other.checked;
        self.violation_count += other.violation_count;
        self.violations.extend(other.violations);
        self.metrics.extend(other.metrics);
        self.trim();
    }

    pub fn violation_count(&self) -> u64 {
        self.violation_count
    }

    pub fn finish(mut self) -> VerificationReport {
        self.trim();
        VerificationReport {
            name: self.name,
            checked: self.checked,
            pass: self.violation_count == 0,
            violation_count: self.violation_count,
            violations: self.violations.into_iter().map(|(_, v)| v).collect(),
            elapsed_ms: self.started.elapsed().as_millis() as u64,
            note: self.note,
            metrics: self.metrics,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn merge_keeps_lowest_indices() {
        let mut a = ReportBuilder::new("x");
        let mut b = ReportBuilder::new("x");
        for i in (0..200).rev() {
            if i % 2 == 0 { a.violation(i, i, "e", "a") } else { b.violation(i, i, "e", "a") }
        }
        a.merge(b);
        let r = a.finish();
        assert!(!r.pass);
        assert_eq!(r.violation_count, 200);
        assert_eq!(r.violations.len(), MAX_STORED_VIOLATIONS);
        assert_eq!(r.violations[0].location, "0");
        assert_eq!(r.violations[63].location, "63");
    }

    #[test]
    fn empty_report_passes() {
        let mut b = ReportBuilder::new("empty");
        b.checked(10);
        let r = b.finish();
        assert!(r.pass);
        assert_eq!(r.checked, 10);
    }

    #[test]
    fn combine_sums_and_namespaces() {
        let mut a = ReportBuilder::new("a");
        a.checked(3);
        a.metric("x", 1.0);
        let mut b = ReportBuilder::new("b");
        b.checked(4);
        b.violation(0, "here", 1, 2);
        let c = VerificationReport::combine("both", &[a.finish(), b.finish()]);
        assert_eq!(c.checked, 7);
        assert!(!c.pass);
        assert_eq!(c.violations[0].location, "b: here");
        assert_eq!(c.metrics["a.x"], 1.0);
        assert_eq!(c.metrics["b.violations"], 1.0);
    }

    proptest! {
        #[test]
        fn json_round_trip(
            name in "[a-z-]{1,12}",
            checked in any::<u64>(),
            locs in proptest::collection::vec("[ -~]{0,10}", 0..5),
            metric in proptest::num::f64::NORMAL,
            note in proptest::option::of("[ -~]{0,20}"),
        ) {
            let mut b = ReportBuilder::new(name);
            b.checked(checked);
            for (i, l) in locs.iter().enumerate() {
                b.violation(i as u64, l, "exp", "act");
            }
            b.metric("m", metric);
            if let Some(n) = note { b.note(n); }
            let r = b.finish();
            let back = VerificationReport::from_json(&r.to_json()).unwrap();
            prop_assert_eq!(back, r);
        }
    }
}
