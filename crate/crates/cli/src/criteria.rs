use serde::Serialize;

/// One acceptance criterion evaluated on one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    /// `C1` .. `C10`.
    pub id: String,
    pub name: String,
    pub passed: bool,
    /// The worst measured value of the quantity the threshold bounds.
    pub measured: f64,
    pub threshold: f64,
    /// `at_most` or `at_least`.
    pub bound: &'static str,
    pub detail: String,
}

impl CriterionResult {
    /// Pass when `measured <= threshold`.
    pub fn at_most(id: &str, name: &str, measured: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            passed: measured <= threshold,
            measured,
            threshold,
            bound: "at_most",
            detail: detail.into(),
        }
    }

    /// Pass when `measured >= threshold`.
    pub fn at_least(id: &str, name: &str, measured: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            passed: measured >= threshold,
            measured,
            threshold,
            bound: "at_least",
            detail: detail.into(),
        }
    }

    /// How close the part is to failing: above 1 means failed.
    pub fn tightness(&self) -> f64 {
        let (a, b) = if self.bound == "at_least" { (self.threshold, self.measured) } else { (self.measured, self.threshold) };
        if b > 0.0 {
            a / b
        } else if a > 0.0 || a.is_nan() {
            f64::INFINITY
        } else {
            0.0
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {} {}: measured {:.3e}, threshold {:.3e} ({})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured,
            self.threshold,
            self.detail
        )
    }
}

/// Merge per-dimension or per-`h` pieces of one criterion: the merged
/// result passes only when all parts do and reports the tightest part.
pub fn combine(id: &str, name: &str, parts: Vec<CriterionResult>) -> CriterionResult {
    let passed = !parts.is_empty() && parts.iter().all(|p| p.passed);
    let worst = parts
        .iter()
        .find(|p| !p.passed)
        .or_else(|| parts.iter().max_by(|a, b| a.tightness().total_cmp(&b.tightness())));
    let detail = parts.iter().map(|p| format!("{}: {:.3e}", p.name, p.measured)).collect::<Vec<_>>().join("; ");
    CriterionResult {
        id: id.into(),
        name: name.into(),
        passed,
        measured: worst.map_or(0.0, |p| p.measured),
        threshold: worst.map_or(0.0, |p| p.threshold),
        bound: worst.map_or("at_most", |p| p.bound),
        detail,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_reports_tightest_part() {
        let c = combine(
            "C0",
            "demo",
            vec![
                CriterionResult::at_most("C0", "a", 0.0, 1e-12, ""),
                CriterionResult::at_most("C0", "b", 5e-5, 1e-4, ""),
                CriterionResult::at_least("C0", "c", 10.0, 1.0, ""),
            ],
        );
        assert!(c.passed);
        assert_eq!((c.measured, c.threshold), (5e-5, 1e-4));
        let f = combine("C0", "demo", vec![CriterionResult::at_least("C0", "c", 0.5, 1.0, "")]);
        assert!(!f.passed && f.line().starts_with("FAIL C0"));
        assert!(!combine("C0", "empty", Vec::new()).passed);
    }
}
