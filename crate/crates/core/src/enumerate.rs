//! The enumeration harness: every tuple in a box of (d, g, Type, w) over a
//! catalog of real parts, with its constraint verdict and planner outcome.

use std::fmt::Write as _;

use crate::constructor::{plan_construction_with, verify_plan, ConstructionPlan, PlanFailure};
use crate::diagram::{catalog, ProjectiveDiagram};
use crate::invariants::{
    check_constraints_with, CheckOptions, ConstraintReport, FlexibleLinkClass, LinkType,
};

#[derive(Clone, Debug)]
pub struct EnumerationBounds {
    pub d_min: i64,
    pub d_max: i64,
    pub g_max: i64,
    pub w_min: i64,
    pub w_max: i64,
    pub catalog: Vec<(String, ProjectiveDiagram)>,
}

impl EnumerationBounds {
    /// Bounds over the built-in catalog.
    pub fn new(d: (i64, i64), g_max: i64, w: (i64, i64)) -> Self {
        let catalog = catalog().into_iter().map(|(n, d)| (n.to_string(), d)).collect();
        EnumerationBounds { d_min: d.0, d_max: d.1, g_max, w_min: w.0, w_max: w.1, catalog }
    }

    pub fn with_catalog(mut self, catalog: Vec<(String, ProjectiveDiagram)>) -> Self {
        self.catalog = catalog;
        self
    }
}

#[derive(Clone, Debug)]
pub struct EnumerationEntry {
    pub real_part_name: String,
    pub class: FlexibleLinkClass,
    pub report: ConstraintReport,
    pub plan: Result<ConstructionPlan, PlanFailure>,
}

impl EnumerationEntry {
    /// Verdict and planner agree, and a successful plan verifies.
    pub fn consistent(&self) -> bool {
        match &self.plan {
            Ok(p) => self.report.is_valid() && verify_plan(p, &self.class).ok,
            Err(f) => !self.report.is_valid() && f.violations == self.report.violations,
        }
    }

    pub fn line(&self) -> String {
        let c = &self.class;
        let mut s = format!(
            "d={} g={} type={} w={} real={} n={} ",
            c.degree,
            c.genus,
            c.link_type,
            c.writhe,
            self.real_part_name,
            c.components()
        );
        if self.report.is_valid() {
            s.push_str("valid");
        } else {
            let names: Vec<&str> = self.report.violations.iter().map(|v| v.predicate.name()).collect();
            let _ = write!(s, "invalid[{}]", names.join(","));
        }
        match &self.plan {
            Ok(p) => {
                let _ = write!(s, " plan={}", p.steps.len());
            }
            Err(_) => s.push_str(" plan=none"),
        }
        if !self.consistent() {
            s.push_str(" MISMATCH");
        }
        s
    }
}

/// All entries, ordered by real part (catalog order), then d, g, Type, w.
pub fn enumerate_classes(b: &EnumerationBounds, opts: CheckOptions) -> Vec<EnumerationEntry> {
    let mut out = Vec::new();
    for (name, real) in &b.catalog {
        for d in b.d_min..=b.d_max {
            for g in 0..=b.g_max {
                for t in [LinkType::I, LinkType::II] {
                    for w in b.w_min..=b.w_max {
                        let class = FlexibleLinkClass::new(d, g, t, w, real.clone());
                        let report = check_constraints_with(&class, opts);
                        let plan = plan_construction_with(&class, opts);
                        out.push(EnumerationEntry { real_part_name: name.clone(), class, report, plan });
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnumerationSummary {
    pub total: usize,
    pub valid: usize,
    pub planned: usize,
    pub mismatches: usize,
}

pub fn summarize(entries: &[EnumerationEntry]) -> EnumerationSummary {
    EnumerationSummary {
        total: entries.len(),
        valid: entries.iter().filter(|e| e.report.is_valid()).count(),
        planned: entries.iter().filter(|e| e.plan.is_ok()).count(),
        mismatches: entries.iter().filter(|e| !e.consistent()).count(),
    }
}

impl std::fmt::Display for EnumerationSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "total: {}", self.total)?;
        writeln!(f, "valid: {}", self.valid)?;
        writeln!(f, "planned: {}", self.planned)?;
        writeln!(f, "mismatches: {}", self.mismatches)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::catalog_entry;
    use crate::diagram::SearchBudget;
    use crate::invariants::{classify_equal, ClassComparison};

    fn only(name: &str) -> Vec<(String, ProjectiveDiagram)> {
        vec![(name.to_string(), catalog_entry(name).unwrap())]
    }

    #[test]
    fn degree_one_line_slice() {
        let b = EnumerationBounds::new((1, 1), 0, (-1, 1)).with_catalog(only("chord"));
        let entries = enumerate_classes(&b, CheckOptions::default());
        let valid: Vec<_> = entries.iter().filter(|e| e.report.is_valid()).collect();
        assert_eq!(valid.len(), 3);
        assert!(valid.iter().all(|e| e.class.link_type == LinkType::I));
        for (i, a) in valid.iter().enumerate() {
            for b in &valid[i + 1..] {
                let r = classify_equal(&a.class, &b.class, SearchBudget::default()).unwrap();
                assert!(matches!(r, ClassComparison::NotIsotopic { ref witness, .. } if witness == "writhe"));
            }
        }
    }

    #[test]
    fn degree_zero_empty_slice() {
        let b = EnumerationBounds::new((0, 0), 0, (0, 0)).with_catalog(only("empty"));
        let entries = enumerate_classes(&b, CheckOptions::default());
        let valid: Vec<_> = entries.iter().filter(|e| e.report.is_valid()).collect();
        assert_eq!(valid.len(), 1);
        assert_eq!(valid[0].class.link_type, LinkType::II);
    }

    #[test]
    fn valid_count_equals_planned_count() {
        let b = EnumerationBounds::new((-2, 2), 3, (-1, 1));
        let s = summarize(&enumerate_classes(&b, CheckOptions::default()));
        assert_eq!(s.valid, s.planned);
        assert_eq!(s.mismatches, 0);
        assert_eq!(s.total, 5 * 4 * 2 * 3 * 7);
    }

    #[test]
    fn entry_lines() {
        let b = EnumerationBounds::new((0, 0), 0, (0, 0)).with_catalog(only("chord"));
        let lines: Vec<String> =
            enumerate_classes(&b, CheckOptions::default()).iter().map(|e| e.line()).collect();
        assert_eq!(
            lines,
            vec![
            "d=0 g=0 type=I w=0 real=chord n=1 invalid[degree-mod-2] plan=none",
            "d=0 g=0 type=II w=0 real=chord n=1 invalid[maximal-type-i,degree-mod-2,genus-bound] plan=none",
        ]
        );
    }
}
