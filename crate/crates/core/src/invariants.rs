//! The invariant tuple of a flexible link, its realizability predicates, and
//! flexible-isotopy comparison.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::diagram::{decide_equivalence, EquivalenceResult, MoveKind, ProjectiveDiagram, SearchBudget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinkType {
    /// The complement of the real part has two conjugate halves.
    I,
    /// The complement of the real part is connected.
    II,
}

impl LinkType {
    /// The integer X of the realizability bound `g >= n + X - 2`.
    pub fn index(self) -> i64 {
        match self {
            LinkType::I => 1,
            LinkType::II => 2,
        }
    }
}

impl fmt::Display for LinkType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinkType::I => "I",
            LinkType::II => "II",
        })
    }
}

impl FromStr for LinkType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" | "1" => Ok(LinkType::I),
            "II" | "2" => Ok(LinkType::II),
            _ => Err(format!("unknown type `{s}` (expected I or II)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlexibleLinkClass {
    pub degree: i64,
    pub genus: i64,
    pub link_type: LinkType,
    pub writhe: i64,
    pub real_part: ProjectiveDiagram,
}

impl FlexibleLinkClass {
    pub fn new(
        degree: i64,
        genus: i64,
        link_type: LinkType,
        writhe: i64,
        real_part: ProjectiveDiagram,
    ) -> Self {
        FlexibleLinkClass { degree, genus, link_type, writhe, real_part }
    }

    pub fn components(&self) -> usize {
        self.real_part.component_count()
    }
}

impl fmt::Display for FlexibleLinkClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(d={}, g={}, {}, w={}, n={})",
            self.degree,
            self.genus,
            self.link_type,
            self.writhe,
            self.components()
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predicate {
    GenusNonNegative,
    ComponentBound,
    MaximalImpliesTypeI,
    EmptyImpliesTypeII,
    TypeIParity,
    DegreeParity,
    GenusBound,
    /// Only checked in strict mode: Type I needs `g >= 1`.
    StrictTypeIGenus,
}

impl Predicate {
    pub const ALL: [Predicate; 8] = [
        Predicate::GenusNonNegative,
        Predicate::ComponentBound,
        Predicate::MaximalImpliesTypeI,
        Predicate::EmptyImpliesTypeII,
        Predicate::TypeIParity,
        Predicate::DegreeParity,
        Predicate::GenusBound,
        Predicate::StrictTypeIGenus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::GenusNonNegative => "genus-nonnegative",
            Predicate::ComponentBound => "component-bound",
            Predicate::MaximalImpliesTypeI => "maximal-type-i",
            Predicate::EmptyImpliesTypeII => "type-ii-forcing",
            Predicate::TypeIParity => "type-i-parity",
            Predicate::DegreeParity => "degree-mod-2",
            Predicate::GenusBound => "genus-bound",
            Predicate::StrictTypeIGenus => "strict-type-i-genus",
        }
    }

    pub fn rule(self) -> &'static str {
        match self {
            Predicate::GenusNonNegative => "g >= 0",
            Predicate::ComponentBound => "at most g + 1 real components",
            Predicate::MaximalImpliesTypeI => "n = g + 1 implies Type I",
            Predicate::EmptyImpliesTypeII => "no real components implies Type II",
            Predicate::TypeIParity => "Type I implies g = n - 1 (mod 2)",
            Predicate::DegreeParity => "homology class of the real part = d (mod 2)",
            Predicate::GenusBound => "g >= n + X - 2",
            Predicate::StrictTypeIGenus => "Type I implies 1 <= g",
        }
    }

    pub fn from_name(name: &str) -> Option<Predicate> {
        Predicate::ALL.into_iter().find(|p| p.name() == name)
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub predicate: Predicate,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}): {}", self.predicate, self.predicate.rule(), self.detail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintReport {
    pub verdict: Verdict,
    pub violations: Vec<Violation>,
}

impl ConstraintReport {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }

    pub fn predicates(&self) -> Vec<Predicate> {
        self.violations.iter().map(|v| v.predicate).collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckOptions {
    /// Also require `g >= 1` for Type I.
    pub strict_paper: bool,
}

pub fn check_constraints(c: &FlexibleLinkClass) -> ConstraintReport {
    check_constraints_with(c, CheckOptions::default())
}

pub fn check_constraints_with(c: &FlexibleLinkClass, opts: CheckOptions) -> ConstraintReport {
    let n = c.components() as i64;
    let g = c.genus;
    let type_i = c.link_type == LinkType::I;
    let mut violations = Vec::new();
    let mut fail = |predicate, detail: String| violations.push(Violation { predicate, detail });

    if g < 0 {
        fail(Predicate::GenusNonNegative, format!("g = {g}"));
    }
    if n > g + 1 {
        fail(Predicate::ComponentBound, format!("n = {n} > g + 1 = {}", g + 1));
    }
    if n == g + 1 && !type_i {
        fail(Predicate::MaximalImpliesTypeI, format!("n = g + 1 = {n} but Type {}", c.link_type));
    }
    if n == 0 && type_i {
        fail(Predicate::EmptyImpliesTypeII, "empty real part but Type I".into());
    }
    if type_i && (g - (n - 1)).rem_euclid(2) != 0 {
        fail(Predicate::TypeIParity, format!("g = {g}, n - 1 = {}", n - 1));
    }
    let h = i64::from(c.real_part.homology_class().1);
    if (c.degree - h).rem_euclid(2) != 0 {
        fail(Predicate::DegreeParity, format!("real part class {h}, d = {}", c.degree));
    }
    let bound = n + c.link_type.index() - 2;
    if g < bound {
        fail(Predicate::GenusBound, format!("g = {g} < n + X - 2 = {bound}"));
    }
    if opts.strict_paper && type_i && g < 1 {
        fail(Predicate::StrictTypeIGenus, format!("g = {g}"));
    }
    let verdict = if violations.is_empty() { Verdict::Valid } else { Verdict::Invalid };
    ConstraintReport { verdict, violations }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassComparison {
    Isotopic { path: Vec<MoveKind> },
    NotIsotopic { witness: String, left: String, right: String },
    Unknown { explored: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassError {
    #[error("class {which} violates: {}", names(.violations))]
    ConstraintInvalid { which: char, violations: Vec<Predicate> },
}

fn names(v: &[Predicate]) -> String {
    v.iter().map(|p| p.name()).collect::<Vec<_>>().join(", ")
}

/// Compare two classes by their invariant tuples, then their real parts.
pub fn classify_equal(
    a: &FlexibleLinkClass,
    b: &FlexibleLinkClass,
    budget: SearchBudget,
) -> Result<ClassComparison, ClassError> {
    for (which, c) in [('A', a), ('B', b)] {
        let report = check_constraints(c);
        if !report.is_valid() {
            return Err(ClassError::ConstraintInvalid { which, violations: report.predicates() });
        }
    }
    let fields = [
        ("degree", a.degree.to_string(), b.degree.to_string()),
        ("genus", a.genus.to_string(), b.genus.to_string()),
        ("type", a.link_type.to_string(), b.link_type.to_string()),
        ("writhe", a.writhe.to_string(), b.writhe.to_string()),
    ];
    for (name, l, r) in fields {
        if l != r {
            return Ok(ClassComparison::NotIsotopic { witness: name.into(), left: l, right: r });
        }
    }
    Ok(match decide_equivalence(&a.real_part, &b.real_part, budget) {
        EquivalenceResult::Equivalent { path } => ClassComparison::Isotopic { path },
        EquivalenceResult::Distinct { invariant, left, right } => {
            ClassComparison::NotIsotopic { witness: format!("real part {invariant}"), left, right }
        }
        EquivalenceResult::Unknown { explored } => ClassComparison::Unknown { explored },
    })
}
