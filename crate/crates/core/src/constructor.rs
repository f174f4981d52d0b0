//! Construction plans: start from rational curves, then attach imaginary
//! spheres, conjugate torus pairs, conjugate line pairs and conjugate sphere
//! pairs until the tuple (d, g, Type, w) matches the target.

use std::fmt;

use thiserror::Error;

use crate::diagram::{canonical_form, ProjectiveDiagram, Sign};
use crate::invariants::{
    check_constraints_with, CheckOptions, FlexibleLinkClass, LinkType, Predicate, Violation,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructionStep {
    /// One real rational curve per component of the diagram, glued in a
    /// chain at conjugate imaginary points.
    BaseRealCurves(ProjectiveDiagram),
    /// One rational curve without real points.
    BaseImaginaryRational,
    AttachImaginarySphere,
    AttachConjugateTorusPair,
    AttachConjugateLinePair(Sign),
    AttachConjugateSpherePair(Sign),
}

impl ConstructionStep {
    pub fn is_base(&self) -> bool {
        matches!(self, ConstructionStep::BaseRealCurves(_) | ConstructionStep::BaseImaginaryRational)
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            ConstructionStep::BaseRealCurves(_) => "base-real",
            ConstructionStep::BaseImaginaryRational => "base-imaginary",
            ConstructionStep::AttachImaginarySphere => "sphere",
            ConstructionStep::AttachConjugateTorusPair => "torus-pair",
            ConstructionStep::AttachConjugateLinePair(_) => "line-pair",
            ConstructionStep::AttachConjugateSpherePair(_) => "sphere-pair",
        }
    }
}

impl fmt::Display for ConstructionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionStep::BaseRealCurves(d) => {
                write!(f, "base-real ({} components)", d.component_count())
            }
            ConstructionStep::AttachConjugateLinePair(s) | ConstructionStep::AttachConjugateSpherePair(s) => {
                write!(f, "{} {}", self.keyword(), s.symbol())
            }
            _ => f.write_str(self.keyword()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructionState {
    pub d: i64,
    pub g: i64,
    pub n: usize,
    pub link_type: LinkType,
    pub w: i64,
}

impl fmt::Display for ConstructionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {}, {})", self.d, self.g, self.n, self.link_type, self.w)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StepError {
    #[error("the first step must be a base step")]
    MissingBase,
    #[error("a base step may only start a plan")]
    SecondBase,
    #[error("base-real needs a diagram with at least one component")]
    EmptyBaseDiagram,
    #[error("torus-pair needs a Type I state, found {0}")]
    TorusPairNeedsTypeI(ConstructionState),
}

/// One step of the state machine; `None` is the state before any base step.
pub fn step_transition(
    s: Option<&ConstructionState>,
    step: &ConstructionStep,
) -> Result<ConstructionState, StepError> {
    let Some(s) = s else {
        return match step {
            ConstructionStep::BaseRealCurves(diag) => {
                let n = diag.component_count();
                if n == 0 {
                    return Err(StepError::EmptyBaseDiagram);
                }
                let d = diag.homology_class().0.iter().map(|&h| i64::from(h)).sum();
                Ok(ConstructionState { d, g: n as i64 - 1, n, link_type: LinkType::I, w: diag.writhe() })
            }
            ConstructionStep::BaseImaginaryRational => {
                Ok(ConstructionState { d: 0, g: 0, n: 0, link_type: LinkType::II, w: 0 })
            }
            _ => Err(StepError::MissingBase),
        };
    };
    let mut next = *s;
    match step {
        ConstructionStep::BaseRealCurves(_) | ConstructionStep::BaseImaginaryRational => {
            return Err(StepError::SecondBase)
        }
        ConstructionStep::AttachImaginarySphere => {
            next.g += 1;
            next.link_type = LinkType::II;
        }
        ConstructionStep::AttachConjugateTorusPair => {
            if s.link_type != LinkType::I {
                return Err(StepError::TorusPairNeedsTypeI(*s));
            }
            next.g += 2;
        }
        ConstructionStep::AttachConjugateLinePair(sign) => next.d += 2 * sign.value(),
        ConstructionStep::AttachConjugateSpherePair(sign) => next.w += sign.value(),
    }
    Ok(next)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionPlan {
    pub target: FlexibleLinkClass,
    pub steps: Vec<ConstructionStep>,
}

impl ConstructionPlan {
    pub fn base_diagram(&self) -> ProjectiveDiagram {
        match self.steps.first() {
            Some(ConstructionStep::BaseRealCurves(d)) => d.clone(),
            _ => ProjectiveDiagram::empty(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("step {index} ({step}): {error}")]
pub struct SimulateError {
    pub index: usize,
    pub step: String,
    pub error: StepError,
}

/// Fold the steps and return every intermediate state.
pub fn simulate_states(steps: &[ConstructionStep]) -> Result<Vec<ConstructionState>, SimulateError> {
    let mut states: Vec<ConstructionState> = Vec::with_capacity(steps.len());
    for (index, step) in steps.iter().enumerate() {
        let next = step_transition(states.last(), step).map_err(|error| SimulateError {
            index,
            step: step.to_string(),
            error,
        })?;
        states.push(next);
    }
    if states.is_empty() {
        return Err(SimulateError { index: 0, step: "(none)".into(), error: StepError::MissingBase });
    }
    Ok(states)
}

pub fn simulate_plan(p: &ConstructionPlan) -> Result<FlexibleLinkClass, SimulateError> {
    let last = *simulate_states(&p.steps)?.last().unwrap();
    Ok(FlexibleLinkClass::new(last.d, last.g, last.link_type, last.w, p.base_diagram()))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct PlanFailure {
    /// Why the construction could not proceed.
    pub reason: String,
    /// The constraint violations of the target.
    pub violations: Vec<Violation>,
}

impl fmt::Display for PlanFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot construct: {}", self.reason)?;
        for v in &self.violations {
            write!(f, "; {v}")?;
        }
        Ok(())
    }
}

impl PlanFailure {
    pub fn predicates(&self) -> Vec<Predicate> {
        self.violations.iter().map(|v| v.predicate).collect()
    }
}

fn repeat(step: ConstructionStep, times: i64) -> impl Iterator<Item = ConstructionStep> {
    std::iter::repeat_n(step, times.max(0) as usize)
}

fn signed(delta: i64) -> Sign {
    if delta < 0 {
        Sign::Neg
    } else {
        Sign::Pos
    }
}

pub fn plan_construction(target: &FlexibleLinkClass) -> Result<ConstructionPlan, PlanFailure> {
    plan_construction_with(target, CheckOptions::default())
}

/// Build the canonical plan by running the state machine towards `target`.
///
/// The planner only consults the state machine; when it gets stuck the
/// failure carries the target's constraint violations for reporting.
pub fn plan_construction_with(
    target: &FlexibleLinkClass,
    opts: CheckOptions,
) -> Result<ConstructionPlan, PlanFailure> {
    let fail =
        |reason: String| PlanFailure { reason, violations: check_constraints_with(target, opts).violations };
    let real = &target.real_part;
    let n = real.component_count();
    let base = if n == 0 {
        ConstructionStep::BaseImaginaryRational
    } else {
        ConstructionStep::BaseRealCurves(real.clone())
    };
    let start = step_transition(None, &base).map_err(|e| fail(e.to_string()))?;
    let mut steps = vec![base];

    let gap = target.genus - start.g;
    match (target.link_type, start.link_type) {
        (LinkType::II, LinkType::II) => {
            if gap < 0 {
                return Err(fail(format!("base genus {} exceeds target genus {}", start.g, target.genus)));
            }
            steps.extend(repeat(ConstructionStep::AttachImaginarySphere, gap));
        }
        (LinkType::II, LinkType::I) => {
            if gap < 1 {
                return Err(fail(format!(
                    "Type II needs at least one imaginary sphere beyond genus {}, target genus {}",
                    start.g, target.genus
                )));
            }
            steps.extend(repeat(ConstructionStep::AttachImaginarySphere, gap));
        }
        (LinkType::I, LinkType::I) => {
            if gap < 0 || gap % 2 != 0 {
                return Err(fail(format!(
                    "genus gap {gap} from base genus {} is not a nonnegative even number",
                    start.g
                )));
            }
            steps.extend(repeat(ConstructionStep::AttachConjugateTorusPair, gap / 2));
        }
        (LinkType::I, LinkType::II) => {
            return Err(fail("no step turns a Type II state into Type I".into()));
        }
    }
    if opts.strict_paper && target.link_type == LinkType::I && target.genus < 1 {
        return Err(fail("strict mode excludes Type I with genus 0".into()));
    }

    let dd = target.degree - start.d;
    if dd % 2 != 0 {
        return Err(fail(format!("degree gap {dd} is odd; line pairs change degree by 2")));
    }
    steps.extend(repeat(ConstructionStep::AttachConjugateLinePair(signed(dd)), dd.abs() / 2));
    let dw = target.writhe - start.w;
    steps.extend(repeat(ConstructionStep::AttachConjugateSpherePair(signed(dw)), dw.abs()));

    Ok(ConstructionPlan { target: target.clone(), steps })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub ok: bool,
    pub discrepancies: Vec<String>,
}

pub fn verify_plan(p: &ConstructionPlan, target: &FlexibleLinkClass) -> Verification {
    let mut discrepancies = Vec::new();
    match simulate_plan(p) {
        Err(e) => discrepancies.push(e.to_string()),
        Ok(got) => {
            for (name, have, want) in [
                ("degree", got.degree, target.degree),
                ("genus", got.genus, target.genus),
                ("writhe", got.writhe, target.writhe),
            ] {
                if have != want {
                    discrepancies.push(format!("{name} {:+}", have - want));
                }
            }
            if got.link_type != target.link_type {
                discrepancies.push(format!("type {} instead of {}", got.link_type, target.link_type));
            }
            if canonical_form(&got.real_part) != canonical_form(&target.real_part) {
                discrepancies.push("real part differs from the target diagram".into());
            }
        }
    }
    Verification { ok: discrepancies.is_empty(), discrepancies }
}
