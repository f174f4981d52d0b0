//! Flexible links in RP³ ⊂ CP³: projective link diagrams and their move
//! calculus, the invariant tuple (degree, genus, Type, encomplexed writhe,
//! real part), realizability constraints, and construction plans.

pub mod constructor;
pub mod diagram;
pub mod enumerate;
pub mod format;
pub mod invariants;
pub mod writhe;

pub use constructor::{
    plan_construction, plan_construction_with, simulate_plan, step_transition, verify_plan, ConstructionPlan,
    ConstructionState, ConstructionStep, PlanFailure, StepError, Verification,
};
pub use diagram::{ProjectiveDiagram, Sign};
pub use invariants::{
    check_constraints, check_constraints_with, classify_equal, CheckOptions, ClassComparison,
    ConstraintReport, FlexibleLinkClass, LinkType, Predicate, Verdict,
};
pub use writhe::{plan_writhe, WritheBreakdown};
