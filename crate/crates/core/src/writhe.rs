//! Encomplexed writhe bookkeeping: the real part contributes its blackboard
//! writhe and every conjugate sphere pair contributes one signed meeting with
//! the shade.

use std::fmt;

use crate::constructor::{simulate_states, ConstructionPlan, ConstructionStep, SimulateError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WritheBreakdown {
    pub real_part_writhe: i64,
    /// Step index and signed contribution of each sphere pair.
    pub complex_contributions: Vec<(usize, i64)>,
    pub total: i64,
}

impl WritheBreakdown {
    pub fn complex_writhe(&self) -> i64 {
        self.complex_contributions.iter().map(|&(_, c)| c).sum()
    }
}

impl fmt::Display for WritheBreakdown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.complex_contributions.iter().map(|&(_, c)| format!("{c:+}")).collect();
        writeln!(f, "real: {}", self.real_part_writhe)?;
        writeln!(f, "complex: [{}]", list.join(", "))?;
        writeln!(f, "total: {}", self.total)
    }
}

pub fn plan_writhe(p: &ConstructionPlan) -> Result<WritheBreakdown, SimulateError> {
    simulate_states(&p.steps)?;
    let real_part_writhe = match p.steps.first() {
        Some(ConstructionStep::BaseRealCurves(d)) => d.writhe(),
        _ => 0,
    };
    let complex_contributions: Vec<(usize, i64)> = p
        .steps
        .iter()
        .enumerate()
        .filter_map(|(i, s)| match s {
            ConstructionStep::AttachConjugateSpherePair(sign) => Some((i, sign.value())),
            _ => None,
        })
        .collect();
    let total = real_part_writhe + complex_contributions.iter().map(|&(_, c)| c).sum::<i64>();
    Ok(WritheBreakdown { real_part_writhe, complex_contributions, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructor::simulate_plan;
    use crate::diagram::{catalog_entry, parse_diagram, Sign};
    use crate::invariants::{FlexibleLinkClass, LinkType};
    use ConstructionStep::*;

    fn plan(steps: Vec<ConstructionStep>) -> ConstructionPlan {
        let target = FlexibleLinkClass::new(0, 0, LinkType::II, 0, catalog_entry("empty").unwrap());
        ConstructionPlan { target, steps }
    }

    /// Signed crossing count computed from raw Gauss-code tokens.
    fn token_writhe(code: &str) -> i64 {
        code.split_whitespace()
            .filter(|t| t.starts_with('O'))
            .map(|t| if t.ends_with('+') { 1 } else { -1 })
            .sum()
    }

    #[test]
    fn imaginary_base() {
        let b = plan_writhe(&plan(vec![BaseImaginaryRational])).unwrap();
        assert_eq!(b, WritheBreakdown { real_part_writhe: 0, complex_contributions: vec![], total: 0 });
    }

    #[test]
    fn sphere_pairs_sum() {
        let steps = vec![
            BaseImaginaryRational,
            AttachConjugateSpherePair(Sign::Pos),
            AttachConjugateSpherePair(Sign::Pos),
            AttachConjugateSpherePair(Sign::Neg),
        ];
        let b = plan_writhe(&plan(steps)).unwrap();
        assert_eq!(b.real_part_writhe, 0);
        assert_eq!(b.complex_contributions, vec![(1, 1), (2, 1), (3, -1)]);
        assert_eq!(b.total, 1);
        assert_eq!(b.to_string(), "real: 0\ncomplex: [+1, +1, -1]\ntotal: 1\n");
    }

    #[test]
    fn kinked_base() {
        let code = "O1+ U1+";
        let d = parse_diagram(&format!("components: 1\nc0: {code}\n")).unwrap();
        let b = plan_writhe(&plan(vec![BaseRealCurves(d)])).unwrap();
        assert_eq!(b.real_part_writhe, token_writhe(code));
        assert_eq!(b.total, 1);
    }

    #[test]
    fn total_matches_simulation() {
        let code = "O1- U2- O3- U1- O2- U3- W1";
        let d = parse_diagram(&format!("components: 1\nc0: {code}\nboundary: 1a 1b\n")).unwrap();
        let p = plan(vec![
            BaseRealCurves(d),
            AttachImaginarySphere,
            AttachConjugateSpherePair(Sign::Pos),
            AttachConjugateLinePair(Sign::Neg),
        ]);
        let b = plan_writhe(&p).unwrap();
        assert_eq!(b.real_part_writhe, token_writhe(code));
        assert_eq!(b.total, simulate_plan(&p).unwrap().writhe);
    }

    #[test]
    fn invalid_plan_is_an_error() {
        assert!(plan_writhe(&plan(vec![AttachConjugateSpherePair(Sign::Pos)])).is_err());
    }
}
