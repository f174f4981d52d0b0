//! Acceptance checks. Run with `cargo test -p flexlink --test acceptance`;
//! prints one PASS/FAIL line per criterion and exits non-zero on any failure.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use flexlink::diagram::{
    apply_move, canonical_form, catalog, catalog_entry, decide_equivalence, enumerate_moves, inverse_move,
    replay_path, EquivalenceResult, MoveCap, SearchBudget,
};
use flexlink::enumerate::{enumerate_classes, EnumerationBounds, EnumerationEntry};
use flexlink::{
    check_constraints, classify_equal, plan_construction, plan_writhe, ClassComparison, ConstructionStep,
    FlexibleLinkClass, LinkType, Predicate, ProjectiveDiagram, Sign,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(10);
const SEQUENCES_PER_DIAGRAM: usize = 1000;
const MAX_SEQUENCE_LEN: usize = 50;
/// Random walks may grow crossings and passages this far past the start.
const WALK_SLACK: usize = 4;
const TREFOIL_STATE_BUDGET: usize = 10_000;

type Outcome = Result<String, String>;

fn full_enumeration() -> Vec<EnumerationEntry> {
    let bounds = EnumerationBounds::new((-4, 4), 6, (-5, 5));
    enumerate_classes(&bounds, Default::default())
}

fn oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let entries = full_enumeration();
    let mut mismatches = Vec::new();
    let mut valid = 0;
    for e in &entries {
        let planned = e.plan.is_ok();
        if e.report.is_valid() {
            valid += 1;
        }
        if e.report.is_valid() != planned || !e.consistent() {
            mismatches.push(e.line());
        }
    }
    let elapsed = started.elapsed();
    if entries.len() != 9 * 7 * 2 * 11 * 7 {
        return Err(format!("expected 9702 entries, got {}", entries.len()));
    }
    if !mismatches.is_empty() {
        return Err(format!("{} mismatches, first: {}", mismatches.len(), mismatches[0]));
    }
    if elapsed >= ORACLE_TIME_LIMIT {
        return Err(format!("took {elapsed:?}, limit {ORACLE_TIME_LIMIT:?}"));
    }
    Ok(format!(
        "{} classes, {valid} valid = {valid} planned and verified, 0 mismatches, {:.2}s",
        entries.len(),
        elapsed.as_secs_f64()
    ))
}

fn writhe_separation() -> Outcome {
    let chord = catalog_entry("chord").unwrap();
    let classes: Vec<FlexibleLinkClass> =
        (-5..=5).map(|w| FlexibleLinkClass::new(1, 0, LinkType::I, w, chord.clone())).collect();
    let mut checks = 0;
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            checks += 1;
            match classify_equal(a, b, SearchBudget::default()) {
                Ok(ClassComparison::NotIsotopic { ref witness, .. }) if witness == "writhe" => {}
                other => return Err(format!("w={} vs w={}: {other:?}", a.writhe, b.writhe)),
            }
        }
    }
    if checks != 55 {
        return Err(format!("{checks} checks instead of 55"));
    }
    Ok(format!("{} classes, {checks} pairs NotIsotopic(writhe)", classes.len()))
}

fn degree_zero() -> Outcome {
    let c = FlexibleLinkClass::new(0, 0, LinkType::II, 0, ProjectiveDiagram::empty());
    let report = check_constraints(&c);
    if !report.is_valid() {
        return Err(format!("rejected: {:?}", report.predicates()));
    }
    let plan = plan_construction(&c).map_err(|f| f.to_string())?;
    if plan.steps != vec![ConstructionStep::BaseImaginaryRational] {
        return Err(format!("unexpected plan {:?}", plan.steps));
    }
    Ok("(0, 0, II, 0, empty) valid, plan [base-imaginary]".into())
}

fn lemma_rejections(entries: &[EnumerationEntry]) -> Outcome {
    let mut found = Vec::new();
    for p in [
        Predicate::ComponentBound,
        Predicate::EmptyImpliesTypeII,
        Predicate::TypeIParity,
        Predicate::DegreeParity,
    ] {
        // The witness with the fewest co-violations.
        let witness = entries
            .iter()
            .filter(|e| e.plan.is_err() && e.report.predicates().contains(&p))
            .min_by_key(|e| e.report.violations.len());
        match witness {
            None => return Err(format!("no Invalid entry names {p}")),
            Some(e) => {
                let others: Vec<&str> =
                    e.report.predicates().into_iter().filter(|q| *q != p).map(|q| q.name()).collect();
                let c = &e.class;
                let also = if others.is_empty() { String::new() } else { format!(" +{}", others.join("+")) };
                found.push(format!(
                    "{p}: d={} g={} {} {}{also}",
                    c.degree, c.genus, c.link_type, e.real_part_name
                ));
            }
        }
    }
    Ok(found.join("; "))
}

fn move_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut moves_checked = 0usize;
    let mut families = BTreeMap::new();
    for (name, start) in catalog() {
        let cap = MoveCap::around(&start, WALK_SLACK);
        let components = start.component_count();
        let homology = start.homology_multiset();
        for seq in 0..SEQUENCES_PER_DIAGRAM {
            let len = rng.gen_range(0..=MAX_SEQUENCE_LEN);
            let mut cur = start.clone();
            for step in 0..len {
                let moves = enumerate_moves(&cur, cap);
                if moves.is_empty() {
                    break;
                }
                let m = moves[rng.gen_range(0..moves.len())];
                let next = apply_move(&cur, &m)
                    .map_err(|e| format!("{name} sequence {seq} step {step}: {m}: {e}\n{cur}"))?;
                if next.component_count() != components || next.homology_multiset() != homology {
                    return Err(format!("{name} sequence {seq} step {step}: {m} changed invariants"));
                }
                let inv = inverse_move(&cur, &m)
                    .ok_or_else(|| format!("{name} sequence {seq} step {step}: no inverse for {m}\n{cur}"))?;
                let back =
                    apply_move(&next, &inv).map_err(|e| format!("{name}: inverse {inv} failed: {e}"))?;
                if canonical_form(&back) != canonical_form(&cur) {
                    return Err(format!(
                        "{name} sequence {seq} step {step}: {m} then {inv} is not the identity"
                    ));
                }
                *families.entry(format!("{:?}", m.family())).or_insert(0usize) += 1;
                moves_checked += 1;
                cur = next;
            }
        }
    }
    let per: Vec<String> = families.iter().map(|(f, n)| format!("{f}={n}")).collect();
    Ok(format!(
        "{} sequences, {moves_checked} moves with inverses, 0 failures ({})",
        7 * SEQUENCES_PER_DIAGRAM,
        per.join(" ")
    ))
}

fn equivalence_search() -> Outcome {
    let circle = ProjectiveDiagram::unknot();
    let kinked = catalog_entry("kinked-unknot").unwrap();
    let chord = ProjectiveDiagram::chord();
    let trefoil = catalog_entry("trefoil").unwrap();

    let path = match decide_equivalence(&circle, &kinked, SearchBudget::moves(2)) {
        EquivalenceResult::Equivalent { path } => path,
        other => return Err(format!("circle vs kinked unknot: {other}")),
    };
    let end = replay_path(&circle, &path).map_err(|e| e.to_string())?;
    if canonical_form(&end) != canonical_form(&kinked) {
        return Err("circle vs kinked unknot: path does not replay to the kinked unknot".into());
    }
    match decide_equivalence(&circle, &chord, SearchBudget::default()) {
        EquivalenceResult::Distinct { ref invariant, .. } if invariant == "homology" => {}
        other => return Err(format!("circle vs chord: {other}")),
    }
    let started = Instant::now();
    let explored = match decide_equivalence(&trefoil, &circle, SearchBudget::states(TREFOIL_STATE_BUDGET)) {
        EquivalenceResult::Unknown { explored } => explored,
        other => return Err(format!("trefoil vs circle: {other}")),
    };
    if explored > TREFOIL_STATE_BUDGET {
        return Err(format!("trefoil search explored {explored} states"));
    }
    Ok(format!(
        "circle~kink in {} move, circle/chord distinct by homology, trefoil/circle unknown after {explored} states ({:.2}s)",
        path.len(),
        started.elapsed().as_secs_f64()
    ))
}

fn writhe_bookkeeping(entries: &[EnumerationEntry]) -> Outcome {
    let mut planned = 0;
    let mut pairs = 0;
    let mut by_key = BTreeMap::new();
    for e in entries {
        let Ok(plan) = &e.plan else { continue };
        planned += 1;
        let b = plan_writhe(plan).map_err(|err| err.to_string())?;
        if b.total != e.class.writhe {
            return Err(format!("{}: total {} vs writhe {}", e.line(), b.total, e.class.writhe));
        }
        let c = &e.class;
        by_key
            .insert((e.real_part_name.clone(), c.degree, c.genus, c.link_type, c.writhe), plan.steps.clone());
    }
    for ((name, d, g, t, w), steps) in &by_key {
        let Some(next) = by_key.get(&(name.clone(), *d, *g, *t, w + 1)) else { continue };
        pairs += 1;
        let base_w = plan_writhe_base(steps);
        // Going from w to w + 1 adds a positive pair above the base writhe
        // and drops a negative one below it.
        let (short, long, sign) =
            if *w >= base_w { (steps, next, Sign::Pos) } else { (next, steps, Sign::Neg) };
        if !differs_by_one_sphere_pair(short, long, sign) {
            return Err(format!("{name} d={d} g={g} {t}: plans for w={w} and w={} differ otherwise", w + 1));
        }
    }
    Ok(format!("{planned} plans with total = w, {pairs} (w, w+1) pairs differ by one sphere pair"))
}

fn plan_writhe_base(steps: &[ConstructionStep]) -> i64 {
    match steps.first() {
        Some(ConstructionStep::BaseRealCurves(d)) => d.writhe(),
        _ => 0,
    }
}

fn differs_by_one_sphere_pair(short: &[ConstructionStep], long: &[ConstructionStep], sign: Sign) -> bool {
    long.len() == short.len() + 1
        && (0..long.len()).any(|i| {
            long[i] == ConstructionStep::AttachConjugateSpherePair(sign)
                && long[..i].iter().chain(&long[i + 1..]).eq(short.iter())
        })
}

type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() {
    let entries = full_enumeration();

    let criteria: Vec<(&str, Check<'_>)> = vec![
        ("oracle-equivalence", Box::new(oracle_equivalence)),
        ("writhe-separation", Box::new(writhe_separation)),
        ("degree-zero-existence", Box::new(degree_zero)),
        ("lemma-rejections", Box::new(|| lemma_rejections(&entries))),
        ("move-engine-soundness", Box::new(move_soundness)),
        ("equivalence-search", Box::new(equivalence_search)),
        ("writhe-bookkeeping", Box::new(|| writhe_bookkeeping(&entries))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
