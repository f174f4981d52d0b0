use std::collections::{BTreeMap, HashSet};

use flexlink::diagram::{
    apply_move, canonical_form, catalog, decide_equivalence, enumerate_moves, inverse_move, invert_path,
    parse_diagram, replay_path, serialize_diagram, End, Endpoint, EquivalenceResult, Event, MoveCap,
    SearchBudget,
};
use flexlink::{ProjectiveDiagram, Sign};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Walk `steps` random moves from catalog entry `which`.
fn random_diagram(which: usize, steps: usize, seed: u64) -> ProjectiveDiagram {
    let (_, start) = catalog().swap_remove(which % 7);
    let cap = MoveCap::around(&start, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = start;
    for _ in 0..steps {
        let moves = enumerate_moves(&d, cap);
        if moves.is_empty() {
            break;
        }
        d = apply_move(&d, &moves[rng.gen_range(0..moves.len())]).unwrap();
    }
    d
}

/// Number of faces of a one-component classical Gauss code, traced strand by
/// strand with the face kept on the left. A walker arriving at a crossing
/// turns onto the other strand; the direction follows from the sign and
/// whether it arrived on the over or under strand, and forwards or backwards.
fn classical_face_count(word: &[Event], sign: &BTreeMap<u32, Sign>) -> usize {
    let m = word.len();
    // (position, forward): travelling along edge from `position` forwards, or
    // along edge ending at `position` backwards.
    let mut partner = BTreeMap::new();
    for (i, e) in word.iter().enumerate() {
        partner.entry(e.crossing().unwrap()).or_insert_with(Vec::new).push(i);
    }
    let other = |i: usize| {
        let k = word[i].crossing().unwrap();
        let p = &partner[&k];
        if p[0] == i {
            p[1]
        } else {
            p[0]
        }
    };
    let mut seen = HashSet::new();
    let mut faces = 0;
    for start in 0..m {
        for fwd in [true, false] {
            if seen.contains(&(start, fwd)) {
                continue;
            }
            faces += 1;
            let (mut pos, mut forward) = (start, fwd);
            while seen.insert((pos, forward)) {
                // Arrive at the crossing visit at the far end of this dart.
                let arrive = if forward { (pos + 1) % m } else { pos };
                let on_over = word[arrive].is_over();
                let positive = sign[&word[arrive].crossing().unwrap()] == Sign::Pos;
                let j = other(arrive);
                let leave_forward = match (positive, on_over, forward) {
                    (true, true, true) => true,
                    (true, false, true) => false,
                    (true, true, false) => false,
                    (true, false, false) => true,
                    (false, true, true) => false,
                    (false, false, true) => true,
                    (false, true, false) => true,
                    (false, false, false) => false,
                };
                if leave_forward {
                    pos = j;
                    forward = true;
                } else {
                    pos = (j + m - 1) % m;
                    forward = false;
                }
            }
        }
    }
    faces
}

fn random_gauss_code(crossings: usize, seed: u64) -> (Vec<Event>, BTreeMap<u32, Sign>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut word: Vec<Event> =
        (1..=crossings as u32).flat_map(|k| [Event::Over(k), Event::Under(k)]).collect();
    word.shuffle(&mut rng);
    let signs = (1..=crossings as u32).map(|k| (k, if rng.gen() { Sign::Pos } else { Sign::Neg })).collect();
    (word, signs)
}

#[test]
fn trefoil_faces_by_strand_walk() {
    let word = vec![
        Event::Over(1),
        Event::Under(2),
        Event::Over(3),
        Event::Under(1),
        Event::Over(2),
        Event::Under(3),
    ];
    let all = |s| (1..=3).map(|k| (k, s)).collect::<BTreeMap<_, _>>();
    assert_eq!(classical_face_count(&word, &all(Sign::Pos)), 5);
    assert!(ProjectiveDiagram::new(vec![word.clone()], all(Sign::Pos), vec![]).is_ok());
    let mut mixed = all(Sign::Pos);
    mixed.insert(3, Sign::Neg);
    assert_ne!(classical_face_count(&word, &mixed), 5);
    assert!(ProjectiveDiagram::new(vec![word], mixed, vec![]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn validation_matches_strand_walk(crossings in 1usize..6, seed in any::<u64>()) {
        let (word, signs) = random_gauss_code(crossings, seed);
        let planar = classical_face_count(&word, &signs) == crossings + 2;
        let accepted = ProjectiveDiagram::new(vec![word], signs, vec![]).is_ok();
        prop_assert_eq!(accepted, planar);
    }

    #[test]
    fn move_then_inverse_restores(which in 0usize..7, steps in 0usize..12, seed in any::<u64>(), pick in any::<usize>()) {
        let d = random_diagram(which, steps, seed);
        let moves = enumerate_moves(&d, MoveCap::around(&d, 2));
        prop_assume!(!moves.is_empty());
        let m = moves[pick % moves.len()];
        let next = apply_move(&d, &m).unwrap();
        prop_assert_eq!(next.component_count(), d.component_count());
        prop_assert_eq!(next.homology_multiset(), d.homology_multiset());
        let inv = inverse_move(&d, &m).expect("inverse exists");
        prop_assert_eq!(canonical_form(&apply_move(&next, &inv).unwrap()), canonical_form(&d));
    }

    #[test]
    fn parse_serialize_identity_on_canonical_forms(which in 0usize..7, steps in 0usize..15, seed in any::<u64>()) {
        let d = random_diagram(which, steps, seed);
        let text = serialize_diagram(&d);
        let back = parse_diagram(&text).unwrap();
        prop_assert_eq!(canonical_form(&back), canonical_form(&d));
        prop_assert_eq!(back, d);
    }

    #[test]
    fn canonical_form_ignores_labels(which in 0usize..7, steps in 0usize..15, seed in any::<u64>()) {
        let d = random_diagram(which, steps, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let mut ks: Vec<u32> = d.signs().keys().copied().collect();
        let mut shuffled: Vec<u32> = ks.iter().map(|k| k * 7 + 3).collect();
        shuffled.shuffle(&mut rng);
        let kmap: BTreeMap<u32, u32> = ks.drain(..).zip(shuffled).collect();
        let mut js: Vec<u32> = d.boundary().iter().map(|e| e.passage).collect();
        js.sort();
        js.dedup();
        let mut jshuf: Vec<u32> = js.iter().map(|j| j + 40).collect();
        jshuf.shuffle(&mut rng);
        let jmap: BTreeMap<u32, u32> = js.into_iter().zip(jshuf).collect();
        let relabel = |e: &Event| match *e {
            Event::Over(k) => Event::Over(kmap[&k]),
            Event::Under(k) => Event::Under(kmap[&k]),
            Event::Pass(j) => Event::Pass(jmap[&j]),
        };
        let mut comps: Vec<Vec<Event>> = d
            .components()
            .iter()
            .map(|w| {
                let mut w: Vec<Event> = w.iter().map(relabel).collect();
                if !w.is_empty() {
                    let r = rng.gen_range(0..w.len());
                    w.rotate_left(r);
                }
                w
            })
            .collect();
        comps.shuffle(&mut rng);
        let signs = d.signs().iter().map(|(k, s)| (kmap[k], *s)).collect();
        let mut boundary: Vec<Endpoint> =
            d.boundary().iter().map(|e| Endpoint::new(jmap[&e.passage], e.end)).collect();
        if !boundary.is_empty() {
            let r = rng.gen_range(0..boundary.len());
            boundary.rotate_left(r);
        }
        let e = ProjectiveDiagram::new(comps, signs, boundary).unwrap();
        prop_assert_eq!(canonical_form(&e), canonical_form(&d));
    }

    #[test]
    fn non_antipodal_boundary_rejected(which in 0usize..7, steps in 0usize..15, seed in any::<u64>(), i in any::<usize>(), j in any::<usize>()) {
        let d = random_diagram(which, steps, seed);
        let len = d.boundary().len();
        prop_assume!(len >= 4);
        let (i, j) = (i % len, j % len);
        let mut b = d.boundary().to_vec();
        b.swap(i, j);
        let antipodal = |b: &[Endpoint]| {
            b.iter().enumerate().all(|(p, e)| {
                let q = b.iter().position(|f| f.passage == e.passage && f.end != e.end).unwrap();
                (p + len / 2) % len == q
            })
        };
        prop_assume!(!antipodal(&b));
        prop_assert!(ProjectiveDiagram::new(d.components().to_vec(), d.signs().clone(), b).is_err());
    }

    #[test]
    fn equivalence_is_symmetric(which in 0usize..7, steps in 1usize..3, seed in any::<u64>()) {
        let (_, a) = catalog().swap_remove(which);
        let b = random_diagram(which, steps, seed);
        let budget = SearchBudget { max_moves: 4, max_states: 3000, slack: 2 };
        let ab = decide_equivalence(&a, &b, budget);
        let ba = decide_equivalence(&b, &a, budget);
        prop_assert_eq!(ab.is_equivalent(), ba.is_equivalent());
        if let (EquivalenceResult::Equivalent { path: p }, EquivalenceResult::Equivalent { path: q }) = (&ab, &ba) {
            prop_assert_eq!(canonical_form(&replay_path(&a, p).unwrap()), canonical_form(&b));
            prop_assert_eq!(canonical_form(&replay_path(&b, q).unwrap()), canonical_form(&a));
            let (first, first_path, second_path) =
                if canonical_form(&a) <= canonical_form(&b) { (&a, p, q) } else { (&b, q, p) };
            prop_assert_eq!(&invert_path(first, first_path).unwrap(), second_path);
        }
    }
}

#[test]
fn endpoints_display() {
    assert_eq!(Endpoint::new(3, End::B).to_string(), "3b");
}
