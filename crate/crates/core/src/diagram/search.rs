//! Bounded bidirectional search over canonical forms.

use std::collections::HashMap;
use std::fmt;

use super::moves::find_step;
use super::{
    apply_move, canonical_form, canonicalize, enumerate_moves, MoveCap, MoveError, MoveKind,
    ProjectiveDiagram,
};

/// Default growth allowance for crossings and passages during search.
pub const DEFAULT_SLACK: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Longest path considered.
    pub max_moves: usize,
    /// Distinct canonical states discovered on both sides together.
    pub max_states: usize,
    pub slack: usize,
}

impl SearchBudget {
    pub fn moves(max_moves: usize) -> Self {
        SearchBudget { max_moves, ..Self::default() }
    }

    pub fn states(max_states: usize) -> Self {
        SearchBudget { max_states, ..Self::default() }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_moves: usize::MAX, max_states: 10_000, slack: DEFAULT_SLACK }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivalenceResult {
    /// Moves taking the canonical form of the first diagram to that of the second.
    Equivalent {
        path: Vec<MoveKind>,
    },
    Distinct {
        invariant: String,
        left: String,
        right: String,
    },
    Unknown {
        explored: usize,
    },
}

impl EquivalenceResult {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivalenceResult::Equivalent { .. })
    }
}

impl fmt::Display for EquivalenceResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivalenceResult::Equivalent { path } => write!(f, "equivalent ({} moves)", path.len()),
            EquivalenceResult::Distinct { invariant, left, right } => {
                write!(f, "distinct: {invariant} {left} vs {right}")
            }
            EquivalenceResult::Unknown { explored } => {
                write!(f, "unknown: budget exhausted after {explored} states")
            }
        }
    }
}

fn multiset_string(v: &[u8]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(","))
}

/// Invariant values that separate the two diagrams, if any.
fn distinguishing(a: &ProjectiveDiagram, b: &ProjectiveDiagram) -> Option<EquivalenceResult> {
    if a.component_count() != b.component_count() {
        return Some(EquivalenceResult::Distinct {
            invariant: "components".into(),
            left: a.component_count().to_string(),
            right: b.component_count().to_string(),
        });
    }
    let (ha, hb) = (a.homology_multiset(), b.homology_multiset());
    if ha != hb {
        return Some(EquivalenceResult::Distinct {
            invariant: "homology".into(),
            left: multiset_string(&ha),
            right: multiset_string(&hb),
        });
    }
    None
}

struct Node {
    rep: ProjectiveDiagram,
    /// Predecessor in the search tree and the move from its representative to this state.
    parent: Option<(String, MoveKind)>,
}

struct Side {
    nodes: HashMap<String, Node>,
    frontier: Vec<String>,
    depth: usize,
}

impl Side {
    fn new(d: &ProjectiveDiagram) -> Self {
        let rep = canonicalize(d);
        let key = canonical_form(&rep);
        let mut nodes = HashMap::new();
        nodes.insert(key.clone(), Node { rep, parent: None });
        Side { nodes, frontier: vec![key], depth: 0 }
    }

    /// Keys from the root to `key`, with the move into each.
    fn chain(&self, key: &str) -> Vec<(String, Option<MoveKind>)> {
        let mut out = Vec::new();
        let mut cur = key.to_string();
        loop {
            let node = &self.nodes[&cur];
            match &node.parent {
                Some((p, m)) => {
                    out.push((cur.clone(), Some(*m)));
                    cur = p.clone();
                }
                None => {
                    out.push((cur, None));
                    break;
                }
            }
        }
        out.reverse();
        out
    }
}

fn search(a: &ProjectiveDiagram, b: &ProjectiveDiagram, budget: SearchBudget) -> EquivalenceResult {
    let cap = MoveCap::for_pair(a, b, budget.slack);
    let mut sides = [Side::new(a), Side::new(b)];
    if sides[1].nodes.contains_key(&sides[0].frontier[0]) {
        return EquivalenceResult::Equivalent { path: vec![] };
    }
    let explored = |s: &[Side; 2]| s[0].nodes.len() + s[1].nodes.len();
    loop {
        if sides[0].depth + sides[1].depth >= budget.max_moves {
            return EquivalenceResult::Unknown { explored: explored(&sides) };
        }
        let which = match (sides[0].frontier.is_empty(), sides[1].frontier.is_empty()) {
            (true, true) => return EquivalenceResult::Unknown { explored: explored(&sides) },
            (false, true) => 0,
            (true, false) => 1,
            (false, false) => usize::from(sides[1].frontier.len() < sides[0].frontier.len()),
        };
        let other = 1 - which;
        let frontier = std::mem::take(&mut sides[which].frontier);
        let depth = sides[which].depth + 1;
        let mut next = Vec::new();
        for key in frontier {
            let rep = sides[which].nodes[&key].rep.clone();
            for m in enumerate_moves(&rep, cap) {
                let Ok(child) = apply_move(&rep, &m) else { continue };
                let child = canonicalize(&child);
                let ck = canonical_form(&child);
                if sides[which].nodes.contains_key(&ck) {
                    continue;
                }
                sides[which].nodes.insert(ck.clone(), Node { rep: child, parent: Some((key.clone(), m)) });
                if sides[other].nodes.contains_key(&ck) {
                    return EquivalenceResult::Equivalent { path: join(&sides, &ck) };
                }
                if explored(&sides) >= budget.max_states {
                    return EquivalenceResult::Unknown { explored: explored(&sides) };
                }
                next.push(ck);
            }
        }
        next.sort();
        sides[which].frontier = next;
        sides[which].depth = depth;
    }
}

/// Path from the root of side 0 to the root of side 1 through `meet`.
fn join(sides: &[Side; 2], meet: &str) -> Vec<MoveKind> {
    let mut path: Vec<MoveKind> = sides[0].chain(meet).into_iter().filter_map(|(_, m)| m).collect();
    let back = sides[1].chain(meet);
    for i in (1..back.len()).rev() {
        let (child, m) = (&back[i].0, back[i].1.unwrap());
        let parent = &back[i - 1].0;
        let rep = &sides[1].nodes[child].rep;
        let step = find_step(rep, &m, parent).expect("every move has an inverse");
        path.push(step);
    }
    path
}

/// Decide whether `a` and `b` are related by moves, within `budget`.
///
/// Only component count and the homology multiset can certify `Distinct`;
/// an exhausted search is always `Unknown`. The search always runs from the
/// diagram with the smaller canonical form, so swapping the arguments gives
/// the inverted path.
pub fn decide_equivalence(
    a: &ProjectiveDiagram,
    b: &ProjectiveDiagram,
    budget: SearchBudget,
) -> EquivalenceResult {
    if let Some(d) = distinguishing(a, b) {
        return d;
    }
    if canonical_form(a) <= canonical_form(b) {
        search(a, b, budget)
    } else {
        match search(b, a, budget) {
            EquivalenceResult::Equivalent { path } => {
                EquivalenceResult::Equivalent { path: invert_path(b, &path).expect("search paths replay") }
            }
            other => other,
        }
    }
}

/// Apply `path` starting from the canonical form of `d`, canonicalizing after every move.
pub fn replay_path(d: &ProjectiveDiagram, path: &[MoveKind]) -> Result<ProjectiveDiagram, MoveError> {
    let mut cur = canonicalize(d);
    for m in path {
        cur = canonicalize(&apply_move(&cur, m)?);
    }
    Ok(cur)
}

/// A path leading from the end of `path` (replayed from `d`) back to `d`.
pub fn invert_path(d: &ProjectiveDiagram, path: &[MoveKind]) -> Option<Vec<MoveKind>> {
    let mut states = vec![canonicalize(d)];
    for m in path {
        let next = canonicalize(&apply_move(states.last().unwrap(), m).ok()?);
        states.push(next);
    }
    let mut out = Vec::with_capacity(path.len());
    for i in (0..path.len()).rev() {
        out.push(find_step(&states[i + 1], &path[i], &canonical_form(&states[i]))?);
    }
    Some(out)
}
