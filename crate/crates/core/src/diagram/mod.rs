//! Link diagrams for RP³.
//!
//! A diagram lives in a closed disk whose boundary circle is identified
//! antipodally, i.e. a model of RP². Each component is an oriented cyclic
//! word of events: a crossing visit (over or under) or a boundary passage,
//! where the strand leaves the disk at endpoint `a` of the passage and
//! re-enters at the antipodal endpoint `b`.
//!
//! The planar embedding is not stored separately. The cyclic order of the
//! four edge-ends at a crossing is fixed by its sign and by which visit is
//! over, and the order at a boundary endpoint is fixed by the boundary
//! order. Validity of a diagram is then a face-tracing check on the
//! resulting combinatorial map.

mod canonical;
mod catalog;
mod map;
mod moves;
mod parse;
mod search;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use canonical::{canonical_form, canonicalize};
pub use catalog::{catalog, catalog_entry, CATALOG_NAMES};
pub use map::{EdgeEnd, FaceSide, FaceStructure};
pub use moves::{
    apply_move, enumerate_moves, enumerate_moves_of_family, inverse_move, MoveCap, MoveError, MoveFamily,
    MoveKind,
};
pub use parse::{parse_diagram, serialize_diagram};
pub use search::{
    decide_equivalence, invert_path, replay_path, EquivalenceResult, SearchBudget, DEFAULT_SLACK,
};

/// Crossing sign. Positive when the under-strand passes from right to left
/// as seen travelling along the over-strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

/// One step along a component word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Event {
    Over(u32),
    Under(u32),
    Pass(u32),
}

impl Event {
    pub fn crossing(self) -> Option<u32> {
        match self {
            Event::Over(k) | Event::Under(k) => Some(k),
            Event::Pass(_) => None,
        }
    }

    pub fn passage(self) -> Option<u32> {
        match self {
            Event::Pass(j) => Some(j),
            _ => None,
        }
    }

    pub fn is_over(self) -> bool {
        matches!(self, Event::Over(_))
    }
}

/// Which end of a boundary passage an endpoint is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    /// The strand leaves the disk here.
    A,
    /// The strand re-enters the disk here.
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endpoint {
    pub passage: u32,
    pub end: End,
}

impl Endpoint {
    pub fn new(passage: u32, end: End) -> Self {
        Endpoint { passage, end }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = match self.end {
            End::A => 'a',
            End::B => 'b',
        };
        write!(f, "{}{}", self.passage, e)
    }
}

/// Position of an event inside the component words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Visit {
    pub component: usize,
    pub position: usize,
}

/// A crossing as seen from the diagram: its sign and the two visits.
/// The orientation of each strand is the orientation of its component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub id: u32,
    pub sign: Sign,
    pub over: Visit,
    pub under: Visit,
}

/// The strand edge leaving event `index` of component `component`. A
/// component without events has the single edge `index = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub component: usize,
    pub index: usize,
}

/// One side of a strand edge; `left` is relative to the strand orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SideRef {
    pub edge: EdgeRef,
    pub left: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("inconsistent diagram: {0}")]
    Consistency(String),
    #[error("diagram does not embed in the disk: {0}")]
    Embedding(String),
}

impl DiagramError {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        DiagramError::Syntax { line, message: message.into() }
    }
}

/// A validated projective link diagram.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ProjectiveDiagram {
    components: Vec<Vec<Event>>,
    signs: BTreeMap<u32, Sign>,
    boundary: Vec<Endpoint>,
}

impl ProjectiveDiagram {
    /// Builds a diagram and runs the full consistency and embedding check.
    pub fn new(
        components: Vec<Vec<Event>>,
        signs: BTreeMap<u32, Sign>,
        boundary: Vec<Endpoint>,
    ) -> Result<Self, DiagramError> {
        let d = ProjectiveDiagram { components, signs, boundary };
        d.validate()?;
        Ok(d)
    }

    pub fn empty() -> Self {
        ProjectiveDiagram::default()
    }

    /// An embedded circle avoiding the boundary.
    pub fn unknot() -> Self {
        ProjectiveDiagram { components: vec![vec![]], ..Default::default() }
    }

    /// A single projective line: one strand crossing the boundary once.
    pub fn chord() -> Self {
        ProjectiveDiagram {
            components: vec![vec![Event::Pass(1)]],
            signs: BTreeMap::new(),
            boundary: vec![Endpoint::new(1, End::A), Endpoint::new(1, End::B)],
        }
    }

    pub(crate) fn from_parts_unchecked(
        components: Vec<Vec<Event>>,
        signs: BTreeMap<u32, Sign>,
        boundary: Vec<Endpoint>,
    ) -> Self {
        ProjectiveDiagram { components, signs, boundary }
    }

    pub fn components(&self) -> &[Vec<Event>] {
        &self.components
    }

    pub fn boundary(&self) -> &[Endpoint] {
        &self.boundary
    }

    pub fn signs(&self) -> &BTreeMap<u32, Sign> {
        &self.signs
    }

    pub fn sign(&self, crossing: u32) -> Option<Sign> {
        self.signs.get(&crossing).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn crossing_count(&self) -> usize {
        self.signs.len()
    }

    pub fn passage_count(&self) -> usize {
        self.boundary.len() / 2
    }

    /// Per-component classes in H₁(RP³) = ℤ₂, and their sum.
    pub fn homology_class(&self) -> (Vec<u8>, u8) {
        let per: Vec<u8> = self
            .components
            .iter()
            .map(|w| (w.iter().filter(|e| matches!(e, Event::Pass(_))).count() % 2) as u8)
            .collect();
        let total = per.iter().fold(0u8, |acc, c| acc ^ c);
        (per, total)
    }

    /// Sorted per-component homology classes.
    pub fn homology_multiset(&self) -> Vec<u8> {
        let mut per = self.homology_class().0;
        per.sort_unstable();
        per
    }

    /// Signed crossing sum over all crossings.
    pub fn writhe(&self) -> i64 {
        self.signs.values().map(|s| s.value()).sum()
    }

    pub fn crossings(&self) -> Vec<Crossing> {
        let mut over = BTreeMap::new();
        let mut under = BTreeMap::new();
        for (c, w) in self.components.iter().enumerate() {
            for (i, e) in w.iter().enumerate() {
                let v = Visit { component: c, position: i };
                match e {
                    Event::Over(k) => {
                        over.insert(*k, v);
                    }
                    Event::Under(k) => {
                        under.insert(*k, v);
                    }
                    Event::Pass(_) => {}
                }
            }
        }
        self.signs
            .iter()
            .map(|(&id, &sign)| Crossing { id, sign, over: over[&id], under: under[&id] })
            .collect()
    }

    /// Component and position of every event of crossing `k` (over first).
    pub(crate) fn crossing_visits(&self, k: u32) -> Option<(Visit, Visit)> {
        let mut o = None;
        let mut u = None;
        for (c, w) in self.components.iter().enumerate() {
            for (i, e) in w.iter().enumerate() {
                match e {
                    Event::Over(x) if *x == k => o = Some(Visit { component: c, position: i }),
                    Event::Under(x) if *x == k => u = Some(Visit { component: c, position: i }),
                    _ => {}
                }
            }
        }
        Some((o?, u?))
    }

    pub(crate) fn passage_visit(&self, j: u32) -> Option<Visit> {
        for (c, w) in self.components.iter().enumerate() {
            for (i, e) in w.iter().enumerate() {
                if *e == Event::Pass(j) {
                    return Some(Visit { component: c, position: i });
                }
            }
        }
        None
    }

    pub(crate) fn boundary_position(&self, ep: Endpoint) -> Option<usize> {
        self.boundary.iter().position(|&b| b == ep)
    }

    /// All strand edges, including the single edge of an event-free component.
    pub fn edges(&self) -> Vec<EdgeRef> {
        let mut out = Vec::new();
        for (c, w) in self.components.iter().enumerate() {
            let m = w.len().max(1);
            out.extend((0..m).map(|index| EdgeRef { component: c, index }));
        }
        out
    }

    pub(crate) fn next_crossing_id(&self) -> u32 {
        self.signs.keys().next_back().map_or(1, |k| k + 1)
    }

    pub(crate) fn next_passage_id(&self) -> u32 {
        self.boundary.iter().map(|e| e.passage).max().map_or(1, |j| j + 1)
    }

    /// Consistency of ids and antipodality, then the face-trace Euler check.
    pub fn validate(&self) -> Result<(), DiagramError> {
        let mut over: BTreeMap<u32, usize> = BTreeMap::new();
        let mut under: BTreeMap<u32, usize> = BTreeMap::new();
        let mut passes: BTreeMap<u32, usize> = BTreeMap::new();
        for w in &self.components {
            for e in w {
                match e {
                    Event::Over(k) => *over.entry(*k).or_default() += 1,
                    Event::Under(k) => *under.entry(*k).or_default() += 1,
                    Event::Pass(j) => *passes.entry(*j).or_default() += 1,
                }
            }
        }
        for (&k, &n) in &over {
            if n != 1 {
                return Err(DiagramError::Consistency(format!("crossing {k} is visited as over {n} times")));
            }
        }
        for (&k, &n) in &under {
            if n != 1 {
                return Err(DiagramError::Consistency(format!("crossing {k} is visited as under {n} times")));
            }
        }
        for k in over.keys().chain(under.keys()) {
            if !(over.contains_key(k) && under.contains_key(k)) {
                return Err(DiagramError::Consistency(format!(
                    "crossing {k} must appear exactly twice, once over and once under"
                )));
            }
            if !self.signs.contains_key(k) {
                return Err(DiagramError::Consistency(format!("crossing {k} has no sign")));
            }
        }
        if let Some(k) = self.signs.keys().find(|k| !over.contains_key(k)) {
            return Err(DiagramError::Consistency(format!("crossing {k} is never visited")));
        }
        for (&j, &n) in &passes {
            if n != 1 {
                return Err(DiagramError::Consistency(format!(
                    "passage {j} appears {n} times in the component words"
                )));
            }
        }
        let len = self.boundary.len();
        if !len.is_multiple_of(2) {
            return Err(DiagramError::Consistency("boundary order has an odd number of endpoints".into()));
        }
        let half = len / 2;
        let mut seen: BTreeMap<u32, [Option<usize>; 2]> = BTreeMap::new();
        for (pos, ep) in self.boundary.iter().enumerate() {
            let slot = &mut seen.entry(ep.passage).or_default()[ep.end as usize];
            if slot.is_some() {
                return Err(DiagramError::Consistency(format!(
                    "endpoint {ep} appears twice in the boundary order"
                )));
            }
            *slot = Some(pos);
        }
        for (&j, ends) in &seen {
            let (Some(a), Some(b)) = (ends[0], ends[1]) else {
                return Err(DiagramError::Consistency(format!(
                    "passage {j} needs both endpoints {j}a and {j}b on the boundary"
                )));
            };
            if (a + half) % len != b {
                return Err(DiagramError::Consistency(format!("endpoints {j}a and {j}b are not antipodal")));
            }
            if !passes.contains_key(&j) {
                return Err(DiagramError::Consistency(format!(
                    "passage {j} is on the boundary but in no component"
                )));
            }
        }
        if let Some(j) = passes.keys().find(|j| !seen.contains_key(j)) {
            return Err(DiagramError::Consistency(format!("passage {j} has no endpoints on the boundary")));
        }
        map::HalfEdgeMap::build(self).check_euler()
    }

    /// The traced faces of the diagram's combinatorial map.
    pub fn faces(&self) -> FaceStructure {
        FaceStructure::new(self)
    }
}

impl fmt::Display for ProjectiveDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_diagram(self))
    }
}
