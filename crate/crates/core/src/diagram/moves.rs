//! The five-move calculus for diagrams in the disk with antipodal boundary.
//!
//! R1 to R3 are the ordinary Reidemeister moves. R4 pushes a crossing that
//! sits next to the boundary through it: the two strands swap their
//! endpoints on both sides of the boundary and the crossing reappears at the
//! antipodal gap with over and under exchanged, since the fibre direction of
//! RP³ minus a point flips across the line at infinity. R5 pushes a finger of
//! a strand through the boundary, adding (or cancelling) two passages of the
//! same strand whose endpoints are adjacent.
//!
//! Move parameters refer to the labels and edge indices of the diagram the
//! move is applied to.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use super::map::{FaceSide, FaceStructure, Vertex};
use super::{canonical_form, DiagramError, EdgeRef, End, Endpoint, Event, ProjectiveDiagram, SideRef, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveFamily {
    R1,
    R2,
    R3,
    R4,
    R5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    /// Add a kink of the given sign on `edge`, in the face on the given side.
    R1Add {
        edge: EdgeRef,
        left: bool,
        sign: Sign,
    },
    R1Remove {
        crossing: u32,
    },
    /// Push a finger from `first` across `second`; both sides must border
    /// the same face, or lie in different connected pieces.
    R2Add {
        first: SideRef,
        second: SideRef,
        first_over: bool,
    },
    R2Remove {
        crossings: (u32, u32),
    },
    /// Slide a strand across the crossing opposite it in the triangular
    /// face bordered by `side`.
    R3 {
        side: SideRef,
    },
    /// Push `crossing` through boundary gap `gap`.
    R4 {
        crossing: u32,
        gap: usize,
    },
    /// Push a finger of the strand at `side` through boundary gap `gap`.
    R5Add {
        side: SideRef,
        gap: usize,
    },
    /// Cancel consecutive passages `passages.0`, `passages.1` of one strand.
    R5Remove {
        passages: (u32, u32),
    },
}

impl MoveKind {
    pub fn family(&self) -> MoveFamily {
        match self {
            MoveKind::R1Add { .. } | MoveKind::R1Remove { .. } => MoveFamily::R1,
            MoveKind::R2Add { .. } | MoveKind::R2Remove { .. } => MoveFamily::R2,
            MoveKind::R3 { .. } => MoveFamily::R3,
            MoveKind::R4 { .. } => MoveFamily::R4,
            MoveKind::R5Add { .. } | MoveKind::R5Remove { .. } => MoveFamily::R5,
        }
    }

    fn tag(&self) -> u8 {
        match self {
            MoveKind::R1Add { .. } => 0,
            MoveKind::R1Remove { .. } => 1,
            MoveKind::R2Add { .. } => 2,
            MoveKind::R2Remove { .. } => 3,
            MoveKind::R3 { .. } => 4,
            MoveKind::R4 { .. } => 5,
            MoveKind::R5Add { .. } => 6,
            MoveKind::R5Remove { .. } => 7,
        }
    }

    fn inverse_tag(&self) -> u8 {
        match self.tag() {
            t @ (4 | 5) => t,
            t if t % 2 == 0 => t + 1,
            t => t - 1,
        }
    }
}

fn side_label(s: SideRef) -> String {
    format!("c{}e{}{}", s.edge.component, s.edge.index, if s.left { "L" } else { "R" })
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MoveKind::R1Add { edge, left, sign } => write!(
                f,
                "R1 add {} kink on c{}e{} {}",
                sign.symbol(),
                edge.component,
                edge.index,
                if left { "left" } else { "right" }
            ),
            MoveKind::R1Remove { crossing } => write!(f, "R1 remove crossing {crossing}"),
            MoveKind::R2Add { first, second, first_over } => write!(
                f,
                "R2 add {} over {}",
                side_label(if first_over { first } else { second }),
                side_label(if first_over { second } else { first })
            ),
            MoveKind::R2Remove { crossings: (a, b) } => write!(f, "R2 remove crossings {a} {b}"),
            MoveKind::R3 { side } => write!(f, "R3 at triangle of {}", side_label(side)),
            MoveKind::R4 { crossing, gap } => {
                write!(f, "R4 crossing {crossing} through boundary gap {gap}")
            }
            MoveKind::R5Add { side, gap } => {
                write!(f, "R5 add finger from {} through boundary gap {gap}", side_label(side))
            }
            MoveKind::R5Remove { passages: (a, b) } => write!(f, "R5 remove passages {a} {b}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("move not applicable: {0}")]
    NotApplicable(String),
    #[error("move produced an invalid diagram: {0}")]
    Invalid(#[from] DiagramError),
}

fn not_applicable<T>(msg: impl Into<String>) -> Result<T, MoveError> {
    Err(MoveError::NotApplicable(msg.into()))
}

/// Upper bounds on the size of diagrams reachable by enumerated moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveCap {
    pub max_crossings: Option<usize>,
    pub max_passages: Option<usize>,
}

impl MoveCap {
    pub fn unbounded() -> Self {
        MoveCap { max_crossings: None, max_passages: None }
    }

    /// Crossings and passages may grow by `slack` over the larger of the two diagrams.
    pub fn for_pair(a: &ProjectiveDiagram, b: &ProjectiveDiagram, slack: usize) -> Self {
        MoveCap {
            max_crossings: Some(a.crossing_count().max(b.crossing_count()) + slack),
            max_passages: Some(a.passage_count().max(b.passage_count()) + slack),
        }
    }

    pub fn around(d: &ProjectiveDiagram, slack: usize) -> Self {
        MoveCap::for_pair(d, d, slack)
    }

    fn allows(&self, d: &ProjectiveDiagram, crossings: usize, passages: usize) -> bool {
        self.max_crossings.is_none_or(|m| d.crossing_count() + crossings <= m)
            && self.max_passages.is_none_or(|m| d.passage_count() + passages <= m)
    }
}

/// Word surgery: replace single events and insert runs inside edges.
struct Rewrite<'a> {
    d: &'a ProjectiveDiagram,
    replace: HashMap<(usize, usize), Vec<Event>>,
    insert: HashMap<EdgeRef, Vec<Event>>,
}

impl<'a> Rewrite<'a> {
    fn new(d: &'a ProjectiveDiagram) -> Self {
        Rewrite { d, replace: HashMap::new(), insert: HashMap::new() }
    }

    fn words(&self) -> Vec<Vec<Event>> {
        self.d
            .components()
            .iter()
            .enumerate()
            .map(|(c, w)| {
                let mut out = Vec::with_capacity(w.len() + 4);
                if w.is_empty() {
                    if let Some(ins) = self.insert.get(&EdgeRef { component: c, index: 0 }) {
                        out.extend_from_slice(ins);
                    }
                }
                for (i, &e) in w.iter().enumerate() {
                    match self.replace.get(&(c, i)) {
                        Some(r) => out.extend_from_slice(r),
                        None => out.push(e),
                    }
                    if let Some(ins) = self.insert.get(&EdgeRef { component: c, index: i }) {
                        out.extend_from_slice(ins);
                    }
                }
                out
            })
            .collect()
    }
}

fn edge_exists(d: &ProjectiveDiagram, e: EdgeRef) -> bool {
    d.components().get(e.component).is_some_and(|w| e.index < w.len().max(1))
}

/// The events at the tail and head of a strand edge.
fn edge_events(d: &ProjectiveDiagram, e: EdgeRef) -> Option<(Event, Event)> {
    let w = d.components().get(e.component)?;
    if w.is_empty() || e.index >= w.len() {
        return None;
    }
    Some((w[e.index], w[(e.index + 1) % w.len()]))
}

fn strand_sides(face: &[FaceSide]) -> Option<Vec<SideRef>> {
    face.iter()
        .map(|s| match s {
            FaceSide::Strand(s) => Some(*s),
            FaceSide::Boundary { .. } => None,
        })
        .collect()
}

/// Crossing pair `(a, b)` if the face is a bigon one of whose edges is over
/// at both ends and the other under at both ends.
fn bigon_site(d: &ProjectiveDiagram, face: &[FaceSide]) -> Option<(u32, u32)> {
    let sides = strand_sides(face)?;
    if sides.len() != 2 || sides[0].edge == sides[1].edge {
        return None;
    }
    let (x0, y0) = edge_events(d, sides[0].edge)?;
    let (x1, y1) = edge_events(d, sides[1].edge)?;
    let ids = |x: Event, y: Event| -> Option<(u32, u32)> {
        let (a, b) = (x.crossing()?, y.crossing()?);
        (a != b).then(|| (a.min(b), a.max(b)))
    };
    let p0 = ids(x0, y0)?;
    let p1 = ids(x1, y1)?;
    if p0 != p1 {
        return None;
    }
    let over0 = x0.is_over() && y0.is_over();
    let under0 = !x0.is_over() && !y0.is_over();
    let over1 = x1.is_over() && y1.is_over();
    let under1 = !x1.is_over() && !y1.is_over();
    ((over0 && under1) || (under0 && over1)).then_some(p0)
}

/// Edges of a triangular face if a strand may slide across it.
fn triangle_site(d: &ProjectiveDiagram, face: &[FaceSide]) -> Option<[EdgeRef; 3]> {
    let sides = strand_sides(face)?;
    if sides.len() != 3 {
        return None;
    }
    let edges = [sides[0].edge, sides[1].edge, sides[2].edge];
    if edges[0] == edges[1] || edges[1] == edges[2] || edges[0] == edges[2] {
        return None;
    }
    let mut count: HashMap<u32, usize> = HashMap::new();
    let mut has_top = false;
    for &e in &edges {
        let (x, y) = edge_events(d, e)?;
        let (a, b) = (x.crossing()?, y.crossing()?);
        if a == b {
            return None;
        }
        *count.entry(a).or_default() += 1;
        *count.entry(b).or_default() += 1;
        has_top |= x.is_over() && y.is_over();
    }
    (count.len() == 3 && count.values().all(|&n| n == 2) && has_top).then_some(edges)
}

struct BoundaryTriangle {
    crossing: u32,
    /// Strand dart arriving at endpoint `gap`, from the crossing.
    into_gap: SideRef,
    /// Strand dart leaving endpoint `gap + 1`, towards the crossing.
    out_of_gap: SideRef,
}

fn boundary_triangle(d: &ProjectiveDiagram, fs: &FaceStructure, gap: usize) -> Option<BoundaryTriangle> {
    let f = &fs.faces[fs.gap_face(gap)?];
    if f.sides.len() != 3 {
        return None;
    }
    let idx = f.sides.iter().position(|s| *s == FaceSide::Boundary { gap, forward: true })?;
    let h_out = f.halves[(idx + 1) % 3];
    let h_in = f.halves[(idx + 2) % 3];
    let (FaceSide::Strand(out_of_gap), FaceSide::Strand(into_gap)) =
        (f.sides[(idx + 1) % 3], f.sides[(idx + 2) % 3])
    else {
        return None;
    };
    let (Vertex::Crossing(x1), Vertex::Crossing(x2)) = (fs.half_vertex(h_in), fs.half_vertex(h_out ^ 1))
    else {
        return None;
    };
    if x1 != x2 {
        return None;
    }
    let len = d.boundary().len();
    if d.boundary()[gap].passage == d.boundary()[(gap + 1) % len].passage {
        return None;
    }
    Some(BoundaryTriangle { crossing: x1, into_gap, out_of_gap })
}

fn r5_remove_applicable(d: &ProjectiveDiagram, j1: u32, j2: u32) -> bool {
    if j1 == j2 {
        return false;
    }
    let (Some(v1), Some(v2)) = (d.passage_visit(j1), d.passage_visit(j2)) else {
        return false;
    };
    let m = d.components()[v1.component].len();
    if v1.component != v2.component || (v1.position + 1) % m != v2.position {
        return false;
    }
    let len = d.boundary().len();
    let b1 = d.boundary_position(Endpoint::new(j1, End::B)).unwrap();
    let a2 = d.boundary_position(Endpoint::new(j2, End::A)).unwrap();
    (b1 + 1) % len == a2 || (a2 + 1) % len == b1
}

fn finish(
    d: &ProjectiveDiagram,
    rw: &Rewrite,
    signs: std::collections::BTreeMap<u32, Sign>,
    boundary: Vec<Endpoint>,
) -> Result<ProjectiveDiagram, MoveError> {
    let _ = d;
    Ok(ProjectiveDiagram::new(rw.words(), signs, boundary)?)
}

pub fn apply_move(d: &ProjectiveDiagram, m: &MoveKind) -> Result<ProjectiveDiagram, MoveError> {
    match *m {
        MoveKind::R1Add { edge, left, sign } => {
            if !edge_exists(d, edge) {
                return not_applicable(format!("no edge c{}e{}", edge.component, edge.index));
            }
            let k = d.next_crossing_id();
            let over_first = left != (sign == Sign::Pos);
            let run = if over_first {
                vec![Event::Over(k), Event::Under(k)]
            } else {
                vec![Event::Under(k), Event::Over(k)]
            };
            let mut rw = Rewrite::new(d);
            rw.insert.insert(edge, run);
            let mut signs = d.signs().clone();
            signs.insert(k, sign);
            finish(d, &rw, signs, d.boundary().to_vec())
        }
        MoveKind::R1Remove { crossing } => {
            let Some((o, u)) = d.crossing_visits(crossing) else {
                return not_applicable(format!("no crossing {crossing}"));
            };
            let len = d.components()[o.component].len();
            let consecutive = o.component == u.component
                && ((o.position + 1) % len == u.position || (u.position + 1) % len == o.position);
            if !consecutive {
                return not_applicable(format!("crossing {crossing} is not a kink"));
            }
            let mut rw = Rewrite::new(d);
            rw.replace.insert((o.component, o.position), vec![]);
            rw.replace.insert((u.component, u.position), vec![]);
            let mut signs = d.signs().clone();
            signs.remove(&crossing);
            finish(d, &rw, signs, d.boundary().to_vec())
        }
        MoveKind::R2Add { first, second, first_over } => apply_r2_add(d, first, second, first_over),
        MoveKind::R2Remove { crossings: (a, b) } => {
            let fs = d.faces();
            let found = fs.faces.iter().any(|f| bigon_site(d, &f.sides) == Some((a.min(b), a.max(b))));
            if !found {
                return not_applicable(format!("crossings {a}, {b} do not bound a removable bigon"));
            }
            let mut rw = Rewrite::new(d);
            for k in [a, b] {
                let (o, u) = d.crossing_visits(k).unwrap();
                rw.replace.insert((o.component, o.position), vec![]);
                rw.replace.insert((u.component, u.position), vec![]);
            }
            let mut signs = d.signs().clone();
            signs.remove(&a);
            signs.remove(&b);
            finish(d, &rw, signs, d.boundary().to_vec())
        }
        MoveKind::R3 { side } => {
            let fs = d.faces();
            let Some(f) = fs.face_of(side) else {
                return not_applicable("no such side");
            };
            let Some(edges) = triangle_site(d, &fs.faces[f].sides) else {
                return not_applicable("side does not border a movable triangle");
            };
            let mut rw = Rewrite::new(d);
            for e in edges {
                let w = &d.components()[e.component];
                let j = (e.index + 1) % w.len();
                rw.replace.insert((e.component, e.index), vec![w[j]]);
                rw.replace.insert((e.component, j), vec![w[e.index]]);
            }
            finish(d, &rw, d.signs().clone(), d.boundary().to_vec())
        }
        MoveKind::R4 { crossing, gap } => {
            let len = d.boundary().len();
            if gap >= len {
                return not_applicable(format!("no boundary gap {gap}"));
            }
            let fs = d.faces();
            let Some(tri) = boundary_triangle(d, &fs, gap) else {
                return not_applicable(format!("gap {gap} has no adjacent crossing"));
            };
            if tri.crossing != crossing {
                return not_applicable(format!("crossing {crossing} is not next to gap {gap}"));
            }
            let mut rw = Rewrite::new(d);
            for side in [tri.into_gap, tri.out_of_gap] {
                let e = side.edge;
                let w = &d.components()[e.component];
                let (i, j) = (e.index, (e.index + 1) % w.len());
                let (xpos, wpos, x_first) =
                    if w[i].crossing() == Some(crossing) { (i, j, true) } else { (j, i, false) };
                let moved = match w[xpos] {
                    Event::Over(k) => Event::Under(k),
                    Event::Under(k) => Event::Over(k),
                    Event::Pass(_) => unreachable!(),
                };
                rw.replace.insert((e.component, xpos), vec![]);
                let run = if x_first { vec![w[wpos], moved] } else { vec![moved, w[wpos]] };
                rw.replace.insert((e.component, wpos), run);
            }
            let k = len / 2;
            let mut boundary = d.boundary().to_vec();
            boundary.swap(gap, (gap + 1) % len);
            boundary.swap((gap + k) % len, (gap + k + 1) % len);
            finish(d, &rw, d.signs().clone(), boundary)
        }
        MoveKind::R5Add { side, gap } => {
            let fs = d.faces();
            let Some(f) = fs.face_of(side) else {
                return not_applicable("no such side");
            };
            let len = d.boundary().len();
            let floating = fs.is_floating(fs.faces[f].piece);
            let reachable = if floating { gap < len.max(1) } else { fs.gap_face(gap) == Some(f) };
            if !reachable {
                return not_applicable(format!("boundary gap {gap} is not in the face of the side"));
            }
            let j1 = d.next_passage_id();
            let j2 = j1 + 1;
            let (a1, a1_far, a2, a2_far) = if side.left {
                (
                    Endpoint::new(j1, End::A),
                    Endpoint::new(j1, End::B),
                    Endpoint::new(j2, End::B),
                    Endpoint::new(j2, End::A),
                )
            } else {
                (
                    Endpoint::new(j2, End::B),
                    Endpoint::new(j2, End::A),
                    Endpoint::new(j1, End::A),
                    Endpoint::new(j1, End::B),
                )
            };
            let boundary = if len == 0 {
                vec![a2, a1, a2_far, a1_far]
            } else {
                let far = (gap + len / 2) % len;
                let mut out = Vec::with_capacity(len + 4);
                for (q, &ep) in d.boundary().iter().enumerate() {
                    out.push(ep);
                    if q == gap {
                        out.extend([a2, a1]);
                    }
                    if q == far {
                        out.extend([a2_far, a1_far]);
                    }
                }
                out
            };
            let mut rw = Rewrite::new(d);
            rw.insert.insert(side.edge, vec![Event::Pass(j1), Event::Pass(j2)]);
            finish(d, &rw, d.signs().clone(), boundary)
        }
        MoveKind::R5Remove { passages: (j1, j2) } => {
            if !r5_remove_applicable(d, j1, j2) {
                return not_applicable(format!("passages {j1}, {j2} do not cancel"));
            }
            let mut rw = Rewrite::new(d);
            for j in [j1, j2] {
                let v = d.passage_visit(j).unwrap();
                rw.replace.insert((v.component, v.position), vec![]);
            }
            let boundary =
                d.boundary().iter().copied().filter(|e| e.passage != j1 && e.passage != j2).collect();
            finish(d, &rw, d.signs().clone(), boundary)
        }
    }
}

type EventKind = fn(u32) -> Event;

fn apply_r2_add(
    d: &ProjectiveDiagram,
    first: SideRef,
    second: SideRef,
    first_over: bool,
) -> Result<ProjectiveDiagram, MoveError> {
    let fs = d.faces();
    let (Some(fa), Some(fb)) = (fs.face_of(first), fs.face_of(second)) else {
        return not_applicable("no such side");
    };
    if fa != fb && fs.faces[fa].piece == fs.faces[fb].piece {
        return not_applicable("sides do not share a face");
    }
    let x1 = d.next_crossing_id();
    let x2 = x1 + 1;
    let eps = |s: SideRef| if s.left { 1 } else { -1 };
    let s1 = Sign::from_value(eps(first) * eps(second) * if first_over { 1 } else { -1 }).unwrap();
    let (a_kind, b_kind): (EventKind, EventKind) =
        if first_over { (Event::Over, Event::Under) } else { (Event::Under, Event::Over) };
    // Walking along each side with the face on the left, the finger from
    // `first` meets X1 then X2 and `second` meets X2 then X1.
    let walk_a = vec![a_kind(x1), a_kind(x2)];
    let walk_b = vec![b_kind(x2), b_kind(x1)];
    let along = |mut run: Vec<Event>, left: bool| {
        if !left {
            run.reverse();
        }
        run
    };
    let mut signs = d.signs().clone();
    signs.insert(x1, s1);
    signs.insert(x2, s1.flip());

    let candidates: Vec<HashMap<EdgeRef, Vec<Event>>> = if first.edge != second.edge {
        let mut ins = HashMap::new();
        ins.insert(first.edge, along(walk_a, first.left));
        ins.insert(second.edge, along(walk_b, second.left));
        vec![ins]
    } else {
        let (ra, rb) = if first == second {
            let mut both = walk_a.clone();
            both.extend(walk_b.iter().copied());
            let whole = along(both, first.left);
            let mut swapped = walk_b.clone();
            swapped.extend(walk_a.iter().copied());
            (whole, along(swapped, first.left))
        } else {
            let a = along(walk_a, first.left);
            let b = along(walk_b, second.left);
            let mut ab = a.clone();
            ab.extend(b.iter().copied());
            let mut ba = b;
            ba.extend(a);
            (ab, ba)
        };
        [ra, rb]
            .into_iter()
            .map(|run| {
                let mut ins = HashMap::new();
                ins.insert(first.edge, run);
                ins
            })
            .collect()
    };
    let single = candidates.len() == 1;
    let mut last_err = None;
    for ins in candidates {
        let mut rw = Rewrite::new(d);
        rw.insert = ins;
        match ProjectiveDiagram::new(rw.words(), signs.clone(), d.boundary().to_vec()) {
            Ok(out) => {
                if single {
                    return Ok(out);
                }
                let fs = out.faces();
                if fs.faces.iter().any(|f| bigon_site(&out, &f.sides) == Some((x1, x2))) {
                    return Ok(out);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(MoveError::Invalid(
        last_err.unwrap_or_else(|| DiagramError::Embedding("finger move produced no removable bigon".into())),
    ))
}

fn enumerate_filtered(d: &ProjectiveDiagram, cap: MoveCap, want: impl Fn(u8) -> bool) -> Vec<MoveKind> {
    let fs = d.faces();
    let mut out = Vec::new();
    if want(0) && cap.allows(d, 1, 0) {
        for edge in d.edges() {
            for left in [true, false] {
                for sign in [Sign::Pos, Sign::Neg] {
                    out.push(MoveKind::R1Add { edge, left, sign });
                }
            }
        }
    }
    if want(1) {
        for c in d.crossings() {
            let len = d.components()[c.over.component].len();
            if c.over.component == c.under.component
                && ((c.over.position + 1) % len == c.under.position
                    || (c.under.position + 1) % len == c.over.position)
            {
                out.push(MoveKind::R1Remove { crossing: c.id });
            }
        }
    }
    let sides = fs.strand_sides();
    if want(2) && cap.allows(d, 2, 0) {
        for (i, &s) in sides.iter().enumerate() {
            let (fa, pa) = (fs.face_of(s).unwrap(), fs.piece_of(s).unwrap());
            for &t in &sides[i..] {
                let (fb, pb) = (fs.face_of(t).unwrap(), fs.piece_of(t).unwrap());
                if fa == fb || pa != pb {
                    for first_over in [true, false] {
                        out.push(MoveKind::R2Add { first: s, second: t, first_over });
                    }
                }
            }
        }
    }
    if want(3) || want(4) {
        for f in &fs.faces {
            if want(3) {
                if let Some(crossings) = bigon_site(d, &f.sides) {
                    out.push(MoveKind::R2Remove { crossings });
                }
            }
            if want(4) && triangle_site(d, &f.sides).is_some() {
                let side = strand_sides(&f.sides).unwrap().into_iter().min().unwrap();
                out.push(MoveKind::R3 { side });
            }
        }
    }
    let len = d.boundary().len();
    if want(5) {
        for gap in 0..len {
            if let Some(tri) = boundary_triangle(d, &fs, gap) {
                out.push(MoveKind::R4 { crossing: tri.crossing, gap });
            }
        }
    }
    if want(6) && cap.allows(d, 0, 2) {
        for &s in &sides {
            let f = fs.face_of(s).unwrap();
            if fs.is_floating(fs.faces[f].piece) {
                for gap in 0..len.max(1) {
                    out.push(MoveKind::R5Add { side: s, gap });
                }
            } else {
                for gap in 0..len {
                    if fs.gap_face(gap) == Some(f) {
                        out.push(MoveKind::R5Add { side: s, gap });
                    }
                }
            }
        }
    }
    if want(7) {
        for w in d.components() {
            let m = w.len();
            if m < 2 {
                continue;
            }
            for i in 0..m {
                if let (Event::Pass(j1), Event::Pass(j2)) = (w[i], w[(i + 1) % m]) {
                    if r5_remove_applicable(d, j1, j2) {
                        out.push(MoveKind::R5Remove { passages: (j1, j2) });
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Every move applicable to `d` whose result stays within `cap`, sorted.
pub fn enumerate_moves(d: &ProjectiveDiagram, cap: MoveCap) -> Vec<MoveKind> {
    enumerate_filtered(d, cap, |_| true)
}

pub fn enumerate_moves_of_family(d: &ProjectiveDiagram, family: MoveFamily, cap: MoveCap) -> Vec<MoveKind> {
    let tags: &[u8] = match family {
        MoveFamily::R1 => &[0, 1],
        MoveFamily::R2 => &[2, 3],
        MoveFamily::R3 => &[4],
        MoveFamily::R4 => &[5],
        MoveFamily::R5 => &[6, 7],
    };
    enumerate_filtered(d, cap, |t| tags.contains(&t))
}

/// Edges of the rewritten diagram that absorbed removed events: for every
/// removed position, the edge starting at the nearest surviving event before it.
fn merged_edges(d: &ProjectiveDiagram, removed: &BTreeSet<(usize, usize)>) -> Vec<EdgeRef> {
    let mut out = BTreeSet::new();
    for &(c, pos) in removed {
        let w = &d.components()[c];
        let m = w.len();
        let surviving: Vec<usize> = (0..m).filter(|&i| !removed.contains(&(c, i))).collect();
        if surviving.is_empty() {
            out.insert(EdgeRef { component: c, index: 0 });
            continue;
        }
        let mut q = pos;
        loop {
            q = (q + m - 1) % m;
            if !removed.contains(&(c, q)) {
                break;
            }
        }
        let index = surviving.iter().position(|&i| i == q).unwrap();
        out.insert(EdgeRef { component: c, index });
    }
    out.into_iter().collect()
}

fn inverse_candidates(d: &ProjectiveDiagram, m: &MoveKind, result: &ProjectiveDiagram) -> Vec<MoveKind> {
    let sides_of = |edges: &[EdgeRef]| -> Vec<SideRef> {
        edges.iter().flat_map(|&edge| [true, false].map(|left| SideRef { edge, left })).collect()
    };
    match *m {
        MoveKind::R1Add { .. } => vec![MoveKind::R1Remove { crossing: d.next_crossing_id() }],
        MoveKind::R2Add { .. } => {
            let x = d.next_crossing_id();
            vec![MoveKind::R2Remove { crossings: (x, x + 1) }]
        }
        MoveKind::R5Add { .. } => {
            let j = d.next_passage_id();
            vec![MoveKind::R5Remove { passages: (j, j + 1) }]
        }
        MoveKind::R1Remove { crossing } => {
            let (o, u) = d.crossing_visits(crossing).unwrap();
            let removed = [(o.component, o.position), (u.component, u.position)].into();
            let sign = d.sign(crossing).unwrap();
            sides_of(&merged_edges(d, &removed))
                .into_iter()
                .map(|s| MoveKind::R1Add { edge: s.edge, left: s.left, sign })
                .collect()
        }
        MoveKind::R2Remove { crossings: (a, b) } => {
            let mut removed = BTreeSet::new();
            for k in [a, b] {
                let (o, u) = d.crossing_visits(k).unwrap();
                removed.insert((o.component, o.position));
                removed.insert((u.component, u.position));
            }
            let sides = sides_of(&merged_edges(d, &removed));
            let mut out = Vec::new();
            for &s in &sides {
                for &t in &sides {
                    for first_over in [true, false] {
                        out.push(MoveKind::R2Add { first: s, second: t, first_over });
                    }
                }
            }
            out
        }
        MoveKind::R3 { side } => {
            let fs = d.faces();
            let f = fs.face_of(side).unwrap();
            let edges = triangle_site(d, &fs.faces[f].sides).unwrap();
            sides_of(&edges).into_iter().map(|side| MoveKind::R3 { side }).collect()
        }
        MoveKind::R4 { crossing, gap } => {
            let len = d.boundary().len();
            vec![MoveKind::R4 { crossing, gap: (gap + len / 2) % len }]
        }
        MoveKind::R5Remove { passages: (j1, j2) } => {
            let mut removed = BTreeSet::new();
            for j in [j1, j2] {
                let v = d.passage_visit(j).unwrap();
                removed.insert((v.component, v.position));
            }
            let gaps = result.boundary().len().max(1);
            sides_of(&merged_edges(d, &removed))
                .into_iter()
                .flat_map(|side| (0..gaps).map(move |gap| MoveKind::R5Add { side, gap }))
                .collect()
        }
    }
}

/// A move on `apply_move(d, m)` that brings it back to `d` up to relabeling.
pub fn inverse_move(d: &ProjectiveDiagram, m: &MoveKind) -> Option<MoveKind> {
    let result = apply_move(d, m).ok()?;
    let target = canonical_form(d);
    let undoes = |c: &MoveKind| apply_move(&result, c).is_ok_and(|back| canonical_form(&back) == target);
    if let Some(c) = inverse_candidates(d, m, &result).into_iter().find(|c| undoes(c)) {
        return Some(c);
    }
    let tag = m.inverse_tag();
    enumerate_filtered(&result, MoveCap::unbounded(), |t| t == tag).into_iter().find(|c| undoes(c))
}

/// The first move of the inverse kind of `m` that takes `from` to a diagram
/// whose canonical form is `target`.
pub(crate) fn find_step(from: &ProjectiveDiagram, m: &MoveKind, target: &str) -> Option<MoveKind> {
    let tag = m.inverse_tag();
    enumerate_filtered(from, MoveCap::unbounded(), |t| t == tag)
        .into_iter()
        .find(|c| apply_move(from, c).is_ok_and(|r| canonical_form(&r) == target))
}
