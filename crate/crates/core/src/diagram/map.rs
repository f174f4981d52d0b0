//! Combinatorial map of a diagram and face tracing.
//!
//! Half-edge `2e` is the tail of edge `e`, `2e + 1` its head. Strand edges
//! run along the component orientation, boundary edge `p` runs from
//! boundary position `p` to `p + 1` (counterclockwise). Faces are traced
//! with the face on the left of every traversed half-edge.

use std::collections::HashMap;

use super::{DiagramError, EdgeRef, End, Event, ProjectiveDiagram, SideRef, Sign};

/// The four edge-ends at a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeEnd {
    OverIn,
    OverOut,
    UnderIn,
    UnderOut,
}

impl EdgeEnd {
    pub fn label(self) -> &'static str {
        match self {
            EdgeEnd::OverIn => "oi",
            EdgeEnd::OverOut => "oo",
            EdgeEnd::UnderIn => "ui",
            EdgeEnd::UnderOut => "uo",
        }
    }

    pub fn from_label(s: &str) -> Option<EdgeEnd> {
        match s {
            "oi" => Some(EdgeEnd::OverIn),
            "oo" => Some(EdgeEnd::OverOut),
            "ui" => Some(EdgeEnd::UnderIn),
            "uo" => Some(EdgeEnd::UnderOut),
            _ => None,
        }
    }

    /// Counterclockwise order of the edge-ends around a crossing of the given sign.
    pub fn rotation(sign: Sign) -> [EdgeEnd; 4] {
        use EdgeEnd::*;
        match sign {
            Sign::Pos => [OverOut, UnderOut, OverIn, UnderIn],
            Sign::Neg => [OverOut, UnderIn, OverIn, UnderOut],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum EdgeKey {
    Strand(EdgeRef),
    Boundary(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Vertex {
    Crossing(u32),
    Endpoint(usize),
}

pub(crate) struct HalfEdgeMap {
    pub edges: Vec<EdgeKey>,
    pub vertex: Vec<usize>,
    pub vertices: Vec<Vertex>,
    rot_prev: Vec<usize>,
    /// Components without events.
    pub free_loops: Vec<usize>,
}

impl HalfEdgeMap {
    pub fn build(d: &ProjectiveDiagram) -> Self {
        let comps = d.components();
        let mut edges = Vec::new();
        let mut base = vec![usize::MAX; comps.len()];
        let mut free_loops = Vec::new();
        for (c, w) in comps.iter().enumerate() {
            if w.is_empty() {
                free_loops.push(c);
                continue;
            }
            base[c] = edges.len();
            edges.extend((0..w.len()).map(|index| EdgeKey::Strand(EdgeRef { component: c, index })));
        }
        let bnd_base = edges.len();
        let len = d.boundary().len();
        edges.extend((0..len).map(EdgeKey::Boundary));

        let mut vertices = Vec::new();
        let mut crossing_vertex = HashMap::new();
        for &k in d.signs().keys() {
            crossing_vertex.insert(k, vertices.len());
            vertices.push(Vertex::Crossing(k));
        }
        let endpoint_base = vertices.len();
        vertices.extend((0..len).map(Vertex::Endpoint));
        let mut pos_of = HashMap::new();
        for (p, ep) in d.boundary().iter().enumerate() {
            pos_of.insert((ep.passage, ep.end), p);
        }

        let tail = |e: usize| 2 * e;
        let head = |e: usize| 2 * e + 1;
        let mut vertex = vec![usize::MAX; 2 * edges.len()];
        for (c, w) in comps.iter().enumerate() {
            let m = w.len();
            for i in 0..m {
                let e = base[c] + i;
                vertex[tail(e)] = match w[i] {
                    Event::Over(k) | Event::Under(k) => crossing_vertex[&k],
                    Event::Pass(j) => endpoint_base + pos_of[&(j, End::B)],
                };
                vertex[head(e)] = match w[(i + 1) % m] {
                    Event::Over(k) | Event::Under(k) => crossing_vertex[&k],
                    Event::Pass(j) => endpoint_base + pos_of[&(j, End::A)],
                };
            }
        }
        for p in 0..len {
            let e = bnd_base + p;
            vertex[tail(e)] = endpoint_base + p;
            vertex[head(e)] = endpoint_base + (p + 1) % len;
        }

        let mut rotations: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
        let mut ends: HashMap<u32, [usize; 4]> = HashMap::new();
        for (c, w) in comps.iter().enumerate() {
            let m = w.len();
            for (i, ev) in w.iter().enumerate() {
                let out_h = tail(base[c] + i);
                let in_h = head(base[c] + (i + m - 1) % m);
                match *ev {
                    Event::Over(k) => {
                        let slot = ends.entry(k).or_insert([usize::MAX; 4]);
                        slot[0] = in_h;
                        slot[1] = out_h;
                    }
                    Event::Under(k) => {
                        let slot = ends.entry(k).or_insert([usize::MAX; 4]);
                        slot[2] = in_h;
                        slot[3] = out_h;
                    }
                    Event::Pass(j) => {
                        for end in [End::A, End::B] {
                            let p = pos_of[&(j, end)];
                            let strand = if end == End::A { in_h } else { out_h };
                            let prev = (p + len - 1) % len;
                            rotations[endpoint_base + p] =
                                vec![tail(bnd_base + p), strand, head(bnd_base + prev)];
                        }
                    }
                }
            }
        }
        for (&k, &[oi, oo, ui, uo]) in &ends {
            let lookup = |end: EdgeEnd| match end {
                EdgeEnd::OverIn => oi,
                EdgeEnd::OverOut => oo,
                EdgeEnd::UnderIn => ui,
                EdgeEnd::UnderOut => uo,
            };
            let sign = d.signs()[&k];
            rotations[crossing_vertex[&k]] = EdgeEnd::rotation(sign).iter().map(|&e| lookup(e)).collect();
        }

        let mut rot_prev = vec![usize::MAX; 2 * edges.len()];
        for rot in &rotations {
            let n = rot.len();
            for i in 0..n {
                rot_prev[rot[i]] = rot[(i + n - 1) % n];
            }
        }
        HalfEdgeMap { edges, vertex, vertices, rot_prev, free_loops }
    }

    pub fn next(&self, h: usize) -> usize {
        self.rot_prev[h ^ 1]
    }

    /// Face cycles as lists of half-edges, in order of their smallest member.
    pub fn trace_faces(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex.len()];
        let mut faces = Vec::new();
        for start in 0..self.vertex.len() {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                face.push(h);
                h = self.next(h);
            }
            faces.push(face);
        }
        faces
    }

    /// Connected piece index of every vertex, plus the number of pieces.
    pub fn vertex_pieces(&self) -> (Vec<usize>, usize) {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in 0..self.edges.len() {
            let a = find(&mut parent, self.vertex[2 * e]);
            let b = find(&mut parent, self.vertex[2 * e + 1]);
            parent[a] = b;
        }
        let mut label = HashMap::new();
        let mut out = vec![0; n];
        for (v, slot) in out.iter_mut().enumerate() {
            let r = find(&mut parent, v);
            let next = label.len();
            *slot = *label.entry(r).or_insert(next);
        }
        (out, label.len())
    }

    /// Every connected piece must be a sphere: V − E + F = 2, which for the
    /// piece holding the boundary circle is V − E + F = 1 with the outer
    /// face left out.
    pub fn check_euler(&self) -> Result<(), DiagramError> {
        let (piece, count) = self.vertex_pieces();
        let mut v = vec![0i64; count];
        let mut e = vec![0i64; count];
        let mut f = vec![0i64; count];
        for &p in &piece {
            v[p] += 1;
        }
        for i in 0..self.edges.len() {
            e[piece[self.vertex[2 * i]]] += 1;
        }
        for face in self.trace_faces() {
            f[piece[self.vertex[face[0]]]] += 1;
        }
        for p in 0..count {
            let chi = v[p] - e[p] + f[p];
            if chi != 2 {
                return Err(DiagramError::Embedding(format!(
                    "face tracing gives V - E + F = {} (V={}, E={}, F={}) on a connected piece",
                    chi, v[p], e[p], f[p]
                )));
            }
        }
        Ok(())
    }
}

/// A side of a face: a strand edge seen from one of its sides, or a stretch
/// of the boundary circle between two consecutive endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceSide {
    Strand(SideRef),
    /// Boundary gap `p`, between positions `p` and `p + 1`; `forward` is
    /// counterclockwise, which is how interior faces see it.
    Boundary {
        gap: usize,
        forward: bool,
    },
}

#[derive(Clone, Debug)]
pub struct Face {
    pub sides: Vec<FaceSide>,
    pub piece: usize,
    /// Half-edges of the face in walking order; empty for free loops.
    pub(crate) halves: Vec<usize>,
}

/// Faces of a diagram grouped into connected pieces. The piece holding the
/// boundary circle (if there are passages) is the main piece; every other
/// piece floats and may sit inside any face of the rest.
pub struct FaceStructure {
    pub faces: Vec<Face>,
    pub main_piece: Option<usize>,
    pub piece_count: usize,
    side_face: HashMap<SideRef, usize>,
    gap_face: HashMap<usize, usize>,
    pub(crate) map: HalfEdgeMap,
}

impl FaceStructure {
    pub fn new(d: &ProjectiveDiagram) -> Self {
        let map = HalfEdgeMap::build(d);
        let (vpiece, mut piece_count) = map.vertex_pieces();
        let main_piece =
            map.vertices.iter().position(|v| matches!(v, Vertex::Endpoint(_))).map(|i| vpiece[i]);
        let mut faces = Vec::new();
        let mut side_face = HashMap::new();
        let mut gap_face = HashMap::new();
        for halves in map.trace_faces() {
            let idx = faces.len();
            let sides: Vec<FaceSide> = halves
                .iter()
                .map(|&h| {
                    let forward = h % 2 == 0;
                    match map.edges[h / 2] {
                        EdgeKey::Strand(edge) => {
                            let s = SideRef { edge, left: forward };
                            side_face.insert(s, idx);
                            FaceSide::Strand(s)
                        }
                        EdgeKey::Boundary(gap) => {
                            if forward {
                                gap_face.insert(gap, idx);
                            }
                            FaceSide::Boundary { gap, forward }
                        }
                    }
                })
                .collect();
            faces.push(Face { sides, piece: vpiece[map.vertex[halves[0]]], halves });
        }
        for &c in &map.free_loops {
            let piece = piece_count;
            piece_count += 1;
            for left in [true, false] {
                let s = SideRef { edge: EdgeRef { component: c, index: 0 }, left };
                side_face.insert(s, faces.len());
                faces.push(Face { sides: vec![FaceSide::Strand(s)], piece, halves: vec![] });
            }
        }
        FaceStructure { faces, main_piece, piece_count, side_face, gap_face, map }
    }

    pub fn face_of(&self, side: SideRef) -> Option<usize> {
        self.side_face.get(&side).copied()
    }

    /// The interior face along boundary gap `p`.
    pub fn gap_face(&self, gap: usize) -> Option<usize> {
        self.gap_face.get(&gap).copied()
    }

    pub fn piece_of(&self, side: SideRef) -> Option<usize> {
        self.face_of(side).map(|f| self.faces[f].piece)
    }

    pub fn is_floating(&self, piece: usize) -> bool {
        Some(piece) != self.main_piece
    }

    /// All strand sides in a deterministic order.
    pub fn strand_sides(&self) -> Vec<SideRef> {
        let mut v: Vec<SideRef> = self.side_face.keys().copied().collect();
        v.sort();
        v
    }

    pub(crate) fn half_vertex(&self, h: usize) -> Vertex {
        self.map.vertices[self.map.vertex[h]]
    }
}
