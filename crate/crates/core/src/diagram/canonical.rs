//! Canonical relabeling.
//!
//! A diagram is encoded by choosing an order of its components and a start
//! event on each, numbering crossings and passages by first appearance, and
//! rotating the boundary circle. The canonical form is the lexicographically
//! least encoding. Components are compared block by block (length first), so
//! the least encoding can be found greedily, branching only on ties.

use std::collections::{BTreeMap, HashMap};

use super::{serialize_diagram, Endpoint, Event, ProjectiveDiagram};

#[derive(Clone)]
struct Labels {
    crossing: HashMap<u32, u32>,
    passage: HashMap<u32, u32>,
}

impl Labels {
    fn crossing(&mut self, k: u32) -> u32 {
        let next = self.crossing.len() as u32 + 1;
        *self.crossing.entry(k).or_insert(next)
    }

    fn passage(&mut self, j: u32) -> u32 {
        let next = self.passage.len() as u32 + 1;
        *self.passage.entry(j).or_insert(next)
    }
}

fn encode_block(d: &ProjectiveDiagram, word: &[Event], start: usize, labels: &mut Labels) -> Vec<u64> {
    let m = word.len();
    let mut out = Vec::with_capacity(m + 1);
    out.push(m as u64);
    for i in 0..m {
        let tok = match word[(start + i) % m] {
            Event::Over(k) => {
                let neg = (d.signs()[&k].value() < 0) as u64;
                (u64::from(labels.crossing(k)) << 3) | neg
            }
            Event::Under(k) => {
                let neg = (d.signs()[&k].value() < 0) as u64;
                (u64::from(labels.crossing(k)) << 3) | 2 | neg
            }
            Event::Pass(j) => (u64::from(labels.passage(j)) << 3) | 4,
        };
        out.push(tok);
    }
    out
}

#[derive(Clone)]
struct Partial {
    code: Vec<u64>,
    order: Vec<(usize, usize)>,
    labels: Labels,
}

fn extend(d: &ProjectiveDiagram, p: Partial, frontier: &mut Vec<Partial>) {
    let n = d.component_count();
    let used: Vec<bool> = (0..n).map(|c| p.order.iter().any(|&(u, _)| u == c)).collect();
    let mut best: Option<Vec<u64>> = None;
    let mut ties: Vec<((usize, usize), Labels)> = Vec::new();
    for c in (0..n).filter(|&c| !used[c]) {
        let w = &d.components()[c];
        for s in 0..w.len().max(1) {
            let mut labels = p.labels.clone();
            let block = encode_block(d, w, s, &mut labels);
            match best.as_ref().map(|b| block.cmp(b)) {
                Some(std::cmp::Ordering::Greater) => {}
                Some(std::cmp::Ordering::Equal) => ties.push(((c, s), labels)),
                _ => {
                    best = Some(block);
                    ties = vec![((c, s), labels)];
                }
            }
        }
    }
    let best = best.expect("a component remains");
    for (choice, labels) in ties {
        let mut code = p.code.clone();
        code.extend_from_slice(&best);
        let mut order = p.order.clone();
        order.push(choice);
        frontier.push(Partial { code, order, labels });
    }
}

fn boundary_tokens(d: &ProjectiveDiagram, labels: &Labels) -> Vec<u64> {
    d.boundary()
        .iter()
        .map(|ep| (u64::from(labels.passage[&ep.passage]) << 1) | (ep.end == super::End::B) as u64)
        .collect()
}

fn least_rotation(tokens: &[u64]) -> usize {
    (0..tokens.len().max(1))
        .min_by(|&a, &b| {
            let ra = tokens[a..].iter().chain(&tokens[..a]);
            let rb = tokens[b..].iter().chain(&tokens[..b]);
            ra.cmp(rb)
        })
        .unwrap_or(0)
}

/// The same diagram with components reordered and rotated and all labels
/// renumbered into canonical position.
pub fn canonicalize(d: &ProjectiveDiagram) -> ProjectiveDiagram {
    let n = d.component_count();
    let empty = Labels { crossing: HashMap::new(), passage: HashMap::new() };
    let mut frontier = vec![Partial { code: Vec::new(), order: Vec::new(), labels: empty }];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in frontier {
            extend(d, p, &mut next);
        }
        // Keep only the least partial codes; all survivors share one code
        // since every extension appends the same least block.
        let least = next.iter().map(|p| p.code.clone()).min().unwrap();
        next.retain(|p| p.code == least);
        frontier = next;
    }
    let (partial, rot) = frontier
        .into_iter()
        .map(|p| {
            let toks = boundary_tokens(d, &p.labels);
            let r = least_rotation(&toks);
            let rotated: Vec<u64> = toks[r..].iter().chain(&toks[..r]).copied().collect();
            (p, r, rotated)
        })
        .min_by(|a, b| a.2.cmp(&b.2))
        .map(|(p, r, _)| (p, r))
        .unwrap();

    let labels = partial.labels;
    let relabel = |e: Event| match e {
        Event::Over(k) => Event::Over(labels.crossing[&k]),
        Event::Under(k) => Event::Under(labels.crossing[&k]),
        Event::Pass(j) => Event::Pass(labels.passage[&j]),
    };
    let components = partial
        .order
        .iter()
        .map(|&(c, s)| {
            let w = &d.components()[c];
            let m = w.len();
            (0..m).map(|i| relabel(w[(s + i) % m])).collect()
        })
        .collect();
    let signs: BTreeMap<u32, _> = d.signs().iter().map(|(k, &s)| (labels.crossing[k], s)).collect();
    let b = d.boundary();
    let boundary = (0..b.len())
        .map(|i| {
            let ep = b[(rot + i) % b.len()];
            Endpoint::new(labels.passage[&ep.passage], ep.end)
        })
        .collect();
    ProjectiveDiagram::from_parts_unchecked(components, signs, boundary)
}

/// Text of the canonical relabeling; equal for diagrams that differ only in
/// labels, component order and starting points.
pub fn canonical_form(d: &ProjectiveDiagram) -> String {
    serialize_diagram(&canonicalize(d))
}
