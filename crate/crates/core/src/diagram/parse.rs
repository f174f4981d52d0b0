//! Line-oriented diagram text format.
//!
//! ```text
//! # a projective line with a positive kink
//! components: 1
//! c0: O1+ U1+ W2
//! boundary: 2a 2b
//! rot 1: oo uo oi ui
//! ```

use std::collections::{BTreeMap, BTreeSet};

use super::map::EdgeEnd;
use super::{DiagramError, End, Endpoint, Event, ProjectiveDiagram, Sign};

fn parse_number(s: &str, line: usize, what: &str) -> Result<u32, DiagramError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(DiagramError::syntax(line, format!("malformed {what} id `{s}`")));
    }
    s.parse().map_err(|_| DiagramError::syntax(line, format!("{what} id `{s}` out of range")))
}

fn parse_event(tok: &str, line: usize, signs: &mut BTreeMap<u32, Sign>) -> Result<Event, DiagramError> {
    let (Some(head), Some(rest)) = (tok.get(..1), tok.get(1..)) else {
        return Err(DiagramError::syntax(line, format!("unknown event `{tok}`")));
    };
    match head {
        "O" | "U" => {
            let sign = match rest.chars().last() {
                Some('+') => Sign::Pos,
                Some('-') => Sign::Neg,
                _ => {
                    return Err(DiagramError::syntax(
                        line,
                        format!("crossing visit `{tok}` needs a trailing + or -"),
                    ))
                }
            };
            let k = parse_number(&rest[..rest.len() - 1], line, "crossing")?;
            if let Some(prev) = signs.insert(k, sign) {
                if prev != sign {
                    return Err(DiagramError::Consistency(format!("crossing {k} is given both signs")));
                }
            }
            Ok(if head == "O" { Event::Over(k) } else { Event::Under(k) })
        }
        "W" => Ok(Event::Pass(parse_number(rest, line, "passage")?)),
        _ => Err(DiagramError::syntax(line, format!("unknown event `{tok}`"))),
    }
}

fn parse_endpoint(tok: &str, line: usize) -> Result<Endpoint, DiagramError> {
    let cut = tok.len().saturating_sub(1);
    let (Some(num), Some(end)) = (tok.get(..cut), tok.get(cut..)) else {
        return Err(DiagramError::syntax(line, format!("malformed endpoint `{tok}`")));
    };
    let end = match end {
        "a" => End::A,
        "b" => End::B,
        _ => return Err(DiagramError::syntax(line, format!("malformed endpoint `{tok}`"))),
    };
    Ok(Endpoint::new(parse_number(num, line, "passage")?, end))
}

pub fn parse_diagram(text: &str) -> Result<ProjectiveDiagram, DiagramError> {
    let mut declared: Option<(usize, usize)> = None;
    let mut labels = BTreeSet::new();
    let mut components = Vec::new();
    let mut signs = BTreeMap::new();
    let mut boundary: Option<Vec<Endpoint>> = None;
    let mut rotations: Vec<(usize, u32, Vec<EdgeEnd>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once(':') else {
            return Err(DiagramError::syntax(line, format!("expected `key: value`, got `{content}`")));
        };
        let key = key.trim();
        let value = value.trim();
        if key == "components" {
            if declared.is_some() {
                return Err(DiagramError::syntax(line, "duplicate `components` header"));
            }
            let n = value
                .parse()
                .map_err(|_| DiagramError::syntax(line, format!("bad component count `{value}`")))?;
            declared = Some((n, line));
        } else if key == "boundary" {
            if boundary.is_some() {
                return Err(DiagramError::syntax(line, "duplicate `boundary` line"));
            }
            boundary =
                Some(value.split_whitespace().map(|t| parse_endpoint(t, line)).collect::<Result<_, _>>()?);
        } else if let Some(k) = key.strip_prefix("rot ") {
            let k = parse_number(k.trim(), line, "crossing")?;
            let ends = value
                .split_whitespace()
                .map(|t| {
                    EdgeEnd::from_label(t)
                        .ok_or_else(|| DiagramError::syntax(line, format!("unknown edge-end `{t}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rotations.push((line, k, ends));
        } else if let Some(label) = key.strip_prefix('c') {
            parse_number(label, line, "component")?;
            if !labels.insert(label.to_string()) {
                return Err(DiagramError::syntax(line, format!("component c{label} given twice")));
            }
            let mut word = Vec::new();
            for tok in value.split_whitespace() {
                if tok == "(empty)" {
                    continue;
                }
                word.push(parse_event(tok, line, &mut signs)?);
            }
            components.push(word);
        } else {
            return Err(DiagramError::syntax(line, format!("unknown key `{key}`")));
        }
    }

    let Some((n, header_line)) = declared else {
        return Err(DiagramError::syntax(1, "missing `components: <n>` header"));
    };
    if n != components.len() {
        return Err(DiagramError::syntax(
            header_line,
            format!("header declares {n} components but {} are listed", components.len()),
        ));
    }
    let d = ProjectiveDiagram::new(components, signs, boundary.unwrap_or_default())?;

    for (line, k, ends) in rotations {
        let Some(sign) = d.sign(k) else {
            return Err(DiagramError::Consistency(format!("rotation given for unknown crossing {k}")));
        };
        let expected = EdgeEnd::rotation(sign);
        let distinct: BTreeSet<&str> = ends.iter().map(|e| e.label()).collect();
        if ends.len() != 4 || distinct.len() != 4 {
            return Err(DiagramError::syntax(line, "rotation needs the four edge-ends oi oo ui uo"));
        }
        let matches = (0..4).any(|r| (0..4).all(|i| ends[(i + r) % 4] == expected[i]));
        if !matches {
            return Err(DiagramError::Embedding(format!(
                "rotation at crossing {k} disagrees with its sign {}",
                sign.symbol()
            )));
        }
    }
    Ok(d)
}

fn event_token(d: &ProjectiveDiagram, e: Event) -> String {
    match e {
        Event::Over(k) => format!("O{}{}", k, d.signs()[&k].symbol()),
        Event::Under(k) => format!("U{}{}", k, d.signs()[&k].symbol()),
        Event::Pass(j) => format!("W{j}"),
    }
}

pub(crate) fn word_string(d: &ProjectiveDiagram, w: &[Event]) -> String {
    w.iter().map(|&e| event_token(d, e)).collect::<Vec<_>>().join(" ")
}

pub fn serialize_diagram(d: &ProjectiveDiagram) -> String {
    let mut out = format!("components: {}\n", d.component_count());
    for (i, w) in d.components().iter().enumerate() {
        let word = word_string(d, w);
        if word.is_empty() {
            out.push_str(&format!("c{i}:\n"));
        } else {
            out.push_str(&format!("c{i}: {word}\n"));
        }
    }
    if !d.boundary().is_empty() {
        let b: Vec<String> = d.boundary().iter().map(|e| e.to_string()).collect();
        out.push_str(&format!("boundary: {}\n", b.join(" ")));
    }
    out
}
