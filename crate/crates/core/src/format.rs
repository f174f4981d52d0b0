//! Class files and plan files.
//!
//! ```text
//! degree: 1
//! genus: 2
//! type: I
//! writhe: -1
//! real_part:
//!   components: 1
//!   c0: W1
//!   boundary: 1a 1b
//! ```
//!
//! `real_part` may instead name a diagram file (relative to the class file)
//! or be `empty`. A plan file starts with a `target:` line followed by an
//! indented class, then one step per line:
//!
//! ```text
//! target:
//!   degree: 1
//!   ...
//! base-real target
//! torus-pair
//! sphere-pair -
//! ```

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::constructor::{ConstructionPlan, ConstructionStep};
use crate::diagram::{parse_diagram, serialize_diagram, DiagramError, ProjectiveDiagram, Sign};
use crate::invariants::{FlexibleLinkClass, LinkType};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("real part: {0}")]
    Diagram(#[from] DiagramError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

fn indent_of(s: &str) -> usize {
    s.len() - s.trim_start().len()
}

fn strip_comment(s: &str) -> &str {
    s.split('#').next().unwrap_or("")
}

/// Lines after `start` indented deeper than `base`, dedented, with the index past them.
fn indented_block(lines: &[(usize, &str)], start: usize, base: usize) -> (String, usize) {
    let mut end = start;
    while end < lines.len() {
        let l = lines[end].1;
        if !strip_comment(l).trim().is_empty() && indent_of(l) <= base {
            break;
        }
        end += 1;
    }
    let cut = lines[start..end]
        .iter()
        .filter(|(_, l)| !strip_comment(l).trim().is_empty())
        .map(|(_, l)| indent_of(l))
        .min()
        .unwrap_or(0);
    let text =
        lines[start..end].iter().map(|(_, l)| l.get(cut..).unwrap_or("").trim_end()).collect::<Vec<_>>();
    (text.join("\n") + "\n", end)
}

fn load_diagram(reference: &str, base_dir: Option<&Path>) -> Result<ProjectiveDiagram, FormatError> {
    if reference == "empty" {
        return Ok(ProjectiveDiagram::empty());
    }
    let path = match base_dir {
        Some(dir) => dir.join(reference),
        None => PathBuf::from(reference),
    };
    let text = std::fs::read_to_string(&path).map_err(|source| FormatError::Io { path, source })?;
    Ok(parse_diagram(&text)?)
}

fn parse_int(value: &str, line: usize, key: &str) -> Result<i64, FormatError> {
    value.parse().map_err(|_| syntax(line, format!("`{key}` needs an integer, got `{value}`")))
}

fn parse_class_lines(
    lines: &[(usize, &str)],
    base_dir: Option<&Path>,
) -> Result<FlexibleLinkClass, FormatError> {
    let (mut degree, mut genus, mut link_type, mut writhe, mut real) = (None, None, None, None, None);
    let mut i = 0;
    while i < lines.len() {
        let (line, raw) = lines[i];
        i += 1;
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once(':') else {
            return Err(syntax(line, format!("expected `key: value`, got `{content}`")));
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "degree" => degree = Some(parse_int(value, line, key)?),
            "genus" => genus = Some(parse_int(value, line, key)?),
            "writhe" => writhe = Some(parse_int(value, line, key)?),
            "type" => link_type = Some(value.parse::<LinkType>().map_err(|m| syntax(line, m))?),
            "real_part" => {
                if value.is_empty() {
                    let (text, end) = indented_block(lines, i, indent_of(raw));
                    i = end;
                    real = Some(parse_diagram(&text)?);
                } else {
                    real = Some(load_diagram(value, base_dir)?);
                }
            }
            _ => return Err(syntax(line, format!("unknown key `{key}`"))),
        }
    }
    let first = lines.first().map_or(1, |l| l.0);
    let need = |name: &str| syntax(first, format!("missing `{name}`"));
    Ok(FlexibleLinkClass::new(
        degree.ok_or_else(|| need("degree"))?,
        genus.ok_or_else(|| need("genus"))?,
        link_type.ok_or_else(|| need("type"))?,
        writhe.ok_or_else(|| need("writhe"))?,
        real.ok_or_else(|| need("real_part"))?,
    ))
}

fn numbered(text: &str) -> Vec<(usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect()
}

/// Parse a class file; diagram paths resolve against `base_dir`.
pub fn parse_class(text: &str, base_dir: Option<&Path>) -> Result<FlexibleLinkClass, FormatError> {
    parse_class_lines(&numbered(text), base_dir)
}

fn indent(text: &str, by: &str) -> String {
    text.lines().map(|l| format!("{by}{l}\n")).collect()
}

pub fn write_class(c: &FlexibleLinkClass) -> String {
    let mut out =
        format!("degree: {}\ngenus: {}\ntype: {}\nwrithe: {}\n", c.degree, c.genus, c.link_type, c.writhe);
    out.push_str("real_part:\n");
    out.push_str(&indent(&serialize_diagram(&c.real_part), "  "));
    out
}

fn parse_sign(value: &str, line: usize) -> Result<Sign, FormatError> {
    match value {
        "+" | "+1" => Ok(Sign::Pos),
        "-" | "-1" => Ok(Sign::Neg),
        _ => Err(syntax(line, format!("expected + or -, got `{value}`"))),
    }
}

pub fn parse_plan(text: &str, base_dir: Option<&Path>) -> Result<ConstructionPlan, FormatError> {
    let lines = numbered(text);
    let mut i = 0;
    let mut target = None;
    let mut steps = Vec::new();
    while i < lines.len() {
        let (line, raw) = lines[i];
        i += 1;
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        if content == "target:" {
            if target.is_some() {
                return Err(syntax(line, "duplicate target block"));
            }
            let (_, end) = indented_block(&lines, i, indent_of(raw));
            target = Some(parse_class_lines(&lines[i..end], base_dir)?);
            i = end;
            continue;
        }
        let (word, arg) = match content.split_once(char::is_whitespace) {
            Some((w, a)) => (w, a.trim()),
            None => (content, ""),
        };
        let no_arg = |step: ConstructionStep| {
            if arg.is_empty() {
                Ok(step)
            } else {
                Err(syntax(line, format!("`{word}` takes no argument")))
            }
        };
        let step = match word {
            "base-real" => {
                let diagram = match arg {
                    "" => {
                        let (text, end) = indented_block(&lines, i, indent_of(raw));
                        i = end;
                        parse_diagram(&text)?
                    }
                    "target" => match &target {
                        Some(t) => t.real_part.clone(),
                        None => return Err(syntax(line, "`base-real target` before the target block")),
                    },
                    path => load_diagram(path, base_dir)?,
                };
                ConstructionStep::BaseRealCurves(diagram)
            }
            "base-imaginary" => no_arg(ConstructionStep::BaseImaginaryRational)?,
            "sphere" => no_arg(ConstructionStep::AttachImaginarySphere)?,
            "torus-pair" => no_arg(ConstructionStep::AttachConjugateTorusPair)?,
            "line-pair" => ConstructionStep::AttachConjugateLinePair(parse_sign(arg, line)?),
            "sphere-pair" => ConstructionStep::AttachConjugateSpherePair(parse_sign(arg, line)?),
            _ => return Err(syntax(line, format!("unknown step `{word}`"))),
        };
        steps.push(step);
    }
    let target = target.ok_or_else(|| syntax(1, "missing `target:` block"))?;
    Ok(ConstructionPlan { target, steps })
}

pub fn write_plan(p: &ConstructionPlan) -> String {
    let mut out = String::from("target:\n");
    out.push_str(&indent(&write_class(&p.target), "  "));
    for step in &p.steps {
        match step {
            ConstructionStep::BaseRealCurves(d) if *d == p.target.real_part => {
                out.push_str("base-real target\n")
            }
            ConstructionStep::BaseRealCurves(d) => {
                out.push_str("base-real\n");
                out.push_str(&indent(&serialize_diagram(d), "  "));
            }
            ConstructionStep::AttachConjugateLinePair(s) | ConstructionStep::AttachConjugateSpherePair(s) => {
                out.push_str(&format!("{} {}\n", step.keyword(), s.symbol()));
            }
            _ => {
                out.push_str(step.keyword());
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructor::plan_construction;
    use crate::diagram::catalog_entry;

    #[test]
    fn class_inline_block() {
        let text = "degree: 1\ngenus: 2\ntype: I\nwrithe: -1\nreal_part:\n  components: 1\n  c0: W1\n  boundary: 1a 1b\n";
        let c = parse_class(text, None).unwrap();
        assert_eq!(c.degree, 1);
        assert_eq!(c.genus, 2);
        assert_eq!(c.link_type, LinkType::I);
        assert_eq!(c.writhe, -1);
        assert_eq!(c.real_part, ProjectiveDiagram::chord());
        assert_eq!(parse_class(&write_class(&c), None).unwrap(), c);
    }

    #[test]
    fn class_keys_in_any_order() {
        let text = "# degree zero\nreal_part: empty\nwrithe: 5\ntype: II\ngenus: 0\ndegree: 0\n";
        let c = parse_class(text, None).unwrap();
        assert!(c.real_part.is_empty());
        assert_eq!(c.writhe, 5);
    }

    #[test]
    fn class_errors() {
        assert!(matches!(parse_class("degree: x\n", None), Err(FormatError::Syntax { line: 1, .. })));
        assert!(matches!(
            parse_class("degree: 0\ngenus: 0\ntype: III\nwrithe: 0\nreal_part: empty\n", None),
            Err(FormatError::Syntax { line: 3, .. })
        ));
        assert!(matches!(
            parse_class("degree: 0\ngenus: 0\ntype: I\nwrithe: 0\n", None),
            Err(FormatError::Syntax { .. })
        ));
        assert!(matches!(
            parse_class(
                "degree: 0\ngenus: 0\ntype: I\nwrithe: 0\nreal_part:\n  components: 1\n  c0: O1+\n",
                None
            ),
            Err(FormatError::Diagram(_))
        ));
        assert!(matches!(
            parse_class("degree: 0\ngenus: 0\ntype: I\nwrithe: 0\nreal_part: /nonexistent/x.txt\n", None),
            Err(FormatError::Io { .. })
        ));
    }

    #[test]
    fn plan_round_trip() {
        for (name, t, g, d, w) in [
            ("chord", LinkType::I, 2, 3, -2),
            ("empty", LinkType::II, 3, -4, 1),
            ("trefoil", LinkType::II, 1, 2, 0),
        ] {
            let target = FlexibleLinkClass::new(d, g, t, w, catalog_entry(name).unwrap());
            let p = plan_construction(&target).unwrap();
            assert_eq!(parse_plan(&write_plan(&p), None).unwrap(), p);
        }
    }

    #[test]
    fn plan_with_other_base() {
        let target = FlexibleLinkClass::new(0, 1, LinkType::II, 0, ProjectiveDiagram::unknot());
        let p = ConstructionPlan {
            target,
            steps: vec![
                ConstructionStep::BaseRealCurves(catalog_entry("kinked-unknot").unwrap()),
                ConstructionStep::AttachImaginarySphere,
                ConstructionStep::AttachConjugateSpherePair(Sign::Neg),
            ],
        };
        let text = write_plan(&p);
        assert!(text.contains("base-real\n  components: 1\n  c0: O1+ U1+\n"));
        assert_eq!(parse_plan(&text, None).unwrap(), p);
    }

    #[test]
    fn plan_errors() {
        assert!(matches!(parse_plan("sphere\n", None), Err(FormatError::Syntax { .. })));
        let head = "target:\n  degree: 0\n  genus: 0\n  type: II\n  writhe: 0\n  real_part: empty\n";
        assert!(parse_plan(&format!("{head}base-imaginary\n"), None).is_ok());
        assert!(matches!(
            parse_plan(&format!("{head}flip\n"), None),
            Err(FormatError::Syntax { line: 7, .. })
        ));
        assert!(matches!(
            parse_plan(&format!("{head}sphere-pair 2\n"), None),
            Err(FormatError::Syntax { .. })
        ));
        assert!(matches!(parse_plan(&format!("{head}sphere x\n"), None), Err(FormatError::Syntax { .. })));
    }
}
