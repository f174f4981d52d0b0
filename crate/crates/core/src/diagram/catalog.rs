use super::{parse_diagram, ProjectiveDiagram};

pub const CATALOG_NAMES: [&str; 7] =
    ["empty", "circle", "chord", "two-circles", "circle-chord", "kinked-unknot", "trefoil"];

const SOURCES: [&str; 7] = [
    "components: 0\n",
    "components: 1\nc0:\n",
    "components: 1\nc0: W1\nboundary: 1a 1b\n",
    "components: 2\nc0:\nc1:\n",
    "components: 2\nc0:\nc1: W1\nboundary: 1a 1b\n",
    "components: 1\nc0: O1+ U1+\n",
    "components: 1\nc0: O1+ U2+ O3+ U1+ O2+ U3+\n",
];

/// The built-in real-part catalog used by the enumeration harness.
pub fn catalog() -> Vec<(&'static str, ProjectiveDiagram)> {
    CATALOG_NAMES
        .iter()
        .zip(SOURCES)
        .map(|(&name, src)| (name, parse_diagram(src).expect("catalog diagram is valid")))
        .collect()
}

pub fn catalog_entry(name: &str) -> Option<ProjectiveDiagram> {
    catalog().into_iter().find(|(n, _)| *n == name).map(|(_, d)| d)
}
