use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use flexlink::constructor::simulate_states;
use flexlink::diagram::{canonical_form, decide_equivalence, parse_diagram, EquivalenceResult, SearchBudget};
use flexlink::enumerate::{enumerate_classes, summarize, EnumerationBounds};
use flexlink::format::{parse_class, parse_plan, write_class, write_plan};
use flexlink::{
    check_constraints_with, classify_equal, plan_construction_with, plan_writhe, verify_plan, CheckOptions,
    ClassComparison, ConstructionPlan, FlexibleLinkClass, ProjectiveDiagram,
};

/// Flexible links in RP³: constraints, construction plans and diagram equivalence.
#[derive(Parser)]
#[command(name = "flexlink", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the realizability constraints of a class (exit 0 valid, 1 invalid, 2 parse error).
    Validate {
        class: PathBuf,
        #[arg(long)]
        strict_paper: bool,
    },
    /// Build the construction plan of a class.
    Plan {
        class: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        strict_paper: bool,
    },
    /// Run a plan through the state machine and print the resulting class.
    Simulate { plan: PathBuf },
    /// Check that a plan realizes a class (exit 0 yes, 1 no).
    Verify { plan: PathBuf, class: PathBuf },
    /// Compare two classes (exit 0 isotopic, 1 not isotopic, 3 unknown).
    Equal {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Diagram-level commands.
    #[command(subcommand)]
    Diagram(DiagramCommand),
    /// Enumerate a box of classes over a catalog of real parts.
    Enumerate {
        #[arg(long, allow_hyphen_values = true)]
        d_min: i64,
        #[arg(long, allow_hyphen_values = true)]
        d_max: i64,
        #[arg(long)]
        g_max: i64,
        #[arg(long, allow_hyphen_values = true)]
        w_min: i64,
        #[arg(long, allow_hyphen_values = true)]
        w_max: i64,
        /// Directory of diagram files to use instead of the built-in catalog.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long)]
        strict_paper: bool,
    },
}

#[derive(Subcommand)]
enum DiagramCommand {
    /// Print component count, homology classes, writhe and canonical form.
    Invariants { diagram: PathBuf },
    /// Search for a move sequence between two diagrams (exit 0 equivalent, 1 distinct, 3 unknown).
    Equal {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Args)]
struct BudgetArgs {
    /// Longest move sequence to search for.
    #[arg(long)]
    move_budget: Option<usize>,
    /// Number of distinct diagrams the search may visit.
    #[arg(long, default_value_t = 10_000)]
    state_budget: usize,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_moves: self.move_budget.unwrap_or(usize::MAX),
            max_states: self.state_budget,
            ..SearchBudget::default()
        }
    }
}

/// An error that ends the command with exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_class(path: &Path) -> Result<FlexibleLinkClass, Failure> {
    parse_class(&read(path)?, path.parent()).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_plan(path: &Path) -> Result<ConstructionPlan, Failure> {
    parse_plan(&read(path)?, path.parent()).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_diagram(path: &Path) -> Result<ProjectiveDiagram, Failure> {
    parse_diagram(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_catalog(dir: &Path) -> Result<Vec<(String, ProjectiveDiagram)>, Failure> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let name = p.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
            Ok((name, load_diagram(p)?))
        })
        .collect()
}

fn print_path(path: &[flexlink::diagram::MoveKind]) {
    for (i, m) in path.iter().enumerate() {
        println!("  {}. {m}", i + 1);
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Validate { class, strict_paper } => {
            let c = load_class(&class)?;
            let report = check_constraints_with(&c, CheckOptions { strict_paper });
            if report.is_valid() {
                println!("valid {c}");
                Ok(0)
            } else {
                println!("invalid {c}");
                for v in &report.violations {
                    println!("  {v}");
                }
                Ok(1)
            }
        }
        Command::Plan { class, output, strict_paper } => {
            let c = load_class(&class)?;
            match plan_construction_with(&c, CheckOptions { strict_paper }) {
                Ok(plan) => {
                    let text = write_plan(&plan);
                    match output {
                        Some(path) => {
                            fs::write(&path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))?
                        }
                        None => print!("{text}"),
                    }
                    Ok(0)
                }
                Err(f) => {
                    eprintln!("{f}");
                    Ok(1)
                }
            }
        }
        Command::Simulate { plan } => {
            let p = load_plan(&plan)?;
            let states = match simulate_states(&p.steps) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("{e}");
                    return Ok(1);
                }
            };
            for (step, state) in p.steps.iter().zip(&states) {
                println!("# {step} -> {state}");
            }
            let last = states.last().unwrap();
            let result = FlexibleLinkClass::new(last.d, last.g, last.link_type, last.w, p.base_diagram());
            print!("{}", write_class(&result));
            let breakdown = plan_writhe(&p)?;
            for line in breakdown.to_string().lines() {
                println!("# writhe {line}");
            }
            Ok(0)
        }
        Command::Verify { plan, class } => {
            let p = load_plan(&plan)?;
            let c = load_class(&class)?;
            let v = verify_plan(&p, &c);
            if v.ok {
                println!("verified");
                Ok(0)
            } else {
                println!("not verified");
                for d in &v.discrepancies {
                    println!("  {d}");
                }
                Ok(1)
            }
        }
        Command::Equal { a, b, budget } => {
            let (ca, cb) = (load_class(&a)?, load_class(&b)?);
            match classify_equal(&ca, &cb, budget.budget())? {
                ClassComparison::Isotopic { path } => {
                    println!("isotopic");
                    print_path(&path);
                    Ok(0)
                }
                ClassComparison::NotIsotopic { witness, left, right } => {
                    println!("not isotopic: {witness} {left} vs {right}");
                    Ok(1)
                }
                ClassComparison::Unknown { explored } => {
                    println!("unknown: real parts not connected within budget ({explored} diagrams visited)");
                    Ok(3)
                }
            }
        }
        Command::Diagram(DiagramCommand::Invariants { diagram }) => {
            let d = load_diagram(&diagram)?;
            let (per, total) = d.homology_class();
            let per: Vec<String> = per.iter().map(|h| h.to_string()).collect();
            println!("components: {}", d.component_count());
            println!("crossings: {}", d.crossing_count());
            println!("passages: {}", d.passage_count());
            println!("homology: [{}] total {total}", per.join(", "));
            println!("writhe: {}", d.writhe());
            println!("canonical:");
            for line in canonical_form(&d).lines() {
                println!("  {line}");
            }
            Ok(0)
        }
        Command::Diagram(DiagramCommand::Equal { a, b, budget }) => {
            let (da, db) = (load_diagram(&a)?, load_diagram(&b)?);
            let result = decide_equivalence(&da, &db, budget.budget());
            println!("{result}");
            Ok(match result {
                EquivalenceResult::Equivalent { path } => {
                    print_path(&path);
                    0
                }
                EquivalenceResult::Distinct { .. } => 1,
                EquivalenceResult::Unknown { .. } => 3,
            })
        }
        Command::Enumerate { d_min, d_max, g_max, w_min, w_max, catalog, strict_paper } => {
            if d_min > d_max || w_min > w_max || g_max < 0 {
                return Err(Failure("empty bounds".into()));
            }
            let mut bounds = EnumerationBounds::new((d_min, d_max), g_max, (w_min, w_max));
            if let Some(dir) = catalog {
                bounds = bounds.with_catalog(load_catalog(&dir)?);
            }
            let entries = enumerate_classes(&bounds, CheckOptions { strict_paper });
            for e in &entries {
                println!("{}", e.line());
            }
            let summary = summarize(&entries);
            print!("{summary}");
            Ok(if summary.mismatches == 0 { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
