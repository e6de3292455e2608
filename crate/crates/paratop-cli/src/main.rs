//! Command-line surface: load finite spaces, query separation properties
//! and neighborhood-monoid membership, run verification suites, export
//! graphs.
//!
//! Exit codes: 0 success/Member/Separated/clean suite; 1 NonMember,
//! NotSeparable, or counterexamples found; 2 parse or usage errors;
//! 3 invalid topology; 4 Unknown membership verdict; 5 violated operation
//! precondition (non-T0 input, radius guard, …).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use paratop::parabase::{
    member_na, member_nf, saturate_ball, separate_ap, GenSet, MembershipVerdict, ParabaseError,
    Separation,
};
use paratop::space::{FiniteSpace, Point, SpaceError};
use paratop::verify::{
    base_axiom_sweep, default_threads, run_suite, word_battery, SuiteReport, VerifyError,
};
use paratop::words::{AbelianVector, FreeWord};

#[derive(Parser)]
#[command(
    name = "paratop",
    version,
    about = "Finite spaces and their free paratopological groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format (exit codes depend only on verdicts, never on this).
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Group {
    /// Free paratopological group (reduced words).
    Fp,
    /// Free abelian paratopological group (integer vectors).
    Ap,
}

#[derive(Subcommand)]
enum Command {
    /// Separation and structure predicates of a space.
    Props { space: String },
    /// Membership of an element in the neighborhood monoid at the identity.
    Member {
        space: String,
        /// Word (`a b^-1`) for fp, signed sum (`b - a`, `2*b - c`) for ap.
        element: String,
        #[arg(long, value_enum)]
        group: Group,
        /// Conjugator length bound for the free-group search.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Separate two abelian group elements by a minimal open coset.
    Separate { space: String, g: String, h: String },
    /// Continuous chain-space map injective on the chosen points.
    Mu {
        space: String,
        #[arg(required = true)]
        points: Vec<String>,
    },
    /// Theorem suite over every labeled topology on n points.
    Suite {
        n: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Word-separation battery over every labeled topology on n points.
    Battery {
        n: usize,
        #[arg(long, default_value_t = 4)]
        length: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Base-axiom sampling over every labeled topology on n points.
    Basep {
        n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Saturate seed vectors under generator differences within a norm ball.
    Saturate {
        space: String,
        #[arg(long)]
        radius: u64,
        /// Seed vectors (defaults to the zero vector).
        vectors: Vec<String>,
    },
    /// DOT digraph of the specialization relation.
    ExportDot {
        space: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn space_failure(err: SpaceError) -> Failure {
    let code = match err {
        SpaceError::InvalidDocument(_) | SpaceError::InvalidPointName(_) => 2,
        SpaceError::NotT0 | SpaceError::DuplicateChosenPoints(_) | SpaceError::NoChosenPoints => 5,
        _ => 3,
    };
    fail(code, err.to_string())
}

fn parabase_failure(err: ParabaseError) -> Failure {
    match err {
        ParabaseError::UnknownPoint(_) | ParabaseError::EqualElements => fail(2, err.to_string()),
        ParabaseError::RadiusTooLarge { .. } | ParabaseError::SeedOutsideRadius { .. } => {
            fail(5, err.to_string())
        }
        ParabaseError::Space(e) => space_failure(e),
    }
}

fn verify_failure(err: VerifyError) -> Failure {
    match err {
        VerifyError::Space(e) => space_failure(e),
        VerifyError::WordLengthTooLarge { .. } => fail(2, err.to_string()),
    }
}

fn load_space(input: &str) -> Result<FiniteSpace, Failure> {
    let text = if input.trim_start().starts_with('{') {
        input.to_string()
    } else {
        std::fs::read_to_string(input)
            .map_err(|e| fail(2, format!("cannot read `{input}`: {e}")))?
    };
    FiniteSpace::from_json(&text).map_err(space_failure)
}

fn print_report(report: &SuiteReport, format: Format) -> u8 {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    if report.is_clean() {
        0
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Props { space } => {
            let space = load_space(&space)?;
            let gens = GenSet::new(&space);
            let props = json!({
                "points": space.len(),
                "t0": space.is_t0(),
                "discrete": space.is_discrete(),
                "indiscrete": space.is_indiscrete(),
                "partition": space.is_partition(),
                "gens": gens.len(),
            });
            match cli.format {
                Format::Json => println!("{props}"),
                Format::Text => {
                    println!("points: {}", space.len());
                    println!("t0: {}", space.is_t0());
                    println!("discrete: {}", space.is_discrete());
                    println!("indiscrete: {}", space.is_indiscrete());
                    println!("partition: {}", space.is_partition());
                    println!("generator pairs: {}", gens.len());
                }
            }
            Ok(0)
        }
        Command::Member {
            space,
            element,
            group,
            depth,
        } => {
            let space = load_space(&space)?;
            let verdict = match group {
                Group::Ap => {
                    let v = AbelianVector::parse(&element).map_err(|e| fail(2, e.to_string()))?;
                    member_na(&space, &v).map_err(parabase_failure)?
                }
                Group::Fp => {
                    let w = FreeWord::parse(&element).map_err(|e| fail(2, e.to_string()))?;
                    member_nf(&space, &w, depth).map_err(parabase_failure)?
                }
            };
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string(&verdict).expect("verdict serializes")
                ),
                Format::Text => match &verdict {
                    MembershipVerdict::Member { certificate } => println!(
                        "Member\ncertificate: {}",
                        serde_json::to_string(certificate).expect("certificate serializes")
                    ),
                    MembershipVerdict::NonMember { obstruction } => println!(
                        "NonMember\nobstruction: {}",
                        serde_json::to_string(obstruction).expect("obstruction serializes")
                    ),
                    MembershipVerdict::Unknown { bound } => {
                        println!("Unknown (search bound {bound})")
                    }
                },
            }
            Ok(match verdict {
                MembershipVerdict::Member { .. } => 0,
                MembershipVerdict::NonMember { .. } => 1,
                MembershipVerdict::Unknown { .. } => 4,
            })
        }
        Command::Separate { space, g, h } => {
            let space = load_space(&space)?;
            let g = AbelianVector::parse(&g).map_err(|e| fail(2, e.to_string()))?;
            let h = AbelianVector::parse(&h).map_err(|e| fail(2, e.to_string()))?;
            let separation = separate_ap(&space, &g, &h).map_err(parabase_failure)?;
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string(&separation).expect("separation serializes")
                ),
                Format::Text => match &separation {
                    Separation::Separated { base, excludes } => {
                        println!("Separated: open coset at ({base}) excludes ({excludes})")
                    }
                    Separation::NotSeparable => println!("NotSeparable"),
                },
            }
            Ok(if separation.is_separated() { 0 } else { 1 })
        }
        Command::Mu { space, points } => {
            let space = load_space(&space)?;
            let chosen = points
                .iter()
                .map(|p| p.parse::<Point>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(space_failure)?;
            let map = space.separating_map(&chosen).map_err(space_failure)?;
            let target = format!("R_{}", map.codomain().len());
            // Domain points ordered by image rank, then by name.
            let mut table: Vec<(usize, &Point, &Point)> = space
                .points()
                .iter()
                .enumerate()
                .map(|(i, p)| (map.apply_idx(i), p, map.codomain().point(map.apply_idx(i))))
                .collect();
            table.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
            let table: Vec<(&Point, &Point)> = table.into_iter().map(|(_, p, q)| (p, q)).collect();
            match cli.format {
                Format::Json => {
                    let assignment: serde_json::Map<String, serde_json::Value> = table
                        .iter()
                        .map(|(p, q)| (p.to_string(), json!(q.to_string())))
                        .collect();
                    println!("{}", json!({"target": target, "assignment": assignment}));
                }
                Format::Text => {
                    let mapping = table
                        .iter()
                        .map(|(p, q)| format!("{p}↦{q}"))
                        .collect::<Vec<_>>()
                        .join(", ");
                    println!("{mapping}");
                    println!("target: {target}");
                }
            }
            Ok(0)
        }
        Command::Suite { n, depth, seed } => {
            let report = run_suite(n, depth, seed, default_threads()).map_err(verify_failure)?;
            Ok(print_report(&report, cli.format))
        }
        Command::Battery {
            n,
            length,
            depth,
            seed,
        } => {
            let report =
                word_battery(n, length, depth, seed, default_threads()).map_err(verify_failure)?;
            Ok(print_report(&report, cli.format))
        }
        Command::Basep { n, samples, seed } => {
            let report =
                base_axiom_sweep(n, samples, seed, default_threads()).map_err(verify_failure)?;
            Ok(print_report(&report, cli.format))
        }
        Command::Saturate {
            space,
            radius,
            vectors,
        } => {
            let space = load_space(&space)?;
            let seeds = if vectors.is_empty() {
                vec![AbelianVector::zero()]
            } else {
                vectors
                    .iter()
                    .map(|v| AbelianVector::parse(v))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| fail(2, e.to_string()))?
            };
            let ball = saturate_ball(&space, &seeds, radius).map_err(parabase_failure)?;
            match cli.format {
                Format::Json => {
                    let items: Vec<serde_json::Value> = ball.iter().map(|v| json!(v)).collect();
                    println!("{}", json!(items));
                }
                Format::Text => {
                    for v in &ball {
                        println!("{v}");
                    }
                }
            }
            Ok(0)
        }
        Command::ExportDot { space, out } => {
            let space = load_space(&space)?;
            let dot = space.to_dot();
            match out {
                Some(path) => std::fs::write(&path, dot)
                    .map_err(|e| fail(2, format!("cannot write `{}`: {e}", path.display())))?,
                None => print!("{dot}"),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
