use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use milnor::diagalg::{self, JacobiDiagram2, Schedule, SpanOptions};
use milnor::error::{Error, Result};
use milnor::stringlink::{chen_milnor_series, longitude_series};
use milnor::treegen::{enumerate_generators, tree_to_morse, Mode, OIndex};
use milnor_cli::{
    check_algebra, check_borromean, check_gens, check_rank, check_table, format_index, parse_index, parse_link, Check,
};
use num_bigint::BigInt;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "slink", version, about = "Milnor invariants, tree generators and two-strand chord diagrams")]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Paper)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Paper,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Milnor numbers of a string link.
    Milnor {
        /// braid:<word>, fixture:<name>, morse:<text with ; for newlines>, or a file.
        #[arg(long)]
        link: String,
        /// Index such as 123, or 1,10,2 past nine strands.
        #[arg(long, required_unless_present = "length")]
        index: Option<String>,
        /// Print every Milnor number of this length instead.
        #[arg(long, conflicts_with = "index")]
        length: Option<usize>,
    },
    /// Magnus expansion of one preferred longitude.
    Longitude {
        #[arg(long)]
        link: String,
        #[arg(long)]
        strand: usize,
        #[arg(long)]
        max_degree: usize,
    },
    /// Linear tree generators of one degree.
    Gens {
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value = "concordance")]
        mode: String,
        #[arg(long, default_value_t = 2)]
        strands: usize,
    },
    /// Morse word of the surgery along a linear tree.
    Tree2link {
        #[arg(long)]
        oindex: String,
        #[arg(long, default_value_t = 2)]
        strands: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// The chord diagram algebra on two strands.
    Algebra {
        #[command(subcommand)]
        op: AlgebraOp,
    },
    /// Replay the reference computations.
    Reproduce {
        #[arg(value_enum, default_value_t = Target::All)]
        target: Target,
        #[command(flatten)]
        span: SpanArgs,
    },
}

#[derive(Subcommand)]
enum AlgebraOp {
    /// dim A_k(2), modulo a large prime.
    Dim {
        #[arg(long)]
        degree: usize,
    },
    /// STU expansion of a Jacobi diagram: D_H, D_S or a file.
    Expand {
        #[arg(long)]
        diagram: String,
        /// Random elimination order with this seed; default is first-candidate order.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Whether D_H D_S - D_S D_H vanishes in A_7(2).
    Commutator {
        #[command(flatten)]
        span: SpanArgs,
    },
}

#[derive(clap::Args)]
struct SpanArgs {
    /// Number of primes for modular elimination (0 to 5).
    #[arg(long, default_value_t = 3)]
    primes: usize,
    /// Also eliminate over the rationals.
    #[arg(long)]
    exact: bool,
    /// Work in the quotient by diagrams with at least this many same-strand chords.
    #[arg(long)]
    max_intra: Option<usize>,
}

impl SpanArgs {
    fn options(&self) -> SpanOptions {
        SpanOptions { exact: self.exact, primes: self.primes, max_intra: self.max_intra }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    All,
    Borromean,
    Table,
    Gens,
    Rank,
    Algebra,
}

fn emit(format: Format, paper: String, json: Value) {
    let text = match format {
        Format::Paper => paper.trim_end().to_string(),
        Format::Json => serde_json::to_string_pretty(&json).expect("json values serialize"),
    };
    // a closed pipe (e.g. `| head`) is not an error
    let _ = writeln!(io::stdout().lock(), "{text}");
}

fn jacobi_source(name: &str) -> Result<String> {
    match name {
        "D_H" => Ok(diagalg::D_H.to_string()),
        "D_S" => Ok(diagalg::D_S.to_string()),
        path => fs::read_to_string(path).map_err(|e| Error::Malformed(format!("cannot read `{path}`: {e}"))),
    }
}

fn run(cli: Cli) -> Result<bool> {
    let format = cli.format;
    match cli.command {
        Command::Milnor { link, index, length } => {
            let link = parse_link(&link)?;
            let values: Vec<(Vec<usize>, BigInt)> = match (index, length) {
                (Some(index), _) => {
                    let index = parse_index(&index)?;
                    let l = chen_milnor_series::<BigInt>(&link, index.len().saturating_sub(1).max(1))?;
                    vec![(index.clone(), l.mu(&index)?)]
                }
                (None, Some(len)) => {
                    if len < 2 {
                        return Err(Error::OutOfRange { what: "length", value: len, max: usize::MAX });
                    }
                    chen_milnor_series::<BigInt>(&link, len - 1)?.all_of_length(len)?
                }
                (None, None) => unreachable!("clap requires one of them"),
            };
            let paper = if values.len() == 1 {
                values[0].1.to_string()
            } else {
                values.iter().map(|(i, v)| format!("{} {v}", format_index(i))).collect::<Vec<_>>().join("\n")
            };
            let json: Value = values.iter().map(|(i, v)| (format_index(i), json!(v.to_string()))).collect::<serde_json::Map<_, _>>().into();
            emit(format, paper, json);
        }
        Command::Longitude { link, strand, max_degree } => {
            let link = parse_link(&link)?;
            let s = longitude_series(&link, strand, max_degree)?;
            let terms: Value = serde_json::from_str(&s.to_json()).expect("series json parses");
            emit(format, s.format(), json!({ "strand": strand, "max_degree": max_degree, "terms": terms }));
        }
        Command::Gens { degree, mode, strands } => {
            let set = enumerate_generators(strands, degree, mode.parse::<Mode>()?)?;
            let names: Vec<String> = set.generators.iter().map(|g| g.to_string()).collect();
            emit(format, names.join("\n"), json!({ "degree": degree, "mode": mode, "generators": names }));
        }
        Command::Tree2link { oindex, strands, out } => {
            let o = OIndex::parse(strands, &oindex)?;
            let text = tree_to_morse(&o).to_string();
            match out {
                Some(path) => fs::write(&path, &text).map_err(|e| Error::Malformed(format!("cannot write `{path}`: {e}")))?,
                None => emit(format, text.clone(), json!({ "oindex": o.to_string(), "morse": text })),
            }
        }
        Command::Algebra { op } => match op {
            AlgebraOp::Dim { degree } => {
                let d = diagalg::dimension(degree)?;
                emit(format, d.to_string(), json!({ "degree": degree, "dimension": d }));
            }
            AlgebraOp::Expand { diagram, seed } => {
                let j = JacobiDiagram2::parse(&jacobi_source(&diagram)?)?;
                let schedule = seed.map_or(Schedule::First, Schedule::Seeded);
                let v = j.stu_expand::<BigInt>(schedule)?;
                let terms: serde_json::Map<String, Value> = v.terms().map(|(d, c)| (d.to_string(), json!(c.to_string()))).collect();
                emit(format, v.to_string(), json!({ "degree": v.degree(), "terms": terms }));
            }
            AlgebraOp::Commutator { span } => {
                let cert = diagalg::commutator_check(&span.options())?;
                let value = serde_json::to_value(&cert).expect("certificate serializes");
                emit(format, cert.to_string(), value);
                return Ok(cert.verdict == diagalg::Verdict::NotInSpan);
            }
        },
        Command::Reproduce { target, span } => {
            let mut checks: Vec<Check> = Vec::new();
            let want = |t: Target| target == t || (target == Target::All && t != Target::Algebra);
            if want(Target::Borromean) {
                checks.push(check_borromean()?);
            }
            if want(Target::Table) {
                checks.push(check_table()?);
            }
            if want(Target::Gens) {
                checks.push(check_gens()?);
            }
            if want(Target::Rank) {
                checks.push(check_rank()?);
            }
            if target == Target::Algebra {
                checks.push(check_algebra(&span.options())?);
            }
            let lines: Vec<String> = checks.iter().map(Check::line).collect();
            let json: serde_json::Map<String, Value> = checks
                .iter()
                .map(|c| (c.name.to_string(), json!({ "pass": c.pass, "detail": c.detail })))
                .collect();
            emit(format, lines.join("\n"), json.into());
            return Ok(checks.iter().all(|c| c.pass));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e @ Error::ResourceLimit(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
