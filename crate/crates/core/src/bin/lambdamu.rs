use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lambdamu::reduce::{normalize, redexes, step, Strategy, DEFAULT_MAX_STEPS};
use lambdamu::sn::{catalog, explore, run_claim_suite, sn_verdict, to_dot, SnVerdict, DEFAULT_MAX_NODES};
use lambdamu::standard::{is_standard, standardize};
use lambdamu::typing::{check, infer, parse_type, verify_derivation, Context};
use lambdamu::{canonical_key, parse, ReductionTrace, Term};

/// Workbench for the symmetric lambda-mu calculus.
///
/// Terms use `\x. M`, `M N`, `mu a. M` and `[a] M`.
#[derive(Parser)]
#[command(name = "lambdamu", version)]
struct Cli {
    /// Replace free variables named after catalog entries (zero, one, delta,
    /// P, M0, M1, N, Mpair, Mprime) by those terms.
    #[arg(long, global = true)]
    catalog: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    /// Leftmost-outermost.
    Lo,
    /// Uniformly random redex, driven by --seed.
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and pretty-print a term.
    Parse { term: String },
    /// Infer or check a simple type.
    Type {
        term: String,
        /// Context such as "x:A, a:~B" (a `~` declares a mu-variable).
        #[arg(long, default_value = "")]
        ctx: String,
        /// Check against this type and print the derivation.
        #[arg(long = "type")]
        ty: Option<String>,
    },
    /// List the redexes of a term, or fire one.
    Step {
        term: String,
        #[arg(long)]
        index: Option<usize>,
    },
    /// Reduce to normal form.
    Normalize {
        term: String,
        #[arg(long, value_enum, default_value = "lo")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        /// Write the reduction as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Decide strong normalization by graph exploration.
    Sn {
        term: String,
        #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
        max_nodes: usize,
    },
    /// Export the reduction graph in DOT.
    Graph {
        term: String,
        #[arg(long, default_value_t = 10_000)]
        max_nodes: usize,
        /// Output file; standard output if omitted.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Turn a reduction (JSON trace) into a standard one.
    Standardize {
        #[arg(long)]
        trace: PathBuf,
        /// Output file for the standard trace; standard output if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also print the certificate as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Check whether a reduction (JSON trace) is standard.
    CheckStandard {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the counterexample claims.
    Catalog {
        #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
        max_nodes: usize,
    },
    /// Step through reductions interactively.
    Repl { term: String },
}

const USAGE: u8 = 1;
const UNKNOWN: u8 = 2;
const FAILED: u8 = 3;

struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(USAGE, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(code)
        }
    }
}

fn read_term(cli: &Cli, src: &str) -> Result<Term, Failure> {
    let t = parse(src)?;
    Ok(if cli.catalog { catalog().expand(&t) } else { t })
}

fn read_trace(path: &PathBuf) -> Result<ReductionTrace, Failure> {
    let src = fs::read_to_string(path).map_err(|e| Failure(USAGE, format!("{}: {e}", path.display())))?;
    let tr = ReductionTrace::from_json(&src)?;
    tr.validate()?;
    Ok(tr)
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure(USAGE, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Parse { term } => {
            let t = read_term(cli, term)?;
            let fv = t.free_vars();
            let names = |s: &std::collections::BTreeSet<lambdamu::Name>| {
                s.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" ")
            };
            println!("{t}");
            println!("cxty: {}", t.cxty());
            println!("free lambda-variables: {}", names(&fv.lambda));
            println!("free mu-variables: {}", names(&fv.mu));
            println!("canonical: {}", canonical_key(&t));
        }
        Command::Type { term, ctx, ty } => {
            let t = read_term(cli, term)?;
            let ctx = Context::parse(ctx)?;
            match ty {
                None => println!("{}", infer(&ctx, &t)?),
                Some(ty) => {
                    let ty = parse_type(ty)?;
                    let d = check(&ctx, &t, &ty)?;
                    verify_derivation(&d).map_err(|e| Failure(FAILED, e))?;
                    print!("{d}");
                }
            }
        }
        Command::Step { term, index } => {
            let t = read_term(cli, term)?;
            let rs = redexes(&t);
            match index {
                None => {
                    if rs.is_empty() {
                        println!("normal form");
                    }
                    for (i, r) in rs.iter().enumerate() {
                        println!("{i}: {r}  ->  {}", step(&t, r)?);
                    }
                }
                Some(i) => {
                    let r = rs.get(*i).ok_or_else(|| Failure(USAGE, format!("no redex {i}; the term has {}", rs.len())))?;
                    println!("{}", step(&t, r)?);
                }
            }
        }
        Command::Normalize { term, strategy, seed, max_steps, trace } => {
            let t = read_term(cli, term)?;
            let strategy = match strategy {
                StrategyArg::Lo => Strategy::LeftmostOutermost,
                StrategyArg::Random => Strategy::SeededRandom(*seed),
            };
            match normalize(&t, strategy, *max_steps) {
                Ok((nf, tr)) => {
                    println!("{nf}");
                    println!("steps: {}", tr.len());
                    if let Some(p) = trace {
                        write_out(Some(p), &tr.to_json())?;
                    }
                }
                Err(e) => {
                    if let Some(p) = trace {
                        write_out(Some(p), &e.partial.to_json())?;
                    }
                    return Err(Failure(UNKNOWN, format!("no normal form within {} steps", e.max_steps)));
                }
            }
        }
        Command::Sn { term, max_nodes } => {
            let t = read_term(cli, term)?;
            let v = sn_verdict(&t, *max_nodes);
            println!("{v}");
            match &v {
                SnVerdict::NonSn { witness, .. } => {
                    for (i, u) in witness.trace.terms.iter().enumerate() {
                        let mark = if i == witness.repeat_from { "  <- repeats at the end" } else { "" };
                        println!("  {i}: {u}{mark}");
                    }
                }
                SnVerdict::Unknown { .. } => return Err(Failure(UNKNOWN, String::new())),
                SnVerdict::Sn { .. } => {}
            }
        }
        Command::Graph { term, max_nodes, dot } => {
            let t = read_term(cli, term)?;
            let g = explore(&t, *max_nodes);
            write_out(dot.as_ref(), &to_dot(&g))?;
            eprintln!(
                "{} nodes, {} edges{}",
                g.len(),
                g.edge_count(),
                if g.is_complete() { "" } else { " (budget reached, frontier remains)" }
            );
        }
        Command::Standardize { trace, output, json } => {
            let tr = read_trace(trace)?;
            let (out, cert) = standardize(&tr)?;
            write_out(output.as_ref(), &(out.to_json() + "\n"))?;
            if *json {
                println!("{}", serde_json::to_string_pretty(&cert.to_json())?);
            }
        }
        Command::CheckStandard { trace, json } => {
            let tr = read_trace(trace)?;
            match is_standard(&tr) {
                Ok(cert) => {
                    println!("standard");
                    if *json {
                        println!("{}", serde_json::to_string_pretty(&cert.to_json())?);
                    } else {
                        print!("{cert}");
                    }
                }
                Err(e) => return Err(Failure(FAILED, e.to_string())),
            }
        }
        Command::Catalog { max_nodes } => {
            let report = run_claim_suite(*max_nodes);
            print!("{report}");
            if report.any_fail() {
                return Err(Failure(FAILED, String::new()));
            }
            if !report.all_pass() {
                return Err(Failure(UNKNOWN, String::new()));
            }
        }
        Command::Repl { term } => repl(read_term(cli, term)?)?,
    }
    Ok(())
}

fn repl(start: Term) -> Result<(), Failure> {
    let mut history = vec![start];
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    loop {
        let cur = history.last().unwrap().clone();
        let rs = redexes(&cur);
        println!("{cur}");
        if rs.is_empty() {
            println!("  (normal form)");
        }
        for (i, r) in rs.iter().enumerate() {
            println!("  [{i}] {r}");
        }
        print!("> ");
        io::stdout().flush()?;
        let Some(line) = lines.next() else { return Ok(()) };
        let line = line?;
        match line.trim() {
            "quit" | "q" => return Ok(()),
            "undo" | "u" => {
                if history.len() > 1 {
                    history.pop();
                } else {
                    println!("nothing to undo");
                }
            }
            "" => {}
            s => match s.parse::<usize>().ok().and_then(|i| rs.get(i)) {
                Some(r) => history.push(step(&cur, r)?),
                None => println!("enter a redex index, `undo` or `quit`"),
            },
        }
    }
}
