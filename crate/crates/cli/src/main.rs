use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use galcover::degen::{self, PlanarDegeneration};
use galcover::pipeline::{self, Options, ProbeElement};
use galcover::vankampen;

#[derive(Parser)]
#[command(name = "galcover", version, about = "Fundamental groups of Galois covers of planar degenerations")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a degeneration file against the structural rules.
    Validate { case: PathBuf },
    /// Print the generated presentation.
    Present {
        case: PathBuf,
        /// Omit the projective relator.
        #[arg(long)]
        affine: bool,
    },
    /// Run the full analysis.
    Analyze {
        case: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        max_cosets: usize,
    },
    /// Evaluate an element in the abelianized affine kernel.
    Probe {
        case: PathBuf,
        #[arg(long)]
        element: String,
    },
    /// Run every fixture in a directory.
    Corpus { dir: PathBuf },
    /// Audit a braid monodromy factorization.
    Audit {
        factorization: PathBuf,
        #[arg(long)]
        strands: Option<usize>,
    },
}

fn load(path: &PathBuf) -> Result<PlanarDegeneration, ExitCode> {
    PlanarDegeneration::load(path).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(1)
    })
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn fail(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(1)
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    let json = cli.json;
    match cli.command {
        Command::Validate { case } => {
            let d = load(&case)?;
            let r = degen::validate(&d);
            if json {
                println!("{}", serde_json::to_string_pretty(&r).expect("serializes"));
            } else {
                print!("{r}");
            }
            Ok(code(if r.ok { 0 } else { 1 }))
        }
        Command::Present { case, affine } => {
            let d = load(&case)?;
            let gp = vankampen::generate(&d, !affine).map_err(fail)?;
            print!("{}", gp.dump());
            Ok(code(if vankampen::check_image_consistency(&gp) { 0 } else { 1 }))
        }
        Command::Analyze { case, max_cosets } => {
            let d = load(&case)?;
            let mut opts = Options::default();
            opts.limits.max_cosets = max_cosets;
            let r = pipeline::analyze(&d, &opts).map_err(fail)?;
            if json {
                println!("{}", r.to_json());
            } else {
                print!("{r}");
            }
            Ok(code(r.exit_code()))
        }
        Command::Probe { case, element } => {
            let d = load(&case)?;
            let names = vankampen::generator_names(d.m());
            let e = ProbeElement::parse(&element, &names).map_err(fail)?;
            let probes = pipeline::caff_probe(&d, &[e]).map_err(fail)?;
            let p = &probes[0];
            if json {
                println!("{}", serde_json::to_string_pretty(p).expect("serializes"));
            } else {
                print!("{p}");
            }
            Ok(code(p.exit_code()))
        }
        Command::Corpus { dir } => {
            let fixtures = pipeline::load_corpus(&dir).map_err(fail)?;
            let s = pipeline::run_corpus(&fixtures, &Options::default());
            if json {
                println!("{}", serde_json::to_string_pretty(&s).expect("serializes"));
            } else {
                print!("{s}");
            }
            Ok(code(s.exit_code()))
        }
        Command::Audit { factorization, strands } => {
            let r = pipeline::run_audit(&factorization, strands).map_err(fail)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r).expect("serializes"));
            } else {
                print!("{r}");
            }
            Ok(code(if r.passed { 0 } else { 1 }))
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse()).unwrap_or_else(|c| c)
}
