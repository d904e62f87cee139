use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use steiner_cli::{cut_for, run, SolverConfig, SolverKind};
use steiner_core::decomposition::{
    decompose_from_multiway_cut, hat_decomposition, hat_graph, parse_decomposition, write_tfd,
    write_tkd,
};
use steiner_core::instance::{emit_pace, generate, parse_pace, Instance};
use steiner_core::multiway::{format_cut, parse_cut};

#[derive(Parser)]
#[command(name = "steiner", version, about = "Exact Steiner tree solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CutArgs {
    /// Multiway cut file (`CUT s` then one vertex per line).
    #[arg(long, value_name = "FILE")]
    cut: Option<PathBuf>,
    /// Largest cut size tried when searching for a cut.
    #[arg(long, default_value_t = 4)]
    budget: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print `VALUE` plus the tree edges.
    Solve {
        /// PACE instance file, or `-` for stdin.
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = SolverKind::Dw)]
        solver: SolverKind,
        #[command(flatten)]
        cut: CutArgs,
        /// `.tkd` decomposition of the graph or `.tfd` decomposition of its hat graph.
        #[arg(long, value_name = "FILE")]
        decomp: Option<PathBuf>,
        /// Track and print a tree for the kfree solver.
        #[arg(long)]
        witness: bool,
        /// Re-read the printed answer and check it against the instance.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Write a random connected instance.
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        nodes: u32,
        #[arg(long)]
        edges: usize,
        #[arg(long, default_value_t = 3)]
        terminals: usize,
        #[arg(long, default_value_t = 10)]
        wmax: u64,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Print a multiway cut for the terminals.
    Cut {
        instance: PathBuf,
        #[arg(long, default_value_t = 4)]
        budget: usize,
    },
    /// Print the decomposition built from a multiway cut.
    Decompose {
        instance: PathBuf,
        #[command(flatten)]
        cut: CutArgs,
        /// Lift to a triangle-free decomposition of the hat graph.
        #[arg(long)]
        hat: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn load(path: &Path) -> Result<Instance> {
    parse_pace(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn base_config(cut: &CutArgs) -> Result<SolverConfig> {
    let supplied = match &cut.cut {
        Some(p) => Some(parse_cut(&read(p)?).with_context(|| format!("parsing {}", p.display()))?),
        None => None,
    };
    Ok(SolverConfig {
        cut: supplied,
        budget: cut.budget,
        ..SolverConfig::default()
    })
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn main_inner() -> Result<i32> {
    match Cli::parse().command {
        Command::Solve {
            instance,
            solver,
            cut,
            decomp,
            witness,
            verify,
            threads,
        } => {
            let inst = load(&instance)?;
            let decomposition = match decomp {
                Some(p) => Some(
                    parse_decomposition(&read(&p)?).with_context(|| format!("parsing {}", p.display()))?,
                ),
                None => None,
            };
            let config = SolverConfig {
                solver,
                decomposition,
                witness,
                verify,
                threads,
                ..base_config(&cut)?
            };
            let report = run(&inst, &config)?;
            for note in &report.notes {
                eprintln!("c {note}");
            }
            emit(&report.render(), None)?;
            Ok(report.exit_code())
        }
        Command::Generate {
            seed,
            nodes,
            edges,
            terminals,
            wmax,
            output,
        } => {
            let inst = generate(seed, nodes, edges, terminals, wmax)?;
            emit(&emit_pace(&inst), output.as_deref())?;
            Ok(0)
        }
        Command::Cut { instance, budget } => {
            let inst = load(&instance)?;
            let config = SolverConfig {
                budget,
                ..SolverConfig::default()
            };
            let mut notes = Vec::new();
            let cut = cut_for(&inst, &config, &mut notes)?;
            for note in &notes {
                eprintln!("c {note}");
            }
            emit(&format_cut(&cut.vertices), None)?;
            Ok(0)
        }
        Command::Decompose { instance, cut, hat } => {
            let inst = load(&instance)?;
            let (g, k) = (&inst.graph, &inst.terminals);
            let mut notes = Vec::new();
            let s = cut_for(&inst, &base_config(&cut)?, &mut notes)?;
            let d = decompose_from_multiway_cut(g, k, &s)?;
            let text = if hat {
                let h = hat_graph(g, k)?;
                write_tfd(&hat_decomposition(g, k, &h, &d)?)
            } else {
                write_tkd(&d)
            };
            emit(&text, None)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
