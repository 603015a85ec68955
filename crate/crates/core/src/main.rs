use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use dimwit::graph::{
    generate_mermin, generate_qite, independence_number, parse_graph, parse_weights, Graph,
    GraphFormat,
};
use dimwit::heuristic::{heuristic_theta_d, HeuristicConfig};
use dimwit::representation::VectorFile;
use dimwit::theta::lovasz_theta;
use dimwit::witness::{qite_or, round_significant, verify_or, witness_report};
use dimwit::Error;

#[derive(Parser)]
#[command(
    name = "dimwit",
    version,
    about = "Classical and quantum bounds on exclusivity graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact (weighted) independence number and a maximum stable set.
    Alpha {
        graph: PathBuf,
        #[arg(long)]
        format: Option<GraphFormat>,
    },
    /// Lovász theta to 6 significant digits.
    Theta {
        graph: PathBuf,
        #[arg(long)]
        format: Option<GraphFormat>,
        /// Vertex weights overriding those in the graph file.
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Heuristic lower bound on the dimension-restricted theta.
    ThetaRank {
        graph: PathBuf,
        #[arg(long)]
        format: Option<GraphFormat>,
        #[arg(long = "dim")]
        dim: usize,
        #[command(flatten)]
        heuristic: HeuristicArgs,
        /// Write the per-round trace as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the extracted realization (when converged).
        #[arg(long)]
        realization: Option<PathBuf>,
    },
    /// The k-Qite graph, optionally with its closed-form orthonormal representation.
    Qite {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        or: bool,
    },
    /// The 16-event Mermin exclusivity graph.
    Mermin,
    /// Dimension-witness report as JSON.
    Report {
        graph: PathBuf,
        #[arg(long)]
        format: Option<GraphFormat>,
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[command(flatten)]
        heuristic: HeuristicArgs,
        /// Human-readable table instead of JSON.
        #[arg(long)]
        pretty: bool,
    },
    /// Checks an orthonormal representation against a graph.
    VerifyOr {
        graph: PathBuf,
        or_file: PathBuf,
        #[arg(long)]
        format: Option<GraphFormat>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Args)]
struct HeuristicArgs {
    #[arg(long, default_value_t = 50)]
    iters: usize,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "stop-tol", default_value_t = 1e-6)]
    stop_tol: f64,
}

impl HeuristicArgs {
    fn config(&self, d: usize) -> HeuristicConfig {
        let mut cfg = HeuristicConfig::new(d);
        cfg.iters = self.iters;
        cfg.restarts = self.restarts;
        cfg.seed = self.seed;
        cfg.stop_tol = self.stop_tol;
        cfg
    }
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::MalformedGraph(_)
            | Error::InvalidParameter(_)
            | Error::Io(_)
            | Error::Json(_) => Self::Usage(e.to_string()),
            _ => Self::Numeric(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path, format: Option<GraphFormat>) -> Result<Graph, Failure> {
    let format = format.unwrap_or_else(|| GraphFormat::from_path(path));
    Ok(parse_graph(&read(path)?, format)?)
}

fn write(path: &Path, content: &str) -> Result<(), Failure> {
    std::fs::write(path, content).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Alpha { graph, format } => {
            let g = load_graph(&graph, format)?;
            let s = independence_number(&g);
            println!("alpha {}", s.value);
            let members: Vec<String> = s.members.iter().map(|v| v.to_string()).collect();
            println!("stable set {}", members.join(" "));
        }
        Command::Theta {
            graph,
            format,
            weights,
        } => {
            let mut g = load_graph(&graph, format)?;
            if let Some(w) = weights {
                g = g.with_weights(parse_weights(&read(&w)?)?)?;
            }
            let r = lovasz_theta(&g)?;
            println!("theta {}", round_significant(r.value, 6));
        }
        Command::ThetaRank {
            graph,
            format,
            dim,
            heuristic,
            trace,
            realization,
        } => {
            let g = load_graph(&graph, format)?;
            let r = heuristic_theta_d(&g, &heuristic.config(dim))?;
            println!("dimension {dim}");
            println!("lower bound (heuristic) {:.6}", r.bound);
            println!("converged {}", r.converged);
            println!("achieved rank {}", r.achieved_rank);
            println!("failed restarts {}", r.failed_restarts);
            if !r.converged {
                println!("note: not converged, the value is not a valid lower bound");
            }
            if let Some(path) = trace {
                write(&path, &(r.trace_jsonl() + "\n"))?;
            }
            if let (Some(path), Some(real)) = (realization, &r.realization) {
                let text = serde_json::to_string(&VectorFile::from_realization(real))
                    .map_err(Error::from)?;
                write(&path, &text)?;
            }
        }
        Command::Qite { k, or } => {
            let g = generate_qite(k)?;
            if or {
                let rep = VectorFile::from_or(&qite_or(k)?);
                println!("{}", json!({ "graph": g.to_file(), "or": rep }));
            } else {
                println!("{}", g.to_json());
            }
        }
        Command::Mermin => println!("{}", generate_mermin().to_json()),
        Command::Report {
            graph,
            format,
            dims,
            heuristic,
            pretty,
        } => {
            let g = load_graph(&graph, format)?;
            let rep = witness_report(&g, &dims, &heuristic.config(1))?;
            if pretty {
                print!("{}", rep.to_table());
            } else {
                println!("{}", rep.to_json());
            }
        }
        Command::VerifyOr {
            graph,
            or_file,
            format,
            tol,
        } => {
            let g = load_graph(&graph, format)?;
            let or = VectorFile::parse(&read(&or_file)?)?.to_or()?;
            let rep = verify_or(&g, &or, tol)?;
            println!("{}", serde_json::to_string(&rep).map_err(Error::from)?);
            if !rep.passed {
                return Err(Failure::Numeric(
                    "representation failed verification".into(),
                ));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
