//! Command-line surface for the walk-transfer library.
//!
//! Exit codes: 0 = command succeeded and its assertion (if any) held,
//! 1 = assertion failed (e.g. a PST check came back negative),
//! 2 = usage or domain error, reported as a one-line diagnostic on stderr.

mod commands;
mod suite;

use clap::{Args, Parser, Subcommand, ValueEnum};
use walk_transfer::{HamiltonianKind, PathVariant, WeightedGraph};

#[derive(Parser)]
#[command(
    name = "walk-transfer",
    about = "Continuous-time quantum walks: spectra, state transfer, and certificates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    /// Adjacency matrix A.
    Adjacency,
    /// Laplacian L = D - A.
    Laplacian,
    /// Signless Laplacian Q = D + A.
    Signless,
    /// A plus the diagonal vertex potential.
    Potential,
}

impl From<KindArg> for HamiltonianKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Adjacency => HamiltonianKind::Adjacency,
            KindArg::Laplacian => HamiltonianKind::Laplacian,
            KindArg::Signless => HamiltonianKind::SignlessLaplacian,
            KindArg::Potential => HamiltonianKind::AdjacencyPlusPotential,
        }
    }
}

/// Where the graph comes from: a JSON file or a named family.
#[derive(Debug, Args)]
struct GraphInput {
    /// Graph JSON file: {"n": int, "edges": [[i, j, w], ...], "potential": [...]}.
    #[arg(long, group = "source")]
    graph: Option<String>,
    /// Cycle C_n.
    #[arg(long, group = "source", value_name = "N")]
    cycle: Option<usize>,
    /// Path P_n.
    #[arg(long, group = "source", value_name = "N")]
    path: Option<usize>,
    /// Complete graph K_n.
    #[arg(long, group = "source", value_name = "N")]
    complete: Option<usize>,
    /// Circulant on Z_n: "n:d1,d2,...".
    #[arg(long, group = "source", value_name = "N:D1,D2")]
    circulant: Option<String>,
    /// Weighted path family: "variant:n" with variant one of plain,
    /// sqrt2-both, sqrt2-one-pot, pot-both, pendants-one, pendants-both.
    #[arg(long, group = "source", value_name = "VARIANT:N")]
    path_family: Option<String>,
    /// Replace the graph by its complement after building.
    #[arg(long)]
    complement: bool,
}

impl GraphInput {
    fn build(&self) -> Result<WeightedGraph, CliError> {
        let g = if let Some(file) = &self.graph {
            let text = std::fs::read_to_string(file)
                .map_err(|e| CliError::usage(format!("cannot read {file}: {e}")))?;
            WeightedGraph::from_json(&text)?
        } else if let Some(n) = self.cycle {
            WeightedGraph::cycle(n)?
        } else if let Some(n) = self.path {
            WeightedGraph::path(n)?
        } else if let Some(n) = self.complete {
            WeightedGraph::complete(n)
        } else if let Some(spec) = &self.circulant {
            parse_circulant(spec)?
        } else if let Some(spec) = &self.path_family {
            parse_path_family(spec)?
        } else {
            return Err(CliError::usage(
                "no graph given; use --graph, --cycle, --path, --complete, --circulant, \
                 or --path-family"
                    .into(),
            ));
        };
        if self.complement {
            Ok(g.complement()?)
        } else {
            Ok(g)
        }
    }
}

fn parse_circulant(spec: &str) -> Result<WeightedGraph, CliError> {
    let (n, conns) = spec
        .split_once(':')
        .ok_or_else(|| CliError::usage(format!("bad circulant spec `{spec}`; expected n:d1,d2")))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("bad circulant size `{n}`")))?;
    let conn: Vec<usize> = conns
        .split(',')
        .map(|d| {
            d.trim()
                .parse()
                .map_err(|_| CliError::usage(format!("bad connection `{d}`")))
        })
        .collect::<Result<_, _>>()?;
    Ok(WeightedGraph::circulant(n, &conn)?)
}

fn parse_path_family(spec: &str) -> Result<WeightedGraph, CliError> {
    let (variant, n) = spec.split_once(':').ok_or_else(|| {
        CliError::usage(format!("bad path-family spec `{spec}`; expected variant:n"))
    })?;
    let variant = match variant.trim() {
        "plain" => PathVariant::Plain,
        "sqrt2-both" => PathVariant::Sqrt2BothEnds,
        "sqrt2-one-pot" => PathVariant::Sqrt2OneEndPot,
        "pot-both" => PathVariant::PotBothEnds,
        "pendants-one" => PathVariant::PendantsOneEnd,
        "pendants-both" => PathVariant::PendantsBothEnds,
        other => return Err(CliError::usage(format!("unknown path variant `{other}`"))),
    };
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("bad path size `{n}`")))?;
    Ok(WeightedGraph::path_family(n, variant)?)
}

/// Parse a time given as a decimal literal or a rational multiple of pi:
/// "pi", "pi/2", "3pi/4", "-pi/2", "2pi", or "1.5707963".
fn parse_time(s: &str) -> Result<f64, CliError> {
    let t = s.trim();
    let (sign, t) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, t),
    };
    if let Some(idx) = t.find("pi") {
        let (coeff, rest) = t.split_at(idx);
        let rest = &rest[2..];
        let coeff = coeff.trim().trim_end_matches('*').trim();
        let num: f64 = if coeff.is_empty() {
            1.0
        } else {
            coeff
                .parse()
                .map_err(|_| CliError::usage(format!("bad time `{s}`")))?
        };
        let den: f64 = match rest.trim().strip_prefix('/') {
            Some(d) => d
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("bad time `{s}`")))?,
            None if rest.trim().is_empty() => 1.0,
            None => return Err(CliError::usage(format!("bad time `{s}`"))),
        };
        if den == 0.0 {
            return Err(CliError::usage(format!("zero denominator in time `{s}`")));
        }
        Ok(sign * num * std::f64::consts::PI / den)
    } else {
        t.parse::<f64>()
            .map(|v| sign * v)
            .map_err(|_| CliError::usage(format!("bad time `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a graph and print it as JSON with basic facts.
    Graph {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Eigenvalues and multiplicities of the chosen Hamiltonian.
    Spectrum {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum, default_value_t = KindArg::Adjacency)]
        kind: KindArg,
    },
    /// Transition matrix U(t), or the evolved state when --u is given.
    Evolve {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum, default_value_t = KindArg::Adjacency)]
        kind: KindArg,
        /// Time, as a decimal or "pi/2"-style expression.
        #[arg(long)]
        t: String,
        /// Initial state: v:a, plus:a,b, pair:a,b, spair:a,b,s, or a JSON vector.
        #[arg(long)]
        u: Option<String>,
    },
    /// Check perfect state transfer U(tau) u = gamma v; exit 1 if it fails.
    CheckPst {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum, default_value_t = KindArg::Adjacency)]
        kind: KindArg,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        tau: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Check fractional revival U(tau) u = alpha u + beta v; exit 1 if it fails.
    CheckFr {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum, default_value_t = KindArg::Adjacency)]
        kind: KindArg,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        tau: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Check periodicity U(tau) u = gamma u; exit 1 if it fails.
    Periodic {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum, default_value_t = KindArg::Adjacency)]
        kind: KindArg,
        #[arg(long)]
        u: String,
        #[arg(long)]
        tau: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Sweep the transfer fidelity over [0, t-max] and report the best peak.
    SearchPgst {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum, default_value_t = KindArg::Adjacency)]
        kind: KindArg,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long, default_value_t = 100.0)]
        t_max: f64,
        /// Grid samples; 0 picks a step well below the Nyquist limit.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Search for an integer-relation certificate ruling out PGST between
    /// two states of a circulant graph; exit 1 when none is found.
    CertifyNoPgst {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        /// Root order m of the phase pattern; the rotation by n/m is used.
        #[arg(long, default_value_t = 2)]
        modulus: u32,
        /// Coefficients range over [-bound, bound].
        #[arg(long, default_value_t = 4)]
        bound: i64,
        /// Bound on the l1 norm of the coefficient vector.
        #[arg(long, default_value_t = 10)]
        l1: i64,
    },
    /// Decide whether C_n or its complement admits PGST for a query class.
    CycleVerdict {
        n: usize,
        #[arg(long, default_value = "vertex")]
        query: String,
        #[arg(long)]
        complement: bool,
    },
    /// Verify an equitable partition, print the symmetrized quotient, and
    /// sample the intertwining identity; exit 1 if the partition fails.
    Quotient {
        #[command(flatten)]
        input: GraphInput,
        /// Cells as semicolon-separated comma lists, e.g. "0;1,7;2,6;3,5;4".
        #[arg(long)]
        cells: String,
        /// Number of random sample times for the intertwining check.
        #[arg(long, default_value_t = 20)]
        times: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a named verification battery; exit 0 iff every row passes.
    VerifySuite {
        /// One of: all, complement, doublecover, cycles, paths.
        battery: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Internal error carrying the exit code to use.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub code: i32,
}

impl CliError {
    fn usage(message: String) -> Self {
        Self { message, code: 2 }
    }
}

impl From<walk_transfer::Error> for CliError {
    fn from(e: walk_transfer::Error) -> Self {
        Self { message: e.to_string(), code: 2 }
    }
}

fn configure_threads() {
    if let Ok(v) = std::env::var("WALK_TRANSFER_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                // Ignore failure: the global pool may already exist.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn main() {
    configure_threads();
    let cli = Cli::parse();
    let code = match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    std::process::exit(code);
}
