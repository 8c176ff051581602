mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use specnorm::extremal::{entropy_analysis, kneser_norm_audit, tau_table, InvSqrt, TensorPower};
use specnorm::graph::{
    centered_witnesses, delta_subset_witness, edge_count, forward_bounds, neighborhood_energy, parse_graph,
    GraphSpectralProfile, FORWARD_SLACK,
};
use specnorm::linalg::{
    format_matrix, parse_matrix, top_two_singular, ComplexMatrix, NormProfile, SolverOptions, DEFAULT_MAX_ITER,
    DEFAULT_SEED, DEFAULT_TOL,
};
use specnorm::oracle::{exact_delta, exact_rho, OracleCaps};
use specnorm::witness::{delta_witness, rho_witness, BinaryVector, CERT_SLACK};
use specnorm::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "specnorm", version, about = "Discrete matrix norms, binary witnesses and exact oracles")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Seed for the singular solver and sampling.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Relative residual tolerance of the singular solver.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Iteration limit of the singular solver.
    #[arg(long = "max-iter", global = true, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Emit JSON instead of `key: value` lines.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Column, row and spectral norms, height and second singular value.
    Norms { file: PathBuf },
    /// Constructive binary witness with its certified floor.
    Witness {
        #[command(subcommand)]
        kind: WitnessKind,
    },
    /// Exhaustive Gray-code oracle.
    Oracle {
        #[command(subcommand)]
        kind: OracleKind,
    },
    /// Graph audits on an edge-list file.
    Graph {
        #[command(subcommand)]
        kind: GraphKind,
    },
    /// Write a generated matrix in the matrix text format.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Exact and witnessed discrete norms of the tensor power A_M.
    #[command(name = "kneser-audit")]
    KneserAudit { m: usize },
    /// Entropy-function checks on a simplex grid.
    Entropy {
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// Exact tau_M(j) for j = 0..M and the scaled maximum.
    Tau { m: usize },
}

#[derive(Subcommand, Debug)]
enum WitnessKind {
    Delta { file: PathBuf },
    Rho { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum OracleKind {
    Delta {
        file: PathBuf,
        /// Largest column count to enumerate.
        #[arg(long)]
        cap: Option<usize>,
    },
    Rho {
        file: PathBuf,
        /// Cap of the active path: row count for real input, rows + columns
        /// for complex input.
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum GraphKind {
    /// Spectral profile and forward bounds on sampled subsets. e(X,Y) counts
    /// ordered pairs, so an edge inside X ∩ Y contributes 2.
    Audit {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Subset with large neighbourhood energy and centered witnesses.
    Witness { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// Rank-one matrix with entries 1/sqrt(ij).
    Invsqrt {
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Tensor power [[1,1],[1,0]]^{⊗M}.
    Tensor {
        m: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OutputMode {
    Text,
    Json,
}

#[derive(Debug, Clone)]
struct RunConfig {
    solver: SolverOptions,
    caps: OracleCaps,
    output: OutputMode,
}

impl RunConfig {
    fn from_opts(g: &GlobalOpts) -> Result<Self> {
        if g.tol.is_nan() || g.tol <= 0.0 || !g.tol.is_finite() {
            return Err(Error::InvalidArgument(format!("--tol must be positive, got {}", g.tol)));
        }
        if g.max_iter == 0 {
            return Err(Error::InvalidArgument("--max-iter must be at least 1".into()));
        }
        Ok(Self {
            solver: SolverOptions { tol: g.tol, max_iter: g.max_iter, seed: g.seed },
            caps: OracleCaps::default(),
            output: if g.json { OutputMode::Json } else { OutputMode::Text },
        })
    }
}

enum Output {
    Report(Value),
    Raw(String),
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Result<ComplexMatrix> {
    parse_matrix(&read(path)?)
}

fn check_cap(cap: Option<usize>) -> Result<()> {
    if cap == Some(0) {
        return Err(Error::InvalidArgument("--cap must be at least 1".into()));
    }
    Ok(())
}

fn emit_matrix(a: &ComplexMatrix, output: &Option<PathBuf>) -> Result<Output> {
    let text = format_matrix(a);
    match output {
        Some(path) => {
            fs::write(path, &text)
                .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
            Ok(Output::Raw(String::new()))
        }
        None => Ok(Output::Raw(text)),
    }
}

fn graph_audit(path: &Path, samples: usize, cfg: &RunConfig) -> Result<Value> {
    let g = parse_graph(&read(path)?)?;
    let profile = GraphSpectralProfile::compute(&g, &cfg.solver)?;
    profile.check(FORWARD_SLACK)?;
    let n = g.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.solver.seed);
    let random_subset = |rng: &mut ChaCha8Rng| loop {
        let p: f64 = rng.gen_range(0.05..0.95);
        let v = BinaryVector::from_indices(n, (0..n).filter(|_| rng.gen_bool(p))).expect("in range");
        if !v.is_empty() {
            return v;
        }
    };
    let (mut max_energy, mut max_edge) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let x = random_subset(&mut rng);
        let y = random_subset(&mut rng);
        forward_bounds(&g, profile.rho, &x, &y)?;
        if profile.rho > 0.0 {
            let kx = x.popcount() as f64;
            let ky = y.popcount() as f64;
            max_energy = max_energy.max(neighborhood_energy(&g, &x)? as f64 / (profile.rho * profile.rho * kx));
            max_edge = max_edge.max(edge_count(&g, &x, &y)? as f64 / (profile.rho * (kx * ky).sqrt()));
        }
    }
    let summary = report::AuditSummary { samples, max_energy_ratio: max_energy, max_edge_ratio: max_edge };
    Ok(report::graph_audit(&profile, &summary))
}

fn graph_witness(path: &Path, cfg: &RunConfig) -> Result<Value> {
    let g = parse_graph(&read(path)?)?;
    let profile = GraphSpectralProfile::compute(&g, &cfg.solver)?;
    let subset = delta_subset_witness(&g, &cfg.solver)?;
    match centered_witnesses(&g, &cfg.solver) {
        Ok(c) => Ok(report::graph_witness(&profile, &subset, Ok(&c))),
        Err(e @ Error::RankDeficient { .. }) => Ok(report::graph_witness(&profile, &subset, Err(&e))),
        Err(e) => Err(e),
    }
}

fn run(command: &Command, cfg: &RunConfig) -> Result<Output> {
    let opts = &cfg.solver;
    let value = match command {
        Command::Norms { file } => {
            let a = load_matrix(file)?;
            // the second triplet is reported with its residual even when it
            // has not met the tolerance
            let (top, second) = match top_two_singular(&a, opts) {
                Err(Error::NonConvergence { best, .. }) if best.0.residual <= opts.tol * best.0.value => *best,
                other => other?,
            };
            let p = NormProfile::from_top(&a, &top)?;
            let second = (a.cols() > 1).then_some(second);
            report::norms(&p, second.as_ref())
        }
        Command::Witness { kind: WitnessKind::Delta { file } } => {
            let w = delta_witness(&load_matrix(file)?, opts)?;
            w.certify(CERT_SLACK)?;
            report::delta_witness(&w)
        }
        Command::Witness { kind: WitnessKind::Rho { file } } => {
            let w = rho_witness(&load_matrix(file)?, opts)?;
            w.certify(CERT_SLACK)?;
            report::rho_witness(&w)
        }
        Command::Oracle { kind: OracleKind::Delta { file, cap } } => {
            check_cap(*cap)?;
            let a = load_matrix(file)?;
            let r = exact_delta(&a, cap.unwrap_or(cfg.caps.delta))?;
            let p = if a.is_zero() { None } else { Some(NormProfile::compute(&a, opts)?) };
            report::oracle("oracle delta", p.as_ref(), &r)
        }
        Command::Oracle { kind: OracleKind::Rho { file, cap } } => {
            check_cap(*cap)?;
            let a = load_matrix(file)?;
            let real_cap = cap.unwrap_or(cfg.caps.rho_real);
            let pair_cap = cap.unwrap_or(cfg.caps.rho_pair);
            let r = exact_rho(&a, real_cap, pair_cap)?;
            let p = if a.is_zero() { None } else { Some(NormProfile::compute(&a, opts)?) };
            report::oracle("oracle rho", p.as_ref(), &r)
        }
        Command::Graph { kind: GraphKind::Audit { file, samples } } => graph_audit(file, *samples, cfg)?,
        Command::Graph { kind: GraphKind::Witness { file } } => graph_witness(file, cfg)?,
        Command::Gen { kind: GenKind::Invsqrt { n, output } } => {
            let a = InvSqrt::new(*n)?;
            return emit_matrix(&a.matrix()?, output);
        }
        Command::Gen { kind: GenKind::Tensor { m, output } } => {
            return emit_matrix(&TensorPower::new(*m)?.dense()?, output);
        }
        Command::KneserAudit { m } => report::kneser(&kneser_norm_audit(*m, &cfg.caps, opts)?),
        Command::Entropy { step } => {
            let e = entropy_analysis(*step)?;
            if e.grid_margin > 1e-10 {
                return Err(Error::InvariantViolation(format!("saddle bound fails by {}", e.grid_margin)));
            }
            report::entropy(&e)
        }
        Command::Tau { m } => report::tau(&tau_table(*m)?),
    };
    Ok(Output::Report(value))
}

fn configure_threads() {
    let threads = std::env::var("SPECNORM_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
    if threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvariantViolation(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            if code == 0 {
                let _ = e.print();
            } else {
                let _ = e.print();
                eprintln!("{}", report::usage_error(e.to_string().lines().next().unwrap_or("usage error")));
            }
            return ExitCode::from(code);
        }
    };
    configure_threads();
    let result = RunConfig::from_opts(&cli.global).and_then(|cfg| run(&cli.command, &cfg).map(|o| (o, cfg)));
    match result {
        Ok((Output::Raw(text), _)) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Ok((Output::Report(value), cfg)) => {
            let text = match cfg.output {
                OutputMode::Json => format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable")),
                OutputMode::Text => report::to_text(&value),
            };
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", report::error(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_violation_exits_two() {
        assert_eq!(exit_code(&Error::InvariantViolation("below floor".into())), 2);
        assert_eq!(exit_code(&Error::InvalidArgument("x".into())), 1);
        assert_eq!(exit_code(&Error::Parse { line: 1, message: "x".into() }), 1);
    }

    #[test]
    fn config_rejects_bad_tolerance() {
        let g = GlobalOpts { seed: 1, tol: -1.0, max_iter: 10, json: false };
        assert!(RunConfig::from_opts(&g).is_err());
        let g = GlobalOpts { seed: 1, tol: 1e-10, max_iter: 0, json: true };
        assert!(RunConfig::from_opts(&g).is_err());
        let g = GlobalOpts { seed: 1, tol: 1e-10, max_iter: 10, json: true };
        let cfg = RunConfig::from_opts(&g).unwrap();
        assert_eq!(cfg.output, OutputMode::Json);
        assert_eq!(cfg.caps.delta, 24);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
