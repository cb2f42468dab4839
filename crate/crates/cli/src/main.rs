//! `qgap`: spectra, surgeries and spectral-gap checks for metric and
//! discrete graphs.
//!
//! Exit codes: 0 success, 1 error, 2 hypothesis unmet or not applicable,
//! 3 a claimed inequality was violated.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qgap_core::discrete::{
    check_discrete_add, check_discrete_pendant, spectrum as discrete_spectrum,
};
use qgap_core::fem::{convergence_order, oracle_eigenvalues, ConvergenceOrder};
use qgap_core::graph::{parse_document, write_graph, Document};
use qgap_core::metric::{eigenspace, eigenvalues, lowest_eigenvalues};
use qgap_core::suite::run_suite;
use qgap_core::verify::{
    interval_criterion, lower_bound_check, spectral_gap, verify_add_edge, verify_cut,
    verify_delete, verify_join, verify_long_edge, verify_pendant, Verdict, VerificationReport,
};
use qgap_core::{DiscreteGraph, EdgeId, MetricGraph, SurgeryOp, VertexId};

const EXIT_NO_CLAIM: u8 = 2;
const EXIT_VIOLATED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qgap",
    version,
    about = "Spectral gaps of quantum graphs under surgery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues as CSV (`index,k,lambda,multiplicity`).
    Spectrum {
        graph: PathBuf,
        /// Largest wavenumber; defaults to 20 pi / L.
        #[arg(long)]
        kmax: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First positive eigenvalue and an orthonormal basis of its eigenspace.
    Gap {
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Applies one surgery and writes the resulting graph file.
    Surgery {
        graph: PathBuf,
        /// glue:v1,v2 | add:v1,v2,len | pendant:v,len | cut:e,t | delete:e | cutout:e,x,len
        #[arg(long)]
        op: SurgeryOp,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks one theorem on one graph and prints the report as JSON.
    Verify {
        graph: PathBuf,
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long)]
        v1: Option<u64>,
        #[arg(long)]
        v2: Option<u64>,
        #[arg(long)]
        v: Option<u64>,
        #[arg(long)]
        edge: Option<usize>,
        /// Cut coordinate along the edge.
        #[arg(long)]
        t: Option<f64>,
        /// Centre of the removed interval.
        #[arg(long)]
        x: Option<f64>,
        /// Length of the added edge, pendant or removed interval.
        #[arg(long)]
        len: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite element eigenvalues next to the secular ones, as CSV.
    Oracle {
        graph: PathBuf,
        /// Mesh size; defaults to the shortest edge over 32.
        #[arg(long)]
        h: Option<f64>,
        /// Number of positive eigenvalues to compare.
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded property suite over random metric and discrete graphs.
    Suite {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    Join,
    Pendant,
    Add,
    LongEdge,
    Cut,
    Delete,
    Interval,
    LowerBound,
    /// Discrete: adding an edge between `--v1` and `--v2`.
    DiscreteAdd,
    /// Discrete: a pendant vertex at `--v`.
    DiscretePendant,
}

fn read_document(path: &Path) -> Result<Document> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_document(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_metric(path: &Path) -> Result<MetricGraph> {
    match read_document(path)? {
        Document::Metric(g) => Ok(g),
        Document::Discrete(_) => bail!("{} holds a discrete graph", path.display()),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.with_context(|| format!("this theorem needs --{flag}"))
}

fn discrete_csv(g: &DiscreteGraph) -> Result<String> {
    let s = discrete_spectrum(g)?;
    let mut out = String::from("index,lambda\n");
    for (i, l) in s.values.iter().enumerate() {
        writeln!(out, "{i},{l}")?;
    }
    Ok(out)
}

fn spectrum(path: &Path, kmax: Option<f64>) -> Result<String> {
    match read_document(path)? {
        Document::Metric(g) => {
            let k_max = kmax.unwrap_or(20.0 * std::f64::consts::PI / g.total_length());
            let s = eigenvalues(&g, k_max)?;
            for w in &s.warnings {
                eprintln!("warning: {w}");
            }
            Ok(s.to_csv())
        }
        Document::Discrete(g) => discrete_csv(&g),
    }
}

fn gap(path: &Path) -> Result<String> {
    match read_document(path)? {
        Document::Metric(g) => {
            let gap = spectral_gap(&g)?;
            let mut out = format!(
                "lambda1,k1,multiplicity\n{},{},{}\n",
                gap.lambda, gap.k, gap.multiplicity
            );
            for (i, f) in eigenspace(&g, gap.k)?.iter().enumerate() {
                writeln!(out, "\n# basis function {i}")?;
                out.push_str(&f.to_csv());
            }
            Ok(out)
        }
        Document::Discrete(g) => {
            let s = discrete_spectrum(&g)?;
            let space = s.gap_eigenspace();
            let mut out = format!("lambda1,multiplicity\n{},{}\n", s.gap(), space.len());
            for (i, v) in space.iter().enumerate() {
                let values: Vec<String> = v.iter().map(f64::to_string).collect();
                writeln!(out, "\n# basis vector {i}\n{}", values.join(","))?;
            }
            Ok(out)
        }
    }
}

struct VerifyArgs {
    theorem: Theorem,
    v1: Option<u64>,
    v2: Option<u64>,
    v: Option<u64>,
    edge: Option<usize>,
    t: Option<f64>,
    x: Option<f64>,
    len: Option<f64>,
}

fn verify(path: &Path, a: &VerifyArgs) -> Result<VerificationReport> {
    let vertex = |v: Option<u64>, flag: &str| need(v, flag).map(VertexId);
    let index = |v: Option<u64>, flag: &str| need(v, flag).map(|i| i as usize);
    let doc = read_document(path)?;
    let report = match (a.theorem, doc) {
        (Theorem::DiscreteAdd, Document::Discrete(g)) => {
            check_discrete_add(&g, index(a.v1, "v1")?, index(a.v2, "v2")?)?
        }
        (Theorem::DiscretePendant, Document::Discrete(g)) => {
            check_discrete_pendant(&g, index(a.v, "v")?)?
        }
        (Theorem::DiscreteAdd | Theorem::DiscretePendant, Document::Metric(_)) => {
            bail!("discrete-add and discrete-pendant apply to discrete graphs")
        }
        (_, Document::Discrete(_)) => bail!("{} holds a discrete graph", path.display()),
        (theorem, Document::Metric(g)) => match theorem {
            Theorem::Join => verify_join(&g, vertex(a.v1, "v1")?, vertex(a.v2, "v2")?)?,
            Theorem::Pendant => verify_pendant(&g, vertex(a.v, "v")?, need(a.len, "len")?)?,
            Theorem::Add => verify_add_edge(
                &g,
                vertex(a.v1, "v1")?,
                vertex(a.v2, "v2")?,
                need(a.len, "len")?,
            )?,
            Theorem::LongEdge => verify_long_edge(
                &g,
                vertex(a.v1, "v1")?,
                vertex(a.v2, "v2")?,
                need(a.len, "len")?,
            )?,
            Theorem::Cut => verify_cut(&g, EdgeId(need(a.edge, "edge")?), need(a.t, "t")?)?,
            Theorem::Delete => verify_delete(&g, EdgeId(need(a.edge, "edge")?))?,
            Theorem::Interval => interval_criterion(
                &g,
                EdgeId(need(a.edge, "edge")?),
                need(a.x, "x")?,
                need(a.len, "len")?,
            )?,
            Theorem::LowerBound => lower_bound_check(&g)?,
            Theorem::DiscreteAdd | Theorem::DiscretePendant => unreachable!("handled above"),
        },
    };
    Ok(report)
}

fn verdict_code(r: &VerificationReport) -> u8 {
    match r.verdict {
        Verdict::InequalityHolds => 0,
        Verdict::NoClaim => EXIT_NO_CLAIM,
        Verdict::InequalityViolated => EXIT_VIOLATED,
    }
}

fn oracle(path: &Path, h: Option<f64>, n: usize) -> Result<String> {
    let g = read_metric(path)?;
    let h = h.unwrap_or(g.min_edge_length() / 32.0);
    if !(h > 0.0 && h.is_finite()) {
        bail!("--h must be a positive number, got {h}");
    }
    let n = n.max(1);
    let exact = lowest_eigenvalues(&g, n)?.lambdas_with_multiplicity();
    let fem = oracle_eigenvalues(&g, h, n + 1)?;
    let mut out = format!("# h = {h}\nindex,fem,secular,relative_error\n");
    for i in 0..=n {
        let rel = if exact[i] > 0.0 {
            (fem[i] - exact[i]) / exact[i]
        } else {
            f64::NAN
        };
        writeln!(out, "{i},{},{},{rel}", fem[i], exact[i])?;
    }
    match convergence_order(&g, h, 1)? {
        ConvergenceOrder::Order(p) => writeln!(out, "# convergence order of lambda_1: {p}")?,
        ConvergenceOrder::RoundOff => writeln!(out, "# lambda_1 error at round-off")?,
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Spectrum { graph, kmax, out } => {
            emit(out.as_deref(), &spectrum(&graph, kmax)?)?;
            Ok(0)
        }
        Command::Gap { graph, out } => {
            emit(out.as_deref(), &gap(&graph)?)?;
            Ok(0)
        }
        Command::Surgery { graph, op, out } => {
            let g = read_metric(&graph)?;
            emit(out.as_deref(), &write_graph(&op.apply(&g)?))?;
            Ok(0)
        }
        Command::Verify {
            graph,
            theorem,
            v1,
            v2,
            v,
            edge,
            t,
            x,
            len,
            out,
        } => {
            let args = VerifyArgs {
                theorem,
                v1,
                v2,
                v,
                edge,
                t,
                x,
                len,
            };
            let report = verify(&graph, &args)?;
            emit(out.as_deref(), &format!("{}\n", report.to_record()))?;
            Ok(verdict_code(&report))
        }
        Command::Oracle { graph, h, n, out } => {
            emit(out.as_deref(), &oracle(&graph, h, n)?)?;
            Ok(0)
        }
        Command::Suite { seed, n, out } => {
            let result = run_suite(seed, n)?;
            emit(out.as_deref(), &result.to_text())?;
            let s = &result.summary.overall;
            eprintln!(
                "seed {seed}: {} reports, {} hold, {} no claim, {} violated, {} inconsistent diagnostics",
                s.total, s.holds, s.no_claim, s.violated, s.inconsistent_diagnostics
            );
            Ok(if s.violated == 0 { 0 } else { EXIT_VIOLATED })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
