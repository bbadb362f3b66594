//! `entprobe`: run the discrimination and estimation scenarios from the
//! command line and emit CSV or JSON tables.

mod parse;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use entprobe::discrim::{
    average_likelihood, copies_for_perfect, gram_matrix, helstrom_error, holevo_chi, holevo_chi_closed_form,
    min_overlap_r, n_copy_profile, optimal_pair_input, output_span_dimension, output_states, pauli_group,
    schur_overlap_omega, unitary_seed, weyl_heisenberg_group, CopiesOutcome, DiscriminationProblem, InputState,
};
use entprobe::gauss::{noise_thresholds, tmsv_param_for_budget};
use entprobe::mc::{sample_heterodyne, stability_scan, Scheme};
use entprobe::{ComplexMatrix, ProbeState, C64};

use table::{Cell, Table};

pub const THREADS_ENV: &str = "ENTPROBE_THREADS";

#[derive(Debug)]
pub enum CliError {
    /// Bad flag value or input file; exit status 2.
    Usage(String),
    /// Internal numerical or I/O failure; exit status 1.
    Failure(String),
}

impl From<entprobe::Error> for CliError {
    fn from(e: entprobe::Error) -> Self {
        match e {
            entprobe::Error::Numerical(_) => CliError::Failure(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Failure(format!("i/o error: {e}"))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "entprobe", version, about = "Entangled-probe discrimination and estimation scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,

    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Bell outputs of the Pauli group: Gram matrix and pairwise error probabilities.
    PauliDemo,
    /// Orthogonality of the Weyl-Heisenberg outputs of a maximally entangled probe.
    WhGroup {
        #[arg(long)]
        d: usize,
    },
    /// Optimal single-use discrimination of two unitaries.
    Discriminate {
        /// pauli:x|y|z|i, wh:d,m,n, diag:t1,t2,... or file:PATH
        #[arg(long)]
        u1: String,
        #[arg(long)]
        u2: String,
        /// `p1` or `p1,p2`.
        #[arg(long, default_value = "0.5")]
        priors: String,
    },
    /// Number of parallel uses needed for perfect discrimination.
    Ncopies {
        #[arg(long)]
        u1: String,
        #[arg(long)]
        u2: String,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
    },
    /// Covariant estimation with a probe of given Schmidt weights.
    Covariant {
        #[arg(long)]
        d: usize,
        /// `max`, `product` or comma-separated Schmidt weights.
        #[arg(long, default_value = "max")]
        schmidt_spec: String,
    },
    /// Monte Carlo heterodyne estimation of a displacement.
    CvEstimate {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        nbar: f64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha_re: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha_im: f64,
    },
    /// Advantage and separability noise boundaries over a grid of squeezing parameters.
    ThresholdScan {
        /// `a,b,c` or `start:stop:count`.
        #[arg(long, allow_hyphen_values = true)]
        x_grid: String,
    },
    /// Phase-mismatch stability of squeezed and two-mode probes.
    Stability {
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        /// Two-mode parameter; defaults to the one with the same photon budget.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        #[arg(long, default_value = "-0.1:0.1:21", allow_hyphen_values = true)]
        phi_grid: String,
    },
}

impl Command {
    fn seed(&self) -> Option<u64> {
        match self {
            Command::CvEstimate { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}

#[derive(Serialize)]
struct Metadata<'a> {
    program: &'static str,
    version: &'static str,
    seed: Option<u64>,
    flags: &'a Cli,
}

fn priors(spec: &str) -> Result<(f64, f64), CliError> {
    let vals: Vec<f64> = spec
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad prior '{p}'"))))
        .collect::<Result<_, _>>()?;
    match vals.as_slice() {
        [p1] => Ok((*p1, 1.0 - p1)),
        [p1, p2] => Ok((*p1, *p2)),
        _ => Err(CliError::Usage(format!("priors '{spec}' must be p1 or p1,p2"))),
    }
}

fn problem(u1: &str, u2: &str, p: (f64, f64)) -> Result<DiscriminationProblem, CliError> {
    let (a, b) = (parse::parse_unitary(u1)?, parse::parse_unitary(u2)?);
    if a.rows() != b.rows() {
        return Err(CliError::Usage(format!("--u1 is {0}x{0} but --u2 is {1}x{1}", a.rows(), b.rows())));
    }
    Ok(DiscriminationProblem::new(a, b, p.0, p.1)?)
}

fn check_dim(d: usize) -> Result<(), CliError> {
    if !(2..=64).contains(&d) {
        return Err(CliError::Usage(format!("--d {d} must be between 2 and 64")));
    }
    Ok(())
}

fn pauli_demo() -> Result<Table, CliError> {
    let g = pauli_group();
    let bell = ProbeState::maximally_entangled(2);
    let gram = gram_matrix(&output_states(&g, &bell)?);
    let input = InputState::Entangled(bell);
    let mut t = Table::new(&["i", "j", "label_i", "label_j", "gram_re", "gram_im", "helstrom_error"]);
    for i in 0..g.len() {
        for j in 0..g.len() {
            let p = DiscriminationProblem::equal_priors(g.elements()[i].clone(), g.elements()[j].clone())?;
            let pe = helstrom_error(&p, &input)?;
            t.push(vec![
                i.into(),
                j.into(),
                g.labels()[i].as_str().into(),
                g.labels()[j].as_str().into(),
                gram[(i, j)].re.into(),
                gram[(i, j)].im.into(),
                pe.into(),
            ]);
        }
    }
    Ok(t)
}

fn wh_group(d: usize) -> Result<Table, CliError> {
    check_dim(d)?;
    let g = weyl_heisenberg_group(d)?;
    let gram = gram_matrix(&output_states(&g, &ProbeState::maximally_entangled(d))?);
    let mut t = Table::new(&["index", "label", "self_overlap", "max_cross_overlap"]);
    for k in 0..g.len() {
        let cross = (0..g.len()).filter(|&j| j != k).map(|j| gram[(k, j)].norm()).fold(0.0, f64::max);
        t.push(vec![k.into(), g.labels()[k].as_str().into(), gram[(k, k)].re.into(), cross.into()]);
    }
    Ok(t)
}

fn discriminate(u1: &str, u2: &str, pri: &str) -> Result<Table, CliError> {
    let p = problem(u1, u2, priors(pri)?)?;
    let w = p.relative_unitary();
    let poly = min_overlap_r(&w)?;
    let psi = optimal_pair_input(&w)?;
    let pe = helstrom_error(&p, &InputState::local(&psi)?)?;
    let mut cols = vec!["dim", "p1", "p2", "r", "spread", "perfect", "helstrom_error"];
    let names: Vec<String> = (0..psi.len()).flat_map(|k| [format!("psi{k}_re"), format!("psi{k}_im")]).collect();
    cols.extend(names.iter().map(String::as_str));
    let mut t = Table::new(&cols);
    let mut row: Vec<Cell> = vec![
        p.dim().into(),
        p.p1.into(),
        p.p2.into(),
        poly.r.into(),
        poly.spread.into(),
        poly.contains_origin().into(),
        pe.into(),
    ];
    row.extend(psi.iter().flat_map(|z: &C64| [Cell::F(z.re), Cell::F(z.im)]));
    t.push(row);
    Ok(t)
}

fn ncopies(u1: &str, u2: &str, n_max: usize) -> Result<Table, CliError> {
    let p = problem(u1, u2, (0.5, 0.5))?;
    let outcome = copies_for_perfect(&p, n_max)?;
    let (label, copies) = match outcome {
        CopiesOutcome::Perfect(n) => ("perfect", Some(n)),
        CopiesOutcome::NotWithin(_) => ("not-within-n-max", None),
        CopiesOutcome::Indistinguishable => ("not-reachable", None),
    };
    let mut t = Table::new(&["n", "spread", "law_spread", "r", "perfect", "outcome", "copies_for_perfect"]);
    for step in n_copy_profile(&p.relative_unitary(), n_max)? {
        t.push(vec![
            step.n.into(),
            step.spread.into(),
            step.law_spread.into(),
            step.r.into(),
            step.perfect.into(),
            label.into(),
            copies.into(),
        ]);
    }
    Ok(t)
}

fn covariant(d: usize, spec: &str) -> Result<Table, CliError> {
    check_dim(d)?;
    let weights = parse::parse_schmidt(spec, d)?;
    let e = ProbeState::from_schmidt_weights(&weights)?;
    let g = weyl_heisenberg_group(d)?;
    // the identity seed is optimal for a probe diagonal in the computational basis
    let seed = unitary_seed(&ComplexMatrix::identity(d))?;
    let mut t = Table::new(&[
        "d",
        "schmidt_rank",
        "entanglement_bits",
        "chi",
        "chi_closed_form",
        "span_dimension",
        "omega",
        "likelihood",
        "likelihood_bound",
    ]);
    t.push(vec![
        d.into(),
        e.schmidt_rank().into(),
        e.entanglement_bits().into(),
        holevo_chi(&g, &e)?.into(),
        holevo_chi_closed_form(&e).into(),
        output_span_dimension(&g, &e)?.into(),
        schur_overlap_omega(&e).into(),
        average_likelihood(&seed, &e)?.into(),
        (d as f64).into(),
    ]);
    Ok(t)
}

fn cv_estimate(x: f64, nbar: f64, trials: u64, seed: u64, alpha: C64) -> Result<Table, CliError> {
    if !(0.0..1.0).contains(&x.abs()) {
        return Err(CliError::Usage(format!("--x {x} must satisfy |x| < 1")));
    }
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(CliError::Usage(format!("--nbar {nbar} must be finite and >= 0")));
    }
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let mut t = Table::new(&[
        "scheme",
        "x",
        "nbar",
        "trials",
        "seed",
        "empirical",
        "delta_sq",
        "standard_error",
        "z_score",
        "rng",
        "gaussian_sampler",
    ]);
    for scheme in [Scheme::Entangled, Scheme::Unentangled] {
        let r = sample_heterodyne(x, alpha, nbar, scheme, trials, seed)?;
        t.push(vec![
            scheme.name().into(),
            x.into(),
            nbar.into(),
            trials.into(),
            seed.into(),
            r.empirical.into(),
            r.analytic.into(),
            r.standard_error.into(),
            r.z_score.into(),
            r.rng.into(),
            r.gaussian_sampler.into(),
        ]);
    }
    Ok(t)
}

fn threshold_scan(grid: &str) -> Result<Table, CliError> {
    let xs = parse::parse_grid(grid)?;
    let mut t = Table::new(&["x", "delta_sq", "advantage_threshold", "separability_boundary", "separability_closed_form"]);
    for x in xs {
        let th = noise_thresholds(x)?;
        t.push(vec![
            th.x.into(),
            th.delta_sq.into(),
            th.advantage.into(),
            th.separability.into(),
            th.separability_closed_form.into(),
        ]);
    }
    Ok(t)
}

fn stability(s: f64, x: Option<f64>, grid: &str) -> Result<Table, CliError> {
    if !s.is_finite() {
        return Err(CliError::Usage(format!("--s {s} must be finite")));
    }
    let x = match x {
        Some(x) => x,
        None => tmsv_param_for_budget(s.sinh().powi(2))?,
    };
    let rows = stability_scan(s, x, &parse::parse_grid(grid)?)?;
    let mut t = Table::new(&[
        "phi",
        "squeezed_variance",
        "entangled_variance",
        "squeezed_relative",
        "entangled_relative",
        "squeezed_photons",
        "entangled_photons",
        "x",
    ]);
    for r in rows {
        t.push(vec![
            r.phi.into(),
            r.squeezed_variance.into(),
            r.entangled_variance.into(),
            r.squeezed_relative.into(),
            r.entangled_relative.into(),
            r.squeezed_photons.into(),
            r.entangled_photons.into(),
            x.into(),
        ]);
    }
    Ok(t)
}

fn build(cmd: &Command) -> Result<Table, CliError> {
    match cmd {
        Command::PauliDemo => pauli_demo(),
        Command::WhGroup { d } => wh_group(*d),
        Command::Discriminate { u1, u2, priors } => discriminate(u1, u2, priors),
        Command::Ncopies { u1, u2, n_max } => ncopies(u1, u2, *n_max),
        Command::Covariant { d, schmidt_spec } => covariant(*d, schmidt_spec),
        Command::CvEstimate { x, nbar, trials, seed, alpha_re, alpha_im } => {
            cv_estimate(*x, *nbar, *trials, *seed, C64::new(*alpha_re, *alpha_im))
        }
        Command::ThresholdScan { x_grid } => threshold_scan(x_grid),
        Command::Stability { s, x, phi_grid } => stability(*s, *x, phi_grid),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV}='{v}' must be a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Failure(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    configure_threads()?;
    let table = build(&cli.command)?;
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cli.format {
        Format::Csv => table.write_csv(&mut out)?,
        Format::Json => {
            let meta = Metadata {
                program: "entprobe",
                version: env!("CARGO_PKG_VERSION"),
                seed: cli.command.seed(),
                flags: cli,
            };
            table.write_json(&mut out, &meta)?
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let text = e.render().to_string();
            eprintln!("{}", text.lines().next().unwrap_or("error: invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {}", msg.replace('\n', " "));
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {}", msg.replace('\n', " "));
            ExitCode::from(1)
        }
    }
}
