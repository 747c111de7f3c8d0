//! Command-line experiment runner.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid config, 3 qubit or
//! search cap exceeded, 4 numeric failure.

pub mod config;
pub mod sweep;
pub mod tables;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::codec::{encode_decode_maps, fidelity, make_decomposition, typical_projector, Codebook, Mixing};
use crate::error::Error;
use crate::gibbs::{diagonalize, GibbsEnsemble};
use crate::hamiltonian::assemble_hamiltonian;
use crate::oracle;
use crate::typicality::typical_subspace;
use config::{validate_config, DecompositionKind, Diagnostics, ExperimentConfig};
use sweep::{ensemble_for, prepare, run_sweep};

/// Run failures, each with its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config:\n{0}")]
    Config(Diagnostics),
    #[error("invalid config: {0}")]
    Model(Error),
    #[error("{0}")]
    Cap(Error),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) | CliError::Model(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }

    /// Classifies errors raised while building the model from a config.
    pub(crate) fn from_model(e: Error) -> Self {
        match e {
            Error::SizeLimit { .. } | Error::Capability(_) => CliError::Cap(e),
            Error::Domain(_) => CliError::Model(e),
            other => CliError::from(other),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeLimit { .. } | Error::Capability(_) => CliError::Cap(e),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "spin-compress", version, about = "Gibbs-state typicality and compression sweeps for spin-1/2 lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Config document.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory, overriding `out` in the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed, overriding `seed` in the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Qubit cap, overriding `max_qubits` in the config.
    #[arg(long)]
    pub max_qubits: Option<usize>,
    /// Only print errors.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full pipeline over every volume, writing the CSV tables.
    Sweep(CommonArgs),
    /// Energies and log-eigenvalues of every volume.
    Spectrum(CommonArgs),
    /// Codebook, encode/decode maps and fidelity for the first volume and δ.
    CodecDemo(CommonArgs),
    /// Cross-check the pipeline against the reference oracles on volumes of
    /// at most six sites.
    Check(CommonArgs),
}

impl Command {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Sweep(a) | Command::Spectrum(a) | Command::CodecDemo(a) | Command::Check(a) => a,
        }
    }
}

/// Config used by `check` when none is given.
pub const CHECK_DEFAULT_CONFIG: &str = "\
model = tfim
J = 1
h_field = 0.5
lambda = 0.2
beta = 2
chain = 2
chain = 4
chain = 6
delta = 0.15
delta = 0.5
";

/// Largest volume `check` will run the oracles on.
pub const CHECK_MAX_SITES: usize = 6;

pub fn load_config(args: &CommonArgs, fallback: Option<&str>) -> Result<ExperimentConfig, CliError> {
    let text = match (&args.config, fallback) {
        (Some(path), _) => fs::read_to_string(path)?,
        (None, Some(doc)) => doc.to_string(),
        (None, None) => {
            return Err(CliError::Config(Diagnostics(vec![config::Diagnostic {
                line: None,
                field: "--config".into(),
                message: "a config file is required".into(),
            }])))
        }
    };
    let mut cfg = validate_config(&text).map_err(CliError::Config)?;
    if let Some(out) = &args.out {
        cfg.out = out.clone();
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(q) = args.max_qubits {
        cfg.max_qubits = q;
    }
    Ok(cfg)
}

/// Runs a parsed command line, printing progress unless `--quiet`.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let args = cli.command.common();
    let mut stdout = io::stdout().lock();
    let mut say = |line: String| -> io::Result<()> {
        if !args.quiet {
            writeln!(stdout, "{line}")?;
        }
        Ok(())
    };
    match &cli.command {
        Command::Sweep(_) => {
            let cfg = load_config(args, None)?;
            let reports = run_sweep(&cfg)?;
            let names = tables::write_all(&reports, &cfg.out)?;
            for r in &reports {
                say(format!(
                    "{} {}: {} sites, S = {:.6} bits, h = {:.6}",
                    r.spec.shape(),
                    r.spec.parameter(),
                    r.n_sites,
                    r.thermo.entropy_rate_bits * r.n_sites as f64,
                    r.thermo.entropy_rate_bits
                ))?;
            }
            say(format!("wrote {} to {}", names.join(", "), cfg.out.display()))?;
        }
        Command::Spectrum(_) => {
            let cfg = load_config(args, None)?;
            let path = spectrum(&cfg)?;
            say(format!("wrote {}", path.display()))?;
        }
        Command::CodecDemo(_) => {
            let cfg = load_config(args, None)?;
            for line in codec_demo(&cfg)? {
                say(line)?;
            }
        }
        Command::Check(_) => {
            let cfg = load_config(args, Some(CHECK_DEFAULT_CONFIG))?;
            let outcomes = check(&cfg)?;
            let mut failed = 0;
            for o in &outcomes {
                if !o.passed {
                    failed += 1;
                }
                say(o.to_string())?;
            }
            if failed > 0 {
                return Err(CliError::Numeric(format!("{failed} of {} oracle checks failed", outcomes.len())));
            }
        }
    }
    Ok(())
}

fn spectrum(cfg: &ExperimentConfig) -> Result<PathBuf, CliError> {
    let prep = prepare(cfg)?;
    let mut buf = Vec::new();
    writeln!(buf, "{}", tables::SPECTRUM_HEADER)?;
    for &spec in &cfg.volumes {
        let ens = ensemble_for(cfg, &prep, spec)?;
        let prefix = format!("{},{},{}", spec.shape(), spec.parameter(), ens.n_sites());
        tables::write_spectrum_rows(&prefix, &ens, &mut buf)?;
    }
    fs::create_dir_all(&cfg.out)?;
    let path = cfg.out.join("spectrum.csv");
    fs::write(&path, buf)?;
    Ok(path)
}

fn codec_demo(cfg: &ExperimentConfig) -> Result<Vec<String>, CliError> {
    let prep = prepare(cfg)?;
    let spec = cfg.volumes[0];
    let delta = cfg.deltas.first().copied().ok_or_else(|| {
        CliError::Config(Diagnostics(vec![config::Diagnostic {
            line: None,
            field: "delta".into(),
            message: "codec-demo needs at least one delta".into(),
        }]))
    })?;
    let ens = ensemble_for(cfg, &prep, spec)?;
    let h_ref = cfg.h_ref.resolve(&ens);
    let t = typical_subspace(&ens, h_ref, delta)?;
    let book = Codebook::build(&t)?;
    let (count, mixing) = match cfg.decomposition {
        DecompositionKind::Eigen => (ens.dim(), Mixing::Identity),
        DecompositionKind::Random => (ens.dim() * cfg.decomposition_factor, Mixing::Random { seed: cfg.seed }),
    };
    let dec = make_decomposition(&ens, count, mixing)?;
    let pi = typical_projector(&t, ens.spectrum());
    let fid = fidelity(&dec, &pi)?;
    let maps = encode_decode_maps(&dec, &t, ens.spectrum())?;

    fs::create_dir_all(&cfg.out)?;
    let mut text = Vec::new();
    book.write_text(&mut text)?;
    fs::write(cfg.out.join("codebook.txt"), text)?;
    let mut csv = Vec::new();
    writeln!(csv, "vector,weight,encoded,codeword,decoded,projected_norm_sqr")?;
    for m in &maps {
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            m.vector,
            tables::real(dec.weights[m.vector]),
            m.encoded.map(|j| j.to_string()).unwrap_or_default(),
            m.codeword.as_ref().map(|w| w.to_string()).unwrap_or_default(),
            m.decoded.map(|j| j.to_string()).unwrap_or_default(),
            tables::real(m.projected_norm_sqr)
        )?;
    }
    fs::write(cfg.out.join("codec.csv"), csv)?;
    let unencodable = maps.iter().filter(|m| m.encoded.is_none()).count();
    Ok(vec![
        format!("{} {}: {} sites, delta = {delta}, h_ref = {h_ref:.6}", spec.shape(), spec.parameter(), ens.n_sites()),
        format!("typical dim = {} of {}, codeword length = {} bits", t.dim(), ens.dim(), book.length()),
        format!("typical mass = {:.12}, fidelity = {fid:.12}", t.mass),
        format!("{} decomposition vectors, {unencodable} unencodable", dec.len()),
        format!("wrote codebook.txt and codec.csv to {}", cfg.out.display()),
    ])
}

/// Outcome of one oracle comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: deviation {:.3e} (tolerance {:.0e})", self.name, self.deviation, self.tolerance)
    }
}

fn outcome(name: String, deviation: f64, tolerance: f64) -> CheckOutcome {
    CheckOutcome { passed: deviation <= tolerance, name, deviation, tolerance }
}

/// Oracle comparisons on every configured volume of at most six sites.
pub fn check(cfg: &ExperimentConfig) -> Result<Vec<CheckOutcome>, CliError> {
    let prep = prepare(cfg)?;
    let mut out = Vec::new();
    for &spec in &cfg.volumes {
        if spec.n_sites(cfg.dim) > CHECK_MAX_SITES {
            continue;
        }
        let label = format!("{} {}", spec.shape(), spec.parameter());
        let volume = spec.build(cfg.dim, cfg.max_qubits)?;
        let h = assemble_hamiltonian(&prep.phi, &volume, &prep.sigma, cfg.max_qubits)?;
        let reference = oracle::kron_hamiltonian(&prep.phi, &volume, &prep.sigma, 2 * CHECK_MAX_SITES + 8)?;
        out.push(outcome(format!("{label} assembly"), oracle::max_entry_distance(h.matrix(), &reference), 1e-12));

        let spec_ = diagonalize(&h)?;
        let jacobi = oracle::jacobi_eigenvalues(h.matrix());
        let eig_dev = spec_.energies.iter().zip(&jacobi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        out.push(outcome(format!("{label} eigenvalues"), eig_dev, 1e-9));

        let ens = GibbsEnsemble::from_spectrum(h.clone(), spec_, cfg.beta)?;
        let rho = oracle::normalized_gibbs_matrix(h.matrix(), cfg.beta);
        let mut expm_vals = oracle::jacobi_eigenvalues(&rho);
        expm_vals.reverse();
        let weights = ens.weights();
        let kappa_dev = weights.iter().zip(&expm_vals).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        out.push(outcome(format!("{label} exp(-beta H) weights"), kappa_dev, 1e-8));

        if !prep.phi.has_quantum_part() {
            let s = oracle::classical_entropy_bits(&prep.phi, &volume, &prep.sigma, cfg.beta)?;
            out.push(outcome(format!("{label} classical entropy"), (s - ens.entropy_bits()).abs(), 1e-10));
        }

        let h_ref = cfg.h_ref.resolve(&ens);
        for &delta in &cfg.deltas {
            let t = typical_subspace(&ens, h_ref, delta)?;
            let brute = oracle::typical_indices_linear(&weights, ens.n_sites(), h_ref, delta);
            let mismatch = t.indices.iter().filter(|j| !brute.contains(j)).count()
                + brute.iter().filter(|j| !t.indices.contains(j)).count();
            out.push(outcome(format!("{label} typical set delta={delta}"), mismatch as f64, 0.0));
        }
    }
    Ok(out)
}

/// Convenience for tests and scripts: validate, run and write a sweep.
pub fn sweep_to_dir(config_text: &str, dir: &Path) -> Result<Vec<sweep::VolumeReport>, CliError> {
    let mut cfg = validate_config(config_text).map_err(CliError::Config)?;
    cfg.out = dir.to_path_buf();
    let reports = run_sweep(&cfg)?;
    tables::write_all(&reports, &cfg.out)?;
    Ok(reports)
}
