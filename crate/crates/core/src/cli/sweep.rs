//! The per-volume pipeline: assemble, diagonalize, thermodynamics,
//! typicality per δ, codec fidelity per δ, best-rate masses and the
//! characteristic-function residuals.

use rayon::prelude::*;

use super::config::{DecompositionKind, ExperimentConfig, VolumeSpec};
use super::CliError;
use crate::codec::{codeword_length, fidelity, make_decomposition, trace_rho_projector, typical_projector, Mixing};
use crate::gibbs::{GibbsEnsemble, ThermoDensities};
use crate::hamiltonian::assemble_hamiltonian;
use crate::interaction::{GroundStateConfig, Interaction};
use crate::typicality::{best_rate_mass, lln_residual, typical_subspace, Sandwich};

/// Rows whose entropy-rate identity residual exceeds this abort the run.
pub const IDENTITY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct TypicalRow {
    pub delta: f64,
    pub h_ref: f64,
    pub dim: usize,
    pub mass: f64,
    pub dim_rate: Option<f64>,
    pub sandwich: Sandwich,
    pub fidelity: f64,
    pub trace_rho_pi: f64,
    /// Absent when no state is typical.
    pub codeword_len: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RateSource {
    Fixed,
    /// `R = max(0, h_Λ - offset)`.
    Offset(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BestRateRow {
    pub source: RateSource,
    pub rate: f64,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeReport {
    pub spec: VolumeSpec,
    pub n_sites: usize,
    pub lambda: f64,
    pub thermo: ThermoDensities,
    pub identity_residual: f64,
    pub typical: Vec<TypicalRow>,
    pub best_rate: Vec<BestRateRow>,
    pub lln: Vec<(f64, f64)>,
}

/// The model and boundary condition shared by every volume of a run.
pub struct Prepared {
    pub phi: Interaction,
    pub sigma: GroundStateConfig,
}

pub fn prepare(cfg: &ExperimentConfig) -> Result<Prepared, CliError> {
    let phi = cfg.interaction().map_err(CliError::from_model)?;
    for check in phi.check_perturbation_bound().map_err(CliError::from_model)? {
        if !check.passes {
            log::warn!(
                "term {} violates the perturbation bound: norm {:.3e} > {:.3e}",
                check.term,
                check.spectral_norm,
                check.bound
            );
        }
    }
    let sigma = cfg.boundary_condition(&phi).map_err(CliError::from_model)?;
    Ok(Prepared { phi, sigma })
}

/// Builds the Gibbs ensemble of one volume.
pub fn ensemble_for(cfg: &ExperimentConfig, prep: &Prepared, spec: VolumeSpec) -> Result<GibbsEnsemble, CliError> {
    let volume = spec.build(cfg.dim, cfg.max_qubits)?;
    let h = assemble_hamiltonian(&prep.phi, &volume, &prep.sigma, cfg.max_qubits)?;
    Ok(GibbsEnsemble::new(h, cfg.beta)?)
}

/// Runs every volume, concurrently, and returns reports in config order.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<VolumeReport>, CliError> {
    // fail before any work if a volume is over the cap
    if let Some(spec) = cfg.volumes.iter().find(|v| v.n_sites(cfg.dim) > cfg.max_qubits) {
        return Err(CliError::Cap(crate::Error::SizeLimit { sites: spec.n_sites(cfg.dim), cap: cfg.max_qubits }));
    }
    let prep = prepare(cfg)?;
    let results: Vec<Result<VolumeReport, CliError>> = cfg
        .volumes
        .par_iter()
        .enumerate()
        .map(|(k, &spec)| process_volume(cfg, &prep, k, spec))
        .collect();
    results.into_iter().collect()
}

fn process_volume(cfg: &ExperimentConfig, prep: &Prepared, k: usize, spec: VolumeSpec) -> Result<VolumeReport, CliError> {
    let ens = ensemble_for(cfg, prep, spec)?;
    let thermo = ens.thermo_densities();
    let identity_residual = thermo.identity_residual();
    if identity_residual.is_nan() || identity_residual > IDENTITY_TOL {
        return Err(CliError::Numeric(format!(
            "{} {}: entropy-rate identity residual {identity_residual:.3e} exceeds {IDENTITY_TOL:.0e}",
            spec.shape(),
            spec.parameter()
        )));
    }
    let h_ref = cfg.h_ref.resolve(&ens);
    let dim = ens.dim();
    let (count, mixing) = match cfg.decomposition {
        DecompositionKind::Eigen => (dim, Mixing::Identity),
        DecompositionKind::Random => (
            dim * cfg.decomposition_factor,
            Mixing::Random { seed: cfg.seed.wrapping_add(k as u64) },
        ),
    };
    let decomposition = make_decomposition(&ens, count, mixing)?;
    let typical = cfg
        .deltas
        .iter()
        .map(|&delta| {
            let t = typical_subspace(&ens, h_ref, delta)?;
            let pi = typical_projector(&t, ens.spectrum());
            Ok(TypicalRow {
                delta,
                h_ref,
                dim: t.dim(),
                mass: t.mass,
                dim_rate: t.dimension_rate(),
                sandwich: t.sandwich(),
                fidelity: fidelity(&decomposition, &pi)?,
                trace_rho_pi: trace_rho_projector(&ens, &pi)?,
                codeword_len: (!t.is_empty()).then(|| codeword_length(t.dim())),
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let h = thermo.entropy_rate_bits;
    let sources = cfg
        .rates
        .iter()
        .map(|&r| (RateSource::Fixed, r))
        .chain(cfg.rate_offsets.iter().map(|&o| (RateSource::Offset(o), (h - o).max(0.0))));
    let best_rate = sources
        .map(|(source, rate)| Ok(BestRateRow { source, rate, mass: best_rate_mass(&ens, rate)? }))
        .collect::<crate::Result<Vec<_>>>()?;
    let lln = cfg.lln_t.iter().map(|&t| (t, lln_residual(&ens, t))).collect();
    Ok(VolumeReport {
        spec,
        n_sites: ens.n_sites(),
        lambda: cfg.lambda,
        thermo,
        identity_residual,
        typical,
        best_rate,
        lln,
    })
}

/// One line of the joined table: a volume crossed with one δ, one rate and
/// one time.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub shape: &'static str,
    pub n: usize,
    pub n_sites: usize,
    pub beta: f64,
    pub lambda: f64,
    pub s_bits: f64,
    pub f: f64,
    pub g: f64,
    pub h_bits: f64,
    pub identity_residual: f64,
    pub delta: f64,
    pub typical_dim: usize,
    pub typical_mass: f64,
    pub dim_rate: Option<f64>,
    pub best_rate_r: f64,
    pub best_rate_mass: f64,
    pub lln_t: f64,
    pub lln_residual: f64,
    pub fidelity: f64,
    pub codeword_len: Option<usize>,
}

pub fn sweep_rows(report: &VolumeReport) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    let th = &report.thermo;
    for t in &report.typical {
        for b in &report.best_rate {
            for &(time, residual) in &report.lln {
                rows.push(SweepRow {
                    shape: report.spec.shape(),
                    n: report.spec.parameter(),
                    n_sites: report.n_sites,
                    beta: th.beta,
                    lambda: report.lambda,
                    s_bits: th.entropy_rate_bits * report.n_sites as f64,
                    f: th.free_energy,
                    g: th.energy,
                    h_bits: th.entropy_rate_bits,
                    identity_residual: report.identity_residual,
                    delta: t.delta,
                    typical_dim: t.dim,
                    typical_mass: t.mass,
                    dim_rate: t.dim_rate,
                    best_rate_r: b.rate,
                    best_rate_mass: b.mass,
                    lln_t: time,
                    lln_residual: residual,
                    fidelity: t.fidelity,
                    codeword_len: t.codeword_len,
                });
            }
        }
    }
    rows
}
