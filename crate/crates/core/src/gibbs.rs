//! Full Hermitian eigendecomposition and the log-domain Gibbs ensemble.
//!
//! The ensemble never holds `e^{-βE}` in the linear domain: the eigenvalues
//! of `ρ = e^{-βH}/Ξ` are stored as `ln κ_j = -βE_j - ln Ξ` with `ln Ξ`
//! obtained by a max-shifted logsumexp. Everything is in nats internally;
//! conversion to bits happens only in the entropy outputs.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::hamiltonian::HermitianOperator;
use crate::linalg::{is_real, logsumexp, quadratic_form, CMatrix, LOG2_E};

/// Per-pair residual bound `‖Hv - Ev‖ ≤ tol · ‖H‖`.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Orthonormality bound on `|V†V - I|`.
pub const ORTHONORMALITY_TOL: f64 = 1e-9;

/// Eigenpairs with ascending energies; `vectors` holds them as columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub energies: Vec<f64>,
    pub vectors: CMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn vector(&self, j: usize) -> nalgebra::DVectorView<'_, Complex64> {
        self.vectors.column(j)
    }
}

/// Diagonalizes `h`, verifying residuals and orthonormality.
///
/// Real symmetric input takes a real-arithmetic path.
pub fn diagonalize(h: &HermitianOperator) -> Result<Spectrum> {
    let n = h.dim();
    if n == 0 {
        return domain("cannot diagonalize an empty operator");
    }
    let max_iter = 1000 * n.max(8);
    let (energies, vectors) = if is_real(h.matrix()) {
        let real: DMatrix<f64> = h.matrix().map(|z| z.re);
        let eig = SymmetricEigen::try_new(real.clone(), f64::EPSILON, max_iter)
            .ok_or_else(|| Error::Numeric(format!("symmetric eigensolver did not converge on dimension {n}")))?;
        let order = ascending_order(eig.eigenvalues.as_slice());
        let energies: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        verify_real(&real, &energies, &vecs)?;
        (energies, vecs.map(|x| Complex64::new(x, 0.0)))
    } else {
        let eig = SymmetricEigen::try_new(h.matrix().clone(), f64::EPSILON, max_iter)
            .ok_or_else(|| Error::Numeric(format!("Hermitian eigensolver did not converge on dimension {n}")))?;
        let order = ascending_order(eig.eigenvalues.as_slice());
        let energies: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vecs = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        verify_complex(h.matrix(), &energies, &vecs)?;
        (energies, vecs)
    };
    Ok(Spectrum { energies, vectors })
}

fn ascending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    order
}

fn spectral_scale(energies: &[f64]) -> f64 {
    let scale = energies.iter().map(|e| e.abs()).fold(0.0, f64::max);
    scale.max(f64::MIN_POSITIVE)
}

fn verify_real(h: &DMatrix<f64>, energies: &[f64], v: &DMatrix<f64>) -> Result<()> {
    let n = energies.len();
    let hv = h * v;
    let scale = spectral_scale(energies);
    for (j, &e) in energies.iter().enumerate() {
        let res = (0..n).map(|r| (hv[(r, j)] - e * v[(r, j)]).powi(2)).sum::<f64>().sqrt();
        if res > RESIDUAL_TOL * scale {
            return Err(Error::Numeric(format!("eigenpair {j} residual {res:e} exceeds {:e}", RESIDUAL_TOL * scale)));
        }
    }
    let gram = v.transpose() * v;
    let defect = (&gram - DMatrix::identity(n, n)).amax();
    if defect > ORTHONORMALITY_TOL {
        return Err(Error::Numeric(format!("eigenvectors deviate from orthonormality by {defect:e}")));
    }
    Ok(())
}

fn verify_complex(h: &CMatrix, energies: &[f64], v: &CMatrix) -> Result<()> {
    let n = energies.len();
    let hv = h * v;
    let scale = spectral_scale(energies);
    for (j, &e) in energies.iter().enumerate() {
        let res = (0..n).map(|r| (hv[(r, j)] - v[(r, j)] * e).norm_sqr()).sum::<f64>().sqrt();
        if res > RESIDUAL_TOL * scale {
            return Err(Error::Numeric(format!("eigenpair {j} residual {res:e} exceeds {:e}", RESIDUAL_TOL * scale)));
        }
    }
    let gram = v.adjoint() * v;
    let defect = (&gram - CMatrix::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if defect > ORTHONORMALITY_TOL {
        return Err(Error::Numeric(format!("eigenvectors deviate from orthonormality by {defect:e}")));
    }
    Ok(())
}

/// The Gibbs state `ρ = e^{-βH}/Ξ` in its eigenbasis.
#[derive(Clone, Debug)]
pub struct GibbsEnsemble {
    beta: f64,
    n_sites: usize,
    hamiltonian: HermitianOperator,
    spectrum: Spectrum,
    log_weights: Vec<f64>,
    log_partition: f64,
}

impl GibbsEnsemble {
    /// Diagonalizes `h` and builds the ensemble at inverse temperature `beta`.
    pub fn new(h: HermitianOperator, beta: f64) -> Result<Self> {
        let spectrum = diagonalize(&h)?;
        Self::from_spectrum(h, spectrum, beta)
    }

    pub fn from_spectrum(h: HermitianOperator, spectrum: Spectrum, beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return domain(format!("inverse temperature must be positive and finite, got {beta}"));
        }
        let dim = h.dim();
        if !dim.is_power_of_two() {
            return domain(format!("operator dimension {dim} is not a power of two"));
        }
        if spectrum.dim() != dim {
            return domain("spectrum dimension does not match the operator");
        }
        let exponents: Vec<f64> = spectrum.energies.iter().map(|e| -beta * e).collect();
        let log_partition = logsumexp(&exponents);
        if !log_partition.is_finite() {
            return Err(Error::Numeric(format!("log partition function is {log_partition}")));
        }
        let log_weights = exponents.iter().map(|x| x - log_partition).collect();
        Ok(GibbsEnsemble {
            beta,
            n_sites: dim.trailing_zeros() as usize,
            hamiltonian: h,
            spectrum,
            log_weights,
            log_partition,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Number of qubits, `log₂` of the dimension.
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.hamiltonian
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// `ln κ_j`, in ascending-energy order.
    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// `log₂ κ_j`.
    pub fn log2_weights(&self) -> Vec<f64> {
        self.log_weights.iter().map(|l| l * LOG2_E).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.log_weights.iter().map(|l| l.exp()).collect()
    }

    /// `ln Ξ`.
    pub fn log_partition(&self) -> f64 {
        self.log_partition
    }

    /// `-β⟨ψ_j|H|ψ_j⟩ - ln Ξ`, evaluated through the quadratic form rather
    /// than the stored eigenvalue.
    pub fn eigenvalue_via_energy(&self, j: usize) -> Result<f64> {
        if j >= self.dim() {
            return domain(format!("eigenstate index {j} out of range 0..{}", self.dim()));
        }
        let energy = quadratic_form(self.hamiltonian.matrix(), self.spectrum.vector(j)).re;
        Ok(-self.beta * energy - self.log_partition)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        let nats: f64 = self.log_weights.iter().map(|&l| -l.exp() * l).sum();
        LOG2_E * nats
    }

    /// `Σ_j κ_j E_j`.
    pub fn mean_energy(&self) -> f64 {
        self.log_weights
            .iter()
            .zip(&self.spectrum.energies)
            .map(|(l, e)| l.exp() * e)
            .sum()
    }

    /// `tr ρA = Σ_j κ_j ⟨ψ_j|A|ψ_j⟩`, including the (roundoff) imaginary part.
    pub fn expectation_complex(&self, a: &HermitianOperator) -> Result<Complex64> {
        if a.dim() != self.dim() {
            return domain(format!("observable dimension {} does not match ensemble {}", a.dim(), self.dim()));
        }
        let av = a.matrix() * &self.spectrum.vectors;
        let mut total = Complex64::new(0.0, 0.0);
        for (j, l) in self.log_weights.iter().enumerate() {
            total += self.spectrum.vectors.column(j).dotc(&av.column(j)) * l.exp();
        }
        Ok(total)
    }

    pub fn expectation(&self, a: &HermitianOperator) -> Result<f64> {
        Ok(self.expectation_complex(a)?.re)
    }

    /// `φ(τ) = Σ_j κ_j e^{iτE_j}`, divided by `Σ_j κ_j` so that `φ(0) = 1`
    /// holds exactly in floating point.
    pub fn characteristic_function(&self, tau: f64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        let mut norm = 0.0;
        for (l, e) in self.log_weights.iter().zip(&self.spectrum.energies) {
            let w = l.exp();
            norm += w;
            total += Complex64::from_polar(w, tau * e);
        }
        total / norm
    }

    pub fn thermo_densities(&self) -> ThermoDensities {
        let sites = self.n_sites.max(1) as f64;
        ThermoDensities {
            free_energy: -self.log_partition / (self.beta * sites),
            energy: self.mean_energy() / sites,
            entropy_rate_bits: self.entropy_bits() / sites,
            beta: self.beta,
            n_sites: self.n_sites,
        }
    }
}

/// Finite-volume thermodynamic densities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermoDensities {
    /// `f_Λ = -ln Ξ / (β|Λ|)`.
    pub free_energy: f64,
    /// `g_Λ = ⟨H⟩/|Λ|`.
    pub energy: f64,
    /// `h_Λ = S/|Λ|` in bits per site.
    pub entropy_rate_bits: f64,
    pub beta: f64,
    pub n_sites: usize,
}

impl ThermoDensities {
    /// `|h_Λ - β log₂e (g_Λ - f_Λ)|`.
    pub fn identity_residual(&self) -> f64 {
        (self.entropy_rate_bits - self.beta * LOG2_E * (self.energy - self.free_energy)).abs()
    }
}
