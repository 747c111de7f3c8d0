//! δ-typical subspaces and the finite-volume diagnostics around them:
//! typical mass, dimension growth rate, largest mass reachable with
//! `2^{[|Λ|R]}` eigenstates, and the characteristic-function residual.
//!
//! The window test runs on `log₂ κ_j`: state `j` is typical when
//! `-|Λ|(h + δ) ≤ log₂ κ_j ≤ -|Λ|(h - δ)`, both ends inclusive.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::gibbs::GibbsEnsemble;
use crate::linalg::LOG2_E;

/// How the reference entropy rate of the window is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HRefPolicy {
    /// `h_ref = S/|Λ|` of each volume.
    PerVolume,
    /// One fixed rate in bits per site for every volume.
    Fixed(f64),
}

impl HRefPolicy {
    pub fn resolve(&self, ensemble: &GibbsEnsemble) -> f64 {
        match *self {
            HRefPolicy::PerVolume => ensemble.entropy_bits() / ensemble.n_sites().max(1) as f64,
            HRefPolicy::Fixed(h) => h,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypicalSubspace {
    /// Ascending eigenstate indices inside the window.
    pub indices: Vec<usize>,
    pub h_ref: f64,
    pub delta: f64,
    pub n_sites: usize,
    pub mass: f64,
}

impl TypicalSubspace {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    /// `log₂(dim)/|Λ|`, absent when no state is typical.
    pub fn dimension_rate(&self) -> Option<f64> {
        dimension_rate(self)
    }

    /// Both sides of `(1-ε)·2^{|Λ|(h-δ)} ≤ dim ≤ 2^{|Λ|(h+δ)}`, in `log₂`.
    pub fn sandwich(&self) -> Sandwich {
        let n = self.n_sites as f64;
        let log2_dim = if self.is_empty() { f64::NEG_INFINITY } else { (self.dim() as f64).log2() };
        Sandwich {
            log2_lower: self.mass.log2() + n * (self.h_ref - self.delta),
            log2_dim,
            log2_upper: n * (self.h_ref + self.delta),
        }
    }
}

/// The dimension bounds implied by the window, as `log₂` values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sandwich {
    /// `log₂((1-ε) 2^{|Λ|(h-δ)})` with `1-ε` the typical mass.
    pub log2_lower: f64,
    pub log2_dim: f64,
    pub log2_upper: f64,
}

impl Sandwich {
    pub fn holds(&self) -> bool {
        self.log2_lower <= self.log2_dim && self.log2_dim <= self.log2_upper
    }
}

/// The δ-typical eigenstates of `ensemble` around `h_ref` bits per site.
pub fn typical_subspace(ensemble: &GibbsEnsemble, h_ref: f64, delta: f64) -> Result<TypicalSubspace> {
    if !(delta > 0.0 && delta.is_finite()) {
        return domain(format!("delta must be positive, got {delta}"));
    }
    if !h_ref.is_finite() {
        return domain("h_ref must be finite");
    }
    let n = ensemble.n_sites();
    let lo = -(n as f64) * (h_ref + delta);
    let hi = -(n as f64) * (h_ref - delta);
    let mut indices = Vec::new();
    let mut mass = 0.0;
    for (j, &l) in ensemble.log_weights().iter().enumerate() {
        let log2 = l * LOG2_E;
        if lo <= log2 && log2 <= hi {
            indices.push(j);
            mass += l.exp();
        }
    }
    Ok(TypicalSubspace {
        indices,
        h_ref,
        delta,
        n_sites: n,
        mass: mass.min(1.0),
    })
}

pub fn typical_subspace_with(ensemble: &GibbsEnsemble, policy: HRefPolicy, delta: f64) -> Result<TypicalSubspace> {
    typical_subspace(ensemble, policy.resolve(ensemble), delta)
}

/// Typical masses along a sequence of growing volumes of one model.
pub fn typical_mass_curve(ensembles: &[&GibbsEnsemble], policy: HRefPolicy, delta: f64) -> Result<Vec<f64>> {
    check_family(ensembles)?;
    ensembles
        .iter()
        .map(|e| typical_subspace_with(e, policy, delta).map(|t| t.mass))
        .collect()
}

fn check_family(ensembles: &[&GibbsEnsemble]) -> Result<()> {
    if ensembles.len() < 2 {
        return domain("a mass curve needs at least two volumes");
    }
    let beta = ensembles[0].beta();
    if ensembles.iter().any(|e| e.beta() != beta) {
        return domain("all volumes of a curve must share one inverse temperature");
    }
    if ensembles.windows(2).any(|w| w[0].n_sites() >= w[1].n_sites()) {
        return domain("volumes of a curve must be strictly increasing");
    }
    Ok(())
}

pub fn dimension_rate(subspace: &TypicalSubspace) -> Option<f64> {
    if subspace.is_empty() {
        return None;
    }
    Some((subspace.dim() as f64).log2() / subspace.n_sites.max(1) as f64)
}

/// Interval the dimension rate must fall in once the typical mass is
/// at least `1 - ε`: `[h - δ - log₂(1/(1-ε))/|Λ|, h + δ]`.
pub fn rate_interval(subspace: &TypicalSubspace) -> (f64, f64) {
    let n = subspace.n_sites.max(1) as f64;
    (
        subspace.h_ref - subspace.delta + subspace.mass.log2() / n,
        subspace.h_ref + subspace.delta,
    )
}

/// Largest total weight of `2^{[|Λ|R]}` eigenstates: the sum of that many
/// largest eigenvalues.
pub fn best_rate_mass(ensemble: &GibbsEnsemble, rate: f64) -> Result<f64> {
    if !(rate >= 0.0 && rate.is_finite()) {
        return domain(format!("rate must be non-negative, got {rate}"));
    }
    let n = ensemble.n_sites();
    let exponent = (n as f64 * rate).floor().min(n as f64) as u32;
    let count = (1usize << exponent).min(ensemble.dim());
    Ok(largest_weights_sum(ensemble, count))
}

/// Sum of the `count` largest eigenvalues of the ensemble.
pub fn largest_weights_sum(ensemble: &GibbsEnsemble, count: usize) -> f64 {
    let mut logs = ensemble.log_weights().to_vec();
    logs.sort_by(|a, b| b.total_cmp(a));
    logs.iter().take(count).map(|l| l.exp()).sum::<f64>().min(1.0)
}

/// `|φ(t/|Λ|) - e^{i t g_Λ}|`.
pub fn lln_residual(ensemble: &GibbsEnsemble, t: f64) -> f64 {
    let n = ensemble.n_sites().max(1) as f64;
    let g = ensemble.thermo_densities().energy;
    (ensemble.characteristic_function(t / n) - Complex64::from_polar(1.0, t * g)).norm()
}

/// Per-volume AEP diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct AepRow {
    pub n_sites: usize,
    pub h_ref: f64,
    pub entropy_rate_bits: f64,
    pub subspaces: Vec<TypicalSubspace>,
    /// `(R, best_rate_mass)`.
    pub best_rate: Vec<(f64, f64)>,
    /// `(t, lln_residual)`.
    pub lln: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AepReport {
    pub rows: Vec<AepRow>,
}

impl AepReport {
    /// `rates` are absolute rates in bits per site.
    pub fn build(
        ensembles: &[&GibbsEnsemble],
        policy: HRefPolicy,
        deltas: &[f64],
        rates: &[f64],
        times: &[f64],
    ) -> Result<Self> {
        if ensembles.len() >= 2 {
            check_family(ensembles)?;
        }
        let rows = ensembles
            .iter()
            .map(|e| {
                let h_ref = policy.resolve(e);
                Ok(AepRow {
                    n_sites: e.n_sites(),
                    h_ref,
                    entropy_rate_bits: e.thermo_densities().entropy_rate_bits,
                    subspaces: deltas
                        .iter()
                        .map(|&d| typical_subspace(e, h_ref, d))
                        .collect::<Result<_>>()?,
                    best_rate: rates
                        .iter()
                        .map(|&r| best_rate_mass(e, r).map(|m| (r, m)))
                        .collect::<Result<_>>()?,
                    lln: times.iter().map(|&t| (t, lln_residual(e, t))).collect(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(AepReport { rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::HermitianOperator;

    fn free(n: usize) -> GibbsEnsemble {
        GibbsEnsemble::new(HermitianOperator::zeros(1 << n), 1.0).unwrap()
    }

    #[test]
    fn free_ensemble_is_fully_typical() {
        let ens = free(5);
        let t = typical_subspace(&ens, 1.0, 0.1).unwrap();
        assert_eq!(t.dim(), 32);
        assert!((t.mass - 1.0).abs() < 1e-14);
        assert_eq!(dimension_rate(&t), Some(1.0));
        assert!(t.sandwich().holds());
        assert!(typical_subspace(&ens, 1.0, 0.0).is_err());
    }

    #[test]
    fn wide_window_covers_everything() {
        let ens = GibbsEnsemble::new(HermitianOperator::from_diagonal(&[-1.0, 0.0, 0.3, 2.0]), 2.0).unwrap();
        let h_ref: f64 = 0.4;
        let min_log2 = ens.log2_weights().iter().copied().fold(f64::INFINITY, f64::min);
        let delta = h_ref.max(-min_log2 / 2.0 - h_ref) + 1e-12;
        let t = typical_subspace(&ens, h_ref, delta).unwrap();
        assert_eq!(t.indices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn empty_window_has_no_rate() {
        let ens = free(3);
        let t = typical_subspace(&ens, 0.2, 0.1).unwrap();
        assert!(t.is_empty());
        assert_eq!(dimension_rate(&t), None);
        assert_eq!(t.mass, 0.0);
        assert!(t.sandwich().holds());
    }

    #[test]
    fn best_rate_edges() {
        let ens = GibbsEnsemble::new(HermitianOperator::from_diagonal(&[0.5, -1.0, 0.0, 2.0]), 1.0).unwrap();
        let w = ens.weights();
        assert!((best_rate_mass(&ens, 0.0).unwrap() - w[0]).abs() < 1e-15);
        assert!((best_rate_mass(&ens, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((best_rate_mass(&ens, 7.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((best_rate_mass(&ens, 0.5).unwrap() - (w[0] + w[1])).abs() < 1e-15);
        assert!(best_rate_mass(&ens, -0.1).is_err());
    }

    #[test]
    fn lln_residual_trivial_cases() {
        let ens = GibbsEnsemble::new(HermitianOperator::from_diagonal(&[0.5, -1.0, 0.0, 2.0]), 1.0).unwrap();
        assert_eq!(lln_residual(&ens, 0.0), 0.0);
        assert!((lln_residual(&ens, 1.3) - lln_residual(&ens, -1.3)).abs() < 1e-15);
        let f = free(4);
        assert_eq!(lln_residual(&f, 2.5), 0.0);
    }

    #[test]
    fn mass_curve_validation() {
        let a = free(2);
        let b = free(3);
        assert_eq!(typical_mass_curve(&[&a, &b], HRefPolicy::PerVolume, 0.1).unwrap().len(), 2);
        assert!(typical_mass_curve(&[&b, &a], HRefPolicy::PerVolume, 0.1).is_err());
        assert!(typical_mass_curve(&[&a], HRefPolicy::PerVolume, 0.1).is_err());
        let hot = GibbsEnsemble::new(HermitianOperator::zeros(16), 0.5).unwrap();
        assert!(typical_mass_curve(&[&a, &hot], HRefPolicy::PerVolume, 0.1).is_err());
        let masses = typical_mass_curve(&[&a, &b], HRefPolicy::PerVolume, 0.1).unwrap();
        assert!(masses.iter().all(|m| (m - 1.0).abs() < 1e-14));
    }
}
