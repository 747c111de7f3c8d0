//! Translation-invariant finite-range interactions `Φ = Φ₀ + Q`.
//!
//! An [`Interaction`] stores one representative [`LocalTerm`] per
//! translation orbit. Each term carries its diagonal classical part
//! `Φ_{0X}` as a vector over the configuration basis of its support and its
//! quantum part `Q_X` as a Hermitian matrix. Supports are given as offsets
//! from a base site; a term is instantiated at every base site `a` for which
//! the translated support `X + a` is needed.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::lattice::{connected_span_size, linf_diameter, Configuration, Site, Spin, Volume};
use crate::linalg::{frobenius_norm, is_hermitian, spectral_norm};

/// Largest support size a single term may have.
pub const MAX_TERM_SUPPORT: usize = 8;

/// Largest period cell `find_periodic_ground_states` enumerates.
pub const GROUND_STATE_CELL_BOUND: usize = 16;

/// Energy-density ties closer than this are all reported as ground states.
pub const GROUND_STATE_TIE_TOL: f64 = 1e-12;

const HERMITIAN_TOL: f64 = 1e-12;

/// One local term `Φ_X = Φ_{0X} + Q_X`.
#[derive(Clone, Debug)]
pub struct LocalTerm {
    support: Vec<Site>,
    classical: Vec<f64>,
    quantum: DMatrix<Complex64>,
}

impl LocalTerm {
    /// `support` must be strictly increasing in lexicographic order; the
    /// first site is the most significant bit of the local basis index.
    pub fn new(support: Vec<Site>, classical: Vec<f64>, quantum: DMatrix<Complex64>) -> Result<Self> {
        if support.is_empty() {
            return domain("term support must be nonempty");
        }
        if support.len() > MAX_TERM_SUPPORT {
            return domain(format!(
                "term support has {} sites, cap is {MAX_TERM_SUPPORT}",
                support.len()
            ));
        }
        let dim = support[0].dim();
        if support.iter().any(|s| s.dim() != dim) {
            return domain("term support mixes lattice dimensions");
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return domain("term support must be listed in strictly increasing lexicographic order");
        }
        let local_dim = 1usize << support.len();
        if classical.len() != local_dim {
            return domain(format!(
                "classical part has {} entries, support of {} sites needs {local_dim}",
                classical.len(),
                support.len()
            ));
        }
        if classical.iter().any(|x| !x.is_finite()) {
            return domain("classical part must be finite");
        }
        if quantum.nrows() != local_dim || quantum.ncols() != local_dim {
            return domain(format!(
                "quantum part is {}x{}, expected {local_dim}x{local_dim}",
                quantum.nrows(),
                quantum.ncols()
            ));
        }
        if !is_hermitian(&quantum, HERMITIAN_TOL) {
            return domain("quantum part is not Hermitian");
        }
        Ok(LocalTerm { support, classical, quantum })
    }

    /// A purely classical term.
    pub fn classical(support: Vec<Site>, classical: Vec<f64>) -> Result<Self> {
        let n = 1usize << support.len();
        Self::new(support, classical, DMatrix::zeros(n, n))
    }

    pub fn support(&self) -> &[Site] {
        &self.support
    }

    pub fn size(&self) -> usize {
        self.support.len()
    }

    pub fn classical_part(&self) -> &[f64] {
        &self.classical
    }

    pub fn quantum_part(&self) -> &DMatrix<Complex64> {
        &self.quantum
    }

    pub fn has_quantum_part(&self) -> bool {
        self.quantum.iter().any(|z| *z != Complex64::new(0.0, 0.0))
    }

    /// `Φ_{0X} + Q_X` as one matrix on the local basis.
    pub fn full_matrix(&self) -> DMatrix<Complex64> {
        let mut m = self.quantum.clone();
        for (k, &e) in self.classical.iter().enumerate() {
            m[(k, k)] += Complex64::new(e, 0.0);
        }
        m
    }

    /// Local basis index of the spins `spins` (support order, MSB first).
    pub fn local_index(spins: impl IntoIterator<Item = Spin>) -> usize {
        spins.into_iter().fold(0, |acc, s| (acc << 1) | s.bit())
    }

    /// Sites of the term translated to `base`.
    pub fn placed(&self, base: &Site) -> Vec<Site> {
        self.support.iter().map(|s| s.offset(base)).collect()
    }
}

/// A placed copy of a term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub term: usize,
    pub base: Site,
    pub sites: Vec<Site>,
}

/// A translation-invariant interaction with perturbation parameters.
#[derive(Clone, Debug)]
pub struct Interaction {
    dim: usize,
    terms: Vec<LocalTerm>,
    range: u64,
    lambda: f64,
    norm_constant: f64,
}

impl Interaction {
    /// `lambda` is the perturbation parameter and `norm_constant` the constant
    /// `c` of the bound `‖Q_X‖ ≤ c λ^{s(X)}`.
    pub fn new(dim: usize, terms: Vec<LocalTerm>, lambda: f64, norm_constant: f64) -> Result<Self> {
        if dim == 0 {
            return domain("lattice dimension must be at least 1");
        }
        if terms.iter().any(|t| t.support[0].dim() != dim) {
            return domain(format!("all term supports must live in dimension {dim}"));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return domain("lambda must be finite and non-negative");
        }
        if !(norm_constant.is_finite() && norm_constant >= 0.0) {
            return domain("norm constant must be finite and non-negative");
        }
        let mut range = 0;
        for t in &terms {
            range = range.max(linf_diameter(&t.support)?);
        }
        Ok(Interaction { dim, terms, range, lambda, norm_constant })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[LocalTerm] {
        &self.terms
    }

    /// Largest ℓ∞ diameter of a term support.
    pub fn range(&self) -> u64 {
        self.range
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn norm_constant(&self) -> f64 {
        self.norm_constant
    }

    pub fn has_quantum_part(&self) -> bool {
        self.terms.iter().any(LocalTerm::has_quantum_part)
    }

    /// Every placed term whose support meets `sites`, ordered by term index
    /// and then by base site.
    pub fn instances_meeting<'a>(&self, sites: impl IntoIterator<Item = &'a Site> + Clone) -> Vec<Instance> {
        let mut out = Vec::new();
        for (k, term) in self.terms.iter().enumerate() {
            let bases: BTreeSet<Site> = sites
                .clone()
                .into_iter()
                .flat_map(|x| term.support.iter().map(move |s| x.offset(&s.negated())))
                .collect();
            out.extend(bases.into_iter().map(|base| Instance {
                term: k,
                sites: term.placed(&base),
                base,
            }));
        }
        out
    }

    pub fn instances_meeting_volume(&self, volume: &Volume) -> Vec<Instance> {
        self.instances_meeting(volume.sites())
    }

    fn evaluate_classical(&self, inst: &Instance, omega: &Configuration) -> Result<f64> {
        let mut spins = Vec::with_capacity(inst.sites.len());
        for s in &inst.sites {
            match omega.get(s) {
                Some(v) => spins.push(v),
                None => return domain(format!("configuration has no value at site {s:?}")),
            }
        }
        Ok(self.terms[inst.term].classical[LocalTerm::local_index(spins)])
    }

    /// Classical energy of `omega` summed over every placed term whose
    /// support lies inside the domain of `omega`.
    pub fn classical_energy(&self, omega: &Configuration) -> f64 {
        let domain_sites: Vec<Site> = omega.iter().map(|(s, _)| s.clone()).collect();
        self.instances_meeting(&domain_sites)
            .iter()
            .filter(|inst| inst.sites.iter().all(|s| omega.get(s).is_some()))
            .map(|inst| self.evaluate_classical(inst, omega).expect("support inside domain"))
            .sum()
    }

    /// Classical energy of the terms meeting `volume`, i.e. the diagonal of
    /// `H_{0Λ}` under the boundary values contained in `omega`.
    pub fn classical_energy_in(&self, omega: &Configuration, volume: &Volume) -> Result<f64> {
        let mut total = 0.0;
        for inst in self.instances_meeting_volume(volume) {
            total += self.evaluate_classical(&inst, omega)?;
        }
        Ok(total)
    }

    /// Evaluates `‖Q_X‖ ≤ c λ^{s(X)}` for every term.
    pub fn check_perturbation_bound(&self) -> Result<Vec<PerturbationCheck>> {
        self.terms
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let span = connected_span_size(&t.support.iter().cloned().collect())?;
                let spectral = spectral_norm(&t.quantum);
                let bound = self.norm_constant * self.lambda.powi(span as i32);
                Ok(PerturbationCheck {
                    term: k,
                    support_size: t.size(),
                    span_size: span,
                    spectral_norm: spectral,
                    hilbert_schmidt_norm: frobenius_norm(&t.quantum),
                    bound,
                    // relative slack so that ‖Q‖ = cλ^s exactly is not flagged
                    passes: spectral <= bound * (1.0 + 1e-12) + 1e-15,
                })
            })
            .collect()
    }

    /// Energy per site of the infinite periodic configuration `sigma`.
    pub fn energy_density(&self, sigma: &GroundStateConfig) -> Result<f64> {
        if sigma.dim() != self.dim {
            return domain("periodic configuration dimension does not match the interaction");
        }
        let mut total = 0.0;
        let cell = sigma.cell_sites();
        for base in &cell {
            for term in &self.terms {
                let idx = LocalTerm::local_index(term.support.iter().map(|s| sigma.spin_at(&s.offset(base))));
                total += term.classical[idx];
            }
        }
        Ok(total / cell.len() as f64)
    }

    /// All periodic configurations with every period at most `max_period`
    /// that minimise the classical energy density.
    pub fn find_periodic_ground_states(&self, max_period: usize) -> Result<Vec<GroundStateConfig>> {
        if max_period == 0 {
            return domain("max_period must be at least 1");
        }
        let cell_max = max_period.checked_pow(self.dim as u32).unwrap_or(usize::MAX);
        if cell_max > GROUND_STATE_CELL_BOUND {
            return Err(Error::Capability(format!(
                "period cell of {cell_max} sites exceeds the search bound {GROUND_STATE_CELL_BOUND}"
            )));
        }
        let mut candidates: Vec<(f64, GroundStateConfig)> = Vec::new();
        let mut periods = vec![1usize; self.dim];
        loop {
            let cell_len: usize = periods.iter().product();
            for bits in 0..(1usize << cell_len) {
                let cell = (0..cell_len).map(|k| Spin::from_bit(bits >> (cell_len - 1 - k))).collect();
                let sigma = GroundStateConfig::new(periods.clone(), cell)?;
                candidates.push((self.energy_density(&sigma)?, sigma));
            }
            let mut axis = self.dim;
            loop {
                if axis == 0 {
                    let best = candidates.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
                    let found: BTreeSet<GroundStateConfig> = candidates
                        .into_iter()
                        .filter(|(e, _)| *e <= best + GROUND_STATE_TIE_TOL)
                        .map(|(_, s)| s.canonical())
                        .collect();
                    return Ok(found.into_iter().collect());
                }
                axis -= 1;
                if periods[axis] < max_period {
                    periods[axis] += 1;
                    break;
                }
                periods[axis] = 1;
            }
        }
    }
}

/// Outcome of the perturbation-norm check for one term.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationCheck {
    pub term: usize,
    pub support_size: usize,
    /// `s(X)`, the smallest connected superset size.
    pub span_size: usize,
    pub spectral_norm: f64,
    pub hilbert_schmidt_norm: f64,
    /// `c λ^{s(X)}`.
    pub bound: f64,
    pub passes: bool,
}

/// Transverse-field Ising chain: `-J j_x j_{x+1} - h j_x - λ σ^x_x`.
pub fn preset_tfim(coupling: f64, field: f64, transverse: f64) -> Result<Interaction> {
    if !(transverse.is_finite() && transverse >= 0.0) {
        return domain("transverse strength must be non-negative");
    }
    let zero = Complex64::new(0.0, 0.0);
    let bond = LocalTerm::classical(
        vec![Site::from(0), Site::from(1)],
        vec![-coupling, coupling, coupling, -coupling],
    )?;
    let mut pauli_x = DMatrix::from_element(2, 2, zero);
    pauli_x[(0, 1)] = Complex64::new(-transverse, 0.0);
    pauli_x[(1, 0)] = Complex64::new(-transverse, 0.0);
    let onsite = LocalTerm::new(vec![Site::from(0)], vec![-field, field], pauli_x)?;
    Interaction::new(1, vec![bond, onsite], transverse, 1.0)
}

/// An infinite periodic configuration given by its period cell.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundStateConfig {
    periods: Vec<usize>,
    /// Cell values in lexicographic order over `[0,p_1) × ... × [0,p_d)`.
    cell: Vec<Spin>,
}

impl GroundStateConfig {
    pub fn new(periods: Vec<usize>, cell: Vec<Spin>) -> Result<Self> {
        if periods.is_empty() || periods.contains(&0) {
            return domain("periods must be positive and at least one-dimensional");
        }
        let len: usize = periods.iter().product();
        if cell.len() != len {
            return domain(format!("period cell needs {len} values, got {}", cell.len()));
        }
        Ok(GroundStateConfig { periods, cell })
    }

    pub fn uniform(dim: usize, spin: Spin) -> Self {
        GroundStateConfig { periods: vec![1; dim], cell: vec![spin] }
    }

    pub fn all_up(dim: usize) -> Self {
        Self::uniform(dim, Spin::Up)
    }

    pub fn all_down(dim: usize) -> Self {
        Self::uniform(dim, Spin::Down)
    }

    pub fn dim(&self) -> usize {
        self.periods.len()
    }

    pub fn periods(&self) -> &[usize] {
        &self.periods
    }

    pub fn cell(&self) -> &[Spin] {
        &self.cell
    }

    fn cell_offset(&self, reduced: &[usize]) -> usize {
        reduced.iter().zip(&self.periods).fold(0, |acc, (&c, &p)| acc * p + c)
    }

    pub fn spin_at(&self, site: &Site) -> Spin {
        debug_assert_eq!(site.dim(), self.dim());
        let reduced: Vec<usize> = site
            .coords()
            .iter()
            .zip(&self.periods)
            .map(|(&c, &p)| c.rem_euclid(p as i64) as usize)
            .collect();
        self.cell[self.cell_offset(&reduced)]
    }

    /// Sites of the fundamental cell, lexicographically ordered.
    pub fn cell_sites(&self) -> Vec<Site> {
        let len: usize = self.periods.iter().product();
        (0..len)
            .map(|mut k| {
                let mut coords = vec![0i64; self.dim()];
                for axis in (0..self.dim()).rev() {
                    coords[axis] = (k % self.periods[axis]) as i64;
                    k /= self.periods[axis];
                }
                Site::new(coords)
            })
            .collect()
    }

    pub fn restrict<'a>(&self, sites: impl IntoIterator<Item = &'a Site>) -> Configuration {
        sites.into_iter().map(|s| (s.clone(), self.spin_at(s))).collect()
    }

    /// The same infinite configuration with minimal periods along each axis.
    pub fn canonical(&self) -> Self {
        let mut periods = self.periods.clone();
        for axis in 0..self.dim() {
            let full = self.periods[axis];
            for p in (1..=full).filter(|p| full.is_multiple_of(*p)) {
                let shift_ok = self.cell_sites().iter().all(|s| {
                    let mut shifted = s.coords().to_vec();
                    shifted[axis] += p as i64;
                    self.spin_at(&Site::new(shifted)) == self.spin_at(s)
                });
                if shift_ok {
                    periods[axis] = p;
                    break;
                }
            }
        }
        let reduced = GroundStateConfig { cell: Vec::new(), periods };
        let cell = reduced.cell_sites().iter().map(|s| self.spin_at(s)).collect();
        GroundStateConfig { cell, ..reduced }
    }

    /// Whether two configurations describe the same infinite pattern.
    pub fn same_pattern(&self, other: &GroundStateConfig) -> bool {
        self.canonical() == other.canonical()
    }
}

impl fmt::Debug for GroundStateConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroundStateConfig {
    /// `cell:P1xP2:spins` with `+`/`-` spin symbols.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let periods: Vec<String> = self.periods.iter().map(|p| p.to_string()).collect();
        let cell: String = self.cell.iter().map(|s| s.symbol()).collect();
        write!(f, "cell:{}:{}", periods.join("x"), cell)
    }
}

/// Every configuration with exactly the given periods.
pub fn enumerate_cells(dim: usize, periods: &[usize]) -> Result<Vec<GroundStateConfig>> {
    if periods.len() != dim {
        return domain("period tuple does not match dimension");
    }
    let len: usize = periods.iter().product();
    if len > GROUND_STATE_CELL_BOUND {
        return Err(Error::Capability(format!("cell of {len} sites exceeds {GROUND_STATE_CELL_BOUND}")));
    }
    (0..1usize << len)
        .map(|bits| {
            let cell = (0..len).map(|k| Spin::from_bit(bits >> (len - 1 - k))).collect();
            GroundStateConfig::new(periods.to_vec(), cell)
        })
        .collect()
}
