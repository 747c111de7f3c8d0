//! Boundary-projected Hamiltonians and local observables as dense
//! Hermitian matrices in the quasiclassical basis.
//!
//! Basis convention: spin up is bit 0, spin down is bit 1, and the first
//! site of the volume ordering is the most significant bit of the basis
//! index. A term that reaches into the boundary envelope is frozen there:
//! its classical part is evaluated at the boundary spins of `σ` and its
//! quantum part is replaced by the matrix block whose boundary row and
//! column labels both equal `σ`. That block is `P^σ Φ_X P^σ` restricted to
//! the `2^{|Λ|}`-dimensional boundary-fixed subspace.

use std::collections::BTreeSet;

use crate::error::{domain, Error, Result};
use crate::interaction::{Instance, Interaction, GroundStateConfig};
use crate::lattice::{boundary_envelope, Configuration, Site, Spin, Volume};
use crate::linalg::{hermitian_defect, max_abs, CMatrix, C_ONE, C_ZERO};
use num_complex::Complex64;

const HERMITIAN_TOL: f64 = 1e-12;

/// A dense Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    /// Checks Hermiticity to `1e-12` relative to the largest entry.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return domain(format!("operator must be square, got {}x{}", matrix.nrows(), matrix.ncols()));
        }
        let defect = hermitian_defect(&matrix);
        if defect > HERMITIAN_TOL * max_abs(&matrix).max(f64::MIN_POSITIVE) {
            return domain(format!("operator is not Hermitian (defect {defect:e})"));
        }
        Ok(HermitianOperator { matrix })
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianOperator { matrix: CMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        HermitianOperator { matrix: CMatrix::identity(dim, dim) }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut matrix = CMatrix::zeros(n, n);
        for (k, &d) in diag.iter().enumerate() {
            matrix[(k, k)] = Complex64::new(d, 0.0);
        }
        HermitianOperator { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|c| (0..n).all(|r| r == c || self.matrix[(r, c)] == C_ZERO))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        HermitianOperator { matrix: &self.matrix * Complex64::new(factor, 0.0) }
    }
}

impl std::ops::Add for &HermitianOperator {
    type Output = HermitianOperator;

    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator { matrix: &self.matrix + &rhs.matrix }
    }
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[C_ZERO, C_ONE, C_ONE, C_ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[C_ONE, C_ZERO, C_ZERO, -C_ONE])
}

/// Bijection between basis indices and spin configurations on a volume.
#[derive(Clone, Debug)]
pub struct QuasiclassicalBasis<'a> {
    volume: &'a Volume,
}

impl<'a> QuasiclassicalBasis<'a> {
    pub fn new(volume: &'a Volume) -> Self {
        QuasiclassicalBasis { volume }
    }

    pub fn dim(&self) -> usize {
        1 << self.volume.len()
    }

    pub fn index_of(&self, omega: &Configuration) -> Result<usize> {
        let n = self.volume.len();
        let mut index = 0;
        for (k, site) in self.volume.sites().iter().enumerate() {
            let spin = omega
                .get(site)
                .ok_or_else(|| Error::Domain(format!("configuration has no value at {site:?}")))?;
            index |= spin.bit() << (n - 1 - k);
        }
        Ok(index)
    }

    pub fn configuration(&self, index: usize) -> Configuration {
        let n = self.volume.len();
        self.volume
            .sites()
            .iter()
            .enumerate()
            .map(|(k, s)| (s.clone(), Spin::from_bit(index >> (n - 1 - k))))
            .collect()
    }
}

/// A placed term reduced to the volume: `op` acts on the tensor factors
/// `positions` (MSB first) after freezing the boundary sites.
#[derive(Clone, Debug)]
pub struct FrozenTerm {
    pub instance: Instance,
    pub positions: Vec<usize>,
    pub op: CMatrix,
    /// Whether any site of the support lies in the boundary envelope.
    pub touches_boundary: bool,
}

/// Every term meeting `volume`, frozen against `sigma` on the envelope.
pub fn frozen_terms(phi: &Interaction, volume: &Volume, sigma: &GroundStateConfig) -> Result<Vec<FrozenTerm>> {
    if phi.dim() != volume.dim() || sigma.dim() != volume.dim() {
        return domain("interaction, volume and boundary condition must share one dimension");
    }
    let envelope: BTreeSet<Site> = boundary_envelope(volume, phi.range());
    phi.instances_meeting_volume(volume)
        .into_iter()
        .map(|inst| freeze(phi, volume, &envelope, sigma, inst))
        .collect()
}

fn freeze(
    phi: &Interaction,
    volume: &Volume,
    envelope: &BTreeSet<Site>,
    sigma: &GroundStateConfig,
    instance: Instance,
) -> Result<FrozenTerm> {
    let term = &phi.terms()[instance.term];
    let k = term.size();
    let mut inside = Vec::new(); // (local bit, volume position)
    let mut fixed_bits = 0usize;
    for (local, site) in instance.sites.iter().enumerate() {
        let shift = k - 1 - local;
        if let Some(pos) = volume.position(site) {
            inside.push((shift, pos));
        } else if envelope.contains(site) {
            fixed_bits |= sigma.spin_at(site).bit() << shift;
        } else {
            return Err(Error::Consistency(format!(
                "term {} at base {:?} reaches {site:?}, outside the volume and its envelope",
                instance.term, instance.base
            )));
        }
    }
    let touches_boundary = inside.len() < k;
    let full = term.full_matrix();
    let m = inside.len();
    let spread = |reduced: usize| -> usize {
        inside
            .iter()
            .enumerate()
            .fold(fixed_bits, |acc, (r, &(shift, _))| acc | (((reduced >> (m - 1 - r)) & 1) << shift))
    };
    let op = CMatrix::from_fn(1 << m, 1 << m, |a, b| full[(spread(a), spread(b))]);
    Ok(FrozenTerm {
        positions: inside.iter().map(|&(_, p)| p).collect(),
        op,
        instance,
        touches_boundary,
    })
}

/// Adds `weight · op` acting on `positions` of an `n`-qubit register.
pub(crate) fn accumulate_embedded(target: &mut CMatrix, op: &CMatrix, positions: &[usize], n: usize, weight: f64) {
    let m = positions.len();
    let shifts: Vec<usize> = positions.iter().map(|&p| n - 1 - p).collect();
    let mask = shifts.iter().fold(0usize, |acc, &s| acc | (1 << s));
    let scatter = |local: usize| -> usize {
        shifts
            .iter()
            .enumerate()
            .fold(0, |acc, (r, &s)| acc | (((local >> (m - 1 - r)) & 1) << s))
    };
    let scattered: Vec<usize> = (0..1 << m).map(scatter).collect();
    // nonzero entries of each local row
    let rows: Vec<Vec<(usize, Complex64)>> = (0..1 << m)
        .map(|a| {
            (0..1 << m)
                .filter(|&b| op[(a, b)] != C_ZERO)
                .map(|b| (scattered[b], op[(a, b)] * weight))
                .collect()
        })
        .collect();
    for row in 0..1usize << n {
        let local = shifts.iter().fold(0, |acc, &s| (acc << 1) | ((row >> s) & 1));
        let rest = row & !mask;
        for &(col_bits, value) in &rows[local] {
            target[(row, rest | col_bits)] += value;
        }
    }
}

fn check_cap(volume: &Volume, max_qubits: usize) -> Result<()> {
    if volume.len() > max_qubits {
        return Err(Error::SizeLimit { sites: volume.len(), cap: max_qubits });
    }
    Ok(())
}

/// `H^σ_Λ`: the sum of all frozen terms meeting `volume`.
pub fn assemble_hamiltonian(
    phi: &Interaction,
    volume: &Volume,
    sigma: &GroundStateConfig,
    max_qubits: usize,
) -> Result<HermitianOperator> {
    check_cap(volume, max_qubits)?;
    let n = volume.len();
    let mut h = CMatrix::zeros(1 << n, 1 << n);
    for t in frozen_terms(phi, volume, sigma)? {
        accumulate_embedded(&mut h, &t.op, &t.positions, n, 1.0);
    }
    HermitianOperator::new(h)
}

/// Embeds `op`, acting on `sites` in the given order, into the volume.
pub fn embed_local(op: &CMatrix, sites: &[Site], volume: &Volume) -> Result<HermitianOperator> {
    let expected = 1usize << sites.len();
    if op.nrows() != expected || op.ncols() != expected {
        return domain(format!("operator on {} sites must be {expected}x{expected}", sites.len()));
    }
    let mut positions = Vec::with_capacity(sites.len());
    for s in sites {
        match volume.position(s) {
            Some(p) if !positions.contains(&p) => positions.push(p),
            Some(_) => return domain(format!("site {s:?} listed twice")),
            None => return domain(format!("site {s:?} is not in the volume")),
        }
    }
    let n = volume.len();
    let mut out = CMatrix::zeros(1 << n, 1 << n);
    accumulate_embedded(&mut out, op, &positions, n, 1.0);
    HermitianOperator::new(out)
}

/// `Θ_j = Σ_{X ∋ j, X ∩ Λ ≠ ∅} Φ_X / |X|`, frozen like the Hamiltonian.
/// `|X|` is the full support size, boundary sites included.
pub fn theta_observable(
    phi: &Interaction,
    volume: &Volume,
    sigma: &GroundStateConfig,
    site: &Site,
    max_qubits: usize,
) -> Result<HermitianOperator> {
    check_cap(volume, max_qubits)?;
    if !volume.contains(site) {
        return domain(format!("site {site:?} is not in the volume"));
    }
    let n = volume.len();
    let mut theta = CMatrix::zeros(1 << n, 1 << n);
    for t in frozen_terms(phi, volume, sigma)? {
        if t.instance.sites.contains(site) {
            let weight = 1.0 / t.instance.sites.len() as f64;
            accumulate_embedded(&mut theta, &t.op, &t.positions, n, weight);
        }
    }
    HermitianOperator::new(theta)
}
