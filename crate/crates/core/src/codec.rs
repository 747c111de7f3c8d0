//! Typical-subspace compression.
//!
//! A [`Codebook`] numbers the typical eigenstates in ascending index order
//! with fixed-length big-endian bitstrings of length
//! `max(1, ceil(log₂ dim))`. For general decompositions
//! `ρ = Σ p_i |φ_i⟩⟨φ_i|` the encoder sends `φ_i` to the typical
//! eigenstate with the largest overlap modulus, and the decoder sends an
//! eigenstate back to the decomposition vector with the largest overlap
//! modulus. Fidelity is `Σ p_i ⟨φ_i|Π|φ_i⟩` with `Π` the typical projector.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{domain, Error, Result};
use crate::gibbs::{GibbsEnsemble, Spectrum};
use crate::hamiltonian::HermitianOperator;
use crate::linalg::{CMatrix, C_ZERO};
use crate::typicality::TypicalSubspace;

/// `‖Πφ‖²` at or below this counts as `Πφ = 0`.
pub const UNENCODABLE_TOL: f64 = 1e-24;

/// A fixed-length bitstring, most significant bit first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword(Vec<bool>);

impl Codeword {
    pub fn from_rank(rank: usize, length: usize) -> Self {
        Codeword((0..length).rev().map(|k| k < usize::BITS as usize && (rank >> k) & 1 == 1).collect())
    }

    pub fn parse(bits: &str) -> Result<Self> {
        bits.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidCodeword {
                    codeword: bits.to_string(),
                    reason: format!("unexpected character {c:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Codeword)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Big-endian value, `None` if it does not fit in `usize`.
    pub fn rank(&self) -> Option<usize> {
        self.0.iter().try_fold(0usize, |acc, &b| {
            acc.checked_mul(2).map(|v| v + b as usize)
        })
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Codeword({self})")
    }
}

/// Result of compressing one eigenstate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Compressed {
    Codeword(Codeword),
    Atypical,
}

/// Bijection between typical eigenstate indices and codewords.
#[derive(Clone, Debug)]
pub struct Codebook {
    length: usize,
    n_sites: usize,
    indices: Vec<usize>,
    ranks: HashMap<usize, usize>,
}

impl Codebook {
    pub fn build(subspace: &TypicalSubspace) -> Result<Self> {
        let dim = subspace.dim();
        if dim == 0 {
            return Err(Error::EmptySubspace);
        }
        let length = codeword_length(dim);
        let mut indices = subspace.indices.clone();
        indices.sort_unstable();
        let ranks = indices.iter().enumerate().map(|(r, &j)| (j, r)).collect();
        Ok(Codebook { length, n_sites: subspace.n_sites, indices, ranks })
    }

    /// Bits per codeword.
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn compress(&self, j: usize) -> Compressed {
        match self.ranks.get(&j) {
            Some(&rank) => Compressed::Codeword(Codeword::from_rank(rank, self.length)),
            None => Compressed::Atypical,
        }
    }

    pub fn decompress(&self, word: &Codeword) -> Result<usize> {
        if word.len() != self.length {
            return Err(Error::InvalidCodeword {
                codeword: word.to_string(),
                reason: format!("length {} differs from codebook length {}", word.len(), self.length),
            });
        }
        word.rank()
            .and_then(|r| self.indices.get(r).copied())
            .ok_or_else(|| Error::InvalidCodeword {
                codeword: word.to_string(),
                reason: format!("rank outside the {} assigned codewords", self.indices.len()),
            })
    }

    /// `(codeword, eigenstate index)` pairs in codeword order.
    pub fn entries(&self) -> impl Iterator<Item = (Codeword, usize)> + '_ {
        self.indices
            .iter()
            .enumerate()
            .map(|(r, &j)| (Codeword::from_rank(r, self.length), j))
    }

    /// Two-column text: `codeword eigen_index`, one pair per line, after a
    /// header line.
    pub fn write_text<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "codeword eigen_index")?;
        for (word, j) in self.entries() {
            writeln!(out, "{word} {j}")?;
        }
        Ok(())
    }
}

/// `max(1, ceil(log₂ dim))`.
pub fn codeword_length(dim: usize) -> usize {
    if dim <= 1 {
        1
    } else {
        (usize::BITS - (dim - 1).leading_zeros()) as usize
    }
}

/// `Π = Σ_{j typical} |ψ_j⟩⟨ψ_j|`.
pub fn typical_projector(subspace: &TypicalSubspace, spectrum: &Spectrum) -> HermitianOperator {
    let n = spectrum.dim();
    let cols: Vec<_> = subspace.indices.iter().map(|&j| spectrum.vectors.column(j)).collect();
    if cols.is_empty() {
        return HermitianOperator::zeros(n);
    }
    let basis = CMatrix::from_columns(&cols);
    let p = &basis * basis.adjoint();
    // exact symmetrization keeps roundoff from breaking the Hermitian check
    let sym = (&p + p.adjoint()) * Complex64::new(0.5, 0.0);
    HermitianOperator::new(sym).expect("symmetrized projector is Hermitian")
}

/// How eigenvectors are mixed into a decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mixing {
    /// `W = [I; 0]`: the eigen-decomposition, padded with zero-weight vectors.
    Identity,
    /// A Haar-like random isometry drawn from the seed.
    Random { seed: u64 },
}

/// `ρ = Σ_i p_i |φ_i⟩⟨φ_i|` with unit columns `φ_i`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub weights: Vec<f64>,
    pub vectors: CMatrix,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ_i p_i |φ_i⟩⟨φ_i|`.
    pub fn density_matrix(&self) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (i, &p) in self.weights.iter().enumerate() {
            scaled.column_mut(i).scale_mut(p.sqrt());
        }
        &scaled * scaled.adjoint()
    }
}

/// A decomposition of the ensemble's `ρ` into `count` unit vectors.
///
/// With an isometry `W` (`W†W = I`) the vectors
/// `u_i = Σ_j W_ij √κ_j ψ_j` satisfy `Σ_i |u_i⟩⟨u_i| = ρ`; then
/// `p_i = ‖u_i‖²` and `φ_i = u_i/‖u_i‖`.
pub fn make_decomposition(ensemble: &GibbsEnsemble, count: usize, mixing: Mixing) -> Result<Decomposition> {
    let dim = ensemble.dim();
    if count < dim {
        return domain(format!("a decomposition needs at least {dim} vectors, got {count}"));
    }
    let isometry = match mixing {
        Mixing::Identity => CMatrix::from_fn(count, dim, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { C_ZERO }),
        Mixing::Random { seed } => random_isometry(count, dim, seed),
    };
    let weights = ensemble.weights();
    let mut scaled = ensemble.spectrum().vectors.clone();
    for (j, &k) in weights.iter().enumerate() {
        scaled.column_mut(j).scale_mut(k.sqrt());
    }
    // column i of the product is u_i
    let unnormalized = &scaled * isometry.transpose();
    let mut vectors = unnormalized;
    let mut ps = Vec::with_capacity(count);
    for i in 0..count {
        let norm_sqr: f64 = vectors.column(i).iter().map(|z| z.norm_sqr()).sum();
        if norm_sqr > 0.0 {
            vectors.column_mut(i).unscale_mut(norm_sqr.sqrt());
            ps.push(norm_sqr);
        } else {
            // zero-weight padding still needs a unit vector
            vectors.column_mut(i).fill(C_ZERO);
            vectors[(i % dim, i)] = Complex64::new(1.0, 0.0);
            ps.push(0.0);
        }
    }
    let total: f64 = ps.iter().sum();
    ps.iter_mut().for_each(|p| *p /= total);
    Ok(Decomposition { weights: ps, vectors })
}

/// `rows × cols` matrix with orthonormal columns, from the QR factor of a
/// complex Gaussian matrix with the phases of `R`'s diagonal removed.
fn random_isometry(rows: usize, cols: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gaussian = CMatrix::zeros(rows, cols);
    // sequential fill, column-major, for a schedule-independent stream
    for c in 0..cols {
        for r in 0..rows {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            gaussian[(r, c)] = Complex64::new(re, im);
        }
    }
    let qr = gaussian.qr();
    let r = qr.r();
    let mut q = qr.q();
    for c in 0..cols {
        let d = r[(c, c)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for row in 0..rows {
                q[(row, c)] *= phase;
            }
        }
    }
    q
}

/// Encode/compress/decode outcome for one decomposition vector.
#[derive(Clone, Debug, PartialEq)]
pub struct MapRecord {
    pub vector: usize,
    /// `E(φ_i)`: the typical eigenstate with the largest `|⟨ψ_j|φ_i⟩|`,
    /// absent when `Πφ_i = 0`.
    pub encoded: Option<usize>,
    pub codeword: Option<Codeword>,
    /// `D(E(φ_i))`: the decomposition vector with the largest `|⟨φ_k|ψ_j⟩|`.
    pub decoded: Option<usize>,
    /// `‖Πφ_i‖²`.
    pub projected_norm_sqr: f64,
}

pub fn encode_decode_maps(
    decomposition: &Decomposition,
    subspace: &TypicalSubspace,
    spectrum: &Spectrum,
) -> Result<Vec<MapRecord>> {
    let codebook = Codebook::build(subspace)?;
    let cols: Vec<_> = subspace.indices.iter().map(|&j| spectrum.vectors.column(j)).collect();
    let typical = CMatrix::from_columns(&cols);
    // overlaps[(t, i)] = ⟨ψ_{j_t}|φ_i⟩
    let overlaps: DMatrix<Complex64> = typical.adjoint() * &decomposition.vectors;
    let moduli = overlaps.map(|z| z.norm());
    let decoder: Vec<usize> = (0..subspace.dim()).map(|t| argmax(moduli.row(t).iter().copied())).collect();
    Ok((0..decomposition.len())
        .map(|i| {
            let column = moduli.column(i);
            let projected_norm_sqr: f64 = column.iter().map(|m| m * m).sum();
            if projected_norm_sqr <= UNENCODABLE_TOL {
                return MapRecord { vector: i, encoded: None, codeword: None, decoded: None, projected_norm_sqr };
            }
            let t = argmax(column.iter().copied());
            let j = subspace.indices[t];
            let codeword = match codebook.compress(j) {
                Compressed::Codeword(w) => Some(w),
                Compressed::Atypical => None,
            };
            MapRecord { vector: i, encoded: Some(j), codeword, decoded: Some(decoder[t]), projected_norm_sqr }
        })
        .collect())
}

/// First index of the maximum.
fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (k, v) in values.enumerate() {
        if v > best.1 {
            best = (k, v);
        }
    }
    best.0
}

/// `F = Σ_i p_i ⟨φ_i|Π|φ_i⟩`.
pub fn fidelity(decomposition: &Decomposition, projector: &HermitianOperator) -> Result<f64> {
    if projector.dim() != decomposition.vectors.nrows() {
        return domain("projector and decomposition dimensions differ");
    }
    let pv = projector.matrix() * &decomposition.vectors;
    Ok(decomposition
        .weights
        .iter()
        .enumerate()
        .map(|(i, &p)| p * decomposition.vectors.column(i).dotc(&pv.column(i)).re)
        .sum())
}

/// `tr(ρΠ) = Σ_j κ_j ⟨ψ_j|Π|ψ_j⟩`.
pub fn trace_rho_projector(ensemble: &GibbsEnsemble, projector: &HermitianOperator) -> Result<f64> {
    ensemble.expectation(projector)
}

/// Lower bound on the rank of any projector reaching fidelity `fid`:
/// `(fid - (1 - mass)) · 2^{|Λ|(h-δ)}`.
pub fn projector_rank_bound(subspace: &TypicalSubspace, fid: f64) -> f64 {
    let n = subspace.n_sites as f64;
    (fid - (1.0 - subspace.mass)) * (n * (subspace.h_ref - subspace.delta)).exp2()
}
