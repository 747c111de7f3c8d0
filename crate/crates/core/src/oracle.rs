//! Slow, independent reference computations used to cross-check the main
//! pipeline. Nothing here shares code paths with the production assembly,
//! eigensolver or typicality filter.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::interaction::{GroundStateConfig, Interaction};
use crate::lattice::{Site, Volume};
use crate::linalg::{CMatrix, C_ZERO};

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    CMatrix::from_fn(ra * rb, ca * cb, |i, j| a[(i / rb, j / cb)] * b[(i % rb, j % cb)])
}

/// Every placed copy of every term that meets `volume`, found by matching
/// each support site against each volume site.
fn placements(phi: &Interaction, volume: &Volume) -> Vec<(usize, Vec<Site>)> {
    let mut out = Vec::new();
    for (t, term) in phi.terms().iter().enumerate() {
        let mut bases = BTreeSet::new();
        for v in volume.sites() {
            for s in term.support() {
                bases.insert(v.offset(&s.negated()));
            }
        }
        for b in bases {
            out.push((t, term.support().iter().map(|s| s.offset(&b)).collect()));
        }
    }
    out
}

/// `H^σ_Λ` built on the register `Λ ∪ B`, where `B` holds the outside sites
/// the terms reach, as a sum of `Φ_X ⊗ I` conjugated into register order,
/// then restricted to the block where `B` carries `σ`.
pub fn kron_hamiltonian(phi: &Interaction, volume: &Volume, sigma: &GroundStateConfig, max_sites: usize) -> Result<CMatrix> {
    let placed = placements(phi, volume);
    let outside: BTreeSet<Site> = placed.iter().flat_map(|(_, s)| s).filter(|s| !volume.contains(s)).cloned().collect();
    let mut register: Vec<Site> = volume.sites().to_vec();
    register.extend(outside.iter().cloned());
    let total = register.len();
    if total > max_sites {
        return Err(Error::SizeLimit { sites: total, cap: max_sites });
    }
    let dim = 1usize << total;
    let mut ext = CMatrix::zeros(dim, dim);
    for (t, sites) in &placed {
        let term = &phi.terms()[*t];
        let op = term.full_matrix();
        let k = sites.len();
        let rest = CMatrix::identity(1 << (total - k), 1 << (total - k));
        let big = kron(&op, &rest);
        // register position of the r-th factor in `big`'s ordering
        let mut order: Vec<usize> = sites
            .iter()
            .map(|s| register.iter().position(|r| r == s).expect("site in register"))
            .collect();
        let others: Vec<usize> = (0..total).filter(|p| !order.contains(p)).collect();
        order.extend(others);
        let perm = |x: usize| -> usize {
            order
                .iter()
                .fold(0usize, |acc, &p| (acc << 1) | ((x >> (total - 1 - p)) & 1))
        };
        let mapped: Vec<usize> = (0..dim).map(perm).collect();
        for x in 0..dim {
            for y in 0..dim {
                let v = big[(mapped[x], mapped[y])];
                if v != C_ZERO {
                    ext[(x, y)] += v;
                }
            }
        }
    }
    let b = outside.len();
    let boundary_bits = outside.iter().fold(0usize, |acc, s| (acc << 1) | sigma.spin_at(s).bit());
    let n = volume.len();
    Ok(CMatrix::from_fn(1 << n, 1 << n, |a, c| ext[((a << b) | boundary_bits, (c << b) | boundary_bits)]))
}

/// `S` in bits for a diagonal model, by enumerating all `2^{|Λ|}`
/// configurations with every term meeting the volume.
pub fn classical_entropy_bits(phi: &Interaction, volume: &Volume, sigma: &GroundStateConfig, beta: f64) -> Result<f64> {
    if phi.has_quantum_part() {
        return domain("classical enumeration needs a diagonal interaction");
    }
    let n = volume.len();
    let placed = placements(phi, volume);
    let energies: Vec<f64> = (0..1usize << n)
        .map(|x| {
            let spin_bit = |s: &Site| match volume.position(s) {
                Some(p) => (x >> (n - 1 - p)) & 1,
                None => sigma.spin_at(s).bit(),
            };
            placed
                .iter()
                .map(|(t, sites)| {
                    let term = &phi.terms()[*t];
                    let idx = sites.iter().fold(0usize, |acc, s| (acc << 1) | spin_bit(s));
                    term.classical_part()[idx]
                })
                .sum()
        })
        .collect();
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let boltz: Vec<f64> = energies.iter().map(|e| (-beta * (e - e_min)).exp()).collect();
    let z: f64 = boltz.iter().sum();
    let mean_shifted: f64 = energies.iter().zip(&boltz).map(|(e, w)| (e - e_min) * w).sum::<f64>() / z;
    Ok((z.ln() + beta * mean_shifted) / std::f64::consts::LN_2)
}

/// `exp(a)` by scaling and squaring with a Taylor kernel.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 { (norm1 / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a * Complex64::new(0.5f64.powi(squarings as i32), 0.0);
    let mut sum = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled * Complex64::new(1.0 / k as f64, 0.0);
        sum += &term;
        if term.iter().all(|z| z.norm() < 1e-18) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(-βH)/tr exp(-βH)`, shifted by the mean diagonal for range safety.
pub fn normalized_gibbs_matrix(h: &CMatrix, beta: f64) -> CMatrix {
    let n = h.nrows();
    let shift = h.diagonal().iter().map(|z| z.re).sum::<f64>() / n as f64;
    let shifted = h - CMatrix::identity(n, n) * Complex64::new(shift, 0.0);
    let e = expm(&(shifted * Complex64::new(-beta, 0.0)));
    let tr: f64 = e.diagonal().iter().map(|z| z.re).sum();
    e * Complex64::new(1.0 / tr, 0.0)
}

/// Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi rotations
/// on the real `2n × 2n` embedding `[[Re, -Im], [Im, Re]]`.
pub fn jacobi_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let n = h.nrows();
    let mut a = DMatrix::<f64>::from_fn(2 * n, 2 * n, |i, j| {
        let z = h[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let m = 2 * n;
    for _sweep in 0..100 {
        let off: f64 = (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].powi(2)).sum();
        let scale: f64 = a.iter().map(|x| x * x).sum();
        if off <= 1e-30 * scale.max(1e-300) {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut doubled: Vec<f64> = (0..m).map(|i| a[(i, i)]).collect();
    doubled.sort_by(f64::total_cmp);
    doubled.into_iter().step_by(2).collect()
}

/// Indices `j` with `2^{-N(h+δ)} ≤ κ_j ≤ 2^{-N(h-δ)}`, tested on the
/// linear-scale weights.
pub fn typical_indices_linear(weights: &[f64], n_sites: usize, h_ref: f64, delta: f64) -> Vec<usize> {
    let n = n_sites as f64;
    let lo = (-n * (h_ref + delta)).exp2();
    let hi = (-n * (h_ref - delta)).exp2();
    (0..weights.len()).filter(|&j| weights[j] >= lo && weights[j] <= hi).collect()
}

/// The candidate maximizing `|⟨c|v⟩|`, smallest index on ties, by direct
/// summation.
pub fn argmax_overlap(v: &DVector<Complex64>, candidates: &[DVector<Complex64>]) -> usize {
    let mut best = (0, -1.0);
    for (k, c) in candidates.iter().enumerate() {
        let overlap: Complex64 = c.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
        if overlap.norm() > best.1 {
            best = (k, overlap.norm());
        }
    }
    best.0
}

/// `‖A - B‖` in the max-entry norm.
pub fn max_entry_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `|⟨c|ψ⟩|²` summed over a set of columns, an independent `‖Πφ‖²`.
pub fn projected_weight(v: &DVector<Complex64>, basis: &[DVector<Complex64>]) -> f64 {
    basis
        .iter()
        .map(|c| c.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr())
        .sum()
}
