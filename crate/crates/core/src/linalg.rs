//! Small dense linear-algebra and log-domain helpers.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `log₂ e`, the nats-to-bits conversion factor.
pub const LOG2_E: f64 = std::f64::consts::LOG2_E;

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest deviation `|m_ij - conj(m_ji)|`.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Hermitian within `tol` relative to `max(1, max |m_ij|)`.
pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    hermitian_defect(m) <= tol * max_abs(m).max(1.0)
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Whether every entry has zero imaginary part.
pub fn is_real(m: &CMatrix) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

/// `ln Σ exp(x_i)`, shifted by the maximum.
pub fn logsumexp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max.is_infinite() {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// `⟨v|A|v⟩` for a column `v`.
pub fn quadratic_form(a: &CMatrix, v: nalgebra::DVectorView<'_, Complex64>) -> Complex64 {
    let av = a * v;
    v.dotc(&av)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logsumexp_matches_direct_sum() {
        let xs = [-1.0, -2.0, -3.0];
        let direct = xs.iter().map(|x: &f64| x.exp()).sum::<f64>().ln();
        assert!((logsumexp(&xs) - direct).abs() < 1e-15);
        assert_eq!(logsumexp(&[]), f64::NEG_INFINITY);
        // far below exp underflow
        assert!((logsumexp(&[-2000.0, -2000.0]) - (-2000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn norms_of_pauli_x() {
        let mut x = CMatrix::zeros(2, 2);
        x[(0, 1)] = C_ONE;
        x[(1, 0)] = C_ONE;
        assert!((spectral_norm(&x) - 1.0).abs() < 1e-14);
        assert!((frobenius_norm(&x) - 2f64.sqrt()).abs() < 1e-14);
        assert!(is_hermitian(&x, 1e-12));
        x[(0, 1)] = Complex64::new(0.0, 1.0);
        assert!(!is_hermitian(&x, 1e-12));
    }
}
