//! Cross-checks of the main pipeline against the slow reference paths in
//! `spin_compress::oracle` and against direct re-derivations.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spin_compress::codec::{encode_decode_maps, make_decomposition, typical_projector, Mixing};
use spin_compress::hamiltonian::theta_observable;
use spin_compress::interaction::preset_tfim;
use spin_compress::linalg::CMatrix;
use spin_compress::oracle;
use spin_compress::typicality::typical_subspace;
use spin_compress::{
    assemble_hamiltonian, diagonalize, Configuration, GibbsEnsemble, GroundStateConfig, HermitianOperator, Interaction,
    LocalTerm, Site, Spin, Volume,
};

fn tfim_chain(n: usize, lambda: f64) -> (Interaction, Volume, HermitianOperator) {
    let phi = preset_tfim(1.0, 0.5, lambda).unwrap();
    let volume = Volume::chain(n, 12).unwrap();
    let h = assemble_hamiltonian(&phi, &volume, &GroundStateConfig::all_up(1), 12).unwrap();
    (phi, volume, h)
}

fn max_dev(a: &CMatrix, b: &CMatrix) -> f64 {
    oracle::max_entry_distance(a, b)
}

#[test]
fn classical_energy_matches_bond_resummation() {
    let phi = preset_tfim(0.7, 0.3, 0.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let spins: Vec<i8> = (0..8).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        let omega: Configuration = spins
            .iter()
            .enumerate()
            .map(|(k, &s)| (Site::from(k as i64), if s > 0 { Spin::Up } else { Spin::Down }))
            .collect();
        let bonds: f64 = spins.windows(2).map(|w| -0.7 * (w[0] * w[1]) as f64).sum();
        let fields: f64 = spins.iter().map(|&s| -0.3 * s as f64).sum();
        assert!((phi.classical_energy(&omega) - (bonds + fields)).abs() < 1e-12);
    }
}

#[test]
fn chain_assembly_matches_kronecker_oracle() {
    let (phi, volume, h) = tfim_chain(5, 0.2);
    let reference = oracle::kron_hamiltonian(&phi, &volume, &GroundStateConfig::all_up(1), 12).unwrap();
    assert!(max_dev(h.matrix(), &reference) <= 1e-12);
    let neel = GroundStateConfig::new(vec![2], vec![Spin::Up, Spin::Down]).unwrap();
    let h = assemble_hamiltonian(&phi, &volume, &neel, 12).unwrap();
    let reference = oracle::kron_hamiltonian(&phi, &volume, &neel, 12).unwrap();
    assert!(max_dev(h.matrix(), &reference) <= 1e-12);
}

/// A two-dimensional model with a diagonal bond and a complex hopping term.
fn planar_model() -> Interaction {
    let origin = Site::new([0, 0]);
    let right = Site::new([1, 0]);
    let up = Site::new([0, 1]);
    let diag = Site::new([1, 1]);
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let mut hop = CMatrix::zeros(4, 4);
    hop[(1, 2)] = c(0.1, 0.05);
    hop[(2, 1)] = c(0.1, -0.05);
    let terms = vec![
        LocalTerm::new(vec![origin.clone(), right], vec![-1.0, 0.4, 0.6, -0.9], hop).unwrap(),
        LocalTerm::classical(vec![origin.clone(), up], vec![-0.5, 0.5, 0.5, -0.5]).unwrap(),
        LocalTerm::classical(vec![origin, diag], vec![0.2, -0.1, 0.3, 0.0]).unwrap(),
    ];
    Interaction::new(2, terms, 0.1, 2.0).unwrap()
}

#[test]
fn planar_assembly_matches_kronecker_oracle() {
    let phi = planar_model();
    let volume = Volume::from_sites([Site::new([0, 0]), Site::new([1, 0])]).unwrap();
    let sigma = GroundStateConfig::new(vec![2, 1], vec![Spin::Up, Spin::Down]).unwrap();
    let h = assemble_hamiltonian(&phi, &volume, &sigma, 12).unwrap();
    let reference = oracle::kron_hamiltonian(&phi, &volume, &sigma, 14).unwrap();
    assert!(max_dev(h.matrix(), &reference) <= 1e-12);
}

#[test]
fn theta_sum_reproduces_interior_hamiltonian() {
    // single-site terms always lie inside the volume they meet
    let mut x = CMatrix::zeros(2, 2);
    x[(0, 1)] = Complex64::new(-0.3, 0.0);
    x[(1, 0)] = Complex64::new(-0.3, 0.0);
    let onsite = LocalTerm::new(vec![Site::from(0)], vec![-0.5, 0.5], x).unwrap();
    let phi = Interaction::new(1, vec![onsite], 0.3, 1.0).unwrap();
    let volume = Volume::chain(4, 12).unwrap();
    let sigma = GroundStateConfig::all_up(1);
    let h = assemble_hamiltonian(&phi, &volume, &sigma, 12).unwrap();
    let mut total = CMatrix::zeros(16, 16);
    for s in volume.sites() {
        total += theta_observable(&phi, &volume, &sigma, s, 12).unwrap().matrix();
    }
    assert!(max_dev(&total, h.matrix()) <= 1e-10);

    // with bonds, the sum counts a boundary bond |X ∩ Λ|/|X| times
    let (phi, volume, h) = tfim_chain(4, 0.2);
    let mut total = CMatrix::zeros(16, 16);
    for s in volume.sites() {
        total += theta_observable(&phi, &volume, &sigma, s, 12).unwrap().matrix();
    }
    let end_field = |site: usize| {
        let mut z = CMatrix::zeros(2, 2);
        z[(0, 0)] = Complex64::new(-1.0, 0.0);
        z[(1, 1)] = Complex64::new(1.0, 0.0);
        spin_compress::hamiltonian::embed_local(&z, &[Site::from(site as i64)], &volume).unwrap()
    };
    let halved = (end_field(0).matrix() + end_field(3).matrix()) * Complex64::new(0.5, 0.0);
    assert!(max_dev(&(total + halved), h.matrix()) <= 1e-10);
}

#[test]
fn random_hermitian_reconstructs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 64;
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    let h = HermitianOperator::new(m.clone()).unwrap();
    let s = diagonalize(&h).unwrap();
    let d = CMatrix::from_diagonal(&DVector::from_iterator(n, s.energies.iter().map(|&e| Complex64::new(e, 0.0))));
    let rebuilt = &s.vectors * d * s.vectors.adjoint();
    assert!(max_dev(&rebuilt, &m) <= 1e-9);
    let jacobi = oracle::jacobi_eigenvalues(&m);
    for (a, b) in s.energies.iter().zip(&jacobi) {
        assert!((a - b).abs() <= 1e-9);
    }
}

#[test]
fn weights_match_matrix_exponential() {
    for (lambda, beta) in [(0.2, 2.0), (0.8, 0.5), (0.5, 1.0)] {
        let (_, _, h) = tfim_chain(6, lambda);
        let ens = GibbsEnsemble::new(h.clone(), beta).unwrap();
        let rho = oracle::normalized_gibbs_matrix(h.matrix(), beta);
        let mut reference = oracle::jacobi_eigenvalues(&rho);
        reference.reverse();
        for (k, r) in ens.weights().iter().zip(&reference) {
            assert!((k - r).abs() <= 1e-8, "lambda={lambda} beta={beta}");
        }
    }
}

#[test]
fn eigenvalue_identity_on_every_state() {
    let (_, _, h) = tfim_chain(6, 0.2);
    let ens = GibbsEnsemble::new(h, 2.0).unwrap();
    for j in 0..ens.dim() {
        let via_energy = ens.eigenvalue_via_energy(j).unwrap();
        assert!((via_energy - ens.log_weights()[j]).abs() <= 1e-9);
    }
}

#[test]
fn classical_entropy_matches_enumeration() {
    let (phi, volume, h) = tfim_chain(8, 0.0);
    let ens = GibbsEnsemble::new(h, 2.0).unwrap();
    let reference = oracle::classical_entropy_bits(&phi, &volume, &GroundStateConfig::all_up(1), 2.0).unwrap();
    assert!((ens.entropy_bits() - reference).abs() <= 1e-10);
}

#[test]
fn mean_energy_is_the_beta_derivative() {
    let (_, _, h) = tfim_chain(6, 0.2);
    let beta = 1.3;
    let step = 1e-5;
    let ln_z = |b: f64| GibbsEnsemble::new(h.clone(), b).unwrap().log_partition();
    let derivative = -(ln_z(beta + step) - ln_z(beta - step)) / (2.0 * step);
    let ens = GibbsEnsemble::new(h.clone(), beta).unwrap();
    let expected = ens.expectation(&h).unwrap();
    assert!((derivative - expected).abs() <= 1e-5 * expected.abs());
}

#[test]
fn characteristic_function_matches_exponential() {
    let (_, _, h) = tfim_chain(6, 0.2);
    let ens = GibbsEnsemble::new(h.clone(), 2.0).unwrap();
    let tau = 0.7;
    let rho = oracle::normalized_gibbs_matrix(h.matrix(), 2.0);
    let u = oracle::expm(&(h.matrix() * Complex64::new(0.0, tau)));
    let reference: Complex64 = (u * rho).trace();
    assert!((ens.characteristic_function(tau) - reference).norm() <= 1e-8);
    assert_eq!(ens.characteristic_function(0.0), Complex64::new(1.0, 0.0));
}

#[test]
fn ten_site_typical_set_matches_brute_force_filter() {
    let (_, _, h) = tfim_chain(10, 0.2);
    let ens = GibbsEnsemble::new(h, 2.0).unwrap();
    let h_ref = ens.entropy_bits() / 10.0;
    let t = typical_subspace(&ens, h_ref, 0.1).unwrap();
    let weights = ens.weights();
    let brute = oracle::typical_indices_linear(&weights, 10, h_ref, 0.1);
    assert_eq!(t.indices, brute);
    let brute_mass: f64 = brute.iter().map(|&j| weights[j]).sum();
    assert!((t.mass - brute_mass).abs() <= 1e-12);
}

#[test]
fn projector_is_idempotent() {
    let (_, _, h) = tfim_chain(6, 0.8);
    let ens = GibbsEnsemble::new(h, 0.5).unwrap();
    let h_ref = ens.entropy_bits() / 6.0;
    let t = typical_subspace(&ens, h_ref, 0.3).unwrap();
    assert!(t.dim() > 1);
    let pi = typical_projector(&t, ens.spectrum());
    let p = pi.matrix();
    assert!(max_dev(&(p * p), p) <= 1e-9);
    assert!((p.trace().re - t.dim() as f64).abs() <= 1e-8);
}

#[test]
fn decompositions_reconstruct_rho() {
    let (_, _, h) = tfim_chain(5, 0.8);
    let ens = GibbsEnsemble::new(h, 0.7).unwrap();
    let rho = oracle::normalized_gibbs_matrix(ens.hamiltonian().matrix(), 0.7);
    for seed in [1, 2, 3] {
        let dec = make_decomposition(&ens, 3 * ens.dim(), Mixing::Random { seed }).unwrap();
        assert!((dec.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        for i in 0..dec.len() {
            assert!((dec.vectors.column(i).norm() - 1.0).abs() <= 1e-10);
        }
        assert!(max_dev(&dec.density_matrix(), &rho) <= 1e-8);
    }
    let a = make_decomposition(&ens, 64, Mixing::Random { seed: 9 }).unwrap();
    let b = make_decomposition(&ens, 64, Mixing::Random { seed: 9 }).unwrap();
    assert_eq!(a.vectors, b.vectors);
}

#[test]
fn encoder_matches_exhaustive_overlap_search() {
    let (_, _, h) = tfim_chain(6, 0.8);
    let ens = GibbsEnsemble::new(h, 0.5).unwrap();
    let h_ref = ens.entropy_bits() / 6.0;
    let t = typical_subspace(&ens, h_ref, 0.3).unwrap();
    let dec = make_decomposition(&ens, 2 * ens.dim(), Mixing::Random { seed: 4 }).unwrap();
    let maps = encode_decode_maps(&dec, &t, ens.spectrum()).unwrap();
    let typical: Vec<DVector<Complex64>> = t.indices.iter().map(|&j| ens.spectrum().vectors.column(j).into_owned()).collect();
    let phis: Vec<DVector<Complex64>> = (0..dec.len()).map(|i| dec.vectors.column(i).into_owned()).collect();
    for rec in &maps {
        let phi = &phis[rec.vector];
        assert!((rec.projected_norm_sqr - oracle::projected_weight(phi, &typical)).abs() <= 1e-12);
        let best = oracle::argmax_overlap(phi, &typical);
        assert_eq!(rec.encoded, Some(t.indices[best]));
        let decoded = oracle::argmax_overlap(&typical[best], &phis);
        assert_eq!(rec.decoded, Some(decoded));
    }
}
