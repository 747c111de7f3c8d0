use proptest::prelude::*;

use spin_compress::codec::{codeword_length, fidelity, make_decomposition, typical_projector, Codebook, Compressed, Mixing};
use spin_compress::interaction::preset_tfim;
use spin_compress::typicality::{best_rate_mass, lln_residual, typical_subspace};
use spin_compress::{assemble_hamiltonian, GibbsEnsemble, GroundStateConfig, Spin, Volume};

fn ensemble(n: usize, coupling: f64, field: f64, lambda: f64, beta: f64, neel: bool) -> GibbsEnsemble {
    let phi = preset_tfim(coupling, field, lambda).unwrap();
    let volume = Volume::chain(n, 12).unwrap();
    let sigma = if neel {
        GroundStateConfig::new(vec![2], vec![Spin::Up, Spin::Down]).unwrap()
    } else {
        GroundStateConfig::all_up(1)
    };
    let h = assemble_hamiltonian(&phi, &volume, &sigma, 12).unwrap();
    GibbsEnsemble::new(h, beta).unwrap()
}

fn params() -> impl Strategy<Value = (usize, f64, f64, f64, f64, bool)> {
    (2usize..=6, -1.5f64..1.5, 0.0f64..1.0, 0.0f64..0.6, 0.05f64..3.0, any::<bool>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn weights_are_normalized((n, j, h, l, b, neel) in params()) {
        let ens = ensemble(n, j, h, l, b, neel);
        let total: f64 = ens.weights().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        for k in 0..ens.dim() {
            prop_assert!((ens.eigenvalue_via_energy(k).unwrap() - ens.log_weights()[k]).abs() <= 1e-9);
        }
        prop_assert!(ens.thermo_densities().identity_residual() <= 1e-10);
    }

    #[test]
    fn typical_sets_nest_and_obey_the_sandwich((n, j, h, l, b, neel) in params(), d1 in 0.01f64..0.5, d2 in 0.01f64..0.5) {
        let ens = ensemble(n, j, h, l, b, neel);
        let h_ref = ens.entropy_bits() / n as f64;
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let small = typical_subspace(&ens, h_ref, lo).unwrap();
        let large = typical_subspace(&ens, h_ref, hi).unwrap();
        prop_assert!(small.indices.iter().all(|&k| large.contains(k)));
        prop_assert!(small.mass <= large.mass);
        prop_assert!(small.sandwich().holds());
        prop_assert!(large.sandwich().holds());
    }

    #[test]
    fn best_rate_mass_grows_with_rate((n, j, h, l, b, neel) in params(), r1 in 0.0f64..1.2, r2 in 0.0f64..1.2) {
        let ens = ensemble(n, j, h, l, b, neel);
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        prop_assert!(best_rate_mass(&ens, lo).unwrap() <= best_rate_mass(&ens, hi).unwrap());
        prop_assert!((best_rate_mass(&ens, 1.0).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn codec_round_trips((n, j, h, l, b, neel) in params(), delta in 0.05f64..0.6) {
        let ens = ensemble(n, j, h, l, b, neel);
        let h_ref = ens.entropy_bits() / n as f64;
        let t = typical_subspace(&ens, h_ref, delta).unwrap();
        prop_assume!(!t.is_empty());
        let book = Codebook::build(&t).unwrap();
        prop_assert_eq!(book.length(), codeword_length(t.dim()));
        prop_assert!(book.length() as f64 <= n as f64 * (h_ref + delta) + 2.0);
        for k in 0..ens.dim() {
            match book.compress(k) {
                Compressed::Codeword(w) => prop_assert_eq!(book.decompress(&w).unwrap(), k),
                Compressed::Atypical => prop_assert!(!t.contains(k)),
            }
        }
    }

    #[test]
    fn fidelity_is_the_typical_mass((n, j, h, l, b, neel) in params(), delta in 0.05f64..0.6, seed in any::<u64>()) {
        let ens = ensemble(n, j, h, l, b, neel);
        let h_ref = ens.entropy_bits() / n as f64;
        let t = typical_subspace(&ens, h_ref, delta).unwrap();
        let pi = typical_projector(&t, ens.spectrum());
        let dec = make_decomposition(&ens, 2 * ens.dim(), Mixing::Random { seed }).unwrap();
        prop_assert!((fidelity(&dec, &pi).unwrap() - t.mass).abs() <= 1e-10);
    }

    #[test]
    fn lln_residual_vanishes_at_zero((n, j, h, l, b, neel) in params()) {
        let ens = ensemble(n, j, h, l, b, neel);
        prop_assert_eq!(lln_residual(&ens, 0.0), 0.0);
    }
}
