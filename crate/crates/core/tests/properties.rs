use proptest::prelude::*;

use cohconc_core::channels::{apply_channel, random_incoherent_channel, selective_outcomes};
use cohconc_core::entanglement::{
    pure_concurrence, pure_concurrence_determinant_form, wootters_concurrence,
};
use cohconc_core::gellmann::{expansion_coefficients, ggm_basis, reconstruct};
use cohconc_core::linalg::max_abs_diff;
use cohconc_core::measures::{
    is_incoherent, l1_coherence, pure_coherence_concurrence, relative_entropy_coherence,
};
use cohconc_core::statespace::{
    dephase, partial_trace, pure_to_density, random_density, random_pure, tensor,
    von_neumann_entropy,
};
use cohconc_core::theorems::{verify_theorem2_pure, verify_theorem3_pure};
use cohconc_core::{BipartiteSplit, CMatrix, Subsystem, C};

fn state() -> impl Strategy<Value = (usize, usize, u64)> {
    (2usize..=6).prop_flat_map(|d| (Just(d), 1..=d, any::<u64>()))
}

proptest! {
    #[test]
    fn dephasing_is_idempotent_and_incoherent((d, rank, seed) in state()) {
        let rho = random_density::<f64>(d, rank, seed).unwrap();
        let once = dephase(&rho);
        prop_assert_eq!(dephase(&once), once.clone());
        prop_assert!(is_incoherent(&once, 0.0));
    }

    #[test]
    fn dephasing_does_not_lower_entropy((d, rank, seed) in state()) {
        let rho = random_density::<f64>(d, rank, seed).unwrap();
        prop_assert!(von_neumann_entropy(&dephase(&rho)) >= von_neumann_entropy(&rho) - 1e-10);
        prop_assert!(relative_entropy_coherence(&rho) >= 0.0);
    }

    #[test]
    fn partial_trace_undoes_tensor(da in 1usize..4, db in 1usize..4, seed in any::<u64>()) {
        let a = random_density::<f64>(da, da, seed).unwrap();
        let b = random_density::<f64>(db, 1, seed ^ 1).unwrap();
        let split = BipartiteSplit::new(da, db).unwrap();
        let ab = tensor(&a, &b);
        let back_a = partial_trace(&ab, split, Subsystem::S).unwrap();
        let back_b = partial_trace(&ab, split, Subsystem::A).unwrap();
        prop_assert!(max_abs_diff(back_a.matrix(), a.matrix()) < 1e-13);
        prop_assert!(max_abs_diff(back_b.matrix(), b.matrix()) < 1e-13);
    }

    #[test]
    fn l1_is_monotone_under_incoherent_channels((d, rank, seed) in state(), n_kraus in 1usize..5) {
        let rho = random_density::<f64>(d, rank, seed).unwrap();
        let ch = random_incoherent_channel::<f64>(d, n_kraus, seed.wrapping_add(1)).unwrap();
        let before = l1_coherence(&rho);
        prop_assert!(l1_coherence(&apply_channel(&ch, &rho).unwrap()) <= before + 1e-9);
        let outcomes = selective_outcomes(&ch, &rho).unwrap();
        let avg: f64 = outcomes.outcomes.iter().map(|o| o.probability * l1_coherence(&o.state)).sum();
        prop_assert!(avg <= before + 1e-9);
        prop_assert!((outcomes.total_probability() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gell_mann_expansion_reconstructs_traceless_part((d, rank, seed) in state()) {
        let rho = random_density::<f64>(d, rank, seed).unwrap();
        let shift = C::new(1.0 / d as f64, 0.0);
        let traceless = rho.matrix() - CMatrix::identity(d, d) * shift;
        let basis = ggm_basis::<f64>(d).unwrap();
        let coeffs = expansion_coefficients(&basis, &traceless);
        prop_assert!(coeffs.iter().all(|c| c.im.abs() < 1e-12));
        prop_assert!(max_abs_diff(&reconstruct(&basis, &coeffs), &traceless) < 1e-12);
    }

    #[test]
    fn pure_coherence_bounds(d in 1usize..=12, seed in any::<u64>()) {
        let psi = random_pure::<f64>(d, seed);
        let c = pure_coherence_concurrence(&psi);
        prop_assert!(c >= 0.0 && c <= (d - 1) as f64 + 1e-12);
        prop_assert!((c - l1_coherence(&pure_to_density(&psi))).abs() < 1e-12);
    }

    #[test]
    fn conversion_bounds_hold(d in 2usize..=6, extra in 0usize..3, seed in any::<u64>()) {
        let psi = random_pure::<f64>(d, seed);
        prop_assert!(verify_theorem2_pure(&psi, d + extra).unwrap().passed);
        prop_assert!(verify_theorem3_pure(&psi, d + extra).unwrap().passed);
    }

    #[test]
    fn concurrence_forms_agree(ds in 2usize..4, da in 2usize..4, seed in any::<u64>()) {
        let psi = random_pure::<f64>(ds * da, seed);
        let split = BipartiteSplit::new(ds, da).unwrap();
        let a = pure_concurrence(&psi, split).unwrap();
        let b = pure_concurrence_determinant_form(&psi, split).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
        if ds == 2 && da == 2 {
            prop_assert!((wootters_concurrence(&pure_to_density(&psi)).unwrap() - a).abs() < 1e-9);
        }
    }
}
