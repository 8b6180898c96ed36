use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use qmitm::random::{
    random_density, random_density_of_rank, random_hermitian, random_pair, random_projector,
};
use qmitm::{
    apply_channel, attacker_utility, completeness_residual, detection_bounds, helstrom_measurement,
    matrix_exp, optimal_attack, rates, realize_channel, relative_entropy, support_log,
    trace_product, ProjectorMeasurement,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_target<R: Rng>(dim: usize, rng: &mut R) -> qmitm::DensityOperator {
    let rank = rng.random_range(1..=dim);
    random_density_of_rank(dim, rank, true, rng)
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn spectral_decomposition_reconstructs(seed in any::<u64>(), d in 1usize..=7) {
        let a = random_hermitian(d, true, &mut rng(seed));
        let spec = a.spectral();
        prop_assert!(spec.reconstruct().distance(&a).unwrap() <= 1e-10 * (1.0 + a.frobenius_norm()));
        let v = &spec.eigenvectors;
        let gram = v.adjoint() * v - qmitm::CMatrix::identity(d, d);
        prop_assert!(gram.norm() <= 1e-10);
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        let sum: f64 = spec.eigenvalues.iter().sum();
        prop_assert!((sum - a.trace()).abs() <= 1e-10 * (1.0 + a.frobenius_norm()));
    }

    #[test]
    fn exp_inverts_log_on_positive_states(seed in any::<u64>(), d in 1usize..=6) {
        let rho = random_density(d, 0.1, true, &mut rng(seed));
        let log = support_log(&rho, 1e-12).unwrap();
        prop_assert_eq!(log.rank(), d);
        prop_assert!(matrix_exp(&log.log).distance(rho.op()).unwrap() <= 1e-10);
    }

    #[test]
    fn klein_inequality(seed in any::<u64>(), d in 1usize..=6) {
        let mut r = rng(seed);
        let a = random_density(d, 0.05, true, &mut r);
        let b = random_density(d, 0.05, true, &mut r);
        prop_assert!(relative_entropy(&a, &b).unwrap().to_f64() >= -1e-12);
        prop_assert!(relative_entropy(&a, &a).unwrap().to_f64().abs() <= 1e-12);
    }

    #[test]
    fn trace_product_is_symmetric(seed in any::<u64>(), d in 1usize..=6) {
        let mut r = rng(seed);
        let a = random_hermitian(d, true, &mut r);
        let b = random_hermitian(d, true, &mut r);
        let ab = trace_product(&a, &b).unwrap();
        let ba = trace_product(&b, &a).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-12 * (1.0 + ab.abs()));
    }

    #[test]
    fn rates_are_probabilities(seed in any::<u64>(), d in 1usize..=6, rank_frac in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let rank = (rank_frac * d as f64).round() as usize;
        let pi = ProjectorMeasurement::new(random_projector(d, rank, true, &mut r)).unwrap();
        let rho1 = random_density(d, 0.0, true, &mut r);
        let rho0 = random_density(d, 0.0, true, &mut r);
        let (pd, pf) = rates(&pi, &rho1, &rho0).unwrap();
        for p in [pd, pf] {
            prop_assert!((-1e-10..=1.0 + 1e-10).contains(&p));
        }
    }

    #[test]
    fn helstrom_risk_is_a_probability(seed in any::<u64>(), d in 1usize..=6) {
        let pair = random_pair(d, &mut rng(seed));
        let h = helstrom_measurement(&pair);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&h.bayes_risk));
        prop_assert!(h.bayes_risk <= pair.c0().min(pair.c1()) + 1e-12);
    }

    #[test]
    fn channels_preserve_states(seed in any::<u64>(), d in 1usize..=6) {
        let mut r = rng(seed);
        let rho = random_density(d, 0.0, true, &mut r);
        let target = random_target(d, &mut r);
        let ch = realize_channel(&rho, &target).unwrap();
        let rank = target.eigenvalues().iter().filter(|&&p| p > 1e-14).count();
        prop_assert!(ch.len() <= d * rank);
        prop_assert!(completeness_residual(&ch) <= 1e-10);
        let other = random_density(d, 0.0, true, &mut r);
        let out = apply_channel(&ch, &other).unwrap();
        prop_assert!((out.op().trace() - 1.0).abs() <= 1e-10);
        prop_assert!(out.eigenvalues().iter().all(|&e| e >= -1e-10));
        prop_assert!(out.distance(&target).unwrap() <= 1e-10);
    }

    #[test]
    fn closed_form_beats_perturbed_strategies(seed in any::<u64>(), d in 2usize..=5, lambda in 0.2f64..10.0) {
        let mut r = rng(seed);
        let pair = random_pair(d, &mut r);
        let h = helstrom_measurement(&pair);
        let sol = optimal_attack(&pair, &h.pi1, lambda).unwrap();
        let best = sol.utility.to_f64();
        assert_abs_diff_eq!(best, -lambda * sol.log_z1, epsilon = 1e-9);
        for _ in 0..5 {
            let noise = random_density(d, 0.0, true, &mut r);
            let w = 0.05;
            let mixed = qmitm::DensityOperator::normalized(
                &sol.rho1_prime.op().scale(1.0 - w).add(&noise.op().scale(w)).unwrap(),
            ).unwrap();
            let u = attacker_utility(&mixed, pair.rho0(), &h.pi1, &pair, lambda).unwrap();
            prop_assert!(u.to_f64() >= best - 1e-10);
        }
    }

    #[test]
    fn genuine_rates_respect_bounds(seed in any::<u64>(), d in 1usize..=6, lambda in 0.05f64..50.0) {
        let pair = random_pair(d, &mut rng(seed));
        let h = helstrom_measurement(&pair);
        let sol = optimal_attack(&pair, &h.pi1, lambda).unwrap();
        let b = detection_bounds(h.p_detect, lambda).unwrap();
        prop_assert!(b.lower <= b.upper);
        prop_assert!(sol.genuine_p_detect <= b.upper + 1e-9);
        prop_assert!(sol.genuine_p_detect >= b.lower - 1e-9);
        prop_assert!((sol.genuine_p_false - h.p_false).abs() <= 1e-12);
        let stronger = optimal_attack(&pair, &h.pi1, lambda * 2.0).unwrap();
        prop_assert!(stronger.genuine_p_detect >= sol.genuine_p_detect - 1e-9);
    }
}
