use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unitary_measure::cli::scenarios::random_spectrum;
use unitary_measure::cylindrical::{cart_to_polar, polar_to_cart};
use unitary_measure::dynamics::{from_action_angle, to_action_angle};
use unitary_measure::potential::Polynomial;
use unitary_measure::spectral::{probe_r, unitarity_residual};
use unitary_measure::zerodim::{series_r, CubicModel};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unitarity_holds_on_random_spectra(seed in any::<u64>(), energy in -1.0f64..6.0, eps in 0.01f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_spectrum(3, &mut rng).unwrap();
        prop_assert!(unitarity_residual(&s, energy, eps).unwrap() <= 1e-10);
    }

    #[test]
    fn probe_is_a_sum_of_lorentzians(seed in any::<u64>(), energy in -1.0f64..6.0, eps in 0.01f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_spectrum(3, &mut rng).unwrap();
        let oracle: f64 = s.levels.iter().map(|e| 1.0 / ((energy - e).powi(2) + eps * eps)).sum();
        prop_assert!((probe_r(&s, energy, eps) - oracle).abs() <= 1e-12 * oracle);
    }

    #[test]
    fn polar_round_trip(x1 in -3.0f64..3.0, x2 in -3.0f64..3.0, v1 in -2.0f64..2.0, v2 in -2.0f64..2.0) {
        prop_assume!(x1.hypot(x2) > 1e-3);
        let s = cart_to_polar(x1, x2, v1, v2).unwrap();
        let back = polar_to_cart(&s);
        for (a, b) in [(back.0, x1), (back.1, x2), (back.2, v1), (back.3, v2)] {
            prop_assert!((a - b).abs() <= 1e-12);
        }
        let energy_polar = 0.5 * (s.p * s.p + s.l * s.l / (s.r * s.r));
        prop_assert!((energy_polar - 0.5 * (v1 * v1 + v2 * v2)).abs() <= 1e-12);
    }

    #[test]
    fn action_angle_round_trip(x in -1.2f64..1.2, p in 0.2f64..1.5, flip in any::<bool>(), k4 in 0.0f64..1.0) {
        let v = Polynomial::anharmonic(k4, 20.0);
        let p = if flip { -p } else { p };
        let s = to_action_angle(&v, x, p).unwrap();
        prop_assert!((s.h - (0.5 * p * p + 0.5 * x * x + 0.25 * k4 * x.powi(4))).abs() <= 1e-12);
        let (x2, p2) = from_action_angle(&v, s.h, s.theta).unwrap();
        prop_assert!((x2 - x).abs() <= 1e-8 && (p2 - p).abs() <= 1e-8);
    }

    #[test]
    fn series_coefficient_ratio(n in 1usize..25) {
        let s = series_r(&CubicModel::real(1.0, 0.1).unwrap(), n);
        // c_n / c_{n-1} = -(6n-1)(6n-3)(6n-5) / n
        let ratio = &s.coefficients[n] / &s.coefficients[n - 1];
        let k = 6 * n as i64;
        let expected = num_rational::BigRational::new((-(k - 1) * (k - 3) * (k - 5)).into(), (n as i64).into());
        prop_assert_eq!(ratio, expected);
    }
}
