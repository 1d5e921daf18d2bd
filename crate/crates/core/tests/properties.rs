use beaches::{
    beaches_denoise, fft_unitary, ifft_unitary, scan_optimal_tau, scan_optimal_tau_hw, soft_threshold, sure_value,
    SortedMagnitudes, Variant, C64,
};
use proptest::prelude::*;

fn complex_vec(log2_len: std::ops::RangeInclusive<u32>) -> impl Strategy<Value = Vec<C64>> {
    log2_len.prop_flat_map(|k| {
        prop::collection::vec((-4.0f64..4.0, -4.0f64..4.0).prop_map(|(re, im)| C64::new(re, im)), 1usize << k)
    })
}

proptest! {
    #[test]
    fn soft_threshold_shrinks_magnitude_and_keeps_phase(y in complex_vec(0..=6), tau in 0.0f64..3.0) {
        let out = soft_threshold(&y, tau).unwrap();
        for (a, z) in out.iter().zip(&y) {
            prop_assert!((a.norm() - (z.norm() - tau).max(0.0)).abs() < 1e-12);
            if a.norm() > 1e-9 {
                prop_assert!((a / a.norm() - z / z.norm()).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn exact_scan_is_no_worse_than_any_threshold(y in complex_vec(2..=7), e0 in 0.0f64..2.0, tau in 0.0f64..6.0) {
        let mags: Vec<f64> = y.iter().map(|z| z.norm()).collect();
        let best = scan_optimal_tau(&SortedMagnitudes::new(mags.clone()).unwrap(), e0).unwrap();
        prop_assert!(best.objective <= sure_value(&mags, tau, e0).unwrap() + 1e-12);
    }

    #[test]
    fn hw_scan_picks_a_magnitude(y in complex_vec(2..=7), e0 in 1e-3f64..2.0) {
        let mags: Vec<f64> = y.iter().map(|z| z.norm()).collect();
        let choice = scan_optimal_tau_hw(&SortedMagnitudes::new(mags.clone()).unwrap(), e0).unwrap();
        prop_assert!(mags.contains(&choice.tau));
    }

    #[test]
    fn fft_round_trip(y in complex_vec(0..=9)) {
        let back = ifft_unitary(&fft_unitary(&y).unwrap()).unwrap();
        for (a, b) in back.iter().zip(&y) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn denoising_never_adds_energy(y in complex_vec(2..=7), e0 in 0.0f64..2.0) {
        for variant in [Variant::Exact, Variant::Hw] {
            let r = beaches_denoise(&y, e0, variant).unwrap();
            let before: f64 = y.iter().map(|z| z.norm_sqr()).sum();
            let after: f64 = r.h_star.iter().map(|z| z.norm_sqr()).sum();
            prop_assert!(after <= before * (1.0 + 1e-12));
            prop_assert!(r.tau_star >= 0.0);
        }
    }
}
