//! Property tests for the invariants of the averaged transform.

use awt::filterbank::{awt_fft, derive_filter_bank};
use awt::reference::{awt_full_naive, awt_scale_naive, circular_shift, inverse_awt};
use awt::scalar::{max_abs_diff, mean};
use awt::{Signal1D, WaveletKind};
use proptest::prelude::*;

fn signal(len: usize) -> impl Strategy<Value = Signal1D> {
    proptest::collection::vec(-100.0f64..100.0, len).prop_map(|v| Signal1D::new(v).unwrap())
}

fn wavelet() -> impl Strategy<Value = WaveletKind> {
    prop_oneof![
        Just(WaveletKind::Haar),
        Just(WaveletKind::Daub4),
        Just(WaveletKind::Daub8)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn naive_scales_commute_with_shifts(x in signal(16), shift in -40isize..40, kind in wavelet(), s in 0usize..=4) {
        let w = kind.spec::<f64>();
        let a = awt_scale_naive(&circular_shift(&x, shift), &w, s).unwrap();
        let b = circular_shift(&awt_scale_naive(&x, &w, s).unwrap(), shift);
        prop_assert!(max_abs_diff(a.as_slice(), b.as_slice()) <= 1e-10 * 100.0);
    }

    #[test]
    fn naive_is_linear(x in signal(16), y in signal(16), a in -2.0f64..2.0, b in -2.0f64..2.0, kind in wavelet()) {
        let w = kind.spec::<f64>();
        let z = awt_full_naive(&x.combine(a, &y, b).unwrap(), &w).unwrap();
        let ax = awt_full_naive(&x, &w).unwrap();
        let ay = awt_full_naive(&y, &w).unwrap();
        for ((u, v), q) in z.iter().zip(ax.iter()).zip(ay.iter()) {
            let expected = v.combine(a, q, b).unwrap();
            prop_assert!(max_abs_diff(u.as_slice(), expected.as_slice()) <= 1e-10 * 100.0);
        }
    }

    #[test]
    fn spectra_sum_to_signal_with_zero_mean(x in signal(32), kind in wavelet()) {
        let sp = awt_full_naive(&x, &kind.spec::<f64>()).unwrap();
        prop_assert_eq!(sp.stored_values(), (sp.k() + 1) * 32);
        prop_assert!(max_abs_diff(inverse_awt(&sp).as_slice(), x.as_slice()) <= 1e-10 * 100.0);
        for s in sp.spectra() {
            prop_assert!(mean(s.as_slice()).abs() <= 1e-10 * 100.0);
        }
        prop_assert!((mean(sp.dc().as_slice()) - mean(x.as_slice())).abs() <= 1e-12 * 100.0);
    }

    #[test]
    fn fast_path_matches_oracle(x in signal(64), kind in wavelet()) {
        let w = kind.spec::<f64>();
        let bank = derive_filter_bank(&w, 64).unwrap();
        let fast = awt_fft(&x, &bank).unwrap();
        let slow = awt_full_naive(&x, &w).unwrap();
        for (a, b) in fast.iter().zip(slow.iter()) {
            prop_assert!(max_abs_diff(a.as_slice(), b.as_slice()) <= 1e-9 * 100.0);
        }
    }
}

#[test]
fn plain_dwt_detail_is_not_shift_covariant() {
    // some signal and shift break covariance for the undecimated detail projection
    let w = WaveletKind::Haar.spec::<f64>();
    let x = Signal1D::impulse(16).unwrap();
    let rec1 = |s: &Signal1D| {
        let c = awt::dwt::dwt_periodic(s, &w, 1).unwrap();
        awt::dwt::reconstruct_detail(&c, &w, 1).unwrap()
    };
    let moved = rec1(&circular_shift(&x, 3));
    let expected = circular_shift(&rec1(&x), 3);
    assert!(max_abs_diff(moved.as_slice(), expected.as_slice()) > 0.1);
}
