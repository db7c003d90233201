mod common;

use proptest::prelude::*;

use seqdensity::density::{asymptotic_density_profile, count_in_window, SetPredicate};
use seqdensity::dist::{convolve_edf, correlation, edf, ks_distance, moments, DEFAULT_CONVOLUTION_CAP};
use seqdensity::polyadic::{polyadic_distance, sample_omega, OmegaPoint};
use seqdensity::{APSet, BaseChain, Edf, SequenceWindow};

// Dyadic atoms and masses keep every sum and product exact in f64.
fn dyadic_edf() -> impl Strategy<Value = Edf> {
    prop::collection::vec((0u32..64, 1u32..8), 1..6).prop_map(|atoms| {
        let total: u32 = atoms.iter().map(|(_, w)| w).sum();
        let scale = total.next_power_of_two() as f64;
        let mut pts: Vec<(f64, f64)> = atoms.iter().map(|&(x, w)| (x as f64 / 64.0, w as f64 / scale)).collect();
        let rest = 1.0 - pts.iter().map(|p| p.1).sum::<f64>();
        if rest > 0.0 {
            pts.push((1.0, rest));
        }
        Edf::from_masses(pts).unwrap()
    })
}

fn window() -> impl Strategy<Value = SequenceWindow> {
    prop::collection::vec(-4.0f64..4.0, 2..60).prop_map(|v| SequenceWindow::new(v).unwrap())
}

fn conv(f: &Edf, g: &Edf) -> Edf {
    convolve_edf(f, g, DEFAULT_CONVOLUTION_CAP).unwrap()
}

proptest! {
    #[test]
    fn convolution_commutes(f in dyadic_edf(), g in dyadic_edf()) {
        prop_assert_eq!(conv(&f, &g), conv(&g, &f));
    }

    #[test]
    fn convolution_associates(f in dyadic_edf(), g in dyadic_edf(), h in dyadic_edf()) {
        prop_assert_eq!(conv(&conv(&f, &g), &h), conv(&f, &conv(&g, &h)));
    }

    #[test]
    fn convolution_adds_means(f in dyadic_edf(), g in dyadic_edf()) {
        prop_assert_eq!(conv(&f, &g).mean(), f.mean() + g.mean());
    }

    #[test]
    fn dirac_is_a_translation(f in dyadic_edf(), s in 0u32..16) {
        let shift = s as f64 / 16.0;
        let moved = conv(&f, &Edf::dirac(shift));
        for (x, y) in moved.breakpoints().iter().zip(f.breakpoints()) {
            prop_assert_eq!(*x, y + shift);
        }
    }

    #[test]
    fn edf_is_a_distribution_function(w in window(), xs in prop::collection::vec(-5.0f64..5.0, 2..10)) {
        let f = edf(&w);
        let mut xs = xs;
        xs.sort_by(f64::total_cmp);
        for p in xs.windows(2) {
            prop_assert!(f.eval(p[0]) <= f.eval(p[1]));
        }
        prop_assert_eq!(f.eval(-10.0), 0.0);
        prop_assert!((f.eval(10.0) - 1.0).abs() < 1e-12);
        prop_assert_eq!(ks_distance(&f, &f), 0.0);
    }

    #[test]
    fn ks_is_symmetric(v in window(), w in window()) {
        let (a, b) = (edf(&v), edf(&w));
        prop_assert_eq!(ks_distance(&a, &b), ks_distance(&b, &a));
        prop_assert!((ks_distance(&a, &b) - common::ks(v.values(), w.values())).abs() < 1e-12);
    }

    #[test]
    fn correlation_is_symmetric(v in window(), shift in 0usize..7) {
        let mut rotated = v.values().to_vec();
        let len = rotated.len();
        rotated.rotate_left(shift % len);
        let w = SequenceWindow::new(rotated).unwrap();
        if moments(&v).dispersion > 1e-9 && moments(&w).dispersion > 1e-9 {
            let a = correlation(&v, &w).unwrap();
            let b = correlation(&w, &v).unwrap();
            prop_assert!((a.rho - b.rho).abs() < 1e-9);
            prop_assert!((a.covariance - b.covariance).abs() < 1e-12);
            prop_assert!(a.rho <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn dispersion_is_translation_invariant(v in window(), c in -3.0f64..3.0) {
        let shifted = SequenceWindow::new(v.values().iter().map(|x| x + c).collect()).unwrap();
        prop_assert!((moments(&v).dispersion - moments(&shifted).dispersion).abs() < 1e-9);
        prop_assert!((moments(&shifted).mean - moments(&v).mean - c).abs() < 1e-9);
    }

    #[test]
    fn metric_triangle(a in -2000i64..2000, b in -2000i64..2000, c in -2000i64..2000) {
        let ac = polyadic_distance(a, c);
        let sum = &polyadic_distance(a, b) + &polyadic_distance(b, c);
        prop_assert!(ac <= sum);
    }

    #[test]
    fn sampled_points_are_coherent(seed in any::<u64>(), k in 1u32..12) {
        let levels = seqdensity::polyadic::big_levels(&seqdensity::Ladder::factorial(k).unwrap());
        let p = sample_omega(seed, &levels).unwrap();
        prop_assert!(OmegaPoint::new(p.levels().to_vec(), p.residues().to_vec()).is_ok());
        prop_assert_eq!(p, sample_omega(seed, &levels).unwrap());
    }

    #[test]
    fn window_counts_are_monotone(pairs in prop::collection::vec((0u64..12, 1u64..12), 1..4), n in 1u64..500) {
        let s = APSet::from_pairs(&pairs).unwrap();
        prop_assert!(count_in_window(&s, n) <= count_in_window(&s, n + 1));
        let brute = (1..=n).filter(|&k| pairs.iter().any(|&(r, m)| k % m == r % m)).count() as u64;
        prop_assert_eq!(count_in_window(&s, n), brute);
        prop_assert_eq!(s.indicator(n).iter().filter(|&&b| b).count() as u64, brute);
    }

    #[test]
    fn periodic_sets_have_their_exact_density(pairs in prop::collection::vec((0u64..10, 1u64..10), 1..4)) {
        let s = APSet::from_pairs(&pairs).unwrap();
        let period = s.period().unwrap();
        let est = asymptotic_density_profile(&s, &[period * 100, period * 1000], 1e-9).unwrap();
        let exact = num_traits::ToPrimitive::to_f64(&s.density().unwrap()).unwrap();
        prop_assert!((est.ratios[1] - exact).abs() < 1e-12);
    }

    #[test]
    fn vdc_digits_round_trip(n in 0u128..1_000_000, base in 2u64..40) {
        let chain = BaseChain::geometric(base, 2).unwrap().extended_to(n).unwrap();
        let digits = chain.digits(n).unwrap();
        prop_assert_eq!(chain.from_digits(&digits), n);
        let x = chain.radical_inverse(n).unwrap();
        prop_assert!((x - common::radical_inverse(n as u64, base)).abs() < 1e-12);
        prop_assert!((0.0..1.0).contains(&x));
    }
}
