use proptest::prelude::*;

use maxmult::dyadic::WindowFamily;
use maxmult::fraccalc::{rl_integral, FracOrder};
use maxmult::lab::random_band_limited;
use maxmult::norms::{sigma_norm, SpaceTag};
use maxmult::operators::{apply_multiplier, maximal_operator, TGrid};
use maxmult::spectral::{forward_transform, lebesgue_norm, Grid};
use maxmult::symbols::{ring, window_symbol};

fn small_grid() -> Grid {
    Grid::with_nyquist(1, 512, 1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn windows_sum_to_one(x in -3.0f64..3.0, y in -3.0f64..3.0, e in -8.0f64..8.0) {
        prop_assume!(x.abs() + y.abs() > 1e-3);
        let w = WindowFamily::new(-14, 14).unwrap();
        let s = e.exp2() / x.hypot(y);
        let sum = w.partition_sum(&[x * s, y * s], -14, 14).unwrap();
        prop_assert!((sum - 1.0).abs() < 1e-12, "{}", sum);
    }

    #[test]
    fn transform_preserves_l2(seed in any::<u64>(), index in 0u64..8) {
        let g = small_grid();
        let f = random_band_limited(&g, [0.125, 0.5], seed, index).unwrap();
        let a = lebesgue_norm(&f, 2.0).unwrap();
        let hat = forward_transform(&f).unwrap();
        let b = (hat.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * hat.cell_measure()).sqrt();
        prop_assert!((a - 1.0).abs() < 1e-12 && (a - b).abs() < 1e-12, "{} {}", a, b);
    }

    #[test]
    fn fractional_integral_is_linear(a in 0.1f64..0.9, c in -2.0f64..2.0, t in 0.2f64..3.0) {
        let o = FracOrder::new(a).unwrap();
        let f = |s: f64| s.sin();
        let g = |s: f64| (1.0 + s).ln();
        let lhs: f64 = rl_integral(|s: f64| f(s) + c * g(s), o, t).unwrap();
        let rhs = rl_integral(f, o, t).unwrap() + c * rl_integral(g, o, t).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs.abs()), "{} {}", lhs, rhs);
    }

    #[test]
    fn sobolev_shell_norms_grow_with_smoothness(c in 0.5f64..2.0, s in 0.0f64..2.0) {
        let g = Grid::with_nyquist(1, 4096, 2.0).unwrap();
        let w = WindowFamily::new(-10, 10).unwrap();
        let m = ring(c);
        let lo = sigma_norm(&m, SpaceTag::SobolevL2 { s }, 0.0, &w, &g).unwrap().total;
        let hi = sigma_norm(&m, SpaceTag::SobolevL2 { s: s + 0.5 }, 0.0, &w, &g).unwrap().total;
        prop_assert!(hi >= lo, "{} < {}", hi, lo);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn maximal_function_dominates_every_dilate(seed in any::<u64>(), k in 0usize..40) {
        let g = small_grid();
        let f = random_band_limited(&g, [0.125, 0.5], seed, 0).unwrap();
        let m = window_symbol();
        let tg = TGrid::default();
        let t = tg.nodes()[k * (tg.len() - 1) / 39];
        let max = maximal_operator(&m, &f, &tg).unwrap().field;
        let one = apply_multiplier(&m, &f, t).unwrap().field;
        for (a, b) in max.values().iter().zip(one.values()) {
            prop_assert!(a.re + 1e-12 >= b.norm(), "{} < {}", a.re, b.norm());
        }
    }
}
