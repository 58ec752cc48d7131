use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::norms::hnorm_sup;
use crate::spectral::{inverse_transform, lebesgue_norm};
use crate::symbols::{bump_symbol, constant, make_slow_decay, window_symbol, zero};
use std::f64::consts::PI;

// independent quadrature of int psi^2 dr/r
const WINDOW_LOG_L2: f64 = 0.566_374_156_804_534_7;

fn grid() -> Grid {
    Grid::with_nyquist(1, 4096, 1.0).unwrap()
}

/// Random field with spectrum in `lo <= |xi| <= hi`.
fn band_field(grid: &Grid, lo: f64, hi: f64, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = grid.dim();
    let vals: Vec<C64> = (0..grid.len())
        .map(|k| {
            let p = grid.freq_point(k);
            let r = p[..d].iter().map(|v| v * v).sum::<f64>().sqrt();
            let c = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            if r >= lo && r <= hi {
                c
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    let f = inverse_transform(&Field::new(*grid, Domain::Frequency, vals).unwrap()).unwrap();
    let n = lebesgue_norm(&f, 2.0).unwrap();
    let mut f = f;
    f.scale(C64::new(1.0 / n, 0.0));
    f
}

fn max_diff(a: &Field, b: &Field) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn identity_symbol_leaves_f_unchanged() {
    let g = grid();
    let f = band_field(&g, 0.125, 0.5, 1);
    let out = apply_multiplier(&constant(1.0), &f, 1.7).unwrap();
    assert!(max_diff(&out.field, &f) < 1e-12);
    assert!(out.warnings.is_empty());
}

#[test]
fn pure_phase_is_an_isometry() {
    let g = grid();
    let f = band_field(&g, 0.125, 0.5, 2);
    let phase = Symbol::radial("phase", |r| C64::from_polar(1.0, r));
    let out = apply_multiplier(&phase, &f, 3.0).unwrap();
    let a = lebesgue_norm(&out.field, 2.0).unwrap();
    assert!((a - 1.0).abs() < 1e-10, "{a}");
}

#[test]
fn disjoint_supports_give_zero() {
    let g = grid();
    let f = band_field(&g, 0.0, 0.45, 3);
    let out = apply_multiplier(&window_symbol(), &f, 1.0).unwrap();
    assert!(out.field.max_abs() < 1e-14);
}

#[test]
fn multiplier_is_linear() {
    let g = grid();
    let f = band_field(&g, 0.125, 0.5, 4);
    let h = band_field(&g, 0.125, 0.5, 5);
    let (a, b) = (C64::new(0.3, -1.2), C64::new(2.0, 0.5));
    let m = make_slow_decay(0.5, 1.0, 0.2).unwrap();
    let lhs = apply_multiplier(&m, &f.combine(a, &h, b).unwrap(), 0.8).unwrap().field;
    let tf = apply_multiplier(&m, &f, 0.8).unwrap().field;
    let th = apply_multiplier(&m, &h, 0.8).unwrap().field;
    let rhs = tf.combine(a, &th, b).unwrap();
    assert!(max_diff(&lhs, &rhs) < 1e-12);
}

#[test]
fn aliasing_risk_is_reported() {
    let g = grid();
    let f = band_field(&g, 0.85, 0.95, 6);
    let out = apply_multiplier(&constant(1.0), &f, 1.0).unwrap();
    assert!(out.warnings.iter().any(|w| w.contains("aliasing")));
}

#[test]
fn plancherel_ceiling_holds_at_every_node() {
    let g = grid();
    let f = band_field(&g, 0.125, 0.5, 7);
    let m = make_slow_decay(0.5, 1.0, 0.2).unwrap();
    let prep = Prepared::new(&f).unwrap();
    for t in TGrid::new(0.05, 40.0, 1.5).unwrap().nodes() {
        let v = prep.apply(&m, t).unwrap();
        let norm = (g.cell_volume() * v.iter().map(|x| x.norm_sqr()).sum::<f64>()).sqrt();
        let sup = m.sample(&g, t).unwrap().iter().map(|x| x.norm()).fold(0.0, f64::max);
        assert!(norm <= sup * (1.0 + 1e-12));
    }
}

#[test]
fn maximal_operator_dominates_low_pass_data() {
    let g = grid();
    // nonnegative f with spectrum in |xi| < 1/2
    let h = band_field(&g, 0.0, 0.24, 8);
    let vals: Vec<C64> = h.values().iter().map(|v| C64::new(v.re * v.re, 0.0)).collect();
    let f = Field::new(g, Domain::Physical, vals).unwrap();
    let tg = TGrid::new(0.25, 64.0, 2f64.powf(0.25)).unwrap();
    let out = maximal_operator(&bump_symbol(), &f, &tg).unwrap();
    for (m, v) in out.field.values().iter().zip(f.values()) {
        assert!(m.re >= v.re - 1e-10);
    }
    let z = maximal_operator(&bump_symbol(), &Field::zeros(g, Domain::Physical), &tg).unwrap();
    assert_eq!(z.field.max_abs(), 0.0);
}

#[test]
fn denser_dilation_grid_dominates() {
    let g = grid();
    let f = band_field(&g, 0.125, 0.5, 9);
    let tg = TGrid::new(0.5, 32.0, 2f64.powf(0.5)).unwrap();
    let a = maximal_operator(&window_symbol(), &f, &tg).unwrap();
    let b = maximal_operator(&window_symbol(), &f, &tg.refined()).unwrap();
    for (x, y) in a.field.values().iter().zip(b.field.values()) {
        assert!(y.re >= x.re * (1.0 - 1e-12));
    }
    assert!(a.achiever.unwrap().iter().all(|&k| (k as usize) < tg.len()));
}

#[test]
fn normalised_radial_square_function_is_an_isometry() {
    let g = grid();
    let f = band_field(&g, 0.125, 0.5, 10);
    let c = 1.0 / WINDOW_LOG_L2.sqrt();
    let m = Symbol::radial("unit_window", move |r| C64::new(c * crate::dyadic::window(r), 0.0));
    let tg = TGrid::default();
    let gf = square_function(&m, &f, &tg).unwrap();
    let n = lebesgue_norm(&gf.field, 2.0).unwrap();
    assert!((n - 1.0).abs() < 0.01, "{n}");
    let h = hnorm_sup(&window_symbol(), &[vec![1.0]], &tg).unwrap().value;
    let gw = square_function(&window_symbol(), &f, &tg).unwrap();
    assert!(lebesgue_norm(&gw.field, 2.0).unwrap() <= h * 1.01);
    let z = square_function(&m, &Field::zeros(g, Domain::Physical), &tg).unwrap();
    assert_eq!(z.field.max_abs(), 0.0);
}

#[test]
fn radial_square_function_commutes_with_rotation() {
    let g = Grid::with_nyquist(2, 64, 1.0).unwrap();
    let f = band_field(&g, 0.125, 0.5, 11);
    let n = g.samples_per_axis();
    // rotation by 90 degrees about the lattice origin (index n/2)
    let rot = |v: &[C64]| -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        for i in 0..n {
            for j in 0..n {
                let (ri, rj) = ((n - j) % n, i);
                out[ri * n + rj] = v[i * n + j];
            }
        }
        out
    };
    let fr = Field::new(g, Domain::Physical, rot(f.values())).unwrap();
    let tg = TGrid::new(0.5, 32.0, 2f64.powf(0.25)).unwrap();
    let a = square_function(&window_symbol(), &f, &tg).unwrap();
    let b = square_function(&window_symbol(), &fr, &tg).unwrap();
    let ra = rot(a.field.values());
    let err = ra
        .iter()
        .zip(b.field.values())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    assert!(err < 1e-10, "{err}");
}

#[test]
fn halfwave_single_mode() {
    let g = grid();
    let k = 300;
    let rho = k as f64 * g.freq_spacing();
    let vals: Vec<C64> = (0..g.len())
        .map(|i| C64::from_polar(1.0, 2.0 * PI * rho * g.coordinate(i)))
        .collect();
    let f = Field::new(g, Domain::Physical, vals).unwrap();
    let (alpha, beta, t) = (0.5, 0.75, 0.3);
    let out = halfwave_difference(&f, alpha, beta, t).unwrap();
    let want = (C64::from_polar(1.0, t * rho.powf(alpha)) - 1.0).norm() / t.powf(beta);
    for v in out.field.values() {
        assert!((v.norm() - want).abs() < 1e-10);
    }
    let t0 = 2.0 * PI / rho.powf(alpha);
    let out = halfwave_difference(&f, alpha, beta, t0).unwrap();
    assert!(out.field.max_abs() < 1e-10);
}

#[test]
fn constants_match_their_closed_forms() {
    let eps: f64 = 0.05;
    let c = domination_constant(eps);
    let s = sharp_domination_constant(eps);
    assert!((c / s - gamma(0.5 + eps).powi(2)).abs() < 1e-12);
    // Gamma(1/2+e) Gamma(1/2-e) = pi / cos(pi e)
    let b = beta(2.0 * eps, 1.0 - 2.0 * eps);
    assert!((s - b * ((PI * eps).cos() / PI).powi(2)).abs() < 1e-12 * s);
}

#[test]
fn square_function_dominates_the_maximal_function() {
    let g = grid();
    let tg = TGrid::default();
    for m in [window_symbol(), make_slow_decay(0.5, 1.0, 1.0).unwrap()] {
        let mt = tilde_for(&m, 0.05, &g, &tg).unwrap();
        for seed in 0..2 {
            let f = band_field(&g, 0.125, 0.5, 20 + seed);
            let prep = Prepared::new(&f).unwrap();
            let r = domination_prepared(&m, &mt, &prep, 0.05, &tg).unwrap();
            assert!(r.pass, "{}: {r:?}", m.label());
            assert!(r.max_ratio_sharp <= DOMINATION_SLACK, "{r:?}");
            assert!(r.points > 0);
        }
    }
    let zero_f = Field::zeros(g, Domain::Physical);
    let r = domination_check(&window_symbol(), &zero_f, 0.05, &tg).unwrap();
    assert!(r.pass && r.points == 0);
    assert!(matches!(
        domination_check(&constant(1.0), &zero_f, 0.05, &tg),
        Err(Error::Precondition(_))
    ));
    let _ = zero();
}
