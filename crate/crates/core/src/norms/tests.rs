use super::*;
use crate::dyadic::WindowFamily;
use crate::error::Error;
use crate::operators::TGrid;
use crate::spectral::{Domain, Field};
use crate::symbols::{make_slow_decay, window_symbol, zero};
use crate::C64;

// independent high-precision quadratures of the window profile
const WINDOW_L2_1D: f64 = 1.103_229_694_270_442_6;
const WINDOW_LOG_L2: f64 = 0.566_374_156_804_534_7;

fn grid() -> Grid {
    Grid::with_nyquist(1, 8192, 2.0).unwrap()
}

fn family(a: i32, b: i32) -> WindowFamily {
    WindowFamily::new(a, b).unwrap()
}

fn window_field(g: &Grid) -> Field {
    family(0, 0)
        .shell_localize(&crate::symbols::constant(1.0), 0, g)
        .unwrap()
}

#[test]
fn zero_data_has_zero_norm_in_every_space() {
    let g = grid();
    let f = Field::zeros(g, Domain::Frequency);
    for s in [
        SpaceTag::Lp { p: 2.0 },
        SpaceTag::LInf,
        SpaceTag::SobolevL2 { s: 1.0 },
        SpaceTag::BesovDiag { p: 4.0, s: 0.7 },
        SpaceTag::Hoelder { gamma: 0.65 },
    ] {
        assert_eq!(base_norm(&f, s).unwrap(), 0.0, "{s:?}");
    }
    let r = sigma_norm(&zero(), SpaceTag::SobolevL2 { s: 1.0 }, 0.0, &family(-3, 3), &g).unwrap();
    assert_eq!(r.total, 0.0);
    assert!(r.shells.iter().all(|s| s.norm == 0.0));
    assert_eq!(r.tail, Some(0.0));
}

#[test]
fn window_l2_matches_quadrature_oracle() {
    let g = grid();
    let v = base_norm(&window_field(&g), SpaceTag::Lp { p: 2.0 }).unwrap();
    assert!((v - WINDOW_L2_1D).abs() < 1e-10, "{v}");
}

#[test]
fn sobolev_zero_equals_l2_by_plancherel() {
    let g = grid();
    let f = window_field(&g);
    let a = base_norm(&f, SpaceTag::SobolevL2 { s: 0.0 }).unwrap();
    assert!((a - WINDOW_L2_1D).abs() < 1e-10, "{a}");
}

#[test]
fn batched_sobolev_norms_match_single_ones() {
    let g = grid();
    let f = window_field(&g);
    let s = [0.0, 0.5, 1.0, 2.5];
    let many = sobolev_norms(&f, &s).unwrap();
    for (v, &e) in many.iter().zip(&s) {
        let one = base_norm(&f, SpaceTag::SobolevL2 { s: e }).unwrap();
        assert!((v - one).abs() <= 1e-13 * one, "s = {e}: {v} vs {one}");
    }
}

#[test]
fn window_sup_norm_sums_three_shells() {
    let g = grid();
    let r = sigma_norm(&window_symbol(), SpaceTag::LInf, 0.0, &family(-4, 4), &g).unwrap();
    for s in &r.shells {
        match s.j {
            0 => assert!((s.norm - 1.0).abs() < 1e-15),
            // psi(2x) psi(x) = chi (1 - chi) peaks at 1/4
            -1 | 1 => assert!((s.norm - 0.25).abs() < 1e-12, "{s:?}"),
            _ => assert_eq!(s.norm, 0.0),
        }
    }
    assert!((r.total - 1.125f64.sqrt()).abs() < 1e-12);
    assert_eq!(r.tail, Some(0.0));
}

#[test]
fn total_recomputes_from_shells() {
    let g = grid();
    let r = sigma_norm(
        &window_symbol(),
        SpaceTag::SobolevL2 { s: 1.0 },
        0.4,
        &family(-3, 3),
        &g,
    )
    .unwrap();
    assert!((r.total - r.recompute_total()).abs() <= 1e-12 * r.total);
    let json = serde_json::to_value(&r).unwrap();
    for key in ["space", "theta", "total", "shells", "tail", "config_fingerprint"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn dilation_shifts_shells() {
    let g = grid();
    let w = window_symbol();
    let w2 = w.dilate(2.0).unwrap();
    let sp = SpaceTag::SobolevL2 { s: 0.5 };
    let a = sigma_norm(&w, sp, 0.0, &family(-6, 6), &g).unwrap();
    let b = sigma_norm(&w2, sp, 0.0, &family(-6, 6), &g).unwrap();
    // shell j of m(2.) is shell j+1 of m
    for s in &b.shells {
        if let Some(t) = a.shells.iter().find(|t| t.j == s.j + 1) {
            assert!((s.norm - t.norm).abs() <= 1e-10 * (1.0 + t.norm));
        }
    }
    assert!((a.total - b.total).abs() < 1e-10);
}

#[test]
fn sobolev_shells_increase_with_s() {
    let g = grid();
    let m = make_slow_decay(0.5, 1.0, 1.0).unwrap();
    let f = family(0, 6);
    let lo = sigma_norm(&m, SpaceTag::SobolevL2 { s: 0.5 }, 0.0, &f, &g).unwrap();
    let hi = sigma_norm(&m, SpaceTag::SobolevL2 { s: 1.0 }, 0.0, &f, &g).unwrap();
    for (a, b) in lo.shells.iter().zip(&hi.shells) {
        assert!(a.norm <= b.norm);
    }
}

#[test]
fn slow_decay_shells_converge_geometrically() {
    let g = Grid::with_nyquist(1, 16384, 2.0).unwrap();
    let m = make_slow_decay(0.5, 1.0, 1.0).unwrap();
    let r = sigma_norm(&m, SpaceTag::SobolevL2 { s: 1.0 }, 0.0, &family(-4, 20), &g).unwrap();
    assert!(r.warnings.is_empty(), "{:?}", r.warnings);
    assert!(r.total.is_finite() && r.total > 0.0);
    assert_eq!(r.tail_low, Some(0.0));
    let slope = r.slope(14..=20).unwrap();
    assert!((slope + 0.5).abs() < 0.1, "{slope}");
}

#[test]
fn non_decaying_shells_warn() {
    let g = grid();
    let m = make_slow_decay(0.5, 0.25, 1.0).unwrap();
    // s = 1 > beta / alpha: shells grow
    let r = sigma_norm(&m, SpaceTag::SobolevL2 { s: 1.0 }, 0.0, &family(0, 12), &g).unwrap();
    assert!(r.diverging());
    assert!(!r.warnings.is_empty());
    assert!(r.total.is_finite());
}

#[test]
fn non_compact_data_is_a_contract_violation() {
    let g = grid();
    let f = Field::new(g, Domain::Frequency, vec![C64::new(1.0, 0.0); g.len()]).unwrap();
    assert!(matches!(
        base_norm(&f, SpaceTag::Lp { p: 2.0 }),
        Err(Error::Contract(_))
    ));
}

#[test]
fn bad_space_parameters_are_rejected() {
    let f = window_field(&grid());
    assert!(base_norm(&f, SpaceTag::Lp { p: 0.5 }).is_err());
    assert!(base_norm(&f, SpaceTag::Hoelder { gamma: 1.5 }).is_err());
    assert!(base_norm(&f, SpaceTag::SobolevL2 { s: -1.0 }).is_err());
}

#[test]
fn besov_and_hoelder_of_the_window() {
    let f = window_field(&grid());
    let b0 = base_norm(&f, SpaceTag::BesovDiag { p: 2.0, s: 0.5 }).unwrap();
    let b1 = base_norm(&f, SpaceTag::BesovDiag { p: 2.0, s: 1.0 }).unwrap();
    let binf = base_norm(
        &f,
        SpaceTag::BesovDiag {
            p: f64::INFINITY,
            s: 1.0,
        },
    )
    .unwrap();
    assert!(b0.is_finite() && b0 > 0.0 && b0 <= b1);
    assert!(binf > 0.0 && binf <= b1 * 10.0);
    let h = base_norm(&f, SpaceTag::Hoelder { gamma: 0.65 }).unwrap();
    // sup is 1, the seminorm is positive and at most the Lipschitz bound
    assert!(h > 1.0 && h < 1.0 + 8.0, "{h}");
}

#[test]
fn space_tags_round_trip_through_json() {
    for s in [
        SpaceTag::Lp { p: f64::INFINITY },
        SpaceTag::BesovDiag { p: 4.0, s: 1.1 },
        SpaceTag::LInf,
        SpaceTag::Hoelder { gamma: 0.65 },
    ] {
        let j = serde_json::to_string(&s).unwrap();
        let back: SpaceTag = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s, "{j}");
    }
}

#[test]
fn weighted_sobolev_of_the_window() {
    let g = grid();
    let v = weighted_sobolev_norm(&window_symbol(), 2.0, 0, 0.0, &g).unwrap();
    assert!((v - 2.0 * WINDOW_LOG_L2).abs() < 1e-9, "{v}");
    assert_eq!(weighted_sobolev_norm(&zero(), 2.0, 1, 0.0, &g).unwrap(), 0.0);
    let c = crate::symbols::constant(1.0);
    assert!(matches!(
        weighted_sobolev_norm(&c, 2.0, 0, 0.0, &g),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn weighted_form_tracks_the_dyadic_norm() {
    let g = grid();
    let w = window_symbol();
    let w2 = w.dilate(2.0).unwrap();
    let f = family(-6, 6);
    let sp = SpaceTag::SobolevL2 { s: 1.0 };
    let ratio = |m: &crate::symbols::Symbol| {
        let a = weighted_sobolev_norm(m, 2.0, 1, 0.0, &g).unwrap();
        let b = sigma_norm(m, sp, 0.0, &f, &g).unwrap().total;
        a / (b * b)
    };
    let r1 = ratio(&w);
    let r2 = ratio(&w2);
    assert!(r1 > 0.01 && r1 < 100.0, "{r1}");
    assert!((r1 / r2 - 1.0).abs() < 0.02, "{r1} {r2}");
}

#[test]
fn double_integral_seminorm_of_the_window() {
    let g = Grid::with_nyquist(1, 16384, 4.0).unwrap();
    assert!(matches!(
        equivalence_seminorm(&window_symbol(), 0.3, 0.0, &grid()),
        Err(Error::Precondition(_))
    ));
    let w = window_symbol();
    assert_eq!(equivalence_seminorm(&zero(), 0.3, 0.0, &g).unwrap(), 0.0);
    let a = equivalence_seminorm(&w, 0.3, 0.0, &g).unwrap();
    let b = sigma_norm(&w, SpaceTag::SobolevL2 { s: 0.3 }, 0.0, &family(-6, 6), &g)
        .unwrap()
        .total;
    let r = a / (b * b);
    assert!(r > 0.1 && r < 10.0, "{r}");
    let a2 = equivalence_seminorm(&w.dilate(2.0).unwrap(), 0.3, 0.0, &g).unwrap();
    assert!((a2 / a - 1.0).abs() < 0.02, "{a} {a2}");
    let fine = equivalence_seminorm(&w, 0.3, 0.0, &g.refined_spectrum()).unwrap();
    assert!((fine / a - 1.0).abs() < 0.1, "{a} {fine}");
}

#[test]
fn hnorm_of_the_window() {
    let tg = TGrid::default();
    let w = window_symbol();
    let h = hnorm_sup(&w, &[vec![1.0]], &tg).unwrap();
    // 16 nodes per octave resolve the profile to ~1e-6; 64 to ~1e-10
    assert!((h.value / WINDOW_LOG_L2.sqrt() - 1.0).abs() < 3e-6, "{}", h.value);
    assert!(h.warnings.is_empty());
    let fine = hnorm_sup(&w, &[vec![1.0]], &tg.refined().refined()).unwrap();
    assert!((fine.value / WINDOW_LOG_L2.sqrt() - 1.0).abs() < 1e-9, "{}", fine.value);
    let dirs: Vec<Vec<f64>> = (0..16)
        .map(|k| {
            let a = k as f64 * std::f64::consts::PI / 8.0;
            vec![a.cos(), a.sin()]
        })
        .collect();
    let h2 = hnorm_sup(&w, &dirs, &tg).unwrap();
    let lo = h2.per_direction.iter().cloned().fold(f64::MAX, f64::min);
    assert!((h2.value - lo) / h2.value < 1e-6);
    assert_eq!(hnorm_sup(&zero(), &[vec![1.0]], &tg).unwrap().value, 0.0);
}
