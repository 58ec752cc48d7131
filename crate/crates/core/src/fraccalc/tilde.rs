//! The symbol transform
//!
//! ```text
//! m~(xi) = m(xi) + (1/2 + eps) int_0^1 (m(xi) - m(s xi)) (1 - s)^(-3/2 - eps) ds
//! ```
//!
//! and the reproducing formula
//! `m(t xi) = I^(1/2+eps)[ s^(-1/2-eps) m~(s xi) ](t) / Gamma(1/2 - eps)`.
//!
//! Splitting the integral at `s = 1/2` and integrating the constant part in
//! closed form gives
//!
//! ```text
//! m~(xi) = 2^(1/2+eps) m(xi)
//!        - (1/2+eps) int_0^(1/2) m(s xi) (1-s)^(-3/2-eps) ds          (regular)
//!        + (1/2+eps) int_0^(1/2) (m(xi) - m((1-u) xi)) u^(-3/2-eps) du (singular)
//! ```
//!
//! Both pieces are integrated over dyadic cells. The singular piece uses
//! cells `[2^-(k+2), 2^-(k+1)]`, `k < M`, with a tail correction below
//! `u_M = 2^-(M+1)` that assumes `m(xi) - m((1-u) xi) ~ c u^g` and estimates
//! `g` from the two finest sample points.

use serde::{Deserialize, Serialize};

use super::quadrature::{adaptive, FixedRule, Tolerance};
use super::{check_epsilon, rl_integral_with, FracOrder};
use crate::error::{Error, Result};
use crate::special::gamma;
use crate::symbols::{Symbol, SymbolMeta};
use crate::C64;

/// Parameters of the `m~` quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TildeQuadrature {
    pub epsilon: f64,
    /// Number of geometric cells `M` on the singular side.
    pub levels: usize,
    /// Cells integrated adaptively before switching to a fixed rule.
    pub adaptive_levels: usize,
    /// Nodes of the fixed Gauss rule on the fine cells.
    pub fine_order: usize,
    /// Cap on dyadic cells of the regular part.
    pub regular_cells: usize,
    pub rel_tol: f64,
}

impl Default for TildeQuadrature {
    fn default() -> Self {
        TildeQuadrature {
            epsilon: 0.05,
            levels: 24,
            adaptive_levels: 8,
            fine_order: 5,
            regular_cells: 60,
            rel_tol: 1e-11,
        }
    }
}

impl TildeQuadrature {
    pub fn new(epsilon: f64) -> Result<Self> {
        let q = TildeQuadrature {
            epsilon,
            ..Default::default()
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        if self.levels < 4 || self.adaptive_levels > self.levels || self.fine_order == 0 {
            return Err(crate::error::invalid(
                "m~ quadrature needs levels >= 4, adaptive_levels <= levels, fine_order >= 1",
            ));
        }
        Ok(())
    }

    fn tol(&self, scale: f64) -> Tolerance {
        Tolerance {
            abs: (1e-15 * scale).max(1e-200),
            rel: self.rel_tol,
            max_panels: 4000,
        }
    }

    /// `m~` along the ray through `xi`, given `g(s) = m(s xi)`.
    ///
    /// `inner` is the largest `s` for which `g` vanishes on `[0, s]`, if known.
    pub fn along_ray<G>(&self, g: G, inner: Option<f64>) -> Result<C64>
    where
        G: Fn(f64) -> C64,
    {
        let eps = self.epsilon;
        let gamma_exp = 1.5 + eps;
        let lead = 0.5 + eps;
        let m1 = g(1.0);
        if !finite(m1) {
            return Err(nan_error());
        }
        if inner.is_some_and(|s| s >= 1.0) {
            return Ok(C64::new(0.0, 0.0));
        }
        // rays that barely enter the support see only tiny values; an absolute
        // floor keeps the tolerance attainable there
        let scale = m1.norm().max(g(0.75).norm()).max(g(0.3).norm()).max(1.0);
        let tol = self.tol(scale);

        // regular part over [0, 1/2]
        let mut regular = C64::new(0.0, 0.0);
        let mut hi = 0.5;
        let mut reached_zero = false;
        for _ in 0..self.regular_cells {
            if inner.is_some_and(|s| hi <= s) {
                reached_zero = true;
                break;
            }
            let lo = 0.5 * hi;
            regular += adaptive(|s: f64| g(s) * (1.0 - s).powf(-gamma_exp), lo, hi, tol)?;
            hi = lo;
        }
        if !reached_zero {
            // [0, hi]: kernel is 1 + O(hi) there
            regular += g(0.5 * hi) * hi;
        }

        // singular part
        let diff = |u: f64| m1 - g(1.0 - u);
        let fine = FixedRule::new(self.fine_order);
        let mut singular = C64::new(0.0, 0.0);
        for k in 0..self.levels {
            let hi = 0.5f64.powi(k as i32 + 1);
            let lo = 0.5 * hi;
            let kernel = |u: f64| diff(u) * u.powf(-gamma_exp);
            singular += if k < self.adaptive_levels {
                adaptive(kernel, lo, hi, tol)?
            } else {
                fine.integrate(kernel, lo, hi)
            };
        }
        let u_m = 0.5f64.powi(self.levels as i32 + 1);
        let d_m = diff(u_m);
        let d_prev = diff(2.0 * u_m);
        let tail = if d_m.norm() == 0.0 {
            C64::new(0.0, 0.0)
        } else {
            let g_est = if d_prev.norm() > 0.0 {
                (d_prev.norm() / d_m.norm()).log2()
            } else {
                1.0
            };
            let g_est = g_est.clamp(lead + 0.05, 2.0);
            d_m * (u_m.powf(-lead) / (g_est - lead))
        };

        let value = m1 * 2f64.powf(lead) - regular * lead + (singular + tail) * lead;
        if finite(value) {
            Ok(value)
        } else {
            Err(nan_error())
        }
    }

    /// `m~(xi)`.
    pub fn eval(&self, m: &Symbol, xi: &[f64]) -> Result<C64> {
        let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        let inner = m
            .meta()
            .inner_radius
            .map(|a| if r > 0.0 { a / r } else { f64::INFINITY });
        let out = if m.is_radial() {
            self.along_ray(|s| m.eval_radius(s * r), inner)
        } else {
            self.along_ray(
                |s| {
                    let y: Vec<f64> = xi.iter().map(|v| v * s).collect();
                    m.eval(&y)
                },
                inner,
            )
        };
        out.map_err(|e| match e {
            Error::Accuracy { .. } => e,
            _ => Error::Evaluation {
                symbol: m.label(),
                xi: xi.to_vec(),
            },
        })
    }

    /// `m~` at radius `r` of a radial symbol.
    pub fn eval_radius(&self, m: &Symbol, r: f64) -> Result<C64> {
        self.eval(m, &[r])
    }
}

fn finite(v: C64) -> bool {
    v.re.is_finite() && v.im.is_finite()
}

fn nan_error() -> Error {
    Error::Evaluation {
        symbol: "m~".into(),
        xi: Vec::new(),
    }
}

/// `m~(xi)` with the default quadrature at the given `eps`.
pub fn m_tilde(m: &Symbol, eps: f64, xi: &[f64]) -> Result<C64> {
    TildeQuadrature::new(eps)?.eval(m, xi)
}

/// `m~` as a symbol. Evaluation failures surface as NaN, which
/// [`Symbol::try_eval`] reports as an evaluation error.
pub fn tilde_symbol(m: &Symbol, q: TildeQuadrature) -> Result<Symbol> {
    q.validate()?;
    let inner = m.clone();
    let meta = SymbolMeta {
        radial: m.is_radial(),
        inner_radius: m.meta().inner_radius,
        outer_radius: None,
        smooth_at_origin: false,
        homogeneity: m.meta().homogeneity,
        decay: None,
    };
    let nan = C64::new(f64::NAN, f64::NAN);
    let s = if m.is_radial() {
        Symbol::radial(format!("tilde[{}]", m.label()), move |r| {
            q.eval_radius(&inner, r).unwrap_or(nan)
        })
        .with_meta(|mm| *mm = meta)?
    } else {
        Symbol::general(format!("tilde[{}]", m.label()), meta, move |xi| {
            q.eval(&inner, xi).unwrap_or(nan)
        })?
    };
    Ok(s.with_params(&[("epsilon", q.epsilon)]))
}

const TABLE_ORDER: usize = 8;

/// `m~` of a radial symbol, precomputed on the geometric radii
/// `r_lo 2^(i / per_octave)` up to `r_hi` and read back by local Lagrange
/// interpolation in `log2 r`. Radii outside the table are evaluated directly.
/// This is the cache used when `m~` is needed on many dilated lattices.
pub fn tilde_table(m: &Symbol, q: TildeQuadrature, r_lo: f64, r_hi: f64, per_octave: usize) -> Result<Symbol> {
    q.validate()?;
    if !m.is_radial() {
        return Err(Error::Precondition("m~ table needs a radial symbol".into()));
    }
    if !(r_lo > 0.0 && r_hi > r_lo && per_octave >= 4) {
        return Err(crate::error::invalid(format!(
            "bad table range [{r_lo}, {r_hi}] or density {per_octave}"
        )));
    }
    let pad = TABLE_ORDER as f64 / per_octave as f64;
    let lo = r_lo.log2() - pad;
    let count = ((r_hi.log2() + pad - lo) * per_octave as f64).ceil() as usize + 1;
    let step = 1.0 / per_octave as f64;
    let values = crate::par::try_map_range(count, |i| q.eval_radius(m, (lo + i as f64 * step).exp2()))?;
    let direct = m.clone();
    let nan = C64::new(f64::NAN, f64::NAN);
    let mut meta = m.meta().clone();
    meta.outer_radius = None;
    meta.decay = None;
    let inner = meta.inner_radius;
    let origin = m.eval_radius(0.0);
    let s = Symbol::radial(format!("tilde[{}]", m.label()), move |r| {
        if r == 0.0 {
            return origin;
        }
        if inner.is_some_and(|a| r <= a) {
            return C64::new(0.0, 0.0);
        }
        let u = (r.log2() - lo) / step;
        let half = (TABLE_ORDER / 2) as f64;
        if u < half || u > (count - 1) as f64 - half {
            return q.eval_radius(&direct, r).unwrap_or(nan);
        }
        let first = (u.floor() - (half - 1.0)) as usize;
        // stencils reaching past the support edge cannot follow its onset
        if inner.is_some_and(|a| (lo + first as f64 * step).exp2() <= a) {
            return q.eval_radius(&direct, r).unwrap_or(nan);
        }
        let x = u - first as f64;
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..TABLE_ORDER {
            if x == a as f64 {
                return values[first + a];
            }
            let mut w = 1.0;
            for b in 0..TABLE_ORDER {
                if a != b {
                    w *= (x - b as f64) / (a as f64 - b as f64);
                }
            }
            acc += values[first + a] * w;
        }
        acc
    })
    .with_meta(|mm| *mm = meta)?;
    Ok(s.with_params(&[("epsilon", q.epsilon)]))
}

/// `I^(1/2+eps)[ s^(-1/2-eps) m~(s xi) ](t) / Gamma(1/2 - eps)`, which
/// reproduces `m(t xi)`.
pub fn reproduce_symbol(m: &Symbol, q: &TildeQuadrature, xi: &[f64], t: f64) -> Result<C64> {
    let eps = q.epsilon;
    let alpha = FracOrder::half_plus(eps)?;
    let failure = std::cell::Cell::new(None);
    let f = |s: f64| {
        let y: Vec<f64> = xi.iter().map(|v| v * s).collect();
        match q.eval(m, &y) {
            Ok(v) => v * s.powf(-0.5 - eps),
            Err(e) => {
                failure.set(Some(e));
                C64::new(f64::NAN, f64::NAN)
            }
        }
    };
    let tol = Tolerance {
        abs: 1e-14,
        rel: 1e-12,
        max_panels: 4000,
    };
    let r = rl_integral_with(f, alpha, t, tol);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(r? * (1.0 / gamma(0.5 - eps)))
}
