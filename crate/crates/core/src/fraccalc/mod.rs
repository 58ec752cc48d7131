//! Riemann–Liouville integrals, the Marchaud derivative and the symbol
//! transform `m -> m~`.
//!
//! Conventions, for `0 < alpha < 1`:
//!
//! ```text
//! I^a f(t) = 1/Gamma(a) int_0^t (t - s)^(a-1) f(s) ds
//! D^a F(t) = 1/Gamma(1-a) [ F(t)/t^a + a int_0^t (F(t) - F(s)) / (t - s)^(1+a) ds ]
//! ```
//!
//! The factor `a` in front of the Marchaud integral makes `D^a` agree with
//! `d/dt I^(1-a)`; without it `D^(1/2) t` would come out as `3 sqrt(t)/sqrt(pi)`
//! instead of `2 sqrt(t)/sqrt(pi)`. With this form `I^a D^a F = F` holds for
//! every `F` with `F(0) = 0`, which is what [`reconstruct`] requires.

pub mod quadrature;
mod tilde;

pub use quadrature::{GradedMesh, Scalar, Tolerance};
pub use tilde::{m_tilde, reproduce_symbol, tilde_symbol, tilde_table, TildeQuadrature};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::special::gamma;
use quadrature::{adaptive, singular_at_zero};

/// A fractional order `alpha` in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(FracOrder(alpha))
        } else {
            Err(invalid(format!("fractional order {alpha} not in (0,1)")))
        }
    }

    /// The order `1/2 + eps` used by the `m~` transform, `eps` in `(0, 1/6)`.
    pub fn half_plus(eps: f64) -> Result<Self> {
        check_epsilon(eps)?;
        Ok(FracOrder(0.5 + eps))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 / 6.0 {
        Ok(())
    } else {
        Err(invalid(format!("epsilon {eps} not in (0, 1/6)")))
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("t = {t} must be positive")))
    }
}

/// `I^alpha f(t)`. `f` may be integrably singular at `0`.
pub fn rl_integral<T, F>(f: F, alpha: FracOrder, t: f64) -> Result<T>
where
    T: Scalar,
    F: Fn(f64) -> T,
{
    rl_integral_with(f, alpha, t, Tolerance::default())
}

pub fn rl_integral_with<T, F>(f: F, alpha: FracOrder, t: f64, tol: Tolerance) -> Result<T>
where
    T: Scalar,
    F: Fn(f64) -> T,
{
    check_time(t)?;
    let a = alpha.value();
    let half = 0.5 * t;
    // left half: kernel smooth, f possibly singular at 0
    let left = singular_at_zero(|s| f(s) * (t - s).powf(a - 1.0), half, tol)?;
    // right half: t - s = v^(1/a) turns the kernel singularity into a constant
    let inv = 1.0 / a;
    let right = adaptive(|v: f64| f(t - v.powf(inv)), 0.0, half.powf(a), tol)? * inv;
    Ok((left + right) * (1.0 / gamma(a)))
}

/// Result of a Marchaud evaluation together with the regularity diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct Marchaud {
    pub value: f64,
    /// Set when the local difference quotient `|F(t) - F(t - v)| / v^alpha`
    /// grows by more than 100x toward `v -> 0`.
    pub warning: Option<String>,
}

/// `D^alpha F(t)` in Marchaud form.
pub fn marchaud_derivative<F>(f: F, alpha: FracOrder, t: f64) -> Result<Marchaud>
where
    F: Fn(f64) -> f64,
{
    marchaud_with(f, alpha, t, Tolerance::default())
}

pub fn marchaud_with<F>(f: F, alpha: FracOrder, t: f64, tol: Tolerance) -> Result<Marchaud>
where
    F: Fn(f64) -> f64,
{
    check_time(t)?;
    let a = alpha.value();
    let ft = f(t);
    let warning = hoelder_warning(&f, a, t);
    let g = |v: f64| (ft - f(t - v)) * v.powf(-1.0 - a);
    let integral = match smooth_expansion_integral(g, a, t, tol).map_or_else(|| singular_at_zero(g, t, tol), Ok) {
        Ok(v) => v,
        Err(e) => {
            return Err(match warning {
                Some(w) => Error::Precondition(w),
                None => e,
            })
        }
    };
    let value = (ft * t.powf(-a) + a * integral) / gamma(1.0 - a);
    if !value.is_finite() {
        return Err(Error::Accuracy {
            coarse: f64::NAN,
            fine: value,
            tolerance: tol.rel,
        });
    }
    Ok(Marchaud { value, warning })
}

/// Dyadic cells below `v` this many halvings of `t` are replaced by the
/// expansion tail.
const EXPANSION_CELLS: usize = 14;

/// `int_0^t g` for `g(v) = sum_{i>=1} a_i v^{i-1-alpha}`, the form of the
/// Marchaud integrand of a smooth `F`.
///
/// The dyadic cells then decay with the known ratios `2^{-(i-alpha)}`, so the
/// part below the last cell follows from fitting the first terms to the last
/// cells. This avoids sampling `F(t) - F(t - v)` where it cancels. Returns
/// `None` when the three- and four-term tails disagree, i.e. when `F` is not
/// smooth enough for the expansion.
fn smooth_expansion_integral<G: Fn(f64) -> f64>(g: G, alpha: f64, t: f64, tol: Tolerance) -> Option<f64> {
    let mut cells = Vec::with_capacity(EXPANSION_CELLS);
    let mut sum = 0.0f64;
    let mut hi = t;
    for _ in 0..EXPANSION_CELLS {
        let cell_tol = Tolerance {
            abs: tol.abs.max(1e-2 * tol.rel * sum.abs()),
            ..tol
        };
        let c = adaptive(&g, 0.5 * hi, hi, cell_tol).ok()?;
        sum += c;
        cells.push(c);
        hi *= 0.5;
    }
    let rho: Vec<f64> = (1..=4).map(|i| 2f64.powf(-(i as f64 - alpha))).collect();
    let n = cells.len();
    let tail = |terms: usize| -> Option<f64> {
        // u_i with c_{n-terms+k} = sum_i u_i rho_i^k, by Gaussian elimination
        let mut m: Vec<Vec<f64>> = (0..terms)
            .map(|k| {
                let mut row: Vec<f64> = rho[..terms].iter().map(|r| r.powi(k as i32)).collect();
                row.push(cells[n - terms + k]);
                row
            })
            .collect();
        for col in 0..terms {
            let piv = (col..terms).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))?;
            m.swap(col, piv);
            if m[col][col] == 0.0 {
                return None;
            }
            let pivot = m[col].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != col {
                    let f = row[col] / pivot[col];
                    for (a, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                        *a -= f * p;
                    }
                }
            }
        }
        // beyond the last fitted cell: sum_{k >= terms} u_i rho_i^k
        Some(
            (0..terms)
                .map(|i| m[i][terms] / m[i][i] * rho[i].powi(terms as i32) / (1.0 - rho[i]))
                .sum(),
        )
    };
    let (t3, t4) = (tail(3)?, tail(4)?);
    let total = sum + t4;
    // the signed total may cancel, so the tolerance follows the magnitudes
    let scale = total.abs().max(1e-3 * (sum.abs() + t4.abs()));
    if (t4 - t3).abs() <= tol.abs.max(tol.rel * scale) && total.is_finite() {
        Some(total)
    } else {
        None
    }
}

fn hoelder_warning<F: Fn(f64) -> f64>(f: &F, a: f64, t: f64) -> Option<String> {
    let ft = f(t);
    let q = |k: i32| {
        let v = t * 2f64.powi(-k);
        (ft - f(t - v)).abs() / v.powf(a)
    };
    let coarse = (4..10).map(q).fold(0.0, f64::max);
    let fine = (20..30).map(q).fold(0.0, f64::max);
    if fine > 100.0 * coarse.max(1e-300) && fine > 1e-12 {
        Some(format!(
            "difference quotient grows from {coarse:.3e} to {fine:.3e} near t = {t}: \
             F is not Hoelder of order > {a} there"
        ))
    } else {
        None
    }
}

/// `d/dt I^(1-alpha) F` by Richardson-extrapolated central differences.
/// Independent oracle for [`marchaud_derivative`].
pub fn rl_derivative_oracle<F>(f: F, alpha: FracOrder, t: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    check_time(t)?;
    let beta = FracOrder::new(1.0 - alpha.value())?;
    let tol = Tolerance {
        abs: 1e-16,
        rel: 1e-13,
        max_panels: 8000,
    };
    let i = |s: f64| rl_integral_with(&f, beta, s, tol);
    let h = 1e-2 * t;
    let d = |h: f64| -> Result<f64> { Ok((i(t + h)? - i(t - h)?) / (2.0 * h)) };
    let d1 = d(h)?;
    let d2 = d(0.5 * h)?;
    Ok((4.0 * d2 - d1) / 3.0)
}

/// `I^alpha (D^alpha F)(t)`, which equals `F(t)` when `F(0) = 0`.
pub fn reconstruct<F>(f: F, alpha: FracOrder, t: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    check_time(t)?;
    let f0 = f(0.0);
    if f0 != 0.0 {
        return Err(Error::Precondition(format!("reconstruction needs F(0) = 0, got {f0}")));
    }
    let inner = Tolerance {
        abs: 1e-15,
        rel: 1e-10,
        max_panels: 4000,
    };
    let outer = Tolerance {
        abs: 1e-13,
        rel: 1e-8,
        max_panels: 4000,
    };
    let failure = std::cell::Cell::new(None);
    let d = |s: f64| match marchaud_with(&f, alpha, s, inner) {
        Ok(m) => m.value,
        Err(e) => {
            failure.set(Some(format!("at s = {s:e}: {e}")));
            f64::NAN
        }
    };
    let r = rl_integral_with(d, alpha, t, outer);
    if let Some(msg) = failure.take() {
        return Err(Error::Precondition(format!("inner derivative failed: {msg}")));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn orders_are_validated() {
        assert!(FracOrder::new(0.0).is_err());
        assert!(FracOrder::new(1.0).is_err());
        assert!(FracOrder::half_plus(0.2).is_err());
        assert!((FracOrder::half_plus(0.05).unwrap().value() - 0.55).abs() < 1e-15);
    }

    #[test]
    fn rl_power_laws() {
        let half = FracOrder::new(0.5).unwrap();
        let v: f64 = rl_integral(|_| 1.0, half, 1.0).unwrap();
        assert!(rel(v, 2.0 / PI.sqrt()) < 1e-10);
        let v: f64 = rl_integral(|s| s, half, 1.0).unwrap();
        assert!(rel(v, 4.0 / (3.0 * PI.sqrt())) < 1e-10);
    }

    #[test]
    fn rl_sine_matches_adaptive_oracle() {
        // independent high-precision quadrature: 1.17730887528358462...
        let a = FracOrder::new(0.3).unwrap();
        let v: f64 = rl_integral(f64::sin, a, 2.0).unwrap();
        assert!(rel(v, 1.177_308_875_283_584_6) < 1e-9);
    }

    #[test]
    fn marchaud_examples() {
        let half = FracOrder::new(0.5).unwrap();
        let d = marchaud_derivative(|s| s, half, 1.0).unwrap();
        assert!(rel(d.value, 2.0 / PI.sqrt()) < 1e-9);
        assert!(d.warning.is_none());
        let d = marchaud_derivative(|_| 1.0, half, 1.0).unwrap();
        assert!(rel(d.value, 1.0 / PI.sqrt()) < 1e-12);
        let q = FracOrder::new(0.25).unwrap();
        let d = marchaud_derivative(|s| s * s, q, 1.0).unwrap();
        assert!(rel(d.value, 2.0 / gamma(2.75)) < 1e-9);
    }

    #[test]
    fn marchaud_flags_rough_functions() {
        let a = FracOrder::new(0.6).unwrap();
        let r = marchaud_derivative(|s| (1.0 - s).abs().powf(0.2), a, 1.0);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn reconstruction_examples() {
        let half = FracOrder::new(0.5).unwrap();
        assert!(rel(reconstruct(|s| s, half, 1.0).unwrap(), 1.0) < 1e-6);
        assert_eq!(reconstruct(|_| 0.0, half, 1.0).unwrap(), 0.0);
        let a = FracOrder::new(0.4).unwrap();
        let v = reconstruct(|s| s * (-s).exp(), a, 2.0).unwrap();
        assert!(rel(v, 2.0 * (-2.0f64).exp()) < 1e-5);
        assert!(reconstruct(|_| 1.0, half, 1.0).is_err());
    }
}
