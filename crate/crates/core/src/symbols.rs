//! Multiplier symbols with the metadata consumed by norms and operators.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::dyadic::{bump, cutoff_above, window};
use crate::error::{invalid, Error, Result};
use crate::special::bessel_j0;
use crate::spectral::Grid;
use crate::C64;

pub type RadialFn = Arc<dyn Fn(f64) -> C64 + Send + Sync>;
pub type PointFn = Arc<dyn Fn(&[f64]) -> C64 + Send + Sync>;

#[derive(Clone)]
enum Eval {
    Radial(RadialFn),
    Point(PointFn),
}

/// Behavioural hints attached to a symbol.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SymbolMeta {
    pub radial: bool,
    /// The symbol is exactly zero for `|xi|` at or below this radius.
    pub inner_radius: Option<f64>,
    /// The symbol is exactly zero for `|xi|` at or above this radius.
    pub outer_radius: Option<f64>,
    pub smooth_at_origin: bool,
    pub homogeneity: Option<f64>,
    pub decay: Option<f64>,
}

#[derive(Clone)]
pub struct Symbol {
    name: String,
    params: Vec<(String, f64)>,
    eval: Eval,
    meta: SymbolMeta,
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Symbol")
            .field("label", &self.label())
            .field("meta", &self.meta)
            .finish()
    }
}

fn norm(xi: &[f64]) -> f64 {
    xi.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn real(v: f64) -> C64 {
    C64::new(v, 0.0)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(invalid(msg()))
    }
}

impl Symbol {
    /// A radial symbol `m(xi) = h(|xi|)`.
    pub fn radial<F>(name: impl Into<String>, h: F) -> Symbol
    where
        F: Fn(f64) -> C64 + Send + Sync + 'static,
    {
        Symbol {
            name: name.into(),
            params: Vec::new(),
            eval: Eval::Radial(Arc::new(h)),
            meta: SymbolMeta {
                radial: true,
                ..Default::default()
            },
        }
    }

    /// A general symbol. `meta.radial` is checked on sample rotations.
    pub fn general<F>(name: impl Into<String>, meta: SymbolMeta, f: F) -> Result<Symbol>
    where
        F: Fn(&[f64]) -> C64 + Send + Sync + 'static,
    {
        let s = Symbol {
            name: name.into(),
            params: Vec::new(),
            eval: Eval::Point(Arc::new(f)),
            meta,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_params(mut self, params: &[(&str, f64)]) -> Symbol {
        self.params = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        self
    }

    pub fn with_meta(mut self, f: impl FnOnce(&mut SymbolMeta)) -> Result<Symbol> {
        f(&mut self.meta);
        self.validate()?;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn meta(&self) -> &SymbolMeta {
        &self.meta
    }

    pub fn label(&self) -> String {
        if self.params.is_empty() {
            return self.name.clone();
        }
        let p: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}({})", self.name, p.join(","))
    }

    pub fn is_radial(&self) -> bool {
        self.meta.radial
    }

    /// Radial profile `r -> m(r e_1)`, without the support short cuts.
    fn raw_radius(&self, r: f64) -> C64 {
        match &self.eval {
            Eval::Radial(h) => h(r),
            Eval::Point(f) => f(&[r]),
        }
    }

    fn outside_support(&self, r: f64) -> bool {
        self.meta.inner_radius.is_some_and(|a| r <= a) || self.meta.outer_radius.is_some_and(|b| r >= b)
    }

    pub fn eval(&self, xi: &[f64]) -> C64 {
        let r = norm(xi);
        if self.outside_support(r) {
            return C64::new(0.0, 0.0);
        }
        match &self.eval {
            Eval::Radial(h) => h(r),
            Eval::Point(f) => f(xi),
        }
    }

    /// `m(r u)` for a radial symbol (any unit `u`).
    pub fn eval_radius(&self, r: f64) -> C64 {
        if self.outside_support(r.abs()) {
            return C64::new(0.0, 0.0);
        }
        self.raw_radius(r.abs())
    }

    pub fn try_eval(&self, xi: &[f64]) -> Result<C64> {
        let v = self.eval(xi);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation {
                symbol: self.label(),
                xi: xi.to_vec(),
            })
        }
    }

    /// `m(t xi)` on every point of the grid's frequency lattice. Radial
    /// symbols are evaluated once per distinct lattice radius.
    pub fn sample(&self, grid: &Grid, t: f64) -> Result<Vec<C64>> {
        let fail = |xi: Vec<f64>| Error::Evaluation {
            symbol: self.label(),
            xi,
        };
        if self.is_radial() {
            return crate::spectral::sample_radial(
                grid,
                |_| 1.0,
                |r| {
                    let v = self.eval_radius(t * r);
                    if v.re.is_finite() && v.im.is_finite() {
                        Ok(v)
                    } else {
                        Err(fail(vec![t * r]))
                    }
                },
            );
        }
        let d = grid.dim();
        crate::par::try_map_range(grid.len(), |k| {
            let mut p = grid.freq_point(k);
            for v in &mut p[..d] {
                *v *= t;
            }
            self.try_eval(&p[..d])
        })
    }

    /// Limit of `m` at the origin along the coordinate axes.
    pub fn value_at_origin(&self, dim: usize) -> Result<C64> {
        if self.meta.inner_radius.is_some() {
            return Ok(C64::new(0.0, 0.0));
        }
        let mut probes = Vec::new();
        for axis in 0..dim.max(1) {
            for &r in &[1e-7, 1e-9, -1e-9] {
                let mut xi = vec![0.0; dim.max(1)];
                xi[axis] = r;
                probes.push(self.eval(&xi));
            }
        }
        let first = probes[0];
        let finite = probes.iter().all(|v| v.re.is_finite() && v.im.is_finite());
        let agree = probes
            .iter()
            .all(|v| (*v - first).norm() <= 1e-5 * (1.0 + first.norm()));
        if !finite || !agree {
            return Err(Error::Precondition(format!(
                "{} has no finite limit at the origin",
                self.label()
            )));
        }
        Ok(probes[probes.len() - 2])
    }

    /// Construction-time checks of the metadata.
    pub fn validate(&self) -> Result<()> {
        if let (Some(a), Some(b)) = (self.meta.inner_radius, self.meta.outer_radius) {
            check(a < b, || format!("{}: empty support", self.label()))?;
        }
        if self.meta.radial {
            if let Eval::Point(f) = &self.eval {
                // spot check on rotated copies in 2 and 3 dimensions
                for &r in &[0.37, 1.3, 2.9, 11.0] {
                    let base = f(&[r, 0.0]);
                    for &(a, b) in &[(0.3f64, 0.0f64), (1.1, 0.7), (2.5, -1.2)] {
                        let p2 = [r * a.cos(), r * a.sin()];
                        let p3 = [r * a.cos() * b.cos(), r * a.sin() * b.cos(), r * b.sin()];
                        for v in [f(&p2), f(&p3)] {
                            if (v - base).norm() > 1e-12 * (1.0 + base.norm()) {
                                return Err(invalid(format!(
                                    "{} flagged radial but varies under rotation",
                                    self.label()
                                )));
                            }
                        }
                    }
                }
            }
        }
        if let Some(a) = self.meta.inner_radius {
            check(a > 0.0, || "inner radius must be positive".into())?;
        }
        Ok(())
    }

    /// `xi -> m(t xi)`.
    pub fn dilate(&self, t: f64) -> Result<Symbol> {
        check(t > 0.0 && t.is_finite(), || format!("dilation {t} must be positive"))?;
        let inner = self.clone();
        let mut meta = self.meta.clone();
        meta.inner_radius = meta.inner_radius.map(|a| a / t);
        meta.outer_radius = meta.outer_radius.map(|b| b / t);
        let mut params = self.params.clone();
        params.push(("dilation".into(), t));
        let eval = match &self.eval {
            Eval::Radial(_) => Eval::Radial(Arc::new(move |r| inner.eval_radius(t * r))),
            Eval::Point(_) => Eval::Point(Arc::new(move |xi: &[f64]| {
                let y: Vec<f64> = xi.iter().map(|v| v * t).collect();
                inner.eval(&y)
            })),
        };
        Ok(Symbol {
            name: self.name.clone(),
            params,
            eval,
            meta,
        })
    }

    /// Pointwise combination `a m + b other`.
    pub fn combine(&self, a: C64, other: &Symbol, b: C64) -> Symbol {
        let (m1, m2) = (self.clone(), other.clone());
        let both_radial = self.meta.radial && other.meta.radial;
        let meta = SymbolMeta {
            radial: both_radial,
            inner_radius: match (self.meta.inner_radius, other.meta.inner_radius) {
                (Some(x), Some(y)) => Some(x.min(y)),
                _ => None,
            },
            outer_radius: match (self.meta.outer_radius, other.meta.outer_radius) {
                (Some(x), Some(y)) => Some(x.max(y)),
                _ => None,
            },
            smooth_at_origin: self.meta.smooth_at_origin && other.meta.smooth_at_origin,
            homogeneity: None,
            decay: None,
        };
        let eval = if both_radial {
            Eval::Radial(Arc::new(move |r| a * m1.eval_radius(r) + b * m2.eval_radius(r)))
        } else {
            Eval::Point(Arc::new(move |xi: &[f64]| a * m1.eval(xi) + b * m2.eval(xi)))
        };
        Symbol {
            name: format!("combine[{},{}]", self.label(), other.label()),
            params: vec![("a_re".into(), a.re), ("b_re".into(), b.re)],
            eval,
            meta,
        }
    }

    /// Pointwise product.
    pub fn product(&self, other: &Symbol) -> Symbol {
        let (m1, m2) = (self.clone(), other.clone());
        let both_radial = self.meta.radial && other.meta.radial;
        let inner = match (self.meta.inner_radius, other.meta.inner_radius) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, y) => x.or(y),
        };
        let outer = match (self.meta.outer_radius, other.meta.outer_radius) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        let meta = SymbolMeta {
            radial: both_radial,
            inner_radius: inner,
            outer_radius: outer,
            smooth_at_origin: self.meta.smooth_at_origin && other.meta.smooth_at_origin,
            homogeneity: None,
            decay: None,
        };
        let eval = if both_radial {
            Eval::Radial(Arc::new(move |r| m1.eval_radius(r) * m2.eval_radius(r)))
        } else {
            Eval::Point(Arc::new(move |xi: &[f64]| m1.eval(xi) * m2.eval(xi)))
        };
        Symbol {
            name: format!("product[{},{}]", self.label(), other.label()),
            params: Vec::new(),
            eval,
            meta,
        }
    }

    /// `xi -> m(xi) - m(s xi)`.
    pub fn difference(&self, s: f64) -> Result<Symbol> {
        let mut d = self.combine(C64::new(1.0, 0.0), &self.dilate(s)?, C64::new(-1.0, 0.0));
        d.name = format!("difference[{}]", self.label());
        d.params = vec![("s".into(), s)];
        d.meta.inner_radius = self.meta.inner_radius.map(|a| a.min(a / s));
        d.meta.outer_radius = self.meta.outer_radius.map(|b| b.max(b / s));
        Ok(d)
    }
}

// --- the zoo ---

pub fn constant(c: f64) -> Symbol {
    let mut s = Symbol::radial("constant", move |_| real(c)).with_params(&[("c", c)]);
    s.meta.smooth_at_origin = true;
    s.meta.homogeneity = Some(0.0);
    s
}

pub fn zero() -> Symbol {
    let mut s = constant(0.0);
    s.name = "zero".into();
    s.params.clear();
    s
}

/// The bump `phi^`.
pub fn bump_symbol() -> Symbol {
    let mut s = Symbol::radial("bump", |r| real(bump(r)));
    s.meta.smooth_at_origin = true;
    s.meta.outer_radius = Some(2.0);
    s
}

/// The window `psi^`.
pub fn window_symbol() -> Symbol {
    let mut s = Symbol::radial("window", |r| real(window(r)));
    s.meta.inner_radius = Some(0.5);
    s.meta.outer_radius = Some(2.0);
    s
}

/// `c` on `1/2 <= |xi| <= 2`, smoothly cut to zero outside `(1/4, 4)`.
pub fn ring(c: f64) -> Symbol {
    let mut s = Symbol::radial("ring", move |r| real(c * (bump(r / 2.0) - bump(4.0 * r)))).with_params(&[("c", c)]);
    s.meta.inner_radius = Some(0.25);
    s.meta.outer_radius = Some(4.0);
    s
}

/// `|xi|^kappa`.
pub fn power(kappa: f64) -> Result<Symbol> {
    check(kappa >= 0.0, || format!("power exponent {kappa} must be >= 0"))?;
    let mut s = Symbol::radial("power", move |r| real(r.powf(kappa))).with_params(&[("kappa", kappa)]);
    s.meta.homogeneity = Some(kappa);
    s.meta.smooth_at_origin = kappa == 0.0 || kappa == 2.0;
    Ok(s)
}

pub fn make_radial<F>(name: &str, h: F) -> Symbol
where
    F: Fn(f64) -> C64 + Send + Sync + 'static,
{
    Symbol::radial(name, h)
}

/// `e^{i |xi|^alpha} chi_{>= cutoff}(xi) |xi|^{-beta}`.
pub fn make_slow_decay(alpha: f64, beta: f64, cutoff: f64) -> Result<Symbol> {
    check(alpha > 0.0 && alpha < 1.0, || format!("alpha {alpha} not in (0,1)"))?;
    check(beta > 0.0, || format!("beta {beta} must be positive"))?;
    check(cutoff > 0.0, || format!("cutoff {cutoff} must be positive"))?;
    let mut s = Symbol::radial("slow_decay", move |r| {
        let amp = cutoff_above(r, cutoff) * r.powf(-beta);
        C64::from_polar(amp, r.powf(alpha))
    })
    .with_params(&[("alpha", alpha), ("beta", beta), ("cutoff", cutoff)]);
    s.meta.inner_radius = Some(cutoff);
    s.meta.decay = Some(beta);
    Ok(s)
}

/// `(e^{i t |xi|^alpha} - 1) / t^beta`.
pub fn make_halfwave_difference(alpha: f64, beta: f64, t: f64) -> Result<Symbol> {
    check(alpha > 0.0 && alpha <= 1.0, || format!("alpha {alpha} not in (0,1]"))?;
    check(beta > 0.5 && beta <= 1.0, || format!("beta {beta} not in (1/2,1]"))?;
    check(t > 0.0 && t.is_finite(), || format!("t {t} must be positive"))?;
    let scale = t.powf(-beta);
    let mut s = Symbol::radial("halfwave_difference", move |r| {
        let tau = t * r.powf(alpha);
        // e^{i tau} - 1 = 2i sin(tau/2) e^{i tau/2}, exact near tau = 0
        C64::from_polar(2.0 * (0.5 * tau).sin() * scale, 0.5 * tau) * C64::new(0.0, 1.0)
    })
    .with_params(&[("alpha", alpha), ("beta", beta), ("t", t)]);
    s.meta.homogeneity = None;
    Ok(s)
}

/// Analytic envelope `sup_tau 2|sin(tau/2)| / tau^beta`, by a fine scan.
pub fn halfwave_envelope(beta: f64) -> f64 {
    (1..=200_000)
        .map(|k| {
            let tau = k as f64 * 1e-4;
            2.0 * (0.5 * tau).sin().abs() / tau.powf(beta)
        })
        .fold(0.0, f64::max)
}

/// Limited-decay model
/// `chi_{>=1/2}(xi) [(1 + |xi|)^{-a} + e^{2 pi i |xi|} (1 + |xi|)^{-b}]`.
///
/// The first term has Mikhlin-type derivatives and fixes the decay rate `a`.
/// In the second each derivative hits the phase, so its `L^2_s` shell norm
/// behaves like `2^{-j(b - s)}`. Together the shell norms follow
/// `2^{-j min(a, b - s)}`.
pub fn make_limited_decay(a: f64, b: f64) -> Result<Symbol> {
    check(a > 0.0, || format!("a = {a} must be positive"))?;
    check(b > 0.5, || format!("b = {b} must exceed 1/2"))?;
    let mut s = Symbol::radial("limited_decay", move |r| {
        let cut = cutoff_above(r, 0.5);
        let base = (1.0 + r).powf(-a);
        let osc = C64::from_polar((1.0 + r).powf(-b), 2.0 * PI * r);
        (real(base) + osc) * cut
    })
    .with_params(&[("a", a), ("b", b)]);
    s.meta.inner_radius = Some(0.5);
    s.meta.decay = Some(a.min(b));
    Ok(s)
}

/// Fourier transform of the normalised surface measure on the unit sphere.
pub fn make_surface_measure(d: usize) -> Result<Symbol> {
    let s = match d {
        3 => Symbol::radial("surface_measure", |r| {
            let x = 2.0 * PI * r;
            if x < 1e-4 {
                real(1.0 - x * x / 6.0 + x.powi(4) / 120.0)
            } else {
                real(x.sin() / x)
            }
        }),
        2 => Symbol::radial("surface_measure", |r| real(bessel_j0(2.0 * PI * r))),
        _ => return Err(invalid(format!("surface measure needs d in {{2,3}}, got {d}"))),
    };
    let mut s = s.with_params(&[("d", d as f64)]);
    s.meta.smooth_at_origin = true;
    s.meta.decay = Some((d as f64 - 1.0) / 2.0);
    Ok(s)
}

/// `(1 - m(xi)) / |xi|^alpha` for a symbol with `m(0) = 1`.
pub fn one_minus_over_power(m: &Symbol, alpha: f64) -> Result<Symbol> {
    check(alpha > 0.0 && alpha < 1.0, || format!("alpha {alpha} not in (0,1)"))?;
    check(m.is_radial(), || "one_minus_over_power needs a radial symbol".into())?;
    let inner = m.clone();
    Ok(Symbol::radial("one_minus_over_power", move |r| {
        if r == 0.0 {
            return C64::new(0.0, 0.0);
        }
        (real(1.0) - inner.eval_radius(r)) / r.powf(alpha)
    })
    .with_params(&[("alpha", alpha)]))
}

/// `(m(0) phi0, m phi0 - m(0) phi0)`.
pub fn split_at_origin(m: &Symbol, phi0: &Symbol, dim: usize) -> Result<(Symbol, Symbol)> {
    let m0 = m.value_at_origin(dim)?;
    let p0 = phi0.value_at_origin(dim)?;
    if (p0 - 1.0).norm() > 1e-12 || phi0.meta.outer_radius.is_none() {
        return Err(Error::Precondition(
            "cutoff must equal 1 near the origin and have compact support".into(),
        ));
    }
    let zero_sym = zero();
    let first = zero_sym.combine(C64::new(0.0, 0.0), phi0, m0);
    let prod = m.product(phi0);
    let second = prod.combine(C64::new(1.0, 0.0), phi0, -m0);
    let mut first = first;
    first.name = "split_low".into();
    first.meta.outer_radius = phi0.meta.outer_radius;
    let mut second = second;
    second.name = "split_high".into();
    second.meta.outer_radius = phi0.meta.outer_radius;
    Ok((first, second))
}

/// Build a zoo symbol from its family name and parameters.
pub fn from_family(family: &str, p: &std::collections::BTreeMap<String, f64>) -> Result<Symbol> {
    let get = |k: &str, default: Option<f64>| -> Result<f64> {
        p.get(k)
            .copied()
            .or(default)
            .ok_or_else(|| invalid(format!("family {family} needs parameter {k}")))
    };
    match family {
        "zero" => Ok(zero()),
        "constant" => Ok(constant(get("c", Some(1.0))?)),
        "bump" => Ok(bump_symbol()),
        "window" => Ok(window_symbol()),
        "ring" => Ok(ring(get("c", Some(1.0))?)),
        "power" => power(get("kappa", None)?),
        "slow_decay" => make_slow_decay(get("alpha", None)?, get("beta", None)?, get("cutoff", Some(1.0))?),
        "halfwave_difference" => {
            make_halfwave_difference(get("alpha", None)?, get("beta", None)?, get("t", Some(1.0))?)
        }
        "limited_decay" => {
            let a = get("a", None)?;
            make_limited_decay(a, get("b", Some(a + 1.0))?)
        }
        "surface_measure" => make_surface_measure(get("d", Some(3.0))? as usize),
        "oscillating_ring" => {
            let k = get("k", Some(1.0))?;
            Ok(oscillating_ring(k))
        }
        other => Err(invalid(format!("unknown symbol family {other:?}"))),
    }
}

pub const FAMILIES: &[&str] = &[
    "zero",
    "constant",
    "bump",
    "window",
    "ring",
    "power",
    "slow_decay",
    "halfwave_difference",
    "limited_decay",
    "surface_measure",
    "oscillating_ring",
];

/// `e^{i k |xi|} ring(1)`: an oscillatory annulus symbol.
pub fn oscillating_ring(k: f64) -> Symbol {
    let r1 = ring(1.0);
    let mut s = Symbol::radial("oscillating_ring", move |r| {
        r1.eval_radius(r) * C64::from_polar(1.0, k * r)
    })
    .with_params(&[("k", k)]);
    s.meta.inner_radius = Some(0.25);
    s.meta.outer_radius = Some(4.0);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn slow_decay_examples() {
        let m = make_slow_decay(0.5, 1.0, 1.0).unwrap();
        assert!(close(m.eval(&[4.0]), C64::from_polar(0.25, 2.0), 1e-15));
        assert_eq!(m.eval(&[0.5]), C64::new(0.0, 0.0));
        assert!(make_slow_decay(1.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn halfwave_examples() {
        let m = make_halfwave_difference(1.0, 0.75, 1.0).unwrap();
        assert!(m.eval(&[2.0 * PI]).norm() < 1e-14);
        assert!(m.eval(&[1e-12]).norm() < 1e-11);
        assert!(make_halfwave_difference(0.5, 0.75, 0.0).is_err());
        let env = halfwave_envelope(0.75);
        // |m(xi)| / |xi|^{alpha beta} is the envelope in tau = t |xi|^alpha
        let peak = (1..50_000)
            .map(|k| {
                let r = k as f64 * 2e-4;
                m.eval(&[r]).norm() / r.powf(0.75)
            })
            .fold(0.0, f64::max);
        assert!((peak / env - 1.0).abs() < 0.01, "{peak} {env}");
    }

    #[test]
    fn surface_measure_examples() {
        let m3 = make_surface_measure(3).unwrap();
        assert!((m3.eval(&[1e-9, 0.0, 0.0]).re - 1.0).abs() < 1e-12);
        assert!(m3.eval(&[0.5, 0.0, 0.0]).norm() < 1e-15);
        let m2 = make_surface_measure(2).unwrap();
        let r0 = 2.404_825_557_695_773 / (2.0 * PI);
        assert!(m2.eval(&[r0, 0.0]).norm() < 1e-8);
        assert!(make_surface_measure(4).is_err());
    }

    #[test]
    fn radial_profile_matches_slow_decay() {
        let h = make_radial("h", |r| C64::from_polar(cutoff_above(r, 1.0) / r, r));
        let m = make_slow_decay(0.999_999_999_999, 1.0, 1.0).unwrap();
        for &r in &[1.5, 3.0, 17.0] {
            assert!(close(h.eval(&[r]), m.eval(&[r]), 1e-9));
        }
    }

    #[test]
    fn split_examples() {
        let phi0 = bump_symbol();
        let (m0, m1) = split_at_origin(&constant(1.0), &phi0, 1).unwrap();
        for &r in &[0.0, 0.3, 1.4, 2.5] {
            assert!(close(m0.eval(&[r]), phi0.eval(&[r]), 1e-15));
            assert!(m1.eval(&[r]).norm() < 1e-15);
        }
        let w = window_symbol();
        let (m0, m1) = split_at_origin(&w, &phi0, 1).unwrap();
        assert_eq!(m0.eval(&[0.1]), C64::new(0.0, 0.0));
        assert!(close(m1.eval(&[1.2]), w.eval(&[1.2]) * phi0.eval(&[1.2]), 1e-15));

        let cosm = make_radial("cos", |r| real(r.cos()));
        let (m0, m1) = split_at_origin(&cosm, &phi0, 1).unwrap();
        assert!(close(m0.eval(&[0.5]), real(1.0), 1e-12));
        let q1 = m1.eval(&[1e-2]).norm() / 1e-4;
        let q2 = m1.eval(&[5e-3]).norm() / 2.5e-5;
        assert!((q1 - 0.5).abs() < 1e-4 && (q2 - 0.5).abs() < 1e-4);
    }

    #[test]
    fn split_rejects_singular_symbol() {
        let sing = make_radial("sing", |r| real(1.0 / r));
        assert!(split_at_origin(&sing, &bump_symbol(), 1).is_err());
    }

    #[test]
    fn radial_flag_is_verified() {
        let meta = SymbolMeta {
            radial: true,
            ..Default::default()
        };
        assert!(Symbol::general("x1", meta.clone(), |xi| real(xi[0])).is_err());
        assert!(Symbol::general("r", meta, |xi| real(norm(xi).sin())).is_ok());
    }

    #[test]
    fn dilation_and_difference() {
        let w = window_symbol();
        let w2 = w.dilate(2.0).unwrap();
        assert!(close(w2.eval(&[0.5]), w.eval(&[1.0]), 1e-15));
        let d = power(1.0).unwrap().difference(0.5).unwrap();
        assert!(close(d.eval(&[3.0]), real(1.5), 1e-15));
    }

    #[test]
    fn limited_decay_cutoff() {
        let m = make_limited_decay(1.0, 2.0).unwrap();
        assert_eq!(m.eval(&[0.5]), C64::new(0.0, 0.0));
        assert!(m.eval(&[3.0]).norm() > 0.0);
    }
}
