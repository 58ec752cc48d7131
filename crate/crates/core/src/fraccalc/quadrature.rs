//! Gauss–Legendre and adaptive Gauss–Kronrod rules, plus a geometric-cell
//! integrator for integrands with an integrable singularity at the left end.

use std::ops::{Add, AddAssign, Mul, Sub};

use crate::error::{Error, Result};
use crate::C64;

/// Values a quadrature rule can accumulate.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + AddAssign + Mul<f64, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
    fn is_finite_value(self) -> bool;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Fixed Gauss–Legendre rule mapped to `[a, b]`.
pub struct FixedRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl FixedRule {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        FixedRule { nodes, weights }
    }

    pub fn integrate<T: Scalar, F: FnMut(f64) -> T>(&self, mut f: F, a: f64, b: f64) -> T {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(c + h * x) * (w * h);
        }
        acc
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod 7/15 panel: (Kronrod value, |Kronrod - Gauss|).
pub fn gk15<T: Scalar, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    let k = k * h;
    let g = g * h;
    (k, (k - g).magnitude())
}

/// Tolerances for [`adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    /// Panel budget; exhausting it with the error estimate still above ten
    /// times the target is reported as non-convergence.
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-14,
            rel: 1e-11,
            max_panels: 4000,
        }
    }
}

struct Panel<T> {
    lo: f64,
    hi: f64,
    val: T,
    err: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.lo == other.lo
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err).then(other.lo.total_cmp(&self.lo))
    }
}

/// Globally adaptive Gauss–Kronrod 7/15 quadrature: the panel with the
/// largest error estimate is bisected until the summed estimate meets
/// `max(abs, rel |I|)`.
///
/// Fails with [`Error::Accuracy`] if the panel budget runs out with the
/// estimate still above ten times the target, or if the integrand produces
/// a non-finite value.
pub fn adaptive<T: Scalar, F: FnMut(f64) -> T>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    let (whole, err) = gk15(&mut f, a, b);
    if !whole.is_finite_value() {
        return Err(Error::Accuracy {
            coarse: f64::NAN,
            fine: f64::NAN,
            tolerance: tol.abs,
        });
    }
    let mut heap = std::collections::BinaryHeap::new();
    heap.push(Panel {
        lo: a,
        hi: b,
        val: whole,
        err,
    });
    let mut total = whole;
    let mut err_sum = err;
    let mut panels = 1;
    loop {
        let target = tol.abs.max(1e-290).max(tol.rel * total.magnitude());
        if err_sum <= target {
            break;
        }
        if panels >= tol.max_panels {
            if err_sum > 10.0 * target {
                return Err(Error::Accuracy {
                    coarse: (total.magnitude() - err_sum).max(0.0),
                    fine: total.magnitude(),
                    tolerance: target,
                });
            }
            break;
        }
        let worst = heap.pop().expect("heap holds every panel");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // cannot split further; freeze this panel
            err_sum -= worst.err;
            heap.push(Panel { err: 0.0, ..worst });
            continue;
        }
        let (left, el) = gk15(&mut f, worst.lo, mid);
        let (right, er) = gk15(&mut f, mid, worst.hi);
        if !(left + right).is_finite_value() {
            return Err(Error::Accuracy {
                coarse: worst.val.magnitude(),
                fine: f64::NAN,
                tolerance: target,
            });
        }
        total = total - worst.val + left + right;
        err_sum = (err_sum - worst.err + el + er).max(0.0);
        heap.push(Panel {
            lo: worst.lo,
            hi: mid,
            val: left,
            err: el,
        });
        heap.push(Panel {
            lo: mid,
            hi: worst.hi,
            val: right,
            err: er,
        });
        panels += 1;
    }
    // resum left to right so the result does not depend on heap history
    let mut parts = heap.into_vec();
    parts.sort_by(|x, y| x.lo.total_cmp(&y.lo));
    let mut sum = T::zero();
    for p in parts {
        sum += p.val;
    }
    Ok(sum)
}

/// Geometric cells toward the left endpoint `0` of `[0, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedMesh {
    nodes: Vec<f64>,
}

impl GradedMesh {
    /// Nodes `b q^k`, `k = levels, ..., 0`, ascending; `0 < q < 1`.
    pub fn geometric(b: f64, levels: usize, q: f64) -> Result<Self> {
        if b.is_nan() || b <= 0.0 || !(q > 0.0 && q < 1.0) || levels == 0 {
            return Err(crate::error::invalid("graded mesh needs b > 0, 0 < q < 1, levels > 0"));
        }
        let nodes = (0..=levels).rev().map(|k| b * q.powi(k as i32)).collect();
        Ok(GradedMesh { nodes })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Cells ordered from the outermost (largest) inward.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.windows(2).rev().map(|w| (w[0], w[1]))
    }
}

/// `int_0^b g(v) dv` for `g` with an integrable singularity `|g| <~ v^{-mu}`,
/// `mu < 1`, at `v = 0`.
///
/// Dyadic cells `[b 2^{-k-1}, b 2^{-k}]` are integrated adaptively. Once the
/// ratio of successive cell values has settled, the remainder is summed as a
/// geometric series; this stops the recursion before difference integrands
/// such as `F(t) - F(t - v)` lose their significant digits. Cells that keep
/// growing signal a non-integrable singularity and raise [`Error::Accuracy`].
/// When roundoff stops convergence first, the best extrapolation is
/// returned if its uncertainty is within [`ROUNDOFF_FLOOR`].
pub fn singular_at_zero<T: Scalar, F: FnMut(f64) -> T>(mut g: F, b: f64, tol: Tolerance) -> Result<T> {
    const MAX_CELLS: usize = 200;
    let mut total = T::zero();
    let mut cells: Vec<T> = Vec::new();
    let mut growth_run = 0;
    let mut small_run = 0;
    let mut hi = b;
    // best geometric extrapolation so far, with its uncertainty
    let mut best: Option<(T, f64)> = None;
    let floor = |best: &Option<(T, f64)>, scale: f64| match best {
        Some((v, u)) if *u <= ROUNDOFF_FLOOR * scale => Some(*v),
        _ => None,
    };
    for _ in 0..MAX_CELLS {
        let lo = 0.5 * hi;
        // cells only need accuracy relative to the running sum; asking for
        // more on tiny cells chases cancellation noise in the integrand
        let cell_tol = Tolerance {
            abs: tol.abs.max(1e-2 * tol.rel * total.magnitude()),
            ..tol
        };
        let cell = match adaptive(&mut g, lo, hi, cell_tol) {
            Ok(c) => c,
            Err(e) => return floor(&best, total.magnitude()).ok_or(e),
        };
        total += cell;
        cells.push(cell);
        let scale = total.magnitude();
        let budget = tol.abs.max(tol.rel * scale);
        let c = cell.magnitude();
        small_run = if c <= 1e-2 * budget { small_run + 1 } else { 0 };
        if small_run >= 3 {
            return Ok(total);
        }
        let n = cells.len();
        if n >= 3 {
            let c1 = cells[n - 2].magnitude();
            let c2 = cells[n - 3].magnitude();
            if c1 > 0.0 && c2 > 0.0 {
                let r = c / c1;
                let r_prev = c1 / c2;
                growth_run = if r > 1.02 && r_prev > 1.02 { growth_run + 1 } else { 0 };
                if growth_run >= 4 {
                    return floor(&best, scale).ok_or(Error::Accuracy {
                        coarse: c1,
                        fine: c,
                        tolerance: budget,
                    });
                }
                if r < 0.95 {
                    let remainder = c * r / (1.0 - r);
                    let uncertainty = c * (r - r_prev).abs() / ((1.0 - r) * (1.0 - r));
                    let value = total + cell * (r / (1.0 - r));
                    if uncertainty <= budget && remainder <= 1e3 * scale.max(tol.abs) {
                        return Ok(value);
                    }
                    if best.as_ref().is_none_or(|b| uncertainty < b.1) {
                        best = Some((value, uncertainty));
                    }
                }
            }
        }
        hi = lo;
    }
    let last = cells.last().map(|c| c.magnitude()).unwrap_or(0.0);
    if last > 10.0 * tol.abs.max(tol.rel * total.magnitude()) {
        return floor(&best, total.magnitude()).ok_or(Error::Accuracy {
            coarse: total.magnitude() - last,
            fine: total.magnitude(),
            tolerance: tol.rel * total.magnitude(),
        });
    }
    Ok(total)
}

/// Relative accuracy accepted from the extrapolated tail when cancellation
/// in the integrand stops the requested tolerance from being reached.
pub const ROUNDOFF_FLOOR: f64 = 1e-6;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1, 2, 5, 12] {
            let rule = FixedRule::new(n);
            let deg = 2 * n - 1;
            let v: f64 = rule.integrate(|x: f64| x.powi(deg as i32) + 1.0, 0.0, 2.0);
            let want = 2f64.powi(deg as i32 + 1) / (deg as f64 + 1.0) + 2.0;
            assert!((v - want).abs() < 1e-12 * want, "n = {n}");
        }
    }

    #[test]
    fn adaptive_handles_oscillation_and_complex_values() {
        let v = adaptive(|x: f64| (50.0 * x).sin(), 0.0, 3.0, Tolerance::default()).unwrap();
        let want = (1.0 - (150.0f64).cos()) / 50.0;
        assert!((v - want).abs() < 1e-12);
        let z = adaptive(|x: f64| C64::from_polar(1.0, x), 0.0, 1.0, Tolerance::default()).unwrap();
        let want = C64::new(1f64.sin(), 1.0 - 1f64.cos());
        assert!((z - want).norm() < 1e-13);
    }

    #[test]
    fn adaptive_reports_non_finite_integrand() {
        let r = adaptive(|_x: f64| f64::NAN, 0.0, 1.0, Tolerance::default());
        assert!(matches!(r, Err(Error::Accuracy { .. })));
    }

    #[test]
    fn singular_endpoint() {
        for mu in [0.0, 0.3, 0.55, 0.8] {
            let v = singular_at_zero(|x: f64| x.powf(-mu), 2.0, Tolerance::default()).unwrap();
            let want = 2f64.powf(1.0 - mu) / (1.0 - mu);
            assert!((v / want - 1.0).abs() < 1e-9, "mu = {mu}: {v} vs {want}");
        }
    }

    #[test]
    fn graded_mesh_is_increasing() {
        let m = GradedMesh::geometric(1.0, 10, 0.5).unwrap();
        assert!(m.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(m.nodes()[0] > 0.0);
        assert_eq!(m.cells().next(), Some((0.5, 1.0)));
        assert!(GradedMesh::geometric(1.0, 10, 1.5).is_err());
    }
}
