//! Smooth bump, Littlewood–Paley windows and the retract maps between a
//! symbol and its sequence of shell pieces.
//!
//! The bump is radial: `phi^(xi) = chi(|xi|)` with the transition profile
//! `chi(r) = g(2 - r) / (g(2 - r) + g(r - 1))`, `g(x) = exp(-1/x)` for
//! `x > 0`. It equals one on the unit ball and vanishes outside the ball of
//! radius two. The windows are `psi^_j(xi) = phi^(xi / 2^j) - phi^(xi / 2^(j-1))`.

use serde::{Deserialize, Serialize};

use crate::error::{contract, invalid, Error, Result};
use crate::spectral::{Domain, Field, Grid};
use crate::symbols::Symbol;
use crate::C64;

/// Name and version of the transition profile. Norm values depend on the
/// profile, so reports carry both.
pub const PROFILE_NAME: &str = "exp-mollifier";
pub const PROFILE_VERSION: u32 = 1;

fn g(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth transition: 1 for `r <= 1`, 0 for `r >= 2`.
pub fn transition(r: f64) -> f64 {
    if r <= 1.0 {
        return 1.0;
    }
    if r >= 2.0 {
        return 0.0;
    }
    let a = g(2.0 - r);
    let b = g(r - 1.0);
    a / (a + b)
}

/// `1 - transition(r)`, evaluated without cancellation.
pub fn transition_complement(r: f64) -> f64 {
    if r <= 1.0 {
        return 0.0;
    }
    if r >= 2.0 {
        return 1.0;
    }
    let a = g(2.0 - r);
    let b = g(r - 1.0);
    b / (a + b)
}

/// Radial profile of the bump `phi^`.
pub fn bump(r: f64) -> f64 {
    transition(r)
}

/// Radial profile of `psi^`, supported in `1/2 < r < 2`.
pub fn window(r: f64) -> f64 {
    // transition(r) = 1 for r <= 1 and transition(2r) = 0 for r >= 1
    if r <= 1.0 {
        transition_complement(2.0 * r)
    } else {
        transition(r)
    }
}

/// Smooth cutoff that vanishes for `r <= c` and equals one for `r >= 2c`.
pub fn cutoff_above(r: f64, c: f64) -> f64 {
    transition_complement(r / c)
}

fn radius(xi: &[f64]) -> f64 {
    xi.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowFamily {
    pub profile: String,
    pub profile_version: u32,
    pub shell_min: i32,
    pub shell_max: i32,
}

impl Default for WindowFamily {
    fn default() -> Self {
        WindowFamily {
            profile: PROFILE_NAME.to_string(),
            profile_version: PROFILE_VERSION,
            shell_min: -20,
            shell_max: 20,
        }
    }
}

impl WindowFamily {
    pub fn new(shell_min: i32, shell_max: i32) -> Result<Self> {
        if shell_min > shell_max {
            return Err(invalid(format!("empty shell range [{shell_min}, {shell_max}]")));
        }
        Ok(WindowFamily {
            shell_min,
            shell_max,
            ..Default::default()
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.profile != PROFILE_NAME || self.profile_version != PROFILE_VERSION {
            return Err(invalid(format!(
                "unknown window profile {} v{}",
                self.profile, self.profile_version
            )));
        }
        if self.shell_min > self.shell_max {
            return Err(invalid("empty shell range"));
        }
        Ok(())
    }

    pub fn shells(&self) -> impl Iterator<Item = i32> + Clone {
        self.shell_min..=self.shell_max
    }

    pub fn shell_count(&self) -> usize {
        (self.shell_max - self.shell_min + 1) as usize
    }

    /// `psi^_j(xi) = psi^(xi / 2^j)`.
    pub fn eval_window(&self, j: i32, xi: &[f64]) -> f64 {
        window(radius(xi) * 2f64.powi(-j))
    }

    /// `sum_{j=a}^{b} psi^_j(xi)`, summed term by term.
    pub fn partition_sum(&self, xi: &[f64], a: i32, b: i32) -> Result<f64> {
        if a > b {
            return Err(invalid(format!("partition range [{a}, {b}] is empty")));
        }
        let r = radius(xi);
        if r == 0.0 {
            return Ok(0.0);
        }
        // only shells with 2^(j-1) < r < 2^(j+1) can be nonzero
        let centre = r.log2().floor() as i32;
        let lo = a.max(centre - 1);
        let hi = b.min(centre + 2);
        Ok((lo..=hi).map(|j| window(r * 2f64.powi(-j))).sum())
    }

    /// Samples of `xi -> m(2^j xi) psi^(xi)` on the grid's frequency lattice.
    pub fn shell_localize(&self, m: &Symbol, j: i32, grid: &Grid) -> Result<Field> {
        check_shell_grid(grid)?;
        let scale = 2f64.powi(j);
        let d = grid.dim();
        if m.is_radial() {
            let values = crate::spectral::sample_radial(grid, window, |r| {
                let v = m.eval_radius(scale * r);
                if v.re.is_finite() && v.im.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Evaluation {
                        symbol: m.label(),
                        xi: vec![scale * r],
                    })
                }
            })?;
            return Field::new(*grid, Domain::Frequency, values);
        }
        let values = crate::par::try_map_range(grid.len(), |k| {
            let p = grid.freq_point(k);
            let xi = &p[..d];
            let w = window(radius(xi));
            if w == 0.0 {
                return Ok::<C64, Error>(C64::new(0.0, 0.0));
            }
            let mut y = [0.0; 3];
            for a in 0..d {
                y[a] = scale * xi[a];
            }
            Ok(m.try_eval(&y[..d])? * w)
        })?;
        Field::new(*grid, Domain::Frequency, values)
    }

    /// The sequence `{m(2^j .) psi^}` over the family's shell range.
    pub fn retract_s(&self, m: &Symbol, grid: &Grid) -> Result<Vec<Field>> {
        self.shells().map(|j| self.shell_localize(m, j, grid)).collect()
    }

    /// `R({f_j})(xi) = sum_j (psi^_{j-1} + psi^_j + psi^_{j+1})(xi) f_j(2^{-j} xi)`.
    ///
    /// Off-lattice values `f_j(2^{-j} xi)` come from a local tensor Lagrange
    /// interpolant of order [`INTERP_ORDER`]; samples outside the lattice are
    /// read as zero, matching the compact support of shell data.
    pub fn retract_r(&self, seq: &[Field], grid: &Grid) -> Result<Field> {
        if seq.len() != self.shell_count() {
            return Err(contract(format!(
                "sequence has {} entries, shell range needs {}",
                seq.len(),
                self.shell_count()
            )));
        }
        for f in seq {
            if f.grid() != grid || f.domain() != Domain::Frequency {
                return Err(contract("sequence entries must be frequency fields on the target grid"));
            }
        }
        let d = grid.dim();
        let values = crate::par::map_range(grid.len(), |k| {
            let p = grid.freq_point(k);
            let xi = &p[..d];
            let r = radius(xi);
            if r == 0.0 {
                return C64::new(0.0, 0.0);
            }
            let centre = r.log2().floor() as i32;
            let mut acc = C64::new(0.0, 0.0);
            for j in (centre - 1)..=(centre + 2) {
                if j < self.shell_min || j > self.shell_max {
                    continue;
                }
                let scale = 2f64.powi(-j);
                let ry = r * scale;
                if ry <= 0.5 || ry >= 2.0 {
                    continue;
                }
                let eta = window(ry * 2.0) + window(ry) + window(ry * 0.5);
                if eta == 0.0 {
                    continue;
                }
                let mut y = [0.0; 3];
                for a in 0..d {
                    y[a] = xi[a] * scale;
                }
                let fj = &seq[(j - self.shell_min) as usize];
                acc += interpolate_frequency(fj, &y[..d]) * eta;
            }
            acc
        });
        Field::new(*grid, Domain::Frequency, values)
    }
}

/// Grids used for shell data must resolve `1/2 < |xi| < 2`.
pub fn check_shell_grid(grid: &Grid) -> Result<()> {
    if grid.nyquist() < 2.0 {
        return Err(Error::Precondition(format!(
            "shell grid Nyquist {} < 2",
            grid.nyquist()
        )));
    }
    let across = 1.5 / grid.freq_spacing();
    if across < 64.0 {
        return Err(Error::Precondition(format!(
            "shell resolved by {across:.0} samples per axis, need >= 64"
        )));
    }
    Ok(())
}

pub const INTERP_ORDER: usize = 12;

/// Local Lagrange interpolation of a frequency field at an off-lattice point.
pub fn interpolate_frequency(f: &Field, y: &[f64]) -> C64 {
    let grid = f.grid();
    let n = grid.samples_per_axis() as isize;
    let d = grid.dim();
    let dxi = grid.freq_spacing();
    let half = (n / 2) as f64;

    let mut starts = [0isize; 3];
    let mut weights = [[0.0f64; INTERP_ORDER]; 3];
    let mut exact = [None::<isize>; 3];
    for a in 0..d {
        let u = y[a] / dxi + half;
        let nearest = u.round();
        if (u - nearest).abs() < 1e-12 {
            exact[a] = Some(nearest as isize);
            continue;
        }
        let s = u.floor() as isize - (INTERP_ORDER as isize / 2 - 1);
        starts[a] = s;
        lagrange_weights(u - s as f64, &mut weights[a]);
    }

    let sample = |idx: &[isize; 3]| -> C64 {
        let mut flat = 0usize;
        for &i in &idx[..d] {
            if i < 0 || i >= n {
                return C64::new(0.0, 0.0);
            }
            flat = flat * n as usize + i as usize;
        }
        f.values()[flat]
    };

    let axis_range = |a: usize| -> Vec<(isize, f64)> {
        match exact[a] {
            Some(i) => vec![(i, 1.0)],
            None => (0..INTERP_ORDER)
                .map(|q| (starts[a] + q as isize, weights[a][q]))
                .collect(),
        }
    };

    let r0 = axis_range(0);
    let r1 = if d > 1 { axis_range(1) } else { vec![(0, 1.0)] };
    let r2 = if d > 2 { axis_range(2) } else { vec![(0, 1.0)] };
    let mut acc = C64::new(0.0, 0.0);
    for &(i0, w0) in &r0 {
        for &(i1, w1) in &r1 {
            for &(i2, w2) in &r2 {
                acc += sample(&[i0, i1, i2]) * (w0 * w1 * w2);
            }
        }
    }
    acc
}

// Weights of the Lagrange basis on nodes 0..ORDER evaluated at `u`.
fn lagrange_weights(u: f64, out: &mut [f64; INTERP_ORDER]) {
    for (i, w) in out.iter_mut().enumerate() {
        let mut num = 1.0;
        let mut den = 1.0;
        for k in 0..INTERP_ORDER {
            if k != i {
                num *= u - k as f64;
                den *= i as f64 - k as f64;
            }
        }
        *w = num / den;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_values_at_landmarks() {
        let w = WindowFamily::default();
        assert_eq!(w.eval_window(0, &[0.5]), 0.0);
        assert_eq!(w.eval_window(0, &[1.0]), 1.0);
        assert_eq!(w.eval_window(3, &[8.0]), 1.0);
        assert_eq!(w.eval_window(0, &[2.0]), 0.0);
        assert_eq!(bump(0.3), 1.0);
        assert_eq!(bump(2.5), 0.0);
    }

    #[test]
    fn transition_midpoint_is_half() {
        assert!((transition(1.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn window_is_accurate_near_its_inner_edge() {
        for &r in &[0.51, 0.6, 0.9, 1.0, 1.2, 1.9] {
            let direct = transition(r) - transition(2.0 * r);
            assert!((window(r) - direct).abs() < 1e-15);
        }
        // relative accuracy where 1 - transition(2r) would cancel
        let r: f64 = 0.51;
        let x = 2.0 * r - 1.0;
        let want = (-1.0 / x).exp() / ((-1.0 / (1.0 - x)).exp() + (-1.0 / x).exp());
        assert!((window(r) / want - 1.0).abs() < 1e-13);
    }

    #[test]
    fn partition_examples() {
        let w = WindowFamily::default();
        let s = w.partition_sum(&[1.0], -10, 10).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        assert_eq!(w.partition_sum(&[4096.0], -10, 10).unwrap(), 0.0);
        let r = 2f64.powf(10.5);
        let s = w.partition_sum(&[r], -10, 10).unwrap();
        assert!((s - transition(2f64.sqrt())).abs() < 1e-15);
        assert!(s > 0.0 && s < 1.0);
        assert!(w.partition_sum(&[1.0], 3, 2).is_err());
    }

    #[test]
    fn telescoping_against_closed_form() {
        let w = WindowFamily::default();
        for &r in &[0.01, 0.7, 1.3, 5.0, 37.0, 900.0] {
            for (a, b) in [(-3, 2), (-8, 8), (0, 0)] {
                let sum = w.partition_sum(&[r], a, b).unwrap();
                let closed = bump(r * 2f64.powi(-b)) - bump(r * 2f64.powi(-(a - 1)));
                assert!((sum - closed).abs() < 1e-14, "r {r} [{a},{b}]");
            }
        }
    }

    #[test]
    fn bad_shell_grid_is_rejected() {
        let w = WindowFamily::default();
        let coarse = Grid::with_nyquist(1, 64, 2.0).unwrap();
        assert!(matches!(
            w.shell_localize(&crate::symbols::constant(1.0), 0, &coarse),
            Err(Error::Precondition(_))
        ));
        let low = Grid::with_nyquist(1, 4096, 1.0).unwrap();
        assert!(check_shell_grid(&low).is_err());
    }

    #[test]
    fn lagrange_reproduces_polynomials() {
        let mut w = [0.0; INTERP_ORDER];
        lagrange_weights(4.37, &mut w);
        let p = |x: f64| 1.0 - 2.0 * x + 0.1 * x.powi(5);
        let interp: f64 = (0..INTERP_ORDER).map(|i| w[i] * p(i as f64)).sum();
        assert!((interp - p(4.37)).abs() < 1e-9);
    }
}
