//! Seeded test functions.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::ALIAS_FRACTION;
use crate::spectral::{inverse_transform, lebesgue_norm, Domain, Field, Grid};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusKind {
    /// Real fields with random spectrum on the band, unit `L^2` norm.
    Random,
    /// Gaussian wave packets centred in the band, unit `L^2` norm.
    Packet,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub kind: CorpusKind,
    pub seed: u64,
    pub count: usize,
    /// Radial frequency band `[lo, hi]`, absolute units.
    pub band: [f64; 2],
}

impl CorpusSpec {
    /// The band `[1/8, 1/2]` of the given Nyquist frequency.
    pub fn for_nyquist(nyquist: f64) -> CorpusSpec {
        CorpusSpec {
            kind: CorpusKind::Random,
            seed: 20_240_601,
            count: 10,
            band: [nyquist / 8.0, nyquist / 2.0],
        }
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        let [lo, hi] = self.band;
        if !(lo >= 0.0 && hi > lo) {
            return Err(Error::Config(format!("corpus band [{lo}, {hi}] is empty")));
        }
        if hi > ALIAS_FRACTION * grid.nyquist() {
            return Err(Error::Config(format!(
                "corpus band edge {hi} beyond {ALIAS_FRACTION} Nyquist {}",
                grid.nyquist()
            )));
        }
        if self.count == 0 {
            return Err(Error::Config("corpus is empty".into()));
        }
        Ok(())
    }

    pub fn build(&self, grid: &Grid) -> Result<Vec<Field>> {
        self.validate(grid)?;
        (0..self.count)
            .map(|i| match self.kind {
                CorpusKind::Random => random_band_limited(grid, self.band, self.seed, i as u64),
                CorpusKind::Packet => {
                    let [lo, hi] = self.band;
                    // centres spread across the band, spectral width a tenth of it
                    let frac = (i as f64 + 0.5) / self.count as f64;
                    wave_packet(grid, lo + frac * (hi - lo), 0.1 * (hi - lo))
                }
            })
            .collect()
    }
}

fn normalise(f: Field) -> Result<Field> {
    let n = lebesgue_norm(&f, 2.0)?;
    let mut f = f;
    if n > 0.0 {
        f.scale(C64::new(1.0 / n, 0.0));
    }
    Ok(f)
}

/// Real field whose Fourier coefficients are uniform random on the band.
///
/// Coefficients are drawn per signed lattice frequency in a fixed order, so
/// refining the grid on the same box reproduces the same function.
pub fn random_band_limited(grid: &Grid, band: [f64; 2], seed: u64, index: u64) -> Result<Field> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let d = grid.dim();
    let n = grid.samples_per_axis() as i64;
    let dxi = grid.freq_spacing();
    let reach = (band[1] / dxi).floor() as i64;
    if reach >= n / 2 {
        return Err(Error::Config("corpus band reaches the Nyquist frequency".into()));
    }
    let mut spec = vec![C64::new(0.0, 0.0); grid.len()];
    let flat = |k: &[i64; 3]| -> usize {
        k[..d]
            .iter()
            .fold(0usize, |acc, &c| acc * n as usize + (c + n / 2) as usize)
    };
    let span = |a: usize| if a < d { -reach..=reach } else { 0..=0 };
    for a in span(0) {
        for b in span(1) {
            for c in span(2) {
                let k = [a, b, c];
                let z = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                let first = k.iter().find(|v| **v != 0);
                let r = dxi * ((a * a + b * b + c * c) as f64).sqrt();
                if r < band[0] || r > band[1] {
                    continue;
                }
                match first {
                    Some(v) if *v > 0 => {
                        spec[flat(&k)] = z;
                        spec[flat(&[-a, -b, -c])] = z.conj();
                    }
                    None => spec[flat(&k)] = C64::new(z.re, 0.0),
                    _ => {}
                }
            }
        }
    }
    let f = inverse_transform(&Field::new(*grid, Domain::Frequency, spec)?)?;
    // the field is real up to roundoff; drop the residue
    let vals = f.values().iter().map(|v| C64::new(v.re, 0.0)).collect();
    normalise(Field::new(*grid, Domain::Physical, vals)?)
}

/// `exp(-|x|^2 / (2 s^2)) cos(2 pi centre x_1)` with `s = 1 / (2 pi width)`,
/// so the spectrum is a Gaussian of standard deviation `width` about
/// `+-centre`.
pub fn wave_packet(grid: &Grid, centre: f64, width: f64) -> Result<Field> {
    if !(width > 0.0 && centre >= 0.0) {
        return Err(Error::Config(format!("bad packet centre {centre} / width {width}")));
    }
    let s = 1.0 / (2.0 * PI * width);
    let f = Field::from_fn(*grid, Domain::Physical, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        C64::new((-0.5 * r2 / (s * s)).exp() * (2.0 * PI * centre * x[0]).cos(), 0.0)
    });
    normalise(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::forward_transform;

    #[test]
    fn corpus_is_band_limited_real_and_normalised() {
        let g = Grid::with_nyquist(1, 1024, 1.0).unwrap();
        let spec = CorpusSpec::for_nyquist(1.0);
        let fs = spec.build(&g).unwrap();
        assert_eq!(fs.len(), 10);
        for f in &fs {
            assert!((lebesgue_norm(f, 2.0).unwrap() - 1.0).abs() < 1e-12);
            assert!(f.values().iter().all(|v| v.im == 0.0));
            let hat = forward_transform(f).unwrap();
            for (k, v) in hat.values().iter().enumerate() {
                let r = g.frequency(k).abs();
                if !(0.125 - 1e-12..=0.5 + 1e-12).contains(&r) {
                    assert!(v.norm() < 1e-12);
                }
            }
        }
        assert_ne!(fs[0], fs[1]);
    }

    #[test]
    fn refinement_keeps_the_function() {
        let g = Grid::with_nyquist(1, 512, 1.0).unwrap();
        let a = random_band_limited(&g, [0.125, 0.5], 7, 3).unwrap();
        let b = random_band_limited(&g.refined(), [0.125, 0.5], 7, 3).unwrap();
        for (i, v) in a.values().iter().enumerate() {
            assert!((v - b.values()[2 * i]).norm() < 1e-12);
        }
    }

    #[test]
    fn packets_and_bad_bands() {
        let g = Grid::with_nyquist(1, 4096, 1.0).unwrap();
        let p = wave_packet(&g, 0.3, 0.04).unwrap();
        assert!((lebesgue_norm(&p, 2.0).unwrap() - 1.0).abs() < 1e-12);
        let mut spec = CorpusSpec::for_nyquist(1.0);
        spec.band = [0.1, 0.95];
        assert!(spec.build(&g).is_err());
    }
}
