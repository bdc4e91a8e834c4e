use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{smooth_step, Grid, SampledFunction};
use crate::Complex64;

fn bump(t: f64, sharpness: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-sharpness / (1.0 - t * t)).exp()
    }
}

/// `Fη`: a smooth bump on `3/4 < ξ < 1`, zero for negative frequencies, so that
/// `|η|` is a smooth envelope.
pub fn eta_hat(xi: f64) -> f64 {
    bump((xi - 0.875) * 8.0, 4.0)
}

/// `Fω`: a smooth even bump on `|ξ| < 1`.
pub fn omega_hat(xi: f64) -> f64 {
    bump(xi, 1.0)
}

/// `η(2^N ·)` on `grid`.
pub fn eta_family(grid: &Grid, n: i32) -> SampledFunction {
    let s = (-(n as f64)).exp2();
    SampledFunction::from_spectrum(*grid, |xi| Complex64::new(s * eta_hat(s * xi), 0.0))
}

/// `ω(2^N ·)` on `grid`.
pub fn omega_family(grid: &Grid, n: i32) -> SampledFunction {
    let s = (-(n as f64)).exp2();
    SampledFunction::from_spectrum(*grid, |xi| Complex64::new(s * omega_hat(s * xi), 0.0))
}

/// Random spectrum on `|ξ| < band` with a smooth taper over the last fifth of the band.
pub fn random_band_limited(grid: &Grid, band: f64, seed: u64) -> SampledFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<Complex64> = (0..grid.size())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let freqs = grid.frequencies();
    let mut spectrum = vec![Complex64::new(0.0, 0.0); grid.size()];
    for (k, xi) in freqs.iter().enumerate() {
        let r = xi.abs() / band;
        spectrum[k] = coeffs[k] * (1.0 - smooth_step((r - 0.8) / 0.2));
    }
    let mut samples = spectrum;
    super::fft_inverse(&mut samples);
    SampledFunction::new(*grid, samples).expect("grid-sized")
}
