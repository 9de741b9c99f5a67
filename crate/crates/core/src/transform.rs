//! Oversampled DFT/IDFT pair and spectrum placement.
//!
//! The inverse transform follows the 1/sqrt(N) convention, so at L = 1 the
//! pair is unitary. Oversampling zero-pads the middle of the spectrum: the N
//! subcarriers occupy grid bins [0, N/2) and [LN - N/2, LN), the standard
//! trigonometric-interpolation placement. Decimating the L-oversampled signal
//! by L recovers the Nyquist-rate signal exactly.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::ofdm::{FrequencySymbol, TimeSignal};
use crate::scalar::Scalar;

/// Grid bin occupied by subcarrier `tone` on an oversampled grid of `grid_len`
/// samples (`grid_len = L * n_tones`).
pub fn inband_bin(tone: usize, n_tones: usize, grid_len: usize) -> usize {
    debug_assert!(tone < n_tones && grid_len >= n_tones);
    if tone < n_tones / 2 {
        tone
    } else {
        grid_len - n_tones + tone
    }
}

/// Zero-pad an N-point spectrum onto an LN-point grid (middle insertion).
pub fn place_spectrum<T: Scalar>(values: &[Complex<T>], grid_len: usize) -> Vec<Complex<T>> {
    let n = values.len();
    let mut grid = vec![Complex::new(T::zero(), T::zero()); grid_len];
    for (tone, &v) in values.iter().enumerate() {
        grid[inband_bin(tone, n, grid_len)] = v;
    }
    grid
}

/// Pull the N in-band bins back out of an LN-point spectrum.
pub fn extract_inband<T: Scalar>(spectrum: &[Complex<T>], n_tones: usize) -> Vec<Complex<T>> {
    (0..n_tones)
        .map(|tone| spectrum[inband_bin(tone, n_tones, spectrum.len())])
        .collect()
}

/// Cached forward/inverse FFT pair for one grid length.
///
/// The raw transforms are unnormalized; callers apply the toolkit's scaling.
/// Cloning shares the underlying plans.
#[derive(Clone)]
pub struct TransformPlan<T: Scalar> {
    len: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Scalar> TransformPlan<T> {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        TransformPlan {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// In-place unnormalized forward DFT; `scratch` is grown as needed.
    pub fn forward_in_place(&self, buf: &mut [Complex<T>], scratch: &mut Vec<Complex<T>>) {
        let need = self.forward.get_inplace_scratch_len();
        scratch.resize(need, Complex::new(T::zero(), T::zero()));
        self.forward.process_with_scratch(buf, scratch);
    }

    /// In-place unnormalized inverse DFT; `scratch` is grown as needed.
    pub fn inverse_in_place(&self, buf: &mut [Complex<T>], scratch: &mut Vec<Complex<T>>) {
        let need = self.inverse.get_inplace_scratch_len();
        scratch.resize(need, Complex::new(T::zero(), T::zero()));
        self.inverse.process_with_scratch(buf, scratch);
    }
}

fn validate_tones(n_tones: usize) -> Result<()> {
    if n_tones < 2 || !n_tones.is_power_of_two() {
        return Err(Error::invalid(format!(
            "n_tones must be a power of two >= 2, got {n_tones}"
        )));
    }
    Ok(())
}

/// Inverse transform of a subcarrier block onto an L-oversampled time grid.
///
/// Scaling is 1/sqrt(N) regardless of L, so the sample mean of |x_n|^2 equals
/// the Nyquist-rate average power estimate; that mean is stored as the
/// signal's reference average power.
pub fn idft_oversampled<T: Scalar>(
    symbol: &FrequencySymbol<T>,
    oversample: usize,
) -> Result<TimeSignal<T>> {
    validate_tones(symbol.n_tones())?;
    if oversample < 1 {
        return Err(Error::invalid("oversampling factor must be >= 1"));
    }
    let plan = TransformPlan::new(oversample * symbol.n_tones());
    Ok(idft_oversampled_with(
        symbol,
        oversample,
        &plan,
        &mut Vec::new(),
    ))
}

/// Plan-reusing variant of [`idft_oversampled`] for hot loops.
pub fn idft_oversampled_with<T: Scalar>(
    symbol: &FrequencySymbol<T>,
    oversample: usize,
    plan: &TransformPlan<T>,
    scratch: &mut Vec<Complex<T>>,
) -> TimeSignal<T> {
    let n = symbol.n_tones();
    let grid_len = oversample * n;
    debug_assert_eq!(plan.len(), grid_len);
    let mut buf = place_spectrum(symbol.values(), grid_len);
    plan.inverse_in_place(&mut buf, scratch);
    let scale = T::one() / T::of_usize(n).sqrt();
    for v in buf.iter_mut() {
        *v = v.scale(scale);
    }
    TimeSignal::from_samples(buf, oversample)
}

/// Forward transform inverse to [`idft_oversampled`] at the same length.
///
/// Returns the full LN-bin spectrum (in-band bins plus the zero padding).
pub fn dft<T: Scalar>(signal: &TimeSignal<T>) -> Vec<Complex<T>> {
    let plan = TransformPlan::new(signal.len());
    dft_with(signal.samples(), signal.n_tones(), &plan, &mut Vec::new())
}

/// Plan-reusing variant of [`dft`]; `n_tones` fixes the 1/sqrt(N) convention.
pub fn dft_with<T: Scalar>(
    samples: &[Complex<T>],
    n_tones: usize,
    plan: &TransformPlan<T>,
    scratch: &mut Vec<Complex<T>>,
) -> Vec<Complex<T>> {
    debug_assert_eq!(plan.len(), samples.len());
    let mut buf = samples.to_vec();
    plan.forward_in_place(&mut buf, scratch);
    let scale = T::of_usize(n_tones).sqrt() / T::of_usize(samples.len());
    for v in buf.iter_mut() {
        *v = v.scale(scale);
    }
    buf
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn symbol(values: Vec<Complex64>) -> FrequencySymbol<f64> {
        FrequencySymbol::new(values).unwrap()
    }

    #[test]
    fn single_dc_tone_gives_constant_signal() {
        let n = 8;
        let mut values = vec![Complex64::new(0.0, 0.0); n];
        values[0] = Complex64::new(1.0, 0.0);
        let x = idft_oversampled(&symbol(values), 1).unwrap();
        let expect = 1.0 / (n as f64).sqrt();
        for s in x.samples() {
            assert!((s.re - expect).abs() < 1e-12 && s.im.abs() < 1e-12);
        }
    }

    #[test]
    fn all_ones_block_gives_impulse() {
        let n = 8;
        let values = vec![Complex64::new(1.0, 0.0); n];
        let x = idft_oversampled(&symbol(values), 1).unwrap();
        assert!((x.samples()[0].re - (n as f64).sqrt()).abs() < 1e-10);
        for s in &x.samples()[1..] {
            assert!(s.norm() < 1e-10);
        }
    }

    #[test]
    fn dft_idft_round_trip() {
        let n = 16;
        let values: Vec<Complex64> = (0..n)
            .map(|k| Complex64::new((k as f64 * 0.7).sin(), (k as f64 * 1.3).cos()))
            .collect();
        for l in [1usize, 2, 4] {
            let x = idft_oversampled(&symbol(values.clone()), l).unwrap();
            let spectrum = dft(&x);
            let back = extract_inband(&spectrum, n);
            for (a, b) in back.iter().zip(&values) {
                assert!((a - b).norm() < 1e-10, "L={l}");
            }
            // padding bins stay empty
            let inband: std::collections::HashSet<usize> =
                (0..n).map(|t| inband_bin(t, n, l * n)).collect();
            for (k, v) in spectrum.iter().enumerate() {
                if !inband.contains(&k) {
                    assert!(v.norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn time_shift_rotates_phase_only() {
        let n = 16;
        let values: Vec<Complex64> = (0..n)
            .map(|k| Complex64::new((k as f64).cos(), (k as f64 * 0.3).sin()))
            .collect();
        let x = idft_oversampled(&symbol(values), 1).unwrap();
        let shift = 3usize;
        let shifted: Vec<Complex64> = (0..n).map(|i| x.samples()[(i + n - shift) % n]).collect();
        let shifted = TimeSignal::from_samples(shifted, 1);
        let a = dft(&x);
        let b = dft(&shifted);
        for (k, (va, vb)) in a.iter().zip(&b).enumerate() {
            assert!((va.norm() - vb.norm()).abs() < 1e-10);
            let phase = -2.0 * std::f64::consts::PI * (k * shift) as f64 / n as f64;
            let expect = va * Complex64::from_polar(1.0, phase);
            assert!((expect - vb).norm() < 1e-10);
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        let values = vec![Complex64::new(1.0, 0.0); 12];
        assert!(FrequencySymbol::new(values).is_err());
    }
}
