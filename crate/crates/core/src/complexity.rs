//! Analytic operation-count model for the adaptive clipping engine:
//! expected clipped-sample counts, pruned split-radix DFT multiplication
//! counts, and the per-run total.
//!
//! Expected counts are kept real-valued throughout; rounding happens only at
//! display time. The Rayleigh-envelope convention is 2*sigma^2 = E[|x_n|^2]
//! (sigma is the per-dimension deviation of the complex Gaussian), so
//! A/sigma = sqrt(2 * gamma_linear).

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Parameters of the cost model.
#[derive(Debug, Clone, Copy)]
pub struct CostModelParams<T: Scalar> {
    pub n_tones: usize,
    pub oversample: usize,
    pub prt_size: usize,
    pub gamma_db: T,
    pub iterations: usize,
}

impl<T: Scalar> CostModelParams<T> {
    pub fn validate(&self) -> Result<()> {
        if !self.n_tones.is_power_of_two() || !self.oversample.is_power_of_two() {
            return Err(Error::invalid(
                "tone count and oversampling factor must be powers of two",
            ));
        }
        if self.prt_size == 0 || self.prt_size >= self.n_tones {
            return Err(Error::invalid("require 0 < M < N"));
        }
        Ok(())
    }
}

/// Per-run operation counts.
#[derive(Debug, Clone, Copy)]
pub struct CostBreakdown<T: Scalar> {
    pub mean_clipped: T,
    pub mean_peaks: T,
    pub dft_mults: T,
    pub idft_mults: T,
    pub total_real_mults: T,
    pub total_real_divs: T,
}

fn gamma_linear<T: Scalar>(gamma_db: T) -> T {
    T::of_f64(10.0).powf(gamma_db / T::of_f64(10.0))
}

/// Expected clipped-sample count per iteration: LN * exp(-gamma_linear).
pub fn mean_clipped_count<T: Scalar>(n_tones: usize, oversample: usize, gamma_db: T) -> T {
    T::of_usize(oversample * n_tones) * (-gamma_linear(gamma_db)).exp()
}

/// Expected clipped-peak count per iteration, from
/// N_S1 = L * sqrt(6/pi) * (sigma/A) * N_Sp with A/sigma = sqrt(2 gamma).
pub fn mean_peak_count<T: Scalar>(n_tones: usize, oversample: usize, gamma_db: T) -> T {
    let a_over_sigma = (T::of_f64(2.0) * gamma_linear(gamma_db)).sqrt();
    let ratio = T::of_usize(oversample) * (T::of_f64(6.0) / T::PI()).sqrt();
    mean_clipped_count(n_tones, oversample, gamma_db) * a_over_sigma / ratio
}

/// Real multiplications saved per iteration by computing the step size over
/// the clip set instead of the peak set: 5*N_Sp - 2*N_S1.
pub fn beta_saving_per_iteration<T: Scalar>(n_tones: usize, oversample: usize, gamma_db: T) -> T {
    T::of_f64(5.0) * mean_peak_count(n_tones, oversample, gamma_db)
        - T::of_f64(2.0) * mean_clipped_count(n_tones, oversample, gamma_db)
}

/// Real multiplications for a pruned `full_size`-point DFT with
/// `nonzero_inputs` nonzero inputs, by the halving/quartering recursion with
/// base cases at sizes `base` and `2*base`.
///
/// `nonzero_inputs` may be a non-integer expected count, so the result is
/// real-valued.
pub fn pruned_dft_mults<T: Scalar>(full_size: usize, nonzero_inputs: T, base: usize) -> Result<T> {
    if base == 0 || full_size == 0 || !full_size.is_multiple_of(base) {
        return Err(Error::invalid(format!(
            "size {full_size} is not a power-of-two multiple of base {base}"
        )));
    }
    let ratio = full_size / base;
    if !ratio.is_power_of_two() {
        return Err(Error::invalid(format!(
            "size {full_size} is not reachable from base {base} by halving"
        )));
    }
    let levels = ratio.trailing_zeros() as usize;

    // sizes base * 2^t, bottom up
    let mut prev2 = T::zero(); // size base
    if levels == 0 {
        return Ok(prev2);
    }
    let three = T::of_f64(3.0);
    let mut prev1 = T::zero().max(
        (three * nonzero_inputs).min(three * T::of_usize(base) / T::of_f64(2.0) - T::of_f64(4.0)),
    );
    for t in 2..=levels {
        let size = T::of_usize(base << t);
        let butterfly = T::zero().max(
            (T::of_f64(6.0) * nonzero_inputs).min(three * size / T::of_f64(2.0) - T::of_f64(8.0)),
        );
        let current = prev1 + T::of_f64(2.0) * prev2 + butterfly;
        prev2 = prev1;
        prev1 = current;
    }
    Ok(prev1)
}

/// Assembles the full per-run cost: K iterations of clipping, pruned
/// DFT/IDFT, step-size computation and noise weighting.
///
/// The IDFT cost substitutes (M, LN, 1) for (N_S1, N, L): M nonzero inputs
/// on the LN grid with base case 1.
pub fn total_aac_cost<T: Scalar>(params: &CostModelParams<T>) -> Result<CostBreakdown<T>> {
    params.validate()?;
    let grid_len = params.n_tones * params.oversample;
    let mean_clipped = mean_clipped_count(params.n_tones, params.oversample, params.gamma_db);
    let mean_peaks = mean_peak_count(params.n_tones, params.oversample, params.gamma_db);
    let dft_mults = pruned_dft_mults(grid_len, mean_clipped, params.oversample)?;
    let idft_mults = pruned_dft_mults(grid_len, T::of_usize(params.prt_size), 1)?;
    let k = T::of_usize(params.iterations);
    let per_iteration = T::of_f64(4.0) * mean_clipped
        + dft_mults
        + idft_mults
        + T::of_f64(2.0) * T::of_usize(grid_len)
        + T::one();
    Ok(CostBreakdown {
        mean_clipped,
        mean_peaks,
        dft_mults,
        idft_mults,
        total_real_mults: k * per_iteration,
        total_real_divs: k * (mean_clipped + T::of_f64(2.0)),
    })
}
