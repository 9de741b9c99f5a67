//! Constellation mapping, OFDM symbol synthesis, PAPR and CCDF measures.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::kernel::PrtSet;
use crate::scalar::Scalar;

/// Length-N block of subcarrier values (data tones, peak-reduction tones, or
/// a kernel indicator).
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySymbol<T: Scalar> {
    values: Vec<Complex<T>>,
}

impl<T: Scalar> FrequencySymbol<T> {
    /// N must be a power of two (>= 2).
    pub fn new(values: Vec<Complex<T>>) -> Result<Self> {
        let n = values.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::invalid(format!(
                "subcarrier count must be a power of two >= 2, got {n}"
            )));
        }
        Ok(FrequencySymbol { values })
    }

    pub fn n_tones(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }
}

/// Oversampled time-domain signal with its reference average power.
///
/// The reference power is held fixed when a signal is peak-reduced, so PAPR
/// is always measured against the original signal's average power.
#[derive(Debug, Clone)]
pub struct TimeSignal<T: Scalar> {
    samples: Vec<Complex<T>>,
    oversample: usize,
    avg_power: T,
}

impl<T: Scalar> TimeSignal<T> {
    /// Wraps samples, taking the sample mean of |x_n|^2 as the reference power.
    pub fn from_samples(samples: Vec<Complex<T>>, oversample: usize) -> Self {
        assert!(oversample >= 1 && !samples.is_empty());
        assert_eq!(samples.len() % oversample, 0);
        let avg_power = mean_power(&samples);
        TimeSignal {
            samples,
            oversample,
            avg_power,
        }
    }

    /// Wraps samples keeping an externally supplied reference power
    /// (used by the peak-reduction engines).
    pub fn with_reference_power(samples: Vec<Complex<T>>, oversample: usize, avg_power: T) -> Self {
        assert!(oversample >= 1 && !samples.is_empty());
        assert_eq!(samples.len() % oversample, 0);
        TimeSignal {
            samples,
            oversample,
            avg_power,
        }
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn oversample(&self) -> usize {
        self.oversample
    }

    pub fn n_tones(&self) -> usize {
        self.samples.len() / self.oversample
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Reference average power (linear, units of |sample|^2).
    pub fn avg_power(&self) -> T {
        self.avg_power
    }

    pub fn max_magnitude(&self) -> T {
        self.samples
            .iter()
            .map(|s| s.norm())
            .fold(T::zero(), T::max)
    }
}

/// Sample mean of |x|^2.
pub fn mean_power<T: Scalar>(samples: &[Complex<T>]) -> T {
    let sum: T = samples.iter().map(|s| s.norm_sqr()).sum();
    sum / T::of_usize(samples.len())
}

/// 16-QAM constellation on the {-3,-1,1,3} grid, Gray-labeled per axis,
/// scaled to unit average symbol energy.
#[derive(Debug, Clone)]
pub struct QamConstellation<T: Scalar> {
    points: [Complex<T>; 16],
    normalization: T,
}

/// Gray code per axis: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
fn gray_level<T: Scalar>(bits: usize) -> T {
    match bits {
        0b00 => T::of_f64(-3.0),
        0b01 => T::of_f64(-1.0),
        0b11 => T::of_f64(1.0),
        0b10 => T::of_f64(3.0),
        _ => unreachable!(),
    }
}

impl<T: Scalar> Default for QamConstellation<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> QamConstellation<T> {
    pub fn new() -> Self {
        let normalization = T::one() / T::of_f64(10.0).sqrt();
        let mut points = [Complex::new(T::zero(), T::zero()); 16];
        for (index, p) in points.iter_mut().enumerate() {
            let re = gray_level::<T>((index >> 2) & 0b11) * normalization;
            let im = gray_level::<T>(index & 0b11) * normalization;
            *p = Complex::new(re, im);
        }
        QamConstellation {
            points,
            normalization,
        }
    }

    pub fn point(&self, index: usize) -> Result<Complex<T>> {
        self.points
            .get(index)
            .copied()
            .ok_or_else(|| Error::invalid(format!("16-QAM index out of range: {index}")))
    }

    pub fn points(&self) -> &[Complex<T>; 16] {
        &self.points
    }

    pub fn normalization(&self) -> T {
        self.normalization
    }
}

/// Gray-mapped 16-QAM points at unit average energy.
pub fn map_qam16<T: Scalar>(indices: &[usize]) -> Result<Vec<Complex<T>>> {
    let constellation = QamConstellation::new();
    indices.iter().map(|&i| constellation.point(i)).collect()
}

/// Random data symbol: uniform 16-QAM on every tone outside the PRT set,
/// exact zeros on the reserved tones.
pub fn generate_data_symbol<T: Scalar, R: Rng>(
    rng: &mut R,
    prt: &PrtSet,
    n_tones: usize,
) -> Result<FrequencySymbol<T>> {
    if prt.n_tones() != n_tones {
        return Err(Error::invalid(format!(
            "PRT set is defined over {} tones, symbol wants {}",
            prt.n_tones(),
            n_tones
        )));
    }
    if prt.size() >= n_tones {
        return Err(Error::invalid("PRT set must leave room for data tones"));
    }
    let constellation = QamConstellation::<T>::new();
    let mut values = vec![Complex::new(T::zero(), T::zero()); n_tones];
    for (tone, v) in values.iter_mut().enumerate() {
        if !prt.contains(tone) {
            *v = constellation.points()[rng.random_range(0..16usize)];
        }
    }
    FrequencySymbol::new(values)
}

/// Peak-to-average power ratio in dB against the signal's reference power.
pub fn papr_db<T: Scalar>(signal: &TimeSignal<T>) -> Result<T> {
    if signal.avg_power() <= T::zero() {
        return Err(Error::domain("PAPR of a zero-power signal is undefined"));
    }
    let peak = signal
        .samples()
        .iter()
        .map(|s| s.norm_sqr())
        .fold(T::zero(), T::max);
    Ok(T::of_f64(10.0) * (peak / signal.avg_power()).log10())
}

/// Average-power increase of a peak-reduced signal over the original, in dB.
pub fn avg_power_increase_db<T: Scalar>(
    original: &TimeSignal<T>,
    reduced: &TimeSignal<T>,
) -> Result<T> {
    if original.len() != reduced.len() {
        return Err(Error::invalid("signals must have the same length"));
    }
    let p_orig = mean_power(original.samples());
    if p_orig <= T::zero() {
        return Err(Error::domain("original signal has zero power"));
    }
    let p_red = mean_power(reduced.samples());
    Ok(T::of_f64(10.0) * (p_red / p_orig).log10())
}

/// Empirical complementary CDF of PAPR over an ensemble.
///
/// Probabilities are exact exceedance fractions count/n_samples and are
/// non-increasing along the (strictly increasing) threshold grid.
#[derive(Debug, Clone)]
pub struct CcdfCurve<T: Scalar> {
    thresholds_db: Vec<T>,
    counts: Vec<u64>,
    n_samples: usize,
}

impl<T: Scalar> CcdfCurve<T> {
    pub fn thresholds_db(&self) -> &[T] {
        &self.thresholds_db
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    /// Exceedance counts per threshold.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn probabilities(&self) -> Vec<T> {
        let n = T::of_usize(self.n_samples);
        self.counts
            .iter()
            .map(|&c| T::of_f64(c as f64) / n)
            .collect()
    }

    pub fn probability_at(&self, i: usize) -> T {
        T::of_f64(self.counts[i] as f64) / T::of_usize(self.n_samples)
    }

    /// First grid threshold where the exceedance probability drops to the
    /// target or below (the "CCDF = target" reading used for the figures).
    pub fn papr_at(&self, target_probability: T) -> Option<T> {
        let n = target_probability * T::of_usize(self.n_samples);
        for (i, &c) in self.counts.iter().enumerate() {
            if T::of_f64(c as f64) <= n {
                return Some(self.thresholds_db[i]);
            }
        }
        None
    }
}

/// Exact empirical CCDF: Pr(PAPR > threshold) per threshold.
pub fn ccdf<T: Scalar>(papr_samples_db: &[T], thresholds_db: &[T]) -> Result<CcdfCurve<T>> {
    if papr_samples_db.is_empty() {
        return Err(Error::invalid("CCDF needs at least one PAPR sample"));
    }
    if thresholds_db.is_empty() {
        return Err(Error::invalid("CCDF needs at least one threshold"));
    }
    if thresholds_db.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("thresholds must be strictly increasing"));
    }
    let counts = thresholds_db
        .iter()
        .map(|&t| papr_samples_db.iter().filter(|&&p| p > t).count() as u64)
        .collect();
    Ok(CcdfCurve {
        thresholds_db: thresholds_db.to_vec(),
        counts,
        n_samples: papr_samples_db.len(),
    })
}
