//! Peak-cancellation kernels and the PRT-set merit objective.
//!
//! A PRT set's time-domain kernel is the inverse transform of its 0/1
//! indicator. The kernel's largest magnitude away from sample 0, normalized
//! by the main peak M/sqrt(N), is the merit: the combinatorial objective the
//! searchers minimize (lower is better, 1 is worst, 0 only for the full set).

use std::path::Path;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::ofdm::FrequencySymbol;
use crate::scalar::Scalar;
use crate::transform::{self, TransformPlan};

/// Sorted set of M distinct reserved-tone indices in [0, N).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrtSet {
    indices: Vec<usize>,
    n_tones: usize,
}

impl PrtSet {
    /// Validates distinctness, range and 0 < M < N; indices are sorted.
    pub fn new(mut indices: Vec<usize>, n_tones: usize) -> Result<Self> {
        indices.sort_unstable();
        if indices.is_empty() {
            return Err(Error::invalid("PRT set must not be empty"));
        }
        if indices.len() >= n_tones {
            return Err(Error::invalid(format!(
                "PRT set size {} must be smaller than the tone count {}",
                indices.len(),
                n_tones
            )));
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("PRT indices must be distinct"));
        }
        if *indices.last().unwrap() >= n_tones {
            return Err(Error::invalid(format!(
                "PRT index {} out of range [0, {})",
                indices.last().unwrap(),
                n_tones
            )));
        }
        Ok(PrtSet { indices, n_tones })
    }

    /// The degenerate full set, whose kernel is a single discrete pulse.
    /// Skips the M < N check; only the kernel diagnostics accept it.
    pub fn all_tones(n_tones: usize) -> Self {
        PrtSet {
            indices: (0..n_tones).collect(),
            n_tones,
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn n_tones(&self) -> usize {
        self.n_tones
    }

    pub fn size(&self) -> usize {
        self.indices.len()
    }

    pub fn contains(&self, tone: usize) -> bool {
        self.indices.binary_search(&tone).is_ok()
    }

    /// Parses the toolkit's PRT file payload: one line of comma-separated
    /// 0-based indices.
    pub fn from_line(line: &str, n_tones: usize) -> Result<Self> {
        let mut indices = Vec::new();
        for field in line.trim().split(',') {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let idx: usize = field
                .parse()
                .map_err(|_| Error::PrtFile(format!("not an index: {field:?}")))?;
            indices.push(idx);
        }
        PrtSet::new(indices, n_tones).map_err(|e| Error::PrtFile(e.to_string()))
    }

    pub fn to_line(&self) -> String {
        self.indices
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn from_file(path: impl AsRef<Path>, n_tones: usize) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_line(&text, n_tones)
    }
}

/// Nyquist-rate peak-cancellation kernel of a PRT set.
#[derive(Debug, Clone)]
pub struct TimeKernel<T: Scalar> {
    samples: Vec<Complex<T>>,
    main_peak: T,
    secondary_peak: T,
    prt: PrtSet,
}

impl<T: Scalar> TimeKernel<T> {
    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    /// |samples[0]| = M/sqrt(N).
    pub fn main_peak(&self) -> T {
        self.main_peak
    }

    /// max over k != 0 of |samples[k]|.
    pub fn secondary_peak(&self) -> T {
        self.secondary_peak
    }

    pub fn prt(&self) -> &PrtSet {
        &self.prt
    }
}

/// 0/1 indicator of the PRT set over the N subcarriers.
pub fn freq_kernel<T: Scalar>(prt: &PrtSet) -> FrequencySymbol<T> {
    let mut values = vec![Complex::new(T::zero(), T::zero()); prt.n_tones()];
    for &i in prt.indices() {
        values[i] = Complex::new(T::one(), T::zero());
    }
    FrequencySymbol::new(values).expect("PRT tone count is validated")
}

/// Reusable merit scorer: one inverse-FFT plan per tone count.
///
/// `merit_of_indices` is the hot path the searchers call; it accepts a raw
/// sorted index slice so candidate evaluation skips `PrtSet` construction.
#[derive(Clone)]
pub struct MeritEvaluator<T: Scalar> {
    n_tones: usize,
    plan: TransformPlan<T>,
}

impl<T: Scalar> MeritEvaluator<T> {
    pub fn new(n_tones: usize) -> Self {
        MeritEvaluator {
            n_tones,
            plan: TransformPlan::new(n_tones),
        }
    }

    pub fn n_tones(&self) -> usize {
        self.n_tones
    }

    pub fn merit(&self, prt: &PrtSet) -> T {
        debug_assert_eq!(prt.n_tones(), self.n_tones);
        self.merit_of_indices(prt.indices())
    }

    /// Normalized secondary peak of the indicator's inverse transform.
    /// The 1/sqrt(N) scaling cancels, so the unnormalized transform is used
    /// and the main peak is exactly the number of ones.
    pub fn merit_of_indices(&self, indices: &[usize]) -> T {
        let mut buf = vec![Complex::new(T::zero(), T::zero()); self.n_tones];
        for &i in indices {
            buf[i] = Complex::new(T::one(), T::zero());
        }
        let mut scratch = Vec::new();
        self.plan.inverse_in_place(&mut buf, &mut scratch);
        let main = buf[0].norm();
        let secondary = buf[1..]
            .iter()
            .map(|v| v.norm_sqr())
            .fold(T::zero(), T::max)
            .sqrt();
        secondary / main
    }

    pub fn time_kernel(&self, prt: &PrtSet) -> TimeKernel<T> {
        debug_assert_eq!(prt.n_tones(), self.n_tones);
        let mut buf = vec![Complex::new(T::zero(), T::zero()); self.n_tones];
        for &i in prt.indices() {
            buf[i] = Complex::new(T::one(), T::zero());
        }
        let mut scratch = Vec::new();
        self.plan.inverse_in_place(&mut buf, &mut scratch);
        let scale = T::one() / T::of_usize(self.n_tones).sqrt();
        for v in buf.iter_mut() {
            *v = v.scale(scale);
        }
        let main_peak = buf[0].norm();
        let secondary_peak = buf[1..]
            .iter()
            .map(|v| v.norm_sqr())
            .fold(T::zero(), T::max)
            .sqrt();
        TimeKernel {
            samples: buf,
            main_peak,
            secondary_peak,
            prt: prt.clone(),
        }
    }
}

/// Time-domain kernel p of a PRT set (Nyquist rate).
pub fn time_kernel<T: Scalar>(prt: &PrtSet) -> TimeKernel<T> {
    MeritEvaluator::new(prt.n_tones()).time_kernel(prt)
}

/// Normalized secondary peak of a PRT set's kernel, in [0, 1].
pub fn merit<T: Scalar>(prt: &PrtSet) -> T {
    MeritEvaluator::new(prt.n_tones()).merit(prt)
}

/// Kernel samples at grid length `length`, circularly shifted right by `shift`.
///
/// For `length` equal to the kernel's own length this is a plain rotation;
/// for an oversampled grid the kernel is re-synthesized from the same
/// frequency-domain indicator placed on the in-band bins.
pub fn shifted_kernel<T: Scalar>(
    kernel: &TimeKernel<T>,
    shift: usize,
    length: usize,
) -> Result<Vec<Complex<T>>> {
    if shift >= length {
        return Err(Error::invalid(format!(
            "shift {shift} out of range [0, {length})"
        )));
    }
    let base = if length == kernel.samples.len() {
        kernel.samples.clone()
    } else {
        oversampled_kernel(kernel.prt(), length)?
    };
    Ok((0..length)
        .map(|k| base[(k + length - shift) % length])
        .collect())
}

/// Kernel re-synthesized on an oversampled grid of `grid_len` samples.
pub fn oversampled_kernel<T: Scalar>(prt: &PrtSet, grid_len: usize) -> Result<Vec<Complex<T>>> {
    let n = prt.n_tones();
    if grid_len == 0 || !grid_len.is_multiple_of(n) {
        return Err(Error::invalid(format!(
            "grid length {grid_len} is not a multiple of the tone count {n}"
        )));
    }
    let oversample = grid_len / n;
    let signal = transform::idft_oversampled(&freq_kernel(prt), oversample)?;
    Ok(signal.samples().to_vec())
}

/// The five PRT sets used throughout the experiments (N = 512, M = 32),
/// bundled as files in the loader's own format.
pub mod fixtures {
    use super::PrtSet;

    pub const N_TONES: usize = 512;

    pub const GA_PRT_FILE: &str = include_str!("../fixtures/ga_prt.txt");
    pub const CE_PRT_FILE: &str = include_str!("../fixtures/ce_prt.txt");
    pub const CS_PRT_FILE: &str = include_str!("../fixtures/cs_prt.txt");
    pub const ES_PRT_FILE: &str = include_str!("../fixtures/es_prt.txt");
    pub const RS_PRT_FILE: &str = include_str!("../fixtures/rs_prt.txt");

    fn parse(payload: &str) -> PrtSet {
        PrtSet::from_line(payload, N_TONES).expect("bundled fixture is valid")
    }

    /// Genetic-algorithm search result.
    pub fn ga_prt() -> PrtSet {
        parse(GA_PRT_FILE)
    }

    /// Cross-entropy search reference set.
    pub fn ce_prt() -> PrtSet {
        parse(CE_PRT_FILE)
    }

    /// Consecutive block 225..=256.
    pub fn cs_prt() -> PrtSet {
        parse(CS_PRT_FILE)
    }

    /// Equally spaced, offset 15, stride 16.
    pub fn es_prt() -> PrtSet {
        parse(ES_PRT_FILE)
    }

    /// Best-of-100000 random sets.
    pub fn rs_prt() -> PrtSet {
        parse(RS_PRT_FILE)
    }

    pub fn all() -> Vec<(&'static str, PrtSet)> {
        vec![
            ("CS-PRT", cs_prt()),
            ("ES-PRT", es_prt()),
            ("GA-PRT", ga_prt()),
            ("CE-PRT", ce_prt()),
            ("RS-PRT", rs_prt()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn prt_set_validation() {
        assert!(PrtSet::new(vec![0, 4], 8).is_ok());
        assert!(PrtSet::new(vec![], 8).is_err());
        assert!(PrtSet::new(vec![0, 0], 8).is_err());
        assert!(PrtSet::new(vec![0, 8], 8).is_err());
        assert!(PrtSet::new((0..8).collect(), 8).is_err());
    }

    #[test]
    fn prt_line_round_trip() {
        let prt = PrtSet::new(vec![28, 10, 11], 512).unwrap();
        assert_eq!(prt.to_line(), "10,11,28");
        let back = PrtSet::from_line(&prt.to_line(), 512).unwrap();
        assert_eq!(back, prt);
        assert!(PrtSet::from_line("1,foo", 512).is_err());
    }

    #[test]
    fn freq_kernel_is_indicator() {
        let prt = PrtSet::new(vec![0, 4], 8).unwrap();
        let k = freq_kernel::<f64>(&prt);
        let expect = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0];
        for (v, e) in k.values().iter().zip(expect) {
            assert_eq!(*v, Complex64::new(e, 0.0));
        }
        let sum: f64 = k.values().iter().map(|v| v.re).sum();
        assert_eq!(sum, prt.size() as f64);
    }

    #[test]
    fn full_set_kernel_is_impulse() {
        let kernel = time_kernel::<f64>(&PrtSet::all_tones(8));
        assert!((kernel.main_peak() - 8.0f64.sqrt()).abs() < 1e-12);
        assert!(kernel.secondary_peak() < 1e-12);
        assert!(merit::<f64>(&PrtSet::all_tones(8)) < 1e-12);
    }

    #[test]
    fn single_tone_kernel_is_constant_modulus() {
        let prt = PrtSet::new(vec![0], 8).unwrap();
        let kernel = time_kernel::<f64>(&prt);
        let expect = 1.0 / 8.0f64.sqrt();
        for s in kernel.samples() {
            assert!((s.norm() - expect).abs() < 1e-12);
        }
        assert!((kernel.secondary_peak() - kernel.main_peak()).abs() < 1e-12);
    }

    #[test]
    fn comb_prt_kernel_is_impulse_train() {
        let prt = PrtSet::new((0..32).map(|i| i * 16).collect(), 512).unwrap();
        let kernel = time_kernel::<f64>(&prt);
        assert!((kernel.main_peak() - 32.0 / 512.0f64.sqrt()).abs() < 1e-9);
        assert!((kernel.secondary_peak() - kernel.main_peak()).abs() < 1e-9);
        for (k, s) in kernel.samples().iter().enumerate() {
            if k % 32 == 0 {
                assert!((s.norm() - kernel.main_peak()).abs() < 1e-9);
            } else {
                assert!(s.norm() < 1e-9);
            }
        }
    }

    #[test]
    fn bundled_fixture_merits_match_frozen_references() {
        let eval = MeritEvaluator::<f64>::new(512);
        assert!((eval.merit(&fixtures::es_prt()) - 1.0).abs() < 1e-9);
        assert!((eval.merit(&fixtures::cs_prt()) - 0.9936).abs() < 5e-4);
        assert!((eval.merit(&fixtures::ga_prt()) - 0.2996).abs() < 5e-4);
        assert!((eval.merit(&fixtures::rs_prt()) - 0.3207).abs() < 5e-4);
        assert!((eval.merit(&fixtures::ce_prt()) - 0.2805).abs() < 5e-4);
    }

    #[test]
    fn merit_matches_direct_summation_for_small_n() {
        // direct evaluation of the defining sum, independent of the FFT path
        fn direct_merit(indices: &[usize], n: usize) -> f64 {
            let main = indices.len() as f64;
            let mut worst: f64 = 0.0;
            for t in 1..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for &k in indices {
                    let angle = 2.0 * std::f64::consts::PI * (t * k) as f64 / n as f64;
                    acc += Complex64::from_polar(1.0, angle);
                }
                worst = worst.max(acc.norm());
            }
            worst / main
        }
        for n in [4usize, 8, 16] {
            let eval = MeritEvaluator::<f64>::new(n);
            for pattern in 0..(1usize << n) {
                let indices: Vec<usize> = (0..n).filter(|&i| pattern >> i & 1 == 1).collect();
                if indices.is_empty() || indices.len() >= n || pattern % 7 != 0 {
                    continue;
                }
                let via_fft = eval.merit_of_indices(&indices);
                let via_sum = direct_merit(&indices, n);
                assert!(
                    (via_fft - via_sum).abs() < 1e-10,
                    "n={n} indices={indices:?}: {via_fft} vs {via_sum}"
                );
            }
        }
    }

    #[test]
    fn shifted_kernel_identity_and_max_preserved() {
        let prt = PrtSet::new(vec![1, 3, 4], 8).unwrap();
        let kernel = time_kernel::<f64>(&prt);
        let zero = shifted_kernel(&kernel, 0, 8).unwrap();
        for (a, b) in zero.iter().zip(kernel.samples()) {
            assert_eq!(a, b);
        }
        let inf = |v: &[Complex64]| v.iter().map(|s| s.norm()).fold(0.0, f64::max);
        for shift in [1usize, 5, 7] {
            let rotated = shifted_kernel(&kernel, shift, 8).unwrap();
            assert!((inf(&rotated) - inf(kernel.samples())).abs() < 1e-15);
            for k in 0..8 {
                assert_eq!(rotated[(k + shift) % 8], kernel.samples()[k]);
            }
        }
        assert!(shifted_kernel(&kernel, 8, 8).is_err());
    }

    #[test]
    fn oversampled_kernel_decimates_to_nyquist_kernel() {
        let prt = PrtSet::new(vec![0, 3, 5, 6], 16).unwrap();
        let kernel = time_kernel::<f64>(&prt);
        let wide = oversampled_kernel::<f64>(&prt, 64).unwrap();
        for (m, s) in kernel.samples().iter().enumerate() {
            assert!((wide[4 * m] - s).norm() < 1e-10);
        }
    }

    #[test]
    fn bundled_fixtures_parse_and_have_32_tones() {
        for (name, prt) in fixtures::all() {
            assert_eq!(prt.size(), 32, "{name}");
            assert_eq!(prt.n_tones(), 512, "{name}");
        }
    }
}
