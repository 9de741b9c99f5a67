//! Peak-reduction engines: Tellado's gradient algorithm (GD-TR), iterative
//! clipping and filtering with adaptive scaling (AS-TR), and adaptive
//! amplitude clipping (AAC-TR), plus the shared clip/filter/step primitives.
//!
//! All engines leave the data tones untouched: the correction they subtract
//! has spectral support only on the reserved tones. PAPR is always reported
//! against the original signal's average power.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::kernel::{oversampled_kernel, PrtSet};
use crate::ofdm::{papr_db, TimeSignal};
use crate::scalar::Scalar;
use crate::transform::{inband_bin, TransformPlan};

/// Clipping-engine parameters.
#[derive(Debug, Clone)]
pub struct ClipConfig<T: Scalar> {
    /// Clipping ratio gamma in dB: gamma = A^2 / E[|x_n|^2].
    pub clip_ratio_db: T,
    /// Maximum iterations K.
    pub max_iterations: usize,
    /// AAC level step rho in [0, 1].
    pub rho: T,
    pub prt: PrtSet,
    pub oversample: usize,
}

impl<T: Scalar> ClipConfig<T> {
    pub fn new(
        clip_ratio_db: T,
        max_iterations: usize,
        rho: T,
        prt: PrtSet,
        oversample: usize,
    ) -> Result<Self> {
        let cfg = ClipConfig {
            clip_ratio_db,
            max_iterations,
            rho,
            prt,
            oversample,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::invalid("need at least one iteration"));
        }
        if self.rho < T::zero() || self.rho > T::one() {
            return Err(Error::invalid("rho must lie in [0, 1]"));
        }
        if self.oversample == 0 {
            return Err(Error::invalid("oversampling factor must be >= 1"));
        }
        Ok(())
    }

    /// Clipping level A = sqrt(gamma_linear * reference power).
    pub fn clip_level(&self, signal: &TimeSignal<T>) -> T {
        clip_level_from_gamma(self.clip_ratio_db, signal.avg_power())
    }
}

pub fn clip_level_from_gamma<T: Scalar>(gamma_db: T, avg_power: T) -> T {
    let gamma_linear = T::of_f64(10.0).powf(gamma_db / T::of_f64(10.0));
    (gamma_linear * avg_power).sqrt()
}

/// What a peak-reduction run did to one symbol.
#[derive(Debug, Clone)]
pub struct ReductionReport<T: Scalar> {
    pub reduced: TimeSignal<T>,
    pub papr_before_db: T,
    pub papr_after_db: T,
    pub iterations_run: usize,
    /// Clipping level used at each executed iteration.
    pub level_history: Vec<T>,
    /// Step size applied at each executed iteration (|alpha_i| for GD-TR).
    pub beta_history: Vec<T>,
    /// PAPR after each executed iteration, against the original power.
    pub papr_trajectory_db: Vec<T>,
}

/// Soft-limiter clipping noise: f_n = x_n - A e^{j theta_n} where |x_n| > A,
/// else 0.
pub fn soft_clip<T: Scalar>(signal: &TimeSignal<T>, level: T) -> Result<Vec<Complex<T>>> {
    if level <= T::zero() {
        return Err(Error::invalid("clipping level must be positive"));
    }
    Ok(soft_clip_samples(signal.samples(), level))
}

fn soft_clip_samples<T: Scalar>(samples: &[Complex<T>], level: T) -> Vec<Complex<T>> {
    samples
        .iter()
        .map(|&x| {
            let mag = x.norm();
            if mag > level {
                x.scale(T::one() - level / mag)
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
        .collect()
}

/// S_1: indices carrying clipping noise.
pub fn clip_set<T: Scalar>(noise: &[Complex<T>]) -> Vec<usize> {
    noise
        .iter()
        .enumerate()
        .filter_map(|(n, f)| (f.norm_sqr() > T::zero()).then_some(n))
        .collect()
}

/// S_p: members of S_1 that are circular local maxima of |x|
/// (strictly above the left neighbor, at or above the right).
pub fn peak_set<T: Scalar>(samples: &[Complex<T>], clip_set: &[usize]) -> Vec<usize> {
    let len = samples.len();
    clip_set
        .iter()
        .copied()
        .filter(|&n| {
            let here = samples[n].norm_sqr();
            let left = samples[(n + len - 1) % len].norm_sqr();
            let right = samples[(n + 1) % len].norm_sqr();
            here > left && here >= right
        })
        .collect()
}

/// AS-TR step size: real projection of the clipping noise onto its filtered
/// version over the peak set. `None` means no usable clipping event.
pub fn beta_astr<T: Scalar>(
    noise: &[Complex<T>],
    filtered: &[Complex<T>],
    peak_set: &[usize],
) -> Option<T> {
    if peak_set.is_empty() {
        return None;
    }
    let mut num = T::zero();
    let mut den = T::zero();
    for &n in peak_set {
        num += (noise[n] * filtered[n].conj()).re;
        den += filtered[n].norm_sqr();
    }
    (den > T::zero()).then(|| num / den)
}

/// AAC-TR step size: magnitude-domain least squares over the clip set,
/// always nonnegative. `None` means no usable clipping event.
pub fn beta_aac<T: Scalar>(
    noise: &[Complex<T>],
    filtered: &[Complex<T>],
    clip_set: &[usize],
) -> Option<T> {
    if clip_set.is_empty() {
        return None;
    }
    let mut num = T::zero();
    let mut den = T::zero();
    for &n in clip_set {
        num += noise[n].norm() * filtered[n].norm();
        den += filtered[n].norm_sqr();
    }
    (den > T::zero()).then(|| num / den)
}

/// Level-update gradient: mean residual clip magnitude over Omega = S1 u S2.
/// Empty Omega means no residual clipping, so the level stays put.
pub fn grad_level<T: Scalar>(residual_noise: &[Complex<T>], omega: &[usize]) -> T {
    if omega.is_empty() {
        return T::zero();
    }
    let sum: T = omega.iter().map(|&n| residual_noise[n].norm()).sum();
    sum / T::of_usize(omega.len())
}

/// Snapshot of one clipping iteration: the working signal's clip events at
/// the current level.
#[derive(Debug, Clone)]
pub struct ClipState<T: Scalar> {
    pub signal: TimeSignal<T>,
    /// Current clipping level A (linear amplitude).
    pub level: T,
    pub iteration: usize,
    /// S_1: indices carrying clipping noise.
    pub clip_set: Vec<usize>,
    /// S_p: the local-maximum subset of S_1.
    pub peak_set: Vec<usize>,
}

impl<T: Scalar> ClipState<T> {
    pub fn capture(signal: &TimeSignal<T>, level: T, iteration: usize) -> Result<Self> {
        if level <= T::zero() {
            return Err(Error::invalid("clipping level must be positive"));
        }
        let noise = soft_clip_samples(signal.samples(), level);
        let clip_set = clip_set(&noise);
        let peak_set = peak_set(signal.samples(), &clip_set);
        Ok(ClipState {
            signal: signal.clone(),
            level,
            iteration,
            clip_set,
            peak_set,
        })
    }
}

/// Clip-event statistics of a signal at the level implied by `gamma_db`:
/// (|S_1|, |S_p|).
pub fn clip_statistics<T: Scalar>(signal: &TimeSignal<T>, gamma_db: T) -> (usize, usize) {
    let level = clip_level_from_gamma(gamma_db, signal.avg_power());
    let state = ClipState::capture(signal, level, 0).expect("level from gamma is positive");
    (state.clip_set.len(), state.peak_set.len())
}

/// Projects clipping noise onto the reserved tones: DFT, keep only the
/// LN-grid images of the PRT indices, inverse DFT.
pub fn filter_to_prt<T: Scalar>(
    noise: &[Complex<T>],
    prt: &PrtSet,
    oversample: usize,
) -> Result<Vec<Complex<T>>> {
    let grid_len = prt.n_tones() * oversample;
    if noise.len() != grid_len {
        return Err(Error::invalid(format!(
            "noise length {} does not match grid length {grid_len}",
            noise.len()
        )));
    }
    let plan = TransformPlan::new(grid_len);
    let bins: Vec<usize> = prt
        .indices()
        .iter()
        .map(|&t| inband_bin(t, prt.n_tones(), grid_len))
        .collect();
    let mut work = WorkBuffers::new();
    Ok(project_to_bins(noise, &bins, &plan, &mut work))
}

struct WorkBuffers<T: Scalar> {
    spectrum: Vec<Complex<T>>,
    scratch: Vec<Complex<T>>,
}

impl<T: Scalar> WorkBuffers<T> {
    fn new() -> Self {
        WorkBuffers {
            spectrum: Vec::new(),
            scratch: Vec::new(),
        }
    }
}

fn project_to_bins<T: Scalar>(
    noise: &[Complex<T>],
    bins: &[usize],
    plan: &TransformPlan<T>,
    work: &mut WorkBuffers<T>,
) -> Vec<Complex<T>> {
    let len = noise.len();
    work.spectrum.clear();
    work.spectrum.extend_from_slice(noise);
    plan.forward_in_place(&mut work.spectrum, &mut work.scratch);

    let mut kept = vec![Complex::new(T::zero(), T::zero()); len];
    for &b in bins {
        kept[b] = work.spectrum[b];
    }
    plan.inverse_in_place(&mut kept, &mut work.scratch);
    let scale = T::one() / T::of_usize(len);
    for v in kept.iter_mut() {
        *v = v.scale(scale);
    }
    kept
}

/// Shared machinery for the three engines over one PRT set and grid.
/// Construct once, then run many symbols through it.
pub struct PeakReducer<T: Scalar> {
    cfg: ClipConfig<T>,
    grid_len: usize,
    prt_bins: Vec<usize>,
    plan: TransformPlan<T>,
    kernel: Vec<Complex<T>>,
    kernel_main: T,
}

impl<T: Scalar> PeakReducer<T> {
    pub fn new(cfg: ClipConfig<T>) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.prt.n_tones();
        let grid_len = n * cfg.oversample;
        let prt_bins = cfg
            .prt
            .indices()
            .iter()
            .map(|&t| inband_bin(t, n, grid_len))
            .collect();
        let kernel = oversampled_kernel(&cfg.prt, grid_len)?;
        let kernel_main = kernel[0].norm();
        Ok(PeakReducer {
            cfg,
            grid_len,
            prt_bins,
            plan: TransformPlan::new(grid_len),
            kernel,
            kernel_main,
        })
    }

    pub fn config(&self) -> &ClipConfig<T> {
        &self.cfg
    }

    /// The engine's LN-grid transform plan, shareable with symbol synthesis.
    pub fn plan(&self) -> &TransformPlan<T> {
        &self.plan
    }

    fn check_signal(&self, signal: &TimeSignal<T>) -> Result<()> {
        if signal.len() != self.grid_len || signal.oversample() != self.cfg.oversample {
            return Err(Error::invalid(format!(
                "signal grid {}x{} does not match engine grid {}x{}",
                signal.n_tones(),
                signal.oversample(),
                self.cfg.prt.n_tones(),
                self.cfg.oversample
            )));
        }
        Ok(())
    }

    fn papr_of<T2: Scalar>(samples: &[Complex<T2>], reference_power: T2) -> T2 {
        let peak = samples
            .iter()
            .map(|s| s.norm_sqr())
            .fold(T2::zero(), T2::max);
        T2::of_f64(10.0) * (peak / reference_power).log10()
    }

    /// Adaptive amplitude clipping: clip, filter, magnitude least-squares
    /// step, then raise the clipping level by rho times the mean residual.
    pub fn aac(&self, signal: &TimeSignal<T>) -> Result<ReductionReport<T>> {
        self.check_signal(signal)?;
        let papr_before_db = papr_db(signal)?;
        let reference = signal.avg_power();
        let mut level = self.cfg.clip_level(signal);
        let mut current = signal.samples().to_vec();
        let mut work = WorkBuffers::new();

        let mut level_history = Vec::new();
        let mut beta_history = Vec::new();
        let mut trajectory = Vec::new();
        let mut iterations_run = 0;

        for _ in 0..self.cfg.max_iterations {
            let noise = soft_clip_samples(&current, level);
            let s1 = clip_set(&noise);
            if s1.is_empty() {
                break;
            }
            let filtered = project_to_bins(&noise, &self.prt_bins, &self.plan, &mut work);
            let Some(beta) = beta_aac(&noise, &filtered, &s1) else {
                break;
            };
            for (c, f) in current.iter_mut().zip(&filtered) {
                *c = *c - f.scale(beta);
            }
            // residual clipping at the unchanged level drives the update
            let residual = soft_clip_samples(&current, level);
            let omega: Vec<usize> = (0..self.grid_len)
                .filter(|&n| noise[n].norm_sqr() > T::zero() || residual[n].norm_sqr() > T::zero())
                .collect();
            let grad = grad_level(&residual, &omega);

            level_history.push(level);
            beta_history.push(beta);
            trajectory.push(Self::papr_of(&current, reference));
            level += self.cfg.rho * grad;
            iterations_run += 1;
        }

        let reduced = TimeSignal::with_reference_power(current, self.cfg.oversample, reference);
        let papr_after_db = papr_db(&reduced)?;
        Ok(ReductionReport {
            reduced,
            papr_before_db,
            papr_after_db,
            iterations_run,
            level_history,
            beta_history,
            papr_trajectory_db: trajectory,
        })
    }

    /// Adaptive-scaling clip-and-filter at a fixed level, step size from the
    /// peak-set projection.
    pub fn adaptive_scaling(&self, signal: &TimeSignal<T>) -> Result<ReductionReport<T>> {
        self.clip_filter_fixed_level(signal, None)
    }

    /// Clip-and-filter with a constant step size instead of the adaptive one
    /// (the "constant scaling" baseline; approximate by construction).
    pub fn constant_scaling(&self, signal: &TimeSignal<T>, beta: T) -> Result<ReductionReport<T>> {
        self.clip_filter_fixed_level(signal, Some(beta))
    }

    fn clip_filter_fixed_level(
        &self,
        signal: &TimeSignal<T>,
        fixed_beta: Option<T>,
    ) -> Result<ReductionReport<T>> {
        self.check_signal(signal)?;
        let papr_before_db = papr_db(signal)?;
        let reference = signal.avg_power();
        let level = self.cfg.clip_level(signal);
        let mut current = signal.samples().to_vec();
        let mut work = WorkBuffers::new();

        let mut level_history = Vec::new();
        let mut beta_history = Vec::new();
        let mut trajectory = Vec::new();
        let mut iterations_run = 0;

        for _ in 0..self.cfg.max_iterations {
            let noise = soft_clip_samples(&current, level);
            let s1 = clip_set(&noise);
            if s1.is_empty() {
                break;
            }
            let filtered = project_to_bins(&noise, &self.prt_bins, &self.plan, &mut work);
            let beta = match fixed_beta {
                Some(b) => b,
                None => {
                    let sp = peak_set(&current, &s1);
                    match beta_astr(&noise, &filtered, &sp) {
                        Some(b) => b,
                        None => break,
                    }
                }
            };
            for (c, f) in current.iter_mut().zip(&filtered) {
                *c = *c - f.scale(beta);
            }
            level_history.push(level);
            beta_history.push(beta);
            trajectory.push(Self::papr_of(&current, reference));
            iterations_run += 1;
        }

        let reduced = TimeSignal::with_reference_power(current, self.cfg.oversample, reference);
        let papr_after_db = papr_db(&reduced)?;
        Ok(ReductionReport {
            reduced,
            papr_before_db,
            papr_after_db,
            iterations_run,
            level_history,
            beta_history,
            papr_trajectory_db: trajectory,
        })
    }

    /// Tellado's gradient algorithm: per iteration, cancel the single largest
    /// peak down toward the target level with a shifted kernel.
    pub fn gradient(&self, signal: &TimeSignal<T>) -> Result<ReductionReport<T>> {
        let target = self.cfg.clip_level(signal);
        self.gradient_with_target(signal, target)
    }

    pub fn gradient_with_target(
        &self,
        signal: &TimeSignal<T>,
        target: T,
    ) -> Result<ReductionReport<T>> {
        self.check_signal(signal)?;
        if target <= T::zero() {
            return Err(Error::invalid("target level must be positive"));
        }
        let papr_before_db = papr_db(signal)?;
        let reference = signal.avg_power();
        let mut current = signal.samples().to_vec();
        let len = self.grid_len;

        let mut level_history = Vec::new();
        let mut beta_history = Vec::new();
        let mut trajectory = Vec::new();
        let mut iterations_run = 0;

        for _ in 0..self.cfg.max_iterations {
            let mut peak_index = 0usize;
            let mut peak_power = T::zero();
            for (k, v) in current.iter().enumerate() {
                let p = v.norm_sqr();
                if p > peak_power {
                    peak_power = p;
                    peak_index = k;
                }
            }
            let peak_mag = peak_power.sqrt();
            if peak_mag <= target {
                break;
            }
            let phase = current[peak_index] / peak_mag;
            let alpha = phase.scale((peak_mag - target) / self.kernel_main);
            for (k, value) in current.iter_mut().enumerate() {
                let shifted = self.kernel[(k + len - peak_index) % len];
                *value = *value - alpha * shifted;
            }
            level_history.push(target);
            beta_history.push(alpha.norm());
            trajectory.push(Self::papr_of(&current, reference));
            iterations_run += 1;
        }

        let reduced = TimeSignal::with_reference_power(current, self.cfg.oversample, reference);
        let papr_after_db = papr_db(&reduced)?;
        Ok(ReductionReport {
            reduced,
            papr_before_db,
            papr_after_db,
            iterations_run,
            level_history,
            beta_history,
            papr_trajectory_db: trajectory,
        })
    }
}

/// One-shot AAC-TR run (builds the engine internally).
pub fn aac_tr<T: Scalar>(
    signal: &TimeSignal<T>,
    cfg: &ClipConfig<T>,
) -> Result<ReductionReport<T>> {
    PeakReducer::new(cfg.clone())?.aac(signal)
}

/// One-shot AS-TR run.
pub fn as_tr<T: Scalar>(signal: &TimeSignal<T>, cfg: &ClipConfig<T>) -> Result<ReductionReport<T>> {
    PeakReducer::new(cfg.clone())?.adaptive_scaling(signal)
}

/// One-shot GD-TR run with an explicit target level.
pub fn gd_tr<T: Scalar>(
    signal: &TimeSignal<T>,
    prt: &PrtSet,
    iterations: usize,
    target: T,
) -> Result<ReductionReport<T>> {
    let cfg = ClipConfig::new(
        T::zero(),
        iterations,
        T::zero(),
        prt.clone(),
        signal.oversample(),
    )?;
    PeakReducer::new(cfg)?.gradient_with_target(signal, target)
}
