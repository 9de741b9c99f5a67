//! Tone-reservation PAPR reduction toolkit for OFDM.
//!
//! The crate covers the full pipeline: 16-QAM symbol synthesis and
//! oversampled transforms ([`ofdm`], [`transform`]), peak-cancellation
//! kernels and the PRT-set merit objective ([`kernel`]), PRT-set searchers
//! including a genetic algorithm and an exhaustive oracle ([`search`]), the
//! clipping-based peak-reduction engines ([`clip`]), and an analytic
//! operation-count model ([`complexity`]).
//!
//! Everything numeric is generic over the scalar type via [`scalar::Scalar`]
//! (`f32` or `f64`); the aliases below pin the common `f64` instantiation.

pub mod clip;
pub mod complexity;
pub mod error;
pub mod kernel;
pub mod ofdm;
pub mod rng;
pub mod scalar;
pub mod search;
pub mod transform;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use clip::{ClipConfig, ClipState, PeakReducer, ReductionReport};
pub use kernel::{MeritEvaluator, PrtSet, TimeKernel};
pub use ofdm::{CcdfCurve, FrequencySymbol, QamConstellation, TimeSignal};
pub use search::{Chromosome, GaConfig, SearchResult};

/// `f64` instantiations of the main types.
pub type FrequencySymbol64 = FrequencySymbol<f64>;
pub type TimeSignal64 = TimeSignal<f64>;
pub type CcdfCurve64 = CcdfCurve<f64>;
pub type TimeKernel64 = TimeKernel<f64>;
pub type ClipConfig64 = ClipConfig<f64>;
pub type ReductionReport64 = ReductionReport<f64>;
pub type SearchResult64 = SearchResult<f64>;

/// `f32` instantiations for callers trading precision for speed.
pub type FrequencySymbol32 = FrequencySymbol<f32>;
pub type TimeSignal32 = TimeSignal<f32>;
pub type CcdfCurve32 = CcdfCurve<f32>;
