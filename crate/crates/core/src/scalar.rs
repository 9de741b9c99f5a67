//! Scalar abstraction so the whole toolkit runs at `f32` or `f64`.

use num_traits::{Float, FloatConst};
use rustfft::FftNum;
use std::iter::Sum;
use std::ops::AddAssign;

/// Floating-point scalar the toolkit is generic over.
///
/// `FftNum` covers what the transform backend needs; `Float` + `FloatConst`
/// cover the math used by the kernels, clipping engines and the cost model.
pub trait Scalar: FftNum + Float + FloatConst + Sum + AddAssign {
    /// Conversion from `f64` for constants and configuration.
    fn of_f64(v: f64) -> Self {
        <Self as num_traits::FromPrimitive>::from_f64(v).expect("f64 conversion")
    }

    /// Conversion to `f64` for reporting and file output.
    fn as_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).expect("f64 conversion")
    }

    fn of_usize(v: usize) -> Self {
        <Self as num_traits::FromPrimitive>::from_usize(v).expect("usize conversion")
    }
}

impl<T> Scalar for T where T: FftNum + Float + FloatConst + Sum + AddAssign {}
