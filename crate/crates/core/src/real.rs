//! Scalar abstraction shared by every module.
//!
//! All model code is written against [`Real`] and works on `Complex<T>` for
//! `T` in `f32`, `f64` or [`DoubleDouble`]. The
//! exact algebraic identities are checked in `f64`; large-argument
//! asymptotics can be rerun in double-double without touching the model code.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

use crate::dd::DoubleDouble;

/// Real field underlying all complex arithmetic.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Label written into reports.
    const LABEL: &'static str;

    /// Lossless for `f64` and `DoubleDouble`, rounding for `f32`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    const LABEL: &'static str = "single";
}

impl Real for f64 {
    const LABEL: &'static str = "double";
}

impl Real for DoubleDouble {
    const LABEL: &'static str = "extended";
}

/// `re + i im` lifted from `f64` literals.
pub fn cx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::of(re), T::of(im))
}

pub fn creal<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

pub fn i_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

pub fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

pub fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// Modulus via `hypot`; avoids the polar round trip of `Complex::norm`
/// implementations that call trigonometric functions.
pub fn cabs<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}

/// Principal square root computed algebraically (no trigonometry), so it
/// carries full precision for double-double scalars.
///
/// Branch: `Re(sqrt z) >= 0`, and `Im(sqrt z) >= 0` when the real part vanishes.
pub fn csqrt<T: Real>(z: Complex<T>) -> Complex<T> {
    let zero = T::zero();
    if z.re == zero && z.im == zero {
        return czero();
    }
    let two = T::of(2.0);
    let r = cabs(z);
    if z.re >= zero {
        let t = ((r + z.re) / two).sqrt();
        Complex::new(t, z.im / (two * t))
    } else {
        let t = ((r - z.re) / two).sqrt();
        let im = if z.im < zero { -t } else { t };
        Complex::new(z.im / (two * im), im)
    }
}

/// Integer power, including negative exponents.
pub fn cpow<T: Real>(z: Complex<T>, n: i32) -> Complex<T> {
    if n >= 0 {
        z.powu(n as u32)
    } else {
        cone::<T>() / z.powu(n.unsigned_abs())
    }
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_diff<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    let scale = cabs(a).max(cabs(b));
    if scale == T::zero() {
        T::zero()
    } else {
        cabs(a - b) / scale
    }
}

/// Complex parameter converted between scalar types through `f64`.
pub fn convert<T: Real, U: Real>(z: Complex<T>) -> Complex<U> {
    Complex::new(U::of(z.re.to_f64_lossy()), U::of(z.im.to_f64_lossy()))
}

/// `(re, im)` pair used for serialized records.
pub fn to_pair<T: Real>(z: Complex<T>) -> (f64, f64) {
    (z.re.to_f64_lossy(), z.im.to_f64_lossy())
}
