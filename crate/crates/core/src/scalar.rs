use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar used throughout the crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Sum
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `(1 - e^{-rate h}) / rate`, the integral of `e^{-rate s}` over `[0, h]`.
#[inline]
pub fn phi1<T: Real>(rate: T, h: T) -> T {
    if rate == T::zero() {
        h
    } else {
        -(-rate * h).exp_m1() / rate
    }
}

/// Ordinary least-squares slope of `y` against `x`.
pub fn ls_slope<T: Real>(x: &[T], y: &[T]) -> Option<T> {
    let w = vec![T::one(); x.len()];
    weighted_ls_slope(x, y, &w).map(|(s, _)| s)
}

/// Weighted least-squares slope and its standard error `sqrt(1 / Sxx_w)`,
/// treating the weights as inverse variances.
pub fn weighted_ls_slope<T: Real>(x: &[T], y: &[T], w: &[T]) -> Option<(T, T)> {
    if x.len() != y.len() || x.len() != w.len() || x.len() < 2 {
        return None;
    }
    let sw: T = w.iter().copied().sum();
    if sw <= T::zero() {
        return None;
    }
    let xm = x.iter().zip(w).map(|(&a, &b)| a * b).sum::<T>() / sw;
    let ym = y.iter().zip(w).map(|(&a, &b)| a * b).sum::<T>() / sw;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for ((&xi, &yi), &wi) in x.iter().zip(y).zip(w) {
        sxx = sxx + wi * (xi - xm) * (xi - xm);
        sxy = sxy + wi * (xi - xm) * (yi - ym);
    }
    if sxx <= T::zero() {
        return None;
    }
    Some((sxy / sxx, (T::one() / sxx).sqrt()))
}
