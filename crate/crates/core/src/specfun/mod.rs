//! Complex special functions in double precision. Every evaluator reports the
//! value together with a rough error estimate and the branch of the algorithm
//! that produced it.

mod airy;
mod erf;
mod gamma;
mod kummer;
mod pcf;

pub use airy::{airy_ai, airy_ai_prime, airy_ai_zeros};
pub use erf::{erf_c, erfc_c};
pub use gamma::{gamma_c, ln_gamma_c};
pub use kummer::{kummer_m, kummer_u};
pub use pcf::pcf_u;

use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Series,
    ContinuedFraction,
    Asymptotic,
    Connection,
    Lanczos,
    Reflection,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: C64,
    pub est_error: f64,
    pub method: Method,
}

impl SpecFunResult {
    pub(crate) fn new(value: C64, est_error: f64, method: Method) -> Self {
        Self { value, est_error, method }
    }
}

/// Principal arctangent `(1/2i) log((1+iz)/(1-iz))`, cuts on the imaginary
/// axis from `+-i` outwards.
pub fn arctan_c(z: C64) -> Result<SpecFunResult> {
    if !is_finite(z) {
        return Err(Error::Domain("non-finite arctan argument".into()));
    }
    if z.re == 0.0 && z.im.abs() >= 1.0 {
        return Err(Error::BranchCut(format!("arctan evaluated on its cut at {z}")));
    }
    Ok(SpecFunResult::new(atan_principal(z), 2.0 * EPS * z.norm().max(1.0), Method::Closed))
}

/// Unchecked principal arctangent for inner loops.
#[inline]
pub fn atan_principal(z: C64) -> C64 {
    let i = C64::i();
    (log1p_c(i * z) - log1p_c(-i * z)) / (2.0 * i)
}

/// `ln(1 + w)` without cancellation for small `w`.
pub(crate) fn log1p_c(w: C64) -> C64 {
    let re = 0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p();
    C64::new(re, w.im.atan2(1.0 + w.re))
}

pub(crate) const EPS: f64 = f64::EPSILON;

pub(crate) fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
