use std::f64::consts::PI;

use super::{Method, SpecFunResult, EPS};
use crate::error::{Error, Result};
use crate::C64;

const SERIES_RADIUS: f64 = 2.5;

/// Maclaurin series `erf z = 2/sqrt(pi) sum (-1)^n z^(2n+1) / (n! (2n+1))`.
fn erf_series(z: C64) -> Result<(C64, f64)> {
    let z2 = z * z;
    let mut term = z; // (-1)^n z^(2n+1)/n!
    let mut sum = z;
    let mut abs_sum = z.norm();
    for n in 1..2000 {
        term *= -z2 / n as f64;
        let add = term / (2 * n + 1) as f64;
        sum += add;
        abs_sum += add.norm();
        if add.norm() <= EPS * sum.norm() * 0.25 {
            let scale = 2.0 / PI.sqrt();
            return Ok((sum * scale, EPS * abs_sum * scale * 4.0));
        }
    }
    Err(Error::Convergence(format!("erf series at {z}")))
}

/// erfc by the Laplace continued fraction, evaluated with the modified Lentz method.
/// Valid for `Re z > 0`.
fn erfc_cf(z: C64) -> Result<(C64, f64)> {
    let tiny = 1e-300;
    let mut f = z;
    let mut c = z;
    let mut d = C64::new(0.0, 0.0);
    for k in 1..5000 {
        let a = k as f64 * 0.5;
        d = z + a * d;
        if d.norm() < tiny {
            d = C64::new(tiny, 0.0);
        }
        c = z + a / c;
        if c.norm() < tiny {
            c = C64::new(tiny, 0.0);
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < EPS {
            let ez = (-z * z).exp();
            let v = ez / (f * PI.sqrt());
            if !super::is_finite(v) {
                return Err(Error::Range(format!("erfc({z}) out of range")));
            }
            return Ok((v, v.norm() * EPS * (8.0 + (k as f64).sqrt()) + ez.norm() * EPS * (z * z).norm()));
        }
    }
    Err(Error::Convergence(format!("erfc continued fraction at {z}")))
}

/// Complex error function.
///
/// The Maclaurin series is used near the origin and in the strip `|Re z| <= 1`,
/// where its terms do not cancel; elsewhere `erf = 1 - erfc` with a
/// continued fraction for erfc.
pub fn erf_c(z: C64) -> Result<SpecFunResult> {
    if !super::is_finite(z) {
        return Err(Error::Domain(format!("erf at {z}")));
    }
    if z.norm() > 1e4 {
        return Err(Error::Range(format!("|z| = {} exceeds 1e4", z.norm())));
    }
    if z.norm() <= SERIES_RADIUS || z.re.abs() <= 1.0 {
        if z.im * z.im - z.re * z.re > 700.0 {
            return Err(Error::Range(format!("erf({z}) overflows")));
        }
        let (v, e) = erf_series(z)?;
        return Ok(SpecFunResult::new(v, e, Method::Series));
    }
    let (w, sign) = if z.re < 0.0 { (-z, -1.0) } else { (z, 1.0) };
    let (c, e) = erfc_cf(w)?;
    let v = (C64::new(1.0, 0.0) - c) * sign;
    Ok(SpecFunResult::new(v, e + EPS * v.norm(), Method::ContinuedFraction))
}

/// Complementary error function, without cancellation in the right half-plane.
pub fn erfc_c(z: C64) -> Result<SpecFunResult> {
    if !super::is_finite(z) {
        return Err(Error::Domain(format!("erfc at {z}")));
    }
    if z.norm() > SERIES_RADIUS && z.re >= 1.0 {
        let (v, e) = erfc_cf(z)?;
        return Ok(SpecFunResult::new(v, e, Method::ContinuedFraction));
    }
    if z.norm() > SERIES_RADIUS && z.re <= -1.0 {
        let (v, e) = erfc_cf(-z)?;
        return Ok(SpecFunResult::new(C64::new(2.0, 0.0) - v, e + 2.0 * EPS, Method::ContinuedFraction));
    }
    let r = erf_c(z)?;
    Ok(SpecFunResult::new(C64::new(1.0, 0.0) - r.value, r.est_error + EPS, r.method))
}
