use std::f64::consts::{FRAC_PI_2, PI};

use super::kummer::{rgamma, scaled_kummer_m};
use super::{Method, SpecFunResult, EPS};
use crate::error::{Error, Result};
use crate::C64;

const SERIES_MAX_RADIUS: f64 = 12.0;
const ASYMPTOTIC_MIN_RADIUS: f64 = 3.5;

/// Parabolic cylinder function `U(a, z)` for complex `a` and `z`.
///
/// Near the origin the even/odd Kummer representation is summed; for large
/// `|z|` the Poincare expansion is used, with the exponentially growing
/// companion term switched on across the Stokes lines `ph z = +-pi/2`.
/// When both are available the one with the smaller error estimate wins.
pub fn pcf_u(a: C64, z: C64) -> Result<SpecFunResult> {
    if !(super::is_finite(a) && super::is_finite(z)) {
        return Err(Error::Domain("non-finite argument to U(a,z)".into()));
    }
    let r = z.norm();
    let series = if r <= SERIES_MAX_RADIUS { pcf_series(a, z).ok() } else { None };
    let asym = if r >= ASYMPTOTIC_MIN_RADIUS { pcf_asymptotic(a, z).ok() } else { None };
    let pick = match (series, asym) {
        (Some(s), Some(t)) => {
            if s.est_error / s.value.norm() <= t.est_error / t.value.norm() {
                s
            } else {
                t
            }
        }
        (Some(s), None) => s,
        (None, Some(t)) => t,
        (None, None) => return Err(Error::Range(format!("U({a}, {z}) outside the supported range"))),
    };
    if !super::is_finite(pick.value) {
        return Err(Error::Range(format!("U({a}, {z}) overflows")));
    }
    Ok(pick)
}

/// `U(a,z) = U(a,0) u1 + U'(a,0) u2` with
/// `u1 = e^{-z^2/4} M(a/2+1/4, 1/2, z^2/2)` and `u2 = z e^{-z^2/4} M(a/2+3/4, 3/2, z^2/2)`.
fn pcf_series(a: C64, z: C64) -> Result<SpecFunResult> {
    let sqrt_pi = PI.sqrt();
    let two = C64::new(2.0, 0.0);
    let half_a = a * 0.5;
    let u0 = sqrt_pi * two.powc(-(half_a + 0.25)) * rgamma(half_a + 0.75)?;
    let du0 = -sqrt_pi * two.powc(-(half_a - 0.25)) * rgamma(half_a + 0.25)?;
    let x = z * z * 0.5;
    let shift = -x * 0.5;
    let m1 = scaled_kummer_m(half_a + 0.25, C64::new(0.5, 0.0), x, shift)?;
    let m2 = scaled_kummer_m(half_a + 0.75, C64::new(1.5, 0.0), x, shift)?;
    let t1 = u0 * m1.value;
    let t2 = du0 * z * m2.value;
    let v = t1 + t2;
    let err = u0.norm() * m1.est_error + (du0 * z).norm() * m2.est_error + 4.0 * EPS * (t1.norm() + t2.norm());
    Ok(SpecFunResult::new(v, err, Method::Series))
}

/// Optimally truncated `sum_s sign^s (c)_{2s} / (s! (2 z^2)^s)`; returns (sum, last term size).
fn poincare_sum(c: C64, z2: C64, alternating: bool) -> (C64, f64) {
    let one = C64::new(1.0, 0.0);
    let mut term = one;
    let mut sum = one;
    let mut last = 1.0f64;
    let sign = if alternating { -1.0 } else { 1.0 };
    for s in 0..400 {
        let sf = s as f64;
        let next = term * (c + 2.0 * sf) * (c + 2.0 * sf + 1.0) * sign / ((sf + 1.0) * 2.0 * z2);
        let nn = next.norm();
        if nn >= last {
            break;
        }
        sum += next;
        term = next;
        last = nn;
        if nn <= 0.1 * EPS * sum.norm() {
            break;
        }
    }
    (sum, last)
}

fn pcf_asymptotic(a: C64, z: C64) -> Result<SpecFunResult> {
    let z2 = z * z;
    let lz = z.ln();
    let (s1, e1) = poincare_sum(a + 0.5, z2, true);
    let p1 = (-z2 * 0.25 - (a + 0.5) * lz).exp();
    let mut v = p1 * s1;
    let mut err = p1.norm() * (e1 + 4.0 * EPS * s1.norm());
    let ph = z.arg();
    if ph.abs() > FRAC_PI_2 - 0.35 {
        let sgn = if ph >= 0.0 { 1.0 } else { -1.0 };
        let (s2, e2) = poincare_sum(C64::new(0.5, 0.0) - a, z2, false);
        let coef = C64::new(0.0, sgn) * (2.0 * PI).sqrt() * rgamma(a + 0.5)? * (C64::new(0.0, -sgn * PI) * a).exp();
        let p2 = coef * (z2 * 0.25 + (a - 0.5) * lz).exp();
        let second = p2 * s2;
        if ph.abs() > FRAC_PI_2 {
            v += second;
            err += p2.norm() * (e2 + 4.0 * EPS * s2.norm());
        }
        if ph.abs() < FRAC_PI_2 + 0.35 {
            // The switch across the Stokes line is only resolved to the size of the
            // companion term itself.
            err += 0.5 * second.norm();
        }
    }
    Ok(SpecFunResult::new(v, err, Method::Asymptotic))
}
