use super::gamma::gamma_c;
use super::{Method, SpecFunResult, EPS};
use crate::error::{Error, Result};
use crate::C64;

const U_ASYMPTOTIC_RADIUS: f64 = 30.0;
const MAX_TERMS: usize = 20_000;

pub(crate) fn rgamma(z: C64) -> Result<C64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Ok(C64::new(0.0, 0.0));
    }
    Ok(gamma_c(z)?.value.inv())
}

fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Plain Maclaurin series of M(a, b, z). Returns (sum, sum of |terms|).
fn m_series(a: C64, b: C64, z: C64) -> Result<(C64, f64)> {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut abs_sum = 1.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) / ((b + kf) * (kf + 1.0)) * z;
        term *= ratio;
        sum += term;
        let tn = term.norm();
        abs_sum += tn;
        if !tn.is_finite() {
            return Err(Error::Range(format!("M series overflows at z = {z}")));
        }
        if tn == 0.0 || (ratio.norm() < 0.5 && tn <= EPS * 0.1 * sum.norm()) {
            return Ok((sum, abs_sum));
        }
    }
    Err(Error::Convergence(format!("M series at z = {z}")))
}

/// Kummer's confluent hypergeometric function `M(a, b, z) = 1F1(a; b; z)`.
///
/// Summed directly for `Re z >= 0` and through Kummer's transformation
/// `M(a,b,z) = e^z M(b-a,b,-z)` otherwise.
pub fn kummer_m(a: C64, b: C64, z: C64) -> Result<SpecFunResult> {
    let r = scaled_kummer_m(a, b, z, C64::new(0.0, 0.0))?;
    Ok(r)
}

/// `e^shift * M(a, b, z)`, with the exponential folded in before overflow can occur.
pub(crate) fn scaled_kummer_m(a: C64, b: C64, z: C64, shift: C64) -> Result<SpecFunResult> {
    if !(super::is_finite(a) && super::is_finite(b) && super::is_finite(z)) {
        return Err(Error::Domain("non-finite argument to M".into()));
    }
    if is_nonpositive_integer(b) {
        return Err(Error::Domain(format!("M undefined for b = {b}")));
    }
    let (sum, abs_sum, expo) = if z.re >= 0.0 {
        let (s, a_s) = m_series(a, b, z)?;
        (s, a_s, shift)
    } else {
        let (s, a_s) = m_series(b - a, b, -z)?;
        (s, a_s, shift + z)
    };
    if expo.re > 709.0 {
        return Err(Error::Range("M overflows".into()));
    }
    let e = expo.exp();
    let v = sum * e;
    Ok(SpecFunResult::new(v, 4.0 * EPS * abs_sum * e.norm(), Method::Series))
}

/// Tricomi's confluent hypergeometric function `U(a, b, z)` on the principal
/// sheet (cut along the negative real axis).
pub fn kummer_u(a: C64, b: C64, z: C64) -> Result<SpecFunResult> {
    if !(super::is_finite(a) && super::is_finite(b) && super::is_finite(z)) {
        return Err(Error::Domain("non-finite argument to U".into()));
    }
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::BranchCut(format!("U evaluated on its cut at z = {z}")));
    }
    if z.norm() >= U_ASYMPTOTIC_RADIUS {
        if let Some(r) = u_asymptotic(a, b, z) {
            return Ok(r);
        }
    }
    if (b.im == 0.0) && b.re == b.re.round() {
        return Err(Error::Domain(format!("connection formula needs non-integer b, got {b}")));
    }
    let one = C64::new(1.0, 0.0);
    let m1 = kummer_m(a, b, z)?;
    let m2 = kummer_m(a - b + one, C64::new(2.0, 0.0) - b, z)?;
    let c1 = gamma_c(one - b)?.value * rgamma(a - b + one)?;
    let c2 = gamma_c(b - one)?.value * rgamma(a)?;
    let p = ((one - b) * z.ln()).exp();
    let t1 = c1 * m1.value;
    let t2 = c2 * p * m2.value;
    let v = t1 + t2;
    let err = (c1.norm() * m1.est_error + (c2 * p).norm() * m2.est_error) + 8.0 * EPS * (t1.norm() + t2.norm());
    Ok(SpecFunResult::new(v, err, Method::Connection))
}

/// `U(a,b,z) ~ z^-a sum_k (a)_k (a-b+1)_k / k! (-z)^-k`, optimally truncated.
fn u_asymptotic(a: C64, b: C64, z: C64) -> Option<SpecFunResult> {
    let one = C64::new(1.0, 0.0);
    let mut term = one;
    let mut sum = one;
    let mut last = 1.0f64;
    for k in 0..500 {
        let kf = k as f64;
        let next = term * (a + kf) * (a - b + one + kf) / ((kf + 1.0) * (-z));
        let nn = next.norm();
        if nn >= last {
            break;
        }
        sum += next;
        term = next;
        last = nn;
        if nn <= EPS * sum.norm() * 0.1 {
            break;
        }
    }
    let pre = (-a * z.ln()).exp();
    let v = pre * sum;
    let err = pre.norm() * (last + 4.0 * EPS * sum.norm());
    if err > 1e-6 * v.norm() {
        return None;
    }
    Some(SpecFunResult::new(v, err, Method::Asymptotic))
}
