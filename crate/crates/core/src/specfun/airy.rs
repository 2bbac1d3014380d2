use std::f64::consts::PI;

use super::{Method, SpecFunResult, EPS};
use crate::error::{Error, Result};
use crate::C64;

const SERIES_RADIUS: f64 = 6.0;
const AI0: f64 = 0.355_028_053_887_817_239_26;
const AIP0: f64 = 0.258_819_403_792_806_798_41;

/// (Ai, Ai', error estimate) from the Maclaurin series.
fn airy_series(z: C64) -> Result<(C64, C64, f64)> {
    if z.norm() == 0.0 {
        return Ok((C64::new(AI0, 0.0), C64::new(-AIP0, 0.0), EPS));
    }
    let z3 = z * z * z;
    let mut f_term = C64::new(1.0, 0.0);
    let mut g_term = z;
    let mut f = f_term;
    let mut g = g_term;
    let mut fp = C64::new(0.0, 0.0);
    let mut gp = C64::new(1.0, 0.0);
    let mut abs_sum = 1.0 + z.norm();
    for k in 0..500 {
        let kf = k as f64;
        f_term *= z3 / ((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        g_term *= z3 / ((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        f += f_term;
        g += g_term;
        // d/dz z^(3k+3) = (3k+3) z^(3k+2), so the derivative term is term * (3k+3) / z.
        fp += f_term * (3.0 * kf + 3.0) * z.inv();
        gp += g_term * (3.0 * kf + 4.0) * z.inv();
        abs_sum += f_term.norm() + g_term.norm();
        if f_term.norm() + g_term.norm() <= 0.1 * EPS * (f.norm() + g.norm()) {
            let ai = AI0 * f - AIP0 * g;
            let aip = AI0 * fp - AIP0 * gp;
            return Ok((ai, aip, 4.0 * EPS * abs_sum));
        }
    }
    Err(Error::Convergence(format!("Airy series at {z}")))
}

fn uv_coefficients(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..n {
        let kf = k as f64;
        let uk = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(uk);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk);
    }
    (u, v)
}

/// Sums `sum_k sign^k c_k / zeta^k` over the indices `start, start+step, ...`, truncated at the smallest term.
fn airy_sum(c: &[f64], zeta: C64, start: usize, step: usize) -> (C64, f64) {
    let mut sum = C64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    let mut k = start;
    let mut j = 0;
    while k < c.len() {
        let term = c[k] * (-1.0f64).powi(j) / zeta.powu(k as u32);
        let tn = term.norm();
        if tn >= last {
            break;
        }
        sum += term;
        last = tn;
        if tn <= 0.1 * EPS * sum.norm() {
            break;
        }
        k += step;
        j += 1;
    }
    (sum, last)
}

fn airy_asymptotic(z: C64) -> (C64, C64, f64) {
    let (u, v) = uv_coefficients(60);
    let sqrt_pi = PI.sqrt();
    if z.arg().abs() <= 2.0 * PI / 3.0 {
        let zeta = z.powf(1.5) * (2.0 / 3.0);
        let q = z.powf(0.25);
        let e = (-zeta).exp();
        let (su, eu) = airy_sum_alt(&u, zeta);
        let (sv, ev) = airy_sum_alt(&v, zeta);
        let ai = e / (2.0 * sqrt_pi * q) * su;
        let aip = -q * e / (2.0 * sqrt_pi) * sv;
        let err = (e / (2.0 * sqrt_pi * q)).norm() * eu + (q * e / (2.0 * sqrt_pi)).norm() * ev;
        (ai, aip, err)
    } else {
        let w = -z;
        let zeta = w.powf(1.5) * (2.0 / 3.0);
        let q = w.powf(0.25);
        let ph = zeta - PI / 4.0;
        let (c, s) = (ph.cos(), ph.sin());
        let (u_even, e1) = airy_sum(&u, zeta, 0, 2);
        let (u_odd, e2) = airy_sum(&u, zeta, 1, 2);
        let (v_even, e3) = airy_sum(&v, zeta, 0, 2);
        let (v_odd, e4) = airy_sum(&v, zeta, 1, 2);
        let ai = (c * u_even + s * u_odd) / (sqrt_pi * q);
        let aip = (q / sqrt_pi) * (s * v_even - c * v_odd);
        let scale = c.norm() + s.norm();
        let err = scale * ((e1 + e2) / (sqrt_pi * q.norm()) + q.norm() / sqrt_pi * (e3 + e4));
        (ai, aip, err)
    }
}

fn airy_sum_alt(c: &[f64], zeta: C64) -> (C64, f64) {
    airy_sum(c, zeta, 0, 1)
}

fn airy_pair(z: C64) -> Result<(C64, C64, f64, Method)> {
    if !super::is_finite(z) {
        return Err(Error::Domain("non-finite Airy argument".into()));
    }
    if z.norm() > 1e5 {
        return Err(Error::Range(format!("|z| = {} too large for Airy", z.norm())));
    }
    if z.norm() <= SERIES_RADIUS {
        let (a, b, e) = airy_series(z)?;
        Ok((a, b, e, Method::Series))
    } else {
        let (a, b, e) = airy_asymptotic(z);
        if !(super::is_finite(a) && super::is_finite(b)) {
            return Err(Error::Range(format!("Airy overflow at {z}")));
        }
        Ok((a, b, e, Method::Asymptotic))
    }
}

/// Airy function Ai(z).
pub fn airy_ai(z: C64) -> Result<SpecFunResult> {
    let (a, _, e, m) = airy_pair(z)?;
    Ok(SpecFunResult::new(a, e, m))
}

/// Derivative Ai'(z).
pub fn airy_ai_prime(z: C64) -> Result<SpecFunResult> {
    let (_, b, e, m) = airy_pair(z)?;
    Ok(SpecFunResult::new(b, e, m))
}

/// The first `k` zeros of Ai, all on the negative real axis, in decreasing order.
pub fn airy_ai_zeros(k: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(k);
    for n in 1..=k {
        let t = 3.0 * PI * (4.0 * n as f64 - 1.0) / 8.0;
        let t2 = t.powi(-2);
        let mut x = -t.powf(2.0 / 3.0) * (1.0 + t2 * (5.0 / 48.0 - t2 * (5.0 / 36.0 - t2 * 77125.0 / 82944.0)));
        for _ in 0..50 {
            let (a, b, _, _) = airy_pair(C64::new(x, 0.0))?;
            let dx = a.re / b.re;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs() {
                break;
            }
        }
        out.push(x);
    }
    Ok(out)
}
