//! Inviscid limit: characteristics on the real line and the complex branch
//! points of the multivalued solution.
//!
//! With `w = z - u t` the foot of the characteristic, a branch point solves
//! `u = 1/(1+w^2)` and `(1+w^2)^2 = 2 t w`, i.e. the quartic
//! `w^4 + 2w^2 - 2t w + 1 = 0`, and then `z = w + t/(1+w^2)`.

use crate::error::{Error, Result};
use crate::C64;

/// Time at which the first real shock forms, `8 sqrt(3) / 9`.
pub fn shock_time() -> f64 {
    8.0 * 3f64.sqrt() / 9.0
}

/// Largest `|u_x|` of the inviscid solution on the real line before the shock.
pub fn max_slope(t: f64) -> Result<f64> {
    let ts = shock_time();
    if !(0.0..ts).contains(&t) {
        return Err(Error::InvalidParameter(format!("t = {t} outside [0, {ts})")));
    }
    Ok(3.0 * 3f64.sqrt() / 8.0 / (1.0 - t / ts))
}

/// Real solution of `u = 1/(1 + (x - u t)^2)`.
pub fn characteristics_u(x: f64, t: f64) -> Result<f64> {
    if !(x.is_finite() && t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("x = {x}, t = {t}")));
    }
    // Cubic t^2 u^3 - 2 x t u^2 + (1 + x^2) u - 1 = 0.
    let (a, b, c, d) = (t * t, -2.0 * x * t, 1.0 + x * x, -1.0);
    if t > 0.0 {
        let disc = 18.0 * a * b * c * d - 4.0 * b.powi(3) * d + b * b * c * c - 4.0 * a * c.powi(3) - 27.0 * a * a * d * d;
        if disc > 0.0 {
            return Err(Error::MultivaluedRegion { x, t });
        }
    }
    let f = |u: f64| ((a * u + b) * u + c) * u + d;
    let df = |u: f64| (3.0 * a * u + 2.0 * b) * u + c;
    // f(0) = -1 < 0 <= f(1) = (x - t)^2.
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut u = 1.0 / (1.0 + x * x);
    for _ in 0..200 {
        let fu = f(u);
        if fu == 0.0 {
            return Ok(u);
        }
        if fu < 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let step = fu / df(u);
        let mut next = u - step;
        if !(next > lo && next < hi) || !step.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - u).abs() <= 1e-16 * u.abs().max(1e-300) || hi - lo < 1e-16 {
            return Ok(next);
        }
        u = next;
    }
    Ok(u)
}

/// Upper-half-plane branch points at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchPoints {
    pub points: Vec<C64>,
}

/// The four roots of `w^4 + 2w^2 - 2tw + 1`.
pub fn quartic_roots(t: f64) -> [C64; 4] {
    let (p, q, r) = (2.0, -2.0 * t, 1.0);
    let mut roots = if q.abs() < 1e-300 {
        // Biquadratic.
        let disc = C64::new(p * p - 4.0 * r, 0.0).sqrt();
        let y1 = (-p + disc) / 2.0;
        let y2 = (-p - disc) / 2.0;
        [y1.sqrt(), -y1.sqrt(), y2.sqrt(), -y2.sqrt()]
    } else {
        // Ferrari: (w^2 + p/2 + m)^2 = 2m (w - q/(4m))^2 with m a root of
        // 8m^3 + 8p m^2 + (2p^2 - 8r) m - q^2.
        let m = resolvent_root(8.0, 8.0 * p, 2.0 * p * p - 8.0 * r, -q * q);
        let s = (m * 2.0).sqrt();
        let mut out = [C64::new(0.0, 0.0); 4];
        for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
            // w^2 - sign s w + (p/2 + m + sign q s / (4m)) = 0
            let b = -s * sign;
            let c = m + p / 2.0 + s * sign * q / (m * 4.0);
            let d = (b * b - c * 4.0).sqrt();
            out[2 * k] = (-b + d) / 2.0;
            out[2 * k + 1] = (-b - d) / 2.0;
        }
        out
    };
    for w in roots.iter_mut() {
        for _ in 0..4 {
            let f = ((*w * *w + p) * *w + q) * *w + r;
            let df = (*w * *w * 4.0 + 2.0 * p) * *w + q;
            if df.norm() == 0.0 {
                break;
            }
            let step = f / df;
            *w -= step;
            if step.norm() < 1e-17 {
                break;
            }
        }
    }
    roots
}

/// A root of `a m^3 + b m^2 + c m + d` with the largest modulus (Cardano).
fn resolvent_root(a: f64, b: f64, c: f64, d: f64) -> C64 {
    let (b, c, d) = (b / a, c / a, d / a);
    let p = c - b * b / 3.0;
    let q = 2.0 * b.powi(3) / 27.0 - b * c / 3.0 + d;
    let disc = C64::new(q * q / 4.0 + p.powi(3) / 27.0, 0.0).sqrt();
    let mut u = (C64::new(-q / 2.0, 0.0) + disc).cbrt();
    if u.norm() < 1e-12 {
        u = (C64::new(-q / 2.0, 0.0) - disc).cbrt();
    }
    let omega = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut best = C64::new(0.0, 0.0);
    for k in 0..3 {
        let uk = u * omega.powi(k);
        let y = if uk.norm() == 0.0 { C64::new(0.0, 0.0) } else { uk - p / (uk * 3.0) };
        let m = y - b / 3.0;
        if m.norm() > best.norm() {
            best = m;
        }
    }
    best
}

pub fn branch_point_of_root(w: C64, t: f64) -> C64 {
    w + t / (C64::new(1.0, 0.0) + w * w)
}

/// Branch points in the closed upper half plane at time `t`.
pub fn branch_points(t: f64) -> Result<BranchPoints> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
    }
    let mut points: Vec<C64> = quartic_roots(t)
        .iter()
        .map(|&w| branch_point_of_root(w, t))
        .filter(|z| z.im >= -1e-12)
        .map(|z| C64::new(z.re, z.im.max(0.0)))
        .collect();
    points.sort_by(|a, b| b.im.total_cmp(&a.im));
    Ok(BranchPoints { points })
}

/// Residuals of the two defining equations at a branch point `z` with value `u`.
pub fn branch_residuals(z: C64, u: C64, t: f64) -> (C64, C64) {
    let one = C64::new(1.0, 0.0);
    let w = z - u * t;
    let q = one + w * w;
    (u - q.inv(), one - w * 2.0 * t / (q * q))
}

/// Value of `u` carried to the branch point `z` (the root `w` it came from).
pub fn branch_value(z: C64, t: f64) -> Option<C64> {
    quartic_roots(t)
        .iter()
        .map(|&w| (w, branch_point_of_root(w, t)))
        .min_by(|a, b| (a.1 - z).norm().total_cmp(&(b.1 - z).norm()))
        .map(|(w, _)| (C64::new(1.0, 0.0) + w * w).inv())
}
