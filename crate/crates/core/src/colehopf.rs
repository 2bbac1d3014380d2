//! Exact solution through the Cole-Hopf integral
//!
//! `u = N / D`, `D(z,t) = int exp{-(1/2mu)[arctan s + (z-s)^2 / 2t]} ds`.
//!
//! With `s = z + c w`, `c = 2 sqrt(mu t)`, the Gaussian factor becomes
//! `exp(-w^2)` and the path is moved onto the real `w` axis. The branch points
//! of `arctan` at `s = +-i` sit at `w = (+-i - z)/c`; when one of them comes
//! within the deformation margin of the real `w` axis (in particular whenever
//! its cut crosses it, `|Im z| >= 1`) the path drops around it through a
//! rectangular notch.
//!
//! All moments are accumulated relative to a common exponential scale, so
//! values far outside the double range still give finite ratios.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_hermite_rule, gauss_legendre_rule, pairwise_sum, polyline_nodes, QuadRule};
use crate::specfun::atan_principal;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub hermite_order: usize,
    pub legendre_order: usize,
    pub deform_margin: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { hermite_order: 64, legendre_order: 64, deform_margin: 0.5, rel_tol: 1e-10, max_panels: 1 << 10 }
    }
}

/// `mant * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mant: C64,
    pub log_scale: f64,
}

impl Scaled {
    pub fn value(&self) -> Option<C64> {
        let v = self.mant * self.log_scale.exp();
        (v.re.is_finite() && v.im.is_finite()).then_some(v)
    }

    /// `self / other` as a plain number.
    pub fn ratio(&self, other: &Scaled) -> C64 {
        self.mant / other.mant * (self.log_scale - other.log_scale).exp()
    }

    pub fn rescale(&self, log_scale: f64) -> C64 {
        self.mant * (self.log_scale - log_scale).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourKind {
    Straight,
    NotchUpper,
    NotchLower,
}

/// Integration path in the scaled variable `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub kind: ContourKind,
    pub vertices: Vec<C64>,
}

/// `int w^k exp(-w^2 - arctan(z + c w) / 2mu) dw` for k = 0, 1, 2, with a shared scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub m: [C64; 3],
    pub log_scale: f64,
    pub est_error: f64,
    pub contour: ContourKind,
}

fn check_args(z: C64, t: f64, mu: f64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidParameter(format!("z = {z} is not finite")));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
    }
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidParameter(format!("mu = {mu} must be positive")));
    }
    Ok(())
}

fn legendre(n: usize) -> Result<&'static QuadRule> {
    static CACHE: OnceLock<std::sync::Mutex<Vec<(usize, &'static QuadRule)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| std::sync::Mutex::new(Vec::new()));
    let mut guard = cache.lock().unwrap();
    if let Some((_, r)) = guard.iter().find(|(k, _)| *k == n) {
        return Ok(r);
    }
    let r: &'static QuadRule = Box::leak(Box::new(gauss_legendre_rule(n)?));
    guard.push((n, r));
    Ok(r)
}

fn hermite(n: usize) -> Result<&'static QuadRule> {
    static CACHE: OnceLock<std::sync::Mutex<Vec<(usize, &'static QuadRule)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| std::sync::Mutex::new(Vec::new()));
    let mut guard = cache.lock().unwrap();
    if let Some((_, r)) = guard.iter().find(|(k, _)| *k == n) {
        return Ok(r);
    }
    let r: &'static QuadRule = Box::leak(Box::new(gauss_hermite_rule(n)?));
    guard.push((n, r));
    Ok(r)
}

/// Path for the `w` integral at `(z, t, mu)`.
pub fn contour(z: C64, t: f64, mu: f64, opts: &EvalOptions) -> Contour {
    let c = 2.0 * (mu * t).sqrt();
    let upper = (C64::i() - z) / c;
    let lower = (-C64::i() - z) / c;
    // Never let a notch reach the other branch point, which lies 2/c away.
    let m = opts.deform_margin.min(1.0 / c);
    let base = (39.0 + PI / (2.0 * mu)).sqrt();
    let mk = |b: C64, kind: ContourKind| {
        let r = base.max(b.re.abs() + m + 1.0);
        let depth = match kind {
            ContourKind::NotchUpper => b.im.min(0.0) - m,
            _ => b.im.max(0.0) + m,
        };
        let (xl, xr) = (b.re - m, b.re + m);
        Contour {
            kind,
            vertices: vec![
                C64::new(-r, 0.0),
                C64::new(xl, 0.0),
                C64::new(xl, depth),
                C64::new(xr, depth),
                C64::new(xr, 0.0),
                C64::new(r, 0.0),
            ],
        }
    };
    if upper.im < m {
        mk(upper, ContourKind::NotchUpper)
    } else if lower.im > -m {
        mk(lower, ContourKind::NotchLower)
    } else {
        Contour { kind: ContourKind::Straight, vertices: vec![C64::new(-base, 0.0), C64::new(base, 0.0)] }
    }
}

/// Weighted sums of `w^k e^{E}` over a node set, sharing one exponential scale.
fn accumulate(nodes: &[(C64, C64)], exps: &[C64], need: usize) -> Result<([C64; 3], f64, f64)> {
    let mut ref_scale = f64::NEG_INFINITY;
    for e in exps {
        if e.re.is_nan() || e.im.is_nan() {
            return Err(Error::IntegrandBlowup("NaN exponent".into()));
        }
        ref_scale = ref_scale.max(e.re);
    }
    if !ref_scale.is_finite() {
        return Err(Error::IntegrandBlowup("exponent not finite".into()));
    }
    let mut terms: [Vec<C64>; 3] = [Vec::with_capacity(nodes.len()), Vec::new(), Vec::new()];
    let mut abs0 = 0.0;
    for ((w, wt), e) in nodes.iter().zip(exps) {
        let v = (*e - ref_scale).exp() * *wt;
        abs0 += v.norm();
        terms[0].push(v);
        if need >= 1 {
            terms[1].push(v * *w);
        }
        if need >= 2 {
            terms[2].push(v * *w * *w);
        }
    }
    let mut m = [C64::new(0.0, 0.0); 3];
    for k in 0..=need {
        m[k] = pairwise_sum(&terms[k]);
    }
    Ok((m, ref_scale, abs0))
}

fn exponent(w: C64, z: C64, c: f64, mu: f64) -> C64 {
    -w * w - atan_principal(z + w * c) / (2.0 * mu)
}

fn hermite_moments(z: C64, c: f64, mu: f64, n: usize, need: usize) -> Result<([C64; 3], f64)> {
    let rule = hermite(n)?;
    let nodes: Vec<(C64, C64)> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .filter(|(_, w)| **w > 0.0)
        .map(|(x, w)| (C64::new(*x, 0.0), C64::new(*w, 0.0)))
        .collect();
    let exps: Vec<C64> = nodes.iter().map(|(w, _)| -atan_principal(z + *w * c) / (2.0 * mu)).collect();
    let (m, s, _) = accumulate(&nodes, &exps, need)?;
    Ok((m, s))
}

fn max_rel_change(a: &[C64; 3], sa: f64, b: &[C64; 3], sb: f64, need: usize) -> f64 {
    let f = (sa - sb).exp();
    let mut worst: f64 = 0.0;
    let scale0 = b[0].norm();
    for k in 0..=need {
        let d = (a[k] * f - b[k]).norm();
        let denom = b[k].norm().max(scale0);
        worst = worst.max(if denom > 0.0 { d / denom } else { d });
    }
    worst
}

/// Moments of the Gaussian-weighted Cole-Hopf integrand up to order `need` (at most 2).
pub fn moments(z: C64, t: f64, mu: f64, opts: &EvalOptions, need: usize) -> Result<Moments> {
    check_args(z, t, mu)?;
    let need = need.min(2);
    let c = 2.0 * (mu * t).sqrt();
    let path = contour(z, t, mu, opts);

    // Gauss-Hermite shortcut when the integrand is smooth on the Gaussian scale.
    let clearance = (1.0 - z.im.abs()) / c;
    if path.kind == ContourKind::Straight && opts.hermite_order >= 8 && clearance >= 3.0 && c / (2.0 * mu) <= 0.25 {
        let n = opts.hermite_order.min(crate::quadrature::MAX_HERMITE);
        let (a, sa) = hermite_moments(z, c, mu, n, need)?;
        let (b, sb) = hermite_moments(z, c, mu, n / 2, need)?;
        let est = max_rel_change(&b, sb, &a, sa, need);
        if est <= opts.rel_tol {
            return Ok(Moments { m: a, log_scale: sa, est_error: est, contour: path.kind });
        }
    }

    let rule = legendre(opts.legendre_order)?;
    let nseg = path.vertices.len() - 1;
    let mut panels: Vec<usize> =
        path.vertices.windows(2).map(|s| ((s[1] - s[0]).norm() / 2.0).ceil().max(1.0) as usize).collect();
    let eval = |panels: &[usize]| -> Result<([C64; 3], f64)> {
        let nodes = polyline_nodes(&path.vertices, panels, rule);
        let exps: Vec<C64> = nodes.iter().map(|(w, _)| exponent(*w, z, c, mu)).collect();
        let (m, s, _) = accumulate(&nodes, &exps, need)?;
        Ok((m, s))
    };
    let (mut prev, mut sprev) = eval(&panels)?;
    loop {
        if panels.iter().any(|p| p * 2 > opts.max_panels) {
            return Ok(Moments { m: prev, log_scale: sprev, est_error: f64::INFINITY, contour: path.kind });
        }
        for p in panels.iter_mut().take(nseg) {
            *p *= 2;
        }
        let (cur, scur) = eval(&panels)?;
        let est = max_rel_change(&prev, sprev, &cur, scur, need);
        if est <= opts.rel_tol {
            return Ok(Moments { m: cur, log_scale: scur, est_error: est, contour: path.kind });
        }
        prev = cur;
        sprev = scur;
    }
}

/// The Cole-Hopf denominator `D(z, t; mu)` with its exponential scale kept separate.
pub fn denominator_scaled(z: C64, t: f64, mu: f64, opts: &EvalOptions) -> Result<Scaled> {
    let m = moments(z, t, mu, opts, 0)?;
    let c = 2.0 * (mu * t).sqrt();
    Ok(Scaled { mant: m.m[0] * c, log_scale: m.log_scale })
}

/// The Cole-Hopf denominator `D(z, t; mu)`. Its zeros are the poles of `u`.
pub fn denominator(z: C64, t: f64, mu: f64, opts: &EvalOptions) -> Result<C64> {
    denominator_scaled(z, t, mu, opts)?
        .value()
        .ok_or_else(|| Error::Range(format!("D({z}, {t}) overflows; use denominator_scaled")))
}

const NEAR_POLE: f64 = 1e-290;

/// Exact solution `u(z, t)` of the viscous problem.
pub fn evaluate_u(z: C64, t: f64, mu: f64, opts: &EvalOptions) -> Result<C64> {
    let m = moments(z, t, mu, opts, 1)?;
    if m.m[0].norm() < NEAR_POLE {
        return Err(Error::NearPole(format!("{z}")));
    }
    let c = 2.0 * (mu * t).sqrt();
    Ok(-(c / t) * m.m[1] / m.m[0])
}

/// `u` together with its complex derivative `du/dz = (1 - 2 Var w) / t`.
pub fn evaluate_u_and_slope(z: C64, t: f64, mu: f64, opts: &EvalOptions) -> Result<(C64, C64)> {
    let m = moments(z, t, mu, opts, 2)?;
    if m.m[0].norm() < NEAR_POLE {
        return Err(Error::NearPole(format!("{z}")));
    }
    let c = 2.0 * (mu * t).sqrt();
    let mean = m.m[1] / m.m[0];
    let var = m.m[2] / m.m[0] - mean * mean;
    Ok((-(c / t) * mean, (C64::new(1.0, 0.0) - var * 2.0) / t))
}

/// Small-time expansion `u0 + t u1 + t^2 u2`, truncated after `order` corrections (0..=2).
pub fn naive_series(z: C64, t: f64, mu: f64, order: usize) -> Result<C64> {
    let one = C64::new(1.0, 0.0);
    let q = one + z * z;
    if q.norm() <= 0.1 {
        return Err(Error::TooCloseToSingularity);
    }
    let u0 = q.inv();
    let u1 = (z * 3.0 * mu * z - mu + z) * 2.0 / q.powu(3);
    let z2 = z * z;
    let m2 = mu * mu;
    let u2 = (z2 * z2 * 60.0 * m2 - z * 32.0 * mu + z2 * z * 48.0 * mu - z2 * (120.0 * m2 - 7.0) + 12.0 * m2 - 1.0)
        / q.powu(5);
    let mut u = u0;
    if order >= 1 {
        u += u1 * t;
    }
    if order >= 2 {
        u += u2 * (t * t);
    }
    Ok(u)
}

/// Two-term steepest-descent closed form
/// `(1 + 8 mu z)/(1 + z^2) - 8 mu^2 (4z^3 + 4z + t) / (4 mu z^4 + 8 mu z^2 + 4 mu t z + 4 mu + t)`.
pub fn saddle_series(z: C64, t: f64, mu: f64) -> Result<C64> {
    let one = C64::new(1.0, 0.0);
    let q = one + z * z;
    let den = z.powu(4) * (4.0 * mu) + z * z * (8.0 * mu) + z * (4.0 * mu * t) + 4.0 * mu + t;
    if q.norm() < 1e-14 || den.norm() < 1e-14 {
        return Err(Error::DenominatorZero);
    }
    let num = z.powu(3) * 4.0 + z * 4.0 + t;
    Ok((one + z * (8.0 * mu)) / q - num * (8.0 * mu * mu) / den)
}

/// `(1/2 pi i) * closed integral of f` over a circle, by the periodic trapezoid rule.
pub fn residue_probe<F>(f: F, center: C64, radius: f64, n: usize) -> Result<C64>
where
    F: Fn(C64) -> Result<C64>,
{
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..n {
        let e = C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        acc += f(center + e * radius)? * e;
    }
    Ok(acc * radius / n as f64)
}

/// Residue of `u` at `pole` measured on a small circle.
pub fn residue_of_u(pole: C64, t: f64, mu: f64, radius: f64, opts: &EvalOptions) -> Result<C64> {
    residue_probe(|z| evaluate_u(z, t, mu, opts), pole, radius, 64)
}
