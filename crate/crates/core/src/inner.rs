//! Small-time inner problem at `z = i`.
//!
//! With `z = i + t^{1/2} xi` and `u ~ t^{-1/2} Phi0(xi)`, the leading order
//! satisfies the Riccati equation `Phi0^2 - xi Phi0 - 2mu Phi0' = i/2` with
//! `Phi0 ~ -i/(2 xi)` towards the real `z` direction. Its solution is a ratio
//! of parabolic cylinder functions,
//! `Phi0 = U(1/2 - i/4mu, w) / (2 sqrt(2mu) U(-1/2 - i/4mu, w))`, `w = i xi / sqrt(2mu)`.
//!
//! Poles of `Phi0` are zeros of the denominator. Far from the origin they
//! line up along the anti-Stokes rays `arg xi = pi/4, 3pi/4`, and their moduli
//! are approximated by transcendental equations.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::specfun::{gamma_c, kummer_u, pcf_u};
use crate::C64;

/// Smallest viscosity for which the double-precision evaluators are trusted.
pub const MU_MIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrant {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleSource {
    RootFind,
    Transcendental,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerPole {
    pub xi: C64,
    pub n: usize,
    pub quadrant: Quadrant,
    pub source: PoleSource,
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu.is_finite() && mu >= MU_MIN) {
        return Err(Error::InvalidParameter(format!("mu = {mu} below {MU_MIN}")));
    }
    Ok(())
}

fn orders(mu: f64) -> (C64, C64) {
    let b = -0.25 / mu;
    (C64::new(-0.5, b), C64::new(0.5, b))
}

fn pcf_arg(xi: C64, mu: f64) -> C64 {
    C64::new(0.0, 1.0) * xi / (2.0 * mu).sqrt()
}

/// `U(-1/2 - i/4mu, i xi / sqrt(2mu))`; its zeros are the poles of `Phi0`.
pub fn phi0_denominator(xi: C64, mu: f64) -> Result<C64> {
    check_mu(mu)?;
    Ok(pcf_u(orders(mu).0, pcf_arg(xi, mu))?.value)
}

/// Leading-order inner solution.
pub fn phi0(xi: C64, mu: f64) -> Result<C64> {
    check_mu(mu)?;
    let (a0, a1) = orders(mu);
    let w = pcf_arg(xi, mu);
    let den = pcf_u(a0, w)?.value;
    let num = pcf_u(a1, w)?.value;
    if den.norm() <= 1e-14 * num.norm() {
        return Err(Error::NearPole(format!("xi = {xi}")));
    }
    Ok(num / den / (2.0 * (2.0 * mu).sqrt()))
}

/// `Phi0'` from the Riccati equation.
pub fn phi0_derivative(xi: C64, mu: f64) -> Result<C64> {
    let p = phi0(xi, mu)?;
    Ok((p * p - xi * p - C64::new(0.0, 0.5)) / (2.0 * mu))
}

/// Same solution written with Kummer's `U`:
/// `(i xi / 8mu) U(1 - i/8mu, 3/2, -xi^2/4mu) / U(-i/8mu, 1/2, -xi^2/4mu)`.
///
/// The principal branch of `U` in `-xi^2/4mu` reproduces [`phi0`] in the lower
/// half plane `Im xi < 0` only.
pub fn phi0_kummer(xi: C64, mu: f64) -> Result<C64> {
    check_mu(mu)?;
    let a = C64::new(0.0, -0.125 / mu);
    let zeta = -xi * xi / (4.0 * mu);
    let num = kummer_u(a + 1.0, C64::new(1.5, 0.0), zeta)?.value;
    let den = kummer_u(a, C64::new(0.5, 0.0), zeta)?.value;
    if den.norm() <= 1e-14 * num.norm() {
        return Err(Error::NearPole(format!("xi = {xi}")));
    }
    Ok(C64::new(0.0, 0.125 / mu) * xi * num / den)
}

/// Coefficients of `Phi0 ~ residue/(xi - xs) + constant + linear (xi - xs)`.
///
/// Matching powers in the Riccati equation gives `-2mu`, `xs/2` and
/// `(8mu - xs^2 - 2i)/(24mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalPole {
    pub residue: C64,
    pub constant: C64,
    pub linear: C64,
}

/// Local expansion at a pole `xs`, after checking by a contour probe that `xs` is one.
pub fn phi0_local_pole(xs: C64, mu: f64) -> Result<LocalPole> {
    check_mu(mu)?;
    let n = 64;
    let r = 1e-3;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..n {
        let e = C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        acc += phi0(xs + e * r, mu)? * e;
    }
    let residue = acc * r / n as f64;
    if (residue + 2.0 * mu).norm() > 0.05 * 2.0 * mu {
        return Err(Error::NotAPole(format!("residue {residue} at {xs}")));
    }
    Ok(LocalPole {
        residue: C64::new(-2.0 * mu, 0.0),
        constant: xs / 2.0,
        linear: (C64::new(8.0 * mu, -2.0) - xs * xs) / (24.0 * mu),
    })
}

/// `alpha = arg Gamma(-i/4mu)`, so `1/Gamma(-i/4mu) = |.| e^{-i alpha}`.
pub fn alpha(mu: f64) -> Result<f64> {
    Ok(gamma_c(C64::new(0.0, -0.25 / mu))?.value.arg())
}

/// Modulus `2 sqrt(mu pi) e^{pi/8} / |Gamma(-i/4mu)|` of `Phi0` on `arg xi = pi/4`.
pub fn antistokes_modulus(mu: f64) -> f64 {
    let y = 0.25 / mu;
    let inv_gamma = (y * (PI * y).sinh() / PI).sqrt();
    2.0 * (mu * PI).sqrt() * (PI / 8.0).exp() * inv_gamma
}

const SECTOR_TOL: f64 = 1e-3;

/// Leading far-field behaviour of `Phi0`, chosen by the sector of `arg xi`.
///
/// Within `1e-3` rad of an anti-Stokes ray the oscillatory form is returned.
pub fn phi0_farfield(xi: C64, mu: f64) -> Result<C64> {
    check_mu(mu)?;
    let r = xi.norm();
    if r < 5.0 {
        return Err(Error::InvalidParameter(format!("|xi| = {r} < 5")));
    }
    let th = xi.arg();
    let i = C64::new(0.0, 1.0);
    let g = gamma_c(C64::new(0.0, -0.25 / mu))?.value;
    let pref = i * 2.0 * (mu * PI).sqrt() / g;
    if (th - FRAC_PI_4).abs() < SECTOR_TOL {
        let ph = -(r * r + 2.0 * r.ln() - (2.0 * mu).ln()) / (4.0 * mu);
        return Ok(pref * (PI / 8.0).exp() * C64::from_polar(1.0, ph));
    }
    if (th - 3.0 * FRAC_PI_4).abs() < SECTOR_TOL {
        let ph = (r * r - 2.0 * r.ln() + (2.0 * mu).ln()) / (4.0 * mu);
        return Ok(pref * (-PI / 8.0).exp() * C64::from_polar(1.0, ph));
    }
    if th > FRAC_PI_4 && th < 3.0 * FRAC_PI_4 {
        Ok(xi)
    } else {
        Ok(-i / (2.0 * xi))
    }
}

fn log_sinh_term(rho: f64, mu: f64) -> f64 {
    // ln rho - pi/8mu - (1/2) ln sinh(pi/4mu), with ln sinh evaluated stably.
    let x = PI / (4.0 * mu);
    let ln_sinh = x + (-(-2.0 * x).exp()).ln_1p() - 2f64.ln();
    rho.ln() - PI / (8.0 * mu) - 0.5 * ln_sinh
}

/// Asymptotic argument of the poles near the anti-Stokes ray of the quadrant.
pub fn pole_path_angle(rho: f64, quadrant: Quadrant, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    if !(rho >= 2.0) {
        return Err(Error::InvalidParameter(format!("rho = {rho} < 2")));
    }
    let l = log_sinh_term(rho, mu);
    Ok(match quadrant {
        Quadrant::First => FRAC_PI_4 + 2.0 * mu / (rho * rho + 1.0) * l,
        Quadrant::Second => {
            // -ln rho - pi/8mu + (1/2) ln sinh = -(l) - pi/4mu
            let l2 = -l - PI / (4.0 * mu);
            3.0 * FRAC_PI_4 + 2.0 * mu / (rho * rho - 1.0) * l2
        }
    })
}

/// Phase `Theta(rho)` inside the transcendental equation, and the target
/// `Theta = k pi + atan(.)` it has to hit on the branch with `cos Theta = -1`.
fn moduli_residual(rho: f64, k: f64, quadrant: Quadrant, mu: f64, al: f64) -> f64 {
    let l = log_sinh_term(rho, mu);
    let lr = rho.ln();
    let l2m = (2.0 * mu).ln();
    match quadrant {
        Quadrant::First => {
            let th = (rho * rho + 2.0 * lr - l2m) / (4.0 * mu) - FRAC_PI_4 + al;
            th - (-2.0 * mu * l / (rho * rho + 1.0)).atan() - k * PI
        }
        Quadrant::Second => {
            let th = (2.0 * lr - rho * rho - l2m) / (4.0 * mu) + FRAC_PI_4 + al;
            th - (2.0 * mu * l / (rho * rho - 1.0)).atan() - k * PI
        }
    }
}

/// Moduli of the poles `n = 1..=n_max` predicted by the transcendental
/// equation of the quadrant. Entry `n - 1` holds the result for index `n`;
/// index 0 is the lowest pole of the quadrant.
pub fn pole_moduli(mu: f64, n_max: usize, quadrant: Quadrant) -> Result<Vec<Result<f64>>> {
    check_mu(mu)?;
    if n_max > 50 {
        return Err(Error::InvalidParameter(format!("n_max = {n_max} > 50")));
    }
    let al = alpha(mu)?;
    Ok((1..=n_max).map(|n| solve_modulus(mu, n, quadrant, al)).collect())
}

fn solve_modulus(mu: f64, n: usize, quadrant: Quadrant, al: f64) -> Result<f64> {
    let (k, sign) = match quadrant {
        Quadrant::First => ((2 * n + 1) as f64, 1.0),
        Quadrant::Second => (-((2 * n + 1) as f64), -1.0),
    };
    let f = |r: f64| sign * moduli_residual(r, k, quadrant, mu, al);
    let seed = (8.0 * n as f64 * mu * PI).sqrt();
    let lo_min = match quadrant {
        Quadrant::First => 0.5,
        Quadrant::Second => 1.5,
    };
    // The residual increases with rho (after the sign flip); bracket around the seed.
    let (mut lo, mut hi) = (seed.max(lo_min), seed.max(lo_min));
    let mut grow = 0.25;
    while f(lo) > 0.0 {
        lo = (lo - grow).max(lo_min);
        grow *= 2.0;
        if lo == lo_min && f(lo) > 0.0 {
            return Err(Error::Convergence(format!("no modulus for n = {n} above {lo_min}")));
        }
    }
    grow = 0.25;
    while f(hi) < 0.0 {
        hi += grow;
        grow *= 2.0;
        if hi > 1e3 {
            return Err(Error::Convergence(format!("no modulus for n = {n}")));
        }
    }
    let (mut flo, mut r) = (f(lo), 0.5 * (lo + hi));
    for _ in 0..200 {
        r = 0.5 * (lo + hi);
        let fr = f(r);
        if (fr < 0.0) == (flo < 0.0) {
            lo = r;
            flo = fr;
        } else {
            hi = r;
        }
        if hi - lo < 1e-14 * hi {
            break;
        }
    }
    Ok(r)
}

/// Pole positions `rho e^{i theta(rho)}` predicted by the transcendental equations.
pub fn transcendental_poles(mu: f64, n_max: usize, quadrant: Quadrant) -> Result<Vec<InnerPole>> {
    let moduli = pole_moduli(mu, n_max, quadrant)?;
    let mut out = Vec::new();
    for (i, m) in moduli.into_iter().enumerate() {
        if let Ok(rho) = m {
            if rho < 2.0 {
                continue;
            }
            let th = pole_path_angle(rho, quadrant, mu)?;
            out.push(InnerPole { xi: C64::from_polar(rho, th), n: i + 1, quadrant, source: PoleSource::Transcendental });
        }
    }
    Ok(out)
}

fn inv_phi0(xi: C64, mu: f64) -> Result<C64> {
    let (a0, a1) = orders(mu);
    let w = pcf_arg(xi, mu);
    let den = pcf_u(a0, w)?.value;
    let num = pcf_u(a1, w)?.value;
    Ok(den / num * (2.0 * (2.0 * mu).sqrt()))
}

/// Newton iteration on `1/Phi0` with a central-difference derivative.
pub fn refine_pole(seed: C64, mu: f64) -> Result<C64> {
    check_mu(mu)?;
    let h = 1e-6;
    let mut xi = seed;
    let mut g = inv_phi0(xi, mu)?;
    let tol = 1e-11 * xi.norm().max(1.0);
    for _ in 0..60 {
        let dg = (inv_phi0(xi + h, mu)? - inv_phi0(xi - h, mu)?) / (2.0 * h);
        if dg.norm() == 0.0 {
            break;
        }
        let full = g / dg;
        if full.norm() < tol {
            return Ok(xi - full);
        }
        let mut step = full;
        let mut accepted = false;
        for _ in 0..8 {
            let trial = xi - step;
            if let Ok(gt) = inv_phi0(trial, mu) {
                if gt.norm() < g.norm() {
                    xi = trial;
                    g = gt;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            // |g| is at its noise floor; accept if the Newton step is already tiny.
            if full.norm() < 1e-7 * xi.norm().max(1.0) {
                return Ok(xi);
            }
            break;
        }
    }
    Err(Error::Convergence(format!("pole search from {seed} stalled at {xi}")))
}

/// Lowest pole at viscosity 1.
const XI0_AT_ONE: C64 = C64::new(1.606986, 2.327280);

/// Pole of `Phi0` continued in `mu` from the lowest one at `mu = 1`.
pub fn lowest_pole(mu: f64) -> Result<C64> {
    if !(MU_MIN..=5.0).contains(&mu) {
        return Err(Error::InvalidParameter(format!("mu = {mu} outside [0.05, 5]")));
    }
    let steps = ((mu.ln().abs() / 0.05).ceil() as usize).max(1);
    let mut cur = (1.0, refine_pole(XI0_AT_ONE, 1.0)?);
    let mut prev: Option<(f64, C64)> = None;
    for k in 1..=steps {
        let m = (mu.ln() * k as f64 / steps as f64).exp();
        // Linear extrapolation in mu for the next seed.
        let seed = match prev {
            Some((mp, xp)) => cur.1 + (cur.1 - xp) * ((m - cur.0) / (cur.0 - mp)),
            None => cur.1,
        };
        let next = refine_pole(seed, m).or_else(|_| refine_pole(cur.1, m))?;
        prev = Some(cur);
        cur = (m, next);
    }
    Ok(cur.1)
}

/// Viscosity at which the lowest pole crosses the real `xi` axis.
pub fn critical_mu() -> Result<f64> {
    let (mut lo, mut hi) = (0.1, 0.3);
    let f = |m: f64| lowest_pole(m).map(|x| x.im);
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo >= 0.0 || fhi <= 0.0 {
        return Err(Error::Convergence("Im xi0 does not change sign on [0.1, 0.3]".into()));
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StokesRegion {
    BelowAntiStokes,
    BetweenWedge,
}

/// Whether `z` lies in the wedge `pi/4 < arg(z - i) < 3pi/4`, where the naive
/// small-time expansion does not hold.
pub fn stokes_flags(z: C64) -> Result<StokesRegion> {
    let d = z - C64::new(0.0, 1.0);
    if d.norm() == 0.0 {
        return Err(Error::InvalidParameter("z = i".into()));
    }
    let a = d.arg();
    Ok(if a > FRAC_PI_4 && a < 3.0 * FRAC_PI_4 { StokesRegion::BetweenWedge } else { StokesRegion::BelowAntiStokes })
}

/// Number of zeros of an analytic `f` inside a closed polygon (counter-clockwise),
/// from the accumulated change in `arg f` along the boundary.
pub fn winding_count<F>(f: F, vertices: &[C64]) -> Result<i64>
where
    F: Fn(C64) -> Result<C64>,
{
    let n = vertices.len();
    if n < 3 {
        return Err(Error::InvalidParameter("polygon needs three vertices".into()));
    }
    let mut total = 0.0;
    for k in 0..n {
        let (a, b) = (vertices[k], vertices[(k + 1) % n]);
        total += arg_change(&f, a, b, f(a)?, f(b)?, 0)?;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

fn arg_change<F>(f: &F, a: C64, b: C64, fa: C64, fb: C64, depth: usize) -> Result<f64>
where
    F: Fn(C64) -> Result<C64>,
{
    let d = (fb / fa).arg();
    if depth < 40 && (d.abs() > FRAC_PI_2 / 2.0 || depth < 3) {
        let m = (a + b) / 2.0;
        let fm = f(m)?;
        return Ok(arg_change(f, a, m, fa, fm, depth + 1)? + arg_change(f, m, b, fm, fb, depth + 1)?);
    }
    if depth >= 40 {
        return Err(Error::Convergence(format!("zero on the contour near {a}")));
    }
    Ok(d)
}

/// Poles of `Phi0` inside a polygon, counted as zeros of its denominator.
pub fn count_poles(mu: f64, vertices: &[C64]) -> Result<i64> {
    check_mu(mu)?;
    winding_count(|xi| phi0_denominator(xi, mu), vertices)
}
