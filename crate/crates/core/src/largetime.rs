//! Large-time similarity solution `u ~ sqrt(mu/t) Psi(z / sqrt(mu t))` with
//! `Psi = 2 exp(-eta^2/4) / (sqrt(pi) (gamma - erf(eta/2)))`, and the far-field
//! geometry of its poles.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::inner::Quadrant;
use crate::specfun::{erf_c, erfc_c};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityParams {
    pub mu: f64,
    pub gamma: f64,
    /// `gamma - 1`, kept separately since it is exponentially small for small `mu`.
    pub gamma_minus_one: f64,
    pub mass: f64,
}

impl SimilarityParams {
    /// `gamma = coth(pi / 4 mu)`, fixed by the mass `pi` of the initial data.
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidParameter(format!("mu = {mu} must be positive")));
        }
        let x = PI / (4.0 * mu);
        let gm1 = 2.0 / (2.0 * x).exp_m1();
        if gm1 == 0.0 {
            return Err(Error::Range(format!("gamma - 1 underflows for mu = {mu}")));
        }
        let gamma = 1.0 + gm1;
        let mass = 2.0 * mu * ((2.0 + gm1) / gm1).ln();
        Ok(Self { mu, gamma, gamma_minus_one: gm1, mass })
    }
}

/// `G(eta) = gamma - erf(eta/2)`.
pub fn denominator(eta: C64, sp: &SimilarityParams) -> Result<C64> {
    let w = eta * 0.5;
    if w.re >= 0.0 {
        Ok(sp.gamma_minus_one + erfc_c(w)?.value)
    } else {
        Ok(sp.gamma - erf_c(w)?.value)
    }
}

pub fn psi(eta: C64, sp: &SimilarityParams) -> Result<C64> {
    let g = denominator(eta, sp)?;
    let num = (-eta * eta / 4.0).exp() * (2.0 / PI.sqrt());
    if !(num.re.is_finite() && num.im.is_finite()) {
        return Err(Error::Range(format!("exp(-eta^2/4) overflows at {eta}")));
    }
    if g.norm() <= 1e-14 * sp.gamma {
        return Err(Error::NearPole(format!("{eta}")));
    }
    Ok(num / g)
}

/// `Psi'` from the Riccati equation `2 Psi' = Psi^2 - eta Psi`.
pub fn psi_derivative(eta: C64, sp: &SimilarityParams) -> Result<C64> {
    let p = psi(eta, sp)?;
    Ok((p * p - eta * p) * 0.5)
}

pub fn u_largetime(z: C64, t: f64, mu: f64) -> Result<C64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
    }
    let sp = SimilarityParams::new(mu)?;
    let s = (mu * t).sqrt();
    Ok(psi(z / s, &sp)? * (mu / t).sqrt())
}

fn log_constant(quadrant: Quadrant, sp: &SimilarityParams) -> f64 {
    let g = match quadrant {
        Quadrant::First => sp.gamma_minus_one,
        Quadrant::Second => sp.gamma + 1.0,
    };
    (0.5 * PI.sqrt() * g).ln()
}

/// Asymptotic argument of the poles at modulus `rho`.
pub fn psi_pole_path(rho: f64, quadrant: Quadrant, sp: &SimilarityParams) -> Result<f64> {
    if !(rho >= 3.0) {
        return Err(Error::ValidityRange(format!("rho = {rho} < 3")));
    }
    let corr = 2.0 / (rho * rho) * (rho.ln() + log_constant(quadrant, sp));
    Ok(match quadrant {
        Quadrant::First => PI / 4.0 + corr,
        Quadrant::Second => 3.0 * PI / 4.0 - corr,
    })
}

/// Closed-form large-`n` approximation of `rho_n^2`.
pub fn psi_pole_modulus_seed(n: usize, quadrant: Quadrant, sp: &SimilarityParams) -> f64 {
    let nf = n as f64;
    let corr = |g: f64| ((2.0 * nf).ln() + 2.0 * (PI * g).ln()) / (2.0 * nf * PI);
    match quadrant {
        Quadrant::First => (8.0 * nf + 3.0) * PI - corr(sp.gamma_minus_one),
        Quadrant::Second => (8.0 * nf - 1.0) * PI - corr(sp.gamma + 1.0),
    }
}

/// `rho^2/4 + pi/4 + atan(2 (ln rho + c) / rho^2) - k pi`; its zeros solve
/// `-rho^2/2 tan(rho^2/4 + pi/4) = ln rho + c`.
fn moduli_residual(rho: f64, k: f64, c: f64) -> (f64, f64) {
    let r2 = rho * rho;
    let q = 2.0 * (rho.ln() + c) / r2;
    let dq = 2.0 / (rho * r2) - 4.0 * (rho.ln() + c) / (r2 * rho);
    (r2 / 4.0 + PI / 4.0 + q.atan() - k * PI, rho / 2.0 + dq / (1.0 + q * q))
}

/// Moduli `rho_n`, `n = 1..=n_max`, from the quadrant's transcendental
/// equation; entry `n - 1` holds index `n`.
pub fn psi_pole_moduli(sp: &SimilarityParams, n_max: usize, quadrant: Quadrant) -> Result<Vec<Result<f64>>> {
    if n_max > 50 {
        return Err(Error::InvalidParameter(format!("n_max = {n_max} > 50")));
    }
    let c = log_constant(quadrant, sp);
    Ok((1..=n_max)
        .map(|n| {
            let k = match quadrant {
                Quadrant::First => (2 * n + 1) as f64,
                Quadrant::Second => (2 * n) as f64,
            };
            let mut rho = psi_pole_modulus_seed(n, quadrant, sp).max(1.0).sqrt();
            for _ in 0..50 {
                let (f, df) = moduli_residual(rho, k, c);
                let step = f / df;
                rho = (rho - step).max(0.5 * rho);
                if step.abs() < 1e-14 * rho {
                    return Ok(rho);
                }
            }
            Err(Error::Convergence(format!("modulus n = {n}")))
        })
        .collect())
}

/// `r` with `r^2 / 4 mu t = (2n + 3/4) pi` (first quadrant) or `(2n - 1/4) pi` (second).
pub fn antistokes_radius(n: usize, t: f64, mu: f64, quadrant: Quadrant) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let shift = match quadrant {
        Quadrant::First => 0.75,
        Quadrant::Second => -0.25,
    };
    Ok((4.0 * mu * t * PI * (2.0 * n as f64 + shift)).sqrt())
}

/// Zero of `G` near `seed` by Newton's method, `G' = -exp(-eta^2/4) / sqrt(pi)`.
pub fn find_psi_pole(seed: C64, sp: &SimilarityParams) -> Result<C64> {
    let mut eta = seed;
    for _ in 0..60 {
        let g = denominator(eta, sp)?;
        let dg = -(-eta * eta / 4.0).exp() / PI.sqrt();
        let mut step = g / dg;
        if step.norm() > 0.5 {
            step *= 0.5 / step.norm();
        }
        eta -= step;
        if (eta - seed).norm() > 2.0 {
            break;
        }
        if step.norm() < 1e-14 * eta.norm().max(1.0) {
            let g = denominator(eta, sp)?;
            if g.norm() <= 1e-12 * sp.gamma.max(1.0) {
                return Ok(eta);
            }
        }
    }
    Err(Error::Convergence(format!("no zero of G near {seed}")))
}
