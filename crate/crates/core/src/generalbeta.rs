//! Small-time predictors for the initial data `1/(1+x^2)^beta`, `beta != 1`,
//! near `z = i` where `u0 ~ A/(x - i)^beta`, `A = (-i/2)^beta`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::{airy_ai_zeros, gamma_c, pcf_u};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    DiffusionDominated,
    Borderline,
    AdvectionDominated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaRegime {
    pub beta: f64,
    pub regime: Regime,
}

impl BetaRegime {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta = {beta} must be positive")));
        }
        let regime = if beta < 1.0 {
            Regime::DiffusionDominated
        } else if beta > 1.0 {
            Regime::AdvectionDominated
        } else {
            Regime::Borderline
        };
        Ok(Self { beta, regime })
    }

    /// Order of the stronger singularity of `t u1` at `x = i`.
    pub fn dominant_order(&self) -> f64 {
        (self.beta + 2.0).max(2.0 * self.beta + 1.0)
    }
}

/// `A = (-i/2)^beta`, principal branch.
pub fn amplitude(beta: f64) -> C64 {
    C64::new(0.0, -0.5).powf(beta)
}

/// `K = i A sqrt(2 pi) (2 mu)^(1/2 - beta) / Gamma(beta)`.
pub fn far_constant(beta: f64, mu: f64) -> Result<C64> {
    let g = gamma_c(C64::new(beta, 0.0))?.value;
    Ok(C64::i() * amplitude(beta) * (2.0 * PI).sqrt() * (2.0 * mu).powf(0.5 - beta) / g)
}

/// The two terms of `u1` near `x = i`: diffusive `mu beta (beta+1) A/(x-i)^(beta+2)`
/// and advective `beta A^2/(x-i)^(2 beta+1)`.
pub fn u1_terms(x: C64, mu: f64, beta: f64) -> (C64, C64) {
    let a = amplitude(beta);
    let d = x - C64::i();
    (a * mu * beta * (beta + 1.0) / d.powf(beta + 2.0), a * a * beta / d.powf(2.0 * beta + 1.0))
}

fn check_lt1(mu: f64, beta: f64) -> Result<()> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("mu = {mu} must be positive")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParameter(format!("beta = {beta} outside (0, 1)")));
    }
    Ok(())
}

/// `Phi0 = A (-2 mu)^(-beta/2) exp(-xi^2/8mu) U(beta - 1/2, i xi / sqrt(2 mu))`,
/// with `(-2 mu)^(-beta/2) = (2 mu)^(-beta/2) exp(i pi beta / 2)`.
pub fn beta_lt1_inner(xi: C64, mu: f64, beta: f64) -> Result<C64> {
    check_lt1(mu, beta)?;
    let pre = amplitude(beta) * (2.0 * mu).powf(-beta / 2.0) * C64::from_polar(1.0, PI * beta / 2.0);
    let w = C64::i() * xi / (2.0 * mu).sqrt();
    let u = pcf_u(C64::new(beta - 0.5, 0.0), w)?.value;
    let v = pre * (-xi * xi / (8.0 * mu)).exp() * u;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Range(format!("Phi0 overflows at {xi}")));
    }
    Ok(v)
}

/// Poles of `F0 = i / (1 - exp(iX) / (i^beta K))`: `X_n = -i log(i^beta K) + 2 pi n`.
pub fn rescaled_poles(beta: f64, mu: f64, n: i64) -> Result<C64> {
    let k = far_constant(beta, mu)?;
    let ib = C64::i().powf(beta);
    Ok(-C64::i() * (ib * k).ln() + 2.0 * PI * n as f64)
}

/// Pole locations `s(t)` for `0 < beta < 1` from the rescaled inner problem.
pub fn beta_lt1_poles(t: f64, mu: f64, beta: f64, n_range: std::ops::RangeInclusive<i64>) -> Result<Vec<C64>> {
    check_lt1(mu, beta)?;
    if !(t > 0.0 && t < 0.1) {
        return Err(Error::InvalidParameter(format!("t = {t} outside (0, 0.1)")));
    }
    let l = (1.0 / t).ln();
    let cap = l / 4.0;
    let i = C64::i();
    let b = 1.0 - beta;
    let mut out = Vec::new();
    for n in n_range {
        if n.unsigned_abs() as f64 > cap {
            return Err(Error::ValidityRange(format!("|n| = {} exceeds ln(1/t)/4 = {cap:.3}", n.abs())));
        }
        let x = rescaled_poles(beta, mu, n)?;
        let xi = i * (2.0 * mu * b * l).sqrt()
            + i * (2.0 - beta) * mu.sqrt() / (2.0 * b).sqrt() * (l.ln() + (2.0 * mu * b).ln()) / l.sqrt()
            + x * (2.0 * mu / b).sqrt() / l.sqrt();
        out.push(i + xi * t.sqrt());
    }
    Ok(out)
}

pub fn beta_half_poles(t: f64, mu: f64, n_range: std::ops::RangeInclusive<i64>) -> Result<Vec<C64>> {
    beta_lt1_poles(t, mu, 0.5, n_range)
}

/// Branch points `xi0 = (1 + beta) (A / beta^beta)^(1/(beta+1))` of the
/// advective inner solution, one per root, for integer `beta >= 2`.
pub fn advection_branch_points(beta: u32) -> Result<Vec<C64>> {
    if beta < 2 {
        return Err(Error::InvalidParameter(format!("beta = {beta} must be at least 2")));
    }
    let b = beta as f64;
    let base = amplitude(b) / b.powf(b);
    let m = beta + 1;
    let r = base.norm().powf(1.0 / m as f64);
    let th = base.arg();
    Ok((0..m).map(|k| C64::from_polar(r * (1.0 + b), (th + 2.0 * PI * k as f64) / m as f64)).collect())
}

/// The three branch points for `beta = 2`: `-3/16^(1/3)` and `3 exp(+-i pi/3)/16^(1/3)`.
pub fn beta2_branch_points() -> [C64; 3] {
    let p = advection_branch_points(2).expect("beta = 2 is valid");
    [p[0], p[1], p[2]]
}

/// Branch of `lambda^(2/3)` used at `xi0`: of the three cube roots of
/// `lambda^2 = beta xi0 / (2 mu^2 (beta+1)^2)`, the one sending the Airy zeros
/// (negative reals) in the direction closest to `+i`.
pub fn lambda_two_thirds(xi0: C64, mu: f64, beta: f64) -> Result<C64> {
    let l2 = xi0 * beta / (2.0 * mu * mu * (beta + 1.0).powi(2));
    let r = l2.norm().cbrt();
    let mut best: Vec<(f64, C64)> = (0..3)
        .map(|k| {
            let root = C64::from_polar(r, (l2.arg() + 2.0 * PI * k as f64) / 3.0);
            let dir = (C64::new(-1.0, 0.0) / root).arg();
            let off = (dir - PI / 2.0).abs();
            (off.min(2.0 * PI - off), root)
        })
        .collect();
    best.sort_by(|a, b| a.0.total_cmp(&b.0));
    if (best[1].0 - best[0].0).abs() < 1e-9 {
        return Err(Error::BranchAmbiguity);
    }
    Ok(best[0].1)
}

/// `s(t) ~ i + t^(1/3) xi0 + t^(5/9) X0` for `beta = 2`, with
/// `lambda^(2/3) X0` running over the first `k_max` Airy zeros.
pub fn beta2_poles(t: f64, mu: f64, k_max: usize) -> Result<Vec<Vec<C64>>> {
    if !(t > 0.0 && t <= 0.05) {
        return Err(Error::InvalidParameter(format!("t = {t} outside (0, 0.05]")));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("mu = {mu} must be positive")));
    }
    if k_max > 20 {
        return Err(Error::InvalidParameter(format!("k_max = {k_max} > 20")));
    }
    let zeros = airy_ai_zeros(k_max)?;
    let mut out = Vec::with_capacity(3);
    for xi0 in beta2_branch_points() {
        let lam = lambda_two_thirds(xi0, mu, 2.0)?;
        out.push(zeros.iter().map(|&a| C64::i() + xi0 * t.cbrt() + a / lam * t.powf(5.0 / 9.0)).collect());
    }
    Ok(out)
}

/// Local square-root form of the advective inner solution near `xi0`.
pub fn advection_local(xi: C64, xi0: C64, beta: f64) -> C64 {
    xi0 / (beta + 1.0) - (2.0 * beta).sqrt() * xi0.sqrt() / (beta + 1.0) * (xi - xi0).sqrt()
}
