use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Viscosity and, for the generalised initial data `1/(1+x^2)^beta`, the exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    pub mu: f64,
    pub beta: f64,
}

impl PhysParams {
    pub fn new(mu: f64) -> Result<Self> {
        Self::with_beta(mu, 1.0)
    }

    pub fn with_beta(mu: f64, beta: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidParameter(format!("mu = {mu} must be positive")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParameter(format!("beta = {beta} must be positive")));
        }
        Ok(Self { mu, beta })
    }
}

/// A rectangle of the complex plane sampled at cell centres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid2D {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub n_re: usize,
    pub n_im: usize,
}

impl Grid2D {
    pub fn new(re: (f64, f64), im: (f64, f64), n_re: usize, n_im: usize) -> Result<Self> {
        let g = Self { re_min: re.0, re_max: re.1, im_min: im.0, im_max: im.1, n_re, n_im };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max].iter().all(|v| v.is_finite());
        if !finite || self.re_min >= self.re_max || self.im_min >= self.im_max {
            return Err(Error::InvalidGrid("bounds must be finite with min < max".into()));
        }
        if self.n_re == 0 || self.n_im == 0 {
            return Err(Error::InvalidGrid("grid needs at least one cell per axis".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n_re * self.n_im
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Centre of cell `(row, col)`; row 0 is the top edge (largest imaginary part).
    pub fn point(&self, row: usize, col: usize) -> C64 {
        let dx = (self.re_max - self.re_min) / self.n_re as f64;
        let dy = (self.im_max - self.im_min) / self.n_im as f64;
        C64::new(self.re_min + (col as f64 + 0.5) * dx, self.im_max - (row as f64 + 0.5) * dy)
    }
}

/// Row-major list of cell centres, top row first.
pub fn build_grid(grid: &Grid2D) -> Result<Vec<C64>> {
    grid.validate()?;
    let mut pts = Vec::with_capacity(grid.len());
    for row in 0..grid.n_im {
        for col in 0..grid.n_re {
            pts.push(grid.point(row, col));
        }
    }
    Ok(pts)
}

/// `conj(f(conj(z)))`, the value a real-on-the-real-axis function must take at `z`.
pub fn schwarz_reflect<F: Fn(C64) -> C64>(f: F, z: C64) -> C64 {
    f(z.conj()).conj()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrackMethod {
    ExactRoot,
    Saddle,
    Aaa,
    InnerAsymptotic,
    LargeTime,
}

impl TrackMethod {
    pub fn label(&self) -> &'static str {
        match self {
            TrackMethod::ExactRoot => "exact",
            TrackMethod::Saddle => "saddle",
            TrackMethod::Aaa => "aaa",
            TrackMethod::InnerAsymptotic => "inner",
            TrackMethod::LargeTime => "largetime",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleSample {
    pub t: f64,
    pub z: C64,
    /// Residue of `u` at `z`, when the tracker measured one.
    pub residue: Option<C64>,
    pub converged: bool,
}

/// A pole location followed through time by one of the tracking methods.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleTrajectory {
    pub method: TrackMethod,
    pub mu: f64,
    pub samples: Vec<PoleSample>,
}

impl PoleTrajectory {
    pub fn new(method: TrackMethod, mu: f64) -> Self {
        Self { method, mu, samples: Vec::new() }
    }

    pub fn converged(&self) -> impl Iterator<Item = &PoleSample> {
        self.samples.iter().filter(|s| s.converged)
    }

    /// Linear interpolation of the converged samples at time `t`.
    pub fn at(&self, t: f64) -> Option<C64> {
        let pts: Vec<&PoleSample> = self.converged().collect();
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (lo, hi) = if a.t <= b.t { (a, b) } else { (b, a) };
            if t >= lo.t && t <= hi.t {
                if hi.t == lo.t {
                    return Some(lo.z);
                }
                let s = (t - lo.t) / (hi.t - lo.t);
                return Some(lo.z + (hi.z - lo.z) * s);
            }
        }
        pts.iter().find(|s| s.t == t).map(|s| s.z)
    }

    /// Largest gap to `other` over the sample times of `self` inside `[t0, t1]`.
    pub fn sup_distance(&self, other: &PoleTrajectory, t0: f64, t1: f64) -> Option<f64> {
        let mut worst: Option<f64> = None;
        for s in self.converged().filter(|s| s.t >= t0 - 1e-12 && s.t <= t1 + 1e-12) {
            let z = other.at(s.t)?;
            let d = (z - s.z).norm();
            worst = Some(worst.map_or(d, |w: f64| w.max(d)));
        }
        worst
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,re,im,residue_re,residue_im,converged\n");
        for s in &self.samples {
            let r = s.residue.unwrap_or(C64::new(f64::NAN, f64::NAN));
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{}\n",
                s.t, s.z.re, s.z.im, r.re, r.im, s.converged as u8
            ));
        }
        out
    }
}
