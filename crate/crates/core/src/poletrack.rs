//! Following the pole of `u` closest to the real axis in time.
//!
//! Two models of the denominator are available: the exact Cole-Hopf integral
//! and its two-saddle steepest-descent approximation
//! `D ~ sqrt(2 mu pi) sum_j |h''(s_j)|^{-1/2} exp(i delta_j + h(s_j)/mu)`
//! with `h(s) = -arctan(s)/2 - (z - s)^2/(4t)`. Saddles solve
//! `s^3 - z s^2 + s + t - z = 0`.

use std::f64::consts::PI;

use crate::colehopf::{denominator_scaled, evaluate_u, residue_of_u, EvalOptions};
use crate::error::{Error, Result};
use crate::parallel::map_slice;
use crate::specfun::atan_principal;
use crate::types::{PoleSample, PoleTrajectory, TrackMethod};
use crate::C64;

/// Roots of `a s^3 + b s^2 + c s + d` by Cardano, each polished by Newton.
pub fn cubic_roots(a: C64, b: C64, c: C64, d: C64) -> [C64; 3] {
    let (b, c, d) = (b / a, c / a, d / a);
    let p = c - b * b / 3.0;
    let q = b * b * b * (2.0 / 27.0) - b * c / 3.0 + d;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let mut w = -q / 2.0 + disc;
    if w.norm() < (-q / 2.0 - disc).norm() {
        w = -q / 2.0 - disc;
    }
    let u = w.cbrt();
    let omega = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let mut roots = [C64::new(0.0, 0.0); 3];
    for (k, r) in roots.iter_mut().enumerate() {
        let uk = u * omega.powi(k as i32);
        let y = if uk.norm() == 0.0 { C64::new(0.0, 0.0) } else { uk - p / (uk * 3.0) };
        *r = y - b / 3.0;
    }
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let f = ((*r + b) * *r + c) * *r + d;
            let df = (*r * 3.0 + b * 2.0) * *r + c;
            if df.norm() == 0.0 {
                break;
            }
            *r -= f / df;
        }
    }
    roots
}

/// `h(s) = -arctan(s)/2 - (z - s)^2 / 4t` on the principal sheet.
pub fn saddle_h(s: C64, z: C64, t: f64) -> C64 {
    -atan_principal(s) * 0.5 - (z - s) * (z - s) / (4.0 * t)
}

pub fn saddle_h2(s: C64, t: f64) -> C64 {
    let q = C64::new(1.0, 0.0) + s * s;
    s / (q * q) - 1.0 / (2.0 * t)
}

/// The three saddles of `h`, their `h` values, the dominant pair and the
/// crossing angles of that pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleSet {
    pub roots: [C64; 3],
    pub h_values: [C64; 3],
    pub selected_pair: (usize, usize),
    pub angles: [f64; 2],
}

/// Crossing angle with `sin(2 delta + alpha) = 0`, `cos(2 delta + alpha) < 0`, `cos delta > 0`.
pub fn descent_angle(h2: C64) -> f64 {
    let alpha = h2.arg();
    let d1 = -alpha / 2.0 + PI / 2.0;
    let d2 = -alpha / 2.0 + 3.0 * PI / 2.0;
    if d1.cos() > 0.0 {
        d1
    } else {
        d2
    }
}

pub fn saddle_points(z: C64, t: f64) -> Result<SaddleSet> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
    }
    let one = C64::new(1.0, 0.0);
    let roots = cubic_roots(one, -z, one, C64::new(t, 0.0) - z);
    let h_values = roots.map(|s| saddle_h(s, z, t));
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let gap = |&(i, j): &(usize, usize)| (h_values[i].re - h_values[j].re).abs();
    let best = pairs.iter().map(gap).fold(f64::INFINITY, f64::min);
    let tied: Vec<&(usize, usize)> = pairs.iter().filter(|p| gap(p) == best).collect();
    let selected_pair = if tied.len() > 1 {
        // All three equal: take a pair containing the largest Re h.
        let top = (0..3).max_by(|&a, &b| h_values[a].re.total_cmp(&h_values[b].re)).unwrap_or(0);
        **tied.iter().find(|p| p.0 == top || p.1 == top).unwrap_or(&tied[0])
    } else {
        *tied[0]
    };
    let mut angles = [0.0; 2];
    for (k, &j) in [selected_pair.0, selected_pair.1].iter().enumerate() {
        let h2 = saddle_h2(roots[j], t);
        if h2.norm() < 1e-12 {
            return Err(Error::DegenerateSaddle(h2.norm()));
        }
        angles[k] = descent_angle(h2);
    }
    Ok(SaddleSet { roots, h_values, selected_pair, angles })
}

/// Two-saddle approximation `mant * exp(log_scale)` of the denominator.
pub fn saddle_denominator_scaled(z: C64, t: f64, mu: f64) -> Result<(C64, f64)> {
    let set = saddle_points(z, t)?;
    let idx = [set.selected_pair.0, set.selected_pair.1];
    let scale = idx.iter().map(|&j| set.h_values[j].re / mu).fold(f64::NEG_INFINITY, f64::max);
    let mut acc = C64::new(0.0, 0.0);
    for (k, &j) in idx.iter().enumerate() {
        let h2 = saddle_h2(set.roots[j], t).norm();
        let e = C64::new(0.0, set.angles[k]) + set.h_values[j] / mu - scale;
        acc += e.exp() / h2.sqrt();
    }
    Ok((acc * (2.0 * mu * PI).sqrt(), scale))
}

pub fn saddle_denominator(z: C64, t: f64, mu: f64) -> Result<C64> {
    let (m, s) = saddle_denominator_scaled(z, t, mu)?;
    let v = m * s.exp();
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Range(format!("saddle denominator at {z} overflows")));
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenominatorModel {
    ExactRoot,
    Saddle,
}

impl DenominatorModel {
    pub fn method(&self) -> TrackMethod {
        match self {
            DenominatorModel::ExactRoot => TrackMethod::ExactRoot,
            DenominatorModel::Saddle => TrackMethod::Saddle,
        }
    }
}

const FD_STEP: f64 = 1e-7;
const MAX_HALVINGS: usize = 8;
const MAX_NEWTON: usize = 40;
const MAX_FAILURES: usize = 3;

struct Model<'a> {
    kind: DenominatorModel,
    t: f64,
    mu: f64,
    opts: &'a EvalOptions,
}

impl Model<'_> {
    /// `ln |D(z)|`.
    fn log_abs(&self, z: C64) -> Result<f64> {
        match self.kind {
            DenominatorModel::ExactRoot => {
                let d = denominator_scaled(z, self.t, self.mu, self.opts)?;
                Ok(d.mant.norm().ln() + d.log_scale)
            }
            DenominatorModel::Saddle => {
                let (m, s) = saddle_denominator_scaled(z, self.t, self.mu)?;
                Ok(m.norm().ln() + s)
            }
        }
    }

    /// Newton step `D / D'`.
    fn newton_step(&self, z: C64) -> Result<C64> {
        match self.kind {
            // D'/D = -u / 2mu.
            DenominatorModel::ExactRoot => {
                let u = evaluate_u(z, self.t, self.mu, self.opts)?;
                Ok(-u.inv() * (2.0 * self.mu))
            }
            DenominatorModel::Saddle => {
                let (m0, s0) = saddle_denominator_scaled(z, self.t, self.mu)?;
                let at = |w: C64| -> Result<C64> {
                    let (m, s) = saddle_denominator_scaled(w, self.t, self.mu)?;
                    Ok(m * (s - s0).exp())
                };
                let d = (at(z + FD_STEP)? - at(z - FD_STEP)?) / (2.0 * FD_STEP);
                if d.norm() == 0.0 {
                    return Err(Error::Convergence("zero derivative".into()));
                }
                Ok(m0 / d)
            }
        }
    }
}

/// Damped Newton on the chosen model; `Ok((z, converged))`.
/// Newton iterates further than this from the seed are abandoned.
const MAX_WANDER: f64 = 4.0;

fn newton(model: &Model, seed: C64) -> (C64, bool) {
    let mut z = seed;
    let Ok(mut f) = model.log_abs(z) else { return (z, false) };
    for _ in 0..MAX_NEWTON {
        let Ok(full) = model.newton_step(z) else { return (z, false) };
        if !(full.re.is_finite() && full.im.is_finite()) {
            return (z, false);
        }
        if full.norm() < 1e-12 * z.norm().max(1.0) {
            return (z - full, true);
        }
        let mut step = full;
        let mut moved = false;
        for _ in 0..=MAX_HALVINGS {
            let trial = z - step;
            if let Ok(ft) = model.log_abs(trial) {
                if ft < f {
                    z = trial;
                    f = ft;
                    moved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (z - seed).norm() > MAX_WANDER {
            return (z, false);
        }
        if !moved {
            // At the noise floor of |D| a tiny full step still means convergence.
            return (z, full.norm() < 1e-8 * z.norm().max(1.0));
        }
    }
    (z, false)
}

/// Root of the model denominator near `seed` at a single time.
pub fn locate_pole(kind: DenominatorModel, z: C64, t: f64, mu: f64) -> Result<C64> {
    let opts = EvalOptions::default();
    let model = Model { kind, t, mu, opts: &opts };
    match newton(&model, z) {
        (p, true) => Ok(p),
        (p, false) => Err(Error::Convergence(format!("no root near {z} (stopped at {p})"))),
    }
}

/// Follow a pole from `t_start` towards `t_end` in steps of `dt`.
///
/// Each step is seeded by linear extrapolation of the last two converged
/// positions. Tracking stops after three consecutive failed steps.
pub fn track_pole(kind: DenominatorModel, mu: f64, t_start: f64, t_end: f64, dt: f64, seed: C64) -> Result<PoleTrajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("dt = {dt} must be positive")));
    }
    if !(mu > 0.0 && t_start > 0.0 && t_end > 0.0) {
        return Err(Error::InvalidParameter("mu and times must be positive".into()));
    }
    let opts = EvalOptions::default();
    let dir = if t_end >= t_start { 1.0 } else { -1.0 };
    let steps = ((t_end - t_start).abs() / dt + 1e-9).floor() as usize;
    let mut traj = PoleTrajectory::new(kind.method(), mu);

    let model = Model { kind, t: t_start, mu, opts: &opts };
    let (z0, ok) = newton(&model, seed);
    if !ok || (z0 - seed).norm() > 0.3 {
        return Err(Error::SeedRejected(format!("no pole within 0.3 of {seed} at t = {t_start}")));
    }
    traj.samples.push(PoleSample { t: t_start, z: z0, residue: None, converged: true });
    let mut last = (t_start, z0);
    let mut before: Option<(f64, C64)> = None;
    let mut failures = 0;
    for k in 1..=steps {
        let t = if k == steps && ((t_end - t_start).abs() - steps as f64 * dt).abs() < 1e-9 {
            t_end
        } else {
            t_start + dir * dt * k as f64
        };
        let guess = match before {
            Some((tb, zb)) => last.1 + (last.1 - zb) * ((t - last.0) / (last.0 - tb)),
            None => last.1,
        };
        let model = Model { kind, t, mu, opts: &opts };
        let (mut z, mut ok) = newton(&model, guess);
        if !ok || (z - last.1).norm() > 0.3 {
            let (z2, ok2) = newton(&model, last.1);
            z = z2;
            ok = ok2 && (z2 - last.1).norm() <= 0.3;
        }
        traj.samples.push(PoleSample { t, z, residue: None, converged: ok });
        if ok {
            failures = 0;
            before = Some(last);
            last = (t, z);
        } else {
            failures += 1;
            if failures >= MAX_FAILURES {
                break;
            }
        }
    }
    Ok(traj)
}

/// Fill in residue probes of `u` at the converged samples of an exact trajectory.
pub fn attach_residues(traj: &mut PoleTrajectory, radius: f64) {
    let opts = EvalOptions::default();
    let mu = traj.mu;
    let res = map_slice(&traj.samples, |s| {
        if s.converged {
            residue_of_u(s.z, s.t, mu, radius, &opts).ok()
        } else {
            None
        }
    });
    for (s, r) in traj.samples.iter_mut().zip(res) {
        s.residue = r;
    }
}

/// Times at which `Im z` of a trajectory has an interior local minimum,
/// refined by a parabola through the three neighbouring samples.
pub fn distance_minima(traj: &PoleTrajectory) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = traj.converged().map(|s| (s.t, s.z.im)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = Vec::new();
    for w in pts.windows(3) {
        let ((t0, y0), (t1, y1), (t2, y2)) = (w[0], w[1], w[2]);
        if y1 < y0 && y1 <= y2 {
            out.push(parabola_vertex((t0, y0), (t1, y1), (t2, y2)));
        }
    }
    out
}

/// Vertex of the parabola through three points.
pub fn parabola_vertex(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> (f64, f64) {
    let (x0, y0) = a;
    let (x1, y1) = b;
    let (x2, y2) = c;
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let a2 = (d12 - d01) / (x2 - x0);
    if a2 == 0.0 {
        return b;
    }
    let x = 0.5 * (x0 + x1) - d01 / (2.0 * a2);
    let y = y0 + d01 * (x - x0) + a2 * (x - x0) * (x - x1);
    // Guard against a flat triple pushing the vertex out of the bracket.
    if x < x0.min(x2) || x > x0.max(x2) {
        return b;
    }
    (x, y)
}
