//! Real-line initial value problem on `[-L, L]` with `u_x(+-L) = 0`.
//!
//! The Neumann conditions make a cosine series the natural basis:
//! `u(x) = sum_m a_m cos(k_m (x + L))`, `k_m = m pi / 2L`, sampled on the
//! uniform grid `x_j = -L + 2L j / N`, `j = 0..=N`, where it is a type-I
//! cosine transform computed with an FFT of the even extension. Diffusion is
//! diagonal in this basis and is integrated exactly by fourth-order
//! exponential time differencing (ETDRK4); the advection term `-u u_x` is
//! evaluated on the grid with a 2/3 truncation.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::parallel::{map_range, map_slice};
use crate::C64;

/// Values of the solution on a fixed set of nodes at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot {
    pub t: f64,
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    /// Half width of the computational domain.
    pub l: f64,
    /// Number of grid intervals; `None` picks one from `mu`.
    pub n_solve: Option<usize>,
    pub t_final: f64,
    /// Number of output times, including `t = 0`.
    pub snapshots: usize,
    /// Largest time step; the step is shrunk to divide the output interval.
    pub dt_max: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self { l: 15.0, n_solve: None, t_final: 2.0, snapshots: 501, dt_max: 1e-3 }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.l >= 10.0 && self.l.is_finite()) {
            return Err(Error::InvalidParameter(format!("L = {} must be at least 10", self.l)));
        }
        if self.snapshots < 2 {
            return Err(Error::InvalidParameter("need at least two snapshots".into()));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::InvalidParameter(format!("T = {}", self.t_final)));
        }
        if !(self.dt_max > 0.0) {
            return Err(Error::InvalidParameter(format!("dt = {}", self.dt_max)));
        }
        if let Some(n) = self.n_solve {
            if !(16..=1 << 16).contains(&n) {
                return Err(Error::InvalidParameter(format!("N = {n} outside [16, 65536]")));
            }
        }
        Ok(())
    }

    /// Grid size used for viscosity `mu`.
    pub fn resolution(&self, mu: f64) -> usize {
        self.n_solve.unwrap_or_else(|| {
            let want = (4.0 * self.l / mu).max(1024.0).min(8192.0);
            (want as usize).next_power_of_two().min(8192)
        })
    }
}

/// The 250 output points `5 cos((2i - 1) pi / 500)`, `i = 1..=250`.
pub fn output_nodes() -> Vec<f64> {
    (1..=250).map(|i| 5.0 * ((2 * i - 1) as f64 * PI / 500.0).cos()).collect()
}

/// Solution as a cosine series on `[-L, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub t: f64,
    pub l: f64,
    pub coeffs: Vec<f64>,
}

impl SpectralField {
    fn theta(&self, x: f64) -> f64 {
        PI * (x + self.l) / (2.0 * self.l)
    }

    /// `sum_m a_m cos(m theta)` by Clenshaw's recurrence.
    pub fn value(&self, x: f64) -> f64 {
        let c = self.theta(x).cos();
        let (mut b1, mut b2) = (0.0, 0.0);
        for &a in self.coeffs.iter().skip(1).rev() {
            let b0 = a + 2.0 * c * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] + c * b1 - b2
    }

    /// `u_x = -(pi/2L) sum_m m a_m sin(m theta)`, using `sin(m theta) = sin(theta) U_{m-1}(cos theta)`.
    pub fn slope(&self, x: f64) -> f64 {
        let th = self.theta(x);
        let (c, s) = (th.cos(), th.sin());
        let (mut b1, mut b2) = (0.0, 0.0);
        for m in (1..self.coeffs.len()).rev() {
            let b0 = m as f64 * self.coeffs[m] + 2.0 * c * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        // sum_{m>=1} c_m U_{m-1}(c) = b1 in this recurrence.
        -PI / (2.0 * self.l) * s * b1
    }

    /// `int_{-L}^{L} u dx`.
    pub fn mass(&self) -> f64 {
        2.0 * self.l * self.coeffs[0]
    }

    /// `(1/2) int_{-L}^{L} u_x^2 dx` by Parseval.
    pub fn enstrophy(&self) -> f64 {
        let mut s = 0.0;
        for (m, a) in self.coeffs.iter().enumerate().skip(1) {
            let k = m as f64 * PI / (2.0 * self.l);
            s += (k * a).powi(2);
        }
        0.5 * self.l * s
    }

    pub fn sample(&self, nodes: &[f64]) -> FieldSnapshot {
        FieldSnapshot { t: self.t, nodes: nodes.to_vec(), values: nodes.iter().map(|&x| self.value(x)).collect() }
    }

    /// Location and value of the largest `|u_x|`, refined by golden-section search.
    pub fn max_abs_slope(&self) -> (f64, f64) {
        let n = self.coeffs.len() - 1;
        let tr = Transforms::new(n);
        let b: Vec<f64> = self.coeffs.iter().enumerate().map(|(m, a)| -(m as f64) * PI / (2.0 * self.l) * a).collect();
        let grid = tr.dst1(&b);
        let j = (0..=n).max_by(|&a, &b| grid[a].abs().total_cmp(&grid[b].abs())).unwrap_or(0);
        let h = 2.0 * self.l / n as f64;
        let x = -self.l + j as f64 * h;
        golden_max(|x| self.slope(x).abs(), (x - h).max(-self.l), (x + h).min(self.l))
    }
}

/// Maximiser of a unimodal `f` on `[a, b]`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-13 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

struct Transforms {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
}

impl Transforms {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { n, fwd: planner.plan_fft_forward(2 * n) }
    }

    /// `Y_j = v_0 + (-1)^j v_N + 2 sum_{m=1}^{N-1} v_m cos(pi m j / N)`.
    fn dct1(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut buf: Vec<Complex<f64>> = Vec::with_capacity(2 * n);
        buf.extend(v.iter().map(|&x| Complex::new(x, 0.0)));
        buf.extend(v[1..n].iter().rev().map(|&x| Complex::new(x, 0.0)));
        self.fwd.process(&mut buf);
        buf[..=n].iter().map(|c| c.re).collect()
    }

    /// `Z_j = 2 sum_{m=1}^{N-1} v_m sin(pi m j / N)`.
    fn dst1(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut buf = vec![Complex::new(0.0, 0.0); 2 * n];
        for m in 1..n {
            buf[m] = Complex::new(v[m], 0.0);
            buf[2 * n - m] = Complex::new(-v[m], 0.0);
        }
        self.fwd.process(&mut buf);
        buf[..=n].iter().map(|c| -c.im).collect()
    }

    fn to_grid(&self, a: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut v = a.to_vec();
        v[0] *= 2.0;
        v[n] *= 2.0;
        self.dct1(&v).into_iter().map(|y| 0.5 * y).collect()
    }

    fn to_coeffs(&self, u: &[f64]) -> Vec<f64> {
        let n = self.n;
        let y = self.dct1(u);
        let mut a: Vec<f64> = y.into_iter().map(|v| v / n as f64).collect();
        a[0] *= 0.5;
        a[n] *= 0.5;
        a
    }
}

struct Stepper {
    tr: Transforms,
    k: Vec<f64>,
    cutoff: usize,
    e: Vec<f64>,
    e2: Vec<f64>,
    q: Vec<f64>,
    f1: Vec<f64>,
    f2: Vec<f64>,
    f3: Vec<f64>,
}

impl Stepper {
    fn new(n: usize, l: f64, mu: f64, h: f64) -> Self {
        let k: Vec<f64> = (0..=n).map(|m| m as f64 * PI / (2.0 * l)).collect();
        let mut s = Self {
            tr: Transforms::new(n),
            cutoff: 2 * n / 3,
            e: vec![0.0; n + 1],
            e2: vec![0.0; n + 1],
            q: vec![0.0; n + 1],
            f1: vec![0.0; n + 1],
            f2: vec![0.0; n + 1],
            f3: vec![0.0; n + 1],
            k,
        };
        // Contour averages of the phi functions, as in Kassam and Trefethen.
        let roots: Vec<C64> = (1..=32).map(|j| C64::from_polar(1.0, PI * (j as f64 - 0.5) / 32.0)).collect();
        for m in 0..=n {
            let lh = -mu * s.k[m] * s.k[m] * h;
            s.e[m] = lh.exp();
            s.e2[m] = (lh / 2.0).exp();
            let (mut q, mut f1, mut f2, mut f3) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0));
            for r in &roots {
                let z = r + lh;
                let ez = z.exp();
                let z3 = z * z * z;
                q += ((z / 2.0).exp() - 1.0) / z;
                f1 += (-4.0 - z + ez * (4.0 - z * 3.0 + z * z)) / z3;
                f2 += (2.0 + z + ez * (z - 2.0)) / z3;
                f3 += (-4.0 - z * 3.0 - z * z + ez * (4.0 - z)) / z3;
            }
            let nr = roots.len() as f64;
            s.q[m] = h * q.re / nr;
            s.f1[m] = h * f1.re / nr;
            s.f2[m] = h * f2.re / nr;
            s.f3[m] = h * f3.re / nr;
        }
        s
    }

    /// Cosine coefficients of `-u u_x`.
    fn nonlinear(&self, a: &[f64]) -> Vec<f64> {
        let u = self.tr.to_grid(a);
        let b: Vec<f64> = a.iter().zip(&self.k).map(|(a, k)| -k * a).collect();
        let ux: Vec<f64> = self.tr.dst1(&b).into_iter().map(|z| 0.5 * z).collect();
        let g: Vec<f64> = u.iter().zip(&ux).map(|(u, d)| -u * d).collect();
        let mut c = self.tr.to_coeffs(&g);
        for v in c.iter_mut().skip(self.cutoff + 1) {
            *v = 0.0;
        }
        c
    }

    fn step(&self, v: &mut [f64]) {
        let n = v.len();
        let nv = self.nonlinear(v);
        let a: Vec<f64> = (0..n).map(|m| self.e2[m] * v[m] + self.q[m] * nv[m]).collect();
        let na = self.nonlinear(&a);
        let b: Vec<f64> = (0..n).map(|m| self.e2[m] * v[m] + self.q[m] * na[m]).collect();
        let nb = self.nonlinear(&b);
        let c: Vec<f64> = (0..n).map(|m| self.e2[m] * a[m] + self.q[m] * (2.0 * nb[m] - nv[m])).collect();
        let nc = self.nonlinear(&c);
        for m in 0..n {
            v[m] = self.e[m] * v[m] + nv[m] * self.f1[m] + 2.0 * (na[m] + nb[m]) * self.f2[m] + nc[m] * self.f3[m];
        }
    }
}

/// Cosine coefficients of `1/(1+x^2)` on the grid of size `n`.
pub fn initial_field(n: usize, l: f64) -> SpectralField {
    let tr = Transforms::new(n);
    let u: Vec<f64> = (0..=n).map(|j| {
        let x = -l + 2.0 * l * j as f64 / n as f64;
        1.0 / (1.0 + x * x)
    }).collect();
    SpectralField { t: 0.0, l, coeffs: tr.to_coeffs(&u) }
}

/// Integrate to `cfg.t_final`, returning the spectral state at the `cfg.snapshots` output times.
pub fn solve_spectral(mu: f64, cfg: &SolveConfig) -> Result<Vec<SpectralField>> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("mu = {mu} must be positive")));
    }
    cfg.validate()?;
    let n = cfg.resolution(mu);
    let interval = cfg.t_final / (cfg.snapshots - 1) as f64;
    let sub = (interval / cfg.dt_max).ceil().max(1.0) as usize;
    let h = interval / sub as f64;
    let stepper = Stepper::new(n, cfg.l, mu, h);
    let init = initial_field(n, cfg.l);
    let bound = 2.0;
    let mut v = init.coeffs.clone();
    let mut out = Vec::with_capacity(cfg.snapshots);
    out.push(init);
    for j in 1..cfg.snapshots {
        for _ in 0..sub {
            stepper.step(&mut v);
        }
        let t = j as f64 * interval;
        let size: f64 = v.iter().map(|a| a.abs()).sum();
        if !size.is_finite() || size > bound * (n as f64) {
            return Err(Error::StepFailure(t));
        }
        out.push(SpectralField { t, l: cfg.l, coeffs: v.clone() });
    }
    Ok(out)
}

/// Snapshots at the 250 output nodes on `[-5, 5]`.
pub fn solve_real(mu: f64, cfg: &SolveConfig) -> Result<Vec<FieldSnapshot>> {
    let fields = solve_spectral(mu, cfg)?;
    let nodes = output_nodes();
    Ok(map_slice(&fields, |f| f.sample(&nodes)))
}

/// Barycentric weights for arbitrary distinct nodes.
pub fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut w = vec![1.0; n];
    let scale = 4.0 / (nodes.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - nodes.iter().cloned().fold(f64::INFINITY, f64::min));
    for j in 0..n {
        for k in 0..n {
            if k != j {
                w[j] *= scale * (nodes[j] - nodes[k]);
            }
        }
        w[j] = 1.0 / w[j];
    }
    w
}

impl FieldSnapshot {
    /// Polynomial interpolant and its derivative at `x`.
    pub fn interpolate(&self, weights: &[f64], x: f64) -> (f64, f64) {
        let xs = &self.nodes;
        let fs = &self.values;
        if let Some(j) = xs.iter().position(|&xj| xj == x) {
            // Derivative at a node from the differentiation matrix row.
            let mut d = 0.0;
            for k in 0..xs.len() {
                if k != j {
                    d += weights[k] / weights[j] * (fs[k] - fs[j]) / (xs[k] - x);
                }
            }
            return (fs[j], d);
        }
        let (mut num, mut den) = (0.0, 0.0);
        for k in 0..xs.len() {
            let c = weights[k] / (x - xs[k]);
            num += c * fs[k];
            den += c;
        }
        let p = num / den;
        // p'(x) = sum c_k (p - f_k)/(x - x_k) / sum c_k
        let mut dn = 0.0;
        for k in 0..xs.len() {
            let c = weights[k] / (x - xs[k]);
            dn += c * (p - fs[k]) / (x - xs[k]);
        }
        (p, dn / den)
    }

    pub fn mass_estimate(&self) -> f64 {
        let w = barycentric_weights(&self.nodes);
        let (a, b) = span(&self.nodes);
        gauss_integral(|x| self.interpolate(&w, x).0, a, b)
    }
}

fn span(nodes: &[f64]) -> (f64, f64) {
    (nodes.iter().cloned().fold(f64::INFINITY, f64::min), nodes.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
}

fn gauss_integral<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let rule = crate::quadrature::gauss_legendre_rule(64).expect("order 64 is valid");
    let panels = 32;
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            s += w * f(lo + 0.5 * h * (x + 1.0)) * 0.5 * h;
        }
    }
    s
}

/// Largest `|u_x|` of the interpolant through the snapshot, with its location.
pub fn max_abs_slope(snap: &FieldSnapshot) -> (f64, f64) {
    let w = barycentric_weights(&snap.nodes);
    let f = |x: f64| snap.interpolate(&w, x).1.abs();
    let (a, b) = span(&snap.nodes);
    let n = 8 * snap.nodes.len();
    let h = (b - a) / n as f64;
    let (mut best, mut bx) = (f64::NEG_INFINITY, a);
    for j in 0..=n {
        let x = a + j as f64 * h;
        let v = f(x);
        if v > best {
            best = v;
            bx = x;
        }
    }
    golden_max(f, (bx - h).max(a), (bx + h).min(b))
}

/// `(1/2) int u_x^2` of the interpolant over the span of the nodes.
pub fn enstrophy(snap: &FieldSnapshot) -> f64 {
    let w = barycentric_weights(&snap.nodes);
    let (a, b) = span(&snap.nodes);
    0.5 * gauss_integral(|x| snap.interpolate(&w, x).1.powi(2), a, b)
}

/// Time of the interior maximum of a sampled series, refined by a parabola.
pub fn interior_max(ts: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let k = (0..ys.len()).max_by(|&a, &b| ys[a].total_cmp(&ys[b])).ok_or(Error::NoInteriorMax)?;
    if k == 0 || k + 1 >= ys.len() {
        return Err(Error::NoInteriorMax);
    }
    Ok(crate::poletrack::parabola_vertex((ts[k - 1], ys[k - 1]), (ts[k], ys[k]), (ts[k + 1], ys[k + 1])))
}

/// Time at which the largest real-line slope peaks.
pub fn slope_turning_time(mu: f64) -> Result<f64> {
    if !(0.01..=1.0).contains(&mu) {
        return Err(Error::InvalidParameter(format!("mu = {mu} outside [0.01, 1]")));
    }
    let hist = slope_history(mu, 6.0, 601)?;
    let ts: Vec<f64> = hist.iter().map(|h| h.0).collect();
    let slopes: Vec<f64> = hist.iter().map(|h| h.2).collect();
    Ok(interior_max(&ts, &slopes)?.0)
}

/// `(t, x, |u_x|)` at the steepest point for each of `snapshots` equally spaced times.
pub fn slope_history(mu: f64, t_final: f64, snapshots: usize) -> Result<Vec<(f64, f64, f64)>> {
    let cfg = SolveConfig { t_final, snapshots, ..SolveConfig::default() };
    let fields = solve_spectral(mu, &cfg)?;
    Ok(map_slice(&fields, |f| {
        let (x, s) = f.max_abs_slope();
        (f.t, x, s)
    }))
}

/// Change of the largest slope over the first `window` time units.
pub fn initial_slope_trend(mu: f64, window: f64) -> Result<f64> {
    let cfg = SolveConfig { t_final: window, snapshots: 2, dt_max: window / 200.0, ..SolveConfig::default() };
    let fields = solve_spectral(mu, &cfg)?;
    Ok(fields[1].max_abs_slope().1 - fields[0].max_abs_slope().1)
}

/// Viscosity separating an initially steepening profile from one that flattens at once.
pub fn critical_mu_tilde() -> Result<f64> {
    let window = 0.005;
    let (mut lo, mut hi) = (0.1, 0.2);
    if initial_slope_trend(lo, window)? <= 0.0 || initial_slope_trend(hi, window)? >= 0.0 {
        return Err(Error::Convergence("slope trend does not change sign on [0.1, 0.2]".into()));
    }
    while hi - lo > 1e-5 {
        // Probe three interior points at once.
        let probes: Vec<f64> = (1..=3).map(|k| lo + (hi - lo) * k as f64 / 4.0).collect();
        let trends = map_slice(&probes, |&m| initial_slope_trend(m, window));
        let mut new = (lo, hi);
        for (m, tr) in probes.iter().zip(trends) {
            if tr? > 0.0 {
                new.0 = *m;
            } else {
                new.1 = *m;
                break;
            }
        }
        (lo, hi) = new;
    }
    Ok(0.5 * (lo + hi))
}

/// Snapshot export with header `t,x,u`.
pub fn snapshots_to_csv(snaps: &[FieldSnapshot]) -> String {
    let mut out = String::from("t,x,u\n");
    for s in snaps {
        for (x, u) in s.nodes.iter().zip(&s.values) {
            out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", s.t, x, u));
        }
    }
    out
}

/// Largest `|u|` over a set of snapshots, evaluated in parallel.
pub fn sup_norm(snaps: &[FieldSnapshot]) -> f64 {
    map_range(snaps.len(), |i| snaps[i].values.iter().fold(0.0f64, |m, v| m.max(v.abs()))).into_iter().fold(0.0, f64::max)
}
