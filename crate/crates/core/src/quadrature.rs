//! Gauss-Legendre and Gauss-Hermite rules and composite integration along
//! piecewise-linear contours.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::C64;

pub const MAX_LEGENDRE: usize = 2048;
pub const MAX_HERMITE: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Legendre polynomial `P_n(x)` and its derivative by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
pub fn gauss_legendre_rule(n: usize) -> Result<QuadRule> {
    if n == 0 || n > MAX_LEGENDRE {
        return Err(Error::InvalidOrder(n));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess, refined by Newton on the recurrence.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadRule { nodes, weights })
}

/// n-point Gauss-Hermite rule for the weight `exp(-x^2)` on the real line.
///
/// Newton on the orthonormal recurrence with the classical asymptotic initial
/// guesses. For n above roughly 360 the outermost weights are below the
/// smallest representable double and come out as zero.
pub fn gauss_hermite_rule(n: usize) -> Result<QuadRule> {
    if n == 0 || n > MAX_HERMITE {
        return Err(Error::InvalidOrder(n));
    }
    let pim4 = PI.powf(-0.25);
    let nf = n as f64;
    let m = n.div_ceil(2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let mut prev: Vec<f64> = Vec::with_capacity(m);
    // Orthonormal Hermite recurrence; returns (p_n, p_n').
    let eval = |z: f64| -> (f64, f64) {
        let mut p1 = pim4;
        let mut p2 = 0.0;
        for j in 0..n {
            let p3 = p2;
            p2 = p1;
            let jf = j as f64;
            p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
        }
        (p1, (2.0 * nf).sqrt() * p2)
    };
    for i in 0..m {
        let mut z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => prev[0] - 1.14 * nf.powf(0.426) / prev[0],
            2 => 1.86 * prev[1] - 0.86 * prev[0],
            3 => 1.91 * prev[2] - 0.91 * prev[1],
            _ => 2.0 * prev[i - 1] - prev[i - 2],
        };
        let mut pp = 1.0;
        for _ in 0..100 {
            let (p, d) = eval(z);
            pp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = eval(z);
        if d.is_finite() && d != 0.0 {
            pp = d;
        }
        if n % 2 == 1 && i == m - 1 {
            z = 0.0;
        }
        prev.push(z);
        let w = 2.0 / (pp * pp);
        let w = if w.is_finite() { w } else { 0.0 };
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Ok(QuadRule { nodes, weights })
}

/// Sum by recursive halving; keeps rounding error growth logarithmic in the length.
pub fn pairwise_sum(v: &[C64]) -> C64 {
    if v.len() <= 16 {
        return v.iter().copied().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

pub fn pairwise_sum_real(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        return v.iter().copied().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum_real(&v[..mid]) + pairwise_sum_real(&v[mid..])
}

/// Quadrature nodes on a polyline: each segment is split into `panels[k]`
/// equal panels carrying a copy of `rule`. Weights include the path element.
pub fn polyline_nodes(vertices: &[C64], panels: &[usize], rule: &QuadRule) -> Vec<(C64, C64)> {
    let mut out = Vec::new();
    for (k, seg) in vertices.windows(2).enumerate() {
        let (a, b) = (seg[0], seg[1]);
        let np = panels[k].max(1);
        let h = (b - a) / np as f64;
        for p in 0..np {
            let mid = a + h * (p as f64 + 0.5);
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                out.push((mid + h * (0.5 * x), h * (0.5 * w)));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourOptions {
    pub order: usize,
    pub rel_tol: f64,
    pub initial_panels: usize,
    pub max_panels: usize,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self { order: 64, rel_tol: 1e-10, initial_panels: 1, max_panels: 1 << 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourIntegral {
    pub value: C64,
    pub est_error: f64,
    pub panels: usize,
}

/// Integral of `f` along the polyline through `vertices` by composite
/// Gauss-Legendre, doubling the panel count until successive estimates agree.
pub fn integrate_contour<F>(f: F, vertices: &[C64], opts: &ContourOptions) -> Result<ContourIntegral>
where
    F: Fn(C64) -> C64,
{
    if vertices.len() < 2 {
        return Err(Error::InvalidParameter("contour needs at least two vertices".into()));
    }
    let rule = gauss_legendre_rule(opts.order)?;
    let nseg = vertices.len() - 1;
    let mut panels = opts.initial_panels.max(1);
    let eval = |panels: usize| -> Result<C64> {
        let nodes = polyline_nodes(vertices, &vec![panels; nseg], &rule);
        let mut terms = Vec::with_capacity(nodes.len());
        for (z, w) in nodes {
            let v = f(z);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::IntegrandBlowup(format!("{z}")));
            }
            terms.push(v * w);
        }
        Ok(pairwise_sum(&terms))
    };
    let mut prev = eval(panels)?;
    loop {
        if panels * 2 > opts.max_panels {
            return Ok(ContourIntegral { value: prev, est_error: f64::INFINITY, panels });
        }
        panels *= 2;
        let cur = eval(panels)?;
        let diff = (cur - prev).norm();
        if diff <= opts.rel_tol * cur.norm() || diff == 0.0 {
            return Ok(ContourIntegral { value: cur, est_error: diff, panels });
        }
        prev = cur;
    }
}
