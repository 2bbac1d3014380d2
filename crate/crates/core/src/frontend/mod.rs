//! Phase portraits, landscapes, run configuration and the `burgers` command line.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::aaa::{self, BarycentricRational};
use crate::colehopf::{self, EvalOptions};
use crate::error::{Error, Result};
use crate::inner::{self, Quadrant};
use crate::parallel::map_slice;
use crate::poletrack::{self, DenominatorModel};
use crate::types::{build_grid, Grid2D, PoleTrajectory};
use crate::{generalbeta, inviscid, largetime, realline, C64};

/// `|u|` above which a landscape value is clipped.
pub const LANDSCAPE_CLIP: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Evaluator {
    Exact,
    Inner,
    Largetime,
    Aaa,
}

impl Evaluator {
    pub fn label(&self) -> &'static str {
        match self {
            Evaluator::Exact => "exact",
            Evaluator::Inner => "inner",
            Evaluator::Largetime => "largetime",
            Evaluator::Aaa => "aaa",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TrackChoice {
    Exact,
    Saddle,
    Aaa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Borderline {
    Inner,
    Tilde,
}

/// Frozen approximation of `u(., t)` used for per-pixel evaluation.
pub enum Field {
    Exact { mu: f64, t: f64, opts: EvalOptions },
    Inner { mu: f64, t: f64 },
    Largetime { mu: f64, t: f64 },
    Aaa(BarycentricRational),
}

impl Field {
    pub fn new(ev: Evaluator, mu: f64, t: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0 && t.is_finite() && t > 0.0) {
            return Err(Error::InvalidParameter(format!("mu = {mu}, t = {t}")));
        }
        Ok(match ev {
            Evaluator::Exact => Field::Exact { mu, t, opts: EvalOptions::default() },
            Evaluator::Inner => Field::Inner { mu, t },
            Evaluator::Largetime => Field::Largetime { mu, t },
            Evaluator::Aaa => Field::Aaa(aaa::fit_exact_slice(t, mu)?),
        })
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        match self {
            Field::Exact { mu, t, opts } => colehopf::evaluate_u(z, *t, *mu, opts),
            Field::Inner { mu, t } => {
                // t^{-1/2} Phi0((z - i) / t^{1/2}) near z = i, mirrored below the axis.
                let s = t.sqrt();
                if z.im >= 0.0 {
                    Ok(inner::phi0((z - C64::i()) / s, *mu)? / s)
                } else {
                    Ok((inner::phi0((z.conj() - C64::i()) / s, *mu)? / s).conj())
                }
            }
            Field::Largetime { mu, t } => largetime::u_largetime(z, *t, *mu),
            Field::Aaa(r) => Ok(aaa::rational_eval(r, z)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseImage {
    pub width: usize,
    pub height: usize,
    /// Row-major RGB, top row first.
    pub pixels: Vec<u8>,
}

impl PhaseImage {
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn rgb(&self, row: usize, col: usize) -> [u8; 3] {
        let k = 3 * (row * self.width + col);
        [self.pixels[k], self.pixels[k + 1], self.pixels[k + 2]]
    }
}

/// Per-render diagnostics written next to the image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderReport {
    pub evaluator: String,
    pub width: usize,
    pub height: usize,
    /// Pixels whose evaluation failed; drawn black.
    pub failures: usize,
    /// Pixels with `|u|` above the clip level.
    pub clipped: usize,
}

/// HSV with `S = V = 1`. `h` is in turns.
pub fn hsv_to_rgb(h: f64) -> [u8; 3] {
    let h6 = h.rem_euclid(1.0) * 6.0;
    let f = h6 - h6.floor();
    let (r, g, b) = match h6 as u32 {
        0 => (1.0, f, 0.0),
        1 => (1.0 - f, 1.0, 0.0),
        2 => (0.0, 1.0, f),
        3 => (0.0, 1.0 - f, 1.0),
        4 => (f, 0.0, 1.0),
        _ => (1.0, 0.0, 1.0 - f),
    };
    let q = |v: f64| (255.0 * v).round() as u8;
    [q(r), q(g), q(b)]
}

/// Hue of `u`, `(arg u + pi) / 2 pi`, so `arg u = pi` is red and `arg u = 0` cyan.
pub fn phase_hue(u: C64) -> f64 {
    (principal_arg(u) + PI) / (2.0 * PI)
}

/// `arg u` in `(-pi, pi]`.
pub fn principal_arg(u: C64) -> f64 {
    let a = u.im.atan2(u.re);
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// Portrait of an arbitrary function; failures and non-finite values are drawn black.
pub fn render_with<F>(grid: &Grid2D, label: &str, clip: f64, f: F) -> Result<(PhaseImage, RenderReport)>
where
    F: Fn(C64) -> Result<C64> + Sync + Send,
{
    let pts = build_grid(grid)?;
    let vals = map_slice(&pts, |&z| f(z).ok().filter(|u| u.re.is_finite() && u.im.is_finite()));
    let mut pixels = Vec::with_capacity(3 * pts.len());
    let (mut failures, mut clipped) = (0, 0);
    for v in &vals {
        match v {
            Some(u) => {
                if u.norm() > clip {
                    clipped += 1;
                }
                pixels.extend_from_slice(&hsv_to_rgb(phase_hue(*u)));
            }
            None => {
                failures += 1;
                pixels.extend_from_slice(&[0, 0, 0]);
            }
        }
    }
    let img = PhaseImage { width: grid.n_re, height: grid.n_im, pixels };
    let report = RenderReport { evaluator: label.to_string(), width: grid.n_re, height: grid.n_im, failures, clipped };
    Ok((img, report))
}

pub fn render_portrait(grid: &Grid2D, ev: Evaluator, mu: f64, t: f64) -> Result<(PhaseImage, RenderReport)> {
    let field = Field::new(ev, mu, t)?;
    render_with(grid, ev.label(), LANDSCAPE_CLIP, |z| field.eval(z))
}

/// CSV `re,im,abs_u,arg_u` in grid order; failed points are written as `nan`.
pub fn landscape_with<F>(grid: &Grid2D, f: F) -> Result<(String, usize)>
where
    F: Fn(C64) -> Result<C64> + Sync + Send,
{
    let pts = build_grid(grid)?;
    let vals = map_slice(&pts, |&z| f(z).ok().filter(|u| u.re.is_finite() && u.im.is_finite()));
    let mut out = String::from("re,im,abs_u,arg_u\n");
    let mut failures = 0;
    for (z, v) in pts.iter().zip(&vals) {
        match v {
            Some(u) => {
                let _ = writeln!(out, "{:.12e},{:.12e},{:.12e},{:.12e}", z.re, z.im, u.norm().min(LANDSCAPE_CLIP), principal_arg(*u));
            }
            None => {
                failures += 1;
                let _ = writeln!(out, "{:.12e},{:.12e},nan,nan", z.re, z.im);
            }
        }
    }
    Ok((out, failures))
}

pub fn write_landscape(grid: &Grid2D, ev: Evaluator, mu: f64, t: f64) -> Result<(String, usize)> {
    let field = Field::new(ev, mu, t)?;
    landscape_with(grid, |z| field.eval(z))
}

/// Parameters shared by all subcommands. Every field may come from a flag or
/// from the JSON file given with `--config`; file values win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[arg(long = "eval", value_enum)]
    #[serde(rename = "eval", skip_serializing_if = "Option::is_none")]
    pub evaluator: Option<Evaluator>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<TrackChoice>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub which: Option<Borderline>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub re_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub re_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im_max: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nx: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ny: Option<usize>,
    /// Evaluation point.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im: Option<f64>,
    /// Starting pole for tracking; found automatically when absent.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_im: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overlay(&mut self, other: &RunConfig) {
        overlay!(self, other, mu, t, t0, t1, dt, beta, evaluator, method, which, re_min, re_max, im_min, im_max, nx, ny, re, im, seed_re, seed_im, n_max, out);
    }

    /// Flags merged with the `--config` file, if any, and validated.
    pub fn resolve(mut self) -> Result<Self> {
        if let Some(path) = self.config.clone() {
            let text = std::fs::read_to_string(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            let file = Self::from_json(&text)?;
            self.overlay(&file);
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: Option<f64>| match v {
            Some(x) if !(x.is_finite() && x > 0.0) => Err(Error::Config(format!("{name} = {x} must be positive"))),
            _ => Ok(()),
        };
        positive("mu", self.mu)?;
        positive("dt", self.dt)?;
        positive("beta", self.beta)?;
        for (name, v) in [("t", self.t), ("t0", self.t0), ("t1", self.t1)] {
            if let Some(x) = v {
                if !(x.is_finite() && x >= 0.0) {
                    return Err(Error::Config(format!("{name} = {x} must be non-negative")));
                }
            }
        }
        for (name, v) in [("re_min", self.re_min), ("re_max", self.re_max), ("im_min", self.im_min), ("im_max", self.im_max), ("re", self.re), ("im", self.im)] {
            if let Some(x) = v {
                if !x.is_finite() {
                    return Err(Error::Config(format!("{name} = {x}")));
                }
            }
        }
        if self.nx == Some(0) || self.ny == Some(0) {
            return Err(Error::Config("nx and ny must be positive".into()));
        }
        Ok(())
    }

    fn need(&self, name: &str, v: Option<f64>) -> Result<f64> {
        v.ok_or_else(|| Error::Config(format!("--{name} is required")))
    }

    pub fn grid(&self) -> Result<Grid2D> {
        let g = Grid2D {
            re_min: self.re_min.unwrap_or(-3.0),
            re_max: self.re_max.unwrap_or(3.0),
            im_min: self.im_min.unwrap_or(-3.0),
            im_max: self.im_max.unwrap_or(3.0),
            n_re: self.nx.unwrap_or(200),
            n_im: self.ny.unwrap_or(200),
        };
        g.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(g)
    }

    fn out_dir(&self) -> Result<PathBuf> {
        let dir = self.out.clone().unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        Ok(dir)
    }
}

#[derive(Debug, Parser)]
#[command(name = "burgers", about = "Complex singularities of viscous Burgers flow from 1/(1+x^2)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Phase portrait of u(z, t) as a binary PPM.
    Portrait(RunConfig),
    /// |u| and arg u on a grid as CSV.
    Landscape(RunConfig),
    /// u at one point.
    Eval(RunConfig),
    /// Pole arrays of the inner problem.
    Inner(RunConfig),
    /// Follow the closest pole in time.
    TrackPole(RunConfig),
    /// Pole arrays of the large-time similarity solution.
    Similarity(RunConfig),
    /// Largest real-line slope over time.
    Slope(RunConfig),
    /// Real-line enstrophy over time.
    Enstrophy(RunConfig),
    /// Branch points of the inviscid solution.
    Inviscid(RunConfig),
    /// Predicted poles for data 1/(1+x^2)^beta.
    Beta(RunConfig),
    /// Borderline viscosities.
    CriticalMu(RunConfig),
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Parse `argv`, run the subcommand and return the process exit code.
pub fn cli_dispatch<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            0
        }
        Err(e) => {
            eprintln!("burgers: {e}");
            e.exit_code()
        }
    }
}

/// Execute one command; returns the lines to print.
pub fn run(cmd: Command) -> Result<Vec<String>> {
    match cmd {
        Command::Portrait(c) => portrait_cmd(c.resolve()?),
        Command::Landscape(c) => landscape_cmd(c.resolve()?),
        Command::Eval(c) => eval_cmd(c.resolve()?),
        Command::Inner(c) => inner_cmd(c.resolve()?),
        Command::TrackPole(c) => track_cmd(c.resolve()?),
        Command::Similarity(c) => similarity_cmd(c.resolve()?),
        Command::Slope(c) => slope_cmd(c.resolve()?),
        Command::Enstrophy(c) => enstrophy_cmd(c.resolve()?),
        Command::Inviscid(c) => inviscid_cmd(c.resolve()?),
        Command::Beta(c) => beta_cmd(c.resolve()?),
        Command::CriticalMu(c) => critical_cmd(c.resolve()?),
    }
}

fn portrait_cmd(c: RunConfig) -> Result<Vec<String>> {
    let (mu, t) = (c.need("mu", c.mu)?, c.need("t", c.t)?);
    let ev = c.evaluator.unwrap_or(Evaluator::Exact);
    let grid = c.grid()?;
    let dir = c.out_dir()?;
    let (img, report) = render_portrait(&grid, ev, mu, t)?;
    let p = write_file(&dir, &format!("portrait_{}.ppm", ev.label()), &img.to_ppm())?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_file(&dir, &format!("portrait_{}_report.json", ev.label()), json.as_bytes())?;
    Ok(vec![format!("{} ({} failed pixels)", p.display(), report.failures)])
}

fn landscape_cmd(c: RunConfig) -> Result<Vec<String>> {
    let (mu, t) = (c.need("mu", c.mu)?, c.need("t", c.t)?);
    let ev = c.evaluator.unwrap_or(Evaluator::Exact);
    let grid = c.grid()?;
    let dir = c.out_dir()?;
    let (csv, failures) = write_landscape(&grid, ev, mu, t)?;
    let p = write_file(&dir, &format!("landscape_{}.csv", ev.label()), csv.as_bytes())?;
    Ok(vec![format!("{} ({failures} failed points)", p.display())])
}

fn eval_cmd(c: RunConfig) -> Result<Vec<String>> {
    let (mu, t) = (c.need("mu", c.mu)?, c.need("t", c.t)?);
    let z = C64::new(c.need("re", c.re)?, c.need("im", c.im)?);
    let ev = c.evaluator.unwrap_or(Evaluator::Exact);
    let u = Field::new(ev, mu, t)?.eval(z)?;
    let dir = c.out_dir()?;
    let json = serde_json::json!({ "evaluator": ev.label(), "mu": mu, "t": t, "z": [z.re, z.im], "u": [u.re, u.im] });
    write_file(&dir, "eval.json", serde_json::to_string_pretty(&json).expect("json").as_bytes())?;
    Ok(vec![format!("u({}, {}) = {:.15e} {:+.15e}i", z, t, u.re, u.im)])
}

fn inner_cmd(c: RunConfig) -> Result<Vec<String>> {
    let mu = c.need("mu", c.mu)?;
    let n_max = c.n_max.unwrap_or(8);
    let dir = c.out_dir()?;
    let mut csv = String::from("quadrant,n,xi_re,xi_im,source\n");
    for q in [Quadrant::First, Quadrant::Second] {
        for p in inner::transcendental_poles(mu, n_max, q)? {
            let _ = writeln!(csv, "{:?},{},{:.15e},{:.15e},{:?}", p.quadrant, p.n, p.xi.re, p.xi.im, p.source);
        }
    }
    write_file(&dir, "inner_poles.csv", csv.as_bytes())?;
    let low = inner::lowest_pole(mu)?;
    Ok(vec![format!("lowest inner pole xi = {:.10} {:+.10}i", low.re, low.im)])
}

fn track_cmd(c: RunConfig) -> Result<Vec<String>> {
    let mu = c.need("mu", c.mu)?;
    let (t0, t1) = (c.need("t0", c.t0)?, c.need("t1", c.t1)?);
    let dt = c.dt.unwrap_or(0.01);
    let method = c.method.unwrap_or(TrackChoice::Exact);
    if t0 == t1 {
        return Err(Error::Config("t0 and t1 must differ".into()));
    }
    // AAA tracking runs backwards from the later time, so its seed lives there.
    let t_seed = if method == TrackChoice::Aaa { t0.max(t1) } else { t0 };
    if method == TrackChoice::Aaa && t0 < t1 && c.seed_re.is_some() {
        return Err(Error::Config("an aaa seed must be given at the later time; pass t0 > t1".into()));
    }
    let seed = match (c.seed_re, c.seed_im) {
        (Some(a), Some(b)) => C64::new(a, b),
        (None, None) => aaa::seed_closest_pole(t_seed, mu)?,
        _ => return Err(Error::Config("give both --seed-re and --seed-im or neither".into())),
    };
    let traj: PoleTrajectory = match method {
        TrackChoice::Exact | TrackChoice::Saddle => {
            let kind = if method == TrackChoice::Exact { DenominatorModel::ExactRoot } else { DenominatorModel::Saddle };
            poletrack::track_pole(kind, mu, t0, t1, dt, seed)?
        }
        TrackChoice::Aaa => {
            let (lo, hi) = (t0.min(t1), t0.max(t1));
            let steps = (hi / dt).round() as usize;
            let cfg = realline::SolveConfig { t_final: hi, snapshots: steps + 1, ..realline::SolveConfig::default() };
            let snaps: Vec<_> = realline::solve_real(mu, &cfg)?.into_iter().filter(|s| s.t >= lo - 1e-9).collect();
            let mut tr = aaa::aaa_track(&snaps, seed, mu, mu)?;
            if t0 < t1 {
                tr.samples.reverse();
            }
            tr
        }
    };
    let dir = c.out_dir()?;
    let p = write_file(&dir, &format!("trajectory_{}.csv", traj.method.label()), traj.to_csv().as_bytes())?;
    let conv = traj.converged().count();
    let mut lines = vec![format!("{} ({} samples, {conv} converged)", p.display(), traj.samples.len())];
    for (t, im) in poletrack::distance_minima(&traj) {
        lines.push(format!("Im z minimum {im:.6} at t = {t:.6}"));
    }
    Ok(lines)
}

fn similarity_cmd(c: RunConfig) -> Result<Vec<String>> {
    let mu = c.need("mu", c.mu)?;
    let n_max = c.n_max.unwrap_or(10);
    let sp = largetime::SimilarityParams::new(mu)?;
    let dir = c.out_dir()?;
    let mut csv = String::from("quadrant,n,rho_pred,theta_pred,eta_re,eta_im\n");
    for q in [Quadrant::First, Quadrant::Second] {
        for (k, rho) in largetime::psi_pole_moduli(&sp, n_max, q)?.into_iter().enumerate() {
            let Ok(rho) = rho else { continue };
            let Ok(theta) = largetime::psi_pole_path(rho, q, &sp) else { continue };
            let eta = largetime::find_psi_pole(C64::from_polar(rho, theta), &sp).unwrap_or(C64::new(f64::NAN, f64::NAN));
            let _ = writeln!(csv, "{:?},{},{:.15e},{:.15e},{:.15e},{:.15e}", q, k + 1, rho, theta, eta.re, eta.im);
        }
    }
    write_file(&dir, "similarity_poles.csv", csv.as_bytes())?;
    Ok(vec![format!("gamma = {:.15}", sp.gamma)])
}

fn slope_cmd(c: RunConfig) -> Result<Vec<String>> {
    let mu = c.need("mu", c.mu)?;
    let t_final = c.t1.unwrap_or(6.0);
    let dt = c.dt.unwrap_or(0.01);
    let hist = realline::slope_history(mu, t_final, (t_final / dt).round() as usize + 1)?;
    let dir = c.out_dir()?;
    let mut csv = String::from("t,x,max_abs_slope\n");
    for (t, x, s) in &hist {
        let _ = writeln!(csv, "{t:.10e},{x:.15e},{s:.15e}");
    }
    write_file(&dir, "slope.csv", csv.as_bytes())?;
    let ts: Vec<f64> = hist.iter().map(|h| h.0).collect();
    let ss: Vec<f64> = hist.iter().map(|h| h.2).collect();
    Ok(vec![match realline::interior_max(&ts, &ss) {
        Ok((t, s)) => format!("slope peaks at t = {t:.6} with |u_x| = {s:.6}"),
        Err(_) => "no interior slope maximum".into(),
    }])
}

fn enstrophy_cmd(c: RunConfig) -> Result<Vec<String>> {
    let mu = c.need("mu", c.mu)?;
    let t_final = c.t1.unwrap_or(2.0);
    let dt = c.dt.unwrap_or(0.01);
    let cfg = realline::SolveConfig { t_final, snapshots: (t_final / dt).round() as usize + 1, ..realline::SolveConfig::default() };
    let fields = realline::solve_spectral(mu, &cfg)?;
    let dir = c.out_dir()?;
    let mut csv = String::from("t,enstrophy\n");
    for f in &fields {
        let _ = writeln!(csv, "{:.10e},{:.15e}", f.t, f.enstrophy());
    }
    write_file(&dir, "enstrophy.csv", csv.as_bytes())?;
    Ok(vec![format!("{} samples", fields.len())])
}

fn inviscid_cmd(c: RunConfig) -> Result<Vec<String>> {
    let ts = inviscid::shock_time();
    let t1 = c.t1.or(c.t).unwrap_or(0.99 * ts);
    let dt = c.dt.unwrap_or(0.01);
    let dir = c.out_dir()?;
    let mut csv = String::from("t,re,im,max_slope\n");
    let n = (t1 / dt).ceil().max(1.0) as usize;
    for k in 1..=n {
        let t = (k as f64 * dt).min(t1);
        let slope = inviscid::max_slope(t).unwrap_or(f64::NAN);
        for z in inviscid::branch_points(t)?.points {
            let _ = writeln!(csv, "{t:.10e},{:.15e},{:.15e},{slope:.15e}", z.re, z.im);
        }
    }
    write_file(&dir, "inviscid_branch_points.csv", csv.as_bytes())?;
    Ok(vec![format!("shock time {ts:.15}")])
}

fn beta_cmd(c: RunConfig) -> Result<Vec<String>> {
    let (mu, t) = (c.need("mu", c.mu)?, c.need("t", c.t)?);
    let beta = c.need("beta", c.beta)?;
    let regime = generalbeta::BetaRegime::new(beta)?;
    let dir = c.out_dir()?;
    let mut csv = String::from("branch,index,re,im\n");
    if beta < 1.0 {
        let n = ((1.0 / t).ln() / 4.0).floor() as i64;
        for (k, z) in generalbeta::beta_lt1_poles(t, mu, beta, -n..=n)?.into_iter().enumerate() {
            let _ = writeln!(csv, "0,{},{:.15e},{:.15e}", k as i64 - n, z.re, z.im);
        }
    } else if beta == 2.0 {
        for (b, arr) in generalbeta::beta2_poles(t, mu, c.n_max.unwrap_or(5))?.into_iter().enumerate() {
            for (k, z) in arr.into_iter().enumerate() {
                let _ = writeln!(csv, "{b},{},{:.15e},{:.15e}", k + 1, z.re, z.im);
            }
        }
    } else {
        return Err(Error::Config(format!("pole predictions exist for beta < 1 and beta = 2, not {beta}")));
    }
    write_file(&dir, "beta_poles.csv", csv.as_bytes())?;
    Ok(vec![format!("regime {:?}", regime.regime)])
}

fn critical_cmd(c: RunConfig) -> Result<Vec<String>> {
    let which = c.which.unwrap_or(Borderline::Inner);
    let v = match which {
        Borderline::Inner => inner::critical_mu()?,
        Borderline::Tilde => realline::critical_mu_tilde()?,
    };
    if let Some(dir) = &c.out {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(e.to_string()))?;
        let json = serde_json::json!({ "which": which, "mu": v });
        write_file(dir, "critical_mu.json", serde_json::to_string_pretty(&json).expect("json").as_bytes())?;
    }
    Ok(vec![format!("{v:.6}")])
}
