//! AAA rational approximation of sampled data and a nearest-neighbour pole
//! tracker built on it.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::parallel::map_slice;
use crate::realline::FieldSnapshot;
use crate::types::{PoleSample, PoleTrajectory, TrackMethod};
use crate::C64;

/// `r(z) = sum w_j f_j / (z - z_j) / sum w_j / (z - z_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricRational {
    pub support: Vec<C64>,
    pub values: Vec<C64>,
    pub weights: Vec<C64>,
    /// Largest sample residual after each support insertion.
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleResidue {
    pub pole: C64,
    pub residue: C64,
}

impl BarycentricRational {
    pub fn degree(&self) -> usize {
        self.support.len() - 1
    }

    /// Sums `(N(z), D(z))`, or the stored value if `z` is a support point.
    fn parts(&self, z: C64) -> std::result::Result<(C64, C64), C64> {
        let (mut n, mut d) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for ((zj, fj), wj) in self.support.iter().zip(&self.values).zip(&self.weights) {
            let dz = z - zj;
            if dz == C64::new(0.0, 0.0) {
                return Err(*fj);
            }
            let c = wj / dz;
            n += c * fj;
            d += c;
        }
        Ok((n, d))
    }

    pub fn denominator(&self, z: C64) -> C64 {
        self.parts(z).map(|p| p.1).unwrap_or(C64::new(f64::INFINITY, 0.0))
    }
}

pub fn rational_eval(r: &BarycentricRational, z: C64) -> C64 {
    if r.support.len() == 1 {
        return r.values[0];
    }
    match r.parts(z) {
        Ok((n, d)) => n / d,
        Err(f) => f,
    }
}

/// Greedy AAA fit of `values` sampled at `points`.
pub fn aaa_fit(points: &[C64], values: &[C64], rel_tol: f64, max_degree: usize) -> Result<BarycentricRational> {
    if points.len() != values.len() || points.len() < 2 {
        return Err(Error::InvalidParameter("need at least two points with one value each".into()));
    }
    if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::InvalidParameter("sample values must be finite".into()));
    }
    for (i, a) in points.iter().enumerate() {
        if points[..i].contains(a) {
            return Err(Error::InvalidParameter(format!("repeated sample point {a}")));
        }
    }
    let m_total = points.len();
    let real = points.iter().chain(values).all(|v| v.im == 0.0);
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let mean = values.iter().sum::<C64>() / m_total as f64;
    let mut approx = vec![mean; m_total];
    let mut in_support = vec![false; m_total];
    let mut support: Vec<usize> = Vec::new();
    let mut weights: Vec<C64> = Vec::new();
    let mut history = Vec::new();

    let resid = |approx: &[C64], in_support: &[bool]| {
        let mut best = (-1.0f64, 0usize);
        for i in 0..m_total {
            if !in_support[i] {
                let e = (values[i] - approx[i]).norm();
                if e > best.0 {
                    best = (e, i);
                }
            }
        }
        best
    };

    let (mut err, mut next) = resid(&approx, &in_support);
    if err <= rel_tol * scale {
        // Constant data: a single support point with unit weight.
        return Ok(BarycentricRational { support: vec![points[0]], values: vec![values[0]], weights: vec![C64::new(1.0, 0.0)], history: vec![err] });
    }
    while support.len() <= max_degree && support.len() < m_total - 1 {
        support.push(next);
        in_support[next] = true;
        let rows: Vec<usize> = (0..m_total).filter(|&i| !in_support[i]).collect();
        let m = support.len();
        let nrows = rows.len().max(m);
        let mut a = DMatrix::<C64>::zeros(nrows, m);
        let mut cauchy = DMatrix::<C64>::zeros(rows.len(), m);
        for (r, &i) in rows.iter().enumerate() {
            for (c, &j) in support.iter().enumerate() {
                let cij = C64::new(1.0, 0.0) / (points[i] - points[j]);
                cauchy[(r, c)] = cij;
                a[(r, c)] = (values[i] - values[j]) * cij;
            }
        }
        let w = if real {
            let re = DMatrix::from_fn(nrows, m, |i, j| a[(i, j)].re);
            smallest_right_vector(re)?.map(|v| C64::new(v, 0.0))
        } else {
            smallest_right_vector(a)?
        };
        weights = w.iter().cloned().collect();
        let wf = DVector::from_iterator(m, support.iter().zip(w.iter()).map(|(&j, wj)| wj * values[j]));
        let num = &cauchy * wf;
        let den = &cauchy * &w;
        for (r, &i) in rows.iter().enumerate() {
            approx[i] = num[r] / den[r];
        }
        for &j in &support {
            approx[j] = values[j];
        }
        (err, next) = resid(&approx, &in_support);
        history.push(err);
        if err <= rel_tol * scale {
            break;
        }
    }
    Ok(BarycentricRational {
        support: support.iter().map(|&j| points[j]).collect(),
        values: support.iter().map(|&j| values[j]).collect(),
        weights,
        history,
    })
}

/// Right singular vector of the smallest singular value, after reducing to the triangular QR factor.
fn smallest_right_vector<T: nalgebra::ComplexField>(a: DMatrix<T>) -> Result<DVector<T>> {
    let m = a.ncols();
    let r = if a.nrows() > m { a.qr().r() } else { a };
    let svd = r.svd(false, true);
    let vt = svd.v_t.ok_or_else(|| Error::Eigensolve("singular value decomposition failed".into()))?;
    let k = if svd.singular_values.len() < m {
        m - 1
    } else {
        (0..m).min_by(|&x, &y| svd.singular_values[x].partial_cmp(&svd.singular_values[y]).unwrap_or(std::cmp::Ordering::Equal)).unwrap_or(0)
    };
    Ok(vt.row(k).transpose().map(|v| v.conjugate()))
}

/// Zeros of the barycentric denominator and the residues there.
///
/// The pencil `[0 w^T; 1 diag(z)] - lambda diag(0, 1, ..)` is reduced to the
/// rank-one update `S - 1 w^T S / sum(w)`, `S = diag(z) - sigma`, whose
/// eigenvalues are the finite pencil eigenvalues shifted by `sigma` plus one
/// spurious zero. The eigenvalues are then polished by Newton's method on `D`.
pub fn poles_residues(r: &BarycentricRational) -> Result<Vec<PoleResidue>> {
    let m = r.support.len();
    if m < 2 {
        return Ok(Vec::new());
    }
    let wsum: C64 = r.weights.iter().sum();
    let wabs: f64 = r.weights.iter().map(|w| w.norm()).sum();
    if wsum.norm() < 1e-14 * wabs {
        return Err(Error::Eigensolve("weights sum to zero".into()));
    }
    let radius = r.support.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let real = r.support.iter().chain(&r.weights).chain(&r.values).all(|v| v.im == 0.0);
    let sigma = if real { C64::new(3.0 * radius + 1.0, 0.0) } else { C64::new(0.0, 3.0 * radius + 1.0) };
    let s: Vec<C64> = r.support.iter().map(|z| z - sigma).collect();
    let entry = |i: usize, j: usize| {
        let d = if i == j { s[i] } else { C64::new(0.0, 0.0) };
        d - r.weights[j] * s[j] / wsum
    };
    let real_schur = if real {
        DMatrix::<f64>::from_fn(m, m, |i, j| entry(i, j).re).try_schur(f64::EPSILON, 10_000)
    } else {
        None
    };
    let mut ev: Vec<C64> = match real_schur {
        Some(schur) => schur.complex_eigenvalues().iter().cloned().collect(),
        None => DMatrix::<C64>::from_fn(m, m, entry)
            .try_schur(f64::EPSILON, 10_000)
            .and_then(|s| s.eigenvalues())
            .ok_or_else(|| Error::Eigensolve("Schur iteration did not converge".into()))?
            .iter()
            .cloned()
            .collect(),
    };
    let spurious = (0..m).min_by(|&a, &b| ev[a].norm().total_cmp(&ev[b].norm())).unwrap_or(0);
    ev.remove(spurious);
    let mut out = Vec::with_capacity(ev.len());
    for mut lam in ev {
        if real && lam.im.abs() <= 1e-13 * (1.0 + lam.norm()) {
            lam.im = 0.0;
        }
        let mut p = lam + sigma;
        if real && p.im < 0.0 {
            // Lower poles are the mirror images of the upper ones.
            continue;
        }
        for _ in 0..4 {
            let (d, dp) = denominator_with_derivative(r, p);
            if dp.norm() == 0.0 || !d.re.is_finite() {
                break;
            }
            let step = d / dp;
            p -= step;
            if step.norm() < 1e-15 * (1.0 + p.norm()) {
                break;
            }
        }
        if real && lam.im == 0.0 {
            p.im = 0.0;
        }
        let (_, dp) = denominator_with_derivative(r, p);
        let num: C64 = r.support.iter().zip(&r.values).zip(&r.weights).map(|((z, f), w)| w * f / (p - z)).sum();
        let residue = num / dp;
        if p.re.is_finite() && p.im.is_finite() && residue.re.is_finite() && residue.im.is_finite() {
            out.push(PoleResidue { pole: p, residue });
            if real && p.im != 0.0 {
                out.push(PoleResidue { pole: p.conj(), residue: residue.conj() });
            }
        }
    }
    Ok(out)
}

fn denominator_with_derivative(r: &BarycentricRational, z: C64) -> (C64, C64) {
    let (mut d, mut dp) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    for (zj, wj) in r.support.iter().zip(&r.weights) {
        let c = C64::new(1.0, 0.0) / (z - zj);
        d += wj * c;
        dp -= wj * c * c;
    }
    (d, dp)
}

/// Poles of an AAA fit to one real-line snapshot with `|residue| >= floor`.
pub fn snapshot_poles(snap: &FieldSnapshot, residue_floor: f64) -> Result<Vec<PoleResidue>> {
    let pts: Vec<C64> = snap.nodes.iter().map(|&x| C64::new(x, 0.0)).collect();
    let vals: Vec<C64> = snap.values.iter().map(|&u| C64::new(u, 0.0)).collect();
    let fit = aaa_fit(&pts, &vals, 1e-13, 100)?;
    Ok(poles_residues(&fit)?.into_iter().filter(|p| p.residue.norm() >= residue_floor).collect())
}

/// Follow the pole nearest `seed` at the last snapshot backwards through the earlier ones.
///
/// If some snapshot has no admissible pole the trajectory stops there and
/// that time is recorded as an unconverged sample.
pub fn aaa_track(snapshots: &[FieldSnapshot], seed: C64, residue_floor: f64, mu: f64) -> Result<PoleTrajectory> {
    let sets = map_slice(snapshots, |s| snapshot_poles(s, residue_floor));
    let mut rev = Vec::with_capacity(snapshots.len());
    let mut target = seed;
    for (snap, set) in snapshots.iter().zip(sets).rev() {
        let set = set?;
        let best = set.iter().min_by(|a, b| {
            let (da, db) = ((a.pole - target).norm(), (b.pole - target).norm());
            da.total_cmp(&db).then(b.residue.norm().total_cmp(&a.residue.norm()))
        });
        match best {
            Some(p) => {
                target = p.pole;
                rev.push(PoleSample { t: snap.t, z: p.pole, residue: Some(p.residue), converged: true });
            }
            None => {
                rev.push(PoleSample { t: snap.t, z: target, residue: None, converged: false });
                break;
            }
        }
    }
    rev.reverse();
    let mut traj = PoleTrajectory::new(TrackMethod::Aaa, mu);
    traj.samples = rev;
    Ok(traj)
}

/// AAA fit of the exact solution sampled on the real-line output nodes at time `t`.
pub fn fit_exact_slice(t: f64, mu: f64) -> Result<BarycentricRational> {
    let opts = crate::colehopf::EvalOptions::default();
    let nodes = crate::realline::output_nodes();
    let vals = map_slice(&nodes, |&x| crate::colehopf::evaluate_u(C64::new(x, 0.0), t, mu, &opts).map(|u| C64::new(u.re, 0.0)));
    let vals = vals.into_iter().collect::<Result<Vec<C64>>>()?;
    let pts: Vec<C64> = nodes.iter().map(|&x| C64::new(x, 0.0)).collect();
    aaa_fit(&pts, &vals, 1e-13, 100)
}

/// Closest upper-half-plane pole of the exact solution at time `t`.
///
/// The exact real-line solution is sampled at the 250 Chebyshev points on
/// `[-5, 5]` and fitted; the lowest fitted pole whose residue is within 25% of
/// `-2 mu` is refined by Newton's method on the Cole-Hopf denominator.
pub fn seed_closest_pole(t: f64, mu: f64) -> Result<C64> {
    let fit = fit_exact_slice(t, mu)?;
    let mut cands: Vec<PoleResidue> = poles_residues(&fit)?
        .into_iter()
        .filter(|p| p.pole.im > 1e-6 && p.pole.re.abs() < 5.0 && (p.residue + 2.0 * mu).norm() < 0.5 * mu)
        .collect();
    cands.sort_by(|a, b| a.pole.im.total_cmp(&b.pole.im));
    for c in cands {
        if let Ok(z) = crate::poletrack::locate_pole(crate::poletrack::DenominatorModel::ExactRoot, c.pole, t, mu) {
            if (z - c.pole).norm() < 0.05 {
                return Ok(z);
            }
        }
    }
    Err(Error::Convergence(format!("no pole candidate at t = {t}, mu = {mu}")))
}
