use std::f64::consts::PI;

use burgers_poles::colehopf::{evaluate_u, residue_probe, EvalOptions};
use burgers_poles::inner::{winding_count, Quadrant};
use burgers_poles::largetime::*;
use burgers_poles::quadrature::gauss_legendre_rule;
use burgers_poles::C64;
use proptest::prelude::*;

fn coth(x: f64) -> f64 {
    (x.exp() + (-x).exp()) / (x.exp() - (-x).exp())
}

fn sp(mu: f64) -> SimilarityParams {
    SimilarityParams::new(mu).unwrap()
}

#[test]
fn gamma_and_mass() {
    for mu in [0.1, 0.3, 1.0, 3.0] {
        let s = sp(mu);
        assert!((s.gamma - coth(PI / (4.0 * mu))).abs() < 1e-12);
        assert!((s.mass - PI).abs() < 1e-10);
    }
    assert!(sp(0.1).gamma > sp(1.0).gamma || sp(0.1).gamma_minus_one < sp(1.0).gamma_minus_one);
    assert!(sp(1.0).gamma > 1.0 && sp(0.1).gamma > 1.0);
    assert!(sp(0.1).gamma < sp(1.0).gamma);
    assert!(SimilarityParams::new(0.0).is_err());
}

#[test]
fn psi_at_origin() {
    let s = sp(1.0);
    let want = 2.0 / (PI.sqrt() * coth(PI / 4.0));
    assert!((psi(C64::new(0.0, 0.0), &s).unwrap().re - want).abs() < 1e-12 * want);
}

#[test]
fn gaussian_decay() {
    let s = sp(1.0);
    let p0 = psi(C64::new(0.0, 0.0), &s).unwrap().re;
    for x in [8.0, -8.0] {
        let p = psi(C64::new(x, 0.0), &s).unwrap().re;
        let g0 = s.gamma;
        let gx = denominator(C64::new(x, 0.0), &s).unwrap().re;
        let want = (-x * x / 4.0f64).exp() * g0 / gx;
        assert!((p / p0 - want).abs() < 1e-12 * want);
        assert!(p / p0 < 5e-7);
    }
}

fn relative_gap(mu: f64, t: f64) -> f64 {
    let opts = EvalOptions::default();
    let s = (mu * t).sqrt();
    let mut gap = 0.0f64;
    let mut top = 0.0f64;
    for k in 0..=300 {
        let x = s * (-6.0 + 18.0 * k as f64 / 300.0);
        let e = evaluate_u(C64::new(x, 0.0), t, mu, &opts).unwrap().re;
        let a = u_largetime(C64::new(x, 0.0), t, mu).unwrap().re;
        gap = gap.max((e - a).abs());
        top = top.max(e.abs());
    }
    gap / top
}

#[test]
fn approaches_exact_solution() {
    for mu in [0.1, 1.0] {
        let g: Vec<f64> = [10.0, 25.0, 50.0, 100.0].iter().map(|&t| relative_gap(mu, t)).collect();
        assert!(g.windows(2).all(|w| w[1] < w[0]), "mu {mu}: {g:?}");
    }
    let g = relative_gap(1.0, 100.0);
    assert!(g > 0.07 && g < 0.09, "{g}");
    // The steep front at mu = 0.1 is still displaced at t = 100.
    let g = relative_gap(0.1, 100.0);
    assert!(g > 0.8 && g < 0.9, "{g}");
}

#[test]
fn mass_of_similarity_solution() {
    let (mu, t): (f64, f64) = (0.1, 100.0);
    let s = (mu * t).sqrt();
    let rule = gauss_legendre_rule(64).unwrap();
    let (a, b) = (-40.0 * s, 40.0 * s);
    let panels = 200;
    let h = (b - a) / panels as f64;
    let mut m = 0.0;
    for p in 0..panels {
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let xx = a + h * (p as f64 + 0.5 * (x + 1.0));
            m += 0.5 * h * w * u_largetime(C64::new(xx, 0.0), t, mu).unwrap().re;
        }
    }
    assert!((m - PI).abs() < 1e-6, "{m}");
}

#[test]
fn path_limits() {
    let s = sp(1.0);
    assert!((psi_pole_path(1e4, Quadrant::First, &s).unwrap() - PI / 4.0).abs() < 1e-6);
    assert!((psi_pole_path(1e4, Quadrant::Second, &s).unwrap() - 3.0 * PI / 4.0).abs() < 1e-6);
    // Second-quadrant correction is negative.
    assert!(psi_pole_path(5.0, Quadrant::Second, &s).unwrap() < 3.0 * PI / 4.0);
    assert!(psi_pole_path(2.0, Quadrant::First, &s).is_err());
}

fn predicted(n: usize, q: Quadrant, s: &SimilarityParams) -> C64 {
    let rho = psi_pole_moduli(s, n, q).unwrap()[n - 1].clone().unwrap();
    C64::from_polar(rho, psi_pole_path(rho, q, s).unwrap())
}

#[test]
fn first_quadrant_predictions() {
    let s = sp(1.0);
    for n in 2..=6 {
        let p = predicted(n, Quadrant::First, &s);
        let z = find_psi_pole(p, &s).unwrap();
        assert!((z.norm() - p.norm()).abs() < 0.05, "n {n}: {p} vs {z}");
        assert!((z.arg() - p.arg()).abs() < 0.05, "n {n}: {p} vs {z}");
    }
}

#[test]
fn second_quadrant_predictions() {
    let s = sp(1.0);
    let mut errs = Vec::new();
    for n in 2..=6 {
        let p = predicted(n, Quadrant::Second, &s);
        let z = find_psi_pole(p, &s).unwrap();
        errs.push((z - p).norm());
    }
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(errs[4] < 0.05, "{errs:?}");
}

#[test]
fn modulus_seed_is_asymptotic() {
    let s = sp(1.0);
    let rho = psi_pole_moduli(&s, 40, Quadrant::First).unwrap();
    let r40 = rho[39].clone().unwrap();
    assert!((r40 * r40 - psi_pole_modulus_seed(40, Quadrant::First, &s)).abs() < 0.01);
}

#[test]
fn spacing_law() {
    let s = sp(1.0);
    let rho: Vec<f64> = psi_pole_moduli(&s, 21, Quadrant::First).unwrap().into_iter().map(|r| r.unwrap()).collect();
    let gap = rho[20] - rho[19];
    let want = (2.0 * PI / 20.0).sqrt();
    assert!((gap / want - 1.0).abs() < 0.1);
}

#[test]
fn antistokes_radii() {
    let r = antistokes_radius(10, 1.0, 1.0, Quadrant::First).unwrap();
    assert!((r * r - 83.0 * PI).abs() < 1e-10);
    let r2 = antistokes_radius(10, 1.0, 1.0, Quadrant::Second).unwrap();
    assert!((r2 * r2 - 79.0 * PI).abs() < 1e-10);
    let a = antistokes_radius(7, 2.0, 0.3, Quadrant::First).unwrap() / 2f64.sqrt();
    let b = antistokes_radius(7, 50.0, 0.3, Quadrant::First).unwrap() / 50f64.sqrt();
    assert!((a - b).abs() < 1e-12);
    let s = sp(1.0);
    let rho = psi_pole_moduli(&s, 20, Quadrant::First).unwrap()[19].clone().unwrap();
    let t = 3.0;
    let r = antistokes_radius(20, t, 1.0, Quadrant::First).unwrap();
    assert!((r / (t.sqrt() * rho) - 1.0).abs() < 0.02);
    assert!(antistokes_radius(0, 1.0, 1.0, Quadrant::First).is_err());
}

#[test]
fn pole_residue_and_symmetry() {
    let s = sp(1.0);
    let p = find_psi_pole(predicted(3, Quadrant::First, &s), &s).unwrap();
    assert!(p.im > 0.0);
    assert!(denominator(p, &s).unwrap().norm() < 1e-12);
    let res = residue_probe(|e| psi(e, &s), p, 0.05, 64).unwrap();
    assert!((res + 2.0).norm() < 1e-6, "{res}");
    let q = find_psi_pole(predicted(3, Quadrant::First, &s).conj(), &s).unwrap();
    assert!((q - p.conj()).norm() < 1e-10);
    assert!(find_psi_pole(C64::new(0.0, 0.0), &s).is_err());
}

#[test]
fn no_zero_next_to_poles() {
    let (mu, t): (f64, f64) = (1.0, 500.0);
    let s = sp(mu);
    let scale = (mu * t).sqrt();
    for q in [Quadrant::First, Quadrant::Second] {
        for n in [2, 4] {
            let z = find_psi_pole(predicted(n, q, &s), &s).unwrap() * scale;
            let circle: Vec<C64> = (0..64).map(|k| z + C64::from_polar(1.0, 2.0 * PI * k as f64 / 64.0)).collect();
            let w = winding_count(|w| u_largetime(w, t, mu), &circle).unwrap();
            assert_eq!(w, -1, "{q:?} n {n}");
        }
    }
}

#[test]
fn far_field_sector() {
    let s = sp(1.0);
    let eta = C64::new(0.0, 15.0);
    assert!((psi(eta, &s).unwrap() / eta - 1.0).norm() <= 0.05);
}

#[test]
fn small_viscosity_front() {
    // gamma - 1 ~ 3e-7 at mu = 0.1 and must not be lost to cancellation.
    let s = sp(0.1);
    assert!((s.gamma_minus_one - 2.0 / (5.0 * PI).exp_m1()).abs() < 1e-20);
    let p = find_psi_pole(predicted(3, Quadrant::First, &s), &s).unwrap();
    assert!(denominator(p, &s).unwrap().norm() < 1e-12);
}

proptest! {
    #[test]
    fn riccati_residual(r in 0.0f64..3.0, th in 0.0f64..(2.0 * PI), mu in 0.2f64..2.0) {
        let s = sp(mu);
        let eta = C64::from_polar(r, th);
        let h = 1e-5;
        let p = psi(eta, &s).unwrap();
        let d = (psi(eta + h, &s).unwrap() - psi(eta - h, &s).unwrap()) / (2.0 * h);
        let res = p * p - eta * p - d * 2.0;
        prop_assert!(res.norm() <= 1e-7 * (1.0 + p.norm().powi(2)));
        prop_assert!((psi_derivative(eta, &s).unwrap() - d).norm() <= 1e-7 * (1.0 + p.norm().powi(2)));
    }

    #[test]
    fn schwarz_symmetry(x in -5.0f64..5.0, y in -5.0f64..5.0) {
        let z = C64::new(x, y);
        let a = u_largetime(z, 10.0, 0.5);
        let b = u_largetime(z.conj(), 10.0, 0.5);
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert!((a - b.conj()).norm() <= 1e-12 * (1.0 + a.norm()));
        }
    }
}
