use std::f64::consts::{FRAC_PI_4, PI};

use burgers_poles::colehopf::{evaluate_u, EvalOptions};
use burgers_poles::inner::*;
use burgers_poles::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const fn ci(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Poles of Phi0 at mu = 1 from 30-digit root finding on U(-1/2 - i/4, i xi / sqrt 2).
const POLES_MU1_Q1: [C64; 4] = [ci(1.606986, 2.327280), ci(3.6126, 4.3073), ci(4.9708, 5.6023), ci(6.0579, 6.6425)];
const POLES_MU1_Q2: [C64; 3] = [ci(-2.9661, 4.1704), ci(-4.5696, 5.5463), ci(-5.7608, 6.6206)];

// Independent oracle: the Kummer-function asymptotic series for g at xi = -iY,
// where g ~ U*(-i/8mu, 1/2, -xi^2/4mu) is algebraic and the other solution of
// g'' + (xi/2mu) g' - (i/8mu^2) g = 0 is exponentially large, followed by
// Taylor-series integration of that linear ODE towards the target point.
fn kummer_u_asymptotic(a: C64, b: C64, zeta: C64) -> C64 {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..60 {
        let kf = k as f64;
        term *= (a + kf) * (a - b + 1.0 + kf) / ((kf + 1.0) * (-zeta));
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum * zeta.powc(-a)
}

fn taylor_step(xi0: C64, g: C64, dg: C64, h: C64, mu: f64) -> (C64, C64) {
    let mut c = vec![g, dg];
    for k in 0..60 {
        let kf = k as f64;
        let next = -((xi0 / (2.0 * mu)) * (kf + 1.0) * c[k + 1] + (C64::new(kf / (2.0 * mu), -1.0 / (8.0 * mu * mu))) * c[k])
            / ((kf + 1.0) * (kf + 2.0));
        c.push(next);
    }
    let mut val = C64::new(0.0, 0.0);
    let mut der = C64::new(0.0, 0.0);
    for k in (0..c.len()).rev() {
        val = val * h + c[k];
        if k >= 1 {
            der = der * h + c[k] * k as f64;
        }
    }
    (val, der)
}

fn phi0_oracle(target: C64, mu: f64) -> C64 {
    let y = 12.0 * mu.sqrt().max(1.0) + 10.0;
    let start = C64::new(0.0, -y);
    let a = C64::new(0.0, -0.125 / mu);
    let zeta = -start * start / (4.0 * mu);
    let mut g = kummer_u_asymptotic(a, C64::new(0.5, 0.0), zeta);
    let mut dg = -a * kummer_u_asymptotic(a + 1.0, C64::new(1.5, 0.0), zeta) * (-start / (2.0 * mu));
    let corner = C64::new(target.re, -y);
    let mut xi = start;
    for leg in [corner, target] {
        let d = leg - xi;
        let n = (d.norm() / 0.1).ceil().max(1.0) as usize;
        let h = d / n as f64;
        for _ in 0..n {
            let (g1, dg1) = taylor_step(xi, g, dg, h, mu);
            g = g1;
            dg = dg1;
            xi += h;
            let s = g.norm();
            g /= s;
            dg /= s;
        }
    }
    -2.0 * mu * dg / g
}

#[test]
fn farfield_value_on_negative_imaginary_axis() {
    let v = phi0(ci(0.0, -10.0), 1.0).unwrap();
    assert!((v - 0.05).norm() < 0.02 * 0.05, "{v}");
    let o = phi0_oracle(ci(0.0, -10.0), 1.0);
    assert!((v - o).norm() < 1e-8 * o.norm(), "{v} vs {o}");
}

#[test]
fn agrees_with_taylor_oracle() {
    for mu in [1.0, 0.5, 0.2] {
        for xi in [ci(0.3, 0.2), ci(-1.5, 1.0), ci(2.0, -0.5), ci(0.0, 2.5), ci(-2.0, -2.0)] {
            let v = phi0(xi, mu).unwrap();
            let o = phi0_oracle(xi, mu);
            assert!((v - o).norm() < 1e-7 * o.norm().max(1.0), "mu={mu} xi={xi}: {v} vs {o}");
        }
    }
}

#[test]
fn riccati_residual() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mu = 1.0;
    let mut checked = 0;
    while checked < 100 {
        let xi = C64::from_polar(3.0 * rng.random::<f64>().sqrt(), 2.0 * PI * rng.random::<f64>());
        let p = phi0(xi, mu).unwrap();
        if p.norm() > 50.0 {
            continue;
        }
        let h = 1e-5;
        let dp = (phi0(xi + h, mu).unwrap() - phi0(xi - h, mu).unwrap()) / (2.0 * h);
        let res = p * p - xi * p - dp * (2.0 * mu) - C64::new(0.0, 0.5);
        assert!(res.norm() <= 1e-6, "xi={xi}: {res}");
        checked += 1;
    }
}

#[test]
fn matches_exact_solution_near_i() {
    let t: f64 = 1e-6;
    let xi = ci(1.0, 1.0);
    let st = t.sqrt();
    let exact = evaluate_u(C64::new(0.0, 1.0) + xi * st, t, 1.0, &EvalOptions::default()).unwrap() * st;
    let inner = phi0(xi, 1.0).unwrap();
    assert!((exact - inner).norm() < 1e-3 * inner.norm(), "{exact} vs {inner}");
}

#[test]
fn kummer_form_in_lower_half_plane() {
    for xi in [ci(0.5, -0.7), ci(-2.0, -1.0), ci(1.5, -3.0)] {
        let a = phi0(xi, 0.4).unwrap();
        let b = phi0_kummer(xi, 0.4).unwrap();
        assert!((a - b).norm() < 1e-8 * a.norm(), "{a} vs {b}");
    }
}

#[test]
fn local_pole_expansion() {
    let mu = 0.5;
    let xs = refine_pole(ci(1.41666, 1.16302), mu).unwrap();
    let lp = phi0_local_pole(xs, mu).unwrap();
    assert_eq!(lp.residue, C64::new(-1.0, 0.0));
    assert_eq!(lp.constant, xs / 2.0);
    // Laurent coefficients by the trapezoid rule on a circle of radius 1e-2.
    let (n, r) = (128, 1e-2);
    let mut c = [C64::new(0.0, 0.0); 3];
    for k in 0..n {
        let e = C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        let f = phi0(xs + e * r, mu).unwrap();
        c[0] += f * e * r;
        c[1] += f;
        c[2] += f / (e * r);
    }
    for v in c.iter_mut() {
        *v /= n as f64;
    }
    assert!((c[0] - lp.residue).norm() < 1e-3);
    assert!((c[1] - lp.constant).norm() < 1e-3);
    assert!((c[2] - lp.linear).norm() < 1e-3, "{} vs {}", c[2], lp.linear);
    assert!(matches!(phi0_local_pole(xs + 0.3, mu), Err(burgers_poles::Error::NotAPole(_))));
}

#[test]
fn farfield_sectors() {
    let mu = 1.0;
    let below = C64::from_polar(20.0, -PI / 2.0);
    let v = phi0(below, mu).unwrap();
    assert!((phi0_farfield(below, mu).unwrap() - v).norm() < 0.05 * v.norm());
    let above = C64::from_polar(20.0, PI / 2.0);
    let v = phi0(above, mu).unwrap();
    assert!((phi0_farfield(above, mu).unwrap() - v).norm() < 0.05 * v.norm());
    let m = antistokes_modulus(mu);
    for r in [6.0, 11.0, 30.0] {
        let f = phi0_farfield(C64::from_polar(r, FRAC_PI_4), mu).unwrap();
        assert!((f.norm() - m).abs() < 1e-12 * m);
    }
    let g = burgers_poles::specfun::gamma_c(C64::new(0.0, -0.25)).unwrap().value;
    assert!((m - 2.0 * PI.sqrt() * (PI / 8.0).exp() / g.norm()).abs() < 1e-12);
}

#[test]
fn path_angle() {
    for q in [Quadrant::First, Quadrant::Second] {
        let far = pole_path_angle(1e8, q, 1.0).unwrap();
        let ray = if q == Quadrant::First { FRAC_PI_4 } else { 3.0 * FRAC_PI_4 };
        assert!((far - ray).abs() < 1e-12);
    }
    let th = pole_path_angle(5.0, Quadrant::First, 1.0).unwrap();
    let nearest = POLES_MU1_Q1.iter().min_by(|a, b| (a.norm() - 5.0).abs().total_cmp(&(b.norm() - 5.0).abs())).unwrap();
    let p = refine_pole(*nearest, 1.0).unwrap();
    assert!((th - p.arg()).abs() < 0.02, "{th} vs {}", p.arg());
    // Second quadrant: denominator |xi|^2 - 1 and the opposite sign on ln|xi|.
    let (rho, mu): (f64, f64) = (4.0, 0.7);
    let l = rho.ln() - PI / (8.0 * mu) - 0.5 * (PI / (4.0 * mu)).sinh().ln();
    let q1 = pole_path_angle(rho, Quadrant::First, mu).unwrap() - FRAC_PI_4;
    let q2 = pole_path_angle(rho, Quadrant::Second, mu).unwrap() - 3.0 * FRAC_PI_4;
    assert!((q1 - 2.0 * mu * l / (rho * rho + 1.0)).abs() < 1e-14);
    assert!((q2 - 2.0 * mu * (-l - PI / (4.0 * mu)) / (rho * rho - 1.0)).abs() < 1e-14);
}

#[test]
fn root_found_poles_match_reference() {
    for p in POLES_MU1_Q1.iter().chain(POLES_MU1_Q2.iter()) {
        let r = refine_pole(*p, 1.0).unwrap();
        assert!((r - p).norm() < 1e-4, "{r} vs {p}");
    }
}

fn predicted(n: usize, q: Quadrant) -> C64 {
    let poles = transcendental_poles(1.0, n, q).unwrap();
    poles.iter().find(|p| p.n == n).unwrap().xi
}

fn nearest_root(seed: C64) -> C64 {
    refine_pole(seed, 1.0).unwrap()
}

// The asymptotic equations improve with n. In the first quadrant the
// predictions are within 0.05 from n = 2 on; n = 1 sits just outside.
#[test]
fn transcendental_predictions_first_quadrant() {
    for n in 2..=5 {
        let p = predicted(n, Quadrant::First);
        let r = nearest_root(p);
        assert!((p - r).norm() < 0.05, "n={n}: {p} vs {r}");
        assert!(p.re > 0.0 && p.im > 0.0);
    }
    let p = predicted(1, Quadrant::First);
    let d = (p - nearest_root(p)).norm();
    assert!(d < 0.08, "n=1 off by {d}");
}

#[test]
fn transcendental_predictions_second_quadrant() {
    let mut last = f64::INFINITY;
    for n in 1..=5 {
        let p = predicted(n, Quadrant::Second);
        let d = (p - nearest_root(p)).norm();
        assert!(d < 0.2 && d < last, "n={n}: {d}");
        last = d;
    }
    assert!(last < 0.05);
}

#[test]
fn moduli_spacing_and_monotonicity() {
    for q in [Quadrant::First, Quadrant::Second] {
        let m: Vec<f64> = pole_moduli(1.0, 21, q).unwrap().into_iter().map(|r| r.unwrap()).collect();
        assert!(m.windows(2).all(|w| w[1] > w[0]));
        let spacing = m[20] - m[19];
        let ratio = spacing / (2.0 * PI / 20.0).sqrt();
        assert!((ratio - 1.0).abs() < 0.1, "{q:?} ratio {ratio}");
    }
}

#[test]
fn lowest_pole_side_of_real_axis() {
    assert!(lowest_pole(1.0).unwrap().im > 0.0);
    assert!(lowest_pole(0.1).unwrap().im < 0.0);
    let l = lowest_pole(0.05).unwrap();
    assert!(l.re > 0.0 && l.im < 0.0);
    assert!((lowest_pole(0.3).unwrap() - ci(1.31373, 0.57047)).norm() < 1e-4);
}

#[test]
fn critical_viscosity() {
    let m = critical_mu().unwrap();
    assert!((m - 0.1468).abs() < 0.002, "{m}");
}

#[test]
fn stokes_wedge() {
    assert_eq!(stokes_flags(ci(0.0, 2.0)).unwrap(), StokesRegion::BetweenWedge);
    assert_eq!(stokes_flags(ci(2.0, 0.0)).unwrap(), StokesRegion::BelowAntiStokes);
    let z = ci(0.0, 1.0) + C64::from_polar(1.0, PI / 3.0);
    assert_eq!(stokes_flags(z).unwrap(), StokesRegion::BetweenWedge);
}

fn quadrant_box(x0: f64, y0: f64, side: f64) -> Vec<C64> {
    vec![ci(x0, y0), ci(x0 + side, y0), ci(x0 + side, y0 + side), ci(x0, y0 + side)]
}

#[test]
fn argument_principle_counts() {
    let mu_star = 0.1468;
    // No poles in the third or fourth quadrant above the borderline.
    for mu in [mu_star + 0.01, 0.5, 1.0] {
        assert_eq!(count_poles(mu, &quadrant_box(0.0, -6.0, 6.0)).unwrap(), 0, "mu={mu}");
        assert_eq!(count_poles(mu, &quadrant_box(-6.0, -6.0, 6.0)).unwrap(), 0, "mu={mu}");
    }
    // Exactly one pole below the real axis inside |xi| <= 6 below it.
    let mut half_disk: Vec<C64> = (0..=64).map(|k| C64::from_polar(6.0, -PI * k as f64 / 64.0)).collect();
    half_disk.reverse();
    for mu in [mu_star - 0.01, 0.1] {
        assert_eq!(count_poles(mu, &half_disk).unwrap(), 1, "mu={mu}");
    }
    // The first-quadrant box at mu = 1 holds the lowest pole and the next two.
    assert_eq!(count_poles(1.0, &quadrant_box(0.0, 0.0, 6.0)).unwrap(), 3);
}

#[test]
fn lowest_pole_continuity_in_mu() {
    for mu in [0.06, 0.1, 0.15, 0.3, 0.8, 2.0, 4.0] {
        let a = lowest_pole(mu).unwrap();
        let b = lowest_pole(mu + 1e-3).unwrap();
        assert!((a - b).norm() <= 0.1);
    }
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn transcendental_poles_lie_in_their_quadrant(mu in 0.3f64..3.0, n in 1usize..10) {
            for p in transcendental_poles(mu, n, Quadrant::First).unwrap() {
                prop_assert!(p.xi.re > 0.0 && p.xi.im > 0.0);
            }
        }

        #[test]
        fn residue_at_root_found_poles(k in 0usize..4) {
            let p = refine_pole(POLES_MU1_Q1[k], 1.0).unwrap();
            let lp = phi0_local_pole(p, 1.0).unwrap();
            prop_assert_eq!(lp.residue, C64::new(-2.0, 0.0));
        }
    }
}
