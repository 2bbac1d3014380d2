use std::f64::consts::PI;

use burgers_poles::generalbeta::*;
use burgers_poles::inner::winding_count;
use burgers_poles::{Error, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn regimes() {
    assert_eq!(BetaRegime::new(0.5).unwrap().regime, Regime::DiffusionDominated);
    assert_eq!(BetaRegime::new(1.0).unwrap().regime, Regime::Borderline);
    assert_eq!(BetaRegime::new(2.0).unwrap().regime, Regime::AdvectionDominated);
    assert!(BetaRegime::new(0.0).is_err());
    assert_eq!(BetaRegime::new(0.5).unwrap().dominant_order(), 2.5);
    assert_eq!(BetaRegime::new(2.0).unwrap().dominant_order(), 5.0);
}

#[test]
fn dominant_u1_term() {
    for (beta, diffusive) in [(0.3, true), (0.7, true), (1.5, false), (2.0, false)] {
        let far = u1_terms(c(0.0, 1.0) + c(1e-2, 1e-2), 0.5, beta);
        let near = u1_terms(c(0.0, 1.0) + c(1e-6, 1e-6), 0.5, beta);
        let ratio = |p: (C64, C64)| p.0.norm() / p.1.norm();
        // The ratio scales like |x - i|^(beta - 1).
        let slope = (ratio(near) / ratio(far)).ln() / (1e4f64).ln();
        assert!((slope - (1.0 - beta)).abs() < 1e-6, "{slope}");
        assert_eq!(ratio(near) > ratio(far), diffusive, "beta {beta}");
    }
}

#[test]
fn beta_half_constants() {
    assert!((amplitude(0.5) - c(0.5, -0.5)).norm() < 1e-15);
    for mu in [0.1, 1.0, 3.0] {
        let k = far_constant(0.5, mu).unwrap();
        assert!((k - C64::i().sqrt()).norm() < 1e-14);
        let x = rescaled_poles(0.5, mu, 0).unwrap();
        assert!((x - c(PI / 2.0, 0.0)).norm() < 1e-14);
    }
}

fn second_derivative(f: &dyn Fn(C64) -> C64, x: C64, h: f64) -> (C64, C64) {
    let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    (d1, d2)
}

#[test]
fn inner_far_field() {
    let (mu, beta) = (1.0, 0.5);
    let xi = c(0.0, -20.0);
    let v = beta_lt1_inner(xi, mu, beta).unwrap();
    let want = amplitude(beta) / xi.powf(beta);
    assert!((v / want - 1.0).norm() < 0.03);
}

#[test]
fn inner_is_entire() {
    let (mu, beta) = (1.0, 0.5);
    let f = |x: C64| beta_lt1_inner(x, mu, beta);
    for i in -5..5 {
        for j in -5..5 {
            let (x0, y0) = (i as f64, j as f64);
            let box_: Vec<C64> = (0..80)
                .map(|k| {
                    let s = k as f64 / 20.0;
                    match k / 20 {
                        0 => c(x0 + s, y0),
                        1 => c(x0 + 1.0, y0 + s - 1.0),
                        2 => c(x0 + 3.0 - s, y0 + 1.0),
                        _ => c(x0, y0 + 4.0 - s),
                    }
                })
                .collect();
            let w = winding_count(f, &box_).unwrap();
            assert!(w >= 0, "cell ({i}, {j}) winds {w}");
        }
    }
}

#[test]
fn beta_half_pole_law() {
    let (t, mu) = (1e-4, 0.5);
    let poles = beta_half_poles(t, mu, -2..=2).unwrap();
    assert!(poles.iter().all(|p| p.im > 1.0));
    let l = (1.0 / t).ln();
    let gap = 4.0 * PI * mu.sqrt() * t.sqrt() / l.sqrt();
    for w in poles.windows(2) {
        assert!(((w[1] - w[0]) - gap).norm() < 1e-14);
    }
    let p0 = poles[2];
    let want = c(0.0, 1.0)
        + c(0.0, 1.0) * mu.sqrt() * t.sqrt() * l.sqrt()
        + c(0.0, 1.5) * mu.sqrt() * t.sqrt() * (l.ln() + mu.ln()) / l.sqrt()
        + mu.sqrt() * PI * t.sqrt() / l.sqrt();
    assert!((p0 - want).norm() < 1e-14);
    assert!(matches!(beta_half_poles(t, mu, 0..=3), Err(Error::ValidityRange(_))));
    assert!(beta_half_poles(0.2, mu, 0..=0).is_err());
}

#[test]
fn beta2_branch_point_geometry() {
    let p = beta2_branch_points();
    let r = 3.0 / 16f64.cbrt();
    for z in p {
        assert!((z.norm() - r).abs() < 1e-14);
        // Phi0 = xi0 / 3 satisfies the implicit equation at the branch point.
        let phi = z / 3.0;
        assert!((phi * (z - phi) * (z - phi) + 0.25).norm() < 1e-14);
    }
    let mut args: Vec<f64> = p.iter().map(|z| z.arg()).collect();
    args.sort_by(f64::total_cmp);
    for (a, b) in args.iter().zip([-PI / 3.0, PI / 3.0, PI]) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn branch_point_local_form() {
    // The local square root solves the implicit equation to second order.
    for xi0 in beta2_branch_points() {
        for eps in [1e-3, 1e-4] {
            let xi = xi0 + C64::from_polar(eps, 0.3);
            let phi = advection_local(xi, xi0, 2.0);
            let res = (phi * (xi - phi) * (xi - phi) + 0.25).norm();
            assert!(res < 5.0 * eps, "{res}");
        }
    }
}

#[test]
fn lambda_branch() {
    for xi0 in beta2_branch_points() {
        let lam = lambda_two_thirds(xi0, 0.5, 2.0).unwrap();
        let mag = (1.0f64 / 16.0).powf(1.0 / 9.0) / (3.0f64 * 0.25).cbrt();
        assert!((lam.norm() - mag).abs() < 1e-12);
        let l2 = xi0 * 2.0 / (2.0 * 0.25 * 9.0);
        assert!((lam * lam * lam - l2).norm() < 1e-12);
    }
}

#[test]
fn beta2_offsets_scale() {
    let mu = 0.5;
    let xi0 = beta2_branch_points();
    let a = beta2_poles(1e-3, mu, 3).unwrap();
    let b = beta2_poles(1e-4, mu, 3).unwrap();
    for k in 0..3 {
        for j in 0..3 {
            let oa = a[k][j] - C64::i() - xi0[k] * 1e-3f64.cbrt();
            let ob = b[k][j] - C64::i() - xi0[k] * 1e-4f64.cbrt();
            assert!((oa.norm() / ob.norm() - 10f64.powf(5.0 / 9.0)).abs() < 1e-10);
        }
    }
    assert!(beta2_poles(0.1, mu, 3).is_err());
    assert!(beta2_poles(1e-3, mu, 21).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn inner_ode_residual(x in -3.0f64..3.0, y in -3.0f64..3.0, beta in 0.1f64..0.9, mu in 0.3f64..2.0) {
        let f = |z: C64| beta_lt1_inner(z, mu, beta).unwrap();
        let xi = c(x, y);
        let (d1, d2) = second_derivative(&f, xi, 1e-3);
        let v = f(xi);
        let res = -v * (beta / 2.0) - xi * d1 * 0.5 - d2 * mu;
        let scale = v.norm() + d1.norm() * xi.norm() + d2.norm() * mu;
        prop_assert!(res.norm() <= 1e-6 * scale.max(1.0), "{}", res.norm());
    }
}
