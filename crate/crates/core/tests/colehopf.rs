//! Cole-Hopf evaluation against 40-digit quadrature of the untransformed
//! real-line integrals, plus structural properties.

use burgers_poles::colehopf::*;
use burgers_poles::C64;

type P = (f64, f64);

fn c(p: P) -> C64 {
    C64::new(p.0, p.1)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

// (z, t, mu, D, u) from direct high-precision quadrature over real s.
const REFERENCE: &[(P, f64, f64, P, P)] = &[
    ((0.5, 0.2999999999999999889), 1.0, 0.5, (2.219359992447095287, -0.44414162731614708926), (0.66755968884623906225, 0.0072638475277399979707)),
    ((2.0, 0.5), 2.0, 0.05, (1.6997880478976788247e-6, 0.000019506636960675795797), (1.9855678722013317471, 0.29316718800279551787)),
    ((1.0, 1.1999999999999999556), 0.5, 0.3, (-0.0082081360427506654912, -0.1722477418707548504), (1.3665082104523156755, -2.2102249077865478444)),
    ((-0.69999999999999995559, 1.5), 0.2, 1.0, (2.4983671629691160208, -1.216230198904012464), (0.47287455562600602808, 1.005713536655649967)),
    ((0.2999999999999999889, -1.1000000000000000888), 0.4, 0.2, (-1.1164051437395972546, 0.064628506595977055527), (1.5457445710817180329, -0.61954174723019227852)),
    ((1.5, 0.5999999999999999778), 1.0, 0.05, (-0.000016687438877758432949, -0.000019472048641797100791), (-0.034828381961113456437, -0.086526978760909104421)),
    ((0.9000000000000000222, 0.0), 3.0, 0.1, (3.2441665633670466115, 0.0), (0.58929085320216055415, 0.0)),
    ((0.2000000000000000111, 1.0500000000000000444), 0.01, 0.5, (0.02290502870378908803, -0.07964992936085678572), (-1.8313762278183786742, -5.9167161562083110936)),
    ((3.0, 2.0), 1.5, 0.3, (0.24978426487876803049, -0.062684543971708134345), (0.043122521921699267382, 0.016033952866763923366)),
    ((2.071299999999999919, 0.48208000000000000851), 2.0, 0.05, (-2.4336750151021877676e-9, 6.6988505019621598821e-9), (2372.2005231895503981, -97.936790458041316011)),
];

#[test]
fn matches_high_precision_reference() {
    let o = EvalOptions::default();
    for &(z, t, mu, d, u) in REFERENCE {
        let dv = denominator(c(z), t, mu, &o).unwrap();
        let uv = evaluate_u(c(z), t, mu, &o).unwrap();
        assert!(rel(dv, c(d)) < 1e-9, "D at {z:?},{t},{mu}: {:e}", rel(dv, c(d)));
        assert!(rel(uv, c(u)) < 1e-9, "u at {z:?},{t},{mu}: {:e}", rel(uv, c(u)));
    }
}

/// Plain trapezoid rule on the untransformed integral over a long real interval.
fn trapezoid_denominator(z: C64, t: f64, mu: f64, n: usize, half_width: f64) -> C64 {
    let h = 2.0 * half_width / n as f64;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..=n {
        let s = -half_width + k as f64 * h;
        let e = -(C64::new(s.atan(), 0.0) + (z - s) * (z - s) / (2.0 * t)) / (2.0 * mu);
        let w = if k == 0 || k == n { 0.5 } else { 1.0 };
        acc += e.exp() * w;
    }
    acc * h
}

#[test]
fn denominator_matches_trapezoid_oracle() {
    let d = denominator(C64::new(0.0, 0.0), 1.0, 1.0, &EvalOptions::default()).unwrap();
    let oracle = trapezoid_denominator(C64::new(0.0, 0.0), 1.0, 1.0, 1_000_000, 40.0);
    assert!(rel(d, oracle) < 1e-8, "{:e}", rel(d, oracle));
}

#[test]
fn tracked_point_is_near_a_zero_of_d() {
    let o = EvalOptions::default();
    let z = C64::new(2.0713, 0.48208);
    let z = newton_pole(z, 2.0, 0.05);
    assert!((z - C64::new(2.0713, 0.48208)).norm() < 1e-3);
    let d0 = denominator(z, 2.0, 0.05, &o).unwrap().norm();
    for dz in [C64::new(0.05, 0.0), C64::new(-0.05, 0.0), C64::new(0.0, 0.05), C64::new(0.0, -0.05)] {
        let d1 = denominator(z + dz, 2.0, 0.05, &o).unwrap().norm();
        assert!(d1 >= 1e3 * d0, "|D| ratio {}", d1 / d0);
    }
}

#[test]
fn initial_data_is_recovered_at_small_time() {
    let u = evaluate_u(C64::new(0.0, 0.0), 1e-8, 1.0, &EvalOptions::default()).unwrap();
    assert!((u - 1.0).norm() < 1e-5, "{u}");
}

#[test]
fn viscous_profile_stays_bounded_at_shock_time() {
    let ts = 8.0 * 3f64.sqrt() / 9.0;
    let o = EvalOptions::default();
    let mut umax: f64 = 0.0;
    for k in 0..=200 {
        let x = -5.0 + 10.0 * k as f64 / 200.0;
        let u = evaluate_u(C64::new(x, 0.0), ts, 0.1, &o).unwrap();
        assert!(u.im.abs() < 1e-12);
        umax = umax.max(u.re.abs());
    }
    assert!(umax < 2.0 && umax.is_finite());
}

#[test]
fn small_time_series_matches_exact_solution() {
    let o = EvalOptions::default();
    let z = C64::new(0.5, 0.2);
    let exact = evaluate_u(z, 1e-3, 0.3, &o).unwrap();
    let series = naive_series(z, 1e-3, 0.3, 2).unwrap();
    assert!((exact - series).norm() < 1e-6, "{:e}", (exact - series).norm());
    let z = C64::new(2.0, 0.0);
    let exact = evaluate_u(z, 1e-3, 0.5, &o).unwrap();
    let series = naive_series(z, 1e-3, 0.5, 2).unwrap();
    assert!((exact - series).norm() < 1e-7, "{:e}", (exact - series).norm());
}

#[test]
fn naive_series_coefficients() {
    let z = C64::new(0.3, -0.4);
    let u0 = naive_series(z, 0.0, 0.7, 2).unwrap();
    assert_eq!(u0, (C64::new(1.0, 0.0) + z * z).inv());
    // u1(0) = -2 mu
    let mu = 0.37;
    let t = 1e-3;
    let a = naive_series(C64::new(0.0, 0.0), t, mu, 1).unwrap();
    assert!(((a - 1.0) / t - (-2.0 * mu)).norm() < 1e-12);
    assert_eq!(naive_series(C64::new(0.0, 0.99), 0.1, 0.1, 2), Err(burgers_poles::Error::TooCloseToSingularity));
}

#[test]
fn saddle_series_expands_to_naive_series() {
    let z = C64::new(0.7, 0.0);
    let mu = 0.3;
    let s0 = saddle_series(z, 0.0, mu).unwrap();
    let n0 = naive_series(z, 0.0, mu, 0).unwrap();
    assert!((s0 - n0).norm() < 1e-10);
    // First t-coefficient by a symmetric difference quotient at t = 0.
    let h = 1e-5;
    let ds = (saddle_series(z, h, mu).unwrap() - saddle_series(z, -h, mu).unwrap()) / (2.0 * h);
    let dn = (naive_series(z, h, mu, 1).unwrap() - naive_series(z, -h, mu, 1).unwrap()) / (2.0 * h);
    assert!((ds - dn).norm() < 1e-9, "{:e}", (ds - dn).norm());
    assert!((saddle_series(C64::new(0.0, 0.0), 0.0, 0.4).unwrap() - 1.0).norm() < 1e-15);
    let exact = evaluate_u(C64::new(0.5, 0.0), 0.01, 0.2, &EvalOptions::default()).unwrap();
    let approx = saddle_series(C64::new(0.5, 0.0), 0.01, 0.2).unwrap();
    assert!((exact - approx).norm() < 1e-4, "{:e}", (exact - approx).norm());
}

#[test]
fn deformation_independence() {
    let a = EvalOptions::default();
    let b = EvalOptions { deform_margin: 0.3, ..a };
    for (z, t, mu) in [(C64::new(0.4, 1.3), 0.3, 0.4), (C64::new(-1.0, 1.05), 0.8, 0.2), (C64::new(0.2, -1.6), 0.1, 1.0)] {
        assert_ne!(contour(z, t, mu, &a).kind, ContourKind::Straight);
        let da = denominator(z, t, mu, &a).unwrap();
        let db = denominator(z, t, mu, &b).unwrap();
        assert!(rel(da, db) < 1e-9, "{z}: {:e}", rel(da, db));
    }
}

#[test]
fn continuous_across_the_stokes_line() {
    let o = EvalOptions::default();
    for x in [-0.5, 0.3, 1.2] {
        let a = evaluate_u(C64::new(x, 1.0 - 1e-9), 0.5, 0.3, &o).unwrap();
        let b = evaluate_u(C64::new(x, 1.0 + 1e-9), 0.5, 0.3, &o).unwrap();
        assert!((a - b).norm() < 1e-7 * a.norm().max(1.0));
    }
}

#[test]
fn slope_matches_finite_difference() {
    let o = EvalOptions::default();
    let z = C64::new(0.8, 0.4);
    let (_, du) = evaluate_u_and_slope(z, 0.7, 0.2, &o).unwrap();
    let h = 1e-5;
    let fd = (evaluate_u(z + h, 0.7, 0.2, &o).unwrap() - evaluate_u(z - h, 0.7, 0.2, &o).unwrap()) / (2.0 * h);
    assert!(rel(du, fd) < 1e-6);
}

/// Coarse grid search for the smallest |1/u| followed by Newton.
fn locate_pole(t: f64, mu: f64, lo: C64, hi: C64) -> C64 {
    let o = EvalOptions::default();
    let mut best = (f64::INFINITY, lo);
    for i in 0..=40 {
        for j in 0..=40 {
            let z = C64::new(lo.re + (hi.re - lo.re) * i as f64 / 40.0, lo.im + (hi.im - lo.im) * j as f64 / 40.0);
            if let Ok(u) = evaluate_u(z, t, mu, &o) {
                if u.inv().norm() < best.0 {
                    best = (u.inv().norm(), z);
                }
            }
        }
    }
    newton_pole(best.1, t, mu)
}

fn newton_pole(mut z: C64, t: f64, mu: f64) -> C64 {
    let o = EvalOptions::default();
    for _ in 0..30 {
        let u = evaluate_u(z, t, mu, &o).unwrap();
        // Near a simple pole 1/u ~ -(z - z*)/(2 mu).
        let dz = u.inv() * (2.0 * mu);
        z += dz;
        if dz.norm() < 1e-13 {
            break;
        }
    }
    z
}

#[test]
fn residue_is_minus_two_mu() {
    let o = EvalOptions::default();
    for (t, mu) in [(2.0, 0.05), (1.0, 0.3), (1.0, 1.0), (0.5, 0.1)] {
        let p = locate_pole(t, mu, C64::new(0.0, 0.05), C64::new(4.0, 4.0));
        let r = residue_of_u(p, t, mu, 1e-3, &o).unwrap();
        assert!((r + 2.0 * mu).norm() < 0.01 * 2.0 * mu, "residue {r} at {p}");
    }
}

#[test]
fn local_pole_form() {
    let o = EvalOptions::default();
    let (mu, t) = (0.05, 2.0);
    let p = newton_pole(C64::new(2.0713, 0.48208), t, mu);
    let dt = 1e-4;
    let dsdt = (newton_pole(p, t + dt, mu) - newton_pole(p, t - dt, mu)) / (2.0 * dt);
    let z = p + C64::new(1e-4, 0.0);
    let rem = evaluate_u(z, t, mu, &o).unwrap() + 2.0 * mu / (z - p);
    assert!(rem.norm() < 10.0 * dsdt.norm());
    assert!((rem - dsdt).norm() < 0.01 * dsdt.norm() + 1e-3, "{rem} vs {dsdt}");
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn schwarz_symmetry(re in -3.0f64..3.0, im in -2.0f64..2.0) {
            let o = EvalOptions::default();
            let z = C64::new(re, im);
            let a = denominator(z.conj(), 0.5, 0.3, &o).unwrap();
            let b = denominator(z, 0.5, 0.3, &o).unwrap().conj();
            prop_assert!(rel(a, b) < 1e-10);
            if let (Ok(ua), Ok(ub)) = (evaluate_u(z.conj(), 0.5, 0.3, &o), evaluate_u(z, 0.5, 0.3, &o)) {
                prop_assume!(ua.norm() < 1e6);
                prop_assert!((ua - ub.conj()).norm() < 1e-10 * ua.norm().max(1.0));
            }
        }
    }
}
