use lugre_loops::analytic::{extract_minor_loop, loop_closed_form, y_circle, LoopCurve};
use lugre_loops::geometry::{loop_area, trapezoid_area};
use lugre_loops::integrator::{simulate_dahl, simulate_dahl_as_lugre, simulate_lugre, IntegratorConfig};
use lugre_loops::lab::period_iteration;
use lugre_loops::model::{eval_g, lugre_output, DahlParams, MacroDamping, ModelParams, VelocityMap};
use lugre_loops::signal::{
    build_bimodal, variation, BimodalInputSpec, BimodalShape, NormalizedInput, PeriodicSignal,
};
use proptest::prelude::*;

/// Admissible extrema: `umin1 <= umin2 < umax1 <= umax2`, not both equalities.
fn extrema() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    let gap = prop_oneof![1 => Just(0.0), 4 => 0.01f64..2.0];
    (-2.0f64..2.0, gap.clone(), 0.05f64..2.0, gap)
        .prop_filter("both gaps zero", |(_, d1, _, d3)| *d1 > 0.0 || *d3 > 0.0)
        .prop_map(|(a, d1, d2, d3)| (a, a + d1, a + d1 + d2, a + d1 + d2 + d3))
}

fn times() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(0.1f64..3.0).prop_map(|d| [d[0], d[0] + d[1], d[0] + d[1] + d[2], d[0] + d[1] + d[2] + d[3]])
}

fn profile() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..1.0, 2..8).prop_map(|inc| {
        let total: f64 = inc.iter().sum();
        let mut v = vec![0.0];
        let mut acc = 0.0;
        for (i, d) in inc.iter().enumerate() {
            acc += d;
            v.push(if i + 1 == inc.len() { 1.0 } else { acc / total });
        }
        v
    })
}

fn lugre(sigma0: f64, g0: f64) -> ModelParams {
    ModelParams::new(
        sigma0,
        1.0,
        MacroDamping::stribeck(g0 / 2.0, g0, 1.0, 1.0).unwrap(),
        VelocityMap::Zero,
        0.0,
    )
    .unwrap()
}

fn arc_end(c: &LoopCurve, i: usize) -> f64 {
    let s = &c.segments[i];
    let e = (-c.rate() * (s.end - s.start)).exp();
    e * s.start_value + s.direction * c.g0 * (1.0 - e)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn loop_closes_and_chains((a, b, c, d) in extrema(), sigma0 in 0.5f64..8.0, g0 in 1.0f64..4.0) {
        let n = NormalizedInput::from_extrema(a, b, c, d).unwrap();
        let curve = loop_closed_form(&lugre(sigma0, g0), &n);
        let scale = 1e-12 * (1.0 + g0);
        prop_assert!((curve.end_value - curve.segments[0].start_value).abs() < scale);
        prop_assert!((curve.psi(n.rho[4]) - curve.psi(0.0)).abs() < 1e-12);
        for i in 0..3 {
            prop_assert!((arc_end(&curve, i) - curve.segments[i + 1].start_value).abs() < scale);
        }
        let minor = extract_minor_loop(&curve).unwrap();
        let s = minor.samples();
        prop_assert!((s[0].psi - c).abs() < 1e-12);
        prop_assert!((s[s.len() - 1].psi - c).abs() < 1e-12);
        prop_assert_eq!(minor.degenerate, c == d);
    }

    #[test]
    fn loop_moves_towards_saturation((a, b, c, d) in extrema(), sigma0 in 0.5f64..8.0, g0 in 1.0f64..4.0) {
        let curve = loop_closed_form(&lugre(sigma0, g0), &NormalizedInput::from_extrema(a, b, c, d).unwrap());
        for s in &curve.samples[..curve.samples.len() - 1] {
            let dir = curve.segments[s.segment].direction;
            let slope = curve.slope(s.rho);
            if dir > 0.0 && s.y < g0 {
                prop_assert!(slope > 0.0);
            }
            if dir < 0.0 && s.y > -g0 {
                prop_assert!(slope < 0.0);
            }
        }
    }

    #[test]
    fn loop_ignores_sigma1_f_and_g_away_from_rest(
        (a, b, c, d) in extrema(),
        sigma0 in 0.5f64..8.0,
        g0 in 1.0f64..4.0,
        sigma1 in 0.0f64..20.0,
        slope in -2.0f64..2.0,
        vs in 0.1f64..5.0,
    ) {
        let n = NormalizedInput::from_extrema(a, b, c, d).unwrap();
        let base = lugre(sigma0, g0);
        let reference = loop_closed_form(&base, &n);
        let f = VelocityMap::table(vec![-1.0, 0.0, 1.0], vec![-slope.abs(), 0.0, slope.abs()]).unwrap();
        let other = base
            .clone()
            .with_sigma1(sigma1).unwrap()
            .with_f(f).unwrap()
            .with_g(MacroDamping::stribeck(0.3 * g0, g0, vs, 2.0).unwrap()).unwrap();
        prop_assert_eq!(&loop_closed_form(&other, &n), &reference);
        let constant = base.with_g(MacroDamping::constant(g0).unwrap()).unwrap();
        prop_assert_eq!(&loop_closed_form(&constant, &n), &reference);
    }

    #[test]
    fn area_oracles_agree((a, b, c, d) in extrema(), sigma0 in 0.5f64..8.0, g0 in 1.0f64..4.0) {
        let curve = loop_closed_form(&lugre(sigma0, g0), &NormalizedInput::from_extrema(a, b, c, d).unwrap());
        let shoelace = curve.area().unwrap();
        prop_assert!(shoelace > 0.0);
        prop_assert!((shoelace + trapezoid_area(&curve.points())).abs() < 1e-10);
        let minor = extract_minor_loop(&curve).unwrap();
        let pts: Vec<(f64, f64)> = minor.samples().iter().map(|s| (s.psi, s.y)).collect();
        prop_assert!((minor.area().unwrap() + trapezoid_area(&pts)).abs() < 1e-10);
    }

    #[test]
    fn normalized_input_identities((a, b, c, d) in extrema(), r in 0.0f64..20.0) {
        let n = NormalizedInput::from_extrema(a, b, c, d).unwrap();
        let r1 = c - a;
        let r2 = r1 + c - b;
        let r3 = r2 + d - b;
        let r4 = r3 + d - a;
        for (x, y) in n.rho[1..].iter().zip([r1, r2, r3, r4]) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        prop_assert!((n.rho5 - (r2 + c - b)).abs() < 1e-12);
        prop_assert!(n.rho5 > n.rho[2] && n.rho5 <= n.rho[3]);
        prop_assert!((n.psi(n.rho[1]) - c).abs() < 1e-12);
        prop_assert!((n.psi(n.rho5) - c).abs() < 1e-12);
        prop_assert!((n.psi(r + n.period()) - n.psi(r)).abs() < 1e-12);
        let s = n.psi_slope(r);
        prop_assert!(s == 1.0 || s == -1.0);
        let h = 1e-7;
        let rr = r % n.period();
        if n.rho.iter().chain([n.period()].iter()).all(|k| (rr - k).abs() > 2.0 * h) {
            prop_assert!(((n.psi(rr + h) - n.psi(rr)) / h - s).abs() < 1e-6);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_linear((a, b, c, d) in extrema(), t in times(), seed in any::<u64>()) {
        let spec = BimodalInputSpec::new(a, b, c, d, Some(t), BimodalShape::PiecewiseLinear).unwrap();
        let u = build_bimodal(&spec).unwrap();
        let n = NormalizedInput::from_spec(&spec);
        let mut state = seed | 1;
        for _ in 0..1000 {
            // xorshift for a cheap uniform stream inside the case
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let tt = (state >> 11) as f64 / (1u64 << 53) as f64 * t[3];
            prop_assert!((n.psi(variation(&u, tt)) - u.value(tt)).abs() < 1e-12);
        }
    }

    #[test]
    fn conjugation_smooth((a, b, c, d) in extrema(), t in times(), p in prop::array::uniform4(profile())) {
        let spec = BimodalInputSpec::new(a, b, c, d, Some(t), BimodalShape::SmoothMonotone(p)).unwrap();
        let u = build_bimodal(&spec).unwrap();
        let n = NormalizedInput::from_spec(&spec);
        for k in 0..=1000 {
            let tt = t[3] * k as f64 / 1000.0;
            prop_assert!((n.psi(variation(&u, tt)) - u.value(tt)).abs() < 1e-9);
        }
    }

    #[test]
    fn circle_is_periodic(knots in prop::collection::vec((0.1f64..2.0, -3.0f64..3.0), 2..7), sigma0 in 0.5f64..8.0, g0 in 1.0f64..4.0) {
        // alternate rising/falling with random spans, closing back to 0
        let mut pts = vec![(0.0, 0.0)];
        let mut t = 0.0;
        for (i, (dt, v)) in knots.iter().enumerate() {
            t += dt;
            let last = pts.last().unwrap().1;
            let next = if i % 2 == 0 { last + v.abs() + 0.1 } else { last - v.abs() - 0.1 };
            pts.push((t, next));
        }
        pts.push((t + 1.0, 0.0));
        prop_assume!(pts.windows(2).all(|w| w[0].1 != w[1].1));
        let u = PeriodicSignal::piecewise_linear(&pts).unwrap();
        let yc = y_circle(&lugre(sigma0, g0), &u);
        prop_assert!((yc.value_after_one_period() - yc.initial_value()).abs() < 1e-12 * (1.0 + g0));
        prop_assert!((yc.eval(u.period()) - yc.initial_value()).abs() < 1e-12 * (1.0 + g0));
    }

    #[test]
    fn period_iteration_decays_geometrically((a, b, c, d) in extrema(), sigma0 in 0.2f64..2.0, g0 in 1.0f64..4.0, x0 in -1.0f64..1.0) {
        let p = lugre(sigma0, g0).with_x0(x0).unwrap();
        let u = build_bimodal(&BimodalInputSpec::linear(a, b, c, d).unwrap()).unwrap();
        let ratio = (-sigma0 * u.variation_per_period() / g0).exp();
        let dist = period_iteration(&p, &u, 4);
        prop_assume!(dist[0].1 > 1e-6);
        for w in dist.windows(2) {
            if w[1].1 > 1e-11 {
                prop_assert!((w[1].1 / w[0].1 / ratio - 1.0).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn g_is_positive(fc in 0.01f64..10.0, extra in 0.0f64..10.0, vs in 0.01f64..10.0, beta in 0.1f64..4.0) {
        let g = MacroDamping::stribeck(fc, fc + extra, vs, beta).unwrap();
        for k in -2000..=2000 {
            let nu = k as f64 * 0.05;
            prop_assert!(eval_g(&g, nu) > 0.0);
        }
    }

    #[test]
    fn output_at_rest_is_spring_force(sigma0 in 0.01f64..100.0, z in -10.0f64..10.0, gamma in 0.1f64..1e4) {
        let f = VelocityMap::table(vec![-1.0, 0.0, 2.0], vec![-0.3, 0.0, 0.9]).unwrap();
        let p = lugre(sigma0, 2.0).with_f(f).unwrap();
        prop_assert_eq!(lugre_output(&p, gamma, z, 0.0, 0.0), sigma0 * z);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dahl_forms_agree(rho in 0.2f64..5.0, fc in 0.2f64..3.0, w0 in -0.9f64..0.9, (a, b, c, d) in extrema(), t in times()) {
        let dahl = DahlParams::new(rho, fc, w0).unwrap();
        let u = build_bimodal(&BimodalInputSpec::new(a, b, c, d, Some(t), BimodalShape::PiecewiseLinear).unwrap()).unwrap();
        let cfg = IntegratorConfig::default();
        let native = simulate_dahl(&dahl, &u, 2, &cfg).unwrap();
        let mapped = simulate_dahl_as_lugre(&dahl, &u, 2, &cfg).unwrap();
        prop_assert_eq!(native.samples.len(), mapped.samples.len());
        for (x, y) in native.samples.iter().zip(&mapped.samples) {
            prop_assert_eq!(x.t, y.t);
            prop_assert!((x.y - y.y).abs() < 10.0 * (cfg.rel_tol * fc + cfg.abs_tol) * (1.0 + rho * fc));
        }
    }

    #[test]
    fn state_stays_in_the_band(c in 0.5f64..3.0, sigma0 in 0.5f64..8.0, frac in -1.0f64..1.0, (a, b, cc, d) in extrema(), gamma in 0.5f64..100.0) {
        let p = ModelParams::new(sigma0, 0.0, MacroDamping::constant(c).unwrap(), VelocityMap::Zero, frac * c / sigma0).unwrap();
        let u = build_bimodal(&BimodalInputSpec::linear(a, b, cc, d).unwrap()).unwrap();
        let traj = simulate_lugre(&p, &u, gamma, 3, &IntegratorConfig::default()).unwrap();
        for s in &traj.samples {
            prop_assert!(s.x.abs() <= c / sigma0 + 1e-7);
        }
    }
}

#[test]
fn area_of_explicit_polygon_uses_closing_segment() {
    use lugre_loops::analytic::LoopSample;
    // an open arc: the vertical closing segment makes it a right triangle
    let s = |rho: f64, psi: f64, y: f64| LoopSample { rho, psi, y, segment: 0 };
    let pts = [s(0.0, 0.0, 0.0), s(1.0, 1.0, 0.0), s(2.0, 0.0, 1.0)];
    assert_eq!(loop_area(&pts, (0.0, 2.0)).unwrap(), -0.5);
}
