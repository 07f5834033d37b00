mod common;

use fewnomial::framework::{
    build_aux, certify_uniqueness, lift_solution, project_to_polytope, residual, shift_along_l_perp, ProblemInstance,
};
use fewnomial::io::{parse_problem, problem_to_json};
use fewnomial::linalg::{ratio, to_f64, RatMatrix, RealMatrix};
use fewnomial::oracle::{grid_count, multistart_solve, OracleConfig};
use fewnomial::signchar::{
    ln_lambda, ln_one_minus_lambda, sc_root, trinomial_solve, wronskian_signchar, Branch, ExtremumKind,
    SignCharParams,
};
use fewnomial::trinomials::{
    segment_rule_of_signs, segment_solve, two_trinomial_bound, two_trinomial_solve, two_trinomial_standardize,
    SegmentProblem,
};
use fewnomial::Error;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![0.25..10.0f64, -10.0..-0.25f64]
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn trinomial_count_matches_grid(b1 in exponent(), b2 in exponent(), l1 in -3.0..3.0f64, l2 in -3.0..3.0f64) {
        let sol = trinomial_solve(b1, b2, l1.exp(), l2.exp()).unwrap();
        let g = grid_count(|s| {
            let (u, v) = (l1 + b1 * s, l2 + b2 * s);
            let top = u.max(v);
            top + ((u - top).exp() + (v - top).exp()).ln()
        }, -40.0, 40.0, 1e-3);
        prop_assert_eq!(sol.roots.len(), g.total());
        let changes = if b1 * b2 > 0.0 { 1 } else { 2 };
        prop_assert!(sol.count_with_multiplicity() <= changes);
        for r in &sol.roots {
            let f = l1.exp() * r.x.powf(b1) + l2.exp() * r.x.powf(b2) - 1.0;
            prop_assert!(f.abs() < 1e-9, "f({}) = {}", r.x, f);
        }
    }

    #[test]
    fn sign_char_root_inverts(a in exponent(), b in exponent(), frac in 0.01..0.99f64) {
        let p = SignCharParams::new(a, b);
        let (lo, hi) = p.ln_range();
        let ln_y = match p.extremum().kind {
            ExtremumKind::Max => hi - (1.0 + 3.0 * frac),
            ExtremumKind::Min => lo + (1.0 + 3.0 * frac),
            ExtremumKind::None => -3.0 + 6.0 * frac,
        };
        let branches: &[Branch] = match p.extremum().kind {
            ExtremumKind::None => &[Branch::Whole],
            _ => &[Branch::Minus, Branch::Plus],
        };
        for &br in branches {
            if let Ok(l) = sc_root(p, ln_y.exp(), br) {
                let got = a * l.ln() + b * (1.0 - l).ln();
                prop_assert!((got - ln_y).abs() < 1e-8 * ln_y.abs().max(1.0), "{br:?}: {got} vs {ln_y}");
            }
        }
    }

    #[test]
    fn wronskian_of_differences_is_positive(k in 1usize..=4, seed in any::<u64>(), t in -0.95..0.95f64) {
        let mut rng = common::rng(seed);
        let mut q: Vec<f64> = (0..=k).map(|_| rng.random_range(-1.0..1.0)).collect();
        q.sort_by(|a, b| b.total_cmp(a));
        let f = |q: f64, qq: f64, j: i32| {
            let fact: f64 = (1..=j).map(f64::from).product();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * fact * (q.powi(j + 1) / (1.0 + t * q).powi(j + 1) - qq.powi(j + 1) / (1.0 + t * qq).powi(j + 1))
        };
        let w = DMatrix::from_fn(k, k, |j, i| f(q[i], q[i + 1], j as i32)).determinant();
        let mut prod = 1.0;
        for i in 1..=k {
            prod *= (1..i).map(|v| v as f64).product::<f64>();
            for j in i + 1..=k + 1 {
                prod *= f(q[i - 1], q[j - 1], 0);
            }
        }
        prop_assert!(w > 0.0);
        prop_assert!((w - prod).abs() <= 1e-8 * prod, "{w} vs {prod}");
    }

    #[test]
    fn generalized_inverse_identity(rows in 1usize..5, cols in 1usize..5, entries in prop::collection::vec(-4i64..=4, 16)) {
        let data: Vec<Vec<_>> = (0..rows).map(|i| (0..cols).map(|j| ratio(entries[i * 4 + j], 1)).collect()).collect();
        let m = RatMatrix::from_rows(data, cols);
        let g = m.generalized_inverse();
        prop_assert_eq!(m.mul(&g).mul(&m), m.clone());
        let dual = m.gale_dual();
        prop_assert!(m.mul(&dual).is_zero());
        prop_assert_eq!(dual.cols(), cols - m.rank());
        let mf = m.to_dmatrix();
        let gf = RealMatrix::new(mf.clone()).generalized_inverse();
        prop_assert!((&mf * &gf * &mf - &mf).amax() < 1e-10);
    }

    #[test]
    fn rational_round_trip(nums in prop::collection::vec(-50i64..=50, 6), dens in prop::collection::vec(1i64..=12, 6), c in prop::collection::vec(-5.0..5.0f64, 3)) {
        let r: Vec<String> = nums.iter().zip(&dens).map(|(n, d)| format!("\"{n}/{d}\"")).collect();
        let text = format!(
            r#"{{"A": [[1, 1, -1]], "B": [[{}, {}, {}], [{}, {}, {}]], "c": [{}, {}, {}]}}"#,
            r[0], r[1], r[2], r[3], r[4], r[5], c[0].exp(), c[1].exp(), c[2].exp()
        );
        let Ok(p) = parse_problem(&text) else { return Ok(()) };
        let back = parse_problem(&problem_to_json(&p)).unwrap();
        prop_assert_eq!(&back.a, &p.a);
        prop_assert_eq!(&back.b, &p.b);
        prop_assert_eq!(&back.c, &p.c);
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn segment_solver_matches_grid(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let case = loop {
            if let Some(c) = common::random_segment_case(&mut rng, 4) {
                break c;
            }
        };
        let sp = SegmentProblem::new(&case.instance).unwrap();
        let roots = segment_solve(&sp).unwrap();
        let bound = common::segment_sign_bound(&case.q, &case.b);
        prop_assert_eq!(segment_rule_of_signs(&sp), bound);
        prop_assert!(roots.len() <= bound);
        prop_assert_eq!(roots.len(), common::segment_grid_count(&case));
        for r in &roots {
            prop_assert!(residual(&case.instance, &r.x) <= 1e-8);
        }
    }

    #[test]
    fn lift_round_trip(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let base: ProblemInstance = if rng.random_bool(0.5) {
            common::random_two_trinomials(&mut rng)
        } else {
            loop {
                if let Some(c) = common::random_segment_case(&mut rng, 4) {
                    break c.instance;
                }
            }
        };
        let geo = base.geometry().unwrap();
        let mut y = vec![0.0; base.m()];
        for class in &geo.classes {
            for ray in &class.rays {
                let w: f64 = rng.random_range(0.1..1.0);
                for (k, &j) in class.columns.iter().enumerate() {
                    y[j] += w * to_f64(&ray[k]);
                }
            }
        }
        let b = base.b.to_dmatrix();
        let x0: Vec<f64> = (0..base.n()).map(|_| common::log_uniform(&mut rng, 1.0)).collect();
        let mut p = base.clone();
        for j in 0..p.m() {
            let ln_mono: f64 = (0..p.n()).map(|i| b[(i, j)] * x0[i].ln()).sum();
            p.c[j] = y[j] / ln_mono.exp();
        }
        let aux = build_aux(&p).unwrap();
        let x = lift_solution(&p, &aux, &y).unwrap();
        prop_assert!(residual(&p, &x) <= 1e-8);
        let coords: Vec<f64> = aux.l_perp.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
        prop_assert!(residual(&p, &shift_along_l_perp(&aux, &x, &coords).unwrap()) <= 1e-8);
        // the lifted point maps back to y up to the class normalization
        let back = project_to_polytope(&p, &geo, &x);
        for class in &geo.classes {
            let j0 = class.columns[0];
            for &j in &class.columns {
                let r = back[j] / back[j0] - y[j] / y[j0];
                prop_assert!(r.abs() <= 1e-8 * (y[j] / y[j0]).max(1.0));
            }
        }
    }
}

/// `ln(gamma_1 s_1 + gamma_2 s_2)` in logit coordinates.
fn two_trinomial_ln_sum(e: [SignCharParams; 2], g: [f64; 2], u: f64) -> f64 {
    let (a, b) = (ln_lambda(u), ln_one_minus_lambda(u));
    let t1 = g[0].ln() + e[0].alpha * a + e[0].beta * b;
    let t2 = g[1].ln() + e[1].alpha * a + e[1].beta * b;
    let top = t1.max(t2);
    top + ((t1 - top).exp() + (t2 - top).exp()).ln()
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn two_trinomials_match_grid(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let p = common::random_two_trinomials(&mut rng);
        let tp = match two_trinomial_standardize(&p) {
            Ok(tp) => tp,
            // equal standardized exponents lie outside the solver's domain
            Err(Error::DegenerateToUnivariate(_)) | Err(Error::Shape(_)) | Err(Error::DegenerateExponents(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let roots = match two_trinomial_solve(&tp) {
            Ok(r) => r,
            Err(Error::InfiniteSolutions) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let bound = two_trinomial_bound(&tp).unwrap();
        prop_assert!(roots.len() <= bound && bound <= 5);
        let g = common::stretched_grid_count(|u| two_trinomial_ln_sum(tp.exponents, tp.gamma, u), 740.0, 2e-5);
        prop_assert_eq!(roots.len(), g, "{:?} {:?}", tp.exponents, tp.gamma);
        for r in &roots {
            prop_assert!(residual(&p, &r.x) <= 1e-8, "{:?}", r);
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn uniqueness_certificate_limits_oracle(b1 in -4i64..=4, b2 in -4i64..=4, l1 in -2.0..2.0f64, l2 in -2.0..2.0f64) {
        prop_assume!(b1 != 0 && b2 != 0 && b1 != b2);
        let p = common::instance(&[&[1, 1, -1]], &[&[b1, b2, 0]], &[l1.exp(), l2.exp(), 1.0], None);
        let cert = certify_uniqueness(&p).unwrap();
        let xs = multistart_solve(&p, &OracleConfig::default().with_starts(256)).unwrap();
        if cert.holds {
            prop_assert!(xs.len() <= 1);
        }
        prop_assert_eq!(cert.holds, b1 * b2 > 0);
    }

    #[test]
    fn wronskian_pair_sign(a in exponent(), b in exponent()) {
        // W(1, s) = s', which vanishes exactly at an interior extremum
        let w = wronskian_signchar(&[SignCharParams::new(0.0, 0.0), SignCharParams::new(a, b)]).unwrap();
        let expected = usize::from(a * b > 0.0);
        prop_assert_eq!(w.zeros(), Some(expected));
    }
}
