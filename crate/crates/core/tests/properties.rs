//! Randomized invariants across the library.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rankone_ps::boundary::{boundary_action, horocycle_bracket, BoundaryPoint, PhaseSpacePoint, SpacePoint};
use rankone_ps::group::{iwasawa_h, iwasawa_kan, random_element, random_k, GroupElement, Model};
use rankone_ps::patterson_sullivan::{ps_pairing, RightTranslate, SymbolWindow, TimeReversed};
use rankone_ps::quadrature::{integrate_1d, integrate_1d_with, Domain, QuadratureSpec, Substitution};
use rankone_ps::quantization::{op_apply_eigen, wigner_bilinear, BumpTrigSymbol, Cutoff, Symbol};
use rankone_ps::support::Bump;
use rankone_ps::transforms::{plane_wave, poisson_transform, principal_series_apply, BoundaryDistribution};
use std::f64::consts::PI;

type C64 = Complex64;

fn model_strategy() -> impl Strategy<Value = Model> {
    prop_oneof![Just(Model::H2), Just(Model::H3)]
}

fn element(model: Model, seed: u64, radius: f64) -> GroupElement {
    random_element(model, seed, radius).unwrap()
}

fn k_from(model: Model, seed: u64) -> GroupElement {
    random_k(model, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn iwasawa_reassembles(model in model_strategy(), seed in any::<u64>(), radius in 0.0..3.0f64) {
        let g = element(model, seed, radius);
        let c = iwasawa_kan(&g);
        prop_assert!(c.reassemble().distance(&g) <= 1e-10 * g.norm());
        prop_assert!(c.k.unitarity_defect() < 1e-12);
    }

    #[test]
    fn h_cocycle(model in model_strategy(), s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (g1, g2, k) = (element(model, s1, 2.0), element(model, s2, 2.0), k_from(model, s3));
        let k2 = iwasawa_kan(&(g2 * k)).k;
        let rhs = iwasawa_h(&(g1 * k2)) + iwasawa_h(&(g2 * k));
        prop_assert!((iwasawa_h(&(g1 * g2 * k)) - rhs).abs() <= 1e-10);
    }

    #[test]
    fn h_of_nbar_is_nonnegative(model in model_strategy(), x in -50.0..50.0f64, y in -50.0..50.0f64) {
        let z = if model == Model::H2 { C64::new(x, 0.0) } else { C64::new(x, y) };
        let h = iwasawa_h(&GroupElement::n_bar(model, z));
        prop_assert!(h >= -1e-15);
        prop_assert!((h - z.norm_sqr().ln_1p()).abs() <= 1e-12 * (1.0 + h));
    }

    #[test]
    fn bracket_k_invariance_and_cocycle(model in model_strategy(), s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>(), t in 0.0..1.0f64) {
        let b = BoundaryPoint::from_k(&k_from(model, s3));
        let x = SpacePoint::from_group(element(model, s1, 2.0));
        let k = k_from(model, s2 ^ 0x9e37);
        let inv = horocycle_bracket(&x.translate(&k), &boundary_action(&k, &b));
        prop_assert!((inv - horocycle_bracket(&x, &b)).abs() <= 1e-10);
        let g = element(model, s2, 1.0 + t);
        let gb = boundary_action(&g, &b);
        let lhs = horocycle_bracket(&x.translate(&g), &gb);
        let rhs = horocycle_bracket(&x, &b) + horocycle_bracket(&SpacePoint::from_group(g), &gb);
        prop_assert!((lhs - rhs).abs() <= 1e-10);
    }

    #[test]
    fn h_of_translate_identities(model in model_strategy(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let (g, gamma) = (element(model, s1, 2.0), element(model, s2, 2.0));
        let w = GroupElement::weyl(model);
        let go = SpacePoint::from_group(gamma);
        let p = PhaseSpacePoint::new(gamma * g);
        prop_assert!((iwasawa_h(&(gamma * g)) - iwasawa_h(&g) - horocycle_bracket(&go, &p.forward())).abs() <= 1e-10);
        prop_assert!((iwasawa_h(&(gamma * g * w)) - iwasawa_h(&(g * w)) - horocycle_bracket(&go, &p.backward())).abs() <= 1e-10);
    }

    #[test]
    fn boundary_action_is_an_action(model in model_strategy(), s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (g1, g2) = (element(model, s1, 2.0), element(model, s2, 2.0));
        let b = BoundaryPoint::from_k(&k_from(model, s3));
        let d = boundary_action(&(g1 * g2), &b).chordal_distance(&boundary_action(&g1, &boundary_action(&g2, &b)));
        prop_assert!(d <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadrature_is_linear(alpha in -3.0..3.0f64, beta in -3.0..3.0f64, c in -1.0..1.0f64) {
        let spec = QuadratureSpec::default();
        let f = |x: f64| C64::new((-(x - c) * (x - c)).exp(), 0.0);
        let g = |x: f64| C64::new(0.0, 1.0 / (1.0 + x * x));
        let i = |h: &dyn Fn(f64) -> C64| integrate_1d(h, Domain::RealLine, &spec).unwrap();
        let (rf, rg) = (i(&f), i(&g));
        let combo = i(&|x| alpha * f(x) + beta * g(x));
        let err = combo.err_est + alpha.abs() * rf.err_est + beta.abs() * rg.err_est + 1e-14;
        prop_assert!((combo.value - (alpha * rf.value + beta * rg.value)).norm() <= err.max(1e-10 * combo.value.norm()));
    }

    #[test]
    fn substitutions_agree(shift in -2.0..2.0f64, width in 0.3..3.0f64) {
        let spec = QuadratureSpec::with_tol(1e-11, 1e-14);
        let f = |x: f64| C64::new(1.0 / ((x - shift) * (x - shift) + width * width), 0.0);
        let a = integrate_1d_with(f, Domain::RealLine, Substitution::Rational, &spec).unwrap();
        let b = integrate_1d_with(f, Domain::RealLine, Substitution::Quadratic, &spec).unwrap();
        let exact = PI / width;
        prop_assert!((a.value.re - exact).abs() <= 1e-9 * exact);
        prop_assert!((b.value.re - exact).abs() <= 1e-9 * exact);
    }

    #[test]
    fn tighter_tolerance_does_not_increase_error(width in 0.2..2.0f64) {
        // oracle set: Lorentzians with closed-form integrals
        let f = |x: f64| C64::new(1.0 / (x * x + width * width), 0.0);
        let exact = PI / width;
        let mut last = f64::INFINITY;
        for tol in [1e-4, 1e-7, 1e-10] {
            let r = integrate_1d(f, Domain::RealLine, &QuadratureSpec::with_tol(tol, 1e-15)).unwrap();
            let err = (r.value.re - exact).abs();
            prop_assert!(err <= last.max(1e-14 * exact), "tol {}: {} after {}", tol, err, last);
            last = err;
        }
    }

    #[test]
    fn poisson_intertwines_and_is_equivariant(
        model in model_strategy(), s1 in any::<u64>(), s2 in any::<u64>(), lambda in 0.1..8.0f64,
        w in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 3),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(s1);
        let pts: Vec<BoundaryPoint> = (0..3).map(|_| BoundaryPoint::from_k(&random_k(model, &mut rng))).collect();
        let pairs: Vec<(C64, BoundaryPoint)> = w.iter().zip(&pts).map(|(&(a, b), &p)| (C64::new(a, b), p)).collect();
        let t = BoundaryDistribution::from_pairs(model, &pairs).unwrap();
        let g = element(model, s2, 2.0);
        let z = SpacePoint::from_group(g);
        let phi = poisson_transform(&t, lambda);
        let scale = phi.atomic_scale(&z);
        let rhs = t.pair(principal_series_apply(&g, lambda, |_| C64::new(1.0, 0.0))).unwrap();
        prop_assert!((phi.eval(&z).unwrap() - rhs).norm() <= 1e-9 * scale);

        let gamma = element(model, s2 ^ 0x5555, 1.5);
        let y = SpacePoint::from_group(element(model, s1 ^ 0xaaaa, 1.5));
        let twisted = poisson_transform(&t.twist(&gamma, lambda).unwrap(), lambda);
        let gy = y.translate(&gamma);
        prop_assert!((phi.eval(&gy).unwrap() - twisted.eval(&y).unwrap()).norm() <= 1e-9 * phi.atomic_scale(&gy));
    }
}

fn symbol(model: Model) -> BumpTrigSymbol {
    let c = SpacePoint::half_space(model, C64::new(0.2, 0.0), 1.3).unwrap();
    BumpTrigSymbol::new(Bump::new(c, 0.5, 1.0).unwrap(), 0.4, 2, 0.3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn symbol_property_is_exact(model in model_strategy(), s in any::<u64>(), lambda in 0.1..20.0f64) {
        let a = symbol(model);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let b = BoundaryPoint::from_k(&random_k(model, &mut rng));
        let t = BoundaryDistribution::dirac(b);
        let op = op_apply_eigen(&a, lambda, &t).unwrap();
        for i in 0..10u64 {
            let z = SpacePoint::from_group(element(model, s.wrapping_add(i), 1.5));
            prop_assert_eq!(op.eval(&z).unwrap(), a.eval(&z, &b) * plane_wave(&z, lambda, &b));
        }
    }

    #[test]
    fn wigner_is_bilinear(angles in prop::collection::vec(0.0..2.0 * PI, 3), c1 in -2.0..2.0f64, c2 in -2.0..2.0f64) {
        let model = Model::H2;
        let a = symbol(model);
        let chi = Cutoff::new(SpacePoint::origin(model), 1.8).unwrap();
        let spec = QuadratureSpec::with_tol(1e-11, 1e-15);
        let d = |i: usize| BoundaryDistribution::dirac(BoundaryPoint::circle(angles[i]));
        prop_assume!(BoundaryPoint::circle(angles[0]).chordal_distance(&BoundaryPoint::circle(angles[1])) > 1e-3);
        let tk = d(2);
        let w = |t: &BoundaryDistribution| wigner_bilinear(&a, 2.0, t, 3.0, &tk, &chi, &spec).unwrap().value;
        let combo = BoundaryDistribution::from_pairs(
            model,
            &[(C64::new(c1, 0.0), BoundaryPoint::circle(angles[0])), (C64::new(0.0, c2), BoundaryPoint::circle(angles[1]))],
        )
        .unwrap();
        let (w0, w1) = (w(&d(0)), w(&d(1)));
        let expect = c1 * w0 + C64::new(0.0, c2) * w1;
        prop_assert!((w(&combo) - expect).norm() <= 1e-12 * (c1.abs() * w0.norm() + c2.abs() * w1.norm()).max(1e-300));
    }

    #[test]
    fn wigner_ignores_cutoff_outside_support(a0 in 0.0..2.0 * PI, a1 in 0.0..2.0 * PI) {
        prop_assume!(BoundaryPoint::circle(a0).chordal_distance(&BoundaryPoint::circle(a1)) > 1e-2);
        let model = Model::H2;
        let a = symbol(model);
        let spec = QuadratureSpec::with_tol(1e-11, 1e-15);
        let (tj, tk) = (BoundaryDistribution::dirac(BoundaryPoint::circle(a0)), BoundaryDistribution::dirac(BoundaryPoint::circle(a1)));
        // both equal 1 on the symbol support, which lies within distance 1.32 of the origin
        let small = Cutoff::plateau(SpacePoint::origin(model), 1.4, 1.8).unwrap();
        let large = Cutoff::plateau(SpacePoint::origin(model), 1.4, 3.0).unwrap();
        let u = wigner_bilinear(&a, 1.5, &tj, 2.5, &tk, &small, &spec).unwrap().value;
        let v = wigner_bilinear(&a, 1.5, &tj, 2.5, &tk, &large, &spec).unwrap().value;
        prop_assert!((u - v).norm() <= 1e-9 * u.norm().max(1e-12));
    }

    #[test]
    fn ps_flow_and_time_reversal(model in model_strategy(), s in -1.5..1.5f64, lambda in 0.5..4.0f64, seed in any::<u64>()) {
        let a: std::sync::Arc<dyn Symbol> = std::sync::Arc::new(symbol(model));
        let f = SymbolWindow::new(a, Cutoff::new(SpacePoint::origin(model), 1.8).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = *SpacePoint::half_space(model, C64::new(0.2, 0.0), 1.3).unwrap().group_rep();
        let frame = PhaseSpacePoint::new(c * random_k(model, &mut rng));
        let tj = BoundaryDistribution::dirac(frame.forward());
        let tk = BoundaryDistribution::dirac(frame.backward());
        let spec = QuadratureSpec::with_tol(1e-11, 1e-15);
        let base = ps_pairing(&f, lambda, &tj, lambda, &tk, &spec).unwrap().value;
        let flowed = ps_pairing(&RightTranslate::new(s, &f), lambda, &tj, lambda, &tk, &spec).unwrap().value;
        let reversed = ps_pairing(&TimeReversed::new(&f), lambda, &tk, lambda, &tj, &spec).unwrap().value;
        prop_assert!(base.norm() > 1e-6);
        prop_assert!((flowed - base).norm() <= 1e-8 * base.norm());
        prop_assert!((reversed - base).norm() <= 1e-8 * base.norm());
    }
}
