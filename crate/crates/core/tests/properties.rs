use num_traits::{One, Zero};
use proptest::prelude::*;

use symcoerce_core::coercive2d::{decide_weak_coercive_2d, resultant_criterion_2d, ResultantVerdict};
use symcoerce_core::coercive_nd::classify_weak_coercivity;
use symcoerce_core::ellipticity::{construct_quasielliptic, exists_quasielliptic, is_quasielliptic, Existence};
use symcoerce_core::gaussian::rat;
use symcoerce_core::multiplier::{phi_gamma, symbolic_partial};
use symcoerce_core::sturm::count_real_roots;
use symcoerce_core::univariate::{resultant, QPoly};
use symcoerce_core::{format_operator, parse_operator, GaussianRational, MultiIndex, OperatorSystem, Polynomial, WeightVector};

fn poly_strategy(n: usize, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, n), -9i64..=9, -9i64..=9), 0..6).prop_map(move |terms| {
        Polynomial::from_terms(
            n,
            terms.into_iter().map(|(e, a, b)| (MultiIndex(e), GaussianRational::from_ints(a, b))),
        )
    })
}

fn qpoly_strategy() -> impl Strategy<Value = QPoly> {
    prop::collection::vec(-6i64..=6, 1..6).prop_map(|c| QPoly::new(c.into_iter().map(|x| rat(x, 1)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn format_parse_round_trip(p in poly_strategy(3, 4)) {
        let text = format_operator(&p);
        prop_assert_eq!(parse_operator(&text, Some(3)).unwrap(), p);
    }

    #[test]
    fn product_rule_for_derivatives(p in poly_strategy(2, 3), q in poly_strategy(2, 3)) {
        let d = MultiIndex(vec![1, 0]);
        let lhs = (&p * &q).derivative(&d).unwrap();
        let rhs = &(&p.derivative(&d).unwrap() * &q) + &(&p * &q.derivative(&d).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn resultant_vanishes_on_common_factor(f in qpoly_strategy(), g in qpoly_strategy(), c in -5i64..=5) {
        let lin = QPoly::new(vec![rat(c, 1), rat(1, 1)]);
        prop_assume!(!f.is_zero() && !g.is_zero());
        prop_assert!(resultant(&(&f * &lin), &(&g * &lin)).unwrap().is_zero());
    }

    #[test]
    fn resultant_is_antisymmetric_up_to_sign(f in qpoly_strategy(), g in qpoly_strategy()) {
        prop_assume!(f.degree().unwrap_or(0) >= 1 && g.degree().unwrap_or(0) >= 1);
        let (m, n) = (f.degree().unwrap(), g.degree().unwrap());
        let sign = if (m * n) % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
        prop_assert_eq!(resultant(&f, &g).unwrap(), resultant(&g, &f).unwrap() * sign);
    }

    #[test]
    fn sturm_counts_squarefree_real_roots(roots in prop::collection::btree_set(-20i64..=20, 0..6), pad in 0usize..3) {
        let mut p = QPoly::constant(rat(1, 1));
        for &r in &roots {
            p = &p * &QPoly::new(vec![rat(-r, 3), rat(1, 1)]);
        }
        for k in 0..pad {
            p = &p * &QPoly::new(vec![rat(k as i64 + 1, 1), rat(0, 1), rat(1, 1)]);
        }
        prop_assert_eq!(count_real_roots(&p).unwrap(), roots.len());
    }

    #[test]
    fn unit_scaling_preserves_2d_verdict(p in poly_strategy(2, 3), a in 1i64..=4, b in -4i64..=4) {
        prop_assume!(p.total_degree().unwrap_or(0) >= 1);
        let u = GaussianRational::from_ints(a, b);
        let v1 = decide_weak_coercive_2d(&p);
        let v2 = decide_weak_coercive_2d(&p.scale(&u));
        if let (Ok(v1), Ok(v2)) = (v1, v2) {
            prop_assert_eq!(v1.is_weakly_coercive(), v2.is_weakly_coercive());
        }
    }

    #[test]
    fn resultant_criterion_agrees_with_normal_form(p in poly_strategy(2, 3)) {
        let Ok(res) = resultant_criterion_2d(&p) else { return Ok(()) };
        let direct = decide_weak_coercive_2d(&p).unwrap();
        match res {
            ResultantVerdict::WeaklyCoercive { .. } => prop_assert!(direct.is_weakly_coercive()),
            ResultantVerdict::NotWeaklyCoercive { .. } => prop_assert!(!direct.is_weakly_coercive()),
            ResultantVerdict::NotApplicable { .. } => {}
        }
    }

    #[test]
    fn classification_is_invariant_under_unit_scaling(p in poly_strategy(3, 2), b in -3i64..=3) {
        prop_assume!(p.total_degree().unwrap_or(0) >= 1);
        let s1 = OperatorSystem::single(p.clone());
        let s2 = OperatorSystem::single(p.scale(&GaussianRational::from_ints(2, b)));
        let v1 = classify_weak_coercivity(&s1).unwrap();
        let v2 = classify_weak_coercivity(&s2).unwrap();
        prop_assert_eq!(v1.is_weakly_coercive(), v2.is_weakly_coercive());
    }

    #[test]
    fn constructed_systems_are_quasielliptic(l in prop::collection::vec(1u32..=5, 1..=5), n_ops in 1usize..=3) {
        let w = WeightVector::new(l).unwrap();
        if let Existence::Exists { .. } = exists_quasielliptic(&w, n_ops) {
            let s = construct_quasielliptic(&w, n_ops).unwrap();
            prop_assert_eq!(s.len(), n_ops);
            prop_assert!(is_quasielliptic(&s, &w).unwrap().passes());
        }
    }

    #[test]
    fn symbolic_partial_matches_finite_difference(x in 3.0f64..40.0, y in -40.0f64..-3.0, k in 0usize..2) {
        let s = OperatorSystem::single(parse_operator("D1^2 + D2^2 + 1", Some(2)).unwrap());
        let phi = phi_gamma(&s, &MultiIndex(vec![1, 1])).unwrap();
        let mut e = vec![0u32; 2];
        e[k] = 1;
        let d = symbolic_partial(&phi, &MultiIndex(e)).unwrap();
        let h = 1e-5;
        let mut xp = [x, y];
        let mut xm = [x, y];
        xp[k] += h;
        xm[k] -= h;
        let fd = (phi.eval(&xp) - phi.eval(&xm)) / (2.0 * h);
        let exact = d.eval(&[x, y]);
        prop_assert!((fd - exact).norm() <= 1e-6 * (1.0 + exact.norm()), "fd {fd} exact {exact}");
    }
}

#[test]
fn constant_polynomial_has_no_real_roots() {
    assert_eq!(count_real_roots(&QPoly::constant(rat(3, 1))).unwrap(), 0);
    assert!(QPoly::constant(rat(1, 1)).coeff(0).is_one());
}
