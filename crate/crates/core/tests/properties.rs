//! Property suites over randomly generated values.

use proptest::prelude::*;

use confray::minkowski::{minkowski_dot, FourVector, DIM};
use confray::parser::{parse_vector_field, render_vector_field};
use confray::poly::Polynomial;
use confray::ray::LightRay;
use confray::scalar::Scalar;
use confray::vecfield::{
    conformal_factor, lie_commutator, standard_generator, GeneratorKind, VectorField,
};

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=3).prop_map(|(p, q)| Scalar::ratio(p, q))
}

fn four_vector_strategy() -> impl Strategy<Value = FourVector> {
    proptest::array::uniform4(scalar_strategy()).prop_map(FourVector::upper)
}

fn polynomial_strategy(degree: u32) -> impl Strategy<Value = Polynomial> {
    let term = (proptest::array::uniform4(0u32..=degree), scalar_strategy());
    proptest::collection::vec(term, 0..4).prop_map(move |terms| {
        let mut p = Polynomial::zero();
        for (mut exps, coef) in terms {
            // trim the multi-index down to the requested total degree
            while exps.iter().sum::<u32>() > degree {
                let axis = exps.iter().position(|&e| e > 0).unwrap();
                exps[axis] -= 1;
            }
            p.add_term(exps, coef);
        }
        p
    })
}

fn field_strategy(degree: u32) -> impl Strategy<Value = VectorField> {
    proptest::array::uniform4(polynomial_strategy(degree)).prop_map(VectorField::new)
}

/// Null momenta via rescaled Pythagorean-style quadruples.
fn null_momentum_strategy() -> impl Strategy<Value = FourVector> {
    let triples = [
        [1i64, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [1, 2, 2],
        [3, 4, 0],
        [2, 3, 6],
        [1, 4, 8],
        [4, 4, 7],
        [-1, 2, -2],
        [3, -4, 0],
        [-2, -3, 6],
        [6, 6, 7],
    ];
    (0..triples.len(), 1i64..=3).prop_map(move |(i, q)| {
        let [a, b, c] = triples[i];
        let d = ((a * a + b * b + c * c) as f64).sqrt().round() as i64;
        FourVector::upper([
            Scalar::ratio(d, q),
            Scalar::ratio(a, q),
            Scalar::ratio(b, q),
            Scalar::ratio(c, q),
        ])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dot_is_symmetric(u in four_vector_strategy(), v in four_vector_strategy()) {
        prop_assert_eq!(minkowski_dot(&u, &v), minkowski_dot(&v, &u));
    }

    #[test]
    fn lowering_then_raising_is_identity(u in four_vector_strategy()) {
        prop_assert_eq!(u.lowered().unwrap().raised().unwrap(), u);
    }

    #[test]
    fn commutator_is_antisymmetric(a in field_strategy(3), b in field_strategy(3)) {
        prop_assert_eq!(lie_commutator(&a, &b), lie_commutator(&b, &a).neg());
    }

    #[test]
    fn commutator_is_bilinear_in_scaling(
        a in field_strategy(2),
        b in field_strategy(2),
        c in scalar_strategy(),
    ) {
        let scaled = lie_commutator(&a.scale(&c), &b);
        prop_assert_eq!(scaled, lie_commutator(&a, &b).scale(&c));
    }

    #[test]
    fn conformal_factor_is_linear_on_basis_combinations(
        c1 in scalar_strategy(),
        c2 in scalar_strategy(),
        i in 0usize..15,
        j in 0usize..15,
    ) {
        let a = standard_generator(GeneratorKind::ALL[i]);
        let b = standard_generator(GeneratorKind::ALL[j]);
        let combo = a.scale(&c1).add(&b.scale(&c2));
        let lambda = conformal_factor(&combo).unwrap();
        let expected = &conformal_factor(&a).unwrap().scale(&c1)
            + &conformal_factor(&b).unwrap().scale(&c2);
        prop_assert_eq!(lambda, expected);
    }

    #[test]
    fn render_parse_fixed_point(field in field_strategy(2)) {
        let rendered = render_vector_field(&field);
        let parsed = parse_vector_field(&rendered).unwrap();
        prop_assert_eq!(&parsed.field, &field);
        prop_assert_eq!(render_vector_field(&parsed.field), rendered);
    }

    #[test]
    fn scalar_json_round_trip(s in scalar_strategy()) {
        let json = serde_json::to_string(&s).unwrap();
        let back: Scalar = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn ray_json_round_trip(origin in four_vector_strategy(), momentum in null_momentum_strategy()) {
        let ray = LightRay::new(origin, momentum).unwrap();
        let json = serde_json::to_string(&ray).unwrap();
        let back: LightRay = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, ray);
    }

    #[test]
    fn generator_values_are_invariant_along_rays(
        origin in four_vector_strategy(),
        momentum in null_momentum_strategy(),
        slide in scalar_strategy(),
        sigma in scalar_strategy(),
        kind in 0usize..15,
    ) {
        let ray = LightRay::new(origin, momentum).unwrap();
        let slid = LightRay::new(
            &ray.origin().clone() + &ray.momentum().scale(&slide),
            ray.momentum().clone(),
        ).unwrap();
        let field = standard_generator(GeneratorKind::ALL[kind]);
        prop_assert_eq!(
            ray.generator_value(&field, &sigma),
            slid.generator_value(&field, &Scalar::zero())
        );
    }

    #[test]
    fn eval_distributes_over_products(
        a in polynomial_strategy(2),
        b in polynomial_strategy(2),
        point in proptest::array::uniform4(scalar_strategy()),
    ) {
        let product = &a * &b;
        prop_assert_eq!(product.eval(&point), a.eval(&point) * b.eval(&point));
    }
}

#[test]
fn phase_function_equality_clears_denominators() {
    use confray::phase::PhaseFunction;
    // P_0 and (P_0 · M²) / M² are the same rational function in different
    // canonical forms
    let direct = PhaseFunction::momentum_var(0);
    let m2: PhaseFunction = {
        let mut f = PhaseFunction::zero();
        f = f.add(
            &PhaseFunction::momentum_var_upper(0)
                .mul(&PhaseFunction::momentum_var(0))
                .unwrap(),
        );
        for mu in 1..DIM {
            f = f.add(
                &PhaseFunction::momentum_var_upper(mu)
                    .mul(&PhaseFunction::momentum_var(mu))
                    .unwrap(),
            );
        }
        f
    };
    let inv_m2: PhaseFunction =
        serde_json::from_str(r#"[{"coef":"1","x_exps":[0,0,0,0],"p_exps":[0,0,0,0],"inv_m2":1}]"#)
            .unwrap();
    let wrapped = direct.mul(&m2).unwrap().mul(&inv_m2).unwrap();
    assert_eq!(wrapped, direct);
    assert!(wrapped.sub(&direct).is_zero());
}
