//! Classical light rays: dispersionless null trajectories x = ξ + pσ.
//!
//! A ray stores an origin ξ (any point on the line) and a null,
//! future-pointing momentum p, both upper-index. Generator values
//! Δ = p_ν δ^ν(x) are conserved along the ray for every conformal
//! deformation; this module also provides their first-order change under
//! origin displacements and the infinitesimal conformal transport of the ray
//! itself.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::minkowski::{minkowski_dot, FourVector, DIM};
use crate::scalar::Scalar;
use crate::vecfield::{conformal_factor, NotConformal, VectorField};

/// A dispersionless null ray (ξ, p).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LightRay {
    origin: FourVector,
    momentum: FourVector,
}

#[derive(Debug, Error, PartialEq)]
pub enum RayError {
    /// The momentum is not light-like; carries the residual p·p.
    #[error("momentum is not null: p·p = {residual}")]
    NotNull { residual: Scalar },
    /// The momentum must have p⁰ > 0 to describe a propagating pulse.
    #[error("momentum is not future-pointing: p⁰ = {p0}")]
    NotFuturePointing { p0: Scalar },
    #[error(transparent)]
    NotConformal(#[from] NotConformal),
}

impl LightRay {
    /// Validates the null condition (exact, or within tolerance in float
    /// mode) and future orientation.
    pub fn new(origin: FourVector, momentum: FourVector) -> Result<Self, RayError> {
        let residual = minkowski_dot(&momentum, &momentum);
        if !residual.is_zero() {
            return Err(RayError::NotNull { residual });
        }
        if !momentum[0].is_positive() {
            return Err(RayError::NotFuturePointing {
                p0: momentum[0].clone(),
            });
        }
        Ok(LightRay { origin, momentum })
    }

    /// Constructor for rays produced by first-order transport, whose
    /// momentum is null only up to O(ε²).
    fn first_order(origin: FourVector, momentum: FourVector) -> Self {
        LightRay { origin, momentum }
    }

    pub fn origin(&self) -> &FourVector {
        &self.origin
    }

    pub fn momentum(&self) -> &FourVector {
        &self.momentum
    }

    /// The point ξ + pσ.
    pub fn propagate(&self, sigma: &Scalar) -> FourVector {
        &self.origin + &self.momentum.scale(sigma)
    }

    /// Conserved generator value Δ = p_ν δ^ν(x) evaluated at the affine
    /// parameter σ.
    pub fn generator_value(&self, field: &VectorField, sigma: &Scalar) -> Scalar {
        let point = self.propagate(sigma).into_components();
        minkowski_dot(&self.momentum, &field.eval(&point))
    }

    /// Δ(σ) − Δ(0); exactly zero for every conformal deformation.
    pub fn conservation_residual(
        &self,
        field: &VectorField,
        sigma: &Scalar,
    ) -> Result<Scalar, RayError> {
        conformal_factor(field)?;
        Ok(self.generator_value(field, sigma) - self.generator_value(field, &Scalar::zero()))
    }

    /// First-order change of Δ per unit origin displacement:
    /// p_ν dξ^μ ∂_μ δ^ν(ξ).
    pub fn translation_shift(&self, displacement: &FourVector, field: &VectorField) -> Scalar {
        let point = self.origin.components();
        let directional = FourVector::upper(std::array::from_fn(|nu| {
            let mut acc = Scalar::zero();
            for mu in 0..DIM {
                acc = acc + &displacement[mu] * &field.component(nu).partial(mu).eval(point);
            }
            acc
        }));
        minkowski_dot(&self.momentum, &directional)
    }

    /// Moves the ray actively along the deformation:
    /// ξ' = ξ + ε δ(ξ), p'_μ = p_μ − ε p_ν ∂_μ δ^ν(ξ).
    ///
    /// Generator values then change by ε Δ_{(b,a)} + O(ε²) when transporting
    /// along a and reading generator b; the passive (frame) shift is the
    /// negation. The momentum stays null up to O(ε²): the ε-linear part of
    /// p'·p' is −2ε λ p·p = 0.
    pub fn infinitesimal_transform(
        &self,
        field: &VectorField,
        epsilon: &Scalar,
    ) -> Result<LightRay, RayError> {
        conformal_factor(field)?;
        let point = self.origin.components();
        let origin = &self.origin + &field.eval(point).scale(epsilon);
        let p_lower = self
            .momentum
            .lowered()
            .expect("stored momenta are upper-index");
        let momentum_lower = FourVector::lower(std::array::from_fn(|mu| {
            let mut gradient = Scalar::zero();
            for nu in 0..DIM {
                gradient = gradient + &p_lower[nu] * &field.component(nu).partial(mu).eval(point);
            }
            &p_lower[mu] - &(epsilon * &gradient)
        }));
        Ok(LightRay::first_order(
            origin,
            momentum_lower.raised().expect("just built lower"),
        ))
    }

    /// Display normalisation: slides the origin to the point of the line
    /// closest (in Euclidean 4-distance) to the coordinate origin. Every
    /// derived quantity is invariant under this slide.
    pub fn normalized(&self) -> LightRay {
        let euclid = |u: &FourVector, v: &FourVector| {
            let mut acc = Scalar::zero();
            for mu in 0..DIM {
                acc = acc + &u[mu] * &v[mu];
            }
            acc
        };
        let denom = euclid(&self.momentum, &self.momentum);
        let sigma = (-euclid(&self.origin, &self.momentum))
            .checked_div(&denom)
            .unwrap_or_else(Scalar::zero);
        LightRay {
            origin: self.propagate(&sigma),
            momentum: self.momentum.clone(),
        }
    }

    pub fn to_float_mode(&self) -> LightRay {
        LightRay {
            origin: self.origin.to_float_mode(),
            momentum: self.momentum.to_float_mode(),
        }
    }
}

/// Wire form: `{"origin": [...], "momentum": [...]}`; the loader re-runs the
/// null and orientation checks and rejects bad momenta with the residual.
impl<'de> Deserialize<'de> for LightRay {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            origin: FourVector,
            momentum: FourVector,
        }
        let repr = Repr::deserialize(deserializer)?;
        LightRay::new(repr.origin, repr.momentum).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use crate::vecfield::{lie_commutator, standard_generator, GeneratorKind::*};

    fn ray(origin: [i64; 4], momentum: [i64; 4]) -> LightRay {
        LightRay::new(
            FourVector::upper_ints(origin),
            FourVector::upper_ints(momentum),
        )
        .unwrap()
    }

    #[test]
    fn constructor_enforces_null_and_orientation() {
        let not_null = LightRay::new(
            FourVector::upper_ints([0, 0, 0, 0]),
            FourVector::upper_ints([2, 1, 0, 0]),
        );
        assert_eq!(
            not_null.unwrap_err(),
            RayError::NotNull {
                residual: Scalar::from_int(3)
            }
        );

        let past = LightRay::new(
            FourVector::upper_ints([0, 0, 0, 0]),
            FourVector::upper_ints([-1, 1, 0, 0]),
        );
        assert!(matches!(
            past.unwrap_err(),
            RayError::NotFuturePointing { .. }
        ));
    }

    #[test]
    fn propagate_examples() {
        let r = ray([0, 0, 0, 0], [1, 1, 0, 0]);
        assert_eq!(
            r.propagate(&Scalar::from_int(2)),
            FourVector::upper_ints([2, 2, 0, 0])
        );
        assert_eq!(r.propagate(&Scalar::zero()), *r.origin());

        let r2 = ray([1, 0, 0, 0], [1, 0, 0, 1]);
        assert_eq!(
            r2.propagate(&Scalar::from_int(3)),
            FourVector::upper_ints([4, 0, 0, 3])
        );
    }

    #[test]
    fn generator_value_examples() {
        let r = ray([0, 0, 0, 0], [1, 1, 0, 0]);
        // dilatation through the origin
        assert!(r
            .generator_value(&standard_generator(D), &Scalar::zero())
            .is_zero());
        // translation: p_0 = 1, independent of sigma
        for sigma in [0, 3, -7] {
            assert_eq!(
                r.generator_value(&standard_generator(P0), &Scalar::from_int(sigma)),
                Scalar::one()
            );
        }
        // acceleration generator vanishes on a null ray through the origin
        assert!(r
            .generator_value(&standard_generator(C0), &Scalar::from_int(5))
            .is_zero());
    }

    #[test]
    fn conservation_examples() {
        let r = ray([3, -1, 2, 5], [3, 1, 2, 2]);
        assert!(r
            .conservation_residual(&standard_generator(D), &Scalar::from_int(7))
            .unwrap()
            .is_zero());

        // 25 = 9 + 16, so (5,3,4,0) is exactly null
        let r2 = ray([1, 2, 0, 0], [5, 3, 4, 0]);
        assert!(r2
            .conservation_residual(&standard_generator(C2), &Scalar::ratio(11, 3))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn conservation_requires_a_conformal_field() {
        let r = ray([0, 0, 0, 0], [1, 1, 0, 0]);
        let shear = VectorField::new([
            crate::poly::Polynomial::var(1),
            Default::default(),
            Default::default(),
            Default::default(),
        ]);
        assert!(matches!(
            r.conservation_residual(&shear, &Scalar::one()),
            Err(RayError::NotConformal(_))
        ));
    }

    #[test]
    fn translation_shift_examples() {
        let r = ray([0, 0, 0, 0], [1, 1, 0, 0]);
        // dilatation: p_ν dξ^ν with unit time displacement → p_0 = 1
        assert_eq!(
            r.translation_shift(
                &FourVector::upper_ints([1, 0, 0, 0]),
                &standard_generator(D)
            ),
            Scalar::one()
        );
        // constant fields have zero derivative
        for kind in [P0, P1, P2, P3] {
            assert!(r
                .translation_shift(
                    &FourVector::upper_ints([2, -3, 1, 4]),
                    &standard_generator(kind)
                )
                .is_zero());
        }
    }

    #[test]
    fn displacement_along_the_momentum_is_invisible() {
        // dξ ∥ p preserves the ray, so every conformal generator is blind
        // to it: p_ν p^μ ∂_μ δ^ν = −λ p·p = 0.
        let r = ray([1, -2, 4, 1], [7, 2, 3, 6]);
        for kind in crate::vecfield::GeneratorKind::ALL {
            let slide = r.momentum().scale(&Scalar::ratio(5, 3));
            assert!(
                r.translation_shift(&slide, &standard_generator(kind))
                    .is_zero(),
                "kind {kind}"
            );
        }
    }

    #[test]
    fn transform_by_translation_shifts_origin_only() {
        let r = ray([0, 0, 0, 0], [1, 1, 0, 0]);
        let eps = Scalar::ratio(1, 5);
        let moved = r
            .infinitesimal_transform(&standard_generator(P2), &eps)
            .unwrap();
        assert_eq!(
            moved.origin(),
            &FourVector::upper([Scalar::zero(), Scalar::zero(), eps.clone(), Scalar::zero()])
        );
        assert_eq!(moved.momentum(), r.momentum());
    }

    #[test]
    fn transform_by_dilatation_rescales() {
        // active dilatation stretches positions and shrinks momenta
        let r = ray([2, 1, 2, 2], [3, 1, 2, 2]);
        let eps = Scalar::ratio(1, 4);
        let moved = r
            .infinitesimal_transform(&standard_generator(D), &eps)
            .unwrap();
        let stretched = r.origin().scale(&(Scalar::one() + eps.clone()));
        let shrunk = r.momentum().scale(&(Scalar::one() - eps.clone()));
        assert_eq!(moved.origin(), &stretched);
        assert_eq!(moved.momentum(), &shrunk);
    }

    #[test]
    fn acceleration_fixes_a_ray_through_the_origin() {
        // δ and ∂δ of a quadratic field vanish at x = 0
        let r = ray([0, 0, 0, 0], [1, 0, 1, 0]);
        let moved = r
            .infinitesimal_transform(&standard_generator(C0), &Scalar::ratio(1, 3))
            .unwrap();
        assert_eq!(&moved, &r);
    }

    #[test]
    fn transformed_momentum_is_null_to_second_order() {
        let r = ray([1, 3, 0, 4], [5, 3, 4, 0]);
        let eps = Scalar::ratio(1, 7);
        for kind in crate::vecfield::GeneratorKind::ALL {
            let field = standard_generator(kind);
            // the ε-linear coefficient of p'·p' is 2 p_ν p^μ ∂_μ δ^ν = 0
            assert!(r.translation_shift(r.momentum(), &field).is_zero());
            // and the full defect is exactly ε² q·q with q_μ = p_ν ∂_μ δ^ν(ξ)
            let moved = r.infinitesimal_transform(&field, &eps).unwrap();
            let defect = minkowski_dot(moved.momentum(), moved.momentum());
            let point = r.origin().components();
            let p_lower = r.momentum().lowered().unwrap();
            let q_lower = FourVector::lower(std::array::from_fn(|mu| {
                let mut acc = Scalar::zero();
                for nu in 0..DIM {
                    acc = acc + &p_lower[nu] * &field.component(nu).partial(mu).eval(point);
                }
                acc
            }));
            let q_upper = q_lower.raised().unwrap();
            let expected = &eps.pow(2) * &minkowski_dot(&q_upper, &q_upper);
            assert_eq!(defect, expected, "kind {kind}");
        }
    }

    /// Exact first-order law: transporting along a and reading generator b,
    /// the value changes by ε Δ_{(b,a)}. Δ_b(transform(r, a, ε)) is a
    /// polynomial in ε of degree ≤ 3, so interpolating four exact samples
    /// recovers its ε⁰ and ε¹ coefficients without any limit-taking.
    #[test]
    fn algebra_action_at_first_order() {
        let r = ray([2, -1, 3, 1], [3, 2, 2, 1]);
        let samples = [1i64, 2, 3, 4].map(|n| Scalar::ratio(n, 5));
        for a_kind in [P1, J02, D, C3] {
            for b_kind in [P0, J12, D, C1] {
                let a = standard_generator(a_kind);
                let b = standard_generator(b_kind);
                let values: Vec<Scalar> = samples
                    .iter()
                    .map(|eps| {
                        r.infinitesimal_transform(&a, eps)
                            .unwrap()
                            .generator_value(&b, &Scalar::zero())
                    })
                    .collect();
                // divided differences give the Newton-form coefficients
                let mut c = values.clone();
                let n = c.len();
                for level in 1..n {
                    for i in (level..n).rev() {
                        let num = &c[i] - &c[i - 1];
                        let den = &samples[i] - &samples[i - level];
                        c[i] = num / den;
                    }
                }
                // expand the Newton form around ε = 0 for the first two
                // coefficients
                let e = &samples;
                let at_zero = &c[0]
                    + &(&(-&e[0]) * &(&c[1] + &(&(-&e[1]) * &(&c[2] + &(&(-&e[2]) * &c[3])))));
                let slope = &(&c[1] - &(&(&e[0] + &e[1]) * &c[2]))
                    + &(&(&(&(&e[0] * &e[1]) + &(&e[0] * &e[2])) + &(&e[1] * &e[2])) * &c[3]);
                let expected_slope = r.generator_value(&lie_commutator(&b, &a), &Scalar::zero());
                assert_eq!(
                    at_zero,
                    r.generator_value(&b, &Scalar::zero()),
                    "({a_kind}, {b_kind}) value"
                );
                assert_eq!(slope, expected_slope, "({a_kind}, {b_kind}) slope");
            }
        }
    }

    #[test]
    fn normalisation_slides_along_the_ray() {
        let r = ray([5, 5, 0, 0], [1, 1, 0, 0]);
        let n = r.normalized();
        assert_eq!(n.origin(), &FourVector::upper_ints([0, 0, 0, 0]));
        assert_eq!(n.momentum(), r.momentum());
        // derived quantities unchanged
        for kind in [D, C1, J01] {
            assert_eq!(
                n.generator_value(&standard_generator(kind), &Scalar::zero()),
                r.generator_value(&standard_generator(kind), &Scalar::zero())
            );
        }
    }

    #[test]
    fn ray_json_round_trip_and_rejection() {
        let r = ray([1, 2, 0, 0], [5, 3, 4, 0]);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"origin":["1","2","0","0"],"momentum":["5","3","4","0"]}"#
        );
        let back: LightRay = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);

        let bad = r#"{"origin":["0","0","0","0"],"momentum":["2","1","0","0"]}"#;
        let err = serde_json::from_str::<LightRay>(bad)
            .unwrap_err()
            .to_string();
        assert!(err.contains("not null"), "{err}");
    }
}
