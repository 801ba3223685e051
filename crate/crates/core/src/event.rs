//! Multi-ray field states and the space-time observables they define.
//!
//! A state with at least two non-parallel rays carries a massive total
//! momentum, and its rotation/dilatation totals can be inverted for the
//! space-time position of the coincidence point:
//! X^μ = (P^μ/M²) D − (P_ν/M²) J^{μν}. The accelerated-frame generators pick
//! up the quantum correction Ĉ_ν = α P_ν / M² parametrised by the Casimir
//! invariant α.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::minkowski::{minkowski_dot, FourVector, IndexPosition, DIM, METRIC_SIGNS};
use crate::ray::LightRay;
use crate::scalar::Scalar;
use crate::vecfield::{standard_generator, GeneratorKind, VectorField};

/// Antisymmetric upper-index rotation totals J^{μν}.
pub type RotationMatrix = [[Scalar; DIM]; DIM];

#[derive(Debug, Error, PartialEq)]
pub enum EventError {
    #[error("a localised event needs at least two rays, got {count}")]
    TooFewRays { count: usize },
    /// All rays share one propagation direction; such a state is a line,
    /// not a point, and has no extractable position.
    #[error("massless state: the total momentum is null, no position can be extracted")]
    MasslessState,
    #[error("the Casimir parameter must be nonnegative, got {alpha}")]
    NegativeAlpha { alpha: Scalar },
}

/// An immutable multi-ray state with eagerly computed generator totals.
#[derive(Clone, Debug, PartialEq)]
pub struct EventState {
    rays: Vec<LightRay>,
    alpha: Scalar,
    momentum_lower: FourVector,
    rotation_upper: RotationMatrix,
    dilatation: Scalar,
    mass_squared: Scalar,
}

impl EventState {
    /// Builds the totals P, J, D by summing per-ray generator values at
    /// σ = 0, and the mass invariant M² = P_ν P^ν.
    pub fn from_rays(rays: Vec<LightRay>, alpha: Scalar) -> Result<Self, EventError> {
        if rays.len() < 2 {
            return Err(EventError::TooFewRays { count: rays.len() });
        }
        if alpha.is_negative() {
            return Err(EventError::NegativeAlpha { alpha });
        }

        let mut momentum_upper = FourVector::zero(IndexPosition::Upper);
        for ray in &rays {
            momentum_upper = &momentum_upper + ray.momentum();
        }
        let mass_squared = minkowski_dot(&momentum_upper, &momentum_upper);
        if mass_squared.is_zero() {
            return Err(EventError::MasslessState);
        }
        let momentum_lower = momentum_upper.lowered().expect("momenta are upper");

        let sum_over_rays = |field: &VectorField| {
            let mut acc = Scalar::zero();
            for ray in &rays {
                acc = acc + ray.generator_value(field, &Scalar::zero());
            }
            acc
        };

        let dilatation = sum_over_rays(&standard_generator(GeneratorKind::D));

        // Generator values carry lower index pairs J_{νρ}; raising with the
        // diagonal metric is a sign per index.
        let mut rotation_upper: RotationMatrix =
            std::array::from_fn(|_| std::array::from_fn(|_| Scalar::zero()));
        for kind in GeneratorKind::ALL {
            let Some((nu, rho)) = kind.rotation_axes() else {
                continue;
            };
            let lower_value = sum_over_rays(&standard_generator(kind));
            let sign = METRIC_SIGNS[nu] * METRIC_SIGNS[rho];
            let upper_value = &lower_value * &Scalar::from_int(sign);
            rotation_upper[nu][rho] = upper_value.clone();
            rotation_upper[rho][nu] = -upper_value;
        }

        Ok(EventState {
            rays,
            alpha,
            momentum_lower,
            rotation_upper,
            dilatation,
            mass_squared,
        })
    }

    pub fn rays(&self) -> &[LightRay] {
        &self.rays
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    /// Total energy-momentum P_ν (lower index).
    pub fn momentum_total(&self) -> &FourVector {
        &self.momentum_lower
    }

    /// Rotation totals J^{μν} (upper indices, antisymmetric).
    pub fn rotation_total(&self) -> &RotationMatrix {
        &self.rotation_upper
    }

    /// Dilatation total D = Σ p_ν ξ^ν.
    pub fn dilatation_total(&self) -> &Scalar {
        &self.dilatation
    }

    /// M² = P_ν P^ν; strictly positive for any valid state.
    pub fn mass_squared(&self) -> &Scalar {
        &self.mass_squared
    }

    /// The space-time position X^μ = (P^μ/M²) D − (P_ν/M²) J^{μν}.
    ///
    /// When the rays genuinely intersect at a point this is that point; for
    /// non-intersecting rays it is the generator-defined centroid (see
    /// [`Self::intersection_residual`]).
    pub fn extract_position(&self) -> FourVector {
        let momentum_upper = self.momentum_lower.raised().expect("stored lower");
        position_from_generators(&momentum_upper, &self.rotation_upper, &self.dilatation)
            .expect("mass is nonzero by construction")
    }

    /// The accelerated-frame correction Ĉ_ν = α P_ν / M² (lower index).
    pub fn quantum_correction(&self) -> FourVector {
        self.momentum_lower
            .scale(&(self.alpha.clone() / self.mass_squared.clone()))
    }

    /// Splits a generator total into its classical part P_μ δ^μ(X) and the
    /// correction Δ̂ (nonzero only for the C_ν kinds).
    pub fn decompose_generator(&self, kind: GeneratorKind) -> GeneratorDecomposition {
        let position = self.extract_position().into_components();
        let momentum_upper = self.momentum_lower.raised().expect("stored lower");
        let classical = minkowski_dot(&momentum_upper, &standard_generator(kind).eval(&position));
        let correction = if kind.acceleration_axis().is_some() {
            self.quantum_correction()
        } else {
            FourVector::zero(IndexPosition::Lower)
        };
        GeneratorDecomposition {
            kind,
            classical,
            correction,
        }
    }

    /// Diagnostic for non-coincident inputs: the largest pairwise stationary
    /// value of the squared interval between two ray lines. Exactly zero
    /// when all rays pass through one common point.
    pub fn intersection_residual(&self) -> Scalar {
        let mut worst = Scalar::zero();
        for i in 0..self.rays.len() {
            for j in (i + 1)..self.rays.len() {
                let r = pair_separation(&self.rays[i], &self.rays[j]).abs();
                if (&worst - &r).is_negative() {
                    worst = r;
                }
            }
        }
        worst
    }

    /// Assembles the reportable summary of the state.
    pub fn report(&self) -> StateReport {
        let residual = self.intersection_residual();
        // The closed form Ĉ_ν = α P_ν / M² is exact for two intersecting
        // rays with identical dispersions; otherwise it is applied verbatim
        // and flagged here.
        let correction_form_exact = self.rays.len() == 2 && residual.is_zero();
        StateReport {
            alpha: self.alpha.clone(),
            momentum_total: self.momentum_lower.clone(),
            mass_squared: self.mass_squared.clone(),
            position: self.extract_position(),
            dilatation_total: self.dilatation.clone(),
            intersection_residual: residual,
            quantum_correction: self.quantum_correction(),
            correction_form_exact,
        }
    }

    pub fn to_float_mode(&self) -> EventState {
        EventState {
            rays: self.rays.iter().map(LightRay::to_float_mode).collect(),
            alpha: self.alpha.to_float_mode(),
            momentum_lower: self.momentum_lower.to_float_mode(),
            rotation_upper: std::array::from_fn(|mu| {
                std::array::from_fn(|nu| self.rotation_upper[mu][nu].to_float_mode())
            }),
            dilatation: self.dilatation.to_float_mode(),
            mass_squared: self.mass_squared.to_float_mode(),
        }
    }
}

/// Stationary value of the squared Minkowski interval between two ray lines:
/// zero iff the lines meet. For the degenerate parallel case the interval at
/// the display-normalised origins is used instead.
fn pair_separation(a: &LightRay, b: &LightRay) -> Scalar {
    let d0 = &(a.origin() - b.origin());
    let pp = minkowski_dot(a.momentum(), b.momentum());
    let base = minkowski_dot(d0, d0);
    let pa = minkowski_dot(a.momentum(), d0);
    let pb = minkowski_dot(b.momentum(), d0);
    match (&(&pa * &pb) * &Scalar::from_int(2)).checked_div(&pp) {
        Some(cross) => base - cross,
        None => {
            let na = a.normalized();
            let nb = b.normalized();
            let d = &(na.origin() - nb.origin());
            minkowski_dot(d, d)
        }
    }
}

/// Inversion of the rotation/dilatation totals:
/// X^μ = (P^μ/M²) D − (P_ν/M²) J^{μν}. Fails when P·P = 0.
pub fn position_from_generators(
    momentum_upper: &FourVector,
    rotation_upper: &RotationMatrix,
    dilatation: &Scalar,
) -> Result<FourVector, EventError> {
    let mass_squared = minkowski_dot(momentum_upper, momentum_upper);
    if mass_squared.is_zero() {
        return Err(EventError::MasslessState);
    }
    let momentum_lower = momentum_upper.lowered().expect("argument is upper");
    Ok(FourVector::upper(std::array::from_fn(|mu| {
        let mut contraction = Scalar::zero();
        for nu in 0..DIM {
            contraction = contraction + &momentum_lower[nu] * &rotation_upper[mu][nu];
        }
        (&momentum_upper[mu] * dilatation - contraction)
            .checked_div(&mass_squared)
            .expect("mass checked above")
    })))
}

/// Forward construction J^{μν} = P^μ X^ν − P^ν X^μ, D = P_μ X^μ from an
/// upper position and upper momentum. Inverse of
/// [`EventState::extract_position`] whenever P·P ≠ 0.
pub fn generators_from_position(
    position: &FourVector,
    momentum_upper: &FourVector,
) -> (RotationMatrix, Scalar) {
    let rotation = std::array::from_fn(|mu| {
        std::array::from_fn(|nu| {
            &(&momentum_upper[mu] * &position[nu]) - &(&momentum_upper[nu] * &position[mu])
        })
    });
    let dilatation = minkowski_dot(momentum_upper, position);
    (rotation, dilatation)
}

/// A generator total split into classical and correction parts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorDecomposition {
    pub kind: GeneratorKind,
    /// P_μ δ^μ(X) evaluated at the extracted position.
    pub classical: Scalar,
    /// Δ̂ as a lower-index vector: Ĉ for the C_ν kinds, zero for P, J, D.
    pub correction: FourVector,
}

impl GeneratorDecomposition {
    /// The scalar correction entering this generator: Ĉ_ν for kind C_ν,
    /// zero otherwise.
    pub fn correction_value(&self) -> Scalar {
        match self.kind.acceleration_axis() {
            Some(nu) => self.correction[nu].clone(),
            None => Scalar::zero(),
        }
    }

    /// Classical part plus correction.
    pub fn total(&self) -> Scalar {
        self.classical.clone() + self.correction_value()
    }
}

/// Reportable summary: totals, extracted position, and diagnostics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateReport {
    pub alpha: Scalar,
    /// P_ν, lower index.
    pub momentum_total: FourVector,
    pub mass_squared: Scalar,
    /// X^μ, upper index.
    pub position: FourVector,
    pub dilatation_total: Scalar,
    pub intersection_residual: Scalar,
    /// Ĉ_ν, lower index.
    pub quantum_correction: FourVector,
    /// Whether the closed correction form is exact for this state (two rays
    /// meeting at a point) or applied as a flagged approximation.
    pub correction_form_exact: bool,
}

/// Wire form: `{"alpha": "p/q", "rays": [...]}`; totals are recomputed on
/// load so a hand-edited file cannot carry stale sums.
impl Serialize for EventState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            alpha: &'a Scalar,
            rays: &'a [LightRay],
        }
        Repr {
            alpha: &self.alpha,
            rays: &self.rays,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EventState {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            alpha: Scalar,
            rays: Vec<LightRay>,
        }
        let repr = Repr::deserialize(deserializer)?;
        EventState::from_rays(repr.rays, repr.alpha).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vecfield::GeneratorKind::*;

    fn ray(origin: [i64; 4], momentum: [i64; 4]) -> LightRay {
        LightRay::new(
            FourVector::upper_ints(origin),
            FourVector::upper_ints(momentum),
        )
        .unwrap()
    }

    fn symmetric_pair_through(origin: [i64; 4]) -> Vec<LightRay> {
        vec![ray(origin, [1, 1, 0, 0]), ray(origin, [1, -1, 0, 0])]
    }

    #[test]
    fn totals_for_the_symmetric_origin_pair() {
        let state =
            EventState::from_rays(symmetric_pair_through([0, 0, 0, 0]), Scalar::one()).unwrap();
        assert_eq!(
            state.momentum_total(),
            &FourVector::lower_ints([2, 0, 0, 0])
        );
        assert_eq!(state.mass_squared(), &Scalar::from_int(4));
        assert!(state.dilatation_total().is_zero());
        assert!(state.rotation_total().iter().flatten().all(Scalar::is_zero));
        assert_eq!(
            state.extract_position(),
            FourVector::upper_ints([0, 0, 0, 0])
        );
    }

    #[test]
    fn parallel_rays_are_massless() {
        let rays = vec![
            ray([0, 0, 0, 0], [1, 1, 0, 0]),
            ray([5, 0, 1, 0], [1, 1, 0, 0]),
        ];
        assert_eq!(
            EventState::from_rays(rays, Scalar::one()).unwrap_err(),
            EventError::MasslessState
        );
    }

    #[test]
    fn construction_guards() {
        assert_eq!(
            EventState::from_rays(vec![ray([0, 0, 0, 0], [1, 1, 0, 0])], Scalar::one())
                .unwrap_err(),
            EventError::TooFewRays { count: 1 }
        );
        assert!(matches!(
            EventState::from_rays(symmetric_pair_through([0; 4]), Scalar::from_int(-1)),
            Err(EventError::NegativeAlpha { .. })
        ));
    }

    #[test]
    fn two_ray_totals_with_distinct_directions() {
        let rays = vec![
            ray([0, 0, 0, 0], [1, 1, 0, 0]),
            ray([0, 0, 0, 0], [2, 0, 2, 0]),
        ];
        let state = EventState::from_rays(rays, Scalar::one()).unwrap();
        // P upper = (3, 1, 2, 0), M² = 9 − 1 − 4 = 4
        assert_eq!(
            state.momentum_total().raised().unwrap(),
            FourVector::upper_ints([3, 1, 2, 0])
        );
        assert_eq!(state.mass_squared(), &Scalar::from_int(4));
    }

    #[test]
    fn position_of_an_off_origin_intersection() {
        let state =
            EventState::from_rays(symmetric_pair_through([1, 2, 0, 0]), Scalar::one()).unwrap();
        // forward totals first: J^{01} = 4 and D = 2 for this geometry
        assert_eq!(state.rotation_total()[0][1], Scalar::from_int(4));
        assert_eq!(state.dilatation_total(), &Scalar::from_int(2));
        assert_eq!(
            state.extract_position(),
            FourVector::upper_ints([1, 2, 0, 0])
        );
        assert!(state.intersection_residual().is_zero());
    }

    #[test]
    fn translation_equivariance() {
        let base =
            EventState::from_rays(symmetric_pair_through([1, 2, 0, 0]), Scalar::one()).unwrap();
        let shifted_rays = base
            .rays()
            .iter()
            .map(|r| {
                LightRay::new(
                    r.origin() + &FourVector::upper_ints([0, 0, 5, 0]),
                    r.momentum().clone(),
                )
                .unwrap()
            })
            .collect();
        let shifted = EventState::from_rays(shifted_rays, Scalar::one()).unwrap();
        assert_eq!(
            shifted.extract_position(),
            &base.extract_position() + &FourVector::upper_ints([0, 0, 5, 0])
        );
    }

    #[test]
    fn totals_are_invariant_under_ray_propagation() {
        // sliding any origin along its own momentum changes nothing
        let rays = vec![
            ray([1, 2, 0, 0], [1, 1, 0, 0]),
            ray([1, 2, 0, 0], [5, 3, 4, 0]),
        ];
        let base = EventState::from_rays(rays.clone(), Scalar::one()).unwrap();
        let slid = vec![
            LightRay::new(
                &rays[0].origin().clone() + &rays[0].momentum().scale(&Scalar::ratio(7, 3)),
                rays[0].momentum().clone(),
            )
            .unwrap(),
            LightRay::new(
                &rays[1].origin().clone() + &rays[1].momentum().scale(&Scalar::from_int(-2)),
                rays[1].momentum().clone(),
            )
            .unwrap(),
        ];
        let moved = EventState::from_rays(slid, Scalar::one()).unwrap();
        assert_eq!(moved.momentum_total(), base.momentum_total());
        assert_eq!(moved.rotation_total(), base.rotation_total());
        assert_eq!(moved.dilatation_total(), base.dilatation_total());
        assert_eq!(moved.mass_squared(), base.mass_squared());
        assert_eq!(moved.extract_position(), base.extract_position());
    }

    #[test]
    fn forward_generators_and_round_trip() {
        // X = 0 gives vanishing totals
        let (j, d) = generators_from_position(
            &FourVector::upper_ints([0, 0, 0, 0]),
            &FourVector::upper_ints([2, 1, 1, 0]),
        );
        assert!(d.is_zero());
        assert!(j.iter().flatten().all(Scalar::is_zero));

        // worked point: P = (2,0,0,0), X = (1,2,0,0)
        let (j, d) = generators_from_position(
            &FourVector::upper_ints([1, 2, 0, 0]),
            &FourVector::upper_ints([2, 0, 0, 0]),
        );
        assert_eq!(d, Scalar::from_int(2));
        assert_eq!(j[0][1], Scalar::from_int(4));
        for (mu, nu) in [(0usize, 2usize), (0, 3), (1, 2), (1, 3), (2, 3)] {
            assert!(j[mu][nu].is_zero(), "J^{{{mu}{nu}}}");
        }
    }

    #[test]
    fn quantum_correction_examples() {
        let state = EventState::from_rays(symmetric_pair_through([0; 4]), Scalar::one()).unwrap();
        // α = 1, P = (2,0,0,0), M² = 4 → Ĉ = (1/2, 0, 0, 0)
        assert_eq!(
            state.quantum_correction(),
            FourVector::lower([
                Scalar::ratio(1, 2),
                Scalar::zero(),
                Scalar::zero(),
                Scalar::zero()
            ])
        );

        // α = 0 is the classical limit
        let classical =
            EventState::from_rays(symmetric_pair_through([0; 4]), Scalar::zero()).unwrap();
        assert!(classical.quantum_correction().is_zero());

        // linear in α
        let doubled =
            EventState::from_rays(symmetric_pair_through([0; 4]), Scalar::from_int(2)).unwrap();
        assert_eq!(
            doubled.quantum_correction(),
            state.quantum_correction().scale(&Scalar::from_int(2))
        );
    }

    #[test]
    fn correction_scales_as_inverse_momentum() {
        let base = EventState::from_rays(symmetric_pair_through([0; 4]), Scalar::one()).unwrap();
        let rescaled_rays = base
            .rays()
            .iter()
            .map(|r| {
                LightRay::new(r.origin().clone(), r.momentum().scale(&Scalar::from_int(3))).unwrap()
            })
            .collect();
        let rescaled = EventState::from_rays(rescaled_rays, Scalar::one()).unwrap();
        assert_eq!(
            rescaled.quantum_correction(),
            base.quantum_correction().scale(&Scalar::ratio(1, 3))
        );
    }

    #[test]
    fn generator_decomposition_examples() {
        let state = EventState::from_rays(symmetric_pair_through([0; 4]), Scalar::one()).unwrap();

        // dilatation on the symmetric origin state: everything vanishes
        let d = state.decompose_generator(D);
        assert!(d.classical.is_zero());
        assert!(d.correction.is_zero());
        assert!(d.correction_value().is_zero());

        // C0 with α = 1: classical part 0 at X = 0, correction 1/2
        let c0 = state.decompose_generator(C0);
        assert!(c0.classical.is_zero());
        assert_eq!(c0.correction_value(), Scalar::ratio(1, 2));
        assert_eq!(c0.total(), Scalar::ratio(1, 2));

        // translations never acquire a correction
        let p1 = state.decompose_generator(P1);
        assert!(p1.correction.is_zero());
    }

    #[test]
    fn skew_rays_report_a_nonzero_residual() {
        // two rays that do not meet: parallel-displaced crossing pair
        let rays = vec![
            ray([0, 0, 0, 0], [1, 1, 0, 0]),
            ray([0, 0, 0, 1], [1, -1, 0, 0]),
        ];
        let state = EventState::from_rays(rays, Scalar::one()).unwrap();
        assert!(!state.intersection_residual().is_zero());
        let report = state.report();
        assert!(!report.correction_form_exact);

        let meeting =
            EventState::from_rays(symmetric_pair_through([3, 1, 0, 0]), Scalar::one()).unwrap();
        assert!(meeting.report().correction_form_exact);
    }

    #[test]
    fn state_json_round_trip() {
        let state = EventState::from_rays(
            vec![
                ray([1, 2, 0, 0], [5, 3, 4, 0]),
                ray([1, 2, 0, 0], [1, -1, 0, 0]),
            ],
            Scalar::ratio(7, 3),
        )
        .unwrap();
        let json = serde_json::to_string(&state).unwrap();
        let back: EventState = serde_json::from_str(&json).unwrap();
        assert_eq!(back, state);
        // totals were recomputed, not deserialised
        assert_eq!(back.mass_squared(), state.mass_squared());

        // a state whose rays are all parallel is rejected at load time
        let bad = r#"{"alpha":"1","rays":[
            {"origin":["0","0","0","0"],"momentum":["1","1","0","0"]},
            {"origin":["1","0","2","0"],"momentum":["2","2","0","0"]}]}"#;
        let err = serde_json::from_str::<EventState>(bad)
            .unwrap_err()
            .to_string();
        assert!(err.contains("massless"), "{err}");
    }
}
