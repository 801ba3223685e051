//! Named verification suites over the engine, with deterministic seeding and
//! machine-readable results.
//!
//! Each suite exercises one layer's identities at desk scale: algebra
//! closure and Jacobi, the conformal Killing check, ray conservation,
//! canonical conjugation, event-state round trips, the shift laws, the
//! gradient-consistency identity, and the conformal factor extracted from
//! shifts. A result is reproducible byte for byte from (suite, seed,
//! config).

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::event::{generators_from_position, position_from_generators, EventState};
use crate::minkowski::{eta, minkowski_dot, FourVector, DIM, METRIC_SIGNS};
use crate::phase::{
    classical_momentum_shift, classical_part, conformal_factor_from_shifts, correction_part,
    generator_as_phase_function, momentum_shift, poisson_bracket, position_shift,
    shift_gradient_consistency, PhaseFunction,
};
use crate::poly::Polynomial;
use crate::ray::LightRay;
use crate::scalar::Scalar;
use crate::vecfield::{
    conformal_factor, decompose_in_basis, lie_commutator, metric_variation, standard_generator,
    GeneratorKind, VectorField, BASIS_DIM,
};

/// The suites the command line can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteName {
    Algebra,
    Killing,
    Rays,
    Canonical,
    Event,
    Shifts,
    Consistency,
    ConformalFactor,
    All,
}

impl SuiteName {
    pub const ALL_NAMES: [&'static str; 9] = [
        "algebra",
        "killing",
        "rays",
        "canonical",
        "event",
        "shifts",
        "consistency",
        "conformal-factor",
        "all",
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Algebra => "algebra",
            SuiteName::Killing => "killing",
            SuiteName::Rays => "rays",
            SuiteName::Canonical => "canonical",
            SuiteName::Event => "event",
            SuiteName::Shifts => "shifts",
            SuiteName::Consistency => "consistency",
            SuiteName::ConformalFactor => "conformal-factor",
            SuiteName::All => "all",
        }
    }
}

impl FromStr for SuiteName {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, SuiteError> {
        match s {
            "algebra" => Ok(SuiteName::Algebra),
            "killing" => Ok(SuiteName::Killing),
            "rays" => Ok(SuiteName::Rays),
            "canonical" => Ok(SuiteName::Canonical),
            "event" => Ok(SuiteName::Event),
            "shifts" => Ok(SuiteName::Shifts),
            "consistency" => Ok(SuiteName::Consistency),
            "conformal-factor" => Ok(SuiteName::ConformalFactor),
            "all" => Ok(SuiteName::All),
            other => Err(SuiteError::UnknownSuite {
                name: other.to_owned(),
            }),
        }
    }
}

/// Exact-rational or floating arithmetic for the sampled inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineMode {
    Exact,
    Float,
}

impl FromStr for EngineMode {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, SuiteError> {
        match s {
            "exact" => Ok(EngineMode::Exact),
            "float" => Ok(EngineMode::Float),
            other => Err(SuiteError::Config {
                message: format!("unknown mode {other:?}; expected exact or float"),
            }),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SuiteError {
    #[error("unknown suite {name:?}; expected one of {:?}", SuiteName::ALL_NAMES)]
    UnknownSuite { name: String },
    #[error("bad suite configuration: {message}")]
    Config { message: String },
}

/// Deliberate perturbation of one expected structure constant, used to
/// exercise the failure-reporting path end to end.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureFault {
    pub a: GeneratorKind,
    pub b: GeneratorKind,
}

/// Knobs shared by every suite.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Number of sampled cases in the randomised suites.
    pub count: usize,
    /// Casimir parameter used by the bracket suites.
    pub alpha: Scalar,
    pub mode: EngineMode,
    /// Epsilons for the float-mode scaling measurement, descending.
    pub epsilon_ladder: Vec<f64>,
    pub fault: Option<StructureFault>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            count: 1000,
            alpha: Scalar::one(),
            mode: EngineMode::Exact,
            epsilon_ladder: vec![1e-2, 5e-3, 2.5e-3],
            fault: None,
        }
    }
}

impl SuiteConfig {
    fn validate(&self) -> Result<(), SuiteError> {
        let err = |message: String| Err(SuiteError::Config { message });
        if self.count == 0 {
            return err("count must be at least 1".into());
        }
        if self.alpha.is_negative() {
            return err(format!("alpha must be nonnegative, got {}", self.alpha));
        }
        if self.epsilon_ladder.len() < 2 {
            return err("the epsilon ladder needs at least two rungs".into());
        }
        if self
            .epsilon_ladder
            .windows(2)
            .any(|w| w[1] <= 0.0 || w[1] >= w[0])
        {
            return err("the epsilon ladder must be positive and strictly descending".into());
        }
        Ok(())
    }
}

/// One failed case with its counterexample payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseFailure {
    pub case: String,
    pub detail: String,
}

/// Outcome of one suite run. Serialisation carries no timing, so identical
/// (suite, seed, config) runs produce identical bytes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub mode: EngineMode,
    pub seed: u64,
    pub cases: usize,
    pub failures: Vec<CaseFailure>,
    #[serde(skip)]
    pub wall: Option<Duration>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs one named suite (or all of them merged) with the given config.
pub fn run_suite(name: SuiteName, config: &SuiteConfig) -> Result<SuiteResult, SuiteError> {
    config.validate()?;
    let start = Instant::now();
    let mut runner = Runner::new();
    match name {
        SuiteName::Algebra => suite_algebra(&mut runner, config),
        SuiteName::Killing => suite_killing(&mut runner, config),
        SuiteName::Rays => suite_rays(&mut runner, config),
        SuiteName::Canonical => suite_canonical(&mut runner, config),
        SuiteName::Event => suite_event(&mut runner, config),
        SuiteName::Shifts => suite_shifts(&mut runner, config),
        SuiteName::Consistency => suite_consistency(&mut runner, config),
        SuiteName::ConformalFactor => suite_conformal_factor(&mut runner, config),
        SuiteName::All => {
            for sub in [
                SuiteName::Algebra,
                SuiteName::Killing,
                SuiteName::Rays,
                SuiteName::Canonical,
                SuiteName::Event,
                SuiteName::Shifts,
                SuiteName::Consistency,
                SuiteName::ConformalFactor,
            ] {
                runner.enter(sub.as_str());
                match sub {
                    SuiteName::Algebra => suite_algebra(&mut runner, config),
                    SuiteName::Killing => suite_killing(&mut runner, config),
                    SuiteName::Rays => suite_rays(&mut runner, config),
                    SuiteName::Canonical => suite_canonical(&mut runner, config),
                    SuiteName::Event => suite_event(&mut runner, config),
                    SuiteName::Shifts => suite_shifts(&mut runner, config),
                    SuiteName::Consistency => suite_consistency(&mut runner, config),
                    SuiteName::ConformalFactor => suite_conformal_factor(&mut runner, config),
                    SuiteName::All => unreachable!(),
                }
            }
        }
    }
    Ok(SuiteResult {
        suite: name.as_str().to_owned(),
        mode: config.mode,
        seed: config.seed,
        cases: runner.cases,
        failures: runner.failures,
        wall: Some(start.elapsed()),
    })
}

/// Accumulates case outcomes in deterministic order. Each suite derives its
/// own case RNG from the seed, so merged runs match standalone runs.
struct Runner {
    prefix: String,
    cases: usize,
    failures: Vec<CaseFailure>,
}

impl Runner {
    fn new() -> Self {
        Runner {
            prefix: String::new(),
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn enter(&mut self, prefix: &str) {
        self.prefix = format!("{prefix}/");
    }

    fn check(&mut self, case: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(CaseFailure {
                case: format!("{}{}", self.prefix, case.into()),
                detail: detail(),
            });
        }
    }
}

/// Small exact rationals: numerators in [−9, 9], denominators in {1, 2, 3}.
/// Float mode shrinks the range so that every identity stays within the
/// absolute 1e-12 tolerance: the checks are exact-arithmetic facts, and the
/// sampled magnitudes must not amplify double rounding beyond it.
struct Sampler<'a> {
    rng: &'a mut ChaCha8Rng,
    mode: EngineMode,
    max_numer: i64,
    max_denom: i64,
}

impl<'a> Sampler<'a> {
    fn new(rng: &'a mut ChaCha8Rng, mode: EngineMode) -> Self {
        let (max_numer, max_denom) = match mode {
            EngineMode::Exact => (9, 3),
            EngineMode::Float => (3, 1),
        };
        Sampler {
            rng,
            mode,
            max_numer,
            max_denom,
        }
    }

    fn scalar(&mut self) -> Scalar {
        let numer = self.rng.gen_range(-self.max_numer..=self.max_numer);
        let denom = self.rng.gen_range(1i64..=self.max_denom);
        self.cast(Scalar::ratio(numer, denom))
    }

    fn cast(&self, s: Scalar) -> Scalar {
        match self.mode {
            EngineMode::Exact => s,
            EngineMode::Float => s.to_float_mode(),
        }
    }

    fn four_vector_upper(&mut self) -> FourVector {
        FourVector::upper(std::array::from_fn(|_| self.scalar()))
    }

    /// Rejection-samples integer spatial parts whose Euclidean norm is a
    /// perfect square, so p⁰ is rational and the null condition exact.
    fn null_momentum(&mut self) -> FourVector {
        loop {
            let spatial: [i64; 3] =
                std::array::from_fn(|_| self.rng.gen_range(-self.max_numer..=self.max_numer));
            let norm_sq: i64 = spatial.iter().map(|s| s * s).sum();
            if norm_sq == 0 {
                continue;
            }
            let root = (norm_sq as f64).sqrt().round() as i64;
            if root * root != norm_sq {
                continue;
            }
            let denom = self.rng.gen_range(1i64..=self.max_denom);
            return FourVector::upper([
                self.cast(Scalar::ratio(root, denom)),
                self.cast(Scalar::ratio(spatial[0], denom)),
                self.cast(Scalar::ratio(spatial[1], denom)),
                self.cast(Scalar::ratio(spatial[2], denom)),
            ]);
        }
    }

    fn ray(&mut self) -> LightRay {
        let origin = self.four_vector_upper();
        let momentum = self.null_momentum();
        LightRay::new(origin, momentum).expect("sampled momenta are null and future-pointing")
    }

    /// A random polynomial with a handful of terms of total degree ≤ cap.
    fn polynomial(&mut self, degree_cap: u32) -> Polynomial {
        let mut p = Polynomial::zero();
        for _ in 0..3 {
            let mut exps = [0u32; DIM];
            let mut budget = degree_cap;
            for e in exps.iter_mut() {
                let step = self.rng.gen_range(0..=budget.min(2));
                *e = step;
                budget -= step;
            }
            p.add_term(exps, self.scalar());
        }
        p
    }

    fn vector_field(&mut self, degree_cap: u32) -> VectorField {
        VectorField::new(std::array::from_fn(|_| self.polynomial(degree_cap)))
    }
}

/// Closed-form conformal structure constants in the engine's commutator
/// orientation, written independently of the symbolic differentiation path:
/// com(a, b) = Σ coeff · basis. J entries are normalised to ν < ρ.
pub fn expected_commutator(a: GeneratorKind, b: GeneratorKind) -> Vec<(GeneratorKind, i64)> {
    use GeneratorKind as K;

    fn push(out: &mut Vec<(K, i64)>, kind: K, coeff: i64) {
        if coeff != 0 {
            if let Some(slot) = out.iter_mut().find(|(k, _)| *k == kind) {
                slot.1 += coeff;
            } else {
                out.push((kind, coeff));
            }
        }
    }
    // J_{αγ} with arbitrary index order folds onto the canonical basis entry
    fn push_j(out: &mut Vec<(K, i64)>, alpha: usize, gamma: usize, coeff: i64) {
        if alpha == gamma || coeff == 0 {
            return;
        }
        if alpha < gamma {
            push(out, K::rotation(alpha, gamma).unwrap(), coeff);
        } else {
            push(out, K::rotation(gamma, alpha).unwrap(), -coeff);
        }
    }

    let mut out: Vec<(K, i64)> = Vec::new();
    let p = GeneratorKind::translation_axis;
    let j = GeneratorKind::rotation_axes;
    let c = GeneratorKind::acceleration_axis;
    let is_d = |k: K| k == K::D;

    // com(D, P_α) = P_α and its antisymmetric partner
    if is_d(a) {
        if let Some(alpha) = p(b) {
            push(&mut out, K::ALL[alpha], 1);
        }
        if let Some(alpha) = c(b) {
            push(&mut out, K::ALL[K::C0.index() + alpha], -1);
        }
    }
    if is_d(b) {
        if let Some(alpha) = p(a) {
            push(&mut out, K::ALL[alpha], -1);
        }
        if let Some(alpha) = c(a) {
            push(&mut out, K::ALL[K::C0.index() + alpha], 1);
        }
    }

    // com(J_{αβ}, P_γ) = η_{γβ} P_α − η_{γα} P_β
    if let (Some((alpha, beta)), Some(gamma)) = (j(a), p(b)) {
        push(&mut out, K::ALL[alpha], eta(gamma, beta));
        push(&mut out, K::ALL[beta], -eta(gamma, alpha));
    }
    if let (Some((alpha, beta)), Some(gamma)) = (j(b), p(a)) {
        push(&mut out, K::ALL[alpha], -eta(gamma, beta));
        push(&mut out, K::ALL[beta], eta(gamma, alpha));
    }

    // com(C_α, P_γ) = 2η_{αγ} D − 2 J_{αγ}
    if let (Some(alpha), Some(gamma)) = (c(a), p(b)) {
        push(&mut out, K::D, 2 * eta(alpha, gamma));
        push_j(&mut out, alpha, gamma, -2);
    }
    if let (Some(alpha), Some(gamma)) = (c(b), p(a)) {
        push(&mut out, K::D, -2 * eta(alpha, gamma));
        push_j(&mut out, alpha, gamma, 2);
    }

    // com(J_{αβ}, J_{γδ}) = η_{βγ}J_{αδ} − η_{βδ}J_{αγ} − η_{αγ}J_{βδ} + η_{αδ}J_{βγ}
    if let (Some((alpha, beta)), Some((gamma, delta))) = (j(a), j(b)) {
        push_j(&mut out, alpha, delta, eta(beta, gamma));
        push_j(&mut out, alpha, gamma, -eta(beta, delta));
        push_j(&mut out, beta, delta, -eta(alpha, gamma));
        push_j(&mut out, beta, gamma, eta(alpha, delta));
    }

    // com(C_α, J_{γδ}) = η_{αγ} C_δ − η_{αδ} C_γ
    if let (Some(alpha), Some((gamma, delta))) = (c(a), j(b)) {
        push(&mut out, K::ALL[K::C0.index() + delta], eta(alpha, gamma));
        push(&mut out, K::ALL[K::C0.index() + gamma], -eta(alpha, delta));
    }
    if let (Some(alpha), Some((gamma, delta))) = (c(b), j(a)) {
        push(&mut out, K::ALL[K::C0.index() + delta], -eta(alpha, gamma));
        push(&mut out, K::ALL[K::C0.index() + gamma], eta(alpha, delta));
    }

    // P/P, C/C, D/D and J/D pairs all vanish
    out.retain(|(_, coeff)| *coeff != 0);
    out
}

fn expected_commutator_field(a: GeneratorKind, b: GeneratorKind) -> VectorField {
    let mut field = VectorField::zero();
    for (kind, coeff) in expected_commutator(a, b) {
        field = field.add(&standard_generator(kind).scale(&Scalar::from_int(coeff)));
    }
    field
}

fn basis_pairs() -> impl Iterator<Item = (GeneratorKind, GeneratorKind)> {
    GeneratorKind::ALL
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| GeneratorKind::ALL[i + 1..].iter().map(move |&b| (a, b)))
}

fn basis_triples() -> impl Iterator<Item = (GeneratorKind, GeneratorKind, GeneratorKind)> {
    (0..BASIS_DIM).flat_map(move |i| {
        ((i + 1)..BASIS_DIM).flat_map(move |j| {
            ((j + 1)..BASIS_DIM).map(move |k| {
                (
                    GeneratorKind::ALL[i],
                    GeneratorKind::ALL[j],
                    GeneratorKind::ALL[k],
                )
            })
        })
    })
}

/// Closure against the closed-form table plus Jacobi and sampled
/// antisymmetry.
fn suite_algebra(runner: &mut Runner, config: &SuiteConfig) {
    // closure: every commutator decomposes exactly, with the coefficients
    // predicted by the closed-form algebra
    for (a, b) in basis_pairs() {
        let com = lie_commutator(&standard_generator(a), &standard_generator(b));
        let mut expected = expected_commutator_field(a, b);
        let faulted = config
            .fault
            .is_some_and(|f| (f.a, f.b) == (a, b) || (f.a, f.b) == (b, a));
        if faulted {
            // deliberate mutation: shift the expected dilatation coefficient
            expected = expected.add(&standard_generator(GeneratorKind::D));
        }
        match decompose_in_basis(&com) {
            Ok(_) => {
                let residual = com.sub(&expected);
                runner.check(format!("closure {a},{b}"), residual.is_zero(), || {
                    format!(
                        "commutator ({a}, {b}) disagrees with the structure constants; \
                         residual field: {residual}"
                    )
                });
            }
            Err(err) => runner.check(format!("closure {a},{b}"), false, || {
                format!("commutator ({a}, {b}) left the basis span: {err}")
            }),
        }
    }

    // Jacobi: cyclic double commutators cancel exactly
    for (a, b, c) in basis_triples() {
        let fa = standard_generator(a);
        let fb = standard_generator(b);
        let fc = standard_generator(c);
        let cyclic = lie_commutator(&fa, &lie_commutator(&fb, &fc))
            .add(&lie_commutator(&fb, &lie_commutator(&fc, &fa)))
            .add(&lie_commutator(&fc, &lie_commutator(&fa, &fb)));
        runner.check(format!("jacobi {a},{b},{c}"), cyclic.is_zero(), || {
            format!("Jacobi defect for ({a}, {b}, {c}): {cyclic}")
        });
    }

    // antisymmetry on random fields up to degree 3
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0xA17);
    let mut sampler = Sampler::new(&mut rng, EngineMode::Exact);
    for case in 0..config.count {
        let a = sampler.vector_field(3);
        let b = sampler.vector_field(3);
        let defect = lie_commutator(&a, &b).add(&lie_commutator(&b, &a));
        runner.check(format!("antisymmetry #{case}"), defect.is_zero(), || {
            format!("commutator is not antisymmetric for a = {a}, b = {b}")
        });
    }
}

/// Conformal factors of the basis, linearity, the metric-variation law, and
/// rejection of non-conformal fields.
fn suite_killing(runner: &mut Runner, config: &SuiteConfig) {
    // closed-form factors: 0 for P and J, −1 for D, −2x_ν for C_ν
    for kind in GeneratorKind::ALL {
        let field = standard_generator(kind);
        let expected = expected_conformal_factor(kind);
        match conformal_factor(&field) {
            Ok(lambda) => {
                runner.check(format!("factor {kind}"), lambda == expected, || {
                    format!("λ_{kind} = {lambda}, expected {expected}")
                });
                // metric variation must be 2λη
                let variation = metric_variation(&field);
                let mut ok = true;
                'outer: for mu in 0..DIM {
                    for nu in 0..DIM {
                        let want = expected.scale(&Scalar::from_int(2 * eta(mu, nu)));
                        if variation.component(mu, nu) != &want {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
                runner.check(format!("variation {kind}"), ok, || {
                    format!("metric variation of {kind} is not 2λη: {variation}")
                });
            }
            Err(err) => runner.check(format!("factor {kind}"), false, || err.to_string()),
        }
    }

    // linear combinations stay conformal with linear factors
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x512);
    let mut sampler = Sampler::new(&mut rng, EngineMode::Exact);
    for case in 0..config.count {
        let mut combo = VectorField::zero();
        let mut expected = Polynomial::zero();
        for kind in GeneratorKind::ALL {
            let coeff = sampler.scalar();
            combo = combo.add(&standard_generator(kind).scale(&coeff));
            expected = &expected + &expected_conformal_factor(kind).scale(&coeff);
        }
        match conformal_factor(&combo) {
            Ok(lambda) => runner.check(format!("linearity #{case}"), lambda == expected, || {
                format!("λ of combination = {lambda}, expected {expected}")
            }),
            Err(err) => runner.check(format!("linearity #{case}"), false, || err.to_string()),
        }
    }

    // fields that merely solve the Killing equation for shear fail cleanly
    let shear = VectorField::new([
        Polynomial::var(1),
        Polynomial::zero(),
        Polynomial::zero(),
        Polynomial::zero(),
    ]);
    runner.check("reject shear", conformal_factor(&shear).is_err(), || {
        "x¹ ∂_0 passed the conformal check".into()
    });
    let cubic = VectorField::new([
        Polynomial::var(0).pow(3),
        Polynomial::zero(),
        Polynomial::zero(),
        Polynomial::zero(),
    ]);
    runner.check("reject cubic", conformal_factor(&cubic).is_err(), || {
        "a cubic field passed the conformal check".into()
    });
}

fn expected_conformal_factor(kind: GeneratorKind) -> Polynomial {
    if kind == GeneratorKind::D {
        Polynomial::int(-1)
    } else if let Some(nu) = kind.acceleration_axis() {
        // −2x_ν expanded through the signature
        Polynomial::var(nu).scale(&Scalar::from_int(-2 * METRIC_SIGNS[nu]))
    } else {
        Polynomial::zero()
    }
}

/// Conservation along rays, displacement blindness, and (in float mode) the
/// quadratic scaling of the first-order transport residual.
fn suite_rays(runner: &mut Runner, config: &SuiteConfig) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x7A75);
    let mut sampler = Sampler::new(&mut rng, config.mode);

    match config.mode {
        EngineMode::Exact => {
            let basis: Vec<(GeneratorKind, VectorField)> = GeneratorKind::ALL
                .iter()
                .map(|k| (*k, standard_generator(*k)))
                .collect();
            for case in 0..config.count {
                let ray = sampler.ray();
                let sigmas = [sampler.scalar(), sampler.scalar(), sampler.scalar()];
                let mut conserved = true;
                let mut detail = String::new();
                'search: for (kind, field) in &basis {
                    for sigma in &sigmas {
                        let residual = ray
                            .conservation_residual(field, sigma)
                            .expect("basis fields are conformal");
                        if !residual.is_zero() {
                            conserved = false;
                            detail = format!(
                                "Δ_{kind} drifts by {residual} at σ = {sigma} on ray {}",
                                serde_json::to_string(&ray).unwrap()
                            );
                            break 'search;
                        }
                    }
                }
                runner.check(format!("conservation #{case}"), conserved, || detail);

                // a displacement parallel to the momentum is invisible
                let slide = ray.momentum().scale(&sampler.scalar());
                let blind = basis
                    .iter()
                    .all(|(_, field)| ray.translation_shift(&slide, field).is_zero());
                runner.check(format!("parallel-displacement #{case}"), blind, || {
                    format!(
                        "a slide along the momentum changed a generator on ray {}",
                        serde_json::to_string(&ray).unwrap()
                    )
                });

                // first-order transport keeps the momentum null at order ε:
                // the linear coefficient of p'·p' vanishes and the defect is
                // exactly ε² q·q with q_μ = p_ν ∂_μ δ^ν(ξ)
                let eps = sampler.scalar();
                let kind = basis[case % basis.len()].0;
                let field = &basis[case % basis.len()].1;
                let linear_term = ray.translation_shift(ray.momentum(), field);
                let moved = ray
                    .infinitesimal_transform(field, &eps)
                    .expect("basis fields are conformal");
                let defect = minkowski_dot(moved.momentum(), moved.momentum());
                let point = ray.origin().components();
                let p_lower = ray.momentum().lowered().expect("momenta are upper");
                let gradient_lower = FourVector::lower(std::array::from_fn(|mu| {
                    let mut acc = Scalar::zero();
                    for nu in 0..DIM {
                        acc = acc + &p_lower[nu] * &field.component(nu).partial(mu).eval(point);
                    }
                    acc
                }));
                let gradient_upper = gradient_lower.raised().expect("just built lower");
                let expected_defect =
                    &eps.pow(2) * &minkowski_dot(&gradient_upper, &gradient_upper);
                let ok = linear_term.is_zero() && (defect.clone() - expected_defect).is_zero();
                runner.check(format!("null-preservation #{case}"), ok, || {
                    format!(
                        "transport along {kind} with ε = {eps} broke nullity at first \
                         order: p'·p' = {defect}"
                    )
                });
            }
        }
        EngineMode::Float => {
            // quadratic scaling of the transport residual over the ladder
            let rays: Vec<LightRay> = (0..8).map(|_| sampler.ray()).collect();
            let mut rms = Vec::new();
            for &eps_value in &config.epsilon_ladder {
                let eps = Scalar::from_f64(eps_value);
                let mut sum_sq = 0.0f64;
                let mut n = 0usize;
                for a in GeneratorKind::ALL {
                    for b in GeneratorKind::ALL {
                        if a == b {
                            continue;
                        }
                        let fa = standard_generator(a).to_float_mode();
                        let fb = standard_generator(b);
                        let commutator = lie_commutator(&fb, &fa);
                        for ray in &rays {
                            let moved = ray
                                .infinitesimal_transform(&fa, &eps)
                                .expect("basis fields are conformal");
                            let residual = moved.generator_value(&fb, &Scalar::zero()).to_f64()
                                - ray.generator_value(&fb, &Scalar::zero()).to_f64()
                                - eps_value
                                    * ray.generator_value(&commutator, &Scalar::zero()).to_f64();
                            sum_sq += residual * residual;
                            n += 1;
                        }
                    }
                }
                rms.push((sum_sq / n as f64).sqrt());
            }
            for (i, window) in config.epsilon_ladder.windows(2).enumerate() {
                let order = (rms[i] / rms[i + 1]).ln() / (window[0] / window[1]).ln();
                runner.check(
                    format!("transport-order {} -> {}", window[0], window[1]),
                    (order - 2.0).abs() <= 0.1,
                    || {
                        format!(
                            "residual scaling order {order:.4} over ε = {} → {} \
                             (rms {} → {}), expected 2.0 ± 0.1",
                            window[0],
                            window[1],
                            rms[i],
                            rms[i + 1]
                        )
                    },
                );
            }
        }
    }
}

/// Canonical conjugation, the bracket/Lie agreement, bracket invariance of
/// the canonical matrix, and the phase-space Jacobi identity.
fn suite_canonical(runner: &mut Runner, config: &SuiteConfig) {
    // (P^μ, X^ν) = −η^{μν}
    for mu in 0..DIM {
        for nu in 0..DIM {
            let bracket = poisson_bracket(
                &PhaseFunction::momentum_var_upper(mu),
                &PhaseFunction::position_var(nu),
            )
            .expect("coordinates never hit the mass cap");
            let expected = PhaseFunction::constant(Scalar::from_int(-eta(mu, nu)));
            runner.check(
                format!("conjugation P^{mu},X^{nu}"),
                bracket == expected,
                || format!("(P^{mu}, X^{nu}) = {bracket}, expected {expected}"),
            );
        }
    }

    // brackets of the classical generators realise the Lie algebra
    for (a, b) in basis_pairs() {
        let bracket = poisson_bracket(&classical_part(a), &classical_part(b))
            .expect("classical generators stay within the mass cap");
        let coeffs = decompose_in_basis(&lie_commutator(
            &standard_generator(a),
            &standard_generator(b),
        ))
        .expect("the algebra closes");
        let mut expected = PhaseFunction::zero();
        for (k, coeff) in coeffs.iter().enumerate() {
            if !coeff.is_zero() {
                expected = expected.add(&classical_part(GeneratorKind::ALL[k]).scale(coeff));
            }
        }
        runner.check(format!("bracket-lie {a},{b}"), bracket == expected, || {
            format!("(Δ_{a}, Δ_{b}) does not match the Lie commutator: {bracket}")
        });
    }

    // the canonical matrix is invariant: (Δ, (P^μ, X^ν)) = 0
    for kind in GeneratorKind::ALL {
        let delta = generator_as_phase_function(kind, &config.alpha);
        let mut ok = true;
        for mu in 0..DIM {
            for nu in 0..DIM {
                let inner = poisson_bracket(
                    &PhaseFunction::momentum_var_upper(mu),
                    &PhaseFunction::position_var(nu),
                )
                .unwrap();
                let outer = poisson_bracket(&delta, &inner).unwrap();
                if !outer.is_zero() {
                    ok = false;
                }
            }
        }
        runner.check(format!("invariance {kind}"), ok, || {
            format!("(Δ_{kind}, (P, X)) is not zero")
        });
    }

    // corrections commute with every momentum component
    for kind in [
        GeneratorKind::C0,
        GeneratorKind::C1,
        GeneratorKind::C2,
        GeneratorKind::C3,
    ] {
        let correction = correction_part(kind, &config.alpha);
        let ok = (0..DIM).all(|mu| {
            poisson_bracket(&correction, &PhaseFunction::momentum_var(mu))
                .map(|b| b.is_zero())
                .unwrap_or(false)
        });
        runner.check(format!("correction-momentum {kind}"), ok, || {
            format!("the {kind} correction does not commute with the momenta")
        });
    }

    // Jacobi identity on phase space, corrections included
    for (a, b, c) in basis_triples() {
        let fa = generator_as_phase_function(a, &config.alpha);
        let fb = generator_as_phase_function(b, &config.alpha);
        let fc = generator_as_phase_function(c, &config.alpha);
        let jacobi = (|| -> Result<PhaseFunction, crate::phase::PhaseError> {
            let ab = poisson_bracket(&fa, &fb)?;
            let bc = poisson_bracket(&fb, &fc)?;
            let ca = poisson_bracket(&fc, &fa)?;
            Ok(poisson_bracket(&fa, &bc)?
                .add(&poisson_bracket(&fb, &ca)?)
                .add(&poisson_bracket(&fc, &ab)?))
        })();
        match jacobi {
            Ok(defect) => runner.check(format!("jacobi {a},{b},{c}"), defect.is_zero(), || {
                format!("phase-space Jacobi defect for ({a}, {b}, {c}): {defect}")
            }),
            Err(err) => runner.check(format!("jacobi {a},{b},{c}"), false, || err.to_string()),
        }
    }
}

/// Round trips between positions and generator totals, equivariance, and the
/// mass/correction scaling laws.
fn suite_event(runner: &mut Runner, config: &SuiteConfig) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0xE7E);
    let mut sampler = Sampler::new(&mut rng, config.mode);

    for case in 0..config.count {
        // two rays engineered to meet at a known rational point
        let meeting_point = sampler.four_vector_upper();
        let p1 = sampler.null_momentum();
        let p2 = loop {
            let candidate = sampler.null_momentum();
            if !minkowski_dot(&p1, &candidate).is_zero() {
                break candidate;
            }
        };
        let s1 = sampler.scalar();
        let s2 = sampler.scalar();
        let rays = vec![
            LightRay::new(&meeting_point + &p1.scale(&s1), p1.clone()).unwrap(),
            LightRay::new(&meeting_point + &p2.scale(&s2), p2.clone()).unwrap(),
        ];
        let state = match EventState::from_rays(rays, sampler.cast(config.alpha.clone())) {
            Ok(state) => state,
            Err(err) => {
                runner.check(format!("round-trip #{case}"), false, || err.to_string());
                continue;
            }
        };

        // identity checks go through subtraction so float mode inherits
        // the 1e-12 tolerance
        runner.check(
            format!("round-trip #{case}"),
            (&state.extract_position() - &meeting_point).is_zero()
                && state.intersection_residual().is_zero(),
            || {
                format!(
                    "extracted {} instead of {meeting_point}",
                    state.extract_position()
                )
            },
        );

        runner.check(
            format!("mass-positivity #{case}"),
            state.mass_squared().is_positive(),
            || format!("M² = {} is not positive", state.mass_squared()),
        );

        // shifting every origin shifts the position by the same vector
        let shift = sampler.four_vector_upper();
        let shifted: Vec<LightRay> = state
            .rays()
            .iter()
            .map(|r| LightRay::new(r.origin() + &shift, r.momentum().clone()).unwrap())
            .collect();
        match EventState::from_rays(shifted, sampler.cast(config.alpha.clone())) {
            Ok(moved) => runner.check(
                format!("equivariance #{case}"),
                (&moved.extract_position() - &(&state.extract_position() + &shift)).is_zero(),
                || {
                    format!(
                        "translation by {shift} moved the position to {}",
                        moved.extract_position()
                    )
                },
            ),
            Err(err) => runner.check(format!("equivariance #{case}"), false, || err.to_string()),
        }

        // sliding origins along their rays changes nothing
        let slid: Vec<LightRay> = state
            .rays()
            .iter()
            .map(|r| {
                let s = sampler.scalar();
                LightRay::new(r.origin() + &r.momentum().scale(&s), r.momentum().clone()).unwrap()
            })
            .collect();
        match EventState::from_rays(slid, sampler.cast(config.alpha.clone())) {
            Ok(moved) => runner.check(
                format!("propagation-invariance #{case}"),
                (&moved.extract_position() - &state.extract_position()).is_zero()
                    && (moved.momentum_total() - state.momentum_total()).is_zero()
                    && (moved.dilatation_total() - state.dilatation_total()).is_zero()
                    && (moved.mass_squared() - state.mass_squared()).is_zero(),
                || "a slide along the rays changed the totals".into(),
            ),
            Err(err) => runner.check(format!("propagation-invariance #{case}"), false, || {
                err.to_string()
            }),
        }
    }

    // forward/backward analytic round trip on arbitrary massive momenta
    for case in 0..config.count.min(100) {
        let position = sampler.four_vector_upper();
        let momentum = loop {
            let candidate = sampler.four_vector_upper();
            let mass = minkowski_dot(&candidate, &candidate).abs();
            // keep the inversion well conditioned: |P·P| >= 1
            if !(mass - Scalar::one()).is_negative() {
                break candidate;
            }
        };
        let (rotation, dilatation) = generators_from_position(&position, &momentum);
        match position_from_generators(&momentum, &rotation, &dilatation) {
            Ok(recovered) => runner.check(
                format!("analytic-round-trip #{case}"),
                (&recovered - &position).is_zero(),
                || format!("recovered {recovered} instead of {position}"),
            ),
            Err(err) => runner.check(format!("analytic-round-trip #{case}"), false, || {
                err.to_string()
            }),
        }
    }

    // parallel rays must be rejected as massless
    let shared = sampler.null_momentum();
    let parallel = vec![
        LightRay::new(sampler.four_vector_upper(), shared.clone()).unwrap(),
        LightRay::new(
            sampler.four_vector_upper(),
            shared.scale(&sampler.cast(Scalar::from_int(2))),
        )
        .unwrap(),
    ];
    runner.check(
        "massless-rejection",
        EventState::from_rays(parallel, sampler.cast(Scalar::one())).is_err(),
        || "a single-direction state was accepted".into(),
    );

    // Ĉ scales as the inverse of the momentum scale
    let meeting_point = sampler.four_vector_upper();
    let p1 = sampler.null_momentum();
    let p2 = loop {
        let candidate = sampler.null_momentum();
        if !minkowski_dot(&p1, &candidate).is_zero() {
            break candidate;
        }
    };
    let base_rays = vec![
        LightRay::new(meeting_point.clone(), p1.clone()).unwrap(),
        LightRay::new(meeting_point.clone(), p2.clone()).unwrap(),
    ];
    let scaled_rays = vec![
        LightRay::new(
            meeting_point.clone(),
            p1.scale(&sampler.cast(Scalar::from_int(3))),
        )
        .unwrap(),
        LightRay::new(meeting_point, p2.scale(&sampler.cast(Scalar::from_int(3)))).unwrap(),
    ];
    let alpha = sampler.cast(config.alpha.clone());
    match (
        EventState::from_rays(base_rays, alpha.clone()),
        EventState::from_rays(scaled_rays, alpha),
    ) {
        (Ok(base), Ok(scaled)) => runner.check(
            "correction-scaling",
            (&scaled.quantum_correction()
                - &base
                    .quantum_correction()
                    .scale(&sampler.cast(Scalar::ratio(1, 3))))
                .is_zero(),
            || "Ĉ did not scale as 1/k under momentum rescaling".into(),
        ),
        _ => runner.check("correction-scaling", false, || {
            "failed to build the scaling states".into()
        }),
    }
}

/// Momentum shifts are classical and α-independent; position shifts carry
/// exactly the documented correction.
fn suite_shifts(runner: &mut Runner, config: &SuiteConfig) {
    for kind in GeneratorKind::ALL {
        // (Δ, P_μ) = P_ν ∂_μ δ^ν(X) for every kind and α
        let classical = classical_momentum_shift(kind);
        for alpha in [Scalar::zero(), config.alpha.clone()] {
            match momentum_shift(kind, &alpha) {
                Ok(shifts) => {
                    let ok = (0..DIM).all(|mu| shifts[mu] == classical[mu]);
                    runner.check(format!("momentum {kind} alpha={alpha}"), ok, || {
                        format!("momentum shift of {kind} is not classical at α = {alpha}")
                    });
                }
                Err(err) => runner.check(format!("momentum {kind} alpha={alpha}"), false, || {
                    err.to_string()
                }),
            }
        }

        // classical limit of the position shift is −δ^μ(X)
        match position_shift(kind, &Scalar::zero()) {
            Ok(shift) => {
                let field = standard_generator(kind);
                let ok = (0..DIM).all(|mu| {
                    shift.correction[mu].is_zero()
                        && shift.total(mu)
                            == PhaseFunction::from_coordinate_polynomial(field.component(mu)).neg()
                });
                runner.check(format!("position-classical {kind}"), ok, || {
                    format!("α = 0 position shift of {kind} is not −δ(X)")
                });
            }
            Err(err) => runner.check(format!("position-classical {kind}"), false, || {
                err.to_string()
            }),
        }
    }

    // the correction matches −(α/M²)(η_ν^μ − 2P^μP_ν/M²) term by term
    for (kind, nu) in [
        (GeneratorKind::C0, 0usize),
        (GeneratorKind::C1, 1),
        (GeneratorKind::C2, 2),
        (GeneratorKind::C3, 3),
    ] {
        match position_shift(kind, &config.alpha) {
            Ok(shift) => {
                let ok = (0..DIM).all(|mu| {
                    shift.correction[mu] == closed_form_correction(nu, mu, &config.alpha)
                });
                runner.check(format!("position-correction {kind}"), ok, || {
                    format!("the {kind} correction deviates from the closed form")
                });
            }
            Err(err) => runner.check(format!("position-correction {kind}"), false, || {
                err.to_string()
            }),
        }
    }

    // worked point: C_0 at X = 0, P = (2,0,0,0), α = 1 → component 0 is 1/4
    match position_shift(GeneratorKind::C0, &Scalar::one()) {
        Ok(shift) => {
            let value = shift
                .total(0)
                .eval(
                    &FourVector::upper_ints([0, 0, 0, 0]),
                    &FourVector::lower_ints([2, 0, 0, 0]),
                )
                .expect("massive point");
            runner.check("worked-point C0", value == Scalar::ratio(1, 4), || {
                format!("C0 shift at the worked point is {value}, expected 1/4")
            });
        }
        Err(err) => runner.check("worked-point C0", false, || err.to_string()),
    }
}

/// The closed-form position correction −(α/M²)(η_ν^μ − 2P^μP_ν/M²),
/// assembled directly rather than by differentiation.
fn closed_form_correction(nu: usize, mu: usize, alpha: &Scalar) -> PhaseFunction {
    let mut expected = PhaseFunction::zero();
    if mu == nu {
        let diagonal =
            PhaseFunction::term([0; DIM], [0; DIM], 1, -alpha).expect("below the mass cap");
        expected = expected.add(&diagonal);
    }
    // +2α P^μ P_ν / M⁴ with P^μ = η^{μμ} P_μ
    let mut p_exps = [0u32; DIM];
    p_exps[mu] += 1;
    p_exps[nu] += 1;
    let coeff = &(alpha + alpha) * &Scalar::from_int(METRIC_SIGNS[mu]);
    let quadratic = PhaseFunction::term([0; DIM], p_exps, 2, coeff).expect("below the mass cap");
    expected.add(&quadratic)
}

/// Both sides of the gradient identity equal ∂^μ δ^ν(X) at α ∈ {0, 1, 7/3}.
fn suite_consistency(runner: &mut Runner, config: &SuiteConfig) {
    let mut alphas = vec![Scalar::zero(), Scalar::one(), Scalar::ratio(7, 3)];
    if !alphas.contains(&config.alpha) {
        alphas.push(config.alpha.clone());
    }
    for kind in GeneratorKind::ALL {
        for alpha in &alphas {
            match shift_gradient_consistency(kind, alpha) {
                Ok(check) => runner.check(
                    format!("gradients {kind} alpha={alpha}"),
                    check.all_zero(),
                    || {
                        let mut detail = String::new();
                        for mu in 0..DIM {
                            for nu in 0..DIM {
                                let cross = check.cross_residual(mu, nu);
                                let target = check.target_residual(mu, nu);
                                if !cross.is_zero() || !target.is_zero() {
                                    let _ = write!(
                                        detail,
                                        "[{mu}][{nu}]: cross {cross}, target {target}; "
                                    );
                                }
                            }
                        }
                        detail
                    },
                ),
                Err(err) => runner.check(format!("gradients {kind} alpha={alpha}"), false, || {
                    err.to_string()
                }),
            }
        }
    }
}

/// λ recovered from the shift laws matches the deformation's conformal
/// factor with x ↦ X, for every generator and α.
fn suite_conformal_factor(runner: &mut Runner, config: &SuiteConfig) {
    for kind in GeneratorKind::ALL {
        match conformal_factor_from_shifts(kind, &config.alpha) {
            Ok(lambda) => {
                let expected = PhaseFunction::from_coordinate_polynomial(
                    &conformal_factor(&standard_generator(kind))
                        .expect("basis fields are conformal"),
                );
                runner.check(
                    format!("factor-from-shifts {kind}"),
                    lambda == expected,
                    || format!("shift-extracted λ_{kind} = {lambda}, field route gives {expected}"),
                );
            }
            Err(err) => runner.check(format!("factor-from-shifts {kind}"), false, || {
                err.to_string()
            }),
        }
    }
}

/// Report rendering format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

impl FromStr for ReportFormat {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, SuiteError> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            other => Err(SuiteError::Config {
                message: format!("unknown format {other:?}; expected text or json"),
            }),
        }
    }
}

/// Renders a result: a fixed-width table, or JSON matching the shipped
/// schema. Timing never enters the rendering, so reports are
/// byte-deterministic.
pub fn emit_report(result: &SuiteResult, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            serde_json::to_string_pretty(result).expect("suite results always serialise")
        }
        ReportFormat::Text => {
            let mut out = String::new();
            let mode = match result.mode {
                EngineMode::Exact => "exact",
                EngineMode::Float => "float",
            };
            let _ = writeln!(
                out,
                "{:<18} {:<6} {:>10} {:>8} {:>9}",
                "suite", "mode", "seed", "cases", "failures"
            );
            let _ = writeln!(
                out,
                "{:<18} {:<6} {:>10} {:>8} {:>9}",
                result.suite,
                mode,
                result.seed,
                result.cases,
                result.failures.len()
            );
            for failure in &result.failures {
                let _ = writeln!(out, "FAIL {}: {}", failure.case, failure.detail);
            }
            out
        }
    }
}
