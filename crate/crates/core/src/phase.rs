//! Poisson brackets on the (X, P) phase space of event observables.
//!
//! A [`PhaseFunction`] is a finite sum of terms
//! `c · X^a · P_b · (M²)^{−k}` with M² = P_ν P^ν, closed under addition,
//! multiplication, both partial derivatives, and hence under the bracket
//! (f, g) = ∂f/∂X^μ ∂g/∂P_μ − ∂f/∂P_μ ∂g/∂X^μ.
//!
//! X and P are commuting classical coordinates here: the bracket realises the
//! quantum commutators of the conformal generators, so the operator
//! symmetrised product collapses to the ordinary one. The generators carry
//! their accelerated-frame correction Δ̂_{C_ν} = α P_ν / M², which feeds the
//! shift laws for positions while leaving momentum shifts classical.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::minkowski::{eta, minkowski_dot, FourVector, DIM, METRIC_SIGNS};
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::vecfield::{standard_generator, GeneratorKind};

/// Largest supported power of M² in a denominator. No generator expression
/// exceeds k = 2; the cap guards runaway user compositions.
pub const MAX_INV_M2: u32 = 8;

/// (X exponents, P exponents, power of 1/M²).
type PhaseKey = ([u32; DIM], [u32; DIM], u32);

/// Key of a term after clearing the M² denominator.
type ClearedKey = ([u32; DIM], [u32; DIM]);

#[derive(Debug, Error)]
pub enum PhaseError {
    #[error("inverse-mass power {power} exceeds the supported cap {MAX_INV_M2}")]
    DenominatorCap { power: u32 },
    #[error(
        "symmetrised shift gradient is not proportional to the metric at entry ({mu},{nu}); residual: {residual}"
    )]
    NotProportional {
        mu: usize,
        nu: usize,
        residual: PhaseFunction,
    },
    #[error("cannot evaluate a phase function at null total momentum")]
    MasslessPoint,
}

/// A function on (X, P) phase space: polynomial in X^μ and P_μ with rational
/// powers of 1/M² attached per term. Terms are merged and zero coefficients
/// dropped; equality clears a common M² denominator first, so two
/// representations of the same rational function compare equal.
#[derive(Clone, Debug, Default)]
pub struct PhaseFunction {
    terms: BTreeMap<PhaseKey, Scalar>,
}

impl PhaseFunction {
    pub fn zero() -> Self {
        PhaseFunction::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut f = PhaseFunction::zero();
        f.add_term(([0; DIM], [0; DIM], 0), c);
        f
    }

    /// The coordinate function X^mu.
    pub fn position_var(mu: usize) -> Self {
        assert!(mu < DIM);
        let mut x = [0; DIM];
        x[mu] = 1;
        let mut f = PhaseFunction::zero();
        f.add_term((x, [0; DIM], 0), Scalar::one());
        f
    }

    /// The coordinate function P_mu (lower index).
    pub fn momentum_var(mu: usize) -> Self {
        assert!(mu < DIM);
        let mut p = [0; DIM];
        p[mu] = 1;
        let mut f = PhaseFunction::zero();
        f.add_term(([0; DIM], p, 0), Scalar::one());
        f
    }

    /// The upper-index momentum P^mu = η^{μν} P_ν.
    pub fn momentum_var_upper(mu: usize) -> Self {
        Self::momentum_var(mu).scale(&Scalar::from_int(METRIC_SIGNS[mu]))
    }

    /// Lifts a coordinate polynomial, substituting x^μ ↦ X^μ.
    pub fn from_coordinate_polynomial(p: &Polynomial) -> Self {
        let mut f = PhaseFunction::zero();
        for (exps, coef) in p.terms() {
            f.add_term((*exps, [0; DIM], 0), coef.clone());
        }
        f
    }

    /// A single term c · X^a · P_b · (M²)^{−k}; rejects powers beyond the
    /// supported cap.
    pub fn term(
        x_exps: [u32; DIM],
        p_exps: [u32; DIM],
        inv_m2: u32,
        coef: Scalar,
    ) -> Result<Self, PhaseError> {
        if inv_m2 > MAX_INV_M2 {
            return Err(PhaseError::DenominatorCap { power: inv_m2 });
        }
        let mut f = PhaseFunction::zero();
        f.add_term((x_exps, p_exps, inv_m2), coef);
        Ok(f)
    }

    fn add_term(&mut self, key: PhaseKey, coef: Scalar) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coef;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, factor: &Scalar) -> PhaseFunction {
        let mut out = PhaseFunction::zero();
        for (key, coef) in &self.terms {
            out.add_term(*key, coef * factor);
        }
        out
    }

    pub fn add(&self, rhs: &PhaseFunction) -> PhaseFunction {
        let mut out = self.clone();
        for (key, coef) in &rhs.terms {
            out.add_term(*key, coef.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &PhaseFunction) -> PhaseFunction {
        let mut out = self.clone();
        for (key, coef) in &rhs.terms {
            out.add_term(*key, -coef);
        }
        out
    }

    pub fn neg(&self) -> PhaseFunction {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn mul(&self, rhs: &PhaseFunction) -> Result<PhaseFunction, PhaseError> {
        let mut out = PhaseFunction::zero();
        for ((ax, ap, ak), ac) in &self.terms {
            for ((bx, bp, bk), bc) in &rhs.terms {
                let power = ak + bk;
                if power > MAX_INV_M2 {
                    return Err(PhaseError::DenominatorCap { power });
                }
                let x = std::array::from_fn(|i| ax[i] + bx[i]);
                let p = std::array::from_fn(|i| ap[i] + bp[i]);
                out.add_term((x, p, power), ac * bc);
            }
        }
        Ok(out)
    }

    /// ∂/∂X^mu.
    pub fn position_derivative(&self, mu: usize) -> PhaseFunction {
        let mut out = PhaseFunction::zero();
        for ((x, p, k), coef) in &self.terms {
            if x[mu] == 0 {
                continue;
            }
            let mut dx = *x;
            dx[mu] -= 1;
            out.add_term((dx, *p, *k), coef * &Scalar::from_int(x[mu] as i64));
        }
        out
    }

    /// ∂/∂P_mu, using ∂(M^{−2k})/∂P_μ = −2k P^μ M^{−2(k+1)}.
    pub fn momentum_derivative(&self, mu: usize) -> Result<PhaseFunction, PhaseError> {
        let mut out = PhaseFunction::zero();
        for ((x, p, k), coef) in &self.terms {
            if p[mu] > 0 {
                let mut dp = *p;
                dp[mu] -= 1;
                out.add_term((*x, dp, *k), coef * &Scalar::from_int(p[mu] as i64));
            }
            if *k > 0 {
                let power = k + 1;
                if power > MAX_INV_M2 {
                    return Err(PhaseError::DenominatorCap { power });
                }
                let mut pp = *p;
                pp[mu] += 1;
                let factor = Scalar::from_int(-2 * (*k as i64) * METRIC_SIGNS[mu]);
                out.add_term((*x, pp, power), coef * &factor);
            }
        }
        Ok(out)
    }

    /// Largest 1/M² power present.
    pub fn max_inv_m2(&self) -> u32 {
        self.terms.keys().map(|(_, _, k)| *k).max().unwrap_or(0)
    }

    /// Terms after multiplying through by (M²)^k_max, as a true polynomial
    /// in the eight coordinates.
    fn cleared(&self, k_max: u32) -> BTreeMap<ClearedKey, Scalar> {
        let mut out: BTreeMap<ClearedKey, Scalar> = BTreeMap::new();
        for ((x, p, k), coef) in &self.terms {
            for (m2_exps, m2_coef) in m2_power(k_max - k) {
                let key = (*x, std::array::from_fn(|i| p[i] + m2_exps[i]));
                let add = coef * &m2_coef;
                match out.entry(key) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(add);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let sum = o.get() + &add;
                        if sum.is_zero() {
                            o.remove();
                        } else {
                            *o.get_mut() = sum;
                        }
                    }
                }
            }
        }
        out
    }

    /// Identically zero as a rational function on the M² ≠ 0 domain.
    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        self.cleared(self.max_inv_m2()).is_empty()
    }

    pub fn eval(
        &self,
        position: &FourVector,
        momentum_lower: &FourVector,
    ) -> Result<Scalar, PhaseError> {
        let m2 = minkowski_dot(momentum_lower, momentum_lower);
        if m2.is_zero() {
            return Err(PhaseError::MasslessPoint);
        }
        let mut acc = Scalar::zero();
        for ((x, p, k), coef) in &self.terms {
            let mut term = coef.clone();
            for mu in 0..DIM {
                if x[mu] > 0 {
                    term = term * position[mu].pow(x[mu]);
                }
                if p[mu] > 0 {
                    term = term * momentum_lower[mu].pow(p[mu]);
                }
            }
            if *k > 0 {
                term = term
                    .checked_div(&m2.pow(*k))
                    .expect("nonzero mass checked above");
            }
            acc = acc + term;
        }
        Ok(acc)
    }
}

/// Equality as rational functions: canonical forms compared after clearing a
/// common M² denominator.
impl PartialEq for PhaseFunction {
    fn eq(&self, other: &Self) -> bool {
        let k_max = self.max_inv_m2().max(other.max_inv_m2());
        self.cleared(k_max) == other.cleared(k_max)
    }
}

/// (M²)^power expanded over the momentum coordinates.
fn m2_power(power: u32) -> Vec<([u32; DIM], Scalar)> {
    let mut terms: Vec<([u32; DIM], Scalar)> = vec![([0; DIM], Scalar::one())];
    for _ in 0..power {
        let mut next: BTreeMap<[u32; DIM], Scalar> = BTreeMap::new();
        for (exps, coef) in &terms {
            for nu in 0..DIM {
                let mut e = *exps;
                e[nu] += 2;
                let c = coef * &Scalar::from_int(METRIC_SIGNS[nu]);
                let entry = next.entry(e).or_insert_with(Scalar::zero);
                *entry = &*entry + &c;
            }
        }
        terms = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    }
    terms
}

impl fmt::Display for PhaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, ((x, p, k), coef)) in self.terms.iter().enumerate() {
            let negative = coef.is_negative();
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mag = coef.abs();
            let trivial_monomial =
                x.iter().all(|&e| e == 0) && p.iter().all(|&e| e == 0) && *k == 0;
            let mut wrote = false;
            if trivial_monomial || mag != Scalar::one() {
                write!(f, "{mag}")?;
                wrote = true;
            }
            let mut factor = |text: String, f: &mut fmt::Formatter<'_>| -> fmt::Result {
                if wrote {
                    f.write_str("*")?;
                }
                f.write_str(&text)?;
                wrote = true;
                Ok(())
            };
            for mu in 0..DIM {
                match x[mu] {
                    0 => {}
                    1 => factor(format!("X{mu}"), f)?,
                    e => factor(format!("X{mu}^{e}"), f)?,
                }
            }
            for mu in 0..DIM {
                match p[mu] {
                    0 => {}
                    1 => factor(format!("P{mu}"), f)?,
                    e => factor(format!("P{mu}^{e}"), f)?,
                }
            }
            if *k > 0 {
                factor(format!("M2^-{k}"), f)?;
            }
        }
        Ok(())
    }
}

/// Wire form of one term.
#[derive(Serialize, Deserialize)]
struct PhaseTermRepr {
    coef: Scalar,
    x_exps: [u32; DIM],
    p_exps: [u32; DIM],
    inv_m2: u32,
}

impl Serialize for PhaseFunction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<PhaseTermRepr> = self
            .terms
            .iter()
            .map(|((x, p, k), coef)| PhaseTermRepr {
                coef: coef.clone(),
                x_exps: *x,
                p_exps: *p,
                inv_m2: *k,
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PhaseFunction {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms = Vec::<PhaseTermRepr>::deserialize(deserializer)?;
        if let Some(bad) = terms.iter().find(|t| t.inv_m2 > MAX_INV_M2) {
            return Err(serde::de::Error::custom(format!(
                "inverse-mass power {} exceeds the supported cap {MAX_INV_M2}",
                bad.inv_m2
            )));
        }
        let mut f = PhaseFunction::zero();
        for t in terms {
            f.add_term((t.x_exps, t.p_exps, t.inv_m2), t.coef);
        }
        Ok(f)
    }
}

/// Exact symbolic Poisson bracket
/// (f, g) = ∂f/∂X^μ ∂g/∂P_μ − ∂f/∂P_μ ∂g/∂X^μ.
pub fn poisson_bracket(f: &PhaseFunction, g: &PhaseFunction) -> Result<PhaseFunction, PhaseError> {
    let mut out = PhaseFunction::zero();
    for mu in 0..DIM {
        let fx = f.position_derivative(mu);
        let gp = g.momentum_derivative(mu)?;
        let fp = f.momentum_derivative(mu)?;
        let gx = g.position_derivative(mu);
        out = out.add(&fx.mul(&gp)?).sub(&fp.mul(&gx)?);
    }
    Ok(out)
}

/// The generator Δ_k = P_μ δ_k^μ(X) + Δ̂_k realised on phase space, with
/// Δ̂ = α P_ν / M² for the C_ν kinds and zero otherwise.
pub fn generator_as_phase_function(kind: GeneratorKind, alpha: &Scalar) -> PhaseFunction {
    classical_part(kind).add(&correction_part(kind, alpha))
}

/// P_μ δ_k^μ(X).
pub fn classical_part(kind: GeneratorKind) -> PhaseFunction {
    let field = standard_generator(kind);
    let mut out = PhaseFunction::zero();
    for mu in 0..DIM {
        let lift = PhaseFunction::from_coordinate_polynomial(field.component(mu));
        out = out.add(
            &PhaseFunction::momentum_var(mu)
                .mul(&lift)
                .expect("polynomial parts never hit the mass cap"),
        );
    }
    out
}

/// Δ̂_k: the accelerated-frame correction α P_ν / M², or zero.
pub fn correction_part(kind: GeneratorKind, alpha: &Scalar) -> PhaseFunction {
    match kind.acceleration_axis() {
        Some(nu) => {
            let mut f = PhaseFunction::zero();
            let mut p = [0; DIM];
            p[nu] = 1;
            f.add_term(([0; DIM], p, 1), alpha.clone());
            f
        }
        None => PhaseFunction::zero(),
    }
}

/// The four momentum shifts (Δ_k, P_μ). These are classical for every kind:
/// the correction commutes with the momenta.
pub fn momentum_shift(
    kind: GeneratorKind,
    alpha: &Scalar,
) -> Result<[PhaseFunction; DIM], PhaseError> {
    let delta = generator_as_phase_function(kind, alpha);
    let mut out: [PhaseFunction; DIM] = Default::default();
    for (mu, slot) in out.iter_mut().enumerate() {
        *slot = poisson_bracket(&delta, &PhaseFunction::momentum_var(mu))?;
    }
    Ok(out)
}

/// The expected classical form of the momentum shift, P_ν ∂_μ δ^ν(X),
/// built by direct differentiation of the deformation rather than through
/// the bracket.
pub fn classical_momentum_shift(kind: GeneratorKind) -> [PhaseFunction; DIM] {
    let field = standard_generator(kind);
    std::array::from_fn(|mu| {
        let mut acc = PhaseFunction::zero();
        for nu in 0..DIM {
            let gradient =
                PhaseFunction::from_coordinate_polynomial(&field.component(nu).partial(mu));
            acc = acc.add(
                &PhaseFunction::momentum_var(nu)
                    .mul(&gradient)
                    .expect("polynomial parts never hit the mass cap"),
            );
        }
        acc
    })
}

/// The four position shifts (Δ_k, X^μ) split into the classical part
/// −δ^μ(X) and the correction −∂Δ̂/∂P_μ.
pub fn position_shift(kind: GeneratorKind, alpha: &Scalar) -> Result<PositionShift, PhaseError> {
    let classical = classical_part(kind);
    let correction = correction_part(kind, alpha);
    let mut classical_shift: [PhaseFunction; DIM] = Default::default();
    let mut correction_shift: [PhaseFunction; DIM] = Default::default();
    for mu in 0..DIM {
        classical_shift[mu] = poisson_bracket(&classical, &PhaseFunction::position_var(mu))?;
        correction_shift[mu] = poisson_bracket(&correction, &PhaseFunction::position_var(mu))?;
    }
    Ok(PositionShift {
        classical: classical_shift,
        correction: correction_shift,
    })
}

/// Classical and correction parts of (Δ, X^μ).
#[derive(Clone, Debug, Serialize)]
pub struct PositionShift {
    /// −δ^μ(X).
    pub classical: [PhaseFunction; DIM],
    /// −∂Δ̂/∂P_μ; zero unless the kind is C_ν with α > 0.
    pub correction: [PhaseFunction; DIM],
}

impl PositionShift {
    pub fn total(&self, mu: usize) -> PhaseFunction {
        self.classical[mu].add(&self.correction[mu])
    }
}

/// Both sides of the gradient-consistency identity together with their
/// common classical target ∂^μ δ^ν(X).
pub struct ConsistencyCheck {
    /// −∂/∂X_μ (Δ, X^ν).
    pub position_side: [[PhaseFunction; DIM]; DIM],
    /// ∂/∂P_ν (Δ, P^μ).
    pub momentum_side: [[PhaseFunction; DIM]; DIM],
    /// ∂^μ δ^ν(X).
    pub target: [[PhaseFunction; DIM]; DIM],
}

impl ConsistencyCheck {
    /// position side minus momentum side.
    pub fn cross_residual(&self, mu: usize, nu: usize) -> PhaseFunction {
        self.position_side[mu][nu].sub(&self.momentum_side[mu][nu])
    }

    /// position side minus the classical target.
    pub fn target_residual(&self, mu: usize, nu: usize) -> PhaseFunction {
        self.position_side[mu][nu].sub(&self.target[mu][nu])
    }

    pub fn all_zero(&self) -> bool {
        (0..DIM).all(|mu| {
            (0..DIM).all(|nu| {
                self.cross_residual(mu, nu).is_zero() && self.target_residual(mu, nu).is_zero()
            })
        })
    }
}

/// Computes both sides of −∂/∂X_μ (Δ, X^ν) = ∂/∂P_ν (Δ, P^μ) = ∂^μ δ^ν(X)
/// symbolically. The correction is X-independent, so every α gives the same
/// classical answer.
pub fn shift_gradient_consistency(
    kind: GeneratorKind,
    alpha: &Scalar,
) -> Result<ConsistencyCheck, PhaseError> {
    let pos_shift = position_shift(kind, alpha)?;
    let mom_shift = momentum_shift(kind, alpha)?;
    let field = standard_generator(kind);

    let mut position_side: [[PhaseFunction; DIM]; DIM] =
        std::array::from_fn(|_| Default::default());
    let mut momentum_side: [[PhaseFunction; DIM]; DIM] =
        std::array::from_fn(|_| Default::default());
    let mut target: [[PhaseFunction; DIM]; DIM] = std::array::from_fn(|_| Default::default());

    for mu in 0..DIM {
        for nu in 0..DIM {
            // ∂/∂X_μ = η^{μρ} ∂/∂X^ρ is a sign on the diagonal metric
            position_side[mu][nu] = pos_shift
                .total(nu)
                .position_derivative(mu)
                .scale(&Scalar::from_int(-METRIC_SIGNS[mu]));
            // (Δ, P^μ) = η^{μρ} (Δ, P_ρ)
            momentum_side[mu][nu] = mom_shift[mu]
                .scale(&Scalar::from_int(METRIC_SIGNS[mu]))
                .momentum_derivative(nu)?;
            target[mu][nu] =
                PhaseFunction::from_coordinate_polynomial(&field.component(nu).partial(mu))
                    .scale(&Scalar::from_int(METRIC_SIGNS[mu]));
        }
    }

    Ok(ConsistencyCheck {
        position_side,
        momentum_side,
        target,
    })
}

/// Extracts the conformal factor λ(X) from the symmetrised position-side
/// shift gradients, cross-checking the momentum side, which must equal
/// −2η^{μν}λ(X).
pub fn conformal_factor_from_shifts(
    kind: GeneratorKind,
    alpha: &Scalar,
) -> Result<PhaseFunction, PhaseError> {
    let pos_shift = position_shift(kind, alpha)?;
    let mom_shift = momentum_shift(kind, alpha)?;

    // ∂/∂X_μ (Δ, X^ν), raised derivative index
    let pos_grad = |mu: usize, nu: usize| {
        pos_shift
            .total(nu)
            .position_derivative(mu)
            .scale(&Scalar::from_int(METRIC_SIGNS[mu]))
    };
    // ∂/∂P_μ (Δ, P^ν)
    let mom_grad = |mu: usize, nu: usize| -> Result<PhaseFunction, PhaseError> {
        mom_shift[nu]
            .scale(&Scalar::from_int(METRIC_SIGNS[nu]))
            .momentum_derivative(mu)
    };

    // η^{00} = +1, so 2λ is the symmetrised 00 entry, which is twice the
    // plain 00 gradient.
    let lambda = pos_grad(0, 0);

    for mu in 0..DIM {
        for nu in mu..DIM {
            let sym_pos = pos_grad(mu, nu).add(&pos_grad(nu, mu));
            let expected = lambda.scale(&Scalar::from_int(2 * eta(mu, nu)));
            let residual = sym_pos.sub(&expected);
            if !residual.is_zero() {
                return Err(PhaseError::NotProportional { mu, nu, residual });
            }

            let sym_mom = mom_grad(mu, nu)?.add(&mom_grad(nu, mu)?);
            let expected = lambda.scale(&Scalar::from_int(-2 * eta(mu, nu)));
            let residual = sym_mom.sub(&expected);
            if !residual.is_zero() {
                return Err(PhaseError::NotProportional { mu, nu, residual });
            }
        }
    }

    Ok(lambda)
}

/// The momentum and position shift laws of one generator, with the classical
/// and correction parts kept separate, plus optional numeric evaluations.
#[derive(Clone, Debug, Serialize)]
pub struct ShiftReport {
    pub kind: GeneratorKind,
    pub alpha: Scalar,
    /// (Δ, P_μ); classical for every kind.
    pub momentum_shift: [PhaseFunction; DIM],
    /// (Δ, X^μ) split into −δ^μ(X) and −∂Δ̂/∂P_μ.
    pub position_shift: PositionShift,
    /// Numeric evaluations at user-supplied phase-space points.
    pub evaluations: Vec<ShiftEvaluation>,
}

/// Numeric shift values at one (X, P) point.
#[derive(Clone, Debug, Serialize)]
pub struct ShiftEvaluation {
    /// X^μ, upper index.
    pub position: FourVector,
    /// P_μ, lower index.
    pub momentum: FourVector,
    pub momentum_shift: [Scalar; DIM],
    pub position_shift: [Scalar; DIM],
}

impl ShiftReport {
    pub fn new(kind: GeneratorKind, alpha: &Scalar) -> Result<Self, PhaseError> {
        Ok(ShiftReport {
            kind,
            alpha: alpha.clone(),
            momentum_shift: momentum_shift(kind, alpha)?,
            position_shift: position_shift(kind, alpha)?,
            evaluations: Vec::new(),
        })
    }

    /// Appends the numeric shifts at one point; requires M² ≠ 0 there.
    pub fn evaluate_at(
        &mut self,
        position: &FourVector,
        momentum_lower: &FourVector,
    ) -> Result<(), PhaseError> {
        let eval_four = |fs: &dyn Fn(usize) -> PhaseFunction| -> Result<[Scalar; DIM], PhaseError> {
            let mut out: [Scalar; DIM] = std::array::from_fn(|_| Scalar::zero());
            for (mu, slot) in out.iter_mut().enumerate() {
                *slot = fs(mu).eval(position, momentum_lower)?;
            }
            Ok(out)
        };
        let momentum_shift = eval_four(&|mu| self.momentum_shift[mu].clone())?;
        let position_shift = eval_four(&|mu| self.position_shift.total(mu))?;
        self.evaluations.push(ShiftEvaluation {
            position: position.clone(),
            momentum: momentum_lower.clone(),
            momentum_shift,
            position_shift,
        });
        Ok(())
    }
}
