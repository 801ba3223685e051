//! Polynomial vector fields on Minkowski space.
//!
//! A [`VectorField`] is a coordinate deformation δ^μ(x): four polynomials,
//! one per upper component. This module provides the Lie commutator, the
//! metric variation and conformal factor of a deformation, the standard
//! 15-generator conformal basis (translations, rotations/boosts, dilatation,
//! and the transformations to uniformly accelerated frames), and exact
//! decomposition in that basis.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::minkowski::{eta, kronecker, FourVector, DIM, METRIC_SIGNS};
use crate::poly::{MultiIndex, Polynomial};
use crate::scalar::Scalar;

/// Number of generators in the conformal basis.
pub const BASIS_DIM: usize = 15;

/// One of the 15 conformal generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeneratorKind {
    P0,
    P1,
    P2,
    P3,
    J01,
    J02,
    J03,
    J12,
    J13,
    J23,
    D,
    C0,
    C1,
    C2,
    C3,
}

use GeneratorKind::*;

impl GeneratorKind {
    pub const ALL: [GeneratorKind; BASIS_DIM] = [
        P0, P1, P2, P3, J01, J02, J03, J12, J13, J23, D, C0, C1, C2, C3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            P0 => "P0",
            P1 => "P1",
            P2 => "P2",
            P3 => "P3",
            J01 => "J01",
            J02 => "J02",
            J03 => "J03",
            J12 => "J12",
            J13 => "J13",
            J23 => "J23",
            D => "D",
            C0 => "C0",
            C1 => "C1",
            C2 => "C2",
            C3 => "C3",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Position in [`Self::ALL`].
    pub fn index(self) -> usize {
        Self::ALL.iter().position(|k| *k == self).unwrap()
    }

    /// The axis ν for P_ν kinds.
    pub fn translation_axis(self) -> Option<usize> {
        match self {
            P0 => Some(0),
            P1 => Some(1),
            P2 => Some(2),
            P3 => Some(3),
            _ => None,
        }
    }

    /// The pair (ν, ρ) with ν < ρ for J_{νρ} kinds.
    pub fn rotation_axes(self) -> Option<(usize, usize)> {
        match self {
            J01 => Some((0, 1)),
            J02 => Some((0, 2)),
            J03 => Some((0, 3)),
            J12 => Some((1, 2)),
            J13 => Some((1, 3)),
            J23 => Some((2, 3)),
            _ => None,
        }
    }

    /// The axis ν for C_ν kinds.
    pub fn acceleration_axis(self) -> Option<usize> {
        match self {
            C0 => Some(0),
            C1 => Some(1),
            C2 => Some(2),
            C3 => Some(3),
            _ => None,
        }
    }

    pub fn rotation(nu: usize, rho: usize) -> Option<GeneratorKind> {
        Self::ALL
            .into_iter()
            .find(|k| k.rotation_axes() == Some((nu, rho)))
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A coordinate deformation δ^μ(x): four upper-index polynomial components.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VectorField {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    label: Option<String>,
    components: [Polynomial; DIM],
}

impl VectorField {
    pub fn new(components: [Polynomial; DIM]) -> Self {
        VectorField {
            components,
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn zero() -> Self {
        Self::new(std::array::from_fn(|_| Polynomial::zero()))
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn component(&self, mu: usize) -> &Polynomial {
        &self.components[mu]
    }

    pub fn components(&self) -> &[Polynomial; DIM] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.components
            .iter()
            .filter_map(Polynomial::total_degree)
            .max()
    }

    pub fn scale(&self, factor: &Scalar) -> VectorField {
        VectorField::new(std::array::from_fn(|mu| self.components[mu].scale(factor)))
    }

    pub fn add(&self, rhs: &VectorField) -> VectorField {
        VectorField::new(std::array::from_fn(|mu| {
            &self.components[mu] + &rhs.components[mu]
        }))
    }

    pub fn sub(&self, rhs: &VectorField) -> VectorField {
        VectorField::new(std::array::from_fn(|mu| {
            &self.components[mu] - &rhs.components[mu]
        }))
    }

    pub fn neg(&self) -> VectorField {
        VectorField::new(std::array::from_fn(|mu| -&self.components[mu]))
    }

    /// Evaluates all four components at a point, yielding an upper vector.
    pub fn eval(&self, point: &[Scalar; DIM]) -> FourVector {
        FourVector::upper(std::array::from_fn(|mu| self.components[mu].eval(point)))
    }

    /// The lowered component δ_μ = η_{μν} δ^ν.
    pub fn lowered_component(&self, mu: usize) -> Polynomial {
        if METRIC_SIGNS[mu] < 0 {
            -&self.components[mu]
        } else {
            self.components[mu].clone()
        }
    }

    pub fn to_float_mode(&self) -> VectorField {
        VectorField::new(std::array::from_fn(|mu| {
            self.components[mu].to_float_mode()
        }))
    }
}

/// Label is metadata; equality is structural on the components.
impl PartialEq for VectorField {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}, {}, {}]",
            self.components[0], self.components[1], self.components[2], self.components[3]
        )
    }
}

/// The symmetric variation of the metric tensor produced by a deformation.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricTensorField {
    entries: [[Polynomial; DIM]; DIM],
}

impl SymmetricTensorField {
    /// Builds from the 10 independent entries; `f(mu, nu)` is queried with
    /// mu <= nu and mirrored.
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Polynomial) -> Self {
        let mut entries: [[Polynomial; DIM]; DIM] =
            std::array::from_fn(|_| std::array::from_fn(|_| Polynomial::zero()));
        for mu in 0..DIM {
            for nu in mu..DIM {
                let p = f(mu, nu);
                entries[nu][mu] = p.clone();
                entries[mu][nu] = p;
            }
        }
        SymmetricTensorField { entries }
    }

    pub fn component(&self, mu: usize, nu: usize) -> &Polynomial {
        &self.entries[mu][nu]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Polynomial::is_zero)
    }
}

impl fmt::Display for SymmetricTensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for mu in 0..DIM {
            for nu in mu..DIM {
                if self.entries[mu][nu].is_zero() {
                    continue;
                }
                if !first {
                    f.write_str(", ")?;
                }
                write!(f, "[{mu}][{nu}] = {}", self.entries[mu][nu])?;
                first = false;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// The symmetrized derivative of the field is not proportional to the metric.
#[derive(Debug, Error, PartialEq)]
#[error("field is not conformal; symmetrized-derivative residual: {residual}")]
pub struct NotConformal {
    pub residual: Box<SymmetricTensorField>,
}

/// The field lies outside the span of the 15 conformal generators.
#[derive(Debug, Error, PartialEq)]
#[error("field is outside the conformal basis span; residual field: {residual}")]
pub struct NotInSpan {
    pub residual: VectorField,
}

/// Lie commutator of two deformations:
/// δ_{(a,b)}^μ = δ_b^ν ∂_ν δ_a^μ − δ_a^ν ∂_ν δ_b^μ.
pub fn lie_commutator(a: &VectorField, b: &VectorField) -> VectorField {
    VectorField::new(std::array::from_fn(|mu| {
        let mut out = Polynomial::zero();
        for nu in 0..DIM {
            out = &out + &(b.component(nu) * &a.component(mu).partial(nu));
            out = &out - &(a.component(nu) * &b.component(mu).partial(nu));
        }
        out
    }))
}

/// Metric variation per unit deformation: −(∂_μ δ_ν + ∂_ν δ_μ).
pub fn metric_variation(a: &VectorField) -> SymmetricTensorField {
    let lowered: [Polynomial; DIM] = std::array::from_fn(|mu| a.lowered_component(mu));
    SymmetricTensorField::from_fn(|mu, nu| -&(&lowered[nu].partial(mu) + &lowered[mu].partial(nu)))
}

/// The point-dependent rescaling λ such that the metric variation equals
/// 2λη, when it exists.
pub fn conformal_factor(a: &VectorField) -> Result<Polynomial, NotConformal> {
    let variation = metric_variation(a);
    // η_00 = +1, so the 00 entry is 2λ directly.
    let lambda = variation.component(0, 0).scale(&Scalar::ratio(1, 2));
    let residual = SymmetricTensorField::from_fn(|mu, nu| {
        let expected = lambda.scale(&Scalar::from_int(2 * eta(mu, nu)));
        variation.component(mu, nu) - &expected
    });
    if residual.is_zero() {
        Ok(lambda)
    } else {
        Err(NotConformal {
            residual: Box::new(residual),
        })
    }
}

/// x_α as a polynomial in the stored upper coordinates.
fn coordinate_lowered(alpha: usize) -> Polynomial {
    Polynomial::var(alpha).scale(&Scalar::from_int(METRIC_SIGNS[alpha]))
}

/// x_ρ x^ρ.
fn coordinate_interval() -> Polynomial {
    let mut out = Polynomial::zero();
    for rho in 0..DIM {
        out = &out
            + &Polynomial::var(rho)
                .pow(2)
                .scale(&Scalar::from_int(METRIC_SIGNS[rho]));
    }
    out
}

/// The standard deformation of one conformal generator, in canonical
/// upper-component form (lowered coordinates expanded via the signature).
pub fn standard_generator(kind: GeneratorKind) -> VectorField {
    let components: [Polynomial; DIM] = if let Some(alpha) = kind.translation_axis() {
        // δ^μ = η_ν^μ
        std::array::from_fn(|mu| Polynomial::int(kronecker(mu, alpha)))
    } else if let Some((alpha, beta)) = kind.rotation_axes() {
        // δ^μ = η_α^μ x_β − η_β^μ x_α
        std::array::from_fn(|mu| {
            if mu == alpha {
                coordinate_lowered(beta)
            } else if mu == beta {
                -&coordinate_lowered(alpha)
            } else {
                Polynomial::zero()
            }
        })
    } else if let Some(alpha) = kind.acceleration_axis() {
        // δ^μ = 2 x_α x^μ − η_α^μ x_ρ x^ρ
        let x_alpha = coordinate_lowered(alpha);
        let interval = coordinate_interval();
        std::array::from_fn(|mu| {
            let mut out = (&x_alpha * &Polynomial::var(mu)).scale(&Scalar::from_int(2));
            if mu == alpha {
                out = &out - &interval;
            }
            out
        })
    } else {
        // dilatation: δ^μ = x^μ
        std::array::from_fn(Polynomial::var)
    };
    VectorField::new(components).with_label(kind.name())
}

/// Exact coefficients c_k with v = Σ c_k · standard_generator(k), found by
/// Gaussian elimination over the rationals on the monomial-coefficient
/// system. No floating-point linear algebra.
pub fn decompose_in_basis(v: &VectorField) -> Result<[Scalar; BASIS_DIM], NotInSpan> {
    let basis: Vec<VectorField> = GeneratorKind::ALL
        .iter()
        .map(|k| standard_generator(*k))
        .collect();

    // Coordinates of the linear system: (component, monomial) pairs seen in
    // either the basis or the target.
    let mut keys: BTreeSet<(usize, MultiIndex)> = BTreeSet::new();
    for field in basis.iter().chain(std::iter::once(v)) {
        for mu in 0..DIM {
            for (exps, _) in field.component(mu).terms() {
                keys.insert((mu, *exps));
            }
        }
    }

    // Augmented matrix [A | b], one row per coordinate.
    let mut rows: Vec<Vec<Scalar>> = keys
        .iter()
        .map(|(mu, exps)| {
            let mut row: Vec<Scalar> = basis
                .iter()
                .map(|b| b.component(*mu).coefficient(exps))
                .collect();
            row.push(v.component(*mu).coefficient(exps));
            row
        })
        .collect();

    // Forward elimination with exact pivots.
    let cols = BASIS_DIM;
    let mut pivot_rows: Vec<usize> = Vec::with_capacity(cols);
    let mut next_row = 0;
    for col in 0..cols {
        let Some(pivot) = (next_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, pivot);
        let pivot_value = rows[next_row][col].clone();
        for r in 0..rows.len() {
            if r == next_row || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone() / pivot_value.clone();
            for c in col..=cols {
                let delta = &factor * &rows[next_row][c];
                rows[r][c] = &rows[r][c] - &delta;
            }
        }
        pivot_rows.push(next_row);
        next_row += 1;
    }

    let mut coefficients: [Scalar; BASIS_DIM] = std::array::from_fn(|_| Scalar::zero());
    for (col, &row) in pivot_rows.iter().enumerate() {
        coefficients[col] = rows[row][cols].clone() / rows[row][col].clone();
    }

    // The elimination above solved the pivot subsystem; any inconsistency
    // (target outside the span) shows up in the reconstruction residual.
    let mut reconstructed = VectorField::zero();
    for (k, c) in coefficients.iter().enumerate() {
        if !c.is_zero() {
            reconstructed = reconstructed.add(&basis[k].scale(c));
        }
    }
    let residual = v.sub(&reconstructed);
    if residual.is_zero() {
        Ok(coefficients)
    } else {
        Err(NotInSpan { residual })
    }
}
