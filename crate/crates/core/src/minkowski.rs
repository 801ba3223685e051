//! Four-vectors and Minkowski index gymnastics.
//!
//! The metric signature is fixed to (+, −, −, −) and the spacetime dimension
//! to 4. Units are ħ = c = 1 throughout the engine.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

/// Spacetime dimension; fixed.
pub const DIM: usize = 4;

/// Diagonal of the Minkowski metric, signature (+, −, −, −).
pub const METRIC_SIGNS: [i64; DIM] = [1, -1, -1, -1];

/// η_{μν} (equal to η^{μν} for this diagonal signature), as an integer.
pub fn eta(mu: usize, nu: usize) -> i64 {
    if mu == nu {
        METRIC_SIGNS[mu]
    } else {
        0
    }
}

/// Kronecker symbol η_ν^μ.
pub fn kronecker(mu: usize, nu: usize) -> i64 {
    (mu == nu) as i64
}

/// Whether a component index lives upstairs or downstairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexPosition {
    Upper,
    Lower,
}

/// Applied an index operation to a vector with the wrong tag.
#[derive(Debug, Error, PartialEq)]
#[error("expected a {expected:?}-index four-vector, got {found:?}")]
pub struct IndexError {
    pub expected: IndexPosition,
    pub found: IndexPosition,
}

/// A four-vector: four scalars plus an index-position tag.
#[derive(Clone, Debug, PartialEq)]
pub struct FourVector {
    components: [Scalar; DIM],
    position: IndexPosition,
}

impl FourVector {
    pub fn new(components: [Scalar; DIM], position: IndexPosition) -> Self {
        FourVector {
            components,
            position,
        }
    }

    pub fn upper(components: [Scalar; DIM]) -> Self {
        Self::new(components, IndexPosition::Upper)
    }

    pub fn lower(components: [Scalar; DIM]) -> Self {
        Self::new(components, IndexPosition::Lower)
    }

    pub fn upper_ints(c: [i64; DIM]) -> Self {
        Self::upper(c.map(Scalar::from_int))
    }

    pub fn lower_ints(c: [i64; DIM]) -> Self {
        Self::lower(c.map(Scalar::from_int))
    }

    pub fn zero(position: IndexPosition) -> Self {
        Self::new(std::array::from_fn(|_| Scalar::zero()), position)
    }

    pub fn position(&self) -> IndexPosition {
        self.position
    }

    pub fn components(&self) -> &[Scalar; DIM] {
        &self.components
    }

    pub fn into_components(self) -> [Scalar; DIM] {
        self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Scalar::is_zero)
    }

    /// Contract one index with the metric: component 0 kept, 1..3 negated,
    /// tag flipped. Lowering and raising are numerically identical for this
    /// signature, so this is its own inverse.
    fn flip(&self) -> FourVector {
        let components = std::array::from_fn(|mu| {
            if METRIC_SIGNS[mu] < 0 {
                -&self.components[mu]
            } else {
                self.components[mu].clone()
            }
        });
        let position = match self.position {
            IndexPosition::Upper => IndexPosition::Lower,
            IndexPosition::Lower => IndexPosition::Upper,
        };
        FourVector::new(components, position)
    }

    /// x_μ = η_{μν} x^ν. Errors unless the input is upper.
    pub fn lowered(&self) -> Result<FourVector, IndexError> {
        match self.position {
            IndexPosition::Upper => Ok(self.flip()),
            found => Err(IndexError {
                expected: IndexPosition::Upper,
                found,
            }),
        }
    }

    /// x^μ = η^{μν} x_ν. Errors unless the input is lower.
    pub fn raised(&self) -> Result<FourVector, IndexError> {
        match self.position {
            IndexPosition::Lower => Ok(self.flip()),
            found => Err(IndexError {
                expected: IndexPosition::Lower,
                found,
            }),
        }
    }

    pub fn scale(&self, factor: &Scalar) -> FourVector {
        FourVector::new(
            std::array::from_fn(|mu| &self.components[mu] * factor),
            self.position,
        )
    }

    pub fn to_float_mode(&self) -> FourVector {
        FourVector::new(
            std::array::from_fn(|mu| self.components[mu].to_float_mode()),
            self.position,
        )
    }
}

/// u^0v^0 − u^1v^1 − u^2v^2 − u^3v^3.
///
/// With both vectors upper (or both lower) this is the invariant u^μ v_μ.
/// Mixing tags is a programming error.
pub fn minkowski_dot(u: &FourVector, v: &FourVector) -> Scalar {
    assert_eq!(
        u.position, v.position,
        "minkowski_dot needs matching index positions"
    );
    let mut acc = Scalar::zero();
    for mu in 0..DIM {
        let term = &u.components[mu] * &v.components[mu];
        acc = if METRIC_SIGNS[mu] < 0 {
            acc - term
        } else {
            acc + term
        };
    }
    acc
}

impl Index<usize> for FourVector {
    type Output = Scalar;
    fn index(&self, mu: usize) -> &Scalar {
        &self.components[mu]
    }
}

impl Add for &FourVector {
    type Output = FourVector;
    fn add(self, rhs: &FourVector) -> FourVector {
        assert_eq!(self.position, rhs.position, "index positions must match");
        FourVector::new(
            std::array::from_fn(|mu| &self.components[mu] + &rhs.components[mu]),
            self.position,
        )
    }
}

impl Sub for &FourVector {
    type Output = FourVector;
    fn sub(self, rhs: &FourVector) -> FourVector {
        assert_eq!(self.position, rhs.position, "index positions must match");
        FourVector::new(
            std::array::from_fn(|mu| &self.components[mu] - &rhs.components[mu]),
            self.position,
        )
    }
}

impl Neg for &FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector::new(
            std::array::from_fn(|mu| -&self.components[mu]),
            self.position,
        )
    }
}

impl fmt::Display for FourVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.components[0], self.components[1], self.components[2], self.components[3]
        )
    }
}

impl Serialize for FourVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.components.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FourVector {
    /// Four-element arrays deserialize as upper-index vectors; callers that
    /// need a lower tag retag explicitly.
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let components = <[Scalar; DIM]>::deserialize(deserializer)?;
        Ok(FourVector::upper(components))
    }
}
