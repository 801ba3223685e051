//! Sparse polynomials in the four coordinates x^0..x^3.
//!
//! Terms live in a sorted map keyed by the exponent multi-index, so the
//! representation is canonical and equality is structural. Zero coefficients
//! are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::minkowski::DIM;
use crate::scalar::Scalar;

/// Exponents of x^0..x^3 in one monomial.
pub type MultiIndex = [u32; DIM];

/// A polynomial in x^0..x^3 with scalar coefficients.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Polynomial {
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Polynomial::zero();
        p.add_term([0; DIM], c);
        p
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Scalar::from_int(c))
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    /// The coordinate x^axis.
    pub fn var(axis: usize) -> Self {
        assert!(axis < DIM);
        let mut exps = [0; DIM];
        exps[axis] = 1;
        Self::monomial(exps, Scalar::one())
    }

    pub fn monomial(exps: MultiIndex, coef: Scalar) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(exps, coef);
        p
    }

    /// Adds `coef * x^exps`, merging and dropping zeros to keep the form
    /// canonical.
    pub fn add_term(&mut self, exps: MultiIndex, coef: Scalar) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &MultiIndex) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, factor: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero();
        for (exps, coef) in &self.terms {
            out.add_term(*exps, coef * factor);
        }
        out
    }

    /// ∂/∂x^axis, exact.
    pub fn partial(&self, axis: usize) -> Polynomial {
        assert!(axis < DIM);
        let mut out = Polynomial::zero();
        for (exps, coef) in &self.terms {
            if exps[axis] == 0 {
                continue;
            }
            let mut de = *exps;
            de[axis] -= 1;
            out.add_term(de, coef * &Scalar::from_int(exps[axis] as i64));
        }
        out
    }

    pub fn eval(&self, point: &[Scalar; DIM]) -> Scalar {
        let mut acc = Scalar::zero();
        for (exps, coef) in &self.terms {
            let mut term = coef.clone();
            for axis in 0..DIM {
                if exps[axis] > 0 {
                    term = term * point[axis].pow(exps[axis]);
                }
            }
            acc = acc + term;
        }
        acc
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut out = Polynomial::one();
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    pub fn to_float_mode(&self) -> Polynomial {
        let mut out = Polynomial::zero();
        for (exps, coef) in &self.terms {
            out.add_term(*exps, coef.to_float_mode());
        }
        out
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (exps, coef) in &rhs.terms {
            out.add_term(*exps, coef.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (exps, coef) in &rhs.terms {
            out.add_term(*exps, -coef);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    // exponents add under monomial multiplication
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ae, ac) in &self.terms {
            for (be, bc) in &rhs.terms {
                let exps = std::array::from_fn(|i| ae[i] + be[i]);
                out.add_term(exps, ac * bc);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let mut out = Polynomial::zero();
        for (exps, coef) in &self.terms {
            out.add_term(*exps, -coef);
        }
        out
    }
}

/// Renders in the expression grammar: `3/2*x0^2*x1 - x2 + 5`.
/// Rendering then parsing reproduces the identical polynomial.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (exps, coef)) in self.terms.iter().enumerate() {
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
            let is_const = exps.iter().all(|&e| e == 0);
            let mut wrote_factor = false;
            if is_const || mag != Scalar::one() {
                write!(f, "{mag}")?;
                wrote_factor = true;
            }
            for axis in 0..DIM {
                match exps[axis] {
                    0 => {}
                    e => {
                        if wrote_factor {
                            f.write_str("*")?;
                        }
                        write!(f, "x{axis}")?;
                        if e > 1 {
                            write!(f, "^{e}")?;
                        }
                        wrote_factor = true;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Wire form of one term: `{"exps": [e0,e1,e2,e3], "coef": "p/q"}`.
#[derive(Serialize, Deserialize)]
struct TermRepr {
    exps: MultiIndex,
    coef: Scalar,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(exps, coef)| TermRepr {
                exps: *exps,
                coef: coef.clone(),
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(deserializer)?;
        let mut p = Polynomial::zero();
        for t in terms {
            p.add_term(t.exps, t.coef);
        }
        Ok(p)
    }
}
