//! Exact fields behind a single arithmetic contract.
//!
//! Two concrete implementations exist: [`FiniteField`] covers prime fields
//! `F_p` and extensions `F_{p^r}` (elements are packed coefficient vectors),
//! and [`RationalFunctionField`] covers `F_q(z)` with reduced fractions.
//! Everything above this module is written against the [`Field`] trait; the
//! runtime-selected [`FieldDescriptor`] is used at the I/O boundary.

mod finite;
pub mod poly;
mod ratfun;

use std::fmt;
use std::hash::Hash;

use serde_json::Value;
use thiserror::Error;

pub use finite::FiniteField;
pub use ratfun::{RatFn, RationalFunctionField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("bad field arity: {0}")]
    BadArity(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("operation `{0}` is not supported over this field")]
    UnsupportedField(&'static str),
    #[error("field is infinite")]
    InfiniteField,
    #[error("cannot parse field spec `{0}`")]
    BadSpec(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
}

/// Arithmetic contract shared by every field in the crate.
///
/// A field value acts as the "owner" of its elements: elements are plain data
/// and all arithmetic is routed through the field so that no element has to
/// carry a copy of its modulus.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// Image of an integer under the canonical map `Z -> F`.
    #[allow(clippy::wrong_self_convention)]
    fn from_int(&self, v: i64) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Integer power; negative exponents need a nonzero base.
    fn pow_i(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(a).map(|ai| self.pow(&ai, e.unsigned_abs()))
        }
    }

    /// Number of elements, or `None` for infinite fields.
    fn cardinality(&self) -> Option<u64>;

    /// Field spec string (`"7"`, `"2^2/1,1,1"`, `"ratfun(2)"`).
    fn spec(&self) -> String;

    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem, FieldError>;

    /// Parses a short command-line literal.
    fn parse_literal(&self, s: &str) -> Result<Self::Elem, FieldError>;

    fn format(&self, a: &Self::Elem) -> String;

    /// Appends a canonical, injective byte encoding of `a`.
    fn write_key(&self, a: &Self::Elem, out: &mut Vec<u8>);

    /// Dense integer index of `a` and the bit width needed to hold any index,
    /// for fields small enough to pack.
    fn packed_index(&self, _a: &Self::Elem) -> Option<(u64, u32)> {
        None
    }

    fn sum<'a, I>(&self, it: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        it.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    fn product<'a, I>(&self, it: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        it.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }
}

/// Which family a descriptor belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Prime,
    Extension,
    RationalFunction,
}

/// Runtime-selected field.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldDescriptor {
    Finite(FiniteField),
    RationalFunction(RationalFunctionField),
}

impl FieldDescriptor {
    /// Builds and validates a descriptor.
    ///
    /// `modulus` must be given exactly for extensions and `base` exactly for
    /// rational function fields.
    pub fn make(
        kind: FieldKind,
        p: u64,
        r: u32,
        modulus: Option<&[u32]>,
        base: Option<FieldDescriptor>,
    ) -> Result<Self, FieldError> {
        match kind {
            FieldKind::Prime => {
                if modulus.is_some() || base.is_some() || r != 1 {
                    return Err(FieldError::BadArity(
                        "prime fields take no modulus, no base and r = 1".into(),
                    ));
                }
                Ok(Self::Finite(FiniteField::prime(p)?))
            }
            FieldKind::Extension => {
                let Some(m) = modulus else {
                    return Err(FieldError::BadArity("extension needs a modulus".into()));
                };
                if base.is_some() {
                    return Err(FieldError::BadArity("extension takes no base".into()));
                }
                if m.len() != r as usize + 1 {
                    return Err(FieldError::BadArity(format!(
                        "modulus of degree {r} needs {} coefficients, got {}",
                        r + 1,
                        m.len()
                    )));
                }
                Ok(Self::Finite(FiniteField::extension(p, m)?))
            }
            FieldKind::RationalFunction => {
                if modulus.is_some() {
                    return Err(FieldError::BadArity(
                        "rational function field takes no modulus".into(),
                    ));
                }
                match base {
                    Some(Self::Finite(b)) => Ok(Self::RationalFunction(RationalFunctionField::new(b))),
                    Some(Self::RationalFunction(_)) => Err(FieldError::BadArity(
                        "rational function base must be finite".into(),
                    )),
                    None => Err(FieldError::BadArity("rational function field needs a base".into())),
                }
            }
        }
    }

    /// Parses `"p"`, `"p^r/c0,...,cr"` or `"ratfun(<finite spec>)"`.
    pub fn parse(spec: &str) -> Result<Self, FieldError> {
        let s = spec.trim();
        if let Some(inner) = s.strip_prefix("ratfun(").and_then(|t| t.strip_suffix(')')) {
            let base = FiniteField::parse(inner)?;
            return Ok(Self::RationalFunction(RationalFunctionField::new(base)));
        }
        Ok(Self::Finite(FiniteField::parse(s)?))
    }

    pub fn kind(&self) -> FieldKind {
        match self {
            Self::Finite(f) if f.degree() == 1 && f.modulus().len() <= 1 => FieldKind::Prime,
            Self::Finite(_) => FieldKind::Extension,
            Self::RationalFunction(_) => FieldKind::RationalFunction,
        }
    }

    pub fn spec(&self) -> String {
        match self {
            Self::Finite(f) => f.spec(),
            Self::RationalFunction(f) => f.spec(),
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteField> {
        match self {
            Self::Finite(f) => Some(f),
            Self::RationalFunction(_) => None,
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

/// An element bundled with its owning field, with checked arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldElement<F: Field> {
    field: F,
    value: F::Elem,
}

impl<F: Field> FieldElement<F> {
    pub fn new(field: F, value: F::Elem) -> Self {
        Self { field, value }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn value(&self) -> &F::Elem {
        &self.value
    }

    pub fn into_value(self) -> F::Elem {
        self.value
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    fn wrap(&self, value: F::Elem) -> Self {
        Self { field: self.field.clone(), value }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(&self.value, &other.value)))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(&self.value, &other.value)))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(&self.value, &other.value)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        self.field
            .div(&self.value, &other.value)
            .map(|v| self.wrap(v))
            .ok_or(FieldError::DivisionByZero)
    }

    pub fn neg(&self) -> Self {
        self.wrap(self.field.neg(&self.value))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        self.field
            .inv(&self.value)
            .map(|v| self.wrap(v))
            .ok_or(FieldError::DivisionByZero)
    }

    pub fn pow(&self, e: i64) -> Result<Self, FieldError> {
        self.field
            .pow_i(&self.value, e)
            .map(|v| self.wrap(v))
            .ok_or(FieldError::DivisionByZero)
    }
}

impl<F: Field> fmt::Display for FieldElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(&self.value))
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}
