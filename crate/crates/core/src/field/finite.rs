use std::fmt;
use std::sync::Arc;

use serde_json::Value;

use super::{is_prime, poly, Field, FieldError};

/// Orders up to this size get precomputed operation tables.
const TABLE_LIMIT: u32 = 256;

/// `F_p` or `F_p[x]/(m(x))`.
///
/// An element is its coefficient vector `(c_0, .., c_{r-1})` packed into a
/// single integer `c_0 + c_1 p + .. + c_{r-1} p^{r-1}`; the packed value is
/// also the element's position in the enumeration order. Small fields cache
/// the operation tables computed from the coefficient arithmetic.
#[derive(Clone)]
pub struct FiniteField(Arc<Inner>);

struct Inner {
    p: u32,
    r: u32,
    q: u32,
    /// Monic modulus, low-to-high; empty for a plain prime field.
    modulus: Vec<u32>,
    bits: u32,
    tables: Option<Tables>,
    prime_subfield: Option<FiniteField>,
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl FiniteField {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p >= 1 << 31 {
            return Err(FieldError::BadArity(format!("prime {p} is too large")));
        }
        Ok(Self::build(p as u32, 1, Vec::new(), None))
    }

    /// `F_p[x]/(modulus)` with `modulus` given low-to-high, monic.
    pub fn extension(p: u64, modulus: &[u32]) -> Result<Self, FieldError> {
        let base = Self::prime(p)?;
        let p = p as u32;
        if modulus.len() < 2 {
            return Err(FieldError::BadArity("modulus must have degree >= 1".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadArity(format!(
                "modulus coefficients must lie in 0..{p}"
            )));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(FieldError::BadArity("modulus must be monic".into()));
        }
        let r = (modulus.len() - 1) as u32;
        if (p as u64).checked_pow(r).is_none_or(|q| q >= 1 << 31) {
            return Err(FieldError::BadArity(format!("{p}^{r} is too large")));
        }
        if !is_irreducible(&base, modulus) {
            return Err(FieldError::ReducibleModulus(p));
        }
        Ok(Self::build(p, r, modulus.to_vec(), Some(base)))
    }

    /// The field of order `q`, using the first irreducible modulus in
    /// enumeration order when `q` is not prime.
    pub fn with_order(q: u64) -> Result<Self, FieldError> {
        let (p, r) = prime_power(q).ok_or(FieldError::NotPrime(q))?;
        if r == 1 {
            return Self::prime(p);
        }
        let base = Self::prime(p)?;
        let count = (p as u32).pow(r);
        for idx in 0..count {
            let mut m = base.coeffs_of_index(idx, r as usize);
            m.push(1);
            if m[0] != 0 && is_irreducible(&base, &m) {
                return Self::extension(p, &m);
            }
        }
        unreachable!("every finite field has an irreducible modulus")
    }

    fn build(p: u32, r: u32, modulus: Vec<u32>, prime_subfield: Option<FiniteField>) -> Self {
        let q = p.pow(r);
        let bits = 32 - (q - 1).leading_zeros();
        let mut field = FiniteField(Arc::new(Inner {
            p,
            r,
            q,
            modulus,
            bits: bits.max(1),
            tables: None,
            prime_subfield,
        }));
        if q <= TABLE_LIMIT {
            let n = q as usize;
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            let mut neg = vec![0; n];
            let mut inv = vec![0; n];
            for a in 0..q {
                neg[a as usize] = field.neg_slow(a);
                for b in 0..q {
                    add[(a * q + b) as usize] = field.add_slow(a, b);
                    mul[(a * q + b) as usize] = field.mul_slow(a, b);
                }
            }
            for a in 1..q {
                let b = (1..q).find(|&b| mul[(a * q + b) as usize] == 1).unwrap();
                inv[a as usize] = b;
            }
            let inner = Arc::get_mut(&mut field.0).unwrap();
            inner.tables = Some(Tables { add, mul, neg, inv });
        }
        field
    }

    /// Parses `"p"` or `"p^r/c0,...,cr"`.
    pub fn parse(spec: &str) -> Result<Self, FieldError> {
        let bad = || FieldError::BadSpec(spec.to_string());
        let s = spec.trim();
        match s.split_once('/') {
            None => {
                if s.contains('^') {
                    return Err(bad());
                }
                let p: u64 = s.parse().map_err(|_| bad())?;
                Self::prime(p)
            }
            Some((head, tail)) => {
                let (p, r) = head.split_once('^').ok_or_else(bad)?;
                let p: u64 = p.trim().parse().map_err(|_| bad())?;
                let r: usize = r.trim().parse().map_err(|_| bad())?;
                let coeffs = tail
                    .split(',')
                    .map(|c| c.trim().parse::<u32>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad())?;
                if coeffs.len() != r + 1 {
                    return Err(FieldError::BadArity(format!(
                        "degree {r} modulus needs {} coefficients",
                        r + 1
                    )));
                }
                Self::extension(p, &coeffs)
            }
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    /// Extension degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.0.r
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.modulus.is_empty()
    }

    /// `F_p` inside `self` (the field itself for a prime field).
    pub fn prime_subfield(&self) -> &FiniteField {
        self.0.prime_subfield.as_ref().unwrap_or(self)
    }

    /// All elements in enumeration order: `0, 1, 2, .., x, x + 1, ..`.
    pub fn elements(&self) -> impl Iterator<Item = u32> + Clone {
        0..self.0.q
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = u32> + Clone {
        1..self.0.q
    }

    /// Coefficients `c_0..c_{r-1}` of a packed element.
    pub fn coeffs(&self, mut a: u32) -> Vec<u32> {
        let p = self.0.p;
        (0..self.0.r)
            .map(|_| {
                let c = a % p;
                a /= p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<u32, FieldError> {
        if coeffs.len() > self.0.r as usize {
            return Err(FieldError::InvalidElement(format!(
                "{} coefficients for a degree {} field",
                coeffs.len(),
                self.0.r
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.0.p) {
            return Err(FieldError::InvalidElement(format!(
                "coefficient {c} not reduced mod {}",
                self.0.p
            )));
        }
        Ok(self.pack(coeffs))
    }

    fn pack(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| acc * self.0.p + c)
    }

    /// Power basis `1, x, .., x^{r-1}` over the prime field.
    pub fn basis(&self) -> Vec<u32> {
        (0..self.0.r).map(|i| self.0.p.pow(i)).collect()
    }

    pub fn in_prime_subfield(&self, a: u32) -> bool {
        a < self.0.p
    }

    /// `Tr(a) = a + a^p + .. + a^{p^{r-1}}`, returned as an element of the
    /// prime field (packed values below `p` coincide in both fields).
    pub fn trace(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut conj = a;
        for _ in 0..self.0.r {
            acc = self.add(&acc, &conj);
            conj = self.pow(&conj, self.0.p as u64);
        }
        debug_assert!(acc < self.0.p);
        acc
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if self.0.r == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (x, y) = (self.coeffs(a), self.coeffs(b));
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
        self.pack(&s)
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let p = self.0.p;
        let x: Vec<u32> = self.coeffs(a).iter().map(|&c| (p - c) % p).collect();
        self.pack(&x)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p as u64;
        if self.0.r == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let r = self.0.r as usize;
        let (x, y) = (self.coeffs(a), self.coeffs(b));
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &u) in x.iter().enumerate() {
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u as u64 * v as u64) % p;
            }
        }
        // x^r = -(m_0 + .. + m_{r-1} x^{r-1})
        let m = &self.0.modulus;
        for deg in (r..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (k, &mk) in m[..r].iter().enumerate() {
                let idx = deg - r + k;
                prod[idx] = (prod[idx] + (p - c) * mk as u64) % p;
            }
        }
        let digits: Vec<u32> = prod[..r].iter().map(|&c| c as u32).collect();
        self.pack(&digits)
    }
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut r = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        r += 1;
    }
    (rest == 1).then_some((p, r))
}

/// Trial division of a monic polynomial by every monic polynomial of degree
/// `1..=deg/2` over the prime field.
fn is_irreducible(base: &FiniteField, m: &[u32]) -> bool {
    let r = m.len() - 1;
    if r <= 1 {
        return true;
    }
    // degree-one factors are exactly roots
    if base.elements().any(|c| poly::eval(base, m, &c) == 0) {
        return false;
    }
    let p = base.characteristic();
    for k in 2..=r / 2 {
        for idx in 0..p.pow(k as u32) {
            let mut divisor = base.coeffs_of_index(idx, k);
            divisor.push(1);
            let (_, rem) = poly::div_rem(base, m, &divisor);
            if rem.is_empty() {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    fn coeffs_of_index(&self, mut idx: u32, len: usize) -> Vec<u32> {
        let p = self.0.p;
        (0..len)
            .map(|_| {
                let c = idx % p;
                idx /= p;
                c
            })
            .collect()
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteField({})", self.spec())
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.r == other.0.r && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FiniteField {}

impl Field for FiniteField {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }

    #[inline]
    fn one(&self) -> u32 {
        1
    }

    fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.0.p as i64) as u32
    }

    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        if self.0.r == 1 {
            let s = a + b;
            return if s >= self.0.p { s - self.0.p } else { s };
        }
        match &self.0.tables {
            Some(t) => t.add[(a * self.0.q + b) as usize],
            None => self.add_slow(*a, *b),
        }
    }

    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        let nb = self.neg(b);
        self.add(a, &nb)
    }

    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if self.0.r == 1 {
            return if *a == 0 { 0 } else { self.0.p - a };
        }
        match &self.0.tables {
            Some(t) => t.neg[*a as usize],
            None => self.neg_slow(*a),
        }
    }

    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        match &self.0.tables {
            Some(t) => t.mul[(a * self.0.q + b) as usize],
            None => self.mul_slow(*a, *b),
        }
    }

    #[inline]
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        Some(match &self.0.tables {
            Some(t) => t.inv[*a as usize],
            None => self.pow(a, self.0.q as u64 - 2),
        })
    }

    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn cardinality(&self) -> Option<u64> {
        Some(self.0.q as u64)
    }

    fn spec(&self) -> String {
        if self.is_prime_field() {
            self.0.p.to_string()
        } else {
            let m: Vec<String> = self.0.modulus.iter().map(u32::to_string).collect();
            format!("{}^{}/{}", self.0.p, self.0.r, m.join(","))
        }
    }

    fn elem_to_json(&self, a: &u32) -> Value {
        Value::from(self.coeffs(*a))
    }

    fn elem_from_json(&self, v: &Value) -> Result<u32, FieldError> {
        match v {
            Value::Number(n) => {
                let idx = n
                    .as_u64()
                    .filter(|&i| i < self.0.q as u64)
                    .ok_or_else(|| FieldError::InvalidElement(format!("{v} is not an element index")))?;
                Ok(idx as u32)
            }
            Value::Array(items) => {
                let coeffs = items
                    .iter()
                    .map(|c| {
                        c.as_u64()
                            .and_then(|c| u32::try_from(c).ok())
                            .ok_or_else(|| FieldError::InvalidElement(format!("bad coefficient {c}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                self.from_coeffs(&coeffs)
            }
            _ => Err(FieldError::InvalidElement(format!("{v}"))),
        }
    }

    fn parse_literal(&self, s: &str) -> Result<u32, FieldError> {
        let s = s.trim();
        if s.starts_with('[') {
            let v: Value =
                serde_json::from_str(s).map_err(|e| FieldError::InvalidElement(e.to_string()))?;
            return self.elem_from_json(&v);
        }
        let (neg, digits) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let idx: u64 = digits
            .parse()
            .map_err(|_| FieldError::InvalidElement(format!("`{s}`")))?;
        if neg {
            if !self.is_prime_field() && self.0.r != 1 {
                return Err(FieldError::InvalidElement(format!(
                    "`{s}`: negative literals only in prime fields"
                )));
            }
            return Ok(self.from_int(-(idx as i64)));
        }
        if idx >= self.0.q as u64 {
            return Err(FieldError::InvalidElement(format!(
                "`{s}` is not below the field order {}",
                self.0.q
            )));
        }
        Ok(idx as u32)
    }

    fn format(&self, a: &u32) -> String {
        if self.0.r == 1 {
            return a.to_string();
        }
        let c = self.coeffs(*a);
        let mut terms = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let coef = if ci == 1 && i > 0 { String::new() } else { ci.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    fn write_key(&self, a: &u32, out: &mut Vec<u8>) {
        let width = self.0.bits.div_ceil(8) as usize;
        out.extend_from_slice(&a.to_le_bytes()[..width]);
    }

    #[inline]
    fn packed_index(&self, a: &u32) -> Option<(u64, u32)> {
        Some((*a as u64, self.0.bits))
    }
}
