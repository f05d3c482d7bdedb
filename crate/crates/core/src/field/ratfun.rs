use serde_json::{json, Value};

use super::{poly, FiniteField, Field, FieldError};

/// A reduced fraction `num / den` over a finite field.
///
/// Canonical form: `gcd(num, den) = 1`, `den` monic, zero is `0 / 1`.
/// Coefficients are stored low-to-high without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Vec<u32>,
    den: Vec<u32>,
}

impl RatFn {
    pub fn numerator(&self) -> &[u32] {
        &self.num
    }

    pub fn denominator(&self) -> &[u32] {
        &self.den
    }
}

/// `F_q(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunctionField {
    base: FiniteField,
}

impl RationalFunctionField {
    pub fn new(base: FiniteField) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &FiniteField {
        &self.base
    }

    /// The transcendental `z`.
    pub fn variable(&self) -> RatFn {
        RatFn { num: vec![0, 1], den: vec![1] }
    }

    pub fn constant(&self, c: u32) -> RatFn {
        self.fraction(&[c], &[1]).expect("unit denominator")
    }

    /// `num / den` in canonical form; `None` when `den` is zero.
    pub fn fraction(&self, num: &[u32], den: &[u32]) -> Option<RatFn> {
        let b = &self.base;
        let num = poly::trim(b, num.to_vec());
        let den = poly::trim(b, den.to_vec());
        if den.is_empty() {
            return None;
        }
        if num.is_empty() {
            return Some(RatFn { num, den: vec![1] });
        }
        let g = poly::gcd(b, &num, &den);
        let (num, _) = poly::div_rem(b, &num, &g);
        let (den, _) = poly::div_rem(b, &den, &g);
        let lc_inv = b.inv(den.last().unwrap()).unwrap();
        Some(RatFn {
            num: poly::scale(b, &num, &lc_inv),
            den: poly::scale(b, &den, &lc_inv),
        })
    }

    fn poly_to_json(&self, a: &[u32]) -> Value {
        Value::Array(a.iter().map(|c| self.base.elem_to_json(c)).collect())
    }

    fn poly_from_json(&self, v: &Value) -> Result<Vec<u32>, FieldError> {
        let items = v
            .as_array()
            .ok_or_else(|| FieldError::InvalidElement(format!("expected coefficient list, got {v}")))?;
        items.iter().map(|c| self.base.elem_from_json(c)).collect()
    }

    fn format_poly(&self, a: &[u32]) -> String {
        if a.is_empty() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in a.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let cs = self.base.format(c);
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            let coef = if *c == 1 && i > 0 { String::new() } else { cs };
            let sep = if coef.is_empty() { "" } else { "*" };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}{sep}z"),
                _ => format!("{coef}{sep}z^{i}"),
            });
        }
        terms.join("+")
    }

    /// Parses `c`, `z`, `c*z^k` terms joined by `+`.
    fn parse_poly(&self, s: &str) -> Result<Vec<u32>, FieldError> {
        let bad = || FieldError::InvalidElement(format!("cannot parse polynomial `{s}`"));
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s);
        let mut acc: Vec<u32> = Vec::new();
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(bad());
            }
            let (coef, mono) = match term.split_once('*') {
                Some((c, m)) => (self.base.parse_literal(c)?, m.trim()),
                None if term.contains('z') => (1, term),
                None => (self.base.parse_literal(term)?, ""),
            };
            let power = if mono.is_empty() {
                0
            } else if mono == "z" {
                1
            } else {
                mono.strip_prefix("z^")
                    .and_then(|e| e.parse::<usize>().ok())
                    .ok_or_else(bad)?
            };
            let mut mono_poly = vec![0; power + 1];
            mono_poly[power] = coef;
            acc = poly::add(&self.base, &acc, &mono_poly);
        }
        Ok(acc)
    }
}

impl Field for RationalFunctionField {
    type Elem = RatFn;

    fn zero(&self) -> RatFn {
        RatFn { num: Vec::new(), den: vec![1] }
    }

    fn one(&self) -> RatFn {
        RatFn { num: vec![1], den: vec![1] }
    }

    fn from_int(&self, v: i64) -> RatFn {
        self.constant(self.base.from_int(v))
    }

    fn add(&self, a: &RatFn, b: &RatFn) -> RatFn {
        let b_ = &self.base;
        if a.den == b.den {
            return self.fraction(&poly::add(b_, &a.num, &b.num), &a.den).unwrap();
        }
        let num = poly::add(b_, &poly::mul(b_, &a.num, &b.den), &poly::mul(b_, &b.num, &a.den));
        self.fraction(&num, &poly::mul(b_, &a.den, &b.den)).unwrap()
    }

    fn sub(&self, a: &RatFn, b: &RatFn) -> RatFn {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &RatFn) -> RatFn {
        let minus_one = self.base.neg(&1);
        RatFn { num: poly::scale(&self.base, &a.num, &minus_one), den: a.den.clone() }
    }

    fn mul(&self, a: &RatFn, b: &RatFn) -> RatFn {
        let b_ = &self.base;
        self.fraction(&poly::mul(b_, &a.num, &b.num), &poly::mul(b_, &a.den, &b.den))
            .unwrap()
    }

    fn inv(&self, a: &RatFn) -> Option<RatFn> {
        if a.num.is_empty() {
            return None;
        }
        self.fraction(&a.den, &a.num)
    }

    fn is_zero(&self, a: &RatFn) -> bool {
        a.num.is_empty()
    }

    fn cardinality(&self) -> Option<u64> {
        None
    }

    fn spec(&self) -> String {
        format!("ratfun({})", self.base.spec())
    }

    fn elem_to_json(&self, a: &RatFn) -> Value {
        json!({ "num": self.poly_to_json(&a.num), "den": self.poly_to_json(&a.den) })
    }

    fn elem_from_json(&self, v: &Value) -> Result<RatFn, FieldError> {
        let obj = v
            .as_object()
            .ok_or_else(|| FieldError::InvalidElement(format!("expected {{num, den}}, got {v}")))?;
        let num = self.poly_from_json(obj.get("num").unwrap_or(&Value::Null))?;
        let den = match obj.get("den") {
            Some(d) => self.poly_from_json(d)?,
            None => vec![1],
        };
        self.fraction(&num, &den).ok_or(FieldError::DivisionByZero)
    }

    fn parse_literal(&self, s: &str) -> Result<RatFn, FieldError> {
        let s = s.trim();
        if s.starts_with('{') {
            let v: Value =
                serde_json::from_str(s).map_err(|e| FieldError::InvalidElement(e.to_string()))?;
            return self.elem_from_json(&v);
        }
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (self.parse_poly(n)?, self.parse_poly(d)?),
            None => (self.parse_poly(s)?, vec![1]),
        };
        self.fraction(&num, &den).ok_or(FieldError::DivisionByZero)
    }

    fn format(&self, a: &RatFn) -> String {
        if a.den == [1] {
            return self.format_poly(&a.num);
        }
        format!("({})/({})", self.format_poly(&a.num), self.format_poly(&a.den))
    }

    fn write_key(&self, a: &RatFn, out: &mut Vec<u8>) {
        for part in [&a.num, &a.den] {
            out.extend_from_slice(&(part.len() as u32).to_le_bytes());
            for c in part {
                self.base.write_key(c, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2z() -> RationalFunctionField {
        RationalFunctionField::new(FiniteField::prime(2).unwrap())
    }

    #[test]
    fn fractions_with_common_denominator_collapse() {
        let f = f2z();
        let a = f.fraction(&[0, 1], &[1, 1]).unwrap(); // z/(z+1)
        let b = f.fraction(&[1], &[1, 1]).unwrap(); // 1/(z+1)
        assert_eq!(f.add(&a, &b), f.one());
    }

    #[test]
    fn canonical_form_is_unique() {
        let f = RationalFunctionField::new(FiniteField::prime(5).unwrap());
        // (2z+2)/(2z^2+4z+2) == 1/(z+1)
        let a = f.fraction(&[2, 2], &[2, 4, 2]).unwrap();
        let b = f.fraction(&[3], &[3, 3]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.denominator(), &[1, 1]);
        assert_eq!(f.fraction(&[], &[4, 2]).unwrap(), f.zero());
        assert!(f.fraction(&[1], &[]).is_none());
    }

    #[test]
    fn literals() {
        let f = f2z();
        assert_eq!(f.parse_literal("z").unwrap(), f.variable());
        let x = f.parse_literal("(z+1)/(z^2)").unwrap();
        assert_eq!(x.numerator(), &[1, 1]);
        assert_eq!(x.denominator(), &[0, 0, 1]);
        assert_eq!(f.format(&x), "(z+1)/(z^2)");
        let back = f.elem_from_json(&f.elem_to_json(&x)).unwrap();
        assert_eq!(back, x);
        assert_eq!(
            f.elem_from_json(&serde_json::json!({"num": [0, 1], "den": [1]})).unwrap(),
            f.variable()
        );
        assert!(f.parse_literal("z/0").is_err());
    }

    #[test]
    fn inverse_of_variable() {
        let f = f2z();
        let z = f.variable();
        let zi = f.inv(&z).unwrap();
        assert_eq!(f.mul(&z, &zi), f.one());
        assert!(f.inv(&f.zero()).is_none());
    }
}
