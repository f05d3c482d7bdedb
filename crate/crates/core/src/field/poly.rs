//! Dense univariate polynomials stored low-to-high as element slices.
//!
//! A polynomial is canonical when it has no trailing zeros; the zero
//! polynomial is the empty vector.

use super::Field;

pub fn trim<F: Field>(f: &F, mut a: Vec<F::Elem>) -> Vec<F::Elem> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

/// Degree, `None` for the zero polynomial.
pub fn degree<E>(a: &[E]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn eval<F: Field>(f: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    a.iter()
        .rev()
        .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let zero = f.zero();
    let out = (0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, out)
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let zero = f.zero();
    let out = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, out)
}

pub fn scale<F: Field>(f: &F, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
    trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

/// Euclidean division; panics on a zero divisor.
pub fn div_rem<F: Field>(
    f: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let b = trim(f, b.to_vec());
    let db = degree(&b).expect("polynomial division by zero");
    let lead_inv = f.inv(&b[db]).expect("trimmed leading coefficient is nonzero");
    let mut rem = trim(f, a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![f.zero(); rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = f.mul(&rem[dr], &lead_inv);
        let shift = dr - db;
        for (i, bi) in b.iter().enumerate() {
            rem[shift + i] = f.sub(&rem[shift + i], &f.mul(&c, bi));
        }
        quot[shift] = c;
        rem = trim(f, rem);
    }
    (trim(f, quot), rem)
}

pub fn monic<F: Field>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = f.inv(lc).expect("leading coefficient is nonzero");
            scale(f, a, &inv)
        }
    }
}

/// Monic greatest common divisor (zero when both inputs are zero).
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = trim(f, a.to_vec());
    let mut y = trim(f, b.to_vec());
    while !y.is_empty() {
        let (_, r) = div_rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;

    #[test]
    fn division_identity() {
        let f = FiniteField::prime(7).unwrap();
        let a = vec![3, 0, 5, 1, 2];
        let b = vec![1, 4, 3];
        let (q, r) = div_rem(&f, &a, &b);
        assert!(r.len() < b.len());
        assert_eq!(add(&f, &mul(&f, &q, &b), &r), a);
    }

    #[test]
    fn gcd_of_products() {
        let f = FiniteField::prime(5).unwrap();
        let common = vec![2, 1]; // t + 2
        let a = mul(&f, &common, &[1, 1, 1]);
        let b = mul(&f, &common, &[3, 1]);
        assert_eq!(gcd(&f, &a, &b), common);
        assert_eq!(gcd(&f, &[], &[]), Vec::<u32>::new());
        assert_eq!(eval(&f, &[1, 2, 3], &2), (1 + 4 + 12) % 5);
    }
}
