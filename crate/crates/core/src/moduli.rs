//! Parameter arithmetic for level structures of type `(g, n, d)`.
//!
//! With `k = 1 - g + d` and `a = n - 2 + 2g`,
//! `Ξ(d) = dim Gr(k, n) - dim LS = k (n - k) - (4g - 4 + 2n)`, which expands to
//! `-d^2 + a d - (a (g + 1) - (g - 1)^2)`. Degrees where `Ξ > 0` give codes
//! that occupy a thin slice of their Grassmannian.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuliError {
    #[error("parameter violation: {0}")]
    ParameterViolation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum CodeDimension {
    Exact(i64),
    UpperBound(i64),
}

/// `k = 1 - g + d` when `d > 2g - 2`; otherwise only `k <= g` is known.
pub fn code_dimension(g: i64, n: i64, d: i64) -> Result<CodeDimension, ModuliError> {
    if g < 0 {
        return Err(ModuliError::ParameterViolation(format!("genus {g} is negative")));
    }
    if n <= d {
        return Err(ModuliError::ParameterViolation(format!("need n > d, got n = {n}, d = {d}")));
    }
    if d > 2 * g - 2 {
        Ok(CodeDimension::Exact(1 - g + d))
    } else {
        Ok(CodeDimension::UpperBound(g))
    }
}

pub fn dim_level_structures(g: i64, n: i64) -> i64 {
    4 * g - 4 + 2 * n
}

pub fn dim_grassmannian(k: i64, n: i64) -> i64 {
    k * (n - k)
}

pub fn xi(g: i64, n: i64, d: i64) -> i64 {
    let a = n - 2 + 2 * g;
    -d * d + a * d - (a * (g + 1) - (g - 1) * (g - 1))
}

/// Roots `(a ± √disc) / 2` of `Ξ`, with `a = n - 2 + 2g` and
/// `disc = n^2 - 8n + 16(1 - g)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CutPoints {
    Real {
        /// `a / 2`, reduced.
        midpoint: String,
        discriminant: i64,
        /// Present when the discriminant is a perfect square.
        rational_roots: Option<[String; 2]>,
        lower: f64,
        upper: f64,
    },
    NoRealRoots {
        discriminant: i64,
    },
}

pub fn discriminant(g: i64, n: i64) -> i64 {
    n * n - 8 * n + 16 * (1 - g)
}

pub fn cut_points(g: i64, n: i64) -> CutPoints {
    let a = n - 2 + 2 * g;
    let disc = discriminant(g, n);
    if disc < 0 {
        return CutPoints::NoRealRoots { discriminant: disc };
    }
    let root = (disc as f64).sqrt();
    CutPoints::Real {
        midpoint: Ratio::new(a, 2).to_string(),
        discriminant: disc,
        rational_roots: rational_roots(g, n).map(|(lo, hi)| [lo.to_string(), hi.to_string()]),
        lower: (a as f64 - root) / 2.0,
        upper: (a as f64 + root) / 2.0,
    }
}

/// Exact integer square root, when `v` is a perfect square.
pub fn exact_sqrt(v: i64) -> Option<i64> {
    if v < 0 {
        return None;
    }
    let r = (v as f64).sqrt() as i64;
    (r.saturating_sub(1)..=r + 1).find(|x| x * x == v)
}

/// The cut points as exact rationals, when they are rational.
pub fn rational_roots(g: i64, n: i64) -> Option<(Ratio<i64>, Ratio<i64>)> {
    let a = n - 2 + 2 * g;
    let r = exact_sqrt(discriminant(g, n))?;
    Some((Ratio::new(a - r, 2), Ratio::new(a + r, 2)))
}

/// Integer degrees in `(2g - 1, n)` with `Ξ(d) > 0`, i.e. strictly between
/// the cut points. Decided by evaluating `Ξ` exactly.
pub fn unsafe_degrees(g: i64, n: i64) -> Vec<i64> {
    ((2 * g).max(0)..n).filter(|&d| xi(g, n, d) > 0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParameterReport {
    pub g: i64,
    pub n: i64,
    pub d: i64,
    pub k: CodeDimension,
    pub strong: bool,
    pub dim_ls: i64,
    /// Only defined when `k` is exact.
    pub dim_gr: Option<i64>,
    pub xi: i64,
    pub cut_points: CutPoints,
    pub unsafe_degrees: Vec<i64>,
    #[serde(rename = "unsafe")]
    pub is_unsafe: bool,
    pub universally_injective: bool,
    /// `2g - 2 + n <= 0`: the dimension formula is reported but lies outside
    /// the range where the moduli count applies.
    pub outside_hypotheses: bool,
}

pub fn parameter_report(g: i64, n: i64, d: i64) -> Result<ParameterReport, ModuliError> {
    let k = code_dimension(g, n, d)?;
    let strong = matches!(k, CodeDimension::Exact(_));
    let dim_gr = match k {
        CodeDimension::Exact(k) => Some(dim_grassmannian(k, n)),
        CodeDimension::UpperBound(_) => None,
    };
    let unsafe_degrees = unsafe_degrees(g, n);
    Ok(ParameterReport {
        g,
        n,
        d,
        k,
        strong,
        dim_ls: dim_level_structures(g, n),
        dim_gr,
        xi: xi(g, n, d),
        cut_points: cut_points(g, n),
        is_unsafe: unsafe_degrees.contains(&d),
        unsafe_degrees,
        universally_injective: n > 2 * d && d > 2 * g + 1,
        outside_hypotheses: 2 * g - 2 + n <= 0,
    })
}

/// Reports for every strong degree `max(0, 2g - 1) <= d < n`.
pub fn sweep(g: i64, n: i64) -> Result<Vec<ParameterReport>, ModuliError> {
    ((2 * g - 1).max(0)..n).map(|d| parameter_report(g, n, d)).collect()
}

/// `[n choose k]_q`, the number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(q);
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow(n - i) - &one;
        den *= q.pow(i + 1) - &one;
    }
    num / den
}
