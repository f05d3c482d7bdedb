//! Canonical genus-zero level structures.
//!
//! The points are `p_1 = ∞`, `p_2 = 0`, `p_3 = 1` and `p_j = α_j` for
//! `4 <= j <= n`. The line bundle is `O(d·∞)` with global sections
//! `k[t]_{<=d}`; a section `f` is trivialized at `∞` by its `t^d`
//! coefficient and at `p_j` by `f(α_j)`, each times a scalar `l_j`. The
//! diagonal torus acts trivially on codes, so `l_n = 1` is pinned.

mod classical;

use std::sync::Arc;

use thiserror::Error;

use crate::code::LinearCode;
use crate::field::Field;
use crate::linalg::Matrix;

pub use classical::{ProjPoint, RawLevelStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LevelError {
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("expected {expected} {what}, got {got}")]
    BadLength {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("degree {d} is outside {lo}..={hi} for n = {n}")]
    DegreeOutOfRange { d: i64, n: usize, lo: i64, hi: i64 },
    #[error("alpha_{0} must avoid 0, 1 and the other alphas")]
    InvalidAlpha(usize),
    #[error("scalar at p_{0} is zero")]
    ZeroScalar(usize),
    #[error("a field of order {q} has no room for {n} points (need q >= n - 1)")]
    FieldTooSmall { q: u64, n: usize },
    #[error("level structures live on different points")]
    PointMismatch,
    #[error("level structures are over different fields")]
    FieldMismatch,
    #[error("points p_{0} and p_{1} coincide")]
    DegenerateConfiguration(usize, usize),
    #[error("divisor support contains p_{0}")]
    DivisorMeetsPoints(usize),
}

/// The pointed line `(P^1, ∞, 0, 1, α_4, .., α_n)` together with the residue
/// weights `h_j = 1 / ∏_{i != 1, j} (α_j - α_i)`.
#[derive(Clone, Debug)]
pub struct Points<F: Field> {
    field: F,
    n: usize,
    /// `α_2, .., α_n`
    coords: Vec<F::Elem>,
    /// `h_2, .., h_n`
    h: Vec<F::Elem>,
}

impl<F: Field> PartialEq for Points<F> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.coords == other.coords && self.field == other.field
    }
}

impl<F: Field> Points<F> {
    /// `alphas` are `α_4, .., α_n`.
    pub fn new(field: F, n: usize, alphas: Vec<F::Elem>) -> Result<Self, LevelError> {
        if n < 3 {
            return Err(LevelError::TooFewPoints(n));
        }
        if alphas.len() != n - 3 {
            return Err(LevelError::BadLength {
                what: "alphas",
                expected: n - 3,
                got: alphas.len(),
            });
        }
        if let Some(q) = field.cardinality() {
            if q + 1 < n as u64 {
                return Err(LevelError::FieldTooSmall { q, n });
            }
        }
        let mut coords = Vec::with_capacity(n - 1);
        coords.push(field.zero());
        coords.push(field.one());
        for (i, a) in alphas.into_iter().enumerate() {
            if coords.contains(&a) {
                return Err(LevelError::InvalidAlpha(i + 4));
            }
            coords.push(a);
        }
        let h = (0..coords.len())
            .map(|j| {
                let prod = coords
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j)
                    .fold(field.one(), |acc, (_, a)| field.mul(&acc, &field.sub(&coords[j], a)));
                field.inv(&prod).expect("points are distinct")
            })
            .collect();
        Ok(Self { field, n, coords, h })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `α_4, .., α_n`.
    pub fn alphas(&self) -> &[F::Elem] {
        &self.coords[2..]
    }

    /// `α_j` for `2 <= j <= n` (1-based).
    pub fn alpha(&self, j: usize) -> &F::Elem {
        &self.coords[j - 2]
    }

    /// `h_2, .., h_n`.
    pub fn h_values(&self) -> &[F::Elem] {
        &self.h
    }

    /// `h_j` for `2 <= j <= n`.
    pub fn h(&self, j: usize) -> &F::Elem {
        &self.h[j - 2]
    }
}

/// A canonical level structure: points, a degree `d`, and scalars
/// `l_1, .., l_{n-1}` (with `l_n = 1`).
#[derive(Clone, Debug)]
pub struct LevelStructure<F: Field> {
    points: Arc<Points<F>>,
    d: i64,
    /// `l_1, .., l_n`, last entry always one.
    l: Vec<F::Elem>,
}

impl<F: Field> PartialEq for LevelStructure<F> {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d
            && self.l == other.l
            && (Arc::ptr_eq(&self.points, &other.points) || self.points == other.points)
    }
}

impl<F: Field> LevelStructure<F> {
    pub fn new(
        field: F,
        n: usize,
        d: i64,
        alphas: Vec<F::Elem>,
        scalars: Vec<F::Elem>,
    ) -> Result<Self, LevelError> {
        let points = Arc::new(Points::new(field, n, alphas)?);
        Self::on(&points, d, scalars)
    }

    /// Structure on shared points; `scalars` are `l_1, .., l_{n-1}`.
    pub fn on(points: &Arc<Points<F>>, d: i64, mut scalars: Vec<F::Elem>) -> Result<Self, LevelError> {
        let n = points.n;
        if scalars.len() != n - 1 {
            return Err(LevelError::BadLength {
                what: "scalars",
                expected: n - 1,
                got: scalars.len(),
            });
        }
        let f = &points.field;
        if let Some(i) = scalars.iter().position(|s| f.is_zero(s)) {
            return Err(LevelError::ZeroScalar(i + 1));
        }
        scalars.push(f.one());
        Ok(Self { points: Arc::clone(points), d, l: scalars })
    }

    /// Builds from `n` scalars, dividing through by the last one.
    fn normalized(points: &Arc<Points<F>>, d: i64, mut l: Vec<F::Elem>) -> Self {
        let f = &points.field;
        let last = f.inv(l.last().expect("n >= 3")).expect("scalars are nonzero");
        for x in &mut l {
            *x = f.mul(x, &last);
        }
        Self { points: Arc::clone(points), d, l }
    }

    /// `d = 0`, all scalars one.
    pub fn unit(points: &Arc<Points<F>>) -> Self {
        let one = points.field.one();
        Self { points: Arc::clone(points), d: 0, l: vec![one; points.n] }
    }

    pub fn points(&self) -> &Arc<Points<F>> {
        &self.points
    }

    pub fn field(&self) -> &F {
        &self.points.field
    }

    pub fn n(&self) -> usize {
        self.points.n
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn alphas(&self) -> &[F::Elem] {
        self.points.alphas()
    }

    /// `l_1, .., l_{n-1}`.
    pub fn scalars(&self) -> &[F::Elem] {
        &self.l[..self.l.len() - 1]
    }

    /// `l_j` for `1 <= j <= n`.
    pub fn scalar(&self, j: usize) -> &F::Elem {
        &self.l[j - 1]
    }

    fn degree_in(&self, hi: i64) -> Result<usize, LevelError> {
        if (0..=hi).contains(&self.d) {
            Ok(self.d as usize)
        } else {
            Err(LevelError::DegreeOutOfRange { d: self.d, n: self.n(), lo: 0, hi })
        }
    }

    /// Codeword of `f = m_0 + m_1 t + .. + m_d t^d`.
    pub fn encode(&self, message: &[F::Elem]) -> Result<Vec<F::Elem>, LevelError> {
        let d = self.degree_in(self.n() as i64 - 1)?;
        if message.len() != d + 1 {
            return Err(LevelError::BadLength {
                what: "message symbols",
                expected: d + 1,
                got: message.len(),
            });
        }
        let f = self.field();
        let mut word = Vec::with_capacity(self.n());
        word.push(f.mul(&self.l[0], &message[d]));
        for j in 2..=self.n() {
            let value = crate::field::poly::eval(f, message, self.points.alpha(j));
            word.push(f.mul(&self.l[j - 1], &value));
        }
        Ok(word)
    }

    /// `(d+1) x n`; row `m` is the codeword of `t^m`.
    pub fn generator_matrix(&self) -> Result<Matrix<F>, LevelError> {
        let d = self.degree_in(self.n() as i64 - 1)?;
        let f = self.field();
        let n = self.n();
        let mut data = vec![f.zero(); (d + 1) * n];
        data[d * n] = self.l[0].clone();
        for j in 1..n {
            let a = &self.points.coords[j - 1];
            let mut v = self.l[j].clone();
            for m in 0..=d {
                if m > 0 {
                    v = f.mul(&v, a);
                }
                data[m * n + j] = v.clone();
            }
        }
        Ok(Matrix::new(f.clone(), d + 1, n, data).expect("shape"))
    }

    /// `n x (n-d-1)`, annihilated by the generator matrix.
    pub fn parity_check_matrix(&self) -> Result<Matrix<F>, LevelError> {
        let d = self.degree_in(self.n() as i64 - 2)?;
        let f = self.field();
        let n = self.n();
        let c = n - d - 1;
        let mut data = vec![f.zero(); n * c];
        let l1_inv = f.inv(&self.l[0]).expect("scalars are nonzero");
        data[c - 1] = f.neg(&l1_inv);
        for j in 1..n {
            let a = &self.points.coords[j - 1];
            let lj_inv = f.inv(&self.l[j]).expect("scalars are nonzero");
            let mut v = f.mul(&lj_inv, &self.points.h[j - 1]);
            for m in 0..c {
                if m > 0 {
                    v = f.mul(&v, a);
                }
                data[j * c + m] = v.clone();
            }
        }
        Ok(Matrix::new(f.clone(), n, c, data).expect("shape"))
    }

    pub fn code(&self) -> Result<LinearCode<F>, LevelError> {
        Ok(LinearCode::from_generator(self.generator_matrix()?))
    }

    /// The residue structure of degree `n - d - 2`, whose code is the dual.
    pub fn dual_structure(&self) -> Result<Self, LevelError> {
        let d = self.degree_in(self.n() as i64 - 2)?;
        let f = self.field();
        let mut lambda = Vec::with_capacity(self.n());
        lambda.push(f.neg(&f.inv(&self.l[0]).expect("nonzero")));
        for j in 1..self.n() {
            let inv = f.inv(&self.l[j]).expect("nonzero");
            lambda.push(f.mul(&inv, &self.points.h[j - 1]));
        }
        let dual_d = (self.n() - d - 2) as i64;
        Ok(Self::normalized(&self.points, dual_d, lambda))
    }

    /// Residues of `dt / ∏ (t - α_i)`: degree `n - 2`.
    pub fn canonical_differential_structure(points: &Arc<Points<F>>) -> Self {
        let f = &points.field;
        let mut lambda = Vec::with_capacity(points.n);
        lambda.push(f.neg(&f.one()));
        lambda.extend(points.h.iter().cloned());
        Self::normalized(points, points.n as i64 - 2, lambda)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), LevelError> {
        if self.field() != other.field() {
            return Err(LevelError::FieldMismatch);
        }
        if !Arc::ptr_eq(&self.points, &other.points) && *self.points != *other.points {
            return Err(LevelError::PointMismatch);
        }
        Ok(())
    }

    pub fn tensor(&self, other: &Self) -> Result<Self, LevelError> {
        self.check_compatible(other)?;
        let f = self.field();
        let l = self.l.iter().zip(&other.l).map(|(a, b)| f.mul(a, b)).collect();
        Ok(Self { points: Arc::clone(&self.points), d: self.d + other.d, l })
    }

    pub fn inverse(&self) -> Self {
        let f = self.field();
        let l = self.l.iter().map(|a| f.inv(a).expect("nonzero")).collect();
        Self { points: Arc::clone(&self.points), d: -self.d, l }
    }

    /// With `l_n = 1` pinned on both sides, equivalence is equality of
    /// degree, points and scalars.
    pub fn is_equivalent(&self, other: &Self) -> Result<bool, LevelError> {
        if self.field() != other.field() {
            return Err(LevelError::FieldMismatch);
        }
        if self.n() != other.n() {
            return Err(LevelError::PointMismatch);
        }
        Ok(self == other)
    }

    /// `g ⊗ g ≅ g_can`, which forces `n = 2(d + 1)`.
    pub fn is_self_dual(&self) -> bool {
        if self.n() as i64 != 2 * (self.d + 1) {
            return false;
        }
        let can = Self::canonical_differential_structure(&self.points);
        let f = self.field();
        self.l.iter().zip(&can.l).all(|(a, c)| f.mul(a, a) == *c)
    }
}
