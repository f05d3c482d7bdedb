//! Plücker coordinates of codes and of level structures.
//!
//! A code `C` of dimension `k` in `F^n` is recorded by the maximal minors of
//! an `n x (n - k)` parity-check matrix, taken over row tuples
//! `ι = (i_1 < .. < i_m)`, `m = n - k`, in lexicographic order. The vector is
//! projective; it is stored scaled so that its first nonzero entry is one.
//!
//! For a canonical level structure the same coordinates have a closed form
//! in the points and scalars, which is what makes them usable as fiber
//! equations.

use std::collections::HashMap;

use thiserror::Error;

use crate::code::LinearCode;
use crate::field::Field;
use crate::level::{LevelError, LevelStructure, Points};
use crate::linalg::{Along, IndexTuple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlueckerError {
    #[error("the full space has no Plücker coordinates")]
    FullSpace,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("the code is not in the image over these points")]
    NotInFiber,
    #[error("every tuple pair usable for l_{0} has a vanishing coordinate")]
    ZeroCoordinateObstruction(usize),
    #[error(transparent)]
    Level(#[from] LevelError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlueckerVector<F: Field> {
    field: F,
    n: usize,
    k: usize,
    coords: Vec<F::Elem>,
}

/// `Y_ι = H_ι / H_{ι_0}` together with the tuple `ι_0` actually used.
#[derive(Clone, Debug, PartialEq)]
pub struct Invariants<E> {
    pub values: Vec<E>,
    pub normalizer: IndexTuple,
    /// True when the coordinate at the first tuple vanished and a later one
    /// was used instead.
    pub fallback: bool,
}

impl<F: Field> PlueckerVector<F> {
    /// Scales raw coordinates by the inverse of the first nonzero entry.
    /// `None` for the zero vector.
    pub fn from_raw(field: F, n: usize, k: usize, mut coords: Vec<F::Elem>) -> Option<Self> {
        let first = coords.iter().find(|c| !field.is_zero(c))?;
        let inv = field.inv(first).expect("nonzero");
        for c in &mut coords {
            *c = field.mul(c, &inv);
        }
        Some(Self { field, n, k, coords })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coords(&self) -> &[F::Elem] {
        &self.coords
    }

    /// Row tuples matching [`Self::coords`].
    pub fn tuples(&self) -> Vec<IndexTuple> {
        IndexTuple::all(self.n, self.n - self.k).collect()
    }

    pub fn get(&self, tuple: &IndexTuple) -> Option<&F::Elem> {
        let idx = self.tuples().iter().position(|t| t == tuple)?;
        self.coords.get(idx)
    }

    /// Minors of the code's parity-check matrix.
    pub fn of_code(code: &LinearCode<F>) -> Result<Self, PlueckerError> {
        if code.k() == code.n() {
            return Err(PlueckerError::FullSpace);
        }
        let h = code.parity_check_matrix();
        let raw = h.maximal_minor_values(Along::Rows).expect("n >= n - k");
        Ok(Self::from_raw(code.field().clone(), code.n(), code.k(), raw).expect("H has full rank"))
    }

    /// Evaluates the closed-form coordinates directly from `α` and `l`.
    pub fn closed_form(g: &LevelStructure<F>) -> Result<Self, PlueckerError> {
        let n = g.n();
        let d = g.d();
        if !(0..=n as i64 - 2).contains(&d) {
            return Err(LevelError::DegreeOutOfRange { d, n, lo: 0, hi: n as i64 - 2 }.into());
        }
        let k = d as usize + 1;
        let f = g.field();
        let l_inv: Vec<F::Elem> =
            (1..=n).map(|j| f.inv(g.scalar(j)).expect("scalars are nonzero")).collect();
        let raw = IndexTuple::all(n, n - k)
            .map(|t| {
                let base = closed_form_unscaled(g.points(), &t);
                t.indices().iter().fold(base, |acc, &i| f.mul(&acc, &l_inv[i - 1]))
            })
            .collect();
        Ok(Self::from_raw(f.clone(), n, k, raw).expect("closed-form coordinates are nonzero"))
    }

    /// Ratios to the coordinate at the first tuple, or to the first nonzero
    /// coordinate when that one vanishes.
    pub fn invariants_y(&self) -> Invariants<F::Elem> {
        let f = &self.field;
        let pos = self.coords.iter().position(|c| !f.is_zero(c)).expect("vector is nonzero");
        let inv = f.inv(&self.coords[pos]).expect("nonzero");
        Invariants {
            values: self.coords.iter().map(|c| f.mul(c, &inv)).collect(),
            normalizer: self.tuples().swap_remove(pos),
            fallback: pos != 0,
        }
    }

    /// Checks every three-term Grassmann-Plücker relation
    /// `p(S,a,b) p(S,c,d) - p(S,a,c) p(S,b,d) + p(S,a,d) p(S,b,c) = 0`
    /// with `a < b < c < d` outside the `(m-2)`-set `S`, rows in the stated
    /// order (signs account for sorting).
    pub fn three_term_relations_hold(&self) -> bool {
        let m = self.n - self.k;
        if m < 2 || self.n < m + 2 {
            return true;
        }
        let f = &self.field;
        let index: HashMap<Vec<usize>, usize> = self
            .tuples()
            .into_iter()
            .enumerate()
            .map(|(i, t)| (t.indices().to_vec(), i))
            .collect();
        let p = |s: &[usize], x: usize, y: usize| -> F::Elem {
            let mut rows: Vec<usize> = s.to_vec();
            rows.push(x);
            rows.push(y);
            let mut inversions = 0;
            for i in 0..rows.len() {
                for j in i + 1..rows.len() {
                    if rows[i] > rows[j] {
                        inversions += 1;
                    }
                }
            }
            rows.sort_unstable();
            let v = self.coords[index[&rows]].clone();
            if inversions % 2 == 1 {
                f.neg(&v)
            } else {
                v
            }
        };
        use itertools::Itertools;
        for s in (1..=self.n).combinations(m - 2) {
            let rest: Vec<usize> = (1..=self.n).filter(|i| !s.contains(i)).collect();
            for q in rest.iter().copied().combinations(4) {
                let (a, b, c, d) = (q[0], q[1], q[2], q[3]);
                let t1 = f.mul(&p(&s, a, b), &p(&s, c, d));
                let t2 = f.mul(&p(&s, a, c), &p(&s, b, d));
                let t3 = f.mul(&p(&s, a, d), &p(&s, b, c));
                if !f.is_zero(&f.add(&f.sub(&t1, &t2), &t3)) {
                    return false;
                }
            }
        }
        true
    }
}

/// The closed-form coordinate at `ι` with every `l = 1`.
///
/// With `V(S) = ∏_{r<s} (α_{i_s} - α_{i_r})` over `S` and
/// `D(j) = ∏_{i != 1, j} (α_j - α_i)`:
/// `i_1 = 1` gives `(-1)^{m} V(ι \ {1}) / ∏_{j ∈ ι, j != 1} D(j)`, otherwise
/// `V(ι) / ∏_{j ∈ ι} D(j)`, where `m = |ι| = n - d - 1`.
fn closed_form_unscaled<F: Field>(points: &Points<F>, t: &IndexTuple) -> F::Elem {
    let f = points.field();
    let n = points.n();
    let idx = t.indices();
    let (sign, finite) = match idx.first() {
        Some(1) => (idx.len() % 2 == 1, &idx[1..]),
        _ => (false, idx),
    };
    let mut num = f.one();
    for (r, &ir) in finite.iter().enumerate() {
        for &is in &finite[r + 1..] {
            num = f.mul(&num, &f.sub(points.alpha(is), points.alpha(ir)));
        }
    }
    let mut den = f.one();
    for &j in finite {
        for i in (2..=n).filter(|&i| i != j) {
            den = f.mul(&den, &f.sub(points.alpha(j), points.alpha(i)));
        }
    }
    let value = f.div(&num, &den).expect("points are distinct");
    if sign {
        f.neg(&value)
    } else {
        value
    }
}

/// `y_ι - Y_ι(g)`: all zero iff `g` lies in the fiber over `code`.
pub fn fiber_residual<F: Field>(
    code: &LinearCode<F>,
    g: &LevelStructure<F>,
) -> Result<Vec<F::Elem>, PlueckerError> {
    if code.n() != g.n() || code.k() as i64 != g.d() + 1 || code.field() != g.field() {
        return Err(PlueckerError::ShapeMismatch(format!(
            "code [{}, {}] against a structure with n = {}, d = {}",
            code.n(),
            code.k(),
            g.n(),
            g.d()
        )));
    }
    let y = PlueckerVector::of_code(code)?;
    let model = PlueckerVector::closed_form(g)?;
    let f = code.field();
    Ok(y.coords.iter().zip(&model.coords).map(|(a, b)| f.sub(a, b)).collect())
}

/// Solves for `l_1, .., l_{n-1}` given the points and the degree.
///
/// For `ι ∋ j` with `n ∉ ι`, and `ι'` obtained by replacing `j` with `n`, the
/// closed forms give `p_ι / p_ι' = B(ι) / (B(ι') l_j)` where `B` is the
/// coordinate at `l = 1`. The result is confirmed by rebuilding the code.
pub fn recover_scalars<F: Field>(
    code: &LinearCode<F>,
    alphas: &[F::Elem],
    d: i64,
) -> Result<Vec<F::Elem>, PlueckerError> {
    let n = code.n();
    if code.k() as i64 != d + 1 {
        return Err(PlueckerError::ShapeMismatch(format!(
            "dimension {} does not match degree {d}",
            code.k()
        )));
    }
    let f = code.field();
    let points = std::sync::Arc::new(Points::new(f.clone(), n, alphas.to_vec())?);
    let p = PlueckerVector::of_code(code)?;
    let tuples = p.tuples();
    let index: HashMap<&IndexTuple, usize> = tuples.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let base: Vec<F::Elem> = tuples.iter().map(|t| closed_form_unscaled(&points, t)).collect();
    let mut scalars = Vec::with_capacity(n - 1);
    for j in 1..n {
        let found = tuples
            .iter()
            .filter(|t| t.contains(j) && !t.contains(n))
            .find_map(|t| {
                let a = index[t];
                let b = index[&t.swap_index(j, n).expect("j in t, n not in t")];
                if f.is_zero(&p.coords[a]) || f.is_zero(&p.coords[b]) {
                    return None;
                }
                let num = f.mul(&base[a], &p.coords[b]);
                let den = f.mul(&base[b], &p.coords[a]);
                f.div(&num, &den)
            });
        scalars.push(found.ok_or(PlueckerError::ZeroCoordinateObstruction(j))?);
    }
    let g = LevelStructure::on(&points, d, scalars)?;
    if g.code()? == *code {
        Ok(g.scalars().to_vec())
    } else {
        Err(PlueckerError::NotInFiber)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;
    use crate::linalg::Matrix;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f7() -> FiniteField {
        FiniteField::prime(7).unwrap()
    }

    fn g0() -> LevelStructure<FiniteField> {
        LevelStructure::new(f7(), 5, 2, vec![2, 3], vec![1, 1, 1, 1]).unwrap()
    }

    const G0_VECTOR: [u32; 10] = [1, 4, 3, 6, 4, 6, 4, 5, 6, 4];

    #[test]
    fn single_column_example() {
        let c = LinearCode::from_generator(Matrix::from_rows(f7(), 2, vec![vec![1, 0]]).unwrap());
        let v = PlueckerVector::of_code(&c).unwrap();
        assert_eq!(v.coords(), &[0, 1]);
        assert!(v.invariants_y().fallback);
        assert_eq!(v.invariants_y().normalizer, IndexTuple::new(vec![2]).unwrap());
    }

    #[test]
    fn worked_example_from_minors_and_closed_form() {
        let g = g0();
        let h = g.parity_check_matrix().unwrap();
        let minors = h.maximal_minor_values(Along::Rows).unwrap();
        assert_eq!(minors, G0_VECTOR);
        let from_code = PlueckerVector::of_code(&g.code().unwrap()).unwrap();
        assert_eq!(from_code.coords(), &G0_VECTOR);
        let closed = PlueckerVector::closed_form(&g).unwrap();
        assert_eq!(closed.coords(), &G0_VECTOR);
        let y = closed.invariants_y();
        assert_eq!(y.values, G0_VECTOR);
        assert!(!y.fallback);
        let t23 = IndexTuple::new(vec![2, 3]).unwrap();
        let t14 = IndexTuple::new(vec![1, 4]).unwrap();
        assert_eq!(closed.get(&t23), Some(&4));
        assert_eq!(closed.get(&t14), Some(&3));
    }

    #[test]
    fn scalars_scale_coordinates() {
        let g = LevelStructure::new(f7(), 5, 2, vec![2, 3], vec![3, 5, 2, 6]).unwrap();
        let f = f7();
        let raw: Vec<u32> = IndexTuple::all(5, 2)
            .map(|t| {
                let b = closed_form_unscaled(g.points(), &t);
                t.indices().iter().fold(b, |acc, &i| f.div(&acc, g.scalar(i)).unwrap())
            })
            .collect();
        let expected = PlueckerVector::from_raw(f.clone(), 5, 3, raw).unwrap();
        assert_eq!(PlueckerVector::closed_form(&g).unwrap(), expected);
        assert_eq!(PlueckerVector::of_code(&g.code().unwrap()).unwrap(), expected);
    }

    #[test]
    fn parity_check_choice_is_irrelevant() {
        let g = g0();
        let h = g.parity_check_matrix().unwrap();
        let mix = Matrix::from_rows(f7(), 2, vec![vec![3, 1], vec![5, 6]]).unwrap();
        let h2 = h.mul(&mix).unwrap();
        let a = PlueckerVector::from_raw(f7(), 5, 3, h.maximal_minor_values(Along::Rows).unwrap());
        let b = PlueckerVector::from_raw(f7(), 5, 3, h2.maximal_minor_values(Along::Rows).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn residuals() {
        let g = g0();
        let c = g.code().unwrap();
        assert!(fiber_residual(&c, &g).unwrap().iter().all(|x| *x == 0));
        let moved = LevelStructure::new(f7(), 5, 2, vec![2, 3], vec![1, 2, 1, 1]).unwrap();
        assert!(fiber_residual(&c, &moved).unwrap().iter().any(|x| *x != 0));
        let wrong_k = LevelStructure::new(f7(), 5, 1, vec![2, 3], vec![1; 4]).unwrap();
        assert!(matches!(fiber_residual(&c, &wrong_k), Err(PlueckerError::ShapeMismatch(_))));
    }

    #[test]
    fn recovery_examples() {
        let g = LevelStructure::new(f7(), 5, 1, vec![2, 3], vec![1, 6, 3, 4]).unwrap();
        assert_eq!(recover_scalars(&g.code().unwrap(), &[2, 3], 1).unwrap(), vec![1, 6, 3, 4]);
        assert_eq!(recover_scalars(&g0().code().unwrap(), &[2, 3], 2).unwrap(), vec![1; 4]);
        // a 3-dimensional code with a forced zero coordinate is never a Goppa code
        let bad = LinearCode::from_generator(
            Matrix::from_rows(f7(), 5, vec![vec![1, 0, 0, 2, 3], vec![0, 1, 0, 4, 1], vec![0, 0, 1, 5, 5]])
                .unwrap(),
        );
        assert!(matches!(
            recover_scalars(&bad, &[2, 3], 2),
            Err(PlueckerError::NotInFiber) | Err(PlueckerError::ZeroCoordinateObstruction(_))
        ));
    }

    #[test]
    fn random_codes_are_rarely_in_the_image() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = f7();
        let mut rejected = 0;
        for _ in 0..50 {
            let rows = (0..3).map(|_| (0..5).map(|_| rng.gen_range(0..7)).collect()).collect();
            let c = LinearCode::from_generator(Matrix::from_rows(f.clone(), 5, rows).unwrap());
            if c.k() != 3 {
                continue;
            }
            match recover_scalars(&c, &[2, 3], 2) {
                Ok(l) => {
                    let g = LevelStructure::new(f.clone(), 5, 2, vec![2, 3], l).unwrap();
                    assert_eq!(g.code().unwrap(), c);
                }
                Err(_) => rejected += 1,
            }
        }
        assert!(rejected > 0);
    }

    #[test]
    fn three_term_relation_on_examples() {
        let v = PlueckerVector::of_code(&g0().code().unwrap()).unwrap();
        assert!(v.three_term_relations_hold());
        let mut broken = v.clone();
        broken.coords[4] = f7().add(&broken.coords[4], &1);
        assert!(!broken.three_term_relations_hold());
    }

    proptest! {
        #[test]
        fn closed_form_matches_minors_over_f8(
            d in 0i64..5,
            scalars in proptest::collection::vec(1u32..8, 5),
        ) {
            let f = FiniteField::with_order(8).unwrap();
            let g = LevelStructure::new(f, 6, d, vec![3, 5, 6], scalars).unwrap();
            let code = g.code().unwrap();
            let v = PlueckerVector::of_code(&code).unwrap();
            prop_assert_eq!(&v, &PlueckerVector::closed_form(&g).unwrap());
            prop_assert!(v.three_term_relations_hold());
        }

        #[test]
        fn recovery_round_trip(d in 2i64..3, scalars in proptest::collection::vec(1u32..11, 6)) {
            let f = FiniteField::prime(11).unwrap();
            let alphas = vec![4, 7, 9, 10];
            let g = LevelStructure::new(f, 7, d, alphas.clone(), scalars).unwrap();
            prop_assert_eq!(recover_scalars(&g.code().unwrap(), &alphas, d).unwrap(), g.scalars().to_vec());
        }
    }
}
