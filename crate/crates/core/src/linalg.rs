//! Dense exact linear algebra over any [`Field`].

use std::fmt;
use std::hash::{Hash, Hasher};

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape error: {0}")]
    Shape(String),
}

/// Row-major dense matrix; all entries belong to `field`.
#[derive(Clone, Debug)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> PartialEq for Matrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
            && self.field == other.field
    }
}

impl<F: Field> Eq for Matrix<F> {}

impl<F: Field> Hash for Matrix<F> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<F: Field> {
    pub matrix: Matrix<F>,
    pub rank: usize,
    /// 0-based pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

/// Which side of a matrix a maximal minor selects from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Along {
    Rows,
    Cols,
}

/// Strictly increasing 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct IndexTuple(Vec<usize>);

impl IndexTuple {
    pub fn new(indices: Vec<usize>) -> Option<Self> {
        let ok = indices.first().is_none_or(|&i| i >= 1)
            && indices.windows(2).all(|w| w[0] < w[1]);
        ok.then_some(Self(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Replaces index `from` by `to`, keeping the tuple sorted.
    pub fn swap_index(&self, from: usize, to: usize) -> Option<Self> {
        if !self.contains(from) || self.contains(to) || to == 0 {
            return None;
        }
        let mut v: Vec<usize> = self.0.iter().map(|&i| if i == from { to } else { i }).collect();
        v.sort_unstable();
        Some(Self(v))
    }

    /// All `m`-subsets of `1..=n` in lexicographic order.
    pub fn all(n: usize, m: usize) -> impl Iterator<Item = IndexTuple> {
        (1..=n).combinations(m).map(IndexTuple)
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

impl<F: Field> Matrix<F> {
    pub fn new(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { field, rows, cols, data })
    }

    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Self { field, rows, cols, data }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    pub fn from_fn(field: F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { field, rows, cols, data }
    }

    /// Builds a matrix from equal-length rows; `cols` is needed when there are
    /// no rows.
    pub fn from_rows(field: F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Result<Self, LinalgError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::Shape(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        let n = rows.len();
        Ok(Self { field, rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> impl Iterator<Item = &[F::Elem]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field.clone(), self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), &f.mul(a, other.get(t, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>, LinalgError> {
        if v.len() != self.rows {
            return Err(LinalgError::Shape(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let f = &self.field;
        Ok((0..self.cols)
            .map(|j| {
                v.iter()
                    .enumerate()
                    .fold(f.zero(), |acc, (i, x)| f.add(&acc, &f.mul(x, self.get(i, j))))
            })
            .collect())
    }

    /// Rows at the given 0-based positions, in that order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self { field: self.field.clone(), rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.field.clone(), self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * c);
        head[lo * c..(lo + 1) * c].swap_with_slice(&mut tail[..c]);
    }

    /// Reduced row echelon form with first-nonzero pivoting.
    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        Rref { rank: pivots.len(), matrix: m, pivots }
    }

    pub(crate) fn truncate_rows(&mut self, rows: usize) {
        self.rows = self.rows.min(rows);
        self.data.truncate(self.rows * self.cols);
    }

    pub(crate) fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !f.is_zero(self.get(i, c))) else {
                continue;
            };
            self.swap_rows(p, r);
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..cols {
                let v = f.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..rows {
                if i == r || f.is_zero(self.get(i, c)) {
                    continue;
                }
                let factor = self.get(i, c).clone();
                for j in c..cols {
                    let v = f.sub(self.get(i, j), &f.mul(&factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis (as rows) of `{x : M x^T = 0}`, one row per free column.
    pub fn kernel_basis(&self) -> Self {
        let Rref { matrix: r, pivots, .. } = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    pub fn determinant(&self) -> Result<F::Elem, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Shape(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut scratch = self.data.clone();
        Ok(det_in_place(&self.field, &mut scratch, self.rows))
    }

    /// Every maximal minor, tuples in lexicographic order.
    ///
    /// `Along::Rows` needs `rows >= cols` and picks `cols` rows at a time;
    /// `Along::Cols` is the transposed situation.
    pub fn maximal_minors(&self, along: Along) -> Result<Vec<(IndexTuple, F::Elem)>, LinalgError> {
        let values = self.maximal_minor_values(along)?;
        let (total, size) = match along {
            Along::Rows => (self.rows, self.cols),
            Along::Cols => (self.cols, self.rows),
        };
        Ok(IndexTuple::all(total, size).zip(values).collect())
    }

    /// The values of [`Matrix::maximal_minors`] without the tuples.
    pub fn maximal_minor_values(&self, along: Along) -> Result<Vec<F::Elem>, LinalgError> {
        let (total, size) = match along {
            Along::Rows => (self.rows, self.cols),
            Along::Cols => (self.cols, self.rows),
        };
        if total < size {
            return Err(LinalgError::Shape(format!(
                "no maximal minors along {along:?} of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let f = &self.field;
        let mut scratch = vec![f.zero(); size * size];
        let out = (0..total)
            .combinations(size)
            .map(|idx| {
                for (a, &i) in idx.iter().enumerate() {
                    for b in 0..size {
                        scratch[a * size + b] = match along {
                            Along::Rows => self.get(i, b).clone(),
                            Along::Cols => self.get(b, i).clone(),
                        };
                    }
                }
                det_in_place(f, &mut scratch, size)
            })
            .collect();
        Ok(out)
    }
}

/// Determinant of the row-major `n x n` block in `m`, which is destroyed.
/// Gaussian elimination with first-nonzero pivots; each swap flips the sign.
fn det_in_place<F: Field>(f: &F, m: &mut [F::Elem], n: usize) -> F::Elem {
    let mut det = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !f.is_zero(&m[i * n + c])) else {
            return f.zero();
        };
        if p != c {
            for j in c..n {
                m.swap(p * n + j, c * n + j);
            }
            det = f.neg(&det);
        }
        let pivot = m[c * n + c].clone();
        det = f.mul(&det, &pivot);
        let inv = f.inv(&pivot).expect("pivot is nonzero");
        for i in c + 1..n {
            if f.is_zero(&m[i * n + c]) {
                continue;
            }
            let factor = f.mul(&m[i * n + c], &inv);
            for j in c..n {
                let v = f.sub(&m[i * n + j], &f.mul(&factor, &m[c * n + j]));
                m[i * n + j] = v;
            }
        }
    }
    det
}

pub(crate) fn kernel_from_rref<F: Field>(r: &Matrix<F>, pivots: &[usize]) -> Matrix<F> {
    let f = r.field();
    let cols = r.cols();
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut data = Vec::with_capacity(free.len() * cols);
    for &fc in &free {
        let mut v = vec![f.zero(); cols];
        v[fc] = f.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(r.get(row, fc));
        }
        data.extend(v);
    }
    Matrix::new(f.clone(), free.len(), cols, data).expect("shape is consistent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;
    use proptest::prelude::*;

    fn f7() -> FiniteField {
        FiniteField::prime(7).unwrap()
    }

    fn mat(rows: &[&[u32]]) -> Matrix<FiniteField> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(f7(), cols, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    /// Laplace expansion along the first row.
    fn cofactor_det(f: &FiniteField, m: &Matrix<FiniteField>) -> u32 {
        let n = m.rows();
        if n == 0 {
            return 1;
        }
        let mut acc = 0;
        for j in 0..n {
            let minor: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let sub = m.select_rows(&(1..n).collect::<Vec<_>>()).select_cols(&minor);
            let term = f.mul(m.get(0, j), &cofactor_det(f, &sub));
            acc = if j % 2 == 0 { f.add(&acc, &term) } else { f.sub(&acc, &term) };
        }
        acc
    }

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(f7(), 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
        let z = Matrix::zeros(f7(), 2, 3);
        assert_eq!(z.rref().rank, 0);
        assert_eq!(z.rref().matrix, z);
        let r = mat(&[&[2, 4], &[3, 6]]).rref();
        assert_eq!(r.matrix, mat(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(f7(), 3).kernel_basis().rows(), 0);
        let k = Matrix::zeros(f7(), 2, 3).kernel_basis();
        assert_eq!(k.rows(), 3);
        assert_eq!(k.rank(), 3);
    }

    #[test]
    fn minors_examples() {
        let m = Matrix::identity(f7(), 2);
        let minors = m.maximal_minors(Along::Rows).unwrap();
        assert_eq!(minors, vec![(IndexTuple::new(vec![1, 2]).unwrap(), 1)]);
        let m = mat(&[&[1, 0], &[0, 1], &[1, 1]]);
        let got: Vec<(Vec<usize>, u32)> = m
            .maximal_minors(Along::Rows)
            .unwrap()
            .into_iter()
            .map(|(t, v)| (t.indices().to_vec(), v))
            .collect();
        assert_eq!(got, vec![(vec![1, 2], 1), (vec![1, 3], 1), (vec![2, 3], 6)]);
        assert!(m.maximal_minors(Along::Cols).is_err());
        let by_cols = m.transpose().maximal_minors(Along::Cols).unwrap();
        assert_eq!(by_cols.iter().map(|x| x.1).collect::<Vec<_>>(), vec![1, 1, 6]);
    }

    #[test]
    fn zero_row_kills_minors() {
        let m = mat(&[&[1, 2], &[0, 0], &[3, 5], &[4, 4]]);
        for (t, v) in m.maximal_minors(Along::Rows).unwrap() {
            if t.contains(2) {
                assert_eq!(v, 0);
            }
        }
    }

    #[test]
    fn index_tuple_validation() {
        assert!(IndexTuple::new(vec![1, 3, 4]).is_some());
        assert!(IndexTuple::new(vec![0, 1]).is_none());
        assert!(IndexTuple::new(vec![2, 2]).is_none());
        let t = IndexTuple::new(vec![1, 3]).unwrap();
        assert_eq!(t.swap_index(1, 5).unwrap().indices(), &[3, 5]);
        assert!(t.swap_index(2, 5).is_none());
        assert_eq!(IndexTuple::all(4, 2).count(), 6);
        assert_eq!(t.to_string(), "(1,3)");
    }

    fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix<FiniteField>> {
        (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
            proptest::collection::vec(0u32..7, r * c)
                .prop_map(move |d| Matrix::new(f7(), r, c, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent_and_rank_nullity(m in arb_matrix(5, 6)) {
            let r = m.rref();
            prop_assert_eq!(&r.matrix.rref().matrix, &r.matrix);
            let k = m.kernel_basis();
            prop_assert_eq!(r.rank + k.rows(), m.cols());
            prop_assert!(m.mul(&k.transpose()).unwrap().is_zero());
            prop_assert_eq!(k.rank(), k.rows());
        }

        #[test]
        fn determinant_matches_cofactor(n in 1usize..=5, seed in proptest::collection::vec(0u32..7, 25)) {
            let m = Matrix::new(f7(), n, n, seed[..n * n].to_vec()).unwrap();
            prop_assert_eq!(m.determinant().unwrap(), cofactor_det(&f7(), &m));
        }

        #[test]
        fn row_equivalent_matrices_share_rref(m in arb_matrix(4, 5), mix in proptest::collection::vec(1u32..7, 16)) {
            // left-multiply by a unit lower-triangular matrix with random entries
            let n = m.rows();
            let t = Matrix::from_fn(f7(), n, n, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => mix[i],
                std::cmp::Ordering::Greater => mix[(i * 4 + j) % 16],
                std::cmp::Ordering::Less => 0,
            });
            let mixed = t.mul(&m).unwrap();
            prop_assert_eq!(mixed.rref().matrix, m.rref().matrix);
        }
    }
}
