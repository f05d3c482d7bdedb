//! Linear block codes in canonical generator form.

use crate::field::{Field, FiniteField};
use crate::linalg::{kernel_from_rref, Matrix};

/// A `k`-dimensional subspace of `F^n`, stored as its unique reduced row
/// echelon generator without zero rows. Equality of codes is equality of
/// generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearCode<F: Field> {
    gen: Matrix<F>,
}

/// Compact identity of a code, for deduplication among codes over the same
/// field and length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CodeKey {
    Packed(u128),
    Bytes(Box<[u8]>),
}

impl<F: Field> LinearCode<F> {
    /// Row space of `m`.
    pub fn from_generator(mut m: Matrix<F>) -> Self {
        let rank = m.rref_in_place().len();
        m.truncate_rows(rank);
        Self { gen: m }
    }

    pub fn zero(field: F, n: usize) -> Self {
        Self { gen: Matrix::zeros(field, 0, n) }
    }

    pub fn full(field: F, n: usize) -> Self {
        Self { gen: Matrix::identity(field, n) }
    }

    pub fn field(&self) -> &F {
        self.gen.field()
    }

    pub fn n(&self) -> usize {
        self.gen.cols()
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    /// The canonical (rref) generator.
    pub fn generator(&self) -> &Matrix<F> {
        &self.gen
    }

    fn pivots(&self) -> Vec<usize> {
        let f = self.field();
        self.gen
            .row_vecs()
            .map(|r| r.iter().position(|x| !f.is_zero(x)).expect("rref rows are nonzero"))
            .collect()
    }

    /// Orthogonal complement under `(u, v) -> u . v^T`.
    pub fn dual(&self) -> Self {
        Self::from_generator(kernel_from_rref(&self.gen, &self.pivots()))
    }

    /// An `n x (n - k)` matrix whose columns span the dual code, so that
    /// `G H = 0`.
    pub fn parity_check_matrix(&self) -> Matrix<F> {
        kernel_from_rref(&self.gen, &self.pivots()).transpose()
    }

    pub fn contains(&self, word: &[F::Elem]) -> bool {
        if word.len() != self.n() {
            return false;
        }
        let f = self.field();
        let mut rest = word.to_vec();
        for (row, p) in self.gen.row_vecs().zip(self.pivots()) {
            let c = rest[p].clone();
            if f.is_zero(&c) {
                continue;
            }
            for (x, g) in rest.iter_mut().zip(row) {
                *x = f.sub(x, &f.mul(&c, g));
            }
        }
        rest.iter().all(|x| f.is_zero(x))
    }

    /// True iff some coordinate vanishes on every codeword.
    pub fn is_degenerate(&self) -> bool {
        let f = self.field();
        (0..self.n()).any(|j| (0..self.k()).all(|i| f.is_zero(self.gen.get(i, j))))
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.k() == self.n() && *self == self.dual()
    }

    pub fn key(&self) -> CodeKey {
        let f = self.field();
        let entries = self.gen.entries();
        if let Some((_, bits)) = entries.first().and_then(|e| f.packed_index(e)) {
            if bits as usize * entries.len() + 8 <= 128 && self.k() < 256 {
                let mut acc = self.k() as u128;
                for e in entries {
                    let (idx, _) = f.packed_index(e).expect("field packs every element");
                    acc = (acc << bits) | idx as u128;
                }
                return CodeKey::Packed(acc);
            }
        }
        let mut out = Vec::with_capacity(8 + entries.len() * 4);
        out.extend_from_slice(&(self.n() as u32).to_le_bytes());
        out.extend_from_slice(&(self.k() as u32).to_le_bytes());
        for e in entries {
            f.write_key(e, &mut out);
        }
        CodeKey::Bytes(out.into_boxed_slice())
    }
}

impl LinearCode<FiniteField> {
    /// Every codeword, in message enumeration order. Only sensible for tiny
    /// codes.
    pub fn codewords(&self) -> Vec<Vec<u32>> {
        let f = self.field();
        let q = f.order() as usize;
        let total = q.pow(self.k() as u32);
        (0..total)
            .map(|mut idx| {
                let msg: Vec<u32> = (0..self.k())
                    .map(|_| {
                        let c = (idx % q) as u32;
                        idx /= q;
                        c
                    })
                    .collect();
                self.gen.left_mul_vec(&msg).expect("message length is k")
            })
            .collect()
    }

    /// Componentwise trace to the prime field, as a code over `F_p`.
    ///
    /// Spanned by `Tr(b * g)` for basis codewords `g` and elements `b` of an
    /// `F_p`-basis of `F_q`.
    pub fn trace_code(&self) -> LinearCode<FiniteField> {
        let f = self.field();
        let fp = f.prime_subfield().clone();
        let basis = f.basis();
        let mut rows = Vec::with_capacity(self.k() * basis.len());
        for g in self.gen.row_vecs() {
            for b in &basis {
                rows.push(g.iter().map(|x| f.trace(f.mul(b, x))).collect());
            }
        }
        let m = Matrix::from_rows(fp, self.n(), rows).expect("rows have length n");
        LinearCode::from_generator(m)
    }

    /// Codewords with every coordinate in `F_p`, as a code over `F_p`.
    ///
    /// Solves for message coefficients `a_{i,s}` (the `x^s` coordinate of the
    /// `i`-th message symbol) such that all higher coordinates vanish.
    pub fn subfield_subcode(&self) -> LinearCode<FiniteField> {
        let f = self.field();
        let fp = f.prime_subfield().clone();
        let r = f.degree() as usize;
        let (k, n) = (self.k(), self.n());
        let basis = f.basis();
        // coeff[(i, s, j)] = coefficient vector of x^s g_ij
        let expand = |i: usize, s: usize, j: usize| f.coeffs(f.mul(&basis[s], self.gen.get(i, j)));
        let unknowns = k * r;
        let eqs = n * (r - 1);
        let mut system = Matrix::zeros(fp.clone(), eqs, unknowns);
        let mut low = Matrix::zeros(fp.clone(), unknowns, n);
        for i in 0..k {
            for s in 0..r {
                let col = i * r + s;
                for j in 0..n {
                    let c = expand(i, s, j);
                    low.set(col, j, c[0]);
                    for (t, &ct) in c.iter().enumerate().skip(1) {
                        system.set(j * (r - 1) + (t - 1), col, ct);
                    }
                }
            }
        }
        let solutions = system.kernel_basis();
        let words = solutions.mul(&low).expect("kernel rows have k*r entries");
        LinearCode::from_generator(words)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FiniteField {
        FiniteField::prime(2).unwrap()
    }

    fn f4() -> FiniteField {
        FiniteField::extension(2, &[1, 1, 1]).unwrap()
    }

    fn code(f: &FiniteField, n: usize, rows: &[&[u32]]) -> LinearCode<FiniteField> {
        LinearCode::from_generator(
            Matrix::from_rows(f.clone(), n, rows.iter().map(|r| r.to_vec()).collect()).unwrap(),
        )
    }

    #[test]
    fn from_generator_examples() {
        let full = LinearCode::from_generator(Matrix::identity(f2(), 4));
        assert_eq!(full.k(), 4);
        let zero = LinearCode::from_generator(Matrix::zeros(f2(), 3, 4));
        assert_eq!(zero.k(), 0);
        assert_eq!(zero, LinearCode::zero(f2(), 4));
        let c = code(&f2(), 3, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        assert_eq!(c.k(), 2);
    }

    #[test]
    fn dual_examples() {
        assert_eq!(LinearCode::full(f2(), 3).dual(), LinearCode::zero(f2(), 3));
        let rep = code(&f2(), 2, &[&[1, 1]]);
        assert_eq!(rep.dual(), rep);
        assert!(rep.is_self_dual());
    }

    #[test]
    fn trace_code_examples() {
        let f = f4();
        let w = 2; // x
        let c = code(&f, 2, &[&[w, w]]);
        assert_eq!(c.trace_code(), code(&f2(), 2, &[&[1, 1]]));
        assert_eq!(LinearCode::zero(f.clone(), 3).trace_code(), LinearCode::zero(f2(), 3));
        assert_eq!(LinearCode::full(f.clone(), 2).trace_code(), LinearCode::full(f2(), 2));
    }

    #[test]
    fn subfield_subcode_examples() {
        let f = f4();
        let c = code(&f, 2, &[&[2, 2]]);
        // codewords 0, (x,x), (x+1,x+1), (1,1): only (1,1) survives
        assert_eq!(c.subfield_subcode(), code(&f2(), 2, &[&[1, 1]]));
        assert_eq!(LinearCode::full(f.clone(), 3).subfield_subcode(), LinearCode::full(f2(), 3));
        assert_eq!(LinearCode::zero(f.clone(), 3).subfield_subcode(), LinearCode::zero(f2(), 3));
    }

    #[test]
    fn subfield_subcode_matches_codeword_scan() {
        let f = FiniteField::with_order(9).unwrap();
        let c = code(&f, 4, &[&[1, 3, 0, 5], &[0, 1, 1, 7]]);
        let scanned: Vec<Vec<u32>> = c
            .codewords()
            .into_iter()
            .filter(|w| w.iter().all(|&x| f.in_prime_subfield(x)))
            .collect();
        let fp = f.prime_subfield().clone();
        let expected = LinearCode::from_generator(Matrix::from_rows(fp, 4, scanned).unwrap());
        assert_eq!(c.subfield_subcode(), expected);
    }

    #[test]
    fn degeneracy() {
        assert!(!LinearCode::full(f2(), 3).is_degenerate());
        assert!(code(&f2(), 2, &[&[1, 0]]).is_degenerate());
    }

    #[test]
    fn membership_and_keys() {
        let f = FiniteField::prime(7).unwrap();
        let c = code(&f, 3, &[&[1, 2, 3]]);
        assert!(c.contains(&[2, 4, 6]));
        assert!(!c.contains(&[2, 4, 5]));
        let same = code(&f, 3, &[&[3, 6, 2]]);
        assert_eq!(c.key(), same.key());
        assert_ne!(c.key(), c.dual().key());
        let big = LinearCode::full(FiniteField::prime(251).unwrap(), 20);
        assert!(matches!(big.key(), CodeKey::Bytes(_)));
    }
}
