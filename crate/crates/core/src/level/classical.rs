use std::sync::Arc;

use crate::field::Field;

use super::{LevelError, LevelStructure, Points};

/// A point of `P^1`: `[a; 1]` or `∞ = [1; 0]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProjPoint<E> {
    Infinity,
    Finite(E),
}

impl<E: Clone> ProjPoint<E> {
    fn homogeneous<F: Field<Elem = E>>(&self, f: &F) -> (E, E) {
        match self {
            ProjPoint::Infinity => (f.one(), f.zero()),
            ProjPoint::Finite(a) => (a.clone(), f.one()),
        }
    }
}

/// A classical pointed structure `(P^1, P_1, .., P_n, G)` with column
/// multipliers: the code is `{ (s_i f(P_i))_i : f ∈ L(G) }`.
#[derive(Clone, Debug)]
pub struct RawLevelStructure<F: Field> {
    field: F,
    points: Vec<ProjPoint<F::Elem>>,
    divisor: Vec<(ProjPoint<F::Elem>, i64)>,
    scalars: Vec<F::Elem>,
}

impl<F: Field> RawLevelStructure<F> {
    /// Repeated divisor points are merged; zero multiplicities dropped.
    pub fn new(
        field: F,
        points: Vec<ProjPoint<F::Elem>>,
        divisor: Vec<(ProjPoint<F::Elem>, i64)>,
        scalars: Vec<F::Elem>,
    ) -> Result<Self, LevelError> {
        let n = points.len();
        if n < 3 {
            return Err(LevelError::TooFewPoints(n));
        }
        if scalars.len() != n {
            return Err(LevelError::BadLength { what: "scalars", expected: n, got: scalars.len() });
        }
        if let Some(i) = scalars.iter().position(|s| field.is_zero(s)) {
            return Err(LevelError::ZeroScalar(i + 1));
        }
        for j in 0..n {
            if let Some(i) = points[..j].iter().position(|p| *p == points[j]) {
                return Err(LevelError::DegenerateConfiguration(i + 1, j + 1));
            }
        }
        let mut merged: Vec<(ProjPoint<F::Elem>, i64)> = Vec::new();
        for (p, m) in divisor {
            match merged.iter_mut().find(|(q, _)| *q == p) {
                Some(entry) => entry.1 += m,
                None => merged.push((p, m)),
            }
        }
        merged.retain(|(_, m)| *m != 0);
        if let Some(i) = points.iter().position(|p| merged.iter().any(|(q, _)| q == p)) {
            return Err(LevelError::DivisorMeetsPoints(i + 1));
        }
        Ok(Self { field, points, divisor: merged, scalars })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn points(&self) -> &[ProjPoint<F::Elem>] {
        &self.points
    }

    pub fn divisor(&self) -> &[(ProjPoint<F::Elem>, i64)] {
        &self.divisor
    }

    pub fn scalars(&self) -> &[F::Elem] {
        &self.scalars
    }

    pub fn degree(&self) -> i64 {
        self.divisor.iter().map(|(_, m)| m).sum()
    }

    /// Moves `P_1, P_2, P_3` to `∞, 0, 1`, trades `G` for `d·∞` through
    /// `w = ∏ (t - β)^{m_β}`, and pins the last scalar to one.
    pub fn to_canonical(&self) -> Result<LevelStructure<F>, LevelError> {
        let f = &self.field;
        let n = self.points.len();
        let (x1, y1) = self.points[0].homogeneous(f);
        let (x2, y2) = self.points[1].homogeneous(f);
        let (x3, y3) = self.points[2].homogeneous(f);
        let det = |xa: &F::Elem, ya: &F::Elem, xb: &F::Elem, yb: &F::Elem| {
            f.sub(&f.mul(ya, xb), &f.mul(xa, yb))
        };
        let c1 = f.inv(&det(&x2, &y2, &x3, &y3)).expect("points are distinct");
        let c2 = f.inv(&det(&x1, &y1, &x3, &y3)).expect("points are distinct");
        let mobius = |p: &ProjPoint<F::Elem>| {
            let (x, y) = p.homogeneous(f);
            let u = f.mul(&c1, &det(&x2, &y2, &x, &y));
            let v = f.mul(&c2, &det(&x1, &y1, &x, &y));
            match f.inv(&v) {
                None => ProjPoint::Infinity,
                Some(vi) => ProjPoint::Finite(f.mul(&u, &vi)),
            }
        };
        let finite = |p: ProjPoint<F::Elem>| match p {
            ProjPoint::Finite(a) => a,
            ProjPoint::Infinity => unreachable!("only P_1 maps to infinity"),
        };
        let coords: Vec<F::Elem> = self.points[1..].iter().map(|p| finite(mobius(p))).collect();
        let support: Vec<(F::Elem, i64)> =
            self.divisor.iter().map(|(p, m)| (finite(mobius(p)), *m)).collect();
        let w = |t: &F::Elem| {
            support.iter().fold(f.one(), |acc, (b, m)| {
                let factor = f.pow_i(&f.sub(t, b), *m).expect("support avoids the points");
                f.mul(&acc, &factor)
            })
        };
        let mut l = Vec::with_capacity(n);
        l.push(self.scalars[0].clone());
        for (s, a) in self.scalars[1..].iter().zip(&coords) {
            l.push(f.div(s, &w(a)).expect("support avoids the points"));
        }
        let points = Arc::new(Points::new(f.clone(), n, coords[2..].to_vec())?);
        Ok(LevelStructure::normalized(&points, self.degree(), l))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::LinearCode;
    use crate::field::{poly, FiniteField};
    use crate::linalg::Matrix;

    fn f7() -> FiniteField {
        FiniteField::prime(7).unwrap()
    }

    fn fin(a: u32) -> ProjPoint<u32> {
        ProjPoint::Finite(a)
    }

    /// Evaluation code of `{ t^m / w_0(t) : 0 <= m <= d }`, with `w_0` the
    /// product over the finite part of the divisor. Only valid when the
    /// divisor avoids `∞`.
    fn raw_code(raw: &RawLevelStructure<FiniteField>) -> LinearCode<FiniteField> {
        let f = raw.field();
        let d = raw.degree() as usize;
        let w0 = |t: u32| {
            raw.divisor().iter().fold(1, |acc, (p, m)| match p {
                ProjPoint::Finite(b) => f.mul(&acc, &f.pow_i(&f.sub(&t, b), *m).unwrap()),
                ProjPoint::Infinity => panic!("oracle needs a finite divisor"),
            })
        };
        let rows = (0..=d)
            .map(|m| {
                raw.points()
                    .iter()
                    .zip(raw.scalars())
                    .map(|(p, s)| {
                        let value = match p {
                            ProjPoint::Infinity => u32::from(m == d),
                            ProjPoint::Finite(t) => {
                                let mut mono = vec![0; m + 1];
                                mono[m] = 1;
                                f.div(&poly::eval(f, &mono, t), &w0(*t)).unwrap()
                            }
                        };
                        f.mul(s, &value)
                    })
                    .collect()
            })
            .collect();
        LinearCode::from_generator(Matrix::from_rows(f.clone(), raw.points().len(), rows).unwrap())
    }

    #[test]
    fn identity_mobius_only_rescales() {
        let raw = RawLevelStructure::new(
            f7(),
            vec![ProjPoint::Infinity, fin(0), fin(1), fin(2), fin(3)],
            vec![(fin(5), 0)],
            vec![2, 4, 6, 1, 3],
        )
        .unwrap();
        assert_eq!(raw.degree(), 0);
        let g = raw.to_canonical().unwrap();
        // divide by 3, i.e. multiply by 5
        assert_eq!(g.scalars(), &[3, 6, 2, 5]);
        assert_eq!(g.alphas(), &[2, 3]);
        assert_eq!(g.code().unwrap(), raw_code(&raw));
    }

    #[test]
    fn divisor_away_from_infinity() {
        let raw = RawLevelStructure::new(
            f7(),
            vec![ProjPoint::Infinity, fin(0), fin(1), fin(2), fin(3)],
            vec![(fin(5), 2)],
            vec![1; 5],
        )
        .unwrap();
        let g = raw.to_canonical().unwrap();
        assert_eq!(g.d(), 2);
        assert_eq!(g.code().unwrap(), raw_code(&raw));
    }

    #[test]
    fn general_position() {
        let raw = RawLevelStructure::new(
            f7(),
            vec![fin(3), ProjPoint::Infinity, fin(6), fin(1), fin(0), fin(2)],
            vec![(fin(4), 3), (fin(5), -1)],
            vec![1, 2, 3, 4, 5, 6],
        )
        .unwrap();
        let g = raw.to_canonical().unwrap();
        assert_eq!(g.d(), 2);
        assert_eq!(g.code().unwrap(), raw_code(&raw));
    }

    #[test]
    fn order_matters() {
        let pts = vec![ProjPoint::Infinity, fin(0), fin(1), fin(2), fin(3)];
        let a = RawLevelStructure::new(f7(), pts.clone(), vec![(fin(5), 2)], vec![1; 5]).unwrap();
        let mut swapped = pts;
        swapped.swap(0, 1);
        let b = RawLevelStructure::new(f7(), swapped, vec![(fin(5), 2)], vec![1; 5]).unwrap();
        assert_ne!(a.to_canonical().unwrap(), b.to_canonical().unwrap());
    }

    #[test]
    fn equivalent_raw_structures() {
        // scaling every multiplier by 3 is absorbed by the normalization
        let pts = vec![fin(4), fin(0), fin(1), fin(2), fin(6)];
        let a = RawLevelStructure::new(f7(), pts.clone(), vec![(fin(5), 2)], vec![1, 2, 3, 4, 5])
            .unwrap();
        let b = RawLevelStructure::new(f7(), pts, vec![(fin(5), 2)], vec![3, 6, 2, 5, 1]).unwrap();
        let (ga, gb) = (a.to_canonical().unwrap(), b.to_canonical().unwrap());
        assert!(ga.is_equivalent(&gb).unwrap());
        assert_eq!(ga.code().unwrap(), raw_code(&a));
    }

    #[test]
    fn rejects_bad_configurations() {
        let err = RawLevelStructure::new(f7(), vec![fin(1), fin(2), fin(1)], vec![], vec![1; 3])
            .unwrap_err();
        assert_eq!(err, LevelError::DegenerateConfiguration(1, 3));
        let err = RawLevelStructure::new(f7(), vec![fin(1), fin(2), fin(3)], vec![(fin(2), 1)], vec![1; 3])
            .unwrap_err();
        assert_eq!(err, LevelError::DivisorMeetsPoints(2));
    }
}
