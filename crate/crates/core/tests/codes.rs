use goppa_core::audit::{all_subspaces, delsarte_holds};
use goppa_core::code::LinearCode;
use goppa_core::field::{Field, FiniteField};
use goppa_core::linalg::Matrix;
use std::collections::HashSet;

/// Every codeword, by brute force over all messages.
fn words(c: &LinearCode<FiniteField>) -> HashSet<Vec<u32>> {
    c.codewords().into_iter().collect()
}

fn span(f: &FiniteField, n: usize, vectors: &HashSet<Vec<u32>>) -> LinearCode<FiniteField> {
    let rows: Vec<Vec<u32>> = vectors.iter().cloned().collect();
    if rows.is_empty() {
        return LinearCode::zero(f.clone(), n);
    }
    LinearCode::from_generator(Matrix::from_rows(f.clone(), n, rows).unwrap())
}

#[test]
fn double_dual_is_identity_over_small_fields() {
    for q in [2u64, 3] {
        let f = FiniteField::with_order(q).unwrap();
        let n_max = if q == 2 { 4 } else { 3 };
        for n in 1..=n_max {
            for k in 0..=n {
                for c in all_subspaces(&f, n, k) {
                    let d = c.dual();
                    assert_eq!(d.k(), n - k);
                    assert_eq!(d.dual(), c);
                    for u in words(&c) {
                        for v in words(&d) {
                            let dot = f.sum(u.iter().zip(&v).map(|(a, b)| f.mul(a, b)).collect::<Vec<_>>().iter());
                            assert!(f.is_zero(&dot));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn subfield_subcode_and_trace_code_match_brute_force() {
    let f = FiniteField::with_order(4).unwrap();
    let p = f.prime_subfield().clone();
    for n in 1..=3 {
        for k in 0..=n {
            for c in all_subspaces(&f, n, k) {
                let all = words(&c);
                let inside: HashSet<Vec<u32>> =
                    all.iter().filter(|w| w.iter().all(|&x| f.in_prime_subfield(x))).cloned().collect();
                assert_eq!(c.subfield_subcode(), span(&p, n, &inside));
                let traces: HashSet<Vec<u32>> = all.iter().map(|w| w.iter().map(|&x| f.trace(x)).collect()).collect();
                assert_eq!(c.trace_code(), span(&p, n, &traces));
            }
        }
    }
}

#[test]
fn delsarte_exhaustive_over_f4_and_f8() {
    for q in [4u64, 8] {
        let f = FiniteField::with_order(q).unwrap();
        let n_max = if q == 4 { 3 } else { 2 };
        for n in 1..=n_max {
            for k in 0..=n {
                for c in all_subspaces(&f, n, k) {
                    assert!(delsarte_holds(&c), "{:?}", c.generator());
                }
            }
        }
    }
}

#[test]
fn delsarte_edge_cases() {
    let f = FiniteField::with_order(9).unwrap();
    let zero = LinearCode::zero(f.clone(), 4);
    let full = LinearCode::full(f.clone(), 4);
    assert_eq!(zero.dual().trace_code().k(), 4);
    assert_eq!(full.subfield_subcode().dual().k(), 0);
    assert!(delsarte_holds(&zero) && delsarte_holds(&full));
}
