use goppa_core::audit::{delsarte_audit, image_census, injectivity_audit, selfdual_census, Enumerator};
use goppa_core::field::FiniteField;
use goppa_core::moduli::gaussian_binomial;
use num_bigint::BigUint;

fn field(q: u64) -> FiniteField {
    FiniteField::with_order(q).unwrap()
}

fn falling(q: u64, n: usize) -> u64 {
    (2..n as u64 - 1).map(|i| q - i).product::<u64>() * (q - 1).pow(n as u32 - 1)
}

#[test]
fn enumeration_matches_closed_count() {
    for q in [4u64, 5, 7, 8, 9] {
        for n in 3..=5 {
            if q + 1 < n as u64 {
                continue;
            }
            let e = Enumerator::new(&field(q), n, 1).unwrap();
            assert_eq!(e.count(), falling(q, n));
            assert_eq!(e.iter().count() as u64, e.count());
        }
    }
}

#[test]
fn injective_in_the_predicted_range() {
    let runs: &[(u64, usize, i64)] = &[
        (7, 5, 2),
        (7, 6, 2),
        (7, 7, 2),
        (7, 7, 3),
        (8, 5, 2),
        (8, 6, 2),
        (9, 5, 2),
        (11, 5, 2),
    ];
    for &(q, n, d) in runs {
        let r = injectivity_audit(&field(q), n, d, 0).unwrap();
        assert!(!r.exploratory);
        assert_eq!(r.colliding_structures, 0, "F_{q} n = {n} d = {d}");
        assert_eq!(r.distinct_codes, r.structures_enumerated);
    }
}

#[test]
fn census_density_is_a_proper_fraction() {
    for (q, n, d) in [(7u64, 5usize, 1i64), (8, 4, 1), (7, 4, 3), (5, 5, 2)] {
        let r = image_census(&field(q), n, d, 0).unwrap();
        assert_eq!(r.distinct_codes + r.colliding_structures, r.structures_enumerated);
        let size: BigUint = r.grassmannian_size.parse().unwrap();
        assert_eq!(size, gaussian_binomial(n as u32, d as u32 + 1, q));
        assert!(BigUint::from(r.distinct_codes) <= size);
    }
}

#[test]
fn self_dual_counts_form_torsors() {
    for (q, n, d) in [(5u64, 4usize, 1i64), (7, 4, 1), (9, 4, 1), (11, 4, 1), (13, 4, 1), (7, 6, 2)] {
        let r = selfdual_census(&field(q), n, d, 0).unwrap();
        assert!(r.counts_ok, "F_{q} n = {n}");
        assert_eq!(r.direct_check_failures, 0);
        assert!(r.hits.iter().all(|h| h["n"] == 2 * (h["d"].as_i64().unwrap() + 1)));
    }
    let r = selfdual_census(&field(7), 4, 1, 0).unwrap();
    assert!(r.configurations.iter().any(|c| c.self_dual == 0));
}

#[test]
fn delsarte_sampled() {
    for q in [8u64, 9, 25] {
        let r = delsarte_audit(&field(q), 5, false, 500, 7, 0).unwrap();
        assert_eq!(r.codes_checked, 500);
        assert!(r.is_clean());
    }
}
