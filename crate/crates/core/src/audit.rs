//! Exhaustive experiments over all canonical level structures of a small
//! finite field.
//!
//! Structures are enumerated by point configuration (ordered tuples
//! `α_4, .., α_n` of distinct elements outside `{0, 1}`, lexicographic in
//! element order), then by scalar tuple `l_1, .., l_{n-1}` (nonzero elements,
//! lexicographic, `l_1` most significant). Work is split by configuration and
//! merged in configuration order, so reports do not depend on `jobs`.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::code::{CodeKey, LinearCode};
use crate::field::{Field, FieldDescriptor, FiniteField};
use crate::level::{LevelError, LevelStructure, Points};
use crate::linalg::Matrix;
use crate::moduli::gaussian_binomial;
use crate::wire;

/// Collision pairs kept in a report; the count is always exact.
pub const COLLISION_SAMPLE: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("F_{q} is too small for n = {n} (need q >= n - 1)")]
    FieldTooSmall { q: u64, n: usize },
    #[error("cannot enumerate an infinite field")]
    InfiniteField,
    #[error("parameter violation: {0}")]
    ParameterViolation(String),
    #[error("operation `{0}` needs a proper extension field")]
    UnsupportedField(&'static str),
    #[error(transparent)]
    Level(#[from] LevelError),
}

/// The finite set of canonical structures of type `(n, d)` over `F_q`.
#[derive(Clone, Debug)]
pub struct Enumerator {
    field: FiniteField,
    n: usize,
    d: i64,
    configurations: Vec<Vec<u32>>,
    per_configuration: u64,
}

impl Enumerator {
    pub fn new(field: &FiniteField, n: usize, d: i64) -> Result<Self, AuditError> {
        let q = field.order() as u64;
        if n < 3 {
            return Err(LevelError::TooFewPoints(n).into());
        }
        if q + 1 < n as u64 {
            return Err(AuditError::FieldTooSmall { q, n });
        }
        if !(0..n as i64).contains(&d) {
            return Err(AuditError::ParameterViolation(format!("need 0 <= d < n, got d = {d}, n = {n}")));
        }
        let candidates: Vec<u32> = (2..field.order()).collect();
        let mut configurations = Vec::new();
        let mut current = Vec::with_capacity(n - 3);
        ordered_tuples(&candidates, n - 3, &mut current, &mut configurations);
        Ok(Self {
            field: field.clone(),
            n,
            d,
            configurations,
            per_configuration: (q - 1).pow(n as u32 - 1),
        })
    }

    pub fn from_descriptor(field: &FieldDescriptor, n: usize, d: i64) -> Result<Self, AuditError> {
        let f = field.as_finite().ok_or(AuditError::InfiniteField)?;
        Self::new(f, n, d)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// `(q-2)(q-3)..(q-n+2) (q-1)^{n-1}`.
    pub fn count(&self) -> u64 {
        self.configurations.len() as u64 * self.per_configuration
    }

    pub fn configurations(&self) -> &[Vec<u32>] {
        &self.configurations
    }

    pub fn per_configuration(&self) -> u64 {
        self.per_configuration
    }

    pub fn points(&self, configuration: usize) -> Arc<Points<FiniteField>> {
        let alphas = self.configurations[configuration].clone();
        Arc::new(Points::new(self.field.clone(), self.n, alphas).expect("enumerated points are valid"))
    }

    /// The `index`-th scalar tuple of a configuration.
    pub fn scalars_at(&self, mut index: u64) -> Vec<u32> {
        let base = self.field.order() as u64 - 1;
        let mut out = vec![0; self.n - 1];
        for slot in out.iter_mut().rev() {
            *slot = (index % base) as u32 + 1;
            index /= base;
        }
        out
    }

    pub fn structure_at(&self, index: u64) -> LevelStructure<FiniteField> {
        let configuration = (index / self.per_configuration) as usize;
        let points = self.points(configuration);
        LevelStructure::on(&points, self.d, self.scalars_at(index % self.per_configuration))
            .expect("enumerated scalars are valid")
    }

    /// Structures of one configuration in enumeration order.
    pub fn structures_for(
        &self,
        configuration: usize,
    ) -> impl Iterator<Item = LevelStructure<FiniteField>> + '_ {
        let points = self.points(configuration);
        let q = self.field.order();
        let mut scalars = vec![1u32; self.n - 1];
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let g = LevelStructure::on(&points, self.d, scalars.clone()).expect("valid");
            // odometer with the last slot fastest
            done = true;
            for slot in scalars.iter_mut().rev() {
                if *slot + 1 < q {
                    *slot += 1;
                    done = false;
                    break;
                }
                *slot = 1;
            }
            Some(g)
        })
    }

    /// Every structure in enumeration order, streamed.
    pub fn iter(&self) -> impl Iterator<Item = LevelStructure<FiniteField>> + '_ {
        (0..self.configurations.len()).flat_map(move |c| self.structures_for(c))
    }
}

fn ordered_tuples(candidates: &[u32], len: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if current.len() == len {
        out.push(current.clone());
        return;
    }
    for &c in candidates {
        if !current.contains(&c) {
            current.push(c);
            ordered_tuples(candidates, len, current, out);
            current.pop();
        }
    }
}

/// Streams all structures of type `(n, d)` over `field`.
pub fn enumerate_structures(
    field: &FiniteField,
    n: usize,
    d: i64,
) -> Result<impl Iterator<Item = LevelStructure<FiniteField>>, AuditError> {
    let e = Enumerator::new(field, n, d)?;
    let configurations = e.configurations.len();
    Ok((0..configurations).flat_map(move |c| e.structures_for(c).collect::<Vec<_>>()))
}

/// Runs `op` on a pool of `jobs` threads (`0` means rayon's default).
pub fn with_jobs<R: Send>(jobs: usize, op: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(op),
        Err(_) => op(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureRecord {
    pub index: u64,
    pub structure: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct CollisionPair {
    pub first: StructureRecord,
    pub second: StructureRecord,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub audit: &'static str,
    pub field: String,
    pub n: usize,
    pub d: i64,
    pub structures_enumerated: u64,
    pub distinct_codes: u64,
    /// `Σ (multiplicity - 1)` over image codes.
    pub colliding_structures: u64,
    /// The pairs `(first occurrence, later occurrence)` with the smallest
    /// later index, at most [`COLLISION_SAMPLE`] of them.
    pub collisions: Vec<CollisionPair>,
    pub collisions_truncated: bool,
    pub grassmannian_size: String,
    /// `distinct_codes / grassmannian_size`, reduced.
    pub image_density: String,
    /// Outside `n/2 > d > 1`, where no injectivity is predicted.
    pub exploratory: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.colliding_structures == 0
    }
}

struct Partial {
    first: HashMap<CodeKey, u64>,
    /// `(later, key)` for repeats inside the partition, capped.
    repeats: Vec<(u64, CodeKey)>,
    repeat_count: u64,
}

fn map_configuration(e: &Enumerator, configuration: usize) -> Partial {
    let mut first = HashMap::with_capacity(e.per_configuration as usize);
    let mut repeats = Vec::new();
    let mut repeat_count = 0;
    let base = configuration as u64 * e.per_configuration;
    for (offset, g) in e.structures_for(configuration).enumerate() {
        let index = base + offset as u64;
        let key = g.code().expect("0 <= d < n").key();
        match first.entry(key) {
            std::collections::hash_map::Entry::Vacant(slot) => {
                slot.insert(index);
            }
            std::collections::hash_map::Entry::Occupied(slot) => {
                repeat_count += 1;
                if repeats.len() < COLLISION_SAMPLE {
                    repeats.push((index, slot.key().clone()));
                }
            }
        }
    }
    Partial { first, repeats, repeat_count }
}

/// Maps every structure to its code and tallies the image.
fn goppa_image(e: &Enumerator, jobs: usize, audit: &'static str) -> AuditReport {
    let start = Instant::now();
    let mut global: HashMap<CodeKey, u64> = HashMap::new();
    let mut colliding = 0u64;
    let mut sample: BTreeSet<(u64, u64)> = BTreeSet::new();
    let keep = |sample: &mut BTreeSet<(u64, u64)>, pair: (u64, u64)| {
        sample.insert(pair);
        if sample.len() > COLLISION_SAMPLE {
            sample.pop_last();
        }
    };
    let configurations = e.configurations.len();
    let chunk = rayon::current_num_threads().max(1) * 2;
    with_jobs(jobs, || {
        let chunk = chunk.max(rayon::current_num_threads() * 2);
        for lo in (0..configurations).step_by(chunk) {
            let hi = (lo + chunk).min(configurations);
            let partials: Vec<Partial> =
                (lo..hi).into_par_iter().map(|c| map_configuration(e, c)).collect();
            for part in partials {
                colliding += part.repeat_count;
                for (later, key) in part.repeats {
                    let first = global.get(&key).copied().unwrap_or(part.first[&key]);
                    keep(&mut sample, (later, first));
                }
                for (key, index) in part.first {
                    match global.entry(key) {
                        std::collections::hash_map::Entry::Vacant(slot) => {
                            slot.insert(index);
                        }
                        std::collections::hash_map::Entry::Occupied(slot) => {
                            colliding += 1;
                            keep(&mut sample, (index, *slot.get()));
                        }
                    }
                }
            }
        }
    });
    let distinct = global.len() as u64;
    let k = (e.d + 1) as u32;
    let grassmannian = gaussian_binomial(e.n as u32, k, e.field.order() as u64);
    let density = BigRational::new(BigInt::from(distinct), BigInt::from(grassmannian.clone()));
    let record = |index: u64| StructureRecord { index, structure: wire::level_to_json(&e.structure_at(index)) };
    let collisions = sample
        .iter()
        .map(|&(later, first)| CollisionPair { first: record(first), second: record(later) })
        .collect();
    AuditReport {
        audit,
        field: e.field.spec(),
        n: e.n,
        d: e.d,
        structures_enumerated: e.count(),
        distinct_codes: distinct,
        colliding_structures: colliding,
        collisions,
        collisions_truncated: colliding as usize > COLLISION_SAMPLE,
        grassmannian_size: grassmannian.to_string(),
        image_density: density.to_string(),
        exploratory: !(e.n as i64 > 2 * e.d && e.d > 1),
        elapsed: start.elapsed(),
    }
}

/// Checks that distinct structures give distinct codes.
pub fn injectivity_audit(field: &FiniteField, n: usize, d: i64, jobs: usize) -> Result<AuditReport, AuditError> {
    let e = Enumerator::new(field, n, d)?;
    Ok(goppa_image(&e, jobs, "injectivity"))
}

/// Counts the image of the Goppa map against the Grassmannian.
pub fn image_census(field: &FiniteField, n: usize, d: i64, jobs: usize) -> Result<AuditReport, AuditError> {
    let e = Enumerator::new(field, n, d)?;
    Ok(goppa_image(&e, jobs, "census"))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigurationCount {
    pub alphas: Value,
    pub self_dual: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfDualReport {
    pub field: String,
    pub n: usize,
    pub d: i64,
    pub structures_enumerated: u64,
    pub configurations: Vec<ConfigurationCount>,
    /// `2^{n-1}`
    pub torsor_size: u64,
    /// Every count is `0` or `torsor_size`.
    pub counts_ok: bool,
    /// Hits whose code failed `C = C^⊥`, or self-dual codes the criterion
    /// missed.
    pub direct_check_failures: u64,
    pub hits: Vec<Value>,
    pub hits_truncated: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SelfDualReport {
    pub fn is_clean(&self) -> bool {
        self.counts_ok && self.direct_check_failures == 0
    }
}

/// Hits listed in a self-dual report.
pub const SELFDUAL_SAMPLE: usize = 256;

/// Scans every structure with `n = 2(d + 1)` over an odd field, comparing
/// the squaring criterion with the direct test `C = C^⊥`.
pub fn selfdual_census(field: &FiniteField, n: usize, d: i64, jobs: usize) -> Result<SelfDualReport, AuditError> {
    if field.characteristic() == 2 {
        return Err(AuditError::ParameterViolation("self-dual census needs odd characteristic".into()));
    }
    if n as i64 != 2 * (d + 1) {
        return Err(AuditError::ParameterViolation(format!("need n = 2(d + 1), got n = {n}, d = {d}")));
    }
    let start = Instant::now();
    let e = Enumerator::new(field, n, d)?;
    let per_config: Vec<(u64, u64, Vec<LevelStructure<FiniteField>>)> = with_jobs(jobs, || {
        (0..e.configurations.len())
            .into_par_iter()
            .map(|c| {
                let mut hits = Vec::new();
                let mut failures = 0;
                for g in e.structures_for(c) {
                    let criterion = g.is_self_dual();
                    let code = g.code().expect("0 <= d < n");
                    if criterion != (code == code.dual()) {
                        failures += 1;
                    }
                    if criterion {
                        hits.push(g);
                    }
                }
                (hits.len() as u64, failures, hits)
            })
            .collect()
    });
    let torsor_size = 1u64 << (n - 1);
    let mut hits = Vec::new();
    let mut total_hits = 0;
    let mut failures = 0;
    let mut configurations = Vec::new();
    for (c, (count, fails, found)) in per_config.into_iter().enumerate() {
        failures += fails;
        total_hits += count;
        configurations.push(ConfigurationCount {
            alphas: wire::elems_to_json(field, &e.configurations[c]),
            self_dual: count,
        });
        for g in found {
            if hits.len() < SELFDUAL_SAMPLE {
                hits.push(wire::level_to_json(&g));
            }
        }
    }
    Ok(SelfDualReport {
        field: field.spec(),
        n,
        d,
        structures_enumerated: e.count(),
        counts_ok: configurations.iter().all(|c| c.self_dual == 0 || c.self_dual == torsor_size),
        configurations,
        torsor_size,
        direct_check_failures: failures,
        hits,
        hits_truncated: total_hits as usize > SELFDUAL_SAMPLE,
        elapsed: start.elapsed(),
    })
}

/// Every subspace of `F^n` of dimension `k`, as canonical codes, by
/// enumerating reduced row echelon forms.
pub fn all_subspaces(field: &FiniteField, n: usize, k: usize) -> Vec<LinearCode<FiniteField>> {
    use itertools::Itertools;
    let q = field.order();
    let mut out = Vec::new();
    for pivots in (0..n).combinations(k) {
        // free slots: row i, column j > pivots[i], j not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let pivots = &pivots;
                (pivots[i] + 1..n).filter(move |j| !pivots.contains(j)).map(move |j| (i, j))
            })
            .collect();
        let total = (q as u64).pow(free.len() as u32);
        for mut idx in 0..total {
            let mut m = Matrix::zeros(field.clone(), k, n);
            for (i, &p) in pivots.iter().enumerate() {
                m.set(i, p, 1);
            }
            for &(i, j) in &free {
                m.set(i, j, (idx % q as u64) as u32);
                idx /= q as u64;
            }
            out.push(LinearCode::from_generator(m));
        }
    }
    out
}

/// `Tr(C^⊥) = (C ∩ F_p^n)^⊥`.
pub fn delsarte_holds(code: &LinearCode<FiniteField>) -> bool {
    code.dual().trace_code() == code.subfield_subcode().dual()
}

#[derive(Debug, Clone, Serialize)]
pub struct DelsarteReport {
    pub field: String,
    pub n_max: usize,
    pub exhaustive: bool,
    pub seed: u64,
    pub codes_checked: u64,
    pub failures: u64,
    pub first_counterexample: Option<Value>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl DelsarteReport {
    pub fn is_clean(&self) -> bool {
        self.failures == 0
    }
}

/// Checks the trace/subfield duality on every code of length `1..=n_max`
/// (when `exhaustive`) followed by `samples` random codes of random
/// dimension drawn from a ChaCha stream seeded with `seed`.
pub fn delsarte_audit(
    field: &FiniteField,
    n_max: usize,
    exhaustive: bool,
    samples: u64,
    seed: u64,
    jobs: usize,
) -> Result<DelsarteReport, AuditError> {
    if field.is_prime_field() {
        return Err(AuditError::UnsupportedField("delsarte"));
    }
    if n_max == 0 {
        return Err(AuditError::ParameterViolation("n_max must be positive".into()));
    }
    let start = Instant::now();
    let mut codes: Vec<LinearCode<FiniteField>> = Vec::new();
    if exhaustive {
        for n in 1..=n_max {
            for k in 0..=n {
                codes.extend(all_subspaces(field, n, k));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = field.order();
    for _ in 0..samples {
        let n = rng.gen_range(1..=n_max);
        let k = rng.gen_range(0..=n);
        let rows = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..q)).collect()).collect();
        codes.push(LinearCode::from_generator(Matrix::from_rows(field.clone(), n, rows).expect("shape")));
    }
    let verdicts: Vec<bool> = with_jobs(jobs, || codes.par_iter().map(delsarte_holds).collect());
    let failures = verdicts.iter().filter(|ok| !**ok).count() as u64;
    let first_counterexample = verdicts
        .iter()
        .position(|ok| !ok)
        .map(|i| wire::code_to_json(&codes[i]));
    Ok(DelsarteReport {
        field: field.spec(),
        n_max,
        exhaustive,
        seed,
        codes_checked: codes.len() as u64,
        failures,
        first_counterexample,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn f7() -> FiniteField {
        FiniteField::prime(7).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        let e = Enumerator::new(&f7(), 5, 2).unwrap();
        assert_eq!(e.count(), 5 * 4 * 6u64.pow(4));
        assert_eq!(e.iter().count() as u64, e.count());
        let f5 = FiniteField::prime(5).unwrap();
        assert_eq!(Enumerator::new(&f5, 7, 1).unwrap_err(), AuditError::FieldTooSmall { q: 5, n: 7 });
        let f4 = FiniteField::with_order(4).unwrap();
        assert_eq!(enumerate_structures(&f4, 3, 1).unwrap().count(), 9);
    }

    #[test]
    fn enumeration_order_and_indexing() {
        let e = Enumerator::new(&f7(), 4, 1).unwrap();
        let all: Vec<_> = e.iter().collect();
        let distinct: HashSet<Vec<u32>> =
            all.iter().map(|g| [g.alphas(), g.scalars()].concat()).collect();
        assert_eq!(distinct.len(), all.len());
        assert_eq!(all[0].alphas(), &[2]);
        assert_eq!(all[0].scalars(), &[1, 1, 1]);
        assert_eq!(all[1].scalars(), &[1, 1, 2]);
        for i in [0u64, 1, 37, 215, 216, 1079] {
            assert_eq!(e.structure_at(i), all[i as usize]);
        }
        let fd = FieldDescriptor::parse("ratfun(2)").unwrap();
        assert_eq!(Enumerator::from_descriptor(&fd, 4, 1).unwrap_err(), AuditError::InfiniteField);
    }

    #[test]
    fn injectivity_small() {
        let r = injectivity_audit(&f7(), 5, 2, 1).unwrap();
        assert_eq!(r.structures_enumerated, 25_920);
        assert!(r.is_clean());
        assert_eq!(r.distinct_codes, 25_920);
        assert_eq!(r.grassmannian_size, "140050");
        assert!(!r.exploratory);
    }

    #[test]
    fn degree_zero_collides_across_configurations() {
        let r = injectivity_audit(&f7(), 5, 0, 1).unwrap();
        // the code is span(l) for every choice of alphas
        assert_eq!(r.distinct_codes, 6u64.pow(4));
        assert_eq!(r.distinct_codes + r.colliding_structures, r.structures_enumerated);
        assert!(r.exploratory);
        let pair = &r.collisions[0];
        assert_eq!(pair.first.structure["scalars"], pair.second.structure["scalars"]);
        assert_ne!(pair.first.structure["alphas"], pair.second.structure["alphas"]);
        assert_eq!(r.collisions.len(), COLLISION_SAMPLE);
    }

    #[test]
    fn reports_do_not_depend_on_jobs() {
        let a = image_census(&f7(), 5, 1, 1).unwrap();
        let b = image_census(&f7(), 5, 1, 3).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn census_top_degree() {
        let r = image_census(&f7(), 4, 3, 1).unwrap();
        assert_eq!(r.distinct_codes, 1);
        assert_eq!(r.image_density, "1");
    }

    #[test]
    fn self_dual_census_f7() {
        let r = selfdual_census(&f7(), 4, 1, 1).unwrap();
        assert!(r.is_clean());
        assert_eq!(r.configurations.len(), 5);
        let target = serde_json::json!([[1], [3], [2]]);
        assert!(r.hits.iter().any(|h| h["alphas"] == serde_json::json!([[3]]) && h["scalars"] == target));
        assert!(r.configurations.iter().any(|c| c.self_dual == 8));
        assert!(selfdual_census(&f7(), 5, 1, 1).is_err());
    }

    #[test]
    fn subspace_enumeration_matches_gaussian_binomials() {
        let f4 = FiniteField::with_order(4).unwrap();
        for n in 1..=3 {
            for k in 0..=n {
                let codes = all_subspaces(&f4, n, k);
                let distinct: HashSet<_> = codes.iter().map(|c| c.key()).collect();
                assert_eq!(distinct.len(), codes.len());
                assert_eq!(
                    num_bigint::BigUint::from(codes.len()),
                    gaussian_binomial(n as u32, k as u32, 4)
                );
            }
        }
    }

    #[test]
    fn delsarte_small() {
        let f4 = FiniteField::with_order(4).unwrap();
        let r = delsarte_audit(&f4, 3, true, 50, 0, 1).unwrap();
        assert!(r.is_clean());
        assert!(delsarte_audit(&f7(), 3, true, 0, 0, 1).is_err());
    }
}
