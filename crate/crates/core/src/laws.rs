//! Partition laws `p` and increment laws `q`, the forward map
//! `q(d) = sum_b p(b) r(d; b)`, and its inversion by a triangular solve over
//! `S_{n,k}` in decreasing dictionary order.
//!
//! Both law tables are complete: they hold a value for every one of the
//! `2^(n-1)` compositions of `n`. Sparse inputs are rejected at construction.

use std::collections::BTreeMap;

use num::{BigInt, One, Signed, Zero};
use rand::Rng;

use crate::coefficients::r_via_formula;
use crate::combinatorics::{
    all_compositions, count_partitions_with_sizes, enumerate_compositions, gap_decode,
    Composition,
};
use crate::{par, Count, Error, Rational};

pub(crate) fn count_to_rational(c: &Count) -> Rational {
    Rational::from_integer(BigInt::from(c.clone()))
}

fn check_complete(
    n: usize,
    table: &BTreeMap<Composition, Rational>,
    what: &str,
) -> Result<(), Error> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    for b in table.keys() {
        if b.total() != n {
            return Err(Error::domain(format!(
                "{what}: composition {b} does not sum to n={n}"
            )));
        }
    }
    let expected = 1usize << (n - 1);
    if table.len() != expected {
        let missing = all_compositions(n)
            .into_iter()
            .find(|c| !table.contains_key(c));
        return Err(Error::IncompleteLaw(format!(
            "{what}: {} of {expected} compositions present{}",
            table.len(),
            missing
                .map(|c| format!(", first missing {c}"))
                .unwrap_or_default()
        )));
    }
    Ok(())
}

/// Outcome of a law validity check.
#[derive(Clone, Debug)]
pub struct LawReport {
    pub valid: bool,
    pub issues: Vec<String>,
}

/// The law of a partially exchangeable partition: `p(b)` is the probability
/// of each single partition whose block sizes in order of appearance are `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionLaw {
    n: usize,
    table: BTreeMap<Composition, Rational>,
}

impl PartitionLaw {
    pub fn new(n: usize, table: BTreeMap<Composition, Rational>) -> Result<Self, Error> {
        check_complete(n, &table, "partition law")?;
        Ok(PartitionLaw { n, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, b: &Composition) -> &Rational {
        &self.table[b]
    }

    pub fn table(&self) -> &BTreeMap<Composition, Rational> {
        &self.table
    }

    /// Non-negativity plus the exact weighted mass condition
    /// `sum_b p(b) * #{partitions with sizes b} = 1`.
    pub fn validate(&self) -> LawReport {
        let mut issues = Vec::new();
        let mut mass = Rational::zero();
        for (b, v) in &self.table {
            if v.is_negative() {
                issues.push(format!("negative probability at {b}: {v}"));
            }
            mass += v * count_to_rational(&count_partitions_with_sizes(b));
        }
        if !mass.is_one() {
            issues.push(format!("weighted mass is {mass}, expected 1"));
        }
        LawReport {
            valid: issues.is_empty(),
            issues,
        }
    }

    /// True iff `p` is symmetric: reordering a composition's parts never
    /// changes its probability.
    pub fn is_exchangeable(&self) -> bool {
        let mut by_multiset: BTreeMap<Vec<usize>, &Rational> = BTreeMap::new();
        for (b, v) in &self.table {
            match by_multiset.get(&b.sorted_desc()) {
                Some(&seen) if seen != v => return false,
                Some(_) => {}
                None => {
                    by_multiset.insert(b.sorted_desc(), v);
                }
            }
        }
        true
    }
}

/// The law of the increments via their gap encoding: `q(d)` is the
/// probability that the gap composition equals `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncrementLaw {
    n: usize,
    table: BTreeMap<Composition, Rational>,
}

impl IncrementLaw {
    pub fn new(n: usize, table: BTreeMap<Composition, Rational>) -> Result<Self, Error> {
        check_complete(n, &table, "increment law")?;
        Ok(IncrementLaw { n, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, d: &Composition) -> &Rational {
        &self.table[d]
    }

    pub fn table(&self) -> &BTreeMap<Composition, Rational> {
        &self.table
    }

    /// Non-negativity plus plain sum-to-one (each gap composition is a
    /// single event).
    pub fn validate(&self) -> LawReport {
        let mut issues = Vec::new();
        let mut mass = Rational::zero();
        for (d, v) in &self.table {
            if v.is_negative() {
                issues.push(format!("negative probability at {d}: {v}"));
            }
            mass += v;
        }
        if !mass.is_one() {
            issues.push(format!("total mass is {mass}, expected 1"));
        }
        LawReport {
            valid: issues.is_empty(),
            issues,
        }
    }

    /// Marginals `u_i = P(X_i = 1)`; `u_1 = 1` for any valid law.
    pub fn marginals(&self) -> Vec<Rational> {
        let mut u = vec![Rational::zero(); self.n];
        for (d, v) in &self.table {
            for (i, &bit) in gap_decode(d).bits().iter().enumerate() {
                if bit {
                    u[i] += v;
                }
            }
        }
        u
    }

    /// True iff `q` is the product law of its own marginals:
    /// `q(d) = prod_{i>=2} (u_i or 1-u_i)` exactly, for every `d`.
    pub fn is_independent_increments(&self) -> bool {
        let u = self.marginals();
        self.table.iter().all(|(d, v)| {
            let product: Rational = gap_decode(d)
                .bits()
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &bit)| {
                    if bit {
                        u[i].clone()
                    } else {
                        Rational::one() - &u[i]
                    }
                })
                .product();
            product == *v
        })
    }
}

/// Per-`k` table of coefficients `r(d; b)` with `S_{n,k}` listed in
/// decreasing dictionary order. Row index is `d`, column index is `b`.
pub struct RTable {
    pub compositions: Vec<Composition>,
    pub values: Vec<Vec<Count>>,
}

// Forward and inverse maps share the same tables across calls; they are
// pure in (n, k), so cache them process-wide.
fn r_table_formula(n: usize, k: usize) -> Result<std::sync::Arc<RTable>, Error> {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<RTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&(n, k)) {
        return Ok(Arc::clone(t));
    }
    let comps = enumerate_compositions(n, k)?;
    let values = par::map(&comps, |d| {
        comps
            .iter()
            .map(|b| r_via_formula(d, b).expect("same S_{n,k}"))
            .collect()
    });
    let table = Arc::new(RTable {
        compositions: comps,
        values,
    });
    let mut guard = cache.lock().unwrap();
    Ok(Arc::clone(guard.entry((n, k)).or_insert(table)))
}

/// Push a partition law forward to the law of its increments.
pub fn forward_map(p: &PartitionLaw) -> IncrementLaw {
    let n = p.n();
    let mut table = BTreeMap::new();
    for k in 1..=n {
        let rt = r_table_formula(n, k).expect("1 <= k <= n");
        let qs = par::map_indices(rt.compositions.len(), |i| {
            rt.compositions
                .iter()
                .zip(&rt.values[i])
                .map(|(b, r)| p.get(b) * count_to_rational(r))
                .sum::<Rational>()
        });
        for (d, q) in rt.compositions.iter().cloned().zip(qs) {
            table.insert(d, q);
        }
    }
    IncrementLaw { n, table }
}

/// Result of inverting an increment law. `feasible` is false when the
/// recovered table is not a valid partition law, i.e. `q` was not realizable
/// by any partially exchangeable partition.
#[derive(Clone, Debug)]
pub struct Inversion {
    pub law: PartitionLaw,
    pub feasible: bool,
    pub issues: Vec<String>,
}

/// Recover `p` from `q` by back-substitution. For each `k`, with `S_{n,k}`
/// in decreasing dictionary order `y_1 >_d y_2 >_d ...`, the system is upper
/// triangular with unit diagonal:
/// `p(y_i) = q(y_i) - sum_{j<i} p(y_j) r(y_i; y_j)`.
pub fn invert_map(q: &IncrementLaw) -> Inversion {
    let n = q.n();
    let mut table = BTreeMap::new();
    for k in 1..=n {
        let rt = r_table_formula(n, k).expect("1 <= k <= n");
        let m = rt.compositions.len();
        let mut p_vals: Vec<Rational> = Vec::with_capacity(m);
        for i in 0..m {
            debug_assert!(rt.values[i][i].is_one());
            let mut v = q.get(&rt.compositions[i]).clone();
            for j in 0..i {
                v -= &p_vals[j] * count_to_rational(&rt.values[i][j]);
            }
            p_vals.push(v);
        }
        for (b, v) in rt.compositions.iter().cloned().zip(p_vals) {
            table.insert(b, v);
        }
    }
    let law = PartitionLaw { n, table };
    let report = law.validate();
    Inversion {
        law,
        feasible: report.valid,
        issues: report.issues,
    }
}

// denominators stay small so the common denominator across thousands of
// draws (their lcm) stays bounded; lcm(1..=20) fits in 28 bits
fn random_positive_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let numer = rng.random_range(1..=1000u32);
    let denom = rng.random_range(1..=20u32);
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// A random valid partially exchangeable law: draw a positive weight per set
/// partition, normalize, then average the mass within each composition class.
pub fn random_partially_exchangeable_law<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<PartitionLaw, Error> {
    let mut mass: BTreeMap<Composition, Rational> = BTreeMap::new();
    let mut total = Rational::zero();
    for p in crate::combinatorics::enumerate_set_partitions(n)? {
        let w = random_positive_rational(rng);
        total += &w;
        *mass.entry(p.block_sizes()).or_insert_with(Rational::zero) += w;
    }
    let table = all_compositions(n)
        .into_iter()
        .map(|b| {
            let m = mass.remove(&b).unwrap_or_else(Rational::zero);
            let count = count_to_rational(&count_partitions_with_sizes(&b));
            let v = m / (&total * count);
            (b, v)
        })
        .collect();
    PartitionLaw::new(n, table)
}

/// A random valid exchangeable law: one positive weight per unordered
/// block-size multiset, shared by every ordering of it, then normalized.
pub fn random_exchangeable_law<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<PartitionLaw, Error> {
    let comps = all_compositions(n);
    let mut weights: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for b in &comps {
        weights
            .entry(b.sorted_desc())
            .or_insert_with(|| random_positive_rational(rng));
    }
    let total: Rational = comps
        .iter()
        .map(|b| {
            &weights[&b.sorted_desc()] * count_to_rational(&count_partitions_with_sizes(b))
        })
        .sum();
    let table = comps
        .into_iter()
        .map(|b| {
            let v = &weights[&b.sorted_desc()] / &total;
            (b, v)
        })
        .collect();
    PartitionLaw::new(n, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{enumerate_set_partitions, gap_encode};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn comp(parts: &[usize]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn crp1_n3() -> PartitionLaw {
        let table = BTreeMap::from([
            (comp(&[3]), rat(1, 3)),
            (comp(&[2, 1]), rat(1, 6)),
            (comp(&[1, 2]), rat(1, 6)),
            (comp(&[1, 1, 1]), rat(1, 6)),
        ]);
        PartitionLaw::new(3, table).unwrap()
    }

    fn single_block_law(n: usize) -> PartitionLaw {
        let table = all_compositions(n)
            .into_iter()
            .map(|b| {
                let v = if b.len() == 1 {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                (b, v)
            })
            .collect();
        PartitionLaw::new(n, table).unwrap()
    }

    #[test]
    fn uniform_law_is_valid() {
        let n = 4;
        let bell = count_to_rational(&crate::combinatorics::bell_number(n));
        let table = all_compositions(n)
            .into_iter()
            .map(|b| (b, Rational::one() / &bell))
            .collect();
        let law = PartitionLaw::new(n, table).unwrap();
        let report = law.validate();
        assert!(report.valid, "{:?}", report.issues);
        assert!(law.is_exchangeable());
    }

    #[test]
    fn crp1_n3_is_valid_and_exchangeable() {
        let law = crp1_n3();
        assert!(law.validate().valid);
        assert!(law.is_exchangeable());
    }

    #[test]
    fn negative_entry_reported_with_culprit() {
        let mut table: BTreeMap<_, _> = crp1_n3().table.clone();
        table.insert(comp(&[2, 1]), rat(-1, 6));
        table.insert(comp(&[1, 2]), rat(1, 2));
        let law = PartitionLaw::new(3, table).unwrap();
        let report = law.validate();
        assert!(!report.valid);
        assert!(report.issues.iter().any(|m| m.contains("(2,1)")), "{:?}", report.issues);
    }

    #[test]
    fn sparse_table_rejected() {
        let table = BTreeMap::from([(comp(&[3]), Rational::one())]);
        assert!(matches!(
            PartitionLaw::new(3, table),
            Err(Error::IncompleteLaw(_))
        ));
    }

    #[test]
    fn forward_map_crp1_n3() {
        let q = forward_map(&crp1_n3());
        assert_eq!(*q.get(&comp(&[3])), rat(1, 3));
        assert_eq!(*q.get(&comp(&[2, 1])), rat(1, 6));
        assert_eq!(*q.get(&comp(&[1, 2])), rat(1, 3));
        assert_eq!(*q.get(&comp(&[1, 1, 1])), rat(1, 6));
        assert!(q.validate().valid);
    }

    #[test]
    fn forward_map_single_block() {
        let q = forward_map(&single_block_law(5));
        assert_eq!(*q.get(&comp(&[5])), Rational::one());
        let total_nontrivial: Rational = q
            .table()
            .iter()
            .filter(|(d, _)| d.len() > 1)
            .map(|(_, v)| v.clone())
            .sum();
        assert!(total_nontrivial.is_zero());
    }

    #[test]
    fn forward_map_matches_bruteforce_oracle() {
        // oracle: sum p(block sizes) over all set partitions with gap encoding d
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=6 {
            let p = random_partially_exchangeable_law(n, &mut rng).unwrap();
            let q = forward_map(&p);
            let mut oracle: BTreeMap<Composition, Rational> = BTreeMap::new();
            for part in enumerate_set_partitions(n).unwrap() {
                let d = gap_encode(&part.increments());
                *oracle.entry(d).or_insert_with(Rational::zero) +=
                    p.get(&part.block_sizes());
            }
            for (d, v) in q.table() {
                assert_eq!(
                    oracle.get(d).cloned().unwrap_or_else(Rational::zero),
                    *v,
                    "n={n}, d={d}"
                );
            }
        }
    }

    #[test]
    fn invert_crp1_n3_by_hand() {
        let q = forward_map(&crp1_n3());
        let inv = invert_map(&q);
        assert!(inv.feasible);
        assert_eq!(*inv.law.get(&comp(&[2, 1])), rat(1, 6));
        assert_eq!(*inv.law.get(&comp(&[1, 2])), rat(1, 6));
        assert_eq!(inv.law, crp1_n3());
    }

    #[test]
    fn invert_single_block() {
        let q = forward_map(&single_block_law(4));
        let inv = invert_map(&q);
        assert!(inv.feasible);
        assert_eq!(inv.law, single_block_law(4));
    }

    #[test]
    fn roundtrip_random_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in 2..=6 {
            for _ in 0..20 {
                let p = random_partially_exchangeable_law(n, &mut rng).unwrap();
                let q = forward_map(&p);
                let inv = invert_map(&q);
                assert!(inv.feasible, "n={n}: {:?}", inv.issues);
                assert_eq!(inv.law, p, "n={n}");
                assert_eq!(
                    inv.law.is_exchangeable(),
                    p.is_exchangeable(),
                    "exchangeability preserved"
                );
            }
        }
    }

    #[test]
    fn infeasible_q_flagged() {
        // all mass on the all-singletons encoding except a bit moved to (2,1,...):
        // constructed so the triangular solve goes negative
        let n = 4;
        let mut table: BTreeMap<Composition, Rational> = all_compositions(n)
            .into_iter()
            .map(|d| (d, Rational::zero()))
            .collect();
        table.insert(comp(&[1, 2, 1]), rat(1, 2));
        table.insert(comp(&[2, 1, 1]), rat(1, 2));
        let q = IncrementLaw::new(n, table).unwrap();
        let inv = invert_map(&q);
        assert!(!inv.feasible);
        assert!(!inv.issues.is_empty());
    }

    #[test]
    fn marginals_crp1_n3() {
        let q = forward_map(&crp1_n3());
        assert_eq!(q.marginals(), vec![rat(1, 1), rat(1, 2), rat(1, 3)]);
    }

    #[test]
    fn marginals_degenerate_laws() {
        let n = 5;
        let q = forward_map(&single_block_law(n));
        let mut expected = vec![Rational::zero(); n];
        expected[0] = Rational::one();
        assert_eq!(q.marginals(), expected);

        let singletons = {
            let table = all_compositions(n)
                .into_iter()
                .map(|b| {
                    let v = if b.len() == n {
                        Rational::one()
                    } else {
                        Rational::zero()
                    };
                    (b, v)
                })
                .collect();
            PartitionLaw::new(n, table).unwrap()
        };
        assert_eq!(forward_map(&singletons).marginals(), vec![Rational::one(); n]);
    }

    #[test]
    fn independence_degenerate_single_block() {
        let q = forward_map(&single_block_law(4));
        assert!(q.is_independent_increments());
    }

    #[test]
    fn dependence_of_two_blocks_of_two() {
        // all mass on partitions with block sizes (2,2)
        let n = 4;
        let count = count_to_rational(&count_partitions_with_sizes(&comp(&[2, 2])));
        let table = all_compositions(n)
            .into_iter()
            .map(|b| {
                let v = if b == comp(&[2, 2]) {
                    Rational::one() / &count
                } else {
                    Rational::zero()
                };
                (b, v)
            })
            .collect();
        let p = PartitionLaw::new(n, table).unwrap();
        assert!(p.validate().valid);
        assert!(!forward_map(&p).is_independent_increments());
    }

    #[test]
    fn exchangeability_predicate() {
        let mut table = crp1_n3().table.clone();
        table.insert(comp(&[2, 1]), rat(1, 8));
        table.insert(comp(&[1, 2]), rat(1, 4));
        let skewed = PartitionLaw::new(3, table).unwrap();
        assert!(skewed.validate().valid);
        assert!(!skewed.is_exchangeable());

        // n = 2: no composition has two distinct orderings
        let table2 = BTreeMap::from([(comp(&[2]), rat(2, 5)), (comp(&[1, 1]), rat(3, 5))]);
        assert!(PartitionLaw::new(2, table2).unwrap().is_exchangeable());
    }

    #[test]
    fn random_law_generators_produce_valid_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=6 {
            let p = random_partially_exchangeable_law(n, &mut rng).unwrap();
            assert!(p.validate().valid);
            let e = random_exchangeable_law(n, &mut rng).unwrap();
            assert!(e.validate().valid);
            assert!(e.is_exchangeable());
        }
    }
}
