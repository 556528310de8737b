//! The gap representation: a binary-sequence law whose distribution of gaps
//! between consecutive 1s matches the unordered block-size distribution of a
//! partition law, and the partial-sum identity that relates the two.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use crate::combinatorics::{all_compositions, count_partitions_with_sizes, Composition};
use crate::laws::{count_to_rational, forward_map, PartitionLaw};
use crate::{Error, Rational};

/// Law of a binary sequence `(Y_1, ..., Y_n)` with `Y_1 = 1`, stored by the
/// gap encoding of the sequence, exactly like an increment law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinarySequenceLaw {
    n: usize,
    table: BTreeMap<Composition, Rational>,
}

impl BinarySequenceLaw {
    pub fn new(n: usize, table: BTreeMap<Composition, Rational>) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::domain("n must be positive"));
        }
        for d in table.keys() {
            if d.total() != n {
                return Err(Error::domain(format!(
                    "gap composition {d} does not sum to n={n}"
                )));
            }
        }
        if table.len() != 1 << (n - 1) {
            return Err(Error::IncompleteLaw(format!(
                "binary sequence law has {} of {} compositions",
                table.len(),
                1 << (n - 1)
            )));
        }
        let mass: Rational = table.values().sum();
        if table.values().any(|v| v.is_negative()) || !mass.is_one() {
            return Err(Error::domain(
                "binary sequence law must be non-negative with total mass 1",
            ));
        }
        Ok(BinarySequenceLaw { n, table })
    }

    /// The product law of independent bits with marginals `v_1, ..., v_n`,
    /// `v_1 = 1` required.
    pub fn independent(marginals: &[Rational]) -> Result<Self, Error> {
        let n = marginals.len();
        if n == 0 {
            return Err(Error::domain("need at least one marginal"));
        }
        if !marginals[0].is_one() {
            return Err(Error::domain("v_1 must equal 1"));
        }
        for v in marginals {
            if v.is_negative() || *v > Rational::one() {
                return Err(Error::domain(format!("marginal {v} outside [0,1]")));
            }
        }
        let table = all_compositions(n)
            .into_iter()
            .map(|d| {
                let bits = crate::combinatorics::gap_decode(&d);
                let prob: Rational = bits
                    .bits()
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, &bit)| {
                        if bit {
                            marginals[i].clone()
                        } else {
                            Rational::one() - &marginals[i]
                        }
                    })
                    .product();
                (d, prob)
            })
            .collect();
        BinarySequenceLaw::new(n, table)
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
}

/// A probability table over unordered multisets of positive integers summing
/// to `n`, keyed by the sorted-descending tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnorderedSizeDistribution {
    n: usize,
    table: BTreeMap<Vec<usize>, Rational>,
}

impl UnorderedSizeDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &BTreeMap<Vec<usize>, Rational> {
        &self.table
    }

    pub fn total_mass(&self) -> Rational {
        self.table.values().sum()
    }
}

/// Push a binary-sequence law through gap encoding and forget the order of
/// the gaps.
pub fn gap_size_distribution(y: &BinarySequenceLaw) -> UnorderedSizeDistribution {
    let mut table: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for (d, v) in &y.table {
        if v.is_zero() {
            continue;
        }
        *table.entry(d.sorted_desc()).or_insert_with(Rational::zero) += v;
    }
    UnorderedSizeDistribution { n: y.n, table }
}

/// Distribution of the unordered block sizes under a partition law: the mass
/// of a multiset is the sum over its orderings of
/// `p(b) * #{partitions with sizes b}`.
pub fn block_size_distribution(p: &PartitionLaw) -> UnorderedSizeDistribution {
    let mut table: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for (b, v) in p.table() {
        let mass = v * count_to_rational(&count_partitions_with_sizes(b));
        if mass.is_zero() {
            continue;
        }
        *table.entry(b.sorted_desc()).or_insert_with(Rational::zero) += mass;
    }
    UnorderedSizeDistribution { n: p.n(), table }
}

/// Distribution of the number of 1s among the first `m` bits, for a law
/// stored by gap encodings.
fn ones_count_distribution(
    table: &BTreeMap<Composition, Rational>,
    m: usize,
) -> Vec<Rational> {
    let mut dist = vec![Rational::zero(); m + 1];
    for (d, v) in table {
        let ones = crate::combinatorics::gap_decode(d)
            .bits()
            .iter()
            .take(m)
            .filter(|&&b| b)
            .count();
        dist[ones] += v;
    }
    dist
}

/// Per-`m` comparison of the two partial-sum distributions.
#[derive(Clone, Debug)]
pub struct PartialSumReport {
    pub matches: bool,
    /// For each `m = 1..n`: the distributions of `X_1+...+X_m` (from `p`'s
    /// increments) and `Y_1+...+Y_m`, indexed by the count value.
    pub per_m: Vec<(usize, Vec<Rational>, Vec<Rational>)>,
    /// First `m` at which the distributions differ, if any.
    pub first_mismatch: Option<usize>,
}

/// Check `X_1+...+X_m =_d Y_1+...+Y_m` for every `m <= n`, where `X` are the
/// increments of `p` and `Y` follows `y`. Exact comparison.
pub fn verify_partial_sum_identity(
    p: &PartitionLaw,
    y: &BinarySequenceLaw,
) -> Result<PartialSumReport, Error> {
    if p.n() != y.n() {
        return Err(Error::domain(format!(
            "laws on different n: {} vs {}",
            p.n(),
            y.n()
        )));
    }
    let q = forward_map(p);
    let mut per_m = Vec::new();
    let mut first_mismatch = None;
    for m in 1..=p.n() {
        let x_dist = ones_count_distribution(q.table(), m);
        let y_dist = ones_count_distribution(&y.table, m);
        if x_dist != y_dist && first_mismatch.is_none() {
            first_mismatch = Some(m);
        }
        per_m.push((m, x_dist, y_dist));
    }
    Ok(PartialSumReport {
        matches: first_mismatch.is_none(),
        per_m,
        first_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{crp_increment_probs, crp_law, CrpParameter};
    use num::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn crp_theta(n: i64, d: i64) -> CrpParameter {
        CrpParameter::theta(rat(n, d)).unwrap()
    }

    fn deterministic_single_one(n: usize) -> BinarySequenceLaw {
        let table = all_compositions(n)
            .into_iter()
            .map(|d| {
                let v = if d.len() == 1 { Rational::one() } else { Rational::zero() };
                (d, v)
            })
            .collect();
        BinarySequenceLaw::new(n, table).unwrap()
    }

    #[test]
    fn deterministic_laws() {
        let n = 5;
        let dist = gap_size_distribution(&deterministic_single_one(n));
        assert_eq!(dist.table().len(), 1);
        assert!(dist.table()[&vec![n]].is_one());

        let all_ones = BinarySequenceLaw::independent(&vec![Rational::one(); n]).unwrap();
        let dist = gap_size_distribution(&all_ones);
        assert!(dist.table()[&vec![1; n]].is_one());
    }

    #[test]
    fn crp1_gap_distribution_n3() {
        let v = crp_increment_probs(3, &crp_theta(1, 1));
        let y = BinarySequenceLaw::independent(&v).unwrap();
        let dist = gap_size_distribution(&y);
        assert_eq!(dist.table()[&vec![3]], rat(1, 3));
        assert_eq!(dist.table()[&vec![2, 1]], rat(1, 2));
        assert_eq!(dist.table()[&vec![1, 1, 1]], rat(1, 6));
        assert!(dist.total_mass().is_one());
    }

    #[test]
    fn crp1_block_size_distribution_n3() {
        let p = crp_law(3, &crp_theta(1, 1)).unwrap();
        let dist = block_size_distribution(&p);
        assert_eq!(dist.table()[&vec![3]], rat(1, 3));
        assert_eq!(dist.table()[&vec![2, 1]], rat(1, 2));
        assert_eq!(dist.table()[&vec![1, 1, 1]], rat(1, 6));
    }

    #[test]
    fn crp_gap_representation_small() {
        for th in [crp_theta(1, 2), crp_theta(1, 1), crp_theta(2, 1)] {
            for n in 1..=6 {
                let p = crp_law(n, &th).unwrap();
                let y =
                    BinarySequenceLaw::independent(&crp_increment_probs(n, &th)).unwrap();
                assert_eq!(
                    block_size_distribution(&p),
                    gap_size_distribution(&y),
                    "n={n}"
                );
                let report = verify_partial_sum_identity(&p, &y).unwrap();
                assert!(report.matches, "n={n}, first mismatch {:?}", report.first_mismatch);
            }
        }
    }

    #[test]
    fn single_block_partial_sums() {
        let n = 4;
        let p = crp_law(n, &CrpParameter::Zero).unwrap();
        let y = deterministic_single_one(n);
        let report = verify_partial_sum_identity(&p, &y).unwrap();
        assert!(report.matches);
        for (_, x_dist, _) in &report.per_m {
            assert!(x_dist[1].is_one());
        }
    }

    #[test]
    fn mismatched_marginals_detected_at_m2() {
        let p = crp_law(3, &crp_theta(1, 1)).unwrap();
        let y = BinarySequenceLaw::independent(&[
            Rational::one(),
            rat(1, 3),
            rat(1, 3),
        ])
        .unwrap();
        let report = verify_partial_sum_identity(&p, &y).unwrap();
        assert!(!report.matches);
        assert_eq!(report.first_mismatch, Some(2));
        let (_, x_dist, y_dist) = &report.per_m[1];
        assert_eq!(x_dist[1], rat(1, 2));
        assert_eq!(y_dist[1], rat(2, 3));
    }

    #[test]
    fn matching_partial_sums_pin_down_independent_marginals() {
        // with independent bits, P(S_m = m) = v_2 ... v_m, so successive
        // ratios recover each marginal
        let th = crp_theta(3, 2);
        let n = 6;
        let v = crp_increment_probs(n, &th);
        let y = BinarySequenceLaw::independent(&v).unwrap();
        let p = crp_law(n, &th).unwrap();
        let report = verify_partial_sum_identity(&p, &y).unwrap();
        assert!(report.matches);
        let mut prev = Rational::one();
        for (m, x_dist, _) in &report.per_m {
            let all_ones = x_dist[*m].clone();
            assert_eq!(&all_ones / &prev, v[m - 1], "m={m}");
            prev = all_ones;
        }
    }

    #[test]
    fn law_validation_errors() {
        assert!(BinarySequenceLaw::independent(&[rat(1, 2)]).is_err());
        assert!(BinarySequenceLaw::independent(&[Rational::one(), rat(3, 2)]).is_err());
        let p = crp_law(3, &crp_theta(1, 1)).unwrap();
        let y = deterministic_single_one(4);
        assert!(verify_partial_sum_identity(&p, &y).is_err());
    }
}
