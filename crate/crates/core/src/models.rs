//! CRP(θ) and Pitman's two-parameter family: exact laws, seeded samplers,
//! and the characterization of exchangeable partitions with independent
//! increments.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{all_compositions, factorial, Composition, SetPartition};
use crate::laws::{count_to_rational, forward_map, IncrementLaw, PartitionLaw};
use crate::{par, Error, Rational};

/// CRP concentration parameter. The `Zero` and `Infinity` variants are the
/// degenerate laws (one block, all singletons); the closed-form density is
/// undefined there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrpParameter {
    Theta(Rational),
    Zero,
    Infinity,
}

impl CrpParameter {
    pub fn theta(value: Rational) -> Result<Self, Error> {
        if value.is_positive() {
            Ok(CrpParameter::Theta(value))
        } else {
            Err(Error::domain(format!("theta must be positive, got {value}")))
        }
    }
}

impl fmt::Display for CrpParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrpParameter::Theta(t) => write!(f, "{t}"),
            CrpParameter::Zero => write!(f, "zero"),
            CrpParameter::Infinity => write!(f, "inf"),
        }
    }
}

/// Parameters `(alpha, theta)` with `0 <= alpha < 1` and `theta > -alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoParameter {
    alpha: Rational,
    theta: Rational,
}

impl TwoParameter {
    pub fn new(alpha: Rational, theta: Rational) -> Result<Self, Error> {
        if alpha.is_negative() || alpha >= Rational::one() {
            return Err(Error::domain(format!("need 0 <= alpha < 1, got {alpha}")));
        }
        if theta <= -alpha.clone() {
            return Err(Error::domain(format!(
                "need theta > -alpha, got theta={theta}, alpha={alpha}"
            )));
        }
        Ok(TwoParameter { alpha, theta })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn theta(&self) -> &Rational {
        &self.theta
    }
}

/// The exact CRP law: `p(b) = theta^k prod_i (b_i - 1)! / prod_{i<n} (theta + i)`.
pub fn crp_law(n: usize, param: &CrpParameter) -> Result<PartitionLaw, Error> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    let comps = all_compositions(n);
    let table: BTreeMap<Composition, Rational> = match param {
        CrpParameter::Zero => comps
            .into_iter()
            .map(|b| {
                let v = if b.len() == 1 { Rational::one() } else { Rational::zero() };
                (b, v)
            })
            .collect(),
        CrpParameter::Infinity => comps
            .into_iter()
            .map(|b| {
                let v = if b.len() == n { Rational::one() } else { Rational::zero() };
                (b, v)
            })
            .collect(),
        CrpParameter::Theta(theta) => {
            let denom: Rational = (0..n)
                .map(|i| theta + Rational::from_integer(BigInt::from(i)))
                .product();
            comps
                .into_iter()
                .map(|b| {
                    let mut numer = num::pow::pow(theta.clone(), b.len());
                    for &part in b.parts() {
                        numer *= count_to_rational(&factorial(part - 1));
                    }
                    (b, numer / &denom)
                })
                .collect()
        }
    };
    PartitionLaw::new(n, table)
}

/// Marginal one-probabilities of the CRP increments:
/// `u_1 = 1`, `u_i = theta / (i - 1 + theta)`.
pub fn crp_increment_probs(n: usize, param: &CrpParameter) -> Vec<Rational> {
    let mut u = Vec::with_capacity(n);
    u.push(Rational::one());
    for i in 2..=n {
        u.push(match param {
            CrpParameter::Zero => Rational::zero(),
            CrpParameter::Infinity => Rational::one(),
            CrpParameter::Theta(theta) => {
                theta / (theta + Rational::from_integer(BigInt::from(i - 1)))
            }
        });
    }
    u
}

/// New-block probability of the two-parameter model:
/// `P(X_{i+1} = 1 | S_i = k) = (k alpha + theta) / (i + theta)`.
pub fn two_parameter_transition(
    i: usize,
    k: usize,
    params: &TwoParameter,
) -> Result<Rational, Error> {
    if k < 1 || k > i {
        return Err(Error::domain(format!("need 1 <= k <= i, got i={i}, k={k}")));
    }
    let numer = Rational::from_integer(BigInt::from(k)) * &params.alpha + &params.theta;
    let denom = Rational::from_integer(BigInt::from(i)) + &params.theta;
    Ok(numer / denom)
}

fn rational_to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
}

/// Seat `2..=n` sequentially. `weights(sizes)` returns the unnormalized
/// weight of opening a new block followed by one weight per existing block.
fn seat_sequentially<R: Rng>(n: usize, rng: &mut R, weights: impl Fn(&[usize]) -> Vec<f64>) -> SetPartition {
    let mut assignment = vec![1usize];
    let mut sizes = vec![1usize];
    for _ in 2..=n {
        let w = weights(&sizes);
        let total: f64 = w.iter().sum();
        let mut u = rng.random::<f64>() * total;
        let mut choice = w.len() - 1;
        for (idx, wi) in w.iter().enumerate() {
            if u < *wi {
                choice = idx;
                break;
            }
            u -= wi;
        }
        if choice == 0 {
            sizes.push(1);
            assignment.push(sizes.len());
        } else {
            sizes[choice - 1] += 1;
            assignment.push(choice);
        }
    }
    SetPartition::from_assignment(assignment).expect("seating yields a valid RGS")
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn sample_crp_with_stream(n: usize, param: &CrpParameter, seed: u64, stream: u64) -> SetPartition {
    match param {
        CrpParameter::Zero => SetPartition::from_assignment(vec![1; n]).unwrap(),
        CrpParameter::Infinity => {
            SetPartition::from_assignment((1..=n).collect()).unwrap()
        }
        CrpParameter::Theta(theta) => {
            let t = rational_to_f64(theta);
            let mut rng = stream_rng(seed, stream);
            seat_sequentially(n, &mut rng, |sizes| {
                let mut w = Vec::with_capacity(sizes.len() + 1);
                w.push(t);
                w.extend(sizes.iter().map(|&s| s as f64));
                w
            })
        }
    }
}

/// One seeded CRP sample; element `i` starts a new block with probability
/// `theta / (i - 1 + theta)`, otherwise joins a block with probability
/// proportional to its size.
pub fn sample_crp(n: usize, param: &CrpParameter, seed: u64) -> SetPartition {
    sample_crp_with_stream(n, param, seed, 0)
}

/// `count` CRP samples; sample `i` uses RNG stream `i` of the seed, so the
/// output is reproducible and independent of parallel scheduling.
pub fn sample_crp_many(
    n: usize,
    param: &CrpParameter,
    seed: u64,
    count: usize,
) -> Vec<SetPartition> {
    par::map_indices(count, |i| sample_crp_with_stream(n, param, seed, i as u64))
}

fn sample_two_parameter_with_stream(
    n: usize,
    params: &TwoParameter,
    seed: u64,
    stream: u64,
) -> SetPartition {
    let alpha = rational_to_f64(&params.alpha);
    let theta = rational_to_f64(&params.theta);
    let mut rng = stream_rng(seed, stream);
    seat_sequentially(n, &mut rng, |sizes| {
        let k = sizes.len() as f64;
        let mut w = Vec::with_capacity(sizes.len() + 1);
        w.push(k * alpha + theta);
        w.extend(sizes.iter().map(|&s| s as f64 - alpha));
        w
    })
}

/// One seeded two-parameter sample; with `k` blocks after `i` elements the
/// next element opens a new block with probability `(k alpha + theta) / (i + theta)`
/// and joins block `j` with probability `(|block j| - alpha) / (i + theta)`.
pub fn sample_two_parameter(n: usize, params: &TwoParameter, seed: u64) -> SetPartition {
    sample_two_parameter_with_stream(n, params, seed, 0)
}

pub fn sample_two_parameter_many(
    n: usize,
    params: &TwoParameter,
    seed: u64,
    count: usize,
) -> Vec<SetPartition> {
    par::map_indices(count, |i| {
        sample_two_parameter_with_stream(n, params, seed, i as u64)
    })
}

/// Result of checking an independent-increment exchangeable pair `(q, p)`
/// against the CRP family.
#[derive(Clone, Debug)]
pub enum Theorem2Outcome {
    /// The unique parameter whose CRP reproduces `q` exactly.
    Recovered(CrpParameter),
    /// The hypotheses held but some CRP identity failed; the report names
    /// the first offending composition.
    Counterexample(String),
}

/// Given an increment law with independent increments whose partition law is
/// exchangeable, recover the CRP parameter: `theta = u_2 / (1 - u_2)` when
/// `u_2` is interior, `Infinity` when `u_2 = 1`, `Zero` when `u_2 = 0`.
/// Verifies `q = forward_map(crp_law(n, theta))` exactly.
pub fn verify_theorem2(
    q: &IncrementLaw,
    p: &PartitionLaw,
) -> Result<Theorem2Outcome, Error> {
    let n = q.n();
    if n < 2 {
        return Err(Error::domain(
            "n >= 2 required: at n = 1 every parameter gives the same law",
        ));
    }
    if p.n() != n {
        return Err(Error::domain("p and q must share the same n"));
    }
    if !p.validate().valid {
        return Err(Error::NotApplicable("p is not a valid partition law".into()));
    }
    if forward_map(p) != *q {
        return Err(Error::NotApplicable(
            "p is not the partition law of q (forward image differs)".into(),
        ));
    }
    if !p.is_exchangeable() {
        return Err(Error::NotApplicable("p is not exchangeable".into()));
    }
    if !q.is_independent_increments() {
        return Err(Error::NotApplicable(
            "q does not have independent increments".into(),
        ));
    }

    let u = q.marginals();
    let u2 = &u[1];
    let param = if u2.is_zero() {
        CrpParameter::Zero
    } else if u2.is_one() {
        CrpParameter::Infinity
    } else {
        CrpParameter::Theta(u2 / (Rational::one() - u2))
    };
    let reference = forward_map(&crp_law(n, &param)?);
    if reference == *q {
        Ok(Theorem2Outcome::Recovered(param))
    } else {
        let culprit = reference
            .table()
            .iter()
            .find(|(d, v)| q.get(d) != *v)
            .map(|(d, v)| format!("q({d}) = {} but CRP({param}) gives {v}", q.get(d)))
            .unwrap_or_else(|| "laws differ".into());
        Ok(Theorem2Outcome::Counterexample(culprit))
    }
}

/// One line of an empirical-frequency comparison.
#[derive(Clone, Debug)]
pub struct EmpiricalEntry {
    pub composition: Composition,
    pub expected_prob: f64,
    pub observed_count: usize,
    pub z_score: f64,
}

/// Compare empirical block-size-composition frequencies of `samples` against
/// the exact probabilities `p(b) * #{partitions with sizes b}`. The z-score
/// uses the binomial standard error `sqrt(P (1 - P) / N)`.
pub fn compare_composition_frequencies(
    samples: &[SetPartition],
    law: &PartitionLaw,
) -> Vec<EmpiricalEntry> {
    let total = samples.len() as f64;
    let mut counts: BTreeMap<Composition, usize> = BTreeMap::new();
    for s in samples {
        *counts.entry(s.block_sizes()).or_insert(0) += 1;
    }
    law.table()
        .iter()
        .map(|(b, v)| {
            let prob = rational_to_f64(
                &(v * count_to_rational(&crate::combinatorics::count_partitions_with_sizes(b))),
            );
            let observed = counts.get(b).copied().unwrap_or(0);
            let se = (prob * (1.0 - prob) / total).sqrt();
            let z = if se == 0.0 {
                if observed as f64 == prob * total { 0.0 } else { f64::INFINITY }
            } else {
                (observed as f64 / total - prob) / se
            };
            EmpiricalEntry {
                composition: b.clone(),
                expected_prob: prob,
                observed_count: observed,
                z_score: z,
            }
        })
        .collect()
}

/// Conditional new-block frequency check for the two-parameter sampler:
/// for each `(i, k)` seen among the samples, compare the frequency of
/// "element i+1 opens a new block given S_i = k" against
/// `(k alpha + theta) / (i + theta)`.
#[derive(Clone, Debug)]
pub struct TransitionEntry {
    pub i: usize,
    pub k: usize,
    pub trials: usize,
    pub expected_prob: f64,
    pub z_score: f64,
}

pub fn compare_transition_frequencies(
    samples: &[SetPartition],
    params: &TwoParameter,
) -> Vec<TransitionEntry> {
    // (i, k) -> (trials, new-block successes)
    let mut stats: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for s in samples {
        let bits = s.increments();
        let mut blocks_so_far = 0usize;
        for (idx, &bit) in bits.bits().iter().enumerate() {
            if idx > 0 {
                let e = stats.entry((idx, blocks_so_far)).or_insert((0, 0));
                e.0 += 1;
                if bit {
                    e.1 += 1;
                }
            }
            if bit {
                blocks_so_far += 1;
            }
        }
    }
    stats
        .into_iter()
        .map(|((i, k), (trials, hits))| {
            let prob = rational_to_f64(
                &two_parameter_transition(i, k, params).expect("1 <= k <= i"),
            );
            let se = (prob * (1.0 - prob) / trials as f64).sqrt();
            let z = if se == 0.0 {
                if hits as f64 == prob * trials as f64 { 0.0 } else { f64::INFINITY }
            } else {
                (hits as f64 / trials as f64 - prob) / se
            };
            TransitionEntry {
                i,
                k,
                trials,
                expected_prob: prob,
                z_score: z,
            }
        })
        .collect()
}
