//! Compositions, set partitions, increment sequences, and the encodings and
//! order relations connecting them.
//!
//! `S_{n,k}` denotes the set of compositions of `n` into `k` parts. A set
//! partition of `[n] = {1, ..., n}` is stored as a restricted-growth sequence,
//! which makes "blocks in order of appearance" canonical by construction.

use std::fmt;

use num::{BigUint, One, Zero};

use crate::{Count, Error};

/// An ordered tuple of positive integers. `total()` is the sum `n`,
/// `len()` the number of parts `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self, Error> {
        if parts.is_empty() {
            return Err(Error::domain("composition must have at least one part"));
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::domain("composition parts must be positive"));
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The sum of the parts.
    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// The number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Running sums `p1, p1+p2, ..., n`.
    pub fn prefix_sums(&self) -> Vec<usize> {
        self.parts
            .iter()
            .scan(0, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }

    /// Parts as a sorted-descending multiset key.
    pub fn sorted_desc(&self) -> Vec<usize> {
        let mut v = self.parts.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All compositions of `n` into `k` parts, in decreasing dictionary order.
/// That order is load-bearing: the triangular solve in `laws` consumes the
/// list as-is.
pub fn enumerate_compositions(n: usize, k: usize) -> Result<Vec<Composition>, Error> {
    if k < 1 || k > n {
        return Err(Error::domain(format!(
            "need 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(k);
    fill_desc(n, k, &mut prefix, &mut out);
    Ok(out)
}

fn fill_desc(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Composition>) {
    if k == 1 {
        prefix.push(n);
        out.push(Composition {
            parts: prefix.clone(),
        });
        prefix.pop();
        return;
    }
    // largest first part first keeps the whole list in decreasing dict order
    for first in (1..=n - k + 1).rev() {
        prefix.push(first);
        fill_desc(n - first, k - 1, prefix, out);
        prefix.pop();
    }
}

/// All `2^(n-1)` compositions of `n`, grouped by part count `k = 1..n`,
/// each group in decreasing dictionary order.
pub fn all_compositions(n: usize) -> Vec<Composition> {
    (1..=n)
        .flat_map(|k| enumerate_compositions(n, k).expect("1 <= k <= n"))
        .collect()
}

/// A partition of `{1, ..., n}` as a restricted-growth sequence:
/// `assignment[i]` is the 1-based index, in order of appearance, of the block
/// containing element `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetPartition {
    assignment: Vec<usize>,
}

impl SetPartition {
    pub fn from_assignment(assignment: Vec<usize>) -> Result<Self, Error> {
        if assignment.is_empty() {
            return Err(Error::domain("set partition must be nonempty"));
        }
        let mut max = 0;
        for (i, &a) in assignment.iter().enumerate() {
            if a < 1 || a > max + 1 {
                return Err(Error::domain(format!(
                    "not a restricted-growth sequence at position {}: {}",
                    i + 1,
                    a
                )));
            }
            max = max.max(a);
        }
        Ok(SetPartition { assignment })
    }

    /// Build from explicit blocks; they need not be given in order of appearance.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self, Error> {
        let mut assignment = vec![0usize; n];
        let mut order: Vec<usize> = (0..blocks.len()).collect();
        for b in blocks {
            if b.is_empty() {
                return Err(Error::domain("empty block"));
            }
        }
        order.sort_by_key(|&i| blocks[i].iter().min().copied().unwrap());
        for (rank, &bi) in order.iter().enumerate() {
            for &e in &blocks[bi] {
                if e < 1 || e > n || assignment[e - 1] != 0 {
                    return Err(Error::domain(format!("bad or duplicated element {e}")));
                }
                assignment[e - 1] = rank + 1;
            }
        }
        if assignment.iter().any(|&a| a == 0) {
            return Err(Error::domain("blocks do not cover {1..n}"));
        }
        SetPartition::from_assignment(assignment)
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn num_blocks(&self) -> usize {
        *self.assignment.iter().max().unwrap()
    }

    /// Blocks in order of appearance, elements ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, &a) in self.assignment.iter().enumerate() {
            blocks[a - 1].push(i + 1);
        }
        blocks
    }

    /// Block sizes in order of appearance, `B(Π)`.
    pub fn block_sizes(&self) -> Composition {
        let mut sizes = vec![0usize; self.num_blocks()];
        for &a in &self.assignment {
            sizes[a - 1] += 1;
        }
        Composition { parts: sizes }
    }

    /// Increment sequence: bit `i` is 1 iff `i` is the smallest element of
    /// its block, i.e. the first occurrence of its block index.
    pub fn increments(&self) -> IncrementSequence {
        let mut max_seen = 0;
        let bits = self
            .assignment
            .iter()
            .map(|&a| {
                let new = a > max_seen;
                max_seen = max_seen.max(a);
                new
            })
            .collect();
        IncrementSequence { bits }
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.assignment.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Iterator over all set partitions of `[n]` in lexicographic order of their
/// restricted-growth sequences. Lazy; `Bell(n)` items in total.
pub struct SetPartitionIter {
    rgs: Vec<usize>,
    // prefix_max[i] = max(rgs[0..=i])
    prefix_max: Vec<usize>,
    done: bool,
}

/// All set partitions of `[n]`, streamed.
pub fn enumerate_set_partitions(n: usize) -> Result<SetPartitionIter, Error> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    Ok(SetPartitionIter {
        rgs: vec![1; n],
        prefix_max: vec![1; n],
        done: false,
    })
}

impl Iterator for SetPartitionIter {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let current = SetPartition {
            assignment: self.rgs.clone(),
        };
        let n = self.rgs.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.rgs[i] <= self.prefix_max[i - 1] {
                self.rgs[i] += 1;
                for j in i + 1..n {
                    self.rgs[j] = 1;
                }
                for j in i..n {
                    self.prefix_max[j] = self.prefix_max[j - 1].max(self.rgs[j]);
                }
                break;
            }
        }
        Some(current)
    }
}

/// A binary sequence `(X_1, ..., X_n)` with `X_1 = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IncrementSequence {
    bits: Vec<bool>,
}

impl IncrementSequence {
    pub fn new(bits: Vec<bool>) -> Result<Self, Error> {
        if bits.is_empty() {
            return Err(Error::InvalidSequence("empty sequence".into()));
        }
        if !bits[0] {
            return Err(Error::InvalidSequence("first bit must be 1".into()));
        }
        Ok(IncrementSequence { bits })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// 1-based positions of the ones.
    pub fn ones_positions(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for IncrementSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{}", if *b { 1 } else { 0 })?;
        }
        Ok(())
    }
}

/// Gap encoding `D`: distances between consecutive 1s, with final gap
/// `n + 1 - a_k`. A composition of `n` with one part per 1-bit.
pub fn gap_encode(x: &IncrementSequence) -> Composition {
    let ones = x.ones_positions();
    let n = x.len();
    let mut parts = Vec::with_capacity(ones.len());
    for w in ones.windows(2) {
        parts.push(w[1] - w[0]);
    }
    parts.push(n + 1 - ones[ones.len() - 1]);
    Composition { parts }
}

/// Inverse of [`gap_encode`]: a 1 at each partial-sum position `a_i`,
/// zeros elsewhere.
pub fn gap_decode(d: &Composition) -> IncrementSequence {
    let n = d.total();
    let mut bits = vec![false; n];
    let mut pos = 1usize;
    for &part in d.parts() {
        bits[pos - 1] = true;
        pos += part;
    }
    IncrementSequence { bits }
}

fn check_same_shape(y: &Composition, z: &Composition) -> Result<(), Error> {
    if y.total() != z.total() || y.len() != z.len() {
        return Err(Error::domain(format!(
            "compositions not in the same S_{{n,k}}: {y} vs {z}"
        )));
    }
    Ok(())
}

/// Prefix-sum partial order: `y >= z` iff every prefix sum of `y` dominates
/// the corresponding prefix sum of `z`.
pub fn partial_order_geq(y: &Composition, z: &Composition) -> Result<bool, Error> {
    check_same_shape(y, z)?;
    let (py, pz) = (y.prefix_sums(), z.prefix_sums());
    Ok(py.iter().zip(&pz).all(|(a, b)| a >= b))
}

/// Strict dictionary order on `S_{n,k}`.
pub fn dict_order_greater(y: &Composition, z: &Composition) -> Result<bool, Error> {
    check_same_shape(y, z)?;
    Ok(y.parts > z.parts)
}

pub fn factorial(n: usize) -> Count {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

pub fn binomial(n: usize, k: usize) -> Count {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `Bell(n)` via the Bell triangle.
pub fn bell_number(n: usize) -> Count {
    let mut row = vec![BigUint::one()];
    for _ in 1..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row[row.len() - 1].clone());
        for v in &row {
            let last = next[next.len() - 1].clone();
            next.push(last + v);
        }
        row = next;
    }
    row[row.len() - 1].clone()
}

/// Number of set partitions of `[n]` whose block sizes in order of appearance
/// equal `b`: the product over blocks of `C(n_i - 1, b_i - 1)` where `n_i`
/// elements remain before block `i` is placed (its minimum is forced).
pub fn count_partitions_with_sizes(b: &Composition) -> Count {
    let mut remaining = b.total();
    let mut acc = BigUint::one();
    for &part in b.parts() {
        acc *= binomial(remaining - 1, part - 1);
        remaining -= part;
    }
    acc
}
