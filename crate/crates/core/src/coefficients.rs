//! The coefficients `r(d; b)`: the number of set partitions with block
//! composition `b` and gap composition `d`, computed three independent ways.
//!
//! - [`r_via_bruteforce`]: count over all set partitions of `[n]`.
//! - [`r_via_formula`]: sum of multinomial terms over the constrained
//!   upper-triangular matrices with row sums `b_i - 1` and column sums
//!   `d_i - 1`.
//! - [`genfun_expand`]: expand
//!   `x1^(d1-1) (x1+x2)^(d2-1) ... (x1+...+xk)^(dk-1)`; the coefficient of
//!   `x1^(b1-1) ... xk^(bk-1)` is `r(d; b)`.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigUint, One, Zero};

use crate::combinatorics::{
    enumerate_set_partitions, factorial, gap_encode, Composition,
};
use crate::{Count, Error};

/// A `k x k` upper-triangular matrix of non-negative integers with row sums
/// `b_i - 1` and column sums `d_i - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstrainedMatrix {
    k: usize,
    // row-major
    entries: Vec<usize>,
}

impl ConstrainedMatrix {
    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.entries[row * self.k + col]
    }

    pub fn row_sum(&self, row: usize) -> usize {
        (0..self.k).map(|j| self.get(row, j)).sum()
    }

    pub fn col_sum(&self, col: usize) -> usize {
        (0..self.k).map(|i| self.get(i, col)).sum()
    }
}

impl fmt::Display for ConstrainedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.k {
            for j in 0..self.k {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn check_shape(b: &Composition, d: &Composition) -> Result<(), Error> {
    if b.total() != d.total() || b.len() != d.len() {
        return Err(Error::domain(format!(
            "b and d must lie in the same S_{{n,k}}: {b} vs {d}"
        )));
    }
    Ok(())
}

/// Visit every constrained matrix, filling column by column. Column `j` is a
/// weak composition of `d_j - 1` into entries `m_{1j}..m_{jj}`, each bounded
/// by the row budget `b_i - 1` minus what earlier columns already used.
fn visit_matrices<F: FnMut(&[usize], usize)>(b: &Composition, d: &Composition, mut f: F) {
    let k = b.len();
    let mut row_budget: Vec<usize> = b.parts().iter().map(|&x| x - 1).collect();
    let mut entries = vec![0usize; k * k];

    fn fill_column<F: FnMut(&[usize], usize)>(
        col: usize,
        row: usize,
        left: usize,
        k: usize,
        d: &[usize],
        row_budget: &mut [usize],
        entries: &mut [usize],
        f: &mut F,
    ) {
        if row == col {
            // last admissible row of this column takes whatever is left
            if left > row_budget[row] {
                return;
            }
            entries[row * k + col] = left;
            row_budget[row] -= left;
            if col + 1 == k {
                f(entries, k);
            } else {
                fill_column(col + 1, 0, d[col + 1] - 1, k, d, row_budget, entries, f);
            }
            row_budget[row] += left;
            entries[row * k + col] = 0;
            return;
        }
        for take in 0..=left.min(row_budget[row]) {
            entries[row * k + col] = take;
            row_budget[row] -= take;
            fill_column(col, row + 1, left - take, k, d, row_budget, entries, f);
            row_budget[row] += take;
            entries[row * k + col] = 0;
        }
    }

    fill_column(
        0,
        0,
        d.parts()[0] - 1,
        k,
        d.parts(),
        &mut row_budget,
        &mut entries,
        &mut f,
    );
}

/// All matrices satisfying the row/column constraints; empty when none do.
pub fn enumerate_constrained_matrices(
    b: &Composition,
    d: &Composition,
) -> Result<Vec<ConstrainedMatrix>, Error> {
    check_shape(b, d)?;
    let mut out = Vec::new();
    visit_matrices(b, d, |entries, k| {
        out.push(ConstrainedMatrix {
            k,
            entries: entries.to_vec(),
        });
    });
    Ok(out)
}

/// `r(d; b)` via the matrix-sum formula: each matrix contributes
/// `prod_i (d_i - 1)! / prod_{i,j} m_{ij}!`. Each summand is a product of
/// multinomial coefficients and must divide exactly; this is asserted.
pub fn r_via_formula(d: &Composition, b: &Composition) -> Result<Count, Error> {
    check_shape(b, d)?;
    let numer: BigUint = d
        .parts()
        .iter()
        .map(|&di| factorial(di - 1))
        .product();
    let mut total = BigUint::zero();
    visit_matrices(b, d, |entries, _k| {
        let denom: BigUint = entries.iter().map(|&m| factorial(m)).product();
        let (q, rem) = num::Integer::div_rem(&numer, &denom);
        assert!(rem.is_zero(), "non-integral summand for d={d}, b={b}");
        total += q;
    });
    Ok(total)
}

/// `r(d; b)` by exhaustive enumeration of set partitions of `[n]`.
pub fn r_via_bruteforce(d: &Composition, b: &Composition) -> Result<Count, Error> {
    check_shape(b, d)?;
    let n = b.total();
    let mut count = 0usize;
    for p in enumerate_set_partitions(n)? {
        if p.block_sizes() == *b && gap_encode(&p.increments()) == *d {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

/// A sparse polynomial in `x_1..x_k` with big-integer coefficients, keyed by
/// exponent vector. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionPolynomial {
    num_vars: usize,
    terms: BTreeMap<Vec<usize>, Count>,
}

impl CompositionPolynomial {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Count> {
        &self.terms
    }

    /// Coefficient of the monomial with the given exponent vector.
    pub fn coefficient(&self, exponents: &[usize]) -> Count {
        self.terms
            .get(exponents)
            .cloned()
            .unwrap_or_else(BigUint::zero)
    }

    /// Coefficient of `x1^(b1-1) ... xk^(bk-1)`, i.e. `r(d; b)` when `self`
    /// is the expansion for `d`.
    pub fn coefficient_for(&self, b: &Composition) -> Count {
        let exps: Vec<usize> = b.parts().iter().map(|&x| x - 1).collect();
        self.coefficient(&exps)
    }

    /// Value at `x1 = ... = xk = 1`: the sum of all coefficients.
    pub fn eval_at_ones(&self) -> Count {
        self.terms.values().sum()
    }

    /// Multiply in place by `(x_1 + ... + x_m)`.
    fn mul_linear(&mut self, m: usize) {
        let mut next: BTreeMap<Vec<usize>, Count> = BTreeMap::new();
        for (exps, coef) in &self.terms {
            for var in 0..m {
                let mut e = exps.clone();
                e[var] += 1;
                *next.entry(e).or_insert_with(BigUint::zero) += coef;
            }
        }
        self.terms = next;
    }
}

/// Expand `x1^(d1-1) (x1+x2)^(d2-1) ... (x1+...+xk)^(dk-1)`.
pub fn genfun_expand(d: &Composition) -> CompositionPolynomial {
    let k = d.len();
    let mut poly = CompositionPolynomial {
        num_vars: k,
        terms: BTreeMap::from([(vec![0; k], BigUint::one())]),
    };
    for (j, &dj) in d.parts().iter().enumerate() {
        for _ in 0..dj - 1 {
            poly.mul_linear(j + 1);
        }
    }
    poly
}
