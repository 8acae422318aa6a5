//! Young diagram combinatorics.
//!
//! Rows are indexed from 1 in the documentation and from 0 in code; a row
//! past the height of a diagram has length 0.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A partition `λ_1 ≥ λ_2 ≥ ... ≥ λ_k > 0`, viewed as a Young diagram.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidInput(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!("partition {parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    /// Sorts the parts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Length of row `i` (0-based); zero past the last row.
    pub fn row(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Number of boxes `|λ|`.
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of rows `ht(λ)`.
    pub fn height(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `λ'_j = max { i | λ_i ≥ j }`.
    pub fn transpose(&self) -> Partition {
        let width = self.row(0);
        Partition(
            (1..=width)
                .map(|j| self.0.iter().take_while(|&&r| r >= j).count())
                .collect(),
        )
    }

    /// Whether `λ_i ≤ n` for all `i > m`, i.e. the diagram lies in the
    /// thick hook with `m` rows and `n` columns.
    pub fn fits_thick_hook(&self, m: usize, n: usize) -> bool {
        self.0.iter().skip(m).all(|&r| r <= n)
    }

    /// Shifts the diagram one column to the right and adds a first column of
    /// height `|λ|`: row `i` becomes `λ_i + 1` for `1 ≤ i ≤ |λ|`.
    pub fn tilde(&self) -> Partition {
        Partition((0..self.size()).map(|i| self.row(i) + 1).collect())
    }

    /// Adds one box at the bottom of the first column.
    pub fn plus(&self) -> Partition {
        let mut parts = self.0.clone();
        parts.push(1);
        Partition(parts)
    }

    /// `λ_1 + ... + λ_k`.
    pub fn prefix_row_sum(&self, k: usize) -> usize {
        self.0.iter().take(k).sum()
    }

    /// Whether `other ⊆ self` as diagrams.
    pub fn contains(&self, other: &Partition) -> bool {
        other.height() <= self.height() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Componentwise minimum of two diagrams.
    pub fn intersection(&self, other: &Partition) -> Partition {
        Partition::from_unsorted(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses a comma-separated part list such as `"2,1"`; the empty string
    /// (or `"()"`) is the empty diagram.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("bad partition part {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl TryFrom<String> for Partition {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Partition> for String {
    fn from(p: Partition) -> String {
        p.to_string()
    }
}

/// All partitions of `n`, largest first part first.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for first in (1..=n.min(max)).rev() {
            prefix.push(first);
            go(n - first, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// All `β ⊆ λ` with `λ \ β` a horizontal strip (at most one box per
/// column), together with `k = |λ| - |β|`.
pub fn horizontal_strip_subdiagrams(lambda: &Partition) -> Vec<(Partition, usize)> {
    let h = lambda.height();
    let mut out = Vec::new();
    let mut rows = vec![0; h];
    fn go(i: usize, lambda: &Partition, rows: &mut Vec<usize>, out: &mut Vec<(Partition, usize)>) {
        if i == rows.len() {
            let beta = Partition::from_unsorted(rows.clone());
            let k = lambda.size() - beta.size();
            out.push((beta, k));
            return;
        }
        for b in (lambda.row(i + 1)..=lambda.row(i)).rev() {
            rows[i] = b;
            go(i + 1, lambda, rows, out);
        }
    }
    go(0, lambda, &mut rows, &mut out);
    out
}

/// Number of flippable boxes `d(β, λ)`.
///
/// A common subdiagram `α` is valid when `λ \ α` is a horizontal strip,
/// `β \ α` is a vertical strip (at most one box per row) and both strips
/// have the same number of boxes. Among valid `α` the one with the fewest
/// removed boxes is `λ ∩ β`. A box `(i, j)` of that `α` is flippable when it
/// ends row `i` of `β` (`β_i = j`) and ends column `j` of `λ` (`λ'_j = i`).
///
/// Returns `None` when no valid `α` exists.
pub fn flippable_count(lambda: &Partition, beta: &Partition) -> Option<usize> {
    if lambda.size() != beta.size() {
        return None;
    }
    let alpha = lambda.intersection(beta);
    let rows = lambda.height().max(beta.height());
    for i in 0..rows {
        let a = alpha.row(i);
        if a < lambda.row(i + 1) || a + 1 < beta.row(i) {
            return None;
        }
    }
    let count = (0..alpha.height())
        .filter(|&i| {
            let j = beta.row(i);
            j > 0 && alpha.row(i) == j && lambda.row(i) >= j && lambda.row(i + 1) < j
        })
        .count();
    Some(count)
}

/// Dimensions `(even, odd)` of the Schur functor `Σ^λ` applied to a super
/// space of dimension `(m, n)`.
///
/// Counts `(m, n)`-semistandard tableaux: letters `1 < ... < m < 1' < ... <
/// n'`; unprimed letters weakly increase along rows and strictly down
/// columns, primed letters strictly increase along rows and weakly down
/// columns. A tableau is odd when it has an odd number of primed letters.
pub fn super_schur_dim(lambda: &Partition, m: usize, n: usize) -> (usize, usize) {
    if !lambda.fits_thick_hook(m, n) {
        return (0, 0);
    }
    let cells: Vec<(usize, usize)> = lambda
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(i, &len)| (0..len).map(move |j| (i, j)))
        .collect();
    let mut filling = vec![vec![0usize; lambda.row(0)]; lambda.height()];
    let mut counts = (0, 0);
    fn go(
        idx: usize,
        primes: usize,
        cells: &[(usize, usize)],
        filling: &mut Vec<Vec<usize>>,
        m: usize,
        n: usize,
        counts: &mut (usize, usize),
    ) {
        if idx == cells.len() {
            if primes.is_multiple_of(2) {
                counts.0 += 1;
            } else {
                counts.1 += 1;
            }
            return;
        }
        let (i, j) = cells[idx];
        for letter in 0..m + n {
            let primed = letter >= m;
            if j > 0 {
                let left = filling[i][j - 1];
                if letter < left || (primed && letter == left) {
                    continue;
                }
            }
            if i > 0 {
                let up = filling[i - 1][j];
                if letter < up || (!primed && letter == up) {
                    continue;
                }
            }
            filling[i][j] = letter;
            go(idx + 1, primes + usize::from(primed), cells, filling, m, n, counts);
        }
    }
    go(0, 0, &cells, &mut filling, m, n, &mut counts);
    counts
}

/// Terms of the Cauchy decomposition of `Λ^p(V ⊗ W)`: every partition of `p`
/// paired with its transpose.
pub fn cauchy_exterior(p: usize) -> Vec<(Partition, Partition)> {
    partitions(p)
        .into_iter()
        .map(|l| {
            let t = l.transpose();
            (l, t)
        })
        .collect()
}

/// Number of `λ ⊢ p` whose diagram `λ̃` fits the `(m, n)` thick hook. Each
/// contributes one invariant to `Λ^p(V) ⊗ Λ^p(S²(V*) ⊗ V)`.
pub fn invariant_diagram_count(m: usize, n: usize, p: usize) -> usize {
    partitions(p)
        .iter()
        .filter(|l| l.tilde().fits_thick_hook(m, n))
        .count()
}
