//! Exact rational scalars and sparse matrices.
//!
//! Every homological computation in this crate reduces to ranks of sparse
//! matrices with rational entries. Ranks are computed by fraction-free
//! elimination over the integers: each row is first cleared of denominators,
//! then rows are combined as `a*r - b*p` and divided by their content, so no
//! rational arithmetic happens inside the elimination loop. Pivots are chosen
//! Markowitz-style (sparsest column, then shortest row, preferring unit
//! entries). The loop runs on `i64` and restarts on `BigInt` if any
//! intermediate value overflows.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integral [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `n / d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A sparse matrix over the rationals, stored row by row.
///
/// Each row is a list of `(column, value)` pairs sorted by column. Zero
/// values are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].push((i, Rational::one()));
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets. Repeated positions
    /// are summed; entries summing to zero are dropped.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "entry ({r},{c}) out of range {nrows}x{ncols}");
            rows[r].push((c, v));
        }
        for row in rows.iter_mut() {
            normalize_row(row);
        }
        SparseMatrix { nrows, ncols, rows }
    }

    /// Builds a matrix from dense integer rows. Handy in tests.
    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let triplets = rows.iter().enumerate().flat_map(|(i, row)| {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            row.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0)
                .map(move |(j, v)| (i, j, rat(*v)))
        });
        Self::from_triplets(nrows, ncols, triplets)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn row(&self, i: usize) -> &[(usize, Rational)] {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.rows[r].binary_search_by_key(&c, |(j, _)| *j) {
            Ok(pos) => self.rows[r][pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// All stored entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.ncols];
        for (i, j, v) in self.iter() {
            rows[j].push((i, v.clone()));
        }
        SparseMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            rows,
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in product");
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc: Vec<(usize, Rational)> = Vec::new();
                for (k, a) in row {
                    for (j, b) in &other.rows[*k] {
                        acc.push((*j, a * b));
                    }
                }
                normalize_row(&mut acc);
                acc
            })
            .collect();
        SparseMatrix {
            nrows: self.nrows,
            ncols: other.ncols,
            rows,
        }
    }

    /// Dimension of the row space over the rationals.
    pub fn rank(&self) -> usize {
        rank(self)
    }

    /// `ncols - rank`.
    pub fn kernel_dim(&self) -> usize {
        kernel_dim(self)
    }

    /// Rows scaled to primitive integer vectors (same row space).
    fn integer_rows(&self) -> Vec<Vec<(u32, BigInt)>> {
        self.rows
            .iter()
            .filter(|row| !row.is_empty())
            .map(|row| {
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
                let mut ints: Vec<(u32, BigInt)> = row
                    .iter()
                    .map(|(j, v)| (*j as u32, v.numer() * (&lcm / v.denom())))
                    .collect();
                divide_content_big(&mut ints);
                ints
            })
            .collect()
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} [", self.nrows, self.ncols)?;
        for (i, row) in self.rows.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            write!(f, "  {i}:")?;
            for (j, v) in row {
                write!(f, " ({j}, {v})")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Sorts by column, merges duplicates and drops zeros.
fn normalize_row(row: &mut Vec<(usize, Rational)>) {
    row.sort_by_key(|(j, _)| *j);
    let mut out: Vec<(usize, Rational)> = Vec::with_capacity(row.len());
    for (j, v) in row.drain(..) {
        match out.last_mut() {
            Some((lj, lv)) if *lj == j => *lv += v,
            _ => out.push((j, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    *row = out;
}

/// Rank over the rationals.
pub fn rank(m: &SparseMatrix) -> usize {
    let big_rows = m.integer_rows();
    let small: Option<Vec<Vec<(u32, i64)>>> = big_rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|(j, v)| v.to_i64().map(|x| (*j, x)))
                .collect::<Option<Vec<_>>>()
        })
        .collect();
    if let Some(rows) = small {
        if let Some(r) = eliminate(rows, m.ncols) {
            return r;
        }
    }
    eliminate(big_rows, m.ncols).expect("BigInt elimination cannot overflow")
}

/// Dimension of the right kernel: `ncols - rank`.
pub fn kernel_dim(m: &SparseMatrix) -> usize {
    m.ncols - rank(m)
}

/// Integer scalars usable in the elimination loop. Operations return `None`
/// on overflow.
trait ElimScalar: Clone + PartialEq {
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn is_one(&self) -> bool;
    fn neg(&self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    fn div_exact(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
}

impl ElimScalar for i64 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
}

impl ElimScalar for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        One::is_one(&Signed::abs(self))
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
}

fn divide_content_big(row: &mut [(u32, BigInt)]) {
    let g = row
        .iter()
        .fold(BigInt::zero(), |acc, (_, v)| Integer::gcd(&acc, v));
    if !Zero::is_zero(&g) && !One::is_one(&g) {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

fn divide_content<T: ElimScalar>(row: &mut [(u32, T)]) {
    let mut g: Option<T> = None;
    for (_, v) in row.iter() {
        g = Some(match g {
            None => v.clone(),
            Some(acc) => acc.gcd(v),
        });
        if g.as_ref().is_some_and(ElimScalar::is_unit) {
            return;
        }
    }
    if let Some(g) = g {
        if !g.is_zero() && !g.is_unit() {
            for (_, v) in row.iter_mut() {
                *v = v.div_exact(&g);
            }
        }
    }
}

/// Returns `sa*target - sb*pivot`, or `None` on overflow.
fn combine_rows<T: ElimScalar>(
    target: &[(u32, T)],
    pivot: &[(u32, T)],
    sa: &T,
    sb: &T,
) -> Option<Vec<(u32, T)>> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    let scale = |v: &T| if sa.is_one() { Some(v.clone()) } else { sa.mul(v) };
    while i < target.len() || j < pivot.len() {
        let ci = target.get(i).map(|e| e.0);
        let cj = pivot.get(j).map(|e| e.0);
        match (ci, cj) {
            (Some(a), Some(b)) if a == b => {
                let v = scale(&target[i].1)?.sub(&sb.mul(&pivot[j].1)?)?;
                if !v.is_zero() {
                    out.push((a, v));
                }
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => {
                out.push((a, scale(&target[i].1)?));
                i += 1;
            }
            (Some(a), None) => {
                out.push((a, scale(&target[i].1)?));
                i += 1;
            }
            (_, Some(b)) => {
                out.push((b, sb.mul(&pivot[j].1)?.neg()?));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Some(out)
}

fn entry_in<T>(row: &[(u32, T)], col: u32) -> Option<&T> {
    row.binary_search_by_key(&col, |e| e.0)
        .ok()
        .map(|pos| &row[pos].1)
}

/// Fraction-free sparse elimination; returns the rank, or `None` if an
/// intermediate value overflowed `T`.
fn eliminate<T: ElimScalar>(rows: Vec<Vec<(u32, T)>>, ncols: usize) -> Option<usize> {
    let mut rows: Vec<Option<Vec<(u32, T)>>> = rows
        .into_iter()
        .map(|r| if r.is_empty() { None } else { Some(r) })
        .collect();
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut col_count: Vec<u32> = vec![0; ncols];
    for (i, row) in rows.iter().enumerate() {
        if let Some(row) = row {
            for (c, _) in row {
                col_rows[*c as usize].push(i as u32);
                col_count[*c as usize] += 1;
            }
        }
    }
    let mut heap: BinaryHeap<Reverse<(u32, u32)>> = (0..ncols)
        .filter(|&c| col_count[c] > 0)
        .map(|c| Reverse((col_count[c], c as u32)))
        .collect();
    let mut done = vec![false; ncols];
    let mut rank = 0;

    while let Some(Reverse((count, col))) = heap.pop() {
        let c = col as usize;
        if done[c] || col_count[c] != count {
            continue;
        }
        if count == 0 {
            done[c] = true;
            continue;
        }
        // Live rows that still contain this column.
        let mut live: Vec<u32> = std::mem::take(&mut col_rows[c])
            .into_iter()
            .filter(|&r| {
                rows[r as usize]
                    .as_ref()
                    .is_some_and(|row| entry_in(row, col).is_some())
            })
            .collect();
        live.sort_unstable();
        live.dedup();
        if live.is_empty() {
            done[c] = true;
            col_count[c] = 0;
            continue;
        }
        let pivot_idx = *live
            .iter()
            .min_by_key(|&&r| {
                let row = rows[r as usize].as_ref().unwrap();
                let unit = entry_in(row, col).unwrap().is_unit();
                (row.len(), !unit, r)
            })
            .unwrap();
        let pivot = rows[pivot_idx as usize].take().unwrap();
        let a = entry_in(&pivot, col).unwrap().clone();
        for &(pc, _) in &pivot {
            let pc = pc as usize;
            col_count[pc] -= 1;
            if !done[pc] && pc != c {
                heap.push(Reverse((col_count[pc], pc as u32)));
            }
        }
        for &r in &live {
            if r == pivot_idx {
                continue;
            }
            let target = rows[r as usize].take().unwrap();
            let b = entry_in(&target, col).unwrap().clone();
            let g = a.gcd(&b);
            let sa = a.div_exact(&g);
            let sb = b.div_exact(&g);
            let mut combined = combine_rows(&target, &pivot, &sa, &sb)?;
            if !sa.is_unit() {
                divide_content(&mut combined);
            }
            // Column bookkeeping: compare supports of target and combined.
            let (mut i, mut j) = (0, 0);
            while i < target.len() || j < combined.len() {
                let ti = target.get(i).map(|e| e.0);
                let cj = combined.get(j).map(|e| e.0);
                match (ti, cj) {
                    (Some(x), Some(y)) if x == y => {
                        i += 1;
                        j += 1;
                    }
                    (Some(x), Some(y)) if x < y => {
                        col_count[x as usize] -= 1;
                        if !done[x as usize] {
                            heap.push(Reverse((col_count[x as usize], x)));
                        }
                        i += 1;
                    }
                    (Some(x), None) => {
                        col_count[x as usize] -= 1;
                        if !done[x as usize] {
                            heap.push(Reverse((col_count[x as usize], x)));
                        }
                        i += 1;
                    }
                    (_, Some(y)) => {
                        col_count[y as usize] += 1;
                        col_rows[y as usize].push(r);
                        if !done[y as usize] {
                            heap.push(Reverse((col_count[y as usize], y)));
                        }
                        j += 1;
                    }
                    (None, None) => unreachable!(),
                }
            }
            if !combined.is_empty() {
                rows[r as usize] = Some(combined);
            }
        }
        done[c] = true;
        col_count[c] = 0;
        rank += 1;
    }
    Some(rank)
}

/// Reduced row echelon basis of a subspace of `Q^n`, used to extract images
/// and to read off coordinates of vectors lying in that image.
#[derive(Clone, Debug)]
pub struct RowSpace {
    ncols: usize,
    /// Basis rows in reduced echelon form; `rows[i]` has a 1 at `pivots[i]`
    /// and zeros at every other pivot column.
    rows: Vec<Vec<(usize, Rational)>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    /// Row-reduces the given vectors (each a sparse list of `(col, value)`).
    pub fn new(ncols: usize, vectors: Vec<Vec<(usize, Rational)>>) -> Self {
        let mut space = RowSpace {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        };
        for v in vectors {
            space.insert(v);
        }
        space
    }

    /// Adds a vector to the spanning set; returns whether the dimension grew.
    pub fn insert(&mut self, mut v: Vec<(usize, Rational)>) -> bool {
        normalize_row(&mut v);
        let mut v = self.reduce(v);
        if v.is_empty() {
            return false;
        }
        let (pc, pv) = v[0].clone();
        for e in v.iter_mut() {
            e.1 = &e.1 / &pv;
        }
        // Clear the new pivot from existing rows.
        for row in self.rows.iter_mut() {
            if let Ok(pos) = row.binary_search_by_key(&pc, |e| e.0) {
                let f = row[pos].1.clone();
                let mut acc: Vec<(usize, Rational)> = row.clone();
                acc.extend(v.iter().map(|(j, x)| (*j, -(&f * x))));
                normalize_row(&mut acc);
                *row = acc;
            }
        }
        let pos = self.pivots.partition_point(|&p| p < pc);
        self.pivots.insert(pos, pc);
        self.rows.insert(pos, v);
        true
    }

    fn reduce(&self, mut v: Vec<(usize, Rational)>) -> Vec<(usize, Rational)> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if let Ok(pos) = v.binary_search_by_key(&p, |e| e.0) {
                let f = v[pos].1.clone();
                v.extend(row.iter().map(|(j, x)| (*j, -(&f * x))));
                normalize_row(&mut v);
            }
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn basis(&self) -> &[Vec<(usize, Rational)>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is not in
    /// the subspace.
    pub fn coordinates(&self, v: &[(usize, Rational)]) -> Option<Vec<Rational>> {
        let mut v = v.to_vec();
        normalize_row(&mut v);
        let coords: Vec<Rational> = self
            .pivots
            .iter()
            .map(|p| match v.binary_search_by_key(p, |e| e.0) {
                Ok(pos) => v[pos].1.clone(),
                Err(_) => Rational::zero(),
            })
            .collect();
        let residual = self.reduce(v);
        residual.is_empty().then_some(coords)
    }
}
