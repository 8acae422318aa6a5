//! Super vector spaces: parity-tagged bases, Koszul signs, symmetric-group
//! actions on tensor powers and bases of super exterior powers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use num_traits::{One, Zero};

use crate::exactla::{Rational, SparseMatrix};
use crate::{Error, Result};

/// Element of Z/2.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Parity {
    #[default]
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u32) -> Self {
        if bit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Self {
        self + Parity::Odd
    }

    /// `(-1)^(self * other)`.
    pub fn koszul(self, other: Parity) -> i32 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

impl std::iter::Sum for Parity {
    fn sum<I: Iterator<Item = Parity>>(iter: I) -> Parity {
        iter.fold(Parity::Even, |a, b| a + b)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Ordered basis of a super vector space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperBasis {
    labels: Vec<String>,
    parities: Vec<Parity>,
}

impl SuperBasis {
    pub fn new(elements: Vec<(String, Parity)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (label, _) in &elements {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate basis label {label}")));
            }
        }
        let (labels, parities) = elements.into_iter().unzip();
        Ok(SuperBasis { labels, parities })
    }

    /// Basis `x1..xm, y1..yn` of a space of superdimension `(m, n)`.
    pub fn standard(m: usize, n: usize) -> Self {
        let elements = (0..m)
            .map(|i| (format!("x{}", i + 1), Parity::Even))
            .chain((0..n).map(|j| (format!("y{}", j + 1), Parity::Odd)))
            .collect();
        SuperBasis::new(elements).expect("labels are distinct")
    }

    pub fn from_parities(parities: &[Parity]) -> Self {
        SuperBasis {
            labels: (0..parities.len()).map(|i| format!("b{i}")).collect(),
            parities: parities.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parities[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    /// `(dim of even part, dim of odd part)`.
    pub fn superdim(&self) -> (usize, usize) {
        let odd = self.parities.iter().filter(|p| p.is_odd()).count();
        (self.len() - odd, odd)
    }
}

/// Finitely supported linear combination of basis vectors, keyed by basis
/// position.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedVector {
    coeffs: BTreeMap<usize, Rational>,
}

impl SignedVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(i: usize) -> Self {
        let mut v = Self::new();
        v.add_term(i, Rational::one());
        v
    }

    pub fn add_term(&mut self, i: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(i) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SignedVector, c: &Rational) {
        for (i, v) in &other.coeffs {
            self.add_term(*i, v * c);
        }
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn to_pairs(&self) -> Vec<(usize, Rational)> {
        self.coeffs.iter().map(|(i, c)| (*i, c.clone())).collect()
    }
}

impl FromIterator<(usize, Rational)> for SignedVector {
    fn from_iter<T: IntoIterator<Item = (usize, Rational)>>(iter: T) -> Self {
        let mut v = SignedVector::new();
        for (i, c) in iter {
            v.add_term(i, c);
        }
        v
    }
}

fn check_permutation(perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(Error::InvalidInput(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Sign picked up when the sequence `x_0, ..., x_{k-1}` with the given
/// parities is rearranged into `x_{perm[0]}, ..., x_{perm[k-1]}`.
///
/// The rearrangement is performed by bubble sort on `perm`; every adjacent
/// swap of two odd elements contributes a factor of `-1`.
pub fn koszul_sign(perm: &[usize], parities: &[Parity]) -> Result<i32> {
    check_permutation(perm)?;
    if parities.len() != perm.len() {
        return Err(Error::InvalidInput(format!(
            "permutation of length {} with {} parities",
            perm.len(),
            parities.len()
        )));
    }
    Ok(bubble_sign(perm, parities))
}

fn bubble_sign(perm: &[usize], parities: &[Parity]) -> i32 {
    let mut seq = perm.to_vec();
    let mut sign = 1;
    let n = seq.len();
    for pass in 0..n {
        for i in 0..n.saturating_sub(1 + pass) {
            if seq[i] > seq[i + 1] {
                sign *= parities[seq[i]].koszul(parities[seq[i + 1]]);
                seq.swap(i, i + 1);
            }
        }
    }
    sign
}

/// Ordinary sign of a permutation.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    bubble_sign(perm, &vec![Parity::Odd; perm.len()])
}

/// Composition in the convention of [`super_tensor_power_action`]:
/// `action(compose(a, b)) == action(a) * action(b)`.
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|&t| b[t]).collect()
}

/// Index of a tuple in the lexicographically ordered basis of `V^{⊗k}`.
pub fn tensor_index(tuple: &[usize], dim: usize) -> usize {
    tuple.iter().fold(0, |acc, &i| acc * dim + i)
}

/// Inverse of [`tensor_index`].
pub fn tensor_tuple(mut index: usize, dim: usize, k: usize) -> Vec<usize> {
    let mut tuple = vec![0; k];
    for slot in tuple.iter_mut().rev() {
        *slot = index % dim;
        index /= dim;
    }
    tuple
}

/// Applies `perm` to a basis tensor `v_{t_0} ⊗ ... ⊗ v_{t_{k-1}}`: the output
/// holds factor `perm[i]` of the input in slot `i`, with the Koszul sign.
pub fn permute_tensor(tuple: &[usize], perm: &[usize], parities: &[Parity]) -> (i32, Vec<usize>) {
    let factor_parities: Vec<Parity> = tuple.iter().map(|&i| parities[i]).collect();
    let sign = bubble_sign(perm, &factor_parities);
    (sign, perm.iter().map(|&p| tuple[p]).collect())
}

/// Matrix of a permutation acting on `V^{⊗k}` with Koszul signs, in the
/// lexicographic tensor basis. Columns are inputs.
pub fn super_tensor_power_action(space: &SuperBasis, k: usize, perm: &[usize]) -> Result<SparseMatrix> {
    check_permutation(perm)?;
    if perm.len() != k {
        return Err(Error::InvalidInput(format!(
            "permutation of length {} acting on tensor power {k}",
            perm.len()
        )));
    }
    let dim = space.len();
    let total = dim.pow(k as u32);
    let triplets = (0..total).map(|col| {
        let tuple = tensor_tuple(col, dim, k);
        let (sign, out) = permute_tensor(&tuple, perm, space.parities());
        (tensor_index(&out, dim), col, Rational::from_integer(sign.into()))
    });
    Ok(SparseMatrix::from_triplets(total, total, triplets))
}

/// Basis of the super exterior power `Λ^p(V)`: exterior in the even basis
/// vectors, symmetric in the odd ones.
///
/// Each monomial lists basis positions with even factors first, then odd
/// factors, each in increasing position order; odd factors may repeat. The
/// monomials themselves are ordered lexicographically.
pub fn super_exterior_basis(space: &SuperBasis, p: usize) -> Vec<Vec<usize>> {
    let evens: Vec<usize> = (0..space.len()).filter(|&i| !space.parity(i).is_odd()).collect();
    let odds: Vec<usize> = (0..space.len()).filter(|&i| space.parity(i).is_odd()).collect();
    let mut out = Vec::new();
    for j in 0..=p.min(evens.len()) {
        for even_part in subsets(&evens, j) {
            for odd_part in multisets(&odds, p - j) {
                let mut mono = even_part.clone();
                mono.extend(odd_part);
                out.push(mono);
            }
        }
    }
    out.sort();
    out
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn multisets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in multisets(&items[i..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Product of two sorted monomials in a free graded-commutative algebra.
///
/// Generators are identified by index; `odd(g)` tells whether generator `g`
/// anticommutes with other odd generators (and so squares to zero). Returns
/// the sign and the sorted product, or `None` if the product vanishes.
pub fn multiply_monomials<F>(a: &[u32], b: &[u32], odd: F) -> Option<(i32, Vec<u32>)>
where
    F: Fn(u32) -> bool,
{
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut odd_remaining_in_a = a.iter().filter(|&&g| odd(g)).count();
    let mut sign = 1;
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => {
                if x == y && odd(*x) {
                    return None;
                }
                x <= y
            }
            (Some(_), None) => true,
            (None, _) => false,
        };
        if take_a {
            if odd(a[i]) {
                odd_remaining_in_a -= 1;
            }
            out.push(a[i]);
            i += 1;
        } else {
            if odd(b[j]) && odd_remaining_in_a % 2 == 1 {
                sign = -sign;
            }
            out.push(b[j]);
            j += 1;
        }
    }
    Some((sign, out))
}

/// Sorts an arbitrary word of generators with Koszul signs, by bubble sort.
/// Returns `None` if an odd generator repeats.
pub fn sort_monomial<F>(word: &[u32], odd: F) -> Option<(i32, Vec<u32>)>
where
    F: Fn(u32) -> bool,
{
    let mut seq = word.to_vec();
    let mut sign = 1;
    let n = seq.len();
    for pass in 0..n {
        for i in 0..n.saturating_sub(1 + pass) {
            if seq[i] > seq[i + 1] {
                if odd(seq[i]) && odd(seq[i + 1]) {
                    sign = -sign;
                }
                seq.swap(i, i + 1);
            }
        }
    }
    if seq.windows(2).any(|w| w[0] == w[1] && odd(w[0])) {
        return None;
    }
    Some((sign, seq))
}
