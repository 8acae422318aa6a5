//! Finite commutative DGA models of skeletal bundles, spheres and
//! suspensions, and the Betti tables they predict.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::cohomology::BettiTable;
use crate::exactla::{rat, Rational, SparseMatrix};
use crate::{Error, Result};

/// Exponent vector over the generators of a model.
pub type Monomial = Vec<u32>;
pub type Polynomial = Vec<(Rational, Monomial)>;

/// Graded-commutative algebra on generators of positive degree, modulo all
/// monomials whose degree in the even generators exceeds `truncation`, with
/// a differential given on generators.
#[derive(Clone, Debug)]
pub struct CdgaModel {
    names: Vec<String>,
    degrees: Vec<usize>,
    truncation: Option<usize>,
    differential: Vec<Polynomial>,
    basis: BTreeMap<usize, Vec<Monomial>>,
}

impl CdgaModel {
    pub fn new(
        generators: Vec<(String, usize)>,
        truncation: Option<usize>,
        differential: Vec<Polynomial>,
    ) -> Result<Self> {
        if differential.len() != generators.len() {
            return Err(Error::InvalidInput(format!(
                "{} generators but {} differentials",
                generators.len(),
                differential.len()
            )));
        }
        let (names, degrees): (Vec<String>, Vec<usize>) = generators.into_iter().unzip();
        if let Some(k) = degrees.iter().position(|&d| d == 0) {
            return Err(Error::InvalidInput(format!("generator {} has degree 0", names[k])));
        }
        if truncation.is_none() && degrees.iter().any(|d| d % 2 == 0) {
            return Err(Error::InvalidInput(
                "even generators need a truncation to keep the model finite".into(),
            ));
        }
        let mut model = CdgaModel {
            names,
            degrees,
            truncation,
            differential: Vec::new(),
            basis: BTreeMap::new(),
        };
        for (k, poly) in differential.iter().enumerate() {
            for (c, mono) in poly {
                if mono.len() != model.len() {
                    return Err(Error::InvalidInput(format!("d{} has a malformed monomial", model.names[k])));
                }
                if !c.is_zero() && model.degree(mono) != model.degrees[k] + 1 {
                    return Err(Error::InvalidInput(format!(
                        "d{} does not have degree {}",
                        model.names[k],
                        model.degrees[k] + 1
                    )));
                }
            }
        }
        model.differential = differential;
        model.enumerate_basis();
        for (&p, monos) in &model.basis {
            if monos.iter().any(|m| !model.apply_d(&model.d(m)).is_empty()) {
                return Err(Error::DifferentialNotNilpotent { degree: p });
            }
        }
        Ok(model)
    }

    /// Model with zero differential, free graded-commutative on the given
    /// odd degrees.
    pub fn exterior(degrees: &[usize]) -> Result<Self> {
        if let Some(d) = degrees.iter().find(|d| *d % 2 == 0) {
            return Err(Error::InvalidInput(format!("exterior generator of even degree {d}")));
        }
        let gens = degrees.iter().map(|d| (format!("e{d}"), *d)).collect();
        CdgaModel::new(gens, None, vec![Vec::new(); degrees.len()])
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    /// Highest degree of a basis monomial.
    pub fn top_degree(&self) -> usize {
        self.basis.keys().next_back().copied().unwrap_or(0)
    }

    /// Basis monomials of degree `p`.
    pub fn basis(&self, p: usize) -> &[Monomial] {
        self.basis.get(&p).map(Vec::as_slice).unwrap_or(&[])
    }

    fn is_odd(&self, k: usize) -> bool {
        self.degrees[k] % 2 == 1
    }

    fn degree(&self, mono: &[u32]) -> usize {
        mono.iter().zip(&self.degrees).map(|(&e, &d)| e as usize * d).sum()
    }

    fn even_degree(&self, mono: &[u32]) -> usize {
        (0..self.len())
            .filter(|&k| !self.is_odd(k))
            .map(|k| mono[k] as usize * self.degrees[k])
            .sum()
    }

    fn survives(&self, mono: &[u32]) -> bool {
        self.truncation.is_none_or(|t| self.even_degree(mono) <= t)
    }

    fn enumerate_basis(&mut self) {
        let mut out: BTreeMap<usize, Vec<Monomial>> = BTreeMap::new();
        let mut cur = vec![0u32; self.len()];
        self.extend_basis(0, &mut cur, &mut out);
        self.basis = out;
    }

    fn extend_basis(&self, k: usize, cur: &mut Monomial, out: &mut BTreeMap<usize, Vec<Monomial>>) {
        if k == self.len() {
            out.entry(self.degree(cur)).or_default().push(cur.clone());
            return;
        }
        let max = if self.is_odd(k) { 1 } else { u32::MAX };
        let mut e = 0;
        while e <= max {
            cur[k] = e;
            if !self.survives(cur) {
                break;
            }
            self.extend_basis(k + 1, cur, out);
            e += 1;
        }
        cur[k] = 0;
    }

    /// Product of monomials with the Koszul sign, or `None` if it vanishes.
    fn multiply(&self, a: &[u32], b: &[u32]) -> Option<(i64, Monomial)> {
        let mut sign = 1i64;
        let mut out = vec![0u32; self.len()];
        let mut odd_after = 0u32;
        for k in (0..self.len()).rev() {
            if self.is_odd(k) {
                if a[k] + b[k] > 1 {
                    return None;
                }
                // b's factor k moves left past a's odd factors above k
                if b[k] == 1 && odd_after % 2 == 1 {
                    sign = -sign;
                }
                odd_after += a[k];
            }
            out[k] = a[k] + b[k];
        }
        self.survives(&out).then_some((sign, out))
    }

    /// Differential of a basis monomial.
    fn d(&self, mono: &[u32]) -> Polynomial {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        let mut prefix = vec![0u32; self.len()];
        let mut prefix_odd = false;
        for k in 0..self.len() {
            for copy in 0..mono[k] {
                let mut suffix = mono.to_vec();
                for (j, s) in suffix.iter_mut().enumerate() {
                    if j < k {
                        *s = 0;
                    }
                }
                suffix[k] -= copy + 1;
                for (c, t) in &self.differential[k] {
                    let Some((s1, left)) = self.multiply(&prefix, t) else {
                        continue;
                    };
                    let Some((s2, word)) = self.multiply(&left, &suffix) else {
                        continue;
                    };
                    let mut s = s1 * s2;
                    if prefix_odd {
                        s = -s;
                    }
                    *acc.entry(word).or_insert_with(Rational::zero) += c * rat(s);
                }
                prefix[k] += 1;
                prefix_odd ^= self.is_odd(k);
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (c, m)).collect()
    }

    fn apply_d(&self, poly: &Polynomial) -> Polynomial {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (c, m) in poly {
            for (c2, t) in self.d(m) {
                *acc.entry(t).or_insert_with(Rational::zero) += c * c2;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (c, m)).collect()
    }

    /// Matrix of `d: A^p → A^{p+1}` in the basis order of [`Self::basis`].
    pub fn differential_matrix(&self, p: usize) -> SparseMatrix {
        let source = self.basis(p);
        let target = self.basis(p + 1);
        let index: HashMap<&Monomial, usize> = target.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut triplets = Vec::new();
        for (col, m) in source.iter().enumerate() {
            for (c, t) in self.d(m) {
                triplets.push((index[&t], col, c));
            }
        }
        SparseMatrix::from_triplets(target.len(), source.len(), triplets)
    }
}

/// Betti table of a model in degrees `0..=P`.
pub fn cdga_cohomology(model: &CdgaModel, p_top: usize) -> BettiTable {
    let ranks: Vec<usize> = (0..=p_top).map(|p| model.differential_matrix(p).rank()).collect();
    BettiTable::new(
        (0..=p_top)
            .map(|p| model.basis(p).len() - ranks[p] - if p == 0 { 0 } else { ranks[p - 1] })
            .collect(),
    )
}

/// Full Betti table of a model, through its top degree.
pub fn cdga_cohomology_full(model: &CdgaModel) -> BettiTable {
    cdga_cohomology(model, model.top_degree())
}

/// `Λ[e_1, e_3, …, e_{2m−1}] ⊗ k[c_1, …, c_m] / (degree > 2d)`, with
/// `d e_{2i−1} = c_i` and `deg c_i = 2i`.
pub fn skeleton_bundle_model(m: usize, two_d: usize) -> Result<CdgaModel> {
    if m == 0 {
        return Err(Error::InvalidInput("skeleton bundle model needs m ≥ 1".into()));
    }
    let mut gens = Vec::with_capacity(2 * m);
    for i in 1..=m {
        gens.push((format!("e{}", 2 * i - 1), 2 * i - 1));
    }
    for i in 1..=m {
        gens.push((format!("c{i}"), 2 * i));
    }
    let mut differential = Vec::with_capacity(2 * m);
    for i in 0..m {
        let mut c = vec![0u32; 2 * m];
        c[m + i] = 1;
        differential.push(vec![(rat(1), c)]);
    }
    differential.extend(std::iter::repeat_n(Vec::new(), m));
    CdgaModel::new(gens, Some(two_d), differential)
}

/// Betti table of `GL(m)`: exterior on degrees `1, 3, …, 2m−1`.
pub fn gl_fiber_betti(m: usize) -> BettiTable {
    let degrees: Vec<usize> = (1..=m).map(|i| 2 * i - 1).collect();
    exterior_betti(&degrees)
}

/// Poincaré coefficients of an exterior algebra on odd generators.
pub fn exterior_betti(degrees: &[usize]) -> BettiTable {
    let top: usize = degrees.iter().sum();
    let mut b = vec![0usize; top + 1];
    b[0] = 1;
    for &d in degrees {
        for p in (d..=top).rev() {
            b[p] += b[p - d];
        }
    }
    BettiTable::new(b)
}

/// Reduced-cohomology shift by `N`. The empty space suspends to `S^{N−1}`.
pub fn suspend(b: &BettiTable, n: usize) -> BettiTable {
    if n == 0 {
        return b.clone();
    }
    if b.is_empty() {
        let mut out = vec![0usize; n];
        out[n - 1] += 1;
        out[0] += 1;
        return BettiTable::new(out);
    }
    let dims = b.dims();
    let mut out = vec![0usize; dims.len() + n];
    out[0] = 1;
    out[n] += dims[0].saturating_sub(1);
    for (i, &x) in dims.iter().enumerate().skip(1) {
        out[i + n] += x;
    }
    BettiTable::new(out)
}

/// Betti table of the suspended skeletal bundle `S^{2n} X_{2(m−n)}`, through
/// its top degree and at least degree `P`.
pub fn predicted_betti(m: usize, n: usize, p_top: usize) -> Result<BettiTable> {
    let table = match m.cmp(&n) {
        std::cmp::Ordering::Greater => {
            let model = skeleton_bundle_model(m, 2 * (m - n))?;
            suspend(&cdga_cohomology_full(&model), 2 * n)
        }
        std::cmp::Ordering::Equal if m == 0 => {
            return Err(Error::InvalidInput("V_{0,0} is zero".into()));
        }
        std::cmp::Ordering::Equal => suspend(&gl_fiber_betti(m), 2 * n),
        std::cmp::Ordering::Less => suspend(&BettiTable::empty(), 2 * n),
    };
    let len = table.len().max(p_top + 1);
    Ok(table.prefix(len - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(v: &[usize]) -> BettiTable {
        BettiTable::new(v.to_vec())
    }

    #[test]
    fn skeleton_examples() {
        let x = |m, d| cdga_cohomology_full(&skeleton_bundle_model(m, d).unwrap());
        assert_eq!(x(1, 0), t(&[1, 1]));
        assert_eq!(x(1, 2), t(&[1, 0, 0, 1]));
        assert_eq!(x(2, 2), t(&[1, 0, 0, 2, 0, 0, 1]));
    }

    #[test]
    fn small_models() {
        let circle = CdgaModel::exterior(&[1]).unwrap();
        assert_eq!(cdga_cohomology(&circle, 1), t(&[1, 1]));
        let s3 = CdgaModel::new(
            vec![("e1".into(), 1), ("c1".into(), 2)],
            Some(2),
            vec![vec![(rat(1), vec![0, 1])], vec![]],
        )
        .unwrap();
        assert_eq!(cdga_cohomology(&s3, 3), t(&[1, 0, 0, 1]));
        let trunc = CdgaModel::new(vec![("c1".into(), 2)], Some(4), vec![vec![]]).unwrap();
        assert_eq!(cdga_cohomology(&trunc, 4), t(&[1, 0, 1, 0, 1]));
    }

    #[test]
    fn degree_and_nilpotency_checked() {
        let bad_degree = CdgaModel::new(
            vec![("e1".into(), 1), ("c1".into(), 2)],
            Some(2),
            vec![vec![(rat(1), vec![1, 0])], vec![]],
        );
        assert!(bad_degree.is_err());
        // d e1 = c1, d y = e1 c1: d² y = c1² ≠ 0
        let not_nil = CdgaModel::new(
            vec![("e1".into(), 1), ("y".into(), 2), ("c1".into(), 2)],
            Some(4),
            vec![vec![(rat(1), vec![0, 0, 1])], vec![(rat(1), vec![1, 0, 1])], vec![]],
        );
        assert!(matches!(not_nil, Err(Error::DifferentialNotNilpotent { .. })));
    }

    #[test]
    fn suspend_examples() {
        assert_eq!(suspend(&t(&[1, 1]), 2), t(&[1, 0, 0, 1]));
        assert_eq!(suspend(&BettiTable::empty(), 2), t(&[1, 1]));
        assert_eq!(suspend(&BettiTable::empty(), 1), t(&[2]));
        assert_eq!(suspend(&t(&[1]), 3), t(&[1, 0, 0, 0]));
        assert_eq!(suspend(&t(&[2]), 1), t(&[1, 1]));
    }

    #[test]
    fn predicted_examples() {
        assert_eq!(predicted_betti(1, 1, 0).unwrap(), t(&[1, 0, 0, 1]));
        assert_eq!(predicted_betti(0, 1, 0).unwrap(), t(&[1, 1]));
        assert_eq!(predicted_betti(2, 1, 0).unwrap(), t(&[1, 0, 0, 0, 0, 2, 0, 0, 1]));
        assert_eq!(predicted_betti(1, 0, 4).unwrap(), t(&[1, 0, 0, 1, 0]));
        assert_eq!(predicted_betti(1, 2, 4).unwrap(), t(&[1, 0, 0, 1, 0]));
        assert!(predicted_betti(0, 0, 3).is_err());
    }

    #[test]
    fn skeleton_is_2d_connected() {
        for m in 1..=2 {
            for d in 0..=4 {
                let b = cdga_cohomology_full(&skeleton_bundle_model(m, 2 * d).unwrap());
                assert_eq!(b.get(0), 1);
                for p in 1..=2 * d {
                    assert_eq!(b.get(p), 0, "m={m} 2d={}", 2 * d);
                }
            }
        }
    }

    #[test]
    fn rank_one_skeleton_is_odd_sphere() {
        for d in 0..=5 {
            let b = cdga_cohomology_full(&skeleton_bundle_model(1, 2 * d).unwrap());
            let mut s = vec![0; 2 * d + 2];
            s[0] = 1;
            s[2 * d + 1] = 1;
            assert_eq!(b, t(&s));
            let rev: Vec<usize> = b.dims().iter().rev().copied().collect();
            assert_eq!(b.dims(), rev.as_slice());
        }
    }

    #[test]
    fn zero_skeleton_is_fiber() {
        for m in 1..=3 {
            assert_eq!(
                cdga_cohomology_full(&skeleton_bundle_model(m, 0).unwrap()),
                gl_fiber_betti(m)
            );
        }
    }

    #[test]
    fn euler_characteristic_of_model() {
        // χ of the complex equals χ of its cohomology
        let model = skeleton_bundle_model(3, 6).unwrap();
        let b = cdga_cohomology_full(&model);
        let chi = |f: &dyn Fn(usize) -> usize| -> i64 {
            (0..=model.top_degree()).map(|p| if p % 2 == 0 { f(p) as i64 } else { -(f(p) as i64) }).sum()
        };
        assert_eq!(chi(&|p| model.basis(p).len()), chi(&|p| b.get(p)));
    }

    proptest! {
        #[test]
        fn suspension_composes(dims in proptest::collection::vec(0usize..4, 0..6), a in 0usize..4, b in 0usize..4) {
            let mut dims = dims;
            if let Some(x) = dims.first_mut() { *x = (*x).max(1); }
            let table = BettiTable::new(dims);
            prop_assert_eq!(suspend(&suspend(&table, a), b), suspend(&table, a + b));
        }
    }
}
