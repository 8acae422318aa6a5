//! Finite-dimensional Lie superalgebras and their modules.
//!
//! Every algebra carries a torus: a list of even, mutually commuting basis
//! elements acting diagonally in the adjoint representation. Each basis
//! vector of an algebra or module has a torus weight (an integer vector with
//! one entry per torus element); the Euler element `h` is the sum of the
//! torus elements, so the h-weight is the sum of the entries.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::diagrams::Partition;
use crate::exactla::{rat, ratio, Rational, RowSpace, SparseMatrix};
use crate::superlin::{permutation_sign, permute_tensor, sort_monomial, Parity, SuperBasis};
use crate::{Error, Result};

/// Sparse vector as sorted `(index, coefficient)` pairs without zeros.
pub type SparseVec = Vec<(usize, Rational)>;

fn collect_sparse(map: BTreeMap<usize, Rational>) -> SparseVec {
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn add_into(map: &mut BTreeMap<usize, Rational>, i: usize, c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = map.entry(i).or_insert_with(Rational::zero);
    *e += c;
}

fn sign_rat(sign: i32) -> Rational {
    rat(sign as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    Gl { m: usize, n: usize },
    Vect { m: usize, n: usize, dmax: usize },
}

#[derive(Clone, Debug)]
pub struct LieSuperalgebra {
    kind: AlgebraKind,
    basis: SuperBasis,
    weights: Vec<Vec<i64>>,
    torus: Vec<usize>,
    brackets: Vec<SparseVec>,
    truncation: Option<usize>,
}

impl LieSuperalgebra {
    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    pub fn name(&self) -> String {
        match self.kind {
            AlgebraKind::Gl { m, n } => format!("gl({m},{n})"),
            AlgebraKind::Vect { m, n, dmax } => format!("vect({m},{n};{dmax})"),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &SuperBasis {
        &self.basis
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.basis.parity(i)
    }

    pub fn label(&self, i: usize) -> &str {
        self.basis.label(i)
    }

    /// Torus weight of basis element `i`.
    pub fn weight(&self, i: usize) -> &[i64] {
        &self.weights[i]
    }

    pub fn h_weight(&self, i: usize) -> i64 {
        self.weights[i].iter().sum()
    }

    /// Basis indices of the torus elements.
    pub fn torus(&self) -> &[usize] {
        &self.torus
    }

    pub fn torus_rank(&self) -> usize {
        self.torus.len()
    }

    /// `[b_i, b_j]` as a sparse vector.
    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.brackets[i * self.dim() + j]
    }

    /// Degree above which brackets were dropped, when the construction
    /// actually dropped something.
    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn even_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.parity(i).is_odd()).collect()
    }

    pub fn odd_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parity(i).is_odd()).collect()
    }

    /// Bilinear extension of the bracket to sparse vectors of homogeneous
    /// basis elements.
    pub fn bracket_vectors(&self, x: &[(usize, Rational)], y: &[(usize, Rational)]) -> SparseVec {
        let mut acc = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                let ab = a * b;
                for (k, c) in self.bracket(*i, *j) {
                    add_into(&mut acc, *k, &ab * c);
                }
            }
        }
        collect_sparse(acc)
    }

    /// Pairs `(i, j)` violating `[x,y] = -(-1)^{x̄ȳ}[y,x]`.
    pub fn antisymmetry_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let s = sign_rat(-self.parity(i).koszul(self.parity(j)));
                let flipped: SparseVec = self.bracket(j, i).iter().map(|(k, c)| (*k, c * &s)).collect();
                if self.bracket(i, j) != flipped.as_slice() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Whether every bracket in the Jacobi identity for this triple is
    /// computed without truncation.
    pub fn triple_in_exact_range(&self, i: usize, j: usize, k: usize) -> bool {
        match self.truncation {
            None => true,
            Some(dmax) => {
                let d = dmax as i64;
                let (a, b, c) = (self.h_weight(i), self.h_weight(j), self.h_weight(k));
                a + b <= d && a + c <= d && b + c <= d && a + b + c <= d
            }
        }
    }

    /// Basis triples violating `[[x,y],z] = [x,[y,z]] - (-1)^{x̄ȳ}[y,[x,z]]`.
    /// With `exact_range_only`, triples touching truncated brackets are
    /// skipped.
    pub fn jacobi_violations(&self, exact_range_only: bool) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let xy = self.bracket(i, j).to_vec();
                for k in 0..n {
                    if exact_range_only && !self.triple_in_exact_range(i, j, k) {
                        continue;
                    }
                    let unit_i = [(i, Rational::one())];
                    let unit_j = [(j, Rational::one())];
                    let unit_k = [(k, Rational::one())];
                    let lhs = self.bracket_vectors(&xy, &unit_k);
                    let yz = self.bracket(j, k).to_vec();
                    let xz = self.bracket(i, k).to_vec();
                    let t1 = self.bracket_vectors(&unit_i, &yz);
                    let t2 = self.bracket_vectors(&unit_j, &xz);
                    let s = sign_rat(self.parity(i).koszul(self.parity(j)));
                    let mut acc = BTreeMap::new();
                    for (a, c) in t1 {
                        add_into(&mut acc, a, c);
                    }
                    for (a, c) in t2 {
                        add_into(&mut acc, a, -(&s * c));
                    }
                    for (a, c) in lhs {
                        add_into(&mut acc, a, -c);
                    }
                    if !collect_sparse(acc).is_empty() {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        if let Some(&(i, j)) = self.antisymmetry_violations().first() {
            return Err(Error::InvalidInput(format!(
                "{}: bracket not super-antisymmetric on ({}, {})",
                self.name(),
                self.label(i),
                self.label(j)
            )));
        }
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let expect_parity = self.parity(i) + self.parity(j);
                let expect_weight: Vec<i64> =
                    self.weights[i].iter().zip(&self.weights[j]).map(|(a, b)| a + b).collect();
                for (k, _) in self.bracket(i, j) {
                    if self.parity(*k) != expect_parity || self.weights[*k] != expect_weight {
                        return Err(Error::InvalidInput(format!(
                            "{}: [{}, {}] is not homogeneous",
                            self.name(),
                            self.label(i),
                            self.label(j)
                        )));
                    }
                }
            }
        }
        for (r, &t) in self.torus.iter().enumerate() {
            if self.parity(t).is_odd() {
                return Err(Error::InvalidInput(format!("{}: odd torus element", self.name())));
            }
            for j in 0..self.dim() {
                let w = self.weights[j][r];
                let expect: SparseVec = if w == 0 { Vec::new() } else { vec![(j, rat(w))] };
                if self.bracket(t, j) != expect.as_slice() {
                    return Err(Error::InvalidInput(format!(
                        "{}: torus element {} does not act diagonally on {}",
                        self.name(),
                        self.label(t),
                        self.label(j)
                    )));
                }
            }
        }
        if let Some(&(i, j, k)) = self.jacobi_violations(true).first() {
            return Err(Error::InvalidInput(format!(
                "{}: Jacobi identity fails on ({}, {}, {})",
                self.name(),
                self.label(i),
                self.label(j),
                self.label(k)
            )));
        }
        Ok(())
    }

    /// The same algebra with basis element `order[k]` moved to position `k`.
    pub fn reindexed(&self, order: &[usize]) -> Result<LieSuperalgebra> {
        let n = self.dim();
        let mut inverse = vec![usize::MAX; n];
        for (new, &old) in order.iter().enumerate() {
            if old >= n || inverse[old] != usize::MAX {
                return Err(Error::InvalidInput(format!("{order:?} is not a permutation")));
            }
            inverse[old] = new;
        }
        if order.len() != n {
            return Err(Error::InvalidInput(format!("{order:?} is not a permutation")));
        }
        let basis = SuperBasis::new(
            order
                .iter()
                .map(|&o| (self.label(o).to_string(), self.parity(o)))
                .collect(),
        )?;
        let mut brackets = vec![Vec::new(); n * n];
        for a in 0..n {
            for b in 0..n {
                let mut v: SparseVec = self
                    .bracket(order[a], order[b])
                    .iter()
                    .map(|(k, c)| (inverse[*k], c.clone()))
                    .collect();
                v.sort_by_key(|e| e.0);
                brackets[a * n + b] = v;
            }
        }
        let alg = LieSuperalgebra {
            kind: self.kind.clone(),
            basis,
            weights: order.iter().map(|&o| self.weights[o].clone()).collect(),
            torus: self.torus.iter().map(|&t| inverse[t]).collect(),
            brackets,
            truncation: self.truncation,
        };
        alg.validate()?;
        Ok(alg)
    }
}

fn std_parity(m: usize, i: usize) -> Parity {
    if i < m {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// The general linear superalgebra of an `(m|n)`-dimensional space, with
/// basis `e_ij` in row-major order.
pub fn gl(m: usize, n: usize) -> Result<LieSuperalgebra> {
    let d = m + n;
    if d == 0 {
        return Err(Error::InvalidInput("gl(0,0) is zero".into()));
    }
    let idx = |i: usize, j: usize| i * d + j;
    let p = |i: usize| std_parity(m, i);
    let mut elements = Vec::with_capacity(d * d);
    let mut weights = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            elements.push((format!("e{}_{}", i + 1, j + 1), p(i) + p(j)));
            let mut w = vec![0i64; d];
            w[i] += 1;
            w[j] -= 1;
            weights.push(w);
        }
    }
    let mut brackets = vec![Vec::new(); d * d * d * d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let mut acc = BTreeMap::new();
                    if j == k {
                        add_into(&mut acc, idx(i, l), Rational::one());
                    }
                    if l == i {
                        let s = (p(i) + p(j)).koszul(p(k) + p(l));
                        add_into(&mut acc, idx(k, j), rat(-(s as i64)));
                    }
                    brackets[idx(i, j) * d * d + idx(k, l)] = collect_sparse(acc);
                }
            }
        }
    }
    let alg = LieSuperalgebra {
        kind: AlgebraKind::Gl { m, n },
        basis: SuperBasis::new(elements)?,
        weights,
        torus: (0..d).map(|i| idx(i, i)).collect(),
        brackets,
        truncation: None,
    };
    alg.validate()?;
    Ok(alg)
}

type Monomial = Vec<u8>;

fn variable_name(m: usize, v: usize) -> String {
    if v < m {
        format!("x{}", v + 1)
    } else {
        format!("xi{}", v - m + 1)
    }
}

fn monomials_of_degree(m: usize, n: usize, k: usize) -> Vec<Monomial> {
    fn go(v: usize, left: usize, m: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if v == cur.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let cap = if v < m { left } else { left.min(1) };
        for e in (0..=cap).rev() {
            cur[v] = e as u8;
            go(v + 1, left - e, m, cur, out);
        }
        cur[v] = 0;
    }
    let mut out = Vec::new();
    go(0, k, m, &mut vec![0; m + n], &mut out);
    out
}

/// `∂_a` applied to a monomial, with the sign from passing earlier odd
/// variables.
fn differentiate(m: usize, a: usize, mono: &Monomial) -> Option<(i64, Monomial)> {
    if mono[a] == 0 {
        return None;
    }
    let mut coeff = mono[a] as i64;
    if a >= m {
        let passed: u32 = mono[m..a].iter().map(|&e| e as u32).sum();
        if passed % 2 == 1 {
            coeff = -coeff;
        }
    }
    let mut out = mono.clone();
    out[a] -= 1;
    Some((coeff, out))
}

fn multiply(m: usize, f: &Monomial, g: &Monomial) -> Option<(i64, Monomial)> {
    let mut sign = 1;
    for v in m..f.len() {
        if g[v] == 1 {
            if f[v] == 1 {
                return None;
            }
            let later_in_f: u32 = f[v + 1..].iter().map(|&e| e as u32).sum();
            if later_in_f % 2 == 1 {
                sign = -sign;
            }
        }
    }
    Some((sign, f.iter().zip(g).map(|(a, b)| a + b).collect()))
}

/// Polynomial vector fields on the `(m|n)`-dimensional affine superspace
/// with coefficients of degree at most `dmax + 1`, so that h-weights run
/// over `-1..=dmax`. Brackets that would land above `dmax` are dropped.
///
/// The basis is ordered by polynomial degree; within a degree the
/// monomials come in descending lexicographic order of exponents and the
/// derivation index varies fastest. In particular the weight-0 elements
/// `z_a ∂_b` sit in the row-major order of `e_ab` in [`gl`].
pub fn vect_truncated(m: usize, n: usize, dmax: usize) -> Result<LieSuperalgebra> {
    let nv = m + n;
    if nv == 0 {
        return Err(Error::InvalidInput("vector fields on a point".into()));
    }
    let var_parity = |v: usize| std_parity(m, v);
    let mut elements = Vec::new();
    let mut weights = Vec::new();
    let mut fields: Vec<(Monomial, usize)> = Vec::new();
    for k in 0..=dmax + 1 {
        for mono in monomials_of_degree(m, n, k) {
            for d in 0..nv {
                let odd_count: usize = mono[m..].iter().map(|&e| e as usize).sum();
                let parity = Parity::from_bit((odd_count % 2) as u32) + var_parity(d);
                let mut factors = Vec::new();
                for (v, &e) in mono.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(variable_name(m, v)),
                        e => factors.push(format!("{}^{e}", variable_name(m, v))),
                    }
                }
                factors.push(format!("d{}", variable_name(m, d)));
                elements.push((factors.join("*"), parity));
                let mut w: Vec<i64> = mono.iter().map(|&e| e as i64).collect();
                w[d] -= 1;
                weights.push(w);
                fields.push((mono.clone(), d));
            }
        }
    }
    let index: HashMap<(Monomial, usize), usize> =
        fields.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    let dim = fields.len();
    let parities: Vec<Parity> = elements.iter().map(|e| e.1).collect();
    let mut brackets = vec![Vec::new(); dim * dim];
    let mut dropped = false;
    for x in 0..dim {
        for y in 0..dim {
            let (f, a) = &fields[x];
            let (g, b) = &fields[y];
            let mut acc = BTreeMap::new();
            // f ∂_a(g) ∂_b - (-1)^{x̄ȳ} g ∂_b(f) ∂_a
            let mut term = |coef: Option<(i64, Monomial)>, outer: &Monomial, d: usize, s: i64| {
                if let Some((c1, dg)) = coef {
                    if let Some((c2, prod)) = multiply(m, outer, &dg) {
                        match index.get(&(prod, d)) {
                            Some(&k) => add_into(&mut acc, k, rat(s * c1 * c2)),
                            None => dropped = true,
                        }
                    }
                }
            };
            term(differentiate(m, *a, g), f, *b, 1);
            let s = -(parities[x].koszul(parities[y]) as i64);
            term(differentiate(m, *b, f), g, *a, s);
            brackets[x * dim + y] = collect_sparse(acc);
        }
    }
    let torus = (0..nv)
        .map(|d| {
            let mut mono = vec![0u8; nv];
            mono[d] = 1;
            index[&(mono, d)]
        })
        .collect();
    let alg = LieSuperalgebra {
        kind: AlgebraKind::Vect { m, n, dmax },
        basis: SuperBasis::new(elements)?,
        weights,
        torus,
        brackets,
        truncation: dropped.then_some(dmax),
    };
    alg.validate()?;
    Ok(alg)
}

/// A finite-dimensional module over a [`LieSuperalgebra`], with a basis of
/// torus weight vectors.
#[derive(Clone, Debug)]
pub struct SuperModule {
    name: String,
    algebra_dim: usize,
    parities: Vec<Parity>,
    weights: Vec<Vec<i64>>,
    /// `action[a][j]` is `b_a · v_j`.
    action: Vec<Vec<SparseVec>>,
}

impl SuperModule {
    fn build(
        g: &LieSuperalgebra,
        name: String,
        parities: Vec<Parity>,
        weights: Vec<Vec<i64>>,
        action: Vec<Vec<SparseVec>>,
    ) -> Result<SuperModule> {
        let module = SuperModule {
            name,
            algebra_dim: g.dim(),
            parities,
            weights,
            action,
        };
        module.validate(g)?;
        Ok(module)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn superdim(&self) -> (usize, usize) {
        let odd = self.parities.iter().filter(|p| p.is_odd()).count();
        (self.dim() - odd, odd)
    }

    pub fn parity(&self, j: usize) -> Parity {
        self.parities[j]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn weight(&self, j: usize) -> &[i64] {
        &self.weights[j]
    }

    pub fn h_weight(&self, j: usize) -> i64 {
        self.weights[j].iter().sum()
    }

    /// `b_a · v_j`.
    pub fn act(&self, a: usize, j: usize) -> &[(usize, Rational)] {
        &self.action[a][j]
    }

    /// Matrix of `b_a`; columns are inputs.
    pub fn action_matrix(&self, a: usize) -> SparseMatrix {
        let triplets = self.action[a]
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, c)| (*i, j, c.clone())));
        SparseMatrix::from_triplets(self.dim(), self.dim(), triplets)
    }

    fn apply(&self, a: usize, v: &[(usize, Rational)]) -> SparseVec {
        let mut acc = BTreeMap::new();
        for (j, c) in v {
            for (i, d) in &self.action[a][*j] {
                add_into(&mut acc, *i, c * d);
            }
        }
        collect_sparse(acc)
    }

    /// Checks `ρ([x,y]) = ρ(x)ρ(y) - (-1)^{x̄ȳ}ρ(y)ρ(x)` on all basis pairs,
    /// homogeneity of the action and diagonal action of the torus.
    pub fn representation_violations(&self, g: &LieSuperalgebra) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..g.dim() {
            for y in x..g.dim() {
                let s = sign_rat(g.parity(x).koszul(g.parity(y)));
                let bad = (0..self.dim()).any(|j| {
                    let unit = [(j, Rational::one())];
                    let xy = self.apply(x, &self.apply(y, &unit));
                    let yx = self.apply(y, &self.apply(x, &unit));
                    let mut acc = BTreeMap::new();
                    for (i, c) in xy {
                        add_into(&mut acc, i, c);
                    }
                    for (i, c) in yx {
                        add_into(&mut acc, i, -(&s * c));
                    }
                    for (k, c) in g.bracket(x, y) {
                        for (i, d) in &self.action[*k][j] {
                            add_into(&mut acc, *i, -(c * d));
                        }
                    }
                    !collect_sparse(acc).is_empty()
                });
                if bad {
                    out.push((x, y));
                }
            }
        }
        out
    }

    fn validate(&self, g: &LieSuperalgebra) -> Result<()> {
        if self.action.len() != g.dim() || self.weights.iter().any(|w| w.len() != g.torus_rank()) {
            return Err(Error::InvalidInput(format!("{}: shape does not match {}", self.name, g.name())));
        }
        for a in 0..g.dim() {
            for j in 0..self.dim() {
                let expect_parity = g.parity(a) + self.parity(j);
                let expect_weight: Vec<i64> =
                    g.weight(a).iter().zip(&self.weights[j]).map(|(x, y)| x + y).collect();
                for (i, _) in &self.action[a][j] {
                    if self.parity(*i) != expect_parity || self.weights[*i] != expect_weight {
                        return Err(Error::NotARepresentation(format!(
                            "{}: {} maps basis vector {j} outside its weight space",
                            self.name,
                            g.label(a)
                        )));
                    }
                }
            }
        }
        for (r, &t) in g.torus().iter().enumerate() {
            for j in 0..self.dim() {
                let w = self.weights[j][r];
                let expect: SparseVec = if w == 0 { Vec::new() } else { vec![(j, rat(w))] };
                if self.action[t][j] != expect {
                    return Err(Error::NotARepresentation(format!(
                        "{}: {} is not diagonal with the declared weights",
                        self.name,
                        g.label(t)
                    )));
                }
            }
        }
        if let Some(&(x, y)) = self.representation_violations(g).first() {
            return Err(Error::NotARepresentation(format!(
                "{}: fails on ({}, {})",
                self.name,
                g.label(x),
                g.label(y)
            )));
        }
        Ok(())
    }

    pub fn trivial(g: &LieSuperalgebra) -> SuperModule {
        SuperModule {
            name: "k".into(),
            algebra_dim: g.dim(),
            parities: vec![Parity::Even],
            weights: vec![vec![0; g.torus_rank()]],
            action: vec![vec![Vec::new()]; g.dim()],
        }
    }

    /// The defining representation `V` of `gl(m,n)`.
    pub fn standard(g: &LieSuperalgebra) -> Result<SuperModule> {
        let AlgebraKind::Gl { m, n } = *g.kind() else {
            return Err(Error::InvalidInput(format!("{} has no standard module", g.name())));
        };
        let d = m + n;
        let mut action = vec![vec![Vec::new(); d]; d * d];
        for i in 0..d {
            for j in 0..d {
                action[i * d + j][j] = vec![(i, Rational::one())];
            }
        }
        let weights = (0..d)
            .map(|i| {
                let mut w = vec![0; d];
                w[i] = 1;
                w
            })
            .collect();
        let parities = (0..d).map(|i| std_parity(m, i)).collect();
        Self::build(g, "V".into(), parities, weights, action)
    }

    /// `M*` with `⟨x·φ, v⟩ = -(-1)^{x̄φ̄}⟨φ, x·v⟩`.
    pub fn dual(g: &LieSuperalgebra, module: &SuperModule) -> Result<SuperModule> {
        module.check_algebra(g)?;
        let dim = module.dim();
        let mut action = vec![vec![Vec::new(); dim]; g.dim()];
        for (a, cols) in module.action.iter().enumerate() {
            let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); dim];
            for (i, col) in cols.iter().enumerate() {
                for (j, c) in col {
                    // A[j][i] = c contributes to D[i][j] = -(-1)^{x̄ p_j} A[j][i]
                    let s = g.parity(a).koszul(module.parity(*j));
                    add_into(&mut acc[*j], i, -(rat(s as i64) * c));
                }
            }
            action[a] = acc.into_iter().map(collect_sparse).collect();
        }
        let weights = module.weights.iter().map(|w| w.iter().map(|x| -x).collect()).collect();
        Self::build(g, format!("({})*", module.name), module.parities.clone(), weights, action)
    }

    /// `M ⊗ N`, basis `m_i ⊗ n_j` at index `i * dim N + j`.
    pub fn tensor(g: &LieSuperalgebra, left: &SuperModule, right: &SuperModule) -> Result<SuperModule> {
        left.check_algebra(g)?;
        right.check_algebra(g)?;
        let (dl, dr) = (left.dim(), right.dim());
        let mut parities = Vec::with_capacity(dl * dr);
        let mut weights = Vec::with_capacity(dl * dr);
        for i in 0..dl {
            for j in 0..dr {
                parities.push(left.parity(i) + right.parity(j));
                weights.push(left.weights[i].iter().zip(&right.weights[j]).map(|(a, b)| a + b).collect());
            }
        }
        let mut action = vec![Vec::with_capacity(dl * dr); g.dim()];
        for (a, cols) in action.iter_mut().enumerate() {
            for i in 0..dl {
                for j in 0..dr {
                    let mut acc = BTreeMap::new();
                    for (k, c) in left.act(a, i) {
                        add_into(&mut acc, k * dr + j, c.clone());
                    }
                    let s = rat(g.parity(a).koszul(left.parity(i)) as i64);
                    for (k, c) in right.act(a, j) {
                        add_into(&mut acc, i * dr + k, &s * c);
                    }
                    cols.push(collect_sparse(acc));
                }
            }
        }
        Self::build(
            g,
            format!("{} ⊗ {}", left.name, right.name),
            parities,
            weights,
            action,
        )
    }

    /// `ΠM`: same vectors with flipped parity; `x` acts by `(-1)^{x̄} x`.
    pub fn parity_shift(g: &LieSuperalgebra, module: &SuperModule) -> Result<SuperModule> {
        module.check_algebra(g)?;
        let action = module
            .action
            .iter()
            .enumerate()
            .map(|(a, cols)| {
                if g.parity(a).is_odd() {
                    cols.iter().map(|col| col.iter().map(|(i, c)| (*i, -c)).collect()).collect()
                } else {
                    cols.clone()
                }
            })
            .collect();
        let parities = module.parities.iter().map(|p| p.flip()).collect();
        Self::build(g, format!("Π({})", module.name), parities, module.weights.clone(), action)
    }

    /// Super symmetric power `S^k(M)`: symmetric in even vectors,
    /// exterior in odd ones.
    pub fn symmetric_power(g: &LieSuperalgebra, module: &SuperModule, k: usize) -> Result<SuperModule> {
        module.check_algebra(g)?;
        let odd = |i: u32| module.parity(i as usize).is_odd();
        let monos = sym_monomials(module.parities(), k);
        let index: HashMap<Vec<u32>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let parities: Vec<Parity> = monos
            .iter()
            .map(|mono| mono.iter().map(|&i| module.parity(i as usize)).sum())
            .collect();
        let weights: Vec<Vec<i64>> = monos
            .iter()
            .map(|mono| {
                let mut w = vec![0; g.torus_rank()];
                for &i in mono {
                    for (x, y) in w.iter_mut().zip(&module.weights[i as usize]) {
                        *x += y;
                    }
                }
                w
            })
            .collect();
        let mut action = vec![Vec::with_capacity(monos.len()); g.dim()];
        for (a, cols) in action.iter_mut().enumerate() {
            for mono in &monos {
                let mut acc = BTreeMap::new();
                let mut passed = Parity::Even;
                for t in 0..mono.len() {
                    let s = g.parity(a).koszul(passed);
                    for (l, c) in module.act(a, mono[t] as usize) {
                        let mut word = mono.clone();
                        word[t] = *l as u32;
                        if let Some((s2, sorted)) = sort_monomial(&word, odd) {
                            add_into(&mut acc, index[&sorted], rat((s * s2) as i64) * c);
                        }
                    }
                    passed = passed + module.parity(mono[t] as usize);
                }
                cols.push(collect_sparse(acc));
            }
        }
        Self::build(g, format!("S^{k}({})", module.name), parities, weights, action)
    }

    /// Super exterior power, realised as `Π^k S^k(ΠM)`.
    pub fn exterior_power(g: &LieSuperalgebra, module: &SuperModule, k: usize) -> Result<SuperModule> {
        let shifted = Self::parity_shift(g, module)?;
        let mut out = Self::symmetric_power(g, &shifted, k)?;
        if k % 2 == 1 {
            out = Self::parity_shift(g, &out)?;
        }
        out.name = format!("Λ^{k}({})", module.name);
        Ok(out)
    }

    /// `Σ^λ(M)`: the image of the Young symmetrizer (row symmetrization
    /// followed by column antisymmetrization, with Koszul signs) in
    /// `M^{⊗|λ|}`.
    pub fn schur_module(g: &LieSuperalgebra, module: &SuperModule, lambda: &Partition) -> Result<SuperModule> {
        module.check_algebra(g)?;
        let k = lambda.size();
        let name = format!("Σ^({lambda})({})", module.name);
        if k == 0 {
            let mut t = Self::trivial(g);
            t.name = name;
            return Ok(t);
        }
        let n = module.dim();
        let total = n.checked_pow(k as u32).ok_or_else(|| {
            Error::InvalidInput(format!("tensor power {k} of a {n}-dimensional module is too large"))
        })?;
        let (rows, cols) = young_tableau_positions(lambda);
        let row_perms = stabilizer_perms(&rows, k);
        let col_perms: Vec<(i32, Vec<usize>)> = stabilizer_perms(&cols, k)
            .into_iter()
            .map(|p| (permutation_sign(&p), p))
            .collect();
        let tuple_of = |mut idx: usize| {
            let mut t = vec![0usize; k];
            for slot in t.iter_mut().rev() {
                *slot = idx % n;
                idx /= n;
            }
            t
        };
        let index_of = |t: &[usize]| t.iter().fold(0usize, |acc, &i| acc * n + i);

        let mut image = RowSpace::new(total, Vec::new());
        let mut seen_groups = std::collections::HashSet::new();
        for idx in 0..total {
            let tuple = tuple_of(idx);
            let mut acc_a: BTreeMap<usize, Rational> = BTreeMap::new();
            for p in &row_perms {
                let (s, out) = permute_tensor(&tuple, p, module.parities());
                add_into(&mut acc_a, index_of(&out), rat(s as i64));
            }
            let mut acc_b: BTreeMap<usize, Rational> = BTreeMap::new();
            for (j, c) in acc_a {
                let t = tuple_of(j);
                for (sg, p) in &col_perms {
                    let (s, out) = permute_tensor(&t, p, module.parities());
                    add_into(&mut acc_b, index_of(&out), &c * rat((s * sg) as i64));
                }
            }
            let v = collect_sparse(acc_b);
            if !v.is_empty() {
                let mut key = tuple.clone();
                key.sort_unstable();
                seen_groups.insert(key);
                image.insert(v);
            }
        }

        let basis = image.basis().to_vec();
        let parities: Vec<Parity> = image
            .pivots()
            .iter()
            .map(|&p| tuple_of(p).iter().map(|&i| module.parity(i)).sum())
            .collect();
        let weights: Vec<Vec<i64>> = image
            .pivots()
            .iter()
            .map(|&p| {
                let mut w = vec![0; g.torus_rank()];
                for i in tuple_of(p) {
                    for (x, y) in w.iter_mut().zip(&module.weights[i]) {
                        *x += y;
                    }
                }
                w
            })
            .collect();
        let mut action = vec![Vec::with_capacity(basis.len()); g.dim()];
        for (a, cols) in action.iter_mut().enumerate() {
            for b in &basis {
                let mut acc = BTreeMap::new();
                for (idx, coeff) in b {
                    let tuple = tuple_of(*idx);
                    let mut passed = Parity::Even;
                    for t in 0..k {
                        let s = rat(g.parity(a).koszul(passed) as i64);
                        for (l, c) in module.act(a, tuple[t]) {
                            let mut out = tuple.clone();
                            out[t] = *l;
                            add_into(&mut acc, index_of(&out), &s * c * coeff);
                        }
                        passed = passed + module.parity(tuple[t]);
                    }
                }
                let image_vec = collect_sparse(acc);
                let coords = image.coordinates(&image_vec).ok_or_else(|| {
                    Error::NotARepresentation(format!("{name}: image of the symmetrizer is not stable"))
                })?;
                cols.push(
                    coords
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .collect(),
                );
            }
        }
        Self::build(g, name, parities, weights, action)
    }

    /// `Δ^λ = Σ^λ(V) ⊗ Σ^λ(V*)` for `gl(m,n)`.
    pub fn delta_module(g: &LieSuperalgebra, lambda: &Partition) -> Result<SuperModule> {
        let v = Self::standard(g)?;
        let vd = Self::dual(g, &v)?;
        let left = Self::schur_module(g, &v, lambda)?;
        let right = Self::schur_module(g, &vd, lambda)?;
        let mut out = Self::tensor(g, &left, &right)?;
        out.name = format!("Δ^({lambda})");
        Ok(out)
    }

    /// `Hom_{U g_0}(U g, k)` for the even part `g_0`.
    ///
    /// The basis `f_S` is dual to the ordered odd monomials `u_S` spanning
    /// `U g / g_0 U g`; `(x·f)(u) = f(u x)`, evaluated by rewriting `u x`
    /// into normal form.
    pub fn coinduced_trivial(g: &LieSuperalgebra) -> Result<SuperModule> {
        let odd = g.odd_indices();
        let subsets = odd_subsets(&odd);
        let index: HashMap<Vec<usize>, usize> = subsets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut rewriter = PbwRewriter {
            g,
            index: &index,
            memo: HashMap::new(),
        };
        let dim = subsets.len();
        let mut action = vec![vec![BTreeMap::new(); dim]; g.dim()];
        for a in 0..g.dim() {
            for (t, u) in subsets.iter().enumerate() {
                let mut word = u.clone();
                word.push(a);
                for (s, c) in rewriter.normal_form(&word) {
                    add_into(&mut action[a][s], t, c);
                }
            }
        }
        let action = action
            .into_iter()
            .map(|cols| cols.into_iter().map(collect_sparse).collect())
            .collect();
        let parities = subsets.iter().map(|s| Parity::from_bit((s.len() % 2) as u32)).collect();
        let weights = subsets
            .iter()
            .map(|s| {
                let mut w = vec![0; g.torus_rank()];
                for &i in s {
                    for (x, y) in w.iter_mut().zip(g.weight(i)) {
                        *x -= y;
                    }
                }
                w
            })
            .collect();
        Self::build(g, format!("Ind({})", g.name()), parities, weights, action)
    }

    fn check_algebra(&self, g: &LieSuperalgebra) -> Result<()> {
        if self.algebra_dim != g.dim() {
            return Err(Error::InvalidInput(format!(
                "module {} is over a {}-dimensional algebra, not {}",
                self.name,
                self.algebra_dim,
                g.name()
            )));
        }
        Ok(())
    }
}

fn sym_monomials(parities: &[Parity], k: usize) -> Vec<Vec<u32>> {
    fn go(start: usize, left: usize, parities: &[Parity], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..parities.len() {
            cur.push(i as u32);
            let next = if parities[i].is_odd() { i + 1 } else { i };
            go(next, left - 1, parities, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, k, parities, &mut Vec::new(), &mut out);
    out
}

/// Positions `0..|λ|` filled row by row; returns the rows and the columns
/// as lists of positions.
fn young_tableau_positions(lambda: &Partition) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut rows = Vec::new();
    let mut cols = vec![Vec::new(); lambda.row(0)];
    let mut pos = 0;
    for &len in lambda.parts() {
        let mut row = Vec::new();
        for col in cols.iter_mut().take(len) {
            row.push(pos);
            col.push(pos);
            pos += 1;
        }
        rows.push(row);
    }
    (rows, cols)
}

/// All permutations of `0..k` preserving each of the given blocks.
fn stabilizer_perms(blocks: &[Vec<usize>], k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![(0..k).collect::<Vec<usize>>()];
    for block in blocks {
        let mut next = Vec::new();
        for arrangement in permutations(block) {
            for base in &out {
                let mut p = base.clone();
                for (slot, &src) in block.iter().zip(&arrangement) {
                    p[*slot] = src;
                }
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn odd_subsets(odd: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u64..1 << odd.len())
        .map(|mask| {
            odd.iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &i)| i)
                .collect()
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

struct PbwRewriter<'a> {
    g: &'a LieSuperalgebra,
    index: &'a HashMap<Vec<usize>, usize>,
    memo: HashMap<Vec<usize>, Vec<(usize, Rational)>>,
}

impl PbwRewriter<'_> {
    /// Coordinates of a word of basis elements in `U g / g_0 U g`.
    fn normal_form(&mut self, word: &[usize]) -> Vec<(usize, Rational)> {
        if let Some(v) = self.memo.get(word) {
            return v.clone();
        }
        let result = self.compute(word);
        self.memo.insert(word.to_vec(), result.clone());
        result
    }

    fn compute(&mut self, word: &[usize]) -> Vec<(usize, Rational)> {
        let g = self.g;
        if word.is_empty() {
            return vec![(self.index[&Vec::new()], Rational::one())];
        }
        if !g.parity(word[0]).is_odd() {
            return Vec::new();
        }
        let Some(t) = (1..word.len()).find(|&t| !g.parity(word[t]).is_odd() || word[t] <= word[t - 1]) else {
            return vec![(self.index[word], Rational::one())];
        };
        let (u, v) = (word[t - 1], word[t]);
        let mut acc = BTreeMap::new();
        let mut push = |this: &mut Self, w: Vec<usize>, c: Rational| {
            for (s, d) in this.normal_form(&w) {
                add_into(&mut acc, s, &c * d);
            }
        };
        if u == v {
            // u u = ½ [u, u] for odd u
            for (k, c) in g.bracket(u, v).to_vec() {
                let mut w = word[..t - 1].to_vec();
                w.push(k);
                w.extend_from_slice(&word[t + 1..]);
                push(self, w, c * ratio(1, 2));
            }
        } else {
            let mut swapped = word.to_vec();
            swapped.swap(t - 1, t);
            push(self, swapped, rat(g.parity(u).koszul(g.parity(v)) as i64));
            for (k, c) in g.bracket(u, v).to_vec() {
                let mut w = word[..t - 1].to_vec();
                w.push(k);
                w.extend_from_slice(&word[t + 1..]);
                push(self, w, c);
            }
        }
        collect_sparse(acc)
    }
}

/// Dimension of the space of `g`-invariants of `M`: the common kernel of
/// all action matrices, computed on the torus-weight-0 subspace.
pub fn invariants_dim(g: &LieSuperalgebra, module: &SuperModule) -> Result<usize> {
    module.check_algebra(g)?;
    let zero: Vec<usize> = (0..module.dim())
        .filter(|&j| module.weight(j).iter().all(|&w| w == 0))
        .collect();
    let torus: std::collections::HashSet<usize> = g.torus().iter().copied().collect();
    let n = module.dim();
    let mut triplets = Vec::new();
    for a in (0..g.dim()).filter(|a| !torus.contains(a)) {
        for (col, &j) in zero.iter().enumerate() {
            for (i, c) in module.act(a, j) {
                triplets.push((a * n + i, col, c.clone()));
            }
        }
    }
    Ok(SparseMatrix::from_triplets(g.dim() * n, zero.len(), triplets).kernel_dim())
}

/// `Λ^p(V) ⊗ Λ^p(S²(V*) ⊗ V)` for the standard module `V` of `gl(m,n)`.
pub fn cauchy_invariant_module(g: &LieSuperalgebra, p: usize) -> Result<SuperModule> {
    let v = SuperModule::standard(g)?;
    let vd = SuperModule::dual(g, &v)?;
    let s2 = SuperModule::symmetric_power(g, &vd, 2)?;
    let w = SuperModule::tensor(g, &s2, &v)?;
    let lw = SuperModule::exterior_power(g, &w, p)?;
    let lv = SuperModule::exterior_power(g, &v, p)?;
    SuperModule::tensor(g, &lv, &lw)
}

/// `dim (Λ^p(V) ⊗ Λ^p(S²(V*) ⊗ V))^{gl(m,n)}`, refusing modules larger
/// than `max_dim`.
pub fn cauchy_invariants_dim(m: usize, n: usize, p: usize, max_dim: usize) -> Result<usize> {
    let g = gl(m, n)?;
    let v = SuperModule::standard(&g)?;
    let vd = SuperModule::dual(&g, &v)?;
    let s2 = SuperModule::symmetric_power(&g, &vd, 2)?;
    let w = SuperModule::tensor(&g, &s2, &v)?;
    let lw = SuperModule::exterior_power(&g, &w, p)?;
    let lv = SuperModule::exterior_power(&g, &v, p)?;
    if lw.dim() * lv.dim() > max_dim {
        return Err(Error::ResourceCap {
            degree: p,
            dim: lw.dim() * lv.dim(),
            cap: max_dim,
        });
    }
    invariants_dim(&g, &SuperModule::tensor(&g, &lv, &lw)?)
}
