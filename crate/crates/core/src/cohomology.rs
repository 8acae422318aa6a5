//! Chevalley–Eilenberg cochains, split into weight blocks.
//!
//! A cochain is an element of `S(Πg*) ⊗ M`: a monomial in generators `θ^k`
//! dual to the basis of `g` (exterior in the duals of even elements,
//! symmetric in the duals of odd ones) times a basis vector of `M`. The
//! differential is the odd derivation with
//!
//! ```text
//! dθ^k = -½ Σ_{i,j} (-1)^{p_i + p_i p_j} c^k_{ij} θ^i θ^j,     dm = Σ_i θ^i ⊗ b_i·m,
//! d(ω ⊗ m) = dω ⊗ m + (-1)^{|ω|} ω · dm.
//! ```
//!
//! The torus acts on cochains with weight `wt(m) - Σ wt(arguments)`, and the
//! differential preserves it, so the complex is assembled block by block.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebras::{gl, vect_truncated, LieSuperalgebra, SuperModule};
use crate::diagrams::Partition;
use crate::exactla::{rat, ratio, Rational, SparseMatrix};
use crate::superlin::multiply_monomials;
use crate::{Error, Result};

/// Default cap on the dimension of a single block.
pub const DEFAULT_MAX_BLOCK: usize = 200_000;

/// Dimensions of cohomology by degree, for degrees `0..=P`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BettiTable(Vec<usize>);

impl BettiTable {
    pub fn new(dims: Vec<usize>) -> Self {
        BettiTable(dims)
    }

    /// The table with no entries (cohomology of the empty space).
    pub fn empty() -> Self {
        BettiTable(Vec::new())
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    /// `dim H^p`, zero past the stored range.
    pub fn get(&self, p: usize) -> usize {
        self.0.get(p).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Highest degree with a nonzero entry.
    pub fn top_degree(&self) -> Option<usize> {
        self.0.iter().rposition(|&b| b != 0)
    }

    /// Entries for degrees `0..=p`, padded with zeros.
    pub fn prefix(&self, p: usize) -> BettiTable {
        BettiTable((0..=p).map(|i| self.get(i)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl From<Vec<usize>> for BettiTable {
    fn from(v: Vec<usize>) -> Self {
        BettiTable(v)
    }
}

/// Which weight blocks to build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightFilter {
    All,
    /// Every torus block whose h-weight is in the list.
    HWeights(Vec<i64>),
    /// Exactly these torus weights.
    Torus(Vec<Vec<i64>>),
}

impl WeightFilter {
    /// The torus-weight-0 block.
    pub fn zero(g: &LieSuperalgebra) -> Self {
        WeightFilter::Torus(vec![vec![0; g.torus_rank()]])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexOptions {
    /// Largest allowed block dimension; larger blocks abort with
    /// [`Error::ResourceCap`].
    pub max_block: usize,
}

impl Default for ComplexOptions {
    fn default() -> Self {
        ComplexOptions {
            max_block: DEFAULT_MAX_BLOCK,
        }
    }
}

/// Basis cochain: sorted generator indices and a module basis index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cochain {
    pub monomial: Vec<u32>,
    pub module: usize,
}

type BlockKey = (usize, Vec<i64>);

#[derive(Debug)]
pub struct CochainComplex {
    pmax: usize,
    blocks: BTreeMap<BlockKey, Vec<Cochain>>,
    differentials: BTreeMap<BlockKey, SparseMatrix>,
    ranks: OnceLock<BTreeMap<BlockKey, usize>>,
}

impl CochainComplex {
    /// Highest degree `p` for which `d_p` was built.
    pub fn pmax(&self) -> usize {
        self.pmax
    }

    /// Torus weights of all stored blocks.
    pub fn weights(&self) -> BTreeSet<Vec<i64>> {
        self.blocks.keys().map(|(_, w)| w.clone()).collect()
    }

    pub fn block(&self, p: usize, weight: &[i64]) -> &[Cochain] {
        self.blocks
            .get(&(p, weight.to_vec()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn block_dim(&self, p: usize, weight: &[i64]) -> usize {
        self.block(p, weight).len()
    }

    /// `d_p` on the block of the given weight; columns index the degree-`p`
    /// block and rows the degree-`p+1` block.
    pub fn differential(&self, p: usize, weight: &[i64]) -> Option<&SparseMatrix> {
        self.differentials.get(&(p, weight.to_vec()))
    }

    /// Total dimension of each degree `0..=pmax+1` over the stored blocks.
    pub fn dims(&self) -> Vec<usize> {
        let mut out = vec![0; self.pmax + 2];
        for ((p, _), b) in &self.blocks {
            out[*p] += b.len();
        }
        out
    }

    fn ranks(&self) -> &BTreeMap<BlockKey, usize> {
        self.ranks.get_or_init(|| {
            self.differentials
                .par_iter()
                .map(|(k, d)| (k.clone(), d.rank()))
                .collect()
        })
    }

    fn rank(&self, p: usize, weight: &[i64]) -> usize {
        self.ranks().get(&(p, weight.to_vec())).copied().unwrap_or(0)
    }

    /// Betti numbers of one weight block for degrees `0..=p_top`.
    pub fn block_betti(&self, weight: &[i64], p_top: usize) -> Result<BettiTable> {
        if p_top > self.pmax {
            return Err(Error::InvalidInput(format!(
                "degree {p_top} needs d_{p_top}, but the complex stops at d_{}",
                self.pmax
            )));
        }
        Ok(BettiTable(
            (0..=p_top)
                .map(|p| {
                    let before = if p == 0 { 0 } else { self.rank(p - 1, weight) };
                    self.block_dim(p, weight) - self.rank(p, weight) - before
                })
                .collect(),
        ))
    }
}

/// Summed Betti numbers over all stored blocks, for degrees `0..=p_top`.
pub fn betti(complex: &CochainComplex, p_top: usize) -> Result<BettiTable> {
    let mut total = vec![0; p_top + 1];
    for w in complex.weights() {
        for (t, b) in total.iter_mut().zip(complex.block_betti(&w, p_top)?.dims()) {
            *t += b;
        }
    }
    Ok(BettiTable(total))
}

/// Generators of `S(Πg*)` with the data needed by the enumerator and the
/// differential.
struct Generators {
    /// `θ^k` anticommutes with itself (the dual of an even element).
    exterior: Vec<bool>,
    h: Vec<i64>,
    torus: Vec<Vec<i64>>,
    suffix_min: Vec<i64>,
    max_h: i64,
    /// `dθ^k` as `(i, j, c)` with `i ≤ j`.
    d_theta: Vec<Vec<(u32, u32, Rational)>>,
}

impl Generators {
    fn new(g: &LieSuperalgebra) -> Self {
        let n = g.dim();
        let exterior: Vec<bool> = (0..n).map(|k| !g.parity(k).is_odd()).collect();
        let h: Vec<i64> = (0..n).map(|k| g.h_weight(k)).collect();
        let mut suffix_min = vec![i64::MAX; n + 1];
        for k in (0..n).rev() {
            suffix_min[k] = suffix_min[k + 1].min(h[k]);
        }
        let max_h = h.iter().copied().max().unwrap_or(0);
        let mut acc: Vec<BTreeMap<(u32, u32), Rational>> = vec![BTreeMap::new(); n];
        let half = ratio(-1, 2);
        for i in 0..n {
            for j in 0..n {
                let (pi, pj) = (g.parity(i).bit(), g.parity(j).bit());
                let sign = if (pi + pi * pj) % 2 == 1 { -1 } else { 1 };
                for (k, c) in g.bracket(i, j) {
                    let mut coeff = &half * c * rat(sign);
                    let key = if i <= j {
                        (i as u32, j as u32)
                    } else {
                        if exterior[i] && exterior[j] {
                            coeff = -coeff;
                        }
                        (j as u32, i as u32)
                    };
                    if key.0 == key.1 && exterior[i] {
                        continue;
                    }
                    *acc[*k].entry(key).or_insert_with(Rational::zero) += coeff;
                }
            }
        }
        let d_theta = acc
            .into_iter()
            .map(|m| {
                m.into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|((i, j), c)| (i, j, c))
                    .collect()
            })
            .collect();
        Generators {
            exterior,
            h,
            torus: (0..n).map(|k| g.weight(k).to_vec()).collect(),
            suffix_min,
            max_h,
            d_theta,
        }
    }

    fn len(&self) -> usize {
        self.exterior.len()
    }

    /// Sorted monomials of the given degree, optionally with a prescribed
    /// sum of h-weights.
    fn monomials(&self, degree: usize, target: Option<i64>, cap: usize) -> Result<Vec<Vec<u32>>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(degree);
        self.dfs(0, degree, 0, target, cap, &mut cur, &mut out)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        start: usize,
        left: usize,
        sum: i64,
        target: Option<i64>,
        cap: usize,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) -> Result<()> {
        if left == 0 {
            if target.is_none_or(|t| t == sum) {
                if out.len() >= cap {
                    return Err(Error::ResourceCap {
                        degree: cur.len(),
                        dim: out.len() + 1,
                        cap,
                    });
                }
                out.push(cur.clone());
            }
            return Ok(());
        }
        for k in start..self.len() {
            if let Some(t) = target {
                let l = left as i64;
                if sum + l * self.suffix_min[k] > t {
                    break;
                }
                let rest_min = if left > 1 {
                    self.suffix_min[if self.exterior[k] { k + 1 } else { k }]
                } else {
                    0
                };
                let after = sum + self.h[k];
                if rest_min == i64::MAX {
                    if left > 1 {
                        continue;
                    }
                } else if after + (l - 1) * rest_min > t {
                    continue;
                }
                if after + (l - 1) * self.max_h < t {
                    continue;
                }
            }
            cur.push(k as u32);
            let next = if self.exterior[k] { k + 1 } else { k };
            self.dfs(next, left - 1, sum + self.h[k], target, cap, cur, out)?;
            cur.pop();
        }
        Ok(())
    }

    fn weight_of(&self, mono: &[u32], module_weight: &[i64]) -> Vec<i64> {
        let mut w = module_weight.to_vec();
        for &k in mono {
            for (x, y) in w.iter_mut().zip(&self.torus[k as usize]) {
                *x -= y;
            }
        }
        w
    }

    fn h_sum(&self, mono: &[u32]) -> i64 {
        mono.iter().map(|&k| self.h[k as usize]).sum()
    }

    fn parity_of(&self, mono: &[u32]) -> bool {
        mono.iter().filter(|&&k| self.exterior[k as usize]).count() % 2 == 1
    }
}

/// Builds the blocks of `C^p(g, M)` for `p ≤ pmax + 1` and the differentials
/// `d_p` for `p ≤ pmax`, checking `d² = 0` on every pair of built blocks.
pub fn ce_complex(
    g: &LieSuperalgebra,
    module: &SuperModule,
    pmax: usize,
    filter: &WeightFilter,
    opts: &ComplexOptions,
) -> Result<CochainComplex> {
    let gens = Generators::new(g);
    let module_h: BTreeSet<i64> = (0..module.dim()).map(|j| module.h_weight(j)).collect();

    // h-weights of arguments to enumerate, per degree; `None` means all.
    let targets: Option<BTreeSet<i64>> = match filter {
        WeightFilter::All => {
            if let Some(dmax) = g.truncation() {
                return Err(Error::Truncation(format!(
                    "{} drops brackets above weight {dmax}; request explicit weights",
                    g.name()
                )));
            }
            None
        }
        WeightFilter::HWeights(ws) => Some(
            ws.iter()
                .flat_map(|w| module_h.iter().map(move |hm| hm - w))
                .collect(),
        ),
        WeightFilter::Torus(ws) => Some(
            ws.iter()
                .flat_map(|w| {
                    let wh: i64 = w.iter().sum();
                    module_h.iter().map(move |hm| hm - wh)
                })
                .collect(),
        ),
    };
    let keep = |w: &[i64]| match filter {
        WeightFilter::All => true,
        WeightFilter::HWeights(ws) => ws.contains(&w.iter().sum()),
        WeightFilter::Torus(ws) => ws.iter().any(|x| x == w),
    };

    if let (Some(dmax), Some(ts)) = (g.truncation(), &targets) {
        if let Some(&a) = ts.iter().max() {
            if a + pmax as i64 > dmax as i64 {
                return Err(Error::Truncation(format!(
                    "{}: arguments of total weight {a} in degree {pmax} need brackets up to weight {}, above the truncation {dmax}",
                    g.name(),
                    a + pmax as i64
                )));
            }
        }
    }

    let mut blocks: BTreeMap<BlockKey, Vec<Cochain>> = BTreeMap::new();
    for p in 0..=pmax + 1 {
        let monos: Vec<Vec<u32>> = match &targets {
            None => gens.monomials(p, None, opts.max_block)?,
            Some(ts) => {
                let mut all = Vec::new();
                for &t in ts {
                    all.extend(gens.monomials(p, Some(t), opts.max_block)?);
                }
                all
            }
        };
        for mono in &monos {
            let a = gens.h_sum(mono);
            for j in 0..module.dim() {
                if targets.is_some() && !keep_h(&targets, module.h_weight(j) - a, filter) {
                    continue;
                }
                let w = gens.weight_of(mono, module.weight(j));
                if !keep(&w) {
                    continue;
                }
                let block = blocks.entry((p, w)).or_default();
                if block.len() >= opts.max_block {
                    return Err(Error::ResourceCap {
                        degree: p,
                        dim: block.len() + 1,
                        cap: opts.max_block,
                    });
                }
                block.push(Cochain {
                    monomial: mono.clone(),
                    module: j,
                });
            }
        }
    }
    for b in blocks.values_mut() {
        b.sort();
        b.dedup();
    }

    let keys: Vec<BlockKey> = blocks.keys().filter(|(p, _)| *p <= pmax).cloned().collect();
    let differentials: BTreeMap<BlockKey, SparseMatrix> = keys
        .par_iter()
        .map(|(p, w)| {
            let empty = Vec::new();
            let target = blocks.get(&(p + 1, w.clone())).unwrap_or(&empty);
            let d = assemble(g, module, &gens, &blocks[&(*p, w.clone())], target)?;
            Ok(((*p, w.clone()), d))
        })
        .collect::<Result<_>>()?;

    for ((p, w), d) in &differentials {
        if let Some(next) = differentials.get(&(p + 1, w.clone())) {
            if !next.mul(d).is_zero() {
                return Err(Error::DifferentialNotNilpotent { degree: *p });
            }
        }
    }

    Ok(CochainComplex {
        pmax,
        blocks,
        differentials,
        ranks: OnceLock::new(),
    })
}

fn keep_h(targets: &Option<BTreeSet<i64>>, cochain_h: i64, filter: &WeightFilter) -> bool {
    match filter {
        WeightFilter::All => true,
        WeightFilter::HWeights(ws) => ws.contains(&cochain_h),
        WeightFilter::Torus(ws) => {
            targets.is_some() && ws.iter().any(|w| w.iter().sum::<i64>() == cochain_h)
        }
    }
}

fn assemble(
    g: &LieSuperalgebra,
    module: &SuperModule,
    gens: &Generators,
    source: &[Cochain],
    target: &[Cochain],
) -> Result<SparseMatrix> {
    let index: HashMap<(&[u32], usize), usize> = target
        .iter()
        .enumerate()
        .map(|(i, c)| ((c.monomial.as_slice(), c.module), i))
        .collect();
    let odd = |k: u32| gens.exterior[k as usize];
    let lookup = |mono: &[u32], j: usize| {
        index.get(&(mono, j)).copied().ok_or_else(|| {
            Error::Truncation(format!(
                "differential of {} leaves the block (monomial {mono:?}, vector {j})",
                g.name()
            ))
        })
    };
    let mut triplets = Vec::new();
    for (col, c) in source.iter().enumerate() {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        let mono = &c.monomial;
        let mut passed_odd = false;
        for t in 0..mono.len() {
            let k = mono[t] as usize;
            let (prefix, suffix) = (&mono[..t], &mono[t + 1..]);
            for (i, j, coeff) in &gens.d_theta[k] {
                let Some((s1, left)) = multiply_monomials(prefix, &[*i, *j], odd) else {
                    continue;
                };
                let Some((s2, word)) = multiply_monomials(&left, suffix, odd) else {
                    continue;
                };
                let mut s = s1 * s2;
                if passed_odd {
                    s = -s;
                }
                let row = lookup(&word, c.module)?;
                *acc.entry(row).or_insert_with(Rational::zero) += coeff * rat(s as i64);
            }
            passed_odd ^= gens.exterior[k];
        }
        let outer = if gens.parity_of(mono) { -1 } else { 1 };
        for i in 0..g.dim() {
            let acts = module.act(i, c.module);
            if acts.is_empty() {
                continue;
            }
            let Some((s, word)) = multiply_monomials(mono, &[i as u32], odd) else {
                continue;
            };
            for (l, coeff) in acts {
                let row = lookup(&word, *l)?;
                *acc.entry(row).or_insert_with(Rational::zero) += coeff * rat((outer * s) as i64);
            }
        }
        triplets.extend(
            acc.into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(row, v)| (row, col, v)),
        );
    }
    Ok(SparseMatrix::from_triplets(target.len(), source.len(), triplets))
}

/// `H^p(g, M)` for `p ≤ p_top` from the torus-weight-0 block.
pub fn weight_zero_cohomology(
    g: &LieSuperalgebra,
    module: &SuperModule,
    p_top: usize,
    opts: &ComplexOptions,
) -> Result<BettiTable> {
    let c = ce_complex(g, module, p_top, &WeightFilter::zero(g), opts)?;
    betti(&c, p_top)
}

/// `H^p(V_{m,n}, k)` for `p ≤ P`, from the weight-0 complex of
/// `vect_truncated(m, n, P)`.
pub fn vfield_cohomology(m: usize, n: usize, p_top: usize) -> Result<BettiTable> {
    vfield_cohomology_with(m, n, p_top, None, &ComplexOptions::default())
}

/// As [`vfield_cohomology`], with an explicit truncation degree (at least
/// `P`) and block cap.
pub fn vfield_cohomology_with(
    m: usize,
    n: usize,
    p_top: usize,
    dmax: Option<usize>,
    opts: &ComplexOptions,
) -> Result<BettiTable> {
    let g = vect_truncated(m, n, dmax.unwrap_or(p_top))?;
    weight_zero_cohomology(&g, &SuperModule::trivial(&g), p_top, opts)
}

/// `H^p(gl(n,1), Δ^λ)` for `p ≤ P`.
pub fn gl_coefficient_cohomology(n: usize, lambda: &Partition, p_top: usize) -> Result<BettiTable> {
    gl_coefficient_cohomology_with(n, lambda, p_top, &ComplexOptions::default())
}

pub fn gl_coefficient_cohomology_with(
    n: usize,
    lambda: &Partition,
    p_top: usize,
    opts: &ComplexOptions,
) -> Result<BettiTable> {
    if n == 0 {
        return Err(Error::InvalidInput("gl(n,1) needs n ≥ 1".into()));
    }
    let g = gl(n, 1)?;
    let delta = SuperModule::delta_module(&g, lambda)?;
    weight_zero_cohomology(&g, &delta, p_top, opts)
}

/// Whether every block of nonzero weight has vanishing cohomology in degrees
/// `≤ pmax`. Checked blocks: all torus blocks with h-weight in
/// `[-wmax, wmax] \ {0}`, and the torus blocks of h-weight 0 with nonzero
/// weight and all entries in `[-wmax, wmax]`.
pub fn nonzero_weight_acyclicity_check(
    g: &LieSuperalgebra,
    module: &SuperModule,
    pmax: usize,
    wmax: i64,
    opts: &ComplexOptions,
) -> Result<bool> {
    let filter = WeightFilter::HWeights((-wmax..=wmax).collect());
    let c = ce_complex(g, module, pmax, &filter, opts)?;
    for w in c.weights() {
        let h: i64 = w.iter().sum();
        let checked = if h != 0 {
            true
        } else {
            w.iter().any(|&x| x != 0) && w.iter().all(|x| x.abs() <= wmax)
        };
        if checked && !c.block_betti(&w, pmax)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `H^p(gl(n,1), Σ^α V ⊗ Σ^β V*)` vanishes for all `p ≤ P`.
pub fn vanishing_offdiagonal_check(n: usize, alpha: &Partition, beta: &Partition, p_top: usize) -> Result<bool> {
    if alpha == beta || alpha.size() != beta.size() {
        return Err(Error::InvalidInput(format!(
            "need distinct diagrams of equal size, got {alpha:?} and {beta:?}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput("gl(n,1) needs n ≥ 1".into()));
    }
    let g = gl(n, 1)?;
    let v = SuperModule::standard(&g)?;
    let vd = SuperModule::dual(&g, &v)?;
    let left = SuperModule::schur_module(&g, &v, alpha)?;
    let right = SuperModule::schur_module(&g, &vd, beta)?;
    let module = SuperModule::tensor(&g, &left, &right)?;
    let table = weight_zero_cohomology(&g, &module, p_top, &ComplexOptions::default())?;
    Ok(table.is_zero())
}
