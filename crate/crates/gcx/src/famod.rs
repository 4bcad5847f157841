//! Arity-wise data of the simple modules over the category of finite sets
//! and all maps.
//!
//! Three families are supported:
//!
//! * `C(lambda)`: at arity `n >= |lambda|`, the induction of
//!   `V_lambda ⊠ 1` from `S_|lambda| x S_{n-|lambda|}` to `S_n`, realized
//!   concretely as one copy of `V_lambda` per size-`|lambda|` subset
//!   `A ⊆ {1..n}` of marked points;
//! * `Tilde(m)`: the simple quotient of `C(1^m)`, the hook representation
//!   `V_{(n-m+1, 1^{m-1})}` at arity `n >= m`, realized as the image of the
//!   contraction map inside the wedge model of `C(1^{m-1})`;
//! * `Product(a_1..a_k)`: the pointwise tensor-induction of
//!   `C(1^{a_1}), ..., C(1^{a_k})`, used only by character and
//!   Euler-characteristic paths.
//!
//! A surjection of marked-point sets acts on subset summands by the
//! three-case rule: a summand `A` meeting a collapsed block in two or more
//! points dies; meeting it in one point, the point is replaced by the new
//! point; otherwise the subset is carried across unchanged. The carried
//! copy of `V_lambda` is transported along the induced bijection `A -> A'`,
//! which in sorted-basis coordinates is the representation matrix of the
//! alignment permutation (a sign, for one-column shapes: the rule is then
//! exactly the wedge-power pushforward).

use crate::sym::{induction_product, Partition, SeminormalRep};
use crate::{rat, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Which simple module a complex is decorated by.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FAModuleSpec {
    /// One copy of `V_lambda` per marked subset of size `|lambda|`.
    C(Partition),
    /// Simple quotient of `C(1^m)` (hook representation at each arity).
    Tilde(usize),
    /// Pointwise tensor-induction of one-column modules `C(1^{a_i})`.
    Product(Vec<usize>),
}

impl FAModuleSpec {
    /// The weight: smallest arity where the module is nonzero.
    pub fn weight(&self) -> usize {
        match self {
            FAModuleSpec::C(lam) => lam.size(),
            FAModuleSpec::Tilde(m) => *m,
            FAModuleSpec::Product(a) => a.iter().sum(),
        }
    }

    /// Number of marked points carried by the decoration subset(s): the
    /// count of distinguished half-edges a generator must reserve.
    pub fn marks(&self) -> usize {
        self.weight()
    }
}

impl fmt::Display for FAModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FAModuleSpec::C(lam) => write!(f, "C({lam})"),
            FAModuleSpec::Tilde(m) => write!(f, "Tilde({m})"),
            FAModuleSpec::Product(a) => {
                let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                write!(f, "Product({})", parts.join(","))
            }
        }
    }
}

/// Decomposition of `spec` at arity `n` into irreducibles of `S_n`.
pub fn c_arity(spec: &FAModuleSpec, n: usize) -> BTreeMap<Partition, u64> {
    match spec {
        FAModuleSpec::C(lam) => {
            let m = lam.size();
            if n < m || lam.is_empty() && n > 0 {
                // C(empty) is the constant module: one dimension at every
                // arity, decomposition {row(n): 1}.
                if lam.is_empty() {
                    return [(Partition::row(n), 1)].into_iter().collect();
                }
                return BTreeMap::new();
            }
            if n == m {
                return [(lam.clone(), 1)].into_iter().collect();
            }
            induction_product(lam, &Partition::row(n - m))
        }
        FAModuleSpec::Tilde(m) => {
            if n < *m {
                BTreeMap::new()
            } else if *m == 0 {
                [(Partition::row(n), 1)].into_iter().collect()
            } else {
                [(Partition::hook(n - m + 1, m - 1), 1)].into_iter().collect()
            }
        }
        FAModuleSpec::Product(arities) => {
            let mut acc: BTreeMap<usize, BTreeMap<Partition, u64>> = BTreeMap::new();
            acc.insert(0, [(Partition::empty(), 1)].into_iter().collect());
            for &a in arities {
                let mut next: BTreeMap<usize, BTreeMap<Partition, u64>> = BTreeMap::new();
                for (&used, decomp) in &acc {
                    for extra in a..=n.saturating_sub(used) {
                        let factor = c_arity(&FAModuleSpec::C(Partition::column(a)), extra);
                        for (lam, c1) in decomp {
                            for (mu, c2) in &factor {
                                let prod = induction_product(lam, mu);
                                let entry = next.entry(used + extra).or_default();
                                for (nu, c3) in prod {
                                    *entry.entry(nu).or_insert(0) += c1 * c2 * c3;
                                }
                            }
                        }
                    }
                }
                acc = next;
            }
            acc.remove(&n).unwrap_or_default()
        }
    }
}

/// Total dimension of `spec` at arity `n`.
pub fn dimension_at(spec: &FAModuleSpec, n: usize) -> u64 {
    c_arity(spec, n)
        .iter()
        .map(|(lam, mult)| mult * lam.dimension())
        .sum()
}

/// All size-`k` subsets of `{0..r-1}` in lexicographic order, the summand
/// index set of `C(lambda)` at arity `r` (for `k = |lambda|`).
#[derive(Debug, Clone)]
pub struct SubsetFamily {
    r: usize,
    k: usize,
    subsets: Vec<Vec<usize>>,
}

impl SubsetFamily {
    pub fn new(r: usize, k: usize) -> Self {
        let mut subsets = Vec::new();
        let mut cur = Vec::new();
        gen_subsets(r, k, 0, &mut cur, &mut subsets);
        SubsetFamily { r, k, subsets }
    }

    pub fn arity(&self) -> usize {
        self.r
    }

    pub fn subset_size(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    /// Index of a sorted subset.
    pub fn index(&self, subset: &[usize]) -> Option<usize> {
        self.subsets
            .binary_search_by(|probe| probe.as_slice().cmp(subset))
            .ok()
    }
}

fn gen_subsets(r: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    let remaining = k - cur.len();
    for x in start..=r.saturating_sub(remaining) {
        cur.push(x);
        gen_subsets(r, k, x + 1, cur, out);
        cur.pop();
    }
}

/// Action of a surjection on subset summands: for each source subset,
/// either `None` (killed: two marked points collide) or the target subset
/// index together with the alignment permutation `pi` of `{0..k-1}` such
/// that sorted-source position `i` maps to sorted-target position `pi[i]`.
#[derive(Debug, Clone)]
pub struct SubsetAction {
    pub source: SubsetFamily,
    pub target: SubsetFamily,
    pub images: Vec<Option<(usize, Vec<usize>)>>,
}

/// The subset-summand action of an arbitrary surjection
/// `f: {0..r-1} -> {0..r'-1}` (given as the image table) on size-`k`
/// subsets.
pub fn surjection_action(k: usize, f: &[usize], target_arity: usize) -> SubsetAction {
    let r = f.len();
    let mut hit = vec![false; target_arity];
    for &y in f {
        assert!(y < target_arity, "image out of range");
        hit[y] = true;
    }
    assert!(hit.iter().all(|&h| h), "map is not surjective");
    let source = SubsetFamily::new(r, k);
    let target = SubsetFamily::new(target_arity, k);
    let images = source
        .subsets()
        .iter()
        .map(|a| {
            let mut img: Vec<usize> = a.iter().map(|&x| f[x]).collect();
            let mut sorted = img.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() < a.len() {
                return None; // two marked points collided
            }
            // Alignment permutation: position i of the sorted source goes
            // to the rank of its image in the sorted image.
            let perm: Vec<usize> = img
                .iter()
                .map(|y| sorted.binary_search(y).unwrap())
                .collect();
            img.sort_unstable();
            let t = target.index(&img).expect("image subset in family");
            Some((t, perm))
        })
        .collect();
    SubsetAction {
        source,
        target,
        images,
    }
}

/// The canonical one-block collapse `{0..r-1} -> {0..r'-1}` sending the
/// block to the relabeled position of its minimum and keeping the relative
/// order of everything else. Returns the image table.
pub fn collapse_surjection(r: usize, block: &[usize]) -> (Vec<usize>, usize) {
    assert!(!block.is_empty(), "empty collapse block");
    let mut in_block = vec![false; r];
    for &b in block {
        assert!(b < r, "block element out of range");
        in_block[b] = true;
    }
    let pivot = *block.iter().min().unwrap();
    // Kept points: everything outside the block, plus the pivot standing
    // for the whole block.
    let kept: Vec<usize> = (0..r).filter(|&x| !in_block[x] || x == pivot).collect();
    let rank = |x: usize| kept.binary_search(&x).unwrap();
    let f: Vec<usize> = (0..r)
        .map(|x| if in_block[x] { rank(pivot) } else { rank(x) })
        .collect();
    (f, kept.len())
}

/// Subset-summand action of the canonical one-block collapse.
pub fn collapse_action(k: usize, r: usize, block: &[usize]) -> SubsetAction {
    let (f, target_arity) = collapse_surjection(r, block);
    surjection_action(k, &f, target_arity)
}

impl SubsetAction {
    /// Full matrix on `C(lambda)` at the source arity (rows: target basis,
    /// columns: source basis), with the `V_lambda` copy transported by the
    /// seminormal matrix of the alignment permutation. The basis order is
    /// (subset index) major, (tableau index) minor.
    pub fn full_matrix(&self, rep: &SeminormalRep) -> Vec<Vec<Rat>> {
        let d = rep.dim();
        let rows = self.target.len() * d;
        let cols = self.source.len() * d;
        let mut m = vec![vec![Rat::zero(); cols]; rows];
        for (src, img) in self.images.iter().enumerate() {
            if let Some((tgt, perm)) = img {
                let block = rep.matrix(perm);
                for i in 0..d {
                    for j in 0..d {
                        if !block[i][j].is_zero() {
                            m[tgt * d + i][src * d + j] = block[i][j].clone();
                        }
                    }
                }
            }
        }
        m
    }

    /// Matrix on `C(1^k)` (sign transport only): entry `±1` per surviving
    /// subset. Rows: target subsets; columns: source subsets.
    pub fn sign_matrix(&self) -> Vec<Vec<Rat>> {
        let mut m = vec![vec![Rat::zero(); self.source.len()]; self.target.len()];
        for (src, img) in self.images.iter().enumerate() {
            if let Some((tgt, perm)) = img {
                m[*tgt][src] = rat(perm_sign(perm));
            }
        }
        m
    }

    /// Compose with a subsequent action (this one applied first).
    pub fn then(&self, next: &SubsetAction) -> SubsetAction {
        assert_eq!(self.target.arity(), next.source.arity());
        assert_eq!(self.target.subset_size(), next.source.subset_size());
        let images = self
            .images
            .iter()
            .map(|img| {
                let (mid, p1) = img.as_ref()?;
                let (end, p2) = next.images[*mid].as_ref()?;
                // Compose alignment permutations: first p1, then p2.
                let composed: Vec<usize> = p1.iter().map(|&i| p2[i]).collect();
                Some((*end, composed))
            })
            .collect();
        SubsetAction {
            source: self.source.clone(),
            target: next.target.clone(),
            images,
        }
    }
}

/// Sign of a permutation given as an image table.
pub fn perm_sign(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i64;
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// The connecting map of the one-column resolution at arity `n`: the
/// contraction of the `j`-th wedge power of the arity space with the
/// all-ones covector, `e_{a_1} ∧ … ∧ e_{a_j} ↦ Σ_i (−1)^{i-1}
/// e_{a_1} ∧ … ê_{a_i} … ∧ e_{a_j}`, a map `C(1^j)(n) -> C(1^{j-1})(n)`.
/// Natural for every collapse (the collapse action is the wedge
/// pushforward, and contraction against a pulled-back covector commutes
/// with pushforward).
pub fn resolution_map(j: usize, n: usize) -> Vec<Vec<Rat>> {
    assert!(j >= 1);
    let source = SubsetFamily::new(n, j);
    let target = SubsetFamily::new(n, j - 1);
    let mut m = vec![vec![Rat::zero(); source.len()]; target.len()];
    for (src, a) in source.subsets().iter().enumerate() {
        for i in 0..a.len() {
            let mut b = a.clone();
            b.remove(i);
            let tgt = target.index(&b).unwrap();
            m[tgt][src] = rat(if i % 2 == 0 { 1 } else { -1 });
        }
    }
    m
}

/// The ordered resolution of `Tilde(m)`: the modules
/// `C(1^{m-1}), ..., C(1^1), C(1^0)`. The connecting matrices come from
/// [`resolution_map`].
pub fn tilde_resolution(m: usize) -> Vec<FAModuleSpec> {
    assert!(m >= 1);
    (0..m)
        .rev()
        .map(|j| FAModuleSpec::C(Partition::column(j)))
        .collect()
}

/// A column basis of the concrete model of `Tilde(m)` at arity `n`: the
/// image of [`resolution_map`]`(m, n)` inside the wedge model of
/// `C(1^{m-1})(n)`, as dense columns with the identity on pivot rows
/// (reduced column echelon form). Collapse actions restrict to this
/// subspace because the contraction map is natural.
pub fn tilde_image_basis(m: usize, n: usize) -> Vec<Vec<Rat>> {
    assert!(m >= 1);
    if n < m {
        return Vec::new();
    }
    let map = resolution_map(m, n);
    column_space_basis(&map)
}

/// Reduced column-echelon basis of the column space of a dense matrix.
pub fn column_space_basis(m: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    if m.is_empty() {
        return Vec::new();
    }
    let rows = m.len();
    let cols = m[0].len();
    // Work on the transpose (columns as vectors), Gaussian-eliminate.
    let mut vecs: Vec<Vec<Rat>> = (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j].clone()).collect())
        .collect();
    let mut basis: Vec<(usize, Vec<Rat>)> = Vec::new(); // (pivot row, column)
    for mut v in vecs.drain(..) {
        for (p, b) in &basis {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for i in 0..rows {
                    let t = b[i].clone() * c.clone();
                    v[i] -= t;
                }
            }
        }
        if let Some(p) = (0..rows).find(|&i| !v[i].is_zero()) {
            let inv = v[p].clone();
            for x in v.iter_mut() {
                *x /= inv.clone();
            }
            // Back-substitute to clear this pivot from earlier vectors.
            for (_, b) in basis.iter_mut() {
                if !b[p].is_zero() {
                    let c = b[p].clone();
                    for i in 0..rows {
                        let t = v[i].clone() * c.clone();
                        b[i] -= t;
                    }
                }
            }
            basis.push((p, v));
        }
    }
    basis.sort_by_key(|(p, _)| *p);
    basis.into_iter().map(|(_, b)| b).collect()
}
