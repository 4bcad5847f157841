//! Equivariant cohomology of decorated graph complexes.
//!
//! The cochain complex in genus `g` with `n` legs is spanned, in degree
//! `e` (= number of internal edges), by pairs (isomorphism class of
//! decorated graph, invariant decoration vector).  Per class the decoration
//! lives in
//! * the irreducible `V_λ` attached to the sorted marked slots for a
//!   marked-subset module,
//! * a one-dimensional sign line per color class for a product of wedge
//!   powers, or
//! * the concrete quotient model `im(Λ^m → Λ^{m-1})` of the slot space for
//!   a reduced wedge module,
//! cut down to the subspace invariant under all orientation-signed graph
//! automorphisms.  The differential sums vertex splittings, transporting
//! decorations through slot collapses and canonical-form alignments.
//!
//! All linear algebra is exact: ranks are computed modulo two independent
//! 62-bit primes (a third on disagreement) with a rational fallback, and
//! kernels/left inverses over ℚ.  Structural gates — `d∘d = 0`, vanishing
//! of the differential into null classes, agreement of the quick-null flag
//! with the invariant dimension — run on every build and fail hard.

use crate::famod::{
    self, c_arity, perm_sign, surjection_action, tilde_image_basis, FAModuleSpec,
};
use crate::graph::{
    self, canonicalize, splits, AutGen, Budget, ClassEntry, Graph, MarkShape, Slot, Variant,
};
use crate::sym::{
    character, class_size, conjugacy_classes, cycle_type, r_lambda, Partition, SeminormalRep,
};
use crate::{rat, Error, Rat, Result};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::sync::OnceLock;

// ---------------------------------------------------------------------------
// Modular arithmetic and primes
// ---------------------------------------------------------------------------

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for `u64` (the listed witnesses decide
/// primality for all 64-bit integers).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The fixed list of rank-check primes: the first eight primes below 2^62,
/// found deterministically.
pub fn rank_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::new();
        let mut candidate = (1u64 << 62) - 1;
        while out.len() < 8 {
            if is_prime_u64(candidate) {
                out.push(candidate);
            }
            candidate -= 2;
        }
        out
    })
}

// ---------------------------------------------------------------------------
// Sparse matrices
// ---------------------------------------------------------------------------

/// Sparse rational matrix in triplet form.
#[derive(Clone, Debug, Default)]
pub struct SparseMat {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<(u32, u32, Rat)>,
}

impl SparseMat {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, r: usize, c: usize, v: Rat) {
        if !v.is_zero() {
            debug_assert!(r < self.rows && c < self.cols);
            self.entries.push((r as u32, c as u32, v));
        }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Sort entries and merge duplicates.
    pub fn consolidate(&mut self) {
        self.entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(u32, u32, Rat)> = Vec::with_capacity(self.entries.len());
        for (r, c, v) in self.entries.drain(..) {
            if let Some(last) = merged.last_mut() {
                if last.0 == r && last.1 == c {
                    last.2 += v;
                    continue;
                }
            }
            merged.push((r, c, v));
        }
        merged.retain(|(_, _, v)| !v.is_zero());
        self.entries = merged;
    }

    pub fn is_zero(&mut self) -> bool {
        self.consolidate();
        self.entries.is_empty()
    }

    pub fn scale(&mut self, s: &Rat) {
        if s.is_zero() {
            self.entries.clear();
        } else {
            for e in &mut self.entries {
                e.2 *= s.clone();
            }
        }
    }

    pub fn add(&mut self, other: &SparseMat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries.extend(other.entries.iter().cloned());
        self.consolidate();
    }

    /// Sparse product `self · other`.
    pub fn mul(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, other.rows);
        // Index other by row.
        let mut by_row: Vec<Vec<(u32, &Rat)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in &other.entries {
            by_row[*r as usize].push((*c, v));
        }
        let mut out = SparseMat::new(self.rows, other.cols);
        let mut acc: BTreeMap<(u32, u32), Rat> = BTreeMap::new();
        for (r, k, v) in &self.entries {
            for (c, w) in &by_row[*k as usize] {
                let term = v.clone() * (*w).clone();
                *acc.entry((*r, *c)).or_insert_with(Rat::zero) += term;
            }
        }
        for ((r, c), v) in acc {
            out.push(r as usize, c as usize, v);
        }
        out
    }

    /// Rank modulo `p`; `None` if some denominator vanishes mod `p`.
    fn rank_mod(&self, p: u64) -> Option<usize> {
        let mut rows: Vec<BTreeMap<u32, u64>> = vec![BTreeMap::new(); self.rows];
        for (r, c, v) in &self.entries {
            let num = bigint_mod(v.numer(), p);
            let den = bigint_mod(v.denom(), p);
            if den == 0 {
                return None;
            }
            let val = mul_mod(num, inv_mod(den, p), p);
            let cell = rows[*r as usize].entry(*c).or_insert(0);
            *cell = (*cell + val) % p;
        }
        for row in &mut rows {
            row.retain(|_, v| *v != 0);
        }
        let mut active: Vec<BTreeMap<u32, u64>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
        let mut rank = 0;
        while !active.is_empty() {
            let idx = active
                .iter()
                .enumerate()
                .min_by_key(|(_, r)| r.len())
                .map(|(i, _)| i)
                .unwrap();
            let pivot_row = active.swap_remove(idx);
            let (&pc, &pv) = pivot_row.iter().next().unwrap();
            rank += 1;
            let pinv = inv_mod(pv, p);
            for row in active.iter_mut() {
                if let Some(&v) = row.get(&pc) {
                    let factor = mul_mod(v, pinv, p);
                    for (&c, &pvc) in &pivot_row {
                        let sub = mul_mod(factor, pvc, p);
                        let cur = row.get(&c).copied().unwrap_or(0);
                        let next = (cur + p - sub) % p;
                        if next == 0 {
                            row.remove(&c);
                        } else {
                            row.insert(c, next);
                        }
                    }
                }
            }
            active.retain(|r| !r.is_empty());
        }
        Some(rank)
    }

    /// Exact rank by rational sparse elimination (fallback path).
    pub fn rank_exact(&self) -> usize {
        let mut rows: Vec<BTreeMap<u32, Rat>> = vec![BTreeMap::new(); self.rows];
        for (r, c, v) in &self.entries {
            let cell = rows[*r as usize]
                .entry(*c)
                .or_insert_with(Rat::zero);
            *cell += v.clone();
        }
        for row in &mut rows {
            row.retain(|_, v| !v.is_zero());
        }
        let mut active: Vec<BTreeMap<u32, Rat>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
        let mut rank = 0;
        while !active.is_empty() {
            let idx = active
                .iter()
                .enumerate()
                .min_by_key(|(_, r)| r.len())
                .map(|(i, _)| i)
                .unwrap();
            let pivot_row = active.swap_remove(idx);
            let (pc, pv) = {
                let (c, v) = pivot_row.iter().next().unwrap();
                (*c, v.clone())
            };
            rank += 1;
            for row in active.iter_mut() {
                if let Some(v) = row.get(&pc).cloned() {
                    let factor = v / pv.clone();
                    for (&c, pvc) in &pivot_row {
                        let sub = factor.clone() * pvc.clone();
                        let cur = row.entry(c).or_insert_with(Rat::zero);
                        *cur -= sub;
                        if cur.is_zero() {
                            row.remove(&c);
                        }
                    }
                }
            }
            active.retain(|r| !r.is_empty());
        }
        rank
    }

    /// Exact rank: two independent primes, a third on disagreement, and a
    /// rational elimination fallback if no two agree.
    pub fn rank(&mut self) -> usize {
        self.consolidate();
        if self.entries.is_empty() {
            return 0;
        }
        let mut results = Vec::new();
        for &p in rank_primes() {
            if let Some(r) = self.rank_mod(p) {
                results.push(r);
                if results.len() == 2 && results[0] == results[1] {
                    return results[0];
                }
                if results.len() == 3 {
                    if results[2] == results[0] || results[2] == results[1] {
                        return results[2];
                    }
                    break;
                }
            }
        }
        self.rank_exact()
    }
}

pub(crate) fn bigint_mod(x: &crate::Int, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    let m = x % crate::Int::from(p);
    let m = if m.is_negative() { m + crate::Int::from(p) } else { m };
    m.to_u64().expect("residue fits")
}

// ---------------------------------------------------------------------------
// Dense rational helpers
// ---------------------------------------------------------------------------

type Dense = Vec<Vec<Rat>>;

fn dense_zero(rows: usize, cols: usize) -> Dense {
    vec![vec![Rat::zero(); cols]; rows]
}

fn dense_identity(n: usize) -> Dense {
    let mut m = dense_zero(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rat::one();
    }
    m
}

fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    let mut out = dense_zero(rows, cols);
    for (i, arow) in a.iter().enumerate() {
        for (k, av) in arow.iter().enumerate() {
            if av.is_zero() {
                continue;
            }
            for (j, bv) in b[k].iter().enumerate() {
                if !bv.is_zero() {
                    out[i][j] += av.clone() * bv.clone();
                }
            }
        }
    }
    out
}

fn dense_add_assign(a: &mut Dense, b: &Dense) {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (va, vb) in ra.iter_mut().zip(rb) {
            *va += vb.clone();
        }
    }
}

fn dense_is_zero(a: &Dense) -> bool {
    a.iter().all(|row| row.iter().all(|v| v.is_zero()))
}

/// Row-reduce in place; returns pivot columns.
fn rref(m: &mut Dense) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].clone();
        for v in m[r].iter_mut() {
            *v /= inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = m[r][j].clone() * f.clone();
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : Mx = 0}` as columns.
fn nullspace_dense(mat: &Dense, cols: usize) -> Vec<Vec<Rat>> {
    let mut m = mat.to_vec();
    let pivots = rref(&mut m);
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; cols];
        for &p in &pivots {
            s[p] = true;
        }
        s
    };
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set[free] {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Left inverse of a full-column-rank matrix given by its columns: returns
/// rows `L` with `L · B = I`.
fn left_inverse(basis_cols: &[Vec<Rat>]) -> Dense {
    let k = basis_cols.len();
    if k == 0 {
        return Vec::new();
    }
    let m = basis_cols[0].len();
    // Augment [B | I_m] as rows and reduce.
    let mut aug = dense_zero(m, k + m);
    for (j, col) in basis_cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            aug[i][j] = v.clone();
        }
    }
    for (i, row) in aug.iter_mut().enumerate() {
        row[k + i] = Rat::one();
    }
    let pivots = rref(&mut aug);
    assert_eq!(
        &pivots[..k.min(pivots.len())],
        &(0..k).collect::<Vec<_>>()[..],
        "columns not independent"
    );
    (0..k)
        .map(|r| aug[r][k..].to_vec())
        .collect()
}

// ---------------------------------------------------------------------------
// Decoration contexts
// ---------------------------------------------------------------------------

/// How decorations attach to a graph class, and how slot maps act on them.
enum DecKind {
    /// Irreducible `V_λ` on the sorted marked slots (single color class).
    Lambda(SeminormalRep),
    /// Product of sign lines, one per color class.
    Product,
    /// Concrete quotient model of the reduced wedge module: the image of
    /// the contraction inside `Λ^{m-1}(slots)`.
    Wedge(usize),
}

pub struct DecContext {
    kind: DecKind,
    shape: MarkShape,
}

impl DecContext {
    pub fn new(module: &FAModuleSpec) -> Result<Self> {
        let (kind, shape) = match module {
            FAModuleSpec::C(lam) => {
                if lam.is_empty() {
                    return Err(Error::InvalidInput("empty decoration partition".into()));
                }
                (
                    DecKind::Lambda(SeminormalRep::new(lam)),
                    MarkShape::subsets(&[lam.size()]),
                )
            }
            FAModuleSpec::Product(sizes) => {
                if sizes.is_empty() || sizes.iter().any(|&a| a == 0) {
                    return Err(Error::InvalidInput("empty product factor".into()));
                }
                (DecKind::Product, MarkShape::subsets(sizes))
            }
            FAModuleSpec::Tilde(m) => {
                if *m == 0 {
                    return Err(Error::InvalidInput("reduced wedge weight 0".into()));
                }
                (DecKind::Wedge(*m), MarkShape::plain(*m))
            }
        };
        Ok(DecContext { kind, shape })
    }

    pub fn shape(&self) -> &MarkShape {
        &self.shape
    }

    /// Whether the differential must prune splits moving two marked slots.
    pub fn subset_mode(&self) -> bool {
        self.shape.subset_mode()
    }

    /// Ambient decoration dimension of a class (before symmetrization).
    fn ambient_dim(&self, g: &Graph) -> usize {
        match &self.kind {
            DecKind::Lambda(rep) => rep.dim(),
            DecKind::Product => 1,
            DecKind::Wedge(m) => {
                let r = g.estar_slots().len();
                famod::SubsetFamily::new(r, m - 1).len()
            }
        }
    }

    /// Columns spanning the decoration space inside the ambient coordinates
    /// (all of it for irreducibles and sign lines; the contraction image
    /// for the wedge model).
    fn pre_basis(&self, g: &Graph) -> Vec<Vec<Rat>> {
        match &self.kind {
            DecKind::Lambda(rep) => dense_identity(rep.dim())
                .into_iter()
                .collect(),
            DecKind::Product => vec![vec![Rat::one()]],
            DecKind::Wedge(m) => {
                let r = g.estar_slots().len();
                tilde_image_basis(*m, r)
            }
        }
    }

    /// Matrix of the signed slot map `f` from `src`'s slots to `tgt`'s
    /// slots on ambient coordinates (rows: target, cols: source).
    fn action(&self, src: &Graph, f: &[usize], tgt: &Graph, sign: i8) -> Result<Dense> {
        let s = rat(sign as i64);
        match &self.kind {
            DecKind::Lambda(rep) => {
                let perms = color_alignments(src, f, tgt)?;
                let m = rep.matrix(&perms[0]);
                Ok(m.iter()
                    .map(|row| row.iter().map(|v| v.clone() * s.clone()).collect())
                    .collect())
            }
            DecKind::Product => {
                let perms = color_alignments(src, f, tgt)?;
                let mut val = s;
                for p in &perms {
                    val *= rat(perm_sign(p));
                }
                Ok(vec![vec![val]])
            }
            DecKind::Wedge(m) => {
                let r_t = tgt.estar_slots().len();
                let act = surjection_action(*m - 1, f, r_t);
                let mut mat = act.sign_matrix();
                for row in &mut mat {
                    for v in row.iter_mut() {
                        *v *= s.clone();
                    }
                }
                Ok(mat)
            }
        }
    }
}

/// Alignment permutations per color class: `perms[c][i]` is the sorted
/// position in the target's color class of the image of the `i`-th marked
/// slot of the source's class `c+1`.
fn color_alignments(src: &Graph, f: &[usize], tgt: &Graph) -> Result<Vec<Vec<usize>>> {
    let src_classes = src.marked_ordinals();
    let tgt_classes = tgt.marked_ordinals();
    if src_classes.len() != tgt_classes.len() {
        return Err(Error::Consistency(
            "slot map changes the number of colors".into(),
        ));
    }
    src_classes
        .iter()
        .zip(&tgt_classes)
        .map(|(sc, tc)| {
            sc.iter()
                .map(|&s| {
                    tc.binary_search(&f[s]).map_err(|_| {
                        Error::Consistency("slot map misaligns marked slots".into())
                    })
                })
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// The complex
// ---------------------------------------------------------------------------

/// One graph class with its symmetrized decoration space.
pub struct ClassData {
    pub key: Vec<u32>,
    pub graph: Graph,
    pub auts: Vec<AutGen>,
    pub quick_null: bool,
    /// Ambient decoration dimension.
    pub ambient: usize,
    /// Columns (ambient coordinates) spanning the invariant subspace.
    pub basis: Vec<Vec<Rat>>,
    /// Rows sending a decoration vector to the coordinates of its
    /// automorphism average in `basis`: the complement of the invariants
    /// is spanned by the images of `A_i − I` over the generators, so
    /// averaging is projection along that complement.  Empty when the
    /// class is null.
    pub left: Dense,
    /// Column offset of this class inside its degree.
    pub offset: usize,
}

impl ClassData {
    pub fn inv_dim(&self) -> usize {
        self.basis.len()
    }
}

/// Cochain data of one degree.
pub struct DegreeData {
    pub classes: Vec<ClassData>,
    pub dim: usize,
}

/// Resource limits for building a complex.
#[derive(Clone, Copy, Debug)]
pub struct ComplexBudget {
    pub max_classes: usize,
    pub max_visits: u64,
    /// Cap on the total cochain dimension across all degrees.
    pub max_basis: usize,
}

impl Default for ComplexBudget {
    fn default() -> Self {
        ComplexBudget {
            max_classes: 500_000,
            max_visits: 50_000_000,
            max_basis: 200_000,
        }
    }
}

impl ComplexBudget {
    fn enum_budget(&self) -> Budget {
        Budget {
            max_classes: self.max_classes,
            max_visits: self.max_visits,
        }
    }
}

/// A fully assembled equivariant cochain complex.
pub struct Complex {
    pub module: FAModuleSpec,
    pub variant: Variant,
    pub g: usize,
    pub n: usize,
    /// `degrees[e]` spans cohomological degree `e`.
    pub degrees: Vec<DegreeData>,
    /// `diffs[e]` maps degree `e` to degree `e+1`; the last one is empty.
    pub diffs: Vec<SparseMat>,
    dec: DecContext,
}

/// Builds the full cochain complex, its invariant bases, and the
/// differential, running the structural gates.
pub fn build_complex(
    module: &FAModuleSpec,
    variant: Variant,
    g: usize,
    n: usize,
    budget: &ComplexBudget,
) -> Result<Complex> {
    let dec = DecContext::new(module)?;
    let max_e = (3 * g + n).checked_sub(dec.shape().min_slots);
    let mut degrees: Vec<DegreeData> = Vec::new();
    let mut total_dim = 0usize;
    if let Some(max_e) = max_e {
        for e in 0..=max_e {
            let entries = graph::enumerate(dec.shape(), g, n, e, variant, &budget.enum_budget())?;
            let mut classes = Vec::with_capacity(entries.len());
            let mut offset = 0;
            for entry in entries {
                let data = class_space(&dec, entry, offset)?;
                offset += data.inv_dim();
                classes.push(data);
            }
            total_dim += offset;
            if total_dim > budget.max_basis {
                return Err(Error::BudgetExhausted(format!(
                    "cochain basis exceeds {} vectors",
                    budget.max_basis
                )));
            }
            degrees.push(DegreeData {
                classes,
                dim: offset,
            });
        }
    }
    // Trim trailing empty degrees (keeps reports tidy; inner zero degrees
    // stay, they matter for the differential indexing).
    while degrees.last().is_some_and(|d| d.dim == 0) {
        degrees.pop();
    }
    let mut complex = Complex {
        module: module.clone(),
        variant,
        g,
        n,
        diffs: Vec::new(),
        degrees,
        dec,
    };
    assemble_differentials(&mut complex)?;
    gate_d_squared(&mut complex)?;
    Ok(complex)
}

/// Computes the invariant decoration space of one class, together with the
/// averaging projection onto it.
fn class_space(dec: &DecContext, entry: ClassEntry, offset: usize) -> Result<ClassData> {
    let g = &entry.graph;
    let ambient = dec.ambient_dim(g);
    let pre = dec.pre_basis(g);
    let pre_dim = pre.len();
    // (A_i − I) · pre per generator: its kernel rows cut out the invariant
    // subspace, its columns span the complement of the invariants inside
    // the decoration space (the group is finite, so the two split it).
    let mut constraints: Dense = Vec::new();
    let mut moving_raw: Vec<Vec<Rat>> = Vec::new();
    for gen in &entry.auts {
        let mut a = dec.action(g, &gen.estar_perm, g, gen.sign)?;
        for (i, row) in a.iter_mut().enumerate() {
            row[i] -= Rat::one();
        }
        let ai_pre = dense_mul(&a, &columns_as_dense(&pre));
        for j in 0..pre_dim {
            let col: Vec<Rat> = ai_pre.iter().map(|row| row[j].clone()).collect();
            if col.iter().any(|v| !v.is_zero()) {
                moving_raw.push(col);
            }
        }
        for row in ai_pre {
            if row.iter().any(|v| !v.is_zero()) {
                constraints.push(row);
            }
        }
    }
    let ys = if constraints.is_empty() {
        dense_identity(pre_dim)
    } else {
        nullspace_dense(&constraints, pre_dim)
    };
    // basis = pre · y for each kernel vector y.
    let basis: Vec<Vec<Rat>> = ys
        .iter()
        .map(|y| {
            let mut col = vec![Rat::zero(); ambient];
            for (j, w) in y.iter().enumerate() {
                if !w.is_zero() {
                    for (i, v) in pre[j].iter().enumerate() {
                        if !v.is_zero() {
                            col[i] += v.clone() * w.clone();
                        }
                    }
                }
            }
            col
        })
        .collect();
    if entry.quick_null && !basis.is_empty() {
        return Err(Error::Consistency(format!(
            "quick-null class has a nonzero invariant space: {}",
            entry.graph
        )));
    }
    let moving = famod::column_space_basis(&columns_as_dense(&moving_raw));
    if basis.len() + moving.len() != pre_dim {
        return Err(Error::Consistency(format!(
            "invariants and their complement do not span the decorations of {}",
            entry.graph
        )));
    }
    let left = if basis.is_empty() {
        Vec::new()
    } else {
        let mut combined = basis.clone();
        combined.extend(moving);
        let mut l = left_inverse(&combined);
        l.truncate(basis.len());
        l
    };
    Ok(ClassData {
        key: entry.key,
        graph: entry.graph,
        auts: entry.auts,
        quick_null: entry.quick_null,
        ambient,
        basis,
        left,
        offset,
    })
}

/// Assembles all differentials, transporting decorations through splits,
/// and checks that null classes receive nothing.
fn assemble_differentials(complex: &mut Complex) -> Result<()> {
    let nd = complex.degrees.len();
    let mut diffs = Vec::with_capacity(nd);
    for e in 0..nd {
        let (src_dim, tgt_dim) = (
            complex.degrees[e].dim,
            if e + 1 < nd {
                complex.degrees[e + 1].dim
            } else {
                0
            },
        );
        let mut d = SparseMat::new(tgt_dim, src_dim);
        if e + 1 < nd {
            let key_index: BTreeMap<&Vec<u32>, usize> = complex.degrees[e + 1]
                .classes
                .iter()
                .enumerate()
                .map(|(i, c)| (&c.key, i))
                .collect();
            for s in &complex.degrees[e].classes {
                if s.inv_dim() == 0 {
                    continue;
                }
                // Accumulate ambient action matrices per target class.
                let mut acc: BTreeMap<usize, Dense> = BTreeMap::new();
                for split in splits(&s.graph, complex.dec.subset_mode()) {
                    let canon = canonicalize(&split.graph)?;
                    let Some(&t_idx) = key_index.get(&canon.key) else {
                        // A split may drain the special vertex below the
                        // slot count the decoration functor needs; such
                        // targets carry the zero space and are not
                        // cataloged.  Anything else missing is a bug.
                        if canon.graph.estar_slots().len() < complex.dec.shape().min_slots {
                            continue;
                        }
                        return Err(Error::Consistency(format!(
                            "split target not in degree {} catalog: {}",
                            e + 1,
                            canon.graph
                        )));
                    };
                    let t = &complex.degrees[e + 1].classes[t_idx];
                    // Composite slot map: collapse (if any), then canonical
                    // alignment.
                    let f: Vec<usize> = match &split.collapse {
                        Some(cm) => cm.map.iter().map(|&x| canon.estar_map[x]).collect(),
                        None => canon.estar_map.clone(),
                    };
                    let a = complex.dec.action(&s.graph, &f, &t.graph, canon.sign)?;
                    match acc.entry(t_idx) {
                        std::collections::btree_map::Entry::Occupied(mut o) => {
                            dense_add_assign(o.get_mut(), &a)
                        }
                        std::collections::btree_map::Entry::Vacant(v) => {
                            v.insert(a);
                        }
                    }
                }
                for (t_idx, a) in acc {
                    let t = &complex.degrees[e + 1].classes[t_idx];
                    // The differential of an invariant cochain is the
                    // automorphism average of the summed transports, so
                    // null targets receive nothing after projection.
                    if t.inv_dim() == 0 {
                        continue;
                    }
                    let contrib = dense_mul(&a, &columns_as_dense(&s.basis));
                    if dense_is_zero(&contrib) {
                        continue;
                    }
                    let coords = dense_mul(&t.left, &contrib);
                    for (i, row) in coords.iter().enumerate() {
                        for (j, v) in row.iter().enumerate() {
                            d.push(t.offset + i, s.offset + j, v.clone());
                        }
                    }
                }
            }
        }
        d.consolidate();
        diffs.push(d);
    }
    complex.diffs = diffs;
    Ok(())
}

/// Columns (each a Vec) to dense matrix (ambient × k).
fn columns_as_dense(cols: &[Vec<Rat>]) -> Dense {
    if cols.is_empty() {
        return Vec::new();
    }
    let m = cols[0].len();
    (0..m)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect()
}

fn gate_d_squared(complex: &mut Complex) -> Result<()> {
    for e in 0..complex.diffs.len().saturating_sub(1) {
        let mut dd = complex.diffs[e + 1].mul(&complex.diffs[e]);
        if !dd.is_zero() {
            return Err(Error::Consistency(format!(
                "d∘d ≠ 0 between degrees {} and {}",
                e,
                e + 2
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Symmetric-group action on the complex
// ---------------------------------------------------------------------------

/// Relabels the legs by `sigma` (label `l` becomes `sigma[l]`) and returns
/// the relabeled graph with the slot map from the original's slot ordinals.
fn leg_relabel(g: &Graph, sigma: &[usize]) -> (Graph, Vec<usize>) {
    let mut legs = vec![0u8; g.legs.len()];
    for (l, &v) in g.legs.iter().enumerate() {
        legs[sigma[l]] = v;
    }
    let mut marks: Vec<(Slot, u8)> = g
        .marks
        .iter()
        .map(|&(slot, c)| match slot {
            Slot::Leg { label } => (
                Slot::Leg {
                    label: sigma[label as usize] as u8,
                },
                c,
            ),
            half => (half, c),
        })
        .collect();
    marks.sort();
    let relabeled = Graph {
        blacks: g.blacks,
        edges: g.edges.clone(),
        legs,
        marks,
    };
    let new_slots = relabeled.estar_slots();
    let ordinal: BTreeMap<Slot, usize> = new_slots
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i))
        .collect();
    let map: Vec<usize> = g
        .estar_slots()
        .iter()
        .map(|&slot| {
            let image = match slot {
                Slot::Leg { label } => Slot::Leg {
                    label: sigma[label as usize] as u8,
                },
                half => half,
            };
            ordinal[&image]
        })
        .collect();
    (relabeled, map)
}

/// Sparse matrix of the permutation `sigma` acting on degree `e`.
fn sigma_matrix(complex: &Complex, e: usize, sigma: &[usize]) -> Result<SparseMat> {
    let deg = &complex.degrees[e];
    let key_index: BTreeMap<&Vec<u32>, usize> = deg
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| (&c.key, i))
        .collect();
    let mut m = SparseMat::new(deg.dim, deg.dim);
    for s in &deg.classes {
        if s.inv_dim() == 0 {
            continue;
        }
        let (relabeled, rmap) = leg_relabel(&s.graph, sigma);
        let canon = canonicalize(&relabeled)?;
        let Some(&t_idx) = key_index.get(&canon.key) else {
            return Err(Error::Consistency(
                "leg relabeling leaves the catalog".into(),
            ));
        };
        let t = &deg.classes[t_idx];
        // Relabeling acts invertibly on the invariant model, so paired
        // classes must have equal invariant dimensions.
        if t.inv_dim() != s.inv_dim() {
            return Err(Error::Consistency(
                "leg relabeling changes the invariant dimension".into(),
            ));
        }
        let f: Vec<usize> = rmap.iter().map(|&x| canon.estar_map[x]).collect();
        let a = complex.dec.action(&s.graph, &f, &t.graph, canon.sign)?;
        let contrib = dense_mul(&a, &columns_as_dense(&s.basis));
        if dense_is_zero(&contrib) {
            continue;
        }
        let coords = dense_mul(&t.left, &contrib);
        for (i, row) in coords.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.push(t.offset + i, s.offset + j, v.clone());
            }
        }
    }
    m.consolidate();
    Ok(m)
}

/// Trace of `sigma` on degree `e` (character of the cochain representation).
fn degree_trace(complex: &Complex, e: usize, sigma: &[usize]) -> Result<Rat> {
    let deg = &complex.degrees[e];
    let key_index: BTreeMap<&Vec<u32>, usize> = deg
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| (&c.key, i))
        .collect();
    let mut tr = Rat::zero();
    for (s_idx, s) in deg.classes.iter().enumerate() {
        if s.inv_dim() == 0 {
            continue;
        }
        let (relabeled, rmap) = leg_relabel(&s.graph, sigma);
        let canon = canonicalize(&relabeled)?;
        let Some(&t_idx) = key_index.get(&canon.key) else {
            return Err(Error::Consistency(
                "leg relabeling leaves the catalog".into(),
            ));
        };
        if t_idx != s_idx {
            continue;
        }
        let f: Vec<usize> = rmap.iter().map(|&x| canon.estar_map[x]).collect();
        let a = complex.dec.action(&s.graph, &f, &s.graph, canon.sign)?;
        let coords = dense_mul(&s.left, &dense_mul(&a, &columns_as_dense(&s.basis)));
        for (i, row) in coords.iter().enumerate() {
            tr += row[i].clone();
        }
    }
    Ok(tr)
}

/// One-line representative permutation of a cycle type.
fn cycle_representative(mu: &Partition, n: usize) -> Vec<usize> {
    let mut sigma = Vec::with_capacity(n);
    let mut start = 0;
    for &part in mu.parts() {
        for i in 0..part {
            sigma.push(start + (i + 1) % part);
        }
        start += part;
    }
    while sigma.len() < n {
        let i = sigma.len();
        sigma.push(i);
    }
    sigma
}

/// All permutations of `0..n` (image tables).
fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                let next = p.len();
                (0..=next).map(move |pos| {
                    // Insert the new largest point at `pos` in cycle-free
                    // one-line growth: simplest is to build images over
                    // 0..n directly below.
                    let mut q = p.clone();
                    q.insert(pos, next);
                    q
                })
            })
            .collect();
    }
    // `out` currently holds arrangements (orderings); convert to image
    // tables: arrangement a means sigma(i) = a[i].
    out
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Cohomology of one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub degree: usize,
    /// Number of isomorphism classes of generators (including null ones).
    pub classes: usize,
    /// Dimension of the invariant cochain space.
    pub cochain_dim: usize,
    /// Dimension of the cohomology.
    pub betti: usize,
    /// Multiplicities of the irreducible S_n-representations in the
    /// cohomology, when computed (absent for large `n`).
    pub isotypic: Option<BTreeMap<Partition, u64>>,
}

/// Cohomology of a whole complex.
#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub module: FAModuleSpec,
    pub variant: Variant,
    pub g: usize,
    pub n: usize,
    pub degrees: Vec<DegreeReport>,
}

impl CohomologyReport {
    /// The non-equivariant Euler characteristic Σ (−1)^e betti_e.
    pub fn euler(&self) -> i64 {
        self.degrees
            .iter()
            .map(|d| (if d.degree % 2 == 0 { 1 } else { -1 }) * d.betti as i64)
            .sum()
    }
}

/// Largest `n` for which the full group algebra projections are computed.
const ISOTYPIC_MAX_N: usize = 7;

/// Computes ranks, Betti numbers, and (for `n ≤ 7`) isotypic
/// decompositions of the cohomology.
pub fn cohomology(complex: &Complex) -> Result<CohomologyReport> {
    let nd = complex.degrees.len();
    let mut ranks = vec![0usize; nd];
    let mut diffs = complex.diffs.clone();
    for (e, d) in diffs.iter_mut().enumerate() {
        ranks[e] = d.rank();
    }
    let mut degrees = Vec::with_capacity(nd);
    let with_isotypic = complex.n <= ISOTYPIC_MAX_N;
    let isotypic = if with_isotypic {
        Some(isotypic_cohomology(complex, &ranks)?)
    } else {
        None
    };
    for e in 0..nd {
        let dim = complex.degrees[e].dim;
        let rank_out = ranks[e];
        let rank_in = if e > 0 { ranks[e - 1] } else { 0 };
        let betti = dim - rank_out - rank_in;
        degrees.push(DegreeReport {
            degree: e,
            classes: complex.degrees[e].classes.len(),
            cochain_dim: dim,
            betti,
            isotypic: isotypic.as_ref().map(|iso| iso[e].clone()),
        });
    }
    Ok(CohomologyReport {
        module: complex.module.clone(),
        variant: complex.variant,
        g: complex.g,
        n: complex.n,
        degrees,
    })
}

/// Isotypic multiplicities of every cohomology degree, via characters for
/// the cochain spaces and equivariant projections for the images.
fn isotypic_cohomology(
    complex: &Complex,
    ranks: &[usize],
) -> Result<Vec<BTreeMap<Partition, u64>>> {
    let n = complex.n;
    let nd = complex.degrees.len();
    let lambdas = crate::sym::partitions(n);
    let classes = conjugacy_classes(n);
    let group_order: u64 = (1..=n as u64).product();
    // Characters of the cochain spaces per conjugacy class.
    let mut cochain_chars: Vec<Vec<Rat>> = Vec::with_capacity(nd);
    for e in 0..nd {
        let mut per_class = Vec::with_capacity(classes.len());
        for mu in &classes {
            let sigma = cycle_representative(mu, n);
            per_class.push(degree_trace(complex, e, &sigma)?);
        }
        cochain_chars.push(per_class);
    }
    // m_λ(C^e) by orthogonality.
    let mult_in_cochains = |e: usize, lam: &Partition| -> Result<u64> {
        let mut acc = Rat::zero();
        for (ci, mu) in classes.iter().enumerate() {
            acc += rat(class_size(mu) as i64)
                * rat(character(lam, mu))
                * cochain_chars[e][ci].clone();
        }
        let m = acc / rat(group_order as i64);
        rat_to_u64(&m).ok_or_else(|| {
            Error::Consistency(format!(
                "non-integral multiplicity of {lam} in degree {e} cochains"
            ))
        })
    };
    // Group action matrices per degree (only needed when some differential
    // is nonzero; the identity degree contributes via characters alone).
    let perms = all_permutations(n);
    let mut image_mults: Vec<BTreeMap<Partition, u64>> = Vec::with_capacity(nd);
    for e in 0..nd {
        let mut per_lambda = BTreeMap::new();
        if ranks[e] > 0 {
            // Action matrices once per degree.
            let mats: Vec<SparseMat> = perms
                .iter()
                .map(|sigma| sigma_matrix(complex, e, sigma))
                .collect::<Result<_>>()?;
            for lam in &lambdas {
                let dim_l = lam.dimension();
                // Projection (dim_λ/|G|) Σ χ_λ(σ) M_σ.
                let mut proj = SparseMat::new(complex.degrees[e].dim, complex.degrees[e].dim);
                for (sigma, m) in perms.iter().zip(&mats) {
                    let chi = character(lam, &cycle_type(sigma));
                    if chi == 0 {
                        continue;
                    }
                    let mut scaled = m.clone();
                    scaled.scale(&rat(chi));
                    proj.add(&scaled);
                }
                proj.scale(&(rat(dim_l as i64) / rat(group_order as i64)));
                let mut di = complex.diffs[e].mul(&proj);
                let r = di.rank();
                if r as u64 % dim_l != 0 {
                    return Err(Error::Consistency(format!(
                        "isotypic rank of the differential not divisible by dim {lam}"
                    )));
                }
                let m_im = r as u64 / dim_l;
                if m_im > 0 {
                    per_lambda.insert(lam.clone(), m_im);
                }
            }
            // Cross-check: Σ dim_λ · m_λ(im) = rank.
            let total: u64 = per_lambda
                .iter()
                .map(|(l, m)| l.dimension() * m)
                .sum();
            if total != ranks[e] as u64 {
                return Err(Error::Consistency(
                    "isotypic image multiplicities do not add up to the rank".into(),
                ));
            }
        }
        image_mults.push(per_lambda);
    }
    let mut out = Vec::with_capacity(nd);
    for e in 0..nd {
        let mut iso = BTreeMap::new();
        let mut betti_check = 0u64;
        for lam in &lambdas {
            let in_c = mult_in_cochains(e, lam)?;
            let im_out = image_mults[e].get(lam).copied().unwrap_or(0);
            let im_in = if e > 0 {
                image_mults[e - 1].get(lam).copied().unwrap_or(0)
            } else {
                0
            };
            let total_sub = im_out + im_in;
            if total_sub > in_c {
                return Err(Error::Consistency(format!(
                    "negative multiplicity of {lam} in cohomology degree {e}"
                )));
            }
            let m = in_c - total_sub;
            if m > 0 {
                betti_check += lam.dimension() * m;
                iso.insert(lam.clone(), m);
            }
        }
        let dim = complex.degrees[e].dim;
        let rank_out = ranks[e];
        let rank_in = if e > 0 { ranks[e - 1] } else { 0 };
        if betti_check != (dim - rank_out - rank_in) as u64 {
            return Err(Error::Consistency(format!(
                "isotypic dimensions disagree with the Betti number in degree {e}"
            )));
        }
        out.push(iso);
    }
    Ok(out)
}

fn rat_to_u64(r: &Rat) -> Option<u64> {
    use num_traits::ToPrimitive;
    if !r.is_integer() || r.is_negative() {
        return None;
    }
    r.numer().to_u64()
}

fn rat_to_i64(r: &Rat) -> Option<i64> {
    use num_traits::ToPrimitive;
    if !r.is_integer() {
        return None;
    }
    r.numer().to_i64()
}

/// Equivariant Euler characteristic of the complex as a virtual sum of
/// irreducibles: Σ_e (−1)^e [C^e] expanded in Schur multiplicities.  This
/// needs no ranks, only cochain characters, so it is the cheap side of the
/// cross-validation against the generating-function values.
pub fn equivariant_euler(complex: &Complex) -> Result<BTreeMap<Partition, i64>> {
    let n = complex.n;
    let classes = conjugacy_classes(n);
    let group_order: u64 = (1..=n as u64).product();
    // Alternating character sums per conjugacy class.
    let mut chi = vec![Rat::zero(); classes.len()];
    for (e, _) in complex.degrees.iter().enumerate() {
        let sign = if e % 2 == 0 { 1 } else { -1 };
        for (ci, mu) in classes.iter().enumerate() {
            let sigma = cycle_representative(mu, n);
            chi[ci] += rat(sign) * degree_trace(complex, e, &sigma)?;
        }
    }
    let mut out = BTreeMap::new();
    for lam in crate::sym::partitions(n) {
        let mut acc = Rat::zero();
        for (ci, mu) in classes.iter().enumerate() {
            acc += rat(class_size(mu) as i64) * rat(character(&lam, mu)) * chi[ci].clone();
        }
        let m = acc / rat(group_order as i64);
        let m = rat_to_i64(&m).ok_or_else(|| {
            Error::Consistency(format!("non-integral Euler multiplicity of {lam}"))
        })?;
        if m != 0 {
            out.insert(lam, m);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Free-standing queries
// ---------------------------------------------------------------------------

/// The proven vanishing test: the whole complex has zero cohomology
/// whenever `3g + 2n + min(r_λ, g) < 2·weight` for every irreducible
/// constituent `λ` of the decoration module.
pub fn vanishing_predicate(module: &FAModuleSpec, g: usize, n: usize) -> bool {
    let weight = module.weight();
    let support = c_arity(module, weight);
    !support.is_empty()
        && support.keys().all(|lam| {
            3 * g + 2 * n + r_lambda(lam).min(g) < 2 * weight
        })
}

/// Summary of one enumerated class with its invariant dimension.
#[derive(Clone, Debug)]
pub struct BasisSummary {
    pub graph: Graph,
    pub inv_dim: usize,
    pub quick_null: bool,
}

/// Enumerates the degree-`e` classes and their invariant decoration
/// dimensions (rank-based, without materializing rational bases).
pub fn enumerate_basis(
    module: &FAModuleSpec,
    variant: Variant,
    g: usize,
    n: usize,
    e: usize,
    budget: &ComplexBudget,
) -> Result<Vec<BasisSummary>> {
    let dec = DecContext::new(module)?;
    let entries = graph::enumerate(dec.shape(), g, n, e, variant, &budget.enum_budget())?;
    entries
        .into_iter()
        .map(|entry| {
            let inv_dim = invariant_dimension(&dec, &entry.graph, &entry.auts)?;
            if entry.quick_null && inv_dim != 0 {
                return Err(Error::Consistency(format!(
                    "quick-null class has invariant dimension {inv_dim}: {}",
                    entry.graph
                )));
            }
            Ok(BasisSummary {
                graph: entry.graph,
                inv_dim,
                quick_null: entry.quick_null,
            })
        })
        .collect()
}

/// Invariant decoration dimension of one class by (modular-first) rank of
/// the stacked constraint matrix.
pub fn invariant_dimension(dec: &DecContext, g: &Graph, auts: &[AutGen]) -> Result<usize> {
    let ambient = dec.ambient_dim(g);
    let pre = dec.pre_basis(g);
    let pre_dim = pre.len();
    if auts.is_empty() {
        return Ok(pre_dim);
    }
    let mut mat = SparseMat::new(auts.len() * ambient, pre_dim);
    for (gi, gen) in auts.iter().enumerate() {
        let mut a = dec.action(g, &gen.estar_perm, g, gen.sign)?;
        for (i, row) in a.iter_mut().enumerate() {
            row[i] -= Rat::one();
        }
        for i in 0..ambient {
            for (j, col) in pre.iter().enumerate() {
                let mut acc = Rat::zero();
                for (k, v) in col.iter().enumerate() {
                    if !a[i][k].is_zero() && !v.is_zero() {
                        acc += a[i][k].clone() * v.clone();
                    }
                }
                mat.push(gi * ambient + i, j, acc);
            }
        }
    }
    Ok(pre_dim - mat.rank())
}

/// Convenience wrapper: build the complex and report its cohomology.
pub fn cohomology_of(
    module: &FAModuleSpec,
    variant: Variant,
    g: usize,
    n: usize,
    budget: &ComplexBudget,
) -> Result<CohomologyReport> {
    let complex = build_complex(module, variant, g, n, budget)?;
    cohomology(&complex)
}
