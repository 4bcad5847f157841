//! Exact irreducible representation matrices via Young's seminormal form.
//!
//! The basis is indexed by standard Young tableaux. An adjacent
//! transposition `s_i` (swapping letters `i, i+1`) acts on the span of a
//! tableau `T` and its swap `T' = s_i T` through the axial distance
//! `d = content(i+1) - content(i)`:
//!
//! * same row (`d = 1`): `s_i v_T = v_T`;
//! * same column (`d = -1`): `s_i v_T = -v_T`;
//! * otherwise, ordering the pair so `d > 0`:
//!   `s_i v_T = (1/d) v_T + (1 - 1/d^2) v_{T'}` and
//!   `s_i v_{T'} = v_T - (1/d) v_{T'}`.
//!
//! General permutations are products of adjacent transpositions; their
//! matrices are assembled on demand and cached. All entries are exact
//! rationals.

use super::Partition;
use crate::{rat, Rat};
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Row-major dense matrix of exact rationals.
pub type DenseMat = Vec<Vec<Rat>>;

/// Seminormal representation of a symmetric group irreducible.
pub struct SeminormalRep {
    shape: Partition,
    n: usize,
    dim: usize,
    /// Position (row, col) of each letter `1..=n` (0-indexed letters) in
    /// each standard tableau.
    tableaux: Vec<Vec<(u8, u8)>>,
    /// Sparse action of each adjacent transposition `s_i` (swapping letters
    /// `i+1, i+2` in 1-indexed terms): for each basis column, its image as
    /// (row index, coefficient) pairs.
    adjacent: Vec<Vec<Vec<(usize, Rat)>>>,
    cache: Mutex<HashMap<Vec<usize>, Arc<DenseMat>>>,
}

impl SeminormalRep {
    /// Build the representation for a given shape.
    pub fn new(shape: &Partition) -> Self {
        let n = shape.size();
        let tabs = shape.standard_tableaux();
        let tableaux: Vec<Vec<(u8, u8)>> = tabs
            .iter()
            .map(|t| t.iter().map(|&(r, c)| (r as u8, c as u8)).collect())
            .collect();
        let dim = tableaux.len();
        let index: HashMap<Vec<(u8, u8)>, usize> = tableaux
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let mut adjacent = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n.saturating_sub(1) {
            // s_i swaps letters i and i+1 (0-indexed letters).
            let mut cols: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); dim];
            for (t_idx, tab) in tableaux.iter().enumerate() {
                let (r1, c1) = tab[i];
                let (r2, c2) = tab[i + 1];
                let d = (c2 as i64 - r2 as i64) - (c1 as i64 - r1 as i64);
                if d == 1 {
                    cols[t_idx].push((t_idx, rat(1)));
                } else if d == -1 {
                    cols[t_idx].push((t_idx, rat(-1)));
                } else {
                    let mut swapped = tab.clone();
                    swapped.swap(i, i + 1);
                    let s_idx = *index.get(&swapped).expect("swapped tableau is standard");
                    let dr = rat(d);
                    if d > 0 {
                        // T is the d > 0 member of the pair.
                        cols[t_idx].push((t_idx, rat(1) / dr.clone()));
                        cols[t_idx].push((s_idx, rat(1) - rat(1) / (dr.clone() * dr)));
                    } else {
                        // T is the d < 0 member; its partner has d' = -d > 0.
                        let dp = rat(-d);
                        cols[t_idx].push((s_idx, rat(1)));
                        cols[t_idx].push((t_idx, -(rat(1) / dp)));
                    }
                }
            }
            adjacent.push(cols);
        }
        SeminormalRep {
            shape: shape.clone(),
            n,
            dim,
            tableaux,
            adjacent,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Shape of the representation.
    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    /// Dimension (number of standard tableaux).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of letters.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Apply the representation matrix of `perm` (one-line image notation,
    /// `perm[k]` is the image of `k`) to a coefficient vector.
    pub fn apply(&self, perm: &[usize], v: &[Rat]) -> Vec<Rat> {
        assert_eq!(perm.len(), self.n);
        assert_eq!(v.len(), self.dim);
        let word = adjacent_word(perm);
        let mut cur = v.to_vec();
        for &a in &word {
            cur = self.apply_adjacent(a, &cur);
        }
        cur
    }

    fn apply_adjacent(&self, i: usize, v: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (col, entries) in self.adjacent[i].iter().enumerate() {
            if v[col].is_zero() {
                continue;
            }
            for (row, c) in entries {
                let term = c.clone() * v[col].clone();
                out[*row] += term;
            }
        }
        out
    }

    /// Full matrix of `perm` (cached). Column `j` is the image of basis
    /// vector `j`.
    pub fn matrix(&self, perm: &[usize]) -> Arc<DenseMat> {
        assert_eq!(perm.len(), self.n);
        if let Some(m) = self.cache.lock().unwrap().get(perm) {
            return m.clone();
        }
        let word = adjacent_word(perm);
        // Columns of the matrix, built by pushing identity columns through
        // the adjacent factorization.
        let mut cols: Vec<Vec<Rat>> = (0..self.dim)
            .map(|j| {
                let mut e = vec![Rat::zero(); self.dim];
                e[j] = Rat::one();
                e
            })
            .collect();
        for &a in &word {
            for col in cols.iter_mut() {
                *col = self.apply_adjacent(a, col);
            }
        }
        // Transpose into row-major form.
        let mut rows = vec![vec![Rat::zero(); self.dim]; self.dim];
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                rows[i][j] = x.clone();
            }
        }
        let arc = Arc::new(rows);
        self.cache
            .lock()
            .unwrap()
            .insert(perm.to_vec(), arc.clone());
        arc
    }

    /// Trace of the matrix of `perm`; equals the character at the cycle
    /// type of `perm`.
    pub fn trace(&self, perm: &[usize]) -> Rat {
        let m = self.matrix(perm);
        let mut t = Rat::zero();
        for i in 0..self.dim {
            t += m[i][i].clone();
        }
        t
    }

    /// Positions of letters in the `idx`-th standard tableau.
    pub fn tableau(&self, idx: usize) -> &[(u8, u8)] {
        &self.tableaux[idx]
    }
}

/// Factor a permutation (one-line image notation) into adjacent
/// transpositions `s_{a}` such that applying the returned word left to
/// right to a vector realizes the action of the permutation:
/// `rho(perm) = rho(s_{w_k}) ... rho(s_{w_1})` applied as
/// `w_1` first.
pub fn adjacent_word(perm: &[usize]) -> Vec<usize> {
    // Bubble-sort the one-line notation to the identity. Swapping positions
    // i, i+1 of the current word corresponds to precomposition with s_i;
    // recording swaps in sort order and applying them in reverse composes to
    // the permutation. Applying matrices in the returned order realizes
    // rho(perm) on column vectors.
    let mut v = perm.to_vec();
    let mut swaps = Vec::new();
    let n = v.len();
    loop {
        let mut done = true;
        for i in 0..n.saturating_sub(1) {
            if v[i] > v[i + 1] {
                v.swap(i, i + 1);
                swaps.push(i);
                done = false;
            }
        }
        if done {
            break;
        }
    }
    // perm ∘ s_{w_1} ∘ ... ∘ s_{w_k} = id, hence
    // perm = s_{w_k} ∘ ... ∘ s_{w_1}: applying the word in recorded order
    // (w_1 first) realizes rho(perm) on vectors.
    swaps
}

/// Cycle type of a permutation in one-line image notation.
pub fn cycle_type(perm: &[usize]) -> Partition {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        cycles.push(len);
    }
    cycles.sort_unstable_by(|a, b| b.cmp(a));
    Partition::new(cycles).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::{character, partitions};

    fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
        // (a ∘ b)(x) = a(b(x))
        b.iter().map(|&x| a[x]).collect()
    }

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for k in 0..n {
            let mut next = Vec::new();
            for p in out {
                for pos in 0..=k {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    #[test]
    fn adjacent_word_reconstructs_permutation() {
        for perm in all_perms(5) {
            let word = adjacent_word(&perm);
            // Compose s_{w_k} ... s_{w_1} (vector-application order w_1 first).
            let mut acc: Vec<usize> = (0..5).collect();
            for &a in &word {
                let mut s: Vec<usize> = (0..5).collect();
                s.swap(a, a + 1);
                acc = compose(&s, &acc);
            }
            assert_eq!(acc, perm);
        }
    }

    #[test]
    fn seminormal_is_a_representation() {
        for lam in partitions(4) {
            let rep = SeminormalRep::new(&lam);
            let perms = all_perms(4);
            for a in &perms {
                let ma = rep.matrix(a);
                for b in perms.iter().take(8) {
                    let mb = rep.matrix(b);
                    let mab = rep.matrix(&compose(a, b));
                    // Check (ma * mb) == mab on basis columns.
                    for j in 0..rep.dim() {
                        let col_b: Vec<Rat> = (0..rep.dim()).map(|i| mb[i][j].clone()).collect();
                        let mut lhs = vec![Rat::zero(); rep.dim()];
                        for (i, row) in ma.iter().enumerate() {
                            for (k, x) in row.iter().enumerate() {
                                if !x.is_zero() && !col_b[k].is_zero() {
                                    lhs[i] += x.clone() * col_b[k].clone();
                                }
                            }
                        }
                        let rhs: Vec<Rat> = (0..rep.dim()).map(|i| mab[i][j].clone()).collect();
                        assert_eq!(lhs, rhs, "homomorphism at {lam}");
                    }
                }
            }
        }
    }

    #[test]
    fn seminormal_traces_match_characters() {
        for n in 1..=6 {
            for lam in partitions(n) {
                let rep = SeminormalRep::new(&lam);
                // One representative permutation per cycle type.
                for mu in partitions(n) {
                    let mut perm = Vec::new();
                    let mut base = 0usize;
                    for &c in mu.parts() {
                        for k in 0..c {
                            perm.push(base + (k + 1) % c);
                        }
                        base += c;
                    }
                    let tr = rep.trace(&perm);
                    assert_eq!(tr, rat(character(&lam, &mu)), "trace {lam} at {mu}");
                }
            }
        }
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(
            cycle_type(&[1, 0, 2, 3]),
            Partition::new(vec![2, 1, 1]).unwrap()
        );
        assert_eq!(cycle_type(&[1, 2, 0]), Partition::new(vec![3]).unwrap());
    }
}
