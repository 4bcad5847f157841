//! Plethysm of elementary symmetric functions with the square symmetric
//! power, and the derived "matching depth" statistic of a partition.
//!
//! `wedge_sym2(r)` expands `e_r[h_2]` — the character of the r-th exterior
//! power of the space of unordered pairs — into Schur functions. The
//! computation goes through power sums:
//!
//! * `p_d[h_2] = (p_d^2 + p_{2d}) / 2`,
//! * `e_r[f] = sum over partitions nu of r of
//!   (-1)^{r - len(nu)} z_nu^{-1} prod_i p_{nu_i}[f]`.
//!
//! `r_lambda` finds the largest `r` such that some constituent of
//! `e_r[h_2]` fits inside a given shape. It controls which graded pieces
//! of a pair-decorated complex can be nonzero.

use super::symfunc::{Basis, SymFunction};
use super::{partitions, z_order, Partition};
use crate::rat;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;
use std::sync::Mutex;

/// Schur expansion of `e_r[h_2]`, with nonnegative integer multiplicities.
pub fn plethysm_wedge_sym2(r: usize) -> BTreeMap<Partition, u64> {
    static MEMO: Mutex<Option<BTreeMap<usize, BTreeMap<Partition, u64>>>> = Mutex::new(None);
    if let Some(hit) = MEMO.lock().unwrap().get_or_insert_with(BTreeMap::new).get(&r) {
        return hit.clone();
    }
    let result = compute_wedge_sym2(r);
    MEMO.lock()
        .unwrap()
        .get_or_insert_with(BTreeMap::new)
        .insert(r, result.clone());
    result
}

fn compute_wedge_sym2(r: usize) -> BTreeMap<Partition, u64> {
    if r == 0 {
        let mut out = BTreeMap::new();
        out.insert(Partition::empty(), 1);
        return out;
    }
    // Assemble e_r[h_2] in the power-sum basis.
    let mut total = SymFunction::zero(Basis::PowerSum);
    for nu in partitions(r) {
        let sign = if (r - nu.len()) % 2 == 0 { 1 } else { -1 };
        let coeff = rat(sign) / rat(z_order(&nu).to_i64().expect("centralizer order fits i64"));
        // prod_i p_{nu_i}[h_2] with p_d[h_2] = (p_d^2 + p_{2d}) / 2.
        let mut prod = SymFunction::basis_element(Basis::PowerSum, Partition::empty());
        for &d in nu.parts() {
            let factor = SymFunction::from_terms(
                Basis::PowerSum,
                [
                    (Partition::new(vec![d, d]).unwrap(), rat(1) / rat(2)),
                    (Partition::row(2 * d), rat(1) / rat(2)),
                ],
            );
            prod = prod.mul(&factor);
        }
        let mut scaled = prod;
        scaled.scale(&coeff);
        total.add_assign(&scaled);
    }
    let schur = total.to_basis(Basis::Schur);
    schur
        .schur_expansion_int()
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(lam, c)| {
            assert!(c > 0, "e_r[h_2] must have nonnegative Schur coefficients");
            (lam, c as u64)
        })
        .collect()
}

/// Largest `r` such that some Schur constituent of `e_r[h_2]` is contained
/// in `lam`; zero when no constituent of any `e_r[h_2]` (r >= 1) fits.
pub fn r_lambda(lam: &Partition) -> usize {
    let n = lam.size();
    for r in (1..=n / 2).rev() {
        let constituents = plethysm_wedge_sym2(r);
        if constituents.keys().any(|mu| mu.contained_in(lam)) {
            return r;
        }
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::character;
    use num_bigint::BigUint;

    #[test]
    fn wedge_sym2_small_cases() {
        let r1 = plethysm_wedge_sym2(1);
        assert_eq!(r1.len(), 1);
        assert_eq!(r1[&Partition::row(2)], 1);

        let r2 = plethysm_wedge_sym2(2);
        assert_eq!(r2.len(), 1);
        assert_eq!(r2[&Partition::new(vec![3, 1]).unwrap()], 1);
    }

    /// Independent oracle: the character of `e_r[h_2]` at a permutation
    /// sigma is the signed count of perfect matchings of {0..2r-1} fixed by
    /// sigma, the sign being that of the permutation sigma induces on the r
    /// blocks of the matching.
    fn matching_character(r: usize, perm: &[usize]) -> i64 {
        fn matchings(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
            if points.is_empty() {
                return vec![vec![]];
            }
            let a = points[0];
            let mut out = Vec::new();
            for i in 1..points.len() {
                let b = points[i];
                let rest: Vec<usize> = points[1..]
                    .iter()
                    .copied()
                    .filter(|&x| x != b)
                    .collect();
                for mut m in matchings(&rest) {
                    m.push((a, b));
                    out.push(m);
                }
            }
            out
        }
        let pts: Vec<usize> = (0..2 * r).collect();
        let mut chi = 0i64;
        for m in matchings(&pts) {
            let norm: Vec<(usize, usize)> = m
                .iter()
                .map(|&(a, b)| (a.min(b), a.max(b)))
                .collect();
            let image: Vec<(usize, usize)> = norm
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (perm[a], perm[b]);
                    (x.min(y), x.max(y))
                })
                .collect();
            // Fixed as a set of blocks?
            let mut sorted_norm = norm.clone();
            sorted_norm.sort_unstable();
            let mut sorted_img = image.clone();
            sorted_img.sort_unstable();
            if sorted_norm != sorted_img {
                continue;
            }
            // Sign of the induced permutation on blocks.
            let block_perm: Vec<usize> = norm
                .iter()
                .map(|b| {
                    let (x, y) = (perm[b.0], perm[b.1]);
                    let target = (x.min(y), x.max(y));
                    norm.iter().position(|&c| c == target).unwrap()
                })
                .collect();
            let mut sign = 1i64;
            let mut seen = vec![false; block_perm.len()];
            for s in 0..block_perm.len() {
                if seen[s] {
                    continue;
                }
                let mut len = 0;
                let mut x = s;
                while !seen[x] {
                    seen[x] = true;
                    x = block_perm[x];
                    len += 1;
                }
                if len % 2 == 0 {
                    sign = -sign;
                }
            }
            chi += sign;
        }
        chi
    }

    #[test]
    fn wedge_sym2_matches_signed_matching_count() {
        for r in 1..=4usize {
            let expansion = plethysm_wedge_sym2(r);
            for mu in partitions(2 * r) {
                // A representative permutation of cycle type mu.
                let mut perm = Vec::new();
                let mut base = 0usize;
                for &c in mu.parts() {
                    for k in 0..c {
                        perm.push(base + (k + 1) % c);
                    }
                    base += c;
                }
                let expected = matching_character(r, &perm);
                let mut got = 0i64;
                for (lam, mult) in &expansion {
                    got += *mult as i64 * character(lam, &mu);
                }
                assert_eq!(got, expected, "character at r={r}, class {mu}");
            }
        }
    }

    #[test]
    fn wedge_sym2_constituents_have_arm_equals_leg_plus_one() {
        // Classical description: e_r[h_2] is multiplicity-free and its
        // constituents are exactly the shapes of size 2r whose Frobenius
        // coordinates satisfy arm = leg + 1 on every diagonal cell.
        for r in 1..=5usize {
            let expansion = plethysm_wedge_sym2(r);
            for (lam, mult) in &expansion {
                assert_eq!(*mult, 1, "multiplicity-free at {lam}");
                let parts = lam.parts();
                let conj = lam.conjugate();
                let rank = (0..parts.len())
                    .take_while(|&i| parts[i] > i)
                    .count();
                for i in 0..rank {
                    let arm = parts[i] - i - 1;
                    let leg = conj.parts()[i] - i - 1;
                    assert_eq!(arm, leg + 1, "Frobenius at {lam}, diagonal {i}");
                }
            }
            // Count: number of such shapes equals the number of partitions
            // of r into distinct parts (choose the arm lengths).
            let mut distinct = 0usize;
            for nu in partitions(r) {
                let p = nu.parts();
                if p.windows(2).all(|w| w[0] > w[1]) {
                    distinct += 1;
                }
            }
            assert_eq!(expansion.len(), distinct, "constituent count at r={r}");
        }
    }

    #[test]
    fn wedge_sym2_dimension_counts_r_matchings() {
        // dim Wedge^r(Sym^2 of the standard pairs) on n letters is not what
        // we check here; rather the total dimension of e_r[h_2] as an S_{2r}
        // representation equals the number of perfect matchings on 2r
        // points: (2r)! / (2^r r!).
        for r in 1..=5usize {
            let expansion = plethysm_wedge_sym2(r);
            let mut total = BigUint::from(0u32);
            for (lam, mult) in &expansion {
                total += BigUint::from(*mult) * BigUint::from(lam.dimension());
            }
            let mut matchings = BigUint::from(1u32);
            for k in 1..=2 * r {
                matchings *= BigUint::from(k);
            }
            for _ in 0..r {
                matchings /= BigUint::from(2u32);
            }
            for k in 1..=r {
                matchings /= BigUint::from(k);
            }
            assert_eq!(total, matchings, "dimension at r = {r}");
        }
    }

    #[test]
    fn wedge_sym2_r3_frozen() {
        // e_3[h_2] = s_{4,1,1} + s_{3,3}: dimensions 10 + 5 = 15 perfect
        // matchings, pinned independently by the signed-matching oracle
        // above.
        let r3 = plethysm_wedge_sym2(3);
        let expected: BTreeMap<Partition, u64> = [
            (Partition::new(vec![4, 1, 1]).unwrap(), 1),
            (Partition::new(vec![3, 3]).unwrap(), 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(r3, expected);
    }

    #[test]
    fn r_lambda_columns_are_zero() {
        for k in 1..=12 {
            assert_eq!(r_lambda(&Partition::column(k)), 0, "column 1^{k}");
        }
    }

    #[test]
    fn r_lambda_hooks() {
        // The only hook constituents of e_r[h_2] are (r+1, 1^{r-1}), and no
        // non-hook shape fits inside a hook, so for a hook (p, 1^q) with
        // p >= 2 the value is min(p-1, q+1). When the arm and column are
        // close (1 <= p - q <= 3) this agrees with floor((p+q)/2).
        for p in 2..=6usize {
            for q in 0..=5usize {
                let expected = (p - 1).min(q + 1);
                assert_eq!(r_lambda(&Partition::hook(p, q)), expected, "hook ({p}, 1^{q})");
                if p > q && p - q <= 3 {
                    assert_eq!(expected, (p + q) / 2, "midpoint form at ({p}, 1^{q})");
                }
            }
        }
    }

    #[test]
    fn r_lambda_two_column_shapes() {
        // Every e_r[h_2] constituent with r >= 2 has a first row of length
        // at least 3, so any shape with lambda_1 = 2 has value exactly 1.
        for k in 1..=7usize {
            for l in 0..=3usize {
                let lam = Partition::two_column(k, l);
                assert_eq!(r_lambda(&lam), 1, "two-column ({k}, {l})");
            }
        }
        // The two decorations used by the weight reports.
        assert_eq!(r_lambda(&Partition::two_column(7, 0)), 1);
        assert_eq!(r_lambda(&Partition::two_column(5, 6)), 1);
    }

    #[test]
    fn r_lambda_definition_brute_force_sweep() {
        // Against the raw definition: largest r <= |lam|/2 such that some
        // constituent of e_r[h_2] is contained in lam; zero exactly for
        // one-column shapes.
        for n in 1..=10usize {
            for lam in partitions(n) {
                let mut expected = 0;
                for r in 1..=n / 2 {
                    if plethysm_wedge_sym2(r)
                        .keys()
                        .any(|mu| mu.contained_in(&lam))
                    {
                        expected = r;
                    }
                }
                assert_eq!(r_lambda(&lam), expected, "sweep at {lam}");
                assert!(r_lambda(&lam) <= n / 2);
                assert_eq!(r_lambda(&lam) == 0, lam.parts().iter().all(|&p| p == 1));
            }
        }
    }

    #[test]
    fn r_lambda_rows() {
        // A single row (n) contains the constituent (2r) of e_r[h_2]? Only
        // e_1[h_2] = s_2 is itself a row; for r >= 2 every constituent has
        // at least two rows. So r_lambda of a row is 1 once n >= 2.
        assert_eq!(r_lambda(&Partition::row(1)), 0);
        for n in 2..=8 {
            assert_eq!(r_lambda(&Partition::row(n)), 1, "row {n}");
        }
    }
}
