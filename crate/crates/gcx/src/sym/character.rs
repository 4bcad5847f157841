//! Symmetric-group characters via the Murnaghan–Nakayama rule.
//!
//! Characters are computed on the abacus model: a partition with `k` parts
//! is encoded by its strictly decreasing beta-numbers
//! `b_i = lambda_i + (k - i)`; removing a border strip of length `m`
//! corresponds to replacing some `b` by `b - m` (when `b - m` is not
//! already a beta-number), with sign `(-1)^h` where `h` counts the
//! beta-numbers strictly between `b - m` and `b`. Results are memoized
//! globally, keyed by (shape, class).

use super::Partition;
use std::collections::HashMap;
use std::sync::Mutex;

/// `z_mu`: order of the centralizer of a permutation of cycle type `mu`.
pub fn z_order(mu: &Partition) -> u64 {
    let mut z: u64 = 1;
    let mut run = 0u64;
    let mut prev = 0usize;
    for &p in mu.parts() {
        z *= p as u64;
        if p == prev {
            run += 1;
        } else {
            run = 1;
            prev = p;
        }
        z *= run;
    }
    z
}

/// Size of the conjugacy class of cycle type `mu` inside the full symmetric
/// group on `|mu|` letters: `n! / z_mu`.
pub fn class_size(mu: &Partition) -> u64 {
    let n = mu.size();
    let mut fact = 1u128;
    for k in 1..=n as u128 {
        fact *= k;
    }
    (fact / z_order(mu) as u128) as u64
}

/// Conjugacy classes of the symmetric group on `n` letters (cycle types).
pub fn conjugacy_classes(n: usize) -> Vec<Partition> {
    super::partitions(n)
}

fn beta_numbers(lam: &Partition) -> Vec<usize> {
    let k = lam.len();
    lam.parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| p + (k - 1 - i))
        .collect()
}

fn partition_from_betas(mut betas: Vec<usize>) -> Partition {
    betas.sort_unstable_by(|a, b| b.cmp(a));
    // Strip trailing zeros of the partition (parts that became 0).
    let k = betas.len();
    let parts: Vec<usize> = betas
        .iter()
        .enumerate()
        .map(|(i, &b)| b - (k - 1 - i))
        .filter(|&p| p > 0)
        .collect();
    Partition::new(parts).expect("beta numbers produce a valid partition")
}

fn mn_recursive(lam: &Partition, mu: &[usize], memo: &mut HashMap<(Partition, Vec<usize>), i64>) -> i64 {
    if mu.is_empty() {
        return 1;
    }
    if let Some(&v) = memo.get(&(lam.clone(), mu.to_vec())) {
        return v;
    }
    // Remove a border strip of length mu[0] (largest part first keeps the
    // recursion shallow).
    let m = mu[0];
    let rest = &mu[1..];
    let betas = beta_numbers(lam);
    let mut total = 0i64;
    for (idx, &b) in betas.iter().enumerate() {
        if b < m {
            continue;
        }
        let target = b - m;
        if betas.contains(&target) {
            continue;
        }
        // Height = number of beta-numbers strictly between target and b.
        let height = betas
            .iter()
            .filter(|&&c| c > target && c < b)
            .count();
        let sign = if height % 2 == 0 { 1 } else { -1 };
        let mut nb = betas.clone();
        nb[idx] = target;
        let sub = partition_from_betas(nb);
        total += sign * mn_recursive(&sub, rest, memo);
    }
    memo.insert((lam.clone(), mu.to_vec()), total);
    total
}

/// The irreducible character `chi_lambda(mu)` of the symmetric group, for
/// `|lambda| == |mu|`, by the Murnaghan–Nakayama rule.
pub fn character(lam: &Partition, mu: &Partition) -> i64 {
    assert_eq!(
        lam.size(),
        mu.size(),
        "character requires |lambda| == |mu| ({lam} vs {mu})"
    );
    static MEMO: Mutex<Option<HashMap<(Partition, Vec<usize>), i64>>> = Mutex::new(None);
    let mut guard = MEMO.lock().unwrap();
    let memo = guard.get_or_insert_with(HashMap::new);
    // Sort the class into decreasing order (it already is, as a Partition).
    mn_recursive(lam, mu.parts(), memo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::partitions;

    /// Independent oracle: characters from permutation modules on Young
    /// subgroup cosets, extracted by Gram-Schmidt against the class inner
    /// product. Uses no border-strip combinatorics.
    mod oracle {
        use super::*;
        use crate::{rat, Rat};
        use num_traits::Zero;

        /// Number of points of the coset space S_n / S_lambda fixed by a
        /// permutation of cycle type `mu`: number of ways to distribute the
        /// multiset of cycles of `mu` into rows of sizes `lambda`.
        fn perm_character(lam: &[usize], mu: &[usize]) -> i64 {
            fn rec(rows: &mut Vec<usize>, cycles: &[usize]) -> i64 {
                match cycles.split_first() {
                    None => 1,
                    Some((&c, rest)) => {
                        let mut total = 0;
                        for i in 0..rows.len() {
                            if rows[i] >= c {
                                rows[i] -= c;
                                total += rec(rows, rest);
                                rows[i] += c;
                            }
                        }
                        total
                    }
                }
            }
            // Rows of a tabloid are distinguishable (they are the rows of a
            // fixed shape), so plain enumeration over rows is correct.
            let mut rows = lam.to_vec();
            rec(&mut rows, mu)
        }

        fn inner(a: &[i64], b: &[i64], classes: &[Partition]) -> Rat {
            let mut s = Rat::zero();
            for (i, cl) in classes.iter().enumerate() {
                s += rat(a[i] * b[i]) * rat(class_size(cl) as i64);
            }
            let mut fact = 1i64;
            for k in 1..=classes[0].size() as i64 {
                fact *= k;
            }
            s / rat(fact)
        }

        /// Full character table of S_n derived from permutation characters.
        pub fn table(n: usize) -> Vec<(Partition, Vec<i64>)> {
            let classes = partitions(n);
            // Permutation characters in lexicographically decreasing order of
            // shape; dominance order refines this, so Gram-Schmidt in this
            // order isolates the irreducibles.
            let shapes = partitions(n);
            let mut irreducibles: Vec<(Partition, Vec<i64>)> = Vec::new();
            for shape in shapes {
                let mut chi: Vec<Rat> = classes
                    .iter()
                    .map(|mu| rat(perm_character(shape.parts(), mu.parts())))
                    .collect();
                for (_, prev) in &irreducibles {
                    let chi_i64: Vec<i64> = chi
                        .iter()
                        .map(|x| {
                            assert!(x.is_integer());
                            num_traits::ToPrimitive::to_i64(x.numer()).unwrap()
                        })
                        .collect();
                    let c = inner(&chi_i64, prev, &classes);
                    assert!(c.is_integer());
                    for (x, &p) in chi.iter_mut().zip(prev.iter()) {
                        *x -= c.clone() * rat(p);
                    }
                }
                let chi_i64: Vec<i64> = chi
                    .iter()
                    .map(|x| {
                        assert!(x.is_integer());
                        num_traits::ToPrimitive::to_i64(x.numer()).unwrap()
                    })
                    .collect();
                let norm = inner(&chi_i64, &chi_i64, &classes);
                assert_eq!(norm, rat(1), "Gram-Schmidt isolates an irreducible");
                irreducibles.push((shape, chi_i64));
            }
            irreducibles
        }
    }

    #[test]
    fn murnaghan_nakayama_matches_permutation_module_oracle() {
        for n in 1..=7 {
            let classes = partitions(n);
            for (shape, chi) in oracle::table(n) {
                for (i, mu) in classes.iter().enumerate() {
                    assert_eq!(
                        character(&shape, mu),
                        chi[i],
                        "chi_{shape}({mu}) for n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn character_spot_values() {
        // chi_{(2,1)} on class (3) is -1.
        let lam = Partition::new(vec![2, 1]).unwrap();
        let mu = Partition::new(vec![3]).unwrap();
        assert_eq!(character(&lam, &mu), -1);
        // Trivial and sign characters.
        for n in 1..=8 {
            for mu in partitions(n) {
                assert_eq!(character(&Partition::row(n), &mu), 1);
                let sign = if (n - mu.len()) % 2 == 0 { 1 } else { -1 };
                assert_eq!(character(&Partition::column(n), &mu), sign);
            }
        }
    }

    #[test]
    fn character_at_identity_is_dimension() {
        for n in 1..=8 {
            let id = Partition::column(n);
            for lam in partitions(n) {
                assert_eq!(character(&lam, &id) as u64, lam.dimension());
            }
        }
    }

    #[test]
    fn column_orthogonality_small() {
        // sum_lambda chi(mu) chi(nu) = z_mu delta_{mu nu}.
        for n in 1..=6 {
            let classes = partitions(n);
            for mu in &classes {
                for nu in &classes {
                    let s: i64 = partitions(n)
                        .iter()
                        .map(|l| character(l, mu) * character(l, nu))
                        .sum();
                    if mu == nu {
                        assert_eq!(s as u64, z_order(mu));
                    } else {
                        assert_eq!(s, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn z_order_values() {
        assert_eq!(z_order(&Partition::new(vec![1, 1, 1]).unwrap()), 6);
        assert_eq!(z_order(&Partition::new(vec![3]).unwrap()), 3);
        assert_eq!(z_order(&Partition::new(vec![2, 1]).unwrap()), 2);
        assert_eq!(z_order(&Partition::new(vec![2, 2, 1]).unwrap()), 8);
    }
}
