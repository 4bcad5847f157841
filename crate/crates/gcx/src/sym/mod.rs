//! Partitions, symmetric-group characters and symmetric functions.
//!
//! Everything here is exact. Characters are computed by the
//! Murnaghan–Nakayama rule on the abacus (beta-number) model and memoized;
//! Schur/power-sum conversions go through the character table; products of
//! Schur functions use the Littlewood–Richardson tableau rule; explicit
//! irreducible representation matrices use Young's seminormal form over the
//! rationals.

mod character;
mod plethysm;
mod specht;
mod symfunc;

pub use character::{character, class_size, conjugacy_classes, z_order};
pub use plethysm::{plethysm_wedge_sym2, r_lambda};
pub use specht::{adjacent_word, cycle_type, SeminormalRep};
pub use symfunc::{induction_product, Basis, SymFunction};

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// An integer partition: weakly decreasing positive parts.
///
/// The empty partition (of 0) is allowed and prints as an empty string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Build a partition, validating that parts are positive and weakly
    /// decreasing.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(Error::InvalidInput(format!(
                    "partition parts must be weakly decreasing: {parts:?}"
                )));
            }
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidInput(format!(
                "partition parts must be positive: {parts:?}"
            )));
        }
        Ok(Partition(parts))
    }

    /// The empty partition of 0.
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// A single row `(n)`; for `n == 0` this is the empty partition.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Partition(vec![n])
        }
    }

    /// A single column `(1^m)`.
    pub fn column(m: usize) -> Self {
        Partition(vec![1; m])
    }

    /// The hook `(a, 1^b)`; requires `a >= 1` unless `b == 0` too.
    pub fn hook(a: usize, b: usize) -> Self {
        if a == 0 {
            assert_eq!(b, 0, "hook with empty first row");
            return Self::empty();
        }
        let mut parts = vec![a];
        parts.extend(std::iter::repeat(1).take(b));
        Partition(parts)
    }

    /// `k` rows of length 2 followed by `l` rows of length 1: `(2^k 1^l)`.
    pub fn two_column(k: usize, l: usize) -> Self {
        let mut parts = vec![2; k];
        parts.extend(std::iter::repeat(1).take(l));
        Partition(parts)
    }

    /// Parts in weakly decreasing order.
    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// The size `|lambda|` (sum of parts).
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True for the empty partition.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Conjugate (transposed) partition.
    pub fn conjugate(&self) -> Partition {
        if self.0.is_empty() {
            return Self::empty();
        }
        let cols = self.0[0];
        let parts = (1..=cols)
            .map(|c| self.0.iter().filter(|&&p| p >= c).count())
            .collect();
        Partition(parts)
    }

    /// Containment of Young diagrams: `self[i] <= other[i]` for all rows.
    pub fn contained_in(&self, other: &Partition) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &p)| other.0.get(i).is_some_and(|&q| q >= p))
    }

    /// Dimension of the irreducible of the symmetric group indexed by this
    /// partition, by the hook length formula.
    pub fn dimension(&self) -> u64 {
        use num_traits::ToPrimitive;
        let n = self.size();
        let mut num = crate::Int::from(1);
        for k in 1..=n {
            num *= crate::Int::from(k as u64);
        }
        let conj = self.conjugate();
        let mut den = crate::Int::from(1);
        for (i, &p) in self.0.iter().enumerate() {
            for j in 0..p {
                let hook = (p - j) + (conj.0[j] - i) - 1;
                den *= crate::Int::from(hook as u64);
            }
        }
        let (q, r) = num_integer::Integer::div_rem(&num, &den);
        debug_assert!(num_traits::Zero::is_zero(&r));
        q.to_u64().expect("dimension fits in u64")
    }

    /// All standard Young tableaux of this shape, each given as the
    /// row-index of the box containing `1, 2, ..., n` paired with the
    /// column-index.
    pub fn standard_tableaux(&self) -> Vec<Vec<(usize, usize)>> {
        let n = self.size();
        let mut rows: Vec<usize> = vec![0; self.len()];
        let mut cur = Vec::with_capacity(n);
        let mut out = Vec::new();
        fn rec(
            shape: &[usize],
            rows: &mut Vec<usize>,
            cur: &mut Vec<(usize, usize)>,
            n: usize,
            out: &mut Vec<Vec<(usize, usize)>>,
        ) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for i in 0..shape.len() {
                // Next box in row i must not outrun the row above.
                if rows[i] < shape[i] && (i == 0 || rows[i] < rows[i - 1]) {
                    cur.push((i, rows[i]));
                    rows[i] += 1;
                    rec(shape, rows, cur, n, out);
                    rows[i] -= 1;
                    cur.pop();
                }
            }
        }
        rec(&self.0, &mut rows, &mut cur, n, &mut out);
        out
    }

    /// Parse `"3,1,1"` (or `""` for the empty partition).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::InvalidInput(format!("bad partition part {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.0 {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// All partitions of `n`, in lexicographically decreasing order.
pub fn partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(remaining: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            cur.push(p);
            rec(remaining - p, p, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    out
}

/// All partitions of `n` with at most `max_parts` parts and parts at most
/// `max_part`.
pub fn partitions_bounded(n: usize, max_parts: usize, max_part: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        remaining: usize,
        max: usize,
        slots: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Partition>,
    ) {
        if remaining == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            cur.push(p);
            rec(remaining - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    rec(n, max_part, max_parts, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_basics() {
        let p = Partition::new(vec![3, 1, 1]).unwrap();
        assert_eq!(p.size(), 5);
        assert_eq!(p.conjugate(), Partition::new(vec![3, 1, 1]).unwrap());
        let q = Partition::new(vec![4, 2]).unwrap();
        assert_eq!(q.conjugate(), Partition::new(vec![2, 2, 1, 1]).unwrap());
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert_eq!(Partition::parse("2,1").unwrap().to_string(), "2,1");
        assert_eq!(Partition::parse("").unwrap(), Partition::empty());
    }

    #[test]
    fn partition_counts() {
        // Number of partitions of n for n = 0..10.
        let expect = [1usize, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, &e) in expect.iter().enumerate() {
            assert_eq!(partitions(n).len(), e, "p({n})");
        }
    }

    #[test]
    fn hook_dimension_matches_tableau_enumeration() {
        // Independent oracle: dimension = number of standard Young tableaux,
        // counted by explicit enumeration.
        for n in 0..=7 {
            for lam in partitions(n) {
                let dim = lam.dimension();
                let syt = lam.standard_tableaux().len() as u64;
                assert_eq!(dim, syt, "dim {lam}");
            }
        }
    }

    #[test]
    fn hook_dimension_two_column_seven() {
        // Frozen value derived from the tableau-enumeration oracle above.
        let lam = Partition::two_column(7, 0);
        assert_eq!(lam.standard_tableaux().len(), 429);
        assert_eq!(lam.dimension(), 429);
    }

    #[test]
    fn containment() {
        let a = Partition::new(vec![2, 1]).unwrap();
        let b = Partition::new(vec![3, 2, 1]).unwrap();
        assert!(a.contained_in(&b));
        assert!(!b.contained_in(&a));
        assert!(Partition::empty().contained_in(&a));
    }
}
