//! Holomorphic-form spaces of compactified curve moduli and the two-summand
//! weight reports built from them.
//!
//! Three layers live here.
//!
//! * Classification of the holomorphic `(k,0)`-forms on compactified moduli
//!   of curves for `k <= 20`: the genus-1 spaces are cusp forms of weight
//!   `k+1` tensored with a hook-decorated module, genus 2 contributes two
//!   explicit two-column modules at `k = 17, 19`, and everything else
//!   vanishes (conditionally on an open hypothesis for `k = 19, 20` in genus
//!   at least 3).
//! * Ingestion of known weight-zero compactly supported cohomology of open
//!   moduli cells ([`W0Dataset`]), and the plethystic assembly
//!   ([`n0_assembly`]) that turns those cells into the arity-zero graph
//!   cohomology `H(G_lambda(g, 0))`.
//! * Per-degree reports ([`hodge_weight`]) for the weight-17 and weight-19
//!   pieces of compactly supported cohomology of the open moduli of curves,
//!   each a sum of two decorated graph complexes, cross-checked against the
//!   closed-form Euler characteristic tables from [`crate::euler`].

use crate::euler::{ec_weight, WEIGHT19_HYPOTHESIS};
use crate::famod::{c_arity, FAModuleSpec};
use crate::graph::Variant;
use crate::homology::{cohomology_of, vanishing_predicate, ComplexBudget};
use crate::sym::{character, partitions, r_lambda, z_order, Partition};
use crate::{rat, Error, Rat, Result};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// The unproven vanishing hypothesis that the weight-20 classification in
/// genus at least three relies on.
pub const WEIGHT20_HYPOTHESIS: &str = "assumes the weight-20 holomorphic form space of the compactified genus-3 curve moduli with 16 markings vanishes";

// ---------------------------------------------------------------------------
// Cusp forms and the form classification
// ---------------------------------------------------------------------------

/// Dimension of the space of cusp forms of the given weight for the full
/// modular group: zero in odd or small weights, otherwise the classical
/// floor formula.
pub fn cusp_form_dimension(weight: usize) -> usize {
    if weight % 2 != 0 || weight < 12 {
        0
    } else if weight % 12 == 2 {
        weight / 12 - 1
    } else {
        weight / 12
    }
}

/// Which decorated module carries the holomorphic `(weight, 0)`-forms of the
/// compactified moduli of genus-`genus` curves, uniformly in the number of
/// markings.  `module == None` means the form space vanishes for every
/// number of markings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormClassification {
    pub weight: usize,
    pub genus: usize,
    pub module: Option<FAModuleSpec>,
    /// Present when the vanishing statement depends on an open hypothesis.
    pub conditional: Option<String>,
}

/// Classifies the holomorphic `(weight, 0)`-forms on the compactified moduli
/// of genus-`genus` curves with any number of markings, for `1 <= weight <=
/// 20`.  In the classified range at most one copy of the listed module
/// occurs.  Genus 1 and 2 are unconditional; for genus at least 3 the
/// vanishing at weights 19 and 20 is conditional on the corresponding
/// hypothesis.
pub fn classify_forms(weight: usize, genus: usize) -> Result<FormClassification> {
    if weight == 0 || weight > 20 {
        return Err(Error::InvalidInput(format!(
            "form classification covers weights 1 through 20, got {weight}"
        )));
    }
    let mut out = FormClassification {
        weight,
        genus,
        module: None,
        conditional: None,
    };
    match genus {
        0 => {}
        1 => {
            if cusp_form_dimension(weight + 1) > 0 {
                out.module = Some(FAModuleSpec::Tilde(weight));
            }
        }
        2 => {
            if weight == 17 {
                out.module = Some(FAModuleSpec::C(Partition::two_column(7, 0)));
            } else if weight == 19 {
                out.module = Some(FAModuleSpec::C(Partition::two_column(5, 6)));
            }
        }
        _ => {
            if weight == 19 {
                out.conditional = Some(WEIGHT19_HYPOTHESIS.to_string());
            } else if weight == 20 {
                out.conditional = Some(WEIGHT20_HYPOTHESIS.to_string());
            }
        }
    }
    Ok(out)
}

/// Irreducible decomposition of the holomorphic `(weight, 0)`-forms on the
/// compactified moduli of genus-1 or genus-2 curves with `n` markings.
///
/// In genus 1 the answer is `cusp_form_dimension(weight + 1)` copies of the
/// hook-decorated module evaluated at arity `n`, valid for every positive
/// weight.  In genus 2 the nonzero weights are 17 and 19, where the space is
/// the corresponding two-column module at arity `n`.
pub fn forms_dimension(genus: usize, weight: usize, n: usize) -> Result<BTreeMap<Partition, u64>> {
    if weight == 0 {
        return Err(Error::InvalidInput(
            "weight zero is the one-dimensional space of constants, not a form space".into(),
        ));
    }
    match genus {
        1 => {
            let copies = cusp_form_dimension(weight + 1) as u64;
            if copies == 0 {
                return Ok(BTreeMap::new());
            }
            let mut out = c_arity(&FAModuleSpec::Tilde(weight), n);
            for v in out.values_mut() {
                *v *= copies;
            }
            Ok(out)
        }
        2 => match weight {
            17 => Ok(c_arity(
                &FAModuleSpec::C(Partition::two_column(7, 0)),
                n,
            )),
            19 => Ok(c_arity(
                &FAModuleSpec::C(Partition::two_column(5, 6)),
                n,
            )),
            w if w <= 20 => Ok(BTreeMap::new()),
            w => Err(Error::InvalidInput(format!(
                "genus-2 form spaces are only classified through weight 20, got {w}"
            ))),
        },
        g => Err(Error::InvalidInput(format!(
            "closed-form dimensions exist for genus 1 and 2 only (got genus {g}); see classify_forms"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Weight-zero cohomology datasets
// ---------------------------------------------------------------------------

/// One graded piece of the weight-zero compactly supported cohomology of an
/// open moduli cell, as a symmetric-group representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct W0Class {
    /// Cohomological degree.
    pub degree: usize,
    /// Irreducible multiplicities, keyed by comma-separated partitions of
    /// the number of markings (the empty string for zero markings).
    pub representation: BTreeMap<String, u64>,
}

/// The known weight-zero compactly supported cohomology of one open moduli
/// cell `(g, n)`.  An empty class list records that the cell is known to
/// vanish, which is different from the cell being absent from a dataset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct W0Cell {
    pub g: usize,
    pub n: usize,
    pub classes: Vec<W0Class>,
}

/// A table of known weight-zero compactly supported cohomology groups of
/// open moduli cells, with an explicit coverage contract: a cell is covered
/// if it is listed, or if its component excess `3(g-1) + n` is at most
/// `max_excess` (in which case an unlisted cell is zero).  Queries outside
/// the covered region are errors, never silently zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct W0Dataset {
    /// Human-readable provenance of the values.
    pub source: String,
    /// Blanket coverage bound on the component excess (see [`cell_excess`]),
    /// if any: unlisted stable cells within the bound are asserted zero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_excess: Option<i64>,
    pub cells: Vec<W0Cell>,
}

/// Component excess of an open moduli cell: the amount by which a blown-up
/// component with this loop order and leg count exceeds the trivalent
/// minimum, `3(g-1) + n` for a cell carrying `n >= 1` decorated legs.  A
/// cell with no decorated legs can only attach through one extra plain leg,
/// which raises its excess to `3g`.
pub fn cell_excess(g: usize, n: usize) -> i64 {
    if n == 0 {
        3 * g as i64
    } else {
        3 * (g as i64 - 1) + n as i64
    }
}

impl W0Dataset {
    /// Parses and validates a dataset from JSON.
    pub fn from_json_str(src: &str) -> Result<W0Dataset> {
        let ds: W0Dataset = serde_json::from_str(src)?;
        ds.validate()?;
        Ok(ds)
    }

    /// Canonical pretty-printed JSON form.
    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Checks structural soundness: stable cells only (`2g + n >= 3`), no
    /// duplicate cells or degrees, every representation key a partition of
    /// the marking count with positive multiplicity, and degrees within the
    /// compactly-supported range of the cell.
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for cell in &self.cells {
            if 2 * cell.g + cell.n < 3 {
                return Err(Error::InvalidInput(format!(
                    "unstable cell ({}, {}) in weight-zero dataset",
                    cell.g, cell.n
                )));
            }
            if !seen.insert((cell.g, cell.n)) {
                return Err(Error::InvalidInput(format!(
                    "duplicate cell ({}, {}) in weight-zero dataset",
                    cell.g, cell.n
                )));
            }
            let dim = 3 * cell.g + cell.n; // 3g - 3 + n complex dimension, plus 3
            let mut degrees = std::collections::BTreeSet::new();
            for class in &cell.classes {
                if !degrees.insert(class.degree) {
                    return Err(Error::InvalidInput(format!(
                        "duplicate degree {} at cell ({}, {})",
                        class.degree, cell.g, cell.n
                    )));
                }
                // H_c^k of a (3g-3+n)-dimensional variety vanishes above 2 dim.
                if class.degree + 6 > 2 * dim {
                    return Err(Error::InvalidInput(format!(
                        "degree {} exceeds twice the dimension of cell ({}, {})",
                        class.degree, cell.g, cell.n
                    )));
                }
                if class.representation.is_empty() {
                    return Err(Error::InvalidInput(format!(
                        "empty representation at cell ({}, {}) degree {}",
                        cell.g, cell.n, class.degree
                    )));
                }
                for (key, mult) in &class.representation {
                    let lam = Partition::parse(key)?;
                    if lam.size() != cell.n {
                        return Err(Error::InvalidInput(format!(
                            "partition {key:?} does not have {} boxes at cell ({}, {})",
                            cell.n, cell.g, cell.n
                        )));
                    }
                    if *mult == 0 {
                        return Err(Error::InvalidInput(format!(
                            "zero multiplicity for {key:?} at cell ({}, {})",
                            cell.g, cell.n
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The listed cell, if any.
    pub fn cell(&self, g: usize, n: usize) -> Option<&W0Cell> {
        self.cells.iter().find(|c| c.g == g && c.n == n)
    }

    /// Whether the dataset determines the weight-zero cohomology at `(g, n)`.
    pub fn covers(&self, g: usize, n: usize) -> bool {
        if self.cell(g, n).is_some() {
            return true;
        }
        match self.max_excess {
            Some(bound) => 2 * g + n >= 3 && cell_excess(g, n) <= bound,
            None => false,
        }
    }

    /// The weight-zero cohomology at `(g, n)` as degree-indexed irreducible
    /// multiplicities.  Unlisted cells within the coverage bound are zero;
    /// uncovered cells raise [`Error::Coverage`].
    pub fn class_reps(&self, g: usize, n: usize) -> Result<BTreeMap<usize, BTreeMap<Partition, u64>>> {
        if let Some(cell) = self.cell(g, n) {
            let mut out = BTreeMap::new();
            for class in &cell.classes {
                let mut rep = BTreeMap::new();
                for (key, mult) in &class.representation {
                    rep.insert(Partition::parse(key)?, *mult);
                }
                out.insert(class.degree, rep);
            }
            return Ok(out);
        }
        if self.covers(g, n) {
            return Ok(BTreeMap::new());
        }
        Err(Error::Coverage(format!(
            "weight-zero cohomology of the open moduli cell ({g}, {n}) is not covered by dataset {:?}",
            self.source
        )))
    }

    /// Built-in table of small weight-zero cohomology groups.
    ///
    /// The listed values are classical: the genus-0 cells carry their known
    /// top-weight cohomology in the single degree `n - 3`, the cells of
    /// genus 1 with at most two markings and genus 2 with at most one
    /// marking vanish, and the unmarked and one-marked genus-3 cells are
    /// one-dimensional in degree 6.  The remaining cells were derived by
    /// inverting the arity-zero assembly identity against direct
    /// graph-complex cohomology computations (see the tests in this
    /// module), which determine them exactly.
    pub fn builtin() -> W0Dataset {
        fn cls(degree: usize, rep: &[(&str, u64)]) -> W0Class {
            W0Class {
                degree,
                representation: rep
                    .iter()
                    .map(|(k, m)| (k.to_string(), *m))
                    .collect(),
            }
        }
        fn cell(g: usize, n: usize, classes: Vec<W0Class>) -> W0Cell {
            W0Cell { g, n, classes }
        }
        let ds = W0Dataset {
            source: "built-in weight-zero cohomology of open moduli cells: classical values for genus 0 (single degree n-3), vanishing small cells of genus 1 and 2, the one-dimensional unmarked and one-marked genus-3 groups in degree 6, and small cells derived from direct graph cohomology".to_string(),
            max_excess: Some(2),
            cells: vec![
                cell(0, 3, vec![cls(0, &[("3", 1)])]),
                cell(0, 4, vec![cls(1, &[("2,2", 1)])]),
                cell(0, 5, vec![cls(2, &[("3,1,1", 1)])]),
                cell(1, 1, vec![]),
                cell(1, 2, vec![]),
                cell(1, 3, vec![cls(3, &[("1,1,1", 1)])]),
                cell(2, 0, vec![]),
                cell(2, 1, vec![]),
                cell(2, 2, vec![cls(5, &[("2", 1)])]),
                cell(3, 0, vec![cls(6, &[("", 1)])]),
                cell(3, 1, vec![cls(6, &[("1", 1)])]),
            ],
        };
        ds.validate().expect("built-in dataset is well-formed");
        ds
    }
}

// ---------------------------------------------------------------------------
// Graded symmetric-sequence characters and the plethystic exponential
// ---------------------------------------------------------------------------

/// A genus- and degree-graded symmetric-sequence character in the power-sum
/// basis: `terms[(genus, degree)][nu]` is the coefficient of `p_nu`, and the
/// arity of a term is the size of `nu`.  Multiplication is plain character
/// multiplication; Koszul signs enter only through the Adams operations used
/// by [`SeqChar::exp`].
#[derive(Clone, Debug)]
struct SeqChar {
    genus_cap: usize,
    arity_cap: usize,
    terms: BTreeMap<(usize, usize), BTreeMap<Partition, Rat>>,
}

/// Concatenation of two power-sum index partitions.
fn union_parts(a: &Partition, b: &Partition) -> Partition {
    let mut parts: Vec<usize> = a.parts().iter().chain(b.parts()).copied().collect();
    parts.sort_unstable_by(|x, y| y.cmp(x));
    Partition::new(parts).expect("merged positive parts stay a partition")
}

impl SeqChar {
    fn zero(genus_cap: usize, arity_cap: usize) -> SeqChar {
        SeqChar {
            genus_cap,
            arity_cap,
            terms: BTreeMap::new(),
        }
    }

    fn one(genus_cap: usize, arity_cap: usize) -> SeqChar {
        let mut s = SeqChar::zero(genus_cap, arity_cap);
        s.insert(0, 0, Partition::empty(), rat(1));
        s
    }

    fn insert(&mut self, genus: usize, degree: usize, nu: Partition, coeff: Rat) {
        if coeff.is_zero() || genus > self.genus_cap || nu.size() > self.arity_cap {
            return;
        }
        let slot = self
            .terms
            .entry((genus, degree))
            .or_default()
            .entry(nu)
            .or_insert_with(Rat::zero);
        *slot += coeff;
        // Keeping exact zeros out makes emptiness checks meaningful.
        if slot.is_zero() {
            let key = (genus, degree);
            let inner = self.terms.get_mut(&key).unwrap();
            inner.retain(|_, c| !c.is_zero());
            if inner.is_empty() {
                self.terms.remove(&key);
            }
        }
    }

    fn add_assign(&mut self, other: &SeqChar) {
        for ((g, d), inner) in &other.terms {
            for (nu, c) in inner {
                self.insert(*g, *d, nu.clone(), c.clone());
            }
        }
    }

    fn scale(&mut self, c: &Rat) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        for inner in self.terms.values_mut() {
            for v in inner.values_mut() {
                *v *= c.clone();
            }
        }
    }

    fn mul(&self, other: &SeqChar) -> SeqChar {
        let mut out = SeqChar::zero(self.genus_cap, self.arity_cap);
        for ((g1, d1), in1) in &self.terms {
            for ((g2, d2), in2) in &other.terms {
                if g1 + g2 > self.genus_cap {
                    continue;
                }
                for (nu1, c1) in in1 {
                    for (nu2, c2) in in2 {
                        if nu1.size() + nu2.size() > self.arity_cap {
                            continue;
                        }
                        out.insert(
                            g1 + g2,
                            d1 + d2,
                            union_parts(nu1, nu2),
                            c1.clone() * c2.clone(),
                        );
                    }
                }
            }
        }
        out
    }

    /// The `d`-th graded Adams operation: `u^g t^j p_nu` maps to
    /// `(-1)^{j (d-1)} u^{dg} t^{dj} p_{d nu}`.  The sign implements the
    /// Koszul rule, making [`SeqChar::exp`] take exterior powers of odd
    /// pieces and symmetric powers of even ones.
    fn adams(&self, d: usize) -> SeqChar {
        let mut out = SeqChar::zero(self.genus_cap, self.arity_cap);
        for ((g, j), inner) in &self.terms {
            if d * g > self.genus_cap {
                continue;
            }
            let sign = if (j * (d - 1)) % 2 == 1 { rat(-1) } else { rat(1) };
            for (nu, c) in inner {
                let scaled =
                    Partition::new(nu.parts().iter().map(|p| p * d).collect())
                        .expect("scaled parts stay a partition");
                out.insert(d * g, d * j, scaled, c.clone() * sign.clone());
            }
        }
        out
    }

    fn min_genus(&self) -> Option<usize> {
        self.terms.keys().map(|(g, _)| *g).min()
    }

    /// Plethystic exponential with Koszul signs, truncated by the genus cap.
    /// Every generator must have positive genus so that the series ends.
    fn exp(&self) -> SeqChar {
        assert!(
            self.min_genus().map_or(true, |g| g >= 1),
            "plethystic exponential needs generators of positive genus"
        );
        let mut log = SeqChar::zero(self.genus_cap, self.arity_cap);
        for d in 1..=self.genus_cap.max(1) {
            let mut t = self.adams(d);
            t.scale(&(rat(1) / rat(d as i64)));
            log.add_assign(&t);
        }
        let mut acc = SeqChar::one(self.genus_cap, self.arity_cap);
        let mut power = SeqChar::one(self.genus_cap, self.arity_cap);
        for k in 1..=self.genus_cap {
            power = power.mul(&log);
            power.scale(&(rat(1) / rat(k as i64)));
            if power.terms.is_empty() {
                break;
            }
            acc.add_assign(&power);
        }
        acc
    }

    /// Degree-indexed multiplicities `<fixed-genus part, s_lambda>`.  The
    /// pairing of `p_nu` with `s_lambda` is the character value, so every
    /// multiplicity must come out a nonnegative integer; anything else is a
    /// consistency failure.
    fn extract(&self, genus: usize, lam: &Partition) -> Result<BTreeMap<usize, u64>> {
        let n = lam.size();
        let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
        for ((g, j), inner) in &self.terms {
            if *g != genus {
                continue;
            }
            for (nu, c) in inner {
                if nu.size() != n {
                    continue;
                }
                let chi = rat(character(lam, nu));
                if !chi.is_zero() {
                    *acc.entry(*j).or_insert_with(Rat::zero) += c.clone() * chi;
                }
            }
        }
        let mut out = BTreeMap::new();
        for (j, v) in acc {
            if v.is_zero() {
                continue;
            }
            if !v.is_integer() || v.is_negative() {
                return Err(Error::Consistency(format!(
                    "assembly multiplicity of {lam} in degree {j} is {v}, not a nonnegative integer"
                )));
            }
            let int = v.to_integer();
            let val: u64 = int.try_into().map_err(|_| {
                Error::Consistency(format!("assembly multiplicity of {lam} overflows in degree {j}"))
            })?;
            out.insert(j, val);
        }
        Ok(out)
    }
}

/// Power-sum expansion of a permutation representation given by irreducible
/// multiplicities, optionally twisted by the sign character (partition
/// conjugation).
fn rep_to_powersum(
    rep: &BTreeMap<Partition, u64>,
    n: usize,
    sign_twist: bool,
) -> BTreeMap<Partition, Rat> {
    let mut out: BTreeMap<Partition, Rat> = BTreeMap::new();
    for (mu, mult) in rep {
        let shape = if sign_twist { mu.conjugate() } else { mu.clone() };
        for nu in partitions(n) {
            let chi = character(&shape, &nu);
            if chi == 0 {
                continue;
            }
            let coeff = rat(*mult as i64) * rat(chi) / rat(z_order(&nu) as i64);
            let slot = out.entry(nu).or_insert_with(Rat::zero);
            *slot += coeff;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

// ---------------------------------------------------------------------------
// Arity-zero assembly
// ---------------------------------------------------------------------------

/// Open moduli cells whose weight-zero cohomology can contribute to
/// `H(G_lambda(g, 0))`.
///
/// A cell `(g', n')` with `n' >= 1` decorated legs enters at sequence genus
/// `g' + n' - 1`; a cell with no decorated legs attaches through one plain
/// leg and enters at sequence genus `g'`.  Either way the sequence genus
/// must fit in `g`, the marking count in `|lambda|`, and the component
/// excess (see [`cell_excess`]) in `3g + r_lambda - 2 |lambda|`: components
/// of larger excess can only occur alongside more than `r_lambda` pair
/// edges, which the `lambda`-isotypic projection kills.
pub fn n0_needed_cells(lam: &Partition, g: usize) -> Vec<(usize, usize)> {
    let n = lam.size();
    let bound = 3 * g as i64 + r_lambda(lam) as i64 - 2 * n as i64;
    let mut out = Vec::new();
    for gp in 0..=g {
        for np in 0..=n {
            if 2 * gp + np < 3 {
                continue;
            }
            let seq_genus = if np >= 1 { gp + np - 1 } else { gp };
            if seq_genus > g {
                continue;
            }
            if cell_excess(gp, np) > bound {
                continue;
            }
            out.push((gp, np));
        }
    }
    out
}

/// Cohomology of the arity-zero graph complex `G_lambda(g, 0)`, assembled
/// from known weight-zero cohomology of open moduli cells.
///
/// Components carrying decorated legs combine freely: the plethystic
/// exponential is taken over the cells with `n' >= 1` markings, placed at
/// sequence genus `g' + n' - 1` with a sign twist and degree shift `n'`,
/// together with the loop edge with two decorated ends (genus 1, trivial
/// two-marking representation, degree 1).  Plain structure is constrained —
/// a graph admits at most one loop edge with two plain ends (genus 1,
/// arity 0, degree 1), and at most one of either the mixed decorated/plain
/// edge (genus 1, arity 1, degree 1) or a component with no decorated legs,
/// which attaches through a single plain leg and enters at sequence genus
/// `g'` with one extra degree for the attaching edge.  The product of the
/// two plain factors with the exponential evaluates at `(g, |lambda|)`
/// paired against `s_lambda`.
///
/// Returns the degree-indexed dimensions.  Raises [`Error::Coverage`] when
/// the dataset does not determine every needed cell, and
/// [`Error::Consistency`] if the pairing fails to be a nonnegative integer.
pub fn n0_assembly(lam: &Partition, g: usize, data: &W0Dataset) -> Result<BTreeMap<usize, u64>> {
    let n = lam.size();
    let needed = n0_needed_cells(lam, g);
    let missing: Vec<String> = needed
        .iter()
        .filter(|(gp, np)| !data.covers(*gp, *np))
        .map(|(gp, np)| format!("({gp}, {np})"))
        .collect();
    if !missing.is_empty() {
        return Err(Error::Coverage(format!(
            "arity-zero assembly of G_{lam}({g}, 0) needs weight-zero cohomology at uncovered cells {}",
            missing.join(", ")
        )));
    }

    let mut gens = SeqChar::zero(g, n);
    // Loop edge with two decorated ends: genus 1, trivial two-marking
    // representation, degree 1.
    if n >= 2 {
        let triv2: BTreeMap<Partition, u64> = [(Partition::row(2), 1)].into_iter().collect();
        for (nu, c) in rep_to_powersum(&triv2, 2, false) {
            gens.insert(1, 1, nu, c);
        }
    }
    for (gp, np) in needed.iter().filter(|(_, np)| *np >= 1) {
        let classes = data.class_reps(*gp, *np)?;
        let genus = gp + np - 1;
        for (degree, rep) in &classes {
            for (nu, c) in rep_to_powersum(rep, *np, true) {
                gens.insert(genus, degree + np, nu, c);
            }
        }
    }
    let assembled = gens.exp();

    // Optional loop edge with two plain ends: genus 1, arity 0, degree 1.
    let mut plain_loop = SeqChar::one(g, n);
    plain_loop.insert(1, 1, Partition::empty(), rat(1));
    // At most one piece of single-plain-leg structure: the mixed edge, or a
    // plain-attached cell.
    let mut single_plain = SeqChar::one(g, n);
    if n >= 1 {
        single_plain.insert(1, 1, Partition::row(1), rat(1));
    }
    for (gp, _) in needed.iter().filter(|(_, np)| *np == 0) {
        let classes = data.class_reps(*gp, 0)?;
        for (degree, rep) in &classes {
            for (nu, c) in rep_to_powersum(rep, 0, true) {
                single_plain.insert(*gp, degree + 1, nu, c);
            }
        }
    }
    plain_loop
        .mul(&single_plain)
        .mul(&assembled)
        .extract(g, lam)
}

/// Arity-zero cohomology of the reduced-column complex by the concentration
/// bounds: all of it vanishes while `3g < 2k`, and at the first genus where
/// that fails, `g = ceil(2k/3)`, the cohomology is one-dimensional in degree
/// `k`.  Beyond that genus the bounds say nothing and `None` is returned.
pub fn tilde_arity_zero(k: usize, g: usize) -> Option<BTreeMap<usize, u64>> {
    if 3 * g < 2 * k {
        return Some(BTreeMap::new());
    }
    if g == (2 * k).div_ceil(3) {
        return Some([(k, 1)].into_iter().collect());
    }
    None
}

// ---------------------------------------------------------------------------
// Weight reports
// ---------------------------------------------------------------------------

/// One of the two graph-complex summands of a weight report.
#[derive(Clone, Debug)]
pub struct HodgeSummand {
    pub module: FAModuleSpec,
    /// Genus of the underlying graph complex; `None` when the genus shift
    /// is negative, in which case the contribution is zero.
    pub genus: Option<usize>,
    /// How the summand was computed (or why it could not be).
    pub method: String,
    /// Ambient degree -> dimension.  `None` when the summand could not be
    /// computed; see `gap`.
    pub dims: Option<BTreeMap<usize, u64>>,
    /// Ambient degree -> irreducible multiplicities for the marking action,
    /// when available.
    pub isotypic: Option<BTreeMap<usize, BTreeMap<Partition, u64>>>,
    /// Why the summand is missing, when it is.
    pub gap: Option<String>,
}

/// Per-degree report for one weight-graded piece of the compactly supported
/// cohomology of the open moduli of genus-`g` curves with `n` markings.
#[derive(Clone, Debug)]
pub struct HodgeReport {
    pub weight: usize,
    pub g: usize,
    pub n: usize,
    /// The reduced-column summand followed by the two-column summand.
    pub summands: Vec<HodgeSummand>,
    /// True when every summand was computed; only then are totals present.
    pub complete: bool,
    /// Ambient degree -> dimension of the weight-graded piece.
    pub total_dims: Option<BTreeMap<usize, u64>>,
    /// Ambient degree -> irreducible multiplicities, when every summand
    /// provided them.
    pub total_isotypic: Option<BTreeMap<usize, BTreeMap<Partition, u64>>>,
    /// Whether the total was cross-checked against the closed-form Euler
    /// characteristic table.
    pub euler_checked: bool,
    /// Present when the underlying identity depends on an open hypothesis.
    pub conditional: Option<String>,
}

fn zero_summand(module: FAModuleSpec, genus: Option<usize>, method: &str) -> HodgeSummand {
    HodgeSummand {
        module,
        genus,
        method: method.to_string(),
        dims: Some(BTreeMap::new()),
        isotypic: Some(BTreeMap::new()),
        gap: None,
    }
}

fn summand_report(
    module: FAModuleSpec,
    shift: usize,
    weight: usize,
    g: usize,
    n: usize,
    budget: &ComplexBudget,
    data: Option<&W0Dataset>,
) -> Result<HodgeSummand> {
    let Some(cg) = g.checked_sub(shift) else {
        return Ok(zero_summand(module, None, "zero for negative genus"));
    };
    if vanishing_predicate(&module, cg, n) {
        return Ok(zero_summand(module, Some(cg), "vanishing bound"));
    }
    let mut reasons: Vec<String> = Vec::new();
    if n == 0 {
        match &module {
            FAModuleSpec::Tilde(k) => {
                if let Some(table) = tilde_arity_zero(*k, cg) {
                    let dims: BTreeMap<usize, u64> =
                        table.into_iter().map(|(j, d)| (j + weight, d)).collect();
                    let isotypic = dims
                        .iter()
                        .map(|(j, d)| (*j, [(Partition::empty(), *d)].into_iter().collect()))
                        .collect();
                    return Ok(HodgeSummand {
                        module,
                        genus: Some(cg),
                        method: "arity-zero concentration bounds".to_string(),
                        dims: Some(dims),
                        isotypic: Some(isotypic),
                        gap: None,
                    });
                }
                reasons.push("concentration bounds only cover the lowest nonvanishing genus".to_string());
            }
            FAModuleSpec::C(lam) => match data {
                Some(ds) => match n0_assembly(lam, cg, ds) {
                    Ok(table) => {
                        let dims: BTreeMap<usize, u64> =
                            table.into_iter().map(|(j, d)| (j + weight, d)).collect();
                        let isotypic = dims
                            .iter()
                            .map(|(j, d)| (*j, [(Partition::empty(), *d)].into_iter().collect()))
                            .collect();
                        return Ok(HodgeSummand {
                            module,
                            genus: Some(cg),
                            method: "assembly from weight-zero data".to_string(),
                            dims: Some(dims),
                            isotypic: Some(isotypic),
                            gap: None,
                        });
                    }
                    Err(Error::Coverage(msg)) => reasons.push(msg),
                    Err(e) => return Err(e),
                },
                None => reasons.push("no weight-zero dataset supplied".to_string()),
            },
            FAModuleSpec::Product(_) => {}
        }
    }
    match cohomology_of(&module, Variant::Star, cg, n, budget) {
        Ok(report) => {
            let mut dims = BTreeMap::new();
            let mut isotypic: BTreeMap<usize, BTreeMap<Partition, u64>> = BTreeMap::new();
            let mut have_isotypic = true;
            for d in &report.degrees {
                if d.betti == 0 {
                    continue;
                }
                dims.insert(d.degree + weight, d.betti as u64);
                match &d.isotypic {
                    Some(map) => {
                        isotypic.insert(d.degree + weight, map.clone());
                    }
                    None => have_isotypic = false,
                }
            }
            Ok(HodgeSummand {
                module,
                genus: Some(cg),
                method: "direct graph cohomology (reduced generators)".to_string(),
                dims: Some(dims),
                isotypic: have_isotypic.then_some(isotypic),
                gap: None,
            })
        }
        Err(Error::BudgetExhausted(msg)) => {
            reasons.push(format!("direct computation exceeded the budget: {msg}"));
            Ok(HodgeSummand {
                module,
                genus: Some(cg),
                method: "not computed".to_string(),
                dims: None,
                isotypic: None,
                gap: Some(reasons.join("; ")),
            })
        }
        Err(e) => Err(e),
    }
}

/// The weight-graded compactly supported cohomology of the open moduli of
/// genus-`g` curves with `n` markings, in weight 17 or 19, reported per
/// ambient degree.
///
/// The piece is the sum of two decorated graph complexes: the reduced-column
/// complex at genus `g - 1` and a two-column complex at genus `g - 2`, with
/// all internal degrees shifted by the weight.  Each summand is computed by
/// the cheapest applicable exact method (vanishing bounds, arity-zero
/// concentration, assembly from `data`, or direct cohomology within
/// `budget`).  Summands that cannot be computed leave an explicit gap and an
/// incomplete report, never a silent zero.  Complete totals are
/// cross-checked against the closed-form Euler characteristic table, and a
/// mismatch is a hard [`Error::Consistency`].  Weight 19 reports carry the
/// open hypothesis they depend on.
pub fn hodge_weight(
    weight: usize,
    g: usize,
    n: usize,
    budget: &ComplexBudget,
    data: Option<&W0Dataset>,
) -> Result<HodgeReport> {
    let (two_k, two_l, conditional) = match weight {
        17 => (7, 0, None),
        19 => (5, 6, Some(WEIGHT19_HYPOTHESIS.to_string())),
        _ => {
            return Err(Error::InvalidInput(format!(
                "weight reports exist for weights 17 and 19, got {weight}"
            )))
        }
    };
    let first = summand_report(
        FAModuleSpec::Tilde(weight),
        1,
        weight,
        g,
        n,
        budget,
        data,
    )?;
    let second = summand_report(
        FAModuleSpec::C(Partition::two_column(two_k, two_l)),
        2,
        weight,
        g,
        n,
        budget,
        data,
    )?;
    let summands = vec![first, second];
    let complete = summands.iter().all(|s| s.dims.is_some());
    let mut total_dims = None;
    let mut total_isotypic = None;
    let mut euler_checked = false;
    if complete {
        let mut dims: BTreeMap<usize, u64> = BTreeMap::new();
        for s in &summands {
            for (deg, d) in s.dims.as_ref().unwrap() {
                *dims.entry(*deg).or_insert(0) += d;
            }
        }
        if summands.iter().all(|s| s.isotypic.is_some()) {
            let mut iso: BTreeMap<usize, BTreeMap<Partition, u64>> = BTreeMap::new();
            for s in &summands {
                for (deg, rep) in s.isotypic.as_ref().unwrap() {
                    let slot = iso.entry(*deg).or_default();
                    for (lam, m) in rep {
                        *slot.entry(lam.clone()).or_insert(0) += m;
                    }
                }
            }
            total_isotypic = Some(iso);
        }
        // Cross-check against the closed-form Euler characteristic.
        let tables = ec_weight(weight, g, n)?;
        let cell = tables.total.cell(g, n)?;
        match &total_isotypic {
            Some(iso) => {
                let mut derived: BTreeMap<Partition, i64> = BTreeMap::new();
                for (deg, rep) in iso {
                    let sign = if deg % 2 == 0 { 1 } else { -1 };
                    for (lam, m) in rep {
                        *derived.entry(lam.clone()).or_insert(0) += sign * *m as i64;
                    }
                }
                derived.retain(|_, v| *v != 0);
                if derived != cell {
                    return Err(Error::Consistency(format!(
                        "weight-{weight} report at ({g}, {n}) disagrees with the closed-form Euler characteristic: report gives {derived:?}, table gives {cell:?}"
                    )));
                }
            }
            None => {
                let report_chi: i64 = dims
                    .iter()
                    .map(|(deg, d)| if deg % 2 == 0 { *d as i64 } else { -(*d as i64) })
                    .sum();
                let table_chi: i64 = cell
                    .iter()
                    .map(|(lam, c)| c * lam.dimension() as i64)
                    .sum();
                if report_chi != table_chi {
                    return Err(Error::Consistency(format!(
                        "weight-{weight} report at ({g}, {n}) disagrees with the closed-form Euler characteristic: report gives {report_chi}, table gives {table_chi}"
                    )));
                }
            }
        }
        euler_checked = true;
        total_dims = Some(dims);
    }
    Ok(HodgeReport {
        weight,
        g,
        n,
        summands,
        complete,
        total_dims,
        total_isotypic,
        euler_checked,
        conditional,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::cohomology_of;

    fn p(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    fn dims_of(map: &[(usize, u64)]) -> BTreeMap<usize, u64> {
        map.iter().copied().collect()
    }

    /// Direct per-degree Betti numbers of G_lambda(g, 0), reduced variant.
    fn direct_dims(lam: &str, g: usize) -> BTreeMap<usize, u64> {
        let module = FAModuleSpec::C(p(lam));
        let report = cohomology_of(&module, Variant::Star, g, 0, &ComplexBudget::default())
            .expect("direct cohomology");
        report
            .degrees
            .iter()
            .filter(|d| d.betti > 0)
            .map(|d| (d.degree, d.betti as u64))
            .collect()
    }

    #[test]
    fn cusp_form_dimensions_match_classical_table() {
        let expected: &[(usize, usize)] = &[
            (0, 0),
            (4, 0),
            (10, 0),
            (11, 0),
            (12, 1),
            (13, 0),
            (14, 0),
            (16, 1),
            (18, 1),
            (20, 1),
            (22, 1),
            (24, 2),
            (26, 1),
            (28, 2),
            (30, 2),
            (36, 3),
            (38, 2),
        ];
        for (w, d) in expected {
            assert_eq!(cusp_form_dimension(*w), *d, "weight {w}");
        }
        // Genus-1 form multiplicities: cusp forms one weight up.
        assert_eq!(cusp_form_dimension(12), 1); // weight-11 forms
        assert_eq!(cusp_form_dimension(14), 0); // no weight-13 forms
        assert_eq!(cusp_form_dimension(18), 1); // weight-17 forms
        assert_eq!(cusp_form_dimension(20), 1); // weight-19 forms
        assert_eq!(cusp_form_dimension(24), 2); // two weight-23 forms
    }

    #[test]
    fn classification_fixtures() {
        // Genus 1: exactly the weights with cusp forms one weight up.
        for k in [11usize, 15, 17, 19] {
            let c = classify_forms(k, 1).unwrap();
            assert_eq!(c.module, Some(FAModuleSpec::Tilde(k)), "weight {k}");
            assert!(c.conditional.is_none());
        }
        for k in [1usize, 10, 12, 13, 14, 16, 18, 20] {
            let c = classify_forms(k, 1).unwrap();
            assert_eq!(c.module, None, "weight {k}");
            assert!(c.conditional.is_none());
        }
        // Genus 2: the two exceptional odd weights.
        let c = classify_forms(17, 2).unwrap();
        assert_eq!(c.module, Some(FAModuleSpec::C(Partition::two_column(7, 0))));
        assert!(c.conditional.is_none());
        let c = classify_forms(19, 2).unwrap();
        assert_eq!(c.module, Some(FAModuleSpec::C(Partition::two_column(5, 6))));
        assert!(c.conditional.is_none());
        for k in [11usize, 16, 18, 20] {
            assert_eq!(classify_forms(k, 2).unwrap().module, None, "weight {k}");
            assert!(classify_forms(k, 2).unwrap().conditional.is_none());
        }
        // Genus >= 3: nothing, conditionally so at weights 19 and 20.
        for g in 3..=6 {
            for k in 1..=18 {
                let c = classify_forms(k, g).unwrap();
                assert_eq!(c.module, None);
                assert!(c.conditional.is_none(), "weight {k} genus {g}");
            }
            let c = classify_forms(19, g).unwrap();
            assert_eq!(c.module, None);
            assert_eq!(c.conditional.as_deref(), Some(WEIGHT19_HYPOTHESIS));
            let c = classify_forms(20, g).unwrap();
            assert_eq!(c.module, None);
            assert_eq!(c.conditional.as_deref(), Some(WEIGHT20_HYPOTHESIS));
        }
        // Genus 0 never carries forms.
        assert_eq!(classify_forms(11, 0).unwrap().module, None);
        // Out of classified range.
        assert!(classify_forms(0, 1).is_err());
        assert!(classify_forms(21, 3).is_err());
    }

    #[test]
    fn forms_dimension_fixtures() {
        // Genus 1, weight 17: one copy of the hook module.
        let d = forms_dimension(1, 17, 17).unwrap();
        assert_eq!(d, [(Partition::column(17), 1)].into_iter().collect());
        let d = forms_dimension(1, 17, 18).unwrap();
        assert_eq!(d, [(Partition::hook(2, 16), 1)].into_iter().collect());
        // No weight-13 forms in genus 1.
        assert!(forms_dimension(1, 13, 15).unwrap().is_empty());
        // Two copies of the weight-23 module.
        let d = forms_dimension(1, 23, 23).unwrap();
        assert_eq!(d, [(Partition::column(23), 2)].into_iter().collect());
        // Genus 2, even weights vanish.
        assert!(forms_dimension(2, 16, 14).unwrap().is_empty());
        // Genus 2, weight 17 at the minimal arity: the two-column shape.
        let d = forms_dimension(2, 17, 14).unwrap();
        assert_eq!(d, [(Partition::two_column(7, 0), 1)].into_iter().collect());
        // Genus 2, weight 17, one extra marking: dimension 6435 = 429 * 15.
        let d = forms_dimension(2, 17, 15).unwrap();
        let expected: BTreeMap<Partition, u64> = [
            (p("3,2,2,2,2,2,2"), 1),
            (p("2,2,2,2,2,2,2,1"), 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(d, expected);
        let total: u64 = d.iter().map(|(lam, m)| m * lam.dimension()).sum();
        assert_eq!(total, 6435);
        // Out of scope.
        assert!(forms_dimension(3, 17, 0).is_err());
        assert!(forms_dimension(0, 11, 5).is_err());
        assert!(forms_dimension(2, 21, 0).is_err());
    }

    #[test]
    fn dataset_round_trip_and_validation() {
        let ds = W0Dataset::builtin();
        let json = ds.to_json_string().unwrap();
        let back = W0Dataset::from_json_str(&json).unwrap();
        assert_eq!(ds, back);

        // Coverage semantics.
        assert!(ds.covers(0, 3));
        assert!(ds.covers(1, 2));
        assert!(ds.covers(3, 0));
        assert!(!ds.covers(0, 6));
        assert!(!ds.covers(4, 0));
        assert!(ds.class_reps(0, 6).is_err());
        assert!(matches!(ds.class_reps(0, 6), Err(Error::Coverage(_))));

        // A bound-covered, unlisted cell reads as zero.
        let small = W0Dataset {
            source: "test".into(),
            max_excess: Some(1),
            cells: vec![W0Cell {
                g: 0,
                n: 3,
                classes: vec![],
            }],
        };
        small.validate().unwrap();
        assert!(small.covers(0, 4)); // excess 1
        assert!(small.class_reps(0, 4).unwrap().is_empty());
        assert!(!small.covers(1, 2)); // excess 2

        // Validation failures.
        let bad = W0Dataset {
            source: "bad".into(),
            max_excess: None,
            cells: vec![W0Cell {
                g: 1,
                n: 0,
                classes: vec![],
            }],
        };
        assert!(bad.validate().is_err(), "unstable cell");
        let bad = W0Dataset {
            source: "bad".into(),
            max_excess: None,
            cells: vec![W0Cell {
                g: 0,
                n: 4,
                classes: vec![W0Class {
                    degree: 1,
                    representation: [("2,1".to_string(), 1)].into_iter().collect(),
                }],
            }],
        };
        assert!(bad.validate().is_err(), "partition size mismatch");
        let bad = W0Dataset {
            source: "bad".into(),
            max_excess: None,
            cells: vec![
                W0Cell { g: 0, n: 3, classes: vec![] },
                W0Cell { g: 0, n: 3, classes: vec![] },
            ],
        };
        assert!(bad.validate().is_err(), "duplicate cell");
        let bad = W0Dataset {
            source: "bad".into(),
            max_excess: None,
            cells: vec![W0Cell {
                g: 0,
                n: 4,
                classes: vec![W0Class {
                    degree: 1,
                    representation: [("2,2".to_string(), 0)].into_iter().collect(),
                }],
            }],
        };
        assert!(bad.validate().is_err(), "zero multiplicity");
    }

    #[test]
    fn plethystic_exponential_handles_parity() {
        // A single odd generator of genus 1, arity 0: its square vanishes,
        // so the exponential is 1 + x.
        let mut f = SeqChar::zero(3, 0);
        f.insert(1, 1, Partition::empty(), rat(1));
        let e = f.exp();
        assert_eq!(e.extract(0, &Partition::empty()).unwrap(), dims_of(&[(0, 1)]));
        assert_eq!(e.extract(1, &Partition::empty()).unwrap(), dims_of(&[(1, 1)]));
        assert!(e.extract(2, &Partition::empty()).unwrap().is_empty());
        assert!(e.extract(3, &Partition::empty()).unwrap().is_empty());

        // A single odd generator with trivial two-marking symmetry: its
        // graded square is the hook (3,1), not the symmetric square.
        let mut f = SeqChar::zero(2, 4);
        let triv2: BTreeMap<Partition, u64> = [(Partition::row(2), 1)].into_iter().collect();
        for (nu, c) in rep_to_powersum(&triv2, 2, false) {
            f.insert(1, 1, nu, c);
        }
        let e = f.exp();
        assert_eq!(e.extract(2, &p("3,1")).unwrap(), dims_of(&[(2, 1)]));
        assert!(e.extract(2, &p("2,2")).unwrap().is_empty());
        assert!(e.extract(2, &p("4")).unwrap().is_empty());
        assert!(e.extract(2, &p("2,1,1")).unwrap().is_empty());
        assert!(e.extract(2, &p("1,1,1,1")).unwrap().is_empty());

        // An odd one-marking generator squares to the exterior square.
        let mut f = SeqChar::zero(2, 2);
        f.insert(1, 1, Partition::row(1), rat(1));
        let e = f.exp();
        assert_eq!(e.extract(2, &p("1,1")).unwrap(), dims_of(&[(2, 1)]));
        assert!(e.extract(2, &p("2")).unwrap().is_empty());
    }

    #[test]
    fn needed_cells_track_excess_and_genus() {
        // The stretch shape: only the three-marking genus-0 cell is needed.
        assert_eq!(
            n0_needed_cells(&Partition::two_column(7, 0), 9),
            vec![(0, 3)]
        );
        // Genus-3 assembly for a four-box shape needs the small cells only.
        assert_eq!(
            n0_needed_cells(&p("2,2"), 3),
            vec![(0, 3), (0, 4), (1, 1), (1, 2)]
        );
        // A single box at genus 3 reaches the one-marked cells up to genus 3
        // and the plain-attached genus-2 cell; the unmarked genus-3 cell has
        // attached excess 9, over the bound 7.
        assert_eq!(
            n0_needed_cells(&p("1"), 3),
            vec![(1, 1), (2, 0), (2, 1), (3, 1)]
        );
    }

    #[test]
    fn assembly_matches_frozen_low_genus_values() {
        let ds = W0Dataset::builtin();
        // Genus 1.
        assert_eq!(n0_assembly(&p("1"), 1, &ds).unwrap(), dims_of(&[(1, 1)]));
        assert_eq!(n0_assembly(&p("2"), 1, &ds).unwrap(), dims_of(&[(1, 1)]));
        assert!(n0_assembly(&p("1,1"), 1, &ds).unwrap().is_empty());
        for lam in ["3", "2,1", "1,1,1"] {
            assert!(n0_assembly(&p(lam), 1, &ds).unwrap().is_empty(), "{lam}");
        }
        // Genus 2.
        assert_eq!(n0_assembly(&p("1"), 2, &ds).unwrap(), dims_of(&[(2, 1)]));
        assert_eq!(n0_assembly(&p("2"), 2, &ds).unwrap(), dims_of(&[(2, 1)]));
        assert!(n0_assembly(&p("1,1"), 2, &ds).unwrap().is_empty());
        assert_eq!(n0_assembly(&p("3"), 2, &ds).unwrap(), dims_of(&[(2, 1)]));
        assert_eq!(n0_assembly(&p("2,1"), 2, &ds).unwrap(), dims_of(&[(2, 1)]));
        assert_eq!(n0_assembly(&p("1,1,1"), 2, &ds).unwrap(), dims_of(&[(3, 1)]));
        assert_eq!(n0_assembly(&p("3,1"), 2, &ds).unwrap(), dims_of(&[(2, 1)]));
        for lam in ["4", "2,2", "2,1,1", "1,1,1,1"] {
            assert!(n0_assembly(&p(lam), 2, &ds).unwrap().is_empty(), "{lam}");
        }
        // Genus 3, four and five boxes.
        assert_eq!(n0_assembly(&p("3,1"), 3, &ds).unwrap(), dims_of(&[(3, 1)]));
        assert_eq!(n0_assembly(&p("2,2"), 3, &ds).unwrap(), dims_of(&[(5, 1)]));
        assert_eq!(n0_assembly(&p("2,1,1"), 3, &ds).unwrap(), dims_of(&[(4, 1)]));
        assert_eq!(n0_assembly(&p("1,1,1,1"), 3, &ds).unwrap(), dims_of(&[(4, 1)]));
        assert!(n0_assembly(&p("4"), 3, &ds).unwrap().is_empty());
        assert_eq!(n0_assembly(&p("4,1"), 3, &ds).unwrap(), dims_of(&[(3, 1)]));
        assert_eq!(n0_assembly(&p("3,2"), 3, &ds).unwrap(), dims_of(&[(3, 1)]));
        assert_eq!(
            n0_assembly(&p("3,1,1"), 3, &ds).unwrap(),
            dims_of(&[(3, 1), (4, 1)])
        );
        assert!(n0_assembly(&p("2,2,1"), 3, &ds).unwrap().is_empty());
        assert_eq!(n0_assembly(&p("2,1,1,1"), 3, &ds).unwrap(), dims_of(&[(4, 1)]));
        assert!(n0_assembly(&p("1,1,1,1,1"), 3, &ds).unwrap().is_empty());
    }

    #[test]
    fn assembly_coverage_is_checked_before_computing() {
        // A bound-only dataset covers the low-excess cells as zero, which is
        // enough at genus 1 but not for the one-marked genus-2 cell.
        let bound_only = W0Dataset {
            source: "bound only".into(),
            max_excess: Some(1),
            cells: vec![],
        };
        bound_only.validate().unwrap();
        assert_eq!(
            n0_assembly(&p("1"), 1, &bound_only).unwrap(),
            dims_of(&[(1, 1)])
        );
        assert_eq!(
            n0_assembly(&p("2"), 1, &bound_only).unwrap(),
            dims_of(&[(1, 1)])
        );
        match n0_assembly(&p("1"), 2, &bound_only) {
            Err(Error::Coverage(msg)) => {
                assert!(msg.contains("(2, 1)"), "{msg}");
            }
            other => panic!("expected a coverage error, got {other:?}"),
        }
    }

    #[test]
    fn assembly_agrees_with_direct_cohomology_small_cells() {
        let ds = W0Dataset::builtin();
        let mut checked = 0;
        for g in 1..=2usize {
            for size in 1..=4usize {
                for lam in partitions(size) {
                    let assembled = n0_assembly(&lam, g, &ds).unwrap();
                    let direct = direct_dims(&lam.to_string(), g);
                    assert_eq!(assembled, direct, "shape {lam} genus {g}");
                    checked += 1;
                }
            }
        }
        assert!(checked >= 22);
    }

    #[test]
    fn assembly_agrees_with_direct_cohomology_genus_three() {
        let ds = W0Dataset::builtin();
        for size in 4..=5usize {
            for lam in partitions(size) {
                let assembled = n0_assembly(&lam, 3, &ds).unwrap();
                let direct = direct_dims(&lam.to_string(), 3);
                assert_eq!(assembled, direct, "shape {lam} genus 3");
            }
        }
    }

    #[test]
    fn derived_cells_match_direct_cohomology() {
        // The genus-3 complexes with at most three boxes see the dataset
        // cells (3, 0), (3, 1), (2, 2), and (1, 3).  The built-in values for
        // these cells were fixed by exactly this overdetermined system, so
        // the assembly must reproduce the direct cohomology on every shape.
        let ds = W0Dataset::builtin();
        for size in 1..=3usize {
            for lam in partitions(size) {
                let assembled = n0_assembly(&lam, 3, &ds).unwrap();
                let direct = direct_dims(&lam.to_string(), 3);
                assert_eq!(assembled, direct, "shape {lam} genus 3");
            }
        }
    }

    #[test]
    fn tilde_arity_zero_bounds() {
        assert_eq!(tilde_arity_zero(17, 10), Some(BTreeMap::new()));
        assert_eq!(tilde_arity_zero(17, 11), Some(BTreeMap::new()));
        assert_eq!(tilde_arity_zero(17, 12), Some(dims_of(&[(17, 1)])));
        assert_eq!(tilde_arity_zero(17, 13), None);
        assert_eq!(tilde_arity_zero(2, 1), Some(BTreeMap::new()));
        assert_eq!(tilde_arity_zero(2, 2), Some(dims_of(&[(2, 1)])));
        assert_eq!(tilde_arity_zero(3, 2), Some(dims_of(&[(3, 1)])));
        assert_eq!(tilde_arity_zero(4, 2), Some(BTreeMap::new()));
        assert_eq!(tilde_arity_zero(4, 3), Some(dims_of(&[(4, 1)])));
        assert_eq!(tilde_arity_zero(4, 4), None);
    }

    #[test]
    fn tilde_arity_zero_matches_direct_cohomology() {
        for k in 2..=4usize {
            for g in 1..=(2 * k).div_ceil(3) {
                let expected = tilde_arity_zero(k, g).expect("inside the bounded range");
                let report = cohomology_of(
                    &FAModuleSpec::Tilde(k),
                    Variant::Star,
                    g,
                    0,
                    &ComplexBudget::default(),
                )
                .unwrap();
                let direct: BTreeMap<usize, u64> = report
                    .degrees
                    .iter()
                    .filter(|d| d.betti > 0)
                    .map(|d| (d.degree, d.betti as u64))
                    .collect();
                assert_eq!(direct, expected, "k={k} g={g}");
            }
        }
    }

    #[test]
    fn stretch_cell_single_class_in_top_degree() {
        let ds = W0Dataset::builtin();
        let table = n0_assembly(&Partition::two_column(7, 0), 9, &ds).unwrap();
        assert_eq!(table, dims_of(&[(13, 1)]));
    }

    #[test]
    fn weight_seventeen_first_interesting_report() {
        let ds = W0Dataset::builtin();
        let report = hodge_weight(17, 11, 0, &ComplexBudget::default(), Some(&ds)).unwrap();
        assert!(report.complete);
        assert!(report.euler_checked);
        assert!(report.conditional.is_none());
        assert_eq!(report.total_dims.as_ref().unwrap(), &dims_of(&[(30, 1)]));
        // First summand: vanishing bound; second: assembly.
        assert_eq!(report.summands[0].dims.as_ref().unwrap(), &BTreeMap::new());
        assert_eq!(
            report.summands[1].dims.as_ref().unwrap(),
            &dims_of(&[(30, 1)])
        );
        assert_eq!(report.summands[1].method, "assembly from weight-zero data");
    }

    #[test]
    fn weight_seventeen_below_bound_vanishes() {
        let ds = W0Dataset::builtin();
        for (g, n) in [(2usize, 0usize), (5, 5), (8, 3), (10, 1), (11, 0)] {
            let report = hodge_weight(17, g, n, &ComplexBudget::default(), Some(&ds)).unwrap();
            assert!(report.complete, "({g}, {n})");
            assert!(report.euler_checked);
            if 3 * g + 2 * n + (g.saturating_sub(2)).min(1) < 34 {
                assert!(
                    report.total_dims.as_ref().unwrap().is_empty(),
                    "({g}, {n}) should vanish"
                );
            }
        }
    }

    #[test]
    fn weight_seventeen_partial_reports_flag_gaps() {
        let ds = W0Dataset::builtin();
        let tiny = ComplexBudget {
            max_classes: 50,
            max_visits: 10_000,
            max_basis: 50,
        };
        // Genus 12: the two-column summand needs the six-marking genus-0
        // cell, which the built-in dataset does not cover, and the direct
        // computation blows the tiny budget.
        let report = hodge_weight(17, 12, 0, &tiny, Some(&ds)).unwrap();
        assert!(!report.complete);
        assert!(!report.euler_checked);
        assert!(report.total_dims.is_none());
        assert_eq!(report.summands[0].dims.as_ref().unwrap(), &BTreeMap::new());
        let gap = report.summands[1].gap.as_ref().unwrap();
        assert!(gap.contains("(0, 6)"), "gap names the missing cell: {gap}");
        assert!(gap.contains("budget"), "gap names the budget: {gap}");

        // Genus 13: the reduced-column summand is pinned by the
        // concentration bounds even though the two-column part is missing.
        let report = hodge_weight(17, 13, 0, &tiny, Some(&ds)).unwrap();
        assert!(!report.complete);
        assert_eq!(
            report.summands[0].dims.as_ref().unwrap(),
            &dims_of(&[(34, 1)])
        );
        assert_eq!(report.summands[0].method, "arity-zero concentration bounds");
        assert!(report.summands[1].gap.is_some());
    }

    #[test]
    fn weight_nineteen_reports_are_conditional() {
        let ds = W0Dataset::builtin();
        let report = hodge_weight(19, 3, 0, &ComplexBudget::default(), Some(&ds)).unwrap();
        assert!(report.complete);
        assert_eq!(report.conditional.as_deref(), Some(WEIGHT19_HYPOTHESIS));
        assert!(report.total_dims.as_ref().unwrap().is_empty());
        assert!(hodge_weight(18, 3, 0, &ComplexBudget::default(), None).is_err());
    }
}
