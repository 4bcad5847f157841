//! Decorated graphs and their enumeration up to isomorphism.
//!
//! A generator of the cochain complex is a connected multigraph with one
//! distinguished **special vertex** (always index `0`), some number of
//! **black vertices** (indices `1..=blacks`, each of valence ≥ 3), numbered
//! legs, and an ordering of the internal edges representing the orientation
//! class.  Loops are allowed at the special vertex only.  The decoration of
//! the special vertex is recorded combinatorially as a coloring of some of
//! the half-edge **slots** at the special vertex (half-edges of incident
//! internal edges — two per loop — plus numbered legs attached there).  A
//! colored slot is called marked (drawn `ω`); an uncolored one unmarked
//! (drawn `ε`).  Distinct colors track distinct tensor factors of a product
//! decoration; a plain subset decoration uses the single color `1`.
//!
//! This module provides
//! * canonical forms ([`canonicalize`]) with orientation signs and slot
//!   alignment data,
//! * automorphism generators ([`automorphism_generators`]) with their edge
//!   parities and slot actions, which downstream code turns into invariant
//!   subspaces of the decoration,
//! * the two families of differential moves ([`splits`]): splitting a black
//!   vertex and splitting a subset of slots off the special vertex,
//! * the blown-up decomposition ([`blow_up`] / [`reattach`]) and per-component
//!   [`excess`](BlownComponent::excess) accounting, and
//! * budgeted exhaustive enumeration ([`enumerate`]) of isomorphism classes
//!   of generators of fixed degree (= number of internal edges).

use crate::famod::perm_sign;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A half-edge slot at the special vertex.
///
/// Slots order edge half-edges before legs; among edge half-edges the order
/// follows the edge ordering (and within a loop, end `0` before end `1`);
/// legs are ordered by label.  This total order is what decoration subsets
/// are indexed against.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Serialize, Deserialize)]
pub enum Slot {
    /// Half-edge of internal edge `edge`; `end` is 0 for the lower endpoint
    /// slot and 1 for the second half of a loop at the special vertex.
    Half { edge: u16, end: u8 },
    /// Numbered leg attached to the special vertex.
    Leg { label: u8 },
}

/// A decorated graph.
///
/// Invariants (checked by [`Graph::validate`]):
/// * every edge `(u, v)` has `u ≤ v` and endpoints `≤ blacks`;
/// * no loops at black vertices (`u == v` only for `u == 0`);
/// * `legs[label]` is the incident vertex of that leg;
/// * `marks` is sorted by slot, colors are ≥ 1, and every marked slot is a
///   valid special-vertex slot.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Graph {
    /// Number of black vertices; vertex ids are `0` (special) and `1..=blacks`.
    pub blacks: u8,
    /// Internal edges in orientation order; entries `(u, v)` with `u ≤ v`.
    pub edges: Vec<(u8, u8)>,
    /// `legs[label] = incident vertex` for labels `0..n`.
    pub legs: Vec<u8>,
    /// Sorted `(slot, color)` pairs; colors are 1-based.
    pub marks: Vec<(Slot, u8)>,
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Graph(b={}, edges={:?}, legs={:?}, marks={:?})",
            self.blacks, self.edges, self.legs, self.marks
        )
    }
}

impl Graph {
    /// Number of internal edges (= cohomological degree).
    pub fn degree(&self) -> usize {
        self.edges.len()
    }

    /// First Betti number of the graph: edges − vertices + 1 with the special
    /// vertex included.  Only meaningful for connected graphs.
    pub fn genus(&self) -> usize {
        self.edges.len() - self.blacks as usize
    }

    /// Color of a slot, or 0 if unmarked.
    pub fn mark(&self, slot: Slot) -> u8 {
        self.marks
            .binary_search_by_key(&slot, |m| m.0)
            .map(|i| self.marks[i].1)
            .unwrap_or(0)
    }

    /// Valence of a vertex: incident edge half-edges plus legs.
    pub fn valence(&self, v: u8) -> usize {
        let mut count = 0;
        for &(a, b) in &self.edges {
            if a == v {
                count += 1;
            }
            if b == v {
                count += 1;
            }
        }
        count + self.legs.iter().filter(|&&w| w == v).count()
    }

    /// Slots at the special vertex, in canonical slot order.
    pub fn estar_slots(&self) -> Vec<Slot> {
        let mut slots = Vec::new();
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            let i = i as u16;
            if u == 0 && v == 0 {
                slots.push(Slot::Half { edge: i, end: 0 });
                slots.push(Slot::Half { edge: i, end: 1 });
            } else if u == 0 {
                slots.push(Slot::Half { edge: i, end: 0 });
            }
        }
        for (label, &v) in self.legs.iter().enumerate() {
            if v == 0 {
                slots.push(Slot::Leg {
                    label: label as u8,
                });
            }
        }
        slots
    }

    /// Marked slot ordinals grouped by color: entry `c` lists the ordinals
    /// (into [`Graph::estar_slots`]) marked with color `c+1`, ascending.
    pub fn marked_ordinals(&self) -> Vec<Vec<usize>> {
        let slots = self.estar_slots();
        let ncolors = self.marks.iter().map(|m| m.1).max().unwrap_or(0) as usize;
        let mut out = vec![Vec::new(); ncolors];
        for (ord, &slot) in slots.iter().enumerate() {
            let c = self.mark(slot);
            if c > 0 {
                out[c as usize - 1].push(ord);
            }
        }
        out
    }

    /// Whether the graph (ignoring legs) is connected.
    pub fn is_connected(&self) -> bool {
        let nv = self.blacks as usize + 1;
        let mut uf = UnionFind::new(nv);
        for &(u, v) in &self.edges {
            uf.union(u as usize, v as usize);
        }
        let root = uf.find(0);
        (0..nv).all(|v| uf.find(v) == root)
    }

    /// Structural well-formedness check.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Consistency(msg));
        for &(u, v) in &self.edges {
            if u > v {
                return fail(format!("edge ({u},{v}) not normalized"));
            }
            if v > self.blacks {
                return fail(format!("edge endpoint {v} out of range"));
            }
            if u == v && u != 0 {
                return fail(format!("loop at black vertex {u}"));
            }
        }
        for (l, &v) in self.legs.iter().enumerate() {
            if v > self.blacks {
                return fail(format!("leg {l} attached to missing vertex {v}"));
            }
        }
        let slots = self.estar_slots();
        let mut prev: Option<Slot> = None;
        for &(slot, color) in &self.marks {
            if color == 0 {
                return fail("mark with color 0".into());
            }
            if !slots.contains(&slot) {
                return fail(format!("mark on non-special slot {slot:?}"));
            }
            if let Some(p) = prev {
                if p >= slot {
                    return fail("marks not sorted".into());
                }
            }
            prev = Some(slot);
        }
        Ok(())
    }
}

/// Minimal union-find used for connectivity and component splitting.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

// ---------------------------------------------------------------------------
// Canonical forms
// ---------------------------------------------------------------------------

/// Canonical form of a decorated graph.
#[derive(Clone, Debug)]
pub struct Canon {
    /// Canonical key: equal keys ⟺ isomorphic decorated graphs.
    pub key: Vec<u32>,
    /// The canonical representative (relabeled, edges in canonical order).
    pub graph: Graph,
    /// Parity of the edge reordering from the input orientation to the
    /// canonical one.
    pub sign: i8,
    /// `estar_map[s]` = ordinal (in the canonical graph's slot order) of the
    /// image of the input graph's slot ordinal `s`.
    pub estar_map: Vec<usize>,
}

/// Output of building the certificate for one candidate black relabeling.
struct CertOut {
    cert: Vec<u32>,
    sign: i8,
    estar_map: Vec<usize>,
    graph: Graph,
    /// canonical position of each input edge
    edge_pos: Vec<usize>,
}

/// Hard cap on candidate relabelings tried per canonicalization; graphs with
/// larger refined symmetry classes are rejected as over budget.
const CANDIDATE_CAP: u64 = 100_000;

fn apply_vertex(pi: &[u8], v: u8) -> u8 {
    if v == 0 {
        0
    } else {
        pi[v as usize - 1]
    }
}

/// Builds the certificate of `g` under the black relabeling `pi`
/// (`pi[v-1]` = new label of black vertex `v`).
fn certificate(g: &Graph, pi: &[u8]) -> CertOut {
    let ne = g.edges.len();
    // Edge records (u, v, hi-code, lo-code) and loop normalization flags.
    let mut records: Vec<([u32; 4], usize)> = Vec::with_capacity(ne);
    let mut swapped = vec![false; ne];
    for (i, &(a, b)) in g.edges.iter().enumerate() {
        let (mut u, mut v) = (apply_vertex(pi, a), apply_vertex(pi, b));
        if u > v {
            std::mem::swap(&mut u, &mut v);
        }
        let rec = if a == 0 && b == 0 {
            let c0 = g.mark(Slot::Half {
                edge: i as u16,
                end: 0,
            }) as u32;
            let c1 = g.mark(Slot::Half {
                edge: i as u16,
                end: 1,
            }) as u32;
            swapped[i] = c0 < c1;
            [0, 0, c0.max(c1), c0.min(c1)]
        } else if a == 0 {
            let c = g.mark(Slot::Half {
                edge: i as u16,
                end: 0,
            }) as u32;
            [0, v as u32, c, 0]
        } else {
            [u as u32, v as u32, 0, 0]
        };
        records.push((rec, i));
    }
    records.sort();
    let mut edge_pos = vec![0usize; ne];
    for (pos, &(_, i)) in records.iter().enumerate() {
        edge_pos[i] = pos;
    }
    let sign = if ne == 0 {
        1
    } else {
        perm_sign(&edge_pos) as i8
    };

    // Canonical edge list and slot ordinals.
    let canon_edges: Vec<(u8, u8)> = records
        .iter()
        .map(|&(rec, _)| (rec[0] as u8, rec[1] as u8))
        .collect();
    let canon_legs: Vec<u8> = g.legs.iter().map(|&v| apply_vertex(pi, v)).collect();
    let skeleton = Graph {
        blacks: g.blacks,
        edges: canon_edges,
        legs: canon_legs,
        marks: Vec::new(),
    };
    let canon_slots = skeleton.estar_slots();
    let slot_ordinal: BTreeMap<Slot, usize> = canon_slots
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i))
        .collect();

    let input_slots = g.estar_slots();
    let mut estar_map = Vec::with_capacity(input_slots.len());
    for &slot in &input_slots {
        let image = match slot {
            Slot::Half { edge, end } => Slot::Half {
                edge: edge_pos[edge as usize] as u16,
                end: if swapped[edge as usize] { 1 - end } else { end },
            },
            Slot::Leg { label } => Slot::Leg { label },
        };
        estar_map.push(slot_ordinal[&image]);
    }

    // Transport marks.
    let mut marks: Vec<(Slot, u8)> = g
        .marks
        .iter()
        .enumerate()
        .map(|(_, &(slot, color))| {
            let s = input_slots.iter().position(|&x| x == slot).expect("marked slot exists");
            (canon_slots[estar_map[s]], color)
        })
        .collect();
    marks.sort();
    let graph = Graph { marks, ..skeleton };

    // Certificate bytes: structure + legs + (marks are determined by the
    // record codes and leg codes, already included below).
    let mut cert = Vec::with_capacity(2 + 4 * ne + 2 * g.legs.len());
    cert.push(g.blacks as u32);
    cert.push(ne as u32);
    for &(rec, _) in &records {
        cert.extend_from_slice(&rec);
    }
    cert.push(g.legs.len() as u32);
    for (label, &v) in g.legs.iter().enumerate() {
        cert.push(apply_vertex(pi, v) as u32);
        let code = if v == 0 {
            g.mark(Slot::Leg {
                label: label as u8,
            }) as u32
        } else {
            0
        };
        cert.push(code);
    }
    CertOut {
        cert,
        sign,
        estar_map,
        graph,
        edge_pos,
    }
}

/// Iterative color refinement of the black vertices.  Returns a color
/// ordinal per black vertex (index `v-1`); equal colors ⟺ not yet
/// distinguished by local structure.
fn refine_colors(g: &Graph) -> Vec<u32> {
    let b = g.blacks as usize;
    if b == 0 {
        return Vec::new();
    }
    // Dense multiplicity matrix including the special vertex.
    let mut mult = vec![vec![0u32; b + 1]; b + 1];
    for &(u, v) in &g.edges {
        mult[u as usize][v as usize] += 1;
        if u != v {
            mult[v as usize][u as usize] += 1;
        }
    }
    // Initial colors: valence, star multiplicity, star-half mark codes,
    // sorted leg labels.
    let mut keys: Vec<Vec<u32>> = (1..=b)
        .map(|v| {
            let mut key = vec![g.valence(v as u8) as u32, mult[v][0]];
            let mut star_codes: Vec<u32> = g
                .edges
                .iter()
                .enumerate()
                .filter(|&(_, &(a, bb))| a == 0 && bb as usize == v)
                .map(|(i, _)| {
                    g.mark(Slot::Half {
                        edge: i as u16,
                        end: 0,
                    }) as u32
                })
                .collect();
            star_codes.sort_unstable();
            key.push(star_codes.len() as u32);
            key.extend(star_codes);
            let mut labels: Vec<u32> = g
                .legs
                .iter()
                .enumerate()
                .filter(|&(_, &w)| w as usize == v)
                .map(|(l, _)| l as u32)
                .collect();
            labels.sort_unstable();
            key.push(labels.len() as u32);
            key.extend(labels);
            key
        })
        .collect();
    let mut colors = ordinals(&keys);
    loop {
        keys = (1..=b)
            .map(|v| {
                let mut key = vec![colors[v - 1]];
                let mut nb: Vec<(u32, u32)> = (1..=b)
                    .filter(|&u| u != v && mult[v][u] > 0)
                    .map(|u| (colors[u - 1], mult[v][u]))
                    .collect();
                nb.sort_unstable();
                for (c, m) in nb {
                    key.push(c);
                    key.push(m);
                }
                key
            })
            .collect();
        let next = ordinals(&keys);
        if next == colors {
            return colors;
        }
        colors = next;
    }
}

fn ordinals(keys: &[Vec<u32>]) -> Vec<u32> {
    let mut sorted: Vec<&Vec<u32>> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    let index: BTreeMap<&Vec<u32>, u32> = sorted
        .into_iter()
        .enumerate()
        .map(|(i, k)| (k, i as u32))
        .collect();
    keys.iter().map(|k| index[k]).collect()
}

/// All candidate black relabelings consistent with the refined coloring.
fn candidate_relabelings(g: &Graph) -> Result<Vec<Vec<u8>>> {
    let b = g.blacks as usize;
    if b == 0 {
        return Ok(vec![Vec::new()]);
    }
    let colors = refine_colors(g);
    // Group black ids by color; classes listed in color order determine the
    // canonical label ranges.
    let mut classes: BTreeMap<u32, Vec<u8>> = BTreeMap::new();
    for v in 1..=b {
        classes.entry(colors[v - 1]).or_default().push(v as u8);
    }
    let classes: Vec<Vec<u8>> = classes.into_values().collect();
    let mut count: u64 = 1;
    for class in &classes {
        for k in 1..=class.len() as u64 {
            count = count.saturating_mul(k);
        }
        if count > CANDIDATE_CAP {
            return Err(Error::BudgetExhausted(format!(
                "canonical labeling: more than {CANDIDATE_CAP} candidate relabelings"
            )));
        }
    }
    // Cartesian product of within-class permutations.
    let mut candidates: Vec<Vec<u8>> = vec![vec![0u8; b]];
    let mut next_label = 1u8;
    for class in &classes {
        let perms = permutations(class);
        let labels: Vec<u8> = (next_label..next_label + class.len() as u8).collect();
        next_label += class.len() as u8;
        let mut grown = Vec::with_capacity(candidates.len() * perms.len());
        for cand in &candidates {
            for perm in &perms {
                let mut c = cand.clone();
                for (member, &label) in perm.iter().zip(&labels) {
                    c[*member as usize - 1] = label;
                }
                grown.push(c);
            }
        }
        candidates = grown;
    }
    Ok(candidates)
}

fn permutations(items: &[u8]) -> Vec<Vec<u8>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// Canonicalizes a decorated graph.
pub fn canonicalize(g: &Graph) -> Result<Canon> {
    let mut best: Option<CertOut> = None;
    for pi in candidate_relabelings(g)? {
        let out = certificate(g, &pi);
        match &best {
            Some(b) if b.cert <= out.cert => {}
            _ => best = Some(out),
        }
    }
    let best = best.expect("at least one candidate relabeling");
    Ok(Canon {
        key: best.cert,
        graph: best.graph,
        sign: best.sign,
        estar_map: best.estar_map,
    })
}

/// One automorphism of a decorated graph, recorded by its action on the
/// edge set and on the special-vertex slots.
#[derive(Clone, Debug)]
pub struct AutGen {
    /// Parity of the edge permutation (the action on the orientation).
    pub sign: i8,
    /// `edge_perm[i]` = image edge of edge `i`.
    pub edge_perm: Vec<usize>,
    /// `estar_perm[s]` = image slot ordinal of slot ordinal `s`.
    pub estar_perm: Vec<usize>,
}

/// Generators of the automorphism group of the decorated graph (vertex
/// relabelings preserving everything, swaps of indistinguishable parallel
/// edges, and flips of special-vertex loops with equal half codes).
/// Together with the identity these generate the full automorphism group of
/// the decorated graph.
pub fn automorphism_generators(g: &Graph) -> Result<Vec<AutGen>> {
    let mut gens = Vec::new();
    let slots = g.estar_slots();
    let ns = slots.len();
    let ne = g.edges.len();
    let id_cert = certificate(g, &identity_relabeling(g));

    // Vertex-level automorphisms: relabelings reproducing the identity
    // certificate.
    for pi in candidate_relabelings(g)? {
        if pi.iter().enumerate().all(|(i, &l)| l == i as u8 + 1) {
            continue;
        }
        let out = certificate(g, &pi);
        if out.cert != id_cert.cert {
            continue;
        }
        // matching through the common certificate: edge i ↦ the edge that
        // occupies under `pi` the canonical position edge i occupies under
        // the identity.
        let mut inv_pos_pi = vec![0usize; ne];
        for (i, &p) in out.edge_pos.iter().enumerate() {
            inv_pos_pi[p] = i;
        }
        let edge_perm: Vec<usize> = (0..ne).map(|i| inv_pos_pi[id_cert.edge_pos[i]]).collect();
        let mut inv_slot_pi = vec![0usize; ns];
        for (s, &t) in out.estar_map.iter().enumerate() {
            inv_slot_pi[t] = s;
        }
        let estar_perm: Vec<usize> = (0..ns).map(|s| inv_slot_pi[id_cert.estar_map[s]]).collect();
        let sign = id_cert.sign * out.sign;
        debug_assert_eq!(sign, if ne == 0 { 1 } else { perm_sign(&edge_perm) as i8 });
        gens.push(AutGen {
            sign,
            edge_perm,
            estar_perm,
        });
    }

    // Record value per edge under the identity labeling, for grouping
    // indistinguishable parallel edges.
    let id_records: Vec<[u32; 4]> = {
        let mut recs = vec![[0u32; 4]; ne];
        for (i, &(a, b)) in g.edges.iter().enumerate() {
            recs[i] = if a == 0 && b == 0 {
                let c0 = g.mark(Slot::Half {
                    edge: i as u16,
                    end: 0,
                }) as u32;
                let c1 = g.mark(Slot::Half {
                    edge: i as u16,
                    end: 1,
                }) as u32;
                [0, 0, c0.max(c1), c0.min(c1)]
            } else if a == 0 {
                [
                    0,
                    b as u32,
                    g.mark(Slot::Half {
                        edge: i as u16,
                        end: 0,
                    }) as u32,
                    0,
                ]
            } else {
                [a as u32, b as u32, 0, 0]
            };
        }
        recs
    };
    let slot_ordinal: BTreeMap<Slot, usize> = slots
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i))
        .collect();

    // Swaps of indistinguishable parallel edges (equal records).  For loops
    // the halves are matched by their normalized code order so marks are
    // preserved.
    let mut groups: BTreeMap<[u32; 4], Vec<usize>> = BTreeMap::new();
    for (i, rec) in id_records.iter().enumerate() {
        groups.entry(*rec).or_default().push(i);
    }
    for (rec, members) in &groups {
        for w in members.windows(2) {
            let (i, j) = (w[0], w[1]);
            let mut edge_perm: Vec<usize> = (0..ne).collect();
            edge_perm[i] = j;
            edge_perm[j] = i;
            let mut estar_perm: Vec<usize> = (0..ns).collect();
            if rec[0] == 0 && rec[1] == 0 {
                // Align loop halves by code: swap like-coded ends.  Both
                // loops have equal (hi, lo) codes; ends with the hi code map
                // to each other.
                for (ei, ej) in loop_half_alignment(g, i, j) {
                    let a = slot_ordinal[&ei];
                    let b = slot_ordinal[&ej];
                    estar_perm[a] = b;
                    estar_perm[b] = a;
                }
            } else if rec[0] == 0 {
                let a = slot_ordinal[&Slot::Half {
                    edge: i as u16,
                    end: 0,
                }];
                let b = slot_ordinal[&Slot::Half {
                    edge: j as u16,
                    end: 0,
                }];
                estar_perm[a] = b;
                estar_perm[b] = a;
            }
            gens.push(AutGen {
                sign: -1,
                edge_perm,
                estar_perm,
            });
        }
    }

    // Flips of special-vertex loops whose two halves carry equal codes.
    for (i, &(a, b)) in g.edges.iter().enumerate() {
        if a == 0 && b == 0 {
            let s0 = Slot::Half {
                edge: i as u16,
                end: 0,
            };
            let s1 = Slot::Half {
                edge: i as u16,
                end: 1,
            };
            if g.mark(s0) == g.mark(s1) {
                let mut estar_perm: Vec<usize> = (0..ns).collect();
                let (o0, o1) = (slot_ordinal[&s0], slot_ordinal[&s1]);
                estar_perm[o0] = o1;
                estar_perm[o1] = o0;
                gens.push(AutGen {
                    sign: 1,
                    edge_perm: (0..ne).collect(),
                    estar_perm,
                });
            }
        }
    }
    Ok(gens)
}

/// Matches the halves of two equal-record loops at the special vertex end
/// by end so that mark codes are preserved.
fn loop_half_alignment(g: &Graph, i: usize, j: usize) -> Vec<(Slot, Slot)> {
    let half = |e: usize, end: u8| Slot::Half {
        edge: e as u16,
        end,
    };
    let code = |s: Slot| g.mark(s);
    // Order each loop's ends by descending code, then pair positionally.
    let order = |e: usize| {
        if code(half(e, 0)) >= code(half(e, 1)) {
            [half(e, 0), half(e, 1)]
        } else {
            [half(e, 1), half(e, 0)]
        }
    };
    let (oi, oj) = (order(i), order(j));
    vec![(oi[0], oj[0]), (oi[1], oj[1])]
}

fn identity_relabeling(g: &Graph) -> Vec<u8> {
    (1..=g.blacks).collect()
}

/// Whether some automorphism generator flips the orientation while fixing
/// every marked slot — in that case the class dies for every decoration
/// that only sees the marked slots.
pub fn quick_null(g: &Graph, gens: &[AutGen], subset_mode: bool) -> bool {
    let slots = g.estar_slots();
    gens.iter().any(|gen| {
        gen.sign < 0
            && if subset_mode {
                slots
                    .iter()
                    .enumerate()
                    .all(|(s, &slot)| g.mark(slot) == 0 || gen.estar_perm[s] == s)
            } else {
                gen.estar_perm.iter().enumerate().all(|(s, &t)| s == t)
            }
    })
}

// ---------------------------------------------------------------------------
// Differential moves
// ---------------------------------------------------------------------------

/// Relabeling of special-vertex slots induced by splitting a slot subset off
/// to a new black vertex: a surjection from the source slot ordinals onto the
/// target slot ordinals (the moved slots all map to the new edge's slot).
#[derive(Clone, Debug)]
pub struct CollapseMap {
    /// `map[s]` = target slot ordinal of source slot ordinal `s`.
    pub map: Vec<usize>,
    /// Number of target slots.
    pub target_size: usize,
}

/// One summand of the differential: the target graph (not canonicalized;
/// the new edge is first in the orientation order) plus, for special-vertex
/// splits, the slot collapse describing the decoration pushforward.
#[derive(Clone, Debug)]
pub struct Split {
    pub graph: Graph,
    pub collapse: Option<CollapseMap>,
}

/// Half-edge items at a black vertex.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Item {
    /// `end` = which endpoint of the edge sits at the vertex being split.
    EdgeEnd { edge: usize, end: u8 },
    Leg { label: usize },
}

/// All splittings of black vertices.  Each result keeps the original edges
/// in order after the new edge; special-vertex slots are unchanged (the
/// special half of a star–black edge never moves).
pub fn black_splits(g: &Graph) -> Vec<Split> {
    let mut out = Vec::new();
    for v in 1..=g.blacks {
        let mut items = Vec::new();
        for (i, &(a, b)) in g.edges.iter().enumerate() {
            if a == v {
                items.push(Item::EdgeEnd { edge: i, end: 0 });
            }
            if b == v {
                items.push(Item::EdgeEnd { edge: i, end: 1 });
            }
        }
        for (l, &w) in g.legs.iter().enumerate() {
            if w == v {
                items.push(Item::Leg { label: l });
            }
        }
        let k = items.len();
        if k < 4 {
            continue;
        }
        // Unordered 2-partitions with both sides ≥ 2: fix items[0] on the
        // kept side, move any subset of the rest of size 2..=k−2.
        let rest = &items[1..];
        for mask in 0u32..(1 << rest.len()) {
            let moved = mask.count_ones() as usize;
            if moved < 2 || k - moved < 2 {
                continue;
            }
            let w = g.blacks + 1;
            let mut edges = Vec::with_capacity(g.edges.len() + 1);
            edges.push((v, w));
            let mut new_edges = g.edges.clone();
            let mut legs = g.legs.clone();
            for (bit, item) in rest.iter().enumerate() {
                if mask & (1 << bit) == 0 {
                    continue;
                }
                match *item {
                    Item::EdgeEnd { edge, end } => {
                        let (a, b) = new_edges[edge];
                        let mut pair = if end == 0 { (w, b) } else { (a, w) };
                        if pair.0 > pair.1 {
                            pair = (pair.1, pair.0);
                        }
                        new_edges[edge] = pair;
                    }
                    Item::Leg { label } => legs[label] = w,
                }
            }
            edges.extend(new_edges);
            // Special-vertex slots keep their ordinals: the edge indices all
            // shift by one which preserves the relative slot order, and no
            // special half-edge is created or moved.
            let marks = g
                .marks
                .iter()
                .map(|&(slot, c)| match slot {
                    Slot::Half { edge, end } => (
                        Slot::Half {
                            edge: edge + 1,
                            end,
                        },
                        c,
                    ),
                    leg => (leg, c),
                })
                .collect();
            out.push(Split {
                graph: Graph {
                    blacks: w,
                    edges,
                    legs,
                    marks,
                },
                collapse: None,
            });
        }
    }
    out
}

/// All splittings of the special vertex: move a subset of ≥ 2 slots to a new
/// black vertex joined to the special vertex by a new edge (first in the
/// orientation order).
///
/// Splits that would move both halves of a special-vertex loop (creating a
/// loop at a black vertex) are omitted.  With `prune_marked` set, subsets
/// containing ≥ 2 marked slots are omitted as well — the decoration
/// pushforward kills them — which is the correct differential for
/// marked-subset decorations.
pub fn star_splits(g: &Graph, prune_marked: bool) -> Vec<Split> {
    let slots = g.estar_slots();
    let ns = slots.len();
    let mut out = Vec::new();
    if ns < 2 || ns > 63 {
        return out;
    }
    let slot_index: BTreeMap<Slot, usize> = slots
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i))
        .collect();
    // Cheap per-mask filters as bitmasks.
    let marked_mask: u64 = slots
        .iter()
        .enumerate()
        .filter(|&(_, &slot)| g.mark(slot) > 0)
        .map(|(s, _)| 1u64 << s)
        .sum();
    let loop_masks: Vec<u64> = g
        .edges
        .iter()
        .enumerate()
        .filter(|&(_, &(a, b))| a == 0 && b == 0)
        .map(|(i, _)| {
            (1u64
                << slot_index[&Slot::Half {
                    edge: i as u16,
                    end: 0,
                }])
                | (1u64
                    << slot_index[&Slot::Half {
                        edge: i as u16,
                        end: 1,
                    }])
        })
        .collect();
    for mask in 0u64..(1 << ns) {
        let moved = mask.count_ones() as usize;
        if moved < 2 {
            continue;
        }
        if prune_marked && (mask & marked_mask).count_ones() >= 2 {
            continue;
        }
        // Reject masks moving both halves of one loop.
        if loop_masks.iter().any(|&lm| mask & lm == lm) {
            continue;
        }
        let in_mask = |s: usize| mask & (1 << s) != 0;
        let w = g.blacks + 1;
        let mut edges = Vec::with_capacity(g.edges.len() + 1);
        edges.push((0u8, w));
        // Record where each surviving special slot went.
        let mut survived: BTreeMap<Slot, Slot> = BTreeMap::new(); // old slot -> new slot
        let mut legs = g.legs.clone();
        for (i, &(a, b)) in g.edges.iter().enumerate() {
            let ni = (i + 1) as u16;
            if a == 0 && b == 0 {
                let h0 = Slot::Half {
                    edge: i as u16,
                    end: 0,
                };
                let h1 = Slot::Half {
                    edge: i as u16,
                    end: 1,
                };
                let m0 = in_mask(slot_index[&h0]);
                let m1 = in_mask(slot_index[&h1]);
                match (m0, m1) {
                    (false, false) => {
                        edges.push((0, 0));
                        survived.insert(h0, Slot::Half { edge: ni, end: 0 });
                        survived.insert(h1, Slot::Half { edge: ni, end: 1 });
                    }
                    (true, false) => {
                        edges.push((0, w));
                        survived.insert(h1, Slot::Half { edge: ni, end: 0 });
                    }
                    (false, true) => {
                        edges.push((0, w));
                        survived.insert(h0, Slot::Half { edge: ni, end: 0 });
                    }
                    (true, true) => unreachable!("tadpole masks rejected above"),
                }
            } else if a == 0 {
                let h = Slot::Half {
                    edge: i as u16,
                    end: 0,
                };
                if in_mask(slot_index[&h]) {
                    edges.push((b.min(w), b.max(w)));
                } else {
                    edges.push((0, b));
                    survived.insert(h, Slot::Half { edge: ni, end: 0 });
                }
            } else {
                edges.push((a, b));
            }
        }
        for (l, &v) in g.legs.iter().enumerate() {
            if v == 0 {
                let slot = Slot::Leg { label: l as u8 };
                if in_mask(slot_index[&slot]) {
                    legs[l] = w;
                } else {
                    survived.insert(slot, slot);
                }
            }
        }
        // Decoration pushforward: marks outside the moved set survive; if
        // exactly one moved slot was marked, its color lands on the new
        // edge's special half.
        let new_half = Slot::Half { edge: 0, end: 0 };
        let mut marks: Vec<(Slot, u8)> = Vec::new();
        let mut moved_color: Option<u8> = None;
        for &(slot, color) in &g.marks {
            let s = slot_index[&slot];
            if in_mask(s) {
                // With prune_marked there is at most one such mark; without
                // (whole-space decorations) marks are absent anyway.
                moved_color = Some(color);
            } else {
                marks.push((survived[&slot], color));
            }
        }
        if let Some(c) = moved_color {
            marks.push((new_half, c));
        }
        marks.sort();
        let target = Graph {
            blacks: w,
            edges,
            legs,
            marks,
        };
        // Collapse map on slot ordinals.
        let target_slots = target.estar_slots();
        let target_ordinal: BTreeMap<Slot, usize> = target_slots
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, i))
            .collect();
        let p = target_ordinal[&new_half];
        let map: Vec<usize> = slots
            .iter()
            .enumerate()
            .map(|(s, slot)| {
                if in_mask(s) {
                    p
                } else {
                    target_ordinal[&survived[slot]]
                }
            })
            .collect();
        out.push(Split {
            graph: target,
            collapse: Some(CollapseMap {
                map,
                target_size: target_slots.len(),
            }),
        });
    }
    out
}

/// All differential moves: black-vertex splits then special-vertex splits.
pub fn splits(g: &Graph, prune_marked: bool) -> Vec<Split> {
    let mut out = black_splits(g);
    out.extend(star_splits(g, prune_marked));
    out
}

// ---------------------------------------------------------------------------
// Blown-up decomposition
// ---------------------------------------------------------------------------

/// What a blown-up component is, structurally.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ComponentKind {
    /// Contains at least one black vertex.
    Vertexful,
    /// A former special-vertex loop: a bare edge with two marks.
    MarkEdge,
    /// A former special-vertex leg: a numbered leg with one mark.
    MarkLeg,
}

/// One connected component of the blown-up picture: delete the special
/// vertex and keep its half-edges as ω-legs (marked) or ε-legs (unmarked).
#[derive(Clone, Debug)]
pub struct BlownComponent {
    /// Black vertices, relabeled `1..=blacks` locally.
    pub blacks: u8,
    /// Edges among local vertices; `0` is the former special-vertex side, so
    /// `(0, v)` records an ω/ε-leg on `v` and `(0, 0)` a bare mark–mark edge.
    pub edges: Vec<(u8, u8)>,
    /// `(global label, local vertex)` pairs; local vertex 0 for a former
    /// special-vertex leg.
    pub legs: Vec<(u8, u8)>,
    /// Marks on the component's special-side slots, `(slot, color)` with
    /// slots indexed against the component's own edge list / leg labels.
    pub marks: Vec<(Slot, u8)>,
}

impl BlownComponent {
    pub fn kind(&self) -> ComponentKind {
        if self.blacks > 0 {
            ComponentKind::Vertexful
        } else if self.edges.len() == 1 {
            ComponentKind::MarkEdge
        } else {
            ComponentKind::MarkLeg
        }
    }

    /// Number of ω-legs (marked special-side slots).
    pub fn omega(&self) -> usize {
        self.marks.len()
    }

    /// Number of ε-legs (unmarked special-side slots).
    pub fn epsilon(&self) -> usize {
        let mut total = 0;
        for &(a, b) in &self.edges {
            if a == 0 && b == 0 {
                total += 2;
            } else if a == 0 {
                total += 1;
            }
        }
        total += self.legs.iter().filter(|&&(_, v)| v == 0).count();
        total - self.omega()
    }

    /// Number of numbered legs on the component.
    pub fn numbered_legs(&self) -> usize {
        self.legs.len()
    }

    /// Internal loop order: first Betti number of the black part.
    pub fn betti(&self) -> usize {
        match self.kind() {
            ComponentKind::Vertexful => {
                let internal = self
                    .edges
                    .iter()
                    .filter(|&&(a, _)| a != 0)
                    .count();
                internal + 1 - self.blacks as usize
            }
            _ => 0,
        }
    }

    /// Excess `3(h−1) + 2·(numbered legs) + 3·ε + ω`.
    pub fn excess(&self) -> i64 {
        3 * (self.betti() as i64 - 1)
            + 2 * self.numbered_legs() as i64
            + 3 * self.epsilon() as i64
            + self.omega() as i64
    }
}

/// Decomposes a decorated graph into its blown-up components.
pub fn blow_up(g: &Graph) -> Vec<BlownComponent> {
    let b = g.blacks as usize;
    let mut uf = UnionFind::new(b + 1);
    for &(u, v) in &g.edges {
        if u != 0 {
            uf.union(u as usize, v as usize);
        }
    }
    // Component roots among black vertices, then special loop / leg
    // singleton components.
    let mut roots: Vec<usize> = Vec::new();
    let mut root_of = vec![usize::MAX; b + 1];
    for v in 1..=b {
        let r = uf.find(v);
        if !roots.contains(&r) {
            roots.push(r);
        }
        root_of[v] = r;
    }
    roots.sort_unstable();
    let mut comps = Vec::new();
    for &root in &roots {
        let members: Vec<usize> = (1..=b).filter(|&v| root_of[v] == root).collect();
        let local: BTreeMap<usize, u8> = members
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u8 + 1))
            .collect();
        let mut edges = Vec::new();
        let mut marks = Vec::new();
        for (i, &(u, v)) in g.edges.iter().enumerate() {
            if u == 0 && v == 0 {
                continue;
            }
            if u == 0 {
                if root_of[v as usize] == root {
                    let ni = edges.len() as u16;
                    edges.push((0u8, local[&(v as usize)]));
                    let c = g.mark(Slot::Half {
                        edge: i as u16,
                        end: 0,
                    });
                    if c > 0 {
                        marks.push((Slot::Half { edge: ni, end: 0 }, c));
                    }
                }
            } else if root_of[u as usize] == root {
                edges.push((local[&(u as usize)], local[&(v as usize)]));
            }
        }
        let legs: Vec<(u8, u8)> = g
            .legs
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v != 0 && root_of[v as usize] == root)
            .map(|(l, &v)| (l as u8, local[&(v as usize)]))
            .collect();
        marks.sort();
        comps.push(BlownComponent {
            blacks: members.len() as u8,
            edges,
            legs,
            marks,
        });
    }
    // Special-vertex loops.
    for (i, &(u, v)) in g.edges.iter().enumerate() {
        if u == 0 && v == 0 {
            let mut marks = Vec::new();
            for end in 0..2u8 {
                let c = g.mark(Slot::Half {
                    edge: i as u16,
                    end,
                });
                if c > 0 {
                    marks.push((Slot::Half { edge: 0, end }, c));
                }
            }
            comps.push(BlownComponent {
                blacks: 0,
                edges: vec![(0, 0)],
                legs: Vec::new(),
                marks,
            });
        }
    }
    // Special-vertex legs.
    for (l, &v) in g.legs.iter().enumerate() {
        if v == 0 {
            let c = g.mark(Slot::Leg { label: l as u8 });
            let marks = if c > 0 {
                vec![(Slot::Leg { label: l as u8 }, c)]
            } else {
                Vec::new()
            };
            comps.push(BlownComponent {
                blacks: 0,
                edges: Vec::new(),
                legs: vec![(l as u8, 0)],
                marks,
            });
        }
    }
    comps
}

/// Reassembles a decorated graph from blown-up components (inverse of
/// [`blow_up`] up to isomorphism).  The total number of numbered legs must
/// cover `0..n` exactly once.
pub fn reattach(comps: &[BlownComponent]) -> Graph {
    let mut blacks = 0u8;
    let mut edges: Vec<(u8, u8)> = Vec::new();
    let mut marks: Vec<(Slot, u8)> = Vec::new();
    let n = comps.iter().map(|c| c.legs.len()).sum::<usize>();
    let mut legs = vec![0u8; n];
    for comp in comps {
        let offset = blacks;
        let edge_offset = edges.len() as u16;
        for &(u, v) in &comp.edges {
            let sh = |x: u8| if x == 0 { 0 } else { x + offset };
            edges.push((sh(u), sh(v)));
        }
        for &(label, v) in &comp.legs {
            legs[label as usize] = if v == 0 { 0 } else { v + offset };
        }
        for &(slot, c) in &comp.marks {
            let slot = match slot {
                Slot::Half { edge, end } => Slot::Half {
                    edge: edge + edge_offset,
                    end,
                },
                leg => leg,
            };
            marks.push((slot, c));
        }
        blacks += comp.blacks;
    }
    marks.sort();
    Graph {
        blacks,
        edges,
        legs,
        marks,
    }
}

/// Star condition: every component without an ω-leg has no black vertices,
/// and at most one numbered leg sits in such components overall.
///
/// Only meaningful for marked-subset decorations, where unmarked slots are
/// ε-legs.  Whole-slot-space decorations have no ε-legs at all, so the
/// reduced subcomplex coincides with the full one and [`enumerate`] skips
/// this filter for them.
pub fn star_condition(g: &Graph) -> bool {
    let mut eps_legs = 0;
    for comp in blow_up(g) {
        if comp.omega() == 0 {
            if comp.blacks > 0 {
                return false;
            }
            eps_legs += comp.numbered_legs();
        }
    }
    eps_legs <= 1
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// Which subcomplex to enumerate.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Variant {
    /// All generators.
    Full,
    /// Only generators satisfying [`star_condition`] (a quasi-isomorphic
    /// subcomplex).  Identical to [`Variant::Full`] for decorations without
    /// marked subsets, which have no ε-legs.
    Star,
}

/// Shape of the decoration data carried by the special vertex.
#[derive(Clone, Debug)]
pub struct MarkShape {
    /// Sizes of the color classes: `class_sizes[c]` slots get color `c+1`.
    /// Empty for decorations that use the whole slot set (no marks).
    pub class_sizes: Vec<usize>,
    /// Minimum number of special-vertex slots for the decoration space to be
    /// nonzero.
    pub min_slots: usize,
}

impl MarkShape {
    /// Marked-subset decoration: one color class per subset factor.
    pub fn subsets(sizes: &[usize]) -> Self {
        MarkShape {
            class_sizes: sizes.to_vec(),
            min_slots: sizes.iter().sum(),
        }
    }

    /// Unmarked decoration occupying the whole slot set, nonzero only when
    /// at least `min_slots` slots are present.
    pub fn plain(min_slots: usize) -> Self {
        MarkShape {
            class_sizes: Vec::new(),
            min_slots,
        }
    }

    /// Whether decorations are marked subsets (true) or whole-space (false).
    pub fn subset_mode(&self) -> bool {
        !self.class_sizes.is_empty()
    }
}

/// Resource limits for enumeration.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Maximum number of isomorphism classes retained.
    pub max_classes: usize,
    /// Maximum number of candidate labeled graphs visited.
    pub max_visits: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_classes: 500_000,
            max_visits: 50_000_000,
        }
    }
}

/// One isomorphism class of generators.
#[derive(Clone, Debug)]
pub struct ClassEntry {
    pub key: Vec<u32>,
    pub graph: Graph,
    pub auts: Vec<AutGen>,
    /// True when an automorphism makes the class obviously zero for every
    /// decoration seeing only the marked slots (orientation flip fixing all
    /// marks).
    pub quick_null: bool,
}

/// Enumerates all isomorphism classes of degree-`e` generators for the given
/// decoration shape on `G(g, n)`, sorted by canonical key.
///
/// The list includes quick-null classes (flagged); decoration-dependent
/// nullity beyond the quick flag is the caller's concern.
pub fn enumerate(
    shape: &MarkShape,
    g: usize,
    n: usize,
    e: usize,
    variant: Variant,
    budget: &Budget,
) -> Result<Vec<ClassEntry>> {
    let mut found: BTreeMap<Vec<u32>, ClassEntry> = BTreeMap::new();
    let mut visits: u64 = 0;
    if e < g {
        return Ok(Vec::new());
    }
    let b = e - g;
    if b > 250 {
        return Err(Error::InvalidInput("too many black vertices".into()));
    }
    // Leg counts per vertex (special first), then loop count at the special
    // vertex, then star-bundle and black-bundle multiplicities.
    for legcounts in compositions(n, b + 1) {
        for loops in 0..=e {
            let rem = e - loops;
            let mut m0 = vec![0usize; b];
            enumerate_star_bundles(
                shape, g, n, e, variant, budget, &mut visits, &mut found, &legcounts, loops, rem,
                0, &mut m0,
            )?;
        }
    }
    Ok(found.into_values().collect())
}

/// Recursion over star-bundle multiplicities `m0[v]`.
#[allow(clippy::too_many_arguments)]
fn enumerate_star_bundles(
    shape: &MarkShape,
    g: usize,
    n: usize,
    e: usize,
    variant: Variant,
    budget: &Budget,
    visits: &mut u64,
    found: &mut BTreeMap<Vec<u32>, ClassEntry>,
    legcounts: &[usize],
    loops: usize,
    rem: usize,
    v: usize,
    m0: &mut Vec<usize>,
) -> Result<()> {
    let b = m0.len();
    if v == b {
        let pairs: Vec<(usize, usize)> = (1..=b)
            .flat_map(|u| ((u + 1)..=b).map(move |w| (u, w)))
            .collect();
        let mut mbb = vec![0usize; pairs.len()];
        return enumerate_black_bundles(
            shape, g, n, e, variant, budget, visits, found, legcounts, loops, m0, &pairs, rem, 0,
            &mut mbb,
        );
    }
    for mult in 0..=rem {
        m0[v] = mult;
        enumerate_star_bundles(
            shape,
            g,
            n,
            e,
            variant,
            budget,
            visits,
            found,
            legcounts,
            loops,
            rem - mult,
            v + 1,
            m0,
        )?;
    }
    m0[v] = 0;
    Ok(())
}

/// Recursion over black-bundle multiplicities, then assembly.
#[allow(clippy::too_many_arguments)]
fn enumerate_black_bundles(
    shape: &MarkShape,
    g: usize,
    n: usize,
    e: usize,
    variant: Variant,
    budget: &Budget,
    visits: &mut u64,
    found: &mut BTreeMap<Vec<u32>, ClassEntry>,
    legcounts: &[usize],
    loops: usize,
    m0: &[usize],
    pairs: &[(usize, usize)],
    rem: usize,
    idx: usize,
    mbb: &mut Vec<usize>,
) -> Result<()> {
    let b = m0.len();
    // Prune: unfinished vertices must still be able to reach valence 3.
    let valence = |v: usize, mbb: &[usize], upto: usize| -> usize {
        let mut val = m0[v - 1] + legcounts[v];
        for (i, &(x, y)) in pairs.iter().enumerate().take(upto) {
            if x == v || y == v {
                val += mbb[i];
            }
        }
        val
    };
    if idx == pairs.len() {
        if rem != 0 {
            return Ok(());
        }
        for v in 1..=b {
            if valence(v, mbb, pairs.len()) < 3 {
                return Ok(());
            }
        }
        // Labeled-duplicate filter: keep vertex orderings with non-increasing
        // sort keys; every class has at least one such labeling.
        let key = |v: usize| {
            (
                legcounts[v],
                m0[v - 1],
                valence(v, mbb, pairs.len()),
            )
        };
        if !(1..b).all(|v| key(v) >= key(v + 1)) {
            return Ok(());
        }
        return assemble(
            shape, g, n, e, variant, budget, visits, found, legcounts, loops, m0, pairs, mbb,
        );
    }
    // Completion prune: once all pairs touching vertex u are fixed, u's
    // valence is final.  Pair lists are lexicographic, so pairs touching u
    // end at the position of (u, b)'s successor... simpler: check when idx
    // passes the last pair containing u.
    for mult in 0..=rem {
        mbb[idx] = mult;
        let (x, y) = pairs[idx];
        // Vertex x is complete once we've just set its last pair (x, b).
        let mut feasible = true;
        if y == b {
            if valence(x, mbb, idx + 1) < 3 {
                feasible = false;
            }
        }
        if feasible {
            enumerate_black_bundles(
                shape,
                g,
                n,
                e,
                variant,
                budget,
                visits,
                found,
                legcounts,
                loops,
                m0,
                pairs,
                rem - mult,
                idx + 1,
                mbb,
            )?;
        }
    }
    mbb[idx] = 0;
    Ok(())
}

/// Assembles concrete decorated graphs for one multiplicity structure:
/// connectivity and slot-count checks, then leg labelings and mark
/// distributions, canonicalization and deduplication.
#[allow(clippy::too_many_arguments)]
fn assemble(
    shape: &MarkShape,
    _g: usize,
    n: usize,
    _e: usize,
    variant: Variant,
    budget: &Budget,
    visits: &mut u64,
    found: &mut BTreeMap<Vec<u32>, ClassEntry>,
    legcounts: &[usize],
    loops: usize,
    m0: &[usize],
    pairs: &[(usize, usize)],
    mbb: &[usize],
) -> Result<()> {
    let b = m0.len();
    // Connectivity.
    let mut uf = UnionFind::new(b + 1);
    for (v, &m) in m0.iter().enumerate() {
        if m > 0 {
            uf.union(0, v + 1);
        }
    }
    for (i, &(u, v)) in pairs.iter().enumerate() {
        if mbb[i] > 0 {
            uf.union(u, v);
        }
    }
    {
        let root = uf.find(0);
        if !(0..=b).all(|v| uf.find(v) == root) {
            return Ok(());
        }
    }
    let star_edge_halves = 2 * loops + m0.iter().sum::<usize>();
    if star_edge_halves + legcounts[0] < shape.min_slots {
        return Ok(());
    }
    // Edge list skeleton: loops first, then star bundles, then black bundles.
    let mut edges: Vec<(u8, u8)> = Vec::new();
    for _ in 0..loops {
        edges.push((0, 0));
    }
    let mut star_bundle_edges: Vec<Vec<u16>> = vec![Vec::new(); b];
    for (v, &m) in m0.iter().enumerate() {
        for _ in 0..m {
            star_bundle_edges[v].push(edges.len() as u16);
            edges.push((0, v as u8 + 1));
        }
    }
    for (i, &(u, v)) in pairs.iter().enumerate() {
        for _ in 0..mbb[i] {
            edges.push((u as u8, v as u8));
        }
    }
    // Leg labelings.
    let labels: Vec<u8> = (0..n as u8).collect();
    for legs in leg_assignments(&labels, legcounts) {
        let star_legs: Vec<u8> = legs
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v == 0)
            .map(|(l, _)| l as u8)
            .collect();
        for marks in mark_distributions(shape, loops, &star_bundle_edges, &star_legs) {
            *visits += 1;
            if *visits > budget.max_visits {
                return Err(Error::BudgetExhausted(format!(
                    "enumeration visited more than {} labeled graphs ({} classes so far)",
                    budget.max_visits,
                    found.len()
                )));
            }
            let graph = Graph {
                blacks: b as u8,
                edges: edges.clone(),
                legs: legs.clone(),
                marks,
            };
            let canon = canonicalize(&graph)?;
            if found.contains_key(&canon.key) {
                continue;
            }
            if variant == Variant::Star && shape.subset_mode() && !star_condition(&canon.graph) {
                continue;
            }
            let auts = automorphism_generators(&canon.graph)?;
            let quick = quick_null(&canon.graph, &auts, shape.subset_mode());
            found.insert(
                canon.key.clone(),
                ClassEntry {
                    key: canon.key,
                    graph: canon.graph,
                    auts,
                    quick_null: quick,
                },
            );
            if found.len() > budget.max_classes {
                return Err(Error::BudgetExhausted(format!(
                    "enumeration exceeded {} classes",
                    budget.max_classes
                )));
            }
        }
    }
    Ok(())
}

/// All vectors of `parts` nonnegative integers summing to `total`.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All ways to attach the given labels to vertices with the given counts
/// (index 0 = special vertex).  Returns `legs` vectors.
fn leg_assignments(labels: &[u8], counts: &[usize]) -> Vec<Vec<u8>> {
    fn rec(remaining: &[u8], counts: &[usize], vertex: usize, acc: &mut Vec<(u8, u8)>, out: &mut Vec<Vec<(u8, u8)>>) {
        if vertex == counts.len() {
            if remaining.is_empty() {
                out.push(acc.clone());
            }
            return;
        }
        let c = counts[vertex];
        if c > remaining.len() {
            return;
        }
        for combo in combinations(remaining.len(), c) {
            let chosen: Vec<u8> = combo.iter().map(|&i| remaining[i]).collect();
            let rest: Vec<u8> = remaining
                .iter()
                .enumerate()
                .filter(|&(i, _)| !combo.contains(&i))
                .map(|(_, &l)| l)
                .collect();
            for &l in &chosen {
                acc.push((l, vertex as u8));
            }
            rec(&rest, counts, vertex + 1, acc, out);
            for _ in &chosen {
                acc.pop();
            }
        }
    }
    let mut raw = Vec::new();
    rec(labels, counts, 0, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|pairs| {
            let mut legs = vec![0u8; labels.len()];
            for (label, v) in pairs {
                legs[label as usize] = v;
            }
            legs
        })
        .collect()
}

/// All index subsets of `{0..n}` of size `k`.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All mark assignments consistent with the shape, enumerated at bundle
/// level (per-bundle color counts, per-loop color pairs, per-leg colors).
fn mark_distributions(
    shape: &MarkShape,
    loops: usize,
    star_bundles: &[Vec<u16>],
    star_legs: &[u8],
) -> Vec<Vec<(Slot, u8)>> {
    let k = shape.class_sizes.len();
    if k == 0 {
        return vec![Vec::new()];
    }
    // State: remaining marks per color (1-based colors at index c-1).
    let mut results = Vec::new();
    // Enumerate loop color-pair multisets: pair types (hi, lo) with hi ≥ lo,
    // colors in 0..=k, in descending type order.
    let mut pair_types: Vec<(u8, u8)> = Vec::new();
    for hi in (0..=k as u8).rev() {
        for lo in (0..=hi).rev() {
            pair_types.push((hi, lo));
        }
    }
    #[allow(clippy::too_many_arguments)]
    fn rec_loops(
        types: &[(u8, u8)],
        ti: usize,
        left: usize,
        acc: &mut Vec<(u8, u8)>,
        remaining: &mut Vec<usize>,
        shape: &MarkShape,
        star_bundles: &[Vec<u16>],
        star_legs: &[u8],
        loops: usize,
        results: &mut Vec<Vec<(Slot, u8)>>,
    ) {
        if left == 0 || ti == types.len() {
            if left != 0 {
                return;
            }
            rec_bundles(
                0,
                &mut Vec::new(),
                remaining,
                acc,
                shape,
                star_bundles,
                star_legs,
                loops,
                results,
            );
            return;
        }
        let (hi, lo) = types[ti];
        let max_count = left;
        for count in 0..=max_count {
            // Check color budget.
            let mut ok = true;
            let mut used: Vec<usize> = vec![0; remaining.len()];
            for c in [hi, lo] {
                if c > 0 {
                    used[c as usize - 1] += count;
                }
            }
            for (c, &u) in used.iter().enumerate() {
                if u > remaining[c] {
                    ok = false;
                }
            }
            if !ok {
                continue;
            }
            for (c, &u) in used.iter().enumerate() {
                remaining[c] -= u;
            }
            for _ in 0..count {
                acc.push((hi, lo));
            }
            rec_loops(
                types,
                ti + 1,
                left - count,
                acc,
                remaining,
                shape,
                star_bundles,
                star_legs,
                loops,
                results,
            );
            for _ in 0..count {
                acc.pop();
            }
            for (c, &u) in used.iter().enumerate() {
                remaining[c] += u;
            }
        }
    }
    /// Per star-bundle color counts, then legs, then materialization.
    #[allow(clippy::too_many_arguments)]
    fn rec_bundles(
        bi: usize,
        bundle_counts: &mut Vec<Vec<usize>>,
        remaining: &mut Vec<usize>,
        loop_pairs: &Vec<(u8, u8)>,
        shape: &MarkShape,
        star_bundles: &[Vec<u16>],
        star_legs: &[u8],
        loops: usize,
        results: &mut Vec<Vec<(Slot, u8)>>,
    ) {
        let k = remaining.len();
        if bi == star_bundles.len() {
            rec_legs(
                0,
                &mut Vec::new(),
                remaining,
                loop_pairs,
                bundle_counts,
                shape,
                star_bundles,
                star_legs,
                loops,
                results,
            );
            return;
        }
        let m = star_bundles[bi].len();
        // counts[c] marks of color c+1 in this bundle, total ≤ m.
        fn rec_counts(
            c: usize,
            m_left: usize,
            counts: &mut Vec<usize>,
            remaining: &mut Vec<usize>,
            done: &mut dyn FnMut(&Vec<usize>, &mut Vec<usize>),
        ) {
            if c == counts.len() {
                done(counts, remaining);
                return;
            }
            for take in 0..=m_left.min(remaining[c]) {
                counts[c] = take;
                remaining[c] -= take;
                rec_counts(c + 1, m_left - take, counts, remaining, done);
                remaining[c] += take;
            }
            counts[c] = 0;
        }
        let mut counts = vec![0usize; k];
        // Rust note: recursion via closure needs dynamic dispatch here.
        let mut bundle_counts_local = std::mem::take(bundle_counts);
        {
            let mut done = |counts: &Vec<usize>, remaining: &mut Vec<usize>| {
                bundle_counts_local.push(counts.clone());
                rec_bundles(
                    bi + 1,
                    &mut bundle_counts_local,
                    remaining,
                    loop_pairs,
                    shape,
                    star_bundles,
                    star_legs,
                    loops,
                    results,
                );
                bundle_counts_local.pop();
            };
            rec_counts(0, m, &mut counts, remaining, &mut done);
        }
        *bundle_counts = bundle_counts_local;
    }
    #[allow(clippy::too_many_arguments)]
    fn rec_legs(
        li: usize,
        leg_colors: &mut Vec<u8>,
        remaining: &mut Vec<usize>,
        loop_pairs: &Vec<(u8, u8)>,
        bundle_counts: &Vec<Vec<usize>>,
        shape: &MarkShape,
        star_bundles: &[Vec<u16>],
        star_legs: &[u8],
        loops: usize,
        results: &mut Vec<Vec<(Slot, u8)>>,
    ) {
        if li == star_legs.len() {
            if remaining.iter().any(|&r| r != 0) {
                return;
            }
            // Materialize.
            let mut marks: Vec<(Slot, u8)> = Vec::new();
            for (loop_idx, &(hi, lo)) in loop_pairs.iter().enumerate() {
                let e = loop_idx as u16;
                if hi > 0 {
                    marks.push((Slot::Half { edge: e, end: 0 }, hi));
                }
                if lo > 0 {
                    marks.push((Slot::Half { edge: e, end: 1 }, lo));
                }
            }
            debug_assert_eq!(loop_pairs.len(), loops);
            for (bi, counts) in bundle_counts.iter().enumerate() {
                let mut slot_iter = star_bundles[bi].iter();
                for (c, &count) in counts.iter().enumerate() {
                    for _ in 0..count {
                        let &edge = slot_iter.next().expect("bundle capacity checked");
                        marks.push((Slot::Half { edge, end: 0 }, c as u8 + 1));
                    }
                }
            }
            for (li, &label) in star_legs.iter().enumerate() {
                let c = leg_colors[li];
                if c > 0 {
                    marks.push((Slot::Leg { label }, c));
                }
            }
            marks.sort();
            results.push(marks);
            return;
        }
        let k = remaining.len();
        for c in 0..=k as u8 {
            if c > 0 {
                if remaining[c as usize - 1] == 0 {
                    continue;
                }
                remaining[c as usize - 1] -= 1;
            }
            leg_colors.push(c);
            rec_legs(
                li + 1,
                leg_colors,
                remaining,
                loop_pairs,
                bundle_counts,
                shape,
                star_bundles,
                star_legs,
                loops,
                results,
            );
            leg_colors.pop();
            if c > 0 {
                remaining[c as usize - 1] += 1;
            }
        }
    }
    let mut remaining = shape.class_sizes.clone();
    rec_loops(
        &pair_types,
        0,
        loops,
        &mut Vec::new(),
        &mut remaining,
        shape,
        star_bundles,
        star_legs,
        loops,
        &mut results,
    );
    // Bundle capacity check happened implicitly through rec_counts (take ≤
    // m_left); over-capacity color counts never materialize.
    results
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn half(edge: u16, end: u8) -> Slot {
        Slot::Half { edge, end }
    }
    fn leg(label: u8) -> Slot {
        Slot::Leg { label }
    }

    /// Star vertex with two marked legs: the unique degree-0 generator for a
    /// two-element subset decoration at genus 0 with two legs.
    fn two_marked_legs() -> Graph {
        Graph {
            blacks: 0,
            edges: vec![],
            legs: vec![0, 0],
            marks: vec![(leg(0), 1), (leg(1), 1)],
        }
    }

    /// The double-edge example: star–v1 edge, doubled v1–v2 edge, legs on
    /// v1 and v2; the special half is marked.
    fn double_edge() -> Graph {
        Graph {
            blacks: 2,
            edges: vec![(0, 1), (1, 2), (1, 2)],
            legs: vec![1, 2],
            marks: vec![(half(0, 0), 1)],
        }
    }

    /// Worked blow-up example: three black vertices in a path, each joined
    /// to the special vertex by a marked edge; legs 1, 2 on the outer black
    /// vertices; legs 3, 4 unmarked on the special vertex.
    fn worked_example() -> Graph {
        Graph {
            blacks: 3,
            edges: vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)],
            legs: vec![2, 3, 0, 0],
            marks: vec![(half(0, 0), 1), (half(1, 0), 1), (half(2, 0), 1)],
        }
    }

    #[test]
    fn slot_order_puts_edge_halves_before_legs() {
        let g = Graph {
            blacks: 1,
            edges: vec![(0, 0), (0, 1), (0, 1)],
            legs: vec![0],
            marks: vec![],
        };
        assert_eq!(
            g.estar_slots(),
            vec![half(0, 0), half(0, 1), half(1, 0), half(2, 0), leg(0)]
        );
    }

    #[test]
    fn validate_rejects_black_loop_and_bad_marks() {
        let mut g = two_marked_legs();
        assert!(g.validate().is_ok());
        g.marks = vec![(half(5, 0), 1)];
        assert!(g.validate().is_err());
        let h = Graph {
            blacks: 1,
            edges: vec![(1, 1)],
            legs: vec![],
            marks: vec![],
        };
        assert!(h.validate().is_err());
    }

    #[test]
    fn worked_example_blow_up_matches_figure() {
        let g = worked_example();
        assert!(g.validate().is_ok());
        assert_eq!(g.genus(), 2);
        let comps = blow_up(&g);
        assert_eq!(comps.len(), 3);
        let vertexful: Vec<&BlownComponent> = comps
            .iter()
            .filter(|c| c.kind() == ComponentKind::Vertexful)
            .collect();
        assert_eq!(vertexful.len(), 1);
        let c = vertexful[0];
        assert_eq!(c.blacks, 3);
        assert_eq!(c.omega(), 3);
        assert_eq!(c.epsilon(), 0);
        assert_eq!(c.numbered_legs(), 2);
        assert_eq!(c.betti(), 0);
        assert_eq!(c.excess(), 4);
        let mark_legs: Vec<&BlownComponent> = comps
            .iter()
            .filter(|c| c.kind() == ComponentKind::MarkLeg)
            .collect();
        assert_eq!(mark_legs.len(), 2);
        for ml in mark_legs {
            assert_eq!(ml.omega(), 0);
            assert_eq!(ml.epsilon(), 1);
            assert_eq!(ml.excess(), 2);
        }
        // Excess identity: 3g + 2n − 2N = 6 + 8 − 6 = 8.
        let total: i64 = comps.iter().map(|c| c.excess()).sum();
        assert_eq!(total, 8);
    }

    #[test]
    fn excess_of_special_loop_components() {
        // Marked–marked loop: −1; marked–unmarked: 1; unmarked–unmarked: 3.
        let mk = |marks: Vec<(Slot, u8)>| Graph {
            blacks: 0,
            edges: vec![(0, 0)],
            legs: vec![],
            marks,
        };
        let cases = [
            (vec![(half(0, 0), 1), (half(0, 1), 1)], -1),
            (vec![(half(0, 0), 1)], 1),
            (vec![], 3),
        ];
        for (marks, want) in cases {
            let comps = blow_up(&mk(marks));
            assert_eq!(comps.len(), 1);
            assert_eq!(comps[0].kind(), ComponentKind::MarkEdge);
            assert_eq!(comps[0].excess(), want);
        }
        // Trivalent vertex with three marked star edges: 0.
        let tripod = Graph {
            blacks: 1,
            edges: vec![(0, 1), (0, 1), (0, 1)],
            legs: vec![],
            marks: vec![(half(0, 0), 1), (half(1, 0), 1), (half(2, 0), 1)],
        };
        let comps = blow_up(&tripod);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].excess(), 0);
        // Marked singleton leg: 0; unmarked singleton leg: 2.
        let lg = |marks: Vec<(Slot, u8)>| Graph {
            blacks: 0,
            edges: vec![],
            legs: vec![0],
            marks,
        };
        assert_eq!(blow_up(&lg(vec![(leg(0), 1)]))[0].excess(), 0);
        assert_eq!(blow_up(&lg(vec![]))[0].excess(), 2);
    }

    #[test]
    fn blow_up_of_legs_only_generator_gives_singletons() {
        let g = two_marked_legs();
        let comps = blow_up(&g);
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.kind() == ComponentKind::MarkLeg));
    }

    #[test]
    fn reattach_inverts_blow_up_on_samples() {
        let samples = [two_marked_legs(), double_edge(), worked_example()];
        for g in samples {
            let back = reattach(&blow_up(&g));
            assert_eq!(
                canonicalize(&back).unwrap().key,
                canonicalize(&g).unwrap().key
            );
        }
    }

    #[test]
    fn double_black_edge_is_quick_null() {
        let g = double_edge();
        let canon = canonicalize(&g).unwrap();
        let auts = automorphism_generators(&canon.graph).unwrap();
        assert!(quick_null(&canon.graph, &auts, true));
    }

    #[test]
    fn canonical_key_invariant_under_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let samples = sample_graphs();
        let mut checked = 0;
        for g in &samples {
            let base = canonicalize(g).unwrap();
            for _ in 0..1000usize.div_ceil(samples.len()) {
                let shuffled = random_relabel(g, &mut rng);
                let canon = canonicalize(&shuffled).unwrap();
                assert_eq!(canon.key, base.key, "relabeling changed the key of {g}");
                checked += 1;
            }
        }
        assert!(checked >= 1000, "checked {checked} relabelings");
    }

    #[test]
    fn canonical_sign_tracks_edge_order_parity() {
        // On a graph whose edge records are pairwise distinct, permuting the
        // edge order flips the canonical sign by the permutation parity.
        let g = Graph {
            blacks: 2,
            edges: vec![(0, 1), (0, 2), (1, 2)],
            legs: vec![1, 1, 2, 2],
            marks: vec![(half(0, 0), 1)],
        };
        let base = canonicalize(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let mut order: Vec<usize> = (0..g.edges.len()).collect();
            order.shuffle(&mut rng);
            let parity = perm_sign(&order) as i8;
            let shuffled = permute_edges(&g, &order);
            let canon = canonicalize(&shuffled).unwrap();
            assert_eq!(canon.key, base.key);
            assert_eq!(canon.sign, parity * base.sign);
        }
    }

    #[test]
    fn automorphisms_preserve_marks_and_parity() {
        for g in sample_graphs() {
            let canon = canonicalize(&g).unwrap();
            let slots = canon.graph.estar_slots();
            for gen in automorphism_generators(&canon.graph).unwrap() {
                assert_eq!(
                    gen.sign,
                    if gen.edge_perm.is_empty() {
                        1
                    } else {
                        perm_sign(&gen.edge_perm) as i8
                    }
                );
                for (s, &t) in gen.estar_perm.iter().enumerate() {
                    assert_eq!(
                        canon.graph.mark(slots[s]),
                        canon.graph.mark(slots[t]),
                        "automorphism moved a mark to a different color"
                    );
                }
            }
        }
    }

    #[test]
    fn black_split_counts_match_partitions() {
        // A 4-valent black vertex splits in C(3,2) = 3 ways (both parts ≥ 2,
        // unordered).
        let g = Graph {
            blacks: 1,
            edges: vec![(0, 1), (0, 1), (0, 1), (0, 1)],
            legs: vec![],
            marks: vec![(half(0, 0), 1), (half(1, 0), 1)],
        };
        assert_eq!(black_splits(&g).len(), 3);
        // A trivalent vertex admits no split.
        let h = Graph {
            blacks: 1,
            edges: vec![(0, 1), (0, 1), (0, 1)],
            legs: vec![],
            marks: vec![],
        };
        assert!(black_splits(&h).is_empty());
    }

    #[test]
    fn star_split_prunes_double_marks_and_tadpoles() {
        // Slots: one unmarked star half of a loop would be a tadpole risk;
        // use two marked legs and one unmarked leg: subsets with ≥ 2 marks
        // die, so only {unmarked, marked} pairs and no triples survive.
        let g = Graph {
            blacks: 0,
            edges: vec![],
            legs: vec![0, 0, 0],
            marks: vec![(leg(0), 1), (leg(1), 1)],
        };
        let splits = star_splits(&g, true);
        assert_eq!(splits.len(), 2);
        // Tadpole: a loop with both halves unmarked may not move as a whole.
        let h = Graph {
            blacks: 0,
            edges: vec![(0, 0), (0, 0)],
            legs: vec![],
            marks: vec![(half(0, 0), 1), (half(0, 1), 1)],
        };
        // Slots: loop0 (marked, marked), loop1 (unmarked, unmarked).
        // Valid masks (≥2 slots, ≤1 mark, no whole loop): pairs of one
        // marked and one unmarked half (4), one marked half with both...
        // both unmarked halves form loop1 entirely -> tadpole, rejected.
        // Triples all contain either two marks or all of loop1.
        let splits = star_splits(&h, true);
        assert_eq!(splits.len(), 4);
        for s in &splits {
            assert!(s.graph.validate().is_ok());
            let cm = s.collapse.as_ref().unwrap();
            assert_eq!(cm.map.len(), 4);
            assert_eq!(cm.target_size, 3);
        }
    }

    #[test]
    fn star_split_moves_marks_through_the_collapse() {
        // One marked leg moved together with an unmarked leg: the new
        // special half inherits the color.
        let g = Graph {
            blacks: 0,
            edges: vec![],
            legs: vec![0, 0],
            marks: vec![(leg(0), 1)],
        };
        let splits = star_splits(&g, true);
        assert_eq!(splits.len(), 1);
        let t = &splits[0].graph;
        assert_eq!(t.blacks, 1);
        assert_eq!(t.edges, vec![(0, 1)]);
        assert_eq!(t.legs, vec![1, 1]);
        assert_eq!(t.marks, vec![(half(0, 0), 1)]);
    }

    #[test]
    fn enumerate_two_marked_legs_is_unique_degree_zero_generator() {
        let shape = MarkShape::subsets(&[2]);
        let classes = enumerate(&shape, 0, 2, 0, Variant::Full, &Budget::default()).unwrap();
        assert_eq!(classes.len(), 1);
        assert!(!classes[0].quick_null);
        assert_eq!(
            classes[0].graph,
            canonicalize(&two_marked_legs()).unwrap().graph
        );
        // Degree beyond the bound 3g+n−N = 0 is empty.
        for e in 1..4 {
            let classes = enumerate(&shape, 0, 2, e, Variant::Full, &Budget::default()).unwrap();
            assert!(classes.is_empty(), "degree {e} should be empty");
        }
    }

    #[test]
    fn enumerate_small_complex_by_hand() {
        // Single-mark decoration, g = 1, n = 1: degrees 1..3.
        let shape = MarkShape::subsets(&[1]);
        let by_degree: Vec<Vec<ClassEntry>> = (0..=4)
            .map(|e| enumerate(&shape, 1, 1, e, Variant::Full, &Budget::default()).unwrap())
            .collect();
        assert_eq!(by_degree[0].len(), 0);
        // e=1: loop at star with leg at star; mark either a loop half or the
        // leg.
        assert_eq!(by_degree[1].len(), 2);
        assert!(by_degree[1].iter().all(|c| !c.quick_null));
        // e=2: doubled star–black edge, leg on the black vertex, one half
        // marked.
        assert_eq!(by_degree[2].len(), 1);
        assert!(!by_degree[2][0].quick_null);
        // e=3: doubled black–black edge graph, quick-null.
        assert_eq!(by_degree[3].len(), 1);
        assert!(by_degree[3][0].quick_null);
        assert_eq!(by_degree[4].len(), 0);
    }

    #[test]
    fn enumerate_respects_bookkeeping_invariants() {
        let shape = MarkShape::subsets(&[2]);
        for g in 0..3 {
            for n in 0..3 {
                for e in 0..=(3 * g + n) {
                    let Ok(classes) =
                        enumerate(&shape, g, n, e, Variant::Full, &Budget::default())
                    else {
                        continue;
                    };
                    for c in &classes {
                        let gr = &c.graph;
                        assert!(gr.validate().is_ok());
                        assert!(gr.is_connected());
                        assert_eq!(gr.genus(), g);
                        assert_eq!(gr.degree(), e);
                        assert_eq!(gr.blacks as usize, e - g);
                        assert_eq!(gr.legs.len(), n);
                        // 2e + n ≥ 3·blacks + valence(*)
                        assert!(
                            2 * e + n >= 3 * (gr.blacks as usize) + gr.valence(0),
                            "valence bookkeeping violated by {gr}"
                        );
                        for v in 1..=gr.blacks {
                            assert!(gr.valence(v) >= 3);
                        }
                        // Degree bound via slot count.
                        assert!(gr.estar_slots().len() >= 2);
                        // Excess identity: Σ excess = 3g + 2n − 2N.
                        let total: i64 = blow_up(gr).iter().map(|c| c.excess()).sum();
                        assert_eq!(total, 3 * g as i64 + 2 * n as i64 - 4);
                    }
                }
            }
        }
    }

    #[test]
    fn enumerate_degree_bound_is_sharp_enough() {
        // Beyond e = 3g + n − N the list is empty.
        let shape = MarkShape::subsets(&[1]);
        for g in 0..3 {
            for n in 0..3 {
                let bound = 3 * g + n;
                if bound < 1 {
                    continue;
                }
                let e = bound; // 3g + n − N with N = 1
                let beyond = enumerate(&shape, g, n, e + 1, Variant::Full, &Budget::default())
                    .unwrap();
                assert!(beyond.is_empty(), "g={g} n={n} e={}", e + 1);
            }
        }
    }

    #[test]
    fn star_variant_is_a_subset_of_full() {
        let shape = MarkShape::subsets(&[2]);
        for (g, n, e) in [(1, 2, 2), (1, 2, 3), (2, 1, 3)] {
            let full = enumerate(&shape, g, n, e, Variant::Full, &Budget::default()).unwrap();
            let star = enumerate(&shape, g, n, e, Variant::Star, &Budget::default()).unwrap();
            let full_keys: Vec<&Vec<u32>> = full.iter().map(|c| &c.key).collect();
            assert!(star.len() <= full.len());
            for c in &star {
                assert!(full_keys.contains(&&c.key));
                assert!(star_condition(&c.graph));
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let shape = MarkShape::subsets(&[1]);
        let tiny = Budget {
            max_classes: 1000,
            max_visits: 0,
        };
        let err = enumerate(&shape, 1, 1, 2, Variant::Full, &tiny).unwrap_err();
        assert!(matches!(err, Error::BudgetExhausted(_)));
    }

    #[test]
    fn plain_shape_enumerates_unmarked_graphs() {
        // Whole-space decorations: same skeletons, no marks; minimum slot
        // count filters.
        let shape = MarkShape::plain(2);
        let classes = enumerate(&shape, 1, 0, 1, Variant::Full, &Budget::default()).unwrap();
        // Single loop at the star vertex; both slots unmarked.
        assert_eq!(classes.len(), 1);
        assert!(classes[0].graph.marks.is_empty());
        // The loop flip generator is present (whole-space decorations see
        // it).
        assert!(classes[0]
            .auts
            .iter()
            .any(|a| a.sign == 1 && a.estar_perm == vec![1, 0]));
    }

    // -- helpers ------------------------------------------------------------

    fn sample_graphs() -> Vec<Graph> {
        let mut out = vec![two_marked_legs(), double_edge(), worked_example()];
        // Add enumerated classes from a few parameter points.
        let shape = MarkShape::subsets(&[2]);
        for (g, n, e) in [(1usize, 1usize, 2usize), (1, 2, 2), (2, 0, 3)] {
            if let Ok(classes) = enumerate(&shape, g, n, e, Variant::Full, &Budget::default()) {
                out.extend(classes.into_iter().map(|c| c.graph));
            }
        }
        out
    }

    fn permute_edges(g: &Graph, order: &[usize]) -> Graph {
        // order[new position] = old edge index? Use: new edge list where
        // edge at new index i is old edges[order[i]]; marks re-keyed.
        let mut old_to_new = vec![0u16; order.len()];
        for (new, &old) in order.iter().enumerate() {
            old_to_new[old] = new as u16;
        }
        let edges: Vec<(u8, u8)> = order.iter().map(|&i| g.edges[i]).collect();
        let mut marks: Vec<(Slot, u8)> = g
            .marks
            .iter()
            .map(|&(slot, c)| match slot {
                Slot::Half { edge, end } => (
                    Slot::Half {
                        edge: old_to_new[edge as usize],
                        end,
                    },
                    c,
                ),
                lg => (lg, c),
            })
            .collect();
        marks.sort();
        Graph {
            blacks: g.blacks,
            edges,
            legs: g.legs.clone(),
            marks,
        }
    }

    fn random_relabel(g: &Graph, rng: &mut ChaCha8Rng) -> Graph {
        // Random black permutation.
        let b = g.blacks as usize;
        let mut pi: Vec<u8> = (1..=b as u8).collect();
        pi.shuffle(rng);
        let map = |v: u8| if v == 0 { 0 } else { pi[v as usize - 1] };
        let mut edges: Vec<(u8, u8)> = g
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (map(u), map(v));
                (a.min(b), a.max(b))
            })
            .collect();
        // Random edge order.
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.shuffle(rng);
        let mut old_to_new = vec![0u16; order.len()];
        for (new, &old) in order.iter().enumerate() {
            old_to_new[old] = new as u16;
        }
        edges = order.iter().map(|&i| edges[i]).collect();
        // Random loop flips.
        let mut flip = vec![false; edges.len()];
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u == 0 && v == 0 {
                flip[i] = rng.gen_bool(0.5);
            }
        }
        let legs: Vec<u8> = g.legs.iter().map(|&v| map(v)).collect();
        let mut marks: Vec<(Slot, u8)> = g
            .marks
            .iter()
            .map(|&(slot, c)| match slot {
                Slot::Half { edge, end } => {
                    let ne = old_to_new[edge as usize];
                    let end = if flip[ne as usize] { 1 - end } else { end };
                    (Slot::Half { edge: ne, end }, c)
                }
                lg => (lg, c),
            })
            .collect();
        marks.sort();
        Graph {
            blacks: g.blacks,
            edges,
            legs,
            marks,
        }
    }

    #[test]
    fn reattach_round_trips_on_500_random_generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let shape1 = MarkShape::subsets(&[2]);
        let shape2 = MarkShape::subsets(&[1, 1]);
        let mut pool: Vec<Graph> = Vec::new();
        for shape in [&shape1, &shape2] {
            for g in 0..3usize {
                for n in 0..3usize {
                    for e in 0..=(3 * g + n).min(4) {
                        if let Ok(classes) =
                            enumerate(shape, g, n, e, Variant::Full, &Budget::default())
                        {
                            pool.extend(classes.into_iter().map(|c| c.graph));
                        }
                    }
                }
            }
        }
        assert!(pool.len() >= 40, "pool has {} graphs", pool.len());
        for i in 0..500 {
            let g = &pool[i % pool.len()];
            let shuffled = random_relabel(g, &mut rng);
            let back = reattach(&blow_up(&shuffled));
            assert_eq!(
                canonicalize(&back).unwrap().key,
                canonicalize(&shuffled).unwrap().key
            );
        }
    }
}
