//! Equivariant Euler characteristics from closed-form generating functions.
//!
//! The alternating sum of the equivariant cohomology of a decorated graph
//! complex admits a closed form: it is a coefficient extraction from a finite
//! product of explicit truncated Laurent series.  Evaluating that product is
//! dramatically cheaper than building any cochain space, which makes these
//! tables both a fast bulk computation and an independent cross-check of the
//! linear-algebra pipeline in [`crate::homology`].
//!
//! # Series model
//!
//! Everything lives in the ring of Laurent series in one variable `u`
//! (tracking genus plus marking arity) whose coefficients are polynomials in
//! power sums `p_1..p_D` (tracking the symmetric-group action on markings)
//! and auxiliary variables `w_1..w_k` (tracking the weight each column of the
//! decoration contributes).  All three gradings are capped up front — `u` by
//! the requested truncation order, the `p`-weight by the largest marking
//! arity wanted, and each `w_i` by one more than the largest exponent ever
//! extracted — so every arithmetic operation is finite and exact.
//!
//! For a tuple of column sizes `(a_1..a_k)` the generating function is
//!
//! ```text
//! sum_{g,n} u^{g+n} chi_{S_n} = (-1)^{a_1+..+a_k} * [w_1^{a_1}..w_k^{a_k}]
//!     ( prod_{l >= 1} U_l(X_1) / U_l(X_0)  -  1 )
//! ```
//!
//! where, per factor `l`, `X_1 = (1/l) sum_{d|l} mu(l/d) (-p_d + 1 - sum_i w_i^d)`,
//! `X_0 = (1/l) sum_{d|l} mu(l/d) (-p_d)`, and `log U_l` is assembled from a
//! Stirling-type expansion:
//!
//! ```text
//! log U_l(X) = X (log(lambda_l E_l) - 1)
//!            + (-E_l + X - 1/2) log(1 - X / E_l)
//!            + B(-E_l + X) - B(-E_l)
//! ```
//!
//! with `E_l = (1/l) sum_{d|l} mu(l/d) u^{-d}`, `lambda_l = l u^l (1 - u^l)`,
//! and `B(z) = sum_{r>=2} B_r / (r (r-1)) z^{-(r-1)}` the Bernoulli tail.
//! The factor for index `l` differs from 1 only in `u`-order `>= l/2`, so a
//! truncation at `u^T` needs exactly the factors `l <= 2T`.
//!
//! # Scalars
//!
//! The engine is generic over its coefficient field.  The exact-rational
//! instantiation is the reference; production extractions run the whole
//! pipeline twice over two independent 62-bit prime fields and reconstruct
//! the (provably integral) Schur multiplicities by the Chinese remainder
//! theorem, failing loudly if the reconstruction is implausibly large.  The
//! two instantiations are equality-tested against each other in the test
//! suite.

use crate::homology::{bigint_mod, inv_mod, mul_mod, rank_primes};
use crate::sym::{character, partitions, Partition};
use crate::{rat, ratio, Error, Rat, Result};
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

// ---------------------------------------------------------------------------
// Scalars: exact rationals and 62-bit prime fields
// ---------------------------------------------------------------------------

/// Coefficient field abstraction for the series engine.  `Ctx` carries
/// whatever runtime data the field needs (the modulus for prime fields,
/// nothing for rationals).
pub(crate) trait Scalar: Clone + PartialEq + std::fmt::Debug {
    type Ctx: Clone;
    fn zero_of(cx: &Self::Ctx) -> Self;
    fn one_of(cx: &Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, o: &Self, cx: &Self::Ctx);
    fn mul(&self, o: &Self, cx: &Self::Ctx) -> Self;
    fn neg(&self, cx: &Self::Ctx) -> Self;
    fn inv(&self, cx: &Self::Ctx) -> Option<Self>;
    fn of_rat(r: &Rat, cx: &Self::Ctx) -> Self;
    fn of_i64(x: i64, cx: &Self::Ctx) -> Self {
        Self::of_rat(&rat(x), cx)
    }
}

impl Scalar for Rat {
    type Ctx = ();
    fn zero_of(_: &()) -> Self {
        Rat::zero()
    }
    fn one_of(_: &()) -> Self {
        rat(1)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign(&mut self, o: &Self, _: &()) {
        *self += o;
    }
    fn mul(&self, o: &Self, _: &()) -> Self {
        self * o
    }
    fn neg(&self, _: &()) -> Self {
        -self
    }
    fn inv(&self, _: &()) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(rat(1) / self)
        }
    }
    fn of_rat(r: &Rat, _: &()) -> Self {
        r.clone()
    }
}

/// Element of the prime field `Z/p`; the modulus travels in the context.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) struct Mod64(u64);

impl Scalar for Mod64 {
    type Ctx = u64;
    fn zero_of(_: &u64) -> Self {
        Mod64(0)
    }
    fn one_of(_: &u64) -> Self {
        Mod64(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add_assign(&mut self, o: &Self, p: &u64) {
        self.0 = (self.0 + o.0) % p;
    }
    fn mul(&self, o: &Self, p: &u64) -> Self {
        Mod64(mul_mod(self.0, o.0, *p))
    }
    fn neg(&self, p: &u64) -> Self {
        Mod64(if self.0 == 0 { 0 } else { p - self.0 })
    }
    fn inv(&self, p: &u64) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(Mod64(inv_mod(self.0, *p)))
        }
    }
    fn of_rat(r: &Rat, p: &u64) -> Self {
        let num = bigint_mod(r.numer(), *p);
        let den = bigint_mod(r.denom(), *p);
        let deninv = inv_mod(den, *p);
        debug_assert!(den != 0, "denominator divisible by a 62-bit rank prime");
        Mod64(mul_mod(num, deninv, *p))
    }
}

/// Reconstruct a signed integer from residues modulo two distinct primes,
/// mapped into the symmetric range around zero.
fn crt_signed(r1: u64, p1: u64, r2: u64, p2: u64) -> i128 {
    let diff = (r2 + p2 - r1 % p2) % p2;
    let t = mul_mod(diff, inv_mod(p1 % p2, p2), p2);
    let x = r1 as u128 + p1 as u128 * t as u128;
    let m = p1 as u128 * p2 as u128;
    if x > m / 2 {
        x as i128 - m as i128
    } else {
        x as i128
    }
}

// ---------------------------------------------------------------------------
// Elementary number theory
// ---------------------------------------------------------------------------

fn divisors(n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

/// Moebius function by trial-division factorisation.
fn moebius(mut n: usize) -> i64 {
    debug_assert!(n >= 1);
    let mut primes = 0;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            primes += 1;
        }
        d += 1;
    }
    if n > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Bernoulli numbers `B_0..B_max` (convention `B_1 = -1/2`), by the standard
/// recurrence `sum_{j<=m} C(m+1, j) B_j = 0`.
fn bernoulli_numbers(max: usize) -> Vec<Rat> {
    let mut b = vec![Rat::zero(); max + 1];
    b[0] = rat(1);
    for m in 1..=max {
        let mut acc = Rat::zero();
        let mut binom = rat(1); // C(m+1, 0)
        for (j, bj) in b.iter().enumerate().take(m) {
            acc += &binom * bj;
            binom *= ratio((m + 1 - j) as i64, (j + 1) as i64);
        }
        b[m] = -acc / rat(m as i64 + 1);
    }
    b
}

// ---------------------------------------------------------------------------
// Capped monomial table
// ---------------------------------------------------------------------------

const MISSING: u32 = u32::MAX;
/// Upper bound on the number of retained monomials; the multiplication table
/// is quadratic in this.
const MAX_TABLE: usize = 4500;

/// All monomials `w_1^{b_1}..w_k^{b_k} p_1^{e_1}..p_D^{e_D}` with `b_i`
/// within per-variable caps and `sum d*e_d` within the weight cap, together
/// with a precomputed multiplication table (product index, or [`MISSING`]
/// when the product leaves the caps — such terms can never influence a
/// retained coefficient, so dropping them is exact).
pub(crate) struct MonoTable {
    k: usize,
    wcaps: Vec<u16>,
    pweight: usize,
    monos: Vec<Vec<u16>>,
    mul: Vec<u32>,
}

impl MonoTable {
    pub(crate) fn build(wcaps: &[u16], pweight: usize) -> Result<Arc<MonoTable>> {
        let k = wcaps.len();
        // Enumerate p-exponent vectors of weight <= pweight, empty vector first.
        let mut pvecs: Vec<Vec<u16>> = Vec::new();
        let mut cur = vec![0u16; pweight];
        fn walk(d: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
            if d > cur.len() {
                out.push(cur.clone());
                return;
            }
            for e in 0..=(left / d) {
                cur[d - 1] = e as u16;
                walk(d + 1, left - d * e, cur, out);
            }
            cur[d - 1] = 0;
        }
        walk(1, pweight, &mut cur, &mut pvecs);
        // w-exponent boxes, all-zero first.
        let mut wvecs: Vec<Vec<u16>> = vec![vec![]];
        for &cap in wcaps {
            let mut next = Vec::with_capacity(wvecs.len() * (cap as usize + 1));
            for b in 0..=cap {
                for v in &wvecs {
                    let mut v = v.clone();
                    v.push(b);
                    next.push(v);
                }
            }
            // Keep the all-zero vector first: order by exponent last.
            next.sort();
            wvecs = next;
        }
        let mut monos = Vec::with_capacity(wvecs.len() * pvecs.len());
        for w in &wvecs {
            for p in &pvecs {
                let mut m = w.clone();
                m.extend_from_slice(p);
                monos.push(m);
            }
        }
        let len = monos.len();
        if len > MAX_TABLE {
            return Err(Error::BudgetExhausted(format!(
                "monomial table needs {len} entries (cap {MAX_TABLE}); reduce the \
                 requested arity bound or extraction exponents"
            )));
        }
        let index: HashMap<Vec<u16>, u32> = monos
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();
        let mut mul = vec![MISSING; len * len];
        let mut key = vec![0u16; k + pweight];
        for i in 0..len {
            for j in i..len {
                let (a, b) = (&monos[i], &monos[j]);
                let mut ok = true;
                for t in 0..k + pweight {
                    key[t] = a[t] + b[t];
                    if t < k && key[t] > wcaps[t] {
                        ok = false;
                        break;
                    }
                }
                if ok && pvec_weight(&key[k..]) > pweight {
                    ok = false;
                }
                if ok {
                    let id = index[&key];
                    mul[i * len + j] = id;
                    mul[j * len + i] = id;
                }
            }
        }
        debug_assert!(monos[0].iter().all(|&e| e == 0));
        Ok(Arc::new(MonoTable {
            k,
            wcaps: wcaps.to_vec(),
            pweight,
            monos,
            mul,
        }))
    }

    fn len(&self) -> usize {
        self.monos.len()
    }

    fn id_of(&self, w: &[u16], p: &[u16]) -> Option<u32> {
        debug_assert_eq!(w.len(), self.k);
        let mut key = w.to_vec();
        key.extend_from_slice(p);
        key.resize(self.k + self.pweight, 0);
        self.monos.iter().position(|m| *m == key).map(|i| i as u32)
    }
}

fn pvec_weight(p: &[u16]) -> usize {
    p.iter()
        .enumerate()
        .map(|(i, &e)| (i + 1) * e as usize)
        .sum()
}

fn pvec_of_partition(mu: &Partition, pweight: usize) -> Vec<u16> {
    let mut v = vec![0u16; pweight];
    for &part in mu.parts() {
        v[part - 1] += 1;
    }
    v
}

// ---------------------------------------------------------------------------
// Dense polynomials over the table
// ---------------------------------------------------------------------------

fn poly_zero<S: Scalar>(t: &MonoTable, cx: &S::Ctx) -> Vec<S> {
    vec![S::zero_of(cx); t.len()]
}

fn poly_is_zero<S: Scalar>(p: &[S]) -> bool {
    p.iter().all(|s| s.is_zero())
}

fn poly_support<S: Scalar>(p: &[S]) -> Vec<u32> {
    p.iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .map(|(i, _)| i as u32)
        .collect()
}

/// `out += a * b`, using precomputed supports for both operands.
fn poly_mul_acc<S: Scalar>(
    t: &MonoTable,
    cx: &S::Ctx,
    a: &[S],
    asup: &[u32],
    b: &[S],
    bsup: &[u32],
    out: &mut [S],
) {
    let n = t.len();
    for &ia in asup {
        let sa = &a[ia as usize];
        let row = &t.mul[ia as usize * n..][..n];
        for &ib in bsup {
            let id = row[ib as usize];
            if id != MISSING {
                let prod = sa.mul(&b[ib as usize], cx);
                out[id as usize].add_assign(&prod, cx);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Truncated Laurent series
// ---------------------------------------------------------------------------

/// Laurent series in `u`, truncated above `u^tmax`, with coefficients in the
/// capped polynomial ring described by a shared [`MonoTable`].  `c[i]` is the
/// coefficient of `u^{min+i}`; `min` may be negative.
pub(crate) struct Series<S: Scalar> {
    t: Arc<MonoTable>,
    cx: S::Ctx,
    tmax: i32,
    min: i32,
    c: Vec<Vec<S>>,
}

impl<S: Scalar> Clone for Series<S> {
    fn clone(&self) -> Self {
        Series {
            t: Arc::clone(&self.t),
            cx: self.cx.clone(),
            tmax: self.tmax,
            min: self.min,
            c: self.c.clone(),
        }
    }
}

impl<S: Scalar> Series<S> {
    fn zero(t: &Arc<MonoTable>, cx: &S::Ctx, tmax: i32) -> Self {
        Series {
            t: Arc::clone(t),
            cx: cx.clone(),
            tmax,
            min: 0,
            c: vec![],
        }
    }

    fn one(t: &Arc<MonoTable>, cx: &S::Ctx, tmax: i32) -> Self {
        Self::constant(t, cx, tmax, S::one_of(cx))
    }

    fn constant(t: &Arc<MonoTable>, cx: &S::Ctx, tmax: i32, s: S) -> Self {
        let mut p = poly_zero::<S>(t, cx);
        p[0] = s;
        Self::from_poly(t, cx, tmax, p, 0)
    }

    fn from_poly(t: &Arc<MonoTable>, cx: &S::Ctx, tmax: i32, poly: Vec<S>, at: i32) -> Self {
        Series {
            t: Arc::clone(t),
            cx: cx.clone(),
            tmax,
            min: at,
            c: vec![poly],
        }
        .trimmed()
    }

    fn trimmed(mut self) -> Self {
        // Drop coefficients above the truncation order.
        if self.min > self.tmax {
            self.c.clear();
        } else {
            let keep = (self.tmax - self.min + 1) as usize;
            self.c.truncate(keep);
        }
        while self.c.last().map(|p| poly_is_zero(p)) == Some(true) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|p| poly_is_zero(p)).count();
        if lead > 0 {
            self.c.drain(..lead);
            self.min += lead as i32;
        }
        if self.c.is_empty() {
            self.min = 0;
        }
        self
    }

    /// Lower the truncation order (dropping now-out-of-range terms); used
    /// to return from a headroom computation to the ambient order.
    fn truncate_to(mut self, tmax: i32) -> Self {
        debug_assert!(tmax <= self.tmax);
        self.tmax = tmax;
        self.trimmed()
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(|p| poly_is_zero(p))
    }

    fn valuation(&self) -> Option<i32> {
        self.c
            .iter()
            .position(|p| !poly_is_zero(p))
            .map(|i| self.min + i as i32)
    }

    fn coeff_at(&self, e: i32) -> Option<&Vec<S>> {
        if e < self.min {
            return None;
        }
        self.c.get((e - self.min) as usize)
    }

    fn add(&self, o: &Self) -> Self {
        debug_assert!(Arc::ptr_eq(&self.t, &o.t) && self.tmax == o.tmax);
        if self.c.is_empty() {
            return o.clone();
        }
        if o.c.is_empty() {
            return self.clone();
        }
        let min = self.min.min(o.min);
        let max = (self.min + self.c.len() as i32 - 1)
            .max(o.min + o.c.len() as i32 - 1)
            .min(self.tmax);
        if max < min {
            return Self::zero(&self.t, &self.cx, self.tmax);
        }
        let mut c = vec![poly_zero::<S>(&self.t, &self.cx); (max - min + 1) as usize];
        for from in [self, o] {
            for (i, p) in from.c.iter().enumerate() {
                let e = from.min + i as i32;
                if e > max {
                    break;
                }
                let slot = &mut c[(e - min) as usize];
                for (s, v) in slot.iter_mut().zip(p.iter()) {
                    s.add_assign(v, &self.cx);
                }
            }
        }
        Series {
            t: Arc::clone(&self.t),
            cx: self.cx.clone(),
            tmax: self.tmax,
            min,
            c,
        }
        .trimmed()
    }

    fn neg(&self) -> Self {
        let mut out = self.clone();
        for p in &mut out.c {
            for s in p.iter_mut() {
                *s = s.neg(&out.cx);
            }
        }
        out
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn scale(&self, s: &S) -> Self {
        let mut out = self.clone();
        for p in &mut out.c {
            for v in p.iter_mut() {
                *v = v.mul(s, &out.cx);
            }
        }
        out.trimmed()
    }

    fn scale_rat(&self, r: Rat) -> Self {
        self.scale(&S::of_rat(&r, &self.cx))
    }

    fn mul(&self, o: &Self) -> Self {
        debug_assert!(Arc::ptr_eq(&self.t, &o.t) && self.tmax == o.tmax);
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.t, &self.cx, self.tmax);
        }
        let min = self.min + o.min;
        if min > self.tmax {
            return Self::zero(&self.t, &self.cx, self.tmax);
        }
        let len = ((self.tmax - min + 1) as usize)
            .min(self.c.len() + o.c.len() - 1);
        let mut c = vec![poly_zero::<S>(&self.t, &self.cx); len];
        let asup: Vec<Vec<u32>> = self.c.iter().map(|p| poly_support(p)).collect();
        let bsup: Vec<Vec<u32>> = o.c.iter().map(|p| poly_support(p)).collect();
        for (i, pa) in self.c.iter().enumerate() {
            if asup[i].is_empty() {
                continue;
            }
            for (j, pb) in o.c.iter().enumerate() {
                if i + j >= len || bsup[j].is_empty() {
                    continue;
                }
                poly_mul_acc(&self.t, &self.cx, pa, &asup[i], pb, &bsup[j], &mut c[i + j]);
            }
        }
        Series {
            t: Arc::clone(&self.t),
            cx: self.cx.clone(),
            tmax: self.tmax,
            min,
            c,
        }
        .trimmed()
    }

    /// Multiply by a `u`-free polynomial.
    fn mul_poly(&self, poly: &[S]) -> Self {
        let sup = poly_support(poly);
        if sup.is_empty() {
            return Self::zero(&self.t, &self.cx, self.tmax);
        }
        let mut c = Vec::with_capacity(self.c.len());
        for p in &self.c {
            let mut out = poly_zero::<S>(&self.t, &self.cx);
            poly_mul_acc(&self.t, &self.cx, p, &poly_support(p), poly, &sup, &mut out);
            c.push(out);
        }
        Series {
            t: Arc::clone(&self.t),
            cx: self.cx.clone(),
            tmax: self.tmax,
            min: self.min,
            c,
        }
        .trimmed()
    }

    /// Multiplicative inverse; requires the lowest coefficient to be a
    /// nonzero constant (true for every series this engine inverts).
    fn inverse(&self) -> Result<Self> {
        let s = self.clone().trimmed();
        let lead = s
            .c
            .first()
            .ok_or_else(|| Error::Consistency("inverting the zero series".into()))?;
        if poly_support(lead) != [0] {
            return Err(Error::Consistency(
                "series inverse needs a constant leading coefficient".into(),
            ));
        }
        let c0inv = lead[0]
            .inv(&s.cx)
            .ok_or_else(|| Error::Consistency("leading coefficient not invertible".into()))?;
        let neg_c0inv = c0inv.neg(&s.cx);
        let kmax = s.tmax + s.min; // result exponents -min..kmax-min
        if kmax < 0 {
            return Ok(Self::zero(&s.t, &s.cx, s.tmax));
        }
        let mut b: Vec<Vec<S>> = Vec::with_capacity(kmax as usize + 1);
        let mut b0 = poly_zero::<S>(&s.t, &s.cx);
        b0[0] = c0inv.clone();
        b.push(b0);
        let asup: Vec<Vec<u32>> = s.c.iter().map(|p| poly_support(p)).collect();
        for k in 1..=kmax as usize {
            let mut acc = poly_zero::<S>(&s.t, &s.cx);
            for j in 1..=k.min(s.c.len() - 1) {
                if asup[j].is_empty() {
                    continue;
                }
                let bk = &b[k - j];
                let bsup = poly_support(bk);
                if bsup.is_empty() {
                    continue;
                }
                poly_mul_acc(&s.t, &s.cx, &s.c[j], &asup[j], bk, &bsup, &mut acc);
            }
            for v in acc.iter_mut() {
                *v = v.mul(&neg_c0inv, &s.cx);
            }
            b.push(acc);
        }
        Ok(Series {
            t: Arc::clone(&s.t),
            cx: s.cx.clone(),
            tmax: s.tmax,
            min: -s.min,
            c: b,
        }
        .trimmed())
    }

    /// `log` of a series with constant term exactly 1.
    fn log(&self) -> Result<Self> {
        let one = Self::one(&self.t, &self.cx, self.tmax);
        let s = self.sub(&one);
        match s.valuation() {
            None => Ok(Self::zero(&self.t, &self.cx, self.tmax)),
            Some(v) if v >= 1 && self.coeff_at(0).map(|p| poly_support(p)) == Some(vec![0]) => {
                let mut acc = s.clone();
                let mut pow = s.clone();
                let mut j = 2i64;
                loop {
                    pow = pow.mul(&s);
                    if pow.is_zero() {
                        break;
                    }
                    let sign = if j % 2 == 0 { -1 } else { 1 };
                    acc = acc.add(&pow.scale_rat(ratio(sign, j)));
                    j += 1;
                }
                Ok(acc)
            }
            _ => Err(Error::Consistency(
                "logarithm of a series whose constant term is not 1".into(),
            )),
        }
    }

    /// `exp` of a series with positive valuation.
    fn exp(&self) -> Result<Self> {
        match self.valuation() {
            None => Ok(Self::one(&self.t, &self.cx, self.tmax)),
            Some(v) if v >= 1 => {
                let mut acc = Self::one(&self.t, &self.cx, self.tmax).add(self);
                let mut term = self.clone();
                let mut j = 2i64;
                loop {
                    term = term.mul(self).scale_rat(ratio(1, j));
                    if term.is_zero() {
                        break;
                    }
                    acc = acc.add(&term);
                    j += 1;
                }
                Ok(acc)
            }
            Some(_) => Err(Error::Consistency(
                "exponential of a series with nonpositive valuation".into(),
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// The factored generating function
// ---------------------------------------------------------------------------

struct Engine<S: Scalar> {
    t: Arc<MonoTable>,
    cx: S::Ctx,
    tmax: i32,
    bern: Vec<Rat>,
}

impl<S: Scalar> Engine<S> {
    fn new(t: &Arc<MonoTable>, cx: &S::Ctx, tmax: i32) -> Self {
        Engine {
            t: Arc::clone(t),
            cx: cx.clone(),
            tmax,
            // Factor l works with headroom l <= 2*tmax, so the Bernoulli
            // tail can reach index 3*tmax + 1.
            bern: bernoulli_numbers(3 * tmax.max(0) as usize + 4),
        }
    }

    fn sc(&self, r: Rat) -> S {
        S::of_rat(&r, &self.cx)
    }

    /// `E_l = (1/l) sum_{d|l} mu(l/d) u^{-d}`, at working order `tw`.
    fn e_series(&self, l: usize, tw: i32) -> Series<S> {
        let mut out = Series::zero(&self.t, &self.cx, tw);
        for d in divisors(l) {
            let m = moebius(l / d);
            if m == 0 {
                continue;
            }
            let mut p = poly_zero::<S>(&self.t, &self.cx);
            p[0] = self.sc(ratio(m, l as i64));
            out = out.add(&Series::from_poly(&self.t, &self.cx, tw, p, -(d as i32)));
        }
        out
    }

    /// `lambda_l = l u^l (1 - u^l)`, at working order `tw`.
    fn lambda_series(&self, l: usize, tw: i32) -> Series<S> {
        let mut p1 = poly_zero::<S>(&self.t, &self.cx);
        p1[0] = self.sc(rat(l as i64));
        let a = Series::from_poly(&self.t, &self.cx, tw, p1, l as i32);
        let mut p2 = poly_zero::<S>(&self.t, &self.cx);
        p2[0] = self.sc(rat(-(l as i64)));
        let b = Series::from_poly(&self.t, &self.cx, tw, p2, 2 * l as i32);
        a.add(&b)
    }

    /// The Bernoulli tail `B(z) = sum_{r>=2} B_r/(r(r-1)) z^{1-r}` evaluated
    /// at a Laurent series `z` of negative order; each term has valuation
    /// `(r-1) * |ord z|`, so the sum is finite under truncation.
    fn btail(&self, z: &Series<S>) -> Result<Series<S>> {
        let zinv = z.inverse()?;
        if zinv.is_zero() {
            return Ok(Series::zero(&self.t, &self.cx, z.tmax));
        }
        let mut acc = Series::zero(&self.t, &self.cx, z.tmax);
        let mut pow = zinv.clone(); // z^{-(r-1)} starting at r = 2
        let mut r = 2usize;
        loop {
            if pow.is_zero() {
                break;
            }
            if r < self.bern.len() && !Zero::is_zero(&self.bern[r]) {
                let coef = &self.bern[r] / rat((r * (r - 1)) as i64);
                acc = acc.add(&pow.scale(&self.sc(coef)));
            }
            if r >= self.bern.len() {
                break;
            }
            pow = pow.mul(&zinv);
            r += 1;
        }
        Ok(acc)
    }

    /// The two argument polynomials of factor `l`: `x0` and the difference
    /// `dx = x1 - x0` (constant part `[l = 1]`, plus the `w`-terms).
    fn x_parts(&self, l: usize) -> (Vec<S>, Vec<S>) {
        let mut x0 = poly_zero::<S>(&self.t, &self.cx);
        let mut dx = poly_zero::<S>(&self.t, &self.cx);
        let mut const_part = Rat::zero();
        for d in divisors(l) {
            let m = moebius(l / d);
            if m == 0 {
                continue;
            }
            let coef = ratio(m, l as i64);
            const_part += &coef;
            // -p_d in both arguments (dropped when beyond the weight cap).
            if d <= self.t.pweight {
                let mut pv = vec![0u16; self.t.pweight];
                pv[d - 1] = 1;
                if let Some(id) = self.t.id_of(&vec![0u16; self.t.k], &pv) {
                    let s = self.sc(-coef.clone());
                    x0[id as usize].add_assign(&s, &self.cx);
                }
            }
            // -w_i^d in the numerator argument only.
            for i in 0..self.t.k {
                if d as u16 <= self.t.wcaps[i] {
                    let mut wv = vec![0u16; self.t.k];
                    wv[i] = d as u16;
                    if let Some(id) = self.t.id_of(&wv, &vec![0u16; self.t.pweight]) {
                        let s = self.sc(-coef.clone());
                        dx[id as usize].add_assign(&s, &self.cx);
                    }
                }
            }
        }
        // The "+1" of the numerator argument: sums to 1 for l = 1, to 0 else.
        if !Zero::is_zero(&const_part) {
            let s = self.sc(const_part);
            dx[0].add_assign(&s, &self.cx);
        }
        (x0, dx)
    }

    /// `log U_l(x0 + dx) - log U_l(x0)`, or `None` when `dx = 0` (the factor
    /// is identically 1).
    fn log_u_diff_of(&self, l: usize, x0: &[S], dx: &[S]) -> Result<Option<Series<S>>> {
        if poly_is_zero(dx) {
            return Ok(None);
        }
        let mut x1 = x0.to_vec();
        for (a, b) in x1.iter_mut().zip(dx.iter()) {
            a.add_assign(b, &self.cx);
        }
        // Intermediates mix in Laurent terms down to u^{-l}; to keep every
        // product exact up to the ambient order the factor works with l
        // extra orders of headroom and truncates back at the end.
        let tw = self.tmax + l as i32;
        let e = self.e_series(l, tw);
        let le = self.lambda_series(l, tw).mul(&e).log()?;
        let einv = e.inverse()?;
        let neg_e = e.neg();
        let one = Series::one(&self.t, &self.cx, tw);
        let half = Series::constant(&self.t, &self.cx, tw, self.sc(ratio(1, 2)));

        // X (log(lambda E) - 1) contributes dx * log(lambda E) - dx.
        let dx_series = Series::from_poly(&self.t, &self.cx, tw, dx.to_vec(), 0);
        let mut total = le.mul_poly(dx).sub(&dx_series);

        for (x, positive) in [(&x1, true), (&x0.to_vec(), false)] {
            if poly_is_zero(x) && !positive {
                continue; // both f and the Bernoulli tail difference use -E alone
            }
            let x_series = Series::from_poly(&self.t, &self.cx, tw, x.clone(), 0);
            let lg = one.sub(&einv.mul_poly(x)).log()?;
            let fac = neg_e.add(&x_series).sub(&half);
            let f = fac.mul(&lg);
            let bt = self.btail(&neg_e.add(&x_series))?;
            let term = f.add(&bt);
            total = if positive {
                total.add(&term)
            } else {
                total.sub(&term)
            };
        }
        // x0 = 0 still contributes its Bernoulli tail (f vanishes with lg).
        if poly_is_zero(x0) {
            let bt = self.btail(&neg_e)?;
            total = total.sub(&bt);
        }
        let total = total.truncate_to(self.tmax);
        if let Some(v) = total.valuation() {
            if v < 1 {
                return Err(Error::Consistency(format!(
                    "factor {l} of the generating function has terms of u-order {v} < 1"
                )));
            }
        }
        Ok(Some(total))
    }

    fn factor(&self, l: usize) -> Result<Option<Series<S>>> {
        let (x0, dx) = self.x_parts(l);
        match self.log_u_diff_of(l, &x0, &dx)? {
            None => Ok(None),
            Some(diff) => Ok(Some(diff.exp()?)),
        }
    }

    /// `prod_{l <= ell_max} U_l(X1)/U_l(X0) - 1`, multiplied sparsest-first.
    fn master(&self, ell_max: usize) -> Result<Series<S>> {
        let one = Series::one(&self.t, &self.cx, self.tmax);
        let mut acc = one.clone();
        for l in (1..=ell_max).rev() {
            if let Some(f) = self.factor(l)? {
                acc = acc.mul(&f);
            }
        }
        Ok(acc.sub(&one))
    }
}

// ---------------------------------------------------------------------------
// Extraction jobs
// ---------------------------------------------------------------------------

/// One master-series evaluation: caps, truncation, and the list of
/// `w`-monomials to extract, each with an integer multiplier.
#[derive(Clone, Debug)]
struct SeriesJob {
    wcaps: Vec<u16>,
    pweight: usize,
    tmax: usize,
    extractions: Vec<(Vec<u16>, i64)>,
}

type SchurCells = BTreeMap<(usize, usize), BTreeMap<Partition, i64>>;

impl SeriesJob {
    fn ell_max(&self) -> usize {
        2 * self.tmax
    }
}

/// Run the engine over one scalar field and return, for every cell
/// `(g, n)` and partition `lam` of `n`, the residue of the Schur coefficient.
fn schur_residues<S: Scalar>(
    t: &Arc<MonoTable>,
    cx: &S::Ctx,
    job: &SeriesJob,
) -> Result<BTreeMap<(usize, usize, Partition), S>> {
    let eng: Engine<S> = Engine::new(t, cx, job.tmax as i32);
    let master = eng.master(job.ell_max())?;
    if let Some(v) = master.valuation() {
        if v < 1 {
            return Err(Error::Consistency(
                "generating-function product has a constant term after subtracting 1".into(),
            ));
        }
    }
    // Power-sum coefficients per (u-power, class).
    let mut pcoeffs: BTreeMap<(usize, Partition), S> = BTreeMap::new();
    for n in 0..=job.pweight {
        for mu in partitions(n) {
            let pv = pvec_of_partition(&mu, job.pweight);
            for upow in n.max(1)..=job.tmax {
                let mut acc = S::zero_of(cx);
                for (wexp, mult) in &job.extractions {
                    let id = t
                        .id_of(wexp, &pv)
                        .ok_or_else(|| Error::Consistency("extraction outside caps".into()))?;
                    if let Some(poly) = master.coeff_at(upow as i32) {
                        let v = poly[id as usize].mul(&S::of_i64(*mult, cx), cx);
                        acc.add_assign(&v, cx);
                    }
                }
                pcoeffs.insert((upow, mu.clone()), acc);
            }
        }
    }
    // Schur multiplicities per cell: m_lam = sum_mu chi_lam(mu) * c_mu.
    let mut out = BTreeMap::new();
    for n in 0..=job.pweight {
        let classes = partitions(n);
        for upow in n.max(1)..=job.tmax {
            let g = upow - n;
            for lam in partitions(n) {
                let mut acc = S::zero_of(cx);
                for mu in &classes {
                    let chi = character(&lam, mu);
                    if chi == 0 {
                        continue;
                    }
                    let c = &pcoeffs[&(upow, mu.clone())];
                    let v = c.mul(&S::of_i64(chi, cx), cx);
                    acc.add_assign(&v, cx);
                }
                out.insert((g, n, lam), acc);
            }
        }
    }
    Ok(out)
}

/// Sanity bound on reconstructed table values; genuine entries are tiny
/// compared to the ~2^124 CRT range, so anything bigger signals disagreement
/// between the two prime-field runs.
const MAX_ABS_VALUE: i128 = 1 << 80;

fn run_job_modular(job: &SeriesJob) -> Result<SchurCells> {
    let t = MonoTable::build(&job.wcaps, job.pweight)?;
    let primes = rank_primes();
    let (p1, p2) = (primes[0], primes[1]);
    let r1 = schur_residues::<Mod64>(&t, &p1, job)?;
    let r2 = schur_residues::<Mod64>(&t, &p2, job)?;
    debug_assert_eq!(r1.len(), r2.len());
    let mut cells: SchurCells = BTreeMap::new();
    for ((g, n, lam), a) in r1 {
        let b = r2[&(g, n, lam.clone())];
        let x = crt_signed(a.0, p1, b.0, p2);
        if x.abs() > MAX_ABS_VALUE {
            return Err(Error::Consistency(
                "independent prime-field evaluations disagree".into(),
            ));
        }
        if x != 0 {
            let v = i64::try_from(x).map_err(|_| {
                Error::Consistency("table value exceeds the 64-bit output range".into())
            })?;
            cells.entry((g, n)).or_default().insert(lam, v);
        }
    }
    Ok(cells)
}

#[cfg(test)]
fn run_job_rational(job: &SeriesJob) -> Result<SchurCells> {
    use num_traits::ToPrimitive;
    let t = MonoTable::build(&job.wcaps, job.pweight)?;
    let r = schur_residues::<Rat>(&t, &(), job)?;
    let mut cells: SchurCells = BTreeMap::new();
    for ((g, n, lam), v) in r {
        if Zero::is_zero(&v) {
            continue;
        }
        if !v.is_integer() {
            return Err(Error::Consistency(format!(
                "non-integer Schur coefficient {v} at (g, n) = ({g}, {n})"
            )));
        }
        let x = v
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::Consistency("table value exceeds i64".into()))?;
        cells.entry((g, n)).or_default().insert(lam, x);
    }
    Ok(cells)
}

fn merge_scaled(into: &mut SchurCells, from: &SchurCells, mult: i64) {
    for (cell, terms) in from {
        let slot = into.entry(*cell).or_default();
        for (lam, v) in terms {
            let e = slot.entry(lam.clone()).or_insert(0);
            *e += mult * v;
            if *e == 0 {
                slot.remove(lam);
            }
        }
    }
    into.retain(|_, m| !m.is_empty());
}

// ---------------------------------------------------------------------------
// Public tables
// ---------------------------------------------------------------------------

/// Hard ceiling on the `u`-truncation order; beyond this the series products
/// are impractical no matter the caps.
const MAX_TRUNCATION: usize = 40;

/// A table of equivariant Euler characteristics: for each genus `g <= g_max`
/// and arity `n <= n_max`, the alternating sum of cohomology as integer Schur
/// multiplicities.  Zero cells are stored implicitly.
#[derive(Clone, Debug)]
pub struct ECTable {
    /// Human-readable description of the evaluated closed form.
    pub source: String,
    pub g_max: usize,
    pub n_max: usize,
    /// Largest `u`-exponent carried through the computation.
    pub truncation_u: usize,
    /// Largest factor index of the infinite product that can contribute.
    pub ell_max: usize,
    /// Present when the underlying identity depends on an open hypothesis.
    pub conditional: Option<String>,
    cells: SchurCells,
}

impl ECTable {
    /// The Schur expansion at one cell; empty map means zero.  Cells outside
    /// the computed range are an error, never silently zero.
    pub fn cell(&self, g: usize, n: usize) -> Result<BTreeMap<Partition, i64>> {
        if g > self.g_max || n > self.n_max {
            return Err(Error::InvalidInput(format!(
                "cell ({g}, {n}) outside the computed range ({} x {})",
                self.g_max, self.n_max
            )));
        }
        Ok(self.cells.get(&(g, n)).cloned().unwrap_or_default())
    }

    /// All nonzero cells.
    pub fn nonzero_cells(&self) -> &SchurCells {
        &self.cells
    }

    /// Plain-text grid, genus down, arity across.
    pub fn render_text(&self) -> String {
        let mut head = format!("# {}\n", self.source);
        let _ = writeln!(
            head,
            "# truncation: u^{}, factors l <= {}",
            self.truncation_u, self.ell_max
        );
        if let Some(c) = &self.conditional {
            let _ = writeln!(head, "# conditional: {c}");
        }
        let mut rows: Vec<Vec<String>> = Vec::new();
        let mut header = vec!["g\\n".to_string()];
        header.extend((0..=self.n_max).map(|n| n.to_string()));
        rows.push(header);
        for g in 0..=self.g_max {
            let mut row = vec![g.to_string()];
            for n in 0..=self.n_max {
                row.push(schur_string(
                    self.cells.get(&(g, n)).unwrap_or(&BTreeMap::new()),
                ));
            }
            rows.push(row);
        }
        let widths: Vec<usize> = (0..=self.n_max + 1)
            .map(|i| rows.iter().map(|r| r[i].len()).max().unwrap_or(1))
            .collect();
        for row in rows {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            head.push_str(&line.join("  "));
            head.push('\n');
        }
        head
    }

    /// CSV with one row per cell (zero cells included).
    pub fn render_csv(&self) -> String {
        let mut out = String::from("g,n,euler_characteristic\n");
        for g in 0..=self.g_max {
            for n in 0..=self.n_max {
                let s = schur_string(self.cells.get(&(g, n)).unwrap_or(&BTreeMap::new()));
                let _ = writeln!(out, "{g},{n},\"{s}\"");
            }
        }
        out
    }
}

/// Compact rendering of a virtual sum of Schur functions, e.g.
/// `s[2,1] - 2*s[1,1,1]`; the empty partition prints as `s[]`.
pub fn schur_string(terms: &BTreeMap<Partition, i64>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (lam, &c) in terms {
        let mag = c.unsigned_abs();
        let parts: Vec<String> = lam.parts().iter().map(|p| p.to_string()).collect();
        let body = if mag == 1 {
            format!("s[{}]", parts.join(","))
        } else {
            format!("{mag}*s[{}]", parts.join(","))
        };
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else if c < 0 {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    out
}

fn check_scope(g_max: usize, n_max: usize) -> Result<usize> {
    let tmax = g_max + n_max;
    if tmax > MAX_TRUNCATION {
        return Err(Error::BudgetExhausted(format!(
            "truncation order {tmax} exceeds the supported maximum {MAX_TRUNCATION}"
        )));
    }
    Ok(tmax)
}

/// Canonicalise a tuple of column sizes: sorted descending, zeros dropped
/// (a zero-size column is the unit decoration).
fn canonical_columns(a: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().copied().filter(|&x| x > 0).collect();
    v.sort_unstable_by(|x, y| y.cmp(x));
    v
}

fn job_cells(job: &SeriesJob, g_max: usize) -> Result<SchurCells> {
    if job.tmax == 0 {
        return Ok(BTreeMap::new());
    }
    let mut cells = run_job_modular(job)?;
    cells.retain(|&(g, _), _| g <= g_max);
    Ok(cells)
}

fn make_table(
    source: String,
    g_max: usize,
    n_max: usize,
    tmax: usize,
    cells: SchurCells,
    conditional: Option<String>,
) -> ECTable {
    ECTable {
        source,
        g_max,
        n_max,
        truncation_u: tmax,
        ell_max: 2 * tmax,
        conditional,
        cells,
    }
}

/// Euler characteristics of the complexes decorated by a product of columns
/// of sizes `a = (a_1..a_k)`: coefficient extraction at `w_1^{a_1}..w_k^{a_k}`
/// with sign `(-1)^{a_1+..+a_k}`.
pub fn ec_general(a: &[usize], g_max: usize, n_max: usize) -> Result<ECTable> {
    let cols = canonical_columns(a);
    let tmax = check_scope(g_max, n_max)?;
    let total: usize = cols.iter().sum();
    let sign = if total % 2 == 0 { 1 } else { -1 };
    let exps: Vec<u16> = cols.iter().map(|&x| x as u16).collect();
    let wcaps: Vec<u16> = exps.iter().map(|&x| x + 1).collect();
    let job = SeriesJob {
        wcaps,
        pweight: n_max,
        tmax,
        extractions: vec![(exps, sign)],
    };
    let cells = job_cells(&job, g_max)?;
    Ok(make_table(
        format!("column-product closed form, column sizes {cols:?}"),
        g_max,
        n_max,
        tmax,
        cells,
        None,
    ))
}

/// Euler characteristics of the complexes decorated by the reduced column of
/// size `a` (the kernel-free quotient model): signed sum of the extractions
/// at `w^0..w^{a-1}`.
pub fn ec_tilde(a: usize, g_max: usize, n_max: usize) -> Result<ECTable> {
    if a == 0 {
        return Err(Error::InvalidInput(
            "reduced column size must be at least 1".into(),
        ));
    }
    let tmax = check_scope(g_max, n_max)?;
    let sign = if (a - 1) % 2 == 0 { 1 } else { -1 };
    let extractions: Vec<(Vec<u16>, i64)> = (0..a).map(|j| (vec![j as u16], sign)).collect();
    let job = SeriesJob {
        wcaps: vec![a as u16],
        pweight: n_max,
        tmax,
        extractions,
    };
    let cells = job_cells(&job, g_max)?;
    Ok(make_table(
        format!("reduced-column closed form, size {a}"),
        g_max,
        n_max,
        tmax,
        cells,
        None,
    ))
}

/// Euler characteristics for the two-column shape `2^k 1^l`, via the short
/// exact resolution by column products:
/// `chi(2^k 1^l) = chi((k+l, k)) - chi((k+l+1, k-1))`.
pub fn ec_two_column(k: usize, l: usize, g_max: usize, n_max: usize) -> Result<ECTable> {
    if k == 0 {
        let mut t = ec_general(&[l], g_max, n_max)?;
        t.source = format!("two-column closed form, shape 2^0 1^{l}");
        return Ok(t);
    }
    let tmax = check_scope(g_max, n_max)?;
    // Both resolution terms have total size 2k + l; their common sign is
    // (-1)^l, so the closed form reads (-1)^l (T_{k+l,k} - T_{k+l+1,k-1}).
    let sign = if l % 2 == 0 { 1 } else { -1 };
    let e1 = vec![(k + l) as u16, k as u16];
    let e2 = vec![(k + l + 1) as u16, (k - 1) as u16];
    let wcaps = vec![e2[0] + 1, e1[1] + 1];
    let job = SeriesJob {
        wcaps,
        pweight: n_max,
        tmax,
        extractions: vec![(e1, sign), (e2, -sign)],
    };
    let cells = job_cells(&job, g_max)?;
    Ok(make_table(
        format!("two-column closed form, shape 2^{k} 1^{l}"),
        g_max,
        n_max,
        tmax,
        cells,
        None,
    ))
}

/// Euler characteristics for an arbitrary decoration shape, by expanding the
/// Schur function as the dual Jacobi–Trudi determinant in elementary
/// symmetric functions and evaluating one column-product extraction per
/// monomial of the determinant.
pub fn ec_lambda(lam: &Partition, g_max: usize, n_max: usize) -> Result<ECTable> {
    if lam.is_empty() {
        return Err(Error::InvalidInput("empty decoration shape".into()));
    }
    let m = lam.parts()[0]; // number of columns
    let conj = lam.conjugate();
    match m {
        1 => {
            let mut t = ec_general(&[conj.parts()[0]], g_max, n_max)?;
            t.source = format!("single-column closed form, shape {lam}");
            Ok(t)
        }
        2 => {
            let k = conj.parts()[1];
            let l = conj.parts()[0] - k;
            ec_two_column(k, l, g_max, n_max)
        }
        _ => {
            if m > 8 {
                return Err(Error::InvalidInput(format!(
                    "decoration shape with {m} columns exceeds the supported determinant size"
                )));
            }
            let tmax = check_scope(g_max, n_max)?;
            let size = lam.size();
            let base_sign = if size % 2 == 0 { 1i64 } else { -1 };
            // Expand det(e_{conj_i - i + j}) over permutations, grouping the
            // resulting exponent multisets.
            let mut terms: BTreeMap<Vec<u16>, i64> = BTreeMap::new();
            let mut perm: Vec<usize> = (0..m).collect();
            loop {
                let mut ok = true;
                let mut exps: Vec<i64> = Vec::with_capacity(m);
                for i in 0..m {
                    let b = conj.parts()[i] as i64 + perm[i] as i64 - i as i64;
                    if b < 0 {
                        ok = false;
                        break;
                    }
                    exps.push(b);
                }
                if ok {
                    let mut inv = 0usize;
                    for i in 0..m {
                        for j in i + 1..m {
                            if perm[i] > perm[j] {
                                inv += 1;
                            }
                        }
                    }
                    let sgn = if inv % 2 == 0 { 1i64 } else { -1 };
                    let mut key: Vec<u16> =
                        exps.iter().filter(|&&b| b > 0).map(|&b| b as u16).collect();
                    key.sort_unstable_by(|x, y| y.cmp(x));
                    *terms.entry(key).or_insert(0) += sgn * base_sign;
                }
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            let mut cells: SchurCells = BTreeMap::new();
            for (exps, mult) in terms {
                if mult == 0 {
                    continue;
                }
                let wcaps: Vec<u16> = exps.iter().map(|&x| x + 1).collect();
                let job = SeriesJob {
                    wcaps,
                    pweight: n_max,
                    tmax,
                    extractions: vec![(exps, mult)],
                };
                let part = job_cells(&job, g_max)?;
                merge_scaled(&mut cells, &part, 1);
            }
            Ok(make_table(
                format!("iterated-column determinant expansion, shape {lam}"),
                g_max,
                n_max,
                tmax,
                cells,
                None,
            ))
        }
    }
}

/// Advance to the next lexicographic permutation; false when wrapped.
fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// The hypothesis that gates the weight-19 identity.
pub const WEIGHT19_HYPOTHESIS: &str =
    "assumes the weight-19 holomorphic form space of the compactified genus-3 curve \
     moduli with 15 markings vanishes";

/// The two summands and the total of a fixed-weight compactly-supported
/// Euler-characteristic table over the open curve-moduli cells.
#[derive(Clone, Debug)]
pub struct WeightTables {
    pub weight: usize,
    /// Contribution of the reduced-column (holomorphic-form) summand.
    pub first: ECTable,
    /// Contribution of the two-column summand.
    pub second: ECTable,
    /// Cell-wise sum of the two.
    pub total: ECTable,
}

/// Compactly-supported Euler characteristics of the pure Hodge pieces of
/// weight 17 or 19 over the open moduli cells `(g, n)`:
/// `sum u^{g+n} chi = -u * T(reduced column) - u^2 * T(two-column shape)`.
pub fn ec_weight(weight: usize, g_max: usize, n_max: usize) -> Result<WeightTables> {
    let (col, two_k, two_l, conditional) = match weight {
        17 => (17usize, 7usize, 0usize, None),
        19 => (19, 5, 6, Some(WEIGHT19_HYPOTHESIS.to_string())),
        _ => {
            return Err(Error::InvalidInput(format!(
                "no closed form for weight {weight}; supported weights are 17 and 19"
            )))
        }
    };
    check_scope(g_max, n_max)?;
    let tilde = if g_max >= 1 {
        ec_tilde(col, g_max - 1, n_max)?
    } else {
        make_table(String::new(), 0, n_max, 0, BTreeMap::new(), None)
    };
    let twocol = if g_max >= 2 {
        ec_two_column(two_k, two_l, g_max - 2, n_max)?
    } else {
        make_table(String::new(), 0, n_max, 0, BTreeMap::new(), None)
    };
    // Reindex to moduli coordinates: a factor -u^j shifts genus by j and
    // negates.
    let mut first_cells: SchurCells = BTreeMap::new();
    if g_max >= 1 {
        let shifted: SchurCells = tilde
            .cells
            .iter()
            .map(|(&(g, n), v)| ((g + 1, n), v.clone()))
            .collect();
        merge_scaled(&mut first_cells, &shifted, -1);
    }
    let mut second_cells: SchurCells = BTreeMap::new();
    if g_max >= 2 {
        let shifted: SchurCells = twocol
            .cells
            .iter()
            .map(|(&(g, n), v)| ((g + 2, n), v.clone()))
            .collect();
        merge_scaled(&mut second_cells, &shifted, -1);
    }
    let mut total_cells = first_cells.clone();
    merge_scaled(&mut total_cells, &second_cells, 1);
    let tmax = g_max + n_max;
    let first = make_table(
        format!("weight-{weight} table, reduced-column summand (size {col})"),
        g_max,
        n_max,
        tmax,
        first_cells,
        conditional.clone(),
    );
    let second = make_table(
        format!("weight-{weight} table, two-column summand (shape 2^{two_k} 1^{two_l})"),
        g_max,
        n_max,
        tmax,
        second_cells,
        conditional.clone(),
    );
    let total = make_table(
        format!("weight-{weight} compactly-supported Euler characteristics"),
        g_max,
        n_max,
        tmax,
        total_cells,
        conditional,
    );
    Ok(WeightTables {
        weight,
        first,
        second,
        total,
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
