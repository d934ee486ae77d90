//! k-th power classes, the sumset closure `R_k ⊆ 2R_k ⊆ ...`, and Waring
//! numbers `γ(k, q)`.
//!
//! The nonzero part of `mR_k` is a union of cosets of `R_k* = <g^d>`, so the
//! default engine tracks a `d`-bit coset mask. For `d > 64` it falls back to
//! a plain element bitset with a frontier.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, inv_mod, prime_power, prime_powers_up_to};
use crate::error::{Result, WaringError};
use crate::field::{build_field, FieldCtx, FqElem};

/// Dense bitset over element codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

/// The set `R_k` of k-th powers of a field.
#[derive(Clone, Debug)]
pub struct PowerClass {
    pub q: u32,
    pub k: u64,
    /// `gcd(k, q - 1)`: index of `R_k*` in `F_q*`.
    pub d: u32,
    /// `|R_k*| = (q - 1) / d`.
    pub size_star: u32,
    pub members: BitSet,
}

impl PowerClass {
    pub fn contains(&self, a: FqElem) -> bool {
        self.members.contains(a.0 as usize)
    }

    /// Nonzero k-th powers, ascending by discrete log.
    pub fn units<'a>(&'a self, ctx: &'a FieldCtx) -> impl Iterator<Item = FqElem> + 'a {
        (0..self.size_star as u64).map(move |j| ctx.antilog(j * self.d as u64))
    }
}

pub fn power_residues(ctx: &FieldCtx, k: u64) -> PowerClass {
    let q = ctx.q();
    let d = gcd(k, q as u64 - 1) as u32;
    let size_star = (q - 1) / d;
    let mut members = BitSet::new(q as usize);
    members.insert(0);
    for j in 0..size_star as u64 {
        members.insert(ctx.antilog(j * d as u64).0 as usize);
    }
    PowerClass {
        q,
        k,
        d,
        size_star,
        members,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GammaOutcome {
    Covered(u32),
    Uncoverable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaResult {
    pub k: u64,
    pub q: u64,
    pub outcome: GammaOutcome,
    /// `|mR_k|` for `m = 1, 2, ...`; strictly increasing, ends at `q` when covered.
    pub closure_sizes: Vec<u64>,
}

impl GammaResult {
    pub fn gamma(&self) -> Option<u32> {
        match self.outcome {
            GammaOutcome::Covered(m) => Some(m),
            GammaOutcome::Uncoverable => None,
        }
    }

    pub fn is_coverable(&self) -> bool {
        self.gamma().is_some()
    }
}

/// Coset transition data: `S_j = { coset(1 + z) : z ∈ g^j R_k*, 1 + z != 0 }`.
struct CosetTables {
    d: u32,
    steps: Vec<u64>,
}

impl CosetTables {
    fn new(ctx: &FieldCtx, d: u32) -> Self {
        debug_assert!(d <= 64);
        let order = ctx.q() as u64 - 1;
        let mut steps = vec![0u64; d as usize];
        for e in 0..order {
            let z = ctx.antilog(e);
            let w = ctx.add_one(z);
            if let Some(l) = ctx.log(w) {
                steps[(e % d as u64) as usize] |= 1 << (l % d);
            }
        }
        CosetTables { d, steps }
    }

    /// One closure step on a coset mask.
    fn step(&self, mask: u64) -> u64 {
        let d = self.d;
        let mut out = mask;
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros();
            bits &= bits - 1;
            let s = self.steps[((d - i) % d) as usize];
            out |= rotate(s, i, d);
        }
        out
    }
}

/// Cyclic shift of a `d`-bit mask by `i`.
#[inline]
fn rotate(mask: u64, i: u32, d: u32) -> u64 {
    if i == 0 {
        return mask;
    }
    let full = if d == 64 { u64::MAX } else { (1u64 << d) - 1 };
    ((mask << i) | (mask >> (d - i))) & full
}

/// Coset masks of `mR_k*` for `m = 1..` until covered or stable.
fn coset_closure(ctx: &FieldCtx, d: u32) -> Vec<u64> {
    let tables = CosetTables::new(ctx, d);
    let full = if d == 64 { u64::MAX } else { (1u64 << d) - 1 };
    let mut masks = vec![1u64];
    loop {
        let cur = *masks.last().unwrap();
        if cur == full {
            break;
        }
        let next = tables.step(cur);
        if next == cur {
            break;
        }
        masks.push(next);
    }
    masks
}

/// Element sets `mR_k` for `m = 1..` by frontier sumsets; independent of the
/// coset argument.
pub fn closure_sets_plain(ctx: &FieldCtx, k: u64) -> Vec<BitSet> {
    let pc = power_residues(ctx, k);
    let units: Vec<FqElem> = pc.units(ctx).collect();
    let q = ctx.q() as usize;
    let mut cur = pc.members.clone();
    let mut frontier: Vec<usize> = cur.iter().collect();
    let mut out = vec![cur.clone()];
    loop {
        if cur.count() == q {
            break;
        }
        let mut fresh = Vec::new();
        for &x in &frontier {
            for &r in &units {
                let y = ctx.add(FqElem(x as u32), r).0 as usize;
                if cur.insert(y) {
                    fresh.push(y);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        frontier = fresh;
        out.push(cur.clone());
    }
    out
}

fn result_from_sizes(k: u64, q: u64, sizes: Vec<u64>) -> GammaResult {
    let outcome = if *sizes.last().unwrap() == q {
        GammaOutcome::Covered(sizes.len() as u32)
    } else {
        GammaOutcome::Uncoverable
    };
    GammaResult {
        k,
        q,
        outcome,
        closure_sizes: sizes,
    }
}

/// `γ(k, q)` over an already built field.
pub fn gamma_in(ctx: &FieldCtx, k: u64) -> GammaResult {
    let q = ctx.q() as u64;
    let d = gcd(k, q - 1) as u32;
    let h = (q - 1) / d as u64;
    let sizes = if d <= 64 {
        coset_closure(ctx, d)
            .into_iter()
            .map(|m| 1 + h * m.count_ones() as u64)
            .collect()
    } else {
        closure_sets_plain(ctx, k)
            .iter()
            .map(|s| s.count() as u64)
            .collect()
    };
    result_from_sizes(k, q, sizes)
}

/// `γ(k, q)`; builds the canonical field of order `q`.
pub fn gamma(k: u64, q: u64) -> Result<GammaResult> {
    if k == 0 {
        return Err(WaringError::InvalidInput("k must be >= 1".into()));
    }
    let (p, s) = prime_power(q).ok_or(WaringError::NonPrimePowerQ(q))?;
    if gcd(k, q - 1) == 1 {
        return Ok(result_from_sizes(k, q, vec![q]));
    }
    let ctx = build_field(p, s)?;
    Ok(gamma_in(&ctx, k))
}

/// Default scan bound `8k^4` for uncoverable fields.
pub fn default_uncoverable_bound(k: u64) -> u64 {
    8 * k.pow(4)
}

/// All uncoverable prime powers `q <= bound`, ascending. Prime fields have no
/// proper subfield and are skipped.
pub fn uncoverable_fields(k: u64, bound: u64) -> Result<Vec<u64>> {
    let candidates: Vec<u64> = prime_powers_up_to(bound)
        .into_iter()
        .filter(|&(_, _, s)| s > 1)
        .map(|(q, _, _)| q)
        .filter(|&q| gcd(k, q - 1) > 1)
        .collect();
    let flags: Vec<Result<bool>> = candidates
        .par_iter()
        .map(|&q| Ok(!gamma(k, q)?.is_coverable()))
        .collect();
    let mut out = Vec::new();
    for (q, f) in candidates.into_iter().zip(flags) {
        if f? {
            out.push(q);
        }
    }
    Ok(out)
}

/// One entry per prime power `q <= q_max`, ascending, optionally keeping only
/// covered fields with `γ` in `filter`.
pub fn gamma_table(
    k: u64,
    q_max: u64,
    filter: Option<RangeInclusive<u32>>,
) -> Result<Vec<GammaResult>> {
    let qs: Vec<u64> = prime_powers_up_to(q_max).into_iter().map(|t| t.0).collect();
    let results: Vec<Result<GammaResult>> = qs.par_iter().map(|&q| gamma(k, q)).collect();
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        let r = r?;
        let keep = match &filter {
            None => true,
            Some(range) => r.gamma().is_some_and(|g| range.contains(&g)),
        };
        if keep {
            out.push(r);
        }
    }
    Ok(out)
}

/// `γ(k) = max γ(k, q)` over coverable fields.
///
/// Only `q <= k^4` is scanned: beyond it two k-th powers always suffice.
/// Since `γ(k, q) <= gcd(k, q - 1)`, fields with `d <= 2` cannot raise the
/// maximum above the floor of 2 and are skipped.
pub fn gamma_max(k: u64) -> Result<u32> {
    if k == 1 {
        return Ok(1);
    }
    let bound = k.checked_pow(4).ok_or(WaringError::InvalidInput("k too large".into()))?;
    let qs: Vec<u64> = prime_powers_up_to(bound)
        .into_iter()
        .map(|t| t.0)
        .filter(|&q| gcd(k, q - 1) > 2)
        .collect();
    let gammas: Vec<Result<u32>> = qs
        .par_iter()
        .map(|&q| Ok(gamma(k, q)?.gamma().unwrap_or(0)))
        .collect();
    let mut best = 2;
    for g in gammas {
        best = best.max(g?);
    }
    Ok(best)
}

/// Solves `y = x^k` in `F_q`, returning some root when one exists.
pub fn kth_root(ctx: &FieldCtx, y: FqElem, k: u64) -> Option<FqElem> {
    let Some(e) = ctx.log(y) else {
        return Some(FqElem::ZERO);
    };
    let n = ctx.q() as u64 - 1;
    let d = gcd(k, n);
    if e as u64 % d != 0 {
        return None;
    }
    let n1 = n / d;
    if n1 == 1 {
        return Some(FqElem::ONE);
    }
    let inv = inv_mod((k / d) % n1, n1)?;
    let j = ((e as u64 / d) as u128 * inv as u128 % n1 as u128) as u64;
    Some(ctx.antilog(j))
}

/// Minimal sum-of-k-th-powers representations in a single field.
pub struct FieldWaring<'a> {
    ctx: &'a FieldCtx,
    k: u64,
    d: u32,
    /// Minimal level of each coset of `R_k*`; 0 when unreachable.
    levels: Vec<u32>,
    gamma: Option<u32>,
}

impl<'a> FieldWaring<'a> {
    pub fn new(ctx: &'a FieldCtx, k: u64) -> Self {
        let q = ctx.q() as u64;
        let d = gcd(k, q - 1) as u32;
        let mut levels = vec![0u32; d as usize];
        if d <= 64 {
            for (m, mask) in coset_closure(ctx, d).iter().enumerate() {
                for (c, lvl) in levels.iter_mut().enumerate() {
                    if *lvl == 0 && mask & (1 << c) != 0 {
                        *lvl = m as u32 + 1;
                    }
                }
            }
        } else {
            for (m, set) in closure_sets_plain(ctx, k).iter().enumerate() {
                for (c, lvl) in levels.iter_mut().enumerate() {
                    if *lvl == 0 && set.contains(ctx.antilog(c as u64).0 as usize) {
                        *lvl = m as u32 + 1;
                    }
                }
            }
        }
        let gamma = if levels.iter().all(|&l| l > 0) {
            Some(levels.iter().copied().max().unwrap_or(1))
        } else {
            None
        };
        FieldWaring {
            ctx,
            k,
            d,
            levels,
            gamma,
        }
    }

    pub fn gamma(&self) -> Option<u32> {
        self.gamma
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Minimal number of k-th powers summing to `y`; `None` if unreachable.
    pub fn level(&self, y: FqElem) -> Option<u32> {
        match self.ctx.log(y) {
            None => Some(1),
            Some(e) => match self.levels[(e % self.d) as usize] {
                0 => None,
                l => Some(l),
            },
        }
    }

    /// Witnesses `x_1..x_L` with `sum x_i^k = y` and `L` minimal.
    pub fn represent(&self, y: FqElem) -> Option<Vec<FqElem>> {
        let ctx = self.ctx;
        let mut level = self.level(y)?;
        let mut rest = y;
        let mut out = Vec::with_capacity(level as usize);
        while level > 1 {
            let d = self.d as u64;
            let h = (ctx.q() as u64 - 1) / d;
            let r = (0..h)
                .map(|j| ctx.antilog(j * d))
                .find(|&r| {
                    let t = ctx.sub(rest, r);
                    !t.is_zero() && self.level(t).is_some_and(|l| l < level)
                })
                .expect("a unit step exists at every level above one");
            out.push(kth_root(ctx, r, self.k)?);
            rest = ctx.sub(rest, r);
            level = self.level(rest)?;
        }
        out.push(kth_root(ctx, rest, self.k)?);
        Some(out)
    }

    /// Representation padded with zeros to exactly `m` witnesses.
    pub fn represent_padded(&self, y: FqElem, m: usize) -> Option<Vec<FqElem>> {
        let mut w = self.represent(y)?;
        if w.len() > m {
            return None;
        }
        w.resize(m, FqElem::ZERO);
        Some(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn naive_gamma(k: u64, q: u64) -> Option<u32> {
        let (p, s) = prime_power(q).unwrap();
        let f = build_field(p, s).unwrap();
        let powers: HashSet<u32> = f.elements().map(|a| f.pow(a, k).0).collect();
        let mut cur = powers.clone();
        let mut m = 1;
        loop {
            if cur.len() == q as usize {
                return Some(m);
            }
            let next: HashSet<u32> = cur
                .iter()
                .flat_map(|&x| powers.iter().map(move |&y| (x, y)))
                .map(|(x, y)| f.add(FqElem(x), FqElem(y)).0)
                .collect();
            if next.len() == cur.len() {
                return None;
            }
            cur = next;
            m += 1;
        }
    }

    #[test]
    fn cubes_in_small_fields() {
        let f4 = build_field(2, 2).unwrap();
        let r = power_residues(&f4, 3);
        assert_eq!(r.members.iter().collect::<Vec<_>>(), vec![0, 1]);
        let f7 = build_field(7, 1).unwrap();
        let r = power_residues(&f7, 3);
        assert_eq!(r.members.iter().collect::<Vec<_>>(), vec![0, 1, 6]);
        assert_eq!(r.size_star, 2);
    }

    #[test]
    fn worked_values() {
        assert_eq!(gamma(3, 7).unwrap().outcome, GammaOutcome::Covered(3));
        assert_eq!(gamma(3, 4).unwrap().outcome, GammaOutcome::Uncoverable);
        assert_eq!(gamma(4, 5).unwrap().gamma(), Some(4));
        assert_eq!(gamma(4, 13).unwrap().gamma(), Some(3));
        assert_eq!(gamma(8, 17).unwrap().gamma(), Some(8));
        assert_eq!(gamma(2, 16).unwrap().gamma(), Some(1));
        assert_eq!(gamma(2, 25).unwrap().gamma(), Some(2));
        assert_eq!(gamma(3, 6), Err(WaringError::NonPrimePowerQ(6)));
    }

    #[test]
    fn closure_sizes_shape() {
        let r = gamma(3, 7).unwrap();
        assert_eq!(r.closure_sizes, vec![3, 5, 7]);
        let r = gamma(3, 4).unwrap();
        assert_eq!(r.closure_sizes, vec![2]);
    }

    #[test]
    fn coset_engine_matches_naive_oracle() {
        for q in prime_powers_up_to(121).into_iter().map(|t| t.0) {
            for k in 1..=12 {
                let r = gamma(k, q).unwrap();
                assert_eq!(r.gamma(), naive_gamma(k, q), "k={k} q={q}");
                assert_eq!(r.gamma() == Some(1), gcd(k, q - 1) == 1);
                if let Some(g) = r.gamma() {
                    assert!(g as u64 <= k);
                }
            }
        }
    }

    #[test]
    fn plain_engine_matches_coset_engine() {
        for &(p, s) in &[(2u64, 4u32), (3, 2), (5, 2), (13, 1), (3, 3)] {
            let f = build_field(p, s).unwrap();
            for k in 1..=16 {
                let plain: Vec<u64> = closure_sets_plain(&f, k)
                    .iter()
                    .map(|b| b.count() as u64)
                    .collect();
                assert_eq!(plain, gamma_in(&f, k).closure_sizes);
            }
        }
    }

    #[test]
    fn uncoverable_closure_is_a_subfield() {
        let f = build_field(2, 4).unwrap();
        let sets = closure_sets_plain(&f, 5);
        let last = sets.last().unwrap();
        assert!(last.count() < 16);
        for a in last.iter() {
            for b in last.iter() {
                let (a, b) = (FqElem(a as u32), FqElem(b as u32));
                assert!(last.contains(f.add(a, b).0 as usize));
                assert!(last.contains(f.mul(a, b).0 as usize));
            }
        }
    }

    #[test]
    fn scans() {
        assert_eq!(uncoverable_fields(6, default_uncoverable_bound(6)).unwrap(), vec![4, 25]);
        assert!(uncoverable_fields(11, default_uncoverable_bound(11)).unwrap().is_empty());
        let t: Vec<u64> = gamma_table(5, 100, Some(5..=5)).unwrap().iter().map(|r| r.q).collect();
        assert_eq!(t, vec![11]);
        assert!(gamma_table(1, 50, None).unwrap().iter().all(|r| r.gamma() == Some(1)));
        assert_eq!(gamma_max(3).unwrap(), 3);
        assert_eq!(gamma_max(7).unwrap(), 4);
    }

    #[test]
    fn field_waring_representations_are_minimal_and_exact() {
        for &(p, s, k) in &[(7u64, 1u32, 3u64), (5, 1, 4), (5, 2, 4), (3, 2, 2), (13, 1, 6), (2, 6, 7), (17, 1, 8)] {
            let f = build_field(p, s).unwrap();
            let fw = FieldWaring::new(&f, k);
            assert_eq!(fw.gamma(), gamma_in(&f, k).gamma());
            for y in f.elements() {
                let w = fw.represent(y).unwrap_or_else(|| panic!("p={p} s={s} k={k} y={y:?} lvl={:?}", fw.level(y)));
                assert_eq!(w.len() as u32, fw.level(y).unwrap());
                let sum = w.iter().fold(FqElem::ZERO, |acc, &x| f.add(acc, f.pow(x, k)));
                assert_eq!(sum, y);
            }
        }
    }

    #[test]
    fn kth_roots() {
        let f = build_field(3, 3).unwrap();
        for k in 1..30 {
            for a in f.elements() {
                let y = f.pow(a, k);
                let r = kth_root(&f, y, k).unwrap();
                assert_eq!(f.pow(r, k), y);
            }
        }
        let f7 = build_field(7, 1).unwrap();
        assert_eq!(kth_root(&f7, FqElem(3), 3), None);
    }
}
