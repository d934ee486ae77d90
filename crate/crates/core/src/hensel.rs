//! Hensel lifting in `F_q[x]` and in finite commutative rings.
//!
//! Polynomials in `t` with coefficients in `F_q[x]` are plain vectors of
//! [`FqPoly`], constant term first. Every lift re-checks its postconditions
//! by exact reduction before returning.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WaringError};
use crate::field::{FieldCtx, FqElem};
use crate::gamma::{kth_root, FieldWaring};
use crate::poly::{residue_code, residue_field, residue_poly, FqPoly, PolyRing};

/// `Q(t) = Σ Q[i] t^i` over `F_q[x]`.
pub type PolyInT = Vec<FqPoly>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Result<u32> {
        match self {
            Valuation::Finite(v) => Ok(v),
            Valuation::Infinite => Err(WaringError::ZeroPolynomial),
        }
    }
}

/// Largest `v` with `f^v | g`; `Infinite` for `g = 0`.
pub fn f_adic_valuation(ring: &PolyRing, g: &FqPoly, f: &FqPoly) -> Valuation {
    if g.is_zero() {
        return Valuation::Infinite;
    }
    let mut v = 0;
    let mut cur = g.clone();
    loop {
        let (q, r) = ring.divrem(&cur, f).expect("nonzero modulus");
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        cur = q;
        v += 1;
    }
}

/// `p₂(x, y)` as a coefficient matrix: `coeffs[i][j]` multiplies `x^i y^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BivariateTail {
    pub coeffs: Vec<Vec<FqElem>>,
}

impl BivariateTail {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| c.is_zero())
    }

    pub fn coeff(&self, i: usize, j: usize) -> FqElem {
        self.coeffs
            .get(i)
            .and_then(|row| row.get(j))
            .copied()
            .unwrap_or(FqElem::ZERO)
    }
}

#[derive(Clone, Debug)]
pub struct TaylorSplit {
    pub p: FqPoly,
    pub dp: FqPoly,
    pub p2: BivariateTail,
}

/// `p(x + y) = p(x) + y p'(x) + y² p₂(x, y)`.
pub fn taylor_split(ring: &PolyRing, p: &FqPoly) -> TaylorSplit {
    let ctx = ring.ctx;
    let n = p.degree().unwrap_or(0);
    let binom = binomials_mod(n, ctx);
    let mut coeffs = vec![vec![FqElem::ZERO; n.saturating_sub(1)]; n.saturating_sub(1)];
    for (deg, &a) in p.coeffs().iter().enumerate() {
        for j in 2..=deg {
            let c = ctx.mul(a, binom[deg][j]);
            let cell = &mut coeffs[deg - j][j - 2];
            *cell = ctx.add(*cell, c);
        }
    }
    let split = TaylorSplit {
        p: p.clone(),
        dp: ring.derivative(p),
        p2: BivariateTail { coeffs },
    };
    debug_assert!(verify_taylor(ring, &split));
    split
}

fn binomials_mod(n: usize, ctx: &FieldCtx) -> Vec<Vec<FqElem>> {
    let mut rows: Vec<Vec<FqElem>> = vec![vec![FqElem::ONE]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let row = (0..=i)
            .map(|j| {
                let a = if j > 0 { prev[j - 1] } else { FqElem::ZERO };
                let b = prev.get(j).copied().unwrap_or(FqElem::ZERO);
                ctx.add(a, b)
            })
            .collect();
        rows.push(row);
    }
    rows
}

/// Checks the Taylor identity by expanding `(x + y)^n` as repeated products.
pub fn verify_taylor(ring: &PolyRing, split: &TaylorSplit) -> bool {
    let ctx = ring.ctx;
    let n = split.p.degree().unwrap_or(0);
    let size = n + 1;
    let mut lhs = vec![vec![FqElem::ZERO; size]; size];
    let mut power = vec![vec![FqElem::ZERO; size]; size];
    power[0][0] = FqElem::ONE;
    for (deg, &a) in split.p.coeffs().iter().enumerate() {
        if deg > 0 {
            let mut next = vec![vec![FqElem::ZERO; size]; size];
            for i in 0..size {
                for j in 0..size {
                    let c = power[i][j];
                    if c.is_zero() {
                        continue;
                    }
                    next[i + 1][j] = ctx.add(next[i + 1][j], c);
                    next[i][j + 1] = ctx.add(next[i][j + 1], c);
                }
            }
            power = next;
        }
        for i in 0..size {
            for j in 0..size {
                lhs[i][j] = ctx.add(lhs[i][j], ctx.mul(a, power[i][j]));
            }
        }
    }
    let mut rhs = vec![vec![FqElem::ZERO; size]; size];
    for (i, &c) in split.p.coeffs().iter().enumerate() {
        rhs[i][0] = ctx.add(rhs[i][0], c);
    }
    for (i, &c) in split.dp.coeffs().iter().enumerate() {
        rhs[i][1] = ctx.add(rhs[i][1], c);
    }
    for (i, row) in split.p2.coeffs.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            rhs[i][j + 2] = ctx.add(rhs[i][j + 2], c);
        }
    }
    lhs == rhs
}

/// `Q(g) mod m` by Horner's rule.
pub fn eval_t_mod(ring: &PolyRing, q: &[FqPoly], g: &FqPoly, m: &FqPoly) -> FqPoly {
    q.iter().rev().fold(FqPoly::zero(), |acc, c| {
        ring.reduce(&ring.add(&ring.mul(&acc, g), c), m)
    })
}

/// Formal derivative in `t`.
pub fn derivative_t(ring: &PolyRing, q: &[FqPoly]) -> PolyInT {
    q.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| ring.scale(c, ring.ctx.from_int(i as i64)))
        .collect()
}

fn reduced_is_zero(ring: &PolyRing, a: &FqPoly, m: &FqPoly) -> bool {
    ring.reduce(a, m).is_zero()
}

/// Weak form: from `Q(g) ≡ 0 mod f^n` and `f ∤ Q'(g)`, returns `g₂` with
/// `Q(g₂) ≡ 0 mod f^{n+m}` and `g₂ ≡ g mod f^n`, reduced mod `f^{n+m}`.
pub fn hensel_weak(ring: &PolyRing, q: &[FqPoly], g: &FqPoly, f: &FqPoly, n: u32, m: u32) -> Result<FqPoly> {
    hensel_weak_with(ring, q, g, f, n, m, false)
}

/// Same lift, but inverting `Q'(g)` modulo `f^{n+m}` instead of `f^m`; used to
/// check uniqueness of the lift.
pub fn hensel_weak_wide_inverse(
    ring: &PolyRing,
    q: &[FqPoly],
    g: &FqPoly,
    f: &FqPoly,
    n: u32,
    m: u32,
) -> Result<FqPoly> {
    hensel_weak_with(ring, q, g, f, n, m, true)
}

fn hensel_weak_with(
    ring: &PolyRing,
    q: &[FqPoly],
    g: &FqPoly,
    f: &FqPoly,
    n: u32,
    m: u32,
    wide: bool,
) -> Result<FqPoly> {
    if m < 1 || m > n {
        return Err(WaringError::InvalidInput(format!("need 1 <= m <= n, got n={n}, m={m}")));
    }
    let fn_ = ring.pow(f, n as u64);
    let fm = ring.pow(f, m as u64);
    let top = ring.pow(f, (n + m) as u64);
    let qg = eval_t_mod(ring, q, g, &top);
    if !reduced_is_zero(ring, &qg, &fn_) {
        return Err(WaringError::NotARoot);
    }
    let dq = eval_t_mod(ring, &derivative_t(ring, q), g, &top);
    if reduced_is_zero(ring, &dq, f) {
        return Err(WaringError::DerivativeNotUnit);
    }
    let h = ring.div_exact(&qg, &fn_)?;
    let correction = if wide {
        let a = ring.inv_mod(&dq, &top)?;
        ring.mul(&fn_, &ring.reduce(&ring.mul(&h, &a), &top))
    } else {
        let a = ring.inv_mod(&ring.reduce(&dq, &fm), &fm)?;
        ring.mul(&fn_, &ring.reduce(&ring.mul(&h, &a), &fm))
    };
    let g2 = ring.reduce(&ring.sub(g, &correction), &top);
    if !eval_t_mod(ring, q, &g2, &top).is_zero() || !reduced_is_zero(ring, &ring.sub(&g2, g), &fn_) {
        return Err(WaringError::VerificationFailed("weak lift postcondition".into()));
    }
    Ok(g2)
}

/// Valuation of `a`, knowing only `a mod f^cap`; reports `Infinite` when the
/// residue vanishes.
fn valuation_below(ring: &PolyRing, a: &FqPoly, f: &FqPoly, cap: &FqPoly) -> Valuation {
    f_adic_valuation(ring, &ring.reduce(a, cap), f)
}

/// Strong form: from `Q(g) ≡ 0 mod f^n` with `m = ν(Q'(g))` and `n > 2m`,
/// returns `g₂` (reduced mod `f^{n+1}`) with `Q(g₂) ≡ 0 mod f^{n+1}`,
/// `g₂ ≡ g mod f^{n-m}` and `ν(Q'(g₂)) = m`.
pub fn hensel_strong(ring: &PolyRing, q: &[FqPoly], g: &FqPoly, f: &FqPoly, n: u32) -> Result<FqPoly> {
    let fn_ = ring.pow(f, n as u64);
    let top = ring.mul(&fn_, f);
    let qg = eval_t_mod(ring, q, g, &top);
    if !reduced_is_zero(ring, &qg, &fn_) {
        return Err(WaringError::NotARoot);
    }
    let dq_poly = derivative_t(ring, q);
    let dq = eval_t_mod(ring, &dq_poly, g, &top);
    let m = match valuation_below(ring, &dq, f, &top) {
        Valuation::Finite(m) if n > 2 * m => m,
        v => {
            return Err(WaringError::HypothesisViolated(format!(
                "need n > 2·ν(Q'(g)); n = {n}, ν = {v:?}"
            )))
        }
    };
    let fm = ring.pow(f, m as u64);
    let h1 = ring.div_exact(&qg, &fn_)?;
    let h2 = ring.div_exact(&dq, &fm)?;
    let h2_inv = ring.inv_mod(&ring.reduce(&h2, f), f)?;
    let c = ring.reduce(&ring.mul(&h1, &h2_inv), f);
    let shift = ring.pow(f, (n - m) as u64);
    let g2 = ring.reduce(&ring.sub(g, &ring.mul(&shift, &c)), &top);

    if !eval_t_mod(ring, q, &g2, &top).is_zero() {
        return Err(WaringError::VerificationFailed("Q(g2) not 0 mod f^(n+1)".into()));
    }
    if !reduced_is_zero(ring, &ring.sub(&g2, g), &shift) {
        return Err(WaringError::VerificationFailed("g2 differs from g mod f^(n-m)".into()));
    }
    let dq2 = eval_t_mod(ring, &dq_poly, &g2, &top);
    if valuation_below(ring, &dq2, f, &top) != Valuation::Finite(m) {
        return Err(WaringError::VerificationFailed("valuation of Q'(g2) changed".into()));
    }
    Ok(g2)
}

/// Finite commutative ring with a computable Jacobson radical.
pub trait FiniteCommRing {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, if `a` is a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn in_radical(&self, a: &Self::Elem) -> bool;
    /// Least `l` with `J^l = 0`.
    fn nilpotency(&self) -> u32;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        let mut acc = self.zero();
        let unit = if n < 0 { self.neg(&self.one()) } else { self.one() };
        for _ in 0..n.unsigned_abs() {
            acc = self.add(&acc, &unit);
        }
        acc
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `Σ coeffs[i] x^i`.
    fn eval_poly(&self, coeffs: &[Self::Elem], x: &Self::Elem) -> Self::Elem {
        coeffs
            .iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }
}

/// Newton iteration to an exact root: needs `p(a₀) ∈ J` and `p'(a₀)` a unit.
/// Converges within `l` steps because `J^l = 0`.
pub fn radical_hensel<R: FiniteCommRing>(ring: &R, coeffs: &[R::Elem], a0: &R::Elem) -> Result<R::Elem> {
    let deriv: Vec<R::Elem> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| ring.mul(&ring.from_int(i as i64), c))
        .collect();
    if !ring.in_radical(&ring.eval_poly(coeffs, a0)) {
        return Err(WaringError::NoRootModJ);
    }
    if ring.inv(&ring.eval_poly(&deriv, a0)).is_none() {
        return Err(WaringError::DerivativeNotUnit);
    }
    let mut r = a0.clone();
    for _ in 0..=ring.nilpotency() {
        let v = ring.eval_poly(coeffs, &r);
        if v == ring.zero() {
            return Ok(r);
        }
        let d = ring
            .inv(&ring.eval_poly(&deriv, &r))
            .ok_or(WaringError::DerivativeNotUnit)?;
        r = ring.sub(&r, &ring.mul(&v, &d));
    }
    Err(WaringError::VerificationFailed("Newton iteration did not terminate within the nilpotency degree".into()))
}

/// `F_q[x]/(f)` for irreducible `f`, with conversions between residues and
/// field elements.
pub struct ResidueField {
    pub base: Arc<FieldCtx>,
    pub f: FqPoly,
    pub deg: usize,
    pub field: FieldCtx,
}

impl ResidueField {
    pub fn new(base: &Arc<FieldCtx>, f: &FqPoly) -> Result<Self> {
        let ring = PolyRing::new(base);
        let f = ring.monic(f)?;
        let field = residue_field(base, &f)?;
        Ok(ResidueField {
            base: base.clone(),
            deg: f.degree().unwrap_or(0),
            f,
            field,
        })
    }

    pub fn to_elem(&self, a: &FqPoly) -> FqElem {
        let ring = PolyRing::new(&self.base);
        FqElem(residue_code(&self.base, &ring.reduce(a, &self.f), self.deg))
    }

    pub fn to_poly(&self, a: FqElem) -> FqPoly {
        residue_poly(&self.base, a.0, self.deg)
    }
}

/// Lifts `Σ B_j^k ≡ target (mod f)` to witnesses for `target mod f^i`.
///
/// Zero witnesses are dropped. If all are zero, the pair `1, -1` (or `1, c`
/// with `c^k = -1`) is used, and for even `k` with `-1` not a k-th power,
/// `1` plus a representation of `-1` in the residue field. The last nonzero
/// witness is then lifted one power of `f` at a time.
pub fn lift_power_sum(
    res: &ResidueField,
    i: u32,
    target: &FqPoly,
    k: u64,
    base: &[FqPoly],
) -> Result<Vec<FqPoly>> {
    let ctx: &FieldCtx = &res.base;
    let ring = PolyRing::new(ctx);
    if k % ctx.p() as u64 == 0 {
        return Err(WaringError::CharDividesK {
            p: ctx.p() as u64,
            k,
        });
    }
    let f = &res.f;
    let sum_mod_f = base.iter().fold(FqPoly::zero(), |acc, b| {
        ring.add(&acc, &ring.pow_mod(b, k as u128, f).expect("nonzero modulus"))
    });
    if !reduced_is_zero(&ring, &ring.sub(&sum_mod_f, target), f) {
        return Err(WaringError::BaseNotARepresentation);
    }
    if i <= 1 {
        return Ok(base.to_vec());
    }
    let top = ring.pow(f, i as u64);
    let target = ring.reduce(target, &top);
    if target.is_zero() {
        return Ok(vec![FqPoly::zero(); base.len().max(1)]);
    }
    let mut ws: Vec<FqPoly> = base
        .iter()
        .map(|b| ring.reduce(b, &top))
        .filter(|b| !reduced_is_zero(&ring, b, f))
        .collect();
    if ws.is_empty() {
        let rf = &res.field;
        let minus_one = rf.neg(FqElem::ONE);
        ws.push(FqPoly::one());
        if k % 2 == 1 {
            ws.push(ring.neg(&FqPoly::one()));
        } else if let Some(c) = kth_root(rf, minus_one, k) {
            ws.push(res.to_poly(c));
        } else {
            let fw = FieldWaring::new(rf, k);
            let rep = fw
                .represent(minus_one)
                .ok_or_else(|| WaringError::ResidueFieldUncoverable {
                    factor: f.to_string(),
                    order: rf.q() as u64,
                    k,
                })?;
            ws.extend(rep.into_iter().map(|e| res.to_poly(e)));
        }
    }
    let last = ws.pop().expect("at least one nonzero witness");
    let others_sum = ws.iter().fold(FqPoly::zero(), |acc, b| {
        ring.add(&acc, &ring.pow_mod(b, k as u128, &top).expect("nonzero modulus"))
    });
    let mut q = vec![FqPoly::zero(); k as usize + 1];
    q[0] = ring.reduce(&ring.sub(&others_sum, &target), &top);
    q[k as usize] = FqPoly::one();
    let mut g = last;
    for n in 1..i {
        g = hensel_strong(&ring, &q, &g, f, n)?;
    }
    ws.push(ring.reduce(&g, &top));
    let total = ws.iter().fold(FqPoly::zero(), |acc, b| {
        ring.add(&acc, &ring.pow_mod(b, k as u128, &top).expect("nonzero modulus"))
    });
    if ring.reduce(&total, &top) != target {
        return Err(WaringError::VerificationFailed("lifted witnesses do not sum to target".into()));
    }
    Ok(ws)
}
