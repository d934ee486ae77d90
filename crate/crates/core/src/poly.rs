//! Dense univariate polynomials over `F_q`, factorization, and residue fields
//! `F_q[x]/(f)` presented as finite fields in their own right.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WaringError};
use crate::field::{size_cap, FieldCtx, FqElem, Presentation};

/// Default seed for the randomized equal-degree splitting.
pub const DEFAULT_FACTOR_SEED: u64 = 0x5eed_0f_fac7;

/// Polynomial with coefficients constant-first and no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FqPoly(Vec<FqElem>);

impl fmt::Debug for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let coef = if c.0 == 1 && i > 0 { String::new() } else { c.0.to_string() };
            match i {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}x")?,
                _ => write!(f, "{coef}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl FqPoly {
    pub fn zero() -> Self {
        FqPoly(Vec::new())
    }

    pub fn one() -> Self {
        FqPoly(vec![FqElem::ONE])
    }

    pub fn x() -> Self {
        FqPoly(vec![FqElem::ZERO, FqElem::ONE])
    }

    pub fn constant(c: FqElem) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: FqElem, n: usize) -> Self {
        let mut v = vec![FqElem::ZERO; n + 1];
        v[n] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut v: Vec<FqElem>) -> Self {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        FqPoly(v)
    }

    pub fn from_codes(codes: &[u32]) -> Self {
        Self::from_coeffs(codes.iter().map(|&c| FqElem(c)).collect())
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.0
    }

    pub fn codes(&self) -> Vec<u32> {
        self.0.iter().map(|c| c.0).collect()
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.0.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0] == FqElem::ONE
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> FqElem {
        self.0.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }
}

/// Arithmetic in `F_q[x]` for a fixed field.
#[derive(Clone, Copy)]
pub struct PolyRing<'a> {
    pub ctx: &'a FieldCtx,
}

impl<'a> PolyRing<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Self {
        PolyRing { ctx }
    }

    pub fn add(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let n = a.0.len().max(b.0.len());
        FqPoly::from_coeffs((0..n).map(|i| self.ctx.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn sub(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let n = a.0.len().max(b.0.len());
        FqPoly::from_coeffs((0..n).map(|i| self.ctx.sub(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn neg(&self, a: &FqPoly) -> FqPoly {
        FqPoly(a.0.iter().map(|&c| self.ctx.neg(c)).collect())
    }

    pub fn scale(&self, a: &FqPoly, c: FqElem) -> FqPoly {
        FqPoly::from_coeffs(a.0.iter().map(|&x| self.ctx.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        if a.is_zero() || b.is_zero() {
            return FqPoly::zero();
        }
        let mut out = vec![FqElem::ZERO; a.0.len() + b.0.len() - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                out[i + j] = self.ctx.add(out[i + j], self.ctx.mul(x, y));
            }
        }
        FqPoly::from_coeffs(out)
    }

    pub fn divrem(&self, a: &FqPoly, b: &FqPoly) -> Result<(FqPoly, FqPoly)> {
        let db = b.degree().ok_or(WaringError::DivisionByZero)?;
        let inv = self.ctx.inv(b.lead())?;
        let mut r = a.0.clone();
        if r.len() <= db {
            return Ok((FqPoly::zero(), a.clone()));
        }
        let mut quot = vec![FqElem::ZERO; r.len() - db];
        for top in (db..r.len()).rev() {
            let c = self.ctx.mul(r[top], inv);
            if c.is_zero() {
                continue;
            }
            quot[top - db] = c;
            for (i, &bi) in b.0.iter().enumerate() {
                let idx = top - db + i;
                r[idx] = self.ctx.sub(r[idx], self.ctx.mul(c, bi));
            }
        }
        r.truncate(db);
        Ok((FqPoly::from_coeffs(quot), FqPoly::from_coeffs(r)))
    }

    pub fn rem(&self, a: &FqPoly, b: &FqPoly) -> Result<FqPoly> {
        Ok(self.divrem(a, b)?.1)
    }

    /// Quotient, failing unless the division is exact.
    pub fn div_exact(&self, a: &FqPoly, b: &FqPoly) -> Result<FqPoly> {
        let (q, r) = self.divrem(a, b)?;
        if !r.is_zero() {
            return Err(WaringError::VerificationFailed(format!("{b} does not divide {a}")));
        }
        Ok(q)
    }

    pub fn mul_mod(&self, a: &FqPoly, b: &FqPoly, m: &FqPoly) -> Result<FqPoly> {
        self.rem(&self.mul(a, b), m)
    }

    pub fn pow(&self, a: &FqPoly, mut e: u64) -> FqPoly {
        let mut acc = FqPoly::one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn pow_mod(&self, a: &FqPoly, mut e: u128, m: &FqPoly) -> Result<FqPoly> {
        let mut acc = self.rem(&FqPoly::one(), m)?;
        let mut base = self.rem(a, m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_mod(&acc, &base, m)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_mod(&base, &base, m)?;
            }
        }
        Ok(acc)
    }

    pub fn monic(&self, a: &FqPoly) -> Result<FqPoly> {
        if a.is_zero() {
            return Ok(FqPoly::zero());
        }
        Ok(self.scale(a, self.ctx.inv(a.lead())?))
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        self.monic(&a).expect("nonzero lead")
    }

    /// `(g, s, t)` with `s a + t b = g` and `g` monic.
    pub fn ext_gcd(&self, a: &FqPoly, b: &FqPoly) -> (FqPoly, FqPoly, FqPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (FqPoly::one(), FqPoly::zero());
        let (mut t0, mut t1) = (FqPoly::zero(), FqPoly::one());
        while !r1.is_zero() {
            let (q, r) = self.divrem(&r0, &r1).expect("nonzero divisor");
            let s = self.sub(&s0, &self.mul(&q, &s1));
            let t = self.sub(&t0, &self.mul(&q, &t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (t0, t1) = (t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = self.ctx.inv(r0.lead()).expect("nonzero lead");
        (self.scale(&r0, c), self.scale(&s0, c), self.scale(&t0, c))
    }

    /// Inverse of `a` modulo `m` by Bezout.
    pub fn inv_mod(&self, a: &FqPoly, m: &FqPoly) -> Result<FqPoly> {
        let (g, s, _) = self.ext_gcd(a, m);
        if !g.is_one() {
            return Err(WaringError::DivisionByZero);
        }
        self.rem(&s, m)
    }

    pub fn lcm(&self, a: &FqPoly, b: &FqPoly) -> Result<FqPoly> {
        if a.is_zero() || b.is_zero() {
            return Ok(FqPoly::zero());
        }
        let g = self.gcd(a, b);
        self.monic(&self.mul(&self.div_exact(a, &g)?, b))
    }

    pub fn derivative(&self, a: &FqPoly) -> FqPoly {
        FqPoly::from_coeffs(
            a.0.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| self.ctx.mul(self.ctx.from_int(i as i64), c))
                .collect(),
        )
    }

    pub fn eval(&self, a: &FqPoly, x: FqElem) -> FqElem {
        a.0.iter()
            .rev()
            .fold(FqElem::ZERO, |acc, &c| self.ctx.add(self.ctx.mul(acc, x), c))
    }

    /// `a(b(x))`.
    pub fn compose(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        a.0.iter().rev().fold(FqPoly::zero(), |acc, &c| {
            self.add(&self.mul(&acc, b), &FqPoly::constant(c))
        })
    }

    /// Ben-Or: `gcd(x^{q^i} - x, f) = 1` for `1 <= i <= deg/2`.
    pub fn is_irreducible(&self, f: &FqPoly) -> bool {
        let Some(n) = f.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let x = FqPoly::x();
        let mut h = x.clone();
        for _ in 1..=n / 2 {
            h = self.pow_mod(&h, self.ctx.q() as u128, f).expect("nonzero modulus");
            if !self.gcd(f, &self.sub(&h, &x)).is_one() {
                return false;
            }
        }
        true
    }

    /// Coefficientwise `p`-th root of a polynomial in `x^p`.
    fn pth_root(&self, a: &FqPoly) -> FqPoly {
        let p = self.ctx.p() as usize;
        let e = (self.ctx.q() / self.ctx.p()) as u64;
        FqPoly::from_coeffs(
            a.0.iter()
                .step_by(p)
                .map(|&c| self.ctx.pow(c, e))
                .collect(),
        )
    }

    /// Squarefree decomposition of a monic polynomial: `(g_i, i)` with `f = ∏ g_i^i`.
    pub fn squarefree(&self, f: &FqPoly) -> Vec<(FqPoly, u32)> {
        let mut out = Vec::new();
        if f.is_constant() {
            return out;
        }
        let df = self.derivative(f);
        let mut c = self.gcd(f, &df);
        let mut w = self.div_exact(f, &c).expect("gcd divides");
        let mut i = 1;
        while !w.is_one() {
            let y = self.gcd(&w, &c);
            let fac = self.div_exact(&w, &y).expect("gcd divides");
            if !fac.is_one() {
                out.push((fac, i));
            }
            w = y;
            c = self.div_exact(&c, &w).expect("gcd divides");
            i += 1;
        }
        if !c.is_one() {
            let root = self.pth_root(&c);
            for (g, j) in self.squarefree(&root) {
                out.push((g, j * self.ctx.p()));
            }
        }
        out
    }

    /// Distinct-degree split of a squarefree monic polynomial.
    pub fn distinct_degree(&self, f: &FqPoly) -> Vec<(FqPoly, usize)> {
        let mut out = Vec::new();
        let mut f = f.clone();
        let x = FqPoly::x();
        let mut h = x.clone();
        let mut i = 1;
        while f.degree().unwrap_or(0) >= 2 * i {
            h = self.pow_mod(&h, self.ctx.q() as u128, &f).expect("nonzero modulus");
            let g = self.gcd(&self.sub(&h, &x), &f);
            if !g.is_one() {
                f = self.div_exact(&f, &g).expect("gcd divides");
                h = self.rem(&h, &f).expect("nonzero modulus");
                out.push((g, i));
            }
            i += 1;
        }
        if let Some(n) = f.degree() {
            if n > 0 {
                out.push((f, n));
            }
        }
        out
    }

    /// Cantor-Zassenhaus splitting of a product of distinct degree-`d` irreducibles.
    pub fn equal_degree(&self, f: &FqPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<FqPoly> {
        let n = f.degree().unwrap_or(0);
        if n <= d {
            return vec![f.clone()];
        }
        let q = self.ctx.q() as u128;
        loop {
            let a = FqPoly::from_coeffs((0..n).map(|_| FqElem(rng.random_range(0..q as u32))).collect());
            if a.is_constant() {
                continue;
            }
            let b = if self.ctx.p() == 2 {
                // Absolute trace of a over F_2, evaluated modulo f.
                let mut acc = FqPoly::zero();
                let mut t = self.rem(&a, f).expect("nonzero modulus");
                for _ in 0..(self.ctx.s() as usize * d) {
                    acc = self.add(&acc, &t);
                    t = self.mul_mod(&t, &t, f).expect("nonzero modulus");
                }
                acc
            } else {
                // a^{(q^d - 1)/2} = (a^{1 + q + ... + q^{d-1}})^{(q-1)/2}
                let mut norm = FqPoly::one();
                let mut t = self.rem(&a, f).expect("nonzero modulus");
                for _ in 0..d {
                    norm = self.mul_mod(&norm, &t, f).expect("nonzero modulus");
                    t = self.pow_mod(&t, q, f).expect("nonzero modulus");
                }
                let half = self.pow_mod(&norm, (q - 1) / 2, f).expect("nonzero modulus");
                self.sub(&half, &FqPoly::one())
            };
            let g = self.gcd(&b, f);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < n {
                let h = self.div_exact(f, &g).expect("gcd divides");
                let mut out = self.equal_degree(&g, d, rng);
                out.extend(self.equal_degree(&h, d, rng));
                return out;
            }
        }
    }

    /// Full factorization of a nonzero polynomial into monic irreducibles with
    /// multiplicities, sorted by degree then coefficients.
    pub fn factorize_seeded(&self, f: &FqPoly, seed: u64) -> Result<Vec<(FqPoly, u32)>> {
        if f.is_zero() {
            return Err(WaringError::ZeroPolynomial);
        }
        let f = self.monic(f)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (g, mult) in self.squarefree(&f) {
            for (h, d) in self.distinct_degree(&g) {
                for irr in self.equal_degree(&h, d, &mut rng) {
                    out.push((irr, mult));
                }
            }
        }
        out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.cmp(&b.0)));
        Ok(out)
    }

    pub fn factorize(&self, f: &FqPoly) -> Result<Vec<(FqPoly, u32)>> {
        self.factorize_seeded(f, DEFAULT_FACTOR_SEED)
    }

    /// Reduction of every coefficient-code residue: canonical representative
    /// of `a mod m` of degree `< deg m`.
    pub fn reduce(&self, a: &FqPoly, m: &FqPoly) -> FqPoly {
        self.rem(a, m).expect("nonzero modulus")
    }

    /// Parses `3x^2+x+1`, with coefficients as integer codes or `(g+1)`-style elements.
    pub fn parse(&self, text: &str) -> Result<FqPoly> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || WaringError::InvalidInput(format!("cannot parse polynomial '{text}'"));
        if t.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut depth = 0;
        let mut start = 0;
        for (i, ch) in t.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' | '-' if depth == 0 && i > start => {
                    terms.push(&t[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        terms.push(&t[start..]);
        let mut acc = FqPoly::zero();
        for term in terms {
            let term = term.strip_prefix('+').unwrap_or(term);
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term),
            };
            let (coef_txt, exp) = match body.rfind('x') {
                None => (body, 0),
                Some(pos) if !body[pos..].contains(')') => {
                    let rest = &body[pos + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?
                    };
                    (body[..pos].trim_end_matches('*'), e)
                }
                Some(_) => (body, 0),
            };
            let coef = match coef_txt {
                "" => FqElem::ONE,
                c if c.starts_with('(') && c.ends_with(')') => self.ctx.parse_elem(&c[1..c.len() - 1])?,
                c => self.ctx.parse_elem(c)?,
            };
            let coef = if neg { self.ctx.neg(coef) } else { coef };
            acc = self.add(&acc, &FqPoly::monomial(coef, exp));
        }
        Ok(acc)
    }
}

/// Element code of the residue `a mod f` in the field built by [`residue_field`].
pub fn residue_code(ctx: &FieldCtx, a: &FqPoly, deg: usize) -> u32 {
    let q = ctx.q();
    (0..deg).rev().fold(0u32, |acc, i| acc * q + a.coeff(i).0)
}

/// Inverse of [`residue_code`].
pub fn residue_poly(ctx: &FieldCtx, mut code: u32, deg: usize) -> FqPoly {
    let q = ctx.q();
    let mut v = Vec::with_capacity(deg);
    for _ in 0..deg {
        v.push(FqElem(code % q));
        code /= q;
    }
    FqPoly::from_coeffs(v)
}

/// The field `F_q[x]/(f)` for irreducible `f`, with stacked base-`p` codes.
pub fn residue_field(base: &Arc<FieldCtx>, f: &FqPoly) -> Result<FieldCtx> {
    let ring = PolyRing::new(base);
    let deg = f.degree().ok_or(WaringError::ZeroPolynomial)?;
    if deg == 0 {
        return Err(WaringError::InvalidInput("modulus must be nonconstant".into()));
    }
    if !ring.is_irreducible(f) {
        return Err(WaringError::InvalidInput(format!("{f} is not irreducible")));
    }
    let f = ring.monic(f)?;
    let total = (base.q() as u128).pow(deg as u32);
    let cap = size_cap();
    if total > cap as u128 || total > u32::MAX as u128 {
        return Err(WaringError::SizeCapExceeded { size: total, cap });
    }
    if deg == 1 {
        // F_q[x]/(x - c) is F_q itself; keep the same encoding.
        let b = base.clone();
        let mul = move |a: u32, c: u32| b.mul(FqElem(a), FqElem(c)).0;
        return FieldCtx::from_multiplication(
            base.p(),
            base.s(),
            base.q(),
            Presentation::Extension {
                base: base.clone(),
                modulus: f.coeffs().to_vec(),
            },
            &mul,
        );
    }
    let b = base.clone();
    let fm = f.clone();
    let mul = move |a: u32, c: u32| {
        let r = PolyRing::new(&b);
        let pa = residue_poly(&b, a, deg);
        let pc = residue_poly(&b, c, deg);
        residue_code(&b, &r.mul_mod(&pa, &pc, &fm).expect("nonzero modulus"), deg)
    };
    FieldCtx::from_multiplication(
        base.p(),
        base.s() * deg as u32,
        total as u32,
        Presentation::Extension {
            base: base.clone(),
            modulus: f.coeffs().to_vec(),
        },
        &mul,
    )
}
