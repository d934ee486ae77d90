//! Finite fields `F_q = F_p[t]/(f)` with dense integer element codes.
//!
//! An element is encoded as the base-`p` integer whose digits are the
//! coefficients of its representative polynomial, constant term first
//! (least significant). Code 0 is zero and code 1 is one. Multiplication
//! goes through discrete log tables relative to a canonical generator.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime};
use crate::error::{Result, WaringError};

/// Default bound on `q`; log tables are `O(q)` memory.
pub const DEFAULT_SIZE_CAP: u64 = 1 << 24;

/// Field size cap, overridable through the `WARING_SIZE_CAP` environment variable.
pub fn size_cap() -> u64 {
    static CAP: OnceLock<u64> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("WARING_SIZE_CAP")
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .filter(|&v| v >= 2)
            .unwrap_or(DEFAULT_SIZE_CAP)
    })
}

/// Element of `F_q`, by code.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FqElem(pub u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// How the digits of an element code are interpreted.
#[derive(Clone, Debug)]
pub enum Presentation {
    /// `F_p[t]/(modulus)`, modulus given as `F_p` coefficients, constant first.
    Canonical { modulus: Vec<u32> },
    /// `base[x]/(modulus)`: code = sum of base codes times `|base|^i`.
    Extension {
        base: Arc<FieldCtx>,
        modulus: Vec<FqElem>,
    },
}

/// Immutable context of a finite field with log/antilog tables.
pub struct FieldCtx {
    p: u32,
    s: u32,
    q: u32,
    presentation: Presentation,
    generator: FqElem,
    log: Vec<u32>,
    antilog: Vec<u32>,
    trace_basis: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("s", &self.s)
            .field("q", &self.q)
            .field("generator", &self.generator)
            .finish()
    }
}

/// Builds the canonical `F_{p^s}` with the default size cap.
pub fn build_field(p: u64, s: u32) -> Result<FieldCtx> {
    build_field_capped(p, s, size_cap())
}

/// Builds `F_q` from its order.
pub fn field_of_order(q: u64) -> Result<FieldCtx> {
    let (p, s) = crate::arith::prime_power(q).ok_or(WaringError::NonPrimePowerQ(q))?;
    build_field(p, s)
}

pub fn build_field_capped(p: u64, s: u32, cap: u64) -> Result<FieldCtx> {
    if !is_prime(p) {
        return Err(WaringError::NonPrimeP(p));
    }
    if s == 0 {
        return Err(WaringError::InvalidInput("extension degree must be >= 1".into()));
    }
    let q = (p as u128).checked_pow(s).unwrap_or(u128::MAX);
    if q > cap as u128 || q > u32::MAX as u128 {
        return Err(WaringError::SizeCapExceeded { size: q, cap });
    }
    let p = p as u32;
    let q = q as u32;
    let modulus = if s == 1 {
        vec![0, 1]
    } else {
        smallest_irreducible(p, s)
    };
    let m2 = modulus.clone();
    let mul = move |a: u32, b: u32| canonical_mul(p, s, &m2, a, b);
    FieldCtx::from_multiplication(p, s, q, Presentation::Canonical { modulus }, &mul)
}

/// Lexicographically smallest monic irreducible of degree `s` over `F_p`.
fn smallest_irreducible(p: u32, s: u32) -> Vec<u32> {
    let count = (p as u64).pow(s);
    for lower in 0..count {
        let mut f = digits(lower as u32, p, s as usize);
        f.push(1);
        if fp_poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn digits(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = code % p;
        code /= p;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn canonical_mul(p: u32, s: u32, modulus: &[u32], a: u32, b: u32) -> u32 {
    if s == 1 {
        return ((a as u64 * b as u64) % p as u64) as u32;
    }
    let da = digits(a, p, s as usize);
    let db = digits(b, p, s as usize);
    let prod = fp_poly::mul(&da, &db, p);
    let r = fp_poly::rem(&prod, modulus, p);
    let mut out = r;
    out.resize(s as usize, 0);
    undigits(&out, p)
}

impl FieldCtx {
    /// Builds tables from an arbitrary multiplication on base-`p` codes of
    /// length `s` whose addition is digitwise mod `p`.
    pub(crate) fn from_multiplication(
        p: u32,
        s: u32,
        q: u32,
        presentation: Presentation,
        mul: &dyn Fn(u32, u32) -> u32,
    ) -> Result<FieldCtx> {
        let order = q - 1;
        let order_primes: Vec<u64> = factorize(order as u64).into_iter().map(|f| f.0).collect();
        let pow = |mut base: u32, mut e: u64| -> u32 {
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul(acc, base);
                }
                base = mul(base, base);
                e >>= 1;
            }
            acc
        };
        let generator = (1..q)
            .find(|&c| {
                order_primes
                    .iter()
                    .all(|&r| pow(c, order as u64 / r) != 1)
                    && pow(c, order as u64) == 1
            })
            .ok_or_else(|| {
                WaringError::InvalidInput("no element of order q-1: modulus is not irreducible".into())
            })?;

        let mut ctx = FieldCtx {
            p,
            s,
            q,
            presentation,
            generator: FqElem(generator),
            log: vec![u32::MAX; q as usize],
            antilog: vec![0; order as usize],
            trace_basis: Vec::new(),
        };

        // Multiplication by the generator is F_p-linear in the digit vector:
        // split the digits in two halves and tabulate each half.
        let lo_digits = s / 2;
        let hi_digits = s - lo_digits;
        let lo_size = p.pow(lo_digits);
        let hi_size = p.pow(hi_digits);
        let images: Vec<u32> = (0..s).map(|j| mul(generator, p.pow(j))).collect();
        let lo_table = ctx.linear_table(&images[..lo_digits as usize], lo_size);
        let hi_table = ctx.linear_table(&images[lo_digits as usize..], hi_size);
        let mut x = 1u32;
        for e in 0..order {
            if ctx.log[x as usize] != u32::MAX {
                return Err(WaringError::VerificationFailed(format!(
                    "generator {generator} has order {e} < {order}"
                )));
            }
            ctx.antilog[e as usize] = x;
            ctx.log[x as usize] = e;
            x = ctx.add_codes(lo_table[(x % lo_size) as usize], hi_table[(x / lo_size) as usize]);
        }
        if x != 1 {
            return Err(WaringError::VerificationFailed("antilog cycle does not close".into()));
        }
        ctx.trace_basis = (0..s)
            .map(|j| ctx.trace_by_definition(FqElem(p.pow(j))).0)
            .collect();
        Ok(ctx)
    }

    fn linear_table(&self, images: &[u32], size: u32) -> Vec<u32> {
        let mut table = vec![0u32; size as usize];
        for v in 1..size {
            let mut j = 0;
            let mut place = 1;
            while (v / place) % self.p == 0 {
                j += 1;
                place *= self.p;
            }
            table[v as usize] = self.add_codes(table[(v - place) as usize], images[j]);
        }
        table
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// `F_p` coefficients of the defining polynomial for canonical fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        match &self.presentation {
            Presentation::Canonical { modulus } => Some(modulus),
            Presentation::Extension { .. } => None,
        }
    }

    pub fn generator(&self) -> FqElem {
        self.generator
    }

    pub fn elem(&self, code: u32) -> Result<FqElem> {
        if code < self.q {
            Ok(FqElem(code))
        } else {
            Err(WaringError::InvalidInput(format!(
                "element code {code} out of range for q = {}",
                self.q
            )))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q).map(FqElem)
    }

    /// Prime-field element `n mod p` (the image of an integer).
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    fn add_codes(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        if p == 2 {
            return a ^ b;
        }
        if self.s == 1 {
            let c = a + b;
            return if c >= p { c - p } else { c };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            let d = a % p + b % p;
            out += if d >= p { d - p } else { d } * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.add_codes(a.0, b.0))
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        let p = self.p;
        if p == 2 {
            return a;
        }
        if self.s == 1 {
            return FqElem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        while x > 0 {
            let d = x % p;
            out += if d == 0 { 0 } else { p - d } * place;
            x /= p;
            place *= p;
        }
        FqElem(out)
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    /// `a + 1`, touching only the constant digit.
    #[inline]
    pub fn add_one(&self, a: FqElem) -> FqElem {
        let d0 = a.0 % self.p;
        let next = if d0 + 1 == self.p { 0 } else { d0 + 1 };
        FqElem(a.0 - d0 + next)
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem::ZERO;
        }
        let order = self.q - 1;
        let e = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        FqElem(self.antilog[(e % order as u64) as usize])
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(WaringError::DivisionByZero);
        }
        let order = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(FqElem(self.antilog[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        if e == 0 {
            return FqElem::ONE;
        }
        if a.0 == 0 {
            return FqElem::ZERO;
        }
        let order = (self.q - 1) as u128;
        let l = self.log[a.0 as usize] as u128;
        FqElem(self.antilog[((l * e as u128) % order) as usize])
    }

    /// Discrete log relative to the generator; `None` for zero.
    pub fn log(&self, a: FqElem) -> Option<u32> {
        if a.0 == 0 {
            None
        } else {
            Some(self.log[a.0 as usize])
        }
    }

    /// `generator^e`.
    pub fn antilog(&self, e: u64) -> FqElem {
        FqElem(self.antilog[(e % (self.q as u64 - 1)) as usize])
    }

    /// Field trace to `F_p` computed as `sum_i a^(p^i)`.
    pub fn trace_by_definition(&self, a: FqElem) -> FqElem {
        let mut acc = FqElem::ZERO;
        let mut x = a;
        for _ in 0..self.s {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        acc
    }

    /// Field trace via linearity over the digit basis; agrees with
    /// [`FieldCtx::trace_by_definition`].
    pub fn trace(&self, a: FqElem) -> u32 {
        if self.s == 1 {
            return a.0;
        }
        let p = self.p as u64;
        let mut x = a.0;
        let mut acc = 0u64;
        for &t in &self.trace_basis {
            acc += (x % self.p) as u64 * t as u64;
            x /= self.p;
        }
        (acc % p) as u32
    }

    /// Base-`p` digits of the code, constant first.
    pub fn digits(&self, a: FqElem) -> Vec<u32> {
        digits(a.0, self.p, self.s as usize)
    }

    pub fn from_digits(&self, ds: &[u32]) -> FqElem {
        FqElem(undigits(ds, self.p))
    }

    /// Parses an integer code or a polynomial in `g` such as `2g^2+g+1`.
    pub fn parse_elem(&self, text: &str) -> Result<FqElem> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(WaringError::InvalidInput("empty element".into()));
        }
        if let Ok(code) = t.parse::<u32>() {
            return self.elem(code);
        }
        if !t.contains('g') {
            return Err(WaringError::InvalidInput(format!("cannot parse element '{text}'")));
        }
        let bad = || WaringError::InvalidInput(format!("cannot parse element '{text}'"));
        let mut coeffs = vec![0i64; self.s as usize];
        let normalized = t.replace('-', "+-");
        for term in normalized.split('+').filter(|s| !s.is_empty()) {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-1i64, rest),
                None => (1, term),
            };
            let (coef, exp) = match body.find('g') {
                None => (body.parse::<i64>().map_err(|_| bad())?, 0usize),
                Some(pos) => {
                    let c = match &body[..pos] {
                        "" => 1,
                        c => c.trim_end_matches('*').parse::<i64>().map_err(|_| bad())?,
                    };
                    let rest = &body[pos + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .ok_or_else(bad)?
                            .parse::<usize>()
                            .map_err(|_| bad())?
                    };
                    (c, e)
                }
            };
            if exp >= self.s as usize {
                return Err(WaringError::InvalidInput(format!(
                    "exponent {exp} not below extension degree {}",
                    self.s
                )));
            }
            coeffs[exp] += sign * coef;
        }
        let ds: Vec<u32> = coeffs
            .iter()
            .map(|&c| c.rem_euclid(self.p as i64) as u32)
            .collect();
        Ok(self.from_digits(&ds))
    }

    /// Renders an element as a polynomial in `g` (for diagnostics).
    pub fn format_poly(&self, a: FqElem) -> String {
        if a.0 == 0 {
            return "0".into();
        }
        let ds = self.digits(a);
        let mut terms = Vec::new();
        for (i, &d) in ds.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let c = if d == 1 && i > 0 { String::new() } else { d.to_string() };
            terms.push(match i {
                0 => c,
                1 => format!("{c}g"),
                _ => format!("{c}g^{i}"),
            });
        }
        terms.join("+")
    }
}

/// Dense polynomial helpers over a prime field on `u32` coefficient vectors,
/// used only while constructing a field.
pub(crate) mod fp_poly {
    fn trim(mut v: Vec<u32>) -> Vec<u32> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    fn inv(a: u32, p: u32) -> u32 {
        crate::arith::pow_mod(a as u64, p as u64 - 2, p as u64) as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p) as u64;
        while r.len() > dm {
            let top = r.len() - 1;
            let c = (r[top] as u64 * lead_inv) % p as u64;
            if c != 0 {
                for (i, &mi) in m.iter().enumerate() {
                    let idx = top - dm + i;
                    r[idx] = ((r[idx] as u64 + (p as u64 - c) * mi as u64) % p as u64) as u32;
                }
            }
            r.pop();
            r = trim(r);
        }
        r
    }

    fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    fn pow_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut acc = vec![1];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        acc
    }

    /// Ben-Or: `f` of degree `s` is irreducible iff `gcd(x^(p^i) - x, f) = 1`
    /// for every `1 <= i <= s/2`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let f = trim(f.to_vec());
        let s = f.len() - 1;
        if s == 0 {
            return false;
        }
        if s == 1 {
            return true;
        }
        let x = vec![0, 1];
        let mut xp = x.clone();
        for _ in 1..=s / 2 {
            xp = pow_mod(&xp, p as u64, &f, p);
            let g = gcd(&f, &sub(&xp, &x, p), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trial division against every monic polynomial of degree <= s/2.
    fn irreducible_by_trial_division(f: &[u32], p: u32) -> bool {
        let s = f.len() - 1;
        for deg in 1..=s / 2 {
            for lower in 0..p.pow(deg as u32) {
                let mut g = digits(lower, p, deg);
                g.push(1);
                if fp_poly::rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn f4_matches_worked_example() {
        let f4 = build_field(2, 2).unwrap();
        assert_eq!(f4.modulus().unwrap(), &[1, 1, 1]);
        let t = FqElem(2);
        let t1 = FqElem(3);
        assert_eq!(f4.mul(t, t1), FqElem::ONE);
        assert_eq!(f4.pow(t, 2), t1);
        assert_eq!(f4.pow(t, 3), FqElem::ONE);
        assert_eq!(f4.pow(t1, 3), FqElem::ONE);
        assert_eq!(f4.trace_by_definition(t), FqElem::ONE);
        assert_eq!(f4.trace(t), 1);
    }

    #[test]
    fn prime_field_is_plain_modular_arithmetic() {
        let f7 = build_field(7, 1).unwrap();
        assert_eq!(f7.modulus().unwrap(), &[0, 1]);
        assert_eq!(f7.generator(), FqElem(3));
        for a in 0..7 {
            assert_eq!(f7.trace(FqElem(a)), a);
            for b in 0..7 {
                assert_eq!(f7.mul(FqElem(a), FqElem(b)).0, a * b % 7);
                assert_eq!(f7.add(FqElem(a), FqElem(b)).0, (a + b) % 7);
            }
        }
    }

    #[test]
    fn f9_tables_round_trip() {
        let f9 = build_field(3, 2).unwrap();
        assert_eq!(f9.modulus().unwrap(), &[1, 0, 1]);
        let g = f9.generator();
        let mut x = FqElem::ONE;
        for e in 1..=8 {
            x = f9.mul(x, g);
            assert_eq!(x == FqElem::ONE, e == 8, "generator order must be 8");
        }
        for a in 1..9 {
            let a = FqElem(a);
            assert_eq!(f9.antilog(f9.log(a).unwrap() as u64), a);
        }
        let mut counts = [0; 3];
        for a in f9.elements() {
            counts[f9.trace(a) as usize] += 1;
        }
        assert_eq!(counts, [3, 3, 3]);
    }

    #[test]
    fn errors_on_bad_input() {
        assert_eq!(build_field(6, 1).unwrap_err(), WaringError::NonPrimeP(6));
        assert!(matches!(
            build_field_capped(2, 30, DEFAULT_SIZE_CAP),
            Err(WaringError::SizeCapExceeded { .. })
        ));
        let f4 = build_field(2, 2).unwrap();
        assert_eq!(f4.inv(FqElem::ZERO), Err(WaringError::DivisionByZero));
        assert_eq!(f4.pow(FqElem::ZERO, 0), FqElem::ONE);
    }

    #[test]
    fn canonical_moduli_are_irreducible_and_minimal() {
        for &(p, s) in &[(2u32, 2u32), (2, 3), (2, 4), (2, 6), (3, 2), (3, 3), (5, 2), (7, 2), (3, 4)] {
            let ctx = build_field(p as u64, s).unwrap();
            let m = ctx.modulus().unwrap();
            assert!(irreducible_by_trial_division(m, p), "p={p} s={s}");
            let code = undigits(&m[..s as usize], p);
            for lower in 0..code {
                let mut f = digits(lower, p, s as usize);
                f.push(1);
                assert!(!irreducible_by_trial_division(&f, p));
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for &(p, s) in &[(2u64, 3u32), (3, 2), (5, 1), (2, 4), (5, 2)] {
            let f = build_field(p, s).unwrap();
            for a in f.elements() {
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FqElem::ONE);
                }
                assert_eq!(f.add(a, f.neg(a)), FqElem::ZERO);
                assert_eq!(f.add_one(a), f.add(a, FqElem::ONE));
                assert_eq!(f.trace(a), f.trace_by_definition(a).0);
                for b in f.elements() {
                    assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % p as u32);
                    for c in [FqElem(0), FqElem(1), FqElem(f.q() - 1)] {
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn parse_and_format() {
        let f4 = build_field(2, 2).unwrap();
        assert_eq!(f4.parse_elem("g+1").unwrap(), FqElem(3));
        assert_eq!(f4.parse_elem("g").unwrap(), FqElem(2));
        assert_eq!(f4.parse_elem("3").unwrap(), FqElem(3));
        assert!(f4.parse_elem("4").is_err());
        assert!(f4.parse_elem("g^2").is_err());
        let f25 = build_field(5, 2).unwrap();
        assert_eq!(f25.parse_elem("2g-1").unwrap(), f25.from_digits(&[4, 2]));
        assert_eq!(f25.format_poly(FqElem(14)), "2g+4");
    }
}
