//! Finite commutative rings: Jacobson radicals, sum-of-k-th-powers
//! decompositions through the semisimple quotient plus Newton lifting, the
//! `Z[α]` reduction, and the unit-power gcd criteria.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{crt, factorize, gcd, prime_power};
use crate::decomposition::{Ambient, AmbientTag, Decomposition};
use crate::error::{Result, WaringError};
use crate::field::{build_field, FieldCtx, FqElem};
use crate::gamma::{kth_root, FieldWaring};
use crate::hensel::{radical_hensel, FiniteCommRing};
use crate::matrix::{FqMatrix, MatrixSpace};
use crate::poly::{residue_code, residue_field, residue_poly, FqPoly, PolyRing};
use crate::tables::RingRow;

/// Largest explicit multiplication table.
pub const TABLE_CAP: u64 = 4096;
/// Largest noncommutative table whose radical is computed by the cubic test.
pub const NONCOMMUTATIVE_RADICAL_CAP: u64 = 256;
/// Largest ring handled by the exhaustive Waring oracle.
pub const BRUTE_FORCE_CAP: u64 = 4096;
/// Largest additive closure explored by [`zalpha_subring`].
pub const ZALPHA_CLOSURE_CAP: usize = 1 << 16;
/// Largest structured ring order accepted by the parser.
pub const STRUCTURED_ORDER_CAP: u64 = 1 << 40;

const NONE: u16 = u16::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RingElem(pub u64);

/// A ring given by explicit addition and multiplication tables on
/// `0..order`.
pub struct TableRing {
    order: u32,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    zero: u16,
    one: u16,
    commutative: bool,
    radical: OnceLock<TableRadical>,
}

#[derive(Clone, Debug)]
struct TableRadical {
    members: Vec<bool>,
    size: u64,
    nilpotency: u32,
}

impl fmt::Debug for TableRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TableRing")
            .field("order", &self.order)
            .field("commutative", &self.commutative)
            .finish()
    }
}

impl TableRing {
    /// Builds a table ring; the additive identity is located from the
    /// table and the basic ring axioms on identities are checked.
    pub fn new(order: u64, add: Vec<u32>, mul: Vec<u32>, one: u32) -> Result<Self> {
        if order == 0 || order > TABLE_CAP {
            return Err(WaringError::CapExceeded {
                what: "table ring order",
                size: order as u128,
                cap: TABLE_CAP,
            });
        }
        let n = order as usize;
        if add.len() != n * n || mul.len() != n * n || one as usize >= n {
            return Err(WaringError::InvalidInput("table sizes do not match the order".into()));
        }
        if add.iter().chain(&mul).any(|&v| v as usize >= n) {
            return Err(WaringError::InvalidInput("table entry out of range".into()));
        }
        let add: Vec<u16> = add.into_iter().map(|v| v as u16).collect();
        let mul: Vec<u16> = mul.into_iter().map(|v| v as u16).collect();
        let zero = (0..n)
            .find(|&z| (0..n).all(|x| add[z * n + x] as usize == x && add[x * n + z] as usize == x))
            .ok_or_else(|| WaringError::InvalidInput("addition has no identity".into()))? as u16;
        let one16 = one as u16;
        if !(0..n).all(|x| mul[one as usize * n + x] as usize == x && mul[x * n + one as usize] as usize == x) {
            return Err(WaringError::InvalidInput("given one is not a multiplicative identity".into()));
        }
        let mut neg = vec![NONE; n];
        for x in 0..n {
            neg[x] = (0..n)
                .find(|&y| add[x * n + y] == zero)
                .ok_or_else(|| WaringError::InvalidInput("element without additive inverse".into()))?
                as u16;
        }
        let mut inv = vec![NONE; n];
        for x in 0..n {
            if let Some(y) = (0..n).find(|&y| mul[x * n + y] == one16 && mul[y * n + x] == one16) {
                inv[x] = y as u16;
            }
        }
        let commutative = (0..n).all(|x| (x + 1..n).all(|y| mul[x * n + y] == mul[y * n + x]));
        Ok(TableRing {
            order: order as u32,
            add,
            mul,
            neg,
            inv,
            zero,
            one: one16,
            commutative,
            radical: OnceLock::new(),
        })
    }

    /// Tables of any ring small enough, by enumerating its elements.
    pub fn from_ring(r: &RingSpec) -> Result<Self> {
        let order = r.order();
        if order > TABLE_CAP {
            return Err(WaringError::CapExceeded {
                what: "table ring order",
                size: order as u128,
                cap: TABLE_CAP,
            });
        }
        let n = order;
        let mut add = Vec::with_capacity((n * n) as usize);
        let mut mul = Vec::with_capacity((n * n) as usize);
        for a in 0..n {
            for b in 0..n {
                add.push(r.add_e(RingElem(a), RingElem(b)).0 as u32);
                mul.push(r.mul_e(RingElem(a), RingElem(b)).0 as u32);
            }
        }
        TableRing::new(n, add, mul, r.one_e().0 as u32)
    }

    /// `Mat_n(F_q)` with matrices indexed by their base-q entry digits,
    /// first entry least significant.
    pub fn from_matrix_ring(ctx: &FieldCtx, n: usize) -> Result<Self> {
        let space = MatrixSpace::new(ctx, n);
        let order = space.order().filter(|&o| o <= TABLE_CAP).ok_or(WaringError::CapExceeded {
            what: "table ring order",
            size: (ctx.q() as u128).saturating_pow((n * n) as u32),
            cap: TABLE_CAP,
        })?;
        let mats: Vec<FqMatrix> = (0..order).map(|i| matrix_from_index(ctx, n, i)).collect();
        let idx = |m: &FqMatrix| matrix_index(ctx, m) as u32;
        let mut add = Vec::with_capacity((order * order) as usize);
        let mut mul = Vec::with_capacity((order * order) as usize);
        for a in &mats {
            for b in &mats {
                add.push(idx(&space.add(a, b)));
                mul.push(idx(&space.mul(a, b)));
            }
        }
        TableRing::new(order, add, mul, idx(&FqMatrix::identity(n)))
    }

    pub fn order(&self) -> u64 {
        self.order as u64
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn zero(&self) -> u32 {
        self.zero as u32
    }

    pub fn one(&self) -> u32 {
        self.one as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.order + b) as usize] as u32
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.order + b) as usize] as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize] as u32
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        match self.inv[a as usize] {
            NONE => None,
            v => Some(v as u32),
        }
    }

    pub fn is_unit(&self, a: u32) -> bool {
        self.inv[a as usize] != NONE
    }

    fn radical_info(&self) -> &TableRadical {
        self.radical.get_or_init(|| self.compute_radical())
    }

    fn compute_radical(&self) -> TableRadical {
        let n = self.order;
        let one = self.one();
        let members: Vec<bool> = (0..n)
            .into_par_iter()
            .map(|x| {
                if self.commutative {
                    (0..n).all(|r| self.is_unit(self.add(one, self.mul(r, x))))
                } else {
                    (0..n).all(|r| {
                        let rx = self.mul(r, x);
                        (0..n).all(|s| self.is_unit(self.add(one, self.mul(rx, s))))
                    })
                }
            })
            .collect();
        let j: Vec<u32> = (0..n).filter(|&x| members[x as usize]).collect();
        // Powers J^i as additive spans of products until zero.
        let mut power = j.clone();
        let mut l = 1;
        while !(power.len() == 1 && power[0] == self.zero()) {
            let mut products = vec![false; n as usize];
            for &a in &power {
                for &b in &j {
                    products[self.mul(a, b) as usize] = true;
                }
            }
            let gens: Vec<u32> = (0..n).filter(|&x| products[x as usize]).collect();
            let next = self.additive_span(&gens);
            assert!(next.len() < power.len(), "radical powers must strictly shrink");
            power = next;
            l += 1;
        }
        TableRadical {
            size: j.len() as u64,
            members,
            nilpotency: l,
        }
    }

    fn additive_span(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order as usize];
        seen[self.zero as usize] = true;
        let mut out = vec![self.zero()];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.add(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }
}

fn matrix_from_index(ctx: &FieldCtx, n: usize, mut idx: u64) -> FqMatrix {
    let q = ctx.q() as u64;
    let mut rows = vec![vec![FqElem::ZERO; n]; n];
    for row in rows.iter_mut() {
        for e in row.iter_mut() {
            *e = FqElem((idx % q) as u32);
            idx /= q;
        }
    }
    FqMatrix::from_rows(&rows).expect("square")
}

fn matrix_index(ctx: &FieldCtx, m: &FqMatrix) -> u64 {
    let q = ctx.q() as u64;
    m.entries().iter().rev().fold(0, |acc, e| acc * q + e.0 as u64)
}

/// `F_q[x]/(f^e)` for monic irreducible `f`, elements encoded by their
/// base-q coefficient digits below degree `e * deg f`.
#[derive(Clone, Debug)]
pub struct PolyQuotient {
    pub field: Arc<FieldCtx>,
    pub f: FqPoly,
    pub e: u32,
    modulus: FqPoly,
    dim: usize,
}

impl PolyQuotient {
    pub fn new(field: Arc<FieldCtx>, f: &FqPoly, e: u32) -> Result<Self> {
        let ring = PolyRing::new(&field);
        let f = ring.monic(f)?;
        if e == 0 || f.degree().unwrap_or(0) == 0 || !ring.is_irreducible(&f) {
            return Err(WaringError::InvalidInput(format!(
                "polyq needs an irreducible f of positive degree and e >= 1, got f={f} e={e}"
            )));
        }
        let modulus = ring.pow(&f, e as u64);
        let dim = modulus.degree().expect("nonzero");
        let order = (field.q() as u64).checked_pow(dim as u32).filter(|&o| o <= STRUCTURED_ORDER_CAP);
        if order.is_none() {
            return Err(WaringError::CapExceeded {
                what: "polynomial quotient order",
                size: (field.q() as u128).saturating_pow(dim as u32),
                cap: STRUCTURED_ORDER_CAP,
            });
        }
        Ok(PolyQuotient {
            field,
            f,
            e,
            modulus,
            dim,
        })
    }

    pub fn order(&self) -> u64 {
        (self.field.q() as u64).pow(self.dim as u32)
    }

    pub fn encode(&self, a: &FqPoly) -> RingElem {
        let ring = PolyRing::new(&self.field);
        let r = ring.reduce(a, &self.modulus);
        let q = self.field.q() as u64;
        RingElem((0..self.dim).rev().fold(0, |acc, i| acc * q + r.coeff(i).0 as u64))
    }

    pub fn decode(&self, a: RingElem) -> FqPoly {
        let q = self.field.q() as u64;
        let mut v = a.0;
        let mut coeffs = Vec::with_capacity(self.dim);
        for _ in 0..self.dim {
            coeffs.push(FqElem((v % q) as u32));
            v /= q;
        }
        FqPoly::from_coeffs(coeffs)
    }
}

#[derive(Clone, Debug)]
pub enum RingSpec {
    Zn(u64),
    PolyQuotient(PolyQuotient),
    Product(Vec<RingSpec>),
    Table(Arc<TableRing>),
}

impl RingSpec {
    pub fn zn(n: u64) -> Result<Self> {
        if !(2..=STRUCTURED_ORDER_CAP).contains(&n) {
            return Err(WaringError::InvalidInput(format!("zn needs 2 <= n <= 2^40, got {n}")));
        }
        Ok(RingSpec::Zn(n))
    }

    pub fn poly_quotient(field: Arc<FieldCtx>, f: &FqPoly, e: u32) -> Result<Self> {
        Ok(RingSpec::PolyQuotient(PolyQuotient::new(field, f, e)?))
    }

    pub fn product(parts: Vec<RingSpec>) -> Result<Self> {
        if parts.is_empty() {
            return Err(WaringError::InvalidInput("empty product".into()));
        }
        let order = parts
            .iter()
            .try_fold(1u64, |acc, r| acc.checked_mul(r.order()))
            .filter(|&o| o <= STRUCTURED_ORDER_CAP);
        if order.is_none() {
            return Err(WaringError::CapExceeded {
                what: "product ring order",
                size: parts.iter().map(|r| r.order() as u128).product(),
                cap: STRUCTURED_ORDER_CAP,
            });
        }
        Ok(RingSpec::Product(parts))
    }

    pub fn table(t: TableRing) -> Self {
        RingSpec::Table(Arc::new(t))
    }

    pub fn order(&self) -> u64 {
        match self {
            RingSpec::Zn(n) => *n,
            RingSpec::PolyQuotient(pq) => pq.order(),
            RingSpec::Product(parts) => parts.iter().map(RingSpec::order).product(),
            RingSpec::Table(t) => t.order(),
        }
    }

    pub fn is_commutative(&self) -> bool {
        match self {
            RingSpec::Table(t) => t.is_commutative(),
            RingSpec::Product(parts) => parts.iter().all(RingSpec::is_commutative),
            _ => true,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElem> {
        (0..self.order()).map(RingElem)
    }

    fn split(&self, a: RingElem) -> Vec<RingElem> {
        let RingSpec::Product(parts) = self else {
            return vec![a];
        };
        let mut v = a.0;
        parts
            .iter()
            .map(|r| {
                let o = r.order();
                let c = v % o;
                v /= o;
                RingElem(c)
            })
            .collect()
    }

    fn join(&self, comps: &[RingElem]) -> RingElem {
        let RingSpec::Product(parts) = self else {
            return comps[0];
        };
        RingElem(
            parts
                .iter()
                .zip(comps)
                .rev()
                .fold(0, |acc, (r, c)| acc * r.order() + c.0),
        )
    }

    fn zip_with(&self, a: RingElem, b: RingElem, op: impl Fn(&RingSpec, RingElem, RingElem) -> RingElem) -> RingElem {
        let RingSpec::Product(parts) = self else {
            unreachable!("zip_with is only used on products")
        };
        let (sa, sb) = (self.split(a), self.split(b));
        let comps: Vec<RingElem> = parts
            .iter()
            .zip(sa.into_iter().zip(sb))
            .map(|(r, (x, y))| op(r, x, y))
            .collect();
        self.join(&comps)
    }

    fn add_e(&self, a: RingElem, b: RingElem) -> RingElem {
        match self {
            RingSpec::Zn(n) => RingElem(((a.0 as u128 + b.0 as u128) % *n as u128) as u64),
            RingSpec::PolyQuotient(pq) => {
                let ring = PolyRing::new(&pq.field);
                pq.encode(&ring.add(&pq.decode(a), &pq.decode(b)))
            }
            RingSpec::Product(_) => self.zip_with(a, b, |r, x, y| r.add_e(x, y)),
            RingSpec::Table(t) => RingElem(t.add(a.0 as u32, b.0 as u32) as u64),
        }
    }

    fn mul_e(&self, a: RingElem, b: RingElem) -> RingElem {
        match self {
            RingSpec::Zn(n) => RingElem(((a.0 as u128 * b.0 as u128) % *n as u128) as u64),
            RingSpec::PolyQuotient(pq) => {
                let ring = PolyRing::new(&pq.field);
                pq.encode(&ring.mul(&pq.decode(a), &pq.decode(b)))
            }
            RingSpec::Product(_) => self.zip_with(a, b, |r, x, y| r.mul_e(x, y)),
            RingSpec::Table(t) => RingElem(t.mul(a.0 as u32, b.0 as u32) as u64),
        }
    }

    fn neg_e(&self, a: RingElem) -> RingElem {
        match self {
            RingSpec::Zn(n) => RingElem((n - a.0 % n) % n),
            RingSpec::PolyQuotient(pq) => {
                let ring = PolyRing::new(&pq.field);
                pq.encode(&ring.neg(&pq.decode(a)))
            }
            RingSpec::Product(parts) => {
                let comps: Vec<RingElem> = parts.iter().zip(self.split(a)).map(|(r, x)| r.neg_e(x)).collect();
                self.join(&comps)
            }
            RingSpec::Table(t) => RingElem(t.neg(a.0 as u32) as u64),
        }
    }

    fn one_e(&self) -> RingElem {
        match self {
            RingSpec::Zn(_) | RingSpec::PolyQuotient(_) => RingElem(1),
            RingSpec::Product(parts) => self.join(&parts.iter().map(RingSpec::one_e).collect::<Vec<_>>()),
            RingSpec::Table(t) => RingElem(t.one() as u64),
        }
    }

    fn zero_e(&self) -> RingElem {
        match self {
            RingSpec::Table(t) => RingElem(t.zero() as u64),
            RingSpec::Product(parts) => self.join(&parts.iter().map(RingSpec::zero_e).collect::<Vec<_>>()),
            _ => RingElem(0),
        }
    }

    fn inv_e(&self, a: RingElem) -> Option<RingElem> {
        match self {
            RingSpec::Zn(n) => crate::arith::inv_mod(a.0, *n).map(RingElem),
            RingSpec::PolyQuotient(pq) => {
                let ring = PolyRing::new(&pq.field);
                let x = pq.decode(a);
                if ring.reduce(&x, &pq.f).is_zero() {
                    return None;
                }
                ring.inv_mod(&x, &pq.modulus).ok().map(|y| pq.encode(&y))
            }
            RingSpec::Product(parts) => {
                let comps = parts
                    .iter()
                    .zip(self.split(a))
                    .map(|(r, x)| r.inv_e(x))
                    .collect::<Option<Vec<_>>>()?;
                Some(self.join(&comps))
            }
            RingSpec::Table(t) => t.inv(a.0 as u32).map(|v| RingElem(v as u64)),
        }
    }

    fn in_radical_e(&self, a: RingElem) -> bool {
        match self {
            RingSpec::Zn(n) => a.0 % crate::arith::radical(*n) == 0,
            RingSpec::PolyQuotient(pq) => {
                let ring = PolyRing::new(&pq.field);
                ring.reduce(&pq.decode(a), &pq.f).is_zero()
            }
            RingSpec::Product(parts) => parts.iter().zip(self.split(a)).all(|(r, x)| r.in_radical_e(x)),
            RingSpec::Table(t) => t.radical_info().members[a.0 as usize],
        }
    }

    fn nilpotency_e(&self) -> u32 {
        match self {
            RingSpec::Zn(n) => factorize(*n).iter().map(|&(_, e)| e).max().unwrap_or(1),
            RingSpec::PolyQuotient(pq) => pq.e,
            RingSpec::Product(parts) => parts.iter().map(RingSpec::nilpotency_e).max().unwrap_or(1),
            RingSpec::Table(t) => t.radical_info().nilpotency,
        }
    }

    /// Parses `zn:55`, `polyq:p=3,s=1,f=x^2+1,e=2`, `prod:zn:5|zn:11` or
    /// `mat:p=2,s=2,n=2` (a full matrix ring as explicit tables).
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || WaringError::InvalidInput(format!("cannot parse ring {text:?}"));
        let (kind, rest) = text.split_once(':').ok_or_else(bad)?;
        match kind {
            "zn" => RingSpec::zn(rest.trim().parse().map_err(|_| bad())?),
            "polyq" | "mat" => {
                let kv: HashMap<&str, &str> = rest
                    .split(',')
                    .map(|p| p.split_once('=').map(|(k, v)| (k.trim(), v.trim())))
                    .collect::<Option<_>>()
                    .ok_or_else(bad)?;
                let num = |key: &str, default: Option<u64>| -> Result<u64> {
                    match kv.get(key) {
                        Some(v) => v.parse().map_err(|_| bad()),
                        None => default.ok_or_else(bad),
                    }
                };
                let field = Arc::new(build_field(num("p", None)?, num("s", Some(1))? as u32)?);
                if kind == "mat" {
                    let n = num("n", None)? as usize;
                    return Ok(RingSpec::table(TableRing::from_matrix_ring(&field, n)?));
                }
                let f = PolyRing::new(&field).parse(kv.get("f").ok_or_else(bad)?)?;
                RingSpec::poly_quotient(field, &f, num("e", Some(1))? as u32)
            }
            "prod" => RingSpec::product(rest.split('|').map(RingSpec::parse).collect::<Result<Vec<_>>>()?),
            _ => Err(bad()),
        }
    }

    /// Parses an element: an integer for `zn` and tables, a coefficient
    /// list `[c0,c1,...]` (or a polynomial in `x`) for `polyq`, a tuple
    /// `(a,b,...)` for products.
    pub fn parse_elem(&self, text: &str) -> Result<RingElem> {
        let text = text.trim();
        let bad = || WaringError::InvalidInput(format!("cannot parse ring element {text:?}"));
        match self {
            RingSpec::Zn(n) => {
                let v: i128 = text.parse().map_err(|_| bad())?;
                Ok(RingElem(v.rem_euclid(*n as i128) as u64))
            }
            RingSpec::Table(t) => {
                let v: u64 = text.parse().map_err(|_| bad())?;
                if v >= t.order() {
                    return Err(bad());
                }
                Ok(RingElem(v))
            }
            RingSpec::PolyQuotient(pq) => {
                let ring = PolyRing::new(&pq.field);
                let poly = if text.contains('x') {
                    ring.parse(text)?
                } else {
                    let inner = text.trim_start_matches('[').trim_end_matches(']');
                    let coeffs = split_top_level(inner)
                        .iter()
                        .filter(|c| !c.trim().is_empty())
                        .map(|c| pq.field.parse_elem(c.trim()))
                        .collect::<Result<Vec<_>>>()?;
                    FqPoly::from_coeffs(coeffs)
                };
                Ok(pq.encode(&poly))
            }
            RingSpec::Product(parts) => {
                let inner = text
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(bad)?;
                let items = split_top_level(inner);
                if items.len() != parts.len() {
                    return Err(bad());
                }
                let comps = parts
                    .iter()
                    .zip(items)
                    .map(|(r, s)| r.parse_elem(s))
                    .collect::<Result<Vec<_>>>()?;
                Ok(self.join(&comps))
            }
        }
    }

    pub fn format_elem(&self, a: RingElem) -> String {
        match self {
            RingSpec::Zn(_) | RingSpec::Table(_) => a.0.to_string(),
            RingSpec::PolyQuotient(pq) => {
                let p = pq.decode(a);
                let codes: Vec<String> = (0..pq.dim).map(|i| p.coeff(i).0.to_string()).collect();
                format!("[{}]", codes.join(","))
            }
            RingSpec::Product(parts) => {
                let items: Vec<String> = parts.iter().zip(self.split(a)).map(|(r, x)| r.format_elem(x)).collect();
                format!("({})", items.join(","))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            RingSpec::Zn(n) => format!("zn:{n}"),
            RingSpec::PolyQuotient(pq) => format!(
                "polyq:p={},s={},f={},e={}",
                pq.field.p(),
                pq.field.s(),
                pq.f,
                pq.e
            ),
            RingSpec::Product(parts) => {
                format!("prod:{}", parts.iter().map(RingSpec::describe).collect::<Vec<_>>().join("|"))
            }
            RingSpec::Table(t) => format!("table:{}", t.order()),
        }
    }

    /// Residue fields of `R/J`, or `None` when the ring has a table part.
    fn residue_fields(&self) -> Option<Vec<ResidueComponent>> {
        match self {
            RingSpec::Zn(n) => Some(
                factorize(*n)
                    .into_iter()
                    .map(|(p, e)| ResidueComponent {
                        name: format!("Z/{p}"),
                        field: build_field(p, 1).expect("prime field"),
                        prime_power: p.pow(e),
                    })
                    .collect(),
            ),
            RingSpec::PolyQuotient(pq) => Some(vec![ResidueComponent {
                name: pq.f.to_string(),
                field: residue_field(&pq.field, &pq.f).ok()?,
                prime_power: 0,
            }]),
            RingSpec::Product(parts) => {
                let mut out = Vec::new();
                for r in parts {
                    out.extend(r.residue_fields()?);
                }
                Some(out)
            }
            RingSpec::Table(_) => None,
        }
    }

    fn project(&self, a: RingElem) -> Vec<FqElem> {
        match self {
            RingSpec::Zn(n) => factorize(*n).into_iter().map(|(p, _)| FqElem((a.0 % p) as u32)).collect(),
            RingSpec::PolyQuotient(pq) => {
                let ring = PolyRing::new(&pq.field);
                let deg = pq.f.degree().expect("positive degree");
                vec![FqElem(residue_code(&pq.field, &ring.reduce(&pq.decode(a), &pq.f), deg))]
            }
            RingSpec::Product(parts) => parts.iter().zip(self.split(a)).flat_map(|(r, x)| r.project(x)).collect(),
            RingSpec::Table(_) => unreachable!("tables have no structured residues"),
        }
    }

    /// An element of `R` with the given image in `R/J`.
    fn section(&self, comps: &[FqElem]) -> RingElem {
        match self {
            RingSpec::Zn(n) => {
                let residues: Vec<(u64, u64)> = factorize(*n)
                    .into_iter()
                    .zip(comps)
                    .map(|((p, e), c)| (c.0 as u64, p.pow(e)))
                    .collect();
                RingElem(crt(&residues).expect("coprime moduli").0)
            }
            RingSpec::PolyQuotient(pq) => {
                let deg = pq.f.degree().expect("positive degree");
                pq.encode(&residue_poly(&pq.field, comps[0].0, deg))
            }
            RingSpec::Product(parts) => {
                let mut offset = 0;
                let mut items = Vec::with_capacity(parts.len());
                for r in parts {
                    let c = r.component_count();
                    items.push(r.section(&comps[offset..offset + c]));
                    offset += c;
                }
                self.join(&items)
            }
            RingSpec::Table(_) => unreachable!("tables have no structured residues"),
        }
    }

    fn component_count(&self) -> usize {
        match self {
            RingSpec::Zn(n) => factorize(*n).len(),
            RingSpec::PolyQuotient(_) => 1,
            RingSpec::Product(parts) => parts.iter().map(RingSpec::component_count).sum(),
            RingSpec::Table(_) => 0,
        }
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

struct ResidueComponent {
    name: String,
    field: FieldCtx,
    #[allow(dead_code)]
    prime_power: u64,
}

impl FiniteCommRing for RingSpec {
    type Elem = RingElem;

    fn zero(&self) -> RingElem {
        self.zero_e()
    }

    fn one(&self) -> RingElem {
        self.one_e()
    }

    fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.add_e(*a, *b)
    }

    fn neg(&self, a: &RingElem) -> RingElem {
        self.neg_e(*a)
    }

    fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.mul_e(*a, *b)
    }

    fn inv(&self, a: &RingElem) -> Option<RingElem> {
        self.inv_e(*a)
    }

    fn in_radical(&self, a: &RingElem) -> bool {
        self.in_radical_e(*a)
    }

    fn nilpotency(&self) -> u32 {
        self.nilpotency_e()
    }
}

impl Ambient for RingSpec {
    type Elem = RingElem;

    fn tag(&self) -> AmbientTag {
        AmbientTag::Ring
    }

    fn zero(&self) -> RingElem {
        self.zero_e()
    }

    fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.add_e(*a, *b)
    }

    fn power(&self, a: &RingElem, k: u64) -> RingElem {
        FiniteCommRing::pow(self, a, k)
    }
}

/// Jacobson radical: generators, size and nilpotency degree `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Radical {
    pub generators: Vec<RingElem>,
    pub size: u64,
    pub nilpotency: u32,
}

pub fn jacobson_radical(r: &RingSpec) -> Result<Radical> {
    match r {
        RingSpec::Zn(n) => {
            let rad = crate::arith::radical(*n);
            Ok(Radical {
                generators: vec![RingElem(rad % n)],
                size: n / rad,
                nilpotency: r.nilpotency_e(),
            })
        }
        RingSpec::PolyQuotient(pq) => Ok(Radical {
            generators: vec![pq.encode(&pq.f)],
            size: pq.order() / (pq.field.q() as u64).pow(pq.f.degree().expect("positive") as u32),
            nilpotency: pq.e,
        }),
        RingSpec::Product(parts) => {
            let mut generators = Vec::new();
            let mut size = 1;
            for (i, part) in parts.iter().enumerate() {
                let sub = jacobson_radical(part)?;
                size *= sub.size;
                for g in sub.generators {
                    let mut comps: Vec<RingElem> = parts.iter().map(RingSpec::zero_e).collect();
                    comps[i] = g;
                    generators.push(r.join(&comps));
                }
            }
            Ok(Radical {
                generators,
                size,
                nilpotency: r.nilpotency_e(),
            })
        }
        RingSpec::Table(t) => {
            if !t.is_commutative() && t.order() > NONCOMMUTATIVE_RADICAL_CAP {
                return Err(WaringError::CapExceeded {
                    what: "noncommutative table ring radical",
                    size: t.order() as u128,
                    cap: NONCOMMUTATIVE_RADICAL_CAP,
                });
            }
            let info = t.radical_info();
            Ok(Radical {
                generators: (0..t.order()).filter(|&x| info.members[x as usize]).map(RingElem).collect(),
                size: info.size,
                nilpotency: info.nilpotency,
            })
        }
    }
}

fn check_ring_hypotheses(r: &RingSpec, k: u64) -> Result<()> {
    if k == 0 {
        return Err(WaringError::InvalidInput("k must be positive".into()));
    }
    if !r.is_commutative() {
        return Err(WaringError::NonCommutative);
    }
    let order = r.order();
    if gcd(order, k) != 1 {
        return Err(WaringError::GcdViolation {
            order: order as u128,
            k,
        });
    }
    Ok(())
}

/// Writes `α` as a sum of k-th powers: a representation in `R/J` with a
/// unit first witness, lifted exactly by Newton iteration on that witness.
pub fn decompose_ring_element(r: &RingSpec, alpha: RingElem, k: u64) -> Result<Decomposition<RingElem>> {
    check_ring_hypotheses(r, k)?;
    if alpha.0 >= r.order() {
        return Err(WaringError::InvalidInput("element out of range".into()));
    }
    let zero = r.zero_e();
    if alpha == zero {
        return Decomposition {
            ambient: AmbientTag::Ring,
            target: alpha,
            k,
            witnesses: vec![zero],
            witness_polys: None,
        }
        .verified(r);
    }
    let slots = match r.residue_fields() {
        Some(components) => structured_slots(r, &components, alpha, k)?,
        None => table_slots(r, alpha, k)?,
    };
    finish_with_newton(r, alpha, k, slots)
}

/// As [`decompose_ring_element`], after checking the row's divisibility
/// guard; the witnesses are padded with zeros to the row count.
pub fn decompose_ring_element_with_row(
    r: &RingSpec,
    alpha: RingElem,
    k: u64,
    row: &RingRow,
) -> Result<Decomposition<RingElem>> {
    if row.k != k {
        return Err(WaringError::InvalidInput(format!("row is for k={}, not k={k}", row.k)));
    }
    let order = r.order();
    if let Some(&q) = row.excluded_divisors.iter().find(|&&q| order % q == 0) {
        return Err(WaringError::ExcludedFieldSize { q, k, m: row.n });
    }
    let mut d = decompose_ring_element(r, alpha, k)?;
    if d.len() > row.n as usize {
        return Err(WaringError::VerificationFailed(format!(
            "{} witnesses exceed the row bound {}",
            d.len(),
            row.n
        )));
    }
    d.witnesses.resize(row.n as usize, r.zero_e());
    d.verified(r)
}

/// Per-slot residues `B̄_j` (as ring elements via the section) with the
/// first slot a unit mod `J`.
fn structured_slots(r: &RingSpec, comps: &[ResidueComponent], alpha: RingElem, k: u64) -> Result<Vec<RingElem>> {
    let fws: Vec<FieldWaring> = comps.iter().map(|c| FieldWaring::new(&c.field, k)).collect();
    let mut m = 1usize;
    for (c, fw) in comps.iter().zip(&fws) {
        let g = fw.gamma().ok_or_else(|| WaringError::ResidueFieldUncoverable {
            factor: c.name.clone(),
            order: c.field.q() as u64,
            k,
        })?;
        m = m.max(g as usize);
    }
    let proj = r.project(alpha);
    let mut columns: Vec<Vec<FqElem>> = Vec::with_capacity(comps.len());
    for ((c, fw), &y) in comps.iter().zip(&fws).zip(&proj) {
        let ctx = &c.field;
        if !y.is_zero() {
            // A minimal representation has no zero entries, so its first
            // entry is already a unit.
            columns.push(fw.represent(y).expect("coverable field"));
            continue;
        }
        let minus_one = ctx.neg(FqElem::ONE);
        let cancel = if k % 2 == 1 {
            vec![minus_one]
        } else if let Some(c) = kth_root(ctx, minus_one, k) {
            vec![c]
        } else {
            fw.represent(minus_one).expect("coverable field")
        };
        let mut col = vec![FqElem::ONE];
        col.extend(cancel);
        columns.push(col);
    }
    let total = columns.iter().map(Vec::len).max().unwrap_or(1).max(m);
    Ok((0..total)
        .map(|j| {
            let entries: Vec<FqElem> = columns.iter().map(|col| col.get(j).copied().unwrap_or(FqElem::ZERO)).collect();
            r.section(&entries)
        })
        .collect())
}

/// Exhaustive search over `R/J` (as cosets of the radical) for a shortest
/// representation whose first witness is a unit.
fn table_slots(r: &RingSpec, alpha: RingElem, k: u64) -> Result<Vec<RingElem>> {
    let order = r.order();
    if order > TABLE_CAP {
        return Err(WaringError::CapExceeded {
            what: "ring order for coset search",
            size: order as u128,
            cap: TABLE_CAP,
        });
    }
    let radical = jacobson_radical(r)?;
    let j_members: Vec<RingElem> = r.elements().filter(|x| r.in_radical_e(*x)).collect();
    debug_assert_eq!(j_members.len() as u64, radical.size);
    let n = order as usize;
    let mut coset = vec![u32::MAX; n];
    let mut count = 0u32;
    for x in 0..n {
        if coset[x] != u32::MAX {
            continue;
        }
        for jm in &j_members {
            coset[r.add_e(RingElem(x as u64), *jm).0 as usize] = count;
        }
        count += 1;
    }
    let mut unit_powers: Vec<(u32, RingElem)> = Vec::new();
    let mut all_powers: Vec<(u32, RingElem)> = Vec::new();
    let mut seen_unit = vec![false; count as usize];
    let mut seen_any = vec![false; count as usize];
    for x in r.elements() {
        let c = coset[FiniteCommRing::pow(r, &x, k).0 as usize];
        if !seen_any[c as usize] {
            seen_any[c as usize] = true;
            all_powers.push((c, x));
        }
        if r.inv_e(x).is_some() && !seen_unit[c as usize] {
            seen_unit[c as usize] = true;
            unit_powers.push((c, x));
        }
    }
    // Representatives for coset addition.
    let mut rep = vec![RingElem(0); count as usize];
    for x in (0..n).rev() {
        rep[coset[x] as usize] = RingElem(x as u64);
    }
    let add_c = |a: u32, b: u32| coset[r.add_e(rep[a as usize], rep[b as usize]).0 as usize];
    let target = coset[alpha.0 as usize];
    let mut pred: Vec<Option<(u32, RingElem)>> = vec![None; count as usize];
    let mut frontier: Vec<u32> = Vec::new();
    let mut seen = vec![false; count as usize];
    for &(c, x) in &unit_powers {
        if !seen[c as usize] {
            seen[c as usize] = true;
            pred[c as usize] = Some((u32::MAX, x));
            frontier.push(c);
        }
    }
    while !seen[target as usize] {
        let mut next = Vec::new();
        for &a in &frontier {
            for &(c, x) in &all_powers {
                let b = add_c(a, c);
                if !seen[b as usize] {
                    seen[b as usize] = true;
                    pred[b as usize] = Some((a, x));
                    next.push(b);
                }
            }
        }
        if next.is_empty() {
            return Err(WaringError::ResidueFieldUncoverable {
                factor: "R/J".into(),
                order: count as u64,
                k,
            });
        }
        frontier = next;
    }
    let mut out = Vec::new();
    let mut cur = target;
    loop {
        let (prev, x) = pred[cur as usize].expect("reached");
        out.push(x);
        if prev == u32::MAX {
            break;
        }
        cur = prev;
    }
    out.reverse();
    Ok(out)
}

fn finish_with_newton(r: &RingSpec, alpha: RingElem, k: u64, slots: Vec<RingElem>) -> Result<Decomposition<RingElem>> {
    let rest = slots[1..].iter().fold(r.zero_e(), |acc, b| r.add_e(acc, FiniteCommRing::pow(r, b, k)));
    let mut coeffs = vec![r.zero_e(); k as usize + 1];
    coeffs[0] = r.add_e(rest, r.neg_e(alpha));
    coeffs[k as usize] = r.one_e();
    let b1 = radical_hensel(r, &coeffs, &slots[0])?;
    let mut witnesses = slots;
    witnesses[0] = b1;
    Decomposition {
        ambient: AmbientTag::Ring,
        target: alpha,
        k,
        witnesses,
        witness_polys: None,
    }
    .verified(r)
}

/// The subring `Z[α]` as explicit tables, with the element list mapping
/// table indices back to the ambient ring.
#[derive(Debug)]
pub struct ZAlpha<E> {
    pub ring: RingSpec,
    pub elements: Vec<E>,
    pub alpha: RingElem,
}

impl<E: Clone + Eq + Hash> ZAlpha<E> {
    pub fn index_of(&self, e: &E) -> Option<RingElem> {
        self.elements.iter().position(|x| x == e).map(|i| RingElem(i as u64))
    }

    pub fn element(&self, a: RingElem) -> &E {
        &self.elements[a.0 as usize]
    }
}

fn zalpha_closure<E: Clone + Eq + Hash>(
    zero: E,
    one: E,
    alpha: &E,
    add: impl Fn(&E, &E) -> E,
    mul: impl Fn(&E, &E) -> E,
) -> Result<ZAlpha<E>> {
    // Powers of α until they cycle; their additive span is closed under
    // multiplication.
    let mut powers = vec![one.clone()];
    let mut seen_pow: HashSet<E> = HashSet::from([one.clone()]);
    loop {
        let next = mul(powers.last().expect("nonempty"), alpha);
        if !seen_pow.insert(next.clone()) {
            break;
        }
        powers.push(next);
    }
    let mut index: HashMap<E, u32> = HashMap::from([(zero.clone(), 0)]);
    let mut elements = vec![zero];
    let mut i = 0;
    while i < elements.len() {
        for g in &powers {
            let y = add(&elements[i], g);
            if !index.contains_key(&y) {
                if elements.len() >= ZALPHA_CLOSURE_CAP {
                    return Err(WaringError::CapExceeded {
                        what: "Z[alpha] closure",
                        size: elements.len() as u128 + 1,
                        cap: ZALPHA_CLOSURE_CAP as u64,
                    });
                }
                index.insert(y.clone(), elements.len() as u32);
                elements.push(y);
            }
        }
        i += 1;
    }
    let n = elements.len() as u64;
    if n > TABLE_CAP {
        return Err(WaringError::CapExceeded {
            what: "table ring order",
            size: n as u128,
            cap: TABLE_CAP,
        });
    }
    let mut add_t = Vec::with_capacity((n * n) as usize);
    let mut mul_t = Vec::with_capacity((n * n) as usize);
    for a in &elements {
        for b in &elements {
            add_t.push(index[&add(a, b)]);
            mul_t.push(*index.get(&mul(a, b)).ok_or_else(|| {
                WaringError::VerificationFailed("Z[alpha] closure is not multiplicatively closed".into())
            })?);
        }
    }
    let table = TableRing::new(n, add_t, mul_t, index[&one])?;
    let alpha_idx = RingElem(index[alpha] as u64);
    Ok(ZAlpha {
        ring: RingSpec::table(table),
        elements,
        alpha: alpha_idx,
    })
}

/// `Z[A]` for a square matrix over `F_q`.
pub fn zalpha_subring(ctx: &FieldCtx, a: &FqMatrix) -> Result<ZAlpha<FqMatrix>> {
    let space = MatrixSpace::new(ctx, a.n());
    zalpha_closure(
        FqMatrix::zero(a.n()),
        FqMatrix::identity(a.n()),
        a,
        |x, y| space.add(x, y),
        |x, y| space.mul(x, y),
    )
}

/// `Z[α]` for an element of a (possibly noncommutative) table ring.
pub fn zalpha_subring_table(t: &TableRing, alpha: u32) -> Result<ZAlpha<u32>> {
    if alpha as u64 >= t.order() {
        return Err(WaringError::InvalidInput("element out of range".into()));
    }
    zalpha_closure(t.zero(), t.one(), &alpha, |&x, &y| t.add(x, y), |&x, &y| t.mul(x, y))
}

/// Decomposes a matrix inside the commutative ring `Z[A]`.
pub fn decompose_matrix_via_zalpha(ctx: &FieldCtx, a: &FqMatrix, k: u64) -> Result<Decomposition<FqMatrix>> {
    let z = zalpha_subring(ctx, a)?;
    let d = decompose_ring_element(&z.ring, z.alpha, k)?;
    let space = MatrixSpace::new(ctx, a.n());
    Decomposition {
        ambient: AmbientTag::Matrix,
        target: a.clone(),
        k,
        witnesses: d.witnesses.iter().map(|w| z.element(*w).clone()).collect(),
        witness_polys: None,
    }
    .verified(&space)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriterionMode {
    Cubefree,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum UnitPowerVerdict {
    /// Every unit is a k-th power; for odd `k` every element is one, for
    /// even `k` every element is a sum of two.
    EveryUnitIsKthPower { k_odd: bool },
    CriterionFails { prime: u64, exponent: u32, gcd: u64 },
}

/// gcd tests on the prime-power factorization of `|R|`: cubefree mode
/// uses `gcd(k, p^i - 1)`, general mode `gcd(k, Π_{ι≤i} (p^ι - 1))`.
pub fn unit_power_criterion(factorization: &[(u64, u32)], k: u64, mode: CriterionMode) -> Result<UnitPowerVerdict> {
    if k == 0 {
        return Err(WaringError::InvalidInput("k must be positive".into()));
    }
    for &(p, i) in factorization {
        if !crate::arith::is_prime(p) {
            return Err(WaringError::NonPrimeP(p));
        }
        if i == 0 {
            return Err(WaringError::InvalidInput("exponents must be positive".into()));
        }
        if mode == CriterionMode::Cubefree && i >= 3 {
            return Err(WaringError::ModeViolation(format!(
                "cubefree mode needs exponents at most 2, got {p}^{i}"
            )));
        }
    }
    for &(p, i) in factorization {
        let term = |iota: u32| (crate::arith::pow_mod(p % k, iota as u64, k) + k - 1) % k;
        let product = match mode {
            CriterionMode::Cubefree => term(i),
            CriterionMode::General => (1..=i).fold(1 % k, |acc, iota| crate::arith::mul_mod(acc, term(iota), k)),
        };
        let g = gcd(k, product);
        if g != 1 {
            return Ok(UnitPowerVerdict::CriterionFails {
                prime: p,
                exponent: i,
                gcd: g,
            });
        }
    }
    Ok(UnitPowerVerdict::EveryUnitIsKthPower { k_odd: k % 2 == 1 })
}

/// Exact Waring number of `R` by breadth-first sumset closure from zero:
/// `Some(n)` if every element is a sum of `n` k-th powers, `None` if the
/// k-th powers do not additively generate `R`.
pub fn brute_force_waring(r: &RingSpec, k: u64) -> Result<Option<u32>> {
    let order = r.order();
    if order > BRUTE_FORCE_CAP {
        return Err(WaringError::CapExceeded {
            what: "ring order for brute force",
            size: order as u128,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let n = order as usize;
    let pow_of: Vec<u64> = (0..order)
        .into_par_iter()
        .map(|x| FiniteCommRing::pow(r, &RingElem(x), k).0)
        .collect();
    let mut is_power = vec![false; n];
    for &v in &pow_of {
        is_power[v as usize] = true;
    }
    let powers: Vec<RingElem> = (0..order).filter(|&v| is_power[v as usize]).map(RingElem).collect();
    let zero = r.zero_e();
    let mut seen = vec![false; n];
    seen[zero.0 as usize] = true;
    let mut reached = 1usize;
    let mut frontier = vec![zero];
    let mut level = 0u32;
    while reached < n {
        let candidates: Vec<u64> = frontier
            .par_iter()
            .flat_map_iter(|&a| powers.iter().map(move |&p| r.add_e(a, p).0))
            .collect();
        let mut next = Vec::new();
        for c in candidates {
            if !seen[c as usize] {
                seen[c as usize] = true;
                next.push(RingElem(c));
            }
        }
        if next.is_empty() {
            return Ok(None);
        }
        reached += next.len();
        frontier = next;
        level += 1;
    }
    Ok(Some(level.max(1)))
}

/// Whether `-1` is a k-th power in `R`.
pub fn minus_one_is_kth_power(r: &RingSpec, k: u64) -> bool {
    let m1 = r.neg_e(r.one_e());
    r.elements().any(|x| FiniteCommRing::pow(r, &x, k) == m1)
}

/// `(p, e)` if `q = p^e`, for convenience when reporting orders.
pub fn order_factorization(r: &RingSpec) -> Vec<(u64, u32)> {
    let o = r.order();
    match prime_power(o) {
        Some((p, e)) => vec![(p, e)],
        None => factorize(o),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zn(n: u64) -> RingSpec {
        RingSpec::zn(n).unwrap()
    }

    #[test]
    fn radicals_of_structured_rings() {
        let r = jacobson_radical(&zn(12)).unwrap();
        assert_eq!((r.generators.clone(), r.nilpotency, r.size), (vec![RingElem(6)], 2, 2));
        let r = jacobson_radical(&zn(13)).unwrap();
        assert_eq!((r.generators.clone(), r.nilpotency, r.size), (vec![RingElem(0)], 1, 1));
        let pq = RingSpec::parse("polyq:p=3,s=1,f=x,e=3").unwrap();
        let r = jacobson_radical(&pq).unwrap();
        assert_eq!((r.nilpotency, r.size), (3, 9));
        assert_eq!(pq.format_elem(r.generators[0]), "[0,1,0]");
    }

    #[test]
    fn table_radical_matches_nilpotents_and_structure() {
        for spec in ["zn:12", "zn:36", "polyq:p=2,s=1,f=x^2+x+1,e=2", "prod:zn:4|zn:9", "polyq:p=3,s=1,f=x,e=3"] {
            let r = RingSpec::parse(spec).unwrap();
            let t = RingSpec::table(TableRing::from_ring(&r).unwrap());
            let jt = jacobson_radical(&t).unwrap();
            let js = jacobson_radical(&r).unwrap();
            assert_eq!(jt.size, js.size, "{spec}");
            assert_eq!(jt.nilpotency, js.nilpotency, "{spec}");
            for x in r.elements() {
                let nilpotent = (1..=64).any(|e| FiniteCommRing::pow(&r, &x, e) == r.zero_e());
                assert_eq!(r.in_radical_e(x), nilpotent, "{spec} {x:?}");
                assert_eq!(t.in_radical_e(x), nilpotent, "{spec} {x:?}");
            }
        }
    }

    #[test]
    fn mat2_f4_has_zero_radical_and_two_cube_waring_number() {
        let f4 = build_field(2, 2).unwrap();
        let t = RingSpec::table(TableRing::from_matrix_ring(&f4, 2).unwrap());
        assert!(!t.is_commutative());
        let j = jacobson_radical(&t).unwrap();
        assert_eq!((j.size, j.nilpotency), (1, 1));
        assert_eq!(brute_force_waring(&t, 3).unwrap(), Some(2));
        assert!(matches!(
            decompose_ring_element(&t, RingElem(5), 3),
            Err(WaringError::NonCommutative)
        ));
    }

    #[test]
    fn brute_force_examples() {
        // Cubing permutes both F_5 and F_11, so one cube suffices in Z_55.
        assert_eq!(brute_force_waring(&zn(55), 3).unwrap(), Some(1));
        assert!(brute_force_waring(&zn(5 * 13), 3).unwrap().unwrap() <= 2);
        assert_eq!(brute_force_waring(&zn(7), 3).unwrap(), Some(3));
        assert_eq!(brute_force_waring(&zn(5), 3).unwrap(), Some(1));
        assert!(matches!(brute_force_waring(&zn(5000), 3), Err(WaringError::CapExceeded { .. })));
    }

    #[test]
    fn worked_decompositions() {
        let z25 = zn(25);
        let d = decompose_ring_element(&z25, RingElem(7), 3).unwrap();
        assert_eq!(d.witnesses, vec![RingElem(18)]);

        let z55 = zn(55);
        let d = decompose_ring_element(&z55, RingElem(17), 3).unwrap();
        assert!(d.verify(&z55));
        let row = crate::tables::best_ring_row(3, 55).unwrap();
        let d = decompose_ring_element_with_row(&z55, RingElem(17), 3, row).unwrap();
        assert_eq!(d.len(), 2);

        let d = decompose_ring_element(&z55, RingElem(0), 3).unwrap();
        assert_eq!(d.witnesses, vec![RingElem(0)]);

        assert!(matches!(
            decompose_ring_element(&zn(12), RingElem(5), 3),
            Err(WaringError::GcdViolation { order: 12, k: 3 })
        ));
        let row = crate::tables::best_ring_row(3, 55).unwrap();
        assert!(matches!(
            decompose_ring_element_with_row(&zn(7 * 8 * 5), RingElem(1), 3, row),
            Err(WaringError::ExcludedFieldSize { .. })
        ));
    }

    #[test]
    fn every_element_decomposes_in_small_rings() {
        let specs = [
            ("zn:25", 3u64),
            ("zn:125", 3),
            ("zn:49", 5),
            ("zn:175", 3),
            ("polyq:p=5,s=1,f=x^2+2,e=2", 3),
            ("polyq:p=7,s=1,f=x+1,e=3", 4),
            ("prod:zn:7|polyq:p=2,s=1,f=x^2+x+1,e=2", 5),
            ("prod:zn:11|zn:25", 4),
        ];
        for (spec, k) in specs {
            let r = RingSpec::parse(spec).unwrap();
            let table = RingSpec::table(TableRing::from_ring(&r).unwrap());
            let m1_power = minus_one_is_kth_power(&r, k);
            for x in r.elements() {
                let d = decompose_ring_element(&r, x, k).unwrap();
                assert!(d.verify(&r), "{spec} {x:?}");
                let via_table = decompose_ring_element(&table, x, k).unwrap();
                assert!(via_table.verify(&table), "{spec} {x:?}");
                if k % 2 == 1 || m1_power {
                    let comps = r.residue_fields().unwrap();
                    let m = comps
                        .iter()
                        .map(|c| FieldWaring::new(&c.field, k).gamma().unwrap() as usize)
                        .max()
                        .unwrap();
                    assert!(d.len() <= m.max(2), "{spec} {x:?} len {}", d.len());
                    let unit = r.project(x).iter().all(|e| !e.is_zero());
                    if unit {
                        assert_eq!(d.len(), m, "{spec} {x:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn zalpha_examples() {
        let f5 = build_field(5, 1).unwrap();
        let z = zalpha_subring(&f5, &FqMatrix::identity(3)).unwrap();
        assert_eq!(z.ring.order(), 5);
        let f4 = build_field(2, 2).unwrap();
        let a = MatrixSpace::new(&f4, 2).parse("1,1;1,g+1").unwrap();
        let z = zalpha_subring(&f4, &a).unwrap();
        assert_eq!(256 % z.ring.order(), 0);
        assert!(z.ring.is_commutative());
        assert_eq!(z.element(z.alpha), &a);

        let z12 = TableRing::from_ring(&zn(12)).unwrap();
        let z = zalpha_subring_table(&z12, 3).unwrap();
        assert_eq!(z.ring.order(), 12);

        let f7 = build_field(7, 1).unwrap();
        let m = MatrixSpace::new(&f7, 2).parse("1,2;3,4").unwrap();
        let d = decompose_matrix_via_zalpha(&f7, &m, 5).unwrap();
        assert!(d.verify(&MatrixSpace::new(&f7, 2)));
    }

    #[test]
    fn unit_power_criteria() {
        use CriterionMode::*;
        assert_eq!(
            unit_power_criterion(&[(3, 4)], 7, General).unwrap(),
            UnitPowerVerdict::EveryUnitIsKthPower { k_odd: true }
        );
        assert_eq!(
            unit_power_criterion(&[(5, 1)], 3, Cubefree).unwrap(),
            UnitPowerVerdict::EveryUnitIsKthPower { k_odd: true }
        );
        assert_eq!(
            unit_power_criterion(&[(3, 27)], 7, General).unwrap(),
            UnitPowerVerdict::CriterionFails {
                prime: 3,
                exponent: 27,
                gcd: 7
            }
        );
        assert!(matches!(
            unit_power_criterion(&[(3, 3)], 7, Cubefree),
            Err(WaringError::ModeViolation(_))
        ));
    }

    #[test]
    fn parsing_round_trips() {
        let r = RingSpec::parse("prod:zn:5|polyq:p=3,s=1,f=x^2+1,e=2").unwrap();
        assert_eq!(r.order(), 5 * 81);
        let e = r.parse_elem("(3,[1,2,0,1])").unwrap();
        assert_eq!(r.format_elem(e), "(3,[1,2,0,1])");
        assert_eq!(r.describe(), "prod:zn:5|polyq:p=3,s=1,f=x^2+1,e=2");
        assert!(RingSpec::parse("polyq:p=3,s=1,f=x^2+2,e=1").is_err());
        assert!(RingSpec::parse("bogus").is_err());
        assert_eq!(zn(55).parse_elem("-1").unwrap(), RingElem(54));
    }
}
