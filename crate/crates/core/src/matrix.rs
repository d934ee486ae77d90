//! Square matrices over `F_q` and sum-of-k-th-powers decompositions of a
//! matrix by polynomials in that matrix.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::decomposition::{sumset_search, Ambient, AmbientTag, Decomposition};
use crate::error::{Result, WaringError};
use crate::field::{FieldCtx, FqElem};
use crate::gamma::FieldWaring;
use crate::hensel::{lift_power_sum, ResidueField};
use crate::poly::{FqPoly, PolyRing, DEFAULT_FACTOR_SEED};
use crate::tables::MatrixRow;

/// Largest `q^(n^2)` enumerated by the exhaustive fallback.
pub const BRUTEFORCE_MATRIX_CAP: u64 = 1 << 16;

/// Row-major `n x n` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FqMatrix {
    n: usize,
    entries: Vec<FqElem>,
}

impl FqMatrix {
    pub fn zero(n: usize) -> Self {
        FqMatrix {
            n,
            entries: vec![FqElem::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, FqElem::ONE);
        }
        m
    }

    pub fn scalar(n: usize, c: FqElem) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<FqElem>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(WaringError::InvalidInput("matrix must be square and nonempty".into()));
        }
        Ok(FqMatrix {
            n,
            entries: rows.concat(),
        })
    }

    pub fn from_codes(rows: &[&[u32]]) -> Result<Self> {
        let rows: Vec<Vec<FqElem>> = rows.iter().map(|r| r.iter().map(|&c| FqElem(c)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> FqElem {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FqElem) {
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[FqElem] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n).map(|r| r.iter().map(|e| e.0).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }
}

impl fmt::Display for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// `Mat_n(F_q)` as an arithmetic context.
#[derive(Clone, Copy)]
pub struct MatrixSpace<'a> {
    pub ctx: &'a FieldCtx,
    pub n: usize,
}

impl<'a> MatrixSpace<'a> {
    pub fn new(ctx: &'a FieldCtx, n: usize) -> Self {
        MatrixSpace { ctx, n }
    }

    pub fn add(&self, a: &FqMatrix, b: &FqMatrix) -> FqMatrix {
        FqMatrix {
            n: self.n,
            entries: a.entries.iter().zip(&b.entries).map(|(&x, &y)| self.ctx.add(x, y)).collect(),
        }
    }

    pub fn sub(&self, a: &FqMatrix, b: &FqMatrix) -> FqMatrix {
        FqMatrix {
            n: self.n,
            entries: a.entries.iter().zip(&b.entries).map(|(&x, &y)| self.ctx.sub(x, y)).collect(),
        }
    }

    pub fn scale(&self, a: &FqMatrix, c: FqElem) -> FqMatrix {
        FqMatrix {
            n: self.n,
            entries: a.entries.iter().map(|&x| self.ctx.mul(x, c)).collect(),
        }
    }

    pub fn mul(&self, a: &FqMatrix, b: &FqMatrix) -> FqMatrix {
        let n = self.n;
        let mut out = FqMatrix::zero(n);
        for i in 0..n {
            for l in 0..n {
                let ail = a.get(i, l);
                if ail.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = self.ctx.add(out.get(i, j), self.ctx.mul(ail, b.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, a: &FqMatrix, v: &[FqElem]) -> Vec<FqElem> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(FqElem::ZERO, |acc, j| self.ctx.add(acc, self.ctx.mul(a.get(i, j), v[j])))
            })
            .collect()
    }

    pub fn pow(&self, a: &FqMatrix, mut e: u64) -> FqMatrix {
        let mut acc = FqMatrix::identity(self.n);
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

    /// `P(A)` by Horner's rule.
    pub fn eval_poly(&self, p: &FqPoly, a: &FqMatrix) -> FqMatrix {
        let mut acc = FqMatrix::zero(self.n);
        for &c in p.coeffs().iter().rev() {
            acc = self.mul(&acc, a);
            for i in 0..self.n {
                let v = self.ctx.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        acc
    }

    /// Parses `"g+1,1;1,1"`: rows split by `;`, entries by `,`.
    pub fn parse(&self, text: &str) -> Result<FqMatrix> {
        let rows = text
            .split(';')
            .map(|r| r.split(',').map(|e| self.ctx.parse_elem(e.trim())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let m = FqMatrix::from_rows(&rows)?;
        if m.n != self.n {
            return Err(WaringError::InvalidInput(format!("expected a {0}x{0} matrix", self.n)));
        }
        Ok(m)
    }

    /// Number of matrices, if it fits in `u64`.
    pub fn order(&self) -> Option<u64> {
        (self.ctx.q() as u64).checked_pow((self.n * self.n) as u32)
    }

    fn from_index(&self, mut idx: u64) -> FqMatrix {
        let q = self.ctx.q() as u64;
        let mut m = FqMatrix::zero(self.n);
        for e in m.entries.iter_mut() {
            *e = FqElem((idx % q) as u32);
            idx /= q;
        }
        m
    }

    fn index_of(&self, m: &FqMatrix) -> u64 {
        let q = self.ctx.q() as u64;
        m.entries.iter().rev().fold(0, |acc, e| acc * q + e.0 as u64)
    }
}

impl Ambient for MatrixSpace<'_> {
    type Elem = FqMatrix;

    fn tag(&self) -> AmbientTag {
        AmbientTag::Matrix
    }

    fn zero(&self) -> FqMatrix {
        FqMatrix::zero(self.n)
    }

    fn add(&self, a: &FqMatrix, b: &FqMatrix) -> FqMatrix {
        MatrixSpace::add(self, a, b)
    }

    fn power(&self, a: &FqMatrix, k: u64) -> FqMatrix {
        self.pow(a, k)
    }

    fn check_certificate(&self, target: &FqMatrix, witness: &FqMatrix, poly: &FqPoly) -> bool {
        self.eval_poly(poly, target) == *witness
    }
}

/// Minimal polynomial as the lcm of the Krylov annihilators of the
/// standard basis vectors.
pub fn minimal_polynomial(space: &MatrixSpace, a: &FqMatrix) -> FqPoly {
    let ctx = space.ctx;
    let ring = PolyRing::new(ctx);
    let n = space.n;
    let mut mu = FqPoly::one();
    for j in 0..n {
        let mut v = vec![FqElem::ZERO; n];
        v[j] = FqElem::ONE;
        // Echelon rows: (vector, pivot, combination of Krylov vectors).
        let mut basis: Vec<(Vec<FqElem>, usize, FqPoly)> = Vec::new();
        let mut cur = v;
        let mut i = 0usize;
        let annihilator = loop {
            let mut w = cur.clone();
            let mut combo = FqPoly::monomial(FqElem::ONE, i);
            for (bv, piv, bc) in &basis {
                if w[*piv].is_zero() {
                    continue;
                }
                let c = ctx.div(w[*piv], bv[*piv]).expect("pivot is nonzero");
                for (x, &y) in w.iter_mut().zip(bv) {
                    *x = ctx.sub(*x, ctx.mul(c, y));
                }
                combo = ring.sub(&combo, &ring.scale(bc, c));
            }
            match w.iter().position(|e| !e.is_zero()) {
                None => break combo,
                Some(piv) => basis.push((w, piv, combo)),
            }
            cur = space.mul_vec(a, &cur);
            i += 1;
        };
        mu = ring.lcm(&mu, &annihilator).expect("annihilators are nonzero");
    }
    mu
}

/// Minimal polynomial with its monic irreducible factorization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinPolyFactorization {
    pub minimal_polynomial: FqPoly,
    pub factors: Vec<(FqPoly, u32)>,
}

pub fn factor_minimal_polynomial(space: &MatrixSpace, a: &FqMatrix) -> Result<MinPolyFactorization> {
    let mu = minimal_polynomial(space, a);
    let factors = PolyRing::new(space.ctx).factorize_seeded(&mu, DEFAULT_FACTOR_SEED)?;
    Ok(MinPolyFactorization {
        minimal_polynomial: mu,
        factors,
    })
}

/// Decomposes `A = Σ P_j(A)^k` through `F_q[A] ≅ Π F_q[x]/(p_r^{i_r})`.
///
/// Each residue field supplies a minimal representation of `x mod p_r`,
/// which is lifted to `p_r^{i_r}` and recombined by CRT.
pub fn decompose_matrix(ctx: &Arc<FieldCtx>, a: &FqMatrix, k: u64) -> Result<Decomposition<FqMatrix>> {
    if k == 0 {
        return Err(WaringError::InvalidInput("k must be positive".into()));
    }
    if k % ctx.p() as u64 == 0 {
        return Err(WaringError::CharDividesK {
            p: ctx.p() as u64,
            k,
        });
    }
    let space = MatrixSpace::new(ctx, a.n());
    let ring = PolyRing::new(ctx);
    if a.is_zero() {
        return Decomposition {
            ambient: AmbientTag::Matrix,
            target: a.clone(),
            k,
            witnesses: vec![a.clone()],
            witness_polys: Some(vec![FqPoly::zero()]),
        }
        .verified(&space);
    }
    let fac = factor_minimal_polynomial(&space, a)?;
    let mu = &fac.minimal_polynomial;
    let x = FqPoly::x();

    let mut per_factor: Vec<(FqPoly, Vec<FqPoly>)> = Vec::with_capacity(fac.factors.len());
    for (pr, ir) in &fac.factors {
        let res = ResidueField::new(ctx, pr)?;
        let fw = FieldWaring::new(&res.field, k);
        let base = fw
            .represent(res.to_elem(&x))
            .ok_or_else(|| WaringError::ResidueFieldUncoverable {
                factor: pr.to_string(),
                order: res.field.q() as u64,
                k,
            })?;
        let base: Vec<FqPoly> = base.into_iter().map(|e| res.to_poly(e)).collect();
        let modulus = ring.pow(pr, *ir as u64);
        let target = ring.reduce(&x, &modulus);
        let ws = lift_power_sum(&res, *ir, &target, k, &base)?;
        per_factor.push((modulus, ws));
    }

    let count = per_factor.iter().map(|(_, ws)| ws.len()).max().unwrap_or(1);
    let mut polys = vec![FqPoly::zero(); count];
    for (modulus, ws) in &per_factor {
        let cofactor = ring.div_exact(mu, modulus)?;
        let inv = ring.inv_mod(&ring.reduce(&cofactor, modulus), modulus)?;
        let idem = ring.reduce(&ring.mul(&cofactor, &inv), mu);
        for (j, w) in ws.iter().enumerate() {
            polys[j] = ring.add(&polys[j], &ring.mul(w, &idem));
        }
    }
    let polys: Vec<FqPoly> = polys.iter().map(|p| ring.reduce(p, mu)).collect();
    for (modulus, ws) in &per_factor {
        for (j, p) in polys.iter().enumerate() {
            let expect = ws.get(j).cloned().unwrap_or_else(FqPoly::zero);
            if ring.reduce(&ring.sub(p, &expect), modulus) != FqPoly::zero() {
                return Err(WaringError::VerificationFailed("CRT recombination mismatch".into()));
            }
        }
    }
    let witnesses = polys.iter().map(|p| space.eval_poly(p, a)).collect();
    Decomposition {
        ambient: AmbientTag::Matrix,
        target: a.clone(),
        k,
        witnesses,
        witness_polys: Some(polys),
    }
    .verified(&space)
}

/// As [`decompose_matrix`], after checking that `q` is admitted by `row`
/// and that the witness count respects the row bound.
pub fn decompose_matrix_with_row(
    ctx: &Arc<FieldCtx>,
    a: &FqMatrix,
    k: u64,
    row: &MatrixRow,
) -> Result<Decomposition<FqMatrix>> {
    let q = ctx.q() as u64;
    if row.k != k {
        return Err(WaringError::InvalidInput(format!("row is for k={}, not k={k}", row.k)));
    }
    if !row.admits(q) {
        return Err(WaringError::ExcludedFieldSize { q, k, m: row.m });
    }
    let d = decompose_matrix(ctx, a, k)?;
    if d.len() > row.m as usize {
        return Err(WaringError::VerificationFailed(format!(
            "{} witnesses exceed the row bound {}",
            d.len(),
            row.m
        )));
    }
    Ok(d)
}

/// Exhaustive minimal decomposition in `Mat_n(F_q)` for `q^(n^2)` up to
/// [`BRUTEFORCE_MATRIX_CAP`]. Witnesses need not be polynomials in `A`.
pub fn decompose_matrix_bruteforce(ctx: &FieldCtx, a: &FqMatrix, k: u64) -> Result<Decomposition<FqMatrix>> {
    let space = MatrixSpace::new(ctx, a.n());
    let size = space
        .order()
        .filter(|&s| s <= BRUTEFORCE_MATRIX_CAP)
        .ok_or(WaringError::CapExceeded {
            what: "matrix ring order",
            size: (ctx.q() as u128).saturating_pow((a.n() * a.n()) as u32),
            cap: BRUTEFORCE_MATRIX_CAP,
        })?;
    let mut seen = vec![false; size as usize];
    let mut powers = Vec::new();
    for idx in 0..size {
        let v = space.index_of(&space.pow(&space.from_index(idx), k));
        if !seen[v as usize] {
            seen[v as usize] = true;
            powers.push((v as u32, idx as u32));
        }
    }
    let add = |x: u32, y: u32| {
        let s = space.add(&space.from_index(x as u64), &space.from_index(y as u64));
        space.index_of(&s) as u32
    };
    let roots = sumset_search(size as usize, &add, &powers, 0, space.index_of(a) as u32, 64).ok_or_else(|| {
        WaringError::ResidueFieldUncoverable {
            factor: "Mat_n(F_q)".into(),
            order: size,
            k,
        }
    })?;
    Decomposition {
        ambient: AmbientTag::Matrix,
        target: a.clone(),
        k,
        witnesses: roots.into_iter().map(|r| space.from_index(r as u64)).collect(),
        witness_polys: None,
    }
    .verified(&space)
}

/// Polynomial pipeline first; exhaustive search when a residue field
/// cannot represent `x` and the ring is small enough.
pub fn decompose_matrix_auto(ctx: &Arc<FieldCtx>, a: &FqMatrix, k: u64) -> Result<Decomposition<FqMatrix>> {
    match decompose_matrix(ctx, a, k) {
        Err(e @ WaringError::ResidueFieldUncoverable { .. }) => {
            let small = MatrixSpace::new(ctx, a.n())
                .order()
                .is_some_and(|s| s <= BRUTEFORCE_MATRIX_CAP);
            if small {
                decompose_matrix_bruteforce(ctx, a, k)
            } else {
                Err(e)
            }
        }
        other => other,
    }
}
