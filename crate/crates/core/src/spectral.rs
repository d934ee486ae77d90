//! Spectra of the Cayley digraph `Cay(F_q, R_k*)`.
//!
//! The additive characters `x -> exp(2πi tr(αx)/p)` are eigenvectors of the
//! adjacency operator, with eigenvalue `λ_α = Σ_{s ∈ R_k*} ψ(αs)`. That value
//! only depends on the coset of `α`, so one sum per coset representative
//! `g^0, ..., g^{d-1}` gives the whole spectrum.

use nalgebra::linalg::Schur;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Result, WaringError};
use crate::field::{FieldCtx, FqElem};
use crate::gamma::{gamma, power_residues, BitSet, PowerClass};

/// Dense eigen-solve cap for the brute-force oracle.
pub const BRUTEFORCE_CAP: u32 = 512;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub k: u64,
    pub q: u64,
    pub d: u32,
    /// `λ` for the coset representatives `g^0..g^{d-1}`.
    pub lambdas: Vec<Complex64>,
    /// `|R_k*|`, the eigenvalue of the all-ones vector.
    pub trivial: u64,
    pub sum_sq: f64,
    pub n_star: f64,
    /// `q·sqrt(q - |R_k*|)/|R_k*|`, the a-priori ceiling on `n_star`.
    pub bound: f64,
}

impl SpectrumReport {
    pub fn max_abs(&self) -> f64 {
        self.lambdas.iter().map(|l| l.norm()).fold(0.0, f64::max)
    }

    /// `n_{*,len} = q/|S|^len · max|λ|^len`: walks of length `len` connect
    /// `X` to `Y` whenever `sqrt(|X||Y|)` exceeds it.
    pub fn n_star_walk(&self, len: u32) -> f64 {
        self.q as f64 / (self.trivial as f64).powi(len as i32) * self.max_abs().powi(len as i32)
    }

    /// Full eigenvalue multiset of the `q x q` adjacency matrix.
    pub fn eigenvalue_multiset(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(self.trivial as f64, 0.0)];
        for l in &self.lambdas {
            out.extend(std::iter::repeat_n(*l, self.trivial as usize));
        }
        out
    }

    /// Whether the spectral gap forces an edge from any `X` to any `Y` of these sizes.
    pub fn edge_guaranteed(&self, x_len: usize, y_len: usize) -> bool {
        ((x_len * y_len) as f64).sqrt() > self.n_star
    }
}

fn roots_of_unity(p: u32) -> Vec<Complex64> {
    (0..p)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / p as f64))
        .collect()
}

/// `Σ_{x ∈ R_k*} exp(2πi tr(αx)/p)`.
pub fn character_sum(ctx: &FieldCtx, pc: &PowerClass, alpha: FqElem) -> Complex64 {
    let omega = roots_of_unity(ctx.p());
    pc.units(ctx)
        .map(|x| omega[ctx.trace(ctx.mul(alpha, x)) as usize])
        .sum()
}

pub fn spectrum(ctx: &FieldCtx, k: u64) -> SpectrumReport {
    let pc = power_residues(ctx, k);
    let omega = roots_of_unity(ctx.p());
    let q = ctx.q() as u64;
    let d = pc.d;
    let r = pc.size_star as u64;
    let lambdas: Vec<Complex64> = (0..d as u64)
        .map(|i| {
            (0..r)
                .map(|j| omega[ctx.trace(ctx.antilog(i + j * d as u64)) as usize])
                .sum()
        })
        .collect();
    let sum_sq = lambdas.iter().map(|l| l.norm_sqr()).sum();
    let max_abs = lambdas.iter().map(|l| l.norm()).fold(0.0, f64::max);
    SpectrumReport {
        k,
        q,
        d,
        lambdas,
        trivial: r,
        sum_sq,
        n_star: q as f64 / r as f64 * max_abs,
        bound: q as f64 * ((q - r) as f64).sqrt() / r as f64,
    }
}

/// Adjacency matrix of `Cay(F_q, R_k*)`: `u -> v` iff `v - u ∈ R_k*`.
pub fn adjacency_matrix(ctx: &FieldCtx, k: u64) -> Result<DMatrix<f64>> {
    let q = ctx.q();
    if q > BRUTEFORCE_CAP {
        return Err(WaringError::CapExceeded {
            what: "dense adjacency matrix",
            size: q as u128,
            cap: BRUTEFORCE_CAP as u64,
        });
    }
    let pc = power_residues(ctx, k);
    let units: Vec<FqElem> = pc.units(ctx).collect();
    let mut a = DMatrix::<f64>::zeros(q as usize, q as usize);
    for u in ctx.elements() {
        for &s in &units {
            a[(u.0 as usize, ctx.add(u, s).0 as usize)] = 1.0;
        }
    }
    Ok(a)
}

/// Convergence threshold and iteration budget for the dense Schur solve.
/// Machine epsilon with no budget can stall on the highly repeated
/// eigenvalues of these matrices.
const SCHUR_EPS: f64 = 1e-12;
const SCHUR_MAX_ITER: usize = 100_000;

/// Eigenvalues of the adjacency matrix by a dense numerical solve.
pub fn spectrum_bruteforce(ctx: &FieldCtx, k: u64) -> Result<Vec<Complex64>> {
    let a = adjacency_matrix(ctx, k)?;
    let schur = Schur::try_new(a, SCHUR_EPS, SCHUR_MAX_ITER)
        .ok_or_else(|| WaringError::VerificationFailed("dense Schur solve did not converge".into()))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Multiset equality within `tol`, by greedy nearest matching.
pub fn multisets_match(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for x in a {
        let best = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|l, r| l.1.total_cmp(&r.1));
        match best {
            Some((i, dist)) if dist <= tol => used[i] = true,
            _ => return false,
        }
    }
    true
}

/// Brute-force search for `x ∈ X`, `y ∈ Y` with `y - x ∈ R_k*`.
pub fn find_edge(ctx: &FieldCtx, pc: &PowerClass, xs: &[FqElem], ys: &[FqElem]) -> Option<(FqElem, FqElem)> {
    for &x in xs {
        for &y in ys {
            let diff = ctx.sub(y, x);
            if !diff.is_zero() && pc.contains(diff) {
                return Some((x, y));
            }
        }
    }
    None
}

/// Brute-force search for a walk of length two from `X` to `Y`.
pub fn find_walk2(ctx: &FieldCtx, pc: &PowerClass, xs: &[FqElem], ys: &[FqElem]) -> Option<(FqElem, FqElem)> {
    let units: Vec<FqElem> = pc.units(ctx).collect();
    let mut two_step = BitSet::new(ctx.q() as usize);
    for &a in &units {
        for &b in &units {
            two_step.insert(ctx.add(a, b).0 as usize);
        }
    }
    xs.iter()
        .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
        .find(|&(x, y)| two_step.contains(ctx.sub(y, x).0 as usize))
}

pub fn two_power_guarantee(k: u64, q: u64) -> bool {
    q as u128 > (k as u128).pow(4)
}

pub fn three_power_guarantee(k: u64, q: u64) -> bool {
    q as u128 > (k as u128).pow(3)
}

/// Outcome of pairing a guarantee predicate with the gamma engine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuaranteeCheck {
    pub k: u64,
    pub q: u64,
    pub two: bool,
    pub three: bool,
    pub gamma: Option<u32>,
    /// False only when a predicate holds but the computed `γ` exceeds it.
    pub consistent: bool,
}

pub fn check_guarantees(k: u64, q: u64) -> Result<GuaranteeCheck> {
    let two = two_power_guarantee(k, q);
    let three = three_power_guarantee(k, q);
    let g = gamma(k, q)?.gamma();
    let within = |limit: u32| g.is_some_and(|g| g <= limit);
    let consistent = (!two || within(2)) && (!three || within(3));
    Ok(GuaranteeCheck {
        k,
        q,
        two,
        three,
        gamma: g,
        consistent,
    })
}

/// `qk/sqrt(q - 1)`: sets larger than this contain a k-th power difference.
pub fn sarkozy_threshold(k: u64, q: u64) -> f64 {
    q as f64 * k as f64 / ((q - 1) as f64).sqrt()
}

/// Smallest integer size strictly above the threshold.
pub fn sarkozy_min_size(k: u64, q: u64) -> u64 {
    sarkozy_threshold(k, q).floor() as u64 + 1
}

/// Distinct `x, y ∈ E` with `x - y` a k-th power, by exhaustive search.
pub fn sarkozy_find_pair(ctx: &FieldCtx, k: u64, set: &[FqElem]) -> Option<(FqElem, FqElem)> {
    let pc = power_residues(ctx, k);
    for (i, &x) in set.iter().enumerate() {
        for &y in &set[i + 1..] {
            if x == y {
                continue;
            }
            if pc.contains(ctx.sub(x, y)) {
                return Some((x, y));
            }
            if pc.contains(ctx.sub(y, x)) {
                return Some((y, x));
            }
        }
    }
    None
}

/// `(y-1)^4 - x^4 y^3 + (y-1) y^2 x^3`, positive for `y > x^4`.
pub fn quartic_form(x: i128, y: i128) -> i128 {
    (y - 1).pow(4) - x.pow(4) * y.pow(3) + (y - 1) * y * y * x.pow(3)
}

/// `(y-1)^3 - x^2 y (xy - y + 1)`, positive for `y > x^3`.
pub fn cubic_form(x: i128, y: i128) -> i128 {
    (y - 1).pow(3) - x * x * y * (x * y - y + 1)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct LemmaReport {
    pub x_max: u64,
    pub y_window: u64,
    pub quartic_checked: u64,
    pub quartic_violations: Vec<(u64, u64)>,
    pub cubic_checked: u64,
    pub cubic_violations: Vec<(u64, u64)>,
    /// Numerical probe of the general-`m` form; informational only.
    pub exploration: Vec<ExplorationRow>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExplorationRow {
    pub m: u32,
    pub checked: u64,
    pub violations: u64,
}

/// Evaluates both inequalities exactly for `2 <= x <= x_max` and the first
/// `y_window` integers `y` above the threshold.
pub fn verify_appendix_lemmas(x_max: u64, y_window: u64) -> Result<LemmaReport> {
    if x_max < 2 || y_window < 1 {
        return Err(WaringError::InvalidInput("need x_max >= 2 and y_window >= 1".into()));
    }
    let mut rep = LemmaReport {
        x_max,
        y_window,
        ..Default::default()
    };
    for x in 2..=x_max {
        let xi = x as i128;
        for y in xi.pow(4) + 1..=xi.pow(4) + y_window as i128 {
            rep.quartic_checked += 1;
            if quartic_form(xi, y) <= 0 {
                rep.quartic_violations.push((x, y as u64));
            }
        }
        for y in xi.pow(3) + 1..=xi.pow(3) + y_window as i128 {
            rep.cubic_checked += 1;
            if cubic_form(xi, y) <= 0 {
                rep.cubic_violations.push((x, y as u64));
            }
        }
    }
    rep.exploration = (4..=6).map(|m| explore_general_form(m, x_max, y_window)).collect();
    Ok(rep)
}

/// Probes `(y-1)^m > y x^{(m+1)/2} (xy-y+1)^{(m-1)/2}` for `y > x^m` by
/// comparing squares exactly.
pub fn explore_general_form(m: u32, x_max: u64, y_window: u64) -> ExplorationRow {
    let mut checked = 0;
    let mut violations = 0;
    for x in 2..=x_max.min(6) {
        let xb = BigInt::from(x);
        let start = xb.pow(m) + 1u32;
        for step in 0..y_window {
            let y = &start + step;
            let lhs = (&y - 1u32).pow(2 * m);
            let rhs = y.pow(2) * xb.pow(m + 1) * (&xb * &y - &y + 1u32).pow(m - 1);
            checked += 1;
            if lhs <= rhs {
                violations += 1;
            }
        }
    }
    ExplorationRow {
        m,
        checked,
        violations,
    }
}

/// Index of `gcd(k, q-1)` cosets, exposed for reports.
pub fn coset_count(k: u64, q: u64) -> u64 {
    gcd(k, q - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn single_coset_sum_is_minus_one() {
        let f8 = build_field(2, 3).unwrap();
        let r = spectrum(&f8, 3);
        assert_eq!(r.d, 1);
        assert!((r.lambdas[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
        assert!((r.sum_sq - 1.0).abs() < 1e-9);
    }

    #[test]
    fn quadratic_characters_mod_five() {
        let f5 = build_field(5, 1).unwrap();
        let r = spectrum(&f5, 2);
        let c1 = 2.0 * (2.0 * std::f64::consts::PI / 5.0).cos();
        let c2 = 2.0 * (4.0 * std::f64::consts::PI / 5.0).cos();
        assert!((r.lambdas[0].re - c1).abs() < 1e-9);
        assert!((r.lambdas[1].re - c2).abs() < 1e-9);
        assert!((r.sum_sq - 3.0).abs() < 1e-9);
    }

    #[test]
    fn bruteforce_agrees_on_small_cases() {
        for &(p, s, k) in &[(5u64, 1u32, 2u64), (2, 2, 3), (7, 1, 1), (3, 2, 4), (13, 1, 3)] {
            let f = build_field(p, s).unwrap();
            let r = spectrum(&f, k);
            let eig = spectrum_bruteforce(&f, k).unwrap();
            assert!(multisets_match(&r.eigenvalue_multiset(), &eig, 1e-6), "p={p} s={s} k={k}");
        }
    }

    #[test]
    fn lambda_is_constant_on_cosets() {
        let f = build_field(3, 3).unwrap();
        let pc = power_residues(&f, 13);
        let r = spectrum(&f, 13);
        for i in 0..r.d as u64 {
            for j in [0u64, 1, 2] {
                let alpha = f.antilog(i + j * r.d as u64);
                assert!((character_sum(&f, &pc, alpha) - r.lambdas[i as usize]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn sarkozy_thresholds() {
        assert_eq!(sarkozy_min_size(3, 1681), 124);
        assert_eq!(sarkozy_min_size(4, 1681), 165);
        assert_eq!(sarkozy_min_size(5, 1681), 206);
        let f49 = build_field(7, 2).unwrap();
        assert!(sarkozy_find_pair(&f49, 1, &[FqElem(3), FqElem(9)]).is_some());
    }

    #[test]
    fn lemma_forms() {
        assert_eq!(quartic_form(2, 17), 23920);
        assert_eq!(cubic_form(2, 9), 152);
        let rep = verify_appendix_lemmas(4, 20).unwrap();
        assert!(rep.quartic_violations.is_empty() && rep.cubic_violations.is_empty());
        assert_eq!(rep.quartic_checked, 60);
    }

    #[test]
    fn guarantee_predicates() {
        assert!(two_power_guarantee(3, 82));
        assert!(!two_power_guarantee(5, 625));
        let c = check_guarantees(3, 83).unwrap();
        assert!(c.two && c.consistent && c.gamma.unwrap() <= 2);
        assert!(check_guarantees(2, 17).unwrap().gamma == Some(2));
    }
}
