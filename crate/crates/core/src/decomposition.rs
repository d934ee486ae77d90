//! Verified sum-of-k-th-powers decompositions.

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WaringError};
use crate::field::{FieldCtx, FqElem};
use crate::gamma::FieldWaring;
use crate::poly::FqPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AmbientTag {
    Field,
    Matrix,
    Ring,
}

/// A structure where sums of k-th powers can be evaluated exactly.
pub trait Ambient {
    type Elem: Clone + PartialEq + Debug;

    fn tag(&self) -> AmbientTag;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn power(&self, a: &Self::Elem, k: u64) -> Self::Elem;

    /// Checks a witness against its polynomial certificate, where the
    /// ambient supports one.
    fn check_certificate(&self, _target: &Self::Elem, _witness: &Self::Elem, _poly: &FqPoly) -> bool {
        true
    }
}

/// `target = Σ witnesses[i]^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition<E> {
    pub ambient: AmbientTag,
    pub target: E,
    pub k: u64,
    pub witnesses: Vec<E>,
    /// Polynomials `P_i` with `witnesses[i] = P_i(target)`, when available.
    pub witness_polys: Option<Vec<FqPoly>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport<E> {
    pub ok: bool,
    pub sum: E,
    pub failed_certificates: Vec<usize>,
}

impl<E: Clone + PartialEq + Debug> Decomposition<E> {
    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }

    pub fn check<A: Ambient<Elem = E>>(&self, amb: &A) -> VerifyReport<E> {
        let sum = self
            .witnesses
            .iter()
            .fold(amb.zero(), |acc, w| amb.add(&acc, &amb.power(w, self.k)));
        let failed_certificates = match &self.witness_polys {
            None => Vec::new(),
            Some(polys) => self
                .witnesses
                .iter()
                .zip(polys)
                .enumerate()
                .filter(|(_, (w, p))| !amb.check_certificate(&self.target, w, p))
                .map(|(i, _)| i)
                .collect(),
        };
        let cert_count_ok = self
            .witness_polys
            .as_ref()
            .is_none_or(|p| p.len() == self.witnesses.len());
        VerifyReport {
            ok: sum == self.target && failed_certificates.is_empty() && cert_count_ok && amb.tag() == self.ambient,
            sum,
            failed_certificates,
        }
    }

    pub fn verify<A: Ambient<Elem = E>>(&self, amb: &A) -> bool {
        self.check(amb).ok
    }

    /// Returns `self` if it verifies, an error with the mismatch otherwise.
    pub fn verified<A: Ambient<Elem = E>>(self, amb: &A) -> Result<Self> {
        let rep = self.check(amb);
        if rep.ok {
            Ok(self)
        } else {
            Err(WaringError::VerificationFailed(format!(
                "sum of powers {:?} differs from target {:?} (bad certificates: {:?})",
                rep.sum, self.target, rep.failed_certificates
            )))
        }
    }
}

impl Ambient for FieldCtx {
    type Elem = FqElem;

    fn tag(&self) -> AmbientTag {
        AmbientTag::Field
    }

    fn zero(&self) -> FqElem {
        FqElem::ZERO
    }

    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FieldCtx::add(self, *a, *b)
    }

    fn power(&self, a: &FqElem, k: u64) -> FqElem {
        self.pow(*a, k)
    }
}

/// Minimal decomposition of a field element.
pub fn decompose_field(ctx: &FieldCtx, y: FqElem, k: u64) -> Result<Decomposition<FqElem>> {
    let fw = FieldWaring::new(ctx, k);
    let witnesses = fw.represent(y).ok_or_else(|| WaringError::ResidueFieldUncoverable {
        factor: "F_q".into(),
        order: ctx.q() as u64,
        k,
    })?;
    Decomposition {
        ambient: AmbientTag::Field,
        target: y,
        k,
        witnesses,
        witness_polys: None,
    }
    .verified(ctx)
}

/// Minimal-length representation of `target` as a sum of elements of
/// `powers` (given as `(value, root)` codes) in a finite additive group of
/// `size` elements, by breadth-first sumset search. Returns the roots.
pub fn sumset_search(
    size: usize,
    add: &dyn Fn(u32, u32) -> u32,
    powers: &[(u32, u32)],
    zero: u32,
    target: u32,
    max_terms: u32,
) -> Option<Vec<u32>> {
    // pred[x] = (previous partial sum, root used); level 0 is {zero}.
    let mut pred: Vec<Option<(u32, u32)>> = vec![None; size];
    let mut seen = vec![false; size];
    seen[zero as usize] = true;
    let mut frontier = vec![zero];
    for _ in 0..max_terms {
        let mut next = Vec::new();
        for &x in &frontier {
            for &(v, r) in powers {
                let y = add(x, v);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    pred[y as usize] = Some((x, r));
                    next.push(y);
                }
            }
        }
        if target == zero {
            // Zero is a single k-th power (of zero) whenever it is listed.
            return powers.iter().find(|p| p.0 == zero).map(|p| vec![p.1]);
        }
        if seen[target as usize] {
            let mut out = Vec::new();
            let mut cur = target;
            while cur != zero {
                let (prev, r) = pred[cur as usize].expect("reached through a predecessor");
                out.push(r);
                cur = prev;
            }
            out.reverse();
            return Some(out);
        }
        if next.is_empty() {
            return None;
        }
        frontier = next;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn three_cubes_in_f7() {
        let f7 = build_field(7, 1).unwrap();
        let d = Decomposition {
            ambient: AmbientTag::Field,
            target: FqElem(3),
            k: 3,
            witnesses: vec![FqElem(1); 3],
            witness_polys: None,
        };
        assert!(d.verify(&f7));
        let mut bad = d.clone();
        bad.witnesses[0] = FqElem(3);
        assert!(!bad.verify(&f7));
        let best = decompose_field(&f7, FqElem(3), 3).unwrap();
        assert_eq!(best.len(), 3);
    }

    #[test]
    fn sumset_search_in_z7() {
        let add = |a: u32, b: u32| (a + b) % 7;
        let cubes: Vec<(u32, u32)> = (0..7).map(|x| ((x * x * x) % 7, x)).collect();
        let w = sumset_search(7, &add, &cubes, 0, 3, 10).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.iter().map(|&x| x * x * x).sum::<u32>() % 7, 3);
        assert_eq!(sumset_search(7, &add, &cubes, 0, 0, 10), Some(vec![0]));
    }
}
