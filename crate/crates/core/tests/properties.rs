use std::sync::Arc;

use proptest::prelude::*;

use waring_core::arith::{gcd, pow_mod, prime_powers_up_to};
use waring_core::decomposition::decompose_field;
use waring_core::hensel::{hensel_weak, radical_hensel};
use waring_core::matrix::{decompose_matrix, minimal_polynomial};
use waring_core::ring::decompose_ring_element;
use waring_core::{build_field, field_of_order, gamma, FqElem, FqMatrix, FqPoly, MatrixSpace, PolyRing, RingElem, RingSpec};

fn prime_power() -> impl Strategy<Value = u64> {
    let qs: Vec<u64> = prime_powers_up_to(300).into_iter().map(|t| t.0).collect();
    proptest::sample::select(qs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prime_field_matches_integer_arithmetic(p in proptest::sample::select(vec![2u64, 3, 5, 7, 11, 101, 257]), a in 0u64..1000, b in 0u64..1000) {
        let f = build_field(p, 1).unwrap();
        let (x, y) = (FqElem((a % p) as u32), FqElem((b % p) as u32));
        prop_assert_eq!(f.add(x, y).0 as u64, (a + b) % p);
        prop_assert_eq!(f.mul(x, y).0 as u64, (a % p) * (b % p) % p);
        prop_assert_eq!(f.pow(x, 5).0 as u64, pow_mod(a % p, 5, p));
    }

    #[test]
    fn closure_sizes_are_monotone_and_end_at_q(q in prime_power(), k in 1u64..12) {
        let r = gamma(k, q).unwrap();
        prop_assert!(r.closure_sizes.windows(2).all(|w| w[0] < w[1]));
        let d = gcd(k, q - 1);
        prop_assert!(r.closure_sizes.len() as u64 <= d.max(1));
        if let Some(g) = r.gamma() {
            prop_assert_eq!(r.closure_sizes[g as usize - 1], q);
            prop_assert!(g as u64 <= k.max(1));
        } else {
            prop_assert!(*r.closure_sizes.last().unwrap() < q);
        }
    }

    #[test]
    fn field_decompositions_are_minimal_and_exact(q in prime_power(), k in 2u64..8, code in 0u32..300) {
        let ctx = field_of_order(q).unwrap();
        let y = FqElem(code % ctx.q());
        let g = gamma(k, q).unwrap().gamma();
        match decompose_field(&ctx, y, k) {
            Ok(d) => {
                let sum = d.witnesses.iter().fold(FqElem::ZERO, |s, &w| ctx.add(s, ctx.pow(w, k)));
                prop_assert_eq!(sum, y);
                prop_assert!(d.len() as u32 <= g.unwrap());
            }
            Err(_) => prop_assert!(g.is_none()),
        }
    }

    #[test]
    fn minimal_polynomial_annihilates(q in proptest::sample::select(vec![2u64, 3, 4, 5, 7, 9]), n in 1usize..5, seed in any::<u64>()) {
        let ctx = field_of_order(q).unwrap();
        let space = MatrixSpace::new(&ctx, n);
        let mut s = seed;
        let rows: Vec<Vec<FqElem>> = (0..n)
            .map(|_| (0..n).map(|_| { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); FqElem(((s >> 33) % q) as u32) }).collect())
            .collect();
        let a = FqMatrix::from_rows(&rows).unwrap();
        let mu = minimal_polynomial(&space, &a);
        prop_assert!(space.eval_poly(&mu, &a).is_zero());
        prop_assert!(mu.degree().unwrap() <= n);
    }

    #[test]
    fn matrix_pipeline_witnesses_are_polynomials_in_a(q in proptest::sample::select(vec![5u64, 11, 13]), seed in any::<u64>()) {
        let ctx = Arc::new(field_of_order(q).unwrap());
        let space = MatrixSpace::new(&ctx, 2);
        let c = |i: u64| FqElem(((seed >> (8 * i)) % q) as u32);
        let a = FqMatrix::from_rows(&[vec![c(0), c(1)], vec![c(2), c(3)]]).unwrap();
        let d = decompose_matrix(&ctx, &a, 3).unwrap();
        let polys = d.witness_polys.clone().unwrap();
        for (w, p) in d.witnesses.iter().zip(&polys) {
            prop_assert_eq!(&space.eval_poly(p, &a), w);
        }
        let sum = d.witnesses.iter().fold(FqMatrix::zero(2), |s, w| space.add(&s, &space.pow(w, 3)));
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn zn_decompositions_verify(n in 2u64..3000, k in proptest::sample::select(vec![3u64, 5, 7]), a in any::<u64>()) {
        prop_assume!(gcd(n, k) == 1);
        let ring = RingSpec::zn(n).unwrap();
        let alpha = RingElem(a % n);
        match decompose_ring_element(&ring, alpha, k) {
            Ok(d) => {
                let sum = d.witnesses.iter().fold(0, |s, w| (s + pow_mod(w.0, k, n)) % n);
                prop_assert_eq!(sum, alpha.0);
            }
            // Only an uncoverable residue field may stop the pipeline.
            Err(e) => prop_assert_eq!(e.name(), "ResidueFieldUncoverable"),
        }
    }

    #[test]
    fn radical_newton_finds_kth_roots(n in 2u64..5000, k in 2u64..8, b in any::<u64>()) {
        prop_assume!(gcd(n, k) == 1);
        let b = b % n;
        prop_assume!(gcd(b, n) == 1);
        let a = pow_mod(b, k, n);
        let ring = RingSpec::zn(n).unwrap();
        let mut coeffs = vec![RingElem(0); k as usize + 1];
        coeffs[0] = RingElem((n - a) % n);
        coeffs[k as usize] = RingElem(1);
        let r = radical_hensel(&ring, &coeffs, &RingElem(b)).unwrap();
        prop_assert_eq!(pow_mod(r.0, k, n), a);
    }

    #[test]
    fn weak_lift_on_linear_roots(q in proptest::sample::select(vec![2u64, 3, 5, 7]), root in 0u32..7, n in 1u32..5, m in 1u32..5) {
        // Q(t) = t - (root + f^n h) with f = x + 1: a simple root to every precision.
        prop_assume!(m <= n);
        let ctx = field_of_order(q).unwrap();
        let r = PolyRing::new(&ctx);
        let f = FqPoly::from_codes(&[1, 1]);
        let shift = r.mul(&r.pow(&f, n as u64), &FqPoly::from_codes(&[1, 0, 1]));
        let c = r.add(&FqPoly::from_codes(&[root % ctx.q()]), &shift);
        let qt = vec![r.neg(&c), FqPoly::one()];
        let g = FqPoly::from_codes(&[root % ctx.q()]);
        let g2 = hensel_weak(&r, &qt, &g, &f, n, m).unwrap();
        let top = r.pow(&f, (n + m) as u64);
        prop_assert!(r.rem(&r.sub(&g2, &c), &top).unwrap().is_zero());
    }
}
