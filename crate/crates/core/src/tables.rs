//! Witness-count rows for matrix rings over `F_q` and for general finite
//! rings. Each row says: if `q` avoids the listed values (matrix rows) or no
//! listed value divides `|R|` (ring rows), then `m` k-th powers suffice.

use crate::arith::prime_power;

/// A matrix-ring row: `q` must differ from every `excluded` value and must
/// not be a power of any prime in `excluded_chars`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixRow {
    pub k: u64,
    pub excluded: &'static [u64],
    pub excluded_chars: &'static [u64],
    pub m: u32,
}

impl MatrixRow {
    pub fn admits(&self, q: u64) -> bool {
        if self.excluded.contains(&q) {
            return false;
        }
        match prime_power(q) {
            Some((p, _)) => !self.excluded_chars.contains(&p),
            None => false,
        }
    }
}

/// A ring row: no value in `excluded_divisors` may divide `|R|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RingRow {
    pub k: u64,
    pub excluded_divisors: &'static [u64],
    pub n: u32,
}

impl RingRow {
    pub fn admits(&self, order: u128) -> bool {
        self.excluded_divisors.iter().all(|&q| order % q as u128 != 0)
    }
}

macro_rules! mrow {
    ($k:expr, [$($q:expr),*], [$($c:expr),*], $m:expr) => {
        MatrixRow { k: $k, excluded: &[$($q),*], excluded_chars: &[$($c),*], m: $m }
    };
}

macro_rules! rrow {
    ($k:expr, [$($q:expr),*], $n:expr) => {
        RingRow { k: $k, excluded_divisors: &[$($q),*], n: $n }
    };
}

pub const MATRIX_ROWS: &[MatrixRow] = &[
    mrow!(3, [2, 4], [3], 3),
    mrow!(3, [2, 4, 7], [3], 2),
    mrow!(4, [3, 9], [2], 5),
    mrow!(4, [3, 5, 9], [2], 4),
    mrow!(4, [3, 5, 9, 13, 17, 25, 29], [2], 3),
    mrow!(5, [2, 4, 16], [5], 5),
    mrow!(5, [2, 4, 11, 16], [5], 3),
    mrow!(5, [2, 4, 11, 16, 31, 41, 61], [5], 2),
    mrow!(6, [2, 4, 5, 25], [2, 3], 7),
    mrow!(6, [2, 4, 5, 7, 13, 25], [2, 3], 5),
    mrow!(6, [2, 4, 5, 7, 13, 19, 25, 31], [2, 3], 4),
    mrow!(
        6,
        [2, 4, 5, 7, 13, 19, 25, 31, 37, 43, 49, 61, 67, 73, 79, 109, 139, 223],
        [2, 3],
        3
    ),
    mrow!(7, [2, 8], [7], 4),
    mrow!(7, [2, 8, 29, 43], [7], 3),
    mrow!(7, [2, 4, 8, 29, 43, 64, 71, 113, 127], [7], 2),
    mrow!(8, [3, 7, 9, 49], [2], 9),
    mrow!(8, [3, 7, 9, 17, 49], [2], 5),
    mrow!(8, [3, 5, 7, 9, 17, 25, 41, 49], [2], 4),
    mrow!(
        8,
        [3, 5, 7, 9, 11, 13, 17, 25, 29, 41, 49, 73, 81, 89, 97, 113, 121, 137, 233, 257, 289, 337, 761],
        [2],
        3
    ),
    mrow!(9, [2, 4, 8, 64], [3], 9),
    mrow!(9, [2, 4, 8, 19, 64], [3], 5),
    mrow!(9, [2, 4, 8, 19, 37, 64], [3], 3),
    mrow!(
        9,
        [2, 4, 7, 8, 19, 37, 64, 73, 109, 127, 163, 181, 199, 271, 307, 343],
        [3],
        2
    ),
    mrow!(10, [2, 3, 4, 9, 16, 81], [2, 5], 11),
    mrow!(10, [2, 3, 4, 9, 11, 16, 81], [2, 5], 6),
    mrow!(10, [2, 3, 4, 9, 11, 16, 31, 81], [2, 5], 5),
    mrow!(10, [2, 3, 4, 9, 11, 16, 31, 41, 61, 81], [2, 5], 4),
    mrow!(
        10,
        [
            2, 3, 4, 9, 11, 16, 31, 41, 61, 71, 81, 101, 121, 131, 151, 181, 191, 211, 241, 251, 271, 281,
            311, 331, 401, 421, 431, 461, 491, 641, 911
        ],
        [2, 5],
        3
    ),
    mrow!(11, [23], [11], 5),
    mrow!(11, [23, 67], [11], 4),
    mrow!(11, [23, 67, 89], [11], 3),
    mrow!(11, [23, 67, 89, 199, 331, 353, 419, 463, 617], [11], 2),
];

pub const RING_ROWS: &[RingRow] = &[
    rrow!(3, [3, 4], 3),
    rrow!(3, [3, 4, 7], 2),
    rrow!(4, [2, 9], 5),
    rrow!(4, [2, 5, 9], 4),
    rrow!(4, [2, 5, 9, 13, 17, 29], 3),
    rrow!(5, [5, 16], 5),
    rrow!(5, [5, 11, 16], 3),
    rrow!(5, [5, 11, 16, 31, 41, 61], 2),
    rrow!(6, [2, 3, 25], 7),
    rrow!(6, [2, 3, 7, 13, 25], 5),
    rrow!(6, [2, 3, 7, 13, 19, 25, 31], 4),
    rrow!(
        6,
        [2, 3, 7, 13, 19, 25, 31, 37, 43, 61, 67, 73, 79, 109, 139, 223],
        3
    ),
    rrow!(7, [7, 8], 4),
    rrow!(7, [7, 8, 29, 43], 3),
    rrow!(7, [7, 8, 29, 43, 71, 113, 127], 2),
    rrow!(8, [2, 9, 49], 9),
    rrow!(8, [2, 9, 17, 49], 5),
    rrow!(8, [2, 5, 9, 17, 41, 49], 4),
    rrow!(
        8,
        [2, 5, 9, 13, 17, 29, 41, 49, 73, 89, 97, 113, 121, 137, 233, 257, 337, 761],
        3
    ),
    rrow!(9, [3, 4], 9),
    rrow!(9, [3, 4, 19], 5),
    rrow!(9, [3, 4, 19, 37], 3),
    rrow!(9, [3, 4, 7, 19, 37, 73, 109, 127, 163, 181, 199, 271, 307], 2),
    rrow!(10, [2, 5, 81], 11),
    rrow!(10, [2, 5, 11, 81], 6),
    rrow!(10, [2, 5, 11, 31, 81], 5),
    rrow!(10, [2, 5, 11, 31, 41, 61, 81], 4),
    rrow!(
        10,
        [
            2, 5, 11, 31, 41, 61, 71, 81, 101, 131, 151, 181, 191, 211, 241, 251, 271, 281, 311, 331, 401, 421,
            431, 461, 491, 641, 911
        ],
        3
    ),
    rrow!(11, [11, 23], 5),
    rrow!(11, [11, 23, 67], 4),
    rrow!(11, [11, 23, 67, 89], 3),
    rrow!(11, [11, 23, 67, 89, 199, 331, 353, 419, 463, 617], 2),
];

pub fn matrix_rows(k: u64) -> impl Iterator<Item = &'static MatrixRow> {
    MATRIX_ROWS.iter().filter(move |r| r.k == k)
}

pub fn ring_rows(k: u64) -> impl Iterator<Item = &'static RingRow> {
    RING_ROWS.iter().filter(move |r| r.k == k)
}

/// Tightest matrix row admitting `q`, if any.
pub fn best_matrix_row(k: u64, q: u64) -> Option<&'static MatrixRow> {
    matrix_rows(k).filter(|r| r.admits(q)).min_by_key(|r| r.m)
}

/// Tightest ring row admitting a ring of this order, if any.
pub fn best_ring_row(k: u64, order: u128) -> Option<&'static RingRow> {
    ring_rows(k).filter(|r| r.admits(order)).min_by_key(|r| r.n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_selection() {
        assert_eq!(best_matrix_row(3, 5).unwrap().m, 2);
        assert_eq!(best_matrix_row(3, 7).unwrap().m, 3);
        assert!(best_matrix_row(3, 4).is_none());
        assert!(best_matrix_row(3, 9).is_none());
        assert_eq!(best_matrix_row(4, 49).unwrap().m, 3);
        assert_eq!(best_ring_row(3, 55).unwrap().n, 2);
        assert!(best_ring_row(3, 12).is_none());
    }

    #[test]
    fn every_ring_row_excludes_the_divisors_of_k() {
        for row in RING_ROWS {
            for d in 2..=row.k {
                if row.k % d == 0 && crate::arith::is_prime(d) {
                    assert!(!row.admits(d as u128), "k={} d={d}", row.k);
                }
            }
        }
    }
}
