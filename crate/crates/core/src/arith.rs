//! Integer helpers: primality, factorization, prime-power enumeration,
//! modular inverses and CRT over machine integers.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, ascending primes with exponents.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Returns `(p, s)` with `q = p^s` when `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = factorize(q);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

/// Product of the distinct primes dividing `n`.
pub fn radical(n: u64) -> u64 {
    factorize(n).iter().map(|&(p, _)| p).product()
}

/// All prime powers `2 <= q <= bound`, ascending, with their `(p, s)`.
pub fn prime_powers_up_to(bound: u64) -> Vec<(u64, u64, u32)> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
        let p = i as u64;
        let mut q = p;
        let mut s = 1;
        loop {
            out.push((q, p, s));
            match q.checked_mul(p) {
                Some(next) if next <= bound => {
                    q = next;
                    s += 1;
                }
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out
}

/// Extended Euclid on signed integers: returns `(g, x, y)` with `ax + by = g`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

/// Solves `x = r_i mod m_i` for pairwise coprime moduli.
pub fn crt(residues: &[(u64, u64)]) -> Option<(u64, u64)> {
    let mut acc: (u128, u128) = (0, 1);
    for &(r, m) in residues {
        let (a, n) = acc;
        let inv = inv_mod((n % m as u128) as u64, m)? as u128;
        let t = ((r as u128 + m as u128 - (a % m as u128)) % m as u128) * inv % m as u128;
        acc = (a + n * t, n * m as u128);
    }
    let (a, n) = acc;
    if n > u64::MAX as u128 {
        return None;
    }
    Some((a as u64, n as u64))
}

pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}
