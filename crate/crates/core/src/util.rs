//! Small numeric helpers shared across modules: prime-field scalar
//! arithmetic, big-integer logs and integer-exact logarithm comparisons, the
//! `gcd(k, q^d - 1)` reduction that avoids materializing `q^d`, and the fixed
//! chunking used to make floating-point sums reproducible.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigUint;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Fixed chunk length for long accumulations. Partial sums are taken over
/// `[i*CHUNK, (i+1)*CHUNK)` windows and combined in index order, so a sum's
/// floating-point value depends only on the enumeration, never on how the
/// chunks were scheduled across workers.
pub const SUM_CHUNK: u64 = 1 << 14;

/// Splits `0..total` into the fixed windows described on [`SUM_CHUNK`].
pub fn chunk_ranges(total: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < total {
        let end = (start + SUM_CHUNK).min(total);
        out.push((start, end));
        start = end;
    }
    out
}

/// Sums `f` over `0..total` chunk by chunk in index order (the sequential
/// reference reduction; parallel drivers must reproduce it bit for bit).
pub fn chunked_complex_sum(total: u64, mut f: impl FnMut(u64, u64) -> Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (s, e) in chunk_ranges(total) {
        acc += f(s, e);
    }
    acc
}

// ---------------------------------------------------------------------------
// Prime-field scalars (p small, values kept in [0, p)).
// ---------------------------------------------------------------------------

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse mod a prime, via Fermat.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Deterministic primality by trial division; the crate only ever tests
/// numbers well below `2^40`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

// ---------------------------------------------------------------------------
// Linear algebra over F_p (tiny dense systems for embeddings and traces).
// ---------------------------------------------------------------------------

/// Solves `A x = b` over `F_p` where `A` is given in row-major order as
/// `rows x cols`. Returns any solution, or `None` if the system is
/// inconsistent.
pub fn solve_mod_p(a: &[Vec<u64>], b: &[u64], p: u64) -> Option<Vec<u64>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs % p);
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c], p).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..=cols {
                    let t = mul_mod(f, m[r][j], p);
                    m[i][j] = sub_mod(m[i][j], t, p);
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // Inconsistent row: all-zero coefficients with nonzero rhs.
    for i in r..rows {
        if m[i][cols] != 0 {
            return None;
        }
    }
    let mut x = vec![0u64; cols];
    for (row, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[row][cols];
    }
    Some(x)
}

/// Basis of the kernel of `A` (rows x cols) over `F_p`, one vector per free
/// column, in ascending free-column order.
pub fn kernel_basis_mod_p(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<u64>> = a.to_vec();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c], p).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    let t = mul_mod(f, m[r][j], p);
                    m[i][j] = sub_mod(m[i][j], t, p);
                }
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for c in 0..cols {
            if let Some(pr) = pivot_of_col[c] {
                v[c] = sub_mod(0, m[pr][free], p);
            }
        }
        basis.push(v);
    }
    basis
}

// ---------------------------------------------------------------------------
// Big-integer helpers.
// ---------------------------------------------------------------------------

/// Natural log of a positive big integer, accurate to a few ulps even when
/// the value overflows `f64`.
pub fn ln_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "ln of zero");
    let bits = x.bits();
    if bits <= 53 {
        return libm::log(x.to_f64().expect("fits f64"));
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().expect("53-bit mantissa fits");
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

/// `gcd(k, q^d - 1)` without materializing `q^d`: reduces `q^d - 1` modulo
/// `k` by modular exponentiation first. `k = 0` is rejected by callers.
pub fn gcd_with_q_pow_minus_one(k: &BigUint, q: u64, d: u64) -> BigUint {
    assert!(!k.is_zero(), "gcd with k = 0");
    if k.is_one() {
        return BigUint::one();
    }
    let qd = BigUint::from(q).modpow(&BigUint::from(d), k);
    // (q^d - 1) mod k, computed additively to stay nonnegative.
    let r = (qd + k - 1u32) % k;
    if r.is_zero() {
        k.clone()
    } else {
        k.gcd(&r)
    }
}

/// Smallest `e >= 0` with `q^e > x` (so `x < q^d` iff `d >= e`). Exact
/// integer arithmetic throughout.
pub fn ceil_log_strict(q: u64, x: &BigUint) -> u64 {
    assert!(q >= 2);
    let q = BigUint::from(q);
    let mut e = 0u64;
    let mut pw = BigUint::one();
    while pw <= *x {
        pw *= &q;
        e += 1;
    }
    e
}

/// Smallest `m >= 0` with `q^m >= x`, i.e. `⌈log_q x⌉` for `x >= 1`.
pub fn ceil_log(q: u64, x: &BigUint) -> u64 {
    assert!(q >= 2);
    assert!(!x.is_zero());
    let q = BigUint::from(q);
    let mut m = 0u64;
    let mut pw = BigUint::one();
    while pw < *x {
        pw *= &q;
        m += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    #[test]
    fn chunking_is_fixed_and_covers() {
        let r = chunk_ranges(3 * SUM_CHUNK + 7);
        assert_eq!(r.len(), 4);
        assert_eq!(r[0], (0, SUM_CHUNK));
        assert_eq!(r[3], (3 * SUM_CHUNK, 3 * SUM_CHUNK + 7));
    }

    #[test]
    fn mod_p_scalars() {
        assert_eq!(add_mod(4, 5, 7), 2);
        assert_eq!(sub_mod(2, 5, 7), 4);
        assert_eq!(mul_mod(3, 5, 7), 1);
        assert_eq!(pow_mod(3, 6, 7), 1);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(0, 7), None);
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn solve_small_system() {
        // x + y = 1, x + 2y = 0 over F_3 => y = 2, x = 2.
        let a = vec![vec![1, 1], vec![1, 2]];
        let x = solve_mod_p(&a, &[1, 0], 3).unwrap();
        assert_eq!(x, vec![2, 2]);
        // Inconsistent system.
        let a = vec![vec![1, 1], vec![2, 2]];
        assert_eq!(solve_mod_p(&a, &[1, 1], 3), None);
    }

    #[test]
    fn kernel_of_singular_map() {
        // Over F_2: rows (1 1 0), (0 0 1) -> kernel spanned by (1 1 0).
        let a = vec![vec![1, 1, 0], vec![0, 0, 1]];
        let k = kernel_basis_mod_p(&a, 2);
        assert_eq!(k, vec![vec![1, 1, 0]]);
    }

    #[test]
    fn big_log_matches_f64() {
        let x = BigUint::from_u64(1 << 40).unwrap();
        assert!((ln_biguint(&x) - 40.0 * core::f64::consts::LN_2).abs() < 1e-12);
        let huge = BigUint::from(3u32).pow(500);
        assert!((ln_biguint(&huge) - 500.0 * libm::log(3.0)).abs() < 1e-9);
    }

    #[test]
    fn gcd_trick_matches_direct() {
        for q in [2u64, 3, 5] {
            for d in 1u64..=20 {
                for k in 1u64..=50 {
                    let direct = BigUint::from(k).gcd(&(BigUint::from(q).pow(d as u32) - 1u32));
                    let fast = gcd_with_q_pow_minus_one(&BigUint::from(k), q, d);
                    assert_eq!(direct, fast, "q={q} d={d} k={k}");
                }
            }
        }
    }

    #[test]
    fn integer_logs() {
        // ceil_log_strict: smallest e with q^e > x.
        assert_eq!(ceil_log_strict(2, &BigUint::from(7u32)), 3);
        assert_eq!(ceil_log_strict(2, &BigUint::from(8u32)), 4);
        // ceil_log: ⌈log_q x⌉.
        assert_eq!(ceil_log(2, &BigUint::from(8u32)), 3);
        assert_eq!(ceil_log(2, &BigUint::from(9u32)), 4);
        assert_eq!(ceil_log(3, &BigUint::from(1u32)), 0);
    }
}
