//! Integer-side machinery behind the criterion set: cyclotomic values
//! `Φ_n(a)`, multiplicative orders, the divisibility sets
//! `A_p = {n ≥ 1 : p | Φ_n(a)}`, and the dyadic gcd sum
//! `B_{L,k} = Σ_{L ≤ d < 2L} ln gcd(k, q^d − 1)`.
//!
//! Everything here is exact big-integer arithmetic; the only floats are the
//! natural logarithms of exact gcds. `B_{L,k}` never factors `k` — the gcds
//! are computed directly from `q^d mod k`. The partial factorization helper
//! exists for the refined analysis of `B_{L,k}` (which needs the prime
//! multiplicities `ν_p(k)`) and reports honestly when trial division gives
//! up.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::util::{gcd_with_q_pow_minus_one, is_prime_u64, ln_biguint, pow_mod};
use crate::{Error, Result};

/// `Φ_d(a)` for all `1 ≤ d ≤ n`, by the defining recursion
/// `Π_{d|m} Φ_d(a) = a^m − 1` solved bottom-up with exact (checked)
/// divisions. Index `d` of the result holds `Φ_d(a)`; index `0` is unused
/// padding (set to `1`).
pub fn cyclotomic_values_up_to(n: u64, a: &BigUint) -> Result<Vec<BigUint>> {
    if n == 0 {
        return Err(Error::InvalidParameter("cyclotomic index must be ≥ 1".into()));
    }
    if *a < BigUint::from(2u64) {
        return Err(Error::InvalidParameter("cyclotomic base must be ≥ 2".into()));
    }
    let mut values = Vec::with_capacity(n as usize + 1);
    values.push(BigUint::one());
    for m in 1..=n {
        let mut rem = a.pow(m as u32) - BigUint::one();
        for d in 1..m {
            if m % d == 0 {
                let (quot, r) = rem.div_rem(&values[d as usize]);
                assert!(
                    r.is_zero(),
                    "cyclotomic recursion divided inexactly at n={m}, d={d}"
                );
                rem = quot;
            }
        }
        values.push(rem);
    }
    Ok(values)
}

/// `Φ_n(a)`: the `n`-th cyclotomic polynomial evaluated at `a ≥ 2`,
/// computed by exact recursive division of `a^n − 1` by all lower
/// `Φ_d(a)` with `d | n`.
pub fn cyclotomic_at(n: u64, a: &BigUint) -> Result<BigUint> {
    let mut values = cyclotomic_values_up_to(n, a)?;
    Ok(values.swap_remove(n as usize))
}

/// The multiplicative order of `a` modulo the prime `p`: the least
/// `n ≥ 1` with `a^n ≡ 1 (mod p)`. Computed by starting from `p − 1`
/// (which the order divides) and stripping prime factors while the power
/// stays `1`.
pub fn mult_order(p: u64, a: &BigUint) -> Result<u64> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidParameter("order modulus must be prime".into()));
    }
    let r = (a % BigUint::from(p)).to_u64().expect("reduced mod u64");
    if r == 0 {
        return Err(Error::InvalidParameter(
            "multiplicative order undefined when p divides a".into(),
        ));
    }
    let mut order = p - 1;
    let mut rest = p - 1;
    let mut f = 2u64;
    while f.saturating_mul(f) <= rest {
        if rest % f == 0 {
            while rest % f == 0 {
                rest /= f;
            }
            while order % f == 0 && pow_mod(r, order / f, p) == 1 {
                order /= f;
            }
        }
        f += 1;
    }
    if rest > 1 {
        while order % rest == 0 && pow_mod(r, order / rest, p) == 1 {
            order /= rest;
        }
    }
    debug_assert_eq!(pow_mod(r, order, p), 1);
    Ok(order)
}

/// The set `A_p ∩ [1, bound]` where `A_p = {n ≥ 1 : p | Φ_n(a)}`, together
/// with the parameters that produced it.
///
/// Construction computes the set twice — by direct divisibility of the
/// exact cyclotomic values, and as the predicted geometric progression
/// `{p^i · ord_p(a)}` (empty when `p | a`) — and insists the two agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApSet {
    p: u64,
    a: BigUint,
    bound: u64,
    members: Vec<u64>,
}

impl ApSet {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Sorted members of `A_p ∩ [1, bound]`.
    pub fn members(&self) -> &[u64] {
        &self.members
    }
}

/// Computes [`ApSet`] for a prime `p`, base `a ≥ 2` and horizon `bound`.
pub fn ap_set(p: u64, a: &BigUint, bound: u64) -> Result<ApSet> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidParameter("ap_set needs a prime p".into()));
    }
    if bound == 0 {
        return Ok(ApSet {
            p,
            a: a.clone(),
            bound,
            members: Vec::new(),
        });
    }
    let pb = BigUint::from(p);
    let direct: Vec<u64> = if (a % &pb).is_zero() {
        Vec::new()
    } else {
        let values = cyclotomic_values_up_to(bound, a)?;
        (1..=bound)
            .filter(|&n| (&values[n as usize] % &pb).is_zero())
            .collect()
    };
    let predicted: Vec<u64> = if (a % &pb).is_zero() {
        Vec::new()
    } else {
        let ord = mult_order(p, a)?;
        let mut out = Vec::new();
        let mut n = ord;
        while n <= bound {
            out.push(n);
            match n.checked_mul(p) {
                Some(next) => n = next,
                None => break,
            }
        }
        out
    };
    assert_eq!(
        direct, predicted,
        "cyclotomic divisibility disagrees with the order progression (p={p}, a={a})"
    );
    Ok(ApSet {
        p,
        a: a.clone(),
        bound,
        members: direct,
    })
}

/// One row of the dyadic gcd sum: the degree `d`, the exact
/// `gcd(k, q^d − 1)`, and its natural logarithm.
pub fn blk_rows(l: u64, k: &BigUint, q: u64) -> Result<Vec<(u64, BigUint, f64)>> {
    if l == 0 {
        return Err(Error::InvalidParameter("block length must be ≥ 1".into()));
    }
    if q < 2 {
        return Err(Error::InvalidParameter("q must be ≥ 2".into()));
    }
    if k.is_zero() {
        return Err(Error::InvalidParameter("k must be ≥ 1".into()));
    }
    let mut rows = Vec::with_capacity(l as usize);
    for d in l..2 * l {
        let g = gcd_with_q_pow_minus_one(k, q, d);
        let log = ln_biguint(&g);
        rows.push((d, g, log));
    }
    Ok(rows)
}

/// `B_{L,k} = Σ_{L ≤ d < 2L} ln gcd(k, q^d − 1)`, from exact gcds.
pub fn blk(l: u64, k: &BigUint, q: u64) -> Result<f64> {
    Ok(blk_rows(l, k, q)?.iter().map(|(_, _, log)| log).sum())
}

/// The trivial cap `L · min(ln k, 2L·ln q)`: each of the `L` summands is at
/// most `ln k` and at most `ln(q^d − 1) < 2L·ln q` for `d < 2L`.
pub fn blk_trivial_cap(l: u64, k: &BigUint, q: u64) -> f64 {
    let lf = l as f64;
    let ln_k = ln_biguint(k);
    let ln_q = libm::log(q as f64);
    lf * if ln_k < 2.0 * lf * ln_q { ln_k } else { 2.0 * lf * ln_q }
}

/// The normalized ratio `B_{L,k} / (L·√(ln k · ln q))` tracked by the
/// regression sweep in the regime `L ≥ √(log_q k)`, where the refined
/// bound says the ratio is `O(1)`. Returns `None` for `k = 1`, where the
/// normalization vanishes along with the sum.
pub fn blk_ratio(l: u64, k: &BigUint, q: u64) -> Result<Option<f64>> {
    if k.is_one() {
        return Ok(None);
    }
    let b = blk(l, k, q)?;
    let denom = l as f64 * libm::sqrt(ln_biguint(k) * libm::log(q as f64));
    Ok(Some(b / denom))
}

/// `k = Π_{i=lo..=hi} (q^i − 1)`, the family of exponents that saturates
/// the trivial cap on `B_{L,k}` (every block degree `d ≤ hi` then divides
/// out completely).
pub fn product_q_pow_minus_one(q: u64, lo: u32, hi: u32) -> BigUint {
    let mut k = BigUint::one();
    let qb = BigUint::from(q);
    for i in lo..=hi {
        k *= qb.pow(i) - BigUint::one();
    }
    k
}

/// Trial-division factorization of `k` with primes up to `limit`.
#[derive(Clone, Debug)]
pub struct PartialFactorization {
    /// Prime factors found, with multiplicities, in increasing order.
    pub factors: Vec<(u64, u32)>,
    /// What remains of `k` after dividing the listed factors out; `1`
    /// exactly when the factorization is complete.
    pub cofactor: BigUint,
    /// Whether `k` was fully factored within the trial bound.
    pub complete: bool,
}

/// Factors `k ≥ 1` by trial division up to `limit` (the refined gcd-sum
/// analysis needs the valuations `ν_p(k)`). The cofactor is reported
/// unfactored — callers must treat `complete == false` as "partially
/// factored", not as an error.
pub fn trial_factorize(k: &BigUint, limit: u64) -> Result<PartialFactorization> {
    if k.is_zero() {
        return Err(Error::InvalidParameter("cannot factor zero".into()));
    }
    let mut rest = k.clone();
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p <= limit {
        if rest.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            // The remainder is prime; record it if it fits the bound.
            if let Some(small) = rest.to_u64() {
                if small <= limit {
                    factors.push((small, 1));
                    rest = BigUint::one();
                }
            }
            break;
        }
        let mut mult = 0u32;
        loop {
            let (quot, rem) = rest.div_rem(&pb);
            if rem.is_zero() {
                rest = quot;
                mult += 1;
            } else {
                break;
            }
        }
        if mult > 0 {
            factors.push((p, mult));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let complete = rest.is_one();
    Ok(PartialFactorization {
        factors,
        cofactor: rest,
        complete,
    })
}

/// `ν_p(k)`: the exact multiplicity of the prime `p` in `k ≥ 1`.
pub fn valuation(k: &BigUint, p: u64) -> Result<u32> {
    if k.is_zero() {
        return Err(Error::InvalidParameter("valuation of zero is infinite".into()));
    }
    if p < 2 {
        return Err(Error::InvalidParameter("valuation base must be ≥ 2".into()));
    }
    let pb = BigUint::from(p);
    let mut rest = k.clone();
    let mut nu = 0u32;
    loop {
        let (quot, rem) = rest.div_rem(&pb);
        if rem.is_zero() {
            rest = quot;
            nu += 1;
        } else {
            return Ok(nu);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn small_cyclotomic_values() {
        assert_eq!(cyclotomic_at(1, &big(2)).unwrap(), big(1));
        assert_eq!(cyclotomic_at(2, &big(2)).unwrap(), big(3));
        assert_eq!(cyclotomic_at(6, &big(2)).unwrap(), big(3));
        // Φ_p(a) = (a^p − 1)/(a − 1) at primes.
        for (p, a) in [(3u64, 2u64), (5, 2), (7, 3), (13, 5)] {
            let expect = (big(a).pow(p as u32) - big(1)) / (big(a) - big(1));
            assert_eq!(cyclotomic_at(p, &big(a)).unwrap(), expect, "p={p} a={a}");
        }
        assert!(cyclotomic_at(0, &big(2)).is_err());
        assert!(cyclotomic_at(3, &big(1)).is_err());
    }

    #[test]
    fn cyclotomic_product_reconstructs_q_pow_minus_one() {
        for q in [2u64, 3, 5] {
            let values = cyclotomic_values_up_to(64, &big(q)).unwrap();
            for n in 1..=64u64 {
                let mut prod = BigUint::one();
                for d in 1..=n {
                    if n % d == 0 {
                        prod *= &values[d as usize];
                    }
                }
                assert_eq!(prod, big(q).pow(n as u32) - big(1), "q={q} n={n}");
            }
        }
    }

    #[test]
    fn multiplicative_orders() {
        assert_eq!(mult_order(3, &big(2)).unwrap(), 2);
        assert_eq!(mult_order(7, &big(2)).unwrap(), 3);
        assert_eq!(mult_order(5, &big(1)).unwrap(), 1);
        assert!(mult_order(7, &big(14)).is_err());
        assert!(mult_order(6, &big(5)).is_err());
        // The order divides p − 1 and is genuinely the least exponent.
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            for a in [2u64, 3, 10] {
                if a % p == 0 {
                    continue;
                }
                let ord = mult_order(p, &big(a)).unwrap();
                assert_eq!((p - 1) % ord, 0, "p={p} a={a}");
                for m in 1..ord {
                    assert_ne!(pow_mod(a % p, m, p), 1, "p={p} a={a} m={m}");
                }
            }
        }
    }

    #[test]
    fn ap_set_examples() {
        assert_eq!(ap_set(7, &big(2), 25).unwrap().members(), &[3, 21]);
        assert_eq!(ap_set(2, &big(2), 30).unwrap().members(), &[] as &[u64]);
        assert_eq!(ap_set(3, &big(2), 20).unwrap().members(), &[2, 6, 18]);
        assert!(ap_set(9, &big(2), 10).is_err());
    }

    #[test]
    fn ap_sets_match_the_order_progression_broadly() {
        // ap_set asserts internally that direct cyclotomic divisibility
        // equals the predicted progression; sweep the advertised grid.
        let primes: Vec<u64> = (2..=100).filter(|&p| is_prime_u64(p)).collect();
        for a in [2u64, 3, 5, 10] {
            for &p in &primes {
                let set = ap_set(p, &big(a), 200).unwrap();
                let members = set.members();
                assert!(members.windows(2).all(|w| w[0] < w[1]), "p={p} a={a}");
            }
        }
    }

    #[test]
    fn gcd_sum_examples() {
        for (l, q) in [(1u64, 2u64), (4, 3), (9, 2)] {
            assert_eq!(blk(l, &big(1), q).unwrap(), 0.0);
        }
        // q=2, k=3, L=2: gcd(3, 2²−1) = 3 and gcd(3, 2³−1) = 1.
        let b = blk(2, &big(3), 2).unwrap();
        assert!((b - libm::log(3.0)).abs() < 1e-12);
        // k divisible by every q^i − 1 below the block: each degree
        // contributes its full ln(q^d − 1).
        let k = product_q_pow_minus_one(2, 1, 5);
        let b = blk(3, &k, 2).unwrap();
        let expect = libm::log(7.0) + libm::log(15.0) + libm::log(31.0);
        assert!((b - expect).abs() < 1e-9);
        let rows = blk_rows(3, &k, 2).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0], (3, big(7), rows[0].2));
        assert_eq!(rows[2].1, big(31));
    }

    #[test]
    fn gcd_sum_respects_divisibility_monotonicity_and_the_trivial_cap() {
        let mut rng = StdRng::seed_from_u64(0x67cd);
        for _ in 0..50 {
            let k = big(rng.gen_range(1..u64::MAX));
            let m = big(rng.gen_range(1..1 << 20));
            let l = rng.gen_range(1..=12u64);
            let q = *[2u64, 3, 5, 7].iter().nth(rng.gen_range(0..4)).unwrap();
            let b_small = blk(l, &k, q).unwrap();
            let big_b = blk(l, &(&k * &m), q).unwrap();
            assert!(b_small <= big_b + 1e-9, "k | km must not shrink the sum");
            assert!(b_small <= blk_trivial_cap(l, &k, q) + 1e-9);
        }
    }

    #[test]
    fn ratio_is_none_only_for_k_one() {
        assert_eq!(blk_ratio(5, &big(1), 2).unwrap(), None);
        let r = blk_ratio(8, &big(255), 2).unwrap().unwrap();
        assert!(r.is_finite() && r >= 0.0);
    }

    #[test]
    fn trial_factorization_reports_completeness_honestly() {
        let f = trial_factorize(&big(600), 10).unwrap();
        assert_eq!(f.factors, vec![(2, 3), (3, 1), (5, 2)]);
        assert!(f.complete);
        // 2^2 · p for a prime beyond the bound: partial, cofactor = p.
        let p = big(1_000_003);
        let f = trial_factorize(&(&p * big(4)), 1000).unwrap();
        assert_eq!(f.factors, vec![(2, 2)]);
        assert!(!f.complete);
        assert_eq!(f.cofactor, p);
        // A prime that is beyond sqrt but within the limit is recognized.
        let f = trial_factorize(&big(997), 1000).unwrap();
        assert_eq!(f.factors, vec![(997, 1)]);
        assert!(f.complete);
        assert_eq!(valuation(&big(600), 2).unwrap(), 3);
        assert_eq!(valuation(&big(600), 7).unwrap(), 0);
    }
}
