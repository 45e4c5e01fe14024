//! Root power sums `p_k(f) = Σ_j λ_j^k` (over the roots of `f` with
//! multiplicity, in the algebraic closure), which always land back in `F_q`.
//!
//! Three independent routes are provided:
//!
//! * [`power_sum`] — the production path: `p_k(f)` is the trace of the
//!   multiplication-by-`(T^k mod f)` operator on `F_q[T]/(f)`. The power
//!   `T^k mod f` comes from square-and-multiply over the bits of `k`
//!   (`O(deg² · log k)` field operations), so exponents with thousands of
//!   bits are routine. Negative `k` uses the inverse of `T` modulo `f`,
//!   which exists exactly when `T ∤ f`.
//! * [`newton_power_sums`] — the Newton recurrence on coefficients, valid
//!   for `1 ≤ k` and any `f`; an `O(K·deg)` cross-check oracle.
//! * [`power_sum_via_roots`] — literal root sums: for each irreducible
//!   factor `P` the roots are the Frobenius orbit of `T` in `F_q[T]/(P)`,
//!   so the orbit sum `Σ_i (T^k)^{q^i} mod P` is a constant polynomial,
//!   weighted by multiplicity. Slowest, closest to the definition.
//!
//! `p_0(f)` is `deg f` reduced into the field (the root count), and
//! `p_k(1) = 0` for every `k` (empty root multiset).

use super::{raw, Factorizer, MonicPoly};
use crate::ffield::{FieldElement, FieldSpec};
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint, Sign};

/// `p_k(f)` as a field element.
pub fn power_sum(f: &MonicPoly, k: &BigInt) -> Result<FieldElement> {
    let idx = power_sum_idx(f, k)?;
    FieldElement::from_index(f.spec(), idx)
}

/// `p_k(f)` as an encoded element index (the allocation-light form).
pub fn power_sum_idx(f: &MonicPoly, k: &BigInt) -> Result<u64> {
    power_sum_full(f.spec(), &f.full(), k)
}

/// [`power_sum_idx`] on a full monic coefficient slice (`c_0..c_{n-1}, 1`),
/// shared with the character-evaluation hot paths.
pub(crate) fn power_sum_full(spec: &FieldSpec, full: &[u64], k: &BigInt) -> Result<u64> {
    let n = full.len() - 1;
    match k.sign() {
        Sign::NoSign => Ok((n as u64) % spec.p()),
        Sign::Plus => {
            if n == 0 {
                return Ok(0);
            }
            let h = raw::powmod(spec, &[0, 1], k.magnitude(), full);
            Ok(mul_operator_trace(spec, &h, &full[..n]))
        }
        Sign::Minus => {
            if n == 0 {
                return Ok(0);
            }
            let tinv = inverse_of_t_full(spec, full)?;
            let h = raw::powmod(spec, &tinv, k.magnitude(), full);
            Ok(mul_operator_trace(spec, &h, &full[..n]))
        }
    }
}

/// The inverse of `T` modulo monic `f`, from `f = T·g + c_0`: `T^{-1} = −g/c_0`.
pub(crate) fn inverse_of_t_full(spec: &FieldSpec, full: &[u64]) -> Result<Vec<u64>> {
    let c0 = full[0];
    if c0 == 0 {
        return Err(Error::DividesByT);
    }
    let scale = spec.neg_idx(spec.inv_idx(c0).ok_or(Error::DivisionByZero)?);
    Ok(raw::scalar_mul(spec, scale, &full[1..]))
}

/// Trace of the multiplication-by-`h` operator on `F_q[T]/(f)`, where `f`
/// is monic with low coefficients `f_low` and `deg h < deg f`: the sum over
/// `i` of the `T^i`-coefficient of `T^i·h mod f`. Works with multiplicities
/// for non-squarefree `f` because multiplication by `T` acts as the
/// companion matrix of `f`.
fn mul_operator_trace(spec: &FieldSpec, h: &[u64], f_low: &[u64]) -> u64 {
    let n = f_low.len();
    let mut v = vec![0u64; n];
    v[..h.len()].copy_from_slice(h);
    let mut tr = v[0];
    for i in 1..n {
        v = raw::shift_mod_monic(spec, &v, f_low);
        tr = spec.add_idx(tr, v[i]);
    }
    tr
}

/// `p_1..p_K` (element indices) by the Newton recurrence
/// `p_j = Σ_{i=1}^{min(j−1,n)} (−1)^{i−1} e_i p_{j−i} + (−1)^{j−1} j e_j`,
/// where `e_j = (−1)^j c_{n−j}` are the elementary symmetric values read off
/// the coefficients (`e_j = 0` for `j > n`).
pub fn newton_power_sums(f: &MonicPoly, kmax: usize) -> Vec<u64> {
    newton_full(f.spec(), &f.full(), kmax)
}

/// [`newton_power_sums`] on a full monic coefficient slice.
pub(crate) fn newton_full(spec: &FieldSpec, full: &[u64], kmax: usize) -> Vec<u64> {
    let n = full.len() - 1;
    let p = spec.p();
    // signed_e[i−1] = (−1)^{i−1} e_i; with e_i = (−1)^i c_{n−i} the two signs
    // collapse to (−1)^{2i−1} = −1, so every entry is just −c_{n−i}.
    let signed_e: Vec<u64> = (1..=n).map(|i| spec.neg_idx(full[n - i])).collect();
    let mut ps: Vec<u64> = Vec::with_capacity(kmax + 1);
    ps.push((n as u64) % p); // p_0, anchors the recurrence
    for j in 1..=kmax {
        let mut acc = 0u64;
        for i in 1..=j.saturating_sub(1).min(n) {
            acc = spec.add_idx(acc, spec.mul_idx(signed_e[i - 1], ps[j - i]));
        }
        if j <= n {
            // (−1)^{j−1} j e_j = j · signed_e[j]  (the sign is already folded in)
            let je = spec.mul_idx((j as u64) % p, signed_e[j - 1]);
            acc = spec.add_idx(acc, je);
        }
        ps.push(acc);
    }
    ps.remove(0);
    ps
}

/// `p_k(f)` straight from the definition: factor `f`, and for each prime
/// power `P^e` add `e` times the sum of `λ^k` over the Frobenius orbit
/// `λ, λ^q, …` of a root `λ` of `P`, computed inside `F_q[T]/(P)`.
pub fn power_sum_via_roots(fz: &Factorizer, f: &MonicPoly, k: &BigInt) -> Result<u64> {
    let spec = f.spec();
    let p = spec.p();
    if f.degree() == 0 {
        return Ok(0);
    }
    if k.sign() == Sign::NoSign {
        return Ok((f.degree() as u64) % p);
    }
    if k.sign() == Sign::Minus && !f.coprime_to_t() {
        return Err(Error::DividesByT);
    }
    let q = BigUint::from(spec.q());
    let mut total = 0u64;
    for (prime, e) in fz.factorize(f)?.pairs() {
        let pf = prime.full();
        let base = if k.sign() == Sign::Plus {
            vec![0, 1]
        } else {
            inverse_of_t_full(spec, &pf)?
        };
        let lam_k = raw::powmod(spec, &base, k.magnitude(), &pf);
        // Orbit sum: λ^k + (λ^k)^q + … over deg P conjugates.
        let mut orbit = lam_k.clone();
        let mut acc = lam_k;
        for _ in 1..prime.degree() {
            orbit = raw::powmod(spec, &orbit, &q, &pf);
            acc = raw::add(spec, &acc, &orbit);
        }
        debug_assert!(raw::deg(&acc).unwrap_or(0) == 0, "orbit sum must be constant");
        let constant = acc.first().copied().unwrap_or(0);
        total = spec.add_idx(total, spec.mul_idx((*e as u64) % p, constant));
    }
    Ok(total)
}
