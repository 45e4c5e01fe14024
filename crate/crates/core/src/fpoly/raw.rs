//! Dense polynomial kernels over a [`FieldSpec`], shared by the public
//! polynomial types and the factorization/power-sum code.
//!
//! Coefficient slices run low-to-high and hold *encoded element indices*;
//! they are not required to be monic or trimmed unless a function says so.
//! The zero polynomial is the empty slice (or any all-zero slice).

use crate::ffield::FieldSpec;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigUint;
use num_traits::Zero;

/// Degree, or `None` for the zero polynomial.
pub(crate) fn deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub(crate) fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn add(spec: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = spec.add_idx(x, y);
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(spec: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = spec.sub_idx(x, y);
    }
    trim(&mut out);
    out
}

pub(crate) fn scalar_mul(spec: &FieldSpec, s: u64, a: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().map(|&c| spec.mul_idx(s, c)).collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(spec: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (Some(da), Some(db)) = (deg(a), deg(b)) else {
        return Vec::new();
    };
    let mut out = vec![0u64; da + db + 1];
    for (i, &ai) in a.iter().enumerate().take(da + 1) {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(db + 1) {
            if bj == 0 {
                continue;
            }
            out[i + j] = spec.add_idx(out[i + j], spec.mul_idx(ai, bj));
        }
    }
    out
}

/// Quotient and remainder; `b` must be nonzero. Works for any leading
/// coefficient (it is inverted once).
pub(crate) fn divrem(spec: &FieldSpec, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let db = deg(b).expect("division by the zero polynomial");
    let lead_inv = spec.inv_idx(b[db]).expect("leading coefficient nonzero");
    let mut rem: Vec<u64> = a.to_vec();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u64; rem.len() - db];
    while let Some(dr) = deg(&rem) {
        if dr < db {
            break;
        }
        let c = spec.mul_idx(rem[dr], lead_inv);
        quot[dr - db] = c;
        // rem -= c * T^{dr-db} * b
        for (j, &bj) in b.iter().enumerate().take(db + 1) {
            if bj == 0 {
                continue;
            }
            let idx = dr - db + j;
            rem[idx] = spec.sub_idx(rem[idx], spec.mul_idx(c, bj));
        }
        debug_assert_eq!(rem[dr], 0);
        rem.truncate(dr);
        trim(&mut rem);
    }
    (quot, rem)
}

pub(crate) fn rem(spec: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    divrem(spec, a, b).1
}

/// Monic gcd (zero if both inputs are zero).
pub(crate) fn gcd(spec: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x: Vec<u64> = a.to_vec();
    let mut y: Vec<u64> = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(spec, &x, &y);
        x = y;
        y = r;
    }
    if let Some(d) = deg(&x) {
        if x[d] != 1 {
            let inv = spec.inv_idx(x[d]).expect("nonzero lead");
            x = scalar_mul(spec, inv, &x);
        }
    }
    x
}

/// `a * b mod m` (`m` nonzero).
pub(crate) fn mulmod(spec: &FieldSpec, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    rem(spec, &mul(spec, a, b), m)
}

/// `base^e mod m` by square-and-multiply over the bits of `e`.
pub(crate) fn powmod(spec: &FieldSpec, base: &[u64], e: &BigUint, m: &[u64]) -> Vec<u64> {
    let one = vec![1u64];
    if e.is_zero() {
        return rem(spec, &one, m);
    }
    let base = rem(spec, base, m);
    let mut acc = base.clone();
    let bits = e.bits();
    for i in (0..bits - 1).rev() {
        acc = mulmod(spec, &acc, &acc, m);
        if e.bit(i) {
            acc = mulmod(spec, &acc, &base, m);
        }
    }
    acc
}

/// Horner evaluation at an element index.
pub(crate) fn eval(spec: &FieldSpec, a: &[u64], x: u64) -> u64 {
    let mut acc = 0u64;
    for &c in a.iter().rev() {
        acc = spec.add_idx(spec.mul_idx(acc, x), c);
    }
    acc
}

/// Formal derivative.
pub(crate) fn derivative(spec: &FieldSpec, a: &[u64]) -> Vec<u64> {
    if a.len() <= 1 {
        return Vec::new();
    }
    let p = spec.p();
    let mut out = vec![0u64; a.len() - 1];
    for (i, slot) in out.iter_mut().enumerate() {
        // (i+1) * a_{i+1}, with the integer factor reduced mod p.
        let s = ((i as u64) + 1) % p;
        *slot = spec.mul_idx(s, a[i + 1]);
    }
    trim(&mut out);
    out
}

/// `T * a mod f` for monic `f` given by its low coefficients (degree
/// `f_low.len()`), with `deg a < deg f`. O(deg f) shift-and-reduce used by
/// the multiplication-operator trace.
pub(crate) fn shift_mod_monic(spec: &FieldSpec, a: &[u64], f_low: &[u64]) -> Vec<u64> {
    let n = f_low.len();
    debug_assert!(a.len() <= n);
    let mut out = vec![0u64; n];
    out[1..a.len().min(n - 1) + 1].copy_from_slice(&a[..a.len().min(n - 1)]);
    let top = if a.len() == n { a[n - 1] } else { 0 };
    if top != 0 {
        for (slot, &fj) in out.iter_mut().zip(f_low) {
            *slot = spec.sub_idx(*slot, spec.mul_idx(top, fj));
        }
    }
    out
}
