//! Factorization of monic polynomials and the arithmetic functions built on
//! it: the prime-power indicator Λ (von Mangoldt), the Möbius function μ,
//! and tables of irreducibles by degree.
//!
//! The factoring strategy is distinct-degree splitting — `gcd(f, T^{q^d} − T)`
//! collects the distinct prime factors of degree `d` — followed, when several
//! primes share a degree, by exhaustive equal-degree search against a cached
//! table of irreducibles of that degree. At the scales this crate enumerates
//! (`q^d` small in every equal-degree situation) the table search is both the
//! simplest correct method and free of randomness, and the tables double as
//! the backing store for [`Factorizer::irreducibles`].
//!
//! Λ and μ do not need complete factorizations and are implemented as
//! early-exit scans so that identities summing them over millions of
//! polynomials stay cheap.

use super::raw;
use super::{enumerate_monic, is_irreducible, MonicPoly};
use crate::ffield::FieldSpec;
use crate::Result;
use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;
use num_bigint::BigUint;
use num_traits::Zero;

/// A complete factorization `f = Π P_i^{e_i}` into distinct monic
/// irreducibles, ordered by `(degree, enumeration index)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(MonicPoly, usize)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(MonicPoly, usize)] {
        &self.pairs
    }

    /// Number of distinct irreducible factors.
    pub fn distinct_primes(&self) -> usize {
        self.pairs.len()
    }

    /// Π e_i-fold products, reconstructing the factored polynomial.
    pub fn product(&self) -> MonicPoly {
        let spec = self.pairs[0].0.spec();
        let mut acc = MonicPoly::one(spec);
        for (p, e) in &self.pairs {
            acc = acc.mul(&p.pow(*e)).expect("same field");
        }
        acc
    }

    /// `Some((P, e))` when the factorization is a single prime power.
    pub fn as_prime_power(&self) -> Option<(&MonicPoly, usize)> {
        match self.pairs.as_slice() {
            [(p, e)] => Some((p, *e)),
            _ => None,
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.pairs.iter().all(|(_, e)| *e == 1)
    }
}

/// Factorization engine for one field, owning lazily built per-degree
/// irreducible tables. The interior cache makes it `Send` but not `Sync`;
/// parallel callers create one instance per worker.
pub struct Factorizer {
    spec: Arc<FieldSpec>,
    tables: RefCell<BTreeMap<usize, Arc<Vec<MonicPoly>>>>,
}

impl Factorizer {
    pub fn new(spec: &Arc<FieldSpec>) -> Factorizer {
        Factorizer {
            spec: Arc::clone(spec),
            tables: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    /// All monic irreducibles of degree `n`, in enumeration order. Built by
    /// scanning the full degree-`n` enumeration once and cached.
    pub fn irreducibles(&self, n: usize) -> Result<Arc<Vec<MonicPoly>>> {
        if let Some(t) = self.tables.borrow().get(&n) {
            return Ok(Arc::clone(t));
        }
        let mut list = Vec::new();
        for f in enumerate_monic(&self.spec, n)? {
            if is_irreducible(&f)? {
                list.push(f);
            }
        }
        let table = Arc::new(list);
        self.tables.borrow_mut().insert(n, Arc::clone(&table));
        Ok(table)
    }

    /// Complete factorization of a monic polynomial of degree ≥ 1.
    pub fn factorize(&self, f: &MonicPoly) -> Result<Factorization> {
        assert!(f.degree() >= 1, "factorize needs degree >= 1");
        let spec = &self.spec;
        let q = spec.q();
        let mut pairs: Vec<(MonicPoly, usize)> = Vec::new();
        let mut rem_full = f.full();

        // Degree-1 stage by direct root extraction.
        for a in 0..q {
            let mut e = 0usize;
            while raw::deg(&rem_full) != Some(0) && raw::eval(spec, &rem_full, a) == 0 {
                rem_full = exact_div_linear(spec, &rem_full, a);
                e += 1;
            }
            if e > 0 {
                pairs.push((MonicPoly::linear(spec, a), e));
            }
        }

        // Distinct-degree stages for d ≥ 2 on what remains.
        let qe = BigUint::from(q);
        let mut w: Vec<u64> = vec![0, 1]; // T^{q^d} mod rem, current d
        w = raw::powmod(spec, &w, &qe, &rem_full);
        let mut d = 1usize;
        while let Some(nrem) = raw::deg(&rem_full) {
            if nrem == 0 {
                break;
            }
            d += 1;
            if 2 * d > nrem {
                // Remainder is a single irreducible of degree nrem.
                pairs.push((monic_from_full(spec, &rem_full), 1));
                break;
            }
            w = raw::powmod(spec, &w, &qe, &rem_full);
            let diff = raw::sub(spec, &w, &[0, 1]);
            let g = raw::gcd(spec, &rem_full, &diff);
            let gd = raw::deg(&g).unwrap_or(0);
            if gd == 0 {
                continue;
            }
            let primes: Vec<MonicPoly> = if gd == d {
                vec![monic_from_full(spec, &g)]
            } else {
                // Several distinct primes of degree d: find them in the table.
                let table = self.irreducibles(d)?;
                let mut found = Vec::with_capacity(gd / d);
                let mut gg = g.clone();
                for p in table.iter() {
                    if raw::deg(&gg) == Some(0) {
                        break;
                    }
                    let (quot, r) = raw::divrem(spec, &gg, &p.full());
                    if r.is_empty() {
                        found.push(p.clone());
                        gg = quot;
                    }
                }
                debug_assert_eq!(found.len() * d, gd);
                found
            };
            for p in primes {
                let pf = p.full();
                let mut e = 0usize;
                loop {
                    let (quot, r) = raw::divrem(spec, &rem_full, &pf);
                    if !r.is_empty() {
                        break;
                    }
                    rem_full = quot;
                    e += 1;
                }
                debug_assert!(e >= 1);
                pairs.push((p, e));
            }
            w = raw::rem(spec, &w, &rem_full);
        }

        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let fz = Factorization { pairs };
        debug_assert_eq!(fz.product(), *f);
        Ok(fz)
    }

    /// Von Mangoldt via this factorizer (same value as the free function).
    pub fn von_mangoldt(&self, f: &MonicPoly) -> u64 {
        von_mangoldt(f)
    }

    /// Möbius via this factorizer (same value as the free function).
    pub fn moebius(&self, f: &MonicPoly) -> i8 {
        moebius(f)
    }
}

fn monic_from_full(spec: &Arc<FieldSpec>, full: &[u64]) -> MonicPoly {
    debug_assert_eq!(full.last(), Some(&1));
    MonicPoly::from_coeffs(spec, full[..full.len() - 1].to_vec()).expect("coefficients in range")
}

/// Exact division of a monic polynomial by `T − a` (the caller guarantees
/// `a` is a root), by synthetic division.
fn exact_div_linear(spec: &FieldSpec, full: &[u64], a: u64) -> Vec<u64> {
    let n = full.len() - 1;
    let mut out = vec![0u64; n];
    let mut carry = 0u64; // running value, starts from leading coefficient
    for i in (0..n).rev() {
        carry = spec.add_idx(spec.mul_idx(carry, a), full[i + 1]);
        out[i] = carry;
    }
    debug_assert_eq!(spec.add_idx(spec.mul_idx(carry, a), full[0]), 0);
    out
}

/// `Λ(f)`: `deg P` when `f = P^e` is a prime power, `0` otherwise (including
/// `f = 1`). Equivalent to reading the factorization, but implemented as an
/// early-exit scan so that summing Λ over a full degree enumeration is cheap.
pub fn von_mangoldt(f: &MonicPoly) -> u64 {
    von_mangoldt_coeffs(f.spec(), f.coeffs())
}

/// [`von_mangoldt`] on raw low coefficients (leading `1` implicit), for hot
/// enumeration loops that avoid building a [`MonicPoly`] per item.
///
/// Every field/degree pair inside the enumeration budget takes the
/// allocation-free stack scan; oversized parameters (huge extension fields,
/// degrees past the budget) fall back to the general heap path.
pub fn von_mangoldt_coeffs(spec: &FieldSpec, coeffs: &[u64]) -> u64 {
    let n = coeffs.len();
    if n == 0 {
        return 0;
    }
    let q = spec.q();
    let p = spec.p() as usize;
    if q <= SCAN_MAX_Q && p * (n - 1) + 1 <= SCAN_CAP && n + 1 <= SCAN_CAP {
        von_mangoldt_scan(spec, coeffs)
    } else {
        von_mangoldt_general(spec, coeffs)
    }
}

/// Heap-allocating Λ scan, valid for any field and degree.
fn von_mangoldt_general(spec: &FieldSpec, coeffs: &[u64]) -> u64 {
    let n = coeffs.len();
    let q = spec.q();
    let mut full = Vec::with_capacity(n + 1);
    full.extend_from_slice(coeffs);
    full.push(1);

    // Degree-1 stage: count distinct roots by evaluation.
    let mut root = None;
    for a in 0..q {
        if raw::eval(spec, &full, a) == 0 {
            if root.is_some() {
                return 0; // two distinct linear primes
            }
            root = Some(a);
        }
    }
    if let Some(a) = root {
        // Prime power iff f = (T − a)^n.
        let mut cur = full;
        for _ in 0..n {
            if raw::eval(spec, &cur, a) != 0 {
                return 0;
            }
            cur = exact_div_linear(spec, &cur, a);
        }
        return 1;
    }

    // No linear factors: distinct-degree scan from d = 2.
    let qe = BigUint::from(q);
    let t = [0u64, 1];
    let mut w = raw::powmod(spec, &t, &qe, &full); // T^{q^1} mod f
    let mut d = 1usize;
    loop {
        d += 1;
        if 2 * d > n {
            return n as u64; // no factor of degree ≤ n/2 and no smaller prime: irreducible
        }
        w = raw::powmod(spec, &w, &qe, &full);
        let diff = raw::sub(spec, &w, &t);
        let g = raw::gcd(spec, &full, &diff);
        let gd = raw::deg(&g).unwrap_or(0);
        if gd == 0 {
            continue;
        }
        if gd > d || n % d != 0 {
            return 0; // several primes of degree d, or wrong total degree
        }
        // Exactly one prime P of degree d divides f; f = P^e required.
        let e = n / d;
        let mut cur = full;
        for _ in 0..e {
            let (quot, r) = raw::divrem(spec, &cur, &g);
            if !r.is_empty() {
                return 0;
            }
            cur = quot;
        }
        debug_assert_eq!(raw::deg(&cur), Some(0));
        return d as u64;
    }
}

/// Stack capacity of the allocation-free Λ scan. The widest intermediate is
/// the `p`-th-power coefficient spread of a reduced polynomial, degree
/// `p·(n−1)`; every `(q, n)` inside the `q^n ≤ 2^26` enumeration budget fits.
const SCAN_CAP: usize = 64;

/// Largest base field the scan's per-call Frobenius table covers.
const SCAN_MAX_Q: u64 = 9;

/// Reduces `buf[..len]` modulo the monic `T^n + Σ f_low[j]·T^j` in place and
/// returns the dense length `n` of the residue. Entries at `buf[n..]` are
/// left stale; callers treat only `buf[..n]` as meaningful.
fn rem_in_place(spec: &FieldSpec, buf: &mut [u64], mut len: usize, f_low: &[u64]) -> usize {
    let n = f_low.len();
    while len > n {
        let c = buf[len - 1];
        if c != 0 {
            let base = len - 1 - n;
            for (j, &fj) in f_low.iter().enumerate() {
                if fj != 0 {
                    buf[base + j] = spec.sub_idx(buf[base + j], spec.mul_idx(c, fj));
                }
            }
        }
        len -= 1;
    }
    n
}

/// `w ← w^q mod f` for dense `w = buf[..n]`, as `m` rounds (`q = p^m`) of the
/// coefficient Frobenius spread `Σ c_i T^i ↦ Σ c_i^p T^{p·i}` followed by an
/// in-place reduction. `fr` is the element table `c ↦ c^p`.
fn frob_step_in_place(
    spec: &FieldSpec,
    w: &mut [u64; SCAN_CAP],
    n: usize,
    f_low: &[u64],
    fr: &[u64],
    tmp: &mut [u64; SCAN_CAP],
) {
    let p = spec.p() as usize;
    for _ in 0..spec.degree() {
        let spread = p * (n - 1) + 1;
        tmp[..spread].fill(0);
        for i in 0..n {
            if w[i] != 0 {
                tmp[p * i] = fr[w[i] as usize];
            }
        }
        let len = rem_in_place(spec, tmp, spread, f_low);
        w[..len].copy_from_slice(&tmp[..len]);
    }
}

/// Euclid on two scratch slices, destroying both; returns the buffer holding
/// the monic gcd together with its degree (`None` for the zero polynomial).
/// Degrees passed in must match the trimmed content of each slice.
fn gcd_in_place<'a>(
    spec: &FieldSpec,
    mut x: &'a mut [u64],
    mut dx: Option<usize>,
    mut y: &'a mut [u64],
    mut dy: Option<usize>,
) -> (&'a mut [u64], Option<usize>) {
    while let Some(db) = dy {
        let lead_inv = spec.inv_idx(y[db]).expect("trimmed degree has nonzero lead");
        while let Some(da) = dx {
            if da < db {
                break;
            }
            let c = spec.mul_idx(x[da], lead_inv);
            let base = da - db;
            for j in 0..=db {
                if y[j] != 0 {
                    x[base + j] = spec.sub_idx(x[base + j], spec.mul_idx(c, y[j]));
                }
            }
            debug_assert_eq!(x[da], 0);
            dx = x[..da].iter().rposition(|&v| v != 0);
        }
        core::mem::swap(&mut x, &mut y);
        core::mem::swap(&mut dx, &mut dy);
    }
    if let Some(d) = dx {
        if x[d] != 1 {
            let inv = spec.inv_idx(x[d]).expect("nonzero lead");
            for v in x[..=d].iter_mut() {
                *v = spec.mul_idx(inv, *v);
            }
        }
    }
    (x, dx)
}

/// Allocation-free Λ scan: same decision procedure as
/// [`von_mangoldt_general`] (root stage, then distinct-degree stages with an
/// exact-division confirmation) on fixed stack buffers, with each `q`-th
/// power taken as iterated char-`p` Frobenius spreads instead of generic
/// square-and-multiply. Requires `1 ≤ deg f`, `q ≤ SCAN_MAX_Q`, and both
/// `p·(deg f − 1) + 1` and `deg f + 1` within [`SCAN_CAP`].
fn von_mangoldt_scan(spec: &FieldSpec, coeffs: &[u64]) -> u64 {
    let n = coeffs.len();
    let q = spec.q();

    // Degree-1 stage: count distinct roots by evaluation (implicit monic
    // lead seeds the Horner accumulator).
    let mut root = None;
    for a in 0..q {
        let mut acc = 1u64;
        for &c in coeffs.iter().rev() {
            acc = spec.add_idx(spec.mul_idx(acc, a), c);
        }
        if acc == 0 {
            if root.is_some() {
                return 0; // two distinct linear primes
            }
            root = Some(a);
        }
    }

    let mut ba = [0u64; SCAN_CAP];
    let mut bb = [0u64; SCAN_CAP];

    if let Some(a) = root {
        // Prime power iff f = (T − a)^n: peel n exact synthetic divisions,
        // bailing at the first nonzero evaluation, ping-ponging buffers.
        ba[..n].copy_from_slice(coeffs);
        ba[n] = 1;
        let (mut src, mut dst) = (&mut ba, &mut bb);
        let mut len = n + 1;
        for _ in 0..n {
            let mut acc = 0u64;
            for i in (0..len).rev() {
                acc = spec.add_idx(spec.mul_idx(acc, a), src[i]);
            }
            if acc != 0 {
                return 0;
            }
            let mut carry = 0u64;
            for i in (0..len - 1).rev() {
                carry = spec.add_idx(spec.mul_idx(carry, a), src[i + 1]);
                dst[i] = carry;
            }
            core::mem::swap(&mut src, &mut dst);
            len -= 1;
        }
        return 1;
    }

    // No linear factors: distinct-degree scan from d = 2. Table of element
    // p-th powers for the Frobenius spread, built only on this cold branch.
    let p = spec.p();
    let mut fr = [0u64; SCAN_MAX_Q as usize];
    for c in 0..q {
        let mut v = c;
        for _ in 1..p {
            v = spec.mul_idx(v, c);
        }
        fr[c as usize] = v;
    }

    let mut w = [0u64; SCAN_CAP];
    let mut tmp = [0u64; SCAN_CAP];
    let qi = q as usize;
    if qi < n {
        w[qi] = 1; // T^q already reduced mod f
    } else {
        tmp[..qi + 1].fill(0);
        tmp[qi] = 1;
        let len = rem_in_place(spec, &mut tmp, qi + 1, coeffs);
        w[..len].copy_from_slice(&tmp[..len]);
    }

    let mut d = 1usize;
    loop {
        d += 1;
        if 2 * d > n {
            return n as u64; // no factor of degree ≤ n/2 and no smaller prime: irreducible
        }
        frob_step_in_place(spec, &mut w, n, coeffs, &fr, &mut tmp);
        // gcd(f, w − T) collects the degree-d primes.
        ba[..n].copy_from_slice(&w[..n]);
        ba[1] = spec.sub_idx(ba[1], 1);
        let ddiff = ba[..n].iter().rposition(|&v| v != 0);
        bb[..n].copy_from_slice(coeffs);
        bb[n] = 1;
        let (g, gdeg) = gcd_in_place(spec, &mut bb[..n + 1], Some(n), &mut ba[..n], ddiff);
        let gd = gdeg.expect("gcd with the nonzero f");
        if gd == 0 {
            continue;
        }
        if gd > d || n % d != 0 {
            return 0; // several primes of degree d, or wrong total degree
        }
        // Exactly one prime P of degree d divides f; f = P^e required.
        // Synthetic long division by the monic g leaves the quotient above
        // the remainder in the same buffer.
        let e = n / d;
        tmp[..n].copy_from_slice(coeffs);
        tmp[n] = 1;
        let mut len = n + 1;
        for _ in 0..e {
            let dc = len - 1;
            for i in (gd..=dc).rev() {
                let c = tmp[i];
                if c != 0 {
                    let base = i - gd;
                    for j in 0..gd {
                        if g[j] != 0 {
                            tmp[base + j] = spec.sub_idx(tmp[base + j], spec.mul_idx(c, g[j]));
                        }
                    }
                }
            }
            if tmp[..gd].iter().any(|&v| v != 0) {
                return 0; // remainder nonzero: not a pure power of P
            }
            for i in 0..=(dc - gd) {
                tmp[i] = tmp[i + gd];
            }
            len = dc - gd + 1;
        }
        debug_assert_eq!(len, 1);
        return d as u64;
    }
}

/// `μ(f)`: `(−1)^r` when `f` is squarefree with `r` prime factors, else `0`.
/// Squarefreeness is `gcd(f, f′) = 1`; the factor count comes from a
/// distinct-degree scan (degree of each gcd split divided by `d`), which
/// never needs equal-degree work.
pub fn moebius(f: &MonicPoly) -> i8 {
    moebius_coeffs(f.spec(), f.coeffs())
}

/// [`moebius`] on raw low coefficients (leading `1` implicit), for hot
/// enumeration loops that avoid building a [`MonicPoly`] per item.
pub fn moebius_coeffs(spec: &FieldSpec, coeffs: &[u64]) -> i8 {
    let n = coeffs.len();
    if n == 0 {
        return 1;
    }
    let mut full = Vec::with_capacity(n + 1);
    full.extend_from_slice(coeffs);
    full.push(1);
    let deriv = raw::derivative(spec, &full);
    if raw::deg(&raw::gcd(spec, &full, &deriv)) != Some(0) {
        return 0;
    }
    let q = spec.q();
    let qe = BigUint::from(q);
    let t = [0u64, 1];
    let mut count = 0usize;
    let mut rem_full = full;
    let mut w: Vec<u64> = t.to_vec();
    let mut d = 0usize;
    while let Some(nrem) = raw::deg(&rem_full) {
        if nrem == 0 {
            break;
        }
        d += 1;
        if 2 * d > nrem {
            count += 1; // remainder itself irreducible
            break;
        }
        w = raw::powmod(spec, &w, &qe, &rem_full);
        let diff = raw::sub(spec, &w, &t);
        let g = raw::gcd(spec, &rem_full, &diff);
        if let Some(gd) = raw::deg(&g) {
            if gd > 0 {
                debug_assert_eq!(gd % d, 0);
                count += gd / d;
                let (quot, r) = raw::divrem(spec, &rem_full, &g);
                debug_assert!(r.is_empty());
                rem_full = quot;
                w = raw::rem(spec, &w, &rem_full);
            }
        }
    }
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `|P_{n,q}|` by the divisor–Möbius count `(1/n) Σ_{e|n} μ(e) q^{n/e}`,
/// independent of any enumeration (hence no budget restriction beyond `u64`).
pub fn irreducible_count(spec: &FieldSpec, n: usize) -> u64 {
    assert!(n >= 1);
    let q = spec.q() as i128;
    let mut total: i128 = 0;
    for e in 1..=n {
        if n % e == 0 {
            let m = moebius_u64(e as u64) as i128;
            if m != 0 {
                let term = q
                    .checked_pow((n / e) as u32)
                    .expect("q^n exceeds 128-bit range");
                total += m * term;
            }
        }
    }
    debug_assert!(total >= 0 && total % n as i128 == 0);
    (total / n as i128) as u64
}

/// [`irreducible_count`] in arbitrary precision, for degrees where `q^n`
/// leaves the 128-bit range (the sieve recursion consumes these counts at
/// horizons far past any enumeration budget).
pub fn irreducible_count_big(spec: &FieldSpec, n: usize) -> BigUint {
    assert!(n >= 1);
    let q = BigUint::from(spec.q());
    let mut plus = BigUint::default();
    let mut minus = BigUint::default();
    for e in 1..=n {
        if n % e == 0 {
            match moebius_u64(e as u64) {
                1 => plus += q.pow((n / e) as u32),
                -1 => minus += q.pow((n / e) as u32),
                _ => {}
            }
        }
    }
    let total = plus - minus;
    debug_assert!((&total % n).is_zero());
    total / n
}

/// Integer Möbius function by trial factorization.
fn moebius_u64(mut x: u64) -> i64 {
    let mut primes = 0;
    let mut p = 2u64;
    while p * p <= x {
        if x % p == 0 {
            x /= p;
            if x % p == 0 {
                return 0;
            }
            primes += 1;
        }
        p += 1;
    }
    if x > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}
