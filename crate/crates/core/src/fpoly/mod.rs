//! Monic polynomials over a finite field: deterministic enumeration,
//! irreducibility testing, factorization, the arithmetic functions Λ and μ,
//! root power sums `p_k(f)` for arbitrary-precision `k` of either sign, and
//! the coefficient-reversing involution `ι`.
//!
//! A [`MonicPoly`] of degree `n` stores the low coefficients `c_0..c_{n-1}`
//! as encoded element indices of its [`FieldSpec`]; the leading coefficient
//! `1` is implicit, and the degree-0 polynomial is the constant `1`.
//!
//! Enumeration of all monic polynomials of degree `n` is in *index order*:
//! polynomial number `j ∈ [0, q^n)` has `c_i = (j / q^i) mod q`, i.e. the
//! coefficients are the base-`q` digits of `j` with `c_{n-1}` most
//! significant. This order is fixed so chunked parallel reductions are
//! deterministic, and so "first irreducible in enumeration order" is a
//! well-defined canonical modulus choice.

pub mod factor;
pub mod powersum;
pub(crate) mod raw;
pub mod text;

pub use factor::{
    irreducible_count, irreducible_count_big, moebius, moebius_coeffs, von_mangoldt,
    von_mangoldt_coeffs, Factorization, Factorizer,
};
pub use powersum::{newton_power_sums, power_sum, power_sum_idx, power_sum_via_roots};
pub use text::{parse_monic, parse_monic_auto};

use crate::ffield::FieldSpec;
use crate::{Error, Result};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::Range;

/// A monic polynomial `T^n + c_{n-1} T^{n-1} + … + c_0` over a fixed field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicPoly {
    spec: Arc<FieldSpec>,
    coeffs: Vec<u64>,
}

impl MonicPoly {
    /// Builds a monic polynomial from its low coefficients `c_0..c_{n-1}`
    /// (encoded element indices; the leading `1` is implicit).
    pub fn from_coeffs(spec: &Arc<FieldSpec>, coeffs: Vec<u64>) -> Result<MonicPoly> {
        if coeffs.iter().any(|&c| c >= spec.q()) {
            return Err(Error::InvalidParameter(
                "polynomial coefficient out of range".into(),
            ));
        }
        Ok(MonicPoly {
            spec: Arc::clone(spec),
            coeffs,
        })
    }

    /// The constant polynomial `1` (the unique monic of degree 0).
    pub fn one(spec: &Arc<FieldSpec>) -> MonicPoly {
        MonicPoly {
            spec: Arc::clone(spec),
            coeffs: Vec::new(),
        }
    }

    /// The monomial `T^e`.
    pub fn t_pow(spec: &Arc<FieldSpec>, e: usize) -> MonicPoly {
        MonicPoly {
            spec: Arc::clone(spec),
            coeffs: vec![0; e],
        }
    }

    /// The linear polynomial `T − a` for an element index `a`.
    pub fn linear(spec: &Arc<FieldSpec>, a: u64) -> MonicPoly {
        MonicPoly {
            spec: Arc::clone(spec),
            coeffs: vec![spec.neg_idx(a)],
        }
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Low coefficients `c_0..c_{n-1}` (leading `1` not included).
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `T^i`, including the implicit leading `1` and zeros
    /// above the degree.
    pub fn coeff(&self, i: usize) -> u64 {
        match i.cmp(&self.degree()) {
            Ordering::Less => self.coeffs[i],
            Ordering::Equal => 1,
            Ordering::Greater => 0,
        }
    }

    /// The `j`-th next-to-leading coefficient: `c_{n−j}` for `j ≤ n`, else 0.
    pub fn next_to_leading(&self, j: usize) -> u64 {
        if j > self.degree() {
            0
        } else {
            self.coeff(self.degree() - j)
        }
    }

    /// Constant term; the degree-0 polynomial is the constant `1`.
    pub fn constant_term(&self) -> u64 {
        self.coeff(0)
    }

    /// True when `T` does not divide the polynomial.
    pub fn coprime_to_t(&self) -> bool {
        self.constant_term() != 0
    }

    /// Full coefficient vector `c_0..c_{n-1}, 1` (low to high).
    pub fn full(&self) -> Vec<u64> {
        let mut v = self.coeffs.clone();
        v.push(1);
        v
    }

    /// Position in the fixed enumeration order: `Σ c_i q^i`.
    pub fn index(&self) -> u64 {
        let q = self.spec.q();
        let mut j = 0u64;
        for &c in self.coeffs.iter().rev() {
            j = j
                .checked_mul(q)
                .and_then(|j| j.checked_add(c))
                .expect("enumeration index exceeds u64");
        }
        j
    }

    /// Horner evaluation at the element with index `x`.
    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 1u64; // leading coefficient
        for &c in self.coeffs.iter().rev() {
            acc = self.spec.add_idx(self.spec.mul_idx(acc, x), c);
        }
        acc
    }

    /// Product of two monic polynomials over the same field.
    pub fn mul(&self, rhs: &MonicPoly) -> Result<MonicPoly> {
        if self.spec != rhs.spec {
            return Err(Error::MismatchedField);
        }
        let prod = raw::mul(&self.spec, &self.full(), &rhs.full());
        debug_assert_eq!(*prod.last().unwrap(), 1);
        let mut coeffs = prod;
        coeffs.pop();
        Ok(MonicPoly {
            spec: Arc::clone(&self.spec),
            coeffs,
        })
    }

    /// `self^e` by repeated multiplication.
    pub fn pow(&self, e: usize) -> MonicPoly {
        let mut acc = MonicPoly::one(&self.spec);
        for _ in 0..e {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }

    /// Quotient and remainder by another monic polynomial; the remainder is
    /// a plain coefficient vector (trimmed, possibly empty).
    pub fn divrem(&self, rhs: &MonicPoly) -> Result<(MonicPoly, Vec<u64>)> {
        if self.spec != rhs.spec {
            return Err(Error::MismatchedField);
        }
        let (q, r) = raw::divrem(&self.spec, &self.full(), &rhs.full());
        debug_assert_eq!(*q.last().unwrap_or(&1), 1);
        let mut coeffs = q;
        coeffs.pop();
        Ok((
            MonicPoly {
                spec: Arc::clone(&self.spec),
                coeffs,
            },
            r,
        ))
    }

    /// Whether `rhs` divides `self` exactly.
    pub fn divisible_by(&self, rhs: &MonicPoly) -> bool {
        if self.degree() < rhs.degree() {
            return false;
        }
        self.divrem(rhs).map(|(_, r)| r.is_empty()).unwrap_or(false)
    }

    /// The coefficient-reversing involution `f ↦ f(1/T)·T^{deg f}/f(0)`,
    /// defined when `T ∤ f`. It is monic of the same degree, an involution,
    /// multiplicative, and swaps the power sums `p_k ↔ p_{−k}`.
    pub fn involution(&self) -> Result<MonicPoly> {
        let n = self.degree();
        if n == 0 {
            return Ok(self.clone());
        }
        let c0 = self.coeffs[0];
        if c0 == 0 {
            return Err(Error::DividesByT);
        }
        let inv = self.spec.inv_idx(c0).ok_or(Error::DivisionByZero)?;
        // New c_j = c_{n−j} / c_0, with c_n = 1.
        let coeffs = (0..n)
            .map(|j| self.spec.mul_idx(self.coeff(n - j), inv))
            .collect();
        Ok(MonicPoly {
            spec: Arc::clone(&self.spec),
            coeffs,
        })
    }
}

impl core::fmt::Display for MonicPoly {
    fn fmt(&self, out: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        out.write_str(&text::format_monic(self))
    }
}

impl PartialOrd for MonicPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MonicPoly {
    /// Degree first, then enumeration-index order (most significant
    /// coefficient first), without materializing the index.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

/// `q^n` as a `u64`, or a budget error when enumeration would be too large.
pub fn monic_count(spec: &FieldSpec, n: usize) -> Result<u64> {
    let q = spec.q();
    u32::try_from(n)
        .ok()
        .and_then(|n32| q.checked_pow(n32))
        .filter(|&c| c <= crate::ENUM_BUDGET)
        .ok_or(Error::BudgetExceeded {
            q,
            n: n.min(u32::MAX as usize) as u32,
        })
}

/// The `j`-th monic polynomial of degree `n`: coefficients are the base-`q`
/// digits of `j`, least significant digit = constant term.
pub fn monic_at(spec: &Arc<FieldSpec>, n: usize, j: u64) -> MonicPoly {
    let q = spec.q();
    let mut rest = j;
    let coeffs = (0..n)
        .map(|_| {
            let c = rest % q;
            rest /= q;
            c
        })
        .collect();
    assert_eq!(rest, 0, "index out of range for degree");
    MonicPoly {
        spec: Arc::clone(spec),
        coeffs,
    }
}

/// Ordered stream of all `q^n` monic polynomials of degree `n`.
pub fn enumerate_monic(spec: &Arc<FieldSpec>, n: usize) -> Result<MonicIter> {
    let count = monic_count(spec, n)?;
    Ok(MonicIter {
        spec: Arc::clone(spec),
        next: 0,
        end: count,
        digits: vec![0; n],
    })
}

/// Iterator behind [`enumerate_monic`].
pub struct MonicIter {
    spec: Arc<FieldSpec>,
    next: u64,
    end: u64,
    digits: Vec<u64>,
}

impl Iterator for MonicIter {
    type Item = MonicPoly;

    fn next(&mut self) -> Option<MonicPoly> {
        if self.next >= self.end {
            return None;
        }
        let item = MonicPoly {
            spec: Arc::clone(&self.spec),
            coeffs: self.digits.clone(),
        };
        self.next += 1;
        if self.next < self.end {
            increment_digits(&mut self.digits, self.spec.q());
        }
        Some(item)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for MonicIter {}

fn increment_digits(digits: &mut [u64], q: u64) {
    for d in digits.iter_mut() {
        *d += 1;
        if *d == q {
            *d = 0;
        } else {
            break;
        }
    }
}

/// Allocation-free walk over a contiguous index range of the degree-`n`
/// enumeration: calls `f(j, low_coeffs)` for each `j` in `range`. This is
/// the kernel behind chunked parallel reductions — every chunk visits its
/// polynomials in the same order regardless of how ranges are assigned.
pub fn for_each_monic_range<F>(spec: &FieldSpec, n: usize, range: Range<u64>, mut f: F)
where
    F: FnMut(u64, &[u64]),
{
    let q = spec.q();
    if range.is_empty() {
        return;
    }
    let mut digits = vec![0u64; n];
    let mut rest = range.start;
    for d in digits.iter_mut() {
        *d = rest % q;
        rest /= q;
    }
    assert_eq!(rest, 0, "range start out of enumeration bounds");
    let mut j = range.start;
    loop {
        f(j, &digits);
        j += 1;
        if j >= range.end {
            break;
        }
        increment_digits(&mut digits, q);
    }
}

/// Tests irreducibility over `F_q`: degree 1 always, degree 0 never, and
/// otherwise the derandomized criterion — `T^{q^n} ≡ T (mod f)` together
/// with `gcd(T^{q^{n/r}} − T, f) = 1` for every prime `r | n`. The Frobenius
/// powers are built by iterated `q`-th powering, so no big-integer exponent
/// arises.
pub fn is_irreducible(f: &MonicPoly) -> Result<bool> {
    let n = f.degree();
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let spec = f.spec();
    let q = spec.q();
    // Cheap pre-filter: a root in F_q means a linear factor.
    if q <= 64 {
        for a in 0..q {
            if f.eval(a) == 0 {
                return Ok(false);
            }
        }
    }
    let fl = f.full();
    let t = [0u64, 1];
    // Depths where a coprimality check is due: n/r for each prime r | n.
    let mut check_depths: Vec<usize> = prime_divisors(n).into_iter().map(|r| n / r).collect();
    check_depths.sort_unstable();
    let qe = num_bigint::BigUint::from(q);
    let mut w: Vec<u64> = t.to_vec(); // T^{q^d} mod f, for the current depth d
    for d in 1..=n {
        w = raw::powmod(spec, &w, &qe, &fl);
        if check_depths.binary_search(&d).is_ok() {
            let diff = raw::sub(spec, &w, &t);
            if raw::gcd(spec, &fl, &diff).len() != 1 {
                return Ok(false);
            }
        }
        if d == n {
            let diff = raw::sub(spec, &w, &t);
            return Ok(diff.is_empty());
        }
    }
    unreachable!("loop returns at d == n");
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The canonical field modulus of degree `m`: the first irreducible monic
/// polynomial of degree `m` in enumeration order (equivalently, smallest by
/// the lexicographic order on `(c_{m-1}, …, c_0)`).
pub fn canonical_irreducible(spec: &Arc<FieldSpec>, m: usize) -> Result<MonicPoly> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "irreducible polynomials have degree >= 1".into(),
        ));
    }
    let count = monic_count(spec, m)?;
    for j in 0..count {
        let f = monic_at(spec, m, j);
        if is_irreducible(&f)? {
            return Ok(f);
        }
    }
    unreachable!("irreducibles of every degree exist over a finite field");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FieldSpec;
    use alloc::string::ToString;

    fn f2() -> Arc<FieldSpec> {
        FieldSpec::prime_field(2).unwrap()
    }

    fn f3() -> Arc<FieldSpec> {
        FieldSpec::prime_field(3).unwrap()
    }

    #[test]
    fn enumeration_lists_the_four_monic_quadratics_over_f2_in_order() {
        let spec = f2();
        let all: Vec<MonicPoly> = enumerate_monic(&spec, 2).unwrap().collect();
        let shown: Vec<_> = all.iter().map(|f| f.to_string()).collect();
        assert_eq!(shown, ["T^2", "T^2+1", "T^2+T", "T^2+T+1"]);
        for (j, f) in all.iter().enumerate() {
            assert_eq!(f.index(), j as u64);
            assert_eq!(*f, monic_at(&spec, 2, j as u64));
        }
    }

    #[test]
    fn enumeration_counts_and_degree_zero() {
        assert_eq!(monic_count(&f3(), 1).unwrap(), 3);
        let ones: Vec<MonicPoly> = enumerate_monic(&f2(), 0).unwrap().collect();
        assert_eq!(ones, [MonicPoly::one(&f2())]);
        assert_eq!(ones[0].constant_term(), 1);
    }

    #[test]
    fn enumeration_budget_is_enforced() {
        assert!(matches!(
            monic_count(&f2(), 40),
            Err(crate::Error::BudgetExceeded { q: 2, n: 40 })
        ));
    }

    #[test]
    fn ranged_walk_matches_the_full_iterator_across_chunk_splits() {
        let spec = f3();
        let n = 3;
        let full: Vec<u64> = enumerate_monic(&spec, n)
            .unwrap()
            .map(|f| f.index())
            .collect();
        for split in [0u64, 1, 5, 13, 26, 27] {
            let mut seen = Vec::new();
            for range in [0..split, split..27] {
                for_each_monic_range(&spec, n, range, |j, low| {
                    assert_eq!(monic_at(&spec, n, j).coeffs(), low);
                    seen.push(j);
                });
            }
            assert_eq!(seen, full);
        }
    }

    #[test]
    fn irreducibility_matches_a_trial_division_scan() {
        for q in [2u64, 3, 4] {
            let spec = FieldSpec::from_cardinality(q).unwrap();
            for n in 1..=6usize {
                for f in enumerate_monic(&spec, n).unwrap() {
                    // Brute force: no monic divisor of degree 1..=n/2.
                    let mut has_divisor = false;
                    'outer: for d in 1..=n / 2 {
                        for g in enumerate_monic(&spec, d).unwrap() {
                            if f.divisible_by(&g) {
                                has_divisor = true;
                                break 'outer;
                            }
                        }
                    }
                    assert_eq!(
                        is_irreducible(&f).unwrap(),
                        !has_divisor,
                        "mismatch at q={q} f={f}"
                    );
                }
            }
        }
    }

    #[test]
    fn canonical_irreducibles_match_known_smallest_choices() {
        assert_eq!(canonical_irreducible(&f2(), 2).unwrap().coeffs(), [1, 1]);
        assert_eq!(canonical_irreducible(&f2(), 3).unwrap().coeffs(), [1, 1, 0]);
        assert_eq!(canonical_irreducible(&f3(), 2).unwrap().coeffs(), [1, 0]);
    }

    #[test]
    fn involution_reverses_coefficients_and_is_an_involution() {
        let spec = f3();
        // ι(T − a) = T − a^{-1}: a = 2, 2^{-1} = 2 in F_3, so fixed.
        let lin = MonicPoly::linear(&spec, 2);
        assert_eq!(lin.involution().unwrap(), lin);
        // ι(1) = 1.
        let one = MonicPoly::one(&spec);
        assert_eq!(one.involution().unwrap(), one);
        // ι(T^2+T+1) = T^2+T+1 over F_2.
        let spec2 = f2();
        let f = MonicPoly::from_coeffs(&spec2, vec![1, 1]).unwrap();
        assert_eq!(f.involution().unwrap(), f);
        // ι∘ι = id and multiplicativity, exhaustively in small degree.
        for n in 0..=4usize {
            for f in enumerate_monic(&spec, n).unwrap() {
                if !f.coprime_to_t() {
                    assert!(f.involution().is_err());
                    continue;
                }
                let g = f.involution().unwrap();
                assert_eq!(g.degree(), f.degree());
                assert_eq!(g.involution().unwrap(), f);
            }
        }
        for f in enumerate_monic(&spec, 2).unwrap() {
            for g in enumerate_monic(&spec, 3).unwrap() {
                if f.coprime_to_t() && g.coprime_to_t() {
                    let lhs = f.mul(&g).unwrap().involution().unwrap();
                    let rhs = f.involution().unwrap().mul(&g.involution().unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn involution_rejects_multiples_of_t() {
        let f = MonicPoly::t_pow(&f2(), 3);
        assert!(matches!(f.involution(), Err(crate::Error::DividesByT)));
    }

    #[test]
    fn division_and_divisibility_work() {
        let spec = f2();
        // (T^2+T+1)(T+1) = T^3+1 over F_2.
        let a = MonicPoly::from_coeffs(&spec, vec![1, 1]).unwrap();
        let b = MonicPoly::linear(&spec, 1);
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.coeffs(), [1, 0, 0]);
        assert!(prod.divisible_by(&a));
        assert!(prod.divisible_by(&b));
        let (q, r) = prod.divrem(&a).unwrap();
        assert_eq!(q, b);
        assert!(r.is_empty());
        let t = MonicPoly::t_pow(&spec, 1);
        assert!(!prod.divisible_by(&t));
    }

    #[test]
    fn evaluation_and_coefficient_accessors_agree() {
        let spec = f3();
        let f = MonicPoly::from_coeffs(&spec, vec![1, 2, 0, 1]).unwrap(); // T^4+T^3+2T+1
        assert_eq!(f.coeff(4), 1);
        assert_eq!(f.coeff(5), 0);
        assert_eq!(f.next_to_leading(0), 1);
        assert_eq!(f.next_to_leading(1), 1);
        assert_eq!(f.next_to_leading(3), 2);
        assert_eq!(f.next_to_leading(5), 0);
        // f(1) = 1+1+0+2+1 = 5 ≡ 2 mod 3.
        assert_eq!(f.eval(1), 2);
        assert_eq!(f.eval(0), 1);
    }

    #[test]
    fn ordering_is_by_degree_then_enumeration_index() {
        let spec = f3();
        let mut all: Vec<MonicPoly> = enumerate_monic(&spec, 2).unwrap().collect();
        all.extend(enumerate_monic(&spec, 1).unwrap());
        all.sort();
        let degrees: Vec<usize> = all.iter().map(|f| f.degree()).collect();
        assert!(degrees.windows(2).all(|w| w[0] <= w[1]));
        let quad_indices: Vec<u64> = all[3..].iter().map(|f| f.index()).collect();
        assert_eq!(quad_indices, (0..9).collect::<Vec<u64>>());
    }
}
