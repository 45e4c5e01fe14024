//! Multiplicative character families on monic polynomials.
//!
//! Two families arise from the power sums `p_k`:
//!
//! * the power-trace character `χ_{k,ψ}(f) = ψ(p_{−k}(f))·1_{T∤f}` — a
//!   Dirichlet character modulo `T^{k+1}` ([`PowerTraceCharacter`]);
//! * the short-interval character `ξ_{a,ψ}(f) = ψ(Σ_i a_i p_i(f))`, which
//!   depends only on the top coefficients of `f`
//!   ([`ShortIntervalCharacter`]).
//!
//! The coefficient-reversing involution `ι` carries one family into the
//! other: `χ_{k,ψ} = ι_{ξ}` for the single-term vector `a = (0,…,0,1)`
//! ([`IotaTransformed`]).
//!
//! Everything evaluates through the object-safe [`CharacterFn`] trait so
//! the sum drivers, the verification routines ([`verify_dirichlet`],
//! [`verify_primitive`]) and the L-function builder ([`build_lfunction`])
//! can share one interface. In characteristic 2 all values lie in
//! `{0, ±1}` and every implementation provides the exact integer path
//! [`CharacterFn::eval_int`], which the sum drivers use to avoid floating
//! point entirely.
//!
//! A character that is periodic modulo a small `T^d` can be wrapped in
//! [`CachedCharacter`], which tabulates one value per residue class and
//! serves evaluations by table lookup; the table is built through the
//! direct path, so the verification routines (which always take the
//! uncached character) remain meaningful.

pub mod lfunction;
pub mod verify;

pub use lfunction::{build_lfunction, LFunctionPoly};
pub use verify::{verify_dirichlet, verify_primitive, DirichletReport, Primitivity};

use crate::ffield::{AdditiveCharacter, FieldSpec};
use crate::fpoly::powersum;
use crate::fpoly::MonicPoly;
use crate::{Error, Result};
use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, Zero};

/// Largest residue-table size [`CachedCharacter`] will materialize.
pub const CACHE_MAX: u64 = 1 << 16;

/// A complex-valued function on monic polynomials over a fixed field,
/// evaluated from the low coefficient slice (leading `1` implicit).
///
/// Contract: when the field has characteristic 2, [`eval_int`] must return
/// `Some` and agree exactly with [`eval_coeffs`] (whose values are then
/// exactly representable); in odd characteristic it returns `None` unless
/// the function is integer-valued by construction.
///
/// [`eval_int`]: CharacterFn::eval_int
/// [`eval_coeffs`]: CharacterFn::eval_coeffs
pub trait CharacterFn: Send + Sync {
    fn spec(&self) -> &Arc<FieldSpec>;

    /// Value on the monic polynomial with low coefficients `low`.
    fn eval_coeffs(&self, low: &[u64]) -> Complex64;

    /// Exact value in `{−1, 0, 1}` when representable, else `None`.
    fn eval_int(&self, low: &[u64]) -> Option<i8>;

    /// Canonical descriptor string (CSV/CLI identity of the character).
    fn descriptor(&self) -> String;

    /// Degree `d` such that the function is a Dirichlet character modulo
    /// `T^d` (enabling residue caching), when known and representable.
    fn modulus_degree(&self) -> Option<usize> {
        None
    }

    /// True when the character is principal (trivial on its support).
    fn is_principal(&self) -> bool {
        false
    }

    /// Value on a [`MonicPoly`] (checked convenience wrapper).
    fn eval(&self, f: &MonicPoly) -> Complex64 {
        debug_assert_eq!(**f.spec(), **self.spec());
        self.eval_coeffs(f.coeffs())
    }
}

impl CharacterFn for Box<dyn CharacterFn> {
    fn spec(&self) -> &Arc<FieldSpec> {
        (**self).spec()
    }
    fn eval_coeffs(&self, low: &[u64]) -> Complex64 {
        (**self).eval_coeffs(low)
    }
    fn eval_int(&self, low: &[u64]) -> Option<i8> {
        (**self).eval_int(low)
    }
    fn descriptor(&self) -> String {
        (**self).descriptor()
    }
    fn modulus_degree(&self) -> Option<usize> {
        (**self).modulus_degree()
    }
    fn is_principal(&self) -> bool {
        (**self).is_principal()
    }
}

/// The constant function `1` on all monic polynomials (no coprimality
/// condition). Its values are exactly integer in every characteristic.
pub struct ConstantOne {
    spec: Arc<FieldSpec>,
}

impl ConstantOne {
    pub fn new(spec: &Arc<FieldSpec>) -> ConstantOne {
        ConstantOne {
            spec: Arc::clone(spec),
        }
    }
}

impl CharacterFn for ConstantOne {
    fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }
    fn eval_coeffs(&self, _low: &[u64]) -> Complex64 {
        Complex64::one()
    }
    fn eval_int(&self, _low: &[u64]) -> Option<i8> {
        Some(1)
    }
    fn descriptor(&self) -> String {
        "one".to_string()
    }
    fn is_principal(&self) -> bool {
        true
    }
}

/// `χ_{k,ψ}(f) = ψ(p_{−k}(f))` when `T ∤ f`, and `0` otherwise.
///
/// `k ≥ 1` may be an arbitrary-precision integer; evaluation is a modular
/// exponentiation of `T^{-1}` modulo `f` followed by an operator trace, so
/// the cost grows with `log k`, not `k`. The character is a (primitive,
/// for `char ∤ k`) Dirichlet character modulo `T^{k+1}`.
pub struct PowerTraceCharacter {
    psi: AdditiveCharacter,
    k: BigUint,
    neg_k: BigInt,
}

impl PowerTraceCharacter {
    pub fn new(psi: AdditiveCharacter, k: BigUint) -> Result<PowerTraceCharacter> {
        if k.is_zero() {
            return Err(Error::InvalidParameter(
                "power-trace characters need k >= 1".into(),
            ));
        }
        let neg_k = -BigInt::from(k.clone());
        Ok(PowerTraceCharacter { psi, k, neg_k })
    }

    pub fn psi(&self) -> &AdditiveCharacter {
        &self.psi
    }

    pub fn k(&self) -> &BigUint {
        &self.k
    }

    /// `p_{−k}(f)` as an element index, or `None` when `T | f`.
    fn exponent(&self, low: &[u64]) -> Option<u64> {
        if low.first() == Some(&0) {
            return None;
        }
        let mut full = Vec::with_capacity(low.len() + 1);
        full.extend_from_slice(low);
        full.push(1);
        Some(
            powersum::power_sum_full(self.psi.spec(), &full, &self.neg_k)
                .expect("constant term nonzero"),
        )
    }
}

impl CharacterFn for PowerTraceCharacter {
    fn spec(&self) -> &Arc<FieldSpec> {
        self.psi.spec()
    }

    fn eval_coeffs(&self, low: &[u64]) -> Complex64 {
        match self.exponent(low) {
            Some(x) => self.psi.eval_idx(x),
            None => Complex64::zero(),
        }
    }

    fn eval_int(&self, low: &[u64]) -> Option<i8> {
        if self.psi.is_trivial() {
            // Principal: exactly the indicator of T ∤ f.
            return Some(if low.first() == Some(&0) { 0 } else { 1 });
        }
        match self.exponent(low) {
            Some(x) => self.psi.sign_idx(x),
            None => Some(0),
        }
    }

    fn descriptor(&self) -> String {
        format!("chi:k={},psi={}", self.k, self.psi.twist_index())
    }

    fn modulus_degree(&self) -> Option<usize> {
        usize::try_from(&self.k).ok().and_then(|k| k.checked_add(1))
    }

    fn is_principal(&self) -> bool {
        self.psi.is_trivial()
    }
}

/// The coefficient data of a short-interval character: either a dense
/// vector `(a_1, …, a_k)` or a single huge index `k` with coefficient
/// `a_k = 1` (the family `ξ_{k,ψ}`, whose index may have hundreds of bits).
enum XiForm {
    Dense(Vec<u64>),
    Single(BigUint),
}

/// `ξ_{a,ψ}(f) = ψ(Σ_i a_i p_i(f))`, which depends only on the first
/// `len(a)` next-to-leading coefficients of `f`.
pub struct ShortIntervalCharacter {
    psi: AdditiveCharacter,
    form: XiForm,
}

impl ShortIntervalCharacter {
    /// Dense coefficient vector `a = (a_1, …, a_k)` (element indices).
    pub fn with_coeffs(psi: AdditiveCharacter, a: Vec<u64>) -> Result<ShortIntervalCharacter> {
        if a.iter().any(|&c| c >= psi.spec().q()) {
            return Err(Error::InvalidParameter(
                "short-interval coefficient out of range".into(),
            ));
        }
        Ok(ShortIntervalCharacter {
            psi,
            form: XiForm::Dense(a),
        })
    }

    /// Single-term `ξ_{k,ψ}` (that is, `a_k = 1`, all other `a_i = 0`)
    /// with an arbitrary-precision index `k ≥ 1`.
    pub fn single_term(psi: AdditiveCharacter, k: BigUint) -> Result<ShortIntervalCharacter> {
        if k.is_zero() {
            return Err(Error::InvalidParameter(
                "short-interval index must be >= 1".into(),
            ));
        }
        Ok(ShortIntervalCharacter {
            psi,
            form: XiForm::Single(k),
        })
    }

    pub fn psi(&self) -> &AdditiveCharacter {
        &self.psi
    }

    /// `Σ_i a_i p_i(f)` as an element index.
    fn exponent(&self, low: &[u64]) -> u64 {
        let spec = self.psi.spec();
        let mut full = Vec::with_capacity(low.len() + 1);
        full.extend_from_slice(low);
        full.push(1);
        match &self.form {
            XiForm::Dense(a) => {
                let ps = powersum::newton_full(spec, &full, a.len());
                let mut acc = 0u64;
                for (ai, pi) in a.iter().zip(&ps) {
                    acc = spec.add_idx(acc, spec.mul_idx(*ai, *pi));
                }
                acc
            }
            XiForm::Single(k) => {
                powersum::power_sum_full(spec, &full, &BigInt::from(k.clone()))
                    .expect("positive index always defined")
            }
        }
    }
}

impl CharacterFn for ShortIntervalCharacter {
    fn spec(&self) -> &Arc<FieldSpec> {
        self.psi.spec()
    }

    fn eval_coeffs(&self, low: &[u64]) -> Complex64 {
        self.psi.eval_idx(self.exponent(low))
    }

    fn eval_int(&self, low: &[u64]) -> Option<i8> {
        if self.psi.is_trivial() {
            return Some(1);
        }
        self.psi.sign_idx(self.exponent(low))
    }

    fn descriptor(&self) -> String {
        match &self.form {
            XiForm::Dense(a) => {
                let items: Vec<String> = a.iter().map(|c| c.to_string()).collect();
                format!("xi:a=[{}],psi={}", items.join(","), self.psi.twist_index())
            }
            XiForm::Single(k) => format!("xi:k={},psi={}", k, self.psi.twist_index()),
        }
    }

    fn is_principal(&self) -> bool {
        match &self.form {
            XiForm::Dense(a) => self.psi.is_trivial() || a.iter().all(|&c| c == 0),
            XiForm::Single(_) => self.psi.is_trivial(),
        }
    }
}

/// The ι-transform `ι_α(f) = α(ι(f))·1_{T∤f}` of a character `α`; for
/// `α = ξ_{a,ψ}` this is a Dirichlet character modulo `T^{len(a)+1}`, and
/// for the single-term vector it coincides with `χ_{k,ψ}`.
pub struct IotaTransformed {
    inner: Box<dyn CharacterFn>,
    modulus_degree: Option<usize>,
}

impl IotaTransformed {
    pub fn new(inner: Box<dyn CharacterFn>) -> IotaTransformed {
        IotaTransformed {
            inner,
            modulus_degree: None,
        }
    }

    /// The ι-transform of a short-interval character, recording the
    /// modulus `T^{k+1}` its Dirichlet structure lives on.
    pub fn of_short_interval(xi: ShortIntervalCharacter) -> IotaTransformed {
        let modulus_degree = match &xi.form {
            XiForm::Dense(a) => a.len().checked_add(1),
            XiForm::Single(k) => usize::try_from(k).ok().and_then(|k| k.checked_add(1)),
        };
        IotaTransformed {
            inner: Box::new(xi),
            modulus_degree,
        }
    }

    /// Low coefficients of `ι(f)` from those of `f` (requires `c_0 ≠ 0`).
    fn reversed(&self, low: &[u64]) -> Vec<u64> {
        let n = low.len();
        if n == 0 {
            return Vec::new(); // ι(1) = 1
        }
        let spec = self.inner.spec();
        let inv = spec.inv_idx(low[0]).expect("constant term nonzero");
        (0..n)
            .map(|j| {
                let c = if j == 0 { 1 } else { low[n - j] };
                spec.mul_idx(c, inv)
            })
            .collect()
    }
}

impl CharacterFn for IotaTransformed {
    fn spec(&self) -> &Arc<FieldSpec> {
        self.inner.spec()
    }

    fn eval_coeffs(&self, low: &[u64]) -> Complex64 {
        if low.first() == Some(&0) {
            return Complex64::zero();
        }
        self.inner.eval_coeffs(&self.reversed(low))
    }

    fn eval_int(&self, low: &[u64]) -> Option<i8> {
        if low.first() == Some(&0) {
            return Some(0);
        }
        self.inner.eval_int(&self.reversed(low))
    }

    fn descriptor(&self) -> String {
        format!("iota({})", self.inner.descriptor())
    }

    fn modulus_degree(&self) -> Option<usize> {
        self.modulus_degree
    }

    fn is_principal(&self) -> bool {
        self.inner.is_principal()
    }
}

/// Residue-table wrapper for a character that is periodic modulo `T^d`:
/// one value per residue class, indexed by the class's digit string. The
/// table is filled through the inner character's direct path using the
/// monic representatives `T^d + r`.
pub struct CachedCharacter {
    spec: Arc<FieldSpec>,
    descriptor: String,
    modulus_degree: usize,
    table: Vec<Complex64>,
    table_int: Vec<Option<i8>>,
    principal: bool,
}

impl CachedCharacter {
    /// Tabulates `alpha`, which must report a modulus degree with
    /// `q^d ≤ CACHE_MAX`.
    pub fn build(alpha: &dyn CharacterFn) -> Result<CachedCharacter> {
        let spec = Arc::clone(alpha.spec());
        let d = alpha.modulus_degree().ok_or_else(|| {
            Error::InvalidParameter("character reports no residue modulus".into())
        })?;
        let q = spec.q();
        let size = u32::try_from(d)
            .ok()
            .and_then(|d| q.checked_pow(d))
            .filter(|&s| s <= CACHE_MAX)
            .ok_or(Error::BudgetExceeded {
                q,
                n: d.min(u32::MAX as usize) as u32,
            })?;
        let mut table = Vec::with_capacity(size as usize);
        let mut table_int = Vec::with_capacity(size as usize);
        let mut digits = alloc::vec![0u64; d];
        for r in 0..size {
            // Representative T^d + r has low coefficients = digits of r.
            table.push(alpha.eval_coeffs(&digits));
            table_int.push(alpha.eval_int(&digits));
            if r + 1 < size {
                let mut i = 0;
                loop {
                    digits[i] += 1;
                    if digits[i] == q {
                        digits[i] = 0;
                        i += 1;
                    } else {
                        break;
                    }
                }
            }
        }
        Ok(CachedCharacter {
            spec,
            descriptor: alpha.descriptor(),
            modulus_degree: d,
            table,
            table_int,
            principal: alpha.is_principal(),
        })
    }

    /// Residue index of `f mod T^d` from the low coefficients. When
    /// `deg f < d` the residue is `f` itself, whose digit string includes
    /// the monic leading `1` that the low-coefficient encoding leaves
    /// implicit.
    #[inline]
    fn residue(&self, low: &[u64]) -> usize {
        let q = self.spec.q();
        let mut r = if low.len() < self.modulus_degree {
            1u64
        } else {
            0u64
        };
        for &c in low[..self.modulus_degree.min(low.len())].iter().rev() {
            r = r * q + c;
        }
        r as usize
    }
}

impl CharacterFn for CachedCharacter {
    fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    fn eval_coeffs(&self, low: &[u64]) -> Complex64 {
        self.table[self.residue(low)]
    }

    fn eval_int(&self, low: &[u64]) -> Option<i8> {
        self.table_int[self.residue(low)]
    }

    fn descriptor(&self) -> String {
        self.descriptor.clone()
    }

    fn modulus_degree(&self) -> Option<usize> {
        Some(self.modulus_degree)
    }

    fn is_principal(&self) -> bool {
        self.principal
    }
}

/// Parses a character descriptor: `one`, `chi:k=<dec>,psi=<idx>`,
/// `xi:k=<dec>,psi=<idx>`, `xi:a=[i,j,…],psi=<idx>`, or `iota(<inner>)`.
pub fn parse_descriptor(spec: &Arc<FieldSpec>, s: &str) -> Result<Box<dyn CharacterFn>> {
    let s = s.trim();
    if s == "one" {
        return Ok(Box::new(ConstantOne::new(spec)));
    }
    if let Some(inner) = s.strip_prefix("iota(").and_then(|r| r.strip_suffix(')')) {
        let inner = inner.trim();
        if let Some(rest) = inner.strip_prefix("xi:") {
            let xi = parse_xi(spec, rest)?;
            return Ok(Box::new(IotaTransformed::of_short_interval(xi)));
        }
        let parsed = parse_descriptor(spec, inner)?;
        return Ok(Box::new(IotaTransformed::new(parsed)));
    }
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("unknown character descriptor {s:?}")))?;
    match kind {
        "xi" => Ok(Box::new(parse_xi(spec, rest)?)),
        "chi" => {
            let (k, a, psi) = parse_fields(spec, rest)?;
            match (k, a) {
                (Some(k), None) => Ok(Box::new(PowerTraceCharacter::new(psi, k)?)),
                _ => Err(Error::Parse("chi takes k=<integer> only".into())),
            }
        }
        _ => Err(Error::Parse(format!("unknown character descriptor {s:?}"))),
    }
}

fn parse_xi(spec: &Arc<FieldSpec>, rest: &str) -> Result<ShortIntervalCharacter> {
    let (k, a, psi) = parse_fields(spec, rest)?;
    match (k, a) {
        (Some(k), None) => ShortIntervalCharacter::single_term(psi, k),
        (None, Some(a)) => ShortIntervalCharacter::with_coeffs(psi, a),
        _ => Err(Error::Parse(
            "xi takes exactly one of k=<integer> or a=[...]".into(),
        )),
    }
}

type ParsedFields = (Option<BigUint>, Option<Vec<u64>>, AdditiveCharacter);

fn parse_fields(spec: &Arc<FieldSpec>, rest: &str) -> Result<ParsedFields> {
    let mut k: Option<BigUint> = None;
    let mut a: Option<Vec<u64>> = None;
    let mut psi_idx: Option<u64> = None;
    for part in split_top_level(rest) {
        if let Some(v) = part.strip_prefix("k=") {
            k = Some(
                v.parse()
                    .map_err(|_| Error::Parse(format!("bad character index {v:?}")))?,
            );
        } else if let Some(v) = part.strip_prefix("a=") {
            let inner = v
                .strip_prefix('[')
                .and_then(|v| v.strip_suffix(']'))
                .ok_or_else(|| Error::Parse("coefficient list must be bracketed".into()))?;
            let mut list = Vec::new();
            for item in inner.split(',') {
                let item = item.trim();
                if item.is_empty() {
                    continue;
                }
                list.push(
                    item.parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient {item:?}")))?,
                );
            }
            a = Some(list);
        } else if let Some(v) = part.strip_prefix("psi=") {
            psi_idx = Some(
                v.parse()
                    .map_err(|_| Error::Parse(format!("bad psi index {v:?}")))?,
            );
        } else {
            return Err(Error::Parse(format!("unknown descriptor field {part:?}")));
        }
    }
    let psi = AdditiveCharacter::by_index(
        spec,
        psi_idx.ok_or_else(|| Error::Parse("descriptor missing psi=".into()))?,
    )?;
    Ok((k, a, psi))
}

/// Splits `k=...,a=[...],psi=...` on commas that are not inside brackets.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpoly::{enumerate_monic, monic_at};
    use alloc::vec;

    fn f2() -> Arc<FieldSpec> {
        FieldSpec::prime_field(2).unwrap()
    }

    fn f3() -> Arc<FieldSpec> {
        FieldSpec::prime_field(3).unwrap()
    }

    fn chi(spec: &Arc<FieldSpec>, k: u64, psi_idx: u64) -> PowerTraceCharacter {
        let psi = AdditiveCharacter::by_index(spec, psi_idx).unwrap();
        PowerTraceCharacter::new(psi, BigUint::from(k)).unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn chi_basic_values() {
        let spec = f2();
        let c = chi(&spec, 1, 1);
        // χ(1) = 1 (empty product).
        assert!(close(c.eval(&MonicPoly::one(&spec)), Complex64::one()));
        // χ(T·g) = 0.
        let tg = MonicPoly::t_pow(&spec, 1)
            .mul(&MonicPoly::from_coeffs(&spec, vec![1, 1]).unwrap())
            .unwrap();
        assert!(close(c.eval(&tg), Complex64::zero()));
        assert_eq!(c.eval_int(tg.coeffs()), Some(0));
        // χ(T+1) = ψ(p_{−1}(T+1)) = ψ(1) = −1.
        let lin = MonicPoly::linear(&spec, 1);
        assert!(close(c.eval(&lin), -Complex64::one()));
        assert_eq!(c.eval_int(lin.coeffs()), Some(-1));
    }

    #[test]
    fn chi_is_completely_multiplicative_on_its_support() {
        for q in [2u64, 3] {
            let spec = FieldSpec::from_cardinality(q).unwrap();
            for k in [1u64, 2, 3] {
                let c = chi(&spec, k, 1);
                for f in enumerate_monic(&spec, 2).unwrap() {
                    for g in enumerate_monic(&spec, 3).unwrap() {
                        let fg = f.mul(&g).unwrap();
                        assert!(
                            close(c.eval(&fg), c.eval(&f) * c.eval(&g)),
                            "q={q} k={k} f={f} g={g}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn chi_exact_sign_path_matches_complex_path_in_char_2() {
        for q in [2u64, 4] {
            let spec = FieldSpec::from_cardinality(q).unwrap();
            for psi_idx in 0..q {
                let psi = AdditiveCharacter::by_index(&spec, psi_idx).unwrap();
                let c = PowerTraceCharacter::new(psi, BigUint::from(3u64)).unwrap();
                for n in 0..=4usize {
                    for f in enumerate_monic(&spec, n).unwrap() {
                        let v = c.eval(&f);
                        let s = c.eval_int(f.coeffs()).unwrap();
                        assert_eq!(Complex64::new(s as f64, 0.0), v, "q={q} psi={psi_idx} f={f}");
                    }
                }
            }
        }
    }

    #[test]
    fn xi_basic_values_and_truncation() {
        let spec = f2();
        let psi = AdditiveCharacter::by_index(&spec, 1).unwrap();
        // a = 0 vector → ξ ≡ 1.
        let xi0 = ShortIntervalCharacter::with_coeffs(psi.clone(), vec![0, 0]).unwrap();
        assert!(xi0.is_principal());
        for f in enumerate_monic(&spec, 3).unwrap() {
            assert!(close(xi0.eval(&f), Complex64::one()));
        }
        // k=1, a=(1): ξ(T²+T+1) = ψ(p_1) = ψ(1) = −1.
        let xi = ShortIntervalCharacter::with_coeffs(psi, vec![1]).unwrap();
        let f = MonicPoly::from_coeffs(&spec, vec![1, 1]).unwrap();
        assert!(close(xi.eval(&f), -Complex64::one()));
        // ξ with len(a) = k depends only on the first k next-to-leading
        // coefficients: pair polynomials sharing those and compare.
        for q in [2u64, 3] {
            let spec = FieldSpec::from_cardinality(q).unwrap();
            let psi = AdditiveCharacter::by_index(&spec, 1).unwrap();
            for k in 1..=3usize {
                let a: Vec<u64> = (0..k).map(|i| (i as u64 % (q - 1)) + 1).collect();
                let xi = ShortIntervalCharacter::with_coeffs(psi.clone(), a).unwrap();
                let n = 5usize;
                for f in enumerate_monic(&spec, n).unwrap() {
                    // Modify low coefficients only (positions 0..n−k).
                    let mut other = f.coeffs().to_vec();
                    for c in other.iter_mut().take(n - k) {
                        *c = (*c + 1) % q;
                    }
                    let g = MonicPoly::from_coeffs(&spec, other).unwrap();
                    assert!(close(xi.eval(&f), xi.eval(&g)), "q={q} k={k} f={f} g={g}");
                }
            }
        }
    }

    #[test]
    fn single_term_xi_matches_dense_unit_vector() {
        for q in [2u64, 3] {
            let spec = FieldSpec::from_cardinality(q).unwrap();
            let psi = AdditiveCharacter::by_index(&spec, 1).unwrap();
            for k in 1..=4usize {
                let mut a = vec![0u64; k];
                a[k - 1] = 1;
                let dense = ShortIntervalCharacter::with_coeffs(psi.clone(), a).unwrap();
                let single =
                    ShortIntervalCharacter::single_term(psi.clone(), BigUint::from(k)).unwrap();
                for n in 0..=5usize {
                    for f in enumerate_monic(&spec, n).unwrap() {
                        assert!(close(dense.eval(&f), single.eval(&f)), "q={q} k={k} f={f}");
                    }
                }
            }
        }
    }

    #[test]
    fn iota_transform_of_unit_vector_xi_is_chi() {
        for q in [2u64, 3] {
            let spec = FieldSpec::from_cardinality(q).unwrap();
            let psi = AdditiveCharacter::by_index(&spec, 1).unwrap();
            for k in 1..=4usize {
                let xi =
                    ShortIntervalCharacter::single_term(psi.clone(), BigUint::from(k)).unwrap();
                let iota = IotaTransformed::of_short_interval(xi);
                let c = chi(&spec, k as u64, 1);
                assert_eq!(iota.modulus_degree(), Some(k + 1));
                for n in 0..=6usize {
                    for f in enumerate_monic(&spec, n).unwrap() {
                        assert!(close(iota.eval(&f), c.eval(&f)), "q={q} k={k} f={f}");
                    }
                }
            }
        }
    }

    #[test]
    fn cached_lookup_equals_direct_evaluation() {
        for q in [2u64, 3] {
            let spec = FieldSpec::from_cardinality(q).unwrap();
            for k in [1u64, 2] {
                let c = chi(&spec, k, 1);
                let cached = CachedCharacter::build(&c).unwrap();
                assert_eq!(cached.descriptor(), c.descriptor());
                // Degrees below the modulus exercise the implicit leading
                // coefficient in the residue lookup.
                for n in 0..=6 {
                    for f in enumerate_monic(&spec, n).unwrap() {
                        assert!(close(cached.eval(&f), c.eval(&f)), "q={q} k={k} f={f}");
                        assert_eq!(cached.eval_int(f.coeffs()), c.eval_int(f.coeffs()));
                    }
                }
            }
        }
    }

    #[test]
    fn cache_budget_is_enforced() {
        let spec = f3();
        let c = chi(&spec, 30, 1); // 3^31 residues: far past CACHE_MAX
        assert!(matches!(
            CachedCharacter::build(&c),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn descriptors_round_trip_through_the_parser() {
        let spec = f3();
        let psi = AdditiveCharacter::by_index(&spec, 2).unwrap();
        let cases: Vec<Box<dyn CharacterFn>> = vec![
            Box::new(ConstantOne::new(&spec)),
            Box::new(chi(&spec, 7, 2)),
            Box::new(ShortIntervalCharacter::with_coeffs(psi.clone(), vec![1, 0, 2]).unwrap()),
            Box::new(
                ShortIntervalCharacter::single_term(
                    psi.clone(),
                    "18446744073709551629".parse().unwrap(),
                )
                .unwrap(),
            ),
            Box::new(IotaTransformed::of_short_interval(
                ShortIntervalCharacter::with_coeffs(psi, vec![0, 1]).unwrap(),
            )),
        ];
        for alpha in &cases {
            let text = alpha.descriptor();
            let parsed = parse_descriptor(&spec, &text).unwrap();
            assert_eq!(parsed.descriptor(), text);
            for n in 0..=4usize {
                for f in enumerate_monic(&spec, n).unwrap() {
                    assert!(close(parsed.eval(&f), alpha.eval(&f)), "{text} at {f}");
                }
            }
        }
        for bad in ["", "zeta:k=1", "chi:k=0,psi=1", "chi:psi=1", "xi:psi=1", "chi:k=2"] {
            assert!(parse_descriptor(&spec, bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn huge_index_characters_evaluate_consistently() {
        // χ_{k,ψ} with k = 2^64 + 13 over F_2: values agree with the
        // k mod (orbit order) reduction on irreducibles.
        let spec = f2();
        let c = chi(&spec, 1, 1);
        let k: BigUint = (BigUint::one() << 64u32) + BigUint::from(13u64);
        let big = PowerTraceCharacter::new(c.psi().clone(), k).unwrap();
        // On the irreducible T^2+T+1 (roots of order 3): 2^64+13 ≡ 2 mod 3,
        // so χ_big = ψ(p_{−2}) there.
        let f = MonicPoly::from_coeffs(&spec, vec![1, 1]).unwrap();
        let two = chi(&spec, 2, 1);
        assert!(close(big.eval(&f), two.eval(&f)));
        // And the residue it reports is too large to cache.
        assert!(CachedCharacter::build(&big).is_err());
    }

    #[test]
    fn iota_applies_the_reversal_on_general_characters() {
        // ι(ι_ξ) should equal ξ on T-coprime inputs (ι is an involution).
        let spec = f3();
        let psi = AdditiveCharacter::by_index(&spec, 1).unwrap();
        let xi = ShortIntervalCharacter::with_coeffs(psi.clone(), vec![2, 1]).unwrap();
        let once = IotaTransformed::of_short_interval(
            ShortIntervalCharacter::with_coeffs(psi, vec![2, 1]).unwrap(),
        );
        let twice = IotaTransformed::new(Box::new(once));
        for n in 1..=5usize {
            for f in enumerate_monic(&spec, n).unwrap() {
                if f.coprime_to_t() {
                    assert!(close(twice.eval(&f), xi.eval(&f)), "f={f}");
                }
            }
        }
    }

    #[test]
    fn monic_at_digits_equal_low_coefficients_used_by_the_cache() {
        // The cache indexes residues by digit strings; check the identity
        // residue(f) = index(f mod T^d) on a concrete case.
        let spec = f3();
        let c = chi(&spec, 2, 1);
        let cached = CachedCharacter::build(&c).unwrap();
        for j in 0..81u64 {
            let f = monic_at(&spec, 4, j);
            let r = j % 27; // q^d = 3^3 residues
            let rep = monic_at(&spec, 3, r);
            assert!(close(cached.eval(&f), c.eval(&rep.mul(&MonicPoly::t_pow(&spec, 0)).unwrap())));
        }
    }
}
