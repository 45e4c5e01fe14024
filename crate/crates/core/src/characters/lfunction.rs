//! L-functions of Dirichlet characters on `F_q[T]`, as polynomials.
//!
//! For a nonprincipal Dirichlet character `χ` to a modulus of degree `D`,
//! the generating function `L(u, χ) = Σ_f χ(f) u^{deg f}` over monic `f`
//! collapses to a polynomial: the coefficient of `u^n` is the full sum
//! `S(n, χ) = Σ_{deg f = n} χ(f)`, and orthogonality kills every `n ≥ D`.
//! Writing `L(u, χ) = Π_i (1 − γ_i u)`, the inverse roots `γ_i` satisfy the
//! Riemann hypothesis for function fields: every `|γ_i|` is `1` or `√q`.
//!
//! [`build_lfunction`] computes the coefficients by direct enumeration
//! (feasible because every modulus used here has small degree), keeping an
//! exact integer side channel whenever the character provides one (all
//! characters in characteristic 2 do, so those L-polynomials carry no
//! floating-point error at all). [`LFunctionPoly::inverse_root_power_sums`]
//! converts the coefficients to the Newton power sums `s_n = Σ_i γ_i^n`
//! without ever extracting roots, and [`LFunctionPoly::inverse_roots`]
//! extracts the `γ_i` themselves with the Durand–Kerner iteration for the
//! spot checks that want actual moduli.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::characters::CharacterFn;
use crate::ffield::FieldSpec;
use crate::fpoly::{for_each_monic_range, monic_count};
use crate::{Error, Result};

/// Coefficients below this magnitude are treated as the exact zeros they
/// would be in infinite precision when trimming the polynomial degree.
const TRIM_TOL: f64 = 1e-9;

/// An L-function `L(u, χ) = Σ_n S(n, χ) u^n`, stored by coefficient.
#[derive(Clone, Debug)]
pub struct LFunctionPoly {
    spec: Arc<FieldSpec>,
    descriptor: String,
    coeffs: Vec<Complex64>,
    coeffs_int: Option<Vec<i64>>,
    degree: usize,
}

/// Sums a character over all monic polynomials of one degree, carrying the
/// exact integer total alongside the complex one while the character keeps
/// providing exact values.
fn char_degree_sum(alpha: &dyn CharacterFn, n: usize) -> Result<(Complex64, Option<i64>)> {
    let spec = alpha.spec();
    let count = monic_count(spec, n)?;
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_int: Option<i64> = Some(0);
    for_each_monic_range(spec, n, 0..count, |_, low| match total_int {
        Some(acc) => match alpha.eval_int(low) {
            Some(v) => {
                total_int = Some(acc + i64::from(v));
                total += Complex64::new(f64::from(v), 0.0);
            }
            None => {
                total_int = None;
                total += alpha.eval_coeffs(low);
            }
        },
        None => total += alpha.eval_coeffs(low),
    });
    if let Some(acc) = total_int {
        // Keep the complex side bit-identical to the exact one.
        total = Complex64::new(acc as f64, 0.0);
    }
    Ok((total, total_int))
}

/// Computes the L-function of a character that is Dirichlet to a modulus of
/// degree `modulus_degree`.
///
/// Principal characters are rejected: their generating function has a pole
/// rather than being a polynomial. As a safety net the sum at degree
/// `modulus_degree` itself is also computed and must vanish; a character
/// that fails this was not periodic to the claimed modulus.
pub fn build_lfunction(alpha: &dyn CharacterFn, modulus_degree: usize) -> Result<LFunctionPoly> {
    if alpha.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    if modulus_degree == 0 {
        return Err(Error::InvalidParameter(
            "dirichlet modulus must have positive degree".into(),
        ));
    }
    let spec = alpha.spec().clone();
    let mut coeffs = Vec::with_capacity(modulus_degree);
    let mut coeffs_int: Option<Vec<i64>> = Some(Vec::with_capacity(modulus_degree));
    for n in 0..modulus_degree {
        let (c, ci) = char_degree_sum(alpha, n)?;
        coeffs.push(c);
        coeffs_int = match (coeffs_int, ci) {
            (Some(mut v), Some(i)) => {
                v.push(i);
                Some(v)
            }
            _ => None,
        };
    }
    if (coeffs[0] - Complex64::new(1.0, 0.0)).norm() > TRIM_TOL {
        return Err(Error::InvalidParameter(
            "character does not send 1 to 1".into(),
        ));
    }
    let (beyond, _) = char_degree_sum(alpha, modulus_degree)?;
    if beyond.norm() > TRIM_TOL {
        return Err(Error::InvalidParameter(
            "degree sums do not vanish beyond the modulus; character is not \
             a nonprincipal dirichlet character to this modulus"
                .into(),
        ));
    }
    let degree = match &coeffs_int {
        Some(v) => v.iter().rposition(|&c| c != 0).unwrap_or(0),
        None => coeffs
            .iter()
            .rposition(|c| c.norm() > TRIM_TOL)
            .unwrap_or(0),
    };
    coeffs.truncate(degree + 1);
    if let Some(v) = &mut coeffs_int {
        v.truncate(degree + 1);
    }
    Ok(LFunctionPoly {
        spec,
        descriptor: alpha.descriptor(),
        coeffs,
        coeffs_int,
        degree,
    })
}

impl LFunctionPoly {
    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    /// Descriptor of the character this L-function belongs to.
    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    /// Degree `d(χ)` after trimming trailing zero coefficients.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients `c_0 = 1, c_1, …, c_d` of `L(u) = Σ c_n u^n`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Exact integer coefficients, when every character value summed was
    /// available exactly (always the case in characteristic 2).
    pub fn coeffs_int(&self) -> Option<&[i64]> {
        self.coeffs_int.as_deref()
    }

    /// Evaluates `L(u)` at a complex point by Horner's rule.
    pub fn eval(&self, u: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * u + c;
        }
        acc
    }

    /// Power sums `s_n = Σ_i γ_i^n` of the inverse roots for
    /// `n = 1, …, n_max`, from the coefficients alone.
    ///
    /// With `L(u) = Π (1 − γ_i u) = Σ c_j u^j`, Newton's identity in this
    /// normalization reads `s_n = −Σ_{i=1}^{min(n−1, d)} c_i s_{n−i} −
    /// [n ≤ d] · n · c_n`.
    pub fn inverse_root_power_sums(&self, n_max: usize) -> Vec<Complex64> {
        let d = self.degree;
        let mut sums: Vec<Complex64> = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 1..=(n - 1).min(d) {
                s -= self.coeffs[i] * sums[n - 1 - i];
            }
            if n <= d {
                s -= Complex64::new(n as f64, 0.0) * self.coeffs[n];
            }
            sums.push(s);
        }
        sums
    }

    /// The inverse roots `γ_i` (roots of `x^d · L(1/x)`), found with the
    /// Durand–Kerner simultaneous iteration.
    ///
    /// The returned values satisfy `Π (1 − γ_i u) = L(u)`; for characters
    /// that are genuine Dirichlet characters their moduli land on `1` or
    /// `√q` up to iteration tolerance.
    pub fn inverse_roots(&self) -> Vec<Complex64> {
        let d = self.degree;
        if d == 0 {
            return Vec::new();
        }
        // Monic polynomial with the inverse roots as its roots:
        // P(x) = Σ_j c_j x^{d−j}, leading coefficient c_0 = 1.
        let poly: Vec<Complex64> = self.coeffs.clone(); // index j holds c_j
        let eval_p = |x: Complex64| {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in poly.iter() {
                acc = acc * x + c;
            }
            acc
        };
        // Initial guesses on a spiral scaled to the largest possible root
        // magnitude √q, distinct by construction.
        let scale = libm::sqrt(self.spec.q() as f64);
        let seed = Complex64::new(0.4, 0.9);
        let mut z: Vec<Complex64> = Vec::with_capacity(d);
        let mut acc = Complex64::new(1.0, 0.0);
        for _ in 0..d {
            acc *= seed;
            z.push(acc * scale);
        }
        for _ in 0..500 {
            let mut max_step = 0.0f64;
            for i in 0..d {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..d {
                    if j != i {
                        denom *= z[i] - z[j];
                    }
                }
                if denom.norm() == 0.0 {
                    // Collided guesses: nudge and retry next sweep.
                    z[i] += Complex64::new(1e-6, 1e-6);
                    max_step = f64::MAX;
                    continue;
                }
                let step = eval_p(z[i]) / denom;
                z[i] -= step;
                let rel = step.norm() / (1.0 + z[i].norm());
                if rel > max_step {
                    max_step = rel;
                }
            }
            if max_step < 1e-13 {
                break;
            }
        }
        z
    }
}

#[cfg(test)]
mod tests {
    use alloc::vec;

    use super::*;
    use crate::characters::{PowerTraceCharacter, ShortIntervalCharacter};
    use crate::ffield::AdditiveCharacter;

    fn chi(p: u64, k: u64, psi_idx: u64) -> PowerTraceCharacter {
        let spec = FieldSpec::prime_field(p).unwrap();
        let psi = AdditiveCharacter::by_index(&spec, psi_idx).unwrap();
        PowerTraceCharacter::new(psi, k.into()).unwrap()
    }

    #[test]
    fn k1_binary_lfunction_is_one_minus_u() {
        // χ_{1,ψ} over F_2: S(0) = 1 and S(1) = χ(T) + χ(T+1) = 0 − 1, all
        // higher sums vanish, so L(u) = 1 − u exactly.
        let chi = chi(2, 1, 1);
        let lf = build_lfunction(&chi, 2).unwrap();
        assert_eq!(lf.degree(), 1);
        assert_eq!(lf.coeffs_int(), Some(&[1i64, -1][..]));
        // Its only inverse root is γ = 1, so every power sum is 1.
        for s in lf.inverse_root_power_sums(10) {
            assert!((s - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        let roots = lf.inverse_roots();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn principal_characters_are_rejected() {
        let spec = FieldSpec::prime_field(2).unwrap();
        let psi = AdditiveCharacter::trivial(&spec);
        let chi = PowerTraceCharacter::new(psi, 3u32.into()).unwrap();
        assert!(matches!(
            build_lfunction(&chi, 4),
            Err(Error::PrincipalCharacter)
        ));
        let one = crate::characters::ConstantOne::new(&spec);
        assert!(matches!(
            build_lfunction(&one, 2),
            Err(Error::PrincipalCharacter)
        ));
    }

    #[test]
    fn degree_is_at_most_modulus_degree_minus_one() {
        for p in [2u64, 3] {
            for k in 1..=4u64 {
                let spec = FieldSpec::prime_field(p).unwrap();
                for psi in AdditiveCharacter::nontrivial(&spec) {
                    let chi = PowerTraceCharacter::new(psi, k.into()).unwrap();
                    let lf = build_lfunction(&chi, k as usize + 1).unwrap();
                    assert!(lf.degree() <= k as usize, "p={p} k={k}");
                    assert_eq!(lf.coeffs().len(), lf.degree() + 1);
                }
            }
        }
    }

    #[test]
    fn inverse_roots_sit_on_the_two_weil_circles() {
        for p in [2u64, 3] {
            let sqrt_q = libm::sqrt(p as f64);
            for k in 1..=6u64 {
                let spec = FieldSpec::prime_field(p).unwrap();
                for psi in AdditiveCharacter::nontrivial(&spec) {
                    let chi = PowerTraceCharacter::new(psi, k.into()).unwrap();
                    let lf = build_lfunction(&chi, k as usize + 1).unwrap();
                    for root in lf.inverse_roots() {
                        let m = root.norm();
                        let on_unit = (m - 1.0).abs() < 1e-6;
                        let on_sqrt = (m - sqrt_q).abs() < 1e-6;
                        assert!(on_unit || on_sqrt, "p={p} k={k} |γ|={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn power_sums_match_explicit_roots() {
        let spec = FieldSpec::prime_field(3).unwrap();
        let psi = AdditiveCharacter::by_index(&spec, 1).unwrap();
        let chi = PowerTraceCharacter::new(psi, 4u32.into()).unwrap();
        let lf = build_lfunction(&chi, 5).unwrap();
        let roots = lf.inverse_roots();
        assert_eq!(roots.len(), lf.degree());
        let sums = lf.inverse_root_power_sums(8);
        for (n, s) in sums.iter().enumerate() {
            let direct: Complex64 = roots.iter().map(|g| g.powu(n as u32 + 1)).sum();
            assert!(
                (s - direct).norm() < 1e-8,
                "n={} newton={s} direct={direct}",
                n + 1
            );
        }
        // The product over (1 − γ_i u) must reproduce the coefficients.
        let u = Complex64::new(0.3, -0.2);
        let prod: Complex64 = roots
            .iter()
            .map(|g| Complex64::new(1.0, 0.0) - g * u)
            .product();
        assert!((prod - lf.eval(u)).norm() < 1e-8);
    }

    #[test]
    fn degree_sums_vanish_beyond_the_modulus() {
        // Termination, checked two degrees past the modulus.
        for (p, k) in [(2u64, 3usize), (3, 2)] {
            let spec = FieldSpec::prime_field(p).unwrap();
            let psi = AdditiveCharacter::by_index(&spec, 1).unwrap();
            let chi = PowerTraceCharacter::new(psi, (k as u64).into()).unwrap();
            for extra in [1, 2] {
                let (s, _) = char_degree_sum(&chi, k + extra).unwrap();
                assert!(s.norm() < 1e-9, "p={p} k={k} n={}", k + extra);
            }
        }
    }

    #[test]
    fn exact_integer_side_channel_tracks_characteristic() {
        // χ in characteristic 2 keeps the integer coefficients; over F_3 a
        // nontrivial ψ takes genuinely complex values so the channel drops.
        let lf2 = build_lfunction(&chi(2, 3, 1), 4).unwrap();
        assert!(lf2.coeffs_int().is_some());
        let lf3 = build_lfunction(&chi(3, 2, 1), 3).unwrap();
        assert!(lf3.coeffs_int().is_none());
    }

    #[test]
    fn short_interval_characters_compose_through_iota() {
        // The reversal of a ξ with a_k ≠ 0 is Dirichlet mod T^{k+1}; its
        // L-function obeys the same degree bound and root dichotomy.
        let spec = FieldSpec::prime_field(2).unwrap();
        let psi = AdditiveCharacter::by_index(&spec, 1).unwrap();
        let xi = ShortIntervalCharacter::with_coeffs(psi, vec![1, 1, 1]).unwrap();
        let alpha = crate::characters::IotaTransformed::of_short_interval(xi);
        let lf = build_lfunction(&alpha, 4).unwrap();
        assert!(lf.degree() <= 3);
        for root in lf.inverse_roots() {
            let m = root.norm();
            assert!((m - 1.0).abs() < 1e-6 || (m - libm::sqrt(2.0)).abs() < 1e-6);
        }
    }
}
