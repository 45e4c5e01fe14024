//! Runtime checks that a character behaves like a Dirichlet character.
//!
//! A map `α` on monic polynomials is a Dirichlet character to a modulus `Q`
//! when it is completely multiplicative, vanishes exactly on the monics
//! sharing a factor with `Q`, and depends only on the residue class mod `Q`.
//! [`verify_dirichlet`] tests all three properties exhaustively up to a
//! degree bound and reports the first counterexample of each kind, so a
//! failure is directly inspectable rather than a bare boolean.
//!
//! [`verify_primitive`] applies the standard criterion for a character mod
//! `T^{k+1}`: the character is primitive (not induced from the coarser
//! modulus `T^k`) exactly when it is nontrivial on some unit `≡ 1 + c·T^k
//! (mod T^{k+1})`. Scanning the monic representatives `T^{k+1} + c·T^k + 1`
//! either exhibits a witness `c` or proves the restriction trivial.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::characters::CharacterFn;
use crate::fpoly::{enumerate_monic, MonicPoly};
use crate::{Error, Result};

/// Tolerance for comparing complex character values built from floating
/// point roots of unity. The exact integer path is used instead whenever a
/// character provides one.
const TOL: f64 = 1e-9;

/// Outcome of [`verify_dirichlet`], with witnesses for whichever properties
/// failed. `ok` is true exactly when all three witness slots are empty.
#[derive(Clone, Debug)]
pub struct DirichletReport {
    /// True when every checked instance of every property held.
    pub ok: bool,
    /// A pair `(f, g)` with `α(f·g) ≠ α(f)·α(g)`, if one was found.
    pub multiplicative_witness: Option<(MonicPoly, MonicPoly)>,
    /// An `f` where the vanishing rule `α(f) = 0 ⟺ gcd(f, Q) ≠ 1` failed.
    pub vanishing_witness: Option<MonicPoly>,
    /// A pair `(f, g)` with `f ≡ g (mod Q)` but `α(f) ≠ α(g)`.
    pub periodicity_witness: Option<(MonicPoly, MonicPoly)>,
}

impl DirichletReport {
    fn passing() -> Self {
        DirichletReport {
            ok: true,
            multiplicative_witness: None,
            vanishing_witness: None,
            periodicity_witness: None,
        }
    }
}

/// Exhaustively checks that `alpha` acts as a Dirichlet character to the
/// modulus `modulus` on all monic polynomials of degree at most
/// `degree_bound` (products are checked whenever `deg f + deg g` stays
/// within the bound).
///
/// Returns a report carrying the first witness found for each failing
/// property; short-circuits each individual scan at its first hit but still
/// runs all three scans.
pub fn verify_dirichlet(
    alpha: &dyn CharacterFn,
    modulus: &MonicPoly,
    degree_bound: usize,
) -> Result<DirichletReport> {
    let spec = alpha.spec().clone();
    if modulus.spec().q() != spec.q() {
        return Err(Error::MismatchedField);
    }
    if modulus.degree() == 0 {
        return Err(Error::InvalidParameter(
            "dirichlet modulus must have positive degree".into(),
        ));
    }
    let mut report = DirichletReport::passing();

    // Collect every monic of degree <= bound once, with its value.
    let mut polys: Vec<MonicPoly> = Vec::new();
    for n in 0..=degree_bound {
        for f in enumerate_monic(&spec, n)? {
            polys.push(f);
        }
    }
    let values: Vec<Complex64> = polys.iter().map(|f| alpha.eval(f)).collect();

    // Vanishing: α(f) = 0 exactly when f shares a factor with Q.
    for (f, &v) in polys.iter().zip(&values) {
        let coprime = f.gcd(modulus)?.degree() == 0;
        let vanishes = v.norm() <= TOL;
        if coprime == vanishes {
            report.ok = false;
            report.vanishing_witness = Some(f.clone());
            break;
        }
    }

    // Complete multiplicativity over all pairs within the degree budget.
    'mult: for (i, f) in polys.iter().enumerate() {
        for g in polys.iter().skip(i) {
            if f.degree() + g.degree() > degree_bound {
                break;
            }
            let prod = f.mul(g)?;
            if (alpha.eval(&prod) - values[i] * alpha.eval(g)).norm() > TOL {
                report.ok = false;
                report.multiplicative_witness = Some((f.clone(), g.clone()));
                break 'mult;
            }
        }
    }

    // Periodicity: bucket by residue mod Q and compare within buckets. The
    // residue index is at most q^{deg Q}, small for every checked modulus.
    let d = modulus.degree();
    let classes = spec
        .q()
        .checked_pow(d as u32)
        .and_then(|c| usize::try_from(c).ok())
        .ok_or_else(|| Error::InvalidParameter("modulus residue space too large".into()))?;
    let mut seen: Vec<Option<usize>> = alloc::vec![None; classes];
    'period: for (i, f) in polys.iter().enumerate() {
        if f.gcd(modulus)?.degree() != 0 {
            continue; // both values are 0 when the vanishing rule holds
        }
        let (_, rem) = f.divrem(modulus)?;
        let mut key = 0usize;
        for &c in rem.iter().rev() {
            key = key * spec.q() as usize + c as usize;
        }
        match seen[key] {
            None => seen[key] = Some(i),
            Some(j) => {
                if (values[i] - values[j]).norm() > TOL {
                    report.ok = false;
                    report.periodicity_witness = Some((polys[j].clone(), f.clone()));
                    break 'period;
                }
            }
        }
    }

    Ok(report)
}

/// Outcome of the primitivity scan for a character mod `T^{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Primitivity {
    /// The character is nontrivial on a unit `1 + c·T^k`; it cannot be
    /// induced from a character mod `T^k`.
    Primitive {
        /// Element index of a coefficient `c` with `α(rep(1 + c·T^k)) ≠ 1`.
        witness_c: u64,
    },
    /// The character was trivial on all `1 + c·T^k`; it is induced from the
    /// coarser modulus (or the scan has no content, e.g. a trivial twist).
    InducedOrUnknown,
}

/// Decides primitivity of a character mod `T^{k+1}` by evaluating it on the
/// monic representatives `T^{k+1} + c·T^k + 1 ≡ 1 + c·T^k (mod T^{k+1})`
/// for every `c ≠ 0`.
pub fn verify_primitive(alpha: &dyn CharacterFn, k: usize) -> Result<Primitivity> {
    let spec = alpha.spec().clone();
    if k == 0 {
        return Err(Error::InvalidParameter(
            "primitivity scan needs modulus exponent k >= 1".into(),
        ));
    }
    for c in 1..spec.q() {
        // Low coefficients of T^{k+1} + c T^k + 1: constant 1, then zeros,
        // then c in position k.
        let mut low = alloc::vec![0u64; k + 1];
        low[0] = 1;
        low[k] = c;
        let v = alpha.eval_coeffs(&low);
        if (v - Complex64::new(1.0, 0.0)).norm() > TOL {
            return Ok(Primitivity::Primitive { witness_c: c });
        }
    }
    Ok(Primitivity::InducedOrUnknown)
}

impl MonicPoly {
    /// Monic greatest common divisor with another polynomial of the same
    /// field. The gcd of two monics is never zero.
    pub fn gcd(&self, other: &MonicPoly) -> Result<MonicPoly> {
        if self.spec().q() != other.spec().q() {
            return Err(Error::MismatchedField);
        }
        let g = crate::fpoly::raw::gcd(self.spec(), &self.full(), &other.full());
        let deg = g.len() - 1;
        let mut low = g;
        low.pop();
        debug_assert!(low.len() == deg);
        MonicPoly::from_coeffs(self.spec(), low)
    }
}
