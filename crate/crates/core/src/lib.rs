//! Exact desk-scale kernels for character sums over `F_q[T]` and trace
//! distributions on `GL_n(F_q)`.
//!
//! The crate is organised around seven areas:
//!
//! * [`ffield`] — small finite fields `F_q` (`q = p^m`, `p ∈ {2,3,5,7}`), their
//!   extension towers `F_{q^n}`, Frobenius/trace maps, and complex additive
//!   characters `ψ_c`.
//! * [`fpoly`] — monic polynomials over `F_q`: enumeration, factorization,
//!   arithmetic functions (`Λ`, `μ`), power sums of roots `p_k(f)` for signed
//!   big-integer `k`, and the reversal involution `ι`.
//! * [`characters`] — the character families `χ_{k,ψ}(f) = ψ(p_{-k}(f))` and
//!   `ξ_{a,ψ}(f) = ψ(Σ a_i p_i(f))`, Dirichlet/primitivity verification, and
//!   L-function polynomials with their inverse-root power sums.
//! * [`sums`] — exact character sums over `M_{n,q}` with unit/`Λ`/`μ`/`P_GL`
//!   weights, the prime-side and field-side sums behind the symmetry identity,
//!   smooth/rough decompositions, sieve counts, criterion sets and the
//!   saddle-point style degree-`d(χ)` bound.
//! * [`gcdsum`] — cyclotomic values `Φ_n(a)`, multiplicative orders, the sets
//!   `A_p = {n : p | Φ_n(a)}`, and the short log-gcd block sums `B_{L,k}`.
//! * [`glmatrix`] — uniform sampling of `GL_n(F_q)`, characteristic
//!   polynomials, `Tr(g^k)` for big `k`, the exact measure `P_GL` on monic
//!   polynomials and the exact/empirical trace distributions.
//! * [`dist`] — exact-rational probability vectors over `F_q` shared by the
//!   polynomial and matrix distribution code.
//!
//! All randomized entry points take a caller-provided seeded RNG; everything
//! else is deterministic, and complex sums use fixed chunk boundaries so that
//! results are bit-reproducible across runs and worker counts.
//!
//! The crate is `no_std + alloc`; IO, CLI and file formats live in the
//! companion `fqtrace-cli` crate.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod characters;
pub mod dist;
pub mod ffield;
pub mod fpoly;
pub mod gcdsum;
pub mod glmatrix;
pub mod sums;
pub mod util;

use alloc::string::String;
use core::fmt;

/// Hard ceiling on full enumerations: any operation that walks all of
/// `M_{n,q}` or all of `F_{q^n}` first checks `q^n <= ENUM_BUDGET`.
pub const ENUM_BUDGET: u64 = 1 << 26;

/// Errors shared across the crate. Contract violations that a caller can
/// trigger with ordinary inputs are reported as values, never panics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Division by the zero element of a field, or inversion of a
    /// non-invertible matrix/residue.
    DivisionByZero,
    /// `0^e` with `e < 0`.
    ZeroToNegativePower,
    /// Two operands belong to different field specs.
    MismatchedField,
    /// An enumeration of size `q^n` would exceed [`ENUM_BUDGET`].
    BudgetExceeded { q: u64, n: u32 },
    /// `T | f` where the operation needs `f(0) != 0` (negative-index power
    /// sums, the reversal involution, `P_GL` conditioning).
    DividesByT,
    /// A parameter was rejected; the message names the parameter.
    InvalidParameter(String),
    /// Text that does not parse as a polynomial, character descriptor, or
    /// `k`-expression.
    Parse(String),
    /// L-function construction was asked for a principal character (trivial
    /// `ψ`), whose L-function has a pole rather than a polynomial.
    PrincipalCharacter,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::ZeroToNegativePower => write!(f, "zero raised to a negative power"),
            Error::MismatchedField => write!(f, "operands belong to different fields"),
            Error::BudgetExceeded { q, n } => write!(
                f,
                "enumeration of size {q}^{n} exceeds the budget of 2^26 items"
            ),
            Error::DividesByT => write!(f, "operation requires f(0) != 0 but T divides f"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::PrincipalCharacter => {
                write!(f, "principal character has no L-function polynomial")
            }
        }
    }
}

#[cfg(any(test, feature = "std"))]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
