//! The experiment subcommands.
//!
//! Each subcommand parses its flags into a serializable config, runs the
//! corresponding core-module computation (parallelized through
//! [`crate::drivers`] where it pays), and produces a [`RunOutput`]: the
//! CSV body with its provenance header plus the JSON summary of every
//! check asserted along the way.

use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::Subcommand;

use fqtrace_core::ffield::{AdditiveCharacter, FieldSpec};

use crate::report::Summary;

mod appendix_cmd;
mod dist_cmds;
mod gcd_cmds;
mod goldens_cmd;
mod lfunc_cmds;
mod sieve_cmds;
mod sums_cmds;

pub use appendix_cmd::AppendixConfig;
pub use dist_cmds::{LincombConfig, TracedistConfig};
pub use gcd_cmds::GcdsumConfig;
pub use goldens_cmd::GoldensConfig;
pub use lfunc_cmds::{LfuncConfig, WeilcheckConfig};
pub use sieve_cmds::{CritsetConfig, MvcheckConfig, SieveConfig};
pub use sums_cmds::{CharsumConfig, PrimesumConfig, SymcheckConfig};

/// An experiment's rendered outputs.
pub struct RunOutput {
    pub csv: String,
    pub summary: Summary,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Exact character-sum table: |S(n, χ_{k,ψ})|, its q^{−n}
    /// normalization, and the equidistribution-rate column.
    Charsum(CharsumConfig),
    /// Prime (Λ-weighted) sums two ways: polynomial enumeration vs the
    /// field-side trace sum, with the gcd-improved square-root cap.
    Primesum(PrimesumConfig),
    /// Seeded random-exponent trials of the gcd symmetry of prime sums.
    Symcheck(SymcheckConfig),
    /// Square-root cancellation suite: Weil caps, L-degrees, inverse-root
    /// moduli, and the Newton identity between coefficients and prime sums.
    Weilcheck(WeilcheckConfig),
    /// L-function coefficient rows S(n, χ_{k,ψ}) for n = 0..deg L.
    Lfunc(LfuncConfig),
    /// Sieve counts of polynomials avoiding prime-factor degrees: dynamic
    /// program vs brute force, plus the explicit cap at the horizon.
    Sieve(SieveConfig),
    /// Smooth/rough decomposition: partition identity and the explicit
    /// rough-part majorant, on given or randomized (k, S) cases.
    Mvcheck(MvcheckConfig),
    /// Gcd-sum rows B_{L,k} = Σ_{L≤d<2L} ln gcd(k, q^d−1) with the trivial
    /// cap and the normalized ratio.
    Gcdsum(GcdsumConfig),
    /// The criterion degree set {d : gcd(k, q^d−1)³ ≤ q^d} and the
    /// equidistribution rate it certifies.
    Critset(CritsetConfig),
    /// Distribution of Tr(g^k) over uniform invertible matrices (exact
    /// P_GL enumeration or seeded sampling), and of p_k over uniform
    /// monic polynomials, with L1 distances and character-sum caps.
    Tracedist(TracedistConfig),
    /// Distribution of Σ a_i·Tr(g^i) with its character-sum cap.
    Lincomb(LincombConfig),
    /// Saddle-style exponent cap on |S(n,χ)| for large L-degree, checked
    /// against the exact sum when the radius is in the proof's regime.
    Appendix(AppendixConfig),
    /// Generate or byte-verify the pinned regression CSVs.
    Goldens(GoldensConfig),
}

/// Runs one experiment. `workers` is recorded in the output header; the
/// computation itself is deterministic at any worker count.
pub fn run(cmd: &Command, workers: usize) -> Result<RunOutput> {
    match cmd {
        Command::Charsum(c) => sums_cmds::charsum(c, workers),
        Command::Primesum(c) => sums_cmds::primesum(c, workers),
        Command::Symcheck(c) => sums_cmds::symcheck(c, workers),
        Command::Weilcheck(c) => lfunc_cmds::weilcheck(c, workers),
        Command::Lfunc(c) => lfunc_cmds::lfunc(c, workers),
        Command::Sieve(c) => sieve_cmds::sieve(c, workers),
        Command::Mvcheck(c) => sieve_cmds::mvcheck(c, workers),
        Command::Gcdsum(c) => gcd_cmds::gcdsum(c, workers),
        Command::Critset(c) => sieve_cmds::critset(c, workers),
        Command::Tracedist(c) => dist_cmds::tracedist(c, workers),
        Command::Lincomb(c) => dist_cmds::lincomb(c, workers),
        Command::Appendix(c) => appendix_cmd::appendix(c, workers),
        Command::Goldens(c) => goldens_cmd::goldens(c, workers),
    }
}

/// Parses an inclusive degree range: `"4..14"` or a single `"7"`.
pub(crate) fn parse_range(s: &str) -> Result<(usize, usize)> {
    let parse_one = |t: &str| {
        t.trim()
            .parse::<usize>()
            .with_context(|| format!("bad degree {t:?}"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse_one(a)?, parse_one(b)?),
        None => {
            let v = parse_one(s)?;
            (v, v)
        }
    };
    if lo > hi {
        bail!("empty degree range {s:?}");
    }
    Ok((lo, hi))
}

/// Parses a comma-separated list of positive integers (`"1,2,5"`); an
/// empty string is the empty list.
pub(crate) fn parse_members(s: &str) -> Result<Vec<usize>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .with_context(|| format!("bad list entry {t:?}"))
        })
        .collect()
}

/// Parses a comma-separated coefficient vector (`"1,0,1"`).
pub(crate) fn parse_coeffs(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .with_context(|| format!("bad coefficient {t:?}"))
        })
        .collect()
}

pub(crate) fn field(q: u64) -> Result<Arc<FieldSpec>> {
    FieldSpec::from_cardinality(q).with_context(|| format!("unsupported field cardinality {q}"))
}

/// The additive character for `--psi`; index 0 (the trivial character) is
/// rejected since every experiment here needs a nontrivial one.
pub(crate) fn nontrivial_psi(spec: &Arc<FieldSpec>, idx: u64) -> Result<AdditiveCharacter> {
    if idx == 0 {
        bail!("--psi 0 is the trivial character; pick 1..{}", spec.q() - 1);
    }
    Ok(AdditiveCharacter::by_index(spec, idx)?)
}
