//! Command-line experiments over `fqtrace-core`.
//!
//! The core crate computes; this crate drives. Each subcommand in
//! [`commands`] binds flags to a serializable config, fans the heavy
//! enumerations out over a thread pool ([`drivers`]), and renders a CSV
//! with a provenance header plus a JSON summary of the checks it asserted
//! ([`report`]). Exponents on the command line accept closed-form
//! expressions such as `prod(q^i-1,i=1..4)*64` ([`kexpr`]), since the
//! interesting `k` are far too large to type in decimal.
//!
//! Determinism is the load-bearing contract: enumeration windows fold in
//! a canonical order and sampling derives from (seed, block) pairs, so a
//! config reproduces its CSV byte-for-byte at any worker count. The
//! `goldens` subcommand holds a pinned suite to that promise.

pub mod commands;
pub mod drivers;
pub mod kexpr;
pub mod report;
