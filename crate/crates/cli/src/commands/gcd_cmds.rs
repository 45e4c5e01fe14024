//! `gcdsum`: dyadic gcd sums `B_{L,k}` against their trivial cap.

use anyhow::{bail, Result};
use clap::Args;
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use fqtrace_core::gcdsum::{blk, blk_ratio, blk_trivial_cap};

use crate::kexpr::parse_k;
use crate::report::{fmt_f64, Report};

use super::{field, parse_range, RunOutput};

const TOL: f64 = 1e-9;

#[derive(Args, Serialize, Debug, Clone)]
pub struct GcdsumConfig {
    /// Field cardinality q.
    #[arg(long)]
    pub q: u64,
    /// Exponent k: decimal or an expression over factors (q^i-1).
    #[arg(long)]
    pub k: String,
    /// Inclusive range of L values, e.g. "1..16" or a single "12".
    #[arg(long, default_value = "1..16")]
    pub l: String,
}

/// Tabulates the dyadic gcd sums `B_{L,k} = Σ_{L ≤ d < 2L} ln gcd(k, q^d−1)`
/// next to the trivial cap `L·min(ln k, 2L·ln q)` and the normalized ratio
/// `B_{L,k} / (L·√(ln k · ln q))` that the refined bound keeps `O(1)`.
pub fn gcdsum(cfg: &GcdsumConfig, workers: usize) -> Result<RunOutput> {
    field(cfg.q)?;
    let k = parse_k(&cfg.k, cfg.q)?;
    if k.is_zero() {
        bail!("k must be ≥ 1");
    }
    let (lo, hi) = parse_range(&cfg.l)?;
    if lo == 0 {
        bail!("L must be ≥ 1");
    }

    let mut report = Report::new("gcdsum", cfg, None, workers, "L,b,cap,ratio");
    let mut cap_bad = None;
    for l in lo..=hi {
        let l = l as u64;
        let b = blk(l, &k, cfg.q)?;
        let cap = blk_trivial_cap(l, &k, cfg.q);
        let ratio = blk_ratio(l, &k, cfg.q)?;
        let ok = b <= cap * (1.0 + TOL) + TOL;
        if !ok && cap_bad.is_none() {
            cap_bad = Some(json!({"L": l, "b": b, "cap": cap}));
        }
        report.row(&[
            l.to_string(),
            fmt_f64(b),
            fmt_f64(cap),
            ratio.map(fmt_f64).unwrap_or_default(),
        ]);
    }
    report.check("trivial_cap", cap_bad.is_none(), cap_bad);
    let (csv, summary) = report.finish();
    Ok(RunOutput { csv, summary })
}
