//! `tracedist` and `lincomb`: distributions of trace statistics over the
//! invertible matrices and of power sums over monic polynomials, with
//! their character-sum caps on the distance from uniform.

use anyhow::{bail, Result};
use clap::Args;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use fqtrace_core::dist::{Provenance, TraceDistribution};
use fqtrace_core::glmatrix::{
    exact_trace_distribution, linear_combination_distribution, single_power_chain_bound, DistMode,
};
use fqtrace_core::sums::powersum_distribution;

use crate::drivers::empirical_trace_counts_par;
use crate::kexpr::parse_k;
use crate::report::{fmt_f64, Report};

use super::{field, parse_coeffs, parse_range, RunOutput};

const TOL: f64 = 1e-9;

fn fmt_masses(dist: &TraceDistribution) -> String {
    dist.masses()
        .iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn fmt_point_mass(dist: &TraceDistribution) -> String {
    dist.point_mass().map(|i| i.to_string()).unwrap_or_default()
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct TracedistConfig {
    /// Field cardinality q.
    #[arg(long)]
    pub q: u64,
    /// Inclusive range of matrix sizes, e.g. "4..14" or a single "8".
    #[arg(long)]
    pub n: String,
    /// Exponent k: decimal or an expression over factors (q^i-1).
    #[arg(long)]
    pub k: String,
    /// "exact" enumerates; "empirical" samples invertible matrices.
    #[arg(long, default_value = "exact")]
    pub mode: String,
    /// Which statistic: "gl" (matrix traces), "poly" (power sums), "both".
    #[arg(long, default_value = "gl")]
    pub side: String,
    /// Sample count for empirical mode.
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    /// Seed for empirical mode.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Distribution of `Tr(g^k)` for uniform `g` in the invertible matrices
/// (side `gl`) and of the power sum `p_k(f)` for uniform monic `f` (side
/// `poly`), with the unhalved L1 distance from uniform and its
/// character-sum cap. In exact mode the cap is asserted; empirical masses
/// carry sampling noise, so there it is only reported.
pub fn tracedist(cfg: &TracedistConfig, workers: usize) -> Result<RunOutput> {
    let spec = field(cfg.q)?;
    let k = parse_k(&cfg.k, cfg.q)?;
    if k.is_zero() {
        bail!("k must be ≥ 1");
    }
    let k_int = BigInt::from(k.clone());
    let (lo, hi) = parse_range(&cfg.n)?;
    if lo == 0 {
        bail!("matrix size must be ≥ 1");
    }
    let exact = match cfg.mode.as_str() {
        "exact" => true,
        "empirical" => false,
        other => bail!("unknown mode {other:?}; use \"exact\" or \"empirical\""),
    };
    let (do_gl, do_poly) = match cfg.side.as_str() {
        "gl" => (true, false),
        "poly" => (false, true),
        "both" => (true, true),
        other => bail!("unknown side {other:?}; use \"gl\", \"poly\", or \"both\""),
    };
    if !exact && do_poly {
        bail!("empirical mode samples matrices; the polynomial side is exact-only");
    }
    if !exact && cfg.samples == 0 {
        bail!("empirical mode needs --samples ≥ 1");
    }

    let seed = (!exact).then_some(cfg.seed);
    let mut report = Report::new(
        "tracedist",
        cfg,
        seed,
        workers,
        "n,side,provenance,l1,bound,point_mass,masses",
    );
    let mut gl_bad = None;
    let mut poly_bad = None;
    for n in lo..=hi {
        if do_gl {
            let dist = if exact {
                exact_trace_distribution(&spec, n, &k_int)?
            } else {
                let counts = empirical_trace_counts_par(&spec, n, &k_int, cfg.samples, cfg.seed)?;
                TraceDistribution::from_counts(&spec, &counts, Provenance::Empirical)?
            };
            let l1 = dist.l1_distance();
            let bound = single_power_chain_bound(&spec, n, &k)?;
            if exact && l1 > bound * (1.0 + TOL) + TOL && gl_bad.is_none() {
                gl_bad = Some(json!({"n": n, "l1": l1, "bound": bound}));
            }
            report.row(&[
                n.to_string(),
                "gl".into(),
                dist.provenance().token().into(),
                fmt_f64(l1),
                fmt_f64(bound),
                fmt_point_mass(&dist),
                fmt_masses(&dist),
            ]);
        }
        if do_poly {
            let ps = powersum_distribution(&spec, n, &k)?;
            if ps.l1 > ps.xi_bound * (1.0 + TOL) + TOL && poly_bad.is_none() {
                poly_bad = Some(json!({"n": n, "l1": ps.l1, "bound": ps.xi_bound}));
            }
            report.row(&[
                n.to_string(),
                "poly".into(),
                ps.dist.provenance().token().into(),
                fmt_f64(ps.l1),
                fmt_f64(ps.xi_bound),
                fmt_point_mass(&ps.dist),
                fmt_masses(&ps.dist),
            ]);
        }
    }
    if do_gl && exact {
        report.check("gl_l1_within_chain_bound", gl_bad.is_none(), gl_bad);
    }
    if do_poly {
        report.check("poly_l1_within_xi_bound", poly_bad.is_none(), poly_bad);
    }
    let (csv, summary) = report.finish();
    Ok(RunOutput { csv, summary })
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct LincombConfig {
    /// Field cardinality q.
    #[arg(long)]
    pub q: u64,
    /// Inclusive range of matrix sizes, e.g. "2..6" or a single "4".
    #[arg(long)]
    pub n: String,
    /// Coefficients a_1,…,a_m of Σ a_i Tr(g^i), comma-separated, each < q.
    #[arg(long)]
    pub a: String,
    /// "exact" enumerates; "empirical" samples invertible matrices.
    #[arg(long, default_value = "exact")]
    pub mode: String,
    /// Sample count for empirical mode.
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    /// Seed for empirical mode.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Distribution of the linear statistic `Σ_i a_i Tr(g^i)` for uniform
/// invertible `g`, with the chain bound on its L1 distance from uniform.
pub fn lincomb(cfg: &LincombConfig, workers: usize) -> Result<RunOutput> {
    let spec = field(cfg.q)?;
    let a = parse_coeffs(&cfg.a)?;
    let (lo, hi) = parse_range(&cfg.n)?;
    if lo == 0 {
        bail!("matrix size must be ≥ 1");
    }
    let mode = match cfg.mode.as_str() {
        "exact" => DistMode::Exact,
        "empirical" => {
            if cfg.samples == 0 {
                bail!("empirical mode needs --samples ≥ 1");
            }
            DistMode::Empirical {
                samples: cfg.samples,
                seed: cfg.seed,
            }
        }
        other => bail!("unknown mode {other:?}; use \"exact\" or \"empirical\""),
    };
    let exact = matches!(mode, DistMode::Exact);

    let seed = (!exact).then_some(cfg.seed);
    let mut report = Report::new(
        "lincomb",
        cfg,
        seed,
        workers,
        "n,l1,chain_bound,point_mass,masses",
    );
    let mut bad = None;
    for n in lo..=hi {
        let rep = linear_combination_distribution(&spec, n, &a, mode)?;
        if exact && rep.l1 > rep.chain_bound * (1.0 + TOL) + TOL && bad.is_none() {
            bad = Some(json!({"n": n, "l1": rep.l1, "bound": rep.chain_bound}));
        }
        report.row(&[
            n.to_string(),
            fmt_f64(rep.l1),
            fmt_f64(rep.chain_bound),
            fmt_point_mass(&rep.dist),
            fmt_masses(&rep.dist),
        ]);
    }
    if exact {
        report.check("l1_within_chain_bound", bad.is_none(), bad);
    }
    let (csv, summary) = report.finish();
    Ok(RunOutput { csv, summary })
}
