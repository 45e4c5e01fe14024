//! `sieve`, `mvcheck`, and `critset`: counts of polynomials avoiding
//! prime-factor degrees, the smooth/rough decomposition, and the
//! criterion degree set with its equidistribution rate.

use anyhow::{bail, Result};
use clap::Args;
use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use fqtrace_core::characters::PowerTraceCharacter;
use fqtrace_core::glmatrix::sampler_rng;
use fqtrace_core::sums::{
    crit_set, mv_bound_terms, mv_decompose, prop_crit_rhs, sieve_brute, sieve_inequality,
    sieve_profile, DegreeSet, Weight,
};
use fqtrace_core::util::{ceil_log, gcd_with_q_pow_minus_one};

use crate::drivers::char_sum_par;
use crate::kexpr::parse_k;
use crate::report::{fmt_f64, Report};

use super::{field, nontrivial_psi, parse_members, RunOutput};

const TOL: f64 = 1e-9;

/// Degree sets are printed semicolon-joined (`"1;2;5"`) to stay inside
/// one CSV cell.
fn fmt_members(members: &[usize]) -> String {
    members
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct SieveConfig {
    /// Field cardinality q.
    #[arg(long)]
    pub q: u64,
    /// Horizon degree n.
    #[arg(long)]
    pub n: usize,
    /// Excluded prime-factor degrees, comma-separated (e.g. "1,2").
    #[arg(long, default_value = "")]
    pub s: String,
}

/// The profile `A_0..A_n` of counts of monic polynomials with no prime
/// factor of degree in `S`, from the dynamic program, next to brute-force
/// recounts, with the explicit horizon cap
/// `A_n ≤ n^{−1} q^n (F(1/q) + 5)`.
pub fn sieve(cfg: &SieveConfig, workers: usize) -> Result<RunOutput> {
    let spec = field(cfg.q)?;
    let members = parse_members(&cfg.s)?;
    if cfg.n == 0 {
        bail!("sieve needs n ≥ 1");
    }
    let s = DegreeSet::new(cfg.n, &members)?;
    let profile = sieve_profile(&spec, &s);

    let mut report = Report::new("sieve", cfg, None, workers, "d,dp,brute,equal");
    let mut mismatch = None;
    for (d, dp) in profile.iter().enumerate() {
        // Brute force re-enumerates M_d; stay inside a sane budget. Degree 0
        // is the lone constant 1, which vacuously has no prime factors.
        let payable = (cfg.q as u128).checked_pow(d as u32).is_some_and(|c| c <= 1 << 20);
        let (brute_cell, equal_cell) = if d == 0 {
            ("1".into(), u64::from(*dp == BigUint::from(1u32)).to_string())
        } else if payable {
            let restricted: Vec<usize> = members.iter().copied().filter(|&m| m <= d).collect();
            let sd = DegreeSet::new(d, &restricted)?;
            let brute = sieve_brute(&spec, d, &sd)?;
            let equal = *dp == BigUint::from(brute);
            if !equal && mismatch.is_none() {
                mismatch = Some(json!({"d": d, "dp": dp.to_string(), "brute": brute}));
            }
            (brute.to_string(), u64::from(equal).to_string())
        } else {
            (String::new(), String::new())
        };
        report.row(&[d.to_string(), dp.to_string(), brute_cell, equal_cell]);
    }
    report.check("dp_equals_brute", mismatch.is_none(), mismatch);
    let cmp = sieve_inequality(&spec, cfg.n, &s)?;
    report.check_with("horizon_cap", cmp.holds(), || {
        json!({"a_n": cmp.a_n.to_string(), "f_value": cmp.f_value, "cap": cmp.cap})
    });
    let (csv, summary) = report.finish();
    Ok(RunOutput { csv, summary })
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct MvcheckConfig {
    /// Field cardinality q.
    #[arg(long)]
    pub q: u64,
    /// Degree n of the decomposed sum.
    #[arg(long)]
    pub n: usize,
    /// Explicit exponent k (with --s); omit for seeded random cases.
    #[arg(long)]
    pub k: Option<String>,
    /// Explicit degree set, comma-separated (with --k).
    #[arg(long)]
    pub s: Option<String>,
    /// Number of random (k, ψ, S) cases when --k/--s are omitted.
    #[arg(long, default_value_t = 50)]
    pub trials: u64,
    /// Seed for the random cases.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Additive character index for the explicit case.
    #[arg(long, default_value_t = 1)]
    pub psi: u64,
}

/// Splits `S(n, χ_{k,ψ})` into the parts with and without a prime factor
/// of degree in `S`, checking that the split is a partition and that the
/// rough part obeys its fully explicit majorant.
pub fn mvcheck(cfg: &MvcheckConfig, workers: usize) -> Result<RunOutput> {
    let spec = field(cfg.q)?;
    if cfg.n == 0 {
        bail!("mvcheck needs n ≥ 1");
    }
    if cfg.n > 60 {
        bail!("mvcheck degree set generation tops out at n = 60");
    }
    // Assemble the (k, psi index, members) cases.
    let mut cases: Vec<(BigUint, u64, Vec<usize>)> = Vec::new();
    match (&cfg.k, &cfg.s) {
        (Some(k), Some(s)) => {
            let k = parse_k(k, cfg.q)?;
            if k.is_zero() {
                bail!("k must be ≥ 1");
            }
            cases.push((k, cfg.psi, parse_members(s)?));
        }
        (None, None) => {
            if cfg.trials == 0 {
                bail!("random mode needs --trials ≥ 1");
            }
            let mut rng = sampler_rng(cfg.seed, 0);
            for _ in 0..cfg.trials {
                let k = BigUint::from(rng.gen::<u64>().max(1));
                let psi = 1 + rng.gen_range(0..cfg.q - 1);
                let mask = rng.gen::<u64>() & ((1u64 << cfg.n) - 1);
                let members: Vec<usize> =
                    (1..=cfg.n).filter(|d| mask >> (d - 1) & 1 == 1).collect();
                cases.push((k, psi, members));
            }
        }
        _ => bail!("--k and --s go together; omit both for random cases"),
    }

    let seed = matches!((&cfg.k, &cfg.s), (None, None)).then_some(cfg.seed);
    let mut report = Report::new(
        "mvcheck",
        cfg,
        seed,
        workers,
        "case,k,psi,s,smooth_re,smooth_im,rough_re,rough_im,delta,rough_abs,majorant,pass",
    );
    let mut partition_bad = None;
    let mut majorant_bad = None;
    for (case, (k, psi_idx, members)) in cases.iter().enumerate() {
        let s = DegreeSet::new(cfg.n, members)?;
        let psi = nontrivial_psi(&spec, *psi_idx)?;
        let chi = PowerTraceCharacter::new(psi, k.clone())?;
        let (smooth, rough) = mv_decompose(&chi, cfg.n, &s)?;
        let whole = char_sum_par(&chi, cfg.n, Weight::Unit, None)?.value;
        let delta = (smooth + rough - whole).norm();
        let majorant = mv_bound_terms(&chi, cfg.n, &s, None)?.majorant;
        let rough_abs = rough.norm();
        let partition_ok = delta < TOL;
        let majorant_ok = rough_abs <= majorant * (1.0 + TOL) + TOL;
        let witness = || {
            json!({
                "case": case,
                "k": k.to_string(),
                "psi": psi_idx,
                "s": members,
            })
        };
        if !partition_ok && partition_bad.is_none() {
            partition_bad = Some(witness());
        }
        if !majorant_ok && majorant_bad.is_none() {
            majorant_bad = Some(witness());
        }
        report.row(&[
            case.to_string(),
            k.to_string(),
            psi_idx.to_string(),
            fmt_members(members),
            fmt_f64(smooth.re),
            fmt_f64(smooth.im),
            fmt_f64(rough.re),
            fmt_f64(rough.im),
            fmt_f64(delta),
            fmt_f64(rough_abs),
            fmt_f64(majorant),
            u64::from(partition_ok && majorant_ok).to_string(),
        ]);
    }
    report.check("partition_identity", partition_bad.is_none(), partition_bad);
    report.check("rough_majorant", majorant_bad.is_none(), majorant_bad);
    let (csv, summary) = report.finish();
    Ok(RunOutput { csv, summary })
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct CritsetConfig {
    /// Field cardinality q.
    #[arg(long)]
    pub q: u64,
    /// Horizon degree n.
    #[arg(long)]
    pub n: usize,
    /// Exponent k: decimal or an expression over factors (q^i-1).
    #[arg(long)]
    pub k: String,
}

/// The criterion set `{m ≤ d ≤ n : gcd(k, q^d−1)³ ≤ q^d}` — per-degree
/// gcd rows with membership flags — and the equidistribution rate
/// `n^{−1} + exp(−Σ_{d∈S} 1/d)` it certifies.
pub fn critset(cfg: &CritsetConfig, workers: usize) -> Result<RunOutput> {
    field(cfg.q)?;
    let k = parse_k(&cfg.k, cfg.q)?;
    if k.is_zero() {
        bail!("k must be ≥ 1");
    }
    if cfg.n == 0 {
        bail!("critset needs n ≥ 1");
    }
    let s = crit_set(&k, cfg.q, cfg.n)?;
    let m = ceil_log(cfg.q, &BigUint::from(cfg.n as u64).pow(12)).max(1);

    let mut report = Report::new("critset", cfg, None, workers, "d,gcd,member");
    for d in 1..=cfg.n {
        let g = gcd_with_q_pow_minus_one(&k, cfg.q, d as u64);
        report.row(&[
            d.to_string(),
            g.to_string(),
            u64::from(s.contains(d)).to_string(),
        ]);
    }
    let rhs = if cfg.n >= 2 {
        Some(prop_crit_rhs(&k, cfg.q, cfg.n)?)
    } else {
        None
    };
    report.check(
        "criterion_set",
        true,
        Some(json!({
            "scan_start": m,
            "members": s.members(),
            "rate": rhs,
        })),
    );
    let (csv, summary) = report.finish();
    Ok(RunOutput { csv, summary })
}
