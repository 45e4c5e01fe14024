//! `weilcheck` and `lfunc`: L-functions of the power-trace characters,
//! square-root cancellation caps, and the Newton identity tying L
//! coefficients to prime sums.

use anyhow::Result;
use clap::Args;
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::json;

use fqtrace_core::characters::{build_lfunction, CharacterFn, PowerTraceCharacter};
use fqtrace_core::sums::{Weight, WeightTable};

use crate::drivers::char_sum_par;
use crate::kexpr::parse_k;
use crate::report::{fmt_f64, Report};

use super::{field, nontrivial_psi, RunOutput};

const TOL: f64 = 1e-9;
const ROOT_TOL: f64 = 1e-6;

/// Whether every inverse root has modulus `1` or `√q` (Weil), within the
/// root-finder's tolerance.
fn roots_on_weil_circles(roots: &[num_complex::Complex64], q: u64) -> bool {
    let sq = (q as f64).sqrt();
    roots
        .iter()
        .all(|g| (g.norm() - 1.0).abs() < ROOT_TOL || (g.norm() - sq).abs() < ROOT_TOL)
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct WeilcheckConfig {
    /// Field cardinality q.
    #[arg(long)]
    pub q: u64,
    /// Check every exponent k = 1..=kmax.
    #[arg(long, default_value_t = 8)]
    pub kmax: u64,
    /// Check every degree n = 1..=nmax.
    #[arg(long, default_value_t = 12)]
    pub nmax: usize,
}

/// For every nontrivial ψ and every `k ≤ kmax`: the L-function degree is
/// at most `k`, the inverse roots sit on the Weil circles, the prime sums
/// obey `|Σ Λχ| ≤ q^{n/2}·deg L`, and `Σ_{M_n} Λ(f)χ(f) = −Σ_i γ_i^n`
/// (checked through the coefficient recurrence) for every `n ≤ nmax`.
pub fn weilcheck(cfg: &WeilcheckConfig, workers: usize) -> Result<RunOutput> {
    let spec = field(cfg.q)?;
    let q = cfg.q as f64;
    // Λ weights per degree, shared across every (ψ, k) pair.
    let tables: Vec<WeightTable> = (1..=cfg.nmax)
        .map(|n| WeightTable::build(&spec, n, Weight::VonMangoldt))
        .collect::<fqtrace_core::Result<_>>()?;

    let mut report = Report::new(
        "weilcheck",
        cfg,
        None,
        workers,
        "psi,k,n,re,im,abs,cap,degree,roots_ok,newton_delta",
    );
    let mut weil_bad = None;
    let mut degree_bad = None;
    let mut roots_bad = None;
    let mut newton_bad = None;
    for psi in fqtrace_core::ffield::AdditiveCharacter::nontrivial(&spec) {
        let psi_idx = psi.twist_index();
        for k in 1..=cfg.kmax {
            let chi = PowerTraceCharacter::new(psi.clone(), BigUint::from(k))?;
            let modulus = chi.modulus_degree().expect("k fits in memory");
            let lpoly = build_lfunction(&chi, modulus)?;
            let degree = lpoly.degree();
            if degree as u64 > k && degree_bad.is_none() {
                degree_bad = Some(json!({"psi": psi_idx, "k": k, "degree": degree}));
            }
            let roots_ok = roots_on_weil_circles(&lpoly.inverse_roots(), cfg.q);
            if !roots_ok && roots_bad.is_none() {
                let moduli: Vec<f64> = lpoly.inverse_roots().iter().map(|g| g.norm()).collect();
                roots_bad = Some(json!({"psi": psi_idx, "k": k, "moduli": moduli}));
            }
            let newton = lpoly.inverse_root_power_sums(cfg.nmax);
            for n in 1..=cfg.nmax {
                let lam = char_sum_par(&chi, n, Weight::VonMangoldt, Some(&tables[n - 1]))?;
                let abs = lam.value.norm();
                let cap = q.powf(n as f64 / 2.0) * degree as f64;
                if abs > cap + TOL && weil_bad.is_none() {
                    weil_bad = Some(json!({"psi": psi_idx, "k": k, "n": n, "abs": abs, "cap": cap}));
                }
                let delta = (lam.value + newton[n - 1]).norm();
                if delta > TOL && newton_bad.is_none() {
                    newton_bad = Some(json!({"psi": psi_idx, "k": k, "n": n, "delta": delta}));
                }
                report.row(&[
                    psi_idx.to_string(),
                    k.to_string(),
                    n.to_string(),
                    fmt_f64(lam.value.re),
                    fmt_f64(lam.value.im),
                    fmt_f64(abs),
                    fmt_f64(cap),
                    degree.to_string(),
                    u64::from(roots_ok).to_string(),
                    fmt_f64(delta),
                ]);
            }
        }
    }
    report.check("weil_cap", weil_bad.is_none(), weil_bad);
    report.check("l_degree_at_most_k", degree_bad.is_none(), degree_bad);
    report.check("root_moduli_weil", roots_bad.is_none(), roots_bad);
    report.check("newton_prime_sums", newton_bad.is_none(), newton_bad);
    let (csv, summary) = report.finish();
    Ok(RunOutput { csv, summary })
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct LfuncConfig {
    /// Field cardinality q.
    #[arg(long)]
    pub q: u64,
    /// Exponent k: decimal or an expression over factors (q^i-1).
    #[arg(long)]
    pub k: String,
    /// Additive character index, 1..q-1.
    #[arg(long, default_value_t = 1)]
    pub psi: u64,
}

/// Coefficient rows `(n, Re S(n,χ), Im S(n,χ))` of `L(u, χ_{k,ψ})`, with
/// the degree cap, Weil root moduli, and (in characteristic 2) the exact
/// integer channel checked against the complex one.
pub fn lfunc(cfg: &LfuncConfig, workers: usize) -> Result<RunOutput> {
    let spec = field(cfg.q)?;
    let k = parse_k(&cfg.k, cfg.q)?;
    let psi = nontrivial_psi(&spec, cfg.psi)?;
    // The run enumerates q^(k+1) polynomials; refuse unpayable exponents
    // up front instead of discovering the budget midway.
    let k_small = u64::try_from(&k).ok().filter(|&v| v <= 25).ok_or_else(|| {
        anyhow::anyhow!("lfunc enumerates q^(k+1) terms; k = {k} is out of budget")
    })?;
    let chi = PowerTraceCharacter::new(psi, k.clone())?;
    let modulus = chi.modulus_degree().expect("k ≤ 25");
    let lpoly = build_lfunction(&chi, modulus)?;

    let mut report = Report::new("lfunc", cfg, None, workers, "n,re,im");
    for (n, c) in lpoly.coeffs().iter().enumerate() {
        report.row(&[n.to_string(), fmt_f64(c.re), fmt_f64(c.im)]);
    }
    report.check_with("degree_at_most_k", lpoly.degree() as u64 <= k_small, || {
        json!({"degree": lpoly.degree(), "k": k_small})
    });
    let roots_ok = roots_on_weil_circles(&lpoly.inverse_roots(), cfg.q);
    report.check_with("root_moduli_weil", roots_ok, || {
        json!({"moduli": lpoly.inverse_roots().iter().map(|g| g.norm()).collect::<Vec<_>>()})
    });
    if let Some(ints) = lpoly.coeffs_int() {
        let close = lpoly
            .coeffs()
            .iter()
            .zip(ints)
            .all(|(c, &i)| (c - num_complex::Complex64::new(i as f64, 0.0)).norm() < TOL);
        report.check_with("integer_channel", close, || {
            json!({"ints": ints, "coeffs": lpoly.coeffs().iter().map(|c| c.re).collect::<Vec<_>>()})
        });
    }
    let (csv, summary) = report.finish();
    Ok(RunOutput { csv, summary })
}
