//! `goldens`: generate or byte-verify the pinned regression CSVs.
//!
//! Every experiment folds enumeration windows in a canonical order and
//! derives randomness from (seed, block) pairs, so its CSV is a pure
//! function of the config. The golden suite freezes a handful of such
//! outputs — seeded sampling runs, the long equidistribution trend, and a
//! gcd-sum table — and re-runs them bit-for-bit. The suite always executes
//! on a private thread pool with a pinned worker count so the recorded
//! `# workers=` header never drifts.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use clap::Args;
use serde::Serialize;
use serde_json::json;

use crate::report::Report;

use super::{
    run, Command, GcdsumConfig, LfuncConfig, RunOutput, SymcheckConfig, TracedistConfig,
};

/// Worker count recorded in every golden header.
const GOLDEN_WORKERS: usize = 4;

/// The pinned suite. Names are stable; configs must never change without
/// regenerating the files.
fn golden_suite() -> Vec<(&'static str, Command)> {
    vec![
        (
            "symcheck_q2_n10.csv",
            Command::Symcheck(SymcheckConfig {
                q: 2,
                n: 10,
                trials: 50,
                seed: 7,
                psi: 1,
            }),
        ),
        (
            "tracedist_gl_q2_n4_emp.csv",
            Command::Tracedist(TracedistConfig {
                q: 2,
                n: "4".into(),
                k: "prod(q^i-1,i=1..4)*64".into(),
                mode: "empirical".into(),
                side: "gl".into(),
                samples: 1000,
                seed: 11,
            }),
        ),
        (
            "tracedist_gl_q3_n3_emp.csv",
            Command::Tracedist(TracedistConfig {
                q: 3,
                n: "3".into(),
                k: "prod(q^i-1,i=1..3)*27".into(),
                mode: "empirical".into(),
                side: "gl".into(),
                samples: 1000,
                seed: 11,
            }),
        ),
        (
            "tracedist_trend_q2.csv",
            Command::Tracedist(TracedistConfig {
                q: 2,
                n: "4..14".into(),
                k: "18446744073709551629".into(),
                mode: "exact".into(),
                side: "both".into(),
                samples: 1000,
                seed: 0,
            }),
        ),
        (
            "gcdsum_q2.csv",
            Command::Gcdsum(GcdsumConfig {
                q: 2,
                k: "prod(q^i-1,i=1..10)".into(),
                l: "1..16".into(),
            }),
        ),
        (
            "lfunc_q2_k1.csv",
            Command::Lfunc(LfuncConfig {
                q: 2,
                k: "1".into(),
                psi: 1,
            }),
        ),
    ]
}

/// First line where two renderings differ, for mismatch witnesses.
fn first_diff(old: &str, new: &str) -> serde_json::Value {
    let clip = |s: &str| s.chars().take(120).collect::<String>();
    for (i, (a, b)) in old.lines().zip(new.lines()).enumerate() {
        if a != b {
            return json!({"line": i + 1, "committed": clip(a), "recomputed": clip(b)});
        }
    }
    json!({
        "line": old.lines().count().min(new.lines().count()) + 1,
        "committed_lines": old.lines().count(),
        "recomputed_lines": new.lines().count(),
    })
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct GoldensConfig {
    /// Directory holding the golden CSVs.
    #[arg(long, default_value = "goldens")]
    pub dir: String,
    /// Write the files instead of verifying them.
    #[arg(long)]
    pub generate: bool,
}

/// Re-runs the pinned suite and byte-compares each CSV against the copy
/// in `--dir` (or rewrites the copies with `--generate`).
pub fn goldens(cfg: &GoldensConfig, workers: usize) -> Result<RunOutput> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(GOLDEN_WORKERS)
        .build()
        .context("building the pinned golden thread pool")?;
    let dir = Path::new(&cfg.dir);
    if cfg.generate {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }

    let mut report = Report::new("goldens", cfg, None, workers, "name,status");
    for (name, cmd) in golden_suite() {
        let fresh = pool
            .install(|| run(&cmd, GOLDEN_WORKERS))
            .with_context(|| format!("recomputing {name}"))?;
        if !fresh.summary.passed {
            report.row(&[name.into(), "failed_checks".into()]);
            report.check(name, false, Some(json!({"summary_passed": false})));
            continue;
        }
        let path = dir.join(name);
        if cfg.generate {
            fs::write(&path, &fresh.csv).with_context(|| format!("writing {}", path.display()))?;
            report.row(&[name.into(), "written".into()]);
            report.check(name, true, None);
        } else {
            match fs::read_to_string(&path) {
                Ok(committed) if committed == fresh.csv => {
                    report.row(&[name.into(), "match".into()]);
                    report.check(name, true, None);
                }
                Ok(committed) => {
                    report.row(&[name.into(), "mismatch".into()]);
                    report.check(name, false, Some(first_diff(&committed, &fresh.csv)));
                }
                Err(e) => {
                    report.row(&[name.into(), "missing".into()]);
                    report.check(name, false, Some(json!({"error": e.to_string()})));
                }
            }
        }
    }
    let (csv, summary) = report.finish();
    Ok(RunOutput { csv, summary })
}
