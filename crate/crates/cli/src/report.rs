//! Report assembly: CSV bodies with provenance headers, and the JSON
//! run summary.
//!
//! Every CSV starts with `# key=value` comment lines recording the tool
//! version, the experiment name, the full configuration (as one JSON
//! object), the seed when the experiment consumed one, and the worker
//! count — enough to replay the run exactly. Data rows follow a normal
//! column-header line. Numbers are printed with Rust's shortest-roundtrip
//! formatting, so identical computations produce identical bytes.
//!
//! The JSON summary lists every check the run asserted, with a witness
//! object on failure, and an overall verdict; the process exit code is
//! `0` exactly when all checks passed.

use serde::Serialize;

/// Schema version of the JSON summary document.
pub const SUMMARY_SCHEMA_VERSION: u32 = 1;

/// One asserted identity or inequality.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Replay data for a failure (or occasionally context for a skip);
    /// `null` when there is nothing to point at.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

/// The JSON summary of one experiment run.
#[derive(Debug, Serialize)]
pub struct Summary {
    pub schema_version: u32,
    pub experiment: String,
    pub config: serde_json::Value,
    pub workers: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Summary {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}

/// Accumulates one experiment's outputs: CSV text, checks, and the
/// metadata destined for both the CSV header and the JSON summary.
pub struct Report {
    experiment: String,
    config: serde_json::Value,
    seed: Option<u64>,
    workers: usize,
    columns: String,
    rows: Vec<String>,
    checks: Vec<Check>,
}

impl Report {
    /// Starts a report for `experiment`, serializing `config` verbatim
    /// into the header. `seed` is printed only for seeded experiments.
    pub fn new<C: Serialize>(
        experiment: &str,
        config: &C,
        seed: Option<u64>,
        workers: usize,
        columns: &str,
    ) -> Report {
        Report {
            experiment: experiment.to_string(),
            config: serde_json::to_value(config).expect("config serializes"),
            seed,
            workers,
            columns: columns.to_string(),
            rows: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.rows.push(cells.join(","));
    }

    /// Records a passed/failed check; failures carry a witness for replay.
    pub fn check(&mut self, name: &str, passed: bool, witness: Option<serde_json::Value>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            witness,
        });
    }

    /// Convenience: a check that is an equality/inequality on plain data,
    /// with the witness built only on failure.
    pub fn check_with(
        &mut self,
        name: &str,
        passed: bool,
        witness: impl FnOnce() -> serde_json::Value,
    ) {
        let w = if passed { None } else { Some(witness()) };
        self.check(name, passed, w);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# version={}\n", env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("# experiment={}\n", self.experiment));
        out.push_str(&format!(
            "# config={}\n",
            serde_json::to_string(&self.config).expect("config serializes")
        ));
        if let Some(seed) = self.seed {
            out.push_str(&format!("# seed={seed}\n"));
        }
        out.push_str(&format!("# workers={}\n", self.workers));
        out.push_str(&self.columns);
        out.push('\n');
        for row in &self.rows {
            out.push_str(row);
            out.push('\n');
        }
        out
    }

    pub fn summary(&self) -> Summary {
        Summary {
            schema_version: SUMMARY_SCHEMA_VERSION,
            experiment: self.experiment.clone(),
            config: self.config.clone(),
            workers: self.workers,
            checks: self.checks.clone(),
            passed: self.all_passed(),
        }
    }

    /// Finishes the report, producing `(csv, summary)`.
    pub fn finish(self) -> (String, Summary) {
        let csv = self.csv();
        let summary = self.summary();
        (csv, summary)
    }
}

/// Shortest-roundtrip decimal text for a float (Rust's `Display`), used
/// for every float cell so reruns are byte-identical.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn header_carries_provenance() {
        let mut r = Report::new(
            "demo",
            &json!({"q": 2, "n": "1..3"}),
            Some(7),
            4,
            "n,value",
        );
        r.row(&["1".into(), "0.5".into()]);
        r.check("sanity", true, None);
        let (csv, summary) = r.finish();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], concat!("# version=", env!("CARGO_PKG_VERSION")));
        assert_eq!(lines[1], "# experiment=demo");
        assert_eq!(lines[2], r#"# config={"n":"1..3","q":2}"#);
        assert_eq!(lines[3], "# seed=7");
        assert_eq!(lines[4], "# workers=4");
        assert_eq!(lines[5], "n,value");
        assert_eq!(lines[6], "1,0.5");
        assert!(summary.passed);
        assert_eq!(summary.schema_version, SUMMARY_SCHEMA_VERSION);
    }

    #[test]
    fn failed_checks_sink_the_run_and_keep_witnesses() {
        let mut r = Report::new("demo", &json!({}), None, 1, "a");
        r.check_with("eq", false, || json!({"lhs": 1, "rhs": 2}));
        r.check_with("ok", true, || unreachable!());
        let summary = r.summary();
        assert!(!summary.passed);
        assert_eq!(summary.checks[0].witness, Some(json!({"lhs": 1, "rhs": 2})));
        assert_eq!(summary.checks[1].witness, None);
    }

    #[test]
    fn float_formatting_round_trips() {
        for x in [0.1875, 1.0 / 3.0, 6.02e23, 1e-17, -0.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }
}
