//! One PASS/FAIL line per acceptance criterion. Exits nonzero on any failure
//! not listed in `KNOWN_FAILURES`, or when a listed failure starts passing.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qjunction_cli::validate::{self, Check};

/// Sub-checks that fail with the physics as implemented; see the README.
const KNOWN_FAILURES: &[&str] = &["rabi_usc_maximum"];

struct Criterion {
    id: u32,
    checks: Vec<Check>,
    budget: Option<Duration>,
}

impl Criterion {
    fn new(id: u32, checks: Vec<Check>, budget_s: Option<f64>) -> Self {
        Self {
            id,
            checks,
            budget: budget_s.map(Duration::from_secs_f64),
        }
    }

    fn within_budget(&self, c: &Check) -> bool {
        self.budget.is_none_or(|b| c.elapsed <= b)
    }

    fn passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.passed && self.within_budget(c))
    }
}

fn determinism() -> Check {
    let start = Instant::now();
    let result = (|| -> Result<(bool, String), String> {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let cfg = dir.path().join("resonance.toml");
        std::fs::write(
            &cfg,
            r#"
[model]
kind = "rabi"
epsilon = 0.6
delta = 0.6
g = 0.01
[baths]
temperature = 0.2
[sweep]
variable = "epsilon"
start = 0.6
stop = 1.0
points = 21
[output]
csv = "unused.csv"
"#,
        )
        .map_err(|e| e.to_string())?;
        let runs: [(&str, Option<&str>); 4] =
            [("1", None), ("2", None), ("8", None), ("", Some("3"))];
        let mut outputs = Vec::new();
        for (k, (threads, env)) in runs.iter().enumerate() {
            let csv = dir.path().join(format!("run{k}.csv"));
            let mut cmd = Command::new(env!("CARGO_BIN_EXE_qjunction"));
            cmd.arg("sweep").arg(&cfg).arg("--csv").arg(&csv);
            if !threads.is_empty() {
                cmd.args(["--threads", threads]);
            }
            match env {
                Some(n) => cmd.env("LT_THREADS", n),
                None => cmd.env_remove("LT_THREADS"),
            };
            let out = cmd.output().map_err(|e| e.to_string())?;
            if !out.status.success() {
                return Err(String::from_utf8_lossy(&out.stderr).into_owned());
            }
            outputs.push(std::fs::read(&csv).map_err(|e| e.to_string())?);
        }
        let same = outputs.iter().all(|o| o == &outputs[0]);
        Ok((
            same && !outputs[0].is_empty(),
            format!(
                "{} runs (1, 2, 8 threads, LT_THREADS=3), {} bytes, identical: {same}",
                outputs.len(),
                outputs[0].len()
            ),
        ))
    })();
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    Check {
        name: "csv_determinism".into(),
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

fn main() -> ExitCode {
    let criteria = vec![
        Criterion::new(1, vec![validate::diagram_counts()], Some(5.0)),
        Criterion::new(2, vec![validate::kernel_identities()], Some(1.0)),
        Criterion::new(3, vec![validate::oracle_equivalence()], Some(30.0)),
        Criterion::new(4, vec![validate::tls_closed_forms()], None),
        Criterion::new(5, vec![validate::low_temperature_law()], None),
        Criterion::new(6, validate::rabi_physics(), Some(60.0)),
        Criterion::new(7, vec![validate::approximation_ladder()], None),
        Criterion::new(8, vec![validate::fermionic_dot()], None),
        Criterion::new(9, vec![validate::conservation()], None),
        Criterion::new(10, vec![determinism()], None),
    ];

    let mut unexpected = 0;
    for c in &criteria {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        let parts: Vec<String> = c
            .checks
            .iter()
            .map(|k| {
                let mark = match (k.passed, c.within_budget(k)) {
                    (true, true) => "ok",
                    (true, false) => "over budget",
                    (false, _) => "FAILED",
                };
                format!(
                    "{} {mark}: {} [{:.2}s]",
                    k.name,
                    k.detail,
                    k.elapsed.as_secs_f64()
                )
            })
            .collect();
        println!("criterion {}: {verdict} ({})", c.id, parts.join("; "));
        for k in &c.checks {
            let known = KNOWN_FAILURES.contains(&k.name.as_str());
            let ok = k.passed && c.within_budget(k);
            if known && ok {
                println!("  {} passes but is listed as a known failure", k.name);
                unexpected += 1;
            } else if known {
                println!("  {} is a known failure", k.name);
            } else if !ok {
                unexpected += 1;
            }
        }
    }
    let passed = criteria.iter().filter(|c| c.passed()).count();
    println!(
        "{passed}/{} criteria pass, {unexpected} unexpected",
        criteria.len()
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
