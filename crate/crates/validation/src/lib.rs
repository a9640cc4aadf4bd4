//! Line-per-criterion reporting for the acceptance run.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

/// Verdict of one criterion plus the numbers behind it.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
    /// Extra lines printed under the verdict.
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into(), notes: Vec::new() }
    }

    pub fn note(mut self, line: impl Into<String>) -> Self {
        self.notes.push(line.into());
        self
    }
}

#[derive(Debug, Default)]
pub struct Suite {
    verdicts: Vec<(usize, bool)>,
}

impl Suite {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs one criterion. A panic counts as a failure, and so does exceeding `limit` when one is set.
    pub fn check(&mut self, id: usize, title: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Outcome::new(false, format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let pass = outcome.pass && in_time;
        let timing = if in_time {
            format!("{:.1}s", elapsed.as_secs_f64())
        } else {
            format!("{:.1}s, over the {}s limit", elapsed.as_secs_f64(), limit.map_or(0, |l| l.as_secs()))
        };
        let mut out = std::io::stdout().lock();
        let _ = writeln!(
            out,
            "{} criterion {id:>2}: {title} | {} [{timing}]",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail
        );
        for note in &outcome.notes {
            let _ = writeln!(out, "      {note}");
        }
        let _ = out.flush();
        self.verdicts.push((id, pass));
    }

    /// Prints the tally; the exit code is non-zero when any criterion failed.
    pub fn finish(self) -> ExitCode {
        let failed: Vec<usize> = self.verdicts.iter().filter(|(_, p)| !p).map(|(id, _)| *id).collect();
        println!("acceptance: {} passed, {} failed", self.verdicts.len() - failed.len(), failed.len());
        if failed.is_empty() {
            ExitCode::SUCCESS
        } else {
            println!("failed criteria: {failed:?}");
            ExitCode::FAILURE
        }
    }
}
