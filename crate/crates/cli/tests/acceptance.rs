//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs under `cargo test` with its own harness so the
//! lines are always printed.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use spinorbasis_cli::config::DEFAULT_SEED;
use spinorbasis_cli::output::strip_timestamp;
use spinorbasis_cli::suite::{self, Check, SuiteOptions};

struct Outcome {
    criterion: u32,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn from_checks(criterion: u32, title: &'static str, checks: &[Check], elapsed: Duration, budget: Option<Duration>) -> Outcome {
    let mut passed = !checks.is_empty() && checks.iter().all(|c| c.passed && !c.not_converged);
    let mut detail: Vec<String> = checks
        .iter()
        .map(|c| format!("{}: {} (measured {:.3e}, tolerance {:.1e})", c.name, c.summary, c.measured, c.tolerance))
        .collect();
    let time = format!("{:.1} s", elapsed.as_secs_f64());
    match budget {
        Some(b) if elapsed > b => {
            passed = false;
            detail.push(format!("took {time}, budget {} s", b.as_secs()));
        }
        Some(b) => detail.push(format!("took {time} of {} s budget", b.as_secs())),
        None => detail.push(format!("took {time}")),
    }
    Outcome { criterion, title, passed, detail: detail.join("; ") }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn verify_run() -> (Option<i32>, String, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_spinorbasis"))
        .arg("verify")
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .expect("verify binary runs");
    (out.status.code(), String::from_utf8_lossy(&out.stdout).into_owned(), start.elapsed())
}

fn main() -> ExitCode {
    let opts = SuiteOptions { seed: DEFAULT_SEED, quick: false };
    let mut outcomes = Vec::new();

    let (c, t) = timed(|| vec![suite::orthonormality(opts)]);
    outcomes.push(from_checks(1, "weighted Gram matrices are the identity", &c, t, Some(Duration::from_secs(60))));

    let (c, t) = timed(|| vec![suite::biorthonormality(opts)]);
    outcomes.push(from_checks(2, "barred duals are biorthonormal", &c, t, None));

    let (c, t) = timed(|| vec![suite::cg_sum_rule(opts), suite::spinor_norms(opts)]);
    outcomes.push(from_checks(3, "coupling sum rule and spinor normalization", &c, t, None));

    let (c, t) = timed(|| suite::expansion_identity(opts));
    outcomes.push(from_checks(4, "spinor product expansion identity", &c, t, Some(Duration::from_secs(120))));

    let (runs, t_runs) = timed(|| suite::translation_runs(opts));
    let (c, t) = timed(|| {
        let mut checks = vec![suite::translation_delta(opts)];
        match &runs {
            Ok(r) => checks.insert(0, suite::translation_monotonicity(r)),
            Err(e) => eprintln!("translation runs failed: {e}"),
        }
        checks
    });
    let failed_runs = runs.is_err();
    let mut o = from_checks(5, "translation convergence and zero-displacement delta", &c, t + t_runs, None);
    o.passed &= !failed_runs;
    outcomes.push(o);

    let (c, t) = timed(|| vec![suite::cross_method(opts)]);
    outcomes.push(from_checks(6, "Gaunt linearization agrees with grid projection", &c, t, None));

    let (c, t) = timed(|| vec![suite::closed_form_overlap(), suite::closed_form_momentum(opts)]);
    outcomes.push(from_checks(7, "closed-form overlap and momentum 1s", &c, t, None));

    let (c, t) = timed(|| match &runs {
        Ok(r) => vec![suite::representation_independence(r)],
        Err(_) => Vec::new(),
    });
    outcomes.push(from_checks(8, "position and momentum translations agree", &c, t, None));

    let (first, second) = (verify_run(), verify_run());
    let budget = Duration::from_secs(600);
    let same = strip_timestamp(&first.1) == strip_timestamp(&second.1);
    let passed =
        first.0 == Some(0) && second.0 == Some(0) && same && first.2 < budget && second.2 < budget && !first.1.is_empty();
    outcomes.push(Outcome {
        criterion: 9,
        title: "verify is reproducible and succeeds",
        passed,
        detail: format!(
            "exit codes {:?}/{:?}; identical apart from timestamp: {same}; took {:.1} s and {:.1} s of 600 s",
            first.0,
            second.0,
            first.2.as_secs_f64(),
            second.2.as_secs_f64()
        ),
    });

    for o in &outcomes {
        println!("criterion {}: {} - {} ({})", o.criterion, if o.passed { "PASS" } else { "FAIL" }, o.title, o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("acceptance: {} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
