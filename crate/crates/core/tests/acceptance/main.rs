//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#[path = "../support/mod.rs"]
mod support;

mod integrity;
mod lifecycle;
mod oracles;
mod rbac;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

const CRITERIA: &[(&str, Criterion)] = &[
    ("rbac_matrix", rbac::run),
    ("resume_lifecycle", lifecycle::run),
    ("presentation_workflow", presentation::run),
    ("oracle_equivalence", oracles::run),
    ("integrity_sweep", integrity::run),
    ("scenario_scripts", scenarios::run),
    ("durability", durability::run),
];

fn main() -> ExitCode {
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    // Panics are reported as failures; keep the default hook quiet.
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, criterion) in CRITERIA {
        if !only.is_empty() && !only.iter().any(|o| name.contains(o.as_str())) {
            continue;
        }
        let started = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(criterion)).unwrap_or_else(|payload| {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(format!("panic: {msg}"))
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.2}s]"),
            Err(reason) => {
                failed += 1;
                println!("FAIL {name}: {reason} [{secs:.2}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

/// `Err` with a formatted message unless `cond` holds.
#[macro_export]
macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}
