//! Suite dispatch, the numeric cross-check at a rational v0, and the worker pool.

use std::cell::Cell;
use std::panic::{self, AssertUnwindSafe};
use std::sync::Once;

use num_rational::BigRational;
use num_traits::One;
use qball::report::{Report, Status};
use qball::{boundary, classical, hua, polmat, props, qmatrix, scalar, uqact};
use rayon::prelude::*;

/// Suites accepted by `verify`, in the order `all` runs them.
pub const SUITES: [&str; 11] = [
    "laplace",
    "central",
    "confluence",
    "invariance",
    "star",
    "action",
    "poisson",
    "p11",
    "hua-kernel",
    "hua-theorem-n1",
    "shilov-consistency",
];

/// Random words per algebra in the confluence suite.
pub const CONFLUENCE_WORDS: usize = 1000;
/// Random pairs in the star suite.
pub const STAR_PAIRS: usize = 200;
/// Attempts at v0, v0 + 1, ... before the numeric pass gives up.
pub const POLE_RETRIES: u32 = 3;

/// Runs one named suite symbolically; `None` for an unknown name.
pub fn run_suite(name: &str, n: u8, cutoff: u32) -> Option<Report> {
    Some(match name {
        "laplace" => qmatrix::laplace_check(n),
        "central" => qmatrix::centrality_check(n),
        "confluence" => props::confluence_check(n, CONFLUENCE_WORDS, props::DEFAULT_SEED),
        "invariance" => uqact::invariance_check(n),
        "star" => props::star_check(n, STAR_PAIRS, props::DEFAULT_SEED),
        "action" => uqact::action_check(n),
        "poisson" => boundary::poisson_check(n, cutoff),
        "p11" => hua::p11_check(n, cutoff),
        "hua-kernel" => hua::verify_hua_kernel(n, cutoff),
        "hua-theorem-n1" if n != 1 => Report::skipped(name, n as u32, cutoff, "defined for n = 1 only"),
        "hua-theorem-n1" => {
            let words = hua::generator_words(1, 2);
            hua::verify_hua_theorem_n1(&hua::default_boundary_functions(), &words, cutoff)
        }
        "shilov-consistency" => polmat::shilov_consistency_check(n),
        "limits" => classical::limits_check(n, cutoff),
        _ => return None,
    })
}

thread_local! {
    static QUIET: Cell<bool> = const { Cell::new(false) };
}

/// Silences panic messages raised inside numeric passes; poles there are
/// expected and handled by retrying.
fn install_quiet_hook() {
    static ONCE: Once = Once::new();
    ONCE.call_once(|| {
        let default = panic::take_hook();
        panic::set_hook(Box::new(move |info| {
            if !QUIET.with(Cell::get) {
                default(info);
            }
        }));
    });
}

/// Runs `name` with v specialized to v0, v0 + 1, ... until no pole is hit.
/// Returns the point used and its report, or `None` when every attempt hit a pole.
pub fn numeric_pass(name: &str, n: u8, cutoff: u32, v0: &BigRational) -> Option<(BigRational, Report)> {
    install_quiet_hook();
    let mut v = v0.clone();
    for _ in 0..POLE_RETRIES {
        QUIET.with(|q| q.set(true));
        let out = scalar::specialized(&v, || panic::catch_unwind(AssertUnwindSafe(|| run_suite(name, n, cutoff))));
        QUIET.with(|q| q.set(false));
        if let Ok(Ok(Some(r))) = out {
            return Some((v, r));
        }
        v += BigRational::one();
    }
    None
}

/// Folds a numeric report into the symbolic one. A numeric FAIL turns the
/// verdict into FAIL; nothing else changes the symbolic status.
pub fn merge_numeric(mut symbolic: Report, numeric: Option<(BigRational, Report)>) -> Report {
    let line = match &numeric {
        Some((v, r)) => format!("numeric pass at v = {v}: {}", r.status),
        None => format!("numeric pass skipped: poles at {POLE_RETRIES} points"),
    };
    if let Some((v, r)) = numeric {
        if r.status == Status::Fail {
            if symbolic.status != Status::Fail {
                symbolic.status = Status::Fail;
                symbolic.residual_sample.clear();
                symbolic.residual_count = 0;
            }
            symbolic.residual_count += r.residual_count.max(1);
            symbolic.residual_sample.extend(r.residual_sample.iter().map(|s| format!("at v = {v}: {s}")));
            if r.residual_sample.is_empty() {
                symbolic.residual_sample.push(format!("at v = {v}: failed"));
            }
            symbolic.residual_sample.truncate(qball::report::SAMPLE_LIMIT);
        }
    }
    symbolic.note = Some(match symbolic.note.take() {
        Some(old) => format!("{old}; {line}"),
        None => line,
    });
    symbolic
}

/// Symbolic run of one suite, with the numeric pass alongside when `eval_v` is set.
pub fn verify_one(name: &str, n: u8, cutoff: u32, eval_v: Option<&BigRational>) -> Option<Report> {
    match eval_v {
        None => run_suite(name, n, cutoff),
        Some(v0) => {
            let (sym, num) = rayon::join(|| run_suite(name, n, cutoff), || numeric_pass(name, n, cutoff, v0));
            sym.map(|s| merge_numeric(s, num))
        }
    }
}

/// `name` may be `all`; reports come back in [`SUITES`] order.
pub fn verify(name: &str, n: u8, cutoff: u32, eval_v: Option<&BigRational>) -> Option<Vec<Report>> {
    if name == "all" {
        return Some(
            SUITES
                .par_iter()
                .map(|s| verify_one(s, n, cutoff, eval_v).expect("listed suite"))
                .collect(),
        );
    }
    verify_one(name, n, cutoff, eval_v).map(|r| vec![r])
}

/// 0 if any report passed and none failed, 1 on any failure, 3 if all skipped.
pub fn exit_code(reports: &[Report]) -> u8 {
    if reports.iter().any(|r| r.status == Status::Fail) {
        1
    } else if reports.iter().any(|r| r.status == Status::Pass) {
        0
    } else {
        3
    }
}

/// Worker count from `QBALL_THREADS`; `None` leaves the choice to rayon.
pub fn threads_from_env() -> Result<Option<usize>, String> {
    match std::env::var("QBALL_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Some(k)),
            _ => Err(format!("QBALL_THREADS must be a positive integer, got '{s}'")),
        },
    }
}

pub fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool, String> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        b = b.num_threads(k);
    }
    b.build().map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_suite_dispatches() {
        for s in SUITES {
            let r = run_suite(s, 1, 1).expect("listed suite");
            assert_eq!(r.suite, s);
        }
        assert!(run_suite("nope", 1, 1).is_none());
    }

    #[test]
    fn numeric_failure_only_strengthens() {
        let pass = Report::from_residuals("x", 1, 1, vec![], false);
        let fail = Report::from_residuals("x", 1, 1, vec!["r".into()], false);
        let v = BigRational::one();
        assert_eq!(merge_numeric(pass.clone(), Some((v.clone(), fail.clone()))).status, Status::Fail);
        assert_eq!(merge_numeric(fail.clone(), Some((v.clone(), pass.clone()))).status, Status::Fail);
        assert_eq!(merge_numeric(pass.clone(), None).status, Status::Pass);
    }

    #[test]
    fn pole_at_zero_moves_on() {
        let (v, r) = numeric_pass("laplace", 1, 1, &BigRational::from_integer(0.into())).unwrap();
        assert_eq!(v, BigRational::one());
        assert!(r.passed());
    }

    #[test]
    fn exit_codes() {
        let skip = Report::skipped("x", 1, 0, "s");
        let pass = Report::from_residuals("x", 1, 1, vec![], false);
        assert_eq!(exit_code(std::slice::from_ref(&skip)), 3);
        assert_eq!(exit_code(&[skip, pass]), 0);
    }
}
