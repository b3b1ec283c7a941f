//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Runs without the libtest harness so the lines are always shown.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qball::hua::{self, Weights};
use qball::report::{Report, Status};
use qball::{boundary, polmat, props, qmatrix, uqact};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { ok: true, detail: Vec::new() }
    }

    /// Expect `r` to pass.
    fn pass(&mut self, label: &str, r: Report) -> &mut Self {
        if !r.passed() {
            self.ok = false;
            self.detail.push(format!("{label}: {} {:?}", r.status, r.residual_sample));
        }
        self
    }

    /// Expect `r` to fail (negative control).
    fn fail(&mut self, label: &str, r: Report) -> &mut Self {
        if r.status != Status::Fail {
            self.ok = false;
            self.detail.push(format!("{label}: control did not fail ({})", r.status));
        }
        self
    }

    fn within(&mut self, label: &str, start: Instant, limit: Duration) -> &mut Self {
        let took = start.elapsed();
        if took > limit {
            self.ok = false;
            self.detail.push(format!("{label}: {took:?} exceeds {limit:?}"));
        }
        self
    }

    fn check(&mut self, label: &str, cond: bool) -> &mut Self {
        if !cond {
            self.ok = false;
            self.detail.push(label.to_string());
        }
        self
    }
}

fn laplace() -> Outcome {
    let mut o = Outcome::new();
    o.pass("n=1", qmatrix::laplace_check(1));
    let t = Instant::now();
    o.pass("n=2", qmatrix::laplace_check(2));
    o.within("n=2", t, Duration::from_secs(10));
    o.fail("n=2 with the reversed sign flipped", qmatrix::laplace_check_with(2, 1));
    o
}

fn centrality() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    o.pass("n=2", qmatrix::centrality_check(2));
    o.pass("n=3", qmatrix::centrality_check(3));
    o.within("n=2,3", t, Duration::from_secs(10));
    o
}

fn invariance() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    // each report also requires its non-invariant controls to be moved
    o.pass("n=1", uqact::invariance_check(1));
    o.pass("n=2", uqact::invariance_check(2));
    o.within("n=1,2", t, Duration::from_secs(30));
    o
}

fn module_algebra() -> Outcome {
    let mut o = Outcome::new();
    o.pass("n=1", uqact::action_check(1));
    o.pass("n=2", uqact::action_check(2));
    o
}

fn n1_example() -> Outcome {
    let mut o = Outcome::new();
    let r = boundary::poisson_check(1, 4);
    o.check("truncation recorded at D=4", r.truncated);
    o.pass("D=4", r);
    o
}

fn p11() -> Outcome {
    let mut o = Outcome::new();
    o.pass("n=1", hua::p11_check(1, 2));
    let t = Instant::now();
    o.pass("n=2", hua::p11_check(2, 2));
    o.within("n=2", t, Duration::from_secs(300));
    o
}

fn hua_kernel() -> Outcome {
    let mut o = Outcome::new();
    o.pass("n=1", hua::verify_hua_kernel(1, 2));
    o.pass("n=2", hua::verify_hua_kernel(2, 2));
    match hua::verify_hua_kernel_with(2, 2, Weights::Unit) {
        Ok(parts) => {
            for h in parts {
                let label = format!("n=2 system {} with unit weights", h.system.label());
                o.fail(&label, h.into_report("hua-kernel"));
            }
        }
        Err(e) => {
            o.check(&format!("control errored: {e}"), false);
        }
    }
    o
}

fn hua_theorem() -> Outcome {
    let mut o = Outcome::new();
    let words = hua::generator_words(1, 2);
    o.check("21 generator words", words.len() == 21);
    o.pass("D=4", hua::verify_hua_theorem_n1(&hua::default_boundary_functions(), &words, 4));
    o
}

fn shilov() -> Outcome {
    let mut o = Outcome::new();
    o.pass("n=1", polmat::shilov_consistency_check(1));
    o.pass("n=2", polmat::shilov_consistency_check(2));
    o
}

fn engine() -> Outcome {
    let mut o = Outcome::new();
    for n in 1..=2 {
        o.pass(&format!("confluence n={n}"), props::confluence_check(n, 1000, props::DEFAULT_SEED));
        // star_check also covers y·z = q² z·y
        o.pass(&format!("star n={n}"), props::star_check(n, 200, props::DEFAULT_SEED));
    }
    o
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Laplace expansion, both orders, n = 1, 2", laplace),
        ("det_q central, n = 2, 3", centrality),
        ("L and Lbar invariant, n = 1, 2", invariance),
        ("module-algebra soundness and operator relations", module_algebra),
        ("n = 1 Poisson kernel closed form, P(1) = 1, telescoping identity", n1_example),
        ("p11 formula up to one scalar, classical limit", p11),
        ("Hua systems A and B on the kernel, unit-weight control fails", hua_kernel),
        ("Hua systems on n = 1 Poisson integrals, words of length <= 2", hua_theorem),
        ("Shilov relations after gl_star, n = 1, 2", shilov),
        ("confluence, star laws, y z = q^2 z y", engine),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        let ms = t.elapsed().as_millis();
        let mark = if o.ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {mark} ({ms} ms): {name}", i + 1);
        for d in &o.detail {
            println!("    {d}");
        }
        failed += usize::from(!o.ok);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
