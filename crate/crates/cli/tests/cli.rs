use std::process::Command;

use qball::report::{Report, Status};
use qball::VScalar;
use qball_cli::{parse_expr, render, AlgebraTag};

fn qball(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qball")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn descending_pair_in_pol_reorders_with_q_inverse() {
    let (tag, p) = parse_expr("z[1,2]*z[1,1]", 2).unwrap();
    assert_eq!(tag, AlgebraTag::Pol);
    let alg = tag.algebra(2);
    let z = |i, j| qball::GeneratorId::new(qball::GenClass::Z, i, j);
    let want = alg.normalize_ids(&[z(1, 1), z(1, 2)], VScalar::q_pow(-1)).unwrap();
    assert_eq!(p, want);
}

#[test]
fn q_minus_inverse_is_v4_minus_1_over_v2() {
    let (tag, p) = parse_expr("q - q^-1", 1).unwrap();
    assert_eq!(tag, AlgebraTag::Scalar);
    assert_eq!(p.constant(), VScalar::laurent_v(-2, &[-1, 0, 0, 0, 1]));
}

#[test]
fn zero_index_is_rejected() {
    let e = parse_expr("z[0,1]", 2).unwrap_err();
    assert!(e.message.contains("index out of range"), "{e}");
    assert!(parse_expr("z[3,1]", 2).is_err());
    // t columns run to 2n
    assert!(parse_expr("t[2,4]", 2).is_ok());
    assert!(parse_expr("t[3,1]", 2).is_err());
}

#[test]
fn incompatible_atoms_are_rejected() {
    let e = parse_expr("z[1,1] + t[1,1]", 1).unwrap_err();
    assert_eq!(e.pos, 9);
    assert!(parse_expr("zeta[1,1]*zetas[1,1]", 1).is_ok());
}

#[test]
fn parse_render_parse_is_identity() {
    let inputs = [
        "(zs[1,1] + q*z[2,2])^2 - z[1,2]*zs[2,1]/(1 - q^2)",
        "z[2,1]*z[1,1]*zs[1,2] - 3/5*v",
        "zetas[1,1]*zeta[1,1] + q^-3",
        "t[2,3]*t[1,1] - t[1,3]*t[2,1]*(q - q^-1)",
        "-(q + 1)/(q - 1)",
    ];
    for text in inputs {
        let (tag, p) = parse_expr(text, 2).unwrap();
        let shown = render(tag, 2, &p);
        let (tag2, p2) = parse_expr(&shown, 2).unwrap_or_else(|e| panic!("{shown}: {e}"));
        assert_eq!(p2, p, "{text} -> {shown}");
        if !p.is_zero() && tag != AlgebraTag::Scalar {
            assert_eq!(tag2, tag);
        }
        assert_eq!(render(tag2, 2, &p2), shown);
    }
}

#[test]
fn cli_normalize_and_usage_errors() {
    let (code, out, _) = qball(&["normalize", "--n", "2", "z[1,2]*z[1,1]"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "q^-1*z[1,1]*z[1,2]");
    let (code, _, err) = qball(&["normalize", "--n", "2", "z[0,1]"]);
    assert_eq!(code, 2);
    assert!(err.contains("position 0"));
    let (code, out, _) = qball(&["normalize", "--eval-v", "2", "q - q^-1"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "15/4");
    assert_eq!(qball(&["verify", "--suite", "nope"]).0, 2);
}

#[test]
fn laplace_n2_passes() {
    let (code, out, _) = qball(&["verify", "--suite", "laplace", "--n", "2"]);
    assert_eq!(code, 0);
    let r: Report = serde_json::from_str(&out).unwrap();
    assert_eq!(r.status, Status::Pass);
}

#[test]
fn hua_kernel_n2_cutoff2_passes_with_numeric_pass() {
    let (code, out, _) = qball(&["verify", "--suite", "hua-kernel", "--n", "2", "--cutoff", "2", "--eval-v", "3/2"]);
    assert_eq!(code, 0, "{out}");
    let r: Report = serde_json::from_str(&out).unwrap();
    assert!(r.note.unwrap().contains("numeric pass at v = 3/2: PASS"));
}

#[test]
fn hua_kernel_cutoff0_is_skipped() {
    let (code, out, _) = qball(&["verify", "--suite", "hua-kernel", "--n", "2", "--cutoff", "0"]);
    assert_eq!(code, 3);
    let r: Report = serde_json::from_str(&out).unwrap();
    assert_eq!(r.status, Status::Skipped);
    assert_eq!(r.note.as_deref(), Some("cutoff too small"));
}

#[test]
fn report_field_order_is_fixed() {
    let (_, out, _) = qball(&["verify", "--suite", "central", "--n", "2"]);
    let keys = ["suite", "n", "cutoff", "status", "residual_count", "residual_sample", "truncated", "wall_ms"];
    let pos: Vec<usize> = keys.iter().map(|k| out.find(&format!("\"{k}\"")).expect(k)).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{out}");
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let strip = |s: String| {
        let mut r: Report = serde_json::from_str(&s).unwrap();
        r.wall_ms = 0;
        serde_json::to_string(&r).unwrap()
    };
    let a = strip(qball(&["verify", "--suite", "star", "--n", "1"]).1);
    let b = strip(qball(&["verify", "--suite", "star", "--n", "1"]).1);
    assert_eq!(a, b);
}

#[test]
fn all_suites_with_bounded_pool_and_output_file() {
    let dir = std::env::temp_dir().join(format!("qball-all-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("all.json");
    let out = Command::new(env!("CARGO_BIN_EXE_qball"))
        .args(["verify", "--suite", "all", "--n", "1", "--cutoff", "3", "--output"])
        .arg(&path)
        .env("QBALL_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let reports: Vec<Report> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(reports.len(), 11);
    assert!(reports.iter().all(|r| r.status == Status::Pass), "{reports:?}");
    std::fs::remove_dir_all(&dir).ok();

    let bad = Command::new(env!("CARGO_BIN_EXE_qball"))
        .args(["verify", "--suite", "laplace"])
        .env("QBALL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn limits_match_classical_forms() {
    let (code, out, _) = qball(&["limits", "--n", "2", "--cutoff", "2"]);
    assert_eq!(code, 0, "{out}");
}
