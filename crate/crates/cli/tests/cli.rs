//! End-to-end runs of the `indist` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn indist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_indist"))
        .args(args)
        .output()
        .expect("spawn indist")
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(path).expect("golden file")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn run_to_file(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    full.extend(["--out", p]);
    let out = indist(&full);
    assert!(out.status.success(), "{}", stderr(&out));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn figures_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        run_to_file(dir.path(), "fig2.csv", &["figure", "fig2"]),
        golden("fig2.csv")
    );
    assert_eq!(
        run_to_file(dir.path(), "fig3a.csv", &["figure", "fig3a"]),
        golden("fig3a.csv")
    );
}

#[test]
fn curves_match_golden_files() {
    let hom = indist(&[
        "hom-curve",
        "--model",
        "lorentzian",
        "--gamma",
        "1",
        "--gamma-prime",
        "0.5",
        "--tau-min",
        "-2",
        "--tau-max",
        "2",
        "--tau-steps",
        "9",
    ]);
    assert!(hom.status.success());
    assert_eq!(stdout(&hom), golden("hom_curve_lorentzian.csv"));
    let sweep = indist(&[
        "filter-sweep",
        "--model",
        "gaussian",
        "--sigma-g",
        "1",
        "--sigma-f",
        "3",
        "--r-steps",
        "7",
    ]);
    assert!(sweep.status.success());
    assert_eq!(stdout(&sweep), golden("filter_sweep_gaussian.csv"));
}

#[test]
fn csv_layout() {
    let text = golden("fig3a.csv");
    let header: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    assert!(header[0].starts_with("# indist "));
    assert!(header.iter().any(|l| l.contains("c_ab_norm = c_ab / (1/2)")));
    let body: Vec<&str> = text.lines().skip(header.len()).collect();
    assert_eq!(body[0], "tau,R,c_ab,c_ab_norm,transmission");
    assert_eq!(body.len(), 1 + 603);
    // 9 significant digits throughout
    for cell in body[1].split(',').filter(|c| *c != "inf") {
        let mantissa = cell.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.len(), 10, "{cell}");
    }
    let center = body.iter().find(|l| l.starts_with("0.00000000e0,inf,")).unwrap();
    let norm: f64 = center.split(',').nth(3).unwrap().parse().unwrap();
    assert!((norm - (1.0 - 1.0 / 10f64.sqrt())).abs() < 1e-8);
}

#[test]
fn numeric_hom_curve_is_deterministic() {
    let args = [
        "hom-curve",
        "--model",
        "gaussian",
        "--sigma-g",
        "1",
        "--sigma-f",
        "2",
        "--tau-min",
        "-1",
        "--tau-max",
        "1",
        "--tau-steps",
        "5",
        "--method",
        "both",
    ];
    let (a, b) = (indist(&args), indist(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text
        .lines()
        .any(|l| l == "tau,K,C_AA,C_AB,K_numeric,C_AA_numeric,C_AB_numeric"));
}

#[test]
fn purity_reports_both_methods() {
    let out = indist(&[
        "purity",
        "--model",
        "gaussian",
        "--sigma-g",
        "1",
        "--sigma-f",
        "3",
        "--sigma-fcap",
        "0.5",
        "--method",
        "both",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("K_analytic: 0.316227766"));
    assert!(text.contains("K_numeric: 0.316227766"));
    assert!(text.contains("K_filtered_analytic: 0.905538514"));
    assert!(text.contains("transmission_analytic: 0.156173762"));
}

#[test]
fn spdc_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spdc.csv");
    let out = indist(&[
        "spdc",
        "--pump-fs",
        "110",
        "--filter-nm",
        "3",
        "--eta",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("K_filtered: 0.949541"), "{text}");
    assert!(text.contains("K_filtered(eta -> inf): 0.943"), "{text}");
    let table = std::fs::read_to_string(path).unwrap();
    assert!(table.lines().any(|l| l == "eta,K_filtered,transmission"));
}

#[test]
fn usage_errors_exit_2_and_name_the_flag() {
    let cases: [(&[&str], &str); 6] = [
        (&["purity", "--model", "gaussian", "--sigma-g", "-1"], "--sigma-g"),
        (&["purity", "--model", "lorentzian"], "--gamma"),
        (
            &["purity", "--model", "gaussian", "--sigma-g", "1", "--gamma", "1"],
            "--gamma",
        ),
        (
            &[
                "hom-curve",
                "--model",
                "gaussian",
                "--sigma-g",
                "1",
                "--sigma-fcap",
                "1",
                "--gamma-f",
                "1",
            ],
            "--gamma-f",
        ),
        (
            &[
                "filter-sweep",
                "--model",
                "lorentzian",
                "--gamma",
                "1",
                "--method",
                "analytic",
            ],
            "--method",
        ),
        (&["figure", "fig2", "--rel-tol", "0"], "--rel-tol"),
    ];
    for (args, flag) in cases {
        let out = indist(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr(&out).contains(flag), "{args:?}: {}", stderr(&out));
    }
    let out = indist(&["purity", "--model", "voigt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--model"));
}

#[test]
fn filtered_lorentzian_curve_needs_numeric() {
    let base = [
        "hom-curve",
        "--model",
        "lorentzian",
        "--gamma",
        "1",
        "--gamma-f",
        "0.5",
        "--tau-steps",
        "3",
    ];
    let out = indist(&base);
    assert_eq!(out.status.code(), Some(2));
    let mut numeric = base.to_vec();
    numeric.extend([
        "--tau-min",
        "-1",
        "--tau-max",
        "1",
        "--method",
        "numeric",
        "--rel-tol",
        "1e-6",
    ]);
    let out = indist(&numeric);
    assert!(out.status.success(), "{}", stderr(&out));
    let k0: f64 = stdout(&out)
        .lines()
        .find(|l| l.starts_with("0.00000000e0,"))
        .and_then(|l| l.split(',').nth(1))
        .unwrap()
        .parse()
        .unwrap();
    assert!((k0 - 1.0).abs() < 1e-6, "{k0}");
}
