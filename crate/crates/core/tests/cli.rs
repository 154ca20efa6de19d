use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use mgcd::Polynomial;

fn mgcd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgcd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_poly(dir: &Path, name: &str, coeffs: &[f64]) -> String {
    let path = dir.join(name);
    std::fs::write(&path, Polynomial::from_real(coeffs).to_text()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('\t')))
        .unwrap_or_else(|| panic!("no `{key}` in output:\n{text}"))
}

/// Polynomial in the block after `# name` in a report.
fn block(text: &str, name: &str) -> Polynomial {
    let body: String = text
        .lines()
        .skip_while(|l| *l != format!("# {name}"))
        .skip(1)
        .take_while(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    Polynomial::from_text(&body).unwrap()
}

fn gen(dir: &Path, seed: &str) -> Output {
    mgcd(&[
        "gen",
        "--n",
        "8",
        "--m",
        "7",
        "--k",
        "3",
        "--eta",
        "1e-5",
        "--seed",
        seed,
        "--out",
        dir.to_str().unwrap(),
    ])
}

#[test]
fn gen_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    assert_eq!(gen(a.path(), "3").status.code(), Some(0));
    assert_eq!(gen(b.path(), "3").status.code(), Some(0));
    assert_eq!(gen(c.path(), "4").status.code(), Some(0));
    for name in ["f.txt", "g.txt", "g_exact.txt", "meta.txt"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        assert_eq!(x, std::fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    assert_ne!(
        std::fs::read(a.path().join("g.txt")).unwrap(),
        std::fs::read(c.path().join("g.txt")).unwrap()
    );
    let f = mgcd::cli::read_polynomial(&a.path().join("f.txt")).unwrap();
    assert_eq!(f.degree(), Some(8));
}

#[test]
fn agcd_on_generated_instance() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "0");
    let refined = dir.path().join("g_refined.txt");
    let out = mgcd(&[
        "agcd",
        dir.path().join("f.txt").to_str().unwrap(),
        dir.path().join("g.txt").to_str().unwrap(),
        "--tol",
        "3e-5",
        "--out",
        refined.to_str().unwrap(),
    ]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(field(&text, "degree"), "3");
    assert_eq!(field(&text, "converged"), "true");
    let residual: f64 = field(&text, "residual").parse().unwrap();
    assert!(residual < 1e-20, "{residual}");
    let distance: f64 = field(&text, "distance").parse().unwrap();
    assert!(distance < 1e-3, "{distance}");

    let f = mgcd::cli::read_polynomial(&dir.path().join("f.txt")).unwrap();
    let gcd = block(&text, "gcd");
    let v = block(&text, "v_tilde");
    assert!((&gcd * &v).distance(&f.monic().unwrap()) < 1e-8);
    let g_tilde = mgcd::cli::read_polynomial(&refined).unwrap();
    assert!(g_tilde.distance(&block(&text, "g_tilde")) < 1e-12);
}

#[test]
fn agcd_dense_flag_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_poly(dir.path(), "f.txt", &[6.0, -7.0, 0.0, 1.0]);
    let g = write_poly(dir.path(), "g.txt", &[-10.0 + 1e-7, 17.0, -8.0, 1.0]);
    let fast = stdout(&mgcd(&["agcd", &f, &g, "--tol", "1e-5"]));
    let dense = stdout(&mgcd(&["agcd", &f, &g, "--tol", "1e-5", "--dense"]));
    assert_eq!(field(&fast, "degree"), "2");
    assert_eq!(field(&dense, "degree"), "2");
    assert!(block(&fast, "gcd").distance(&block(&dense, "gcd")) < 1e-8);
}

#[test]
fn coprime_inputs_exit_trivially() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_poly(dir.path(), "f.txt", &[2.0, -3.0, 1.0]);
    let g = write_poly(dir.path(), "g.txt", &[12.0, -7.0, 1.0]);
    let out = mgcd(&["agcd", &f, &g]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(field(&stdout(&out), "degree"), "0");
    assert_eq!(mgcd(&["gcd", &f, &g]).status.code(), Some(2));
}

#[test]
fn errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_poly(dir.path(), "f.txt", &[2.0, -3.0, 1.0]);
    let missing = dir.path().join("nope.txt");
    let out = mgcd(&["agcd", &f, missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("nope.txt"), "{}", stderr(&out));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "# header\n1 0\n2 zero\n").unwrap();
    let out = mgcd(&["gcd", &f, bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let msg = stderr(&out);
    assert!(msg.contains("line 3") && msg.contains("bad.txt"), "{msg}");

    assert_eq!(mgcd(&["rank", &f, &f, "--tol", "-1"]).status.code(), Some(1));
    assert_eq!(mgcd(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(mgcd(&["--help"]).status.code(), Some(0));
}

#[test]
fn gcd_examples() {
    let dir = tempfile::tempdir().unwrap();
    // (x-1)(x-2)(x+3) and (x-1)(x-2)(x-5)
    let f = write_poly(dir.path(), "f.txt", &[6.0, -7.0, 0.0, 1.0]);
    let g = write_poly(dir.path(), "g.txt", &[-10.0, 17.0, -8.0, 1.0]);
    let out = mgcd(&["gcd", &f, &g]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(field(&text, "degree"), "2");
    assert!(block(&text, "gcd").distance(&Polynomial::from_real(&[2.0, -3.0, 1.0])) < 1e-10);

    // g a multiple of f
    let g2 = write_poly(dir.path(), "g2.txt", &[6.0, -1.0, -7.0, 1.0, 1.0]);
    let text = stdout(&mgcd(&["gcd", &f, &g2]));
    assert_eq!(field(&text, "degree"), "3");
}

#[test]
fn rank_reports_corank() {
    let dir = tempfile::tempdir().unwrap();
    let gen_out = mgcd(&[
        "gen",
        "--n",
        "10",
        "--m",
        "9",
        "--k",
        "3",
        "--seed",
        "5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(gen_out.status.code(), Some(0));
    let f = dir.path().join("f.txt");
    let g = dir.path().join("g_exact.txt");
    let out = mgcd(&["rank", f.to_str().unwrap(), g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(field(&text, "corank"), "3");
    assert_eq!(field(&text, "rank"), "7");

    let one = write_poly(dir.path(), "one.txt", &[1.0]);
    let out = mgcd(&["rank", f.to_str().unwrap(), &one]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(field(&stdout(&out), "corank"), "0");
}

#[test]
fn bench_single_seed_is_quick() {
    let start = Instant::now();
    let out = mgcd(&["bench", "--table", "1", "--seeds", "1", "--records"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(start.elapsed().as_secs_f64() < 10.0);
    let text = stdout(&out);
    for (n, m, k) in [(8, 7, 3), (15, 14, 5), (22, 22, 7), (36, 36, 11)] {
        assert!(
            text.lines().any(|l| l.starts_with(&format!("{n}\t{m}\t{k}\t"))),
            "{text}"
        );
    }
}
