use rankone_ps::verify::{SuiteName, VerificationReport, CSV_COLUMNS};
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rankone-ps"));
    c.env_remove("RANKONE_PS_THREADS");
    c
}

fn write_config(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn verify(config: &Path, extra: &[&str]) -> Output {
    bin().arg("verify").arg(config).args(extra).output().unwrap()
}

#[test]
fn list_commands() {
    let out = bin().arg("list-suites").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for s in SuiteName::ALL {
        assert!(text.lines().any(|l| l.starts_with(s.as_str())), "{s} missing");
    }
    let out = bin().arg("list-symbols").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("bump-trig") && text.contains("window-trig"));
}

#[test]
fn unknown_suite_names_valid_ones() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.toml", "model = \"h2\"\nsuite = \"iwasawaa\"\n");
    let out = verify(&cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("iwasawaa") && err.contains("intertwining-offdiag"), "{err}");

    let good = write_config(dir.path(), "good.toml", "model = \"h2\"\nsuite = \"iwasawa\"\n");
    let out = verify(&good, &["--suite", "nope"]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("fourier-inversion"));
}

#[test]
fn unknown_symbol_and_field_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "s.toml", "model = \"h2\"\nsuite = \"poisson\"\n[symbol]\nname = \"gauss\"\n");
    let out = verify(&cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bump-trig"), "{err}");
    let cfg = write_config(dir.path(), "f.toml", "model = \"h2\"\nsuite = \"poisson\"\nsede = 3\n");
    assert_eq!(verify(&cfg, &[]).status.code(), Some(2));
}

#[test]
fn deterministic_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "b.toml", "model = \"h3\"\nsuite = \"bracket\"\nseed = 11\nsamples = 300\n");
    let a = verify(&cfg, &["--no-timestamp", "--parallelism", "1"]);
    let b = verify(&cfg, &["--no-timestamp", "--parallelism", "1"]);
    let c = verify(&cfg, &["--no-timestamp", "--parallelism", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let d = bin().arg("verify").arg(&cfg).arg("--no-timestamp").env("RANKONE_PS_THREADS", "3").output().unwrap();
    assert_eq!(a.stdout, d.stdout);
    let timed = verify(&cfg, &[]);
    let r = VerificationReport::from_json(&String::from_utf8(timed.stdout).unwrap()).unwrap();
    assert!(r.timing.is_some());
}

#[test]
fn failing_case_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "t.toml", "model = \"h2\"\nsuite = \"iwasawa\"\nsamples = 50\n[tolerances]\ncheck = 1e-300\n");
    let out = verify(&cfg, &["--no-timestamp"]);
    assert_eq!(out.status.code(), Some(1));
    let r = VerificationReport::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(!r.summary.pass && r.summary.failed > 0);
}

#[test]
fn json_and_csv_agree_to_full_precision() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "p.toml", "model = \"h2\"\nsuite = \"poisson\"\nsamples = 5\nlambda_grid = [0.5, 3.0]\n");
    let json_path = dir.path().join("r.json");
    let csv_path = dir.path().join("r.csv");
    assert!(verify(&cfg, &["--no-timestamp", "--out", json_path.to_str().unwrap()]).status.success());
    assert!(verify(&cfg, &["--no-timestamp", "--format", "csv", "--out", csv_path.to_str().unwrap()]).status.success());
    let report = VerificationReport::from_json(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let mut rdr = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), CSV_COLUMNS.to_vec());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), report.cases.len());
    let rel_col = CSV_COLUMNS.iter().position(|c| *c == "rel_err").unwrap();
    for (row, case) in rows.iter().zip(&report.cases) {
        assert_eq!(&row[1], case.case.as_str());
        let parsed: Option<f64> = (!row[rel_col].is_empty()).then(|| row[rel_col].parse().unwrap());
        assert_eq!(parsed.map(f64::to_bits), case.rel_err.map(f64::to_bits));
    }
}

#[test]
fn msp_rate_csv_has_plot_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "m.toml", "model = \"h2\"\nsuite = \"msp-rate\"\n");
    let out = verify(&cfg, &["--no-timestamp", "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = rdr.headers().unwrap().clone();
    let col = |n: &str| headers.iter().position(|h| h == n).unwrap();
    let (l, r, d) = (col("lambda"), col("ratio"), col("abs_dev"));
    let rate_rows: Vec<(f64, f64, f64)> = rdr
        .records()
        .map(|x| x.unwrap())
        .filter(|x| !x[l].is_empty())
        .map(|x| (x[l].parse().unwrap(), x[r].parse().unwrap(), x[d].parse().unwrap()))
        .collect();
    assert_eq!(rate_rows.iter().map(|x| x.0).collect::<Vec<_>>(), vec![20.0, 40.0, 80.0, 160.0]);
    assert!(rate_rows.iter().all(|x| x.1 > 0.0 && x.2 > 0.0));
}

#[test]
fn io_errors_name_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "i.toml", "model = \"h2\"\nsuite = \"iwasawa\"\nsamples = 10\n");
    let bad = dir.path().join("missing-dir").join("r.json");
    let out = verify(&cfg, &["--out", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("missing-dir"));
    let out = verify(&dir.path().join("nope.toml"), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("nope.toml"));
}
