use std::fs;
use std::process::{Command, Output};

fn sublinear(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sublinear")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn manifest_hash(csv: &str) -> &str {
    csv.lines().next().unwrap().split("spec_hash=").nth(1).unwrap()
}

#[test]
fn csv_layout() {
    let csv = stdout(&sublinear(&["sweep-snr", "--n", "64", "--k", "2", "--trials", "50", "--snr-db", "0,10"]));
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("# sublinear version=0.1.0 experiment=sweep-snr seed=1 spec_hash="));
    assert_eq!(lines[1], "coordinate,estimator,N,k,trials,mse_mean,mse_stderr,seed");
    assert_eq!(lines.len(), 2 + 2 * 3);
    let estimators: Vec<&str> = lines[2..].iter().map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(estimators, ["ml", "ml", "nonseparable", "nonseparable", "separable", "separable"]);
    for l in &lines[2..] {
        let f: Vec<&str> = l.split(',').collect();
        assert_eq!(&f[2..5], ["64", "2", "50"]);
        assert!(f[5].parse::<f64>().unwrap() >= 0.0 && f[6].parse::<f64>().unwrap() >= 0.0);
    }
}

#[test]
fn ml_error_falls_with_snr() {
    let csv = stdout(&sublinear(&["sweep-snr", "--trials", "1000", "--snr-db", "0,12", "--estimators", "ml"]));
    let mse: Vec<f64> = csv.lines().skip(2).map(|l| l.split(',').nth(5).unwrap().parse().unwrap()).collect();
    assert!(mse[1] < mse[0], "{mse:?}");
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# small run\nn = 64\nk = 2\ntrials = 30\nsnr_db = 0,5\nestimators = ml\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = stdout(&sublinear(&["sweep-snr", "--config", cfg]));
    let same_by_flags =
        stdout(&sublinear(&["sweep-snr", "--n", "64", "--k", "2", "--trials", "30", "--snr-db", "0,5", "--estimators", "ml"]));
    assert_eq!(from_file, same_by_flags);

    let overridden = stdout(&sublinear(&["sweep-snr", "--config", cfg, "--trials", "40"]));
    assert!(overridden.lines().skip(2).all(|l| l.split(',').nth(4) == Some("40")));
    assert_ne!(manifest_hash(&overridden), manifest_hash(&from_file));
}

#[test]
fn out_flag_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bounds.csv");
    let args = ["bounds", "--w-max", "1", "--sigma-sq", "0.2"];
    let printed = stdout(&sublinear(&args));
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert!(stdout(&sublinear(&with_out)).is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap(), printed);
}

#[test]
fn bounds_rows() {
    let csv = stdout(&sublinear(&["bounds", "--sigma-sq", "1", "--w-max", "2"]));
    assert_eq!(csv.lines().nth(1), Some("quantity,w,w_prime,sigma_sq,alpha,j,value,reference"));
    assert!(csv.contains("\nthreshold_ml,,,,,,0.5,\n"));
    assert!(csv.contains("\nthreshold_converse,,,,,,0.5,\n"));
    let gamma = csv.lines().find(|l| l.starts_with("gamma_max,")).unwrap();
    let value: f64 = gamma.split(',').nth(6).unwrap().parse().unwrap();
    assert!((value - 1.0 / 13.0).abs() < 1e-12);
    for row in csv.lines().filter(|l| l.starts_with("reliability,")) {
        let f: Vec<f64> = row.split(',').skip(6).map(|x| x.parse().unwrap()).collect();
        assert!((f[0] - f[1]).abs() < 1e-3, "{row}");
    }
}

#[test]
fn verify_passes_and_fault_is_caught() {
    let ok = sublinear(&["verify"]);
    let report = stdout(&ok);
    assert_eq!(report.lines().skip(2).count(), 5);
    assert!(report.lines().skip(2).all(|l| l.ends_with(",pass")));
    for line in report.lines().skip(2) {
        let f: Vec<usize> = line.split(',').skip(1).take(2).map(|x| x.parse().unwrap()).collect();
        assert!(f[0] >= f[1], "{line}");
    }

    let bad = sublinear(&["verify", "--inject-fault"]);
    assert!(!bad.status.success());
    let text = String::from_utf8(bad.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("ml-vs-brute-force,") && l.ends_with(",fail")));
}

#[test]
fn transfer_families() {
    let csv = stdout(&sublinear(&["transfer", "--n", "512", "--k", "4", "--trials", "50", "--runs", "2", "--iters", "10"]));
    assert_eq!(csv.lines().nth(1), Some("run,iteration,input_mse,output_mse"));
    let rows: Vec<Vec<&str>> = csv.lines().skip(2).map(|l| l.split(',').collect()).collect();
    let curve: Vec<f64> =
        rows.iter().filter(|r| r[0] == "bayes-nonseparable").map(|r| r[3].parse().unwrap()).collect();
    assert!(curve[0] < 1e-6 && curve[0] <= *curve.last().unwrap());
    let amp: Vec<f64> = rows.iter().filter(|r| r[0] == "amp-switched-0").map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(amp.len(), 10);
    assert!(amp.last().unwrap() < &amp[0], "{amp:?}");
}

#[test]
fn invalid_input_exits_nonzero() {
    for args in [
        &["sweep-snr", "--n", "3", "--k", "2"][..],
        &["sweep-snr", "--snr-db", "5:1:1"],
        &["sweep-snr", "--estimators", "ml,oracle"],
        &["sweep-delta", "--damping", "2"],
        &["sweep-snr", "--n", "64", "--k", "8", "--estimators", "exact"],
        &["sweep-snr", "--config", "/nonexistent/file.cfg"],
    ] {
        let out = sublinear(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"), "{args:?}");
    }
}
