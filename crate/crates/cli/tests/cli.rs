use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn oweno(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oweno"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn tables_point_and_cell() {
    let tmp = TempDir::new().unwrap();
    let o = oweno(tmp.path(), &["tables", "--r", "3", "--mode", "point", "--out", "t"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(tmp.path().join("t/tables_r3_point.txt")).unwrap();
    assert!(text.contains("d2.A: 1/2 -2 3 -2 1/2\n"));
    assert_eq!(stdout(&o), text);

    let o = oweno(tmp.path(), &["tables", "--r", "3", "--mode", "cell", "--out", "t"]);
    assert!(stdout(&o).contains("d2.C: -1/8 3/2 -11/4 3/2 -1/8\n"));
}

#[test]
fn unsupported_order_is_a_usage_error() {
    let tmp = TempDir::new().unwrap();
    let o = oweno(tmp.path(), &["tables", "--r", "7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("r = 7"));
}

#[test]
fn smooth_study_matrix() {
    let tmp = TempDir::new().unwrap();
    let o = oweno(tmp.path(), &["order-study", "--variants", "oweno", "--mode", "point", "--out", "s"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let md = fs::read_to_string(tmp.path().join("s/order_study.md")).unwrap();
    let orders: Vec<f64> = md
        .lines()
        .skip(2)
        .map(|l| l.split('|').nth(6).unwrap().trim().parse().unwrap())
        .collect();
    assert_eq!(orders.len(), 4);
    for k in [0, 1, 3] {
        assert!((orders[k] - 5.0).abs() < 0.35, "O_{k} = {}", orders[k]);
    }

    // local orders are log2 of consecutive error ratios
    let csv = fs::read_to_string(tmp.path().join("s/order_study.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    for w in rows.windows(2) {
        if w[0][3] != w[1][3] {
            continue;
        }
        let (e0, e1): (f64, f64) = (w[0][5].parse().unwrap(), w[1][5].parse().unwrap());
        let o: f64 = w[1][6].parse().unwrap();
        assert!((o - (e0 / e1).log2()).abs() < 1e-9);
    }
}

#[test]
fn disc_study_accepts_negative_offsets_and_traces() {
    let tmp = TempDir::new().unwrap();
    let o = oweno(
        tmp.path(),
        &["disc-study", "--variants", "js,z", "--theta", "-1,0", "--mode", "cell", "--trace", "trace.csv", "--out", "d"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let trace = fs::read_to_string(tmp.path().join("trace.csv")).unwrap();
    assert!(trace.starts_with("variant,mode,k_or_theta,N,I0,I1,I2,d1,d2,D,w0,w1,w2,value\n"));
    // 2 variants x 2 offsets x 6 levels
    assert_eq!(trace.lines().count(), 1 + 24);
}

#[test]
fn config_errors_exit_with_two() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("empty.toml"), "r = 3\nvariants = []\n").unwrap();
    let o = oweno(tmp.path(), &["order-study", "--config", "empty.toml"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("variant list is empty"));

    fs::write(tmp.path().join("typo.toml"), "r = 3\n\nvariant = [\"js\"]\n").unwrap();
    let o = oweno(tmp.path(), &["order-study", "--config", "typo.toml"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let o = oweno(tmp.path(), &["solve", "--problem", "burgers", "--precision", "dd"]);
    assert_eq!(o.status.code(), Some(2));
    let o = oweno(tmp.path(), &["solve", "--problem", "burgers", "--cfl", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = oweno(tmp.path(), &["convergence", "--problem", "burgers-shock"]);
    assert_eq!(o.status.code(), Some(2));
    let o = oweno(tmp.path(), &["order-study", "--levels", "30", "--variants", "oweno", "--k", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("precision insufficient"));
}

#[test]
fn flags_override_config() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("c.toml"), "problem = \"advection\"\nvariants = [\"z\"]\nn = [20, 40]\nout = \"from-file\"\n")
        .unwrap();
    let o = oweno(tmp.path(), &["convergence", "--config", "c.toml", "--variants", "oweno"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(tmp.path().join("from-file/convergence_advection.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().skip(1).all(|l| l.starts_with("advection,oweno,3,")));
}

#[test]
fn convergence_rates_and_determinism() {
    let tmp = TempDir::new().unwrap();
    let args = ["convergence", "--problem", "advection", "--variants", "oweno,js", "--n", "20,40,80", "--out", "c"];
    let first = oweno(tmp.path(), &args);
    assert!(first.status.success(), "{}", stderr(&first));
    let path = tmp.path().join("c/convergence_advection.csv");
    let csv = fs::read_to_string(&path).unwrap();
    let rerun = oweno(tmp.path(), &args);
    assert!(rerun.status.success());
    assert_eq!(fs::read_to_string(&path).unwrap(), csv);
    assert_eq!(stdout(&first), stdout(&rerun));

    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    for w in rows.windows(2) {
        if w[0][1] != w[1][1] {
            assert!(w[1][5].is_empty());
            continue;
        }
        for (e, rate) in [(4, 5), (6, 7)] {
            let (a, b): (f64, f64) = (w[0][e].parse().unwrap(), w[1][e].parse().unwrap());
            let rr: f64 = w[1][rate].parse().unwrap();
            assert!((rr - (a / b).log2()).abs() < 1e-9);
        }
    }
    let finest: f64 = rows[2][5].parse().unwrap();
    assert!((finest - 5.0).abs() < 0.1, "{finest}");
    // 17 significant digits
    assert_eq!(rows[0][4].split('e').next().unwrap().len(), 18);

    let timing = fs::read_to_string(tmp.path().join("c/timing.csv")).unwrap();
    assert_eq!(timing.lines().count(), 1 + 12);
}

#[test]
fn shock_dumps() {
    let tmp = TempDir::new().unwrap();
    let o = oweno(tmp.path(), &["solve", "--problem", "burgers-shock", "--n", "80", "--out", "b"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let dump = fs::read_to_string(tmp.path().join("b/burgers-shock_oweno_N80.dat")).unwrap();
    assert_eq!(dump.lines().count(), 80);
    assert!(dump.lines().all(|l| l.split(' ').count() == 2));

    let o = oweno(tmp.path(), &["solve", "--problem", "shu-osher", "--n", "200", "--variants", "js,oweno", "--out", "s"]);
    assert!(o.status.success(), "{}", stderr(&o));
    for v in ["js", "oweno"] {
        let dump = fs::read_to_string(tmp.path().join(format!("s/shu-osher_{v}_N200.dat"))).unwrap();
        assert_eq!(dump.lines().count(), 200);
        assert!(dump.lines().all(|l| l.split(' ').count() == 4));
    }
    let summary = fs::read_to_string(tmp.path().join("s/solve_shu-osher.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 2 * 3);
    let timing = fs::read_to_string(tmp.path().join("s/timing.csv")).unwrap();
    assert!(timing.lines().skip(1).all(|l| l.starts_with("shu-osher,")));
}
