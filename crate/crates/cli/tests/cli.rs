use std::path::PathBuf;
use std::process::{Command, Output};

use microlocal_cli::signal::{load_signal, save_signal};
use microlocal_core::{Grid, GridFunction};
use num_complex::Complex64;

fn microlocal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_microlocal")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("microlocal-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn usage_and_input_errors_exit_2() {
    let o = microlocal(&["bogus"]);
    assert_eq!(o.status.code(), Some(2));
    let o = microlocal(&["norm", "--grid-n", "64"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--signal"));
    let o = microlocal(&["norm", "--grid-n", "64", "--signal", "/definitely/missing"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/definitely/missing"));
    let o = microlocal(&["verify", "--grid-n", "100"]);
    assert_eq!(o.status.code(), Some(2));
    let o = microlocal(&["verify", "--grid-n", "64", "--system2", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nonsense"));
}

#[test]
fn expression_errors_carry_position() {
    let o = microlocal(&["verify", "--grid-n", "64", "--p", "2 + sin("]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("position 8"), "{}", stderr(&o));
    let o = microlocal(&["verify", "--grid-n", "64", "--p", "2 + y"]);
    assert!(stderr(&o).contains("`y`"), "{}", stderr(&o));
}

#[test]
fn help_exits_0() {
    let o = microlocal(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verify"));
}

#[test]
fn constant_signal_norm_is_level_zero_value() {
    let dir = scratch("norm");
    let path = dir.join("ones.txt");
    std::fs::write(&path, "1.0\n".repeat(64)).unwrap();
    for s in ["0", "1", "-0.5"] {
        let o = microlocal(&["norm", "--grid-n", "64", "--s", s, "--signal", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("quasi_norm = 1.000000000000e0"), "{}", stdout(&o));
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn identical_pair_gives_unit_ratios() {
    let o = microlocal(&["compare-pairs", "--grid-n", "64", "--system2", "classic", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("function,ratio_n,ratio_2n"));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        for v in &cols[1..] {
            let v: f64 = v.parse().unwrap();
            assert!((v - 1.0).abs() < 1e-12, "{row}");
        }
    }
    assert!(stderr(&o).contains("microlocal compare-pairs"));
}

#[test]
fn out_dir_holds_csv_and_report() {
    let dir = scratch("out");
    let o = microlocal(&[
        "verify", "--grid-n", "64", "--suite", "lebesgue", "--samples", "5", "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.join("verify.csv")).unwrap();
    assert!(csv.starts_with("suite,check,value,relation,bound,result\n"));
    let report = std::fs::read_to_string(dir.join("report.txt")).unwrap();
    assert!(report.contains("summary: 4 passed, 0 failed"));
    assert_eq!(stdout(&o), report);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn failing_check_exits_1() {
    // a negative drift tolerance cannot be met
    let o = microlocal(&[
        "compare-pairs", "--grid-n", "64", "--samples", "3", "--config",
        concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/strict.conf"),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn signal_files_round_trip() {
    let dir = scratch("signal");
    let grid = Grid::two_d(16).unwrap();
    let f = GridFunction::from_fn(grid, |x| Complex64::new(x[0] - 0.25, (x[1] * 7.0).sin()));
    let path = dir.join("f.txt");
    save_signal(&path, &f).unwrap();
    assert_eq!(load_signal(&path, &grid).unwrap(), f);
    let o = microlocal(&["analyze", "--dim", "2", "--grid-n", "16", "--signal", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("j,level_norm\n"));
    let _ = std::fs::remove_dir_all(&dir);
}
