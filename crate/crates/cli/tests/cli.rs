use std::process::{Command, Output};

use entlab_cli::{EXIT_BAD_FLAGS, EXIT_CAPACITY, EXIT_NO_THRESHOLD};

fn entlab(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_entlab"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("ENTLAB_THREADS", t),
        None => cmd.env_remove("ENTLAB_THREADS"),
    };
    cmd.output().expect("entlab runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = entlab(args, None);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn rows(table: &str) -> Vec<Vec<String>> {
    table
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn sweeps_are_byte_identical_across_pool_sizes() {
    let args = [
        "negativity",
        "--n-min",
        "2",
        "--n-max",
        "6",
        "--circuit",
        "chfan",
        "--split",
        "half",
    ];
    let one = entlab(&args, Some("1"));
    let four = entlab(&args, Some("4"));
    let default = entlab(&args, None);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, default.stdout);
    let bounds = ["bounds", "--n-min", "2", "--n-max", "30"];
    assert_eq!(
        entlab(&bounds, Some("1")).stdout,
        entlab(&bounds, Some("3")).stdout
    );
}

#[test]
fn header_records_version_flags_and_conjecture() {
    let t = stdout_of(&[
        "bounds",
        "--curves",
        "uch_half_split",
        "--n-min",
        "10",
        "--n-max",
        "12",
    ]);
    let lines: Vec<&str> = t.lines().collect();
    assert_eq!(lines[0], format!("# entlab {}", env!("CARGO_PKG_VERSION")));
    assert_eq!(lines[1], "# command: bounds");
    assert_eq!(
        lines[2],
        "# flags: bounds --curves uch_half_split --n-min 10 --n-max 12"
    );
    assert_eq!(lines[3], "# conjecture_dependent: uch_half_split@N=12");
    let r = rows(&t);
    assert_eq!(r[0], ["N", "curve_id", "boundary_alpha", "direction"]);
    // odd N is skipped for the half split
    assert_eq!(r.len(), 3);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("entlab-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.csv");
    let p = path.to_str().unwrap();
    let printed = stdout_of(&["threshold", "cf_fullsep", "--alpha", "4e-5"]);
    let out = entlab(
        &["threshold", "cf_fullsep", "--alpha", "4e-5", "--out", p],
        None,
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    // only the recorded flags differ
    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.starts_with("# flags"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&printed), strip(&written));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn threshold_rows() {
    let t = stdout_of(&["threshold", "effpure_dist", "--alpha", "4e-5"]);
    let r = rows(&t);
    assert_eq!(r[1][2..4], ["exact", "27466"]);
    assert_eq!(r[2][2..4], ["approximate", "50000"]);
    let t = stdout_of(&["threshold", "gurvits_sep_alpha", "--alpha", "8e-5"]);
    assert_eq!(rows(&t)[1][3], "32");
    let t = stdout_of(&["threshold", "braun_sep", "--alpha", "4e-5"]);
    assert_eq!(rows(&t)[1][3], "13");
}

#[test]
fn bounds_match_closed_forms() {
    let t = stdout_of(&[
        "bounds",
        "--curves",
        "cf_fullsep,uch_fulldist",
        "--n-min",
        "20",
        "--n-max",
        "20",
    ]);
    let r = rows(&t);
    let cf: f64 = r[1][2].parse().unwrap();
    assert!((cf - 1f64.asinh() / 20.0).abs() < 1e-13);
    assert_eq!(r[1][3], "satisfied-below");
    let uch: f64 = r[2][2].parse().unwrap();
    assert!((uch + 0.5 * (2f64.sqrt() - 1.0).ln()).abs() < 1e-12);
}

#[test]
fn classify_reports_verdicts() {
    let t = stdout_of(&["classify", "--n", "4", "--alpha", "0.3"]);
    assert!(t.contains("# fully_separable: false"));
    let r = rows(&t);
    assert_eq!(r[0], ["weight", "split_mask", "ln_lambda_k", "verdict"]);
    assert_eq!(r.len(), 4);
    assert_eq!(r[3][3], "NPT");

    let t = stdout_of(&[
        "classify",
        "--n",
        "5",
        "--alpha",
        "0.5",
        "--circuit",
        "chfan",
        "--all-splits",
    ]);
    assert!(t.contains("# fullsep_variant:"));
    let r = rows(&t);
    assert_eq!(r.len(), 1 + 15);
    assert!(r[1..].iter().all(|row| row[5] == "true"));

    let t = stdout_of(&[
        "classify", "--n", "4", "--alpha", "0.3", "--split", "mask:e",
    ]);
    let r = rows(&t);
    assert_eq!(r[1][0], "mask:e");
    // the complement of qubit 1 alone is tested as the weight-1 split
    assert_eq!(r[1][1], "1");
    assert_eq!(r[1][4], "true");

    let t = stdout_of(&[
        "classify", "--n", "100000", "--alpha", "1e-4", "--split", "one",
    ]);
    assert_eq!(rows(&t)[1][3], "NPT");
}

#[test]
fn negativity_paths_agree() {
    let analytic = stdout_of(&[
        "negativity",
        "--n-min",
        "3",
        "--n-max",
        "5",
        "--alpha-decades",
        "0:2",
    ]);
    let dense = stdout_of(&[
        "negativity",
        "--n-min",
        "3",
        "--n-max",
        "5",
        "--alpha-decades",
        "0:2",
        "--path",
        "dense",
    ]);
    for (a, d) in rows(&analytic).iter().zip(&rows(&dense)).skip(1) {
        assert_eq!(a[5], "analytic");
        assert_eq!(d[5], "dense");
        let (x, y): (f64, f64) = (a[3].parse().unwrap(), d[3].parse().unwrap());
        assert!((x - y).abs() < 1e-12, "{a:?} vs {d:?}");
    }
    let t = stdout_of(&[
        "negativity",
        "--n-min",
        "3",
        "--n-max",
        "3",
        "--split",
        "half",
        "--alpha-decades",
        "0:0",
    ]);
    assert_eq!(rows(&t)[1][6], "odd_n_skipped");
}

#[test]
fn search_and_feasible() {
    let t = stdout_of(&["search", "--n", "3", "--alpha", "1", "--budget", "200"]);
    assert_eq!(rows(&t)[1][0], "true");

    let dir = std::env::temp_dir().join(format!("entlab-feasible-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s.csv");
    std::fs::write(&path, "# n=2\n0.25\n0.25\n0.25\n0.25\n").unwrap();
    let t = stdout_of(&[
        "feasible",
        "--spectrum",
        path.to_str().unwrap(),
        "--alpha",
        "0.5",
    ]);
    assert_eq!(rows(&t)[1][4], "feasible");
    std::fs::write(&path, "# n=2\n1\n0\n0\n0\n").unwrap();
    let t = stdout_of(&[
        "feasible",
        "--spectrum",
        path.to_str().unwrap(),
        "--alpha",
        "0.5",
    ]);
    assert_eq!(rows(&t)[1][4], "entropy_rejected");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| entlab(args, None).status.code();
    assert_eq!(
        code(&[
            "negativity",
            "--n-min",
            "13",
            "--n-max",
            "13",
            "--circuit",
            "chfan"
        ]),
        Some(EXIT_CAPACITY)
    );
    assert_eq!(
        code(&["classify", "--n", "13", "--alpha", "0.1", "--all-splits"]),
        Some(EXIT_CAPACITY)
    );
    assert_eq!(
        code(&["threshold", "uch_fulldist", "--alpha", "0.1"]),
        Some(EXIT_NO_THRESHOLD)
    );
    assert_eq!(
        code(&["threshold", "nope", "--alpha", "0.1"]),
        Some(EXIT_BAD_FLAGS)
    );
    assert_eq!(
        code(&["negativity", "--alpha-decades", "3:1"]),
        Some(EXIT_BAD_FLAGS)
    );
    assert_eq!(
        code(&["classify", "--n", "5", "--alpha", "0.1", "--split", "half"]),
        Some(EXIT_BAD_FLAGS)
    );
    assert_eq!(
        code(&["classify", "--n", "4", "--alpha", "-1"]),
        Some(EXIT_BAD_FLAGS)
    );
    let out = entlab(&["bounds"], Some("zero"));
    assert_eq!(out.status.code(), Some(EXIT_BAD_FLAGS));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ENTLAB_THREADS"));
}
