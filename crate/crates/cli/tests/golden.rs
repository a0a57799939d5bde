//! End-to-end runs of the binary compared against checked-in golden files.
//! After an intentional output change, regenerate with
//! `UPDATE_GOLDEN=1 cargo test -p flower-iet-cli`.
//!
//! The ergopt goldens contain floats that pass through the platform's
//! sin/cos; they are stable on a given libm and may need regeneration on
//! an exotic one.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_flower-iet"));
    c.env_remove("FLOWER_IET_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| {
        panic!(
            "missing golden file {}; create it with UPDATE_GOLDEN=1",
            path.display()
        )
    });
    assert_eq!(
        actual, expected,
        "output drifted from {name}; regenerate with UPDATE_GOLDEN=1 if intended"
    );
}

fn tmp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("flower-iet-golden");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn orbits_tally_matches_goldens() {
    golden("orbits_tally_8.txt", &stdout_of(&["orbits-tally", "--max-period", "8"]));
    golden(
        "orbits_tally_8.csv",
        &stdout_of(&["orbits-tally", "--max-period", "8", "--out", "csv"]),
    );
    golden(
        "orbits_tally_8.json",
        &stdout_of(&["orbits-tally", "--max-period", "8", "--out", "json"]),
    );
}

#[test]
fn orbits_tally_minimal_census_is_the_fixed_point() {
    assert_eq!(stdout_of(&["orbits-tally", "--max-period", "1"]), "1 | 2 | 0\n");
}

#[test]
fn orbits_tally_full_census_matches_the_table() {
    let out = stdout_of(&["orbits-tally"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.first(), Some(&"1 | 65 | 0"));
    assert_eq!(lines.last(), Some(&"11 | 28 | 000100111011"));
    assert_eq!(lines.len(), 6);
}

#[test]
fn example_tables_match_goldens() {
    golden("example_1.txt", &stdout_of(&["example", "1"]));
    golden("example_2.txt", &stdout_of(&["example", "2"]));
    golden("example_3.txt", &stdout_of(&["example", "3"]));
}

#[test]
fn example_json_lists_the_five_plateaus() {
    let doc: serde_json::Value =
        serde_json::from_str(&stdout_of(&["example", "1", "--out", "json"])).unwrap();
    let plateaus = doc["plateaus"].as_array().unwrap();
    assert_eq!(plateaus.len(), 5);
    let values: Vec<&str> = plateaus.iter().map(|p| p["value"].as_str().unwrap()).collect();
    assert_eq!(values, ["3/31", "6/31", "12/31", "17/31", "24/31"]);
    assert_eq!(doc["orbits"].as_array().unwrap().len(), 1);
}

#[test]
fn examples_have_no_csv_form() {
    let out = run(&["example", "1", "--out", "csv"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn iet_code_matches_goldens() {
    golden(
        "iet_code_exact.txt",
        &stdout_of(&["iet-code", "--lengths", "2/5,1/5,1/5,1/5", "--x", "1/2"]),
    );
    // depth 4 cannot close the period-9 orbit of 1/7, so this one truncates
    golden(
        "iet_code_truncated.txt",
        &stdout_of(&[
            "iet-code",
            "--lengths",
            "1/3,1/6,1/4,1/4",
            "--x",
            "1/7",
            "--depth",
            "4",
        ]),
    );
}

#[test]
fn flower_commands_match_goldens() {
    golden(
        "iet_flower.txt",
        &stdout_of(&["iet-flower", "--lengths", "3/10,2/10,2/10,3/10"]),
    );
    golden("orbit_flower_0011.txt", &stdout_of(&["orbit-flower", "--word", "0011"]));
}

#[test]
fn round_trip_matches_goldens() {
    golden("round_trip_0011.txt", &stdout_of(&["round-trip", "--word", "0011"]));
    golden(
        "round_trip_all_6.txt",
        &stdout_of(&["round-trip", "--all", "--max-period", "6"]),
    );
    golden(
        "round_trip_all_6.csv",
        &stdout_of(&["round-trip", "--all", "--max-period", "6", "--out", "csv"]),
    );
}

#[test]
fn ergopt_matches_goldens() {
    let log = tmp_path("ergopt_log.csv");
    let out = stdout_of(&[
        "ergopt",
        "--degree",
        "3",
        "--samples",
        "20",
        "--seed",
        "7",
        "--max-period",
        "8",
        "--threads",
        "1",
        "--log-csv",
        log.to_str().unwrap(),
    ]);
    golden("ergopt_20.txt", &out);
    golden("ergopt_20_log.csv", &fs::read_to_string(&log).unwrap());
}

#[test]
fn ergopt_output_is_thread_count_invariant() {
    let args = |threads: &'static str| {
        vec![
            "ergopt", "--samples", "40", "--seed", "3", "--max-period", "8", "--threads", threads,
        ]
    };
    assert_eq!(stdout_of(&args("1")), stdout_of(&args("4")));
}

#[test]
fn render_svgs_match_goldens() {
    let flower = tmp_path("flower_0011.svg");
    stdout_of(&["render", "--word", "0011", "--svg", flower.to_str().unwrap()]);
    golden("flower_0011.svg", &fs::read_to_string(&flower).unwrap());

    let graph = tmp_path("render_shuffler.svg");
    stdout_of(&[
        "render",
        "--lengths",
        "2/5,1/5,1/5,1/5",
        "--svg",
        graph.to_str().unwrap(),
    ]);
    golden("render_shuffler.svg", &fs::read_to_string(&graph).unwrap());
}

#[test]
fn example_svg_matches_golden() {
    let path = tmp_path("example_1.svg");
    stdout_of(&["example", "1", "--svg", path.to_str().unwrap()]);
    golden("example_1.svg", &fs::read_to_string(&path).unwrap());
}

#[test]
fn config_file_supplies_defaults() {
    let path = tmp_path("defaults.conf");
    fs::write(&path, "# defaults for tests\nmax-period = 6\n").unwrap();
    let with_config = stdout_of(&["orbits-tally", "--config", path.to_str().unwrap()]);
    assert_eq!(with_config, stdout_of(&["orbits-tally", "--max-period", "6"]));
    // an explicit flag still wins
    let overridden = stdout_of(&[
        "orbits-tally",
        "--config",
        path.to_str().unwrap(),
        "--max-period",
        "1",
    ]);
    assert_eq!(overridden, "1 | 2 | 0\n");
}

#[test]
fn env_var_sets_the_thread_default() {
    let args = ["ergopt", "--samples", "20", "--seed", "9", "--max-period", "8"];
    let via_env = bin().args(args).env("FLOWER_IET_THREADS", "2").output().unwrap();
    assert!(via_env.status.success());
    let mut with_flag = args.to_vec();
    with_flag.extend(["--threads", "2"]);
    assert_eq!(
        String::from_utf8(via_env.stdout).unwrap(),
        stdout_of(&with_flag)
    );
}

#[test]
fn json_outputs_parse() {
    for args in [
        vec!["iet-code", "--lengths", "1/2,1/2", "--x", "1/4", "--out", "json"],
        vec!["iet-flower", "--lengths", "1/2,1/4,1/8,1/8", "--out", "json"],
        vec!["orbit-flower", "--word", "00101", "--out", "json"],
        vec!["round-trip", "--word", "001011", "--out", "json"],
        vec!["round-trip", "--all", "--max-period", "4", "--out", "json"],
        vec!["ergopt", "--samples", "5", "--max-period", "6", "--out", "json"],
        vec!["example", "3", "--out", "json"],
    ] {
        let text = stdout_of(&args);
        serde_json::from_str::<serde_json::Value>(&text)
            .unwrap_or_else(|e| panic!("{args:?} produced invalid json: {e}"));
    }
}

#[test]
fn validation_failures_exit_one() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["iet-code", "--lengths", "1/2,1/3", "--x", "0"],
        vec!["iet-code", "--lengths", "1/2,1/2", "--x", "3/2"],
        vec!["iet-code", "--lengths", "1/2,1/2", "--x", "1/4", "--depth", "0"],
        vec!["round-trip", "--word", "0"],
        vec!["round-trip", "--all", "--max-period", "25"],
        vec!["round-trip"],
        vec!["orbit-flower", "--word", "0x1"],
        vec!["ergopt", "--degree", "2", "--samples", "5"],
        vec!["example", "7"],
        vec!["render", "--svg", "/tmp/unused.svg"],
        vec!["no-such-command"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(
            exit_code(&out),
            1,
            "{args:?} should exit 1, stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let env_case = bin()
        .args(["ergopt", "--samples", "5"])
        .env("FLOWER_IET_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(env_case.status.code(), Some(1));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(exit_code(&run(&["--help"])), 0);
    assert_eq!(exit_code(&run(&["--version"])), 0);
    assert_eq!(exit_code(&run(&["round-trip", "--help"])), 0);
}
