//! End-to-end tests running the real binary: file round trips, exit codes,
//! and the documented diagnostics split (machine output on stdout, human
//! text on stderr).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use unipar::{Complex64, ComplexMatrix};
use unipar_cli::files::{MatrixFile, ParameterFile, RawParameterFile};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_unipar")
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn read_params(path: &Path) -> ParameterFile {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn read_matrix(path: &Path) -> MatrixFile {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn write_matrix(path: &Path, m: &ComplexMatrix) {
    let file = MatrixFile::from_matrix(m);
    std::fs::write(path, serde_json::to_string_pretty(&file).unwrap()).unwrap();
}

fn matrix_diff(a: &MatrixFile, b: &MatrixFile) -> f64 {
    let mut worst = 0.0f64;
    for (ra, rb) in a.re.iter().zip(&b.re).chain(a.im.iter().zip(&b.im)) {
        for (x, y) in ra.iter().zip(rb) {
            worst = worst.max((x - y).abs());
        }
    }
    worst
}

struct Dir {
    root: tempfile::TempDir,
}

impl Dir {
    fn new() -> Self {
        Dir {
            root: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self) -> &Path {
        self.root.path()
    }

    fn file(&self, name: &str) -> PathBuf {
        self.root.path().join(name)
    }
}

#[test]
fn sample_is_deterministic_per_seed() {
    let dir = Dir::new();
    for name in ["a.json", "b.json"] {
        let out = run(dir.path(), &["sample", name, "--n", "5", "--seed", "123"]);
        assert_eq!(exit_code(&out), 0, "{}", stderr_text(&out));
    }
    let a = std::fs::read(dir.file("a.json")).unwrap();
    let b = std::fs::read(dir.file("b.json")).unwrap();
    assert_eq!(a, b, "same seed must give byte-identical files");
    let out = run(dir.path(), &["sample", "c.json", "--n", "5", "--seed", "124"]);
    assert_eq!(exit_code(&out), 0);
    let c = std::fs::read(dir.file("c.json")).unwrap();
    assert_ne!(a, c, "different seeds must differ");
}

#[test]
fn sample_order_one_has_no_levels() {
    let dir = Dir::new();
    let out = run(dir.path(), &["sample", "p.json", "--n", "1"]);
    assert_eq!(exit_code(&out), 0);
    let p = read_params(&dir.file("p.json"));
    assert_eq!(p.n, 1);
    assert_eq!(p.alpha.len(), 1);
    assert_eq!(p.beta, vec![0.0]);
    assert!(p.levels.is_empty());
}

#[test]
fn sample_with_matrix_output_passes_verify() {
    let dir = Dir::new();
    let out = run(
        dir.path(),
        &[
            "sample", "p.json", "--n", "6", "--seed", "9", "--matrix-out", "m.json",
        ],
    );
    assert_eq!(exit_code(&out), 0);
    let verify = run(dir.path(), &["verify", "m.json", "--tolerance", "1e-10"]);
    assert_eq!(exit_code(&verify), 0, "{}", stdout_text(&verify));
    let report: serde_json::Value = serde_json::from_str(&stdout_text(&verify)).unwrap();
    assert_eq!(report["pass"], serde_json::Value::Bool(true));
    assert_eq!(report["n"], serde_json::json!(6));
}

#[test]
fn compose_order_two_rotation_closed_form() {
    let dir = Dir::new();
    let params = serde_json::json!({
        "n": 2,
        "alpha": [0.0, 0.0],
        "beta": [0.0, 0.0],
        "levels": [{"theta": 0.3, "gammas": [], "deltas": []}]
    });
    std::fs::write(dir.file("p.json"), params.to_string()).unwrap();
    let out = run(dir.path(), &["compose", "p.json", "m.json"]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_text(&out));
    assert!(
        stderr_text(&out).contains("unitarity deviation"),
        "diagnostics should report the deviation"
    );
    let m = read_matrix(&dir.file("m.json"));
    let (c, s) = (0.3f64.cos(), 0.3f64.sin());
    let expected = MatrixFile {
        n: 2,
        re: vec![vec![c, s], vec![-s, c]],
        im: vec![vec![0.0, 0.0], vec![0.0, 0.0]],
    };
    assert!(matrix_diff(&m, &expected) < 1e-15);
}

#[test]
fn compose_all_zero_parameters_gives_identity() {
    let dir = Dir::new();
    let params = serde_json::json!({
        "n": 4,
        "alpha": [0.0, 0.0, 0.0, 0.0],
        "beta": [0.0, 0.0, 0.0, 0.0],
        "levels": [
            {"theta": 0.0, "gammas": [], "deltas": []},
            {"theta": 0.0, "gammas": [0.0], "deltas": [0.0]},
            {"theta": 0.0, "gammas": [0.0, 0.0], "deltas": [0.0, 0.0]}
        ]
    });
    std::fs::write(dir.file("p.json"), params.to_string()).unwrap();
    let out = run(dir.path(), &["compose", "p.json", "m.json"]);
    assert_eq!(exit_code(&out), 0);
    let m = read_matrix(&dir.file("m.json"));
    let identity = MatrixFile::from_matrix(&ComplexMatrix::identity(4));
    assert!(matrix_diff(&m, &identity) < 1e-15);
}

#[test]
fn decompose_identity_gives_all_zero_parameters() {
    let dir = Dir::new();
    write_matrix(&dir.file("m.json"), &ComplexMatrix::identity(3));
    let out = run(dir.path(), &["decompose", "m.json", "p.json"]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_text(&out));
    let p = read_params(&dir.file("p.json"));
    assert!(p.alpha.iter().all(|&x| x == 0.0));
    assert!(p.beta.iter().all(|&x| x == 0.0));
    for lv in &p.levels {
        assert_eq!(lv.theta, 0.0);
        assert!(lv.gammas.iter().all(|&x| x == 0.0));
        assert!(lv.deltas.iter().all(|&x| x == 0.0));
    }
}

#[test]
fn pipeline_round_trip_matches_within_tolerance() {
    let dir = Dir::new();
    let sample = run(
        dir.path(),
        &[
            "sample", "p1.json", "--n", "5", "--seed", "31", "--matrix-out", "m1.json",
        ],
    );
    assert_eq!(exit_code(&sample), 0);
    assert_eq!(
        exit_code(&run(dir.path(), &["decompose", "m1.json", "p2.json"])),
        0
    );
    assert_eq!(
        exit_code(&run(dir.path(), &["compose", "p2.json", "m2.json"])),
        0
    );
    let m1 = read_matrix(&dir.file("m1.json"));
    let m2 = read_matrix(&dir.file("m2.json"));
    assert!(matrix_diff(&m1, &m2) < 1e-9 * 5.0);
    // The recovered parameters themselves match the sampled ones.
    let p1 = read_params(&dir.file("p1.json"));
    let p2 = read_params(&dir.file("p2.json"));
    for (a, b) in p1.alpha.iter().zip(&p2.alpha) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn decompose_rejects_non_unitary_without_writing() {
    let dir = Dir::new();
    // Deviation about 2e-3: passes nothing at the default gate.
    let mut m = ComplexMatrix::identity(3);
    m.set(0, 0, Complex64::new(1.001, 0.0));
    write_matrix(&dir.file("m.json"), &m);
    let out = run(dir.path(), &["decompose", "m.json", "p.json"]);
    assert_eq!(exit_code(&out), 3);
    assert!(stderr_text(&out).contains("deviation"));
    assert!(!dir.file("p.json").exists(), "no output on gate failure");
    // The same input passes under an explicit loose gate.
    let loose = run(
        dir.path(),
        &["decompose", "m.json", "p.json", "--tolerance", "0.01"],
    );
    assert_eq!(exit_code(&loose), 0, "{}", stderr_text(&loose));
    assert!(dir.file("p.json").exists());
}

#[test]
fn verify_exit_codes_follow_the_gate() {
    let dir = Dir::new();
    write_matrix(&dir.file("id.json"), &ComplexMatrix::identity(2));
    let pass = run(dir.path(), &["verify", "id.json"]);
    assert_eq!(exit_code(&pass), 0);
    let scaled = ComplexMatrix::diagonal(&[Complex64::new(1.1, 0.0), Complex64::new(1.1, 0.0)]);
    write_matrix(&dir.file("scaled.json"), &scaled);
    let fail = run(dir.path(), &["verify", "scaled.json"]);
    assert_eq!(exit_code(&fail), 3);
    // The report is still printed on failure.
    let report: serde_json::Value = serde_json::from_str(&stdout_text(&fail)).unwrap();
    assert_eq!(report["pass"], serde_json::Value::Bool(false));
}

#[test]
fn malformed_documents_exit_two_and_name_the_field() {
    let dir = Dir::new();
    std::fs::write(
        dir.file("noim.json"),
        r#"{"n": 2, "re": [[1.0, 0.0], [0.0, 1.0]]}"#,
    )
    .unwrap();
    let out = run(dir.path(), &["verify", "noim.json"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_text(&out).contains("im"), "{}", stderr_text(&out));

    std::fs::write(
        dir.file("ragged.json"),
        r#"{"n": 2, "re": [[1.0, 0.0], [0.0]], "im": [[0.0, 0.0], [0.0, 0.0]]}"#,
    )
    .unwrap();
    let ragged = run(dir.path(), &["decompose", "ragged.json", "p.json"]);
    assert_eq!(exit_code(&ragged), 2);
    assert!(stderr_text(&ragged).contains("re[1]"));

    std::fs::write(
        dir.file("badlevels.json"),
        r#"{"n": 3, "alpha": [0.0, 0.0, 0.0], "beta": [0.0, 0.0, 0.0],
            "levels": [{"theta": 0.1, "gammas": [], "deltas": []},
                       {"theta": 0.1, "gammas": [0.2, 0.3], "deltas": [0.4]}]}"#,
    )
    .unwrap();
    let levels = run(dir.path(), &["compose", "badlevels.json", "m.json"]);
    assert_eq!(exit_code(&levels), 2);
    assert!(
        stderr_text(&levels).contains("levels[1].gammas"),
        "{}",
        stderr_text(&levels)
    );

    std::fs::write(dir.file("syntax.json"), "{not json").unwrap();
    let syntax = run(dir.path(), &["compose", "syntax.json", "m.json"]);
    assert_eq!(exit_code(&syntax), 2);
}

#[test]
fn unreadable_input_exits_one() {
    let dir = Dir::new();
    let out = run(dir.path(), &["decompose", "missing.json", "p.json"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn unwritable_output_exits_one() {
    let dir = Dir::new();
    write_matrix(&dir.file("m.json"), &ComplexMatrix::identity(2));
    let out = run(
        dir.path(),
        &["decompose", "m.json", "nodir/sub/p.json"],
    );
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn fit_identity_target_gives_near_zero_parameters() {
    let dir = Dir::new();
    write_matrix(&dir.file("t.json"), &ComplexMatrix::identity(3));
    let out = run(dir.path(), &["fit", "t.json", "p.json"]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_text(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout_text(&out)).unwrap();
    assert!(report["distance"].as_f64().unwrap() < 1e-8);
    let p = read_params(&dir.file("p.json"));
    assert!(p.alpha.iter().all(|&x| x.abs() < 1e-8));
    for lv in &p.levels {
        assert!(lv.theta.abs() < 1e-8);
    }
}

#[test]
fn fit_zero_scalar_target_reports_distance_one() {
    let dir = Dir::new();
    std::fs::write(dir.file("t.json"), r#"{"n": 1, "re": [[0.0]], "im": [[0.0]]}"#).unwrap();
    let out = run(dir.path(), &["fit", "t.json", "p.json"]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout_text(&out)).unwrap();
    let distance = report["distance"].as_f64().unwrap();
    assert!((distance - 1.0).abs() < 1e-12, "distance {distance}");
}

#[test]
fn fit_rejects_overflowing_numbers_with_exit_four() {
    let dir = Dir::new();
    std::fs::write(
        dir.file("t.json"),
        r#"{"n": 1, "re": [[1e999]], "im": [[0.0]]}"#,
    )
    .unwrap();
    let out = run(dir.path(), &["fit", "t.json", "p.json"]);
    assert_eq!(exit_code(&out), 4, "{}", stderr_text(&out));
}

#[test]
fn raw_decomposition_file_has_directions_and_phases() {
    let dir = Dir::new();
    let sample = run(
        dir.path(),
        &[
            "sample", "p.json", "--n", "4", "--seed", "5", "--matrix-out", "m.json",
        ],
    );
    assert_eq!(exit_code(&sample), 0);
    let out = run(dir.path(), &["decompose", "m.json", "raw.json", "--raw"]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_text(&out));
    let raw: RawParameterFile =
        serde_json::from_str(&std::fs::read_to_string(dir.file("raw.json")).unwrap()).unwrap();
    assert_eq!(raw.n, 4);
    assert_eq!(raw.psi.len(), 4);
    assert_eq!(raw.levels.len(), 3);
    for (idx, lv) in raw.levels.iter().enumerate() {
        assert_eq!(lv.level, idx + 1);
        assert_eq!(lv.re.len(), idx + 1);
        assert_eq!(lv.im.len(), idx + 1);
    }
}

#[test]
fn compose_normalises_nonzero_leading_beta_with_warning() {
    let dir = Dir::new();
    let params = serde_json::json!({
        "n": 2,
        "alpha": [0.1, 0.2],
        "beta": [0.3, 0.4],
        "levels": [{"theta": 0.5, "gammas": [], "deltas": []}]
    });
    std::fs::write(dir.file("p.json"), params.to_string()).unwrap();
    let out = run(dir.path(), &["compose", "p.json", "m.json"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stderr_text(&out).contains("beta[0]"), "{}", stderr_text(&out));
    // Equivalent pinned document composes to the same matrix.
    let pinned = serde_json::json!({
        "n": 2,
        "alpha": [0.4, 0.5],
        "beta": [0.0, 0.10000000000000003],
        "levels": [{"theta": 0.5, "gammas": [], "deltas": []}]
    });
    std::fs::write(dir.file("q.json"), pinned.to_string()).unwrap();
    assert_eq!(exit_code(&run(dir.path(), &["compose", "q.json", "m2.json"])), 0);
    let m1 = read_matrix(&dir.file("m.json"));
    let m2 = read_matrix(&dir.file("m2.json"));
    assert!(matrix_diff(&m1, &m2) < 1e-15);
}

#[test]
fn written_numbers_round_trip_exactly() {
    let dir = Dir::new();
    let sample = run(dir.path(), &["sample", "p.json", "--n", "4", "--seed", "77"]);
    assert_eq!(exit_code(&sample), 0);
    let p = read_params(&dir.file("p.json"));
    // Re-serialise and re-parse: values must be bit-identical.
    let text = serde_json::to_string(&p).unwrap();
    let again: ParameterFile = serde_json::from_str(&text).unwrap();
    assert_eq!(p.alpha, again.alpha);
    assert_eq!(p.beta, again.beta);
    for (a, b) in p.levels.iter().zip(&again.levels) {
        assert_eq!(a.theta.to_bits(), b.theta.to_bits());
        assert_eq!(a.gammas, b.gammas);
        assert_eq!(a.deltas, b.deltas);
    }
}
