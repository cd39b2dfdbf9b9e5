//! Golden-file cases for the command-line tool.
//!
//! Each case runs the binary inside a scratch copy of `tests/fixtures/cli`
//! using relative paths only, and records the exit code, stdout, stderr and
//! any `--out` artifacts in a transcript. Set `BLESS=1` to rewrite the
//! stored transcripts under `tests/golden`.

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub env: &'static [(&'static str, &'static str)],
    pub outputs: &'static [&'static str],
    pub exit: i32,
}

const fn case(name: &'static str, args: &'static [&'static str], outputs: &'static [&'static str], exit: i32) -> Case {
    Case {
        name,
        args,
        env: &[],
        outputs,
        exit,
    }
}

pub const CASES: &[Case] = &[
    case("connect_identity", &["connect", "--h1", "i2.json", "--h2", "i2.json", "--out", "g.json"], &["g.json"], 0),
    case(
        "connect_complex",
        &["connect", "--h1", "h1_complex.json", "--h2", "h2_complex.json", "--out", "g.json"],
        &["g.json"],
        0,
    ),
    case("triple_g_j", &["triple", "--g", "g4.json", "--j", "j4.json", "--out", "triple.json"], &["triple.json"], 0),
    case(
        "triple_g_omega",
        &["triple", "--g", "g2.json", "--omega", "omega2.json", "--out", "triple.json"],
        &["triple.json"],
        0,
    ),
    case("hermitian", &["hermitian", "--triple", "triple4.json", "--out", "h.json"], &["h.json"], 0),
    case("spectrum_generic", &["spectrum", "--h1", "i2.json", "--h2", "diag12.json"], &[], 0),
    case("spectrum_degenerate", &["spectrum", "--h1", "i3.json", "--h2", "deg3.json"], &[], 0),
    case("generic_generic", &["generic", "--h1", "i2.json", "--h2", "diag12.json"], &[], 0),
    case(
        "generic_degenerate_text",
        &["generic", "--h1", "i3.json", "--h2", "deg3.json", "--seed", "5", "--format", "text"],
        &[],
        0,
    ),
    case("decompose_complex", &["decompose", "--h1", "h1_complex.json", "--h2", "h2_complex.json"], &[], 0),
    case("decompose_degenerate", &["decompose", "--h1", "i3.json", "--h2", "deg3.json"], &[], 0),
    case(
        "sample_u_complex",
        &["sample-u", "--h1", "h1_complex.json", "--h2", "h2_complex.json", "--seed", "7", "--out", "u.json"],
        &["u.json"],
        0,
    ),
    case(
        "sample_u_degenerate",
        &["sample-u", "--h1", "i3.json", "--h2", "deg3.json", "--seed", "3", "--out", "u.json"],
        &["u.json"],
        0,
    ),
    case("verify_u_swap", &["verify-u", "--u", "swap.json", "--h1", "i2.json", "--h2", "diag12.json"], &[], 1),
    case("verify_u_phase", &["verify-u", "--u", "phase.json", "--h1", "i2.json", "--h2", "diag12.json"], &[], 0),
    case(
        "verify_u_swap_quiet",
        &["verify-u", "--u", "swap.json", "--h1", "i2.json", "--h2", "diag12.json", "--quiet"],
        &[],
        1,
    ),
    case(
        "tolerance_flags",
        &["spectrum", "--h1", "i2.json", "--h2", "diag12.json", "--tol-eig", "0.5", "--tol-resid", "1e-12"],
        &[],
        0,
    ),
    Case {
        name: "tolerance_env",
        args: &["spectrum", "--h1", "i2.json", "--h2", "diag12.json"],
        env: &[("BIHERM_TOL_EIG", "0.5")],
        outputs: &[],
        exit: 0,
    },
    Case {
        name: "tolerance_flag_beats_env",
        args: &["spectrum", "--h1", "i2.json", "--h2", "diag12.json", "--tol-eig", "1e-8"],
        env: &[("BIHERM_TOL_EIG", "0.5")],
        outputs: &[],
        exit: 0,
    },
    case("error_bad_kind", &["spectrum", "--h1", "bad_kind.json", "--h2", "i2.json"], &[], 2),
    case("error_not_symmetric", &["connect", "--h1", "not_symmetric.json", "--h2", "i2.json", "--out", "g.json"], &[], 2),
    case("error_not_positive", &["generic", "--h1", "i2.json", "--h2", "not_positive.json"], &[], 2),
    case("error_truncated", &["decompose", "--h1", "truncated.json", "--h2", "i2.json"], &[], 2),
    case("error_short_data", &["spectrum", "--h1", "short_data.json", "--h2", "i2.json"], &[], 2),
    case("error_missing_file", &["spectrum", "--h1", "missing.json", "--h2", "i2.json"], &[], 2),
    case("error_dim_mismatch", &["spectrum", "--h1", "i3.json", "--h2", "i2.json"], &[], 2),
    case("error_wrong_u_dim", &["verify-u", "--u", "swap.json", "--h1", "i3.json", "--h2", "deg3.json"], &[], 2),
    case("error_triple_not_bundle", &["hermitian", "--triple", "g4.json", "--out", "h.json"], &[], 2),
    case(
        "error_degenerate_omega",
        &["triple", "--g", "g2.json", "--omega", "zero2.json", "--out", "triple.json"],
        &[],
        2,
    ),
    case("error_odd_j", &["triple", "--g", "i3.json", "--j", "i3.json", "--out", "triple.json"], &[], 2),
    case("error_bad_tolerance", &["spectrum", "--h1", "i2.json", "--h2", "i2.json", "--tol-eig=-1"], &[], 2),
    case(
        "error_j_and_omega",
        &["triple", "--g", "g2.json", "--j", "j4.json", "--omega", "omega2.json", "--out", "t.json"],
        &[],
        2,
    ),
    case("error_missing_argument", &["spectrum", "--h1", "i2.json"], &[], 2),
    case("error_unknown_subcommand", &["factorize"], &[], 2),
];

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixtures_dir() -> PathBuf {
    manifest_dir().join("tests/fixtures/cli")
}

pub fn golden_path(case: &Case) -> PathBuf {
    manifest_dir().join("tests/golden").join(format!("{}.txt", case.name))
}

fn copy_fixtures(to: &Path) {
    for entry in std::fs::read_dir(fixtures_dir()).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), to.join(entry.file_name())).unwrap();
    }
}

/// Runs `case` in a fresh scratch directory and returns the exit code and
/// transcript.
pub fn run_case(case: &Case) -> (i32, String) {
    let dir = tempfile::tempdir().unwrap();
    copy_fixtures(dir.path());
    let output = Command::new(env!("CARGO_BIN_EXE_biherm"))
        .args(case.args)
        .current_dir(dir.path())
        .env_remove("BIHERM_TOL_EIG")
        .envs(case.env.iter().copied())
        .output()
        .expect("binary runs");
    let code = output.status.code().expect("exited normally");

    let mut t = String::new();
    for (k, v) in case.env {
        t.push_str(&format!("{k}={v} "));
    }
    t.push_str(&format!("$ biherm {}\n", case.args.join(" ")));
    t.push_str(&format!("exit: {code}\n"));
    t.push_str("--- stdout\n");
    t.push_str(&String::from_utf8_lossy(&output.stdout));
    t.push_str("--- stderr\n");
    t.push_str(&String::from_utf8_lossy(&output.stderr));
    for name in case.outputs {
        t.push_str(&format!("--- {name}\n"));
        match std::fs::read_to_string(dir.path().join(name)) {
            Ok(s) => t.push_str(&s),
            Err(_) => t.push_str("(missing)\n"),
        }
    }
    (code, t)
}

pub fn blessing() -> bool {
    std::env::var_os("BLESS").is_some()
}

/// Outcome of one golden comparison.
pub struct GoldenResult {
    pub exit_ok: bool,
    pub deterministic: bool,
    pub matches_golden: bool,
    pub transcript: String,
}

pub fn check_case(case: &Case) -> GoldenResult {
    let (code1, first) = run_case(case);
    let (_, second) = run_case(case);
    let path = golden_path(case);
    if blessing() && first == second {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &first).unwrap();
    }
    let stored = std::fs::read_to_string(&path).unwrap_or_default();
    GoldenResult {
        exit_ok: code1 == case.exit,
        deterministic: first == second,
        matches_golden: first == stored,
        transcript: first,
    }
}
