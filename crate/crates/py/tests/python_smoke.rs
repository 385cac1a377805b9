//! Builds the cdylib and runs python/smoke_test.py against it.

use std::path::{Path, PathBuf};
use std::process::Command;

/// `cargo test` builds only the rlib, so build the cdylib into the same target dir.
fn build_library() -> PathBuf {
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let status = Command::new(cargo)
        .args(["build", "--quiet", "-p", "chemoflux-py", "--lib"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .status()
        .expect("spawn cargo");
    assert!(status.success(), "cdylib build failed");
    // target/<profile>/deps/<test exe> -> target/debug/
    let exe = std::env::current_exe().unwrap();
    let target = exe.parent().unwrap().parent().unwrap().parent().unwrap();
    let lib = target.join("debug/libchemoflux_py.so");
    assert!(lib.exists(), "{} missing", lib.display());
    lib
}

#[test]
fn python_smoke_test() {
    if Command::new("python3").arg("--version").output().is_err() {
        eprintln!("skipping: python3 unavailable");
        return;
    }
    let lib = build_library();
    let script = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../python/smoke_test.py");
    let out = Command::new("python3").arg(&script).env("CHEMOFLUX_PY_LIB", &lib).output().unwrap();
    assert!(
        out.status.success(),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("python smoke test: ok"));
}
