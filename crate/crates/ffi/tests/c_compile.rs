//! Compile and run a small C program against the generated header and the
//! static library. Skipped when no C compiler is on PATH.

use std::path::{Path, PathBuf};
use std::process::Command;

const C_SOURCE: &str = r#"
#include <stdio.h>
#include <string.h>
#include "bbp_ffi.h"

int main(void) {
    if (bbp_catalog_count() != 15) return 1;
    BbpFormula *f = bbp_formula_by_name("log2");
    if (!f) return 2;
    char *hex = bbp_extract_digits(f, 0, 12);
    if (!hex) return 3;
    int ok = strcmp(hex, "B17217F7D1CF") == 0;
    bbp_string_free(hex);
    int64_t agreement = 0;
    if (bbp_verify(f, 192, &agreement) != BBP_STATUS_OK) return 4;
    if (agreement < 160) return 5;
    bbp_formula_free(f);
    printf("c-smoke ok, agreement %lld\n", (long long)agreement);
    return ok ? 0 : 6;
}
"#;

fn find_compiler() -> Option<&'static str> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|cc| Command::new(cc).arg("--version").output().is_ok())
}

fn static_lib_path() -> Option<PathBuf> {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = manifest.parent()?.parent()?.join("target");
    for profile in ["debug", "release"] {
        let candidate = target.join(profile).join("libbbp_ffi.a");
        if candidate.exists() {
            return Some(candidate);
        }
    }
    None
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = find_compiler() else {
        eprintln!("skipping: no C compiler found");
        return;
    };
    let Some(lib) = static_lib_path() else {
        eprintln!("skipping: staticlib not built yet");
        return;
    };
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = std::env::temp_dir().join("bbp-ffi-c-smoke");
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    let bin = dir.join("smoke");
    std::fs::write(&src, C_SOURCE).unwrap();

    let compile = Command::new(cc)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .expect("compiler invocation");
    assert!(
        compile.status.success(),
        "compile failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&bin).output().expect("run smoke binary");
    assert_eq!(
        run.status.code(),
        Some(0),
        "stdout: {} stderr: {}",
        String::from_utf8_lossy(&run.stdout),
        String::from_utf8_lossy(&run.stderr)
    );
}
