use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "uarea.h"

int main(void) {
    UareaValuation *t_hat = NULL;
    UareaMeasure *g = NULL, *out = NULL;
    if (uarea_valuation_parse(2, "t_hat", &t_hat) != UAREA_STATUS_OK) return 10;
    if (uarea_measure_parse(2, "Gamma[2,1]", &g) != UAREA_STATUS_OK) return 11;
    if (uarea_act(t_hat, g, &out) != UAREA_STATUS_OK) return 12;
    char *s = uarea_measure_to_string(out);
    int ok = strcmp(s, "4/3 * pi^-1 * Gamma[1,0]") == 0;
    printf("%s\n", s);
    uarea_string_free(s);
    uarea_measure_free(out);
    uarea_measure_free(g);
    uarea_valuation_free(t_hat);
    if (!ok) return 13;
    UareaMeasure *bad = NULL;
    if (uarea_measure_parse(2, "B[2,1]", &bad) != UAREA_STATUS_PARSE) return 14;
    if (uarea_last_error() == NULL) return 15;
    return 0;
}
"#;

fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = artifact_dir().join("libuarea_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = tmp.join("uarea_ffi_smoke.c");
    let bin = tmp.join("uarea_ffi_smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&bin)
        .arg(&src)
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .expect("a C compiler");
    assert!(status.success());
    let run = Command::new(&bin).output().unwrap();
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stdout));
    assert_eq!(String::from_utf8(run.stdout).unwrap(), "4/3 * pi^-1 * Gamma[1,0]\n");
}
