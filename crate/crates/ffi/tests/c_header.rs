//! Compiles a C program against the generated header and the shared
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("rankone_ps.h").exists());
    // the shared library built alongside this test sits next to it in target/<profile>/deps
    let lib_dir = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    assert!(lib_dir.join("librankone_ps_ffi.so").exists() || lib_dir.join("librankone_ps_ffi.dylib").exists(), "{lib_dir:?}");
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <math.h>
#include <stdio.h>
#include "rankone_ps.h"

int main(void) {
    RpsGroupElement *g = NULL;
    if (rps_group_a(RPS_MODEL_H2, 1.25, &g) != RPS_STATUS_OK) return 1;
    double h = 0.0;
    if (rps_iwasawa_h(g, &h) != RPS_STATUS_OK || fabs(h - 1.25) > 1e-14) return 2;
    rps_group_free(g);
    RpsComplex c;
    if (rps_c_function(RPS_MODEL_H3, 0.0, &c) != RPS_STATUS_POLE) return 3;
    if (rps_last_error_message() == NULL) return 4;
    printf("ok %s\n", rps_version());
    return 0;
}
"#,
    )
    .unwrap();
    let exe = tmp.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&header_dir)
        .arg("-L")
        .arg(&lib_dir)
        .args(["-lrankone_ps_ffi", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = Command::new(&exe).env("LD_LIBRARY_PATH", &lib_dir).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
