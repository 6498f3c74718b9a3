//! Compiles and runs a C program against the generated header and the static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "gausspm.h"

int main(void) {
    GpmGaussianState *vac = NULL;
    GpmPhotonState *fock = NULL;
    double re = 1.0, im = 0.0, c2 = 0.0, vol = 0.0;
    if (gpm_gaussian_sqth(0.0, 0.0, 1, &vac) != GPM_STATUS_OK) return 1;
    if (gpm_photon_new(vac, GPM_SIGN_ADD, &re, &im, &fock) != GPM_STATUS_OK) return 2;
    if (gpm_photon_qcs(fock, &c2) != GPM_STATUS_OK || fabs(c2 - 3.0) > 1e-12) return 3;
    if (gpm_photon_negative_volume(fock, 0, &vol, NULL) != GPM_STATUS_OK) return 4;
    if (fabs(vol - 0.2130613) > 1e-6) return 5;
    GpmPhotonState *bad = NULL;
    if (gpm_photon_new(vac, GPM_SIGN_SUBTRACT, &re, &im, &bad) != GPM_STATUS_ANNIHILATING_SUBTRACTION) return 6;
    if (gpm_last_error_message() == NULL) return 7;
    gpm_photon_free(fock);
    gpm_gaussian_free(vac);
    printf("ok %s\n", gpm_version());
    return 0;
}
"#;

fn find_cc() -> Option<&'static str> {
    ["cc", "clang", "gcc"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
}

#[test]
fn header_declares_the_api() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/gausspm.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in [
        "GAUSSPM_H",
        "typedef struct GpmGaussianState GpmGaussianState",
        "typedef struct GpmPhotonState GpmPhotonState",
        "GPM_STATUS_ANNIHILATING_SUBTRACTION = 4",
        "GPM_SIGN_SUBTRACT = -1",
        "gpm_gaussian_new",
        "gpm_photon_wigner",
        "gpm_photon_negative_volume",
        "gpm_last_error_message",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_and_runs() {
    let cc = find_cc().expect("a C compiler is required for the ABI test");
    let exe_dir = std::env::current_exe().unwrap();
    let target_dir = exe_dir.parent().unwrap().parent().unwrap();
    let lib = target_dir.join("libgausspm_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = tmp.join("abi_check.c");
    let bin = tmp.join("abi_check");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl"])
        .arg("-o")
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("ok "), "{stdout}");
}
