use std::ffi::{CStr, CString};
use std::ptr;

use nilgrowth_ffi::*;

fn last_error() -> String {
    let p = ng_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn handles_round_trip() {
    unsafe {
        let mut g = ptr::null_mut();
        let name = CString::new("H3").unwrap();
        assert_eq!(ng_group_new(name.as_ptr(), &mut g), NgStatus::Ok);
        let mut gs = ptr::null_mut();
        assert_eq!(ng_gens_new(g, ptr::null(), &mut gs), NgStatus::Ok);

        let mut sizes = [0u64; 3];
        assert_eq!(ng_ball_sizes(gs, 2, sizes.as_mut_ptr()), NgStatus::Ok);
        assert_eq!(sizes, [1, 5, 17]);

        let mut len = 0usize;
        let coords = [0i64, 0, 1];
        assert_eq!(ng_word_length(gs, coords.as_ptr(), 3, 10, &mut len), NgStatus::Ok);
        assert_eq!(len, 4);
        assert_eq!(ng_word_length(gs, coords.as_ptr(), 3, 2, &mut len), NgStatus::NotFound);

        let mut shape = ptr::null_mut();
        assert_eq!(ng_shape_new(gs, &mut shape), NgStatus::Ok);
        let mut d = 0.0;
        let p = [0.0, 0.0, 1.0];
        assert_eq!(ng_cc_distance(shape, p.as_ptr(), 3, &mut d), NgStatus::Ok);
        assert!((d - 4.0).abs() < 1e-10);
        let mut vol = ptr::null_mut();
        assert_eq!(ng_shape_volume(shape, &mut vol), NgStatus::Ok);
        assert_eq!(CStr::from_ptr(vol).to_str().unwrap(), "31/72");
        ng_string_free(vol);

        ng_shape_free(shape);
        ng_gens_free(gs);
        ng_group_free(g);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut g = ptr::null_mut();
        let bad = CString::new("2 1\n0 0 0 1\n").unwrap();
        assert_eq!(ng_group_new(bad.as_ptr(), &mut g), NgStatus::InvalidInput);
        assert!(g.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(ng_group_new(ptr::null(), &mut g), NgStatus::NullPointer);
        assert_eq!(last_error(), "spec is null");

        let name = CString::new("H5").unwrap();
        assert_eq!(ng_group_new(name.as_ptr(), &mut g), NgStatus::Ok);
        let mut gs = ptr::null_mut();
        let text = CString::new("1 0 0\n").unwrap();
        assert_eq!(ng_gens_new(g, text.as_ptr(), &mut gs), NgStatus::InvalidInput);
        assert_eq!(ng_gens_new(g, ptr::null(), &mut gs), NgStatus::Ok);
        let mut shape = ptr::null_mut();
        assert_eq!(ng_shape_new(gs, &mut shape), NgStatus::Ok);
        let mut vol = ptr::null_mut();
        assert_eq!(ng_shape_volume(shape, &mut vol), NgStatus::Unsupported);
        let mut d = 0.0;
        assert_eq!(ng_cc_distance(shape, [0.0; 2].as_ptr(), 2, &mut d), NgStatus::InvalidInput);
        ng_shape_free(shape);
        ng_gens_free(gs);
        ng_group_free(g);
    }
}

#[test]
fn errors_are_thread_local() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(ng_group_new(ptr::null(), &mut g), NgStatus::NullPointer);
    }
    let other = std::thread::spawn(|| ng_last_error_message().is_null()).join().unwrap();
    assert!(other);
}

/// Compiles a small C program against the generated header and the shared
/// library, when a C compiler is available.
#[test]
fn c_program_links() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header_dir = root.join("include");
    let lib_dir = root.join("../../target").join(if cfg!(debug_assertions) { "debug" } else { "release" });
    let lib = lib_dir.join("libnilgrowth_ffi.so");
    let Ok(cc) = which_cc() else { return };
    if !lib.exists() {
        eprintln!("shared library not built, skipping");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "nilgrowth.h"
int main(void) {
    NgGroup *g = NULL; NgGens *s = NULL; NgShape *sh = NULL; char *v = NULL;
    if (ng_group_new("H3", &g) != NG_STATUS_OK) return 1;
    if (ng_gens_new(g, NULL, &s) != NG_STATUS_OK) return 2;
    if (ng_shape_new(s, &sh) != NG_STATUS_OK) return 3;
    if (ng_shape_volume(sh, &v) != NG_STATUS_OK) return 4;
    int ok = strcmp(v, "31/72") == 0;
    ng_string_free(v); ng_shape_free(sh); ng_gens_free(s); ng_group_free(g);
    if (ng_group_new("nope", &g) != NG_STATUS_INVALID_INPUT) return 5;
    if (ng_last_error_message() == NULL) return 6;
    return ok ? 0 : 7;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("main");
    let status = std::process::Command::new(cc)
        .arg(&src)
        .arg("-I")
        .arg(&header_dir)
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lnilgrowth_ffi")
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let run = std::process::Command::new(&exe).env("LD_LIBRARY_PATH", &lib_dir).status().unwrap();
    assert_eq!(run.code(), Some(0));
}

fn which_cc() -> Result<&'static str, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if std::process::Command::new(cc).arg("--version").output().is_ok() {
            return Ok(cc);
        }
    }
    Err(())
}
