use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use horn_dmod_ffi::*;

fn fixture(name: &str) -> CString {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "tests", "fixtures", name].iter().collect();
    CString::new(std::fs::read_to_string(p).unwrap()).unwrap()
}

fn load(src: &CString) -> *mut HdmSystem {
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { hdm_system_from_json(src.as_ptr(), &mut sys) }, HdmStatus::Ok);
    assert!(!sys.is_null());
    sys
}

fn take(s: *mut c_char) -> serde_json::Value {
    assert!(!s.is_null());
    let v = serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    unsafe { hdm_string_free(s) };
    v
}

fn last_error() -> Option<String> {
    let p = hdm_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn gauss_round_trip() {
    let sys = load(&fixture("gauss.json"));
    unsafe {
        assert_eq!((hdm_system_rows(sys), hdm_system_cols(sys)), (4, 1));
        let mut out = ptr::null_mut();
        assert_eq!(hdm_verify_restriction(sys, 0, &mut out), HdmStatus::Ok);
        assert_eq!(take(out)["verdict"]["verdict"], "equal");
        assert_eq!(hdm_rank(sys, HdmSystemKind::Nhorn, &mut out), HdmStatus::Ok);
        let rank = take(out);
        assert_eq!(rank["rank"]["value"], 2, "{rank}");
        assert_eq!(hdm_regular(sys, &mut out), HdmStatus::Ok);
        take(out);
        hdm_system_free(sys);
    }
}

#[test]
fn statuses_follow_cli_exit_codes() {
    let ex = load(&fixture("holonomy_gap.json"));
    let horn = load(&fixture("holonomy_gap_horn.json"));
    let gauss = load(&fixture("gauss.json"));
    let appell = load(&fixture("appell_f1.json"));
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(hdm_holonomic(ex, HdmSystemKind::Default, &mut out), HdmStatus::Ok);
        assert_eq!(take(out)["holonomic"], "yes");
        assert_eq!(hdm_holonomic(horn, HdmSystemKind::Default, &mut out), HdmStatus::Negative);
        take(out);
        assert_eq!(hdm_holonomic(ex, HdmSystemKind::Horn, &mut out), HdmStatus::Negative);
        take(out);
        assert_eq!(hdm_regular(ex, &mut out), HdmStatus::Negative);
        take(out);
        let st = hdm_run(gauss, HdmAction::CheckCorrespondence, HdmSystemKind::Default, 0, 0, &mut out);
        assert_eq!(st, HdmStatus::Inconclusive);
        assert_eq!(take(out)["error"], "non-integral-kappa");
        assert!(last_error().is_some());
        assert_eq!(hdm_verify_restriction(appell, 1, &mut out), HdmStatus::Inconclusive);
        take(out);
        assert_eq!(hdm_report(ex, 0, &mut out), HdmStatus::Ok);
        let rep = take(out);
        assert!(rep.get("restriction").is_some() && rep.get("lattice").is_some());
        for s in [ex, horn, gauss, appell] {
            hdm_system_free(s);
        }
    }
}

#[test]
fn rejects_bad_input() {
    unsafe {
        let mut sys = ptr::null_mut();
        for src in [r#"{"B": [[1], [-1]]"#, r#"{"B": [[1], [-1]], "kappa": [0]}"#, r#"{"B": [[0], [0]], "kappa": [0, 0]}"#] {
            let c = CString::new(src).unwrap();
            assert_eq!(hdm_system_from_json(c.as_ptr(), &mut sys), HdmStatus::InputError, "{src}");
            assert!(sys.is_null());
            assert!(last_error().is_some());
        }
        assert_eq!(hdm_system_from_json(ptr::null(), &mut sys), HdmStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(hdm_system_from_json(bad.as_ptr().cast(), &mut sys), HdmStatus::InvalidUtf8);
        let mut out = ptr::null_mut();
        assert_eq!(hdm_regular(ptr::null(), &mut out), HdmStatus::NullPointer);
        assert!(out.is_null());
        let ok = load(&fixture("toy_half.json"));
        assert_eq!(hdm_regular(ok, ptr::null_mut()), HdmStatus::NullPointer);
        assert_eq!(hdm_regular(ok, &mut out), HdmStatus::Ok);
        take(out);
        assert!(last_error().is_none());
        hdm_system_free(ok);
        hdm_system_free(ptr::null_mut());
        hdm_string_free(ptr::null_mut());
    }
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(hdm_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Compiles a small C program against the generated header and the static
/// library and runs it.
#[test]
fn header_links_from_c() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libhorn_dmod_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let dir = std::env::temp_dir().join(format!("horn-dmod-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "horn_dmod.h"

int main(void) {
    const char *in = "{\"B\": [[1], [-1]], \"kappa\": [0, \"1/2\"]}";
    HdmSystem *sys = NULL;
    if (hdm_system_from_json(in, &sys) != HDM_STATUS_OK) return 10;
    if (hdm_system_rows(sys) != 2 || hdm_system_cols(sys) != 1) return 11;
    char *out = NULL;
    if (hdm_verify_restriction(sys, 0, &out) != HDM_STATUS_OK) return 12;
    if (strstr(out, "\"equal\"") == NULL) return 13;
    hdm_string_free(out);
    if (hdm_system_from_json("{", &sys) != HDM_STATUS_INPUT_ERROR) return 14;
    if (hdm_last_error() == NULL) return 15;
    hdm_system_free(sys);
    puts(hdm_version());
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.join("main");
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), env!("CARGO_PKG_VERSION"));
    let _ = std::fs::remove_dir_all(&dir);
}
