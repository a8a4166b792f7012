use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use invsemi_ffi::*;

fn last_error() -> String {
    let p = invsemi_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn fixture(name: &str) -> *mut InvsemiSemigroup {
    let name = CString::new(name).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { invsemi_semigroup_fixture(name.as_ptr(), &mut s) },
        InvsemiStatus::Ok
    );
    s
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let text = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { invsemi_string_free(p) };
    text
}

#[test]
fn table_round_trip() {
    // Z3
    let table: [u32; 9] = [0, 1, 2, 1, 2, 0, 2, 0, 1];
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { invsemi_semigroup_from_table(table.as_ptr(), 3, &mut s) },
        InvsemiStatus::Ok
    );
    assert_eq!(unsafe { invsemi_semigroup_order(s) }, 3);
    for a in 0..3 {
        for b in 0..3 {
            let mut ab = usize::MAX;
            assert_eq!(
                unsafe { invsemi_semigroup_mul(s, a, b, &mut ab) },
                InvsemiStatus::Ok
            );
            assert_eq!(ab, (a + b) % 3);
        }
        let mut inv = usize::MAX;
        assert_eq!(
            unsafe { invsemi_semigroup_inverse(s, a, &mut inv) },
            InvsemiStatus::Ok
        );
        assert_eq!(inv, (3 - a) % 3);
    }
    let mut out = 0;
    assert_eq!(
        unsafe { invsemi_semigroup_mul(s, 3, 0, &mut out) },
        InvsemiStatus::OutOfRange
    );
    unsafe { invsemi_semigroup_free(s) };
}

#[test]
fn invalid_tables_report_witnesses() {
    // left zero band: associative, idempotents do not commute
    let table: [u32; 4] = [0, 0, 1, 1];
    let mut s = ptr::null_mut();
    let status = unsafe { invsemi_semigroup_from_table(table.as_ptr(), 2, &mut s) };
    assert_eq!(status, InvsemiStatus::NotInverse);
    assert!(s.is_null());
    assert!(last_error().contains("do not commute"));

    let table: [u32; 4] = [0, 5, 1, 1];
    assert_eq!(
        unsafe { invsemi_semigroup_from_table(table.as_ptr(), 2, &mut s) },
        InvsemiStatus::Malformed
    );
    assert_eq!(
        unsafe { invsemi_semigroup_from_table(ptr::null(), 2, &mut s) },
        InvsemiStatus::NullPointer
    );
}

#[test]
fn json_input_and_output() {
    let json = CString::new(
        r#"[{"degree": 2, "graph": [[0, 1], [1, 0]]}, {"degree": 2, "graph": [[0, 0]]}]"#,
    )
    .unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { invsemi_semigroup_from_json(json.as_ptr(), &mut s) },
        InvsemiStatus::Ok
    );
    assert_eq!(unsafe { invsemi_semigroup_order(s) }, 7);
    let mut text = ptr::null_mut();
    assert_eq!(
        unsafe { invsemi_semigroup_to_json(s, &mut text) },
        InvsemiStatus::Ok
    );
    let back: serde_json::Value = serde_json::from_str(&take_string(text)).unwrap();
    assert_eq!(back["order"], 7);
    assert_eq!(back["idempotents"].as_array().unwrap().len(), 4);
    unsafe { invsemi_semigroup_free(s) };

    let bad = CString::new("{\"order\": 2}").unwrap();
    assert_eq!(
        unsafe { invsemi_semigroup_from_json(bad.as_ptr(), &mut s) },
        InvsemiStatus::Malformed
    );
}

#[test]
fn congruences_and_hull() {
    let s = fixture("chain3");
    let mut count = 0;
    assert_eq!(
        unsafe { invsemi_congruence_count(s, &mut count) },
        InvsemiStatus::Ok
    );
    // every partition of a 3-chain into intervals
    assert_eq!(count, 4);
    let mut labels = [usize::MAX; 3];
    for i in 0..count {
        assert_eq!(
            unsafe { invsemi_congruence_labels(s, i, labels.as_mut_ptr()) },
            InvsemiStatus::Ok
        );
        assert_eq!(labels[0], 0);
    }
    assert_eq!(
        unsafe { invsemi_congruence_labels(s, count, labels.as_mut_ptr()) },
        InvsemiStatus::OutOfRange
    );
    let mut hull = 0;
    assert_eq!(
        unsafe { invsemi_hull_order(s, &mut hull) },
        InvsemiStatus::Ok
    );
    assert_eq!(hull, 3);
    unsafe { invsemi_semigroup_free(s) };
}

#[test]
fn products_over_the_two_chain() {
    let c2 = fixture("chain2");
    let z2 = fixture("z2");
    // trivial action of the chain {0 < 1} on Z2
    let act: [u32; 4] = [0, 1, 0, 1];
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { invsemi_lsd(z2, c2, act.as_ptr(), &mut p) },
        InvsemiStatus::Ok
    );
    assert_eq!(unsafe { invsemi_semigroup_order(p) }, 4);
    unsafe { invsemi_semigroup_free(p) };

    // chain acting on itself by multiplication, ε the identity
    let act: [u32; 4] = [0, 0, 0, 1];
    let eps: [u32; 2] = [0, 1];
    assert_eq!(
        unsafe { invsemi_rsd(c2, c2, act.as_ptr(), eps.as_ptr(), &mut p) },
        InvsemiStatus::Ok
    );
    let mut n = unsafe { invsemi_semigroup_order(p) };
    unsafe { invsemi_semigroup_free(p) };
    assert_eq!(n, 2);

    // the trivial action violates (AFR) with ε the identity
    let act: [u32; 4] = [0, 1, 0, 1];
    assert_eq!(
        unsafe { invsemi_rsd(c2, c2, act.as_ptr(), eps.as_ptr(), &mut p) },
        InvsemiStatus::Failed
    );
    assert!(last_error().contains("AFR"));

    // not an action: 0 must send 1 somewhere fixed by 0
    let act: [u32; 4] = [1, 0, 0, 1];
    assert_eq!(
        unsafe { invsemi_lsd(z2, c2, act.as_ptr(), &mut p) },
        InvsemiStatus::Invalid
    );
    n = 0;
    assert_eq!(
        unsafe { invsemi_hull_order(ptr::null(), &mut n) },
        InvsemiStatus::NullPointer
    );
    unsafe {
        invsemi_semigroup_free(c2);
        invsemi_semigroup_free(z2);
    }
}

#[test]
fn billhardt_certificates() {
    let s = fixture("z2-one");
    let labels = [0usize, 1, 2];
    let mut cert = ptr::null_mut();
    assert_eq!(
        unsafe { invsemi_billhardt_find(s, labels.as_ptr(), true, &mut cert) },
        InvsemiStatus::Ok
    );
    let json: serde_json::Value = serde_json::from_str(&take_string(cert)).unwrap();
    assert_eq!(json["axioms"]["B1"], true);
    assert_eq!(json["axioms"]["B2"], true);
    assert_eq!(json["xi"].as_array().unwrap().len(), 3);
    // 1 ~ 2 but 1*1 = 0 and 2*1 = 1 are separated
    let bad = [0usize, 1, 1];
    let status = unsafe { invsemi_billhardt_find(s, bad.as_ptr(), false, &mut cert) };
    assert_ne!(status, InvsemiStatus::Ok);
    unsafe { invsemi_semigroup_free(s) };
}

#[test]
fn verify_reports() {
    let suite = CString::new("lemma-3.8").unwrap();
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { invsemi_verify(suite.as_ptr(), 3, 0, &mut report) },
        InvsemiStatus::Ok
    );
    let json: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
    assert_eq!(json["command"], "verify lemma-3.8");
    assert!(json["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));

    let unknown = CString::new("lemma-9.9").unwrap();
    assert_eq!(
        unsafe { invsemi_verify(unknown.as_ptr(), 3, 0, &mut report) },
        InvsemiStatus::Invalid
    );
    assert!(last_error().contains("unknown suite"));
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/invsemi.h"),
    )
    .unwrap();
    for name in [
        "invsemi_last_error",
        "invsemi_semigroup_from_table",
        "invsemi_semigroup_from_json",
        "invsemi_semigroup_free",
        "invsemi_lsd",
        "invsemi_rsd",
        "invsemi_billhardt_find",
        "invsemi_verify",
        "invsemi_string_free",
    ] {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from the header"
        );
    }
    assert!(header.contains("typedef struct InvsemiSemigroup InvsemiSemigroup;"));
    assert!(header.contains("INVSEMI_STATUS_TOO_LARGE = 5"));
}

const C_SMOKE: &str = r#"
#include <stdio.h>
#include "invsemi.h"

int main(void) {
    InvsemiSemigroup *s = NULL;
    if (invsemi_semigroup_fixture("i2", &s) != INVSEMI_STATUS_OK) return 1;
    size_t hull = 0;
    if (invsemi_hull_order(s, &hull) != INVSEMI_STATUS_OK) return 2;
    unsigned table[4] = {0, 0, 1, 1};
    InvsemiSemigroup *band = NULL;
    if (invsemi_semigroup_from_table(table, 2, &band) != INVSEMI_STATUS_NOT_INVERSE) return 3;
    printf("%zu %zu\n", invsemi_semigroup_order(s), hull);
    invsemi_semigroup_free(s);
    return 0;
}
"#;

#[test]
fn c_program_links_against_the_static_library() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libinvsemi_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let work = std::env::temp_dir().join(format!("invsemi-capi-{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("smoke.c");
    let bin = work.join("smoke");
    std::fs::write(&src, C_SMOKE).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    std::fs::remove_dir_all(&work).unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    // I2 is a monoid, so its hull is inner
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "7 7");
}
