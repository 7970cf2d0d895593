use loopcx_ffi::*;
use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::ptr;

fn fixture(name: &str) -> CString {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    CString::new(std::fs::read_to_string(p).unwrap()).unwrap()
}

fn parse(json: &CString) -> *mut LoopcxComplex {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { loopcx_complex_parse(json.as_ptr(), &mut h) }, LoopcxStatus::Ok);
    assert!(!h.is_null());
    h
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(loopcx_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn homology_through_handles() {
    let h = parse(&fixture("rp2.json"));
    let mut dim = 0;
    assert_eq!(unsafe { loopcx_complex_dim(h, &mut dim) }, LoopcxStatus::Ok);
    assert_eq!(dim, 2);
    let (mut rank, mut n) = (9, 9);
    let mut tors = [0i64; 4];
    assert_eq!(unsafe { loopcx_homology(h, 1, &mut rank, tors.as_mut_ptr(), 4, &mut n) }, LoopcxStatus::Ok);
    assert_eq!((rank, n, tors[0]), (0, 1, 2));
    assert_eq!(unsafe { loopcx_homology(h, 1, &mut rank, ptr::null_mut(), 0, &mut n) }, LoopcxStatus::BufferTooSmall);
    assert_eq!(n, 1);
    assert_eq!(unsafe { loopcx_homology(h, 5, &mut rank, ptr::null_mut(), 0, &mut n) }, LoopcxStatus::OutOfRange);
    assert!(last_error().contains("degree 5"));
    assert_eq!(unsafe { loopcx_homology(h, 0, &mut rank, ptr::null_mut(), 0, &mut n) }, LoopcxStatus::Ok);
    assert_eq!((rank, n), (1, 0));
    assert!(last_error().is_empty());
    unsafe { loopcx_complex_free(h) };
}

#[test]
fn cobar_check_through_handles() {
    let h = parse(&fixture("boundary_tetrahedron.json"));
    let (mut checked, mut failures) = (0u64, 7u64);
    assert_eq!(unsafe { loopcx_cobar_d_squared(h, 4, &mut checked, &mut failures) }, LoopcxStatus::Ok);
    assert!(checked > 0);
    assert_eq!(failures, 0);
    assert_eq!(unsafe { loopcx_cobar_d_squared(h, 99, &mut checked, &mut failures) }, LoopcxStatus::OutOfRange);
    unsafe { loopcx_complex_free(h) };
}

#[test]
fn error_codes() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { loopcx_complex_parse(ptr::null(), &mut h) }, LoopcxStatus::NullPointer);
    let bad = CString::new("{\"vertices\": []").unwrap();
    assert_eq!(unsafe { loopcx_complex_parse(bad.as_ptr(), &mut h) }, LoopcxStatus::Parse);
    assert!(h.is_null());
    assert!(!last_error().is_empty());
    let unsorted = CString::new(r#"{"name": "x", "vertices": ["a", "b"], "facets": [[1, 0]]}"#).unwrap();
    assert_eq!(unsafe { loopcx_complex_parse(unsorted.as_ptr(), &mut h) }, LoopcxStatus::Parse);
    let mut dim = 0;
    assert_eq!(unsafe { loopcx_complex_dim(ptr::null(), &mut dim) }, LoopcxStatus::NullPointer);
    unsafe { loopcx_complex_free(ptr::null_mut()) };
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/loopcx.h")).unwrap();
    for f in ["loopcx_complex_parse", "loopcx_complex_free", "loopcx_homology", "loopcx_cobar_d_squared", "loopcx_last_error"] {
        assert!(h.contains(f), "{f}");
    }
    assert!(h.contains("typedef struct LoopcxComplex LoopcxComplex;"));
    assert!(h.contains("LOOPCX_STATUS_BUFFER_TOO_SMALL = 5"));
}

/// Compile a C program against the header and the static library.
#[test]
fn c_program_links_against_the_header() {
    let exe = std::env::current_exe().unwrap();
    let target = exe.parent().unwrap().parent().unwrap();
    let lib = target.join("libloopcx_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = std::env::temp_dir().join(format!("loopcx-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    std::fs::write(
        &src,
        r#"#include "loopcx.h"
#include <stdio.h>
int main(void) {
    const char *json = "{\"name\": \"c\", \"vertices\": [\"a\", \"b\", \"c\"], \"facets\": [[0, 1], [1, 2], [0, 2]]}";
    LoopcxComplex *k = NULL;
    if (loopcx_complex_parse(json, &k) != LOOPCX_STATUS_OK) return 1;
    size_t rank = 0, n = 0;
    if (loopcx_homology(k, 1, &rank, NULL, 0, &n) != LOOPCX_STATUS_OK) return 2;
    uint64_t checked = 0, bad = 1;
    if (loopcx_cobar_d_squared(k, 3, &checked, &bad) != LOOPCX_STATUS_OK) return 3;
    printf("%zu %zu %llu\n", rank, n, (unsigned long long)bad);
    loopcx_complex_free(k);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.join("main");
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let st = std::process::Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(st.success());
    let out = std::process::Command::new(&bin).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1 0 0\n");
}
