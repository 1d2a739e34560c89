use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use edgelab_ffi::*;

fn last_error() -> String {
    let p = edgelab_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn graph_and_distribution_round_trip() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(edgelab_graph_gnm(30, 200, 5, &mut g), EdgelabStatus::Ok);
        assert_eq!(edgelab_graph_n(g), 30);
        assert_eq!(edgelab_graph_m(g), 200);
        let mut deg = 0u32;
        assert_eq!(edgelab_graph_degree(g, 3, &mut deg), EdgelabStatus::Ok);
        assert_eq!(edgelab_graph_degree(g, 30, &mut deg), EdgelabStatus::Config);

        let dir = tempfile::tempdir().unwrap();
        let path = CString::new(dir.path().join("g.txt").to_str().unwrap()).unwrap();
        assert_eq!(edgelab_graph_write(g, path.as_ptr()), EdgelabStatus::Ok);
        let mut h = ptr::null_mut();
        assert_eq!(edgelab_graph_read(path.as_ptr(), &mut h), EdgelabStatus::Ok);
        assert_eq!(edgelab_graph_m(h), 200);
        let missing = CString::new(dir.path().join("none.txt").to_str().unwrap()).unwrap();
        assert_eq!(edgelab_graph_read(missing.as_ptr(), &mut h), EdgelabStatus::Io);

        let mut d = ptr::null_mut();
        assert_eq!(edgelab_sample(g, 15, 20_000, 1, 2, &mut d), EdgelabStatus::Ok);
        assert_eq!(edgelab_dist_total(d), 20_000);
        let (mut lo, mut hi) = (0u64, 0u64);
        assert_eq!(edgelab_dist_support(d, &mut lo, &mut hi), EdgelabStatus::Ok);
        assert!(lo <= hi);
        let (mut ks, mut llt) = (0.0, 0.0);
        assert_eq!(edgelab_ks_distance(d, &mut ks), EdgelabStatus::Ok);
        assert!(ks > 0.0 && ks < 0.2);
        assert_eq!(edgelab_llt_error(d, 2.0, &mut llt), EdgelabStatus::Ok);
        assert_eq!(edgelab_llt_error(d, -1.0, &mut llt), EdgelabStatus::Config);
        edgelab_dist_free(d);
        edgelab_graph_free(g);
        edgelab_graph_free(h);
        edgelab_graph_free(ptr::null_mut());
    }
}

#[test]
fn status_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(edgelab_graph_gnm(30, 100, 0, ptr::null_mut()), EdgelabStatus::NullPointer);
        assert!(last_error().contains("null"));
        assert_eq!(edgelab_graph_gnm(30, 10_000, 0, &mut g), EdgelabStatus::Config);
        assert!(!edgelab_last_error().is_null());
        assert_eq!(edgelab_graph_gnm(30, 100, 0, &mut g), EdgelabStatus::Ok);
        assert!(edgelab_last_error().is_null());
        let mut d = ptr::null_mut();
        assert_eq!(edgelab_exact(g, 15, 1000, &mut d), EdgelabStatus::Budget);
        assert!(last_error().contains("budget"));
        let mut lambda = 0.0;
        assert_eq!(edgelab_lambda(4, 2, 3, &mut lambda), EdgelabStatus::Ok);
        assert_eq!(lambda, 3.0 / 128.0);
        let mut empty = ptr::null_mut();
        assert_eq!(edgelab_graph_from_edges(10, ptr::null(), 0, &mut empty), EdgelabStatus::Ok);
        let mut ed = ptr::null_mut();
        assert_eq!(edgelab_sample(empty, 5, 100, 0, 1, &mut ed), EdgelabStatus::Ok);
        let mut ks = 0.0;
        assert_eq!(edgelab_ks_distance(ed, &mut ks), EdgelabStatus::Numeric);
        edgelab_dist_free(ed);
        edgelab_graph_free(empty);
        edgelab_graph_free(g);
    }
}

#[test]
fn run_command_from_json() {
    unsafe {
        let cfg = CString::new(r#"{"command":"clt","n":40,"samples":5000,"seed":2}"#).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(edgelab_run(cfg.as_ptr(), &mut out), EdgelabStatus::Ok);
        let text = CStr::from_ptr(out).to_str().unwrap().to_owned();
        edgelab_string_free(out);
        assert!(text.lines().count() >= 4);
        for line in text.lines() {
            edgelab::report::parse_record(line).unwrap();
        }
        let bad = CString::new(r#"{"command":"clt","n":40,"bogus":1}"#).unwrap();
        assert_eq!(edgelab_run(bad.as_ptr(), &mut out), EdgelabStatus::Config);
        let budget = CString::new(r#"{"command":"exact","n":40,"budget":10}"#).unwrap();
        assert_eq!(edgelab_run(budget.as_ptr(), &mut out), EdgelabStatus::Budget);
    }
}

/// Compiles a C program against the generated header and links it with the
/// static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("edgelab.h").exists());
    // target/<profile>/deps/<this test> -> target/<profile>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libedgelab_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("c_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg(manifest.join("tests/c_smoke.c"))
        .arg("-I")
        .arg(&header_dir)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
