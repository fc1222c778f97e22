use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use boxlab_ffi::*;

fn last_error() -> String {
    let p = boxlab_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn ghz_wiring_and_chsh() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(boxlab_ghz(&mut g), BoxlabStatus::Ok);
        let mut q = ptr::null_mut();
        assert_eq!(boxlab_wire(g, BoxlabProtocol::TwoToThree, &mut q), BoxlabStatus::Ok);
        let mut v = 0.0;
        assert_eq!(boxlab_chsh(q, &mut v), BoxlabStatus::Ok);
        assert!((v - 3.0 / 2f64.sqrt()).abs() < 1e-9);
        let mut m = 0.0;
        assert_eq!(boxlab_chsh_max(q, &mut m), BoxlabStatus::Ok);
        assert!(m >= v);
        boxlab_box2_free(q);
        boxlab_box3_free(g);
    }
}

#[test]
fn membership_and_report() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(boxlab_peps_alpha(0.9, 0.5, &mut p), BoxlabStatus::Ok);
        let mut is_in = true;
        assert_eq!(boxlab_membership(p, BoxlabClass::AtoblUnion, 1e-9, &mut is_in), BoxlabStatus::Ok);
        assert!(!is_in);
        assert_eq!(boxlab_membership(p, BoxlabClass::AtoblHull, 1e-9, &mut is_in), BoxlabStatus::Ok);
        assert!(is_in);

        let mut r = ptr::null_mut();
        assert_eq!(boxlab_classify(p, 1e-9, &mut r), BoxlabStatus::Ok);
        let (mut found, mut class) = (false, BoxlabClass::Ns);
        assert_eq!(boxlab_report_finest_class(r, &mut found, &mut class), BoxlabStatus::Ok);
        assert!(found);
        assert_eq!(class, BoxlabClass::AtoblHull);
        assert_eq!(boxlab_report_verdict(r, BoxlabClass::Bl, &mut is_in), BoxlabStatus::Ok);
        assert!(is_in);

        let mut json = ptr::null_mut();
        assert_eq!(boxlab_report_json(r, &mut json), BoxlabStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        boxlab_string_free(json);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["finest_class"], "ATOBL_HULL");

        boxlab_report_free(r);
        boxlab_box3_free(p);
    }
}

#[test]
fn tables_and_text_round_trip() {
    unsafe {
        let mut g = ptr::null_mut();
        boxlab_ghz(&mut g);
        let mut values = [0.0; 64];
        assert_eq!(boxlab_box3_probabilities(g, values.as_mut_ptr()), BoxlabStatus::Ok);
        let mut copy = ptr::null_mut();
        assert_eq!(boxlab_box3_new(values.as_ptr(), 1e-12, &mut copy), BoxlabStatus::Ok);

        let mut text = ptr::null_mut();
        assert_eq!(boxlab_box3_to_text(copy, &mut text), BoxlabStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(boxlab_box3_from_text(text, &mut back), BoxlabStatus::Ok);
        let mut again = [0.0; 64];
        boxlab_box3_probabilities(back, again.as_mut_ptr());
        assert_eq!(values, again);

        // a three-party file is not a two-party box
        let mut q = ptr::null_mut();
        assert_eq!(boxlab_box2_from_text(text, &mut q), BoxlabStatus::InvalidBox);
        assert!(q.is_null());

        boxlab_string_free(text);
        for b in [g, copy, back] {
            boxlab_box3_free(b);
        }

        let mut pr = ptr::null_mut();
        assert_eq!(boxlab_pr(0, 0, 0, &mut pr), BoxlabStatus::Ok);
        let mut t = [0.0; 16];
        boxlab_box2_probabilities(pr, t.as_mut_ptr());
        assert_eq!(t[0], 0.5);
        let mut pr2 = ptr::null_mut();
        assert_eq!(boxlab_box2_new(t.as_ptr(), 1e-12, &mut pr2), BoxlabStatus::Ok);
        boxlab_box2_free(pr);
        boxlab_box2_free(pr2);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut b = ptr::null_mut();
        let zeros = [0.0; 64];
        assert_eq!(boxlab_box3_new(zeros.as_ptr(), 1e-9, &mut b), BoxlabStatus::InvalidBox);
        assert!(last_error().contains("sums to"));
        assert!(b.is_null());

        assert_eq!(boxlab_peps_left(1.5, &mut b), BoxlabStatus::InvalidArgument);
        assert_eq!(boxlab_pr(2, 0, 0, &mut ptr::null_mut()), BoxlabStatus::InvalidArgument);
        assert_eq!(boxlab_ghz(ptr::null_mut()), BoxlabStatus::NullPointer);
        let mut v = 0.0;
        assert_eq!(boxlab_chsh(ptr::null(), &mut v), BoxlabStatus::NullPointer);

        let junk = CString::new("not a box").unwrap();
        assert_eq!(boxlab_box3_from_text(junk.as_ptr(), &mut b), BoxlabStatus::Parse);

        let mut n = ptr::null_mut();
        boxlab_noise(&mut n);
        let (mut ns, mut viol) = (false, 1.0);
        assert_eq!(boxlab_no_signaling(n, 1e-12, &mut ns, &mut viol), BoxlabStatus::Ok);
        assert!(ns && viol == 0.0);
        boxlab_box3_free(n);

        // freeing null is a no-op
        boxlab_box3_free(ptr::null_mut());
        boxlab_report_free(ptr::null_mut());
        boxlab_string_free(ptr::null_mut());
    }
}

/// Compiles a C program against the generated header and links it with the
/// static library.
#[test]
fn c_program_links_against_static_library() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libboxlab_ffi.a");
    if !lib.exists() {
        panic!("static library not found at {}", lib.display());
    }
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("boxlab_smoke");
    let status = Command::new("cc")
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok 2.1213203436"));
}
