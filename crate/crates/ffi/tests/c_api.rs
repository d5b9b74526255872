use std::ffi::{c_char, CStr};
use std::path::Path;
use std::process::Command;
use std::ptr;

use elastica_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    elastica_string_free(s);
    out
}

const Q: &str = "1*y1^4*y2^2 + 1*y2^4*y3^2 + 1*y1^2*y3^4 - 3*y1^2*y2^2*y3^2";

#[test]
fn determinant_of_a_tensor() {
    let json = c"{\"symmetry\":\"orthotropic\",\"C11\":\"1\",\"C22\":\"1\",\"C33\":\"1\",\"C12\":\"0\",\"C13\":\"0\",\"C23\":\"0\",\"C44\":\"0\",\"C55\":\"0\",\"C66\":\"0\"}";
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(elastica_tensor_from_json(json.as_ptr(), &mut t), ElasticaStatus::Ok);
        let mut f = ptr::null_mut();
        assert_eq!(elastica_tensor_form(t, &mut f), ElasticaStatus::Ok);
        let mut det = ptr::null_mut();
        assert_eq!(elastica_acoustic_det(f, &mut det), ElasticaStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(elastica_poly_to_text(det, &mut text), ElasticaStatus::Ok);
        assert_eq!(take(text), "1*y1^2*y2^2*y3^2");
        elastica_poly_free(det);
        elastica_form_free(f);
        elastica_tensor_free(t);
    }
}

#[test]
fn extremality_through_handles() {
    unsafe {
        let cfg = elastica_config_new();
        let text = std::ffi::CString::new(Q).unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(elastica_poly_parse(text.as_ptr(), 3, &mut p), ElasticaStatus::Ok);
        let mut v = ElasticaVerdict::Inconclusive;
        let mut report = ptr::null_mut();
        assert_eq!(elastica_poly_extremality(p, cfg, &mut v, &mut report), ElasticaStatus::Ok);
        assert_eq!(v, ElasticaVerdict::ExtremalUpToTol);
        assert!(take(report).contains("\"verdict\":\"extremal_up_to_tol\""));
        let mut sq = 1;
        assert_eq!(elastica_perfect_square(p, cfg, &mut sq, ptr::null_mut()), ElasticaStatus::Ok);
        assert_eq!(sq, 0);
        elastica_poly_free(p);
        elastica_config_free(cfg);
    }
}

#[test]
fn precondition_failure_reports_message() {
    unsafe {
        let cfg = elastica_config_new();
        let mut p = ptr::null_mut();
        assert_eq!(elastica_poly_parse(c"y1^2 - y2^2".as_ptr(), 2, &mut p), ElasticaStatus::Ok);
        let mut v = ElasticaVerdict::Inconclusive;
        let s = elastica_poly_extremality(p, cfg, &mut v, ptr::null_mut());
        assert_eq!(s, ElasticaStatus::Precondition);
        let msg = CStr::from_ptr(elastica_last_error()).to_string_lossy().into_owned();
        assert!(msg.contains("unit sphere"), "{msg}");
        elastica_poly_free(p);
        elastica_config_free(cfg);
    }
}

#[test]
fn config_round_trip() {
    unsafe {
        let cfg = elastica_config_new();
        assert_eq!(elastica_config_set_seed(cfg, 42), ElasticaStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(elastica_config_to_json(cfg, &mut json), ElasticaStatus::Ok);
        let s = std::ffi::CString::new(take(json)).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(elastica_config_from_json(s.as_ptr(), &mut back), ElasticaStatus::Ok);
        let mut again = ptr::null_mut();
        elastica_config_to_json(back, &mut again);
        assert!(take(again).contains("\"seed\":42"));
        elastica_config_free(back);
        elastica_config_free(cfg);
        let mut bad = ptr::null_mut();
        assert_eq!(elastica_config_from_json(c"{}".as_ptr(), &mut bad), ElasticaStatus::Parse);
    }
}

#[test]
fn header_declares_the_api_and_compiles() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/elastica.h")).unwrap();
    for name in ["elastica_poly_parse", "elastica_last_error", "ELASTICA_STATUS_OK", "typedef struct ElasticaPoly"] {
        assert!(header.contains(name), "{name} missing from header");
    }
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"elastica.h\"\nint main(void) { ElasticaPoly *p = 0; return elastica_poly_parse(\"y1\", 1, &p) == ELASTICA_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    match Command::new("cc").arg("-fsyntax-only").arg("-I").arg(dir.join("include")).arg(&src).output() {
        Ok(out) => assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr)),
        Err(_) => eprintln!("no C compiler; syntax check skipped"),
    }
}
