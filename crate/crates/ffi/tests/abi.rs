use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use fuzzyquad_ffi::*;

fn last_error() -> String {
    let p = fq_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn fuzzy_norm_round_trip() {
    unsafe {
        let mut n = ptr::null_mut();
        assert_eq!(fq_fuzzy_norm_new_nk(1.0, 1, FqNormKind::L2, &mut n), FqStatus::Ok);
        let mut m = 0.0;
        assert_eq!(fq_fuzzy_norm_eval(n, [1.0].as_ptr(), 1, 1.0, &mut m), FqStatus::Ok);
        assert_eq!(m, 0.5);
        assert_eq!(fq_fuzzy_norm_eval(n, [1.0].as_ptr(), 1, -1.0, &mut m), FqStatus::Ok);
        assert_eq!(m, 0.0);
        assert_eq!(
            fq_fuzzy_norm_eval(n, [1.0, 2.0].as_ptr(), 2, 1.0, &mut m),
            FqStatus::DimensionMismatch
        );
        assert!(last_error().contains("dimension"));
        fq_fuzzy_norm_free(n);

        let mut c = ptr::null_mut();
        assert_eq!(fq_fuzzy_norm_new_crisp(3, FqNormKind::Linf, &mut c), FqStatus::Ok);
        let x = [0.5, -2.0, 1.0];
        assert_eq!(fq_fuzzy_norm_eval(c, x.as_ptr(), 3, 2.0, &mut m), FqStatus::Ok);
        assert_eq!(m, 0.0);
        assert_eq!(fq_fuzzy_norm_eval(c, x.as_ptr(), 3, 2.5, &mut m), FqStatus::Ok);
        assert_eq!(m, 1.0);
        fq_fuzzy_norm_free(c);

        assert_eq!(fq_fuzzy_norm_new_nk(-1.0, 1, FqNormKind::L1, &mut n), FqStatus::InvalidArgument);
        assert_eq!(fq_fuzzy_norm_eval(ptr::null(), x.as_ptr(), 3, 1.0, &mut m), FqStatus::NullPointer);
        fq_fuzzy_norm_free(ptr::null_mut());
    }
}

#[test]
fn constants_and_domain_errors() {
    unsafe {
        let mut c = 0.0;
        assert_eq!(fq_quadratic_bound_constant(1.0, &mut c), FqStatus::Ok);
        assert_eq!(c, 0.25);
        assert_eq!(fq_sharp_quadratic_bound_constant(1.0, &mut c), FqStatus::Ok);
        assert_eq!(c, 0.5);
        assert_eq!(fq_quadratic_bound_constant(0.5, &mut c), FqStatus::InvalidArgument);
        assert!(last_error().contains("1/2"));

        let (mut c1, mut c2) = (0.0, 0.0);
        assert_eq!(fq_odd_pexider_constants(1.0, &mut c1, &mut c2), FqStatus::Ok);
        assert_eq!((c1, c2), (0.25, 3.0 / 13.0));
        assert_eq!(fq_even_pexider_constants(2.0, &mut c1, &mut c2), FqStatus::Ok);
        assert_eq!((c1, c2), (0.125, 0.12));
        assert_eq!(fq_odd_pexider_constants(2.0, &mut c1, &mut c2), FqStatus::InvalidArgument);
        assert_eq!(fq_decomposition_constant(1.0, &mut c), FqStatus::Ok);
        assert_eq!(c, 3.0 / 32.0);
        assert_eq!(fq_classical_constant(1.0, &mut c), FqStatus::Ok);
        assert_eq!(c, 4.0);
        assert_eq!(fq_classical_constant(2.0, &mut c), FqStatus::InvalidArgument);
        assert!(last_error().contains("constant undefined"));
        assert_eq!(fq_classical_constant(1.0, ptr::null_mut()), FqStatus::NullPointer);
    }
}

#[test]
fn builtins_run_through_handles() {
    assert_eq!(fq_builtin_count(), 10);
    let names: Vec<String> = (0..fq_builtin_count())
        .map(|i| unsafe { CStr::from_ptr(fq_builtin_name(i)) }.to_string_lossy().into_owned())
        .collect();
    assert!(names.iter().any(|n| n == "theorem1-algebra"));
    assert!(fq_builtin_name(99).is_null());

    unsafe {
        let name = CString::new("theorem1-algebra").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(fq_scenario_load_builtin(name.as_ptr(), &mut s), FqStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(fq_scenario_run(s, 2, &mut r), FqStatus::Ok);
        assert_eq!(fq_run_result_exit_code(r), 0);
        let mut m = f64::NAN;
        assert_eq!(fq_run_result_min_margin(r, &mut m), FqStatus::Ok);
        assert_eq!(m, 0.0);

        let mut csv = ptr::null_mut();
        assert_eq!(fq_run_result_csv(r, &mut csv), FqStatus::Ok);
        let text = CStr::from_ptr(csv).to_string_lossy().into_owned();
        assert!(text.starts_with("scenario,check,xId,t,lhs,rhs,margin,pass\n"));
        fq_string_free(csv);

        let dir = tempfile::tempdir().unwrap();
        let out = CString::new(dir.path().to_str().unwrap()).unwrap();
        assert_eq!(fq_run_result_write(r, out.as_ptr()), FqStatus::Ok);
        assert_eq!(std::fs::read_to_string(dir.path().join("report.csv")).unwrap(), text);
        fq_run_result_free(r);

        assert_eq!(fq_scenario_set_seed(s, 77), FqStatus::Ok);
        let mut r2 = ptr::null_mut();
        assert_eq!(fq_scenario_run(s, 0, &mut r2), FqStatus::Ok);
        let mut csv2 = ptr::null_mut();
        assert_eq!(fq_run_result_csv(r2, &mut csv2), FqStatus::Ok);
        assert_ne!(CStr::from_ptr(csv2).to_string_lossy(), text);
        fq_string_free(csv2);
        fq_run_result_free(r2);
        fq_scenario_free(s);

        let missing = CString::new("missing").unwrap();
        assert_eq!(fq_scenario_load_builtin(missing.as_ptr(), &mut s), FqStatus::Config);
        assert_eq!(fq_run_result_exit_code(ptr::null()), -1);
    }
}

#[test]
fn scenarios_from_toml_and_files() {
    let src = "name = \"tiny\"\nseed = 1\ndim = 1\nsample_count = 4\nsample_radius = 1.0\nq = 0.5\n\
               checks = [\"quadratic-bound\"]\nfuzzy_norm_x = { kind = \"nk\", k = 1.0 }\n\
               fuzzy_norm_y = { kind = \"nk\", k = 1.0 }\nfunction = { kind = \"normed-algebra\", x0 = [1.0] }\n";
    unsafe {
        let mut s = ptr::null_mut();
        let bad = CString::new(src).unwrap();
        assert_eq!(fq_scenario_from_toml(bad.as_ptr(), &mut s), FqStatus::Config);
        assert!(last_error().contains("1/2"));

        let good = src.replace("q = 0.5", "q = 1.0");
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tiny.toml");
        std::fs::write(&path, &good).unwrap();
        let p = CString::new(path.to_str().unwrap()).unwrap();
        assert_eq!(fq_scenario_load_file(p.as_ptr(), &mut s), FqStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(fq_scenario_run(s, 1, &mut r), FqStatus::Ok);
        assert_eq!(fq_run_result_exit_code(r), 0);
        fq_run_result_free(r);
        fq_scenario_free(s);

        let nowhere = CString::new(dir.path().join("nope.toml").to_str().unwrap()).unwrap();
        assert_eq!(fq_scenario_load_file(nowhere.as_ptr(), &mut s), FqStatus::Io);
        assert_eq!(fq_scenario_load_file(ptr::null(), &mut s), FqStatus::NullPointer);
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "fuzzyquad.h"

int main(void) {
    FqScenario *s = NULL;
    FqRunResult *r = NULL;
    double c = 0.0;
    if (fq_quadratic_bound_constant(1.0, &c) != FQ_STATUS_OK || c != 0.25) return 10;
    if (fq_quadratic_bound_constant(0.25, &c) != FQ_STATUS_INVALID_ARGUMENT) return 11;
    if (fq_last_error() == NULL) return 12;
    if (fq_scenario_load_builtin("prop1-odd", &s) != FQ_STATUS_OK) return 13;
    if (fq_scenario_run(s, 1, &r) != FQ_STATUS_OK) return 14;
    int code = fq_run_result_exit_code(r);
    fq_run_result_free(r);
    fq_scenario_free(s);
    printf("%s %zu %d\n", fq_version(), fq_builtin_count(), code);
    return code;
}
"#;

/// Compiles a C program against the generated header and the shared library.
#[test]
fn header_compiles_and_links_from_c() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = crate_dir.join("include/fuzzyquad.h");
    assert!(header.is_file(), "header not generated");
    let lib_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    assert!(lib_dir.join("libfuzzyquad_ffi.so").is_file(), "no shared library in {}", lib_dir.display());

    let work = tempfile::tempdir().unwrap();
    let src = work.path().join("smoke.c");
    let exe = work.path().join("smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&src)
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lfuzzyquad_ffi")
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
    let out = Command::new(&exe).env("LD_LIBRARY_PATH", &lib_dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0.1.0 10 0\n");
}
