use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use sgmix::cases::{build_initial, make_case, CaseId};
use sgmix::scheme::run;
use sgmix_ffi::*;

const AIR: SgmixGas = SgmixGas {
    gamma: 1.4,
    cv: 717.5,
    p_star: 0.0,
    eps0: 0.0,
};
const WATER: SgmixGas = SgmixGas {
    gamma: 2.8,
    cv: 1495.0,
    p_star: 8.5e8,
    eps0: 0.0,
};

fn last_error() -> String {
    let mut buf = [0 as c_char; 512];
    unsafe {
        sgmix_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn new_case(id: &str, n: usize) -> *mut SgmixSim {
    let id = CString::new(id).unwrap();
    let mut sim = ptr::null_mut();
    assert_eq!(unsafe { sgmix_sim_new_case(id.as_ptr(), n, &mut sim) }, SgmixStatus::Ok);
    sim
}

fn field(sim: *const SgmixSim, f: SgmixField) -> Vec<f64> {
    let n = unsafe { sgmix_sim_num_nodes(sim) };
    let mut v = vec![0.0; n];
    assert_eq!(
        unsafe { sgmix_sim_copy_field(sim, f, v.as_mut_ptr(), n) },
        SgmixStatus::Ok
    );
    v
}

#[test]
fn closure_round_trip() {
    let mut s = SgmixConserved {
        rho1: 0.0,
        rho2: 0.0,
        mom: 0.0,
        etot: 0.0,
    };
    let st = unsafe { sgmix_primitive_to_conserved(&AIR, &WATER, 2.0e6, -15.0, 420.0, 0.3, &mut s) };
    assert_eq!(st, SgmixStatus::Ok);
    let mut c = SgmixClosure::default();
    assert_eq!(unsafe { sgmix_closure(&AIR, &WATER, &s, &mut c) }, SgmixStatus::Ok);
    assert!((c.p / 2.0e6 - 1.0).abs() < 1e-12);
    assert!((c.theta / 420.0 - 1.0).abs() < 1e-12);
    assert!((c.u + 15.0).abs() < 1e-12);
    assert!((c.alpha1 - 0.3).abs() < 1e-12);
    assert!((c.alpha1 + c.alpha2 - 1.0).abs() < 1e-14);
    assert!(c.cs > 0.0 && (c.rho - s.rho1 - s.rho2).abs() <= 1e-15 * c.rho);
}

#[test]
fn errors_are_reported_with_messages() {
    let mut c = SgmixClosure::default();
    let bad = SgmixGas { gamma: 0.9, ..AIR };
    let s = SgmixConserved {
        rho1: 1.0,
        rho2: 1.0,
        mom: 0.0,
        etot: 1.0e6,
    };
    assert_eq!(
        unsafe { sgmix_closure(&bad, &WATER, &s, &mut c) },
        SgmixStatus::InvalidGas
    );
    assert!(!last_error().is_empty());
    assert_eq!(
        unsafe { sgmix_closure(&AIR, ptr::null(), &s, &mut c) },
        SgmixStatus::NullPointer
    );
    assert!(last_error().contains("null"));
    let neg = SgmixConserved { rho1: -1.0, ..s };
    assert_eq!(
        unsafe { sgmix_closure(&AIR, &WATER, &neg, &mut c) },
        SgmixStatus::NotAdmissible
    );

    let mut sim = ptr::null_mut();
    let id = CString::new("Q").unwrap();
    assert_eq!(
        unsafe { sgmix_sim_new_case(id.as_ptr(), 10, &mut sim) },
        SgmixStatus::UnknownCase
    );
    assert!(sim.is_null());
    let text = CString::new("case = B\nnonsense = 1\n").unwrap();
    assert_eq!(
        unsafe { sgmix_sim_new_config(text.as_ptr(), &mut sim) },
        SgmixStatus::Parse
    );

    // a successful call clears the message
    assert_eq!(unsafe { sgmix_closure(&AIR, &WATER, &s, &mut c) }, SgmixStatus::Ok);
    assert_eq!(last_error(), "");
    assert_eq!(unsafe { sgmix_last_error_message(ptr::null_mut(), 0) }, 0);
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        sgmix_sim_free(ptr::null_mut());
        assert!(sgmix_sim_time(ptr::null()).is_nan());
        assert_eq!(sgmix_sim_num_nodes(ptr::null()), 0);
        assert_eq!(sgmix_sim_steps(ptr::null()), 0);
        assert_eq!(
            sgmix_sim_step(ptr::null_mut(), ptr::null_mut()),
            SgmixStatus::NullPointer
        );
    }
    let v = unsafe { CStr::from_ptr(sgmix_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn simulation_matches_library_run() {
    let spec = make_case(CaseId::B);
    let s0 = build_initial(&spec, &spec.mesh(80).unwrap()).unwrap();
    let t = 0.25 * spec.t_fin;
    let want = run(&s0, &spec.scheme_config(), t, 0).unwrap();

    let sim = new_case("B", 80);
    assert_eq!(unsafe { sgmix_sim_num_nodes(sim) }, 81);
    assert_eq!(field(sim, SgmixField::X), s0.mesh.nodes().0);
    assert_eq!(unsafe { sgmix_sim_advance(sim, t) }, SgmixStatus::Ok);
    assert_eq!(unsafe { sgmix_sim_time(sim) }, t);
    assert_eq!(unsafe { sgmix_sim_steps(sim) }, want.steps as u64);
    assert_eq!(field(sim, SgmixField::P), want.final_state.p.0);
    assert_eq!(field(sim, SgmixField::Rho1), want.final_state.rho1.0);
    assert_eq!(field(sim, SgmixField::U), want.final_state.u.0);

    assert_eq!(unsafe { sgmix_sim_advance(sim, 0.5 * t) }, SgmixStatus::InvalidArgument);
    let mut small = [0.0; 4];
    let st = unsafe { sgmix_sim_copy_field(sim, SgmixField::Theta, small.as_mut_ptr(), small.len()) };
    assert_eq!(st, SgmixStatus::BufferTooSmall);
    unsafe { sgmix_sim_free(sim) };
}

#[test]
fn stepping_and_numerics() {
    let sim = new_case("D", 60);
    let mut num = SgmixNumerics {
        reg: 9,
        a: 0.0,
        beta: 0.0,
        schmidt: 0.0,
        prandtl_inv: 0.0,
        boundary: 0,
    };
    assert_eq!(unsafe { sgmix_sim_get_numerics(sim, &mut num) }, SgmixStatus::Ok);
    assert_eq!((num.reg, num.boundary), (0, 0));
    num.reg = 1;
    assert_eq!(unsafe { sgmix_sim_set_numerics(sim, &num) }, SgmixStatus::Ok);
    let mut back = num;
    back.reg = 0;
    unsafe { sgmix_sim_get_numerics(sim, &mut back) };
    assert_eq!(back, num);
    let bad = SgmixNumerics { beta: -1.0, ..num };
    assert_eq!(
        unsafe { sgmix_sim_set_numerics(sim, &bad) },
        SgmixStatus::InvalidArgument
    );
    let bad = SgmixNumerics { boundary: 3, ..num };
    assert_eq!(
        unsafe { sgmix_sim_set_numerics(sim, &bad) },
        SgmixStatus::InvalidArgument
    );

    let mut t = 0.0;
    for _ in 0..5 {
        let mut dt = 0.0;
        assert_eq!(unsafe { sgmix_sim_step(sim, &mut dt) }, SgmixStatus::Ok);
        assert!(dt > 0.0);
        t += dt;
    }
    assert_eq!(unsafe { sgmix_sim_steps(sim) }, 5);
    assert!((unsafe { sgmix_sim_time(sim) } - t).abs() <= 1e-15 * t);
    let a1 = field(sim, SgmixField::Alpha1);
    let a2 = field(sim, SgmixField::Alpha2);
    assert!(a1.iter().zip(&a2).all(|(x, y)| (x + y - 1.0).abs() < 1e-12));
    unsafe { sgmix_sim_free(sim) };
}

#[test]
fn config_text_creates_simulation() {
    let mut spec = make_case(CaseId::C);
    spec.defaults.n_coarse = 40;
    let text = CString::new(spec.to_config_string()).unwrap();
    let mut sim = ptr::null_mut();
    assert_eq!(
        unsafe { sgmix_sim_new_config(text.as_ptr(), &mut sim) },
        SgmixStatus::Ok,
        "{}",
        last_error()
    );
    assert_eq!(unsafe { sgmix_sim_num_nodes(sim) }, 41);
    assert_eq!(
        unsafe { sgmix_sim_advance(sim, -1.0) },
        SgmixStatus::Ok,
        "{}",
        last_error()
    );
    assert_eq!(unsafe { sgmix_sim_time(sim) }, spec.t_fin);
    unsafe { sgmix_sim_free(sim) };
}

#[test]
fn solver_failure_keeps_last_level() {
    let sim = new_case("B", 50);
    let mut num = SgmixNumerics {
        reg: 0,
        a: 0.0,
        beta: 0.0,
        schmidt: 0.0,
        prandtl_inv: 0.0,
        boundary: 0,
    };
    unsafe { sgmix_sim_get_numerics(sim, &mut num) };
    num.beta = 0.6;
    assert_eq!(unsafe { sgmix_sim_set_numerics(sim, &num) }, SgmixStatus::Ok);
    let mut status = SgmixStatus::Ok;
    for _ in 0..200 {
        status = unsafe { sgmix_sim_step(sim, ptr::null_mut()) };
        if status != SgmixStatus::Ok {
            break;
        }
    }
    assert_eq!(status, SgmixStatus::SolverFailure, "{}", last_error());
    let p = field(sim, SgmixField::P);
    assert!(p.iter().all(|v| v.is_finite() && *v > 0.0));
    unsafe { sgmix_sim_free(sim) };
}

#[test]
fn c_program_links_against_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libsgmix_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out = tempfile_path("sgmix_smoke");
    let build = Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&out)
        .output();
    let build = match build {
        Ok(b) => b,
        Err(e) => {
            eprintln!("skipping: C compiler {cc} unavailable ({e})");
            return;
        }
    };
    assert!(build.status.success(), "{}", String::from_utf8_lossy(&build.stderr));
    let res = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(String::from_utf8_lossy(&res.stdout).starts_with("ok "));
}

fn tempfile_path(stem: &str) -> PathBuf {
    std::env::temp_dir().join(format!("{stem}_{}", std::process::id()))
}
