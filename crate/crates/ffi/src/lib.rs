//! C ABI for the mixture closure and the shock-tube solver.
//!
//! Every fallible function returns an [`SgmixStatus`]; on failure the message
//! is kept per thread and can be read with [`sgmix_last_error_message`].
//! Simulations are opaque [`SgmixSim`] handles released with [`sgmix_sim_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sgmix::cases::{build_initial, make_case_str, CaseSpec};
use sgmix::eos::{closure, primitive_to_conserved, ConservedState, GasPair, GasParams};
use sgmix::scheme::{run, step, time_step, Boundary, MeshState, Regularization, SchemeConfig};
use sgmix::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgmixStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGas = 3,
    /// A state has no admissible closure.
    NotAdmissible = 4,
    UnknownCase = 5,
    /// The solver aborted; the simulation keeps a previous good level.
    SolverFailure = 6,
    Parse = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Stiffened-gas parameters of one component.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgmixGas {
    pub gamma: f64,
    pub cv: f64,
    pub p_star: f64,
    pub eps0: f64,
}

/// Conserved node state `(ρ1, ρ2, ρu, E)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgmixConserved {
    pub rho1: f64,
    pub rho2: f64,
    pub mom: f64,
    pub etot: f64,
}

/// Closed quantities of one node state.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SgmixClosure {
    pub p: f64,
    pub theta: f64,
    pub u: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub cs: f64,
    pub rho: f64,
    /// Residual of the rational pressure equation at the computed root.
    pub residual: f64,
}

/// Per-node output fields.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgmixField {
    X = 0,
    Rho1 = 1,
    Rho2 = 2,
    Rho = 3,
    Y1 = 4,
    Alpha1 = 5,
    Alpha2 = 6,
    P = 7,
    U = 8,
    Theta = 9,
    Cs = 10,
}

/// Opaque simulation handle.
pub struct SgmixSim {
    spec: CaseSpec,
    cfg: SchemeConfig,
    state: MeshState,
    steps: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> SgmixStatus {
    match e {
        Error::InvalidGas(_) => SgmixStatus::InvalidGas,
        Error::UnknownCase(_) => SgmixStatus::UnknownCase,
        Error::Parse { .. } => SgmixStatus::Parse,
        Error::StateBlowup { .. } | Error::AdmissibilityLost { .. } => SgmixStatus::SolverFailure,
        Error::ZeroDensity { .. }
        | Error::NegativePartialDensity { .. }
        | Error::NegativeDiscriminant { .. }
        | Error::NonpositivePressure { .. }
        | Error::NonpositiveTemperature { .. }
        | Error::NonpositiveSoundSpeed { .. }
        | Error::PoleAtP { .. } => SgmixStatus::NotAdmissible,
        _ => SgmixStatus::InvalidArgument,
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard<F: FnOnce() -> Result<(), (SgmixStatus, String)>>(f: F) -> SgmixStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            SgmixStatus::Ok
        }
        Ok(Err((code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            SgmixStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (SgmixStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SgmixStatus, String) {
    (SgmixStatus::NullPointer, format!("{what} is null"))
}

unsafe fn gas_pair(g1: *const SgmixGas, g2: *const SgmixGas) -> Result<GasPair, (SgmixStatus, String)> {
    let (a, b) = match (g1.as_ref(), g2.as_ref()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(null("gas pointer")),
    };
    let mk = |g: &SgmixGas| GasParams::new(g.gamma, g.cv, g.p_star, g.eps0).map_err(lib_err);
    Ok(GasPair::new(mk(a)?, mk(b)?))
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (SgmixStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (SgmixStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len - 1` bytes) and returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sgmix_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sgmix_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Closes one conserved node state.
///
/// # Safety
/// All pointers must be null or valid for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn sgmix_closure(
    g1: *const SgmixGas,
    g2: *const SgmixGas,
    state: *const SgmixConserved,
    out: *mut SgmixClosure,
) -> SgmixStatus {
    guard(|| {
        let gases = gas_pair(g1, g2)?;
        let s = state.as_ref().ok_or_else(|| null("state"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let cs = ConservedState {
            rho1: s.rho1,
            rho2: s.rho2,
            mom: s.mom,
            etot: s.etot,
        };
        let cl = closure(&cs, &gases).map_err(lib_err)?;
        *out = SgmixClosure {
            p: cl.p,
            theta: cl.theta,
            u: cl.velocity,
            alpha1: cl.alpha1,
            alpha2: cl.alpha2,
            cs: cl.cs(),
            rho: cl.rho(),
            residual: cl.residual,
        };
        Ok(())
    })
}

/// Conserved state from pressure, velocity, temperature and volume fraction.
///
/// # Safety
/// All pointers must be null or valid for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn sgmix_primitive_to_conserved(
    g1: *const SgmixGas,
    g2: *const SgmixGas,
    p: f64,
    u: f64,
    theta: f64,
    alpha1: f64,
    out: *mut SgmixConserved,
) -> SgmixStatus {
    guard(|| {
        let gases = gas_pair(g1, g2)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = primitive_to_conserved(p, u, theta, alpha1, &gases).map_err(lib_err)?;
        *out = SgmixConserved {
            rho1: s.rho1,
            rho2: s.rho2,
            mom: s.mom,
            etot: s.etot,
        };
        Ok(())
    })
}

fn new_sim(spec: CaseSpec, n: usize) -> Result<Box<SgmixSim>, (SgmixStatus, String)> {
    let n = if n == 0 { spec.defaults.n_coarse } else { n };
    let mesh = spec.mesh(n).map_err(lib_err)?;
    let state = build_initial(&spec, &mesh).map_err(lib_err)?;
    Ok(Box::new(SgmixSim {
        cfg: spec.scheme_config(),
        spec,
        state,
        steps: 0,
    }))
}

unsafe fn store(out: *mut *mut SgmixSim, sim: Box<SgmixSim>) -> Result<(), (SgmixStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(sim);
    Ok(())
}

/// Creates a simulation of benchmark case `case_id` ("A".."G") with `n`
/// cells (0 selects the case's coarse mesh) and the case's default numerics.
///
/// # Safety
/// `case_id` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sgmix_sim_new_case(case_id: *const c_char, n: usize, out: *mut *mut SgmixSim) -> SgmixStatus {
    guard(|| {
        let id = c_str(case_id, "case_id")?;
        let spec = make_case_str(id).map_err(lib_err)?;
        store(out, new_sim(spec, n)?)
    })
}

/// Creates a simulation from `key = value` configuration text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sgmix_sim_new_config(text: *const c_char, out: *mut *mut SgmixSim) -> SgmixStatus {
    guard(|| {
        let t = c_str(text, "text")?;
        let spec = CaseSpec::from_config_str(t).map_err(lib_err)?;
        let n = spec.defaults.n_coarse;
        store(out, new_sim(spec, n)?)
    })
}

/// Releases a simulation. Null is ignored.
///
/// # Safety
/// `sim` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sgmix_sim_free(sim: *mut SgmixSim) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Numerical parameters: `reg` 0 = QGD, 1 = QHD; `boundary` 0 = copy,
/// 1 = periodic.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgmixNumerics {
    pub reg: u32,
    pub a: f64,
    pub beta: f64,
    pub schmidt: f64,
    pub prandtl_inv: f64,
    pub boundary: u32,
}

/// Reads the current numerical parameters.
///
/// # Safety
/// `sim` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sgmix_sim_get_numerics(sim: *const SgmixSim, out: *mut SgmixNumerics) -> SgmixStatus {
    guard(|| {
        let sim = sim.as_ref().ok_or_else(|| null("sim"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let c = &sim.cfg;
        *out = SgmixNumerics {
            reg: (c.reg == Regularization::Qhd) as u32,
            a: c.a,
            beta: c.beta,
            schmidt: c.a_s,
            prandtl_inv: c.prandtl_inv_reported,
            boundary: (c.boundary == Boundary::Periodic) as u32,
        };
        Ok(())
    })
}

/// Replaces the numerical parameters after validating them.
///
/// # Safety
/// `sim` and `numerics` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sgmix_sim_set_numerics(sim: *mut SgmixSim, numerics: *const SgmixNumerics) -> SgmixStatus {
    guard(|| {
        let sim = sim.as_mut().ok_or_else(|| null("sim"))?;
        let n = numerics.as_ref().ok_or_else(|| null("numerics"))?;
        let bad = |what: &str, v: u32| (SgmixStatus::InvalidArgument, format!("{what} must be 0 or 1, got {v}"));
        let reg = match n.reg {
            0 => Regularization::Qgd,
            1 => Regularization::Qhd,
            v => return Err(bad("reg", v)),
        };
        let boundary = match n.boundary {
            0 => Boundary::Copy,
            1 => Boundary::Periodic,
            v => return Err(bad("boundary", v)),
        };
        let cfg = SchemeConfig {
            reg,
            a: n.a,
            beta: n.beta,
            a_s: n.schmidt,
            prandtl_inv_reported: n.prandtl_inv,
            boundary,
            ..sim.cfg.clone()
        };
        cfg.validate().map_err(lib_err)?;
        sim.cfg = cfg;
        Ok(())
    })
}

/// Takes one step of the automatic size; writes the step to `dt_out` if non-null.
///
/// # Safety
/// `sim` must be valid; `dt_out` null or valid.
#[no_mangle]
pub unsafe extern "C" fn sgmix_sim_step(sim: *mut SgmixSim, dt_out: *mut f64) -> SgmixStatus {
    guard(|| {
        let sim = sim.as_mut().ok_or_else(|| null("sim"))?;
        let dt = time_step(&sim.state, &sim.cfg);
        sim.state = step(&sim.state, &sim.cfg, dt).map_err(lib_err)?;
        sim.steps += 1;
        if let Some(d) = dt_out.as_mut() {
            *d = dt;
        }
        Ok(())
    })
}

/// Advances to time `t` (the last step is shortened to land on it). A
/// negative `t` selects the case's final time. On failure the state is left
/// as it was before the call.
///
/// # Safety
/// `sim` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sgmix_sim_advance(sim: *mut SgmixSim, t: f64) -> SgmixStatus {
    guard(|| {
        let sim = sim.as_mut().ok_or_else(|| null("sim"))?;
        let target = if t < 0.0 { sim.spec.t_fin } else { t };
        if target < sim.state.t {
            return Err((
                SgmixStatus::InvalidArgument,
                format!("target time {target} precedes current time {}", sim.state.t),
            ));
        }
        let t0 = sim.state.t;
        let mut from = sim.state.clone();
        from.t = 0.0;
        let r = run(&from, &sim.cfg, target - t0, 0).map_err(lib_err)?;
        sim.state = r.final_state;
        sim.state.t = target;
        sim.steps += r.steps as u64;
        Ok(())
    })
}

/// Current time, or NaN for a null handle.
///
/// # Safety
/// `sim` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sgmix_sim_time(sim: *const SgmixSim) -> f64 {
    sim.as_ref().map_or(f64::NAN, |s| s.state.t)
}

/// Steps taken so far, or 0 for a null handle.
///
/// # Safety
/// `sim` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sgmix_sim_steps(sim: *const SgmixSim) -> u64 {
    sim.as_ref().map_or(0, |s| s.steps)
}

/// Number of mesh nodes (`N + 1`), or 0 for a null handle.
///
/// # Safety
/// `sim` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sgmix_sim_num_nodes(sim: *const SgmixSim) -> usize {
    sim.as_ref().map_or(0, |s| s.state.mesh.n_nodes())
}

/// Copies one node field into `buf`, which must hold `sgmix_sim_num_nodes` values.
///
/// # Safety
/// `sim` must be valid; `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sgmix_sim_copy_field(
    sim: *const SgmixSim,
    field: SgmixField,
    buf: *mut f64,
    len: usize,
) -> SgmixStatus {
    guard(|| {
        let sim = sim.as_ref().ok_or_else(|| null("sim"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let s = &sim.state;
        let n = s.mesh.n_nodes();
        if len < n {
            return Err((
                SgmixStatus::BufferTooSmall,
                format!("buffer holds {len} values, need {n}"),
            ));
        }
        let out = std::slice::from_raw_parts_mut(buf, n);
        for (i, o) in out.iter_mut().enumerate() {
            *o = match field {
                SgmixField::X => s.mesh.node(i),
                SgmixField::Rho1 => s.rho1[i],
                SgmixField::Rho2 => s.rho2[i],
                SgmixField::Rho => s.rho(i),
                SgmixField::Y1 => s.y1(i),
                SgmixField::Alpha1 => s.alpha1[i],
                SgmixField::Alpha2 => s.alpha2[i],
                SgmixField::P => s.p[i],
                SgmixField::U => s.u[i],
                SgmixField::Theta => s.theta[i],
                SgmixField::Cs => s.cs[i],
            };
        }
        Ok(())
    })
}
