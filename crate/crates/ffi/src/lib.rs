//! C ABI for `rankone-ps`.
//!
//! Every function returns an [`RpsStatus`]; results come back through out
//! pointers. On failure the message is kept per thread and can be read with
//! [`rps_last_error_message`]. Objects with internal structure are opaque
//! handles created by `*_new` and released by the matching `*_free`.
//!
//! Space points are passed in half-space coordinates `(zeta, y)` and
//! boundary points as their embedding in the unit disk (h2, `v[2] = 0`) or
//! the unit sphere (h3).

use num_complex::Complex64;
use rankone_ps::boundary::{BoundaryPoint, SpacePoint};
use rankone_ps::group::{iwasawa_h, iwasawa_kan, GroupElement, Model};
use rankone_ps::patterson_sullivan::{ps_pairing, LLambda, SymbolWindow};
use rankone_ps::quadrature::QuadratureSpec;
use rankone_ps::quantization::{wigner_bilinear, Cutoff, Symbol};
use rankone_ps::transforms::{c_function, plane_wave, poisson_transform, Atom, BoundaryDistribution};
use rankone_ps::verify::{run_suite, ReportFormat, RunOptions, SuiteConfig, SymbolSpec};
use rankone_ps::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

/// Status code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RpsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotConverged = 3,
    Diagonal = 4,
    NotUnimodular = 5,
    Pole = 6,
    Config = 7,
    Io = 8,
    Numerical = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RpsModel {
    H2 = 2,
    H3 = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RpsComplex {
    pub re: f64,
    pub im: f64,
}

/// Point of the hyperbolic space in half-space coordinates (`zeta.im = 0` for h2).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RpsSpacePoint {
    pub zeta: RpsComplex,
    pub y: f64,
}

/// Boundary point as a unit vector; h2 points have `v[2] = 0`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RpsBoundaryPoint {
    pub v: [f64; 3],
}

/// Iwasawa coordinates `g = k a_t n_z`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RpsIwasawa {
    pub t: f64,
    pub n: RpsComplex,
}

/// Opaque group element.
pub struct RpsGroupElement(GroupElement);

/// Opaque finite atomic boundary distribution.
pub struct RpsDistribution {
    model: Model,
    atoms: Vec<Atom>,
}

impl RpsDistribution {
    fn build(&self) -> Result<BoundaryDistribution, Fail> {
        Ok(BoundaryDistribution::atomic(self.model, self.atoms.clone())?)
    }
}

/// Opaque symbol from the built-in family together with its cutoff.
pub struct RpsSymbol {
    symbol: Arc<dyn Symbol>,
    cutoff: Cutoff,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RpsStatus {
    match e {
        Error::NonConverged { .. } => RpsStatus::NotConverged,
        Error::Diagonal { .. } => RpsStatus::Diagonal,
        Error::NotUnimodular { .. } => RpsStatus::NotUnimodular,
        Error::Pole => RpsStatus::Pole,
        Error::Config(_) => RpsStatus::Config,
        Error::Io { .. } => RpsStatus::Io,
        Error::NonFinite { .. } | Error::IllConditioned(_) => RpsStatus::Numerical,
        _ => RpsStatus::InvalidArgument,
    }
}

struct Fail(RpsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(RpsStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard<F>(f: F) -> RpsStatus
where
    F: FnOnce() -> Result<(), Fail>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RpsStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            RpsStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(p: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

fn model(m: RpsModel) -> Model {
    match m {
        RpsModel::H2 => Model::H2,
        RpsModel::H3 => Model::H3,
    }
}

fn cx(c: RpsComplex) -> Complex64 {
    Complex64::new(c.re, c.im)
}

fn rc(c: Complex64) -> RpsComplex {
    RpsComplex { re: c.re, im: c.im }
}

fn space_point(m: Model, p: RpsSpacePoint) -> Result<SpacePoint, Fail> {
    if m == Model::H2 && p.zeta.im != 0.0 {
        return Err(Fail(RpsStatus::InvalidArgument, "h2 points need zeta.im = 0".into()));
    }
    Ok(SpacePoint::half_space(m, cx(p.zeta), p.y)?)
}

fn boundary_point(m: Model, p: RpsBoundaryPoint) -> Result<BoundaryPoint, Fail> {
    match m {
        Model::H2 => {
            let r = p.v[0].hypot(p.v[1]);
            if p.v[2] != 0.0 || (r - 1.0).abs() > 1e-12 {
                return Err(Fail(RpsStatus::InvalidArgument, format!("h2 boundary points are unit vectors with v[2] = 0, got {:?}", p.v)));
            }
            Ok(BoundaryPoint::circle(p.v[1].atan2(p.v[0])))
        }
        Model::H3 => Ok(BoundaryPoint::sphere(p.v)?),
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(RpsStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

fn out_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s).map(CString::into_raw).map_err(|_| Fail(RpsStatus::InvalidArgument, "string contains NUL".into()))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn rps_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rps_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rps_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Group element from its entries in row-major order; `det` must be 1.
///
/// # Safety
/// `entries` points to four values; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rps_group_new(m: RpsModel, entries: *const RpsComplex, out: *mut *mut RpsGroupElement) -> RpsStatus {
    guard(|| {
        if entries.is_null() {
            return Err(null("entries"));
        }
        let e = std::slice::from_raw_parts(entries, 4);
        let g = GroupElement::new(model(m), [[cx(e[0]), cx(e[1])], [cx(e[2]), cx(e[3])]])?;
        write(out, Box::into_raw(Box::new(RpsGroupElement(g))), "out")
    })
}

/// `a_t = diag(e^{t/2}, e^{-t/2})`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rps_group_a(m: RpsModel, t: f64, out: *mut *mut RpsGroupElement) -> RpsStatus {
    guard(|| write(out, Box::into_raw(Box::new(RpsGroupElement(GroupElement::a(model(m), t)))), "out"))
}

/// `n_z = [[1, z], [0, 1]]` (`z` real for h2).
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rps_group_n(m: RpsModel, z: RpsComplex, out: *mut *mut RpsGroupElement) -> RpsStatus {
    guard(|| {
        if m == RpsModel::H2 && z.im != 0.0 {
            return Err(Fail(RpsStatus::InvalidArgument, "h2 needs a real z".into()));
        }
        write(out, Box::into_raw(Box::new(RpsGroupElement(GroupElement::n(model(m), cx(z))))), "out")
    })
}

/// Product `a * b`.
///
/// # Safety
/// Handles are valid; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rps_group_mul(a: *const RpsGroupElement, b: *const RpsGroupElement, out: *mut *mut RpsGroupElement) -> RpsStatus {
    guard(|| {
        let (a, b) = (deref(a, "a")?, deref(b, "b")?);
        if a.0.model() != b.0.model() {
            return Err(Fail(RpsStatus::InvalidArgument, "factors belong to different models".into()));
        }
        write(out, Box::into_raw(Box::new(RpsGroupElement(a.0 * b.0))), "out")
    })
}

/// Entries in row-major order.
///
/// # Safety
/// `g` is valid; `out` has room for four values.
#[no_mangle]
pub unsafe extern "C" fn rps_group_entries(g: *const RpsGroupElement, out: *mut RpsComplex) -> RpsStatus {
    guard(|| {
        let g = deref(g, "g")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let e = g.0.entries();
        for (i, v) in [e[0][0], e[0][1], e[1][0], e[1][1]].into_iter().enumerate() {
            out.add(i).write(rc(v));
        }
        Ok(())
    })
}

/// # Safety
/// `g` comes from this library and is not used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn rps_group_free(g: *mut RpsGroupElement) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Iwasawa decomposition `g = k a_t n_z`; `k_out` may be null.
///
/// # Safety
/// `g` is valid; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rps_iwasawa(g: *const RpsGroupElement, out: *mut RpsIwasawa, k_out: *mut *mut RpsGroupElement) -> RpsStatus {
    guard(|| {
        let c = iwasawa_kan(&deref(g, "g")?.0);
        write(out, RpsIwasawa { t: c.t, n: rc(c.n) }, "out")?;
        if !k_out.is_null() {
            k_out.write(Box::into_raw(Box::new(RpsGroupElement(c.k))));
        }
        Ok(())
    })
}

/// `H(g)`, the `A`-coordinate of the Iwasawa decomposition.
///
/// # Safety
/// `g` is valid; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rps_iwasawa_h(g: *const RpsGroupElement, out: *mut f64) -> RpsStatus {
    guard(|| write(out, iwasawa_h(&deref(g, "g")?.0), "out"))
}

/// Harish-Chandra c-function `c(lambda)`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rps_c_function(m: RpsModel, lambda: f64, out: *mut RpsComplex) -> RpsStatus {
    guard(|| write(out, rc(c_function(lambda, model(m))?), "out"))
}

/// Plane wave `e^{(i lambda + rho) <z, b>}`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rps_plane_wave(m: RpsModel, z: RpsSpacePoint, lambda: f64, b: RpsBoundaryPoint, out: *mut RpsComplex) -> RpsStatus {
    guard(|| {
        let m = model(m);
        write(out, rc(plane_wave(&space_point(m, z)?, lambda, &boundary_point(m, b)?)), "out")
    })
}

/// Empty distribution; add atoms with [`rps_distribution_add_atom`].
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rps_distribution_new(m: RpsModel, out: *mut *mut RpsDistribution) -> RpsStatus {
    guard(|| write(out, Box::into_raw(Box::new(RpsDistribution { model: model(m), atoms: Vec::new() })), "out"))
}

/// Adds the atom `weight * delta_b`. Atoms closer than the minimal chordal
/// gap to an existing one are rejected.
///
/// # Safety
/// `d` is valid.
#[no_mangle]
pub unsafe extern "C" fn rps_distribution_add_atom(d: *mut RpsDistribution, weight: RpsComplex, b: RpsBoundaryPoint) -> RpsStatus {
    guard(|| {
        let d = d.as_mut().ok_or_else(|| null("d"))?;
        let mut atoms = d.atoms.clone();
        atoms.push(Atom { weight: cx(weight), point: boundary_point(d.model, b)? });
        BoundaryDistribution::atomic(d.model, atoms.clone())?;
        d.atoms = atoms;
        Ok(())
    })
}

/// # Safety
/// `d` comes from this library and is not used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn rps_distribution_free(d: *mut RpsDistribution) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Poisson transform `P_lambda(T)(z)`.
///
/// # Safety
/// `d` is valid; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rps_poisson(d: *const RpsDistribution, lambda: f64, z: RpsSpacePoint, out: *mut RpsComplex) -> RpsStatus {
    guard(|| {
        let d = deref(d, "d")?;
        let z = space_point(d.model, z)?;
        write(out, rc(poisson_transform(&d.build()?, lambda).eval(&z)?), "out")
    })
}

/// Symbol from a TOML table with the fields of a suite config's `[symbol]`
/// section, with a smooth cutoff of radius `cutoff_radius` around
/// `cutoff_center`.
///
/// # Safety
/// `spec_toml` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rps_symbol_new(
    m: RpsModel,
    spec_toml: *const c_char,
    cutoff_center: RpsSpacePoint,
    cutoff_radius: f64,
    out: *mut *mut RpsSymbol,
) -> RpsStatus {
    guard(|| {
        let m = model(m);
        let spec: SymbolSpec = toml::from_str(c_str(spec_toml, "spec_toml")?).map_err(|e| Fail(RpsStatus::Config, e.to_string()))?;
        let symbol = spec.build(m)?;
        let cutoff = Cutoff::new(space_point(m, cutoff_center)?, cutoff_radius)?;
        write(out, Box::into_raw(Box::new(RpsSymbol { symbol, cutoff })), "out")
    })
}

/// # Safety
/// `s` comes from this library and is not used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn rps_symbol_free(s: *mut RpsSymbol) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Wigner pairing `<chi Op(a) P_{lambda_k}(T_k), P_{lambda_j}(T_j)>` as a
/// bilinear sum over the atoms. `err_out` may be null.
///
/// # Safety
/// Handles are valid; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rps_wigner(
    s: *const RpsSymbol,
    lambda_j: f64,
    tj: *const RpsDistribution,
    lambda_k: f64,
    tk: *const RpsDistribution,
    rel_tol: f64,
    out: *mut RpsComplex,
    err_out: *mut f64,
) -> RpsStatus {
    guard(|| {
        let (s, tj, tk) = (deref(s, "s")?, deref(tj, "tj")?.build()?, deref(tk, "tk")?.build()?);
        let spec = QuadratureSpec::with_tol(rel_tol, 1e-15);
        let r = wigner_bilinear(&*s.symbol, lambda_j, &tj, lambda_k, &tk, &s.cutoff, &spec)?;
        let v = r.require_converged(&spec)?;
        if !err_out.is_null() {
            err_out.write(r.err_est);
        }
        write(out, rc(v), "out")
    })
}

/// Patterson-Sullivan pairing of the window `chi(g o) a(g o, g M)`, or of
/// `L_{lambda_k}` applied to it when `apply_l_lambda` is non-zero.
///
/// # Safety
/// Handles are valid; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rps_ps_pairing(
    s: *const RpsSymbol,
    lambda_j: f64,
    tj: *const RpsDistribution,
    lambda_k: f64,
    tk: *const RpsDistribution,
    apply_l_lambda: i32,
    rel_tol: f64,
    out: *mut RpsComplex,
) -> RpsStatus {
    guard(|| {
        let (s, tj, tk) = (deref(s, "s")?, deref(tj, "tj")?.build()?, deref(tk, "tk")?.build()?);
        let spec = QuadratureSpec::with_tol(rel_tol, 1e-15);
        let f = SymbolWindow::new(s.symbol.clone(), s.cutoff)?;
        let r = if apply_l_lambda != 0 {
            ps_pairing(&LLambda::new(&f, lambda_k, spec)?, lambda_j, &tj, lambda_k, &tk, &spec)?
        } else {
            ps_pairing(&f, lambda_j, &tj, lambda_k, &tk, &spec)?
        };
        write(out, rc(r.require_converged(&spec)?), "out")
    })
}

/// Runs a verification suite from a TOML config and returns the report as
/// JSON (`format` 0) or CSV (`format` 1). `parallelism` 0 keeps the config
/// value. Free `report_out` with [`rps_string_free`].
///
/// # Safety
/// `config_toml` is a NUL-terminated string; out pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn rps_run_suite(
    config_toml: *const c_char,
    parallelism: usize,
    format: i32,
    report_out: *mut *mut c_char,
    passed_out: *mut i32,
) -> RpsStatus {
    guard(|| {
        let cfg = SuiteConfig::parse(c_str(config_toml, "config_toml")?)?;
        let fmt = match format {
            0 => ReportFormat::Json,
            1 => ReportFormat::Csv,
            _ => return Err(Fail(RpsStatus::InvalidArgument, format!("unknown report format {format}"))),
        };
        if report_out.is_null() {
            return Err(null("report_out"));
        }
        let opts = RunOptions { parallelism: (parallelism > 0).then_some(parallelism), timestamp: false };
        let report = run_suite(&cfg, &opts)?;
        let text = match fmt {
            ReportFormat::Json => report.to_json()?,
            ReportFormat::Csv => report.to_csv()?,
        };
        if !passed_out.is_null() {
            passed_out.write(report.passed() as i32);
        }
        report_out.write(out_string(text)?);
        Ok(())
    })
}
