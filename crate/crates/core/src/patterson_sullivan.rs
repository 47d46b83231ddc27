//! Intermediate values, Radon and weighted Radon transforms along
//! geodesics, the fiber operator `L_lambda`, and Patterson-Sullivan
//! pairings for atomic boundary data.
//!
//! Phase-space functions are functions on `G` invariant under right
//! multiplication by `M`. Every integral here is over a compact range
//! derived from a declared support ball, so no integral runs over an
//! unbounded domain.
//!
//! The central identity checked by the test suites: for `g = g(b, b')` and
//! `F(g) = chi(g.o) a(g.o, g.M)`,
//!
//! ```text
//! int_X chi a(z, b) e^{(i l_j + rho)<z, b>} e^{(i l_k + rho)<z, b'>} dz
//!     = int_A d_{l_j, l_k}(g a) (L_{l_k} F)(g a) da.
//! ```

use crate::boundary::{geodesic_frame, BoundaryPoint, GeodesicFrame, PhaseSpacePoint, SpacePoint};
use crate::error::{Error, Result};
use crate::group::{iwasawa_h, GroupElement, Model};
use crate::quadrature::{integrate_iterated, try_integrate_1d, Domain, QuadResult, QuadratureSpec};
use crate::quantization::{Cutoff, Symbol};
use crate::support::{Ball, NDisk};
use crate::transforms::BoundaryDistribution;
use num_complex::Complex64;
use rayon::prelude::*;
use std::fmt;
use std::sync::Arc;

/// Compactly supported function on `G/M`.
pub trait PhaseSpaceFunction: Send + Sync {
    fn model(&self) -> Model;

    fn eval(&self, g: &GroupElement) -> Result<Complex64>;

    /// Value with a quadrature error estimate, for functions that are
    /// themselves integrals.
    fn eval_with_error(&self, g: &GroupElement) -> Result<QuadResult> {
        Ok(QuadResult::exact(self.eval(g)?))
    }

    /// Ball containing `{g.o : f(g) != 0}`, if one is known.
    fn z_support(&self) -> Option<Ball>;

    /// Interval of `t` outside which `f(g a_t) = 0`; `None` if empty.
    fn a_range(&self, g: &GroupElement) -> Result<Option<(f64, f64)>> {
        Ok(self.require_support()?.a_range(g))
    }

    /// Disk of `z` outside which `f(g n_z) = 0`; `None` if empty.
    fn n_range(&self, g: &GroupElement) -> Result<Option<NDisk>> {
        Ok(self.require_support()?.n_range(g))
    }

    fn require_support(&self) -> Result<Ball> {
        self.z_support().ok_or_else(|| Error::UnboundedSupport("phase-space function has no declared support".into()))
    }
}

impl<T: PhaseSpaceFunction + ?Sized> PhaseSpaceFunction for Arc<T> {
    fn model(&self) -> Model {
        (**self).model()
    }
    fn eval(&self, g: &GroupElement) -> Result<Complex64> {
        (**self).eval(g)
    }
    fn eval_with_error(&self, g: &GroupElement) -> Result<QuadResult> {
        (**self).eval_with_error(g)
    }
    fn z_support(&self) -> Option<Ball> {
        (**self).z_support()
    }
    fn a_range(&self, g: &GroupElement) -> Result<Option<(f64, f64)>> {
        (**self).a_range(g)
    }
    fn n_range(&self, g: &GroupElement) -> Result<Option<NDisk>> {
        (**self).n_range(g)
    }
}

impl<T: PhaseSpaceFunction + ?Sized> PhaseSpaceFunction for &T {
    fn model(&self) -> Model {
        (**self).model()
    }
    fn eval(&self, g: &GroupElement) -> Result<Complex64> {
        (**self).eval(g)
    }
    fn eval_with_error(&self, g: &GroupElement) -> Result<QuadResult> {
        (**self).eval_with_error(g)
    }
    fn z_support(&self) -> Option<Ball> {
        (**self).z_support()
    }
    fn a_range(&self, g: &GroupElement) -> Result<Option<(f64, f64)>> {
        (**self).a_range(g)
    }
    fn n_range(&self, g: &GroupElement) -> Result<Option<NDisk>> {
        (**self).n_range(g)
    }
}

/// `F(g) = chi(g.o) a(g.o, g.M)`.
#[derive(Clone)]
pub struct SymbolWindow {
    pub symbol: Arc<dyn Symbol>,
    pub cutoff: Cutoff,
}

impl SymbolWindow {
    pub fn new(symbol: Arc<dyn Symbol>, cutoff: Cutoff) -> Result<Self> {
        if symbol.model() != cutoff.support().model() {
            return Err(Error::invalid("symbol and cutoff belong to different models"));
        }
        Ok(SymbolWindow { symbol, cutoff })
    }
}

impl fmt::Debug for SymbolWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolWindow").field("support", &self.symbol.support()).field("cutoff", &self.cutoff).finish()
    }
}

impl PhaseSpaceFunction for SymbolWindow {
    fn model(&self) -> Model {
        self.symbol.model()
    }

    fn eval(&self, g: &GroupElement) -> Result<Complex64> {
        let z = SpacePoint::from_group(*g);
        let c = self.cutoff.eval(&z);
        if c == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let b = PhaseSpacePoint::new(*g).forward();
        Ok(c * self.symbol.eval(&z, &b))
    }

    fn z_support(&self) -> Option<Ball> {
        let (a, c) = (self.symbol.support(), self.cutoff.support());
        Some(*Ball::smaller(&a, &c))
    }
}

/// `g -> f(gamma^{-1} g)`.
#[derive(Debug, Clone)]
pub struct LeftTranslate<F> {
    pub gamma: GroupElement,
    gamma_inv: GroupElement,
    pub inner: F,
}

impl<F: PhaseSpaceFunction> LeftTranslate<F> {
    pub fn new(gamma: GroupElement, inner: F) -> Self {
        LeftTranslate { gamma, gamma_inv: gamma.inverse(), inner }
    }
}

impl<F: PhaseSpaceFunction> PhaseSpaceFunction for LeftTranslate<F> {
    fn model(&self) -> Model {
        self.inner.model()
    }
    fn eval(&self, g: &GroupElement) -> Result<Complex64> {
        self.inner.eval(&(self.gamma_inv * *g))
    }
    fn eval_with_error(&self, g: &GroupElement) -> Result<QuadResult> {
        self.inner.eval_with_error(&(self.gamma_inv * *g))
    }
    fn z_support(&self) -> Option<Ball> {
        self.inner.z_support().map(|b| b.translate(&self.gamma))
    }
    fn a_range(&self, g: &GroupElement) -> Result<Option<(f64, f64)>> {
        self.inner.a_range(&(self.gamma_inv * *g))
    }
    fn n_range(&self, g: &GroupElement) -> Result<Option<NDisk>> {
        self.inner.n_range(&(self.gamma_inv * *g))
    }
}

/// `g -> f(g a_s)`, the geodesic flow.
#[derive(Debug, Clone)]
pub struct RightTranslate<F> {
    pub s: f64,
    a_s: GroupElement,
    pub inner: F,
}

impl<F: PhaseSpaceFunction> RightTranslate<F> {
    pub fn new(s: f64, inner: F) -> Self {
        RightTranslate { s, a_s: GroupElement::a(inner.model(), s), inner }
    }
}

impl<F: PhaseSpaceFunction> PhaseSpaceFunction for RightTranslate<F> {
    fn model(&self) -> Model {
        self.inner.model()
    }
    fn eval(&self, g: &GroupElement) -> Result<Complex64> {
        self.inner.eval(&(*g * self.a_s))
    }
    fn eval_with_error(&self, g: &GroupElement) -> Result<QuadResult> {
        self.inner.eval_with_error(&(*g * self.a_s))
    }
    fn z_support(&self) -> Option<Ball> {
        self.inner.z_support().map(|b| b.enlarged(self.s))
    }
    fn a_range(&self, g: &GroupElement) -> Result<Option<(f64, f64)>> {
        Ok(self.inner.a_range(g)?.map(|(t0, t1)| (t0 - self.s, t1 - self.s)))
    }
    fn n_range(&self, g: &GroupElement) -> Result<Option<NDisk>> {
        // f(g n_z a_s) = f(g a_s n_{e^{-s} z})
        Ok(self.inner.n_range(&(*g * self.a_s))?.map(|d| {
            let k = self.s.exp();
            NDisk { center: d.center * k, radius: d.radius * k }
        }))
    }
}

/// `g -> f(g w)`, time reversal (swaps the endpoints of the geodesic).
#[derive(Debug, Clone)]
pub struct TimeReversed<F> {
    w: GroupElement,
    pub inner: F,
}

impl<F: PhaseSpaceFunction> TimeReversed<F> {
    pub fn new(inner: F) -> Self {
        TimeReversed { w: GroupElement::weyl(inner.model()), inner }
    }
}

impl<F: PhaseSpaceFunction> PhaseSpaceFunction for TimeReversed<F> {
    fn model(&self) -> Model {
        self.inner.model()
    }
    fn eval(&self, g: &GroupElement) -> Result<Complex64> {
        self.inner.eval(&(*g * self.w))
    }
    fn eval_with_error(&self, g: &GroupElement) -> Result<QuadResult> {
        self.inner.eval_with_error(&(*g * self.w))
    }
    fn z_support(&self) -> Option<Ball> {
        self.inner.z_support()
    }
    fn a_range(&self, g: &GroupElement) -> Result<Option<(f64, f64)>> {
        // g a_t w = g w a_{-t}
        Ok(self.inner.a_range(&(*g * self.w))?.map(|(t0, t1)| (-t1, -t0)))
    }
    fn n_range(&self, g: &GroupElement) -> Result<Option<NDisk>> {
        Ok(self.require_support()?.n_range(g))
    }
}

/// Phase-space function from a closure and a support ball.
#[derive(Clone)]
pub struct PhaseFn {
    support: Ball,
    f: Arc<dyn Fn(&GroupElement) -> Complex64 + Send + Sync>,
}

impl PhaseFn {
    pub fn new<F>(support: Ball, f: F) -> Self
    where
        F: Fn(&GroupElement) -> Complex64 + Send + Sync + 'static,
    {
        PhaseFn { support, f: Arc::new(f) }
    }
}

impl fmt::Debug for PhaseFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhaseFn").field("support", &self.support).finish()
    }
}

impl PhaseSpaceFunction for PhaseFn {
    fn model(&self) -> Model {
        self.support.model()
    }
    fn eval(&self, g: &GroupElement) -> Result<Complex64> {
        if !self.support.contains(&SpacePoint::from_group(*g)) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok((self.f)(g))
    }
    fn z_support(&self) -> Option<Ball> {
        Some(self.support)
    }
}

/// `d_lambda(g) = e^{(i lambda + rho)(H(g) + H(gw))}`, invariant under
/// `g -> g a m`.
pub fn d_lambda(g: &GroupElement, lambda: f64) -> Complex64 {
    d_lambda_mu(g, lambda, lambda)
}

/// `e^{(i lambda + rho) H(g)} e^{(i mu + rho) H(gw)}`. Not `A`-invariant:
/// `d(g a_t) = d(g) e^{i (lambda - mu) t}`.
pub fn d_lambda_mu(g: &GroupElement, lambda: f64, mu: f64) -> Complex64 {
    let rho = g.model().rho();
    let gw = *g * GroupElement::weyl(g.model());
    (Complex64::new(rho, lambda) * iwasawa_h(g) + Complex64::new(rho, mu) * iwasawa_h(&gw)).exp()
}

/// `d_lambda(b, b')` through the geodesic frame.
pub fn d_lambda_pair(b: &BoundaryPoint, b_prime: &BoundaryPoint, lambda: f64) -> Result<Complex64> {
    Ok(d_lambda(&geodesic_frame(b, b_prime)?.g, lambda))
}

/// `int_A f(g a_t) dt` along the frame.
pub fn radon_frame(f: &dyn PhaseSpaceFunction, frame: &GeodesicFrame, spec: &QuadratureSpec) -> Result<QuadResult> {
    weighted_radon_inner(f, &frame.g, None, spec)
}

/// Radon transform `Rf(b, b') = int_A f(g(b, b') a) da`.
pub fn radon(f: &dyn PhaseSpaceFunction, b: &BoundaryPoint, b_prime: &BoundaryPoint, spec: &QuadratureSpec) -> Result<QuadResult> {
    check_model(f, b)?;
    radon_frame(f, &geodesic_frame(b, b_prime)?, spec)
}

/// `int_A d_{lambda, mu}(g a) f(g a) da` for the frame representative `g`.
/// The weight is recomputed from Iwasawa projections at every node rather
/// than from the defect law.
pub fn weighted_radon_frame(f: &dyn PhaseSpaceFunction, lambda: f64, mu: f64, frame: &GeodesicFrame, spec: &QuadratureSpec) -> Result<QuadResult> {
    weighted_radon_inner(f, &frame.g, Some((lambda, mu)), spec)
}

pub fn weighted_radon(
    f: &dyn PhaseSpaceFunction,
    lambda: f64,
    mu: f64,
    b: &BoundaryPoint,
    b_prime: &BoundaryPoint,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    check_model(f, b)?;
    weighted_radon_frame(f, lambda, mu, &geodesic_frame(b, b_prime)?, spec)
}

fn weighted_radon_inner(f: &dyn PhaseSpaceFunction, g: &GroupElement, weight: Option<(f64, f64)>, spec: &QuadratureSpec) -> Result<QuadResult> {
    let Some((t0, t1)) = f.a_range(g)? else {
        return Ok(QuadResult::zero());
    };
    let model = g.model();
    integrate_iterated(
        |t| {
            let ga = *g * GroupElement::a(model, t);
            let r = f.eval_with_error(&ga)?;
            Ok(match weight {
                Some((lambda, mu)) => r.scaled(d_lambda_mu(&ga, lambda, mu)),
                None => r,
            })
        },
        Domain::Interval(t0, t1),
        spec,
    )
}

fn check_model(f: &dyn PhaseSpaceFunction, b: &BoundaryPoint) -> Result<()> {
    if f.model() != b.model() {
        return Err(Error::invalid("function and boundary points belong to different models"));
    }
    Ok(())
}

/// `(L_lambda f)(g) = int_N e^{-(i lambda + rho) H(n w)} f(g n) dn` with
/// `dn = d^s z / pi` and the closed form `H(n_z w) = log(1 + |z|^2)`.
#[derive(Clone)]
pub struct LLambda<F> {
    pub inner: F,
    pub lambda: f64,
    pub spec: QuadratureSpec,
}

impl<F: PhaseSpaceFunction> LLambda<F> {
    pub fn new(inner: F, lambda: f64, spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        if !lambda.is_finite() {
            return Err(Error::NonFinite { x: lambda });
        }
        Ok(LLambda { inner, lambda, spec })
    }
}

impl<F: fmt::Debug> fmt::Debug for LLambda<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LLambda").field("inner", &self.inner).field("lambda", &self.lambda).finish()
    }
}

/// `(1 + |z|^2)^{-(i lambda + rho)}`.
pub fn l_lambda_weight(model: Model, lambda: f64, z: Complex64) -> Complex64 {
    (-Complex64::new(model.rho(), lambda) * z.norm_sqr().ln_1p()).exp()
}

impl<F: PhaseSpaceFunction> PhaseSpaceFunction for LLambda<F> {
    fn model(&self) -> Model {
        self.inner.model()
    }

    fn eval(&self, g: &GroupElement) -> Result<Complex64> {
        self.eval_with_error(g)?.require_converged(&self.spec)
    }

    fn eval_with_error(&self, g: &GroupElement) -> Result<QuadResult> {
        l_lambda(&self.inner, self.lambda, g, &self.spec)
    }

    fn z_support(&self) -> Option<Ball> {
        None
    }

    /// `L_lambda f (g a_t)` integrates `f` over the horosphere `g a_t N . o`,
    /// which meets the support only for `t` in the horospherical range.
    fn a_range(&self, g: &GroupElement) -> Result<Option<(f64, f64)>> {
        Ok(Some(self.inner.require_support()?.horospherical_a_range(g)))
    }

    fn n_range(&self, _g: &GroupElement) -> Result<Option<NDisk>> {
        Err(Error::UnboundedSupport("L_lambda f is not compactly supported along N".into()))
    }
}

/// `(L_lambda f)(g)` over the `N`-disk where `f(g n)` can be nonzero.
pub fn l_lambda(f: &dyn PhaseSpaceFunction, lambda: f64, g: &GroupElement, spec: &QuadratureSpec) -> Result<QuadResult> {
    let model = f.model();
    let Some(disk) = f.n_range(g)? else {
        return Ok(QuadResult::zero());
    };
    let integrand = |z: Complex64| -> Result<Complex64> {
        let v = f.eval(&(*g * GroupElement::n(model, z)))?;
        if v == Complex64::new(0.0, 0.0) {
            return Ok(v);
        }
        Ok(l_lambda_weight(model, lambda, z) * v)
    };
    let (c, r) = (disk.center, disk.radius);
    let res = match model {
        Model::H2 => try_integrate_1d(|u| integrand(Complex64::new(u, 0.0)), Domain::Interval(c.re - r, c.re + r), spec)?,
        Model::H3 => integrate_iterated(
            |x| {
                let h2 = r * r - (x - c.re) * (x - c.re);
                if h2 <= 0.0 {
                    return Ok(QuadResult::zero());
                }
                let h = h2.sqrt();
                try_integrate_1d(|y| integrand(Complex64::new(x, y)), Domain::Interval(c.im - h, c.im + h), spec)
            },
            Domain::Interval(c.re - r, c.re + r),
            spec,
        )?,
    };
    Ok(res.scaled(Complex64::from(model.params().n_bar_measure_const)))
}

/// `sum_{i,l} c_i c'_l (R_{lambda_j, lambda_k} f)(b_i, b'_l)` for atomic data.
/// Any pair of atoms on the diagonal is an error.
pub fn ps_pairing(
    f: &dyn PhaseSpaceFunction,
    lambda_j: f64,
    t_j: &BoundaryDistribution,
    lambda_k: f64,
    t_k: &BoundaryDistribution,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    if !(t_j.is_atomic() && t_k.is_atomic()) {
        return Err(Error::InvalidDistribution("pairings are implemented for atomic data only".into()));
    }
    if t_j.model() != f.model() || t_k.model() != f.model() {
        return Err(Error::invalid("function and boundary data belong to different models"));
    }
    let pairs: Vec<_> = t_j.atoms().iter().flat_map(|a| t_k.atoms().iter().map(move |b| (a, b))).collect();
    // frames first, so a diagonal pair fails before any quadrature runs
    let frames = pairs.iter().map(|(a, b)| geodesic_frame(&a.point, &b.point)).collect::<Result<Vec<_>>>()?;
    let terms = pairs
        .par_iter()
        .zip(frames.par_iter())
        .map(|((a, b), frame)| Ok(weighted_radon_frame(f, lambda_j, lambda_k, frame, spec)?.scaled(a.weight * b.weight)))
        .collect::<Result<Vec<_>>>()?;
    Ok(sum_results(&terms))
}

/// Diagonal pairing `PS_lambda = PS_{lambda, lambda}`.
pub fn ps_pairing_diagonal(
    f: &dyn PhaseSpaceFunction,
    lambda: f64,
    t: &BoundaryDistribution,
    t_prime: &BoundaryDistribution,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    ps_pairing(f, lambda, t, lambda, t_prime, spec)
}

/// Pairing multiplied by a caller-supplied normalization constant.
pub fn normalized_pairing(raw: QuadResult, normalization: Complex64) -> Result<QuadResult> {
    if normalization.norm() == 0.0 || !normalization.norm().is_finite() {
        return Err(Error::invalid("normalization constant must be finite and nonzero"));
    }
    Ok(raw.scaled(normalization.inv()))
}

pub(crate) fn sum_results(terms: &[QuadResult]) -> QuadResult {
    terms.iter().fold(QuadResult::zero(), |acc, r| QuadResult {
        value: acc.value + r.value,
        err_est: acc.err_est + r.err_est,
        converged: acc.converged && r.converged,
        evaluations: acc.evaluations + r.evaluations,
    })
}
