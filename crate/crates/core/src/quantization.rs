//! Zero-order symbols, `Op(a)` on Poisson eigenfunctions, and Wigner
//! pairings.
//!
//! `Op(a)` is realized through its action on plane waves,
//! `Op(a) P_lambda(T)(z) = int_B a(z, b) e^{(i lambda + rho) <z, b>} T(db)`,
//! which is all the pairings below need.
//!
//! Wigner pairings are bilinear: `int chi Op(a) phi_j phi_k dz` with no
//! complex conjugation on `phi_k`. This matches real-valued eigenfunctions;
//! with complex synthetic boundary data a sesquilinear pairing would not
//! satisfy the Radon-side identity.

use crate::boundary::{BoundaryPoint, SpacePoint};
use crate::error::{Error, Result};
use crate::group::Model;
use crate::quadrature::{QuadResult, QuadratureSpec};
use crate::support::{integrate_ball, smooth_cutoff, Ball, Bump};
use crate::transforms::{plane_wave, BoundaryDistribution};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Declared regularity of a symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Smoothness {
    Finite(u32),
    Infinite,
}

/// A `lambda`-independent symbol `a(z, b)` with compact support in `z`.
pub trait Symbol: Send + Sync {
    fn model(&self) -> Model;
    fn eval(&self, z: &SpacePoint, b: &BoundaryPoint) -> Complex64;
    /// Ball containing the `z`-support.
    fn support(&self) -> Ball;
    fn smoothness(&self) -> Smoothness {
        Smoothness::Infinite
    }
}

/// `bump(z) * (1 + epsilon Re(e^{i phase} (b_x + i b_y)^mode))`, where
/// `(b_x, b_y)` are the first two Euclidean coordinates of `b` (so the
/// boundary factor is `cos(mode phi + phase)` on the circle and smooth on
/// the sphere).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpTrigSymbol {
    pub bump: Bump,
    pub epsilon: f64,
    pub mode: u32,
    pub phase: f64,
}

impl BumpTrigSymbol {
    pub fn new(bump: Bump, epsilon: f64, mode: u32, phase: f64) -> Result<Self> {
        if !(epsilon.is_finite() && phase.is_finite()) {
            return Err(Error::invalid("symbol parameters must be finite"));
        }
        Ok(BumpTrigSymbol { bump, epsilon, mode, phase })
    }

    pub fn boundary_factor(&self, b: &BoundaryPoint) -> f64 {
        let e = b.embedding();
        let w = Complex64::new(e[0], e[1]).powu(self.mode);
        1.0 + self.epsilon * (Complex64::from_polar(1.0, self.phase) * w).re
    }
}

impl Symbol for BumpTrigSymbol {
    fn model(&self) -> Model {
        self.bump.ball.model()
    }

    fn eval(&self, z: &SpacePoint, b: &BoundaryPoint) -> Complex64 {
        let r = self.bump.eval(z);
        if r == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(r * self.boundary_factor(b), 0.0)
    }

    fn support(&self) -> Ball {
        self.bump.ball
    }
}

/// Symbol given by a closure.
type SymbolFn = Arc<dyn Fn(&SpacePoint, &BoundaryPoint) -> Complex64 + Send + Sync>;

#[derive(Clone)]
pub struct FnSymbol {
    model: Model,
    support: Ball,
    smoothness: Smoothness,
    f: SymbolFn,
}

impl FnSymbol {
    pub fn new<F>(support: Ball, smoothness: Smoothness, f: F) -> Self
    where
        F: Fn(&SpacePoint, &BoundaryPoint) -> Complex64 + Send + Sync + 'static,
    {
        FnSymbol { model: support.model(), support, smoothness, f: Arc::new(f) }
    }
}

impl fmt::Debug for FnSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnSymbol").field("support", &self.support).field("smoothness", &self.smoothness).finish()
    }
}

impl Symbol for FnSymbol {
    fn model(&self) -> Model {
        self.model
    }

    fn eval(&self, z: &SpacePoint, b: &BoundaryPoint) -> Complex64 {
        if !self.support.contains(z) {
            return Complex64::new(0.0, 0.0);
        }
        (self.f)(z, b)
    }

    fn support(&self) -> Ball {
        self.support
    }

    fn smoothness(&self) -> Smoothness {
        self.smoothness
    }
}

/// Compactly supported window `chi(z)` with values in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    bump: Bump,
    /// `chi = 1` within this distance of the center.
    plateau: f64,
}

impl Cutoff {
    /// Smooth cutoff equal to 1 at `center` and vanishing outside the ball.
    pub fn new(center: SpacePoint, radius: f64) -> Result<Self> {
        Ok(Cutoff { bump: Bump::new(center, f64::INFINITY, radius)?, plateau: 0.0 })
    }

    /// Equal to 1 on the ball of radius `plateau`, decaying smoothly to 0
    /// at `radius`.
    pub fn plateau(center: SpacePoint, plateau: f64, radius: f64) -> Result<Self> {
        if !(0.0..radius).contains(&plateau) {
            return Err(Error::invalid(format!("plateau must lie in [0, radius), got {plateau} with radius {radius}")));
        }
        Ok(Cutoff { bump: Bump::new(center, f64::INFINITY, radius)?, plateau })
    }

    pub fn from_bump(bump: Bump) -> Self {
        Cutoff { bump, plateau: 0.0 }
    }

    pub fn eval(&self, z: &SpacePoint) -> f64 {
        if self.plateau == 0.0 {
            return self.bump.eval(z);
        }
        let d = self.bump.ball.center().distance(z);
        if d <= self.plateau {
            1.0
        } else {
            smooth_cutoff((d - self.plateau) / (self.bump.ball.radius() - self.plateau))
        }
    }

    pub fn support(&self) -> Ball {
        self.bump.ball
    }
}

/// Samples a symbol: finite everywhere, bounded on the support, zero just
/// outside it. Returns the sampled supremum.
pub fn check_symbol(a: &dyn Symbol, seed: u64, samples: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ball = a.support();
    let model = a.model();
    let (zc, yc, r) = ball.euclidean();
    let mut sup: f64 = 0.0;
    for i in 0..samples {
        let b = random_boundary_point(model, &mut rng);
        // inside: uniform in the Euclidean ball
        let z = loop {
            let d = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let n2 = d[0] * d[0] + d[1] * d[1] + if model == Model::H3 { d[2] * d[2] } else { 0.0 };
            if n2 < 1.0 {
                let zeta = match model {
                    Model::H2 => Complex64::new(zc.re + r * d[0], 0.0),
                    Model::H3 => Complex64::new(zc.re + r * d[0], zc.im + r * d[2]),
                };
                break SpacePoint::half_space(model, zeta, yc + r * d[1])?;
            }
        };
        let v = a.eval(&z, &b);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::invalid(format!("symbol is not finite at sample {i}")));
        }
        sup = sup.max(v.norm());
        // just outside: push the point radially beyond the ball
        let outside = ball.enlarged(1e-6);
        let dir = rng.gen_range(0.0..2.0 * PI);
        let (oz, oy, orad) = outside.euclidean();
        let zeta = match model {
            Model::H2 => Complex64::new(oz.re + 1.0001 * orad * dir.cos(), 0.0),
            Model::H3 => oz + Complex64::new(1.0001 * orad * dir.cos(), 0.0),
        };
        let y = oy + 1.0001 * orad * dir.sin();
        let p = SpacePoint::half_space(model, zeta, y)?;
        let v = a.eval(&p, &b);
        if v.norm() != 0.0 {
            return Err(Error::invalid(format!("symbol does not vanish outside its declared support (sample {i})")));
        }
    }
    Ok(sup)
}

pub(crate) fn random_boundary_point<R: Rng>(model: Model, rng: &mut R) -> BoundaryPoint {
    match model {
        Model::H2 => BoundaryPoint::circle(rng.gen_range(0.0..2.0 * PI)),
        Model::H3 => {
            let z: f64 = rng.gen_range(-1.0..1.0);
            BoundaryPoint::sphere_angles(z.acos(), rng.gen_range(0.0..2.0 * PI))
        }
    }
}

/// `z -> Op(a) P_lambda(T)(z)`.
pub struct OpApplied<'a> {
    pub symbol: &'a dyn Symbol,
    pub lambda: f64,
    pub t: &'a BoundaryDistribution,
}

impl OpApplied<'_> {
    pub fn eval(&self, z: &SpacePoint) -> Result<Complex64> {
        self.t.pair(|b| self.symbol.eval(z, b) * plane_wave(z, self.lambda, b))
    }
}

pub fn op_apply_eigen<'a>(a: &'a dyn Symbol, lambda: f64, t: &'a BoundaryDistribution) -> Result<OpApplied<'a>> {
    if a.model() != t.model() {
        return Err(Error::invalid("symbol and boundary data belong to different models"));
    }
    Ok(OpApplied { symbol: a, lambda, t })
}

/// `int_X chi(z) (Op(a) phi_j)(z) phi_k(z) dz` with `phi_i = P_{lambda_i}(T_i)`,
/// integrated over the smaller of the two supports.
pub fn wigner_bilinear(
    a: &dyn Symbol,
    lambda_j: f64,
    t_j: &BoundaryDistribution,
    lambda_k: f64,
    t_k: &BoundaryDistribution,
    chi: &Cutoff,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let model = a.model();
    if t_j.model() != model || t_k.model() != model || chi.support().model() != model {
        return Err(Error::invalid("symbol, cutoff and boundary data must share a model"));
    }
    let (sa, sc) = (a.support(), chi.support());
    let ball = *Ball::smaller(&sa, &sc);
    let op = op_apply_eigen(a, lambda_j, t_j)?;
    integrate_ball(
        &ball,
        |z| {
            let c = chi.eval(z);
            if c == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let phi_k = t_k.pair(|b| plane_wave(z, lambda_k, b))?;
            Ok(c * op.eval(z)? * phi_k)
        },
        spec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{random_element_with, GroupElement};

    fn sample_symbol(model: Model) -> BumpTrigSymbol {
        let c = SpacePoint::half_space(model, Complex64::new(0.1, 0.0), 1.1).unwrap();
        BumpTrigSymbol::new(Bump::new(c, 0.6, 1.2).unwrap(), 0.4, 2, 0.3).unwrap()
    }

    #[test]
    fn plateau_cutoff_profile() {
        for model in [Model::H2, Model::H3] {
            let o = SpacePoint::origin(model);
            let chi = Cutoff::plateau(o, 1.0, 2.0).unwrap();
            let at = |t: f64| chi.eval(&SpacePoint::from_group(GroupElement::a(model, t)));
            assert_eq!(at(0.0), 1.0);
            assert_eq!(at(-0.99), 1.0);
            assert!((at(1.5) - smooth_cutoff(0.5)).abs() < 1e-12);
            assert!(at(1.2) > at(1.6) && at(1.6) > 0.0);
            assert_eq!(at(2.0), 0.0);
            assert_eq!(Cutoff::plateau(o, 0.0, 2.0).unwrap().eval(&o), Cutoff::new(o, 2.0).unwrap().eval(&o));
            assert!(Cutoff::plateau(o, 2.0, 2.0).is_err());
            assert!(Cutoff::plateau(o, -0.1, 2.0).is_err());
        }
    }

    #[test]
    fn symbol_property_for_dirac_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for model in [Model::H2, Model::H3] {
            let a = sample_symbol(model);
            let b = random_boundary_point(model, &mut rng);
            let t = BoundaryDistribution::dirac(b);
            let op = op_apply_eigen(&a, 2.0, &t).unwrap();
            for _ in 0..100 {
                let z = SpacePoint::from_group(random_element_with(model, &mut rng, 1.0).unwrap());
                let lhs = op.eval(&z).unwrap();
                let rhs = a.eval(&z, &b) * plane_wave(&z, 2.0, &b);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn sampled_symbol_checks() {
        for model in [Model::H2, Model::H3] {
            let sup = check_symbol(&sample_symbol(model), 3, 200).unwrap();
            assert!(sup > 0.0 && sup <= 1.4 + 1e-12);
        }
        let ball = sample_symbol(Model::H2).support();
        let bad = FnSymbol::new(ball, Smoothness::Infinite, |_, _| Complex64::new(f64::NAN, 0.0));
        assert!(check_symbol(&bad, 1, 5).is_err());
    }

    #[test]
    fn zero_symbol_gives_zero_pairing() {
        let model = Model::H2;
        let ball = sample_symbol(model).support();
        let zero = FnSymbol::new(ball, Smoothness::Infinite, |_, _| Complex64::new(0.0, 0.0));
        let chi = Cutoff::new(*ball.center(), 1.5).unwrap();
        let t = BoundaryDistribution::dirac(BoundaryPoint::circle(1.0));
        let w = wigner_bilinear(&zero, 1.0, &t, 2.0, &t, &chi, &QuadratureSpec::default()).unwrap();
        assert_eq!(w.value, Complex64::new(0.0, 0.0));
    }
}
