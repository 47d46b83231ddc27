//! Plane waves, the Poisson transform, the Helgason Fourier transform and
//! its inversion, the c-function, the principal series in the compact
//! picture, and a finite-difference Laplacian.

use crate::boundary::{boundary_action, horocycle_bracket, BoundaryPoint, SpacePoint};
use crate::error::{Error, Result};
use crate::group::{iwasawa_h, GroupElement, Model};
use crate::quadrature::{gauss_legendre, integrate_circle, integrate_sphere, QuadResult, QuadratureSpec};
use crate::special::ln_gamma;
use crate::support::{integrate_ball, Ball, BallGrid, Bump};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Real spectral parameter; the Laplace eigenvalue is `-(lambda^2 + rho^2)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpectralParameter(f64);

impl SpectralParameter {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::invalid(format!("spectral parameter must be finite, got {lambda}")));
        }
        Ok(SpectralParameter(lambda))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `lambda^2 + rho^2`
    pub fn eigenvalue(self, model: Model) -> f64 {
        self.0 * self.0 + model.rho().powi(2)
    }

    /// `i lambda + rho`
    pub fn exponent(self, model: Model) -> Complex64 {
        Complex64::new(model.rho(), self.0)
    }
}

/// `e^{(i lambda + rho) <z, b>}`
pub fn plane_wave(z: &SpacePoint, lambda: f64, b: &BoundaryPoint) -> Complex64 {
    let s = Complex64::new(z.model().rho(), lambda);
    (s * horocycle_bracket(z, b)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub weight: Complex64,
    pub point: BoundaryPoint,
}

pub type Density = Arc<dyn Fn(&BoundaryPoint) -> Complex64 + Send + Sync>;

/// Resolution of the boundary rules used for smooth densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryRule {
    pub circle_points: usize,
    pub sphere_polar: usize,
    pub sphere_azimuth: usize,
}

impl Default for BoundaryRule {
    fn default() -> Self {
        BoundaryRule { circle_points: 256, sphere_polar: 96, sphere_azimuth: 192 }
    }
}

/// Minimal chordal separation between atoms.
pub const ATOM_GAP: f64 = 1e-8;

/// Finite atomic measure plus an optional smooth density on `B` (against
/// the normalized measure `db`).
#[derive(Clone)]
pub struct BoundaryDistribution {
    model: Model,
    atoms: Vec<Atom>,
    density: Option<Density>,
    rule: BoundaryRule,
}

impl fmt::Debug for BoundaryDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryDistribution")
            .field("model", &self.model)
            .field("atoms", &self.atoms)
            .field("density", &self.density.as_ref().map(|_| "<fn>"))
            .finish()
    }
}

impl BoundaryDistribution {
    pub fn atomic(model: Model, atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution("at least one atom or a density is required".into()));
        }
        Self::validate_atoms(model, &atoms)?;
        Ok(BoundaryDistribution { model, atoms, density: None, rule: BoundaryRule::default() })
    }

    /// Convenience constructor from `(weight, point)` pairs.
    pub fn from_pairs(model: Model, pairs: &[(Complex64, BoundaryPoint)]) -> Result<Self> {
        Self::atomic(model, pairs.iter().map(|&(weight, point)| Atom { weight, point }).collect())
    }

    pub fn dirac(b: BoundaryPoint) -> Self {
        BoundaryDistribution {
            model: b.model(),
            atoms: vec![Atom { weight: Complex64::new(1.0, 0.0), point: b }],
            density: None,
            rule: BoundaryRule::default(),
        }
    }

    pub fn with_density(model: Model, atoms: Vec<Atom>, density: Density) -> Result<Self> {
        Self::validate_atoms(model, &atoms)?;
        Ok(BoundaryDistribution { model, atoms, density: Some(density), rule: BoundaryRule::default() })
    }

    /// The normalized measure `db` itself.
    pub fn uniform(model: Model) -> Self {
        BoundaryDistribution { model, atoms: Vec::new(), density: Some(Arc::new(|_| Complex64::new(1.0, 0.0))), rule: BoundaryRule::default() }
    }

    pub fn with_rule(mut self, rule: BoundaryRule) -> Self {
        self.rule = rule;
        self
    }

    fn validate_atoms(model: Model, atoms: &[Atom]) -> Result<()> {
        for (i, a) in atoms.iter().enumerate() {
            if a.point.model() != model {
                return Err(Error::InvalidDistribution(format!("atom {i} lies on the {} boundary", a.point.model())));
            }
            if !(a.weight.re.is_finite() && a.weight.im.is_finite()) {
                return Err(Error::InvalidDistribution(format!("atom {i} has a non-finite weight")));
            }
            for (j, b) in atoms.iter().enumerate().take(i) {
                let gap = a.point.chordal_distance(&b.point);
                if gap <= ATOM_GAP {
                    return Err(Error::InvalidDistribution(format!("atoms {j} and {i} coincide (chordal gap {gap:.3e} <= {ATOM_GAP:e})")));
                }
            }
        }
        Ok(())
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn has_density(&self) -> bool {
        self.density.is_some()
    }

    pub fn is_atomic(&self) -> bool {
        self.density.is_none()
    }

    /// `int_B phi(b) T(db)`.
    pub fn pair<F>(&self, phi: F) -> Result<Complex64>
    where
        F: Fn(&BoundaryPoint) -> Complex64,
    {
        let mut sum: Complex64 = self.atoms.iter().map(|a| a.weight * phi(&a.point)).sum();
        if let Some(d) = &self.density {
            sum += match self.model {
                Model::H2 => integrate_circle(
                    |phi_angle| {
                        let b = BoundaryPoint::circle(phi_angle);
                        d(&b) * phi(&b)
                    },
                    self.rule.circle_points,
                )?,
                Model::H3 => integrate_sphere(
                    |v| {
                        let b = BoundaryPoint::Sphere { v };
                        d(&b) * phi(&b)
                    },
                    self.rule.sphere_polar,
                    self.rule.sphere_azimuth,
                )?,
            };
        }
        Ok(sum)
    }

    /// Atomic data `T'` with `P_lambda(T)(gamma z) = P_lambda(T')(z)`: atoms
    /// move to `gamma^{-1} b` and pick up `e^{(i lambda + rho) <gamma o, b>}`.
    pub fn twist(&self, gamma: &GroupElement, lambda: f64) -> Result<Self> {
        if self.density.is_some() {
            return Err(Error::InvalidDistribution("twisting is implemented for atomic data only".into()));
        }
        let go = SpacePoint::from_group(*gamma);
        let ginv = gamma.inverse();
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom { weight: a.weight * plane_wave(&go, lambda, &a.point), point: boundary_action(&ginv, &a.point) })
            .collect();
        Self::atomic(self.model, atoms)
    }

    /// Same atoms with every weight multiplied by `s`.
    pub fn scaled(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for a in &mut out.atoms {
            a.weight *= s;
        }
        if let Some(d) = self.density.clone() {
            out.density = Some(Arc::new(move |b| s * d(b)));
        }
        out
    }
}

/// `P_lambda(T)(z) = int_B e^{(i lambda + rho) <z, b>} T(db)`.
#[derive(Debug, Clone)]
pub struct PoissonTransform {
    pub t: BoundaryDistribution,
    pub lambda: f64,
}

impl PoissonTransform {
    pub fn eval(&self, z: &SpacePoint) -> Result<Complex64> {
        if z.model() != self.t.model() {
            return Err(Error::invalid("point and boundary data belong to different models"));
        }
        self.t.pair(|b| plane_wave(z, self.lambda, b))
    }

    /// `sum |c_i e_i(z)|` over atoms: the natural scale for residuals of
    /// the atomic part, immune to cancellation between atoms.
    pub fn atomic_scale(&self, z: &SpacePoint) -> f64 {
        self.t.atoms().iter().map(|a| (a.weight * plane_wave(z, self.lambda, &a.point)).norm()).sum()
    }
}

pub fn poisson_transform(t: &BoundaryDistribution, lambda: f64) -> PoissonTransform {
    PoissonTransform { t: t.clone(), lambda }
}

/// Smooth function on X with compact support.
pub trait SpaceFunction: Send + Sync {
    fn model(&self) -> Model;
    fn eval(&self, z: &SpacePoint) -> Complex64;
    /// Ball containing the support; `None` when no compact support is known.
    fn support(&self) -> Option<Ball>;
}

impl SpaceFunction for Bump {
    fn model(&self) -> Model {
        self.ball.model()
    }

    fn eval(&self, z: &SpacePoint) -> Complex64 {
        Complex64::new(Bump::eval(self, z), 0.0)
    }

    fn support(&self) -> Option<Ball> {
        Some(self.ball)
    }
}

/// `u~(lambda, b) = int_X u(x) e^{(-i lambda + rho) <x, b>} dx`.
pub fn helgason_fourier(u: &dyn SpaceFunction, lambda: f64, b: &BoundaryPoint, spec: &QuadratureSpec) -> Result<QuadResult> {
    let ball = u.support().ok_or_else(|| Error::UnboundedSupport("helgason_fourier needs a compact support region".into()))?;
    integrate_ball(&ball, |x| Ok(u.eval(x) * plane_wave(x, -lambda, b)), spec)
}

/// Harish-Chandra c-function
/// `c0 2^{-i lambda} Gamma(i lambda) / (Gamma(m/4 + 1/2 + i lambda/2) Gamma(m/4 + m2/2 + i lambda/2))`
/// with `c0 = 2^{m/2 + m2} Gamma((m + m2 + 1)/2)`, normalized by `c(-i rho) = 1`.
pub fn c_function(lambda: f64, model: Model) -> Result<Complex64> {
    if lambda == 0.0 {
        return Err(Error::Pole);
    }
    if !lambda.is_finite() {
        return Err(Error::invalid(format!("lambda must be finite, got {lambda}")));
    }
    let p = model.params();
    let (m, m2) = (p.m_alpha as f64, p.m_2alpha as f64);
    let il = Complex64::new(0.0, lambda);
    let ln = -il * 2f64.ln() + ln_gamma(il)
        - ln_gamma(Complex64::new(m / 4.0 + 0.5, 0.0) + il / 2.0)
        - ln_gamma(Complex64::new(m / 4.0 + m2 / 2.0, 0.0) + il / 2.0);
    Ok(p.c0 * ln.exp())
}

/// `c0` from the root multiplicities.
pub fn c0_from_multiplicities(m_alpha: u32, m_2alpha: u32) -> f64 {
    let (m, m2) = (m_alpha as f64, m_2alpha as f64);
    2f64.powf(0.5 * m + m2) * ln_gamma(Complex64::new(0.5 * (m + m2 + 1.0), 0.0)).exp().re
}

/// Plancherel density `|c(lambda)|^{-2}`, extended by its limit 0 at
/// `lambda = 0`.
pub fn plancherel_density(lambda: f64, model: Model) -> Result<f64> {
    if lambda == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / c_function(lambda, model)?.norm_sqr())
}

/// Compact-picture principal series:
/// `(pi_lambda(g) f)(kM) = f(k(g^{-1} k) M) e^{-(i lambda + rho) H(g^{-1} k)}`.
pub fn principal_series_apply<'a, F>(g: &GroupElement, lambda: f64, f: F) -> impl Fn(&BoundaryPoint) -> Complex64 + 'a
where
    F: Fn(&BoundaryPoint) -> Complex64 + 'a,
{
    let ginv = g.inverse();
    let s = Complex64::new(g.model().rho(), lambda);
    move |b: &BoundaryPoint| {
        let h = ginv * b.k_rep();
        f(&boundary_action(&ginv, b)) * (-s * iwasawa_h(&h)).exp()
    }
}

/// `L^2(B, db)` norm by the boundary rule.
pub fn boundary_l2_norm<F>(model: Model, f: F, rule: BoundaryRule) -> Result<f64>
where
    F: Fn(&BoundaryPoint) -> Complex64,
{
    let v = match model {
        Model::H2 => integrate_circle(|a| Complex64::new(f(&BoundaryPoint::circle(a)).norm_sqr(), 0.0), rule.circle_points)?,
        Model::H3 => integrate_sphere(|v| Complex64::new(f(&BoundaryPoint::Sphere { v }).norm_sqr(), 0.0), rule.sphere_polar, rule.sphere_azimuth)?,
    };
    Ok(v.re.sqrt())
}

/// Central-difference hyperbolic Laplacian in half-space coordinates:
/// `y^2 (d_xx + d_yy)` on H2 and `y^2 (d_xx + d_yy + d_hh) - y d_h` on H3.
pub fn laplacian_fd<F>(phi: F, z: &SpacePoint, h: f64) -> Result<Complex64>
where
    F: Fn(&SpacePoint) -> Result<Complex64>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("finite-difference step must be > 0, got {h}")));
    }
    let model = z.model();
    let (zeta, y) = z.half_space_coords();
    if h >= y {
        return Err(Error::invalid(format!("step {h} must be smaller than the height {y}")));
    }
    let at = |dz: Complex64, dy: f64| phi(&SpacePoint::half_space(model, zeta + dz, y + dy)?);
    let f0 = at(Complex64::new(0.0, 0.0), 0.0)?;
    let second = |p: Result<Complex64>, m: Result<Complex64>| -> Result<Complex64> { Ok((p? - 2.0 * f0 + m?) / (h * h)) };
    let fxx = second(at(Complex64::new(h, 0.0), 0.0), at(Complex64::new(-h, 0.0), 0.0))?;
    let fyy = second(at(Complex64::new(0.0, 0.0), h), at(Complex64::new(0.0, 0.0), -h))?;
    Ok(match model {
        Model::H2 => y * y * (fxx + fyy),
        Model::H3 => {
            let fee = second(at(Complex64::new(0.0, h), 0.0), at(Complex64::new(0.0, -h), 0.0))?;
            let fy = (at(Complex64::new(0.0, 0.0), h)? - at(Complex64::new(0.0, 0.0), -h)?) / (2.0 * h);
            y * y * (fxx + fee + fyy) - y * fy
        }
    })
}

/// Settings for the discretized Fourier inversion.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct InversionGrid {
    /// Truncation `|lambda| <= lambda_max`.
    pub lambda_max: f64,
    /// Number of equispaced lambda points on `[-lambda_max, lambda_max]`.
    pub n_lambda: usize,
    /// Boundary points (H2 circle); H3 uses `n_boundary/2 x n_boundary`
    /// on the sphere.
    pub n_boundary: usize,
    /// Gauss-Legendre nodes per axis on the support ball.
    pub n_space: usize,
    /// Gauss-Legendre nodes per axis on the evaluation ball.
    pub n_eval: usize,
}

impl Default for InversionGrid {
    fn default() -> Self {
        InversionGrid { lambda_max: 30.0, n_lambda: 121, n_boundary: 256, n_space: 96, n_eval: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct InversionResult {
    /// `||u_rec - u||_2 / ||u||_2` on the evaluation grid.
    pub rel_l2_error: f64,
    pub max_abs_error: f64,
    pub u_norm: f64,
    pub samples: usize,
}

/// Reconstructs `u` from its Helgason transform,
/// `u(z) = |W|^{-1} int_R int_B u~(lambda, b) e_{lambda, b}(z) |c(lambda)|^{-2} db dlambda / (2 pi)`
/// with `|W| = 2`, on fixed grids, and measures the relative `L^2` error.
/// The lambda integral uses the trapezoidal rule, which is spectrally
/// accurate here because the integrand decays like the Fourier transform
/// of a smooth bump.
pub fn fourier_inversion(u: &Bump, grid: &InversionGrid) -> Result<InversionResult> {
    use rayon::prelude::*;
    if grid.n_lambda < 3 || grid.lambda_max <= 0.0 {
        return Err(Error::invalid("inversion grid needs lambda_max > 0 and at least 3 lambda points"));
    }
    let model = u.ball.model();
    let rho = model.rho();
    let space = BallGrid::new(&u.ball, grid.n_space)?;
    let eval = BallGrid::new(&u.ball, grid.n_eval)?;
    let (bpoints, bweights) = boundary_grid(model, grid.n_boundary)?;

    let uw: Vec<f64> = space.points.iter().zip(&space.weights).map(|(z, w)| w * u.eval(z)).collect();
    let dl = 2.0 * grid.lambda_max / (grid.n_lambda - 1) as f64;
    let lambdas: Vec<(f64, f64)> = (0..grid.n_lambda)
        .map(|i| {
            let l = -grid.lambda_max + dl * i as f64;
            let end = if i == 0 || i == grid.n_lambda - 1 { 0.5 } else { 1.0 };
            (l, end * dl)
        })
        .collect();
    let plancherel: Vec<f64> = lambdas.iter().map(|&(l, _)| plancherel_density(l, model)).collect::<Result<_>>()?;

    // u~(lambda, b) for all grid values; brackets are computed once per b
    let coeffs: Vec<Vec<Complex64>> = bpoints
        .par_iter()
        .map(|b| {
            // e^{(rho - i lambda_j) x} by a multiplicative recurrence in j
            let mut acc = vec![Complex64::new(0.0, 0.0); lambdas.len()];
            let l0 = lambdas[0].0;
            for (z, &w) in space.points.iter().zip(&uw) {
                if w == 0.0 {
                    continue;
                }
                let x = horocycle_bracket(z, b);
                let mut e = (Complex64::new(rho, -l0) * x).exp() * w;
                let step = Complex64::from_polar(1.0, -dl * x);
                for a in acc.iter_mut() {
                    *a += e;
                    e *= step;
                }
            }
            acc
        })
        .collect();

    let recon: Vec<Complex64> = eval
        .points
        .par_iter()
        .map(|z| {
            let mut total = Complex64::new(0.0, 0.0);
            for ((b, bw), ub) in bpoints.iter().zip(&bweights).zip(&coeffs) {
                let x = horocycle_bracket(z, b);
                let mut e = (Complex64::new(rho, lambdas[0].0) * x).exp();
                let step = Complex64::from_polar(1.0, dl * x);
                for (((_, lw), pl), ut) in lambdas.iter().zip(&plancherel).zip(ub) {
                    total += ut * e * (bw * lw * pl);
                    e *= step;
                }
            }
            total / (2.0 * 2.0 * PI)
        })
        .collect();

    let mut num = 0.0;
    let mut den = 0.0;
    let mut max_abs: f64 = 0.0;
    for ((z, w), r) in eval.points.iter().zip(&eval.weights).zip(&recon) {
        let exact = u.eval(z);
        let e = (r - exact).norm();
        num += w * e * e;
        den += w * exact * exact;
        max_abs = max_abs.max(e);
    }
    Ok(InversionResult { rel_l2_error: (num / den).sqrt(), max_abs_error: max_abs, u_norm: den.sqrt(), samples: eval.len() })
}

/// Quadrature nodes on `B` with weights summing to 1.
pub fn boundary_grid(model: Model, n: usize) -> Result<(Vec<BoundaryPoint>, Vec<f64>)> {
    if n < 4 {
        return Err(Error::invalid(format!("boundary grid needs at least 4 points, got {n}")));
    }
    match model {
        Model::H2 => {
            let pts = (0..n).map(|j| BoundaryPoint::circle(2.0 * PI * j as f64 / n as f64)).collect();
            Ok((pts, vec![1.0 / n as f64; n]))
        }
        Model::H3 => {
            let np = (n / 2).max(2);
            let (zs, ws) = gauss_legendre(np);
            let mut pts = Vec::with_capacity(np * n);
            let mut wts = Vec::with_capacity(np * n);
            for (&z, &w) in zs.iter().zip(&ws) {
                let r = (1.0 - z * z).sqrt();
                for j in 0..n {
                    let a = 2.0 * PI * j as f64 / n as f64;
                    pts.push(BoundaryPoint::Sphere { v: [r * a.cos(), r * a.sin(), z] });
                    wts.push(0.5 * w / n as f64);
                }
            }
            Ok((pts, wts))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{random_element_with, random_k};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn c_function_closed_forms() {
        // H2: |c|^{-2} = pi lambda tanh(pi lambda); H3: c = 1/(i lambda)
        for l in [0.5, 1.0, 2.0, 10.0] {
            let d = plancherel_density(l, Model::H2).unwrap();
            let exact = PI * l * (PI * l).tanh();
            assert!((d - exact).abs() < 1e-12 * exact, "lambda={l}: {d} vs {exact}");
            let c3 = c_function(l, Model::H3).unwrap();
            assert!((c3 - Complex64::new(0.0, -1.0 / l)).norm() < 1e-12 / l);
            for model in [Model::H2, Model::H3] {
                let a = c_function(l, model).unwrap().norm_sqr();
                let b = c_function(-l, model).unwrap().norm_sqr();
                assert!((a - b).abs() < 1e-13 * a);
            }
        }
        assert_eq!(c_function(0.0, Model::H2), Err(Error::Pole));
        assert!((c0_from_multiplicities(1, 0) - 2f64.sqrt()).abs() < 1e-14);
        assert!((c0_from_multiplicities(2, 0) - PI.sqrt()).abs() < 1e-14);
        assert!((Model::H2.params().c0 - c0_from_multiplicities(1, 0)).abs() < 1e-14);
    }

    #[test]
    fn plane_wave_at_origin_and_modulus() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for model in [Model::H2, Model::H3] {
            let b = BoundaryPoint::from_k(&random_k(model, &mut rng));
            let o = SpacePoint::origin(model);
            assert!((plane_wave(&o, 3.0, &b) - 1.0).norm() < 1e-15);
            let z = SpacePoint::from_group(random_element_with(model, &mut rng, 1.0).unwrap());
            let m = plane_wave(&z, 2.5, &b).norm();
            assert!((m - (model.rho() * horocycle_bracket(&z, &b)).exp()).abs() < 1e-13 * m);
        }
    }

    #[test]
    fn poisson_of_distinct_atoms_only() {
        let b = BoundaryPoint::circle(0.4);
        let pairs = [(Complex64::new(1.0, 0.0), b), (Complex64::new(-1.0, 0.0), b)];
        assert!(matches!(BoundaryDistribution::from_pairs(Model::H2, &pairs), Err(Error::InvalidDistribution(_))));
        let t = BoundaryDistribution::dirac(b);
        let z = SpacePoint::half_plane(0.3, 1.7).unwrap();
        let p = poisson_transform(&t, 1.5).eval(&z).unwrap();
        assert_eq!(p, plane_wave(&z, 1.5, &b));
    }

    #[test]
    fn spherical_function_is_radial() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for model in [Model::H2, Model::H3] {
            let t = BoundaryDistribution::uniform(model);
            let p = poisson_transform(&t, 1.3);
            for _ in 0..5 {
                let z = SpacePoint::from_group(random_element_with(model, &mut rng, 1.0).unwrap());
                let k = random_k(model, &mut rng);
                let a = p.eval(&z).unwrap();
                let b = p.eval(&z.translate(&k)).unwrap();
                assert!((a - b).norm() < 1e-8, "{model}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn fd_laplacian_of_constant_and_plane_wave() {
        for model in [Model::H2, Model::H3] {
            let z = SpacePoint::half_space(model, Complex64::new(0.2, 0.0), 1.4).unwrap();
            let c = laplacian_fd(|_| Ok(Complex64::new(2.0, 0.0)), &z, 1e-3).unwrap();
            assert!(c.norm() < 1e-8);
            let b = BoundaryPoint::infinity(model);
            let l = 2.0;
            let lap = laplacian_fd(|x| Ok(plane_wave(x, l, &b)), &z, 1e-3).unwrap();
            let f = plane_wave(&z, l, &b);
            let ev = l * l + model.rho().powi(2);
            assert!((lap + ev * f).norm() < 1e-4 * ev * f.norm());
        }
    }

    #[test]
    fn principal_series_identity_and_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = |b: &BoundaryPoint| {
            let e = b.embedding();
            Complex64::new(e[0] + 0.3 * e[1] * e[1], e[2] - e[0])
        };
        for model in [Model::H2, Model::H3] {
            let b = BoundaryPoint::from_k(&random_k(model, &mut rng));
            let id = principal_series_apply(&GroupElement::identity(model), 2.0, f);
            assert!((id(&b) - f(&b)).norm() < 1e-14);
            let k = random_k(model, &mut rng);
            let rot = principal_series_apply(&k, 2.0, f);
            let expect = f(&boundary_action(&k.inverse(), &b));
            assert!((rot(&b) - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn helgason_transform_of_radial_bump_is_b_independent() {
        let spec = QuadratureSpec::with_tol(1e-11, 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = Bump::new(SpacePoint::origin(Model::H2), 0.5, 1.2).unwrap();
        let first = helgason_fourier(&u, 2.0, &BoundaryPoint::circle(0.0), &spec).unwrap().value;
        for _ in 0..4 {
            let b = BoundaryPoint::circle(rng.gen_range(0.0..2.0 * PI));
            let v = helgason_fourier(&u, 2.0, &b, &spec).unwrap().value;
            assert!((v - first).norm() < 1e-8);
        }
        struct Zero;
        impl SpaceFunction for Zero {
            fn model(&self) -> Model {
                Model::H2
            }
            fn eval(&self, _: &SpacePoint) -> Complex64 {
                Complex64::new(0.0, 0.0)
            }
            fn support(&self) -> Option<Ball> {
                None
            }
        }
        assert!(matches!(helgason_fourier(&Zero, 1.0, &BoundaryPoint::circle(0.0), &spec), Err(Error::UnboundedSupport(_))));
    }
}
