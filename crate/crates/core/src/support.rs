//! Compact supports: hyperbolic balls, radial bumps, and integration over a
//! ball with the invariant measure `dx = n_bar_measure_const * dVol`.
//!
//! A ball of radius `R` about `(zeta_c, y_c)` is the Euclidean ball with
//! center `(zeta_c, y_c cosh R)` and radius `y_c sinh R` in half-space
//! coordinates, which is what makes the sections below closed-form.

use crate::boundary::SpacePoint;
use crate::error::{Error, Result};
use crate::group::{GroupElement, Model};
use crate::quadrature::{gauss_legendre, integrate_iterated, try_integrate_1d, Domain, QuadResult, QuadratureSpec};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    center: SpacePoint,
    radius: f64,
}

/// Disk `|z - center| <= radius` in the N-coordinate (an interval for H2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NDisk {
    pub center: Complex64,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: SpacePoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid(format!("ball radius must be finite and > 0, got {radius}")));
        }
        Ok(Ball { center, radius })
    }

    pub fn center(&self) -> &SpacePoint {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn model(&self) -> Model {
        self.center.model()
    }

    pub fn contains(&self, z: &SpacePoint) -> bool {
        self.center.distance(z) <= self.radius
    }

    pub fn translate(&self, gamma: &GroupElement) -> Ball {
        Ball { center: self.center.translate(gamma), radius: self.radius }
    }

    pub fn enlarged(&self, by: f64) -> Ball {
        Ball { center: self.center, radius: self.radius + by.abs() }
    }

    /// `(zeta, height, euclidean_radius)` of the ball in half-space coordinates.
    pub fn euclidean(&self) -> (Complex64, f64, f64) {
        let (zeta, y) = self.center.half_space_coords();
        (zeta, y * self.radius.cosh(), y * self.radius.sinh())
    }

    /// Interval of `t` with `g a_t . o` in the ball, or `None`.
    pub fn a_range(&self, g: &GroupElement) -> Option<(f64, f64)> {
        let (zp, yp) = self.center.translate(&g.inverse()).half_space_coords();
        let ch = self.radius.cosh();
        let disc = yp * yp * ch * ch - zp.norm_sqr() - yp * yp;
        if disc < 0.0 {
            return None;
        }
        // roots of Y^2 - 2 Y yp cosh R + |zp|^2 + yp^2; the smaller one via
        // the product of roots to avoid cancellation
        let hi = yp * ch + disc.sqrt();
        let lo = (zp.norm_sqr() + yp * yp) / hi;
        Some((lo.ln(), hi.ln()))
    }

    /// Disk of `z` with `g n_z . o` in the ball, or `None`.
    pub fn n_range(&self, g: &GroupElement) -> Option<NDisk> {
        let (zp, yp) = self.center.translate(&g.inverse()).half_space_coords();
        let r2 = 2.0 * yp * (self.radius.cosh() - 1.0) - (yp - 1.0) * (yp - 1.0);
        if r2 < 0.0 {
            return None;
        }
        Some(NDisk { center: zp, radius: r2.sqrt() })
    }

    /// Interval of `t` such that the horosphere `g a_t N . o` meets the ball.
    pub fn horospherical_a_range(&self, g: &GroupElement) -> (f64, f64) {
        let (_, yp) = self.center.translate(&g.inverse()).half_space_coords();
        let l = yp.ln();
        (l - self.radius, l + self.radius)
    }

    /// Smaller of two balls (either contains the support of a product of
    /// functions supported in each).
    pub fn smaller<'a>(a: &'a Ball, b: &'a Ball) -> &'a Ball {
        if a.radius <= b.radius {
            a
        } else {
            b
        }
    }
}

/// `C^infinity` radial cutoff `exp(-s^2 / (1 - s^2))` for `s < 1`, zero
/// beyond. Equals 1 at the center and is flat to all orders at `s = 1`.
pub fn smooth_cutoff(s: f64) -> f64 {
    let s2 = s * s;
    if s2 >= 1.0 {
        0.0
    } else {
        (-s2 / (1.0 - s2)).exp()
    }
}

/// Radial bump `exp(-d^2 / (2 sigma^2)) * smooth_cutoff(d / R)` where `d` is
/// the hyperbolic distance to the center. `sigma = inf` gives the pure
/// cutoff. Values lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub ball: Ball,
    pub sigma: f64,
}

impl Bump {
    pub fn new(center: SpacePoint, sigma: f64, radius: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::invalid(format!("bump width must be > 0, got {sigma}")));
        }
        Ok(Bump { ball: Ball::new(center, radius)?, sigma })
    }

    pub fn eval(&self, z: &SpacePoint) -> f64 {
        let d = self.ball.center.distance(z);
        self.profile(d)
    }

    pub fn profile(&self, d: f64) -> f64 {
        let c = smooth_cutoff(d / self.ball.radius);
        if c == 0.0 {
            return 0.0;
        }
        if self.sigma.is_finite() {
            c * (-0.5 * d * d / (self.sigma * self.sigma)).exp()
        } else {
            c
        }
    }
}

/// `int_ball f(x) dx` with the invariant measure of the model, by iterated
/// adaptive quadrature over exact Euclidean sections in half-space
/// coordinates.
pub fn integrate_ball<F>(ball: &Ball, f: F, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(&SpacePoint) -> Result<Complex64>,
{
    let model = ball.model();
    let vol = model.params().n_bar_measure_const;
    let (zc, yc, r) = ball.euclidean();
    let section = |d2: f64| -> Option<(f64, f64)> {
        let h2 = r * r - d2;
        if h2 <= 0.0 {
            None
        } else {
            let h = h2.sqrt();
            Some((yc - h, yc + h))
        }
    };
    let res = match model {
        Model::H2 => integrate_iterated(
            |x| {
                let dx = x - zc.re;
                match section(dx * dx) {
                    None => Ok(QuadResult::zero()),
                    Some((y0, y1)) => try_integrate_1d(|y| Ok(f(&SpacePoint::half_plane(x, y)?)? / (y * y)), Domain::Interval(y0, y1), spec),
                }
            },
            Domain::Interval(zc.re - r, zc.re + r),
            spec,
        )?,
        Model::H3 => integrate_iterated(
            |xi| {
                let dxi = xi - zc.re;
                let w2 = r * r - dxi * dxi;
                if w2 <= 0.0 {
                    return Ok(QuadResult::zero());
                }
                let w = w2.sqrt();
                integrate_iterated(
                    |eta| {
                        let deta = eta - zc.im;
                        match section(dxi * dxi + deta * deta) {
                            None => Ok(QuadResult::zero()),
                            Some((y0, y1)) => try_integrate_1d(
                                |y| {
                                    let z = SpacePoint::half_space(model, Complex64::new(xi, eta), y)?;
                                    Ok(f(&z)? / (y * y * y))
                                },
                                Domain::Interval(y0, y1),
                                spec,
                            ),
                        }
                    },
                    Domain::Interval(zc.im - w, zc.im + w),
                    spec,
                )
            },
            Domain::Interval(zc.re - r, zc.re + r),
            spec,
        )?,
    };
    Ok(res.scaled(Complex64::from(vol)))
}

/// Fixed product Gauss-Legendre rule on a ball: nodes with weights that
/// already include the invariant measure.
#[derive(Debug, Clone)]
pub struct BallGrid {
    pub points: Vec<SpacePoint>,
    pub weights: Vec<f64>,
}

impl BallGrid {
    /// `n` Gauss-Legendre nodes per axis.
    pub fn new(ball: &Ball, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("ball grid needs at least 2 nodes per axis, got {n}")));
        }
        let model = ball.model();
        let vol = model.params().n_bar_measure_const;
        let (zc, yc, r) = ball.euclidean();
        let (x, w) = gauss_legendre(n);
        let mut points = Vec::new();
        let mut weights = Vec::new();
        match model {
            Model::H2 => {
                for (&u, &wu) in x.iter().zip(&w) {
                    let h = r * (1.0 - u * u).sqrt();
                    for (&v, &wv) in x.iter().zip(&w) {
                        let y = yc + h * v;
                        points.push(SpacePoint::half_plane(zc.re + r * u, y)?);
                        weights.push(vol * r * wu * h * wv / (y * y));
                    }
                }
            }
            Model::H3 => {
                for (&u, &wu) in x.iter().zip(&w) {
                    let w1 = r * (1.0 - u * u).sqrt();
                    for (&v, &wv) in x.iter().zip(&w) {
                        let h = (w1 * w1 * (1.0 - v * v)).max(0.0).sqrt();
                        for (&s, &ws) in x.iter().zip(&w) {
                            let y = yc + h * s;
                            let zeta = Complex64::new(zc.re + r * u, zc.im + w1 * v);
                            points.push(SpacePoint::half_space(model, zeta, y)?);
                            weights.push(vol * r * wu * w1 * wv * h * ws / (y * y * y));
                        }
                    }
                }
            }
        }
        Ok(BallGrid { points, weights })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Invariant volume of a ball: `vol_const * 2 pi (cosh R - 1)` (H2) and
/// `vol_const * pi (sinh 2R - 2R)` (H3).
pub fn ball_volume(model: Model, radius: f64) -> f64 {
    let vol = model.params().n_bar_measure_const;
    match model {
        Model::H2 => vol * 2.0 * std::f64::consts::PI * (radius.cosh() - 1.0),
        Model::H3 => vol * std::f64::consts::PI * ((2.0 * radius).sinh() - 2.0 * radius),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::random_element;

    #[test]
    fn ball_volume_by_quadrature() {
        let spec = QuadratureSpec::with_tol(1e-10, 1e-14);
        for model in [Model::H2, Model::H3] {
            let g = random_element(model, 4, 0.8).unwrap();
            let ball = Ball::new(SpacePoint::from_group(g), 0.9).unwrap();
            let r = integrate_ball(&ball, |_| Ok(Complex64::new(1.0, 0.0)), &spec).unwrap();
            let exact = ball_volume(model, 0.9);
            assert!((r.value.re - exact).abs() < 1e-8 * exact, "{model}: {} vs {exact}", r.value);
            // the fixed grid targets smooth integrands vanishing at the edge
            let bump = Bump::new(*ball.center(), 0.5, 0.9).unwrap();
            let adaptive = integrate_ball(&ball, |z| Ok(Complex64::new(bump.eval(z), 0.0)), &spec).unwrap();
            let grid = BallGrid::new(&ball, 40).unwrap();
            let s: f64 = grid.points.iter().zip(&grid.weights).map(|(z, w)| w * bump.eval(z)).sum();
            assert!((s - adaptive.value.re).abs() < 1e-6 * s, "{model}: grid {s} vs {}", adaptive.value);
        }
    }

    #[test]
    fn sections_are_exact() {
        for model in [Model::H2, Model::H3] {
            let g0 = random_element(model, 12, 1.0).unwrap();
            let ball = Ball::new(SpacePoint::from_group(g0), 1.3).unwrap();
            let g = random_element(model, 13, 0.5).unwrap();
            if let Some((t0, t1)) = ball.a_range(&g) {
                for (t, inside) in [(t0 + 1e-6, true), (t1 - 1e-6, true), (t0 - 1e-3, false), (t1 + 1e-3, false)] {
                    let z = SpacePoint::from_group(g * GroupElement::a(model, t));
                    assert_eq!(ball.contains(&z), inside, "{model} t={t}");
                }
            }
            let g = GroupElement::n(model, Complex64::new(0.2, 0.0)) * g0;
            let d = ball.n_range(&g).expect("center horosphere meets ball");
            let edge = d.center + Complex64::new(d.radius * (1.0 - 1e-9), 0.0);
            assert!(ball.contains(&SpacePoint::from_group(g * GroupElement::n(model, edge))));
            let out = d.center + Complex64::new(d.radius * (1.0 + 1e-4), 0.0);
            assert!(!ball.contains(&SpacePoint::from_group(g * GroupElement::n(model, out))));
        }
    }

    #[test]
    fn cutoff_shape() {
        assert_eq!(smooth_cutoff(0.0), 1.0);
        assert_eq!(smooth_cutoff(1.0), 0.0);
        assert!(smooth_cutoff(0.999) < 1e-200);
        assert!(smooth_cutoff(0.5) > 0.0 && smooth_cutoff(0.5) < 1.0);
    }
}
