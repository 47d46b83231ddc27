//! Boundary `B = K/M`, points of `X = G/K` and of the unit tangent bundle
//! `G/M`, the horocycle bracket and geodesic frames.
//!
//! Boundary charts:
//!
//! * H2: an angle `phi` with disk point `e^{i phi}`; the coset of
//!   `rotation(phi/2)`. In the upper half-plane this is `-cot(phi/2)`, so
//!   `phi = 0` is `infinity` (the coset `M`) and `phi = pi` is `0` (`wM`).
//! * H3: a unit vector `v`; stereographic coordinate
//!   `(v_x + i v_y) / (1 - v_z)`, north pole = `infinity`, south pole = `0`.
//!
//! Bracket computations go through `-H(g^{-1} k)`; charts are only used to
//! build representatives and by test oracles.

use crate::error::{Error, Result};
use crate::group::{iwasawa_h, iwasawa_kan, GroupElement, Model};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Chordal distance below which two boundary points count as equal.
pub const DIAGONAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum BoundaryPoint {
    /// H2 boundary angle in `[0, 2 pi)`.
    #[serde(rename = "h2")]
    Circle { angle: f64 },
    /// H3 boundary point on the unit sphere.
    #[serde(rename = "h3")]
    Sphere { v: [f64; 3] },
}

impl BoundaryPoint {
    pub fn circle(angle: f64) -> Self {
        BoundaryPoint::Circle { angle: angle.rem_euclid(2.0 * PI) }
    }

    pub fn sphere(v: [f64; 3]) -> Result<Self> {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::invalid(format!("sphere point must be a finite non-zero vector, got {v:?}")));
        }
        Ok(BoundaryPoint::Sphere { v: [v[0] / r, v[1] / r, v[2] / r] })
    }

    /// H3 point from polar and azimuthal angles.
    pub fn sphere_angles(polar: f64, azimuth: f64) -> Self {
        let (sp, cp) = polar.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        BoundaryPoint::Sphere { v: [sp * ca, sp * sa, cp] }
    }

    /// The coset `M`, fixed by `P = MAN`.
    pub fn infinity(model: Model) -> Self {
        match model {
            Model::H2 => BoundaryPoint::Circle { angle: 0.0 },
            Model::H3 => BoundaryPoint::Sphere { v: [0.0, 0.0, 1.0] },
        }
    }

    /// The coset `wM`.
    pub fn minus_infinity(model: Model) -> Self {
        match model {
            Model::H2 => BoundaryPoint::Circle { angle: PI },
            Model::H3 => BoundaryPoint::Sphere { v: [0.0, 0.0, -1.0] },
        }
    }

    pub fn model(&self) -> Model {
        match self {
            BoundaryPoint::Circle { .. } => Model::H2,
            BoundaryPoint::Sphere { .. } => Model::H3,
        }
    }

    /// A representative `k_b` in K with `k_b M = b`.
    pub fn k_rep(&self) -> GroupElement {
        match *self {
            BoundaryPoint::Circle { angle } => GroupElement::rotation(Model::H2, 0.5 * angle),
            BoundaryPoint::Sphere { v: [x, y, z] } => {
                let (alpha, beta) = if z > 0.0 {
                    let a = (0.5 * (1.0 + z)).sqrt();
                    (Complex64::new(a, 0.0), Complex64::new(x, -y) / (2.0 * a))
                } else {
                    let b = (0.5 * (1.0 - z)).sqrt();
                    (Complex64::new(x, y) / (2.0 * b), Complex64::new(b, 0.0))
                };
                GroupElement::su2(alpha, beta).expect("unit vector gives a valid SU(2) element")
            }
        }
    }

    /// The boundary point `kM` of an element `k` of K.
    pub fn from_k(k: &GroupElement) -> Self {
        let [[a, b], [c, _]] = k.entries();
        match k.model() {
            Model::H2 => BoundaryPoint::circle(2.0 * b.re.atan2(a.re)),
            Model::H3 => {
                let xy = 2.0 * a * c.conj();
                let z = a.norm_sqr() - c.norm_sqr();
                BoundaryPoint::sphere([xy.re, xy.im, z]).expect("rows of SU(2) are unit vectors")
            }
        }
    }

    /// Half-plane / half-space boundary coordinate; `None` at infinity.
    pub fn half_space_coord(&self) -> Option<Complex64> {
        match *self {
            BoundaryPoint::Circle { angle } => {
                let s = (0.5 * angle).sin();
                if s.abs() < 1e-300 {
                    None
                } else {
                    Some(Complex64::new(-(0.5 * angle).cos() / s, 0.0))
                }
            }
            BoundaryPoint::Sphere { v: [x, y, z] } => {
                let d = 1.0 - z;
                if d <= 0.0 {
                    None
                } else {
                    Some(Complex64::new(x, y) / d)
                }
            }
        }
    }

    /// Inverse of [`half_space_coord`](Self::half_space_coord).
    pub fn from_half_space_coord(model: Model, zeta: Complex64) -> Self {
        match model {
            // x = -cot(phi/2)  <=>  phi/2 = atan2(1, -x)
            Model::H2 => BoundaryPoint::circle(2.0 * 1f64.atan2(-zeta.re)),
            Model::H3 => {
                let r2 = zeta.norm_sqr();
                let d = 1.0 + r2;
                BoundaryPoint::Sphere { v: [2.0 * zeta.re / d, 2.0 * zeta.im / d, (r2 - 1.0) / d] }
            }
        }
    }

    /// Euclidean embedding: the disk point for H2 (z = 0), the unit vector for H3.
    pub fn embedding(&self) -> [f64; 3] {
        match *self {
            BoundaryPoint::Circle { angle } => [angle.cos(), angle.sin(), 0.0],
            BoundaryPoint::Sphere { v } => v,
        }
    }

    pub fn chordal_distance(&self, other: &BoundaryPoint) -> f64 {
        let (p, q) = (self.embedding(), other.embedding());
        ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
    }
}

/// A point `gK` of the symmetric space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacePoint {
    g: GroupElement,
}

impl SpacePoint {
    pub fn origin(model: Model) -> Self {
        SpacePoint { g: GroupElement::identity(model) }
    }

    pub fn from_group(g: GroupElement) -> Self {
        SpacePoint { g }
    }

    /// `x + iy` in the upper half-plane.
    pub fn half_plane(x: f64, y: f64) -> Result<Self> {
        Self::half_space(Model::H2, Complex64::new(x, 0.0), y)
    }

    /// `(zeta, y)` in the upper half-space (`zeta` real for H2).
    pub fn half_space(model: Model, zeta: Complex64, y: f64) -> Result<Self> {
        if !(y > 0.0 && y.is_finite() && zeta.re.is_finite() && zeta.im.is_finite()) {
            return Err(Error::invalid(format!("half-space point needs finite coordinates and y > 0, got ({zeta}, {y})")));
        }
        if model == Model::H2 && zeta.im != 0.0 {
            return Err(Error::invalid("H2 half-plane abscissa must be real"));
        }
        Ok(SpacePoint { g: GroupElement::n(model, zeta) * GroupElement::a(model, y.ln()) })
    }

    /// Point of the unit disk (H2).
    pub fn disk(w: Complex64) -> Result<Self> {
        if !(w.norm() < 1.0) {
            return Err(Error::invalid(format!("disk point must satisfy |w| < 1, got {w}")));
        }
        let z = Complex64::i() * (1.0 + w) / (1.0 - w);
        Self::half_plane(z.re, z.im)
    }

    pub fn model(&self) -> Model {
        self.g.model()
    }

    pub fn group_rep(&self) -> &GroupElement {
        &self.g
    }

    /// `(zeta, y)` half-space coordinates. Uses `g^{-1} = k a n`, so that
    /// `g . o = n_{-n} a_{-t} . o`.
    pub fn half_space_coords(&self) -> (Complex64, f64) {
        let ic = iwasawa_kan(&self.g.inverse());
        (-ic.n, (-ic.t).exp())
    }

    /// Unit-disk coordinate (H2), via `w = (z - i)/(z + i)`.
    pub fn disk_coord(&self) -> Result<Complex64> {
        if self.model() != Model::H2 {
            return Err(Error::UnsupportedModel { expected: "h2" });
        }
        let (x, y) = self.half_space_coords();
        let z = Complex64::new(x.re, y);
        Ok((z - Complex64::i()) / (z + Complex64::i()))
    }

    pub fn translate(&self, gamma: &GroupElement) -> SpacePoint {
        SpacePoint { g: gamma * &self.g }
    }

    /// Hyperbolic distance, from `cosh d = 1 + (|dz|^2 + dy^2) / (2 y y')`.
    pub fn distance(&self, other: &SpacePoint) -> f64 {
        let (z1, y1) = self.half_space_coords();
        let (z2, y2) = other.half_space_coords();
        let q = ((z1 - z2).norm_sqr() + (y1 - y2).powi(2)) / (2.0 * y1 * y2);
        // acosh(1 + q) without cancellation for small q
        (q + (q * (q + 2.0)).sqrt()).ln_1p()
    }

    /// Distance from the origin.
    pub fn radius(&self) -> f64 {
        self.distance(&SpacePoint::origin(self.model()))
    }
}

/// A point `gM` of `G/M`, viewed as the unit tangent vector at `g . o`
/// pointing towards `g . M`.
#[derive(Debug, Clone, Copy)]
pub struct PhaseSpacePoint {
    g: GroupElement,
}

impl PhaseSpacePoint {
    pub fn new(g: GroupElement) -> Self {
        PhaseSpacePoint { g }
    }

    pub fn rep(&self) -> &GroupElement {
        &self.g
    }

    pub fn base_point(&self) -> SpacePoint {
        SpacePoint::from_group(self.g)
    }

    /// Forward endpoint `g . M`.
    pub fn forward(&self) -> BoundaryPoint {
        BoundaryPoint::from_k(&iwasawa_kan(&self.g).k)
    }

    /// Backward endpoint `g . wM`.
    pub fn backward(&self) -> BoundaryPoint {
        BoundaryPoint::from_k(&iwasawa_kan(&(self.g * GroupElement::weyl(self.g.model()))).k)
    }

    /// Canonical representative of the coset.
    pub fn canonical(&self) -> GroupElement {
        self.g.canonical_mod_m()
    }
}

impl PartialEq for PhaseSpacePoint {
    /// Coset equality: `g1^{-1} g2` lies in M (to `1e-10`).
    fn eq(&self, other: &Self) -> bool {
        self.g.model() == other.g.model() && (self.g.inverse() * other.g).is_in_m(1e-10)
    }
}

/// `g . kM = k(g k) M`.
pub fn boundary_action(g: &GroupElement, b: &BoundaryPoint) -> BoundaryPoint {
    BoundaryPoint::from_k(&iwasawa_kan(&(g * &b.k_rep())).k)
}

/// `<gK, kM> = -H(g^{-1} k)`.
pub fn horocycle_bracket(x: &SpacePoint, b: &BoundaryPoint) -> f64 {
    -iwasawa_h(&(x.g.inverse() * b.k_rep()))
}

/// A group element `g` with `g . M = b` and `g . wM = b'`, together with
/// `H(g)` and `H(gw)`.
#[derive(Debug, Clone, Copy)]
pub struct GeodesicFrame {
    pub g: GroupElement,
    pub h_g: f64,
    pub h_gw: f64,
    pub b: BoundaryPoint,
    pub b_prime: BoundaryPoint,
}

impl GeodesicFrame {
    /// Frame for an arbitrary representative `g` (any element of the
    /// `MA`-coset may be passed).
    pub fn from_group(g: GroupElement) -> Self {
        let p = PhaseSpacePoint::new(g);
        let gw = g * GroupElement::weyl(g.model());
        GeodesicFrame { g, h_g: iwasawa_h(&g), h_gw: iwasawa_h(&gw), b: p.forward(), b_prime: p.backward() }
    }

    /// Same geodesic, shifted representative `g a_s m`.
    pub fn shifted(&self, s: f64, m: &GroupElement) -> Self {
        Self::from_group(self.g * GroupElement::a(self.g.model(), s) * *m)
    }
}

/// `g(b, b') = k_b n_z` where `z` is the half-space coordinate of
/// `k_b^{-1} . b'`. Then `H(g) = 0` and `H(gw) = log(1 + |z|^2)`.
pub fn geodesic_frame(b: &BoundaryPoint, b_prime: &BoundaryPoint) -> Result<GeodesicFrame> {
    if b.model() != b_prime.model() {
        return Err(Error::invalid("boundary points belong to different models"));
    }
    let distance = b.chordal_distance(b_prime);
    if distance < DIAGONAL_TOL {
        return Err(Error::Diagonal { distance });
    }
    let model = b.model();
    let kb = b.k_rep();
    let rel = boundary_action(&kb.inverse(), b_prime);
    let zeta = rel.half_space_coord().ok_or(Error::Diagonal { distance })?;
    let g = kb * GroupElement::n(model, zeta);
    let gw = g * GroupElement::weyl(model);
    Ok(GeodesicFrame { g, h_g: iwasawa_h(&g), h_gw: iwasawa_h(&gw), b: *b, b_prime: *b_prime })
}

/// `|gamma'(b)|` for the action on the unit circle (H2 only), computed from
/// the disk conjugate `D = C gamma C^{-1}`, `C = [[1, -i], [1, i]]`.
pub fn mobius_derivative(gamma: &GroupElement, b: &BoundaryPoint) -> Result<f64> {
    let angle = match (gamma.model(), b) {
        (Model::H2, BoundaryPoint::Circle { angle }) => *angle,
        _ => return Err(Error::UnsupportedModel { expected: "h2" }),
    };
    let [[_, _], [c, d]] = disk_conjugate(gamma);
    let w = Complex64::from_polar(1.0, angle);
    Ok(1.0 / (c * w + d).norm_sqr())
}

/// `C gamma C^{-1}` for the Cayley transform `C = [[1, -i], [1, i]]`; an
/// element of SU(1,1) with determinant 1.
pub fn disk_conjugate(gamma: &GroupElement) -> [[Complex64; 2]; 2] {
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let cm = [[one, -i], [one, i]];
    // C^{-1} = (1/2i) [[i, i], [-1, 1]]
    let s = 1.0 / (2.0 * i);
    let cinv = [[i * s, i * s], [-one * s, one * s]];
    let g = gamma.entries();
    let mul = |x: &[[Complex64; 2]; 2], y: &[[Complex64; 2]; 2]| {
        [
            [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
            [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
        ]
    };
    mul(&mul(&cm, &g), &cinv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{random_element_with, random_k};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_b<R: Rng>(model: Model, rng: &mut R) -> BoundaryPoint {
        match model {
            Model::H2 => BoundaryPoint::circle(rng.gen_range(0.0..2.0 * PI)),
            Model::H3 => BoundaryPoint::sphere_angles(rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI)),
        }
    }

    #[test]
    fn k_rep_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for model in [Model::H2, Model::H3] {
            for _ in 0..200 {
                let b = random_b(model, &mut rng);
                let back = BoundaryPoint::from_k(&b.k_rep());
                assert!(back.chordal_distance(&b) < 1e-13);
                if let Some(z) = b.half_space_coord() {
                    let again = BoundaryPoint::from_half_space_coord(model, z);
                    assert!(again.chordal_distance(&b) < 1e-12);
                }
            }
            assert!(BoundaryPoint::infinity(model).half_space_coord().is_none());
            assert!(BoundaryPoint::minus_infinity(model).half_space_coord().unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn infinity_is_fixed_by_p() {
        for model in [Model::H2, Model::H3] {
            let p = GroupElement::a(model, 0.8) * GroupElement::n(model, Complex64::new(1.5, 0.0));
            let b = boundary_action(&p, &BoundaryPoint::infinity(model));
            assert!(b.chordal_distance(&BoundaryPoint::infinity(model)) < 1e-14);
            let w = GroupElement::weyl(model);
            let b = boundary_action(&w, &BoundaryPoint::infinity(model));
            assert!(b.chordal_distance(&BoundaryPoint::minus_infinity(model)) < 1e-14);
        }
    }

    #[test]
    fn rotation_law_on_circle() {
        for (theta, phi) in [(0.3, 1.0), (-1.2, 4.0), (2.0, 0.0)] {
            let k = GroupElement::rotation(Model::H2, theta);
            let b = boundary_action(&k, &BoundaryPoint::circle(phi));
            assert!(b.chordal_distance(&BoundaryPoint::circle(phi + 2.0 * theta)) < 1e-14);
        }
    }

    #[test]
    fn half_space_coordinates_roundtrip() {
        let p = SpacePoint::half_space(Model::H3, Complex64::new(0.3, -1.1), 2.5).unwrap();
        let (z, y) = p.half_space_coords();
        assert!((z - Complex64::new(0.3, -1.1)).norm() < 1e-14 && (y - 2.5).abs() < 1e-14);
        let q = SpacePoint::disk(Complex64::new(0.2, 0.5)).unwrap();
        assert!((q.disk_coord().unwrap() - Complex64::new(0.2, 0.5)).norm() < 1e-14);
        assert!(SpacePoint::half_plane(0.0, -1.0).is_err());
    }

    #[test]
    fn bracket_basics() {
        for model in [Model::H2, Model::H3] {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            for _ in 0..20 {
                let b = random_b(model, &mut rng);
                assert!(horocycle_bracket(&SpacePoint::origin(model), &b).abs() < 1e-14);
            }
            for t in [-2.0, 0.5, 3.0] {
                let x = SpacePoint::from_group(GroupElement::a(model, t));
                assert!((horocycle_bracket(&x, &BoundaryPoint::infinity(model)) - t).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn frame_of_standard_pair() {
        for model in [Model::H2, Model::H3] {
            let f = geodesic_frame(&BoundaryPoint::infinity(model), &BoundaryPoint::minus_infinity(model)).unwrap();
            assert!((f.h_g + f.h_gw).abs() < 1e-14);
            let b = BoundaryPoint::infinity(model);
            assert!(matches!(geodesic_frame(&b, &b), Err(Error::Diagonal { .. })));
        }
    }

    #[test]
    fn frame_endpoints() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for model in [Model::H2, Model::H3] {
            for _ in 0..200 {
                let b = random_b(model, &mut rng);
                let bp = random_b(model, &mut rng);
                let f = geodesic_frame(&b, &bp).unwrap();
                let p = PhaseSpacePoint::new(f.g);
                assert!(p.forward().chordal_distance(&b) < 1e-10);
                assert!(p.backward().chordal_distance(&bp) < 1e-10);
                assert!(f.h_g.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mobius_derivative_identity_and_rotation() {
        let b = BoundaryPoint::circle(1.3);
        assert!((mobius_derivative(&GroupElement::identity(Model::H2), &b).unwrap() - 1.0).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let k = random_k(Model::H2, &mut rng);
        assert!((mobius_derivative(&k, &b).unwrap() - 1.0).abs() < 1e-14);
        let g = random_element_with(Model::H3, &mut rng, 1.0).unwrap();
        assert!(mobius_derivative(&g, &BoundaryPoint::infinity(Model::H3)).is_err());
    }

    #[test]
    fn phase_space_equality_is_coset_equality() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for model in [Model::H2, Model::H3] {
            let g = random_element_with(model, &mut rng, 1.5).unwrap();
            let m = crate::group::random_m(model, &mut rng);
            assert_eq!(PhaseSpacePoint::new(g), PhaseSpacePoint::new(g * m));
            let other = g * GroupElement::a(model, 0.1);
            assert_ne!(PhaseSpacePoint::new(g), PhaseSpacePoint::new(other));
        }
    }
}
