//! The two group models, SL(2,R) acting on H2 and SL(2,C) acting on H3.
//!
//! Both are stored as 2x2 complex matrices; H2 elements have real entries.
//! Conventions:
//!
//! * `a_t = diag(e^{t/2}, e^{-t/2})`, so `a_t . o` is at distance `|t|` from `o`.
//! * `n_z = [[1, z], [0, 1]]` with `z` real (H2) or complex (H3).
//! * `w = [[0, -1], [1, 0]]`, which satisfies `w a_t w^{-1} = a_{-t}`.
//! * K is SO(2) or SU(2), M is `{+-I}` or `diag(e^{i alpha}, e^{-i alpha})`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

type Mat = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Which symmetric space is being modelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    H2,
    H3,
}

impl Model {
    pub fn params(self) -> ModelParams {
        match self {
            Model::H2 => ModelParams { m_alpha: 1, m_2alpha: 0, rho: 0.5, dim_n: 1, c0: std::f64::consts::SQRT_2, n_bar_measure_const: 1.0 / PI },
            Model::H3 => ModelParams { m_alpha: 2, m_2alpha: 0, rho: 1.0, dim_n: 2, c0: PI.sqrt(), n_bar_measure_const: 1.0 / PI },
        }
    }

    pub fn rho(self) -> f64 {
        self.params().rho
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::H2 => "h2",
            Model::H3 => "h3",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "h2" => Ok(Model::H2),
            "h3" => Ok(Model::H3),
            _ => Err(Error::invalid(format!("unknown model '{s}', expected one of: h2, h3"))),
        }
    }
}

/// Root data and measure constants of a model.
///
/// The Haar measure on N is `dn = n_bar_measure_const * du` (H2) or
/// `n_bar_measure_const * d^2 z` (H3), fixed by
/// `int_N e^{-2 rho H(n w)} dn = 1`. Lebesgue measure on A is `dt`, and
/// the invariant measure on X is then `n_bar_measure_const * dVol`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ModelParams {
    pub m_alpha: u32,
    pub m_2alpha: u32,
    pub rho: f64,
    pub dim_n: usize,
    /// Constant in front of the Gamma-quotient of the c-function.
    pub c0: f64,
    pub n_bar_measure_const: f64,
}

/// An element of SL(2,R) or SL(2,C).
#[derive(Clone, Copy, PartialEq)]
pub struct GroupElement {
    model: Model,
    m: Mat,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[[{}, {}], [{}, {}]]", self.model, self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1])
    }
}

const DET_TOL: f64 = 1e-12;

impl GroupElement {
    /// Validates and stores a matrix. The determinant must be 1 to `1e-12`
    /// (relative to the squared norm); H2 entries must be real.
    pub fn new(model: Model, m: [[Complex64; 2]; 2]) -> Result<Self> {
        let all_finite = m.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite());
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let scale = m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().max(1.0);
        if !all_finite || (det - ONE).norm() > DET_TOL * scale {
            return Err(Error::NotUnimodular { det: format!("{det}") });
        }
        if model == Model::H2 && m.iter().flatten().any(|z| z.im.abs() > DET_TOL * scale.sqrt()) {
            return Err(Error::invalid("H2 group elements must have real entries"));
        }
        Ok(GroupElement { model, m }.renormalized())
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let r = |x: f64| Complex64::new(x, 0.0);
        Self::new(Model::H2, [[r(a), r(b)], [r(c), r(d)]])
    }

    pub fn identity(model: Model) -> Self {
        GroupElement { model, m: [[ONE, ZERO], [ZERO, ONE]] }
    }

    /// `a_t = diag(e^{t/2}, e^{-t/2})`
    pub fn a(model: Model, t: f64) -> Self {
        let e = (0.5 * t).exp();
        GroupElement { model, m: [[Complex64::new(e, 0.0), ZERO], [ZERO, Complex64::new(1.0 / e, 0.0)]] }
    }

    /// `n_z = [[1, z], [0, 1]]`. For H2 the imaginary part of `z` must be 0.
    pub fn n(model: Model, z: Complex64) -> Self {
        debug_assert!(model == Model::H3 || z.im == 0.0, "H2 nilpotent coordinate must be real");
        let z = if model == Model::H2 { Complex64::new(z.re, 0.0) } else { z };
        GroupElement { model, m: [[ONE, z], [ZERO, ONE]] }
    }

    pub fn n_real(model: Model, u: f64) -> Self {
        Self::n(model, Complex64::new(u, 0.0))
    }

    /// `n_bar_z = [[1, 0], [z, 1]] = theta(n_{-z})`.
    pub fn n_bar(model: Model, z: Complex64) -> Self {
        debug_assert!(model == Model::H3 || z.im == 0.0, "H2 nilpotent coordinate must be real");
        let z = if model == Model::H2 { Complex64::new(z.re, 0.0) } else { z };
        GroupElement { model, m: [[ONE, ZERO], [z, ONE]] }
    }

    /// Rotation `[[cos t, sin t], [-sin t, cos t]]`, valid in both models.
    pub fn rotation(model: Model, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        GroupElement { model, m: [[Complex64::new(c, 0.0), Complex64::new(s, 0.0)], [Complex64::new(-s, 0.0), Complex64::new(c, 0.0)]] }
    }

    /// `diag(e^{i phi/2}, e^{-i phi/2})`; an element of M in H3.
    pub fn phase(phi: f64) -> Self {
        let e = Complex64::from_polar(1.0, 0.5 * phi);
        GroupElement { model: Model::H3, m: [[e, ZERO], [ZERO, e.conj()]] }
    }

    /// SU(2) element with Euler angles: `phase(a) rotation(b/2) phase(c)`.
    pub fn su2_euler(a: f64, b: f64, c: f64) -> Self {
        Self::phase(a) * Self::rotation(Model::H3, 0.5 * b) * Self::phase(c)
    }

    /// `[[alpha, -conj(beta)], [beta, conj(alpha)]]` normalized to SU(2).
    pub fn su2(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let r = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::invalid("SU(2) parameters must not both vanish"));
        }
        let (a, b) = (alpha / r, beta / r);
        Ok(GroupElement { model: Model::H3, m: [[a, -b.conj()], [b, a.conj()]] })
    }

    /// The Weyl element `w = [[0, -1], [1, 0]]`; `w^2 = -I` lies in M.
    pub fn weyl(model: Model) -> Self {
        GroupElement { model, m: [[ZERO, -ONE], [ONE, ZERO]] }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.m;
        GroupElement { model: self.model, m: [[d, -b], [-c, a]] }
    }

    pub fn conj_transpose(&self) -> Mat {
        let [[a, b], [c, d]] = self.m;
        [[a.conj(), c.conj()], [b.conj(), d.conj()]]
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance between two matrices.
    pub fn distance(&self, other: &GroupElement) -> f64 {
        let mut s = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                s += (self.m[i][j] - other.m[i][j]).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Distance from K, measured as `||g^H g - I||`.
    pub fn unitarity_defect(&self) -> f64 {
        let g = mat_mul(&self.conj_transpose(), &self.m);
        ((g[0][0] - ONE).norm_sqr() + g[0][1].norm_sqr() + g[1][0].norm_sqr() + (g[1][1] - ONE).norm_sqr()).sqrt()
    }

    pub fn is_in_k(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// True iff `g` lies in M to the given tolerance.
    pub fn is_in_m(&self, tol: f64) -> bool {
        let [[a, b], [c, d]] = self.m;
        if b.norm() > tol || c.norm() > tol || (a.norm() - 1.0).abs() > tol || (d - a.conj()).norm() > tol {
            return false;
        }
        match self.model {
            Model::H2 => a.im.abs() <= tol,
            Model::H3 => true,
        }
    }

    /// Representative of the coset `gM` whose first non-negligible entry in
    /// the top row is real and positive.
    pub fn canonical_mod_m(&self) -> Self {
        let [[a, b], _] = self.m;
        let scale = self.norm();
        let pivot_first = a.norm() > 1e-12 * scale;
        match self.model {
            Model::H2 => {
                let pivot = if pivot_first { a.re } else { b.re };
                if pivot < 0.0 {
                    self.scaled_columns(-ONE, -ONE)
                } else {
                    *self
                }
            }
            Model::H3 => {
                // right multiplication by diag(u, conj u) scales column 1 by u
                let u = if pivot_first { a.conj() / a.norm() } else { b / b.norm() };
                self.scaled_columns(u, u.conj())
            }
        }
    }

    fn scaled_columns(&self, u: Complex64, v: Complex64) -> Self {
        let [[a, b], [c, d]] = self.m;
        GroupElement { model: self.model, m: [[a * u, b * v], [c * u, d * v]] }
    }

    /// Divides by a square root of the determinant (and drops imaginary
    /// round-off for H2).
    pub fn renormalized(mut self) -> Self {
        let det = self.det();
        if (det - ONE).norm() > 1e-15 {
            let s = det.sqrt();
            for z in self.m.iter_mut().flatten() {
                *z /= s;
            }
        }
        if self.model == Model::H2 {
            for z in self.m.iter_mut().flatten() {
                z.im = 0.0;
            }
        }
        self
    }
}

fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    [
        [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
        [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
    ]
}

impl Mul for GroupElement {
    type Output = GroupElement;

    /// Matrix product, renormalized to determinant 1.
    ///
    /// # Panics
    /// If the factors belong to different models.
    fn mul(self, rhs: GroupElement) -> GroupElement {
        (&self).mul(&rhs)
    }
}

impl Mul for &GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: &GroupElement) -> GroupElement {
        assert_eq!(self.model, rhs.model, "cannot multiply elements of different models");
        GroupElement { model: self.model, m: mat_mul(&self.m, &rhs.m) }.renormalized()
    }
}

/// `g = k a_t n_z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IwasawaCoords {
    pub k: GroupElement,
    pub t: f64,
    pub n: Complex64,
}

impl IwasawaCoords {
    pub fn reassemble(&self) -> GroupElement {
        let model = self.k.model;
        self.k * GroupElement::a(model, self.t) * GroupElement::n(model, self.n)
    }
}

/// KAN decomposition through the Gram matrix: `g^H g = n^H a^2 n` gives
/// `e^t = |g11|^2 + |g21|^2` and `z = (g^H g)_{12} e^{-t}`; then
/// `k = g n^{-1} a^{-1}`.
///
/// Inputs are unimodular by construction of [`GroupElement`].
pub fn iwasawa_kan(g: &GroupElement) -> IwasawaCoords {
    let [[a, b], [c, d]] = g.m;
    let e_t = a.norm_sqr() + c.norm_sqr();
    let t = e_t.ln();
    let z = (a.conj() * b + c.conj() * d) / e_t;
    let z = if g.model == Model::H2 { Complex64::new(z.re, 0.0) } else { z };
    let s = e_t.sqrt();
    // k = g n_{-z} a_{-t}
    let k = GroupElement { model: g.model, m: [[a / s, (b - a * z) * s], [c / s, (d - c * z) * s]] };
    IwasawaCoords { k, t, n: z }
}

/// Iwasawa projection `H(g)` as the A-coordinate `t`.
pub fn iwasawa_h(g: &GroupElement) -> f64 {
    let [[a, _], [c, _]] = g.m;
    (a.norm_sqr() + c.norm_sqr()).ln()
}

pub fn weyl_element(model: Model) -> GroupElement {
    GroupElement::weyl(model)
}

/// Reproducible pseudo-random element `n_x a_t k` with every coordinate
/// uniform in `[-radius, radius]`. `radius = 0` gives the identity.
pub fn random_element(model: Model, seed: u64, radius: f64) -> Result<GroupElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_element_with(model, &mut rng, radius)
}

pub fn random_element_with<R: Rng>(model: Model, rng: &mut R, radius: f64) -> Result<GroupElement> {
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::invalid(format!("radius must be finite and >= 0, got {radius}")));
    }
    let mut u = || if radius == 0.0 { 0.0 } else { rng.gen_range(-radius..=radius) };
    Ok(match model {
        Model::H2 => {
            let (x, t, th) = (u(), u(), u());
            GroupElement::n_real(model, x) * GroupElement::a(model, t) * GroupElement::rotation(model, th)
        }
        Model::H3 => {
            let (x, y, t) = (u(), u(), u());
            let (e1, e2, e3) = (u(), u(), u());
            GroupElement::n(model, Complex64::new(x, y)) * GroupElement::a(model, t) * GroupElement::su2_euler(e1, e2, e3)
        }
    })
}

/// Random element of K (uniform angles, not Haar for H3).
pub fn random_k<R: Rng>(model: Model, rng: &mut R) -> GroupElement {
    match model {
        Model::H2 => GroupElement::rotation(model, rng.gen_range(0.0..2.0 * PI)),
        Model::H3 => GroupElement::su2_euler(rng.gen_range(0.0..4.0 * PI), rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..4.0 * PI)),
    }
}

/// Random element of M.
pub fn random_m<R: Rng>(model: Model, rng: &mut R) -> GroupElement {
    match model {
        Model::H2 => {
            if rng.gen_bool(0.5) {
                GroupElement::identity(model)
            } else {
                GroupElement::rotation(model, PI)
            }
        }
        Model::H3 => GroupElement::phase(rng.gen_range(0.0..4.0 * PI)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(matches!(GroupElement::from_real(2.0, 0.0, 0.0, 1.0), Err(Error::NotUnimodular { .. })));
        assert!(GroupElement::from_real(2.0, 0.0, 0.0, 0.5).is_ok());
        let bad = GroupElement::new(Model::H2, [[Complex64::new(0.0, 1.0), ZERO], [ZERO, Complex64::new(0.0, -1.0)]]);
        assert!(bad.is_err());
    }

    #[test]
    fn identity_and_a_decompose_trivially() {
        for model in [Model::H2, Model::H3] {
            let ic = iwasawa_kan(&GroupElement::identity(model));
            assert!(ic.t.abs() < 1e-15 && ic.n.norm() < 1e-15);
            assert!(ic.k.distance(&GroupElement::identity(model)) < 1e-15);
            let ic = iwasawa_kan(&GroupElement::a(model, 1.7));
            assert!((ic.t - 1.7).abs() < 1e-14 && ic.n.norm() < 1e-15);
        }
    }

    #[test]
    fn n_bar_one_has_h_log_two() {
        let g = GroupElement::from_real(1.0, 0.0, 1.0, 1.0).unwrap();
        // Gram oracle: g^T g = [[2, 1], [1, 1]] = n^T diag(e^t, e^-t) n gives e^t = 2
        assert!((iwasawa_h(&g) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn weyl_conjugation() {
        for model in [Model::H2, Model::H3] {
            let w = weyl_element(model);
            for t in [-5.0, -1.0, 1.0, 5.0] {
                let lhs = w * GroupElement::a(model, t) * w.inverse();
                assert!(lhs.distance(&GroupElement::a(model, -t)) < 1e-12);
            }
            assert!((w * w).is_in_m(1e-15));
            assert!(iwasawa_h(&w).abs() < 1e-15);
        }
    }

    #[test]
    fn canonical_representative_is_coset_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for model in [Model::H2, Model::H3] {
            for _ in 0..50 {
                let g = random_element_with(model, &mut rng, 2.0).unwrap();
                let m = random_m(model, &mut rng);
                let a = g.canonical_mod_m();
                let b = (g * m).canonical_mod_m();
                assert!(a.distance(&b) < 1e-12 * g.norm());
                assert!(g.inverse().mul(a).is_in_m(1e-12));
            }
        }
    }

    #[test]
    fn random_element_determinism_and_radius_zero() {
        for model in [Model::H2, Model::H3] {
            let a = random_element(model, 42, 3.0).unwrap();
            let b = random_element(model, 42, 3.0).unwrap();
            assert_eq!(a, b);
            let e = random_element(model, 7, 0.0).unwrap();
            assert!(e.distance(&GroupElement::identity(model)) < 1e-15);
        }
        assert!(random_element(Model::H2, 1, -1.0).is_err());
    }

    #[test]
    fn su2_parametrizations_are_unitary() {
        let k = GroupElement::su2_euler(0.3, 1.2, -2.0);
        assert!(k.is_in_k(1e-14));
        let k = GroupElement::su2(Complex64::new(0.2, 0.4), Complex64::new(-1.0, 0.5)).unwrap();
        assert!(k.is_in_k(1e-14) && (k.det() - c(1.0)).norm() < 1e-15);
    }
}
