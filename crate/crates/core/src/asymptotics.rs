//! Stationary phase for `L_lambda`.
//!
//! On the fiber, `L_lambda f (g) = (1/pi) int e^{-i lambda psi(z)} alpha(z) d^s z`
//! with `psi(z) = H(n_z w) = log(1 + |z|^2)` and
//! `alpha(z) = (1 + |z|^2)^{-rho} f(g n_z)`. The only critical point is
//! `z = 0`, where `psi` has Hessian `2 I_s`. The leading term is
//!
//! ```text
//! C (2 pi / lambda)^{s/2} (1/pi) f(g),    C = |det|^{-1/2} e^{-i pi sig / 4}
//! ```
//!
//! The sign in the exponent is negative because the oscillation is
//! `e^{-i lambda psi}` with `psi` convex.

use crate::error::{Error, Result};
use crate::group::{iwasawa_h, GroupElement, Model};
use crate::patterson_sullivan::{l_lambda, PhaseSpaceFunction};
use crate::quadrature::QuadratureSpec;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Leading-order data of the stationary-phase expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MspLeading {
    /// Determinant of the Hessian of `psi` at the critical point.
    pub hessian_det: f64,
    /// Signature of the Hessian of `psi`.
    pub signature: i32,
    #[serde(skip)]
    pub constant_c: Complex64,
    /// `dim N`.
    pub s: usize,
    pub measure_const: f64,
}

/// Closed-form Hessian data for `psi(z) = log(1 + |z|^2)`.
pub fn phase_hessian(model: Model) -> MspLeading {
    let p = model.params();
    let s = p.dim_n;
    let det = 2f64.powi(s as i32);
    let signature = s as i32;
    MspLeading {
        hessian_det: det,
        signature,
        constant_c: Complex64::from_polar(det.abs().powf(-0.5), -PI * signature as f64 / 4.0),
        s,
        measure_const: p.n_bar_measure_const,
    }
}

/// `psi(z) = H(n_bar_z)` evaluated through the Iwasawa projection.
pub fn phase(model: Model, z: Complex64) -> f64 {
    iwasawa_h(&GroupElement::n_bar(model, z))
}

/// Hessian of `psi` at `0` by central second differences of the Iwasawa
/// projection, in real coordinates `(Re z, Im z)`.
pub fn phase_hessian_fd(model: Model, h: f64) -> Vec<Vec<f64>> {
    let s = model.params().dim_n;
    let dir = |i: usize| if i == 0 { Complex64::new(h, 0.0) } else { Complex64::new(0.0, h) };
    let psi = |z: Complex64| phase(model, z);
    let entry = |i: usize, j: usize| {
        if i == j {
            (psi(dir(i)) - 2.0 * psi(Complex64::new(0.0, 0.0)) + psi(-dir(i))) / (h * h)
        } else {
            (psi(dir(i) + dir(j)) - psi(dir(i) - dir(j)) - psi(dir(j) - dir(i)) + psi(-dir(i) - dir(j))) / (4.0 * h * h)
        }
    };
    (0..s).map(|i| (0..s).map(|j| entry(i, j)).collect()).collect()
}

/// `C (2 pi / lambda)^{s/2} (1/pi) f(g)`.
pub fn msp_leading(f: &dyn PhaseSpaceFunction, g: &GroupElement, lambda: f64) -> Result<Complex64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(format!("stationary phase needs lambda > 0, got {lambda}")));
    }
    let m = phase_hessian(f.model());
    let power = (2.0 * PI / lambda).powf(m.s as f64 / 2.0);
    Ok(m.constant_c * power * m.measure_const * f.eval(g)?)
}

/// One row of a rate study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub lambda: f64,
    pub exact: Complex64,
    pub leading: Complex64,
    /// `exact / leading`.
    pub ratio: Complex64,
    /// `|ratio - 1|`.
    pub abs_dev: f64,
}

/// `L_lambda f (g)` against the leading term at each `lambda`.
pub fn msp_rate_points(f: &dyn PhaseSpaceFunction, g: &GroupElement, lambdas: &[f64], spec: &QuadratureSpec) -> Result<Vec<RatePoint>> {
    if f.eval(g)?.norm() < 1e-8 {
        return Err(Error::IllConditioned("f(g) vanishes, the leading term is zero".into()));
    }
    lambdas
        .par_iter()
        .map(|&lambda| {
            let leading = msp_leading(f, g, lambda)?;
            let exact = l_lambda(f, lambda, g, spec)?.require_converged(spec)?;
            let ratio = exact / leading;
            Ok(RatePoint { lambda, exact, leading, ratio, abs_dev: (ratio - 1.0).norm() })
        })
        .collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::invalid("slope fit needs two or more paired points"));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::invalid("slope fit needs positive finite data"));
    }
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("slope fit needs distinct abscissae"));
    }
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub points: Vec<RatePoint>,
}

/// Fitted exponent of `|L_lambda f (g) / leading - 1|` in `lambda`; the
/// first correction of the expansion predicts `-1`. Needs five or more
/// values of `lambda`, all `>= 20`.
pub fn msp_rate_fit(f: &dyn PhaseSpaceFunction, g: &GroupElement, lambdas: &[f64], spec: &QuadratureSpec) -> Result<RateFit> {
    if lambdas.len() < 5 {
        return Err(Error::invalid(format!("rate fit needs at least 5 values of lambda, got {}", lambdas.len())));
    }
    if let Some(l) = lambdas.iter().find(|l| !(**l >= 20.0)) {
        return Err(Error::invalid(format!("rate fit needs lambda >= 20, got {l}")));
    }
    let points = msp_rate_points(f, g, lambdas, spec)?;
    let xs: Vec<f64> = points.iter().map(|p| p.lambda).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.abs_dev).collect();
    Ok(RateFit { slope: log_log_slope(&xs, &ys)?, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hessian_closed_form_matches_differences() {
        for model in [Model::H2, Model::H3] {
            let m = phase_hessian(model);
            let fd = phase_hessian_fd(model, 1e-4);
            for (i, row) in fd.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let expect = if i == j { 2.0 } else { 0.0 };
                    assert!((v - expect).abs() < 1e-6, "{model} {i}{j}: {v}");
                }
            }
            assert_eq!(phase(model, Complex64::new(0.0, 0.0)), 0.0);
            assert_eq!(m.hessian_det, 2f64.powi(m.s as i32));
        }
        let c2 = phase_hessian(Model::H2).constant_c;
        assert!((c2 - Complex64::from_polar(0.5f64.sqrt(), -PI / 4.0)).norm() < 1e-15);
        let c3 = phase_hessian(Model::H3).constant_c;
        assert!((c3 - Complex64::new(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-1.5)).collect();
        assert!((log_log_slope(&xs, &ys).unwrap() + 1.5).abs() < 1e-12);
        assert!(log_log_slope(&[1.0], &[1.0]).is_err());
    }
}
