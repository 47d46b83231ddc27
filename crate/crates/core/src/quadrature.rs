//! Deterministic integration engine.
//!
//! Every transform in the crate bottoms out here: adaptive Gauss-Kronrod
//! panels on finite intervals, algebraic compactification for infinite
//! lines, iterated rules for 2D/3D regions, and equal-weight rules on the
//! circle and sphere (normalized to total mass 1).

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

/// Tolerances and limits for the adaptive rules.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections applied to any one panel.
    pub max_depth: u32,
    /// Kronrod points per panel; 15 or 21.
    pub rule_order: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { rel_tol: 1e-10, abs_tol: 1e-14, max_depth: 40, rule_order: 21 }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_depth: u32, rule_order: usize) -> Result<Self> {
        let spec = QuadratureSpec { rel_tol, abs_tol, max_depth, rule_order };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_tol(rel_tol: f64, abs_tol: f64) -> Self {
        QuadratureSpec { rel_tol, abs_tol, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidSpec(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::InvalidSpec(format!("abs_tol must be >= 0, got {}", self.abs_tol)));
        }
        if self.max_depth < 1 {
            return Err(Error::InvalidSpec("max_depth must be >= 1".into()));
        }
        if self.rule_order != 15 && self.rule_order != 21 {
            return Err(Error::InvalidSpec(format!("rule_order must be 15 or 21, got {}", self.rule_order)));
        }
        Ok(())
    }

    fn tolerance(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

/// One-dimensional integration domains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Interval(f64, f64),
    RealLine,
    /// `[a, +inf)`
    From(f64),
    /// `(-inf, b]`
    To(f64),
}

/// Compactifying substitutions for infinite domains. Both are algebraic:
/// tails decaying like `|x|^{-2}` or faster map to bounded integrands.
/// Slower tails become integrable endpoint singularities, which the
/// adaptive rule reports as non-converged rather than extrapolating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Substitution {
    /// `x = u / (1 - |u|)`
    #[default]
    Rational,
    /// `x = u / (1 - u^2)`
    Quadratic,
}

impl Substitution {
    // (x(u), dx/du) for u in [0, 1)
    fn map(self, u: f64) -> (f64, f64) {
        match self {
            Substitution::Rational => {
                let d = 1.0 - u;
                (u / d, 1.0 / (d * d))
            }
            Substitution::Quadratic => {
                let s = 1.0 - u * u;
                (u / s, (1.0 + u * u) / (s * s))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub err_est: f64,
    pub converged: bool,
    pub evaluations: usize,
}

impl QuadResult {
    pub fn zero() -> Self {
        QuadResult { value: Complex64::new(0.0, 0.0), err_est: 0.0, converged: true, evaluations: 0 }
    }

    /// An exact value, e.g. a closed form standing in for an integral.
    pub fn exact(value: Complex64) -> Self {
        QuadResult { value, err_est: 0.0, converged: true, evaluations: 1 }
    }

    /// The result for `c * f`.
    pub fn scaled(self, c: Complex64) -> Self {
        let m = c.norm();
        QuadResult { value: self.value * c, err_est: self.err_est * m, ..self }
    }

    /// Turns a non-converged result into [`Error::NonConverged`].
    pub fn require_converged(self, spec: &QuadratureSpec) -> Result<Complex64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NonConverged { err_est: self.err_est, tol: spec.tolerance(self.value) })
        }
    }
}

#[allow(clippy::excessive_precision)]
mod rules {
    pub const XGK21: [f64; 11] = [
        0.995_657_163_025_808_080_735_527_280_689_003,
        0.973_906_528_517_171_720_077_964_012_084_452,
        0.930_157_491_355_708_226_001_207_180_059_508,
        0.865_063_366_688_984_510_732_096_688_423_493,
        0.780_817_726_586_416_897_063_717_578_345_042,
        0.679_409_568_299_024_406_234_327_365_114_874,
        0.562_757_134_668_604_683_339_000_099_272_694,
        0.433_395_394_129_247_190_799_265_943_165_784,
        0.294_392_862_701_460_198_131_126_603_103_866,
        0.148_874_338_981_631_210_884_826_001_129_720,
        0.0,
    ];
    pub const WG10: [f64; 5] = [
        0.066_671_344_308_688_137_593_568_809_893_332,
        0.149_451_349_150_580_593_145_776_339_657_697,
        0.219_086_362_515_982_043_995_534_934_228_163,
        0.269_266_719_309_996_355_091_226_921_569_469,
        0.295_524_224_714_752_870_173_892_994_651_338,
    ];
    pub const WGK21: [f64; 11] = [
        0.011_694_638_867_371_874_278_064_396_062_192,
        0.032_558_162_307_964_727_478_818_972_459_390,
        0.054_755_896_574_351_996_031_381_300_244_580,
        0.075_039_674_810_919_952_767_043_140_916_190,
        0.093_125_454_583_697_605_535_065_465_083_366,
        0.109_387_158_802_297_641_899_210_590_325_805,
        0.123_491_976_262_065_851_077_958_109_831_074,
        0.134_709_217_311_473_325_928_054_001_771_707,
        0.142_775_938_577_060_080_797_094_273_138_717,
        0.147_739_104_901_338_491_374_841_515_972_068,
        0.149_445_554_002_916_905_664_936_468_389_821,
    ];

    pub const XGK15: [f64; 8] = [
        0.991_455_371_120_812_639_206_854_697_526_329,
        0.949_107_912_342_758_524_526_189_684_047_851,
        0.864_864_423_359_769_072_789_712_788_640_926,
        0.741_531_185_599_394_439_863_864_773_280_788,
        0.586_087_235_467_691_130_294_144_838_258_730,
        0.405_845_151_377_397_166_906_606_412_076_961,
        0.207_784_955_007_898_467_600_689_403_773_245,
        0.0,
    ];
    pub const WG7: [f64; 4] = [
        0.129_484_966_168_869_693_270_611_432_679_082,
        0.279_705_391_489_276_667_901_467_771_423_780,
        0.381_830_050_505_118_944_950_369_775_488_975,
        0.417_959_183_673_469_387_755_102_040_816_327,
    ];
    pub const WGK15: [f64; 8] = [
        0.022_935_322_010_529_224_963_732_008_058_970,
        0.063_092_092_629_978_553_290_700_663_189_204,
        0.104_790_010_322_250_183_839_876_322_541_518,
        0.140_653_259_715_525_918_745_189_590_510_238,
        0.169_004_726_639_267_902_826_583_426_598_550,
        0.190_350_578_064_785_409_913_256_402_421_014,
        0.204_432_940_075_298_892_414_161_999_234_649,
        0.209_482_141_084_727_828_012_999_174_891_714,
    ];
}

/// Value of an integrand at one node, together with the error already
/// committed in producing it (non-zero for nested inner integrals).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Sample {
    value: Complex64,
    err: f64,
    converged: bool,
}

impl From<Complex64> for Sample {
    fn from(value: Complex64) -> Self {
        Sample { value, err: 0.0, converged: true }
    }
}

impl From<QuadResult> for Sample {
    fn from(r: QuadResult) -> Self {
        Sample { value: r.value, err: r.err_est, converged: r.converged }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    /// rule error, the only part refinement can reduce
    err: f64,
    nested: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err;
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

struct PanelEval {
    value: Complex64,
    err: f64,
    nested: f64,
    converged: bool,
}

fn gauss_kronrod<F>(f: &F, a: f64, b: f64, order: usize) -> Result<PanelEval>
where
    F: Fn(f64) -> Result<Sample>,
{
    let (xgk, wgk, wg): (&[f64], &[f64], &[f64]) =
        if order == 15 { (&rules::XGK15, &rules::WGK15, &rules::WG7) } else { (&rules::XGK21, &rules::WGK21, &rules::WG10) };
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let n = xgk.len();
    // Gauss nodes sit at odd indices of xgk for both rules; the 15-point
    // rule additionally has the center as a Gauss node.
    let center_is_gauss = order == 15;

    let mut fv = Vec::with_capacity(2 * n - 1);
    let mut nested_err = 0.0;
    let mut converged = true;
    let mut eval = |x: f64| -> Result<(Complex64, f64)> {
        let s = f(x)?;
        if !(s.value.re.is_finite() && s.value.im.is_finite()) {
            return Err(Error::NonFinite { x });
        }
        converged &= s.converged;
        Ok((s.value, s.err))
    };

    let fc = eval(center)?;
    let mut res_k = fc.0 * wgk[n - 1];
    let mut res_g = if center_is_gauss { fc.0 * wg[wg.len() - 1] } else { Complex64::new(0.0, 0.0) };
    let mut res_abs = fc.0.norm() * wgk[n - 1];
    nested_err += fc.1 * wgk[n - 1];

    for j in 0..n - 1 {
        let dx = half * xgk[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        res_k += (f1.0 + f2.0) * wgk[j];
        res_abs += (f1.0.norm() + f2.0.norm()) * wgk[j];
        nested_err += (f1.1 + f2.1) * wgk[j];
        if j % 2 == 1 {
            res_g += (f1.0 + f2.0) * wg[j / 2];
        }
        fv.push((f1.0, f2.0));
    }
    let mean = res_k * 0.5;
    let mut res_asc = wgk[n - 1] * (fc.0 - mean).norm();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        res_asc += wgk[j] * ((f1 - mean).norm() + (f2 - mean).norm());
    }
    let h = half.abs();
    let err = rescale_error(((res_k - res_g) * half).norm(), res_abs * h, res_asc * h);
    Ok(PanelEval { value: res_k * half, err, nested: nested_err * h, converged })
}

const MAX_PANELS: usize = 50_000;

#[derive(Default)]
struct Totals {
    value: Complex64,
    err: f64,
    nested: f64,
}

impl Totals {
    fn add(&mut self, p: &Panel) {
        self.value += p.value;
        self.err += p.err;
        self.nested += p.nested;
    }
    fn sub(&mut self, p: &Panel) {
        self.value -= p.value;
        self.err -= p.err;
        self.nested -= p.nested;
    }
}

/// Globally adaptive bisection. Only the rule error drives refinement and
/// decides convergence: error carried in from nested inner integrals does
/// not shrink under bisection, and each inner integral already met its own
/// tolerance. The reported `err_est` still includes it.
fn adaptive<F>(f: &F, intervals: &[(f64, f64)], spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<Sample>,
{
    spec.validate()?;
    let per_panel = 2 * if spec.rule_order == 15 { 8 } else { 11 } - 1;
    let mut heap = BinaryHeap::new();
    let mut frozen = Totals::default();
    let mut active = Totals::default();
    let mut evaluations = 0;
    let mut converged_nodes = true;
    let panel = |p: PanelEval, a: f64, b: f64, depth: u32| Panel { a, b, value: p.value, err: p.err, nested: p.nested, depth };
    for &(a, b) in intervals {
        if a == b {
            continue;
        }
        let p = gauss_kronrod(f, a, b, spec.rule_order)?;
        evaluations += per_panel;
        converged_nodes &= p.converged;
        let p = panel(p, a, b, 0);
        active.add(&p);
        heap.push(p);
    }
    let mut since_resum = 0usize;
    loop {
        if since_resum >= 1024 {
            // limit drift of the running sums
            active = Totals::default();
            for p in heap.iter() {
                active.add(p);
            }
            since_resum = 0;
        }
        let value = frozen.value + active.value;
        let rule_err = frozen.err + active.err.max(0.0);
        let nested = frozen.nested + active.nested.max(0.0);
        let done = |converged| QuadResult { value, err_est: rule_err + nested, converged, evaluations };
        let tol = spec.tolerance(value);
        if rule_err <= tol {
            return Ok(done(converged_nodes));
        }
        // panels at max depth cannot improve; once they alone exceed the
        // budget, further refinement is wasted work
        if frozen.err > tol || heap.len() >= MAX_PANELS {
            return Ok(done(false));
        }
        let Some(worst) = heap.pop() else {
            return Ok(done(false));
        };
        active.sub(&worst);
        if worst.depth >= spec.max_depth {
            frozen.add(&worst);
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod(f, worst.a, mid, spec.rule_order)?;
        let right = gauss_kronrod(f, mid, worst.b, spec.rule_order)?;
        evaluations += 2 * per_panel;
        converged_nodes &= left.converged && right.converged;
        let depth = worst.depth + 1;
        let (l, r) = (panel(left, worst.a, mid, depth), panel(right, mid, worst.b, depth));
        active.add(&l);
        active.add(&r);
        since_resum += 1;
        heap.push(l);
        heap.push(r);
    }
}

fn integrate_samples<F>(f: F, domain: Domain, subst: Substitution, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<Sample>,
{
    match domain {
        Domain::Interval(a, b) => {
            if !(a.is_finite() && b.is_finite()) {
                return Err(Error::invalid(format!("interval endpoints must be finite: [{a}, {b}]")));
            }
            adaptive(&f, &[(a, b)], spec)
        }
        Domain::RealLine => {
            let g = |u: f64| -> Result<Sample> {
                let (x, jac) = subst.map(u.abs());
                let x = if u < 0.0 { -x } else { x };
                scale_sample(f(x)?, jac)
            };
            adaptive(&g, &[(-1.0, 0.0), (0.0, 1.0)], spec)
        }
        Domain::From(a) => {
            let g = |u: f64| -> Result<Sample> {
                let (x, jac) = subst.map(u);
                scale_sample(f(a + x)?, jac)
            };
            adaptive(&g, &[(0.0, 1.0)], spec)
        }
        Domain::To(b) => {
            let g = |u: f64| -> Result<Sample> {
                let (x, jac) = subst.map(u);
                scale_sample(f(b - x)?, jac)
            };
            adaptive(&g, &[(0.0, 1.0)], spec)
        }
    }
}

fn scale_sample(s: Sample, jac: f64) -> Result<Sample> {
    Ok(Sample { value: s.value * jac, err: s.err * jac, converged: s.converged })
}

/// Integrates a complex-valued function over `domain` with the default
/// (rational) compactification for infinite domains.
pub fn integrate_1d<F>(f: F, domain: Domain, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    integrate_1d_with(f, domain, Substitution::Rational, spec)
}

pub fn integrate_1d_with<F>(f: F, domain: Domain, subst: Substitution, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    integrate_samples(|x| Ok(Sample::from(f(x))), domain, subst, spec)
}

/// Like [`integrate_1d`] for integrands that can fail.
pub fn try_integrate_1d<F>(f: F, domain: Domain, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    integrate_samples(|x| f(x).map(Sample::from), domain, Substitution::Rational, spec)
}

/// Outer adaptive integral whose integrand is itself a quadrature result.
/// Inner error estimates are integrated into the reported error and a
/// non-converged inner integral marks the whole result non-converged. Each
/// nesting level can add up to one tolerance to `err_est`, so a converged
/// result of depth `d` is accurate to about `d * rel_tol`.
pub fn integrate_iterated<F>(inner: F, outer: Domain, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<QuadResult>,
{
    let evals = Cell::new(0usize);
    let mut r = integrate_samples(
        |x| {
            let r = inner(x)?;
            evals.set(evals.get() + r.evaluations);
            Ok(Sample::from(r))
        },
        outer,
        Substitution::Rational,
        spec,
    )?;
    r.evaluations = evals.get();
    Ok(r)
}

/// Two-dimensional domains: rectangles and products of 1D domains (the
/// latter covers the plane and the half-plane chart).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain2d {
    Rectangle { x: (f64, f64), y: (f64, f64) },
    Product(Domain, Domain),
}

impl Domain2d {
    /// `{(x, y) : y > 0}`
    pub fn half_plane() -> Self {
        Domain2d::Product(Domain::RealLine, Domain::From(0.0))
    }

    fn axes(&self) -> (Domain, Domain) {
        match *self {
            Domain2d::Rectangle { x, y } => (Domain::Interval(x.0, x.1), Domain::Interval(y.0, y.1)),
            Domain2d::Product(x, y) => (x, y),
        }
    }
}

/// Iterated integral of `f(x, y)`; the inner (y) integrals inherit the
/// tolerance spec and their error estimates feed the outer budget.
pub fn integrate_2d<F>(f: F, domain: Domain2d, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> Complex64,
{
    let (dx, dy) = domain.axes();
    integrate_iterated(|x| integrate_1d(|y| f(x, y), dy, spec), dx, spec)
}

/// Iterated integral over `{(x, y) : x in outer, y in inner(x)}`. `inner`
/// returns `None` where the section is empty.
pub fn integrate_region_2d<F, L>(f: F, outer: Domain, inner: L, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> Result<Complex64>,
    L: Fn(f64) -> Option<Domain>,
{
    integrate_iterated(
        |x| match inner(x) {
            Some(dy) => try_integrate_1d(|y| f(x, y), dy, spec),
            None => Ok(QuadResult::zero()),
        },
        outer,
        spec,
    )
}

/// Normalized trapezoidal rule on the circle: `(1/2pi) * integral_0^{2pi} f`.
/// Spectrally accurate for smooth periodic integrands.
pub fn integrate_circle<F>(f: F, n_points: usize) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if n_points < 4 {
        return Err(Error::invalid(format!("circle rule needs at least 4 points, got {n_points}")));
    }
    let h = 2.0 * PI / n_points as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..n_points {
        let x = h * j as f64;
        let v = f(x);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite { x });
        }
        sum += v;
    }
    Ok(sum / n_points as f64)
}

/// Normalized product rule on the unit sphere (total mass 1): Gauss-Legendre
/// in `cos(polar)` times the trapezoidal rule in azimuth.
pub fn integrate_sphere<F>(f: F, n_polar: usize, n_azimuth: usize) -> Result<Complex64>
where
    F: Fn([f64; 3]) -> Complex64,
{
    if n_polar < 2 || n_azimuth < 4 {
        return Err(Error::invalid(format!("sphere rule needs n_polar >= 2 and n_azimuth >= 4, got {n_polar} x {n_azimuth}")));
    }
    let (nodes, weights) = gauss_legendre(n_polar);
    let h = 2.0 * PI / n_azimuth as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for (&z, &w) in nodes.iter().zip(&weights) {
        let r = (1.0 - z * z).max(0.0).sqrt();
        let mut ring = Complex64::new(0.0, 0.0);
        for j in 0..n_azimuth {
            let phi = h * j as f64;
            let v = f([r * phi.cos(), r * phi.sin(), z]);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite { x: z });
            }
            ring += v;
        }
        sum += ring * (w / n_azimuth as f64);
    }
    Ok(sum * 0.5)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` (Newton on `P_n`).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
