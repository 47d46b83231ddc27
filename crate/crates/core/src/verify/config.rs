//! Declarative suite configuration (TOML).

use crate::boundary::{BoundaryPoint, SpacePoint};
use crate::error::{Error, Result};
use crate::group::Model;
use crate::quantization::{BumpTrigSymbol, Cutoff, FnSymbol, Smoothness, Symbol};
use crate::support::Bump;
use crate::transforms::{Atom, BoundaryDistribution, InversionGrid};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Iwasawa,
    Bracket,
    Poisson,
    PrincipalSeries,
    PsInvariance,
    IntertwiningDiagonal,
    IntertwiningOffdiag,
    MspRate,
    FourierInversion,
}

impl SuiteName {
    pub const ALL: [SuiteName; 9] = [
        SuiteName::Iwasawa,
        SuiteName::Bracket,
        SuiteName::Poisson,
        SuiteName::PrincipalSeries,
        SuiteName::PsInvariance,
        SuiteName::IntertwiningDiagonal,
        SuiteName::IntertwiningOffdiag,
        SuiteName::MspRate,
        SuiteName::FourierInversion,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Iwasawa => "iwasawa",
            SuiteName::Bracket => "bracket",
            SuiteName::Poisson => "poisson",
            SuiteName::PrincipalSeries => "principal-series",
            SuiteName::PsInvariance => "ps-invariance",
            SuiteName::IntertwiningDiagonal => "intertwining-diagonal",
            SuiteName::IntertwiningOffdiag => "intertwining-offdiag",
            SuiteName::MspRate => "msp-rate",
            SuiteName::FourierInversion => "fourier-inversion",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            SuiteName::Iwasawa => "Iwasawa roundtrip, H cocycle, Weyl element, N-bar measure normalization",
            SuiteName::Bracket => "horocycle bracket invariance and cocycles, disk Poisson kernel, boundary action",
            SuiteName::Poisson => "finite-difference eigenfunction residuals, Poisson intertwining and equivariance",
            SuiteName::PrincipalSeries => "unitarity of the compact-picture principal series",
            SuiteName::PsInvariance => "geodesic-flow, time-reversal and group-twist invariance of pairings",
            SuiteName::IntertwiningDiagonal => "diagonal identity: Wigner integral vs d_lambda times R(L_lambda)",
            SuiteName::IntertwiningOffdiag => "off-diagonal identity: Wigner pairing vs weighted-Radon pairing of L_lambda",
            SuiteName::MspRate => "stationary-phase leading term and O(1/lambda) rate of L_lambda",
            SuiteName::FourierInversion => "Helgason Fourier inversion of a bump on a truncated grid",
        }
    }

    pub fn valid_names() -> String {
        Self::ALL.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`, valid suites: {}", Self::valid_names())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymbolName {
    /// Gaussian bump in `z` times `1 + eps cos(m phi + phase)` in `b`.
    BumpTrig,
    /// Gaussian bump in `z`, constant in `b`.
    Bump,
    /// Flat-topped smooth window in `z` times the trig factor in `b`.
    WindowTrig,
}

impl SymbolName {
    pub const ALL: [SymbolName; 3] = [SymbolName::BumpTrig, SymbolName::Bump, SymbolName::WindowTrig];

    pub fn as_str(self) -> &'static str {
        match self {
            SymbolName::BumpTrig => "bump-trig",
            SymbolName::Bump => "bump",
            SymbolName::WindowTrig => "window-trig",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            SymbolName::BumpTrig => "exp(-d^2/2w^2) cutoff(d/R) * (1 + eps Re(e^{i phase} (b_x + i b_y)^mode))",
            SymbolName::Bump => "exp(-d^2/2w^2) cutoff(d/R), independent of b",
            SymbolName::WindowTrig => "cutoff(d/R) * (1 + eps Re(e^{i phase} (b_x + i b_y)^mode))",
        }
    }
}

/// Parameters of a built-in symbol. `center` is `[Re zeta, Im zeta, y]`
/// in half-space coordinates (`Im zeta` must be 0 for h2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    pub name: SymbolName,
    #[serde(default = "default_center")]
    pub center: [f64; 3],
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_mode")]
    pub mode: u32,
    #[serde(default = "default_phase")]
    pub phase: f64,
}

fn default_center() -> [f64; 3] {
    [0.2, 0.0, 1.3]
}
fn default_width() -> f64 {
    0.5
}
fn default_radius() -> f64 {
    1.0
}
fn default_epsilon() -> f64 {
    0.4
}
fn default_mode() -> u32 {
    2
}
fn default_phase() -> f64 {
    0.3
}

impl Default for SymbolSpec {
    fn default() -> Self {
        SymbolSpec {
            name: SymbolName::BumpTrig,
            center: default_center(),
            width: default_width(),
            radius: default_radius(),
            epsilon: default_epsilon(),
            mode: default_mode(),
            phase: default_phase(),
        }
    }
}

pub(crate) fn point(model: Model, c: [f64; 3]) -> Result<SpacePoint> {
    if model == Model::H2 && c[1] != 0.0 {
        return Err(Error::Config("h2 points need Im zeta = 0 (center[1])".into()));
    }
    SpacePoint::half_space(model, Complex64::new(c[0], c[1]), c[2]).map_err(|e| Error::Config(format!("bad point {c:?}: {e}")))
}

impl SymbolSpec {
    pub fn build(&self, model: Model) -> Result<Arc<dyn Symbol>> {
        let c = point(model, self.center)?;
        let sigma = if self.name == SymbolName::WindowTrig { f64::INFINITY } else { self.width };
        let bump = Bump::new(c, sigma, self.radius)?;
        Ok(match self.name {
            SymbolName::Bump => {
                let ball = bump.ball;
                Arc::new(FnSymbol::new(ball, Smoothness::Infinite, move |z, _| Complex64::new(bump.eval(z), 0.0)))
            }
            _ => Arc::new(BumpTrigSymbol::new(bump, self.epsilon, self.mode, self.phase)?),
        })
    }

    /// A second symbol of the same family with shifted parameters, used
    /// where a suite needs more than one symbol.
    pub fn variant(&self) -> SymbolSpec {
        SymbolSpec {
            center: [self.center[0] - 0.3, self.center[1], self.center[2] * 0.85],
            mode: self.mode + 1,
            phase: self.phase + 1.0,
            epsilon: -0.5 * self.epsilon,
            radius: self.radius * 1.1,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffSpec {
    #[serde(default = "default_cutoff_center")]
    pub center: [f64; 3],
    #[serde(default = "default_cutoff_radius")]
    pub radius: f64,
    /// Radius of the region where the cutoff equals 1 (0: peaked at the center).
    #[serde(default, skip_serializing_if = "is_zero")]
    pub plateau: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

fn default_cutoff_center() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}
fn default_cutoff_radius() -> f64 {
    1.8
}

impl Default for CutoffSpec {
    fn default() -> Self {
        CutoffSpec { center: default_cutoff_center(), radius: default_cutoff_radius(), plateau: 0.0 }
    }
}

impl CutoffSpec {
    pub fn build(&self, model: Model) -> Result<Cutoff> {
        Cutoff::plateau(point(model, self.center)?, self.plateau, self.radius)
    }
}

/// Boundary atom: `angle` for h2, `polar` and `azimuth` for h3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    #[serde(default = "default_weight")]
    pub weight: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub azimuth: Option<f64>,
}

fn default_weight() -> [f64; 2] {
    [1.0, 0.0]
}

impl AtomSpec {
    pub fn build(&self, model: Model) -> Result<Atom> {
        let point = match (model, self.angle, self.polar, self.azimuth) {
            (Model::H2, Some(a), None, None) => BoundaryPoint::circle(a),
            (Model::H3, None, Some(p), Some(az)) => BoundaryPoint::sphere_angles(p, az),
            (Model::H2, ..) => return Err(Error::Config("h2 atoms take `angle` only".into())),
            (Model::H3, ..) => return Err(Error::Config("h3 atoms take `polar` and `azimuth`".into())),
        };
        Ok(Atom { weight: Complex64::new(self.weight[0], self.weight[1]), point })
    }
}

pub(crate) fn build_atoms(model: Model, specs: &[AtomSpec]) -> Result<BoundaryDistribution> {
    let atoms = specs.iter().map(|a| a.build(model)).collect::<Result<Vec<_>>>()?;
    BoundaryDistribution::atomic(model, atoms)
}

/// Per-suite overrides; unset fields take the suite defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Pass threshold of the suite's main comparison.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<f64>,
    /// Relative tolerance handed to the quadrature engine.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_rel: Option<f64>,
    /// Finite-difference step for Laplacian residuals.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
    /// Allowed deviation of fitted log-log slopes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
}

/// Fourier-inversion settings: the bump to reconstruct and the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InversionSpec {
    pub center: [f64; 3],
    pub width: f64,
    pub radius: f64,
    pub grid: InversionGrid,
}

impl InversionSpec {
    pub fn default_for(model: Model) -> Self {
        match model {
            Model::H2 => InversionSpec { center: [0.4, 0.0, 1.3], width: 0.5, radius: 1.5, grid: InversionGrid::default() },
            Model::H3 => InversionSpec {
                center: [0.2, -0.1, 1.2],
                width: 0.5,
                radius: 1.5,
                grid: InversionGrid { lambda_max: 10.0, n_lambda: 41, n_boundary: 48, n_space: 40, n_eval: 8 },
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub model: Model,
    pub suite: SuiteName,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lambda_grid: Vec<f64>,
    /// Boundary data `T_j` (and `T_k` when `atoms_k` is empty).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<AtomSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms_k: Vec<AtomSpec>,
    #[serde(default)]
    pub symbol: SymbolSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_symbols: Vec<SymbolSpec>,
    #[serde(default)]
    pub cutoff: CutoffSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parallelism: Option<usize>,
    /// Number of random instances for property-style suites.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inversion: Option<InversionSpec>,
}

impl SuiteConfig {
    /// Minimal config with every optional field at its default.
    pub fn new(model: Model, suite: SuiteName) -> Self {
        SuiteConfig {
            model,
            suite,
            lambda_grid: Vec::new(),
            atoms: Vec::new(),
            atoms_k: Vec::new(),
            symbol: SymbolSpec::default(),
            extra_symbols: Vec::new(),
            cutoff: CutoffSpec::default(),
            tolerances: Tolerances::default(),
            seed: 0,
            parallelism: None,
            samples: None,
            inversion: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: SuiteConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(l) = self.lambda_grid.iter().find(|l| !l.is_finite()) {
            return Err(Error::Config(format!("lambda_grid entries must be finite, got {l}")));
        }
        if self.parallelism == Some(0) {
            return Err(Error::Config("parallelism must be >= 1".into()));
        }
        if self.samples == Some(0) {
            return Err(Error::Config("samples must be >= 1".into()));
        }
        for t in [self.tolerances.check, self.tolerances.quad_rel, self.tolerances.fd_step, self.tolerances.slope].into_iter().flatten() {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("tolerances must be finite and > 0, got {t}")));
            }
        }
        self.symbol.build(self.model)?;
        for s in &self.extra_symbols {
            s.build(self.model)?;
        }
        self.cutoff.build(self.model)?;
        if !self.atoms.is_empty() {
            build_atoms(self.model, &self.atoms)?;
        }
        if !self.atoms_k.is_empty() {
            build_atoms(self.model, &self.atoms_k)?;
        }
        Ok(())
    }
}
