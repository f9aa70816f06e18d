//! Parameter sweeps over probe-detuning grids, the figure presets, and the
//! dip/extremum locators used to read them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::optics::{light_drag, spectrum_point, DragConfig, DragMode, SpectrumPoint, C_LIGHT};
use crate::params::{SystemParams, UnitScale};

/// The parameter a sweep varies across its series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Varied {
    #[serde(rename = "gamma_m")]
    GammaM,
    #[serde(rename = "kappa")]
    Kappa,
    #[serde(rename = "omega_m")]
    OmegaM,
    #[serde(rename = "beta")]
    Beta,
    #[serde(rename = "v")]
    Velocity,
}

impl Varied {
    pub fn as_str(self) -> &'static str {
        match self {
            Varied::GammaM => "gamma_m",
            Varied::Kappa => "kappa",
            Varied::OmegaM => "omega_m",
            Varied::Beta => "beta",
            Varied::Velocity => "v",
        }
    }
}

impl fmt::Display for Varied {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Varied {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma_m" | "gamma-m" => Ok(Varied::GammaM),
            "kappa" => Ok(Varied::Kappa),
            "omega_m" | "omega-m" => Ok(Varied::OmegaM),
            "beta" => Ok(Varied::Beta),
            "v" | "velocity" => Ok(Varied::Velocity),
            other => Err(Error::domain(
                "varied",
                format!(
                    "unknown parameter `{other}` (expected gamma_m, kappa, omega_m, beta or v)"
                ),
            )),
        }
    }
}

/// How `β` is chosen for each series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum BetaPolicy {
    /// Use the base (or varied) `β` as given.
    #[default]
    Fixed,
    /// Recompute `β = β₀` from each series' `κ`, `ω_m`, `γ_m`.
    Ideal,
}

impl BetaPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            BetaPolicy::Fixed => "fixed",
            BetaPolicy::Ideal => "ideal",
        }
    }
}

impl FromStr for BetaPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(BetaPolicy::Fixed),
            "ideal" => Ok(BetaPolicy::Ideal),
            other => Err(Error::domain(
                "beta_policy",
                format!("unknown policy `{other}`"),
            )),
        }
    }
}

/// Uniform grid `min..=max` with `points` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl XGrid {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        let g = XGrid { min, max, points };
        let bad = g.violations();
        if bad.is_empty() {
            Ok(g)
        } else {
            Err(Error::Validation(bad))
        }
    }

    fn violations(&self) -> Vec<String> {
        let mut bad = Vec::new();
        if !(self.min.is_finite() && self.max.is_finite()) {
            bad.push(format!(
                "x_grid: bounds must be finite, got [{}, {}]",
                self.min, self.max
            ));
        } else if self.min >= self.max {
            bad.push(format!(
                "x_grid: x_min {} must be < x_max {}",
                self.min, self.max
            ));
        }
        if self.points < 3 {
            bad.push(format!("x_grid: points must be >= 3, got {}", self.points));
        }
        bad
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.points - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        let span = self.max - self.min;
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.max
                } else {
                    self.min + span * (i as f64 / last)
                }
            })
            .collect()
    }
}

/// Drag evaluation attached to a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DragSweep {
    /// Velocity used for the (x, Δx) rows unless the sweep varies `v`.
    pub velocity: f64,
    pub length: f64,
    pub c_light: f64,
    pub mode: DragMode,
    /// Velocities for the (v, Δx) rows; empty for none.
    pub v_values: Vec<f64>,
    /// Probe offset at which the (v, Δx) rows are evaluated.
    pub v_probe_x: f64,
}

impl DragSweep {
    pub fn new(velocity: f64, length: f64) -> Self {
        DragSweep {
            velocity,
            length,
            c_light: C_LIGHT,
            mode: DragMode::RealParts,
            v_values: Vec::new(),
            v_probe_x: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: SystemParams,
    pub varied: Varied,
    pub values: Vec<f64>,
    pub grid: XGrid,
    pub beta_policy: BetaPolicy,
    pub omega_probe: f64,
    pub drag: Option<DragSweep>,
}

impl SweepSpec {
    /// Every violated field, or `Ok` for a runnable spec.
    pub fn validate(&self) -> Result<()> {
        let mut bad = self.grid.violations();
        if self.values.is_empty() {
            bad.push(format!(
                "values: at least one {} value required",
                self.varied
            ));
        }
        for (i, &v) in self.values.iter().enumerate() {
            if let Err(e) = self.series_params(v) {
                bad.push(format!("values[{i}] = {v}: {e}"));
            }
            if self.varied == Varied::Velocity && !v.is_finite() {
                bad.push(format!("values[{i}] = {v}: velocity must be finite"));
            }
        }
        if !(self.omega_probe.is_finite() && self.omega_probe > 0.0) {
            bad.push(format!(
                "omega_probe: must be finite and > 0, got {}",
                self.omega_probe
            ));
        }
        if self.varied == Varied::Beta && self.beta_policy == BetaPolicy::Ideal {
            bad.push("beta_policy: ideal beta conflicts with varying beta".to_string());
        }
        match &self.drag {
            None if self.varied == Varied::Velocity => {
                bad.push("drag: required when varying v".to_string());
            }
            None => {}
            Some(d) => {
                let cfg = DragConfig {
                    velocity: d.velocity,
                    length: d.length,
                    c_light: d.c_light,
                    omega_probe: self.omega_probe,
                };
                if let Err(Error::Validation(v)) = cfg.validate() {
                    bad.extend(v.into_iter().map(|s| format!("drag.{s}")));
                }
                if d.v_values.iter().any(|v| !v.is_finite()) {
                    bad.push("drag.v_values: must be finite".to_string());
                }
                if !d.v_probe_x.is_finite() {
                    bad.push("drag.v_probe_x: must be finite".to_string());
                }
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(bad))
        }
    }

    /// System parameters of the series with varied value `value`.
    pub fn series_params(&self, value: f64) -> Result<SystemParams> {
        let p = match self.varied {
            Varied::GammaM => self.base.with_gamma_m(value)?,
            Varied::Kappa => self.base.with_kappa(value)?,
            Varied::OmegaM => self.base.with_omega_m(value)?,
            Varied::Beta => self.base.with_beta(value)?,
            Varied::Velocity => self.base,
        };
        Ok(match self.beta_policy {
            BetaPolicy::Fixed => p,
            BetaPolicy::Ideal => p.with_ideal_beta(),
        })
    }

    fn series_drag(&self, value: f64) -> Option<(DragConfig, DragMode)> {
        self.drag.as_ref().map(|d| {
            let velocity = if self.varied == Varied::Velocity {
                value
            } else {
                d.velocity
            };
            let cfg = DragConfig {
                velocity,
                length: d.length,
                c_light: d.c_light,
                omega_probe: self.omega_probe,
            };
            (cfg, d.mode)
        })
    }
}

/// One (abscissa, Δx) sample; `displacement` is NaN and `singular` set when
/// `Re(n_r) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DragSample {
    pub abscissa: f64,
    pub displacement: f64,
    pub singular: bool,
}

fn drag_sample(abscissa: f64, pt: &SpectrumPoint, cfg: &DragConfig, mode: DragMode) -> DragSample {
    match light_drag(pt.n_g, pt.n_r, cfg, mode) {
        Ok(d) => DragSample {
            abscissa,
            displacement: d,
            singular: false,
        },
        Err(_) => DragSample {
            abscissa,
            displacement: f64::NAN,
            singular: true,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub varied: Varied,
    pub value: f64,
    pub params: SystemParams,
    pub omega_probe: f64,
    pub beta_policy: BetaPolicy,
    pub drag: Option<DragConfig>,
    pub drag_mode: Option<DragMode>,
    pub points: Vec<SpectrumPoint>,
    /// (x, Δx) rows, aligned with `points`.
    pub drag_x: Vec<DragSample>,
    /// (v, Δx) rows at `v_probe_x`.
    pub drag_v: Vec<DragSample>,
    pub v_probe_x: Option<f64>,
}

/// Evaluate every series of `spec`, in `values` order, rows in x order.
pub fn run_sweep(spec: &SweepSpec, exec: Execution) -> Result<Vec<SeriesResult>> {
    spec.validate()?;
    let xs = spec.grid.values();
    spec.values
        .iter()
        .map(|&value| {
            let params = spec.series_params(value)?;
            let points = exec.map(&xs, |&x| spectrum_point(&params, x, spec.omega_probe));
            let drag = spec.series_drag(value);
            let (drag_x, drag_v, v_probe_x) = match (&drag, &spec.drag) {
                (Some((cfg, mode)), Some(d)) => {
                    let rows = points
                        .iter()
                        .map(|pt| drag_sample(pt.x, pt, cfg, *mode))
                        .collect();
                    let probe = spectrum_point(&params, d.v_probe_x, spec.omega_probe);
                    let vs = d
                        .v_values
                        .iter()
                        .map(|&v| {
                            let c = DragConfig {
                                velocity: v,
                                ..*cfg
                            };
                            drag_sample(v, &probe, &c, *mode)
                        })
                        .collect();
                    (rows, vs, Some(d.v_probe_x))
                }
                _ => (Vec::new(), Vec::new(), None),
            };
            Ok(SeriesResult {
                varied: spec.varied,
                value,
                params,
                omega_probe: spec.omega_probe,
                beta_policy: spec.beta_policy,
                drag: drag.map(|(c, _)| c),
                drag_mode: drag.map(|(_, m)| m),
                points,
                drag_x,
                drag_v,
                v_probe_x,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FigureName {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

impl FigureName {
    pub const ALL: [FigureName; 7] = [
        FigureName::Fig2,
        FigureName::Fig3,
        FigureName::Fig4,
        FigureName::Fig5,
        FigureName::Fig6,
        FigureName::Fig7,
        FigureName::Fig8,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureName::Fig2 => "fig2",
            FigureName::Fig3 => "fig3",
            FigureName::Fig4 => "fig4",
            FigureName::Fig5 => "fig5",
            FigureName::Fig6 => "fig6",
            FigureName::Fig7 => "fig7",
            FigureName::Fig8 => "fig8",
        }
    }

    /// Whether the figure shows drag rather than indices.
    pub fn is_drag(self) -> bool {
        matches!(
            self,
            FigureName::Fig3 | FigureName::Fig5 | FigureName::Fig7 | FigureName::Fig8
        )
    }
}

impl fmt::Display for FigureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureName::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

const PRESET_POINTS: usize = 2001;
/// Drag presets report displacement per metre of medium.
const PRESET_LENGTH: f64 = 1.0;
const PRESET_VELOCITY: f64 = 2.0;
const PRESET_V_PROBE_X: f64 = 0.3;

fn symmetric_grid(half_width: f64) -> XGrid {
    XGrid {
        min: -half_width,
        max: half_width,
        points: PRESET_POINTS,
    }
}

fn preset_drag(x_unit: f64) -> DragSweep {
    DragSweep {
        velocity: PRESET_VELOCITY,
        length: PRESET_LENGTH,
        c_light: C_LIGHT,
        mode: DragMode::RealParts,
        v_values: (0..=16).map(|i| -4.0 + 0.5 * i as f64).collect(),
        v_probe_x: PRESET_V_PROBE_X * x_unit,
    }
}

/// Parameter family behind each figure.
///
/// Every preset uses [`BetaPolicy::Ideal`] and `ω = 1e4 ω_m` of its base set.
///
/// | preset | varied | values | base |
/// |---|---|---|---|
/// | fig2/fig3 | `γ_m` | 0.5, 1, 1.5, 2 | `κ = ω_m = 1e4`, `γ_m` units |
/// | fig4/fig5 | `κ` | 5000, 10000, 20000 | `ω_m = 1e4`, `γ_m = 1e-4 ω_m` |
/// | fig6/fig7 | `ω_m` | 5000, 7000, 11000 | rad/s, `κ = 7000`, `γ_m = 0.7` |
/// | fig8 | `v` | -4, -2, 2, 4 m/s | fig2 base, `γ_m = 1` |
///
/// Grids span `±3 max(γ_m)` with 2001 points. Drag figures carry a unit
/// medium length, so `Δx` is the displacement per metre.
pub fn figure_preset(name: FigureName) -> SweepSpec {
    let fig2_base = SystemParams::new(1e4, 1e4, 1.0, 0.0, UnitScale::GammaM)
        .expect("static params")
        .with_ideal_beta();
    let (base, varied, values) = match name {
        FigureName::Fig2 | FigureName::Fig3 => {
            (fig2_base, Varied::GammaM, vec![0.5, 1.0, 1.5, 2.0])
        }
        FigureName::Fig4 | FigureName::Fig5 => {
            let omega_m = 1e4;
            let base = SystemParams::new(1e4, omega_m, 1e-4 * omega_m, 0.0, UnitScale::GammaM)
                .expect("static params")
                .with_ideal_beta();
            (base, Varied::Kappa, vec![5e3, 1e4, 2e4])
        }
        FigureName::Fig6 | FigureName::Fig7 => {
            let mid = 7000.0;
            let base = SystemParams::new(mid, mid, 1e-4 * mid, 0.0, UnitScale::RadPerSecond)
                .expect("static params")
                .with_ideal_beta();
            (base, Varied::OmegaM, vec![5000.0, 7000.0, 11000.0])
        }
        FigureName::Fig8 => (fig2_base, Varied::Velocity, vec![-4.0, -2.0, 2.0, 4.0]),
    };
    let max_gamma = if varied == Varied::GammaM {
        values.iter().copied().fold(f64::MIN, f64::max)
    } else {
        base.gamma_m()
    };
    SweepSpec {
        base,
        varied,
        values,
        grid: symmetric_grid(3.0 * max_gamma),
        beta_policy: BetaPolicy::Ideal,
        omega_probe: 1e4 * base.omega_m(),
        drag: name.is_drag().then(|| preset_drag(base.gamma_m())),
    }
}

/// A [`SpectrumPoint`] component usable as a sweep observable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Column {
    ReEpsT,
    ImEpsT,
    ReNr,
    ImNr,
    ReDchiDx,
    ImDchiDx,
    ReNg,
    ImNg,
}

impl Column {
    pub fn value(self, pt: &SpectrumPoint) -> f64 {
        match self {
            Column::ReEpsT => pt.eps_t.re,
            Column::ImEpsT => pt.eps_t.im,
            Column::ReNr => pt.n_r.re,
            Column::ImNr => pt.n_r.im,
            Column::ReDchiDx => pt.dchi_dx.re,
            Column::ImDchiDx => pt.dchi_dx.im,
            Column::ReNg => pt.n_g.re,
            Column::ImNg => pt.n_g.im,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Column::ReEpsT => "re_eps_t",
            Column::ImEpsT => "im_eps_t",
            Column::ReNr => "re_n_r",
            Column::ImNr => "im_n_r",
            Column::ReDchiDx => "re_dchi_dx",
            Column::ImDchiDx => "im_dchi_dx",
            Column::ReNg => "re_n_g",
            Column::ImNg => "im_n_g",
        }
    }
}

impl FromStr for Column {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Column::ReEpsT,
            Column::ImEpsT,
            Column::ReNr,
            Column::ImNr,
            Column::ReDchiDx,
            Column::ImDchiDx,
            Column::ReNg,
            Column::ImNg,
        ]
        .into_iter()
        .find(|c| c.as_str() == s)
        .ok_or_else(|| Error::UnknownColumn(s.to_string()))
    }
}

/// Minimum of a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dip {
    pub index: usize,
    pub x_raw: f64,
    pub value_raw: f64,
    /// Vertex of the parabola through the minimum and its two neighbours.
    pub x_refined: f64,
    pub value_refined: f64,
    /// The minimum sits on the first or last grid node; no refinement.
    pub at_boundary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
    pub at_boundary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrema {
    pub min: Extremum,
    pub max: Extremum,
}

fn samples(series: &SeriesResult, column: Column) -> Result<Vec<(f64, f64)>> {
    if series.points.len() < 3 {
        return Err(Error::TooFewPoints(series.points.len()));
    }
    Ok(series
        .points
        .iter()
        .map(|pt| (pt.x, column.value(pt)))
        .collect())
}

fn arg_extreme(samples: &[(f64, f64)], want_max: bool) -> usize {
    let mut best: Option<usize> = None;
    for (i, &(_, v)) in samples.iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        best = match best {
            None => Some(i),
            Some(b) => {
                let bv = samples[b].1;
                if (want_max && v > bv) || (!want_max && v < bv) {
                    Some(i)
                } else {
                    Some(b)
                }
            }
        };
    }
    best.unwrap_or(0)
}

/// Vertex of the upward parabola through three points.
fn parabola_vertex(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> Option<(f64, f64)> {
    let (x0, y0) = p0;
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    // Newton form y = y0 + d01 (x - x0) + a (x - x0)(x - x1)
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let a = (d12 - d01) / (x2 - x0);
    if !(a > 0.0 && a.is_finite()) {
        return None;
    }
    let xv = 0.5 * (x0 + x1) - d01 / (2.0 * a);
    let yv = y0 + d01 * (xv - x0) + a * (xv - x0) * (xv - x1);
    Some((xv, yv))
}

/// Grid minimum of `column`, refined by parabolic interpolation.
pub fn locate_dip(series: &SeriesResult, column: Column) -> Result<Dip> {
    let s = samples(series, column)?;
    let i = arg_extreme(&s, false);
    let (x_raw, value_raw) = s[i];
    let at_boundary = i == 0 || i + 1 == s.len();
    let (x_refined, value_refined) = if at_boundary {
        (x_raw, value_raw)
    } else {
        match parabola_vertex(s[i - 1], s[i], s[i + 1]) {
            Some((xv, yv)) if xv >= s[i - 1].0 && xv <= s[i + 1].0 && yv.is_finite() => (xv, yv),
            _ => (x_raw, value_raw),
        }
    };
    Ok(Dip {
        index: i,
        x_raw,
        value_raw,
        x_refined,
        value_refined,
        at_boundary,
    })
}

/// Signed grid minimum and maximum of `column`.
pub fn extremum_pair(series: &SeriesResult, column: Column) -> Result<Extrema> {
    let s = samples(series, column)?;
    let last = s.len() - 1;
    let pick = |i: usize| Extremum {
        x: s[i].0,
        value: s[i].1,
        at_boundary: i == 0 || i == last,
    };
    Ok(Extrema {
        min: pick(arg_extreme(&s, false)),
        max: pick(arg_extreme(&s, true)),
    })
}
