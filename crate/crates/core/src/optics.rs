//! Optical observables derived from the probe response.
//!
//! The susceptibility is identified with the output quadrature, `χ = ε_T`;
//! from it `n_r = 1 + 2πχ` and `n_g = n_r + 2πω dχ/dx`. Following the source
//! convention, `Re(n_r)` is labelled the absorption and `Im(n_r)` the
//! dispersion (the opposite of the usual optics convention).
//!
//! The lateral Fresnel drag of a beam crossing a medium of length `l` moving
//! transversely at `v` is `Δx = (n_g - 1/n_r) v l / c`, reduced to a real
//! displacement according to [`DragMode`].

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{at_pole, compute_n, eps_t_resonant};
use crate::params::SystemParams;

/// Vacuum speed of light, m/s.
pub const C_LIGHT: f64 = 299_792_458.0;

pub fn susceptibility(eps_t: Complex64) -> Complex64 {
    eps_t
}

pub fn refractive_index(chi: Complex64) -> Complex64 {
    1.0 + TAU * chi
}

/// Closed-form `dε_T/dx`.
///
/// With `S = γ_m/2 - ix + N` and `D = κ - ix + β/S`, `dε_T/dx = -2κ D'/D²`,
/// `D' = -i + iβ/S²`. Multiplying through by `S²` gives
/// `-2κ (iβ - iS²) / ((κ - ix) S + β)²`, which stays finite at `S = 0` where
/// it equals `-2iκ/β`, the slope of the transparency zero.
pub fn dchi_dx_analytic(params: &SystemParams, x: f64) -> Complex64 {
    let k = params.kappa();
    let cavity = Complex64::new(k, -x);
    let beta = params.beta();
    let i = Complex64::i();
    if beta == 0.0 {
        return 2.0 * k * i / (cavity * cavity);
    }
    let s = Complex64::new(params.gamma_m() / 2.0, -x) + compute_n(params);
    let p = cavity * s + beta;
    -2.0 * k * i * (beta - s * s) / (p * p)
}

/// `max(1e-6 γ_m, 1e-9 |x|)`, falling back to `1e-10 κ` when both vanish.
pub fn default_fd_step(params: &SystemParams, x: f64) -> f64 {
    let h = (1e-6 * params.gamma_m()).max(1e-9 * x.abs());
    if h > 0.0 {
        h
    } else {
        1e-10 * params.kappa()
    }
}

/// Central difference `(χ(x+h) - χ(x-h)) / 2h` of the resonant response.
pub fn dchi_dx_fd(params: &SystemParams, x: f64, h: f64) -> Result<Complex64> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::domain("h", format!("step must be > 0, got {h}")));
    }
    let hi = eps_t_resonant(params, x + h);
    let lo = eps_t_resonant(params, x - h);
    Ok((hi - lo) / (2.0 * h))
}

pub fn group_index(params: &SystemParams, x: f64, omega_probe: f64) -> Complex64 {
    let n_r = refractive_index(susceptibility(eps_t_resonant(params, x)));
    n_r + TAU * omega_probe * dchi_dx_analytic(params, x)
}

/// One probe-detuning sample of the optical chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub x: f64,
    pub eps_t: Complex64,
    pub chi: Complex64,
    pub n_r: Complex64,
    pub dchi_dx: Complex64,
    pub n_g: Complex64,
    /// The sample sits on the transparency pole; `ε_T` is the limit value 0
    /// and `dχ/dx` the limit slope.
    pub at_pole: bool,
}

pub fn spectrum_point(params: &SystemParams, x: f64, omega_probe: f64) -> SpectrumPoint {
    let eps_t = eps_t_resonant(params, x);
    let chi = susceptibility(eps_t);
    let n_r = refractive_index(chi);
    let dchi_dx = dchi_dx_analytic(params, x);
    let n_g = n_r + TAU * omega_probe * dchi_dx;
    SpectrumPoint {
        x,
        eps_t,
        chi,
        n_r,
        dchi_dx,
        n_g,
        at_pole: at_pole(params, x),
    }
}

/// Reduction of the complex drag expression to a real displacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DragMode {
    /// `(Re n_g - 1/Re n_r) v l / c`.
    #[default]
    RealParts,
    /// `Re(n_g - 1/n_r) v l / c`.
    ComplexThenReal,
}

impl DragMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DragMode::RealParts => "real-parts",
            DragMode::ComplexThenReal => "complex-then-real",
        }
    }
}

impl fmt::Display for DragMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DragMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real-parts" => Ok(DragMode::RealParts),
            "complex-then-real" => Ok(DragMode::ComplexThenReal),
            other => Err(Error::domain(
                "drag_mode",
                format!("unknown mode `{other}` (expected real-parts or complex-then-real)"),
            )),
        }
    }
}

/// Moving-medium configuration for the drag formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DragConfig {
    /// Transverse medium velocity, m/s (signed).
    pub velocity: f64,
    /// Medium length, m.
    pub length: f64,
    pub c_light: f64,
    /// Probe angular frequency `ω` in the group-index term, in the same unit
    /// scale as the system parameters.
    pub omega_probe: f64,
}

impl DragConfig {
    pub fn new(velocity: f64, length: f64, omega_probe: f64) -> Result<Self> {
        let cfg = DragConfig {
            velocity,
            length,
            c_light: C_LIGHT,
            omega_probe,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_velocity(self, velocity: f64) -> Result<Self> {
        let cfg = DragConfig { velocity, ..self };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if !self.velocity.is_finite() {
            bad.push(format!("v: must be finite, got {}", self.velocity));
        }
        for (field, value) in [
            ("length", self.length),
            ("c_light", self.c_light),
            ("omega_probe", self.omega_probe),
        ] {
            if !(value.is_finite() && value > 0.0) {
                bad.push(format!("{field}: must be finite and > 0, got {value}"));
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(bad))
        }
    }
}

/// Lateral drag displacement in metres.
pub fn light_drag(n_g: Complex64, n_r: Complex64, cfg: &DragConfig, mode: DragMode) -> Result<f64> {
    let factor = match mode {
        DragMode::RealParts => {
            if n_r.re == 0.0 {
                return Err(Error::SingularIndex(format!("{n_r}")));
            }
            n_g.re - 1.0 / n_r.re
        }
        DragMode::ComplexThenReal => {
            if n_r.norm_sqr() == 0.0 {
                return Err(Error::SingularIndex(format!("{n_r}")));
            }
            (n_g - 1.0 / n_r).re
        }
    };
    Ok(factor * cfg.velocity * cfg.length / cfg.c_light)
}
