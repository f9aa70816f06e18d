//! Parameter sets.
//!
//! Frequencies are angular frequencies in one scale per parameter set, recorded
//! by [`UnitScale`]. The default scale measures everything in units of the
//! reference mechanical damping rate, so `γ_m = 1`, `κ = ω_m = 1e4` is the
//! standard operating point.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s (CODATA 2018, exact by SI definition of h).
pub const HBAR: f64 = 1.054_571_817e-34;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum UnitScale {
    /// Angular frequencies measured in units of a reference `γ_m`.
    #[default]
    GammaM,
    /// Absolute angular frequencies, rad/s.
    RadPerSecond,
}

impl UnitScale {
    pub fn as_str(self) -> &'static str {
        match self {
            UnitScale::GammaM => "gamma-m",
            UnitScale::RadPerSecond => "rad-per-second",
        }
    }
}

impl fmt::Display for UnitScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for UnitScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma-m" => Ok(UnitScale::GammaM),
            "rad-per-second" => Ok(UnitScale::RadPerSecond),
            other => Err(Error::domain(
                "units",
                format!("unknown unit scale `{other}` (expected gamma-m or rad-per-second)"),
            )),
        }
    }
}

/// Cavity and mechanics parameters entering the probe response.
///
/// Construct through [`SystemParams::new`], which enforces `κ > 0`, `ω_m > 0`,
/// `γ_m ≥ 0`, `β ≥ 0` and finiteness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    kappa: f64,
    omega_m: f64,
    gamma_m: f64,
    beta: f64,
    units: UnitScale,
}

impl SystemParams {
    pub fn new(
        kappa: f64,
        omega_m: f64,
        gamma_m: f64,
        beta: f64,
        units: UnitScale,
    ) -> Result<Self> {
        let violations = Self::violations(kappa, omega_m, gamma_m, beta);
        match violations.len() {
            0 => Ok(SystemParams {
                kappa,
                omega_m,
                gamma_m,
                beta,
                units,
            }),
            1 => {
                let (field, reason) = violations.into_iter().next().unwrap();
                Err(Error::domain(field, reason))
            }
            _ => Err(Error::Validation(
                violations
                    .into_iter()
                    .map(|(f, r)| format!("{f}: {r}"))
                    .collect(),
            )),
        }
    }

    /// Parameters in `γ_m` units.
    pub fn normalized(kappa: f64, omega_m: f64, gamma_m: f64, beta: f64) -> Result<Self> {
        Self::new(kappa, omega_m, gamma_m, beta, UnitScale::GammaM)
    }

    /// Same cavity with `β` set to the ideal-transparency value `β₀`.
    pub fn with_ideal_beta(self) -> Self {
        let beta = crate::model::pole_conditions(&self).beta0;
        SystemParams { beta, ..self }
    }

    pub fn with_beta(self, beta: f64) -> Result<Self> {
        Self::new(self.kappa, self.omega_m, self.gamma_m, beta, self.units)
    }

    pub fn with_kappa(self, kappa: f64) -> Result<Self> {
        Self::new(kappa, self.omega_m, self.gamma_m, self.beta, self.units)
    }

    pub fn with_omega_m(self, omega_m: f64) -> Result<Self> {
        Self::new(self.kappa, omega_m, self.gamma_m, self.beta, self.units)
    }

    pub fn with_gamma_m(self, gamma_m: f64) -> Result<Self> {
        Self::new(self.kappa, self.omega_m, gamma_m, self.beta, self.units)
    }

    pub(crate) fn violations(
        kappa: f64,
        omega_m: f64,
        gamma_m: f64,
        beta: f64,
    ) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let mut check = |field: &'static str, value: f64, strict: bool| {
            if !value.is_finite() {
                out.push((field, format!("must be finite, got {value}")));
            } else if strict && value <= 0.0 {
                out.push((field, format!("must be > 0, got {value}")));
            } else if !strict && value < 0.0 {
                out.push((field, format!("must be >= 0, got {value}")));
            }
        };
        check("kappa", kappa, true);
        check("omega_m", omega_m, true);
        check("gamma_m", gamma_m, false);
        check("beta", beta, false);
        out
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn omega_m(&self) -> f64 {
        self.omega_m
    }

    pub fn gamma_m(&self) -> f64 {
        self.gamma_m
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn units(&self) -> UnitScale {
        self.units
    }
}

/// Microscopic inputs from which the drive strength `β` is derived.
///
/// `Λ = 2 m ω_m / ħ` depends on `ω_m`, which belongs to [`SystemParams`], so it
/// is computed on demand by [`MicroscopicParams::lambda`] and never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MicroscopicParams {
    /// Optomechanical coupling `g_m = ω_c / L`.
    pub g_m: f64,
    /// Coupling-field amplitude `ε_°`.
    pub pump_amplitude: f64,
    /// Resonator mass, kg.
    pub mass: f64,
    pub hbar: f64,
}

impl MicroscopicParams {
    pub fn new(g_m: f64, pump_amplitude: f64, mass: f64) -> Result<Self> {
        Self::with_hbar(g_m, pump_amplitude, mass, HBAR)
    }

    pub fn with_hbar(g_m: f64, pump_amplitude: f64, mass: f64, hbar: f64) -> Result<Self> {
        let mut bad = Vec::new();
        for (field, value) in [("g_m", g_m), ("mass", mass), ("hbar", hbar)] {
            if !(value.is_finite() && value > 0.0) {
                bad.push(format!("{field}: must be finite and > 0, got {value}"));
            }
        }
        // zero pump is the undriven cavity
        if !(pump_amplitude.is_finite() && pump_amplitude >= 0.0) {
            bad.push(format!(
                "pump_amplitude: must be finite and >= 0, got {pump_amplitude}"
            ));
        }
        if !bad.is_empty() {
            return Err(Error::Validation(bad));
        }
        Ok(MicroscopicParams {
            g_m,
            pump_amplitude,
            mass,
            hbar,
        })
    }

    /// Cavity length `L = ω_c / g_m` for a given cavity frequency.
    pub fn cavity_length(&self, omega_c: f64) -> f64 {
        omega_c / self.g_m
    }

    /// `Λ = 2 m ω_m / ħ`.
    pub fn lambda(&self, omega_m: f64) -> f64 {
        2.0 * self.mass * omega_m / self.hbar
    }

    /// `χ_° = ħ g_m`, the radiation-pressure coupling in the mechanical
    /// equation of motion.
    pub fn chi0(&self) -> f64 {
        self.hbar * self.g_m
    }
}
