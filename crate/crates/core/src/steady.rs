//! First-order perturbative steady state of the mean-value equations.
//!
//! Writing each mean value as `s₀ + ε_p e^{-iδt} s₊ + ε_p* e^{iδt} s₋`, the
//! zeroth order gives
//!
//! ```text
//! c₀ = ε_c / (κ + iΔ),  q₀ = χ_° |c₀|² / (m ω_m²)
//! ```
//!
//! and the first order couples `c₊`, `c₋*` and `q₊` through
//! `c₀ c₋* = M/(1-M) c₀* c₊`. The radiation-pressure coupling is taken as
//! `χ_° = ħ g_m`; with this choice `M = β_eff / (A (κ - i(Δ+δ)))` where
//! `A = (δ² - ω_m² + iδγ_m)/(2iω_m)` and `β_eff = g_m² |c₀|² / Λ`, which is the
//! `β` of [`compute_beta`](crate::model::compute_beta) when `Δ = ω_m`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::c_plus_with_beta;
use crate::params::{MicroscopicParams, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub q0: f64,
    pub c0: Complex64,
    pub c_plus: Complex64,
    pub c_minus: Complex64,
    pub q_plus: Complex64,
    /// `q₋` evaluated independently from its own equation; equals `conj(q₊)`.
    pub q_minus: Complex64,
    pub m: Complex64,
    /// `χ_° = ħ g_m`.
    pub chi0: f64,
    /// Effective drive strength `g_m² |c₀|² / Λ`.
    pub beta_eff: f64,
}

impl SteadyState {
    /// Un-approximated probe response `2κ c₊` (probe amplitude normalised to 1).
    pub fn eps_t(&self, params: &SystemParams) -> Complex64 {
        2.0 * params.kappa() * self.c_plus
    }

    /// `|q₊ - conj(q₋)| / |q₊|`, zero for an undriven cavity.
    pub fn conjugate_mismatch(&self) -> f64 {
        let scale = self.q_plus.norm().max(self.q_minus.norm());
        if scale == 0.0 {
            0.0
        } else {
            (self.q_plus - self.q_minus.conj()).norm() / scale
        }
    }
}

/// Solve the steady state at effective detuning `Δ` and probe-pump detuning
/// `δ`.
///
/// `κ`, `ω_m` and `γ_m` come from `params`; the drive strength is derived
/// from `micro` and `Δ`, so `params.beta()` is not used.
pub fn steady_state(
    params: &SystemParams,
    micro: &MicroscopicParams,
    detuning: f64,
    delta: f64,
) -> Result<SteadyState> {
    let k = params.kappa();
    let w = params.omega_m();
    let g = params.gamma_m();
    if !detuning.is_finite() || !delta.is_finite() {
        return Err(Error::domain("detuning", "Delta and delta must be finite"));
    }

    let chi0 = micro.chi0();
    let c0 = micro.pump_amplitude / Complex64::new(k, detuning);
    let c0_sq = c0.norm_sqr();
    let q0 = chi0 * c0_sq / (micro.mass * w * w);

    // m (ω_m² - iδγ_m - δ²), the mechanical response of q₊
    let mech_plus = micro.mass * Complex64::new((w - delta) * (w + delta), -delta * g);
    let mech_minus = mech_plus.conj();
    let counter = Complex64::new(k, -(detuning + delta));

    let m = Complex64::new(0.0, -c0_sq * chi0 * chi0) / (micro.hbar * mech_plus * counter);
    if m == Complex64::new(1.0, 0.0) {
        return Err(Error::DegenerateRelation);
    }

    let beta_eff = micro.g_m * micro.g_m * c0_sq / micro.lambda(w);
    let c_plus = c_plus_with_beta(params, beta_eff, detuning, delta);

    // c₀ c₋* = M/(1-M) c₀* c₊
    let c_minus = if c0_sq == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        (m / (1.0 - m) * c0.conj() * c_plus / c0).conj()
    };

    let q_plus = chi0 * (c0 * c_minus.conj() + c0.conj() * c_plus) / mech_plus;
    let q_minus = chi0 * (c0 * c_plus.conj() + c0.conj() * c_minus) / mech_minus;

    Ok(SteadyState {
        q0,
        c0,
        c_plus,
        c_minus,
        q_plus,
        q_minus,
        m,
        chi0,
        beta_eff,
    })
}
