//! Closed-form probe response of the driven optomechanical cavity.
//!
//! With probe offset `x = δ - ω_m` and drive strength `β`, the transmitted
//! probe quadrature is
//!
//! ```text
//! ε_T(x) = 2κ / (κ - ix + β / (γ_m/2 - ix + N)),    N = -β / (κ - 2iω_m)
//! ```
//!
//! `N` is the correction retained by the perturbative solution; dropping it
//! gives the linearised response. The subfraction has a zero on the real axis
//! exactly when `β = β₀` and `x = x₀`, where the response vanishes (ideal
//! transparency).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{MicroscopicParams, SystemParams};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A nested denominator whose modulus is at most this many ulps of the sum of
/// its terms' moduli is an exact zero up to rounding.
const POLE_ULPS: f64 = 8.0;

/// Absolute floor for the pole test.
const POLE_FLOOR: f64 = 1e-300;

/// `(x₀, β₀)` at which the response subfraction has a real pole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleConditions {
    pub x0: f64,
    pub beta0: f64,
}

pub(crate) fn is_pole(denominator: Complex64, scale: f64) -> bool {
    let m = denominator.norm();
    m <= POLE_FLOOR || m <= POLE_ULPS * f64::EPSILON * scale
}

/// `β = g_m² ε_°² / (Λ (κ² + ω_m²))` with `Λ = 2 m ω_m / ħ`.
pub fn compute_beta(micro: &MicroscopicParams, kappa: f64, omega_m: f64) -> Result<f64> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::domain("kappa", format!("must be > 0, got {kappa}")));
    }
    if !(omega_m.is_finite() && omega_m > 0.0) {
        return Err(Error::domain(
            "omega_m",
            format!("must be > 0, got {omega_m}"),
        ));
    }
    let g = micro.g_m;
    let e = micro.pump_amplitude;
    Ok(g * g * (e * e) / (micro.lambda(omega_m) * (kappa * kappa + omega_m * omega_m)))
}

/// `N = -β / (κ - 2iω_m)`.
pub fn compute_n(params: &SystemParams) -> Complex64 {
    let k = params.kappa();
    let w = params.omega_m();
    let b = params.beta();
    // -β (κ + 2iω_m) / (κ² + 4ω_m²)
    let d = k * k + 4.0 * w * w;
    Complex64::new(-(b * k) / d, -(2.0 * w * b) / d)
}

/// Response with an explicit subfraction correction `n`; `n = N` gives the
/// resonant response and `n = 0` the linearised one.
pub fn response_with_n(params: &SystemParams, x: f64, n: Complex64) -> Complex64 {
    let k = params.kappa();
    let cavity = Complex64::new(k, -x);
    let beta = params.beta();
    if beta == 0.0 {
        return 2.0 * k / cavity;
    }
    let half_gamma = params.gamma_m() / 2.0;
    let sub = Complex64::new(half_gamma, -x) + n;
    if is_pole(sub, half_gamma + x.abs() + n.norm()) {
        return ZERO;
    }
    let d = cavity + beta / sub;
    if !d.is_finite() {
        return ZERO;
    }
    2.0 * k / d
}

/// Whether `x` sits on the handled pole of the resonant subfraction.
pub fn at_pole(params: &SystemParams, x: f64) -> bool {
    if params.beta() == 0.0 {
        return false;
    }
    let n = compute_n(params);
    let half_gamma = params.gamma_m() / 2.0;
    let sub = Complex64::new(half_gamma, -x) + n;
    is_pole(sub, half_gamma + x.abs() + n.norm())
}

/// Resonant response `ε_T(x)`, returning exactly zero on the subfraction pole.
pub fn eps_t_resonant(params: &SystemParams, x: f64) -> Complex64 {
    response_with_n(params, x, compute_n(params))
}

/// Response of the linearised equations (no `N` in the subfraction).
pub fn eps_t_linearized(params: &SystemParams, x: f64) -> Complex64 {
    response_with_n(params, x, ZERO)
}

/// Roots of `γ_m/2 - ix + N = 0`.
///
/// The real part fixes `β₀ = γ_m (4ω_m² + κ²) / 2κ`; with that `β` the
/// imaginary part vanishes at `x₀ = -ω_m γ_m / κ`.
pub fn pole_conditions(params: &SystemParams) -> PoleConditions {
    let k = params.kappa();
    let w = params.omega_m();
    let g = params.gamma_m();
    PoleConditions {
        x0: -(w * g) / k,
        beta0: g * (4.0 * w * w + k * k) / (2.0 * k),
    }
}

/// Un-approximated sideband amplitude
///
/// ```text
/// c₊ = 1 / (κ + i(Δ-δ) + β / ((δ² - ω_m² + iδγ_m)/(2iω_m) - β/(κ - i(Δ+δ))))
/// ```
///
/// `2κ c₊` reduces to [`eps_t_resonant`] for `Δ = ω_m`, `δ = ω_m + x`,
/// `|x| ≪ ω_m`.
pub fn c_plus_full(params: &SystemParams, detuning: f64, delta: f64) -> Complex64 {
    c_plus_with_beta(params, params.beta(), detuning, delta)
}

pub(crate) fn c_plus_with_beta(
    params: &SystemParams,
    beta: f64,
    detuning: f64,
    delta: f64,
) -> Complex64 {
    let k = params.kappa();
    let w = params.omega_m();
    let g = params.gamma_m();
    let outer = Complex64::new(k, detuning - delta);
    if beta == 0.0 {
        return 1.0 / outer;
    }
    // (δ² - ω_m²) evaluated as a product to avoid cancellation near δ ≈ ω_m
    let mech = Complex64::new((delta - w) * (delta + w), delta * g) / Complex64::new(0.0, 2.0 * w);
    let counter = Complex64::new(k, -(detuning + delta));
    let back = beta / counter;
    let inner = mech - back;
    if is_pole(inner, mech.norm() + back.norm()) {
        return ZERO;
    }
    let d = outer + beta / inner;
    if !d.is_finite() {
        return ZERO;
    }
    1.0 / d
}
