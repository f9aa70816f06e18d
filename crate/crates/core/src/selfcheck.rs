//! Embedded invariant suite: derivative cross-check, agreement of the full
//! sideband model with the resonant form, transparency at the pole, and sideband
//! conjugate pairing.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::model::{c_plus_full, compute_n, pole_conditions, response_with_n};
use crate::optics::{dchi_dx_analytic, dchi_dx_fd, default_fd_step};
use crate::params::{MicroscopicParams, SystemParams, UnitScale};
use crate::steady::steady_state;

pub const DERIVATIVE_TOLERANCE: f64 = 1e-6;
pub const FULL_MODEL_TOLERANCE: f64 = 1e-3;
pub const CONJUGATE_TOLERANCE: f64 = 1e-12;
/// `|ε_T(x₀ ± 1e-6 γ_m)|` relative to `|ε_T(3 γ_m)|`.
pub const POLE_NEIGHBOUR_TOLERANCE: f64 = 1e-4;

const SEED: u64 = 0x0D1F_7A55;

/// Parameter box for randomized draws, in `γ_m = 1` units: OMIT regime with
/// `κ, ω_m ∈ [3e3, 3e4]`, `γ_m ∈ [0.25, 4]`, `β ∈ [0.25, 2] β₀` and
/// `x ∈ [-5, 5] γ_m` around the transparency window.
#[derive(Debug, Clone, Copy)]
pub struct DrawDomain {
    pub log10_rate: (f64, f64),
    pub gamma_m: (f64, f64),
    pub beta_over_beta0: (f64, f64),
    pub x_over_gamma: (f64, f64),
}

impl Default for DrawDomain {
    fn default() -> Self {
        DrawDomain {
            log10_rate: (3.5, 4.5),
            gamma_m: (0.25, 4.0),
            beta_over_beta0: (0.25, 2.0),
            x_over_gamma: (-5.0, 5.0),
        }
    }
}

impl DrawDomain {
    pub fn draw(&self, rng: &mut impl Rng) -> (SystemParams, f64) {
        let kappa = 10f64.powf(rng.gen_range(self.log10_rate.0..self.log10_rate.1));
        let omega_m = 10f64.powf(rng.gen_range(self.log10_rate.0..self.log10_rate.1));
        let gamma_m = rng.gen_range(self.gamma_m.0..self.gamma_m.1);
        let p = SystemParams::new(kappa, omega_m, gamma_m, 0.0, UnitScale::GammaM)
            .expect("domain is valid");
        let beta0 = pole_conditions(&p).beta0;
        let beta = beta0 * rng.gen_range(self.beta_over_beta0.0..self.beta_over_beta0.1);
        let x = gamma_m * rng.gen_range(self.x_over_gamma.0..self.x_over_gamma.1);
        (p.with_beta(beta).expect("beta >= 0"), x)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfcheckReport {
    pub checks: Vec<CheckResult>,
    pub elapsed_seconds: f64,
}

impl SelfcheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Worst relative gap between analytic and central-difference `dχ/dx` over
/// `draws` seeded samples of `domain`, at the default step.
pub fn derivative_max_rel_error(domain: &DrawDomain, draws: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..draws)
        .map(|_| {
            let (p, x) = domain.draw(&mut rng);
            let an = dchi_dx_analytic(&p, x);
            let fd = dchi_dx_fd(&p, x, default_fd_step(&p, x)).expect("default step is positive");
            (an - fd).norm() / an.norm()
        })
        .fold(0.0, f64::max)
}

/// Pointwise and scale-normalised gaps between `2κ c₊(Δ=ω_m, δ=ω_m+x)` and
/// the resonant response built with the correction `n_term`.
#[derive(Debug, Clone, Copy)]
pub struct FullModelGap {
    /// `max_x |a - b| / |b|`; infinite where the resonant response vanishes.
    pub pointwise: f64,
    /// `max_x |a - b| / max_x |b|`.
    pub normalised: f64,
    pub max_abs: f64,
}

pub fn full_model_gap(
    params: &SystemParams,
    half_width: f64,
    points: usize,
    n_term: impl Fn(&SystemParams) -> Complex64,
) -> FullModelGap {
    let n = n_term(params);
    let w = params.omega_m();
    let mut pointwise = 0.0f64;
    let mut max_abs = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..points {
        let x = -half_width + 2.0 * half_width * (i as f64 / (points - 1) as f64);
        let res = response_with_n(params, x, n);
        let full = 2.0 * params.kappa() * c_plus_full(params, w, w + x);
        let gap = (full - res).norm();
        let r = if res.norm() == 0.0 {
            if gap == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            gap / res.norm()
        };
        pointwise = pointwise.max(r);
        max_abs = max_abs.max(gap);
        scale = scale.max(res.norm());
    }
    FullModelGap {
        pointwise,
        normalised: max_abs / scale,
        max_abs,
    }
}

fn fig2_base() -> SystemParams {
    SystemParams::new(1e4, 1e4, 1.0, 0.0, UnitScale::GammaM)
        .expect("static params")
        .with_ideal_beta()
}

/// Run the suite with `N` supplied by `n_term`; [`compute_n`] for the real
/// model, anything else to verify that the suite catches a broken model.
pub fn run_with(n_term: impl Fn(&SystemParams) -> Complex64 + Copy) -> SelfcheckReport {
    let start = Instant::now();
    let mut checks = Vec::new();

    let measured = derivative_max_rel_error(&DrawDomain::default(), 1000, SEED);
    checks.push(CheckResult {
        name: "derivative-cross-check",
        passed: measured < DERIVATIVE_TOLERANCE,
        measured,
        tolerance: DERIVATIVE_TOLERANCE,
        detail: "max |analytic - central difference| / |analytic|, 1000 seeded draws".into(),
    });

    let base = fig2_base();
    let gap = full_model_gap(&base, 5.0, 2001, n_term);
    checks.push(CheckResult {
        name: "full-model-equivalence",
        passed: gap.normalised < FULL_MODEL_TOLERANCE,
        measured: gap.normalised,
        tolerance: FULL_MODEL_TOLERANCE,
        detail: format!(
            "max |2k c+ - eps_T| / max |eps_T| over |x| <= 5, 2001 points (max abs gap {:e})",
            gap.max_abs
        ),
    });

    let x0 = pole_conditions(&base).x0;
    let n = n_term(&base);
    let at = response_with_n(&base, x0, n).norm();
    let far = response_with_n(&base, 3.0, n).norm();
    let near = response_with_n(&base, x0 + 1e-6, n)
        .norm()
        .max(response_with_n(&base, x0 - 1e-6, n).norm());
    let measured = near / far;
    checks.push(CheckResult {
        name: "pole-transparency",
        passed: at == 0.0 && measured < POLE_NEIGHBOUR_TOLERANCE,
        measured,
        tolerance: POLE_NEIGHBOUR_TOLERANCE,
        detail: format!("|eps_T(x0)| = {at:e}; ratio |eps_T(x0 +- 1e-6)| / |eps_T(3)|"),
    });

    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xC0);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let p = SystemParams::new(
            10f64.powf(rng.gen_range(3.0..5.0)),
            10f64.powf(rng.gen_range(3.0..5.0)),
            rng.gen_range(0.1..5.0),
            0.0,
            UnitScale::GammaM,
        )
        .expect("valid draw");
        let micro = MicroscopicParams::new(
            rng.gen_range(1.0..1e3),
            10f64.powf(rng.gen_range(3.0..18.0)),
            10f64.powf(rng.gen_range(-15.0..-9.0)),
        )
        .expect("valid draw");
        let detuning = p.omega_m() * rng.gen_range(0.5..1.5);
        let delta = p.omega_m() + rng.gen_range(-10.0..10.0);
        if let Ok(s) = steady_state(&p, &micro, detuning, delta) {
            worst = worst.max(s.conjugate_mismatch());
        } else {
            worst = f64::INFINITY;
        }
    }
    checks.push(CheckResult {
        name: "conjugate-pairing",
        passed: worst < CONJUGATE_TOLERANCE,
        measured: worst,
        tolerance: CONJUGATE_TOLERANCE,
        detail: "max |q+ - conj(q-)| / |q+| over 200 seeded steady states".into(),
    });

    SelfcheckReport {
        checks,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run() -> SelfcheckReport {
    run_with(compute_n)
}
