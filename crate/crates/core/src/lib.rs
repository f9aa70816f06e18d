//! Numerics for optomechanically induced transparency (OMIT) and lateral light
//! drag in a driven optomechanical cavity.
//!
//! The crate is organised bottom-up:
//!
//! * [`params`] holds the validated parameter sets.
//! * [`model`] evaluates the probe response `ε_T(x)` in its resonant and
//!   linearised forms, the transparency pole, and the un-approximated
//!   sideband amplitude `c₊(Δ, δ)`.
//! * [`steady`] solves the perturbative steady state (`q₀`, `c₀`, `c±`, `q±`).
//! * [`optics`] maps the response onto susceptibility, refractive and group
//!   indices and the Fresnel lateral drag.
//! * [`sweep`] runs x-grids over parameter families, including the figure
//!   presets, and locates dips and extrema.
//! * [`selfcheck`] is the embedded invariant suite used by the CLI.
//!
//! All evaluation is pure; sweeps are parallelised with rayon when the
//! `parallel` feature is enabled (the default) and fall back to a serial map
//! otherwise.

pub mod error;
pub mod exec;
pub mod model;
pub mod optics;
pub mod params;
pub mod selfcheck;
pub mod steady;
pub mod sweep;

pub use error::{Error, Result};
pub use exec::Execution;
pub use model::{
    c_plus_full, compute_beta, compute_n, eps_t_linearized, eps_t_resonant, pole_conditions,
    PoleConditions,
};
pub use optics::{
    dchi_dx_analytic, dchi_dx_fd, default_fd_step, group_index, light_drag, refractive_index,
    spectrum_point, susceptibility, DragConfig, DragMode, SpectrumPoint, C_LIGHT,
};
pub use params::{MicroscopicParams, SystemParams, UnitScale, HBAR};
pub use steady::{steady_state, SteadyState};
pub use sweep::{
    extremum_pair, figure_preset, locate_dip, run_sweep, BetaPolicy, Column, Dip, DragSweep,
    Extrema, FigureName, SeriesResult, SweepSpec, Varied, XGrid,
};

pub use num_complex::Complex64;
