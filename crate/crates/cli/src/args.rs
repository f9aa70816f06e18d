//! Command-line surface and its canonical re-serialisation.
//!
//! Every output file echoes an `argv=` line produced by [`Cli::canonical_argv`]:
//! the resolved configuration with every default made explicit and every float
//! in shortest round-trip form, so re-running that line reproduces the file.

use clap::{Args, Parser, Subcommand, ValueEnum};

use optodrag_core::{DragMode, FigureName, UnitScale, Varied};

#[derive(Debug, Clone, Parser, PartialEq)]
#[command(
    name = "optodrag",
    version,
    about = "OMIT response, group index and lateral light drag"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, PartialEq)]
pub enum Command {
    /// Probe response and optical indices over an x-grid.
    #[command(allow_negative_numbers = true)]
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Lateral light drag over x or over medium velocity.
    #[command(allow_negative_numbers = true)]
    Drag {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        drag: DragArgs,
        /// Abscissa of the emitted rows.
        #[arg(long, value_enum, default_value_t = Axis::X)]
        sweep_over: Axis,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Transparency pole conditions and the response there.
    #[command(allow_negative_numbers = true)]
    Poles {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Family of spectra varying one parameter.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Parameter to vary: gamma_m, kappa, omega_m, beta or v.
        #[arg(long, value_parser = parse_varied)]
        vary: Varied,
        /// Comma-separated values of the varied parameter.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        values: Vec<f64>,
        /// Medium length in metres; enables drag columns.
        #[arg(long)]
        length: Option<f64>,
        /// Medium velocity for the drag columns, m/s.
        #[arg(long, allow_hyphen_values = true)]
        v: Option<f64>,
        #[arg(long, value_enum)]
        drag_mode: Option<DragModeArg>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Parameter family behind one of the figures (fig2 ... fig8).
    #[command(allow_negative_numbers = true)]
    Figure {
        #[arg(value_parser = parse_figure)]
        name: FigureName,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        omega_probe: Option<f64>,
        /// Medium length in metres (drag figures).
        #[arg(long)]
        length: Option<f64>,
        #[arg(long, value_enum)]
        drag_mode: Option<DragModeArg>,
        /// Abscissa of drag rows in CSV output.
        #[arg(long, value_enum, default_value_t = Axis::X)]
        sweep_over: Axis,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the embedded invariant suite.
    Selfcheck {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Clone, Args, PartialEq)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 1e4)]
    pub kappa: f64,
    #[arg(long, default_value_t = 1e4)]
    pub omega_m: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma_m: f64,
    /// Drive strength; defaults to the ideal-transparency value.
    #[arg(long, conflicts_with = "beta_ideal")]
    pub beta: Option<f64>,
    /// Set beta to the ideal-transparency value of each parameter set.
    #[arg(long)]
    pub beta_ideal: bool,
    #[arg(long, value_enum, default_value_t = UnitsArg::GammaM)]
    pub units: UnitsArg,
}

#[derive(Debug, Clone, Args, PartialEq)]
pub struct GridArgs {
    /// Defaults to -3 gamma_m.
    #[arg(long, allow_hyphen_values = true)]
    pub x_min: Option<f64>,
    /// Defaults to +3 gamma_m.
    #[arg(long, allow_hyphen_values = true)]
    pub x_max: Option<f64>,
    #[arg(long, default_value_t = 2001)]
    pub points: usize,
    /// Probe angular frequency in the group-index term; defaults to 1e4 omega_m.
    #[arg(long)]
    pub omega_probe: Option<f64>,
}

#[derive(Debug, Clone, Args, PartialEq)]
pub struct DragArgs {
    /// Medium velocity for x-rows, m/s.
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub v: f64,
    /// Medium length, m.
    #[arg(long)]
    pub length: f64,
    #[arg(long, value_enum, default_value_t = DragModeArg::RealParts)]
    pub drag_mode: DragModeArg,
    /// Velocities for v-rows.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub v_values: Option<Vec<f64>>,
    /// Probe offset for v-rows; defaults to 0.3 gamma_m.
    #[arg(long, allow_hyphen_values = true)]
    pub x_at: Option<f64>,
}

#[derive(Debug, Clone, Args, PartialEq)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    X,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitsArg {
    GammaM,
    RadPerSecond,
}

impl From<UnitsArg> for UnitScale {
    fn from(u: UnitsArg) -> Self {
        match u {
            UnitsArg::GammaM => UnitScale::GammaM,
            UnitsArg::RadPerSecond => UnitScale::RadPerSecond,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DragModeArg {
    RealParts,
    ComplexThenReal,
}

impl From<DragModeArg> for DragMode {
    fn from(m: DragModeArg) -> Self {
        match m {
            DragModeArg::RealParts => DragMode::RealParts,
            DragModeArg::ComplexThenReal => DragMode::ComplexThenReal,
        }
    }
}

fn parse_varied(s: &str) -> Result<Varied, String> {
    s.parse().map_err(|e: optodrag_core::Error| e.to_string())
}

fn parse_figure(s: &str) -> Result<FigureName, String> {
    s.parse().map_err(|e: optodrag_core::Error| e.to_string())
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

/// Shortest round-trip decimal form.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

fn list(values: &[f64]) -> String {
    values.iter().map(|v| num(*v)).collect::<Vec<_>>().join(",")
}

impl ParamArgs {
    fn push(&self, argv: &mut Vec<String>) {
        self.push_with(argv, false)
    }

    /// `implicit_beta` leaves an unset beta unspecified rather than ideal,
    /// for sweeps that vary beta themselves.
    fn push_with(&self, argv: &mut Vec<String>, implicit_beta: bool) {
        argv.extend([
            "--kappa".into(),
            num(self.kappa),
            "--omega-m".into(),
            num(self.omega_m),
            "--gamma-m".into(),
            num(self.gamma_m),
        ]);
        match self.beta {
            Some(b) => argv.extend(["--beta".into(), num(b)]),
            None if implicit_beta && !self.beta_ideal => {}
            None => argv.push("--beta-ideal".into()),
        }
        argv.extend(["--units".into(), value_name(&self.units)]);
    }
}

impl GridArgs {
    pub fn resolved_bounds(&self, gamma_m: f64) -> (f64, f64) {
        (
            self.x_min.unwrap_or(-3.0 * gamma_m),
            self.x_max.unwrap_or(3.0 * gamma_m),
        )
    }

    pub fn resolved_omega_probe(&self, omega_m: f64) -> f64 {
        self.omega_probe.unwrap_or(1e4 * omega_m)
    }

    fn push(&self, argv: &mut Vec<String>, params: &ParamArgs) {
        let (lo, hi) = self.resolved_bounds(params.gamma_m);
        argv.extend([
            "--x-min".into(),
            num(lo),
            "--x-max".into(),
            num(hi),
            "--points".into(),
            self.points.to_string(),
            "--omega-probe".into(),
            num(self.resolved_omega_probe(params.omega_m)),
        ]);
    }
}

pub const DEFAULT_V_VALUES: [f64; 17] = [
    -4.0, -3.5, -3.0, -2.5, -2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0,
];

impl DragArgs {
    pub fn resolved_v_values(&self) -> Vec<f64> {
        self.v_values
            .clone()
            .unwrap_or_else(|| DEFAULT_V_VALUES.to_vec())
    }

    pub fn resolved_x_at(&self, gamma_m: f64) -> f64 {
        self.x_at.unwrap_or(0.3 * gamma_m)
    }

    fn push(&self, argv: &mut Vec<String>, params: &ParamArgs) {
        argv.extend([
            "--v".into(),
            num(self.v),
            "--length".into(),
            num(self.length),
            "--drag-mode".into(),
            value_name(&self.drag_mode),
            "--v-values".into(),
            list(&self.resolved_v_values()),
            "--x-at".into(),
            num(self.resolved_x_at(params.gamma_m)),
        ]);
    }
}

fn join_values(tokens: Vec<String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(tokens.len());
    for t in tokens {
        match out.last_mut() {
            Some(flag) if flag.starts_with("--") && !flag.contains('=') && !t.starts_with("--") => {
                if FLAGS_WITHOUT_VALUE.contains(&flag.as_str()) {
                    out.push(t);
                } else {
                    flag.push('=');
                    flag.push_str(&t);
                }
            }
            _ => out.push(t),
        }
    }
    out
}

const FLAGS_WITHOUT_VALUE: [&str; 1] = ["--beta-ideal"];

impl Cli {
    /// Canonical argument vector (without program name and `--out`).
    ///
    /// Valued flags are joined as `--flag=value`, which parses regardless of
    /// a leading minus sign.
    pub fn canonical_argv(&self) -> Vec<String> {
        join_values(self.split_argv())
    }

    fn split_argv(&self) -> Vec<String> {
        let mut argv = Vec::new();
        match &self.command {
            Command::Spectrum { params, grid, out } => {
                argv.push("spectrum".into());
                params.push(&mut argv);
                grid.push(&mut argv, params);
                argv.extend(["--format".into(), value_name(&out.format)]);
            }
            Command::Drag {
                params,
                grid,
                drag,
                sweep_over,
                out,
            } => {
                argv.push("drag".into());
                params.push(&mut argv);
                grid.push(&mut argv, params);
                drag.push(&mut argv, params);
                argv.extend([
                    "--sweep-over".into(),
                    value_name(sweep_over),
                    "--format".into(),
                    value_name(&out.format),
                ]);
            }
            Command::Poles { params, out } => {
                argv.push("poles".into());
                params.push(&mut argv);
                argv.extend(["--format".into(), value_name(&out.format)]);
            }
            Command::Sweep {
                params,
                grid,
                vary,
                values,
                length,
                v,
                drag_mode,
                out,
            } => {
                argv.push("sweep".into());
                params.push_with(&mut argv, *vary == Varied::Beta);
                grid.push(&mut argv, params);
                argv.extend([
                    "--vary".into(),
                    vary.as_str().into(),
                    "--values".into(),
                    list(values),
                ]);
                if let Some(l) = length {
                    argv.extend(["--length".into(), num(*l)]);
                    argv.extend(["--v".into(), num(v.unwrap_or(2.0))]);
                    argv.extend([
                        "--drag-mode".into(),
                        value_name(&drag_mode.unwrap_or(DragModeArg::RealParts)),
                    ]);
                }
                argv.extend(["--format".into(), value_name(&out.format)]);
            }
            Command::Figure {
                name,
                points,
                omega_probe,
                length,
                drag_mode,
                sweep_over,
                out,
            } => {
                let preset = optodrag_core::figure_preset(*name);
                argv.extend(["figure".into(), name.as_str().into()]);
                argv.extend([
                    "--points".into(),
                    points.unwrap_or(preset.grid.points).to_string(),
                    "--omega-probe".into(),
                    num(omega_probe.unwrap_or(preset.omega_probe)),
                ]);
                if let Some(d) = &preset.drag {
                    argv.extend([
                        "--length".into(),
                        num(length.unwrap_or(d.length)),
                        "--drag-mode".into(),
                        value_name(&drag_mode.unwrap_or(DragModeArg::RealParts)),
                        "--sweep-over".into(),
                        value_name(sweep_over),
                    ]);
                }
                argv.extend(["--format".into(), value_name(&out.format)]);
            }
            Command::Selfcheck { format } => {
                argv.extend(["selfcheck".into(), "--format".into(), value_name(format)]);
            }
        }
        argv
    }

    pub fn output(&self) -> Option<&OutputArgs> {
        match &self.command {
            Command::Spectrum { out, .. }
            | Command::Drag { out, .. }
            | Command::Poles { out, .. }
            | Command::Sweep { out, .. }
            | Command::Figure { out, .. } => Some(out),
            Command::Selfcheck { .. } => None,
        }
    }
}
