//! Command execution: argument model in, rendered document out.

use std::io::Write;

use clap::Parser;
use serde_json::json;

use optodrag_core::selfcheck::{self, SelfcheckReport};
use optodrag_core::{
    eps_t_resonant, figure_preset, pole_conditions, run_sweep, BetaPolicy, DragMode, DragSweep,
    Error, Execution, SeriesResult, SpectrumPoint, SweepSpec, SystemParams, Varied, XGrid, C_LIGHT,
};

use crate::args::{num, Axis, Cli, Command, DragModeArg, Format, GridArgs, ParamArgs};
use crate::emit::{Cell, Document, Series};
use crate::{CliError, EXIT_OK};

pub const SPECTRUM_COLUMNS: [&str; 12] = [
    "x",
    "re_eps_t",
    "im_eps_t",
    "re_chi",
    "im_chi",
    "re_n_r",
    "im_n_r",
    "re_dchi_dx",
    "im_dchi_dx",
    "re_n_g",
    "im_n_g",
    "at_pole",
];

fn spectrum_cells(pt: &SpectrumPoint) -> Vec<Cell> {
    let mut row: Vec<Cell> = [
        pt.x,
        pt.eps_t.re,
        pt.eps_t.im,
        pt.chi.re,
        pt.chi.im,
        pt.n_r.re,
        pt.n_r.im,
        pt.dchi_dx.re,
        pt.dchi_dx.im,
        pt.n_g.re,
        pt.n_g.im,
    ]
    .into_iter()
    .map(Cell::Num)
    .collect();
    row.push(Cell::Flag(pt.at_pole));
    row
}

/// Merge every failure into one validation error so the user sees all bad
/// fields at once.
fn gather(errors: Vec<Error>) -> Error {
    let mut messages = Vec::new();
    for e in errors {
        match e {
            Error::Validation(v) => messages.extend(v),
            other => messages.push(other.to_string()),
        }
    }
    Error::Validation(messages)
}

fn base_params(p: &ParamArgs) -> Result<(SystemParams, BetaPolicy), Error> {
    let params = SystemParams::new(
        p.kappa,
        p.omega_m,
        p.gamma_m,
        p.beta.unwrap_or(0.0),
        p.units.into(),
    )?;
    Ok(match p.beta {
        Some(_) => (params, BetaPolicy::Fixed),
        None => (params.with_ideal_beta(), BetaPolicy::Ideal),
    })
}

fn build_spec(
    p: &ParamArgs,
    grid: &GridArgs,
    varied: Varied,
    values: Vec<f64>,
    drag: Option<DragSweep>,
) -> Result<SweepSpec, Error> {
    let (lo, hi) = grid.resolved_bounds(p.gamma_m);
    let mut errors = Vec::new();
    let base = base_params(p).map_err(|e| errors.push(e)).ok();
    let xgrid = XGrid::new(lo, hi, grid.points)
        .map_err(|e| errors.push(e))
        .ok();
    let (Some((base, mut policy)), Some(xgrid)) = (base, xgrid) else {
        return Err(gather(errors));
    };
    if varied == Varied::Beta && !p.beta_ideal {
        // varying beta replaces it; only an explicit --beta-ideal conflicts
        policy = BetaPolicy::Fixed;
    }
    let spec = SweepSpec {
        base,
        varied,
        values,
        grid: xgrid,
        beta_policy: policy,
        omega_probe: grid.resolved_omega_probe(p.omega_m),
        drag,
    };
    spec.validate()?;
    Ok(spec)
}

fn meta_for(spec: &SweepSpec, command: &str) -> Vec<(String, String)> {
    let mut meta = vec![
        ("command".to_string(), command.to_string()),
        ("units".to_string(), spec.base.units().as_str().to_string()),
        (
            "beta_policy".to_string(),
            spec.beta_policy.as_str().to_string(),
        ),
        ("omega_probe".to_string(), num(spec.omega_probe)),
        ("x_min".to_string(), num(spec.grid.min)),
        ("x_max".to_string(), num(spec.grid.max)),
        ("points".to_string(), spec.grid.points.to_string()),
    ];
    if let Some(d) = &spec.drag {
        meta.extend([
            ("v".to_string(), num(d.velocity)),
            ("length".to_string(), num(d.length)),
            ("c_light".to_string(), num(d.c_light)),
            ("drag_mode".to_string(), d.mode.as_str().to_string()),
            ("drag_unit".to_string(), "m".to_string()),
            ("x_at".to_string(), num(d.v_probe_x)),
        ]);
    }
    meta
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Rows {
    Spectrum,
    SpectrumWithDrag,
    DragX,
    DragV,
}

fn series_block(s: &SeriesResult, rows: Rows, labelled: bool) -> Series {
    let (columns, body): (Vec<&str>, Vec<Vec<Cell>>) = match rows {
        Rows::Spectrum => (
            SPECTRUM_COLUMNS.to_vec(),
            s.points.iter().map(spectrum_cells).collect(),
        ),
        Rows::SpectrumWithDrag => {
            let mut cols = SPECTRUM_COLUMNS.to_vec();
            cols.extend(["dx", "singular"]);
            let body = s
                .points
                .iter()
                .zip(&s.drag_x)
                .map(|(pt, d)| {
                    let mut row = spectrum_cells(pt);
                    row.extend([Cell::Num(d.displacement), Cell::Flag(d.singular)]);
                    row
                })
                .collect();
            (cols, body)
        }
        Rows::DragX => (
            vec!["x", "re_n_r", "re_n_g", "dx", "singular"],
            s.points
                .iter()
                .zip(&s.drag_x)
                .map(|(pt, d)| {
                    vec![
                        Cell::Num(pt.x),
                        Cell::Num(pt.n_r.re),
                        Cell::Num(pt.n_g.re),
                        Cell::Num(d.displacement),
                        Cell::Flag(d.singular),
                    ]
                })
                .collect(),
        ),
        Rows::DragV => (
            vec!["v", "dx", "singular"],
            s.drag_v
                .iter()
                .map(|d| {
                    vec![
                        Cell::Num(d.abscissa),
                        Cell::Num(d.displacement),
                        Cell::Flag(d.singular),
                    ]
                })
                .collect(),
        ),
    };
    let mut extra = Vec::new();
    if let (Some(d), Varied::Velocity) = (&s.drag, s.varied) {
        extra.push(("v".to_string(), num(d.velocity)));
    }
    Series {
        label: labelled.then(|| (s.varied.as_str().to_string(), s.value)),
        params: s.params,
        extra,
        columns: columns.into_iter().map(String::from).collect(),
        rows: body,
    }
}

fn render(doc: &Document, format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => Ok(doc.to_csv()),
        Format::Json => Ok(doc.to_json()),
        Format::Text => Err(CliError::Usage(
            "format: text is only available for poles and selfcheck".into(),
        )),
    }
}

fn drag_sweep(
    velocity: f64,
    length: f64,
    mode: DragMode,
    v_values: Vec<f64>,
    v_probe_x: f64,
) -> DragSweep {
    DragSweep {
        velocity,
        length,
        c_light: C_LIGHT,
        mode,
        v_values,
        v_probe_x,
    }
}

/// Run `cli` and return the rendered output.
///
/// A failed selfcheck still renders its report; it is carried in
/// [`CliError::SelfcheckFailed`].
pub fn execute(cli: &Cli, exec: Execution) -> Result<String, CliError> {
    let argv = cli.canonical_argv();
    match &cli.command {
        Command::Spectrum { params, grid, out } => {
            let spec = build_spec(params, grid, Varied::GammaM, vec![params.gamma_m], None)?;
            let results = run_sweep(&spec, exec)?;
            let doc = Document {
                argv,
                meta: meta_for(&spec, "spectrum"),
                series: vec![series_block(&results[0], Rows::Spectrum, false)],
            };
            render(&doc, out.format)
        }
        Command::Drag {
            params,
            grid,
            drag,
            sweep_over,
            out,
        } => {
            let d = drag_sweep(
                drag.v,
                drag.length,
                drag.drag_mode.into(),
                drag.resolved_v_values(),
                drag.resolved_x_at(params.gamma_m),
            );
            let spec = build_spec(params, grid, Varied::GammaM, vec![params.gamma_m], Some(d))?;
            let results = run_sweep(&spec, exec)?;
            let rows = match sweep_over {
                Axis::X => Rows::DragX,
                Axis::V => Rows::DragV,
            };
            let mut meta = meta_for(&spec, "drag");
            meta.push((
                "sweep_over".into(),
                if rows == Rows::DragX { "x" } else { "v" }.into(),
            ));
            let doc = Document {
                argv,
                meta,
                series: vec![series_block(&results[0], rows, false)],
            };
            render(&doc, out.format)
        }
        Command::Poles { params, out } => {
            let (p, policy) = base_params(params)?;
            poles(argv, &p, policy, out.format)
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
            let drag = length.map(|l| {
                drag_sweep(
                    v.unwrap_or(2.0),
                    l,
                    drag_mode.unwrap_or(DragModeArg::RealParts).into(),
                    Vec::new(),
                    0.0,
                )
            });
            let has_drag = drag.is_some();
            let spec = build_spec(params, grid, *vary, values.clone(), drag)?;
            let results = run_sweep(&spec, exec)?;
            let rows = if has_drag {
                Rows::SpectrumWithDrag
            } else {
                Rows::Spectrum
            };
            let mut meta = meta_for(&spec, "sweep");
            meta.push(("vary".into(), vary.as_str().into()));
            let doc = Document {
                argv,
                meta,
                series: results
                    .iter()
                    .map(|s| series_block(s, rows, true))
                    .collect(),
            };
            render(&doc, out.format)
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
            let mut spec = figure_preset(*name);
            if let Some(n) = points {
                spec.grid.points = *n;
            }
            if let Some(w) = omega_probe {
                spec.omega_probe = *w;
            }
            if let Some(d) = spec.drag.as_mut() {
                if let Some(l) = length {
                    d.length = *l;
                }
                if let Some(m) = drag_mode {
                    d.mode = (*m).into();
                }
            }
            let results = run_sweep(&spec, exec)?;
            let rows = match (spec.drag.is_some(), sweep_over) {
                (false, _) => Rows::Spectrum,
                (true, Axis::X) => Rows::SpectrumWithDrag,
                (true, Axis::V) => Rows::DragV,
            };
            let mut meta = vec![("figure".to_string(), name.as_str().to_string())];
            meta.extend(meta_for(&spec, "figure"));
            meta.push(("vary".into(), spec.varied.as_str().into()));
            if spec.drag.is_some() {
                meta.push((
                    "sweep_over".into(),
                    if rows == Rows::DragV { "v" } else { "x" }.into(),
                ));
            }
            let doc = Document {
                argv,
                meta,
                series: results
                    .iter()
                    .map(|s| series_block(s, rows, true))
                    .collect(),
            };
            render(&doc, out.format)
        }
        Command::Selfcheck { format } => {
            let report = selfcheck::run();
            let body = selfcheck_body(&report, *format)?;
            if report.passed() {
                Ok(body)
            } else {
                Err(CliError::SelfcheckFailed(body))
            }
        }
    }
}

fn poles(
    argv: Vec<String>,
    p: &SystemParams,
    policy: BetaPolicy,
    format: Format,
) -> Result<String, CliError> {
    let pc = pole_conditions(p);
    let ideal = p.with_ideal_beta();
    let at_ideal = eps_t_resonant(&ideal, pc.x0).norm();
    let at_beta = eps_t_resonant(p, pc.x0).norm();
    if format == Format::Text {
        return Ok(format!(
            "# argv={}\nx0 = {}\nbeta0 = {}\n|eps_T(x0; beta0)| = {}\nbeta = {}\n|eps_T(x0; beta)| = {}\n",
            argv.join(" "),
            num(pc.x0),
            num(pc.beta0),
            num(at_ideal),
            num(p.beta()),
            num(at_beta)
        ));
    }
    let doc = Document {
        argv,
        meta: vec![
            ("command".into(), "poles".into()),
            ("units".into(), p.units().as_str().into()),
            ("beta_policy".into(), policy.as_str().into()),
        ],
        series: vec![Series {
            label: None,
            params: *p,
            extra: Vec::new(),
            columns: ["x0", "beta0", "abs_eps_t_x0_beta0", "abs_eps_t_x0_beta"]
                .map(String::from)
                .to_vec(),
            rows: vec![[pc.x0, pc.beta0, at_ideal, at_beta].map(Cell::Num).to_vec()],
        }],
    };
    render(&doc, format)
}

fn selfcheck_body(report: &SelfcheckReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Text | Format::Csv => {
            let mut s = String::new();
            if format == Format::Csv {
                s.push_str("check,passed,measured,tolerance\n");
                for c in &report.checks {
                    s.push_str(&format!(
                        "{},{},{},{}\n",
                        c.name,
                        u8::from(c.passed),
                        num(c.measured),
                        num(c.tolerance)
                    ));
                }
                return Ok(s);
            }
            for c in &report.checks {
                s.push_str(&format!(
                    "{} {}: measured {:e}, tolerance {:e} ({})\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.measured,
                    c.tolerance,
                    c.detail
                ));
            }
            s.push_str(&format!(
                "{} in {:.2} s\n",
                if report.passed() {
                    "all checks passed"
                } else {
                    "selfcheck FAILED"
                },
                report.elapsed_seconds
            ));
            Ok(s)
        }
        Format::Json => {
            let checks: Vec<_> = report
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "passed": c.passed,
                        "measured": c.measured,
                        "tolerance": c.tolerance,
                        "detail": c.detail,
                    })
                })
                .collect();
            let mut s = json!({
                "passed": report.passed(),
                "elapsed_seconds": report.elapsed_seconds,
                "checks": checks,
            })
            .to_string();
            s.push('\n');
            Ok(s)
        }
    }
}

/// Full binary behaviour: parse, execute, write, report. Returns the exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let err = CliError::Usage(e.to_string().trim().to_string());
            let _ = writeln!(stderr, "{}", err.to_json());
            return err.exit_code();
        }
    };
    let (body, failure) = match execute(&cli, Execution::default()) {
        Ok(body) => (body, None),
        Err(CliError::SelfcheckFailed(body)) => (
            body,
            Some(CliError::SelfcheckFailed(
                "one or more checks failed".into(),
            )),
        ),
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            return e.exit_code();
        }
    };
    let written = match cli.output().and_then(|o| o.out.as_ref()) {
        Some(path) => std::fs::write(path, &body).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => stdout
            .write_all(body.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    };
    if let Err(e) = written.map(|_| ()).and(failure.map_or(Ok(()), Err)) {
        let _ = writeln!(stderr, "{}", e.to_json());
        return e.exit_code();
    }
    EXIT_OK
}
