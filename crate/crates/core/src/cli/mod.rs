//! The `vortex` command-line interface.
//!
//! Every subcommand produces a [`Table`], printed as CSV (default) or JSON and
//! optionally drawn as SVG. Exit codes: 0 success, 1 validation failure,
//! 2 bad input, 3 non-convergence.

pub mod spec;
pub mod svg;
pub mod table;
pub mod validate;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::energy::{
    kinetic_energy_profile, kinetic_energy_with, power_law_bounds, spherical_average,
    spherical_average_direct_with, EnergyMethod, EnergyOptions,
};
use crate::error::{Result, VortexError};
use crate::kaden::{
    arclength_slope, continuity_check, default_t_grid, energy_evolution_with, moment_decay_check,
    scaling_residual, similarity_residual, MomentKind,
};
use crate::measures::{KadenParams, SignedVorticity, Vorticity, VorticityMeasure};
use crate::moments::{inner_moment, outer_moment};
use crate::quadrature::Tolerance;
use crate::velocity::velocity_at;

pub use spec::MeasureSpec;
pub use svg::LogAxes;
pub use table::{format_sig, Cell, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

/// Environment variable overriding the default relative tolerance.
pub const TOL_ENV: &str = "VORTEX_TOL";

#[derive(Debug, Parser)]
#[command(
    name = "vortex",
    version,
    about = "Moments, spherical averages and local energy of planar vortex sheets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Also draw the numeric columns against the first one.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Logarithmic SVG axes: x, y or xy.
    #[arg(long, global = true)]
    pub log: Option<LogAxes>,
    /// Print the canonical measure specs and exit.
    #[arg(long, global = true)]
    pub echo_spec: bool,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// powerlaw:c=,alpha= | halfline:c=,alpha= | kaden:mu=,t= | atoms:<file.csv>
    #[arg(long)]
    pub measure: MeasureSpec,
    /// Subtract this measure (velocity of the difference).
    #[arg(long)]
    pub minus: Option<MeasureSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Series,
    Direct,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ball mass ω(B(0,r)).
    Mass {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<f64>,
    },
    /// Inner moments m_{r,n}, n = 0..N, and outer moments M_{r,k}, k = 1..N.
    Moments {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// Circle average A_r of |v|².
    Average {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<f64>,
        /// Quadrature of the Biot-Savart velocity instead of the moment series.
        #[arg(long)]
        direct: bool,
    },
    /// Local kinetic energy E_r = ∫_{B(0,r)} |v|².
    Energy {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<f64>,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
    },
    /// Sharp energy bounds for ball mass c·r^α.
    Bounds {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<f64>,
    },
    /// Velocity on an n×n grid over [−extent, extent]².
    VelocityGrid {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 2.0)]
        extent: f64,
        #[arg(long, default_value_t = 21)]
        n: usize,
    },
    /// A_r, E_r and distances to both self-similar limits along a t grid.
    KadenEvolve {
        #[arg(long)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// Explicit times; defaults to 25 per decade on [1e-3, 1e3].
        #[arg(long, value_delimiter = ',')]
        t: Option<Vec<f64>>,
    },
    /// Structural checks of the spiral family at one μ.
    KadenChecks {
        #[arg(long)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// Time used by the scaling check.
        #[arg(long, default_value_t = 4.0)]
        t: f64,
    },
    /// Series-versus-quadrature and bound suites; exit 1 on any failure.
    Validate,
}

/// Exit code for a library error.
pub fn exit_code(e: &VortexError) -> i32 {
    match e {
        VortexError::NonConvergence { .. } => EXIT_NONCONVERGENCE,
        _ => EXIT_INPUT,
    }
}

/// Relative tolerance from [`TOL_ENV`], if set.
pub fn env_tolerance() -> Result<Option<f64>> {
    let Ok(raw) = std::env::var(TOL_ENV) else {
        return Ok(None);
    };
    let tol: f64 = raw.trim().parse().map_err(|_| VortexError::Parse {
        position: 0,
        token: raw.clone(),
        message: format!("{TOL_ENV} is not a decimal number"),
    })?;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(VortexError::InvalidParameter {
            name: TOL_ENV.into(),
            value: tol,
            reason: "must lie in (0, 1)".into(),
        });
    }
    Ok(Some(tol))
}

/// Outcome of a subcommand: the table plus the exit code it warrants.
pub struct Report {
    pub table: Table,
    pub code: i32,
    pub notes: Vec<String>,
}

impl From<Table> for Report {
    fn from(table: Table) -> Self {
        Self {
            table,
            code: EXIT_OK,
            notes: Vec::new(),
        }
    }
}

enum Field {
    Single(VorticityMeasure),
    Signed(SignedVorticity),
}

impl Field {
    fn build(args: &FieldArgs) -> Result<Self> {
        let plus = args.measure.build()?;
        Ok(match &args.minus {
            None => Self::Single(plus),
            Some(m) => Self::Signed(SignedVorticity::new(plus, m.build()?)),
        })
    }

    fn as_dyn(&self) -> &dyn Vorticity {
        match self {
            Self::Single(m) => m,
            Self::Signed(s) => s,
        }
    }
}

fn energy_options(tol: Option<f64>) -> EnergyOptions {
    match tol {
        Some(t) => EnergyOptions::default().with_rel_tol(t),
        None => EnergyOptions::default(),
    }
}

/// Runs one parsed command.
pub fn execute(command: &Command, tol: Option<f64>) -> Result<Report> {
    let eopts = energy_options(tol);
    let spectrum = eopts.spectrum;
    match command {
        Command::Mass { field, r } => {
            let f = Field::build(field)?;
            let mut t = Table::new(&["r", "mass"]);
            for &ri in r {
                let mass: f64 = f
                    .as_dyn()
                    .components()
                    .iter()
                    .map(|(w, m)| w * m.ball_mass(ri))
                    .sum();
                t.push(vec![ri.into(), mass.into()]);
            }
            Ok(t.into())
        }
        Command::Moments { field, r, n } => {
            let f = Field::build(field)?;
            let mut t = Table::new(&["kind", "index", "re", "im"]);
            for k in 0..=*n {
                let m = inner_moment(f.as_dyn(), *r, k)?;
                t.push(vec!["inner".into(), k.into(), m.re.into(), m.im.into()]);
            }
            for k in 1..=*n {
                let m = outer_moment(f.as_dyn(), *r, k)?;
                t.push(vec!["outer".into(), k.into(), m.re.into(), m.im.into()]);
            }
            Ok(t.into())
        }
        Command::Average { field, r, direct } => {
            let f = Field::build(field)?;
            if *direct {
                let mut t = Table::new(&["r", "A"]);
                let qtol = Tolerance::new(1e-15, tol.unwrap_or(1e-10));
                for &ri in r {
                    t.push(vec![
                        ri.into(),
                        spherical_average_direct_with(f.as_dyn(), ri, qtol)?.into(),
                    ]);
                }
                return Ok(t.into());
            }
            let mut t = Table::new(&["r", "A", "tail_bound"]);
            let mut report = Report::from(Table::default());
            for &ri in r {
                let a = spherical_average(f.as_dyn(), ri, spectrum)?;
                // Continuous families rarely meet the certified bound; their
                // fitted tail is part of the value.
                if !a.converged && a.tail_estimate == 0.0 {
                    report.code = EXIT_NONCONVERGENCE;
                    report.notes.push(format!(
                        "series at r = {ri} not converged after {} terms",
                        a.terms
                    ));
                }
                t.push(vec![ri.into(), a.value.into(), a.tail_bound.into()]);
            }
            report.table = t;
            Ok(report)
        }
        Command::Energy { field, r, method } => {
            let f = Field::build(field)?;
            let method = match method {
                Method::Auto => EnergyMethod::Auto,
                Method::Series => EnergyMethod::Series,
                Method::Direct => EnergyMethod::Direct,
            };
            let opts = EnergyOptions { method, ..eopts };
            let mut t = Table::new(&["r", "E"]);
            let energies = match &f {
                Field::Single(m) => kinetic_energy_profile(m, r, opts)?,
                Field::Signed(s) => {
                    let plus = kinetic_energy_profile(&s.plus, r, opts)?;
                    let minus = kinetic_energy_profile(&s.minus, r, opts)?;
                    r.iter()
                        .zip(plus.iter().zip(&minus))
                        .map(|(&ri, (a, b))| kinetic_energy_with(s, ri, opts.with_abs_floor(a + b)))
                        .collect::<Result<Vec<f64>>>()?
                }
            };
            for (&ri, e) in r.iter().zip(energies) {
                t.push(vec![ri.into(), e.into()]);
            }
            Ok(t.into())
        }
        Command::Bounds { c, alpha, r } => {
            let mut t = Table::new(&["lower", "upper"]);
            for &ri in r {
                let b = power_law_bounds(*c, *alpha, ri)?;
                t.push(vec![b.lower.into(), b.upper.into()]);
            }
            Ok(t.into())
        }
        Command::VelocityGrid { field, extent, n } => {
            velocity_grid(&Field::build(field)?, *extent, *n)
        }
        Command::KadenEvolve { mu, r, t } => {
            let grid = t.clone().unwrap_or_else(default_t_grid);
            let series = energy_evolution_with(*mu, *r, &grid, eopts)?;
            let mut table = Table::new(&["t", "A_r", "E_r", "dist0_sq", "distinf_sq"]);
            let mut report = Report::from(Table::default());
            for s in &series.samples {
                if let Some(e) = &s.error {
                    report.code = EXIT_NONCONVERGENCE;
                    report.notes.push(format!("t = {}: {e}", s.t));
                }
                table.push(vec![
                    s.t.into(),
                    s.a_r.into(),
                    s.e_r.into(),
                    s.dist_to_w0_sq.into(),
                    s.dist_to_winf_sq.into(),
                ]);
            }
            report.table = table;
            Ok(report)
        }
        Command::KadenChecks { mu, r, t } => kaden_checks(*mu, *r, *t),
        Command::Validate => {
            let checks = validate::run_suite(eopts);
            let mut report = Report::from(validate::table(&checks));
            for c in checks.iter().filter(|c| !c.passed) {
                report.code = EXIT_VALIDATION;
                report.notes.push(match &c.error {
                    Some(e) => format!("{} failed: {e}", c.name),
                    None => format!("{} failed: {} > {}", c.name, c.value, c.tolerance),
                });
            }
            Ok(report)
        }
    }
}

fn velocity_grid(f: &Field, extent: f64, n: usize) -> Result<Report> {
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(VortexError::InvalidParameter {
            name: "extent".into(),
            value: extent,
            reason: "must be positive".into(),
        });
    }
    if n < 2 {
        return Err(VortexError::InvalidParameter {
            name: "n".into(),
            value: n as f64,
            reason: "need at least 2 points per side".into(),
        });
    }
    let mut t = Table::new(&["re(z)", "im(z)", "re(v)", "im(v)"]);
    let mut report = Report::from(Table::default());
    let step = 2.0 * extent / (n - 1) as f64;
    for j in 0..n {
        for i in 0..n {
            let z = Complex64::new(-extent + i as f64 * step, -extent + j as f64 * step);
            // Points on or next to the support have no finite velocity.
            let v = match velocity_at(f.as_dyn(), z) {
                Ok(v) => v,
                Err(e @ VortexError::NonConvergence { .. }) => {
                    report.code = EXIT_NONCONVERGENCE;
                    report.notes.push(format!("z = {z}: {e}"));
                    Complex64::new(f64::NAN, f64::NAN)
                }
                Err(_) => Complex64::new(f64::NAN, f64::NAN),
            };
            t.push(vec![z.re.into(), z.im.into(), v.re.into(), v.im.into()]);
        }
    }
    report.table = t;
    Ok(report)
}

fn kaden_checks(mu: f64, r: f64, t: f64) -> Result<Report> {
    let params = KadenParams::new(mu, 1.0)?;
    let mut table = Table::new(&["check", "value", "limit", "pass"]);
    let mut report = Report::from(Table::default());
    let mut row = |name: &str, value: f64, limit: f64, pass: bool| {
        if !pass {
            report
                .notes
                .push(format!("{name}: {value} against {limit}"));
        }
        table.push(vec![name.into(), value.into(), limit.into(), pass.into()]);
    };

    let (radial, tangential) = similarity_residual(1.0, mu)?;
    let worst = radial.norm().max(tangential.norm());
    row("similarity_equations", worst, 1e-12, worst < 1e-12);

    let eps: Vec<f64> = (0..13).map(|k| 10f64.powf(-2.0 - k as f64 / 4.0)).collect();
    let slope = arclength_slope(&params, &eps)?;
    let expected = 1.0 - 1.0 / mu;
    row(
        "arclength_slope",
        slope,
        expected,
        (slope - expected).abs() <= 0.02,
    );

    let scaling = scaling_residual(mu, r, t)?;
    row("scaling_residual", scaling, 1e-6, scaling < 1e-6);

    let cont = continuity_check(mu, r, 1.0, &[0.5, 0.1, 0.02])?;
    for (k, c) in cont.iter().enumerate() {
        let shrinking = k == 0 || c.dist_sq < cont[k - 1].dist_sq;
        row(
            &format!("continuity_dist_sq(dt={})", c.dt),
            c.dist_sq,
            cont.first().map_or(0.0, |f| f.dist_sq),
            shrinking,
        );
    }

    for (kind, label) in [(MomentKind::Inner, "inner"), (MomentKind::Outer, "outer")] {
        let idx = if kind == MomentKind::Inner { 1 } else { 2 };
        let normalized = moment_decay_check(mu, r, idx, kind, &[2.0, 10.0, 50.0])?;
        let hi = normalized.iter().fold(0.0f64, |m, v| m.max(*v));
        let lo = normalized.iter().fold(f64::INFINITY, |m, v| m.min(*v));
        let ratio = hi / lo;
        row(
            &format!("{label}_moment_decay_spread(index={idx})"),
            ratio,
            50.0,
            ratio < 50.0,
        );
    }

    if !report.notes.is_empty() {
        report.code = EXIT_VALIDATION;
    }
    report.table = table;
    Ok(report)
}

fn echo_specs(command: &Command) -> Vec<String> {
    let field = match command {
        Command::Mass { field, .. }
        | Command::Moments { field, .. }
        | Command::Average { field, .. }
        | Command::Energy { field, .. }
        | Command::VelocityGrid { field, .. } => field,
        Command::KadenEvolve { mu, t, .. } => {
            let t0 = t.as_ref().and_then(|g| g.first().copied()).unwrap_or(1.0);
            return vec![MeasureSpec::Kaden { mu: *mu, t: t0 }.to_string()];
        }
        Command::KadenChecks { mu, .. } => {
            return vec![MeasureSpec::Kaden { mu: *mu, t: 1.0 }.to_string()]
        }
        Command::Bounds { c, alpha, .. } => {
            return vec![
                MeasureSpec::PowerLaw {
                    c: *c,
                    alpha: *alpha,
                }
                .to_string(),
                MeasureSpec::HalfLine {
                    c: *c,
                    alpha: *alpha,
                }
                .to_string(),
            ];
        }
        Command::Validate => return Vec::new(),
    };
    std::iter::once(&field.measure)
        .chain(&field.minus)
        .map(|s| s.to_string())
        .collect()
}

fn write_target(path: Option<&PathBuf>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    if cli.output.echo_spec {
        let mut text = echo_specs(&cli.command).join("\n");
        if !text.is_empty() {
            text.push('\n');
        }
        return match write_target(cli.output.out.as_ref(), &text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_INPUT
            }
        };
    }
    let tol = match env_tolerance() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let report = match execute(&cli.command, tol) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    for note in &report.notes {
        eprintln!("warning: {note}");
    }
    let text = match cli.output.format {
        Format::Csv => report.table.to_csv(),
        Format::Json => report.table.to_json(),
    };
    if let Err(e) = write_target(cli.output.out.as_ref(), &text) {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    if let Some(path) = &cli.output.svg {
        match svg::render(&report.table, cli.output.log.unwrap_or_default()) {
            Some(doc) => {
                if let Err(e) = std::fs::write(path, doc) {
                    eprintln!("error: {}: {e}", path.display());
                    return EXIT_INPUT;
                }
            }
            None => eprintln!("warning: nothing to plot, fewer than two numeric columns"),
        }
    }
    report.code
}
