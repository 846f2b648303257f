//! Command-line front end.
//!
//! Exit codes: 0 success, 1 parse/IO/usage error, 2 infeasible or
//! non-interior start, 3 unbounded line or polytope, 4 iteration cap reached.
//! Results go to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::{json, Value};

use crate::center::{
    bi_center, directional_sum, f_vector, harmonic_center, harmonic_hyperplane, CenterOptions,
    CenterTrace, DEFAULT_DEGENERATE_EPS, DEFAULT_MAX_ITER, DEFAULT_STOP_TOL,
};
use crate::error::Error;
use crate::line::Direction;
use crate::polytope::{parse_polytope, Point, PointClass, Polytope, DEFAULT_BOUNDARY_EPS};
use crate::solver::{harmonic_point_on_line, DEFAULT_INNER_TOL};
use crate::svg::emit_svg;
use crate::trace::trace_to_csv;

/// Relaxation steps allowed when no start point is given.
const INTERIOR_SEARCH_MAX_ITER: usize = 10_000;
/// Random directions probed by `check`.
const CHECK_DIRECTIONS: usize = 100;
const CHECK_SEED: u64 = 0x5eed;

#[derive(Debug, Parser)]
#[command(
    name = "hcenter",
    version,
    about = "Harmonic center of a convex polytope given as A x <= b"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Polytope file in .poly format
    input: PathBuf,
    /// Outer stopping tolerance on |F|
    #[arg(long = "tol", default_value_t = DEFAULT_STOP_TOL)]
    stop_tol: f64,
    /// Tolerance for each one-dimensional harmonic solve
    #[arg(long, default_value_t = DEFAULT_INNER_TOL)]
    inner_tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Run coordinate search to the harmonic center
    Center {
        #[command(flatten)]
        common: Common,
        /// Start point, e.g. `3,0.25`; repeat for several trajectories
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        start: Vec<Coords>,
        /// Write the iteration trace as CSV (single start only)
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write an SVG of the trajectories (2-D only)
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Harmonic point along a line through the start point
    Point {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        start: Option<Coords>,
        /// One-based coordinate axis
        #[arg(long, conflicts_with = "dir", required_unless_present = "dir")]
        axis: Option<usize>,
        /// Direction vector, normalized on input
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        dir: Option<Coords>,
    },
    /// Normal and offset of the harmonic hyperplane at the start point
    Hyperplane {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        start: Option<Coords>,
    },
    /// Harmonic center and axis-bisection center from the same start
    CompareBi {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        start: Option<Coords>,
    },
    /// Test whether a point is the harmonic center within the tolerance
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        start: Option<Coords>,
    },
}

/// Comma-separated coordinates, e.g. `3,0.25`.
#[derive(Debug, Clone, PartialEq)]
struct Coords(Vec<f64>);

fn parse_coords(s: &str) -> Result<Coords, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("`{t}` is not a finite number"))
        })
        .collect::<Result<Vec<f64>, String>>()
        .map(Coords)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LineSpec {
    /// Zero-based axis.
    Axis(usize),
    Dir(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Center,
    Point,
    Hyperplane,
    CompareBi,
    Check,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub input: PathBuf,
    /// Empty means "search for an interior point".
    pub starts: Vec<Vec<f64>>,
    pub options: CenterOptions,
    pub format: Format,
    pub trace: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub line: Option<LineSpec>,
}

impl RunConfig {
    fn from_cli(cli: Cli) -> Result<RunConfig, String> {
        let (command, common, starts, trace, svg, line) = match cli.command {
            CliCommand::Center {
                common,
                start,
                trace,
                svg,
            } => {
                let starts: Vec<Vec<f64>> = start.into_iter().map(|c| c.0).collect();
                (CommandKind::Center, common, starts, trace, svg, None)
            }
            CliCommand::Point {
                common,
                start,
                axis,
                dir,
            } => {
                let line = match (axis, dir) {
                    (Some(0), _) => return Err("--axis is one-based".into()),
                    (Some(k), _) => LineSpec::Axis(k - 1),
                    (None, Some(v)) => LineSpec::Dir(v.0),
                    (None, None) => return Err("one of --axis or --dir is required".into()),
                };
                (
                    CommandKind::Point,
                    common,
                    start.into_iter().map(|c| c.0).collect(),
                    None,
                    None,
                    Some(line),
                )
            }
            CliCommand::Hyperplane { common, start } => (
                CommandKind::Hyperplane,
                common,
                start.into_iter().map(|c| c.0).collect(),
                None,
                None,
                None,
            ),
            CliCommand::CompareBi { common, start } => (
                CommandKind::CompareBi,
                common,
                start.into_iter().map(|c| c.0).collect(),
                None,
                None,
                None,
            ),
            CliCommand::Check { common, start } => (
                CommandKind::Check,
                common,
                start.into_iter().map(|c| c.0).collect(),
                None,
                None,
                None,
            ),
        };
        if common.stop_tol.is_nan()
            || common.stop_tol <= 0.0
            || common.inner_tol.is_nan()
            || common.inner_tol <= 0.0
        {
            return Err("tolerances must be positive".into());
        }
        if starts.len() > 1 && (trace.is_some() || common.format == Format::Csv) {
            return Err("--trace and --format csv need exactly one --start".into());
        }
        Ok(RunConfig {
            command,
            input: common.input,
            starts,
            options: CenterOptions {
                stop_tol: common.stop_tol,
                inner_tol: common.inner_tol,
                max_iter: common.max_iter,
            },
            format: common.format,
            trace,
            svg,
            line,
        })
    }
}

/// Process exit status for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotInterior { .. } | Error::NoInteriorPoint { .. } => 2,
        Error::UnboundedDirection { .. } | Error::BracketInvalid { .. } => 3,
        Error::MaxIterExceeded { .. } => 4,
        Error::Syntax { .. }
        | Error::ZeroRow { .. }
        | Error::TooFewConstraints { .. }
        | Error::DimensionMismatch { .. }
        | Error::DegenerateAtCenter { .. }
        | Error::AxisOutOfRange { .. }
        | Error::InvalidDirection
        | Error::DimensionUnsupported { .. } => 1,
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 1,
            Failure::Core(e) => exit_code(e),
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn main_from_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match RunConfig::from_cli(cli) {
        Ok(cfg) => run(&cfg, out, err),
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

/// Executes one resolved configuration and returns the exit status.
pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cfg, err) {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn load(path: &PathBuf) -> Result<Polytope, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_polytope(&text).map_err(|e| match e {
        Error::Syntax { .. } => Failure::Io(format!("{}: {e}", path.display())),
        other => Failure::Core(other),
    })
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

/// Start points to use: the supplied ones, checked for strict interiority, or
/// one found by the relaxation sweep (reported on stderr).
fn resolve_starts(
    polytope: &Polytope,
    starts: &[Vec<f64>],
    err: &mut dyn Write,
) -> Result<Vec<Point>, Failure> {
    if starts.is_empty() {
        let p = polytope.find_interior_point(INTERIOR_SEARCH_MAX_ITER)?;
        let _ = writeln!(err, "start: {}", join(p.coords()));
        return Ok(vec![p]);
    }
    starts
        .iter()
        .map(|s| {
            let p = Point::new(s.clone());
            match polytope.classify(&p, DEFAULT_BOUNDARY_EPS)? {
                PointClass::StrictlyInterior => Ok(p),
                PointClass::OnBoundary(ids) => Err(Failure::Core(not_interior(polytope, &p, &ids))),
                PointClass::Exterior(ids) => Err(Failure::Core(not_interior(polytope, &p, &ids))),
            }
        })
        .collect()
}

fn not_interior(polytope: &Polytope, p: &Point, ids: &[usize]) -> Error {
    let constraint = ids[0];
    let residual = polytope
        .residuals(p)
        .map(|s| s[constraint])
        .unwrap_or(f64::NAN);
    Error::NotInterior {
        constraint,
        residual,
    }
}

fn join(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn center_json(trace: &CenterTrace) -> Value {
    let last = trace.last();
    json!({
        "center": last.point.coords(),
        "fnorm": last.fnorm,
        "iterations": trace.iterations(),
        "converged": trace.converged,
    })
}

fn trace_table(trace: &CenterTrace) -> String {
    let n = trace.last().point.dim();
    let mut s = String::from("iter");
    for k in 1..=n {
        write!(s, "\t{:>8}", format!("x{k}")).unwrap();
    }
    s.push_str("\t     |F|\n");
    for r in &trace.records {
        write!(s, "{}", r.iter).unwrap();
        for x in r.point.coords() {
            write!(s, "\t{x:>8.2}").unwrap();
        }
        writeln!(s, "\t{:>8.3}", r.fnorm).unwrap();
    }
    s
}

fn execute(cfg: &RunConfig, err: &mut dyn Write) -> Result<(String, i32), Failure> {
    let polytope = load(&cfg.input)?;
    let starts = resolve_starts(&polytope, &cfg.starts, err)?;
    let opts = &cfg.options;
    let mut text = String::new();
    let mut code = 0;

    match cfg.command {
        CommandKind::Center => {
            let traces = starts
                .iter()
                .map(|p0| harmonic_center(&polytope, p0, opts).map(|(_, t)| t))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(path) = &cfg.trace {
                write_file(path, &trace_to_csv(&traces[0]))?;
            }
            if let Some(path) = &cfg.svg {
                write_file(path, &emit_svg(&traces, &polytope)?)?;
            }
            match cfg.format {
                Format::Table => {
                    for (i, t) in traces.iter().enumerate() {
                        if i > 0 {
                            text.push('\n');
                        }
                        text.push_str(&trace_table(t));
                        let last = t.last();
                        writeln!(
                            text,
                            "center: {:.2}  |F| = {:.3e}  iterations: {}{}",
                            last.point,
                            last.fnorm,
                            t.iterations(),
                            if t.converged { "" } else { "  (not converged)" }
                        )
                        .unwrap();
                    }
                }
                Format::Csv => text.push_str(&trace_to_csv(&traces[0])),
                Format::Json => {
                    let v = if traces.len() == 1 {
                        center_json(&traces[0])
                    } else {
                        Value::Array(traces.iter().map(center_json).collect())
                    };
                    writeln!(text, "{v}").unwrap();
                }
            }
            if traces.iter().any(|t| !t.converged) {
                let _ = writeln!(
                    err,
                    "error: iteration cap of {} reached before |F| <= {}",
                    opts.max_iter, opts.stop_tol
                );
                code = 4;
            }
        }
        CommandKind::Point => {
            let u = match cfg.line.as_ref().expect("point command carries a line") {
                LineSpec::Axis(k) => Direction::axis(*k, polytope.n()).map_err(|_| {
                    Failure::Usage(format!("--axis must be between 1 and {}", polytope.n()))
                })?,
                LineSpec::Dir(v) => {
                    polytope.check_dim(v.len())?;
                    Direction::new(v.clone())?
                }
            };
            let q = harmonic_point_on_line(&polytope, &starts[0], &u, opts.inner_tol)?;
            match cfg.format {
                Format::Table => writeln!(text, "harmonic point: {q:.2}").unwrap(),
                Format::Csv => {
                    text.push_str(&header("x", polytope.n()));
                    writeln!(text, "{}", join(q.coords())).unwrap();
                }
                Format::Json => writeln!(text, "{}", json!({ "point": q.coords() })).unwrap(),
            }
        }
        CommandKind::Hyperplane => {
            let hp = harmonic_hyperplane(&polytope, &starts[0], DEFAULT_DEGENERATE_EPS)?;
            match cfg.format {
                Format::Table => {
                    writeln!(text, "normal: {:.4}", Point::new(hp.normal.clone())).unwrap();
                    writeln!(text, "offset: {:.4}", hp.offset).unwrap();
                }
                Format::Csv => {
                    let mut h = header("v", polytope.n());
                    h.insert_str(h.len() - 1, ",offset");
                    text.push_str(&h);
                    writeln!(text, "{},{}", join(&hp.normal), hp.offset).unwrap();
                }
                Format::Json => writeln!(
                    text,
                    "{}",
                    json!({ "normal": hp.normal, "offset": hp.offset })
                )
                .unwrap(),
            }
        }
        CommandKind::CompareBi => {
            let p0 = &starts[0];
            let (harmonic, bi) = std::thread::scope(|s| {
                let h = s.spawn(|| harmonic_center(&polytope, p0, opts));
                let b = bi_center(&polytope, p0, opts);
                (h.join().expect("harmonic solve panicked"), b)
            });
            let (hc, ht) = harmonic?;
            let (bc, bt) = bi?;
            let gap = hc.distance(&bc);
            match cfg.format {
                Format::Table => {
                    writeln!(
                        text,
                        "harmonic center: {hc:.2}  ({} iterations)",
                        ht.iterations()
                    )
                    .unwrap();
                    writeln!(
                        text,
                        "BI center:       {bc:.2}  ({} iterations)",
                        bt.iterations()
                    )
                    .unwrap();
                    writeln!(text, "gap: {gap:.4}").unwrap();
                }
                Format::Csv => {
                    let mut h = header("x", polytope.n());
                    h.insert_str(0, "kind,");
                    text.push_str(&h);
                    writeln!(text, "harmonic,{}", join(hc.coords())).unwrap();
                    writeln!(text, "bi,{}", join(bc.coords())).unwrap();
                }
                Format::Json => writeln!(
                    text,
                    "{}",
                    json!({
                        "harmonic": hc.coords(),
                        "bi": bc.coords(),
                        "gap": gap,
                        "converged": ht.converged && bt.converged,
                    })
                )
                .unwrap(),
            }
            if !(ht.converged && bt.converged) {
                let _ = writeln!(err, "error: iteration cap of {} reached", opts.max_iter);
                code = 4;
            }
        }
        CommandKind::Check => {
            let p = &starts[0];
            let fnorm = f_vector(&polytope, p)?.norm();
            let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED);
            let mut worst: f64 = 0.0;
            for _ in 0..CHECK_DIRECTIONS {
                let v: Vec<f64> = (0..polytope.n())
                    .map(|_| StandardNormal.sample(&mut rng))
                    .collect();
                let u = Direction::new(v)?;
                worst = worst.max(directional_sum(&polytope, p, &u)?.abs());
            }
            let pass = fnorm <= opts.stop_tol && worst <= opts.stop_tol;
            match cfg.format {
                Format::Table => {
                    writeln!(text, "|F| = {fnorm:.3e}").unwrap();
                    writeln!(
                        text,
                        "max |F_u| over {CHECK_DIRECTIONS} directions = {worst:.3e}"
                    )
                    .unwrap();
                    writeln!(text, "{}", if pass { "pass" } else { "fail" }).unwrap();
                }
                Format::Csv => {
                    writeln!(text, "fnorm,max_directional,pass\n{fnorm},{worst},{pass}").unwrap();
                }
                Format::Json => writeln!(
                    text,
                    "{}",
                    json!({
                        "fnorm": fnorm,
                        "max_directional": worst,
                        "directions": CHECK_DIRECTIONS,
                        "pass": pass,
                    })
                )
                .unwrap(),
            }
        }
    }
    Ok((text, code))
}

fn header(prefix: &str, n: usize) -> String {
    let cols: Vec<String> = (1..=n).map(|k| format!("{prefix}{k}")).collect();
    format!("{}\n", cols.join(","))
}
