//! Command-line front end: robot models, kinematics, singularity algebra
//! and workspace scans, with file export.
//!
//! Exit codes: 0 success, 1 domain error (e.g. a projection or sampling
//! failure), 2 usage error (bad flags, unreadable or malformed config).

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deltakin::exactpoly::{poly_stats, PolyJson, Scalar};
use deltakin::export::{self, write_atomic, write_json, ExportError, GridFormat, SurfaceReport};
use deltakin::kinematics::{dk, ik, Vec3};
use deltakin::robots::{builtin_model, model_from_json, validate_model, RobotConfig, RobotModel, BUILTIN_NAMES};
use deltakin::scan::{parse_resolution, region_summary, scan, ScanBox, SAMPLING_NOTE};
use deltakin::singularity::{project, sample_singular, singularity_det, SingularityError, SingularityKind, Space};
use serde_json::json;

#[derive(Debug, Parser)]
#[command(name = "deltakin", version, about = "Kinematics, singularities and workspaces of delta-like robots")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct Common {
    /// Builtin model: orthoglide, hybridglide, triaglide or uranesx [default: orthoglide]
    #[arg(long, global = true, conflicts_with = "config")]
    pub model: Option<String>,
    /// Robot description in JSON instead of a builtin
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Link length, exact (e.g. 2, 3/2, 1.25)
    #[arg(long = "L", global = true, value_name = "LENGTH")]
    pub link_length: Option<String>,
    /// Ignore the joint limits
    #[arg(long, global = true)]
    pub no_limits: bool,
    /// Write the result to this file (atomically) instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Output format; each command has its own default
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Scan worker threads (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Random seed for sampling
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Scan box `xmin:xmax,ymin:ymax,zmin:zmax` [default: per space]
    #[arg(long = "box", global = true, value_name = "BOX", allow_hyphen_values = true)]
    pub bbox: Option<String>,
    /// Scan resolution `NxNxN`
    #[arg(long, global = true, value_name = "RES", default_value = "64x64x64")]
    pub res: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Ply,
    Vtk,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Parallel,
    Serial,
}

impl From<KindArg> for SingularityKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Parallel => SingularityKind::Parallel,
            KindArg::Serial => SingularityKind::Serial,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Workspace,
    Jointspace,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Workspace => Space::Workspace,
            SpaceArg::Jointspace => Space::Jointspace,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the builtin models with their leg tables
    Models,
    /// Inverse kinematics: all joint solutions for a pose
    Ik {
        /// Tool centre point `x,y,z`
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        pose: Vec3,
    },
    /// Direct kinematics: all poses for a joint vector
    Dk {
        /// Joint values `rho1,rho2,rho3`
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        joints: Vec3,
    },
    /// Singularity determinants, projections and samples
    Sing {
        #[command(subcommand)]
        command: SingCommand,
    },
    /// Classify a grid of cells by IK (workspace) or DK (joint space) solution count
    Scan {
        #[arg(long, value_enum, default_value = "workspace")]
        space: SpaceArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum SingCommand {
    /// det(A) (parallel) or det(B) (serial) as an exact polynomial
    Det {
        #[arg(long, value_enum)]
        space: KindArg,
    },
    /// Eliminate joints or pose coordinates from the singularity locus
    Project {
        #[arg(long, value_enum)]
        space: KindArg,
        /// Target coordinates [default: workspace for parallel, jointspace for serial]
        #[arg(long, value_enum)]
        onto: Option<SpaceArg>,
    },
    /// Sample configurations on the singularity locus
    Sample {
        #[arg(long, value_enum)]
        space: KindArg,
        /// Number of configurations
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
}

fn parse_vec3(s: &str) -> Result<Vec3, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got `{s}`"));
    }
    let mut v: Vec3 = [0.0; 3];
    for (k, p) in parts.iter().enumerate() {
        v[k] = p.trim().parse().map_err(|_| format!("`{p}` is not a number"))?;
        if !v[k].is_finite() {
            return Err(format!("`{p}` is not finite"));
        }
    }
    Ok(v)
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit code 2.
    Usage(String),
    /// The computation itself failed: exit code 1.
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<ExportError> for CliError {
    fn from(e: ExportError) -> Self {
        CliError::Domain(format!("write failed: {e}"))
    }
}

/// Parses `args` (including the program name) and runs one subcommand,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn load_model(c: &Common) -> Result<RobotModel, CliError> {
    let mut model = match &c.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            model_from_json(&text).map_err(|e| CliError::Usage(e.to_string()))?
        }
        None => builtin_model(c.model.as_deref().unwrap_or("orthoglide")).map_err(|e| CliError::Usage(e.to_string()))?,
    };
    if let Some(l) = &c.link_length {
        let l: Scalar = l.parse().map_err(|e| CliError::Usage(format!("--L: {e}")))?;
        model = model.with_link_length(l);
        let violations = validate_model(&model);
        if !violations.is_empty() {
            return Err(CliError::Usage(format!("--L: {}", violations.join("; "))));
        }
    }
    Ok(model)
}

fn pick_format(c: &Common, default: Format, allowed: &[Format], command: &str) -> Result<Format, CliError> {
    let f = c.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let names: Vec<String> =
            allowed.iter().map(|a| a.to_possible_value().expect("named").get_name().to_string()).collect();
        Err(CliError::Usage(format!("{command} supports --format {}", names.join(", "))))
    }
}

fn emit(c: &Common, body: impl FnOnce(&mut dyn Write) -> Result<(), ExportError>) -> Result<(), CliError> {
    match &c.out {
        Some(path) => write_atomic(path, body)?,
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)?;
            lock.flush().map_err(ExportError::from)?;
        }
    }
    Ok(())
}

fn fmt_vec(v: &Vec3, sep: &str) -> String {
    v.map(|c| c.to_string()).join(sep)
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let c = &cli.common;
    match &cli.command {
        Command::Models => cmd_models(c),
        Command::Ik { pose } => cmd_ik(c, pose),
        Command::Dk { joints } => cmd_dk(c, joints),
        Command::Sing { command } => match command {
            SingCommand::Det { space } => cmd_det(c, (*space).into()),
            SingCommand::Project { space, onto } => cmd_project(c, (*space).into(), onto.map(Space::from)),
            SingCommand::Sample { space, n } => cmd_sample(c, (*space).into(), *n),
        },
        Command::Scan { space } => cmd_scan(c, (*space).into()),
    }
}

fn cmd_models(c: &Common) -> Result<(), CliError> {
    let format = pick_format(c, Format::Text, &[Format::Text, Format::Json], "models")?;
    let models: Vec<RobotModel> = BUILTIN_NAMES.iter().map(|n| builtin_model(n).expect("builtin")).collect();
    match format {
        Format::Json => {
            let configs: Vec<RobotConfig> = models.iter().map(RobotConfig::from_model).collect();
            emit(c, |w| write_json(&configs, w))
        }
        _ => emit(c, |w| {
            for m in &models {
                writeln!(w, "{}", m.name)?;
                writeln!(w, "  L = {}, joint limits {} < rho_i < {}", m.link_length, m.limits.min, m.limit_max())?;
                writeln!(w, "  {:<4} {:<28} axis", "leg", "base")?;
                for (i, leg) in m.legs.iter().enumerate() {
                    let base = format!("({})", leg.base.each_ref().map(Scalar::to_string).join(", "));
                    let axis = format!("({})", leg.axis.each_ref().map(Scalar::to_string).join(", "));
                    writeln!(w, "  {:<4} {:<28} {}", i + 1, base, axis)?;
                }
            }
            Ok(())
        }),
    }
}

fn cmd_ik(c: &Common, pose: &Vec3) -> Result<(), CliError> {
    let format = pick_format(c, Format::Json, &[Format::Json, Format::Text, Format::Csv], "ik")?;
    let m = load_model(c)?;
    let set = ik(&m, pose, !c.no_limits);
    match format {
        Format::Json => {
            let value = json!({
                "model": m.name,
                "L": m.link_length.to_string(),
                "pose": set.pose,
                "limits_applied": set.limits_applied,
                "count": set.count(),
                "per_leg_root_counts": set.per_leg_root_counts,
                "solutions": set.solutions,
            });
            emit(c, |w| write_json(&value, w))
        }
        Format::Csv => emit(c, |w| {
            writeln!(w, "rho1,rho2,rho3")?;
            for s in &set.solutions {
                writeln!(w, "{}", fmt_vec(&s.joints, ","))?;
            }
            Ok(())
        }),
        _ => emit(c, |w| {
            writeln!(w, "{} IK solutions", set.count())?;
            for s in &set.solutions {
                writeln!(w, "{}", fmt_vec(&s.joints, " "))?;
            }
            Ok(())
        }),
    }
}

fn cmd_dk(c: &Common, joints: &Vec3) -> Result<(), CliError> {
    let format = pick_format(c, Format::Json, &[Format::Json, Format::Text, Format::Csv], "dk")?;
    let m = load_model(c)?;
    let set = dk(&m, joints, !c.no_limits);
    match format {
        Format::Json => {
            let value = json!({
                "model": m.name,
                "L": m.link_length.to_string(),
                "joints": set.joints,
                "limits_applied": set.limits_applied,
                "count": set.count(),
                "degenerate": set.degenerate,
                "solutions": set.solutions,
            });
            emit(c, |w| write_json(&value, w))
        }
        Format::Csv => emit(c, |w| {
            writeln!(w, "x,y,z")?;
            for p in &set.solutions {
                writeln!(w, "{}", fmt_vec(p, ","))?;
            }
            Ok(())
        }),
        _ => emit(c, |w| {
            match set.degenerate {
                Some(d) => writeln!(w, "degenerate: {d:?}")?,
                None => writeln!(w, "{} DK solutions", set.count())?,
            }
            for p in &set.solutions {
                writeln!(w, "{}", fmt_vec(p, " "))?;
            }
            Ok(())
        }),
    }
}

fn cmd_det(c: &Common, kind: SingularityKind) -> Result<(), CliError> {
    let format = pick_format(c, Format::Text, &[Format::Text, Format::Json], "sing det")?;
    let m = load_model(c)?;
    let det = singularity_det(&m, kind);
    match format {
        Format::Json => {
            let value = json!({
                "model": m.name,
                "kind": kind,
                "polynomial": det.to_string(),
                "polynomial_json": PolyJson::from(&det),
                "stats": poly_stats(&det),
            });
            emit(c, |w| write_json(&value, w))
        }
        _ => emit(c, |w| Ok(writeln!(w, "{det}")?)),
    }
}

fn default_space(kind: SingularityKind) -> Space {
    match kind {
        SingularityKind::Parallel => Space::Workspace,
        SingularityKind::Serial => Space::Jointspace,
    }
}

fn domain(e: SingularityError) -> CliError {
    CliError::Domain(e.to_string())
}

fn cmd_project(c: &Common, kind: SingularityKind, onto: Option<Space>) -> Result<(), CliError> {
    let format = pick_format(c, Format::Json, &[Format::Json, Format::Text], "sing project")?;
    let m = load_model(c)?;
    let space = onto.unwrap_or_else(|| default_space(kind));
    let surface = project(&m, &singularity_det(&m, kind), space).map_err(domain)?;
    let report = SurfaceReport::new(&m.name, kind, &surface);
    match format {
        Format::Json => emit(c, |w| write_json(&report, w)),
        _ => emit(c, |w| {
            let s = &report.stats;
            writeln!(w, "{}", report.polynomial)?;
            writeln!(
                w,
                "degree {} {:?} terms {} bitsize {}",
                s.total_degree, s.per_var_degrees, s.num_terms, s.coeff_bitsize
            )?;
            if let (Some(t), Some(ok)) = (&report.target, &report.matches) {
                writeln!(
                    w,
                    "reference degree {} {:?} terms {} bitsize {} ({})",
                    t.total_degree,
                    t.per_var_degrees,
                    t.num_terms,
                    t.coeff_bitsize,
                    if ok.all { "match" } else { "mismatch" }
                )?;
            }
            Ok(())
        }),
    }
}

fn cmd_sample(c: &Common, kind: SingularityKind, n: usize) -> Result<(), CliError> {
    let format = pick_format(c, Format::Json, &[Format::Json, Format::Csv], "sing sample")?;
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let m = load_model(c)?;
    let configs = sample_singular(&m, kind, n, c.seed, !c.no_limits).map_err(domain)?;
    match format {
        Format::Csv => emit(c, |w| {
            writeln!(w, "x,y,z,rho1,rho2,rho3,det_residual,constraint_residual")?;
            for s in &configs {
                writeln!(
                    w,
                    "{},{},{},{}",
                    fmt_vec(&s.pose, ","),
                    fmt_vec(&s.joints, ","),
                    s.det_residual,
                    s.constraint_residual
                )?;
            }
            Ok(())
        }),
        _ => {
            let value = json!({
                "model": m.name,
                "kind": kind,
                "L": m.link_length.to_string(),
                "seed": c.seed,
                "limits_applied": !c.no_limits,
                "configurations": configs,
            });
            emit(c, |w| write_json(&value, w))
        }
    }
}

fn cmd_scan(c: &Common, space: Space) -> Result<(), CliError> {
    let all = [Format::Csv, Format::Ply, Format::Vtk, Format::Json, Format::Text];
    let format = pick_format(c, Format::Csv, &all, "scan")?;
    let m = load_model(c)?;
    let bbox = match &c.bbox {
        Some(b) => b.parse::<ScanBox>().map_err(|e| CliError::Usage(format!("--box: {e}")))?,
        None => ScanBox::default_for(space, &m),
    };
    let res = parse_resolution(&c.res).map_err(|e| CliError::Usage(format!("--res: {e}")))?;
    let grid = scan(&m, space, bbox, res, !c.no_limits, c.workers).map_err(|e| CliError::Domain(e.to_string()))?;
    let grid_format = match format {
        Format::Csv => GridFormat::Csv,
        Format::Ply => GridFormat::Ply,
        Format::Vtk => GridFormat::Vtk,
        Format::Json => GridFormat::Json,
        Format::Text => {
            let summary = region_summary(&grid);
            return emit(c, |w| {
                writeln!(w, "{} scan of {} over {} at {}x{}x{}", space.name(), m.name, bbox, res[0], res[1], res[2])?;
                writeln!(w, "{SAMPLING_NOTE}")?;
                writeln!(w, "label  cells  fraction  components")?;
                for l in &summary.labels {
                    writeln!(w, "{:<6} {:<6} {:<9.6} {}", l.label, l.count, l.fraction, l.components)?;
                }
                if summary.degenerate_cells > 0 {
                    writeln!(w, "degenerate cells (labelled 0): {}", summary.degenerate_cells)?;
                }
                Ok(())
            });
        }
    };
    emit(c, |w| export::write_grid(&grid, grid_format, w))
}
