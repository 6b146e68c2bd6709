use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use berry_cli::config::{parse_sites, FileConfig, RunConfig};
use berry_cli::error::CliError;
use berry_cli::output::Table;
use berry_cli::run::{self, TwoLevelArgs};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "berry", version, about = "Adiabatic sign factors for hole loops in a mean-field Holstein-Hubbard lattice")]
struct Cli {
    /// TOML file; flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sign factor and gauge checks for the real two-level model.
    Twolevel(TwoLevelCmd),
    /// Berry sign factor for one hole loop.
    Path(PathCmd),
    /// HOMO-LUMO gap along a loop.
    GapProfile(GapCmd),
    /// Sign factors over a grid of U, g and loops.
    Sweep(SweepCmd),
    /// List the built-in loops.
    Catalog(OutputArgs),
}

#[derive(Args)]
struct TwoLevelCmd {
    /// Winding number of the loop.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    k: i64,
    /// Samples around the loop.
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    start_angle: f64,
    /// Polar angle of the monopole check loop, in radians.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    cone_angle: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Default)]
struct OutputArgs {
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Default)]
struct ModelArgs {
    #[arg(long = "u", visible_alias = "U")]
    u: Option<f64>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// Spring constant.
    #[arg(long = "spring", visible_alias = "K")]
    k: Option<f64>,
    /// Breathing amplitude.
    #[arg(long)]
    d: Option<f64>,
    /// collinear or noncollinear.
    #[arg(long)]
    mode: Option<String>,
    /// Spin of the hole: up or down.
    #[arg(long)]
    hole_spin: Option<String>,
    /// Lattice size as LXxLY, e.g. 4x4.
    #[arg(long)]
    lattice: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    mixing: Option<f64>,
    /// ground-state or continuation.
    #[arg(long)]
    selection: Option<String>,
    /// Smallest accepted |overlap| between neighbouring samples.
    #[arg(long)]
    min_step_overlap: Option<f64>,
}

#[derive(Args, Default)]
struct PathArgs {
    /// Catalog loop name.
    #[arg(long)]
    path: Option<String>,
    /// Explicit loop as "ix,iy;ix,iy;...".
    #[arg(long)]
    sites: Option<String>,
    /// Samples per segment.
    #[arg(long)]
    ns: Option<usize>,
}

#[derive(Args)]
struct PathCmd {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    path: PathArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct GapCmd {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    path: PathArgs,
    /// Profile points per segment.
    #[arg(long)]
    points: Option<usize>,
    /// Add the full single-particle spectrum at each point.
    #[arg(long)]
    wide: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SweepCmd {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    path: PathArgs,
    #[arg(long, value_delimiter = ',')]
    u_values: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    g_values: Option<Vec<f64>>,
    /// Comma-separated catalog loop names.
    #[arg(long, value_delimiter = ',')]
    paths: Option<Vec<String>>,
    #[arg(long, env = "BERRY_WORKERS")]
    workers: Option<usize>,
    #[command(flatten)]
    out: OutputArgs,
}

fn apply_model(cfg: &mut FileConfig, m: ModelArgs) -> Result<(), CliError> {
    let s = &mut cfg.model;
    s.u = m.u.or(s.u);
    s.g = m.g.or(s.g);
    s.t = m.t.or(s.t);
    s.k = m.k.or(s.k);
    s.d = m.d.or(s.d);
    s.mode = m.mode.or(s.mode.take());
    s.hole_spin = m.hole_spin.or(s.hole_spin.take());
    if let Some(text) = m.lattice {
        let dims: Vec<usize> = text
            .split('x')
            .map(|v| v.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::Usage(format!("bad lattice {text:?}, expected e.g. 4x4")))?;
        match dims.as_slice() {
            [lx, ly] => s.lattice = Some([*lx, *ly]),
            _ => return Err(CliError::Usage(format!("bad lattice {text:?}, expected e.g. 4x4"))),
        }
    }
    cfg.scf.tol = m.tol.or(cfg.scf.tol);
    cfg.scf.max_iter = m.max_iter.or(cfg.scf.max_iter);
    cfg.scf.mixing = m.mixing.or(cfg.scf.mixing);
    cfg.berry.selection = m.selection.or(cfg.berry.selection.take());
    cfg.berry.min_step_overlap = m.min_step_overlap.or(cfg.berry.min_step_overlap);
    Ok(())
}

fn apply_path(cfg: &mut FileConfig, p: PathArgs) -> Result<(), CliError> {
    if let Some(sites) = p.sites {
        cfg.path.sites = Some(parse_sites(&sites)?);
        cfg.path.name = p.path.or(Some("custom".into()));
    } else if let Some(name) = p.path {
        cfg.path.name = Some(name);
        cfg.path.sites = None;
    }
    cfg.path.steps_per_segment = p.ns.or(cfg.path.steps_per_segment);
    Ok(())
}

fn apply_output(cfg: &mut FileConfig, o: OutputArgs) {
    cfg.output.format = o.format.or(cfg.output.format.take());
    cfg.output.path = o.output.or(cfg.output.path.take());
}

fn emit(table: &Table, rc: &RunConfig) -> Result<(), CliError> {
    let text = table.render(rc.format, &rc.hash());
    match &rc.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Twolevel(c) => {
            apply_output(&mut cfg, c.out);
            let rc = RunConfig::resolve(&cfg)?;
            let args = TwoLevelArgs {
                k: c.k,
                samples: c.n,
                radius: c.radius,
                start_angle: c.start_angle,
                cone_angle: c.cone_angle,
                ..TwoLevelArgs::default()
            };
            emit(&run::twolevel(&args)?, &rc)
        }
        Command::Path(c) => {
            apply_model(&mut cfg, c.model)?;
            apply_path(&mut cfg, c.path)?;
            apply_output(&mut cfg, c.out);
            let rc = RunConfig::resolve(&cfg)?;
            let (table, outcome) = run::path(&rc);
            if !table.rows.is_empty() {
                emit(&table, &rc)?;
            }
            outcome
        }
        Command::GapProfile(c) => {
            apply_model(&mut cfg, c.model)?;
            apply_path(&mut cfg, c.path)?;
            apply_output(&mut cfg, c.out);
            cfg.path.profile_points = c.points.or(cfg.path.profile_points);
            let rc = RunConfig::resolve(&cfg)?;
            emit(&run::gap_profile(&rc, c.wide)?, &rc)
        }
        Command::Sweep(c) => {
            apply_model(&mut cfg, c.model)?;
            apply_path(&mut cfg, c.path)?;
            apply_output(&mut cfg, c.out);
            cfg.sweep.u = c.u_values.or(cfg.sweep.u.take());
            cfg.sweep.g = c.g_values.or(cfg.sweep.g.take());
            cfg.sweep.paths = c.paths.or(cfg.sweep.paths.take());
            cfg.workers = c.workers.or(cfg.workers);
            let rc = RunConfig::resolve(&cfg)?;
            let (table, failures) = run::sweep(&rc)?;
            emit(&table, &rc)?;
            for line in &table.footer {
                eprintln!("{line}");
            }
            if failures > 0 {
                return Err(CliError::PartialSweep(failures));
            }
            Ok(())
        }
        Command::Catalog(o) => {
            apply_output(&mut cfg, o);
            let rc = RunConfig::resolve(&cfg)?;
            emit(&run::catalog(&rc.lattice), &rc)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("berry: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
