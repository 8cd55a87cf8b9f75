//! `zonorec`: build and draw tilings, run the cube recurrence and check the
//! main identities about it from the command line.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 a size cap
//! was hit, 4 a domain error (zero divisor, inexact division).

mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use zonorec::engine::{evaluate_path, extend_to_lattice, verify_cube_relations, Coefficient, EngineError, ExtendOptions, Labeling, Tropical};
use zonorec::forest::{all_flips, apply_flip, apply_move};
use zonorec::json::{self, AnyLabeling, JsonValue};
use zonorec::laurent::LaurentPoly;
use zonorec::paths::FlipPath;
use zonorec::render::{render_svg, RenderOptions};
use zonorec::zonogon::{
    enumerate_tilings, t_min, tiling_through_vertex, tiling_with_cube_faces, ArrangementOptions, CubeSide,
    LatticePoint, Tiling, ZonogonSpec,
};

#[derive(Parser)]
#[command(name = "zonorec", version, about = "Cube recurrence on rhombus tilings of zonogons")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "ZONOREC_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a tiling (or all of them).
    Tile(TileArgs),
    /// Flip a tiling at one or more vertices.
    Flip(FlipArgs),
    /// Run the recurrence from initial data.
    Run(RunArgs),
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: verify::Suite,
    },
    /// Draw a tiling as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["min", "through", "cube", "enumerate"])))]
struct TileArgs {
    /// Side multiplicities, e.g. 2,1,1.
    #[arg(long = "A", value_delimiter = ',', required = true)]
    a: Vec<u32>,
    /// The minimal tiling.
    #[arg(long)]
    min: bool,
    /// A tiling with this vertex, e.g. 1,0,1.
    #[arg(long)]
    through: Option<String>,
    /// A tiling containing three faces of the unit cube at this base point.
    #[arg(long, requires = "dirs")]
    cube: Option<String>,
    /// Cube directions j,k,l (1-based, increasing).
    #[arg(long, value_delimiter = ',')]
    dirs: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Side::Bottom)]
    side: Side,
    /// All tilings.
    #[arg(long)]
    enumerate: bool,
    /// Refuse to enumerate more tilings than this.
    #[arg(long, default_value_t = 10_000)]
    cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Bottom,
    Top,
}

#[derive(Args)]
#[command(group(ArgGroup::new("how").required(true).args(["at", "random"])))]
struct FlipArgs {
    #[arg(long)]
    tiling: PathBuf,
    /// Vertices to flip at, in order; repeat the flag for several.
    #[arg(long)]
    at: Vec<String>,
    /// Make this many random flips instead.
    #[arg(long)]
    random: Option<usize>,
    /// Write the flip path instead of the final tiling.
    #[arg(long)]
    path: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Domain {
    Rational,
    Laurent,
    Tropical,
}

#[derive(Clone, Copy, ValueEnum)]
enum Init {
    Ones,
    Zeros,
    Symbolic,
    Random,
}

#[derive(Args)]
#[command(group(ArgGroup::new("data").required(true).args(["labeling", "init"])))]
struct RunArgs {
    /// Start tiling; defaults to the start of --path.
    #[arg(long)]
    tiling: Option<PathBuf>,
    /// Initial values (labeling JSON); the domain is read from the file.
    #[arg(long)]
    labeling: Option<PathBuf>,
    /// Generate initial values instead of reading them.
    #[arg(long, value_enum)]
    init: Option<Init>,
    #[arg(long, value_enum, default_value_t = Domain::Rational)]
    domain: Domain,
    /// Evaluate along this flip path instead of over the whole box.
    #[arg(long)]
    path: Option<PathBuf>,
    /// Recompute every revisited value and check every cube relation.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    tiling: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Pixels per unit edge.
    #[arg(long, default_value_t = 40.0)]
    scale: f64,
    #[arg(long)]
    labels: bool,
    #[arg(long)]
    no_forest: bool,
}

/// An error with the exit code it should produce.
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

pub const VERIFY_FAILED: u8 = 1;
pub const BAD_INPUT: u8 = 2;
pub const CAP_EXCEEDED: u8 = 3;
pub const DOMAIN_ERROR: u8 = 4;

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: BAD_INPUT,
            error: e.into(),
        }
    }
}

pub fn fail(code: u8, error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code,
        error: error.into(),
    }
}

pub type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Tile(args) => cmd_tile(args, cli.seed),
        Command::Flip(args) => cmd_flip(args, cli.seed),
        Command::Run(args) => cmd_run(args, cli.seed),
        Command::Verify { suite } => verify::run(suite, cli.seed),
        Command::Render(args) => cmd_render(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

pub fn spec_from(a: &[u32]) -> CliResult<Arc<ZonogonSpec>> {
    Ok(json::parse_spec(a)?)
}

fn parse_point(spec: &ZonogonSpec, s: &str) -> CliResult<LatticePoint> {
    let coords: Vec<u32> = s
        .split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("bad point {s:?}"))?;
    spec.point(&coords)
        .ok_or_else(|| fail(BAD_INPUT, anyhow!("point {s} is not in the box {:?}", spec.a())))
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?)
}

fn read_tiling(path: &Path) -> CliResult<Tiling> {
    Ok(json::tiling_from_json(&read_json(path)?).with_context(|| format!("in {}", path.display()))?)
}

/// Writes to `out`, or to stdout when absent.
fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json(out: Option<&Path>, v: &Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    emit(out, &text)
}

fn cmd_tile(args: TileArgs, seed: u64) -> CliResult<()> {
    let spec = spec_from(&args.a)?;
    let opts = ArrangementOptions {
        seed,
        ..Default::default()
    };
    let domain = |e: zonorec::zonogon::ConstructError| fail(DOMAIN_ERROR, e);
    let v = if args.min {
        json::tiling_to_json(&t_min(&spec))
    } else if let Some(p) = &args.through {
        let p = parse_point(&spec, p)?;
        json::tiling_to_json(&tiling_through_vertex(&spec, &p, opts).map_err(domain)?)
    } else if let Some(base) = &args.cube {
        let base = parse_point(&spec, base)?;
        let dirs: [usize; 3] = args
            .dirs
            .iter()
            .map(|&d| d.checked_sub(1).filter(|&d| d < spec.n()))
            .collect::<Option<Vec<_>>>()
            .and_then(|v| v.try_into().ok())
            .ok_or_else(|| fail(BAD_INPUT, anyhow!("--dirs needs three directions in 1..={}", spec.n())))?;
        let side = match args.side {
            Side::Bottom => CubeSide::Bottom,
            Side::Top => CubeSide::Top,
        };
        let t = tiling_with_cube_faces(&spec, &base, dirs, side, opts).map_err(|e| fail(BAD_INPUT, e))?;
        json::tiling_to_json(&t)
    } else {
        let all = enumerate_tilings(&spec, args.cap).map_err(|e| fail(CAP_EXCEEDED, e))?;
        json::tilings_to_json(&all)
    };
    emit_json(args.out.as_deref(), &v)
}

fn cmd_flip(args: FlipArgs, seed: u64) -> CliResult<()> {
    let start = read_tiling(&args.tiling)?;
    let mut cur = start.clone();
    let mut moves = Vec::new();
    if let Some(count) = args.random {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..count {
            let options = all_flips(&cur);
            if options.is_empty() {
                break;
            }
            let mv = options[rng.gen_range(0..options.len())];
            cur = apply_move(&cur, &mv).map_err(|e| fail(DOMAIN_ERROR, e))?;
            moves.push(mv);
        }
    }
    for at in &args.at {
        let p = parse_point(cur.spec(), at)?;
        let (next, mv) = apply_flip(&cur, &p).map_err(|e| fail(DOMAIN_ERROR, e))?;
        cur = next;
        moves.push(mv);
    }
    let v = if args.path {
        json::path_to_json(&FlipPath { start, moves })
    } else {
        json::tiling_to_json(&cur)
    };
    emit_json(args.out.as_deref(), &v)
}

fn engine_failure(e: EngineError) -> Failure {
    let code = match e {
        EngineError::InvalidDivisor(_) | EngineError::Domain { .. } | EngineError::InvalidInitial(_) => DOMAIN_ERROR,
        EngineError::Inconsistent { .. } => VERIFY_FAILED,
        _ => BAD_INPUT,
    };
    fail(code, e)
}

fn generated<D: Coefficient>(t: &Tiling, f: impl FnMut(&LatticePoint) -> D) -> Labeling<D> {
    Labeling::on_tiling(t, f)
}

fn run_in<D: JsonValue>(
    init: &Labeling<D>,
    tiling: Option<&Tiling>,
    path: Option<&FlipPath>,
    check: bool,
    seed: u64,
) -> CliResult<Value> {
    if let Some(t) = path.map(|p| &p.start).or(tiling) {
        if t.spec().a() != init.spec().a() {
            return Err(fail(BAD_INPUT, anyhow!("labeling and tiling belong to different zonogons")));
        }
    }
    let out = match (path, tiling) {
        (Some(p), _) => evaluate_path(init, p).map_err(engine_failure)?,
        (None, Some(t)) => {
            let opts = ExtendOptions {
                seed,
                check_rate: if check { 1.0 } else { ExtendOptions::default().check_rate },
            };
            extend_to_lattice(t, init, opts).map_err(engine_failure)?
        }
        (None, None) => return Err(fail(BAD_INPUT, anyhow!("need --tiling or --path"))),
    };
    if check && out.is_total() {
        let report = verify_cube_relations(&out).map_err(engine_failure)?;
        if let Some(f) = report.first() {
            return Err(fail(VERIFY_FAILED, anyhow!("cube relation fails: {f}")));
        }
    }
    Ok(json::labeling_to_json(&out))
}

fn cmd_run(args: RunArgs, seed: u64) -> CliResult<()> {
    let path = args
        .path
        .as_deref()
        .map(|p| -> CliResult<FlipPath> { Ok(json::path_from_json(&read_json(p)?).with_context(|| format!("in {}", p.display()))?) })
        .transpose()?;
    let tiling = args.tiling.as_deref().map(read_tiling).transpose()?;
    if let (Some(p), Some(t)) = (&path, &tiling) {
        if &p.start != t {
            return Err(fail(BAD_INPUT, anyhow!("the path does not start at the given tiling")));
        }
    }
    let start = tiling.as_ref().or(path.as_ref().map(|p| &p.start));
    let (t, p) = (tiling.as_ref(), path.as_ref());
    let v = if let Some(file) = &args.labeling {
        let doc = read_json(file)?;
        match AnyLabeling::from_json(&doc).with_context(|| format!("in {}", file.display()))? {
            AnyLabeling::Rational(l) => run_in(&l, t, p, args.check, seed)?,
            AnyLabeling::Laurent(l) => run_in(&l, t, p, args.check, seed)?,
            AnyLabeling::Tropical(l) => run_in(&l, t, p, args.check, seed)?,
        }
    } else {
        let start = start.ok_or_else(|| fail(BAD_INPUT, anyhow!("need --tiling or --path")))?;
        let init = args.init.expect("clap enforces one of --labeling, --init");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match (args.domain, init) {
            (Domain::Rational, Init::Symbolic) | (Domain::Tropical, Init::Symbolic) => {
                return Err(fail(BAD_INPUT, anyhow!("symbolic data needs --domain laurent")));
            }
            (Domain::Laurent, Init::Symbolic) => {
                run_in(&generated(start, |p| LaurentPoly::var(*p)), t, p, args.check, seed)?
            }
            (Domain::Laurent, Init::Ones) => run_in(&generated(start, |_| LaurentPoly::one()), t, p, args.check, seed)?,
            (Domain::Laurent, _) => return Err(fail(BAD_INPUT, anyhow!("laurent runs take --init symbolic or ones"))),
            (Domain::Rational, init) => {
                let f = |rng: &mut ChaCha8Rng| match init {
                    Init::Ones => num_rational::BigRational::from_integer(1.into()),
                    Init::Zeros => num_rational::BigRational::from_integer(0.into()),
                    _ => num_rational::BigRational::new(rng.gen_range(1..=9i64).into(), rng.gen_range(1..=9i64).into()),
                };
                run_in(&generated(start, |_| f(&mut rng)), t, p, args.check, seed)?
            }
            (Domain::Tropical, init) => {
                let f = |rng: &mut ChaCha8Rng| match init {
                    Init::Ones => Tropical::from_integer(1),
                    Init::Zeros => Tropical::from_integer(0),
                    _ => Tropical::from_integer(rng.gen_range(-5..=5)),
                };
                run_in(&generated(start, |_| f(&mut rng)), t, p, args.check, seed)?
            }
        }
    };
    emit_json(args.out.as_deref(), &v)
}

fn cmd_render(args: RenderArgs) -> CliResult<()> {
    if !(args.scale.is_finite() && args.scale > 0.0) {
        return Err(fail(BAD_INPUT, anyhow!("--scale must be positive")));
    }
    let t = read_tiling(&args.tiling)?;
    let svg = render_svg(
        &t,
        RenderOptions {
            scale: args.scale,
            labels: args.labels,
            forest: !args.no_forest,
        },
    );
    emit(Some(&args.out), &svg)
}
