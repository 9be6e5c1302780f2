use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use dgsnmf_cli::cube_file::{read_cube, write_cube};
use dgsnmf_cli::image::{parse_palette, render_grayscale, render_pseudo_color, DEFAULT_PALETTE};
use dgsnmf_cli::matrix_file::{grid_to_map, map_to_grid, read_matrix, write_matrix};
use dgsnmf_cli::report::{report_csv, report_table};
use dgsnmf_cli::trace::write_trace;
use dgsnmf_core::dgmap::{
    build_matting_laplacian, estimate_dgmap, fine_tune, initial_dgmap, rescale, DgMap, DgMapParams,
    SimilarityMeasure,
};
use dgsnmf_core::metrics::evaluate;
use dgsnmf_core::synth::{generate, MixingProfile, SceneSpec};
use dgsnmf_core::unmix::{self, InitScheme};
use dgsnmf_core::{FactorPair, HyperCube, RegularizerKind, SolverConfig};

/// Data-guided sparse NMF for hyperspectral unmixing
#[derive(Parser)]
#[command(name = "dgsnmf", version)]
struct Cli {
    /// More log output (repeat for more)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic scene with ground truth
    Synth(SynthArgs),
    /// Estimate the guidance map of a cube
    Dgmap(DgmapArgs),
    /// Factorize a cube into endmembers and abundances
    Unmix(UnmixArgs),
    /// Score estimated factors against ground truth
    Eval(EvalArgs),
    /// Render abundances as a pseudo-colour or grayscale image
    Render(RenderArgs),
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 20)]
    width: usize,
    #[arg(long, default_value_t = 20)]
    height: usize,
    #[arg(long, default_value_t = 30)]
    channels: usize,
    /// Number of endmembers
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    transition_width: usize,
    /// Standard deviation of the additive noise
    #[arg(long, default_value_t = 0.01)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Profile::Hard)]
    profile: Profile,
    /// Output directory: cube.hsc, M_true.csv, A_true.csv
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Hard,
    Gradient,
}

#[derive(Clone, Copy, ValueEnum)]
enum Measure {
    Heat,
    Dot,
}

#[derive(Args)]
struct DgmapFlags {
    /// Heat-kernel bandwidth [default: 0.02]
    #[arg(long)]
    sigma: Option<f64>,
    /// Refinement strength, smaller propagates further [default: 1e-5]
    #[arg(long)]
    alpha: Option<f64>,
    /// Matting-window regularizer [default: 1e-5]
    #[arg(long)]
    epsilon: Option<f64>,
    /// Odd matting-window side length [default: 3]
    #[arg(long)]
    window: Option<usize>,
    /// Neighbour similarity [default: heat]
    #[arg(long, value_enum)]
    measure: Option<Measure>,
    /// Guard of the [0, 1) rescale [default: 1e-8]
    #[arg(long)]
    beta: Option<f64>,
    /// Relative residual of the refinement solve [default: 1e-8]
    #[arg(long)]
    cg_tol: Option<f64>,
    /// [default: 10 x pixels]
    #[arg(long)]
    cg_max_iters: Option<usize>,
}

impl DgmapFlags {
    fn params(&self) -> DgMapParams {
        let d = DgMapParams::default();
        DgMapParams {
            sigma: self.sigma.unwrap_or(d.sigma),
            alpha: self.alpha.unwrap_or(d.alpha),
            epsilon: self.epsilon.unwrap_or(d.epsilon),
            beta: self.beta.unwrap_or(d.beta),
            window: self.window.unwrap_or(d.window),
            measure: match self.measure {
                Some(Measure::Heat) => SimilarityMeasure::Heat,
                Some(Measure::Dot) => SimilarityMeasure::Dot,
                None => d.measure,
            },
            cg_tol: self.cg_tol.unwrap_or(d.cg_tol),
            cg_max_iters: self.cg_max_iters.or(d.cg_max_iters),
            fine_tune: true,
        }
    }
}

#[derive(Args)]
struct DgmapArgs {
    /// Input cube (HSCUBE1)
    #[arg(long)]
    cube: PathBuf,
    #[command(flatten)]
    flags: DgmapFlags,
    /// Output directory: dgmap.csv, dgmap_initial.csv and their .pgm renders
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Reg {
    None,
    L1,
    Lhalf,
    Dg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Init {
    Random,
    Pixels,
}

#[derive(Args)]
struct UnmixArgs {
    /// Input cube (HSCUBE1)
    #[arg(long)]
    cube: PathBuf,
    /// Number of endmembers
    #[arg(long)]
    k: usize,
    /// Sparsity weight [default: 0.1]
    #[arg(long)]
    lambda: Option<f64>,
    /// Offset inside the penalty powers [default: 1e-8]
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long, value_enum, default_value_t = Reg::None)]
    reg: Reg,
    /// Guidance map CSV written by `dgmap`
    #[arg(long, conflicts_with = "auto_dgmap")]
    dgmap: Option<PathBuf>,
    /// Estimate the guidance map from the cube before unmixing
    #[arg(long)]
    auto_dgmap: bool,
    #[command(flatten)]
    dgmap_flags: DgmapFlags,
    /// Initialization seed [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// [default: 1000]
    #[arg(long)]
    max_iters: Option<usize>,
    /// Stop once the relative objective decrement falls below this [default: 1e-6]
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Init::Random)]
    init: Init,
    /// Output directory: M.csv, A.csv, trace.csv
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Estimated endmembers (L x K CSV)
    #[arg(long)]
    m: PathBuf,
    /// Estimated abundances (K x N CSV)
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    truth_m: PathBuf,
    #[arg(long)]
    truth_a: PathBuf,
    /// Scale every estimated abundance column to sum to one first
    #[arg(long)]
    normalize: bool,
    /// Also write the report as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Abundances (K x N CSV)
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    width: usize,
    #[arg(long)]
    height: usize,
    /// Render only this abundance row, in grayscale (PGM)
    #[arg(long)]
    row: Option<usize>,
    /// Comma-separated rrggbb colours, one per endmember
    #[arg(long)]
    palette: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(clap::Error),
    Data(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self::Data(e)
    }
}

impl From<dgsnmf_cli::Error> for Failure {
    fn from(e: dgsnmf_cli::Error) -> Self {
        Self::Data(e.into())
    }
}

impl From<dgsnmf_core::Error> for Failure {
    fn from(e: dgsnmf_core::Error) -> Self {
        Self::Data(e.into())
    }
}

fn usage(kind: ErrorKind, message: impl std::fmt::Display) -> Failure {
    Failure::Usage(Cli::command().error(kind, message))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).init();

    let result = match cli.command {
        Command::Synth(args) => synth(args),
        Command::Dgmap(args) => dgmap(args),
        Command::Unmix(args) => unmix_cmd(args),
        Command::Eval(args) => eval(args),
        Command::Render(args) => render(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            let _ = e.print();
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn create_dir(dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn synth(args: SynthArgs) -> Result<(), Failure> {
    let spec = SceneSpec {
        width: args.width,
        height: args.height,
        channels: args.channels,
        endmembers: args.k,
        transition_width: args.transition_width,
        noise_sigma: args.noise,
        seed: args.seed,
        profile: match args.profile {
            Profile::Hard => MixingProfile::HardRegions,
            Profile::Gradient => MixingProfile::LinearGradient,
        },
    };
    let (cube, truth) = generate(&spec)?;
    create_dir(&args.out)?;
    write_cube(&cube, args.out.join("cube.hsc"))?;
    write_matrix(&truth.endmembers, args.out.join("M_true.csv"))?;
    write_matrix(&truth.abundances, args.out.join("A_true.csv"))?;
    log::info!("wrote {}x{}x{} scene to {}", spec.width, spec.height, spec.channels, args.out.display());
    Ok(())
}

fn dgmap(args: DgmapArgs) -> Result<(), Failure> {
    let params = args.flags.params();
    let cube = read_cube(&args.cube)?;
    let h0 = initial_dgmap(&cube, params.sigma, params.measure)?;
    let lap = build_matting_laplacian(&cube, params.epsilon, params.window)?;
    let h = fine_tune(&lap, &h0, params.alpha, params.cg_tol, params.cg_max_iters)?;
    let initial = rescale(&h0, params.beta);
    let map = DgMap::from_raw(h, params.beta)?;

    let (w, ht) = (cube.width(), cube.height());
    create_dir(&args.out)?;
    write_matrix(&map_to_grid(&initial, w, ht)?, args.out.join("dgmap_initial.csv"))?;
    write_matrix(&map_to_grid(map.scaled(), w, ht)?, args.out.join("dgmap.csv"))?;
    render_grayscale(&initial, w, ht)?.write(args.out.join("dgmap_initial.pgm"))?;
    render_grayscale(map.scaled(), w, ht)?.write(args.out.join("dgmap.pgm"))?;
    Ok(())
}

fn load_dgmap(path: &Path, cube: &HyperCube) -> Result<DgMap, Failure> {
    let (values, w, h) = grid_to_map(&read_matrix(path)?);
    if (w, h) != (cube.width(), cube.height()) {
        return Err(anyhow::anyhow!(
            "{}: {w}x{h} map for a {}x{} cube",
            path.display(),
            cube.width(),
            cube.height()
        )
        .into());
    }
    DgMap::from_scaled(values).with_context(|| path.display().to_string()).map_err(Failure::Data)
}

fn unmix_cmd(args: UnmixArgs) -> Result<(), Failure> {
    if args.reg == Reg::Dg && args.dgmap.is_none() && !args.auto_dgmap {
        return Err(usage(
            ErrorKind::MissingRequiredArgument,
            "--reg dg needs a guidance map: pass --dgmap PATH or --auto-dgmap",
        ));
    }
    if args.reg != Reg::Dg && (args.dgmap.is_some() || args.auto_dgmap) {
        return Err(usage(ErrorKind::ArgumentConflict, "--dgmap and --auto-dgmap only apply to --reg dg"));
    }
    let cube = read_cube(&args.cube)?;
    let regularizer = match args.reg {
        Reg::None => RegularizerKind::None,
        Reg::L1 => RegularizerKind::L1,
        Reg::Lhalf => RegularizerKind::LHalf,
        Reg::Dg => RegularizerKind::DataGuided(match &args.dgmap {
            Some(path) => load_dgmap(path, &cube)?,
            None => estimate_dgmap(&cube, &args.dgmap_flags.params())?,
        }),
    };
    let d = SolverConfig::default();
    let p = args.dgmap_flags.params();
    let config = SolverConfig {
        lambda: args.lambda.unwrap_or(d.lambda),
        xi: args.xi.unwrap_or(d.xi),
        sigma: p.sigma,
        alpha: p.alpha,
        epsilon: p.epsilon,
        beta: p.beta,
        window: p.window,
        measure: p.measure,
        cg_tol: p.cg_tol,
        cg_max_iters: p.cg_max_iters,
        max_iters: args.max_iters.unwrap_or(d.max_iters),
        rel_tol: args.rel_tol.unwrap_or(d.rel_tol),
        seed: args.seed.unwrap_or(d.seed),
        init: match args.init {
            Init::Random => InitScheme::Random,
            Init::Pixels => InitScheme::DataPixels,
        },
        regularizer,
    };
    let (factors, trace) = unmix::run(&cube, args.k, &config)?;
    create_dir(&args.out)?;
    write_matrix(&factors.endmembers, args.out.join("M.csv"))?;
    write_matrix(&factors.abundances, args.out.join("A.csv"))?;
    write_trace(&trace, args.out.join("trace.csv"))?;
    log::info!(
        "{} iterations ({:?}), final objective {:e}",
        trace.iterations_run,
        trace.stop_reason,
        trace.objective_per_iter.last().copied().unwrap_or(f64::NAN)
    );
    Ok(())
}

fn eval(args: EvalArgs) -> Result<(), Failure> {
    let mut estimate = FactorPair::new(read_matrix(&args.m)?, read_matrix(&args.a)?)?;
    if args.normalize {
        estimate.abundances = estimate.normalized_abundances();
    }
    let truth = FactorPair::new(read_matrix(&args.truth_m)?, read_matrix(&args.truth_a)?)?;
    let report = evaluate(&estimate, &truth)?;
    print!("{}", report_table(&report));
    if let Some(path) = &args.csv {
        fs::write(path, report_csv(&report)).with_context(|| path.display().to_string())?;
    }
    Ok(())
}

fn render(args: RenderArgs) -> Result<(), Failure> {
    let a = read_matrix(&args.a)?;
    let image = match args.row {
        Some(row) => {
            if row >= a.rows() {
                return Err(usage(
                    ErrorKind::InvalidValue,
                    format!("--row {row} but the abundances have {} rows", a.rows()),
                ));
            }
            let share: Vec<f64> = (0..a.cols())
                .map(|n| {
                    let total: f64 = a.col(n).iter().sum();
                    if total > 0.0 { a[(row, n)] / total } else { 0.0 }
                })
                .collect();
            render_grayscale(&share, args.width, args.height)?
        }
        None => {
            let palette = match &args.palette {
                Some(text) => parse_palette(text)?,
                None => DEFAULT_PALETTE.to_vec(),
            };
            render_pseudo_color(&a, args.width, args.height, &palette)?
        }
    };
    image.write(&args.out)?;
    Ok(())
}
