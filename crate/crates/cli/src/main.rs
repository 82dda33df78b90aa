use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use scriptogen::evaluation::{
    count_velocity_peaks, extract_features, maturity_curve, similarity, CurveOptions,
    SimilarityWeights, DEFAULT_PROMINENCE,
};
use scriptogen::evolution::min_maturity;
use scriptogen::raster::Raster;
use scriptogen::render::{
    export_png, export_svg, export_trajectory, import_trajectory, render_offline, write_atomic,
    OutputFormat, RunConfig, DEFAULT_RESOLUTION,
};
use scriptogen::{synthesize_word, GlyphLibrary};

/// Synthetic handwriting at a chosen graphic maturity.
#[derive(Parser)]
#[command(name = "scriptogen", version)]
struct Cli {
    /// Random seed for plan simplification and motor noise.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// TOML run configuration; its settings override command-line flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Glyph library file (defaults to the built-in vowels).
    #[arg(long, global = true)]
    glyphs: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize one word and write trajectory, SVG and PNG files.
    Synth(SynthArgs),
    /// Run the maturity sweep and print the summary table.
    Sweep(SweepArgs),
    /// Count velocity peaks in a trajectory file.
    Analyze(AnalyzeArgs),
    /// Similarity score between two word images.
    Compare(CompareArgs),
    /// Validate and list the glyph library.
    Glyphs,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long)]
    word: Option<String>,
    #[arg(long)]
    k_sigma: Option<f64>,
    #[arg(long)]
    k_t: Option<f64>,
    #[arg(long)]
    k_alpha: Option<f64>,
    #[arg(long)]
    k_d: Option<f64>,
    /// Onset jitter, seconds (default: from the maturity schedule).
    #[arg(long)]
    eps_t: Option<f64>,
    /// Amplitude error, fraction of the grid pitch (default: from the
    /// maturity schedule).
    #[arg(long)]
    eps_d: Option<f64>,
    #[arg(long)]
    max_legibility_retries: Option<usize>,
    /// Raster resolution, pixels per mm.
    #[arg(long)]
    resolution: Option<f64>,
    #[arg(long)]
    nib_radius: Option<f64>,
    #[arg(long)]
    speed_thinning: Option<f64>,
}

impl ProfileArgs {
    fn to_config(&self) -> RunConfig {
        RunConfig {
            word: self.word.clone(),
            k_sigma: self.k_sigma,
            k_t: self.k_t,
            k_alpha: self.k_alpha,
            k_d: self.k_d,
            eps_t: self.eps_t,
            eps_d: self.eps_d,
            max_legibility_retries: self.max_legibility_retries,
            resolution: self.resolution,
            nib_radius: self.nib_radius,
            speed_thinning: self.speed_thinning,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    /// Percentage of plan points kept, 100 for the least mature writer.
    #[arg(long = "E")]
    e: Option<f64>,
    /// Output path without extension.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated subset of traj, svg, png.
    #[arg(long, value_delimiter = ',', value_parser = parse_format)]
    format: Option<Vec<OutputFormat>>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    /// Comma-separated maturity levels.
    #[arg(long = "E", value_delimiter = ',')]
    e: Option<Vec<f64>>,
    /// Samples per maturity level.
    #[arg(long)]
    seeds: Option<usize>,
    /// Write the table here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    trajectory: PathBuf,
    /// Minimum peak prominence as a fraction of the maximum speed.
    #[arg(long, default_value_t = DEFAULT_PROMINENCE)]
    prominence: f64,
}

#[derive(Args)]
struct CompareArgs {
    first: PathBuf,
    second: PathBuf,
    /// Resolution both images were rendered at, pixels per mm.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    OutputFormat::parse(s).map_err(|e| e.to_string())
}

fn library(cfg: &RunConfig) -> Result<GlyphLibrary> {
    match &cfg.glyphs {
        Some(path) => GlyphLibrary::load(path)
            .with_context(|| format!("loading glyph library {}", path.display())),
        None => Ok(GlyphLibrary::builtin()),
    }
}

/// Flags first, then the config file on top.
fn resolve(cli: &Cli, flags: RunConfig) -> Result<RunConfig> {
    let flags = RunConfig {
        seed: cli.seed,
        glyphs: cli.glyphs.clone(),
        ..flags
    };
    let cfg = match &cli.config {
        Some(path) => flags.overlay(
            &RunConfig::load(path).with_context(|| format!("reading config {}", path.display()))?,
        ),
        None => flags,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn word(cfg: &RunConfig) -> Result<&str> {
    match cfg.word.as_deref() {
        Some(w) if !w.is_empty() => Ok(w),
        _ => bail!("no word given (use --word or set `word` in the config)"),
    }
}

fn synth(cli: &Cli, args: &SynthArgs) -> Result<()> {
    let cfg = resolve(
        cli,
        RunConfig {
            e: args.e,
            out: args.out.clone(),
            formats: args.format.clone(),
            ..args.profile.to_config()
        },
    )?;
    let lib = library(&cfg)?;
    let traj = synthesize_word(word(&cfg)?, &cfg.profile(), &cfg.evolution(), &lib)?;
    for format in cfg.formats() {
        let path = cfg.output_path(format);
        match format {
            OutputFormat::Traj => export_trajectory(&traj, &path)?,
            OutputFormat::Svg => export_svg(&traj, &cfg.ink(), &path)?,
            OutputFormat::Png => {
                export_png(&render_offline(&traj, &cfg.ink(), cfg.resolution()), &path)?
            }
        }
        println!("{}", path.display());
    }
    Ok(())
}

fn sweep(cli: &Cli, args: &SweepArgs) -> Result<()> {
    let cfg = resolve(
        cli,
        RunConfig {
            e_values: args.e.clone(),
            seeds: args.seeds,
            out: args.out.clone(),
            ..args.profile.to_config()
        },
    )?;
    let lib = library(&cfg)?;
    let e_values = cfg.e_values.clone().unwrap_or_else(|| vec![100.0, 50.0, 20.0]);
    let seeds = cfg.seeds.unwrap_or(10);
    if seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    let opts = CurveOptions {
        ink: cfg.ink(),
        resolution: cfg.resolution(),
        scale_noise: cfg.scheduled_noise(),
        ..Default::default()
    };
    let curve = maturity_curve(word(&cfg)?, &cfg.profile(), &e_values, seeds, &lib, &opts)?;
    let table = curve.to_csv();
    match &cfg.out {
        Some(path) => {
            write_atomic(path, table.as_bytes())?;
            println!("{}", path.display());
        }
        None => print!("{table}"),
    }
    Ok(())
}

fn analyze(args: &AnalyzeArgs) -> Result<()> {
    if !(0.0..1.0).contains(&args.prominence) {
        bail!("--prominence must lie in [0, 1)");
    }
    let traj = import_trajectory(&args.trajectory)?;
    println!("{}", count_velocity_peaks(&traj, args.prominence));
    Ok(())
}

fn load_image(path: &Path, resolution: f64) -> Result<Raster> {
    Ok(Raster::load_png(path, resolution)?)
}

fn compare(cli: &Cli, args: &CompareArgs) -> Result<()> {
    if !(args.resolution > 0.0) || !args.resolution.is_finite() {
        bail!("--resolution must be finite and > 0");
    }
    let cfg = resolve(cli, RunConfig::default())?;
    let layout = library(&cfg)?.guides;
    let a = extract_features(&load_image(&args.first, args.resolution)?, &layout);
    let b = extract_features(&load_image(&args.second, args.resolution)?, &layout);
    let w = SimilarityWeights {
        alpha: args.alpha,
        beta: args.beta,
    };
    println!("{:?}", similarity(&a, &b, w)?);
    Ok(())
}

fn glyphs(cli: &Cli) -> Result<()> {
    let cfg = resolve(cli, RunConfig::default())?;
    let lib = library(&cfg)?;
    let g = &lib.grid;
    println!(
        "grid {}x{} pitch {} mm, {} glyphs",
        g.n_cols,
        g.n_rows,
        g.pitch,
        lib.len()
    );
    println!("letter,nodes,pen_lifts,min_E");
    for glyph in lib.iter() {
        let lifts = glyph.pen_down.iter().filter(|&&d| !d).count();
        let n = glyph.nodes.len();
        println!("{},{n},{lifts},{:.2}", glyph.letter, min_maturity(n));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Synth(a) => synth(&cli, a),
        Command::Sweep(a) => sweep(&cli, a),
        Command::Analyze(a) => analyze(a),
        Command::Compare(a) => compare(&cli, a),
        Command::Glyphs => glyphs(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("scriptogen: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
