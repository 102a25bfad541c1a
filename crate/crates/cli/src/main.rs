//! `orbtrace`: render scenes, run the canned experiments and sweep scene
//! parameters.
//!
//! Exit codes: 0 success, 2 input error, 3 render or analysis error,
//! 4 experiment predicate failed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use orbtrace::experiment::{
    measure_scene, run_experiment, ExperimentError, ExperimentId, ExperimentSettings, SceneMetric,
};
use orbtrace::render::{render, ImageFormat, RenderError};
use orbtrace::scene::{parse_scene_with_overrides, Override, Scene, SceneConfig, SceneError};

#[derive(Parser)]
#[command(name = "orbtrace", version, about = "Glass orb renderer and measurement harness")]
struct Cli {
    /// Worker threads for rendering.
    #[arg(long, global = true, env = "ORBTRACE_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render a scene file to a PNG or PPM image.
    Render {
        scene: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        opts: SceneOpts,
    },
    /// Run one of the canned experiments and write its images and report.
    Experiment {
        /// One of: solid_vs_hollow, three_lines, three_lines_bent,
        /// fold_convergence, thickness_sweep, shift_1cm, calcite_birefringence.
        id: String,
        /// 256x256 at 16 samples per pixel instead of 1024x1024 at 256.
        #[arg(long)]
        fast: bool,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        spp: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Render a scene once per value of a numeric parameter and tabulate a
    /// metric as CSV.
    Sweep {
        /// Dotted scene path, such as `orb.thickness_mm`.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        values: Vec<f64>,
        scene: PathBuf,
        /// fold_displacement, line_displacement, inversion or mean_luminance.
        #[arg(long, default_value = "fold_displacement")]
        metric: String,
        /// CSV destination; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        opts: SceneOpts,
    },
}

#[derive(Args)]
struct SceneOpts {
    /// Samples per pixel, overriding the scene file.
    #[arg(long)]
    spp: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Scene override `block.key=value`; repeatable.
    #[arg(long = "set", value_name = "PATH=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Render(String),
    #[error("experiment {id} failed its predicate")]
    Predicate { id: ExperimentId },
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Render(_) => 3,
            CliError::Predicate { .. } => 4,
        }
    }
}

impl From<SceneError> for CliError {
    fn from(e: SceneError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<RenderError> for CliError {
    fn from(e: RenderError) -> Self {
        CliError::Render(e.to_string())
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::UnknownExperiment(_) | ExperimentError::Scene(_) | ExperimentError::NoSilhouette => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Render(e.to_string()),
        }
    }
}

fn parse_overrides(texts: &[String]) -> Result<Vec<Override>, CliError> {
    texts
        .iter()
        .map(|t| t.parse::<Override>().map_err(CliError::from))
        .collect()
}

fn read_scene(path: &Path, overrides: &[Override]) -> Result<SceneConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read scene {}: {e}", path.display())))?;
    parse_scene_with_overrides(&text, overrides).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn base_dir(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

fn apply_opts(cfg: &mut SceneConfig, opts: &SceneOpts) {
    if let Some(spp) = opts.spp {
        cfg.render.samples_per_pixel = spp;
    }
    if let Some(seed) = opts.seed {
        cfg.render.seed = seed;
    }
}

fn cmd_render(scene_path: &Path, output: &Path, opts: &SceneOpts, threads: usize) -> Result<(), CliError> {
    let format = ImageFormat::from_path(output).map_err(|e| CliError::Input(e.to_string()))?;
    let overrides = parse_overrides(&opts.overrides)?;
    let mut cfg = read_scene(scene_path, &overrides)?;
    apply_opts(&mut cfg, opts);
    let scene = Scene::build(&cfg, base_dir(scene_path))?;
    eprintln!("scene {}", scene_path.display());
    for ov in &overrides {
        eprintln!("override {}", ov.text);
    }
    let (film, stats) = render(&scene, &cfg.render, threads)?;
    orbtrace::render::write_image(&film.finalize(), output, format, cfg.render.gamma)?;
    eprintln!(
        "{}x{}, {} spp, seed {}, {} threads: {:.2} s, {:.0} paths/s",
        cfg.camera.width,
        cfg.camera.height,
        cfg.render.samples_per_pixel,
        cfg.render.seed,
        threads,
        stats.elapsed.as_secs_f64(),
        stats.paths_per_second()
    );
    if stats.clamped > 0 {
        eprintln!("{} non-finite samples dropped", stats.clamped);
    }
    Ok(())
}

fn cmd_experiment(
    id: &str,
    fast: bool,
    output: &Path,
    spp: Option<u32>,
    seed: Option<u64>,
    threads: usize,
) -> Result<(), CliError> {
    let id: ExperimentId = id.parse()?;
    let mut settings = if fast {
        ExperimentSettings::fast(threads)
    } else {
        ExperimentSettings::full(threads)
    };
    if let Some(spp) = spp {
        settings.samples_per_pixel = spp;
    }
    if let Some(seed) = seed {
        settings.seed = seed;
    }
    eprintln!(
        "experiment {id}: {0}x{0}, {1} spp, seed {2}",
        settings.resolution, settings.samples_per_pixel, settings.seed
    );
    let outcome = run_experiment(id, &settings)?;
    outcome.write(output, 2.2)?;
    for line in &outcome.summary {
        println!("{line}");
    }
    println!("result: {}", if outcome.passed { "pass" } else { "fail" });
    if outcome.passed {
        Ok(())
    } else {
        Err(CliError::Predicate { id })
    }
}

struct SweepArgs<'a> {
    param: &'a str,
    values: &'a [f64],
    scene: &'a Path,
    metric: &'a str,
    output: Option<&'a Path>,
    opts: &'a SceneOpts,
}

fn cmd_sweep(a: SweepArgs<'_>, threads: usize) -> Result<(), CliError> {
    let metric: SceneMetric = a.metric.parse().map_err(CliError::Input)?;
    let base = parse_overrides(&a.opts.overrides)?;
    let mut csv = format!("{},{}\n", a.param, metric);
    for &value in a.values {
        let ov: Override = format!("{}={value}", a.param).parse()?;
        let mut overrides = base.clone();
        overrides.push(ov);
        let mut cfg = read_scene(a.scene, &overrides)?;
        apply_opts(&mut cfg, a.opts);
        let m = measure_scene(&cfg, base_dir(a.scene), metric, &cfg.render, threads)?;
        let cell = m.map_or(String::new(), |v| format!("{v}"));
        eprintln!(
            "{} = {value}: {metric} {}",
            a.param,
            if cell.is_empty() { "failed" } else { &cell }
        );
        let _ = writeln!(csv, "{value},{cell}");
    }
    match a.output {
        Some(path) => {
            std::fs::write(path, csv).map_err(|e| CliError::Render(format!("cannot write {}: {e}", path.display())))?
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let threads = cli
        .threads
        .filter(|&n| n > 0)
        .unwrap_or_else(orbtrace::render::default_threads);
    match &cli.command {
        Command::Render { scene, output, opts } => cmd_render(scene, output, opts, threads),
        Command::Experiment {
            id,
            fast,
            output,
            spp,
            seed,
        } => cmd_experiment(id, *fast, output, *spp, *seed, threads),
        Command::Sweep {
            param,
            values,
            scene,
            metric,
            output,
            opts,
        } => cmd_sweep(
            SweepArgs {
                param,
                values,
                scene,
                metric,
                output: output.as_deref(),
                opts,
            },
            threads,
        ),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
