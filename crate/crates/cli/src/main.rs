use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use roadnet::apls::{apls, AplsParams};
use roadnet::extract::{extract_network, ExtractParams};
use roadnet::harness::{aggregate, emit_report, load_any_network, read_manifest, run_experiment};
use roadnet::io::{load_mask, load_network, save_graph, save_mask};
use roadnet::raster::GeoTransform;
use roadnet::render::{rasterize_network, RenderParams, DEFAULT_BUFFER_M};
use roadnet::{Error, Result};

#[derive(Parser)]
#[command(name = "roadnet", version, about = "Road speed masks, graph extraction and APLS scoring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rasterize a GeoJSON road network into a 7-channel speed mask.
    Render(RenderArgs),
    /// Extract a road graph from a saved speed mask.
    Extract(ExtractArgs),
    /// Score a proposal graph against ground truth.
    Score(ScoreArgs),
    /// Score every tile in a manifest and write angle reports.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct RenderArgs {
    network: PathBuf,
    /// Ground sample distance in metres per pixel.
    #[arg(long)]
    gsd: f64,
    #[arg(long, default_value_t = DEFAULT_BUFFER_M)]
    buffer: f64,
    /// Output directory for the channel PNGs and sidecar.
    #[arg(long)]
    out: PathBuf,
    /// Defaults to the input file stem.
    #[arg(long)]
    tile_id: Option<String>,
    /// Window size and origin; default to the network extent plus the buffer.
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    height: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    origin_x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    origin_y: Option<f64>,
}

#[derive(Args)]
struct ExtractArgs {
    mask_dir: PathBuf,
    tile_id: String,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    params: ExtractFlags,
}

#[derive(Args)]
struct ExtractFlags {
    #[arg(long, default_value_t = 0.3)]
    binarize_threshold: f64,
    #[arg(long, default_value_t = 2)]
    closing_radius_px: usize,
    #[arg(long, default_value_t = 50)]
    min_blob_area_px: usize,
    #[arg(long, default_value_t = 12.0)]
    spur_len_m: f64,
    #[arg(long, default_value_t = 2)]
    patch_radius_px: usize,
}

impl ExtractFlags {
    fn params(&self) -> ExtractParams {
        ExtractParams {
            binarize_threshold: self.binarize_threshold,
            closing_radius_px: self.closing_radius_px,
            min_blob_area_px: self.min_blob_area_px,
            spur_len_m: self.spur_len_m,
            patch_radius_px: self.patch_radius_px,
        }
    }
}

#[derive(Args)]
struct AplsFlags {
    #[arg(long, default_value_t = 4.0)]
    snap: f64,
    /// Control point spacing in metres; `inf` disables injection.
    #[arg(long, default_value_t = 50.0)]
    spacing: f64,
}

impl AplsFlags {
    fn params(&self) -> Result<AplsParams> {
        AplsParams::new(self.snap, self.spacing)
    }
}

#[derive(Args)]
struct ScoreArgs {
    /// Graph JSON or GeoJSON.
    #[arg(long)]
    gt: PathBuf,
    #[arg(long)]
    prop: PathBuf,
    #[command(flatten)]
    apls: AplsFlags,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    #[command(flatten)]
    apls: AplsFlags,
    #[command(flatten)]
    extract: ExtractFlags,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn render(args: RenderArgs) -> Result<()> {
    let network = load_network(&args.network)?;
    let pad = args.buffer.max(0.0) + args.gsd;
    let bbox = network.bbox();
    let origin_x = args.origin_x.or(bbox.map(|b| (b.min.x - pad).floor())).unwrap_or(0.0);
    let origin_y = args.origin_y.or(bbox.map(|b| (b.max.y + pad).ceil())).unwrap_or(0.0);
    let transform = GeoTransform::new(origin_x, origin_y, args.gsd)?;
    let span = |extent: Option<f64>| extent.map_or(1, |e| ((e / args.gsd).ceil() as usize).max(1));
    let width = args.width.unwrap_or_else(|| span(bbox.map(|b| b.max.x + pad - origin_x)));
    let height = args.height.unwrap_or_else(|| span(bbox.map(|b| origin_y - (b.min.y - pad))));
    let params = RenderParams::new(args.buffer, transform, width, height)?;
    let mask = rasterize_network(&network, &params)?;
    let tile_id = match args.tile_id {
        Some(id) => id,
        None => args
            .network
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("tile")
            .to_string(),
    };
    save_mask(&mask, &args.out, &tile_id)?;
    println!("wrote {width}x{height} mask {tile_id} to {}", args.out.display());
    Ok(())
}

fn extract(args: ExtractArgs) -> Result<()> {
    let mask = load_mask(&args.mask_dir, &args.tile_id)?;
    let network = extract_network(&mask, &args.params.params())?;
    save_graph(&network, &args.out)?;
    println!(
        "extracted {} nodes, {} edges to {}",
        network.node_count(),
        network.edge_count(),
        args.out.display()
    );
    Ok(())
}

fn score(args: ScoreArgs) -> Result<()> {
    let params = args.apls.params()?;
    let gt = load_any_network(&args.gt)?;
    let prop = load_any_network(&args.prop)?;
    let scores = apls(&gt, &prop, &params)?;
    println!("apls_length={:.6} apls_time={:.6}", scores.apls_length, scores.apls_time);
    Ok(())
}

fn experiment(args: ExperimentArgs) -> Result<()> {
    let apls_params = args.apls.params()?;
    let extract_params = args.extract.params();
    extract_params.validate()?;
    let records = read_manifest(&args.manifest)?;
    let outcome = run_experiment(&records, &extract_params, &apls_params, args.workers)?;
    for failure in &outcome.failures {
        eprintln!("skipped: {failure}");
    }
    if outcome.scores.is_empty() {
        if let Some(first) = outcome.failures.into_iter().next() {
            return Err(first);
        }
        return Err(Error::Validation("manifest has no tiles".into()));
    }
    let report = aggregate(&outcome.scores)?;
    emit_report(&report, &args.out_dir)?;
    println!(
        "scored {} tiles, {} failed; reports in {}",
        outcome.scores.len(),
        outcome.failures.len(),
        args.out_dir.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Render(a) => render(a),
        Command::Extract(a) => extract(a),
        Command::Score(a) => score(a),
        Command::Experiment(a) => experiment(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_io_or_parse() {
        2
    } else {
        1
    }
}
