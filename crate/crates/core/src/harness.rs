//! Batch scoring of test tiles across signed nadir angles, aggregation into
//! per-angle and per-bin statistics, and CSV/SVG reports.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;

use crate::apls::{apls, AplsParams};
use crate::error::{Error, Result};
use crate::extract::{extract_network, ExtractParams};
use crate::io::{load_graph, load_mask, load_network};
use crate::network::RoadNetwork;

pub const MIN_ANGLE_DEG: f64 = 7.0;
pub const MAX_ANGLE_DEG: f64 = 53.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AngleBin {
    Nadir,
    Off,
    VeryOff,
    All,
}

impl AngleBin {
    pub const REPORTED: [AngleBin; 4] = [AngleBin::Nadir, AngleBin::Off, AngleBin::VeryOff, AngleBin::All];

    pub fn label(self) -> &'static str {
        match self {
            AngleBin::Nadir => "NADIR",
            AngleBin::Off => "OFF",
            AngleBin::VeryOff => "VOFF",
            AngleBin::All => "ALL",
        }
    }
}

impl fmt::Display for AngleBin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn check_angle(angle_deg: f64) -> Result<()> {
    if !(MIN_ANGLE_DEG..=MAX_ANGLE_DEG).contains(&angle_deg.abs()) {
        return Err(Error::Validation(format!(
            "nadir angle {angle_deg}° outside ±[{MIN_ANGLE_DEG}, {MAX_ANGLE_DEG}]"
        )));
    }
    Ok(())
}

/// Look-angle bin by absolute angle: up to 25° is NADIR, below 40° OFF, and
/// 40° or more VOFF. Every angle also belongs to ALL.
pub fn bin_for_angle(angle_deg: f64) -> Result<AngleBin> {
    check_angle(angle_deg)?;
    let a = angle_deg.abs();
    Ok(if a <= 25.0 {
        AngleBin::Nadir
    } else if a < 40.0 {
        AngleBin::Off
    } else {
        AngleBin::VeryOff
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Proposal {
    Graph(PathBuf),
    /// Mask file set `{tile_id}_ch{1..7}.png` + `{tile_id}.mask.json` in `dir`.
    Mask { dir: PathBuf, tile_id: String },
}

impl Proposal {
    /// A path ending in `.mask.json` names a mask sidecar; anything else a
    /// graph file.
    pub fn from_path(path: PathBuf) -> Proposal {
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        match name.strip_suffix(".mask.json") {
            Some(tile_id) if !tile_id.is_empty() => Proposal::Mask {
                tile_id: tile_id.to_string(),
                dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
            },
            _ => Proposal::Graph(path),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TileRecord {
    pub tile_id: String,
    /// Negative for south-facing collects.
    pub nadir_angle_deg: f64,
    pub gt_path: PathBuf,
    pub proposal: Proposal,
}

impl TileRecord {
    pub fn new(tile_id: impl Into<String>, nadir_angle_deg: f64, gt_path: PathBuf, proposal: Proposal) -> Result<Self> {
        check_angle(nadir_angle_deg)?;
        Ok(TileRecord { tile_id: tile_id.into(), nadir_angle_deg, gt_path, proposal })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TileScore {
    pub tile_id: String,
    pub angle_deg: f64,
    pub apls_length: f64,
    pub apls_time: f64,
}

/// Loads a road graph from either GeoJSON labels (`.geojson`) or a graph
/// JSON file.
pub fn load_any_network(path: &Path) -> Result<RoadNetwork> {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("geojson") => load_network(path),
        _ => load_graph(path),
    }
}

pub fn score_tile(record: &TileRecord, extract_params: &ExtractParams, apls_params: &AplsParams) -> Result<TileScore> {
    let run = || -> Result<TileScore> {
        let gt = load_any_network(&record.gt_path)?;
        let prop = match &record.proposal {
            Proposal::Graph(path) => load_any_network(path)?,
            Proposal::Mask { dir, tile_id } => extract_network(&load_mask(dir, tile_id)?, extract_params)?,
        };
        let scores = apls(&gt, &prop, apls_params)?;
        Ok(TileScore {
            tile_id: record.tile_id.clone(),
            angle_deg: record.nadir_angle_deg,
            apls_length: scores.apls_length,
            apls_time: scores.apls_time,
        })
    };
    run().map_err(|e| Error::Tile { tile_id: record.tile_id.clone(), source: Box::new(e) })
}

#[derive(Debug)]
pub struct ExperimentOutcome {
    /// Successful tiles, in manifest order.
    pub scores: Vec<TileScore>,
    pub failures: Vec<Error>,
}

/// Scores every tile on a pool of `workers` threads. Failing tiles are
/// collected rather than aborting the batch.
pub fn run_experiment(
    records: &[TileRecord],
    extract_params: &ExtractParams,
    apls_params: &AplsParams,
    workers: usize,
) -> Result<ExperimentOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Validation(format!("cannot start {workers} workers: {e}")))?;
    let results: Vec<Result<TileScore>> =
        pool.install(|| records.par_iter().map(|r| score_tile(r, extract_params, apls_params)).collect());
    let (mut scores, mut failures) = (Vec::new(), Vec::new());
    for r in results {
        match r {
            Ok(s) => scores.push(s),
            Err(e) => failures.push(e),
        }
    }
    Ok(ExperimentOutcome { scores, failures })
}

#[derive(Debug, Deserialize)]
struct ManifestRow {
    tile_id: String,
    angle_deg: f64,
    gt_path: PathBuf,
    prop_path: PathBuf,
}

/// Reads a manifest CSV with header `tile_id,angle_deg,gt_path,prop_path`.
/// Relative paths resolve against the manifest's directory.
pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<TileRecord>> {
    let path = path.as_ref();
    let base = path.parent().unwrap_or(Path::new(""));
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let context = path.display().to_string();
    let headers = reader.headers().map_err(|e| Error::parse(&context, e))?.clone();
    for required in ["tile_id", "angle_deg", "gt_path", "prop_path"] {
        if !headers.iter().any(|h| h == required) {
            return Err(Error::parse(&context, format!("missing column {required:?}")));
        }
    }
    let mut records = Vec::new();
    for (i, row) in reader.deserialize::<ManifestRow>().enumerate() {
        let row = row.map_err(|e| Error::parse(format!("{context}, row {}", i + 1), e))?;
        let gt_path = base.join(&row.gt_path);
        let proposal = Proposal::from_path(base.join(&row.prop_path));
        records.push(TileRecord::new(row.tile_id, row.angle_deg, gt_path, proposal)?);
    }
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupStats {
    pub n: usize,
    pub mean_apls_length: f64,
    pub sem_length: f64,
    pub mean_apls_time: f64,
    pub sem_time: f64,
}

/// Mean and standard error of the mean (sample standard deviation over
/// √n; 0 for a single value). Values are summed in sorted order so the
/// result does not depend on input order.
pub fn mean_sem(values: &[f64]) -> (f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let mut sq: Vec<f64> = v.iter().map(|x| (x - mean).powi(2)).collect();
    sq.sort_by(f64::total_cmp);
    let var = sq.iter().sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn group_stats(scores: &[&TileScore]) -> GroupStats {
    let lengths: Vec<f64> = scores.iter().map(|s| s.apls_length).collect();
    let times: Vec<f64> = scores.iter().map(|s| s.apls_time).collect();
    let (mean_apls_length, sem_length) = mean_sem(&lengths);
    let (mean_apls_time, sem_time) = mean_sem(&times);
    GroupStats { n: scores.len(), mean_apls_length, sem_length, mean_apls_time, sem_time }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngleReport {
    /// One row per distinct signed angle, ascending.
    pub angles: Vec<(f64, GroupStats)>,
    /// Non-empty bins in NADIR, OFF, VOFF, ALL order.
    pub bins: Vec<(AngleBin, GroupStats)>,
}

pub fn aggregate(scores: &[TileScore]) -> Result<AngleReport> {
    if scores.is_empty() {
        return Err(Error::Validation("no scored tiles to aggregate".into()));
    }
    let mut sorted: Vec<&TileScore> = scores.iter().collect();
    sorted.sort_by(|a, b| a.angle_deg.total_cmp(&b.angle_deg));
    let angles = sorted
        .chunk_by(|a, b| a.angle_deg == b.angle_deg)
        .map(|group| (group[0].angle_deg, group_stats(group)))
        .collect();

    let mut bins = Vec::new();
    for bin in AngleBin::REPORTED {
        let members: Vec<&TileScore> = scores
            .iter()
            .map(|s| Ok((bin_for_angle(s.angle_deg)?, s)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|(b, _)| bin == AngleBin::All || *b == bin)
            .map(|(_, s)| s)
            .collect();
        if !members.is_empty() {
            bins.push((bin, group_stats(&members)));
        }
    }
    Ok(AngleReport { angles, bins })
}

fn stats_fields(s: &GroupStats) -> [String; 5] {
    [
        s.n.to_string(),
        format!("{:.6}", s.mean_apls_length),
        format!("{:.6}", s.sem_length),
        format!("{:.6}", s.mean_apls_time),
        format!("{:.6}", s.sem_time),
    ]
}

fn write_csv(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let to_io = |e: csv::Error| Error::io(path, e.into());
    let mut w = csv::Writer::from_path(path).map_err(to_io)?;
    w.write_record(header).map_err(to_io)?;
    for row in rows {
        w.write_record(&row).map_err(to_io)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

const STAT_COLUMNS: [&str; 5] = ["n", "mean_apls_length", "sem_length", "mean_apls_time", "sem_time"];

/// Writes `angles.csv`, `bins.csv`, `sawtooth.svg` and `signed.svg` into
/// `out_dir`.
pub fn emit_report(report: &AngleReport, out_dir: impl AsRef<Path>) -> Result<()> {
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let header: Vec<&str> = std::iter::once("angle_deg").chain(STAT_COLUMNS).collect();
    write_csv(
        &out_dir.join("angles.csv"),
        &header,
        report.angles.iter().map(|(a, s)| std::iter::once(a.to_string()).chain(stats_fields(s)).collect()),
    )?;
    let header: Vec<&str> = std::iter::once("bin").chain(STAT_COLUMNS).collect();
    write_csv(
        &out_dir.join("bins.csv"),
        &header,
        report.bins.iter().map(|(b, s)| std::iter::once(b.to_string()).chain(stats_fields(s)).collect()),
    )?;

    for (name, svg) in [("sawtooth.svg", sawtooth_svg(report)), ("signed.svg", signed_svg(report))] {
        let path = out_dir.join(name);
        fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 400.0;
const MARGIN: f64 = 50.0;
const NORTH_COLOR: &str = "#1f77b4";
const SOUTH_COLOR: &str = "#d62728";

struct Plot {
    x_min: f64,
    x_max: f64,
    svg: String,
}

impl Plot {
    fn new(title: &str, x_label: &str, x_min: f64, x_max: f64) -> Plot {
        let mut p = Plot { x_min, x_max, svg: String::new() };
        let (l, r, t, b) = (MARGIN, SVG_W - MARGIN, MARGIN, SVG_H - MARGIN);
        let _ = writeln!(
            p.svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}" font-family="sans-serif" font-size="11">"#
        );
        let _ = writeln!(p.svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(p.svg, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{title}</text>"#, SVG_W / 2.0);
        let _ = writeln!(p.svg, r#"<line x1="{l}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>"#);
        let _ = writeln!(p.svg, r#"<line x1="{l}" y1="{t}" x2="{l}" y2="{b}" stroke="black"/>"#);
        for k in 0..=5 {
            let v = f64::from(k) * 0.2;
            let y = p.y(v);
            let _ = writeln!(p.svg, r#"<line x1="{}" y1="{y:.2}" x2="{l}" y2="{y:.2}" stroke="black"/>"#, l - 4.0);
            let _ = writeln!(p.svg, r#"<text x="{}" y="{:.2}" text-anchor="end">{v:.1}</text>"#, l - 6.0, y + 4.0);
        }
        let mut tick = (x_min / 10.0).ceil() * 10.0;
        while tick <= x_max {
            let x = p.x(tick);
            let _ = writeln!(p.svg, r#"<line x1="{x:.2}" y1="{b}" x2="{x:.2}" y2="{}" stroke="black"/>"#, b + 4.0);
            let _ = writeln!(p.svg, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{tick}</text>"#, b + 16.0);
            tick += 10.0;
        }
        let _ = writeln!(p.svg, r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#, SVG_W / 2.0, SVG_H - 12.0);
        let _ = writeln!(
            p.svg,
            r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">mean APLS_time</text>"#,
            SVG_H / 2.0,
            SVG_H / 2.0
        );
        p
    }

    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.x_min) / (self.x_max - self.x_min) * (SVG_W - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        SVG_H - MARGIN - v.clamp(0.0, 1.0) * (SVG_H - 2.0 * MARGIN)
    }

    fn polyline(&mut self, points: &[(f64, f64)]) {
        let coords: Vec<String> = points.iter().map(|&(a, v)| format!("{:.2},{:.2}", self.x(a), self.y(v))).collect();
        let _ = writeln!(self.svg, r#"<polyline points="{}" fill="none" stroke="gray"/>"#, coords.join(" "));
    }

    fn finish(mut self) -> String {
        self.svg.push_str("</svg>\n");
        self.svg
    }
}

fn color(angle: f64) -> (&'static str, &'static str) {
    if angle < 0.0 {
        ("marker south", SOUTH_COLOR)
    } else {
        ("marker", NORTH_COLOR)
    }
}

/// Mean APLS_time against |angle|; south-facing collects drawn in red.
fn sawtooth_svg(report: &AngleReport) -> String {
    let mut plot = Plot::new("APLS_time by absolute nadir angle", "|nadir angle| (deg)", 0.0, 60.0);
    let mut pts: Vec<(f64, f64)> = report.angles.iter().map(|(a, s)| (a.abs(), s.mean_apls_time)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    plot.polyline(&pts);
    for (angle, s) in &report.angles {
        let (class, fill) = color(*angle);
        let _ = writeln!(
            plot.svg,
            r#"<circle class="{class}" cx="{:.2}" cy="{:.2}" r="4" fill="{fill}"/>"#,
            plot.x(angle.abs()),
            plot.y(s.mean_apls_time)
        );
    }
    plot.finish()
}

/// Mean APLS_time against signed angle with ±SEM bars.
fn signed_svg(report: &AngleReport) -> String {
    let mut plot = Plot::new("APLS_time by signed nadir angle", "nadir angle (deg, south-facing negative)", -60.0, 60.0);
    let pts: Vec<(f64, f64)> = report.angles.iter().map(|(a, s)| (*a, s.mean_apls_time)).collect();
    plot.polyline(&pts);
    for (angle, s) in &report.angles {
        let x = plot.x(*angle);
        let (lo, hi) = (plot.y(s.mean_apls_time - s.sem_time), plot.y(s.mean_apls_time + s.sem_time));
        let _ = writeln!(plot.svg, r#"<line class="sem" x1="{x:.2}" y1="{lo:.2}" x2="{x:.2}" y2="{hi:.2}" stroke="black"/>"#);
        let (class, fill) = color(*angle);
        let _ = writeln!(
            plot.svg,
            r#"<circle class="{class}" cx="{x:.2}" cy="{:.2}" r="4" fill="{fill}"/>"#,
            plot.y(s.mean_apls_time)
        );
    }
    plot.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn score(angle: f64, length: f64, time: f64) -> TileScore {
        TileScore { tile_id: format!("t{angle}"), angle_deg: angle, apls_length: length, apls_time: time }
    }

    #[test]
    fn bins() {
        assert_eq!(bin_for_angle(10.0).unwrap(), AngleBin::Nadir);
        assert_eq!(bin_for_angle(-32.0).unwrap(), AngleBin::Off);
        assert_eq!(bin_for_angle(53.0).unwrap(), AngleBin::VeryOff);
        assert_eq!(bin_for_angle(25.0).unwrap(), AngleBin::Nadir);
        assert_eq!(bin_for_angle(26.0).unwrap(), AngleBin::Off);
        assert_eq!(bin_for_angle(39.0).unwrap(), AngleBin::Off);
        assert_eq!(bin_for_angle(-40.0).unwrap(), AngleBin::VeryOff);
        for bad in [0.0, 6.9, 53.5, -60.0, f64::NAN] {
            assert!(matches!(bin_for_angle(bad), Err(Error::Validation(_))), "{bad}");
        }
    }

    #[test]
    fn sem_examples() {
        assert_eq!(mean_sem(&[0.5, 0.5, 0.5]), (0.5, 0.0));
        let (m, s) = mean_sem(&[0.4, 0.6]);
        assert!((m - 0.5).abs() < 1e-15);
        assert!((s - 0.1).abs() < 1e-12);
        assert_eq!(mean_sem(&[0.7]), (0.7, 0.0));
    }

    #[test]
    fn aggregate_three_angles() {
        let report = aggregate(&[score(10.0, 0.9, 0.8), score(-29.0, 0.6, 0.5), score(53.0, 0.3, 0.2)]).unwrap();
        assert_eq!(report.angles.iter().map(|(a, _)| *a).collect::<Vec<_>>(), vec![-29.0, 10.0, 53.0]);
        let bins: Vec<(AngleBin, usize)> = report.bins.iter().map(|(b, s)| (*b, s.n)).collect();
        assert_eq!(
            bins,
            vec![(AngleBin::Nadir, 1), (AngleBin::Off, 1), (AngleBin::VeryOff, 1), (AngleBin::All, 3)]
        );
        assert!(aggregate(&[]).is_err());
    }

    #[test]
    fn empty_bins_are_omitted() {
        let report = aggregate(&[score(10.0, 0.9, 0.8), score(12.0, 0.7, 0.6)]).unwrap();
        let bins: Vec<AngleBin> = report.bins.iter().map(|(b, _)| *b).collect();
        assert_eq!(bins, vec![AngleBin::Nadir, AngleBin::All]);
    }

    #[test]
    fn report_files() {
        let dir = tempfile::tempdir().unwrap();
        let report = aggregate(&[score(10.0, 0.9, 0.8), score(10.0, 0.7, 0.6), score(-29.0, 0.5, 0.45)]).unwrap();
        emit_report(&report, dir.path()).unwrap();
        let angles = fs::read_to_string(dir.path().join("angles.csv")).unwrap();
        assert_eq!(
            angles,
            "angle_deg,n,mean_apls_length,sem_length,mean_apls_time,sem_time\n\
             -29,1,0.500000,0.000000,0.450000,0.000000\n\
             10,2,0.800000,0.100000,0.700000,0.100000\n"
        );
        let bins = fs::read_to_string(dir.path().join("bins.csv")).unwrap();
        assert!(bins.starts_with("bin,n,mean_apls_length"));
        assert_eq!(bins.lines().count(), 4);
        let signed = fs::read_to_string(dir.path().join("signed.svg")).unwrap();
        assert_eq!(signed.matches("<circle class=\"marker").count(), 2);
        assert_eq!(signed.matches("class=\"sem\"").count(), 2);
        let saw = fs::read_to_string(dir.path().join("sawtooth.svg")).unwrap();
        assert_eq!(saw.matches("marker south").count(), 1);
    }

    #[test]
    fn unwritable_output_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let report = aggregate(&[score(10.0, 0.9, 0.8)]).unwrap();
        let err = emit_report(&report, blocker.join("sub")).unwrap_err();
        assert!(err.is_io_or_parse());
    }

    #[test]
    fn proposal_kind_from_path() {
        assert_eq!(
            Proposal::from_path(PathBuf::from("masks/t1.mask.json")),
            Proposal::Mask { dir: PathBuf::from("masks"), tile_id: "t1".into() }
        );
        assert_eq!(Proposal::from_path(PathBuf::from("p.json")), Proposal::Graph(PathBuf::from("p.json")));
    }

    #[test]
    fn manifest_parsing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        fs::write(&path, "tile_id,angle_deg,gt_path,prop_path\na, -29 ,gt/a.json,masks/a.mask.json\n").unwrap();
        let recs = read_manifest(&path).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].nadir_angle_deg, -29.0);
        assert_eq!(recs[0].gt_path, dir.path().join("gt/a.json"));
        assert!(matches!(&recs[0].proposal, Proposal::Mask { tile_id, .. } if tile_id == "a"));

        fs::write(&path, "tile_id,angle_deg,gt_path,prop_path\na,70,g,p\n").unwrap();
        assert!(matches!(read_manifest(&path), Err(Error::Validation(_))));
        fs::write(&path, "tile_id,gt_path,prop_path\na,g,p\n").unwrap();
        assert!(matches!(read_manifest(&path), Err(Error::Parse { .. })));
        fs::write(&path, "tile_id,angle_deg,gt_path,prop_path\na,north,g,p\n").unwrap();
        assert!(matches!(read_manifest(&path), Err(Error::Parse { .. })));
        assert!(read_manifest(dir.path().join("nope.csv")).unwrap_err().is_io_or_parse());
    }

    proptest::proptest! {
        #[test]
        fn aggregation_ignores_order(
            rows in proptest::collection::vec((7i32..=53, proptest::bool::ANY, 0.0f64..1.0, 0.0f64..1.0), 1..30),
            seed in 0u64..1000,
        ) {
            let scores: Vec<TileScore> = rows
                .iter()
                .map(|&(a, south, l, t)| score(if south { -f64::from(a) } else { f64::from(a) }, l, t))
                .collect();
            let mut shuffled = scores.clone();
            // deterministic Fisher-Yates from the seed
            let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            for i in (1..shuffled.len()).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (state >> 33) as usize % (i + 1));
            }
            proptest::prop_assert_eq!(aggregate(&scores).unwrap(), aggregate(&shuffled).unwrap());
        }

        #[test]
        fn bins_partition_valid_angles(a in 7.0f64..=53.0, south in proptest::bool::ANY) {
            let angle = if south { -a } else { a };
            let bin = bin_for_angle(angle).unwrap();
            proptest::prop_assert!(bin != AngleBin::All);
            let n = [a <= 25.0, a > 25.0 && a < 40.0, a >= 40.0].iter().filter(|&&b| b).count();
            proptest::prop_assert_eq!(n, 1);
        }
    }
}
