//! Command-line driver behind the `lrd` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::descriptor::{parse_grid, Extractor, GrParams, LrdParams, Normalization, PairingKind};
use crate::error::{Error, Result};
use crate::evaluation::{compare_reference, evaluate, EvalReport, Protocol, Timing};
use crate::io::{
    expand_config_args, is_descriptor_file, load_descriptors, load_image, save_descriptors, thread_pool,
    DatasetKind, DatasetManifest, DescriptorFile, Pipeline, ResizeMode, DEFAULT_SIDE,
};
use crate::radon::sinogram;
use crate::retrieval::{build_index, DescriptorIndex, IndexEntry, Metric};

#[derive(Debug, Parser)]
#[command(name = "lrd", version, about = "Local Radon descriptors and image retrieval")]
#[command(args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract descriptors for every image of a manifest.
    Describe(DescribeArgs),
    /// Validate a descriptor file and persist it as a searchable index.
    Index(IndexArgs),
    /// Rank index entries for one or more query images.
    Query(QueryArgs),
    /// Score first-match retrieval of a query set against an index.
    Evaluate(EvaluateArgs),
    /// Evaluate a range of grid and bin settings.
    Sweep(SweepArgs),
    /// Dump the 180-angle sinogram of an image.
    Sinogram(SinogramArgs),
    /// Generate a manifest from a dataset directory.
    Manifest(ManifestArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Lrd,
    Gr,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PairingArg {
    Orthogonal,
    Characteristic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Irma,
    Holidays,
    Generic,
}

impl From<KindArg> for DatasetKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Irma => DatasetKind::Irma,
            KindArg::Holidays => DatasetKind::Holidays,
            KindArg::Generic => DatasetKind::Generic,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProtocolArg {
    Irma,
    Holidays,
}

impl From<ProtocolArg> for Protocol {
    fn from(p: ProtocolArg) -> Self {
        match p {
            ProtocolArg::Irma => Protocol::Irma,
            ProtocolArg::Holidays => Protocol::Holidays,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Part {
    All,
    Queries,
    Database,
}

#[derive(Debug, Clone, Args)]
struct ExtractArgs {
    /// Named parameter set: irma (5x5, 12 bins) or holidays (3x3, 22 bins).
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_enum, default_value = "lrd")]
    method: Method,
    /// Block grid as RxC.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    angles: Option<usize>,
    #[arg(long, value_enum)]
    pairing: Option<PairingArg>,
    #[arg(long)]
    overlap: Option<f64>,
    /// Keep raw block histogram masses.
    #[arg(long)]
    no_normalize: bool,
    /// Global Radon descriptor length after down-sampling.
    #[arg(long)]
    gr_length: Option<usize>,
    /// Side of the standardized square image.
    #[arg(long, default_value_t = DEFAULT_SIDE)]
    side: usize,
    /// Zero-pad (or center-crop) without scaling.
    #[arg(long)]
    pad_only: bool,
}

impl ExtractArgs {
    fn lrd_params(&self) -> Result<LrdParams> {
        let mut p = match &self.preset {
            Some(name) => LrdParams::preset(name)?,
            None => LrdParams::irma(),
        };
        if let Some(grid) = &self.grid {
            let (r, c) = parse_grid(grid)?;
            p = p.with_grid(r, c);
        }
        if let Some(b) = self.bins {
            p = p.with_bins(b);
        }
        if self.angles.is_some() || self.pairing.is_some() {
            let kind = match self.pairing {
                Some(PairingArg::Orthogonal) => PairingKind::Orthogonal,
                Some(PairingArg::Characteristic) => PairingKind::Characteristic,
                None => p.pairing.kind(),
            };
            let rebuilt = LrdParams::new(1, 2, self.angles.unwrap_or(p.n_angles), kind)?;
            p.n_angles = rebuilt.n_angles;
            p.pairing = rebuilt.pairing;
        }
        if let Some(o) = self.overlap {
            p = p.with_overlap(o);
        }
        if self.no_normalize {
            p = p.with_normalization(Normalization::None);
        }
        p.validate()?;
        Ok(p)
    }

    fn pipeline(&self) -> Result<Pipeline> {
        let extractor = match self.method {
            Method::Lrd => Extractor::Lrd(self.lrd_params()?),
            Method::Gr => Extractor::Gr(GrParams {
                n_angles: self.angles.unwrap_or(GrParams::default().n_angles),
                target_length: self.gr_length,
            }),
        };
        Ok(Pipeline {
            extractor,
            side: self.side,
            resize: if self.pad_only {
                ResizeMode::PadOnly
            } else {
                ResizeMode::ScaleThenPad
            },
        })
    }
}

#[derive(Debug, Args)]
struct DescribeArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, value_enum, default_value = "generic")]
    dataset: KindArg,
    /// For Holidays manifests: describe only the queries or the database.
    #[arg(long, value_enum, default_value = "all")]
    part: Part,
    #[arg(long)]
    out: PathBuf,
    /// Metric recorded in the file header.
    #[arg(long, default_value = "l1")]
    metric: String,
    #[command(flatten)]
    extract: ExtractArgs,
}

#[derive(Debug, Args)]
struct IndexArgs {
    #[arg(long)]
    descriptors: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    metric: Option<String>,
}

#[derive(Debug, Args)]
struct QueryArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    metric: Option<String>,
    #[arg(long)]
    json: bool,
    #[arg(required = true)]
    images: Vec<PathBuf>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    index: PathBuf,
    /// Query manifest, or a descriptor file produced with the same settings.
    #[arg(long)]
    queries: PathBuf,
    #[arg(long, value_enum)]
    protocol: ProtocolArg,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    metric: Option<String>,
    /// Per-query `id,error` output of an external IRMA scorer to compare with.
    #[arg(long)]
    reference: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Database manifest (for Holidays without --test: the full manifest).
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: Option<PathBuf>,
    #[arg(long, value_enum)]
    protocol: ProtocolArg,
    /// Square grid sizes, e.g. `3..6` or `3,5,7`. Overrides --grid.
    #[arg(long, default_value = "3..6")]
    grid_range: String,
    /// Bin counts, e.g. `8..24:4` or `12,22`. Overrides --bins.
    #[arg(long, default_value = "8..24:4")]
    bin_range: String,
    #[arg(long, default_value = "l1")]
    metric: String,
    /// CSV table output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    extract: ExtractArgs,
}

#[derive(Debug, Args)]
struct SinogramArgs {
    #[arg(long)]
    image: PathBuf,
    /// CSV with one row per detector bin and one column per degree.
    #[arg(long)]
    out: PathBuf,
    /// Optional 8-bit rendering, scaled to the sinogram maximum.
    #[arg(long)]
    png: Option<PathBuf>,
    /// Standardize to this side first.
    #[arg(long)]
    side: Option<usize>,
}

#[derive(Debug, Args)]
struct ManifestArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    dir: PathBuf,
    /// IRMA code list (`image_id;code` lines).
    #[arg(long)]
    codes: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Holidays: write the per-category query images here and only the
    /// database images to --out.
    #[arg(long)]
    queries_out: Option<PathBuf>,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    match try_run(argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn try_run<I, T>(argv: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv = expand_config_args(argv.into_iter().map(Into::into).collect())?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(Error::InvalidParams(e.to_string().trim_end().to_string())),
    };
    let pool = thread_pool()?;
    pool.install(|| match cli.command {
        Command::Describe(a) => describe(a),
        Command::Index(a) => index(a),
        Command::Query(a) => query(a),
        Command::Evaluate(a) => evaluate_cmd(a),
        Command::Sweep(a) => sweep(a),
        Command::Sinogram(a) => sinogram_cmd(a),
        Command::Manifest(a) => manifest(a),
    })
}

fn describe(a: DescribeArgs) -> Result<()> {
    let metric: Metric = a.metric.parse()?;
    let pipeline = a.extract.pipeline()?;
    let manifest = DatasetManifest::read(&a.manifest, a.dataset.into())?;
    let manifest = match a.part {
        Part::All => manifest,
        Part::Queries => manifest.holidays_split().0,
        Part::Database => manifest.holidays_split().1,
    };
    let start = Instant::now();
    pipeline.describe_manifest(&manifest, &a.out, metric.name())?;
    eprintln!(
        "described {} images ({} values each) in {:.2}s -> {}",
        manifest.len(),
        pipeline.descriptor_length(),
        start.elapsed().as_secs_f64(),
        a.out.display()
    );
    Ok(())
}

fn open_index(path: &Path, metric: Option<&str>) -> Result<(DescriptorIndex, Pipeline)> {
    let file = load_descriptors(path)?;
    let metric: Metric = match metric {
        Some(m) => m.parse()?,
        None if file.metric_hint.is_empty() => Metric::default(),
        None => file.metric_hint.parse()?,
    };
    let pipeline = Pipeline::from_digest(&file.params_digest)?;
    Ok((build_index(file.entries(), metric)?, pipeline))
}

fn index(a: IndexArgs) -> Result<()> {
    let file = load_descriptors(&a.descriptors)?;
    let metric = match a.metric.as_deref().unwrap_or(&file.metric_hint) {
        "" => Metric::default(),
        m => m.parse()?,
    };
    Pipeline::from_digest(&file.params_digest)?;
    let index = build_index(file.entries(), metric)?;
    let out = DescriptorFile {
        metric_hint: metric.name().to_string(),
        ..file
    };
    out.save(&a.out)?;
    eprintln!("indexed {} descriptors of length {} ({metric})", index.len(), index.dim());
    Ok(())
}

fn query(a: QueryArgs) -> Result<()> {
    let (index, pipeline) = open_index(&a.index, a.metric.as_deref())?;
    let mut out = std::io::stdout().lock();
    let mut results = Vec::new();
    for path in &a.images {
        let d = pipeline.describe_path(path)?.at_stored_precision();
        let r = index.knn_query(&d, a.k)?;
        if a.json {
            results.push(serde_json::json!({ "query": path, "result": r }));
        } else {
            writeln!(out, "{}", path.display()).map_err(|e| Error::io("stdout", e))?;
            for (rank, n) in r.neighbors.iter().enumerate() {
                writeln!(out, "  {:>3}  {:<24} {:<20} {:.6}", rank + 1, n.source_id, n.label, n.distance)
                    .map_err(|e| Error::io("stdout", e))?;
            }
        }
    }
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&results)?).map_err(|e| Error::io("stdout", e))?;
    }
    Ok(())
}

fn load_queries(path: &Path, protocol: Protocol, pipeline: &Pipeline) -> Result<Vec<IndexEntry>> {
    if is_descriptor_file(path) {
        let file = load_descriptors(path)?;
        file.expect_digest(&pipeline.digest())?;
        return Ok(file.entries());
    }
    let kind = match protocol {
        Protocol::Irma => DatasetKind::Irma,
        Protocol::Holidays => DatasetKind::Holidays,
    };
    let entries = pipeline.describe_entries(&DatasetManifest::read(path, kind)?)?;
    Ok(entries
        .into_iter()
        .map(|e| IndexEntry {
            descriptor: e.descriptor.at_stored_precision(),
            ..e
        })
        .collect())
}

fn evaluate_cmd(a: EvaluateArgs) -> Result<()> {
    let protocol: Protocol = a.protocol.into();
    let (index, pipeline) = open_index(&a.index, a.metric.as_deref())?;
    let start = Instant::now();
    let queries = load_queries(&a.queries, protocol, &pipeline)?;
    let extraction = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let report = evaluate(protocol, &index, &queries)?;
    let query_seconds = start.elapsed().as_secs_f64();
    let timing = Timing {
        extraction_seconds: extraction,
        query_seconds,
        seconds_per_query: query_seconds / queries.len().max(1) as f64,
    };
    report.write_all(&a.out, Some(&timing))?;
    print!("{}", report.summary(Some(&timing)));
    if let Some(reference) = &a.reference {
        let text = std::fs::read_to_string(reference).map_err(|e| Error::io(reference, e))?;
        let cmp = compare_reference(&report, &text)?;
        let path = a.out.join("reference_comparison.json");
        std::fs::write(&path, serde_json::to_string_pretty(&cmp)?).map_err(|e| Error::io(&path, e))?;
        println!(
            "reference: {} compared, {} missing, max |diff| {:.3e}, totals {:.4} vs {:.4}",
            cmp.compared,
            cmp.missing.len(),
            cmp.max_abs_difference,
            cmp.our_total,
            cmp.reference_total
        );
    }
    Ok(())
}

/// Parses `a..b` (inclusive), `a..b:step` or `a,b,c`.
fn parse_range(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidParams(format!("bad range `{s}`"));
    let num = |v: &str| v.trim().parse::<usize>().map_err(|_| bad());
    if let Some((lo, rest)) = s.split_once("..") {
        let (hi, step) = match rest.split_once(':') {
            Some((hi, step)) => (num(hi)?, num(step)?),
            None => (num(rest)?, 1),
        };
        let lo = num(lo)?;
        if step == 0 || hi < lo {
            return Err(bad());
        }
        Ok((lo..=hi).step_by(step).collect())
    } else {
        s.split(',').map(num).collect()
    }
}

fn sweep(a: SweepArgs) -> Result<()> {
    let protocol: Protocol = a.protocol.into();
    let metric: Metric = a.metric.parse()?;
    let kind = match protocol {
        Protocol::Irma => DatasetKind::Irma,
        Protocol::Holidays => DatasetKind::Holidays,
    };
    let train = DatasetManifest::read(&a.train, kind)?;
    let (database, queries) = match (&a.test, protocol) {
        (Some(test), _) => (train, DatasetManifest::read(test, kind)?),
        (None, Protocol::Holidays) => {
            let (q, db) = train.holidays_split();
            (db, q)
        }
        (None, Protocol::Irma) => return Err(Error::InvalidParams("IRMA sweeps need --test".into())),
    };
    let grids = parse_range(&a.grid_range)?;
    let bins = parse_range(&a.bin_range)?;
    let base = a.extract.lrd_params()?;

    let mut table = csv::Writer::from_writer(Vec::new());
    table.write_record(["grid", "bins", "length", "score", "seconds"])?;
    println!("{:>6} {:>6} {:>8} {:>14} {:>9}", "grid", "bins", "length", "score", "seconds");
    for &g in &grids {
        for &b in &bins {
            let start = Instant::now();
            let params = base.clone().with_grid(g, g).with_bins(b);
            params.validate()?;
            let pipeline = Pipeline {
                extractor: Extractor::Lrd(params.clone()),
                side: a.extract.side,
                resize: if a.extract.pad_only {
                    ResizeMode::PadOnly
                } else {
                    ResizeMode::ScaleThenPad
                },
            };
            let index = build_index(pipeline.describe_entries(&database)?, metric)?;
            let report = evaluate(protocol, &index, &pipeline.describe_entries(&queries)?)?;
            let score = match protocol {
                Protocol::Irma => report.total_error.unwrap_or(f64::NAN),
                Protocol::Holidays => 100.0 * report.true_retrieval_rate.unwrap_or(f64::NAN),
            };
            let secs = start.elapsed().as_secs_f64();
            println!("{:>6} {:>6} {:>8} {:>14.4} {:>9.2}", format!("{g}x{g}"), b, params.length(), score, secs);
            table.write_record([
                format!("{g}x{g}"),
                b.to_string(),
                params.length().to_string(),
                score.to_string(),
                format!("{secs:.3}"),
            ])?;
        }
    }
    if let Some(out) = &a.out {
        let bytes = table.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        std::fs::write(out, bytes).map_err(|e| Error::io(out, e))?;
    }
    Ok(())
}

fn sinogram_cmd(a: SinogramArgs) -> Result<()> {
    let mut image = load_image(&a.image)?;
    if let Some(side) = a.side {
        image = crate::io::standardize(&image, side, ResizeMode::ScaleThenPad)?;
    }
    let s = sinogram(&image)?;
    let mut w = csv::Writer::from_path(&a.out)?;
    let mut header = vec!["rho".to_string()];
    header.extend(s.angles().degrees().iter().map(|d| format!("{d}")));
    w.write_record(&header)?;
    for i in 0..s.detector_length() {
        let mut row = vec![format!("{}", s.rho(i))];
        row.extend((0..s.n_angles()).map(|j| format!("{}", s.get(i, j))));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(&a.out, e))?;
    if let Some(png) = &a.png {
        let max = s.columns().flatten().fold(0.0f64, |m, v| m.max(*v));
        let scale = if max > 0.0 { 255.0 / max } else { 0.0 };
        let render = crate::gray::GrayImage::from_fn(s.n_angles(), s.detector_length(), |x, y| s.get(y, x) * scale)?;
        crate::io::to_luma8(&render)
            .save(png)
            .map_err(|source| Error::Decode {
                path: png.clone(),
                source,
            })?;
    }
    Ok(())
}

fn manifest(a: ManifestArgs) -> Result<()> {
    let kind: DatasetKind = a.kind.into();
    let m = match kind {
        DatasetKind::Holidays => DatasetManifest::from_holidays_dir(&a.dir)?,
        DatasetKind::Irma => {
            let codes = a
                .codes
                .as_ref()
                .ok_or_else(|| Error::InvalidParams("--codes is required for IRMA".into()))?;
            let text = std::fs::read_to_string(codes).map_err(|e| Error::io(codes, e))?;
            DatasetManifest::from_irma_codes(&a.dir, &text)?
        }
        DatasetKind::Generic => return Err(Error::InvalidParams("generic manifests are written by hand".into())),
    };
    match (&a.queries_out, kind) {
        (Some(q), DatasetKind::Holidays) => {
            let (queries, database) = m.holidays_split();
            queries.write(q)?;
            database.write(&a.out)?;
        }
        _ => m.write(&a.out)?,
    }
    Ok(())
}

/// Loads a persisted evaluation report.
pub fn read_report(path: impl AsRef<Path>) -> Result<EvalReport> {
    let path = path.as_ref();
    EvalReport::from_json(&std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}

/// Saves labeled descriptors produced by `pipeline`, e.g. from code.
pub fn save_entries(path: impl AsRef<Path>, entries: &[IndexEntry], metric: Metric) -> Result<()> {
    save_descriptors(path, entries, metric.name())
}
