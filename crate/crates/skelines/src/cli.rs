//! `skelines detect | metrics | bench`.
//!
//! Exit codes: 0 ok, 1 usage, 2 I/O or decode failure, 3 internal
//! invariant violation.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use skelines_core::{
    detect_from_gray, detect_lines_with, BinaryImage, DetectionResult, Error, GrayImage, GrayOptions, Metrics,
    Polarity, DEFAULT_SPECKLE_THRESHOLD,
};

use crate::export::{to_json, to_svg, MetricsDoc, SvgStyle};
use crate::io::load_gray_path;
use crate::SystemClock;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "skelines", version, about = "Detect lines in images by segmenting their skeleton graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detect paths and write them as JSON (and optionally SVG).
    Detect {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        pre: PreprocessArgs,
    },
    /// Print graph and image statistics.
    Metrics {
        input: PathBuf,
        #[command(flatten)]
        pre: PreprocessArgs,
        #[arg(long, value_enum, default_value_t = MetricsFormat::Table)]
        format: MetricsFormat,
    },
    /// Time detection over every image in a directory; CSV on stdout.
    Bench {
        dir: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        repeat: u32,
        #[command(flatten)]
        pre: PreprocessArgs,
    },
}

#[derive(Debug, Clone, Args)]
struct PreprocessArgs {
    /// Fixed binarization threshold instead of Otsu.
    #[arg(long, conflicts_with = "otsu")]
    threshold: Option<u8>,
    /// Otsu threshold (the default).
    #[arg(long)]
    otsu: bool,
    #[arg(long, value_enum, default_value_t = PolarityArg::Auto)]
    polarity: PolarityArg,
    /// Flip foreground and background after binarization.
    #[arg(long)]
    invert: bool,
    /// Components with at most this many pixels are reported as noise.
    #[arg(long, default_value_t = DEFAULT_SPECKLE_THRESHOLD)]
    speckle: usize,
    /// Input is already a skeleton: binarize but do not thin.
    #[arg(long)]
    skip_preprocess: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolarityArg {
    Auto,
    Bright,
    Dark,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricsFormat {
    Table,
    Csv,
    Json,
}

impl PreprocessArgs {
    fn options(&self) -> GrayOptions {
        GrayOptions {
            polarity: match self.polarity {
                PolarityArg::Auto => Polarity::Auto,
                PolarityArg::Bright => Polarity::Bright,
                PolarityArg::Dark => Polarity::Dark,
            },
            threshold: self.threshold,
            invert: self.invert,
            skip_thinning: self.skip_preprocess,
            speckle_threshold: self.speckle,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Io(_) => EXIT_IO,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Internal(m) => m,
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Detect { input, out: json, svg, pre } => cmd_detect(&input, &json, svg.as_deref(), &pre, out, err),
        Command::Metrics { input, pre, format } => cmd_metrics(&input, &pre, format, out, err),
        Command::Bench { dir, repeat, pre } => cmd_bench(&dir, repeat, &pre, out, err),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn detect_image(img: &GrayImage, pre: &PreprocessArgs, err: &mut dyn Write) -> Result<DetectionResult, Failure> {
    let clock = SystemClock::new();
    let opts = pre.options();
    match detect_from_gray(img, &opts, &clock) {
        Ok(r) => Ok(r),
        Err(Error::DegenerateHistogram) => {
            // a constant image holds no lines
            let _ = writeln!(err, "warning: constant image, no foreground under automatic polarity");
            let blank = BinaryImage::empty(img.rows(), img.cols()).expect("dimensions of a valid image");
            detect_lines_with(&blank, opts.speckle_threshold, &clock).map_err(|e| Failure::Internal(e.to_string()))
        }
        Err(e) => Err(Failure::Internal(e.to_string())),
    }
}

fn load_and_detect(input: &Path, pre: &PreprocessArgs, err: &mut dyn Write) -> Result<DetectionResult, Failure> {
    let img = load_gray_path(input).map_err(|e| Failure::Io(e.to_string()))?;
    detect_image(&img, pre, err)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn stdout_failure(e: std::io::Error) -> Failure {
    Failure::Io(format!("cannot write output: {e}"))
}

fn runtime_ms(m: &Metrics) -> f64 {
    m.runtime.total.as_secs_f64() * 1e3
}

fn cmd_detect(
    input: &Path,
    json: &Path,
    svg: Option<&Path>,
    pre: &PreprocessArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let r = load_and_detect(input, pre, err)?;
    write_file(json, &to_json(&r))?;
    if let Some(svg) = svg {
        write_file(svg, &to_svg(&r, &SvgStyle::default()))?;
    }
    writeln!(
        out,
        "subgraphs={} paths={} endpoints={} runtime_ms={:.3}",
        r.subgraphs.len(),
        r.paths.len(),
        r.endpoints.len(),
        runtime_ms(&r.metrics)
    )
    .map_err(stdout_failure)
}

pub const METRICS_CSV_HEADER: &str =
    "junctions,terminals,endpoints,nodes,endpoint_fraction,image_pixels,skeleton_fraction,runtime_ms";

/// One CSV row in [`METRICS_CSV_HEADER`] order.
pub fn metrics_csv_row(m: &Metrics) -> String {
    format!(
        "{},{},{},{},{:?},{},{:?},{:?}",
        m.junction_count,
        m.terminal_count,
        m.endpoint_count,
        m.node_count,
        m.endpoint_fraction,
        m.image_pixel_count,
        m.skeleton_pixel_fraction,
        runtime_ms(m)
    )
}

fn cmd_metrics(
    input: &Path,
    pre: &PreprocessArgs,
    format: MetricsFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let m = load_and_detect(input, pre, err)?.metrics;
    let text = match format {
        MetricsFormat::Csv => format!("{METRICS_CSV_HEADER}\n{}\n", metrics_csv_row(&m)),
        MetricsFormat::Json => {
            let mut s = serde_json::to_string_pretty(&MetricsDoc::from(&m)).expect("plain data");
            s.push('\n');
            s
        }
        MetricsFormat::Table => {
            let t = &m.runtime;
            let ms = |d: Duration| d.as_secs_f64() * 1e3;
            let rows: [(&str, String); 13] = [
                ("junctions", m.junction_count.to_string()),
                ("terminals", m.terminal_count.to_string()),
                ("endpoints", m.endpoint_count.to_string()),
                ("nodes", m.node_count.to_string()),
                ("endpoint_fraction", format!("{:.6}", m.endpoint_fraction)),
                ("image_pixels", m.image_pixel_count.to_string()),
                ("skeleton_fraction", format!("{:.6}", m.skeleton_pixel_fraction)),
                ("preprocess_ms", format!("{:.3}", ms(t.preprocess))),
                ("build_ms", format!("{:.3}", ms(t.build))),
                ("simplify_ms", format!("{:.3}", ms(t.simplify))),
                ("segment_ms", format!("{:.3}", ms(t.segment))),
                ("merge_ms", format!("{:.3}", ms(t.merge))),
                ("runtime_ms", format!("{:.3}", ms(t.total))),
            ];
            rows.iter().map(|(k, v)| format!("{k:<18} {v}\n")).collect()
        }
    };
    out.write_all(text.as_bytes()).map_err(stdout_failure)
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort_unstable();
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn cmd_bench(
    dir: &Path,
    repeat: u32,
    pre: &PreprocessArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::Io(format!("cannot read {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries.filter_map(|e| e.ok()).map(|e| e.path()).filter(|p| p.is_file()).collect();
    files.sort();

    writeln!(out, "file,{METRICS_CSV_HEADER}").map_err(stdout_failure)?;
    let mut failed = 0;
    let mut internal = false;
    for path in &files {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let img = match load_gray_path(path) {
            Ok(img) => img,
            Err(e) => {
                let _ = writeln!(err, "warning: skipping {}: {e}", path.display());
                failed += 1;
                continue;
            }
        };
        let mut runs = Vec::with_capacity(repeat as usize);
        let mut first: Option<DetectionResult> = None;
        for _ in 0..repeat {
            match detect_image(&img, pre, err) {
                Ok(r) => {
                    runs.push(r.metrics.runtime.total);
                    first.get_or_insert(r);
                }
                Err(f) => {
                    let _ = writeln!(err, "warning: skipping {}: {}", path.display(), f.message());
                    internal |= matches!(f, Failure::Internal(_));
                    first = None;
                    break;
                }
            }
        }
        let Some(r) = first else {
            failed += 1;
            continue;
        };
        let mut m = r.metrics;
        m.runtime.total = median(runs);
        writeln!(out, "{},{}", csv_field(&name), metrics_csv_row(&m)).map_err(stdout_failure)?;
    }

    if !files.is_empty() && failed == files.len() {
        let msg = format!("no image in {} could be processed", dir.display());
        return Err(if internal { Failure::Internal(msg) } else { Failure::Io(msg) });
    }
    Ok(())
}
