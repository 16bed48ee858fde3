//! Command-line front end for the `rca` toolkit.
//!
//! Every subcommand is a thin wrapper over one library call, so CLI output is
//! bit-identical to what the library produces for the same inputs. Exit codes:
//! 0 on success, 2 for usage or argument errors (including unreadable files),
//! 3 for malformed input data. Output files are written atomically via a
//! temporary file and rename, so a failed run never leaves a partial file.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::num::NonZeroU32;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rca::baseline::{
    canny, gradient_detect, log_detect, CannyParams, GradientKernelPair,
    DEFAULT_GRADIENT_THRESHOLD, DEFAULT_LOG_SIGMA, DEFAULT_LOG_THRESHOLD,
};
use rca::eval::{
    bench_step, confusion_metrics, scores_json_lines, scores_text, sort_scores, MethodScore,
};
use rca::grid::BoundaryCondition;
use rca::rules::tap_weight;
use rca::{
    detect_edges, detect_edges_combined, evolve, BinaryGrid, CombineMode, GrayImage, LinearRule,
    NeighborOffset, PipelineConfig, PnmFormat, PnmImage, ThresholdSpec,
};

#[derive(Parser)]
#[command(
    name = "rca",
    version,
    about = "Edge detection with two-state nine-neighborhood cellular automata",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Show the tap structure of linear rules
    Rules {
        /// Rule number to inspect; omit to list the four proposed edge rules
        #[arg(value_parser = rule_number())]
        rule: Option<u16>,
    },

    /// Apply a linear rule to an already-binary image (P1/P4)
    Step {
        /// Input bitmap (P1 or P4)
        input: PathBuf,
        /// Output bitmap path
        output: PathBuf,
        /// Linear rule number
        #[arg(long, default_value_t = 449, value_parser = rule_number())]
        rule: u16,
        #[arg(long, value_enum, default_value_t = BoundaryArg::Adiabatic)]
        boundary: BoundaryArg,
        /// Number of synchronous steps; 0 copies the input
        #[arg(long, default_value_t = 1)]
        steps: u32,
        /// Write plain-text P1 instead of raw P4
        #[arg(long)]
        ascii: bool,
    },

    /// Threshold an image, evolve it under linear rules, write the edge map
    Detect {
        /// Input image (any of P1-P6)
        input: PathBuf,
        /// Output bitmap path
        output: PathBuf,
        /// Linear rule number
        #[arg(long, default_value_t = 449, value_parser = rule_number(), conflicts_with = "combine")]
        rule: u16,
        #[arg(long, value_enum, default_value_t = BoundaryArg::Adiabatic)]
        boundary: BoundaryArg,
        /// Binarization: "otsu" or "fixed:T" with T in 0..=255
        #[arg(long, default_value = "otsu", value_parser = parse_threshold)]
        threshold: ThresholdSpec,
        /// Number of synchronous steps (at least 1)
        #[arg(long, default_value_t = 1, conflicts_with = "combine")]
        steps: u32,
        /// Comma-separated rule numbers, each applied for one step and merged
        #[arg(long, value_delimiter = ',', value_parser = rule_number(), num_args = 1..)]
        combine: Option<Vec<u16>>,
        /// How the per-rule maps of --combine are merged
        #[arg(long, value_enum, default_value_t = ModeArg::Union, requires = "combine")]
        mode: ModeArg,
        /// Write plain-text P1 instead of raw P4
        #[arg(long)]
        ascii: bool,
    },

    /// Run a classical edge detector
    Baseline {
        /// Input image (any of P1-P6)
        input: PathBuf,
        /// Output bitmap path
        output: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Response threshold: gradient magnitude for sobel/prewitt/roberts
        /// (default 128), zero-crossing jump for log (default 5)
        #[arg(long)]
        threshold: Option<f64>,
        /// Gaussian scale for log (default 2) and canny (default 1.4)
        #[arg(long)]
        sigma: Option<f64>,
        /// Canny: weak-edge fraction of the maximum magnitude (default 0.1)
        #[arg(long)]
        low: Option<f64>,
        /// Canny: strong-edge fraction of the maximum magnitude (default 0.3)
        #[arg(long)]
        high: Option<f64>,
        /// Write plain-text P1 instead of raw P4
        #[arg(long)]
        ascii: bool,
    },

    /// Score several methods against a reference edge map
    Compare {
        /// Input image (any of P1-P6)
        input: PathBuf,
        /// Reference edge map (P1/P4), same dimensions as the input
        #[arg(long)]
        reference: PathBuf,
        /// Comma-separated methods: rule:N, union, xor, sobel, prewitt,
        /// roberts, log, canny
        #[arg(long, default_value = "rule:449,union,sobel,prewitt,roberts,log,canny")]
        methods: String,
        /// Boundary condition for the rule methods
        #[arg(long, value_enum, default_value_t = BoundaryArg::Adiabatic)]
        boundary: BoundaryArg,
        /// Binarization for the rule methods: "otsu" or "fixed:T"
        #[arg(long, default_value = "otsu", value_parser = parse_threshold)]
        threshold: ThresholdSpec,
        /// Steps for rule:N methods (at least 1)
        #[arg(long, default_value_t = 1)]
        steps: u32,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },

    /// Time the word-parallel rule kernel against the per-cell reference
    Bench {
        /// Grid dimensions as WIDTHxHEIGHT, e.g. 1024x1024
        #[arg(long, value_parser = parse_size)]
        size: (usize, usize),
        /// Linear rule number
        #[arg(long, default_value_t = 449, value_parser = rule_number())]
        rule: u16,
        #[arg(long, value_enum, default_value_t = BoundaryArg::Adiabatic)]
        boundary: BoundaryArg,
        /// Timing iterations
        #[arg(long, default_value_t = 3)]
        iters: u32,
        /// Seed for the random input grid
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Null,
    Adiabatic,
    Reflexive,
}

impl From<BoundaryArg> for BoundaryCondition {
    fn from(arg: BoundaryArg) -> Self {
        match arg {
            BoundaryArg::Null => BoundaryCondition::Null,
            BoundaryArg::Adiabatic => BoundaryCondition::Adiabatic,
            BoundaryArg::Reflexive => BoundaryCondition::Reflexive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Union,
    Xor,
}

impl From<ModeArg> for CombineMode {
    fn from(arg: ModeArg) -> Self {
        match arg {
            ModeArg::Union => CombineMode::Union,
            ModeArg::Xor => CombineMode::Xor,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Sobel,
    Prewitt,
    Roberts,
    Log,
    Canny,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    JsonLines,
}

/// A failed invocation: what to print and which exit code to use.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<rca::Error> for Failure {
    fn from(err: rca::Error) -> Self {
        let code = match err {
            rca::Error::Parse { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Rules { rule } => {
            let blocks: Vec<String> = match rule {
                Some(n) => vec![rule_block(LinearRule::from_number(n)?)],
                None => LinearRule::edge_rules().iter().map(|r| rule_block(*r)).collect(),
            };
            print!("{}", blocks.join("\n"));
            Ok(())
        }

        Command::Step {
            input,
            output,
            rule,
            boundary,
            steps,
            ascii,
        } => {
            let PnmImage::Bitmap(grid) = read_image(&input)? else {
                return Err(Failure::usage(format!(
                    "{}: step requires a binary image (P1 or P4); use detect for grayscale input",
                    input.display()
                )));
            };
            let result = evolve(&grid, LinearRule::from_number(rule)?, boundary.into(), steps);
            write_bitmap(&output, &result, ascii)
        }

        Command::Detect {
            input,
            output,
            rule,
            boundary,
            threshold,
            steps,
            combine,
            mode,
            ascii,
        } => {
            let img = into_gray(read_image(&input)?);
            let result = match combine {
                Some(numbers) => {
                    let rules = numbers
                        .iter()
                        .map(|&n| LinearRule::from_number(n))
                        .collect::<rca::Result<Vec<_>>>()?;
                    detect_edges_combined(&img, &rules, mode.into(), boundary.into(), threshold)?
                }
                None => {
                    let steps = NonZeroU32::new(steps).ok_or_else(|| {
                        Failure::usage("steps must be at least 1 (step with --steps 0 copies a bitmap)")
                    })?;
                    let config = PipelineConfig {
                        rule: LinearRule::from_number(rule)?,
                        boundary: boundary.into(),
                        threshold,
                        steps,
                    };
                    detect_edges(&img, &config)
                }
            };
            write_bitmap(&output, &result, ascii)
        }

        Command::Baseline {
            input,
            output,
            method,
            threshold,
            sigma,
            low,
            high,
            ascii,
        } => {
            let img = into_gray(read_image(&input)?);
            let result = run_baseline(&img, method, threshold, sigma, low, high)?;
            write_bitmap(&output, &result, ascii)
        }

        Command::Compare {
            input,
            reference,
            methods,
            boundary,
            threshold,
            steps,
            format,
        } => {
            let img = into_gray(read_image(&input)?);
            let PnmImage::Bitmap(reference_map) = read_image(&reference)? else {
                return Err(Failure::usage(format!(
                    "{}: reference must be a binary image (P1 or P4)",
                    reference.display()
                )));
            };
            let names = parse_method_list(&methods)?;
            let mut scores = Vec::with_capacity(names.len());
            for name in names {
                let map = run_method(&name, &img, boundary.into(), threshold, steps)?;
                let metrics = confusion_metrics(&map, &reference_map)?;
                scores.push(MethodScore {
                    method: name,
                    metrics,
                });
            }
            sort_scores(&mut scores);
            let report = match format {
                FormatArg::Text => scores_text(&scores),
                FormatArg::JsonLines => scores_json_lines(&scores),
            };
            print!("{report}");
            Ok(())
        }

        Command::Bench {
            size,
            rule,
            boundary,
            iters,
            seed,
            format,
        } => {
            let report = bench_step(
                size.0,
                size.1,
                LinearRule::from_number(rule)?,
                boundary.into(),
                iters,
                seed,
            )?;
            let text = match format {
                FormatArg::Text => report.to_text(),
                FormatArg::JsonLines => report.to_json(),
            };
            println!("{}", text.trim_end_matches('\n'));
            Ok(())
        }
    }
}

/// Clap parser for rule numbers: an integer in 0..=511.
fn rule_number() -> clap::builder::RangedI64ValueParser<u16> {
    clap::value_parser!(u16).range(0..=511)
}

/// Clap parser for --threshold: "otsu" or "fixed:T".
fn parse_threshold(raw: &str) -> Result<ThresholdSpec, String> {
    if raw.eq_ignore_ascii_case("otsu") {
        return Ok(ThresholdSpec::Otsu);
    }
    if let Some(value) = raw.strip_prefix("fixed:") {
        let t: u8 = value
            .parse()
            .map_err(|_| format!("invalid fixed threshold {value:?} (expected an integer in 0..=255)"))?;
        return Ok(ThresholdSpec::Fixed(t));
    }
    Err(format!("expected \"otsu\" or \"fixed:T\", got {raw:?}"))
}

/// Clap parser for --size: "WIDTHxHEIGHT" with both positive.
fn parse_size(raw: &str) -> Result<(usize, usize), String> {
    let (w, h) = raw
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WIDTHxHEIGHT, got {raw:?}"))?;
    let parse = |text: &str, axis: &str| {
        text.parse::<usize>()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| format!("invalid {axis} {text:?} (expected a positive integer)"))
    };
    Ok((parse(w, "width")?, parse(h, "height")?))
}

fn tap_name(tap: NeighborOffset) -> &'static str {
    match (tap.dr(), tap.dc()) {
        (0, 0) => "C",
        (0, 1) => "E",
        (1, 1) => "SE",
        (1, 0) => "S",
        (1, -1) => "SW",
        (0, -1) => "W",
        (-1, -1) => "NW",
        (-1, 0) => "N",
        (-1, 1) => "NE",
        _ => unreachable!("offsets are confined to the nine-neighborhood"),
    }
}

/// Renders one rule as its weight decomposition, tap names, and a 3x3 mask
/// (rows north to south, columns west to east).
fn rule_block(rule: LinearRule) -> String {
    let mut weights: Vec<(u16, &str)> = rule.taps().map(|t| (tap_weight(t), tap_name(t))).collect();
    weights.sort_by_key(|&(w, _)| std::cmp::Reverse(w));

    let mut out = String::new();
    if weights.is_empty() {
        out.push_str(&format!("rule {} (no taps)\n", rule.number()));
    } else {
        let sum: Vec<String> = weights.iter().map(|(w, _)| w.to_string()).collect();
        let names: Vec<&str> = weights.iter().map(|&(_, n)| n).collect();
        let _ = writeln!(out, "rule {} = {}", rule.number(), sum.join("+"));
        let _ = writeln!(out, "taps: {}", names.join(" "));
    }
    for dr in -1..=1i8 {
        out.push_str("  ");
        for dc in -1..=1i8 {
            out.push(if rule.has_tap(NeighborOffset::new(dr, dc)) { '1' } else { '.' });
            out.push(if dc < 1 { ' ' } else { '\n' });
        }
    }
    out
}

/// Reads and parses a PNM file. Unreadable files are usage errors (exit 2);
/// malformed contents are data errors (exit 3).
fn read_image(path: &Path) -> Result<PnmImage, Failure> {
    let bytes = fs::read(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    rca::read_pnm(&bytes).map_err(|e| {
        let mut failure = Failure::from(e);
        failure.message = format!("{}: {}", path.display(), failure.message);
        failure
    })
}

/// Grayscale view of any input: bitmaps map set cells to intensity 255.
fn into_gray(image: PnmImage) -> GrayImage {
    match image {
        PnmImage::Gray(img) => img,
        PnmImage::Bitmap(grid) => {
            let mut pixels = vec![0u8; grid.width() * grid.height()];
            for r in 0..grid.height() {
                for c in 0..grid.width() {
                    if grid.get(r, c) {
                        pixels[r * grid.width() + c] = 255;
                    }
                }
            }
            GrayImage::from_pixels(grid.width(), grid.height(), pixels)
                .expect("grid dimensions are valid image dimensions")
        }
    }
}

/// Writes `grid` to `path` as P4 (or P1 when `ascii`), atomically: the bytes
/// go to a temporary file in the destination directory which is renamed over
/// the target only after a complete write.
fn write_bitmap(path: &Path, grid: &BinaryGrid, ascii: bool) -> Result<(), Failure> {
    let format = if ascii { PnmFormat::P1 } else { PnmFormat::P4 };
    let bytes = rca::write_pnm(&PnmImage::Bitmap(grid.clone()), format)?;
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(parent).map_err(|e| {
        Failure::usage(format!(
            "cannot create temporary file in {}: {e}",
            parent.display()
        ))
    })?;
    tmp.write_all(&bytes)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

fn run_baseline(
    img: &GrayImage,
    method: MethodArg,
    threshold: Option<f64>,
    sigma: Option<f64>,
    low: Option<f64>,
    high: Option<f64>,
) -> Result<BinaryGrid, Failure> {
    let reject = |flag: &str, ok: &str| -> Result<(), Failure> {
        Err(Failure::usage(format!("--{flag} only applies to {ok}")))
    };
    match method {
        MethodArg::Sobel | MethodArg::Prewitt | MethodArg::Roberts => {
            if sigma.is_some() {
                reject("sigma", "log and canny")?;
            }
            if low.is_some() || high.is_some() {
                reject("low/--high", "canny")?;
            }
            let kernels = match method {
                MethodArg::Sobel => GradientKernelPair::sobel(),
                MethodArg::Prewitt => GradientKernelPair::prewitt(),
                _ => GradientKernelPair::roberts(),
            };
            let t = threshold.unwrap_or(DEFAULT_GRADIENT_THRESHOLD);
            if !(t.is_finite() && t >= 0.0) {
                return Err(Failure::usage(format!(
                    "gradient threshold must be finite and nonnegative, got {t}"
                )));
            }
            Ok(gradient_detect(img, &kernels, t))
        }
        MethodArg::Log => {
            if low.is_some() || high.is_some() {
                reject("low/--high", "canny")?;
            }
            Ok(log_detect(
                img,
                sigma.unwrap_or(DEFAULT_LOG_SIGMA),
                threshold.unwrap_or(DEFAULT_LOG_THRESHOLD),
            )?)
        }
        MethodArg::Canny => {
            if threshold.is_some() {
                reject("threshold", "sobel, prewitt, roberts, and log; canny takes --low/--high")?;
            }
            let defaults = CannyParams::default();
            let params = CannyParams::new(
                sigma.unwrap_or(defaults.sigma()),
                low.unwrap_or(defaults.low()),
                high.unwrap_or(defaults.high()),
            )?;
            Ok(canny(img, &params))
        }
    }
}

fn parse_method_list(raw: &str) -> Result<Vec<String>, Failure> {
    let names: Vec<String> = raw
        .split(',')
        .map(|s| s.trim().to_ascii_lowercase())
        .filter(|s| !s.is_empty())
        .collect();
    if names.is_empty() {
        return Err(Failure::usage("at least one method is required"));
    }
    Ok(names)
}

/// Runs one named method for `compare`. Rule methods honor the boundary,
/// threshold, and steps flags; classical detectors use their defaults.
fn run_method(
    name: &str,
    img: &GrayImage,
    boundary: BoundaryCondition,
    threshold: ThresholdSpec,
    steps: u32,
) -> Result<BinaryGrid, Failure> {
    if let Some(number) = name.strip_prefix("rule:") {
        let n = number
            .parse::<u16>()
            .ok()
            .filter(|&n| n < 512)
            .ok_or_else(|| {
                Failure::usage(format!(
                    "invalid rule number {number:?} in method {name:?} (expected 0..=511)"
                ))
            })?;
        let steps = NonZeroU32::new(steps)
            .ok_or_else(|| Failure::usage("steps must be at least 1 for rule methods"))?;
        let config = PipelineConfig {
            rule: LinearRule::from_number(n)?,
            boundary,
            threshold,
            steps,
        };
        return Ok(detect_edges(img, &config));
    }
    match name {
        "union" | "xor" => {
            let mode = if name == "union" {
                CombineMode::Union
            } else {
                CombineMode::Xor
            };
            Ok(detect_edges_combined(
                img,
                &LinearRule::edge_rules(),
                mode,
                boundary,
                threshold,
            )?)
        }
        "sobel" => Ok(gradient_detect(
            img,
            &GradientKernelPair::sobel(),
            DEFAULT_GRADIENT_THRESHOLD,
        )),
        "prewitt" => Ok(gradient_detect(
            img,
            &GradientKernelPair::prewitt(),
            DEFAULT_GRADIENT_THRESHOLD,
        )),
        "roberts" => Ok(gradient_detect(
            img,
            &GradientKernelPair::roberts(),
            DEFAULT_GRADIENT_THRESHOLD,
        )),
        "log" => Ok(log_detect(img, DEFAULT_LOG_SIGMA, DEFAULT_LOG_THRESHOLD)?),
        "canny" => Ok(canny(img, &CannyParams::default())),
        _ => Err(Failure::usage(format!(
            "unknown method {name:?} (expected rule:N, union, xor, sobel, prewitt, roberts, log, or canny)"
        ))),
    }
}
