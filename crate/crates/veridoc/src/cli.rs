//! Command-line frontend: single and batch verification, template
//! extraction, and evidence inspection.
//!
//! `verify` exit codes: 0 real document, 2 structural fraud, 3 data fraud,
//! 4 no template match, 1 operational or usage error.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use veridoc_core::config::PipelineConfig;
use veridoc_core::fraud::{verify, ReferenceDataset, VerificationReport, Verdict};
use veridoc_core::geom::Rect;
use veridoc_core::imgproc::resize_bilinear;
use veridoc_core::ocr::fixture::FixtureOcr;
use veridoc_core::ocr::OcrEngine;
use veridoc_core::ssim::{difference_evidence, ssim_global, ssim_windowed};
use veridoc_core::templates::{extract_roi_candidates, RoiCandidate, TemplateManifest};

use crate::config::{load_config, parse_match_mode};
use crate::dataset::load_dataset;
use crate::evidence::write_evidence;
use crate::external_ocr::ExternalOcr;
use crate::io::{read_png_gray, read_png_rgb, write_png_gray};
use crate::manifest::{load_manifest, promote_candidate};
use crate::report::{to_report_file, write_report};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "veridoc", version, about = "Document template matching and fraud screening")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify one sample document against the template library and dataset.
    Verify(VerifyArgs),
    /// Verify every PNG in a directory and print a per-verdict summary.
    Batch(BatchArgs),
    /// Register a document page as a template and suggest annotation ROIs.
    ExtractTemplate(ExtractArgs),
    /// Render the difference image and box overlay for a sample/template pair.
    Inspect(InspectArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Sample document image (PNG).
    pub sample: PathBuf,
    /// Template manifest file.
    #[arg(long)]
    pub templates: PathBuf,
    /// Reference dataset CSV.
    #[arg(long)]
    pub dataset: PathBuf,
    /// Pipeline configuration file (defaults to $VERIDOC_CONFIG).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// OCR engine: "fixture" or "external:<command>".
    #[arg(long, default_value = "fixture")]
    pub ocr: String,
    /// Directory receiving difference/overlay PNGs when evidence exists.
    #[arg(long)]
    pub evidence: Option<PathBuf>,
    /// Write the verification report (JSON) to this path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Retune resolution-dependent parameters from the sample dimensions.
    #[arg(long)]
    pub adaptive: bool,
    /// Dataset validation mode: "row" or "any".
    #[arg(long)]
    pub match_mode: Option<String>,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// Directory of sample PNGs.
    pub dir: PathBuf,
    #[arg(long)]
    pub templates: PathBuf,
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = "fixture")]
    pub ocr: String,
    /// Worker threads; output is identical for any value.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Directory receiving one report JSON per document.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub adaptive: bool,
    #[arg(long)]
    pub match_mode: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Document page to register (PNG).
    pub doc: PathBuf,
    /// Manifest to create or extend.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub id: String,
    #[arg(long)]
    pub label: String,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    /// Sample document image (PNG).
    pub sample: PathBuf,
    /// Template id from the manifest.
    pub template_id: String,
    #[arg(long)]
    pub templates: PathBuf,
    /// Output directory for diff/overlay PNGs.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            eprintln!("{e}");
            return 1;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Batch(args) => cmd_batch(args),
        Command::ExtractTemplate(args) => cmd_extract_template(args),
        Command::Inspect(args) => cmd_inspect(args),
    }
}

pub fn verdict_exit_code(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::RealDocument => 0,
        Verdict::PotentialFraudStructural => 2,
        Verdict::PotentialFraudData => 3,
        Verdict::NoTemplateMatch => 4,
    }
}

/// OCR engine selection shared by verify and batch.
enum EngineSpec {
    Fixture,
    External(String),
}

impl EngineSpec {
    fn parse(s: &str) -> Result<Self> {
        if s == "fixture" {
            Ok(EngineSpec::Fixture)
        } else if let Some(cmd) = s.strip_prefix("external:") {
            if cmd.trim().is_empty() {
                return Err(Error::Invalid("external ocr command is empty".into()));
            }
            Ok(EngineSpec::External(cmd.to_string()))
        } else {
            Err(Error::Invalid(format!(
                "--ocr must be \"fixture\" or \"external:<command>\", got \"{s}\""
            )))
        }
    }

    fn build(&self) -> Result<Box<dyn OcrEngine>> {
        match self {
            EngineSpec::Fixture => Ok(Box::new(FixtureOcr::new())),
            EngineSpec::External(cmd) => Ok(Box::new(
                ExternalOcr::from_command_line(cmd).map_err(veridoc_core::fraud::VerifyError::Ocr)?,
            )),
        }
    }
}

fn effective_config(
    config: Option<&Path>,
    adaptive: bool,
    match_mode: Option<&str>,
) -> Result<PipelineConfig> {
    let mut cfg = load_config(config)?;
    if adaptive {
        cfg.adaptive_parameters = true;
    }
    if let Some(mode) = match_mode {
        cfg.match_mode = parse_match_mode(mode)?;
    }
    Ok(cfg)
}

fn run_verification(
    sample_path: &Path,
    manifest: &TemplateManifest,
    dataset: &ReferenceDataset,
    engine: &dyn OcrEngine,
    cfg: &PipelineConfig,
) -> Result<VerificationReport> {
    let sample = read_png_rgb(sample_path)?;
    verify(&sample, manifest, dataset, engine, cfg).map_err(Into::into)
}

fn print_verify_stdout(report: &VerificationReport) {
    println!(
        "Best Template: {}, Matching Score: {}",
        report.template_file, report.best.score
    );
    if report.best.matched {
        println!("Match Found");
        println!("Type of document:{}", report.doc_type_label);
        if let Some(ssim) = report.ssim {
            println!("{ssim}");
        }
    }
    println!("{}", report.verdict.display_line());
}

fn sample_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sample".to_string())
}

fn write_artifacts(
    report: &VerificationReport,
    sample_path: &Path,
    evidence_dir: Option<&Path>,
    report_path: Option<&Path>,
) -> Result<()> {
    let mut evidence_paths = None;
    if let (Some(dir), Some(evidence)) = (evidence_dir, report.evidence.as_ref()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let sample_gray = read_png_gray(sample_path)?;
        let (d, o) = write_evidence(dir, &sample_stem(sample_path), evidence, &sample_gray)?;
        evidence_paths = Some((d.display().to_string(), o.display().to_string()));
    }
    if let Some(path) = report_path {
        write_report(path, &to_report_file(report, evidence_paths))?;
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let cfg = effective_config(args.config.as_deref(), args.adaptive, args.match_mode.as_deref())?;
    let manifest = load_manifest(&args.templates)?;
    let dataset = load_dataset(&args.dataset)?;
    let engine = EngineSpec::parse(&args.ocr)?.build()?;
    let report = run_verification(&args.sample, &manifest, &dataset, engine.as_ref(), &cfg)?;
    print_verify_stdout(&report);
    write_artifacts(
        &report,
        &args.sample,
        args.evidence.as_deref(),
        args.report.as_deref(),
    )?;
    Ok(verdict_exit_code(report.verdict))
}

fn cmd_batch(args: BatchArgs) -> Result<i32> {
    let cfg = effective_config(args.config.as_deref(), args.adaptive, args.match_mode.as_deref())?;
    let manifest = load_manifest(&args.templates)?;
    let dataset = load_dataset(&args.dataset)?;
    let spec = EngineSpec::parse(&args.ocr)?;
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }

    let mut files: Vec<PathBuf> = std::fs::read_dir(&args.dir)
        .map_err(|e| Error::io(&args.dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .is_some_and(|e| e.eq_ignore_ascii_case("png"))
        })
        .collect();
    files.sort();

    // Fan out over documents, join, then report in filename order so the
    // output is byte-identical for any --jobs value.
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .map_err(|e| Error::Invalid(format!("cannot build thread pool: {e}")))?;
    let results: Vec<(PathBuf, Result<VerificationReport>)> = pool.install(|| {
        use rayon::prelude::*;
        files
            .par_iter()
            .map(|path| {
                let result = spec.build().and_then(|engine| {
                    run_verification(path, &manifest, &dataset, engine.as_ref(), &cfg)
                });
                (path.clone(), result)
            })
            .collect()
    });

    let mut counts = [0usize; 5]; // real, structural, data, nomatch, error
    for (path, result) in &results {
        let name = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        match result {
            Ok(report) => {
                let idx = match report.verdict {
                    Verdict::RealDocument => 0,
                    Verdict::PotentialFraudStructural => 1,
                    Verdict::PotentialFraudData => 2,
                    Verdict::NoTemplateMatch => 3,
                };
                counts[idx] += 1;
                println!("{name}: {}", crate::report::verdict_id(report.verdict));
                if let Some(dir) = &args.out {
                    let report_path = dir.join(format!("{}.json", sample_stem(path)));
                    write_report(&report_path, &to_report_file(report, None))?;
                }
            }
            Err(e) => {
                counts[4] += 1;
                println!("{name}: error: {e}");
            }
        }
    }
    println!(
        "real:{} structural:{} data:{} nomatch:{} error:{}",
        counts[0], counts[1], counts[2], counts[3], counts[4]
    );
    Ok(0)
}

fn cmd_extract_template(args: ExtractArgs) -> Result<i32> {
    let cfg = effective_config(args.config.as_deref(), false, None)?;
    let page = read_png_gray(&args.doc)?;
    let candidates = extract_roi_candidates(&page, &cfg);

    // the template itself is the whole page; candidates are annotation hints
    let whole_page = RoiCandidate {
        bounding_box: Rect::new(0, 0, page.width(), page.height()),
        area: page.width() * page.height(),
        crop: page.clone(),
    };
    promote_candidate(&args.out, &whole_page, &args.id, &args.label)?;
    println!(
        "template \"{}\" added to {} ({}.png)",
        args.id,
        args.out.display(),
        args.id
    );

    let base = args.out.parent().unwrap_or(Path::new(".")).to_path_buf();
    for (i, c) in candidates.iter().enumerate() {
        let crop_path = base.join(format!("{}-roi-{i}.png", args.id));
        write_png_gray(&crop_path, &c.crop)?;
        println!(
            "roi {i}: x={} y={} w={} h={} area={} -> {}",
            c.bounding_box.x,
            c.bounding_box.y,
            c.bounding_box.width,
            c.bounding_box.height,
            c.area,
            crop_path.display()
        );
    }
    if candidates.is_empty() {
        eprintln!(
            "warning: no ROI candidates found in {}; annotate text regions by hand",
            args.doc.display()
        );
    }
    Ok(0)
}

fn cmd_inspect(args: InspectArgs) -> Result<i32> {
    let cfg = effective_config(args.config.as_deref(), false, None)?;
    let manifest = load_manifest(&args.templates)?;
    let record = manifest
        .get(&args.template_id)
        .ok_or_else(|| Error::Invalid(format!("no template with id \"{}\"", args.template_id)))?;
    let sample = read_png_gray(&args.sample)?;
    let template = record.image();

    let resized;
    let sample_ref = if sample.width() != template.width() || sample.height() != template.height()
    {
        resized = resize_bilinear(&sample, template.width(), template.height())?;
        println!("resized sample to {}x{}", template.width(), template.height());
        &resized
    } else {
        &sample
    };

    let k = cfg.ssim_constants();
    let global = ssim_global(template, sample_ref, &k)?;
    let window = cfg
        .ssim_window
        .min(sample_ref.width())
        .min(sample_ref.height());
    let windowed = ssim_windowed(template, sample_ref, window, cfg.ssim_stride, &k)?;
    let evidence = difference_evidence(&windowed, cfg.evidence_threshold);

    std::fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
    let (diff, overlay) = write_evidence(&args.out, &sample_stem(&args.sample), &evidence, sample_ref)?;

    println!("SSIM: {global}");
    println!("Boxes: {}", evidence.boxes.len());
    println!("wrote {} and {}", diff.display(), overlay.display());
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_a_pure_function_of_the_verdict() {
        assert_eq!(verdict_exit_code(Verdict::RealDocument), 0);
        assert_eq!(verdict_exit_code(Verdict::PotentialFraudStructural), 2);
        assert_eq!(verdict_exit_code(Verdict::PotentialFraudData), 3);
        assert_eq!(verdict_exit_code(Verdict::NoTemplateMatch), 4);
    }

    #[test]
    fn engine_spec_parses_fixture_and_external() {
        assert!(matches!(EngineSpec::parse("fixture"), Ok(EngineSpec::Fixture)));
        assert!(matches!(
            EngineSpec::parse("external:my-ocr --fast"),
            Ok(EngineSpec::External(_))
        ));
        assert!(EngineSpec::parse("external:").is_err());
        assert!(EngineSpec::parse("tesseract").is_err());
    }

    #[test]
    fn unknown_flags_are_usage_errors() {
        let code = main_with_args(["veridoc", "verify", "--bogus"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(main_with_args(["veridoc", "--help"]), 0);
    }
}
