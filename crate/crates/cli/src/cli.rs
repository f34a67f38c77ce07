//! Argument parsing and the subcommands.
//!
//! Exit codes: 0 success, 1 data error, 2 I/O error, 64 usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use splitgiou_core::bezier::sample_polygon;
use splitgiou_core::evalmetrics::evaluate;
use splitgiou_core::losses::{box_loss, finite_diff_loss_grad, smooth_ln, smooth_ln_grad};
use splitgiou_core::matching::{hungarian, match_sets};
use splitgiou_core::{BoxLossConfig, BoxShape, CostMatrix, DetectionRecord, GroundTruthRecord, MatchStrategy, Reduction, SplitMode};
use thiserror::Error;

use crate::annotations::{self, AnnotationSet, ImageAnnotations, Instance, Target};
use crate::config::{CliConfig, ConfigFile, SplitModeArg};
use crate::synthetic;

pub const EXIT_DATA: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Largest analytic vs finite-difference discrepancy `gradcheck` accepts.
pub const GRADCHECK_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "splitgiou", version, about = "Text box geometry, split-GIoU losses, matching and evaluation")]
pub struct Cli {
    /// Flat JSON config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Machine-readable JSON on standard output instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Samples per Bezier side when a polygon is needed.
    #[arg(long = "n-v", global = true)]
    n_v: Option<usize>,
    /// Evaluation match threshold, strictly between 0 and 1.
    #[arg(long, global = true)]
    iou_threshold: Option<f64>,
    /// GIoU term of the box loss: one enclosing rectangle or three split pieces.
    #[arg(long, global = true, value_enum)]
    split_mode: Option<SplitModeArg>,
    /// Weight of the Smooth-ln regression term.
    #[arg(long, global = true)]
    lambda1: Option<f64>,
    /// Weight of the GIoU term.
    #[arg(long, global = true)]
    lambda2: Option<f64>,
    /// Base seed for gradcheck trials and bench inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the primary output here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InputFormat {
    /// ICDAR 2015 quadrilateral lines.
    Icdar15,
    /// `x1,y1,...,xn,yn[,text]` lines; needs --vertices.
    Polygon,
    /// Canonical JSON.
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TargetArg {
    Bezier16,
    /// 2 * n_v vertices per instance.
    Polygon,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Import or convert annotations to canonical JSON in the target representation.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        from: InputFormat,
        /// Vertices per line for --from polygon.
        #[arg(long)]
        vertices: Option<usize>,
        #[arg(long, value_enum, default_value = "bezier16")]
        to: TargetArg,
        /// Image id for text inputs; defaults to the file stem.
        #[arg(long)]
        image_id: Option<String>,
        #[arg(long, default_value_t = 0)]
        width: u32,
        #[arg(long, default_value_t = 0)]
        height: u32,
    },
    /// Per-instance box loss between aligned prediction and ground-truth files.
    Loss { pred: PathBuf, gt: PathBuf },
    /// Precision, recall and H-mean of detections against ground truth.
    Evaluate {
        det: PathBuf,
        gt: PathBuf,
        /// Globally optimal one-to-one matching instead of greedy.
        #[arg(long)]
        optimal: bool,
    },
    /// Hungarian assignment of a cost matrix (--costs) or of predictions to ground truths.
    Match {
        #[arg(long, conflicts_with_all = ["pred", "gt"])]
        costs: Option<PathBuf>,
        #[arg(requires = "gt")]
        pred: Option<PathBuf>,
        gt: Option<PathBuf>,
    },
    /// Compare analytic gradients with central finite differences.
    Gradcheck {
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, hide = true)]
        corrupt_gradient: bool,
    },
    /// Time the loss, matching and sampling kernels.
    Bench {
        /// Number of predictions: split-GIoU scores them against 32 ground
        /// truths, Hungarian solves size x size, sampling converts size pairs.
        #[arg(long, default_value_t = 300, value_parser = clap::value_parser!(u64).range(1..))]
        size: u64,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        repeats: u64,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn load_config(cli: &Cli) -> Result<CliConfig, CliError> {
    let file = match &cli.config {
        Some(p) => ConfigFile::parse(&read(p)?).map_err(|e| CliError::Usage(e.to_string()))?,
        None => ConfigFile::default(),
    };
    let flags = ConfigFile {
        lambda1: cli.lambda1,
        lambda2: cli.lambda2,
        split_mode: cli.split_mode,
        iou_threshold: cli.iou_threshold,
        n_v: cli.n_v,
        output_path: cli.output.clone(),
        ..Default::default()
    };
    CliConfig::try_from(file.overlay(flags)).map_err(|e| CliError::Usage(e.to_string()))
}

fn emit(cfg: &CliConfig, stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match &cfg.output_path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(format!("cannot write output: {e}"))),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn load_set(path: &Path) -> Result<AnnotationSet, CliError> {
    let bytes = read(path)?;
    annotations::parse_canonical_json(&bytes).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load_config(&cli)?;
    let json_out = cli.json;
    match cli.command {
        Command::Convert { input, from, vertices, to, image_id, width, height } => {
            let set = match from {
                InputFormat::Json => load_set(&input)?,
                InputFormat::Icdar15 | InputFormat::Polygon => {
                    let bytes = read(&input)?;
                    let text = String::from_utf8(bytes).map_err(|_| CliError::Data(format!("{}: not UTF-8", input.display())))?;
                    let instances = match (from, vertices) {
                        (InputFormat::Polygon, None) => return Err(CliError::Usage("--from polygon needs --vertices".into())),
                        (InputFormat::Polygon, Some(n)) => annotations::parse_polygon_lines(&text, n),
                        _ => annotations::parse_icdar15(&text),
                    }
                    .map_err(|e| CliError::Data(format!("{}: {e}", input.display())))?;
                    let id = image_id.unwrap_or_else(|| input.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned()));
                    AnnotationSet { images: vec![ImageAnnotations { id, width, height, instances }] }
                }
            };
            let target = match to {
                TargetArg::Bezier16 => Target::Bezier16,
                TargetArg::Polygon => Target::Polygon { vertices: 2 * cfg.n_v },
            };
            let (converted, failures) = annotations::convert_representation(&set, target);
            emit(&cfg, stdout, &annotations::to_canonical_json(&converted))?;
            let _ = writeln!(
                stderr,
                "converted {} instances in {} images to {target}; {} failed",
                converted.instance_count() - failures.len(),
                converted.images.len(),
                failures.len()
            );
            for f in &failures {
                let _ = writeln!(stderr, "  {} instance {}: {}", f.image_id, f.index, f.reason);
            }
            Ok(())
        }
        Command::Loss { pred, gt } => cmd_loss(&cfg, json_out, &load_set(&pred)?, &load_set(&gt)?, stdout),
        Command::Evaluate { det, gt, optimal } => {
            let strategy = if optimal { MatchStrategy::Optimal } else { MatchStrategy::Greedy };
            cmd_evaluate(&cfg, json_out, &load_set(&det)?, &load_set(&gt)?, strategy, stdout)
        }
        Command::Match { costs, pred, gt } => match (costs, pred, gt) {
            (Some(path), _, _) => cmd_match_costs(&cfg, json_out, &path, stdout),
            (None, Some(p), Some(g)) => cmd_match_sets(&cfg, json_out, &load_set(&p)?, &load_set(&g)?, stdout),
            _ => Err(CliError::Usage("match needs --costs FILE or PRED GT".into())),
        },
        Command::Gradcheck { trials, corrupt_gradient } => cmd_gradcheck(&cfg, json_out, cli.seed, trials, corrupt_gradient, stdout),
        Command::Bench { size, repeats } => cmd_bench(&cfg, json_out, cli.seed, size as usize, repeats as usize, stdout),
    }
}

fn by_id(set: &AnnotationSet) -> BTreeMap<&str, &ImageAnnotations> {
    set.images.iter().map(|i| (i.id.as_str(), i)).collect()
}

fn split_mode_name(m: SplitMode) -> &'static str {
    match m {
        SplitMode::FullRect => "full",
        SplitMode::SplitRect3 => "rect3",
        SplitMode::SplitRotatedRect3 => "rrect3",
    }
}

#[derive(Serialize)]
struct LossRow<'a> {
    image_id: &'a str,
    index: usize,
    total: f64,
    regression_term: f64,
    giou_term: f64,
}

fn cmd_loss(cfg: &CliConfig, json_out: bool, pred: &AnnotationSet, gt: &AnnotationSet, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (p, g) = (by_id(pred), by_id(gt));
    let mut ids: Vec<&str> = p.keys().chain(g.keys()).copied().collect();
    ids.sort_unstable();
    ids.dedup();
    let mismatched: Vec<&str> =
        ids.iter().copied().filter(|id| p.get(id).map(|i| i.instances.len()) != g.get(id).map(|i| i.instances.len())).collect();
    if !mismatched.is_empty() {
        return Err(CliError::Data(format!("instance counts differ for image ids: {}", mismatched.join(", "))));
    }
    let mut rows = Vec::new();
    for id in &ids {
        for (index, (a, b)) in p[id].instances.iter().zip(&g[id].instances).enumerate() {
            let v = box_loss(&a.shape.to_box(), &b.shape.to_box(), &cfg.loss)
                .map_err(|e| CliError::Data(format!("image {id} instance {index}: {e}")))?;
            rows.push(LossRow { image_id: id, index, total: v.total, regression_term: v.regression_term, giou_term: v.giou_term });
        }
    }
    let n = rows.len().max(1) as f64;
    let mean = |f: fn(&LossRow) -> f64| rows.iter().map(f).sum::<f64>() / n;
    let (mt, mr, mg) = (mean(|r| r.total), mean(|r| r.regression_term), mean(|r| r.giou_term));
    let text = if json_out {
        to_json(&json!({
            "lambda1": cfg.loss.lambda1,
            "lambda2": cfg.loss.lambda2,
            "split_mode": split_mode_name(cfg.loss.split_mode),
            "rows": rows,
            "mean": { "total": mt, "regression_term": mr, "giou_term": mg },
        }))
    } else {
        let mut t = format!(
            "split_mode {}  lambda1 {}  lambda2 {}\n{:<24} {:>5} {:>14} {:>14} {:>14}\n",
            split_mode_name(cfg.loss.split_mode),
            cfg.loss.lambda1,
            cfg.loss.lambda2,
            "image",
            "index",
            "total",
            "regression",
            "giou"
        );
        for r in &rows {
            let _ = writeln!(t, "{:<24} {:>5} {:>14.6} {:>14.6} {:>14.6}", r.image_id, r.index, r.total, r.regression_term, r.giou_term);
        }
        let _ = writeln!(t, "{:<24} {:>5} {:>14.6} {:>14.6} {:>14.6}", "mean", rows.len(), mt, mr, mg);
        t
    };
    emit(cfg, stdout, &text)
}

fn cmd_evaluate(
    cfg: &CliConfig,
    json_out: bool,
    det: &AnnotationSet,
    gt: &AnnotationSet,
    strategy: MatchStrategy,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let polygon = |img: &ImageAnnotations, k: usize, inst: &Instance| {
        inst.shape.boundary(cfg.n_v).map_err(|e| CliError::Data(format!("image {} instance {k}: {e}", img.id)))
    };
    let mut dets = Vec::new();
    for img in &det.images {
        for (k, inst) in img.instances.iter().enumerate().filter(|(_, i)| !i.ignore) {
            dets.push(DetectionRecord { image_id: img.id.clone(), polygon: polygon(img, k, inst)?, score: inst.score.unwrap_or(1.0) });
        }
    }
    let mut gts = Vec::new();
    for img in &gt.images {
        for (k, inst) in img.instances.iter().enumerate() {
            gts.push(GroundTruthRecord { image_id: img.id.clone(), polygon: polygon(img, k, inst)?, ignore: inst.ignore });
        }
    }
    let rep = evaluate(&dets, &gts, cfg.iou_threshold, strategy).map_err(|e| CliError::Data(e.to_string()))?;
    let text = if json_out {
        let per_image: Vec<_> = rep
            .per_image
            .iter()
            .map(|s| json!({"image_id": s.image_id, "matches": s.matches, "false_positives": s.false_positives, "false_negatives": s.false_negatives}))
            .collect();
        to_json(&json!({
            "recall": rep.recall,
            "precision": rep.precision,
            "hmean": rep.hmean,
            "iou_threshold": cfg.iou_threshold,
            "strategy": if strategy == MatchStrategy::Optimal { "optimal" } else { "greedy" },
            "per_image": per_image,
        }))
    } else {
        let mut t = format!("{:<24} {:>8} {:>8} {:>8}\n", "image", "matches", "fp", "fn");
        for s in &rep.per_image {
            let _ = writeln!(t, "{:<24} {:>8} {:>8} {:>8}", s.image_id, s.matches, s.false_positives, s.false_negatives);
        }
        let _ = writeln!(t, "\n{:>10} {:>10} {:>10}", "Recall", "Precision", "H-mean");
        let _ = writeln!(t, "{:>10.4} {:>10.4} {:>10.4}", rep.recall, rep.precision, rep.hmean);
        t
    };
    emit(cfg, stdout, &text)
}

fn assignment_json(a: &splitgiou_core::Assignment) -> serde_json::Value {
    json!({ "pairs": a.pairs, "total_cost": a.total_cost })
}

fn cmd_match_costs(cfg: &CliConfig, json_out: bool, path: &Path, stdout: &mut dyn Write) -> Result<(), CliError> {
    let bytes = read(path)?;
    let rows: Vec<Vec<f64>> = serde_json::from_slice(&bytes).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let m = CostMatrix::from_rows(&rows).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let a = hungarian(&m);
    let text = if json_out {
        to_json(&assignment_json(&a))
    } else {
        let mut t = String::from("row  col  cost\n");
        for &(r, c) in &a.pairs {
            let _ = writeln!(t, "{r:>3}  {c:>3}  {}", m.get(r, c));
        }
        let _ = writeln!(t, "total {}", a.total_cost);
        t
    };
    emit(cfg, stdout, &text)
}

fn cmd_match_sets(
    cfg: &CliConfig,
    json_out: bool,
    pred: &AnnotationSet,
    gt: &AnnotationSet,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let (p, g) = (by_id(pred), by_id(gt));
    let mut out = Vec::new();
    for (id, img) in &p {
        let preds: Vec<(f64, BoxShape)> = img.instances.iter().map(|i| (i.score.unwrap_or(1.0), i.shape.to_box())).collect();
        let gts: Vec<BoxShape> =
            g.get(id).map_or_else(Vec::new, |gi| gi.instances.iter().filter(|i| !i.ignore).map(|i| i.shape.to_box()).collect());
        let a = match_sets(&preds, &gts, &cfg.loss, cfg.class_weight).map_err(|e| CliError::Data(format!("image {id}: {e}")))?;
        out.push((*id, a));
    }
    let text = if json_out {
        let images: Vec<_> = out.iter().map(|(id, a)| json!({"image_id": id, "pairs": a.pairs, "total_cost": a.total_cost})).collect();
        to_json(&json!({ "images": images }))
    } else {
        let mut t = String::from("image                     pred   gt\n");
        for (id, a) in &out {
            for (r, c) in &a.pairs {
                let _ = writeln!(t, "{id:<24} {r:>5} {c:>4}");
            }
        }
        t
    };
    emit(cfg, stdout, &text)
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

/// Worst discrepancy of one trial: the Smooth-ln gradient on a random
/// difference vector, then the box loss gradient of a regression-only
/// split configuration on a random curved instance.
fn gradcheck_trial(seed: u64, reduction: Reduction, corrupt: bool) -> Result<f64, CliError> {
    let data = |e: splitgiou_core::LossError| CliError::Data(e.to_string());
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-6;
    let scale = if corrupt { 1.0 + 1e-3 } else { 1.0 };
    let delta: Vec<f64> = (0..16).map(|_| r.gen_range(-20.0..20.0)).collect();
    let analytic = smooth_ln_grad(&delta, reduction).map_err(data)?;
    let mut worst = 0.0f64;
    let mut probe = delta.clone();
    for i in 0..delta.len() {
        probe[i] = delta[i] + h;
        let up = smooth_ln(&probe, reduction).map_err(data)?;
        probe[i] = delta[i] - h;
        let down = smooth_ln(&probe, reduction).map_err(data)?;
        probe[i] = delta[i];
        worst = worst.max(rel_err(scale * analytic[i], (up - down) / (2.0 * h)));
    }

    let gt = synthetic::text_pair(&mut r);
    let pred = synthetic::jitter(&gt, &mut r, 5.0);
    let cfg = BoxLossConfig { lambda1: 1.0, lambda2: 0.0, split_mode: SplitMode::SplitRect3, reduction };
    let (pred, gt) = (BoxShape::Bezier(pred), BoxShape::Bezier(gt));
    let fd = finite_diff_loss_grad(&pred, &gt, &cfg, h).map_err(data)?;
    let d: Vec<f64> = pred.coords().iter().zip(gt.coords()).map(|(a, b)| a - b).collect();
    for (a, f) in smooth_ln_grad(&d, reduction).map_err(data)?.iter().zip(&fd) {
        worst = worst.max(rel_err(scale * a, *f));
    }
    Ok(worst)
}

fn cmd_gradcheck(cfg: &CliConfig, json_out: bool, seed: u64, trials: u64, corrupt: bool, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut worst = (0.0f64, 0u64);
    let mut failed = None;
    for k in 0..trials {
        let trial_seed = seed.wrapping_add(k);
        let e = gradcheck_trial(trial_seed, cfg.loss.reduction, corrupt)?;
        if e > worst.0 || k == 0 {
            worst = (e, trial_seed);
        }
        if e >= GRADCHECK_TOLERANCE && failed.is_none() {
            failed = Some((k, trial_seed, e));
        }
    }
    let text = if json_out {
        to_json(&json!({
            "trials": trials,
            "tolerance": GRADCHECK_TOLERANCE,
            "worst_relative_error": worst.0,
            "worst_seed": worst.1,
            "passed": failed.is_none(),
        }))
    } else {
        format!("{trials} trials, worst relative discrepancy {:.3e} (seed {})\n", worst.0, worst.1)
    };
    emit(cfg, stdout, &text)?;
    match failed {
        Some((k, s, e)) => Err(CliError::Data(format!("trial {k} (seed {s}): discrepancy {e:.3e} exceeds {GRADCHECK_TOLERANCE:e}"))),
        None => Ok(()),
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn cmd_bench(cfg: &CliConfig, json_out: bool, seed: u64, size: usize, repeats: usize, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let gts: Vec<BoxShape> = (0..32).map(|_| BoxShape::Bezier(synthetic::text_pair(&mut r))).collect();
    let preds: Vec<BoxShape> = (0..size).map(|_| BoxShape::Bezier(synthetic::text_pair(&mut r))).collect();
    let split = BoxLossConfig { split_mode: SplitMode::SplitRect3, ..cfg.loss };
    let costs: Vec<f64> = (0..size * size).map(|_| r.gen_range(0.0..1.0)).collect();
    let costs = CostMatrix::new(size, size, costs).map_err(|e| CliError::Data(e.to_string()))?;

    let time = |f: &mut dyn FnMut() -> Result<(), CliError>| -> Result<f64, CliError> {
        let mut ms = Vec::with_capacity(repeats);
        for _ in 0..repeats {
            let t = Instant::now();
            f()?;
            ms.push(t.elapsed().as_secs_f64() * 1e3);
        }
        Ok(median(ms))
    };
    let split_ms = time(&mut || {
        for p in &preds {
            for g in &gts {
                std::hint::black_box(box_loss(p, g, &split).map_err(|e| CliError::Data(e.to_string()))?);
            }
        }
        Ok(())
    })?;
    let hungarian_ms = time(&mut || {
        std::hint::black_box(hungarian(&costs));
        Ok(())
    })?;
    let sample_ms = time(&mut || {
        for p in &preds {
            if let BoxShape::Bezier(b) = p {
                std::hint::black_box(sample_polygon(b, cfg.n_v).map_err(|e| CliError::Data(e.to_string()))?);
            }
        }
        Ok(())
    })?;
    let evals = (size * gts.len()) as f64;
    let per_second = evals / (split_ms / 1e3).max(1e-12);
    let text = if json_out {
        to_json(&json!({
            "size": size,
            "repeats": repeats,
            "split_giou_ms": split_ms,
            "split_giou_evaluations": evals,
            "split_giou_per_second": per_second,
            "hungarian_ms": hungarian_ms,
            "sampling_ms": sample_ms,
        }))
    } else {
        format!(
            "kernel                       median ms\n\
             split-GIoU box loss x{evals:<8} {split_ms:>10.3}  ({per_second:.0}/s)\n\
             hungarian {size}x{size:<14} {hungarian_ms:>10.3}\n\
             polygon sampling x{size:<10} {sample_ms:>10.3}\n"
        )
    };
    emit(cfg, stdout, &text)
}
