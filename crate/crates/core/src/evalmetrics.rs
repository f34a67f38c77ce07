//! Precision / recall / H-mean of text detections against ground truth.
//!
//! Protocol, per image:
//! 1. Detections are visited in descending score order (input order breaks
//!    ties). Each claims the unclaimed non-ignored ground truth of highest
//!    polygon IoU, provided that IoU is at least the threshold. With
//!    [`MatchStrategy::Optimal`] the claims are instead a maximum-total-IoU
//!    assignment over pairs that pass the threshold.
//! 2. An unmatched detection whose IoU with some ignored ground truth
//!    passes the threshold is dropped; every other unmatched detection is a
//!    false positive.
//! 3. Unclaimed non-ignored ground truths are false negatives.
//!
//! Precision and recall are pooled over all images and are 0 when their
//! denominators are 0.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::geometry::{polygon_iou, TextPolygon};
use crate::matching::{hungarian, CostMatrix};

/// IoU threshold used when none is given.
pub const DEFAULT_IOU_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    ThresholdOutOfRange(f64),
    ScoreOutOfRange { image_id: String, score: f64 },
    ValueOutOfRange { name: &'static str, value: f64 },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::ThresholdOutOfRange(t) => write!(f, "IoU threshold {t} outside (0, 1)"),
            EvalError::ScoreOutOfRange { image_id, score } => {
                write!(f, "detection score {score} in image {image_id} outside [0, 1]")
            }
            EvalError::ValueOutOfRange { name, value } => write!(f, "{name} = {value} outside [0, 1]"),
        }
    }
}

impl core::error::Error for EvalError {}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionRecord {
    pub image_id: String,
    pub polygon: TextPolygon,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruthRecord {
    pub image_id: String,
    pub polygon: TextPolygon,
    /// Do-not-care region: neither rewarded nor penalized.
    pub ignore: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchStrategy {
    #[default]
    Greedy,
    Optimal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageStats {
    pub image_id: String,
    pub matches: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub hmean: f64,
    /// Sorted by image id.
    pub per_image: Vec<ImageStats>,
}

impl EvalReport {
    pub fn total_matches(&self) -> usize {
        self.per_image.iter().map(|s| s.matches).sum()
    }

    pub fn total_false_positives(&self) -> usize {
        self.per_image.iter().map(|s| s.false_positives).sum()
    }

    pub fn total_false_negatives(&self) -> usize {
        self.per_image.iter().map(|s| s.false_negatives).sum()
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<(), EvalError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(EvalError::ValueOutOfRange { name, value })
    }
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn hmean(precision: f64, recall: f64) -> Result<f64, EvalError> {
    check_unit("precision", precision)?;
    check_unit("recall", recall)?;
    Ok(hmean_unchecked(precision, recall))
}

fn hmean_unchecked(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

#[derive(Default)]
struct ImageBucket<'a> {
    dets: Vec<&'a DetectionRecord>,
    gts: Vec<&'a GroundTruthRecord>,
}

fn evaluate_image(bucket: &ImageBucket<'_>, threshold: f64, strategy: MatchStrategy) -> (usize, usize, usize) {
    let mut dets = bucket.dets.clone();
    // Stable: equal scores keep input order.
    dets.sort_by(|a, b| b.score.total_cmp(&a.score));
    let care: Vec<&GroundTruthRecord> = bucket.gts.iter().copied().filter(|g| !g.ignore).collect();
    let ignored: Vec<&GroundTruthRecord> = bucket.gts.iter().copied().filter(|g| g.ignore).collect();

    let ious: Vec<Vec<f64>> = dets.iter().map(|d| care.iter().map(|g| polygon_iou(&d.polygon, &g.polygon)).collect()).collect();

    let mut det_matched = alloc::vec![false; dets.len()];
    let mut gt_claimed = alloc::vec![false; care.len()];
    match strategy {
        MatchStrategy::Greedy => {
            for (i, row) in ious.iter().enumerate() {
                let mut best: Option<(usize, f64)> = None;
                for (j, &v) in row.iter().enumerate() {
                    if !gt_claimed[j] && v >= threshold && best.is_none_or(|(_, b)| v > b) {
                        best = Some((j, v));
                    }
                }
                if let Some((j, _)) = best {
                    gt_claimed[j] = true;
                    det_matched[i] = true;
                }
            }
        }
        MatchStrategy::Optimal => {
            if !dets.is_empty() && !care.is_empty() {
                let values = ious.iter().flatten().map(|&v| if v >= threshold { -v } else { 0.0 }).collect();
                let costs = CostMatrix::new(dets.len(), care.len(), values).expect("IoU values are finite");
                for (i, j) in hungarian(&costs).pairs {
                    if ious[i][j] >= threshold {
                        det_matched[i] = true;
                        gt_claimed[j] = true;
                    }
                }
            }
        }
    }

    let matches = det_matched.iter().filter(|&&m| m).count();
    let false_positives = dets
        .iter()
        .zip(&det_matched)
        .filter(|(d, &m)| !m && !ignored.iter().any(|g| polygon_iou(&d.polygon, &g.polygon) >= threshold))
        .count();
    (matches, false_positives, care.len() - matches)
}

/// Scores detections against ground truth; see the module docs for the
/// exact matching rules.
pub fn evaluate(
    dets: &[DetectionRecord],
    gts: &[GroundTruthRecord],
    iou_threshold: f64,
    strategy: MatchStrategy,
) -> Result<EvalReport, EvalError> {
    if !(iou_threshold > 0.0 && iou_threshold < 1.0) {
        return Err(EvalError::ThresholdOutOfRange(iou_threshold));
    }
    let mut images: BTreeMap<&str, ImageBucket<'_>> = BTreeMap::new();
    for d in dets {
        if !(0.0..=1.0).contains(&d.score) {
            return Err(EvalError::ScoreOutOfRange { image_id: d.image_id.clone(), score: d.score });
        }
        images.entry(d.image_id.as_str()).or_default().dets.push(d);
    }
    for g in gts {
        images.entry(g.image_id.as_str()).or_default().gts.push(g);
    }

    let mut per_image = Vec::with_capacity(images.len());
    for (id, bucket) in &images {
        let (matches, false_positives, false_negatives) = evaluate_image(bucket, iou_threshold, strategy);
        per_image.push(ImageStats { image_id: String::from(*id), matches, false_positives, false_negatives });
    }

    let tp: usize = per_image.iter().map(|s| s.matches).sum();
    let fp: usize = per_image.iter().map(|s| s.false_positives).sum();
    let fneg: usize = per_image.iter().map(|s| s.false_negatives).sum();
    let precision = if tp + fp > 0 { tp as f64 / (tp + fp) as f64 } else { 0.0 };
    let recall = if tp + fneg > 0 { tp as f64 / (tp + fneg) as f64 } else { 0.0 };
    Ok(EvalReport { precision, recall, hmean: hmean_unchecked(precision, recall), per_image })
}
