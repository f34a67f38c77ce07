//! Box losses for text boundaries: Smooth-ln regression on raw coordinates
//! plus a GIoU term over either the full enclosing box or three split
//! pieces along the text.

use alloc::vec::Vec;
use core::fmt;

use crate::bezier::{BezierError, BezierPair};
use crate::geometry::{self, enclosing_aarect, min_area_rotated_rect, AaRect, GeometryError, Point2, Region, RotatedRect, TextPolygon};

#[derive(Debug, Clone, PartialEq)]
pub enum LossError {
    NonFinite,
    InvalidWeight {
        name: &'static str,
        value: f64,
    },
    /// The split mode cannot be applied to this box representation.
    ModeMismatch {
        mode: SplitMode,
        representation: &'static str,
    },
    RepresentationMismatch,
    CoordinateCountMismatch {
        pred: usize,
        gt: usize,
    },
    WrongVertexCount {
        expected: usize,
        got: usize,
    },
    InvalidStep(f64),
    Geometry(GeometryError),
    Bezier(BezierError),
}

impl fmt::Display for LossError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LossError::NonFinite => write!(f, "non-finite coordinate difference"),
            LossError::InvalidWeight { name, value } => {
                write!(f, "{name} must be finite and non-negative, got {value}")
            }
            LossError::ModeMismatch { mode, representation } => {
                write!(f, "split mode {mode:?} does not apply to {representation} boxes")
            }
            LossError::RepresentationMismatch => {
                write!(f, "prediction and ground truth use different box representations")
            }
            LossError::CoordinateCountMismatch { pred, gt } => {
                write!(f, "prediction has {pred} coordinates, ground truth {gt}")
            }
            LossError::WrongVertexCount { expected, got } => {
                write!(f, "expected {expected} vertices, got {got}")
            }
            LossError::InvalidStep(h) => write!(f, "finite-difference step must be positive, got {h}"),
            LossError::Geometry(e) => write!(f, "{e}"),
            LossError::Bezier(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for LossError {}

impl From<GeometryError> for LossError {
    fn from(e: GeometryError) -> Self {
        LossError::Geometry(e)
    }
}

impl From<BezierError> for LossError {
    fn from(e: BezierError) -> Self {
        LossError::Bezier(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitMode {
    /// GIoU of the boxes enclosing every control point / vertex.
    #[default]
    FullRect,
    /// Mean GIoU over three axis-aligned boxes on overlapping control-point
    /// groups of a [`BezierPair`].
    SplitRect3,
    /// Mean GIoU over three minimum-area rotated rectangles on overlapping
    /// vertex groups of a 20-vertex polygon.
    SplitRotatedRect3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reduction {
    #[default]
    Sum,
    Mean,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxLossConfig {
    /// Regression weight.
    pub lambda1: f64,
    /// GIoU weight.
    pub lambda2: f64,
    pub split_mode: SplitMode,
    /// Reduction of the regression term over coordinates.
    pub reduction: Reduction,
}

impl Default for BoxLossConfig {
    fn default() -> Self {
        BoxLossConfig { lambda1: 5.0, lambda2: 2.0, split_mode: SplitMode::FullRect, reduction: Reduction::Sum }
    }
}

impl BoxLossConfig {
    pub fn validate(&self) -> Result<(), LossError> {
        for (name, value) in [("lambda1", self.lambda1), ("lambda2", self.lambda2)] {
            if !value.is_finite() || value < 0.0 {
                return Err(LossError::InvalidWeight { name, value });
            }
        }
        Ok(())
    }
}

/// A predicted or ground-truth text box in one of the two regressed forms.
#[derive(Debug, Clone, PartialEq)]
pub enum BoxShape {
    Bezier(BezierPair),
    Polygon(TextPolygon),
}

impl BoxShape {
    pub fn representation(&self) -> &'static str {
        match self {
            BoxShape::Bezier(_) => "bezier16",
            BoxShape::Polygon(_) => "polygon",
        }
    }

    /// Flattened interleaved coordinates, the regression target.
    pub fn coords(&self) -> Vec<f64> {
        match self {
            BoxShape::Bezier(b) => b.to_coords(),
            BoxShape::Polygon(p) => p.to_coords(),
        }
    }

    /// Same representation rebuilt from replacement coordinates.
    pub fn with_coords(&self, coords: &[f64]) -> Result<BoxShape, LossError> {
        match self {
            BoxShape::Bezier(_) => Ok(BoxShape::Bezier(BezierPair::from_coords(coords)?)),
            BoxShape::Polygon(p) => {
                if coords.len() != 2 * p.len() {
                    return Err(LossError::CoordinateCountMismatch { pred: coords.len(), gt: 2 * p.len() });
                }
                Ok(BoxShape::Polygon(TextPolygon::from_coords(coords)?))
            }
        }
    }

    pub fn points(&self) -> Vec<Point2> {
        match self {
            BoxShape::Bezier(b) => b.control_points().to_vec(),
            BoxShape::Polygon(p) => p.vertices().to_vec(),
        }
    }

    pub fn translated(&self, by: Point2) -> Result<BoxShape, LossError> {
        Ok(match self {
            BoxShape::Bezier(b) => BoxShape::Bezier(b.map(|p| p + by)?),
            BoxShape::Polygon(p) => BoxShape::Polygon(p.map(|q| q + by)?),
        })
    }

    pub fn scaled(&self, factor: f64) -> Result<BoxShape, LossError> {
        Ok(match self {
            BoxShape::Bezier(b) => BoxShape::Bezier(b.map(|p| p * factor)?),
            BoxShape::Polygon(p) => BoxShape::Polygon(p.map(|q| q * factor)?),
        })
    }
}

/// The three loss terms; `total = lambda1 * regression_term + lambda2 * giou_term`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossValue {
    pub total: f64,
    pub regression_term: f64,
    pub giou_term: f64,
}

fn smooth_ln_component(d: f64) -> f64 {
    let a = d.abs();
    (a + 1.0) * libm::log1p(a) - a
}

/// `(|d| + 1) ln(|d| + 1) - |d|` summed or averaged over components.
pub fn smooth_ln(delta: &[f64], reduction: Reduction) -> Result<f64, LossError> {
    if !delta.iter().all(|d| d.is_finite()) {
        return Err(LossError::NonFinite);
    }
    let sum: f64 = delta.iter().map(|&d| smooth_ln_component(d)).sum();
    Ok(match reduction {
        Reduction::Sum => sum,
        Reduction::Mean if delta.is_empty() => 0.0,
        Reduction::Mean => sum / delta.len() as f64,
    })
}

/// Analytic gradient of [`smooth_ln`]: `sign(d) ln(1 + |d|)` per component,
/// divided by the component count under [`Reduction::Mean`].
pub fn smooth_ln_grad(delta: &[f64], reduction: Reduction) -> Result<Vec<f64>, LossError> {
    if !delta.iter().all(|d| d.is_finite()) {
        return Err(LossError::NonFinite);
    }
    let scale = match reduction {
        Reduction::Sum => 1.0,
        Reduction::Mean => 1.0 / delta.len().max(1) as f64,
    };
    Ok(delta.iter().map(|&d| scale * libm::copysign(libm::log1p(d.abs()), d)).collect())
}

/// `1 - GIoU(a, b)`, exactly 0 for identical shapes.
pub fn giou_loss<R: Region + PartialEq>(a: &R, b: &R) -> Result<f64, LossError> {
    if a == b {
        return Ok(0.0);
    }
    Ok(1.0 - geometry::giou(a, b)?)
}

/// Control-point groups `P1 P2 P7 P8`, `P2 P3 P6 P7`, `P3 P4 P5 P6` as
/// indices into [`BezierPair::control_points`].
const SPLIT_GROUPS: [[usize; 4]; 3] = [[0, 1, 6, 7], [1, 2, 5, 6], [2, 3, 4, 5]];

/// Axis-aligned boxes around three overlapping control-point groups, left
/// to right. Neighbouring boxes share two control points.
pub fn split_rects_from_bezier(pair: &BezierPair) -> [AaRect; 3] {
    let cp = pair.control_points();
    SPLIT_GROUPS.map(|g| enclosing_aarect(&g.map(|i| cp[i])).expect("four finite control points"))
}

/// Vertex count accepted by [`split_rotated_rects_from_polygon`].
pub const SPLIT_POLYGON_VERTICES: usize = 20;

/// Minimum-area rotated rectangles around three overlapping column groups
/// of a 20-vertex boundary (10 top vertices, 10 bottom vertices in reverse).
///
/// Column `c` pairs top vertex `c` with bottom vertex `19 - c`; the groups
/// are columns 0..=3, 3..=6 and 6..=9, so neighbours share one column.
pub fn split_rotated_rects_from_polygon(polygon: &TextPolygon) -> Result<[RotatedRect; 3], LossError> {
    let v = polygon.vertices();
    if v.len() != SPLIT_POLYGON_VERTICES {
        return Err(LossError::WrongVertexCount { expected: SPLIT_POLYGON_VERTICES, got: v.len() });
    }
    let last = v.len() - 1;
    let mut out = [RotatedRect::new(Point2::default(), 0.0, 0.0, 0.0)?; 3];
    for (g, rect) in out.iter_mut().enumerate() {
        let mut group = [Point2::default(); 8];
        for (k, c) in (3 * g..=3 * g + 3).enumerate() {
            group[2 * k] = v[c];
            group[2 * k + 1] = v[last - c];
        }
        *rect = min_area_rotated_rect(&group)?;
    }
    Ok(out)
}

fn mean_giou_loss<R: Region + PartialEq>(pred: &[R; 3], gt: &[R; 3]) -> Result<f64, LossError> {
    let mut sum = 0.0;
    for (p, g) in pred.iter().zip(gt) {
        sum += giou_loss(p, g)?;
    }
    Ok(sum / 3.0)
}

fn giou_term(pred: &BoxShape, gt: &BoxShape, mode: SplitMode) -> Result<f64, LossError> {
    match (mode, pred, gt) {
        (SplitMode::FullRect, _, _) => giou_loss(&enclosing_aarect(&pred.points())?, &enclosing_aarect(&gt.points())?),
        (SplitMode::SplitRect3, BoxShape::Bezier(p), BoxShape::Bezier(g)) => {
            mean_giou_loss(&split_rects_from_bezier(p), &split_rects_from_bezier(g))
        }
        (SplitMode::SplitRotatedRect3, BoxShape::Polygon(p), BoxShape::Polygon(g)) => {
            mean_giou_loss(&split_rotated_rects_from_polygon(p)?, &split_rotated_rects_from_polygon(g)?)
        }
        (mode, shape, _) => Err(LossError::ModeMismatch { mode, representation: shape.representation() }),
    }
}

/// `lambda1 * smooth_ln(pred - gt) + lambda2 * giou_term`.
pub fn box_loss(pred: &BoxShape, gt: &BoxShape, cfg: &BoxLossConfig) -> Result<LossValue, LossError> {
    cfg.validate()?;
    if core::mem::discriminant(pred) != core::mem::discriminant(gt) {
        return Err(LossError::RepresentationMismatch);
    }
    let (pc, gc) = (pred.coords(), gt.coords());
    if pc.len() != gc.len() {
        return Err(LossError::CoordinateCountMismatch { pred: pc.len(), gt: gc.len() });
    }
    let delta: Vec<f64> = pc.iter().zip(&gc).map(|(a, b)| a - b).collect();
    let regression_term = smooth_ln(&delta, cfg.reduction)?;
    let giou_term = giou_term(pred, gt, cfg.split_mode)?;
    Ok(LossValue { total: cfg.lambda1 * regression_term + cfg.lambda2 * giou_term, regression_term, giou_term })
}

/// Central-difference gradient of `box_loss(..).total` with respect to
/// every coordinate of `pred`.
pub fn finite_diff_loss_grad(pred: &BoxShape, gt: &BoxShape, cfg: &BoxLossConfig, h: f64) -> Result<Vec<f64>, LossError> {
    if !h.is_finite() || h <= 0.0 {
        return Err(LossError::InvalidStep(h));
    }
    let base = pred.coords();
    let mut grad = Vec::with_capacity(base.len());
    let mut probe = base.clone();
    for i in 0..base.len() {
        probe[i] = base[i] + h;
        let up = box_loss(&pred.with_coords(&probe)?, gt, cfg)?.total;
        probe[i] = base[i] - h;
        let down = box_loss(&pred.with_coords(&probe)?, gt, cfg)?.total;
        probe[i] = base[i];
        grad.push((up - down) / (2.0 * h));
    }
    Ok(grad)
}
