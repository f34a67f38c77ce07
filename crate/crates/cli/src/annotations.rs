//! Annotation sets: dataset text importers, the canonical JSON format and
//! representation conversion.
//!
//! Canonical JSON (see `schema/annotations.schema.json`):
//!
//! ```json
//! {"images":[{"id":"img_1","width":1280,"height":720,"instances":[
//!   {"repr":"quad","coords":[x1,y1,...,x4,y4],"ignore":false,"text":"word"}]}]}
//! ```
//!
//! `repr` is `quad` (8 numbers), `polygon` (an even number of vertices,
//! first half the top side left to right, second half the bottom side right
//! to left) or `bezier16` (top P0..P3 then bottom P0..P3). Detections may
//! carry a `score` in [0, 1].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use splitgiou_core::bezier::{polygon_to_bezier_pair, sample_polygon};
use splitgiou_core::geometry::signed_area;
use splitgiou_core::{BezierCurve, BezierPair, BoxShape, FitOptions, Point2, TextPolygon};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{path}: {message}")]
    Json { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Four vertices in file order: top-left, top-right, bottom-right, bottom-left.
    Quad([Point2; 4]),
    Polygon(TextPolygon),
    Bezier(BezierPair),
}

impl Shape {
    pub fn tag(&self) -> &'static str {
        match self {
            Shape::Quad(_) => "quad",
            Shape::Polygon(_) => "polygon",
            Shape::Bezier(_) => "bezier16",
        }
    }

    pub fn coords(&self) -> Vec<f64> {
        match self {
            Shape::Quad(q) => q.iter().flat_map(|p| [p.x, p.y]).collect(),
            Shape::Polygon(p) => p.to_coords(),
            Shape::Bezier(b) => b.to_coords(),
        }
    }

    /// Regression form used by the loss and matching commands. Quads become
    /// straight-sided Bezier pairs.
    pub fn to_box(&self) -> BoxShape {
        match self {
            Shape::Quad(q) => BoxShape::Bezier(quad_pair(q)),
            Shape::Polygon(p) => BoxShape::Polygon(p.clone()),
            Shape::Bezier(b) => BoxShape::Bezier(b.clone()),
        }
    }

    /// Boundary polygon for IoU evaluation; Bezier pairs are sampled with
    /// `n_v` points per side.
    pub fn boundary(&self, n_v: usize) -> Result<TextPolygon, String> {
        match self {
            Shape::Quad(q) => TextPolygon::new(q.to_vec()).map_err(|e| e.to_string()),
            Shape::Polygon(p) => Ok(p.clone()),
            Shape::Bezier(b) => sample_polygon(b, n_v).map_err(|e| e.to_string()),
        }
    }
}

fn quad_pair(q: &[Point2; 4]) -> BezierPair {
    BezierPair::new(BezierCurve::line(q[0], q[1]), BezierCurve::line(q[2], q[3])).expect("lines are cubic")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub shape: Shape,
    pub ignore: bool,
    pub text: Option<String>,
    /// Detection confidence; absent for ground truth.
    pub score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageAnnotations {
    pub id: String,
    pub width: u32,
    pub height: u32,
    pub instances: Vec<Instance>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnnotationSet {
    pub images: Vec<ImageAnnotations>,
}

impl AnnotationSet {
    pub fn instance_count(&self) -> usize {
        self.images.iter().map(|i| i.instances.len()).sum()
    }
}

const IGNORE_TEXT: &str = "###";

fn parse_numbers(fields: &[&str], line: usize) -> Result<Vec<f64>, ParseError> {
    fields
        .iter()
        .map(|f| {
            let v: f64 = f.trim().parse().map_err(|_| ParseError::Line { line, message: format!("not a number: {:?}", f.trim()) })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(ParseError::Line { line, message: format!("not a finite number: {:?}", f.trim()) })
            }
        })
        .collect()
}

fn points(coords: &[f64]) -> Vec<Point2> {
    coords.chunks_exact(2).map(|c| Point2::new(c[0], c[1])).collect()
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_start_matches('\u{feff}').trim())).filter(|(_, l)| !l.is_empty())
}

fn transcription(rest: &str) -> (bool, Option<String>) {
    let t = rest.trim();
    (t == IGNORE_TEXT, Some(t.to_string()))
}

/// ICDAR 2015 ground truth: `x1,y1,x2,y2,x3,y3,x4,y4,transcription` per
/// line. A transcription of `###` marks a do-not-care region. The
/// transcription may itself contain commas.
pub fn parse_icdar15(text: &str) -> Result<Vec<Instance>, ParseError> {
    let mut out = Vec::new();
    for (line, l) in content_lines(text) {
        let fields: Vec<&str> = l.splitn(9, ',').collect();
        if fields.len() != 9 {
            return Err(ParseError::Line {
                line,
                message: format!("expected 8 coordinates and a transcription, found {} fields", fields.len()),
            });
        }
        let c = parse_numbers(&fields[..8], line)?;
        let p = points(&c);
        let (ignore, text) = transcription(fields[8]);
        out.push(Instance { shape: Shape::Quad([p[0], p[1], p[2], p[3]]), ignore, text, score: None });
    }
    Ok(out)
}

/// Checks the side convention: top side left to right then bottom side
/// right to left, which gives a non-negative shoelace area in image
/// coordinates (y down).
fn oriented_polygon(p: Vec<Point2>) -> Result<TextPolygon, String> {
    if signed_area(&p) < 0.0 {
        return Err("vertices run against the side convention (top side left to right, then bottom side right to left)".into());
    }
    TextPolygon::new(p).map_err(|e| e.to_string())
}

/// Polygon lines: `x1,y1,...,xn,yn[,transcription]` with exactly
/// `n_vertices` vertices per line.
pub fn parse_polygon_lines(text: &str, n_vertices: usize) -> Result<Vec<Instance>, ParseError> {
    let mut out = Vec::new();
    let want = 2 * n_vertices;
    for (line, l) in content_lines(text) {
        let fields: Vec<&str> = l.splitn(want + 1, ',').collect();
        if fields.len() < want {
            return Err(ParseError::Line { line, message: format!("expected {want} coordinates, found {}", fields.len()) });
        }
        let c = parse_numbers(&fields[..want], line)?;
        let (ignore, text) = match fields.get(want) {
            // Two or more numeric fields past the declared count are extra
            // vertices, not a transcription.
            Some(rest) if rest.split(',').count() >= 2 && rest.split(',').all(|f| f.trim().parse::<f64>().is_ok()) => {
                return Err(ParseError::Line { line, message: format!("expected {want} coordinates, found more") });
            }
            Some(rest) => transcription(rest),
            None => (false, None),
        };
        let polygon = oriented_polygon(points(&c)).map_err(|message| ParseError::Line { line, message })?;
        out.push(Instance { shape: Shape::Polygon(polygon), ignore, text, score: None });
    }
    Ok(out)
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
enum ReprTag {
    Quad,
    Polygon,
    Bezier16,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    repr: ReprTag,
    coords: Vec<f64>,
    #[serde(default)]
    ignore: bool,
    #[serde(default)]
    text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    score: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawImage {
    id: String,
    width: u32,
    height: u32,
    instances: Vec<RawInstance>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSet {
    images: Vec<RawImage>,
}

fn shape_from_raw(repr: ReprTag, c: &[f64]) -> Result<Shape, String> {
    if !c.len().is_multiple_of(2) {
        return Err(format!("odd coordinate count {}", c.len()));
    }
    let p = points(c);
    match repr {
        ReprTag::Quad if p.len() == 4 => Ok(Shape::Quad([p[0], p[1], p[2], p[3]])),
        ReprTag::Quad => Err(format!("quad needs 8 coordinates, found {}", c.len())),
        ReprTag::Bezier16 => BezierPair::from_coords(c).map(Shape::Bezier).map_err(|e| e.to_string()),
        ReprTag::Polygon if p.len() < 4 => Err(format!("polygon needs at least 4 vertices, found {}", p.len())),
        ReprTag::Polygon => oriented_polygon(p).map(Shape::Polygon),
    }
}

/// Parses canonical JSON. Any error aborts the whole parse.
pub fn parse_canonical_json(bytes: &[u8]) -> Result<AnnotationSet, ParseError> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let raw: RawSet = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ParseError::Json { path: if path == "." { "$".into() } else { format!("$.{path}") }, message: e.into_inner().to_string() }
    })?;
    let mut seen = BTreeSet::new();
    let mut images = Vec::with_capacity(raw.images.len());
    for (i, img) in raw.images.into_iter().enumerate() {
        if !seen.insert(img.id.clone()) {
            return Err(ParseError::Json { path: format!("$.images[{i}].id"), message: format!("duplicate image id {:?}", img.id) });
        }
        let mut instances = Vec::with_capacity(img.instances.len());
        for (k, inst) in img.instances.into_iter().enumerate() {
            let at = |field: &str| format!("$.images[{i}].instances[{k}].{field}");
            let shape = shape_from_raw(inst.repr, &inst.coords).map_err(|message| ParseError::Json { path: at("coords"), message })?;
            if let Some(s) = inst.score {
                if !(0.0..=1.0).contains(&s) {
                    return Err(ParseError::Json { path: at("score"), message: format!("score {s} outside [0, 1]") });
                }
            }
            instances.push(Instance { shape, ignore: inst.ignore, text: inst.text, score: inst.score });
        }
        images.push(ImageAnnotations { id: img.id, width: img.width, height: img.height, instances });
    }
    Ok(AnnotationSet { images })
}

/// Pretty-printed canonical JSON with images sorted by id and a trailing
/// newline. Output depends only on the set's contents.
pub fn to_canonical_json(set: &AnnotationSet) -> String {
    let mut images: Vec<&ImageAnnotations> = set.images.iter().collect();
    images.sort_by(|a, b| a.id.cmp(&b.id));
    let raw = RawSet {
        images: images
            .into_iter()
            .map(|img| RawImage {
                id: img.id.clone(),
                width: img.width,
                height: img.height,
                instances: img
                    .instances
                    .iter()
                    .map(|inst| RawInstance {
                        repr: match inst.shape {
                            Shape::Quad(_) => ReprTag::Quad,
                            Shape::Polygon(_) => ReprTag::Polygon,
                            Shape::Bezier(_) => ReprTag::Bezier16,
                        },
                        coords: inst.shape.coords(),
                        ignore: inst.ignore,
                        text: inst.text.clone(),
                        score: inst.score,
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&raw).expect("plain data serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Bezier16,
    /// Total vertex count, split evenly between the two sides.
    Polygon {
        vertices: usize,
    },
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Bezier16 => write!(f, "bezier16"),
            Target::Polygon { vertices } => write!(f, "polygon{vertices}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConversionFailure {
    pub image_id: String,
    pub index: usize,
    pub reason: String,
}

fn to_pair(shape: &Shape, fit: &FitOptions) -> Result<BezierPair, String> {
    match shape {
        Shape::Quad(q) => Ok(quad_pair(q)),
        Shape::Polygon(p) => polygon_to_bezier_pair(p, fit).map_err(|e| e.to_string()),
        Shape::Bezier(b) => Ok(b.clone()),
    }
}

fn convert_shape(shape: &Shape, target: Target, fit: &FitOptions) -> Result<Shape, String> {
    match target {
        Target::Bezier16 => to_pair(shape, fit).map(Shape::Bezier),
        Target::Polygon { vertices } => {
            if vertices < 4 || vertices % 2 != 0 {
                return Err(format!("polygon target needs an even vertex count of at least 4, got {vertices}"));
            }
            if let Shape::Polygon(p) = shape {
                if p.len() == vertices {
                    return Ok(shape.clone());
                }
            }
            let pair = to_pair(shape, fit)?;
            sample_polygon(&pair, vertices / 2).map(Shape::Polygon).map_err(|e| e.to_string())
        }
    }
}

/// Converts every instance to `target`. Instances that cannot be converted
/// keep their source representation and are listed in the failure report;
/// image ids, instance order, ignore flags and transcriptions never change.
pub fn convert_representation(set: &AnnotationSet, target: Target) -> (AnnotationSet, Vec<ConversionFailure>) {
    let fit = FitOptions::default();
    let mut failures = Vec::new();
    let images = set
        .images
        .iter()
        .map(|img| ImageAnnotations {
            instances: img
                .instances
                .iter()
                .enumerate()
                .map(|(index, inst)| match convert_shape(&inst.shape, target, &fit) {
                    Ok(shape) => Instance { shape, ..inst.clone() },
                    Err(reason) => {
                        failures.push(ConversionFailure { image_id: img.id.clone(), index, reason });
                        inst.clone()
                    }
                })
                .collect(),
            ..img.clone()
        })
        .collect();
    (AnnotationSet { images }, failures)
}
