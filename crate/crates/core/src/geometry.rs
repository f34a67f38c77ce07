//! Points, rectangles and polygons, plus the overlap and enclosure areas
//! behind IoU and GIoU.
//!
//! Polygons are always stored with a positive signed shoelace area
//! ("counter-clockwise" in a y-up frame; the usual clockwise-looking
//! reading order in y-down image coordinates also has positive area).

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

/// Absolute tolerance for point-equality and clip-side tests.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum GeometryError {
    NonFinite,
    TooFewVertices {
        got: usize,
        min: usize,
    },
    /// `min` exceeds `max` on some axis.
    InvertedRect,
    NegativeSize,
    NonConvex,
    EmptyInput,
    /// The enclosing region of a GIoU pair has zero area.
    DegenerateEnclosure,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::NonFinite => write!(f, "coordinate is NaN or infinite"),
            GeometryError::TooFewVertices { got, min } => {
                write!(f, "polygon needs at least {min} vertices, got {got}")
            }
            GeometryError::InvertedRect => write!(f, "rectangle min corner exceeds max corner"),
            GeometryError::NegativeSize => write!(f, "rectangle width or height is negative"),
            GeometryError::NonConvex => {
                write!(f, "polygon is not convex; decompose it before clipping")
            }
            GeometryError::EmptyInput => write!(f, "no points given"),
            GeometryError::DegenerateEnclosure => {
                write!(f, "enclosing region has zero area (both shapes degenerate)")
            }
        }
    }
}

impl core::error::Error for GeometryError {}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn try_new(x: f64, y: f64) -> Result<Self, GeometryError> {
        let p = Point2 { x, y };
        if p.is_finite() {
            Ok(p)
        } else {
            Err(GeometryError::NonFinite)
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 2-D cross product.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn distance(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise rotation about the origin.
    pub fn rotated(self, angle: f64) -> Point2 {
        let (s, c) = libm::sincos(angle);
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Distance to the closed segment `a`..`b`.
    pub fn distance_to_segment(self, a: Point2, b: Point2) -> f64 {
        let ab = b - a;
        let len2 = ab.dot(ab);
        if len2 == 0.0 {
            return self.distance(a);
        }
        let t = ((self - a).dot(ab) / len2).clamp(0.0, 1.0);
        self.distance(a + ab * t)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

fn check_finite(points: &[Point2]) -> Result<(), GeometryError> {
    if points.iter().all(|p| p.is_finite()) {
        Ok(())
    } else {
        Err(GeometryError::NonFinite)
    }
}

/// Signed shoelace area; positive for counter-clockwise vertex order.
pub fn signed_area(points: &[Point2]) -> f64 {
    let n = points.len();
    if n < 3 {
        return 0.0;
    }
    let origin = points[0];
    let mut acc = 0.0;
    for i in 1..n - 1 {
        acc += (points[i] - origin).cross(points[i + 1] - origin);
    }
    0.5 * acc
}

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AaRect {
    min: Point2,
    max: Point2,
}

impl AaRect {
    pub fn new(min: Point2, max: Point2) -> Result<Self, GeometryError> {
        check_finite(&[min, max])?;
        if min.x > max.x || min.y > max.y {
            return Err(GeometryError::InvertedRect);
        }
        Ok(AaRect { min, max })
    }

    pub fn min(&self) -> Point2 {
        self.min
    }

    pub fn max(&self) -> Point2 {
        self.max
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> Point2 {
        (self.min + self.max) * 0.5
    }

    /// Corners in counter-clockwise order starting at `min`.
    pub fn corners(&self) -> [Point2; 4] {
        [self.min, Point2::new(self.max.x, self.min.y), self.max, Point2::new(self.min.x, self.max.y)]
    }

    /// Smallest rectangle containing both.
    pub fn union_bounds(&self, other: &AaRect) -> AaRect {
        AaRect {
            min: Point2::new(self.min.x.min(other.min.x), self.min.y.min(other.min.y)),
            max: Point2::new(self.max.x.max(other.max.x), self.max.y.max(other.max.y)),
        }
    }

    pub fn to_polygon(&self) -> TextPolygon {
        TextPolygon::from_canonical(self.corners().to_vec())
    }
}

/// Oriented rectangle.
///
/// Stored canonically: `width >= height` and `angle` in `[-pi/2, pi/2)`
/// (`[-pi/4, pi/4)` for squares), so two values describing the same point
/// set carry the same fields up to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedRect {
    center: Point2,
    width: f64,
    height: f64,
    angle: f64,
}

fn wrap_angle(mut a: f64, period: f64) -> f64 {
    // Into [-period/2, period/2).
    a = libm::fmod(a + period / 2.0, period);
    if a < 0.0 {
        a += period;
    }
    let out = a - period / 2.0;
    if out >= period / 2.0 {
        -period / 2.0
    } else {
        out
    }
}

impl RotatedRect {
    pub fn new(center: Point2, width: f64, height: f64, angle: f64) -> Result<Self, GeometryError> {
        if !(center.is_finite() && width.is_finite() && height.is_finite() && angle.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if width < 0.0 || height < 0.0 {
            return Err(GeometryError::NegativeSize);
        }
        let (mut w, mut h, mut a) = (width, height, angle);
        if h > w {
            core::mem::swap(&mut w, &mut h);
            a += FRAC_PI_2;
        }
        let square = (w - h).abs() <= EPS * w.max(1.0);
        a = if square { wrap_angle(a, FRAC_PI_2) } else { wrap_angle(a, PI) };
        Ok(RotatedRect { center, width: w, height: h, angle: a })
    }

    pub fn center(&self) -> Point2 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    /// Orientation of the width axis, radians.
    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    /// Zero height: the points it was built from were collinear.
    pub fn is_degenerate(&self) -> bool {
        self.height <= EPS * self.width.max(1.0)
    }

    /// Corners in counter-clockwise order.
    pub fn corners(&self) -> [Point2; 4] {
        let (s, c) = libm::sincos(self.angle);
        let u = Point2::new(c, s) * (self.width / 2.0);
        let v = Point2::new(-s, c) * (self.height / 2.0);
        let o = self.center;
        [o - u - v, o + u - v, o + u + v, o - u + v]
    }

    /// Field-wise comparison; angles compared modulo the rectangle's symmetry.
    pub fn approx_eq(&self, other: &RotatedRect, tol: f64) -> bool {
        if self.center.distance(other.center) > tol || (self.width - other.width).abs() > tol || (self.height - other.height).abs() > tol {
            return false;
        }
        if self.width <= tol {
            return true;
        }
        let period = if (self.width - self.height).abs() <= tol { FRAC_PI_2 } else { PI };
        wrap_angle(self.angle - other.angle, period).abs() <= tol
    }

    pub fn to_polygon(&self) -> TextPolygon {
        TextPolygon::from_canonical(self.corners().to_vec())
    }
}

/// An ordered polygon boundary with at least three vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct TextPolygon {
    vertices: Vec<Point2>,
}

impl TextPolygon {
    /// Builds a polygon, reversing clockwise input so the signed area is
    /// non-negative.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices { got: vertices.len(), min: 3 });
        }
        check_finite(&vertices)?;
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        Ok(TextPolygon { vertices })
    }

    /// Interleaved `x0, y0, x1, y1, ...`.
    pub fn from_coords(coords: &[f64]) -> Result<Self, GeometryError> {
        if !coords.len().is_multiple_of(2) {
            return Err(GeometryError::TooFewVertices { got: coords.len() / 2, min: 3 });
        }
        TextPolygon::new(coords.chunks_exact(2).map(|c| Point2::new(c[0], c[1])).collect())
    }

    fn from_canonical(vertices: Vec<Point2>) -> Self {
        debug_assert!(signed_area(&vertices) >= 0.0);
        TextPolygon { vertices }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point2> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn to_coords(&self) -> Vec<f64> {
        self.vertices.iter().flat_map(|p| [p.x, p.y]).collect()
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    /// Applies `f` to every vertex and re-canonicalizes the winding.
    pub fn map<F: FnMut(Point2) -> Point2>(&self, f: F) -> Result<TextPolygon, GeometryError> {
        TextPolygon::new(self.vertices.iter().copied().map(f).collect())
    }

    /// All turns are left turns (within tolerance) and the boundary winds
    /// exactly once. Collinear and repeated vertices are tolerated.
    pub fn is_convex(&self) -> bool {
        is_convex_ccw(&self.vertices)
    }

    /// Crossing-number containment test; boundary points count as inside
    /// only by accident of rounding.
    pub fn contains(&self, p: Point2) -> bool {
        let v = &self.vertices;
        let mut inside = false;
        let mut j = v.len() - 1;
        for i in 0..v.len() {
            let (a, b) = (v[i], v[j]);
            if (a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x {
                inside = !inside;
            }
            j = i;
        }
        inside
    }
}

fn is_convex_ccw(v: &[Point2]) -> bool {
    let n = v.len();
    let mut turning = 0.0;
    for i in 0..n {
        let e1 = v[(i + 1) % n] - v[i];
        let e2 = v[(i + 2) % n] - v[(i + 1) % n];
        let (l1, l2) = (e1.norm(), e2.norm());
        if l1 == 0.0 || l2 == 0.0 {
            continue;
        }
        let cross = e1.cross(e2);
        if cross < -EPS * l1 * l2 {
            return false;
        }
        turning += libm::atan2(cross, e1.dot(e2));
    }
    // A degenerate (collinear) boundary turns by 0 or 2*pi; a star turns by 4*pi.
    turning <= 2.0 * PI + 1e-6
}

/// Convex hull by monotone chain, counter-clockwise, collinear points dropped.
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(pts.len() * 2);
    for pass in 0..2 {
        let start = hull.len();
        let iter: &mut dyn Iterator<Item = &Point2> = if pass == 0 { &mut pts.iter() } else { &mut pts.iter().rev() };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - b) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        // Collinear input: keep the two extreme points.
        return alloc::vec![pts[0], pts[pts.len() - 1]];
    }
    hull
}

/// Componentwise min/max box of a non-empty point set.
pub fn enclosing_aarect(points: &[Point2]) -> Result<AaRect, GeometryError> {
    let first = *points.first().ok_or(GeometryError::EmptyInput)?;
    check_finite(points)?;
    let (mut min, mut max) = (first, first);
    for p in &points[1..] {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    }
    Ok(AaRect { min, max })
}

/// Smallest-area oriented rectangle containing every point, by rotating
/// calipers over the convex hull. Collinear input yields a zero-height
/// rectangle (see [`RotatedRect::is_degenerate`]).
pub fn min_area_rotated_rect(points: &[Point2]) -> Result<RotatedRect, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::EmptyInput);
    }
    check_finite(points)?;
    let hull = convex_hull(points);
    match hull.len() {
        1 => return RotatedRect::new(hull[0], 0.0, 0.0, 0.0),
        2 => {
            let d = hull[1] - hull[0];
            return RotatedRect::new((hull[0] + hull[1]) * 0.5, d.norm(), 0.0, libm::atan2(d.y, d.x));
        }
        _ => {}
    }

    let n = hull.len();
    let at = |i: usize| hull[i % n];
    let mut best: Option<(f64, RotatedRect)> = None;
    // Indices of the extreme vertices along the edge direction (far),
    // along the inward normal (top) and against the edge direction (near).
    let (mut far, mut top, mut near) = (1usize, 1usize, 1usize);
    for i in 0..n {
        let origin = at(i);
        let edge = at(i + 1) - origin;
        let u = edge * (1.0 / edge.norm());
        let normal = Point2::new(-u.y, u.x);

        far = far.max(i + 1);
        while (at(far + 1) - at(far)).dot(u) > 0.0 && far < i + n {
            far += 1;
        }
        top = top.max(far);
        while (at(top + 1) - at(top)).dot(normal) > 0.0 && top < far + n {
            top += 1;
        }
        near = near.max(top);
        while (at(near + 1) - at(near)).dot(u) < 0.0 && near < top + n {
            near += 1;
        }

        let max_u = (at(far) - origin).dot(u);
        let min_u = (at(near) - origin).dot(u).min(0.0);
        let height = (at(top) - origin).dot(normal).max(0.0);
        let width = max_u - min_u;
        let area = width * height;
        // Near-ties keep the earlier edge so rounding noise cannot flip
        // between two orientations of practically equal area.
        if best.as_ref().is_none_or(|(a, _)| area < *a * (1.0 - 1e-9)) {
            let center = origin + u * ((max_u + min_u) / 2.0) + normal * (height / 2.0);
            let rect = RotatedRect::new(center, width, height, libm::atan2(u.y, u.x))?;
            best = Some((area, rect));
        }
    }
    Ok(best.expect("hull has at least three edges").1)
}

/// Sutherland–Hodgman clip of `subject` by every edge of the
/// counter-clockwise convex polygon `clip`.
fn clip_convex(subject: &[Point2], clip: &[Point2]) -> Vec<Point2> {
    let mut output: Vec<Point2> = subject.to_vec();
    let mut input: Vec<Point2> = Vec::with_capacity(subject.len() + clip.len());
    let m = clip.len();
    for k in 0..m {
        if output.is_empty() {
            break;
        }
        let a = clip[k];
        let b = clip[(k + 1) % m];
        let dir = b - a;
        if dir.x == 0.0 && dir.y == 0.0 {
            continue;
        }
        core::mem::swap(&mut input, &mut output);
        output.clear();
        let side = |p: Point2| dir.cross(p - a);
        let mut prev = input[input.len() - 1];
        let mut prev_side = side(prev);
        for &cur in input.iter() {
            let cur_side = side(cur);
            let cur_in = cur_side >= 0.0;
            let prev_in = prev_side >= 0.0;
            if cur_in != prev_in {
                let t = prev_side / (prev_side - cur_side);
                output.push(prev + (cur - prev) * t);
            }
            if cur_in {
                output.push(cur);
            }
            prev = cur;
            prev_side = cur_side;
        }
    }
    output
}

/// Intersection of two convex polygons, or `None` when they do not overlap.
pub fn convex_intersection(a: &TextPolygon, b: &TextPolygon) -> Result<Option<TextPolygon>, GeometryError> {
    if !a.is_convex() || !b.is_convex() {
        return Err(GeometryError::NonConvex);
    }
    let clipped = clip_convex(&a.vertices, &b.vertices);
    if clipped.len() < 3 {
        return Ok(None);
    }
    let area = signed_area(&clipped);
    let mut clipped = clipped;
    if area < 0.0 {
        clipped.reverse();
    }
    Ok(Some(TextPolygon { vertices: clipped }))
}

fn convex_overlap_area(a: &[Point2], b: &[Point2]) -> f64 {
    let clipped = clip_convex(a, b);
    signed_area(&clipped).abs()
}

fn hull_area(a: &[Point2], b: &[Point2]) -> f64 {
    let mut pts = Vec::with_capacity(a.len() + b.len());
    pts.extend_from_slice(a);
    pts.extend_from_slice(b);
    signed_area(&convex_hull(&pts))
}

/// Intersection area of two simple polygons, convex or not.
///
/// Each polygon is fanned from its first vertex into signed triangles whose
/// signed indicator functions sum to the polygon's indicator; the overlap is
/// then the signed sum of pairwise convex triangle overlaps. Exact up to
/// rounding for any simple polygon.
pub fn polygon_intersection_area(a: &TextPolygon, b: &TextPolygon) -> f64 {
    if a.is_convex() && b.is_convex() {
        return convex_overlap_area(&a.vertices, &b.vertices);
    }
    let fa = signed_fan(&a.vertices);
    let fb = signed_fan(&b.vertices);
    let mut total = 0.0;
    for (ta, sa) in &fa {
        for (tb, sb) in &fb {
            total += sa * sb * convex_overlap_area(ta, tb);
        }
    }
    total.max(0.0)
}

fn signed_fan(v: &[Point2]) -> Vec<([Point2; 3], f64)> {
    let mut out = Vec::with_capacity(v.len().saturating_sub(2));
    for i in 1..v.len() - 1 {
        let tri = [v[0], v[i], v[i + 1]];
        let s = signed_area(&tri);
        if s > 0.0 {
            out.push((tri, 1.0));
        } else if s < 0.0 {
            out.push(([v[0], v[i + 1], v[i]], -1.0));
        }
    }
    out
}

/// IoU of two simple polygons (convex or not).
pub fn polygon_iou(a: &TextPolygon, b: &TextPolygon) -> f64 {
    let inter = polygon_intersection_area(a, b);
    let union = a.area() + b.area() - inter;
    if union <= 0.0 {
        0.0
    } else {
        (inter / union).clamp(0.0, 1.0)
    }
}

/// A planar region that supports the IoU/GIoU area queries.
pub trait Region {
    fn area(&self) -> f64;
    fn overlap_area(&self, other: &Self) -> Result<f64, GeometryError>;
    /// Area of the smallest enclosing region `C` of both operands.
    fn enclosing_area(&self, other: &Self) -> Result<f64, GeometryError>;
}

impl Region for AaRect {
    fn area(&self) -> f64 {
        AaRect::area(self)
    }

    fn overlap_area(&self, o: &AaRect) -> Result<f64, GeometryError> {
        let w = self.max.x.min(o.max.x) - self.min.x.max(o.min.x);
        let h = self.max.y.min(o.max.y) - self.min.y.max(o.min.y);
        Ok(if w <= 0.0 || h <= 0.0 { 0.0 } else { w * h })
    }

    fn enclosing_area(&self, o: &AaRect) -> Result<f64, GeometryError> {
        Ok(self.union_bounds(o).area())
    }
}

impl Region for RotatedRect {
    fn area(&self) -> f64 {
        RotatedRect::area(self)
    }

    fn overlap_area(&self, o: &RotatedRect) -> Result<f64, GeometryError> {
        Ok(convex_overlap_area(&self.corners(), &o.corners()))
    }

    fn enclosing_area(&self, o: &RotatedRect) -> Result<f64, GeometryError> {
        Ok(hull_area(&self.corners(), &o.corners()))
    }
}

impl Region for TextPolygon {
    fn area(&self) -> f64 {
        TextPolygon::area(self)
    }

    fn overlap_area(&self, o: &TextPolygon) -> Result<f64, GeometryError> {
        if !self.is_convex() || !o.is_convex() {
            return Err(GeometryError::NonConvex);
        }
        Ok(convex_overlap_area(&self.vertices, &o.vertices))
    }

    fn enclosing_area(&self, o: &TextPolygon) -> Result<f64, GeometryError> {
        Ok(hull_area(&self.vertices, &o.vertices))
    }
}

fn union_of<R: Region>(a: &R, b: &R) -> Result<(f64, f64), GeometryError> {
    let inter = a.overlap_area(b)?;
    Ok((inter, (a.area() + b.area() - inter).max(0.0)))
}

/// Intersection over union. Two zero-area shapes have IoU 0.
pub fn iou<R: Region>(a: &R, b: &R) -> Result<f64, GeometryError> {
    let (inter, union) = union_of(a, b)?;
    if union <= 0.0 {
        return Ok(0.0);
    }
    Ok((inter / union).clamp(0.0, 1.0))
}

/// Generalized IoU: `IoU - Area(C \ (a ∪ b)) / Area(C)`, with `C` the
/// enclosing axis-aligned box for [`AaRect`] and the convex hull of both
/// vertex sets otherwise.
pub fn giou<R: Region>(a: &R, b: &R) -> Result<f64, GeometryError> {
    let (inter, union) = union_of(a, b)?;
    let enclosing = a.enclosing_area(b)?;
    if enclosing <= 0.0 {
        return Err(GeometryError::DegenerateEnclosure);
    }
    let iou = if union <= 0.0 { 0.0 } else { (inter / union).clamp(0.0, 1.0) };
    let slack = (enclosing - union).max(0.0);
    Ok(iou - slack / enclosing)
}
