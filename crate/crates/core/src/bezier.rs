//! Bernstein basis, Bezier curves and the two-cubic text boundary.
//!
//! A [`BezierPair`] holds a top cubic running left to right and a bottom
//! cubic running right to left, so concatenating their control points (or
//! their samples) walks the closed text boundary. Its eight control points
//! are numbered `P1..P8` in that order by the split-box loss.

use alloc::vec::Vec;
use core::fmt;

use crate::geometry::{GeometryError, Point2, TextPolygon};

#[derive(Debug, Clone, PartialEq)]
pub enum BezierError {
    IndexOutOfRange {
        i: usize,
        n: usize,
    },
    ParameterOutOfRange(f64),
    DegreeTooLow,
    WrongDegree {
        expected: usize,
        got: usize,
    },
    TooFewPoints {
        got: usize,
        min: usize,
    },
    TooFewSamples(usize),
    /// The least-squares normal system for the interior control points has
    /// no unique solution.
    SingularFit {
        determinant: f64,
        distinct_parameters: usize,
        points: usize,
    },
    OddVertexCount(usize),
    WrongVertexCount {
        expected: usize,
        got: usize,
    },
    Geometry(GeometryError),
}

impl fmt::Display for BezierError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BezierError::IndexOutOfRange { i, n } => {
                write!(f, "basis index {i} outside 0..={n}")
            }
            BezierError::ParameterOutOfRange(t) => write!(f, "parameter {t} outside [0, 1]"),
            BezierError::DegreeTooLow => write!(f, "a Bezier curve needs at least two control points"),
            BezierError::WrongDegree { expected, got } => {
                write!(f, "expected a degree-{expected} curve, got degree {got}")
            }
            BezierError::TooFewPoints { got, min } => {
                write!(f, "fitting needs at least {min} points, got {got}")
            }
            BezierError::TooFewSamples(n) => {
                write!(f, "need at least 2 samples per side, got {n}")
            }
            BezierError::SingularFit { determinant, distinct_parameters, points } => write!(
                f,
                "singular fit: normal-matrix determinant {determinant:e}, \
                 {distinct_parameters} distinct chord-length parameters over {points} points"
            ),
            BezierError::OddVertexCount(n) => {
                write!(f, "polygon has {n} vertices; top/bottom split needs an even count")
            }
            BezierError::WrongVertexCount { expected, got } => {
                write!(f, "expected {expected} vertices, got {got}")
            }
            BezierError::Geometry(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for BezierError {}

impl From<GeometryError> for BezierError {
    fn from(e: GeometryError) -> Self {
        BezierError::Geometry(e)
    }
}

fn powu(x: f64, k: usize) -> f64 {
    let mut acc = 1.0;
    for _ in 0..k {
        acc *= x;
    }
    acc
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

fn check_parameter(t: f64) -> Result<(), BezierError> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(BezierError::ParameterOutOfRange(t))
    }
}

/// `C(n, i) t^i (1-t)^(n-i)`.
pub fn bernstein(i: usize, n: usize, t: f64) -> Result<f64, BezierError> {
    if i > n {
        return Err(BezierError::IndexOutOfRange { i, n });
    }
    check_parameter(t)?;
    Ok(bernstein_unchecked(i, n, t))
}

fn bernstein_unchecked(i: usize, n: usize, t: f64) -> f64 {
    binomial(n, i) * powu(t, i) * powu(1.0 - t, n - i)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BezierCurve {
    control_points: Vec<Point2>,
}

impl BezierCurve {
    pub fn new(control_points: Vec<Point2>) -> Result<Self, BezierError> {
        if control_points.len() < 2 {
            return Err(BezierError::DegreeTooLow);
        }
        if !control_points.iter().all(|p| p.is_finite()) {
            return Err(GeometryError::NonFinite.into());
        }
        Ok(BezierCurve { control_points })
    }

    /// Cubic through `a` and `b` with interior controls at thirds, which
    /// traces the segment at uniform speed.
    pub fn line(a: Point2, b: Point2) -> Self {
        let d = b - a;
        BezierCurve { control_points: alloc::vec![a, a + d * (1.0 / 3.0), a + d * (2.0 / 3.0), b] }
    }

    pub fn degree(&self) -> usize {
        self.control_points.len() - 1
    }

    pub fn control_points(&self) -> &[Point2] {
        &self.control_points
    }

    pub fn start(&self) -> Point2 {
        self.control_points[0]
    }

    pub fn end(&self) -> Point2 {
        self.control_points[self.degree()]
    }

    /// Point at parameter `t` in `[0, 1]`.
    pub fn eval(&self, t: f64) -> Result<Point2, BezierError> {
        check_parameter(t)?;
        Ok(self.point_at(t))
    }

    pub(crate) fn point_at(&self, t: f64) -> Point2 {
        let n = self.degree();
        let mut acc = Point2::default();
        for (i, p) in self.control_points.iter().enumerate() {
            acc = acc + *p * bernstein_unchecked(i, n, t);
        }
        acc
    }

    /// Hodograph: the derivative curve, one degree lower.
    fn derivative_points(points: &[Point2]) -> Vec<Point2> {
        let n = (points.len() - 1) as f64;
        points.windows(2).map(|w| (w[1] - w[0]) * n).collect()
    }

    fn eval_points(points: &[Point2], t: f64) -> Point2 {
        let n = points.len() - 1;
        points.iter().enumerate().fold(Point2::default(), |acc, (i, p)| acc + *p * bernstein_unchecked(i, n, t))
    }
}

/// Two cubic sides bounding one text instance (16 coordinates).
#[derive(Debug, Clone, PartialEq)]
pub struct BezierPair {
    pub top: BezierCurve,
    pub bottom: BezierCurve,
}

impl BezierPair {
    pub fn new(top: BezierCurve, bottom: BezierCurve) -> Result<Self, BezierError> {
        for c in [&top, &bottom] {
            if c.degree() != 3 {
                return Err(BezierError::WrongDegree { expected: 3, got: c.degree() });
            }
        }
        Ok(BezierPair { top, bottom })
    }

    /// Top `P0..P3` followed by bottom `P0..P3`.
    pub fn from_control_points(points: &[Point2; 8]) -> Result<Self, BezierError> {
        BezierPair::new(BezierCurve::new(points[..4].to_vec())?, BezierCurve::new(points[4..].to_vec())?)
    }

    /// Sixteen interleaved coordinates in [`BezierPair::control_points`] order.
    pub fn from_coords(coords: &[f64]) -> Result<Self, BezierError> {
        if coords.len() != 16 {
            return Err(BezierError::WrongVertexCount { expected: 8, got: coords.len() / 2 });
        }
        let mut pts = [Point2::default(); 8];
        for (p, c) in pts.iter_mut().zip(coords.chunks_exact(2)) {
            *p = Point2::new(c[0], c[1]);
        }
        BezierPair::from_control_points(&pts)
    }

    pub fn control_points(&self) -> [Point2; 8] {
        let mut out = [Point2::default(); 8];
        out[..4].copy_from_slice(&self.top.control_points);
        out[4..].copy_from_slice(&self.bottom.control_points);
        out
    }

    pub fn to_coords(&self) -> Vec<f64> {
        self.control_points().iter().flat_map(|p| [p.x, p.y]).collect()
    }

    pub fn map<F: FnMut(Point2) -> Point2>(&self, mut f: F) -> Result<BezierPair, BezierError> {
        let mut pts = self.control_points();
        for p in pts.iter_mut() {
            *p = f(*p);
        }
        BezierPair::from_control_points(&pts)
    }
}

/// Uniform parameters `k / (n_v - 1)`, both curve ends included.
fn uniform_parameters(n_v: usize) -> impl Iterator<Item = f64> {
    let denom = (n_v - 1) as f64;
    (0..n_v).map(move |k| if k + 1 == n_v { 1.0 } else { k as f64 / denom })
}

/// Samples `n_v` points on each side and returns the `2 * n_v`-vertex
/// boundary: top samples then bottom samples.
pub fn sample_polygon(pair: &BezierPair, n_v: usize) -> Result<TextPolygon, BezierError> {
    if n_v < 2 {
        return Err(BezierError::TooFewSamples(n_v));
    }
    let mut vertices = Vec::with_capacity(2 * n_v);
    for curve in [&pair.top, &pair.bottom] {
        vertices.extend(uniform_parameters(n_v).map(|t| curve.point_at(t)));
    }
    Ok(TextPolygon::new(vertices)?)
}

/// Controls for [`fit_bezier`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Refinement steps after the chord-length solve. Zero gives the plain
    /// chord-length least-squares fit.
    pub max_iterations: usize,
    /// Stop once no parameter moves by more than this.
    pub tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { max_iterations: 200, tolerance: 1e-14 }
    }
}

fn chord_length_parameters(points: &[Point2]) -> Result<Vec<f64>, BezierError> {
    accumulated_parameters(points, 1.0)
}

/// Parameters from accumulated `|chord|^alpha`: 1 is chord length,
/// 0.5 centripetal, 0 uniform.
fn accumulated_parameters(points: &[Point2], alpha: f64) -> Result<Vec<f64>, BezierError> {
    let mut params = Vec::with_capacity(points.len());
    let mut acc = 0.0;
    params.push(0.0);
    for w in points.windows(2) {
        let d = w[0].distance(w[1]);
        acc += if d > 0.0 { libm::pow(d, alpha) } else { 0.0 };
        params.push(acc);
    }
    if acc <= 0.0 {
        return Err(BezierError::SingularFit { determinant: 0.0, distinct_parameters: 1, points: points.len() });
    }
    for t in params.iter_mut() {
        *t /= acc;
    }
    *params.last_mut().unwrap() = 1.0;
    Ok(params)
}

/// Closed-form least squares for the two interior control points with the
/// end controls pinned to the first and last data points.
fn solve_interior(points: &[Point2], params: &[f64]) -> Result<[Point2; 4], BezierError> {
    let first = points[0];
    let last = points[points.len() - 1];
    let (mut a11, mut a12, mut a22) = (0.0, 0.0, 0.0);
    let (mut r1, mut r2) = (Point2::default(), Point2::default());
    for (&q, &t) in points.iter().zip(params) {
        let s = 1.0 - t;
        let b0 = s * s * s;
        let b1 = 3.0 * t * s * s;
        let b2 = 3.0 * t * t * s;
        let b3 = t * t * t;
        let residual = q - first * b0 - last * b3;
        a11 += b1 * b1;
        a12 += b1 * b2;
        a22 += b2 * b2;
        r1 = r1 + residual * b1;
        r2 = r2 + residual * b2;
    }
    let det = a11 * a22 - a12 * a12;
    if det.is_nan() || det <= 1e-12 * a11 * a22 || det == 0.0 {
        let mut distinct: Vec<f64> = params.to_vec();
        distinct.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
        return Err(BezierError::SingularFit { determinant: det, distinct_parameters: distinct.len(), points: points.len() });
    }
    let p1 = (r1 * a22 - r2 * a12) * (1.0 / det);
    let p2 = (r2 * a11 - r1 * a12) * (1.0 / det);
    Ok([first, p1, p2, last])
}

fn squared_residual(controls: &[Point2], points: &[Point2], params: &[f64]) -> f64 {
    points
        .iter()
        .zip(params)
        .map(|(&q, &t)| {
            let d = BezierCurve::eval_points(controls, t) - q;
            d.dot(d)
        })
        .sum()
}

/// Solves the 4x4 system `m x = b` by Gaussian elimination with partial
/// pivoting. `None` when singular.
fn solve4(mut m: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let pivot = (col..4).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() <= f64::MIN_POSITIVE {
            return None;
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..4 {
            let f = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (x, p) in m[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let tail: f64 = (row + 1..4).map(|k| m[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / m[row][row];
    }
    Some(x)
}

/// One damped Gauss-Newton step on the interior controls and interior
/// parameters jointly. The parameters are eliminated through their
/// diagonal block, leaving a 4x4 system for the two control points.
fn lm_step(controls: &[Point2; 4], points: &[Point2], params: &[f64], damping: f64) -> Option<([Point2; 4], Vec<f64>)> {
    let d1 = BezierCurve::derivative_points(controls);
    let last = params.len() - 1;
    let mut h = [[0.0; 4]; 4];
    let mut g = [0.0; 4];
    // Per interior point: (A^T c, c.c + damping, -c.r) for the elimination.
    let mut coupling: Vec<([f64; 4], f64, f64)> = Vec::with_capacity(params.len());
    for k in 1..last {
        let t = params[k];
        let s = 1.0 - t;
        let (b1, b2) = (3.0 * t * s * s, 3.0 * t * t * s);
        let r = BezierCurve::eval_points(controls, t) - points[k];
        let c = BezierCurve::eval_points(&d1, t);
        // Rows of A for the x and y residuals over (p1x, p1y, p2x, p2y).
        let ax = [b1, 0.0, b2, 0.0];
        let ay = [0.0, b1, 0.0, b2];
        for i in 0..4 {
            for j in 0..4 {
                h[i][j] += ax[i] * ax[j] + ay[i] * ay[j];
            }
            g[i] -= ax[i] * r.x + ay[i] * r.y;
        }
        let atc = [b1 * c.x, b1 * c.y, b2 * c.x, b2 * c.y];
        let cc = c.dot(c);
        let dt = cc * (1.0 + damping) + 1e-300;
        coupling.push((atc, dt, -c.dot(r)));
    }
    for (i, row) in h.iter_mut().enumerate() {
        row[i] *= 1.0 + damping;
    }
    let mut schur = h;
    let mut rhs = g;
    for (atc, dt, gt) in &coupling {
        for i in 0..4 {
            for j in 0..4 {
                schur[i][j] -= atc[i] * atc[j] / dt;
            }
            rhs[i] -= atc[i] * gt / dt;
        }
    }
    let dx = solve4(schur, rhs)?;
    let mut next_params = params.to_vec();
    for (k, (atc, dt, gt)) in coupling.iter().enumerate() {
        let along: f64 = (0..4).map(|i| atc[i] * dx[i]).sum();
        next_params[k + 1] = (params[k + 1] + (gt - along) / dt).clamp(0.0, 1.0);
    }
    let mut next = *controls;
    next[1] = next[1] + Point2::new(dx[0], dx[1]);
    next[2] = next[2] + Point2::new(dx[2], dx[3]);
    Some((next, next_params))
}

/// Least-squares cubic through an ordered run of at least four points.
///
/// The end controls are pinned to the first and last points. The interior
/// controls are first solved in closed form under chord-length
/// parameters; refinement then minimizes the same residual over controls
/// and interior parameters together (Levenberg-Marquardt). When that
/// leaves a visible residual the refinement is restarted from centripetal
/// and uniform parameters and the best result kept.
pub fn fit_bezier(points: &[Point2], options: &FitOptions) -> Result<BezierCurve, BezierError> {
    if points.len() < 4 {
        return Err(BezierError::TooFewPoints { got: points.len(), min: 4 });
    }
    if !points.iter().all(|p| p.is_finite()) {
        return Err(GeometryError::NonFinite.into());
    }
    let scale: f64 = points.iter().map(|p| p.dot(*p)).sum::<f64>().max(1.0);
    let exact = 1e-24 * scale;
    let mut best = refine(points, chord_length_parameters(points)?, options, exact)?;
    for alpha in [0.5, 0.0] {
        if best.1 <= exact {
            break;
        }
        let candidate = refine(points, accumulated_parameters(points, alpha)?, options, exact)?;
        if candidate.1 < best.1 {
            best = candidate;
        }
    }
    Ok(BezierCurve { control_points: best.0.to_vec() })
}

fn refine(points: &[Point2], mut params: Vec<f64>, options: &FitOptions, exact: f64) -> Result<([Point2; 4], f64), BezierError> {
    let mut controls = solve_interior(points, &params)?;
    let mut residual = squared_residual(&controls, points, &params);
    let mut damping = 1e-3;
    for _ in 0..options.max_iterations {
        if residual <= exact * 1e-6 {
            break;
        }
        let Some((next, next_params)) = lm_step(&controls, points, &params, damping) else {
            break;
        };
        let next_residual = squared_residual(&next, points, &next_params);
        if next_residual < residual {
            let max_step = params.iter().zip(&next_params).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let converged = max_step <= options.tolerance || residual - next_residual <= 1e-15 * residual;
            controls = next;
            params = next_params;
            residual = next_residual;
            damping = (damping / 3.0).max(1e-12);
            if converged {
                break;
            }
        } else {
            damping *= 4.0;
            if damping > 1e12 {
                break;
            }
        }
    }
    Ok((controls, residual))
}

/// Straight quadrilateral edges as cubics. Vertices are expected in
/// reading order: top-left, top-right, bottom-right, bottom-left.
pub fn quad_to_bezier_pair(quad: &TextPolygon) -> Result<BezierPair, BezierError> {
    let v = quad.vertices();
    if v.len() != 4 {
        return Err(BezierError::WrongVertexCount { expected: 4, got: v.len() });
    }
    Ok(BezierPair { top: BezierCurve::line(v[0], v[1]), bottom: BezierCurve::line(v[2], v[3]) })
}

fn fit_side(side: &[Point2], options: &FitOptions) -> Result<BezierCurve, BezierError> {
    match side.len() {
        0 | 1 => Err(BezierError::TooFewPoints { got: side.len(), min: 2 }),
        2 => Ok(BezierCurve::line(side[0], side[1])),
        3 => {
            // Densify with chord midpoints so the fit is determined.
            let pts = [side[0], (side[0] + side[1]) * 0.5, side[1], (side[1] + side[2]) * 0.5, side[2]];
            fit_bezier(&pts, options)
        }
        _ => fit_bezier(side, options),
    }
}

/// Fits one cubic per side of an annotation polygon whose first half of
/// vertices is the top side (left to right) and second half the bottom side
/// (right to left).
pub fn polygon_to_bezier_pair(polygon: &TextPolygon, options: &FitOptions) -> Result<BezierPair, BezierError> {
    let v = polygon.vertices();
    if !v.len().is_multiple_of(2) {
        return Err(BezierError::OddVertexCount(v.len()));
    }
    let half = v.len() / 2;
    Ok(BezierPair { top: fit_side(&v[..half], options)?, bottom: fit_side(&v[half..], options)? })
}
