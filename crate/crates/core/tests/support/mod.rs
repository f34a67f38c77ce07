//! Test-only oracles and random fixture generators. Nothing here calls the
//! routines it is used to check.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use splitgiou_core::{BezierPair, Point2, TextPolygon};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Random convex polygon: points at sorted random angles on a jittered
/// ellipse, which is convex whenever the radius jitter is zero.
pub fn random_convex(r: &mut impl Rng, center_span: f64) -> TextPolygon {
    let n = r.gen_range(3..9);
    let cx = r.gen_range(-center_span..center_span);
    let cy = r.gen_range(-center_span..center_span);
    let rx = r.gen_range(0.5..5.0);
    let ry = r.gen_range(0.5..5.0);
    let rot: f64 = r.gen_range(0.0..std::f64::consts::PI);
    let mut angles: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..std::f64::consts::TAU)).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    while angles.len() < 3 {
        angles = vec![0.0, 2.1, 4.2];
    }
    let pts = angles.iter().map(|&a| Point2::new(rx * a.cos(), ry * a.sin()).rotated(rot) + Point2::new(cx, cy)).collect();
    TextPolygon::new(pts).unwrap()
}

/// Random axis-aligned rectangle as a polygon.
pub fn random_rect_polygon(r: &mut impl Rng, center_span: f64) -> TextPolygon {
    let x = r.gen_range(-center_span..center_span);
    let y = r.gen_range(-center_span..center_span);
    let w = r.gen_range(0.2..6.0);
    let h = r.gen_range(0.2..6.0);
    TextPolygon::from_coords(&[x, y, x + w, y, x + w, y + h, x, y + h]).unwrap()
}

/// Even-odd containment, written independently of the library.
pub fn inside(poly: &[Point2], p: Point2) -> bool {
    let mut c = false;
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + n - 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                c = !c;
            }
        }
    }
    c
}

/// Monte-Carlo estimate of `area(a ∩ b)` and its standard error.
pub fn monte_carlo_overlap(a: &TextPolygon, b: &TextPolygon, samples: usize, seed: u64) -> (f64, f64) {
    let mut r = rng(seed);
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in a.vertices() {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    let box_area = (x1 - x0) * (y1 - y0);
    let mut hits = 0usize;
    for _ in 0..samples {
        let p = Point2::new(r.gen_range(x0..x1), r.gen_range(y0..y1));
        if inside(a.vertices(), p) && inside(b.vertices(), p) {
            hits += 1;
        }
    }
    let frac = hits as f64 / samples as f64;
    let sigma = box_area * (frac * (1.0 - frac) / samples as f64).sqrt();
    (frac * box_area, sigma)
}

/// Minimum over permutations, by recursion.
pub fn brute_force_min(cost: &[Vec<f64>]) -> f64 {
    fn go(cost: &[Vec<f64>], row: usize, used: &mut Vec<bool>, acc: f64, best: &mut f64) {
        if row == cost.len() {
            *best = best.min(acc);
            return;
        }
        for j in 0..cost[row].len() {
            if !used[j] {
                used[j] = true;
                go(cost, row + 1, used, acc + cost[row][j], best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(cost, 0, &mut vec![false; cost[0].len()], 0.0, &mut best);
    best
}

/// Direct cubic evaluation by de Casteljau (independent of the Bernstein sum).
pub fn de_casteljau(cp: &[Point2], t: f64) -> Point2 {
    let mut pts = cp.to_vec();
    while pts.len() > 1 {
        pts = pts.windows(2).map(|w| w[0] * (1.0 - t) + w[1] * t).collect();
    }
    pts[0]
}

/// Random cubic text boundary: a gently curved band of height `h`.
pub fn random_pair(r: &mut impl Rng) -> BezierPair {
    let x0 = r.gen_range(-50.0..50.0);
    let y0 = r.gen_range(-50.0..50.0);
    let len = r.gen_range(20.0..120.0);
    let h = r.gen_range(5.0..30.0);
    let mut top = [Point2::default(); 4];
    for (i, p) in top.iter_mut().enumerate() {
        let x = x0 + len * i as f64 / 3.0 + r.gen_range(-len / 10.0..len / 10.0);
        let y = y0 + r.gen_range(-h..h);
        *p = Point2::new(x, y);
    }
    top[0].x = x0;
    top[3].x = x0 + len;
    let mut pts = [Point2::default(); 8];
    pts[..4].copy_from_slice(&top);
    for i in 0..4 {
        let t = top[3 - i];
        pts[4 + i] = Point2::new(t.x + r.gen_range(-2.0..2.0), t.y + h + r.gen_range(-h / 4.0..h / 4.0));
    }
    BezierPair::from_control_points(&pts).unwrap()
}

/// Symmetric Hausdorff distance between a dense point sample `a` and the
/// closed polyline `b` (and vice versa with `b`'s vertices against `a`).
pub fn hausdorff_to_polyline(dense: &[Point2], poly: &[Point2]) -> f64 {
    let seg_dist =
        |p: Point2, v: &[Point2]| (0..v.len()).map(|i| p.distance_to_segment(v[i], v[(i + 1) % v.len()])).fold(f64::INFINITY, f64::min);
    let ab = dense.iter().map(|&p| seg_dist(p, poly)).fold(0.0, f64::max);
    let ba = poly.iter().map(|&p| seg_dist(p, dense)).fold(0.0, f64::max);
    ab.max(ba)
}
