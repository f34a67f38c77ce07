//! Random curved text instances for `gradcheck` and `bench`.

use rand::Rng;
use splitgiou_core::{BezierPair, Point2};

/// A curved band: the top cubic runs left to right with jittered interior
/// controls, the bottom one mirrors it a random thickness below.
pub fn text_pair(r: &mut impl Rng) -> BezierPair {
    let x0 = r.gen_range(0.0..500.0);
    let y0 = r.gen_range(0.0..500.0);
    let len = r.gen_range(40.0..200.0);
    let h = r.gen_range(8.0..40.0);
    let bend = r.gen_range(-h..h);
    let mut cp = [Point2::default(); 8];
    for (i, p) in cp[..4].iter_mut().enumerate() {
        let x = x0 + len * i as f64 / 3.0;
        let y = y0 + if i == 1 || i == 2 { bend + r.gen_range(-h / 4.0..h / 4.0) } else { 0.0 };
        *p = Point2::new(x, y);
    }
    for i in 0..4 {
        let t = cp[3 - i];
        cp[4 + i] = Point2::new(t.x + r.gen_range(-2.0..2.0), t.y + h);
    }
    BezierPair::from_control_points(&cp).expect("finite controls")
}

/// `pair` with every coordinate moved by up to `amount`.
pub fn jitter(pair: &BezierPair, r: &mut impl Rng, amount: f64) -> BezierPair {
    let coords: Vec<f64> = pair.to_coords().iter().map(|c| c + r.gen_range(-amount..=amount)).collect();
    BezierPair::from_coords(&coords).expect("finite controls")
}
