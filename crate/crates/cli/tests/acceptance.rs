//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::Rng;
use splitgiou::annotations::{convert_representation, AnnotationSet, ImageAnnotations, Instance, Shape, Target};
use splitgiou_core::bezier::{bernstein, sample_polygon};
use splitgiou_core::evalmetrics::evaluate;
use splitgiou_core::geometry::{convex_intersection, giou, iou};
use splitgiou_core::losses::{box_loss, finite_diff_loss_grad, smooth_ln, smooth_ln_grad};
use splitgiou_core::matching::hungarian;
use splitgiou_core::{
    BezierCurve, BezierPair, BoxLossConfig, BoxShape, CostMatrix, DetectionRecord, GroundTruthRecord, MatchStrategy, Point2, Reduction,
    SplitMode, TextPolygon,
};
use support::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn timed(limit_s: f64, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let detail = f()?;
    let s = t.elapsed().as_secs_f64();
    check(s < limit_s, || format!("{detail}; took {s:.2} s, limit {limit_s} s"))?;
    Ok(format!("{detail}; {s:.2} s"))
}

fn random_point(r: &mut impl Rng, span: f64) -> Point2 {
    Point2::new(r.gen_range(-span..span), r.gen_range(-span..span))
}

fn bezier_suite() -> Outcome {
    timed(10.0, || {
        let mut r = rng(101);
        for n in 1..=10 {
            for _ in 0..1000 {
                let t = r.gen_range(0.0..=1.0);
                let s: f64 = (0..=n).map(|i| bernstein(i, n, t).unwrap()).sum();
                check((s - 1.0).abs() <= 1e-12, || format!("partition of unity off by {:e} at n={n}, t={t}", s - 1.0))?;
            }
        }
        for _ in 0..1000 {
            let n = r.gen_range(1..=10);
            let cp: Vec<Point2> = (0..=n).map(|_| random_point(&mut r, 100.0)).collect();
            let c = BezierCurve::new(cp.clone()).unwrap();
            check(c.eval(0.0).unwrap().distance(cp[0]) <= 1e-12 && c.eval(1.0).unwrap().distance(cp[n]) <= 1e-12, || {
                "endpoint interpolation".into()
            })?;

            let (a, b) = (random_point(&mut r, 100.0), random_point(&mut r, 100.0));
            let line = BezierCurve::new((0..=n).map(|i| a + (b - a) * (i as f64 / n as f64)).collect()).unwrap();
            let (m11, m12, m21, m22) = (r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
            let shift = random_point(&mut r, 50.0);
            let affine = |p: Point2| Point2::new(m11 * p.x + m12 * p.y, m21 * p.x + m22 * p.y) + shift;
            let mapped = BezierCurve::new(cp.iter().map(|&p| affine(p)).collect()).unwrap();
            for _ in 0..10 {
                let t = r.gen_range(0.0..=1.0);
                check(line.eval(t).unwrap().distance(a + (b - a) * t) <= 1e-9, || "linear precision".into())?;
                let p = c.eval(t).unwrap();
                // Any line through two controls with all controls on one side bounds the curve too.
                for i in 0..=n {
                    for j in 0..=n {
                        let d = cp[j] - cp[i];
                        if d.norm() == 0.0 {
                            continue;
                        }
                        let side = |q: Point2| d.cross(q - cp[i]) / d.norm();
                        if cp.iter().all(|&q| side(q) >= -1e-9) {
                            check(side(p) >= -1e-9, || format!("curve point {p:?} leaves the control hull"))?;
                        }
                    }
                }
                let e = mapped.eval(t).unwrap().distance(affine(p));
                check(e <= 1e-9 * (1.0 + affine(p).norm()), || format!("affine equivariance off by {e:e}"))?;
            }
        }
        Ok("partition of unity, endpoints, linear precision, hull containment, affine equivariance".into())
    })
}

fn random_shape(r: &mut impl Rng) -> TextPolygon {
    if r.gen_bool(0.3) {
        random_rect_polygon(r, 4.0)
    } else {
        random_convex(r, 4.0)
    }
}

fn giou_suite() -> Outcome {
    timed(60.0, || {
        let mut r = rng(202);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9;
        for k in 0..10_000 {
            let (a, b) = (random_shape(&mut r), random_shape(&mut r));
            let (i, g) = (iou(&a, &b).unwrap(), giou(&a, &b).unwrap());
            check((0.0..=1.0).contains(&i), || format!("pair {k}: iou {i}"))?;
            check(g > -1.0 && g <= i + 1e-12, || format!("pair {k}: giou {g} vs iou {i}"))?;
            check(close(i, iou(&b, &a).unwrap()) && close(g, giou(&b, &a).unwrap()), || format!("pair {k}: asymmetric"))?;
            let by = random_point(&mut r, 100.0);
            let (ta, tb) = (a.map(|p| p + by).unwrap(), b.map(|p| p + by).unwrap());
            check(close(i, iou(&ta, &tb).unwrap()) && close(g, giou(&ta, &tb).unwrap()), || format!("pair {k}: translation"))?;
            let s = r.gen_range(0.1..10.0);
            let (sa, sb) = (a.map(|p| p * s).unwrap(), b.map(|p| p * s).unwrap());
            check(close(i, iou(&sa, &sb).unwrap()) && close(g, giou(&sa, &sb).unwrap()), || format!("pair {k}: scale {s}"))?;
        }
        let mut r = rng(5);
        let mut worst = 0.0f64;
        for k in 0..100u64 {
            let a = random_convex(&mut r, 1.0);
            let b = if k % 3 == 0 { random_rect_polygon(&mut r, 1.0) } else { random_convex(&mut r, 1.0) };
            let exact = convex_intersection(&a, &b).unwrap().map_or(0.0, |p| p.area());
            let (est, sigma) = monte_carlo_overlap(&a, &b, 1_000_000, 1000 + k);
            let z = (exact - est).abs() / sigma.max(1e-12);
            worst = worst.max(z);
            check((exact - est).abs() <= 3.0 * sigma.max(1e-12), || {
                format!("pair {k}: exact {exact} vs Monte-Carlo {est} ({z:.2} sigma)")
            })?;
        }
        Ok(format!("10000 pairs; Monte-Carlo worst {worst:.2} sigma over 100 pairs"))
    })
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

fn shapes(mode: SplitMode, pair: &BezierPair) -> BoxShape {
    match mode {
        SplitMode::SplitRotatedRect3 => BoxShape::Polygon(sample_polygon(pair, 10).unwrap()),
        _ => BoxShape::Bezier(pair.clone()),
    }
}

fn loss_suite() -> Outcome {
    let e = std::f64::consts::E;
    let fixtures = [(vec![0.0], 0.0), (vec![e - 1.0], 1.0), (vec![1.0, -1.0], 2.0 * (2.0 * std::f64::consts::LN_2 - 1.0))];
    for (d, want) in fixtures {
        let got = smooth_ln(&d, Reduction::Sum).unwrap();
        check((got - want).abs() <= 1e-9, || format!("smooth_ln({d:?}) = {got}, want {want}"))?;
    }
    let mut r = rng(303);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let d: Vec<f64> = (0..16).map(|_| r.gen_range(-20.0..20.0)).collect();
        let g = smooth_ln_grad(&d, Reduction::Sum).unwrap();
        for i in 0..d.len() {
            let h = 1e-6;
            let (mut up, mut down) = (d.clone(), d.clone());
            up[i] += h;
            down[i] -= h;
            let fd = (smooth_ln(&up, Reduction::Sum).unwrap() - smooth_ln(&down, Reduction::Sum).unwrap()) / (2.0 * h);
            worst = worst.max(rel_err(g[i], fd));
        }
    }
    check(worst < 1e-5, || format!("gradient discrepancy {worst:e}"))?;
    for mode in [SplitMode::FullRect, SplitMode::SplitRect3, SplitMode::SplitRotatedRect3] {
        for _ in 0..100 {
            let cfg =
                BoxLossConfig { lambda1: r.gen_range(0.1..10.0), lambda2: r.gen_range(0.1..10.0), split_mode: mode, ..Default::default() };
            let pair = random_pair(&mut r);
            let gt = shapes(mode, &pair);
            check(box_loss(&gt, &gt, &cfg).unwrap().total == 0.0, || format!("{mode:?}: nonzero loss on identical shapes"))?;
            let mut c = pair.to_coords();
            let k = r.gen_range(0..16);
            c[k] += r.gen_range(0.01..1.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
            let pred = shapes(mode, &BezierPair::from_coords(&c).unwrap());
            let v = box_loss(&pred, &gt, &cfg).unwrap();
            check(v.total > 0.0, || format!("{mode:?}: zero loss on distinct shapes"))?;
            let recomposed = cfg.lambda1 * v.regression_term + cfg.lambda2 * v.giou_term;
            check((v.total - recomposed).abs() <= 1e-12 * v.total.max(1.0), || {
                format!("{mode:?}: decomposition off by {:e}", v.total - recomposed)
            })?;
        }
    }
    Ok(format!("closed forms exact; worst gradient discrepancy {worst:.1e}; zero iff equal and decomposition in all modes"))
}

fn split_mechanism() -> Outcome {
    // Interior top controls dip into the band while the outer extent stays put.
    let bowed = BoxShape::Bezier(BezierPair::from_coords(&[0., 0., 1., 0.5, 2., 0.4, 3., 0., 3., 1., 2., 1., 1., 1., 0., 1.]).unwrap());
    let straight = BoxShape::Bezier(BezierPair::from_coords(&[0., 0., 1., 0., 2., 0., 3., 0., 3., 1., 2., 1., 1., 1., 0., 1.]).unwrap());
    let giou_only = |mode| BoxLossConfig { lambda1: 0.0, lambda2: 1.0, split_mode: mode, ..Default::default() };
    let full = box_loss(&bowed, &straight, &giou_only(SplitMode::FullRect)).unwrap().giou_term;
    let split = box_loss(&bowed, &straight, &giou_only(SplitMode::SplitRect3)).unwrap().giou_term;
    check(full == 0.0, || format!("full-rect GIoU term {full}"))?;
    check(split > 0.05, || format!("split GIoU term {split}"))?;
    let g_split = finite_diff_loss_grad(&bowed, &straight, &giou_only(SplitMode::SplitRect3), 1e-6).unwrap();
    let g_full = finite_diff_loss_grad(&bowed, &straight, &giou_only(SplitMode::FullRect), 1e-6).unwrap();
    let split_norm = g_split.iter().map(|g| g.abs()).fold(0.0, f64::max);
    let full_interior = g_full[2..=5].iter().map(|g| g.abs()).fold(0.0, f64::max);
    check(split_norm > 1e-3, || format!("split gradient max {split_norm:e}"))?;
    check(full_interior <= 1e-6, || format!("full-rect gradient on interior controls {full_interior:e}"))?;
    Ok(format!(
        "full term 0, split term {split:.4}; split gradient max {split_norm:.3}, full gradient on interior controls {full_interior:.1e}"
    ))
}

fn median_ms(m: &CostMatrix, runs: usize) -> f64 {
    let mut v: Vec<f64> = (0..runs)
        .map(|_| {
            let t = Instant::now();
            std::hint::black_box(hungarian(m));
            t.elapsed().as_secs_f64() * 1e3
        })
        .collect();
    v.sort_by(f64::total_cmp);
    v[runs / 2]
}

fn hungarian_suite() -> Outcome {
    let mut r = rng(505);
    for k in 0..1000 {
        let n = r.gen_range(1..=7);
        let cost: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| r.gen_range(-20..50) as f64).collect()).collect();
        let a = hungarian(&CostMatrix::from_rows(&cost).unwrap());
        let best = brute_force_min(&cost);
        let recomputed: f64 = a.pairs.iter().map(|&(i, j)| cost[i][j]).sum();
        check(a.total_cost == best && recomputed == best, || format!("matrix {k}: {} vs brute force {best}", a.total_cost))?;
    }
    let square =
        |r: &mut rand_chacha::ChaCha8Rng, n: usize| CostMatrix::new(n, n, (0..n * n).map(|_| r.gen_range(0.0..1.0)).collect()).unwrap();
    let t300 = median_ms(&square(&mut r, 300), 5);
    let t512 = median_ms(&square(&mut r, 512), 3);
    check(t300 < 250.0, || format!("300x300 took {t300:.1} ms"))?;
    check(t512 < 1000.0, || format!("512x512 took {t512:.1} ms"))?;
    Ok(format!("1000 brute-force matches; 300x300 {t300:.1} ms, 512x512 {t512:.1} ms"))
}

fn one_image(instances: Vec<Shape>) -> AnnotationSet {
    AnnotationSet {
        images: vec![ImageAnnotations {
            id: "fixture".into(),
            width: 0,
            height: 0,
            instances: instances.into_iter().map(|shape| Instance { shape, ignore: false, text: None, score: None }).collect(),
        }],
    }
}

fn shapes_of(set: &AnnotationSet) -> Vec<&Shape> {
    set.images[0].instances.iter().map(|i| &i.shape).collect()
}

fn conversion_round_trips() -> Outcome {
    let mut r = rng(606);
    let quads: Vec<Shape> = (0..200)
        .map(|_| {
            let c = random_point(&mut r, 500.0);
            let (w, h, a) = (r.gen_range(10.0..200.0), r.gen_range(5.0..60.0), r.gen_range(-1.0..1.0));
            let skew = r.gen_range(-5.0..5.0);
            let q = [Point2::new(0.0, 0.0), Point2::new(w, skew), Point2::new(w, h + skew), Point2::new(0.0, h)];
            Shape::Quad(q.map(|p| p.rotated(a) + c))
        })
        .collect();
    let (pairs, f1) = convert_representation(&one_image(quads.clone()), Target::Bezier16);
    let (polys, f2) = convert_representation(&pairs, Target::Polygon { vertices: 20 });
    check(f1.is_empty() && f2.is_empty(), || format!("conversion failures {f1:?} {f2:?}"))?;
    let mut edge_err = 0.0f64;
    for (src, out) in quads.iter().zip(shapes_of(&polys)) {
        let (Shape::Quad(q), Shape::Polygon(p)) = (src, out) else { return Err("unexpected representation".into()) };
        for (k, v) in p.vertices().iter().enumerate() {
            let d = if k < 10 { v.distance_to_segment(q[0], q[1]) } else { v.distance_to_segment(q[2], q[3]) };
            edge_err = edge_err.max(d);
        }
    }
    check(edge_err <= 1e-9, || format!("sampled quad vertex {edge_err:e} off its edge"))?;

    let curves: Vec<BezierPair> = (0..100).map(|_| random_pair(&mut r)).collect();
    let set = one_image(curves.iter().cloned().map(Shape::Bezier).collect());
    let (dense, _) = convert_representation(&set, Target::Polygon { vertices: 80 });
    let (refit, failures) = convert_representation(&dense, Target::Bezier16);
    check(failures.is_empty(), || format!("refit failures {failures:?}"))?;
    let mut fit_err = 0.0f64;
    for (src, out) in curves.iter().zip(shapes_of(&refit)) {
        let Shape::Bezier(b) = out else { return Err("refit is not bezier16".into()) };
        for (p, q) in src.control_points().iter().zip(b.control_points()) {
            fit_err = fit_err.max(p.distance(q));
        }
    }
    check(fit_err <= 1e-4, || format!("refit control error {fit_err:e}"))?;

    let mut margins = Vec::new();
    for (k, pair) in curves.iter().enumerate() {
        let reference = sample_polygon(pair, 400).unwrap();
        let h8 = hausdorff_to_polyline(reference.vertices(), sample_polygon(pair, 4).unwrap().vertices());
        let h20 = hausdorff_to_polyline(reference.vertices(), sample_polygon(pair, 10).unwrap().vertices());
        check(h8 > h20, || format!("curve {k}: 8-point Hausdorff {h8} not above 20-point {h20}"))?;
        margins.push(h8 / h20);
    }
    let min_ratio = margins.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(format!("quad edges within {edge_err:.1e}; 80-point refit within {fit_err:.1e}; 8-point Hausdorff above 20-point on 100 curves (min ratio {min_ratio:.2})"))
}

fn cell(r: &mut impl Rng, id: &str, c: usize, jitter: f64) -> (String, TextPolygon) {
    let (cx, cy) = ((c % 4) as f64 * 100.0, (c / 4) as f64 * 100.0);
    let mut j = || r.gen_range(-jitter..=jitter);
    let p = TextPolygon::from_coords(&[
        cx + j(),
        cy + j(),
        cx + 60.0 + j(),
        cy + j(),
        cx + 60.0 + j(),
        cy + 30.0 + j(),
        cx + j(),
        cy + 30.0 + j(),
    ])
    .unwrap();
    (id.to_string(), p)
}

fn scene(seed: u64) -> (Vec<DetectionRecord>, Vec<GroundTruthRecord>) {
    let mut r = rng(seed);
    let (mut dets, mut gts) = (Vec::new(), Vec::new());
    for img in 0..r.gen_range(1..4) {
        let id = format!("img_{img}");
        for c in 0..r.gen_range(1..8) {
            let (image_id, polygon) = cell(&mut r, &id, c, 0.0);
            gts.push(GroundTruthRecord { image_id, polygon, ignore: r.gen_bool(0.1) });
            for _ in 0..r.gen_range(0..3) {
                let jitter = r.gen_range(0.0..25.0);
                let (image_id, polygon) = cell(&mut r, &id, c, jitter);
                dets.push(DetectionRecord { image_id, polygon, score: r.gen() });
            }
        }
    }
    (dets, gts)
}

fn evaluation_harness() -> Outcome {
    let sq = |x: f64| TextPolygon::from_coords(&[x, 0., x + 10., 0., x + 10., 10., x, 10.]).unwrap();
    let gt = [GroundTruthRecord { image_id: "a".into(), polygon: sq(0.0), ignore: false }];
    let one = [DetectionRecord { image_id: "a".into(), polygon: sq(0.5), score: 0.9 }];
    let rep = evaluate(&one, &gt, 0.5, MatchStrategy::Greedy).unwrap();
    check((rep.precision, rep.recall, rep.hmean) == (1.0, 1.0, 1.0), || format!("1 det / 1 gt: {rep:?}"))?;
    let two = [one[0].clone(), DetectionRecord { image_id: "a".into(), polygon: sq(40.0), score: 0.3 }];
    let rep = evaluate(&two, &gt, 0.5, MatchStrategy::Greedy).unwrap();
    check((rep.precision, rep.recall) == (0.5, 1.0) && (rep.hmean - 2.0 / 3.0).abs() < 1e-15, || format!("2 det / 1 gt: {rep:?}"))?;

    for seed in 0..500 {
        let (mut dets, gts) = scene(seed);
        for s in [MatchStrategy::Greedy, MatchStrategy::Optimal] {
            let recalls: Vec<f64> = (1..10).map(|t| evaluate(&dets, &gts, t as f64 / 10.0, s).unwrap().recall).collect();
            check(recalls.windows(2).all(|w| w[1] <= w[0]), || format!("seed {seed} {s:?}: recall rises with threshold {recalls:?}"))?;
        }
        let Some(g) = gts.iter().find(|g| !g.ignore) else { continue };
        let copy = DetectionRecord { image_id: g.image_id.clone(), polygon: g.polygon.clone(), score: 1.0 };
        dets.push(copy.clone());
        for s in [MatchStrategy::Greedy, MatchStrategy::Optimal] {
            let base = evaluate(&dets, &gts, 0.5, s).unwrap();
            let mut with_dup = dets.clone();
            with_dup.push(copy.clone());
            let dup = evaluate(&with_dup, &gts, 0.5, s).unwrap();
            check(dup.precision < base.precision && dup.recall == base.recall, || {
                format!("seed {seed} {s:?}: duplicate changed recall or kept precision")
            })?;
        }
    }
    Ok("hand fixtures exact; duplicate and threshold properties over 500 scenes x 2 strategies".into())
}

const ICDAR_FIXTURE: &str = "377,117,463,117,465,130,378,130,Genaxis Theatre\n\
                             493,115,519,115,519,131,493,131,[06]\n\
                             374,155,409,155,409,170,374,170,###\n\
                             492,151,551,151,551,170,492,170,62-03\n\
                             376,198,422,198,422,212,376,212,Carpark\n";

fn run_cli(args: &[&str], dir: &Path) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_splitgiou")).args(args).current_dir(dir).output().map_err(|e| e.to_string())?;
    check(out.status.code() == Some(0), || format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))?;
    Ok(out.stdout)
}

fn pipeline(dir: &Path) -> Result<Vec<Vec<u8>>, String> {
    std::fs::write(dir.join("img_1.txt"), ICDAR_FIXTURE).map_err(|e| e.to_string())?;
    run_cli(&["convert", "img_1.txt", "--from", "icdar15", "--to", "bezier16", "--output", "img_1.json"], dir)?;
    let converted = std::fs::read(dir.join("img_1.json")).map_err(|e| e.to_string())?;
    let loss = run_cli(&["loss", "img_1.json", "img_1.json", "--json", "--split-mode", "rect3"], dir)?;
    let eval = run_cli(&["evaluate", "img_1.json", "img_1.json", "--json"], dir)?;
    let loss_v: serde_json::Value = serde_json::from_slice(&loss).map_err(|e| e.to_string())?;
    let rows = loss_v["rows"].as_array().ok_or("loss output has no rows")?;
    check(rows.len() == 5 && rows.iter().all(|r| r["total"] == 0.0), || format!("loss rows {rows:?}"))?;
    let eval_v: serde_json::Value = serde_json::from_slice(&eval).map_err(|e| e.to_string())?;
    check(eval_v["hmean"] == 1.0, || format!("self-evaluation H-mean {}", eval_v["hmean"]))?;
    Ok(vec![converted, loss, eval])
}

fn cli_end_to_end() -> Outcome {
    timed(30.0, || {
        let (a, b) = (tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?);
        let first = pipeline(a.path())?;
        let second = pipeline(b.path())?;
        check(first == second, || "outputs differ between runs".into())?;
        Ok("convert, loss (all zero), evaluate (H-mean 1) exit 0; byte-identical across runs".into())
    })
}

fn throughput() -> Outcome {
    let mut r = rng(909);
    let pairs: Vec<(BoxShape, BoxShape)> = (0..1000)
        .map(|_| {
            let g = random_pair(&mut r);
            let mut c = g.to_coords();
            c.iter_mut().for_each(|v| *v += r.gen_range(-3.0..3.0));
            (BoxShape::Bezier(BezierPair::from_coords(&c).unwrap()), BoxShape::Bezier(g))
        })
        .collect();
    let cfg = BoxLossConfig { split_mode: SplitMode::SplitRect3, ..Default::default() };
    let evals = 20_000;
    let t = Instant::now();
    for k in 0..evals {
        let (p, g) = &pairs[k % pairs.len()];
        std::hint::black_box(box_loss(p, g, &cfg).map_err(|e| e.to_string())?);
    }
    let rate = evals as f64 / t.elapsed().as_secs_f64();
    check(rate >= 1e4, || format!("{rate:.0} evaluations per second"))?;
    Ok(format!("{rate:.0} SplitRect3 box_loss evaluations per second"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Bernstein/Bezier suite", bezier_suite),
        ("GIoU suite", giou_suite),
        ("loss suite", loss_suite),
        ("split-GIoU mechanism", split_mechanism),
        ("Hungarian suite", hungarian_suite),
        ("conversion round trips", conversion_round_trips),
        ("evaluation harness", evaluation_harness),
        ("CLI end to end", cli_end_to_end),
        ("throughput", throughput),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
