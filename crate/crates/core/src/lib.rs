//! Geometry, Bezier text boundaries, box losses, set matching and detection
//! metrics for arbitrary-shape text detection.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line tool live in the `splitgiou` companion crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bezier;
pub mod evalmetrics;
pub mod geometry;
pub mod losses;
pub mod matching;

pub use bezier::{BezierCurve, BezierError, BezierPair, FitOptions};
pub use evalmetrics::{DetectionRecord, EvalError, EvalReport, GroundTruthRecord, ImageStats, MatchStrategy};
pub use geometry::{AaRect, GeometryError, Point2, Region, RotatedRect, TextPolygon};
pub use losses::{BoxLossConfig, BoxShape, LossError, LossValue, Reduction, SplitMode};
pub use matching::{Assignment, CostMatrix, MatchingError};
