//! One-to-one assignment of predictions to ground truths.
//!
//! [`hungarian`] is the shortest-augmenting-path form of the Hungarian
//! method with row/column potentials, O(rows² · cols). Rectangular
//! matrices are solved directly: the shorter side is assigned completely
//! and the surplus rows or columns stay unmatched.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::losses::{box_loss, BoxLossConfig, BoxShape, LossError};

#[derive(Debug, Clone, PartialEq)]
pub enum MatchingError {
    Empty,
    /// `values.len()` does not equal `rows * cols`.
    ShapeMismatch {
        rows: usize,
        cols: usize,
        len: usize,
    },
    NonFinite {
        row: usize,
        col: usize,
    },
    ProbabilityOutOfRange(f64),
    BoxLoss(LossError),
    /// Box loss failed for one cell of a cost matrix.
    Cell {
        pred: usize,
        gt: usize,
        source: LossError,
    },
}

impl fmt::Display for MatchingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingError::Empty => write!(f, "cost matrix needs at least one row and one column"),
            MatchingError::ShapeMismatch { rows, cols, len } => {
                write!(f, "{rows}x{cols} matrix given {len} values")
            }
            MatchingError::NonFinite { row, col } => write!(f, "cost at ({row}, {col}) is not finite"),
            MatchingError::ProbabilityOutOfRange(p) => write!(f, "class probability {p} outside [0, 1]"),
            MatchingError::BoxLoss(source) => write!(f, "box loss: {source}"),
            MatchingError::Cell { pred, gt, source } => {
                write!(f, "box loss for prediction {pred} vs ground truth {gt}: {source}")
            }
        }
    }
}

impl core::error::Error for MatchingError {}

/// Row-major matrix of finite costs; rows are predictions, columns ground truths.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl CostMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self, MatchingError> {
        if rows == 0 || cols == 0 {
            return Err(MatchingError::Empty);
        }
        if values.len() != rows * cols {
            return Err(MatchingError::ShapeMismatch { rows, cols, len: values.len() });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(MatchingError::NonFinite { row: k / cols, col: k % cols });
        }
        Ok(CostMatrix { rows, cols, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MatchingError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(MatchingError::ShapeMismatch { rows: rows.len(), cols, len: r.len() });
            }
            values.extend_from_slice(r);
        }
        CostMatrix::new(rows.len(), cols, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// `(row, col)` pairs sorted by row.
    pub pairs: Vec<(usize, usize)>,
    pub total_cost: f64,
}

impl Assignment {
    pub fn empty() -> Self {
        Assignment { pairs: Vec::new(), total_cost: 0.0 }
    }

    /// Column matched to `row`, if any.
    pub fn col_for(&self, row: usize) -> Option<usize> {
        self.pairs.iter().find(|(r, _)| *r == row).map(|&(_, c)| c)
    }
}

/// Minimum-cost assignment for `n <= m`, `cost(i, j)` for `i < n`, `j < m`.
/// Returns the column of each row.
fn solve_wide<F: Fn(usize, usize) -> f64>(n: usize, m: usize, cost: F) -> Vec<usize> {
    const NONE: usize = usize::MAX;
    // Index 0 of `col_owner`/`way`/`v` is a virtual column holding the row
    // being inserted; real columns are 1..=m.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; m + 1];
    let mut col_owner = vec![NONE; m + 1];
    let mut way = vec![0usize; m + 1];
    let mut min_slack = vec![f64::INFINITY; m + 1];
    let mut used = vec![false; m + 1];

    for row in 0..n {
        col_owner[0] = row;
        let mut j0 = 0usize;
        min_slack.iter_mut().for_each(|s| *s = f64::INFINITY);
        used.iter_mut().for_each(|u| *u = false);
        loop {
            used[j0] = true;
            let i0 = col_owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let reduced = cost(i0, j - 1) - u[i0 + 1] - v[j];
                if reduced < min_slack[j] {
                    min_slack[j] = reduced;
                    way[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[col_owner[j] + 1] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if col_owner[j0] == NONE {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            col_owner[j0] = col_owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut col_of_row = vec![NONE; n];
    for j in 1..=m {
        if col_owner[j] != NONE {
            col_of_row[col_owner[j]] = j - 1;
        }
    }
    col_of_row
}

/// Minimum-total-cost one-to-one assignment covering `min(rows, cols)` pairs.
pub fn hungarian(c: &CostMatrix) -> Assignment {
    let mut pairs: Vec<(usize, usize)> = if c.rows <= c.cols {
        solve_wide(c.rows, c.cols, |i, j| c.get(i, j)).into_iter().enumerate().collect()
    } else {
        solve_wide(c.cols, c.rows, |i, j| c.get(j, i)).into_iter().enumerate().map(|(col, row)| (row, col)).collect()
    };
    pairs.sort_unstable();
    let total_cost = pairs.iter().map(|&(r, col)| c.get(r, col)).sum();
    Assignment { pairs, total_cost }
}

/// Class cost `-class_weight * p` plus the box loss total.
pub fn matching_cost(
    pred_class_prob: f64,
    pred: &BoxShape,
    gt: &BoxShape,
    cfg: &BoxLossConfig,
    class_weight: f64,
) -> Result<f64, MatchingError> {
    check_probability(pred_class_prob)?;
    let box_term = box_loss(pred, gt, cfg).map_err(MatchingError::BoxLoss)?;
    Ok(-class_weight * pred_class_prob + box_term.total)
}

fn check_probability(p: f64) -> Result<(), MatchingError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(MatchingError::ProbabilityOutOfRange(p))
    }
}

/// Pairwise [`matching_cost`] matrix, predictions as rows.
pub fn cost_matrix(
    preds: &[(f64, BoxShape)],
    gts: &[BoxShape],
    cfg: &BoxLossConfig,
    class_weight: f64,
) -> Result<CostMatrix, MatchingError> {
    let mut values = Vec::with_capacity(preds.len() * gts.len());
    for (i, (prob, pred)) in preds.iter().enumerate() {
        check_probability(*prob)?;
        for (j, gt) in gts.iter().enumerate() {
            let cell = matching_cost(*prob, pred, gt, cfg, class_weight).map_err(|e| match e {
                MatchingError::BoxLoss(source) => MatchingError::Cell { pred: i, gt: j, source },
                other => other,
            })?;
            values.push(cell);
        }
    }
    CostMatrix::new(preds.len(), gts.len(), values)
}

/// Hungarian matching of scored predictions to ground truths. Unmatched
/// predictions are background. No ground truths gives an empty assignment.
pub fn match_sets(
    preds: &[(f64, BoxShape)],
    gts: &[BoxShape],
    cfg: &BoxLossConfig,
    class_weight: f64,
) -> Result<Assignment, MatchingError> {
    if gts.is_empty() || preds.is_empty() {
        for (p, _) in preds {
            check_probability(*p)?;
        }
        return Ok(Assignment::empty());
    }
    Ok(hungarian(&cost_matrix(preds, gts, cfg, class_weight)?))
}
