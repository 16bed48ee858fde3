//! Edge-map quality metrics and a packed-versus-naive stepping benchmark.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{BinaryGrid, BoundaryCondition};
use crate::rules::{naive_step, step, LinearRule};

/// Default distance penalty for [`pratt_fom`], the customary 1/9.
pub const DEFAULT_FOM_ALPHA: f64 = 1.0 / 9.0;

/// Cell-level agreement between a detected edge map and a reference map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeMetrics {
    pub true_positives: u64,
    pub false_positives: u64,
    pub false_negatives: u64,
    pub true_negatives: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub fom: f64,
}

/// Compares a detected edge map against a reference map of the same shape.
///
/// When a ratio's denominator is zero the score is 1.0 if both maps are
/// empty (nothing to find, nothing found) and 0.0 otherwise. `fom` is
/// [`pratt_fom`] at [`DEFAULT_FOM_ALPHA`].
pub fn confusion_metrics(detected: &BinaryGrid, reference: &BinaryGrid) -> Result<EdgeMetrics> {
    check_same_shape(detected, reference)?;
    let tp = detected.count_common(reference) as u64;
    let detected_total = detected.count_ones() as u64;
    let reference_total = reference.count_ones() as u64;
    let fp = detected_total - tp;
    let fn_ = reference_total - tp;
    let cells = (detected.width() * detected.height()) as u64;
    let tn = cells - tp - fp - fn_;

    let both_empty = detected_total == 0 && reference_total == 0;
    let ratio = |num: u64, den: u64| {
        if den == 0 {
            if both_empty {
                1.0
            } else {
                0.0
            }
        } else {
            num as f64 / den as f64
        }
    };
    let precision = ratio(tp, detected_total);
    let recall = ratio(tp, reference_total);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok(EdgeMetrics {
        true_positives: tp,
        false_positives: fp,
        false_negatives: fn_,
        true_negatives: tn,
        precision,
        recall,
        f1,
        fom: pratt_fom(detected, reference, DEFAULT_FOM_ALPHA)?,
    })
}

/// Pratt's figure of merit:
/// `(1 / max(Nd, Nr)) * sum over detected cells of 1 / (1 + alpha * d^2)`,
/// where `d` is the Euclidean distance from a detected cell to the nearest
/// reference cell. Two empty maps score 1.0; exactly one empty map scores
/// 0.0.
pub fn pratt_fom(detected: &BinaryGrid, reference: &BinaryGrid, alpha: f64) -> Result<f64> {
    check_same_shape(detected, reference)?;
    let detected_cells = ones(detected);
    let reference_cells = ones(reference);
    match (detected_cells.is_empty(), reference_cells.is_empty()) {
        (true, true) => return Ok(1.0),
        (true, false) | (false, true) => return Ok(0.0),
        (false, false) => {}
    }
    let mut sum = 0.0;
    for &(r, c) in &detected_cells {
        let mut best = u64::MAX;
        for &(rr, cc) in &reference_cells {
            let dr = r.abs_diff(rr) as u64;
            let dc = c.abs_diff(cc) as u64;
            let d2 = dr * dr + dc * dc;
            if d2 < best {
                best = d2;
                if best == 0 {
                    break;
                }
            }
        }
        sum += 1.0 / (1.0 + alpha * best as f64);
    }
    Ok(sum / detected_cells.len().max(reference_cells.len()) as f64)
}

fn check_same_shape(left: &BinaryGrid, right: &BinaryGrid) -> Result<()> {
    if left.width() != right.width() || left.height() != right.height() {
        return Err(Error::ShapeMismatch {
            left_width: left.width(),
            left_height: left.height(),
            right_width: right.width(),
            right_height: right.height(),
        });
    }
    Ok(())
}

fn ones(grid: &BinaryGrid) -> Vec<(usize, usize)> {
    let mut cells = Vec::new();
    for r in 0..grid.height() {
        for c in 0..grid.width() {
            if grid.get(r, c) {
                cells.push((r, c));
            }
        }
    }
    cells
}

/// One detector's metrics, labeled for reports.
#[derive(Debug, Clone, Serialize)]
pub struct MethodScore {
    pub method: String,
    #[serde(flatten)]
    pub metrics: EdgeMetrics,
}

/// Orders scores by descending F1, breaking ties by method name.
pub fn sort_scores(scores: &mut [MethodScore]) {
    scores.sort_by(|a, b| {
        b.metrics
            .f1
            .total_cmp(&a.metrics.f1)
            .then_with(|| a.method.cmp(&b.method))
    });
}

/// Renders scores as an aligned text table.
pub fn scores_text(scores: &[MethodScore]) -> String {
    let name_width = scores
        .iter()
        .map(|s| s.method.len())
        .chain(std::iter::once("method".len()))
        .max()
        .unwrap_or(6);
    let mut out = format!(
        "{:<name_width$}  {:>9}  {:>9}  {:>9}  {:>9}  {:>8}  {:>8}  {:>8}\n",
        "method", "precision", "recall", "f1", "fom", "tp", "fp", "fn"
    );
    for s in scores {
        out.push_str(&format!(
            "{:<name_width$}  {:>9.4}  {:>9.4}  {:>9.4}  {:>9.4}  {:>8}  {:>8}  {:>8}\n",
            s.method,
            s.metrics.precision,
            s.metrics.recall,
            s.metrics.f1,
            s.metrics.fom,
            s.metrics.true_positives,
            s.metrics.false_positives,
            s.metrics.false_negatives,
        ));
    }
    out
}

/// Renders scores as one JSON object per line.
pub fn scores_json_lines(scores: &[MethodScore]) -> String {
    let mut out = String::new();
    for s in scores {
        out.push_str(&serde_json::to_string(s).expect("metrics serialize"));
        out.push('\n');
    }
    out
}

/// Relative throughput of the packed stepper against the per-cell reference
/// stepper on the same workload.
#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub width: usize,
    pub height: usize,
    pub rule: u16,
    pub boundary: BoundaryCondition,
    pub iterations: u32,
    pub packed_cells_per_second: f64,
    pub naive_cells_per_second: f64,
    pub speedup: f64,
}

impl BenchReport {
    pub fn to_text(&self) -> String {
        format!(
            "grid {}x{}, rule {}, {} boundary, {} iterations\n\
             packed: {:>12.0} cells/s\n\
             naive:  {:>12.0} cells/s\n\
             speedup: {:.1}x\n",
            self.width,
            self.height,
            self.rule,
            self.boundary,
            self.iterations,
            self.packed_cells_per_second,
            self.naive_cells_per_second,
            self.speedup
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Times `iterations` synchronous steps of a random `width` x `height` grid
/// (seeded with `seed`) through the packed stepper and through the per-cell
/// reference stepper, and reports cells per second for each.
pub fn bench_step(
    width: usize,
    height: usize,
    rule: LinearRule,
    boundary: BoundaryCondition,
    iterations: u32,
    seed: u64,
) -> Result<BenchReport> {
    if iterations == 0 {
        return Err(Error::usage("iterations must be positive"));
    }
    let start_grid = BinaryGrid::random_seeded(width, height, seed)?;
    let cells = (width * height) as f64 * iterations as f64;

    let mut grid = start_grid.clone();
    let packed_start = Instant::now();
    for _ in 0..iterations {
        grid = step(&grid, rule, boundary);
        std::hint::black_box(&grid);
    }
    let packed_elapsed = packed_start.elapsed().as_secs_f64().max(1e-9);
    let packed_result = grid;

    let mut grid = start_grid;
    let naive_start = Instant::now();
    for _ in 0..iterations {
        grid = naive_step(&grid, rule, boundary);
        std::hint::black_box(&grid);
    }
    let naive_elapsed = naive_start.elapsed().as_secs_f64().max(1e-9);
    assert_eq!(packed_result, grid, "steppers disagree");

    let packed_cells_per_second = cells / packed_elapsed;
    let naive_cells_per_second = cells / naive_elapsed;
    Ok(BenchReport {
        width,
        height,
        rule: rule.number(),
        boundary,
        iterations,
        packed_cells_per_second,
        naive_cells_per_second,
        speedup: packed_cells_per_second / naive_cells_per_second,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_from(rows: &[&[u8]]) -> BinaryGrid {
        BinaryGrid::from_rows(rows).unwrap()
    }

    #[test]
    fn confusion_counts_on_a_hand_checked_pair() {
        let detected = grid_from(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 0]]);
        let reference = grid_from(&[&[1, 0, 0], &[0, 1, 1], &[0, 0, 0]]);
        let m = confusion_metrics(&detected, &reference).unwrap();
        assert_eq!(m.true_positives, 2);
        assert_eq!(m.false_positives, 1);
        assert_eq!(m.false_negatives, 1);
        assert_eq!(m.true_negatives, 5);
        assert_eq!(m.precision, 2.0 / 3.0);
        assert_eq!(m.recall, 2.0 / 3.0);
        assert!((m.f1 - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn empty_maps_score_perfectly_against_each_other() {
        let empty = BinaryGrid::new(4, 4, false).unwrap();
        let m = confusion_metrics(&empty, &empty).unwrap();
        assert_eq!(
            (m.precision, m.recall, m.f1, m.fom),
            (1.0, 1.0, 1.0, 1.0)
        );
        assert_eq!(m.true_negatives, 16);
    }

    #[test]
    fn one_sided_empty_maps_score_zero() {
        let empty = BinaryGrid::new(3, 3, false).unwrap();
        let full = BinaryGrid::new(3, 3, true).unwrap();
        for (d, r) in [(&empty, &full), (&full, &empty)] {
            let m = confusion_metrics(d, r).unwrap();
            assert_eq!((m.precision, m.recall, m.f1, m.fom), (0.0, 0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn identical_nonempty_maps_have_unit_fom() {
        let g = grid_from(&[&[0, 1], &[1, 0]]);
        assert_eq!(pratt_fom(&g, &g, DEFAULT_FOM_ALPHA).unwrap(), 1.0);
    }

    #[test]
    fn single_cell_offset_scores_nine_tenths() {
        let reference = grid_from(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
        let detected = grid_from(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        let fom = pratt_fom(&detected, &reference, DEFAULT_FOM_ALPHA).unwrap();
        assert!((fom - 0.9).abs() < 1e-12, "fom = {fom}");
    }

    #[test]
    fn extra_detection_at_distance_one_averages_hand_computed_value() {
        // Detected {(0,0), (0,1)} against reference {(0,0)}:
        // contributions 1 and 1/(1 + 1/9) = 0.9, normalized by max(2, 1).
        let reference = grid_from(&[&[1, 0], &[0, 0]]);
        let detected = grid_from(&[&[1, 1], &[0, 0]]);
        let fom = pratt_fom(&detected, &reference, DEFAULT_FOM_ALPHA).unwrap();
        assert!((fom - 0.95).abs() < 1e-12, "fom = {fom}");
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let a = BinaryGrid::new(3, 3, false).unwrap();
        let b = BinaryGrid::new(4, 3, false).unwrap();
        assert!(confusion_metrics(&a, &b).is_err());
        assert!(pratt_fom(&a, &b, DEFAULT_FOM_ALPHA).is_err());
    }

    #[test]
    fn scores_sort_by_f1_then_name() {
        let metric = |f1: f64| EdgeMetrics {
            true_positives: 0,
            false_positives: 0,
            false_negatives: 0,
            true_negatives: 0,
            precision: 0.0,
            recall: 0.0,
            f1,
            fom: 0.0,
        };
        let mut scores = vec![
            MethodScore {
                method: "b".into(),
                metrics: metric(0.5),
            },
            MethodScore {
                method: "a".into(),
                metrics: metric(0.5),
            },
            MethodScore {
                method: "c".into(),
                metrics: metric(0.9),
            },
        ];
        sort_scores(&mut scores);
        let order: Vec<&str> = scores.iter().map(|s| s.method.as_str()).collect();
        assert_eq!(order, ["c", "a", "b"]);
    }

    #[test]
    fn score_renderers_cover_every_method() {
        let empty = BinaryGrid::new(2, 2, false).unwrap();
        let metrics = confusion_metrics(&empty, &empty).unwrap();
        let scores = vec![
            MethodScore {
                method: "rule:449".into(),
                metrics,
            },
            MethodScore {
                method: "sobel".into(),
                metrics,
            },
        ];
        let text = scores_text(&scores);
        assert!(text.contains("rule:449") && text.contains("sobel"));
        assert!(text.lines().count() == 3, "header plus one line per method");

        let jsonl = scores_json_lines(&scores);
        let lines: Vec<&str> = jsonl.lines().collect();
        assert_eq!(lines.len(), 2);
        for line in lines {
            let value: serde_json::Value = serde_json::from_str(line).unwrap();
            // The flattened metrics sit beside the method name.
            assert!(value["method"].is_string());
            assert_eq!(value["precision"], 1.0);
            assert_eq!(value["true_positives"], 0);
        }
    }

    #[test]
    fn bench_reports_positive_rates_and_identical_results() {
        let rule = LinearRule::from_number(449).unwrap();
        let report = bench_step(64, 64, rule, BoundaryCondition::Adiabatic, 2, 9).unwrap();
        assert!(report.packed_cells_per_second > 0.0);
        assert!(report.naive_cells_per_second > 0.0);
        assert!(report.speedup > 0.0);
        assert_eq!(report.rule, 449);

        let text = report.to_text();
        assert!(text.contains("speedup"));
        let parsed: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(parsed["width"], 64);
        assert_eq!(parsed["boundary"], "adiabatic");
    }

    #[test]
    fn bench_rejects_zero_iterations() {
        let rule = LinearRule::from_number(1).unwrap();
        assert!(bench_step(8, 8, rule, BoundaryCondition::Null, 0, 0).is_err());
    }
}
