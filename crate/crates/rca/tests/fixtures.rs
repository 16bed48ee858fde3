//! Hand-derived fixtures: small inputs whose outputs were worked out cell by
//! cell by hand, pinned so regressions in the kernels are caught exactly.

use rca::eval::confusion_metrics;
use rca::grid::BoundaryCondition;
use rca::{
    detect_edges, detect_edges_combined, step, threshold, BinaryGrid, CombineMode, GrayImage,
    LinearRule, NeighborOffset, PipelineConfig, ThresholdSpec,
};

fn rule(n: u16) -> LinearRule {
    LinearRule::from_number(n).expect("valid rule")
}

fn grid(rows: &[&[u8]]) -> BinaryGrid {
    BinaryGrid::from_rows(rows).expect("well-formed rows")
}

/// A 16x16 intensity image holding a bright 6x6 square (rows and columns
/// 5..=10) on a dark ground. At threshold 128 it binarizes to the square.
fn bright_square_image() -> GrayImage {
    let mut pixels = vec![20u8; 16 * 16];
    for r in 5..=10 {
        for c in 5..=10 {
            pixels[r * 16 + c] = 200;
        }
    }
    GrayImage::from_pixels(16, 16, pixels).expect("valid dimensions")
}

/// The boundary cells of that square: its outermost ring, 20 cells.
fn square_boundary() -> BinaryGrid {
    let mut rows = vec![vec![0u8; 16]; 16];
    rows[5][5..=10].fill(1);
    rows[10][5..=10].fill(1);
    for row in &mut rows[6..=9] {
        row[5] = 1;
        row[10] = 1;
    }
    BinaryGrid::from_rows(&rows).expect("well-formed rows")
}

/// Smallest Chebyshev distance from (r, c) to any set cell of `set`.
fn chebyshev_to_set(set: &BinaryGrid, r: usize, c: usize) -> usize {
    let mut best = usize::MAX;
    for sr in 0..set.height() {
        for sc in 0..set.width() {
            if set.get(sr, sc) {
                let d = sr.abs_diff(r).max(sc.abs_diff(c));
                best = best.min(d);
            }
        }
    }
    best
}

/// One step of rule 449 keeps the top edge row of a solid block intact:
/// the row above the block is empty, so the three northern taps contribute
/// nothing there and the row passes through unchanged.
#[test]
fn rule_449_preserves_the_top_edge_row_of_a_block() {
    let block = grid(&[
        &[0, 0, 0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0, 0, 0],
        &[0, 0, 1, 1, 1, 1, 1, 0],
        &[0, 0, 1, 1, 1, 1, 1, 0],
        &[0, 0, 1, 1, 1, 1, 1, 0],
        &[0, 0, 1, 1, 1, 1, 1, 0],
        &[0, 0, 1, 1, 1, 1, 1, 0],
        &[0, 0, 0, 0, 0, 0, 0, 0],
    ]);
    let after = step(&block, rule(449), BoundaryCondition::Reflexive);
    assert_eq!(after.to_rows()[2], vec![0, 0, 1, 1, 1, 1, 1, 0]);
    assert_eq!((after.width(), after.height()), (8, 8));
}

/// Full response of rule 449 to the square fixture, worked out by hand:
/// out(r,c) = in(r,c) XOR in(r-1,c-1) XOR in(r-1,c) XOR in(r-1,c+1).
#[test]
fn rule_449_square_response_matches_the_hand_computation() {
    let img = bright_square_image();
    let config = PipelineConfig {
        rule: rule(449),
        boundary: BoundaryCondition::Null,
        threshold: ThresholdSpec::Fixed(128),
        ..PipelineConfig::default()
    };
    let out = detect_edges(&img, &config);

    let mut expected = vec![vec![0u8; 16]; 16];
    expected[5][5..=10].fill(1); // top edge passes through
    for row in &mut expected[6..=10] {
        // inside the block, vertically constant columns cancel; the two
        // columns flanking each side edge flip
        for c in [4, 5, 10, 11] {
            row[c] = 1;
        }
    }
    for c in [4, 6, 7, 8, 9, 11] {
        // one past the bottom edge: triples of ones have odd parity
        expected[11][c] = 1;
    }
    assert_eq!(out, grid(&expected.iter().map(Vec::as_slice).collect::<Vec<_>>()));
}

/// Every four-tap rule has even tap parity, so any cell whose full 3x3
/// neighborhood is constant after thresholding must map to 0. Checked for
/// all four proposed rules under all three boundary conditions.
#[test]
fn edge_rules_are_silent_on_constant_neighborhoods() {
    let img = bright_square_image();
    let binary = threshold(&img, ThresholdSpec::Fixed(128));
    for bc in [
        BoundaryCondition::Null,
        BoundaryCondition::Adiabatic,
        BoundaryCondition::Reflexive,
    ] {
        for r in LinearRule::edge_rules() {
            let out = step(&binary, r, bc);
            for row in 0..binary.height() {
                for col in 0..binary.width() {
                    let mut samples = NeighborOffset::ALL.iter().map(|t| {
                        binary
                            .sample(row as isize + t.dr() as isize, col as isize + t.dc() as isize, bc)
                            .expect("offsets within range")
                    });
                    let first = binary.get(row, col);
                    if samples.all(|s| s == first) {
                        assert!(
                            !out.get(row, col),
                            "rule {} under {:?} marked a constant neighborhood at ({}, {})",
                            r.number(),
                            bc,
                            row,
                            col
                        );
                    }
                }
            }
        }
    }
}

/// The union of the four proposed rules recovers the square's boundary ring
/// completely (recall 1.0) and marks nothing farther than one cell from it.
#[test]
fn union_of_edge_rules_covers_the_square_boundary() {
    let img = bright_square_image();
    let union = detect_edges_combined(
        &img,
        &LinearRule::edge_rules(),
        CombineMode::Union,
        BoundaryCondition::Null,
        ThresholdSpec::Fixed(128),
    )
    .expect("nonempty rule list");

    let reference = square_boundary();
    let metrics = confusion_metrics(&union, &reference).expect("same shape");
    assert_eq!(metrics.recall, 1.0, "every boundary cell must be marked");
    assert_eq!(metrics.false_negatives, 0);

    for r in 0..union.height() {
        for c in 0..union.width() {
            if union.get(r, c) {
                assert!(
                    chebyshev_to_set(&reference, r, c) <= 1,
                    "mark at ({r}, {c}) strays more than one cell from the boundary"
                );
            }
        }
    }
}

/// A single center cell under the eastern-triple rule 263 lights the column
/// to its west plus itself; this is the 90-degree rotation of what the
/// northern-triple rule 449 produces, pinning the orientation conventions.
#[test]
fn single_cell_responses_pin_rule_orientations() {
    let center = grid(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 0]]);
    let north = step(&center, rule(449), BoundaryCondition::Null);
    assert_eq!(north, grid(&[&[0, 0, 0], &[0, 1, 0], &[1, 1, 1]]));
    let east = step(&center, rule(263), BoundaryCondition::Null);
    assert_eq!(east, grid(&[&[1, 0, 0], &[1, 1, 0], &[1, 0, 0]]));
    assert_eq!(north.rot90_cw(), east);
}

/// A vertical intensity step detected with the Laplacian-of-Gaussian: the
/// response changes sign exactly once, between the two columns flanking the
/// step, so those two columns and nothing else are marked; and because the
/// image is constant along rows, every output row is identical.
#[test]
fn log_marks_exactly_the_columns_flanking_a_vertical_step() {
    let (w, h) = (24usize, 10usize);
    let mut pixels = vec![0u8; w * h];
    for r in 0..h {
        for c in 12..w {
            pixels[r * w + c] = 200;
        }
    }
    let img = GrayImage::from_pixels(w, h, pixels).expect("valid dimensions");
    let out = rca::baseline::log_detect(&img, 2.0, 5.0).expect("valid parameters");

    let rows = out.to_rows();
    for row in &rows {
        assert_eq!(row, &rows[0], "rows must be uniform for a vertical step");
    }
    let marked: Vec<usize> = (0..w).filter(|&c| out.get(0, c)).collect();
    assert_eq!(marked, vec![11, 12]);
}

/// Two pipeline steps equal one step applied to the one-step result.
#[test]
fn pipeline_steps_compose() {
    let img = bright_square_image();
    let one = PipelineConfig {
        boundary: BoundaryCondition::Reflexive,
        threshold: ThresholdSpec::Fixed(128),
        ..PipelineConfig::default()
    };
    let two = PipelineConfig {
        steps: std::num::NonZeroU32::new(2).expect("nonzero"),
        ..one
    };
    assert_eq!(
        detect_edges(&img, &two),
        step(&detect_edges(&img, &one), one.rule, one.boundary)
    );
}
