//! The automaton edge-detection pipeline: binarize an intensity image, then
//! evolve it under a GF(2)-linear rule and read the result as an edge map.

use std::num::NonZeroU32;

use crate::error::{Error, Result};
use crate::grid::{BinaryGrid, BoundaryCondition};
use crate::imaging::{threshold, GrayImage, ThresholdSpec};
use crate::rules::{evolve, step, LinearRule};

/// Settings for [`detect_edges`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineConfig {
    pub rule: LinearRule,
    pub boundary: BoundaryCondition,
    pub threshold: ThresholdSpec,
    pub steps: NonZeroU32,
}

impl Default for PipelineConfig {
    /// Rule 449 under adiabatic boundaries, automatic thresholding, one step.
    fn default() -> Self {
        PipelineConfig {
            rule: LinearRule::from_number(449).expect("449 is a valid rule"),
            boundary: BoundaryCondition::Adiabatic,
            threshold: ThresholdSpec::Otsu,
            steps: NonZeroU32::new(1).expect("1 is nonzero"),
        }
    }
}

/// How the per-rule edge maps of [`detect_edges_combined`] are merged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineMode {
    /// A cell is an edge if any rule marks it.
    Union,
    /// A cell is an edge if an odd number of rules mark it.
    Xor,
}

/// Binarizes `img` and evolves it `config.steps` times under `config.rule`.
/// The final grid is the edge map: 1 marks an edge cell.
pub fn detect_edges(img: &GrayImage, config: &PipelineConfig) -> BinaryGrid {
    let grid = threshold(img, config.threshold);
    evolve(&grid, config.rule, config.boundary, config.steps.get())
}

/// Binarizes `img` once, applies each rule for a single step to that same
/// grid, and merges the per-rule edge maps with `mode`.
///
/// Different rules respond to different edge orientations, so merging a
/// family of rules (typically the four [`LinearRule::edge_rules`]) gives an
/// orientation-independent detector.
pub fn detect_edges_combined(
    img: &GrayImage,
    rules: &[LinearRule],
    mode: CombineMode,
    boundary: BoundaryCondition,
    spec: ThresholdSpec,
) -> Result<BinaryGrid> {
    let (first, rest) = rules
        .split_first()
        .ok_or_else(|| Error::usage("at least one rule is required"))?;
    let grid = threshold(img, spec);
    let mut combined = step(&grid, *first, boundary);
    for rule in rest {
        let map = step(&grid, *rule, boundary);
        combined = match mode {
            CombineMode::Union => combined.or(&map).expect("same shape"),
            CombineMode::Xor => combined.xor(&map).expect("same shape"),
        };
    }
    Ok(combined)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config() {
        let config = PipelineConfig::default();
        assert_eq!(config.rule.number(), 449);
        assert_eq!(config.boundary, BoundaryCondition::Adiabatic);
        assert_eq!(config.threshold, ThresholdSpec::Otsu);
        assert_eq!(config.steps.get(), 1);
    }

    #[test]
    fn constant_image_yields_no_edges_under_clamping_boundaries() {
        // Every edge rule has an even tap count, so a constant neighborhood
        // cancels over GF(2) wherever the boundary clamps or reflects.
        let img = GrayImage::new(9, 7, 170).unwrap();
        for boundary in [BoundaryCondition::Adiabatic, BoundaryCondition::Reflexive] {
            for rule in LinearRule::edge_rules() {
                let config = PipelineConfig {
                    rule,
                    boundary,
                    ..PipelineConfig::default()
                };
                assert_eq!(detect_edges(&img, &config).count_ones(), 0);
            }
        }
    }

    #[test]
    fn null_boundary_marks_the_clipped_border_of_a_constant_image() {
        // With ghost cells pinned to 0, a bright constant image looks like a
        // bright plate on a dark background. Rule 449 samples the cell and
        // its northern triple, so the top row (whole triple outside) and the
        // side columns (one corner tap outside) break the even-parity
        // cancellation; the bottom edge is invisible to northern taps.
        let img = GrayImage::new(5, 4, 200).unwrap();
        let config = PipelineConfig {
            boundary: BoundaryCondition::Null,
            ..PipelineConfig::default()
        };
        let edges = detect_edges(&img, &config);
        let expected = BinaryGrid::from_rows(&[
            [1u8, 1, 1, 1, 1],
            [1, 0, 0, 0, 1],
            [1, 0, 0, 0, 1],
            [1, 0, 0, 0, 1],
        ])
        .unwrap();
        assert_eq!(edges, expected);
    }

    #[test]
    fn single_rule_combination_matches_detect_edges() {
        let img = crate::pnm::tests_support::random_gray(12, 8, 7);
        let config = PipelineConfig::default();
        let direct = detect_edges(&img, &config);
        for mode in [CombineMode::Union, CombineMode::Xor] {
            let combined = detect_edges_combined(
                &img,
                &[config.rule],
                mode,
                config.boundary,
                config.threshold,
            )
            .unwrap();
            assert_eq!(combined, direct);
        }
    }

    #[test]
    fn union_covers_every_individual_rule() {
        let img = crate::pnm::tests_support::random_gray(16, 16, 3);
        let rules = LinearRule::edge_rules();
        let union = detect_edges_combined(
            &img,
            &rules,
            CombineMode::Union,
            BoundaryCondition::Adiabatic,
            ThresholdSpec::Otsu,
        )
        .unwrap();
        for rule in rules {
            let config = PipelineConfig {
                rule,
                ..PipelineConfig::default()
            };
            let single = detect_edges(&img, &config);
            // Every cell marked by one rule is marked by the union.
            assert_eq!(union.or(&single).unwrap(), union);
        }
    }

    #[test]
    fn empty_rule_list_is_a_usage_error() {
        let img = GrayImage::new(3, 3, 0).unwrap();
        let err = detect_edges_combined(
            &img,
            &[],
            CombineMode::Union,
            BoundaryCondition::Null,
            ThresholdSpec::Otsu,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
    }
}
