//! Two-state rectangular cellular automata over the nine-neighborhood, with
//! all 512 GF(2)-linear rules, three boundary conditions, and an
//! edge-detection pipeline built on them.
//!
//! The pipeline binarizes a grayscale image, applies one linear rule for one
//! synchronous step, and reads the result as an edge map. Classical detectors
//! (Prewitt, Roberts, Sobel, LoG, Canny) and edge-map metrics are included so
//! the rule-based method can be compared quantitatively, and a benchmark
//! weighs the word-parallel rule kernel against a per-cell reference.
//!
//! ```
//! use rca::{detect_edges, GrayImage, PipelineConfig};
//!
//! let pixels = vec![
//!     10, 10, 10, 10,
//!     10, 200, 200, 10,
//!     10, 200, 200, 10,
//!     10, 10, 10, 10,
//! ];
//! let image = GrayImage::from_pixels(4, 4, pixels).unwrap();
//! let edges = detect_edges(&image, &PipelineConfig::default());
//! assert_eq!(edges.width(), 4);
//! ```

mod error;
pub mod grid;
pub mod rules;
pub mod text;

pub mod imaging;
pub mod pnm;

pub mod pipeline;

pub mod baseline;

pub mod eval;

pub use error::{Error, Result};
pub use grid::{BinaryGrid, BoundaryCondition, NeighborOffset};
pub use imaging::{otsu_threshold, threshold, GrayImage, ThresholdSpec};
pub use pipeline::{detect_edges, detect_edges_combined, CombineMode, PipelineConfig};
pub use pnm::{read_pnm, write_pnm, PnmFormat, PnmImage};
pub use rules::{evolve, naive_step, step, LinearRule};
