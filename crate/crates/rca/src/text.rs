//! Plain-text grid fixtures: one grid per block, one row per line of `0`/`1`
//! characters, blocks separated by blank lines.

use crate::error::{Error, Result};
use crate::grid::BinaryGrid;

/// Parses every grid block in `input`. An empty (or all-blank) input yields
/// no grids; a malformed line reports its byte offset.
pub fn parse_grids(input: &str) -> Result<Vec<BinaryGrid>> {
    let mut grids = Vec::new();
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut block_width = 0usize;
    let mut block_start = 0usize;
    let mut offset = 0usize;

    for line in input.split_inclusive('\n') {
        let line_start = offset;
        offset += line.len();
        let body = line.trim_end_matches(['\n', '\r']);

        if body.is_empty() {
            if !rows.is_empty() {
                grids.push(BinaryGrid::from_rows(&rows)?);
                rows.clear();
            }
            continue;
        }

        if rows.is_empty() {
            block_width = body.len();
            block_start = line_start;
        } else if body.len() != block_width {
            return Err(Error::parse(
                line_start,
                format!(
                    "row of {} cells in a block of width {} (block starts at byte {})",
                    body.len(),
                    block_width,
                    block_start
                ),
            ));
        }

        let mut row = Vec::with_capacity(body.len());
        for (i, byte) in body.bytes().enumerate() {
            match byte {
                b'0' => row.push(0),
                b'1' => row.push(1),
                _ => {
                    return Err(Error::parse(
                        line_start + i,
                        format!("expected '0' or '1', found {:?}", byte as char),
                    ))
                }
            }
        }
        rows.push(row);
    }

    if !rows.is_empty() {
        grids.push(BinaryGrid::from_rows(&rows)?);
    }
    Ok(grids)
}

/// Renders one grid as a fixture block (no trailing blank line).
pub fn format_grid(grid: &BinaryGrid) -> String {
    let mut out = String::with_capacity((grid.width() + 1) * grid.height());
    for r in 0..grid.height() {
        for c in 0..grid.width() {
            out.push(if grid.get(r, c) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

/// Renders several grids separated by blank lines.
pub fn format_grids(grids: &[BinaryGrid]) -> String {
    grids
        .iter()
        .map(format_grid)
        .collect::<Vec<_>>()
        .join("\n")
}
