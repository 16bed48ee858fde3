//! The 512 GF(2)-linear update rules over the nine-neighborhood.
//!
//! A linear rule is a subset of the nine neighborhood taps whose values are
//! XOR-ed to produce a cell's next state. Each tap carries a power-of-two
//! weight; a rule's number is the sum of its tap weights, so rule numbers
//! 0..=511 and tap sets are in bijection. Applying a rule to a whole grid
//! ([`step`]) XORs the grid's shifted views word by word; [`naive_step`]
//! recomputes the same map cell by cell and serves as the independent oracle
//! for the packed path.

use crate::error::{Error, Result};
use crate::grid::{BinaryGrid, BoundaryCondition, NeighborOffset};

/// Tap weights: center 1, then east 2 proceeding clockwise to northeast 256.
const WEIGHTED_TAPS: [(NeighborOffset, u16); 9] = [
    (NeighborOffset::new(0, 0), 1),    // center
    (NeighborOffset::new(0, 1), 2),    // east
    (NeighborOffset::new(1, 1), 4),    // southeast
    (NeighborOffset::new(1, 0), 8),    // south
    (NeighborOffset::new(1, -1), 16),  // southwest
    (NeighborOffset::new(0, -1), 32),  // west
    (NeighborOffset::new(-1, -1), 64), // northwest
    (NeighborOffset::new(-1, 0), 128), // north
    (NeighborOffset::new(-1, 1), 256), // northeast
];

/// The single-tap weight of one neighborhood offset.
pub fn tap_weight(off: NeighborOffset) -> u16 {
    WEIGHTED_TAPS
        .iter()
        .find(|(o, _)| *o == off)
        .map(|(_, w)| *w)
        .expect("all nine offsets carry a weight")
}

/// One of the 512 linear rules, identified by its number in 0..=511.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LinearRule {
    number: u16,
}

impl LinearRule {
    /// Decodes a rule number into its tap set.
    pub fn from_number(number: u16) -> Result<Self> {
        if number > 511 {
            return Err(Error::InvalidRule(number as u32));
        }
        Ok(LinearRule { number })
    }

    /// Encodes a tap set as a rule number; duplicate offsets collapse.
    pub fn from_taps(taps: impl IntoIterator<Item = NeighborOffset>) -> Self {
        let number = taps.into_iter().fold(0, |acc, off| acc | tap_weight(off));
        LinearRule { number }
    }

    pub fn number(self) -> u16 {
        self.number
    }

    /// The taps XOR-ed by this rule, in weight order.
    pub fn taps(self) -> impl Iterator<Item = NeighborOffset> {
        WEIGHTED_TAPS
            .iter()
            .filter(move |(_, w)| self.number & w != 0)
            .map(|(off, _)| *off)
    }

    pub fn tap_count(self) -> u32 {
        self.number.count_ones()
    }

    pub fn has_tap(self, off: NeighborOffset) -> bool {
        self.number & tap_weight(off) != 0
    }

    /// The four rules that turn a filled region into its directional edge:
    /// center plus the three southern (29), western (113), eastern (263),
    /// or northern (449) neighbors.
    pub fn edge_rules() -> [LinearRule; 4] {
        [
            LinearRule { number: 29 },
            LinearRule { number: 113 },
            LinearRule { number: 263 },
            LinearRule { number: 449 },
        ]
    }
}

impl std::fmt::Display for LinearRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "rule {}", self.number)
    }
}

/// Applies `rule` synchronously to every cell: the output cell at (r, c) is
/// the XOR over taps (dr, dc) of `sample(r + dr, c + dc, bc)`, all taken
/// from the pre-step grid. Computed as an XOR of whole-grid shifted views.
pub fn step(grid: &BinaryGrid, rule: LinearRule, bc: BoundaryCondition) -> BinaryGrid {
    let mut acc = BinaryGrid::new(grid.width(), grid.height(), false)
        .expect("source grid has valid dimensions");
    for off in rule.taps() {
        acc.xor_assign(&grid.shift(off, bc));
    }
    acc
}

/// Same contract as [`step`], recomputed cell by cell via
/// [`BinaryGrid::sample`]. Shares no code with the word-parallel path, so the
/// two can check each other.
pub fn naive_step(grid: &BinaryGrid, rule: LinearRule, bc: BoundaryCondition) -> BinaryGrid {
    let mut out = BinaryGrid::new(grid.width(), grid.height(), false)
        .expect("source grid has valid dimensions");
    let taps: Vec<NeighborOffset> = rule.taps().collect();
    for r in 0..grid.height() {
        for c in 0..grid.width() {
            let mut value = false;
            for off in &taps {
                value ^= grid
                    .sample(r as isize + off.dr() as isize, c as isize + off.dc() as isize, bc)
                    .expect("taps stay within the ghost ring");
            }
            if value {
                out.set(r, c, true);
            }
        }
    }
    out
}

/// The `steps`-fold composition of [`step`]; zero steps returns the input.
pub fn evolve(
    grid: &BinaryGrid,
    rule: LinearRule,
    bc: BoundaryCondition,
    steps: u32,
) -> BinaryGrid {
    let mut current = grid.clone();
    for _ in 0..steps {
        current = step(&current, rule, bc);
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL_BCS: [BoundaryCondition; 3] = [
        BoundaryCondition::Null,
        BoundaryCondition::Adiabatic,
        BoundaryCondition::Reflexive,
    ];

    fn offsets(pairs: &[(i8, i8)]) -> Vec<NeighborOffset> {
        pairs.iter().map(|&(dr, dc)| NeighborOffset::new(dr, dc)).collect()
    }

    #[test]
    fn rule_number_decomposition() {
        assert_eq!(LinearRule::from_number(0).unwrap().tap_count(), 0);
        assert_eq!(LinearRule::from_number(511).unwrap().tap_count(), 9);

        // 449 = 256 + 128 + 64 + 1: center plus the three northern neighbors
        let r449 = LinearRule::from_number(449).unwrap();
        let expected = offsets(&[(0, 0), (-1, -1), (-1, 0), (-1, 1)]);
        let taps: Vec<_> = r449.taps().collect();
        assert_eq!(taps.len(), 4);
        for off in expected {
            assert!(r449.has_tap(off), "449 should tap ({}, {})", off.dr(), off.dc());
        }
        assert_eq!(taps, offsets(&[(0, 0), (-1, -1), (-1, 0), (-1, 1)]));

        // 29 = 16 + 8 + 4 + 1 (southern), 113 = 64 + 32 + 16 + 1 (western),
        // 263 = 256 + 4 + 2 + 1 (eastern)
        for (number, sides) in [
            (29u16, offsets(&[(0, 0), (1, 1), (1, 0), (1, -1)])),
            (113, offsets(&[(0, 0), (1, -1), (0, -1), (-1, -1)])),
            (263, offsets(&[(0, 0), (0, 1), (1, 1), (-1, 1)])),
        ] {
            let rule = LinearRule::from_number(number).unwrap();
            assert_eq!(rule.tap_count(), 4);
            for off in sides {
                assert!(rule.has_tap(off), "{number} should tap ({}, {})", off.dr(), off.dc());
            }
        }
    }

    #[test]
    fn rule_number_round_trip() {
        for n in 0..=511u16 {
            let rule = LinearRule::from_number(n).unwrap();
            assert_eq!(LinearRule::from_taps(rule.taps()).number(), n);
        }
        assert!(matches!(
            LinearRule::from_number(512),
            Err(Error::InvalidRule(512))
        ));
    }

    #[test]
    fn from_taps_examples() {
        assert_eq!(LinearRule::from_taps([]).number(), 0);
        assert_eq!(LinearRule::from_taps([NeighborOffset::new(0, 0)]).number(), 1);
        assert_eq!(
            LinearRule::from_taps(offsets(&[(0, 0), (-1, 0), (-1, -1), (-1, 1)])).number(),
            449
        );
        // duplicates collapse: a tap set, not a multiset
        assert_eq!(
            LinearRule::from_taps(offsets(&[(0, 0), (0, 0)])).number(),
            1
        );
    }

    #[test]
    fn identity_and_annihilator() {
        let g = BinaryGrid::random_seeded(37, 11, 5).unwrap();
        for bc in ALL_BCS {
            assert_eq!(step(&g, LinearRule::from_number(1).unwrap(), bc), g);
            assert_eq!(
                step(&g, LinearRule::from_number(0).unwrap(), bc).count_ones(),
                0
            );
            assert_eq!(naive_step(&g, LinearRule::from_number(1).unwrap(), bc), g);
            assert_eq!(
                naive_step(&g, LinearRule::from_number(0).unwrap(), bc).count_ones(),
                0
            );
        }
    }

    #[test]
    fn single_center_cell_rule_449() {
        let mut rows = vec![vec![0u8; 3]; 3];
        rows[1][1] = 1;
        let g = BinaryGrid::from_rows(&rows).unwrap();
        let out = step(&g, LinearRule::from_number(449).unwrap(), BoundaryCondition::Null);
        assert_eq!(
            out.to_rows(),
            vec![vec![0, 0, 0], vec![0, 1, 0], vec![1, 1, 1]]
        );
    }

    #[test]
    fn evolve_composes() {
        let g = BinaryGrid::random_seeded(40, 17, 12).unwrap();
        let rule = LinearRule::from_number(449).unwrap();
        assert_eq!(evolve(&g, rule, BoundaryCondition::Null, 0), g);
        assert_eq!(
            evolve(&g, LinearRule::from_number(1).unwrap(), BoundaryCondition::Adiabatic, 5),
            g
        );
        let twice = step(
            &step(&g, rule, BoundaryCondition::Null),
            rule,
            BoundaryCondition::Null,
        );
        assert_eq!(evolve(&g, rule, BoundaryCondition::Null, 2), twice);
    }

    #[test]
    fn packed_matches_naive_on_awkward_widths() {
        for (width, height) in [(1, 1), (2, 5), (63, 4), (64, 4), (65, 4), (127, 2)] {
            let g = BinaryGrid::random_seeded(width, height, width as u64 * 31 + height as u64)
                .unwrap();
            for number in [0u16, 1, 29, 113, 170, 263, 449, 511] {
                let rule = LinearRule::from_number(number).unwrap();
                for bc in ALL_BCS {
                    assert_eq!(
                        step(&g, rule, bc),
                        naive_step(&g, rule, bc),
                        "rule {number} bc {bc} size {width}x{height}"
                    );
                }
            }
        }
    }

    #[test]
    fn constant_grid_maps_to_zero_under_edge_rules() {
        for fill in [false, true] {
            let g = BinaryGrid::new(19, 7, fill).unwrap();
            for rule in LinearRule::edge_rules() {
                for bc in [BoundaryCondition::Adiabatic, BoundaryCondition::Reflexive] {
                    assert_eq!(step(&g, rule, bc).count_ones(), 0, "rule {rule} bc {bc}");
                }
            }
        }
    }
}
