//! Published values the computations are compared against.

use crate::normalizer::{Borel, L0Tag, Slot};

/// Expected `L0` for each rigid case. The exceptional case is additionally
/// required to be a non-split extension.
pub fn table1() -> [(&'static str, L0Tag); 10] {
    use Borel::{B1, B2};
    [
        ("0-1", L0Tag::Full),
        ("0-4", L0Tag::BorelCube(B1)),
        ("1-1", L0Tag::BorelCube(B2)),
        ("1-5", L0Tag::BorelTilde(B2)),
        ("1-11", L0Tag::MixedPair { slots: [Slot::Borel(B2), Slot::Borel(B2), Slot::Borel(B1)], swap: (0, 1) }),
        ("2-1", L0Tag::Diagonal),
        ("2-9", L0Tag::BorelCube(B1)),
        ("2-12", L0Tag::MixedPair { slots: [Slot::Trivial, Slot::Borel(B1), Slot::Borel(B1)], swap: (1, 2) }),
        ("3-5", L0Tag::BorelTilde(B1)),
        ("4-1", L0Tag::Case41),
    ]
}

/// Picard ranks over the rationals of the rigid cases.
pub const TABLE2_RANKS: [(&str, usize); 10] = [
    ("0-1", 0),
    ("0-4", 1),
    ("1-1", 1),
    ("1-5", 1),
    ("1-11", 2),
    ("2-1", 1),
    ("2-9", 1),
    ("2-12", 3),
    ("3-5", 1),
    ("4-1", 1),
];

pub fn expected_tag(label: &str) -> Option<L0Tag> {
    table1().into_iter().find(|(l, _)| *l == label).map(|(_, t)| t)
}

pub fn expected_rank(label: &str) -> Option<usize> {
    TABLE2_RANKS.iter().find(|(l, _)| *l == label).map(|&(_, r)| r)
}

/// Counts for the case with the largest singular locus.
pub mod case_0_1 {
    pub const CURVES_PER_DIRECTION: usize = 16;
    pub const CURVE_CLASSES: usize = 48;
    pub const TRIDENTS: usize = 64;
    pub const RESOLUTION_BOUND: &str = "340282366920938463463374607431768211456";
}

pub const CREPANT_TRIANGULATIONS: usize = 4;

/// Markdown rendering of Table 2 as produced by `report`.
pub const TABLE2_MARKDOWN: &str = include_str!("../data/table2.md");
