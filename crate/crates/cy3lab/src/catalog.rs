//! Parsing and validation of the case catalog.
//!
//! One case per line: `label | twist1 twist2 | shift1;...;shiftr | h11 h21 | pi1`,
//! with `-` for an empty shift list and `#` starting a comment.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::group::{generate_group, GGroup, GroupElement, HalfPoint, Signs};

/// The catalog shipped with the crate.
pub const SHIPPED: &str = include_str!("../data/catalog.txt");

pub const CATALOG_SIZE: usize = 35;

/// Labels with `h21 = 3`, in the order used by the normalizer and Picard tables.
pub const RIGID_LABELS: [&str; 10] = ["0-1", "0-4", "1-1", "1-5", "1-11", "2-1", "2-9", "2-12", "3-5", "4-1"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("expected 5 fields separated by '|', found {0}")]
    FieldCount(usize),
    #[error("malformed label {0:?}")]
    Label(String),
    #[error("invalid base token {0:?}")]
    BaseToken(String),
    #[error("malformed symbol {0:?}")]
    Symbol(String),
    #[error("twist generator {0} has an odd number of minus signs")]
    OddTwist(String),
    #[error("shift generator {0} carries a sign")]
    SignedShift(String),
    #[error("expected 2 twist generators, found {0}")]
    TwistCount(usize),
    #[error("label declares {expected} shift generators, found {found}")]
    ShiftCount { expected: usize, found: usize },
    #[error("malformed Hodge numbers {0:?}")]
    Hodge(String),
    #[error("unknown fundamental group symbol {0:?}")]
    Pi1(String),
    #[error("line {line}: {source}")]
    Line { line: usize, source: Box<CatalogError> },
    #[error("duplicate label {0}")]
    Duplicate(Label),
    #[error("deleted case present: {0}")]
    DeletedCase(Label),
    #[error("entry count {0} ≠ 35")]
    Count(usize),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct Label {
    /// Number of independent shift generators.
    pub rank: u8,
    pub index: u16,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.rank, self.index)
    }
}

impl FromStr for Label {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CatalogError::Label(s.to_string());
        let (r, n) = s.trim().split_once('-').ok_or_else(bad)?;
        let rank: u8 = r.parse().map_err(|_| bad())?;
        let index: u16 = n.parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(Label { rank, index })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub enum Pi1Label {
    Zero,
    A,
    B,
    C,
    D,
}

impl Pi1Label {
    pub fn symbol(self) -> &'static str {
        match self {
            Pi1Label::Zero => "0",
            Pi1Label::A => "A",
            Pi1Label::B => "B",
            Pi1Label::C => "C",
            Pi1Label::D => "D",
        }
    }
}

impl fmt::Display for Pi1Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Pi1Label {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "0" => Ok(Pi1Label::Zero),
            "A" => Ok(Pi1Label::A),
            "B" => Ok(Pi1Label::B),
            "C" => Ok(Pi1Label::C),
            "D" => Ok(Pi1Label::D),
            other => Err(CatalogError::Pi1(other.to_string())),
        }
    }
}

/// One factor of a generator: a half-point base and an optional sign.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FactorSymbol {
    pub base: HalfPoint,
    /// `Some(true)` for `-`, `Some(false)` for `+`, `None` for pure shifts.
    pub negated: Option<bool>,
}

impl FromStr for FactorSymbol {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (body, negated) = match s.strip_suffix('-') {
            Some(b) => (b, Some(true)),
            None => match s.strip_suffix('+') {
                Some(b) => (b, Some(false)),
                None => (s, None),
            },
        };
        let base = match body {
            "0" => HalfPoint::ZERO,
            "1" => HalfPoint::ONE,
            "t" => HalfPoint::TAU,
            "1t" => HalfPoint::ONE_TAU,
            _ => return Err(CatalogError::BaseToken(body.to_string())),
        };
        Ok(FactorSymbol { base, negated })
    }
}

fn parse_triple(text: &str) -> Result<[FactorSymbol; 3], CatalogError> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| CatalogError::Symbol(text.to_string()))?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 3 {
        return Err(CatalogError::Symbol(text.to_string()));
    }
    Ok([parts[0].parse()?, parts[1].parse()?, parts[2].parse()?])
}

fn parse_twist(text: &str) -> Result<GroupElement, CatalogError> {
    let syms = parse_triple(text)?;
    let mut neg = [false; 3];
    for (i, s) in syms.iter().enumerate() {
        neg[i] = s.negated.ok_or_else(|| CatalogError::Symbol(text.to_string()))?;
    }
    let signs = Signs::from_negated(neg);
    if !signs.is_even() {
        return Err(CatalogError::OddTwist(text.trim().to_string()));
    }
    Ok(GroupElement::new(signs, syms.map(|s| s.base)))
}

fn parse_shift(text: &str) -> Result<GroupElement, CatalogError> {
    let syms = parse_triple(text)?;
    if syms.iter().any(|s| s.negated.is_some()) {
        return Err(CatalogError::SignedShift(text.trim().to_string()));
    }
    Ok(GroupElement::translation(syms.map(|s| s.base)))
}

/// One row of the catalog. Hodge numbers and `pi1` are expected values only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub label: Label,
    pub twists: [GroupElement; 2],
    pub shifts: Vec<GroupElement>,
    pub expected_hodge: (u32, u32),
    pub expected_pi1: Pi1Label,
}

impl CatalogEntry {
    pub fn generators(&self) -> Vec<GroupElement> {
        let mut g = self.twists.to_vec();
        g.extend(self.shifts.iter().copied());
        g
    }

    pub fn group(&self) -> GGroup {
        generate_group(&self.generators()).expect("catalog generators are valid")
    }

    pub fn is_rigid(&self) -> bool {
        self.expected_hodge.1 == 3
    }

    /// Canonical text of the row.
    pub fn render(&self) -> String {
        let shifts = if self.shifts.is_empty() {
            "-".to_string()
        } else {
            self.shifts.iter().map(GroupElement::render_shift).collect::<Vec<_>>().join(";")
        };
        format!(
            "{} | {} {} | {} | {} {} | {}",
            self.label,
            self.twists[0].render_signed(),
            self.twists[1].render_signed(),
            shifts,
            self.expected_hodge.0,
            self.expected_hodge.1,
            self.expected_pi1
        )
    }
}

/// Parse one non-comment catalog line.
pub fn parse_case_notation(text: &str) -> Result<CatalogEntry, CatalogError> {
    let fields: Vec<&str> = text.split('|').map(str::trim).collect();
    if fields.len() != 5 {
        return Err(CatalogError::FieldCount(fields.len()));
    }
    let label: Label = fields[0].parse()?;
    let twist_tokens: Vec<&str> = fields[1].split_whitespace().collect();
    let twists: Vec<GroupElement> = twist_tokens.iter().map(|t| parse_twist(t)).collect::<Result<_, _>>()?;
    if twists.len() != 2 {
        return Err(CatalogError::TwistCount(twists.len()));
    }

    let shifts: Vec<GroupElement> = if fields[2] == "-" {
        Vec::new()
    } else {
        fields[2].split(';').map(parse_shift).collect::<Result<_, _>>()?
    };
    if label.rank > 4 {
        return Err(CatalogError::Label(fields[0].to_string()));
    }
    if shifts.len() != label.rank as usize {
        return Err(CatalogError::ShiftCount { expected: label.rank as usize, found: shifts.len() });
    }

    let hodge: Vec<u32> = fields[3]
        .split_whitespace()
        .map(|v| v.parse().map_err(|_| CatalogError::Hodge(fields[3].to_string())))
        .collect::<Result<_, _>>()?;
    if hodge.len() != 2 {
        return Err(CatalogError::Hodge(fields[3].to_string()));
    }

    Ok(CatalogEntry {
        label,
        twists: [twists[0], twists[1]],
        shifts,
        expected_hodge: (hodge[0], hodge[1]),
        expected_pi1: fields[4].parse()?,
    })
}

/// Parse a whole catalog document and check it has the expected 35 rows.
pub fn load_catalog(source: &str) -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (n, raw) in source.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let entry = parse_case_notation(line)
            .map_err(|e| CatalogError::Line { line: n + 1, source: Box::new(e) })?;
        if entry.label == (Label { rank: 3, index: 2 }) {
            return Err(CatalogError::DeletedCase(entry.label));
        }
        if !seen.insert(entry.label) {
            return Err(CatalogError::Duplicate(entry.label));
        }
        entries.push(entry);
    }
    if entries.len() != CATALOG_SIZE {
        return Err(CatalogError::Count(entries.len()));
    }
    Ok(entries)
}

pub fn shipped() -> Vec<CatalogEntry> {
    load_catalog(SHIPPED).expect("shipped catalog is valid")
}

pub fn find<'a>(entries: &'a [CatalogEntry], label: &str) -> Option<&'a CatalogEntry> {
    let label: Label = label.parse().ok()?;
    entries.iter().find(|e| e.label == label)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rank_zero_row() {
        let e = parse_case_notation("0-1 | (0+,0-,0-) (0-,0+,0-) | - | 51 3 | 0").unwrap();
        assert_eq!(e.label, Label { rank: 0, index: 1 });
        assert_eq!(e.twists[0].signs, Signs::from_negated([false, true, true]));
        assert_eq!(e.twists[1].signs, Signs::from_negated([true, false, true]));
        assert!(e.twists.iter().all(|g| g.shift == [HalfPoint::ZERO; 3]));
        assert_eq!(e.expected_hodge, (51, 3));
        assert_eq!(e.expected_pi1, Pi1Label::Zero);
    }

    #[test]
    fn parses_shift_row() {
        let e = parse_case_notation("1-6 | (0+,0-,0-) (0-,0+,0-) | (t,t,0) | 31 7 | 0").unwrap();
        assert_eq!(e.shifts, vec![GroupElement::translation([HalfPoint::TAU, HalfPoint::TAU, HalfPoint::ZERO])]);
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(
            parse_case_notation("9-9 | (2+,0-,0-) | - | 0 0 | 0"),
            Err(CatalogError::BaseToken(_))
        ));
        assert!(matches!(
            parse_case_notation("9-9 | (0+,0-,0-) | - | 0 0 | 0"),
            Err(CatalogError::TwistCount(1))
        ));
        assert!(matches!(
            parse_case_notation("0-9 | (0-,0-,0-) (0-,0+,0-) | - | 1 1 | 0"),
            Err(CatalogError::OddTwist(_))
        ));
        assert!(matches!(
            parse_case_notation("1-9 | (0+,0-,0-) (0-,0+,0-) | (t+,t,0) | 1 1 | 0"),
            Err(CatalogError::SignedShift(_))
        ));
        assert!(matches!(
            parse_case_notation("2-9 | (0+,0-,0-) (0-,0+,0-) | (t,t,0) | 1 1 | 0"),
            Err(CatalogError::ShiftCount { expected: 2, found: 1 })
        ));
        assert!(matches!(parse_case_notation("0-9 | (0+,0-,0-) (0-,0+,0-) | - | 1 1 | E"), Err(CatalogError::Pi1(_))));
    }

    #[test]
    fn shipped_catalog_shape() {
        let cat = shipped();
        assert_eq!(cat.len(), 35);
        assert_eq!(cat[0].label.to_string(), "0-1");
        assert_eq!(cat[34].label.to_string(), "4-1");
        let rigid: Vec<String> = cat.iter().filter(|e| e.is_rigid()).map(|e| e.label.to_string()).collect();
        assert_eq!(rigid, RIGID_LABELS);
        let free: Vec<String> =
            cat.iter().filter(|e| e.expected_hodge == (3, 3)).map(|e| e.label.to_string()).collect();
        assert_eq!(free, ["0-4", "1-5", "1-11", "2-12"]);
        assert!(cat.iter().filter(|e| e.expected_hodge == (3, 3)).all(|e| e.expected_pi1 == Pi1Label::B));
    }

    #[test]
    fn round_trip() {
        for line in SHIPPED.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
            assert_eq!(parse_case_notation(line).unwrap().render(), line.trim());
        }
    }

    #[test]
    fn load_errors() {
        assert_eq!(load_catalog(""), Err(CatalogError::Count(0)));
        assert_eq!(load_catalog("# only a comment\n").unwrap_err().to_string(), "entry count 0 ≠ 35");
        let with_deleted = format!("{SHIPPED}3-2 | (0+,0-,0-) (0-,0+,0-) | (t,t,0);(1,1,0);(0,t,1) | 1 1 | 0\n");
        assert!(matches!(load_catalog(&with_deleted), Err(CatalogError::DeletedCase(_))));
        let dup = format!("{SHIPPED}0-1 | (0+,0-,0-) (0-,0+,0-) | - | 51 3 | 0\n");
        assert!(matches!(load_catalog(&dup), Err(CatalogError::Duplicate(_))));
        let broken = SHIPPED.replacen("(t,t,t) | 27 3", "(t,t,x) | 27 3", 1);
        assert!(matches!(load_catalog(&broken), Err(CatalogError::Line { .. })));
    }

    #[test]
    fn group_orders_follow_rank() {
        for e in shipped() {
            let g = e.group();
            assert_eq!(g.order(), 1 << (e.label.rank + 2), "{}", e.label);
            assert_eq!(g.rank(), Some(e.label.rank as u32));
            assert_eq!(g.shift_subgroup().len(), 1 << e.label.rank);
            assert_eq!(g.twist_patterns().len(), 4);
        }
    }
}
