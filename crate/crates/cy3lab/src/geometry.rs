//! Fixed loci, singular curve classes, trident points, Hodge numbers and the
//! fundamental group of crepant resolutions of `Y / G`.

pub mod lattice;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{CatalogEntry, Pi1Label};
use crate::group::{GGroup, GroupElement, HalfPoint, Signs};
use lattice::Lattice;

/// A point `z = (x + t tau) / 4` with `x, t` in `Z/4`; exactly the points with `2z`
/// a half-period.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TorsionCoordinate {
    pub x: u8,
    pub t: u8,
}

impl TorsionCoordinate {
    pub fn all() -> impl Iterator<Item = TorsionCoordinate> {
        (0..16).map(|i| TorsionCoordinate { x: i / 4, t: i % 4 })
    }

    /// The four solutions of `2z = delta`.
    pub fn halves(delta: HalfPoint) -> [TorsionCoordinate; 4] {
        let (x, t) = (delta.x() as u8, delta.tau() as u8);
        [(0, 0), (2, 0), (0, 2), (2, 2)].map(|(a, b)| TorsionCoordinate { x: x + a, t: t + b })
    }

    pub fn double(self) -> HalfPoint {
        HalfPoint::new(self.x % 2 == 1, self.t % 2 == 1)
    }

    /// `z -> sign z + shift`.
    pub fn act(self, sign: i64, shift: HalfPoint) -> TorsionCoordinate {
        let m = |v: u8, half: bool| ((sign * v as i64 + 2 * half as i64).rem_euclid(4)) as u8;
        TorsionCoordinate { x: m(self.x, shift.x()), t: m(self.t, shift.tau()) }
    }
}

impl fmt::Display for TorsionCoordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+{}τ)/4", self.x, self.t)
    }
}

/// One curve `E_k × {point}` in the fixed locus of a twist.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FixedComponent {
    pub element: GroupElement,
    pub free_factor: usize,
    /// Coordinates on the two twisted factors, in increasing factor order.
    pub coords: [TorsionCoordinate; 2],
}

impl FixedComponent {
    fn twisted(&self) -> [usize; 2] {
        twisted_factors(self.free_factor)
    }

    fn moved_by(&self, h: &GroupElement) -> FixedComponent {
        let [i, j] = self.twisted();
        FixedComponent {
            coords: [
                self.coords[0].act(h.signs.sign(i), h.shift[i]),
                self.coords[1].act(h.signs.sign(j), h.shift[j]),
            ],
            ..*self
        }
    }
}

fn twisted_factors(free: usize) -> [usize; 2] {
    let mut it = (0..3).filter(|&i| i != free);
    [it.next().unwrap(), it.next().unwrap()]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedLocus {
    Everything,
    Empty,
    Curves(Vec<FixedComponent>),
}

pub fn fixed_locus(g: &GroupElement) -> FixedLocus {
    if g.is_identity() {
        return FixedLocus::Everything;
    }
    let Some(k) = g.signs.free_factor() else { return FixedLocus::Empty };
    if !g.shift[k].is_zero() {
        return FixedLocus::Empty;
    }
    let [i, j] = twisted_factors(k);
    let mut out = Vec::with_capacity(16);
    for a in TorsionCoordinate::halves(g.shift[i]) {
        for b in TorsionCoordinate::halves(g.shift[j]) {
            out.push(FixedComponent { element: *g, free_factor: k, coords: [a, b] });
        }
    }
    FixedLocus::Curves(out)
}

#[derive(Clone, Debug)]
pub struct CurveClass {
    pub orbit: Vec<FixedComponent>,
    pub genus: u32,
    pub stabilizer: Vec<GroupElement>,
}

impl CurveClass {
    pub fn direction(&self) -> usize {
        self.orbit[0].free_factor
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("curve {0:?} is fixed by two different elements")]
    SharedComponent(FixedComponent),
    #[error("bulk Hodge numbers ({0}, {1}) differ from (3, 3)")]
    Bulk(u32, u32),
    #[error("translation lattice of rank {0} cannot be classified")]
    UnclassifiableRank(usize),
    #[error("finite quotient of order {0} is not 1, Z/2 or (Z/2)^2")]
    UnexpectedQuotient(u64),
    #[error("rank-2 quotient has torsion or top quotient of order {0}")]
    BadRankTwoQuotient(u64),
    #[error("random word in the fixed-point subgroup escaped the computed lattice")]
    Saturation,
}

pub fn curve_classes(group: &GGroup) -> Result<Vec<CurveClass>, GeometryError> {
    let mut components = Vec::new();
    let mut owners: HashSet<(usize, [TorsionCoordinate; 2])> = HashSet::new();
    for g in &group.elements {
        if let FixedLocus::Curves(cs) = fixed_locus(g) {
            for c in cs {
                if !owners.insert((c.free_factor, c.coords)) {
                    return Err(GeometryError::SharedComponent(c));
                }
                components.push(c);
            }
        }
    }
    let mut seen = HashSet::new();
    let mut classes = Vec::new();
    for c in components {
        if seen.contains(&c) {
            continue;
        }
        let orbit: BTreeSet<FixedComponent> = group.elements.iter().map(|h| c.moved_by(h)).collect();
        seen.extend(orbit.iter().copied());
        let stabilizer: Vec<GroupElement> = group.elements.iter().filter(|h| c.moved_by(h) == c).copied().collect();
        let genus = if stabilizer.iter().any(|h| h.signs.is_negated(c.free_factor)) { 0 } else { 1 };
        classes.push(CurveClass { orbit: orbit.into_iter().collect(), genus, stabilizer });
    }
    Ok(classes)
}

/// G-invariant monomials among `dz_i ∧ dz̄_j` and `dz_i ∧ dz_j ∧ dz̄_k`.
pub fn bulk_hodge(group: &GGroup) -> (u32, u32) {
    let invariant = |factors: &[usize]| {
        group.elements.iter().all(|g| factors.iter().map(|&i| g.signs.sign(i)).product::<i64>() == 1)
    };
    let mut h11 = 0;
    let mut h21 = 0;
    for i in 0..3 {
        for j in 0..3 {
            h11 += invariant(&[i, j]) as u32;
        }
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        for k in 0..3 {
            h21 += invariant(&[i, j, k]) as u32;
        }
    }
    (h11, h21)
}

pub fn hodge_numbers(group: &GGroup) -> Result<(u32, u32), GeometryError> {
    let (b11, b21) = bulk_hodge(group);
    if (b11, b21) != (3, 3) {
        return Err(GeometryError::Bulk(b11, b21));
    }
    let classes = curve_classes(group)?;
    Ok((b11 + classes.len() as u32, b21 + classes.iter().map(|c| c.genus).sum::<u32>()))
}

type Point = [TorsionCoordinate; 3];

fn move_point(h: &GroupElement, p: &Point) -> Point {
    std::array::from_fn(|i| p[i].act(h.signs.sign(i), h.shift[i]))
}

/// Points of `Y` fixed by elements of all three twist patterns, up to `G`.
pub fn trident_orbits(group: &GGroup) -> Vec<Vec<Point>> {
    let twisting: Vec<&GroupElement> = group.elements.iter().filter(|g| g.signs.free_factor().is_some()).collect();
    let all: Vec<TorsionCoordinate> = TorsionCoordinate::all().collect();
    let mut tridents = BTreeSet::new();
    for &a in &all {
        for &b in &all {
            for &c in &all {
                let p = [a, b, c];
                let patterns: BTreeSet<Signs> =
                    twisting.iter().filter(|g| move_point(g, &p) == p).map(|g| g.signs).collect();
                if patterns.len() == 3 {
                    tridents.insert(p);
                }
            }
        }
    }
    let mut orbits = Vec::new();
    let mut seen = HashSet::new();
    for p in &tridents {
        if seen.contains(p) {
            continue;
        }
        let orbit: BTreeSet<Point> = group.elements.iter().map(|h| move_point(h, p)).collect();
        seen.extend(orbit.iter().copied());
        orbits.push(orbit.into_iter().collect());
    }
    orbits
}

/// `4^t`: four local crepant resolutions at each of `t` trident points. An
/// upper bound on the global count since not every choice is Kähler.
pub fn resolution_choices(tridents: usize) -> BigUint {
    BigUint::from(4u32).pow(tridents as u32)
}

/// `u -> iota u + w` on `R^6` with `w` stored in units of `1/2`, coordinates
/// `(x_1, t_1, x_2, t_2, x_3, t_3)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct DeckMap {
    pub signs: Signs,
    pub half_trans: [i64; 6],
}

impl DeckMap {
    pub const IDENTITY: DeckMap = DeckMap { signs: Signs::IDENTITY, half_trans: [0; 6] };

    pub fn lift(g: &GroupElement) -> DeckMap {
        let mut w = [0; 6];
        for i in 0..3 {
            w[2 * i] = g.shift[i].x() as i64;
            w[2 * i + 1] = g.shift[i].tau() as i64;
        }
        DeckMap { signs: g.signs, half_trans: w }
    }

    pub fn translation(w: [i64; 6]) -> DeckMap {
        DeckMap { signs: Signs::IDENTITY, half_trans: w }
    }

    fn apply_linear(signs: Signs, v: &[i64; 6]) -> [i64; 6] {
        std::array::from_fn(|c| signs.sign(c / 2) * v[c])
    }

    pub fn compose(&self, rhs: &DeckMap) -> DeckMap {
        let moved = Self::apply_linear(self.signs, &rhs.half_trans);
        DeckMap { signs: self.signs.mul(rhs.signs), half_trans: std::array::from_fn(|c| self.half_trans[c] + moved[c]) }
    }

    pub fn inverse(&self) -> DeckMap {
        DeckMap { signs: self.signs, half_trans: Self::apply_linear(self.signs, &self.half_trans).map(|x| -x) }
    }

    /// Exact fixed point exists iff the untwisted coordinates of `w` vanish.
    pub fn has_fixed_point(&self) -> bool {
        (0..6).all(|c| self.signs.is_negated(c / 2) || self.half_trans[c] == 0)
    }
}

/// Subgroup of the deck group given by one coset `(iota_p, w_p + L)` per pattern.
#[derive(Clone, Debug)]
pub struct CosetSubgroup {
    pub translations: Lattice<6>,
    pub representatives: BTreeMap<Signs, [i64; 6]>,
}

impl CosetSubgroup {
    pub fn contains(&self, m: &DeckMap) -> bool {
        self.representatives.get(&m.signs).is_some_and(|w| {
            self.translations.contains(&std::array::from_fn(|c| m.half_trans[c] - w[c]))
        })
    }
}

fn diff(a: &[i64; 6], b: &[i64; 6]) -> [i64; 6] {
    std::array::from_fn(|c| a[c] - b[c])
}

/// Data about the deck group `π` of `R^6 -> Y/G`.
pub struct DeckGroup {
    /// Lifts of every element of `G` with half-translations in `{0, 1}`.
    pub lifts: Vec<DeckMap>,
    /// Translation subgroup of `π` in half units.
    pub translations: Lattice<6>,
    pub patterns: BTreeSet<Signs>,
}

impl DeckGroup {
    pub fn new(group: &GGroup) -> DeckGroup {
        let lifts: Vec<DeckMap> = group.elements.iter().map(DeckMap::lift).collect();
        let translations = Lattice::scaled_standard(2)
            .join(lifts.iter().filter(|m| m.signs.is_identity()).map(|m| m.half_trans));
        DeckGroup { lifts, translations, patterns: group.twist_patterns() }
    }

    fn generators(&self) -> impl Iterator<Item = DeckMap> + '_ {
        self.lifts.iter().copied().chain(self.translations.basis().iter().map(|&w| DeckMap::translation(w)))
    }

    /// Normal closure of the elements with fixed points.
    pub fn fixed_point_closure(&self) -> CosetSubgroup {
        let seeds: Vec<DeckMap> = self.lifts.iter().filter(|m| !m.signs.is_identity() && m.has_fixed_point()).copied().collect();
        let mut reps: BTreeMap<Signs, [i64; 6]> = BTreeMap::from([(Signs::IDENTITY, [0; 6])]);
        let mut extra: Vec<[i64; 6]> = Vec::new();
        for f in &seeds {
            match reps.get(&f.signs) {
                Some(w) => extra.push(diff(&f.half_trans, w)),
                None => {
                    reps.insert(f.signs, f.half_trans);
                }
            }
            // other lifts of the same element that still fix a point
            let free = f.signs.free_factor().unwrap();
            extra.extend(self.translations.vanishing_on(&[2 * free, 2 * free + 1]).basis().iter().copied());
        }
        let mut lat = Lattice::zero().join(extra);
        loop {
            let mut new = Vec::new();
            let cur: Vec<(Signs, [i64; 6])> = reps.iter().map(|(s, w)| (*s, *w)).collect();
            for &(sp, wp) in &cur {
                for &(sq, wq) in &cur {
                    let prod = DeckMap { signs: sp, half_trans: wp }.compose(&DeckMap { signs: sq, half_trans: wq });
                    match reps.get(&prod.signs) {
                        Some(w) => new.push(diff(&prod.half_trans, w)),
                        None => {
                            reps.insert(prod.signs, prod.half_trans);
                        }
                    }
                }
                for h in self.generators() {
                    let conj = h.compose(&DeckMap { signs: sp, half_trans: wp }).compose(&h.inverse());
                    new.push(diff(&conj.half_trans, &wp));
                }
            }
            for &iota in &self.patterns {
                new.extend(lat.basis().iter().map(|v| DeckMap::apply_linear(iota, v)));
            }
            let next = lat.join(new);
            if next == lat && reps.len() == cur.len() {
                return CosetSubgroup { translations: lat, representatives: reps };
            }
            lat = next;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Pi1Analysis {
    pub label: Pi1Label,
    pub lattice_rank: usize,
    /// Order of `π / N` when finite.
    pub finite_order: Option<u64>,
    pub words_checked: usize,
}

/// Random products of conjugates of fixed-point elements must stay in `N`.
fn saturation_check<R: Rng + ?Sized>(deck: &DeckGroup, n: &CosetSubgroup, rounds: usize, rng: &mut R) -> bool {
    let seeds: Vec<DeckMap> = deck.lifts.iter().filter(|m| !m.signs.is_identity() && m.has_fixed_point()).copied().collect();
    let gens: Vec<DeckMap> = deck.generators().collect();
    let random_ambient = |rng: &mut R| {
        let mut h = DeckMap::IDENTITY;
        for _ in 0..rng.gen_range(0..4) {
            let g = gens[rng.gen_range(0..gens.len())];
            let step = if rng.gen_bool(0.5) { g } else { g.inverse() };
            h = h.compose(&step);
        }
        h
    };
    for _ in 0..rounds {
        let mut word = DeckMap::IDENTITY;
        for _ in 0..rng.gen_range(1..=6) {
            let f = seeds[rng.gen_range(0..seeds.len())];
            let h = random_ambient(rng);
            word = word.compose(&h.compose(&f).compose(&h.inverse()));
        }
        if !n.contains(&word) {
            return false;
        }
    }
    true
}

pub fn classify_pi1<R: Rng + ?Sized>(group: &GGroup, rng: &mut R) -> Result<Pi1Analysis, GeometryError> {
    let deck = DeckGroup::new(group);
    if group.is_free() {
        return Ok(Pi1Analysis { label: Pi1Label::B, lattice_rank: 0, finite_order: None, words_checked: 0 });
    }
    let n = deck.fixed_point_closure();
    const ROUNDS: usize = 200;
    if !saturation_check(&deck, &n, ROUNDS, rng) {
        return Err(GeometryError::Saturation);
    }
    let rank = n.translations.rank();
    let top = (deck.patterns.len() / n.representatives.len()) as u64;
    let invariants = n.translations.relative_invariants(&deck.translations).expect("N-translations lie in π");
    match rank {
        6 => {
            let order = top * invariants.iter().map(|&d| d as u64).product::<u64>();
            let label = match order {
                1 => Pi1Label::Zero,
                2 => Pi1Label::C,
                4 if exponent_two(&deck, &n) => Pi1Label::D,
                other => return Err(GeometryError::UnexpectedQuotient(other)),
            };
            Ok(Pi1Analysis { label, lattice_rank: 6, finite_order: Some(order), words_checked: ROUNDS })
        }
        4 => {
            if top != 2 || invariants.iter().any(|&d| d != 1) {
                return Err(GeometryError::BadRankTwoQuotient(top));
            }
            Ok(Pi1Analysis { label: Pi1Label::A, lattice_rank: 4, finite_order: None, words_checked: ROUNDS })
        }
        r => Err(GeometryError::UnclassifiableRank(r)),
    }
}

/// Every square in `π` lies in `N`.
fn exponent_two(deck: &DeckGroup, n: &CosetSubgroup) -> bool {
    let squares_of_lifts = deck.lifts.iter().all(|m| n.contains(&m.compose(m)));
    let linear = deck.patterns.iter().all(|&iota| {
        deck.translations.basis().iter().all(|v| {
            let moved = DeckMap::apply_linear(iota, v);
            n.translations.contains(&std::array::from_fn(|c| v[c] + moved[c]))
        })
    });
    squares_of_lifts && linear
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveClassSummary {
    pub direction: usize,
    pub orbit_size: usize,
    pub genus: u32,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GeometryReport {
    pub label: String,
    pub free: bool,
    pub curve_classes: Vec<CurveClassSummary>,
    pub tridents: usize,
    pub resolution_choices_upper_bound: String,
    pub h11: u32,
    pub h21: u32,
    pub pi1: Pi1Label,
    pub matches_table3: bool,
}

pub fn analyze<R: Rng + ?Sized>(entry: &CatalogEntry, rng: &mut R) -> Result<GeometryReport, GeometryError> {
    let group = entry.group();
    let classes = curve_classes(&group)?;
    let (h11, h21) = hodge_numbers(&group)?;
    let tridents = trident_orbits(&group).len();
    let pi1 = classify_pi1(&group, rng)?.label;
    Ok(GeometryReport {
        label: entry.label.to_string(),
        free: group.is_free(),
        curve_classes: classes
            .iter()
            .map(|c| CurveClassSummary { direction: c.direction() + 1, orbit_size: c.orbit.len(), genus: c.genus })
            .collect(),
        tridents,
        resolution_choices_upper_bound: resolution_choices(tridents).to_string(),
        h11,
        h21,
        pi1,
        matches_table3: (h11, h21) == entry.expected_hodge && pi1 == entry.expected_pi1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{find, shipped};
    use crate::group::generate_group;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn group_of(label: &str) -> GGroup {
        find(&shipped(), label).unwrap().group()
    }

    #[test]
    fn fixed_locus_cases() {
        assert_eq!(fixed_locus(&GroupElement::IDENTITY), FixedLocus::Everything);
        let shift = GroupElement::translation([HalfPoint::ONE, HalfPoint::ZERO, HalfPoint::ZERO]);
        assert_eq!(fixed_locus(&shift), FixedLocus::Empty);
        let g1 = GroupElement::new(Signs::TWISTS[0], [HalfPoint::ZERO; 3]);
        let FixedLocus::Curves(cs) = fixed_locus(&g1) else { panic!() };
        assert_eq!(cs.len(), 16);
        assert!(cs.iter().all(|c| c.free_factor == 0));
        let moved = g1.compose(&GroupElement::translation([HalfPoint::TAU; 3]));
        assert_eq!(fixed_locus(&moved), FixedLocus::Empty);
    }

    #[test]
    fn case_zero_one_counts() {
        let g = group_of("0-1");
        let classes = curve_classes(&g).unwrap();
        assert_eq!(classes.len(), 48);
        assert!(classes.iter().all(|c| c.genus == 0 && c.orbit.len() == 1));
        for k in 0..3 {
            assert_eq!(classes.iter().filter(|c| c.direction() == k).count(), 16);
        }
        assert_eq!(trident_orbits(&g).len(), 64);
        assert_eq!(resolution_choices(64).to_string(), "340282366920938463463374607431768211456");
        assert_eq!(hodge_numbers(&g).unwrap(), (51, 3));
    }

    #[test]
    fn case_one_six_has_elliptic_classes() {
        let classes = curve_classes(&group_of("1-6")).unwrap();
        assert_eq!(classes.len(), 28);
        assert_eq!(classes.iter().map(|c| c.genus).sum::<u32>(), 4);
    }

    #[test]
    fn hodge_examples() {
        assert_eq!(hodge_numbers(&group_of("2-5")).unwrap(), (7, 7));
        assert_eq!(hodge_numbers(&group_of("1-2")).unwrap(), (15, 15));
        let free = group_of("0-4");
        assert!(curve_classes(&free).unwrap().is_empty());
        assert_eq!(trident_orbits(&free).len(), 0);
        assert_eq!(resolution_choices(0), BigUint::from(1u32));
    }

    #[test]
    fn pi1_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (label, expected) in [("0-1", Pi1Label::Zero), ("2-5", Pi1Label::D), ("0-3", Pi1Label::A), ("0-4", Pi1Label::B)] {
            assert_eq!(classify_pi1(&group_of(label), &mut rng).unwrap().label, expected, "{label}");
        }
    }

    #[test]
    fn relabeling_factors_preserves_counts() {
        let g = group_of("1-6");
        let cycle = |e: &GroupElement| {
            let neg = [e.signs.is_negated(2), e.signs.is_negated(0), e.signs.is_negated(1)];
            GroupElement::new(Signs::from_negated(neg), [e.shift[2], e.shift[0], e.shift[1]])
        };
        let h = generate_group(&g.generators.iter().map(cycle).collect::<Vec<_>>()).unwrap();
        let summary = |g: &GGroup| {
            let c = curve_classes(g).unwrap();
            (c.len(), c.iter().map(|c| c.genus).sum::<u32>())
        };
        assert_eq!(summary(&g), summary(&h));
        assert_eq!(hodge_numbers(&g).unwrap(), hodge_numbers(&h).unwrap());
    }

    #[test]
    fn bulk_is_three_three_everywhere() {
        for e in shipped() {
            assert_eq!(bulk_hodge(&e.group()), (3, 3), "{}", e.label);
        }
    }

    #[test]
    fn deck_maps_form_a_group() {
        let a = DeckMap { signs: Signs::TWISTS[0], half_trans: [1, 0, 1, 1, 0, 3] };
        let b = DeckMap { signs: Signs::TWISTS[2], half_trans: [2, 1, 0, 0, 1, 1] };
        assert_eq!(a.compose(&a.inverse()), DeckMap::IDENTITY);
        assert_eq!(a.compose(&b).inverse(), b.inverse().compose(&a.inverse()));
    }

    #[test]
    fn catalog_rows_match() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mismatches: Vec<String> = shipped()
            .iter()
            .map(|e| analyze(e, &mut rng).unwrap())
            .filter(|r| !r.matches_table3)
            .map(|r| format!("{} ({},{}) {}", r.label, r.h11, r.h21, r.pi1))
            .collect();
        assert!(mismatches.is_empty(), "{mismatches:?}");
    }

    fn half_point() -> impl Strategy<Value = HalfPoint> {
        (0u8..4).prop_map(HalfPoint::from_bits)
    }

    proptest! {
        #[test]
        fn torsion_sets_are_translation_invariant(delta in half_point(), shift in half_point()) {
            let set: BTreeSet<_> = TorsionCoordinate::halves(delta).into_iter().collect();
            let moved: BTreeSet<_> = set.iter().map(|z| z.act(1, shift)).collect();
            prop_assert_eq!(&set, &moved);
            let negated: BTreeSet<_> = set.iter().map(|z| z.act(-1, shift)).collect();
            prop_assert_eq!(&set, &negated);
            prop_assert!(set.iter().all(|z| z.double() == delta));
        }

        #[test]
        fn fixed_components_are_fixed(idx in 0usize..35, pick in any::<prop::sample::Index>()) {
            let entries = shipped();
            let g = entries[idx].group();
            let e = g.elements[pick.index(g.elements.len())];
            if let FixedLocus::Curves(cs) = fixed_locus(&e) {
                prop_assert_eq!(cs.len(), 16);
                for c in cs {
                    prop_assert_eq!(c.moved_by(&e), c);
                }
            }
        }
    }
}
