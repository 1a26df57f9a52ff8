//! Groups of twists and half-period shifts on `E1 x E2 x E3`, and the finite
//! ambient group `L_max` whose conjugation action decides normalization.

pub mod exact;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Add;

use rand::Rng;
use thiserror::Error;

/// A point of order dividing 2 on one elliptic factor, i.e. an element of
/// `V = F2^2` in `(x, tau)` coordinates. Bit 0 is the `x` half, bit 1 the `tau` half.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct HalfPoint(u8);

impl HalfPoint {
    pub const ZERO: HalfPoint = HalfPoint(0);
    pub const ONE: HalfPoint = HalfPoint(1);
    pub const TAU: HalfPoint = HalfPoint(2);
    pub const ONE_TAU: HalfPoint = HalfPoint(3);
    pub const ALL: [HalfPoint; 4] = [Self::ZERO, Self::ONE, Self::TAU, Self::ONE_TAU];

    pub fn new(x: bool, tau: bool) -> Self {
        HalfPoint(x as u8 | (tau as u8) << 1)
    }
    pub fn from_bits(bits: u8) -> Self {
        HalfPoint(bits & 3)
    }
    pub fn bits(self) -> u8 {
        self.0
    }
    pub fn x(self) -> bool {
        self.0 & 1 == 1
    }
    pub fn tau(self) -> bool {
        self.0 & 2 == 2
    }
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
    /// Catalog token: `0`, `1`, `t` or `1t`.
    pub fn token(self) -> &'static str {
        ["0", "1", "t", "1t"][self.0 as usize]
    }
}

impl Add for HalfPoint {
    type Output = HalfPoint;
    fn add(self, rhs: HalfPoint) -> HalfPoint {
        HalfPoint(self.0 ^ rhs.0)
    }
}

/// A shift vector: one half-point per factor.
pub type HalfShift = [HalfPoint; 3];

pub fn add_shifts(a: HalfShift, b: HalfShift) -> HalfShift {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Sign pattern of a group element; bit `i` set means factor `i` is inverted.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Signs(u8);

impl Signs {
    pub const IDENTITY: Signs = Signs(0);
    /// The three nontrivial even patterns `(+,-,-)`, `(-,+,-)`, `(-,-,+)`.
    pub const TWISTS: [Signs; 3] = [Signs(0b110), Signs(0b101), Signs(0b011)];

    pub fn from_negated(neg: [bool; 3]) -> Self {
        Signs(neg[0] as u8 | (neg[1] as u8) << 1 | (neg[2] as u8) << 2)
    }
    pub fn is_negated(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }
    pub fn sign(self, i: usize) -> i64 {
        if self.is_negated(i) {
            -1
        } else {
            1
        }
    }
    pub fn is_even(self) -> bool {
        self.0.count_ones() % 2 == 0
    }
    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
    /// The untwisted factor of a genuine twist pattern.
    pub fn free_factor(self) -> Option<usize> {
        (self.0.count_ones() == 2).then(|| (0..3).find(|&i| !self.is_negated(i)).unwrap())
    }
    pub fn mul(self, rhs: Signs) -> Signs {
        Signs(self.0 ^ rhs.0)
    }
    pub fn bits(self) -> u8 {
        self.0
    }
}

impl fmt::Display for Signs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = (0..3).map(|i| if self.is_negated(i) { "-" } else { "+" }).collect();
        write!(f, "({})", s.join(","))
    }
}

/// An element of `G`: `z_i -> sign_i z_i + shift_i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct GroupElement {
    pub signs: Signs,
    pub shift: HalfShift,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { signs: Signs::IDENTITY, shift: [HalfPoint::ZERO; 3] };

    pub fn new(signs: Signs, shift: HalfShift) -> Self {
        GroupElement { signs, shift }
    }
    pub fn translation(shift: HalfShift) -> Self {
        GroupElement { signs: Signs::IDENTITY, shift }
    }
    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// Composition. Half-period shifts are fixed by negation, so the order of
    /// the two affine maps does not matter.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement { signs: self.signs.mul(other.signs), shift: add_shifts(self.shift, other.shift) }
    }

    /// Whether the element fixes some point of `Y`.
    pub fn has_fixed_points(&self) -> bool {
        match self.signs.free_factor() {
            Some(k) => self.shift[k].is_zero(),
            None => self.is_identity(),
        }
    }

    /// Catalog rendering with signs, e.g. `(0+,t-,1t-)`.
    pub fn render_signed(&self) -> String {
        let parts: Vec<String> = (0..3)
            .map(|i| format!("{}{}", self.shift[i].token(), if self.signs.is_negated(i) { '-' } else { '+' }))
            .collect();
        format!("({})", parts.join(","))
    }

    /// Catalog rendering of a pure shift, e.g. `(t,t,0)`.
    pub fn render_shift(&self) -> String {
        let parts: Vec<&str> = self.shift.iter().map(|h| h.token()).collect();
        format!("({})", parts.join(","))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.signs.is_identity() {
            f.write_str(&self.render_shift())
        } else {
            f.write_str(&self.render_signed())
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("no generators given")]
    NoGenerators,
    #[error("closure exceeded 256 elements")]
    TooLarge,
    #[error("generated order {0} is not a power of two")]
    NotPowerOfTwo(usize),
}

/// The finite abelian group generated by some twists and shifts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GGroup {
    pub generators: Vec<GroupElement>,
    /// Sorted, identity first.
    pub elements: Vec<GroupElement>,
}

pub fn generate_group(gens: &[GroupElement]) -> Result<GGroup, GroupError> {
    if gens.is_empty() {
        return Err(GroupError::NoGenerators);
    }
    let mut set = BTreeSet::from([GroupElement::IDENTITY]);
    let mut frontier = vec![GroupElement::IDENTITY];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.compose(g);
            if set.insert(y) {
                if set.len() > 256 {
                    return Err(GroupError::TooLarge);
                }
                frontier.push(y);
            }
        }
    }
    if !set.len().is_power_of_two() {
        return Err(GroupError::NotPowerOfTwo(set.len()));
    }
    Ok(GGroup { generators: gens.to_vec(), elements: set.into_iter().collect() })
}

impl GGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    /// `r` with `|G| = 2^(r+2)`; `None` when the order is below 4.
    pub fn rank(&self) -> Option<u32> {
        self.order().trailing_zeros().checked_sub(2)
    }
    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }
    pub fn shift_subgroup(&self) -> Vec<GroupElement> {
        self.elements.iter().filter(|g| g.signs.is_identity()).copied().collect()
    }
    pub fn twist_patterns(&self) -> BTreeSet<Signs> {
        self.elements.iter().map(|g| g.signs).collect()
    }
    /// Nontrivial elements with a nonempty fixed locus.
    pub fn fixed_point_elements(&self) -> Vec<GroupElement> {
        self.elements.iter().filter(|g| !g.is_identity() && g.has_fixed_points()).copied().collect()
    }
    pub fn is_free(&self) -> bool {
        self.fixed_point_elements().is_empty()
    }
}

/// `SL(2, F2)`, listed by the mod-2 classes of the fixed integer lifts.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub enum SBar {
    #[default]
    Id,
    S,
    T,
    R,
    ST,
    TS,
}

const fn mat2(a: i64, b: i64, c: i64, d: i64) -> [[i64; 2]; 2] {
    [[a, b], [c, d]]
}

impl SBar {
    pub const ALL: [SBar; 6] = [SBar::Id, SBar::S, SBar::T, SBar::R, SBar::ST, SBar::TS];

    pub fn index(self) -> usize {
        self as usize
    }
    pub fn from_index(i: usize) -> SBar {
        Self::ALL[i]
    }

    /// Fixed integer lift in `SL(2, Z)`.
    pub fn lift(self) -> [[i64; 2]; 2] {
        match self {
            SBar::Id => mat2(1, 0, 0, 1),
            SBar::S => mat2(0, 1, -1, 0),
            SBar::T => mat2(1, 1, 0, 1),
            SBar::R => mat2(1, 0, 1, 1),
            SBar::ST => mat2(0, 1, -1, -1),
            SBar::TS => mat2(-1, 1, -1, 0),
        }
    }

    pub fn mod2(self) -> [[u8; 2]; 2] {
        let m = self.lift();
        m.map(|row| row.map(|v| v.rem_euclid(2) as u8))
    }

    pub fn from_mod2(m: [[u8; 2]; 2]) -> Option<SBar> {
        Self::ALL.into_iter().find(|s| s.mod2() == m)
    }

    /// Reduce any integer matrix of odd determinant.
    pub fn reduce(m: [[i64; 2]; 2]) -> Option<SBar> {
        Self::from_mod2(m.map(|row| row.map(|v| v.rem_euclid(2) as u8)))
    }

    /// Column-vector action on `(x, tau)`.
    pub fn apply(self, v: HalfPoint) -> HalfPoint {
        let m = self.mod2();
        let (x, t) = (v.x() as u8, v.tau() as u8);
        HalfPoint::new((m[0][0] * x + m[0][1] * t) % 2 == 1, (m[1][0] * x + m[1][1] * t) % 2 == 1)
    }

    pub fn compose(self, rhs: SBar) -> SBar {
        let (a, b) = (self.mod2(), rhs.mod2());
        let mut c = [[0u8; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]) % 2;
            }
        }
        Self::from_mod2(c).expect("product of invertible matrices")
    }

    pub fn inverse(self) -> SBar {
        match self {
            SBar::ST => SBar::TS,
            SBar::TS => SBar::ST,
            s => s,
        }
    }

    pub fn word(self) -> &'static str {
        ["1", "s", "t", "r", "st", "ts"][self as usize]
    }
}

impl fmt::Display for SBar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.word())
    }
}

/// A permutation of the three factors; `self.0[k]` is the image of `k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm(pub [u8; 3]);

impl Default for Perm {
    fn default() -> Self {
        Perm::IDENTITY
    }
}

impl Perm {
    pub const IDENTITY: Perm = Perm([0, 1, 2]);
    /// Lexicographic order.
    pub const ALL: [Perm; 6] =
        [Perm([0, 1, 2]), Perm([0, 2, 1]), Perm([1, 0, 2]), Perm([1, 2, 0]), Perm([2, 0, 1]), Perm([2, 1, 0])];

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|p| *p == self).unwrap()
    }
    pub fn image(self, k: usize) -> usize {
        self.0[k] as usize
    }
    /// `(self * rhs)(k) = self(rhs(k))`.
    pub fn compose(self, rhs: Perm) -> Perm {
        Perm(rhs.0.map(|k| self.0[k as usize]))
    }
    pub fn inverse(self) -> Perm {
        let mut q = [0u8; 3];
        for k in 0..3 {
            q[self.0[k] as usize] = k as u8;
        }
        Perm(q)
    }
    pub fn transposition(a: usize, b: usize) -> Perm {
        let mut p = [0u8, 1, 2];
        p.swap(a, b);
        Perm(p)
    }
    pub fn is_identity(self) -> bool {
        self == Self::IDENTITY
    }
    pub fn fixed_points(self) -> usize {
        (0..3).filter(|&k| self.0[k] as usize == k).count()
    }

    /// Apply to a triple: entry `k` moves to slot `self(k)`.
    pub fn permute<T: Copy>(self, v: [T; 3]) -> [T; 3] {
        let inv = self.inverse();
        [v[inv.image(0)], v[inv.image(1)], v[inv.image(2)]]
    }
}

impl fmt::Display for Perm {
    /// Cycle notation on `{1,2,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.fixed_points() {
            3 => f.write_str("()"),
            1 => {
                let moved: Vec<usize> = (0..3).filter(|&k| self.image(k) != k).map(|k| k + 1).collect();
                write!(f, "({} {})", moved[0], moved[1])
            }
            _ => write!(f, "(1 {} {})", self.image(0) + 1, self.image(self.image(0)) + 1),
        }
    }
}

/// Element of `S^3 ⋊ S_3`, the image of `L_max` after forgetting translations.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct WreathElement {
    pub sbar: [SBar; 3],
    pub perm: Perm,
}

impl WreathElement {
    pub const IDENTITY: WreathElement = WreathElement { sbar: [SBar::Id; 3], perm: Perm::IDENTITY };

    pub fn new(sbar: [SBar; 3], perm: Perm) -> Self {
        WreathElement { sbar, perm }
    }

    pub fn compose(&self, rhs: &WreathElement) -> WreathElement {
        let moved = self.perm.permute(rhs.sbar);
        WreathElement {
            sbar: [self.sbar[0].compose(moved[0]), self.sbar[1].compose(moved[1]), self.sbar[2].compose(moved[2])],
            perm: self.perm.compose(rhs.perm),
        }
    }

    pub fn inverse(&self) -> WreathElement {
        let inv = self.perm.inverse();
        let s = inv.permute(self.sbar.map(SBar::inverse));
        WreathElement { sbar: s, perm: inv }
    }

    pub fn all() -> impl Iterator<Item = WreathElement> {
        (0..216 * 6).map(|i| {
            let s = i / 6;
            WreathElement {
                sbar: [SBar::from_index(s / 36), SBar::from_index(s / 6 % 6), SBar::from_index(s % 6)],
                perm: Perm::ALL[i % 6],
            }
        })
    }
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let has_sbar = self.sbar.iter().any(|s| *s != SBar::Id);
        if has_sbar || self.perm.is_identity() {
            write!(f, "({},{},{})", self.sbar[0], self.sbar[1], self.sbar[2])?;
        }
        if !self.perm.is_identity() {
            if has_sbar {
                f.write_str("·")?;
            }
            write!(f, "{}", self.perm)?;
        }
        Ok(())
    }
}

/// Order of `L_max = (Z/2)^6 ⋊ S^3 ⋊ S_3`.
pub const LMAX_ORDER: usize = 64 * 216 * 6;

/// Class of an ambient symmetry modulo half-translations and level-2 matrices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct LmaxElement {
    /// Quarter-translation classes; bit `x` (resp. `tau`) stands for `x/4` (resp. `tau/4`).
    pub eps: HalfShift,
    pub sbar: [SBar; 3],
    pub perm: Perm,
}

impl LmaxElement {
    pub const IDENTITY: LmaxElement =
        LmaxElement { eps: [HalfPoint::ZERO; 3], sbar: [SBar::Id; 3], perm: Perm::IDENTITY };

    pub fn translation(eps: HalfShift) -> Self {
        LmaxElement { eps, ..Self::IDENTITY }
    }

    pub fn wreath(&self) -> WreathElement {
        WreathElement { sbar: self.sbar, perm: self.perm }
    }

    fn act(&self, v: HalfShift) -> HalfShift {
        let moved = self.perm.permute(v);
        [self.sbar[0].apply(moved[0]), self.sbar[1].apply(moved[1]), self.sbar[2].apply(moved[2])]
    }

    /// `(e, g)(e', g') = (e + g e', g g')`.
    pub fn compose(&self, rhs: &LmaxElement) -> LmaxElement {
        let w = self.wreath().compose(&rhs.wreath());
        LmaxElement { eps: add_shifts(self.eps, self.act(rhs.eps)), sbar: w.sbar, perm: w.perm }
    }

    pub fn inverse(&self) -> LmaxElement {
        let w = self.wreath().inverse();
        let g = LmaxElement { eps: [HalfPoint::ZERO; 3], sbar: w.sbar, perm: w.perm };
        LmaxElement { eps: g.act(self.eps), sbar: w.sbar, perm: w.perm }
    }

    /// `l g l^-1` via the mod-2 formula.
    pub fn conjugate(&self, g: &GroupElement) -> GroupElement {
        let inv = self.perm.inverse();
        let signs = Signs::from_negated([
            g.signs.is_negated(inv.image(0)),
            g.signs.is_negated(inv.image(1)),
            g.signs.is_negated(inv.image(2)),
        ]);
        let mut shift = self.act(g.shift);
        for i in 0..3 {
            if signs.is_negated(i) {
                shift[i] = shift[i] + self.eps[i];
            }
        }
        GroupElement { signs, shift }
    }

    /// Position in the fixed enumeration order (lexicographic in eps, sbar, perm).
    pub fn index(&self) -> usize {
        let e = self.eps[0].bits() as usize * 16 + self.eps[1].bits() as usize * 4 + self.eps[2].bits() as usize;
        let s = self.sbar[0].index() * 36 + self.sbar[1].index() * 6 + self.sbar[2].index();
        (e * 216 + s) * 6 + self.perm.index()
    }

    pub fn from_index(i: usize) -> LmaxElement {
        assert!(i < LMAX_ORDER);
        let (e, rest) = (i / 1296, i % 1296);
        let (s, p) = (rest / 6, rest % 6);
        LmaxElement {
            eps: [
                HalfPoint::from_bits((e / 16) as u8),
                HalfPoint::from_bits((e / 4 % 4) as u8),
                HalfPoint::from_bits((e % 4) as u8),
            ],
            sbar: [SBar::from_index(s / 36), SBar::from_index(s / 6 % 6), SBar::from_index(s % 6)],
            perm: Perm::ALL[p],
        }
    }

    pub fn all() -> impl Iterator<Item = LmaxElement> {
        (0..LMAX_ORDER).map(LmaxElement::from_index)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> LmaxElement {
        LmaxElement::from_index(rng.gen_range(0..LMAX_ORDER))
    }
}

pub fn conjugate_by_lmax(l: &LmaxElement, g: &GroupElement) -> GroupElement {
    l.conjugate(g)
}

pub fn lmax_compose(a: &LmaxElement, b: &LmaxElement) -> LmaxElement {
    a.compose(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn twist(neg: [bool; 3], shift: HalfShift) -> GroupElement {
        GroupElement::new(Signs::from_negated(neg), shift)
    }

    fn arb_lmax() -> impl Strategy<Value = LmaxElement> {
        (0..LMAX_ORDER).prop_map(LmaxElement::from_index)
    }

    fn arb_element() -> impl Strategy<Value = GroupElement> {
        (0usize..4, 0u8..64).prop_map(|(p, bits)| {
            let signs = [Signs::IDENTITY, Signs::TWISTS[0], Signs::TWISTS[1], Signs::TWISTS[2]][p];
            let shift = [
                HalfPoint::from_bits(bits & 3),
                HalfPoint::from_bits(bits >> 2 & 3),
                HalfPoint::from_bits(bits >> 4 & 3),
            ];
            GroupElement::new(signs, shift)
        })
    }

    #[test]
    fn compose_examples() {
        let g = twist([false, true, true], [HalfPoint::TAU, HalfPoint::ZERO, HalfPoint::ONE]);
        assert_eq!(GroupElement::IDENTITY.compose(&g), g);
        let g1 = twist([false, true, true], [HalfPoint::ZERO; 3]);
        let g2 = twist([true, false, true], [HalfPoint::ZERO; 3]);
        assert_eq!(g1.compose(&g2), twist([true, true, false], [HalfPoint::ZERO; 3]));
        let a = GroupElement::translation([HalfPoint::TAU, HalfPoint::TAU, HalfPoint::ZERO]);
        let b = GroupElement::translation([HalfPoint::TAU; 3]);
        assert_eq!(a.compose(&b), GroupElement::translation([HalfPoint::ZERO, HalfPoint::ZERO, HalfPoint::TAU]));
    }

    #[test]
    fn generate_identity_only() {
        let g = generate_group(&[GroupElement::IDENTITY]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.rank(), None);
        assert_eq!(generate_group(&[]), Err(GroupError::NoGenerators));
    }

    #[test]
    fn sbar_table_is_sl2_f2() {
        let mats: BTreeSet<_> = SBar::ALL.iter().map(|s| s.mod2()).collect();
        assert_eq!(mats.len(), 6);
        for s in SBar::ALL {
            let m = s.lift();
            assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1);
            assert_eq!(s.compose(s.inverse()), SBar::Id);
        }
        assert_eq!(SBar::S.compose(SBar::T), SBar::ST);
        assert_eq!(SBar::T.compose(SBar::S), SBar::TS);
        // Borel subgroups: t fixes 1/2, r fixes tau/2, s fixes (1+tau)/2.
        assert_eq!(SBar::T.apply(HalfPoint::ONE), HalfPoint::ONE);
        assert_eq!(SBar::R.apply(HalfPoint::TAU), HalfPoint::TAU);
        assert_eq!(SBar::S.apply(HalfPoint::ONE_TAU), HalfPoint::ONE_TAU);
        assert_eq!(SBar::S.apply(HalfPoint::ONE), HalfPoint::TAU);
    }

    #[test]
    fn perm_rendering_and_law() {
        assert_eq!(Perm::transposition(0, 1).to_string(), "(1 2)");
        assert_eq!(Perm::IDENTITY.to_string(), "()");
        assert_eq!(Perm([1, 2, 0]).to_string(), "(1 2 3)");
        for a in Perm::ALL {
            assert_eq!(a.compose(a.inverse()), Perm::IDENTITY);
            assert_eq!(Perm::ALL[a.index()], a);
        }
        assert_eq!(Perm([1, 2, 0]).permute(['a', 'b', 'c']), ['c', 'a', 'b']);
    }

    #[test]
    fn conjugation_examples() {
        let g = twist([false, true, true], [HalfPoint::ZERO; 3]);
        assert_eq!(LmaxElement::IDENTITY.conjugate(&g), g);
        let l = LmaxElement::translation([HalfPoint::ZERO, HalfPoint::ONE, HalfPoint::ZERO]);
        assert_eq!(l.conjugate(&g), twist([false, true, true], [HalfPoint::ZERO, HalfPoint::ONE, HalfPoint::ZERO]));
        let l = LmaxElement { sbar: [SBar::S, SBar::Id, SBar::Id], ..LmaxElement::IDENTITY };
        let g = twist([true, false, true], [HalfPoint::ONE, HalfPoint::ZERO, HalfPoint::ZERO]);
        assert_eq!(l.conjugate(&g), twist([true, false, true], [HalfPoint::TAU, HalfPoint::ZERO, HalfPoint::ZERO]));
    }

    #[test]
    fn index_roundtrip_is_lexicographic() {
        let mut prev = None;
        for i in (0..LMAX_ORDER).step_by(37) {
            let l = LmaxElement::from_index(i);
            assert_eq!(l.index(), i);
            if let Some(p) = prev {
                assert!(p < (l.eps, l.sbar.map(SBar::index), l.perm.index()));
            }
            prev = Some((l.eps, l.sbar.map(SBar::index), l.perm.index()));
        }
    }

    proptest! {
        #[test]
        fn lmax_group_laws(a in arb_lmax(), b in arb_lmax(), c in arb_lmax()) {
            prop_assert_eq!(a.compose(&a.inverse()), LmaxElement::IDENTITY);
            prop_assert_eq!(a.inverse().compose(&a), LmaxElement::IDENTITY);
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }

        #[test]
        fn wreath_projection_is_homomorphism(a in arb_lmax(), b in arb_lmax()) {
            prop_assert_eq!(a.compose(&b).wreath(), a.wreath().compose(&b.wreath()));
        }

        #[test]
        fn conjugation_is_an_action(l in arb_lmax(), m in arb_lmax(), g in arb_element(), h in arb_element()) {
            prop_assert_eq!(l.conjugate(&g.compose(&h)), l.conjugate(&g).compose(&l.conjugate(&h)));
            prop_assert_eq!(l.conjugate(&l.conjugate(&g)), l.compose(&l).conjugate(&g));
            prop_assert_eq!(l.conjugate(&m.conjugate(&g)), l.compose(&m).conjugate(&g));
            prop_assert_eq!(l.conjugate(&GroupElement::IDENTITY), GroupElement::IDENTITY);
        }

        #[test]
        fn translations_commute(a in 0u8..64, b in 0u8..64) {
            let split = |v: u8| [HalfPoint::from_bits(v), HalfPoint::from_bits(v >> 2), HalfPoint::from_bits(v >> 4)];
            let (x, y) = (LmaxElement::translation(split(a)), LmaxElement::translation(split(b)));
            prop_assert_eq!(x.compose(&y), LmaxElement::translation(add_shifts(split(a), split(b))));
        }

        #[test]
        fn group_elements_are_involutions(g in arb_element()) {
            prop_assert!(g.compose(&g).is_identity());
        }
    }

    #[test]
    fn thousand_inverses() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = LmaxElement::random(&mut rng);
            assert_eq!(a.compose(&a.inverse()), LmaxElement::IDENTITY);
        }
    }
}
