//! The image `L` of the normalizer of `G` in `L_max`, its projection `L0` to
//! `S^3 ⋊ S_3`, and recognition of `L0` among named subgroups.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::group::exact::HmaxElement;
use crate::group::{GGroup, HalfShift, LmaxElement, Perm, SBar, WreathElement};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NormalizerError {
    #[error("normalizer image is empty")]
    Empty,
    #[error("normalizer image is not closed under composition")]
    NotClosed,
    #[error("descended and exact conjugation disagree for {0} elements")]
    OracleDisagreement(usize),
}

/// Subgroup of `L_max`, sorted by enumeration index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LGroup {
    pub elements: Vec<LmaxElement>,
}

impl LGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, l: &LmaxElement) -> bool {
        self.elements.binary_search_by_key(&l.index(), LmaxElement::index).is_ok()
    }

    /// Pure quarter translations in `L`.
    pub fn translation_kernel(&self) -> Vec<HalfShift> {
        self.elements
            .iter()
            .filter(|l| l.sbar == [SBar::Id; 3] && l.perm.is_identity())
            .map(|l| l.eps)
            .collect()
    }

    pub fn l0(&self) -> BTreeSet<WreathElement> {
        self.elements.iter().map(LmaxElement::wreath).collect()
    }
}

pub fn normalizes(l: &LmaxElement, group: &GGroup) -> bool {
    group.generators.iter().all(|g| group.contains(&l.conjugate(g)))
}

/// All of `L_max` that conjugates the generators of `G` back into `G`.
pub fn compute_l(group: &GGroup) -> Result<LGroup, NormalizerError> {
    let elements: Vec<LmaxElement> = LmaxElement::all().filter(|l| normalizes(l, group)).collect();
    if elements.is_empty() {
        return Err(NormalizerError::Empty);
    }
    let l = LGroup { elements };
    let gens = generating_set(&l.elements, |a, b| a.compose(b), LmaxElement::IDENTITY);
    for a in &l.elements {
        for b in &gens {
            if !l.contains(&a.compose(b)) {
                return Err(NormalizerError::NotClosed);
            }
        }
    }
    Ok(l)
}

/// Greedy generating set: walk the elements in order, keep those not yet generated.
pub fn generating_set<T, F>(elements: &[T], mul: F, identity: T) -> Vec<T>
where
    T: Copy + Eq + std::hash::Hash,
    F: Fn(&T, &T) -> T,
{
    let mut gens = Vec::new();
    let mut span: HashSet<T> = HashSet::from([identity]);
    for x in elements {
        if span.contains(x) {
            continue;
        }
        gens.push(*x);
        span = closure(&gens, &mul, identity);
    }
    gens
}

pub fn closure<T, F>(gens: &[T], mul: &F, identity: T) -> HashSet<T>
where
    T: Copy + Eq + std::hash::Hash,
    F: Fn(&T, &T) -> T,
{
    let mut set = HashSet::from([identity]);
    let mut frontier = vec![identity];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = mul(&x, g);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}

/// The three Borel subgroups of `S`, each the stabilizer of a nonzero half-point.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub enum Borel {
    /// Stabilizer of `1/2`, generated by `t`.
    B1,
    /// Stabilizer of `tau/2`, generated by `r`.
    B2,
    /// Stabilizer of `(1+tau)/2`, generated by `s`.
    B3,
}

impl Borel {
    pub const ALL: [Borel; 3] = [Borel::B1, Borel::B2, Borel::B3];

    pub fn generator(self) -> SBar {
        match self {
            Borel::B1 => SBar::T,
            Borel::B2 => SBar::R,
            Borel::B3 => SBar::S,
        }
    }
    pub fn elements(self) -> [SBar; 2] {
        [SBar::Id, self.generator()]
    }
    fn number(self) -> usize {
        self as usize + 1
    }
}

/// A subgroup of `S` that can sit in one slot of a product subgroup.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub enum Slot {
    Trivial,
    Borel(Borel),
    Full,
}

impl Slot {
    pub fn elements(self) -> Vec<SBar> {
        match self {
            Slot::Trivial => vec![SBar::Id],
            Slot::Borel(b) => b.elements().to_vec(),
            Slot::Full => SBar::ALL.to_vec(),
        }
    }

    fn recognize(set: &BTreeSet<SBar>) -> Option<Slot> {
        [Slot::Trivial, Slot::Borel(Borel::B1), Slot::Borel(Borel::B2), Slot::Borel(Borel::B3), Slot::Full]
            .into_iter()
            .find(|s| s.elements().into_iter().collect::<BTreeSet<_>>() == *set)
    }

    fn render(self) -> String {
        match self {
            Slot::Trivial => "1".into(),
            Slot::Borel(b) => format!("B_{}", b.number()),
            Slot::Full => "S".into(),
        }
    }
}

/// Named shapes of `L0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum L0Tag {
    /// All of `S^3 ⋊ S_3`.
    Full,
    BorelCube(Borel),
    /// `{b in B_i^3 : b1 b2 b3 = 1} ⋊ S_3`.
    BorelTilde(Borel),
    /// Diagonal `S` times `S_3`.
    Diagonal,
    /// Product of slot subgroups, extended by one transposition.
    MixedPair { slots: [Slot; 3], swap: (usize, usize) },
    /// Order-6 normal subgroup with bijective projections, not the diagonal,
    /// with quotient `S_3`; splitting is reported separately.
    Case41,
    Raw,
}

impl fmt::Display for L0Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            L0Tag::Full => f.write_str("S^3⋊S_3"),
            L0Tag::BorelCube(b) => write!(f, "B_{}^3⋊S_3", b.number()),
            L0Tag::BorelTilde(b) => write!(f, "B̃_{}⋊S_3", b.number()),
            L0Tag::Diagonal => f.write_str("S⋊S_3"),
            L0Tag::MixedPair { slots, swap } => {
                let mut parts: Vec<(Slot, usize)> = Vec::new();
                for s in slots {
                    match parts.last_mut() {
                        Some((prev, n)) if prev == s => *n += 1,
                        _ => parts.push((*s, 1)),
                    }
                }
                let body: Vec<String> = parts
                    .iter()
                    .map(|(s, n)| if *n == 1 { s.render() } else { format!("{}^{}", s.render(), n) })
                    .collect();
                write!(f, "({})⋊⟨{}⟩", body.join("×"), Perm::transposition(swap.0, swap.1))
            }
            L0Tag::Case41 => f.write_str("N.S_3, N=⟨(t,s,r),(s,r,t),(r,t,s)⟩"),
            L0Tag::Raw => f.write_str("raw"),
        }
    }
}

fn product(slots: [Slot; 3]) -> Vec<[SBar; 3]> {
    let mut out = Vec::new();
    for a in slots[0].elements() {
        for b in slots[1].elements() {
            for c in slots[2].elements() {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn split_extension(normal: &[[SBar; 3]], perms: &[Perm]) -> BTreeSet<WreathElement> {
    normal.iter().flat_map(|n| perms.iter().map(move |p| WreathElement::new(*n, *p))).collect()
}

fn borel_tilde(b: Borel) -> Vec<[SBar; 3]> {
    let x = b.generator();
    let id = SBar::Id;
    vec![[id, id, id], [x, x, id], [x, id, x], [id, x, x]]
}

/// The normal subgroup for the exceptional rigid case.
pub fn case41_normal() -> BTreeSet<[SBar; 3]> {
    let gens = [
        WreathElement::new([SBar::T, SBar::S, SBar::R], Perm::IDENTITY),
        WreathElement::new([SBar::S, SBar::R, SBar::T], Perm::IDENTITY),
        WreathElement::new([SBar::R, SBar::T, SBar::S], Perm::IDENTITY),
    ];
    closure(&gens, &|a: &WreathElement, b: &WreathElement| a.compose(b), WreathElement::IDENTITY)
        .into_iter()
        .map(|w| w.sbar)
        .collect()
}

/// Reference subgroup for a tag. `Case41` and `Raw` have none.
pub fn reference(tag: &L0Tag) -> Option<BTreeSet<WreathElement>> {
    let all_perms = Perm::ALL;
    Some(match tag {
        L0Tag::Full => split_extension(&product([Slot::Full; 3]), &all_perms),
        L0Tag::BorelCube(b) => split_extension(&product([Slot::Borel(*b); 3]), &all_perms),
        L0Tag::BorelTilde(b) => split_extension(&borel_tilde(*b), &all_perms),
        L0Tag::Diagonal => {
            let diag: Vec<[SBar; 3]> = SBar::ALL.iter().map(|&s| [s; 3]).collect();
            split_extension(&diag, &all_perms)
        }
        L0Tag::MixedPair { slots, swap } => {
            split_extension(&product(*slots), &[Perm::IDENTITY, Perm::transposition(swap.0, swap.1)])
        }
        L0Tag::Case41 | L0Tag::Raw => return None,
    })
}

#[derive(Clone, Debug)]
pub struct Case41Checks {
    pub normal_matches: bool,
    pub projections_bijective: bool,
    pub not_diagonal: bool,
    pub quotient_is_s3: bool,
    /// No subgroup of `L0` maps isomorphically onto `S_3`.
    pub non_split: bool,
    /// Generators of a complement to `N`, when one exists.
    pub complement: Option<[WreathElement; 2]>,
    /// Whether the pure factor permutations lie in `L0`.
    pub contains_pure_permutations: bool,
}

impl Case41Checks {
    /// The shape of the normal subgroup and quotient, ignoring splitting.
    pub fn shape(&self) -> bool {
        self.normal_matches && self.projections_bijective && self.not_diagonal && self.quotient_is_s3
    }
}

/// Structural checks for the exceptional shape.
pub fn case41_checks(l0: &BTreeSet<WreathElement>) -> Case41Checks {
    let normal: BTreeSet<[SBar; 3]> = l0.iter().filter(|w| w.perm.is_identity()).map(|w| w.sbar).collect();
    let perms: BTreeSet<Perm> = l0.iter().map(|w| w.perm).collect();
    let projections_bijective =
        (0..3).all(|i| normal.iter().map(|n| n[i]).collect::<BTreeSet<_>>().len() == 6) && normal.len() == 6;
    let not_diagonal = normal.iter().any(|n| n[0] != n[1] || n[1] != n[2]);
    let quotient_is_s3 = perms.len() == 6 && l0.len() == 6 * normal.len();
    // A complement would be an order-6 subgroup meeting N trivially; it is
    // generated by lifts of two transpositions.
    let lifts = |p: Perm| l0.iter().filter(move |w| w.perm == p).copied().collect::<Vec<_>>();
    let mul = |a: &WreathElement, b: &WreathElement| a.compose(b);
    let mut complement = None;
    'search: for a in lifts(Perm::transposition(0, 1)) {
        for b in lifts(Perm::transposition(1, 2)) {
            if closure(&[a, b], &mul, WreathElement::IDENTITY).len() == 6 {
                complement = Some([a, b]);
                break 'search;
            }
        }
    }
    Case41Checks {
        normal_matches: normal == case41_normal(),
        projections_bijective,
        not_diagonal,
        quotient_is_s3,
        non_split: complement.is_none(),
        complement,
        contains_pure_permutations: Perm::ALL.iter().all(|&p| l0.contains(&WreathElement::new([SBar::Id; 3], p))),
    }
}

#[derive(Clone, Debug)]
pub struct L0Descriptor {
    pub elements: BTreeSet<WreathElement>,
    pub tag: L0Tag,
    pub generators: Vec<WreathElement>,
    pub translation_kernel: Vec<HalfShift>,
}

impl L0Descriptor {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Match a subgroup of `S^3 ⋊ S_3` against the named shapes.
pub fn classify_l0(l0: &BTreeSet<WreathElement>) -> L0Tag {
    let normal: Vec<[SBar; 3]> = l0.iter().filter(|w| w.perm.is_identity()).map(|w| w.sbar).collect();
    let perms: BTreeSet<Perm> = l0.iter().map(|w| w.perm).collect();
    let slots: Option<Vec<Slot>> = (0..3)
        .map(|i| Slot::recognize(&normal.iter().map(|n| n[i]).collect()))
        .collect();
    let mut candidates = Vec::new();
    if perms.len() == 6 {
        candidates.push(L0Tag::Full);
        candidates.extend(Borel::ALL.map(L0Tag::BorelCube));
        candidates.extend(Borel::ALL.map(L0Tag::BorelTilde));
        candidates.push(L0Tag::Diagonal);
    }
    if let (Some(slots), 2) = (slots, perms.len()) {
        if let Some(p) = perms.iter().find(|p| !p.is_identity()) {
            if p.fixed_points() == 1 {
                let moved: Vec<usize> = (0..3).filter(|&k| p.image(k) != k).collect();
                candidates.push(L0Tag::MixedPair { slots: [slots[0], slots[1], slots[2]], swap: (moved[0], moved[1]) });
            }
        }
    }
    for tag in candidates {
        if reference(&tag).as_ref() == Some(l0) {
            return tag;
        }
    }
    if case41_checks(l0).shape() {
        return L0Tag::Case41;
    }
    L0Tag::Raw
}

pub fn describe_l0(l: &LGroup) -> L0Descriptor {
    let elements = l.l0();
    let sorted: Vec<WreathElement> = elements.iter().copied().collect();
    let generators = generating_set(&sorted, |a, b| a.compose(b), WreathElement::IDENTITY);
    L0Descriptor { tag: classify_l0(&elements), elements, generators, translation_kernel: l.translation_kernel() }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub checked: usize,
    pub agreed: usize,
}

impl OracleReport {
    pub fn all_agree(&self) -> bool {
        self.checked == self.agreed
    }
}

/// Compare descended conjugation with exact affine conjugation on random
/// ambient elements (and on generators of `L`), each lifted randomly.
pub fn brute_force_normalizer_check<R: Rng + ?Sized>(
    group: &GGroup,
    extra: &[LmaxElement],
    samples: usize,
    rng: &mut R,
) -> OracleReport {
    let mut checked = 0;
    let mut agreed = 0;
    let candidates: Vec<LmaxElement> =
        extra.iter().copied().chain((0..samples).map(|_| LmaxElement::random(rng))).collect();
    for l in candidates {
        let h = HmaxElement::random_lift(&l, rng);
        let ok = group.generators.iter().all(|g| {
            let descended = l.conjugate(g);
            let exact = h.conjugate(g);
            exact == Some(descended) && group.contains(&descended) == exact.is_some_and(|e| group.contains(&e))
        });
        checked += 1;
        agreed += ok as usize;
    }
    OracleReport { checked, agreed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::group::{generate_group, GroupElement};
    use rand::SeedableRng;

    fn case(label: &str) -> GGroup {
        catalog::find(&catalog::shipped(), label).unwrap().group()
    }

    #[test]
    fn trivial_group_normalized_by_everything() {
        let g = generate_group(&[GroupElement::IDENTITY]).unwrap();
        assert_eq!(compute_l(&g).unwrap().order(), crate::group::LMAX_ORDER);
    }

    #[test]
    fn case_0_1_is_full() {
        let l = compute_l(&case("0-1")).unwrap();
        assert_eq!(l.order(), 1296);
        let d = describe_l0(&l);
        assert_eq!(d.tag, L0Tag::Full);
        assert_eq!(d.translation_kernel.len(), 1);
    }

    #[test]
    fn borel_cube_for_1_1() {
        let d = describe_l0(&compute_l(&case("1-1")).unwrap());
        assert_eq!(d.tag, L0Tag::BorelCube(Borel::B2));
        assert_eq!(d.order(), 48);
        assert_eq!(d.tag.to_string(), "B_2^3⋊S_3");
    }

    #[test]
    fn mixed_pair_for_1_11() {
        let d = describe_l0(&compute_l(&case("1-11")).unwrap());
        let tag = L0Tag::MixedPair { slots: [Slot::Borel(Borel::B2), Slot::Borel(Borel::B2), Slot::Borel(Borel::B1)], swap: (0, 1) };
        assert_eq!(d.tag, tag);
        assert_eq!(d.tag.to_string(), "(B_2^2×B_1)⋊⟨(1 2)⟩");
    }

    #[test]
    fn exceptional_case() {
        let d = describe_l0(&compute_l(&case("4-1")).unwrap());
        assert_eq!(d.tag, L0Tag::Case41);
        let checks = case41_checks(&d.elements);
        assert!(checks.shape());
        assert!(!checks.contains_pure_permutations);
        // A complement exists, twisted by the diagonal copy of s.
        let [a, b] = checks.complement.unwrap();
        assert!(a.perm.fixed_points() == 1 && b.perm.fixed_points() == 1);
        assert_eq!(d.translation_kernel.len(), 4);
    }

    #[test]
    fn reference_shapes_are_subgroups() {
        let mul = |a: &WreathElement, b: &WreathElement| a.compose(b);
        let tags = [
            L0Tag::Full,
            L0Tag::BorelCube(Borel::B3),
            L0Tag::BorelTilde(Borel::B1),
            L0Tag::Diagonal,
            L0Tag::MixedPair { slots: [Slot::Trivial, Slot::Borel(Borel::B1), Slot::Borel(Borel::B1)], swap: (1, 2) },
        ];
        for tag in tags {
            let r = reference(&tag).unwrap();
            let v: Vec<_> = r.iter().copied().collect();
            let span = closure(&v, &mul, WreathElement::IDENTITY);
            assert_eq!(span.len(), r.len(), "{tag}");
        }
        assert_eq!(case41_normal().len(), 6);
    }

    #[test]
    fn tag_rendering() {
        let t = L0Tag::MixedPair { slots: [Slot::Trivial, Slot::Borel(Borel::B1), Slot::Borel(Borel::B1)], swap: (1, 2) };
        assert_eq!(t.to_string(), "(1×B_1^2)⋊⟨(2 3)⟩");
        assert_eq!(L0Tag::BorelTilde(Borel::B2).to_string(), "B̃_2⋊S_3");
    }

    #[test]
    fn generator_membership_implies_group_membership() {
        for label in ["0-1", "2-5", "4-1"] {
            let g = case(label);
            let l = compute_l(&g).unwrap();
            for x in l.elements.iter().step_by(7) {
                assert!(g.elements.iter().all(|e| g.contains(&x.conjugate(e))));
            }
        }
    }

    #[test]
    fn oracle_agrees() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for label in ["0-1", "2-5"] {
            let g = case(label);
            let r = brute_force_normalizer_check(&g, &[LmaxElement::IDENTITY], 500, &mut rng);
            assert_eq!(r.checked, 501);
            assert!(r.all_agree());
        }
    }
}
