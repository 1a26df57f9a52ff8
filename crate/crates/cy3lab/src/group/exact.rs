//! Exact affine maps on the real torus `R^6 / Z^6`, used to cross-check the
//! mod-2 conjugation formula.
//!
//! Coordinates are `u = (x_1, t_1, x_2, t_2, x_3, t_3)` with `z_i = x_i + t_i tau_i`.
//! A matrix `(a b; c d)` of `SL(2, Z)` acts on a factor through `(a -b; -c d)`
//! in these coordinates, matching `eps' = (a eps_0 - b eps_1, -c eps_0 + d eps_1)`.

use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::Rng;

use super::{GroupElement, HalfPoint, LmaxElement, Perm, SBar, Signs};

pub type Q = Ratio<i64>;
pub type Mat2 = [[i64; 2]; 2];

fn frac(v: Q) -> Q {
    v - v.floor()
}

/// `u -> lin * u + trans (mod Z^6)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub lin: [[i64; 6]; 6],
    pub trans: [Q; 6],
}

impl Affine {
    pub fn identity() -> Affine {
        let mut lin = [[0; 6]; 6];
        for (i, row) in lin.iter_mut().enumerate() {
            row[i] = 1;
        }
        Affine { lin, trans: [Q::zero(); 6] }
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &Affine) -> Affine {
        let mut lin = [[0; 6]; 6];
        let mut trans = [Q::zero(); 6];
        for i in 0..6 {
            for j in 0..6 {
                lin[i][j] = (0..6).map(|k| self.lin[i][k] * rhs.lin[k][j]).sum();
            }
            let moved: Q = (0..6).map(|k| Q::from_integer(self.lin[i][k]) * rhs.trans[k]).sum();
            trans[i] = frac(moved + self.trans[i]);
        }
        Affine { lin, trans }
    }

    pub fn inverse(&self) -> Affine {
        let inv = invert6(&self.lin);
        let mut trans = [Q::zero(); 6];
        for i in 0..6 {
            let moved: Q = (0..6).map(|k| Q::from_integer(inv[i][k]) * self.trans[k]).sum();
            trans[i] = frac(-moved);
        }
        Affine { lin: inv, trans }
    }

    pub fn from_group_element(g: &GroupElement) -> Affine {
        let mut a = Affine::identity();
        let half = Q::new(1, 2);
        for i in 0..3 {
            let s = g.signs.sign(i);
            a.lin[2 * i][2 * i] = s;
            a.lin[2 * i + 1][2 * i + 1] = s;
            if g.shift[i].x() {
                a.trans[2 * i] = half;
            }
            if g.shift[i].tau() {
                a.trans[2 * i + 1] = half;
            }
        }
        a
    }

    /// Reads the map back as a twist/shift element, if it is one.
    pub fn to_group_element(&self) -> Option<GroupElement> {
        let mut neg = [false; 3];
        for i in 0..6 {
            for j in 0..6 {
                let v = self.lin[i][j];
                if i != j && v != 0 {
                    return None;
                }
            }
        }
        for i in 0..3 {
            let (a, b) = (self.lin[2 * i][2 * i], self.lin[2 * i + 1][2 * i + 1]);
            if a != b || a.abs() != 1 {
                return None;
            }
            neg[i] = a == -1;
        }
        let half = Q::new(1, 2);
        let mut shift = [HalfPoint::ZERO; 3];
        for i in 0..3 {
            let (x, t) = (self.trans[2 * i], self.trans[2 * i + 1]);
            for v in [x, t] {
                if !(v.is_zero() || v == half) {
                    return None;
                }
            }
            shift[i] = HalfPoint::new(x == half, t == half);
        }
        Some(GroupElement { signs: Signs::from_negated(neg), shift })
    }
}

/// Inverse of a unimodular integer matrix by exact Gauss-Jordan elimination.
fn invert6(m: &[[i64; 6]; 6]) -> [[i64; 6]; 6] {
    let mut a: Vec<Vec<Q>> = (0..6)
        .map(|i| {
            let mut row: Vec<Q> = m[i].iter().map(|&v| Q::from_integer(v)).collect();
            row.extend((0..6).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for col in 0..6 {
        let piv = (col..6).find(|&r| !a[r][col].is_zero()).expect("singular matrix");
        a.swap(col, piv);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for r in 0..6 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in 0..12 {
                    let sub = f * a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
    }
    let mut out = [[0; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            let v = a[i][6 + j];
            assert!(v.is_integer(), "inverse is not integral");
            out[i][j] = v.to_integer();
        }
    }
    out
}

fn mat_mul(a: Mat2, b: Mat2) -> Mat2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// An element of `(Z/4)^6 ⋊ SL(2,Z)^3 ⋊ S_3`, kept as exact data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HmaxElement {
    /// Translation in lattice coordinates; entries are quarters.
    pub eps: [Q; 6],
    pub gamma: [Mat2; 3],
    pub perm: Perm,
}

impl HmaxElement {
    /// The fixed lift: quarter bits become `1/4`, matrices the table lifts.
    pub fn canonical_lift(l: &LmaxElement) -> HmaxElement {
        let q = Q::new(1, 4);
        let mut eps = [Q::zero(); 6];
        for i in 0..3 {
            if l.eps[i].x() {
                eps[2 * i] = q;
            }
            if l.eps[i].tau() {
                eps[2 * i + 1] = q;
            }
        }
        HmaxElement { eps, gamma: l.sbar.map(SBar::lift), perm: l.perm }
    }

    /// A lift perturbed by random half-translations and level-2 matrices.
    pub fn random_lift<R: Rng + ?Sized>(l: &LmaxElement, rng: &mut R) -> HmaxElement {
        let mut h = Self::canonical_lift(l);
        for e in h.eps.iter_mut() {
            *e = frac(*e + Q::new(rng.gen_range(0..2), 2));
        }
        let level2: [Mat2; 5] = [[[-1, 0], [0, -1]], [[1, 2], [0, 1]], [[1, -2], [0, 1]], [[1, 0], [2, 1]], [[1, 0], [-2, 1]]];
        for g in h.gamma.iter_mut() {
            for _ in 0..rng.gen_range(0..4) {
                *g = mat_mul(*g, level2[rng.gen_range(0..level2.len())]);
            }
        }
        h
    }

    pub fn to_affine(&self) -> Affine {
        let mut lin = [[0; 6]; 6];
        for i in 0..3 {
            let j = self.perm.inverse().image(i);
            let [[a, b], [c, d]] = self.gamma[i];
            let block = [[a, -b], [-c, d]];
            for r in 0..2 {
                for s in 0..2 {
                    lin[2 * i + r][2 * j + s] = block[r][s];
                }
            }
        }
        Affine { lin, trans: self.eps.map(frac) }
    }

    /// Reduction to `L_max`.
    pub fn project(&self) -> LmaxElement {
        let bit = |v: Q| {
            let n = v * Q::from_integer(4);
            assert!(n.is_integer(), "translation is not a quarter point");
            n.to_integer().rem_euclid(2) == 1
        };
        let mut eps = [HalfPoint::ZERO; 3];
        for i in 0..3 {
            eps[i] = HalfPoint::new(bit(self.eps[2 * i]), bit(self.eps[2 * i + 1]));
        }
        LmaxElement {
            eps,
            sbar: self.gamma.map(|g| SBar::reduce(g).expect("determinant one")),
            perm: self.perm,
        }
    }

    /// Product as affine maps, read back as an `H_max` element.
    pub fn compose(&self, rhs: &HmaxElement) -> HmaxElement {
        let a = self.to_affine().compose(&rhs.to_affine());
        let perm = self.perm.compose(rhs.perm);
        let mut gamma = [[[0; 2]; 2]; 3];
        for i in 0..3 {
            let j = perm.inverse().image(i);
            let b = [[a.lin[2 * i][2 * j], a.lin[2 * i][2 * j + 1]], [a.lin[2 * i + 1][2 * j], a.lin[2 * i + 1][2 * j + 1]]];
            gamma[i] = [[b[0][0], -b[0][1]], [-b[1][0], b[1][1]]];
        }
        HmaxElement { eps: a.trans, gamma, perm }
    }

    /// `h g h^-1` computed on affine maps.
    pub fn conjugate(&self, g: &GroupElement) -> Option<GroupElement> {
        let h = self.to_affine();
        h.compose(&Affine::from_group_element(g)).compose(&h.inverse()).to_group_element()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn projection_is_homomorphism() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let (a, b) = (LmaxElement::random(&mut rng), LmaxElement::random(&mut rng));
            let (ha, hb) = (HmaxElement::random_lift(&a, &mut rng), HmaxElement::random_lift(&b, &mut rng));
            assert_eq!(ha.project(), a);
            assert_eq!(ha.compose(&hb).project(), a.compose(&b));
        }
    }

    #[test]
    fn permutation_then_sbar() {
        // (1 2) composed with (s,1,1) is (1,s,1) followed by (1 2).
        let p = LmaxElement { perm: Perm::transposition(0, 1), ..LmaxElement::IDENTITY };
        let s = LmaxElement { sbar: [SBar::S, SBar::Id, SBar::Id], ..LmaxElement::IDENTITY };
        let exact = HmaxElement::canonical_lift(&p).compose(&HmaxElement::canonical_lift(&s)).project();
        let expected = LmaxElement { sbar: [SBar::Id, SBar::S, SBar::Id], perm: Perm::transposition(0, 1), ..LmaxElement::IDENTITY };
        assert_eq!(exact, expected);
        assert_eq!(p.compose(&s), expected);
    }

    #[test]
    fn s_moves_one_to_tau() {
        let l = LmaxElement { sbar: [SBar::S, SBar::Id, SBar::Id], ..LmaxElement::IDENTITY };
        let g = GroupElement::new(Signs::from_negated([true, false, true]), [HalfPoint::ONE, HalfPoint::ZERO, HalfPoint::ZERO]);
        let exact = HmaxElement::canonical_lift(&l).conjugate(&g).unwrap();
        assert_eq!(exact.shift[0], HalfPoint::TAU);
        assert_eq!(exact, l.conjugate(&g));
    }

    #[test]
    fn affine_inverse() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let h = HmaxElement::random_lift(&LmaxElement::random(&mut rng), &mut rng).to_affine();
            assert_eq!(h.compose(&h.inverse()), Affine::identity());
        }
    }
}
