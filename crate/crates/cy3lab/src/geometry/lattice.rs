//! Integer lattices in `Z^D` kept in Hermite normal form, and Smith invariants.

use num_integer::Integer;

pub type Vector<const D: usize> = [i64; D];

fn is_zero<const D: usize>(v: &Vector<D>) -> bool {
    v.iter().all(|&x| x == 0)
}

fn axpy<const D: usize>(target: &mut Vector<D>, q: i64, src: &Vector<D>) {
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}

fn pivot<const D: usize>(v: &Vector<D>) -> Option<usize> {
    v.iter().position(|&x| x != 0)
}

/// Row-style HNF: pivots strictly increase, are positive, and entries above a
/// pivot lie in `[0, pivot)`.
fn hnf<const D: usize>(mut rows: Vec<Vector<D>>) -> Vec<Vector<D>> {
    rows.retain(|r| !is_zero(r));
    let mut r = 0;
    for col in 0..D {
        loop {
            let Some(p) = (r..rows.len()).filter(|&i| rows[i][col] != 0).min_by_key(|&i| rows[i][col].abs()) else {
                break;
            };
            rows.swap(r, p);
            let mut cleared = true;
            for i in r + 1..rows.len() {
                if rows[i][col] != 0 {
                    let q = Integer::div_floor(&rows[i][col], &rows[r][col]);
                    let src = rows[r];
                    axpy(&mut rows[i], q, &src);
                    cleared &= rows[i][col] == 0;
                }
            }
            if cleared {
                break;
            }
        }
        if r < rows.len() && rows[r][col] != 0 {
            if rows[r][col] < 0 {
                rows[r] = rows[r].map(|x| -x);
            }
            let src = rows[r];
            for i in 0..r {
                let q = Integer::div_floor(&rows[i][col], &src[col]);
                axpy(&mut rows[i], q, &src);
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice<const D: usize> {
    basis: Vec<Vector<D>>,
}

impl<const D: usize> Lattice<D> {
    pub fn zero() -> Self {
        Lattice { basis: Vec::new() }
    }

    /// `Z^D` scaled by `k`.
    pub fn scaled_standard(k: i64) -> Self {
        let basis = (0..D)
            .map(|i| {
                let mut v = [0; D];
                v[i] = k;
                v
            })
            .collect();
        Lattice { basis }
    }

    pub fn from_generators<I: IntoIterator<Item = Vector<D>>>(gens: I) -> Self {
        Lattice { basis: hnf(gens.into_iter().collect()) }
    }

    pub fn basis(&self) -> &[Vector<D>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &Vector<D>) -> bool {
        let mut v = *v;
        for row in &self.basis {
            let c = pivot(row).unwrap();
            if v[..c].iter().any(|&x| x != 0) {
                return false;
            }
            if v[c] % row[c] != 0 {
                return false;
            }
            let q = v[c] / row[c];
            axpy(&mut v, q, row);
        }
        is_zero(&v)
    }

    pub fn contains_lattice(&self, other: &Lattice<D>) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn join<I: IntoIterator<Item = Vector<D>>>(&self, more: I) -> Self {
        Self::from_generators(self.basis.iter().copied().chain(more))
    }

    /// `L ∩ {v : v_j = 0 for j in zeroed}`.
    pub fn vanishing_on(&self, zeroed: &[usize]) -> Self {
        let order: Vec<usize> = zeroed.iter().copied().chain((0..D).filter(|j| !zeroed.contains(j))).collect();
        let permuted: Vec<Vector<D>> = self.basis.iter().map(|v| std::array::from_fn(|k| v[order[k]])).collect();
        let kept = hnf(permuted).into_iter().filter(|v| v[..zeroed.len()].iter().all(|&x| x == 0));
        Self::from_generators(kept.map(|v| {
            let mut out = [0; D];
            for (k, &j) in order.iter().enumerate() {
                out[j] = v[k];
            }
            out
        }))
    }

    /// Coordinates of `v` in this basis, when `v` lies in the lattice.
    pub fn coordinates(&self, v: &Vector<D>) -> Option<Vec<i64>> {
        let mut rest = *v;
        let mut coords = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let c = pivot(row).unwrap();
            if rest[..c].iter().any(|&x| x != 0) || rest[c] % row[c] != 0 {
                return None;
            }
            let q = rest[c] / row[c];
            axpy(&mut rest, q, row);
            coords.push(q);
        }
        is_zero(&rest).then_some(coords)
    }

    /// Smith invariants of `self` inside `ambient`, or `None` if not a sublattice.
    /// The quotient is `Z^(rank ambient - rank self) ⊕ ⊕ Z/d_i`.
    pub fn relative_invariants(&self, ambient: &Lattice<D>) -> Option<Vec<i64>> {
        let rows: Option<Vec<Vec<i64>>> = self.basis.iter().map(|v| ambient.coordinates(v)).collect();
        Some(smith_invariants(rows?))
    }
}

/// Nonzero diagonal entries of the Smith normal form, in divisibility order.
pub fn smith_invariants(mut m: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].abs())
        else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut dirty = false;
        for i in t + 1..rows {
            let q = m[i][t] / m[t][t];
            if q != 0 {
                for j in t..cols {
                    m[i][j] -= q * m[t][j];
                }
            }
            dirty |= m[i][t] != 0;
        }
        for j in t + 1..cols {
            let q = m[t][j] / m[t][t];
            if q != 0 {
                for i in t..rows {
                    m[i][j] -= q * m[i][t];
                }
            }
            dirty |= m[t][j] != 0;
        }
        if dirty {
            continue;
        }
        let d = m[t][t];
        if let Some((i, _)) =
            (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| m[i][j] % d != 0)
        {
            for j in t..cols {
                let v = m[i][j];
                m[t][j] += v;
            }
            continue;
        }
        out.push(d.abs());
        t += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hnf_and_membership() {
        let l = Lattice::<3>::from_generators([[2, 0, 0], [0, 2, 0], [1, 1, 1]]);
        assert_eq!(l.rank(), 3);
        assert!(l.contains(&[0, 0, 2]));
        assert!(!l.contains(&[1, 0, 0]));
        assert_eq!(l.relative_invariants(&Lattice::scaled_standard(1)).unwrap(), vec![1, 2, 2]);
    }

    #[test]
    fn coordinate_slice() {
        let l = Lattice::<2>::from_generators([[1, 1], [0, 2]]);
        let slice = l.vanishing_on(&[0]);
        assert_eq!(slice.basis(), &[[0, 2]]);
    }

    #[test]
    fn smith_of_known_matrix() {
        assert_eq!(smith_invariants(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), vec![2, 6, 12]);
    }

    proptest! {
        #[test]
        fn generators_belong(gens in prop::collection::vec(prop::array::uniform4(-6i64..6), 1..6)) {
            let l = Lattice::<4>::from_generators(gens.clone());
            for g in &gens {
                prop_assert!(l.contains(g));
            }
            prop_assert!(l.rank() <= gens.len());
            let product: i64 = smith_invariants(l.basis().iter().map(|v| v.to_vec()).collect()).iter().product();
            if l.rank() == 4 {
                let det: i64 = l.basis().iter().enumerate().map(|(i, v)| v[i]).product();
                prop_assert_eq!(product, det);
            }
        }
    }
}
