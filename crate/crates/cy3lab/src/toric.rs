//! Crepant resolutions of `C^3 / (Z/2)^2` as unimodular triangulations of the
//! junior triangle.
//!
//! The cross-section point `(p, q)` is the ray `(1 - (p+q)/2, p/2, q/2)` of the
//! refined lattice `N = Z^3 + Z(1/2,1/2,0) + Z(0,1/2,1/2)`. The dual lattice
//! `M` consists of integer vectors whose coordinates share one parity, and the
//! invariants `a = x^2, b = y^2, c = z^2, d = xyz` are `2e_1, 2e_2, 2e_3, (1,1,1)`.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{Field, Matrix};

pub type LatticePoint = (i64, i64);
pub type Triangle = [LatticePoint; 3];
pub type Exponent = [i64; 3];

/// Vertices first, then the edge midpoints.
pub const JUNIOR_POINTS: [LatticePoint; 6] = [(0, 0), (2, 0), (0, 2), (1, 0), (0, 1), (1, 1)];
pub const VERTICES: [LatticePoint; 3] = [(0, 0), (2, 0), (0, 2)];
pub const MIDDLE: Triangle = [(1, 0), (0, 1), (1, 1)];
pub const INVARIANTS: [(char, Exponent); 4] = [('a', [2, 0, 0]), ('b', [0, 2, 0]), ('c', [0, 0, 2]), ('d', [1, 1, 1])];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ToricError {
    #[error("Hilbert basis {0:?} is not a, b, c, d")]
    HilbertBasis(Vec<Exponent>),
    #[error("expected 4 crepant triangulations, found {0}")]
    TriangulationCount(usize),
    #[error("cone over {0:?} is not unimodular")]
    NotUnimodular(Triangle),
    #[error("gluing across {0:?} is not of unit form")]
    Gluing([LatticePoint; 2]),
    #[error("flop graph is not a star")]
    NotAStar,
}

/// Twice the signed area.
fn orient(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

pub fn normalized_area(t: &Triangle) -> i64 {
    orient(t[0], t[1], t[2]).abs()
}

fn canonical(mut t: Triangle) -> Triangle {
    t.sort();
    t
}

/// Interiors are disjoint iff some edge line separates the two triangles.
fn interiors_disjoint(s: &Triangle, t: &Triangle) -> bool {
    let separated_by = |u: &Triangle, v: &Triangle| {
        (0..3).any(|k| {
            let (p, q, r) = (u[k], u[(k + 1) % 3], u[(k + 2) % 3]);
            let inside = orient(p, q, r).signum();
            v.iter().all(|&x| orient(p, q, x) * inside <= 0)
        })
    };
    separated_by(s, t) || separated_by(t, s)
}

/// All lattice triangles of normalized area one on the junior points.
pub fn unimodular_triangles() -> Vec<Triangle> {
    let mut out = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            for k in j + 1..6 {
                let t = canonical([JUNIOR_POINTS[i], JUNIOR_POINTS[j], JUNIOR_POINTS[k]]);
                if normalized_area(&t) == 1 {
                    out.push(t);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangulation {
    pub triangles: BTreeSet<Triangle>,
}

impl Triangulation {
    pub fn is_central(&self) -> bool {
        self.triangles.contains(&canonical(MIDDLE))
    }

    pub fn total_area(&self) -> i64 {
        self.triangles.iter().map(normalized_area).sum()
    }

    pub fn used_points(&self) -> BTreeSet<LatticePoint> {
        self.triangles.iter().flatten().copied().collect()
    }

    pub fn map(&self, f: impl Fn(LatticePoint) -> LatticePoint) -> Triangulation {
        Triangulation { triangles: self.triangles.iter().map(|t| canonical(t.map(&f))).collect() }
    }

    /// Pairs of triangles sharing an edge, with the shared edge.
    pub fn adjacencies(&self) -> Vec<(Triangle, Triangle, [LatticePoint; 2])> {
        let ts: Vec<&Triangle> = self.triangles.iter().collect();
        let mut out = Vec::new();
        for i in 0..ts.len() {
            for j in i + 1..ts.len() {
                let shared: Vec<LatticePoint> = ts[i].iter().filter(|p| ts[j].contains(p)).copied().collect();
                if shared.len() == 2 {
                    out.push((*ts[i], *ts[j], [shared[0], shared[1]]));
                }
            }
        }
        out
    }
}

/// Sets of pairwise interior-disjoint unimodular triangles of total area 4.
pub fn enumerate_crepant_triangulations() -> Result<Vec<Triangulation>, ToricError> {
    let candidates = unimodular_triangles();
    let full = normalized_area(&VERTICES);
    let mut out = Vec::new();
    for mask in 0u32..1 << candidates.len() {
        let chosen: Vec<&Triangle> = (0..candidates.len()).filter(|i| mask >> i & 1 == 1).map(|i| &candidates[i]).collect();
        if chosen.iter().map(|t| normalized_area(t)).sum::<i64>() != full {
            continue;
        }
        let disjoint = (0..chosen.len()).all(|i| (i + 1..chosen.len()).all(|j| interiors_disjoint(chosen[i], chosen[j])));
        if disjoint {
            out.push(Triangulation { triangles: chosen.into_iter().copied().collect() });
        }
    }
    if out.len() != 4 {
        return Err(ToricError::TriangulationCount(out.len()));
    }
    Ok(out)
}

/// The two generating symmetries of the junior triangle.
pub fn swap_symmetry(p: LatticePoint) -> LatticePoint {
    (p.1, p.0)
}

pub fn reflect_symmetry(p: LatticePoint) -> LatticePoint {
    (2 - p.0 - p.1, p.1)
}

/// Ray in `N`, scaled by 2 to be integral.
pub fn ray(p: LatticePoint) -> [i64; 3] {
    [2 - p.0 - p.1, p.0, p.1]
}

pub fn in_dual_lattice(m: &Exponent) -> bool {
    m.iter().all(|x| x.rem_euclid(2) == m[0].rem_euclid(2))
}

/// Pairing of `M` with `N`, times 2.
fn pair2(m: &Exponent, v: &[i64; 3]) -> i64 {
    m.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Laurent monomial `a^α b^β c^γ d^δ` with `δ ∈ {0, 1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Monomial {
    pub exponent: Exponent,
    pub powers: [i64; 4],
}

impl Monomial {
    pub fn new(exponent: Exponent) -> Option<Monomial> {
        if !in_dual_lattice(&exponent) {
            return None;
        }
        let d = exponent[0].rem_euclid(2);
        let powers = [(exponent[0] - d) / 2, (exponent[1] - d) / 2, (exponent[2] - d) / 2, d];
        Some(Monomial { exponent, powers })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = INVARIANTS
            .iter()
            .zip(self.powers)
            .filter(|(_, e)| *e != 0)
            .map(|((name, _), e)| if e == 1 { name.to_string() } else { format!("{name}^{e}") })
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Coordinate ring generators of one smooth chart.
#[derive(Clone, Debug, Serialize)]
pub struct ChartData {
    pub triangle: Triangle,
    /// Dual basis, in the order of the triangle's vertices.
    pub generators: [Monomial; 3],
}

impl ChartData {
    pub fn rendered(&self) -> Vec<String> {
        self.generators.iter().map(Monomial::to_string).collect()
    }
}

/// Dual basis of the cone over a triangle; exists in `M` iff the cone is smooth.
pub fn chart(t: &Triangle) -> Result<ChartData, ToricError> {
    let rays = t.map(ray);
    let mut m = Matrix::<BigRational>::zeros(3, 3);
    for (i, r) in rays.iter().enumerate() {
        for j in 0..3 {
            m[(i, j)] = BigRational::from_i64(r[j]);
        }
    }
    if m.rank() != 3 {
        return Err(ToricError::NotUnimodular(*t));
    }
    let mut gens = Vec::with_capacity(3);
    for i in 0..3 {
        // solve <m_i, v_j> = delta_ij with the rays scaled by 2
        let mut aug = Matrix::<BigRational>::zeros(3, 4);
        for r in 0..3 {
            for c in 0..3 {
                aug[(r, c)] = m[(r, c)].clone();
            }
            aug[(r, 3)] = BigRational::from_i64(if r == i { 2 } else { 0 });
        }
        let (red, _) = aug.rref();
        let mut e = [0i64; 3];
        for (c, slot) in e.iter_mut().enumerate() {
            let v = &red[(c, 3)];
            if !v.is_integer() {
                return Err(ToricError::NotUnimodular(*t));
            }
            *slot = v.to_integer().try_into().unwrap();
        }
        gens.push(Monomial::new(e).ok_or(ToricError::NotUnimodular(*t))?);
    }
    let dual = (0..3).all(|i| (0..3).all(|j| pair2(&gens[i].exponent, &rays[j]) == if i == j { 2 } else { 0 }));
    if !dual {
        return Err(ToricError::NotUnimodular(*t));
    }
    Ok(ChartData { triangle: *t, generators: [gens[0], gens[1], gens[2]] })
}

/// `u v = 1` across a wall, with the remaining generators related by powers of `u`.
#[derive(Clone, Debug, Serialize)]
pub struct Gluing {
    pub wall: [LatticePoint; 2],
    pub unit: (String, String),
    /// Exponents `k` with `x' = x u^k` for the two wall generators.
    pub shifts: [i64; 2],
}

pub fn glue(a: &ChartData, b: &ChartData, wall: [LatticePoint; 2]) -> Result<Gluing, ToricError> {
    let opposite = |c: &ChartData| (0..3).find(|&i| !wall.contains(&c.triangle[i])).unwrap();
    let (ia, ib) = (opposite(a), opposite(b));
    let (u, v) = (a.generators[ia], b.generators[ib]);
    if (0..3).any(|k| u.exponent[k] + v.exponent[k] != 0) {
        return Err(ToricError::Gluing(wall));
    }
    let mut shifts = [0; 2];
    for (slot, p) in wall.iter().enumerate() {
        let ga = a.generators[a.triangle.iter().position(|q| q == p).unwrap()].exponent;
        let gb = b.generators[b.triangle.iter().position(|q| q == p).unwrap()].exponent;
        let delta: Vec<i64> = (0..3).map(|k| gb[k] - ga[k]).collect();
        let k = (0..3).find(|&k| u.exponent[k] != 0).map(|k| delta[k] / u.exponent[k]).unwrap();
        if (0..3).any(|j| delta[j] != k * u.exponent[j]) {
            return Err(ToricError::Gluing(wall));
        }
        shifts[slot] = k;
    }
    Ok(Gluing { wall, unit: (u.to_string(), v.to_string()), shifts })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TriangulationReport {
    pub triangles: Vec<Triangle>,
    pub charts: Vec<ChartData>,
    pub gluings: Vec<Gluing>,
    pub is_central: bool,
}

pub fn charts_and_gluing(t: &Triangulation) -> Result<TriangulationReport, ToricError> {
    let charts: Vec<ChartData> = t.triangles.iter().map(chart).collect::<Result<_, _>>()?;
    let find = |tri: &Triangle| charts.iter().find(|c| c.triangle == *tri).unwrap();
    let gluings =
        t.adjacencies().iter().map(|(x, y, wall)| glue(find(x), find(y), *wall)).collect::<Result<Vec<_>, _>>()?;
    Ok(TriangulationReport { triangles: t.triangles.iter().copied().collect(), charts, gluings, is_central: t.is_central() })
}

/// Edges join triangulations that differ by one diagonal flip.
pub fn flop_graph(ts: &[Triangulation]) -> Result<Vec<(usize, usize)>, ToricError> {
    let mut edges = Vec::new();
    for i in 0..ts.len() {
        for j in i + 1..ts.len() {
            if ts[i].triangles.intersection(&ts[j].triangles).count() == 2 {
                edges.push((i, j));
            }
        }
    }
    let degree = |v: usize| edges.iter().filter(|(a, b)| *a == v || *b == v).count();
    let hub = ts.iter().position(Triangulation::is_central);
    let star = hub.is_some_and(|h| {
        degree(h) == ts.len() - 1 && (0..ts.len()).filter(|&v| v != h).all(|v| degree(v) == 1)
    });
    if !star {
        return Err(ToricError::NotAStar);
    }
    Ok(edges)
}

/// Irreducible elements of `M ∩ (R_{≥0})^3`; all lie in the box `[0, 2]^3`.
pub fn hilbert_basis() -> Vec<Exponent> {
    let box_points: Vec<Exponent> = (0..=4)
        .flat_map(|x| (0..=4).flat_map(move |y| (0..=4).map(move |z| [x, y, z])))
        .filter(|m| *m != [0, 0, 0] && in_dual_lattice(m))
        .collect();
    let members: BTreeSet<Exponent> = box_points.iter().copied().collect();
    box_points
        .iter()
        .filter(|m| {
            !members.iter().any(|p| {
                let rest = [m[0] - p[0], m[1] - p[1], m[2] - p[2]];
                rest != [0, 0, 0] && members.contains(&rest)
            })
        })
        .copied()
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Presentation {
    pub generators: Vec<Exponent>,
    /// Integer relation among `a, b, c, d`.
    pub relation: [i64; 4],
}

pub fn singularity_presentation() -> Result<Presentation, ToricError> {
    let mut basis = hilbert_basis();
    basis.sort();
    let mut expected: Vec<Exponent> = INVARIANTS.iter().map(|(_, e)| *e).collect();
    expected.sort();
    if basis != expected {
        return Err(ToricError::HilbertBasis(basis));
    }
    let mut m = Matrix::<BigRational>::zeros(3, 4);
    for (j, (_, e)) in INVARIANTS.iter().enumerate() {
        for i in 0..3 {
            m[(i, j)] = BigRational::from_i64(e[i]);
        }
    }
    let kernel = m.kernel();
    assert_eq!(kernel.len(), 1);
    let v = &kernel[0];
    let scale = v.iter().map(|x| x.denom().clone()).fold(num_bigint::BigInt::from(1), |acc, d| num_integer::lcm(acc, d));
    let mut relation = [0i64; 4];
    for (slot, x) in relation.iter_mut().zip(v) {
        *slot = (x * BigRational::from_integer(scale.clone())).to_integer().try_into().unwrap();
    }
    if relation[3] > 0 {
        relation = relation.map(|x| -x);
    }
    Ok(Presentation { generators: expected, relation })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ToricReport {
    pub presentation: Presentation,
    pub triangulations: Vec<TriangulationReport>,
    pub flop_graph: Vec<(usize, usize)>,
}

pub fn analyze() -> Result<ToricReport, ToricError> {
    let presentation = singularity_presentation()?;
    let ts = enumerate_crepant_triangulations()?;
    let triangulations = ts.iter().map(charts_and_gluing).collect::<Result<_, _>>()?;
    Ok(ToricReport { presentation, triangulations, flop_graph: flop_graph(&ts)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: Exponent) -> Monomial {
        Monomial::new(e).unwrap()
    }

    #[test]
    fn presentation_is_abc_equals_d_squared() {
        let p = singularity_presentation().unwrap();
        assert_eq!(p.generators.len(), 4);
        assert_eq!(p.relation, [1, 1, 1, -2]);
        for g in &p.generators {
            // invariant under (x,-y,-z) and (-x,y,-z)
            assert_eq!((g[1] + g[2]) % 2, 0);
            assert_eq!((g[0] + g[2]) % 2, 0);
        }
        let abc: Exponent = [2, 2, 2];
        let d2 = [2 * INVARIANTS[3].1[0], 2 * INVARIANTS[3].1[1], 2 * INVARIANTS[3].1[2]];
        assert_eq!(abc, d2);
    }

    #[test]
    fn four_triangulations() {
        let ts = enumerate_crepant_triangulations().unwrap();
        assert_eq!(ts.len(), 4);
        assert_eq!(ts.iter().filter(|t| t.is_central()).count(), 1);
        for t in &ts {
            assert_eq!(t.triangles.len(), 4);
            assert_eq!(t.total_area(), 4);
            assert_eq!(t.used_points().len(), 6);
            let exceptional = t.used_points().iter().filter(|p| !VERTICES.contains(p)).count();
            assert_eq!(exceptional, 3);
        }
    }

    #[test]
    fn symmetry_fixes_central_and_permutes_outer() {
        let ts = enumerate_crepant_triangulations().unwrap();
        let set: BTreeSet<Triangulation> = ts.iter().cloned().collect();
        let central = ts.iter().find(|t| t.is_central()).unwrap();
        for f in [swap_symmetry, reflect_symmetry] {
            assert_eq!(&central.map(f), central);
            assert!(ts.iter().all(|t| set.contains(&t.map(f))));
        }
        let outer: Vec<&Triangulation> = ts.iter().filter(|t| !t.is_central()).collect();
        let mut orbit = BTreeSet::from([outer[0].clone()]);
        for _ in 0..3 {
            let next: Vec<Triangulation> =
                orbit.iter().flat_map(|t| [t.map(swap_symmetry), t.map(reflect_symmetry)]).collect();
            orbit.extend(next);
        }
        assert_eq!(orbit.len(), 3);
    }

    #[test]
    fn corner_and_central_charts() {
        let corner = chart(&canonical([(0, 0), (1, 0), (0, 1)])).unwrap();
        let gens: BTreeSet<Exponent> = corner.generators.iter().map(|g| g.exponent).collect();
        assert_eq!(gens, BTreeSet::from([[0, 2, 0], [0, 0, 2], [1, -1, -1]]));
        let middle = chart(&canonical(MIDDLE)).unwrap();
        let gens: BTreeSet<String> = middle.rendered().into_iter().collect();
        assert_eq!(gens, BTreeSet::from(["a^-1 d".to_string(), "b^-1 d".into(), "c^-1 d".into()]));
        assert!(chart(&[(0, 0), (2, 0), (0, 2)]).is_err());
    }

    #[test]
    fn gluing_patterns() {
        let ts = enumerate_crepant_triangulations().unwrap();
        for t in &ts {
            let report = charts_and_gluing(t).unwrap();
            assert_eq!(report.charts.len(), 4);
            let adj = t.adjacencies();
            assert_eq!(adj.len(), 3);
            let degrees: Vec<usize> = t
                .triangles
                .iter()
                .map(|x| adj.iter().filter(|(p, q, _)| p == x || q == x).count())
                .collect();
            let mut sorted = degrees.clone();
            sorted.sort();
            if t.is_central() {
                // the middle chart meets each corner chart
                assert_eq!(sorted, [1, 1, 1, 3]);
            } else {
                assert_eq!(sorted, [1, 1, 2, 2]);
            }
        }
        assert_eq!(mono([1, -1, -1]).to_string(), "b^-1 c^-1 d");
    }

    #[test]
    fn flop_graph_is_a_star() {
        let ts = enumerate_crepant_triangulations().unwrap();
        let edges = flop_graph(&ts).unwrap();
        assert_eq!(edges.len(), 3);
        let hub = ts.iter().position(Triangulation::is_central).unwrap();
        assert!(edges.iter().all(|(a, b)| *a == hub || *b == hub));
    }
}
