//! The acceptance criteria as a runnable suite with per-criterion timing.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::CatalogEntry;
use crate::cohomology::{self, rep_on_h2, INVARIANCE_TEMPLATES};
use crate::geometry::{self, FixedLocus, TorsionCoordinate};
use crate::group::{GroupElement, HalfPoint, LmaxElement, Signs, WreathElement, LMAX_ORDER};
use crate::normalizer::{self, L0Tag, LGroup};
use crate::report::{self, RunConfig};
use crate::{golden, F5, F7};

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
    /// One line per failed sub-check, or a short summary on success.
    pub details: Vec<String>,
}

impl Outcome {
    pub fn line(&self) -> String {
        let budget = self.budget.map_or(String::new(), |b| format!(" / {}s", b.as_secs()));
        format!(
            "criterion {:>2} {} [{:.3}s{budget}] {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64(),
            self.title
        )
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub tol: f64,
    pub samples: usize,
    pub oracle_samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0, tol: 1e-12, samples: 100, oracle_samples: 500 }
    }
}

struct Check {
    failures: Vec<String>,
    summary: String,
}

impl Check {
    fn new() -> Self {
        Check { failures: Vec::new(), summary: String::new() }
    }
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn timed(id: u8, title: &'static str, budget: Option<u64>, f: impl FnOnce() -> Check) -> Outcome {
    let start = Instant::now();
    let check = f();
    let elapsed = start.elapsed();
    let budget = budget.map(Duration::from_secs);
    let mut details = check.failures;
    if let Some(b) = budget {
        if elapsed > b {
            details.push(format!("took {:.3}s, budget {}s", elapsed.as_secs_f64(), b.as_secs()));
        }
    }
    let passed = details.is_empty();
    if passed && !check.summary.is_empty() {
        details.push(check.summary);
    }
    Outcome { id, title, passed, elapsed, budget, details }
}

fn rigid<'a>(catalog: &'a [CatalogEntry]) -> Vec<&'a CatalogEntry> {
    golden::TABLE2_RANKS.iter().filter_map(|(l, _)| catalog.iter().find(|e| e.label.to_string() == *l)).collect()
}

/// Runs criteria 1 to 10 in order.
pub fn run_all(cfg: &VerifyConfig, catalog: &[CatalogEntry]) -> Vec<Outcome> {
    let rigid = rigid(catalog);
    let mut l_groups: Vec<(String, LGroup)> = Vec::new();
    let mut out = Vec::new();

    out.push(timed(1, "Table 1: L0 for the ten rigid cases", Some(30), || {
        let mut c = Check::new();
        c.expect(rigid.len() == 10, || format!("catalog holds {} of the ten rigid cases", rigid.len()));
        for e in &rigid {
            let label = e.label.to_string();
            match normalizer::compute_l(&e.group()) {
                Ok(l) => {
                    let frag = report::normalizer_fragment(e, &l);
                    c.expect(frag.matches == Some(true), || {
                        let split = if frag.split_extension == Some(true) { " (split)" } else { "" };
                        format!("{label}: expected {}, computed {}{split}", frag.expected.clone().unwrap_or_default(), frag.l0_tag)
                    });
                    if golden::expected_tag(&label) == Some(L0Tag::Case41) {
                        let checks = normalizer::case41_checks(&l.l0());
                        c.expect(checks.shape(), || format!("{label}: N, projections or quotient do not match"));
                    }
                    l_groups.push((label, l));
                }
                Err(err) => c.failures.push(format!("{label}: {err}")),
            }
        }
        c.summary = format!("{} cases enumerated over {} elements", l_groups.len(), LMAX_ORDER);
        c
    }));

    out.push(timed(2, "Table 2: Picard ranks over Q", Some(5), || {
        let mut c = Check::new();
        for (label, l) in &l_groups {
            let expected = golden::expected_rank(label).unwrap();
            match cohomology::invariant_dimension::<BigRational>(&l.l0()) {
                Ok(inv) => c.expect(inv.dim == expected, || format!("{label}: expected rank {expected}, computed {}", inv.dim)),
                Err(err) => c.failures.push(format!("{label}: {err}")),
            }
        }
        c.expect(l_groups.len() == 10, || "normalizer images missing".into());
        c
    }));

    out.push(timed(3, "Torsion support: F5 and F7 dimensions equal the Q rank", Some(5), || {
        let mut c = Check::new();
        for (label, l) in &l_groups {
            match cohomology::picard_rank(label, &l.l0()) {
                Ok(p) => c.expect(p.torsion_free_above_three(), || {
                    format!("{label}: Q {}, F5 {}, F7 {}", p.rank_q, p.dim_f5, p.dim_f7)
                }),
                Err(err) => c.failures.push(format!("{label}: {err}")),
            }
        }
        c.expect(l_groups.len() == 10, || "normalizer images missing".into());
        c
    }));

    out.push(timed(4, "Table 3: Hodge numbers of all 35 cases", Some(30), || {
        let mut c = Check::new();
        c.expect(catalog.len() == 35, || format!("catalog has {} rows", catalog.len()));
        for e in catalog {
            match geometry::hodge_numbers(&e.group()) {
                Ok(h) => c.expect(h == e.expected_hodge, || format!("{}: expected {:?}, computed {:?}", e.label, e.expected_hodge, h)),
                Err(err) => c.failures.push(format!("{}: {err}", e.label)),
            }
        }
        c
    }));

    out.push(timed(5, "Table 3: fundamental groups of all 35 cases", Some(30), || {
        let mut c = Check::new();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for e in catalog {
            match geometry::classify_pi1(&e.group(), &mut rng) {
                Ok(p) => c.expect(p.label == e.expected_pi1, || format!("{}: expected {}, computed {}", e.label, e.expected_pi1, p.label)),
                Err(err) => c.failures.push(format!("{}: {err}", e.label)),
            }
        }
        c
    }));

    out.push(timed(6, "Singular locus of (0-1)", None, || {
        let mut c = Check::new();
        let Some(e) = catalog.iter().find(|e| e.label.to_string() == "0-1") else {
            c.failures.push("case 0-1 missing".into());
            return c;
        };
        let g = e.group();
        let mut per_direction = [0usize; 3];
        for h in &g.elements {
            if let FixedLocus::Curves(cs) = geometry::fixed_locus(h) {
                for comp in cs {
                    per_direction[comp.free_factor] += 1;
                }
            }
        }
        use golden::case_0_1::*;
        c.expect(per_direction == [CURVES_PER_DIRECTION; 3], || format!("fixed curves per direction {per_direction:?}"));
        match geometry::curve_classes(&g) {
            Ok(cl) => c.expect(cl.len() == CURVE_CLASSES, || format!("{} curve classes", cl.len())),
            Err(err) => c.failures.push(err.to_string()),
        }
        let t = geometry::trident_orbits(&g).len();
        c.expect(t == TRIDENTS, || format!("{t} tridents"));
        let bound = geometry::resolution_choices(t).to_string();
        c.expect(bound == RESOLUTION_BOUND, || format!("resolution bound {bound}"));
        c
    }));

    out.push(timed(7, "Toric: crepant triangulations, charts and flop graph", Some(1), || {
        let mut c = Check::new();
        match report::toric_section() {
            Ok(t) => c.expect(t.checks.passed, || format!("{:?}", t.checks)),
            Err(err) => c.failures.push(err.to_string()),
        }
        c
    }));

    out.push(timed(8, "Modular numerics", Some(10), || {
        let mut c = Check::new();
        let rc = RunConfig { tol: cfg.tol, samples: cfg.samples, seed: cfg.seed, ..RunConfig::default() };
        match report::modular_section(&rc) {
            Ok(m) => {
                let r = &m.report;
                c.expect(m.passed, || {
                    format!(
                        "delta {:.3e}, section {:.3e}, potential {:.3e}, metric {:.3e}, min eigenvalue {:.3e}, eta(i) {:.3e}",
                        r.max_delta_residual,
                        r.max_section_residual,
                        r.max_potential_invariance_residual,
                        r.metric_checks.max_rel_error,
                        r.metric_checks.min_eigenvalue,
                        r.eta_i_oracle_error
                    )
                });
                c.summary = format!("max weight-12 residual {:.3e}", r.max_delta_residual);
            }
            Err(err) => c.failures.push(err.to_string()),
        }
        c
    }));

    out.push(timed(9, "Descended conjugation agrees with exact affine conjugation", Some(10), || {
        let mut c = Check::new();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut total = 0;
        for e in catalog {
            let r = normalizer::brute_force_normalizer_check(&e.group(), &[LmaxElement::IDENTITY], cfg.oracle_samples, &mut rng);
            total += r.checked;
            c.expect(r.all_agree(), || format!("{}: {}/{} agree", e.label, r.agreed, r.checked));
        }
        c.summary = format!("{total} conjugations compared");
        c
    }));

    out.push(timed(10, "Property suites", None, || {
        let mut c = Check::new();
        for (name, ok) in property_checks(cfg.seed, catalog, &l_groups) {
            c.expect(ok, || format!("{name} failed"));
        }
        c
    }));

    out
}

/// Group laws, homomorphisms, invariance templates, translation self-maps
/// and the bulk Hodge numbers, on seeded samples.
pub fn property_checks(seed: u64, catalog: &[CatalogEntry], l_groups: &[(String, LGroup)]) -> Vec<(String, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let groups: Vec<_> = catalog.iter().map(|e| e.group()).collect();
    let closed = groups.iter().all(|g| {
        g.elements.iter().all(|a| g.elements.iter().all(|b| g.contains(&a.compose(b))))
            && g.elements.iter().all(|a| a.compose(a).is_identity())
    });
    out.push(("catalog groups are closed elementary abelian 2-groups".to_string(), closed));

    let mut laws = true;
    let mut action = true;
    let mut projection = true;
    let elements: Vec<GroupElement> = groups.iter().flat_map(|g| g.elements.iter().copied()).collect();
    for _ in 0..500 {
        let [a, b, c] = [0; 3].map(|_| LmaxElement::random(&mut rng));
        laws &= a.compose(&a.inverse()) == LmaxElement::IDENTITY && a.compose(&b).compose(&c) == a.compose(&b.compose(&c));
        projection &= a.compose(&b).wreath() == a.wreath().compose(&b.wreath());
        let g = elements[rng.gen_range(0..elements.len())];
        let h = elements[rng.gen_range(0..elements.len())];
        action &= a.conjugate(&g.compose(&h)) == a.conjugate(&g).compose(&a.conjugate(&h))
            && a.conjugate(&b.conjugate(&g)) == a.compose(&b).conjugate(&g);
    }
    out.push(("L_max group laws".to_string(), laws));
    out.push(("projection to the wreath product is a homomorphism".to_string(), projection));
    out.push(("conjugation is an action by automorphisms".to_string(), action));

    let mut l_closed = true;
    for (_, l) in l_groups {
        for _ in 0..200 {
            let a = l.elements[rng.gen_range(0..l.order())];
            let b = l.elements[rng.gen_range(0..l.order())];
            l_closed &= l.contains(&a.compose(&b)) && l.contains(&a.inverse());
        }
        let kernel: BTreeSet<_> = l.translation_kernel().into_iter().collect();
        l_closed &= kernel.iter().all(|x| kernel.iter().all(|y| kernel.contains(&crate::group::add_shifts(*x, *y))));
    }
    out.push(("normalizer images are subgroups".to_string(), l_closed && !l_groups.is_empty()));

    out.push((
        "nine invariance templates".to_string(),
        INVARIANCE_TEMPLATES.iter().all(|(sbar, expected)| cohomology::template_holds(*sbar, expected)),
    ));
    let all: Vec<WreathElement> = WreathElement::all().collect();
    let mut hom = true;
    for _ in 0..100 {
        let a = all[rng.gen_range(0..all.len())];
        let b = all[rng.gen_range(0..all.len())];
        hom &= rep_on_h2::<F7>(&a.compose(&b)) == rep_on_h2::<F7>(&a).mul(&rep_on_h2::<F7>(&b))
            && rep_on_h2::<F5>(&a.compose(&b)) == rep_on_h2::<F5>(&a).mul(&rep_on_h2::<F5>(&b));
    }
    out.push(("H^2 action is a homomorphism".to_string(), hom));
    out.push(("H^1 action agrees on words up to length 6".to_string(), cohomology::check_well_defined(6).is_ok()));

    let mut self_maps = true;
    for d in 0..4 {
        for s in 0..4 {
            let (delta, shift) = (HalfPoint::from_bits(d), HalfPoint::from_bits(s));
            let set: BTreeSet<TorsionCoordinate> = TorsionCoordinate::halves(delta).into_iter().collect();
            for sign in [1, -1] {
                self_maps &= set.iter().map(|z| z.act(sign, shift)).collect::<BTreeSet<_>>() == set;
            }
        }
    }
    out.push(("torsion translations permute the fixed coordinates".to_string(), self_maps));
    out.push((
        "bulk Hodge numbers are (3, 3)".to_string(),
        groups.iter().all(|g| geometry::bulk_hodge(g) == (3, 3)),
    ));
    let twists_even = groups.iter().all(|g| g.elements.iter().all(|h| h.signs.is_even()));
    out.push(("every element preserves the volume form".to_string(), twists_even && Signs::IDENTITY.is_even()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn property_checks_hold_without_normalizers() {
        let checks = property_checks(3, &catalog::shipped(), &[]);
        for (name, ok) in &checks {
            if name != "normalizer images are subgroups" {
                assert!(ok, "{name}");
            }
        }
    }

    #[test]
    fn outcome_line_format() {
        let o = Outcome {
            id: 4,
            title: "x",
            passed: true,
            elapsed: Duration::from_millis(1500),
            budget: Some(Duration::from_secs(30)),
            details: vec![],
        };
        assert_eq!(o.line(), "criterion  4 PASS [1.500s / 30s] x");
    }
}
