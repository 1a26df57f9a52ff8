//! Dedekind eta and the discriminant, the trivializing section of the twelfth
//! power of the Hodge bundle, and the Kähler potential on `H^3`.
//!
//! Everything is evaluated through `log η(τ) = 2πiτ/24 + Σ log(1 - q^n)`,
//! which keeps `Δ = η^24` representable far beyond the range of its value.

pub mod real;

use std::collections::BTreeMap;

use num_complex::Complex;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;
use twofloat::TwoFloat;

use crate::group::Perm;
use real::{cabs, cdiv, cexp, cln, lift, Real};

pub type C<T> = Complex<T>;

/// Smallest imaginary part accepted by the eta evaluator.
pub const MIN_IMAG: f64 = 1e-3;
const MAX_TERMS: usize = 2_000_000;
const CHUNK: usize = 32;
/// Truncation used under the difference quotients, whose step is `1e-4 · Im τ`.
const METRIC_TOL: f64 = 1e-13;

/// Pass threshold for the modularity residuals at truncation tolerance `tol`.
pub fn residual_threshold(tol: f64) -> f64 {
    1e-9f64.max(1e3 * tol)
}

#[derive(Debug, Error, PartialEq)]
pub enum ModularError {
    #[error("Im τ = {0} is below the guard {MIN_IMAG}")]
    ImagTooSmall(f64),
    #[error("tolerance {0} must be positive")]
    BadTolerance(f64),
    #[error("tolerance {0} needs more than {MAX_TERMS} product terms")]
    Unreachable(f64),
    #[error("matrix {0:?} does not have determinant 1")]
    NotUnimodular([i64; 4]),
    #[error("matrix entry exceeds the conditioning guard")]
    Conditioning,
    #[error("no k <= 24 with ε^k = 1 within tolerance")]
    NoOrder,
    #[error("finite-difference metric disagrees with the analytic one: {0:e}")]
    MetricMismatch(f64),
    #[error("metric has a non-positive eigenvalue {0:e}")]
    NotPositive(f64),
}

/// `(a b; c d)` in `SL(2, Z)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct GammaMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GammaMatrix {
    pub const IDENTITY: GammaMatrix = GammaMatrix { a: 1, b: 0, c: 0, d: 1 };
    pub const T: GammaMatrix = GammaMatrix { a: 1, b: 1, c: 0, d: 1 };
    pub const S: GammaMatrix = GammaMatrix { a: 0, b: -1, c: 1, d: 0 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, ModularError> {
        if a * d - b * c != 1 {
            return Err(ModularError::NotUnimodular([a, b, c, d]));
        }
        Ok(GammaMatrix { a, b, c, d })
    }

    pub fn max_entry(&self) -> i64 {
        [self.a, self.b, self.c, self.d].iter().map(|v| v.abs()).max().unwrap()
    }

    pub fn automorphy<T: Real>(&self, tau: C<T>) -> C<T> {
        tau * T::of(self.c as f64) + T::of(self.d as f64)
    }

    pub fn act<T: Real>(&self, tau: C<T>) -> C<T> {
        cdiv(tau * T::of(self.a as f64) + T::of(self.b as f64), self.automorphy(tau))
    }

    /// Random element with entries bounded by `bound`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> GammaMatrix {
        loop {
            let (c, d) = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
            let g = num_integer::Integer::extended_gcd(&c, &d);
            if g.gcd != 1 {
                continue;
            }
            // a d - b c = 1 from x c + y d = 1: a = y, b = -x
            let (mut a, mut b) = (g.y, -g.x);
            if c == 0 && d == 0 {
                continue;
            }
            // shift (a, b) by multiples of (c, d) toward small entries
            let k = if c != 0 { -(a as f64 / c as f64).round() as i64 } else { -(b as f64 / d as f64).round() as i64 };
            let k = k + rng.gen_range(-1..=1);
            a += k * c;
            b += k * d;
            if a.abs() <= bound && b.abs() <= bound {
                return GammaMatrix { a, b, c, d };
            }
        }
    }
}

/// A value with a rigorous bound on its truncation error.
#[derive(Clone, Copy, Debug)]
pub struct CertifiedValue<T> {
    pub value: C<T>,
    pub bound: f64,
    pub terms: usize,
}

/// `q`-product truncation for a bound `tol` on the dropped part of the log.
pub fn truncation(abs_q: f64, tol: f64) -> Result<(usize, f64), ModularError> {
    if !(tol > 0.0) {
        return Err(ModularError::BadTolerance(tol));
    }
    let denom = (1.0 - abs_q).powi(2);
    let mut pow = abs_q;
    for n in 0..=MAX_TERMS {
        // Σ_{m>n} |q|^m / (1 - |q|)
        let tail = pow / denom * (1.0 + 1e-12);
        if tail < tol {
            return Ok((n, tail));
        }
        pow *= abs_q;
    }
    Err(ModularError::Unreachable(tol))
}

/// `log η(τ)` modulo `2πi`, with the bound on the dropped log-product tail.
pub fn log_eta<T: Real>(tau: C<T>, tol: f64) -> Result<CertifiedValue<T>, ModularError> {
    let y = imag_checked(tau)?;
    let (terms, bound) = truncation((-2.0 * std::f64::consts::PI * y).exp(), tol)?;
    Ok(CertifiedValue { value: truncated_log_eta(tau, terms), bound, terms })
}

fn imag_checked<T: Real>(tau: C<T>) -> Result<f64, ModularError> {
    let y = tau.im.approx();
    if !(y >= MIN_IMAG) {
        return Err(ModularError::ImagTooSmall(y));
    }
    Ok(y)
}

fn truncated_log_eta<T: Real>(tau: C<T>, terms: usize) -> C<T> {
    let two_pi = T::PI() * T::of(2.0);
    let reduced = tau.re - T::of(tau.re.approx().round());
    let q = cexp(C::new(-two_pi * tau.im, two_pi * reduced));
    let one = C::new(T::one(), T::zero());
    let mut sum = C::new(T::zero(), T::zero());
    let mut chunk = one;
    let mut qn = one;
    for n in 1..=terms {
        qn = qn * q;
        chunk = chunk * (one - qn);
        if n % CHUNK == 0 {
            sum = sum + cln(chunk);
            chunk = one;
        }
    }
    sum = sum + cln(chunk);
    let prefactor = C::new(T::zero(), two_pi.quot(T::of(24.0))) * tau;
    prefactor + sum
}

pub fn eta<T: Real>(tau: C<T>, tol: f64) -> Result<CertifiedValue<T>, ModularError> {
    let log = log_eta(tau, tol)?;
    let value = cexp(log.value);
    let bound = cabs(value).approx() * log.bound.exp_m1();
    Ok(CertifiedValue { value, bound, terms: log.terms })
}

/// `log Δ = 24 log η`.
pub fn log_delta<T: Real>(tau: C<T>, tol: f64) -> Result<CertifiedValue<T>, ModularError> {
    let l = log_eta(tau, tol)?;
    Ok(CertifiedValue { value: l.value * T::of(24.0), bound: 24.0 * l.bound, terms: l.terms })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Residual {
    pub value: f64,
    /// Contribution of the certified tails.
    pub tail: f64,
}

fn unit_residual<T: Real>(log_ratio: C<T>) -> f64 {
    let z = cexp(log_ratio) - C::new(T::one(), T::zero());
    cabs(z).approx()
}

/// `|Δ(γτ) / ((cτ+d)^12 Δ(τ)) - 1|`.
pub fn delta_modularity_residual<T: Real>(g: &GammaMatrix, tau: C<T>, tol: f64) -> Result<Residual, ModularError> {
    if g.max_entry() > 1_000_000 {
        return Err(ModularError::Conditioning);
    }
    let moved = log_delta(g.act(tau), tol)?;
    let base = log_delta(tau, tol)?;
    let factor = cln(g.automorphy(tau)) * T::of(12.0);
    let r = unit_residual(moved.value - factor - base.value);
    Ok(Residual { value: r, tail: (moved.bound + base.bound).exp_m1() })
}

/// Generators of the ambient group acting on `H^3` and the frame `dz_1 dz_2 dz_3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectionMove {
    /// Translation of one factor by a quarter period `(x + t τ) / 4`.
    Translation { slot: usize, x: u8, t: u8 },
    Gamma { slot: usize, gamma: GammaMatrix },
    Permutation(Perm),
}

/// `|h^*σ / σ - 1|` for `σ = Π Δ(τ_i) (dz_1 ∧ dz_2 ∧ dz_3)^12`.
pub fn section_equivariance_residual<T: Real>(h: &SectionMove, tau: [C<T>; 3], tol: f64) -> Result<Residual, ModularError> {
    let logs: Vec<CertifiedValue<T>> = tau.iter().map(|t| log_delta(*t, tol)).collect::<Result<_, _>>()?;
    let total = |ls: &[CertifiedValue<T>]| ls.iter().fold(C::new(T::zero(), T::zero()), |acc, l| acc + l.value);
    let tails: f64 = logs.iter().map(|l| l.bound).sum();
    let log_ratio = match h {
        SectionMove::Translation { .. } => total(&logs) - total(&logs),
        SectionMove::Gamma { slot, gamma } => {
            let moved = log_delta(gamma.act(tau[*slot]), tol)?;
            let frame = cln(gamma.automorphy(tau[*slot])) * T::of(-12.0);
            moved.value + frame - logs[*slot].value
        }
        SectionMove::Permutation(p) => {
            let permuted: Vec<CertifiedValue<T>> = (0..3).map(|i| logs[p.inverse().image(i)]).collect();
            // the frame picks up sign(p)^12 = 1
            total(&permuted) - total(&logs)
        }
    };
    Ok(Residual { value: unit_residual(log_ratio), tail: (2.0 * tails).exp_m1() })
}

/// `K = -Σ log(Im τ_i |η(τ_i)|^4)`.
pub fn kahler_potential<T: Real>(tau: [C<T>; 3], tol: f64) -> Result<T, ModularError> {
    let mut terms = [0; 3];
    for (n, t) in terms.iter_mut().zip(&tau) {
        let y = imag_checked(*t)?;
        *n = truncation((-2.0 * std::f64::consts::PI * y).exp(), tol)?.0;
    }
    Ok(potential_with_terms(tau, terms))
}

fn potential_with_terms<T: Real>(tau: [C<T>; 3], terms: [usize; 3]) -> T {
    tau.iter().zip(terms).fold(T::zero(), |k, (t, n)| k - (t.im.ln_r() + truncated_log_eta(*t, n).re * T::of(4.0)))
}

/// Hermitian metric `∂_i ∂̄_j K`; entry `[i][j]` is `(re, im)`.
pub type Metric = [[(f64, f64); 3]; 3];

pub fn analytic_metric(tau: [C<f64>; 3]) -> Metric {
    let mut g = [[(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        g[i][i] = (1.0 / (4.0 * tau[i].im * tau[i].im), 0.0);
    }
    g
}

/// Central differences with step `1e-4 · Im τ_i` in each real direction.
pub fn finite_difference_metric<T: Real>(tau: [C<T>; 3], tol: f64) -> Result<Metric, ModularError> {
    let steps: Vec<T> = tau.iter().map(|t| t.im * T::of(1e-4)).collect();
    // one truncation for the whole stencil, taken at its lowest point
    let mut terms = [0; 3];
    for (n, t) in terms.iter_mut().zip(&tau) {
        let y = imag_checked(*t)? * (1.0 - 3e-4);
        *n = truncation((-2.0 * std::f64::consts::PI * y).exp(), tol)?.0;
    }
    // real coordinate u_{2i} = Re τ_i, u_{2i+1} = Im τ_i
    let shifted = |moves: &[(usize, f64)]| -> Result<T, ModularError> {
        let mut t = tau;
        for &(k, s) in moves {
            let h = steps[k / 2] * T::of(s);
            if k % 2 == 0 {
                t[k / 2].re = t[k / 2].re + h;
            } else {
                t[k / 2].im = t[k / 2].im + h;
            }
        }
        Ok(potential_with_terms(t, terms))
    };
    let mut hess = [[T::zero(); 6]; 6];
    let centre = shifted(&[])?;
    for a in 0..6 {
        for b in a..6 {
            let v = if a == b {
                (shifted(&[(a, 1.0)])? - centre * T::of(2.0) + shifted(&[(a, -1.0)])?).quot(steps[a / 2] * steps[a / 2])
            } else {
                (shifted(&[(a, 1.0), (b, 1.0)])? - shifted(&[(a, 1.0), (b, -1.0)])? - shifted(&[(a, -1.0), (b, 1.0)])?
                    + shifted(&[(a, -1.0), (b, -1.0)])?)
                    .quot(steps[a / 2] * steps[b / 2] * T::of(4.0))
            };
            hess[a][b] = v;
            hess[b][a] = v;
        }
    }
    let mut g = [[(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (xi, yi, xj, yj) = (2 * i, 2 * i + 1, 2 * j, 2 * j + 1);
            let re = (hess[xi][xj] + hess[yi][yj]) * T::of(0.25);
            let im = (hess[xi][yj] - hess[yi][xj]) * T::of(0.25);
            g[i][j] = (re.approx(), im.approx());
        }
    }
    Ok(g)
}

/// Eigenvalues of a Hermitian 3x3 matrix through its real 6x6 form, by Jacobi rotations.
pub fn hermitian_eigenvalues(g: &Metric) -> [f64; 3] {
    let mut m = [[0.0; 6]; 6];
    for i in 0..3 {
        for j in 0..3 {
            let (re, im) = g[i][j];
            m[i][j] = re;
            m[i + 3][j + 3] = re;
            m[i][j + 3] = -im;
            m[i + 3][j] = im;
        }
    }
    for _ in 0..100 {
        let off: f64 = (0..6).flat_map(|p| (0..6).map(move |q| (p, q))).filter(|(p, q)| p != q).map(|(p, q)| m[p][q] * m[p][q]).sum();
        if off < 1e-40 {
            break;
        }
        for p in 0..6 {
            for q in p + 1..6 {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..6 {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..6 {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..6).map(|i| m[i][i]).collect();
    eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // each eigenvalue of the Hermitian matrix appears twice
    [eig[0], eig[2], eig[4]]
}

#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MetricCheck {
    pub max_rel_error: f64,
    pub min_eigenvalue: f64,
}

pub fn kahler_metric<T: Real>(tau: [C<T>; 3], tol: f64, rel_tol: f64) -> Result<MetricCheck, ModularError> {
    let plain = tau.map(real::lower);
    let analytic = analytic_metric(plain);
    let numeric = finite_difference_metric(tau, tol)?;
    let scale = (0..3).map(|i| analytic[i][i].0).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let d = ((numeric[i][j].0 - analytic[i][j].0).powi(2) + (numeric[i][j].1 - analytic[i][j].1).powi(2)).sqrt();
            worst = worst.max(d / scale);
        }
    }
    let min_eigenvalue = hermitian_eigenvalues(&numeric)[0];
    if worst >= rel_tol {
        return Err(ModularError::MetricMismatch(worst));
    }
    if !(min_eigenvalue > 0.0) {
        return Err(ModularError::NotPositive(min_eigenvalue));
    }
    Ok(MetricCheck { max_rel_error: worst, min_eigenvalue })
}

#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Multiplier {
    pub epsilon: (f64, f64),
    pub modulus_deviation: f64,
    pub order: u32,
    /// `ε^12`, expected to be `±1`.
    pub twelfth_power: (f64, f64),
}

/// Bound on `|ε^k - 1|` for a true root of unity when `log ε` is known to
/// within `err`; capped at half the spacing of the 24th roots of unity.
fn order_threshold(k: u32, err: f64) -> f64 {
    (k as f64 * (2.0 * err + 1e-13)).min(0.13)
}

/// `ε = η(γτ) / ((cτ+d)^{1/2} η(τ))` with the principal square root.
pub fn eta_multiplier<T: Real>(g: &GammaMatrix, tau: C<T>, tol: f64) -> Result<Multiplier, ModularError> {
    let moved = log_eta(g.act(tau), tol)?;
    let base = log_eta(tau, tol)?;
    let log_eps = moved.value - cln(g.automorphy(tau)) * T::of(0.5) - base.value;
    let err = moved.bound + base.bound;
    let eps = cexp(log_eps);
    let modulus_deviation = (cabs(eps).approx() - 1.0).abs();
    let one = C::new(T::one(), T::zero());
    let mut power = one;
    let mut order = None;
    let mut twelfth = one;
    for k in 1..=24u32 {
        power = power * eps;
        if k == 12 {
            twelfth = power;
        }
        if order.is_none() && cabs(power - one).approx() < order_threshold(k, err) {
            order = Some(k);
        }
    }
    let order = order.ok_or(ModularError::NoOrder)?;
    Ok(Multiplier {
        epsilon: (eps.re.approx(), eps.im.approx()),
        modulus_deviation,
        order,
        twelfth_power: (twelfth.re.approx(), twelfth.im.approx()),
    })
}

/// Working precision from the tolerance: `2 · digits + 10` decimal digits.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Precision {
    Double,
    DoubleDouble,
}

impl Precision {
    pub fn required_digits(tol: f64) -> u32 {
        2 * (-tol.log10()).ceil().max(0.0) as u32 + 10
    }

    pub fn for_tolerance(tol: f64) -> Precision {
        if Self::required_digits(tol) <= <f64 as Real>::DIGITS {
            Precision::Double
        } else {
            Precision::DoubleDouble
        }
    }

    /// The rule asks for more digits than double-double carries.
    pub fn is_capped(tol: f64) -> bool {
        Self::required_digits(tol) > <TwoFloat as Real>::DIGITS
    }
}

pub fn random_tau<R: Rng + ?Sized>(rng: &mut R, im_range: (f64, f64)) -> C<f64> {
    C::new(rng.gen_range(-0.5..=0.5), rng.gen_range(im_range.0..=im_range.1))
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModularReport {
    pub samples: usize,
    pub precision: Precision,
    pub max_delta_residual: f64,
    pub max_section_residual: f64,
    pub max_potential_invariance_residual: f64,
    pub metric_checks: MetricCheck,
    /// Order of `ε` with the automorphy factor, as a histogram.
    pub multiplier_orders: BTreeMap<u32, usize>,
    /// Count of sampled `ε^12` equal to `+1` and `-1`.
    pub twelfth_power_signs: (usize, usize),
    pub max_multiplier_modulus_deviation: f64,
    pub eta_i: f64,
    pub eta_i_oracle_error: f64,
    pub min_log_abs_delta: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub samples: usize,
    pub entry_bound: i64,
    pub im_range: (f64, f64),
    /// Truncation tolerance for every eta evaluation.
    pub tol: f64,
    pub metric_rel_tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { samples: 100, entry_bound: 10, im_range: (0.5, 3.0), tol: 1e-12, metric_rel_tol: 1e-6 }
    }
}

fn run_batch<T: Real, R: Rng + ?Sized>(cfg: &SuiteConfig, rng: &mut R) -> Result<ModularReport, ModularError> {
    let tol = cfg.tol;
    let mut max_delta = 0.0f64;
    let mut max_section = 0.0f64;
    let mut max_potential = 0.0f64;
    let mut max_rel = 0.0f64;
    let mut min_eig = f64::INFINITY;
    let mut orders = BTreeMap::new();
    let mut signs = (0, 0);
    let mut max_modulus = 0.0f64;
    let mut min_log_delta = f64::INFINITY;
    for _ in 0..cfg.samples {
        let g = GammaMatrix::random(rng, cfg.entry_bound);
        let tau = lift::<T>(random_tau(rng, cfg.im_range));
        max_delta = max_delta.max(delta_modularity_residual(&g, tau, tol)?.value);
        for point in [tau, g.act(tau)] {
            min_log_delta = min_log_delta.min(log_delta(point, tol)?.value.re.approx());
        }

        let triple: [C<T>; 3] = std::array::from_fn(|_| lift(random_tau(rng, cfg.im_range)));
        let slot = rng.gen_range(0..3);
        let moves = [
            SectionMove::Gamma { slot, gamma: g },
            SectionMove::Permutation(Perm::ALL[rng.gen_range(0..6)]),
            SectionMove::Translation { slot, x: rng.gen_range(0..4), t: rng.gen_range(0..4) },
        ];
        for h in &moves {
            max_section = max_section.max(section_equivariance_residual(h, triple, tol)?.value);
        }

        let gammas: [GammaMatrix; 3] = std::array::from_fn(|_| GammaMatrix::random(rng, cfg.entry_bound));
        let moved: [C<T>; 3] = std::array::from_fn(|i| gammas[i].act(triple[i]));
        let dk = (kahler_potential(moved, tol)? - kahler_potential(triple, tol)?).abs().approx();
        max_potential = max_potential.max(dk);

        // difference quotients lose half the digits, so they always run in double-double
        let metric = kahler_metric(triple.map(|t| lift::<TwoFloat>(real::lower(t))), tol.min(METRIC_TOL), cfg.metric_rel_tol)?;
        max_rel = max_rel.max(metric.max_rel_error);
        min_eig = min_eig.min(metric.min_eigenvalue);

        let m = eta_multiplier(&g, tau, tol)?;
        *orders.entry(m.order).or_insert(0) += 1;
        max_modulus = max_modulus.max(m.modulus_deviation);
        if m.twelfth_power.0 > 0.0 {
            signs.0 += 1;
        } else {
            signs.1 += 1;
        }
    }
    let (eta_i, oracle) = eta_i_oracle()?;
    Ok(ModularReport {
        samples: cfg.samples,
        precision: if T::DIGITS > 16 { Precision::DoubleDouble } else { Precision::Double },
        max_delta_residual: max_delta,
        max_section_residual: max_section,
        max_potential_invariance_residual: max_potential,
        metric_checks: MetricCheck { max_rel_error: max_rel, min_eigenvalue: min_eig },
        multiplier_orders: orders,
        twelfth_power_signs: signs,
        max_multiplier_modulus_deviation: max_modulus,
        eta_i,
        eta_i_oracle_error: oracle,
        min_log_abs_delta: min_log_delta,
    })
}

/// `η(i)` in double precision against the same product in double-double at `1e-30`.
pub fn eta_i_oracle() -> Result<(f64, f64), ModularError> {
    let plain = eta::<f64>(C::new(0.0, 1.0), 1e-15)?.value;
    let fine = eta::<TwoFloat>(C::new(TwoFloat::from(0.0), TwoFloat::from(1.0)), 1e-30)?.value;
    let err = ((TwoFloat::from(plain.re) - fine.re).abs() + (TwoFloat::from(plain.im) - fine.im).abs()).approx();
    Ok((plain.re, err))
}

/// Seeded batch run at the precision the tolerance calls for.
pub fn run_suite<R: Rng + ?Sized>(cfg: &SuiteConfig, rng: &mut R) -> Result<ModularReport, ModularError> {
    match Precision::for_tolerance(cfg.tol) {
        Precision::Double => run_batch::<f64, R>(cfg, rng),
        Precision::DoubleDouble => run_batch::<TwoFloat, R>(cfg, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type DD = TwoFloat;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    fn cd(re: f64, im: f64) -> C<DD> {
        lift(c(re, im))
    }

    #[test]
    fn eta_at_i() {
        let v = eta::<f64>(c(0.0, 1.0), 1e-15).unwrap();
        assert!((v.value.re - 0.768225422326056).abs() < 1e-14);
        assert!(v.value.im.abs() < 1e-15);
        // Γ(1/4) / (2 π^{3/4})
        let closed = 3.625_609_908_221_908_3 / (2.0 * std::f64::consts::PI.powf(0.75));
        assert!((v.value.re - closed).abs() < 1e-14);
        let (_, err) = eta_i_oracle().unwrap();
        assert!(err < 1e-12);
    }

    #[test]
    fn eta_far_up_is_its_leading_term() {
        let tau = c(0.0, 100.0);
        let v = log_eta::<f64>(tau, 1e-15).unwrap();
        let lead = -2.0 * std::f64::consts::PI * 100.0 / 24.0;
        assert!((v.value.re - lead).abs() <= 1e-250_f64.max(f64::EPSILON * lead.abs()));
        assert_eq!(v.value.im, 0.0);
    }

    #[test]
    fn eta_translation_phase() {
        let tau = c(1.0 / 3.0, 1.0);
        let a = eta::<f64>(tau, 1e-15).unwrap().value;
        let b = eta::<f64>(tau + 1.0, 1e-15).unwrap().value;
        let expected = C::from_polar(1.0, 2.0 * std::f64::consts::PI / 24.0);
        assert!((b / a - expected).norm() < 1e-14);
    }

    #[test]
    fn tails_are_certified() {
        for tau in [c(0.1, 0.5), c(-0.4, 0.01), c(0.3, 2.0)] {
            let coarse = eta::<DD>(lift(tau), 1e-8).unwrap();
            let fine = eta::<DD>(lift(tau), 1e-10).unwrap();
            assert!(cabs(coarse.value - fine.value).approx() <= coarse.bound);
        }
    }

    #[test]
    fn guards() {
        assert_eq!(log_eta::<f64>(c(0.0, 1e-4), 1e-10).unwrap_err(), ModularError::ImagTooSmall(1e-4));
        assert!(matches!(log_eta::<f64>(c(0.0, 1.0), 0.0), Err(ModularError::BadTolerance(_))));
        assert!(GammaMatrix::new(1, 1, 1, 1).is_err());
    }

    #[test]
    fn delta_examples() {
        let r = delta_modularity_residual(&GammaMatrix::T, cd(0.2, 0.7), 1e-25).unwrap();
        assert!(r.value < 1e-28);
        let r = delta_modularity_residual(&GammaMatrix::S, c(0.0, 1.0), 1e-15).unwrap();
        assert!(r.value < 1e-12);
    }

    #[test]
    fn section_examples() {
        let tau = [cd(0.0, 1.0), cd(0.0, 1.0), cd(0.0, 3.0)];
        let t = SectionMove::Translation { slot: 0, x: 1, t: 0 };
        assert_eq!(section_equivariance_residual(&t, tau, 1e-25).unwrap().value, 0.0);
        let p = SectionMove::Permutation(Perm::transposition(0, 1));
        assert!(section_equivariance_residual(&p, tau, 1e-25).unwrap().value < 1e-28);
        let g = SectionMove::Gamma { slot: 1, gamma: GammaMatrix::S };
        let tau = [cd(0.0, 1.0), cd(0.0, 2.0), cd(0.0, 3.0)];
        assert!(section_equivariance_residual(&g, tau, 1e-25).unwrap().value < 1e-9);
    }

    #[test]
    fn kahler_examples() {
        let tau = [cd(0.0, 1.0); 3];
        let check = kahler_metric(tau, 1e-25, 1e-6).unwrap();
        assert!(check.max_rel_error < 1e-6);
        assert!((check.min_eigenvalue - 0.25).abs() < 1e-6);
        let shifted = [cd(1.0, 1.0), cd(0.0, 1.0), cd(0.0, 1.0)];
        let k0 = kahler_potential(tau, 1e-25).unwrap();
        assert!((kahler_potential(shifted, 1e-25).unwrap() - k0).abs().approx() < 1e-28);
        let base = [cd(0.0, 1.5), cd(0.0, 2.0), cd(0.0, 1.0)];
        let moved = base.map(|t| GammaMatrix::S.act(t));
        let dk = (kahler_potential(moved, 1e-25).unwrap() - kahler_potential(base, 1e-25).unwrap()).abs().approx();
        assert!(dk < 1e-9);
    }

    #[test]
    fn stencil_straddling_a_truncation_change() {
        // Im τ_1 sits where the product length changes at 1e-13
        let tau = [cd(-0.3714436581055154, 0.5305896162061947), cd(0.0594, 0.6167), cd(0.1049, 2.1931)];
        let check = kahler_metric(tau, 1e-13, 1e-6).unwrap();
        assert!(check.max_rel_error < 1e-7);
    }

    #[test]
    fn coarse_tolerance_still_finds_orders() {
        let tau = c(0.2, 0.9);
        assert_eq!(eta_multiplier(&GammaMatrix::T, tau, 1e-3).unwrap().order, 24);
        assert_eq!(eta_multiplier(&GammaMatrix::S, tau, 1e-3).unwrap().order, 8);
    }

    #[test]
    fn multiplier_orders() {
        let tau = cd(0.1, 1.2);
        assert_eq!(eta_multiplier(&GammaMatrix::T, tau, 1e-25).unwrap().order, 24);
        assert_eq!(eta_multiplier(&GammaMatrix::IDENTITY, tau, 1e-25).unwrap().order, 1);
        assert_eq!(eta_multiplier(&GammaMatrix::S, tau, 1e-25).unwrap().order, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let g = GammaMatrix::random(&mut rng, 10);
            let m = eta_multiplier(&g, lift::<DD>(random_tau(&mut rng, (0.5, 3.0))), 1e-25).unwrap();
            assert_eq!(24 % m.order, 0);
            assert!((m.twelfth_power.0.abs() - 1.0).abs() < 1e-12 && m.twelfth_power.1.abs() < 1e-12);
        }
    }

    #[test]
    fn random_gamma_is_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let g = GammaMatrix::random(&mut rng, 10);
            assert_eq!(g.a * g.d - g.b * g.c, 1);
            assert!(g.max_entry() <= 10);
        }
    }

    #[test]
    fn precision_rule() {
        assert_eq!(Precision::for_tolerance(1e-3), Precision::Double);
        assert_eq!(Precision::for_tolerance(1e-9), Precision::DoubleDouble);
        assert!(Precision::is_capped(1e-15));
        assert!(!Precision::is_capped(1e-9));
    }

    #[test]
    fn metric_eigenvalues() {
        let g: Metric = [[(2.0, 0.0), (0.0, 1.0), (0.0, 0.0)], [(0.0, -1.0), (2.0, 0.0), (0.0, 0.0)], [(0.0, 0.0); 3]];
        let e = hermitian_eigenvalues(&g);
        assert!((e[0]).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12 && (e[2] - 3.0).abs() < 1e-12);
    }
}
