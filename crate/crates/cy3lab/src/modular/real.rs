//! Real scalars for the modular computations, with accurate transcendental
//! functions at double-double precision.

use std::fmt;

use num_complex::Complex;
use num_traits::{Float, FloatConst, Zero};
use twofloat::TwoFloat;

pub trait Real: Float + FloatConst + fmt::Debug + Send + Sync + 'static {
    const NAME: &'static str;
    /// Decimal digits carried by the format.
    const DIGITS: u32;

    fn of(v: f64) -> Self;
    fn approx(self) -> f64;
    fn exp_r(self) -> Self;
    fn ln_r(self) -> Self;
    fn sin_cos_r(self) -> (Self, Self);
    fn atan2_r(self, x: Self) -> Self;
    /// Correctly rounded to the working precision; prefer over `/`.
    fn quot(self, rhs: Self) -> Self;
}

impl Real for f64 {
    const NAME: &'static str = "f64";
    const DIGITS: u32 = 16;

    fn of(v: f64) -> Self {
        v
    }
    fn approx(self) -> f64 {
        self
    }
    fn exp_r(self) -> Self {
        self.exp()
    }
    fn ln_r(self) -> Self {
        self.ln()
    }
    fn sin_cos_r(self) -> (Self, Self) {
        self.sin_cos()
    }
    fn atan2_r(self, x: Self) -> Self {
        self.atan2(x)
    }
    fn quot(self, rhs: Self) -> Self {
        self / rhs
    }
}

fn dd(v: f64) -> TwoFloat {
    TwoFloat::from(v)
}

/// Scale by `2^k` exactly, in steps that stay inside the exponent range.
fn ldexp(mut v: TwoFloat, mut k: i32) -> TwoFloat {
    while k != 0 {
        let step = k.clamp(-1000, 1000);
        v = v * 2f64.powi(step);
        k -= step;
    }
    v
}

/// Double-double quotient with an exact `fma` residual; twofloat's own division
/// rounds the residual and loses about half the digits.
fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

fn dd_exp(x: TwoFloat) -> TwoFloat {
    if x.hi() > 709.0 {
        return TwoFloat::infinity();
    }
    if x.hi() < -745.0 {
        return TwoFloat::zero();
    }
    let k = (x.hi() / std::f64::consts::LN_2).round();
    // e^x = 2^k (e^(r/256))^256 with |r| <= ln2 / 2
    let r = (x - TwoFloat::LN_2() * k) * 2f64.powi(-8);
    let mut term = r;
    let mut m1 = r;
    for n in 2..=16 {
        term = term * r / (n as f64);
        m1 += term;
    }
    for _ in 0..8 {
        m1 = m1 * 2.0 + m1 * m1;
    }
    ldexp(m1 + 1.0, k as i32)
}

fn dd_sin_cos(x: TwoFloat) -> (TwoFloat, TwoFloat) {
    let k = (x.hi() / std::f64::consts::FRAC_PI_2).round();
    let r = x - TwoFloat::FRAC_PI_2() * k;
    let r2 = r * r;
    let (mut s, mut c) = (r, dd(1.0));
    let (mut ts, mut tc) = (r, dd(1.0));
    let mut n = 1.0;
    while n < 40.0 {
        ts = -ts * r2 / ((n + 1.0) * (n + 2.0));
        tc = -tc * r2 / (n * (n + 1.0));
        s += ts;
        c += tc;
        n += 2.0;
    }
    match (k as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

fn dd_ln(x: TwoFloat) -> TwoFloat {
    if x.hi() <= 0.0 {
        return TwoFloat::nan();
    }
    let mut y = dd(x.hi().ln());
    for _ in 0..2 {
        y = y + (x * dd_exp(-y) - 1.0);
    }
    y
}

fn dd_atan2(y: TwoFloat, x: TwoFloat) -> TwoFloat {
    if y.hi() == 0.0 && x.hi() == 0.0 {
        return TwoFloat::zero();
    }
    let mut t = dd(y.hi().atan2(x.hi()));
    for _ in 0..2 {
        let (s, c) = dd_sin_cos(t);
        t = t + dd_div(y * c - x * s, x * c + y * s);
    }
    t
}

impl Real for TwoFloat {
    const NAME: &'static str = "double-double";
    const DIGITS: u32 = 32;

    fn of(v: f64) -> Self {
        TwoFloat::from(v)
    }
    fn approx(self) -> f64 {
        self.hi() + self.lo()
    }
    fn exp_r(self) -> Self {
        dd_exp(self)
    }
    fn ln_r(self) -> Self {
        dd_ln(self)
    }
    fn sin_cos_r(self) -> (Self, Self) {
        dd_sin_cos(self)
    }
    fn atan2_r(self, x: Self) -> Self {
        dd_atan2(self, x)
    }
    fn quot(self, rhs: Self) -> Self {
        dd_div(self, rhs)
    }
}

pub fn cexp<T: Real>(z: Complex<T>) -> Complex<T> {
    let m = z.re.exp_r();
    let (s, c) = z.im.sin_cos_r();
    Complex::new(m * c, m * s)
}

/// Principal logarithm.
pub fn cln<T: Real>(z: Complex<T>) -> Complex<T> {
    Complex::new(z.norm_sqr().ln_r() * T::of(0.5), z.im.atan2_r(z.re))
}

pub fn cdiv<T: Real>(a: Complex<T>, b: Complex<T>) -> Complex<T> {
    let n = b.norm_sqr();
    let num = a * b.conj();
    Complex::new(num.re.quot(n), num.im.quot(n))
}

pub fn cabs<T: Real>(z: Complex<T>) -> T {
    z.norm_sqr().sqrt()
}

pub fn lift<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::of(z.re), T::of(z.im))
}

pub fn lower<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.approx(), z.im.approx())
}
