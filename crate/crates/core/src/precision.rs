//! Arbitrary-precision evaluation of the Dedekind eta function, the
//! j-invariant and the double eta-quotient
//! `w(z) = eta(z/p1) eta(z/p2) / (eta(z) eta(z/(p1 p2)))`.
//!
//! Every evaluation point is given as an exact input `z` together with an
//! integer matrix `G` of positive determinant; the function is evaluated at
//! `G z`. Reduction to the fundamental domain is composed with `G` so the
//! reduced point is computed from `z` in one Moebius step, which avoids
//! amplifying the rounding error of intermediate points such as `z/N`.
//!
//! Error model: each value carries no explicit interval. Instead the working
//! precision is chosen as target + guard bits, where the guard covers the
//! series length, the cancellation in the Moebius step and the magnitude of
//! the result, so the absolute error stays below `2^-prec`.

use std::fmt;

use num_bigint::BigInt;
use rug::float::Constant;
use rug::Float;

use crate::arith::{gcd, is_odd_prime, jacobi};
use crate::error::{Error, Result};
use crate::sl2::Mat2;

/// Smallest supported precision in bits.
pub const MIN_PREC: u32 = 64;
/// Working precisions above this are reported as exhausted.
pub const MAX_WORKING_PREC: u32 = 1 << 22;
const GUARD_BASE: u32 = 32;

/// A complex number with `rug::Float` parts.
#[derive(Clone, Debug, PartialEq)]
pub struct ApComplex {
    re: Float,
    im: Float,
}

impl ApComplex {
    pub fn new(re: Float, im: Float) -> Self {
        let prec = re.prec().max(im.prec()).max(MIN_PREC);
        let mut re = re;
        let mut im = im;
        if re.prec() < prec {
            re.set_prec(prec);
        }
        if im.prec() < prec {
            im.set_prec(prec);
        }
        ApComplex { re, im }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        let prec = prec.max(MIN_PREC);
        ApComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_int(re: i64, prec: u32) -> Self {
        let prec = prec.max(MIN_PREC);
        ApComplex {
            re: Float::with_val(prec, re),
            im: Float::new(prec),
        }
    }

    /// Parses decimal strings for the two parts, e.g. `("0.3", "2")`.
    pub fn parse(re: &str, im: &str, prec: u32) -> Option<Self> {
        let prec = prec.max(MIN_PREC);
        let re = Float::with_val(prec, Float::parse(re).ok()?);
        let im = Float::with_val(prec, Float::parse(im).ok()?);
        Some(ApComplex { re, im })
    }

    /// `(re + i*sqrt(-disc)) / den` for a negative integer `disc`.
    pub fn quadratic(re: i64, disc: i64, den: i64, prec: u32) -> Self {
        let prec = prec.max(MIN_PREC);
        let r = Float::with_val(prec, re) / den;
        let i = Float::with_val(prec, -disc).sqrt() / den;
        ApComplex { re: r, im: i }
    }

    /// `exp(2 pi i * num / den)`
    pub fn root_of_unity(num: i64, den: i64, prec: u32) -> Self {
        let num = num.rem_euclid(den);
        let prec = prec.max(MIN_PREC);
        let angle = Float::with_val(prec, Constant::Pi) * 2i64 * num / den;
        let (s, c) = angle.sin_cos(Float::new(prec));
        ApComplex { re: c, im: s }
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        let prec = prec.max(MIN_PREC);
        ApComplex {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ApComplex {
            re: self.re.clone(),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    /// Approximate `log2 |self|`; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        let e = |f: &Float| f.get_exp().map(|e| e as f64).unwrap_or(f64::NEG_INFINITY);
        let m = e(&self.re).max(e(&self.im));
        if m == f64::NEG_INFINITY {
            return m;
        }
        let shift = m as i32;
        let r = (Float::with_val(64, &self.re) >> shift)
            .to_f64()
            .hypot((Float::with_val(64, &self.im) >> shift).to_f64());
        m + r.log2()
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        ApComplex {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        ApComplex {
            re: Float::with_val(p, &self.re - &o.re),
            im: Float::with_val(p, &self.im - &o.im),
        }
    }

    pub fn neg(&self) -> Self {
        ApComplex {
            re: Float::with_val(self.re.prec(), -&self.re),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        let ac = Float::with_val(p, &self.re * &o.re);
        let bd = Float::with_val(p, &self.im * &o.im);
        let ad = Float::with_val(p, &self.re * &o.im);
        let bc = Float::with_val(p, &self.im * &o.re);
        ApComplex {
            re: ac - bd,
            im: ad + bc,
        }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        ApComplex {
            re: Float::with_val(self.re.prec(), &self.re * k),
            im: Float::with_val(self.im.prec(), &self.im * k),
        }
    }

    pub fn add_int(&self, k: i64) -> Self {
        ApComplex {
            re: Float::with_val(self.re.prec(), &self.re + k),
            im: self.im.clone(),
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        let den = o.norm_sqr();
        let num = self.mul(&o.conj());
        ApComplex {
            re: Float::with_val(p, &num.re / &den),
            im: Float::with_val(p, &num.im / &den),
        }
    }

    pub fn recip(&self) -> Self {
        ApComplex::from_int(1, self.prec()).div(self)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut acc = ApComplex::from_int(1, self.prec());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            n >>= 1;
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        ApComplex {
            re: Float::with_val(p, &r * &c),
            im: r * s,
        }
    }

    /// Principal square root (real part non-negative).
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return self.clone();
        }
        let r = self.abs();
        if !self.re.is_sign_negative() {
            let re = (Float::with_val(p, &r + &self.re) / 2u32).sqrt();
            let im = Float::with_val(p, &self.im / &re) / 2u32;
            ApComplex { re, im }
        } else {
            let t = (Float::with_val(p, &r - &self.re) / 2u32).sqrt();
            let re = Float::with_val(p, self.im.abs_ref()) / &t / 2u32;
            let im = if self.im.is_sign_negative() { -t } else { t };
            ApComplex { re, im }
        }
    }

    /// Rounds the real part to the nearest integer.
    pub fn round_real(&self) -> BigInt {
        let i = self.re.to_integer().expect("finite value");
        i.to_string().parse().expect("integer string")
    }

    /// Distance of the value from the nearest (real) integer.
    pub fn integer_residual(&self) -> f64 {
        let rounded = Float::with_val(self.prec(), self.re.round_ref());
        let dr = Float::with_val(self.prec(), &self.re - &rounded).to_f64().abs();
        dr.max(self.im.to_f64().abs())
    }
}

impl fmt::Display for ApComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.prec() as f64) * std::f64::consts::LOG10_2) as usize;
        let digits = digits.clamp(6, 40);
        write!(
            f,
            "{} + {}i",
            self.re.to_string_radix(10, Some(digits)),
            self.im.to_string_radix(10, Some(digits))
        )
    }
}

/// A point with strictly positive imaginary part.
#[derive(Clone, Debug, PartialEq)]
pub struct UpperHalfPoint {
    value: ApComplex,
}

impl UpperHalfPoint {
    pub fn new(value: ApComplex) -> Result<Self> {
        if value.im.is_sign_negative() || value.im.is_zero() || !value.im.is_finite() {
            return Err(Error::NotInUpperHalfPlane);
        }
        if !value.re.is_finite() {
            return Err(Error::NotInUpperHalfPlane);
        }
        Ok(UpperHalfPoint { value })
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Result<Self> {
        Self::new(ApComplex::from_f64(re, im, prec))
    }

    /// `alpha = (-b + sqrt(D)) / (2a)` for a form `[a, b, c]` of discriminant `D < 0`.
    pub fn quadratic(a: i64, b: i64, disc: i64, prec: u32) -> Result<Self> {
        if disc >= 0 || a <= 0 {
            return Err(Error::NotInUpperHalfPlane);
        }
        Self::new(ApComplex::quadratic(-b, disc, 2 * a, prec))
    }

    pub fn value(&self) -> &ApComplex {
        &self.value
    }

    pub fn prec(&self) -> u32 {
        self.value.prec()
    }

    /// `g z` for an integer matrix of positive determinant, rounded to `prec`.
    pub fn transform(&self, g: &Mat2, prec: u32) -> Result<UpperHalfPoint> {
        if g.det() <= 0 {
            return Err(Error::NotUnimodular(g.a, g.b, g.c, g.d));
        }
        let wp = prec.max(self.prec()) + mobius_extra_bits(g, &self.value);
        UpperHalfPoint::new(mobius(g, &self.value, wp).with_prec(prec))
    }
}

/// Extra bits lost to cancellation when applying `g` to `z`.
fn mobius_extra_bits(g: &Mat2, z: &ApComplex) -> u32 {
    let entry_bits = 64 - g.max_entry().leading_zeros();
    let abs_bits = z.log2_abs().max(0.0).ceil() as u32;
    let im = z.im.to_f64();
    let im_bits = if im > 0.0 {
        (-im.log2()).max(0.0).ceil() as u32
    } else {
        64
    };
    2 * entry_bits + abs_bits + 2 * im_bits + 8
}

/// `(a z + b) / (c z + d)` at precision `wp`, treating `z` as exact.
fn mobius(g: &Mat2, z: &ApComplex, wp: u32) -> ApComplex {
    let z = z.with_prec(wp);
    let num = z.mul_int(g.a).add_int(g.b);
    let den = z.mul_int(g.c).add_int(g.d);
    num.div(&den)
}

/// `c z + d` at precision `wp`.
fn linear(c: i64, d: i64, z: &ApComplex, wp: u32) -> ApComplex {
    z.with_prec(wp).mul_int(c).add_int(d)
}

fn reduce_with_matrix(z: &ApComplex) -> Result<(ApComplex, Mat2)> {
    let prec = z.prec();
    let one_minus_eps = Float::with_val(prec, 1) - (Float::with_val(prec, 1) >> (prec / 2));
    let mut w = z.clone();
    let mut m = Mat2::IDENTITY;
    for _ in 0..100_000 {
        let n = w.re.to_integer().ok_or(Error::PrecisionExhausted { bits: prec })?;
        let n = n
            .to_i64()
            .ok_or(Error::PrecisionExhausted { bits: prec })?;
        if n != 0 {
            w = w.add_int(-n);
            m = Mat2::translation(-n).mul(&m);
        }
        if w.norm_sqr() < one_minus_eps {
            if w.im.is_zero() || w.im.is_sign_negative() {
                return Err(Error::PrecisionExhausted { bits: prec });
            }
            w = w.recip().neg();
            m = Mat2::S.mul(&m);
        } else {
            return Ok((w, m));
        }
    }
    Err(Error::PrecisionExhausted { bits: prec })
}

/// Moves `z` into the standard fundamental domain.
///
/// Returns `(z', M)` with `z' = M z`, `det M = 1`, `|re z'| <= 1/2` and
/// `|z'| >= 1 - 2^(-prec/2)`. Panics only if the matrix entries overflow
/// `i64`, which needs an imaginary part below roughly `2^-120`.
pub fn reduce_to_fundamental_domain(z: &UpperHalfPoint) -> (UpperHalfPoint, Mat2) {
    let (w, m) = reduce_with_matrix(&z.value).expect("reduction within i64 range");
    (UpperHalfPoint { value: w }, m)
}

/// The multiplier of the eta function for a unimodular matrix:
/// `eta(M z) = sign * zeta_24^exponent24 * sqrt(c z + d) * eta(z)` with the
/// principal square root, after normalizing `M` to `c >= 0` (and `d > 0` if
/// `c == 0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EtaMultiplierData {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    /// Odd part of `c` (1 when `c == 0`).
    pub gamma: i64,
    /// 2-adic valuation of `c` (1 when `c == 0`).
    pub lambda: u32,
    /// Jacobi symbol `(a | gamma)`.
    pub sign: i32,
    pub exponent24: u32,
}

impl EtaMultiplierData {
    /// The normalized matrix the data refers to.
    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.a, self.b, self.c, self.d)
    }

    /// `sign * exp(2 pi i exponent24 / 24)`
    pub fn value(&self, prec: u32) -> ApComplex {
        let z = ApComplex::root_of_unity(self.exponent24 as i64, 24, prec);
        if self.sign < 0 {
            z.neg()
        } else {
            z
        }
    }
}

pub fn eta_multiplier(m: &Mat2) -> Result<EtaMultiplierData> {
    if !m.is_unimodular() {
        return Err(Error::NotUnimodular(m.a, m.b, m.c, m.d));
    }
    let m = if m.c < 0 || (m.c == 0 && m.d < 0) {
        m.neg()
    } else {
        *m
    };
    let (gamma, lambda) = if m.c == 0 {
        (1i64, 1u32)
    } else {
        let lambda = m.c.trailing_zeros();
        (m.c >> lambda, lambda)
    };
    let (a, b, c, d) = (m.a as i128, m.b as i128, m.c as i128, m.d as i128);
    let g = gamma as i128;
    let l = lambda as i128;
    // a^2 - 1 is divisible by 8 for odd a; for even a, c is odd and lambda = 0
    let half_term = 3 * l * (a * a - 1);
    debug_assert!(half_term % 2 == 0);
    let e = a * b + c * (d * (1 - a * a) - a) + 3 * g * (a - 1) + half_term / 2;
    let sign = if gamma == 1 { 1 } else { jacobi(m.a, gamma) };
    Ok(EtaMultiplierData {
        a: m.a,
        b: m.b,
        c: m.c,
        d: m.d,
        gamma,
        lambda,
        sign,
        exponent24: e.rem_euclid(24) as u32,
    })
}

/// `2 pi / ln 2`: bits of `|q|^-1` per unit of imaginary part.
const BITS_PER_IM: f64 = 9.064_720_283_654_387;

/// `1 + sum_{n>=1} (-1)^n (q^{n(3n-1)/2} + q^{n(3n+1)/2})` at precision `wp`.
fn pentagonal_sum(q: &ApComplex, im: f64, wp: u32) -> ApComplex {
    let bits_per_power = BITS_PER_IM * im;
    let mut sum = ApComplex::from_int(1, wp);
    let mut qa = ApComplex::from_int(1, wp);
    let mut step = q.clone();
    let mut qn = ApComplex::from_int(1, wp);
    let q3 = q.pow(3);
    for n in 1u64.. {
        qa = qa.mul(&step);
        step = step.mul(&q3);
        qn = qn.mul(q);
        let term = qa.add(&qa.mul(&qn));
        sum = if n % 2 == 1 { sum.sub(&term) } else { sum.add(&term) };
        let e1 = (n * (3 * n - 1) / 2) as f64;
        if e1 * bits_per_power > wp as f64 + 8.0 {
            break;
        }
    }
    sum
}

fn series_terms(im: f64, wp: u32) -> u32 {
    let per = BITS_PER_IM * im.max(0.8);
    ((2.0 * (wp as f64 + 8.0) / (3.0 * per)).sqrt().ceil() as u32).max(1)
}

/// `exp(2 pi i z / k)`
fn q_power(z: &ApComplex, k: i64, wp: u32) -> ApComplex {
    let two_pi = Float::with_val(wp, Constant::Pi) * 2u32;
    let arg = ApComplex::new(
        -Float::with_val(wp, &z.im * &two_pi) / k,
        Float::with_val(wp, &z.re * &two_pi) / k,
    );
    arg.exp()
}

/// eta at a point of the fundamental domain, straight from the series.
fn eta_reduced(z: &ApComplex, wp: u32) -> ApComplex {
    let z = z.with_prec(wp);
    let im = z.im.to_f64();
    let q = q_power(&z, 1, wp);
    q_power(&z, 24, wp).mul(&pentagonal_sum(&q, im, wp))
}

struct Reduced {
    /// Reduced point `M g z`.
    point: ApComplex,
    /// Normalized multiplier of `M`.
    mult: EtaMultiplierData,
    /// `c (g z) + d`, computed from `z` directly.
    cz_d: ApComplex,
}

/// Reduces `g z` and recomputes the reduced point from `z` at `wp` bits.
fn reduce_image(z: &ApComplex, g: &Mat2, wp: u32) -> Result<(Reduced, u32)> {
    let extra = mobius_extra_bits(g, z);
    let w = mobius(g, z, wp + extra);
    let (_, m) = reduce_with_matrix(&w)?;
    let mult = eta_multiplier(&m)?;
    let mn = mult.matrix();
    let h = mn.mul(g);
    let wp2 = wp + mobius_extra_bits(&h, z);
    if wp2 > MAX_WORKING_PREC {
        return Err(Error::PrecisionExhausted { bits: wp2 });
    }
    let point = mobius(&h, z, wp2);
    // c (g z) + d = (h21 z + h22) / (g21 z + g22)
    let cz_d = linear(h.c, h.d, z, wp2).div(&linear(g.c, g.d, z, wp2));
    Ok((Reduced { point, mult, cz_d }, wp2))
}

/// eta(g z) with relative error about `2^-(wp - 8)`.
fn eta_image_rel(z: &ApComplex, g: &Mat2, wp: u32) -> Result<ApComplex> {
    let (red, wp2) = reduce_image(z, g, wp)?;
    let im = red.point.im.to_f64();
    if !(im > 0.5) {
        return Err(Error::PrecisionExhausted { bits: wp2 });
    }
    let wp2 = wp2 + (32 - series_terms(im, wp2).leading_zeros());
    let eta_red = eta_reduced(&red.point, wp2);
    let factor = red.mult.value(wp2).mul(&red.cz_d.with_prec(wp2).sqrt());
    Ok(eta_red.div(&factor))
}

fn guard(wp: u32) -> u32 {
    GUARD_BASE + (32 - series_terms(0.866, wp).leading_zeros())
}

fn check_prec(prec: u32) -> u32 {
    prec.max(MIN_PREC)
}

/// Evaluates `f(wp)` and repeats with more bits when the result is large,
/// so that absolute error stays below `2^-prec`.
fn with_magnitude_guard<F>(prec: u32, f: F) -> Result<ApComplex>
where
    F: Fn(u32) -> Result<ApComplex>,
{
    let wp = prec + guard(prec);
    let v = f(wp)?;
    let mag = v.log2_abs();
    if mag.is_finite() && mag > 0.0 {
        let wp = wp + mag.ceil() as u32;
        if wp > MAX_WORKING_PREC {
            return Err(Error::PrecisionExhausted { bits: wp });
        }
        return Ok(f(wp)?.with_prec(prec));
    }
    Ok(v.with_prec(prec))
}

/// Dedekind eta function at `g z` for an integer matrix `g` of positive determinant.
pub fn eta_at(z: &UpperHalfPoint, g: &Mat2, prec: u32) -> Result<ApComplex> {
    if g.det() <= 0 {
        return Err(Error::NotUnimodular(g.a, g.b, g.c, g.d));
    }
    let prec = check_prec(prec);
    with_magnitude_guard(prec, |wp| eta_image_rel(&z.value, g, wp))
}

/// Dedekind eta function `q^(1/24) prod (1 - q^n)`.
pub fn eta(z: &UpperHalfPoint, prec: u32) -> Result<ApComplex> {
    eta_at(z, &Mat2::IDENTITY, prec)
}

/// Klein's j-invariant at `g z`, via `E4^3 / eta^24` on the reduced point.
pub fn j_invariant_at(z: &UpperHalfPoint, g: &Mat2, prec: u32) -> Result<ApComplex> {
    if g.det() <= 0 {
        return Err(Error::NotUnimodular(g.a, g.b, g.c, g.d));
    }
    let prec = check_prec(prec);
    let probe = reduce_image(&z.value, g, 64)?.0.point.im.to_f64();
    let mag = (BITS_PER_IM * probe).ceil() as u32 + 16;
    let wp = prec + guard(prec) + mag;
    if wp > MAX_WORKING_PREC {
        return Err(Error::PrecisionExhausted { bits: wp });
    }
    let (red, wp2) = reduce_image(&z.value, g, wp)?;
    let im = red.point.im.to_f64();
    let q = q_power(&red.point, 1, wp2);
    let e4 = eisenstein_e4(&q, im, wp2);
    let eta24 = eta_reduced(&red.point, wp2).pow(24);
    Ok(e4.pow(3).div(&eta24).with_prec(prec))
}

pub fn j_invariant(z: &UpperHalfPoint, prec: u32) -> Result<ApComplex> {
    j_invariant_at(z, &Mat2::IDENTITY, prec)
}

/// `E4 = 1 + 240 sum sigma_3(n) q^n`, Horner evaluation.
fn eisenstein_e4(q: &ApComplex, im: f64, wp: u32) -> ApComplex {
    let per = BITS_PER_IM * im;
    // 240 n^4 |q|^n < 2^-wp
    let mut n_max = 1usize;
    while (n_max as f64) * per - 4.0 * (n_max as f64).log2() - 8.0 < wp as f64 + 8.0 {
        n_max += 1;
    }
    let mut sigma3 = vec![0u128; n_max + 1];
    for d in 1..=n_max {
        let cube = (d as u128).pow(3);
        let mut k = d;
        while k <= n_max {
            sigma3[k] += cube;
            k += d;
        }
    }
    let mut acc = ApComplex::from_int(0, wp);
    for n in (1..=n_max).rev() {
        let s = Float::with_val(wp, sigma3[n]);
        acc = ApComplex::new(Float::with_val(wp, &acc.re + &s), acc.im).mul(q);
    }
    acc.mul_int(240).add_int(1)
}

/// `s = 24 / gcd(24, (p1 - 1)(p2 - 1))`
pub fn exponent_s(p1: i64, p2: i64) -> u32 {
    (24 / gcd(24, (p1 - 1) * (p2 - 1))) as u32
}

fn check_primes(p1: i64, p2: i64) -> Result<()> {
    if p1 == p2 || !is_odd_prime(p1) || !is_odd_prime(p2) {
        return Err(Error::UnsupportedLevel(format!(
            "p1 = {p1}, p2 = {p2} must be distinct odd primes"
        )));
    }
    Ok(())
}

fn double_eta_rel(z: &ApComplex, g: &Mat2, p1: i64, p2: i64, wp: u32) -> Result<ApComplex> {
    let n = p1 * p2;
    let e1 = eta_image_rel(z, &Mat2::divide_by(p1).mul(g), wp)?;
    let e2 = eta_image_rel(z, &Mat2::divide_by(p2).mul(g), wp)?;
    let e0 = eta_image_rel(z, g, wp)?;
    let en = eta_image_rel(z, &Mat2::divide_by(n).mul(g), wp)?;
    Ok(e1.mul(&e2).div(&e0.mul(&en)))
}

/// `w_{p1,p2}(g z)`
pub fn double_eta_quotient_at(
    z: &UpperHalfPoint,
    g: &Mat2,
    p1: i64,
    p2: i64,
    prec: u32,
) -> Result<ApComplex> {
    check_primes(p1, p2)?;
    if g.det() <= 0 {
        return Err(Error::NotUnimodular(g.a, g.b, g.c, g.d));
    }
    let prec = check_prec(prec);
    with_magnitude_guard(prec, |wp| double_eta_rel(&z.value, g, p1, p2, wp))
}

/// `w_{p1,p2}(z) = eta(z/p1) eta(z/p2) / (eta(z) eta(z/(p1 p2)))`
pub fn double_eta_quotient(z: &UpperHalfPoint, p1: i64, p2: i64, prec: u32) -> Result<ApComplex> {
    double_eta_quotient_at(z, &Mat2::IDENTITY, p1, p2, prec)
}

/// `w_{p1,p2}(g z)^s`
pub fn w_pow_s_at(z: &UpperHalfPoint, g: &Mat2, p1: i64, p2: i64, prec: u32) -> Result<ApComplex> {
    check_primes(p1, p2)?;
    if g.det() <= 0 {
        return Err(Error::NotUnimodular(g.a, g.b, g.c, g.d));
    }
    let s = exponent_s(p1, p2);
    let prec = check_prec(prec);
    let extra = 32 - s.leading_zeros();
    with_magnitude_guard(prec, |wp| {
        Ok(double_eta_rel(&z.value, g, p1, p2, wp + extra)?.pow(s))
    })
}

/// `w_{p1,p2}(z)^s` with `s = 24 / gcd(24, (p1-1)(p2-1))`.
pub fn w_pow_s(z: &UpperHalfPoint, p1: i64, p2: i64, prec: u32) -> Result<ApComplex> {
    w_pow_s_at(z, &Mat2::IDENTITY, p1, p2, prec)
}
