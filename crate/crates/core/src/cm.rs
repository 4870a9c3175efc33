//! CM curve construction over a prime field from the class polynomial of the
//! double eta-quotient and the modular polynomial linking it to `j`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{exact_sqrt, factor, gcd, is_prime, isqrt, legendre, mul_mod, pow_mod};
use crate::atkin::multiple_root_condition;
use crate::classpoly::{check_integrality_conditions, compute_class_polynomial_with, PrecisionPolicy};
use crate::error::{Error, Result};
use crate::ffield::{roots_mod_l, roots_with_multiplicity, sqrt_mod_l, FpElement, FpPolynomial};
use crate::modpoly::{compute_modular_polynomial_with, embedded, evaluate_in_j_mod_l, ModularPolynomial};
use crate::qforms::{b_candidates, Discriminant};

/// Random points used to confirm a group order.
pub const ORDER_CHECKS: usize = 20;
/// Largest field size handled by [`point_count`].
pub const MAX_COUNT_PRIME: u64 = 1 << 40;
const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

/// `4q = t^2 - D v^2` with `t > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceSolution {
    pub q: u64,
    pub t: i64,
    pub v: i64,
}

/// `t^2 + |D| v^2 = 4q` with the smallest `v >= 1`, or `None` when `q` does not split.
pub fn find_trace(d: i64, q: u64) -> Option<TraceSolution> {
    if d >= 0 || q < 3 || !is_prime(q) || d.rem_euclid(q as i64) == 0 {
        return None;
    }
    let four_q = 4 * q as i128;
    let ad = -(d as i128);
    if q < EXHAUSTIVE_LIMIT {
        let mut v = 1i128;
        while ad * v * v < four_q {
            if let Some(t) = exact_sqrt(four_q - ad * v * v) {
                if t != 0 {
                    return Some(TraceSolution {
                        q,
                        t: t as i64,
                        v: v as i64,
                    });
                }
            }
            v += 1;
        }
        return None;
    }
    cornacchia(d, q)
}

/// Cornacchia's algorithm for `t^2 + |D| v^2 = 4q`.
fn cornacchia(d: i64, q: u64) -> Option<TraceSolution> {
    let dm = FpElement::reduce(d as i128, q);
    let mut r = sqrt_mod_l(dm)?.value() as i128;
    if (r - d as i128).rem_euclid(2) != 0 {
        r = q as i128 - r;
    }
    let (mut a, mut b) = (2 * q as i128, r);
    let limit = isqrt(4 * q as u128) as i128;
    while b > limit {
        (a, b) = (b, a % b);
    }
    let rest = 4 * q as i128 - b * b;
    let ad = -(d as i128);
    if rest <= 0 || rest % ad != 0 {
        return None;
    }
    let v = exact_sqrt(rest / ad)?;
    (b != 0).then_some(TraceSolution {
        q,
        t: b as i64,
        v: v as i64,
    })
}

/// `y^2 = x^3 + a4 x + a6` over `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EllipticCurve {
    pub q: u64,
    pub a4: FpElement,
    pub a6: FpElement,
}

/// Affine point or the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine(u64, u64),
}

impl EllipticCurve {
    pub fn new(a4: FpElement, a6: FpElement) -> Result<Self> {
        let q = a4.modulus();
        if q <= 3 || a6.modulus() != q {
            return Err(Error::NotPrime(q));
        }
        let c = EllipticCurve { q, a4, a6 };
        if c.discriminant_term().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    /// `4 a4^3 + 27 a6^2`
    fn discriminant_term(&self) -> FpElement {
        let k = |v: i128| FpElement::reduce(v, self.q);
        k(4) * self.a4.pow(3) + k(27) * self.a6 * self.a6
    }

    pub fn j_invariant(&self) -> FpElement {
        let num = FpElement::reduce(1728 * 4, self.q) * self.a4.pow(3);
        num * self.discriminant_term().inv().expect("nonsingular curve")
    }

    /// `(c^2 a4, c^3 a6)`; a quadratic twist when `c` is a non-residue.
    pub fn twist(&self, c: FpElement) -> EllipticCurve {
        EllipticCurve {
            q: self.q,
            a4: c * c * self.a4,
            a6: c * c * c * self.a6,
        }
    }

    fn rhs(&self, x: u64) -> u64 {
        let q = self.q;
        let x2 = mul_mod(x, x, q);
        let x3 = mul_mod(x2, x, q);
        ((x3 as u128 + mul_mod(self.a4.value(), x, q) as u128 + self.a6.value() as u128) % q as u128) as u64
    }

    pub fn contains(&self, p: &Point) -> bool {
        match *p {
            Point::Infinity => true,
            Point::Affine(x, y) => mul_mod(y, y, self.q) == self.rhs(x),
        }
    }

    pub fn random_point<R: Rng>(&self, rng: &mut R) -> Point {
        loop {
            let x = rng.gen_range(0..self.q);
            let f = self.rhs(x);
            if f == 0 {
                return Point::Affine(x, 0);
            }
            if let Some(y) = sqrt_mod_l(FpElement::reduce(f as i128, self.q)) {
                let y = if rng.gen::<bool>() { y.value() } else { (self.q - y.value()) % self.q };
                return Point::Affine(x, y);
            }
        }
    }

    pub fn neg(&self, p: &Point) -> Point {
        match *p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x, (self.q - y) % self.q),
        }
    }

    pub fn add(&self, p: &Point, r: &Point) -> Point {
        let q = self.q;
        let (x1, y1, x2, y2) = match (*p, *r) {
            (Point::Infinity, _) => return *r,
            (_, Point::Infinity) => return *p,
            (Point::Affine(a, b), Point::Affine(c, d)) => (a, b, c, d),
        };
        let inv = |v: u64| pow_mod(v, q - 2, q);
        let lambda = if x1 == x2 {
            if (y1 + y2) % q == 0 {
                return Point::Infinity;
            }
            let num = (3 * mul_mod(x1, x1, q) as u128 + self.a4.value() as u128) % q as u128;
            mul_mod(num as u64, inv(2 * y1 % q), q)
        } else {
            let num = (y2 + q - y1) % q;
            mul_mod(num, inv((x2 + q - x1) % q), q)
        };
        let x3 = ((mul_mod(lambda, lambda, q) as u128 + 2 * q as u128 - x1 as u128 - x2 as u128)
            % q as u128) as u64;
        let y3 = (mul_mod(lambda, (x1 + q - x3) % q, q) + q - y1) % q;
        Point::Affine(x3, y3)
    }

    pub fn mul(&self, p: &Point, k: u64) -> Point {
        let mut acc = Point::Infinity;
        let mut base = *p;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Exact order of `p`, given a multiple `m` of it.
    fn order_from_multiple(&self, p: &Point, m: u64) -> u64 {
        let mut ord = m;
        for (prime, _) in factor(m) {
            while ord.is_multiple_of(prime) && self.mul(p, ord / prime) == Point::Infinity {
                ord /= prime;
            }
        }
        ord
    }

    /// Some `m` in `[lo, hi]` with `m p = O`, by baby-step giant-step.
    fn multiple_in_interval(&self, p: &Point, lo: u64, hi: u64) -> Option<u64> {
        let width = hi - lo + 1;
        let steps = isqrt(width as u128) as u64 + 1;
        let mut baby: HashMap<u64, u64> = HashMap::new();
        let mut jp = Point::Infinity;
        for j in 0..steps {
            match jp {
                Point::Infinity => {
                    if j > 0 {
                        // order divides j; any multiple of j in range works
                        let m = lo.div_ceil(j) * j;
                        return (m <= hi).then_some(m);
                    }
                }
                Point::Affine(x, _) => {
                    baby.entry(x).or_insert(j);
                }
            }
            jp = self.add(&jp, p);
        }
        let giant = self.mul(p, steps);
        let mut r = self.mul(p, lo);
        let mut base = lo;
        while base <= hi + steps {
            match r {
                Point::Infinity => {
                    if base >= lo && base <= hi {
                        return Some(base);
                    }
                }
                Point::Affine(x, y) => {
                    if let Some(&j) = baby.get(&x) {
                        let jp = self.mul(p, j);
                        let cand = match jp {
                            Point::Affine(_, yj) if yj == y => base.checked_sub(j),
                            _ => Some(base + j),
                        };
                        if let Some(m) = cand {
                            if m >= lo && m <= hi && self.mul(p, m) == Point::Infinity {
                                return Some(m);
                            }
                        }
                    }
                }
            }
            r = self.add(&r, &giant);
            base += steps;
        }
        None
    }
}

/// `[q + 1 - 2 sqrt q, q + 1 + 2 sqrt q]`
pub fn hasse_interval(q: u64) -> (u64, u64) {
    let w = isqrt(4 * q as u128) as u64;
    (q + 1 - w, q + 1 + w)
}

fn nonresidue(q: u64) -> FpElement {
    (2..q)
        .find(|&c| legendre(c as i64, q as i64) == -1)
        .map(|c| FpElement::reduce(c as i128, q))
        .expect("odd prime has a non-residue")
}

/// Exact number of `F_q`-points including infinity.
pub fn point_count(curve: &EllipticCurve) -> Result<u64> {
    let q = curve.q;
    if q >= MAX_COUNT_PRIME {
        return Err(Error::ConditionsViolated(format!(
            "point counting supports q < 2^40, got {q}"
        )));
    }
    if q <= EXHAUSTIVE_LIMIT {
        Ok(count_by_character_sum(curve))
    } else {
        count_by_bsgs(curve)
    }
}

fn count_by_character_sum(curve: &EllipticCurve) -> u64 {
    let q = curve.q;
    let mut sum: i64 = 0;
    for x in 0..q {
        sum += legendre(curve.rhs(x) as i64, q as i64) as i64;
    }
    (q as i64 + 1 + sum) as u64
}

/// Orders of points on the curve and its twist until one order fits.
fn count_by_bsgs(curve: &EllipticCurve) -> Result<u64> {
    let q = curve.q;
    let (lo, hi) = hasse_interval(q);
    let twist = curve.twist(nonresidue(q));
    let mut rng = ChaCha8Rng::seed_from_u64(q);
    let (mut l, mut lt) = (1u64, 1u64);
    for _ in 0..200 {
        for (c, acc) in [(curve, &mut l), (&twist, &mut lt)] {
            let p = c.random_point(&mut rng);
            // orders of the twist pair sum to 2q + 2
            let m = c
                .multiple_in_interval(&p, lo, hi)
                .ok_or_else(|| Error::ConditionsViolated("no order in Hasse interval".into()))?;
            let ord = c.order_from_multiple(&p, m);
            *acc = *acc / gcd(*acc as i64, ord as i64) as u64 * ord;
        }
        let fits: Vec<u64> = (lo..=hi)
            .filter(|n| n % l == 0 && (2 * q + 2 - n).is_multiple_of(lt))
            .take(2)
            .collect();
        if fits.len() == 1 {
            return Ok(fits[0]);
        }
    }
    Err(Error::ConditionsViolated("group order not determined".into()))
}

/// The standard curve with `j`-invariant `jbar`.
pub fn curve_from_j(jbar: FpElement) -> Result<EllipticCurve> {
    let q = jbar.modulus();
    let k = |v: i128| FpElement::reduce(v, q);
    match jbar.value() {
        0 => EllipticCurve::new(k(0), k(1)),
        v if v == 1728 % q => EllipticCurve::new(k(1), k(0)),
        _ => {
            let kk = jbar * (k(1728) - jbar).inv().ok_or(Error::SingularCurve)?;
            EllipticCurve::new(k(3) * kk, k(2) * kk)
        }
    }
}

/// Every twist of the curve with invariant `jbar`: two in general, four for
/// `j = 1728` and six for `j = 0`.
pub fn twists(jbar: FpElement) -> Result<Vec<EllipticCurve>> {
    let q = jbar.modulus();
    let base = curve_from_j(jbar)?;
    let g = primitive_root(q);
    let k = |v: i128| FpElement::reduce(v, q);
    let out = match jbar.value() {
        0 if q % 3 == 1 => (0..6).map(|e| EllipticCurve { q, a4: k(0), a6: g.pow(e) }).collect(),
        v if v == 1728 % q && q % 4 == 1 => {
            (0..4).map(|e| EllipticCurve { q, a4: g.pow(e), a6: k(0) }).collect()
        }
        _ => vec![base, base.twist(nonresidue(q))],
    };
    Ok(out)
}

fn primitive_root(q: u64) -> FpElement {
    let primes: Vec<u64> = factor(q - 1).into_iter().map(|(p, _)| p).collect();
    (2..q)
        .find(|&g| primes.iter().all(|&p| pow_mod(g, (q - 1) / p, q) != 1))
        .map(|g| FpElement::reduce(g as i128, q))
        .expect("prime field has a generator")
}

/// A group order confirmed on random points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderCertificate {
    pub curve: EllipticCurve,
    pub order: u64,
    /// `q + 1 - order`
    pub trace: i64,
    pub checks_passed: usize,
    /// Another candidate passed the same tests.
    pub ambiguous: bool,
}

fn passes_order_checks<R: Rng>(curve: &EllipticCurve, n: u64, rng: &mut R) -> usize {
    (0..ORDER_CHECKS)
        .take_while(|_| {
            let p = curve.random_point(rng);
            curve.mul(&p, n) == Point::Infinity
        })
        .count()
}

/// Which of `q + 1 - t`, `q + 1 + t` is the order, decided by random points;
/// falls back to counting when both pass.
fn certify<R: Rng>(curve: &EllipticCurve, t: i64, rng: &mut R) -> Result<Option<OrderCertificate>> {
    let q = curve.q as i64;
    let passing: Vec<(u64, usize)> = [q + 1 - t, q + 1 + t]
        .iter()
        .map(|&n| (n as u64, passes_order_checks(curve, n as u64, rng)))
        .filter(|&(_, c)| c == ORDER_CHECKS)
        .collect();
    let order = match passing.as_slice() {
        [] => return Ok(None),
        [(n, _)] => *n,
        _ => {
            let n = point_count(curve)?;
            if n != (q + 1 - t) as u64 && n != (q + 1 + t) as u64 {
                return Ok(None);
            }
            n
        }
    };
    Ok(Some(OrderCertificate {
        curve: *curve,
        order,
        trace: q + 1 - order as i64,
        checks_passed: ORDER_CHECKS,
        ambiguous: false,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[derive(Default)]
pub struct CmOptions {
    pub b: Option<i64>,
    pub seed: u64,
    pub policy: PrecisionPolicy,
}


#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmCurve {
    pub curve: EllipticCurve,
    pub certificate: OrderCertificate,
    pub used_shortcut: bool,
    pub trace: TraceSolution,
    pub b: i64,
    pub wbar: FpElement,
    pub jbar: FpElement,
}

impl CmCurve {
    /// `q a4 a6 order trace shortcut=yes|no`
    pub fn to_line(&self) -> String {
        format!(
            "{} {} {} {} {} shortcut={}",
            self.curve.q,
            self.curve.a4,
            self.curve.a6,
            self.certificate.order,
            self.certificate.trace,
            if self.used_shortcut { "yes" } else { "no" }
        )
    }
}

fn modular_polynomial(p1: i64, p2: i64, policy: &PrecisionPolicy) -> Result<ModularPolynomial> {
    match embedded(p1, p2) {
        Some(phi) => Ok(phi),
        None => compute_modular_polynomial_with(p1, p2, policy),
    }
}

/// Default `B`: the first candidate with a multiple-root witness, else the first.
pub fn default_b(d: i64, p1: i64, p2: i64) -> Result<i64> {
    let n = p1 * p2;
    let cands = b_candidates(&Discriminant::new(d)?, n)?;
    for &b in &cands {
        if multiple_root_condition(d, n, b)?.is_some() {
            return Ok(b);
        }
    }
    cands.first().copied().ok_or(Error::NoSolution { d, p: n })
}

/// Builds a curve over `F_q` with CM by the order of discriminant `D`.
pub fn construct_cm_curve(d: i64, p1: i64, p2: i64, q: u64, opts: &CmOptions) -> Result<CmCurve> {
    if !check_integrality_conditions(d, p1, p2) {
        return Err(Error::ConditionsViolated(format!("D = {d}, p1 = {p1}, p2 = {p2}")));
    }
    if q <= 3 || !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let trace = find_trace(d, q).ok_or(Error::NoTrace { d, q })?;
    let b = match opts.b {
        Some(b) => b,
        None => default_b(d, p1, p2)?,
    };
    let h = compute_class_polynomial_with(d, p1, p2, b, &opts.policy)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let hq = FpPolynomial::from_bigints(&h.coeffs, q);
    let wbar = *roots_mod_l(&hq, &mut rng)
        .first()
        .ok_or_else(|| Error::NoRationalRoot(format!("H_B has no root mod {q}")))?;
    let phi = modular_polynomial(p1.min(p2), p1.max(p2), &opts.policy)?;
    let jpoly = evaluate_in_j_mod_l(&phi, wbar);
    let jroots = roots_with_multiplicity(&jpoly, &mut rng);
    if jroots.is_empty() {
        return Err(Error::NoRationalJRoot);
    }

    let repeated: Vec<_> = jroots.iter().filter(|r| r.multiplicity >= 2).collect();
    if let [single] = repeated.as_slice() {
        let jbar = single.value;
        for curve in twists(jbar)? {
            if let Some(cert) = certify(&curve, trace.t, &mut rng)? {
                return Ok(CmCurve {
                    curve,
                    certificate: cert,
                    used_shortcut: true,
                    trace,
                    b: h.b,
                    wbar,
                    jbar,
                });
            }
        }
        return Err(Error::NoRationalJRoot);
    }

    let admissible = [q + 1 - trace.t as u64, q + 1 + trace.t as u64];
    let mut found: Vec<(FpElement, OrderCertificate)> = Vec::new();
    for root in &jroots {
        for curve in twists(root.value)? {
            let n = point_count(&curve)?;
            if admissible.contains(&n) {
                let checks = passes_order_checks(&curve, n, &mut rng);
                if checks == ORDER_CHECKS {
                    found.push((
                        root.value,
                        OrderCertificate {
                            curve,
                            order: n,
                            trace: q as i64 + 1 - n as i64,
                            checks_passed: checks,
                            ambiguous: false,
                        },
                    ));
                    break;
                }
            }
        }
    }
    found.sort_by_key(|(j, c)| (*j, c.curve.a4, c.curve.a6));
    let ambiguous = found.len() > 1;
    let (jbar, mut cert) = found.into_iter().next().ok_or(Error::NoRationalJRoot)?;
    cert.ambiguous = ambiguous;
    Ok(CmCurve {
        curve: cert.curve,
        certificate: cert,
        used_shortcut: false,
        trace,
        b: h.b,
        wbar,
        jbar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(v: i64, q: u64) -> FpElement {
        FpElement::new(v, q).unwrap()
    }

    #[test]
    fn traces() {
        assert_eq!(find_trace(-56, 3593), Some(TraceSolution { q: 3593, t: 6, v: 16 }));
        assert_eq!(find_trace(-4, 5), Some(TraceSolution { q: 5, t: 4, v: 1 }));
        assert_eq!(find_trace(-56, 7), None);
        assert_eq!(find_trace(-56, 3591), None);
    }

    #[test]
    fn cornacchia_agrees_with_search() {
        for q in [3593u64, 10007, 65537, 1_000_003, 1_000_033] {
            for d in [-56i64, -4, -3, -23, -104] {
                let slow = {
                    let mut v = 1i128;
                    let mut out = None;
                    while (-(d as i128)) * v * v < 4 * q as i128 {
                        if let Some(t) = exact_sqrt(4 * q as i128 + d as i128 * v * v) {
                            if t > 0 {
                                out = Some((t as i64, v as i64));
                                break;
                            }
                        }
                        v += 1;
                    }
                    out
                };
                if d.rem_euclid(q as i64) == 0 {
                    continue;
                }
                let fast = cornacchia(d, q).map(|s| (s.t, s.v));
                assert_eq!(fast.is_some(), slow.is_some(), "d={d} q={q}");
                if let Some((t, v)) = fast {
                    assert_eq!(t as i128 * t as i128 - d as i128 * (v as i128).pow(2), 4 * q as i128);
                }
            }
        }
    }

    #[test]
    fn special_curves() {
        let c = curve_from_j(fe(1728, 3593)).unwrap();
        assert_eq!((c.a4.value(), c.a6.value()), (1, 0));
        let c = curve_from_j(fe(0, 3593)).unwrap();
        assert_eq!((c.a4.value(), c.a6.value()), (0, 1));
        let c = curve_from_j(fe(229, 3593)).unwrap();
        assert_eq!(c.j_invariant().value(), 229);
    }

    #[test]
    fn counting() {
        let c = EllipticCurve::new(fe(1, 5), fe(0, 5)).unwrap();
        assert_eq!(point_count(&c).unwrap(), 4);
        let c = curve_from_j(fe(229, 3593)).unwrap();
        let n = point_count(&c).unwrap();
        assert!(n == 3588 || n == 3600);
        let tw = c.twist(nonresidue(3593));
        assert_eq!(point_count(&tw).unwrap() + n, 2 * 3594);
    }

    #[test]
    fn bsgs_counting_matches_sum() {
        let q = 1_000_003u64;
        let c = EllipticCurve::new(fe(2, q), fe(3, q)).unwrap();
        let exhaustive = point_count(&c).unwrap();
        let (lo, hi) = hasse_interval(q);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = c.random_point(&mut rng);
        let m = c.multiple_in_interval(&p, lo, hi).unwrap();
        assert_eq!(c.mul(&p, m), Point::Infinity);
        assert_eq!(exhaustive % c.order_from_multiple(&p, m), 0);
        assert!(exhaustive >= lo && exhaustive <= hi);
    }

    #[test]
    fn bsgs_count_matches_character_sum() {
        for (q, a4, a6) in [(1_000_003u64, 2, 3), (1_000_033, 0, 7), (999_983, 5, 0), (65_537, 11, 13)] {
            let c = EllipticCurve::new(fe(a4, q), fe(a6, q)).unwrap();
            assert_eq!(count_by_bsgs(&c).unwrap(), count_by_character_sum(&c), "q={q}");
        }
    }

    #[test]
    fn bsgs_count_large_prime() {
        let q = 1_099_511_627_689u64;
        let c = EllipticCurve::new(fe(1, q), fe(1, q)).unwrap();
        let n = point_count(&c).unwrap();
        let (lo, hi) = hasse_interval(q);
        assert!(n >= lo && n <= hi);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert_eq!(passes_order_checks(&c, n, &mut rng), ORDER_CHECKS);
    }

    #[test]
    fn group_law() {
        let c = curve_from_j(fe(229, 3593)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = c.random_point(&mut rng);
        let r = c.random_point(&mut rng);
        assert!(c.contains(&p) && c.contains(&r));
        assert!(c.contains(&c.add(&p, &r)));
        assert_eq!(c.add(&p, &c.neg(&p)), Point::Infinity);
        assert_eq!(c.mul(&p, 5), c.add(&c.mul(&p, 2), &c.mul(&p, 3)));
    }

    #[test]
    fn pipeline_example() {
        let opts = CmOptions {
            b: Some(10),
            ..CmOptions::default()
        };
        let out = construct_cm_curve(-56, 3, 13, 3593, &opts).unwrap();
        assert!(out.used_shortcut);
        assert!([229, 2979, 2874, 2696].contains(&out.jbar.value()));
        assert!([3588, 3600].contains(&out.certificate.order));
        assert_eq!(out.certificate.checks_passed, ORDER_CHECKS);
        assert_eq!(out.curve.j_invariant(), out.jbar);
        let again = construct_cm_curve(-56, 3, 13, 3593, &opts).unwrap();
        assert_eq!(out, again);

        let opts16 = CmOptions {
            b: Some(16),
            ..CmOptions::default()
        };
        let out = construct_cm_curve(-56, 3, 13, 3593, &opts16).unwrap();
        assert!(!out.used_shortcut);
        assert!([3588, 3600].contains(&out.certificate.order));
    }
}
