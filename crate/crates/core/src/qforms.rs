//! Positive definite binary quadratic forms `[a, b, c] = a x^2 + b x y + c y^2`.

use std::fmt;

use crate::arith::{factor, gcd, isqrt, legendre, mod_inv, split_level};
use crate::error::{Error, Result};
use crate::precision::UpperHalfPoint;
use crate::sl2::Mat2;

/// A negative discriminant `D = f^2 d_K` with its fundamental part and conductor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Discriminant {
    d: i64,
    fundamental: i64,
    conductor: i64,
}

impl Discriminant {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidDiscriminant(d));
        }
        // largest f with f^2 | D and D/f^2 still a discriminant
        let mut f = 1u64;
        for (p, e) in factor(d.unsigned_abs()) {
            f *= p.pow(e / 2);
        }
        let fi = f as i64;
        let conductor = (1..=fi)
            .rev()
            .filter(|g| fi % g == 0 && d % (g * g) == 0)
            .find(|g| matches!((d / (g * g)).rem_euclid(4), 0 | 1))
            .unwrap_or(1);
        Ok(Discriminant {
            d,
            fundamental: d / (conductor * conductor),
            conductor,
        })
    }

    pub fn value(&self) -> i64 {
        self.d
    }

    /// `d_K`
    pub fn fundamental(&self) -> i64 {
        self.fundamental
    }

    /// `f`
    pub fn conductor(&self) -> i64 {
        self.conductor
    }

    pub fn is_fundamental(&self) -> bool {
        self.conductor == 1
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticForm {
    a: i64,
    b: i64,
    c: i64,
}

impl QuadraticForm {
    /// A primitive positive definite form.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let disc = b as i128 * b as i128 - 4 * a as i128 * c as i128;
        if a <= 0 || disc >= 0 || disc < i64::MIN as i128 || gcd(gcd(a, b), c) != 1 {
            return Err(Error::InvalidForm(a, b, c));
        }
        Ok(QuadraticForm { a, b, c })
    }

    /// The form `[a, b, (b^2 - D) / (4a)]`.
    pub fn from_ab(a: i64, b: i64, d: i64) -> Result<Self> {
        let num = b as i128 * b as i128 - d as i128;
        if a <= 0 || num % (4 * a as i128) != 0 {
            return Err(Error::InvalidForm(a, b, 0));
        }
        let c = i64::try_from(num / (4 * a as i128)).map_err(|_| Error::InvalidForm(a, b, 0))?;
        Self::new(a, b, c)
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    /// `|b| <= a <= c`, and `b >= 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && !(b < 0 && (-b == a || a == c))
    }

    /// `f o M`, i.e. `(x, y) -> f(p x + q y, r x + s y)` for `M = [[p, q], [r, s]]`.
    pub fn transform(&self, m: &Mat2) -> QuadraticForm {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (p, q, r, s) = (m.a as i128, m.b as i128, m.c as i128, m.d as i128);
        let na = a * p * p + b * p * r + c * r * r;
        let nb = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s;
        let nc = a * q * q + b * q * s + c * s * s;
        let cast = |v: i128| i64::try_from(v).expect("form coefficient overflow");
        QuadraticForm {
            a: cast(na),
            b: cast(nb),
            c: cast(nc),
        }
    }

    /// `alpha = (-b + sqrt(D)) / (2a)` in the upper half-plane.
    pub fn root(&self, prec: u32) -> UpperHalfPoint {
        UpperHalfPoint::quadratic(self.a, self.b, self.discriminant(), prec)
            .expect("positive definite form")
    }

    /// The line `a b c` used by the CLI.
    pub fn to_line(&self) -> String {
        format!("{} {} {}", self.a, self.b, self.c)
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

/// Gauss reduction. Returns `(g, M)` with `g` reduced and `g = f o M`.
pub fn reduce(f: &QuadraticForm) -> (QuadraticForm, Mat2) {
    let mut g = *f;
    let mut m = Mat2::IDENTITY;
    loop {
        // bring b into (-a, a]
        let two_a = 2 * g.a;
        let k = (g.a - g.b).div_euclid(two_a);
        if k != 0 {
            let t = Mat2::translation(k);
            g = g.transform(&t);
            m = m.mul(&t);
        }
        if g.a > g.c || (g.a == g.c && g.b < 0) {
            g = g.transform(&Mat2::S);
            m = m.mul(&Mat2::S);
            continue;
        }
        return (g, m);
    }
}

/// All reduced primitive forms of discriminant `D`, one per class.
pub fn enumerate_reduced_forms(d: &Discriminant) -> Vec<QuadraticForm> {
    let d = d.value();
    let a_max = isqrt((-d as u128) / 3) as i64;
    let mut out = Vec::new();
    for a in 1..=a_max {
        for b in (-a + 1)..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || gcd(gcd(a, b), c) != 1 {
                continue;
            }
            let f = QuadraticForm { a, b, c };
            if f.is_reduced() {
                out.push(f);
            }
        }
    }
    out.sort_by_key(|f| (f.a, f.b.abs(), -f.b, f.c));
    out
}

pub fn class_number(d: &Discriminant) -> usize {
    enumerate_reduced_forms(d).len()
}

/// Proper equivalence, decided by comparing reduced forms.
pub fn equivalent(f: &QuadraticForm, g: &QuadraticForm) -> Result<bool> {
    if f.discriminant() != g.discriminant() {
        return Err(Error::DiscriminantMismatch(f.discriminant(), g.discriminant()));
    }
    Ok(reduce(f).0 == reduce(g).0)
}

fn level_primes(n: i64) -> Result<(i64, i64)> {
    split_level(n).ok_or_else(|| {
        Error::UnsupportedLevel(format!("N = {n} is not a product of two distinct odd primes"))
    })
}

/// All `B mod 2N` with `B^2 = D mod 4N`, in increasing order.
pub fn b_candidates(d: &Discriminant, n: i64) -> Result<Vec<i64>> {
    let (p1, p2) = level_primes(n)?;
    for p in [p1, p2] {
        if legendre(d.value(), p) == -1 {
            return Err(Error::NoSolution { d: d.value(), p });
        }
    }
    let modulus = 4 * n as i128;
    let target = (d.value() as i128).rem_euclid(modulus);
    Ok((0..2 * n)
        .filter(|&b| (b as i128 * b as i128) % modulus == target)
        .collect())
}

/// A representative system of the classes of discriminant `D` such that every
/// form `[A, B_i, C]` has `gcd(A, N) = 1`, `B_i = B mod 2N` and `N | C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NSystem {
    pub d: Discriminant,
    pub n: i64,
    pub b: i64,
    pub forms: Vec<QuadraticForm>,
}

impl NSystem {
    /// Re-checks the defining conditions from scratch.
    pub fn validate(&self) -> bool {
        let two_n = 2 * self.n;
        let conditions = self.forms.iter().all(|f| {
            f.discriminant() == self.d.value()
                && gcd(f.a, self.n) == 1
                && (f.b - self.b).rem_euclid(two_n) == 0
                && f.c % self.n == 0
        });
        let mut reps: Vec<_> = self.forms.iter().map(|f| reduce(f).0).collect();
        let mut classes = enumerate_reduced_forms(&self.d);
        reps.sort();
        classes.sort();
        conditions && reps == classes
    }
}

/// Smallest value `A = f(x, y)` with `gcd(x, y) = 1` and `gcd(A, N) = 1`,
/// together with an `M` having first column `(x, y)`.
fn coprime_value(f: &QuadraticForm, n: i64) -> (i64, Mat2) {
    let mut bound = 4i64;
    loop {
        let mut best: Option<(i128, i64, i64)> = None;
        for y in 0..=bound {
            for x in -bound..=bound {
                if (y == 0 && x <= 0) || gcd(x, y) != 1 {
                    continue;
                }
                let v = f.eval(x, y);
                if gcd((v % n as i128) as i64, n) != 1 {
                    continue;
                }
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, x, y));
                }
            }
        }
        if let Some((v, x, y)) = best {
            let m = Mat2::complete_left_column(x, y).expect("coprime column");
            return (i64::try_from(v).expect("form value overflow"), m);
        }
        bound *= 2;
    }
}

/// Builds an N-system for `B`, with first form `[1, B, (B^2 - D)/4]`.
pub fn build_nsystem(d: &Discriminant, n: i64, b: i64) -> Result<NSystem> {
    level_primes(n)?;
    let two_n = 2 * n;
    let modulus = 4 * n as i128;
    if ((b as i128 * b as i128) - d.value() as i128).rem_euclid(modulus) != 0 {
        return Err(Error::InvalidB {
            b,
            d: d.value(),
            modulus: 4 * n,
        });
    }
    let b = b.rem_euclid(two_n);
    let mut forms = Vec::new();
    for rep in enumerate_reduced_forms(d) {
        let (a, m) = coprime_value(&rep, n);
        let g = rep.transform(&m);
        debug_assert_eq!(g.a, a);
        // B_i = g.b + 2 A k = B mod 2N
        let a_inv = mod_inv(a, n).expect("coprime leading coefficient");
        let k = ((b - g.b) / 2).rem_euclid(n) as i128 * a_inv as i128 % n as i128;
        let form = g.transform(&Mat2::translation(k as i64));
        forms.push(form);
    }
    Ok(NSystem {
        d: *d,
        n,
        b,
        forms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    fn qf(a: i64, b: i64, c: i64) -> QuadraticForm {
        QuadraticForm::new(a, b, c).unwrap()
    }

    #[test]
    fn discriminant_parts() {
        let d = disc(-56);
        assert_eq!((d.fundamental(), d.conductor()), (-56, 1));
        let d = disc(-108);
        assert_eq!((d.fundamental(), d.conductor()), (-3, 6));
        let d = disc(-16);
        assert_eq!((d.fundamental(), d.conductor()), (-4, 2));
        assert!(Discriminant::new(-5).is_err());
        assert!(Discriminant::new(0).is_err());
        assert!(Discriminant::new(5).is_err());
    }

    #[test]
    fn reduction_examples() {
        let (g, m) = reduce(&qf(1, 0, 14));
        assert_eq!((g, m), (qf(1, 0, 14), Mat2::IDENTITY));
        let f = qf(2, 88, 975);
        let (g, m) = reduce(&f);
        assert_eq!(g, qf(2, 0, 7));
        assert_eq!(f.transform(&m), g);
        let f = qf(5, 322, 5187);
        let (g, m) = reduce(&f);
        assert_eq!(g, qf(3, -2, 5));
        assert_eq!(f.transform(&m), g);
        assert!(m.is_unimodular());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            enumerate_reduced_forms(&disc(-56)),
            vec![qf(1, 0, 14), qf(2, 0, 7), qf(3, 2, 5), qf(3, -2, 5)]
        );
        assert_eq!(enumerate_reduced_forms(&disc(-4)), vec![qf(1, 0, 1)]);
        assert_eq!(
            enumerate_reduced_forms(&disc(-35)),
            vec![qf(1, 1, 9), qf(3, 1, 3)]
        );
        assert_eq!(class_number(&disc(-3)), 1);
        assert_eq!(class_number(&disc(-23)), 3);
        assert_eq!(class_number(&disc(-56)), 4);
    }

    #[test]
    fn equivalence() {
        assert!(equivalent(&qf(2, 88, 975), &qf(2, 0, 7)).unwrap());
        assert!(!equivalent(&qf(3, 2, 5), &qf(3, -2, 5)).unwrap());
        assert!(equivalent(&qf(3, 2, 5), &qf(3, 2, 5)).unwrap());
        assert!(equivalent(&qf(1, 0, 1), &qf(1, 0, 14)).is_err());
    }

    #[test]
    fn candidates() {
        let d = disc(-56);
        assert_eq!(b_candidates(&d, 39).unwrap(), vec![10, 16, 62, 68]);
        assert!(matches!(
            b_candidates(&disc(-8), 39),
            Err(Error::NoSolution { p: 13, .. })
        ));
        assert!(b_candidates(&d, 9).is_err());
    }

    #[test]
    fn nsystem_example() {
        let ns = build_nsystem(&disc(-56), 39, 10).unwrap();
        assert_eq!(ns.forms[0], qf(1, 10, 39));
        assert_eq!(ns.forms.len(), 4);
        assert!(ns.validate());
        assert!(ns.forms.contains(&qf(2, 88, 975)));
        assert!(ns.forms.contains(&qf(5, 88, 390)));
        assert!(matches!(
            build_nsystem(&disc(-4), 39, 38),
            Err(Error::InvalidB { .. })
        ));
    }
}
