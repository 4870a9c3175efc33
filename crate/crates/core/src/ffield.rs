//! Prime fields `F_l` and univariate polynomials over them.
//!
//! Moduli are limited to `l < 2^63` so that products fit in `u128`.
//! Root finding is the usual `gcd(f, X^l - X)` followed by randomized
//! equal-degree splitting; all randomness comes from a caller-supplied
//! generator so results are reproducible.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Seed used when no explicit generator is supplied.
pub const DEFAULT_SEED: u64 = 0;

/// An element of `F_l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpElement {
    value: u64,
    modulus: u64,
}

impl FpElement {
    /// Builds `value mod modulus`, checking that the modulus is prime.
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        if modulus >= 1 << 63 || !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        Ok(Self::reduce(value as i128, modulus))
    }

    pub(crate) fn reduce(value: i128, modulus: u64) -> Self {
        FpElement {
            value: value.rem_euclid(modulus as i128) as u64,
            modulus,
        }
    }

    pub(crate) fn from_bigint(value: &BigInt, modulus: u64) -> Self {
        let r = value % BigInt::from(modulus);
        let r = r.to_i128().expect("residue fits");
        Self::reduce(r, modulus)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn zero(modulus: u64) -> Self {
        FpElement { value: 0, modulus }
    }

    pub fn one(modulus: u64) -> Self {
        FpElement { value: 1, modulus }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn pow(&self, exp: u64) -> Self {
        FpElement {
            value: pow_mod(self.value, exp, self.modulus),
            modulus: self.modulus,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.modulus - 2))
        }
    }

    /// Euler's criterion: 1 for nonzero squares, -1 for non-squares, 0 for zero.
    pub fn legendre(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if self.pow((self.modulus - 1) / 2).value == 1 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl std::ops::Add for FpElement {
    type Output = FpElement;
    fn add(self, rhs: FpElement) -> FpElement {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = self.value as u128 + rhs.value as u128;
        FpElement {
            value: (s % self.modulus as u128) as u64,
            modulus: self.modulus,
        }
    }
}

impl std::ops::Sub for FpElement {
    type Output = FpElement;
    fn sub(self, rhs: FpElement) -> FpElement {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.modulus - (rhs.value - self.value)
        };
        FpElement {
            value: v,
            modulus: self.modulus,
        }
    }
}

impl std::ops::Mul for FpElement {
    type Output = FpElement;
    fn mul(self, rhs: FpElement) -> FpElement {
        debug_assert_eq!(self.modulus, rhs.modulus);
        FpElement {
            value: mul_mod(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Neg for FpElement {
    type Output = FpElement;
    fn neg(self) -> FpElement {
        FpElement::zero(self.modulus) - self
    }
}

/// Square root by Tonelli-Shanks; `None` when `a` is a non-residue.
pub fn sqrt_mod_l(a: FpElement) -> Option<FpElement> {
    let p = a.modulus;
    if a.is_zero() {
        return Some(a);
    }
    if p == 2 {
        return Some(a);
    }
    if a.legendre() != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(a.pow((p + 1) / 4));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = FpElement::reduce(2, p);
    while z.legendre() != -1 {
        z = z + FpElement::one(p);
    }
    let mut m = s;
    let mut c = z.pow(q);
    let mut t = a.pow(q);
    let mut r = a.pow(q.div_ceil(2));
    while t.value != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2.value != 1 {
            t2 = t2 * t2;
            i += 1;
        }
        let b = c.pow(1 << (m - i - 1));
        m = i;
        c = b * b;
        t = t * c;
        r = r * b;
    }
    Some(r)
}

/// A polynomial over `F_l`, coefficients stored lowest degree first with no
/// trailing zeros (the zero polynomial has no coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPolynomial {
    modulus: u64,
    coeffs: Vec<u64>,
}

impl FpPolynomial {
    /// Builds a polynomial from signed coefficients, lowest degree first.
    pub fn new(coeffs: &[i64], modulus: u64) -> Result<Self> {
        if modulus >= 1 << 63 || !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        Ok(Self::from_residues(
            coeffs
                .iter()
                .map(|&c| (c as i128).rem_euclid(modulus as i128) as u64)
                .collect(),
            modulus,
        ))
    }

    pub fn from_elements(coeffs: &[FpElement], modulus: u64) -> Self {
        Self::from_residues(coeffs.iter().map(|c| c.value).collect(), modulus)
    }

    pub fn from_bigints(coeffs: &[BigInt], modulus: u64) -> Self {
        Self::from_residues(
            coeffs
                .iter()
                .map(|c| FpElement::from_bigint(c, modulus).value)
                .collect(),
            modulus,
        )
    }

    fn from_residues(mut coeffs: Vec<u64>, modulus: u64) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPolynomial { modulus, coeffs }
    }

    pub fn zero(modulus: u64) -> Self {
        FpPolynomial {
            modulus,
            coeffs: Vec::new(),
        }
    }

    pub fn one(modulus: u64) -> Self {
        FpPolynomial {
            modulus,
            coeffs: vec![1],
        }
    }

    /// `X - r`
    pub fn linear(root: FpElement) -> Self {
        let m = root.modulus;
        FpPolynomial::from_residues(vec![(-root).value, 1], m)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Coefficients as residues, lowest degree first.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FpElement {
        FpElement {
            value: self.coeffs.get(k).copied().unwrap_or(0),
            modulus: self.modulus,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> FpElement {
        self.coeff(self.coeffs.len().saturating_sub(1))
    }

    pub fn eval(&self, x: FpElement) -> FpElement {
        let mut acc = FpElement::zero(self.modulus);
        for &c in self.coeffs.iter().rev() {
            acc = acc * x
                + FpElement {
                    value: c,
                    modulus: self.modulus,
                };
        }
        acc
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv().expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn scale(&self, k: FpElement) -> Self {
        FpPolynomial::from_residues(
            self.coeffs
                .iter()
                .map(|&c| mul_mod(c, k.value, self.modulus))
                .collect(),
            self.modulus,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| (self.coeff(k) + other.coeff(k)).value)
            .collect();
        FpPolynomial::from_residues(coeffs, p)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).value)
            .collect();
        FpPolynomial::from_residues(coeffs, p)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.modulus;
        if self.is_zero() || other.is_zero() {
            return FpPolynomial::zero(p);
        }
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        let pm = p as u128;
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % pm;
            }
        }
        FpPolynomial::from_residues(acc.into_iter().map(|c| c as u64).collect(), p)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let p = self.modulus;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (FpPolynomial::zero(p), self.clone());
        }
        let inv = divisor.lead().inv().expect("nonzero lead");
        let mut rem: Vec<FpElement> = (0..self.coeffs.len()).map(|k| self.coeff(k)).collect();
        let mut quot = vec![FpElement::zero(p); self.coeffs.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd] * inv;
            quot[k] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j]
                    - c * FpElement {
                        value: dc,
                        modulus: p,
                    };
            }
        }
        rem.truncate(dd);
        (
            FpPolynomial::from_elements(&quot, p),
            FpPolynomial::from_elements(&rem, p),
        )
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| mul_mod(c, k as u64 % p, p))
            .collect();
        FpPolynomial::from_residues(coeffs, p)
    }

    /// `self^exp mod modulus_poly`.
    pub fn pow_mod(&self, mut exp: u64, modulus_poly: &Self) -> Self {
        let mut base = self.rem(modulus_poly);
        let mut acc = FpPolynomial::one(self.modulus).rem(modulus_poly);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(modulus_poly);
            }
            base = base.mul(&base).rem(modulus_poly);
            exp >>= 1;
        }
        acc
    }
}

impl fmt::Display for FpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().rev().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A root together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Root {
    pub value: FpElement,
    pub multiplicity: usize,
}

fn split_linear<R: Rng>(g: &FpPolynomial, rng: &mut R, out: &mut Vec<FpElement>) {
    let p = g.modulus;
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let g = g.monic();
            out.push(-g.coeff(0));
        }
        Some(_) => loop {
            let a = FpElement::reduce(rng.gen_range(0..p) as i128, p);
            let x_plus_a = FpPolynomial::from_elements(&[a, FpElement::one(p)], p);
            let h = x_plus_a
                .pow_mod((p - 1) / 2, g)
                .sub(&FpPolynomial::one(p));
            let d = g.gcd(&h);
            let dd = d.degree().unwrap_or(0);
            if dd > 0 && dd < g.degree().unwrap() {
                let (other, _) = g.div_rem(&d);
                split_linear(&d, rng, out);
                split_linear(&other, rng, out);
                return;
            }
        },
    }
}

/// Distinct roots of `f` in `F_l` with their multiplicities, sorted by value.
pub fn roots_with_multiplicity<R: Rng>(f: &FpPolynomial, rng: &mut R) -> Vec<Root> {
    let p = f.modulus;
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let f = f.monic();
    let x = FpPolynomial::from_residues(vec![0, 1], p);
    let g = if p == 2 {
        x.mul(&x).sub(&x).rem(&f)
    } else {
        x.pow_mod(p, &f).sub(&x)
    };
    let g = f.gcd(&g);
    let mut distinct = Vec::new();
    if p == 2 {
        for v in 0..2 {
            let e = FpElement::reduce(v, 2);
            if f.eval(e).is_zero() {
                distinct.push(e);
            }
        }
    } else {
        split_linear(&g, rng, &mut distinct);
    }
    distinct.sort();
    distinct
        .into_iter()
        .map(|r| {
            let lin = FpPolynomial::linear(r);
            let mut rest = f.clone();
            let mut mult = 0;
            loop {
                let (q, rem) = rest.div_rem(&lin);
                if !rem.is_zero() {
                    break;
                }
                mult += 1;
                rest = q;
            }
            Root {
                value: r,
                multiplicity: mult,
            }
        })
        .collect()
}

/// All roots of `f` in `F_l`, repeated according to multiplicity and sorted.
pub fn roots_mod_l<R: Rng>(f: &FpPolynomial, rng: &mut R) -> Vec<FpElement> {
    roots_with_multiplicity(f, rng)
        .into_iter()
        .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
        .collect()
}

/// Root finding with the default deterministic seed.
pub fn roots_mod_l_default(f: &FpPolynomial) -> Vec<FpElement> {
    roots_mod_l(f, &mut ChaCha8Rng::seed_from_u64(DEFAULT_SEED))
}

/// True iff `gcd(f, f')` has positive degree.
pub fn has_multiple_root(f: &FpPolynomial) -> bool {
    f.gcd(&f.derivative()).degree().unwrap_or(0) >= 1
}

#[cfg(test)]
mod tests {
    use super::*;

    const L: u64 = 3593;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    fn vals(v: &[FpElement]) -> Vec<u64> {
        v.iter().map(|e| e.value()).collect()
    }

    #[test]
    fn class_polynomial_splits_mod_3593() {
        let h = FpPolynomial::new(&[-1, 2, -1, -2, 1], L).unwrap();
        let mut roots = vals(&roots_mod_l(&h, &mut rng()));
        roots.sort();
        assert_eq!(roots, vec![166, 607, 2987, 3428]);
        assert!(!has_multiple_root(&h));
    }

    #[test]
    fn double_root_detected() {
        let lin = FpPolynomial::new(&[-229, 1], L).unwrap();
        let sq = lin.mul(&lin);
        assert_eq!(vals(&roots_mod_l(&sq, &mut rng())), vec![229, 229]);
        assert!(has_multiple_root(&sq));
        let two = FpPolynomial::new(&[2, -3, 1], L).unwrap();
        assert!(!has_multiple_root(&two));
    }

    #[test]
    fn no_roots_for_irreducible_quadratic() {
        let f = FpPolynomial::new(&[1, 0, 1], 7).unwrap();
        assert!(roots_mod_l(&f, &mut rng()).is_empty());
    }

    #[test]
    fn zero_is_found_as_a_root() {
        // X^3 (X - 5)
        let f = FpPolynomial::new(&[0, 0, 0, -5, 1], 11).unwrap();
        let r = roots_with_multiplicity(&f, &mut rng());
        assert_eq!(r.len(), 2);
        assert_eq!((r[0].value.value(), r[0].multiplicity), (0, 3));
        assert_eq!((r[1].value.value(), r[1].multiplicity), (5, 1));
    }

    #[test]
    fn tonelli_shanks() {
        let zero = FpElement::new(0, L).unwrap();
        assert_eq!(sqrt_mod_l(zero), Some(zero));
        let a = FpElement::new(-56, L).unwrap();
        let r = sqrt_mod_l(a).expect("-56 is a square mod 3593");
        assert_eq!(r * r, a);
        // 3593 = 1 mod 8 exercises the full Tonelli-Shanks loop
        assert_eq!(L % 8, 1);
        let non = (1..L as i64)
            .map(|v| FpElement::new(v, L).unwrap())
            .find(|e| e.legendre() == -1)
            .unwrap();
        assert_eq!(sqrt_mod_l(non), None);
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(FpElement::new(1, 15), Err(Error::NotPrime(15)));
        assert!(FpPolynomial::new(&[1, 1], 1).is_err());
    }

    #[test]
    fn division_identity() {
        let a = FpPolynomial::new(&[3, 1, 4, 1, 5, 9, 2, 6], 101).unwrap();
        let b = FpPolynomial::new(&[5, 3, 5], 101).unwrap();
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }
}
