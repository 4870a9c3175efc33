//! Class polynomials `H_{B,N}(X) = prod (X - w^s(alpha_i))` over an N-system.

use std::fmt;
use std::thread;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_odd_prime, legendre};
use crate::error::{Error, Result};
use crate::precision::{exponent_s, w_pow_s, ApComplex, MIN_PREC};
use crate::qforms::{b_candidates, build_nsystem, enumerate_reduced_forms, Discriminant, NSystem};

/// Starting precision, ceiling and doubling budget for floating-point products.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start: u32,
    pub max: u32,
    pub max_doublings: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start: 256,
            max: 65536,
            max_doublings: 6,
        }
    }
}

/// Largest distance of any rounded coefficient from its float value.
pub const MAX_RESIDUAL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPolynomial {
    pub d: Discriminant,
    pub p1: i64,
    pub p2: i64,
    pub s: u32,
    pub b: i64,
    /// Lowest degree first.
    pub coeffs: Vec<BigInt>,
}

impl ClassPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn n(&self) -> i64 {
        self.p1 * self.p2
    }

    pub fn coeffs_high_first(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().cloned().collect()
    }

    /// Space-separated coefficients, highest degree first.
    pub fn to_line(&self) -> String {
        self.coeffs_high_first()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for ClassPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{mag}*X")?,
                (_, true) => write!(f, "X^{k}")?,
                (_, false) => write!(f, "{mag}*X^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Integrality conditions for distinct odd primes: `(D|p_i) != -1` and `p_i` not
/// dividing the conductor. Equal primes are not supported and give `false`.
pub fn check_integrality_conditions(d: i64, p1: i64, p2: i64) -> bool {
    let Ok(disc) = Discriminant::new(d) else {
        return false;
    };
    if p1 == p2 || !is_odd_prime(p1) || !is_odd_prime(p2) {
        return false;
    }
    [p1, p2]
        .iter()
        .all(|&p| legendre(d, p) != -1 && disc.conductor() % p != 0)
}

fn require_conditions(d: i64, p1: i64, p2: i64) -> Result<Discriminant> {
    let disc = Discriminant::new(d)?;
    if !check_integrality_conditions(d, p1, p2) {
        let why = if p1 == p2 {
            format!("p1 = p2 = {p1} is not supported")
        } else if !is_odd_prime(p1) || !is_odd_prime(p2) {
            format!("{p1} and {p2} must be odd primes")
        } else {
            let syms: Vec<String> = [p1, p2]
                .iter()
                .map(|&p| format!("({d}|{p}) = {}", legendre(d, p)))
                .collect();
            format!("{}, conductor {}", syms.join(", "), disc.conductor())
        };
        return Err(Error::ConditionsViolated(why));
    }
    Ok(disc)
}

/// Bits needed to hold the coefficients, estimated from the reduced forms:
/// `log|w^s(alpha)| ~ pi sqrt|D| / (a * r)` with `r = 12 psi(N) / (s (p1-1)(p2-1))`.
pub fn initial_precision(d: &Discriminant, p1: i64, p2: i64) -> u32 {
    let forms = enumerate_reduced_forms(d);
    let s = exponent_s(p1, p2) as f64;
    let psi = ((p1 + 1) * (p2 + 1)) as f64;
    let ratio = 12.0 * psi / (s * ((p1 - 1) * (p2 - 1)) as f64);
    let inv_sum: f64 = forms.iter().map(|f| 1.0 / f.a() as f64).sum();
    let height = std::f64::consts::PI * (-(d.value() as f64)).sqrt() * inv_sum / ratio;
    64 + (height / std::f64::consts::LN_2).ceil() as u32 + 16 * forms.len() as u32
}

fn eval_roots(ns: &NSystem, p1: i64, p2: i64, prec: u32) -> Result<Vec<ApComplex>> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(ns.forms.len()).max(1);
    let chunk = ns.forms.len().div_ceil(workers);
    thread::scope(|scope| {
        let handles: Vec<_> = ns
            .forms
            .chunks(chunk)
            .map(|forms| {
                scope.spawn(move || {
                    forms
                        .iter()
                        .map(|f| w_pow_s(&f.root(prec + 64), p1, p2, prec))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        let mut out = Vec::with_capacity(ns.forms.len());
        for h in handles {
            out.extend(h.join().expect("evaluation thread panicked")?);
        }
        Ok(out)
    })
}

fn poly_mul(a: &[ApComplex], b: &[ApComplex], prec: u32) -> Vec<ApComplex> {
    let mut out = vec![ApComplex::from_int(0, prec); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// `prod (X - r_i)` by a balanced product tree, lowest degree first.
pub fn product_from_roots(roots: &[ApComplex], prec: u32) -> Vec<ApComplex> {
    match roots {
        [] => vec![ApComplex::from_int(1, prec)],
        [r] => vec![r.neg(), ApComplex::from_int(1, prec)],
        _ => {
            let (l, r) = roots.split_at(roots.len() / 2);
            poly_mul(&product_from_roots(l, prec), &product_from_roots(r, prec), prec)
        }
    }
}

/// Rounds the coefficients; `None` when the precision is too low for the height
/// or when some coefficient is not close to an integer.
fn round_product(poly: &[ApComplex], prec: u32) -> (Option<Vec<BigInt>>, u32) {
    let height = poly
        .iter()
        .map(|c| c.log2_abs())
        .fold(0.0f64, f64::max)
        .ceil() as u32;
    let needed = height + 64 + 4 * poly.len() as u32;
    if prec < needed {
        return (None, needed);
    }
    let residual = poly.iter().map(|c| c.integer_residual()).fold(0.0, f64::max);
    if residual >= MAX_RESIDUAL {
        return (None, needed);
    }
    (Some(poly.iter().map(|c| c.round_real()).collect()), needed)
}

/// `H` from an explicit N-system.
pub fn class_polynomial_from_nsystem(
    ns: &NSystem,
    p1: i64,
    p2: i64,
    policy: &PrecisionPolicy,
) -> Result<ClassPolynomial> {
    let mut prec = policy
        .start
        .max(initial_precision(&ns.d, p1, p2))
        .max(MIN_PREC)
        .min(policy.max);
    let mut doublings = 0;
    loop {
        let roots = eval_roots(ns, p1, p2, prec)?;
        let poly = product_from_roots(&roots, prec);
        let (rounded, needed) = round_product(&poly, prec);
        if let Some(coeffs) = rounded {
            return Ok(ClassPolynomial {
                d: ns.d,
                p1,
                p2,
                s: exponent_s(p1, p2),
                b: ns.b,
                coeffs,
            });
        }
        if doublings >= policy.max_doublings || prec >= policy.max {
            return Err(Error::PrecisionExhausted { bits: prec });
        }
        doublings += 1;
        prec = (2 * prec).max(needed).min(policy.max);
    }
}

pub fn compute_class_polynomial_with(
    d: i64,
    p1: i64,
    p2: i64,
    b: i64,
    policy: &PrecisionPolicy,
) -> Result<ClassPolynomial> {
    let disc = require_conditions(d, p1, p2)?;
    let ns = build_nsystem(&disc, p1 * p2, b)?;
    class_polynomial_from_nsystem(&ns, p1, p2, policy)
}

/// `H_{B,N}` for `N = p1 p2` with the default precision policy.
pub fn compute_class_polynomial(d: i64, p1: i64, p2: i64, b: i64) -> Result<ClassPolynomial> {
    compute_class_polynomial_with(d, p1, p2, b, &PrecisionPolicy::default())
}

/// The residue `B'` with `B' = B mod p1` and `B' = -B mod p2` among the candidates.
pub fn involution_partner(d: &Discriminant, p1: i64, p2: i64, b: i64) -> Result<i64> {
    b_candidates(d, p1 * p2)?
        .into_iter()
        .find(|&c| (c - b).rem_euclid(p1) == 0 && (c + b).rem_euclid(p2) == 0)
        .ok_or(Error::InvalidB {
            b,
            d: d.value(),
            modulus: 4 * p1 * p2,
        })
}

/// `H_{B'}(X) = X^h / H(0) * H(c / X)` with `c = (p1|p2)^s`.
pub fn involution_transform(h: &ClassPolynomial) -> Result<ClassPolynomial> {
    let d = h.d.value();
    if legendre(d, h.p1) != 1 || legendre(d, h.p2) != 1 {
        return Err(Error::ConditionsViolated(format!(
            "involution transform needs ({d}|{}) = ({d}|{}) = 1",
            h.p1, h.p2
        )));
    }
    let a0 = &h.coeffs[0];
    if a0.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let c = legendre(h.p1, h.p2).pow(h.s);
    let deg = h.degree();
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    for (k, ak) in h.coeffs.iter().enumerate() {
        let num = if c == -1 && k % 2 == 1 { -ak } else { ak.clone() };
        if !(&num % a0).is_zero() {
            return Err(Error::NonIntegral);
        }
        coeffs[deg - k] = num / a0;
    }
    Ok(ClassPolynomial {
        coeffs,
        b: involution_partner(&h.d, h.p1, h.p2, h.b)?,
        ..h.clone()
    })
}

/// Number of distinct `H_{B,N}` as `B` runs over the candidates up to sign.
pub fn count_distinct_class_polynomials_with(
    d: i64,
    p1: i64,
    p2: i64,
    policy: &PrecisionPolicy,
) -> Result<usize> {
    let disc = require_conditions(d, p1, p2)?;
    let two_n = 2 * p1 * p2;
    let mut polys: Vec<Vec<BigInt>> = Vec::new();
    for b in b_candidates(&disc, p1 * p2)? {
        if b > two_n - b {
            continue;
        }
        let h = compute_class_polynomial_with(d, p1, p2, b, policy)?;
        if !polys.contains(&h.coeffs) {
            polys.push(h.coeffs);
        }
    }
    Ok(polys.len())
}

pub fn count_distinct_class_polynomials(d: i64, p1: i64, p2: i64) -> Result<usize> {
    count_distinct_class_polynomials_with(d, p1, p2, &PrecisionPolicy::default())
}
