//! Oracles shared by the integration tests. They avoid the library's own
//! reduction and root finding on purpose.
#![allow(dead_code)]

use cmeta_core::precision::ApComplex;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

pub const SMALL_PRIMES: [i64; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

/// Pairs whose modular polynomial has J-degree at most 4.
pub const SUPPORTED_PAIRS: [(i64, i64); 5] = [(3, 5), (3, 7), (3, 13), (5, 7), (5, 13)];

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn is_disc(d: i64) -> bool {
    d < 0 && matches!(d.rem_euclid(4), 0 | 1)
}

pub fn random_disc<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> i64 {
    loop {
        let d = rng.gen_range(lo..=hi);
        if is_disc(d) {
            return d;
        }
    }
}

/// Counts classes by listing every primitive triple with `b^2 - 4ac = D`,
/// `0 < a <= c`, `|b| <= a`, and discarding the boundary duplicates.
pub fn brute_force_class_number(d: i64) -> usize {
    let n = -d;
    let mut count = 0;
    for a in 1..=n {
        for c in a..=n {
            if 4 * a * c > n + a * a {
                break;
            }
            for b in -a..=a {
                if b * b - 4 * a * c != d || gcd(gcd(a, b), c) != 1 {
                    continue;
                }
                if b < 0 && (b == -a || a == c) {
                    continue;
                }
                count += 1;
            }
        }
    }
    count
}

/// Kronecker symbol `(d|n)` for `n > 0`.
pub fn kronecker(d: i64, n: i64) -> i32 {
    let mut result = 1;
    let mut n = n;
    while n % 2 == 0 {
        n /= 2;
        match d.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => result = -result,
            _ => return 0,
        }
    }
    // Jacobi symbol by Euler-style exponentiation over the odd factors
    let mut m = n;
    let mut p = 3;
    while m > 1 {
        if p * p > m {
            p = m;
        }
        while m % p == 0 {
            m /= p;
            result *= euler(d, p);
        }
        p += 2;
    }
    result
}

fn euler(a: i64, p: i64) -> i32 {
    let mut r = 1i128;
    let mut base = a.rem_euclid(p) as i128;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p as i128;
        }
        base = base * base % p as i128;
        e >>= 1;
    }
    match r {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

fn fundamental_part(d: i64) -> (i64, i64) {
    let mut f = 1;
    let mut k = 2;
    let mut dk = d;
    while k * k <= -dk {
        while dk % (k * k) == 0 && is_disc(dk / (k * k)) {
            dk /= k * k;
            f *= k;
        }
        k += 1;
    }
    (dk, f)
}

/// Dirichlet's class number formula, extended to orders.
pub fn analytic_class_number(d: i64) -> usize {
    let (dk, f) = fundamental_part(d);
    let w: i64 = match dk {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let sum: i64 = (1..-dk).map(|n| kronecker(dk, n) as i64 * n).sum();
    let hk = -(w * sum) / (2 * -dk);
    if f == 1 {
        return hk as usize;
    }
    // h(D) = h(d_K) f / [O_K^* : O^*] prod (1 - (d_K|p)/p)
    let mut num = hk * f;
    let mut den = w / 2;
    let mut m = f;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            num *= p - kronecker(dk, p) as i64;
            den *= p;
        }
        p += 1;
    }
    assert_eq!(num % den, 0);
    (num / den) as usize
}

/// Reduced primitive forms by exhaustive search.
pub fn brute_force_forms(d: i64) -> Vec<(i64, i64, i64)> {
    let n = -d;
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= n {
        for b in -a..=a {
            if (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            if c < a || gcd(gcd(a, b), c) != 1 || (b < 0 && (b == -a || a == c)) {
                continue;
            }
            out.push((a, b, c));
        }
        a += 1;
    }
    out
}

fn divisor_power_sum(n: i64, k: u32) -> i64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d.pow(k)).sum()
}

/// `j(tau)` from the Eisenstein series `E4`, `E6`.
fn j_eisenstein(tau: &ApComplex, prec: u32) -> ApComplex {
    let two_pi_i_tau = ApComplex::root_of_unity(1, 4, prec)
        .mul(&ApComplex::from_f64(2.0, 0.0, prec))
        .mul(&pi(prec))
        .mul(tau);
    let q = two_pi_i_tau.exp();
    let one = ApComplex::from_int(1, prec);
    let mut e4 = ApComplex::from_int(0, prec);
    let mut e6 = ApComplex::from_int(0, prec);
    let mut qn = q.clone();
    for n in 1i64.. {
        if qn.log2_abs() < -(prec as f64) - 64.0 {
            break;
        }
        e4 = e4.add(&qn.mul_int(divisor_power_sum(n, 3)));
        e6 = e6.add(&qn.mul_int(divisor_power_sum(n, 5)));
        qn = qn.mul(&q);
    }
    let e4 = one.add(&e4.mul_int(240));
    let e6 = one.sub(&e6.mul_int(504));
    let e4c = e4.mul(&e4).mul(&e4);
    e4c.mul_int(1728).div(&e4c.sub(&e6.mul(&e6)))
}

fn pi(prec: u32) -> ApComplex {
    let re = rug::Float::with_val(prec, rug::float::Constant::Pi);
    ApComplex::new(re, rug::Float::with_val(prec, 0))
}

/// The Hilbert class polynomial, lowest coefficient first, from the reduced
/// forms and the Eisenstein-series `j`.
pub fn hilbert_class_polynomial(d: i64) -> Vec<BigInt> {
    let forms = brute_force_forms(d);
    let height: f64 = forms
        .iter()
        .map(|&(a, _, _)| std::f64::consts::PI * ((-d) as f64).sqrt() / a as f64)
        .sum::<f64>()
        / std::f64::consts::LN_2;
    // E4^3 - E6^2 cancels about as many bits as the largest j has
    let largest = std::f64::consts::PI * ((-d) as f64).sqrt() / std::f64::consts::LN_2;
    let prec = (height + largest) as u32 + 16 * forms.len() as u32 + 128;
    let mut poly = vec![ApComplex::from_int(1, prec)];
    for &(a, b, _) in &forms {
        let tau = ApComplex::quadratic(-b, d, 2 * a, prec);
        let j = j_eisenstein(&tau, prec);
        let mut next = vec![ApComplex::from_int(0, prec); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&c.mul(&j));
        }
        poly = next;
    }
    poly.iter()
        .map(|c| {
            assert!(c.integer_residual() < 1e-6, "Hilbert coefficient not integral for D = {d}");
            c.round_real()
        })
        .collect()
}

/// All roots in `F_q` of an integer polynomial, by evaluating at every element.
pub fn brute_force_roots_mod(poly: &[BigInt], q: u64) -> Vec<u64> {
    let qb = BigInt::from(q);
    let coeffs: Vec<u64> = poly
        .iter()
        .map(|c| {
            let r = ((c % &qb) + &qb) % &qb;
            r.to_u64().unwrap()
        })
        .collect();
    (0..q)
        .filter(|&x| {
            let mut acc = 0u128;
            for &c in coeffs.iter().rev() {
                acc = (acc * x as u128 + c as u128) % q as u128;
            }
            acc.is_zero()
        })
        .collect()
}

/// `J`-roots reachable through the class polynomial and the modular equation:
/// the roots of `Phi(wbar, J)` over all roots `wbar` of `H_B` mod `q`.
pub fn pipeline_j_roots(
    h: &cmeta_core::classpoly::ClassPolynomial,
    phi: &cmeta_core::modpoly::ModularPolynomial,
    q: u64,
) -> std::collections::BTreeSet<u64> {
    use cmeta_core::ffield::{roots_mod_l_default, FpPolynomial};
    use cmeta_core::modpoly::evaluate_in_j_mod_l;
    let hq = FpPolynomial::from_bigints(&h.coeffs, q);
    roots_mod_l_default(&hq)
        .into_iter()
        .flat_map(|w| roots_mod_l_default(&evaluate_in_j_mod_l(phi, w)))
        .map(|j| j.value())
        .collect()
}

/// `q = (t^2 - D) / 4` prime with `q > min`, so that the ring class field splits.
pub fn split_prime(d: i64, min: u64) -> Option<u64> {
    (1..200_000i64)
        .filter(|t| (t * t - d) % 4 == 0)
        .map(|t| ((t * t - d) / 4) as u64)
        .find(|&q| q > min && cmeta_core::arith::is_prime(q) && d.rem_euclid(q as i64) != 0)
}
