//! The modular polynomial `Phi_{p1,p2}(X, J) = prod_gamma (X - w^s(gamma z))`,
//! taken over the cosets of `Gamma^0(N)` in `SL2(Z)`.

use std::collections::BTreeSet;
use std::thread;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rug::Float;

use crate::arith::{gcd, split_level};
use crate::classpoly::{product_from_roots, PrecisionPolicy};
use crate::error::{Error, Result};
use crate::ffield::{FpElement, FpPolynomial};
use crate::precision::{exponent_s, j_invariant, w_pow_s_at, ApComplex, UpperHalfPoint};
use crate::sl2::Mat2;

/// The shipped `Phi_{3,13}`.
pub const EMBEDDED_PHI_3_13: &str = include_str!("../data/phi_3_13.modpoly");

/// Samples beyond the interpolation points used to check the result.
pub const VERIFY_SAMPLES: usize = 3;
const MAX_DEG_J: usize = 4;
const STRIDES: [i64; 4] = [17, 19, 23, 29];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularPolynomial {
    pub p1: i64,
    pub p2: i64,
    pub s: u32,
    pub deg_x: usize,
    pub deg_j: usize,
    /// `coeffs[kx][kj]` is the coefficient of `X^kx J^kj`.
    pub coeffs: Vec<Vec<BigInt>>,
}

/// `psi(N) = (p1 + 1)(p2 + 1)`
pub fn degree_x(p1: i64, p2: i64) -> usize {
    ((p1 + 1) * (p2 + 1)) as usize
}

/// `s (p1 - 1)(p2 - 1) / 12`
pub fn degree_j(p1: i64, p2: i64) -> usize {
    (exponent_s(p1, p2) as i64 * (p1 - 1) * (p2 - 1) / 12) as usize
}

impl ModularPolynomial {
    pub fn coeff(&self, kx: usize, kj: usize) -> &BigInt {
        &self.coeffs[kx][kj]
    }

    /// Coefficient of `X^kx` as a polynomial in `J`, lowest degree first.
    pub fn j_slice(&self, kx: usize) -> &[BigInt] {
        &self.coeffs[kx]
    }

    /// Coefficient of `J^kj` as a polynomial in `X`, lowest degree first.
    pub fn x_slice(&self, kj: usize) -> Vec<BigInt> {
        self.coeffs.iter().map(|row| row[kj].clone()).collect()
    }

    /// `Phi(x, j)` over the complex numbers.
    pub fn eval_complex(&self, x: &ApComplex, j: &ApComplex) -> ApComplex {
        let prec = x.prec().max(j.prec());
        let big = |c: &BigInt| {
            ApComplex::new(
                Float::with_val(prec, Float::parse(c.to_string()).expect("integer")),
                Float::new(prec),
            )
        };
        let mut acc = ApComplex::from_int(0, prec);
        for row in self.coeffs.iter().rev() {
            let mut inner = ApComplex::from_int(0, prec);
            for c in row.iter().rev() {
                inner = inner.mul(j).add(&big(c));
            }
            acc = acc.mul(x).add(&inner);
        }
        acc
    }

    /// Line-oriented text form with a `MODPOLY v1` header.
    pub fn serialize(&self) -> String {
        let mut out = format!(
            "MODPOLY v1 p1={} p2={} s={} degX={} degJ={}\n",
            self.p1, self.p2, self.s, self.deg_x, self.deg_j
        );
        for kx in (0..=self.deg_x).rev() {
            for kj in 0..=self.deg_j {
                let c = &self.coeffs[kx][kj];
                if !c.is_zero() {
                    out.push_str(&format!("{kx} {kj} {c}\n"));
                }
            }
        }
        out
    }

    pub fn deserialize(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let header = lines
            .next()
            .map(|(_, l)| l)
            .ok_or_else(|| Error::MalformedHeader("empty input".into()))?;
        let (p1, p2, s, deg_x, deg_j) = parse_header(header)?;
        let mut coeffs = vec![vec![BigInt::zero(); deg_j + 1]; deg_x + 1];
        let mut last: Option<(usize, usize)> = None;
        for (idx, line) in lines {
            let lineno = idx + 1;
            let bad = |reason: &str| Error::CoefficientParse {
                line: lineno,
                reason: reason.to_string(),
            };
            let fields: Vec<&str> = line.split(' ').collect();
            let [kx, kj, c] = fields[..] else {
                return Err(bad("expected three fields"));
            };
            let kx: usize = kx.parse().map_err(|_| bad("bad X exponent"))?;
            let kj: usize = kj.parse().map_err(|_| bad("bad J exponent"))?;
            let c: BigInt = c.parse().map_err(|_| bad("bad coefficient"))?;
            if kx > deg_x || kj > deg_j {
                return Err(bad("exponent out of range"));
            }
            if c.is_zero() {
                return Err(bad("zero coefficient listed"));
            }
            if let Some((lx, lj)) = last {
                if !(kx < lx || (kx == lx && kj > lj)) {
                    return Err(bad("entries out of order"));
                }
            }
            last = Some((kx, kj));
            coeffs[kx][kj] = c;
        }
        let phi = ModularPolynomial {
            p1,
            p2,
            s,
            deg_x,
            deg_j,
            coeffs,
        };
        if !phi.coeffs[deg_x][0].is_one() || phi.coeffs[deg_x][1..].iter().any(|c| !c.is_zero()) {
            return Err(Error::CoefficientParse {
                line: 0,
                reason: "polynomial is not monic in X".into(),
            });
        }
        Ok(phi)
    }
}

fn parse_header(line: &str) -> Result<(i64, i64, u32, usize, usize)> {
    let bad = || Error::MalformedHeader(line.to_string());
    let tokens: Vec<&str> = line.split(' ').collect();
    if tokens.len() != 7 || tokens[0] != "MODPOLY" || tokens[1] != "v1" {
        return Err(bad());
    }
    let field = |tok: &str, key: &str| -> Result<i64> {
        tok.strip_prefix(key)
            .and_then(|v| v.strip_prefix('='))
            .and_then(|v| v.parse().ok())
            .ok_or_else(bad)
    };
    let p1 = field(tokens[2], "p1")?;
    let p2 = field(tokens[3], "p2")?;
    let s = field(tokens[4], "s")?;
    let dx = field(tokens[5], "degX")?;
    let dj = field(tokens[6], "degJ")?;
    if split_level(p1 * p2) != Some((p1.min(p2), p1.max(p2)))
        || s != exponent_s(p1, p2) as i64
        || dx != degree_x(p1, p2) as i64
        || dj != degree_j(p1, p2) as i64
    {
        return Err(bad());
    }
    Ok((p1, p2, s as u32, dx as usize, dj as usize))
}

/// The shipped polynomial for `(p1, p2)`, if there is one.
pub fn embedded(p1: i64, p2: i64) -> Option<ModularPolynomial> {
    ((p1, p2) == (3, 13)).then(|| {
        ModularPolynomial::deserialize(EMBEDDED_PHI_3_13).expect("embedded polynomial parses")
    })
}

/// One matrix per coset of `Gamma^0(N)`, indexed by its top row in `P^1(Z/N)`.
pub fn coset_representatives(n: i64) -> Result<Vec<Mat2>> {
    let (p1, p2) = split_level(n)
        .ok_or_else(|| Error::UnsupportedLevel(format!("N = {n} is not p1*p2 with odd p1 != p2")))?;
    let line = |p: i64| -> Vec<(i64, i64)> {
        let mut pts: Vec<(i64, i64)> = (0..p).map(|t| (1, t)).collect();
        pts.push((0, 1));
        pts
    };
    let crt = |x1: i64, x2: i64| -> i64 {
        (0..n).find(|v| v % p1 == x1 % p1 && v % p2 == x2 % p2).unwrap()
    };
    let mut rows = BTreeSet::new();
    for (a1, b1) in line(p1) {
        for (a2, b2) in line(p2) {
            rows.insert((crt(a1, a2), crt(b1, b2)));
        }
    }
    let mut reps: Vec<Mat2> = rows
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = lift_coprime(a, b, n);
            Mat2::complete_top_row(a, b).expect("coprime row")
        })
        .collect();
    reps.sort_by_key(|m| (m.a != 1 || m.b != 0, m.a, m.b));
    Ok(reps)
}

fn lift_coprime(a: i64, b: i64, n: i64) -> (i64, i64) {
    if a == 0 {
        return (n, b);
    }
    let mut b = b;
    while gcd(a, b) != 1 {
        b += n;
    }
    (a, b)
}

/// `z_m = m / stride + i (1.1 + m / 7)`
fn sample_point(m: usize, stride: i64, prec: u32) -> UpperHalfPoint {
    let re = Float::with_val(prec, m as i64) / stride;
    let im = Float::with_val(prec, 11) / 10 + Float::with_val(prec, m as i64) / 7;
    UpperHalfPoint::new(ApComplex::new(re, im)).expect("positive imaginary part")
}

struct Sample {
    j: ApComplex,
    /// Coefficients of `prod (X - w^s(gamma z))`, lowest degree first.
    x_coeffs: Vec<ApComplex>,
}

fn eval_sample(z: &UpperHalfPoint, cosets: &[Mat2], p1: i64, p2: i64, prec: u32) -> Result<Sample> {
    let j = j_invariant(z, prec)?;
    let roots = cosets
        .iter()
        .map(|g| w_pow_s_at(z, g, p1, p2, prec))
        .collect::<Result<Vec<_>>>()?;
    Ok(Sample {
        j,
        x_coeffs: product_from_roots(&roots, prec),
    })
}

/// Coefficients (lowest first) of the polynomial through `(xs[i], ys[i])`.
fn interpolate(xs: &[ApComplex], ys: &[ApComplex], prec: u32) -> Vec<ApComplex> {
    let n = xs.len();
    let mut dd: Vec<ApComplex> = ys.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            dd[i] = dd[i].sub(&dd[i - 1]).div(&xs[i].sub(&xs[i - k]));
        }
    }
    // Newton form to monomial basis
    let mut poly = vec![ApComplex::from_int(0, prec); n];
    poly[0] = dd[n - 1].clone();
    let mut len = 1;
    for k in (0..n - 1).rev() {
        for i in (1..=len).rev() {
            poly[i] = poly[i - 1].sub(&poly[i].mul(&xs[k]));
        }
        poly[0] = dd[k].sub(&poly[0].mul(&xs[k]));
        len += 1;
    }
    poly
}

fn to_complex(c: &BigInt, prec: u32) -> ApComplex {
    ApComplex::new(
        Float::with_val(prec, Float::parse(c.to_string()).expect("integer")),
        Float::new(prec),
    )
}

enum Attempt {
    Done(ModularPolynomial),
    Singular,
    NeedPrec(u32),
}

fn attempt(p1: i64, p2: i64, cosets: &[Mat2], stride: i64, prec: u32) -> Result<Attempt> {
    let deg_x = degree_x(p1, p2);
    let deg_j = degree_j(p1, p2);
    let count = deg_j + 1 + VERIFY_SAMPLES;
    let points: Vec<UpperHalfPoint> = (0..count).map(|m| sample_point(m, stride, prec + 64)).collect();
    let samples = thread::scope(|scope| {
        let handles: Vec<_> = points
            .iter()
            .map(|z| scope.spawn(move || eval_sample(z, cosets, p1, p2, prec)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sample thread panicked"))
            .collect::<Result<Vec<_>>>()
    })?;

    let js: Vec<ApComplex> = samples.iter().map(|s| s.j.clone()).collect();
    for a in 0..count {
        for b in 0..a {
            if js[a].sub(&js[b]).log2_abs() < -(prec as f64) / 4.0 {
                return Ok(Attempt::Singular);
            }
        }
    }
    let height = samples
        .iter()
        .flat_map(|s| s.x_coeffs.iter().map(|c| c.log2_abs()))
        .fold(0.0f64, f64::max);
    let j_bits = js.iter().map(|j| j.log2_abs()).fold(0.0f64, f64::max);
    let needed = (height + deg_j as f64 * j_bits).ceil() as u32 + 64 + 4 * deg_x as u32;
    if prec < needed {
        return Ok(Attempt::NeedPrec(needed));
    }

    let fit = &js[..=deg_j];
    let mut coeffs = Vec::with_capacity(deg_x + 1);
    for kx in 0..=deg_x {
        let ys: Vec<ApComplex> = samples[..=deg_j].iter().map(|s| s.x_coeffs[kx].clone()).collect();
        let row = interpolate(fit, &ys, prec);
        if row.iter().any(|c| c.integer_residual() >= 0.25) {
            return Ok(Attempt::NeedPrec(2 * prec));
        }
        let row: Vec<BigInt> = row.iter().map(|c| c.round_real()).collect();
        // check against the remaining samples
        for s in &samples[deg_j + 1..] {
            let mut acc = ApComplex::from_int(0, prec);
            for c in row.iter().rev() {
                acc = acc.mul(&s.j).add(&to_complex(c, prec));
            }
            let err = acc.sub(&s.x_coeffs[kx]).log2_abs();
            if err > height + deg_j as f64 * j_bits - (prec as f64) / 2.0 {
                return Ok(Attempt::NeedPrec(2 * prec));
            }
        }
        coeffs.push(row);
    }
    let s = exponent_s(p1, p2);
    Ok(Attempt::Done(ModularPolynomial {
        p1,
        p2,
        s,
        deg_x,
        deg_j,
        coeffs,
    }))
}

pub fn compute_modular_polynomial_with(
    p1: i64,
    p2: i64,
    policy: &PrecisionPolicy,
) -> Result<ModularPolynomial> {
    let (p1, p2) = (p1.min(p2), p1.max(p2));
    let cosets = coset_representatives(p1 * p2)?;
    let deg_j = degree_j(p1, p2);
    if deg_j > MAX_DEG_J {
        return Err(Error::DegreeTooLarge(deg_j));
    }
    let mut prec = policy.start.min(policy.max);
    let mut doublings = 0;
    loop {
        let mut singular = true;
        for stride in STRIDES {
            match attempt(p1, p2, &cosets, stride, prec)? {
                Attempt::Done(phi) => return Ok(phi),
                Attempt::Singular => continue,
                Attempt::NeedPrec(bits) => {
                    singular = false;
                    if doublings >= policy.max_doublings || prec >= policy.max {
                        return Err(Error::PrecisionExhausted { bits: prec });
                    }
                    doublings += 1;
                    prec = bits.max(2 * prec).min(policy.max);
                    break;
                }
            }
        }
        if singular {
            return Err(Error::InterpolationSingular);
        }
    }
}

/// `Phi_{p1,p2}` recomputed from eta-quotient values with the default policy.
pub fn compute_modular_polynomial(p1: i64, p2: i64) -> Result<ModularPolynomial> {
    compute_modular_polynomial_with(p1, p2, &PrecisionPolicy::default())
}

/// `Phi(wbar, J)` as a polynomial in `J` over `F_l`, where `l` is the modulus of `wbar`.
pub fn evaluate_in_j_mod_l(phi: &ModularPolynomial, wbar: FpElement) -> FpPolynomial {
    let l = wbar.modulus();
    let mut out = vec![BigInt::zero(); phi.deg_j + 1];
    let lb = BigInt::from(l);
    let mut power = BigInt::one();
    let w = BigInt::from(wbar.value());
    for row in &phi.coeffs {
        for (kj, c) in row.iter().enumerate() {
            out[kj] = (&out[kj] + c * &power) % &lb;
        }
        power = (&power * &w) % &lb;
    }
    FpPolynomial::from_bigints(&out, l)
}

/// `c1(X)^2 - 4 c2(X) c0(X)` for `Phi = c2 J^2 + c1 J + c0`.
pub fn discriminant_in_j(phi: &ModularPolynomial) -> Result<Vec<BigInt>> {
    if phi.deg_j != 2 {
        return Err(Error::WrongDegree {
            expected: 2,
            found: phi.deg_j,
        });
    }
    let c0 = phi.x_slice(0);
    let c1 = phi.x_slice(1);
    let c2 = phi.x_slice(2);
    let four: Vec<BigInt> = zpoly_mul(&c2, &c0).into_iter().map(|c| c * 4).collect();
    Ok(zpoly_sub(&zpoly_mul(&c1, &c1), &four))
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

pub fn zpoly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![BigInt::zero()];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn zpoly_sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let get = |v: &[BigInt], i: usize| v.get(i).cloned().unwrap_or_default();
    trim((0..n).map(|i| get(a, i) - get(b, i)).collect())
}

/// Remainder of `f` modulo a monic `g` over the integers.
pub fn zpoly_rem_monic(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let g = trim(g.to_vec());
    assert!(g.last().is_some_and(|c| c.is_one()), "divisor must be monic");
    let dg = g.len() - 1;
    let mut r = trim(f.to_vec());
    while r.len() > dg && !(r.len() == 1 && r[0].is_zero()) {
        let lead = r.last().unwrap().clone();
        let shift = r.len() - 1 - dg;
        for (i, c) in g.iter().enumerate() {
            r[shift + i] -= &lead * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

/// Whether the monic `g` divides `f` in `Z[X]`.
pub fn zpoly_divides(g: &[BigInt], f: &[BigInt]) -> bool {
    zpoly_rem_monic(f, g).iter().all(|c| c.is_zero())
}
