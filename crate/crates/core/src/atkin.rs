//! Integer criteria for the Atkin-Lehner involution `W_N` fixing an ideal class.

use crate::arith::exact_sqrt;
use crate::classpoly::check_integrality_conditions;
use crate::error::{Error, Result};
use crate::qforms::{b_candidates, Discriminant};

/// `u^2 - D v^2 = 4N` with `u = B v mod 2N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Con1Solution {
    pub u: i64,
    pub v: i64,
}

impl Con1Solution {
    pub fn verify(&self, d: i64, n: i64, b: i64) -> bool {
        let (u, v) = (self.u as i128, self.v as i128);
        let (d, n, b) = (d as i128, n as i128, b as i128);
        u * u - d * v * v == 4 * n && (u - b * v).rem_euclid(2 * n) == 0
    }
}

/// `X^2 - D Y^2 = 4N^2`, `X = B Y mod 2N`, `((X - B Y) / 2N)^2 = 1 mod Y`, `Y != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Wn2Solution {
    pub x: i64,
    pub y: i64,
}

impl Wn2Solution {
    pub fn verify(&self, d: i64, n: i64, b: i64) -> bool {
        let (x, y) = (self.x as i128, self.y as i128);
        let (d, n, b) = (d as i128, n as i128, b as i128);
        if y == 0 || x * x - d * y * y != 4 * n * n || (x - b * y).rem_euclid(2 * n) != 0 {
            return false;
        }
        let k = (x - b * y) / (2 * n);
        (k * k - 1).rem_euclid(y.abs()) == 0
    }
}

fn check_b(d: i64, n: i64, b: i64) -> Result<()> {
    if d >= 0 {
        return Err(Error::InvalidDiscriminant(d));
    }
    let m = 4 * n as i128;
    if n <= 0 || ((b as i128).pow(2) - d as i128).rem_euclid(m) != 0 {
        return Err(Error::InvalidB {
            b,
            d,
            modulus: 4 * n,
        });
    }
    Ok(())
}

/// `0, 1, -1, 2, -2, ...` up to `|v| <= bound`.
fn signed_range(start: i64, bound: i64) -> impl Iterator<Item = i64> {
    (start..=bound).flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] })
}

/// Solutions of `u^2 = rhs`, non-negative first.
fn signed_roots(rhs: i128) -> Vec<i64> {
    match exact_sqrt(rhs) {
        Some(0) => vec![0],
        Some(r) => vec![r as i64, -(r as i64)],
        None => vec![],
    }
}

/// First `(u, v)` with `u^2 - D v^2 = 4N` and `u = B v mod 2N`, by increasing `|v|`.
pub fn multiple_root_condition(d: i64, n: i64, b: i64) -> Result<Option<Con1Solution>> {
    check_b(d, n, b)?;
    let (dd, nn) = (d as i128, n as i128);
    let bound = crate::arith::isqrt((4 * nn / -dd) as u128) as i64;
    for v in signed_range(0, bound) {
        let rhs = 4 * nn + dd * (v as i128).pow(2);
        for u in signed_roots(rhs) {
            let sol = Con1Solution { u, v };
            if sol.verify(d, n, b) {
                return Ok(Some(sol));
            }
        }
    }
    Ok(None)
}

/// First `(X, Y)` witnessing that `W_N^2` fixes the class, by increasing `|Y|`.
pub fn wn_squared_fixes_class(d: i64, n: i64, b: i64) -> Result<Option<Wn2Solution>> {
    check_b(d, n, b)?;
    let (dd, nn) = (d as i128, n as i128);
    let bound = crate::arith::isqrt((4 * nn * nn / -dd) as u128) as i64;
    for y in signed_range(1, bound) {
        let rhs = 4 * nn * nn + dd * (y as i128).pow(2);
        for x in signed_roots(rhs) {
            let sol = Wn2Solution { x, y };
            if sol.verify(d, n, b) {
                return Ok(Some(sol));
            }
        }
    }
    Ok(None)
}

/// Whether the modular equation has a multiple root for the N-system of `B`,
/// with the `(u, v)` witness when it does.
pub fn is_multiple_root_case(d: i64, p1: i64, p2: i64, b: i64) -> Result<Option<Con1Solution>> {
    if !check_integrality_conditions(d, p1, p2) {
        return Err(Error::ConditionsViolated(format!(
            "D = {d}, p1 = {p1}, p2 = {p2}"
        )));
    }
    let n = p1 * p2;
    let disc = Discriminant::new(d)?;
    if !b_candidates(&disc, n)?.contains(&b.rem_euclid(2 * n)) {
        return Err(Error::InvalidB {
            b,
            d,
            modulus: 4 * n,
        });
    }
    multiple_root_condition(d, n, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_con1() {
        assert_eq!(
            multiple_root_condition(-56, 39, 10).unwrap(),
            Some(Con1Solution { u: 10, v: 1 })
        );
        assert_eq!(multiple_root_condition(-56, 39, 16).unwrap(), None);
        assert_eq!(multiple_root_condition(-56, 39, 68).unwrap(), Some(Con1Solution { u: -10, v: 1 }));
        assert!(matches!(
            multiple_root_condition(-56, 39, 11),
            Err(Error::InvalidB { .. })
        ));
    }

    #[test]
    fn example_wn2() {
        let sol = wn_squared_fixes_class(-56, 39, 10).unwrap().unwrap();
        assert_eq!(sol, Wn2Solution { x: 22, y: 10 });
        assert!(sol.verify(-56, 39, 10));
    }

    #[test]
    fn bound_cases() {
        // D <= -4N leaves only v = 0
        for b in 0..78 {
            if let Ok(r) = multiple_root_condition(-200, 39, b) {
                assert_eq!(r, None);
            }
        }
        // 4N^2 / |D| < 1
        let d = -6320;
        let n = 39;
        for b in 0..2 * n {
            if let Ok(r) = wn_squared_fixes_class(d, n, b) {
                assert_eq!(r, None);
            }
        }
    }

    #[test]
    fn multiple_root_case() {
        assert_eq!(
            is_multiple_root_case(-56, 3, 13, 10).unwrap(),
            Some(Con1Solution { u: 10, v: 1 })
        );
        assert_eq!(is_multiple_root_case(-56, 3, 13, 16).unwrap(), None);
        assert!(is_multiple_root_case(-8, 3, 13, 10).is_err());
    }
}
