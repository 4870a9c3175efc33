//! 2x2 integer matrices acting on the upper half-plane by Moebius transformations.

use std::fmt;

use crate::arith::ext_gcd;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };
    /// `z -> -1/z`
    pub const S: Mat2 = Mat2 {
        a: 0,
        b: -1,
        c: 1,
        d: 0,
    };
    /// `z -> z + 1`
    pub const T: Mat2 = Mat2 {
        a: 1,
        b: 1,
        c: 0,
        d: 1,
    };

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn translation(n: i64) -> Self {
        Mat2::new(1, n, 0, 1)
    }

    /// `diag(1, n)`, i.e. `z -> z/n`.
    pub fn divide_by(n: i64) -> Self {
        Mat2::new(1, 0, 0, n)
    }

    pub fn det(&self) -> i128 {
        self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128
    }

    pub fn is_unimodular(&self) -> bool {
        self.det() == 1
    }

    pub fn neg(&self) -> Self {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unimodular() {
            return Err(Error::NotUnimodular(self.a, self.b, self.c, self.d));
        }
        Ok(Mat2::new(self.d, -self.b, -self.c, self.a))
    }

    /// Matrix product; panics if an entry leaves the `i64` range.
    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let e = |x: i64, y: i64, u: i64, v: i64| -> i64 {
            let r = x as i128 * y as i128 + u as i128 * v as i128;
            i64::try_from(r).expect("matrix entry overflow")
        };
        Mat2::new(
            e(self.a, rhs.a, self.b, rhs.c),
            e(self.a, rhs.b, self.b, rhs.d),
            e(self.c, rhs.a, self.d, rhs.c),
            e(self.c, rhs.b, self.d, rhs.d),
        )
    }

    /// Largest absolute entry.
    pub fn max_entry(&self) -> u64 {
        [self.a, self.b, self.c, self.d]
            .iter()
            .map(|x| x.unsigned_abs())
            .max()
            .unwrap()
    }

    /// Completes a coprime top row `(a, b)` to a matrix of determinant one.
    pub fn complete_top_row(a: i64, b: i64) -> Option<Mat2> {
        // a*d - b*c = 1  <=>  a*x + b*y = 1 with d = x, c = -y
        let (g, x, y) = ext_gcd(a as i128, b as i128);
        (g == 1).then(|| Mat2::new(a, b, -(y as i64), x as i64))
    }

    /// Completes a coprime left column `(a, c)` to a matrix of determinant one.
    pub fn complete_left_column(a: i64, c: i64) -> Option<Mat2> {
        // a*d - b*c = 1  <=>  a*x + c*y = 1 with d = x, b = -y
        let (g, x, y) = ext_gcd(a as i128, c as i128);
        (g == 1).then(|| Mat2::new(a, -(y as i64), c, x as i64))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}
