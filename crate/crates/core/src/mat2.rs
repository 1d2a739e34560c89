//! 2×2 matrices over `f64` and exact rationals.

use num::{BigRational, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn det(&self) -> f64 {
        let a = &self.0;
        a[0][0] * a[1][1] - a[0][1] * a[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        let mut c = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(c)
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let a = &self.0;
        [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let a = &self.0;
        Some(Mat2([[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]))
    }

    pub fn max_abs_diff(&self, o: &Mat2) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((self.0[i][j] - o.0[i][j]).abs());
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat2(pub [[BigRational; 2]; 2]);

impl RatMat2 {
    pub fn identity() -> Self {
        let one = || BigRational::from_integer(1.into());
        let zero = BigRational::zero;
        RatMat2([[one(), zero()], [zero(), one()]])
    }

    pub fn scale(&self, s: &BigRational) -> RatMat2 {
        let a = &self.0;
        RatMat2([[&a[0][0] * s, &a[0][1] * s], [&a[1][0] * s, &a[1][1] * s]])
    }

    pub fn mul(&self, o: &RatMat2) -> RatMat2 {
        let (a, b) = (&self.0, &o.0);
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        RatMat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn apply(&self, v: &[BigRational; 2]) -> [BigRational; 2] {
        let a = &self.0;
        [&a[0][0] * &v[0] + &a[0][1] * &v[1], &a[1][0] * &v[0] + &a[1][1] * &v[1]]
    }

    pub fn det(&self) -> BigRational {
        let a = &self.0;
        &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0]
    }

    pub fn is_symmetric(&self) -> bool {
        self.0[0][1] == self.0[1][0]
    }

    pub fn to_f64(&self) -> Mat2 {
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        let a = &self.0;
        Mat2([[f(&a[0][0]), f(&a[0][1])], [f(&a[1][0]), f(&a[1][1])]])
    }
}
