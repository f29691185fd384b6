//! Truncated Taylor series on the unit disk.
//!
//! A series stores coefficients of `z^0..z^N` and calls `N` its order.
//! Binary arithmetic is truncation-consistent: results carry the smaller of
//! the two input orders, so coefficients below the cut are exact.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            return Self { coeffs: vec![ZERO] };
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&re| Complex64::new(re, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![ZERO; order + 1],
        }
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut coeffs = vec![ZERO; order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn truncated(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order + 1);
        coeffs.resize(order + 1, ZERO);
        Self { coeffs }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        Self {
            coeffs: (0..=order).map(|k| self.coeff(k) + rhs.coeff(k)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        Self {
            coeffs: (0..=order).map(|k| self.coeff(k) - rhs.coeff(k)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&a| c * a).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![ZERO; order + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a == ZERO {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        Self { coeffs }
    }

    /// Triangular long division; the divisor's constant term must be bounded
    /// away from zero.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        let b0 = rhs.coeff(0);
        if b0.norm() < 1e-14 {
            return Err(Error::SeriesDivision { modulus: b0.norm() });
        }
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![ZERO; order + 1];
        for n in 0..=order {
            let mut acc = self.coeff(n);
            for k in 1..=n {
                acc -= rhs.coeff(k) * coeffs[n - k];
            }
            coeffs[n] = acc / b0;
        }
        Ok(Self { coeffs })
    }

    /// Multiplication by `z`; the order grows by one.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Division by `z`: drops the constant term, which must vanish to `tol`.
    pub fn shift_down(&self, tol: f64) -> Result<Self> {
        let modulus = self.coeff(0).norm();
        if modulus > tol {
            return Err(Error::NonzeroConstantTerm { modulus });
        }
        if self.coeffs.len() == 1 {
            return Ok(Self { coeffs: vec![ZERO] });
        }
        Ok(Self {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for &a in self.coeffs.iter().rev() {
            acc = acc * z + a;
        }
        acc
    }

    /// Coefficients scaled by `r^k`, i.e. the series of `z -> f(r z)`.
    pub fn dilated(&self, r: f64) -> Self {
        let mut scale = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| {
                let out = a * scale;
                scale *= r;
                out
            })
            .collect();
        Self { coeffs }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesWire {
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for PowerSeries {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        SeriesWire {
            coeffs: self.coeffs.iter().map(|a| [a.re, a.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PowerSeries {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let wire = SeriesWire::deserialize(deserializer)?;
        Ok(PowerSeries::new(
            wire.coeffs
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn arithmetic_truncates_to_min_order() {
        let a = PowerSeries::from_real(&[1.0, 2.0, 3.0]);
        let b = PowerSeries::from_real(&[1.0, 1.0]);
        assert_eq!(a.add(&b).order(), 1);
        assert_eq!(a.mul(&b).order(), 1);
        assert_eq!(a.mul(&b).coeff(1), c(3.0));
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = PowerSeries::from_real(&[1.0, -0.5, 0.25, 0.1]);
        let b = PowerSeries::from_real(&[2.0, 1.0, -0.3, 0.2]);
        let q = a.mul(&b).div(&b).unwrap();
        for k in 0..=3 {
            assert!((q.coeff(k) - a.coeff(k)).norm() < 1e-14);
        }
    }

    #[test]
    fn division_by_zero_constant_rejected() {
        let a = PowerSeries::from_real(&[1.0]);
        let b = PowerSeries::from_real(&[0.0, 1.0]);
        assert!(matches!(a.div(&b), Err(Error::SeriesDivision { .. })));
    }

    #[test]
    fn geometric_series_division() {
        // 1/(1 - z/2) = sum (z/2)^k
        let one = PowerSeries::constant(c(1.0), 8);
        let den = {
            let mut v = vec![c(1.0), c(-0.5)];
            v.resize(9, Complex64::new(0.0, 0.0));
            PowerSeries::new(v)
        };
        let q = one.div(&den).unwrap();
        for k in 0..=8 {
            assert!((q.coeff(k) - c(0.5f64.powi(k as i32))).norm() < 1e-14);
        }
    }

    #[test]
    fn shifts() {
        let a = PowerSeries::from_real(&[0.0, 1.0, 2.0]);
        let down = a.shift_down(1e-12).unwrap();
        assert_eq!(down.coeffs(), &[c(1.0), c(2.0)]);
        assert_eq!(down.shift_up().coeffs(), &[c(0.0), c(1.0), c(2.0)]);
        let bad = PowerSeries::from_real(&[0.5, 1.0]);
        assert!(bad.shift_down(1e-12).is_err());
    }

    #[test]
    fn eval_and_dilate() {
        let a = PowerSeries::from_real(&[1.0, 2.0, 3.0]);
        let z = Complex64::new(0.5, 0.25);
        assert!((a.eval(z) - (c(1.0) + c(2.0) * z + c(3.0) * z * z)).norm() < 1e-15);
        let d = a.dilated(0.5);
        assert!((d.eval(z) - a.eval(z * 0.5)).norm() < 1e-15);
    }
}
