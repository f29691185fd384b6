//! Trigonometric moments of a measure on the unit circle.
//!
//! `m_k = integral of t^k d mu(t)`; negative indices follow by Hermitian
//! extension `m_{-k} = conj(m_k)`. The stored section must be Toeplitz
//! positive semidefinite.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, CMatrix};

/// Allowed negative slack on the smallest eigenvalue of the stored section.
pub const PSD_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence {
    m: Vec<Complex64>,
}

impl MomentSequence {
    /// Validates Hermitian-Toeplitz positivity of the full stored section.
    pub fn new(m: Vec<Complex64>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::Inconsistent("empty moment sequence".into()));
        }
        let seq = Self { m };
        let eig = seq.min_eigenvalue();
        if eig < -PSD_TOLERANCE {
            return Err(Error::IndefiniteMoments {
                size: seq.m.len(),
                eig,
            });
        }
        Ok(seq)
    }

    pub fn from_real(m: &[f64]) -> Result<Self> {
        Self::new(m.iter().map(|&re| Complex64::new(re, 0.0)).collect())
    }

    /// Lebesgue measure truncated at order `n`: `m = (1, 0, .., 0)`.
    pub fn lebesgue(n: usize) -> Self {
        let mut m = vec![Complex64::new(0.0, 0.0); n + 1];
        m[0] = Complex64::new(1.0, 0.0);
        Self { m }
    }

    /// Highest stored index `N`.
    pub fn order(&self) -> usize {
        self.m.len() - 1
    }

    /// Hermitian-extended read; `k` must be within the stored range.
    pub fn moment(&self, k: i64) -> Result<Complex64> {
        let idx = k.unsigned_abs() as usize;
        let value = self.m.get(idx).copied().ok_or(Error::InsufficientMoments {
            need: idx,
            have: self.order(),
        })?;
        Ok(if k < 0 { value.conj() } else { value })
    }

    pub fn is_normalized(&self) -> bool {
        (self.m[0] - Complex64::new(1.0, 0.0)).norm() <= 1e-10
    }

    pub fn raw(&self) -> &[Complex64] {
        &self.m
    }

    /// Gram matrix of `{t^0..t^{size-1}}` in `L^2(mu)`: entry `(r, c)` is
    /// `m_{c-r}`.
    pub fn toeplitz_gram(&self, size: usize) -> Result<CMatrix> {
        if size == 0 {
            return Err(Error::Inconsistent("empty Toeplitz section".into()));
        }
        self.moment(size as i64 - 1)?;
        Ok(CMatrix::from_fn(size, size, |r, c| {
            self.moment(c as i64 - r as i64).expect("range checked")
        }))
    }

    /// Gram matrix of `{t^-n..t^n}`, size `2n+1`; needs moments up to `2n`.
    pub fn toeplitz_gram_symmetric(&self, n: usize) -> Result<CMatrix> {
        self.moment(2 * n as i64)?;
        let d = 2 * n + 1;
        Ok(CMatrix::from_fn(d, d, |r, c| {
            self.moment(c as i64 - r as i64).expect("range checked")
        }))
    }

    /// Smallest eigenvalue of the full stored Toeplitz section.
    pub fn min_eigenvalue(&self) -> f64 {
        let gram = CMatrix::from_fn(self.m.len(), self.m.len(), |r, c| {
            let k = c as i64 - r as i64;
            let v = self.m[k.unsigned_abs() as usize];
            if k < 0 {
                v.conj()
            } else {
                v
            }
        });
        matrix::lambda_min_hermitian(&gram)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize, Deserialize)]
struct MomentsWire {
    moments: Vec<[f64; 2]>,
}

impl Serialize for MomentSequence {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        MomentsWire {
            moments: self.m.iter().map(|a| [a.re, a.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MomentSequence {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = MomentsWire::deserialize(deserializer)?;
        MomentSequence::new(
            wire.moments
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        )
        .map_err(D::Error::custom)
    }
}
