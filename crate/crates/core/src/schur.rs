//! Schur parameter sequences: defects, tail products, the coshift, and
//! class-membership statistics.
//!
//! A sequence is stored as finitely many entries `gamma_0..gamma_N` and is
//! read as zero-extended beyond its support. Schur's degenerate case, where
//! the algorithm stops at a unimodular parameter, is carried as a
//! `terminal_unimodular` flag on the last stored entry.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Entries this far from the unit circle still count as strict contractions.
pub const TOL_REGULAR: f64 = 1e-12;
/// Entries this close to modulus one are treated as unimodular.
pub const TOL_UNIMODULAR: f64 = 1e-9;

/// Defect of a contraction: `sqrt(1 - |g|^2)`, clamped to 0 on the circle.
pub fn defect(g: Complex64) -> Result<f64> {
    let modulus = g.norm();
    if modulus > 1.0 + TOL_UNIMODULAR {
        return Err(Error::OutsideDisk { modulus });
    }
    Ok(defect_clamped(g))
}

pub(crate) fn defect_clamped(g: Complex64) -> f64 {
    (1.0 - g.norm_sqr()).max(0.0).sqrt()
}

/// Tail product `prod_{j>=k} sqrt(1 - |gamma_j|^2)`; `degenerate` marks a
/// unimodular factor in range, which forces the value to zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailProduct {
    pub value: f64,
    pub degenerate: bool,
}

/// Summary statistics deciding membership in the Szego and strong-Szego
/// classes of parameter sequences.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub in_l2: bool,
    pub l2_norm_sq: f64,
    /// `sum_k k |gamma_k|^2`
    pub strong_szego_sum: f64,
    /// `prod_{k>=1} prod_{j>=k} (1 - |gamma_j|^2)`
    pub szego_product: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchurParams {
    entries: Vec<Complex64>,
    terminal_unimodular: bool,
}

impl SchurParams {
    /// Validates the contraction invariants: every non-terminal entry must be
    /// a strict contraction, a terminal entry must be unimodular and last.
    pub fn new(entries: Vec<Complex64>, terminal_unimodular: bool) -> Result<Self> {
        if terminal_unimodular && entries.is_empty() {
            return Err(Error::Inconsistent(
                "terminal flag set on an empty sequence".into(),
            ));
        }
        let regular_len = if terminal_unimodular {
            entries.len() - 1
        } else {
            entries.len()
        };
        for (index, g) in entries.iter().take(regular_len).enumerate() {
            let modulus = g.norm();
            if modulus > 1.0 - TOL_REGULAR {
                return Err(Error::InvalidParameter { index, modulus });
            }
        }
        if terminal_unimodular {
            let index = entries.len() - 1;
            let modulus = entries[index].norm();
            if (modulus - 1.0).abs() > TOL_UNIMODULAR {
                return Err(Error::BadTerminal { index, modulus });
            }
        }
        Ok(Self {
            entries,
            terminal_unimodular,
        })
    }

    /// A sequence of strict contractions, zero-extended.
    pub fn regular(entries: Vec<Complex64>) -> Result<Self> {
        Self::new(entries, false)
    }

    pub fn regular_real(entries: &[f64]) -> Result<Self> {
        Self::regular(entries.iter().map(|&re| Complex64::new(re, 0.0)).collect())
    }

    /// The zero sequence (Lebesgue measure).
    pub fn zero() -> Self {
        Self {
            entries: Vec::new(),
            terminal_unimodular: false,
        }
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Zero-extended read. A terminal sequence has no entries past the
    /// terminal index; reads there also return zero.
    pub fn get(&self, j: usize) -> Complex64 {
        self.entries
            .get(j)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_terminal_unimodular(&self) -> bool {
        self.terminal_unimodular
    }

    pub fn terminal_index(&self) -> Option<usize> {
        self.terminal_unimodular.then(|| self.entries.len() - 1)
    }

    /// Number of leading entries up to and including the last nonzero one.
    pub fn support(&self) -> usize {
        if self.terminal_unimodular {
            return self.entries.len();
        }
        let mut len = self.entries.len();
        while len > 0 && self.entries[len - 1] == Complex64::new(0.0, 0.0) {
            len -= 1;
        }
        len
    }

    /// Left shift by `m`: entries `(gamma_{j+m})_{j>=0}`; the terminal flag
    /// survives as long as the terminal entry does.
    pub fn coshift(&self, m: usize) -> SchurParams {
        if m >= self.entries.len() {
            return SchurParams::zero();
        }
        SchurParams {
            entries: self.entries[m..].to_vec(),
            terminal_unimodular: self.terminal_unimodular,
        }
    }

    /// `prod_{j>=k} D_{gamma_j}`, finite because the sequence is
    /// zero-extended; accumulated in log-space past 64 factors.
    pub fn tail_product(&self, k: usize) -> TailProduct {
        if let Some(t) = self.terminal_index() {
            if t >= k {
                return TailProduct {
                    value: 0.0,
                    degenerate: true,
                };
            }
        }
        let support = self.support();
        if k >= support {
            return TailProduct {
                value: 1.0,
                degenerate: false,
            };
        }
        let defects = (k..support).map(|j| defect_clamped(self.entries[j]));
        TailProduct {
            value: stable_product(defects),
            degenerate: false,
        }
    }

    /// l2 and strong-Szego statistics; all quantities depend on moduli only.
    pub fn class_stats(&self) -> ClassStats {
        let l2_norm_sq: f64 = self.entries.iter().map(|g| g.norm_sqr()).sum();
        let strong_szego_sum: f64 = self
            .entries
            .iter()
            .enumerate()
            .map(|(k, g)| k as f64 * g.norm_sqr())
            .sum();
        if self.terminal_unimodular {
            return ClassStats {
                in_l2: false,
                l2_norm_sq,
                strong_szego_sum,
                szego_product: 0.0,
            };
        }
        // prod_{k>=1} prod_{j>=k} (1-|g_j|^2) = exp(sum_{j>=1} j ln(1-|g_j|^2))
        let log_sum: f64 = self
            .entries
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, g)| g.norm_sqr() > 0.0)
            .map(|(j, g)| j as f64 * (1.0 - g.norm_sqr()).ln())
            .sum();
        ClassStats {
            in_l2: true,
            l2_norm_sq,
            strong_szego_sum,
            szego_product: log_sum.exp(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Product of nonnegative factors, switching to log accumulation when there
/// are enough of them for underflow to matter.
pub(crate) fn stable_product(factors: impl Iterator<Item = f64> + Clone) -> f64 {
    let count = factors.clone().count();
    if count <= 64 {
        factors.product()
    } else if factors.clone().any(|d| d == 0.0) {
        0.0
    } else {
        factors.map(f64::ln).sum::<f64>().exp()
    }
}

#[derive(Serialize, Deserialize)]
struct SchurParamsWire {
    gamma: Vec<[f64; 2]>,
    terminal_unimodular: bool,
}

impl Serialize for SchurParams {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SchurParamsWire {
            gamma: self.entries.iter().map(|g| [g.re, g.im]).collect(),
            terminal_unimodular: self.terminal_unimodular,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SchurParams {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = SchurParamsWire::deserialize(deserializer)?;
        let entries = wire
            .gamma
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        SchurParams::new(entries, wire.terminal_unimodular).map_err(D::Error::custom)
    }
}
