//! Domination polynomials with arbitrary-precision coefficients.
//!
//! `coeffs[k]` is the number of dominating sets of size `k`, for
//! `k = 0..=nverts`. Coefficients overflow machine words well before the
//! boards of interest do, so they are `BigUint` and serialize as decimal
//! strings.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("coefficient vector has length {len}, expected nverts + 1 = {expected}")]
    BadLength { len: usize, expected: usize },
    #[error("leading coefficient must be 1 (the full vertex set dominates)")]
    BadLeading,
    #[error("constant coefficient must be {expected} for a board of {nverts} vertices")]
    BadConstant { nverts: usize, expected: u8 },
    #[error("support is not an upward-closed range: N_{k} > 0 but N_{} = 0", k + 1)]
    SupportGap { k: usize },
    #[error("total number of dominating sets must be odd, got an even P(1)")]
    EvenTotal,
    #[error("domination number is undefined on an empty polynomial")]
    Empty,
}

/// Dense domination polynomial of one board.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominationPolynomial {
    nverts: usize,
    coeffs: Vec<BigUint>,
}

impl DominationPolynomial {
    /// Builds and validates. Every engine constructs its result through here,
    /// so a polynomial that violates the structural facts about dominating
    /// sets (leading 1, empty-set rule, upward-closed support, odd total)
    /// never escapes.
    pub fn new(nverts: usize, coeffs: Vec<BigUint>) -> Result<Self, PolyError> {
        if coeffs.len() != nverts + 1 {
            return Err(PolyError::BadLength { len: coeffs.len(), expected: nverts + 1 });
        }
        if !coeffs[nverts].is_one() {
            return Err(PolyError::BadLeading);
        }
        let expected_n0 = u8::from(nverts == 0);
        if coeffs[0] != BigUint::from(expected_n0) {
            return Err(PolyError::BadConstant { nverts, expected: expected_n0 });
        }
        // supersets of dominating sets dominate
        for k in 0..nverts {
            if !coeffs[k].is_zero() && coeffs[k + 1].is_zero() {
                return Err(PolyError::SupportGap { k });
            }
        }
        let total: BigUint = coeffs.iter().sum();
        if (&total % 2u8).is_zero() {
            return Err(PolyError::EvenTotal);
        }
        Ok(DominationPolynomial { nverts, coeffs })
    }

    /// The polynomial of the empty board: P = 1.
    pub fn empty_board() -> Self {
        DominationPolynomial { nverts: 0, coeffs: vec![BigUint::one()] }
    }

    pub fn nverts(&self) -> usize {
        self.nverts
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// Exact Horner evaluation.
    pub fn eval_at(&self, z: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + BigInt::from(c.clone());
        }
        acc
    }

    pub fn eval_i64(&self, z: i64) -> BigInt {
        self.eval_at(&BigInt::from(z))
    }

    /// Domination number: the smallest k with N_k > 0. The empty board needs
    /// no pieces, so it reports 0.
    pub fn domination_number(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .expect("leading coefficient is 1")
    }

    /// Machine-readable form with decimal-string coefficients.
    pub fn to_json(&self, board: &str) -> PolynomialJson {
        PolynomialJson {
            board: board.to_string(),
            nverts: self.nverts,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
            gamma: self.domination_number(),
            eval: EvalPair {
                neg_one: self.eval_i64(-1).to_string(),
                one: self.eval_i64(1).to_string(),
            },
        }
    }
}

impl fmt::Display for DominationPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "z")?,
                1 => write!(f, "{c} z")?,
                _ if c.is_one() => write!(f, "z^{k}")?,
                _ => write!(f, "{c} z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// JSON schema for a computed polynomial.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub board: String,
    pub nverts: usize,
    pub coeffs: Vec<String>,
    pub gamma: usize,
    pub eval: EvalPair,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalPair {
    #[serde(rename = "-1")]
    pub neg_one: String,
    #[serde(rename = "1")]
    pub one: String,
}

/// Render a signed count the way the reference tables print them.
pub fn format_signed(v: &BigInt) -> String {
    if v.is_negative() {
        format!("{v}")
    } else {
        v.to_string()
    }
}
