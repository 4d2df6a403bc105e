//! Brute-force ground truth: test every subset of the board against
//! precomputed closed-neighborhood masks.
//!
//! This is the independent check for every other engine, so it stays
//! deliberately dumb: a flat sweep over `0..2^|V|` in increasing order,
//! split into disjoint ranges for parallelism, with exact per-size counts
//! merged at the end.

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use thiserror::Error;

use crate::board::{BoardSpec, VertexSet};
use crate::poly::{DominationPolynomial, PolyError};

/// Environment variable that overrides the default 28-vertex guard.
pub const MAX_ORACLE_BITS_ENV: &str = "KINGDOM_MAX_ORACLE_BITS";

const DEFAULT_ORACLE_BITS: usize = 28;

/// Hard ceiling: subsets are u64 words and 2^62 subsets is far beyond any
/// practical run anyway.
const HARD_ORACLE_BITS: usize = 62;

/// Current soft guard on board size, in vertices (= subset bits).
pub fn oracle_bit_limit() -> usize {
    std::env::var(MAX_ORACLE_BITS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(DEFAULT_ORACLE_BITS)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("board has {verts} vertices, above the oracle guard of {limit}; pass force or set {MAX_ORACLE_BITS_ENV}")]
    GuardExceeded { verts: usize, limit: usize },
    #[error("board has {verts} vertices; the oracle cannot enumerate past {HARD_ORACLE_BITS}")]
    TooWide { verts: usize },
    #[error("enumeration produced an invalid polynomial: {0}")]
    Invalid(#[from] PolyError),
}

fn check_guard(spec: &BoardSpec, force: bool) -> Result<usize, OracleError> {
    let verts = spec.vertex_count();
    if verts > HARD_ORACLE_BITS {
        return Err(OracleError::TooWide { verts });
    }
    let limit = oracle_bit_limit();
    if !force && verts > limit {
        return Err(OracleError::GuardExceeded { verts, limit });
    }
    Ok(verts)
}

fn masks_u64(spec: &BoardSpec) -> (Vec<u64>, u64) {
    let masks: Vec<u64> = spec
        .closed_masks_unguarded()
        .iter()
        .map(VertexSet::bits_u64)
        .collect();
    let n = masks.len();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    (masks, full)
}

#[inline]
fn covers(masks: &[u64], full: u64, mut s: u64) -> bool {
    let mut cov = 0u64;
    while s != 0 {
        cov |= masks[s.trailing_zeros() as usize];
        if cov == full {
            return true;
        }
        s &= s - 1;
    }
    cov == full
}

/// Split `0..2^verts` into disjoint ranges sized for the thread pool.
fn subset_ranges(verts: usize) -> Vec<(u64, u64)> {
    let total: u64 = 1u64 << verts;
    let want = (rayon::current_num_threads() as u64) * 8;
    let chunk = (total / want.max(1)).max(1 << 12).max(1);
    let mut ranges = Vec::new();
    let mut lo = 0u64;
    while lo < total {
        let hi = lo.saturating_add(chunk).min(total);
        ranges.push((lo, hi));
        lo = hi;
    }
    ranges
}

/// Exact coefficients N_0..N_|V| by full subset enumeration.
pub fn enumerate_polynomial(
    spec: &BoardSpec,
    force: bool,
) -> Result<DominationPolynomial, OracleError> {
    let verts = check_guard(spec, force)?;
    if verts == 0 {
        return Ok(DominationPolynomial::empty_board());
    }
    let (masks, full) = masks_u64(spec);
    let counts = subset_ranges(verts)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut counts = vec![0u64; verts + 1];
            for s in lo..hi {
                if covers(&masks, full, s) {
                    counts[s.count_ones() as usize] += 1;
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; verts + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let coeffs = counts.into_iter().map(BigUint::from).collect();
    Ok(DominationPolynomial::new(verts, coeffs)?)
}

/// P(-1) accumulated directly as sum of (-1)^|S| over dominating S, without
/// materializing the polynomial. Second route for the dual-sweep check.
pub fn eval_signed_count(spec: &BoardSpec, force: bool) -> Result<BigInt, OracleError> {
    let verts = check_guard(spec, force)?;
    if verts == 0 {
        return Ok(BigInt::from(1));
    }
    let (masks, full) = masks_u64(spec);
    let signed: i128 = subset_ranges(verts)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut acc: i128 = 0;
            for s in lo..hi {
                if covers(&masks, full, s) {
                    acc += 1 - 2 * (s.count_ones() as i128 & 1);
                }
            }
            acc
        })
        .sum();
    Ok(BigInt::from(signed))
}

/// Every dominating set exactly once, in increasing order of the subset's
/// integer value. Single-consumer stream.
pub fn dominating_sets(
    spec: &BoardSpec,
    force: bool,
) -> Result<impl Iterator<Item = VertexSet>, OracleError> {
    let verts = check_guard(spec, force)?;
    let (masks, full) = if verts == 0 {
        (Vec::new(), 0)
    } else {
        masks_u64(spec)
    };
    let total: u64 = 1u64 << verts;
    Ok((0..total).filter_map(move |s| {
        if covers(&masks, full, s) {
            Some(VertexSet::from_bits_u64(verts, s))
        } else {
            None
        }
    }))
}
