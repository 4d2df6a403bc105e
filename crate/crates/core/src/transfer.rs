//! Frontier (transfer-matrix) dynamic program for 2-d boards.
//!
//! The board is swept column by column along the longer axis, so the frontier
//! is the shorter side. A state is the occupancy mask of the newest column
//! plus the mask of its cells already dominated by pieces placed so far; a
//! column is finalized as soon as its last potential dominator (the next
//! column) is placed, and states that leave a finalized cell uncovered are
//! dead.
//!
//! Cyclic sweep axis: the DP runs once per seed-column occupancy. The seed
//! column's domination deficit after its free-side neighbor is recorded in
//! the state (`pending`) and both seams are checked when the cycle closes.
//! A cyclic frontier axis only wraps the within-column coverage masks.
//!
//! Weights are exact: scalar `BigInt` in point-evaluation mode (cheap, powers
//! the big table sweeps) or a coefficient vector indexed by pieces placed in
//! polynomial mode.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::board::{BoardError, BoardSpec, Boundary, BoundaryMode, Family};
use crate::poly::{DominationPolynomial, PolyError};

/// Frontier cells are two state bits each; 4^16 potential states is the
/// desk-scale ceiling in point mode.
pub const MAX_FRONTIER: usize = 16;
/// Sweep length cap.
pub const MAX_SWEEP: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransferError {
    #[error("the frontier engine handles d = 2 boards only (got d = {0})")]
    UnsupportedDimension(usize),
    #[error("frontier height {h} exceeds the limit of {MAX_FRONTIER}")]
    FrontierTooTall { h: usize },
    #[error("sweep length {len} exceeds the limit of {MAX_SWEEP}")]
    SweepTooLong { len: usize },
    #[error(transparent)]
    Board(#[from] BoardError),
    #[error("transfer produced an invalid polynomial: {0}")]
    Invalid(#[from] PolyError),
}

#[derive(Debug, Clone, Copy)]
pub struct TransferOptions {
    /// Drop dead states as soon as a column is finalized. Disabling keeps
    /// them in the table (marked dead) and must not change any result.
    pub prune: bool,
}

impl Default for TransferOptions {
    fn default() -> Self {
        TransferOptions { prune: true }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TransferStats {
    /// Peak number of live states in any layer (per seed run when cyclic).
    pub max_live_states: usize,
}

// key layout: occ | dom << 16 | pending << 32 | dead << 48
const DOM_SHIFT: u32 = 16;
const PEND_SHIFT: u32 = 32;
const DEAD_BIT: u64 = 1 << 48;

#[inline]
fn pack(occ: u32, dom: u32, pending: u32, dead: bool) -> u64 {
    occ as u64
        | (dom as u64) << DOM_SHIFT
        | (pending as u64) << PEND_SHIFT
        | if dead { DEAD_BIT } else { 0 }
}

#[inline]
fn unpack(key: u64) -> (u32, u32, u32, bool) {
    (
        key as u32 & 0xFFFF,
        (key >> DOM_SHIFT) as u32 & 0xFFFF,
        (key >> PEND_SHIFT) as u32 & 0xFFFF,
        key & DEAD_BIT != 0,
    )
}

#[derive(Default)]
struct FibHasher(u64);

impl Hasher for FibHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, _: &[u8]) {
        unreachable!("state keys hash as u64")
    }
    fn write_u64(&mut self, v: u64) {
        self.0 = v.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(26);
    }
}

type StateMap<W> = HashMap<u64, W, BuildHasherDefault<FibHasher>>;

/// Per-column coverage tables for every occupancy mask.
struct FrontierTables {
    full: u32,
    /// within-column closed coverage: occ | up(occ) | down(occ)
    vexp: Vec<u32>,
    /// coverage cast onto an adjacent column (king spreads, wazir does not)
    ccov: Vec<u32>,
}

impl FrontierTables {
    fn build(family: Family, h: usize, wrap: bool) -> FrontierTables {
        debug_assert!((1..=MAX_FRONTIER).contains(&h));
        let full = (1u32 << h) - 1;
        let up = |m: u32| (m >> 1) | if wrap { (m & 1) << (h - 1) } else { 0 };
        let down = |m: u32| ((m << 1) & full) | if wrap { m >> (h - 1) } else { 0 };
        let mut vexp = Vec::with_capacity(1 << h);
        for occ in 0..=full {
            vexp.push(occ | up(occ) | down(occ));
        }
        let ccov = match family {
            Family::King => vexp.clone(),
            Family::Wazir => (0..=full).collect(),
        };
        FrontierTables { full, vexp, ccov }
    }
}

/// Exact weights the DP can accumulate.
trait WeightKind: Sync {
    type W: Clone + Send + Sync;
    fn zero(&self) -> Self::W;
    /// A fresh configuration carrying `placed` pieces.
    fn unit(&self, placed: u32) -> Self::W;
    /// `dst += src * z^placed` (point) or shift-accumulate (polynomial).
    fn add_scaled(&self, dst: &mut Self::W, src: &Self::W, placed: u32);
}

struct PointWeights {
    powers: Vec<BigInt>,
}

impl PointWeights {
    fn new(z: i64, h: usize) -> Self {
        let mut powers = Vec::with_capacity(h + 1);
        let mut p = BigInt::one();
        for _ in 0..=h {
            powers.push(p.clone());
            p *= z;
        }
        PointWeights { powers }
    }
}

impl WeightKind for PointWeights {
    type W = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn unit(&self, placed: u32) -> BigInt {
        self.powers[placed as usize].clone()
    }

    fn add_scaled(&self, dst: &mut BigInt, src: &BigInt, placed: u32) {
        *dst += src * &self.powers[placed as usize];
    }
}

struct PolyWeights {
    nverts: usize,
}

impl WeightKind for PolyWeights {
    type W = Vec<BigUint>;

    fn zero(&self) -> Vec<BigUint> {
        vec![BigUint::zero(); self.nverts + 1]
    }

    fn unit(&self, placed: u32) -> Vec<BigUint> {
        let mut w = self.zero();
        w[placed as usize] = BigUint::one();
        w
    }

    fn add_scaled(&self, dst: &mut Vec<BigUint>, src: &Vec<BigUint>, placed: u32) {
        let k = placed as usize;
        for i in 0..=self.nverts - k {
            if !src[i].is_zero() {
                dst[i + k] += &src[i];
            }
        }
    }
}

/// Sweep geometry after transposing so the frontier is the shorter side.
struct Sweep {
    cols: usize,
    h: usize,
    sweep_cyclic: bool,
    frontier_cyclic: bool,
}

fn canonicalize(spec: &BoardSpec) -> Result<Sweep, TransferError> {
    if spec.ndim() != 2 {
        return Err(TransferError::UnsupportedDimension(spec.ndim()));
    }
    let (mut dims, mut bounds) = (
        [spec.dims()[0], spec.dims()[1]],
        [spec.boundary()[0], spec.boundary()[1]],
    );
    if dims[0] < dims[1] {
        dims.swap(0, 1);
        bounds.swap(0, 1);
    }
    let (cols, h) = (dims[0], dims[1]);
    if h > MAX_FRONTIER {
        return Err(TransferError::FrontierTooTall { h });
    }
    if cols > MAX_SWEEP {
        return Err(TransferError::SweepTooLong { len: cols });
    }
    Ok(Sweep {
        cols,
        h,
        sweep_cyclic: bounds[0] == Boundary::Cyclic,
        frontier_cyclic: bounds[1] == Boundary::Cyclic,
    })
}

/// One layer step: place the next column's occupancy on every state.
///
/// `finalize` checks that the previous column is fully dominated once its
/// last potential dominator is placed. `record_pending` instead stores the
/// seed column's uncovered cells for the cyclic closure (used only on the
/// first transition of a cyclic sweep, where the wrap neighbor is not yet
/// known).
fn step<K: WeightKind>(
    kind: &K,
    fr: &FrontierTables,
    table: StateMap<K::W>,
    finalize: bool,
    record_pending: bool,
    prune: bool,
) -> StateMap<K::W> {
    debug_assert!(!(finalize && record_pending));
    let entries: Vec<(u64, K::W)> = table.into_iter().collect();
    let chunk = entries.len().div_ceil(rayon::current_num_threads() * 4).max(1);
    entries
        .par_chunks(chunk)
        .map(|part| {
            let mut local: StateMap<K::W> = StateMap::default();
            for (key, w) in part {
                let (occ_prev, dom_prev, pending, dead) = unpack(*key);
                let cast = fr.ccov[occ_prev as usize];
                for occ in 0..=fr.full {
                    let sealed = dom_prev | fr.ccov[occ as usize];
                    let mut ndead = dead;
                    if finalize && sealed != fr.full {
                        if prune {
                            continue;
                        }
                        ndead = true;
                    }
                    let npending = if record_pending { fr.full & !sealed } else { pending };
                    let ndom = cast | fr.vexp[occ as usize];
                    let nkey = pack(occ, ndom, npending, ndead);
                    let placed = occ.count_ones();
                    match local.get_mut(&nkey) {
                        Some(dst) => kind.add_scaled(dst, w, placed),
                        None => {
                            let mut dst = kind.zero();
                            kind.add_scaled(&mut dst, w, placed);
                            local.insert(nkey, dst);
                        }
                    }
                }
            }
            local
        })
        .reduce(StateMap::default, |mut a, b| {
            for (k, v) in b {
                match a.get_mut(&k) {
                    Some(dst) => kind.add_scaled(dst, &v, 0),
                    None => {
                        a.insert(k, v);
                    }
                }
            }
            a
        })
}

fn live_states<W>(table: &StateMap<W>) -> usize {
    table.keys().filter(|&&k| k & DEAD_BIT == 0).count()
}

fn run<K: WeightKind>(
    kind: &K,
    sweep: &Sweep,
    family: Family,
    opts: &TransferOptions,
) -> (K::W, TransferStats) {
    let fr = FrontierTables::build(family, sweep.h, sweep.frontier_cyclic);
    let mut stats = TransferStats::default();
    let mut total = kind.zero();

    if !sweep.sweep_cyclic {
        let mut table: StateMap<K::W> = StateMap::default();
        for occ in 0..=fr.full {
            table.insert(
                pack(occ, fr.vexp[occ as usize], 0, false),
                kind.unit(occ.count_ones()),
            );
        }
        stats.max_live_states = stats.max_live_states.max(live_states(&table));
        for _ in 1..sweep.cols {
            table = step(kind, &fr, table, true, false, opts.prune);
            stats.max_live_states = stats.max_live_states.max(live_states(&table));
        }
        for (key, w) in &table {
            let (_, dom, _, dead) = unpack(*key);
            if !dead && dom == fr.full {
                kind.add_scaled(&mut total, w, 0);
            }
        }
        return (total, stats);
    }

    // Cyclic sweep axis: board validation guarantees at least 3 columns.
    debug_assert!(sweep.cols >= 3);
    for seed in 0..=fr.full {
        let mut table: StateMap<K::W> = StateMap::default();
        table.insert(
            pack(seed, fr.vexp[seed as usize], 0, false),
            kind.unit(seed.count_ones()),
        );
        table = step(kind, &fr, table, false, true, opts.prune);
        for _ in 2..sweep.cols {
            table = step(kind, &fr, table, true, false, opts.prune);
            stats.max_live_states = stats.max_live_states.max(live_states(&table));
        }
        let seed_cast = fr.ccov[seed as usize];
        for (key, w) in &table {
            let (occ, dom, pending, dead) = unpack(*key);
            let last_sealed = (dom | seed_cast) == fr.full;
            let seed_sealed = (pending & !fr.ccov[occ as usize]) == 0;
            if !dead && last_sealed && seed_sealed {
                kind.add_scaled(&mut total, w, 0);
            }
        }
    }
    (total, stats)
}

/// Exact domination polynomial via the frontier DP. Must agree with the
/// oracle coefficient for coefficient wherever both run.
pub fn transfer_polynomial(spec: &BoardSpec) -> Result<DominationPolynomial, TransferError> {
    transfer_polynomial_opt(spec, &TransferOptions::default())
}

pub fn transfer_polynomial_opt(
    spec: &BoardSpec,
    opts: &TransferOptions,
) -> Result<DominationPolynomial, TransferError> {
    let nverts = spec.vertex_count();
    if spec.ndim() == 2 && nverts == 0 {
        return Ok(DominationPolynomial::empty_board());
    }
    let sweep = canonicalize(spec)?;
    let kind = PolyWeights { nverts };
    let (coeffs, _) = run(&kind, &sweep, spec.family(), opts);
    Ok(DominationPolynomial::new(nverts, coeffs)?)
}

/// P(z) at a fixed integer point with scalar weights. Massively cheaper than
/// polynomial mode; this is what table sweeps use.
pub fn transfer_eval(spec: &BoardSpec, z: i64) -> Result<BigInt, TransferError> {
    transfer_eval_opt(spec, z, &TransferOptions::default()).map(|(v, _)| v)
}

pub fn transfer_eval_opt(
    spec: &BoardSpec,
    z: i64,
    opts: &TransferOptions,
) -> Result<(BigInt, TransferStats), TransferError> {
    let nverts = spec.vertex_count();
    if spec.ndim() == 2 && nverts == 0 {
        return Ok((BigInt::one(), TransferStats::default()));
    }
    let sweep = canonicalize(spec)?;
    let kind = PointWeights::new(z, sweep.h);
    Ok(run(&kind, &sweep, spec.family(), opts))
}

/// A rendered scan: rows are n values, columns are m values, matching the
/// reference-table orientation.
#[derive(Debug, Clone)]
pub struct TableScan {
    pub family: Family,
    pub mode: BoundaryMode,
    pub z: i64,
    pub m_values: Vec<usize>,
    pub n_values: Vec<usize>,
    /// rows[i][j] = P(z) for the board m_values[j] x n_values[i]
    pub rows: Vec<Vec<BigInt>>,
}

pub fn table_scan(
    family: Family,
    mode: BoundaryMode,
    m_range: (usize, usize),
    n_range: (usize, usize),
    z: i64,
) -> Result<TableScan, TransferError> {
    let m_values: Vec<usize> = (m_range.0..=m_range.1).collect();
    let n_values: Vec<usize> = (n_range.0..=n_range.1).collect();
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in &n_values {
        let mut row = Vec::with_capacity(m_values.len());
        for &m in &m_values {
            let spec = BoardSpec::rect(family, m, n, mode)?;
            row.push(transfer_eval(&spec, z)?);
        }
        rows.push(row);
    }
    Ok(TableScan { family, mode, z, m_values, n_values, rows })
}
