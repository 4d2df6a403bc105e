//! The parity matching on dominating sets of free king boards.
//!
//! The board is cut into 2x...x2 blocks anchored at all-odd corners
//! (truncated at odd edges). Scanning blocks in canonical order, the first
//! block holding an occupied non-corner vertex has its corner flipped; this
//! pairs every dominating set with one of opposite parity except the set T
//! of all corners. The signed count P(-1) therefore collapses to (-1)^|T|
//! with |T| the product of the per-axis block counts.
//!
//! The construction relies on free boundaries: on a cylinder or torus there
//! is no first block, and these routines refuse such boards.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::board::{BoardSpec, Family, Vertex, VertexSet};
use crate::oracle::{self, OracleError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("the parity matching is defined for king boards only")]
    UnsupportedFamily,
    #[error("the parity matching requires free boundary conditions")]
    UnsupportedBoundary,
    #[error("input set does not dominate the board")]
    NotDominating,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// One block: its all-odd corner plus the up-to-2^d cells it owns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub corner: Vertex,
    pub cells: Vec<Vertex>,
}

/// The blocks in scan order: canonical vertex order of the corners, i.e.
/// left to right within a row, rows top to bottom, and so on with the last
/// axis slowest.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    blocks: Vec<Block>,
}

impl BlockDecomposition {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

fn check_board(spec: &BoardSpec) -> Result<(), MatchingError> {
    if spec.family() != Family::King {
        return Err(MatchingError::UnsupportedFamily);
    }
    if !spec.is_all_free() {
        return Err(MatchingError::UnsupportedBoundary);
    }
    Ok(())
}

/// Cut the board into blocks anchored at all-odd corners.
pub fn decompose(spec: &BoardSpec) -> Result<BlockDecomposition, MatchingError> {
    check_board(spec)?;
    let dims = spec.dims();
    let verts = spec.vertex_count();
    let mut blocks = Vec::new();
    if verts == 0 {
        return Ok(BlockDecomposition { blocks });
    }
    // Corners in ascending canonical index = scan order.
    for idx in 0..verts {
        let corner = spec.vertex_at(idx);
        if corner.coords().iter().any(|c| c % 2 == 0) {
            continue;
        }
        let spans: Vec<(usize, usize)> = corner
            .coords()
            .iter()
            .zip(dims)
            .map(|(&c, &n)| (c, (c + 1).min(n)))
            .collect();
        let mut cells = Vec::with_capacity(1 << dims.len());
        let mut cur: Vec<usize> = spans.iter().map(|&(lo, _)| lo).collect();
        'odometer: loop {
            cells.push(Vertex::new(cur.clone()));
            for axis in 0..cur.len() {
                if cur[axis] < spans[axis].1 {
                    cur[axis] += 1;
                    continue 'odometer;
                }
                cur[axis] = spans[axis].0;
            }
            break;
        }
        blocks.push(Block { corner, cells });
    }
    Ok(BlockDecomposition { blocks })
}

/// The unmatched set T: every block corner, i.e. all vertices with all-odd
/// coordinates. |T| is the product of the per-axis block counts.
pub fn fixed_point(spec: &BoardSpec) -> Result<VertexSet, MatchingError> {
    let dec = decompose(spec)?;
    let mut t = VertexSet::new(spec.vertex_count());
    for b in dec.blocks() {
        t.insert(spec.index_of(&b.corner).expect("corner in bounds"));
    }
    Ok(t)
}

/// Result of the partner map on one dominating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchOutcome {
    /// The corner that was toggled and the resulting set.
    Partner { flipped: Vertex, partner: VertexSet },
    /// No block has an occupied non-corner vertex; the input is T.
    FixedPoint,
}

/// Precomputed scan data shared by partner calls on one board.
struct Matcher {
    masks: Vec<VertexSet>,
    nverts: usize,
    /// (corner index, non-corner cell indices) in scan order
    blocks: Vec<(usize, Vec<usize>)>,
    corner_vertices: Vec<Vertex>,
    t_set: VertexSet,
}

impl Matcher {
    fn new(spec: &BoardSpec) -> Result<Matcher, MatchingError> {
        let dec = decompose(spec)?;
        let nverts = spec.vertex_count();
        let mut blocks = Vec::with_capacity(dec.len());
        let mut corner_vertices = Vec::with_capacity(dec.len());
        let mut t_set = VertexSet::new(nverts);
        for b in dec.blocks() {
            let corner_idx = spec.index_of(&b.corner).expect("corner in bounds");
            let noncorner: Vec<usize> = b
                .cells
                .iter()
                .map(|v| spec.index_of(v).expect("cell in bounds"))
                .filter(|&i| i != corner_idx)
                .collect();
            blocks.push((corner_idx, noncorner));
            corner_vertices.push(b.corner.clone());
            t_set.insert(corner_idx);
        }
        Ok(Matcher { masks: spec.closed_masks_unguarded(), nverts, blocks, corner_vertices, t_set })
    }

    fn is_dominating(&self, s: &VertexSet) -> bool {
        let mut covered = VertexSet::new(self.nverts);
        for idx in s.iter_ones() {
            covered.union_with(&self.masks[idx]);
        }
        covered.is_full()
    }

    fn partner(&self, s: &VertexSet) -> Result<MatchOutcome, MatchingError> {
        if !self.is_dominating(s) {
            return Err(MatchingError::NotDominating);
        }
        for (bi, (corner_idx, noncorner)) in self.blocks.iter().enumerate() {
            if noncorner.iter().any(|&i| s.contains(i)) {
                let mut partner = s.clone();
                partner.toggle(*corner_idx);
                return Ok(MatchOutcome::Partner {
                    flipped: self.corner_vertices[bi].clone(),
                    partner,
                });
            }
            // Inactive block: its corner is only dominated from within, so a
            // dominating set must hold the corner itself.
            assert!(
                s.contains(*corner_idx),
                "dominating set leaves the corner of an inactive block uncovered"
            );
        }
        debug_assert_eq!(s, &self.t_set);
        Ok(MatchOutcome::FixedPoint)
    }
}

/// The partner map: flip the corner of the first block holding an occupied
/// non-corner vertex. The input must dominate; the result dominates, differs
/// in exactly that corner, and has opposite size parity.
pub fn partner(spec: &BoardSpec, s: &VertexSet) -> Result<MatchOutcome, MatchingError> {
    Matcher::new(spec)?.partner(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub board: String,
    pub dominating_sets: u64,
    pub pairs: u64,
    pub fixed_points: u64,
    pub signed_sum: i64,
    pub expected_sign: i64,
    pub involution_ok: bool,
    pub parity_ok: bool,
    pub closure_ok: bool,
    pub unique_fixed_point: bool,
    pub signed_ok: bool,
    pub violations: Vec<String>,
}

impl TheoremReport {
    pub fn pass(&self) -> bool {
        self.involution_ok
            && self.parity_ok
            && self.closure_ok
            && self.unique_fixed_point
            && self.signed_ok
    }
}

const MAX_RECORDED_VIOLATIONS: usize = 20;

fn record(violations: &mut Vec<String>, msg: String) {
    if violations.len() < MAX_RECORDED_VIOLATIONS {
        violations.push(msg);
    }
}

/// Exhaustive check of the matching over every dominating set: the partner
/// map is an involution pairing opposite parities, T is the unique fixed
/// point, and the signed count equals (-1)^|T|.
pub fn verify_theorem(spec: &BoardSpec, force: bool) -> Result<TheoremReport, MatchingError> {
    let matcher = Matcher::new(spec)?;
    let t_size = matcher.t_set.count_ones();
    let expected_sign = if t_size % 2 == 0 { 1 } else { -1 };

    let mut dominating_sets = 0u64;
    let mut pairs2 = 0u64; // each pair seen from both ends
    let mut fixed_points = 0u64;
    let mut signed_sum = 0i64;
    let mut involution_ok = true;
    let mut parity_ok = true;
    let mut closure_ok = true;
    let mut fixed_is_t = true;
    let mut violations = Vec::new();

    for s in oracle::dominating_sets(spec, force)? {
        dominating_sets += 1;
        let size = s.count_ones();
        signed_sum += if size % 2 == 0 { 1 } else { -1 };
        match matcher.partner(&s)? {
            MatchOutcome::FixedPoint => {
                fixed_points += 1;
                if s != matcher.t_set {
                    fixed_is_t = false;
                    record(&mut violations, format!("fixed point is not T: {:?}", s));
                }
            }
            MatchOutcome::Partner { partner, .. } => {
                pairs2 += 1;
                if !matcher.is_dominating(&partner) {
                    closure_ok = false;
                    record(&mut violations, format!("partner of {:?} does not dominate", s));
                }
                let psize = partner.count_ones();
                if psize.abs_diff(size) != 1 {
                    parity_ok = false;
                    record(&mut violations, format!("partner of {:?} has size {psize}", s));
                }
                match matcher.partner(&partner)? {
                    MatchOutcome::Partner { partner: back, .. } if back == s => {}
                    other => {
                        involution_ok = false;
                        record(
                            &mut violations,
                            format!("partner of partner of {:?} is {:?}", s, other),
                        );
                    }
                }
            }
        }
    }

    let unique_fixed_point = fixed_points == 1 && fixed_is_t;
    if !unique_fixed_point {
        record(&mut violations, format!("{fixed_points} fixed points (expected exactly T)"));
    }
    let signed_ok = signed_sum == expected_sign;
    if !signed_ok {
        record(
            &mut violations,
            format!("signed sum {signed_sum} != expected {expected_sign}"),
        );
    }
    Ok(TheoremReport {
        board: spec.to_string(),
        dominating_sets,
        pairs: pairs2 / 2,
        fixed_points,
        signed_sum,
        expected_sign,
        involution_ok,
        parity_ok,
        closure_ok,
        unique_fixed_point,
        signed_ok,
        violations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SampledReport {
    pub board: String,
    pub trials: u64,
    pub pairs: u64,
    pub fixed_points: u64,
    pub rejected_samples: u64,
    pub violations: Vec<String>,
}

impl SampledReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Seeded spot checks on boards too large to enumerate. Samples alternate
/// between uniform density-1/2 subsets filtered to dominating and T plus
/// 1..=4 extra vertices; trial 0 is T itself so the fixed point is always
/// exercised.
pub fn sampled_check(
    spec: &BoardSpec,
    trials: u64,
    rng_seed: u64,
) -> Result<SampledReport, MatchingError> {
    let matcher = Matcher::new(spec)?;
    let nverts = spec.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut violations = Vec::new();
    let mut pairs = 0u64;
    let mut fixed_points = 0u64;
    let mut rejected = 0u64;

    let non_corners: Vec<usize> =
        (0..nverts).filter(|&i| !matcher.t_set.contains(i)).collect();

    for trial in 0..trials {
        let s = if trial == 0 {
            matcher.t_set.clone()
        } else if trial % 2 == 1 && !non_corners.is_empty() {
            // T with k extra vertices: dominating by superset closure
            let k = rng.gen_range(1..=4usize.min(non_corners.len()));
            let mut s = matcher.t_set.clone();
            let mut added = 0;
            while added < k {
                let v = non_corners[rng.gen_range(0..non_corners.len())];
                if !s.contains(v) {
                    s.insert(v);
                    added += 1;
                }
            }
            s
        } else {
            // uniform density 1/2, rejection-sampled to dominating
            let mut found = None;
            for _ in 0..1000 {
                let mut s = VertexSet::new(nverts);
                for i in 0..nverts {
                    if rng.gen::<bool>() {
                        s.insert(i);
                    }
                }
                if matcher.is_dominating(&s) {
                    found = Some(s);
                    break;
                }
                rejected += 1;
            }
            match found {
                Some(s) => s,
                None => {
                    record(&mut violations, format!("trial {trial}: no dominating sample found"));
                    continue;
                }
            }
        };

        let is_t = s == matcher.t_set;
        match matcher.partner(&s)? {
            MatchOutcome::FixedPoint => {
                fixed_points += 1;
                if !is_t {
                    record(&mut violations, format!("trial {trial}: non-T fixed point"));
                }
            }
            MatchOutcome::Partner { partner, .. } => {
                pairs += 1;
                if is_t {
                    record(&mut violations, format!("trial {trial}: T has a partner"));
                }
                if !matcher.is_dominating(&partner) {
                    record(&mut violations, format!("trial {trial}: partner does not dominate"));
                }
                if partner.count_ones().abs_diff(s.count_ones()) != 1 {
                    record(&mut violations, format!("trial {trial}: partner size is off"));
                }
                match matcher.partner(&partner)? {
                    MatchOutcome::Partner { partner: back, .. } if back == s => {}
                    _ => record(&mut violations, format!("trial {trial}: involution broken")),
                }
            }
        }
    }
    Ok(SampledReport {
        board: spec.to_string(),
        trials,
        pairs,
        fixed_points,
        rejected_samples: rejected,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn king(dims: &[usize]) -> BoardSpec {
        BoardSpec::free(Family::King, dims.to_vec()).unwrap()
    }

    #[test]
    fn decompose_8x8() {
        let dec = decompose(&king(&[8, 8])).unwrap();
        assert_eq!(dec.len(), 16);
        assert!(dec.blocks().iter().all(|b| b.cells.len() == 4));
    }

    #[test]
    fn decompose_3x3_truncation() {
        let dec = decompose(&king(&[3, 3])).unwrap();
        assert_eq!(dec.len(), 4);
        let sizes: Vec<usize> = dec.blocks().iter().map(|b| b.cells.len()).collect();
        // scan order: corners (1,1), (3,1), (1,3), (3,3)
        assert_eq!(sizes, vec![4, 2, 2, 1]);
    }

    #[test]
    fn decompose_single_cell() {
        let dec = decompose(&king(&[1, 1])).unwrap();
        assert_eq!(dec.len(), 1);
        assert_eq!(dec.blocks()[0].cells, vec![Vertex::xy(1, 1)]);
    }

    #[test]
    fn blocks_partition_the_board() {
        for spec in [king(&[8, 8]), king(&[3, 3]), king(&[5, 4]), king(&[2, 3, 3]), king(&[1, 6])] {
            let dec = decompose(&spec).unwrap();
            let expected: usize = spec.dims().iter().map(|n| n.div_ceil(2)).product();
            assert_eq!(dec.len(), expected, "block count on {spec}");
            let mut seen = VertexSet::new(spec.vertex_count());
            let mut cells = 0;
            for b in dec.blocks() {
                for v in &b.cells {
                    let idx = spec.index_of(v).unwrap();
                    assert!(!seen.contains(idx), "cell {v} in two blocks");
                    seen.insert(idx);
                    cells += 1;
                }
            }
            assert_eq!(cells, spec.vertex_count(), "blocks must cover {spec}");
        }
    }

    #[test]
    fn scan_order_is_coordinatewise_monotone() {
        let dec = decompose(&king(&[5, 4, 3])).unwrap();
        let corners: Vec<_> = dec.blocks().iter().map(|b| b.corner.coords().to_vec()).collect();
        for (i, a) in corners.iter().enumerate() {
            for b in &corners[i + 1..] {
                assert!(
                    !a.iter().zip(b).all(|(x, y)| x >= y),
                    "later corner {b:?} not after {a:?}"
                );
            }
        }
    }

    #[test]
    fn fixed_point_examples() {
        let spec = king(&[8, 8]);
        let t = fixed_point(&spec).unwrap();
        assert_eq!(t.count_ones(), 16);
        for idx in t.iter_ones() {
            let v = spec.vertex_at(idx);
            assert!(v.coords().iter().all(|c| c % 2 == 1));
        }
        assert!(spec.is_dominating(&t));

        assert_eq!(fixed_point(&king(&[5, 5])).unwrap().count_ones(), 9);
        assert_eq!(fixed_point(&king(&[3, 3, 3])).unwrap().count_ones(), 8);
        assert!(king(&[3, 3, 3]).is_dominating(&fixed_point(&king(&[3, 3, 3])).unwrap()));
    }

    #[test]
    fn partner_on_t_is_fixed() {
        let spec = king(&[8, 8]);
        let t = fixed_point(&spec).unwrap();
        assert_eq!(partner(&spec, &t).unwrap(), MatchOutcome::FixedPoint);
    }

    #[test]
    fn partner_single_block() {
        let spec = king(&[2, 2]);
        let s = VertexSet::from_vertices(&spec, &[Vertex::xy(1, 2)]).unwrap();
        match partner(&spec, &s).unwrap() {
            MatchOutcome::Partner { flipped, partner } => {
                assert_eq!(flipped, Vertex::xy(1, 1));
                let expected =
                    VertexSet::from_vertices(&spec, &[Vertex::xy(1, 1), Vertex::xy(1, 2)])
                        .unwrap();
                assert_eq!(partner, expected);
                assert!(spec.is_dominating(&partner));
            }
            other => panic!("expected a partner, got {other:?}"),
        }
    }

    #[test]
    fn partner_full_board_position() {
        // 8x8 position whose first active block is the one cornered at (3,3)
        let spec = king(&[8, 8]);
        let rows: [(usize, &[usize]); 8] = [
            (1, &[1, 3, 5, 7]),
            (2, &[]),
            (3, &[1, 3, 5, 8]),
            (4, &[3, 7]),
            (5, &[1, 2, 5, 7]),
            (6, &[1, 6]),
            (7, &[2, 5, 7]),
            (8, &[4, 7]),
        ];
        let mut verts = Vec::new();
        for (y, xs) in rows {
            for &x in xs {
                verts.push(Vertex::xy(x, y));
            }
        }
        let s = VertexSet::from_vertices(&spec, &verts).unwrap();
        assert!(spec.is_dominating(&s));
        match partner(&spec, &s).unwrap() {
            MatchOutcome::Partner { flipped, partner } => {
                assert_eq!(flipped, Vertex::xy(3, 3));
                // (3,3) was occupied, so the flip removes it
                assert_eq!(partner.count_ones(), s.count_ones() - 1);
                assert!(spec.is_dominating(&partner));
                match self::partner(&spec, &partner).unwrap() {
                    MatchOutcome::Partner { partner: back, .. } => assert_eq!(back, s),
                    other => panic!("expected involution, got {other:?}"),
                }
            }
            other => panic!("expected a partner, got {other:?}"),
        }
    }

    #[test]
    fn partner_rejects_non_dominating() {
        let spec = king(&[3, 3]);
        let s = VertexSet::from_vertices(&spec, &[Vertex::xy(1, 1)]).unwrap();
        assert_eq!(partner(&spec, &s).unwrap_err(), MatchingError::NotDominating);
    }

    #[test]
    fn refuses_unsupported_boards() {
        let wazir = BoardSpec::free(Family::Wazir, vec![4, 4]).unwrap();
        assert_eq!(decompose(&wazir).unwrap_err(), MatchingError::UnsupportedFamily);
        let torus = BoardSpec::rect(Family::King, 4, 4, crate::board::BoundaryMode::Torus).unwrap();
        assert_eq!(decompose(&torus).unwrap_err(), MatchingError::UnsupportedBoundary);
    }

    #[test]
    fn verify_small_boards() {
        for (dims, expected) in [
            (vec![3usize, 3], 1i64),
            (vec![4, 4], 1),
            (vec![2, 3, 2], 1),
            (vec![1, 5], -1),
        ] {
            let spec = king(&dims);
            let report = verify_theorem(&spec, false).unwrap();
            assert!(report.pass(), "failed on {spec}: {report:?}");
            assert_eq!(report.signed_sum, expected, "sign on {spec}");
            assert_eq!(report.fixed_points, 1);
            assert_eq!(
                report.dominating_sets,
                2 * report.pairs + 1,
                "pairing must cover everything but T"
            );
        }
    }

    #[test]
    fn signed_sum_matches_other_engines() {
        let spec = king(&[3, 4]);
        let report = verify_theorem(&spec, false).unwrap();
        let via_oracle = oracle::eval_signed_count(&spec, false).unwrap();
        let via_transfer = crate::transfer::transfer_eval(&spec, -1).unwrap();
        assert_eq!(num_bigint::BigInt::from(report.signed_sum), via_oracle);
        assert_eq!(num_bigint::BigInt::from(report.signed_sum), via_transfer);
    }

    #[test]
    fn sampled_check_small() {
        let report = sampled_check(&king(&[9, 7]), 500, 42).unwrap();
        assert!(report.pass(), "{report:?}");
        // only the explicit T trial reports a fixed point
        assert_eq!(report.fixed_points, 1);
        assert_eq!(report.pairs, report.trials - 1);

        // reproducible under the same seed
        let again = sampled_check(&king(&[9, 7]), 500, 42).unwrap();
        assert_eq!(report.pairs, again.pairs);
        assert_eq!(report.rejected_samples, again.rejected_samples);
    }
}
