//! Chessboard graph families: king and wazir boards of arbitrary dimension,
//! with free or cyclic boundary conditions per axis.
//!
//! A board spec is the single source of truth for the vertex set and the
//! adjacency. Vertices are 1-based coordinate tuples; the canonical vertex
//! index varies axis 1 fastest, so bitsets and rendered output are
//! reproducible bit for bit.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::oracle;

/// Piece family that defines adjacency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Chebyshev distance 1 (strong product of paths/cycles).
    King,
    /// Single orthogonal step (grid graph).
    Wazir,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::King => write!(f, "king"),
            Family::Wazir => write!(f, "wazir"),
        }
    }
}

/// Per-axis boundary condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Free,
    Cyclic,
}

/// The four boundary layouts expressible in board spec strings (d = 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryMode {
    Free,
    CylX,
    CylY,
    Torus,
}

impl BoundaryMode {
    pub fn axes(self) -> [Boundary; 2] {
        match self {
            BoundaryMode::Free => [Boundary::Free, Boundary::Free],
            BoundaryMode::CylX => [Boundary::Cyclic, Boundary::Free],
            BoundaryMode::CylY => [Boundary::Free, Boundary::Cyclic],
            BoundaryMode::Torus => [Boundary::Cyclic, Boundary::Cyclic],
        }
    }
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryMode::Free => write!(f, "free"),
            BoundaryMode::CylX => write!(f, "cyl-x"),
            BoundaryMode::CylY => write!(f, "cyl-y"),
            BoundaryMode::Torus => write!(f, "torus"),
        }
    }
}

impl FromStr for BoundaryMode {
    type Err = SpecParseError;

    fn from_str(s: &str) -> Result<Self, SpecParseError> {
        match s {
            "free" => Ok(BoundaryMode::Free),
            "cyl-x" => Ok(BoundaryMode::CylX),
            "cyl-y" => Ok(BoundaryMode::CylY),
            "torus" => Ok(BoundaryMode::Torus),
            _ => Err(SpecParseError::BadBoundary(s.to_string())),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoardError {
    #[error("dims and boundary must have equal length >= 1 (got {dims} and {boundary})")]
    ShapeMismatch { dims: usize, boundary: usize },
    #[error("wazir boards are only defined for d = 2 (got d = {0})")]
    WazirDimension(usize),
    #[error("cyclic boundary on axis {axis} requires extent >= 3 (got {len})")]
    CyclicTooSmall { axis: usize, len: usize },
    #[error("vertex {0:?} is out of bounds")]
    VertexOutOfBounds(Vec<usize>),
    #[error("board has {verts} vertices, above the limit of {limit} (set KINGDOM_MAX_ORACLE_BITS to raise it)")]
    TooLarge { verts: usize, limit: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecParseError {
    #[error("board spec must look like `king:8x8[:boundary]` (got {0:?})")]
    BadShape(String),
    #[error("unknown family {0:?} (expected `king` or `wazir`)")]
    BadFamily(String),
    #[error("bad dimension {0:?}")]
    BadDimension(String),
    #[error("unknown boundary {0:?} (expected free, cyl-x, cyl-y, or torus)")]
    BadBoundary(String),
    #[error("boundary {0} only applies to 2-dimensional boards")]
    BoundaryDimension(BoundaryMode),
    #[error(transparent)]
    Board(#[from] BoardError),
}

/// A validated board: family, side lengths and per-axis boundary.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoardSpec {
    family: Family,
    dims: Vec<usize>,
    boundary: Vec<Boundary>,
}

impl BoardSpec {
    pub fn new(
        family: Family,
        dims: Vec<usize>,
        boundary: Vec<Boundary>,
    ) -> Result<Self, BoardError> {
        if dims.is_empty() || dims.len() != boundary.len() {
            return Err(BoardError::ShapeMismatch {
                dims: dims.len(),
                boundary: boundary.len(),
            });
        }
        if family == Family::Wazir && dims.len() != 2 {
            return Err(BoardError::WazirDimension(dims.len()));
        }
        for (axis, (&len, &b)) in dims.iter().zip(&boundary).enumerate() {
            // Wraparound on a 1- or 2-cell axis would create self or parallel
            // edges; reject instead of deduplicating silently.
            if b == Boundary::Cyclic && len <= 2 {
                return Err(BoardError::CyclicTooSmall { axis: axis + 1, len });
            }
        }
        Ok(BoardSpec { family, dims, boundary })
    }

    /// Free-boundary board on all axes.
    pub fn free(family: Family, dims: Vec<usize>) -> Result<Self, BoardError> {
        let boundary = vec![Boundary::Free; dims.len()];
        BoardSpec::new(family, dims, boundary)
    }

    /// 2-d board with one of the four named boundary layouts.
    pub fn rect(family: Family, m: usize, n: usize, mode: BoundaryMode) -> Result<Self, BoardError> {
        BoardSpec::new(family, vec![m, n], mode.axes().to_vec())
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundary(&self) -> &[Boundary] {
        &self.boundary
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn is_all_free(&self) -> bool {
        self.boundary.iter().all(|&b| b == Boundary::Free)
    }

    /// The named layout of a 2-d board, if it is 2-d.
    pub fn boundary_mode(&self) -> Option<BoundaryMode> {
        if self.ndim() != 2 {
            return None;
        }
        Some(match (self.boundary[0], self.boundary[1]) {
            (Boundary::Free, Boundary::Free) => BoundaryMode::Free,
            (Boundary::Cyclic, Boundary::Free) => BoundaryMode::CylX,
            (Boundary::Free, Boundary::Cyclic) => BoundaryMode::CylY,
            (Boundary::Cyclic, Boundary::Cyclic) => BoundaryMode::Torus,
        })
    }

    /// Number of vertices: the product of the side lengths.
    pub fn vertex_count(&self) -> usize {
        self.dims.iter().product()
    }

    /// Canonical index of a vertex: axis 1 varies fastest.
    pub fn index_of(&self, v: &Vertex) -> Result<usize, BoardError> {
        self.check_vertex(v)?;
        let mut idx = 0;
        let mut stride = 1;
        for (&c, &n) in v.coords().iter().zip(&self.dims) {
            idx += (c - 1) * stride;
            stride *= n;
        }
        Ok(idx)
    }

    /// Inverse of [`index_of`](Self::index_of).
    pub fn vertex_at(&self, mut idx: usize) -> Vertex {
        debug_assert!(idx < self.vertex_count());
        let mut coords = Vec::with_capacity(self.dims.len());
        for &n in &self.dims {
            coords.push(idx % n + 1);
            idx /= n;
        }
        Vertex::new(coords)
    }

    fn check_vertex(&self, v: &Vertex) -> Result<(), BoardError> {
        let ok = v.coords().len() == self.dims.len()
            && v.coords().iter().zip(&self.dims).all(|(&c, &n)| c >= 1 && c <= n);
        if ok {
            Ok(())
        } else {
            Err(BoardError::VertexOutOfBounds(v.coords().to_vec()))
        }
    }

    /// All neighbors of `v`. King: Chebyshev distance exactly 1, displacement
    /// taken modulo the extent on cyclic axes. Wazir: one orthogonal step.
    pub fn neighbors(&self, v: &Vertex) -> Result<Vec<Vertex>, BoardError> {
        self.check_vertex(v)?;
        let mut out = Vec::new();
        match self.family {
            Family::King => {
                let d = self.dims.len();
                let mut deltas = vec![-1i64; d];
                loop {
                    if deltas.iter().any(|&dl| dl != 0) {
                        if let Some(u) = self.offset(v, &deltas) {
                            out.push(u);
                        }
                    }
                    // odometer over {-1,0,1}^d
                    let mut i = 0;
                    loop {
                        if i == d {
                            return Ok(out);
                        }
                        deltas[i] += 1;
                        if deltas[i] <= 1 {
                            break;
                        }
                        deltas[i] = -1;
                        i += 1;
                    }
                }
            }
            Family::Wazir => {
                let d = self.dims.len();
                let mut deltas = vec![0i64; d];
                for axis in 0..d {
                    for step in [-1i64, 1] {
                        deltas[axis] = step;
                        if let Some(u) = self.offset(v, &deltas) {
                            out.push(u);
                        }
                        deltas[axis] = 0;
                    }
                }
                Ok(out)
            }
        }
    }

    /// Apply a displacement, wrapping on cyclic axes, rejecting out-of-range
    /// steps on free axes. Cyclic extents are >= 3, so distinct nonzero
    /// displacements always land on distinct vertices.
    fn offset(&self, v: &Vertex, deltas: &[i64]) -> Option<Vertex> {
        let mut coords = Vec::with_capacity(deltas.len());
        for ((&c, &dl), (&n, &b)) in v
            .coords()
            .iter()
            .zip(deltas)
            .zip(self.dims.iter().zip(&self.boundary))
        {
            let raw = c as i64 - 1 + dl;
            let wrapped = match b {
                Boundary::Cyclic => raw.rem_euclid(n as i64),
                Boundary::Free => {
                    if raw < 0 || raw >= n as i64 {
                        return None;
                    }
                    raw
                }
            };
            coords.push(wrapped as usize + 1);
        }
        Some(Vertex::new(coords))
    }

    /// Closed neighborhoods N[v] = {v} u N(v) as bitsets, indexed by vertex.
    /// Guarded by the oracle vertex limit since this is the oracle's
    /// domination-test table.
    pub fn closed_neighborhood_masks(&self) -> Result<Vec<VertexSet>, BoardError> {
        let verts = self.vertex_count();
        let limit = oracle::oracle_bit_limit();
        if verts > limit {
            return Err(BoardError::TooLarge { verts, limit });
        }
        Ok(self.closed_masks_unguarded())
    }

    pub(crate) fn closed_masks_unguarded(&self) -> Vec<VertexSet> {
        let verts = self.vertex_count();
        let mut out = Vec::with_capacity(verts);
        for idx in 0..verts {
            let v = self.vertex_at(idx);
            let mut mask = VertexSet::new(verts);
            mask.insert(idx);
            for u in self.neighbors(&v).expect("vertex_at is in bounds") {
                mask.insert(self.index_of(&u).expect("neighbor is in bounds"));
            }
            out.push(mask);
        }
        out
    }

    /// True iff the closed neighborhoods of `s` cover the whole board.
    /// The empty board is dominated by the empty set.
    pub fn is_dominating(&self, s: &VertexSet) -> bool {
        let verts = self.vertex_count();
        assert_eq!(s.len(), verts, "vertex set is for a different board");
        let mut covered = VertexSet::new(verts);
        for idx in s.iter_ones() {
            covered.insert(idx);
            let v = self.vertex_at(idx);
            for u in self.neighbors(&v).expect("vertex_at is in bounds") {
                covered.insert(self.index_of(&u).expect("neighbor is in bounds"));
            }
        }
        covered.is_full()
    }
}

impl fmt::Display for BoardSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.family)?;
        for (i, n) in self.dims.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{n}")?;
        }
        if let Some(mode) = self.boundary_mode() {
            if mode != BoundaryMode::Free {
                write!(f, ":{mode}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for BoardSpec {
    type Err = SpecParseError;

    /// Parses `<family>:<n1>x<n2>[x<n3>...][:<boundary>]`, e.g. `king:8x8`,
    /// `king:6x6:torus`, `king:3x3x3`, `wazir:4x4`.
    fn from_str(s: &str) -> Result<Self, SpecParseError> {
        let mut parts = s.split(':');
        let family = match parts.next() {
            Some("king") => Family::King,
            Some("wazir") => Family::Wazir,
            Some(other) => return Err(SpecParseError::BadFamily(other.to_string())),
            None => return Err(SpecParseError::BadShape(s.to_string())),
        };
        let dims_part = parts.next().ok_or_else(|| SpecParseError::BadShape(s.to_string()))?;
        let mut dims = Vec::new();
        for tok in dims_part.split('x') {
            let n: usize = tok
                .parse()
                .map_err(|_| SpecParseError::BadDimension(tok.to_string()))?;
            dims.push(n);
        }
        let mode = match parts.next() {
            Some(tok) => tok.parse::<BoundaryMode>()?,
            None => BoundaryMode::Free,
        };
        if parts.next().is_some() {
            return Err(SpecParseError::BadShape(s.to_string()));
        }
        let boundary = if mode == BoundaryMode::Free {
            vec![Boundary::Free; dims.len()]
        } else {
            if dims.len() != 2 {
                return Err(SpecParseError::BoundaryDimension(mode));
            }
            mode.axes().to_vec()
        };
        Ok(BoardSpec::new(family, dims, boundary)?)
    }
}

/// A board cell as a 1-based coordinate tuple. Axis 1 (x) increases to the
/// right, axis 2 (y) downward, so the top-left cell of a 2-d board is (1,1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    coords: Vec<usize>,
}

impl Vertex {
    pub fn new(coords: Vec<usize>) -> Self {
        Vertex { coords }
    }

    pub fn xy(x: usize, y: usize) -> Self {
        Vertex { coords: vec![x, y] }
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Fixed-width bitset over the canonical vertex order of one board.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    nbits: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new(nbits: usize) -> Self {
        VertexSet {
            nbits,
            words: vec![0; nbits.div_ceil(64)],
        }
    }

    /// Build from a `u64` bit pattern (boards of at most 64 vertices).
    pub fn from_bits_u64(nbits: usize, bits: u64) -> Self {
        assert!(nbits <= 64);
        assert!(nbits == 64 || bits < (1u64 << nbits), "bits out of range");
        let mut s = VertexSet::new(nbits);
        if nbits > 0 {
            s.words[0] = bits;
        }
        s
    }

    /// Build from vertices of a board.
    pub fn from_vertices(spec: &BoardSpec, verts: &[Vertex]) -> Result<Self, BoardError> {
        let mut s = VertexSet::new(spec.vertex_count());
        for v in verts {
            s.insert(spec.index_of(v)?);
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.nbits
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, idx: usize) -> bool {
        assert!(idx < self.nbits);
        self.words[idx / 64] >> (idx % 64) & 1 == 1
    }

    pub fn insert(&mut self, idx: usize) {
        assert!(idx < self.nbits);
        self.words[idx / 64] |= 1 << (idx % 64);
    }

    pub fn remove(&mut self, idx: usize) {
        assert!(idx < self.nbits);
        self.words[idx / 64] &= !(1 << (idx % 64));
    }

    pub fn toggle(&mut self, idx: usize) {
        assert!(idx < self.nbits);
        self.words[idx / 64] ^= 1 << (idx % 64);
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_full(&self) -> bool {
        self.count_ones() == self.nbits
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + b)
            })
        })
    }

    /// Low word, for boards of at most 64 vertices.
    pub fn bits_u64(&self) -> u64 {
        assert!(self.nbits <= 64);
        self.words.first().copied().unwrap_or(0)
    }
}
