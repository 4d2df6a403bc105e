//! Domination polynomials of chessboard graphs.
//!
//! The crate computes P_G(z) = sum over dominating sets S of z^|S| for king
//! and wazir boards under free, cylindrical and toroidal boundary conditions,
//! and for d-dimensional king boards, through two independent engines:
//!
//! * [`oracle`] - brute force over all 2^|V| subsets, the ground truth;
//! * [`transfer`] - a column-frontier dynamic program that reaches board
//!   sizes the oracle cannot, in polynomial or point-evaluation mode.
//!
//! [`matching`] is an executable form of the parity argument for free king
//! boards: a partner map pairing dominating sets of opposite size parity,
//! whose unique fixed point forces P(-1) = (-1)^(prod ceil(n_i/2)).

pub mod board;
pub mod matching;
pub mod oracle;
pub mod poly;
pub mod transfer;

pub use board::{BoardSpec, Boundary, BoundaryMode, Family, Vertex, VertexSet};
pub use poly::DominationPolynomial;

/// Signed exact integers, used for every evaluation result.
pub use num_bigint::BigInt;
