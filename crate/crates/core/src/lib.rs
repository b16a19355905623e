//! Exact-arithmetic toolkit for the line geometry of cyclic cubic
//! fourfolds: scene construction, cone-line and residual-line lemma checks,
//! higher-cycle cocycle ledgers, Hilbert-square incidence, degeneration
//! round-trips, and Lagrangian restriction checks, all over Q(w) or F_q
//! with exhaustive finite-field cross-validation.

pub mod chain;
pub mod fano;
pub mod field;
pub mod hilb2;
pub mod poly;
pub mod enumfq;
pub mod projective;
pub mod scene;

pub use field::{
    parse_scalar, scalar_arith, ArithOp, Eis, Field, FieldError, Fp, Scalar, SpecializationMap,
};
pub use poly::{double_root, BinaryForm, CubicShape, MultiPoly, PolyError};
pub use projective::{
    line_in_hypersurface, line_meet_line, LineMeet, LinearSubspace, ProjLine, ProjPoint,
};

/// Polynomials over the Eisenstein field.
pub type EisPoly = MultiPoly<Eis>;
/// Polynomials over a prime field.
pub type FpPoly = MultiPoly<Fp>;
/// Points of projective space over the Eisenstein field.
pub type EisPoint = ProjPoint<Eis>;
/// Points of projective space over a prime field.
pub type FpPoint = ProjPoint<Fp>;
