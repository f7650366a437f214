//! LU(3,q) incidence codes and the symplectic generalized quadrangle W(q).
//!
//! The crate builds the incidence matrices `M(P,L)`, `M(P1,L1)` and `H(3,q)`,
//! computes their ranks over GF(2) exactly, checks them against closed-form
//! dimension formulas, and treats them as LDPC parity-check matrices.

pub mod exec;
pub mod field;
pub mod formulas;
pub mod geometry;
pub mod gf2;
pub mod incidence;
pub mod isomorphism;
pub mod ldpc;
pub mod poly;

pub use exec::Exec;
pub use field::{FieldElem, FieldError, FieldSpec};
pub use geometry::{GeometryError, GridPair, Quadrangle, RestrictedSets, SymplecticSpace, Vec4};
pub use gf2::{BitMatrix, BitVec, Subspace};
pub use poly::{Monomial, PolyFn, PolyRing};
pub use ldpc::LdpcCode;
