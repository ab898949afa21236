//! Finite-field arithmetic for GF(p^m) and dense linear algebra over it.

mod conway_table;
mod field;
mod mat;

pub use field::{prime_power, ArithOp, FieldElem, FieldSpec, MAX_ORDER};
pub use mat::{Mat, Rref, MAX_SIDE};

pub(crate) use mat::rank_in_place;
