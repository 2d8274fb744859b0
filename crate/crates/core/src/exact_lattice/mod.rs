//! Exact integer linear algebra: Hermite and Smith normal forms, integer
//! kernels, and sublattices of `Z^n` with membership, intersection and
//! quotient structure. Every Picard and class group in the crate is
//! computed through this module.

mod abgroup;
mod lattice;
mod matrix;
mod normal_form;

pub use abgroup::AbGroup;
pub use lattice::{cokernel, kernel, solve_integer, Lattice};
pub use matrix::{int_vec, Int, IntMatrix, IntSlice, IntValue};
pub use normal_form::{
    column_echelon, column_echelon_with_transform, hnf, invariant_factors, smith_with_row_transform, snf,
    Echelon, Smith,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("ambient dimensions differ ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },
    #[error("generator {generator} of the smaller lattice is not contained in the larger one")]
    NotSublattice { generator: usize },
}

/// True iff `v` is an integer combination of the lattice generators;
/// the witness is expressed in the lattice's canonical basis.
pub fn lattice_member(l: &Lattice, v: &[Int]) -> Option<Vec<Int>> {
    l.coordinates(v)
}

pub fn lattice_intersect(a: &Lattice, b: &Lattice) -> Result<Lattice, LatticeError> {
    a.intersect(b)
}

pub fn quotient(big: &Lattice, small: &Lattice) -> Result<AbGroup, LatticeError> {
    big.quotient(small)
}
