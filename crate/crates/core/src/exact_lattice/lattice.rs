use num_integer::Integer;
use num_traits::Zero;

use super::abgroup::AbGroup;
use super::matrix::{Int, IntMatrix};
use super::normal_form::{column_echelon, column_echelon_with_transform, invariant_factors};
use super::LatticeError;

/// Sublattice of `Z^n`, stored by its canonical column Hermite basis.
///
/// The basis has full column rank, so `basis.cols()` is the rank and two
/// lattices are equal iff their bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient_dim: usize,
    basis: IntMatrix,
    pivot_rows: Vec<usize>,
}

impl Lattice {
    /// Lattice spanned by the columns of `generators`.
    pub fn from_generators(generators: &IntMatrix) -> Self {
        let e = column_echelon(generators);
        let keep: Vec<usize> = (0..e.rank).collect();
        Lattice {
            ambient_dim: generators.rows(),
            basis: e.h.select_columns(&keep),
            pivot_rows: e.pivot_rows,
        }
    }

    pub fn from_vectors(ambient_dim: usize, vectors: &[Vec<Int>]) -> Self {
        Lattice::from_generators(&IntMatrix::from_columns(vectors, ambient_dim))
    }

    pub fn full(n: usize) -> Self {
        Lattice::from_generators(&IntMatrix::identity(n))
    }

    pub fn zero(n: usize) -> Self {
        Lattice::from_generators(&IntMatrix::zeros(n, 0))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Canonical basis, one generator per column.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Int>> {
        self.basis.columns()
    }

    /// Coordinates `w` with `basis * w == v`, or `None` if `v` is not in the lattice.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(v.len(), self.ambient_dim, "vector length differs from ambient dimension");
        let mut residual = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        let mut checked = 0;
        for (j, &p) in self.pivot_rows.iter().enumerate() {
            if residual[checked..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (c, rem) = residual[p].div_rem(&self.basis[(p, j)]);
            if !rem.is_zero() {
                return None;
            }
            if !c.is_zero() {
                for (r, x) in residual.iter_mut().enumerate().skip(p) {
                    let b = &self.basis[(r, j)];
                    if !b.is_zero() {
                        *x -= &c * b;
                    }
                }
            }
            coords.push(c);
            checked = p + 1;
        }
        if residual[checked..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(coords)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.ambient_dim == self.ambient_dim
            && (0..other.rank()).all(|j| self.contains(&other.basis.column(j)))
    }

    /// Smallest lattice containing both.
    pub fn sum(&self, other: &Lattice) -> Result<Lattice, LatticeError> {
        self.check_dim(other)?;
        Ok(Lattice::from_generators(&self.basis.hstack(&other.basis)))
    }

    pub fn intersect(&self, other: &Lattice) -> Result<Lattice, LatticeError> {
        self.check_dim(other)?;
        // (x, y) with A x = B y, i.e. the kernel of [A | -B]
        let block = self.basis.hstack(&other.basis.neg());
        let k = kernel(&block);
        let top: Vec<usize> = (0..self.rank()).collect();
        let coeffs = k.basis.select_rows(&top);
        Ok(Lattice::from_generators(&(&self.basis * &coeffs)))
    }

    /// Lattice of vectors `x` with `m * x` in `self`.
    pub fn preimage(&self, m: &IntMatrix) -> Result<Lattice, LatticeError> {
        if m.rows() != self.ambient_dim {
            return Err(LatticeError::DimensionMismatch {
                left: m.rows(),
                right: self.ambient_dim,
            });
        }
        let block = m.hstack(&self.basis.neg());
        let k = kernel(&block);
        let top: Vec<usize> = (0..m.cols()).collect();
        Ok(Lattice::from_generators(&k.basis.select_rows(&top)))
    }

    /// Image of the lattice under `m`.
    pub fn image(&self, m: &IntMatrix) -> Lattice {
        Lattice::from_generators(&(m * &self.basis))
    }

    /// Structure of `self / small`.
    pub fn quotient(&self, small: &Lattice) -> Result<AbGroup, LatticeError> {
        self.check_dim(small)?;
        let mut coords = Vec::with_capacity(small.rank());
        for (j, v) in small.basis_vectors().into_iter().enumerate() {
            match self.coordinates(&v) {
                Some(c) => coords.push(c),
                None => return Err(LatticeError::NotSublattice { generator: j }),
            }
        }
        let x = IntMatrix::from_columns(&coords, self.rank());
        Ok(AbGroup::from_smith_diagonal(self.rank(), &invariant_factors(&x)))
    }

    fn check_dim(&self, other: &Lattice) -> Result<(), LatticeError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LatticeError::DimensionMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        Ok(())
    }
}

/// Integer kernel `{x : m x = 0}`; always saturated.
pub fn kernel(m: &IntMatrix) -> Lattice {
    let e = column_echelon_with_transform(m);
    let u = e.u.expect("transform requested");
    let free: Vec<usize> = (e.rank..m.cols()).collect();
    Lattice::from_generators(&u.select_columns(&free))
}

/// Some integer solution of `m x = v`, if one exists.
pub fn solve_integer(m: &IntMatrix, v: &[Int]) -> Option<Vec<Int>> {
    let e = column_echelon_with_transform(m);
    let u = e.u.expect("transform requested");
    let keep: Vec<usize> = (0..e.rank).collect();
    let span = Lattice {
        ambient_dim: m.rows(),
        basis: e.h.select_columns(&keep),
        pivot_rows: e.pivot_rows,
    };
    let c = span.coordinates(v)?;
    Some(u.select_columns(&keep).mul_vec(&c))
}

/// Structure of `Z^rows / colspan(m)`.
pub fn cokernel(m: &IntMatrix) -> AbGroup {
    AbGroup::from_smith_diagonal(m.rows(), &invariant_factors(m))
}
