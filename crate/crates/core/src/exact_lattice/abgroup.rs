use std::fmt;

use num_traits::{One, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use super::matrix::{Int, IntMatrix, IntSlice};
use super::normal_form::invariant_factors;

/// Finitely generated abelian group `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k`
/// with `d_1 | d_2 | ... | d_k` and every `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbGroup {
    free_rank: usize,
    torsion: Vec<Int>,
}

impl AbGroup {
    /// Panics if `torsion` is not a valid invariant factor chain.
    pub fn new(free_rank: usize, torsion: Vec<Int>) -> Self {
        for d in &torsion {
            assert!(*d > Int::one(), "invariant factor {d} must be at least 2");
        }
        for w in torsion.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "{} does not divide {}", w[0], w[1]);
        }
        AbGroup { free_rank, torsion }
    }

    pub fn trivial() -> Self {
        AbGroup::new(0, Vec::new())
    }

    pub fn free(rank: usize) -> Self {
        AbGroup::new(rank, Vec::new())
    }

    /// Group `Z^free_rank ⊕ Z/c_1 ⊕ ... ⊕ Z/c_m` for arbitrary cyclic orders
    /// `c_i`, brought into invariant factor form. Orders 0 count as free
    /// summands, orders 1 vanish.
    pub fn from_cyclic_orders(free_rank: usize, orders: &[Int]) -> Self {
        let diag = invariant_factors(&IntMatrix::diagonal(orders));
        AbGroup::from_smith_diagonal(free_rank + orders.len(), &diag)
    }

    /// Cokernel of a matrix with `rows` rows whose Smith diagonal is `diag`.
    pub fn from_smith_diagonal(rows: usize, diag: &[Int]) -> Self {
        let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
        let torsion = diag.iter().filter(|d| **d > Int::one()).cloned().collect();
        AbGroup::new(rows - nonzero, torsion)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[Int] {
        &self.torsion
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> Int {
        self.torsion.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &AbGroup) -> AbGroup {
        let mut orders = self.torsion.clone();
        orders.extend_from_slice(&other.torsion);
        AbGroup::from_cyclic_orders(self.free_rank + other.free_rank, &orders)
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for AbGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("AbGroup", 3)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        st.serialize_field("torsion", &IntSlice(&self.torsion))?;
        st.serialize_field("structure", &self.to_string())?;
        st.end()
    }
}
