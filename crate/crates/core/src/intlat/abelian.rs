use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{smith_normal_form, IntMatrix, LatticeError};

/// Structure of the finitely presented abelian group `Z^n / rowspace(R)`.
///
/// `orders` lists the order of every canonical generator `y_k` (0 for an
/// infinite cyclic factor, 1 for a trivial one). Trivial factors are hidden
/// from [`torsion`](Self::torsion) but kept here so the transforms stay
/// square.
///
/// Row `i` of `to_canonical` is the image of `x_i` in `y` coordinates, so
/// `x_i = sum_k to_canonical[i][k] * y_k`. Row `k` of `from_canonical`
/// expresses `y_k` in terms of the `x_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianStructure {
    #[serde(with = "crate::serde_int::vec")]
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
    #[serde(with = "crate::serde_int::vec")]
    pub orders: Vec<BigInt>,
    pub to_canonical: IntMatrix,
    pub from_canonical: IntMatrix,
}

impl AbelianStructure {
    pub fn generators(&self) -> usize {
        self.orders.len()
    }

    /// Canonical coordinates of an exponent vector, reduced modulo the
    /// orders (entries in `0..r` for finite factors).
    pub fn canonical_coords(&self, exponents: &[BigInt]) -> Vec<BigInt> {
        let y = self.to_canonical.left_mul_vec(exponents);
        y.into_iter()
            .zip(&self.orders)
            .map(|(c, r)| if r.is_zero() { c } else { c.mod_floor(r) })
            .collect()
    }

    /// True iff the exponent vector lies in the relation lattice, i.e. the
    /// corresponding element is the identity of the group.
    pub fn is_relation(&self, exponents: &[BigInt]) -> bool {
        self.canonical_coords(exponents).iter().all(Zero::is_zero)
    }

    /// True iff both vectors name the same group element.
    pub fn equivalent(&self, a: &[BigInt], b: &[BigInt]) -> bool {
        let diff: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.is_relation(&diff)
    }
}

/// Cokernel of the relation matrix: each row is the exponent vector of a
/// relator on `n_generators` commuting generators.
pub fn invariant_factors(
    relations: &IntMatrix,
    n_generators: usize,
) -> Result<AbelianStructure, LatticeError> {
    if relations.cols() != n_generators && !(relations.rows() == 0 && relations.cols() == 0) {
        return Err(LatticeError::ColumnMismatch {
            expected: n_generators,
            found: relations.cols(),
        });
    }
    let relations = if relations.cols() == n_generators {
        relations.clone()
    } else {
        IntMatrix::empty(n_generators)
    };
    let snf = smith_normal_form(&relations);
    let mut orders = snf.d.clone();
    orders.resize(n_generators, BigInt::zero());

    let torsion = orders
        .iter()
        .filter(|r| !r.is_zero() && !r.is_one())
        .cloned()
        .collect();
    let free_rank = orders.iter().filter(|r| r.is_zero()).count();
    Ok(AbelianStructure {
        torsion,
        free_rank,
        orders,
        to_canonical: snf.v,
        from_canonical: snf.v_inv,
    })
}
