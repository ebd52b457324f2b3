use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::IntMatrix;

/// Smith normal form `u * m * v = diag(d)` together with the transforms.
///
/// `v_inv` is carried alongside `v` so callers that need to map back from
/// canonical generators do not have to invert a unimodular matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    #[serde(with = "crate::serde_int::vec")]
    pub d: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfResult {
    /// The diagonal matrix with the shape of the input.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        IntMatrix::diagonal(self.u.rows(), self.v.rows(), &self.d)
    }
}

/// Position of the nonzero entry of least magnitude in the active block
/// `[k.., k..]`; ties go to the first entry in row-major order.
fn pivot(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some(b) if a[b].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Smith normal form with unimodular transforms.
///
/// Pivoting is deterministic (smallest magnitude, lowest index), so the
/// transforms are reproducible across runs. Diagonal entries are made
/// nonnegative by negating rows of `u`.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    let steps = rows.min(cols);
    for k in 0..steps {
        while let Some((pi, pj)) = pivot(&a, k) {
            a.swap_rows(k, pi);
            u.swap_rows(k, pi);
            a.swap_cols(k, pj);
            v.swap_cols(k, pj);
            v_inv.swap_rows(k, pj);

            let p = a[(k, k)].clone();
            let mut dirty = false;
            for i in k + 1..rows {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, k)] / &p);
                a.add_row_multiple(i, k, &q);
                u.add_row_multiple(i, k, &q);
                dirty |= !a[(i, k)].is_zero();
            }
            for j in k + 1..cols {
                if a[(k, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(k, j)] / &p);
                a.add_col_multiple(j, k, &q);
                v.add_col_multiple(j, k, &q);
                // inverse of the column operation acts on rows of v_inv
                v_inv.add_row_multiple(k, j, &-q);
                dirty |= !a[(k, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // Row and column k are clear; enforce divisibility on the rest.
            let offender = (k + 1..rows)
                .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_multiple_of(&p));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::from(1);
                    a.add_row_multiple(k, i, &one);
                    u.add_row_multiple(k, i, &one);
                }
                None => break,
            }
        }
        if k < rows && k < cols && a[(k, k)].is_negative() {
            a.negate_row(k);
            u.negate_row(k);
        }
    }

    let d = (0..steps).map(|k| a[(k, k)].clone()).collect();
    SnfResult { d, u, v, v_inv }
}
