//! Generalized Cartan matrices: validation, decomposition into indecomposable
//! blocks, and finite / affine / indefinite classification.
//!
//! Simple roots correspond to columns: column `i` holds `a[k][i]` for all `k`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlat::{determinant, IntMatrix};

/// Indices in errors are 1-based, matching how matrices are written down.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GcmError {
    #[error("matrix is empty")]
    Empty,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("diagonal entry at ({i},{i}) is {value}, expected 2")]
    BadDiagonal { i: usize, value: BigInt },
    #[error("off-diagonal entry at ({i},{j}) is positive ({value})")]
    PositiveOffDiagonal { i: usize, j: usize, value: BigInt },
    #[error("entry at ({i},{j}) is zero but its transpose ({j},{i}) is not")]
    AsymmetricZero { i: usize, j: usize },
    #[error("principal submatrix needs a nonempty index set")]
    EmptySubset,
    #[error("index {index} out of range for rank {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("matrix is decomposable")]
    Decomposable,
}

/// A validated generalized Cartan matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GcmRows", into = "GcmRows")]
pub struct Gcm {
    m: IntMatrix,
}

/// Cartan type of an indecomposable block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanClass {
    Finite,
    Affine,
    Indefinite { hyperbolic: bool },
}

impl CartanClass {
    pub fn is_finite_or_affine(self) -> bool {
        matches!(self, CartanClass::Finite | CartanClass::Affine)
    }

    pub fn label(self) -> &'static str {
        match self {
            CartanClass::Finite => "finite",
            CartanClass::Affine => "affine",
            CartanClass::Indefinite { hyperbolic: true } => "hyperbolic",
            CartanClass::Indefinite { hyperbolic: false } => "indefinite",
        }
    }
}

impl fmt::Display for CartanClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Per-block classification of a possibly decomposable matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub blocks: Vec<(Vec<usize>, CartanClass)>,
}

impl Classification {
    pub fn is_indecomposable(&self) -> bool {
        self.blocks.len() == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ColumnParity {
    /// Some off-diagonal entry of the column is odd.
    OddPresent,
    AllEven,
}

/// Checks the three GCM axioms.
pub fn validate(m: &IntMatrix) -> Result<Gcm, GcmError> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(GcmError::Empty);
    }
    if !m.is_square() {
        return Err(GcmError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let two = BigInt::from(2);
    for i in 0..n {
        if m[(i, i)] != two {
            return Err(GcmError::BadDiagonal {
                i: i + 1,
                value: m[(i, i)].clone(),
            });
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && m[(i, j)].is_positive() {
                return Err(GcmError::PositiveOffDiagonal {
                    i: i + 1,
                    j: j + 1,
                    value: m[(i, j)].clone(),
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && m[(i, j)].is_zero() && !m[(j, i)].is_zero() {
                return Err(GcmError::AsymmetricZero { i: i + 1, j: j + 1 });
            }
        }
    }
    Ok(Gcm { m: m.clone() })
}

/// Serialized as plain nested rows.
#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct GcmRows(#[serde(with = "crate::serde_int::rows")] Vec<Vec<BigInt>>);

impl TryFrom<GcmRows> for Gcm {
    type Error = GcmError;

    fn try_from(r: GcmRows) -> Result<Self, GcmError> {
        Gcm::from_rows(&r.0)
    }
}

impl From<Gcm> for GcmRows {
    fn from(g: Gcm) -> GcmRows {
        GcmRows(g.to_rows())
    }
}

impl TryFrom<IntMatrix> for Gcm {
    type Error = GcmError;

    fn try_from(m: IntMatrix) -> Result<Self, GcmError> {
        validate(&m)
    }
}

impl From<Gcm> for IntMatrix {
    fn from(g: Gcm) -> IntMatrix {
        g.m
    }
}

impl Gcm {
    /// Validates a matrix given as rows of machine integers.
    pub fn from_rows<T, R>(rows: &[R]) -> Result<Gcm, GcmError>
    where
        T: Clone + Into<BigInt>,
        R: AsRef<[T]>,
    {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.as_ref().len() != n) {
            return Err(GcmError::NotSquare {
                rows: n,
                cols: bad.as_ref().len(),
            });
        }
        validate(&IntMatrix::from_rows(rows))
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.m[(i, j)]
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.m.to_rows()
    }

    /// Off-diagonal neighbours of `i` in the support graph.
    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&j| j != i && !self.m[(i, j)].is_zero())
    }

    /// Connected components of the off-diagonal support graph, each sorted,
    /// ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(x) = stack.pop() {
                comp.push(x);
                for y in self.neighbours(x) {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_indecomposable(&self) -> bool {
        self.components().len() == 1
    }

    /// Restriction to `subset x subset`, in the order given.
    pub fn principal_submatrix(&self, subset: &[usize]) -> Result<Gcm, GcmError> {
        if subset.is_empty() {
            return Err(GcmError::EmptySubset);
        }
        if let Some(&index) = subset.iter().find(|&&i| i >= self.n()) {
            return Err(GcmError::IndexOutOfRange { index, n: self.n() });
        }
        // principal submatrices of a GCM satisfy the axioms again
        Ok(Gcm {
            m: self.m.submatrix(subset, subset),
        })
    }

    /// Deletes one row and the matching column.
    pub fn delete(&self, t: usize) -> Result<Gcm, GcmError> {
        let keep: Vec<usize> = (0..self.n()).filter(|&i| i != t).collect();
        self.principal_submatrix(&keep)
    }

    /// Simultaneous permutation `b[i][j] = a[perm[i]][perm[j]]`.
    pub fn permute(&self, perm: &[usize]) -> Gcm {
        assert_eq!(perm.len(), self.n(), "permutation length");
        Gcm {
            m: self.m.submatrix(perm, perm),
        }
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.m).expect("square by construction")
    }

    /// All off-diagonal entries are 0 or -1.
    pub fn is_simply_laced(&self) -> bool {
        let minus_one = BigInt::from(-1);
        (0..self.n()).all(|i| {
            (0..self.n()).all(|j| i == j || self.m[(i, j)].is_zero() || self.m[(i, j)] == minus_one)
        })
    }

    pub fn column_parity(&self) -> Vec<ColumnParity> {
        (0..self.n())
            .map(|i| {
                let odd = (0..self.n()).any(|k| k != i && self.m[(k, i)].is_odd());
                if odd {
                    ColumnParity::OddPresent
                } else {
                    ColumnParity::AllEven
                }
            })
            .collect()
    }

    /// Finite iff every principal minor is positive; affine iff the
    /// determinant vanishes and every proper principal minor is positive.
    pub fn classify_indecomposable(&self) -> Result<CartanClass, GcmError> {
        if !self.is_indecomposable() {
            return Err(GcmError::Decomposable);
        }
        Ok(self.classify_block())
    }

    fn classify_block(&self) -> CartanClass {
        let n = self.n();
        let proper_positive = proper_subsets(n).all(|s| {
            determinant(&self.m.submatrix(&s, &s))
                .expect("square")
                .is_positive()
        });
        let det = self.determinant();
        if proper_positive && det.is_positive() {
            CartanClass::Finite
        } else if proper_positive && det.is_zero() {
            CartanClass::Affine
        } else {
            CartanClass::Indefinite {
                hyperbolic: self.maximal_minors_finite_or_affine(),
            }
        }
    }

    fn maximal_minors_finite_or_affine(&self) -> bool {
        let n = self.n();
        if n < 2 {
            return false;
        }
        (0..n).all(|drop| {
            let sub = self.delete(drop).expect("n >= 2");
            sub.components().into_iter().all(|c| {
                sub.principal_submatrix(&c)
                    .expect("nonempty block")
                    .classify_block()
                    .is_finite_or_affine()
            })
        })
    }

    /// Blockwise classification of any valid GCM.
    pub fn classify(&self) -> Classification {
        let blocks = self
            .components()
            .into_iter()
            .map(|c| {
                let class = self
                    .principal_submatrix(&c)
                    .expect("nonempty block")
                    .classify_block();
                (c, class)
            })
            .collect();
        Classification { blocks }
    }

    /// Indecomposable, indefinite, and every maximal proper principal
    /// submatrix has only finite or affine blocks.
    pub fn is_hyperbolic(&self) -> bool {
        self.is_indecomposable()
            && matches!(
                self.classify_block(),
                CartanClass::Indefinite { hyperbolic: true }
            )
    }

    /// Lexicographically least row-major form over all simultaneous
    /// permutations, with a permutation achieving it.
    pub fn canonical_form(&self) -> (Gcm, Vec<usize>) {
        let n = self.n();
        let mut best: Option<(Vec<BigInt>, Vec<usize>)> = None;
        for perm in permutations(n) {
            let key: Vec<BigInt> = perm
                .iter()
                .flat_map(|&i| perm.iter().map(move |&j| (i, j)))
                .map(|(i, j)| self.m[(i, j)].clone())
                .collect();
            if best.as_ref().is_none_or(|(b, _)| key < *b) {
                best = Some((key, perm));
            }
        }
        let (_, perm) = best.expect("n >= 1");
        (self.permute(&perm), perm)
    }

    pub fn canonical(&self) -> Gcm {
        self.canonical_form().0
    }

    /// Equal up to simultaneous permutation of rows and columns.
    pub fn is_equivalent(&self, other: &Gcm) -> bool {
        self.n() == other.n() && self.canonical() == other.canonical()
    }
}

impl fmt::Debug for Gcm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gcm{:?}", self.m)
    }
}

impl fmt::Display for Gcm {
    /// Writes the matrix in the `2 -1; -1 2` text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n() {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = self.m.row(i).iter().map(ToString::to_string).collect();
            f.write_str(&row.join(" "))?;
        }
        Ok(())
    }
}

/// Nonempty proper subsets of `0..n` as sorted index lists.
fn proper_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let full: u64 = (1u64 << n) - 1;
    (1..full).map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}
