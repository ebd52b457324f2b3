//! Recognition of the finite and affine diagrams whose `K2` is not `K2(F)`.
//!
//! Only shapes are inspected; callers are expected to have established that
//! the matrix is of finite or affine type already.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::gcm::Gcm;

/// Families that produce cocycle factors. Everything else of finite or
/// affine type is `Other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `C_n`, including `C_1 = A_1` and `C_2 = B_2`.
    C(usize),
    /// Untwisted affine `C_n^(1)`, including `A_1^(1)` for `n = 1`.
    AffineC(usize),
    /// Twisted affine `A_2n^(2)`, including `A_2^(2)` for `n = 1`.
    TwistedA2n(usize),
    /// Twisted affine `A_(2n-1)^(2)`, including `D_3^(2)` for `n = 2`.
    TwistedA2nMinus1(usize),
    Other,
}

/// Shape of a terminal edge `p - e`, read with the column convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    Simple,
    /// `a[p][e] = -2`, `a[e][p] = -1`: column `e` is all even.
    C,
    /// `a[e][p] = -2`, `a[p][e] = -1`.
    B,
    Other,
}

fn end_kind(g: &Gcm, p: usize, e: usize) -> End {
    let x = int(g.entry(p, e));
    let y = int(g.entry(e, p));
    match (x, y) {
        (Some(-1), Some(-1)) => End::Simple,
        (Some(-2), Some(-1)) => End::C,
        (Some(-1), Some(-2)) => End::B,
        _ => End::Other,
    }
}

fn int(x: &BigInt) -> Option<i64> {
    x.try_into().ok()
}

fn simple(g: &Gcm, i: usize, j: usize) -> bool {
    end_kind(g, i, j) == End::Simple
}

/// Walks from `from` away from `prev` until the path ends, returning the
/// visited vertices. Stops early at a vertex of degree other than 2.
fn walk(prev: usize, from: usize, adj: &[Vec<usize>]) -> Vec<usize> {
    let mut out = vec![from];
    let (mut prev, mut cur) = (prev, from);
    while adj[cur].len() == 2 {
        let next = if adj[cur][0] == prev {
            adj[cur][1]
        } else {
            adj[cur][0]
        };
        out.push(next);
        prev = cur;
        cur = next;
    }
    out
}

pub fn recognize(g: &Gcm) -> Family {
    let n = g.n();
    if n == 1 {
        return Family::C(1);
    }
    if !g.is_indecomposable() {
        return Family::Other;
    }
    if n == 2 {
        let mut pair = [int(g.entry(0, 1)), int(g.entry(1, 0))];
        pair.sort();
        return match pair {
            [Some(-2), Some(-1)] => Family::C(2),
            [Some(-2), Some(-2)] => Family::AffineC(1),
            [Some(-4), Some(-1)] => Family::TwistedA2n(1),
            _ => Family::Other,
        };
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|i| g.neighbours(i).collect()).collect();
    let edges: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    if edges != n - 1 {
        return Family::Other;
    }
    let branch: Vec<usize> = (0..n).filter(|&i| adj[i].len() >= 3).collect();
    match branch.as_slice() {
        [] => path_family(g, &adj),
        [c] if adj[*c].len() == 3 => fork_family(g, *c, &adj),
        _ => Family::Other,
    }
}

fn path_family(g: &Gcm, adj: &[Vec<usize>]) -> Family {
    let n = g.n();
    let start = (0..n).find(|&i| adj[i].len() == 1).expect("a path has ends");
    let order = {
        let mut v = vec![start];
        v.extend(walk(start, adj[start][0], adj));
        v
    };
    debug_assert_eq!(order.len(), n);
    let inner_simple = (1..n - 2).all(|k| simple(g, order[k], order[k + 1]));
    if !inner_simple {
        return Family::Other;
    }
    let first = end_kind(g, order[1], order[0]);
    let last = end_kind(g, order[n - 2], order[n - 1]);
    use End::*;
    match (first, last) {
        (C, Simple) | (Simple, C) => Family::C(n),
        (C, C) => Family::AffineC(n - 1),
        (C, B) | (B, C) => Family::TwistedA2n(n - 1),
        // the middle column of ∘-∘-∘ with two B ends is all even
        (B, B) if n == 3 => Family::TwistedA2nMinus1(2),
        _ => Family::Other,
    }
}

fn fork_family(g: &Gcm, c: usize, adj: &[Vec<usize>]) -> Family {
    let n = g.n();
    let arms: Vec<Vec<usize>> = adj[c].iter().map(|&x| walk(c, x, adj)).collect();
    let leaves = arms
        .iter()
        .filter(|a| a.len() == 1 && simple(g, c, a[0]))
        .count();
    let tails: Vec<&Vec<usize>> = arms
        .iter()
        .filter(|a| a.len() > 1 || !simple(g, c, a[0]))
        .collect();
    if leaves != 2 || tails.len() != 1 {
        return Family::Other;
    }
    let mut tail = vec![c];
    tail.extend(tails[0].iter().copied());
    let m = tail.len();
    let inner_simple = (0..m - 2).all(|k| simple(g, tail[k], tail[k + 1]));
    if inner_simple && end_kind(g, tail[m - 2], tail[m - 1]) == End::C {
        Family::TwistedA2nMinus1(n - 1)
    } else {
        Family::Other
    }
}

/// True when the recognized family contributes a cocycle factor.
pub fn has_cocycle(f: Family) -> bool {
    !matches!(f, Family::Other)
}
