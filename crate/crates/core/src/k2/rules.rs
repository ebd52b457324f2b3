use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::factor::{canonicalize, K2Factor};
use super::pipeline::K2Result;
use super::trace::{Rule, Trace};
use crate::dynkin::{self, Family};
use crate::gcm::{permutations, CartanClass, ColumnParity, Gcm};
use crate::intlat::{invariant_factors, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("matrix is decomposable")]
    Decomposable,
    #[error("column {0} has no odd off-diagonal entry")]
    ColumnNotOdd(usize),
    #[error("matrix is not of finite or affine type")]
    NotFiniteOrAffine,
    #[error("matrix matches none of the rank-3 class patterns")]
    NoClassMatch,
}

fn resolved(factors: Vec<K2Factor>, trace: Trace) -> K2Result {
    K2Result::Resolved {
        factors: canonicalize(factors),
        trace,
    }
}

/// The indecomposable blocks, in order of their smallest index.
pub fn split_components(g: &Gcm) -> Vec<Gcm> {
    g.components()
        .iter()
        .map(|c| g.principal_submatrix(c).expect("components are nonempty"))
        .collect()
}

/// Closed forms for finite and affine types.
pub fn finite_affine_closed_form(g: &Gcm, cls: CartanClass) -> Result<K2Result, RuleError> {
    if !g.is_indecomposable() {
        return Err(RuleError::Decomposable);
    }
    if !cls.is_finite_or_affine() || g.classify_indecomposable() != Ok(cls) {
        return Err(RuleError::NotFiniteOrAffine);
    }
    let family = dynkin::recognize(g);
    let factors = match family {
        Family::AffineC(_) => vec![K2Factor::cocycle(0), K2Factor::cocycle(1)],
        Family::Other => vec![K2Factor::symbol(0)],
        _ => vec![K2Factor::cocycle(0)],
    };
    let mut trace = Trace::new();
    trace.apply(
        Rule::FiniteAffine,
        g,
        format!("{cls} type, family {}", family_name(family)),
    );
    Ok(resolved(factors, trace))
}

fn family_name(f: Family) -> String {
    match f {
        Family::C(n) => format!("C_{n}"),
        Family::AffineC(n) => format!("C_{n}^(1)"),
        Family::TwistedA2n(n) => format!("A_{}^(2)", 2 * n),
        Family::TwistedA2nMinus1(n) => format!("A_{}^(2)", 2 * n - 1),
        Family::Other => "without an all-even column contribution".to_string(),
    }
}

/// Relators `x_i^a[j][i] = x_j^a[i][j]`, one row per pair `i < j`.
pub fn exponent_relations(g: &Gcm) -> IntMatrix {
    let n = g.n();
    let mut m = IntMatrix::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if g.entry(i, j).is_zero() {
                continue;
            }
            let mut row = vec![BigInt::zero(); n];
            row[i] = g.entry(j, i).clone();
            row[j] = -g.entry(i, j);
            m.push_row(row);
        }
    }
    m
}

/// Every column has an odd entry: one `K2(F)` quotient per invariant
/// factor of the exponent group, and `K2(F)` per free generator.
pub fn reduce_odd_columns(g: &Gcm) -> Result<K2Result, RuleError> {
    if !g.is_indecomposable() {
        return Err(RuleError::Decomposable);
    }
    if let Some(k) = g
        .column_parity()
        .iter()
        .position(|&c| c == ColumnParity::AllEven)
    {
        return Err(RuleError::ColumnNotOdd(k + 1));
    }
    let group = invariant_factors(&exponent_relations(g), g.n()).expect("n columns");
    let mut factors: Vec<K2Factor> = group.torsion.iter().cloned().map(K2Factor::symbol).collect();
    factors.extend((0..group.free_rank).map(|_| K2Factor::symbol(0)));
    let mut trace = Trace::new();
    trace.apply(
        Rule::OddColumns,
        g,
        format!(
            "exponent group has invariant factors [{}] and free rank {}",
            group.torsion.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
            group.free_rank
        ),
    );
    Ok(resolved(factors, trace))
}

/// `[[2, -b], [-a, 2]]` with `a, b >= 1`.
///
/// Panics if `a` or `b` is not positive.
pub fn reduce_rank2(a: &BigInt, b: &BigInt) -> K2Result {
    assert!(a.is_positive() && b.is_positive(), "rank-2 entries must be positive");
    let g = Gcm::from_rows(&[vec![BigInt::from(2), -b], vec![-a, BigInt::from(2)]])
        .expect("valid by construction");
    let factors = rank2_factors(a, b);
    let mut trace = Trace::new();
    trace.apply(Rule::Rank2, &g, format!("a = {a}, b = {b}"));
    resolved(factors, trace)
}

fn rank2_factors(a: &BigInt, b: &BigInt) -> Vec<K2Factor> {
    match (a.is_even(), b.is_even()) {
        (true, true) => vec![
            K2Factor::cocycle(0),
            K2Factor::cocycle(BigInt::gcd(&(a / 2), &(b / 2))),
        ],
        (false, false) => vec![K2Factor::symbol(a.gcd(b)), K2Factor::symbol(0)],
        _ => vec![K2Factor::symbol(a.gcd(b)), K2Factor::cocycle(0)],
    }
}

/// Leaf columns `t` whose single off-diagonal entry `a[s][t]` is `-1`, as
/// `(t, s)` pairs, excluding the case where `a[t][s]` is the only odd
/// off-diagonal entry of column `s`.
pub fn leaf_deletions(g: &Gcm) -> Vec<(usize, usize)> {
    let n = g.n();
    let minus_one = -BigInt::one();
    let mut out = Vec::new();
    for t in 0..n {
        let nz: Vec<usize> = g.neighbours(t).collect();
        let [s] = nz.as_slice() else { continue };
        let s = *s;
        if *g.entry(s, t) != minus_one {
            continue;
        }
        let sole_odd = g.entry(t, s).is_odd()
            && (0..n)
                .filter(|&k| k != s && k != t)
                .all(|k| g.entry(k, s).is_even());
        if !sole_odd {
            out.push((t, s));
        }
    }
    out
}

/// Parameters of a rank-3 class pattern under a relabelling `perm`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMatch {
    pub perm: Vec<usize>,
    pub params: [BigInt; 4],
    pub r: BigInt,
}

fn positive_params(x: &Gcm, cells: [(usize, usize); 4]) -> Option<[BigInt; 4]> {
    let p = cells.map(|(i, j)| -x.entry(i, j));
    p.iter().all(Signed::is_positive).then_some(p)
}

/// `[[2,-a,-b],[-c,2,-d],[-1,-1,2]]` with `b, d` even; `r = |ad - bc| / 2`.
pub fn match_class1(g: &Gcm) -> Option<ClassMatch> {
    if g.n() != 3 {
        return None;
    }
    let minus_one = -BigInt::one();
    permutations(3).into_iter().find_map(|perm| {
        let x = g.permute(&perm);
        if *x.entry(2, 0) != minus_one || *x.entry(2, 1) != minus_one {
            return None;
        }
        let [a, b, c, d] = positive_params(&x, [(0, 1), (0, 2), (1, 0), (1, 2)])?;
        if b.is_odd() || d.is_odd() {
            return None;
        }
        let r = (&a * &d - &b * &c).abs() / 2;
        Some(ClassMatch {
            perm,
            params: [a, b, c, d],
            r,
        })
    })
}

/// `[[2,-1,-a],[-b,2,-c],[-1,-d,2]]` with `a, c` even; `r = |abd - c| / 2`.
pub fn match_class2(g: &Gcm) -> Option<ClassMatch> {
    if g.n() != 3 {
        return None;
    }
    let minus_one = -BigInt::one();
    permutations(3).into_iter().find_map(|perm| {
        let x = g.permute(&perm);
        if *x.entry(0, 1) != minus_one || *x.entry(2, 0) != minus_one {
            return None;
        }
        let [a, b, c, d] = positive_params(&x, [(0, 2), (1, 0), (1, 2), (2, 1)])?;
        if a.is_odd() || c.is_odd() {
            return None;
        }
        let r = (&a * &b * &d - &c).abs() / 2;
        Some(ClassMatch {
            perm,
            params: [a, b, c, d],
            r,
        })
    })
}

/// The all-`-2` triangle and the all-`-2` chain.
pub fn match_class3(g: &Gcm) -> bool {
    if g.n() != 3 {
        return false;
    }
    let triangle = Gcm::from_rows(&[[2, -2, -2], [-2, 2, -2], [-2, -2, 2]]).expect("valid");
    let chain = Gcm::from_rows(&[[2, -2, 0], [-2, 2, -2], [0, -2, 2]]).expect("valid");
    g.is_equivalent(&triangle) || g.is_equivalent(&chain)
}

/// Rank-3 class formulas, tried in the order class 1, class 2, class 3.
pub fn reduce_class_formulas(g: &Gcm) -> Result<K2Result, RuleError> {
    let mut trace = Trace::new();
    if let Some(m) = match_class1(g) {
        trace.apply(Rule::Class1, g, class_detail(&m, ["a", "b", "c", "d"]));
        return Ok(resolved(vec![K2Factor::cocycle(m.r)], trace));
    }
    if let Some(m) = match_class2(g) {
        trace.apply(Rule::Class2, g, class_detail(&m, ["a", "b", "c", "d"]));
        return Ok(resolved(vec![K2Factor::cocycle(m.r)], trace));
    }
    if match_class3(g) {
        trace.apply(Rule::Class3, g, "matches an all -2 triangle or chain");
        return Ok(resolved(
            vec![
                K2Factor::cocycle(0),
                K2Factor::cocycle(1),
                K2Factor::cocycle(1),
            ],
            trace,
        ));
    }
    Err(RuleError::NoClassMatch)
}

fn class_detail(m: &ClassMatch, names: [&str; 4]) -> String {
    let order: Vec<String> = m.perm.iter().map(|i| (i + 1).to_string()).collect();
    let params: Vec<String> = names
        .iter()
        .zip(&m.params)
        .map(|(n, v)| format!("{n} = {v}"))
        .collect();
    format!(
        "columns ordered ({}), {}, quotient {}",
        order.join(", "),
        params.join(", "),
        m.r
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(rows: &[&[i64]]) -> Gcm {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Gcm::from_rows(&rows).unwrap()
    }

    fn factors(r: K2Result) -> Vec<K2Factor> {
        r.factors().expect("resolved").to_vec()
    }

    fn s(r: i64) -> K2Factor {
        K2Factor::symbol(r)
    }
    fn c(r: i64) -> K2Factor {
        K2Factor::cocycle(r)
    }

    #[test]
    fn odd_columns() {
        let ex = g(&[&[2, -1, -3], &[-3, 2, -1], &[-1, -3, 2]]);
        assert_eq!(factors(reduce_odd_columns(&ex).unwrap()), vec![s(2), s(13)]);
        assert_eq!(factors(reduce_odd_columns(&g(&[&[2, -1], &[-1, 2]])).unwrap()), vec![s(0)]);
        assert_eq!(
            factors(reduce_odd_columns(&g(&[&[2, -3], &[-3, 2]])).unwrap()),
            vec![s(0), s(3)]
        );
        assert_eq!(
            reduce_odd_columns(&g(&[&[2, -2], &[-1, 2]])),
            Err(RuleError::ColumnNotOdd(2))
        );
    }

    #[test]
    fn rank2() {
        let r = |a: i64, b: i64| factors(reduce_rank2(&a.into(), &b.into()));
        assert_eq!(r(2, 2), vec![c(0), c(1)]);
        assert_eq!(r(2, 3), vec![c(0)]);
        assert_eq!(r(4, 6), vec![c(0), c(1)]);
        assert_eq!(r(3, 6), vec![s(3), c(0)]);
        assert_eq!(r(3, 9), vec![s(0), s(3)]);
    }

    #[test]
    fn class_formulas() {
        let m = g(&[&[2, -1, -2], &[-1, 2, -2], &[-1, -1, 2]]);
        assert_eq!(factors(reduce_class_formulas(&m).unwrap()), vec![c(0)]);
        assert_eq!(match_class2(&m).map(|x| x.r), Some(BigInt::zero()));

        let one = g(&[&[2, -1, -2], &[-1, 2, -4], &[-1, -1, 2]]);
        assert_eq!(match_class1(&one).unwrap().r, BigInt::one());

        let tri = g(&[&[2, -2, -2], &[-2, 2, -2], &[-2, -2, 2]]);
        assert_eq!(factors(reduce_class_formulas(&tri).unwrap()), vec![c(0), c(1), c(1)]);

        let a3 = g(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(reduce_class_formulas(&a3), Err(RuleError::NoClassMatch));
    }

    #[test]
    fn closed_forms() {
        let run = |rows: &[&[i64]]| {
            let m = g(rows);
            let cls = m.classify_indecomposable().unwrap();
            factors(finite_affine_closed_form(&m, cls).unwrap())
        };
        assert_eq!(run(&[&[2, -1], &[-2, 2]]), vec![c(0)]);
        assert_eq!(run(&[&[2, -1], &[-1, 2]]), vec![s(0)]);
        assert_eq!(run(&[&[2, -2], &[-2, 2]]), vec![c(0), c(1)]);
        let hyp = g(&[&[2, -5], &[-1, 2]]);
        assert_eq!(
            finite_affine_closed_form(&hyp, CartanClass::Finite),
            Err(RuleError::NotFiniteOrAffine)
        );
    }

    #[test]
    fn leaf_deletion_guard() {
        let a3 = g(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(leaf_deletions(&a3), vec![(0, 1), (2, 1)]);
        // both -1 entries of table entry 27 share one column
        let m = g(&[&[2, -1, 0], &[-3, 2, -2], &[0, -1, 2]]);
        assert!(leaf_deletions(&m).is_empty());
        // [[2,-1],[-3,2]]: deleting column 1 would leave column 2 all even
        assert!(leaf_deletions(&g(&[&[2, -1], &[-3, 2]])).is_empty());
    }

    #[test]
    fn exponent_relations_skip_zero_pairs() {
        let m = g(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(exponent_relations(&m).rows(), 2);
    }
}
