use kmk2::catalog::{builtin, enumerate_rank3_hyperbolic};
use kmk2::gcm::{permutations, CartanClass, Gcm};
use kmk2::intlat::{determinant, smith_normal_form, IntMatrix};
use kmk2::k2::{
    finite_affine_closed_form, k2, k2_equiv, k2_with, match_class1, match_class2,
    reduce_class_formulas, reduce_odd_columns, reduce_rank2, Deletion, K2Factor, Options, Rule,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows)
}

fn matrix_strategy(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

/// Random GCM of rank `1..=max` with entry products bounded so most
/// samples stay small.
fn gcm_strategy(max: usize) -> impl Strategy<Value = Gcm> {
    (1..=max).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        prop::collection::vec((prop::bool::weighted(0.6), 1i64..=4, 1i64..=4), pairs).prop_map(
            move |ps| {
                let mut m = vec![vec![0i64; n]; n];
                let mut k = 0;
                for i in 0..n {
                    m[i][i] = 2;
                    for j in i + 1..n {
                        let (on, a, b) = ps[k];
                        k += 1;
                        if on {
                            m[i][j] = -a;
                            m[j][i] = -b;
                        }
                    }
                }
                Gcm::from_rows(&m).unwrap()
            },
        )
    })
}

/// Connected simply-laced GCM of rank at least 2: a random tree plus random
/// extra edges.
fn simply_laced_strategy() -> impl Strategy<Value = Gcm> {
    (2usize..=6).prop_flat_map(|n| {
        (
            prop::collection::vec(any::<prop::sample::Index>(), n.saturating_sub(1)),
            prop::collection::vec(prop::bool::weighted(0.3), n * n),
        )
            .prop_map(move |(parents, extra)| {
                let mut m = vec![vec![0i64; n]; n];
                for i in 0..n {
                    m[i][i] = 2;
                }
                for (k, p) in parents.iter().enumerate() {
                    let child = k + 1;
                    let parent = p.index(child);
                    m[child][parent] = -1;
                    m[parent][child] = -1;
                }
                for i in 0..n {
                    for j in i + 1..n {
                        if extra[i * n + j] {
                            m[i][j] = -1;
                            m[j][i] = -1;
                        }
                    }
                }
                Gcm::from_rows(&m).unwrap()
            })
    })
}

fn block_diagonal(a: &Gcm, b: &Gcm) -> Gcm {
    let n = a.n() + b.n();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 0..a.n() {
        for j in 0..a.n() {
            m[i][j] = a.entry(i, j).clone();
        }
    }
    for i in 0..b.n() {
        for j in 0..b.n() {
            m[a.n() + i][a.n() + j] = b.entry(i, j).clone();
        }
    }
    Gcm::from_rows(&m).unwrap()
}

fn product(m: &IntMatrix, n: &IntMatrix) -> IntMatrix {
    m * n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn snf_is_a_valid_decomposition(rows in matrix_strategy(6)) {
        let m = int_matrix(&rows);
        let s = smith_normal_form(&m);
        prop_assert_eq!(product(&product(&s.u, &m), &s.v), s.diagonal_matrix());
        prop_assert!(determinant(&s.u).unwrap().abs().is_one());
        prop_assert!(determinant(&s.v).unwrap().abs().is_one());
        prop_assert_eq!(product(&s.v, &s.v_inv), IntMatrix::identity(m.cols()));
        for w in s.d.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        if m.is_square() {
            let det = determinant(&m).unwrap();
            if !det.is_zero() {
                let prod: BigInt = s.d.iter().product();
                prop_assert_eq!(det.abs(), prod);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn classification_is_permutation_invariant(
        k in 0usize..34,
        p in any::<prop::sample::Index>(),
    ) {
        let e = &builtin().entries()[k];
        let perms = permutations(e.matrix.n());
        let h = e.matrix.permute(&perms[p.index(perms.len())]);
        prop_assert_eq!(h.is_hyperbolic(), e.matrix.is_hyperbolic());
        prop_assert_eq!(h.classify_indecomposable(), e.matrix.classify_indecomposable());
    }

    #[test]
    fn random_permutations_preserve_class(g in gcm_strategy(5), p in any::<prop::sample::Index>()) {
        let perms = permutations(g.n());
        let perm = &perms[p.index(perms.len())];
        let h = g.permute(perm);
        let mut a: Vec<_> = g.classify().blocks.into_iter().map(|(_, c)| c).collect();
        let mut b: Vec<_> = h.classify().blocks.into_iter().map(|(_, c)| c).collect();
        a.sort_by_key(|c| c.label());
        b.sort_by_key(|c| c.label());
        prop_assert_eq!(a, b);
        prop_assert_eq!(h.is_hyperbolic(), g.is_hyperbolic());
    }

    #[test]
    fn finite_type_is_hereditary(g in gcm_strategy(6)) {
        if let Ok(cls) = g.classify_indecomposable() {
            for drop in 0..g.n() {
                if g.n() == 1 {
                    break;
                }
                let sub = g.delete(drop).unwrap();
                for (_, c) in sub.classify().blocks {
                    match cls {
                        CartanClass::Finite | CartanClass::Affine => {
                            prop_assert_eq!(c, CartanClass::Finite)
                        }
                        CartanClass::Indefinite { hyperbolic: true } => {
                            prop_assert!(c.is_finite_or_affine())
                        }
                        CartanClass::Indefinite { hyperbolic: false } => {}
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn blocks_multiply(a in gcm_strategy(3), b in gcm_strategy(3)) {
        let (ka, kb) = (k2(&a), k2(&b));
        let sum = k2(&block_diagonal(&a, &b));
        match (ka.factors(), kb.factors()) {
            (Some(x), Some(y)) => {
                let both: Vec<K2Factor> = x.iter().chain(y).cloned().collect();
                prop_assert!(k2_equiv(sum.factors().unwrap(), &both));
            }
            _ => prop_assert!(!sum.is_resolved()),
        }
    }

    #[test]
    fn simply_laced_gives_k2_f(g in simply_laced_strategy()) {
        let r = k2(&g);
        prop_assert!(k2_equiv(r.factors().unwrap(), &[K2Factor::symbol(0)]), "{}", g);
    }
}

#[test]
fn odd_rank2_rules_agree() {
    for a in (1..=15i64).step_by(2) {
        for b in (1..=15i64).step_by(2) {
            let g = Gcm::from_rows(&[[2, -b], [-a, 2]]).unwrap();
            let x = reduce_rank2(&BigInt::from(a), &BigInt::from(b));
            let y = reduce_odd_columns(&g).unwrap();
            assert!(k2_equiv(x.factors().unwrap(), y.factors().unwrap()), "a={a} b={b}");
        }
    }
}

#[test]
fn catalog_entries_are_permutation_invariant() {
    for e in builtin().entries() {
        let base = k2(&e.matrix);
        for p in permutations(e.matrix.n()).iter().step_by(7) {
            let r = k2(&e.matrix.permute(p));
            assert!(k2_equiv(r.factors().unwrap(), base.factors().unwrap()), "{} {p:?}", e.id);
        }
    }
}

#[test]
fn class_formulas_agree_with_other_rules() {
    let no_table = Options { catalog: false, ..Options::default() };
    let mut overlaps = 0;
    for g in enumerate_rank3_hyperbolic() {
        if match_class1(&g).is_none() && match_class2(&g).is_none() {
            continue;
        }
        let formula = reduce_class_formulas(&g).unwrap();
        let engine = k2_with(&g, Options { deletion: Deletion::Forced, ..no_table });
        if let Some(f) = engine.factors() {
            if engine.deciding_rule() != formula.deciding_rule() {
                overlaps += 1;
            }
            assert!(k2_equiv(f, formula.factors().unwrap()), "{g}");
        }
    }
    assert!(overlaps > 0);
}

#[test]
fn forced_and_disabled_deletion_agree() {
    let forced = Options { deletion: Deletion::Forced, catalog: true };
    let disabled = Options { deletion: Deletion::Disabled, catalog: true };
    let mut compared = 0;
    let matrices = builtin()
        .entries()
        .iter()
        .map(|e| e.matrix.clone())
        .chain(enumerate_rank3_hyperbolic());
    for g in matrices {
        let (a, b) = (k2_with(&g, forced), k2_with(&g, disabled));
        if let (Some(x), Some(y)) = (a.factors(), b.factors()) {
            compared += 1;
            assert!(k2_equiv(x, y), "{g}");
        }
    }
    assert!(compared >= 123);
}

/// All indecomposable GCMs of rank `n` with off-diagonal entries in `[-4, 0]`.
fn small_gcms(n: usize) -> Vec<Gcm> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for code in 0..17usize.pow(pairs.len() as u32) {
        let mut m = vec![vec![0i64; n]; n];
        let mut c = code;
        for i in 0..n {
            m[i][i] = 2;
        }
        for &(i, j) in &pairs {
            let x = c % 17;
            c /= 17;
            if x > 0 {
                m[i][j] = -(((x - 1) / 4) as i64 + 1);
                m[j][i] = -(((x - 1) % 4) as i64 + 1);
            }
        }
        let g = Gcm::from_rows(&m).unwrap();
        if g.is_indecomposable() {
            out.push(g);
        }
    }
    out
}

fn chain(n: usize, first: (i64, i64), last: (i64, i64)) -> Gcm {
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        m[i][i] = 2;
        if i + 1 < n {
            m[i][i + 1] = -1;
            m[i + 1][i] = -1;
        }
    }
    (m[0][1], m[1][0]) = first;
    (m[n - 1][n - 2], m[n - 2][n - 1]) = last;
    Gcm::from_rows(&m).unwrap()
}

/// Two leaves on column 2, then a path to column `n`, with the last bond
/// `last`. Covers D_n, B/C-tailed forks and A_(2n-1)^(2).
fn fork(n: usize, last: (i64, i64)) -> Gcm {
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        m[i][i] = 2;
    }
    for (a, b) in [(0, 2), (1, 2)].into_iter().chain((2..n - 1).map(|k| (k, k + 1))) {
        m[a][b] = -1;
        m[b][a] = -1;
    }
    (m[n - 1][n - 2], m[n - 2][n - 1]) = last;
    Gcm::from_rows(&m).unwrap()
}

/// `None` when deletion does not apply, so the pipeline would fall back to
/// the closed form itself.
fn closed_form_matches_deletion(g: &Gcm) -> Option<bool> {
    let cls = g.classify_indecomposable().unwrap();
    let closed = finite_affine_closed_form(g, cls).unwrap();
    let forced = k2_with(g, Options { deletion: Deletion::Forced, catalog: false });
    let first = forced.trace().rules().next()?;
    if !matches!(first, Rule::DeleteLeaf | Rule::DeleteColumn) {
        return None;
    }
    Some(k2_equiv(closed.factors().unwrap(), forced.factors().unwrap()))
}

#[test]
fn closed_forms_match_deletion_on_families() {
    let ends = [(-1, -1), (-2, -1), (-1, -2)];
    let mut chains = 0;
    for n in 3..=7 {
        for &first in &ends {
            for &last in &ends {
                let g = chain(n, first, last);
                if g.classify_indecomposable().unwrap().is_finite_or_affine() {
                    let ok = closed_form_matches_deletion(&g);
                    assert_ne!(ok, Some(false), "{g}");
                    chains += usize::from(ok.is_some());
                }
            }
        }
    }
    let mut forks = 0;
    for n in 4..=7 {
        for &last in &ends {
            let g = fork(n, last);
            if g.classify_indecomposable().unwrap().is_finite_or_affine() {
                let ok = closed_form_matches_deletion(&g);
                assert_ne!(ok, Some(false), "{g}");
                forks += usize::from(ok.is_some());
            }
        }
    }
    eprintln!("deletion checked {chains} chains and {forks} forks");
    assert!(chains >= 20 && forks >= 8, "{chains} chains, {forks} forks");
}

#[test]
fn closed_forms_match_deletion_exhaustively() {
    let mut checked = 0;
    for n in 1..=3 {
        for g in small_gcms(n) {
            if g.classify_indecomposable().unwrap().is_finite_or_affine() {
                let ok = closed_form_matches_deletion(&g);
                assert_ne!(ok, Some(false), "{g}");
                checked += usize::from(ok.is_some());
            }
        }
    }
    assert!(checked > 20);
}

#[test]
fn every_rank3_hyperbolic_resolves() {
    for g in enumerate_rank3_hyperbolic() {
        let r = k2(&g);
        assert!(r.is_resolved(), "{g}");
        assert!(!r.trace().is_empty());
    }
}

#[test]
fn trace_is_never_empty() {
    for n in 1..=3 {
        for g in small_gcms(n) {
            assert!(!k2(&g).trace().is_empty(), "{g}");
        }
    }
}
