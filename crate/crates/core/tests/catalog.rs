use kmk2::catalog::{
    builtin, enumerate_rank2_hyperbolic, enumerate_rank3_hyperbolic, rank3_partition,
    verify_catalog, Table,
};
use kmk2::gcm::{permutations, Gcm};
use kmk2::k2::{k2, k2_equiv, Rule};
use kmk2::text::parse_matrix;

#[test]
fn every_entry_passes() {
    let report = verify_catalog(None);
    assert_eq!(report.entries.len(), 34);
    assert!(report.all_pass(), "{report}");
}

#[test]
fn higher_rank_filter() {
    let report = verify_catalog(Some(Table::Higher));
    assert_eq!(report.entries.len(), 14);
    let rank4 = report.entries.iter().filter(|e| e.source == "rank-4 table").count();
    assert_eq!(rank4, 11);
}

#[test]
fn rules_decide_most_entries() {
    // The table is consulted only where no rule applies.
    let report = verify_catalog(None);
    let looked_up: Vec<&str> = report
        .entries
        .iter()
        .filter(|e| e.decided_by == Some(Rule::Catalog))
        .map(|e| e.id.as_str())
        .collect();
    for id in ["27", "106", "110", "116", "119", "122", "128", "179"] {
        assert!(!looked_up.contains(&id), "{id} should be decided by a rule");
    }
}

#[test]
fn rank3_count() {
    let all = enumerate_rank3_hyperbolic();
    assert_eq!(all.len(), 123);
    assert!(all.iter().all(|g| g.is_hyperbolic() && g.is_indecomposable()));
}

#[test]
fn enumeration_is_permutation_closed() {
    let all = enumerate_rank3_hyperbolic();
    for g in &all {
        assert_eq!(&g.canonical(), g);
        for p in permutations(3) {
            assert!(all.contains(&g.permute(&p).canonical()));
        }
    }
}

#[test]
fn tables_and_worked_example_are_enumerated() {
    let all = enumerate_rank3_hyperbolic();
    for e in builtin().entries().iter().filter(|e| e.matrix.n() == 3) {
        assert!(all.contains(&e.matrix.canonical()), "entry {}", e.id);
    }
    let ex = parse_matrix("2 -1 -3; -3 2 -1; -1 -3 2").unwrap();
    assert!(all.contains(&ex.canonical()));
}

#[test]
fn rank2_enumeration_matches_brute_force() {
    for bound in 1..=8u32 {
        let got = enumerate_rank2_hyperbolic(bound);
        let mut want = 0;
        for a in 1..=bound {
            for b in a..=bound {
                if a * b > 4 {
                    want += 1;
                }
            }
        }
        assert_eq!(got.len(), want, "bound {bound}");
        assert!(got.iter().all(Gcm::is_hyperbolic));
    }
}

#[test]
fn partition_covers_everything() {
    let r = rank3_partition();
    assert_eq!(r.total, 123);
    assert!(r.uncovered.is_empty(), "{r}");
    assert_eq!(
        r.all_odd + r.leaf_deletion + r.class1 + r.class2 + r.class3 + r.table,
        123
    );
    assert_eq!(r.all_odd, 67);
    assert!(!r.engine.contains_key("none"), "{r}");
}

#[test]
fn catalog_entries_are_permutation_invariant() {
    for e in builtin().entries().iter().filter(|e| e.matrix.n() == 3) {
        for p in permutations(3) {
            let got = k2(&e.matrix.permute(&p));
            assert!(
                k2_equiv(got.factors().expect("resolved"), &e.expected),
                "entry {} under {p:?}",
                e.id
            );
        }
    }
}
