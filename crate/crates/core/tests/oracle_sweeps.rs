use blind_rewrite::oracle::{
    check_fixed_construction, check_fixed_point_iff, check_postconditions, enumerate_ops,
    find_converse_counterexample, run_all, SweepBounds,
};

#[test]
fn postconditions_exhaustive_n3() {
    let b = SweepBounds::new(3).unwrap();
    assert_eq!(enumerate_ops(&b).len(), 3 * 14 * 15);
    let r = check_postconditions(&b);
    assert_eq!(r.cases_checked, 729 * 630);
    assert!(r.passed(), "{r}");
}

#[test]
fn fixed_point_iff_exhaustive_n3_short_paths() {
    let b = SweepBounds::with_lengths(3, 2, 2).unwrap();
    let r = check_fixed_point_iff(&b);
    assert_eq!(r.cases_checked, 729 * 3 * 6 * 7);
    assert!(r.passed(), "{r}");
}

#[test]
fn fixed_construction_seeds() {
    let b = SweepBounds::new(3).unwrap();
    for seed in [0, 1, 42, 1234] {
        let r = check_fixed_construction(&b, 1000, seed);
        assert!(r.passed(), "{r}");
        assert!(r.antecedent_cases.unwrap() >= 1000);
    }
}

#[test]
fn converse_is_documented_not_failed() {
    let b = SweepBounds::new(2).unwrap();
    assert!(find_converse_counterexample(&SweepBounds::with_lengths(2, 2, 2).unwrap()).is_some());
    let reports = run_all(&b, 100, 42, false);
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r.passed()));
    assert!(reports[2].notes.iter().any(|n| n.starts_with("converse does not hold")));
}
