mod common;

use qfs_workbench::corpus::{enumerate_posets, poset_codes, CACHE_ENV, DEFAULT_POSET_CAP};
use qfs_workbench::Corpus;

#[test]
fn six_point_posets_agree_with_brute_force() {
    let ours = enumerate_posets(6, DEFAULT_POSET_CAP).unwrap();
    let mut canon: Vec<_> = ours
        .iter()
        .map(|o| common::canonical_of(&common::up_sets_of(o)))
        .collect();
    canon.sort();
    let brute = common::posets(6);
    assert_eq!(brute.len(), 318);
    assert_eq!(canon, brute);
}

#[test]
fn cache_round_trips_and_ignores_garbage() {
    let dir = tempfile::tempdir().unwrap();
    std::env::set_var(CACHE_ENV, dir.path());
    let fresh = poset_codes(4, DEFAULT_POSET_CAP).unwrap();
    assert!(dir.path().join("posets-4.json").exists());
    assert_eq!(poset_codes(4, DEFAULT_POSET_CAP).unwrap(), fresh);

    std::fs::write(
        dir.path().join("posets-4.json"),
        r#"{"n":4,"codes":[1,2,3]}"#,
    )
    .unwrap();
    assert_eq!(poset_codes(4, DEFAULT_POSET_CAP).unwrap(), fresh);
    std::env::remove_var(CACHE_ENV);
}

#[test]
fn random_corpus_is_reproducible() {
    let a = Corpus::random(20, 11, 6).unwrap();
    let b = Corpus::random(20, 11, 6).unwrap();
    let names = |c: &Corpus| c.entries.iter().map(|e| e.name()).collect::<Vec<_>>();
    assert_eq!(names(&a), names(&b));
    for (x, y) in a.entries.iter().zip(&b.entries) {
        assert_eq!(x.space, y.space);
        assert!(x.space.len() <= 6);
    }
}
