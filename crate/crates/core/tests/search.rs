mod common;

use std::collections::BTreeSet;

use pillai_core::search::{merge_findings, run_search_with, Checkpoint, Shard};
use pillai_core::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn bx(filter: GcdFilter, min_n: usize) -> SearchBox {
    SearchBox { a: (2, 8), b: (2, 8), r: (1, 8), s: (1, 8), c: (1, 60), exp_cap: 30, min_n, gcd_filter: filter }
}

#[test]
fn interrupted_run_resumes_from_file() {
    let b = bx(GcdFilter::Any, 3);
    let full = run_search(&b, &SearchOptions::default()).unwrap();
    assert!(full.finished);

    let dir = std::env::temp_dir().join(format!("pillai-resume-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cp.txt");
    let opts = SearchOptions { stop_after_pairs: Some(9), batch: Some(4), ..Default::default() };
    let part = run_search_with(&b, &opts, |cp| cp.save(&path)).unwrap();
    assert!(!part.finished);

    let cp = Checkpoint::load(&path).unwrap();
    let resumed = run_search(&b, &SearchOptions { resume: Some(cp), ..Default::default() }).unwrap();
    assert!(resumed.finished);
    assert_eq!(resumed.digest(), full.digest());
    assert_eq!(resumed.stats, full.stats);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn checkpoint_for_other_box_rejected() {
    let part =
        run_search(&bx(GcdFilter::Any, 3), &SearchOptions { stop_after_pairs: Some(2), ..Default::default() }).unwrap();
    let other = bx(GcdFilter::Coprime, 3);
    let err = run_search(&other, &SearchOptions { resume: Some(part.checkpoint), ..Default::default() });
    assert!(err.is_err());
}

#[test]
fn tampered_checkpoint_rejected() {
    let part =
        run_search(&bx(GcdFilter::Any, 3), &SearchOptions { stop_after_pairs: Some(6), ..Default::default() }).unwrap();
    let text = part.checkpoint.to_text();
    assert!(Checkpoint::from_text(&text).is_ok());
    let bad = text.replacen("complete", "incomplete", 1);
    assert!(Checkpoint::from_text(&bad).is_err());
}

#[test]
fn shards_merge_to_full_run() {
    let b = bx(GcdFilter::Any, 3);
    let full = run_search(&b, &SearchOptions::default()).unwrap();
    let parts = (0..3).flat_map(|i| {
        let opts = SearchOptions { shard: Some(Shard { index: i, count: 3 }), ..Default::default() };
        run_search(&b, &opts).unwrap().findings
    });
    let merged = merge_findings(parts);
    assert_eq!(search::findings_digest(&merged), full.digest());
}

#[test]
fn findings_have_distinct_keys_and_known_reps() {
    let out = run_search(&bx(GcdFilter::Any, 3), &SearchOptions::default()).unwrap();
    let keys: BTreeSet<_> = out.findings.iter().map(|f| f.key.clone()).collect();
    assert_eq!(keys.len(), out.findings.len());
    for f in &out.findings {
        assert_eq!(family_key(&f.set).unwrap(), f.key);
        assert!(f.set.len() >= 3);
    }
}

#[test]
fn common_factor_three_solution_search_finds_anomalous_candidate() {
    let b = SearchBox {
        a: (2, 6),
        b: (2, 8),
        r: (1, 6),
        s: (1, 4),
        c: (1, 10),
        exp_cap: 30,
        min_n: 3,
        gcd_filter: GcdFilter::Common,
    };
    let out = run_search(&b, &SearchOptions::default()).unwrap();
    let want = family_key(&SolutionSet::parse("2,6,8,5,3;0,0,1,1,7,3").unwrap()).unwrap();
    let f = out.findings.iter().find(|f| f.key == want).expect("missing family");
    assert_eq!(f.classification, Classification::AnomalousCandidate);
    assert!(f.complete);
}

/// A fixed 1% of the box, re-enumerated by brute force.
#[test]
fn sampled_instances_match_brute_force() {
    let b = bx(GcdFilter::Any, 3);
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..(7 * 7 * 8 * 8 * 60 / 100) {
        let (a, bb, r, s, c) = (
            rng.gen_range(b.a.0..=b.a.1),
            rng.gen_range(b.b.0..=b.b.1),
            rng.gen_range(b.r.0..=b.r.1),
            rng.gen_range(b.s.0..=b.s.1),
            rng.gen_range(b.c.0..=b.c.1),
        );
        let fast = search::group_solutions(a, bb, r, s, (c, c), b.exp_cap);
        let fast: Vec<_> = fast.get(&c).map(|v| v.iter().map(|s| s.pair()).collect()).unwrap_or_default();
        assert_eq!(fast, common::brute_pairs(a, bb, c, r, s, b.exp_cap), "{a},{bb},{c},{r},{s}");
    }
}

#[test]
fn bad_boxes_rejected() {
    let mut b = bx(GcdFilter::Any, 3);
    b.a = (5, 2);
    assert!(run_search(&b, &SearchOptions::default()).is_err());
    let mut b = bx(GcdFilter::Any, 3);
    b.min_n = 1;
    assert!(run_search(&b, &SearchOptions::default()).is_err());
    assert!("3/3".parse::<Shard>().is_err());
    assert!("1/4".parse::<Shard>().is_ok());
}
