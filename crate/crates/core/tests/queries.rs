mod common;

use proptest::prelude::*;
use seqdocs::oracle::{NaiveCorpus, OracleAnswer, OracleKind};
use seqdocs::retrieval::{BlockOrder, EngineConfig, ListAlgo, ResetStrategy};
use seqdocs::{DocumentCollection, FreqBackend, QueryEngine, TextIndex};

const BACKENDS: [FreqBackend; 5] = [
    FreqBackend::Rank,
    FreqBackend::Dfs,
    FreqBackend::Quantile,
    FreqBackend::LocalSa,
    FreqBackend::ExpSearch,
];

fn engine(c: &DocumentCollection, b: usize, reset: ResetStrategy) -> QueryEngine {
    QueryEngine::with_config(
        TextIndex::build(c).unwrap(),
        EngineConfig {
            block_factor: Some(b),
            reset,
            ..Default::default()
        },
    )
    .unwrap()
}

fn docs_of(a: OracleAnswer) -> Vec<(u32, usize)> {
    match a {
        OracleAnswer::Docs(v) => v,
        OracleAnswer::Count(_) => unreachable!(),
    }
}

/// Checks every range query on the interval of `p` against the oracle.
fn check_pattern(
    e: &QueryEngine,
    naive: &NaiveCorpus,
    p: &[u32],
    weights: &[f64],
) -> Result<(), TestCaseError> {
    let freqs = naive.frequencies(p).unwrap();
    let Some((sp, ep)) = e.pattern_range(p).unwrap() else {
        prop_assert!(freqs.is_empty());
        prop_assert!(e.topk_frequent(p, 3).unwrap().is_empty());
        return Ok(());
    };
    let want_docs: Vec<u32> = freqs.iter().map(|&(d, _)| d).collect();
    let docc = want_docs.len();

    let (rmq, rmq_stats) = e.list(sp, ep, ListAlgo::Rmq).unwrap();
    let (mark, mark_stats) = e.list(sp, ep, ListAlgo::Marking).unwrap();
    let (blocked, blocked_stats) = e.list(sp, ep, ListAlgo::Blocked).unwrap();
    prop_assert_eq!(&rmq.docs(), &mark.docs());
    prop_assert!(rmq_stats.visited_intervals <= 2 * docc + 1);
    prop_assert!(mark_stats.visited_intervals <= 2 * docc + 1);
    prop_assert_eq!(blocked_stats.empty_block_scans, 0);
    for h in [&rmq, &blocked] {
        let mut d = h.docs();
        d.sort_unstable();
        prop_assert_eq!(&d, &want_docs);
    }
    prop_assert_eq!(e.doc_frequency(sp, ep).unwrap(), docc);

    let want_pairs: Vec<(u32, u32)> = freqs.iter().map(|&(d, f)| (d, f as u32)).collect();
    for b in BACKENDS {
        prop_assert_eq!(
            e.list_with_freq(sp, ep, b).unwrap().sorted_pairs(),
            want_pairs.clone(),
            "{:?}",
            b
        );
    }
    let right: std::collections::HashMap<u32, usize> = e
        .rightmost_occurrences(sp, ep)
        .unwrap()
        .into_iter()
        .collect();
    for (d, first) in e.leftmost_occurrences(sp, ep).unwrap() {
        let tf = freqs.iter().find(|x| x.0 == d).unwrap().1;
        prop_assert_eq!(e.tf_local(d, first, right[&d]).unwrap(), tf);
        prop_assert_eq!(e.tf_expsearch(d, first, ep).unwrap(), tf);
    }

    for k in [0, 1, 2, 5, 100] {
        let got = e.topk_frequent(p, k).unwrap();
        let want = docs_of(naive.query(p, OracleKind::TopK(k)).unwrap());
        prop_assert_eq!(got.len(), want.len());
        let got_pairs: Vec<(u32, usize)> = got
            .entries
            .iter()
            .map(|h| (h.doc, h.freq.unwrap() as usize))
            .collect();
        prop_assert_eq!(&got_pairs, &want);
        prop_assert_eq!(got.exhausted, k >= docc);

        let got = e.topk_important(p, k, weights).unwrap();
        let want = docs_of(
            naive
                .query(p, OracleKind::TopKWeighted(k, weights))
                .unwrap(),
        );
        let got_pairs: Vec<(u32, usize)> = got
            .entries
            .iter()
            .map(|h| (h.doc, h.freq.unwrap() as usize))
            .collect();
        prop_assert_eq!(&got_pairs, &want);
    }
    prop_assert!(e.marks_clean());
    Ok(())
}

fn weights_for(c: &DocumentCollection, seed: u64) -> Vec<f64> {
    // Few distinct values so ties occur.
    (0..c.num_docs() as u64)
        .map(|d| ((d.wrapping_mul(seed | 1) >> 3) % 4) as f64 / 4.0)
        .collect()
}

#[test]
fn running_example_all_patterns() {
    let c = common::running_example();
    let naive = NaiveCorpus::new(&c);
    let e = engine(&c, 2, ResetStrategy::Auto);
    let w = [0.5, 0.9, 0.1, 0.7];
    for a in 1..=4 {
        check_pattern(&e, &naive, &[a], &w).unwrap();
        for b in 1..=4 {
            check_pattern(&e, &naive, &[a, b], &w).unwrap();
            for x in 1..=4 {
                check_pattern(&e, &naive, &[a, b, x], &w).unwrap();
            }
        }
    }
}

#[test]
fn sorted_document_array_does_not_exhaust_the_stack() {
    // One long run per document gives a monotone C over large ranges.
    let docs: Vec<Vec<u32>> = (0..200).map(|d| vec![1 + d % 2; 500]).collect();
    let c = DocumentCollection::from_sequences(docs, 2).unwrap();
    let e = QueryEngine::new(TextIndex::build(&c).unwrap()).unwrap();
    let (sp, ep) = e.pattern_range(&[1]).unwrap().unwrap();
    for algo in [ListAlgo::Rmq, ListAlgo::Marking, ListAlgo::Blocked] {
        assert_eq!(e.list(sp, ep, algo).unwrap().0.len(), 100);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn queries_match_oracle(
        c in common::collection(),
        b in 1usize..6,
        reset in prop_oneof![Just(ResetStrategy::Auto), Just(ResetStrategy::Unmark), Just(ResetStrategy::Reinit)],
        seeds in prop::collection::vec(any::<u64>(), 8),
    ) {
        let naive = NaiveCorpus::new(&c);
        let e = engine(&c, b, reset);
        let w = weights_for(&c, seeds[0]);
        for (i, &s) in seeds.iter().enumerate() {
            let p = common::pattern_for(&c, s, 1 + i % 4);
            check_pattern(&e, &naive, &p, &w)?;
        }
    }

    #[test]
    fn arbitrary_intervals_agree(c in common::collection(), b in 1usize..5, x: usize, y: usize) {
        let e = engine(&c, b, ResetStrategy::Auto);
        let n = e.index().len();
        let (sp, ep) = {
            let (a, b) = (1 + x % n, 1 + y % n);
            (a.min(b), a.max(b))
        };
        let mut want: Vec<u32> = e.index().doc_array()[sp - 1..ep].to_vec();
        want.sort_unstable();
        want.dedup();
        let (rmq, _) = e.list(sp, ep, ListAlgo::Rmq).unwrap();
        let (mark, _) = e.list(sp, ep, ListAlgo::Marking).unwrap();
        let (blocked, stats) = e.list_blocked_ordered(sp, ep, BlockOrder::LeftBlockRight).unwrap();
        prop_assert_eq!(rmq.docs(), mark.docs());
        prop_assert_eq!(stats.empty_block_scans, 0);
        let mut r = rmq.docs();
        r.sort_unstable();
        let mut bl = blocked.docs();
        bl.sort_unstable();
        prop_assert_eq!(&r, &want);
        prop_assert_eq!(&bl, &want);
        prop_assert_eq!(e.doc_frequency(sp, ep).unwrap(), want.len());
        let dfs = e.list_with_freq(sp, ep, FreqBackend::Dfs).unwrap().sorted_pairs();
        for b in BACKENDS {
            prop_assert_eq!(e.list_with_freq(sp, ep, b).unwrap().sorted_pairs(), dfs.clone());
        }
        let top = e.topk_frequent_range(sp, ep, 3).unwrap();
        let excluded_max = dfs
            .iter()
            .filter(|(d, _)| !top.entries.iter().any(|h| h.doc == *d))
            .map(|&(_, f)| f)
            .max()
            .unwrap_or(0);
        let kept_min = top.entries.iter().map(|h| h.freq.unwrap()).min().unwrap_or(u32::MAX);
        prop_assert!(kept_min >= excluded_max);
        prop_assert!(e.marks_clean());
    }
}
