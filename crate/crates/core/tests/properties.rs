mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use chusp::io::{generate_database, parse_database, parse_patterns, write_patterns, write_profits, write_sequences, GeneratorConfig};
use chusp::oracle::{enumerate_patterns, oracle_mine, OracleLimits};
use chusp::projection::{build_initial_chus, i_extend, s_extend, Chus, MatrixDb};
use chusp::qseq::{enumerate_embeddings, matches, pattern_contains, ItemId};
use chusp::utility::{build_matrices, compute_swu_per_item, swu_of_pattern, Utility};
use chusp::{mine, MiningParams, Mode, Pattern, QSequenceDatabase};

use common::{as_set, item, random_db, random_params};

fn arb_pattern() -> impl Strategy<Value = Pattern> {
    prop::collection::vec(prop::collection::btree_set(1u32..=4, 1..=2), 1..=3).prop_map(|sets| {
        Pattern::new(sets.into_iter().map(|s| s.into_iter().map(item).collect()).collect()).unwrap()
    })
}

/// Builds the projection of `t` by replaying its extension chain.
fn project(t: &Pattern, mdb: &MatrixDb) -> Chus {
    let mut items = t.itemsets().iter().enumerate().flat_map(|(k, x)| x.iter().enumerate().map(move |(j, &i)| (k, j, i)));
    let (_, _, first) = items.next().unwrap();
    let mut cur = Pattern::singleton(first);
    let mut chus = build_initial_chus(mdb, first);
    for (_, j, i) in items {
        let (next, c) = if j == 0 { s_extend(&cur, i, &chus, mdb) } else { i_extend(&cur, i, &chus, mdb).unwrap() };
        cur = next;
        chus = c;
    }
    assert_eq!(&cur, t);
    chus
}

fn oracle_umax(t: &Pattern, db: &QSequenceDatabase) -> Utility {
    db.sequences()
        .iter()
        .map(|s| {
            enumerate_embeddings(s, t)
                .iter()
                .map(|e| e.utility(s, db.profits()).unwrap())
                .max()
                .unwrap_or_default()
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn containment_is_a_partial_order(a in arb_pattern(), b in arb_pattern(), c in arb_pattern()) {
        prop_assert!(pattern_contains(&a, &a));
        if pattern_contains(&a, &b) && pattern_contains(&b, &a) {
            prop_assert_eq!(&a, &b);
        }
        if pattern_contains(&a, &b) && pattern_contains(&b, &c) {
            prop_assert!(pattern_contains(&a, &c));
        }
    }

    #[test]
    fn matching_agrees_with_embeddings(seed in any::<u64>(), t in arb_pattern(), sub in arb_pattern()) {
        let db = random_db(seed);
        for s in db.sequences() {
            prop_assert_eq!(matches(s, &t), !enumerate_embeddings(s, &t).is_empty());
            if pattern_contains(&t, &sub) && matches(s, &t) {
                prop_assert!(matches(s, &sub));
            }
        }
    }

    #[test]
    fn matrix_sums(seed in any::<u64>()) {
        let db = random_db(seed);
        for s in db.sequences() {
            let m = build_matrices(s, db.profits()).unwrap();
            let total = chusp::utility::sequence_utility(s, db.profits()).unwrap();
            prop_assert_eq!(m.total(), total);
            let mut cell_sum = Utility::ZERO;
            let mut before = Utility::ZERO;
            for (k, x) in s.itemsets().iter().enumerate() {
                for q in x.items() {
                    let u = m.util(q.item, k + 1);
                    prop_assert_eq!(before + u + m.rem_util(q.item, k + 1), total);
                    before += u;
                }
            }
            for row in 0..m.items().len() {
                for col in 0..m.n_itemsets() {
                    cell_sum += m.util_at(row, col);
                }
            }
            prop_assert_eq!(cell_sum, total);
        }
    }

    #[test]
    fn swu_downward_closed(seed in any::<u64>(), t1 in arb_pattern(), t2 in arb_pattern()) {
        let db = random_db(seed);
        if pattern_contains(&t2, &t1) {
            prop_assert!(swu_of_pattern(&t2, &db) <= swu_of_pattern(&t1, &db));
        }
        for (i, v) in compute_swu_per_item(&db).iter() {
            prop_assert_eq!(v, swu_of_pattern(&Pattern::singleton(i), &db));
        }
    }

    #[test]
    fn projection_agrees_with_oracle(seed in any::<u64>()) {
        let db = random_db(seed);
        let mdb = MatrixDb::build(&db).unwrap();
        for t in enumerate_patterns(&db, 4) {
            let chus = project(&t, &mdb);
            prop_assert_eq!(chus.umax(), oracle_umax(&t, &db), "{}", t);
            prop_assert_eq!(chus.support(), db.sequences().iter().filter(|s| matches(s, &t)).count());
            for u in chus.ucs() {
                prop_assert!(u.uls.windows(2).all(|w| w[0].tid < w[1].tid));
            }
        }
    }

    #[test]
    fn sequence_round_trip(seed in any::<u64>()) {
        let db = random_db(seed);
        let mut seq = Vec::new();
        let mut prof = Vec::new();
        write_sequences(&db, &mut seq).unwrap();
        write_profits(db.profits(), &mut prof).unwrap();
        let back = parse_database(&seq[..], &prof[..]).unwrap();
        prop_assert_eq!(&back, &db);
        let mut seq2 = Vec::new();
        write_sequences(&back, &mut seq2).unwrap();
        prop_assert_eq!(seq, seq2);
    }

    #[test]
    fn pattern_file_round_trip(seed in any::<u64>()) {
        let db = random_db(seed);
        let out = mine(&db, &MiningParams::new(Mode::Husp, Utility::ZERO).with_max_length(Some(3))).unwrap();
        let mut buf = Vec::new();
        write_patterns(&out.patterns, &mut buf).unwrap();
        prop_assert_eq!(parse_patterns(&buf[..]).unwrap(), out.patterns.clone());
        prop_assert_eq!(buf.iter().filter(|&&b| b == b'\n').count(), out.patterns.len());
    }

    #[test]
    fn generated_databases_parse(seed in any::<u64>(), n in 1usize..40, items in 1u32..30, isets in 1.0f64..6.0, size in 1.0f64..3.0) {
        let cfg = GeneratorConfig {
            seed,
            num_sequences: n,
            num_items: items,
            avg_itemsets_per_sequence: isets,
            avg_items_per_itemset: size,
            max_qty: 4,
            profit_range: (Utility::from_raw(5_000), Utility::from_units(7)),
        };
        let db = generate_database(&cfg).unwrap();
        prop_assert_eq!(db.len(), n);
        prop_assert!(db.distinct_items().iter().all(|i: &ItemId| i.get() <= items));
        let mut seq = Vec::new();
        let mut prof = Vec::new();
        write_sequences(&db, &mut seq).unwrap();
        write_profits(db.profits(), &mut prof).unwrap();
        prop_assert_eq!(parse_database(&seq[..], &prof[..]).unwrap(), db);
    }

    #[test]
    fn miner_matches_oracle(seed in any::<u64>()) {
        let db = random_db(seed);
        for mode in Mode::ALL {
            let params = random_params(seed, &db, mode);
            let got = as_set(&mine(&db, &params).unwrap().patterns);
            let want = as_set(&oracle_mine(&db, &params, &OracleLimits::default()).unwrap());
            prop_assert_eq!(got, want, "mode {} params {:?}", mode, params);
        }
    }

    #[test]
    fn mining_is_deterministic(seed in any::<u64>()) {
        let db = random_db(seed);
        let params = random_params(seed, &db, Mode::Chusp);
        let a = mine(&db, &params).unwrap();
        let b = mine(&db, &params).unwrap();
        prop_assert_eq!(a.patterns, b.patterns);
        prop_assert_eq!(a.counters, b.counters);
    }
}

#[test]
fn closed_patterns_cover_frequent_ones() {
    for seed in 0..40 {
        let db = random_db(seed);
        let base = random_params(seed, &db, Mode::Fhusp);
        let f = mine(&db, &base).unwrap().patterns;
        let c = mine(&db, &MiningParams { mode: Mode::Chusp, ..base }).unwrap().patterns;
        let closed: BTreeSet<_> = as_set(&c);
        assert!(closed.is_subset(&as_set(&f)));
        for p in &f {
            assert!(c.iter().any(|q| q.support == p.support && pattern_contains(&q.pattern, &p.pattern)));
        }
    }
}
