#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chusp::qseq::{ItemId, ProfitTable, QItem, QItemset, QSequence};
use chusp::{MinSup, MinedPattern, MiningParams, Mode, Pattern, QSequenceDatabase, Utility};

pub const MAX_SEQUENCES: usize = 8;
pub const MAX_ITEMS: u32 = 6;
pub const MAX_ITEMSET: usize = 3;
pub const MAX_SEQ_LENGTH: usize = 8;

pub fn item(n: u32) -> ItemId {
    ItemId::new(n).unwrap()
}

/// A random database inside the oracle's default limits. About one in four
/// databases uses half-unit profits.
pub fn random_db(seed: u64) -> QSequenceDatabase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_items = rng.gen_range(2..=MAX_ITEMS);
    let halves = rng.gen_bool(0.25);
    let profits: ProfitTable = (1..=n_items)
        .map(|i| {
            let p = if halves {
                Utility::from_raw(rng.gen_range(1..=20u64) * Utility::SCALE / 2)
            } else {
                Utility::from_units(rng.gen_range(1..=10))
            };
            (item(i), p)
        })
        .collect();
    let n_seq = rng.gen_range(1..=MAX_SEQUENCES);
    let sequences = (1..=n_seq as u32)
        .map(|sid| {
            let mut budget = rng.gen_range(1..=MAX_SEQ_LENGTH);
            let mut itemsets = Vec::new();
            while budget > 0 {
                let cap = budget.min(MAX_ITEMSET).min(n_items as usize);
                let k = rng.gen_range(1..=cap);
                budget -= k;
                let mut ids: Vec<u32> = sample(&mut rng, n_items as usize, k).into_iter().map(|x| x as u32 + 1).collect();
                ids.sort_unstable();
                let qitems = ids
                    .into_iter()
                    .map(|i| QItem {
                        item: item(i),
                        qty: rng.gen_range(1..=5),
                    })
                    .collect();
                itemsets.push(QItemset::new(qitems).unwrap());
            }
            QSequence::new(sid, itemsets).unwrap()
        })
        .collect();
    QSequenceDatabase::new(sequences, profits).unwrap()
}

/// Thresholds spread between vacuous and very selective.
pub fn random_params(seed: u64, db: &QSequenceDatabase, mode: Mode) -> MiningParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let total: u64 = db
        .sequences()
        .iter()
        .map(|s| chusp::utility::sequence_utility(s, db.profits()).unwrap().raw())
        .sum();
    let min_util = Utility::from_raw((total as f64 * rng.gen_range(0.0..0.5)) as u64);
    let min_sup = if rng.gen_bool(0.5) {
        MinSup::Absolute(rng.gen_range(1..=db.len()))
    } else {
        MinSup::ratio(rng.gen_range(1..=10) as f64 / 10.0).unwrap()
    };
    let max_length = rng.gen_bool(0.2).then(|| rng.gen_range(1..=4));
    MiningParams::new(mode, min_util).with_min_sup(min_sup).with_max_length(max_length)
}

pub type Row = (Pattern, Utility, usize);

pub fn as_set(patterns: &[MinedPattern]) -> BTreeSet<Row> {
    patterns.iter().map(|m| (m.pattern.clone(), m.umax, m.support)).collect()
}

pub fn toy_paths() -> (std::path::PathBuf, std::path::PathBuf) {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    (dir.join("toy.seq"), dir.join("toy.prof"))
}
