//! Seeded synthetic quantitative sequence databases.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use crate::error::{Error, Result};
use crate::qseq::{ItemId, ProfitTable, QItem, QItemset, QSequence, QSequenceDatabase};
use crate::utility::Utility;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub num_sequences: usize,
    pub num_items: u32,
    pub avg_itemsets_per_sequence: f64,
    pub avg_items_per_itemset: f64,
    pub max_qty: u32,
    pub profit_range: (Utility, Utility),
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 1,
            num_sequences: 1000,
            num_items: 100,
            avg_itemsets_per_sequence: 8.0,
            avg_items_per_itemset: 2.0,
            max_qty: 5,
            profit_range: (Utility::from_units(1), Utility::from_units(10)),
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_owned()));
        if self.num_sequences == 0 {
            return bad("num_sequences must be positive");
        }
        if self.num_items == 0 {
            return bad("num_items must be positive");
        }
        if !(self.avg_itemsets_per_sequence.is_finite() && self.avg_itemsets_per_sequence >= 1.0) {
            return bad("avg_itemsets_per_sequence must be at least 1");
        }
        if !(self.avg_items_per_itemset.is_finite() && self.avg_items_per_itemset >= 1.0) {
            return bad("avg_items_per_itemset must be at least 1");
        }
        if self.max_qty == 0 {
            return bad("max_qty must be positive");
        }
        if self.profit_range.0 > self.profit_range.1 {
            return bad("profit range minimum exceeds maximum");
        }
        Ok(())
    }
}

/// `1 + Geometric(1/mean)`, which has the requested mean.
fn count_distribution(mean: f64) -> Option<Geometric> {
    (mean > 1.0).then(|| Geometric::new(1.0 / mean).expect("probability in (0, 1)"))
}

fn draw_count<R: Rng>(dist: Option<&Geometric>, rng: &mut R) -> usize {
    1 + dist.map_or(0, |d| d.sample(rng) as usize)
}

fn draw_profit<R: Rng>(range: (Utility, Utility), rng: &mut R) -> Utility {
    let (lo, hi) = range;
    if lo.is_whole() && hi.is_whole() {
        let units = rng.gen_range(lo.raw() / Utility::SCALE..=hi.raw() / Utility::SCALE);
        Utility::from_units(units)
    } else {
        Utility::from_raw(rng.gen_range(lo.raw()..=hi.raw()))
    }
}

/// Deterministic in `config.seed`. Sequence and itemset sizes follow shifted
/// geometric distributions with the configured means; itemset sizes are
/// capped at `num_items`.
pub fn generate_database(config: &GeneratorConfig) -> Result<QSequenceDatabase> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut profits = ProfitTable::new();
    for id in 1..=config.num_items {
        profits.insert(ItemId::new(id)?, draw_profit(config.profit_range, &mut rng));
    }

    let seq_len = count_distribution(config.avg_itemsets_per_sequence);
    let set_len = count_distribution(config.avg_items_per_itemset);
    let n_items = config.num_items as usize;

    let mut sequences = Vec::with_capacity(config.num_sequences);
    for k in 0..config.num_sequences {
        let n_sets = draw_count(seq_len.as_ref(), &mut rng);
        let mut itemsets = Vec::with_capacity(n_sets);
        for _ in 0..n_sets {
            let size = draw_count(set_len.as_ref(), &mut rng).min(n_items);
            let mut picked: Vec<usize> = sample(&mut rng, n_items, size).into_vec();
            picked.sort_unstable();
            let items = picked
                .into_iter()
                .map(|idx| QItem {
                    item: ItemId::new(idx as u32 + 1).expect("positive"),
                    qty: rng.gen_range(1..=config.max_qty),
                })
                .collect();
            itemsets.push(QItemset::new(items)?);
        }
        sequences.push(QSequence::new(k as u32 + 1, itemsets)?);
    }
    QSequenceDatabase::new(sequences, profits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::write_sequences;

    fn small(seed: u64) -> GeneratorConfig {
        GeneratorConfig {
            seed,
            num_sequences: 5,
            num_items: 10,
            ..GeneratorConfig::default()
        }
    }

    fn serialized(db: &QSequenceDatabase) -> String {
        let mut out = Vec::new();
        write_sequences(db, &mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn deterministic_in_seed() {
        let a = generate_database(&small(1)).unwrap();
        let b = generate_database(&small(1)).unwrap();
        assert_eq!(a.len(), 5);
        assert_eq!(a, b);
        let c = generate_database(&small(2)).unwrap();
        assert_ne!(serialized(&a), serialized(&c));
    }

    #[test]
    fn single_item_universe_forces_singletons() {
        let cfg = GeneratorConfig {
            num_items: 1,
            avg_items_per_itemset: 3.0,
            num_sequences: 50,
            ..GeneratorConfig::default()
        };
        let db = generate_database(&cfg).unwrap();
        assert!(db.sequences().iter().flat_map(|s| s.itemsets()).all(|x| x.len() == 1));
    }

    #[test]
    fn means_are_close_to_configuration() {
        let cfg = GeneratorConfig {
            num_sequences: 4000,
            num_items: 200,
            ..GeneratorConfig::default()
        };
        let db = generate_database(&cfg).unwrap();
        let sets: usize = db.sequences().iter().map(|s| s.size()).sum();
        let items: usize = db.sequences().iter().map(|s| s.length()).sum();
        let avg_sets = sets as f64 / db.len() as f64;
        let avg_items = items as f64 / sets as f64;
        assert!((avg_sets - 8.0).abs() < 0.3, "{avg_sets}");
        assert!((avg_items - 2.0).abs() < 0.1, "{avg_items}");
        for (_, p) in db.profits().iter() {
            assert!(p >= Utility::from_units(1) && p <= Utility::from_units(10) && p.is_whole());
        }
    }

    #[test]
    fn invalid_configs() {
        let bad = [
            GeneratorConfig { num_sequences: 0, ..small(1) },
            GeneratorConfig { num_items: 0, ..small(1) },
            GeneratorConfig { max_qty: 0, ..small(1) },
            GeneratorConfig { avg_items_per_itemset: 0.5, ..small(1) },
            GeneratorConfig {
                profit_range: (Utility::from_units(5), Utility::from_units(1)),
                ..small(1)
            },
        ];
        for cfg in bad {
            assert!(matches!(generate_database(&cfg), Err(Error::InvalidParams(_))));
        }
    }
}
