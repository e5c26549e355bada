//! Brute-force reference miner.
//!
//! Every pattern occurring in the database is enumerated level by level with
//! plain I-/S-extensions and no pruning. Utilities come from explicit
//! embedding enumeration and supports from the matching predicate, so none
//! of the projection machinery is involved.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::miner::{resolve_min_sup, MinedPattern, MiningParams, Mode};
use crate::qseq::{enumerate_embeddings, matches, pattern_contains, Pattern, QSequenceDatabase};
use crate::utility::Utility;

/// Caps guarding the exponential enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_sequences: usize,
    pub max_distinct_items: usize,
    pub max_pattern_length: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_sequences: 8,
            max_distinct_items: 6,
            max_pattern_length: 8,
        }
    }
}

impl OracleLimits {
    /// Limits wide enough for the seven-item toy database.
    pub fn toy() -> Self {
        OracleLimits {
            max_sequences: 8,
            max_distinct_items: 7,
            max_pattern_length: 11,
        }
    }

    /// Checks the database against the limits. Patterns are enumerated up to
    /// `max_pattern_length` items, so every sequence must fit in it unless
    /// the mining length cap is tighter.
    pub fn check(&self, db: &QSequenceDatabase, max_length: Option<usize>) -> Result<()> {
        if db.len() > self.max_sequences {
            return Err(Error::OracleLimit(format!(
                "{} sequences (max {})",
                db.len(),
                self.max_sequences
            )));
        }
        let items = db.distinct_items().len();
        if items > self.max_distinct_items {
            return Err(Error::OracleLimit(format!(
                "{items} distinct items (max {})",
                self.max_distinct_items
            )));
        }
        let cap = max_length.unwrap_or(usize::MAX);
        if cap > self.max_pattern_length {
            if let Some(s) = db.sequences().iter().find(|s| s.length() > self.max_pattern_length) {
                return Err(Error::OracleLimit(format!(
                    "sequence {} has {} q-items (max pattern length {})",
                    s.sid,
                    s.length(),
                    self.max_pattern_length
                )));
            }
        }
        Ok(())
    }

    /// Single-pattern evaluation only enumerates embeddings of `t`, so the
    /// item count does not matter.
    fn check_pattern(&self, t: &Pattern, db: &QSequenceDatabase) -> Result<()> {
        if db.len() > self.max_sequences {
            return Err(Error::OracleLimit(format!("{} sequences (max {})", db.len(), self.max_sequences)));
        }
        if t.len() > self.max_pattern_length {
            return Err(Error::OracleLimit(format!(
                "pattern length {} (max {})",
                t.len(),
                self.max_pattern_length
            )));
        }
        Ok(())
    }
}

fn umax_unchecked(t: &Pattern, db: &QSequenceDatabase) -> Utility {
    db.sequences()
        .iter()
        .map(|s| {
            enumerate_embeddings(s, t)
                .iter()
                .map(|e| e.utility(s, db.profits()).expect("database validated"))
                .max()
                .unwrap_or_default()
        })
        .sum()
}

fn support_unchecked(t: &Pattern, db: &QSequenceDatabase) -> usize {
    db.sequences().iter().filter(|s| matches(s, t)).count()
}


/// Sum over sequences of the best embedding utility of `t`.
pub fn oracle_umax(t: &Pattern, db: &QSequenceDatabase) -> Result<Utility> {
    OracleLimits::default().check_pattern(t, db)?;
    Ok(umax_unchecked(t, db))
}

/// Number of sequences containing `t`.
pub fn oracle_support(t: &Pattern, db: &QSequenceDatabase) -> Result<usize> {
    OracleLimits::default().check_pattern(t, db)?;
    Ok(support_unchecked(t, db))
}

/// Every pattern with support at least 1 and at most `max_len` items.
pub fn enumerate_patterns(db: &QSequenceDatabase, max_len: usize) -> Vec<Pattern> {
    let items = db.distinct_items();
    let mut all = Vec::new();
    let mut level: BTreeSet<Pattern> = items
        .iter()
        .map(|&i| Pattern::singleton(i))
        .filter(|t| support_unchecked(t, db) > 0)
        .collect();
    let mut len = 1;
    while !level.is_empty() {
        all.extend(level.iter().cloned());
        if len >= max_len {
            break;
        }
        let mut next = BTreeSet::new();
        for t in &level {
            let last = t.last_item();
            let i_children = items.iter().filter(|&&i| i > last).map(|&i| t.i_extended(i).expect("ordered"));
            let s_children = items.iter().map(|&i| t.s_extended(i));
            for child in i_children.chain(s_children) {
                if support_unchecked(&child, db) > 0 {
                    next.insert(child);
                }
            }
        }
        level = next;
        len += 1;
    }
    all
}

/// Mines by definition: HUSPs, FHUSPs, or CHUSPs (pairwise containment among
/// equal-support FHUSPs). The pattern universe is every pattern occurring in
/// at least one sequence.
pub fn oracle_mine(db: &QSequenceDatabase, params: &MiningParams, limits: &OracleLimits) -> Result<Vec<MinedPattern>> {
    params.validate()?;
    limits.check(db, params.max_length)?;
    let max_len = params.max_length.unwrap_or(usize::MAX).min(limits.max_pattern_length);
    let min_sup = match params.mode {
        Mode::Husp => 1,
        _ => resolve_min_sup(params.min_sup, db.len())?,
    };

    let scored: Vec<MinedPattern> = enumerate_patterns(db, max_len)
        .into_iter()
        .map(|pattern| MinedPattern {
            umax: umax_unchecked(&pattern, db),
            support: support_unchecked(&pattern, db),
            pattern,
        })
        .collect();

    let frequent_high: Vec<MinedPattern> = scored
        .into_iter()
        .filter(|m| m.umax >= params.min_util && m.support >= min_sup)
        .collect();

    let mut out = match params.mode {
        Mode::Husp | Mode::Fhusp => frequent_high,
        Mode::Chusp => frequent_high
            .iter()
            .filter(|p| {
                !frequent_high
                    .iter()
                    .any(|q| q.pattern != p.pattern && q.support == p.support && pattern_contains(&q.pattern, &p.pattern))
            })
            .cloned()
            .collect(),
    };
    crate::io::sort_patterns(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::{letters, pat, toy_database};
    use crate::miner::MinSup;
    use crate::qseq::{ItemId, ProfitTable, QItem, QItemset, QSequence};

    #[test]
    fn umax_and_support_examples() {
        let db = toy_database();
        assert_eq!(oracle_umax(&pat("(c)(b)"), &db).unwrap(), Utility::from_units(72));
        assert_eq!(oracle_umax(&pat("(g)(be)"), &db).unwrap(), Utility::from_units(168));
        assert_eq!(oracle_umax(&pat("(f)(f)"), &db).unwrap(), Utility::ZERO);
        assert_eq!(oracle_support(&pat("(cg)"), &db).unwrap(), 4);
        assert_eq!(oracle_support(&pat("(cg)(be)"), &db).unwrap(), 3);
        assert_eq!(oracle_support(&pat("(f)(f)"), &db).unwrap(), 0);
    }

    #[test]
    fn toy_tables() {
        let db = toy_database();
        let husp = oracle_mine(&db, &MiningParams::new(Mode::Husp, Utility::from_units(154)), &OracleLimits::toy()).unwrap();
        let got: BTreeSet<String> = husp.iter().map(|m| letters(&m.pattern)).collect();
        let want: BTreeSet<String> = ["(cg)", "(cg)(be)", "(cg)(abf)(be)", "(g)", "(cg)(ab)(be)", "(g)(be)"]
            .into_iter()
            .map(String::from)
            .collect();
        assert_eq!(got, want);

        let params = MiningParams::new(Mode::Chusp, Utility::from_units(130)).with_min_sup(MinSup::ratio(0.5).unwrap());
        assert_eq!(oracle_mine(&db, &params, &OracleLimits::toy()).unwrap().len(), 8);
        assert!(matches!(oracle_mine(&db, &params, &OracleLimits::default()), Err(Error::OracleLimit(_))));
    }

    #[test]
    fn vacuous_thresholds_return_every_subpattern() {
        let i = |n| ItemId::new(n).unwrap();
        let q = |n, k| QItem { item: i(n), qty: k };
        let s = QSequence::new(
            1,
            vec![QItemset::new(vec![q(1, 1), q(2, 1)]).unwrap(), QItemset::new(vec![q(1, 2)]).unwrap()],
        )
        .unwrap();
        let profits: ProfitTable = [(i(1), Utility::from_units(1)), (i(2), Utility::from_units(1))].into_iter().collect();
        let db = QSequenceDatabase::new(vec![s], profits).unwrap();
        let params = MiningParams::new(Mode::Fhusp, Utility::ZERO).with_min_sup(MinSup::Absolute(1));
        let got: BTreeSet<String> = oracle_mine(&db, &params, &OracleLimits::default())
            .unwrap()
            .iter()
            .map(|m| letters(&m.pattern))
            .collect();
        let want: BTreeSet<String> = ["(a)", "(b)", "(ab)", "(a)(a)", "(b)(a)", "(ab)(a)"]
            .into_iter()
            .map(String::from)
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn limits_enforced() {
        let db = toy_database();
        // 7 distinct items > 6
        let params = MiningParams::new(Mode::Husp, Utility::ZERO);
        assert!(matches!(oracle_mine(&db, &params, &OracleLimits::default()), Err(Error::OracleLimit(_))));
        let roomy = OracleLimits {
            max_sequences: 8,
            max_distinct_items: 7,
            max_pattern_length: 8,
        };
        // s1 and s4 hold 10 and 11 q-items
        assert!(matches!(oracle_mine(&db, &params, &roomy), Err(Error::OracleLimit(_))));
        let capped = params.with_max_length(Some(3));
        assert!(oracle_mine(&db, &capped, &roomy).is_ok());
    }
}
