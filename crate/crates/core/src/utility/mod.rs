//! Utilities of q-items and q-sequences, per-sequence utility matrices, and
//! sequence-weighted utilization (SWU).

mod amount;
mod matrix;

use std::collections::BTreeMap;

pub use amount::{ParseUtilityError, Utility};
pub use matrix::{build_matrices, UtilityMatrices};

use crate::error::{Error, Result};
use crate::qseq::{matches, ItemId, Pattern, ProfitTable, QSequence, QSequenceDatabase};

/// `p(i) * q`.
pub fn item_utility(item: ItemId, qty: u32, profits: &ProfitTable) -> Result<Utility> {
    if qty == 0 {
        return Err(Error::InvalidQuantity { item, qty });
    }
    let p = profits.get(item).ok_or(Error::UnknownItem(item))?;
    p.checked_mul_qty(qty).ok_or(Error::Overflow)
}

/// Sum of all q-item utilities of `s`.
pub fn sequence_utility(s: &QSequence, profits: &ProfitTable) -> Result<Utility> {
    s.qitems().map(|q| item_utility(q.item, q.qty, profits)).sum()
}

/// SWU of every single item of the database.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SwuTable(BTreeMap<ItemId, Utility>);

impl SwuTable {
    /// Zero for items absent from the database.
    pub fn get(&self, item: ItemId) -> Utility {
        self.0.get(&item).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ItemId, Utility)> + '_ {
        self.0.iter().map(|(&i, &u)| (i, u))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn compute_swu_per_item(db: &QSequenceDatabase) -> SwuTable {
    let mut table = BTreeMap::new();
    let mut items = Vec::new();
    for s in db.sequences() {
        let su = sequence_utility(s, db.profits()).expect("database validated");
        items.clear();
        items.extend(s.qitems().map(|q| q.item));
        items.sort_unstable();
        items.dedup();
        for &i in &items {
            *table.entry(i).or_insert(Utility::ZERO) += su;
        }
    }
    SwuTable(table)
}

/// Sum of `u(s)` over the sequences matching `t`.
pub fn swu_of_pattern(t: &Pattern, db: &QSequenceDatabase) -> Utility {
    db.sequences()
        .iter()
        .filter(|s| matches(s, t))
        .map(|s| sequence_utility(s, db.profits()).expect("database validated"))
        .sum()
}
