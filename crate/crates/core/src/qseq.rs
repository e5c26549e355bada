//! Quantitative sequences, quantity-free patterns, and the containment and
//! matching predicates between them.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::utility::Utility;

/// Item identifier. The numeric order is the lexicographic item order used
/// everywhere (itemsets, extensions, output).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(u32);

impl ItemId {
    pub fn new(id: u32) -> Result<Self> {
        if id == 0 {
            return Err(Error::InvalidPattern("item ids start at 1".into()));
        }
        Ok(ItemId(id))
    }

    pub const fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Unit profit (external utility) of each item.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProfitTable {
    entries: BTreeMap<ItemId, Utility>,
}

impl ProfitTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the previous profit if the item was already present.
    pub fn insert(&mut self, item: ItemId, profit: Utility) -> Option<Utility> {
        self.entries.insert(item, profit)
    }

    pub fn get(&self, item: ItemId) -> Option<Utility> {
        self.entries.get(&item).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ItemId, Utility)> + '_ {
        self.entries.iter().map(|(&i, &p)| (i, p))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl FromIterator<(ItemId, Utility)> for ProfitTable {
    fn from_iter<I: IntoIterator<Item = (ItemId, Utility)>>(iter: I) -> Self {
        ProfitTable {
            entries: iter.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QItem {
    pub item: ItemId,
    pub qty: u32,
}

/// A non-empty itemset with quantities, strictly ascending by item.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QItemset(Vec<QItem>);

impl QItemset {
    pub fn new(items: Vec<QItem>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidDatabase("empty itemset".into()));
        }
        for q in &items {
            if q.qty == 0 {
                return Err(Error::InvalidQuantity { item: q.item, qty: q.qty });
            }
        }
        if let Some(w) = items.windows(2).find(|w| w[0].item >= w[1].item) {
            return Err(Error::InvalidDatabase(format!(
                "itemset not strictly ascending at items {} and {}",
                w[0].item, w[1].item
            )));
        }
        Ok(QItemset(items))
    }

    pub fn items(&self) -> &[QItem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn position(&self, item: ItemId) -> Option<usize> {
        self.0.binary_search_by_key(&item, |q| q.item).ok()
    }

    pub fn contains_item(&self, item: ItemId) -> bool {
        self.position(item).is_some()
    }

    /// Item-level subset test: every item of `items` (ascending) occurs here.
    pub fn contains_items(&self, items: &[ItemId]) -> bool {
        let mut it = self.0.iter();
        items.iter().all(|&want| it.by_ref().any(|q| q.item == want))
    }

    /// q-itemset containment: every q-item of `other` occurs here with the
    /// same quantity.
    pub fn contains_qitemset(&self, other: &QItemset) -> bool {
        let mut it = self.0.iter();
        other.0.iter().all(|want| it.by_ref().any(|q| q == want))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSequence {
    pub sid: u32,
    itemsets: Vec<QItemset>,
}

impl QSequence {
    pub fn new(sid: u32, itemsets: Vec<QItemset>) -> Result<Self> {
        if itemsets.is_empty() {
            return Err(Error::InvalidDatabase(format!("sequence {sid} is empty")));
        }
        Ok(QSequence { sid, itemsets })
    }

    pub fn itemsets(&self) -> &[QItemset] {
        &self.itemsets
    }

    /// Number of itemsets.
    pub fn size(&self) -> usize {
        self.itemsets.len()
    }

    /// Number of q-items.
    pub fn length(&self) -> usize {
        self.itemsets.iter().map(QItemset::len).sum()
    }

    pub fn qitems(&self) -> impl Iterator<Item = &QItem> {
        self.itemsets.iter().flat_map(|x| x.items())
    }

    pub fn contains_item(&self, item: ItemId) -> bool {
        self.itemsets.iter().any(|x| x.contains_item(item))
    }

    /// q-subsequence test with quantity equality on every matched q-item.
    pub fn is_q_subsequence_of(&self, other: &QSequence) -> bool {
        let mut it = other.itemsets.iter();
        self.itemsets
            .iter()
            .all(|want| it.by_ref().any(|x| x.contains_qitemset(want)))
    }
}

/// A quantitative sequence database with its profit table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSequenceDatabase {
    sequences: Vec<QSequence>,
    profits: ProfitTable,
}

impl QSequenceDatabase {
    /// Validates sid uniqueness, profit coverage and that the total database
    /// utility fits the utility range.
    pub fn new(sequences: Vec<QSequence>, profits: ProfitTable) -> Result<Self> {
        if sequences.is_empty() {
            return Err(Error::NoSequences);
        }
        let mut seen = HashSet::with_capacity(sequences.len());
        let mut total = Utility::ZERO;
        for s in &sequences {
            if !seen.insert(s.sid) {
                return Err(Error::InvalidDatabase(format!("duplicate sid {}", s.sid)));
            }
            for q in s.qitems() {
                let p = profits.get(q.item).ok_or(Error::UnknownItem(q.item))?;
                let u = p.checked_mul_qty(q.qty).ok_or(Error::Overflow)?;
                total = total.checked_add(u).ok_or(Error::Overflow)?;
            }
        }
        Ok(QSequenceDatabase { sequences, profits })
    }

    pub fn sequences(&self) -> &[QSequence] {
        &self.sequences
    }

    pub fn profits(&self) -> &ProfitTable {
        &self.profits
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    /// Distinct items occurring in the sequences, ascending.
    pub fn distinct_items(&self) -> Vec<ItemId> {
        let mut items: Vec<ItemId> = self.sequences.iter().flat_map(|s| s.qitems().map(|q| q.item)).collect();
        items.sort_unstable();
        items.dedup();
        items
    }
}

/// A quantity-free sequence of itemsets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    itemsets: Vec<Vec<ItemId>>,
}

impl Pattern {
    pub fn new(itemsets: Vec<Vec<ItemId>>) -> Result<Self> {
        if itemsets.is_empty() {
            return Err(Error::InvalidPattern("pattern has no itemsets".into()));
        }
        for x in &itemsets {
            if x.is_empty() {
                return Err(Error::InvalidPattern("empty itemset".into()));
            }
            if x.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidPattern("itemset not strictly ascending".into()));
            }
        }
        Ok(Pattern { itemsets })
    }

    pub fn singleton(item: ItemId) -> Self {
        Pattern {
            itemsets: vec![vec![item]],
        }
    }

    pub fn itemsets(&self) -> &[Vec<ItemId>] {
        &self.itemsets
    }

    /// Total item count.
    pub fn len(&self) -> usize {
        self.itemsets.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.itemsets.is_empty()
    }

    /// Itemset count.
    pub fn size(&self) -> usize {
        self.itemsets.len()
    }

    pub fn last_item(&self) -> ItemId {
        *self.itemsets.last().and_then(|x| x.last()).expect("patterns are non-empty")
    }

    /// Inserts `item` into the last itemset. It must sort after every item
    /// already there.
    pub fn i_extended(&self, item: ItemId) -> Result<Pattern> {
        let last = self.last_item();
        if item <= last {
            return Err(Error::ExtensionOrder { item, last });
        }
        let mut itemsets = self.itemsets.clone();
        itemsets.last_mut().expect("non-empty").push(item);
        Ok(Pattern { itemsets })
    }

    /// Appends the 1-itemset `(item)`.
    pub fn s_extended(&self, item: ItemId) -> Pattern {
        let mut itemsets = self.itemsets.clone();
        itemsets.push(vec![item]);
        Pattern { itemsets }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for x in &self.itemsets {
            f.write_str("(")?;
            for (k, i) in x.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{i}")?;
            }
            f.write_str(")")?;
        }
        f.write_str(">")
    }
}

fn is_sorted_subset(sub: &[ItemId], sup: &[ItemId]) -> bool {
    let mut it = sup.iter();
    sub.iter().all(|want| it.by_ref().any(|i| i == want))
}

/// `true` iff `sub` is a (not necessarily proper) subsequence of `sup`:
/// its itemsets map, in order, to subsets of strictly increasing itemsets of
/// `sup`.
pub fn pattern_contains(sup: &Pattern, sub: &Pattern) -> bool {
    if sub.size() > sup.size() || sub.len() > sup.len() {
        return false;
    }
    let mut it = sup.itemsets.iter();
    sub.itemsets
        .iter()
        .all(|want| it.by_ref().any(|x| is_sorted_subset(want, x)))
}

/// `true` iff some q-subsequence of `s`, with quantities stripped, equals `t`.
pub fn matches(s: &QSequence, t: &Pattern) -> bool {
    let mut it = s.itemsets.iter();
    t.itemsets
        .iter()
        .all(|want| it.by_ref().any(|x| x.contains_items(want)))
}

/// One itemset of an embedding: the 1-based tid and the offsets, inside that
/// q-itemset, of the matched q-items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchedItemset {
    pub tid: usize,
    pub offsets: Vec<usize>,
}

/// A concrete choice of q-item occurrences realizing a pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub itemsets: Vec<MatchedItemset>,
}

impl Embedding {
    pub fn utility(&self, s: &QSequence, profits: &ProfitTable) -> Result<Utility> {
        let mut total = Utility::ZERO;
        for m in &self.itemsets {
            let x = &s.itemsets[m.tid - 1];
            for &o in &m.offsets {
                let q = x.items()[o];
                total += crate::utility::item_utility(q.item, q.qty, profits)?;
            }
        }
        Ok(total)
    }

    /// tid of the itemset holding the ending q-item.
    pub fn ending_tid(&self) -> usize {
        self.itemsets.last().map_or(0, |m| m.tid)
    }
}

/// Every embedding of `t` in `s`, ordered lexicographically by chosen tids.
///
/// Items are unique within an itemset, so an embedding is fully determined by
/// its tid sequence. Exponential in the worst case; meant for small inputs.
pub fn enumerate_embeddings(s: &QSequence, t: &Pattern) -> Vec<Embedding> {
    fn offsets_in(x: &QItemset, items: &[ItemId]) -> Option<Vec<usize>> {
        items.iter().map(|&i| x.position(i)).collect()
    }

    fn walk(s: &QSequence, t: &Pattern, k: usize, from: usize, cur: &mut Vec<MatchedItemset>, out: &mut Vec<Embedding>) {
        if k == t.itemsets.len() {
            out.push(Embedding { itemsets: cur.clone() });
            return;
        }
        // leave room for the remaining pattern itemsets
        let last = s.itemsets.len() - (t.itemsets.len() - k - 1);
        for j in from..last {
            if let Some(offsets) = offsets_in(&s.itemsets[j], &t.itemsets[k]) {
                cur.push(MatchedItemset { tid: j + 1, offsets });
                walk(s, t, k + 1, j + 1, cur, out);
                cur.pop();
            }
        }
    }

    let mut out = Vec::new();
    if t.size() <= s.size() {
        walk(s, t, 0, 0, &mut Vec::with_capacity(t.size()), &mut out);
    }
    out
}
