use crate::error::Result;
use crate::qseq::{ItemId, ProfitTable, QSequence};
use crate::utility::{item_utility, Utility};

/// Dense utility and remaining-utility matrices of one q-sequence.
///
/// Rows are the distinct items of the sequence in ascending order, columns
/// are its itemsets. Remaining utility follows position order: itemset-major,
/// then ascending item inside an itemset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityMatrices {
    items: Vec<ItemId>,
    n_itemsets: usize,
    util: Vec<Utility>,
    rem: Vec<Utility>,
    present: Vec<bool>,
    // rows present in each itemset, ascending
    columns: Vec<Vec<u32>>,
    // itemset columns holding each row, ascending
    occurrences: Vec<Vec<u32>>,
    total: Utility,
}

pub fn build_matrices(s: &QSequence, profits: &ProfitTable) -> Result<UtilityMatrices> {
    let mut items: Vec<ItemId> = s.qitems().map(|q| q.item).collect();
    items.sort_unstable();
    items.dedup();

    let rows = items.len();
    let cols = s.size();
    let mut util = vec![Utility::ZERO; rows * cols];
    let mut present = vec![false; rows * cols];
    let mut columns = Vec::with_capacity(cols);
    let mut occurrences = vec![Vec::new(); rows];
    let mut total = Utility::ZERO;

    for (j, x) in s.itemsets().iter().enumerate() {
        let mut col = Vec::with_capacity(x.len());
        for q in x.items() {
            let r = items.binary_search(&q.item).expect("item collected above");
            let u = item_utility(q.item, q.qty, profits)?;
            util[r * cols + j] = u;
            present[r * cols + j] = true;
            col.push(r as u32);
            occurrences[r].push(j as u32);
            total += u;
        }
        columns.push(col);
    }

    let mut rem = vec![Utility::ZERO; rows * cols];
    let mut consumed = Utility::ZERO;
    for (j, col) in columns.iter().enumerate() {
        for &r in col {
            let idx = r as usize * cols + j;
            consumed += util[idx];
            rem[idx] = total.saturating_sub(consumed);
        }
    }

    Ok(UtilityMatrices {
        items,
        n_itemsets: cols,
        util,
        rem,
        present,
        columns,
        occurrences,
        total,
    })
}

impl UtilityMatrices {
    pub fn items(&self) -> &[ItemId] {
        &self.items
    }

    pub fn n_itemsets(&self) -> usize {
        self.n_itemsets
    }

    /// Utility of the whole sequence.
    pub fn total(&self) -> Utility {
        self.total
    }

    pub fn row_of(&self, item: ItemId) -> Option<usize> {
        self.items.binary_search(&item).ok()
    }

    /// Utility of `item` in itemset `tid` (1-based); zero when absent.
    pub fn util(&self, item: ItemId, tid: usize) -> Utility {
        self.lookup(&self.util, item, tid)
    }

    /// Remaining utility after `item` in itemset `tid` (1-based); zero when
    /// absent.
    pub fn rem_util(&self, item: ItemId, tid: usize) -> Utility {
        self.lookup(&self.rem, item, tid)
    }

    fn lookup(&self, m: &[Utility], item: ItemId, tid: usize) -> Utility {
        match self.row_of(item) {
            Some(r) if (1..=self.n_itemsets).contains(&tid) => m[r * self.n_itemsets + tid - 1],
            _ => Utility::ZERO,
        }
    }

    // Row/column accessors below take a row index and a 0-based column.

    #[inline]
    pub fn util_at(&self, row: usize, col: usize) -> Utility {
        self.util[row * self.n_itemsets + col]
    }

    #[inline]
    pub fn rem_at(&self, row: usize, col: usize) -> Utility {
        self.rem[row * self.n_itemsets + col]
    }

    #[inline]
    pub fn present_at(&self, row: usize, col: usize) -> bool {
        self.present[row * self.n_itemsets + col]
    }

    pub fn column(&self, col: usize) -> &[u32] {
        &self.columns[col]
    }

    pub fn occurrences(&self, row: usize) -> &[u32] {
        &self.occurrences[row]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::{letter_item, toy_database};

    fn u(n: u64) -> Utility {
        Utility::from_units(n)
    }

    #[test]
    fn s3_utility_and_remaining_matrices() {
        let db = toy_database();
        let m = build_matrices(&db.sequences()[2], db.profits()).unwrap();
        let letters: String = m.items().iter().map(|&i| crate::fixture::item_letter(i).unwrap()).collect();
        assert_eq!(letters, "abcdeg");
        let util = [[2, 0, 0, 0], [5, 0, 10, 0], [0, 9, 0, 0], [0, 8, 0, 12], [18, 0, 6, 0], [0, 21, 0, 0]];
        let rem = [[89, 0, 0, 0], [84, 0, 18, 0], [0, 57, 0, 0], [0, 49, 0, 0], [66, 0, 12, 0], [0, 28, 0, 0]];
        for (r, &item) in m.items().iter().enumerate() {
            for tid in 1..=4 {
                assert_eq!(m.util(item, tid), u(util[r][tid - 1]), "util row {r} tid {tid}");
                assert_eq!(m.rem_util(item, tid), u(rem[r][tid - 1]), "rem row {r} tid {tid}");
            }
        }
        assert_eq!(m.total(), u(91));
    }

    #[test]
    fn single_qitem_sequence() {
        use crate::qseq::{QItem, QItemset};
        let a = letter_item('a').unwrap();
        let s = QSequence::new(1, vec![QItemset::new(vec![QItem { item: a, qty: 1 }]).unwrap()]).unwrap();
        let m = build_matrices(&s, toy_database().profits()).unwrap();
        assert_eq!(m.util(a, 1), u(2));
        assert_eq!(m.rem_util(a, 1), Utility::ZERO);
    }

    #[test]
    fn out_of_range_lookups_are_zero() {
        let db = toy_database();
        let m = build_matrices(&db.sequences()[4], db.profits()).unwrap();
        let b = letter_item('b').unwrap();
        let a = letter_item('a').unwrap();
        assert_eq!(m.util(b, 1), Utility::ZERO);
        assert_eq!(m.util(a, 0), Utility::ZERO);
        assert_eq!(m.util(a, 2), Utility::ZERO);
    }
}
