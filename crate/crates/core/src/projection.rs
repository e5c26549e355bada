//! Pseudo-projected databases: per-pattern utility chains and the PEU/RSU
//! upper bounds derived from them.
//!
//! A [`Chus`] holds, for every sequence containing a pattern `t`, the list of
//! ending q-items of `t` (one per itemset, since items are unique inside an
//! itemset) with the best utility of any embedding ending there. Extensions
//! are computed from the parent chain and the sequence matrices alone; the
//! database is never copied.

use crate::error::{Error, Result};
use crate::qseq::{ItemId, Pattern, QSequenceDatabase};
use crate::utility::{build_matrices, Utility, UtilityMatrices};

/// Utility matrices of every sequence of a database, plus the item universe
/// used to index extension accumulators.
#[derive(Debug, Clone)]
pub struct MatrixDb {
    sids: Vec<u32>,
    matrices: Vec<UtilityMatrices>,
    // per matrix: row -> index into `universe`
    globals: Vec<Vec<u32>>,
    universe: Vec<ItemId>,
}

impl MatrixDb {
    pub fn build(db: &QSequenceDatabase) -> Result<Self> {
        let universe = db.distinct_items();
        let mut sids = Vec::with_capacity(db.len());
        let mut matrices = Vec::with_capacity(db.len());
        let mut globals = Vec::with_capacity(db.len());
        for s in db.sequences() {
            let m = build_matrices(s, db.profits())?;
            let g = m
                .items()
                .iter()
                .map(|i| universe.binary_search(i).expect("item in universe") as u32)
                .collect();
            sids.push(s.sid);
            matrices.push(m);
            globals.push(g);
        }
        Ok(MatrixDb {
            sids,
            matrices,
            globals,
            universe,
        })
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self, seq: usize) -> &UtilityMatrices {
        &self.matrices[seq]
    }

    pub fn sid(&self, seq: usize) -> u32 {
        self.sids[seq]
    }

    pub fn universe(&self) -> &[ItemId] {
        &self.universe
    }
}

/// An ending q-item of a pattern: its itemset (1-based) and the maximum
/// utility of the embeddings ending there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UlsElement {
    pub tid: u32,
    pub acu: Utility,
}

/// Utility chain of a pattern in one sequence. `uls` is ordered by ascending
/// tid; each element links to the next one in the vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ucs {
    /// Index of the sequence in the [`MatrixDb`].
    pub seq: u32,
    pub sid: u32,
    pub peu: Utility,
    pub uls: Vec<UlsElement>,
}

impl Ucs {
    pub fn umax(&self) -> Utility {
        self.uls.iter().map(|e| e.acu).max().unwrap_or_default()
    }
}

/// Projection of a pattern: one [`Ucs`] per containing sequence, ascending
/// by sequence position.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Chus {
    ucs: Vec<Ucs>,
}

impl Chus {
    pub fn ucs(&self) -> &[Ucs] {
        &self.ucs
    }

    pub fn sid_set(&self) -> Vec<u32> {
        self.ucs.iter().map(|u| u.sid).collect()
    }

    pub fn support(&self) -> usize {
        self.ucs.len()
    }

    pub fn peu(&self) -> Utility {
        peu(self)
    }

    pub fn umax(&self) -> Utility {
        umax_of(self)
    }
}

/// Sum over containing sequences of the per-sequence prefix extension utility.
pub fn peu(chus: &Chus) -> Utility {
    chus.ucs.iter().map(|u| u.peu).sum()
}

/// Sum over containing sequences of the best embedding utility.
pub fn umax_of(chus: &Chus) -> Utility {
    chus.ucs.iter().map(Ucs::umax).sum()
}

fn element_peu(m: &UtilityMatrices, row: usize, e: &UlsElement) -> Utility {
    let rem = m.rem_at(row, e.tid as usize - 1);
    if rem.is_zero() {
        Utility::ZERO
    } else {
        e.acu + rem
    }
}

fn chain_peu(m: &UtilityMatrices, row: usize, uls: &[UlsElement]) -> Utility {
    uls.iter().map(|e| element_peu(m, row, e)).max().unwrap_or_default()
}

pub fn build_initial_chus(mdb: &MatrixDb, item: ItemId) -> Chus {
    let mut ucs = Vec::new();
    for (k, m) in mdb.matrices.iter().enumerate() {
        let Some(row) = m.row_of(item) else { continue };
        let uls: Vec<UlsElement> = m
            .occurrences(row)
            .iter()
            .map(|&c| UlsElement {
                tid: c + 1,
                acu: m.util_at(row, c as usize),
            })
            .collect();
        ucs.push(Ucs {
            seq: k as u32,
            sid: mdb.sids[k],
            peu: chain_peu(m, row, &uls),
            uls,
        });
    }
    Chus { ucs }
}

/// Candidate extension items with their RSU, ascending by item.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Extensions {
    pub i_exts: Vec<(ItemId, Utility)>,
    pub s_exts: Vec<(ItemId, Utility)>,
}

/// Reusable scratch space for [`scan_extensions`].
#[derive(Debug, Default)]
pub struct ExtensionScanner {
    i_acc: Vec<Utility>,
    s_acc: Vec<Utility>,
    i_mark: Vec<u32>,
    s_mark: Vec<u32>,
    i_touched: Vec<u32>,
    s_touched: Vec<u32>,
    i_listed: Vec<bool>,
    s_listed: Vec<bool>,
    stamp: u32,
}

impl ExtensionScanner {
    pub fn new(mdb: &MatrixDb) -> Self {
        let n = mdb.universe.len();
        ExtensionScanner {
            i_acc: vec![Utility::ZERO; n],
            s_acc: vec![Utility::ZERO; n],
            i_mark: vec![0; n],
            s_mark: vec![0; n],
            i_touched: Vec::new(),
            s_touched: Vec::new(),
            i_listed: vec![false; n],
            s_listed: vec![false; n],
            stamp: 0,
        }
    }

    fn next_stamp(&mut self) -> u32 {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.i_mark.fill(0);
            self.s_mark.fill(0);
            self.stamp = 1;
        }
        self.stamp
    }

    /// Collects I- and S-extension items of `t`. The RSU of `t·i` is the sum
    /// of the parent's per-sequence PEU over the sequences where `t·i`
    /// occurs. Both lists are empty once `t` reaches `max_length`.
    pub fn scan(&mut self, t: &Pattern, chus: &Chus, mdb: &MatrixDb, max_length: Option<usize>) -> Extensions {
        if max_length.is_some_and(|l| t.len() >= l) {
            return Extensions::default();
        }
        let last = t.last_item();
        for ucs in &chus.ucs {
            let stamp = self.next_stamp();
            let seq = ucs.seq as usize;
            let m = &mdb.matrices[seq];
            let g = &mdb.globals[seq];
            let last_row = m.row_of(last).expect("ending item present in containing sequence");

            for e in &ucs.uls {
                let col = m.column(e.tid as usize - 1);
                let start = col.partition_point(|&r| r as usize <= last_row);
                for &r in &col[start..] {
                    let gi = g[r as usize] as usize;
                    if self.i_mark[gi] != stamp {
                        self.i_mark[gi] = stamp;
                        if !self.i_listed[gi] {
                            self.i_listed[gi] = true;
                            self.i_touched.push(gi as u32);
                        }
                        self.i_acc[gi] += ucs.peu;
                    }
                }
            }

            let first_tid = ucs.uls.first().map_or(usize::MAX, |e| e.tid as usize);
            for c in first_tid..m.n_itemsets() {
                for &r in m.column(c) {
                    let gi = g[r as usize] as usize;
                    if self.s_mark[gi] != stamp {
                        self.s_mark[gi] = stamp;
                        if !self.s_listed[gi] {
                            self.s_listed[gi] = true;
                            self.s_touched.push(gi as u32);
                        }
                        self.s_acc[gi] += ucs.peu;
                    }
                }
            }
        }

        let universe = &mdb.universe;
        let drain = |acc: &mut Vec<Utility>, listed: &mut Vec<bool>, touched: &mut Vec<u32>| {
            touched.sort_unstable();
            let out = touched
                .iter()
                .map(|&gi| {
                    listed[gi as usize] = false;
                    let v = std::mem::take(&mut acc[gi as usize]);
                    (universe[gi as usize], v)
                })
                .collect::<Vec<_>>();
            touched.clear();
            out
        };
        Extensions {
            i_exts: drain(&mut self.i_acc, &mut self.i_listed, &mut self.i_touched),
            s_exts: drain(&mut self.s_acc, &mut self.s_listed, &mut self.s_touched),
        }
    }
}

pub fn scan_extensions(t: &Pattern, chus: &Chus, mdb: &MatrixDb, max_length: Option<usize>) -> Extensions {
    ExtensionScanner::new(mdb).scan(t, chus, mdb, max_length)
}

/// Projection of `t·i` where `i` joins the last itemset. Ending q-items of
/// the child are occurrences of `i` in the same itemset as an ending q-item
/// of `t`.
pub fn i_extend_chus(t: &Pattern, item: ItemId, chus: &Chus, mdb: &MatrixDb) -> Result<Chus> {
    let last = t.last_item();
    if item <= last {
        return Err(Error::ExtensionOrder { item, last });
    }
    let mut ucs = Vec::new();
    for parent in &chus.ucs {
        let m = &mdb.matrices[parent.seq as usize];
        let Some(row) = m.row_of(item) else { continue };
        let uls: Vec<UlsElement> = parent
            .uls
            .iter()
            .filter(|e| m.present_at(row, e.tid as usize - 1))
            .map(|e| UlsElement {
                tid: e.tid,
                acu: e.acu + m.util_at(row, e.tid as usize - 1),
            })
            .collect();
        if uls.is_empty() {
            continue;
        }
        ucs.push(Ucs {
            seq: parent.seq,
            sid: parent.sid,
            peu: chain_peu(m, row, &uls),
            uls,
        });
    }
    Ok(Chus { ucs })
}

/// Projection of `t` followed by the 1-itemset `(i)`. Each occurrence of `i`
/// after the first ending q-item of `t` becomes an ending q-item, combined
/// with the best parent element strictly before it.
pub fn s_extend_chus(item: ItemId, chus: &Chus, mdb: &MatrixDb) -> Chus {
    let mut ucs = Vec::new();
    for parent in &chus.ucs {
        let m = &mdb.matrices[parent.seq as usize];
        let Some(row) = m.row_of(item) else { continue };
        let mut uls = Vec::new();
        let mut best: Option<Utility> = None;
        let mut k = 0;
        for &c in m.occurrences(row) {
            let tid = c + 1;
            while k < parent.uls.len() && parent.uls[k].tid < tid {
                best = Some(best.map_or(parent.uls[k].acu, |b| b.max(parent.uls[k].acu)));
                k += 1;
            }
            if let Some(b) = best {
                uls.push(UlsElement {
                    tid,
                    acu: b + m.util_at(row, c as usize),
                });
            }
        }
        if uls.is_empty() {
            continue;
        }
        ucs.push(Ucs {
            seq: parent.seq,
            sid: parent.sid,
            peu: chain_peu(m, row, &uls),
            uls,
        });
    }
    Chus { ucs }
}

pub fn i_extend(t: &Pattern, item: ItemId, chus: &Chus, mdb: &MatrixDb) -> Result<(Pattern, Chus)> {
    let child = i_extend_chus(t, item, chus, mdb)?;
    Ok((t.i_extended(item)?, child))
}

pub fn s_extend(t: &Pattern, item: ItemId, chus: &Chus, mdb: &MatrixDb) -> (Pattern, Chus) {
    (t.s_extended(item), s_extend_chus(item, chus, mdb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::{letter_item, pat, toy_database};
    use crate::oracle::{oracle_support, oracle_umax};

    fn u(n: u64) -> Utility {
        Utility::from_units(n)
    }

    fn li(c: char) -> ItemId {
        letter_item(c).unwrap()
    }

    fn setup() -> (QSequenceDatabase, MatrixDb) {
        let db = toy_database();
        let mdb = MatrixDb::build(&db).unwrap();
        (db, mdb)
    }

    /// Builds the projection of a letter pattern by replaying its extensions.
    fn project(text: &str, mdb: &MatrixDb) -> Chus {
        let p = pat(text);
        let mut cur = Pattern::singleton(p.itemsets()[0][0]);
        let mut chus = build_initial_chus(mdb, cur.last_item());
        for (k, x) in p.itemsets().iter().enumerate() {
            for (j, &i) in x.iter().enumerate() {
                if k == 0 && j == 0 {
                    continue;
                }
                (cur, chus) = if j == 0 {
                    s_extend(&cur, i, &chus, mdb)
                } else {
                    i_extend(&cur, i, &chus, mdb).unwrap()
                };
            }
        }
        assert_eq!(cur, p);
        chus
    }

    fn uls_of(chus: &Chus, sid: u32) -> Vec<(u32, u64)> {
        chus.ucs()
            .iter()
            .find(|u| u.sid == sid)
            .map(|u| u.uls.iter().map(|e| (e.tid, e.acu.raw() / Utility::SCALE)).collect())
            .unwrap_or_default()
    }

    #[test]
    fn initial_chus_of_b_in_s3() {
        let (_, mdb) = setup();
        let chus = build_initial_chus(&mdb, li('b'));
        assert_eq!(uls_of(&chus, 3), vec![(1, 5), (3, 10)]);
    }

    #[test]
    fn initial_chus_of_g_in_s5_has_zero_peu() {
        let (_, mdb) = setup();
        let chus = build_initial_chus(&mdb, li('g'));
        let s5 = chus.ucs().iter().find(|u| u.sid == 5).unwrap();
        assert_eq!(uls_of(&chus, 5), vec![(1, 70)]);
        assert_eq!(s5.peu, Utility::ZERO);
        assert!(!build_initial_chus(&mdb, li('d')).sid_set().contains(&2));
    }

    #[test]
    fn peu_of_a_in_s3() {
        let (_, mdb) = setup();
        let chus = build_initial_chus(&mdb, li('a'));
        let s3 = chus.ucs().iter().find(|u| u.sid == 3).unwrap();
        assert_eq!(s3.peu, u(91));
    }

    #[test]
    fn peu_of_a_matches_brute_force() {
        // best occurrence utility plus remaining utility, per sequence:
        // s1: max(10+98, 6+51) = 108; s2: 4+94 = 98; s3: 2+89 = 91;
        // s4: 6+61 = 67; s5: 8+80 = 88.
        let (_, mdb) = setup();
        assert_eq!(build_initial_chus(&mdb, li('a')).peu(), u(108 + 98 + 91 + 67 + 88));
    }

    #[test]
    fn all_final_endings_have_zero_peu() {
        let (_, mdb) = setup();
        let chus = build_initial_chus(&mdb, li('g'));
        let only_s5 = Chus {
            ucs: chus.ucs().iter().filter(|u| u.sid == 5).cloned().collect(),
        };
        assert_eq!(peu(&only_s5), Utility::ZERO);
    }

    #[test]
    fn umax_examples() {
        let (_, mdb) = setup();
        assert_eq!(umax_of(&project("(c)(b)", &mdb)), u(72));
        assert_eq!(umax_of(&project("(g)", &mdb)), u(203));
        let cg = project("(cg)", &mdb);
        assert_eq!((cg.umax(), cg.support()), (u(154), 4));
        let cgbe = project("(cg)(be)", &mdb);
        assert_eq!((cgbe.umax(), cgbe.support()), (u(186), 3));
    }

    #[test]
    fn s_extension_of_b_with_d_in_s3() {
        let (_, mdb) = setup();
        let chus = project("(b)(d)", &mdb);
        assert_eq!(uls_of(&chus, 3), vec![(2, 13), (4, 22)]);
    }

    #[test]
    fn i_extension_of_b_with_e_in_s4() {
        let (_, mdb) = setup();
        let chus = project("(be)", &mdb);
        // b+e in each itemset of s4: 5+12, 10+24, 10+12
        assert_eq!(uls_of(&chus, 4), vec![(1, 17), (2, 34), (3, 22)]);
    }

    #[test]
    fn i_extension_order_enforced() {
        let (_, mdb) = setup();
        let chus = build_initial_chus(&mdb, li('a'));
        assert!(matches!(
            i_extend(&pat("(a)"), li('a'), &chus, &mdb),
            Err(Error::ExtensionOrder { .. })
        ));
    }

    #[test]
    fn s_extension_after_last_itemset_leaves_sid_set() {
        let (_, mdb) = setup();
        let g = build_initial_chus(&mdb, li('g'));
        for &i in mdb.universe() {
            assert!(!s_extend_chus(i, &g, &mdb).sid_set().contains(&5));
        }
    }

    #[test]
    fn scan_examples() {
        let (_, mdb) = setup();
        let c = build_initial_chus(&mdb, li('c'));
        let ext = scan_extensions(&pat("(c)"), &c, &mdb, None);
        assert!(ext.s_exts.iter().any(|&(i, _)| i == li('b')));
        let a = build_initial_chus(&mdb, li('a'));
        let ext = scan_extensions(&pat("(a)"), &a, &mdb, None);
        assert!(ext.i_exts.iter().any(|&(i, _)| i == li('b')));
        assert!(ext.i_exts.iter().all(|&(i, _)| i > li('a')));
        assert_eq!(scan_extensions(&pat("(a)"), &a, &mdb, Some(1)), Extensions::default());
    }

    #[test]
    fn rsu_is_parent_peu_over_child_sequences() {
        let (db, mdb) = setup();
        let c = build_initial_chus(&mdb, li('c'));
        let ext = scan_extensions(&pat("(c)"), &c, &mdb, None);
        for &(i, rsu) in &ext.s_exts {
            let child = pat("(c)").s_extended(i);
            let expected: Utility = c
                .ucs()
                .iter()
                .filter(|u| crate::qseq::matches(&db.sequences()[u.seq as usize], &child))
                .map(|u| u.peu)
                .sum();
            assert_eq!(rsu, expected, "item {i}");
            assert!(oracle_umax(&child, &db).unwrap() <= rsu);
        }
    }

    #[test]
    fn projections_agree_with_oracle_on_toy_patterns() {
        let (db, mdb) = setup();
        for text in ["(cg)(abf)(be)", "(cg)(ab)(be)", "(g)(be)", "(bceg)", "(c)(abf)(be)", "(a)(be)", "(ab)(be)"] {
            let chus = project(text, &mdb);
            let p = pat(text);
            assert_eq!(chus.umax(), oracle_umax(&p, &db).unwrap(), "{text}");
            assert_eq!(chus.support(), oracle_support(&p, &db).unwrap(), "{text}");
        }
    }
}
