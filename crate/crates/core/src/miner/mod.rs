//! Pattern-growth mining of high-utility, frequent high-utility, and closed
//! frequent high-utility sequential patterns.
//!
//! The search walks the lexicographic pattern tree depth first. Items whose
//! SWU is below the utility threshold are deleted from the database up
//! front; a node is not expanded when its PEU is below the threshold;
//! extension items are dropped when their RSU is; and in the support-aware
//! modes an infrequent extension cuts its whole subtree. Each rule can be
//! switched off through [`Pruning`] without changing the output.

mod params;
mod state;

use serde::Serialize;

pub use params::{resolve_min_sup, MinSup, MiningParams, Mode};
pub use state::{LogId, LoggedPattern, MinerState};

use crate::error::Result;
use crate::io::sort_patterns;
use crate::projection::{build_initial_chus, i_extend_chus, s_extend_chus, Chus, ExtensionScanner, MatrixDb};
use crate::qseq::{ItemId, Pattern, QItemset, QSequence, QSequenceDatabase};
use crate::utility::{compute_swu_per_item, Utility};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MinedPattern {
    pub pattern: Pattern,
    pub umax: Utility,
    pub support: usize,
}

/// Which pruning rules are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pruning {
    pub swu: bool,
    pub peu: bool,
    pub rsu: bool,
    pub msp: bool,
}

impl Default for Pruning {
    fn default() -> Self {
        Pruning {
            swu: true,
            peu: true,
            rsu: true,
            msp: true,
        }
    }
}

impl Pruning {
    pub const NONE: Pruning = Pruning {
        swu: false,
        peu: false,
        rsu: false,
        msp: false,
    };
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MineOptions {
    pub pruning: Pruning,
    /// Record every parent/child extension with its bounds.
    pub trace: bool,
}

/// Search statistics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    /// Patterns whose projection was built (roots and extensions).
    pub candidates_generated: u64,
    /// Items deleted by the SWU scan.
    pub nodes_pruned_swu: u64,
    /// Nodes left unexpanded because of their PEU.
    pub nodes_pruned_peu: u64,
    /// Extension items dropped because of their RSU.
    pub nodes_pruned_rsu: u64,
    /// Patterns whose subtree was cut for lack of support.
    pub nodes_pruned_msp: u64,
}

impl std::ops::AddAssign for Counters {
    fn add_assign(&mut self, o: Counters) {
        self.candidates_generated += o.candidates_generated;
        self.nodes_pruned_swu += o.nodes_pruned_swu;
        self.nodes_pruned_peu += o.nodes_pruned_peu;
        self.nodes_pruned_rsu += o.nodes_pruned_rsu;
        self.nodes_pruned_msp += o.nodes_pruned_msp;
    }
}

/// One generated extension and the bounds that admitted it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionTrace {
    pub parent: Pattern,
    pub child: Pattern,
    pub parent_peu: Utility,
    pub rsu: Utility,
    pub child_umax: Utility,
    pub child_support: usize,
}

#[derive(Debug, Clone, Default)]
pub struct MiningOutcome {
    /// Result patterns in canonical order.
    pub patterns: Vec<MinedPattern>,
    pub counters: Counters,
    pub trace: Vec<ExtensionTrace>,
}

pub fn mine(db: &QSequenceDatabase, params: &MiningParams) -> Result<MiningOutcome> {
    mine_with(db, params, MineOptions::default())
}

pub fn mine_with(db: &QSequenceDatabase, params: &MiningParams, options: MineOptions) -> Result<MiningOutcome> {
    params.validate()?;
    let min_sup = match params.mode {
        Mode::Husp => 1,
        _ => resolve_min_sup(params.min_sup, db.len())?,
    };
    let mut counters = Counters::default();

    let swu = compute_swu_per_item(db);
    let keep: Vec<ItemId> = swu
        .iter()
        .filter(|&(_, v)| !options.pruning.swu || v >= params.min_util)
        .map(|(i, _)| i)
        .collect();
    counters.nodes_pruned_swu = (swu.len() - keep.len()) as u64;

    let Some(filtered) = retain_items(db, &keep)? else {
        return Ok(MiningOutcome {
            counters,
            ..MiningOutcome::default()
        });
    };
    let mdb = MatrixDb::build(&filtered)?;
    let mut run = Run {
        scanner: ExtensionScanner::new(&mdb),
        mdb: &mdb,
        params,
        min_sup,
        options,
        state: MinerState::new(),
        counters,
        trace: Vec::new(),
    };

    for &item in mdb.universe() {
        let t = Pattern::singleton(item);
        let chus = build_initial_chus(&mdb, item);
        run.counters.candidates_generated += 1;
        if !run.admit(&chus) {
            continue;
        }
        let id = run.record(None, &t, &chus);
        run.expand(&t, &chus, id);
    }

    let Run { state, counters, trace, .. } = run;
    let mut patterns = match params.mode {
        Mode::Chusp => state.final_closed_filter(),
        Mode::Husp | Mode::Fhusp => state.log().iter().map(|lp| lp.mined.clone()).collect(),
    };
    sort_patterns(&mut patterns);
    Ok(MiningOutcome {
        patterns,
        counters,
        trace,
    })
}

/// Copy of `db` restricted to `keep` (ascending). Empty itemsets and
/// sequences disappear; sids are preserved. `None` if nothing is left.
fn retain_items(db: &QSequenceDatabase, keep: &[ItemId]) -> Result<Option<QSequenceDatabase>> {
    let mut sequences = Vec::with_capacity(db.len());
    for s in db.sequences() {
        let mut itemsets = Vec::with_capacity(s.size());
        for x in s.itemsets() {
            let items: Vec<_> = x
                .items()
                .iter()
                .filter(|q| keep.binary_search(&q.item).is_ok())
                .copied()
                .collect();
            if !items.is_empty() {
                itemsets.push(QItemset::new(items)?);
            }
        }
        if !itemsets.is_empty() {
            sequences.push(QSequence::new(s.sid, itemsets)?);
        }
    }
    if sequences.is_empty() {
        return Ok(None);
    }
    QSequenceDatabase::new(sequences, db.profits().clone()).map(Some)
}

struct Run<'a> {
    mdb: &'a MatrixDb,
    scanner: ExtensionScanner,
    params: &'a MiningParams,
    min_sup: usize,
    options: MineOptions,
    state: MinerState,
    counters: Counters,
    trace: Vec<ExtensionTrace>,
}

impl Run<'_> {
    fn support_aware(&self) -> bool {
        self.params.mode != Mode::Husp
    }

    /// Applies minimum-support pruning; `false` cuts the subtree.
    fn admit(&mut self, chus: &Chus) -> bool {
        if self.support_aware() && self.options.pruning.msp && chus.support() < self.min_sup {
            self.counters.nodes_pruned_msp += 1;
            return false;
        }
        true
    }

    /// Logs `t` if it qualifies and returns its log id. In closed mode the
    /// candidate set is updated against the logged parent, if any.
    fn record(&mut self, parent: Option<LogId>, t: &Pattern, chus: &Chus) -> Option<LogId> {
        let support = chus.support();
        if self.support_aware() && support < self.min_sup {
            return None;
        }
        let umax = chus.umax();
        if umax < self.params.min_util {
            return None;
        }
        let mined = MinedPattern {
            pattern: t.clone(),
            umax,
            support,
        };
        let id = self.state.log_pattern(mined, chus.sid_set());
        if self.params.mode == Mode::Chusp {
            match parent {
                Some(p) => self.state.check_closed(p, id),
                None => self.state.add_candidate(id),
            }
        }
        Some(id)
    }

    fn expand(&mut self, t: &Pattern, chus: &Chus, id: Option<LogId>) {
        let min_util = self.params.min_util;
        let peu = chus.peu();
        if self.options.pruning.peu && peu < min_util {
            self.counters.nodes_pruned_peu += 1;
            return;
        }
        let exts = self.scanner.scan(t, chus, self.mdb, self.params.max_length);

        for (item, rsu) in exts.i_exts {
            if self.options.pruning.rsu && rsu < min_util {
                self.counters.nodes_pruned_rsu += 1;
                continue;
            }
            let child_chus = i_extend_chus(t, item, chus, self.mdb).expect("scanned items follow the last item");
            let child = t.i_extended(item).expect("scanned items follow the last item");
            self.visit(t, peu, child, child_chus, rsu, id);
        }
        for (item, rsu) in exts.s_exts {
            if self.options.pruning.rsu && rsu < min_util {
                self.counters.nodes_pruned_rsu += 1;
                continue;
            }
            let child_chus = s_extend_chus(item, chus, self.mdb);
            let child = t.s_extended(item);
            self.visit(t, peu, child, child_chus, rsu, id);
        }
    }

    fn visit(&mut self, parent: &Pattern, parent_peu: Utility, child: Pattern, chus: Chus, rsu: Utility, parent_id: Option<LogId>) {
        self.counters.candidates_generated += 1;
        if self.options.trace {
            self.trace.push(ExtensionTrace {
                parent: parent.clone(),
                child: child.clone(),
                parent_peu,
                rsu,
                child_umax: chus.umax(),
                child_support: chus.support(),
            });
        }
        if !self.admit(&chus) {
            return;
        }
        let id = self.record(parent_id, &child, &chus);
        self.expand(&child, &chus, id);
    }
}
