use std::collections::{BTreeSet, HashMap, HashSet};

use crate::miner::MinedPattern;
use crate::qseq::pattern_contains;

/// Index of a pattern in [`MinerState::log`].
pub type LogId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoggedPattern {
    pub mined: MinedPattern,
    /// Sids of the containing sequences, ascending.
    pub sids: Vec<u32>,
}

/// Closedness bookkeeping of a mining run.
///
/// `log` records every frequent high-utility pattern found. `candidates`
/// and `rejected` are the running closed / not-closed sets maintained by
/// [`MinerState::check_closed`]; [`MinerState::final_closed_filter`] makes
/// the result exact.
#[derive(Debug, Clone, Default)]
pub struct MinerState {
    log: Vec<LoggedPattern>,
    candidates: BTreeSet<LogId>,
    rejected: HashSet<LogId>,
}

impl MinerState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn log_pattern(&mut self, mined: MinedPattern, sids: Vec<u32>) -> LogId {
        self.log.push(LoggedPattern { mined, sids });
        self.log.len() - 1
    }

    pub fn log(&self) -> &[LoggedPattern] {
        &self.log
    }

    pub fn get(&self, id: LogId) -> &MinedPattern {
        &self.log[id].mined
    }

    pub fn candidates(&self) -> impl Iterator<Item = LogId> + '_ {
        self.candidates.iter().copied()
    }

    pub fn is_candidate(&self, id: LogId) -> bool {
        self.candidates.contains(&id)
    }

    pub fn is_rejected(&self, id: LogId) -> bool {
        self.rejected.contains(&id)
    }

    /// Adds a pattern with no logged parent (a root, or a child of a pattern
    /// that is not itself frequent and high-utility).
    pub fn add_candidate(&mut self, id: LogId) {
        if !self.rejected.contains(&id) {
            self.candidates.insert(id);
        }
    }

    /// Local closedness check between a logged parent and its one-step
    /// extension `child`. Equal support proves the parent is not closed.
    pub fn check_closed(&mut self, parent: LogId, child: LogId) {
        if self.log[parent].mined.support == self.log[child].mined.support {
            self.candidates.remove(&parent);
            self.rejected.insert(parent);
            self.candidates.insert(child);
        } else {
            self.candidates.insert(child);
            if !self.rejected.contains(&parent) {
                self.candidates.insert(parent);
            }
        }
    }

    /// Candidates with no logged proper super-pattern of equal support.
    ///
    /// A super-pattern with equal support occurs in exactly the same
    /// sequences, so containment is only tested inside groups sharing a sid
    /// set.
    pub fn final_closed_filter(&self) -> Vec<MinedPattern> {
        let mut groups: HashMap<&[u32], Vec<LogId>> = HashMap::new();
        for (id, lp) in self.log.iter().enumerate() {
            groups.entry(lp.sids.as_slice()).or_default().push(id);
        }
        self.candidates
            .iter()
            .filter(|&&id| {
                let p = &self.log[id];
                let len = p.mined.pattern.len();
                !groups[p.sids.as_slice()].iter().any(|&q| {
                    let q = &self.log[q].mined;
                    q.pattern.len() > len && pattern_contains(&q.pattern, &p.mined.pattern)
                })
            })
            .map(|&id| self.log[id].mined.clone())
            .collect()
    }
}
