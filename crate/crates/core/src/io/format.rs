use std::cmp::Reverse;
use std::io::{BufRead, Write};

use crate::error::{Error, Result, Source};
use crate::miner::MinedPattern;
use crate::qseq::{ItemId, Pattern, ProfitTable, QItem, QItemset, QSequence, QSequenceDatabase};
use crate::utility::Utility;

const ITEMSET_END: &str = "-1";
const SEQUENCE_END: &str = "-2";

fn content_lines<R: BufRead>(reader: R) -> impl Iterator<Item = (usize, std::io::Result<String>)> {
    reader
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| match l {
            Ok(text) => {
                let t = text.trim();
                !t.is_empty() && !t.starts_with('#')
            }
            Err(_) => true,
        })
}

fn parse_item(token: &str, source: Source, line: usize) -> Result<ItemId> {
    let id: u32 = token
        .parse()
        .map_err(|_| Error::parse(source, line, format!("malformed item '{token}'")))?;
    ItemId::new(id).map_err(|_| Error::parse(source, line, format!("item id must be positive, got '{token}'")))
}

/// Parses a profit table: one `ITEM PROFIT` pair per line.
pub fn parse_profits<R: BufRead>(reader: R) -> Result<ProfitTable> {
    let mut table = ProfitTable::new();
    for (line, text) in content_lines(reader) {
        let text = text?;
        let mut fields = text.split_whitespace();
        let (Some(item), Some(profit), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::parse(Source::Profits, line, "expected 'ITEM PROFIT'"));
        };
        let item = parse_item(item, Source::Profits, line)?;
        let profit: Utility = profit
            .parse()
            .map_err(|e| Error::parse(Source::Profits, line, format!("bad profit: {e}")))?;
        if table.insert(item, profit).is_some() {
            return Err(Error::parse(Source::Profits, line, format!("duplicate profit entry for item {item}")));
        }
    }
    Ok(table)
}

fn parse_sequence_line(text: &str, sid: u32, line: usize, profits: &ProfitTable) -> Result<QSequence> {
    let err = |reason: String| Error::parse(Source::Sequences, line, reason);
    let mut itemsets = Vec::new();
    let mut current: Vec<QItem> = Vec::new();
    let mut ended = false;

    let close = |current: &mut Vec<QItem>, itemsets: &mut Vec<QItemset>| -> Result<()> {
        if current.is_empty() {
            return Err(err("empty itemset".into()));
        }
        current.sort_unstable_by_key(|q| q.item);
        if let Some(w) = current.windows(2).find(|w| w[0].item == w[1].item) {
            return Err(err(format!("duplicate item {} in itemset", w[0].item)));
        }
        itemsets.push(QItemset::new(std::mem::take(current)).map_err(|e| err(e.to_string()))?);
        Ok(())
    };

    for token in text.split_whitespace() {
        if ended {
            return Err(err(format!("token '{token}' after end of sequence")));
        }
        match token {
            ITEMSET_END => close(&mut current, &mut itemsets)?,
            SEQUENCE_END => {
                if !current.is_empty() {
                    close(&mut current, &mut itemsets)?;
                }
                ended = true;
            }
            _ => {
                let (item, qty) = token
                    .split_once(':')
                    .ok_or_else(|| err(format!("malformed token '{token}', expected ITEM:QTY")))?;
                let item = parse_item(item, Source::Sequences, line)?;
                let qty: u32 = qty.parse().map_err(|_| err(format!("malformed quantity in '{token}'")))?;
                if qty == 0 {
                    return Err(err(format!("quantity must be positive in '{token}'")));
                }
                if profits.get(item).is_none() {
                    return Err(err(format!("item {item} missing from profit table")));
                }
                current.push(QItem { item, qty });
            }
        }
    }
    if !ended {
        return Err(err("sequence not terminated by -2".into()));
    }
    if itemsets.is_empty() {
        return Err(err("empty sequence".into()));
    }
    QSequence::new(sid, itemsets).map_err(|e| err(e.to_string()))
}

/// Parses a sequence file against a profit file. Sids are assigned `1..=n`
/// in file order. Any error rejects the whole input.
pub fn parse_database<S: BufRead, P: BufRead>(sequences: S, profits: P) -> Result<QSequenceDatabase> {
    let profits = parse_profits(profits)?;
    let mut seqs = Vec::new();
    for (line, text) in content_lines(sequences) {
        let text = text?;
        let sid = u32::try_from(seqs.len() + 1).map_err(|_| Error::parse(Source::Sequences, line, "too many sequences"))?;
        seqs.push(parse_sequence_line(&text, sid, line, &profits)?);
    }
    if seqs.is_empty() {
        return Err(Error::NoSequences);
    }
    QSequenceDatabase::new(seqs, profits)
}

pub fn write_sequences<W: Write>(db: &QSequenceDatabase, mut sink: W) -> Result<()> {
    for s in db.sequences() {
        let mut line = String::new();
        for x in s.itemsets() {
            for q in x.items() {
                line.push_str(&format!("{}:{} ", q.item, q.qty));
            }
            line.push_str("-1 ");
        }
        line.push_str(SEQUENCE_END);
        writeln!(sink, "{line}")?;
    }
    Ok(())
}

pub fn write_profits<W: Write>(profits: &ProfitTable, mut sink: W) -> Result<()> {
    for (item, p) in profits.iter() {
        writeln!(sink, "{item} {p}")?;
    }
    Ok(())
}

/// Canonical output order: descending utility, then ascending pattern.
pub fn sort_patterns(patterns: &mut [MinedPattern]) {
    patterns.sort_by(|a, b| (Reverse(a.umax), &a.pattern).cmp(&(Reverse(b.umax), &b.pattern)));
}

fn pattern_tokens(p: &Pattern) -> String {
    let mut out = String::new();
    for x in p.itemsets() {
        for i in x {
            out.push_str(&i.to_string());
            out.push(' ');
        }
        out.push_str(ITEMSET_END);
        out.push(' ');
    }
    out
}

/// One line per pattern, `ITEMS -1 ITEMS -1 #UTIL: u #SUP: n`, in canonical
/// order.
pub fn write_patterns<W: Write>(patterns: &[MinedPattern], mut sink: W) -> Result<()> {
    let mut sorted = patterns.to_vec();
    sort_patterns(&mut sorted);
    for m in &sorted {
        writeln!(sink, "{}#UTIL: {} #SUP: {}", pattern_tokens(&m.pattern), m.umax, m.support)?;
    }
    Ok(())
}

/// Reads back a file produced by [`write_patterns`].
pub fn parse_patterns<R: BufRead>(reader: R) -> Result<Vec<MinedPattern>> {
    let mut out = Vec::new();
    for (line, text) in content_lines(reader) {
        let text = text?;
        let err = |reason: &str| Error::parse(Source::Patterns, line, reason);
        let (body, rest) = text.split_once("#UTIL:").ok_or_else(|| err("missing #UTIL:"))?;
        let (umax, support) = rest.split_once("#SUP:").ok_or_else(|| err("missing #SUP:"))?;
        let umax: Utility = umax.trim().parse().map_err(|_| err("bad utility"))?;
        let support: usize = support.trim().parse().map_err(|_| err("bad support"))?;
        let mut itemsets = Vec::new();
        let mut current = Vec::new();
        for token in body.split_whitespace() {
            if token == ITEMSET_END {
                itemsets.push(std::mem::take(&mut current));
            } else {
                current.push(parse_item(token, Source::Patterns, line)?);
            }
        }
        if !current.is_empty() {
            return Err(err("itemset not terminated by -1"));
        }
        let pattern = Pattern::new(itemsets).map_err(|e| err(&e.to_string()))?;
        out.push(MinedPattern { pattern, umax, support });
    }
    Ok(out)
}
