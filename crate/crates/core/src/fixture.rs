//! The seven-item retail toy database (items `a`..`g`, five sequences) used
//! throughout the tests, plus a letter symbol table for writing patterns
//! such as `(cg)(be)`.

use crate::error::{Error, Result};
use crate::io::parse_database;
use crate::qseq::{ItemId, Pattern, QSequenceDatabase};

/// Sequence file of the toy database, symbols `a..g` mapped to `1..7`.
pub const TOY_SEQUENCES: &str = "\
# sid 1..5
1:5 3:2 7:5 -1 1:3 2:1 3:3 6:2 -1 2:3 4:2 5:2 -1 -2
3:2 5:1 -1 1:2 2:2 6:5 -1 2:2 3:1 5:4 7:6 -1 -2
1:1 2:1 5:3 -1 3:3 4:2 7:3 -1 2:2 5:1 -1 4:3 -1 -2
2:1 3:1 5:2 7:5 -1 1:3 2:2 5:4 6:2 -1 2:2 3:1 5:2 -1 -2
1:4 4:2 6:2 7:10 -1 -2
";

/// Unit profits of `a..g`.
pub const TOY_PROFITS: &str = "\
# item profit
1 2
2 5
3 3
4 4
5 6
6 1
7 7
";

pub fn toy_database() -> QSequenceDatabase {
    parse_database(TOY_SEQUENCES.as_bytes(), TOY_PROFITS.as_bytes()).expect("toy fixture is valid")
}

/// `a` ↦ 1, `b` ↦ 2, …, `z` ↦ 26.
pub fn letter_item(c: char) -> Option<ItemId> {
    c.is_ascii_lowercase()
        .then(|| ItemId::new(c as u32 - 'a' as u32 + 1).expect("non-zero"))
}

pub fn item_letter(item: ItemId) -> Option<char> {
    match item.get() {
        n @ 1..=26 => char::from_u32('a' as u32 + n - 1),
        _ => None,
    }
}

/// Parses letter notation, e.g. `(cg)(abf)(be)`.
pub fn parse_letters(text: &str) -> Result<Pattern> {
    let bad = || Error::InvalidPattern(format!("bad letter pattern '{text}'"));
    let mut itemsets = Vec::new();
    let mut current: Option<Vec<ItemId>> = None;
    for c in text.chars().filter(|c| !c.is_whitespace()) {
        match (c, current.as_mut()) {
            ('(', None) => current = Some(Vec::new()),
            (')', Some(_)) => itemsets.push(current.take().expect("open")),
            (c, Some(x)) => x.push(letter_item(c).ok_or_else(bad)?),
            _ => return Err(bad()),
        }
    }
    if current.is_some() {
        return Err(bad());
    }
    Pattern::new(itemsets)
}

/// Panicking shorthand for [`parse_letters`].
pub fn pat(text: &str) -> Pattern {
    parse_letters(text).unwrap_or_else(|e| panic!("{e}"))
}

/// Letter notation of a pattern whose items are all in `a..z`.
pub fn letters(p: &Pattern) -> String {
    p.itemsets()
        .iter()
        .map(|x| {
            let inner: String = x.iter().map(|&i| item_letter(i).unwrap_or('?')).collect();
            format!("({inner})")
        })
        .collect()
}
