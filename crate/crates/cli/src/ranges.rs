//! Parsing for `--n` and `--valency` value lists like `3..9` or `5,7,11`.

use std::collections::BTreeSet;

/// A nonempty ascending list of values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranges(pub Vec<u64>);

/// Accepts comma-separated parts, each a number or an inclusive `lo..hi`
/// span, and returns the sorted union.
pub fn parse_ranges(text: &str) -> Result<Ranges, String> {
    let mut values = BTreeSet::new();
    for part in text.split(',') {
        let part = part.trim();
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: u64 = lo
                .trim()
                .parse()
                .map_err(|_| format!("bad range start in {part:?}"))?;
            let hi: u64 = hi
                .trim()
                .parse()
                .map_err(|_| format!("bad range end in {part:?}"))?;
            if lo > hi {
                return Err(format!("range {part:?} is empty"));
            }
            values.extend(lo..=hi);
        } else {
            values.insert(part.parse().map_err(|_| format!("bad number {part:?}"))?);
        }
    }
    if values.is_empty() {
        return Err("expected at least one value".to_string());
    }
    Ok(Ranges(values.into_iter().collect()))
}
