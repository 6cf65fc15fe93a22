//! Betti tables typed by hand or piped from `betti --format json`.

use anyhow::{bail, Context, Result};
use bikoszul::homology::{BettiRecord, BettiTable, Window};
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonInput {
    Records(Vec<BettiRecord>),
    Report { window: Option<Window>, betti: Vec<BettiRecord> },
}

/// Rows are separated by `;` or newlines; each row lists internal degrees,
/// `j:count` giving a multiplicity. `#` starts a comment.
pub fn parse(text: &str, degree_bound: usize) -> Result<BettiTable> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        let input: JsonInput = serde_json::from_str(trimmed).context("Betti records are not valid JSON")?;
        let (window, records) = match input {
            JsonInput::Records(r) => (None, r),
            JsonInput::Report { window, betti } => (window, betti),
        };
        let window = window.unwrap_or(Window {
            length: records.iter().map(|r| r.i).max().unwrap_or(0),
            degree_bound: degree_bound.max(records.iter().map(|r| r.j).max().unwrap_or(0)),
        });
        return Ok(BettiTable::from_records(&records, window));
    }

    let body: String = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join(";");
    let mut rows: Vec<&str> = body.split(';').map(str::trim).collect();
    while rows.len() > 1 && rows.last() == Some(&"") {
        rows.pop();
    }
    while rows.len() > 1 && rows.first() == Some(&"") {
        rows.remove(0);
    }
    let mut records = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        for item in row.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (j, beta) = match item.split_once(':') {
                Some((j, b)) => (j.trim(), b.trim().parse::<usize>().ok()),
                None => (item, Some(1)),
            };
            let (Ok(j), Some(beta)) = (j.parse::<usize>(), beta) else {
                bail!("row {i}: `{item}` is not a degree or `degree:count`");
            };
            if j > degree_bound {
                return Err(bikoszul::Error::OutsideWindow {
                    degree: j,
                    bound: degree_bound,
                }
                .into());
            }
            if beta > 0 {
                records.push(BettiRecord { i, j, beta });
            }
        }
    }
    let window = Window {
        length: rows.len().saturating_sub(1),
        degree_bound,
    };
    Ok(BettiTable::from_records(&records, window))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supports_and_multiplicities() {
        let t = parse("0;1:4;2:2,3;4:2;5\n", 8).unwrap();
        assert_eq!(t.window().length, 4);
        assert_eq!(t.get(1, 1), 4);
        assert_eq!(t.support(2), vec![2, 3]);
        let t = parse("[{\"i\":0,\"j\":0,\"beta\":1},{\"i\":1,\"j\":1,\"beta\":2}]", 8).unwrap();
        assert_eq!(t.get(1, 1), 2);
        assert!(parse("0;x", 8).is_err());
        assert!(parse("0;9", 8).is_err());
    }
}
