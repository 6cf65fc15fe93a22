//! Betti tables `β_{i,j} = dim E^i_j`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::resolution::Resolution;

/// Homological length `L` and internal degree bound `D` a result is certified for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub length: usize,
    pub degree_bound: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiRecord {
    pub i: usize,
    pub j: usize,
    pub beta: usize,
}

/// Nonzero Betti numbers with `i ≤ L`, `j ≤ D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<(usize, usize), usize>,
    window: Window,
}

impl BettiTable {
    pub fn new(window: Window) -> Self {
        BettiTable {
            entries: BTreeMap::new(),
            window,
        }
    }

    pub fn from_resolution(res: &Resolution) -> Self {
        let mut table = BettiTable::new(Window {
            length: res.length(),
            degree_bound: res.bound(),
        });
        for (i, m) in res.modules().iter().enumerate() {
            for g in &m.generators {
                *table.entries.entry((i, g.degree)).or_insert(0) += 1;
            }
        }
        table
    }

    pub fn from_records(records: &[BettiRecord], window: Window) -> Self {
        let mut table = BettiTable::new(window);
        for r in records {
            table.set(r.i, r.j, r.beta);
        }
        table
    }

    /// Table with `β = 1` on each listed support; row `i` is `supports[i]`.
    pub fn from_supports(supports: &[Vec<usize>], degree_bound: usize) -> Self {
        let mut table = BettiTable::new(Window {
            length: supports.len().saturating_sub(1),
            degree_bound,
        });
        for (i, row) in supports.iter().enumerate() {
            for &j in row {
                table.set(i, j, 1);
            }
        }
        table
    }

    pub fn set(&mut self, i: usize, j: usize, beta: usize) {
        if beta == 0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), beta);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Degrees `j` with `β_{i,j} > 0`, ascending.
    pub fn support(&self, i: usize) -> Vec<usize> {
        self.entries
            .range((i, 0)..=(i, usize::MAX))
            .map(|(&(_, j), _)| j)
            .collect()
    }

    pub fn row_total(&self, i: usize) -> usize {
        self.entries.range((i, 0)..=(i, usize::MAX)).map(|(_, b)| b).sum()
    }

    pub fn records(&self) -> Vec<BettiRecord> {
        self.entries
            .iter()
            .map(|(&(i, j), &beta)| BettiRecord { i, j, beta })
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn select(&self, keep: impl Fn(usize) -> bool) -> BettiTable {
        BettiTable {
            entries: self
                .entries
                .iter()
                .filter(|((i, _), _)| keep(*i))
                .map(|(k, v)| (*k, *v))
                .collect(),
            window: self.window,
        }
    }

    /// The views `E^[P]` (`i ≡ 0, 1 mod 3`), `E^[N]` (`i ≡ 2`) and `E^[0]` (`i ≡ 0`).
    pub fn ext_parts(&self) -> ExtParts {
        ExtParts {
            pure: self.select(|i| i % 3 != 2),
            non_pure: self.select(|i| i % 3 == 2),
            zero: self.select(|i| i % 3 == 0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtParts {
    pub pure: BettiTable,
    pub non_pure: BettiTable,
    pub zero: BettiTable,
}

impl fmt::Display for BettiTable {
    /// Rows are homological degrees, columns internal degrees.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.window.degree_bound;
        write!(f, "{:>4}", "i\\j")?;
        for j in 0..=d {
            write!(f, "{j:>4}")?;
        }
        writeln!(f)?;
        for i in 0..=self.window.length {
            write!(f, "{i:>4}")?;
            for j in 0..=d {
                match self.get(i, j) {
                    0 => write!(f, "{:>4}", ".")?,
                    b => write!(f, "{b:>4}")?,
                }
            }
            writeln!(f)?;
        }
        write!(
            f,
            "window: L = {}, D = {}",
            self.window.length, self.window.degree_bound
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supports_and_parts() {
        let t = BettiTable::from_supports(&[vec![0], vec![1], vec![2, 3], vec![4], vec![5]], 8);
        assert_eq!(t.support(2), vec![2, 3]);
        let parts = t.ext_parts();
        assert_eq!(parts.non_pure.records().len(), 2);
        assert_eq!(parts.zero.support(3), vec![4]);
        assert!(parts.zero.support(1).is_empty());
        assert_eq!(parts.pure.support(4), vec![5]);
    }
}
