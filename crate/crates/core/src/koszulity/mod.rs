//! Degree patterns for resolutions (Koszul, N-Koszul, piecewise, the
//! three-periodic map Δ and its two pure halves δ′, δ″), a Betti-table
//! classifier, the strongly-bi-Koszul obstruction, and module checks.
//!
//! Every verdict is relative to a window `(L, D)`: rows `i ≤ L`, degrees `j ≤ D`.

mod modules;
mod obstruction;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{BettiTable, Window};

pub use modules::{
    bikoszul_module_check, strongly_module_check, verify_ext_splitting, ModuleCheckReport, SplitRow,
    SplittingReport, StageRecord, StronglyModuleReport, StronglyVerdict,
};
pub use obstruction::{obstruction, obstruction_for, ObstructionReport, SyzygyRoute};

/// `Δ(n)` for parameter `d`: `{2md}`, `{2md+1}`, `{2md+d, 2md+d+1}` for
/// `n = 3m, 3m+1, 3m+2`.
pub fn delta(d: usize, n: usize) -> Result<Vec<usize>> {
    if d < 2 {
        return Err(Error::Precondition(format!("resolution map parameter d = {d} must be at least 2")));
    }
    Ok(delta_unchecked(d, n))
}

fn delta_unchecked(d: usize, n: usize) -> Vec<usize> {
    let base = 2 * (n / 3) * d;
    match n % 3 {
        0 => vec![base],
        1 => vec![base + 1],
        _ => vec![base + d, base + d + 1],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Pattern {
    Koszul,
    NKoszul { n: usize },
    Piecewise { p: usize, n: usize },
    DeltaPrime { d: usize },
    DeltaDoublePrime { d: usize },
    BiKoszul { d: usize },
}

impl Pattern {
    /// Generator degrees the pattern prescribes for `P_i`.
    pub fn degrees(&self, i: usize) -> Vec<usize> {
        let (m, r) = (i / 3, i % 3);
        match *self {
            Pattern::Koszul => vec![i],
            Pattern::NKoszul { n } => vec![(i / 2) * n + i % 2],
            Pattern::Piecewise { p, n } => vec![n * (i / p) + i % p],
            Pattern::DeltaPrime { d } => vec![2 * m * d + [0, 1, d][r]],
            Pattern::DeltaDoublePrime { d } => vec![2 * m * d + [0, 1, d + 1][r]],
            Pattern::BiKoszul { d } => delta_unchecked(d, i),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Pattern::Koszul => "koszul",
            Pattern::NKoszul { .. } => "n-koszul",
            Pattern::Piecewise { .. } => "piecewise-koszul",
            Pattern::DeltaPrime { .. } => "delta-prime",
            Pattern::DeltaDoublePrime { .. } => "delta-double-prime",
            Pattern::BiKoszul { .. } => "bi-koszul",
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Pattern::Koszul => write!(f, "Koszul"),
            Pattern::NKoszul { n } => write!(f, "N-Koszul N={n}"),
            Pattern::Piecewise { p, n } => write!(f, "piecewise-Koszul p={p} N={n}"),
            Pattern::DeltaPrime { d } => write!(f, "delta'-Koszul d={d}"),
            Pattern::DeltaDoublePrime { d } => write!(f, "delta''-Koszul d={d}"),
            Pattern::BiKoszul { d } => write!(f, "bi-Koszul d={d}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    /// Every row in the window has exactly the prescribed support; if the
    /// resolution stops, `terminates_at` is its first zero term.
    MatchesInWindow { terminates_at: Option<usize> },
    RefutedAt {
        n: usize,
        observed: Vec<usize>,
        expected: Vec<usize>,
    },
    /// No parameter could be fitted from the table.
    NotApplicable { reason: String },
}

impl Verdict {
    pub fn matches(&self) -> bool {
        matches!(self, Verdict::MatchesInWindow { .. })
    }
}

/// Compares each row `i ≤ L` with `pattern.degrees(i) ∩ [0, D]`. Once a
/// row that should be nonzero is empty, all later rows must be empty too.
pub fn check_pattern(table: &BettiTable, pattern: Pattern) -> Verdict {
    let Window { length, degree_bound } = table.window();
    let mut stop: Option<usize> = None;
    for i in 0..=length {
        let observed = table.support(i);
        let expected: Vec<usize> = pattern.degrees(i).into_iter().filter(|&j| j <= degree_bound).collect();
        if stop.is_some() {
            if !observed.is_empty() {
                return Verdict::RefutedAt {
                    n: i,
                    observed,
                    expected: Vec::new(),
                };
            }
            continue;
        }
        if observed == expected {
            continue;
        }
        if observed.is_empty() && i > 0 {
            stop = Some(i);
            continue;
        }
        return Verdict::RefutedAt { n: i, observed, expected };
    }
    Verdict::MatchesInWindow { terminates_at: stop }
}

#[derive(Clone, Debug, Serialize)]
pub struct PatternVerdict {
    pub pattern: Option<Pattern>,
    pub family: &'static str,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub window: Window,
    pub verdicts: Vec<PatternVerdict>,
}

impl ClassificationReport {
    pub fn matched(&self) -> Vec<Pattern> {
        self.verdicts
            .iter()
            .filter(|v| v.verdict.matches())
            .filter_map(|v| v.pattern)
            .collect()
    }

    pub fn bikoszul_parameter(&self) -> Option<usize> {
        self.matched().into_iter().find_map(|p| match p {
            Pattern::BiKoszul { d } => Some(d),
            _ => None,
        })
    }

    pub fn matches(&self, pattern: Pattern) -> bool {
        self.matched().contains(&pattern)
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.verdicts {
            let name = v.pattern.map_or_else(|| v.family.to_string(), |p| p.to_string());
            match &v.verdict {
                Verdict::MatchesInWindow { terminates_at: None } => writeln!(f, "{name}: matches in window")?,
                Verdict::MatchesInWindow { terminates_at: Some(n) } => {
                    writeln!(f, "{name}: matches in window (resolution stops before P_{n})")?
                }
                Verdict::RefutedAt { n, observed, expected } => {
                    writeln!(f, "{name}: refuted at P_{n}: degrees {observed:?}, expected {expected:?}")?
                }
                Verdict::NotApplicable { reason } => writeln!(f, "{name}: not applicable ({reason})")?,
            }
        }
        write!(
            f,
            "window: L = {}, D = {}",
            self.window.length, self.window.degree_bound
        )
    }
}

fn single(row: &[usize]) -> Option<usize> {
    match row {
        [j] => Some(*j),
        _ => None,
    }
}

/// Fits each family's parameters from the first rows and checks the whole window.
pub fn classify(table: &BettiTable) -> ClassificationReport {
    let row2 = table.support(2);
    let mut verdicts = Vec::new();
    let mut push = |family: &'static str, pattern: std::result::Result<Pattern, String>| {
        let (pattern, verdict) = match pattern {
            Ok(p) => (Some(p), check_pattern(table, p)),
            Err(reason) => (None, Verdict::NotApplicable { reason }),
        };
        verdicts.push(PatternVerdict {
            pattern,
            family,
            verdict,
        });
    };

    push("koszul", Ok(Pattern::Koszul));

    let pure2 = single(&row2).filter(|&n| n >= 2);
    push(
        "n-koszul",
        pure2
            .map(|n| Pattern::NKoszul { n })
            .ok_or_else(|| "row 2 is not a single degree ≥ 2".to_string()),
    );

    // p is the first row leaving the Koszul diagonal; a diagonal table fits p = N = 2.
    let piecewise = match (2..=table.window().length).find(|&i| table.support(i) != vec![i]) {
        None => Ok(Pattern::Piecewise { p: 2, n: 2 }),
        Some(p) => match single(&table.support(p)) {
            Some(n) if n > p => Ok(Pattern::Piecewise { p, n }),
            _ if table.support(p).is_empty() => Ok(Pattern::Piecewise { p: 2, n: 2 }),
            _ => Err(format!("row {p} is not a single degree above {p}")),
        },
    };
    push("piecewise-koszul", piecewise);

    push(
        "delta-prime",
        pure2
            .map(|d| Pattern::DeltaPrime { d })
            .ok_or_else(|| "row 2 is not a single degree ≥ 2".to_string()),
    );
    push(
        "delta-double-prime",
        pure2
            .filter(|&n| n >= 3)
            .map(|n| Pattern::DeltaDoublePrime { d: n - 1 })
            .ok_or_else(|| "row 2 is not a single degree ≥ 3".to_string()),
    );

    let bi = match row2.as_slice() {
        [d, e] if *e == d + 1 && *d >= 2 => Ok(Pattern::BiKoszul { d: *d }),
        _ => Err(format!("row 2 support {row2:?} is not of the form {{d, d+1}}")),
    };
    push("bi-koszul", bi);

    ClassificationReport {
        window: table.window(),
        verdicts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(delta(3, 0).unwrap(), vec![0]);
        assert_eq!(delta(3, 1).unwrap(), vec![1]);
        assert_eq!(delta(3, 2).unwrap(), vec![3, 4]);
        assert_eq!(delta(2, 5).unwrap(), vec![6, 7]);
        assert!(delta(1, 0).is_err());
    }

    #[test]
    fn pattern_reductions() {
        for n in 0..50 {
            assert_eq!(Pattern::Piecewise { p: 3, n: 3 }.degrees(n), vec![n]);
            assert_eq!(
                Pattern::Piecewise { p: 2, n: 5 }.degrees(n),
                Pattern::NKoszul { n: 5 }.degrees(n)
            );
        }
    }

    #[test]
    fn classifies_known_patterns() {
        let t = BettiTable::from_supports(&[vec![0], vec![1], vec![3, 4], vec![6], vec![7]], 8);
        let r = classify(&t);
        assert_eq!(r.bikoszul_parameter(), Some(3));
        let t = BettiTable::from_supports(&[vec![0], vec![1], vec![2], vec![3], vec![4]], 8);
        let r = classify(&t);
        assert!(r.matches(Pattern::Koszul));
        assert!(r.matches(Pattern::NKoszul { n: 2 }));
        assert!(r.matches(Pattern::Piecewise { p: 2, n: 2 }));
        assert_eq!(r.bikoszul_parameter(), None);
    }

    #[test]
    fn refutation_reports_support() {
        let t = BettiTable::from_supports(&[vec![0], vec![1], vec![2, 3], vec![5]], 8);
        let v = check_pattern(&t, Pattern::BiKoszul { d: 2 });
        assert_eq!(
            v,
            Verdict::RefutedAt {
                n: 3,
                observed: vec![5],
                expected: vec![4]
            }
        );
    }

    #[test]
    fn early_termination_is_allowed_once() {
        let t = BettiTable::from_supports(&[vec![0], vec![1], vec![2, 3], vec![]], 8);
        assert!(check_pattern(&t, Pattern::BiKoszul { d: 2 }).matches());
        let t = BettiTable::from_supports(&[vec![0], vec![1], vec![], vec![4]], 8);
        assert!(!check_pattern(&t, Pattern::BiKoszul { d: 2 }).matches());
    }
}
