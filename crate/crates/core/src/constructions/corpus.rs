//! Exhaustive search for small monomial algebras with a δ′, δ″ or Δ pattern.

use serde::Serialize;

use crate::error::Result;
use crate::field::FieldSpec;
use crate::homology::{BettiRecord, BettiTable, Window};
use crate::koszulity::{check_pattern, Pattern};
use crate::presentation::{AlgebraPresentation, Polynomial};

use super::{resolve_k, shifted_word};

#[derive(Clone, Debug)]
pub struct CorpusParams {
    pub d: usize,
    /// At most 3.
    pub generators: usize,
    pub max_relations: usize,
    pub window: Window,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusEntry {
    #[serde(serialize_with = "as_text")]
    pub algebra: AlgebraPresentation,
    /// Every pattern among δ′(d), δ″(d), Δ_d matched in the window.
    pub patterns: Vec<Pattern>,
    pub betti: Vec<BettiRecord>,
    /// First zero term of the resolution, if it stops inside the window.
    pub terminates_at: Option<usize>,
}

fn as_text<S: serde::Serializer>(a: &AlgebraPresentation, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&a.to_string())
}

const NAMES: [&str; 3] = ["x", "y", "z"];

fn words(generators: usize, degree: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..degree {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..generators as u8).map(move |l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
    }
    out
}

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn go(start: usize, n: usize, max: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !stack.is_empty() {
            out.push(stack.clone());
        }
        if stack.len() == max {
            return;
        }
        for i in start..n {
            stack.push(i);
            go(i + 1, n, max, stack, out);
            stack.pop();
        }
    }
    go(0, n, max, &mut stack, &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    match n {
        0 => vec![Vec::new()],
        _ => {
            let mut out = Vec::new();
            for p in permutations(n - 1) {
                for k in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(k, (n - 1) as u8);
                    out.push(q);
                }
            }
            out
        }
    }
}

/// Canonical form of a relation set under renaming generators.
fn canonical(rels: &[Vec<u8>], perms: &[Vec<u8>]) -> Vec<Vec<u8>> {
    perms
        .iter()
        .map(|p| {
            let mut r: Vec<Vec<u8>> = rels
                .iter()
                .map(|w| w.iter().map(|&l| p[l as usize]).collect())
                .collect();
            r.sort();
            r
        })
        .min()
        .expect("at least one permutation")
}

/// Some relation is a subword of another, so the set does not minimally
/// generate its ideal.
fn redundant(rels: &[Vec<u8>]) -> bool {
    rels.iter().enumerate().any(|(i, u)| {
        rels.iter()
            .enumerate()
            .any(|(j, w)| i != j && w.len() > u.len() && w.windows(u.len()).any(|s| s == u.as_slice()))
    })
}

/// Monomial relation sets of degrees `d` and `d + 1` over `1..=generators`
/// letters, each letter used, relations minimal, one per renaming class, in a fixed order.
fn candidates(params: &CorpusParams) -> Vec<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    for g in 1..=params.generators.min(NAMES.len()) {
        let mut pool = words(g, params.d);
        pool.extend(words(g, params.d + 1));
        let perms = permutations(g);
        let mut seen = std::collections::BTreeSet::new();
        for s in subsets(pool.len(), params.max_relations) {
            let rels: Vec<Vec<u8>> = s.iter().map(|&i| pool[i].clone()).collect();
            if (0..g as u8).any(|l| !rels.iter().any(|w| w.contains(&l))) || redundant(&rels) {
                continue;
            }
            let c = canonical(&rels, &perms);
            if seen.insert(c.clone()) {
                out.push(c);
            }
        }
    }
    out
}

fn build(rels: &[Vec<u8>]) -> Result<AlgebraPresentation> {
    let g = rels.iter().flatten().map(|&l| l as usize + 1).max().unwrap_or(0);
    let field = FieldSpec::Rationals;
    let polys = rels
        .iter()
        .map(|w| Polynomial::monomial(shifted_word(w), field.one()))
        .collect();
    AlgebraPresentation::connected(field, &NAMES[..g], polys)
}

/// Every candidate whose trivial module matches δ′(d), δ″(d) or Δ_d in the
/// window. The order is that of the enumeration, independent of threading.
pub fn corpus_search(params: &CorpusParams) -> Result<Vec<CorpusEntry>> {
    let d = params.d;
    let patterns = [
        Pattern::DeltaPrime { d },
        Pattern::DeltaDoublePrime { d },
        Pattern::BiKoszul { d },
    ];
    let found = crate::par::try_map(&candidates(params), |rels| {
        let algebra = build(rels)?;
        let table = BettiTable::from_resolution(&resolve_k(&algebra, params.window)?);
        let mut matched = Vec::new();
        let mut terminates_at = None;
        for p in patterns {
            if let crate::koszulity::Verdict::MatchesInWindow { terminates_at: t } = check_pattern(&table, p) {
                matched.push(p);
                terminates_at = t;
            }
        }
        Ok((!matched.is_empty()).then(|| CorpusEntry {
            algebra,
            patterns: matched,
            betti: table.records(),
            terminates_at,
        }))
    })?;
    Ok(found.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms_identify_renamings() {
        let perms = permutations(2);
        assert_eq!(
            canonical(&[vec![0, 1]], &perms),
            canonical(&[vec![1, 0]], &perms)
        );
        assert_eq!(subsets(4, 2).len(), 4 + 6);
    }
}
