use std::collections::BTreeMap;

use crate::field::Scalar;

use super::word::Word;

/// A finite linear combination of words with nonzero coefficients, kept
/// sorted with the leading (largest) word first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: Vec<(Word, Scalar)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn monomial(word: Word, coeff: Scalar) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: vec![(word, coeff)],
        }
    }

    /// Collects terms, merging equal words and dropping zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        let mut acc: BTreeMap<Word, Scalar> = BTreeMap::new();
        for (w, c) in terms {
            match acc.get_mut(&w) {
                Some(existing) => *existing = &*existing + &c,
                None => {
                    acc.insert(w, c);
                }
            }
        }
        Polynomial {
            terms: acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Builds from terms already sorted descending with distinct words.
    pub(crate) fn from_sorted(terms: Vec<(Word, Scalar)>) -> Self {
        debug_assert!(terms.windows(2).all(|p| p[0].0 > p[1].0));
        Polynomial {
            terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Word, Scalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Word, Scalar)> {
        self.terms.first()
    }

    /// Common degree of all terms; `None` for zero or inhomogeneous input.
    pub fn degree(&self) -> Option<usize> {
        let first = self.terms.first()?.0.len();
        self.terms
            .iter()
            .all(|(w, _)| w.len() == first)
            .then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    /// Leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv()),
            _ => self.clone(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Self {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    pub fn sub(&self, other: &Polynomial) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .cloned()
                .chain(other.terms.iter().map(|(w, c)| (w.clone(), -c))),
        )
    }

    /// `left · self · right` in the free path algebra (no reduction).
    pub fn sandwich(&self, left: &Word, right: &Word) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(w, c)| {
            let lw = left.concat(w)?;
            Some((lw.concat(right)?, c.clone()))
        }))
    }
}
