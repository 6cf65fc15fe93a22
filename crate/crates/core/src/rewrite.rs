//! Degree-truncated noncommutative Gröbner bases for homogeneous ideals of a
//! free (path) algebra, with normal forms and normal-word bases.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::presentation::{AlgebraPresentation, Polynomial, Word};

/// `lead -> tail`: the ideal contains `lead - tail`, and every word of `tail`
/// is smaller than `lead` and of the same degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub lead: Word,
    pub tail: Polynomial,
}

#[derive(Clone, Copy, Debug)]
pub struct CompletionLimits {
    pub max_rules: usize,
    pub max_basis_words: usize,
}

impl Default for CompletionLimits {
    fn default() -> Self {
        CompletionLimits {
            max_rules: 200_000,
            max_basis_words: 4_000_000,
        }
    }
}

/// Irreducible words of one degree, sorted descending, grouped by their
/// (source, target) vertices.
#[derive(Clone, Debug, Default)]
pub struct DegreeBasis {
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    vertices: usize,
    groups: Vec<Vec<usize>>,
    local: Vec<usize>,
}

impl DegreeBasis {
    fn new(mut words: Vec<Word>, vertices: usize) -> Self {
        words.sort_unstable_by(|a, b| b.cmp(a));
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut groups = vec![Vec::new(); vertices * vertices];
        let mut local = Vec::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            let g = &mut groups[w.source() as usize * vertices + w.target() as usize];
            local.push(g.len());
            g.push(i);
        }
        DegreeBasis {
            words,
            index,
            vertices,
            groups,
            local,
        }
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn position(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Indices (into [`Self::words`]) of the paths from `source` to `target`.
    pub fn paths(&self, source: u16, target: u16) -> &[usize] {
        &self.groups[source as usize * self.vertices + target as usize]
    }

    /// Position of word `i` inside its (source, target) group.
    pub fn local_index(&self, i: usize) -> usize {
        self.local[i]
    }
}

/// Rewrite rules certified confluent for all ambiguities of degree at most `bound`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    algebra: AlgebraPresentation,
    bound: usize,
    rules: Vec<RewriteRule>,
    lookup: HashMap<Vec<u8>, usize>,
    lead_lengths: Vec<usize>,
    bases: Vec<DegreeBasis>,
}

/// Completion through degree `bound` with default resource limits.
pub fn complete(algebra: &AlgebraPresentation, bound: usize) -> Result<GroebnerBasis> {
    complete_with(algebra, bound, CompletionLimits::default())
}

pub fn complete_with(algebra: &AlgebraPresentation, bound: usize, limits: CompletionLimits) -> Result<GroebnerBasis> {
    let mut gb = GroebnerBasis {
        algebra: algebra.clone(),
        bound,
        rules: Vec::new(),
        lookup: HashMap::new(),
        lead_lengths: Vec::new(),
        bases: Vec::new(),
    };
    for degree in 2..=bound {
        let mut candidates: Vec<Polynomial> = algebra
            .relations()
            .iter()
            .filter(|r| r.degree() == Some(degree))
            .cloned()
            .collect();
        candidates.extend(gb.overlaps(degree));
        let mut echelon: Vec<Polynomial> = Vec::new();
        for c in candidates {
            let mut p = gb.reduce(&c);
            p = reduce_by_echelon(&p, &echelon);
            if p.is_zero() {
                continue;
            }
            let p = p.monic();
            let lead = p.leading().expect("nonzero").0.clone();
            for e in echelon.iter_mut() {
                if let Some(c) = coefficient(e, &lead) {
                    *e = e.sub(&p.scale(&c));
                }
            }
            echelon.push(p);
        }
        echelon.sort_by(|a, b| b.leading().unwrap().0.cmp(&a.leading().unwrap().0));
        for p in echelon {
            let lead = p.terms()[0].0.clone();
            let tail = Polynomial::from_terms(p.terms()[1..].iter().map(|(w, c)| (w.clone(), -c)));
            gb.insert(RewriteRule { lead, tail });
            if gb.rules.len() > limits.max_rules {
                return Err(Error::ResourceLimit {
                    what: "rewrite rules".into(),
                    cap: limits.max_rules,
                });
            }
        }
    }
    gb.build_bases(limits.max_basis_words)?;
    Ok(gb)
}

fn coefficient(p: &Polynomial, w: &Word) -> Option<Scalar> {
    p.terms().iter().find(|(u, _)| u == w).map(|(_, c)| c.clone())
}

fn reduce_by_echelon(p: &Polynomial, echelon: &[Polynomial]) -> Polynomial {
    let mut p = p.clone();
    for e in echelon {
        let lead = &e.terms()[0].0;
        if let Some(c) = coefficient(&p, lead) {
            p = p.sub(&e.scale(&c));
        }
    }
    p
}

impl GroebnerBasis {
    fn insert(&mut self, rule: RewriteRule) {
        let n = rule.lead.len();
        if let Err(pos) = self.lead_lengths.binary_search(&n) {
            self.lead_lengths.insert(pos, n);
        }
        self.lookup.insert(rule.lead.letters().to_vec(), self.rules.len());
        self.rules.push(rule);
    }

    /// S-polynomials of all overlaps `a·o·c` (`lead1 = a·o`, `lead2 = o·c`) of total length `degree`.
    fn overlaps(&self, degree: usize) -> Vec<Polynomial> {
        let mut out = Vec::new();
        for r1 in &self.rules {
            let l1 = r1.lead.letters();
            for r2 in &self.rules {
                let l2 = r2.lead.letters();
                if l1.len() + l2.len() <= degree {
                    continue;
                }
                let k = l1.len() + l2.len() - degree;
                if k >= l1.len() || k >= l2.len() || l1[l1.len() - k..] != l2[..k] {
                    continue;
                }
                let a = self.algebra.word(&l1[..l1.len() - k]).expect("factor of a path");
                let c = self.algebra.word(&l2[k..]).expect("factor of a path");
                let s = r1
                    .tail
                    .sandwich(&Word::idempotent(a.source()), &c)
                    .sub(&r2.tail.sandwich(&a, &Word::idempotent(c.target())));
                if !s.is_zero() {
                    out.push(s);
                }
            }
        }
        out
    }

    fn build_bases(&mut self, cap: usize) -> Result<()> {
        let vertices = self.algebra.vertices();
        let mut total = vertices;
        let mut current: Vec<Word> = (0..vertices as u16).map(Word::idempotent).collect();
        self.bases.push(DegreeBasis::new(current.clone(), vertices));
        let gens = self.algebra.generators().to_vec();
        for _ in 1..=self.bound {
            let mut next = Vec::new();
            for w in &current {
                for (i, g) in gens.iter().enumerate() {
                    if g.source != w.target() {
                        continue;
                    }
                    let letter = self.algebra.letter(i);
                    let cand = w.concat(&letter).expect("composable");
                    if self.suffix_rule(cand.letters()).is_none() {
                        next.push(cand);
                    }
                }
            }
            total += next.len();
            if total > cap {
                return Err(Error::ResourceLimit {
                    what: "normal words".into(),
                    cap,
                });
            }
            self.bases.push(DegreeBasis::new(next.clone(), vertices));
            current = next;
        }
        Ok(())
    }

    /// A rule whose lead is a suffix of `letters`.
    fn suffix_rule(&self, letters: &[u8]) -> Option<usize> {
        let n = letters.len();
        self.lead_lengths
            .iter()
            .take_while(|&&l| l <= n)
            .find_map(|&l| self.lookup.get(&letters[n - l..]).copied())
    }

    /// First (leftmost-ending) occurrence of a lead: `(start, rule)`.
    fn find_factor(&self, letters: &[u8]) -> Option<(usize, usize)> {
        for end in 1..=letters.len() {
            for &l in self.lead_lengths.iter().take_while(|&&l| l <= end) {
                if let Some(&r) = self.lookup.get(&letters[end - l..end]) {
                    return Some((end - l, r));
                }
            }
        }
        None
    }

    pub fn algebra(&self) -> &AlgebraPresentation {
        &self.algebra
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn is_monomial(&self) -> bool {
        self.rules.iter().all(|r| r.tail.is_zero())
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.find_factor(w.letters()).is_none()
    }

    fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > self.bound {
            return Err(Error::OutsideWindow {
                degree,
                bound: self.bound,
            });
        }
        Ok(())
    }

    /// Normal-word basis of `A_j`, ordered descending.
    pub fn basis(&self, j: usize) -> Result<&DegreeBasis> {
        self.check_degree(j)?;
        Ok(&self.bases[j])
    }

    pub fn monomial_basis(&self, j: usize) -> Result<&[Word]> {
        Ok(self.basis(j)?.words())
    }

    pub fn hilbert(&self, j: usize) -> Result<usize> {
        Ok(self.basis(j)?.len())
    }

    /// Hilbert values for degrees `0..=bound`.
    pub fn hilbert_series(&self) -> Vec<usize> {
        self.bases.iter().map(DegreeBasis::len).collect()
    }

    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        if let Some((w, _)) = p.terms().iter().max_by_key(|(w, _)| w.len()) {
            self.check_degree(w.len())?;
        }
        Ok(self.reduce(p))
    }

    pub(crate) fn reduce(&self, p: &Polynomial) -> Polynomial {
        if p.terms().iter().all(|(w, _)| self.is_normal(w)) {
            return p.clone();
        }
        let mut acc: BTreeMap<Word, Scalar> = p.terms().iter().cloned().collect();
        let mut out = Vec::new();
        while let Some((w, c)) = acc.pop_last() {
            if c.is_zero() {
                continue;
            }
            match self.find_factor(w.letters()) {
                None => out.push((w, c)),
                Some((start, r)) => {
                    let rule = &self.rules[r];
                    let end = start + rule.lead.len();
                    let letters = w.letters();
                    for (u, a) in rule.tail.terms() {
                        let v = Word::splice(&letters[..start], u, &letters[end..], w.source(), w.target());
                        let coeff = &c * a;
                        match acc.get_mut(&v) {
                            Some(e) => *e = &*e + &coeff,
                            None => {
                                acc.insert(v, coeff);
                            }
                        }
                    }
                }
            }
        }
        Polynomial::from_sorted(out)
    }

    /// Normal form of `left·right` for normal words; `None` means the paths do not compose.
    pub(crate) fn word_product(&self, left: &Word, right: &Word) -> Option<Polynomial> {
        let w = left.concat(right)?;
        let one = self.algebra.field().one();
        if left.is_empty() || right.is_empty() || !self.crosses_lead(w.letters(), left.len()) {
            return Some(Polynomial::monomial(w, one));
        }
        Some(self.reduce(&Polynomial::monomial(w, one)))
    }

    /// Whether some lead occurs as a factor straddling position `cut`.
    fn crosses_lead(&self, letters: &[u8], cut: usize) -> bool {
        for end in cut + 1..=letters.len() {
            for &l in self.lead_lengths.iter().take_while(|&&l| l <= end) {
                if end - l < cut && self.lookup.contains_key(&letters[end - l..end]) {
                    return true;
                }
            }
        }
        false
    }

    /// `nf(p·q)`, requiring the product to stay inside the certified degree range.
    pub fn multiply_truncated(&self, p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
        let dp = p.terms().iter().map(|(w, _)| w.len()).max();
        let dq = q.terms().iter().map(|(w, _)| w.len()).max();
        if let (Some(a), Some(b)) = (dp, dq) {
            self.check_degree(a + b)?;
        }
        let p = self.reduce(p);
        let q = self.reduce(q);
        let mut terms = Vec::new();
        for (u, a) in p.terms() {
            for (v, b) in q.terms() {
                if let Some(prod) = self.word_product(u, v) {
                    let ab = a * b;
                    terms.extend(prod.terms().iter().map(|(w, c)| (w.clone(), c * &ab)));
                }
            }
        }
        Ok(Polynomial::from_terms(terms))
    }
}
