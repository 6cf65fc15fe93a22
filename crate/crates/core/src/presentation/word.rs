use std::cmp::Ordering;

use smallvec::SmallVec;

pub type Letters = SmallVec<[u8; 14]>;

/// A path in the quiver (a monomial in the connected case, where every arrow is a loop at vertex 0).
///
/// Ordering is degree-lexicographic: longer words are larger; among words of
/// equal length the one whose first differing letter has the *smaller*
/// generator index is larger, so the first generator of a presentation is the
/// largest letter.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    source: u16,
    target: u16,
    letters: Letters,
}

impl Word {
    /// The vertex idempotent `e_v`.
    pub fn idempotent(vertex: u16) -> Self {
        Word {
            source: vertex,
            target: vertex,
            letters: Letters::new(),
        }
    }

    pub(crate) fn from_parts(source: u16, target: u16, letters: Letters) -> Self {
        Word {
            source,
            target,
            letters,
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn source(&self) -> u16 {
        self.source
    }

    pub fn target(&self) -> u16 {
        self.target
    }

    pub fn composable(&self, next: &Word) -> bool {
        self.target == next.source
    }

    /// Concatenation, `None` when the paths do not meet.
    pub fn concat(&self, next: &Word) -> Option<Word> {
        if !self.composable(next) {
            return None;
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&next.letters);
        Some(Word {
            source: self.source,
            target: next.target,
            letters,
        })
    }

    /// `prefix · self · suffix`, used when rewriting inside a longer word.
    pub(crate) fn splice(prefix: &[u8], middle: &Word, suffix: &[u8], source: u16, target: u16) -> Word {
        let mut letters = Letters::with_capacity(prefix.len() + middle.len() + suffix.len());
        letters.extend_from_slice(prefix);
        letters.extend_from_slice(&middle.letters);
        letters.extend_from_slice(suffix);
        Word {
            source,
            target,
            letters,
        }
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| other.letters.as_slice().cmp(self.letters.as_slice()))
            .then_with(|| other.source.cmp(&self.source))
            .then_with(|| other.target.cmp(&self.target))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
