//! Graded free modules, their elements, and coordinate slices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::SparseVec;
use crate::presentation::{AlgebraPresentation, ModuleGenerator, Polynomial, Word};
use crate::rewrite::GroebnerBasis;

/// `A(-m_1) ⊕ … ⊕ A(-m_s)`; generator `i` spans the paths ending at `vertex`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeModule {
    pub generators: Vec<ModuleGenerator>,
}

impl FreeModule {
    pub fn new(generators: Vec<ModuleGenerator>) -> Self {
        FreeModule { generators }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn degree(&self, g: usize) -> usize {
        self.generators[g].degree
    }

    pub fn vertex(&self, g: usize) -> u16 {
        self.generators[g].vertex
    }

    /// `dim (e_v F)_t`.
    pub fn slice_dim(&self, gb: &GroebnerBasis, t: usize, source: u16) -> usize {
        self.generators
            .iter()
            .filter(|g| g.degree <= t)
            .map(|g| {
                gb.basis(t - g.degree)
                    .map_or(0, |b| b.paths(source, g.vertex).len())
            })
            .sum()
    }
}

/// An element `Σ p_g · g` of a free module, sorted by generator index, with
/// every entry nonzero and in normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: Vec<(usize, Polynomial)>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Polynomial)>) -> Self {
        let mut acc: BTreeMap<usize, Polynomial> = BTreeMap::new();
        for (g, p) in terms {
            let e = acc.entry(g).or_default();
            *e = e.add(&p);
        }
        Element {
            terms: acc.into_iter().filter(|(_, p)| !p.is_zero()).collect(),
        }
    }

    pub fn unit(g: usize, vertex: u16, one: Scalar) -> Self {
        Element {
            terms: vec![(g, Polynomial::monomial(Word::idempotent(vertex), one))],
        }
    }

    pub fn terms(&self) -> &[(usize, Polynomial)] {
        &self.terms
    }

    pub fn entry(&self, g: usize) -> Option<&Polynomial> {
        self.terms
            .binary_search_by_key(&g, |(h, _)| *h)
            .ok()
            .map(|i| &self.terms[i].1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Source vertex of the paths in this element (all equal for the
    /// homogeneous elements this crate builds).
    pub fn source(&self) -> Option<u16> {
        self.terms.first().and_then(|(_, p)| p.leading()).map(|(w, _)| w.source())
    }

    /// Internal degree, given the generator degrees of the ambient module.
    pub fn degree(&self, module: &FreeModule) -> Option<usize> {
        let (g, p) = self.terms.first()?;
        Some(p.degree()? + module.degree(*g))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Element {
            terms: self.terms.iter().map(|(g, p)| (*g, p.scale(c))).collect(),
        }
    }

    pub fn add(&self, other: &Element) -> Self {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    pub fn sub(&self, other: &Element) -> Self {
        let minus = other.terms.iter().map(|(g, p)| {
            let neg = Polynomial::from_terms(p.terms().iter().map(|(w, c)| (w.clone(), -c)));
            (*g, neg)
        });
        Self::from_terms(self.terms.iter().cloned().chain(minus))
    }

    /// `w · self`, reduced; zero if `w` does not compose.
    pub fn left_mul(&self, gb: &GroebnerBasis, w: &Word) -> Self {
        let mut out = Vec::with_capacity(self.terms.len());
        for (g, p) in &self.terms {
            let mut terms = Vec::new();
            for (u, c) in p.terms() {
                if let Some(prod) = gb.word_product(w, u) {
                    terms.extend(prod.terms().iter().map(|(v, a)| (v.clone(), a * c)));
                }
            }
            out.push((*g, Polynomial::from_terms(terms)));
        }
        Element::from_terms(out)
    }

    /// `p · self` for a polynomial `p`.
    pub fn poly_mul(&self, gb: &GroebnerBasis, p: &Polynomial) -> Self {
        let mut out = Vec::new();
        for (w, c) in p.terms() {
            out.extend(self.left_mul(gb, w).scale(c).terms);
        }
        Element::from_terms(out)
    }

    /// Image under the module map sending generator `h` to `images[h]`.
    pub fn apply(&self, gb: &GroebnerBasis, images: &[Element]) -> Element {
        let mut out = Vec::new();
        for (h, p) in &self.terms {
            out.extend(images[*h].poly_mul(gb, p).terms);
        }
        Element::from_terms(out)
    }

    /// Entry strings for generators `0..rank`, `"0"` where absent.
    pub fn format_row(&self, algebra: &AlgebraPresentation, rank: usize) -> Vec<String> {
        (0..rank)
            .map(|g| match self.entry(g) {
                Some(p) => algebra.format_polynomial(p),
                None => "0".into(),
            })
            .collect()
    }

    /// Entries with internal degree 0 relative to their column, i.e. scalar
    /// multiples of idempotents.
    pub fn constant_part(&self) -> Vec<(usize, Scalar)> {
        self.terms
            .iter()
            .filter_map(|(g, p)| {
                p.terms()
                    .iter()
                    .find(|(w, _)| w.is_empty())
                    .map(|(_, c)| (*g, c.clone()))
            })
            .collect()
    }
}

/// Coordinates of `e_v F_t`: for each generator `g` (in order) the normal
/// paths of degree `t - deg g` from `v` to `vertex(g)`.
#[derive(Clone, Debug)]
pub struct Slice {
    pub degree: usize,
    pub source: u16,
    gens: Vec<ModuleGenerator>,
    starts: Vec<usize>,
    sizes: Vec<usize>,
    dim: usize,
}

impl Slice {
    pub fn new(gb: &GroebnerBasis, module: &FreeModule, t: usize, source: u16) -> Self {
        let mut starts = Vec::with_capacity(module.rank());
        let mut sizes = Vec::with_capacity(module.rank());
        let mut dim = 0;
        for g in &module.generators {
            let n = if g.degree <= t {
                gb.basis(t - g.degree).map_or(0, |b| b.paths(source, g.vertex).len())
            } else {
                0
            };
            starts.push(dim);
            sizes.push(n);
            dim += n;
        }
        Slice {
            degree: t,
            source,
            gens: module.generators.clone(),
            starts,
            sizes,
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coordinate(&self, gb: &GroebnerBasis, g: usize, w: &Word) -> Option<usize> {
        let gen = self.gens[g];
        if self.sizes[g] == 0
            || w.source() != self.source
            || w.target() != gen.vertex
            || w.len() + gen.degree != self.degree
        {
            return None;
        }
        let basis = gb.basis(w.len()).ok()?;
        let i = basis.position(w)?;
        Some(self.starts[g] + basis.local_index(i))
    }

    /// The generator and path at coordinate `c`.
    pub fn basis_element(&self, gb: &GroebnerBasis, module: &FreeModule, c: usize) -> (usize, Word) {
        let g = self.starts.partition_point(|&s| s <= c) - 1;
        let gen = module.generators[g];
        let basis = gb.basis(self.degree - gen.degree).expect("inside window");
        let w = &basis.words()[basis.paths(self.source, gen.vertex)[c - self.starts[g]]];
        (g, w.clone())
    }

    /// Coordinates of every basis element, in order.
    pub fn basis_elements(&self, gb: &GroebnerBasis, module: &FreeModule) -> Vec<(usize, Word)> {
        let mut out = Vec::with_capacity(self.dim);
        for (g, gen) in module.generators.iter().enumerate() {
            if self.sizes[g] == 0 {
                continue;
            }
            let basis = gb.basis(self.degree - gen.degree).expect("inside window");
            for &i in basis.paths(self.source, gen.vertex) {
                out.push((g, basis.words()[i].clone()));
            }
        }
        out
    }

    pub fn to_vector(&self, gb: &GroebnerBasis, x: &Element) -> Result<SparseVec> {
        let mut out = Vec::new();
        for (g, p) in x.terms() {
            for (w, c) in p.terms() {
                let i = self
                    .coordinate(gb, *g, w)
                    .ok_or_else(|| Error::internal("element does not lie in the expected slice"))?;
                out.push((i, c.clone()));
            }
        }
        out.sort_by_key(|(i, _)| *i);
        Ok(out)
    }

    pub fn to_element(&self, gb: &GroebnerBasis, module: &FreeModule, v: &[(usize, Scalar)]) -> Element {
        Element::from_terms(v.iter().map(|(c, x)| {
            let (g, w) = self.basis_element(gb, module, *c);
            (g, Polynomial::monomial(w, x.clone()))
        }))
    }
}

/// Images in `target` of the basis of `slice` under the map with generator images `images`.
pub fn slice_images(
    gb: &GroebnerBasis,
    source_module: &FreeModule,
    slice: &Slice,
    images: &[Element],
    target: &Slice,
) -> Result<Vec<SparseVec>> {
    let basis = slice.basis_elements(gb, source_module);
    crate::par::try_map(&basis, |(g, w)| target.to_vector(gb, &images[*g].left_mul(gb, w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_algebra;
    use crate::rewrite::complete;

    #[test]
    fn slices_of_a_quiver_free_module() {
        let a = parse_algebra("field Q\nvertices 3\narrow a 1 2\narrow b 2 3\n").unwrap();
        let gb = complete(&a, 3).unwrap();
        let m = FreeModule::new(vec![
            ModuleGenerator { degree: 0, vertex: 2 },
            ModuleGenerator { degree: 1, vertex: 1 },
        ]);
        // e_1 F_2: paths 1 -> 3 of length 2 (ab) and paths 1 -> 2 of length 1 (a).
        let s = Slice::new(&gb, &m, 2, 0);
        assert_eq!(s.dim(), 2);
        let elems = s.basis_elements(&gb, &m);
        assert_eq!(a.format_word(&elems[0].1), "a*b");
        assert_eq!(a.format_word(&elems[1].1), "a");
        for (c, (g, w)) in elems.iter().enumerate() {
            assert_eq!(s.coordinate(&gb, *g, w), Some(c));
            assert_eq!(s.basis_element(&gb, &m, c), (*g, w.clone()));
        }
        assert_eq!(m.slice_dim(&gb, 2, 0), 2);
    }
}
