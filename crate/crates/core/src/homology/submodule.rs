//! Submodules of a graded free module stored slice by slice.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, Insertion, SparseVec};
use crate::presentation::ModulePresentation;
use crate::rewrite::GroebnerBasis;

use super::free::{slice_images, Element, FreeModule, Slice};
use super::resolution::{Homogeneous, Resolution, Subquotient};

/// A submodule `S ⊆ F`, known through its subspaces `e_v S_t` for `t ≤ bound`.
#[derive(Clone, Debug)]
pub struct DegreewiseModule {
    gb: Arc<GroebnerBasis>,
    ambient: FreeModule,
    bound: usize,
    /// `spaces[t][v]`: echelon basis of `e_v S_t` in the coordinates of [`Slice`].
    spaces: Vec<Vec<Echelon>>,
}

impl DegreewiseModule {
    fn vertices(gb: &GroebnerBasis) -> u16 {
        gb.algebra().vertices() as u16
    }

    fn check_bound(gb: &GroebnerBasis, bound: usize) -> Result<()> {
        if bound > gb.bound() {
            return Err(Error::OutsideWindow {
                degree: bound,
                bound: gb.bound(),
            });
        }
        Ok(())
    }

    pub fn zero(gb: &Arc<GroebnerBasis>, ambient: FreeModule, bound: usize) -> Result<Self> {
        Self::check_bound(gb, bound)?;
        let field = gb.algebra().field();
        let v = Self::vertices(gb) as usize;
        Ok(DegreewiseModule {
            gb: Arc::clone(gb),
            ambient,
            bound,
            spaces: (0..=bound).map(|_| (0..v).map(|_| Echelon::new(field)).collect()).collect(),
        })
    }

    /// The submodule generated by homogeneous elements.
    pub fn from_generators(
        gb: &Arc<GroebnerBasis>,
        ambient: FreeModule,
        generators: &[Homogeneous],
        bound: usize,
    ) -> Result<Self> {
        let mut m = Self::zero(gb, ambient, bound)?;
        for t in 0..=bound {
            for v in 0..Self::vertices(gb) {
                let slice = m.slice(t, v);
                for x in generators {
                    let Some(src) = x.element.source() else { continue };
                    if x.degree > t {
                        continue;
                    }
                    let basis = gb.basis(t - x.degree)?;
                    for &i in basis.paths(v, src) {
                        let y = x.element.left_mul(gb, &basis.words()[i]);
                        m.spaces[t][v as usize].insert(&slice.to_vector(gb, &y)?);
                    }
                }
            }
        }
        Ok(m)
    }

    /// The whole ambient module.
    pub fn full(gb: &Arc<GroebnerBasis>, ambient: FreeModule, bound: usize) -> Result<Self> {
        let one = gb.algebra().field().one();
        let gens: Vec<Homogeneous> = ambient
            .generators
            .iter()
            .enumerate()
            .map(|(g, gen)| Homogeneous {
                degree: gen.degree,
                element: Element::unit(g, gen.vertex, one.clone()),
            })
            .collect();
        Self::from_generators(gb, ambient, &gens, bound)
    }

    pub fn gb(&self) -> &Arc<GroebnerBasis> {
        &self.gb
    }

    pub fn ambient(&self) -> &FreeModule {
        &self.ambient
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn slice(&self, t: usize, v: u16) -> Slice {
        Slice::new(&self.gb, &self.ambient, t, v)
    }

    pub fn space(&self, t: usize, v: u16) -> &Echelon {
        &self.spaces[t][v as usize]
    }

    pub fn dim(&self, t: usize) -> usize {
        self.spaces[t].iter().map(Echelon::rank).sum()
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.bound).map(|t| self.dim(t)).collect()
    }

    /// Basis elements of `e_v S_t`.
    pub fn basis(&self, t: usize, v: u16) -> Vec<Element> {
        let slice = self.slice(t, v);
        self.space(t, v)
            .rows()
            .iter()
            .map(|r| slice.to_element(&self.gb, &self.ambient, r))
            .collect()
    }

    pub fn contains(&self, x: &Homogeneous) -> Result<bool> {
        if x.element.is_zero() {
            return Ok(true);
        }
        if x.degree > self.bound {
            return Err(Error::OutsideWindow {
                degree: x.degree,
                bound: self.bound,
            });
        }
        let v = x.element.source().expect("nonzero");
        let slice = self.slice(x.degree, v);
        Ok(self.space(x.degree, v).contains(&slice.to_vector(&self.gb, &x.element)?))
    }

    fn same_ambient(&self, other: &DegreewiseModule) -> Result<()> {
        if self.ambient != other.ambient || !Arc::ptr_eq(&self.gb, &other.gb) && self.gb.rules() != other.gb.rules() {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &DegreewiseModule,
        f: impl Fn(&Echelon, &Echelon) -> Vec<SparseVec>,
    ) -> Result<DegreewiseModule> {
        self.same_ambient(other)?;
        let bound = self.bound.min(other.bound);
        let mut out = Self::zero(&self.gb, self.ambient.clone(), bound)?;
        for t in 0..=bound {
            for v in 0..Self::vertices(&self.gb) as usize {
                out.spaces[t][v].extend(&f(&self.spaces[t][v], &other.spaces[t][v]));
            }
        }
        Ok(out)
    }

    pub fn intersect(&self, other: &DegreewiseModule) -> Result<DegreewiseModule> {
        let field = self.gb.algebra().field();
        self.zip_with(other, |a, b| linalg::intersect(field, a.rows(), b.rows()))
    }

    pub fn sum(&self, other: &DegreewiseModule) -> Result<DegreewiseModule> {
        self.zip_with(other, |a, b| a.rows().iter().chain(b.rows()).cloned().collect())
    }

    pub fn is_submodule_of(&self, other: &DegreewiseModule) -> Result<bool> {
        self.same_ambient(other)?;
        let bound = self.bound.min(other.bound);
        Ok((0..=bound).all(|t| {
            self.spaces[t]
                .iter()
                .zip(&other.spaces[t])
                .all(|(a, b)| a.rows().iter().all(|r| b.contains(r)))
        }))
    }

    pub fn equals(&self, other: &DegreewiseModule) -> Result<bool> {
        Ok(self.is_submodule_of(other)? && other.is_submodule_of(self)?)
    }

    /// `(J S)_t = Σ_a a · S_{t-1}`.
    pub fn radical(&self) -> Result<DegreewiseModule> {
        let gb = &self.gb;
        let mut out = Self::zero(gb, self.ambient.clone(), self.bound)?;
        let algebra = gb.algebra();
        for t in 1..=self.bound {
            for v in 0..Self::vertices(gb) {
                let slice = self.slice(t, v);
                for (i, arrow) in algebra.generators().iter().enumerate() {
                    if arrow.source != v {
                        continue;
                    }
                    let a = algebra.letter(i);
                    for x in self.basis(t - 1, arrow.target) {
                        let y = x.left_mul(gb, &a);
                        out.spaces[t][v as usize].insert(&slice.to_vector(gb, &y)?);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Whether `a · S_t ⊆ S_{t+1}` for every arrow `a` and `t < bound`.
    pub fn is_closed(&self) -> Result<bool> {
        let r = self.radical()?;
        Ok((1..=self.bound).all(|t| {
            r.spaces[t]
                .iter()
                .zip(&self.spaces[t])
                .all(|(a, b)| a.rows().iter().all(|x| b.contains(x)))
        }))
    }

    /// A basis of `S_t` modulo `(J S)_t` for every `t`, as homogeneous
    /// elements (echelon pivots decide the choice).
    pub fn minimal_generators(&self) -> Result<Vec<Homogeneous>> {
        let rad = self.radical()?;
        let mut out = Vec::new();
        for t in 0..=self.bound {
            for v in 0..Self::vertices(&self.gb) {
                let slice = self.slice(t, v);
                let mut ech = rad.spaces[t][v as usize].clone();
                for row in self.space(t, v).rows() {
                    if let Insertion::Pivot(_) = ech.insert(row) {
                        out.push(Homogeneous {
                            degree: t,
                            element: slice.to_element(&self.gb, &self.ambient, row),
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Minimal resolution of this submodule, through `length`.
    pub fn resolve(&self, length: usize) -> Result<Resolution> {
        let gens = self.minimal_generators()?;
        super::resolution::resolve(
            &self.gb,
            Subquotient::submodule(self.ambient.clone(), gens),
            length,
            self.bound,
        )
    }
}

/// `ker(f)` for the map `source → target` sending generator `g` to `images[g]`.
pub fn kernel_of(
    gb: &Arc<GroebnerBasis>,
    source: &FreeModule,
    images: &[Element],
    target: &FreeModule,
    bound: usize,
) -> Result<DegreewiseModule> {
    let field = gb.algebra().field();
    let mut out = DegreewiseModule::zero(gb, source.clone(), bound)?;
    for t in 0..=bound {
        for v in 0..gb.algebra().vertices() as u16 {
            let s = Slice::new(gb, source, t, v);
            let tg = Slice::new(gb, target, t, v);
            let imgs = slice_images(gb, source, &s, images, &tg)?;
            out.spaces[t][v as usize].extend(&linalg::kernel(field, &imgs));
        }
    }
    Ok(out)
}

/// `Ω^n = im(∂_n) ⊆ Q_{n-1}` for `1 ≤ n ≤ L`.
pub fn syzygy_module(res: &Resolution, n: usize) -> Result<DegreewiseModule> {
    if n == 0 || n > res.length() {
        return Err(Error::Precondition(format!(
            "syzygy index {n} must lie in 1..={}",
            res.length()
        )));
    }
    let prev = res.module(n - 1);
    let gens: Vec<Homogeneous> = res
        .differential(n)
        .iter()
        .zip(&res.module(n).generators)
        .map(|(x, g)| Homogeneous {
            degree: g.degree,
            element: x.clone(),
        })
        .collect();
    DegreewiseModule::from_generators(res.gb(), prev.clone(), &gens, res.bound())
}

/// `M = F/K` realized slice by slice.
#[derive(Clone, Debug)]
pub struct QuotientModule {
    pub relations: DegreewiseModule,
}

impl QuotientModule {
    pub fn ambient(&self) -> &FreeModule {
        self.relations.ambient()
    }

    pub fn dim(&self, t: usize) -> usize {
        let gb = self.relations.gb();
        let total: usize = (0..gb.algebra().vertices() as u16)
            .map(|v| self.ambient().slice_dim(gb, t, v))
            .sum();
        total - self.relations.dim(t)
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.relations.bound()).map(|t| self.dim(t)).collect()
    }
}

/// Cokernel slices of a presented module.
pub fn present_degreewise(gb: &Arc<GroebnerBasis>, m: &ModulePresentation, bound: usize) -> Result<QuotientModule> {
    let sq = Subquotient::from_presentation(gb, m);
    Ok(QuotientModule {
        relations: DegreewiseModule::from_generators(gb, sq.ambient, &sq.relations, bound)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::resolution::minimal_resolution;
    use crate::presentation::{parse_algebra, parse_module};
    use crate::rewrite::complete;

    fn setup() -> (Arc<GroebnerBasis>, crate::presentation::AlgebraPresentation) {
        let a = parse_algebra("field Q\ngens x,y,z,w\nrel y*x\nrel z*z*y\nrel w*z\n").unwrap();
        (Arc::new(complete(&a, 6).unwrap()), a)
    }

    #[test]
    fn cokernel_dimensions() {
        let (gb, a) = setup();
        let k = present_degreewise(&gb, &ModulePresentation::trivial(&a), 4).unwrap();
        assert_eq!(k.dims(), vec![1, 0, 0, 0, 0]);
        let free = present_degreewise(&gb, &ModulePresentation::free(&a, &[0]).unwrap(), 4).unwrap();
        assert_eq!(free.dims(), gb.hilbert_series()[..5].to_vec());
        let m = parse_module("free 0,0\nrel x,0\nrel 0,y\n", &a).unwrap();
        let m = present_degreewise(&gb, &m, 4).unwrap();
        assert_eq!(m.dim(0), 2);
        assert_eq!(m.dim(1), 6);
    }

    #[test]
    fn radical_and_generators() {
        let (gb, a) = setup();
        let free = FreeModule::new(ModulePresentation::free(&a, &[0]).unwrap().generators().to_vec());
        let whole = DegreewiseModule::full(&gb, free.clone(), 4).unwrap();
        let j = whole.radical().unwrap();
        assert_eq!(j.dim(0), 0);
        assert_eq!(j.dim(1), 4);
        let gens = j.minimal_generators().unwrap();
        assert_eq!(gens.len(), 4);
        assert!(gens.iter().all(|g| g.degree == 1));
        assert!(j.is_closed().unwrap());
        assert!(j.intersect(&j).unwrap().equals(&j).unwrap());
    }

    #[test]
    fn syzygies_of_the_trivial_module() {
        let (gb, a) = setup();
        let res = minimal_resolution(&gb, &ModulePresentation::trivial(&a), 3, 6).unwrap();
        let omega1 = syzygy_module(&res, 1).unwrap();
        assert_eq!(omega1.dim(1), 4);
        let g1: Vec<usize> = omega1.minimal_generators().unwrap().iter().map(|h| h.degree).collect();
        assert_eq!(g1, vec![1, 1, 1, 1]);
        let omega2 = syzygy_module(&res, 2).unwrap();
        let g2: Vec<usize> = omega2.minimal_generators().unwrap().iter().map(|h| h.degree).collect();
        assert_eq!(g2, vec![2, 2, 3]);
        // Ω² is the kernel of ∂_1.
        let ker = kernel_of(&gb, res.module(1), res.differential(1), res.module(0), 6).unwrap();
        assert!(ker.equals(&omega2).unwrap());
    }
}
