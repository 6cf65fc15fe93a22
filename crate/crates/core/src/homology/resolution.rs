//! Minimal graded free resolutions, built degree by degree.
//!
//! The resolved module is a subquotient `N = (S + T)/T` of a free module `F`,
//! with `S` and `T` given by homogeneous generators. A presentation is the case
//! `S = F`; a submodule is the case `T = 0`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, Insertion, SparseVec};
use crate::presentation::{ModuleGenerator, ModulePresentation};
use crate::rewrite::GroebnerBasis;

use super::free::{slice_images, Element, FreeModule, Slice};

/// A homogeneous element together with its internal degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homogeneous {
    pub degree: usize,
    pub element: Element,
}

#[derive(Clone, Debug)]
pub struct Subquotient {
    pub ambient: FreeModule,
    pub generators: Vec<Homogeneous>,
    pub relations: Vec<Homogeneous>,
}

impl Subquotient {
    pub fn from_presentation(gb: &GroebnerBasis, m: &ModulePresentation) -> Self {
        let ambient = FreeModule::new(m.generators().to_vec());
        let one = gb.algebra().field().one();
        let generators = m
            .generators()
            .iter()
            .enumerate()
            .map(|(g, gen)| Homogeneous {
                degree: gen.degree,
                element: Element::unit(g, gen.vertex, one.clone()),
            })
            .collect();
        let relations = m
            .relations()
            .iter()
            .enumerate()
            .map(|(r, row)| Homogeneous {
                degree: m.row_degree(r),
                element: Element::from_terms(row.iter().enumerate().map(|(g, p)| (g, gb.reduce(p)))),
            })
            .filter(|h| !h.element.is_zero())
            .collect();
        Subquotient {
            ambient,
            generators,
            relations,
        }
    }

    /// The submodule of `ambient` generated by `generators`.
    pub fn submodule(ambient: FreeModule, generators: Vec<Homogeneous>) -> Self {
        Subquotient {
            ambient,
            generators,
            relations: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ResolutionLimits {
    pub max_generators: usize,
    pub max_slice_dim: usize,
}

impl Default for ResolutionLimits {
    fn default() -> Self {
        ResolutionLimits {
            max_generators: 20_000,
            max_slice_dim: 2_000_000,
        }
    }
}

/// `F ← Q_0 ← Q_1 ← … ← Q_L`, minimal and exact in internal degrees `≤ bound`.
///
/// `differentials[0]` maps `Q_0` into the ambient free module; its image
/// modulo the relations is the resolved module.
#[derive(Clone, Debug)]
pub struct Resolution {
    gb: Arc<GroebnerBasis>,
    ambient: FreeModule,
    generators: Vec<Homogeneous>,
    relations: Vec<Homogeneous>,
    modules: Vec<FreeModule>,
    differentials: Vec<Vec<Element>>,
    /// `ranks[n][t][v]`: rank of `∂_n` on `e_v (Q_n)_t`; for `n = 0` this is `dim e_v N_t`.
    ranks: Vec<Vec<Vec<usize>>>,
    length: usize,
    bound: usize,
}

/// Minimal resolution of a presented module, through homological degree
/// `length` and internal degree `bound`.
pub fn minimal_resolution(
    gb: &Arc<GroebnerBasis>,
    m: &ModulePresentation,
    length: usize,
    bound: usize,
) -> Result<Resolution> {
    resolve(gb, Subquotient::from_presentation(gb, m), length, bound)
}

pub fn resolve(gb: &Arc<GroebnerBasis>, input: Subquotient, length: usize, bound: usize) -> Result<Resolution> {
    resolve_with(gb, input, length, bound, ResolutionLimits::default())
}

pub fn resolve_with(
    gb: &Arc<GroebnerBasis>,
    input: Subquotient,
    length: usize,
    bound: usize,
    limits: ResolutionLimits,
) -> Result<Resolution> {
    if bound > gb.bound() {
        return Err(Error::OutsideWindow {
            degree: bound,
            bound: gb.bound(),
        });
    }
    let mut res = Resolution {
        gb: Arc::clone(gb),
        ambient: input.ambient.clone(),
        generators: input.generators.clone(),
        relations: input.relations.clone(),
        modules: Vec::new(),
        differentials: Vec::new(),
        ranks: Vec::new(),
        length,
        bound,
    };
    res.first_step(&input.generators, limits)?;
    for n in 1..=length {
        res.next_step(n, limits)?;
    }
    Ok(res)
}

impl Resolution {
    fn vertices(&self) -> usize {
        self.gb.algebra().vertices()
    }

    fn slice(&self, module: &FreeModule, t: usize, v: u16, limits: ResolutionLimits) -> Result<Slice> {
        let s = Slice::new(&self.gb, module, t, v);
        if s.dim() > limits.max_slice_dim {
            return Err(Error::ResourceLimit {
                what: "slice dimension".into(),
                cap: limits.max_slice_dim,
            });
        }
        Ok(s)
    }

    /// Vectors spanning `e_v (A·xs)_t` inside `target`.
    fn span_vectors(&self, xs: &[(&Homogeneous, u16)], target: &Slice) -> Result<Vec<SparseVec>> {
        let t = target.degree;
        let mut jobs = Vec::new();
        for (x, source) in xs {
            if x.degree > t {
                continue;
            }
            let basis = self.gb.basis(t - x.degree)?;
            for &i in basis.paths(target.source, *source) {
                jobs.push((&x.element, &basis.words()[i]));
            }
        }
        crate::par::try_map(&jobs, |(x, w)| target.to_vector(&self.gb, &x.left_mul(&self.gb, w)))
    }

    fn relation_vectors(&self, target: &Slice) -> Result<Vec<SparseVec>> {
        let rels: Vec<(&Homogeneous, u16)> = self
            .relations
            .iter()
            .filter_map(|r| r.element.source().map(|s| (r, s)))
            .collect();
        self.span_vectors(&rels, target)
    }

    fn first_step(&mut self, generators: &[Homogeneous], limits: ResolutionLimits) -> Result<()> {
        let field = self.gb.algebra().field();
        let mut module = FreeModule::default();
        let mut images: Vec<Element> = Vec::new();
        let mut ranks = vec![vec![0; self.vertices()]; self.bound + 1];
        for t in 0..=self.bound {
            for v in 0..self.vertices() as u16 {
                let slice = self.slice(&self.ambient, t, v, limits)?;
                let mut ech = Echelon::new(field);
                ech.extend(&self.relation_vectors(&slice)?);
                let rank_t = ech.rank();
                let lower: Vec<Homogeneous> = module
                    .generators
                    .iter()
                    .zip(&images)
                    .map(|(g, x)| Homogeneous {
                        degree: g.degree,
                        element: x.clone(),
                    })
                    .collect();
                let lower_refs: Vec<(&Homogeneous, u16)> =
                    lower.iter().zip(&module.generators).map(|(h, g)| (h, g.vertex)).collect();
                ech.extend(&self.span_vectors(&lower_refs, &slice)?);
                for s in generators.iter().filter(|s| s.degree == t) {
                    if s.element.source() != Some(v) {
                        continue;
                    }
                    let vec = slice.to_vector(&self.gb, &s.element)?;
                    if let Insertion::Pivot(_) = ech.insert(&vec) {
                        module.generators.push(ModuleGenerator { degree: t, vertex: v });
                        images.push(s.element.clone());
                    }
                }
                ranks[t][v as usize] = ech.rank() - rank_t;
            }
            if module.rank() > limits.max_generators {
                return Err(Error::ResourceLimit {
                    what: "generators of Q_0".into(),
                    cap: limits.max_generators,
                });
            }
        }
        self.modules.push(module);
        self.differentials.push(images);
        self.ranks.push(ranks);
        Ok(())
    }

    /// Basis of `ker(∂_{n-1})` on `e_v (Q_{n-1})_t` (modulo relations when `n = 1`).
    fn kernel_at(&self, n: usize, source: &Slice, limits: ResolutionLimits) -> Result<Vec<SparseVec>> {
        let field = self.gb.algebra().field();
        let (t, v) = (source.degree, source.source);
        let prev = &self.modules[n - 1];
        if n == 1 {
            let target = self.slice(&self.ambient, t, v, limits)?;
            let rels = self.relation_vectors(&target)?;
            let images = slice_images(&self.gb, prev, source, &self.differentials[0], &target)?;
            let mut ech = Echelon::tracking(field);
            ech.extend(&rels);
            let offset = rels.len();
            let mut out = Vec::new();
            for img in &images {
                if let Insertion::Dependent(Some(rel)) = ech.insert(img) {
                    out.push(
                        rel.into_iter()
                            .filter(|(i, _)| *i >= offset)
                            .map(|(i, c)| (i - offset, c))
                            .collect(),
                    );
                }
            }
            Ok(out)
        } else {
            let below = &self.modules[n - 2];
            let target = self.slice(below, t, v, limits)?;
            let images = slice_images(&self.gb, prev, source, &self.differentials[n - 1], &target)?;
            Ok(linalg::kernel(field, &images))
        }
    }

    fn next_step(&mut self, n: usize, limits: ResolutionLimits) -> Result<()> {
        let field = self.gb.algebra().field();
        let mut module = FreeModule::default();
        let mut images: Vec<Element> = Vec::new();
        let mut ranks = vec![vec![0; self.vertices()]; self.bound + 1];
        for t in 0..=self.bound {
            for v in 0..self.vertices() as u16 {
                let prev = &self.modules[n - 1];
                let source = self.slice(prev, t, v, limits)?;
                let kdim = source.dim() - self.ranks[n - 1][t][v as usize];
                let mut ech = Echelon::new(field);
                if kdim > 0 && !module.is_zero() {
                    let lower = FreeModule::new(module.generators.clone());
                    let own = self.slice(&lower, t, v, limits)?;
                    ech.extend(&slice_images(&self.gb, &lower, &own, &images, &source)?);
                }
                if ech.rank() < kdim {
                    for k in self.kernel_at(n, &source, limits)? {
                        if let Insertion::Pivot(_) = ech.insert(&k) {
                            module.generators.push(ModuleGenerator { degree: t, vertex: v });
                            images.push(source.to_element(&self.gb, prev, &k));
                        }
                        if ech.rank() == kdim {
                            break;
                        }
                    }
                }
                if ech.rank() != kdim {
                    return Err(Error::internal(format!(
                        "step {n}, degree {t}: image rank {} but kernel dimension {kdim}",
                        ech.rank()
                    )));
                }
                ranks[t][v as usize] = kdim;
            }
            if module.rank() > limits.max_generators {
                return Err(Error::ResourceLimit {
                    what: format!("generators of Q_{n}"),
                    cap: limits.max_generators,
                });
            }
        }
        self.modules.push(module);
        self.differentials.push(images);
        self.ranks.push(ranks);
        Ok(())
    }

    pub fn gb(&self) -> &Arc<GroebnerBasis> {
        &self.gb
    }

    pub fn ambient(&self) -> &FreeModule {
        &self.ambient
    }

    /// Generators of `S` for the resolved subquotient `(S + T)/T`.
    pub fn generators(&self) -> &[Homogeneous] {
        &self.generators
    }

    /// Generators of `T`.
    pub fn relations(&self) -> &[Homogeneous] {
        &self.relations
    }

    /// `Q_0, …, Q_L`.
    pub fn modules(&self) -> &[FreeModule] {
        &self.modules
    }

    pub fn module(&self, n: usize) -> &FreeModule {
        &self.modules[n]
    }

    /// Generator images of `∂_n : Q_n → Q_{n-1}` (`Q_{-1}` is the ambient module).
    pub fn differential(&self, n: usize) -> &[Element] {
        &self.differentials[n]
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// `dim N_t` of the resolved module.
    pub fn module_dim(&self, t: usize) -> usize {
        self.ranks[0][t].iter().sum()
    }

    /// Rank of `∂_n` in internal degree `t` (for `n = 0`, `dim N_t`).
    pub fn rank(&self, n: usize, t: usize) -> usize {
        self.ranks[n][t].iter().sum()
    }

    pub fn rank_at(&self, n: usize, t: usize, v: u16) -> usize {
        self.ranks[n][t][v as usize]
    }

    /// `dim (Q_n)_t`.
    pub fn term_dim(&self, n: usize, t: usize) -> usize {
        (0..self.vertices() as u16)
            .map(|v| self.modules[n].slice_dim(&self.gb, t, v))
            .sum()
    }

    /// `dim ker(∂_L)_t`, the part of the resolution not yet covered.
    pub fn top_kernel_dim(&self, t: usize) -> usize {
        self.term_dim(self.length, t) - self.rank(self.length, t)
    }

    /// Largest `n ≤ L` with `Q_n ≠ 0` in the window.
    pub fn last_nonzero(&self) -> Option<usize> {
        self.modules.iter().rposition(|m| !m.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{parse_algebra, parse_module};
    use crate::rewrite::complete;

    fn degrees(res: &Resolution) -> Vec<Vec<usize>> {
        res.modules().iter().map(FreeModule::degrees).collect()
    }

    #[test]
    fn trivial_module_over_section_four_algebra() {
        let a = parse_algebra("field Q\ngens x,y,z,w\nrel y*x\nrel z*z*y\nrel w*z\n").unwrap();
        let gb = Arc::new(complete(&a, 8).unwrap());
        let k = ModulePresentation::trivial(&a);
        let res = minimal_resolution(&gb, &k, 5, 8).unwrap();
        assert_eq!(
            degrees(&res),
            vec![vec![0], vec![1, 1, 1, 1], vec![2, 2, 3], vec![4, 4], vec![5], vec![]]
        );
        assert_eq!(res.module_dim(0), 1);
        assert_eq!(res.module_dim(3), 0);
    }

    #[test]
    fn example_module() {
        let a = parse_algebra("field Q\ngens x,y,z,w\nrel y*x\nrel z*z*y\nrel w*z\n").unwrap();
        let gb = Arc::new(complete(&a, 8).unwrap());
        let m = parse_module("free 0,0\nrel x,0\nrel 0,y\n", &a).unwrap();
        let res = minimal_resolution(&gb, &m, 5, 8).unwrap();
        assert_eq!(
            degrees(&res),
            vec![vec![0, 0], vec![1, 1], vec![2, 3], vec![4, 4], vec![5], vec![]]
        );
        assert_eq!(res.module_dim(1), 6);
    }

    #[test]
    fn free_algebra_has_global_dimension_one() {
        let a = parse_algebra("field Q\ngens x,y\n").unwrap();
        let gb = Arc::new(complete(&a, 6).unwrap());
        let res = minimal_resolution(&gb, &ModulePresentation::trivial(&a), 3, 6).unwrap();
        assert_eq!(degrees(&res), vec![vec![0], vec![1, 1], vec![], vec![]]);
    }

    #[test]
    fn truncated_polynomial_ring() {
        let a = parse_algebra("field Q\ngens x\nrel x*x*x\n").unwrap();
        let gb = Arc::new(complete(&a, 9).unwrap());
        let res = minimal_resolution(&gb, &ModulePresentation::trivial(&a), 5, 9).unwrap();
        assert_eq!(
            degrees(&res),
            vec![vec![0], vec![1], vec![3], vec![4], vec![6], vec![7]]
        );
    }

    #[test]
    fn non_minimal_presentation_is_minimized() {
        let a = parse_algebra("field Q\ngens x,y\nrel x*y\n").unwrap();
        let gb = Arc::new(complete(&a, 5).unwrap());
        // the relation `0, 1` kills the second generator outright.
        let m = parse_module("free 0,0\nrel 0,1\n", &a).unwrap();
        let res = minimal_resolution(&gb, &m, 2, 5).unwrap();
        assert_eq!(res.module(0).degrees(), vec![0]);
        assert!(res.module(1).is_zero());
    }
}
