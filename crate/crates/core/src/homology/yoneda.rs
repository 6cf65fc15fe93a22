//! Yoneda products `E(A) × E(M) → E(M)` by lifting cocycles to chain maps.
//!
//! Classes in `E^i_j(M)` are functionals on the degree-`j` generators of
//! `Q_i` (the resolution is minimal, so every such functional is a cocycle
//! and none is a coboundary). A class `e2` is lifted to a chain map
//! `f_m : Q_{i2+m} → P_m(-j2)` by degreewise linear solves against the
//! resolution `P` of `k`, choosing the echelon-pivot solution; then
//! `e1 · e2 = e1 ∘ f_{i1}`. Only dimensions of products are used downstream,
//! so no sign convention is imposed.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{self, Echelon, SparseVec};

use super::free::{slice_images, Element, Slice};
use super::resolution::Resolution;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtElement {
    pub i: usize,
    pub j: usize,
    /// Coefficients on generators of `Q_i` (all of degree `j`), by generator index.
    pub coefficients: SparseVec,
}

impl ExtElement {
    /// The dual basis of `E^i_j`: one functional per degree-`j` generator of `Q_i`.
    pub fn basis(res: &Resolution, i: usize, j: usize) -> Vec<ExtElement> {
        let one = res.gb().algebra().field().one();
        generators_of_degree(res, i, j)
            .into_iter()
            .map(|g| ExtElement {
                i,
                j,
                coefficients: vec![(g, one.clone())],
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn zero(i: usize, j: usize) -> Self {
        ExtElement {
            i,
            j,
            coefficients: Vec::new(),
        }
    }
}

pub fn generators_of_degree(res: &Resolution, i: usize, j: usize) -> Vec<usize> {
    if i > res.length() {
        return Vec::new();
    }
    res.module(i)
        .generators
        .iter()
        .enumerate()
        .filter(|(_, g)| g.degree == j)
        .map(|(k, _)| k)
        .collect()
}

fn trivial_cover(res_k: &Resolution) -> Result<Vec<usize>> {
    let vertices = res_k.gb().algebra().vertices();
    let q0 = res_k.module(0);
    let mut by_vertex = vec![usize::MAX; vertices];
    for (g, gen) in q0.generators.iter().enumerate() {
        if gen.degree != 0 || by_vertex[gen.vertex as usize] != usize::MAX {
            return Err(Error::Precondition("first resolution must resolve the trivial module".into()));
        }
        by_vertex[gen.vertex as usize] = g;
    }
    if by_vertex.contains(&usize::MAX) {
        return Err(Error::Precondition("first resolution must resolve the trivial module".into()));
    }
    Ok(by_vertex)
}

struct SolveSystem {
    source: Slice,
    target: Slice,
    echelon: Echelon,
}

/// Solver for `∂^P_m x = y`, caching one eliminated system per `(m, t, v)`.
pub struct Lifter<'a> {
    res_k: &'a Resolution,
    cover: Vec<usize>,
    cache: RefCell<HashMap<(usize, usize, u16), Rc<SolveSystem>>>,
}

impl<'a> Lifter<'a> {
    pub fn new(res_k: &'a Resolution) -> Result<Self> {
        Ok(Lifter {
            res_k,
            cover: trivial_cover(res_k)?,
            cache: RefCell::new(HashMap::new()),
        })
    }

    fn system(&self, m: usize, t: usize, v: u16) -> Result<Rc<SolveSystem>> {
        if let Some(s) = self.cache.borrow().get(&(m, t, v)) {
            return Ok(Rc::clone(s));
        }
        let res = self.res_k;
        let gb = res.gb();
        let source = Slice::new(gb, res.module(m), t, v);
        let target = Slice::new(gb, res.module(m - 1), t, v);
        let images = slice_images(gb, res.module(m), &source, res.differential(m), &target)?;
        let mut echelon = Echelon::tracking(gb.algebra().field());
        echelon.extend(&images);
        let sys = Rc::new(SolveSystem {
            source,
            target,
            echelon,
        });
        self.cache.borrow_mut().insert((m, t, v), Rc::clone(&sys));
        Ok(sys)
    }

    fn solve(&self, m: usize, t: usize, v: u16, y: &Element) -> Result<Element> {
        if y.is_zero() {
            return Ok(Element::zero());
        }
        let sys = self.system(m, t, v)?;
        let gb = self.res_k.gb();
        let rhs = sys.target.to_vector(gb, y)?;
        let coeffs = sys
            .echelon
            .solve(&rhs)
            .ok_or_else(|| Error::internal(format!("lifting system at step {m}, degree {t} is inconsistent")))?;
        Ok(sys.source.to_element(gb, self.res_k.module(m), &coeffs))
    }

    /// The chain map `f_m : Q_{i2+m} → P_m(-j2)`, `m ≤ upto`, lifting `e2`,
    /// on all generators of degree at most `max_degree`.
    pub fn lift(&self, res_m: &Resolution, e2: &ExtElement, upto: usize, max_degree: usize) -> Result<ChainMap> {
        let (i2, j2) = (e2.i, e2.j);
        if i2 + upto > res_m.length() || upto > self.res_k.length() {
            return Err(Error::BeyondLength {
                needed: i2 + upto,
                length: res_m.length().min(self.res_k.length() + i2),
            });
        }
        if max_degree > res_m.bound() || max_degree.saturating_sub(j2) > self.res_k.bound() {
            return Err(Error::OutsideWindow {
                degree: max_degree,
                bound: res_m.bound(),
            });
        }
        let gb = res_m.gb();
        let field = gb.algebra().field();
        let mut maps: Vec<Vec<Element>> = Vec::with_capacity(upto + 1);
        let q = res_m.module(i2);
        let mut f0 = vec![Element::zero(); q.rank()];
        for (g, c) in &e2.coefficients {
            if q.degree(*g) != j2 {
                return Err(Error::Precondition(format!("generator {g} of Q_{i2} is not in degree {j2}")));
            }
            let v = q.vertex(*g);
            f0[*g] = Element::unit(self.cover[v as usize], v, field.one()).scale(c);
        }
        maps.push(f0);
        for m in 1..=upto {
            let qm = res_m.module(i2 + m);
            let mut fm = Vec::with_capacity(qm.rank());
            for (g, gen) in qm.generators.iter().enumerate() {
                if gen.degree > max_degree || gen.degree < j2 {
                    fm.push(Element::zero());
                    continue;
                }
                let y = res_m.differential(i2 + m)[g].apply(gb, &maps[m - 1]);
                fm.push(self.solve(m, gen.degree - j2, gen.vertex, &y)?);
            }
            maps.push(fm);
        }
        Ok(ChainMap { i2, j2, maps })
    }
}

/// `f_m` for `m = 0..=upto`; `maps[m][g]` is the image of generator `g` of `Q_{i2+m}`.
pub struct ChainMap {
    pub i2: usize,
    pub j2: usize,
    pub maps: Vec<Vec<Element>>,
}

impl ChainMap {
    /// `e1 · e2` for `e1 ∈ E^{i1}_{j1}(A)`.
    pub fn pair(&self, res_m: &Resolution, e1: &ExtElement) -> Result<ExtElement> {
        let (i, j) = (e1.i + self.i2, e1.j + self.j2);
        let fm = self
            .maps
            .get(e1.i)
            .ok_or_else(|| Error::internal("chain map not lifted far enough"))?;
        let weights: HashMap<usize, &Scalar> = e1.coefficients.iter().map(|(h, c)| (*h, c)).collect();
        let mut coefficients = Vec::new();
        for g in generators_of_degree(res_m, i, j) {
            let mut acc: Option<Scalar> = None;
            for (h, c) in fm[g].constant_part() {
                if let Some(w) = weights.get(&h) {
                    let t = &c * *w;
                    acc = Some(match acc {
                        Some(a) => &a + &t,
                        None => t,
                    });
                }
            }
            if let Some(a) = acc.filter(|a| !a.is_zero()) {
                coefficients.push((g, a));
            }
        }
        Ok(ExtElement { i, j, coefficients })
    }

    /// Matrix of the pairing with the dual basis of `E^{i1}_{j1}(A)`: one
    /// product vector per basis element.
    pub fn pair_basis(&self, res_k: &Resolution, res_m: &Resolution, i1: usize, j1: usize) -> Result<Vec<SparseVec>> {
        ExtElement::basis(res_k, i1, j1)
            .iter()
            .map(|e| self.pair(res_m, e).map(|p| p.coefficients))
            .collect()
    }
}

/// `e1 · e2` with `e1 ∈ E(A)` (over `res_k`, the resolution of `k`) and
/// `e2 ∈ E(M)` (over `res_m`).
pub fn yoneda_product(e1: &ExtElement, e2: &ExtElement, res_k: &Resolution, res_m: &Resolution) -> Result<ExtElement> {
    let lifter = Lifter::new(res_k)?;
    let f = lifter.lift(res_m, e2, e1.i, e1.j + e2.j)?;
    f.pair(res_m, e1)
}

/// `dim (E^{i1}_{j1}(A) · E^{i2}_{j2}(M))`.
pub fn product_rank(
    lifter: &Lifter,
    res_m: &Resolution,
    (i1, j1): (usize, usize),
    (i2, j2): (usize, usize),
) -> Result<usize> {
    let mut vectors = Vec::new();
    for e2 in ExtElement::basis(res_m, i2, j2) {
        let f = lifter.lift(res_m, &e2, i1, j1 + j2)?;
        vectors.extend(f.pair_basis(lifter.res_k, res_m, i1, j1)?);
    }
    Ok(linalg::rank(res_m.gb().algebra().field(), &vectors))
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerationRow {
    pub n: usize,
    pub degree: usize,
    pub beta: usize,
    pub image_rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerationReport {
    pub rows: Vec<GenerationRow>,
    /// `generated[n]`: whether `E^n(M) = E^n(A) E^0(M)` throughout the window.
    pub generated: Vec<bool>,
}

impl GenerationReport {
    pub fn all_generated(&self) -> bool {
        self.generated.iter().all(|&b| b)
    }
}

/// Compares `E^n(A) · E^0(M)` with `E^n(M)` degree by degree for `n ≤ L`.
pub fn ext_generated_in_degree0(res_k: &Resolution, res_m: &Resolution) -> Result<GenerationReport> {
    let lifter = Lifter::new(res_k)?;
    let length = res_m.length().min(res_k.length());
    let bound = res_m.bound();
    let field = res_m.gb().algebra().field();
    // products[n][j] collects product vectors landing in E^n_j(M).
    let mut products: Vec<Vec<Vec<SparseVec>>> = vec![vec![Vec::new(); bound + 1]; length + 1];
    let degrees0: Vec<usize> = {
        let mut d = res_m.module(0).degrees();
        d.dedup();
        d
    };
    for j2 in degrees0.into_iter().filter(|&j| j <= bound) {
        for e2 in ExtElement::basis(res_m, 0, j2) {
            let f = lifter.lift(res_m, &e2, length, bound)?;
            for n in 0..=length {
                for j in j2..=bound {
                    products[n][j].extend(f.pair_basis(res_k, res_m, n, j - j2)?);
                }
            }
        }
    }
    let mut rows = Vec::new();
    let mut generated = vec![true; length + 1];
    for n in 0..=length {
        for j in 0..=bound {
            let beta = generators_of_degree(res_m, n, j).len();
            let image_rank = linalg::rank(field, &products[n][j]);
            if beta > 0 || image_rank > 0 {
                generated[n] &= image_rank == beta;
                rows.push(GenerationRow {
                    n,
                    degree: j,
                    beta,
                    image_rank,
                });
            }
        }
    }
    Ok(GenerationReport { rows, generated })
}
