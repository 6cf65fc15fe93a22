//! Free products of connected algebras, the Ext-level direct-sum facts, the
//! free-product recipe for strongly bi-Koszul algebras, and a search for
//! small monomial algebras with the pure δ-patterns.

mod corpus;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{self, BettiTable, ExtElement, Lifter, Resolution, Window};
use crate::koszulity::{check_pattern, classify, obstruction, ObstructionReport, Pattern, Verdict};
use crate::linalg;
use crate::presentation::{AlgebraPresentation, ModulePresentation, Polynomial, Word};
use crate::rewrite::{self, GroebnerBasis};

pub use corpus::{corpus_search, CorpusEntry, CorpusParams};

/// `A ⊔ A′`: generators and relations united, no cross relations. A name of
/// `A′` that collides with one of `A` gets the suffix `_2` (then `_3`, ...).
pub fn free_product(a: &AlgebraPresentation, b: &AlgebraPresentation) -> Result<AlgebraPresentation> {
    if a.is_quiver() || b.is_quiver() {
        return Err(Error::Precondition("free products are formed of connected algebras only".into()));
    }
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().to_string(), b.field().to_string()));
    }
    let mut names: Vec<String> = a.generators().iter().map(|g| g.name.clone()).collect();
    for g in b.generators() {
        let mut name = g.name.clone();
        let mut k = 2;
        while names.contains(&name) {
            name = format!("{}_{k}", g.name);
            k += 1;
        }
        names.push(name);
    }
    let shift = a.num_generators() as u8;
    let relations: Vec<Polynomial> = a
        .relations()
        .iter()
        .cloned()
        .chain(b.relations().iter().map(|r| {
            Polynomial::from_terms(r.terms().iter().map(|(w, c)| {
                let letters: Vec<u8> = w.letters().iter().map(|l| l + shift).collect();
                (shifted_word(&letters), c.clone())
            }))
        }))
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    AlgebraPresentation::connected(a.field(), &refs, relations)
}

fn shifted_word(letters: &[u8]) -> Word {
    Word::from_parts(0, 0, letters.iter().copied().collect())
}

/// `h_{A⊔A′}(j)` by brute force: words of length `j` over both alphabets whose
/// maximal one-factor blocks are normal words of their factor.
pub fn alternating_word_count(a: &GroebnerBasis, b: &GroebnerBasis, j: usize) -> usize {
    let na = a.algebra().num_generators();
    let n = na + b.algebra().num_generators();
    if n == 0 {
        return usize::from(j == 0);
    }
    let mut letters = vec![0u8; j];
    let mut count = 0;
    loop {
        let normal = letters
            .chunk_by(|x, y| ((*x as usize) < na) == ((*y as usize) < na))
            .all(|block| {
                if (block[0] as usize) < na {
                    a.is_normal(&shifted_word(block))
                } else {
                    let local: Vec<u8> = block.iter().map(|l| l - na as u8).collect();
                    b.is_normal(&shifted_word(&local))
                }
            });
        count += usize::from(normal);
        let mut k = j;
        loop {
            if k == 0 {
                return count;
            }
            k -= 1;
            letters[k] += 1;
            if (letters[k] as usize) < n {
                break;
            }
            letters[k] = 0;
        }
    }
}

fn resolve_k(algebra: &AlgebraPresentation, window: Window) -> Result<Resolution> {
    let gb = Arc::new(rewrite::complete(algebra, window.degree_bound)?);
    homology::minimal_resolution(
        &gb,
        &ModulePresentation::trivial(algebra),
        window.length,
        window.degree_bound,
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct AdditivityRow {
    pub i: usize,
    pub j: usize,
    pub product: usize,
    pub left: usize,
    pub right: usize,
    pub holds: bool,
}

/// Which factor a generator of the product's resolution comes from, read off
/// the letters in its differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
    Mixed,
}

#[derive(Clone, Debug, Serialize)]
pub struct MixedProduct {
    /// `(i, j, generator)` of the left factor's class.
    pub left: (usize, usize, usize),
    pub right: (usize, usize, usize),
    /// `left · right` and `right · left` both vanish.
    pub vanishes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtSumReport {
    pub base_holds: bool,
    pub rows: Vec<AdditivityRow>,
    /// Generators of the product's resolution not attributable to one factor.
    pub unclassified: usize,
    pub mixed_products: Vec<MixedProduct>,
    pub window: Window,
}

impl ExtSumReport {
    pub fn holds(&self) -> bool {
        self.base_holds && self.rows.iter().all(|r| r.holds) && self.mixed_products.iter().all(|p| p.vanishes)
    }
}

fn sides(res: &Resolution, split: usize) -> Vec<Vec<Side>> {
    res.modules()
        .iter()
        .enumerate()
        .map(|(i, q)| {
            (0..q.rank())
                .map(|g| {
                    if i == 0 {
                        return Side::Mixed;
                    }
                    let mut left = false;
                    let mut right = false;
                    for (_, p) in res.differential(i)[g].terms() {
                        for (w, _) in p.terms() {
                            for &l in w.letters() {
                                if (l as usize) < split {
                                    left = true;
                                } else {
                                    right = true;
                                }
                            }
                        }
                    }
                    match (left, right) {
                        (true, false) => Side::Left,
                        (false, true) => Side::Right,
                        _ => Side::Mixed,
                    }
                })
                .collect()
        })
        .collect()
}

/// Betti additivity `β_{i,j}(A⊔A′) = β_{i,j}(A) + β_{i,j}(A′)` for `1 ≤ i ≤ L`,
/// `j ≤ D`, and vanishing of up to `samples` mixed Yoneda products of basis
/// classes, in both orders.
pub fn ext_sum_check(
    a: &AlgebraPresentation,
    b: &AlgebraPresentation,
    window: Window,
    samples: usize,
) -> Result<ExtSumReport> {
    let product = free_product(a, b)?;
    let res = resolve_k(&product, window)?;
    let ta = BettiTable::from_resolution(&resolve_k(a, window)?);
    let tb = BettiTable::from_resolution(&resolve_k(b, window)?);
    let t = BettiTable::from_resolution(&res);
    let mut rows = Vec::new();
    for i in 1..=window.length {
        for j in 0..=window.degree_bound {
            let (p, l, r) = (t.get(i, j), ta.get(i, j), tb.get(i, j));
            if p + l + r > 0 {
                rows.push(AdditivityRow {
                    i,
                    j,
                    product: p,
                    left: l,
                    right: r,
                    holds: p == l + r,
                });
            }
        }
    }

    let side = sides(&res, a.num_generators());
    let unclassified = side.iter().skip(1).flatten().filter(|s| **s == Side::Mixed).count();
    let classes = |want: Side| -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (i, q) in res.modules().iter().enumerate().skip(1) {
            for g in 0..q.rank() {
                if side[i][g] == want {
                    out.push((i, q.degree(g), g));
                }
            }
        }
        out
    };
    let (lefts, rights) = (classes(Side::Left), classes(Side::Right));
    let lifter = Lifter::new(&res)?;
    let one = product.field().one();
    let class = |(i, j, g): (usize, usize, usize)| ExtElement {
        i,
        j,
        coefficients: vec![(g, one.clone())],
    };
    let mut mixed_products = Vec::new();
    'outer: for &l in &lefts {
        for &r in &rights {
            if l.0 + r.0 > window.length || l.1 + r.1 > window.degree_bound {
                continue;
            }
            if mixed_products.len() == samples {
                break 'outer;
            }
            let mut vanishes = true;
            for (x, y) in [(l, r), (r, l)] {
                let f = lifter.lift(&res, &class(y), x.0, x.1 + y.1)?;
                vanishes &= f.pair(&res, &class(x))?.is_zero();
            }
            mixed_products.push(MixedProduct {
                left: l,
                right: r,
                vanishes,
            });
        }
    }

    Ok(ExtSumReport {
        base_holds: t.get(0, 0) == 1 && t.support(0) == vec![0],
        rows,
        unclassified,
        mixed_products,
        window,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InputCheck {
    pub pattern: Pattern,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurjectivityRow {
    pub i: usize,
    pub n: usize,
    /// Internal degree in `E^{3n+i}`.
    pub degree: usize,
    pub beta: usize,
    pub product_rank: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StronglyConstruction {
    #[serde(skip)]
    pub algebra: AlgebraPresentation,
    pub d: usize,
    pub inputs: [InputCheck; 2],
    pub bikoszul: Verdict,
    pub obstructions: Vec<ObstructionReport>,
    pub surjectivity: Vec<SurjectivityRow>,
    pub window: Window,
}

impl StronglyConstruction {
    /// Bi-Koszul with every checked obstruction zero and every surjectivity
    /// identity holding, all within the window.
    pub fn strongly_in_window(&self) -> bool {
        self.bikoszul.matches()
            && self.obstructions.iter().all(|o| o.vanishes)
            && self.surjectivity.iter().all(|r| r.holds)
    }
}

/// The `d` of a δ′ (`second = false`) or δ″ pattern fitted from row 2.
fn fitted_d(table: &BettiTable, second: bool) -> Option<usize> {
    match table.support(2).as_slice() {
        [j] if !second && *j >= 2 => Some(*j),
        [j] if second && *j >= 3 => Some(*j - 1),
        _ => None,
    }
}

/// `B = A ⊔ A′` from a δ′-Koszul `A` and a δ″-Koszul `A′` with the same `d`
/// (fitted when `d` is `None`), and the checks that `B` is strongly bi-Koszul
/// in the window.
pub fn build_strongly_bikoszul(
    a: &AlgebraPresentation,
    b: &AlgebraPresentation,
    d: Option<usize>,
    window: Window,
) -> Result<StronglyConstruction> {
    let ta = BettiTable::from_resolution(&resolve_k(a, window)?);
    let tb = BettiTable::from_resolution(&resolve_k(b, window)?);
    let (da, db) = (fitted_d(&ta, false), fitted_d(&tb, true));
    let d = match (d, da, db) {
        (Some(d), _, _) => d,
        (None, Some(x), Some(y)) if x == y => x,
        (None, Some(x), Some(y)) => {
            return Err(Error::Precondition(format!("the inputs have d = {x} and d = {y}")));
        }
        _ => {
            return Err(Error::Precondition(
                "row 2 of an input is not a single degree fitting δ′ or δ″".into(),
            ))
        }
    };
    let inputs = [
        (Pattern::DeltaPrime { d }, &ta, "first"),
        (Pattern::DeltaDoublePrime { d }, &tb, "second"),
    ]
    .map(|(pattern, t, which)| {
        let verdict = check_pattern(t, pattern);
        (InputCheck { pattern, verdict }, which)
    });
    for (check, which) in &inputs {
        if !check.verdict.matches() {
            return Err(Error::Precondition(format!("the {which} input is not {} in window", check.pattern)));
        }
    }
    let inputs = inputs.map(|(c, _)| c);

    let algebra = free_product(a, b)?;
    let longer = Window {
        length: window.length + 1,
        degree_bound: window.degree_bound,
    };
    let res = resolve_k(&algebra, longer)?;
    let mut table = BettiTable::new(window);
    for r in BettiTable::from_resolution(&res).records() {
        if r.i <= window.length {
            table.set(r.i, r.j, r.beta);
        }
    }
    let bikoszul = check_pattern(&table, Pattern::BiKoszul { d });

    let mut obstructions = Vec::new();
    if bikoszul.matches() {
        for n in (1..).take_while(|n| 3 * n + 2 <= window.length && 2 * n * d + d + 1 <= window.degree_bound) {
            let mut r = obstruction(&res, n)?;
            r.window = window;
            obstructions.push(r);
        }
    }

    let mut surjectivity = Vec::new();
    let lifter = Lifter::new(&res)?;
    let field = algebra.field();
    for n in 1.. {
        if 3 * n + 1 > window.length {
            break;
        }
        for i in [1, 2] {
            let top = 3 * n + i;
            if top > window.length {
                continue;
            }
            for degree in table.support(top) {
                let mut vectors = Vec::new();
                for j1 in table.support(i) {
                    let Some(j2) = degree.checked_sub(j1) else { continue };
                    for e2 in ExtElement::basis(&res, 3 * n, j2) {
                        let f = lifter.lift(&res, &e2, i, degree)?;
                        vectors.extend(f.pair_basis(&res, &res, i, j1)?);
                    }
                }
                let product_rank = linalg::rank(field, &vectors);
                let beta = table.get(top, degree);
                surjectivity.push(SurjectivityRow {
                    i,
                    n,
                    degree,
                    beta,
                    product_rank,
                    holds: product_rank == beta,
                });
            }
        }
    }

    Ok(StronglyConstruction {
        algebra,
        d,
        inputs,
        bikoszul,
        obstructions,
        surjectivity,
        window,
    })
}

/// `classify` over the resolution of `k` in a window; shared by callers that
/// only hold a presentation.
pub fn classify_algebra(algebra: &AlgebraPresentation, window: Window) -> Result<crate::koszulity::ClassificationReport> {
    Ok(classify(&BettiTable::from_resolution(&resolve_k(algebra, window)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_algebra;

    #[test]
    fn renames_colliding_generators() {
        let a = parse_algebra("field Q\ngens x\nrel x*x\n").unwrap();
        let p = free_product(&a, &a).unwrap();
        assert_eq!(p.to_string(), "field Q\ngens x,x_2\nrel x*x\nrel x_2*x_2\n");
    }

    #[test]
    fn trivial_algebra_is_a_unit() {
        let a = parse_algebra("field Q\ngens x,y\nrel x*y\n").unwrap();
        let one = parse_algebra("field Q\n").unwrap();
        assert_eq!(free_product(&a, &one).unwrap(), a);
    }

    #[test]
    fn rejects_mixed_fields_and_quivers() {
        let a = parse_algebra("field Q\ngens x\n").unwrap();
        let b = parse_algebra("field GF(3)\ngens y\n").unwrap();
        assert!(matches!(free_product(&a, &b), Err(Error::FieldMismatch(..))));
        let q = parse_algebra("field Q\nvertices 2\narrow a 1 2\n").unwrap();
        assert!(matches!(free_product(&a, &q), Err(Error::Precondition(_))));
    }
}
