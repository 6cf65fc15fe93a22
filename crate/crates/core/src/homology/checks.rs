//! Independent certificates for a computed resolution: `∂∂ = 0`,
//! minimality, degreewise exactness, and the Euler characteristic identity.

use serde::Serialize;

use crate::error::Result;
use crate::linalg::{self, Echelon};

use super::free::{slice_images, Slice};
use super::resolution::{Homogeneous, Resolution};

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessFailure {
    pub step: usize,
    pub degree: usize,
    pub kernel_dim: usize,
    pub image_rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    /// `∂_n ∘ ∂_{n+1} = 0` for every generator (modulo relations at the bottom).
    pub composites_vanish: bool,
    /// No differential `∂_n`, `n ≥ 1`, has a nonzero degree-0 entry.
    pub minimal: bool,
    /// `Q_0` maps onto the module in every degree.
    pub surjective: bool,
    pub exactness_failures: Vec<ExactnessFailure>,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.composites_vanish && self.minimal && self.surjective && self.exactness_failures.is_empty()
    }
}

/// Recomputes every rank from scratch with fresh eliminations.
pub fn certify(res: &Resolution) -> Result<Certificate> {
    let gb = res.gb();
    let field = gb.algebra().field();
    let vertices = gb.algebra().vertices() as u16;
    let mut composites_vanish = true;
    let mut minimal = true;
    let mut surjective = true;
    let mut failures = Vec::new();

    for n in 1..=res.length() {
        if res.differential(n).iter().any(|x| !x.constant_part().is_empty()) {
            minimal = false;
        }
    }

    // ranks[n][t] of ∂_n (for n = 0: of Q_0 → F/T).
    let mut ranks = vec![vec![0usize; res.bound() + 1]; res.length() + 1];
    for t in 0..=res.bound() {
        for v in 0..vertices {
            let f = Slice::new(gb, res.ambient(), t, v);
            let rel = span(res, res.relations(), &f)?;
            let mut module = rel.clone();
            for x in span(res, res.generators(), &f)?.rows() {
                module.insert(x);
            }
            let q0 = Slice::new(gb, res.module(0), t, v);
            let images = slice_images(gb, res.module(0), &q0, res.differential(0), &f)?;
            let mut all = rel.clone();
            all.extend(&images);
            let r0 = all.rank() - rel.rank();
            ranks[0][t] += r0;
            if r0 != module.rank() - rel.rank() || r0 != res.rank_at(0, t, v) {
                surjective = false;
            }
            for n in 1..=res.length() {
                let src = Slice::new(gb, res.module(n), t, v);
                let tgt = Slice::new(gb, res.module(n - 1), t, v);
                let imgs = slice_images(gb, res.module(n), &src, res.differential(n), &tgt)?;
                ranks[n][t] += linalg::rank(field, &imgs);
            }
        }
        for n in 0..res.length() {
            let kernel_dim = res.term_dim(n, t) - ranks[n][t];
            if kernel_dim != ranks[n + 1][t] {
                failures.push(ExactnessFailure {
                    step: n,
                    degree: t,
                    kernel_dim,
                    image_rank: ranks[n + 1][t],
                });
            }
        }
    }

    for n in 1..=res.length() {
        for (g, x) in res.differential(n).iter().enumerate() {
            let y = x.apply(gb, res.differential(n - 1));
            if y.is_zero() {
                continue;
            }
            if n > 1 {
                composites_vanish = false;
                continue;
            }
            // ∂_0∂_1 must land in the relation submodule.
            let t = res.module(1).degree(g);
            let v = res.module(1).vertex(g);
            let f = Slice::new(gb, res.ambient(), t, v);
            let rel = span(res, res.relations(), &f)?;
            if !rel.contains(&f.to_vector(gb, &y)?) {
                composites_vanish = false;
            }
        }
    }

    Ok(Certificate {
        composites_vanish,
        minimal,
        surjective,
        exactness_failures: failures,
    })
}

/// Echelon basis of `e_v (A·xs)_t` inside the slice `f`.
fn span(res: &Resolution, xs: &[Homogeneous], f: &Slice) -> Result<Echelon> {
    let gb = res.gb();
    let mut ech = Echelon::new(gb.algebra().field());
    for x in xs {
        let Some(src) = x.element.source() else { continue };
        if x.degree > f.degree {
            continue;
        }
        let basis = gb.basis(f.degree - x.degree)?;
        for &i in basis.paths(f.source, src) {
            ech.insert(&f.to_vector(gb, &x.element.left_mul(gb, &basis.words()[i]))?);
        }
    }
    Ok(ech)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerCheck {
    pub degree: usize,
    /// `Σ_i (-1)^i dim (Q_i)_j` from the Hilbert function.
    pub alternating_sum: i64,
    pub module_dim: usize,
    /// `None` when `ker ∂_L` is nonzero in this degree, so the identity does not apply.
    pub holds: Option<bool>,
}

pub fn euler_check(res: &Resolution) -> Vec<EulerCheck> {
    (0..=res.bound())
        .map(|j| {
            let alternating_sum: i64 = (0..=res.length())
                .map(|i| {
                    let d = res.term_dim(i, j) as i64;
                    if i % 2 == 0 {
                        d
                    } else {
                        -d
                    }
                })
                .sum();
            let module_dim = res.module_dim(j);
            let holds = (res.top_kernel_dim(j) == 0).then_some(alternating_sum == module_dim as i64);
            EulerCheck {
                degree: j,
                alternating_sum,
                module_dim,
                holds,
            }
        })
        .collect()
}
