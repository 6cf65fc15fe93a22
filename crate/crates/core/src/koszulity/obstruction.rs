//! The obstruction `E²_{2nd+d+1}(JΩ^{3n}(k))` and the syzygy-degree test
//! that must agree with it.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{self, BettiTable, Homogeneous, Resolution, Subquotient, Window};
use crate::presentation::{AlgebraPresentation, ModulePresentation};
use crate::rewrite;

use super::classify;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyzygyRoute {
    /// Generator degrees of `Ω²(JΩ^{3n}(k))`.
    pub second_syzygy_degrees: Vec<usize>,
    /// Generator degrees of `Ω^{3n+3}(k)`.
    pub syzygy_degrees: Vec<usize>,
    pub same_degrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub n: usize,
    pub d: usize,
    /// `2nd + d + 1`.
    pub degree: usize,
    pub dimension: usize,
    /// Obstruction vanishes at this `n`.
    pub vanishes: bool,
    /// `None` when the window does not reach `P_{3n+3}` in degree `2nd + 2d`.
    pub syzygy: Option<SyzygyRoute>,
    pub window: Window,
}

impl ObstructionReport {
    pub fn routes_agree(&self) -> Option<bool> {
        self.syzygy.as_ref().map(|s| s.same_degrees == self.vanishes)
    }
}

fn distinct(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Obstruction at `n ≥ 1` from a resolution of the trivial module, which must
/// match the bi-Koszul pattern in its window.
pub fn obstruction(res_k: &Resolution, n: usize) -> Result<ObstructionReport> {
    let window = Window {
        length: res_k.length(),
        degree_bound: res_k.bound(),
    };
    let report = classify(&BettiTable::from_resolution(res_k));
    let d = report
        .bikoszul_parameter()
        .ok_or_else(|| Error::Precondition("the algebra is not bi-Koszul in the window".into()))?;
    if n == 0 {
        return Err(Error::Precondition("the obstruction is defined for n ≥ 1".into()));
    }
    if 3 * n + 2 > window.length {
        return Err(Error::BeyondLength {
            needed: 3 * n + 2,
            length: window.length,
        });
    }
    let degree = 2 * n * d + d + 1;
    if degree > window.degree_bound {
        return Err(Error::OutsideWindow {
            degree,
            bound: window.degree_bound,
        });
    }

    let gb = res_k.gb();
    let algebra = gb.algebra();
    let top = res_k.module(3 * n);
    let mut generators = Vec::new();
    for (g, x) in res_k.differential(3 * n).iter().enumerate() {
        if top.degree(g) + 1 > window.degree_bound {
            continue;
        }
        for (a, arrow) in algebra.generators().iter().enumerate() {
            if arrow.target != top.vertex(g) {
                continue;
            }
            let y = x.left_mul(gb, &algebra.letter(a));
            if !y.is_zero() {
                generators.push(Homogeneous {
                    degree: top.degree(g) + 1,
                    element: y,
                });
            }
        }
    }
    let radical_part = homology::resolve(
        gb,
        Subquotient::submodule(res_k.module(3 * n - 1).clone(), generators),
        2,
        window.degree_bound,
    )?;
    let q2 = radical_part.module(2);
    let dimension = q2.degrees().iter().filter(|&&j| j == degree).count();

    let syzygy = (3 * n + 3 <= window.length && 2 * n * d + 2 * d <= window.degree_bound).then(|| {
        let second_syzygy_degrees = distinct(q2.degrees());
        let syzygy_degrees = distinct(res_k.module(3 * n + 3).degrees());
        // A zero syzygy is generated in any degree; the pattern pins the only admissible one.
        let same_degrees = if syzygy_degrees.is_empty() {
            second_syzygy_degrees.iter().all(|&j| j == 2 * (n + 1) * d)
        } else {
            second_syzygy_degrees == syzygy_degrees
        };
        SyzygyRoute {
            same_degrees,
            second_syzygy_degrees,
            syzygy_degrees,
        }
    });

    Ok(ObstructionReport {
        n,
        d,
        degree,
        dimension,
        vanishes: dimension == 0,
        syzygy,
        window,
    })
}

/// Completes, resolves `k` through `max(L, 3n+3)`, and computes the obstruction.
pub fn obstruction_for(algebra: &AlgebraPresentation, n: usize, window: Window) -> Result<ObstructionReport> {
    if 3 * n + 2 > window.length {
        return Err(Error::BeyondLength {
            needed: 3 * n + 2,
            length: window.length,
        });
    }
    let gb = Arc::new(rewrite::complete(algebra, window.degree_bound)?);
    let length = window.length.max(3 * n + 3);
    let res = homology::minimal_resolution(&gb, &ModulePresentation::trivial(algebra), length, window.degree_bound)?;
    let mut report = obstruction(&res, n)?;
    report.window = window;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_algebra;

    #[test]
    fn vanishes_below_global_dimension_five() {
        let a = parse_algebra("field Q\ngens x,y,z,w\nrel y*x\nrel z*z*y\nrel w*z\n").unwrap();
        let w = Window {
            length: 5,
            degree_bound: 8,
        };
        let r = obstruction_for(&a, 1, w).unwrap();
        assert_eq!((r.d, r.degree, r.dimension), (2, 7, 0));
        let s = r.syzygy.as_ref().unwrap();
        assert!(s.syzygy_degrees.is_empty());
        assert_eq!(s.second_syzygy_degrees, vec![8]);
        assert_eq!(r.routes_agree(), Some(true));
    }

    #[test]
    fn refuses_non_bikoszul_algebras() {
        let a = parse_algebra("field Q\ngens x\nrel x*x*x\n").unwrap();
        let w = Window {
            length: 5,
            degree_bound: 8,
        };
        assert!(matches!(obstruction_for(&a, 1, w), Err(Error::Precondition(_))));
    }
}
