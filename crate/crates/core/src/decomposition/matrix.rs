//! Matrix representations `f(ζ) = Fξ` of maps between graded free modules.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{slice_images, Element, FreeModule, Resolution, Slice};
use crate::linalg::{self, Echelon};
use crate::presentation::{AlgebraPresentation, ModuleGenerator};
use crate::rewrite::GroebnerBasis;

/// Row `i` is the image of source basis element `i`, written in the target basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    rows: Vec<ModuleGenerator>,
    columns: Vec<ModuleGenerator>,
    entries: Vec<Element>,
}

/// Entry-wise serialization in the presentation grammar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixRecord {
    pub row_degrees: Vec<usize>,
    pub column_degrees: Vec<usize>,
    pub entries: Vec<Vec<String>>,
}

/// Reduces every entry and checks `|a_ij| = m_i - n_j` (and `a_ij = 0` when
/// `m_i < n_j`). Both bases must be sorted by nondecreasing degree.
pub fn matrix_representation(
    gb: &GroebnerBasis,
    rows: Vec<ModuleGenerator>,
    columns: Vec<ModuleGenerator>,
    entries: Vec<Element>,
) -> Result<GradedMatrix> {
    for (name, basis) in [("source", &rows), ("target", &columns)] {
        if basis.windows(2).any(|p| p[0].degree > p[1].degree) {
            return Err(Error::Precondition(format!("{name} basis is not sorted by degree")));
        }
    }
    if entries.len() != rows.len() {
        return Err(Error::Precondition(format!(
            "{} rows given for a source basis of size {}",
            entries.len(),
            rows.len()
        )));
    }
    let mut canonical = Vec::with_capacity(entries.len());
    for (i, (row, gen)) in entries.iter().zip(&rows).enumerate() {
        let reduced = Element::from_terms(row.terms().iter().map(|(j, p)| (*j, gb.reduce(p))));
        for (j, p) in reduced.terms() {
            let Some(col) = columns.get(*j) else {
                return Err(Error::Precondition(format!("row {i} refers to column {j}")));
            };
            let ok = gen.degree >= col.degree
                && p.is_homogeneous()
                && p.degree() == Some(gen.degree - col.degree)
                && p.terms().iter().all(|(w, _)| w.source() == gen.vertex && w.target() == col.vertex);
            if !ok {
                return Err(Error::DegreeLaw { row: i, column: *j });
            }
        }
        canonical.push(reduced);
    }
    Ok(GradedMatrix {
        rows,
        columns,
        entries: canonical,
    })
}

impl GradedMatrix {
    /// `∂_m : Q_m → Q_{m-1}` for `m ≥ 1`.
    pub fn from_differential(res: &Resolution, m: usize) -> Result<Self> {
        if m == 0 || m > res.length() {
            return Err(Error::Precondition(format!("no differential ∂_{m}")));
        }
        matrix_representation(
            res.gb(),
            res.module(m).generators.clone(),
            res.module(m - 1).generators.clone(),
            res.differential(m).to_vec(),
        )
    }

    pub fn rows(&self) -> &[ModuleGenerator] {
        &self.rows
    }

    pub fn columns(&self) -> &[ModuleGenerator] {
        &self.columns
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &Element {
        &self.entries[i]
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Element::is_zero)
    }

    pub fn source(&self) -> FreeModule {
        FreeModule::new(self.rows.clone())
    }

    pub fn target(&self) -> FreeModule {
        FreeModule::new(self.columns.clone())
    }

    /// The block on the given rows and columns, renumbered in the given order.
    pub fn submatrix(&self, rows: &[usize], columns: &[usize]) -> GradedMatrix {
        let mut position = vec![None; self.columns.len()];
        for (k, &j) in columns.iter().enumerate() {
            position[j] = Some(k);
        }
        GradedMatrix {
            rows: rows.iter().map(|&i| self.rows[i]).collect(),
            columns: columns.iter().map(|&j| self.columns[j]).collect(),
            entries: rows
                .iter()
                .map(|&i| {
                    Element::from_terms(
                        self.entries[i]
                            .terms()
                            .iter()
                            .filter_map(|(j, p)| position[*j].map(|k| (k, p.clone()))),
                    )
                })
                .collect(),
        }
    }

    /// Whether some entry is a nonzero scalar (a non-minimal map).
    pub fn has_constant_entry(&self) -> bool {
        self.entries.iter().any(|x| !x.constant_part().is_empty())
    }

    pub fn to_record(&self, algebra: &AlgebraPresentation) -> MatrixRecord {
        MatrixRecord {
            row_degrees: self.rows.iter().map(|g| g.degree).collect(),
            column_degrees: self.columns.iter().map(|g| g.degree).collect(),
            entries: self
                .entries
                .iter()
                .map(|x| x.format_row(algebra, self.columns.len()))
                .collect(),
        }
    }

    /// `dim` of the image in internal degree `t`.
    pub fn rank_in_degree(&self, gb: &GroebnerBasis, t: usize) -> Result<usize> {
        let (src, tgt) = (self.source(), self.target());
        let mut total = 0;
        for v in 0..gb.algebra().vertices() as u16 {
            let s = Slice::new(gb, &src, t, v);
            let g = Slice::new(gb, &tgt, t, v);
            total += linalg::rank(gb.algebra().field(), &slice_images(gb, &src, &s, &self.entries, &g)?);
        }
        Ok(total)
    }

    /// `self` followed by `next` (rows of `self` index the source of the composite).
    pub fn compose(&self, gb: &GroebnerBasis, next: &GradedMatrix) -> GradedMatrix {
        GradedMatrix {
            rows: self.rows.clone(),
            columns: next.columns.clone(),
            entries: self.entries.iter().map(|x| x.apply(gb, &next.entries)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowCertificate {
    /// `coefficients` lives in the free module on the rows of `F′`; applying
    /// it to those rows gives the coupling row.
    Witness { coefficients: Element },
    /// The row is not in the row module of `F′` in its own degree.
    Counterexample { degree: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityCertificate {
    pub rows: Vec<RowCertificate>,
}

impl AdmissibilityCertificate {
    pub fn admissible(&self) -> bool {
        self.rows.iter().all(|r| matches!(r, RowCertificate::Witness { .. }))
    }

    /// First row without a witness, with its degree.
    pub fn first_failure(&self) -> Option<(usize, usize)> {
        self.rows.iter().enumerate().find_map(|(i, r)| match r {
            RowCertificate::Counterexample { degree } => Some((i, *degree)),
            RowCertificate::Witness { .. } => None,
        })
    }
}

/// For each row `u` of `U`, solves `X′F′ = u` in the single degree of `u`.
pub fn is_admissible(gb: &GroebnerBasis, f_prime: &GradedMatrix, u: &GradedMatrix) -> Result<AdmissibilityCertificate> {
    if f_prime.columns != u.columns {
        return Err(Error::Precondition("F′ and U do not share a column basis".into()));
    }
    let field = gb.algebra().field();
    let source = f_prime.source();
    let target = f_prime.target();
    let mut rows = Vec::with_capacity(u.nrows());
    for (gen, row) in u.rows.iter().zip(&u.entries) {
        if row.is_zero() {
            rows.push(RowCertificate::Witness {
                coefficients: Element::zero(),
            });
            continue;
        }
        let t = gen.degree;
        if t > gb.bound() {
            return Err(Error::OutsideWindow {
                degree: t,
                bound: gb.bound(),
            });
        }
        let s = Slice::new(gb, &source, t, gen.vertex);
        let g = Slice::new(gb, &target, t, gen.vertex);
        let mut ech = Echelon::tracking(field);
        ech.extend(&slice_images(gb, &source, &s, &f_prime.entries, &g)?);
        match ech.solve(&g.to_vector(gb, row)?) {
            Some(c) => {
                let coefficients = s.to_element(gb, &source, &c);
                if &coefficients.apply(gb, &f_prime.entries) != row {
                    return Err(Error::internal("admissibility witness does not reproduce its row"));
                }
                rows.push(RowCertificate::Witness { coefficients });
            }
            None => rows.push(RowCertificate::Counterexample { degree: t }),
        }
    }
    Ok(AdmissibilityCertificate { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_algebra;
    use crate::rewrite::complete;
    use crate::Polynomial;

    fn gen(degree: usize) -> ModuleGenerator {
        ModuleGenerator { degree, vertex: 0 }
    }

    fn row(gb: &GroebnerBasis, letters: &[&[u8]]) -> Element {
        let one = gb.algebra().field().one();
        Element::from_terms(letters.iter().enumerate().filter(|(_, l)| !l.is_empty()).map(|(j, l)| {
            (j, Polynomial::monomial(gb.algebra().word(l).unwrap(), one.clone()))
        }))
    }

    #[test]
    fn degree_law() {
        let a = parse_algebra("field Q\ngens x,y\n").unwrap();
        let gb = complete(&a, 4).unwrap();
        let ok = matrix_representation(&gb, vec![gen(2)], vec![gen(1), gen(1)], vec![row(&gb, &[&[0], &[]])]);
        assert!(ok.is_ok());
        let bad = matrix_representation(&gb, vec![gen(3)], vec![gen(1), gen(1)], vec![row(&gb, &[&[0], &[]])]);
        assert_eq!(bad, Err(Error::DegreeLaw { row: 0, column: 0 }));
        let below = matrix_representation(&gb, vec![gen(1)], vec![gen(2)], vec![Element::zero()]).unwrap();
        assert!(below.is_zero());
    }

    #[test]
    fn witnesses_and_counterexamples() {
        let a = parse_algebra("field Q\ngens x,y\n").unwrap();
        let gb = complete(&a, 4).unwrap();
        let f = matrix_representation(&gb, vec![gen(1)], vec![gen(0)], vec![row(&gb, &[&[0]])]).unwrap();
        let u = matrix_representation(&gb, vec![gen(2)], vec![gen(0)], vec![row(&gb, &[&[0, 0]])]).unwrap();
        let cert = is_admissible(&gb, &f, &u).unwrap();
        assert!(cert.admissible());
        let u = matrix_representation(&gb, vec![gen(1)], vec![gen(0)], vec![row(&gb, &[&[1]])]).unwrap();
        let cert = is_admissible(&gb, &f, &u).unwrap();
        assert_eq!(cert.first_failure(), Some((0, 1)));
    }
}
