//! Textual presentations of graded algebras `T<V>/(R)` (free-algebra or
//! quiver path-algebra quotients) and of finitely presented graded modules.

mod parse;
mod poly;
mod word;

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

pub use parse::{parse_algebra, parse_module};
pub use poly::Polynomial;
pub use word::{Letters, Word};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// A degree-1 generator; in the connected case a loop at vertex 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub source: u16,
    pub target: u16,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    field: FieldSpec,
    generators: Vec<Generator>,
    vertices: usize,
    quiver: bool,
    relations: Vec<Polynomial>,
}

impl AlgebraPresentation {
    /// `F<names>/(relations)`; relations must be homogeneous of degree at least 2.
    pub fn connected(field: FieldSpec, names: &[&str], relations: Vec<Polynomial>) -> Result<Self> {
        let generators = names
            .iter()
            .map(|n| Generator {
                name: n.to_string(),
                source: 0,
                target: 0,
            })
            .collect();
        Self::build(field, generators, 1, false, relations)
    }

    /// Path algebra of a quiver on `vertices` vertices modulo `relations`.
    pub fn quiver(
        field: FieldSpec,
        vertices: usize,
        arrows: Vec<Generator>,
        relations: Vec<Polynomial>,
    ) -> Result<Self> {
        Self::build(field, arrows, vertices, true, relations)
    }

    fn build(
        field: FieldSpec,
        generators: Vec<Generator>,
        vertices: usize,
        quiver: bool,
        relations: Vec<Polynomial>,
    ) -> Result<Self> {
        if generators.len() > u8::MAX as usize {
            return Err(Error::ResourceLimit {
                what: "generators".into(),
                cap: u8::MAX as usize,
            });
        }
        if vertices == 0 || vertices > u16::MAX as usize {
            return Err(Error::Invalid {
                line: 0,
                message: format!("vertex count {vertices} out of range"),
            });
        }
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::Invalid {
                    line: 0,
                    message: format!("duplicate generator `{}`", g.name),
                });
            }
            if g.source as usize >= vertices || g.target as usize >= vertices {
                return Err(Error::Invalid {
                    line: 0,
                    message: format!("arrow `{}` leaves the vertex range", g.name),
                });
            }
        }
        let mut pres = AlgebraPresentation {
            field,
            generators,
            vertices,
            quiver,
            relations: Vec::new(),
        };
        for (i, r) in relations.into_iter().enumerate() {
            pres.check_relation(&r, i + 1)?;
            pres.relations.push(r.monic());
        }
        Ok(pres)
    }

    fn check_relation(&self, r: &Polynomial, line: usize) -> Result<()> {
        if r.is_zero() {
            return Err(Error::Invalid {
                line,
                message: "relation is zero".into(),
            });
        }
        let degree = r.degree().ok_or(Error::Inhomogeneous { line })?;
        if degree < 2 {
            return Err(Error::Invalid {
                line,
                message: format!("relation of degree {degree}; relations must have degree at least 2"),
            });
        }
        let (w0, _) = r.leading().expect("nonzero");
        if r
            .terms()
            .iter()
            .any(|(w, _)| w.source() != w0.source() || w.target() != w0.target())
        {
            return Err(Error::Inhomogeneous { line });
        }
        for (w, c) in r.terms() {
            if c.field() != self.field {
                return Err(Error::FieldMismatch(c.field().to_string(), self.field.to_string()));
            }
            if self.word(w.letters()).as_ref() != Some(w) {
                return Err(Error::NotAPath {
                    line,
                    word: self.format_word(w),
                });
            }
        }
        Ok(())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn is_quiver(&self) -> bool {
        self.quiver
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// The path spelled by `letters`, if consecutive arrows compose.
    /// The empty sequence is `e_0`; use [`Word::idempotent`] for other vertices.
    pub fn word(&self, letters: &[u8]) -> Option<Word> {
        let Some(&first) = letters.first() else {
            return Some(Word::idempotent(0));
        };
        let mut cur = self.generators.get(first as usize)?.target;
        for &l in &letters[1..] {
            let g = self.generators.get(l as usize)?;
            if g.source != cur {
                return None;
            }
            cur = g.target;
        }
        let source = self.generators[first as usize].source;
        Some(Word::from_parts(source, cur, letters.iter().copied().collect()))
    }

    pub fn letter(&self, index: usize) -> Word {
        self.word(&[index as u8]).expect("generator index in range")
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let names: Vec<&str> = w
            .letters()
            .iter()
            .map(|&l| self.generators[l as usize].name.as_str())
            .collect();
        names.join("*")
    }

    pub fn format_polynomial(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let one = self.field.one();
        let mut out = String::new();
        for (i, (w, c)) in p.terms().iter().enumerate() {
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if w.is_empty() {
                let _ = write!(out, "{mag}");
            } else if mag == one {
                out.push_str(&self.format_word(w));
            } else {
                let _ = write!(out, "{mag}*{}", self.format_word(w));
            }
        }
        out
    }

    pub fn max_relation_degree(&self) -> usize {
        self.relations.iter().filter_map(|r| r.degree()).max().unwrap_or(0)
    }
}

impl fmt::Display for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field {}", self.field)?;
        if self.quiver {
            writeln!(f, "vertices {}", self.vertices)?;
            for g in &self.generators {
                writeln!(f, "arrow {} {} {}", g.name, g.source + 1, g.target + 1)?;
            }
        } else if !self.generators.is_empty() {
            let names: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
            writeln!(f, "gens {}", names.join(","))?;
        }
        for r in &self.relations {
            writeln!(f, "rel {}", self.format_polynomial(r))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuleGenerator {
    pub degree: usize,
    pub vertex: u16,
}

/// `M = coker(relations)`: a graded free module on `generators` modulo the
/// left submodule spanned by the relation rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    generators: Vec<ModuleGenerator>,
    relations: Vec<Vec<Polynomial>>,
}

impl ModulePresentation {
    pub fn new(
        algebra: &AlgebraPresentation,
        generators: Vec<ModuleGenerator>,
        relations: Vec<Vec<Polynomial>>,
    ) -> Result<Self> {
        if generators.windows(2).any(|p| p[0].degree > p[1].degree) {
            return Err(Error::Invalid {
                line: 0,
                message: "generator degrees must be nondecreasing".into(),
            });
        }
        if let Some(g) = generators
            .iter()
            .find(|g| g.vertex as usize >= algebra.vertices())
        {
            return Err(Error::Invalid {
                line: 0,
                message: format!("generator vertex {} out of range", g.vertex + 1),
            });
        }
        let mut rows = Vec::with_capacity(relations.len());
        for (i, row) in relations.into_iter().enumerate() {
            rows.push(normalize_row(algebra, &generators, row, i + 1)?);
        }
        Ok(ModulePresentation {
            generators,
            relations: rows,
        })
    }

    /// The free module on generators of the given degrees (vertex 0).
    pub fn free(algebra: &AlgebraPresentation, degrees: &[usize]) -> Result<Self> {
        let gens = degrees
            .iter()
            .map(|&degree| ModuleGenerator { degree, vertex: 0 })
            .collect();
        Self::new(algebra, gens, Vec::new())
    }

    /// `k = A/J`: one degree-0 generator per vertex, killed by every arrow.
    pub fn trivial(algebra: &AlgebraPresentation) -> Self {
        let generators: Vec<ModuleGenerator> = (0..algebra.vertices())
            .map(|v| ModuleGenerator {
                degree: 0,
                vertex: v as u16,
            })
            .collect();
        let one = algebra.field().one();
        let relations = algebra
            .generators()
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut row = vec![Polynomial::zero(); generators.len()];
                row[g.target as usize] = Polynomial::monomial(algebra.letter(i), one.clone());
                row
            })
            .collect();
        ModulePresentation {
            generators,
            relations,
        }
    }

    pub fn generators(&self) -> &[ModuleGenerator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Vec<Polynomial>] {
        &self.relations
    }

    /// The module file grammar: a `free` line followed by one `rel` line per relation.
    pub fn format(&self, algebra: &AlgebraPresentation) -> String {
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| {
                if algebra.vertices() > 1 {
                    format!("{}@{}", g.degree, g.vertex + 1)
                } else {
                    g.degree.to_string()
                }
            })
            .collect();
        let mut out = format!("free {}\n", gens.join(","));
        for row in &self.relations {
            let entries: Vec<String> = row.iter().map(|p| algebra.format_polynomial(p)).collect();
            out.push_str(&format!("rel {}\n", entries.join(",")));
        }
        out
    }

    /// Internal degree of relation row `r`.
    pub fn row_degree(&self, r: usize) -> usize {
        row_degree(&self.generators, &self.relations[r]).expect("validated row")
    }

    /// Every generator in degree 0.
    pub fn generated_in_degree_zero(&self) -> bool {
        self.generators.iter().all(|g| g.degree == 0)
    }

    pub fn to_text(&self, algebra: &AlgebraPresentation) -> String {
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| {
                if algebra.is_quiver() {
                    format!("{}@{}", g.degree, g.vertex + 1)
                } else {
                    g.degree.to_string()
                }
            })
            .collect();
        let mut out = format!("free {}\n", gens.join(","));
        for row in &self.relations {
            let entries: Vec<String> = row.iter().map(|p| algebra.format_polynomial(p)).collect();
            let _ = writeln!(out, "rel {}", entries.join(","));
        }
        out
    }
}

fn row_degree(gens: &[ModuleGenerator], row: &[Polynomial]) -> Option<usize> {
    row.iter()
        .zip(gens)
        .find(|(p, _)| !p.is_zero())
        .and_then(|(p, g)| p.degree().map(|d| d + g.degree))
}

fn normalize_row(
    algebra: &AlgebraPresentation,
    gens: &[ModuleGenerator],
    row: Vec<Polynomial>,
    line: usize,
) -> Result<Vec<Polynomial>> {
    if row.len() != gens.len() {
        return Err(Error::Invalid {
            line,
            message: format!("row has {} entries, module has {} generators", row.len(), gens.len()),
        });
    }
    let degree = row_degree(gens, &row).ok_or_else(|| {
        if row.iter().all(|p| p.is_zero()) {
            Error::Invalid {
                line,
                message: "relation row is zero".into(),
            }
        } else {
            Error::Inhomogeneous { line }
        }
    })?;
    let mut source = None;
    for (p, g) in row.iter().zip(gens) {
        if p.is_zero() {
            continue;
        }
        if p.degree().map(|d| d + g.degree) != Some(degree) {
            return Err(Error::Inhomogeneous { line });
        }
        for (w, c) in p.terms() {
            if c.field() != algebra.field() {
                return Err(Error::FieldMismatch(c.field().to_string(), algebra.field().to_string()));
            }
            if w.target() != g.vertex {
                return Err(Error::NotAPath {
                    line,
                    word: algebra.format_word(w),
                });
            }
            if *source.get_or_insert(w.source()) != w.source() {
                return Err(Error::Invalid {
                    line,
                    message: "row entries start at different vertices".into(),
                });
            }
        }
    }
    let lead = row
        .iter()
        .find_map(|p| p.leading().map(|(_, c)| c.clone()))
        .expect("nonzero row");
    let inv: Scalar = lead.inv();
    Ok(row.iter().map(|p| p.scale(&inv)).collect())
}
