//! Line-oriented reader for algebra and module files.
//!
//! Statements are separated by newlines or `;`, and `#` starts a comment.

use num_bigint::BigInt;

use super::{AlgebraPresentation, Generator, ModuleGenerator, ModulePresentation, Polynomial, Word};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

struct Statement<'a> {
    line: usize,
    column: usize,
    text: &'a str,
}

fn statements(text: &str) -> Vec<Statement<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut offset = 0;
        for piece in body.split(';') {
            let trimmed = piece.trim_start();
            let lead = piece.len() - trimmed.len();
            let trimmed = trimmed.trim_end();
            if !trimmed.is_empty() {
                out.push(Statement {
                    line: i + 1,
                    column: offset + lead + 1,
                    text: trimmed,
                });
            }
            offset += piece.len() + 1;
        }
    }
    out
}

fn syntax(st: &Statement, at: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: st.line,
        column: st.column + at,
        message: message.into(),
    }
}

fn split_keyword<'a>(st: &Statement<'a>) -> (&'a str, &'a str, usize) {
    match st.text.find(char::is_whitespace) {
        Some(i) => {
            let rest = &st.text[i..];
            let trimmed = rest.trim_start();
            (&st.text[..i], trimmed, i + rest.len() - trimmed.len())
        }
        None => (st.text, "", st.text.len()),
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(is_ident_start) && cs.all(is_ident)
}

fn parse_field(st: &Statement, arg: &str, at: usize) -> Result<FieldSpec> {
    if arg == "Q" || arg == "QQ" {
        return Ok(FieldSpec::Rationals);
    }
    let inner = arg
        .strip_prefix("GF(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| syntax(st, at, format!("expected `Q` or `GF(p)`, found `{arg}`")))?;
    let p: u64 = inner
        .trim()
        .parse()
        .map_err(|_| syntax(st, at + 3, format!("`{inner}` is not a characteristic")))?;
    FieldSpec::prime(p)
}

/// A term before names are resolved: coefficient and generator names.
struct RawTerm {
    coeff: Scalar,
    names: Vec<(String, usize)>,
}

struct Cursor<'s, 'a> {
    st: &'s Statement<'a>,
    src: &'a str,
    base: usize,
    pos: usize,
}

impl<'s, 'a> Cursor<'s, 'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn err(&self, message: impl Into<String>) -> Error {
        syntax(self.st, self.base + self.pos, message)
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let n = rest.bytes().take_while(u8::is_ascii_digit).count();
        if n == 0 {
            return None;
        }
        self.pos += n;
        rest[..n].parse().ok()
    }

    fn ident(&mut self) -> Result<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        if !rest.starts_with(is_ident_start) {
            return Err(self.err("expected a generator name"));
        }
        let n = rest.find(|c: char| !is_ident(c)).unwrap_or(rest.len());
        self.pos += n;
        Ok((rest[..n].to_string(), self.base + start))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn term(&mut self, field: FieldSpec, negative: bool) -> Result<RawTerm> {
        let mut coeff = field.one();
        let mut names = Vec::new();
        if let Some(num) = self.integer() {
            let den = if self.eat('/') {
                self.integer().ok_or_else(|| self.err("expected a denominator"))?
            } else {
                BigInt::from(1)
            };
            coeff = field
                .from_fraction(&num, &den)
                .ok_or_else(|| self.err("coefficient has a vanishing denominator"))?;
            if !self.eat('*') {
                return Ok(RawTerm {
                    coeff: if negative { -coeff } else { coeff },
                    names,
                });
            }
        }
        loop {
            names.push(self.ident()?);
            if !self.eat('*') {
                break;
            }
        }
        Ok(RawTerm {
            coeff: if negative { -coeff } else { coeff },
            names,
        })
    }

    /// A polynomial ending at `,` or end of input.
    fn polynomial(&mut self, field: FieldSpec) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut negative = self.eat('-');
        if !negative {
            self.eat('+');
        }
        loop {
            terms.push(self.term(field, negative)?);
            match self.peek() {
                Some('+') => negative = false,
                Some('-') => negative = true,
                None | Some(',') => return Ok(terms),
                Some(c) => return Err(self.err(format!("unexpected `{c}`"))),
            }
            self.pos += 1;
        }
    }
}

/// Resolves raw terms into a polynomial; constant terms become multiples of `e_vertex`.
fn resolve_terms(
    st: &Statement,
    algebra: &AlgebraPresentation,
    terms: Vec<RawTerm>,
    vertex: u16,
) -> Result<Polynomial> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let mut letters = Vec::with_capacity(t.names.len());
        for (name, at) in &t.names {
            let idx = algebra
                .generator_index(name)
                .ok_or_else(|| syntax(st, *at, format!("unknown generator `{name}`")))?;
            letters.push(idx as u8);
        }
        let word = if letters.is_empty() {
            Word::idempotent(vertex)
        } else {
            algebra.word(&letters).ok_or_else(|| Error::NotAPath {
                line: st.line,
                word: t.names.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>().join("*"),
            })?
        };
        out.push((word, t.coeff));
    }
    Ok(Polynomial::from_terms(out))
}

/// Parses an algebra file (see the crate documentation for the grammar).
pub fn parse_algebra(text: &str) -> Result<AlgebraPresentation> {
    let sts = statements(text);
    let Some(first) = sts.first() else {
        return Err(Error::Syntax {
            line: 1,
            column: 1,
            message: "missing `field` header".into(),
        });
    };
    let (kw, arg, at) = split_keyword(first);
    if kw != "field" {
        return Err(syntax(first, 0, "file must start with a `field` header"));
    }
    let field = parse_field(first, arg, at)?;

    let mut names: Vec<String> = Vec::new();
    let mut arrows: Vec<Generator> = Vec::new();
    let mut vertices: Option<usize> = None;
    let mut connected = false;
    let mut rels = Vec::new();
    for st in &sts[1..] {
        let (kw, arg, at) = split_keyword(st);
        match kw {
            "gens" => {
                if connected || vertices.is_some() {
                    return Err(syntax(st, 0, "generators already declared"));
                }
                connected = true;
                let mut col = at;
                for piece in arg.split(',') {
                    let name = piece.trim();
                    if !valid_name(name) {
                        return Err(syntax(st, col, format!("`{name}` is not a generator name")));
                    }
                    names.push(name.to_string());
                    col += piece.len() + 1;
                }
            }
            "vertices" => {
                if connected || vertices.is_some() {
                    return Err(syntax(st, 0, "quiver mode needs a single `vertices` line and no `gens`"));
                }
                let n: usize = arg
                    .parse()
                    .map_err(|_| syntax(st, at, format!("`{arg}` is not a vertex count")))?;
                if n == 0 || n > u16::MAX as usize {
                    return Err(syntax(st, at, "vertex count out of range"));
                }
                vertices = Some(n);
            }
            "arrow" => {
                let n = vertices.ok_or_else(|| syntax(st, 0, "`arrow` before `vertices`"))?;
                let parts: Vec<&str> = arg.split_whitespace().collect();
                if parts.len() != 3 || !valid_name(parts[0]) {
                    return Err(syntax(st, at, "expected `arrow name source target`"));
                }
                let vertex = |s: &str| -> Result<u16> {
                    match s.parse::<usize>() {
                        Ok(v) if (1..=n).contains(&v) => Ok((v - 1) as u16),
                        _ => Err(syntax(st, at, format!("vertex `{s}` not in 1..={n}"))),
                    }
                };
                arrows.push(Generator {
                    name: parts[0].to_string(),
                    source: vertex(parts[1])?,
                    target: vertex(parts[2])?,
                });
            }
            "rel" => rels.push((st, arg, at)),
            "field" => return Err(syntax(st, 0, "duplicate `field` header")),
            "free" => return Err(syntax(st, 0, "`free` belongs in a module file")),
            other => return Err(syntax(st, 0, format!("unknown keyword `{other}`"))),
        }
    }

    let skeleton = if let Some(n) = vertices {
        AlgebraPresentation::quiver(field, n, arrows, Vec::new())
    } else {
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        AlgebraPresentation::connected(field, &refs, Vec::new())
    }
    .map_err(|e| relocate(e, first.line))?;

    let mut polys = Vec::with_capacity(rels.len());
    for (st, arg, at) in &rels {
        let mut cur = Cursor {
            st,
            src: arg,
            base: *at,
            pos: 0,
        };
        let terms = cur.polynomial(field)?;
        if cur.peek().is_some() {
            return Err(cur.err("a relation is a single polynomial"));
        }
        let p = resolve_terms(st, &skeleton, terms, 0)?;
        polys.push((st.line, p));
    }
    let mut pres = skeleton;
    let mut normalized = Vec::with_capacity(polys.len());
    for (line, p) in polys {
        pres.check_relation(&p, line)?;
        normalized.push(p.monic());
    }
    pres.relations = normalized;
    Ok(pres)
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Invalid { line: 0, message } => Error::Invalid { line, message },
        other => other,
    }
}

/// Parses a module file over `algebra`.
pub fn parse_module(text: &str, algebra: &AlgebraPresentation) -> Result<ModulePresentation> {
    let sts = statements(text);
    let Some(first) = sts.first() else {
        return Err(Error::Syntax {
            line: 1,
            column: 1,
            message: "missing `free` line".into(),
        });
    };
    let (kw, arg, at) = split_keyword(first);
    if kw != "free" {
        return Err(syntax(first, 0, "module file must start with a `free` line"));
    }
    let mut gens = Vec::new();
    let mut col = at;
    for piece in arg.split(',') {
        let item = piece.trim();
        let (deg, vertex) = match item.split_once('@') {
            Some((d, v)) => (d.trim(), Some(v.trim())),
            None => (item, None),
        };
        let degree: usize = deg
            .parse()
            .map_err(|_| syntax(first, col, format!("`{deg}` is not a degree")))?;
        let vertex = match vertex {
            None => 0,
            Some(v) => match v.parse::<usize>() {
                Ok(v) if (1..=algebra.vertices()).contains(&v) => (v - 1) as u16,
                _ => return Err(syntax(first, col, format!("vertex `{v}` out of range"))),
            },
        };
        gens.push(ModuleGenerator { degree, vertex });
        col += piece.len() + 1;
    }
    if arg.is_empty() {
        gens.clear();
    }

    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for st in &sts[1..] {
        let (kw, arg, at) = split_keyword(st);
        if kw != "rel" {
            return Err(syntax(st, 0, format!("expected `rel`, found `{kw}`")));
        }
        let mut cur = Cursor {
            st,
            src: arg,
            base: at,
            pos: 0,
        };
        let mut row = Vec::with_capacity(gens.len());
        loop {
            let terms = cur.polynomial(algebra.field())?;
            let vertex = gens.get(row.len()).map_or(0, |g: &ModuleGenerator| g.vertex);
            row.push(resolve_terms(st, algebra, terms, vertex)?);
            if !cur.eat(',') {
                break;
            }
        }
        if row.len() != gens.len() {
            return Err(Error::Invalid {
                line: st.line,
                message: format!("row has {} entries, module has {} generators", row.len(), gens.len()),
            });
        }
        rows.push(row);
        lines.push(st.line);
    }
    ModulePresentation::new(algebra, gens, rows).map_err(|e| match e {
        Error::Invalid { line, message } if line > 0 => Error::Invalid {
            line: lines[line - 1],
            message,
        },
        Error::Inhomogeneous { line } if line > 0 => Error::Inhomogeneous { line: lines[line - 1] },
        Error::NotAPath { line, word } if line > 0 => Error::NotAPath {
            line: lines[line - 1],
            word,
        },
        other => relocate(other, first.line),
    })
}
