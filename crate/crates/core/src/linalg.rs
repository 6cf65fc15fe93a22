//! Exact sparse linear algebra over `Q` or `GF(p)`.

use std::collections::{BTreeMap, HashMap};

use crate::field::{FieldSpec, Scalar};

/// Sparse vector: strictly increasing column indices, no zero entries.
pub type SparseVec = Vec<(usize, Scalar)>;

fn axpy(acc: &mut BTreeMap<usize, Scalar>, coeff: &Scalar, v: &[(usize, Scalar)]) {
    for (c, x) in v {
        let t = coeff * x;
        match acc.get_mut(c) {
            Some(e) => {
                *e = &*e + &t;
                if e.is_zero() {
                    acc.remove(c);
                }
            }
            None => {
                acc.insert(*c, t);
            }
        }
    }
}

pub fn scale(v: &[(usize, Scalar)], c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * c)).collect()
}

/// `Σ c_k v_k`.
pub fn combine<'a>(terms: impl IntoIterator<Item = (&'a Scalar, &'a [(usize, Scalar)])>) -> SparseVec {
    let mut acc = BTreeMap::new();
    for (c, v) in terms {
        axpy(&mut acc, c, v);
    }
    acc.into_iter().collect()
}

pub fn add(a: &[(usize, Scalar)], b: &[(usize, Scalar)], field: FieldSpec) -> SparseVec {
    let one = field.one();
    combine([(&one, a), (&one, b)])
}

pub fn sub(a: &[(usize, Scalar)], b: &[(usize, Scalar)], field: FieldSpec) -> SparseVec {
    let one = field.one();
    let minus = -&one;
    combine([(&one, a), (&minus, b)])
}

/// Row echelon form of a growing set of vectors. Each stored row has its
/// pivot (smallest column) normalized to 1.
///
/// With tracking enabled, every row remembers how it was obtained from the
/// inserted vectors, which yields kernels and explicit solutions.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: FieldSpec,
    rows: Vec<SparseVec>,
    pivots: HashMap<usize, usize>,
    combos: Option<Vec<SparseVec>>,
    inserted: usize,
}

/// Result of inserting a vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    /// Increased the rank; the new pivot column.
    Pivot(usize),
    /// Dependent; with tracking, the relation among inserted vectors (`Σ c_i v_i = 0`,
    /// coefficient 1 on the new vector).
    Dependent(Option<SparseVec>),
}

impl Echelon {
    pub fn new(field: FieldSpec) -> Self {
        Echelon {
            field,
            rows: Vec::new(),
            pivots: HashMap::new(),
            combos: None,
            inserted: 0,
        }
    }

    pub fn tracking(field: FieldSpec) -> Self {
        Echelon {
            combos: Some(Vec::new()),
            ..Self::new(field)
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r[0].0)
    }

    pub fn has_pivot(&self, column: usize) -> bool {
        self.pivots.contains_key(&column)
    }

    /// Remainder of `v` modulo the row space, plus (when `track`) the
    /// coefficients `c` on stored rows with `v = remainder + Σ c_r row_r`.
    fn reduce_inner(&self, v: &[(usize, Scalar)], track: bool) -> (SparseVec, Vec<(usize, Scalar)>) {
        let mut acc: BTreeMap<usize, Scalar> = v.iter().cloned().collect();
        let mut rem = Vec::new();
        let mut used = Vec::new();
        while let Some((c, x)) = acc.pop_first() {
            match self.pivots.get(&c) {
                Some(&r) => {
                    axpy(&mut acc, &-&x, &self.rows[r][1..]);
                    if track {
                        used.push((r, x));
                    }
                }
                None => rem.push((c, x)),
            }
        }
        (rem, used)
    }

    pub fn reduce(&self, v: &[(usize, Scalar)]) -> SparseVec {
        self.reduce_inner(v, false).0
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Writes `v` in terms of inserted vectors, if it lies in their span.
    /// Requires tracking.
    pub fn solve(&self, v: &[(usize, Scalar)]) -> Option<SparseVec> {
        let combos = self.combos.as_ref().expect("solve needs a tracking echelon");
        let (rem, used) = self.reduce_inner(v, true);
        if !rem.is_empty() {
            return None;
        }
        Some(combine(used.iter().map(|(r, x)| (x, combos[*r].as_slice()))))
    }

    pub fn insert(&mut self, v: &[(usize, Scalar)]) -> Insertion {
        let index = self.inserted;
        self.inserted += 1;
        let track = self.combos.is_some();
        let (rem, used) = self.reduce_inner(v, track);
        let combo = self.combos.as_ref().map(|combos| {
            let one = self.field.one();
            let mut acc = BTreeMap::new();
            acc.insert(index, one);
            for (r, x) in &used {
                axpy(&mut acc, &-x, &combos[*r]);
            }
            acc.into_iter().collect::<SparseVec>()
        });
        let Some((pivot, lead)) = rem.first().cloned() else {
            return Insertion::Dependent(combo);
        };
        let inv = lead.inv();
        let row = scale(&rem, &inv);
        if let (Some(combos), Some(combo)) = (self.combos.as_mut(), combo) {
            combos.push(scale(&combo, &inv));
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(row);
        Insertion::Pivot(pivot)
    }

    /// Inserts each vector in turn.
    pub fn extend<'a>(&mut self, vs: impl IntoIterator<Item = &'a SparseVec>) {
        for v in vs {
            self.insert(v);
        }
    }
}

/// Basis of `{c : Σ c_k images[k] = 0}`, one vector per dependent image, in order.
pub fn kernel(field: FieldSpec, images: &[SparseVec]) -> Vec<SparseVec> {
    let mut ech = Echelon::tracking(field);
    let mut out = Vec::new();
    for v in images {
        if let Insertion::Dependent(Some(rel)) = ech.insert(v) {
            out.push(rel);
        }
    }
    out
}

pub fn rank(field: FieldSpec, vectors: &[SparseVec]) -> usize {
    let mut ech = Echelon::new(field);
    ech.extend(vectors);
    ech.rank()
}

/// Basis of `span(u) ∩ span(w)`.
pub fn intersect(field: FieldSpec, u: &[SparseVec], w: &[SparseVec]) -> Vec<SparseVec> {
    let mut ech = Echelon::tracking(field);
    for v in w {
        ech.insert(v);
    }
    let offset = ech.inserted();
    let mut out = Vec::new();
    let mut basis = Echelon::new(field);
    for v in u {
        if let Insertion::Dependent(Some(rel)) = ech.insert(v) {
            let x = combine(
                rel.iter()
                    .filter(|(i, _)| *i >= offset)
                    .map(|(i, c)| (c, u[i - offset].as_slice())),
            );
            if !x.is_empty() && matches!(basis.insert(&x), Insertion::Pivot(_)) {
                out.push(x);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> SparseVec {
        let f = FieldSpec::Rationals;
        v.iter()
            .enumerate()
            .filter(|(_, x)| **x != 0)
            .map(|(i, x)| (i, f.from_i64(*x)))
            .collect()
    }

    #[test]
    fn rank_and_reduction() {
        let f = FieldSpec::Rationals;
        let vs = vec![q(&[1, 2, 3]), q(&[2, 4, 6]), q(&[0, 1, 1])];
        assert_eq!(rank(f, &vs), 2);
        let mut e = Echelon::new(f);
        e.extend(&vs);
        assert!(e.contains(&q(&[1, 3, 4])));
        assert!(!e.contains(&q(&[0, 0, 1])));
    }

    #[test]
    fn kernel_relations() {
        let f = FieldSpec::Rationals;
        let vs = vec![q(&[1, 2, 3]), q(&[0, 1, 1]), q(&[1, 3, 4]), q(&[2, 4, 6])];
        let ker = kernel(f, &vs);
        assert_eq!(ker.len(), 2);
        for rel in &ker {
            let s = combine(rel.iter().map(|(i, c)| (c, vs[*i].as_slice())));
            assert!(s.is_empty());
        }
    }

    #[test]
    fn solve_recovers_coefficients() {
        let f = FieldSpec::prime(7).unwrap();
        let v = |xs: &[i64]| -> SparseVec {
            xs.iter()
                .enumerate()
                .filter(|(_, x)| **x % 7 != 0)
                .map(|(i, x)| (i, f.from_i64(*x)))
                .collect()
        };
        let vs = vec![v(&[1, 1, 0]), v(&[0, 1, 1])];
        let mut e = Echelon::tracking(f);
        e.extend(&vs);
        let target = v(&[3, 5, 2]);
        let c = e.solve(&target).unwrap();
        assert_eq!(combine(c.iter().map(|(i, x)| (x, vs[*i].as_slice()))), target);
        assert!(e.solve(&v(&[1, 0, 0])).is_none());
    }

    #[test]
    fn intersection_of_planes() {
        let f = FieldSpec::Rationals;
        let u = vec![q(&[1, 0, 0]), q(&[0, 1, 0])];
        let w = vec![q(&[0, 1, 0]), q(&[0, 0, 1])];
        let i = intersect(f, &u, &w);
        assert_eq!(i.len(), 1);
        assert_eq!(rank(f, &[i[0].clone(), q(&[0, 1, 0])]), 1);
        assert_eq!(intersect(f, &u, &u).len(), 2);
    }
}
