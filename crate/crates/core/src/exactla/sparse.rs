use std::collections::btree_map::{self, Entry};
use std::collections::BTreeMap;
use std::fmt;

use super::field::{Field, Scalar};
use crate::error::{Error, Result};

/// Sparse vector: index → nonzero scalar. Zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Vector {
    entries: BTreeMap<usize, Scalar>,
}

impl Vector {
    pub fn new() -> Self {
        Vector { entries: BTreeMap::new() }
    }

    pub fn unit(i: usize, field: Field) -> Self {
        let mut v = Vector::new();
        v.entries.insert(i, field.one());
        v
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, Scalar)>>(pairs: I) -> Self {
        let mut v = Vector::new();
        for (i, c) in pairs {
            v.add_at(i, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries.get(&i)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, usize, Scalar> {
        self.entries.iter()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn add_at(&mut self, i: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(i) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Vector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_at(*i, &(x * c));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Vector {
        if c.is_zero() {
            return Vector::new();
        }
        Vector { entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    pub fn plus(&self, other: &Vector) -> Vector {
        let mut v = self.clone();
        for (i, x) in other.iter() {
            v.add_at(*i, x);
        }
        v
    }

    pub fn minus(&self, other: &Vector) -> Vector {
        let mut v = self.clone();
        for (i, x) in other.iter() {
            v.add_at(*i, &(-x));
        }
        v
    }

    pub fn neg(&self) -> Vector {
        Vector { entries: self.entries.iter().map(|(i, x)| (*i, -x)).collect() }
    }

    /// Relabel indices through `f`; entries mapped to the same index are summed.
    pub fn reindex(&self, mut f: impl FnMut(usize) -> usize) -> Vector {
        let mut v = Vector::new();
        for (i, x) in self.iter() {
            v.add_at(f(*i), x);
        }
        v
    }

    /// Keep only the indices accepted by `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(usize) -> bool) -> Vector {
        Vector { entries: self.entries.iter().filter(|(i, _)| keep(**i)).map(|(i, x)| (*i, x.clone())).collect() }
    }

    pub fn dot(&self, other: &Vector, field: Field) -> Scalar {
        let mut acc = field.zero();
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        for (i, x) in small.iter() {
            if let Some(y) = big.get(*i) {
                acc = &acc + &(x * y);
            }
        }
        acc
    }

    /// Render against a list of basis labels, e.g. `2*a + b`.
    pub fn display_with(&self, labels: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(i, c)| {
                let name = labels.get(*i).cloned().unwrap_or_else(|| format!("#{i}"));
                if c.is_one() {
                    name
                } else {
                    format!("{c}*{name}")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl<'a> IntoIterator for &'a Vector {
    type Item = (&'a usize, &'a Scalar);
    type IntoIter = btree_map::Iter<'a, usize, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// Sparse matrix stored by columns: column `j` is the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<Vector>,
    field: Field,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize, field: Field) -> Self {
        SparseMatrix { rows, cols: vec![Vector::new(); cols], field }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        SparseMatrix { rows: n, cols: (0..n).map(|i| Vector::unit(i, field)).collect(), field }
    }

    pub fn from_columns(rows: usize, cols: Vec<Vector>, field: Field) -> Result<Self> {
        for (j, c) in cols.iter().enumerate() {
            if let Some(m) = c.max_index() {
                if m >= rows {
                    return Err(Error::Dimension(format!("column {j} has row index {m} ≥ {rows}")));
                }
            }
            for (_, x) in c.iter() {
                if x.field() != field {
                    return Err(Error::InvalidField(format!("entry over {} in matrix over {field}", x.field())));
                }
            }
        }
        Ok(SparseMatrix { rows, cols, field })
    }

    /// Build from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(rows: usize, cols: usize, field: Field, trips: &[(usize, usize, Scalar)]) -> Result<Self> {
        let mut m = SparseMatrix::zero(rows, cols, field);
        for (r, c, x) in trips {
            if *r >= rows || *c >= cols {
                return Err(Error::Dimension(format!("triplet ({r},{c}) outside {rows}x{cols}")));
            }
            m.cols[*c].add_at(*r, x);
        }
        Ok(m)
    }

    pub fn from_dense(field: Field, rows: &[Vec<i64>]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::zero(nr, nc, field);
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                m.cols[j].add_at(i, &field.int(*x));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn column(&self, j: usize) -> &Vector {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[Vector] {
        &self.cols
    }

    pub fn into_columns(self) -> Vec<Vector> {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.cols[j].get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vector::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vector::is_zero)
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (j, c) in v.iter() {
            out.add_scaled(&self.cols[*j], c);
        }
        out
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols() != other.rows {
            return Err(Error::Dimension(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows,
                self.cols(),
                other.rows,
                other.cols()
            )));
        }
        Ok(SparseMatrix { rows: self.rows, cols: other.cols.iter().map(|c| self.apply(c)).collect(), field: self.field })
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::zero(self.cols(), self.rows, self.field);
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c.iter() {
                t.cols[*i].add_at(j, x);
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        super::elim::rank(self)
    }

    pub fn kernel_basis(&self) -> Vec<Vector> {
        super::elim::kernel_basis(self)
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| (0..self.cols()).map(|j| self.get(i, j)).collect()).collect()
    }
}

impl fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}
