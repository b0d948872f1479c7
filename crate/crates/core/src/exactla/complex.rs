use std::collections::BTreeMap;

use super::elim::{rank_of, Echelon};
use super::field::Field;
use super::sparse::{SparseMatrix, Vector};
use crate::error::{Error, Result};

/// How a finite window of a cochain complex relates to the full complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// The complex vanishes outside the window.
    Zero,
    /// The window is a slice of a larger complex; edge degrees are not reported.
    InteriorOnly,
}

/// A cochain complex supported on degrees `lo..=hi` with named bases.
/// `differentials[n - lo]` maps degree `n` to degree `n + 1`; the last one
/// (out of `hi`) is always the zero map into the (absent) degree `hi + 1`.
#[derive(Clone, Debug)]
pub struct BoundedComplex {
    field: Field,
    lo: i32,
    bases: Vec<Vec<String>>,
    differentials: Vec<SparseMatrix>,
    boundary: Boundary,
}

impl BoundedComplex {
    /// `bases[k]` names the basis in degree `lo + k`; `diffs[k]` is the
    /// differential from degree `lo + k` to `lo + k + 1` (one fewer than `bases`).
    pub fn new(field: Field, lo: i32, bases: Vec<Vec<String>>, diffs: Vec<SparseMatrix>, boundary: Boundary) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::Dimension("complex needs at least one degree".into()));
        }
        if diffs.len() + 1 != bases.len() {
            return Err(Error::Dimension(format!("{} degrees need {} differentials, got {}", bases.len(), bases.len() - 1, diffs.len())));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.cols() != bases[k].len() || d.rows() != bases[k + 1].len() {
                return Err(Error::Dimension(format!(
                    "differential out of degree {} is {}x{}, expected {}x{}",
                    lo + k as i32,
                    d.rows(),
                    d.cols(),
                    bases[k + 1].len(),
                    bases[k].len()
                )));
            }
        }
        for (k, pair) in diffs.windows(2).enumerate() {
            if !pair[1].compose(&pair[0])?.is_zero() {
                return Err(Error::NotAComplex { degree: lo + k as i32 });
            }
        }
        Ok(BoundedComplex { field, lo, bases, differentials: diffs, boundary })
    }

    /// Unnamed bases of the given dimensions.
    pub fn from_dims(field: Field, lo: i32, dims: &[usize], diffs: Vec<SparseMatrix>, boundary: Boundary) -> Result<Self> {
        let bases = dims
            .iter()
            .enumerate()
            .map(|(k, n)| (0..*n).map(|i| format!("e{}_{}", lo + k as i32, i)).collect())
            .collect();
        Self::new(field, lo, bases, diffs, boundary)
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.bases.len() as i32 - 1
    }

    pub fn dim(&self, n: i32) -> usize {
        self.basis(n).map_or(0, |b| b.len())
    }

    pub fn basis(&self, n: i32) -> Option<&[String]> {
        if n < self.lo || n > self.hi() {
            return None;
        }
        Some(&self.bases[(n - self.lo) as usize])
    }

    /// Differential out of degree `n`, if both ends are in the window.
    pub fn differential(&self, n: i32) -> Option<&SparseMatrix> {
        if n < self.lo || n >= self.hi() {
            return None;
        }
        Some(&self.differentials[(n - self.lo) as usize])
    }

    fn rank_out(&self, n: i32) -> usize {
        self.differential(n).map_or(0, SparseMatrix::rank)
    }

    /// Degrees whose cohomology is determined by the window.
    pub fn reportable(&self) -> Vec<i32> {
        match self.boundary {
            Boundary::Zero => (self.lo..=self.hi()).collect(),
            Boundary::InteriorOnly => (self.lo + 1..self.hi()).collect(),
        }
    }

    /// `dim H^n = dim ker d_n − rank d_{n−1}` on every reportable degree.
    pub fn homology_dims(&self) -> BTreeMap<i32, usize> {
        self.reportable()
            .into_iter()
            .map(|n| {
                let ker = self.dim(n) - self.rank_out(n);
                let im = if n > self.lo { self.rank_out(n - 1) } else { 0 };
                (n, ker - im)
            })
            .collect()
    }

    /// Representatives of a basis of `H^n`, expressed in the degree-`n` basis.
    pub fn homology_basis(&self, n: i32) -> Vec<Vector> {
        let Some(basis) = self.basis(n) else { return vec![] };
        let cycles = match self.differential(n) {
            Some(d) => d.kernel_basis(),
            None => (0..basis.len()).map(|i| Vector::unit(i, self.field)).collect(),
        };
        let mut ech = Echelon::new(self.field);
        if let Some(d) = self.differential(n - 1) {
            for c in d.columns() {
                ech.insert(c);
            }
        }
        cycles.into_iter().filter(|z| ech.insert(z).is_none()).collect()
    }
}

/// Rank of the map induced on cohomology by a chain map `f` in one degree.
///
/// `src_out` is the source differential out of the degree, `tgt_in` the target
/// differential into it; `f` maps source degree to target degree.
pub fn induced_rank(src_out: &SparseMatrix, f: &SparseMatrix, tgt_in: &SparseMatrix) -> usize {
    let field = f.field();
    let cycles = src_out.kernel_basis();
    let boundaries: Vec<Vector> = tgt_in.columns().to_vec();
    let mut all: Vec<Vector> = cycles.iter().map(|z| f.apply(z)).collect();
    all.extend(boundaries.iter().cloned());
    rank_of(&all, field) - rank_of(&boundaries, field)
}
