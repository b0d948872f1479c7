use std::collections::HashMap;

use crate::dgcat::Category;
use crate::error::{Error, Result};
use crate::exactla::{inverse, Scalar, SparseMatrix, Vector};
use crate::grquiv::Arrow;
use crate::ptdcoa::{Coalgebra, Pointed};

/// `D` rewritten on a basis made of its units and a chosen complement `D̄`.
#[derive(Clone, Debug)]
pub struct Bar {
    split: Category,
    /// Arrow `i` of the split category written in the arrows of the input.
    basis: Vec<Vector>,
    to_split: SparseMatrix,
    units: Vec<usize>,
    reduced: Vec<usize>,
}

/// A weight-truncated bar coalgebra with the word behind each cell.
#[derive(Clone, Debug)]
pub struct BarWords {
    pub coalgebra: Coalgebra,
    /// Letters are indices into the reduced arrows of the split category.
    pub words: Vec<Vec<usize>>,
    pub max_weight: usize,
    index: HashMap<Vec<usize>, usize>,
}

impl BarWords {
    pub fn index_of(&self, word: &[usize]) -> Option<usize> {
        self.index.get(word).copied()
    }
}

impl Bar {
    /// Default splitting: units swapped into the basis, complement spanned by the other arrows.
    pub fn new(d: &Category) -> Result<Bar> {
        let f = d.field();
        let mut basis: Vec<Vector> = (0..d.dim()).map(|i| Vector::unit(i, f)).collect();
        if d.unit_indices().is_none() {
            for u in d.units().ok_or_else(|| Error::Structure("bar needs a unital category".into()))? {
                if let Some(i) = u.max_index() {
                    basis[i] = u.clone();
                }
            }
        }
        Bar::from_split(d.rebase_units()?, basis)
    }

    /// Splitting with complement spanned by `complement` (written in the arrows of `d`).
    pub fn with_complement(d: &Category, complement: &[Vector], names: Vec<String>) -> Result<Bar> {
        let units = d.units().ok_or_else(|| Error::Structure("bar needs a unital category".into()))?;
        if complement.len() + units.len() != d.dim() || names.len() != complement.len() {
            return Err(Error::Dimension("the complement must have one vector per non-unit dimension".into()));
        }
        let mut basis: Vec<Vector> = units.to_vec();
        basis.extend(complement.iter().cloned());
        let mut all_names: Vec<String> = d.quiver().objects().iter().map(|o| format!("1_{o}")).collect();
        all_names.extend(names);
        let split = d
            .change_basis(&basis, all_names)
            .map_err(|e| Error::Structure(format!("splitting is not complementary to the units: {e}")))?;
        Bar::from_split(split, basis)
    }

    fn from_split(split: Category, basis: Vec<Vector>) -> Result<Bar> {
        if split.is_curved() {
            return Err(Error::Undefined("bar is defined on uncurved dg categories".into()));
        }
        let units = split.unit_indices().ok_or_else(|| Error::Structure("units are not basis arrows".into()))?;
        let reduced = (0..split.dim()).filter(|i| !units.contains(i)).collect();
        let m = SparseMatrix::from_columns(split.dim(), basis.clone(), split.field())?;
        let to_split = inverse(&m).ok_or_else(|| Error::Structure("splitting is not a basis".into()))?;
        Ok(Bar { split, basis, to_split, units, reduced })
    }

    pub fn category(&self) -> &Category {
        &self.split
    }

    /// Reduced arrows of the split category, in letter order.
    pub fn reduced(&self) -> &[usize] {
        &self.reduced
    }

    /// A letter (index into the reduced arrows) written in the arrows of the input.
    pub fn letter_in_input(&self, k: usize) -> &Vector {
        &self.basis[self.reduced[k]]
    }

    /// Split-category vector rewritten in the arrows of the input.
    pub fn to_input(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, c) in v {
            out.add_scaled(&self.basis[*i], c);
        }
        out
    }

    pub fn unit_in_input(&self, x: usize) -> Vector {
        self.basis[self.units[x]].clone()
    }

    /// Unit coefficient and reduced letters of a vector in the arrows of the input.
    pub fn split_input(&self, v: &Vector) -> (Scalar, Vector) {
        self.split_vector(&self.to_split.apply(v))
    }

    /// `(unit coefficient, reduced part as letters)` of a split-category vector.
    fn split_vector(&self, v: &Vector) -> (Scalar, Vector) {
        let f = self.split.field();
        let mut lambda = f.zero();
        for u in &self.units {
            if let Some(c) = v.get(*u) {
                lambda = &lambda + c;
            }
        }
        let pos: HashMap<usize, usize> = self.reduced.iter().enumerate().map(|(k, i)| (*i, k)).collect();
        let rest = Vector::from_pairs(v.iter().filter_map(|(i, c)| pos.get(i).map(|k| (*k, c.clone()))));
        (lambda, rest)
    }

    /// Words of composable reduced arrows of length `1..=max_weight`, with
    /// deconcatenation, the bar differential and curvature.
    pub fn materialize(&self, max_weight: usize) -> Result<BarWords> {
        let d = &self.split;
        let f = d.field();
        let letters: Vec<&Arrow> = self.reduced.iter().map(|i| d.arrow(*i)).collect();
        let mut words: Vec<Vec<usize>> = vec![];
        let mut layer: Vec<Vec<usize>> = (0..letters.len()).map(|k| vec![k]).collect();
        for _ in 0..max_weight {
            if layer.is_empty() {
                break;
            }
            words.extend(layer.iter().cloned());
            let mut next = vec![];
            for w in &layer {
                let end = letters[*w.last().unwrap()].tgt;
                for (k, a) in letters.iter().enumerate() {
                    if a.src == end {
                        let mut v = w.clone();
                        v.push(k);
                        next.push(v);
                    }
                }
            }
            layer = next;
        }
        let index: HashMap<Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let shifted = |k: usize| letters[k].deg - 1;
        let mut cells: Vec<Arrow> = words
            .iter()
            .map(|w| {
                let name = format!("[{}]", w.iter().map(|k| letters[*k].name.as_str()).collect::<Vec<_>>().join("|"));
                Arrow::new(name, letters[w[0]].src, letters[*w.last().unwrap()].tgt, w.iter().map(|k| shifted(*k)).sum())
            })
            .collect();
        let mut seen: HashMap<(String, usize, usize), usize> = HashMap::new();
        for c in &cells {
            *seen.entry((c.name.clone(), c.src, c.tgt)).or_default() += 1;
        }
        for (c, w) in cells.iter_mut().zip(&words) {
            if seen[&(c.name.clone(), c.src, c.tgt)] > 1 {
                let path: Vec<&str> = w[1..].iter().map(|k| d.quiver().objects()[letters[*k].src].as_str()).collect();
                c.name = format!("{}@{}", c.name, path.join(","));
            }
        }
        let comult = words
            .iter()
            .map(|w| (1..w.len()).map(|k| (index[&w[..k].to_vec()], index[&w[k..].to_vec()], f.one())).collect())
            .collect();
        let mut diff = vec![];
        let mut curvature = Vector::new();
        for (wi, w) in words.iter().enumerate() {
            let mut v = Vector::new();
            let mut prefix = 0i64;
            for i in 0..w.len() {
                let eps = f.sign(prefix);
                let a = self.reduced[w[i]];
                // [.. | s a | ..] ↦ −[.. | s d̄a | ..]
                let (lambda, da) = self.split_vector(d.diff_of(a));
                if w.len() == 1 && !lambda.is_zero() {
                    curvature.add_at(wi, &-lambda);
                }
                for (k, c) in &da {
                    let mut nw = w.clone();
                    nw[i] = *k;
                    v.add_at(index[&nw], &-(&eps * c));
                }
                // [.. | s a | s b | ..] ↦ (−1)^{|a|} [.. | s π̄(ab) | ..]
                if i + 1 < w.len() {
                    let b = self.reduced[w[i + 1]];
                    let s = &eps * &f.sign(d.deg(a) as i64);
                    let (lambda, ab) = self.split_vector(&d.mul(&Vector::unit(a, f), &Vector::unit(b, f)));
                    if w.len() == 2 && !lambda.is_zero() {
                        curvature.add_at(wi, &(&f.sign(d.deg(a) as i64) * &lambda));
                    }
                    for (k, c) in &ab {
                        let mut nw = w[..i].to_vec();
                        nw.push(*k);
                        nw.extend_from_slice(&w[i + 2..]);
                        v.add_at(index[&nw], &(&s * c));
                    }
                }
                prefix += shifted(w[i]) as i64;
            }
            diff.push(v);
        }
        let coalgebra = Coalgebra::new(f, d.quiver().objects().to_vec(), cells, comult, diff, curvature)?;
        Ok(BarWords { coalgebra, words, max_weight, index })
    }
}

/// `B D` truncated at `max_weight`; `B∅ = 0` and `B𝟎 = *`.
pub fn bar(d: &Category, max_weight: usize) -> Result<Pointed> {
    if d.is_zero_category() {
        return Ok(Pointed::Final);
    }
    if d.num_objects() == 0 {
        return Ok(Pointed::Coalgebra(Coalgebra::zero(d.field())));
    }
    Ok(Pointed::Coalgebra(Bar::new(d)?.materialize(max_weight)?.coalgebra))
}
