//! Pointed curved coalgebras with split coradical `C = k[Ob C] ⊕ C̄`.
//!
//! A cell `c: x → y` of `C̄` has full coproduct `Δc = x⊗c + c⊗y + Δ̄c`.
//! The curvature is stored as the scalar `h(c)` with `h: C̄ → C₀` of degree 2,
//! so only endo cells of degree −2 may carry it.

mod body;
mod morphism;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactla::{Field, Scalar, Vector};
use crate::grquiv::{Arrow, GradedQuiver, ReducedQuiver};

pub use body::Body;
pub use morphism::{enumerate_coalgebra_maps, enumerate_morphisms, Morphism};

#[derive(Clone, Debug)]
pub struct Coalgebra {
    field: Field,
    quiver: GradedQuiver,
    comult: Vec<Vec<(usize, usize, Scalar)>>,
    diff: Vec<Vector>,
    curvature: Vector,
}

/// A pointed curved coalgebra or the formal final object `*`.
#[derive(Clone, Debug)]
pub enum Pointed {
    Final,
    Coalgebra(Coalgebra),
}

impl Pointed {
    pub fn is_final(&self) -> bool {
        matches!(self, Pointed::Final)
    }

    pub fn coalgebra(&self) -> Option<&Coalgebra> {
        match self {
            Pointed::Final => None,
            Pointed::Coalgebra(c) => Some(c),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.coalgebra().map_or(Ok(()), Coalgebra::validate)
    }

    /// `C ⊗ * = * ⊗ C = *`.
    pub fn tensor(&self, other: &Pointed) -> Result<Pointed> {
        match (self, other) {
            (Pointed::Coalgebra(c), Pointed::Coalgebra(e)) => Ok(Pointed::Coalgebra(c.tensor(e)?)),
            _ => Ok(Pointed::Final),
        }
    }
}

impl Coalgebra {
    pub fn new(
        field: Field,
        objects: Vec<String>,
        cells: Vec<Arrow>,
        comult: Vec<Vec<(usize, usize, Scalar)>>,
        diff: Vec<Vector>,
        curvature: Vector,
    ) -> Result<Self> {
        let quiver = GradedQuiver::new(objects, cells)?;
        let n = quiver.dim();
        if comult.len() != n || diff.len() != n {
            return Err(Error::Dimension(format!("{n} cells need {n} coproducts and differentials")));
        }
        let bad = comult.iter().flatten().any(|(a, b, _)| *a >= n || *b >= n)
            || diff.iter().chain(std::iter::once(&curvature)).any(|v| v.max_index().is_some_and(|m| m >= n));
        if bad {
            return Err(Error::Dimension("structure data refers to a missing cell".into()));
        }
        let comult = comult.into_iter().map(|t| merge_terms(field, t)).collect();
        Ok(Coalgebra { field, quiver, comult, diff, curvature })
    }

    /// The coalgebra with no objects.
    pub fn zero(field: Field) -> Self {
        Coalgebra { field, quiver: GradedQuiver::empty(), comult: vec![], diff: vec![], curvature: Vector::new() }
    }

    /// The ground field: one grouplike, `C̄ = 0`.
    pub fn ground(field: Field) -> Self {
        Coalgebra::new(field, vec!["*".into()], vec![], vec![], vec![], Vector::new()).unwrap()
    }

    /// One grouplike and one primitive endo cell of degree `deg`, optionally curved.
    pub fn primitive(field: Field, name: &str, deg: i32, curvature: Option<Scalar>) -> Self {
        let h = curvature.map_or_else(Vector::new, |s| Vector::from_pairs([(0, s)]));
        Coalgebra::new(field, vec!["*".into()], vec![Arrow::new(name, 0, 0, deg)], vec![vec![]], vec![Vector::new()], h).unwrap()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn quiver(&self) -> &GradedQuiver {
        &self.quiver
    }

    pub fn objects(&self) -> &[String] {
        self.quiver.objects()
    }

    pub fn num_objects(&self) -> usize {
        self.quiver.num_objects()
    }

    pub fn cells(&self) -> &[Arrow] {
        self.quiver.arrows()
    }

    pub fn cell(&self, i: usize) -> &Arrow {
        self.quiver.arrow(i)
    }

    pub fn dim(&self) -> usize {
        self.quiver.dim()
    }

    pub fn delta_bar(&self, i: usize) -> &[(usize, usize, Scalar)] {
        &self.comult[i]
    }

    pub fn diffs(&self) -> &[Vector] {
        &self.diff
    }

    pub fn d(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, c) in v {
            out.add_scaled(&self.diff[*i], c);
        }
        out
    }

    pub fn curvature(&self) -> &Vector {
        &self.curvature
    }

    pub fn h(&self, i: usize) -> Scalar {
        self.curvature.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_curved(&self) -> bool {
        !self.curvature.is_zero()
    }

    pub fn names(&self) -> Vec<String> {
        self.quiver.names()
    }

    /// Slot and degree checks.
    pub fn validate_structure(&self) -> Result<()> {
        let cells = self.cells();
        for (i, c) in cells.iter().enumerate() {
            for (a, b, _) in &self.comult[i] {
                let (ca, cb) = (&cells[*a], &cells[*b]);
                if ca.src != c.src || ca.tgt != cb.src || cb.tgt != c.tgt {
                    return Err(Error::Structure(format!("Δ̄({}) has the non-composable term {}⊗{}", c.name, ca.name, cb.name)));
                }
                if ca.deg + cb.deg != c.deg {
                    return Err(Error::Structure(format!("Δ̄({}) has the term {}⊗{} of the wrong degree", c.name, ca.name, cb.name)));
                }
            }
            for j in self.diff[i].indices() {
                let e = &cells[j];
                if e.src != c.src || e.tgt != c.tgt || e.deg != c.deg + 1 {
                    return Err(Error::Structure(format!("d({}) contains '{}' outside its slot or degree", c.name, e.name)));
                }
            }
        }
        for i in self.curvature.indices() {
            let c = &cells[i];
            if !c.is_endo() {
                return Err(Error::Structure(format!("curvature on the non-endo cell '{}'", c.name)));
            }
            if c.deg != -2 {
                return Err(Error::Structure(format!("curvature on '{}' of degree {}: h has degree 2 so needs degree −2", c.name, c.deg)));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_structure()?;
        Body::reduced(self).validate_identities()
    }

    /// `C ⊗ E` with coradical `k[Ob C] ⊗ k[Ob E]` and curvature `h⊗ε' + ε⊗h'`.
    pub fn tensor(&self, other: &Coalgebra) -> Result<Coalgebra> {
        if self.field != other.field {
            return Err(Error::InvalidField(format!("{} vs {}", self.field, other.field)));
        }
        Body::full(self).tensor(&Body::full(other))?.into_coalgebra()
    }

    /// Coradical weight of each cell: 1 on primitives, otherwise the largest
    /// `w(c1) + w(c2)` over the terms of `Δ̄c`.
    pub fn weights(&self) -> Result<Vec<usize>> {
        let n = self.dim();
        let mut w: Vec<Option<usize>> = vec![None; n];
        let mut progress = true;
        while progress {
            progress = false;
            for i in 0..n {
                if w[i].is_some() {
                    continue;
                }
                let parts: Option<Vec<usize>> = self.comult[i].iter().map(|(a, b, _)| Some(w[*a]? + w[*b]?)).collect();
                if let Some(p) = parts {
                    w[i] = Some(p.into_iter().max().unwrap_or(1));
                    progress = true;
                }
            }
        }
        w.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| Error::Structure("Δ̄ is not conilpotent".into()))
    }

    /// Keep only the weight-homogeneous parts of `Δ̄` and `d`, and drop the curvature.
    pub fn associated_graded(&self) -> Result<(Coalgebra, Vec<usize>)> {
        let w = self.weights()?;
        let comult = (0..self.dim())
            .map(|i| self.comult[i].iter().filter(|(a, b, _)| w[*a] + w[*b] == w[i]).cloned().collect())
            .collect();
        let diff = (0..self.dim()).map(|i| self.diff[i].filtered(|j| w[j] == w[i])).collect();
        let c = Coalgebra::new(self.field, self.objects().to_vec(), self.cells().to_vec(), comult, diff, Vector::new())?;
        Ok((c, w))
    }

    /// Same coalgebra on new cell names (used for printing).
    pub fn renamed(&self, names: Vec<String>) -> Result<Coalgebra> {
        let cells = self.cells().iter().zip(names).map(|(a, n)| Arrow { name: n, ..a.clone() }).collect();
        Coalgebra::new(self.field, self.objects().to_vec(), cells, self.comult.clone(), self.diff.clone(), self.curvature.clone())
    }
}

fn merge_terms(field: Field, t: Vec<(usize, usize, Scalar)>) -> Vec<(usize, usize, Scalar)> {
    let mut m: HashMap<(usize, usize), Scalar> = HashMap::new();
    let mut order = vec![];
    for (a, b, s) in t {
        let e = m.entry((a, b)).or_insert_with(|| {
            order.push((a, b));
            field.zero()
        });
        *e = &*e + &s;
    }
    order.into_iter().filter_map(|k| m.remove(&k).filter(|s| !s.is_zero()).map(|s| (k.0, k.1, s))).collect()
}

/// The tensor coalgebra on a reduced quiver, truncated at word length `max_weight`,
/// with deconcatenation and zero differential and curvature.
pub fn cofree(field: Field, q: &GradedQuiver, max_weight: usize) -> Coalgebra {
    let mut words: Vec<Vec<usize>> = vec![];
    let mut layer: Vec<Vec<usize>> = (0..q.dim()).map(|i| vec![i]).collect();
    for _ in 0..max_weight {
        if layer.is_empty() {
            break;
        }
        words.extend(layer.iter().cloned());
        let mut next = vec![];
        for w in &layer {
            let end = q.arrow(*w.last().unwrap()).tgt;
            for (i, a) in q.arrows().iter().enumerate() {
                if a.src == end {
                    let mut v = w.clone();
                    v.push(i);
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    let index: HashMap<Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let cells = words
        .iter()
        .map(|w| {
            let name = w.iter().map(|i| q.arrow(*i).name.as_str()).collect::<Vec<_>>().join("|");
            Arrow::new(name, q.arrow(w[0]).src, q.arrow(*w.last().unwrap()).tgt, w.iter().map(|i| q.arrow(*i).deg).sum())
        })
        .collect();
    let comult = words
        .iter()
        .map(|w| (1..w.len()).map(|k| (index[&w[..k].to_vec()], index[&w[k..].to_vec()], field.one())).collect())
        .collect();
    let n = words.len();
    Coalgebra::new(field, q.objects().to_vec(), cells, comult, vec![Vector::new(); n], Vector::new()).unwrap()
}

/// The cofree coalgebra on the reduced part of an augmented quiver.
pub fn cofree_on(field: Field, reduced: &ReducedQuiver, max_weight: usize) -> Coalgebra {
    cofree(field, &reduced.quiver, max_weight)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_and_primitive_validate() {
        let f = Field::Rational;
        Coalgebra::ground(f).validate().unwrap();
        Coalgebra::primitive(f, "w", 1, None).validate().unwrap();
        Coalgebra::primitive(f, "v", -2, Some(f.one())).validate().unwrap();
    }

    #[test]
    fn curvature_in_wrong_degree_fails_structurally() {
        let f = Field::Rational;
        let c = Coalgebra::primitive(f, "w", 1, Some(f.one()));
        assert!(matches!(c.validate(), Err(Error::Structure(m)) if m.contains("degree")));
    }

    #[test]
    fn tensor_with_final_is_final() {
        let c = Pointed::Coalgebra(Coalgebra::primitive(Field::Prime(2), "w", 1, None));
        assert!(c.tensor(&Pointed::Final).unwrap().is_final());
        assert!(Pointed::Final.tensor(&c).unwrap().is_final());
    }

    #[test]
    fn tensor_with_ground_is_a_copy() {
        let f = Field::Rational;
        let c = cofree(f, Coalgebra::primitive(f, "w", 1, None).quiver(), 3);
        let t = c.tensor(&Coalgebra::ground(f)).unwrap();
        t.validate().unwrap();
        assert_eq!(t.dim(), c.dim());
        for i in 0..c.dim() {
            assert_eq!(t.cell(i).deg, c.cell(i).deg);
            assert_eq!(t.delta_bar(i), c.delta_bar(i));
        }
    }

    #[test]
    fn tensor_curvature_sits_on_ground_factor() {
        let f = Field::Rational;
        let w = Coalgebra::primitive(f, "w", 1, None);
        let v = Coalgebra::primitive(f, "v", -2, Some(f.one()));
        let t = w.tensor(&v).unwrap();
        t.validate().unwrap();
        let names = t.names();
        let support: Vec<&str> = t.curvature().indices().map(|i| names[i].as_str()).collect();
        assert_eq!(support, vec!["*⊗v"]);
        assert_eq!(t.dim(), 3);
    }

    #[test]
    fn cofree_words() {
        let f = Field::Prime(2);
        let c = cofree(f, Coalgebra::primitive(f, "w", 1, None).quiver(), 3);
        assert_eq!(c.dim(), 3);
        assert_eq!(c.cells().iter().map(|a| a.deg).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(c.weights().unwrap(), vec![1, 2, 3]);
        c.validate().unwrap();
        let q = GradedQuiver::new(vec!["x".into(), "y".into()], vec![Arrow::new("a", 0, 1, 0)]).unwrap();
        assert_eq!(cofree(f, &q, 2).dim(), 1);
        assert_eq!(cofree(f, &GradedQuiver::new(vec!["x".into()], vec![]).unwrap(), 3).dim(), 0);
    }

    #[test]
    fn broken_coderivation_detected() {
        // cofree on w with d(w|w) = ... nonzero while d w = 0
        let f = Field::Rational;
        let q = GradedQuiver::new(vec!["*".into()], vec![Arrow::new("w", 0, 0, 0), Arrow::new("t", 0, 0, 1)]).unwrap();
        let mut c = cofree(f, &q, 2);
        let ww = c.names().iter().position(|n| n == "w|w").unwrap();
        let wt = c.names().iter().position(|n| n == "w|t").unwrap();
        c.diff[ww] = Vector::unit(wt, f);
        assert!(matches!(c.validate(), Err(Error::Identity(_))));
    }
}
