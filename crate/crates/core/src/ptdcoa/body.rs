use crate::error::{Error, Result};
use crate::exactla::{Field, Scalar, Vector};
use crate::grquiv::{pair_name, Arrow};

use super::Coalgebra;

/// A possibly non-counital pointed curved coalgebra written on one basis:
/// either the full `C = C₀ ⊕ C̄` (grouplikes are cells) or just `C̄`.
#[derive(Clone, Debug)]
pub struct Body {
    pub field: Field,
    pub objects: Vec<String>,
    pub cells: Vec<Arrow>,
    /// Comultiplication: triples `(c1, c2, coef)` with `c1` before `c2` in path order.
    pub comult: Vec<Vec<(usize, usize, Scalar)>>,
    pub diff: Vec<Vector>,
    /// `h(c)` as a scalar multiple of the grouplike at the source of `c`.
    pub curvature: Vector,
    /// The grouplike cell of each object, when counital.
    pub grouplikes: Option<Vec<usize>>,
}

impl Body {
    /// The counital coalgebra: grouplikes first, then the reduced cells.
    pub fn full(c: &Coalgebra) -> Body {
        let n = c.num_objects();
        let f = c.field();
        let mut cells: Vec<Arrow> = c.objects().iter().enumerate().map(|(x, o)| Arrow::new(o.clone(), x, x, 0)).collect();
        cells.extend(c.cells().iter().cloned());
        let mut comult: Vec<Vec<(usize, usize, Scalar)>> = (0..n).map(|x| vec![(x, x, f.one())]).collect();
        for (i, a) in c.cells().iter().enumerate() {
            let mut t = vec![(a.src, n + i, f.one()), (n + i, a.tgt, f.one())];
            t.extend(c.delta_bar(i).iter().map(|(p, q, s)| (n + p, n + q, s.clone())));
            comult.push(t);
        }
        let mut diff = vec![Vector::new(); n];
        diff.extend(c.diffs().iter().map(|v| v.reindex(|j| n + j)));
        Body {
            field: f,
            objects: c.objects().to_vec(),
            cells,
            comult,
            diff,
            curvature: c.curvature().reindex(|j| n + j),
            grouplikes: Some((0..n).collect()),
        }
    }

    /// The non-counital coalgebra `C̄` with the reduced comultiplication.
    pub fn reduced(c: &Coalgebra) -> Body {
        Body {
            field: c.field(),
            objects: c.objects().to_vec(),
            cells: c.cells().to_vec(),
            comult: (0..c.dim()).map(|i| c.delta_bar(i).to_vec()).collect(),
            diff: c.diffs().to_vec(),
            curvature: c.curvature().clone(),
            grouplikes: None,
        }
    }

    pub fn is_counital(&self) -> bool {
        self.grouplikes.is_some()
    }

    pub fn dim(&self) -> usize {
        self.cells.len()
    }

    pub fn is_grouplike(&self, i: usize) -> bool {
        self.grouplikes.as_ref().is_some_and(|g| g.contains(&i))
    }

    /// Counit of a cell: 1 on grouplikes, 0 elsewhere; `None` without a counit.
    pub fn counit(&self, i: usize) -> Option<Scalar> {
        self.grouplikes.as_ref().map(|g| if g.contains(&i) { self.field.one() } else { self.field.zero() })
    }

    pub fn h(&self, i: usize) -> Scalar {
        self.curvature.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_curved(&self) -> bool {
        !self.curvature.is_zero()
    }

    /// `C ⊗ C'`: cells are pairs `(i, j)` at index `i·|C'| + j`, with
    /// `Δ(c⊗e) = Σ (−1)^{|c2||e1|} (c1⊗e1)⊗(c2⊗e2)`, `d(c⊗e) = dc⊗e + (−1)^{|c|} c⊗de`
    /// and curvature `h⊗ε' + ε⊗h'`.
    pub fn tensor(&self, other: &Body) -> Result<Body> {
        let f = self.field;
        let m = other.dim();
        let no = other.objects.len();
        let idx = |i: usize, j: usize| i * m + j;
        let objects = self.objects.iter().flat_map(|x| other.objects.iter().map(move |y| pair_name(x, y))).collect();
        let mut cells = vec![];
        for a in &self.cells {
            for b in &other.cells {
                cells.push(Arrow::new(format!("{}⊗{}", a.name, b.name), a.src * no + b.src, a.tgt * no + b.tgt, a.deg + b.deg));
            }
        }
        let mut comult = vec![];
        let mut diff = vec![];
        for (i, a) in self.cells.iter().enumerate() {
            for (j, _) in other.cells.iter().enumerate() {
                let mut t = vec![];
                for (c1, c2, s) in &self.comult[i] {
                    for (e1, e2, r) in &other.comult[j] {
                        let sign = f.sign((self.cells[*c2].deg * other.cells[*e1].deg) as i64);
                        t.push((idx(*c1, *e1), idx(*c2, *e2), &(s * r) * &sign));
                    }
                }
                comult.push(t);
                let mut v = self.diff[i].reindex(|p| idx(p, j));
                v.add_scaled(&other.diff[j].reindex(|q| idx(i, q)), &f.sign(a.deg as i64));
                diff.push(v);
            }
        }
        let mut curvature = Vector::new();
        if self.is_curved() {
            if !other.is_counital() {
                return Err(Error::Undefined("curvature of the first factor needs a counit on the second".into()));
            }
            for (i, h) in self.curvature.iter() {
                for g in other.grouplikes.as_ref().unwrap() {
                    curvature.add_at(idx(*i, *g), h);
                }
            }
        }
        if other.is_curved() {
            if !self.is_counital() {
                return Err(Error::Undefined("curvature of the second factor needs a counit on the first".into()));
            }
            for g in self.grouplikes.as_ref().unwrap() {
                for (j, h) in other.curvature.iter() {
                    curvature.add_at(idx(*g, *j), h);
                }
            }
        }
        let grouplikes = match (&self.grouplikes, &other.grouplikes) {
            (Some(g), Some(h)) => Some(g.iter().flat_map(|x| h.iter().map(move |y| idx(*x, *y))).collect()),
            _ => None,
        };
        Ok(Body { field: f, objects, cells, comult, diff, curvature, grouplikes })
    }

    /// Drop the grouplike cells of a counital body.
    pub fn into_coalgebra(self) -> Result<Coalgebra> {
        let Some(g) = &self.grouplikes else {
            return Err(Error::Structure("a non-counital body has no reduced part".into()));
        };
        let mut position = vec![None; self.dim()];
        let mut cells = vec![];
        for (i, a) in self.cells.iter().enumerate() {
            if !g.contains(&i) {
                position[i] = Some(cells.len());
                cells.push(a.clone());
            }
        }
        let keep = |i: usize| position[i].is_some();
        let comult = (0..self.dim())
            .filter(|i| keep(*i))
            .map(|i| {
                self.comult[i]
                    .iter()
                    .filter(|(p, q, _)| keep(*p) && keep(*q))
                    .map(|(p, q, s)| (position[*p].unwrap(), position[*q].unwrap(), s.clone()))
                    .collect()
            })
            .collect();
        let mut diff = vec![];
        for i in (0..self.dim()).filter(|i| keep(*i)) {
            if self.diff[i].indices().any(|j| !keep(j)) {
                return Err(Error::Structure(format!("d({}) has a grouplike component", self.cells[i].name)));
            }
            diff.push(self.diff[i].reindex(|j| position[j].unwrap()));
        }
        let curvature = self.curvature.reindex(|j| position[j].expect("curvature on a grouplike"));
        Coalgebra::new(self.field, self.objects, cells, comult, diff, curvature)
    }

    /// Coassociativity, compatibility of `d` with the comultiplication,
    /// `d² = (1⊗h − h⊗1)Δ` and `h∘d = 0`.
    pub fn validate_identities(&self) -> Result<()> {
        let f = self.field;
        let n = self.dim();
        let name = |i: usize| self.cells[i].name.as_str();
        for i in 0..n {
            // (Δ⊗1)Δ = (1⊗Δ)Δ
            let mut lhs: std::collections::HashMap<(usize, usize, usize), Scalar> = Default::default();
            let add = |m: &mut std::collections::HashMap<_, Scalar>, k, s: Scalar| {
                let e = m.entry(k).or_insert_with(|| f.zero());
                *e = &*e + &s;
            };
            for (c1, c2, s) in &self.comult[i] {
                for (a, b, r) in &self.comult[*c1] {
                    add(&mut lhs, (*a, *b, *c2), s * r);
                }
                for (a, b, r) in &self.comult[*c2] {
                    add(&mut lhs, (*c1, *a, *b), -(s * r));
                }
            }
            if lhs.values().any(|v| !v.is_zero()) {
                return Err(Error::Identity(format!("coassociativity fails on '{}'", name(i))));
            }
            // Δd = (d⊗1 + 1⊗d)Δ
            let mut pairs: std::collections::HashMap<(usize, usize), Scalar> = Default::default();
            let mut add2 = |k, s: Scalar| {
                let e = pairs.entry(k).or_insert_with(|| f.zero());
                *e = &*e + &s;
            };
            for (j, c) in self.diff[i].iter() {
                for (a, b, r) in &self.comult[*j] {
                    add2((*a, *b), c * r);
                }
            }
            for (c1, c2, s) in &self.comult[i] {
                for (j, c) in self.diff[*c1].iter() {
                    add2((*j, *c2), -(s * c));
                }
                let sign = f.sign(self.cells[*c1].deg as i64);
                for (j, c) in self.diff[*c2].iter() {
                    add2((*c1, *j), -(&(s * c) * &sign));
                }
            }
            if pairs.values().any(|v| !v.is_zero()) {
                return Err(Error::Identity(format!("d is not a coderivation on '{}'", name(i))));
            }
            // d²c = Σ h(c2) c1 − h(c1) c2
            let mut dd = Vector::new();
            for (j, c) in self.diff[i].iter() {
                dd.add_scaled(&self.diff[*j], c);
            }
            let mut expect = Vector::new();
            for (c1, c2, s) in &self.comult[i] {
                expect.add_at(*c1, &(s * &self.h(*c2)));
                expect.add_at(*c2, &-(s * &self.h(*c1)));
            }
            if dd != expect {
                return Err(Error::Identity(format!(
                    "d² on '{}' is {} but the curvature coaction gives {}",
                    name(i),
                    dd.display_with(&self.cells.iter().map(|a| a.name.clone()).collect::<Vec<_>>()),
                    expect.display_with(&self.cells.iter().map(|a| a.name.clone()).collect::<Vec<_>>())
                )));
            }
            if !self.diff[i].dot(&self.curvature, f).is_zero() {
                return Err(Error::Identity(format!("h(d({})) ≠ 0", name(i))));
            }
        }
        Ok(())
    }
}
