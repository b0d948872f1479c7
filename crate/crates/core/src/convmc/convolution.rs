use std::collections::HashMap;

use crate::dgcat::Category;
use crate::error::{Error, Result};
use crate::exactla::{Field, Scalar, Vector};
use crate::grquiv::{object_maps, Arrow, GradedQuiver};
use crate::ptdcoa::Body;

/// `(cell, arrow, coefficient)`: the functional sending `cell` to `coefficient·arrow`.
pub type Term = (usize, usize, Scalar);

/// A convolution category `{C, D}` or a twisted version of it. Arrows are
/// pairs `(c, e)`: the map sending the cell `c` to the arrow `e` of `D` and
/// every other cell to zero; their degree is `|e| − |c|`.
#[derive(Clone, Debug)]
pub struct Convolution {
    pub category: Category,
    pub maps: Vec<Vec<usize>>,
    /// `(source object, target object, cell, arrow)` of each basis arrow.
    pub basis: Vec<(usize, usize, usize, usize)>,
    index: HashMap<(usize, usize, usize, usize), usize>,
}

struct Ops<'a> {
    body: &'a Body,
    d: &'a Category,
    // cells c' with dc' ∋ s·c, keyed by c
    rev_diff: Vec<Vec<(usize, Scalar)>>,
    // cells c with Δc ∋ s·(c1⊗c2), keyed by (c1, c2)
    rev_comult: HashMap<(usize, usize), Vec<(usize, Scalar)>>,
}

impl<'a> Ops<'a> {
    fn new(body: &'a Body, d: &'a Category) -> Self {
        let mut rev_diff = vec![vec![]; body.dim()];
        for (c, v) in body.diff.iter().enumerate() {
            for (i, s) in v {
                rev_diff[*i].push((c, s.clone()));
            }
        }
        let mut rev_comult: HashMap<(usize, usize), Vec<(usize, Scalar)>> = HashMap::new();
        for (c, t) in body.comult.iter().enumerate() {
            for (c1, c2, s) in t {
                rev_comult.entry((*c1, *c2)).or_default().push((c, s.clone()));
            }
        }
        Ops { body, d, rev_diff, rev_comult }
    }

    fn deg(&self, c: usize, e: usize) -> i32 {
        self.d.deg(e) - self.body.cells[c].deg
    }

    /// `(dφ)(c) = d(φ(c)) − (−1)^{|φ|} φ(dc)`.
    fn diff(&self, c: usize, e: usize) -> Vec<Term> {
        let f = self.body.field;
        let mut out: Vec<Term> = self.d.diff_of(e).iter().map(|(j, s)| (c, *j, s.clone())).collect();
        let sign = -f.sign(self.deg(c, e) as i64);
        out.extend(self.rev_diff[c].iter().map(|(c2, s)| (*c2, e, &sign * s)));
        out
    }

    /// `(φ⋆ψ)(c) = Σ (−1)^{|ψ||c1|} φ(c1) ψ(c2)`.
    fn mul(&self, (c1, e1): (usize, usize), (c2, e2): (usize, usize)) -> Vec<Term> {
        let f = self.body.field;
        let Some(cs) = self.rev_comult.get(&(c1, c2)) else { return vec![] };
        let prod = self.d.mul(&Vector::unit(e1, f), &Vector::unit(e2, f));
        if prod.is_zero() {
            return vec![];
        }
        let sign = f.sign((self.deg(c2, e2) * self.body.cells[c1].deg) as i64);
        let mut out = vec![];
        for (c, s) in cs {
            let k = &sign * s;
            out.extend(prod.iter().map(|(j, x)| (*c, *j, &k * x)));
        }
        out
    }

    fn unit(&self, map: &[usize]) -> Result<Option<Vec<Term>>> {
        let (Some(g), Some(units)) = (&self.body.grouplikes, self.d.units()) else { return Ok(None) };
        let mut out = vec![];
        for (x, gx) in g.iter().enumerate() {
            out.extend(units[map[x]].iter().map(|(j, s)| (*gx, *j, s.clone())));
        }
        Ok(Some(out))
    }

    /// `c ↦ h(c)·1_{fx}`, plus `c ↦ ε(c)·h_{fx}` when the target is curved.
    fn curvature(&self, map: &[usize]) -> Result<Vec<Term>> {
        let mut out = vec![];
        for (c, h) in self.body.curvature.iter() {
            let x = map[self.body.cells[*c].src];
            let u = self.d.unit(x).ok_or_else(|| Error::Undefined("a curved coalgebra needs units in the target".into()))?;
            out.extend(u.iter().map(|(j, s)| (*c, *j, h * s)));
        }
        if self.d.is_curved() {
            let g = self.body.grouplikes.as_ref().ok_or_else(|| {
                Error::Undefined("a curved target needs a counital coalgebra".into())
            })?;
            for (x, gx) in g.iter().enumerate() {
                out.extend(self.d.curvature_at(map[x]).iter().map(|(j, s)| (*gx, *j, s.clone())));
            }
        }
        Ok(out)
    }
}

fn map_name(d: &Category, map: &[usize]) -> String {
    format!("({})", map.iter().map(|y| d.quiver().objects()[*y].as_str()).collect::<Vec<_>>().join(","))
}

impl Convolution {
    /// `{C, D}` on every object map, with curvature, and units when `C` is
    /// counital and `D` unital.
    pub fn new(body: &Body, d: &Category, cap: usize) -> Result<Convolution> {
        if body.field != d.field() {
            return Err(Error::InvalidField(format!("{} vs {}", body.field, d.field())));
        }
        let maps = object_maps(body.objects.len(), d.num_objects(), cap)?;
        let names = maps.iter().map(|m| map_name(d, m)).collect();
        build(body, d, maps, None, names)
    }

    pub fn arrow_of(&self, i: usize, j: usize, c: usize, e: usize) -> Option<usize> {
        self.index.get(&(i, j, c, e)).copied()
    }

    /// The arrow-space vector in the slot `(i, j)` for per-cell values in `D`.
    pub fn element(&self, i: usize, j: usize, values: &[Vector]) -> Result<Vector> {
        let mut out = Vector::new();
        for (c, v) in values.iter().enumerate() {
            for (e, s) in v {
                let k = self.arrow_of(i, j, c, *e).ok_or_else(|| Error::Structure("value outside the hom slot".into()))?;
                out.add_at(k, s);
            }
        }
        Ok(out)
    }

    /// Per-cell values of an arrow-space vector.
    pub fn values(&self, v: &Vector, cells: usize) -> Vec<Vector> {
        let mut out = vec![Vector::new(); cells];
        for (k, s) in v {
            let (_, _, c, e) = self.basis[*k];
            out[c].add_at(e, s);
        }
        out
    }
}

/// The category on `objects` (object maps), twisted by `twists` when given.
pub(crate) fn build(
    body: &Body,
    d: &Category,
    maps: Vec<Vec<usize>>,
    twists: Option<&[Vec<Term>]>,
    names: Vec<String>,
) -> Result<Convolution> {
    let f: Field = body.field;
    let ops = Ops::new(body, d);
    let mut arrows = vec![];
    let mut basis = vec![];
    for (i, fi) in maps.iter().enumerate() {
        for (j, fj) in maps.iter().enumerate() {
            for (c, cell) in body.cells.iter().enumerate() {
                for e in d.quiver().slot(fi[cell.src], fj[cell.tgt]) {
                    arrows.push(Arrow::new(format!("{}↦{}", cell.name, d.arrow(e).name), i, j, ops.deg(c, e)));
                    basis.push((i, j, c, e));
                }
            }
        }
    }
    let index: HashMap<(usize, usize, usize, usize), usize> = basis.iter().enumerate().map(|(k, b)| (*b, k)).collect();
    let collect = |i: usize, j: usize, terms: Vec<Term>| -> Vector {
        let mut v = Vector::new();
        for (c, e, s) in terms {
            v.add_at(index[&(i, j, c, e)], &s);
        }
        v
    };
    let mut diff = vec![];
    for &(i, j, c, e) in &basis {
        let mut terms = ops.diff(c, e);
        if let Some(tw) = twists {
            let sign = -f.sign(ops.deg(c, e) as i64);
            for (c1, e1, s) in &tw[i] {
                terms.extend(ops.mul((*c1, *e1), (c, e)).into_iter().map(|(a, b, x)| (a, b, s * &x)));
            }
            for (c2, e2, s) in &tw[j] {
                let k = &sign * s;
                terms.extend(ops.mul((c, e), (*c2, *e2)).into_iter().map(|(a, b, x)| (a, b, &k * &x)));
            }
        }
        diff.push(collect(i, j, terms));
    }
    let mut by_src: Vec<Vec<usize>> = vec![vec![]; maps.len()];
    for (k, b) in basis.iter().enumerate() {
        by_src[b.0].push(k);
    }
    let mut comp = HashMap::new();
    for (p, &(i, j, c1, e1)) in basis.iter().enumerate() {
        for &q in &by_src[j] {
            let (_, k, c2, e2) = basis[q];
            let v = collect(i, k, ops.mul((c1, e1), (c2, e2)));
            if !v.is_zero() {
                comp.insert((p, q), v);
            }
        }
    }
    let units = maps
        .iter()
        .enumerate()
        .map(|(i, m)| ops.unit(m).map(|u| u.map(|t| collect(i, i, t))))
        .collect::<Result<Option<Vec<Vector>>>>()?;
    let curvature = if twists.is_some() {
        None
    } else {
        let h: Vec<Vector> =
            maps.iter().enumerate().map(|(i, m)| ops.curvature(m).map(|t| collect(i, i, t))).collect::<Result<_>>()?;
        h.iter().any(|v| !v.is_zero()).then_some(h)
    };
    let quiver = GradedQuiver::new(names, arrows)?;
    let category = Category::new(f, quiver, diff, comp, units, curvature)?;
    Ok(Convolution { category, maps, basis, index })
}
