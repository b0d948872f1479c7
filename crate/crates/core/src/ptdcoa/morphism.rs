use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactla::{solve, Field, Scalar, SparseMatrix, Vector};
use crate::grquiv::object_maps;

use super::Coalgebra;

/// A morphism `(f, a)`: a coalgebra map `f` with `f(C̄) ⊆ Ē` and a degree-1
/// functional `a: C̄ → k`, nonzero only on cells of degree −1 whose ends
/// have the same image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub objects: Vec<usize>,
    pub cells: Vec<Vector>,
    pub a: Vector,
}

impl Morphism {
    pub fn identity(c: &Coalgebra) -> Self {
        Morphism {
            objects: (0..c.num_objects()).collect(),
            cells: (0..c.dim()).map(|i| Vector::unit(i, c.field())).collect(),
            a: Vector::new(),
        }
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, c) in v {
            out.add_scaled(&self.cells[*i], c);
        }
        out
    }

    /// `(g, b) ∘ (f, a) = (g∘f, b∘f + a)`; `self` is applied first.
    pub fn then(&self, g: &Morphism, field: Field) -> Morphism {
        let objects = self.objects.iter().map(|y| g.objects[*y]).collect();
        let cells = self.cells.iter().map(|v| g.apply(v)).collect();
        let mut a = self.a.clone();
        for (i, v) in self.cells.iter().enumerate() {
            a.add_at(i, &v.dot(&g.a, field));
        }
        Morphism { objects, cells, a }
    }

    /// Slot and degree checks.
    pub fn validate_structure(&self, src: &Coalgebra, tgt: &Coalgebra) -> Result<()> {
        if self.objects.len() != src.num_objects() || self.cells.len() != src.dim() {
            return Err(Error::Dimension("morphism does not cover its source".into()));
        }
        if self.objects.iter().any(|y| *y >= tgt.num_objects()) {
            return Err(Error::Structure("object image outside the target".into()));
        }
        for (i, c) in src.cells().iter().enumerate() {
            for j in self.cells[i].indices() {
                let e = tgt.cells().get(j).ok_or_else(|| Error::Dimension("cell image out of range".into()))?;
                if e.src != self.objects[c.src] || e.tgt != self.objects[c.tgt] || e.deg != c.deg {
                    return Err(Error::Structure(format!("f({}) leaves its slot", c.name)));
                }
            }
        }
        for i in self.a.indices() {
            let c = src.cells().get(i).ok_or_else(|| Error::Dimension("functional index out of range".into()))?;
            if c.deg != -1 || self.objects[c.src] != self.objects[c.tgt] {
                return Err(Error::Structure(format!("a is nonzero on '{}' outside degree −1 endo slots", c.name)));
            }
        }
        Ok(())
    }

    /// `Δ̄ f = (f⊗f) Δ̄` on every cell.
    pub fn is_coalgebra_map(&self, src: &Coalgebra, tgt: &Coalgebra) -> bool {
        (0..src.dim()).all(|i| coproduct_of(tgt, &self.cells[i]) == pushed_coproduct(src, tgt, &self.cells, i))
    }

    pub fn validate(&self, src: &Coalgebra, tgt: &Coalgebra) -> Result<()> {
        self.validate_structure(src, tgt)?;
        let f = src.field();
        for i in 0..src.dim() {
            let c = src.cell(i);
            if coproduct_of(tgt, &self.cells[i]) != pushed_coproduct(src, tgt, &self.cells, i) {
                return Err(Error::Identity(format!("f does not commute with Δ̄ on '{}'", c.name)));
            }
            // d(fc) − f(dc) = Σ (−1)^{|c1|} (a(c1) f(c2) + a(c2) f(c1))
            let lhs = tgt.d(&self.cells[i]).minus(&self.apply(&src.diffs()[i]));
            let mut rhs = Vector::new();
            let mut quad = f.zero();
            for (c1, c2, s) in src.delta_bar(i) {
                let sign = &f.sign(src.cell(*c1).deg as i64) * s;
                let (a1, a2) = (self.a_at(*c1, f), self.a_at(*c2, f));
                rhs.add_scaled(&self.cells[*c2], &(&sign * &a1));
                rhs.add_scaled(&self.cells[*c1], &(&sign * &a2));
                quad = &quad + &(&sign * &(&a1 * &a2));
            }
            if lhs != rhs {
                return Err(Error::Identity(format!("f does not intertwine the differentials on '{}'", c.name)));
            }
            // h_C(c) = h_E(fc) − a(dc) − Σ (−1)^{|c1|} a(c1) a(c2)
            let expect = &(&self.cells[i].dot(tgt.curvature(), f) - &src.diffs()[i].dot(&self.a, f)) - &quad;
            if src.h(i) != expect {
                return Err(Error::Identity(format!("curvatures do not match on '{}'", c.name)));
            }
        }
        Ok(())
    }

    fn a_at(&self, i: usize, f: Field) -> Scalar {
        self.a.get(i).cloned().unwrap_or_else(|| f.zero())
    }
}

type Pairs = HashMap<(usize, usize), Scalar>;

fn add_pair(m: &mut Pairs, k: (usize, usize), s: Scalar) {
    let e = m.entry(k).or_insert_with(|| s.field().zero());
    *e = &*e + &s;
    if e.is_zero() {
        m.remove(&k);
    }
}

fn coproduct_of(tgt: &Coalgebra, v: &Vector) -> Pairs {
    let mut m = Pairs::new();
    for (j, c) in v {
        for (a, b, s) in tgt.delta_bar(*j) {
            add_pair(&mut m, (*a, *b), c * s);
        }
    }
    m
}

fn pushed_coproduct(src: &Coalgebra, _tgt: &Coalgebra, images: &[Vector], i: usize) -> Pairs {
    let mut m = Pairs::new();
    for (c1, c2, s) in src.delta_bar(i) {
        for (a, x) in &images[*c1] {
            for (b, y) in &images[*c2] {
                add_pair(&mut m, (*a, *b), &(s * x) * y);
            }
        }
    }
    m
}

fn all_combinations(field: Field, basis: &[Vector], base: &Vector) -> Vec<Vector> {
    let elems = field.elements().expect("finite field");
    let mut out = vec![base.clone()];
    for b in basis {
        out = out.into_iter().flat_map(|v| elems.iter().map(move |c| v.plus(&b.scaled(c)))).collect();
    }
    out
}

/// Every coalgebra map `C → E` (ignoring `d` and `h`) over a finite field,
/// built cell by cell in order of coradical weight by solving the linear
/// condition `Δ̄ f(c) = Σ f(c1)⊗f(c2)`.
pub fn enumerate_coalgebra_maps(src: &Coalgebra, tgt: &Coalgebra, cap: usize) -> Result<Vec<Morphism>> {
    let field = src.field();
    if !field.is_finite() {
        return Err(Error::EnumerationRefused("enumeration needs a finite field".into()));
    }
    let w = src.weights()?;
    let mut order: Vec<usize> = (0..src.dim()).collect();
    order.sort_by_key(|i| w[*i]);
    let mut out = vec![];
    for objects in object_maps(src.num_objects(), tgt.num_objects(), cap)? {
        let mut images = vec![Vector::new(); src.dim()];
        extend(src, tgt, &objects, &order, 0, &mut images, &mut out, cap)?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    src: &Coalgebra,
    tgt: &Coalgebra,
    objects: &[usize],
    order: &[usize],
    k: usize,
    images: &mut Vec<Vector>,
    out: &mut Vec<Morphism>,
    cap: usize,
) -> Result<()> {
    if k == order.len() {
        if out.len() >= cap {
            return Err(Error::EnumerationRefused(format!("more than {cap} coalgebra maps")));
        }
        out.push(Morphism { objects: objects.to_vec(), cells: images.clone(), a: Vector::new() });
        return Ok(());
    }
    let field = src.field();
    let i = order[k];
    let c = src.cell(i);
    let slot = tgt.quiver().slot_deg(objects[c.src], objects[c.tgt], c.deg);
    let target = pushed_coproduct(src, tgt, images, i);
    let mut keys: Vec<(usize, usize)> = target.keys().copied().collect();
    for j in &slot {
        keys.extend(tgt.delta_bar(*j).iter().map(|(a, b, _)| (*a, *b)));
    }
    keys.sort();
    keys.dedup();
    let pos: HashMap<(usize, usize), usize> = keys.iter().enumerate().map(|(p, k)| (*k, p)).collect();
    let cols = slot
        .iter()
        .map(|j| {
            let mut v = Vector::new();
            for (a, b, s) in tgt.delta_bar(*j) {
                v.add_at(pos[&(*a, *b)], s);
            }
            v
        })
        .collect();
    let m = SparseMatrix::from_columns(keys.len(), cols, field)?;
    let rhs = Vector::from_pairs(target.iter().map(|(k, s)| (pos[k], s.clone())));
    let Some(particular) = solve(&m, &rhs) else { return Ok(()) };
    for sol in all_combinations(field, &m.kernel_basis(), &particular) {
        images[i] = sol.reindex(|p| slot[p]);
        extend(src, tgt, objects, order, k + 1, images, out, cap)?;
    }
    images[i] = Vector::new();
    Ok(())
}

/// Every morphism `(f, a): C → E` over a finite field.
pub fn enumerate_morphisms(src: &Coalgebra, tgt: &Coalgebra, cap: usize) -> Result<Vec<Morphism>> {
    let field = src.field();
    let mut out = vec![];
    for f in enumerate_coalgebra_maps(src, tgt, cap)? {
        let eligible: Vec<usize> = (0..src.dim())
            .filter(|i| {
                let c = src.cell(*i);
                c.deg == -1 && f.objects[c.src] == f.objects[c.tgt]
            })
            .collect();
        let basis: Vec<Vector> = eligible.iter().map(|i| Vector::unit(*i, field)).collect();
        for a in all_combinations(field, &basis, &Vector::new()) {
            let m = Morphism { a, ..f.clone() };
            if m.validate(src, tgt).is_ok() {
                if out.len() >= cap {
                    return Err(Error::EnumerationRefused(format!("more than {cap} morphisms")));
                }
                out.push(m);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grquiv::{Arrow, GradedQuiver};
    use crate::ptdcoa::cofree;

    #[test]
    fn identity_and_composition() {
        let f = Field::Prime(2);
        let c = cofree(f, Coalgebra::primitive(f, "w", 1, None).quiver(), 3);
        let id = Morphism::identity(&c);
        id.validate(&c, &c).unwrap();
        assert_eq!(id.then(&id, f), id);
    }

    #[test]
    fn curved_after_strict_decomposition() {
        // C = one primitive v of degree −1 (uncurved), E = one primitive u of degree −1 with d = 0
        let f = Field::Prime(3);
        let c = Coalgebra::primitive(f, "v", -1, None);
        let strict = Morphism { objects: vec![0], cells: vec![Vector::unit(0, f)], a: Vector::new() };
        let shift = Morphism { objects: vec![0], cells: vec![Vector::unit(0, f)], a: Vector::from_pairs([(0, f.one())]) };
        let comp = strict.then(&shift, f);
        assert_eq!(comp, Morphism { a: Vector::from_pairs([(0, f.one())]), ..strict.clone() });
        shift.validate(&c, &c).unwrap();
        comp.validate(&c, &c).unwrap();
    }

    #[test]
    fn coalgebra_maps_into_cofree_match_quiver_maps() {
        let f = Field::Prime(2);
        let q = GradedQuiver::new(vec!["*".into()], vec![Arrow::new("w", 0, 0, 1), Arrow::new("v", 0, 0, 1)]).unwrap();
        let src = cofree(f, Coalgebra::primitive(f, "t", 1, None).quiver(), 2);
        let tgt = cofree(f, &q, 2);
        let n = enumerate_coalgebra_maps(&src, &tgt, 10_000).unwrap().len();
        // quiver maps from the primitive t: 2^2 choices
        assert_eq!(n, 4);
    }
}
