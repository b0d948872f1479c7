use crate::dgcat::{Category, FreeCategory, Functor};
use crate::error::{Error, Result};
use crate::exactla::{Scalar, Vector};
use crate::ptdcoa::{Coalgebra, Morphism};

use super::{Bar, BarWords};

/// A degree-1 cochain `ξ: C̄ → D` over an object map: `ξ(c) ∈ D(fx, fy)` of degree `|c| + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Twisting {
    pub objects: Vec<usize>,
    pub values: Vec<Vector>,
}

impl Twisting {
    pub fn zero(objects: Vec<usize>, cells: usize) -> Self {
        Twisting { objects, values: vec![Vector::new(); cells] }
    }

    pub fn validate_structure(&self, c: &Coalgebra, d: &Category) -> Result<()> {
        if self.objects.len() != c.num_objects() || self.values.len() != c.dim() {
            return Err(Error::Dimension("cochain does not cover the coalgebra".into()));
        }
        if self.objects.iter().any(|y| *y >= d.num_objects()) {
            return Err(Error::Structure("object image outside the category".into()));
        }
        for (i, a) in c.cells().iter().enumerate() {
            for j in self.values[i].indices() {
                if j >= d.dim() {
                    return Err(Error::Dimension("value refers to a missing arrow".into()));
                }
                let e = d.arrow(j);
                if e.src != self.objects[a.src] || e.tgt != self.objects[a.tgt] || e.deg != a.deg + 1 {
                    return Err(Error::Structure(format!("value on '{}' leaves its slot or degree", a.name)));
                }
            }
        }
        Ok(())
    }

    /// `d ξ(c) + ξ(dc) + Σ (−1)^{|c1|} ξ(c1) ξ(c2) + h(c)·1`.
    pub fn mc_defect(&self, c: &Coalgebra, d: &Category, i: usize) -> Result<Vector> {
        let f = c.field();
        let mut v = d.d(&self.values[i]);
        for (j, s) in &c.diffs()[i] {
            v.add_scaled(&self.values[*j], s);
        }
        for (c1, c2, s) in c.delta_bar(i) {
            let sign = &f.sign(c.cell(*c1).deg as i64) * s;
            v.add_scaled(&d.mul(&self.values[*c1], &self.values[*c2]), &sign);
        }
        let h = c.h(i);
        if !h.is_zero() {
            let x = self.objects[c.cell(i).src];
            let u = d.unit(x).ok_or_else(|| Error::Undefined("curvature term needs a unit in the target".into()))?;
            v.add_scaled(u, &h);
        }
        Ok(v)
    }

    pub fn is_mc(&self, c: &Coalgebra, d: &Category) -> Result<bool> {
        self.validate_structure(c, d)?;
        for i in 0..c.dim() {
            if !self.mc_defect(c, d, i)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The functor `ΩC → D` with `⟨c⟩ ↦ ξ(c)`, on every materialized word.
pub fn functor_from_twisting(omega: &FreeCategory, d: &Category, xi: &Twisting) -> Result<Functor> {
    let mut arrows = vec![];
    for w in &omega.words {
        let mut v = d
            .unit(xi.objects[w.src])
            .cloned()
            .ok_or_else(|| Error::Undefined("a functor out of a cobar category needs units in the target".into()))?;
        for g in &w.letters {
            v = d.mul(&v, &xi.values[*g]);
        }
        arrows.push(v);
    }
    Ok(Functor { objects: xi.objects.clone(), arrows })
}

/// `ξ(c) = F⟨c⟩`.
pub fn twisting_from_functor(c: &Coalgebra, omega: &FreeCategory, fun: &Functor) -> Result<Twisting> {
    let values = (0..c.dim())
        .map(|i| {
            let a = c.cell(i);
            let w = crate::dgcat::Word { src: a.src, tgt: a.tgt, letters: vec![i] };
            omega
                .index_of(&w)
                .map(|k| fun.arrows[k].clone())
                .ok_or_else(|| Error::CapExceeded(format!("generator ⟨{}⟩ is not materialized", a.name)))
        })
        .collect::<Result<_>>()?;
    Ok(Twisting { objects: fun.objects.clone(), values })
}

/// Every way of writing `c` as an iterated reduced coproduct `c1 ⊗ … ⊗ cn`, `n ≥ 1`.
pub fn iterated_coproducts(c: &Coalgebra, i: usize) -> Vec<(Vec<usize>, Scalar)> {
    let mut out = vec![(vec![i], c.field().one())];
    for (c1, c2, s) in c.delta_bar(i) {
        for (rest, r) in iterated_coproducts(c, *c2) {
            let mut w = vec![*c1];
            w.extend(rest);
            out.push((w, s * &r));
        }
    }
    out
}

/// The morphism `(f, a): C → BD` with weight-one part `s ξ̄` and `a = π₀ ξ`.
pub fn morphism_from_twisting(c: &Coalgebra, bar: &Bar, bw: &BarWords, xi: &Twisting) -> Result<Morphism> {
    let split: Vec<(Scalar, Vector)> = xi.values.iter().map(|v| bar.split_input(v)).collect();
    let mut cells = vec![];
    for i in 0..c.dim() {
        let mut v = Vector::new();
        for (parts, s) in iterated_coproducts(c, i) {
            let mut terms: Vec<(Vec<usize>, Scalar)> = vec![(vec![], s)];
            for p in &parts {
                let mut next = vec![];
                for (w, x) in &terms {
                    for (k, y) in &split[*p].1 {
                        let mut w2 = w.clone();
                        w2.push(*k);
                        next.push((w2, x * y));
                    }
                }
                terms = next;
            }
            for (w, x) in terms {
                let k = bw
                    .index_of(&w)
                    .ok_or_else(|| Error::CapExceeded(format!("bar truncated below weight {}", w.len())))?;
                v.add_at(k, &x);
            }
        }
        cells.push(v);
    }
    let mut a = Vector::new();
    for (i, (lambda, _)) in split.iter().enumerate() {
        a.add_at(i, lambda);
    }
    Ok(Morphism { objects: xi.objects.clone(), cells, a })
}

/// `ξ(c) = (weight-one part of f(c)) + a(c)·1`.
pub fn twisting_from_morphism(c: &Coalgebra, bar: &Bar, bw: &BarWords, m: &Morphism) -> Twisting {
    let values = (0..c.dim())
        .map(|i| {
            let mut v = Vector::new();
            for (k, s) in &m.cells[i] {
                if let [letter] = bw.words[*k][..] {
                    v.add_scaled(bar.letter_in_input(letter), s);
                }
            }
            if let Some(a) = m.a.get(i) {
                let y = m.objects[c.cell(i).src];
                v.add_scaled(&bar.unit_in_input(y), a);
            }
            v
        })
        .collect();
    Twisting { objects: m.objects.clone(), values }
}

/// Every functor out of a materialized `ΩC` (words of length at least 2),
/// found by assigning each generator a value of the right degree and keeping
/// the assignments that commute with `d` on generators. Finite fields only.
pub fn enumerate_functors(c: &Coalgebra, omega: &FreeCategory, d: &Category, max_dim: usize, cap: usize) -> Result<Vec<Functor>> {
    let f = c.field();
    let elems = f.elements().ok_or_else(|| Error::EnumerationRefused("functors are only enumerated over finite fields".into()))?;
    let gens: Vec<usize> = (0..c.dim())
        .map(|i| {
            let a = c.cell(i);
            omega
                .index_of(&crate::dgcat::Word { src: a.src, tgt: a.tgt, letters: vec![i] })
                .ok_or_else(|| Error::CapExceeded(format!("generator ⟨{}⟩ is not materialized", a.name)))
        })
        .collect::<Result<_>>()?;
    let mut out = vec![];
    for map in crate::grquiv::object_maps(c.num_objects(), d.num_objects(), cap)? {
        let slots: Vec<Vec<usize>> = (0..c.dim())
            .map(|i| {
                let a = omega.category.arrow(gens[i]);
                d.quiver().slot_deg(map[a.src], map[a.tgt], a.deg)
            })
            .collect();
        let total: usize = slots.iter().map(Vec::len).sum();
        if total > max_dim {
            return Err(Error::EnumerationRefused(format!("{total} generator coordinates exceed the cap {max_dim}")));
        }
        let mut digits = vec![0usize; total];
        loop {
            let mut values = vec![Vector::new(); c.dim()];
            let mut k = 0;
            for (i, s) in slots.iter().enumerate() {
                for e in s {
                    values[i].add_at(*e, &elems[digits[k]]);
                    k += 1;
                }
            }
            let fun = functor_from_twisting(omega, d, &Twisting { objects: map.clone(), values })?;
            let ok = gens.iter().all(|g| fun.apply(omega.category.diff_of(*g)) == d.d(&fun.arrows[*g]));
            if ok {
                if out.len() >= cap {
                    return Err(Error::EnumerationRefused(format!("more than {cap} functors")));
                }
                out.push(fun);
            }
            let mut j = 0;
            while j < total && digits[j] + 1 == elems.len() {
                digits[j] = 0;
                j += 1;
            }
            if j == total {
                break;
            }
            digits[j] += 1;
        }
    }
    Ok(out)
}

/// Sizes of the three sides of the adjunction and whether the transports
/// are mutually inverse bijections between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub functors: usize,
    pub mc_elements: usize,
    pub morphisms: usize,
    pub bar_weight: usize,
    pub transports_inverse: bool,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.functors == self.mc_elements && self.mc_elements == self.morphisms && self.transports_inverse
    }
}

/// Enumerate `Hom(ΩC, D)`, `MC(C̄, D)` and `Hom(C, BD)` independently over a
/// finite field; the bar is materialized up to the coradical length of `C`.
pub fn adjunction_check(c: &Coalgebra, d: &Category, max_dim: usize, cap: usize) -> Result<AdjunctionReport> {
    let weight = c.weights()?.into_iter().max().unwrap_or(1).max(1);
    let omega = super::cobar(c, &crate::dgcat::Caps::length(2))?;
    let functors = enumerate_functors(c, &omega, d, max_dim, cap)?;
    let mc = crate::convmc::mc_enumerate(c, d, max_dim, cap)?;
    let bar = Bar::new(d)?;
    let bw = bar.materialize(weight)?;
    let morphisms = crate::ptdcoa::enumerate_morphisms(c, &bw.coalgebra, cap)?;
    let mut inverse = true;
    let mut images = vec![];
    for xi in &mc {
        let fun = functor_from_twisting(&omega, d, xi)?;
        inverse &= twisting_from_functor(c, &omega, &fun)? == *xi && functors.contains(&fun);
        let m = morphism_from_twisting(c, &bar, &bw, xi)?;
        inverse &= twisting_from_morphism(c, &bar, &bw, &m) == *xi && morphisms.contains(&m);
        images.push(m);
    }
    inverse &= morphisms.iter().all(|m| images.contains(m));
    Ok(AdjunctionReport { functors: functors.len(), mc_elements: mc.len(), morphisms: morphisms.len(), bar_weight: weight, transports_inverse: inverse })
}
