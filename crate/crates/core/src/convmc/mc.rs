use crate::barcobar::{bar, Twisting};
use crate::dgcat::Category;
use crate::error::{Error, Result};
use crate::exactla::Vector;
use crate::grquiv::object_maps;
use crate::ptdcoa::{Body, Coalgebra, Pointed};

use super::convolution::{build, Convolution, Term};

/// Whether `ξ` solves `dξ + ξ⋆ξ + h = 0`, with the residual on each cell.
pub fn mc_check(c: &Coalgebra, d: &Category, xi: &Twisting) -> Result<(bool, Vec<Vector>)> {
    xi.validate_structure(c, d).map_err(|e| match e {
        Error::Structure(m) => Error::NotMaurerCartan(format!("cochain is not of degree 1: {m}")),
        other => other,
    })?;
    let residual = (0..c.dim()).map(|i| xi.mc_defect(c, d, i)).collect::<Result<Vec<_>>>()?;
    Ok((residual.iter().all(Vector::is_zero), residual))
}

/// Basis of degree-1 cochains over the object map `map`: `(cell, arrow)` pairs.
pub fn cochain_basis(c: &Coalgebra, d: &Category, map: &[usize]) -> Vec<(usize, usize)> {
    let mut out = vec![];
    for (i, a) in c.cells().iter().enumerate() {
        for e in d.quiver().slot_deg(map[a.src], map[a.tgt], a.deg + 1) {
            out.push((i, e));
        }
    }
    out
}

/// Every MC element of `{C̄, D}` over a finite field, by exhausting degree-1
/// cochains; refuses when some object map has more than `max_dim` of them.
pub fn mc_enumerate(c: &Coalgebra, d: &Category, max_dim: usize, cap: usize) -> Result<Vec<Twisting>> {
    let f = c.field();
    let elems = f
        .elements()
        .ok_or_else(|| Error::EnumerationRefused("MC elements are only enumerated over finite fields".into()))?;
    let mut out = vec![];
    for map in object_maps(c.num_objects(), d.num_objects(), cap)? {
        let basis = cochain_basis(c, d, &map);
        if basis.len() > max_dim {
            return Err(Error::EnumerationRefused(format!("{} degree-1 cochains exceed the cap {max_dim}", basis.len())));
        }
        let mut digits = vec![0usize; basis.len()];
        loop {
            let mut xi = Twisting::zero(map.clone(), c.dim());
            for (k, (i, e)) in basis.iter().enumerate() {
                xi.values[*i].add_at(*e, &elems[digits[k]]);
            }
            if xi.is_mc(c, d)? {
                if out.len() >= cap {
                    return Err(Error::EnumerationRefused(format!("more than {cap} MC elements")));
                }
                out.push(xi);
            }
            let mut k = 0;
            while k < digits.len() && digits[k] + 1 == elems.len() {
                digits[k] = 0;
                k += 1;
            }
            if k == digits.len() {
                break;
            }
            digits[k] += 1;
        }
    }
    Ok(out)
}

/// `MC*(C, D)`: MC elements of the reduced convolution category as objects,
/// homs of the counital one with the twisted differential.
#[derive(Clone, Debug)]
pub struct McCategory {
    pub objects: Vec<Twisting>,
    pub convolution: Convolution,
}

impl McCategory {
    pub fn category(&self) -> &Category {
        &self.convolution.category
    }
}

fn terms_of(xi: &Twisting, offset: usize) -> Vec<Term> {
    xi.values.iter().enumerate().flat_map(|(i, v)| v.iter().map(move |(e, s)| (i + offset, *e, s.clone()))).collect()
}

pub fn mc_category(c: &Coalgebra, d: &Category, objects: Vec<Twisting>) -> Result<McCategory> {
    if d.is_curved() {
        return Err(Error::Undefined("MC* is built over uncurved targets".into()));
    }
    for (k, xi) in objects.iter().enumerate() {
        if !mc_check(c, d, xi)?.0 {
            return Err(Error::NotMaurerCartan(format!("object {k} fails the MC equation")));
        }
    }
    let body = Body::full(c);
    let n = c.num_objects();
    let twists: Vec<Vec<Term>> = objects.iter().map(|xi| terms_of(xi, n)).collect();
    let maps = objects.iter().map(|xi| xi.objects.clone()).collect();
    let names = (0..objects.len()).map(|k| format!("ξ{k}")).collect();
    let convolution = build(&body, d, maps, Some(&twists), names)?;
    Ok(McCategory { objects, convolution })
}

/// `uHom(C, BD) = B MC*(C, D)` truncated at `max_weight`, with
/// `uHom(C, *) = *` and `uHom(0, BD) = *`.
pub fn internal_hom(c: &Pointed, d: &Category, max_dim: usize, cap: usize, max_weight: usize) -> Result<Pointed> {
    let Pointed::Coalgebra(c) = c else {
        return Err(Error::Undefined("uHom(*, −) is not of bar form".into()));
    };
    if d.is_zero_category() || c.num_objects() == 0 {
        return Ok(Pointed::Final);
    }
    let objects = mc_enumerate(c, d, max_dim, cap)?;
    let mc = mc_category(c, d, objects)?;
    bar(mc.category(), max_weight)
}

/// `ξ` as an element of `{C̄, D}` on the object `map`, checked against the
/// convolution product: `dξ + ξ⋆ξ + h`.
pub fn mc_residual_in(conv: &Convolution, xi: &Twisting) -> Result<Vector> {
    let i = conv
        .maps
        .iter()
        .position(|m| *m == xi.objects)
        .ok_or_else(|| Error::Structure("object map missing from the convolution category".into()))?;
    let v = conv.element(i, i, &xi.values)?;
    let cat = &conv.category;
    Ok(cat.d(&v).plus(&cat.mul(&v, &v)).plus(&cat.curvature_at(i)))
}


/// Counts on the two sides of `Hom(C⊗C', BD) ≅ Hom(C, B MC*(C', D))`, and of
/// the matching MC sets `MC(C⊗C', D)` and `MC(C, MC*(C', D))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorHomReport {
    pub into_bar: usize,
    pub into_internal_hom: usize,
    pub mc_tensor: usize,
    pub mc_nested: usize,
    pub mc_objects: usize,
}

impl TensorHomReport {
    pub fn holds(&self) -> bool {
        self.into_bar == self.into_internal_hom && self.mc_tensor == self.mc_nested && self.into_bar == self.mc_tensor
    }
}

pub fn tensor_hom_check(c: &Coalgebra, c2: &Coalgebra, d: &Category, max_dim: usize, cap: usize) -> Result<TensorHomReport> {
    let tensor = c.tensor(c2)?;
    let length = |x: &Coalgebra| -> Result<usize> { Ok(x.weights()?.into_iter().max().unwrap_or(1).max(1)) };
    let bd = crate::barcobar::Bar::new(d)?.materialize(length(&tensor)?)?;
    let into_bar = crate::ptdcoa::enumerate_morphisms(&tensor, &bd.coalgebra, cap)?.len();
    let objects = mc_enumerate(c2, d, max_dim, cap)?;
    let mc_objects = objects.len();
    let inner = mc_category(c2, d, objects)?;
    let bh = crate::barcobar::Bar::new(inner.category())?.materialize(length(c)?)?;
    let into_internal_hom = crate::ptdcoa::enumerate_morphisms(c, &bh.coalgebra, cap)?.len();
    let mc_tensor = mc_enumerate(&tensor, d, max_dim, cap)?.len();
    let mc_nested = mc_enumerate(c, inner.category(), max_dim, cap)?.len();
    Ok(TensorHomReport { into_bar, into_internal_hom, mc_tensor, mc_nested, mc_objects })
}
