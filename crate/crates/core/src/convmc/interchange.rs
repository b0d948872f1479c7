use crate::dgcat::{Category, Functor};
use crate::error::{Error, Result};
use crate::exactla::Vector;
use crate::ptdcoa::{Body, Coalgebra};

use super::convolution::Convolution;

/// Whether a coalgebra enters a convolution category with its counit or reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Counital,
    Reduced,
}

fn body(c: &Coalgebra, side: Side) -> Body {
    match side {
        Side::Counital => Body::full(c),
        Side::Reduced => Body::reduced(c),
    }
}

/// `{C, {C', D}}`, `{C ⊗ C', D}` and the comparison functor between them.
#[derive(Clone, Debug)]
pub struct Interchange {
    pub inner: Convolution,
    pub nested: Convolution,
    pub flat: Convolution,
    pub functor: Functor,
}

/// Build both sides; curvature terms that need a missing unit or counit are errors.
pub fn interchange(c: &Coalgebra, side: Side, c2: &Coalgebra, side2: Side, d: &Category, cap: usize) -> Result<Interchange> {
    let (b1, b2) = (body(c, side), body(c2, side2));
    let inner = Convolution::new(&b2, d, cap)?;
    let nested = Convolution::new(&b1, &inner.category, cap)?;
    let flat = Convolution::new(&b1.tensor(&b2)?, d, cap)?;
    let m2 = b2.dim();
    let n2 = b2.objects.len();
    let flat_object = |outer: &[usize]| -> Vec<usize> {
        outer.iter().flat_map(|g| inner.maps[*g].iter().copied()).collect::<Vec<_>>()
    };
    let objects = nested
        .maps
        .iter()
        .map(|m| {
            let target = flat_object(m);
            debug_assert_eq!(target.len(), m.len() * n2);
            flat.maps.iter().position(|g| *g == target).ok_or_else(|| Error::Structure("object map has no flat counterpart".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let f = d.field();
    let mut arrows = vec![];
    for &(i, j, c_, big_e) in &nested.basis {
        let (_, _, c2_, e) = inner.basis[big_e];
        let k = flat
            .arrow_of(objects[i], objects[j], c_ * m2 + c2_, e)
            .ok_or_else(|| Error::Structure("arrow has no flat counterpart".into()))?;
        arrows.push(Vector::unit(k, f));
    }
    Ok(Interchange { inner, nested, flat, functor: Functor { objects, arrows } })
}

impl Interchange {
    /// The comparison is a bijection on objects and basis arrows and preserves
    /// degrees, differentials, products, units and curvature.
    pub fn verify(&self) -> Result<()> {
        let (src, tgt) = (&self.nested.category, &self.flat.category);
        if src.num_objects() != tgt.num_objects() || src.dim() != tgt.dim() {
            return Err(Error::Structure(format!(
                "sizes differ: {} objects and {} arrows against {} and {}",
                src.num_objects(),
                src.dim(),
                tgt.num_objects(),
                tgt.dim()
            )));
        }
        let mut seen = vec![false; tgt.dim()];
        for v in &self.functor.arrows {
            for k in v.indices() {
                if std::mem::replace(&mut seen[k], true) {
                    return Err(Error::Structure("comparison is not injective on arrows".into()));
                }
            }
        }
        if src.units().is_some() != tgt.units().is_some() || src.is_curved() != tgt.is_curved() {
            return Err(Error::Structure("units or curvature present on one side only".into()));
        }
        self.functor.validate(src, tgt)
    }
}
