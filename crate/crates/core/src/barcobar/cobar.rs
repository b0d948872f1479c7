use crate::dgcat::{free_category, Caps, Category, FreeCategory, FreeData, Word};
use crate::error::Result;
use crate::exactla::Field;
use crate::grquiv::Arrow;
use crate::ptdcoa::{Coalgebra, Pointed};

/// Generators `⟨c⟩` of degree `|c| + 1`, one per cell, with
/// `d⟨c⟩ = −⟨dc⟩ − Σ (−1)^{|c1|} ⟨c1⟩⟨c2⟩ − h(c)·1`.
pub fn cobar_data(c: &Coalgebra) -> FreeData {
    let f = c.field();
    let generators = c.cells().iter().map(|a| Arrow::new(format!("⟨{}⟩", a.name), a.src, a.tgt, a.deg + 1)).collect();
    let diff = (0..c.dim())
        .map(|i| {
            let a = c.cell(i);
            let mut terms = vec![];
            for (j, s) in &c.diffs()[i] {
                terms.push((Word { src: a.src, tgt: a.tgt, letters: vec![*j] }, -s.clone()));
            }
            for (c1, c2, s) in c.delta_bar(i) {
                let sign = f.sign(c.cell(*c1).deg as i64);
                terms.push((Word { src: a.src, tgt: a.tgt, letters: vec![*c1, *c2] }, -(&sign * s)));
            }
            let h = c.h(i);
            if !h.is_zero() {
                terms.push((Word::empty(a.src), -h));
            }
            terms
        })
        .collect();
    FreeData { field: f, objects: c.objects().to_vec(), generators, diff }
}

/// `Ω C` materialized within `caps`.
pub fn cobar(c: &Coalgebra, caps: &Caps) -> Result<FreeCategory> {
    free_category(&cobar_data(c), caps)
}

/// `Ω` on pointed coalgebras: `Ω0 = ∅` and `Ω* = 𝟎`.
pub fn cobar_pointed(c: &Pointed, field: Field, caps: &Caps) -> Result<Category> {
    match c {
        Pointed::Final => Ok(Category::zero(field)),
        Pointed::Coalgebra(c) => Ok(cobar(c, caps)?.category),
    }
}
