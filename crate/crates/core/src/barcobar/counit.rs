use std::collections::BTreeMap;

use crate::dgcat::{Caps, Category, FreeCategory, Functor};
use crate::error::{Error, Result};

use super::{cobar, functor_from_twisting, Bar, Twisting};

/// The counit `ΩBD → D` on the subcategory of total bar weight at most `max_weight`.
#[derive(Clone, Debug)]
pub struct Counit {
    pub source: FreeCategory,
    pub functor: Functor,
    pub max_weight: usize,
    /// Degrees of the window where the counit is a homology isomorphism on
    /// every hom at both `max_weight` and `max_weight + 1`.
    pub exact: Vec<i32>,
    /// `(x, y) ↦ (degree ↦ dim)` for source and target over the window.
    pub source_homology: BTreeMap<(usize, usize), BTreeMap<i32, usize>>,
    pub target_homology: BTreeMap<(usize, usize), BTreeMap<i32, usize>>,
}

fn truncated(d: &Category, bar: &Bar, weight: usize) -> Result<(FreeCategory, Functor)> {
    let bw = bar.materialize(weight)?;
    let weights = bw.words.iter().map(|w| w.len()).collect();
    let omega = cobar(&bw.coalgebra, &Caps { weights: Some((weights, weight)), ..Caps::default() })?;
    let values = bw
        .words
        .iter()
        .map(|w| if w.len() == 1 { bar.letter_in_input(w[0]).clone() } else { Default::default() })
        .collect();
    let tau = Twisting { objects: (0..d.num_objects()).collect(), values };
    if !tau.is_mc(&bw.coalgebra, d)? {
        return Err(Error::NotMaurerCartan("the universal twisting cochain fails the MC equation".into()));
    }
    let functor = functor_from_twisting(&omega, d, &tau)?;
    for (i, a) in omega.category.quiver().arrows().iter().enumerate() {
        if functor.apply(omega.category.diff_of(i)) != d.d(&functor.arrows[i]) {
            return Err(Error::Identity(format!("counit does not commute with d on '{}'", a.name)));
        }
    }
    Ok((omega, functor))
}

fn iso_degrees(src: &Category, d: &Category, f: &Functor, lo: i32, hi: i32) -> Result<Vec<i32>> {
    let mut out = vec![];
    for n in lo..=hi {
        let mut ok = true;
        for x in 0..d.num_objects() {
            for y in 0..d.num_objects() {
                let hs = src.hom_homology(x, y, n, n)?[&n];
                let ht = d.hom_homology(x, y, n, n)?[&n];
                ok &= hs == ht && f.induced_rank(src, d, x, y, n)? == ht;
            }
        }
        if ok {
            out.push(n);
        }
    }
    Ok(out)
}

/// The counit of the bar-cobar adjunction, certified degree-wise on `lo..=hi`.
pub fn counit(d: &Category, lo: i32, hi: i32, max_weight: usize) -> Result<Counit> {
    let bar = Bar::new(d)?;
    let (source, functor) = truncated(d, &bar, max_weight)?;
    let (next, next_functor) = truncated(d, &bar, max_weight + 1)?;
    let here = iso_degrees(&source.category, d, &functor, lo, hi)?;
    let there = iso_degrees(&next.category, d, &next_functor, lo, hi)?;
    let exact = here.into_iter().filter(|n| there.contains(n)).collect();
    let mut source_homology = BTreeMap::new();
    let mut target_homology = BTreeMap::new();
    for x in 0..d.num_objects() {
        for y in 0..d.num_objects() {
            source_homology.insert((x, y), source.category.hom_homology(x, y, lo, hi)?);
            target_homology.insert((x, y), d.hom_homology(x, y, lo, hi)?);
        }
    }
    Ok(Counit { source, functor, max_weight, exact, source_homology, target_homology })
}
