use std::collections::BTreeMap;

use crate::barcobar::cobar;
use crate::dgcat::{Caps, Category, FreeCategory, Functor, Word};
use crate::error::{Error, Result};
use crate::exactla::Vector;
use crate::ptdcoa::Coalgebra;

/// Where a generator `⟨c⊗c'⟩` of `Ω(C⊗C')` comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Letter {
    /// `c̄ ⊗ y`: the cell of `C` and the object of `C'`.
    Left(usize, usize),
    /// `x ⊗ ē`
    Right(usize, usize),
    Mixed,
}

/// The comparison `M: Ω(C⊗C') → ΩC ⊗ ΩC'` on words of length at most `max_len`.
#[derive(Clone, Debug)]
pub struct EzMap {
    pub tensor: Coalgebra,
    pub source: FreeCategory,
    pub left: FreeCategory,
    pub right: FreeCategory,
    pub target: Category,
    pub functor: Functor,
    letters: Vec<Letter>,
}

fn letters(c: &Coalgebra, c2: &Coalgebra) -> Vec<Letter> {
    let (n1, n2) = (c.num_objects(), c2.num_objects());
    let mut out = vec![];
    for i in 0..n1 + c.dim() {
        for j in 0..n2 + c2.dim() {
            out.push(match (i < n1, j < n2) {
                (true, true) => continue,
                (false, true) => Letter::Left(i - n1, j),
                (true, false) => Letter::Right(i, j - n2),
                (false, false) => Letter::Mixed,
            });
        }
    }
    out
}

pub fn ez_map(c: &Coalgebra, c2: &Coalgebra, max_len: usize) -> Result<EzMap> {
    let tensor = c.tensor(c2)?;
    let caps = Caps::length(max_len);
    let source = cobar(&tensor, &caps)?;
    let left = cobar(c, &caps)?;
    let right = cobar(c2, &caps)?;
    let target = left.category.tensor(&right.category)?;
    let letters = letters(c, c2);
    let m = right.category.dim();
    let f = c.field();
    let generator = |l: Letter| -> Vector {
        match l {
            Letter::Left(i, y) => {
                let a = c.cell(i);
                let w = left.index_of(&Word { src: a.src, tgt: a.tgt, letters: vec![i] }).unwrap();
                Vector::unit(w * m + right.index_of(&Word::empty(y)).unwrap(), f)
            }
            Letter::Right(x, j) => {
                let a = c2.cell(j);
                let w = right.index_of(&Word { src: a.src, tgt: a.tgt, letters: vec![j] }).unwrap();
                Vector::unit(left.index_of(&Word::empty(x)).unwrap() * m + w, f)
            }
            Letter::Mixed => Vector::new(),
        }
    };
    let gens: Vec<Vector> = letters.iter().map(|l| generator(*l)).collect();
    let arrows = source
        .words
        .iter()
        .map(|w| {
            let mut v = target.unit(w.src).cloned().expect("tensor of unital categories");
            for g in &w.letters {
                v = target.mul(&v, &gens[*g]);
            }
            v
        })
        .collect();
    let functor = Functor { objects: (0..tensor.num_objects()).collect(), arrows };
    Ok(EzMap { tensor, source, left, right, target, functor, letters })
}

impl EzMap {
    /// The shuffle formula: a word of pure letters goes to the Koszul sign of
    /// separating its `C`- and `C'`-letters times the pair of subwords.
    pub fn shuffle_image(&self, w: &Word) -> Vector {
        let f = self.tensor.field();
        let n2 = self.right.category.num_objects();
        let deg = |g: usize| self.letter_deg(g);
        let (mut lw, mut rw) = (vec![], vec![]);
        let mut sign = 0i64;
        let mut right_deg = 0i64;
        for g in &w.letters {
            match self.letters[*g] {
                Letter::Left(i, _) => {
                    lw.push(i);
                    sign += right_deg * deg(*g) as i64;
                }
                Letter::Right(_, j) => {
                    rw.push(j);
                    right_deg += deg(*g) as i64;
                }
                Letter::Mixed => return Vector::new(),
            }
        }
        let (x, y) = (w.src / n2, w.src % n2);
        let (x2, y2) = (w.tgt / n2, w.tgt % n2);
        let a = self.left.index_of(&Word { src: x, tgt: x2, letters: lw });
        let b = self.right.index_of(&Word { src: y, tgt: y2, letters: rw });
        match (a, b) {
            (Some(a), Some(b)) => Vector::unit(a * self.right.category.dim() + b, f).scaled(&f.sign(sign)),
            _ => Vector::new(),
        }
    }

    fn letter_deg(&self, g: usize) -> i32 {
        self.tensor.cell(g).deg + 1
    }

    /// `M` agrees with the shuffle formula, preserves products inside the
    /// truncation and commutes with `d` on words short enough for `d` to stay inside.
    pub fn verify(&self) -> Result<()> {
        let (src, tgt) = (&self.source.category, &self.target);
        let max_len = self.source.caps.max_len.unwrap_or(usize::MAX);
        for (k, w) in self.source.words.iter().enumerate() {
            let name = &src.arrow(k).name;
            if self.functor.arrows[k] != self.shuffle_image(w) {
                return Err(Error::Identity(format!("M disagrees with the shuffle formula on '{name}'")));
            }
            if w.len() < max_len && self.functor.apply(src.diff_of(k)) != tgt.d(&self.functor.arrows[k]) {
                return Err(Error::Identity(format!("M does not commute with d on '{name}'")));
            }
        }
        for ((a, b), v) in src.comp_table() {
            if self.functor.apply(v) != tgt.mul(&self.functor.arrows[*a], &self.functor.arrows[*b]) {
                return Err(Error::Identity(format!("M does not preserve the product of '{}' and '{}'", src.arrow(*a).name, src.arrow(*b).name)));
            }
        }
        Ok(())
    }

    /// Whether every degree-`n` arrow of `ΩC ⊗ ΩC'` is materialized.
    pub fn target_complete(&self, n: i32) -> bool {
        let range = |fc: &FreeCategory| {
            let degs: Vec<i32> = fc.words.iter().filter(|w| w.len() == 1).map(|w| fc.category.arrow(fc.index_of(w).unwrap()).deg).collect();
            let lo = degs.iter().all(|d| *d >= 0).then_some(0);
            let hi = degs.iter().all(|d| *d <= 0).then_some(0);
            (lo, hi)
        };
        let ((l1, u1), (l2, u2)) = (range(&self.left), range(&self.right));
        let lo = match (l1, u2) {
            (Some(l), Some(u)) => l.max(n - u),
            (Some(l), None) => l,
            (None, Some(u)) => n - u,
            _ => return false,
        };
        let hi = match (u1, l2) {
            (Some(u), Some(l)) => u.min(n - l),
            (Some(u), None) => u,
            (None, Some(l)) => n - l,
            _ => return false,
        };
        (lo..=hi).all(|a| self.left.complete(a) && self.right.complete(n - a))
    }
}

/// Per-object-pair homology of both sides of `M` on the exact part of a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EzReport {
    pub exact: Vec<i32>,
    /// `(X, Y, n) ↦ (dim source, dim target, rank of M)`.
    pub dims: BTreeMap<(usize, usize, i32), (usize, usize, usize)>,
}

impl EzReport {
    pub fn agrees(&self) -> bool {
        self.dims.values().all(|(s, t, r)| s == t && t == r)
    }
}

/// Compare `Ω(C⊗C')` with `ΩC ⊗ ΩC'` through `M`; `graded` first passes to the
/// associated graded of the coradical filtration, which drops the curvature.
pub fn ez_compare(c: &Coalgebra, c2: &Coalgebra, lo: i32, hi: i32, max_len: usize, graded: bool) -> Result<EzReport> {
    let (c, c2) = if graded { (c.associated_graded()?.0, c2.associated_graded()?.0) } else { (c.clone(), c2.clone()) };
    let ez = ez_map(&c, &c2, max_len)?;
    ez.verify()?;
    let complete = |n: i32| ez.source.complete(n) && ez.target_complete(n);
    let exact: Vec<i32> = (lo..=hi).filter(|n| complete(n - 1) && complete(*n) && complete(n + 1)).collect();
    if exact.is_empty() {
        return Err(Error::Inexact(format!("no degree of [{lo}, {hi}] is exact at word length {max_len}")));
    }
    let (src, tgt) = (&ez.source.category, &ez.target);
    let mut dims = BTreeMap::new();
    for x in 0..src.num_objects() {
        for y in 0..src.num_objects() {
            for &n in &exact {
                let s = src.hom_homology(x, y, n, n)?[&n];
                let t = tgt.hom_homology(x, y, n, n)?[&n];
                let r = ez.functor.induced_rank(src, tgt, x, y, n)?;
                dims.insert((x, y, n), (s, t, r));
            }
        }
    }
    Ok(EzReport { exact, dims })
}
