//! Hochschild cochains of a dg category with coefficients in the bimodule
//! `D'(F−, G−)`, reduced or unreduced, with a weight analysis deciding which
//! tensor lengths can reach a given degree.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::barcobar::{Bar, Twisting};
use crate::convmc::mc_category;
use crate::dgcat::{Category, Functor, Word};
use crate::error::{Error, Result};
use crate::exactla::{Boundary, BoundedComplex, SparseMatrix, Vector};
use crate::grquiv::Arrow;

/// The bimodule `D'(F−, G−)` over `D`.
#[derive(Clone, Copy, Debug)]
pub struct Coefficients<'a> {
    pub target: &'a Category,
    pub left: &'a Functor,
    pub right: &'a Functor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every weight that can reach the requested degrees; refuses divergent input.
    Exact,
    /// Weights up to the cutoff, reported at the cutoff and one above.
    Stabilize(usize),
}

/// Weights whose terms can have a given total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightAnalysis {
    Finite(BTreeSet<usize>),
    /// Infinitely many weights reach the degree; use stabilize mode.
    Divergent,
}

/// Letters a cochain is evaluated on, written in a basis of `D` whose units are basis arrows.
struct Alphabet {
    cat: Category,
    letters: Vec<usize>,
    position: HashMap<usize, usize>,
    /// Each letter in the arrows of the input category.
    input: Vec<Vector>,
}

impl Alphabet {
    fn reduced(d: &Category) -> Result<Alphabet> {
        let bar = Bar::new(d)?;
        let letters = bar.reduced().to_vec();
        let input = (0..letters.len()).map(|k| bar.letter_in_input(k).clone()).collect();
        Ok(Alphabet::with(bar.category().clone(), letters, input))
    }

    fn unreduced(d: &Category) -> Alphabet {
        let f = d.field();
        Alphabet::with(d.clone(), (0..d.dim()).collect(), (0..d.dim()).map(|i| Vector::unit(i, f)).collect())
    }

    fn with(cat: Category, letters: Vec<usize>, input: Vec<Vector>) -> Alphabet {
        let position = letters.iter().enumerate().map(|(k, i)| (*i, k)).collect();
        Alphabet { cat, letters, position, input }
    }

    fn arrow(&self, k: usize) -> &Arrow {
        self.cat.arrow(self.letters[k])
    }

    fn shifted(&self, k: usize) -> i32 {
        self.arrow(k).deg - 1
    }

    /// Keep the letter components of a vector of `cat`.
    fn project(&self, v: &Vector) -> Vec<(usize, crate::exactla::Scalar)> {
        v.iter().filter_map(|(i, s)| self.position.get(i).map(|k| (*k, s.clone()))).collect()
    }

    /// Composable words of length `0..=max` (empty words are the objects).
    fn words(&self, max: usize) -> Vec<Word> {
        let mut out: Vec<Word> = (0..self.cat.num_objects()).map(Word::empty).collect();
        let mut layer: Vec<Word> = (0..self.letters.len()).map(|k| Word { src: self.arrow(k).src, tgt: self.arrow(k).tgt, letters: vec![k] }).collect();
        for _ in 0..max {
            if layer.is_empty() {
                break;
            }
            out.extend(layer.iter().cloned());
            let mut next = vec![];
            for w in &layer {
                for k in 0..self.letters.len() {
                    if self.arrow(k).src == w.tgt {
                        let mut l = w.letters.clone();
                        l.push(k);
                        next.push(Word { src: w.src, tgt: self.arrow(k).tgt, letters: l });
                    }
                }
            }
            layer = next;
        }
        out
    }

    fn shifted_deg(&self, w: &Word) -> i32 {
        w.letters.iter().map(|k| self.shifted(*k)).sum()
    }

    /// The bar differential on a word, without curvature terms.
    fn bar_diff(&self, w: &Word) -> Vec<(Word, crate::exactla::Scalar)> {
        let f = self.cat.field();
        let mut out = vec![];
        let mut prefix = 0i64;
        for i in 0..w.len() {
            let eps = f.sign(prefix);
            let a = self.letters[w.letters[i]];
            for (k, c) in self.project(self.cat.diff_of(a)) {
                let mut l = w.letters.clone();
                l[i] = k;
                out.push((Word { letters: l, ..w.clone() }, -(&eps * &c)));
            }
            if i + 1 < w.len() {
                let b = self.letters[w.letters[i + 1]];
                let s = &eps * &f.sign(self.cat.deg(a) as i64);
                let ab = self.cat.mul(&Vector::unit(a, f), &Vector::unit(b, f));
                for (k, c) in self.project(&ab) {
                    let mut l = w.letters[..i].to_vec();
                    l.push(k);
                    l.extend_from_slice(&w.letters[i + 2..]);
                    out.push((Word { letters: l, ..w.clone() }, &s * &c));
                }
            }
            prefix += self.shifted(w.letters[i]) as i64;
        }
        out
    }
}

fn degree_bounds(degs: impl Iterator<Item = i32>) -> Option<(i32, i32)> {
    let v: Vec<i32> = degs.collect();
    Some((*v.iter().min()?, *v.iter().max()?))
}

fn longest_path(objects: usize, arrows: &[&Arrow]) -> Option<usize> {
    let mut best = vec![0usize; objects];
    for round in 0..=objects {
        let mut changed = false;
        for a in arrows {
            if best[a.src] + 1 > best[a.tgt] {
                best[a.tgt] = best[a.src] + 1;
                changed = true;
            }
        }
        if !changed {
            return best.into_iter().max();
        }
        if round == objects {
            break;
        }
    }
    None
}

fn analyse(alpha: &Alphabet, coeffs: &Coefficients, n: i32) -> WeightAnalysis {
    let Some((lm, um)) = degree_bounds(coeffs.target.quiver().arrows().iter().map(|a| a.deg)) else {
        return WeightAnalysis::Finite(BTreeSet::new());
    };
    let arrows: Vec<&Arrow> = (0..alpha.letters.len()).map(|k| alpha.arrow(k)).collect();
    let Some((ld, ud)) = degree_bounds(arrows.iter().map(|a| a.deg)) else {
        return WeightAnalysis::Finite(if (lm..=um).contains(&n) { [0].into() } else { BTreeSet::new() });
    };
    let mut cap: Option<i64> = longest_path(alpha.cat.num_objects(), &arrows).map(|l| l as i64);
    let mut take = |b: i64| cap = Some(cap.map_or(b, |c| c.min(b)));
    if 1 - ud > 0 {
        take((n - lm) as i64 / (1 - ud) as i64);
    }
    if 1 - ld < 0 {
        take((um - n) as i64 / (ld - 1) as i64);
    }
    let Some(cap) = cap else { return WeightAnalysis::Divergent };
    let weights = (0..=cap.max(-1))
        .filter(|p| {
            let p = *p as i32;
            (lm + p * (1 - ud)..=um + p * (1 - ld)).contains(&n)
        })
        .map(|p| p as usize)
        .collect();
    WeightAnalysis::Finite(weights)
}

/// Weights whose cochains can have degree `n`, for the reduced complex.
pub fn weight_analysis(d: &Category, coeffs: &Coefficients, n: i32) -> Result<WeightAnalysis> {
    Ok(analyse(&Alphabet::reduced(d)?, coeffs, n))
}

/// The truncated cochain complex on degrees `lo..=hi` with cochains of weight at most `max_weight`.
fn complex(alpha: &Alphabet, coeffs: &Coefficients, lo: i32, hi: i32, max_weight: usize) -> Result<BoundedComplex> {
    let f = alpha.cat.field();
    let tgt = coeffs.target;
    let (fl, gr) = (coeffs.left, coeffs.right);
    let words = alpha.words(max_weight + 1);
    let word_index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    // basis of cochains per degree: (word, arrow of D')
    let mut basis: BTreeMap<i32, Vec<(usize, usize)>> = (lo..=hi).map(|n| (n, vec![])).collect();
    for (wi, w) in words.iter().enumerate() {
        if w.len() > max_weight {
            continue;
        }
        for m in tgt.quiver().slot(fl.objects[w.src], gr.objects[w.tgt]) {
            let n = tgt.deg(m) - alpha.shifted_deg(w);
            if let Some(b) = basis.get_mut(&n) {
                b.push((wi, m));
            }
        }
    }
    let position: HashMap<(usize, usize), usize> =
        basis.values().flat_map(|b| b.iter().enumerate().map(|(k, x)| (*x, k))).collect();
    // words w' with b(w') ∋ s·w, keyed by w
    let mut rev_bar: Vec<Vec<(usize, crate::exactla::Scalar)>> = vec![vec![]; words.len()];
    for (wi, w) in words.iter().enumerate() {
        for (t, s) in alpha.bar_diff(w) {
            if let Some(ti) = word_index.get(&t) {
                rev_bar[*ti].push((wi, s));
            }
        }
    }
    let left_images: Vec<Vector> = alpha.input.iter().map(|v| fl.apply(v)).collect();
    let right_images: Vec<Vector> = alpha.input.iter().map(|v| gr.apply(v)).collect();
    let mut diffs = vec![];
    for n in lo..hi {
        let rows = &basis[&(n + 1)];
        let mut cols = vec![];
        for &(wi, m) in &basis[&n] {
            let w = &words[wi];
            let mut terms: Vec<(usize, usize, crate::exactla::Scalar)> = vec![];
            for (m2, s) in tgt.diff_of(m) {
                terms.push((wi, *m2, s.clone()));
            }
            let sn = f.sign(n as i64);
            for (w2, s) in &rev_bar[wi] {
                terms.push((*w2, m, -(&sn * s)));
            }
            for k in 0..alpha.letters.len() {
                let a = alpha.arrow(k);
                if a.tgt == w.src {
                    let mut l = vec![k];
                    l.extend_from_slice(&w.letters);
                    if let Some(w2) = word_index.get(&Word { src: a.src, tgt: w.tgt, letters: l }) {
                        let s = f.sign((n * alpha.shifted(k)) as i64);
                        for (m2, c) in &tgt.mul(&left_images[k], &Vector::unit(m, f)) {
                            terms.push((*w2, *m2, &s * c));
                        }
                    }
                }
                if a.src == w.tgt {
                    let mut l = w.letters.clone();
                    l.push(k);
                    if let Some(w2) = word_index.get(&Word { src: w.src, tgt: a.tgt, letters: l }) {
                        let s = -(&sn * &f.sign(alpha.shifted_deg(w) as i64));
                        for (m2, c) in &tgt.mul(&Vector::unit(m, f), &right_images[k]) {
                            terms.push((*w2, *m2, &s * c));
                        }
                    }
                }
            }
            let mut v = Vector::new();
            for (w2, m2, s) in terms {
                if words[w2].len() > max_weight {
                    continue;
                }
                let k = position
                    .get(&(w2, m2))
                    .ok_or_else(|| Error::Structure("Hochschild differential leaves the degree window".into()))?;
                v.add_at(*k, &s);
            }
            cols.push(v);
        }
        diffs.push(SparseMatrix::from_columns(rows.len(), cols, f)?);
    }
    let bases = basis
        .values()
        .map(|b| {
            b.iter()
                .map(|(wi, m)| {
                    let w = &words[*wi];
                    let word: Vec<&str> = w.letters.iter().map(|k| alpha.arrow(*k).name.as_str()).collect();
                    format!("[{}]↦{}", word.join("|"), tgt.arrow(*m).name)
                })
                .collect()
        })
        .collect();
    BoundedComplex::new(f, lo, bases, diffs, Boundary::InteriorOnly)
}

/// Hochschild cohomology dimensions on `lo..=hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HhReport {
    pub dims: BTreeMap<i32, usize>,
    /// Largest weight used.
    pub max_weight: usize,
    /// In stabilize mode: dimensions one weight further, and per-degree agreement.
    pub next: Option<BTreeMap<i32, usize>>,
}

impl HhReport {
    pub fn stable(&self) -> bool {
        self.next.as_ref().is_none_or(|n| *n == self.dims)
    }
}

fn exact_weight(alpha: &Alphabet, coeffs: &Coefficients, lo: i32, hi: i32) -> Result<usize> {
    let mut max = 0;
    for n in lo - 1..=hi + 1 {
        match analyse(alpha, coeffs, n) {
            WeightAnalysis::Finite(w) => max = max.max(w.into_iter().max().unwrap_or(0)),
            WeightAnalysis::Divergent => {
                return Err(Error::Divergent(format!("infinitely many weights reach degree {n}; use stabilize mode")))
            }
        }
    }
    Ok(max)
}

pub fn hh_cohomology(d: &Category, coeffs: &Coefficients, lo: i32, hi: i32, mode: Mode, reduced: bool) -> Result<HhReport> {
    check_functors(d, coeffs)?;
    let alpha = if reduced { Alphabet::reduced(d)? } else { Alphabet::unreduced(d) };
    let dims_at = |w: usize| -> Result<BTreeMap<i32, usize>> { Ok(complex(&alpha, coeffs, lo - 1, hi + 1, w)?.homology_dims()) };
    match mode {
        Mode::Exact => {
            let w = exact_weight(&alpha, coeffs, lo, hi)?;
            Ok(HhReport { dims: dims_at(w)?, max_weight: w, next: None })
        }
        Mode::Stabilize(w) => Ok(HhReport { dims: dims_at(w)?, max_weight: w, next: Some(dims_at(w + 1)?) }),
    }
}

fn check_functors(d: &Category, coeffs: &Coefficients) -> Result<()> {
    coeffs.left.validate(d, coeffs.target)?;
    coeffs.right.validate(d, coeffs.target)
}

/// The same cohomology as homs `ξ_F → ξ_G` in `MC*(B D, D')`.
pub fn hh_via_mc(d: &Category, coeffs: &Coefficients, lo: i32, hi: i32) -> Result<BTreeMap<i32, usize>> {
    check_functors(d, coeffs)?;
    let alpha = Alphabet::reduced(d)?;
    let w = exact_weight(&alpha, coeffs, lo, hi)?;
    let bar = Bar::new(d)?;
    let bw = bar.materialize(w.max(1))?;
    let twisting = |fun: &Functor| Twisting {
        objects: fun.objects.clone(),
        values: bw.words.iter().map(|word| if word.len() == 1 { fun.apply(bar.letter_in_input(word[0])) } else { Vector::new() }).collect(),
    };
    let mc = mc_category(&bw.coalgebra, coeffs.target, vec![twisting(coeffs.left), twisting(coeffs.right)])?;
    let h = mc.category().hom_complex(0, 1)?.homology_dims();
    Ok((lo..=hi).map(|n| (n, h.get(&n).copied().unwrap_or(0))).collect())
}

/// Degree-wise comparison of the Hochschild side with the MC side.
pub fn hh_vs_mc(d: &Category, coeffs: &Coefficients, lo: i32, hi: i32) -> Result<(BTreeMap<i32, usize>, BTreeMap<i32, usize>)> {
    let hh = hh_cohomology(d, coeffs, lo, hi, Mode::Exact, true)?.dims;
    Ok((hh, hh_via_mc(d, coeffs, lo, hi)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{Field, SparseMatrix};

    fn identity_coeffs(d: &Category) -> (Functor, Functor) {
        (Functor::identity(d), Functor::identity(d))
    }

    fn hh(d: &Category, lo: i32, hi: i32, reduced: bool) -> Vec<usize> {
        let (f, g) = identity_coeffs(d);
        let c = Coefficients { target: d, left: &f, right: &g };
        hh_cohomology(d, &c, lo, hi, Mode::Exact, reduced).unwrap().dims.into_values().collect()
    }

    /// `A →0 A →2x A →0 A →2x …` for `A = k[x]/x²`: the bimodule resolution
    /// of the dual numbers, dualized.
    fn periodic_oracle(f: Field, len: usize) -> Vec<usize> {
        let two_x = SparseMatrix::from_dense(f, &[vec![0, 0], vec![2, 0]]);
        let zero = SparseMatrix::zero(2, 2, f);
        let diffs = (0..len).map(|k| if k % 2 == 0 { zero.clone() } else { two_x.clone() }).collect();
        let cx = BoundedComplex::from_dims(f, 0, &vec![2; len + 1], diffs, Boundary::InteriorOnly).unwrap();
        let h = cx.homology_dims();
        let mut out = vec![2 - zero.rank()];
        out.extend((1..len as i32).map(|n| h[&n]));
        out
    }

    #[test]
    fn dual_numbers_over_f3() {
        let f = Field::Prime(3);
        let d = Category::dual_numbers(f, 0);
        let oracle = periodic_oracle(f, 5);
        assert_eq!(oracle, vec![2, 1, 1, 1, 1]);
        assert_eq!(hh(&d, 0, 4, true), oracle);
        assert_eq!(hh(&d, 0, 4, false), oracle);
    }

    #[test]
    fn ground_and_a2() {
        for f in [Field::Rational, Field::Prime(2)] {
            assert_eq!(hh(&Category::ground(f), 0, 4, true), vec![1, 0, 0, 0, 0]);
            assert_eq!(hh(&Category::a2(f), 0, 4, true), vec![1, 0, 0, 0, 0]);
            assert_eq!(hh(&Category::a2(f), 0, 4, false), vec![1, 0, 0, 0, 0]);
        }
    }

    #[test]
    fn matches_the_mc_side() {
        for d in [Category::dual_numbers(Field::Prime(3), 0), Category::a2(Field::Rational), Category::ground(Field::Prime(2))] {
            let (f, g) = identity_coeffs(&d);
            let c = Coefficients { target: &d, left: &f, right: &g };
            let (a, b) = hh_vs_mc(&d, &c, 0, 3).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn weight_analysis_cases() {
        let f = Field::Rational;
        let d = Category::dual_numbers(f, 0);
        let (l, r) = identity_coeffs(&d);
        let c = Coefficients { target: &d, left: &l, right: &r };
        assert_eq!(weight_analysis(&d, &c, 3).unwrap(), WeightAnalysis::Finite([3].into()));
        let d = Category::dual_numbers(f, 2);
        let (l, r) = identity_coeffs(&d);
        let c = Coefficients { target: &d, left: &l, right: &r };
        assert!(matches!(weight_analysis(&d, &c, -3).unwrap(), WeightAnalysis::Finite(w) if !w.is_empty() && w.len() < 5));
        let d = Category::dual_numbers(f, 1);
        let (l, r) = identity_coeffs(&d);
        let c = Coefficients { target: &d, left: &l, right: &r };
        assert_eq!(weight_analysis(&d, &c, 0).unwrap(), WeightAnalysis::Divergent);
        assert!(matches!(hh_cohomology(&d, &c, 0, 1, Mode::Exact, true), Err(Error::Divergent(_))));
        let s = hh_cohomology(&d, &c, 0, 1, Mode::Stabilize(3), true).unwrap();
        assert!(s.next.is_some());
    }
}
