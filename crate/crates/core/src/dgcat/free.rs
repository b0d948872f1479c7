//! Free categories on a quiver of generators with a derivation, materialized
//! up to length, degree and weight caps.

use std::collections::HashMap;

use super::Category;
use crate::error::{Error, Result};
use crate::exactla::{Field, Scalar, Vector};
use crate::grquiv::{Arrow, GradedQuiver};

/// A composable string of generators; the empty word at `src` is its unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub src: usize,
    pub tgt: usize,
    pub letters: Vec<usize>,
}

impl Word {
    pub fn empty(x: usize) -> Self {
        Word { src: x, tgt: x, letters: vec![] }
    }

    pub fn letter(g: &Arrow, i: usize) -> Self {
        Word { src: g.src, tgt: g.tgt, letters: vec![i] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Generators and the differential of each generator as a combination of words.
#[derive(Clone, Debug)]
pub struct FreeData {
    pub field: Field,
    pub objects: Vec<String>,
    pub generators: Vec<Arrow>,
    pub diff: Vec<Vec<(Word, Scalar)>>,
}

/// Truncation caps. Weights must be positive.
#[derive(Clone, Debug, Default)]
pub struct Caps {
    pub max_len: Option<usize>,
    pub max_deg: Option<i32>,
    pub weights: Option<(Vec<usize>, usize)>,
}

impl Caps {
    pub fn length(l: usize) -> Self {
        Caps { max_len: Some(l), ..Caps::default() }
    }
}

/// Bounds on the length of a path of given degree, from the shape of the quiver.
#[derive(Clone, Debug)]
pub struct PathBound {
    objects: usize,
    longest: Option<usize>,
    cycles_positive: bool,
    lo: Option<i32>,
    hi: Option<i32>,
}

impl PathBound {
    pub fn new(objects: usize, generators: &[Arrow]) -> Self {
        let lo = generators.iter().map(|g| g.deg).min();
        let hi = generators.iter().map(|g| g.deg).max();
        PathBound { objects, longest: longest_path(objects, generators), cycles_positive: cycles_positive(objects, generators), lo, hi }
    }

    pub fn is_acyclic(&self) -> bool {
        self.longest.is_some()
    }

    /// Upper bound on the length of a path of degree exactly `n`.
    pub fn max_len(&self, n: i32) -> Option<usize> {
        let (Some(lo), Some(hi)) = (self.lo, self.hi) else { return Some(0) };
        let mut best = self.longest;
        let mut take = |b: usize| best = Some(best.map_or(b, |x: usize| x.min(b)));
        if lo > 0 {
            take(if n < 0 { 0 } else { (n / lo) as usize });
        }
        if hi < 0 {
            take(if n > 0 { 0 } else { (n / hi) as usize });
        }
        if self.cycles_positive {
            take(self.positive_cycle_bound(n));
        }
        best
    }

    /// Upper bound on the length of any path of degree at most `n`.
    pub fn max_len_upto(&self, n: i32) -> Option<usize> {
        let Some(lo) = self.lo else { return Some(0) };
        let mut best = self.longest;
        let mut take = |b: usize| best = Some(best.map_or(b, |x: usize| x.min(b)));
        if lo > 0 {
            take(if n < 0 { 0 } else { (n / lo) as usize });
        }
        if self.cycles_positive {
            take(self.positive_cycle_bound(n));
        }
        best
    }

    // a path of length m splits into a simple path (< N arrows) and simple
    // cycles of length ≤ N, each of degree ≥ 1
    fn positive_cycle_bound(&self, n: i32) -> usize {
        let big_n = self.objects as i64;
        let dmin = self.lo.unwrap_or(0).min(0) as i64;
        let b = big_n * (n as i64 - (big_n - 1) * dmin) + big_n - 1;
        b.max(0) as usize
    }
}

fn longest_path(objects: usize, gens: &[Arrow]) -> Option<usize> {
    let mut indeg = vec![0usize; objects];
    for g in gens {
        indeg[g.tgt] += 1;
    }
    let mut order = vec![];
    let mut stack: Vec<usize> = (0..objects).filter(|x| indeg[*x] == 0).collect();
    while let Some(x) = stack.pop() {
        order.push(x);
        for g in gens.iter().filter(|g| g.src == x) {
            indeg[g.tgt] -= 1;
            if indeg[g.tgt] == 0 {
                stack.push(g.tgt);
            }
        }
    }
    if order.len() < objects {
        return None;
    }
    let mut best = vec![0usize; objects];
    for x in order {
        for g in gens.iter().filter(|g| g.src == x) {
            best[g.tgt] = best[g.tgt].max(best[x] + 1);
        }
    }
    Some(best.into_iter().max().unwrap_or(0))
}

// Every cycle has positive degree iff no cycle is negative for the weights
// (N+1)·deg − 1 (a simple cycle has at most N arrows).
fn cycles_positive(objects: usize, gens: &[Arrow]) -> bool {
    let w = |g: &Arrow| (objects as i64 + 1) * g.deg as i64 - 1;
    let mut dist = vec![0i64; objects];
    for _ in 0..objects {
        let mut changed = false;
        for g in gens {
            if dist[g.src] + w(g) < dist[g.tgt] {
                dist[g.tgt] = dist[g.src] + w(g);
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
    !gens.iter().any(|g| dist[g.src] + w(g) < dist[g.tgt])
}

/// A materialized truncation of a free category.
#[derive(Clone, Debug)]
pub struct FreeCategory {
    pub category: Category,
    pub words: Vec<Word>,
    pub bound: PathBound,
    pub caps: Caps,
    index: HashMap<Word, usize>,
}

impl FreeCategory {
    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Whether every word of degree `n` is present.
    pub fn complete(&self, n: i32) -> bool {
        if self.caps.max_deg.is_some_and(|c| n > c) {
            return false;
        }
        let Some(m) = self.bound.max_len(n) else { return false };
        let len_ok = self.caps.max_len.is_none_or(|l| m <= l);
        let weight_ok = self.caps.weights.as_ref().is_none_or(|(w, cap)| m * w.iter().copied().max().unwrap_or(0) <= *cap);
        len_ok && weight_ok
    }

    /// Degrees in `lo..=hi` whose cohomology the truncation computes exactly.
    pub fn exact_degrees(&self, lo: i32, hi: i32) -> Vec<i32> {
        (lo..=hi).filter(|n| self.complete(n - 1) && self.complete(*n) && self.complete(n + 1)).collect()
    }

    /// Whether the truncation is closed under the differential (no dropped terms).
    pub fn region(&self) -> impl Fn(i32) -> bool + '_ {
        move |n| self.complete(n)
    }
}

/// Materialize the free category on `data` within `caps`.
pub fn free_category(data: &FreeData, caps: &Caps) -> Result<FreeCategory> {
    let f = data.field;
    let gq = GradedQuiver::new(data.objects.clone(), data.generators.clone())?;
    let gens = gq.arrows();
    if data.diff.len() != gens.len() {
        return Err(Error::Dimension("one differential per generator required".into()));
    }
    for (g, dg) in gens.iter().zip(&data.diff) {
        for (w, _) in dg {
            check_word(gens, w)?;
            let deg: i32 = w.letters.iter().map(|i| gens[*i].deg).sum();
            if w.src != g.src || w.tgt != g.tgt || deg != g.deg + 1 {
                return Err(Error::Structure(format!("d({}) has a term outside its slot or degree", g.name)));
            }
        }
    }
    if let Some((w, _)) = &caps.weights {
        if w.len() != gens.len() || w.contains(&0) {
            return Err(Error::Structure("weights must be positive, one per generator".into()));
        }
    }
    let bound = PathBound::new(data.objects.len(), gens);
    let mut limit = caps.max_len;
    if let Some((_, wcap)) = &caps.weights {
        limit = Some(limit.map_or(*wcap, |l| l.min(*wcap)));
    }
    if limit.is_none() {
        limit = match caps.max_deg {
            Some(d) => bound.max_len_upto(d),
            None => bound.longest,
        };
    }
    let Some(limit) = limit else {
        return Err(Error::NonTerminating("paths of bounded degree have unbounded length and no length cap was given".into()));
    };

    let degree = |w: &Word| -> i32 { w.letters.iter().map(|i| gens[*i].deg).sum() };
    let weight = |w: &Word| -> usize { caps.weights.as_ref().map_or(0, |(ws, _)| w.letters.iter().map(|i| ws[*i]).sum()) };
    let keep = |w: &Word| {
        caps.max_deg.is_none_or(|c| degree(w) <= c) && caps.weights.as_ref().is_none_or(|(_, cap)| weight(w) <= *cap)
    };

    let mut layer: Vec<Word> = (0..data.objects.len()).map(Word::empty).collect();
    let mut all = vec![];
    for len in 0..=limit {
        all.extend(layer.iter().filter(|w| keep(w)).cloned());
        if len == limit {
            break;
        }
        let mut next = vec![];
        for w in &layer {
            for (i, g) in gens.iter().enumerate() {
                if g.src == w.tgt {
                    let mut l = w.letters.clone();
                    l.push(i);
                    let cand = Word { src: w.src, tgt: g.tgt, letters: l };
                    // weights only grow, so heavy prefixes can be pruned
                    if caps.weights.as_ref().is_none_or(|(_, cap)| weight(&cand) <= *cap) {
                        next.push(cand);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    let index: HashMap<Word, usize> = all.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();

    let name = |w: &Word| -> String {
        if w.is_empty() {
            format!("1_{}", data.objects[w.src])
        } else {
            w.letters.iter().map(|i| gens[*i].name.as_str()).collect::<Vec<_>>().join("·")
        }
    };
    let arrows: Vec<Arrow> = all.iter().map(|w| Arrow::new(name(w), w.src, w.tgt, degree(w))).collect();
    let quiver = GradedQuiver::new(data.objects.clone(), arrows)?;

    let mut comp = HashMap::new();
    let mut by_src: Vec<Vec<usize>> = vec![vec![]; data.objects.len()];
    for (i, w) in all.iter().enumerate() {
        by_src[w.src].push(i);
    }
    for (i, a) in all.iter().enumerate() {
        for &j in &by_src[a.tgt] {
            let b = &all[j];
            let mut l = a.letters.clone();
            l.extend_from_slice(&b.letters);
            if let Some(k) = index.get(&Word { src: a.src, tgt: b.tgt, letters: l }) {
                comp.insert((i, j), Vector::unit(*k, f));
            }
        }
    }

    let mut diff = vec![];
    for w in &all {
        let mut v = Vector::new();
        let mut prefix_deg = 0;
        for (pos, &g) in w.letters.iter().enumerate() {
            let s = f.sign(prefix_deg as i64);
            for (term, c) in &data.diff[g] {
                let mut l = w.letters[..pos].to_vec();
                l.extend_from_slice(&term.letters);
                l.extend_from_slice(&w.letters[pos + 1..]);
                if let Some(k) = index.get(&Word { src: w.src, tgt: w.tgt, letters: l }) {
                    v.add_at(*k, &(&s * c));
                }
            }
            prefix_deg += gens[g].deg;
        }
        diff.push(v);
    }
    let units: Vec<usize> = (0..data.objects.len()).map(|x| index[&Word::empty(x)]).collect();
    let category = Category::with_unit_arrows(f, quiver, &units, diff, comp, None)?;
    Ok(FreeCategory { category, words: all, bound, caps: caps.clone(), index })
}

fn check_word(gens: &[Arrow], w: &Word) -> Result<()> {
    let mut at = w.src;
    for i in &w.letters {
        let g = gens.get(*i).ok_or_else(|| Error::Dimension(format!("word uses missing generator {i}")))?;
        if g.src != at {
            return Err(Error::Structure("word is not composable".into()));
        }
        at = g.tgt;
    }
    if at != w.tgt {
        return Err(Error::Structure("word ends at the wrong object".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(objects: &[&str], gens: Vec<Arrow>) -> FreeData {
        let n = gens.len();
        FreeData { field: Field::Rational, objects: objects.iter().map(|s| s.to_string()).collect(), generators: gens, diff: vec![vec![]; n] }
    }

    #[test]
    fn no_generators_is_discrete() {
        let fc = free_category(&data(&["x", "y"], vec![]), &Caps::default()).unwrap();
        assert_eq!(fc.category.dim(), 2);
        fc.category.validate().unwrap();
    }

    #[test]
    fn a2_quiver_has_one_nonunit_arrow() {
        let fc = free_category(&data(&["x", "y"], vec![Arrow::new("a", 0, 1, 0)]), &Caps::default()).unwrap();
        assert_eq!(fc.category.dim(), 3);
        assert_eq!(fc.words.iter().filter(|w| !w.is_empty()).count(), 1);
        fc.category.validate().unwrap();
    }

    #[test]
    fn loop_in_degree_one() {
        let d = data(&["o"], vec![Arrow::new("t", 0, 0, 1)]);
        let fc = free_category(&d, &Caps { max_deg: Some(5), ..Caps::default() }).unwrap();
        assert_eq!(fc.category.dim(), 6);
        for n in 0..=5 {
            assert_eq!(fc.category.quiver().slot_deg(0, 0, n).len(), 1);
            assert!(fc.complete(n));
        }
        assert!(!fc.complete(6));
        fc.category.validate_in(&fc.region()).unwrap();
    }

    #[test]
    fn degree_zero_loop_needs_a_cap() {
        let d = data(&["o"], vec![Arrow::new("t", 0, 0, 0)]);
        assert!(matches!(free_category(&d, &Caps { max_deg: Some(3), ..Caps::default() }), Err(Error::NonTerminating(_))));
        let fc = free_category(&d, &Caps::length(4)).unwrap();
        assert_eq!(fc.category.dim(), 5);
        assert!(!fc.complete(0));
    }

    #[test]
    fn derivation_squares_to_zero() {
        // d s = t·t with |s| = 1, |t| = 1 is not closed unless d t = 0; here d t = 0
        let f = Field::Rational;
        let gens = vec![Arrow::new("s", 0, 0, 1), Arrow::new("t", 0, 0, 1)];
        let d = FreeData {
            field: f,
            objects: vec!["o".into()],
            generators: gens,
            diff: vec![vec![(Word { src: 0, tgt: 0, letters: vec![1, 1] }, f.one())], vec![]],
        };
        let fc = free_category(&d, &Caps { max_deg: Some(6), ..Caps::default() }).unwrap();
        fc.category.validate_in(&fc.region()).unwrap();
    }

    #[test]
    fn cyclic_bounds() {
        let gens = vec![Arrow::new("a", 0, 1, -1), Arrow::new("b", 1, 0, 3)];
        let b = PathBound::new(2, &gens);
        assert!(!b.is_acyclic());
        assert!(b.max_len(4).is_some());
        let bad = PathBound::new(2, &[Arrow::new("a", 0, 1, -1), Arrow::new("b", 1, 0, 1)]);
        assert_eq!(bad.max_len(0), None);
    }
}
