//! Gaussian elimination. Rank uses Markowitz-style pivoting; over Q the rows
//! are kept as primitive integer vectors and eliminated fraction-free.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::{mod_inv, Field, Scalar};
use super::sparse::{SparseMatrix, Vector};

type Row<T> = BTreeMap<usize, T>;

trait Pivoting: Clone {
    fn eliminate(target: &mut Row<Self>, pivot: &Row<Self>, idx: usize);
}

#[derive(Clone)]
struct Mod {
    v: u64,
    p: u64,
}

impl Pivoting for Mod {
    fn eliminate(target: &mut Row<Self>, pivot: &Row<Self>, idx: usize) {
        let t = target[&idx].v;
        let pv = &pivot[&idx];
        let p = pv.p;
        let factor = t * mod_inv(pv.v as u32, p as u32) as u64 % p;
        for (i, x) in pivot {
            let sub = factor * x.v % p;
            let cur = target.get(i).map_or(0, |y| y.v);
            let nv = (cur + p - sub) % p;
            if nv == 0 {
                target.remove(i);
            } else {
                target.insert(*i, Mod { v: nv, p });
            }
        }
    }
}

impl Pivoting for BigInt {
    fn eliminate(target: &mut Row<Self>, pivot: &Row<Self>, idx: usize) {
        let t = target[&idx].clone();
        let pv = pivot[&idx].clone();
        let g = t.gcd(&pv);
        let a = &pv / &g;
        let b = &t / &g;
        // target <- a*target - b*pivot
        for x in target.values_mut() {
            *x *= &a;
        }
        for (i, x) in pivot {
            let cur = target.remove(i).unwrap_or_else(BigInt::zero);
            let nv = cur - &b * x;
            if !nv.is_zero() {
                target.insert(*i, nv);
            }
        }
        make_primitive(target);
    }
}

fn make_primitive(row: &mut Row<BigInt>) {
    let mut g = BigInt::zero();
    for x in row.values() {
        g = g.gcd(x);
        if g.is_one() {
            return;
        }
    }
    if g > BigInt::one() {
        for x in row.values_mut() {
            *x /= &g;
        }
    }
}

fn markowitz_rank<T: Pivoting>(mut rows: Vec<Row<T>>) -> usize {
    rows.retain(|r| !r.is_empty());
    let mut rank = 0;
    while !rows.is_empty() {
        let (ri, _) = rows.iter().enumerate().min_by_key(|(_, r)| r.len()).unwrap();
        let pivot = rows.swap_remove(ri);
        // Among the pivot row's entries pick the one touching the fewest remaining rows.
        let mut counts: HashMap<usize, usize> = pivot.keys().map(|k| (*k, 0)).collect();
        for r in &rows {
            for k in r.keys() {
                if let Some(c) = counts.get_mut(k) {
                    *c += 1;
                }
            }
        }
        let idx = *pivot.keys().min_by_key(|k| (counts[k], **k)).unwrap();
        for r in rows.iter_mut() {
            if r.contains_key(&idx) {
                T::eliminate(r, &pivot, idx);
            }
        }
        rows.retain(|r| !r.is_empty());
        rank += 1;
    }
    rank
}

fn integer_row(v: &Vector) -> Row<BigInt> {
    let mut den = BigInt::one();
    for (_, x) in v.iter() {
        den = den.lcm(x.as_rational().expect("rational entry").denom());
    }
    let mut row = Row::new();
    for (i, x) in v.iter() {
        let q = x.as_rational().unwrap();
        let n = q.numer() * (&den / q.denom());
        row.insert(*i, n);
    }
    make_primitive(&mut row);
    if let Some((_, first)) = row.iter().next() {
        if first.is_negative() {
            for x in row.values_mut() {
                *x = -x.clone();
            }
        }
    }
    row
}

/// Rank of the span of a list of vectors.
pub fn rank_of(vectors: &[Vector], field: Field) -> usize {
    match field {
        Field::Prime(p) => {
            let rows = vectors
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|(i, x)| match x {
                            Scalar::Fp { v, .. } => (*i, Mod { v: *v as u64, p: p as u64 }),
                            _ => panic!("non-F_p entry"),
                        })
                        .collect()
                })
                .collect();
            markowitz_rank::<Mod>(rows)
        }
        Field::Rational => markowitz_rank::<BigInt>(vectors.iter().map(integer_row).collect()),
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    // rank of the column set equals the matrix rank
    rank_of(m.columns(), m.field())
}

/// Incremental echelon form that remembers how each pivot vector was built
/// from the inserted generators.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    pivots: BTreeMap<usize, (Vector, Vector)>,
    inserted: usize,
}

impl Echelon {
    pub fn new(field: Field) -> Self {
        Echelon { field, pivots: BTreeMap::new(), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `v` against the pivots. Returns the residual and the combination
    /// `x` of inserted generators with `v = residual + Σ x_k g_k`.
    pub fn reduce(&self, v: &Vector) -> (Vector, Vector) {
        let mut res = v.clone();
        let mut comb = Vector::new();
        let mut from = 0usize;
        loop {
            let lead = res.indices().find(|i| *i >= from && self.pivots.contains_key(i));
            let Some(lead) = lead else { break };
            let (pv, pc) = &self.pivots[&lead];
            let factor = res.get(lead).unwrap() / pv.get(lead).unwrap();
            res.add_scaled(pv, &-&factor);
            comb.add_scaled(pc, &factor);
            from = lead + 1;
        }
        (res, comb)
    }

    /// Insert generator number `self.inserted`. Returns a kernel relation
    /// (combination of generators summing to zero) when it is dependent.
    pub fn insert(&mut self, v: &Vector) -> Option<Vector> {
        let id = self.inserted;
        self.inserted += 1;
        let (res, comb) = self.reduce(v);
        let mut own = Vector::unit(id, self.field);
        own.add_scaled(&comb, &self.field.int(-1));
        if res.is_zero() {
            return Some(own);
        }
        // the residual has no pivot indices left, so its first index is a new lead
        let lead = res.indices().next().unwrap();
        self.pivots.insert(lead, (res, own));
        None
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).0.is_zero()
    }
}

pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vector> {
    let mut ech = Echelon::new(m.field());
    m.columns().iter().filter_map(|c| ech.insert(c)).collect()
}

/// Solve `m x = b`, returning one solution when it exists.
pub fn solve(m: &SparseMatrix, b: &Vector) -> Option<Vector> {
    let mut ech = Echelon::new(m.field());
    for c in m.columns() {
        ech.insert(c);
    }
    let (res, comb) = ech.reduce(b);
    res.is_zero().then_some(comb)
}

/// Inverse of a square matrix, if invertible.
pub fn inverse(m: &SparseMatrix) -> Option<SparseMatrix> {
    let n = m.rows();
    if m.cols() != n {
        return None;
    }
    let mut ech = Echelon::new(m.field());
    for c in m.columns() {
        if ech.insert(c).is_some() {
            return None;
        }
    }
    let cols = (0..n)
        .map(|i| {
            let (res, comb) = ech.reduce(&Vector::unit(i, m.field()));
            debug_assert!(res.is_zero());
            comb
        })
        .collect();
    SparseMatrix::from_columns(n, cols, m.field()).ok()
}
