//! Seeded random small instances for property tests.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dgcat::Category;
use crate::exactla::{Field, Scalar, Vector};
use crate::grquiv::{Arrow, GradedQuiver};
use crate::ptdcoa::Coalgebra;

pub const DEFAULT_SEED: u64 = 0x6b6f737a;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn scalar(rng: &mut impl Rng, field: Field) -> Scalar {
    match field.elements() {
        Some(e) => e.choose(rng).unwrap().clone(),
        None => field.int(rng.gen_range(-2..=2)),
    }
}

fn nonzero(rng: &mut impl Rng, field: Field) -> Scalar {
    loop {
        let s = scalar(rng, field);
        if !s.is_zero() {
            return s;
        }
    }
}

fn sparse_combination(rng: &mut impl Rng, field: Field, support: &[usize], p: f64) -> Vector {
    let mut v = Vector::new();
    for i in support {
        if rng.gen_bool(p) {
            v.add_at(*i, &nonzero(rng, field));
        }
    }
    v
}

fn objects(n: usize) -> Vec<String> {
    ["x", "y", "z"].iter().take(n).map(|s| s.to_string()).collect()
}

fn random_arrows(rng: &mut impl Rng, n_obj: usize, count: usize, degrees: &[i32], prefix: &str) -> Vec<Arrow> {
    (0..count)
        .map(|k| {
            let (s, t) = (rng.gen_range(0..n_obj), rng.gen_range(0..n_obj));
            Arrow::new(format!("{prefix}{k}"), s, t, *degrees.choose(rng).unwrap())
        })
        .collect()
}

/// A valid unital dg category (curved with some probability) with at most
/// `max_dim` basis arrows including units. Rejection-sampled.
pub fn category(rng: &mut impl Rng, field: Field, max_dim: usize, allow_curvature: bool) -> Category {
    loop {
        let n_obj = rng.gen_range(1..=2.min(max_dim));
        let extra = rng.gen_range(0..=max_dim - n_obj);
        let mut arrows: Vec<Arrow> = (0..n_obj).map(|x| Arrow::new(format!("1_{}", objects(n_obj)[x]), x, x, 0)).collect();
        arrows.extend(random_arrows(rng, n_obj, extra, &[-1, 0, 1, 2], "a"));
        let Ok(q) = GradedQuiver::new(objects(n_obj), arrows) else { continue };
        let units: Vec<usize> = (0..n_obj).collect();
        let slot = |x: usize, y: usize, d: i32| q.slot_deg(x, y, d);
        let diff = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| if i < n_obj { Vector::new() } else { sparse_combination(rng, field, &slot(a.src, a.tgt, a.deg + 1), 0.5) })
            .collect();
        let mut comp = HashMap::new();
        for i in n_obj..q.dim() {
            for j in n_obj..q.dim() {
                let (a, b) = (q.arrow(i), q.arrow(j));
                if a.tgt == b.src && rng.gen_bool(0.5) {
                    let v = sparse_combination(rng, field, &slot(a.src, b.tgt, a.deg + b.deg), 0.6);
                    if !v.is_zero() {
                        comp.insert((i, j), v);
                    }
                }
            }
        }
        let curvature = (allow_curvature && rng.gen_bool(0.3))
            .then(|| (0..n_obj).map(|x| sparse_combination(rng, field, &slot(x, x, 2), 0.7)).collect());
        let Ok(c) = Category::with_unit_arrows(field, q, &units, diff, comp, curvature) else { continue };
        if c.validate().is_ok() {
            return c;
        }
    }
}

/// A unital associative algebra in degree 0: one object, `dim` basis elements
/// including the unit, zero differential. Rejection-sampled.
pub fn algebra(rng: &mut impl Rng, field: Field, dim: usize) -> Category {
    loop {
        let mut arrows = vec![Arrow::new("1", 0, 0, 0)];
        arrows.extend((1..dim).map(|k| Arrow::new(format!("a{k}"), 0, 0, 0)));
        let q = GradedQuiver::new(vec!["*".into()], arrows).unwrap();
        let all: Vec<usize> = (0..dim).collect();
        let mut comp = HashMap::new();
        for i in 1..dim {
            for j in 1..dim {
                let v = sparse_combination(rng, field, &all, 0.4);
                if !v.is_zero() {
                    comp.insert((i, j), v);
                }
            }
        }
        let Ok(c) = Category::with_unit_arrows(field, q, &[0], vec![Vector::new(); dim], comp, None) else { continue };
        if c.validate().is_ok() {
            return c;
        }
    }
}

/// A valid pointed curved coalgebra with at most `max_dim` reduced cells.
/// Rejection-sampled; `Δ̄` of a cell only uses earlier cells, so it is conilpotent.
pub fn coalgebra(rng: &mut impl Rng, field: Field, max_dim: usize) -> Coalgebra {
    loop {
        let n_obj = rng.gen_range(1..=2);
        let n = rng.gen_range(1..=max_dim);
        let mut cells = random_arrows(rng, n_obj, n, &[-2, -1, 0, 1], "c");
        cells.sort_by_key(|c| std::cmp::Reverse(c.deg));
        // earlier cells have larger degree, so the weight order is compatible with degree-sum splits
        let mut comult = vec![];
        for (i, c) in cells.iter().enumerate() {
            let mut t = vec![];
            for a in 0..i {
                for b in 0..i {
                    let (ca, cb) = (&cells[a], &cells[b]);
                    if ca.src == c.src && ca.tgt == cb.src && cb.tgt == c.tgt && ca.deg + cb.deg == c.deg && rng.gen_bool(0.6) {
                        t.push((a, b, nonzero(rng, field)));
                    }
                }
            }
            comult.push(t);
        }
        let diff = cells
            .iter()
            .map(|c| {
                let support: Vec<usize> =
                    (0..n).filter(|j| cells[*j].src == c.src && cells[*j].tgt == c.tgt && cells[*j].deg == c.deg + 1).collect();
                sparse_combination(rng, field, &support, 0.5)
            })
            .collect();
        let curved: Vec<usize> = (0..n).filter(|i| cells[*i].is_endo() && cells[*i].deg == -2).collect();
        let curvature = sparse_combination(rng, field, &curved, 0.6);
        let Ok(c) = Coalgebra::new(field, objects(n_obj), cells, comult, diff, curvature) else { continue };
        if c.validate().is_ok() {
            return c;
        }
    }
}

/// A complement to the units: each degree-0 endo arrow shifted by a random
/// multiple of its unit. The units of `d` must be basis arrows.
pub fn splitting(rng: &mut impl Rng, d: &Category) -> (Vec<Vector>, Vec<String>) {
    let units = d.unit_indices().expect("units must be basis arrows");
    let f = d.field();
    let mut complement = vec![];
    let mut names = vec![];
    for (i, a) in d.quiver().arrows().iter().enumerate() {
        if units.contains(&i) {
            continue;
        }
        let mut v = Vector::unit(i, f);
        if a.is_endo() && a.deg == 0 {
            v.add_at(units[a.src], &scalar(rng, f));
        }
        complement.push(v);
        names.push(a.name.clone());
    }
    (complement, names)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_valid_and_reproducible() {
        for f in [Field::Prime(2), Field::Prime(3), Field::Rational] {
            let mut r = rng(DEFAULT_SEED);
            let a: Vec<usize> = (0..20).map(|_| category(&mut r, f, 4, true).dim()).collect();
            let mut r = rng(DEFAULT_SEED);
            let b: Vec<usize> = (0..20).map(|_| category(&mut r, f, 4, true).dim()).collect();
            assert_eq!(a, b);
            for _ in 0..20 {
                coalgebra(&mut r, f, 4).validate().unwrap();
            }
        }
    }
}
