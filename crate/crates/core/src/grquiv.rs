//! Graded quivers: finitely many objects, and for each ordered pair of objects
//! a finite graded basis of arrows.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactla::{Field, SparseMatrix, Vector};

/// A named basis element `src → tgt` of degree `deg`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
    pub deg: i32,
}

impl Arrow {
    pub fn new(name: impl Into<String>, src: usize, tgt: usize, deg: i32) -> Self {
        Arrow { name: name.into(), src, tgt, deg }
    }

    pub fn is_endo(&self) -> bool {
        self.src == self.tgt
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedQuiver {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
}

impl GradedQuiver {
    pub fn new(objects: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut seen = HashSet::new();
        for o in &objects {
            if !seen.insert(o.as_str()) {
                return Err(Error::Structure(format!("duplicate object '{o}'")));
            }
        }
        let mut names = HashSet::new();
        for a in &arrows {
            if a.src >= objects.len() || a.tgt >= objects.len() {
                return Err(Error::Structure(format!("arrow '{}' has an endpoint outside the object set", a.name)));
            }
            if !names.insert((a.src, a.tgt, a.deg, a.name.as_str())) {
                return Err(Error::Structure(format!(
                    "arrow name '{}' repeated in slot ({}, {}, {})",
                    a.name, objects[a.src], objects[a.tgt], a.deg
                )));
            }
        }
        Ok(GradedQuiver { objects, arrows })
    }

    /// No objects, no arrows.
    pub fn empty() -> Self {
        GradedQuiver { objects: vec![], arrows: vec![] }
    }

    /// One object and one degree-0 loop: the quiver underlying the ground field.
    pub fn unit() -> Self {
        GradedQuiver { objects: vec!["*".into()], arrows: vec![Arrow::new("1", 0, 0, 0)] }
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    pub fn dim(&self) -> usize {
        self.arrows.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.arrows.iter().map(|a| a.name.clone()).collect()
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    /// First arrow with the given name.
    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn slot(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|i| self.arrows[*i].src == x && self.arrows[*i].tgt == y).collect()
    }

    pub fn slot_deg(&self, x: usize, y: usize, n: i32) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|i| {
                let a = &self.arrows[*i];
                a.src == x && a.tgt == y && a.deg == n
            })
            .collect()
    }

    pub fn degrees(&self) -> BTreeSet<i32> {
        self.arrows.iter().map(|a| a.deg).collect()
    }

    /// `(V ⊗ W)((x,x'),(y,y'))_n = ⊕_{p+q=n} V(x,y)_p ⊗ W(x',y')_q`.
    /// Object `(i, j)` has index `i * |Ob W| + j`; arrows are ordered lexicographically.
    pub fn tensor(&self, other: &GradedQuiver) -> GradedQuiver {
        let m = other.num_objects();
        let objects = self
            .objects
            .iter()
            .flat_map(|x| other.objects.iter().map(move |y| pair_name(x, y)))
            .collect();
        let mut arrows = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.arrows {
            for b in &other.arrows {
                arrows.push(Arrow::new(format!("{}⊗{}", a.name, b.name), a.src * m + b.src, a.tgt * m + b.tgt, a.deg + b.deg));
            }
        }
        GradedQuiver { objects, arrows }
    }

    /// Objects are all maps `Ob V → Ob W`; arrows `f → g` of degree `n` are
    /// `⊕_{x,y} Hom_n(V(x,y), W(fx, gy))`, with basis the pairs `(α, β)`
    /// of degree `|β| − |α|`. Also returns the object maps.
    pub fn internal_hom(&self, other: &GradedQuiver, cap: usize) -> Result<(GradedQuiver, Vec<Vec<usize>>)> {
        let maps = object_maps(self.num_objects(), other.num_objects(), cap)?;
        let objects = maps.iter().map(|f| self.map_name(other, f)).collect();
        let mut arrows = vec![];
        for (fi, f) in maps.iter().enumerate() {
            for (gi, g) in maps.iter().enumerate() {
                for a in &self.arrows {
                    for b in &other.arrows {
                        if b.src == f[a.src] && b.tgt == g[a.tgt] {
                            arrows.push(Arrow::new(format!("{{{}→{}}}", a.name, b.name), fi, gi, b.deg - a.deg));
                        }
                    }
                }
            }
        }
        Ok((GradedQuiver { objects, arrows }, maps))
    }

    fn map_name(&self, other: &GradedQuiver, f: &[usize]) -> String {
        let parts: Vec<String> = f.iter().enumerate().map(|(x, y)| format!("{}↦{}", self.objects[x], other.objects[*y])).collect();
        format!("[{}]", parts.join(","))
    }

    /// Number of quiver maps `self → target` over `F_q`.
    pub fn count_maps(&self, target: &GradedQuiver, q: u64, cap: usize) -> Result<BigUint> {
        let maps = object_maps(self.num_objects(), target.num_objects(), cap)?;
        let mut total = BigUint::zero();
        for f in maps {
            let e: usize = self.arrows.iter().map(|a| target.slot_deg(f[a.src], f[a.tgt], a.deg).len()).sum();
            total += BigUint::from(q).pow(e as u32);
        }
        Ok(total)
    }
}

pub(crate) fn pair_name(x: &str, y: &str) -> String {
    format!("({x},{y})")
}

/// All maps `{0..n} → {0..m}` in lexicographic order, refusing more than `cap`.
pub fn object_maps(n: usize, m: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
    let count = (m as f64).powi(n as i32);
    if count > cap as f64 {
        return Err(Error::CapExceeded(format!("{m}^{n} object maps exceed the cap {cap}")));
    }
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|f: Vec<usize>| {
                (0..m).map(move |y| {
                    let mut g = f.clone();
                    g.push(y);
                    g
                })
            })
            .collect();
    }
    Ok(out)
}

/// A degree-0 map of quivers: an object map and, for every source arrow, its
/// image as a combination of target arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverMap {
    pub objects: Vec<usize>,
    pub arrows: Vec<Vector>,
}

impl QuiverMap {
    pub fn validate(&self, src: &GradedQuiver, tgt: &GradedQuiver) -> Result<()> {
        if self.objects.len() != src.num_objects() || self.arrows.len() != src.dim() {
            return Err(Error::Dimension("quiver map does not cover its source".into()));
        }
        if let Some(y) = self.objects.iter().find(|y| **y >= tgt.num_objects()) {
            return Err(Error::Structure(format!("object image {y} outside target")));
        }
        for (a, img) in src.arrows.iter().zip(&self.arrows) {
            for i in img.indices() {
                let b = tgt.arrows.get(i).ok_or_else(|| Error::Dimension(format!("image of '{}' out of range", a.name)))?;
                if b.src != self.objects[a.src] || b.tgt != self.objects[a.tgt] || b.deg != a.deg {
                    return Err(Error::Structure(format!("image of '{}' leaves its slot (hits '{}')", a.name, b.name)));
                }
            }
        }
        Ok(())
    }

    /// True when the object map is bijective and every arrow goes to a
    /// distinct target arrow up to sign.
    pub fn is_relabeling(&self, src: &GradedQuiver, tgt: &GradedQuiver) -> bool {
        if self.validate(src, tgt).is_err() || src.dim() != tgt.dim() || src.num_objects() != tgt.num_objects() {
            return false;
        }
        let objs: HashSet<_> = self.objects.iter().collect();
        let mut hit = HashSet::new();
        objs.len() == self.objects.len()
            && self.arrows.iter().all(|v| v.len() == 1 && hit.insert(v.indices().next().unwrap()))
    }

    pub fn identity(q: &GradedQuiver, field: Field) -> Self {
        QuiverMap { objects: (0..q.num_objects()).collect(), arrows: (0..q.dim()).map(|i| Vector::unit(i, field)).collect() }
    }
}

/// `(U ⊗ V) ⊗ W → U ⊗ (V ⊗ W)` on the canonical product bases.
pub fn tensor_associator(u: &GradedQuiver, v: &GradedQuiver, w: &GradedQuiver, field: Field) -> QuiverMap {
    let (nv, nw) = (v.num_objects(), w.num_objects());
    let objects = (0..u.num_objects() * nv * nw).collect();
    let (dv, dw) = (v.dim(), w.dim());
    // both sides enumerate (a, b, c) lexicographically
    let arrows = (0..u.dim() * dv * dw).map(|i| Vector::unit(i, field)).collect();
    QuiverMap { objects, arrows }
}

/// A quiver with a unit `k[Ob] → V` and an augmentation `V → k[Ob]`.
#[derive(Clone, Debug)]
pub struct AugmentedQuiver {
    pub quiver: GradedQuiver,
    pub field: Field,
    /// Per object, a degree-0 element of `V(x,x)`.
    pub unit: Vec<Vector>,
    /// Coefficient of the augmentation on each arrow.
    pub augmentation: Vector,
}

/// The kernel of an augmentation, with its basis written in the original arrows.
#[derive(Clone, Debug)]
pub struct ReducedQuiver {
    pub quiver: GradedQuiver,
    pub basis: Vec<Vector>,
}

impl AugmentedQuiver {
    /// Arrows named in `units` serve as units, with augmentation the dual coordinate.
    pub fn with_unit_arrows(quiver: GradedQuiver, field: Field, units: &[usize]) -> Self {
        let unit = units.iter().map(|u| Vector::unit(*u, field)).collect();
        let augmentation = Vector::from_pairs(units.iter().map(|u| (*u, field.one())));
        AugmentedQuiver { quiver, field, unit, augmentation }
    }

    pub fn validate(&self) -> Result<ReducedQuiver> {
        let q = &self.quiver;
        if self.unit.len() != q.num_objects() {
            return Err(Error::Structure("one unit per object required".into()));
        }
        for i in self.augmentation.indices() {
            let a = q.arrows.get(i).ok_or_else(|| Error::Dimension("augmentation index out of range".into()))?;
            if !a.is_endo() || a.deg != 0 {
                return Err(Error::Structure(format!("augmentation is nonzero on '{}' outside degree-0 endomorphisms", a.name)));
            }
        }
        for (x, u) in self.unit.iter().enumerate() {
            for i in u.indices() {
                let a = &q.arrows[i];
                if a.src != x || a.tgt != x || a.deg != 0 {
                    return Err(Error::Structure(format!("unit of '{}' uses arrow '{}'", q.objects[x], a.name)));
                }
            }
            let e = u.dot(&self.augmentation, self.field);
            if !e.is_one() {
                return Err(Error::Identity(format!("augmentation of the unit at '{}' is {e}, not 1", q.objects[x])));
            }
        }
        let mut arrows = vec![];
        let mut basis = vec![];
        for x in 0..q.num_objects() {
            for y in 0..q.num_objects() {
                for n in q.degrees() {
                    let slot = q.slot_deg(x, y, n);
                    if slot.is_empty() {
                        continue;
                    }
                    let eps: Vec<_> = slot.iter().filter_map(|i| self.augmentation.get(*i).map(|c| (*i, c.clone()))).collect();
                    if eps.is_empty() {
                        for i in slot {
                            arrows.push(q.arrows[i].clone());
                            basis.push(Vector::unit(i, self.field));
                        }
                        continue;
                    }
                    // kernel of a nonzero functional on the slot
                    let row = SparseMatrix::from_columns(
                        1,
                        slot.iter().map(|i| Vector::from_pairs(self.augmentation.get(*i).map(|c| (0, c.clone())))).collect(),
                        self.field,
                    )?;
                    for k in row.kernel_basis() {
                        let v = k.reindex(|j| slot[j]);
                        // each relation has a distinct largest index
                        let own = v.max_index().unwrap();
                        arrows.push(q.arrows[own].clone());
                        basis.push(v);
                    }
                }
            }
        }
        Ok(ReducedQuiver { quiver: GradedQuiver::new(q.objects.clone(), arrows)?, basis })
    }
}
