//! Finite curved categories. Composition is written in path order: the product
//! `a·b` of `a: x → y` and `b: y → z` is an arrow `x → z`.

mod free;

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::exactla::{induced_rank, inverse, Boundary, BoundedComplex, Field, Scalar, SparseMatrix, Vector};
use crate::grquiv::{Arrow, GradedQuiver};

pub use free::{free_category, Caps, FreeCategory, FreeData, PathBound, Word};

/// A curved, possibly non-unital, graded category with a degree-1 differential.
///
/// With units present and no curvature this is a dg category.
#[derive(Clone, Debug)]
pub struct Category {
    field: Field,
    quiver: GradedQuiver,
    diff: Vec<Vector>,
    comp: HashMap<(usize, usize), Vector>,
    units: Option<Vec<Vector>>,
    curvature: Option<Vec<Vector>>,
}

/// Degrees in which identities are checked.
pub type Region<'a> = &'a dyn Fn(i32) -> bool;

pub fn everywhere(_: i32) -> bool {
    true
}

impl Category {
    pub fn new(
        field: Field,
        quiver: GradedQuiver,
        diff: Vec<Vector>,
        comp: HashMap<(usize, usize), Vector>,
        units: Option<Vec<Vector>>,
        curvature: Option<Vec<Vector>>,
    ) -> Result<Self> {
        let n = quiver.dim();
        if diff.len() != n {
            return Err(Error::Dimension(format!("{} differentials for {} arrows", diff.len(), n)));
        }
        let in_range = |v: &Vector| v.max_index().is_none_or(|m| m < n);
        if !diff.iter().all(in_range) || !comp.values().all(in_range) {
            return Err(Error::Dimension("structure constant refers to a missing arrow".into()));
        }
        if comp.keys().any(|(a, b)| *a >= n || *b >= n) {
            return Err(Error::Dimension("composition table refers to a missing arrow".into()));
        }
        for list in [&units, &curvature].into_iter().flatten() {
            if list.len() != quiver.num_objects() || !list.iter().all(in_range) {
                return Err(Error::Dimension("per-object data does not match the objects".into()));
            }
        }
        let comp = comp.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(Category { field, quiver, diff, comp, units, curvature })
    }

    /// A unital category whose units are the given basis arrows; products with
    /// units are filled in.
    pub fn with_unit_arrows(
        field: Field,
        quiver: GradedQuiver,
        units: &[usize],
        diff: Vec<Vector>,
        mut comp: HashMap<(usize, usize), Vector>,
        curvature: Option<Vec<Vector>>,
    ) -> Result<Self> {
        if units.len() != quiver.num_objects() {
            return Err(Error::Structure("one unit arrow per object required".into()));
        }
        for (i, a) in quiver.arrows().iter().enumerate() {
            comp.entry((units[a.src], i)).or_insert_with(|| Vector::unit(i, field));
            comp.entry((i, units[a.tgt])).or_insert_with(|| Vector::unit(i, field));
        }
        let uv = units.iter().map(|u| Vector::unit(*u, field)).collect();
        Category::new(field, quiver, diff, comp, Some(uv), curvature)
    }

    /// The empty category.
    pub fn empty(field: Field) -> Self {
        Category { field, quiver: GradedQuiver::empty(), diff: vec![], comp: HashMap::new(), units: Some(vec![]), curvature: None }
    }

    /// One object whose only morphism is zero.
    pub fn zero(field: Field) -> Self {
        let quiver = GradedQuiver::new(vec!["0".into()], vec![]).unwrap();
        Category { field, quiver, diff: vec![], comp: HashMap::new(), units: Some(vec![Vector::new()]), curvature: None }
    }

    /// The ground field as a one-object category.
    pub fn ground(field: Field) -> Self {
        Category::with_unit_arrows(field, GradedQuiver::unit(), &[0], vec![Vector::new()], HashMap::new(), None).unwrap()
    }

    /// `x → y` with a single degree-0 arrow.
    pub fn a2(field: Field) -> Self {
        let q = GradedQuiver::new(
            vec!["x".into(), "y".into()],
            vec![Arrow::new("1x", 0, 0, 0), Arrow::new("1y", 1, 1, 0), Arrow::new("a", 0, 1, 0)],
        )
        .unwrap();
        Category::with_unit_arrows(field, q, &[0, 1], vec![Vector::new(); 3], HashMap::new(), None).unwrap()
    }

    /// `k[x]/x²` with `x` in degree `deg` and zero differential.
    pub fn dual_numbers(field: Field, deg: i32) -> Self {
        let q = GradedQuiver::new(vec!["o".into()], vec![Arrow::new("1", 0, 0, 0), Arrow::new("x", 0, 0, deg)]).unwrap();
        Category::with_unit_arrows(field, q, &[0], vec![Vector::new(); 2], HashMap::new(), None).unwrap()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn quiver(&self) -> &GradedQuiver {
        &self.quiver
    }

    pub fn num_objects(&self) -> usize {
        self.quiver.num_objects()
    }

    pub fn dim(&self) -> usize {
        self.quiver.dim()
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        self.quiver.arrow(i)
    }

    pub fn deg(&self, i: usize) -> i32 {
        self.quiver.arrow(i).deg
    }

    pub fn diff_of(&self, i: usize) -> &Vector {
        &self.diff[i]
    }

    pub fn comp_table(&self) -> &HashMap<(usize, usize), Vector> {
        &self.comp
    }

    pub fn units(&self) -> Option<&[Vector]> {
        self.units.as_deref()
    }

    pub fn unit(&self, x: usize) -> Option<&Vector> {
        self.units.as_ref().map(|u| &u[x])
    }

    pub fn curvature(&self) -> Option<&[Vector]> {
        self.curvature.as_deref()
    }

    pub fn curvature_at(&self, x: usize) -> Vector {
        self.curvature.as_ref().map_or_else(Vector::new, |h| h[x].clone())
    }

    pub fn is_curved(&self) -> bool {
        self.curvature.as_ref().is_some_and(|h| h.iter().any(|v| !v.is_zero()))
    }

    pub fn is_unital(&self) -> bool {
        self.units.is_some()
    }

    /// The category with one object and a zero unit.
    pub fn is_zero_category(&self) -> bool {
        self.num_objects() == 1 && self.dim() == 0 && self.units.as_ref().is_some_and(|u| u[0].is_zero())
    }

    /// Indices of the unit arrows when every unit is a basis element.
    pub fn unit_indices(&self) -> Option<Vec<usize>> {
        let units = self.units.as_ref()?;
        units
            .iter()
            .map(|u| {
                let (i, c) = u.iter().next()?;
                (u.len() == 1 && c.is_one()).then_some(*i)
            })
            .collect()
    }

    pub fn mul_basis(&self, a: usize, b: usize) -> Option<&Vector> {
        self.comp.get(&(a, b))
    }

    /// Bilinear product in path order.
    pub fn mul(&self, a: &Vector, b: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, x) in a {
            for (j, y) in b {
                if let Some(v) = self.comp.get(&(*i, *j)) {
                    out.add_scaled(v, &(x * y));
                }
            }
        }
        out
    }

    pub fn d(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, c) in v {
            out.add_scaled(&self.diff[*i], c);
        }
        out
    }

    /// Sign `(−1)^k` in this field.
    pub fn sign(&self, k: i32) -> Scalar {
        self.field.sign(k as i64)
    }

    fn names(&self) -> Vec<String> {
        self.quiver.names()
    }

    fn show(&self, v: &Vector) -> String {
        v.display_with(&self.names())
    }

    fn check_homogeneous(&self, what: &str, v: &Vector, src: usize, tgt: usize, deg: i32) -> Result<()> {
        for i in v.indices() {
            let a = self.arrow(i);
            if a.src != src || a.tgt != tgt || a.deg != deg {
                return Err(Error::Structure(format!(
                    "{what} contains '{}' outside slot ({} → {}, degree {deg})",
                    a.name,
                    self.quiver.objects()[src],
                    self.quiver.objects()[tgt]
                )));
            }
        }
        Ok(())
    }

    /// Slot and degree checks on all structure data.
    pub fn validate_structure(&self) -> Result<()> {
        let objs = self.quiver.objects();
        for (i, a) in self.quiver.arrows().iter().enumerate() {
            self.check_homogeneous(&format!("d({})", a.name), &self.diff[i], a.src, a.tgt, a.deg + 1)?;
        }
        for ((i, j), v) in &self.comp {
            let (a, b) = (self.arrow(*i), self.arrow(*j));
            if a.tgt != b.src {
                return Err(Error::Structure(format!("product of non-composable '{}' and '{}'", a.name, b.name)));
            }
            self.check_homogeneous(&format!("{}·{}", a.name, b.name), v, a.src, b.tgt, a.deg + b.deg)?;
        }
        if let Some(units) = &self.units {
            for (x, u) in units.iter().enumerate() {
                if u.is_zero() && !self.is_zero_category() {
                    return Err(Error::Structure(format!("missing unit at '{}'", objs[x])));
                }
                self.check_homogeneous(&format!("unit of '{}'", objs[x]), u, x, x, 0)?;
            }
        }
        if let Some(h) = &self.curvature {
            for (x, v) in h.iter().enumerate() {
                self.check_homogeneous(&format!("curvature at '{}'", objs[x]), v, x, x, 2)?;
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_in(&everywhere)
    }

    /// Structural checks everywhere, identities only where every degree
    /// involved satisfies `region`.
    pub fn validate_in(&self, region: Region) -> Result<()> {
        self.validate_structure()?;
        let ok = |ds: &[i32]| ds.iter().all(|d| region(*d));
        let arrows = self.quiver.arrows();
        let n = arrows.len();
        let mut out_of: Vec<Vec<usize>> = vec![vec![]; self.num_objects()];
        for (i, a) in arrows.iter().enumerate() {
            out_of[a.src].push(i);
        }
        if let Some(units) = &self.units {
            for (x, u) in units.iter().enumerate() {
                if ok(&[0, 1]) && !self.d(u).is_zero() {
                    return Err(Error::Identity(format!("d(unit) ≠ 0 at object '{}'", self.quiver.objects()[x])));
                }
            }
            for i in 0..n {
                let a = &arrows[i];
                if !ok(&[a.deg]) {
                    continue;
                }
                let e = Vector::unit(i, self.field);
                if self.mul(&units[a.src], &e) != e || self.mul(&e, &units[a.tgt]) != e {
                    return Err(Error::Identity(format!("unit law fails on '{}'", a.name)));
                }
            }
        }
        for i in 0..n {
            let a = &arrows[i];
            let ea = Vector::unit(i, self.field);
            for &j in &out_of[a.tgt] {
                let b = &arrows[j];
                let eb = Vector::unit(j, self.field);
                let ab = self.mul(&ea, &eb);
                if ok(&[a.deg + b.deg, a.deg + 1, b.deg + 1, a.deg + b.deg + 1]) {
                    let lhs = self.d(&ab);
                    let mut rhs = self.mul(&self.diff[i], &eb);
                    rhs.add_scaled(&self.mul(&ea, &self.diff[j]), &self.sign(a.deg));
                    if lhs != rhs {
                        return Err(Error::Identity(format!(
                            "Leibniz fails on ({}, {}): d(ab) = {} but expected {}",
                            a.name,
                            b.name,
                            self.show(&lhs),
                            self.show(&rhs)
                        )));
                    }
                }
                for &k in &out_of[b.tgt] {
                    let c = &arrows[k];
                    if !ok(&[a.deg + b.deg, b.deg + c.deg, a.deg + b.deg + c.deg]) {
                        continue;
                    }
                    let ec = Vector::unit(k, self.field);
                    let l = self.mul(&ab, &ec);
                    let r = self.mul(&ea, &self.mul(&eb, &ec));
                    if l != r {
                        return Err(Error::Identity(format!(
                            "associativity fails on ({}, {}, {}): {} vs {}",
                            a.name,
                            b.name,
                            c.name,
                            self.show(&l),
                            self.show(&r)
                        )));
                    }
                }
            }
        }
        for (i, a) in arrows.iter().enumerate() {
            if !ok(&[a.deg + 1, a.deg + 2]) {
                continue;
            }
            let ea = Vector::unit(i, self.field);
            let dd = self.d(&self.diff[i]);
            let expect = self.mul(&self.curvature_at(a.src), &ea).minus(&self.mul(&ea, &self.curvature_at(a.tgt)));
            if dd != expect {
                return Err(Error::Identity(format!(
                    "d² fails on '{}': d²a = {} but curvature gives {}",
                    a.name,
                    self.show(&dd),
                    self.show(&expect)
                )));
            }
        }
        if let Some(h) = &self.curvature {
            for (x, v) in h.iter().enumerate() {
                if ok(&[2, 3]) && !self.d(v).is_zero() {
                    return Err(Error::Identity(format!("d(curvature) ≠ 0 at '{}'", self.quiver.objects()[x])));
                }
            }
        }
        Ok(())
    }

    /// The hom complex `C(x, y)` over its full (finite) degree support.
    pub fn hom_complex(&self, x: usize, y: usize) -> Result<BoundedComplex> {
        let slot = self.quiver.slot(x, y);
        let mut by_deg: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for i in &slot {
            by_deg.entry(self.deg(*i)).or_default().push(*i);
        }
        let (lo, hi) = match (by_deg.keys().next(), by_deg.keys().next_back()) {
            (Some(l), Some(h)) => (*l, *h),
            _ => (0, 0),
        };
        let position: HashMap<usize, usize> =
            by_deg.values().flat_map(|v| v.iter().enumerate().map(|(k, i)| (*i, k))).collect();
        let empty = vec![];
        let basis_at = |n: i32| by_deg.get(&n).unwrap_or(&empty);
        let mut bases = vec![];
        let mut diffs = vec![];
        for n in lo..=hi {
            bases.push(basis_at(n).iter().map(|i| self.arrow(*i).name.clone()).collect());
            if n < hi {
                let cols = basis_at(n).iter().map(|i| self.diff[*i].reindex(|j| position[&j])).collect();
                diffs.push(SparseMatrix::from_columns(basis_at(n + 1).len(), cols, self.field)?);
            }
        }
        BoundedComplex::new(self.field, lo, bases, diffs, Boundary::Zero)
    }

    /// The differential `C(x, y)ⁿ → C(x, y)ⁿ⁺¹` on slot-ordered bases.
    pub fn hom_differential(&self, x: usize, y: usize, n: i32) -> Result<SparseMatrix> {
        let tgt = self.quiver.slot_deg(x, y, n + 1);
        let pos: HashMap<usize, usize> = tgt.iter().enumerate().map(|(k, i)| (*i, k)).collect();
        let cols = self.quiver.slot_deg(x, y, n).iter().map(|i| self.diff[*i].reindex(|j| pos[&j])).collect();
        SparseMatrix::from_columns(tgt.len(), cols, self.field)
    }

    /// Cohomology of `C(x, y)` in each degree of `lo..=hi`.
    pub fn hom_homology(&self, x: usize, y: usize, lo: i32, hi: i32) -> Result<BTreeMap<i32, usize>> {
        let h = self.hom_complex(x, y)?.homology_dims();
        Ok((lo..=hi).map(|n| (n, h.get(&n).copied().unwrap_or(0))).collect())
    }

    /// Replace the basis by `basis` (written in the old arrows, each within one
    /// slot and degree), naming the new arrows `names`.
    pub fn change_basis(&self, basis: &[Vector], names: Vec<String>) -> Result<Category> {
        let n = self.dim();
        if basis.len() != n || names.len() != n {
            return Err(Error::Dimension("a basis change needs one vector and one name per arrow".into()));
        }
        let mut arrows = vec![];
        for (v, name) in basis.iter().zip(names) {
            let first = self.arrow(v.indices().next().ok_or_else(|| Error::Structure("zero basis vector".into()))?);
            self.check_homogeneous("basis vector", v, first.src, first.tgt, first.deg)?;
            arrows.push(Arrow::new(name, first.src, first.tgt, first.deg));
        }
        let p = SparseMatrix::from_columns(n, basis.to_vec(), self.field)?;
        let pinv = inverse(&p).ok_or_else(|| Error::Structure("basis change is not invertible".into()))?;
        let quiver = GradedQuiver::new(self.quiver.objects().to_vec(), arrows)?;
        let diff = basis.iter().map(|v| pinv.apply(&self.d(v))).collect();
        let mut comp = HashMap::new();
        for (i, vi) in basis.iter().enumerate() {
            for (j, vj) in basis.iter().enumerate() {
                if quiver.arrow(i).tgt == quiver.arrow(j).src {
                    let w = pinv.apply(&self.mul(vi, vj));
                    if !w.is_zero() {
                        comp.insert((i, j), w);
                    }
                }
            }
        }
        let units = self.units.as_ref().map(|u| u.iter().map(|v| pinv.apply(v)).collect());
        let curvature = self.curvature.as_ref().map(|h| h.iter().map(|v| pinv.apply(v)).collect());
        Category::new(self.field, quiver, diff, comp, units, curvature)
    }

    /// Make every unit a basis element by swapping it in for an arrow it uses.
    pub fn rebase_units(&self) -> Result<Category> {
        if self.unit_indices().is_some() || self.is_zero_category() {
            return Ok(self.clone());
        }
        let units = self.units.as_ref().ok_or_else(|| Error::Structure("category has no units".into()))?;
        let mut basis: Vec<Vector> = (0..self.dim()).map(|i| Vector::unit(i, self.field)).collect();
        let mut names = self.names();
        for (x, u) in units.iter().enumerate() {
            let i = u.max_index().ok_or_else(|| Error::Structure(format!("missing unit at '{}'", self.quiver.objects()[x])))?;
            basis[i] = u.clone();
            let fresh = format!("1_{}", self.quiver.objects()[x]);
            if !self.quiver.slot(x, x).iter().any(|j| names[*j] == fresh) {
                names[i] = fresh;
            }
        }
        self.change_basis(&basis, names)
    }

    /// Arrows reversed; `a ·op b = (−1)^{|a||b|} b·a`, curvature negated.
    pub fn opposite(&self) -> Category {
        let arrows = self.quiver.arrows().iter().map(|a| Arrow::new(a.name.clone(), a.tgt, a.src, a.deg)).collect();
        let quiver = GradedQuiver::new(self.quiver.objects().to_vec(), arrows).unwrap();
        let comp = self
            .comp
            .iter()
            .map(|((a, b), v)| ((*b, *a), v.scaled(&self.sign(self.deg(*a) * self.deg(*b)))))
            .collect();
        let curvature = self.curvature.as_ref().map(|h| h.iter().map(Vector::neg).collect());
        Category { field: self.field, quiver, diff: self.diff.clone(), comp, units: self.units.clone(), curvature }
    }

    /// `(f⊗g)·(f'⊗g') = (−1)^{|g||f'|} ff'⊗gg'`, `d(f⊗g) = df⊗g + (−1)^{|f|} f⊗dg`.
    /// The zero category absorbs.
    pub fn tensor(&self, other: &Category) -> Result<Category> {
        if self.field != other.field {
            return Err(Error::InvalidField(format!("{} vs {}", self.field, other.field)));
        }
        if self.is_zero_category() || other.is_zero_category() {
            return Ok(Category::zero(self.field));
        }
        let m = other.dim();
        let pair = |v: &Vector, w: &Vector| -> Vector {
            let mut out = Vector::new();
            for (i, x) in v {
                for (j, y) in w {
                    out.add_at(i * m + j, &(x * y));
                }
            }
            out
        };
        let quiver = self.quiver.tensor(&other.quiver);
        let mut diff = vec![];
        for i in 0..self.dim() {
            for j in 0..m {
                let mut v = pair(&self.diff[i], &Vector::unit(j, self.field));
                v.add_scaled(&pair(&Vector::unit(i, self.field), &other.diff[j]), &self.sign(self.deg(i)));
                diff.push(v);
            }
        }
        let mut comp = HashMap::new();
        for ((a, a2), v) in &self.comp {
            for ((b, b2), w) in &other.comp {
                let s = self.sign(other.deg(*b) * self.deg(*a2));
                comp.insert((a * m + b, a2 * m + b2), pair(v, w).scaled(&s));
            }
        }
        let units = match (&self.units, &other.units) {
            (Some(u), Some(w)) => Some(u.iter().flat_map(|x| w.iter().map(move |y| (x, y))).map(|(x, y)| pair(x, y)).collect()),
            _ => None,
        };
        let curvature = if self.is_curved() || other.is_curved() {
            let need = |c: &Category, curved: &Category| -> Result<Vec<Vector>> {
                if curved.is_curved() {
                    c.units.clone().ok_or_else(|| Error::Undefined("curvature of a tensor factor needs units on the other factor".into()))
                } else {
                    Ok(vec![Vector::new(); c.num_objects()])
                }
            };
            let u2 = need(other, self)?;
            let u1 = need(self, other)?;
            let mut h = vec![];
            for x in 0..self.num_objects() {
                for y in 0..other.num_objects() {
                    h.push(pair(&self.curvature_at(x), &u2[y]).plus(&pair(&u1[x], &other.curvature_at(y))));
                }
            }
            Some(h)
        } else {
            None
        };
        Category::new(self.field, quiver, diff, comp, units, curvature)
    }
}

/// A functor given on objects and on basis arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub objects: Vec<usize>,
    pub arrows: Vec<Vector>,
}

impl Functor {
    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, c) in v {
            out.add_scaled(&self.arrows[*i], c);
        }
        out
    }

    pub fn identity(c: &Category) -> Self {
        Functor { objects: (0..c.num_objects()).collect(), arrows: (0..c.dim()).map(|i| Vector::unit(i, c.field())).collect() }
    }

    /// `F: src(x, y)ⁿ → tgt(Fx, Fy)ⁿ` on slot-ordered bases.
    pub fn hom_matrix(&self, src: &Category, tgt: &Category, x: usize, y: usize, n: i32) -> Result<SparseMatrix> {
        let rows = tgt.quiver.slot_deg(self.objects[x], self.objects[y], n);
        let pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(k, i)| (*i, k)).collect();
        let mut cols = vec![];
        for i in src.quiver.slot_deg(x, y, n) {
            let v = &self.arrows[i];
            if v.indices().any(|j| !pos.contains_key(&j)) {
                return Err(Error::Structure(format!("F({}) leaves its slot", src.arrow(i).name)));
            }
            cols.push(v.reindex(|j| pos[&j]));
        }
        SparseMatrix::from_columns(rows.len(), cols, src.field)
    }

    /// Rank of the map induced by `F` on `Hⁿ(x, y)`.
    pub fn induced_rank(&self, src: &Category, tgt: &Category, x: usize, y: usize, n: i32) -> Result<usize> {
        let f = self.hom_matrix(src, tgt, x, y, n)?;
        let out = src.hom_differential(x, y, n)?;
        let into = tgt.hom_differential(self.objects[x], self.objects[y], n - 1)?;
        Ok(induced_rank(&out, &f, &into))
    }

    pub fn validate(&self, src: &Category, tgt: &Category) -> Result<()> {
        self.validate_in(src, tgt, &everywhere)
    }

    /// Slot preservation everywhere; units, products, differentials and
    /// curvature where the degrees involved lie in `region`.
    pub fn validate_in(&self, src: &Category, tgt: &Category, region: Region) -> Result<()> {
        if self.objects.len() != src.num_objects() || self.arrows.len() != src.dim() {
            return Err(Error::Dimension("functor does not cover its source".into()));
        }
        for (i, a) in src.quiver.arrows().iter().enumerate() {
            tgt.check_homogeneous(&format!("F({})", a.name), &self.arrows[i], self.objects[a.src], self.objects[a.tgt], a.deg)?;
        }
        let ok = |ds: &[i32]| ds.iter().all(|d| region(*d));
        if let (Some(su), Some(tu)) = (&src.units, &tgt.units) {
            for x in 0..src.num_objects() {
                if ok(&[0]) && self.apply(&su[x]) != tu[self.objects[x]] {
                    return Err(Error::Identity(format!("functor does not preserve the unit of '{}'", src.quiver.objects()[x])));
                }
            }
        }
        for (i, a) in src.quiver.arrows().iter().enumerate() {
            if ok(&[a.deg, a.deg + 1]) && self.apply(&src.diff[i]) != tgt.d(&self.arrows[i]) {
                return Err(Error::Identity(format!("functor does not commute with d on '{}'", a.name)));
            }
        }
        for i in 0..src.dim() {
            for j in 0..src.dim() {
                let (a, b) = (src.arrow(i), src.arrow(j));
                if a.tgt != b.src || !ok(&[a.deg + b.deg]) {
                    continue;
                }
                let lhs = src.mul_basis(i, j).map_or_else(Vector::new, |v| self.apply(v));
                if lhs != tgt.mul(&self.arrows[i], &self.arrows[j]) {
                    return Err(Error::Identity(format!("functor does not preserve the product of '{}' and '{}'", a.name, b.name)));
                }
            }
        }
        for x in 0..src.num_objects() {
            if ok(&[2]) && self.apply(&src.curvature_at(x)) != tgt.curvature_at(self.objects[x]) {
                return Err(Error::Identity(format!("functor does not preserve curvature at '{}'", src.quiver.objects()[x])));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::Prime(3)
    }

    #[test]
    fn ground_field_validates() {
        Category::ground(Field::Rational).validate().unwrap();
    }

    #[test]
    fn zero_category_validates_with_zero_unit() {
        let z = Category::zero(Field::Rational);
        assert!(z.is_zero_category());
        z.validate().unwrap();
    }

    #[test]
    fn zero_unit_elsewhere_is_rejected() {
        let f = Field::Rational;
        let c = Category::new(f, GradedQuiver::unit(), vec![Vector::new()], HashMap::new(), Some(vec![Vector::new()]), None).unwrap();
        assert!(matches!(c.validate(), Err(Error::Structure(m)) if m.contains("missing unit")));
    }

    #[test]
    fn nonclosed_unit_names_object() {
        let f = Field::Rational;
        let q = GradedQuiver::new(vec!["p".into()], vec![Arrow::new("1", 0, 0, 0), Arrow::new("t", 0, 0, 1)]).unwrap();
        let comp = HashMap::from([((1, 1), Vector::new())]);
        let c = Category::with_unit_arrows(f, q, &[0], vec![Vector::unit(1, f), Vector::new()], comp, None).unwrap();
        match c.validate() {
            Err(Error::Identity(m)) => assert!(m.contains("'p'"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dual_numbers_tensor_square() {
        let d = Category::dual_numbers(f3(), 0);
        let t = d.tensor(&d).unwrap();
        assert_eq!(t.num_objects(), 1);
        assert_eq!(t.dim(), 4);
        t.validate().unwrap();
        // (x⊗1)(1⊗x) = x⊗x
        let x1 = Vector::unit(2, f3());
        let one_x = Vector::unit(1, f3());
        assert_eq!(t.mul(&x1, &one_x), Vector::unit(3, f3()));
    }

    #[test]
    fn zero_absorbs_tensor() {
        let f = Field::Rational;
        assert!(Category::zero(f).tensor(&Category::a2(f)).unwrap().is_zero_category());
        assert!(Category::a2(f).tensor(&Category::zero(f)).unwrap().is_zero_category());
    }

    #[test]
    fn ground_tensor_is_identity_up_to_names() {
        let f = Field::Rational;
        let a = Category::a2(f);
        let t = Category::ground(f).tensor(&a).unwrap();
        assert_eq!((t.num_objects(), t.dim()), (2, 3));
        t.validate().unwrap();
        for i in 0..3 {
            assert_eq!(t.deg(i), a.deg(i));
            assert_eq!((t.arrow(i).src, t.arrow(i).tgt), (a.arrow(i).src, a.arrow(i).tgt));
        }
    }

    #[test]
    fn odd_tensor_signs_validate() {
        let f = Field::Rational;
        let d = Category::dual_numbers(f, 1);
        let t = d.tensor(&d).unwrap();
        t.validate().unwrap();
        let (x1, one_x) = (Vector::unit(2, f), Vector::unit(1, f));
        // (1⊗x)(x⊗1) = (−1)^{1·1} x⊗x
        assert_eq!(t.mul(&one_x, &x1), Vector::unit(3, f).neg());
    }

    #[test]
    fn hom_homology_examples() {
        let f = Field::Rational;
        assert_eq!(Category::ground(f).hom_homology(0, 0, -1, 1).unwrap(), BTreeMap::from([(-1, 0), (0, 1), (1, 0)]));
        assert_eq!(Category::zero(f).hom_homology(0, 0, -1, 1).unwrap().values().sum::<usize>(), 0);
        // End = k·1 ⊕ (s → t) with d s = t, |s| = 0, |t| = 1, s and t square-zero
        let q = GradedQuiver::new(
            vec!["o".into()],
            vec![Arrow::new("1", 0, 0, 0), Arrow::new("s", 0, 0, 0), Arrow::new("t", 0, 0, 1)],
        )
        .unwrap();
        let c = Category::with_unit_arrows(f, q, &[0], vec![Vector::new(), Vector::unit(2, f), Vector::new()], HashMap::new(), None)
            .unwrap();
        c.validate().unwrap();
        assert_eq!(c.hom_homology(0, 0, 0, 1).unwrap(), BTreeMap::from([(0, 1), (1, 0)]));
    }

    #[test]
    fn opposite_examples() {
        let f = Field::Rational;
        let a = Category::a2(f);
        let op = a.opposite();
        op.validate().unwrap();
        assert_eq!((op.arrow(2).src, op.arrow(2).tgt), (1, 0));
        let back = op.opposite();
        assert_eq!(back.quiver(), a.quiver());
        assert_eq!(back.comp_table(), a.comp_table());
        let d = Category::dual_numbers(f, 0);
        assert_eq!(d.opposite().comp_table(), d.comp_table());
    }

    #[test]
    fn basis_change_and_rebase() {
        let f = f3();
        let d = Category::dual_numbers(f, 0);
        let basis = vec![Vector::from_pairs([(0, f.one()), (1, f.one())]), Vector::unit(1, f)];
        let c = d.change_basis(&basis, vec!["u".into(), "x".into()]).unwrap();
        c.validate().unwrap();
        assert!(c.unit_indices().is_none());
        let r = c.rebase_units().unwrap();
        r.validate().unwrap();
        assert!(r.unit_indices().is_some());
        assert_eq!(r.hom_homology(0, 0, 0, 0).unwrap()[&0], 2);
    }

    #[test]
    fn curved_category_identity() {
        // k[a]/(a²) with |a| = 1 and curvature 0 is fine; add a degree-2 class h central
        let f = Field::Rational;
        let q = GradedQuiver::new(vec!["o".into()], vec![Arrow::new("1", 0, 0, 0), Arrow::new("h", 0, 0, 2)]).unwrap();
        let c = Category::with_unit_arrows(f, q, &[0], vec![Vector::new(); 2], HashMap::new(), Some(vec![Vector::unit(1, f)]))
            .unwrap();
        c.validate().unwrap();
        assert!(c.is_curved());
        let o = c.opposite();
        o.validate().unwrap();
    }

    #[test]
    fn functor_identity_validates() {
        let a = Category::a2(Field::Prime(2));
        Functor::identity(&a).validate(&a, &a).unwrap();
    }
}
