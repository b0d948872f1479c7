use std::collections::{BTreeMap, HashMap};

use koszul_core::barcobar::Twisting;
use koszul_core::dgcat::{Category, Functor};
use koszul_core::exactla::{Field, Scalar, Vector};
use koszul_core::grquiv::{Arrow, GradedQuiver};
use koszul_core::ptdcoa::Coalgebra;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A coefficient written either as a JSON integer or as a string such as `"-3/2"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coef {
    Int(i64),
    Text(String),
}

impl Coef {
    fn of(s: &Scalar) -> Coef {
        let t = s.to_string();
        t.parse().map(Coef::Int).unwrap_or(Coef::Text(t))
    }

    fn scalar(&self, f: Field) -> Result<Scalar, String> {
        match self {
            Coef::Int(n) => Ok(f.int(*n)),
            Coef::Text(t) => f.parse_scalar(t).map_err(|e| e.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub name: String,
    pub src: String,
    pub tgt: String,
    pub deg: i32,
}

/// `(basis element, coefficient)`.
pub type Term = (String, Coef);
/// `(row, column, coefficient)`: the image of `row` has `coefficient` on `column`.
pub type Triplet = (String, String, Coef);

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategorySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub objects: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowSpec>,
    /// Units that are basis arrows; products with them are filled in.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_arrows: Option<BTreeMap<String, String>>,
    /// Units as linear combinations, for categories whose units are not basis arrows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<BTreeMap<String, Vec<Term>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<Triplet>,
    /// `(a, b, c, coefficient)`: `a` then `b` has `coefficient` on `c`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub composition: Vec<(String, String, String, Coef)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature: Option<BTreeMap<String, Vec<Term>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoalgebraSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub objects: Vec<String>,
    #[serde(default)]
    pub cells: Vec<ArrowSpec>,
    /// `(c, c1, c2, coefficient)` terms of the reduced coproduct of `c`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coproduct: Vec<(String, String, String, Coef)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<Triplet>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curvature: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    pub source: String,
    pub target: String,
    pub objects: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub arrows: Vec<Triplet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSpec {
    pub coalgebra: String,
    pub category: String,
    pub objects: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<Triplet>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_window: Option<(i32, i32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Bound on the number of enumerated objects.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enumeration_cap: Option<usize>,
    /// Bound on the number of free coordinates in an enumeration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_coordinates: Option<usize>,
}

impl Settings {
    fn is_empty(&self) -> bool {
        *self == Settings::default()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Settings::is_empty")]
    pub settings: Settings,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub categories: BTreeMap<String, CategorySpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub coalgebras: BTreeMap<String, CoalgebraSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functors: BTreeMap<String, FunctorSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub mc_elements: BTreeMap<String, McSpec>,
}

#[derive(Clone, Debug)]
pub struct FunctorEntry {
    pub source: String,
    pub target: String,
    pub functor: Functor,
}

#[derive(Clone, Debug)]
pub struct McEntry {
    pub coalgebra: String,
    pub category: String,
    pub twisting: Twisting,
}

/// A fully resolved document.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub field: Field,
    pub settings: Settings,
    pub categories: BTreeMap<String, Category>,
    pub coalgebras: BTreeMap<String, Coalgebra>,
    pub functors: BTreeMap<String, FunctorEntry>,
    pub mc_elements: BTreeMap<String, McEntry>,
}

impl Workspace {
    pub fn empty(field: Field) -> Self {
        Workspace {
            field,
            settings: Settings::default(),
            categories: BTreeMap::new(),
            coalgebras: BTreeMap::new(),
            functors: BTreeMap::new(),
            mc_elements: BTreeMap::new(),
        }
    }

    pub fn category(&self, name: &str) -> Result<&Category, CliError> {
        self.categories.get(name).ok_or_else(|| CliError::Usage(format!("no category named '{name}'")))
    }

    pub fn coalgebra(&self, name: &str) -> Result<&Coalgebra, CliError> {
        self.coalgebras.get(name).ok_or_else(|| CliError::Usage(format!("no coalgebra named '{name}'")))
    }

    pub fn functor(&self, name: &str) -> Result<&FunctorEntry, CliError> {
        self.functors.get(name).ok_or_else(|| CliError::Usage(format!("no functor named '{name}'")))
    }
}

pub fn parse_field(s: &str) -> Result<Field, String> {
    let t = s.trim().to_ascii_lowercase();
    if t == "q" {
        return Ok(Field::Rational);
    }
    let p = t.strip_prefix('f').and_then(|p| p.parse().ok()).ok_or_else(|| format!("unknown field '{s}'"))?;
    Field::prime(p).map_err(|e| e.to_string())
}

pub fn field_name(f: Field) -> String {
    match f {
        Field::Rational => "q".into(),
        Field::Prime(p) => format!("f{p}"),
    }
}

/// Line and column (1-based) of the first `"ident"` after the key of `entity`.
fn locate(text: &str, entity: &str, ident: &str) -> Option<(usize, usize)> {
    let start = text.find(&format!("\"{entity}\"")).unwrap_or(0);
    let at = start + text[start..].find(&format!("\"{ident}\""))?;
    let before = &text[..at];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Some((line, col))
}

struct Resolver<'a> {
    text: Option<&'a str>,
    field: Field,
}

impl Resolver<'_> {
    fn err(&self, entity: &str, ident: &str, msg: String) -> CliError {
        match self.text.and_then(|t| locate(t, entity, ident)) {
            Some((l, c)) => CliError::Parse(format!("{l}:{c}: {entity}: {msg}")),
            None => CliError::Parse(format!("{entity}: {msg}")),
        }
    }

    fn scalar(&self, entity: &str, c: &Coef) -> Result<Scalar, CliError> {
        c.scalar(self.field).map_err(|m| CliError::Parse(format!("{entity}: {m}")))
    }

    fn index(&self, entity: &str, kind: &str, names: &HashMap<&str, usize>, ident: &str) -> Result<usize, CliError> {
        names.get(ident).copied().ok_or_else(|| self.err(entity, ident, format!("undeclared {kind} '{ident}'")))
    }

    fn check_field(&self, entity: &str, declared: &Option<String>) -> Result<(), CliError> {
        if let Some(s) = declared {
            let f = parse_field(s).map_err(|m| CliError::Parse(format!("{entity}: {m}")))?;
            if f != self.field {
                return Err(CliError::Parse(format!("{entity}: declared field {} differs from the document field {}", field_name(f), field_name(self.field))));
            }
        }
        Ok(())
    }

    fn quiver(&self, entity: &str, objects: &[String], arrows: &[ArrowSpec]) -> Result<GradedQuiver, CliError> {
        let obj = names_of(objects);
        let arrows = arrows
            .iter()
            .map(|a| {
                let src = self.index(entity, "object", &obj, &a.src)?;
                let tgt = self.index(entity, "object", &obj, &a.tgt)?;
                Ok(Arrow::new(a.name.clone(), src, tgt, a.deg))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        GradedQuiver::new(objects.to_vec(), arrows).map_err(|e| CliError::Parse(format!("{entity}: {e}")))
    }

    fn vector(&self, entity: &str, kind: &str, names: &HashMap<&str, usize>, terms: &[Term]) -> Result<Vector, CliError> {
        let mut v = Vector::new();
        for (n, c) in terms {
            v.add_at(self.index(entity, kind, names, n)?, &self.scalar(entity, c)?);
        }
        Ok(v)
    }

    fn per_object(
        &self,
        entity: &str,
        objects: &HashMap<&str, usize>,
        arrows: &HashMap<&str, usize>,
        map: &BTreeMap<String, Vec<Term>>,
    ) -> Result<Vec<Vector>, CliError> {
        let mut out = vec![Vector::new(); objects.len()];
        for (o, terms) in map {
            out[self.index(entity, "object", objects, o)?] = self.vector(entity, "arrow", arrows, terms)?;
        }
        Ok(out)
    }

    fn category(&self, name: &str, spec: &CategorySpec) -> Result<Category, CliError> {
        self.check_field(name, &spec.field)?;
        let q = self.quiver(name, &spec.objects, &spec.arrows)?;
        let objects = names_of(&spec.objects);
        let names: Vec<String> = q.names();
        let arrows = names_of(&names);
        let mut diff = vec![Vector::new(); q.dim()];
        for (a, b, c) in &spec.differential {
            let i = self.index(name, "arrow", &arrows, a)?;
            diff[i].add_at(self.index(name, "arrow", &arrows, b)?, &self.scalar(name, c)?);
        }
        let mut comp: HashMap<(usize, usize), Vector> = HashMap::new();
        for (a, b, c, s) in &spec.composition {
            let key = (self.index(name, "arrow", &arrows, a)?, self.index(name, "arrow", &arrows, b)?);
            let k = self.index(name, "arrow", &arrows, c)?;
            comp.entry(key).or_default().add_at(k, &self.scalar(name, s)?);
        }
        let curvature = spec.curvature.as_ref().map(|m| self.per_object(name, &objects, &arrows, m)).transpose()?;
        let built = match (&spec.unit_arrows, &spec.units) {
            (Some(_), Some(_)) => return Err(CliError::Parse(format!("{name}: give either unit_arrows or units"))),
            (Some(u), None) => {
                let mut units = vec![None; q.num_objects()];
                for (o, a) in u {
                    units[self.index(name, "object", &objects, o)?] = Some(self.index(name, "arrow", &arrows, a)?);
                }
                let units = units
                    .into_iter()
                    .enumerate()
                    .map(|(x, u)| u.ok_or_else(|| CliError::Parse(format!("{name}: object '{}' has no unit", spec.objects[x]))))
                    .collect::<Result<Vec<_>, _>>()?;
                Category::with_unit_arrows(self.field, q, &units, diff, comp, curvature)
            }
            (None, Some(u)) => {
                let units = self.per_object(name, &objects, &arrows, u)?;
                Category::new(self.field, q, diff, comp, Some(units), curvature)
            }
            (None, None) => Category::new(self.field, q, diff, comp, None, curvature),
        };
        built.map_err(|e| CliError::Parse(format!("{name}: {e}")))
    }

    fn coalgebra(&self, name: &str, spec: &CoalgebraSpec) -> Result<Coalgebra, CliError> {
        self.check_field(name, &spec.field)?;
        let q = self.quiver(name, &spec.objects, &spec.cells)?;
        let names: Vec<String> = q.names();
        let cells = names_of(&names);
        let mut comult = vec![vec![]; q.dim()];
        for (c, a, b, s) in &spec.coproduct {
            let i = self.index(name, "cell", &cells, c)?;
            comult[i].push((self.index(name, "cell", &cells, a)?, self.index(name, "cell", &cells, b)?, self.scalar(name, s)?));
        }
        let mut diff = vec![Vector::new(); q.dim()];
        for (a, b, c) in &spec.differential {
            let i = self.index(name, "cell", &cells, a)?;
            diff[i].add_at(self.index(name, "cell", &cells, b)?, &self.scalar(name, c)?);
        }
        let curvature = self.vector(name, "cell", &cells, &spec.curvature)?;
        Coalgebra::new(self.field, spec.objects.clone(), q.arrows().to_vec(), comult, diff, curvature)
            .map_err(|e| CliError::Parse(format!("{name}: {e}")))
    }

    fn object_map(
        &self,
        entity: &str,
        src: &GradedQuiver,
        tgt: &GradedQuiver,
        map: &BTreeMap<String, String>,
    ) -> Result<Vec<usize>, CliError> {
        let so = names_of(src.objects());
        let to = names_of(tgt.objects());
        let mut out = vec![None; src.num_objects()];
        for (a, b) in map {
            out[self.index(entity, "source object", &so, a)?] = Some(self.index(entity, "target object", &to, b)?);
        }
        out.into_iter()
            .enumerate()
            .map(|(x, y)| y.ok_or_else(|| CliError::Parse(format!("{entity}: object '{}' is not mapped", src.objects()[x]))))
            .collect()
    }

    fn images(&self, entity: &str, src: &GradedQuiver, tgt: &GradedQuiver, trips: &[Triplet]) -> Result<Vec<Vector>, CliError> {
        let sn = src.names();
        let tn = tgt.names();
        let (sa, ta) = (names_of(&sn), names_of(&tn));
        let mut out = vec![Vector::new(); src.dim()];
        for (a, b, c) in trips {
            let i = self.index(entity, "source basis element", &sa, a)?;
            out[i].add_at(self.index(entity, "target basis element", &ta, b)?, &self.scalar(entity, c)?);
        }
        Ok(out)
    }
}

fn names_of(names: &[String]) -> HashMap<&str, usize> {
    names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect()
}

/// Parse a JSON document. Whitespace-only text is the empty workspace.
/// `field` overrides the declared field.
pub fn parse(text: &str, field: Option<Field>) -> Result<Workspace, CliError> {
    let doc: Document = if text.trim().is_empty() {
        Document::default()
    } else {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{}:{}: {e}", e.line(), e.column())))?
    };
    resolve(&doc, Some(text), field)
}

pub fn resolve(doc: &Document, text: Option<&str>, field: Option<Field>) -> Result<Workspace, CliError> {
    let declared = doc.field.as_deref().map(parse_field).transpose().map_err(CliError::Parse)?;
    let field = field.or(declared).unwrap_or(Field::Rational);
    let r = Resolver { text, field };
    let mut ws = Workspace::empty(field);
    ws.settings = doc.settings.clone();
    if let Some(m) = &ws.settings.mode {
        crate::commands::parse_mode(m).map_err(CliError::Parse)?;
    }
    for (name, spec) in &doc.categories {
        ws.categories.insert(name.clone(), r.category(name, spec)?);
    }
    for (name, spec) in &doc.coalgebras {
        ws.coalgebras.insert(name.clone(), r.coalgebra(name, spec)?);
    }
    for (name, spec) in &doc.functors {
        let src = ws.categories.get(&spec.source).ok_or_else(|| r.err(name, &spec.source, format!("undeclared category '{}'", spec.source)))?;
        let tgt = ws.categories.get(&spec.target).ok_or_else(|| r.err(name, &spec.target, format!("undeclared category '{}'", spec.target)))?;
        let objects = r.object_map(name, src.quiver(), tgt.quiver(), &spec.objects)?;
        let arrows = r.images(name, src.quiver(), tgt.quiver(), &spec.arrows)?;
        let functor = Functor { objects, arrows };
        ws.functors.insert(name.clone(), FunctorEntry { source: spec.source.clone(), target: spec.target.clone(), functor });
    }
    for (name, spec) in &doc.mc_elements {
        let c = ws.coalgebras.get(&spec.coalgebra).ok_or_else(|| r.err(name, &spec.coalgebra, format!("undeclared coalgebra '{}'", spec.coalgebra)))?;
        let d = ws.categories.get(&spec.category).ok_or_else(|| r.err(name, &spec.category, format!("undeclared category '{}'", spec.category)))?;
        let objects = r.object_map(name, c.quiver(), d.quiver(), &spec.objects)?;
        let values = r.images(name, c.quiver(), d.quiver(), &spec.values)?;
        let twisting = Twisting { objects, values };
        ws.mc_elements.insert(name.clone(), McEntry { coalgebra: spec.coalgebra.clone(), category: spec.category.clone(), twisting });
    }
    Ok(ws)
}

fn arrow_specs(q: &GradedQuiver) -> Vec<ArrowSpec> {
    let o = q.objects();
    q.arrows()
        .iter()
        .map(|a| ArrowSpec { name: a.name.clone(), src: o[a.src].clone(), tgt: o[a.tgt].clone(), deg: a.deg })
        .collect()
}

fn terms(v: &Vector, names: &[String]) -> Vec<Term> {
    v.iter().map(|(i, c)| (names[*i].clone(), Coef::of(c))).collect()
}

fn triplets(rows: &[Vector], row_names: &[String], col_names: &[String]) -> Vec<Triplet> {
    rows.iter()
        .enumerate()
        .flat_map(|(i, v)| v.iter().map(move |(j, c)| (row_names[i].clone(), col_names[*j].clone(), Coef::of(c))))
        .collect()
}

pub fn category_spec(d: &Category) -> CategorySpec {
    let q = d.quiver();
    let names = q.names();
    let objects = q.objects();
    let unit_idx = d.unit_indices();
    let mut spec = CategorySpec {
        field: None,
        objects: objects.to_vec(),
        arrows: arrow_specs(q),
        differential: triplets(&(0..d.dim()).map(|i| d.diff_of(i).clone()).collect::<Vec<_>>(), &names, &names),
        ..CategorySpec::default()
    };
    let is_filled = |a: usize, b: usize, v: &Vector| -> bool {
        let Some(u) = &unit_idx else { return false };
        (u.contains(&a) && *v == Vector::unit(b, d.field())) || (u.contains(&b) && *v == Vector::unit(a, d.field()))
    };
    match &unit_idx {
        Some(u) => spec.unit_arrows = Some(u.iter().enumerate().map(|(x, a)| (objects[x].clone(), names[*a].clone())).collect()),
        None => {
            spec.units = d.units().map(|u| u.iter().enumerate().map(|(x, v)| (objects[x].clone(), terms(v, &names))).collect());
        }
    }
    let mut keys: Vec<&(usize, usize)> = d.comp_table().keys().collect();
    keys.sort();
    for (a, b) in keys {
        let v = &d.comp_table()[&(*a, *b)];
        if is_filled(*a, *b, v) {
            continue;
        }
        for (c, s) in v {
            spec.composition.push((names[*a].clone(), names[*b].clone(), names[*c].clone(), Coef::of(s)));
        }
    }
    spec.curvature = d.curvature().map(|h| h.iter().enumerate().map(|(x, v)| (objects[x].clone(), terms(v, &names))).collect());
    spec
}

pub fn coalgebra_spec(c: &Coalgebra) -> CoalgebraSpec {
    let names = c.names();
    let mut coproduct = vec![];
    for i in 0..c.dim() {
        for (a, b, s) in c.delta_bar(i) {
            coproduct.push((names[i].clone(), names[*a].clone(), names[*b].clone(), Coef::of(s)));
        }
    }
    CoalgebraSpec {
        field: None,
        objects: c.objects().to_vec(),
        cells: arrow_specs(c.quiver()),
        coproduct,
        differential: triplets(c.diffs(), &names, &names),
        curvature: terms(c.curvature(), &names),
    }
}

fn object_map_spec(map: &[usize], src: &GradedQuiver, tgt: &GradedQuiver) -> BTreeMap<String, String> {
    map.iter().enumerate().map(|(x, y)| (src.objects()[x].clone(), tgt.objects()[*y].clone())).collect()
}

pub fn mc_spec(coalgebra: &str, category: &str, c: &Coalgebra, d: &Category, xi: &Twisting) -> McSpec {
    McSpec {
        coalgebra: coalgebra.into(),
        category: category.into(),
        objects: object_map_spec(&xi.objects, c.quiver(), d.quiver()),
        values: triplets(&xi.values, &c.names(), &d.quiver().names()),
    }
}

/// The canonical document of a workspace.
pub fn print(ws: &Workspace) -> Document {
    let mut doc = Document { field: Some(field_name(ws.field)), settings: ws.settings.clone(), ..Document::default() };
    for (n, d) in &ws.categories {
        doc.categories.insert(n.clone(), category_spec(d));
    }
    for (n, c) in &ws.coalgebras {
        doc.coalgebras.insert(n.clone(), coalgebra_spec(c));
    }
    for (n, f) in &ws.functors {
        let (src, tgt) = (&ws.categories[&f.source], &ws.categories[&f.target]);
        doc.functors.insert(
            n.clone(),
            FunctorSpec {
                source: f.source.clone(),
                target: f.target.clone(),
                objects: object_map_spec(&f.functor.objects, src.quiver(), tgt.quiver()),
                arrows: triplets(&f.functor.arrows, &src.quiver().names(), &tgt.quiver().names()),
            },
        );
    }
    for (n, m) in &ws.mc_elements {
        let (c, d) = (&ws.coalgebras[&m.coalgebra], &ws.categories[&m.category]);
        doc.mc_elements.insert(n.clone(), mc_spec(&m.coalgebra, &m.category, c, d, &m.twisting));
    }
    doc
}

pub fn print_text(ws: &Workspace) -> String {
    serde_json::to_string_pretty(&print(ws)).expect("documents serialize")
}
