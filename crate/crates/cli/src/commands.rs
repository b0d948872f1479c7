use std::collections::BTreeMap;

use koszul_core::barcobar::{adjunction_check, bar, cobar, Bar};
use koszul_core::convmc::{ez_compare, ez_map, internal_hom, mc_category, mc_check, mc_enumerate, Convolution};
use koszul_core::dgcat::{Caps, Category, Functor};
use koszul_core::hochschild::{hh_cohomology, hh_vs_mc, Coefficients, Mode};
use koszul_core::ptdcoa::{Body, Coalgebra, Pointed};
use serde_json::{json, Value};

use crate::document::{category_spec, coalgebra_spec, field_name, mc_spec, Document, Workspace};
use crate::error::CliError;
use crate::report::{Report, Status};

pub const COMMANDS: [&str; 12] =
    ["validate", "bar", "cobar", "materialize", "adjoint-check", "conv", "mc-enum", "mc-cat", "ihom", "ez-check", "hh", "hh-vs-mc"];

/// Command-line overrides of the document settings.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub weight_cap: Option<usize>,
    pub degree_window: Option<(i32, i32)>,
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
}

pub fn parse_mode(s: &str) -> Result<Mode, String> {
    match s.trim() {
        "exact" => Ok(Mode::Exact),
        t => t
            .strip_prefix("stabilize:")
            .and_then(|w| w.parse().ok())
            .map(Mode::Stabilize)
            .ok_or_else(|| format!("mode must be 'exact' or 'stabilize:W', got '{s}'")),
    }
}

pub fn parse_window(s: &str) -> Result<(i32, i32), String> {
    let bad = || format!("degree window must look like a..b, got '{s}'");
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let (a, b) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

struct Ctx<'a> {
    ws: &'a Workspace,
    weight: usize,
    window: (i32, i32),
    mode: Mode,
    cap: usize,
    coords: usize,
    seed: Option<u64>,
}

impl<'a> Ctx<'a> {
    fn new(ws: &'a Workspace, opts: &Options) -> Result<Self, CliError> {
        let s = &ws.settings;
        let mode = match (&opts.mode, &s.mode) {
            (Some(m), _) => *m,
            (None, Some(m)) => parse_mode(m).map_err(CliError::Parse)?,
            (None, None) => Mode::Exact,
        };
        Ok(Ctx {
            ws,
            weight: opts.weight_cap.or(s.weight_cap).unwrap_or(4),
            window: opts.degree_window.or(s.degree_window).unwrap_or((0, 4)),
            mode,
            cap: s.enumeration_cap.unwrap_or(100_000),
            coords: s.max_coordinates.unwrap_or(16),
            seed: opts.seed.or(s.seed),
        })
    }
}

fn arg<'a>(args: &'a [String], k: usize, what: &str) -> Result<&'a str, CliError> {
    args.get(k).map(String::as_str).ok_or_else(|| CliError::Usage(format!("missing {what}")))
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Failed
    }
}

fn outcome(r: koszul_core::Result<()>) -> Value {
    match r {
        Ok(()) => json!({"ok": true}),
        Err(e) => json!({"ok": false, "error": e.to_string()}),
    }
}

fn hom_dims(d: &Category) -> Vec<Value> {
    let q = d.quiver();
    let mut counts: BTreeMap<(usize, usize, i32), usize> = BTreeMap::new();
    for a in q.arrows() {
        *counts.entry((a.src, a.tgt, a.deg)).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|((x, y, n), k)| json!({"src": q.objects()[x], "tgt": q.objects()[y], "deg": n, "dim": k}))
        .collect()
}

fn cell_dims(c: &Coalgebra) -> Vec<Value> {
    let q = c.quiver();
    let mut counts: BTreeMap<(usize, usize, i32), usize> = BTreeMap::new();
    for a in q.arrows() {
        *counts.entry((a.src, a.tgt, a.deg)).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|((x, y, n), k)| json!({"src": q.objects()[x], "tgt": q.objects()[y], "deg": n, "dim": k}))
        .collect()
}

fn homology(d: &Category, lo: i32, hi: i32, degrees: impl Fn(usize, usize) -> Vec<i32>) -> Result<Vec<Value>, CliError> {
    let q = d.quiver();
    let mut out = vec![];
    for x in 0..d.num_objects() {
        for y in 0..d.num_objects() {
            let keep = degrees(x, y);
            for (n, k) in d.hom_homology(x, y, lo, hi)? {
                if keep.contains(&n) {
                    out.push(json!({"src": q.objects()[x], "tgt": q.objects()[y], "deg": n, "dim": k}));
                }
            }
        }
    }
    Ok(out)
}

pub fn run(command: &str, args: &[String], ws: &Workspace, opts: &Options) -> Result<Report, CliError> {
    let cx = Ctx::new(ws, opts)?;
    match command {
        "validate" => validate(&cx, args),
        "bar" => run_bar(&cx, arg(args, 0, "category")?),
        "cobar" => run_cobar(&cx, arg(args, 0, "coalgebra")?),
        "materialize" => materialize(&cx, arg(args, 0, "category or coalgebra")?),
        "adjoint-check" => {
            let (c, d) = (ws.coalgebra(arg(args, 0, "coalgebra")?)?, ws.category(arg(args, 1, "category")?)?);
            let r = adjunction_check(c, d, cx.coords, cx.cap)?;
            let body = json!({
                "functors": r.functors, "mc_elements": r.mc_elements, "morphisms": r.morphisms,
                "bar_weight": r.bar_weight, "transports_inverse": r.transports_inverse, "holds": r.holds(),
            });
            Ok(Report::new(command, status(r.holds()), body))
        }
        "conv" => conv(&cx, args),
        "mc-enum" => {
            let (cn, dn) = (arg(args, 0, "coalgebra")?, arg(args, 1, "category")?);
            let (c, d) = (ws.coalgebra(cn)?, ws.category(dn)?);
            let all = mc_enumerate(c, d, cx.coords, cx.cap)?;
            let elements: Vec<Value> = all.iter().map(|xi| serde_json::to_value(mc_spec(cn, dn, c, d, xi)).unwrap()).collect();
            Ok(Report::new(command, Status::Ok, json!({"count": all.len(), "elements": elements})))
        }
        "mc-cat" => {
            let (c, d) = (ws.coalgebra(arg(args, 0, "coalgebra")?)?, ws.category(arg(args, 1, "category")?)?);
            let objects = mc_enumerate(c, d, cx.coords, cx.cap)?;
            let mc = mc_category(c, d, objects)?;
            let m = mc.category();
            let valid = m.validate();
            let ok = valid.is_ok();
            let (lo, hi) = cx.window;
            let body = json!({
                "objects": m.num_objects(), "arrows": m.dim(), "valid": outcome(valid),
                "homology": homology(m, lo, hi, |_, _| (lo..=hi).collect())?,
            });
            Ok(Report::new(command, status(ok), body))
        }
        "ihom" => {
            let (c, d) = (ws.coalgebra(arg(args, 0, "coalgebra")?)?, ws.category(arg(args, 1, "category")?)?);
            let p = internal_hom(&Pointed::Coalgebra(c.clone()), d, cx.coords, cx.cap, cx.weight)?;
            Ok(pointed_report(command, &p, cx.weight))
        }
        "ez-check" => ez_check(&cx, args),
        "hh" => hh(&cx, args),
        "hh-vs-mc" => {
            let d = ws.category(arg(args, 0, "category")?)?;
            let id = Functor::identity(d);
            let coeffs = Coefficients { target: d, left: &id, right: &id };
            let (lo, hi) = cx.window;
            let (a, b) = hh_vs_mc(d, &coeffs, lo, hi)?;
            let degrees: Vec<Value> = a.iter().map(|(n, k)| json!({"deg": n, "hh": k, "mc": b.get(n).copied()})).collect();
            Ok(Report::new(command, status(a == b), json!({"degrees": degrees, "agrees": a == b})))
        }
        other => Err(CliError::Usage(format!("unknown command '{other}'; expected one of {}", COMMANDS.join(", ")))),
    }
}

fn validate(cx: &Ctx, names: &[String]) -> Result<Report, CliError> {
    let ws = cx.ws;
    let wanted = |n: &str| names.is_empty() || names.iter().any(|m| m == n);
    let mut entries = vec![];
    for (n, d) in ws.categories.iter().filter(|(n, _)| wanted(n)) {
        entries.push(("category", n, d.validate()));
    }
    for (n, c) in ws.coalgebras.iter().filter(|(n, _)| wanted(n)) {
        entries.push(("coalgebra", n, c.validate()));
    }
    for (n, f) in ws.functors.iter().filter(|(n, _)| wanted(n)) {
        entries.push(("functor", n, f.functor.validate(&ws.categories[&f.source], &ws.categories[&f.target])));
    }
    for (n, m) in ws.mc_elements.iter().filter(|(n, _)| wanted(n)) {
        let r = mc_check(&ws.coalgebras[&m.coalgebra], &ws.categories[&m.category], &m.twisting).and_then(|(ok, _)| {
            if ok {
                Ok(())
            } else {
                Err(koszul_core::Error::NotMaurerCartan(format!("'{n}' has a nonzero residual")))
            }
        });
        entries.push(("mc_element", n, r));
    }
    let found: Vec<&str> = entries.iter().map(|(_, n, _)| n.as_str()).collect();
    if let Some(missing) = names.iter().find(|n| !found.contains(&n.as_str())) {
        return Err(CliError::Usage(format!("no entity named '{missing}'")));
    }
    let failed = entries.iter().filter(|(_, _, r)| r.is_err()).count();
    let list: Vec<Value> = entries
        .into_iter()
        .map(|(kind, n, r)| {
            let mut v = json!({"kind": kind, "name": n});
            let o = outcome(r);
            v["ok"] = o["ok"].clone();
            if let Some(e) = o.get("error") {
                v["error"] = e.clone();
            }
            v
        })
        .collect();
    let body = json!({"field": field_name(ws.field), "checked": list.len(), "failed": failed, "entities": list});
    Ok(Report::new("validate", status(failed == 0), body))
}

fn pointed_report(command: &str, p: &Pointed, weight: usize) -> Report {
    match p {
        Pointed::Final => Report::new(command, Status::Ok, json!({"final": true, "weight_cap": weight})),
        Pointed::Coalgebra(c) => {
            let v = c.validate();
            let ok = v.is_ok();
            let body = json!({
                "final": false, "weight_cap": weight, "objects": c.num_objects(), "cells": c.dim(),
                "curved": c.is_curved(), "valid": outcome(v), "slots": cell_dims(c),
            });
            Report::new(command, status(ok), body)
        }
    }
}

fn run_bar(cx: &Ctx, name: &str) -> Result<Report, CliError> {
    let d = cx.ws.category(name)?;
    let seeded = match cx.seed {
        Some(seed) if d.num_objects() > 0 && d.unit_indices().is_some() => {
            let (complement, names) = koszul_core::random::splitting(&mut koszul_core::random::rng(seed), d);
            Some(Bar::with_complement(d, &complement, names)?)
        }
        _ => None,
    };
    let p = match &seeded {
        Some(b) => Pointed::Coalgebra(b.materialize(cx.weight)?.coalgebra),
        None => bar(d, cx.weight)?,
    };
    let mut r = pointed_report("bar", &p, cx.weight);
    if let Some(seed) = cx.seed {
        r.body["splitting_seed"] = seed.into();
    }
    if !p.is_final() && d.num_objects() > 0 {
        let words = match seeded {
            Some(b) => b.materialize(cx.weight)?,
            None => Bar::new(d)?.materialize(cx.weight)?,
        };
        let mut by_weight: BTreeMap<usize, usize> = BTreeMap::new();
        for w in &words.words {
            *by_weight.entry(w.len()).or_default() += 1;
        }
        r.body["words_by_length"] = by_weight.into_iter().map(|(l, k)| json!({"length": l, "count": k})).collect();
    }
    Ok(r)
}

fn run_cobar(cx: &Ctx, name: &str) -> Result<Report, CliError> {
    let c = cx.ws.coalgebra(name)?;
    let omega = cobar(c, &Caps::length(cx.weight))?;
    let m = &omega.category;
    let valid = m.validate_in(&omega.region());
    let ok = valid.is_ok();
    let (lo, hi) = cx.window;
    let exact = omega.exact_degrees(lo, hi);
    let body = json!({
        "length_cap": cx.weight, "objects": m.num_objects(), "arrows": m.dim(), "curved": m.is_curved(),
        "valid": outcome(valid), "exact_degrees": exact,
        "homology": if m.is_curved() { vec![] } else { homology(m, lo, hi, |_, _| exact.clone())? },
    });
    Ok(Report::new("cobar", status(ok), body))
}

fn materialize(cx: &Ctx, name: &str) -> Result<Report, CliError> {
    let ws = cx.ws;
    let mut doc = Document { field: Some(field_name(ws.field)), ..Document::default() };
    if let Some(d) = ws.categories.get(name) {
        match bar(d, cx.weight)? {
            Pointed::Coalgebra(c) => {
                doc.coalgebras.insert(format!("B({name})"), coalgebra_spec(&c));
            }
            Pointed::Final => return Ok(Report::new("materialize", Status::Ok, json!({"final": true}))),
        }
    } else if let Some(c) = ws.coalgebras.get(name) {
        let omega = cobar(c, &Caps::length(cx.weight))?;
        doc.categories.insert(format!("Ω({name})"), category_spec(&omega.category));
    } else {
        return Err(CliError::Usage(format!("no category or coalgebra named '{name}'")));
    }
    Ok(Report::new("materialize", Status::Ok, serde_json::to_value(doc).unwrap()))
}

fn conv(cx: &Ctx, args: &[String]) -> Result<Report, CliError> {
    let (c, d) = (cx.ws.coalgebra(arg(args, 0, "coalgebra")?)?, cx.ws.category(arg(args, 1, "category")?)?);
    let mut body = serde_json::Map::new();
    let mut ok = true;
    for (side, b) in [("counital", Body::full(c)), ("reduced", Body::reduced(c))] {
        let v = match Convolution::new(&b, d, cx.cap) {
            Ok(conv) => {
                let m = &conv.category;
                let valid = m.validate();
                ok &= valid.is_ok();
                json!({
                    "objects": m.num_objects(), "arrows": m.dim(), "curved": m.is_curved(),
                    "unital": m.units().is_some(), "valid": outcome(valid), "slots": hom_dims(m),
                })
            }
            Err(e @ koszul_core::Error::Undefined(_)) => json!({"undefined": e.to_string()}),
            Err(e) => return Err(e.into()),
        };
        body.insert(side.into(), v);
    }
    Ok(Report::new("conv", status(ok), Value::Object(body)))
}

fn ez_check(cx: &Ctx, args: &[String]) -> Result<Report, CliError> {
    let (c, c2) = (cx.ws.coalgebra(arg(args, 0, "coalgebra")?)?, cx.ws.coalgebra(arg(args, 1, "coalgebra")?)?);
    let graded = c.is_curved() || c2.is_curved();
    let map = ez_map(c, c2, cx.weight)?;
    let chain = map.verify();
    let chain_ok = chain.is_ok();
    let (lo, hi) = cx.window;
    let r = ez_compare(c, c2, lo, hi, cx.weight, graded)?;
    let objects = c.tensor(c2)?.objects().to_vec();
    let dims: Vec<Value> = r
        .dims
        .iter()
        .map(|((x, y, n), (s, t, k))| json!({"src": objects[*x], "tgt": objects[*y], "deg": n, "source": s, "target": t, "rank": k}))
        .collect();
    let body = json!({
        "associated_graded": graded, "functor_and_chain_map": outcome(chain), "exact_degrees": r.exact,
        "dims": dims, "dims_equal_on_window": r.agrees(),
    });
    let s = if r.exact.is_empty() {
        Status::Refused
    } else {
        status(chain_ok && r.agrees())
    };
    Ok(Report::new("ez-check", s, body))
}

fn hh(cx: &Ctx, args: &[String]) -> Result<Report, CliError> {
    let ws = cx.ws;
    let d = ws.category(arg(args, 0, "category")?)?;
    let id = Functor::identity(d);
    let (target, left, right) = match args.len() {
        1 => (d, &id, &id),
        4 => {
            let (l, r) = (ws.functor(&args[2])?, ws.functor(&args[3])?);
            if l.target != args[1] || r.target != args[1] || l.source != args[0] || r.source != args[0] {
                return Err(CliError::Usage("coefficient functors must go from the category to the target".into()));
            }
            (ws.category(&args[1])?, &l.functor, &r.functor)
        }
        _ => return Err(CliError::Usage("hh takes CATEGORY or CATEGORY TARGET LEFT RIGHT".into())),
    };
    let coeffs = Coefficients { target, left, right };
    let (lo, hi) = cx.window;
    let mut body = serde_json::Map::new();
    let mut reports = vec![];
    for reduced in [true, false] {
        reports.push(hh_cohomology(d, &coeffs, lo, hi, cx.mode, reduced)?);
    }
    let dims: Vec<Value> = reports[0].dims.iter().map(|(n, k)| json!({"deg": n, "dim": k})).collect();
    body.insert("dims".into(), dims.into());
    body.insert("max_weight".into(), reports[0].max_weight.into());
    body.insert("reduced_equals_unreduced".into(), (reports[0].dims == reports[1].dims).into());
    if let Some(next) = &reports[0].next {
        body.insert("next".into(), next.iter().map(|(n, k)| json!({"deg": n, "dim": k})).collect::<Vec<_>>().into());
        body.insert("stable".into(), reports[0].stable().into());
    }
    let s = if !reports[0].stable() {
        Status::Refused
    } else {
        status(reports[0].dims == reports[1].dims)
    };
    Ok(Report::new("hh", s, Value::Object(body)))
}
