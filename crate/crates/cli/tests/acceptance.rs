//! One line per acceptance criterion. Set `KOSZUL_SEED` to rerun the random
//! parts with another seed.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use koszul_cli::{parse, Workspace};
use koszul_core::barcobar::{adjunction_check, cobar, counit, Bar};
use koszul_core::convmc::{ez_compare, ez_map, interchange, tensor_hom_check, Side};
use koszul_core::dgcat::{Caps, Category, Functor};
use koszul_core::exactla::{Field, SparseMatrix};
use koszul_core::hochschild::{hh_cohomology, hh_vs_mc, Coefficients, Mode};
use koszul_core::ptdcoa::Coalgebra;
use koszul_core::random;

const FIELDS: [Field; 4] = [Field::Prime(2), Field::Prime(3), Field::Prime(5), Field::Rational];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn seed() -> u64 {
    std::env::var("KOSZUL_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(random::DEFAULT_SEED)
}

fn corpus() -> Vec<Workspace> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|e| e == "json")).collect();
    files.sort();
    files.iter().map(|f| parse(&std::fs::read_to_string(f).unwrap(), None).unwrap()).collect()
}

struct Suite {
    categories: Vec<Category>,
    coalgebras: Vec<Coalgebra>,
}

fn random_suite(seed: u64) -> Suite {
    let mut rng = random::rng(seed);
    let categories = (0..200).map(|k| random::category(&mut rng, FIELDS[k % 4], 4, true)).collect();
    let coalgebras = (0..200).map(|k| random::coalgebra(&mut rng, FIELDS[k % 4], 4)).collect();
    Suite { categories, coalgebras }
}

fn within(t: Duration, limit: u64) -> bool {
    t < Duration::from_secs(limit)
}

fn axiom_suites(corpus: &[Workspace], suite: &Suite) -> Outcome {
    let start = Instant::now();
    let mut failures = vec![];
    let (mut cats, mut coas, mut curved) = (0, 0, 0);
    for ws in corpus {
        for (n, d) in &ws.categories {
            cats += 1;
            if let Err(e) = d.validate() {
                failures.push(format!("{n}: {e}"));
            }
        }
        for (n, c) in &ws.coalgebras {
            coas += 1;
            curved += usize::from(c.is_curved());
            if let Err(e) = c.validate() {
                failures.push(format!("{n}: {e}"));
            }
        }
    }
    for (k, d) in suite.categories.iter().enumerate() {
        if let Err(e) = d.validate() {
            failures.push(format!("random category {k}: {e}"));
        }
    }
    for (k, c) in suite.coalgebras.iter().enumerate() {
        if let Err(e) = c.validate() {
            failures.push(format!("random coalgebra {k}: {e}"));
        }
    }
    let t = start.elapsed();
    let sizes = cats >= 10 && coas >= 10 && curved >= 1;
    let pass = failures.is_empty() && sizes && suite.categories.len() >= 200 && suite.coalgebras.len() >= 200 && within(t, 30);
    outcome(
        pass,
        format!(
            "corpus {cats} categories, {coas} coalgebras ({curved} curved); random 200 + 200; {} failures; {:.2?}{}",
            failures.len(),
            t,
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

fn bar_cobar_squares(suite: &Suite, seed: u64) -> Outcome {
    let start = Instant::now();
    let mut rng = random::rng(seed ^ 2);
    let (mut bars, mut curved_bars, mut curved_inputs, mut cobars) = (0, 0, 0, 0);
    let mut failures = vec![];
    for (k, d) in suite.categories.iter().enumerate() {
        if d.is_curved() {
            curved_inputs += 1;
            continue;
        }
        let (complement, names) = random::splitting(&mut rng, d);
        let r = Bar::with_complement(d, &complement, names).and_then(|b| b.materialize(3)).and_then(|bw| {
            curved_bars += usize::from(bw.coalgebra.is_curved());
            bw.coalgebra.validate()
        });
        bars += 1;
        if let Err(e) = r {
            failures.push(format!("bar of random category {k}: {e}"));
        }
    }
    for (k, c) in suite.coalgebras.iter().enumerate() {
        let r = cobar(c, &Caps::length(3)).and_then(|o| o.category.validate_in(&o.region()));
        cobars += 1;
        if let Err(e) = r {
            failures.push(format!("cobar of random coalgebra {k}: {e}"));
        }
    }
    let t = start.elapsed();
    outcome(
        failures.is_empty() && within(t, 60),
        format!(
            "{bars} bars ({curved_bars} curved, random splittings; {curved_inputs} curved inputs have no bar), {cobars} cobars; {} failures; {:.2?}{}",
            failures.len(),
            t,
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

fn koszul_adjunction(seed: u64) -> Outcome {
    let mut rng = random::rng(seed ^ 3);
    let f = Field::Prime(2);
    let (mut checked, mut nontrivial, mut skipped) = (0, 0, 0);
    let mut failures = vec![];
    while checked < 60 && skipped < 200 {
        let c = random::coalgebra(&mut rng, f, 3);
        let d = random::category(&mut rng, f, 3, false);
        match adjunction_check(&c, &d, 12, 4096) {
            Ok(r) => {
                checked += 1;
                nontrivial += usize::from(r.functors > 1);
                if !r.holds() {
                    failures.push(format!("{r:?}"));
                }
            }
            Err(_) => skipped += 1,
        }
    }
    outcome(
        failures.is_empty() && checked >= 50,
        format!("{checked} F2 pairs ({nontrivial} with several morphisms, {skipped} over caps); {} mismatches", failures.len()),
    )
}

fn counit_homology() -> Outcome {
    let cases: [(&str, Category, i32, i32, usize); 3] = [
        ("k", Category::ground(Field::Rational), -2, 2, 2),
        ("A2", Category::a2(Field::Rational), -2, 1, 2),
        ("dual numbers/F3", Category::dual_numbers(Field::Prime(3), 0), -2, 2, 3),
    ];
    let mut pass = true;
    let mut parts = vec![];
    for (name, d, lo, hi, w) in cases {
        match counit(&d, lo, hi, w) {
            Ok(c) => {
                let declared: Vec<i32> = (lo..=hi).collect();
                let ok = c.exact == declared
                    && c.source_homology.iter().all(|(k, h)| declared.iter().all(|n| h[n] == c.target_homology[k][n]));
                pass &= ok;
                parts.push(format!("{name} on [{lo},{hi}] {}", if ok { "matches" } else { "differs" }));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn tensor_hom(seed: u64) -> Outcome {
    let mut rng = random::rng(seed ^ 5);
    let f = Field::Prime(2);
    let (mut checked, mut skipped) = (0, 0);
    let mut failures = vec![];
    while checked < 30 && skipped < 200 {
        let c = random::coalgebra(&mut rng, f, 2);
        let c2 = random::coalgebra(&mut rng, f, 2);
        let d = random::category(&mut rng, f, 3, false);
        match tensor_hom_check(&c, &c2, &d, 12, 4096) {
            Ok(r) => {
                checked += 1;
                if !r.holds() {
                    failures.push(format!("{r:?}"));
                }
            }
            Err(_) => skipped += 1,
        }
    }
    outcome(
        failures.is_empty() && checked >= 25,
        format!("{checked} F2 instances, MC two-stage counts included ({skipped} over caps); {} mismatches", failures.len()),
    )
}

fn ez_comparison(corpus: &[Workspace]) -> Outcome {
    let find = |a: &str, b: &str| {
        let ws = corpus
            .iter()
            .find(|ws| ws.coalgebras.contains_key(a) && ws.coalgebras.contains_key(b))
            .unwrap_or_else(|| panic!("no corpus document holds both '{a}' and '{b}'"));
        (&ws.coalgebras[a], &ws.coalgebras[b])
    };
    let flat_pairs = [("p1", "p2"), ("prim1", "prim1"), ("prim0", "prim1"), ("divided", "prim2"), ("arrow", "prim1"), ("path3", "prim2")];
    let mut pass = true;
    let mut parts = vec![];
    for (a, b) in flat_pairs {
        let (c, c2) = find(a, b);
        let chain = ez_map(c, c2, 4).and_then(|m| m.verify());
        let r = ez_compare(c, c2, 0, 3, 4, false);
        let ok = chain.is_ok() && r.as_ref().is_ok_and(|r| !r.exact.is_empty() && r.agrees());
        pass &= ok;
        if !ok {
            parts.push(format!("{a}⊗{b} fails: {chain:?} {:?}", r.map(|r| r.exact)));
        }
    }
    parts.insert(0, format!("{} uncurved pairs", flat_pairs.len()));
    let ws = corpus.iter().find(|ws| ws.coalgebras.contains_key("w") && ws.coalgebras.contains_key("v")).unwrap();
    let (w, v) = (&ws.coalgebras["w"], &ws.coalgebras["v"]);
    let chain = ez_map(w, v, 5).and_then(|m| m.verify());
    let graded = ez_compare(w, v, -4, 0, 5, true);
    let ok = chain.is_ok() && graded.as_ref().is_ok_and(|r| !r.exact.is_empty() && r.agrees());
    pass &= ok;
    parts.push(format!("curved pair on associated graded {}", if ok { "agrees" } else { "differs" }));
    outcome(pass, parts.join("; "))
}

/// `HH*(k[x]/x²)` from the 2-periodic resolution: the cochains are `A` in
/// every degree; the differential out of degree `n` is `0` for even `n` and
/// multiplication by `2x` for odd `n`.
fn periodic_oracle(f: Field, degrees: usize) -> Vec<usize> {
    let zero = SparseMatrix::zero(2, 2, f);
    let two_x = SparseMatrix::from_triplets(2, 2, f, &[(1, 0, f.int(2))]).unwrap();
    let d = |n: usize| if n.is_multiple_of(2) { zero.clone() } else { two_x.clone() };
    (0..degrees)
        .map(|n| {
            let kernel = 2 - d(n).rank();
            let image = if n == 0 { 0 } else { d(n - 1).rank() };
            kernel - image
        })
        .collect()
}

fn dims(d: &Category, lo: i32, hi: i32, reduced: bool) -> koszul_core::Result<Vec<usize>> {
    let id = Functor::identity(d);
    let c = Coefficients { target: d, left: &id, right: &id };
    Ok(hh_cohomology(d, &c, lo, hi, Mode::Exact, reduced)?.dims.into_values().collect())
}

fn hochschild(corpus: &[Workspace], seed: u64) -> Outcome {
    let start = Instant::now();
    let mut parts = vec![];
    let dual = Category::dual_numbers(Field::Prime(3), 0);
    let oracle = periodic_oracle(Field::Prime(3), 5);
    let got = dims(&dual, 0, 4, true);
    let mut pass = oracle == vec![2, 1, 1, 1, 1] && got.as_ref() == Ok(&oracle);
    parts.push(format!("dual numbers/F3 {got:?} vs oracle {oracle:?}"));
    let a2 = dims(&Category::a2(Field::Rational), 0, 4, true);
    pass &= a2.as_ref() == Ok(&vec![1, 0, 0, 0, 0]);
    parts.push(format!("A2 {a2:?}"));

    let mut rng = random::rng(seed ^ 7);
    let mut windows = 0;
    let mut mismatches = 0;
    let mut instances: Vec<Category> = (0..30).map(|k| random::category(&mut rng, FIELDS[k % 4], 3, false)).collect();
    instances.extend(corpus.iter().flat_map(|ws| ws.categories.values().cloned()));
    for d in &instances {
        if let (Ok(a), Ok(b)) = (dims(d, -1, 2, true), dims(d, -1, 2, false)) {
            windows += 1;
            mismatches += usize::from(a != b);
        }
    }
    pass &= mismatches == 0 && windows > 0;
    parts.push(format!("reduced = unreduced on {windows} exact windows"));

    let mut compared = 0;
    let mut hh_mc_mismatch = 0;
    for ws in corpus {
        for d in ws.categories.values() {
            let id = Functor::identity(d);
            let c = Coefficients { target: d, left: &id, right: &id };
            if let Ok((a, b)) = hh_vs_mc(d, &c, 0, 2) {
                compared += 1;
                hh_mc_mismatch += usize::from(a != b);
            }
        }
    }
    pass &= hh_mc_mismatch == 0 && compared > 0;
    parts.push(format!("hh vs MC homs agree on {compared} shipped categories"));
    let t = start.elapsed();
    pass &= within(t, 60);
    parts.push(format!("{t:.2?}"));
    outcome(pass, parts.join("; "))
}

fn interchange_branches(seed: u64) -> Outcome {
    let mut rng = random::rng(seed ^ 8);
    let mut pass = true;
    let mut parts = vec![];
    for branch in 0..4 {
        let mut ok = 0;
        let mut failures = vec![];
        for k in 0..10 {
            let f = [Field::Prime(2), Field::Prime(3), Field::Rational][k % 3];
            let pick = |rng: &mut _, dim: usize, want: Option<bool>| loop {
                let c = random::coalgebra(rng, f, dim);
                if want.is_none_or(|w| c.is_curved() == w) {
                    return c;
                }
            };
            let dg = |rng: &mut _, curved: bool| loop {
                let d = random::category(rng, f, 3, curved);
                if d.is_curved() == curved {
                    return d;
                }
            };
            let (c, s, c2, s2, d) = match branch {
                0 => (pick(&mut rng, 3, Some(true)), Side::Counital, pick(&mut rng, 3, Some(true)), Side::Counital, dg(&mut rng, false)),
                1 => (pick(&mut rng, 3, Some(false)), Side::Counital, pick(&mut rng, 3, None), Side::Reduced, dg(&mut rng, false)),
                2 => (pick(&mut rng, 3, Some(true)), Side::Reduced, pick(&mut rng, 3, Some(false)), Side::Counital, dg(&mut rng, false)),
                _ => (pick(&mut rng, 3, None), Side::Counital, pick(&mut rng, 2, None), Side::Counital, dg(&mut rng, true)),
            };
            match interchange(&c, s, &c2, s2, &d, 1000).and_then(|i| i.verify()) {
                Ok(()) => ok += 1,
                Err(e) => failures.push(e.to_string()),
            }
        }
        pass &= ok >= 10;
        parts.push(format!("branch {} {ok}/10", branch + 1));
        if let Some(e) = failures.first() {
            parts.push(format!("first failure: {e}"));
        }
    }
    outcome(pass, parts.join("; ") + " (branch 4 with curved targets)")
}

#[test]
fn acceptance() {
    let seed = seed();
    let corpus = corpus();
    let suite = random_suite(seed);
    let criteria: [(&str, Box<dyn Fn() -> Outcome + '_>); 8] = [
        ("axiom suites", Box::new(|| axiom_suites(&corpus, &suite))),
        ("bar/cobar squares", Box::new(|| bar_cobar_squares(&suite, seed))),
        ("Koszul adjunction", Box::new(|| koszul_adjunction(seed))),
        ("counit homology", Box::new(counit_homology)),
        ("tensor-hom adjunction", Box::new(|| tensor_hom(seed))),
        ("EZ comparison", Box::new(|| ez_comparison(&corpus))),
        ("Hochschild", Box::new(|| hochschild(&corpus, seed))),
        ("interchange", Box::new(|| interchange_branches(seed))),
    ];
    println!("seed {seed}");
    let mut results = vec![];
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        println!("{} criterion {} ({name}): {} [{:.2?}]", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail, start.elapsed());
        results.push((name, o));
    }
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, (_, o))| !o.pass).map(|(k, _)| k + 1).collect();
    assert!(failed.is_empty(), "criteria {failed:?} failed");
}

#[test]
fn periodic_oracle_in_characteristic_two_is_flat() {
    // 2x = 0: every differential vanishes
    assert_eq!(periodic_oracle(Field::Prime(2), 4), vec![2, 2, 2, 2]);
}
