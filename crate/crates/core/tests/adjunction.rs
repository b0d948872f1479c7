use koszul_core::barcobar::adjunction_check;
use koszul_core::exactla::Field;
use koszul_core::random;

fn seed() -> u64 {
    std::env::var("KOSZUL_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(random::DEFAULT_SEED)
}

#[test]
fn three_hom_sets_agree_over_f2() {
    let mut rng = random::rng(seed());
    let mut checked = 0;
    let mut nontrivial = 0;
    for k in 0..80 {
        let c = random::coalgebra(&mut rng, Field::Prime(2), 3);
        let d = random::category(&mut rng, Field::Prime(2), 3, false);
        match adjunction_check(&c, &d, 12, 4096) {
            Ok(r) => {
                assert!(r.holds(), "instance {k}: {r:?}");
                checked += 1;
                nontrivial += usize::from(r.functors > 1);
            }
            Err(e) => eprintln!("instance {k} skipped: {e}"),
        }
    }
    eprintln!("{checked} pairs, {nontrivial} with more than one morphism");
    assert!(checked >= 50);
}

#[test]
fn tensor_hom_counts_agree_over_f2() {
    let mut rng = random::rng(seed() ^ 5);
    let mut checked = 0;
    for k in 0..60 {
        let c = random::coalgebra(&mut rng, Field::Prime(2), 2);
        let c2 = random::coalgebra(&mut rng, Field::Prime(2), 2);
        let d = random::category(&mut rng, Field::Prime(2), 3, false);
        match koszul_core::convmc::tensor_hom_check(&c, &c2, &d, 12, 4096) {
            Ok(r) => {
                assert!(r.holds(), "instance {k}: {r:?}");
                checked += 1;
            }
            Err(e) => eprintln!("instance {k} skipped: {e}"),
        }
    }
    eprintln!("{checked} triples");
    assert!(checked >= 25);
}
