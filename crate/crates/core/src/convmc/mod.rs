//! Convolution categories, Maurer–Cartan elements and categories, the
//! internal hom into bar coalgebras and the shuffle comparison for cobar.

mod convolution;
mod ez;
mod interchange;
mod mc;

pub use convolution::{Convolution, Term};
pub use ez::{ez_compare, ez_map, EzMap, EzReport};
pub use interchange::{interchange, Interchange, Side};
pub use mc::{
    cochain_basis, internal_hom, mc_category, mc_check, mc_enumerate, mc_residual_in, tensor_hom_check, McCategory,
    TensorHomReport,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barcobar::Twisting;
    use crate::dgcat::Category;
    use crate::exactla::{Field, Vector};
    use crate::ptdcoa::{Body, Coalgebra};
    use crate::random;

    #[test]
    fn convolution_with_ground_is_the_target() {
        let f = Field::Prime(3);
        let d = Category::dual_numbers(f, 1);
        let conv = Convolution::new(&Body::full(&Coalgebra::ground(f)), &d, 100).unwrap();
        conv.category.validate().unwrap();
        assert_eq!(conv.category.dim(), d.dim());
        assert_eq!(conv.category.hom_homology(0, 0, -1, 2).unwrap(), d.hom_homology(0, 0, -1, 2).unwrap());
    }

    #[test]
    fn convolution_into_ground_dualizes_the_coproduct() {
        let f = Field::Rational;
        let c = crate::ptdcoa::cofree(f, Coalgebra::primitive(f, "w", 1, None).quiver(), 2);
        let conv = Convolution::new(&Body::reduced(&c), &Category::ground(f), 10).unwrap();
        conv.category.validate().unwrap();
        let cat = &conv.category;
        // w* ⋆ w* = (−1)^{|w*||w|} (w|w)*
        let w = conv.arrow_of(0, 0, 0, 0).unwrap();
        let ww = conv.arrow_of(0, 0, 1, 0).unwrap();
        assert_eq!(cat.mul(&Vector::unit(w, f), &Vector::unit(w, f)), Vector::unit(ww, f).scaled(&f.int(-1)));
        assert!(cat.units().is_none());
    }

    #[test]
    fn random_convolution_categories_validate() {
        let mut rng = random::rng(random::DEFAULT_SEED);
        for k in 0..60 {
            let f = [Field::Prime(2), Field::Prime(3), Field::Rational][k % 3];
            let c = random::coalgebra(&mut rng, f, 3);
            let d = random::category(&mut rng, f, 3, true);
            let full = Convolution::new(&Body::full(&c), &d, 100).unwrap();
            full.category.validate().unwrap_or_else(|e| panic!("counital {k}: {e}"));
            if !d.is_curved() {
                let red = Convolution::new(&Body::reduced(&c), &d, 100).unwrap();
                red.category.validate().unwrap_or_else(|e| panic!("reduced {k}: {e}"));
            }
        }
    }

    #[test]
    fn zero_cochain_and_curvature() {
        let f = Field::Prime(2);
        let d = Category::dual_numbers(f, 0);
        let flat = Coalgebra::primitive(f, "w", 1, None);
        assert!(mc_check(&flat, &d, &Twisting::zero(vec![0], 1)).unwrap().0);
        let curved = Coalgebra::primitive(f, "w", -2, Some(f.one()));
        let (ok, residual) = mc_check(&curved, &d, &Twisting::zero(vec![0], 1)).unwrap();
        assert!(!ok);
        assert_eq!(residual[0], d.unit(0).unwrap().clone());
    }

    #[test]
    fn enumeration_matches_convolution_residual() {
        let mut rng = random::rng(7);
        for _ in 0..30 {
            let f = Field::Prime(2);
            let c = random::coalgebra(&mut rng, f, 3);
            let d = random::category(&mut rng, f, 3, false);
            let conv = Convolution::new(&Body::reduced(&c), &d, 100).unwrap();
            let found = mc_enumerate(&c, &d, 12, 100_000).unwrap();
            for xi in &found {
                assert!(mc_residual_in(&conv, xi).unwrap().is_zero());
            }
            // every candidate over F_2 with zero residual is in the list
            let mut count = 0;
            for map in crate::grquiv::object_maps(c.num_objects(), d.num_objects(), 100).unwrap() {
                let basis = cochain_basis(&c, &d, &map);
                for bits in 0u32..(1 << basis.len()) {
                    let mut xi = Twisting::zero(map.clone(), c.dim());
                    for (k, (i, e)) in basis.iter().enumerate() {
                        if bits >> k & 1 == 1 {
                            xi.values[*i].add_at(*e, &f.one());
                        }
                    }
                    count += mc_residual_in(&conv, &xi).unwrap().is_zero() as usize;
                }
            }
            assert_eq!(count, found.len());
        }
    }

    #[test]
    fn mc_categories_are_dg() {
        let mut rng = random::rng(11);
        for _ in 0..30 {
            let f = Field::Prime(3);
            let c = random::coalgebra(&mut rng, f, 3);
            let d = random::category(&mut rng, f, 3, false);
            let objects: Vec<_> = mc_enumerate(&c, &d, 8, 100_000).unwrap().into_iter().take(5).collect();
            let mc = mc_category(&c, &d, objects).unwrap();
            assert!(!mc.category().is_curved());
            mc.category().validate().unwrap();
        }
    }

    #[test]
    fn mc_star_of_ground_is_the_target() {
        let f = Field::Prime(3);
        let d = Category::a2(f);
        let objects = mc_enumerate(&Coalgebra::ground(f), &d, 4, 100).unwrap();
        assert_eq!(objects.len(), 2);
        let mc = mc_category(&Coalgebra::ground(f), &d, objects).unwrap();
        assert_eq!(mc.category().dim(), d.dim());
        mc.category().validate().unwrap();
    }

    #[test]
    fn internal_hom_sentinels() {
        let f = Field::Prime(2);
        let c = crate::ptdcoa::Pointed::Coalgebra(Coalgebra::primitive(f, "w", 1, None));
        assert!(internal_hom(&c, &Category::zero(f), 8, 100, 2).unwrap().is_final());
        let zero = crate::ptdcoa::Pointed::Coalgebra(Coalgebra::zero(f));
        assert!(internal_hom(&zero, &Category::a2(f), 8, 100, 2).unwrap().is_final());
        internal_hom(&c, &Category::a2(f), 8, 100, 2).unwrap().validate().unwrap();
    }

    fn branch_instances(branch: usize, k: usize) -> (Coalgebra, Side, Coalgebra, Side, Category) {
        let mut rng = random::rng(1000 * branch as u64 + k as u64);
        let f = [Field::Prime(2), Field::Prime(3), Field::Rational][k % 3];
        let curved = |rng: &mut _| loop {
            let c = random::coalgebra(rng, f, 3);
            if c.is_curved() {
                return c;
            }
        };
        let flat = |rng: &mut _| loop {
            let c = random::coalgebra(rng, f, 3);
            if !c.is_curved() {
                return c;
            }
        };
        let dg = |rng: &mut _| loop {
            let d = random::category(rng, f, 3, false);
            if !d.is_curved() {
                return d;
            }
        };
        match branch {
            // C counital, D uncurved; C' counital curved with C curved, or C' reduced with C uncurved
            0 => (curved(&mut rng), Side::Counital, curved(&mut rng), Side::Counital, dg(&mut rng)),
            1 => (flat(&mut rng), Side::Counital, random::coalgebra(&mut rng, f, 3), Side::Reduced, dg(&mut rng)),
            // C reduced curved, C' counital uncurved, D uncurved
            2 => (curved(&mut rng), Side::Reduced, flat(&mut rng), Side::Counital, dg(&mut rng)),
            // both counital, D possibly curved
            _ => (random::coalgebra(&mut rng, f, 3), Side::Counital, random::coalgebra(&mut rng, f, 2), Side::Counital, random::category(&mut rng, f, 3, true)),
        }
    }

    #[test]
    fn interchange_holds_on_every_branch() {
        for branch in 0..4 {
            for k in 0..10 {
                let (c, s, c2, s2, d) = branch_instances(branch, k);
                let ic = interchange(&c, s, &c2, s2, &d, 1000).unwrap();
                ic.verify().unwrap_or_else(|e| panic!("branch {branch} instance {k}: {e}"));
            }
        }
    }

    #[test]
    fn interchange_refuses_missing_units() {
        let f = Field::Prime(2);
        let curved = Coalgebra::primitive(f, "w", -2, Some(f.one()));
        let r = interchange(&curved, Side::Counital, &curved, Side::Reduced, &Category::a2(f), 100);
        assert!(matches!(r, Err(crate::Error::Undefined(_))));
    }

    #[test]
    fn ez_with_ground_is_the_canonical_iso() {
        let f = Field::Rational;
        let c = Coalgebra::primitive(f, "w", 1, None);
        let ez = ez_map(&c, &Coalgebra::ground(f), 4).unwrap();
        ez.verify().unwrap();
        assert_eq!(ez.source.category.dim(), ez.target.dim());
    }

    #[test]
    fn ez_on_mixed_generators_is_zero_and_shuffles_cancel() {
        let f = Field::Rational;
        let c = Coalgebra::primitive(f, "w", 1, None);
        let c2 = Coalgebra::primitive(f, "v", 2, None);
        let ez = ez_map(&c, &c2, 3).unwrap();
        ez.verify().unwrap();
        // ⟨w⊗v⟩ is the last cell of the tensor
        let mixed = ez.tensor.dim() - 1;
        let k = ez.source.index_of(&crate::dgcat::Word { src: 0, tgt: 0, letters: vec![mixed] }).unwrap();
        assert!(ez.functor.arrows[k].is_zero());
        assert!(ez.functor.apply(ez.source.category.diff_of(k)).is_zero());
        assert!(!ez.source.category.diff_of(k).is_zero());
    }

    #[test]
    fn ez_compare_on_primitives() {
        let f = Field::Rational;
        let c = Coalgebra::primitive(f, "w", 1, None);
        let c2 = Coalgebra::primitive(f, "v", 2, None);
        let r = ez_compare(&c, &c2, 0, 4, 4, false).unwrap();
        assert_eq!(r.exact, vec![0, 1, 2, 3, 4]);
        assert!(r.agrees(), "{r:?}");
    }

    #[test]
    fn ez_compare_curved_on_associated_graded() {
        let f = Field::Prime(3);
        let c = Coalgebra::primitive(f, "w", -2, Some(f.one()));
        let c2 = Coalgebra::primitive(f, "v", -3, None);
        let r = ez_compare(&c, &c2, -4, 0, 5, true).unwrap();
        assert!(!r.exact.is_empty());
        assert!(r.agrees(), "{r:?}");
    }
}
