//! Bar and cobar constructions and the transports of the Koszul adjunction
//! `Hom(C, BD) ≅ MC(C̄, D) ≅ Hom(ΩC, D)`.

mod adjunction;
mod bar;
mod cobar;
mod counit;

pub use adjunction::{
    adjunction_check, enumerate_functors, AdjunctionReport,
    functor_from_twisting, iterated_coproducts, morphism_from_twisting, twisting_from_functor, twisting_from_morphism,
    Twisting,
};
pub use bar::{bar, Bar, BarWords};
pub use cobar::{cobar, cobar_data, cobar_pointed};
pub use counit::{counit, Counit};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcat::{Caps, Category};
    use crate::exactla::{Field, Vector};
    use crate::grquiv::{Arrow, GradedQuiver};
    use crate::ptdcoa::{cofree, Coalgebra, Pointed};
    use std::collections::HashMap;

    /// One object, `a` of degree −1 with `a² = 0` and `da = 1`.
    pub(crate) fn contractible(f: Field) -> Category {
        let q = GradedQuiver::new(vec!["*".into()], vec![Arrow::new("1", 0, 0, 0), Arrow::new("a", 0, 0, -1)]).unwrap();
        let diff = vec![Vector::new(), Vector::unit(0, f)];
        Category::with_unit_arrows(f, q, &[0], diff, HashMap::new(), None).unwrap()
    }

    #[test]
    fn special_objects() {
        let f = Field::Rational;
        assert!(bar(&Category::zero(f), 3).unwrap().is_final());
        let empty = bar(&Category::empty(f), 3).unwrap();
        assert_eq!(empty.coalgebra().unwrap().num_objects(), 0);
        let ground = bar(&Category::ground(f), 3).unwrap();
        assert_eq!(ground.coalgebra().unwrap().dim(), 0);
        assert_eq!(cobar_pointed(&Pointed::Coalgebra(Coalgebra::zero(f)), f, &Caps::length(2)).unwrap().num_objects(), 0);
        assert!(cobar_pointed(&Pointed::Final, f, &Caps::length(2)).unwrap().is_zero_category());
    }

    #[test]
    fn bar_of_a2_is_one_cell() {
        let d = Category::a2(Field::Rational);
        let b = Bar::new(&d).unwrap().materialize(3).unwrap();
        assert_eq!(b.coalgebra.dim(), 1);
        assert_eq!(b.coalgebra.cell(0).deg, -1);
        b.coalgebra.validate().unwrap();
    }

    #[test]
    fn bar_of_dual_numbers_validates() {
        for deg in [-1, 0, 1, 2] {
            let d = Category::dual_numbers(Field::Prime(3), deg);
            let b = Bar::new(&d).unwrap().materialize(4).unwrap();
            assert_eq!(b.coalgebra.dim(), 4);
            assert!(!b.coalgebra.is_curved());
            b.coalgebra.validate().unwrap();
        }
    }

    #[test]
    fn unit_in_the_image_of_d_curves_the_bar() {
        let f = Field::Prime(5);
        let b = Bar::new(&contractible(f)).unwrap().materialize(3).unwrap();
        assert!(b.coalgebra.is_curved());
        assert_eq!(b.coalgebra.h(0), -f.one());
        b.coalgebra.validate().unwrap();
        let omega = cobar(&b.coalgebra, &Caps::length(4)).unwrap();
        omega.category.validate_in(&omega.region()).unwrap();
    }

    #[test]
    fn cobar_of_primitives() {
        let f = Field::Rational;
        let c = Coalgebra::primitive(f, "w", -1, None);
        let omega = cobar(&c, &Caps::length(3)).unwrap();
        assert_eq!(omega.words.len(), 4);
        assert!(omega.category.quiver().arrows().iter().all(|a| a.deg == 0));
        assert!((0..omega.words.len()).all(|i| omega.category.diff_of(i).is_zero()));

        let c = cofree(f, Coalgebra::primitive(f, "w", -2, None).quiver(), 3);
        let omega = cobar(&c, &Caps::length(3)).unwrap();
        assert_eq!(omega.category.arrow(omega.index_of(&crate::dgcat::Word { src: 0, tgt: 0, letters: vec![0] }).unwrap()).deg, -1);
        omega.category.validate().unwrap();
    }

    #[test]
    fn counit_twisting_cochain_gives_the_counit_functor() {
        let d = Category::a2(Field::Rational);
        let bar = Bar::new(&d).unwrap();
        let bw = bar.materialize(2).unwrap();
        let tau = Twisting { objects: vec![0, 1], values: vec![Vector::unit(2, Field::Rational)] };
        assert!(tau.is_mc(&bw.coalgebra, &d).unwrap());
        let omega = cobar(&bw.coalgebra, &Caps::length(2)).unwrap();
        let fun = functor_from_twisting(&omega, &d, &tau).unwrap();
        assert_eq!(twisting_from_functor(&bw.coalgebra, &omega, &fun).unwrap(), tau);
        let m = morphism_from_twisting(&bw.coalgebra, &bar, &bw, &tau).unwrap();
        m.validate(&bw.coalgebra, &bw.coalgebra).unwrap();
        assert_eq!(twisting_from_morphism(&bw.coalgebra, &bar, &bw, &m), tau);
    }

    #[test]
    fn counit_on_a2_and_dual_numbers() {
        let d = Category::a2(Field::Rational);
        let c = counit(&d, -2, 1, 2).unwrap();
        assert_eq!(c.exact, vec![-2, -1, 0, 1]);
        assert_eq!(c.source_homology[&(0, 1)][&0], 1);

        let d = Category::dual_numbers(Field::Prime(3), 0);
        let c = counit(&d, -1, 1, 3).unwrap();
        assert!(c.exact.contains(&0));
        assert_eq!(c.source_homology[&(0, 0)][&0], 2);
    }
}
