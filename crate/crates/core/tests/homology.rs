use proptest::prelude::*;

use spinlab::constructions::{chain_curves, chain_spin_form, korkmaz_cadavid, uniform_spin_form};
use spinlab::homology::{
    arf_invariant, enumerate_spin_structures, is_twist_in_spin_mcg, transvect, transvection_matrix,
    HomologyClass, IntClass, Mod2Class, Mod2SymplecticMatrix, QuadraticForm,
};
use spinlab::Error;

fn mod2(g: usize) -> impl Strategy<Value = Mod2Class> {
    prop::collection::vec(0i64..2, 2 * g).prop_map(|c| Mod2Class::from_coords(&c).unwrap())
}

fn int_class(g: usize) -> impl Strategy<Value = IntClass> {
    prop::collection::vec(-3i64..=3, 2 * g).prop_map(|c| IntClass::from_coords(c).unwrap())
}

fn form(g: usize) -> impl Strategy<Value = QuadraticForm> {
    any::<u64>().prop_map(move |m| QuadraticForm::from_mask(g, m & ((1 << (2 * g)) - 1)))
}

/// Arf invariant by the majority rule: the value q takes most often.
fn arf_by_count(q: &QuadraticForm) -> bool {
    let g = q.genus();
    let ones = (0..1u64 << (2 * g))
        .filter(|&m| {
            let coords: Vec<i64> = (0..2 * g).map(|i| ((m >> i) & 1) as i64).collect();
            q.eval(&Mod2Class::from_coords(&coords).unwrap()).unwrap()
        })
        .count();
    ones > 1 << (2 * g - 1)
}

#[test]
fn intersection_examples() {
    assert!(Mod2Class::x(3, 1).intersect(&Mod2Class::y(3, 1)).unwrap());
    assert!(!Mod2Class::x(3, 1).intersect(&Mod2Class::x(3, 2)).unwrap());
    assert_eq!(IntClass::x(3, 1).intersect(&IntClass::y(3, 1)).unwrap(), 1);
    assert_eq!(IntClass::y(3, 1).intersect(&IntClass::x(3, 1)).unwrap(), -1);
    let c = chain_curves(5).unwrap();
    assert_eq!(c[2].class_int().unwrap().intersect(c[3].class_int().unwrap()).unwrap(), 1);
    assert!(matches!(
        Mod2Class::x(3, 1).intersect(&Mod2Class::x(2, 1)),
        Err(Error::GenusMismatch { .. })
    ));
}

#[test]
fn transvection_examples() {
    let c = IntClass::from_coords(vec![1, -2, 0, 3]).unwrap();
    assert_eq!(transvect(&c, &c).unwrap(), c);
    // t_{c1} t_{c2} sends c1 to c2
    let chain = chain_curves(5).unwrap();
    let (c1, c2) = (chain[0].class_mod2(), chain[1].class_mod2());
    let image = c1.twist(&c2.twist(c1, false).unwrap(), false).unwrap();
    assert_eq!(&image, c2);
    let m = transvection_matrix(&IntClass::x(1, 1)).unwrap();
    assert_eq!(
        m.as_matrix(),
        &spinlab::matrix::IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]])
    );
}

#[test]
fn quadratic_form_examples() {
    let q = uniform_spin_form(7);
    assert!(!q.eval(&Mod2Class::zero(7)).unwrap());
    let b0 = Mod2Class::from_indices(7, &[], &[1, 2, 3, 4, 5, 6, 7]);
    assert!(q.eval(&b0).unwrap());
    let q = chain_spin_form(11);
    assert!(q.eval(&Mod2Class::from_indices(11, &[], &[1, 2, 3, 4, 5])).unwrap());
    assert_eq!(q.to_string(), QuadraticForm::parse(&q.to_string(), 11).unwrap().to_string());
}

#[test]
fn spin_mapping_class_membership() {
    let q = chain_spin_form(5);
    for c in chain_curves(5).unwrap() {
        assert!(is_twist_in_spin_mcg(&q, c.class_mod2()).unwrap());
    }
    assert!(!is_twist_in_spin_mcg(&q, &Mod2Class::y(5, 2)).unwrap());
    assert!(is_twist_in_spin_mcg(&uniform_spin_form(5), &Mod2Class::x(5, 1)).unwrap());
    assert!(matches!(
        is_twist_in_spin_mcg(&q, &Mod2Class::zero(5)),
        Err(Error::ZeroClass(_))
    ));
}

#[test]
fn spin_structure_counts() {
    assert_eq!(enumerate_spin_structures(1, &[]).unwrap().len(), 4);
    for g in 1..=4usize {
        let all = enumerate_spin_structures(g, &[]).unwrap();
        assert_eq!(all.len(), 1 << (2 * g));
        let even = all.iter().filter(|q| !arf_invariant(q)).count();
        assert_eq!(even, (1 << (g - 1)) * ((1 << g) + 1), "g = {g}");
    }
    assert!(matches!(
        enumerate_spin_structures(9, &[]),
        Err(Error::TooLarge { .. })
    ));
}

#[test]
fn building_block_spin_counts() {
    for (g, monodromy_only, with_a) in [(3usize, 4usize, 2usize), (5, 16, 4)] {
        let p = korkmaz_cadavid(g).unwrap();
        let mut constraints: Vec<(Mod2Class, bool)> =
            p.twists().iter().map(|c| (c.class_mod2().clone(), true)).collect();
        constraints.dedup();
        assert_eq!(enumerate_spin_structures(g, &constraints).unwrap().len(), monodromy_only);
        constraints.extend((1..=g).map(|i| (Mod2Class::x(g, i), true)));
        let forms = enumerate_spin_structures(g, &constraints).unwrap();
        assert_eq!(forms.len(), with_a);
        assert!(forms.contains(&uniform_spin_form(g)));
    }
}

#[test]
fn arf_examples() {
    assert!(!arf_invariant(&QuadraticForm::from_mask(3, 0)));
    assert!(arf_invariant(&chain_spin_form(5)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn refinement_identity((q, a, b) in (1usize..=8).prop_flat_map(|g| (form(g), mod2(g), mod2(g)))) {
        let lhs = q.eval(&(&a + &b)).unwrap();
        prop_assert_eq!(lhs, q.eval(&a).unwrap() ^ q.eval(&b).unwrap() ^ a.intersect(&b).unwrap());
    }

    #[test]
    fn q_one_twists_preserve_q((q, c, v) in (1usize..=8).prop_flat_map(|g| (form(g), mod2(g), mod2(g)))) {
        prop_assume!(!c.is_zero() && q.eval(&c).unwrap());
        prop_assert_eq!(q.eval(&c.twist(&v, false).unwrap()).unwrap(), q.eval(&v).unwrap());
        prop_assert_eq!(q.eval(&c.twist(&v, true).unwrap()).unwrap(), q.eval(&v).unwrap());
    }

    #[test]
    fn transvection_matrix_is_symplectic((c, v) in (1usize..=4).prop_flat_map(|g| (int_class(g), int_class(g)))) {
        prop_assume!(!c.is_zero());
        let m = transvection_matrix(&c).unwrap();
        prop_assert!(spinlab::homology::is_symplectic(m.as_matrix()));
        prop_assert_eq!(m.apply(&v).unwrap(), transvect(&c, &v).unwrap().to_bigint());
        prop_assert_eq!(&m, &transvection_matrix(&c.negated()).unwrap());
    }

    #[test]
    fn transvect_matches_direct_formula((c, v) in (1usize..=3).prop_flat_map(|g| (int_class(g), int_class(g)))) {
        let g = c.genus();
        let (cc, vc) = (c.coords(), v.coords());
        let pairing: i64 = (0..g).map(|i| vc[i] * cc[g + i] - vc[g + i] * cc[i]).sum();
        // ⟨c, v⟩ = −⟨v, c⟩
        let direct: Vec<i64> = (0..2 * g).map(|i| vc[i] - pairing * cc[i]).collect();
        let image = transvect(&c, &v).unwrap();
        prop_assert_eq!(image.coords(), &direct[..]);
    }

    #[test]
    fn integral_twist_reduces_to_mod2((c, v) in (1usize..=5).prop_flat_map(|g| (int_class(g), int_class(g))), inverse: bool) {
        let lifted = c.twist(&v, inverse).unwrap().reduce();
        prop_assert_eq!(lifted, c.reduce().twist(&v.reduce(), inverse).unwrap());
    }

    #[test]
    fn arf_is_symplectic_invariant((q, cs) in (1usize..=4).prop_flat_map(|g| (form(g), prop::collection::vec(mod2(g), 1..6)))) {
        let mut m = Mod2SymplecticMatrix::identity(q.genus());
        for c in &cs {
            m.right_mul_transvection(c).unwrap();
        }
        prop_assert!(m.is_symplectic());
        let pulled = q.pullback(&m).unwrap();
        prop_assert_eq!(arf_invariant(&pulled), arf_invariant(&q));
        prop_assert_eq!(arf_invariant(&q), arf_by_count(&q));
    }
}
