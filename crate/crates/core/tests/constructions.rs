use proptest::prelude::*;

use spinlab::constructions::{
    boundary_curves, build_z, building_block_curves, chain_curves, chain_spin_form,
    korkmaz_cadavid, pencil_images, phi_psi, replay_reduction, group_fibration,
    u_v_factorizations, uniform_spin_form, z_factorization, z_family,
};
use spinlab::factorization::{apply_word, check_spin};
use spinlab::homology::{HomologyClass, IntClass, Mod2Class};
use spinlab::invariants::euler_characteristic;
use spinlab::presentations::{
    abelianization, normalize_presentation, AbelianGroup, FibrationH1, FinitePresentation,
    GenLetter,
};

#[test]
fn chain_catalog() {
    let g = 5;
    let c = chain_curves(g).unwrap();
    assert_eq!(c.len(), 2 * g + 1);
    assert_eq!(c[3].class_int().unwrap(), &IntClass::x(g, 2));
    assert_eq!(c[0].class_mod2(), &Mod2Class::y(g, 1));
    assert_eq!(c[2 * g].class_int().unwrap(), &IntClass::y(g, g));
    for i in 0..c.len() {
        for j in 0..c.len() {
            let p = c[i].class_int().unwrap().intersect(c[j].class_int().unwrap()).unwrap();
            let expected = if j == i + 1 { 1 } else if i == j + 1 { -1 } else { 0 };
            assert_eq!(p, expected, "<c{}, c{}>", i + 1, j + 1);
        }
    }
}

#[test]
fn building_block_catalog() {
    let p = korkmaz_cadavid(3).unwrap();
    assert_eq!(p.len(), 16);
    assert_eq!(p.boundary_power(), 1);
    assert_eq!(korkmaz_cadavid(7).unwrap().len(), 24);
    assert!(korkmaz_cadavid(4).is_err());
    assert!(korkmaz_cadavid(1).is_err());
    let curves = building_block_curves(5).unwrap();
    let b5 = curves.iter().find(|c| c.label() == "B5").unwrap();
    assert_eq!(b5.class_int().unwrap().to_string(), "2x3+y3");
    let cert = check_spin(&korkmaz_cadavid(7).unwrap(), &uniform_spin_form(7)).unwrap();
    assert!(cert.all_ones && !cert.power_even);
}

#[test]
fn u_v_catalog() {
    assert!(u_v_factorizations(3).is_err());
    assert!(u_v_factorizations(6).is_err());
    for g in [5usize, 7] {
        let (u, v) = u_v_factorizations(g).unwrap();
        assert_eq!(u.len(), 8 * g + 4);
        assert_eq!(v.len(), 8 * g + 4);
        assert_eq!((u.boundary_power(), v.boundary_power()), (1, 1));
        assert_eq!(euler_characteristic(&u), 4 * g as i64 + 8);
        // V cycles the leading powers of U to the end
        let p = 4 * g + 4;
        assert_eq!(&v.twists()[..u.len() - p], &u.twists()[p..]);
    }
}

#[test]
fn conjugators() {
    assert!(phi_psi(4).is_err());
    for g in [5usize, 7, 11] {
        let (phi, psi) = phi_psi(g).unwrap();
        let c = chain_curves(g).unwrap();
        assert_eq!(apply_word(&phi, c[0].class_mod2()).unwrap(), Mod2Class::y(g, 3));
        let [a, b, cc, d] = boundary_curves(g).unwrap();
        assert_eq!(apply_word(&psi, c[0].class_mod2()).unwrap(), *cc.class_mod2());
        assert_eq!(apply_word(&psi, c[2].class_mod2()).unwrap(), Mod2Class::y(g, 5));
        let sum = [&a, &b, &cc, &d].iter().fold(Mod2Class::zero(g), |mut s, x| {
            s += x.class_mod2();
            s
        });
        assert!(sum.is_zero());
        assert_eq!(a.class_int().unwrap(), &IntClass::y(g, 3));
        assert_eq!(b.class_int().unwrap().to_string(), "-y3+y4");
        assert_eq!(cc.class_int().unwrap().to_string(), "y4-y5");
    }
}

#[test]
fn pencil_catalog() {
    let q = chain_spin_form(5);
    let s = pencil_images(5).unwrap();
    for c in s.interior() {
        assert!(q.eval(c.class_mod2()).unwrap(), "{}", c.label());
    }
    assert_eq!(s.interior()[3].class_mod2(), &Mod2Class::y(5, 3));
    assert!(pencil_images(3).is_err());
}

#[test]
fn reduction_replay() {
    let r = replay_reduction(5).unwrap();
    assert_eq!(r.start, vec![1, 5, 9]);
    assert_eq!(r.steps.len(), 24);
    assert_eq!(r.result, vec![1, 5, 9]);
    assert!(r.equals_c1_modulo_s);
}

#[test]
fn bred_family_certificates() {
    let (p, cert) = build_z(5, 0).unwrap();
    assert!(cert.passes());
    assert_eq!(p.len(), 88);
    let inv = cert.invariants;
    assert_eq!((inv.euler, inv.signature, inv.chi_h, inv.c1sq), (72, -48, 6, 0));
    assert_eq!(cert.h1_contains_u_cycles, Some(true));
    let (_, cert) = build_z(5, 12).unwrap();
    assert!(cert.passes());
    assert_eq!((cert.invariants.chi_h, cert.invariants.c1sq), (18, 96));
    assert_eq!(3 * cert.invariants.c1sq, 16 * cert.invariants.chi_h);
    assert_eq!(cert.h1_contains_u_cycles, None);
    let (_, cert) = build_z(7, 3).unwrap();
    assert!(cert.spin.verdict && cert.h1_mod2_dimension == 0);
    assert_eq!(cert.boundary_power, 2);
    assert!(build_z(5, 13).is_err());
    assert!(build_z(4, 0).is_err());
    assert_eq!(z_factorization(7, 5).unwrap(), z_family(7, 5).unwrap().pop().unwrap());
}

#[test]
fn group_fibration_examples() {
    let cases = [
        ("gens: x; rel: x;", "0"),
        ("gens: x; rel: x^2;", "Z/2"),
        ("gens: a b;", "Z^2"),
    ];
    for (text, expected) in cases {
        let g = FinitePresentation::parse(text).unwrap();
        let (p, cert) = group_fibration(&g).unwrap();
        assert!(cert.passes(), "{text}: {cert:?}");
        assert_eq!(cert.abelianization, AbelianGroup::parse(expected).unwrap());
        assert_eq!(
            cert.h1,
            FibrationH1::Integral { group: AbelianGroup::parse(expected).unwrap() }
        );
        assert_eq!(cert.h1_relator_set, cert.abelianization);
        assert_eq!(p.boundary_power() % 2, 0);
        assert_eq!(p.boundary_power() as usize, cert.blocks);
        assert_eq!(p.len(), cert.blocks * 2 * (cert.genus + 5));
    }
    let free = FinitePresentation::parse("gens: a b;").unwrap();
    let (p, cert) = group_fibration(&free).unwrap();
    assert_eq!((cert.genus, p.boundary_power()), (5, 6));
}

#[test]
fn group_fibration_block_parity() {
    // m odd needs the extra block
    for text in ["gens: x; rel: x;", "gens: x y; rel: x y, y x;", "gens: x y; rel: x y;"] {
        let g = FinitePresentation::parse(text).unwrap();
        let n = normalize_presentation(&g);
        let (_, cert) = group_fibration(&g).unwrap();
        let (gen_count, m) = (n.num_generators(), n.relators().len());
        let genus = 2 * gen_count + 1;
        assert_eq!(cert.genus, genus);
        let expected = genus + m + 1 + (m % 2);
        assert_eq!(cert.blocks, expected, "{text}");
        assert!(cert.passes());
    }
}

#[test]
fn group_fibration_without_generators() {
    let g = FinitePresentation::new(vec![], vec![]).unwrap();
    let (_, cert) = group_fibration(&g).unwrap();
    assert!(cert.passes());
    assert!(cert.abelianization.is_trivial());
}

fn small_presentation() -> impl Strategy<Value = FinitePresentation> {
    (1usize..=2).prop_flat_map(|n| {
        let letter = (0..n, any::<bool>()).prop_map(|(gen, inverse)| GenLetter { gen, inverse });
        prop::collection::vec(prop::collection::vec(letter, 1..=3), 0..=2).prop_map(move |rels| {
            let gens = (1..=n).map(|i| format!("x{i}")).collect();
            FinitePresentation::new(gens, rels).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn group_fibration_matches_abelianization(g in small_presentation()) {
        let (p, cert) = group_fibration(&g).unwrap();
        prop_assert!(cert.passes(), "{}", g);
        prop_assert_eq!(&cert.abelianization, &abelianization(&g));
        prop_assert_eq!(p.boundary_power() % 2, 0);
    }
}
