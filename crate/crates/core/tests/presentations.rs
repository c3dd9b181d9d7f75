use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use spinlab::constructions::{korkmaz_cadavid, u_v_factorizations, z_family};
use spinlab::factorization::{Curve, PositiveFactorization};
use spinlab::homology::{IntClass, Mod2Class};
use spinlab::matrix::IntMatrix;
use spinlab::presentations::{
    abelianization, check_normal_form, determinantal_divisor, fibration_h1, h1_quotient,
    korkmaz_relator_set, normalize_presentation, AbelianGroup, FibrationH1, FinitePresentation,
    GenLetter, NormalFormViolation,
};
use spinlab::snf::{smith_diagonal, smith_normal_form};

fn pres(text: &str) -> FinitePresentation {
    FinitePresentation::parse(text).unwrap()
}

fn group(text: &str) -> AbelianGroup {
    AbelianGroup::parse(text).unwrap()
}

fn presentation() -> impl Strategy<Value = FinitePresentation> {
    (1usize..=5).prop_flat_map(|n| {
        let letter = (0..n, any::<bool>()).prop_map(|(gen, inverse)| GenLetter { gen, inverse });
        let relator = prop::collection::vec(letter, 1..=8);
        prop::collection::vec(relator, 0..=4).prop_map(move |rels| {
            let gens = (1..=n).map(|i| format!("x{i}")).collect();
            FinitePresentation::new(gens, rels).unwrap()
        })
    })
}

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r)
            .prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

#[test]
fn parse_and_print() {
    let p = pres("gens: a b; rel: a^2, b^3, (ab)^2;");
    assert_eq!(p.num_generators(), 2);
    assert_eq!(p.relators().len(), 3);
    assert_eq!(p.relators()[2].len(), 4);
    assert_eq!(pres(&p.to_string()), p);
    let q = pres("gens: x1 x2; rel: x1 x2 x1^-1 x2^-1;");
    assert_eq!(q.relators()[0][2], GenLetter::neg(0));
    assert_eq!(pres("gens: x; rel: 1;").relators().len(), 1);
    assert!(FinitePresentation::parse("gens: x; rel: y;").is_err());
    assert!(FinitePresentation::new(vec!["x".into()], vec![vec![GenLetter::pos(3)]]).is_err());
}

#[test]
fn abelianization_examples() {
    assert_eq!(abelianization(&pres("gens: x; rel: x^2;")), group("Z/2"));
    assert_eq!(abelianization(&pres("gens: x; rel: x;")), AbelianGroup::trivial());
    assert_eq!(abelianization(&pres("gens: a b;")), group("Z^2"));
    assert_eq!(abelianization(&pres("gens: a b; rel: a^2, b^3, (ab)^2;")), group("Z/2"));
    assert_eq!(abelianization(&pres("gens: a b; rel: a^4, b^6;")), group("Z/2 + Z/12"));
    let surface = pres("gens: x1 y1 x2 y2 x3 y3; rel: [x1,y1][x2,y2][x3,y3];");
    assert_eq!(abelianization(&surface), AbelianGroup::free(6));
    assert_eq!(abelianization(&pres("gens: c1; rel: c1^2, c1;")), AbelianGroup::trivial());
    for g in ["0", "Z", "Z^3", "Z/2", "Z^2 + Z/2 + Z/4"] {
        assert_eq!(group(g).to_string(), g);
    }
}

#[test]
fn normalization_examples() {
    let p = pres("gens: x; rel: x;");
    assert_eq!(normalize_presentation(&p), p);
    for (text, expected) in [
        ("gens: x; rel: x^2;", "Z/2"),
        ("gens: a b; rel: a b a^-1 b^-1;", "Z^2"),
        ("gens: a b; rel: a^2, b^3, (ab)^2;", "Z/2"),
        ("gens: x y z; rel: z y x, x^-3 y;", "Z"),
    ] {
        let p = pres(text);
        assert!(check_normal_form(&p).is_err());
        let n = normalize_presentation(&p);
        assert_eq!(check_normal_form(&n), Ok(()), "{n}");
        assert_eq!(abelianization(&n), group(expected), "{text}");
        assert_eq!(normalize_presentation(&n), n);
    }
}

#[test]
fn normal_form_checker() {
    assert_eq!(
        check_normal_form(&pres("gens: x y; rel: x y^-1;")),
        Err(NormalFormViolation::NotPositive { relator: 0 })
    );
    assert_eq!(
        check_normal_form(&pres("gens: x y; rel: x y, x y x;")),
        Err(NormalFormViolation::RepeatedGenerator { relator: 1 })
    );
    assert_eq!(
        check_normal_form(&pres("gens: x y z w; rel: x z y w;")),
        Err(NormalFormViolation::OrderBroken { relator: 0 })
    );
    // cyclic rotations of an increasing word are fine
    assert_eq!(check_normal_form(&pres("gens: x y z w; rel: z w x y;")), Ok(()));
}

#[test]
fn snf_examples() {
    let f = smith_normal_form(&IntMatrix::identity(3));
    assert_eq!(f.rank, 3);
    assert_eq!(f.d, IntMatrix::identity(3));
    let f = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
    assert_eq!(f.invariant_factors(), vec![BigInt::one(), BigInt::from(6)]);
    assert_eq!(smith_diagonal(&IntMatrix::zeros(3, 2)).rank, 0);
}

#[test]
fn fibration_h1_examples() {
    for g in [5usize, 7] {
        let (u, _) = u_v_factorizations(g).unwrap();
        assert!(fibration_h1(&u).is_trivial());
    }
    for g in [3usize, 5, 7] {
        assert_eq!(
            fibration_h1(&korkmaz_cadavid(g).unwrap()),
            FibrationH1::Integral { group: AbelianGroup::free(g - 1) }
        );
    }
    for p in z_family(5, 12).unwrap().iter().skip(1) {
        assert_eq!(fibration_h1(p), FibrationH1::Mod2 { dimension: 0 });
    }
    let torsion = h1_quotient(1, &[IntClass::from_coords(vec![2, 0]).unwrap(), IntClass::y(1, 1)]).unwrap();
    assert_eq!(torsion, group("Z/2"));
    // −c adds nothing new
    let c = IntClass::from_coords(vec![1, 2]).unwrap();
    assert_eq!(h1_quotient(1, &[c.clone(), c.negated()]).unwrap(), group("Z"));
}

#[test]
fn relator_set_examples() {
    let g = 3;
    let p = korkmaz_cadavid(g).unwrap();
    let a1 = Curve::integral("a1", IntClass::x(g, 1));
    let set = korkmaz_relator_set(&p, &[a1.clone()]).unwrap();
    assert_eq!(set.len(), p.len() + 1);
    assert_eq!(set.last().unwrap(), &a1);
    let t = Curve::mod2("c", Mod2Class::x(2, 1));
    let base = PositiveFactorization::new(2, vec![Curve::mod2("y1", Mod2Class::y(2, 1))], 0).unwrap();
    assert_eq!(korkmaz_relator_set(&base, &[t]).unwrap().len(), 2);
    assert!(korkmaz_relator_set(&base, &[Curve::mod2("same", Mod2Class::y(2, 1))]).is_err());
}

fn gcd_of_minors_by_expansion(m: &IntMatrix, k: usize) -> BigInt {
    fn det(rows: &[Vec<BigInt>]) -> BigInt {
        if rows.is_empty() {
            return BigInt::one();
        }
        let mut acc = BigInt::zero();
        for j in 0..rows.len() {
            let minor: Vec<Vec<BigInt>> = rows[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = &rows[0][j] * det(&minor);
            if j % 2 == 0 { acc += term } else { acc -= term }
        }
        acc
    }
    let mut g = BigInt::zero();
    for rmask in 0u32..1 << m.rows() {
        if rmask.count_ones() as usize != k {
            continue;
        }
        for cmask in 0u32..1 << m.cols() {
            if cmask.count_ones() as usize != k {
                continue;
            }
            let sub: Vec<Vec<BigInt>> = (0..m.rows())
                .filter(|i| rmask >> i & 1 == 1)
                .map(|i| (0..m.cols()).filter(|j| cmask >> j & 1 == 1).map(|j| m[(i, j)].clone()).collect())
                .collect();
            g = num_integer::Integer::gcd(&g, &det(&sub));
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn normalization_is_sound(p in presentation()) {
        let n = normalize_presentation(&p);
        prop_assert_eq!(check_normal_form(&n), Ok(()));
        prop_assert_eq!(abelianization(&n), abelianization(&p));
        prop_assert_eq!(pres(&n.to_string()), n);
    }

    #[test]
    fn determinantal_divisors(m in small_matrix()) {
        let f = smith_normal_form(&m);
        let (u, v) = (f.u.clone().unwrap(), f.v.clone().unwrap());
        prop_assert_eq!(u.mul(&m).mul(&v), f.d.clone());
        prop_assert!(u.determinant().magnitude() == &One::one());
        prop_assert!(v.determinant().magnitude() == &One::one());
        let d = f.invariant_factors();
        let mut prod = BigInt::one();
        for k in 1..=m.rows().min(m.cols()).min(3) {
            let oracle = gcd_of_minors_by_expansion(&m, k);
            prop_assert_eq!(&determinantal_divisor(&m, k), &oracle);
            if k <= d.len() {
                prod *= &d[k - 1];
                prop_assert_eq!(&prod, &oracle);
            } else {
                prop_assert!(oracle.is_zero());
            }
        }
        prop_assert_eq!(smith_diagonal(&m).d, f.d);
    }
}
