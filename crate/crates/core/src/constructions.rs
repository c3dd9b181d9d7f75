//! Concrete curve catalogs and the two construction pipelines: spin
//! fibrations with prescribed fundamental group, and the bred family
//! `Z_{g,k}` filling the geography region.

use serde::Serialize;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::factorization::{
    boundary_block_positions, breed, check_relation, check_spin, conjugate, fiber_sum,
    rearrange_commuting, Curve, Letter, PositiveFactorization, RelationCheck, SpinCertificate,
    SubsurfaceImage, TwistWord, PENCIL_LABELS,
};
use crate::homology::{
    enumerate_spin_structures, HomologyClass, IntClass, Mod2Class, QuadraticForm,
};
use crate::invariants::{invariants_of, FibrationInvariants, SignatureSource};
use crate::presentations::{
    abelianization, fibration_h1, h1_mod2_dimension, h1_quotient, korkmaz_relator_set,
    normalize_presentation, AbelianGroup, FibrationH1, FinitePresentation, GenLetter,
};
use crate::snf::gf2_rank;

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::precondition(msg))
    }
}

fn require_odd_genus(g: usize, min: usize) -> Result<()> {
    require(
        g % 2 == 1 && g >= min,
        format!("genus must be odd and at least {min}, got {g}"),
    )
}

/// `q(x_i) = q(y_i) = 1` for every `i`.
pub fn uniform_spin_form(g: usize) -> QuadraticForm {
    QuadraticForm::from_fn(g, |_| true, |_| true)
}

/// `q(x_i) = 1`, and `q(y_i) = 1` exactly for odd `i`; every chain curve
/// has `q = 1`.
pub fn chain_spin_form(g: usize) -> QuadraticForm {
    QuadraticForm::from_fn(g, |_| true, |i| i % 2 == 1)
}

/// The chain `c_1, …, c_{2g+1}` with `c_{2i} = x_i` and
/// `c_{2i+1} = y_i − y_{i+1}` (`y_0 = y_{g+1} = 0`), so that
/// `⟨c_i, c_{i+1}⟩ = 1`.
pub fn chain_curves(g: usize) -> Result<Vec<Curve>> {
    require(g >= 1, "genus must be positive")?;
    let y = |i: usize| {
        if (1..=g).contains(&i) {
            IntClass::y(g, i)
        } else {
            IntClass::zero(g)
        }
    };
    let mut out = Vec::with_capacity(2 * g + 1);
    for j in 1..=2 * g + 1 {
        let class = if j % 2 == 0 {
            IntClass::x(g, j / 2)
        } else {
            let i = (j - 1) / 2;
            y(i).try_sub(&y(i + 1))?
        };
        out.push(Curve::integral(format!("c{j}"), class));
    }
    Ok(out)
}

/// Vanishing cycles `B_0, …, B_g, a, b` of the building block, in the
/// basis `a_i = x_i`, `b_i = y_i`. The integral classes abelianize the
/// based loops; commutator factors drop out.
pub fn building_block_curves(g: usize) -> Result<Vec<Curve>> {
    require_odd_genus(g, 3)?;
    let n = (g - 1) / 2;
    let sum = |xs: &[usize], ys: std::ops::RangeInclusive<usize>| -> Result<IntClass> {
        let mut c = IntClass::zero(g);
        for &i in xs {
            c = c.try_add(&IntClass::x(g, i))?;
        }
        for i in ys {
            c = c.try_add(&IntClass::y(g, i))?;
        }
        Ok(c)
    };
    let mut out = vec![Curve::integral("B0", sum(&[], 1..=g)?)];
    for j in 1..=g {
        let class = if j % 2 == 1 {
            let k = (j + 1) / 2;
            sum(&[k, g + 1 - k], k..=g + 1 - k)?
        } else {
            let k = j / 2;
            sum(&[k, g + 1 - k], k + 1..=g - k)?
        };
        out.push(Curve::integral(format!("B{j}"), class));
    }
    out.push(Curve::integral("a", IntClass::x(g, n + 1)));
    out.push(Curve::integral("b", IntClass::x(g, n + 1)));
    Ok(out)
}

/// `P_g = (t_{B_0} ⋯ t_{B_g} t_a² t_b²)²`, a lift of `t_δ`.
pub fn korkmaz_cadavid(g: usize) -> Result<PositiveFactorization> {
    let curves = building_block_curves(g)?;
    let (bs, ab) = curves.split_at(g + 1);
    let mut half: Vec<Curve> = bs.to_vec();
    half.extend([ab[0].clone(), ab[0].clone(), ab[1].clone(), ab[1].clone()]);
    let mut twists = half.clone();
    twists.extend(half);
    Ok(PositiveFactorization::new(g, twists, 1)?.with_provenance(format!("P_{g}")))
}

/// Spin structures with `q = 1` on every vanishing cycle of `P_g`, and
/// optionally on every `a_i` as well.
pub fn building_block_spin_structures(g: usize, with_a: bool) -> Result<Vec<QuadraticForm>> {
    let mut constraints: Vec<(Mod2Class, bool)> = building_block_curves(g)?
        .iter()
        .map(|c| (c.class_mod2().clone(), true))
        .collect();
    if with_a {
        constraints.extend((1..=g).map(|i| (Mod2Class::x(g, i), true)));
    }
    enumerate_spin_structures(g, &constraints)
}

/// `U = t_1^{2g+2} t_3^{2g+2} S` and its cyclic rearrangement
/// `V = S t_1^{2g+2} t_3^{2g+2}`, where `t_i` twists along `c_i` and
/// `S = (t_1^{t_2} ⋯ t_{2g}^{t_{2g+1}})(t_{2g+1}^{t_{2g}} ⋯ t_4^{t_3})
/// t_3^{t_3^{2g+2} t_2} t_2^{t_3^{2g+2} t_1}`.
pub fn u_v_factorizations(g: usize) -> Result<(PositiveFactorization, PositiveFactorization)> {
    require_odd_genus(g, 5)?;
    let c = chain_curves(g)?;
    let t = |i: usize| c[i - 1].clone();
    let p = 2 * g + 2;
    let mut s = Vec::with_capacity(4 * g);
    for i in 1..=2 * g {
        s.push(TwistWord::single(t(i + 1)).apply_curve(&t(i))?);
    }
    for i in (3..=2 * g).rev() {
        s.push(TwistWord::single(t(i)).apply_curve(&t(i + 1))?);
    }
    let power3 = |last: usize| {
        let mut letters = vec![Letter::twist(t(3)); p];
        letters.push(Letter::twist(t(last)));
        TwistWord::new(letters)
    };
    s.push(power3(2).apply_curve(&t(3))?);
    s.push(power3(1).apply_curve(&t(2))?);
    let mut head = vec![t(1); p];
    head.extend(vec![t(3); p]);
    let mut u_twists = head.clone();
    u_twists.extend(s.iter().cloned());
    let mut v_twists = s;
    v_twists.extend(head);
    let u = PositiveFactorization::new(g, u_twists, 1)?.with_provenance(format!("U_{g}"));
    let v = PositiveFactorization::new(g, v_twists, 1)?.with_provenance(format!("V_{g}"));
    Ok((u, v))
}

/// The trailing `S` block of `U`.
fn s_block(u: &PositiveFactorization) -> &[Curve] {
    let g = u.genus();
    &u.twists()[4 * g + 4..]
}

/// `a = y_3` and `d = y_5`.
fn boundary_ad(g: usize) -> (Curve, Curve) {
    (
        Curve::integral("a", IntClass::y(g, 3)),
        Curve::integral("d", IntClass::y(g, 5)),
    )
}

/// `φ = (t_8 t_7 t_6 t_a)(t_5 t_6 t_7 t_8)(t_4 t_5 t_6 t_7) ⋯ (t_1 t_2 t_3 t_4)`
/// and `ψ = (t_8 t_9 t_10 t_d)(t_7 t_8 t_9 t_10) ⋯ (t_1 t_2 t_3 t_4)`.
pub fn phi_psi(g: usize) -> Result<(TwistWord, TwistWord)> {
    require(g >= 5, format!("phi and psi need genus at least 5, got {g}"))?;
    let c = chain_curves(g)?;
    let t = |i: usize| c[i - 1].clone();
    let (a, d) = boundary_ad(g);
    let mut phi = vec![t(8), t(7), t(6), a];
    for j in (1..=5).rev() {
        phi.extend([t(j), t(j + 1), t(j + 2), t(j + 3)]);
    }
    let mut psi = vec![t(8), t(9), t(10), d];
    for j in (1..=7).rev() {
        psi.extend([t(j), t(j + 1), t(j + 2), t(j + 3)]);
    }
    Ok((
        TwistWord::positive(phi).named("phi"),
        TwistWord::positive(psi).named("psi"),
    ))
}

/// Boundary curves `a, b, c, d` with `b = φ(c_3)` and `c = ψ(c_1)`.
pub fn boundary_curves(g: usize) -> Result<[Curve; 4]> {
    let (phi, psi) = phi_psi(g)?;
    let c = chain_curves(g)?;
    let (a, d) = boundary_ad(g);
    let b = phi.apply_curve(&c[2])?.renamed("b");
    let cc = psi.apply_curve(&c[0])?.renamed("c");
    Ok([a, b, cc, d])
}

/// The embedded four-holed genus-2 pencil: boundary images `a, b, c, d`
/// and the eight interior vanishing cycles (mod 2).
pub fn pencil_images(g: usize) -> Result<SubsurfaceImage> {
    require(g >= 5, format!("the pencil embedding needs genus at least 5, got {g}"))?;
    let m = |xs: &[usize], ys: &[usize]| Mod2Class::from_indices(g, xs, ys);
    let classes = [
        m(&[1, 2], &[3, 4]),
        m(&[1, 2], &[1, 2, 3, 4, 5]),
        m(&[], &[1, 2, 3, 4, 5]),
        m(&[], &[3]),
        m(&[], &[5]),
        m(&[], &[1, 2, 4]),
        m(&[1, 2], &[1, 2, 4]),
        m(&[1, 2], &[4, 5]),
    ];
    let interior: [Curve; 8] =
        std::array::from_fn(|i| Curve::mod2(PENCIL_LABELS[i], classes[i].clone()));
    SubsurfaceImage::new(boundary_curves(g)?, interior)
}

/// Coefficients of a mod-2 class in the chain basis `c_1, …, c_{2g}`
/// (1-based indices of the nonzero ones).
pub fn chain_coordinates(v: &Mod2Class) -> Vec<usize> {
    let g = v.genus();
    let mut out = Vec::new();
    // y_j = c_1 + c_3 + ⋯ + c_{2j−1}, so c_{2i−1} collects y_i, …, y_g
    let mut tail = false;
    let mut odd = vec![false; g + 1];
    for i in (1..=g).rev() {
        tail ^= v.coord(g + i - 1);
        odd[i] = tail;
    }
    for i in 1..=g {
        if odd[i] {
            out.push(2 * i - 1);
        }
        if v.coord(i - 1) {
            out.push(2 * i);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplayStep {
    pub letter: String,
    /// Chain-basis support after this step.
    pub class: Vec<usize>,
}

/// `φ⁻¹(B_2)` computed one inverse twist at a time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionReplay {
    pub start: Vec<usize>,
    pub steps: Vec<ReplayStep>,
    pub result: Vec<usize>,
    /// `φ⁻¹(B_2) − c_1` lies in the mod-2 span of the `S` vanishing cycles,
    /// so `φ⁻¹(B_2) = c_1` once those relators are imposed.
    pub equals_c1_modulo_s: bool,
}

pub fn replay_reduction(g: usize) -> Result<ReductionReplay> {
    let pencil = pencil_images(g)?;
    let (phi, _) = phi_psi(g)?;
    let (u, _) = u_v_factorizations(g)?;
    let b2 = pencil.interior()[2].class_mod2().clone();
    let mut v = b2.clone();
    let mut steps = Vec::with_capacity(phi.len());
    // φ⁻¹ applies the letters of φ left to right, inverted
    for l in phi.letters() {
        v = l.curve.class_mod2().twist(&v, true)?;
        steps.push(ReplayStep {
            letter: format!("t_{}^-1", l.curve.label()),
            class: chain_coordinates(&v),
        });
    }
    let to_bits = |c: &Mod2Class| Bits::from_fn(2 * g, |i| c.coord(i));
    let mut rows: Vec<Bits> = s_block(&u).iter().map(|c| to_bits(c.class_mod2())).collect();
    let base = gf2_rank(&rows);
    let c1 = chain_curves(g)?[0].class_mod2().clone();
    rows.push(to_bits(&(&v + &c1)));
    Ok(ReductionReplay {
        start: chain_coordinates(&b2),
        steps,
        result: chain_coordinates(&v),
        equals_c1_modulo_s: gf2_rank(&rows) == base,
    })
}

/// `V^φ U^ψ` rearranged to `S^φ (t_a t_b t_c t_d)^{2g+2} S^ψ`.
pub fn z_base(g: usize) -> Result<PositiveFactorization> {
    require_odd_genus(g, 5)?;
    let (u, v) = u_v_factorizations(g)?;
    let (phi, psi) = phi_psi(g)?;
    let vphi = conjugate(&v, &phi)?;
    let z = fiber_sum(&vphi, &u, &psi)?;
    let [a, b, c, d] = boundary_curves(g)?;
    let rename = [
        ("phi(c1)", &a),
        ("phi(c3)", &b),
        ("psi(c1)", &c),
        ("psi(c3)", &d),
    ];
    for tw in z.twists() {
        if let Some((_, target)) = rename.iter().find(|(from, _)| tw.label() == *from) {
            if tw.class_mod2() != target.class_mod2() || tw.class_int() != target.class_int() {
                return Err(Error::Certificate(format!(
                    "`{}` does not have the class of `{}`",
                    tw.label(),
                    target.label()
                )));
            }
        }
    }
    let z = z.relabel(
        |_, tw| {
            rename
                .iter()
                .find(|(from, _)| tw.label() == *from)
                .map_or_else(|| tw.label().to_string(), |(_, to)| to.label().to_string())
        },
        "phi(c1), phi(c3), psi(c1), psi(c3) as a, b, c, d",
    );
    let p = 2 * g + 2;
    let target: Vec<Curve> = (0..p).flat_map(|_| [a.clone(), b.clone(), c.clone(), d.clone()]).collect();
    rearrange_commuting(&z, 4 * g + 1, &target)
}

/// `P_{g,k} = S^φ (t_a t_b t_c t_d)^{2g+2−k} R^k S^ψ`, breeding into the
/// last boundary block each time.
pub fn z_factorization(g: usize, k: u32) -> Result<PositiveFactorization> {
    let mut family = z_family(g, k)?;
    Ok(family.pop().expect("z_family returns k + 1 members"))
}

/// `P_{g,0}, …, P_{g,k_max}`, sharing one base.
pub fn z_family(g: usize, k_max: u32) -> Result<Vec<PositiveFactorization>> {
    require_odd_genus(g, 5)?;
    require(
        k_max as usize <= 2 * g + 2,
        format!("k must be at most 2g + 2 = {}, got {k_max}", 2 * g + 2),
    )?;
    let pencil = pencil_images(g)?;
    let mut out = vec![z_base(g)?];
    for _ in 0..k_max {
        let p = out.last().expect("nonempty");
        let at = *boundary_block_positions(p, &pencil)
            .last()
            .ok_or_else(|| Error::precondition("no boundary block left to breed into"))?;
        out.push(breed(p, at, &pencil)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpinSummary {
    pub verdict: bool,
    pub all_ones: bool,
    pub power_even: bool,
    pub boundary_power: u32,
    pub twists: usize,
    pub failing: Vec<String>,
}

impl From<&SpinCertificate> for SpinSummary {
    fn from(c: &SpinCertificate) -> Self {
        SpinSummary {
            verdict: c.verdict,
            all_ones: c.all_ones,
            power_even: c.power_even,
            boundary_power: c.boundary_power,
            twists: c.values.len(),
            failing: c.failing_labels().into_iter().map(String::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZCertificate {
    pub genus: usize,
    pub k: u32,
    pub length: usize,
    pub boundary_power: u32,
    pub relation: RelationCheck,
    pub spin_form: String,
    pub spin: SpinSummary,
    pub invariants: FibrationInvariants,
    pub h1_mod2_dimension: usize,
    /// For `k < 2g + 2`: `P^{φ⁻¹}` contains every vanishing cycle of `U`,
    /// whose total space is simply connected.
    pub h1_contains_u_cycles: Option<bool>,
    pub reduction: ReductionReplay,
}

impl ZCertificate {
    pub fn passes(&self) -> bool {
        self.relation.holds()
            && self.spin.verdict
            && self.h1_mod2_dimension == 0
            && self.h1_contains_u_cycles.unwrap_or(true)
            && self.reduction.equals_c1_modulo_s
    }
}

pub fn build_z(g: usize, k: u32) -> Result<(PositiveFactorization, ZCertificate)> {
    let p = z_factorization(g, k)?;
    let q = chain_spin_form(g);
    let spin = check_spin(&p, &q)?;
    let invariants = invariants_of(&p, &SignatureSource::BredFamily { k })?;
    let h1_contains_u_cycles = if (k as usize) < 2 * g + 2 {
        let (phi, _) = phi_psi(g)?;
        let back = conjugate(&p, &phi.inverse())?;
        let have: std::collections::HashSet<&Mod2Class> =
            back.twists().iter().map(Curve::class_mod2).collect();
        let (u, _) = u_v_factorizations(g)?;
        Some(u.twists().iter().all(|c| have.contains(c.class_mod2())))
    } else {
        None
    };
    let cert = ZCertificate {
        genus: g,
        k,
        length: p.len(),
        boundary_power: p.boundary_power(),
        relation: check_relation(&p),
        spin_form: q.to_string(),
        spin: SpinSummary::from(&spin),
        invariants,
        h1_mod2_dimension: h1_mod2_dimension(g, p.twists()),
        h1_contains_u_cycles,
        reduction: replay_reduction(g)?,
    };
    Ok((p, cert))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupFibrationCertificate {
    pub presentation: String,
    pub normalized: String,
    pub generators: usize,
    pub relators: usize,
    pub genus: usize,
    pub blocks: usize,
    pub length: usize,
    pub boundary_power: u32,
    pub relation: RelationCheck,
    pub spin_form: String,
    pub spin: SpinSummary,
    /// Relator curves `R'_j`, in the `a_i, b_i` labels.
    pub relator_curves: Vec<String>,
    pub abelianization: AbelianGroup,
    pub h1: FibrationH1,
    /// `H_1` from the normal generators `{c_i} ∪ {a_i} ∪ {R'_j}`.
    pub h1_relator_set: AbelianGroup,
    pub h1_matches: bool,
}

impl GroupFibrationCertificate {
    pub fn passes(&self) -> bool {
        self.relation.holds() && self.spin.verdict && self.h1_matches
    }
}

/// Builds a spin Lefschetz fibration whose fundamental group is presented
/// by `presentation`.
pub fn group_fibration(
    presentation: &FinitePresentation,
) -> Result<(PositiveFactorization, GroupFibrationCertificate)> {
    let mut normalized = normalize_presentation(presentation);
    if normalized.num_generators() == 0 {
        normalized = FinitePresentation::new(vec!["x".into()], vec![vec![GenLetter::pos(0)]])?;
    }
    let n = normalized.num_generators();
    let g = 2 * n + 1;
    let q = uniform_spin_form(g);
    let pg = korkmaz_cadavid(g)?;

    let a_curves: Vec<Curve> = (1..=g)
        .map(|i| Curve::integral(format!("a{i}"), IntClass::x(g, i)))
        .collect();
    let mut relator_curves = Vec::with_capacity(normalized.relators().len());
    for (j, r) in normalized.relators().iter().enumerate() {
        let mut class = IntClass::zero(g);
        for l in r {
            class = class.try_add(&IntClass::y(g, l.gen + 1))?;
        }
        if !q.eval(&class.reduce())? {
            class = class.try_add(&IntClass::x(g, n + 1))?;
        }
        relator_curves.push(Curve::integral(format!("R{}", j + 1), class));
    }

    let mut p = pg.clone();
    for conj in a_curves.iter().chain(&relator_curves) {
        p = fiber_sum(&p, &pg, &TwistWord::single(conj.clone()))?;
    }
    let mut blocks = 1 + a_curves.len() + relator_curves.len();
    if relator_curves.len() % 2 == 1 {
        p = fiber_sum(&p, &pg, &TwistWord::identity())?;
        blocks += 1;
    }

    let spin = check_spin(&p, &q)?;
    let h1 = fibration_h1(&p);
    let conjugators: Vec<Curve> = a_curves.iter().chain(&relator_curves).cloned().collect();
    let relator_set = korkmaz_relator_set(&pg, &conjugators)?;
    let classes: Vec<IntClass> = relator_set
        .iter()
        .map(|c| c.class_int().expect("integral catalog").clone())
        .collect();
    let h1_relator_set = h1_quotient(g, &classes)?;
    let ab = abelianization(&normalized);
    let h1_matches = matches!(&h1, FibrationH1::Integral { group } if *group == ab)
        && h1_relator_set == ab;
    let cert = GroupFibrationCertificate {
        presentation: presentation.to_string(),
        normalized: normalized.to_string(),
        generators: n,
        relators: relator_curves.len(),
        genus: g,
        blocks,
        length: p.len(),
        boundary_power: p.boundary_power(),
        relation: check_relation(&p),
        spin_form: q.to_string(),
        spin: SpinSummary::from(&spin),
        relator_curves: relator_curves
            .iter()
            .map(|c| {
                format!(
                    "{} = {}",
                    c.label(),
                    c.class_int()
                        .expect("integral")
                        .display_with(crate::homology::LabelScheme::Ab)
                )
            })
            .collect(),
        abelianization: ab,
        h1,
        h1_relator_set,
        h1_matches,
    };
    Ok((p, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::LabelScheme;

    #[test]
    fn chain_pairings() {
        let c = chain_curves(5).unwrap();
        assert_eq!(c[3].class_int().unwrap(), &IntClass::x(5, 2));
        for i in 0..c.len() {
            for j in 0..c.len() {
                let p = c[i].class_int().unwrap().intersect(c[j].class_int().unwrap()).unwrap();
                let expected = match j as i64 - i as i64 {
                    1 => 1,
                    -1 => -1,
                    _ => 0,
                };
                assert_eq!(p, expected, "c{} . c{}", i + 1, j + 1);
            }
        }
    }

    #[test]
    fn building_block_middle_curve() {
        let c = building_block_curves(5).unwrap();
        assert_eq!(
            c[5].class_int().unwrap().display_with(LabelScheme::Ab),
            "2a3+b3"
        );
        assert!(korkmaz_cadavid(4).is_err());
    }

    #[test]
    fn chain_basis_coordinates() {
        let b2 = Mod2Class::from_indices(5, &[], &[1, 2, 3, 4, 5]);
        assert_eq!(chain_coordinates(&b2), vec![1, 5, 9]);
        let c = chain_curves(5).unwrap();
        for (i, curve) in c.iter().take(10).enumerate() {
            assert_eq!(chain_coordinates(curve.class_mod2()), vec![i + 1]);
        }
    }

    #[test]
    fn z_lengths() {
        let p0 = z_factorization(5, 0).unwrap();
        assert_eq!(p0.len(), 88);
        assert_eq!(p0.boundary_power(), 2);
        let p1 = z_factorization(5, 1).unwrap();
        assert_eq!(p1.len(), 92);
        assert!(z_factorization(5, 13).is_err());
    }
}
