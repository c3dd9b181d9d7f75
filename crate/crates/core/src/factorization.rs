//! Words in Dehn twists and positive factorizations.
//!
//! A word `t_1 t_2 ⋯ t_k` acts on a class by composition, rightmost letter
//! first: `(φψ)(c) = φ(ψ(c))`. The monodromy matrix of a factorization is the
//! ordered product `T_{c_1} T_{c_2} ⋯ T_{c_l}`.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::homology::{
    HomologyClass, IntClass, Mod2Class, Mod2SymplecticMatrix, QuadraticForm, SymplecticMatrix,
};

/// Labels of the eight pencil twists, in the order they replace `t_a t_b t_c t_d`.
pub const PENCIL_LABELS: [&str; 8] = ["B0", "B1", "B2", "C", "C'", "B2'", "B1'", "B0'"];

/// A simple closed curve, known through its homology class.
///
/// Curves compare by label and classes; the label never enters the algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Curve {
    label: String,
    mod2: Mod2Class,
    int: Option<IntClass>,
}

impl Curve {
    /// A curve known only mod 2.
    pub fn mod2(label: impl Into<String>, class: Mod2Class) -> Self {
        Curve {
            label: label.into(),
            mod2: class,
            int: None,
        }
    }

    /// A curve with an integral class; the mod-2 class is its reduction.
    pub fn integral(label: impl Into<String>, class: IntClass) -> Self {
        Curve {
            label: label.into(),
            mod2: class.reduce(),
            int: Some(class),
        }
    }

    pub fn try_new(
        label: impl Into<String>,
        mod2: Mod2Class,
        int: Option<IntClass>,
    ) -> Result<Self> {
        let label = label.into();
        if let Some(int) = &int {
            if int.genus() != mod2.genus() || int.reduce() != mod2 {
                return Err(Error::InconsistentClasses { label });
            }
        }
        Ok(Curve { label, mod2, int })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn class_mod2(&self) -> &Mod2Class {
        &self.mod2
    }

    pub fn class_int(&self) -> Option<&IntClass> {
        self.int.as_ref()
    }

    pub fn genus(&self) -> usize {
        self.mod2.genus()
    }

    pub fn renamed(&self, label: impl Into<String>) -> Curve {
        Curve {
            label: label.into(),
            ..self.clone()
        }
    }

    /// Drops the integral class.
    pub fn forget_integral(&self) -> Curve {
        Curve {
            int: None,
            ..self.clone()
        }
    }

    /// Image of this curve under `t_by` (or `t_by⁻¹`).
    pub fn twisted_by(&self, by: &Curve, inverse: bool) -> Result<Curve> {
        let mod2 = by.mod2.twist(&self.mod2, inverse)?;
        let int = match (&by.int, &self.int) {
            (Some(c), Some(v)) => Some(c.twist(v, inverse)?),
            _ => None,
        };
        Ok(Curve {
            label: twist_label(&by.label, inverse, &self.label),
            mod2,
            int,
        })
    }
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.int {
            Some(int) => write!(f, "{}[{} | {}]", self.label, self.mod2, int),
            None => write!(f, "{}[{}]", self.label, self.mod2),
        }
    }
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

/// `t_X(Y)` style labels; a twist followed by its inverse cancels.
fn twist_label(by: &str, inverse: bool, target: &str) -> String {
    let (undo, fresh) = if inverse {
        (format!("t_{by}("), format!("t_{by}^-1({target})"))
    } else {
        (format!("t_{by}^-1("), format!("t_{by}({target})"))
    };
    if let Some(inner) = target.strip_prefix(&undo).and_then(|r| r.strip_suffix(')')) {
        if balanced(inner) {
            return inner.to_string();
        }
    }
    fresh
}

/// Which class of a [`Curve`] a computation runs on.
pub trait CurveClass: HomologyClass {
    fn of(curve: &Curve) -> Result<&Self>;
}

impl CurveClass for Mod2Class {
    fn of(curve: &Curve) -> Result<&Self> {
        Ok(&curve.mod2)
    }
}

impl CurveClass for IntClass {
    fn of(curve: &Curve) -> Result<&Self> {
        curve
            .int
            .as_ref()
            .ok_or_else(|| Error::MissingIntegerClass(curve.label.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Letter {
    pub curve: Curve,
    pub inverse: bool,
}

impl Letter {
    pub fn twist(curve: Curve) -> Self {
        Letter {
            curve,
            inverse: false,
        }
    }

    pub fn inverse_twist(curve: Curve) -> Self {
        Letter {
            curve,
            inverse: true,
        }
    }
}

/// A word in twists and inverse twists, such as a conjugating mapping class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TwistWord {
    name: Option<String>,
    letters: Vec<Letter>,
}

impl TwistWord {
    pub fn identity() -> Self {
        TwistWord::default()
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        TwistWord {
            name: None,
            letters,
        }
    }

    /// The word `t_{c_1} ⋯ t_{c_k}` of positive twists.
    pub fn positive(curves: impl IntoIterator<Item = Curve>) -> Self {
        TwistWord::new(curves.into_iter().map(Letter::twist).collect())
    }

    pub fn single(curve: Curve) -> Self {
        TwistWord::positive([curve])
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// `self` followed by `other` (as a product `self · other`).
    pub fn then(&self, other: &TwistWord) -> TwistWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        TwistWord::new(letters)
    }

    pub fn inverse(&self) -> TwistWord {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| Letter {
                curve: l.curve.clone(),
                inverse: !l.inverse,
            })
            .collect();
        let name = self.name.as_ref().map(|n| format!("{n}^-1"));
        TwistWord { name, letters }
    }

    /// Explicit name, or the letters with runs collapsed (`t_c3^12 t_c2`).
    pub fn name(&self) -> String {
        if let Some(n) = &self.name {
            return n.clone();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = &self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == *l {
                run += 1;
            }
            let exp = if l.inverse { -(run as i64) } else { run as i64 };
            if exp == 1 {
                parts.push(format!("t_{}", l.curve.label));
            } else {
                parts.push(format!("t_{}^{}", l.curve.label, exp));
            }
            i += run;
        }
        parts.join(" ")
    }

    /// Image of a curve, labelled `name(label)`.
    pub fn apply_curve(&self, c: &Curve) -> Result<Curve> {
        if self.is_identity() {
            return Ok(c.clone());
        }
        let mod2 = apply_word(self, &c.mod2)?;
        let int = match &c.int {
            Some(v) if self.letters.iter().all(|l| l.curve.int.is_some()) => {
                Some(apply_word(self, v)?)
            }
            _ => None,
        };
        let label = if self.letters.len() == 1 && self.name.is_none() {
            let l = &self.letters[0];
            twist_label(&l.curve.label, l.inverse, &c.label)
        } else {
            format!("{}({})", self.name(), c.label)
        };
        Ok(Curve { label, mod2, int })
    }

    pub fn mod2_matrix(&self, genus: usize) -> Result<Mod2SymplecticMatrix> {
        let mut m = Mod2SymplecticMatrix::identity(genus);
        for l in &self.letters {
            m.right_mul_transvection(&l.curve.mod2)?;
        }
        Ok(m)
    }
}

/// Applies the word to a class, rightmost letter first.
pub fn apply_word<C: CurveClass>(w: &TwistWord, v: &C) -> Result<C> {
    let mut out = v.clone();
    for l in w.letters.iter().rev() {
        out = C::of(&l.curve)?.twist(&out, l.inverse)?;
    }
    Ok(out)
}

/// An ordered word of positive twists whose lift to the one-boundary surface
/// equals `t_δ^k`, `k = boundary_power`.
#[derive(Clone)]
pub struct PositiveFactorization {
    genus: usize,
    twists: Vec<Curve>,
    boundary_power: u32,
    provenance: Vec<String>,
}

/// Equality ignores the provenance trail.
impl PartialEq for PositiveFactorization {
    fn eq(&self, other: &Self) -> bool {
        self.genus == other.genus
            && self.boundary_power == other.boundary_power
            && self.twists == other.twists
    }
}

impl Eq for PositiveFactorization {}

impl fmt::Debug for PositiveFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PositiveFactorization")
            .field("genus", &self.genus)
            .field("boundary_power", &self.boundary_power)
            .field("len", &self.twists.len())
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl PositiveFactorization {
    pub fn new(genus: usize, twists: Vec<Curve>, boundary_power: u32) -> Result<Self> {
        if twists.is_empty() {
            return Err(Error::precondition("a positive factorization needs at least one twist"));
        }
        for c in &twists {
            if c.genus() != genus {
                return Err(Error::GenusMismatch {
                    expected: genus,
                    found: c.genus(),
                });
            }
        }
        Ok(PositiveFactorization {
            genus,
            twists,
            boundary_power,
            provenance: Vec::new(),
        })
    }

    pub fn with_provenance(mut self, step: impl Into<String>) -> Self {
        self.provenance.push(step.into());
        self
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn len(&self) -> usize {
        self.twists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.twists.is_empty()
    }

    pub fn twists(&self) -> &[Curve] {
        &self.twists
    }

    pub fn boundary_power(&self) -> u32 {
        self.boundary_power
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn has_integer_classes(&self) -> bool {
        self.twists.iter().all(|c| c.int.is_some())
    }

    /// Relabels every twist; classes are untouched.
    pub fn relabel(&self, mut f: impl FnMut(usize, &Curve) -> String, note: &str) -> Self {
        let twists = self
            .twists
            .iter()
            .enumerate()
            .map(|(i, c)| c.renamed(f(i, c)))
            .collect();
        let mut out = PositiveFactorization {
            twists,
            ..self.clone()
        };
        out.provenance.push(format!("relabel {note}"));
        out
    }

    pub fn mod2_product(&self) -> Mod2SymplecticMatrix {
        let mut m = Mod2SymplecticMatrix::identity(self.genus);
        for c in &self.twists {
            m.right_mul_transvection(&c.mod2)
                .expect("genus checked at construction");
        }
        m
    }

    pub fn int_product(&self) -> Result<SymplecticMatrix> {
        let mut m = SymplecticMatrix::identity(self.genus);
        for c in &self.twists {
            m.right_mul_transvection(IntClass::of(c)?, false)?;
        }
        Ok(m)
    }

    /// Canonical JSON form.
    pub fn to_json(&self) -> Value {
        let repr = FactorizationRepr {
            genus: self.genus,
            boundary_power: self.boundary_power,
            twists: self
                .twists
                .iter()
                .map(|c| CurveRepr {
                    label: c.label.clone(),
                    mod2: c.mod2.to_string(),
                    int: c.int.as_ref().map(|i| i.coords().to_vec()),
                })
                .collect(),
            provenance: self.provenance.clone(),
        };
        serde_json::to_value(repr).expect("plain data serializes")
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let repr: FactorizationRepr = serde_json::from_value(value.clone())
            .map_err(|e| Error::parse("factorization JSON", e.to_string()))?;
        let twists = repr
            .twists
            .into_iter()
            .map(|c| {
                let mod2 = Mod2Class::parse(&c.mod2, repr.genus)?;
                let int = c.int.map(IntClass::from_coords).transpose()?;
                Curve::try_new(c.label, mod2, int)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut p = PositiveFactorization::new(repr.genus, twists, repr.boundary_power)?;
        p.provenance = repr.provenance;
        Ok(p)
    }
}

#[derive(Serialize, Deserialize)]
struct CurveRepr {
    label: String,
    mod2: String,
    int: Option<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct FactorizationRepr {
    genus: usize,
    boundary_power: u32,
    twists: Vec<CurveRepr>,
    #[serde(default)]
    provenance: Vec<String>,
}

fn check_same_genus(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::GenusMismatch { expected, found });
    }
    Ok(())
}

/// `P^w = ∏ t_{w(c_i)}`
pub fn conjugate(p: &PositiveFactorization, w: &TwistWord) -> Result<PositiveFactorization> {
    for l in w.letters() {
        check_same_genus(p.genus, l.curve.genus())?;
    }
    let twists = p
        .twists
        .iter()
        .map(|c| w.apply_curve(c))
        .collect::<Result<Vec<_>>>()?;
    let mut provenance = p.provenance.clone();
    provenance.push(format!("conjugate by {}", w.name()));
    Ok(PositiveFactorization {
        genus: p.genus,
        twists,
        boundary_power: p.boundary_power,
        provenance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Left,
    Right,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Direction::Left),
            "right" => Ok(Direction::Right),
            other => Err(Error::parse(other, "expected `left` or `right`")),
        }
    }
}

/// Elementary Hurwitz move at 1-based position `i`:
/// right: `(t_a, t_b) ↦ (t_{t_a(b)}, t_a)`; left: `(t_a, t_b) ↦ (t_b, t_{t_b⁻¹(a)})`.
pub fn hurwitz_move(
    p: &PositiveFactorization,
    i: usize,
    dir: Direction,
) -> Result<PositiveFactorization> {
    let len = p.twists.len();
    if i == 0 || i >= len {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: len.saturating_sub(1),
        });
    }
    let (a, b) = (&p.twists[i - 1], &p.twists[i]);
    let (first, second) = match dir {
        Direction::Right => (b.twisted_by(a, false)?, a.clone()),
        Direction::Left => (b.clone(), a.twisted_by(b, true)?),
    };
    let mut out = p.clone();
    out.twists[i - 1] = first;
    out.twists[i] = second;
    out.provenance.push(format!("hurwitz {i} {dir:?}").to_lowercase());
    Ok(out)
}

/// Swaps two adjacent twists along curves with zero integral intersection.
pub fn commute(p: &PositiveFactorization, i: usize) -> Result<PositiveFactorization> {
    let len = p.twists.len();
    if i == 0 || i >= len {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: len.saturating_sub(1),
        });
    }
    certify_commuting(&p.twists[i - 1], &p.twists[i])?;
    let mut out = p.clone();
    out.twists.swap(i - 1, i);
    out.provenance.push(format!("commute {i}"));
    Ok(out)
}

fn certify_commuting(a: &Curve, b: &Curve) -> Result<()> {
    let disjoint = match (&a.int, &b.int) {
        (Some(u), Some(v)) => u.intersect(v)? == 0,
        _ => false,
    };
    if !disjoint {
        return Err(Error::precondition(format!(
            "twists `{}` and `{}` are not certified to commute",
            a.label, b.label
        )));
    }
    Ok(())
}

/// Reorders the twists starting at 1-based position `start` into `target`
/// using adjacent swaps of commuting twists only.
pub fn rearrange_commuting(
    p: &PositiveFactorization,
    start: usize,
    target: &[Curve],
) -> Result<PositiveFactorization> {
    let len = p.twists.len();
    if start == 0 || start - 1 + target.len() > len {
        return Err(Error::IndexOutOfRange { index: start, len });
    }
    let lo = start - 1;
    let mut cur = p.twists[lo..lo + target.len()].to_vec();
    let mut swaps = 0usize;
    for (i, want) in target.iter().enumerate() {
        let j = (i..cur.len()).find(|&j| cur[j] == *want).ok_or_else(|| {
            Error::precondition(format!(
                "`{}` is not available at position {}",
                want.label,
                start + i
            ))
        })?;
        for k in (i..j).rev() {
            certify_commuting(&cur[k], &cur[k + 1])?;
            cur.swap(k, k + 1);
            swaps += 1;
        }
    }
    let mut out = p.clone();
    out.twists[lo..lo + target.len()].clone_from_slice(&cur);
    out.provenance.push(format!(
        "rearrange positions {start}..{} by {swaps} commutations",
        start - 1 + target.len()
    ));
    Ok(out)
}

/// Twisted fiber sum `P1 · P2^w`.
pub fn fiber_sum(
    p1: &PositiveFactorization,
    p2: &PositiveFactorization,
    w: &TwistWord,
) -> Result<PositiveFactorization> {
    check_same_genus(p1.genus, p2.genus)?;
    let conj = conjugate(p2, w)?;
    let mut twists = p1.twists.clone();
    twists.extend(conj.twists);
    let mut provenance = p1.provenance.clone();
    provenance.push(format!(
        "fiber sum with [{}] conjugated by {}",
        p2.provenance.join("; "),
        if w.is_identity() {
            "identity".to_string()
        } else {
            w.name()
        }
    ));
    Ok(PositiveFactorization {
        genus: p1.genus,
        twists,
        boundary_power: p1.boundary_power + p2.boundary_power,
        provenance,
    })
}

/// Images of the boundary and interior twist curves of the genus-2 pencil
/// under an embedding of the four-holed genus-2 surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsurfaceImage {
    boundary: [Curve; 4],
    interior: [Curve; 8],
}

impl SubsurfaceImage {
    /// Validates that the boundary images are pairwise disjoint mod 2, sum
    /// to zero mod 2, and are disjoint mod 2 from every interior image.
    pub fn new(boundary: [Curve; 4], interior: [Curve; 8]) -> Result<Self> {
        let genus = boundary[0].genus();
        for c in boundary.iter().chain(interior.iter()) {
            check_same_genus(genus, c.genus())?;
        }
        let mut sum = Mod2Class::zero(genus);
        for (i, a) in boundary.iter().enumerate() {
            sum += &a.mod2;
            for b in &boundary[i + 1..] {
                if a.mod2.intersect(&b.mod2)? {
                    return Err(Error::precondition(format!(
                        "boundary images `{}` and `{}` intersect",
                        a.label, b.label
                    )));
                }
            }
            for v in &interior {
                if a.mod2.intersect(&v.mod2)? {
                    return Err(Error::precondition(format!(
                        "interior image `{}` meets boundary image `{}`",
                        v.label, a.label
                    )));
                }
            }
        }
        if !sum.is_zero() {
            return Err(Error::precondition(
                "boundary images do not sum to zero mod 2",
            ));
        }
        Ok(SubsurfaceImage { boundary, interior })
    }

    pub fn boundary(&self) -> &[Curve; 4] {
        &self.boundary
    }

    pub fn interior(&self) -> &[Curve; 8] {
        &self.interior
    }

    pub fn genus(&self) -> usize {
        self.boundary[0].genus()
    }
}

/// Replaces the block `t_a t_b t_c t_d` starting at 1-based position `at`
/// with the eight interior twists.
pub fn breed(
    p: &PositiveFactorization,
    at: usize,
    s: &SubsurfaceImage,
) -> Result<PositiveFactorization> {
    check_same_genus(p.genus, s.genus())?;
    let len = p.twists.len();
    if at == 0 || at + 3 > len {
        return Err(Error::IndexOutOfRange {
            index: at,
            len: len.saturating_sub(3),
        });
    }
    let block = &p.twists[at - 1..at + 3];
    if block != s.boundary.as_slice() {
        return Err(Error::precondition(format!(
            "no boundary block at position {at}: found {}",
            block
                .iter()
                .map(|c| c.label.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        )));
    }
    let mut twists = Vec::with_capacity(len + 4);
    twists.extend_from_slice(&p.twists[..at - 1]);
    twists.extend(s.interior.iter().cloned());
    twists.extend_from_slice(&p.twists[at + 3..]);
    let mut provenance = p.provenance.clone();
    provenance.push(format!("breed at {at}"));
    Ok(PositiveFactorization {
        genus: p.genus,
        twists,
        boundary_power: p.boundary_power,
        provenance,
    })
}

/// 1-based start positions of every occurrence of the boundary block.
pub fn boundary_block_positions(p: &PositiveFactorization, s: &SubsurfaceImage) -> Vec<usize> {
    p.twists
        .windows(4)
        .enumerate()
        .filter(|(_, w)| *w == s.boundary.as_slice())
        .map(|(i, _)| i + 1)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub mod2: bool,
    /// `None` when some twist lacks an integral class.
    pub integral: Option<bool>,
}

impl RelationCheck {
    pub fn holds(&self) -> bool {
        self.mod2 && self.integral.unwrap_or(true)
    }
}

pub fn check_relation(p: &PositiveFactorization) -> RelationCheck {
    let mod2 = p.mod2_product().is_identity();
    let integral = if p.has_integer_classes() {
        Some(
            p.int_product()
                .expect("integer classes present")
                .is_identity(),
        )
    } else {
        None
    };
    RelationCheck { mod2, integral }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpinValue {
    pub label: String,
    pub q: u8,
}

/// Evidence for the spin criterion: every vanishing class has `q = 1` and
/// the boundary power is even.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpinCertificate {
    pub values: Vec<SpinValue>,
    pub boundary_power: u32,
    pub all_ones: bool,
    pub power_even: bool,
    pub verdict: bool,
}

impl SpinCertificate {
    pub fn failing_labels(&self) -> Vec<&str> {
        self.values
            .iter()
            .filter(|v| v.q == 0)
            .map(|v| v.label.as_str())
            .collect()
    }
}

pub fn check_spin(p: &PositiveFactorization, q: &QuadraticForm) -> Result<SpinCertificate> {
    check_same_genus(p.genus, q.genus())?;
    let values = p
        .twists
        .iter()
        .map(|c| {
            Ok(SpinValue {
                label: c.label.clone(),
                q: q.eval(&c.mod2)? as u8,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_ones = values.iter().all(|v| v.q == 1);
    let power_even = p.boundary_power % 2 == 0;
    Ok(SpinCertificate {
        values,
        boundary_power: p.boundary_power,
        all_ones,
        power_even,
        verdict: all_ones && power_even,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> (Curve, Curve) {
        (
            Curve::integral("a", IntClass::x(1, 1)),
            Curve::integral("b", IntClass::y(1, 1)),
        )
    }

    /// `(t_a t_b)^6`, the elliptic fibration on E(1).
    fn e1() -> PositiveFactorization {
        let (a, b) = torus();
        let twists = (0..6).flat_map(|_| [a.clone(), b.clone()]).collect();
        PositiveFactorization::new(1, twists, 1).unwrap()
    }

    #[test]
    fn identity_word_fixes_classes() {
        let v = IntClass::parse("x1+y2", 2).unwrap();
        assert_eq!(apply_word(&TwistWord::identity(), &v).unwrap(), v);
        let p = e1();
        assert_eq!(conjugate(&p, &TwistWord::identity()).unwrap(), p);
    }

    #[test]
    fn labels_cancel_under_inverse_twists() {
        let (a, b) = torus();
        let tb = b.twisted_by(&a, false).unwrap();
        assert_eq!(tb.label(), "t_a(b)");
        assert_eq!(tb.twisted_by(&a, true).unwrap(), b);
    }

    #[test]
    fn hurwitz_right_then_left_restores() {
        let p = e1();
        for i in 1..p.len() {
            let moved = hurwitz_move(&p, i, Direction::Right).unwrap();
            assert_eq!(check_relation(&moved), check_relation(&p));
            let back = hurwitz_move(&moved, i, Direction::Left).unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn hurwitz_index_errors() {
        let p = e1();
        assert!(matches!(
            hurwitz_move(&p, 0, Direction::Right),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(hurwitz_move(&p, 12, Direction::Left).is_err());
    }

    #[test]
    fn e1_relation_and_spin() {
        let p = e1();
        assert_eq!(
            check_relation(&p),
            RelationCheck {
                mod2: true,
                integral: Some(true)
            }
        );
        let q = QuadraticForm::parse("x1:1 y1:1", 1).unwrap();
        let cert = check_spin(&p, &q).unwrap();
        assert!(cert.all_ones);
        assert!(!cert.power_even);
        assert!(!cert.verdict);
    }

    #[test]
    fn fiber_sum_adds_powers_and_lengths() {
        let p = e1();
        let (a, _) = torus();
        let s = fiber_sum(&p, &p, &TwistWord::single(a)).unwrap();
        assert_eq!(s.len(), 24);
        assert_eq!(s.boundary_power(), 2);
        assert!(check_relation(&s).holds());
        let plain = fiber_sum(&p, &p, &TwistWord::identity()).unwrap();
        assert_eq!(&plain.twists()[12..], p.twists());
        assert!(fiber_sum(&p, &PositiveFactorization::new(2, vec![Curve::mod2("z", Mod2Class::x(2, 1))], 0).unwrap(), &TwistWord::identity()).is_err());
    }

    #[test]
    fn commute_requires_disjointness() {
        let g = 2;
        let a = Curve::integral("a", IntClass::x(g, 1));
        let b = Curve::integral("b", IntClass::x(g, 2));
        let c = Curve::integral("c", IntClass::y(g, 2));
        let p = PositiveFactorization::new(g, vec![a.clone(), b.clone(), c], 0).unwrap();
        let swapped = commute(&p, 1).unwrap();
        assert_eq!(swapped.twists()[0], b);
        assert!(commute(&p, 2).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = e1().with_provenance("E(1)");
        let back = PositiveFactorization::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.provenance(), p.provenance());
    }

    #[test]
    fn inconsistent_curve_rejected() {
        let err = Curve::try_new("z", Mod2Class::x(1, 1), Some(IntClass::y(1, 1))).unwrap_err();
        assert!(matches!(err, Error::InconsistentClasses { .. }));
        assert!(PositiveFactorization::new(1, vec![], 0).is_err());
    }

    #[test]
    fn word_names_collapse_runs() {
        let (a, b) = torus();
        let mut letters = vec![Letter::twist(a.clone()); 3];
        letters.push(Letter::inverse_twist(b));
        assert_eq!(TwistWord::new(letters).name(), "t_a^3 t_b^-1");
        assert_eq!(TwistWord::single(a).inverse().name(), "t_a^-1");
    }
}
