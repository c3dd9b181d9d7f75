//! First homology of a closed oriented surface of genus `g`.
//!
//! Coordinates are taken in a fixed symplectic basis `x_1..x_g, y_1..y_g`
//! with `<x_i, y_j> = δ_ij` and `<x_i, x_j> = <y_i, y_j> = 0`. Coordinate
//! index `i < g` is `x_{i+1}`, index `g + i` is `y_{i+1}`.
//!
//! A positive Dehn twist along `c` acts on homology by the transvection
//! `v ↦ v + <c, v> c`. The map does not depend on the orientation of `c`,
//! so unsigned curve data is enough to drive it.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Largest genus accepted by [`enumerate_spin_structures`] (`2^16` forms).
pub const MAX_ENUMERATION_GENUS: usize = 8;

/// Display names for the basis. The algebra is identical for both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum LabelScheme {
    /// `x_i, y_i`
    #[default]
    Xy,
    /// `a_i, b_i` with `a_i = x_i`, `b_i = y_i`
    Ab,
}

impl LabelScheme {
    fn letters(self) -> (char, char) {
        match self {
            LabelScheme::Xy => ('x', 'y'),
            LabelScheme::Ab => ('a', 'b'),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurfaceBasis {
    genus: usize,
    scheme: LabelScheme,
}

impl SurfaceBasis {
    pub fn new(genus: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::precondition("genus must be positive"));
        }
        Ok(SurfaceBasis {
            genus,
            scheme: LabelScheme::Xy,
        })
    }

    pub fn with_scheme(mut self, scheme: LabelScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn scheme(&self) -> LabelScheme {
        self.scheme
    }

    pub fn dimension(&self) -> usize {
        2 * self.genus
    }

    pub fn labels(&self) -> Vec<String> {
        let (x, y) = self.scheme.letters();
        (1..=self.genus)
            .map(|i| format!("{x}{i}"))
            .chain((1..=self.genus).map(|i| format!("{y}{i}")))
            .collect()
    }

    /// The standard symplectic form `J` in this basis.
    pub fn pairing_matrix(&self) -> IntMatrix {
        standard_form(self.genus)
    }
}

/// `J` with `J[x_i][y_i] = 1` and `J[y_i][x_i] = -1`, so that `<u, v> = uᵀ J v`.
pub fn standard_form(genus: usize) -> IntMatrix {
    let mut j = IntMatrix::zeros(2 * genus, 2 * genus);
    for i in 0..genus {
        j[(i, genus + i)] = BigInt::one();
        j[(genus + i, i)] = -BigInt::one();
    }
    j
}

/// Behaviour shared by mod-2 and integral classes.
pub trait HomologyClass: Clone + PartialEq + fmt::Display {
    type Scalar;

    fn genus(&self) -> usize;

    fn is_zero(&self) -> bool;

    /// Algebraic intersection `<self, other>`.
    fn intersect(&self, other: &Self) -> Result<Self::Scalar>;

    /// Image of `v` under the twist along `self` (or its inverse).
    fn twist(&self, v: &Self, inverse: bool) -> Result<Self>;

    fn reduce(&self) -> Mod2Class;
}

pub fn intersect<C: HomologyClass>(u: &C, v: &C) -> Result<C::Scalar> {
    u.intersect(v)
}

/// `v ↦ v + <c, v> c`
pub fn transvect<C: HomologyClass>(c: &C, v: &C) -> Result<C> {
    c.twist(v, false)
}

fn check_genus(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::GenusMismatch { expected, found })
    }
}

fn genus_from_len(len: usize) -> Result<usize> {
    if len == 0 || len % 2 != 0 {
        return Err(Error::BadCoordinateLength { len });
    }
    Ok(len / 2)
}

/// Splits a sparse term like `y12` or `-2x3` into (coefficient, letter, index).
fn parse_term(term: &str, input: &str) -> Result<(i64, char, usize)> {
    let pos = term
        .find(|ch: char| ch.is_ascii_alphabetic())
        .ok_or_else(|| Error::parse(input, format!("term `{term}` has no basis letter")))?;
    let (coef, rest) = term.split_at(pos);
    let coef = match coef {
        "" | "+" => 1,
        "-" => -1,
        c => c
            .parse::<i64>()
            .map_err(|_| Error::parse(input, format!("bad coefficient `{c}`")))?,
    };
    let mut chars = rest.chars();
    let letter = chars.next().expect("non-empty by construction");
    let index: usize = chars
        .as_str()
        .parse()
        .map_err(|_| Error::parse(input, format!("bad basis index in `{term}`")))?;
    Ok((coef, letter, index))
}

/// Splits `x1+y3-2y4` into signed terms.
fn split_terms(text: &str) -> Vec<String> {
    let mut terms = Vec::new();
    let mut current = String::new();
    for ch in text.chars().filter(|c| !c.is_whitespace()) {
        if (ch == '+' || ch == '-') && !current.is_empty() && !current.ends_with(['+', '-']) {
            terms.push(std::mem::take(&mut current));
        }
        current.push(ch);
    }
    if !current.is_empty() {
        terms.push(current);
    }
    terms
}

fn parse_sparse(text: &str, genus: usize) -> Result<Vec<i64>> {
    let mut coords = vec![0i64; 2 * genus];
    let trimmed = text.trim();
    if trimmed == "0" {
        return Ok(coords);
    }
    if trimmed.is_empty() {
        return Err(Error::parse(text, "empty class"));
    }
    for term in split_terms(trimmed) {
        let (coef, letter, index) = parse_term(&term, text)?;
        if index == 0 || index > genus {
            return Err(Error::parse(
                text,
                format!("basis index {index} out of range 1..={genus}"),
            ));
        }
        let slot = match letter {
            'x' | 'a' => index - 1,
            'y' | 'b' => genus + index - 1,
            other => {
                return Err(Error::parse(text, format!("unknown basis letter `{other}`")));
            }
        };
        coords[slot] = coords[slot]
            .checked_add(coef)
            .ok_or(Error::Overflow("class parsing"))?;
    }
    Ok(coords)
}

// ---------------------------------------------------------------------------
// Mod-2 classes

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mod2Class {
    genus: usize,
    x: Bits,
    y: Bits,
}

impl Mod2Class {
    pub fn zero(genus: usize) -> Self {
        Mod2Class {
            genus,
            x: Bits::zeros(genus),
            y: Bits::zeros(genus),
        }
    }

    /// The class `x_i` (1-based).
    pub fn x(genus: usize, i: usize) -> Self {
        assert!((1..=genus).contains(&i), "x{i} out of range for genus {genus}");
        let mut c = Mod2Class::zero(genus);
        c.x.set(i - 1, true);
        c
    }

    /// The class `y_i` (1-based).
    pub fn y(genus: usize, i: usize) -> Self {
        assert!((1..=genus).contains(&i), "y{i} out of range for genus {genus}");
        let mut c = Mod2Class::zero(genus);
        c.y.set(i - 1, true);
        c
    }

    /// Sum of the listed `x_i` and `y_j` (repeats cancel).
    pub fn from_indices(genus: usize, xs: &[usize], ys: &[usize]) -> Self {
        let mut c = Mod2Class::zero(genus);
        for &i in xs {
            c += &Mod2Class::x(genus, i);
        }
        for &j in ys {
            c += &Mod2Class::y(genus, j);
        }
        c
    }

    /// Coordinates `x_1..x_g, y_1..y_g`, read mod 2.
    pub fn from_coords(coords: &[i64]) -> Result<Self> {
        let genus = genus_from_len(coords.len())?;
        Ok(Mod2Class {
            genus,
            x: Bits::from_fn(genus, |i| coords[i].rem_euclid(2) == 1),
            y: Bits::from_fn(genus, |i| coords[genus + i].rem_euclid(2) == 1),
        })
    }

    /// Parses the sparse form `x1+y3+y4` (`a`/`b` accepted as aliases, `0` for zero).
    /// Coefficients are read mod 2.
    pub fn parse(text: &str, genus: usize) -> Result<Self> {
        Mod2Class::from_coords(&parse_sparse(text, genus)?)
    }

    pub fn coord(&self, index: usize) -> bool {
        if index < self.genus {
            self.x.get(index)
        } else {
            self.y.get(index - self.genus)
        }
    }

    pub fn coords(&self) -> Vec<u8> {
        (0..2 * self.genus).map(|i| self.coord(i) as u8).collect()
    }

    pub fn x_part(&self) -> &Bits {
        &self.x
    }

    pub fn y_part(&self) -> &Bits {
        &self.y
    }

    /// Indices (0-based, `2g` range) of the basis vectors in the support.
    pub fn support(&self) -> Vec<usize> {
        self.x
            .ones()
            .chain(self.y.ones().map(|i| i + self.genus))
            .collect()
    }

    /// Basis vector with 0-based coordinate index.
    pub fn basis_vector(genus: usize, index: usize) -> Self {
        if index < genus {
            Mod2Class::x(genus, index + 1)
        } else {
            Mod2Class::y(genus, index - genus + 1)
        }
    }

    pub fn try_add(&self, other: &Mod2Class) -> Result<Mod2Class> {
        check_genus(self.genus, other.genus)?;
        let mut out = self.clone();
        out.x.xor_assign(&other.x);
        out.y.xor_assign(&other.y);
        Ok(out)
    }

    pub fn display_with(&self, scheme: LabelScheme) -> String {
        let (xl, yl) = scheme.letters();
        let terms: Vec<String> = self
            .x
            .ones()
            .map(|i| format!("{xl}{}", i + 1))
            .chain(self.y.ones().map(|i| format!("{yl}{}", i + 1)))
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}

impl HomologyClass for Mod2Class {
    type Scalar = bool;

    fn genus(&self) -> usize {
        self.genus
    }

    fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    fn intersect(&self, other: &Self) -> Result<bool> {
        check_genus(self.genus, other.genus)?;
        Ok(self.x.and_parity(&other.y) ^ self.y.and_parity(&other.x))
    }

    fn twist(&self, v: &Self, _inverse: bool) -> Result<Self> {
        if self.intersect(v)? {
            v.try_add(self)
        } else {
            Ok(v.clone())
        }
    }

    fn reduce(&self) -> Mod2Class {
        self.clone()
    }
}

impl std::ops::AddAssign<&Mod2Class> for Mod2Class {
    fn add_assign(&mut self, rhs: &Mod2Class) {
        assert_eq!(self.genus, rhs.genus, "genus mismatch");
        self.x.xor_assign(&rhs.x);
        self.y.xor_assign(&rhs.y);
    }
}

impl std::ops::Add<&Mod2Class> for &Mod2Class {
    type Output = Mod2Class;

    fn add(self, rhs: &Mod2Class) -> Mod2Class {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl fmt::Display for Mod2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(LabelScheme::Xy))
    }
}

impl fmt::Debug for Mod2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mod2Class(g={}, {})", self.genus, self)
    }
}

// ---------------------------------------------------------------------------
// Integral classes

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntClass {
    genus: usize,
    coords: Vec<i64>,
}

impl IntClass {
    pub fn zero(genus: usize) -> Self {
        IntClass {
            genus,
            coords: vec![0; 2 * genus],
        }
    }

    pub fn x(genus: usize, i: usize) -> Self {
        assert!((1..=genus).contains(&i), "x{i} out of range for genus {genus}");
        let mut c = IntClass::zero(genus);
        c.coords[i - 1] = 1;
        c
    }

    pub fn y(genus: usize, i: usize) -> Self {
        assert!((1..=genus).contains(&i), "y{i} out of range for genus {genus}");
        let mut c = IntClass::zero(genus);
        c.coords[genus + i - 1] = 1;
        c
    }

    pub fn from_coords(coords: Vec<i64>) -> Result<Self> {
        let genus = genus_from_len(coords.len())?;
        Ok(IntClass { genus, coords })
    }

    /// Parses signed sparse notation, e.g. `y1-y2` or `2x1+y3`.
    pub fn parse(text: &str, genus: usize) -> Result<Self> {
        IntClass::from_coords(parse_sparse(text, genus)?)
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn to_bigint(&self) -> Vec<BigInt> {
        self.coords.iter().map(|&c| BigInt::from(c)).collect()
    }

    pub fn try_add(&self, other: &IntClass) -> Result<IntClass> {
        self.combine(other, 1)
    }

    pub fn try_sub(&self, other: &IntClass) -> Result<IntClass> {
        self.combine(other, -1)
    }

    fn combine(&self, other: &IntClass, sign: i64) -> Result<IntClass> {
        check_genus(self.genus, other.genus)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| {
                b.checked_mul(sign)
                    .and_then(|b| a.checked_add(b))
                    .ok_or(Error::Overflow("class arithmetic"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntClass {
            genus: self.genus,
            coords,
        })
    }

    pub fn negated(&self) -> IntClass {
        IntClass {
            genus: self.genus,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn display_with(&self, scheme: LabelScheme) -> String {
        let (xl, yl) = scheme.letters();
        let mut out = String::new();
        for (i, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = if i < self.genus {
                format!("{xl}{}", i + 1)
            } else {
                format!("{yl}{}", i - self.genus + 1)
            };
            let sign = if c < 0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                out.push_str(&format!("{sign}{name}"));
            } else {
                out.push_str(&format!("{sign}{mag}{name}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl HomologyClass for IntClass {
    type Scalar = i64;

    fn genus(&self) -> usize {
        self.genus
    }

    fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn intersect(&self, other: &Self) -> Result<i64> {
        check_genus(self.genus, other.genus)?;
        let g = self.genus;
        let mut acc: i64 = 0;
        for i in 0..g {
            let term = self.coords[i]
                .checked_mul(other.coords[g + i])
                .and_then(|a| {
                    self.coords[g + i]
                        .checked_mul(other.coords[i])
                        .and_then(|b| a.checked_sub(b))
                })
                .ok_or(Error::Overflow("intersection pairing"))?;
            acc = acc
                .checked_add(term)
                .ok_or(Error::Overflow("intersection pairing"))?;
        }
        Ok(acc)
    }

    fn twist(&self, v: &Self, inverse: bool) -> Result<Self> {
        let mut k = self.intersect(v)?;
        if inverse {
            k = -k;
        }
        if k == 0 {
            return Ok(v.clone());
        }
        let coords = v
            .coords
            .iter()
            .zip(&self.coords)
            .map(|(&a, &c)| {
                c.checked_mul(k)
                    .and_then(|d| a.checked_add(d))
                    .ok_or(Error::Overflow("transvection"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntClass {
            genus: v.genus,
            coords,
        })
    }

    fn reduce(&self) -> Mod2Class {
        Mod2Class::from_coords(&self.coords).expect("valid length by construction")
    }
}

impl std::ops::Add<&IntClass> for &IntClass {
    type Output = IntClass;

    fn add(self, rhs: &IntClass) -> IntClass {
        self.try_add(rhs).expect("integer class addition")
    }
}

impl std::ops::Sub<&IntClass> for &IntClass {
    type Output = IntClass;

    fn sub(self, rhs: &IntClass) -> IntClass {
        self.try_sub(rhs).expect("integer class subtraction")
    }
}

impl fmt::Display for IntClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(LabelScheme::Xy))
    }
}

impl fmt::Debug for IntClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntClass(g={}, {})", self.genus, self)
    }
}

// ---------------------------------------------------------------------------
// Quadratic forms

/// A quadratic refinement of the mod-2 intersection form, stored by its
/// values on the basis vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticForm {
    genus: usize,
    x: Bits,
    y: Bits,
}

impl QuadraticForm {
    pub fn new(x_values: &[bool], y_values: &[bool]) -> Result<Self> {
        if x_values.len() != y_values.len() || x_values.is_empty() {
            return Err(Error::BadCoordinateLength {
                len: x_values.len() + y_values.len(),
            });
        }
        let genus = x_values.len();
        Ok(QuadraticForm {
            genus,
            x: Bits::from_fn(genus, |i| x_values[i]),
            y: Bits::from_fn(genus, |i| y_values[i]),
        })
    }

    pub fn from_fn(genus: usize, x: impl Fn(usize) -> bool, y: impl Fn(usize) -> bool) -> Self {
        QuadraticForm {
            genus,
            x: Bits::from_fn(genus, |i| x(i + 1)),
            y: Bits::from_fn(genus, |i| y(i + 1)),
        }
    }

    /// Basis values packed little-endian: bit `i` is the value on coordinate `i`.
    pub fn from_mask(genus: usize, mask: u64) -> Self {
        QuadraticForm {
            genus,
            x: Bits::from_fn(genus, |i| (mask >> i) & 1 == 1),
            y: Bits::from_fn(genus, |i| (mask >> (genus + i)) & 1 == 1),
        }
    }

    /// Parses `x*:1 y1:1 y3:0 *:0` style assignments. Unassigned basis values
    /// are 0 and later assignments override earlier ones.
    pub fn parse(text: &str, genus: usize) -> Result<Self> {
        let mut x = vec![false; genus];
        let mut y = vec![false; genus];
        for tok in text.split_whitespace() {
            let (target, value) = tok
                .split_once(':')
                .ok_or_else(|| Error::parse(text, format!("`{tok}` is not `basis:bit`")))?;
            let value = match value {
                "0" => false,
                "1" => true,
                other => return Err(Error::parse(text, format!("`{other}` is not a bit"))),
            };
            match target {
                "*" => {
                    x.iter_mut().chain(y.iter_mut()).for_each(|v| *v = value);
                }
                "x*" | "a*" => x.iter_mut().for_each(|v| *v = value),
                "y*" | "b*" => y.iter_mut().for_each(|v| *v = value),
                t => {
                    let (coef, letter, index) = parse_term(t, text)?;
                    if coef != 1 || index == 0 || index > genus {
                        return Err(Error::parse(text, format!("bad basis element `{t}`")));
                    }
                    match letter {
                        'x' | 'a' => x[index - 1] = value,
                        'y' | 'b' => y[index - 1] = value,
                        other => {
                            return Err(Error::parse(text, format!("unknown basis letter `{other}`")))
                        }
                    }
                }
            }
        }
        QuadraticForm::new(&x, &y)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Value on the basis vector with 0-based coordinate index.
    pub fn basis_value(&self, index: usize) -> bool {
        if index < self.genus {
            self.x.get(index)
        } else {
            self.y.get(index - self.genus)
        }
    }

    pub fn basis_values(&self) -> Vec<u8> {
        (0..2 * self.genus).map(|i| self.basis_value(i) as u8).collect()
    }

    /// `q(v)`, expanding `v` into basis vectors:
    /// `q(Σ e_i) = Σ q(e_i) + Σ_{i<j} e_i·e_j`. Among basis vectors the only
    /// pairs with nonzero product are `(x_k, y_k)`.
    pub fn eval(&self, v: &Mod2Class) -> Result<bool> {
        check_genus(self.genus, v.genus())?;
        let linear = self.x.and_parity(v.x_part()) ^ self.y.and_parity(v.y_part());
        let cross = v.x_part().and_parity(v.y_part());
        Ok(linear ^ cross)
    }

    /// `Σ q(d_i) + Σ_{i<j} d_i·d_j` for an ordered list of classes; equals
    /// `q(Σ d_i)`.
    pub fn eval_sum(&self, terms: &[Mod2Class]) -> Result<bool> {
        let mut acc = false;
        for (i, d) in terms.iter().enumerate() {
            acc ^= self.eval(d)?;
            for e in &terms[i + 1..] {
                acc ^= d.intersect(e)?;
            }
        }
        Ok(acc)
    }

    /// The Arf invariant `Σ q(x_i) q(y_i)`.
    pub fn arf(&self) -> bool {
        self.x.and_parity(&self.y)
    }

    /// The form `v ↦ q(M v)`.
    pub fn pullback(&self, m: &Mod2SymplecticMatrix) -> Result<QuadraticForm> {
        check_genus(self.genus, m.genus())?;
        let values: Vec<bool> = (0..2 * self.genus)
            .map(|j| self.eval(m.column(j)))
            .collect::<Result<_>>()?;
        QuadraticForm::new(&values[..self.genus], &values[self.genus..])
    }

    pub fn display_with(&self, scheme: LabelScheme) -> String {
        let (xl, yl) = scheme.letters();
        let mut parts = Vec::new();
        for i in 0..self.genus {
            parts.push(format!("{xl}{}:{}", i + 1, self.x.get(i) as u8));
        }
        for i in 0..self.genus {
            parts.push(format!("{yl}{}:{}", i + 1, self.y.get(i) as u8));
        }
        parts.join(" ")
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(LabelScheme::Xy))
    }
}

impl fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadraticForm({self})")
    }
}

pub fn eval_quadratic(q: &QuadraticForm, v: &Mod2Class) -> Result<bool> {
    q.eval(v)
}

pub fn arf_invariant(q: &QuadraticForm) -> bool {
    q.arf()
}

/// Whether the twist along a nonseparating curve with class `c` preserves
/// the spin structure of `q`, i.e. `q(c) = 1`.
pub fn is_twist_in_spin_mcg(q: &QuadraticForm, c: &Mod2Class) -> Result<bool> {
    if c.is_zero() {
        return Err(Error::ZeroClass(c.to_string()));
    }
    q.eval(c)
}

/// All quadratic forms with `q(class) = bit` for every constraint, in
/// increasing order of their packed basis values.
pub fn enumerate_spin_structures(
    genus: usize,
    constraints: &[(Mod2Class, bool)],
) -> Result<Vec<QuadraticForm>> {
    if genus == 0 {
        return Err(Error::precondition("genus must be positive"));
    }
    if genus > MAX_ENUMERATION_GENUS {
        return Err(Error::TooLarge {
            genus,
            limit: MAX_ENUMERATION_GENUS,
        });
    }
    for (c, _) in constraints {
        check_genus(genus, c.genus())?;
    }
    let mut out = Vec::new();
    for mask in 0..(1u64 << (2 * genus)) {
        let q = QuadraticForm::from_mask(genus, mask);
        let mut ok = true;
        for (c, bit) in constraints {
            if q.eval(c)? != *bit {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(q);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Symplectic matrices

/// A `2g × 2g` matrix over `Z/2` preserving the mod-2 intersection form,
/// stored by columns (images of the basis vectors).
#[derive(Clone, PartialEq, Eq)]
pub struct Mod2SymplecticMatrix {
    genus: usize,
    columns: Vec<Mod2Class>,
}

impl Mod2SymplecticMatrix {
    pub fn identity(genus: usize) -> Self {
        Mod2SymplecticMatrix {
            genus,
            columns: (0..2 * genus)
                .map(|j| Mod2Class::basis_vector(genus, j))
                .collect(),
        }
    }

    /// Checks the symplectic condition on the given columns.
    pub fn from_columns(columns: Vec<Mod2Class>) -> Result<Self> {
        let genus = genus_from_len(columns.len())?;
        for c in &columns {
            check_genus(genus, c.genus())?;
        }
        let m = Mod2SymplecticMatrix { genus, columns };
        if !m.is_symplectic() {
            return Err(Error::precondition("matrix does not preserve the mod-2 form"));
        }
        Ok(m)
    }

    pub fn transvection(c: &Mod2Class) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroClass(c.to_string()));
        }
        let mut m = Mod2SymplecticMatrix::identity(c.genus());
        m.right_mul_transvection(c)?;
        Ok(m)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn column(&self, j: usize) -> &Mod2Class {
        &self.columns[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> bool {
        self.columns[j].coord(i)
    }

    pub fn apply(&self, v: &Mod2Class) -> Result<Mod2Class> {
        check_genus(self.genus, v.genus())?;
        let mut out = Mod2Class::zero(self.genus);
        for j in v.support() {
            out += &self.columns[j];
        }
        Ok(out)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Mod2SymplecticMatrix) -> Result<Mod2SymplecticMatrix> {
        check_genus(self.genus, other.genus)?;
        let columns = other
            .columns
            .iter()
            .map(|c| self.apply(c))
            .collect::<Result<_>>()?;
        Ok(Mod2SymplecticMatrix {
            genus: self.genus,
            columns,
        })
    }

    /// Replaces `M` with `M T_c`.
    pub fn right_mul_transvection(&mut self, c: &Mod2Class) -> Result<()> {
        check_genus(self.genus, c.genus())?;
        let image = self.apply(c)?;
        let g = self.genus;
        // <c, x_k> = c_{y_k},  <c, y_k> = c_{x_k}  (mod 2)
        for j in 0..2 * g {
            let hit = if j < g { c.coord(g + j) } else { c.coord(j - g) };
            if hit {
                self.columns[j] += &image;
            }
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.columns
            .iter()
            .enumerate()
            .all(|(j, c)| *c == Mod2Class::basis_vector(self.genus, j))
    }

    pub fn is_symplectic(&self) -> bool {
        let n = 2 * self.genus;
        (0..n).all(|i| {
            (i..n).all(|j| {
                let expected = (j == i + self.genus) && i < self.genus;
                self.columns[i]
                    .intersect(&self.columns[j])
                    .is_ok_and(|v| v == expected)
            })
        })
    }
}

impl fmt::Debug for Mod2SymplecticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = 2 * self.genus;
        writeln!(f, "Mod2SymplecticMatrix g={} [", self.genus)?;
        for i in 0..n {
            let row: String = (0..n)
                .map(|j| if self.entry(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

/// An integral matrix `M` with `MᵀJM = J`.
#[derive(Clone, PartialEq, Eq)]
pub struct SymplecticMatrix {
    genus: usize,
    matrix: IntMatrix,
}

impl SymplecticMatrix {
    pub fn identity(genus: usize) -> Self {
        SymplecticMatrix {
            genus,
            matrix: IntMatrix::identity(2 * genus),
        }
    }

    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::precondition("symplectic matrix must be square"));
        }
        let genus = genus_from_len(matrix.rows())?;
        if !is_symplectic(&matrix) {
            return Err(Error::precondition("matrix does not satisfy MᵀJM = J"));
        }
        Ok(SymplecticMatrix { genus, matrix })
    }

    pub fn transvection(c: &IntClass) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroClass(c.to_string()));
        }
        let mut m = SymplecticMatrix::identity(c.genus());
        m.right_mul_transvection(c, false)?;
        Ok(m)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn as_matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.matrix
    }

    pub fn apply(&self, v: &IntClass) -> Result<Vec<BigInt>> {
        check_genus(self.genus, v.genus())?;
        Ok(self.matrix.mul_vec(&v.to_bigint()))
    }

    /// `self · other`
    pub fn compose(&self, other: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        check_genus(self.genus, other.genus)?;
        Ok(SymplecticMatrix {
            genus: self.genus,
            matrix: self.matrix.mul(&other.matrix),
        })
    }

    /// `M⁻¹ = J⁻¹ Mᵀ J = -J Mᵀ J`
    pub fn inverse(&self) -> SymplecticMatrix {
        let j = standard_form(self.genus);
        let mut inv = j.mul(&self.matrix.transpose()).mul(&j);
        for r in 0..inv.rows() {
            inv.negate_row(r);
        }
        SymplecticMatrix {
            genus: self.genus,
            matrix: inv,
        }
    }

    /// Replaces `M` with `M T_c` (or `M T_c⁻¹`).
    pub fn right_mul_transvection(&mut self, c: &IntClass, inverse: bool) -> Result<()> {
        check_genus(self.genus, c.genus())?;
        let g = self.genus;
        let image = self.matrix.mul_vec(&c.to_bigint());
        let n = 2 * g;
        for j in 0..n {
            // <c, x_k> = -c_{y_k},  <c, y_k> = c_{x_k}
            let mut k = if j < g { -c.coords()[g + j] } else { c.coords()[j - g] };
            if inverse {
                k = -k;
            }
            if k == 0 {
                continue;
            }
            let k = BigInt::from(k);
            for (i, im) in image.iter().enumerate() {
                if !im.is_zero() {
                    self.matrix[(i, j)] += &k * im;
                }
            }
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn reduce(&self) -> Mod2SymplecticMatrix {
        let n = 2 * self.genus;
        let columns = (0..n)
            .map(|j| {
                let col: Vec<i64> = (0..n)
                    .map(|i| {
                        let v: BigInt = &self.matrix[(i, j)] % 2;
                        i64::from(!v.is_zero())
                    })
                    .collect();
                Mod2Class::from_coords(&col).expect("even length")
            })
            .collect();
        Mod2SymplecticMatrix {
            genus: self.genus,
            columns,
        }
    }

    /// Largest absolute entry, for overflow diagnostics.
    pub fn max_abs_entry(&self) -> BigInt {
        let n = 2 * self.genus;
        let mut best = BigInt::zero();
        for i in 0..n {
            for v in self.matrix.row(i) {
                if v.abs() > best {
                    best = v.abs();
                }
            }
        }
        best
    }
}

impl fmt::Debug for SymplecticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symplectic{:?}", self.matrix)
    }
}

/// Matrix of the twist along `c` in basis coordinates.
pub fn transvection_matrix(c: &IntClass) -> Result<SymplecticMatrix> {
    SymplecticMatrix::transvection(c)
}

/// `MᵀJM = J`, checked exactly.
pub fn is_symplectic(m: &IntMatrix) -> bool {
    if !m.is_square() || m.rows() % 2 != 0 {
        return false;
    }
    let j = standard_form(m.rows() / 2);
    m.transpose().mul(&j).mul(m) == j
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain5() -> Vec<IntClass> {
        // c_{2i} = x_i, c_{2i+1} = y_i - y_{i+1}
        let g = 5;
        let mut out = Vec::new();
        for k in 1..=2 * g + 1 {
            if k % 2 == 0 {
                out.push(IntClass::x(g, k / 2));
            } else {
                let i = (k - 1) / 2;
                let mut c = IntClass::zero(g);
                if i >= 1 {
                    c = &c + &IntClass::y(g, i);
                }
                if i < g {
                    c = &c - &IntClass::y(g, i + 1);
                }
                out.push(c);
            }
        }
        out
    }

    #[test]
    fn basis_pairings() {
        let g = 3;
        assert!(Mod2Class::x(g, 1).intersect(&Mod2Class::y(g, 1)).unwrap());
        assert!(!Mod2Class::x(g, 1).intersect(&Mod2Class::x(g, 2)).unwrap());
        assert_eq!(IntClass::x(g, 1).intersect(&IntClass::y(g, 1)).unwrap(), 1);
        assert_eq!(IntClass::y(g, 1).intersect(&IntClass::x(g, 1)).unwrap(), -1);
        assert_eq!(IntClass::x(g, 1).intersect(&IntClass::x(g, 2)).unwrap(), 0);
    }

    #[test]
    fn chain_pairing_example() {
        let c3 = Mod2Class::parse("y1+y2", 5).unwrap();
        let c4 = Mod2Class::parse("x2", 5).unwrap();
        assert!(intersect(&c3, &c4).unwrap());
    }

    #[test]
    fn genus_mismatch_is_an_error() {
        let err = Mod2Class::x(2, 1).intersect(&Mod2Class::x(3, 1)).unwrap_err();
        assert_eq!(err, Error::GenusMismatch { expected: 2, found: 3 });
        assert!(IntClass::x(2, 1).twist(&IntClass::x(3, 1), false).is_err());
    }

    #[test]
    fn transvect_fixes_its_own_curve() {
        let c = IntClass::parse("x1+2y2-y3", 3).unwrap();
        assert_eq!(transvect(&c, &c).unwrap(), c);
        let m = c.reduce();
        assert_eq!(transvect(&m, &m).unwrap(), m);
    }

    #[test]
    fn chain_property_mod2() {
        // t_{c1} t_{c2} (c1) = c2
        let ch = chain5();
        let c1 = ch[0].reduce();
        let c2 = ch[1].reduce();
        let step = transvect(&c2, &c1).unwrap();
        assert_eq!(transvect(&c1, &step).unwrap(), c2);
    }

    #[test]
    fn transvection_matrix_of_x1_in_genus_one() {
        let m = transvection_matrix(&IntClass::x(1, 1)).unwrap();
        assert_eq!(*m.as_matrix(), IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]));
        let neg = transvection_matrix(&IntClass::x(1, 1).negated()).unwrap();
        assert_eq!(m, neg);
    }

    #[test]
    fn transvection_matrix_rejects_zero() {
        assert!(matches!(
            transvection_matrix(&IntClass::zero(2)),
            Err(Error::ZeroClass(_))
        ));
    }

    #[test]
    fn inverse_of_symplectic_matrix() {
        let ch = chain5();
        let mut m = SymplecticMatrix::identity(5);
        for c in &ch {
            m.right_mul_transvection(c, false).unwrap();
        }
        assert!(m.compose(&m.inverse()).unwrap().is_identity());
        let mut back = m.clone();
        for c in ch.iter().rev() {
            back.right_mul_transvection(c, true).unwrap();
        }
        assert!(back.is_identity());
    }

    #[test]
    fn torus_chain_relation_holds_integrally() {
        // (t_a t_b)^6 = 1 on the torus
        let a = IntClass::x(1, 1);
        let b = IntClass::y(1, 1);
        let mut m = SymplecticMatrix::identity(1);
        for _ in 0..6 {
            m.right_mul_transvection(&a, false).unwrap();
            m.right_mul_transvection(&b, false).unwrap();
        }
        assert!(m.is_identity());
    }

    #[test]
    fn quadratic_examples() {
        let q = QuadraticForm::parse("x*:1 y*:1", 7).unwrap();
        assert!(!q.eval(&Mod2Class::zero(7)).unwrap());
        let b0 = Mod2Class::parse("y1+y2+y3+y4+y5+y6+y7", 7).unwrap();
        assert!(q.eval(&b0).unwrap());

        let q4 = QuadraticForm::parse("x*:1 y1:1 y3:1 y5:1 y7:1 y9:1 y11:1", 11).unwrap();
        let b2 = Mod2Class::parse("y1+y2+y3+y4+y5", 11).unwrap();
        assert!(q4.eval(&b2).unwrap());
        assert!(!is_twist_in_spin_mcg(&q4, &Mod2Class::y(11, 2)).unwrap());
        assert!(matches!(
            is_twist_in_spin_mcg(&q4, &Mod2Class::zero(11)),
            Err(Error::ZeroClass(_))
        ));
    }

    #[test]
    fn arf_examples() {
        assert!(!QuadraticForm::from_mask(3, 0).arf());
        let q = QuadraticForm::parse("x*:1 y1:1 y3:1 y5:1", 5).unwrap();
        assert!(q.arf());
    }

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(enumerate_spin_structures(1, &[]).unwrap().len(), 4);
        assert!(matches!(
            enumerate_spin_structures(9, &[]),
            Err(Error::TooLarge { genus: 9, .. })
        ));
        let forms = enumerate_spin_structures(2, &[(Mod2Class::x(2, 1), true)]).unwrap();
        assert_eq!(forms.len(), 8);
        let mut sorted = forms.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), forms.len());
    }

    #[test]
    fn sparse_parsing_and_display() {
        let c = IntClass::parse("y1-y2+2x3", 3).unwrap();
        assert_eq!(c.coords(), &[0, 0, 2, 1, -1, 0]);
        assert_eq!(c.to_string(), "2x3+y1-y2");
        assert_eq!(c.reduce().to_string(), "y1+y2");
        assert_eq!(
            Mod2Class::parse("a1+b2", 2).unwrap().display_with(LabelScheme::Ab),
            "a1+b2"
        );
        assert!(Mod2Class::parse("x9", 5).is_err());
        assert!(Mod2Class::parse("z1", 5).is_err());
        assert_eq!(Mod2Class::parse("0", 2).unwrap(), Mod2Class::zero(2));
        assert_eq!(Mod2Class::parse("x1+x1", 2).unwrap(), Mod2Class::zero(2));
    }

    #[test]
    fn form_round_trips_through_display() {
        let q = QuadraticForm::parse("x*:1 y2:1", 3).unwrap();
        assert_eq!(QuadraticForm::parse(&q.to_string(), 3).unwrap(), q);
    }

    #[test]
    fn surface_basis_labels() {
        let b = SurfaceBasis::new(2).unwrap().with_scheme(LabelScheme::Ab);
        assert_eq!(b.labels(), vec!["a1", "a2", "b1", "b2"]);
        assert!(is_symplectic(&IntMatrix::identity(4)));
        assert!(SurfaceBasis::new(0).is_err());
    }
}
