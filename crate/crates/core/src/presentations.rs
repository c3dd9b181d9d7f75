//! Finite presentations, their abelianizations, and first homology of
//! Lefschetz fibration total spaces.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorization::{Curve, PositiveFactorization};
use crate::homology::{HomologyClass, IntClass};
use crate::matrix::IntMatrix;
use crate::snf::{gf2_rank, smith_diagonal};

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenLetter {
    pub gen: usize,
    pub inverse: bool,
}

impl GenLetter {
    pub fn pos(gen: usize) -> Self {
        GenLetter {
            gen,
            inverse: false,
        }
    }

    pub fn neg(gen: usize) -> Self {
        GenLetter { gen, inverse: true }
    }

    fn inv(self) -> Self {
        GenLetter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }
}

pub type Word = Vec<GenLetter>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePresentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl FinitePresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g.as_str()) {
                return Err(Error::parse(g.clone(), "duplicate generator"));
            }
        }
        for r in &relators {
            if let Some(l) = r.iter().find(|l| l.gen >= generators.len()) {
                return Err(Error::IndexOutOfRange {
                    index: l.gen + 1,
                    len: generators.len(),
                });
            }
        }
        Ok(FinitePresentation {
            generators,
            relators,
        })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// Parses `gens: x1 x2; rel: x1 x2 x1^-1 x2^-1;`.
    ///
    /// A relator clause may list several words separated by commas.
    /// Juxtaposed generator names (`ab`) split into letters, and
    /// parenthesized groups take exponents: `(ab)^2`. `[u,v]` is the
    /// commutator `u v u^-1 v^-1`.
    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).presentation()
    }

    pub fn word_to_string(&self, w: &[GenLetter]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.iter()
            .map(|l| {
                let name = &self.generators[l.gen];
                if l.inverse {
                    format!("{name}^-1")
                } else {
                    name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.relators.len(), self.generators.len());
        for (i, r) in self.relators.iter().enumerate() {
            for l in r {
                let delta = if l.inverse { -1 } else { 1 };
                m[(i, l.gen)] += delta;
            }
        }
        m
    }
}

impl fmt::Display for FinitePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gens: {};", self.generators.join(" "))?;
        for r in &self.relators {
            write!(f, " rel: {};", self.word_to_string(r))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err(&self, reason: impl Into<String>) -> Error {
        let rest: String = self.src[self.pos..].chars().take(16).collect();
        Error::parse(
            rest,
            format!("{} (at byte {})", reason.into(), self.pos),
        )
    }

    fn skip_ws(&mut self) {
        loop {
            let rest = &self.src[self.pos..];
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += ch.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        if self.eat(ch) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{ch}`")))
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = chars
            .find(|(_, c)| !(c.is_alphanumeric() || *c == '_' || *c == '\''))
            .map_or(rest.len(), |(i, _)| i);
        self.pos += end;
        Some(&rest[..end])
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let end = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+'))))
            .map_or(rest.len(), |(i, _)| i);
        let v = rest[..end]
            .parse::<i64>()
            .map_err(|_| self.err("expected an integer exponent"))?;
        self.pos += end;
        Ok(v)
    }

    fn presentation(mut self) -> Result<FinitePresentation> {
        let mut gens: Option<Vec<String>> = None;
        let mut rels = Vec::new();
        while self.peek().is_some() {
            let Some(kw) = self.ident() else {
                return Err(self.err("expected `gens:` or `rel:`"));
            };
            self.expect(':')?;
            match kw {
                "gens" => {
                    if gens.is_some() {
                        return Err(self.err("generators declared twice"));
                    }
                    let mut list = Vec::new();
                    while let Some(name) = self.ident() {
                        list.push(name.to_string());
                    }
                    self.expect(';')?;
                    gens = Some(list);
                }
                "rel" | "rels" => {
                    let Some(g) = gens.as_ref() else {
                        return Err(self.err("relators before `gens:`"));
                    };
                    let g = g.clone();
                    loop {
                        rels.push(self.word(&g)?);
                        if !self.eat(',') {
                            break;
                        }
                    }
                    self.expect(';')?;
                }
                other => return Err(self.err(format!("unknown clause `{other}`"))),
            }
        }
        FinitePresentation::new(gens.unwrap_or_default(), rels)
    }

    fn word(&mut self, gens: &[String]) -> Result<Word> {
        let mut out = Vec::new();
        loop {
            let atom: Word = match self.peek() {
                Some('(') => {
                    self.pos += 1;
                    let w = self.word(gens)?;
                    self.expect(')')?;
                    w
                }
                Some('[') => {
                    // [u, v] = u v u⁻¹ v⁻¹
                    self.pos += 1;
                    let u = self.word(gens)?;
                    self.expect(',')?;
                    let v = self.word(gens)?;
                    self.expect(']')?;
                    let inv = |w: &Word| w.iter().rev().map(|l| l.inv()).collect::<Word>();
                    [u.clone(), v.clone(), inv(&u), inv(&v)].concat()
                }
                Some('1') => {
                    self.pos += 1;
                    Vec::new()
                }
                Some(c) if c.is_alphabetic() || c == '_' => {
                    let start = self.pos;
                    let token = self.ident().expect("peeked an identifier");
                    split_generators(token, gens).ok_or_else(|| {
                        self.pos = start;
                        self.err(format!("unknown generator `{token}`"))
                    })?
                }
                _ => break,
            };
            let exp = if self.eat('^') { self.integer()? } else { 1 };
            let base: Word = if exp < 0 {
                atom.iter().rev().map(|l| l.inv()).collect()
            } else {
                atom
            };
            for _ in 0..exp.unsigned_abs() {
                out.extend_from_slice(&base);
            }
        }
        Ok(out)
    }
}

/// Splits a token into generator names, preferring longer names first.
fn split_generators(token: &str, gens: &[String]) -> Option<Word> {
    if let Some(i) = gens.iter().position(|g| g == token) {
        return Some(vec![GenLetter::pos(i)]);
    }
    let mut order: Vec<usize> = (0..gens.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(gens[i].len()));
    fn go(rest: &str, gens: &[String], order: &[usize], acc: &mut Word) -> bool {
        if rest.is_empty() {
            return true;
        }
        for &i in order {
            if let Some(tail) = rest.strip_prefix(gens[i].as_str()) {
                acc.push(GenLetter::pos(i));
                if go(tail, gens, order, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::new();
    go(token, gens, &order, &mut acc).then_some(acc)
}

/// A finitely generated abelian group `Z^r ⊕ Z/d_1 ⊕ ⋯` with `d_1 | d_2 | ⋯`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// From the invariant factors of a relation matrix on `generators`.
    pub fn from_invariant_factors(generators: usize, factors: &[BigInt]) -> Self {
        AbelianGroup {
            free_rank: generators - factors.len(),
            torsion: factors.iter().filter(|d| !d.is_one()).cloned().collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Parses the display form, e.g. `Z^2 + Z/2 + Z/6` or `0`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut g = AbelianGroup::trivial();
        let text = text.trim();
        if text == "0" || text == "1" {
            return Ok(g);
        }
        for part in text.split('+').map(str::trim) {
            if part == "Z" {
                g.free_rank += 1;
            } else if let Some(r) = part.strip_prefix("Z^") {
                g.free_rank += r
                    .parse::<usize>()
                    .map_err(|_| Error::parse(part, "bad free rank"))?;
            } else if let Some(d) = part.strip_prefix("Z/") {
                let d: BigInt = d.parse().map_err(|_| Error::parse(part, "bad torsion order"))?;
                if d < BigInt::from(2) {
                    return Err(Error::parse(part, "torsion order must be at least 2"));
                }
                g.torsion.push(d);
            } else {
                return Err(Error::parse(part, "expected `Z`, `Z^r` or `Z/d`"));
            }
        }
        for w in g.torsion.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(Error::parse(text, "torsion orders must form a divisibility chain"));
            }
        }
        Ok(g)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        f.write_str(&parts.join(" + "))
    }
}

/// Torsion orders serialize as integers, or as decimal strings past `u64`.
impl Serialize for AbelianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let torsion: Vec<serde_json::Value> = self
            .torsion
            .iter()
            .map(|d| match u64::try_from(d) {
                Ok(v) => v.into(),
                Err(_) => d.to_string().into(),
            })
            .collect();
        let mut st = s.serialize_struct("AbelianGroup", 3)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        st.serialize_field("torsion", &torsion)?;
        st.serialize_field("display", &self.to_string())?;
        st.end()
    }
}

pub fn abelianization(p: &FinitePresentation) -> AbelianGroup {
    let snf = smith_diagonal(&p.exponent_matrix());
    AbelianGroup::from_invariant_factors(p.num_generators(), &snf.invariant_factors())
}

fn free_reduce(w: &[GenLetter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    // cyclic reduction (conjugation)
    let (mut i, mut j) = (0, out.len());
    while j >= i + 2 && out[i] == out[j - 1].inv() {
        i += 1;
        j -= 1;
    }
    out[i..j].to_vec()
}

fn cyclic_descents(w: &[GenLetter]) -> usize {
    let n = w.len();
    (0..n).filter(|&i| w[(i + 1) % n].gen < w[i].gen).count()
}

/// Which normal-form condition a relator breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalFormViolation {
    /// (i) some relator contains an inverse letter
    NotPositive { relator: usize },
    /// (ii) some generator occurs twice in a relator
    RepeatedGenerator { relator: usize },
    /// (iii) the generators of a relator are not in cyclic index order
    OrderBroken { relator: usize },
}

fn relator_violation(i: usize, r: &[GenLetter]) -> Option<NormalFormViolation> {
    if r.iter().any(|l| l.inverse) {
        return Some(NormalFormViolation::NotPositive { relator: i });
    }
    let mut seen = HashSet::new();
    if !r.iter().all(|l| seen.insert(l.gen)) {
        return Some(NormalFormViolation::RepeatedGenerator { relator: i });
    }
    if cyclic_descents(r) > 1 {
        return Some(NormalFormViolation::OrderBroken { relator: i });
    }
    None
}

/// Checks that every relator is positive, uses each generator at most
/// once, and lists its generators in cyclically increasing index order.
pub fn check_normal_form(p: &FinitePresentation) -> std::result::Result<(), NormalFormViolation> {
    match p
        .relators
        .iter()
        .enumerate()
        .find_map(|(i, r)| relator_violation(i, r))
    {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

fn fresh_name(base: String, taken: &mut HashSet<String>) -> String {
    let mut name = base;
    while taken.contains(&name) {
        name.push('\'');
    }
    taken.insert(name.clone());
    name
}

/// Rewrites `p` by Tietze moves into a presentation whose relators are
/// positive, repetition-free and cyclically ordered.
///
/// Each offending generator `x` gets a partner `x'` with relator `x x'`.
/// An offending relator is rewritten positively through the partners and,
/// if still not in normal form, replaced by `z_1 ⋯ z_l` with fresh
/// generators and linking relators `z_t · partner(letter_t)`. Presentations
/// already in normal form come back unchanged.
pub fn normalize_presentation(p: &FinitePresentation) -> FinitePresentation {
    if check_normal_form(p).is_ok() {
        return p.clone();
    }
    let reduced: Vec<Word> = p
        .relators
        .iter()
        .map(|r| free_reduce(r))
        .filter(|r| !r.is_empty())
        .collect();
    let bad: Vec<bool> = reduced
        .iter()
        .enumerate()
        .map(|(i, r)| relator_violation(i, r).is_some())
        .collect();
    let mut needs_partner = vec![false; p.generators.len()];
    for (r, _) in reduced.iter().zip(&bad).filter(|(_, b)| **b) {
        for l in r {
            needs_partner[l.gen] = true;
        }
    }
    let mut taken: HashSet<String> = p.generators.iter().cloned().collect();
    let mut gens = p.generators.clone();
    let mut partner = vec![usize::MAX; p.generators.len()];
    let mut rels: Vec<Word> = Vec::new();
    for (x, _) in needs_partner.iter().enumerate().filter(|(_, n)| **n) {
        partner[x] = gens.len();
        gens.push(fresh_name(format!("{}'", p.generators[x]), &mut taken));
    }
    let n0 = p.generators.len();
    // complement of a positive letter in the enlarged alphabet
    let complement = |g: usize| -> usize {
        if g < n0 {
            partner[g]
        } else {
            partner.iter().position(|&q| q == g).expect("partner index")
        }
    };
    for (x, _) in needs_partner.iter().enumerate().filter(|(_, n)| **n) {
        rels.push(vec![GenLetter::pos(x), GenLetter::pos(partner[x])]);
    }
    for (j, (r, is_bad)) in reduced.iter().zip(&bad).enumerate() {
        if !is_bad {
            rels.push(r.clone());
            continue;
        }
        let positive: Word = r
            .iter()
            .map(|l| {
                GenLetter::pos(if l.inverse { partner[l.gen] } else { l.gen })
            })
            .collect();
        if relator_violation(0, &positive).is_none() {
            rels.push(positive);
            continue;
        }
        let mut zs = Vec::with_capacity(positive.len());
        for (t, l) in positive.iter().enumerate() {
            let z = gens.len();
            gens.push(fresh_name(format!("z{}_{}", j + 1, t + 1), &mut taken));
            zs.push(GenLetter::pos(z));
            rels.push(vec![GenLetter::pos(z), GenLetter::pos(complement(l.gen))]);
        }
        rels.push(zs);
    }
    FinitePresentation {
        generators: gens,
        relators: rels,
    }
}

/// First homology of a closed genus-`g` surface modulo the given classes.
pub fn h1_quotient(genus: usize, classes: &[IntClass]) -> Result<AbelianGroup> {
    let mut columns: BTreeSet<Vec<i64>> = BTreeSet::new();
    for c in classes {
        if c.genus() != genus {
            return Err(Error::GenusMismatch {
                expected: genus,
                found: c.genus(),
            });
        }
        if c.is_zero() {
            continue;
        }
        // c and −c span the same subgroup
        let lead = c.coords().iter().find(|v| **v != 0).expect("nonzero");
        let col = if *lead < 0 {
            c.negated().coords().to_vec()
        } else {
            c.coords().to_vec()
        };
        columns.insert(col);
    }
    let cols: Vec<Vec<i64>> = columns.into_iter().collect();
    let m = IntMatrix::from_columns(2 * genus, &cols);
    let snf = smith_diagonal(&m);
    Ok(AbelianGroup::from_invariant_factors(
        2 * genus,
        &snf.invariant_factors(),
    ))
}

/// Dimension of `H_1(Σ_g; Z/2)` modulo the mod-2 classes of the curves.
pub fn h1_mod2_dimension(genus: usize, curves: &[Curve]) -> usize {
    let rows: Vec<_> = curves
        .iter()
        .map(|c| {
            let m = c.class_mod2();
            crate::bits::Bits::from_fn(2 * genus, |i| m.coord(i))
        })
        .collect();
    2 * genus - gf2_rank(&rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "coefficients")]
pub enum FibrationH1 {
    /// `H_1(X; Z)`.
    Integral { group: AbelianGroup },
    /// Only mod-2 classes were available: `dim H_1(X; Z/2)`.
    Mod2 { dimension: usize },
}

impl FibrationH1 {
    pub fn is_trivial(&self) -> bool {
        match self {
            FibrationH1::Integral { group } => group.is_trivial(),
            FibrationH1::Mod2 { dimension } => *dimension == 0,
        }
    }
}

impl fmt::Display for FibrationH1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FibrationH1::Integral { group } => write!(f, "{group}"),
            FibrationH1::Mod2 { dimension } => write!(f, "(Z/2)^{dimension} [mod 2]"),
        }
    }
}

/// `H_1` of the total space: `Z^{2g}` modulo the vanishing cycles, or its
/// mod-2 dimension when some twist lacks an integral class.
pub fn fibration_h1(p: &PositiveFactorization) -> FibrationH1 {
    if p.has_integer_classes() {
        let classes: Vec<IntClass> = p
            .twists()
            .iter()
            .map(|c| c.class_int().expect("checked").clone())
            .collect();
        let group = h1_quotient(p.genus(), &classes).expect("genus checked at construction");
        FibrationH1::Integral { group }
    } else {
        FibrationH1::Mod2 {
            dimension: h1_mod2_dimension(p.genus(), p.twists()),
        }
    }
}

/// Vanishing classes of `P P^{t_{d_1}} ⋯` for the fundamental group
/// computation: the classes of `P` together with every `d_j`.
///
/// Each `d_j` must meet some vanishing cycle of `P` once mod 2.
pub fn korkmaz_relator_set(p: &PositiveFactorization, conjugators: &[Curve]) -> Result<Vec<Curve>> {
    let mut out: Vec<Curve> = p.twists().to_vec();
    for d in conjugators {
        let mut hit = false;
        for c in p.twists() {
            if c.class_mod2().intersect(d.class_mod2())? {
                hit = true;
                break;
            }
        }
        if !hit {
            return Err(Error::precondition(format!(
                "`{}` meets no vanishing cycle an odd number of times",
                d.label()
            )));
        }
        out.push(d.clone());
    }
    Ok(out)
}

/// `d_1 ⋯ d_k` for the Smith form equals the gcd of the `k × k` minors.
pub fn determinantal_divisor(m: &IntMatrix, k: usize) -> BigInt {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }
    let mut g = BigInt::zero();
    for rows in subsets(m.rows(), k) {
        for cols in subsets(m.cols(), k) {
            let minor = IntMatrix::from_rows(
                &rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| m[(i, j)].clone()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            );
            g = num_integer::Integer::gcd(&g, &minor.determinant());
        }
    }
    g.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab(text: &str) -> String {
        abelianization(&FinitePresentation::parse(text).unwrap()).to_string()
    }

    #[test]
    fn parse_and_print() {
        let p = FinitePresentation::parse("gens: a b; rel: a^2, b^3, (ab)^2;").unwrap();
        assert_eq!(
            p.to_string(),
            "gens: a b; rel: a a; rel: b b b; rel: a b a b;"
        );
        assert_eq!(FinitePresentation::parse(&p.to_string()).unwrap(), p);
        let q = FinitePresentation::parse("gens: x1 x2; rel: x1 x2 x1^-1 x2^-1;").unwrap();
        assert_eq!(q.relators()[0].len(), 4);
        assert!(FinitePresentation::parse("gens: a; rel: b;").is_err());
        assert!(FinitePresentation::parse("rel: a;").is_err());
    }

    #[test]
    fn abelianizations() {
        assert_eq!(ab("gens: x; rel: x;"), "0");
        assert_eq!(ab("gens: x; rel: x^2;"), "Z/2");
        assert_eq!(ab("gens: a b; rel: a b a^-1 b^-1;"), "Z^2");
        assert_eq!(ab("gens: a b; rel: a^2, b^3, (ab)^2;"), "Z/2");
        assert_eq!(ab("gens: a b;"), "Z^2");
        assert_eq!(ab("gens: a b; rel: a^4 b^6;"), "Z + Z/2");
    }

    #[test]
    fn abelian_group_display_round_trip() {
        for s in ["0", "Z", "Z^3 + Z/2 + Z/4", "Z/6"] {
            assert_eq!(AbelianGroup::parse(s).unwrap().to_string(), s);
        }
        assert!(AbelianGroup::parse("Z/4 + Z/6").is_err());
    }

    #[test]
    fn normalization_examples() {
        let triv = FinitePresentation::parse("gens: x; rel: x;").unwrap();
        assert_eq!(normalize_presentation(&triv), triv);
        for text in [
            "gens: x; rel: x^2;",
            "gens: a b; rel: a b a^-1 b^-1;",
            "gens: a b c; rel: c b a, a^-2 c;",
        ] {
            let p = FinitePresentation::parse(text).unwrap();
            let n = normalize_presentation(&p);
            assert_eq!(check_normal_form(&n), Ok(()), "{n}");
            assert_eq!(abelianization(&n), abelianization(&p));
        }
    }

    #[test]
    fn checker_flags_each_condition() {
        let p = FinitePresentation::parse("gens: a b c; rel: a^-1, a a, c b a;").unwrap();
        assert_eq!(
            check_normal_form(&p),
            Err(NormalFormViolation::NotPositive { relator: 0 })
        );
        let p = FinitePresentation::parse("gens: a b c; rel: a a;").unwrap();
        assert!(matches!(
            check_normal_form(&p),
            Err(NormalFormViolation::RepeatedGenerator { .. })
        ));
        let p = FinitePresentation::parse("gens: a b c; rel: c b a;").unwrap();
        assert!(matches!(
            check_normal_form(&p),
            Err(NormalFormViolation::OrderBroken { .. })
        ));
        let p = FinitePresentation::parse("gens: a b c; rel: b c a;").unwrap();
        assert_eq!(check_normal_form(&p), Ok(()));
    }

    #[test]
    fn torus_quotients() {
        let x = IntClass::x(1, 1);
        let y = IntClass::y(1, 1);
        assert_eq!(h1_quotient(1, &[x.clone(), y]).unwrap(), AbelianGroup::trivial());
        assert_eq!(h1_quotient(1, &[x.clone(), x.negated()]).unwrap(), AbelianGroup::free(1));
        let two_y = IntClass::from_coords(vec![0, 2]).unwrap();
        assert_eq!(h1_quotient(1, &[x, two_y]).unwrap().to_string(), "Z/2");
    }

    #[test]
    fn determinantal_divisors() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(determinantal_divisor(&m, 1), BigInt::from(1));
        assert_eq!(determinantal_divisor(&m, 2), BigInt::from(6));
    }
}
