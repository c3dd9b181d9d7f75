//! The factorization scripting language: lexer, parser, canonical printer
//! and interpreter.
//!
//! Statements end with `;` and `#` starts a comment. Names live in one
//! namespace and must be declared before use.

use std::collections::HashMap;
use std::fmt;

use serde_json::{json, Value};
use spinlab::constructions::{
    chain_spin_form, korkmaz_cadavid, pencil_images, phi_psi, u_v_factorizations,
    uniform_spin_form, z_factorization,
};
use spinlab::factorization::{
    breed, check_relation, check_spin, conjugate, fiber_sum, hurwitz_move, Curve, Direction,
    Letter, PositiveFactorization, TwistWord,
};
use spinlab::homology::{IntClass, LabelScheme, Mod2Class, QuadraticForm};
use spinlab::invariants::{invariants_of, HyperellipticCertificate, SignatureSource};
use spinlab::presentations::fibration_h1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Undeclared,
    Type,
    Dimension,
    /// A library precondition failed while running the script.
    Precondition,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::Syntax => "syntax error",
            ErrorKind::Undeclared => "undeclared name",
            ErrorKind::Type => "type error",
            ErrorKind::Dimension => "dimension error",
            ErrorKind::Precondition => "precondition failed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {kind}: {message}")]
pub struct ScriptError {
    pub pos: Pos,
    pub kind: ErrorKind,
    pub message: String,
}

impl ScriptError {
    fn new(pos: Pos, kind: ErrorKind, message: impl Into<String>) -> Self {
        ScriptError { pos, kind, message: message.into() }
    }
}

type Result<T> = std::result::Result<T, ScriptError>;

// ---------------------------------------------------------------- lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: Pos,
}

const SYMBOLS: &str = ";=:+-*^[],";

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == '_' {
            // `-` joins two letters, so `check-spin` is one word but `x1-y2` is not
            while i < chars.len() {
                let d = chars[i];
                let joins = d == '-'
                    && chars[i - 1].is_ascii_alphabetic()
                    && chars.get(i + 1).is_some_and(|n| n.is_ascii_alphabetic());
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' || joins {
                    i += 1;
                } else {
                    break;
                }
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), pos });
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits.parse().map_err(|_| {
                ScriptError::new(pos, ErrorKind::Syntax, format!("integer `{digits}` is too large"))
            })?;
            out.push(Token { tok: Tok::Int(n), pos });
        } else if SYMBOLS.contains(c) {
            i += 1;
            out.push(Token { tok: Tok::Sym(c), pos });
        } else {
            return Err(ScriptError::new(pos, ErrorKind::Syntax, format!("unexpected character `{c}`")));
        }
        column += i - start;
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, column } });
    Ok(out)
}

// ---------------------------------------------------------------- syntax

/// A name together with where it was written.
#[derive(Debug, Clone)]
pub struct Name {
    pub text: String,
    pub pos: Pos,
}

impl PartialEq for Name {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// `x3`, `-2y1`: coefficient, axis and 1-based index.
#[derive(Debug, Clone)]
pub struct Term {
    pub coeff: i64,
    pub axis: Axis,
    pub index: usize,
    pub pos: Pos,
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        (self.coeff, self.axis, self.index) == (other.coeff, other.axis, other.index)
    }
}

/// A homology class literal: sparse, integral, or both.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassLit {
    pub sparse: Option<Vec<Term>>,
    pub ints: Option<Vec<i64>>,
}

/// `x*:1`, `y3:0`. `index = None` means every index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormAssign {
    pub axis: Axis,
    pub index: Option<usize>,
    pub value: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormSpec {
    Uniform,
    Chain,
    Values(Vec<FormAssign>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum WordSpec {
    Letters(Vec<(Name, i64)>),
    Phi,
    Psi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Catalog {
    BuildingBlock,
    U,
    V,
    Z { k: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum FactorizationSpec {
    Entries { entries: Vec<(Name, u32)>, power: u32 },
    Catalog(Catalog),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignatureChoice {
    Endo,
    Meyer,
    /// The bred-family formula; `k` is read off the length.
    Bred,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Basis { genus: usize, scheme: LabelScheme },
    Form { name: Name, spec: FormSpec },
    Curve { name: Name, class: ClassLit },
    Word { name: Name, spec: WordSpec },
    Factorization { name: Name, spec: FactorizationSpec },
    Conjugate { name: Name, source: Name, word: Name },
    FiberSum { name: Name, first: Name, second: Name, word: Option<Name> },
    Breed { name: Name, source: Name, at: usize },
    Hurwitz { name: Name, source: Name, at: usize, direction: Direction },
    Check { form: Name, curve: Name, expect: bool },
    CheckSpin { factorization: Name, form: Name },
    CheckRelation { factorization: Name },
    Invariants { factorization: Name, signature: Option<SignatureChoice> },
    H1 { factorization: Name },
}

/// Statements, names and terms compare without their positions.
#[derive(Debug, Clone)]
pub struct Statement {
    pub stmt: Stmt,
    pub pos: Pos,
}

impl PartialEq for Statement {
    fn eq(&self, other: &Self) -> bool {
        self.stmt == other.stmt
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Script {
    pub statements: Vec<Statement>,
}

const RESERVED: &[&str] = &["catalog", "by", "at", "power", "uniform", "chain"];

struct Parser {
    toks: Vec<Token>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.i]
    }

    fn unexpected(&self, wanted: &str) -> ScriptError {
        let t = self.peek();
        ScriptError::new(t.pos, ErrorKind::Syntax, format!("expected {wanted}, found {}", t.tok))
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.at_sym(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == w)
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.at_word(w) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn word(&mut self, w: &str) -> Result<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{w}`")))
        }
    }

    fn ident(&mut self, wanted: &str) -> Result<Name> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let name = Name { text: s.clone(), pos: self.peek().pos };
                self.i += 1;
                Ok(name)
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn name(&mut self) -> Result<Name> {
        let n = self.ident("a name")?;
        if RESERVED.contains(&n.text.as_str()) {
            return Err(ScriptError::new(n.pos, ErrorKind::Syntax, format!("`{}` is a reserved word", n.text)));
        }
        Ok(n)
    }

    fn int(&mut self) -> Result<(u64, Pos)> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(n) => {
                self.i += 1;
                Ok((n, t.pos))
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn signed(&mut self) -> Result<i64> {
        let neg = self.eat_sym('-');
        let (n, pos) = self.int()?;
        let n = i64::try_from(n)
            .map_err(|_| ScriptError::new(pos, ErrorKind::Syntax, "integer out of range"))?;
        Ok(if neg { -n } else { n })
    }

    fn small<T: TryFrom<u64>>(&mut self) -> Result<T> {
        let (n, pos) = self.int()?;
        T::try_from(n).map_err(|_| ScriptError::new(pos, ErrorKind::Syntax, "integer out of range"))
    }

    fn bit(&mut self) -> Result<bool> {
        match self.int()? {
            (0, _) => Ok(false),
            (1, _) => Ok(true),
            (_, pos) => Err(ScriptError::new(pos, ErrorKind::Syntax, "expected 0 or 1")),
        }
    }

    fn statement(&mut self) -> Result<Statement> {
        let head = self.ident("a statement")?;
        let pos = head.pos;
        let stmt = match head.text.as_str() {
            "basis" => {
                self.word("g")?;
                self.sym('=')?;
                let genus = self.small()?;
                let mut scheme = LabelScheme::Xy;
                if self.eat_word("labels") {
                    self.sym('=')?;
                    let s = self.ident("`xy` or `ab`")?;
                    scheme = match s.text.as_str() {
                        "xy" => LabelScheme::Xy,
                        "ab" => LabelScheme::Ab,
                        _ => return Err(ScriptError::new(s.pos, ErrorKind::Syntax, "expected `xy` or `ab`")),
                    };
                }
                Stmt::Basis { genus, scheme }
            }
            "form" => {
                let name = self.name()?;
                self.sym('=')?;
                let spec = if self.eat_word("uniform") {
                    FormSpec::Uniform
                } else if self.eat_word("chain") {
                    FormSpec::Chain
                } else {
                    let mut values = vec![self.form_assign()?];
                    while !self.at_sym(';') {
                        values.push(self.form_assign()?);
                    }
                    FormSpec::Values(values)
                };
                Stmt::Form { name, spec }
            }
            "curve" => {
                let name = self.name()?;
                self.sym('=')?;
                Stmt::Curve { name, class: self.class_lit()? }
            }
            "word" => {
                let name = self.name()?;
                self.sym('=')?;
                let spec = if self.eat_word("catalog") {
                    let c = self.ident("`phi` or `psi`")?;
                    match c.text.as_str() {
                        "phi" => WordSpec::Phi,
                        "psi" => WordSpec::Psi,
                        _ => return Err(ScriptError::new(c.pos, ErrorKind::Syntax, "expected `phi` or `psi`")),
                    }
                } else {
                    let mut letters = Vec::new();
                    while !self.at_sym(';') {
                        let n = self.name()?;
                        let e = if self.eat_sym('^') { self.signed()? } else { 1 };
                        if e == 0 {
                            return Err(ScriptError::new(n.pos, ErrorKind::Syntax, "zero exponent"));
                        }
                        letters.push((n, e));
                    }
                    WordSpec::Letters(letters)
                };
                Stmt::Word { name, spec }
            }
            "factorization" => {
                let name = self.name()?;
                self.sym('=')?;
                let spec = if self.eat_word("catalog") {
                    let c = self.ident("a catalog entry")?;
                    FactorizationSpec::Catalog(match c.text.as_str() {
                        "building-block" => Catalog::BuildingBlock,
                        "u" => Catalog::U,
                        "v" => Catalog::V,
                        "z" => {
                            let mut k = 0;
                            if self.eat_word("k") {
                                self.sym('=')?;
                                k = self.small()?;
                            }
                            Catalog::Z { k }
                        }
                        other => {
                            return Err(ScriptError::new(
                                c.pos,
                                ErrorKind::Syntax,
                                format!("unknown catalog entry `{other}` (building-block, u, v, z)"),
                            ))
                        }
                    })
                } else {
                    let mut entries = Vec::new();
                    while !self.at_sym(';') && !self.at_word("power") {
                        let n = self.name()?;
                        let e = if self.eat_sym('^') {
                            if self.at_sym('-') {
                                return Err(ScriptError::new(
                                    self.peek().pos,
                                    ErrorKind::Syntax,
                                    "factorization entries are positive twists",
                                ));
                            }
                            self.small()?
                        } else {
                            1
                        };
                        if e == 0 {
                            return Err(ScriptError::new(n.pos, ErrorKind::Syntax, "zero exponent"));
                        }
                        entries.push((n, e));
                    }
                    if entries.is_empty() {
                        return Err(self.unexpected("a curve name"));
                    }
                    let power = if self.eat_word("power") { self.small()? } else { 0 };
                    FactorizationSpec::Entries { entries, power }
                };
                Stmt::Factorization { name, spec }
            }
            "conjugate" => {
                let name = self.name()?;
                self.sym('=')?;
                let source = self.name()?;
                self.word("by")?;
                Stmt::Conjugate { name, source, word: self.name()? }
            }
            "fibersum" => {
                let name = self.name()?;
                self.sym('=')?;
                let first = self.name()?;
                let second = self.name()?;
                let word = if self.eat_word("by") { Some(self.name()?) } else { None };
                Stmt::FiberSum { name, first, second, word }
            }
            "breed" => {
                let name = self.name()?;
                self.sym('=')?;
                let source = self.name()?;
                self.word("at")?;
                Stmt::Breed { name, source, at: self.small()? }
            }
            "hurwitz" => {
                let name = self.name()?;
                self.sym('=')?;
                let source = self.name()?;
                self.word("at")?;
                let at = self.small()?;
                let d = self.ident("`left` or `right`")?;
                let direction = match d.text.as_str() {
                    "left" => Direction::Left,
                    "right" => Direction::Right,
                    _ => return Err(ScriptError::new(d.pos, ErrorKind::Syntax, "expected `left` or `right`")),
                };
                Stmt::Hurwitz { name, source, at, direction }
            }
            "check" => {
                let form = self.name()?;
                let curve = self.name()?;
                let expect = if self.eat_sym('=') { self.bit()? } else { true };
                Stmt::Check { form, curve, expect }
            }
            "check-spin" => {
                let factorization = self.name()?;
                Stmt::CheckSpin { factorization, form: self.name()? }
            }
            "check-relation" => Stmt::CheckRelation { factorization: self.name()? },
            "invariants" => {
                let factorization = self.name()?;
                let signature = if self.eat_word("signature") {
                    self.sym('=')?;
                    let s = self.ident("`endo`, `meyer` or `bred`")?;
                    Some(match s.text.as_str() {
                        "endo" => SignatureChoice::Endo,
                        "meyer" => SignatureChoice::Meyer,
                        "bred" => SignatureChoice::Bred,
                        _ => {
                            return Err(ScriptError::new(s.pos, ErrorKind::Syntax, "expected `endo`, `meyer` or `bred`"))
                        }
                    })
                } else {
                    None
                };
                Stmt::Invariants { factorization, signature }
            }
            "h1" => Stmt::H1 { factorization: self.name()? },
            other => {
                return Err(ScriptError::new(pos, ErrorKind::Syntax, format!("unknown statement `{other}`")))
            }
        };
        self.sym(';')?;
        Ok(Statement { stmt, pos })
    }

    fn form_assign(&mut self) -> Result<FormAssign> {
        let label = self.ident("a form value like `x*:1` or `y3:0`")?;
        let (axis, index) = split_label(&label.text)
            .ok_or_else(|| ScriptError::new(label.pos, ErrorKind::Syntax, format!("`{}` is not a basis label", label.text)))?;
        let index = match index {
            Some(i) => Some(i),
            None => {
                self.sym('*')?;
                None
            }
        };
        self.sym(':')?;
        Ok(FormAssign { axis, index, value: self.bit()? })
    }

    fn class_lit(&mut self) -> Result<ClassLit> {
        let mut sparse = None;
        if !self.at_sym('[') {
            let mut terms = Vec::new();
            let mut sign = if self.eat_sym('-') { -1 } else { 1 };
            loop {
                let pos = self.peek().pos;
                let coeff = match self.peek().tok {
                    Tok::Int(_) => self.signed()?,
                    _ => 1,
                };
                let label = self.ident("a basis label like `x1` or `y3`")?;
                let (axis, index) = match split_label(&label.text) {
                    Some((axis, Some(index))) => (axis, index),
                    _ => {
                        return Err(ScriptError::new(
                            label.pos,
                            ErrorKind::Syntax,
                            format!("`{}` is not a basis label like `x1` or `y3`", label.text),
                        ))
                    }
                };
                terms.push(Term { coeff: sign * coeff, axis, index, pos });
                sign = if self.eat_sym('+') {
                    1
                } else if self.eat_sym('-') {
                    -1
                } else {
                    break;
                };
            }
            sparse = Some(terms);
        }
        let mut ints = None;
        if self.eat_sym('[') {
            let mut v = Vec::new();
            if !self.at_sym(']') {
                v.push(self.signed()?);
                while self.eat_sym(',') {
                    v.push(self.signed()?);
                }
            }
            self.sym(']')?;
            ints = Some(v);
        }
        Ok(ClassLit { sparse, ints })
    }
}

/// `x3` → `(X, Some(3))`, `y` → `(Y, None)`. `a`/`b` alias `x`/`y`.
fn split_label(s: &str) -> Option<(Axis, Option<usize>)> {
    let mut chars = s.chars();
    let axis = match chars.next()? {
        'x' | 'a' => Axis::X,
        'y' | 'b' => Axis::Y,
        _ => return None,
    };
    let rest = chars.as_str();
    if rest.is_empty() {
        return Some((axis, None));
    }
    if !rest.chars().all(|c| c.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    Some((axis, Some(rest.parse().ok()?)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Form,
    Curve,
    Word,
    Factorization,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Form => "form",
            Kind::Curve => "curve",
            Kind::Word => "word",
            Kind::Factorization => "factorization",
        })
    }
}

/// Scope and dimension checks, in statement order.
struct Checker {
    genus: Option<usize>,
    names: HashMap<String, Kind>,
}

impl Checker {
    fn genus(&self, pos: Pos) -> Result<usize> {
        self.genus
            .ok_or_else(|| ScriptError::new(pos, ErrorKind::Dimension, "no `basis` declared yet"))
    }

    fn declare(&mut self, name: &Name, kind: Kind) -> Result<()> {
        if self.names.contains_key(&name.text) {
            return Err(ScriptError::new(name.pos, ErrorKind::Syntax, format!("`{}` is already declared", name.text)));
        }
        self.names.insert(name.text.clone(), kind);
        Ok(())
    }

    fn expect(&self, name: &Name, kind: Kind) -> Result<()> {
        match self.names.get(&name.text) {
            None => Err(ScriptError::new(name.pos, ErrorKind::Undeclared, format!("`{}`", name.text))),
            Some(k) if *k != kind => Err(ScriptError::new(
                name.pos,
                ErrorKind::Type,
                format!("`{}` is a {k}, expected a {kind}", name.text),
            )),
            Some(_) => Ok(()),
        }
    }

    fn index(&self, index: usize, pos: Pos) -> Result<()> {
        let g = self.genus(pos)?;
        if index == 0 || index > g {
            return Err(ScriptError::new(pos, ErrorKind::Dimension, format!("index {index} is out of range for genus {g}")));
        }
        Ok(())
    }

    fn statement(&mut self, s: &Statement) -> Result<()> {
        let pos = s.pos;
        match &s.stmt {
            Stmt::Basis { genus, .. } => {
                if self.genus.is_some() {
                    return Err(ScriptError::new(pos, ErrorKind::Syntax, "`basis` is already declared"));
                }
                if *genus == 0 {
                    return Err(ScriptError::new(pos, ErrorKind::Dimension, "genus must be positive"));
                }
                self.genus = Some(*genus);
            }
            Stmt::Form { name, spec } => {
                self.genus(pos)?;
                if let FormSpec::Values(values) = spec {
                    for v in values {
                        if let Some(i) = v.index {
                            self.index(i, pos)?;
                        }
                    }
                }
                self.declare(name, Kind::Form)?;
            }
            Stmt::Curve { name, class } => {
                let g = self.genus(pos)?;
                for t in class.sparse.iter().flatten() {
                    self.index(t.index, t.pos)?;
                }
                if let Some(v) = &class.ints {
                    if v.len() != 2 * g {
                        return Err(ScriptError::new(
                            name.pos,
                            ErrorKind::Dimension,
                            format!("integer class has {} entries, genus {g} needs {}", v.len(), 2 * g),
                        ));
                    }
                }
                self.declare(name, Kind::Curve)?;
            }
            Stmt::Word { name, spec } => {
                self.genus(pos)?;
                if let WordSpec::Letters(letters) = spec {
                    for (n, _) in letters {
                        self.expect(n, Kind::Curve)?;
                    }
                }
                self.declare(name, Kind::Word)?;
            }
            Stmt::Factorization { name, spec } => {
                self.genus(pos)?;
                if let FactorizationSpec::Entries { entries, .. } = spec {
                    for (n, _) in entries {
                        self.expect(n, Kind::Curve)?;
                    }
                }
                self.declare(name, Kind::Factorization)?;
            }
            Stmt::Conjugate { name, source, word } => {
                self.expect(source, Kind::Factorization)?;
                self.expect(word, Kind::Word)?;
                self.declare(name, Kind::Factorization)?;
            }
            Stmt::FiberSum { name, first, second, word } => {
                self.expect(first, Kind::Factorization)?;
                self.expect(second, Kind::Factorization)?;
                if let Some(w) = word {
                    self.expect(w, Kind::Word)?;
                }
                self.declare(name, Kind::Factorization)?;
            }
            Stmt::Breed { name, source, .. } | Stmt::Hurwitz { name, source, .. } => {
                self.expect(source, Kind::Factorization)?;
                self.declare(name, Kind::Factorization)?;
            }
            Stmt::Check { form, curve, .. } => {
                self.expect(form, Kind::Form)?;
                self.expect(curve, Kind::Curve)?;
            }
            Stmt::CheckSpin { factorization, form } => {
                self.expect(factorization, Kind::Factorization)?;
                self.expect(form, Kind::Form)?;
            }
            Stmt::CheckRelation { factorization }
            | Stmt::Invariants { factorization, .. }
            | Stmt::H1 { factorization } => self.expect(factorization, Kind::Factorization)?,
        }
        Ok(())
    }
}

/// Parses and scope-checks a script.
pub fn parse_script(text: &str) -> Result<Script> {
    let mut p = Parser { toks: lex(text)?, i: 0 };
    let mut checker = Checker { genus: None, names: HashMap::new() };
    let mut statements = Vec::new();
    while p.peek().tok != Tok::Eof {
        let s = p.statement()?;
        checker.statement(&s)?;
        statements.push(s);
    }
    Ok(Script { statements })
}

// ---------------------------------------------------------------- printing

fn axis_letter(axis: Axis, scheme: LabelScheme) -> char {
    match (axis, scheme) {
        (Axis::X, LabelScheme::Xy) => 'x',
        (Axis::Y, LabelScheme::Xy) => 'y',
        (Axis::X, LabelScheme::Ab) => 'a',
        (Axis::Y, LabelScheme::Ab) => 'b',
    }
}

fn print_class(c: &ClassLit, scheme: LabelScheme) -> String {
    let mut out = String::new();
    for (i, t) in c.sparse.iter().flatten().enumerate() {
        if t.coeff < 0 {
            out.push('-');
        } else if i > 0 {
            out.push('+');
        }
        if t.coeff.abs() != 1 {
            out += &t.coeff.abs().to_string();
        }
        out.push(axis_letter(t.axis, scheme));
        out += &t.index.to_string();
    }
    if let Some(v) = &c.ints {
        if !out.is_empty() {
            out.push(' ');
        }
        let parts: Vec<String> = v.iter().map(i64::to_string).collect();
        out += &format!("[{}]", parts.join(","));
    }
    out
}

impl Statement {
    /// Canonical text, without the trailing `;`.
    pub fn canonical(&self, scheme: LabelScheme) -> String {
        match &self.stmt {
            Stmt::Basis { genus, scheme: s } => match s {
                LabelScheme::Xy => format!("basis g={genus}"),
                LabelScheme::Ab => format!("basis g={genus} labels=ab"),
            },
            Stmt::Form { name, spec } => {
                let rhs = match spec {
                    FormSpec::Uniform => "uniform".to_string(),
                    FormSpec::Chain => "chain".to_string(),
                    FormSpec::Values(values) => values
                        .iter()
                        .map(|v| {
                            let idx = v.index.map_or("*".to_string(), |i| i.to_string());
                            format!("{}{idx}:{}", axis_letter(v.axis, scheme), v.value as u8)
                        })
                        .collect::<Vec<_>>()
                        .join(" "),
                };
                format!("form {} = {rhs}", name.text)
            }
            Stmt::Curve { name, class } => format!("curve {} = {}", name.text, print_class(class, scheme)),
            Stmt::Word { name, spec } => {
                let rhs = match spec {
                    WordSpec::Phi => "catalog phi".to_string(),
                    WordSpec::Psi => "catalog psi".to_string(),
                    WordSpec::Letters(letters) => letters
                        .iter()
                        .map(|(n, e)| if *e == 1 { n.text.clone() } else { format!("{}^{e}", n.text) })
                        .collect::<Vec<_>>()
                        .join(" "),
                };
                if rhs.is_empty() {
                    format!("word {} =", name.text)
                } else {
                    format!("word {} = {rhs}", name.text)
                }
            }
            Stmt::Factorization { name, spec } => {
                let rhs = match spec {
                    FactorizationSpec::Catalog(c) => match c {
                        Catalog::BuildingBlock => "catalog building-block".to_string(),
                        Catalog::U => "catalog u".to_string(),
                        Catalog::V => "catalog v".to_string(),
                        Catalog::Z { k } => format!("catalog z k={k}"),
                    },
                    FactorizationSpec::Entries { entries, power } => {
                        let mut s: Vec<String> = entries
                            .iter()
                            .map(|(n, e)| if *e == 1 { n.text.clone() } else { format!("{}^{e}", n.text) })
                            .collect();
                        if *power != 0 {
                            s.push(format!("power {power}"));
                        }
                        s.join(" ")
                    }
                };
                format!("factorization {} = {rhs}", name.text)
            }
            Stmt::Conjugate { name, source, word } => {
                format!("conjugate {} = {} by {}", name.text, source.text, word.text)
            }
            Stmt::FiberSum { name, first, second, word } => {
                let mut s = format!("fibersum {} = {} {}", name.text, first.text, second.text);
                if let Some(w) = word {
                    s += &format!(" by {}", w.text);
                }
                s
            }
            Stmt::Breed { name, source, at } => format!("breed {} = {} at {at}", name.text, source.text),
            Stmt::Hurwitz { name, source, at, direction } => {
                let d = match direction {
                    Direction::Left => "left",
                    Direction::Right => "right",
                };
                format!("hurwitz {} = {} at {at} {d}", name.text, source.text)
            }
            Stmt::Check { form, curve, expect } => {
                if *expect {
                    format!("check {} {}", form.text, curve.text)
                } else {
                    format!("check {} {} = 0", form.text, curve.text)
                }
            }
            Stmt::CheckSpin { factorization, form } => {
                format!("check-spin {} {}", factorization.text, form.text)
            }
            Stmt::CheckRelation { factorization } => format!("check-relation {}", factorization.text),
            Stmt::Invariants { factorization, signature } => match signature {
                None => format!("invariants {}", factorization.text),
                Some(s) => {
                    let s = match s {
                        SignatureChoice::Endo => "endo",
                        SignatureChoice::Meyer => "meyer",
                        SignatureChoice::Bred => "bred",
                    };
                    format!("invariants {} signature={s}", factorization.text)
                }
            },
            Stmt::H1 { factorization } => format!("h1 {}", factorization.text),
        }
    }
}

impl Script {
    /// Canonical text of every statement, in order.
    pub fn canonical_statements(&self) -> Vec<String> {
        let mut scheme = LabelScheme::Xy;
        self.statements
            .iter()
            .map(|s| {
                if let Stmt::Basis { scheme: sc, .. } = s.stmt {
                    scheme = sc;
                }
                s.canonical(scheme)
            })
            .collect()
    }
}

/// One statement per line, each ending in `;`.
impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.canonical_statements() {
            writeln!(f, "{s};")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- running

/// The result of one query statement.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryOutcome {
    pub pos: Pos,
    /// Canonical statement text.
    pub statement: String,
    /// Canonical text of the script up to and including this statement.
    pub prefix: String,
    pub verdict: bool,
    pub summary: String,
    pub result: Value,
}

#[derive(Default)]
struct Env {
    genus: usize,
    scheme: LabelScheme,
    forms: HashMap<String, QuadraticForm>,
    curves: HashMap<String, Curve>,
    words: HashMap<String, TwistWord>,
    factorizations: HashMap<String, PositiveFactorization>,
}

fn lib_err(pos: Pos) -> impl Fn(spinlab::Error) -> ScriptError {
    move |e| ScriptError::new(pos, ErrorKind::Precondition, e.to_string())
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library certificates serialize")
}

impl Env {
    fn form(&self, spec: &FormSpec) -> QuadraticForm {
        let g = self.genus;
        match spec {
            FormSpec::Uniform => uniform_spin_form(g),
            FormSpec::Chain => chain_spin_form(g),
            FormSpec::Values(values) => {
                let mut x = vec![false; g];
                let mut y = vec![false; g];
                for v in values {
                    let target = match v.axis {
                        Axis::X => &mut x,
                        Axis::Y => &mut y,
                    };
                    match v.index {
                        Some(i) => target[i - 1] = v.value,
                        None => target.iter_mut().for_each(|b| *b = v.value),
                    }
                }
                QuadraticForm::from_fn(g, |i| x[i - 1], |i| y[i - 1])
            }
        }
    }

    fn curve(&self, name: &str, class: &ClassLit, pos: Pos) -> Result<Curve> {
        let g = self.genus;
        let int = match &class.ints {
            Some(v) => Some(IntClass::from_coords(v.clone()).map_err(lib_err(pos))?),
            None => None,
        };
        let mod2 = match &class.sparse {
            Some(terms) => {
                let mut m = Mod2Class::zero(g);
                for t in terms {
                    if t.coeff % 2 != 0 {
                        m += &match t.axis {
                            Axis::X => Mod2Class::x(g, t.index),
                            Axis::Y => Mod2Class::y(g, t.index),
                        };
                    }
                }
                m
            }
            None => int.as_ref().map(spinlab::homology::HomologyClass::reduce).expect("parser requires a class"),
        };
        Curve::try_new(name, mod2, int).map_err(|_| {
            ScriptError::new(
                pos,
                ErrorKind::Precondition,
                format!("the sparse and integer forms of `{name}` disagree mod 2"),
            )
        })
    }

    fn factorization(&self, spec: &FactorizationSpec, pos: Pos) -> Result<PositiveFactorization> {
        let g = self.genus;
        let err = lib_err(pos);
        match spec {
            FactorizationSpec::Catalog(c) => match c {
                Catalog::BuildingBlock => korkmaz_cadavid(g).map_err(err),
                Catalog::U => u_v_factorizations(g).map(|(u, _)| u).map_err(err),
                Catalog::V => u_v_factorizations(g).map(|(_, v)| v).map_err(err),
                Catalog::Z { k } => z_factorization(g, *k).map_err(err),
            },
            FactorizationSpec::Entries { entries, power } => {
                let twists = entries
                    .iter()
                    .flat_map(|(n, e)| std::iter::repeat_n(self.curves[&n.text].clone(), *e as usize))
                    .collect();
                PositiveFactorization::new(g, twists, *power).map_err(err)
            }
        }
    }

    fn run(&mut self, s: &Statement) -> Result<Option<(bool, String, Value)>> {
        let pos = s.pos;
        let err = lib_err(pos);
        match &s.stmt {
            Stmt::Basis { genus, scheme } => {
                self.genus = *genus;
                self.scheme = *scheme;
            }
            Stmt::Form { name, spec } => {
                let q = self.form(spec);
                self.forms.insert(name.text.clone(), q);
            }
            Stmt::Curve { name, class } => {
                let c = self.curve(&name.text, class, name.pos)?;
                self.curves.insert(name.text.clone(), c);
            }
            Stmt::Word { name, spec } => {
                let w = match spec {
                    WordSpec::Phi => phi_psi(self.genus).map_err(&err)?.0,
                    WordSpec::Psi => phi_psi(self.genus).map_err(&err)?.1,
                    WordSpec::Letters(letters) => TwistWord::new(
                        letters
                            .iter()
                            .flat_map(|(n, e)| {
                                let c = self.curves[&n.text].clone();
                                let letter = if *e > 0 { Letter::twist(c) } else { Letter::inverse_twist(c) };
                                std::iter::repeat_n(letter, e.unsigned_abs() as usize)
                            })
                            .collect(),
                    ),
                };
                self.words.insert(name.text.clone(), w);
            }
            Stmt::Factorization { name, spec } => {
                let p = self.factorization(spec, pos)?;
                self.factorizations.insert(name.text.clone(), p);
            }
            Stmt::Conjugate { name, source, word } => {
                let p = conjugate(&self.factorizations[&source.text], &self.words[&word.text]).map_err(err)?;
                self.factorizations.insert(name.text.clone(), p);
            }
            Stmt::FiberSum { name, first, second, word } => {
                let w = word.as_ref().map_or_else(TwistWord::identity, |w| self.words[&w.text].clone());
                let p = fiber_sum(&self.factorizations[&first.text], &self.factorizations[&second.text], &w)
                    .map_err(err)?;
                self.factorizations.insert(name.text.clone(), p);
            }
            Stmt::Breed { name, source, at } => {
                let pencil = pencil_images(self.genus).map_err(&err)?;
                let p = breed(&self.factorizations[&source.text], *at, &pencil).map_err(err)?;
                self.factorizations.insert(name.text.clone(), p);
            }
            Stmt::Hurwitz { name, source, at, direction } => {
                let p = hurwitz_move(&self.factorizations[&source.text], *at, *direction).map_err(err)?;
                self.factorizations.insert(name.text.clone(), p);
            }
            Stmt::Check { form, curve, expect } => {
                let q = &self.forms[&form.text];
                let c = &self.curves[&curve.text];
                let value = q.eval(c.class_mod2()).map_err(err)?;
                let class = c.class_mod2().display_with(self.scheme);
                let summary = format!("{}({}) = {}", form.text, curve.text, value as u8);
                let result = json!({
                    "form": q.display_with(self.scheme),
                    "curve": curve.text,
                    "class": class,
                    "value": value as u8,
                    "expected": *expect as u8,
                });
                return Ok(Some((value == *expect, summary, result)));
            }
            Stmt::CheckSpin { factorization, form } => {
                let p = &self.factorizations[&factorization.text];
                let cert = check_spin(p, &self.forms[&form.text]).map_err(err)?;
                let failing = cert.failing_labels();
                let summary = format!(
                    "spin {}: all q = 1: {}, boundary power {} ({}), {} failing",
                    if cert.verdict { "yes" } else { "no" },
                    cert.all_ones,
                    cert.boundary_power,
                    if cert.power_even { "even" } else { "odd" },
                    failing.len()
                );
                return Ok(Some((cert.verdict, summary, to_json(&cert))));
            }
            Stmt::CheckRelation { factorization } => {
                let r = check_relation(&self.factorizations[&factorization.text]);
                let integral = match r.integral {
                    Some(b) => b.to_string(),
                    None => "n/a".to_string(),
                };
                let summary = format!("relation mod 2: {}, integral: {integral}", r.mod2);
                return Ok(Some((r.holds(), summary, to_json(&r))));
            }
            Stmt::Invariants { factorization, signature } => {
                let p = &self.factorizations[&factorization.text];
                let choice = signature.unwrap_or(if p.has_integer_classes() {
                    SignatureChoice::Meyer
                } else {
                    SignatureChoice::Bred
                });
                let source = match choice {
                    SignatureChoice::Endo => SignatureSource::EndoHyperelliptic(
                        HyperellipticCertificate::asserted(format!("asserted by script at {pos}")),
                    ),
                    SignatureChoice::Meyer => SignatureSource::Meyer,
                    SignatureChoice::Bred => {
                        let base = 16 * p.genus() + 8;
                        let extra = p.len().saturating_sub(base);
                        if p.len() < base || !extra.is_multiple_of(4) {
                            return Err(ScriptError::new(
                                pos,
                                ErrorKind::Precondition,
                                format!("length {} is not a bred-family length", p.len()),
                            ));
                        }
                        SignatureSource::BredFamily { k: (extra / 4) as u32 }
                    }
                };
                let inv = invariants_of(p, &source).map_err(err)?;
                let summary = format!(
                    "e = {}, sigma = {} ({}), chi_h = {}, c1^2 = {}",
                    inv.euler, inv.signature, inv.signature_method, inv.chi_h, inv.c1sq
                );
                return Ok(Some((true, summary, to_json(&inv))));
            }
            Stmt::H1 { factorization } => {
                let h = fibration_h1(&self.factorizations[&factorization.text]);
                let summary = format!("H1 = {h}");
                let mut result = to_json(&h);
                result["display"] = Value::String(h.to_string());
                return Ok(Some((true, summary, result)));
            }
        }
        Ok(None)
    }
}

/// Runs a parsed script, returning one outcome per query.
pub fn run_script(script: &Script) -> Result<Vec<QueryOutcome>> {
    let texts = script.canonical_statements();
    let mut env = Env::default();
    let mut out = Vec::new();
    let mut prefix = String::new();
    for (s, text) in script.statements.iter().zip(&texts) {
        prefix += text;
        prefix += ";\n";
        if let Some((verdict, summary, result)) = env.run(s)? {
            out.push(QueryOutcome {
                pos: s.pos,
                statement: text.clone(),
                prefix: prefix.clone(),
                verdict,
                summary,
                result,
            });
        }
    }
    Ok(out)
}
