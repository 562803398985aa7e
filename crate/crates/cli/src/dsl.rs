//! The workspace language: named algebraic bindings parsed from plain text.
//!
//! A workspace is a sequence of statements, one binding each.  `#` starts a
//! comment, whitespace (including newlines) is free, and every binding after
//! the first `ring` statement lives over the most recently declared ring:
//!
//! ```text
//! ring R = ZZ                      # also QQ, Z/12, GF(2), QQ[x,y], GF(2)[x]/(x^3)
//! ideal I = (x^2, x*y)
//! prime p = (2)                    # certified; append `assume prime` to bypass
//! module M = coker [[12]]          # rows = generators, columns = relations
//! set S = closure{ p }             # specialization-closed set from bound primes
//! points P = { p }
//! gseq Y = (S1, S2) for R          # generator: a ring name (free of rank one)
//! ```
//!
//! Integer and polynomial literals use explicit `*` for products and `^` for
//! powers.  Printing a workspace with [`Workspace::render`] yields text that
//! parses back to the same bindings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use modspectra::spectrum;
use modspectra::{
    GSequence, Ideal, Matrix, ModulePresentation, PointSet, PrimeIdeal, Ring, RingElement, SpecSet,
};
use num_bigint::BigInt;

use crate::error::{CliError, CliResult};

/// Line/column position of a token or binding in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Eq,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Caret,
    Star,
    Plus,
    Minus,
    Slash,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(s) => format!("`{s}`"),
            Tok::Eq => "`=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Star => "`*`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Slash => "`/`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
}

fn lex(label: &str, text: &str) -> CliResult<Vec<Token>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut column = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let span = Span { line, column };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    column += 1;
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                        column += 1;
                    } else {
                        break;
                    }
                }
                out.push(Token { tok: Tok::Ident(s), span });
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        chars.next();
                        column += 1;
                    } else {
                        break;
                    }
                }
                out.push(Token { tok: Tok::Int(s), span });
            }
            _ => {
                let tok = match c {
                    '=' => Tok::Eq,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    ',' => Tok::Comma,
                    '^' => Tok::Caret,
                    '*' => Tok::Star,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '/' => Tok::Slash,
                    other => {
                        return Err(CliError::parse(
                            label,
                            line,
                            column,
                            format!("unexpected character `{other}`"),
                        ))
                    }
                };
                chars.next();
                column += 1;
                out.push(Token { tok, span });
            }
        }
    }
    Ok(out)
}

/// One named binding together with where it was declared.
#[derive(Debug, Clone)]
pub struct Binding {
    pub value: BoundValue,
    pub span: Span,
}

/// The typed value behind a workspace name.  Set-like bindings remember the
/// names they were assembled from so the workspace can be printed back.
#[derive(Debug, Clone)]
pub enum BoundValue {
    Ring(Ring),
    Ideal(Ideal),
    Prime { prime: PrimeIdeal, assumed: bool },
    Module(ModulePresentation),
    Set { set: SpecSet, prime_names: Vec<String> },
    Points { points: PointSet, prime_names: Vec<String> },
    GSeq { seq: GSequence, set_names: Vec<String>, generator: String },
}

impl BoundValue {
    pub fn kind_name(&self) -> &'static str {
        match self {
            BoundValue::Ring(_) => "ring",
            BoundValue::Ideal(_) => "ideal",
            BoundValue::Prime { .. } => "prime",
            BoundValue::Module(_) => "module",
            BoundValue::Set { .. } => "set",
            BoundValue::Points { .. } => "points",
            BoundValue::GSeq { .. } => "gseq",
        }
    }
}

/// Named bindings in declaration order, with the active ring context.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    order: Vec<String>,
    bindings: BTreeMap<String, Binding>,
    current_ring: Option<String>,
}

impl Workspace {
    fn lookup<'a, T>(
        &'a self,
        name: &str,
        want: &str,
        pick: impl Fn(&'a BoundValue) -> Option<T>,
    ) -> CliResult<T> {
        match self.bindings.get(name) {
            None => Err(CliError::usage(format!("no binding named `{name}` in the workspace"))),
            Some(b) => pick(&b.value).ok_or_else(|| {
                CliError::usage(format!(
                    "binding `{name}` is a {}, expected a {want}",
                    b.value.kind_name()
                ))
            }),
        }
    }

    pub fn module(&self, name: &str) -> CliResult<&ModulePresentation> {
        self.lookup(name, "module", |v| match v {
            BoundValue::Module(m) => Some(m),
            _ => None,
        })
    }

    pub fn prime(&self, name: &str) -> CliResult<&PrimeIdeal> {
        self.lookup(name, "prime", |v| match v {
            BoundValue::Prime { prime, .. } => Some(prime),
            _ => None,
        })
    }

    pub fn spec_set(&self, name: &str) -> CliResult<&SpecSet> {
        self.lookup(name, "set", |v| match v {
            BoundValue::Set { set, .. } => Some(set),
            _ => None,
        })
    }

    pub fn point_set(&self, name: &str) -> CliResult<&PointSet> {
        self.lookup(name, "points", |v| match v {
            BoundValue::Points { points, .. } => Some(points),
            _ => None,
        })
    }

    pub fn gseq(&self, name: &str) -> CliResult<&GSequence> {
        self.lookup(name, "gseq", |v| match v {
            BoundValue::GSeq { seq, .. } => Some(seq),
            _ => None,
        })
    }

    /// Canonical text form; parsing it back yields the same bindings.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for name in &self.order {
            let b = &self.bindings[name];
            match &b.value {
                BoundValue::Ring(r) => {
                    let _ = writeln!(out, "ring {name} = {r}");
                }
                BoundValue::Ideal(i) => {
                    let _ = writeln!(out, "ideal {name} = ({})", basis_text(i));
                }
                BoundValue::Prime { prime, assumed } => {
                    let suffix = if *assumed { " assume prime" } else { "" };
                    let _ =
                        writeln!(out, "prime {name} = ({}){suffix}", basis_text(prime.ideal()));
                }
                BoundValue::Module(m) => {
                    let _ = writeln!(out, "module {name} = coker {}", render_matrix(m.relations()));
                }
                BoundValue::Set { prime_names, .. } => {
                    let _ = writeln!(out, "set {name} = closure{{ {} }}", prime_names.join(", "));
                }
                BoundValue::Points { prime_names, .. } => {
                    let _ = writeln!(out, "points {name} = {{ {} }}", prime_names.join(", "));
                }
                BoundValue::GSeq { set_names, generator, .. } => {
                    let _ =
                        writeln!(out, "gseq {name} = ({}) for {generator}", set_names.join(", "));
                }
            }
        }
        out
    }
}

fn basis_text(ideal: &Ideal) -> String {
    let basis = ideal.canonical_basis();
    if basis.is_empty() {
        return "0".to_string();
    }
    basis.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")
}

/// A relations matrix in the statement syntax: `[[2, 0], [0, 3]]`.
pub fn render_matrix(m: &Matrix) -> String {
    if m.rows() == 0 {
        return "[]".to_string();
    }
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let entries: Vec<String> = (0..m.cols()).map(|j| m.entry(i, j).to_string()).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Parses workspace text.  `label` names the source (file path or `<stdin>`)
/// and prefixes every error location.
pub fn parse_workspace(text: &str, label: &str) -> CliResult<Workspace> {
    let toks = lex(label, text)?;
    let mut parser = Parser { label: label.to_string(), toks, pos: 0 };
    let mut ws = Workspace::default();
    while parser.peek().is_some() {
        parser.statement(&mut ws)?;
    }
    Ok(ws)
}

/// Parses a standalone ring literal such as `Z/12` or `QQ[x,y]/(x^2, x*y)`.
pub fn parse_ring_literal(text: &str, label: &str) -> CliResult<Ring> {
    let toks = lex(label, text)?;
    let mut parser = Parser { label: label.to_string(), toks, pos: 0 };
    let ring = parser.ring_literal()?;
    parser.expect_end()?;
    Ok(ring)
}

/// Parses a standalone certified prime literal such as `(2)` or `(x^2+1)`
/// over `ring`.  Assumption is not available here; use a workspace binding
/// with `assume prime` for uncertifiable primes.
pub fn parse_prime_literal(ring: &Ring, text: &str, label: &str) -> CliResult<PrimeIdeal> {
    let toks = lex(label, text)?;
    let mut parser = Parser { label: label.to_string(), toks, pos: 0 };
    parser.expect_tok(&Tok::LParen)?;
    let gens = parser.poly_list(ring, &Tok::RParen)?;
    parser.expect_tok(&Tok::RParen)?;
    parser.expect_end()?;
    let ideal = Ideal::new(ring, gens)?;
    PrimeIdeal::new(ideal).map_err(|e| {
        CliError::usage(format!(
            "the ideal {text} could not be certified prime ({e}); bind it in the workspace with `assume prime` if it is known to be prime"
        ))
    })
}

struct Parser {
    label: String,
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|t| &t.tok)
    }

    fn here(&self) -> Span {
        match self.toks.get(self.pos) {
            Some(t) => t.span,
            None => self.toks.last().map(|t| t.span).unwrap_or(Span { line: 1, column: 1 }),
        }
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, span: Span, message: impl Into<String>) -> CliError {
        CliError::parse(&self.label, span.line, span.column, message)
    }

    /// Wraps a library error with the current source location.
    fn core(&self, span: Span, e: modspectra::Error) -> CliError {
        self.error(span, e.to_string())
    }

    fn expected(&self, what: &str) -> CliError {
        let span = self.here();
        match self.peek() {
            Some(t) => self.error(span, format!("expected {what}, found {}", t.describe())),
            None => self.error(span, format!("expected {what}, found end of input")),
        }
    }

    fn expect_tok(&mut self, want: &Tok) -> CliResult<Span> {
        match self.peek() {
            Some(t) if t == want => Ok(self.advance().unwrap().span),
            _ => Err(self.expected(&want.describe())),
        }
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_ident(&mut self, what: &str) -> CliResult<(String, Span)> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let t = self.advance().unwrap();
                match t.tok {
                    Tok::Ident(s) => Ok((s, t.span)),
                    _ => unreachable!(),
                }
            }
            _ => Err(self.expected(what)),
        }
    }

    fn expect_keyword(&mut self, word: &str) -> CliResult<Span> {
        let (s, span) = self.expect_ident(&format!("`{word}`"))?;
        if s == word {
            Ok(span)
        } else {
            Err(self.error(span, format!("expected `{word}`, found `{s}`")))
        }
    }

    fn expect_int(&mut self) -> CliResult<(String, Span)> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let t = self.advance().unwrap();
                match t.tok {
                    Tok::Int(s) => Ok((s, t.span)),
                    _ => unreachable!(),
                }
            }
            _ => Err(self.expected("an integer")),
        }
    }

    fn expect_end(&mut self) -> CliResult<()> {
        if self.peek().is_some() {
            Err(self.expected("end of input"))
        } else {
            Ok(())
        }
    }

    fn statement(&mut self, ws: &mut Workspace) -> CliResult<()> {
        let (kw, span) = self.expect_ident(
            "a statement (one of `ring`, `ideal`, `prime`, `module`, `set`, `points`, `gseq`)",
        )?;
        match kw.as_str() {
            "ring" => self.ring_stmt(ws),
            "ideal" => self.ideal_stmt(ws),
            "prime" => self.prime_stmt(ws),
            "module" => self.module_stmt(ws),
            "set" => self.set_stmt(ws),
            "points" => self.points_stmt(ws),
            "gseq" => self.gseq_stmt(ws),
            other => Err(self.error(
                span,
                format!(
                    "unknown statement `{other}` (expected one of `ring`, `ideal`, `prime`, `module`, `set`, `points`, `gseq`)"
                ),
            )),
        }
    }

    fn binding_header(&mut self) -> CliResult<(String, Span)> {
        let (name, span) = self.expect_ident("a binding name")?;
        self.expect_tok(&Tok::Eq)?;
        Ok((name, span))
    }

    fn insert(&mut self, ws: &mut Workspace, name: String, span: Span, value: BoundValue) -> CliResult<()> {
        if let Some(prev) = ws.bindings.get(&name) {
            return Err(self.error(
                span,
                format!(
                    "the name `{name}` is already bound (as a {} at line {})",
                    prev.value.kind_name(),
                    prev.span.line
                ),
            ));
        }
        if matches!(value, BoundValue::Ring(_)) {
            ws.current_ring = Some(name.clone());
        }
        ws.order.push(name.clone());
        ws.bindings.insert(name, Binding { value, span });
        Ok(())
    }

    fn context_ring<'w>(&self, ws: &'w Workspace, span: Span) -> CliResult<&'w Ring> {
        let name = ws
            .current_ring
            .as_ref()
            .ok_or_else(|| self.error(span, "no `ring` statement precedes this binding"))?;
        match &ws.bindings[name].value {
            BoundValue::Ring(r) => Ok(r),
            _ => unreachable!("current_ring always names a ring binding"),
        }
    }

    fn ring_stmt(&mut self, ws: &mut Workspace) -> CliResult<()> {
        let (name, span) = self.binding_header()?;
        let ring = self.ring_literal()?;
        self.insert(ws, name, span, BoundValue::Ring(ring))
    }

    fn ring_literal(&mut self) -> CliResult<Ring> {
        let (base_word, span) = self.expect_ident("a base ring (`ZZ`, `QQ`, `Z/n`, or `GF(p)`)")?;
        let base = match base_word.as_str() {
            "ZZ" => Ring::integers(),
            "QQ" => Ring::rationals(),
            "Z" => {
                self.expect_tok(&Tok::Slash)?;
                let (n, nspan) = self.expect_int()?;
                let n: BigInt = n.parse().expect("lexed integer");
                Ring::integers_mod(n).map_err(|e| self.core(nspan, e))?
            }
            "GF" => {
                self.expect_tok(&Tok::LParen)?;
                let (p, pspan) = self.expect_int()?;
                self.expect_tok(&Tok::RParen)?;
                let p: BigInt = p.parse().expect("lexed integer");
                Ring::prime_field(p).map_err(|e| self.core(pspan, e))?
            }
            other => {
                return Err(self.error(
                    span,
                    format!("unknown ring `{other}` (expected one of `ZZ`, `QQ`, `Z/n`, `GF(p)`)"),
                ))
            }
        };
        let ring = if self.eat(&Tok::LBracket) {
            let mut vars = Vec::new();
            loop {
                let (v, _) = self.expect_ident("a variable name")?;
                vars.push(v);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect_tok(&Tok::RBracket)?;
            Ring::polynomial(base.base().clone(), vars).map_err(|e| self.core(span, e))?
        } else {
            base
        };
        if self.peek() == Some(&Tok::Slash) && self.peek2() == Some(&Tok::LParen) {
            self.advance();
            self.advance();
            let gens = self.poly_list(&ring, &Tok::RParen)?;
            let close = self.expect_tok(&Tok::RParen)?;
            return Ring::quotient(&ring, &gens).map_err(|e| self.core(close, e));
        }
        Ok(ring)
    }

    fn ideal_stmt(&mut self, ws: &mut Workspace) -> CliResult<()> {
        let (name, span) = self.binding_header()?;
        let ring = self.context_ring(ws, span)?.clone();
        self.expect_tok(&Tok::LParen)?;
        let gens = self.poly_list(&ring, &Tok::RParen)?;
        self.expect_tok(&Tok::RParen)?;
        let ideal = Ideal::new(&ring, gens).map_err(|e| self.core(span, e))?;
        self.insert(ws, name, span, BoundValue::Ideal(ideal))
    }

    fn prime_stmt(&mut self, ws: &mut Workspace) -> CliResult<()> {
        let (name, span) = self.binding_header()?;
        let ring = self.context_ring(ws, span)?.clone();
        self.expect_tok(&Tok::LParen)?;
        let gens = self.poly_list(&ring, &Tok::RParen)?;
        self.expect_tok(&Tok::RParen)?;
        let assumed = if matches!(self.peek(), Some(Tok::Ident(w)) if w == "assume") {
            self.advance();
            self.expect_keyword("prime")?;
            true
        } else {
            false
        };
        let ideal = Ideal::new(&ring, gens).map_err(|e| self.core(span, e))?;
        let prime = if assumed {
            PrimeIdeal::asserted(ideal)
        } else {
            PrimeIdeal::new(ideal).map_err(|e| {
                self.error(
                    span,
                    format!(
                        "the ideal could not be certified prime ({e}); append `assume prime` if it is known to be prime"
                    ),
                )
            })?
        };
        self.insert(ws, name, span, BoundValue::Prime { prime, assumed })
    }

    fn module_stmt(&mut self, ws: &mut Workspace) -> CliResult<()> {
        let (name, span) = self.binding_header()?;
        let ring = self.context_ring(ws, span)?.clone();
        self.expect_keyword("coker")?;
        let relations = self.matrix(&ring)?;
        let module = ModulePresentation::free(&ring, relations.rows())
            .quotient(&relations)
            .map_err(|e| self.core(span, e))?;
        self.insert(ws, name, span, BoundValue::Module(module))
    }

    fn matrix(&mut self, ring: &Ring) -> CliResult<Matrix> {
        let open = self.expect_tok(&Tok::LBracket)?;
        if self.eat(&Tok::RBracket) {
            return Matrix::from_fn(ring, 0, 0, |_, _| ring.zero()).map_err(|e| self.core(open, e));
        }
        let mut rows: Vec<Vec<RingElement>> = Vec::new();
        let mut row_spans: Vec<Span> = Vec::new();
        loop {
            let row_span = self.expect_tok(&Tok::LBracket)?;
            let entries = if self.peek() == Some(&Tok::RBracket) {
                Vec::new()
            } else {
                self.poly_list(ring, &Tok::RBracket)?
            };
            self.expect_tok(&Tok::RBracket)?;
            rows.push(entries);
            row_spans.push(row_span);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect_tok(&Tok::RBracket)?;
        let cols = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(self.error(
                    row_spans[i],
                    format!(
                        "matrix rows must have equal length (row 1 has {cols} entries, row {} has {})",
                        i + 1,
                        row.len()
                    ),
                ));
            }
        }
        Matrix::from_fn(ring, rows.len(), cols, |i, j| rows[i][j].clone())
            .map_err(|e| self.core(open, e))
    }

    fn set_stmt(&mut self, ws: &mut Workspace) -> CliResult<()> {
        let (name, span) = self.binding_header()?;
        let ring = self.context_ring(ws, span)?.clone();
        self.expect_keyword("closure")?;
        self.expect_tok(&Tok::LBrace)?;
        let prime_names = self.name_list(&Tok::RBrace)?;
        self.expect_tok(&Tok::RBrace)?;
        let mut primes = Vec::new();
        for pname in &prime_names {
            primes.push(self.bound_prime(ws, pname, span)?);
        }
        let set = if primes.is_empty() {
            SpecSet::empty(&ring)
        } else {
            spectrum::spec_closure(&ring, primes).map_err(|e| self.core(span, e))?
        };
        self.insert(ws, name, span, BoundValue::Set { set, prime_names })
    }

    fn points_stmt(&mut self, ws: &mut Workspace) -> CliResult<()> {
        let (name, span) = self.binding_header()?;
        let ring = self.context_ring(ws, span)?.clone();
        self.expect_tok(&Tok::LBrace)?;
        let prime_names = self.name_list(&Tok::RBrace)?;
        self.expect_tok(&Tok::RBrace)?;
        let mut primes = Vec::new();
        for pname in &prime_names {
            primes.push(self.bound_prime(ws, pname, span)?);
        }
        let points = PointSet::from_primes(&ring, primes).map_err(|e| self.core(span, e))?;
        self.insert(ws, name, span, BoundValue::Points { points, prime_names })
    }

    fn gseq_stmt(&mut self, ws: &mut Workspace) -> CliResult<()> {
        let (name, span) = self.binding_header()?;
        self.expect_tok(&Tok::LParen)?;
        let set_names = self.name_list(&Tok::RParen)?;
        self.expect_tok(&Tok::RParen)?;
        self.expect_keyword("for")?;
        let (generator, gspan) = self.expect_ident("a ring or module name")?;
        let mut sets = Vec::new();
        for sname in &set_names {
            match ws.bindings.get(sname) {
                Some(Binding { value: BoundValue::Set { set, .. }, .. }) => sets.push(set.clone()),
                Some(b) => {
                    return Err(self.error(
                        span,
                        format!("binding `{sname}` is a {}, expected a set", b.value.kind_name()),
                    ))
                }
                None => return Err(self.error(span, format!("no binding named `{sname}`"))),
            }
        }
        let seq = match ws.bindings.get(&generator) {
            Some(Binding { value: BoundValue::Ring(r), .. }) => {
                GSequence::new(r, sets).map_err(|e| self.core(span, e))?
            }
            Some(Binding { value: BoundValue::Module(m), .. }) => {
                GSequence::with_generator(m.ring(), sets, m.clone(), None)
                    .map_err(|e| self.core(span, e))?
            }
            Some(b) => {
                return Err(self.error(
                    gspan,
                    format!(
                        "binding `{generator}` is a {}, expected a ring or a module",
                        b.value.kind_name()
                    ),
                ))
            }
            None => return Err(self.error(gspan, format!("no binding named `{generator}`"))),
        };
        self.insert(ws, name, span, BoundValue::GSeq { seq, set_names, generator })
    }

    fn bound_prime(&self, ws: &Workspace, name: &str, span: Span) -> CliResult<PrimeIdeal> {
        match ws.bindings.get(name) {
            Some(Binding { value: BoundValue::Prime { prime, .. }, .. }) => Ok(prime.clone()),
            Some(b) => Err(self.error(
                span,
                format!("binding `{name}` is a {}, expected a prime", b.value.kind_name()),
            )),
            None => Err(self.error(span, format!("no binding named `{name}`"))),
        }
    }

    fn name_list(&mut self, terminator: &Tok) -> CliResult<Vec<String>> {
        let mut names = Vec::new();
        if self.peek() == Some(terminator) {
            return Ok(names);
        }
        loop {
            let (n, _) = self.expect_ident("a binding name")?;
            names.push(n);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(names)
    }

    fn poly_list(&mut self, ring: &Ring, terminator: &Tok) -> CliResult<Vec<RingElement>> {
        let mut out = Vec::new();
        if self.peek() == Some(terminator) {
            return Ok(out);
        }
        loop {
            out.push(self.poly(ring)?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(out)
    }

    fn poly(&mut self, ring: &Ring) -> CliResult<RingElement> {
        let span = self.here();
        let negated = self.eat(&Tok::Minus);
        let mut acc = self.term(ring)?;
        if negated {
            acc = acc.neg();
        }
        loop {
            if self.eat(&Tok::Plus) {
                let rhs = self.term(ring)?;
                acc = acc.add(&rhs).map_err(|e| self.core(span, e))?;
            } else if self.eat(&Tok::Minus) {
                let rhs = self.term(ring)?;
                acc = acc.add(&rhs.neg()).map_err(|e| self.core(span, e))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self, ring: &Ring) -> CliResult<RingElement> {
        let span = self.here();
        let mut acc = self.factor(ring)?;
        while self.eat(&Tok::Star) {
            let rhs = self.factor(ring)?;
            acc = acc.mul(&rhs).map_err(|e| self.core(span, e))?;
        }
        Ok(acc)
    }

    fn factor(&mut self, ring: &Ring) -> CliResult<RingElement> {
        let atom = self.atom(ring)?;
        if self.eat(&Tok::Caret) {
            let (e, espan) = self.expect_int()?;
            let e: u32 = e
                .parse()
                .map_err(|_| self.error(espan, format!("exponent `{e}` is out of range")))?;
            return Ok(atom.pow(e));
        }
        Ok(atom)
    }

    fn atom(&mut self, ring: &Ring) -> CliResult<RingElement> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let (digits, _) = self.expect_int()?;
                let n: BigInt = digits.parse().expect("lexed integer");
                Ok(ring.from_bigint(n))
            }
            Some(Tok::Ident(_)) => {
                let (name, span) = self.expect_ident("a variable")?;
                match ring.vars().iter().position(|v| *v == name) {
                    Some(i) => ring.var(i).map_err(|e| self.core(span, e)),
                    None => Err(self.error(
                        span,
                        format!(
                            "unknown variable `{name}` (ring {ring} has variables: {})",
                            if ring.vars().is_empty() {
                                "none".to_string()
                            } else {
                                ring.vars().join(", ")
                            }
                        ),
                    )),
                }
            }
            Some(Tok::LParen) => {
                self.advance();
                let inner = self.poly(ring)?;
                self.expect_tok(&Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.expected("an integer, a variable, or `(`")),
        }
    }
}
