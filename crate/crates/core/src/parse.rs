//! Concrete syntax for terms, contexts, judgements, substitutions, rules and
//! `.nrs` system files.
//!
//! ```text
//! term   ::= atom | Var | (a b)(c d).Var | [a]term | f(term, ...)
//! ctx    ::= a#X, b#Y      | a,b#X       | {a#X}
//! judge  ::= [ctx |-] a # term | [ctx |-] term =ac term
//! subst  ::= [X -> term, ...]
//! rule   ::= [name:] [ctx |-] term -> term
//! ```
//!
//! An identifier followed by `(` is a function symbol; otherwise a lowercase
//! initial makes an atom and an uppercase initial (or `_`) a variable.

use std::fmt::Write as _;

use crate::alpha::{Constraint, FreshnessContext};
use crate::error::{Error, Result};
use crate::rewrite::{RewriteRule, RewriteSystem};
use crate::syntax::{Atom, Perm, Signature, Substitution, Symbol, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Hash,
    Colon,
    Turnstile,
    Arrow,
    EqAc,
    EqUnify,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Hash => "`#`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::EqAc => "`=ac`".into(),
            Tok::EqUnify => "`=?`".into(),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(input: &str, line: usize) -> Result<Vec<(Tok, usize, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let (mut i, mut ln, mut col) = (0, line, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (ln, col);
        let two = |s: &str| chars[i..].iter().take(s.len()).collect::<String>() == s;
        let (tok, len) = if c == '\n' {
            i += 1;
            ln += 1;
            col = 1;
            continue;
        } else if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        } else if two("|-") {
            (Tok::Turnstile, 2)
        } else if two("->") {
            (Tok::Arrow, 2)
        } else if two("=ac") {
            (Tok::EqAc, 3)
        } else if two("=?") {
            (Tok::EqUnify, 2)
        } else if c.is_ascii_digit() {
            let n: String = chars[i..].iter().take_while(|c| c.is_ascii_digit()).collect();
            let len = n.len();
            if chars.get(i + len).is_some_and(|c| is_ident_char(*c)) {
                let s: String = chars[i..].iter().take_while(|c| is_ident_char(**c)).collect();
                return Err(Error::Parse { line: start.0, column: start.1, message: format!("bad identifier `{s}`") });
            }
            (Tok::Num(n.parse().expect("digits")), len)
        } else if is_ident_char(c) {
            let s: String = chars[i..].iter().take_while(|c| is_ident_char(**c)).collect();
            let len = s.chars().count();
            (Tok::Ident(s), len)
        } else {
            let t = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '#' => Tok::Hash,
                ':' => Tok::Colon,
                _ => {
                    return Err(Error::Parse {
                        line: start.0,
                        column: start.1,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            };
            (t, 1)
        };
        out.push((tok, start.0, start.1));
        i += len;
        col += len;
    }
    Ok(out)
}

fn is_var_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase() || c == '_')
}

struct Parser<'a> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
    sig: Option<&'a Signature>,
}

impl<'a> Parser<'a> {
    fn new(input: &str, line: usize, sig: Option<&'a Signature>) -> Result<Parser<'a>> {
        let toks = lex(input, line)?;
        let last_line = line + input.matches('\n').count();
        let last_col = input.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Ok(Parser { toks, pos: 0, end: (last_line, last_col), sig })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.0)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.1, t.2))
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = self.here();
        Error::Parse { line, column, message: message.into() }
    }

    fn unexpected(&self, wanted: &str) -> Error {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        match self.peek() {
            Some(Tok::Ident(s)) if !is_var_name(s) => {
                let a = Atom::new(s);
                self.pos += 1;
                Ok(a)
            }
            _ => Err(self.unexpected("an atom")),
        }
    }

    fn var(&mut self) -> Result<Var> {
        match self.peek() {
            Some(Tok::Ident(s)) if is_var_name(s) => {
                let v = Var::new(s);
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.unexpected("a variable")),
        }
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek() {
            Some(Tok::LBrack) => {
                self.pos += 1;
                let a = self.atom()?;
                self.expect(Tok::RBrack)?;
                let body = self.term()?;
                Ok(Term::Abs(a, Box::new(body)))
            }
            Some(Tok::LParen) => {
                let mut swaps = Vec::new();
                while self.eat(&Tok::LParen) {
                    let a = self.atom()?;
                    let b = self.atom()?;
                    self.expect(Tok::RParen)?;
                    swaps.push((a, b));
                }
                self.expect(Tok::Dot)?;
                let x = self.var()?;
                Ok(Term::Susp(Perm::from_swaps(swaps), x))
            }
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                if self.peek_at(1) == Some(&Tok::LParen) {
                    let (line, column) = self.here();
                    self.pos += 2;
                    let mut args = Vec::new();
                    if !self.eat(&Tok::RParen) {
                        loop {
                            args.push(self.term()?);
                            if self.eat(&Tok::RParen) {
                                break;
                            }
                            self.expect(Tok::Comma)?;
                        }
                    }
                    let sym = self.symbol(&name, args.len(), line, column)?;
                    Ok(Term::App(sym, args))
                } else if is_var_name(&name) {
                    self.pos += 1;
                    Ok(Term::Susp(Perm::id(), Var::new(&name)))
                } else {
                    self.pos += 1;
                    Ok(Term::Atom(Atom::new(&name)))
                }
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn symbol(&self, name: &str, arity: usize, line: usize, column: usize) -> Result<Symbol> {
        let Some(sig) = self.sig else {
            return Ok(Symbol::new(name));
        };
        match sig.arity(name) {
            None => Err(Error::Parse { line, column, message: format!("undeclared symbol `{name}`") }),
            Some(expected) if expected != arity => {
                Err(Error::Arity { symbol: name.to_string(), expected, found: arity })
            }
            Some(_) => Ok(sig.symbol(name).expect("declared")),
        }
    }

    /// `a#X, b#Y`, `a,b#X`, optionally in braces; may be empty.
    fn context(&mut self) -> Result<FreshnessContext> {
        let braced = self.eat(&Tok::LBrace);
        let mut ctx = FreshnessContext::new();
        let mut pending: Vec<Atom> = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Ident(s)) if !is_var_name(s) => {
                    pending.push(self.atom()?);
                    if self.eat(&Tok::Hash) {
                        let x = self.var()?;
                        for a in pending.drain(..) {
                            ctx.insert(a, x.clone());
                        }
                    }
                }
                _ if pending.is_empty() => break,
                _ => return Err(self.unexpected("`#`")),
            }
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        if !pending.is_empty() {
            return Err(self.unexpected("`#`"));
        }
        if braced {
            self.expect(Tok::RBrace)?;
        }
        Ok(ctx)
    }

    fn has_top_level(&self, tok: &Tok) -> bool {
        self.toks[self.pos..].iter().any(|t| &t.0 == tok)
    }

    fn optional_context(&mut self) -> Result<FreshnessContext> {
        if self.has_top_level(&Tok::Turnstile) {
            let ctx = self.context()?;
            self.expect(Tok::Turnstile)?;
            Ok(ctx)
        } else {
            Ok(FreshnessContext::new())
        }
    }

    fn judgement(&mut self) -> Result<Constraint> {
        let fresh = matches!(self.peek(), Some(Tok::Ident(s)) if !is_var_name(s))
            && self.peek_at(1) == Some(&Tok::Hash);
        if fresh {
            let a = self.atom()?;
            self.expect(Tok::Hash)?;
            Ok(Constraint::Fresh(a, self.term()?))
        } else {
            let s = self.term()?;
            self.expect(Tok::EqAc)?;
            Ok(Constraint::Equal(s, self.term()?))
        }
    }

    fn subst(&mut self) -> Result<Substitution> {
        let mut theta = Substitution::id();
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == "Id" || s == "id") && self.toks.len() == self.pos + 1 {
            self.pos += 1;
            return Ok(theta);
        }
        self.expect(Tok::LBrack)?;
        if self.eat(&Tok::RBrack) {
            return Ok(theta);
        }
        loop {
            let x = self.var()?;
            if theta.get(&x).is_some() {
                return Err(self.error(format!("variable {x} bound twice")));
            }
            self.expect(Tok::Arrow)?;
            let t = self.term()?;
            theta.insert(x, t);
            if self.eat(&Tok::RBrack) {
                return Ok(theta);
            }
            self.expect(Tok::Comma)?;
        }
    }

    fn rule(&mut self, default_name: &str) -> Result<RewriteRule> {
        let name = if matches!(self.peek(), Some(Tok::Ident(_))) && self.peek_at(1) == Some(&Tok::Colon) {
            let n = self.ident()?;
            self.pos += 1;
            n
        } else {
            default_name.to_string()
        };
        let ctx = self.optional_context()?;
        let lhs = self.term()?;
        self.expect(Tok::Arrow)?;
        let rhs = self.term()?;
        RewriteRule::new(name, ctx, lhs, rhs)
    }
}

fn with_parser<T>(input: &str, sig: Option<&Signature>, f: impl FnOnce(&mut Parser) -> Result<T>) -> Result<T> {
    let mut p = Parser::new(input, 1, sig)?;
    let out = f(&mut p)?;
    p.finish()?;
    Ok(out)
}

/// Parses a term; with a signature, symbols must be declared with matching
/// arity, otherwise every symbol is taken as free.
pub fn parse_term(input: &str, sig: Option<&Signature>) -> Result<Term> {
    with_parser(input, sig, |p| p.term())
}

pub fn parse_context(input: &str) -> Result<FreshnessContext> {
    with_parser(input, None, |p| p.context())
}

/// `[ctx |-] a # t` or `[ctx |-] s =ac t`.
pub fn parse_judgement(input: &str, sig: Option<&Signature>) -> Result<(FreshnessContext, Constraint)> {
    with_parser(input, sig, |p| {
        let ctx = p.optional_context()?;
        Ok((ctx, p.judgement()?))
    })
}

/// `[ctx |-] s` or `[ctx |-] s =? t`.
pub fn parse_problem(input: &str, sig: Option<&Signature>) -> Result<(FreshnessContext, Term, Option<Term>)> {
    with_parser(input, sig, |p| {
        let ctx = p.optional_context()?;
        let s = p.term()?;
        let t = if p.eat(&Tok::EqUnify) { Some(p.term()?) } else { None };
        Ok((ctx, s, t))
    })
}

/// `[X -> t, ...]`; `[]` and `Id` are the identity.
pub fn parse_subst(input: &str, sig: Option<&Signature>) -> Result<Substitution> {
    with_parser(input, sig, |p| p.subst())
}

pub fn parse_rule(input: &str, sig: Option<&Signature>) -> Result<RewriteRule> {
    with_parser(input, sig, |p| p.rule("r"))
}

/// A parsed `.nrs` file: the system and its named problems, in file order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemFile {
    pub system: RewriteSystem,
    pub problems: Vec<(String, String)>,
}

impl SystemFile {
    pub fn problem(&self, name: &str) -> Option<&str> {
        self.problems.iter().find(|(n, _)| n == name).map(|(_, p)| p.as_str())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Sig,
    Rules,
    Problems,
}

/// Parses a system file with `sig:`, `rules:` and `problems:` sections.
/// Lines starting with `#` are comments.
pub fn parse_system(input: &str) -> Result<SystemFile> {
    let mut sig = Signature::new();
    let mut rule_lines: Vec<(usize, String)> = Vec::new();
    let mut problems: Vec<(String, String)> = Vec::new();
    let mut section = Section::None;
    for (i, raw) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let header = match line {
            "sig:" => Some(Section::Sig),
            "rules:" => Some(Section::Rules),
            "problems:" => Some(Section::Problems),
            _ => None,
        };
        if let Some(h) = header {
            section = h;
            continue;
        }
        let column = raw.len() - raw.trim_start().len() + 1;
        match section {
            Section::None => {
                return Err(Error::Parse { line: line_no, column, message: "text outside a section".into() })
            }
            Section::Sig => {
                let mut p = Parser::new(line, line_no, None)?;
                let name = p.ident()?;
                p.expect(Tok::Colon)?;
                let arity = match p.peek() {
                    Some(Tok::Num(n)) => {
                        let n = *n;
                        p.pos += 1;
                        n
                    }
                    _ => return Err(p.unexpected("an arity")),
                };
                let comm = match p.peek() {
                    Some(Tok::Ident(s)) if s == "comm" => {
                        p.pos += 1;
                        true
                    }
                    _ => false,
                };
                p.finish()?;
                sig.declare(&name, arity, comm)?;
            }
            Section::Rules => rule_lines.push((line_no, line.to_string())),
            Section::Problems => {
                let Some((name, text)) = line.split_once(':') else {
                    return Err(Error::Parse { line: line_no, column, message: "expected `name: problem`".into() });
                };
                problems.push((name.trim().to_string(), text.trim().to_string()));
            }
        }
    }
    let mut rules = Vec::new();
    for (k, (line_no, text)) in rule_lines.iter().enumerate() {
        let mut p = Parser::new(text, *line_no, Some(&sig))?;
        let rule = p.rule(&format!("R{}", k + 1))?;
        p.finish()?;
        rules.push(rule);
    }
    let system = RewriteSystem::new(sig, rules)?;
    Ok(SystemFile { system, problems })
}

/// Prints a system file that [`parse_system`] reads back.
pub fn print_system(file: &SystemFile) -> String {
    let mut out = String::from("sig:\n");
    let _ = write!(out, "{}", file.system.signature);
    out.push_str("rules:\n");
    for r in file.system.rules() {
        let _ = writeln!(out, "  {r}");
    }
    if !file.problems.is_empty() {
        out.push_str("problems:\n");
        for (n, p) in &file.problems {
            let _ = writeln!(out, "  {n}: {p}");
        }
    }
    out
}
