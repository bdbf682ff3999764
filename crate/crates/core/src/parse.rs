//! Parser and serializer for the `.prs` text format: sort, symbol and
//! rule declarations, plus the term and script syntax the command-line
//! frontend accepts.
//!
//! ```text
//! # line comment
//! sort U
//! sig not : U -> U
//! rule NotNot : (x:U) |- not (not x) => x
//! ```
//!
//! Types: `1` is the unit type, `*` (product) binds tighter than `->`,
//! both associate to the right. Terms: `\x:T. t` abstraction, juxtaposition
//! application (left-associative), `<s, t>` pairs, `pr1 t`/`pr2 t`
//! projections, `()` the unit value.

use crate::rewrite::{Direction, Prs, ReplayStep, Rule};
use crate::subst::Subst;
use crate::term::{Context, Position, Signature, Term, Type};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    fn new(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    One,
    LParen,
    RParen,
    LAngle,
    RAngle,
    Comma,
    Colon,
    Dot,
    Star,
    Lambda,
    Arrow,     // ->
    DArrow,    // =>
    Turnstile, // |-
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::One => write!(f, "`1`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LAngle => write!(f, "`<`"),
            Tok::RAngle => write!(f, "`>`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Lambda => write!(f, "`\\`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::DArrow => write!(f, "`=>`"),
            Tok::Turnstile => write!(f, "`|-`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, co) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump(&mut chars);
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars);
                }
            }
            '(' => {
                bump(&mut chars);
                toks.push((Tok::LParen, l, co));
            }
            ')' => {
                bump(&mut chars);
                toks.push((Tok::RParen, l, co));
            }
            '<' => {
                bump(&mut chars);
                toks.push((Tok::LAngle, l, co));
            }
            '>' => {
                bump(&mut chars);
                toks.push((Tok::RAngle, l, co));
            }
            ',' => {
                bump(&mut chars);
                toks.push((Tok::Comma, l, co));
            }
            ':' => {
                bump(&mut chars);
                toks.push((Tok::Colon, l, co));
            }
            '.' => {
                bump(&mut chars);
                toks.push((Tok::Dot, l, co));
            }
            '*' => {
                bump(&mut chars);
                toks.push((Tok::Star, l, co));
            }
            '\\' => {
                bump(&mut chars);
                toks.push((Tok::Lambda, l, co));
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    toks.push((Tok::Arrow, l, co));
                } else {
                    return Err(ParseError::new(l, co, "expected `->`"));
                }
            }
            '=' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    toks.push((Tok::DArrow, l, co));
                } else {
                    return Err(ParseError::new(l, co, "expected `=>`"));
                }
            }
            '|' => {
                bump(&mut chars);
                if chars.peek() == Some(&'-') {
                    bump(&mut chars);
                    toks.push((Tok::Turnstile, l, co));
                } else {
                    return Err(ParseError::new(l, co, "expected `|-`"));
                }
            }
            '1' => {
                bump(&mut chars);
                if chars
                    .peek()
                    .is_some_and(|c| c.is_alphanumeric() || *c == '_' || *c == '\'')
                {
                    return Err(ParseError::new(
                        l,
                        co,
                        "identifiers cannot start with a digit",
                    ));
                }
                toks.push((Tok::One, l, co));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '\'' {
                        s.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(s), l, co));
            }
            other => {
                return Err(ParseError::new(
                    l,
                    co,
                    format!("unexpected character `{other}`"),
                ));
            }
        }
    }
    toks.push((Tok::Eof, line, col));
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        let (_, l, c) = self.toks[self.pos];
        (l, c)
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        let (l, c) = self.here();
        let got = self.next();
        if got == *want {
            Ok(())
        } else {
            Err(ParseError::new(
                l,
                c,
                format!("expected {want}, found {got}"),
            ))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        let (l, c) = self.here();
        match self.next() {
            Tok::Ident(s) => Ok(s),
            got => Err(ParseError::new(
                l,
                c,
                format!("expected {what}, found {got}"),
            )),
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (l, c) = self.here();
        Err(ParseError::new(l, c, msg.into()))
    }
}

const KEYWORDS: [&str; 5] = ["sort", "sig", "rule", "pr1", "pr2"];

fn parse_type(lx: &mut Lexer) -> Result<Type, ParseError> {
    let left = parse_type_prod(lx)?;
    if *lx.peek() == Tok::Arrow {
        lx.next();
        let right = parse_type(lx)?;
        Ok(Type::arrow(left, right))
    } else {
        Ok(left)
    }
}

fn parse_type_prod(lx: &mut Lexer) -> Result<Type, ParseError> {
    let left = parse_type_atom(lx)?;
    if *lx.peek() == Tok::Star {
        lx.next();
        let right = parse_type_prod(lx)?;
        Ok(Type::prod(left, right))
    } else {
        Ok(left)
    }
}

fn parse_type_atom(lx: &mut Lexer) -> Result<Type, ParseError> {
    match lx.peek().clone() {
        Tok::One => {
            lx.next();
            Ok(Type::Unit)
        }
        Tok::Ident(s) => {
            lx.next();
            Ok(Type::Base(s))
        }
        Tok::LParen => {
            lx.next();
            let t = parse_type(lx)?;
            lx.expect(&Tok::RParen)?;
            Ok(t)
        }
        got => lx.err(format!("expected a type, found {got}")),
    }
}

/// `(x:T, y:T)` or `()`.
fn parse_ctx(lx: &mut Lexer) -> Result<Context, ParseError> {
    let (l, c) = lx.here();
    lx.expect(&Tok::LParen)?;
    let mut ctx = Context::new();
    if *lx.peek() == Tok::RParen {
        lx.next();
        return Ok(ctx);
    }
    loop {
        let (vl, vc) = lx.here();
        let name = lx.ident("a variable name")?;
        if KEYWORDS.contains(&name.as_str()) {
            return Err(ParseError::new(
                vl,
                vc,
                format!("`{name}` is a reserved word"),
            ));
        }
        lx.expect(&Tok::Colon)?;
        let ty = parse_type(lx)?;
        ctx.push(name, ty)
            .map_err(|e| ParseError::new(vl, vc, e.to_string()))?;
        match lx.next() {
            Tok::Comma => continue,
            Tok::RParen => return Ok(ctx),
            got => {
                return Err(ParseError::new(
                    l,
                    c,
                    format!("expected `,` or `)` in context, found {got}"),
                ))
            }
        }
    }
}

struct TermEnv<'a> {
    sig: &'a Signature,
    ctx: &'a Context,
    binders: Vec<String>,
}

impl TermEnv<'_> {
    fn resolve(&self, name: &str, l: usize, c: usize) -> Result<Term, ParseError> {
        if let Some(i) = self.binders.iter().rev().position(|b| b == name) {
            return Ok(Term::Bound(i));
        }
        if self.ctx.contains(name) {
            return Ok(Term::var(name));
        }
        if self.sig.type_of(name).is_some() {
            return Ok(Term::cst(name));
        }
        Err(ParseError::new(
            l,
            c,
            format!("unbound identifier `{name}`"),
        ))
    }
}

fn parse_term(lx: &mut Lexer, env: &mut TermEnv) -> Result<Term, ParseError> {
    if *lx.peek() == Tok::Lambda {
        lx.next();
        let (l, c) = lx.here();
        let name = lx.ident("a binder name")?;
        if KEYWORDS.contains(&name.as_str()) {
            return Err(ParseError::new(
                l,
                c,
                format!("`{name}` is a reserved word"),
            ));
        }
        if env.binders.contains(&name)
            || env.ctx.contains(&name)
            || env.sig.type_of(&name).is_some()
        {
            return Err(ParseError::new(
                l,
                c,
                format!("binder `{name}` shadows a name already in scope"),
            ));
        }
        lx.expect(&Tok::Colon)?;
        let ty = parse_type(lx)?;
        lx.expect(&Tok::Dot)?;
        env.binders.push(name);
        let body = parse_term(lx, env)?;
        env.binders.pop();
        Ok(Term::abs(ty, body))
    } else {
        parse_app(lx, env)
    }
}

const DECL_KEYWORDS: [&str; 3] = ["sort", "sig", "rule"];

fn starts_atom(t: &Tok) -> bool {
    match t {
        Tok::Ident(s) => !DECL_KEYWORDS.contains(&s.as_str()),
        Tok::LParen | Tok::LAngle => true,
        _ => false,
    }
}

fn parse_app(lx: &mut Lexer, env: &mut TermEnv) -> Result<Term, ParseError> {
    let mut t = parse_atom(lx, env)?;
    while starts_atom(lx.peek()) {
        let arg = parse_atom(lx, env)?;
        t = Term::app(t, arg);
    }
    Ok(t)
}

fn parse_atom(lx: &mut Lexer, env: &mut TermEnv) -> Result<Term, ParseError> {
    let (l, c) = lx.here();
    match lx.peek().clone() {
        Tok::Ident(s) if s == "pr1" || s == "pr2" => {
            lx.next();
            let arg = parse_atom(lx, env)?;
            let p = if s == "pr1" {
                crate::term::Proj::Fst
            } else {
                crate::term::Proj::Snd
            };
            Ok(Term::proj(p, arg))
        }
        Tok::Ident(s) => {
            if DECL_KEYWORDS.contains(&s.as_str()) {
                return lx.err(format!("`{s}` is a reserved word"));
            }
            lx.next();
            env.resolve(&s, l, c)
        }
        Tok::LParen => {
            lx.next();
            if *lx.peek() == Tok::RParen {
                lx.next();
                return Ok(Term::Unit);
            }
            let t = parse_term(lx, env)?;
            lx.expect(&Tok::RParen)?;
            Ok(t)
        }
        Tok::LAngle => {
            lx.next();
            let a = parse_term(lx, env)?;
            lx.expect(&Tok::Comma)?;
            let b = parse_term(lx, env)?;
            lx.expect(&Tok::RAngle)?;
            Ok(Term::pair(a, b))
        }
        got => lx.err(format!("expected a term, found {got}")),
    }
}

/// A declaration with its source location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub line: usize,
    pub col: usize,
    pub kind: DeclKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeclKind {
    Sort(String),
    Symbol(String, Type),
    Rule {
        name: String,
        ctx: Context,
        lhs: Term,
        rhs: Term,
    },
}

/// A parsed source file: the declarations in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceFile {
    pub decls: Vec<Decl>,
}

/// Parses a `.prs` file into its declarations and the system they
/// declare. Name resolution, typing, and the right-hand-variable condition
/// are checked here; the deeper rule hypotheses are `validate_prs`'s job.
pub fn parse_file(text: &str) -> Result<(SourceFile, Prs), ParseError> {
    let mut lx = lex(text)?;
    let mut decls = Vec::new();
    let mut sig = Signature::new();
    let mut rules: Vec<Rule> = Vec::new();
    loop {
        let (l, c) = lx.here();
        match lx.peek().clone() {
            Tok::Eof => break,
            Tok::Ident(kw) if kw == "sort" => {
                lx.next();
                let name = lx.ident("a sort name")?;
                sig.add_sort(name.clone())
                    .map_err(|e| ParseError::new(l, c, e.to_string()))?;
                decls.push(Decl {
                    line: l,
                    col: c,
                    kind: DeclKind::Sort(name),
                });
            }
            Tok::Ident(kw) if kw == "sig" => {
                lx.next();
                let name = lx.ident("a symbol name")?;
                if KEYWORDS.contains(&name.as_str()) {
                    return Err(ParseError::new(
                        l,
                        c,
                        format!("`{name}` is a reserved word"),
                    ));
                }
                lx.expect(&Tok::Colon)?;
                let ty = parse_type(&mut lx)?;
                sig.add_symbol(name.clone(), ty.clone())
                    .map_err(|e| ParseError::new(l, c, e.to_string()))?;
                decls.push(Decl {
                    line: l,
                    col: c,
                    kind: DeclKind::Symbol(name, ty),
                });
            }
            Tok::Ident(kw) if kw == "rule" => {
                lx.next();
                let name = lx.ident("a rule name")?;
                lx.expect(&Tok::Colon)?;
                let ctx = parse_ctx(&mut lx)?;
                lx.expect(&Tok::Turnstile)?;
                let mut env = TermEnv {
                    sig: &sig,
                    ctx: &ctx,
                    binders: Vec::new(),
                };
                let lhs = parse_term(&mut lx, &mut env)?;
                lx.expect(&Tok::DArrow)?;
                let rhs = parse_term(&mut lx, &mut env)?;
                if rules.iter().any(|r| r.name == name) {
                    return Err(ParseError::new(
                        l,
                        c,
                        format!("rule name `{name}` declared twice"),
                    ));
                }
                let rule = Rule::new(&sig, name.clone(), ctx.clone(), lhs.clone(), rhs.clone())
                    .map_err(|e| ParseError::new(l, c, e.to_string()))?;
                rules.push(rule);
                decls.push(Decl {
                    line: l,
                    col: c,
                    kind: DeclKind::Rule {
                        name,
                        ctx,
                        lhs,
                        rhs,
                    },
                });
            }
            got => {
                return Err(ParseError::new(
                    l,
                    c,
                    format!("expected `sort`, `sig` or `rule`, found {got}"),
                ))
            }
        }
    }
    let prs = Prs::new(sig, rules).expect("duplicate rule names rejected above");
    Ok((SourceFile { decls }, prs))
}

/// Renders a system back into the text format. Reparsing the output gives
/// an identical declaration sequence.
pub fn serialize(prs: &Prs) -> String {
    let mut out = String::new();
    for s in prs.sig.sorts() {
        out.push_str(&format!("sort {s}\n"));
    }
    for (name, ty) in prs.sig.symbols() {
        out.push_str(&format!("sig {name} : {ty}\n"));
    }
    let mut avoid: BTreeSet<String> = prs.sig.symbols().iter().map(|(n, _)| n.clone()).collect();
    avoid.extend(prs.sig.sorts().iter().cloned());
    for rule in &prs.rules {
        let mut avoid = avoid.clone();
        avoid.extend(rule.surface_ctx.entries().iter().map(|(n, _)| n.clone()));
        out.push_str(&format!(
            "rule {} : {} |- {} => {}\n",
            rule.name,
            rule.surface_ctx,
            print_avoiding(&rule.surface_lhs, &avoid),
            print_avoiding(&rule.surface_rhs, &avoid),
        ));
    }
    out
}

/// Prints a term whose generated binder names avoid the given set, so the
/// output resolves identically when reparsed.
pub fn print_avoiding(term: &Term, avoid: &BTreeSet<String>) -> String {
    let mut used: BTreeSet<String> = term.free_vars().iter().map(|s| s.to_string()).collect();
    used.extend(avoid.iter().cloned());
    used.extend(KEYWORDS.iter().map(|s| s.to_string()));
    crate::term::print_term_avoiding(term, &used)
}

/// Parses `ctx |- term` or a bare `term` (empty context) over a signature.
pub fn parse_term_in_context(sig: &Signature, text: &str) -> Result<(Context, Term), ParseError> {
    let mut lx = lex(text)?;
    let ctx = if *lx.peek() == Tok::LParen && looks_like_ctx(&lx) {
        let ctx = parse_ctx(&mut lx)?;
        lx.expect(&Tok::Turnstile)?;
        ctx
    } else {
        Context::new()
    };
    let mut env = TermEnv {
        sig,
        ctx: &ctx,
        binders: Vec::new(),
    };
    let term = parse_term(&mut lx, &mut env)?;
    lx.expect(&Tok::Eof)?;
    Ok((ctx, term))
}

/// Parses a bare term over an explicit ambient context.
pub fn parse_term_with_ctx(sig: &Signature, ctx: &Context, text: &str) -> Result<Term, ParseError> {
    let mut lx = lex(text)?;
    let mut env = TermEnv {
        sig,
        ctx,
        binders: Vec::new(),
    };
    let term = parse_term(&mut lx, &mut env)?;
    lx.expect(&Tok::Eof)?;
    Ok(term)
}

/// Distinguishes `(x:U, ...) |- t` from a parenthesized term: the tokens
/// form a context exactly when the matching `)` is followed by `|-`.
fn looks_like_ctx(lx: &Lexer) -> bool {
    let mut depth = 0usize;
    for (i, (tok, _, _)) in lx.toks[lx.pos..].iter().enumerate() {
        match tok {
            Tok::LParen => depth += 1,
            Tok::RParen => {
                depth -= 1;
                if depth == 0 {
                    return lx.toks[lx.pos + i + 1].0 == Tok::Turnstile;
                }
            }
            Tok::Eof => return false,
            _ => {}
        }
    }
    false
}

/// Parses a replay script. The first directive fixes the start term:
///
/// ```text
/// term (x:U, y:U) |- not (and x y)
/// bwd NotNot at [2,1,2]
/// fwd NotNot at [] with x = not y
/// ```
pub fn parse_script(
    sig: &Signature,
    text: &str,
) -> Result<(Context, Term, Vec<ReplayStep>), ParseError> {
    let mut start: Option<(Context, Term)> = None;
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("term ") {
            if start.is_some() {
                return Err(ParseError::new(line_no, 1, "duplicate `term` directive"));
            }
            let (ctx, term) = parse_term_in_context(sig, rest)
                .map_err(|e| ParseError::new(line_no, e.col, e.msg))?;
            start = Some((ctx, term));
            continue;
        }
        let Some((ctx, _)) = &start else {
            return Err(ParseError::new(
                line_no,
                1,
                "script must begin with `term <ctx> |- <term>`",
            ));
        };
        let words: Vec<&str> = line.splitn(2, " at ").collect();
        if words.len() != 2 {
            return Err(ParseError::new(
                line_no,
                1,
                "expected `<fwd|bwd> <rule> at <position>`",
            ));
        }
        let mut head = words[0].split_whitespace();
        let dir = match head.next() {
            Some("fwd") => Direction::Forward,
            Some("bwd") => Direction::Backward,
            other => {
                return Err(ParseError::new(
                    line_no,
                    1,
                    format!("expected `fwd` or `bwd`, found `{}`", other.unwrap_or("")),
                ))
            }
        };
        let Some(rule) = head.next() else {
            return Err(ParseError::new(line_no, 1, "missing rule name"));
        };
        if head.next().is_some() {
            return Err(ParseError::new(line_no, 1, "unexpected input before `at`"));
        }
        let (pos_text, with_text) = match words[1].split_once(" with ") {
            Some((p, w)) => (p.trim(), Some(w.trim())),
            None => (words[1].trim(), None),
        };
        let pos: Position = pos_text
            .parse()
            .map_err(|e: crate::term::PositionParseError| {
                ParseError::new(line_no, 1, e.to_string())
            })?;
        let subst = match with_text {
            None => None,
            Some(w) => {
                let mut s = Subst::new();
                for binding in w.split(',') {
                    let Some((var, val)) = binding.split_once('=') else {
                        return Err(ParseError::new(line_no, 1, "expected `<var> = <term>`"));
                    };
                    // the value is a term over the script's ambient context
                    let term = parse_term_with_ctx(sig, ctx, val.trim())
                        .map_err(|e| ParseError::new(line_no, e.col, e.msg))?;
                    s.bind(var.trim().to_string(), term);
                }
                Some(s)
            }
        };
        steps.push(ReplayStep {
            rule: rule.to_string(),
            dir,
            pos,
            subst,
        });
    }
    let Some((ctx, term)) = start else {
        return Err(ParseError::new(
            1,
            1,
            "script must begin with `term <ctx> |- <term>`",
        ));
    };
    Ok((ctx, term, steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    const NNF: &str = r#"
# negation normal form
sort U
sort V
sig not : U -> U
sig and : U -> U -> U
sig or  : U -> U -> U
sig all : (V -> U) -> U
sig ex  : (V -> U) -> U

rule NotNot : (x:U) |- not (not x) => x
rule NotAnd : (x:U, y:U) |- not (and x y) => or (not x) (not y)
rule NotOr  : (x:U, y:U) |- not (or x y)  => and (not x) (not y)
rule NotAll : (p:V -> U) |- not (all (\z:V. p z)) => ex (\z:V. not (p z))
rule NotEx  : (p:V -> U) |- not (ex (\z:V. p z))  => all (\z:V. not (p z))
"#;

    #[test]
    fn parses_nnf() {
        let (file, prs) = parse_file(NNF).unwrap();
        assert_eq!(prs.sig.sorts().len(), 2);
        assert_eq!(prs.sig.symbols().len(), 5);
        assert_eq!(prs.rules.len(), 5);
        assert_eq!(file.decls.len(), 12);
        // parsed rules agree with the programmatic fixture
        let fixture = crate::fixtures::nnf();
        for (a, b) in prs.rules.iter().zip(fixture.rules.iter()) {
            assert_eq!(a.name, b.name);
            assert_eq!(a.lhs, b.lhs);
            assert_eq!(a.rhs, b.rhs);
        }
    }

    #[test]
    fn empty_file_is_empty_system() {
        let (file, prs) = parse_file("").unwrap();
        assert!(file.decls.is_empty());
        assert!(prs.rules.is_empty());
        assert!(prs.sig.symbols().is_empty());
    }

    #[test]
    fn rhs_variable_not_in_lhs_is_rejected() {
        let text = "sort U\nrule Bad : (x:U, y:U) |- x => y\n";
        let err = parse_file(text).unwrap_err();
        assert!(err.msg.contains("not free in the left-hand side"), "{err}");
    }

    #[test]
    fn unknown_sort_and_duplicates_are_rejected() {
        assert!(parse_file("sig f : U -> U\n")
            .unwrap_err()
            .msg
            .contains("unknown sort"));
        assert!(parse_file("sort U\nsort U\n")
            .unwrap_err()
            .msg
            .contains("declared twice"));
        assert!(parse_file("sort U\nsig f : U\nsig f : U\n")
            .unwrap_err()
            .msg
            .contains("declared twice"));
        let text = "sort U\nsig a : U\nrule R : (x:U) |- x => x\nrule R : (x:U) |- x => x\n";
        assert!(parse_file(text).unwrap_err().msg.contains("declared twice"));
    }

    #[test]
    fn duplicate_context_variable_rejected() {
        let text = "sort U\nrule R : (x:U, x:U) |- x => x\n";
        assert!(parse_file(text)
            .unwrap_err()
            .msg
            .contains("duplicate context variable"));
    }

    #[test]
    fn type_errors_have_positions() {
        let text = "sort U\nsig a : U\nrule R : (f:U -> U) |- f a a => a\n";
        let err = parse_file(text).unwrap_err();
        assert_eq!(err.line, 3);
    }

    #[test]
    fn round_trip() {
        let (file, prs) = parse_file(NNF).unwrap();
        let printed = serialize(&prs);
        let (file2, prs2) = parse_file(&printed).unwrap();
        let kinds = |f: &SourceFile| f.decls.iter().map(|d| d.kind.clone()).collect::<Vec<_>>();
        assert_eq!(kinds(&file), kinds(&file2));
        assert_eq!(prs.rules, prs2.rules);
        assert_eq!(prs.sig, prs2.sig);
    }

    #[test]
    fn term_in_context_forms() {
        let (_, prs) = parse_file(NNF).unwrap();
        let (ctx, t) = parse_term_in_context(&prs.sig, "(a:U) |- not (not a)").unwrap();
        assert_eq!(ctx.len(), 1);
        assert_eq!(
            t,
            Term::app(
                Term::cst("not"),
                Term::app(Term::cst("not"), Term::var("a"))
            )
        );
        // a parenthesized closed term parses with an empty context
        let (ctx, t) = parse_term_in_context(&prs.sig, "(\\z:U. not z)").unwrap();
        assert!(ctx.is_empty());
        assert_eq!(
            t,
            Term::abs(Type::base("U"), Term::app(Term::cst("not"), Term::Bound(0)))
        );
        // `()` alone is the unit value, not an empty context
        let (ctx, t) = parse_term_in_context(&prs.sig, "()").unwrap();
        assert!(ctx.is_empty());
        assert_eq!(t, Term::Unit);
        // `() |- t` is an empty context
        let (ctx, _) = parse_term_in_context(&prs.sig, "() |- \\z:U. z").unwrap();
        assert!(ctx.is_empty());
    }

    #[test]
    fn script_parsing() {
        let (_, prs) = parse_file(NNF).unwrap();
        let script = "\
# derive NotAnd
term (x:U, y:U) |- not (and x y)
bwd NotNot at [2,1,2]
bwd NotNot at [2,2]
bwd NotOr at [2]
fwd NotNot at []
";
        let (ctx, term, steps) = parse_script(&prs.sig, script).unwrap();
        assert_eq!(ctx.len(), 2);
        assert_eq!(steps.len(), 4);
        assert_eq!(steps[0].dir, Direction::Backward);
        assert_eq!(steps[0].pos, Position(vec![2, 1, 2]));
        assert_eq!(steps[3].dir, Direction::Forward);
        assert_eq!(steps[3].pos, Position::root());
        let _ = term;
    }

    #[test]
    fn script_with_substitution() {
        let (_, prs) = parse_file(NNF).unwrap();
        let script = "\
term (a:U) |- a
bwd NotNot at [] with x = a
";
        let (_, _, steps) = parse_script(&prs.sig, script).unwrap();
        let subst = steps[0].subst.as_ref().unwrap();
        assert_eq!(subst.get("x"), Some(&Term::var("a")));
    }
}
