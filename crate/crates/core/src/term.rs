//! Core syntax: types, signatures, typing contexts, terms, and positions
//! for the simply typed lambda calculus with binary products and unit.
//!
//! Terms use a locally nameless representation: bound variables are de
//! Bruijn indices, free variables keep their context names. Alpha-equal
//! terms are therefore structurally equal, and `==` decides alpha
//! equivalence everywhere.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Simple types over a set of declared base sorts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Unit,
    Base(String),
    Prod(Box<Type>, Box<Type>),
    Arrow(Box<Type>, Box<Type>),
}

impl Type {
    pub fn base(name: impl Into<String>) -> Type {
        Type::Base(name.into())
    }

    pub fn prod(a: Type, b: Type) -> Type {
        Type::Prod(Box::new(a), Box::new(b))
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn is_base(&self) -> bool {
        matches!(self, Type::Base(_))
    }

    pub fn is_prod(&self) -> bool {
        matches!(self, Type::Prod(_, _))
    }

    /// All base sorts mentioned in the type.
    pub fn sorts(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_sorts(&mut out);
        out
    }

    fn collect_sorts<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Type::Unit => {}
            Type::Base(s) => {
                out.insert(s.as_str());
            }
            Type::Prod(a, b) | Type::Arrow(a, b) => {
                a.collect_sorts(out);
                b.collect_sorts(out);
            }
        }
    }

    /// Splits `A1 -> ... -> An -> B` into (`[A1..An]`, `B`).
    pub fn uncurry(&self) -> (Vec<&Type>, &Type) {
        let mut args = Vec::new();
        let mut t = self;
        while let Type::Arrow(a, b) = t {
            args.push(a.as_ref());
            t = b;
        }
        (args, t)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // prec 0: arrow (right-assoc), 1: product (right-assoc), 2: atom
        fn go(t: &Type, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Type::Unit => write!(f, "1"),
                Type::Base(s) => write!(f, "{s}"),
                Type::Prod(a, b) => {
                    if prec > 1 {
                        write!(f, "(")?;
                    }
                    go(a, 2, f)?;
                    write!(f, " * ")?;
                    go(b, 1, f)?;
                    if prec > 1 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                Type::Arrow(a, b) => {
                    if prec > 0 {
                        write!(f, "(")?;
                    }
                    go(a, 1, f)?;
                    write!(f, " -> ")?;
                    go(b, 0, f)?;
                    if prec > 0 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, 0, f)
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("sort `{0}` declared twice")]
    DuplicateSort(String),
    #[error("unknown sort `{0}` in type of `{1}`")]
    UnknownSort(String, String),
}

/// A sorted signature: declared base sorts plus typed function symbols,
/// kept in declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    sorts: Vec<String>,
    symbols: Vec<(String, Type)>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn add_sort(&mut self, name: impl Into<String>) -> Result<(), SignatureError> {
        let name = name.into();
        if self.sorts.iter().any(|s| *s == name) {
            return Err(SignatureError::DuplicateSort(name));
        }
        self.sorts.push(name);
        Ok(())
    }

    pub fn add_symbol(&mut self, name: impl Into<String>, ty: Type) -> Result<(), SignatureError> {
        let name = name.into();
        if self.symbols.iter().any(|(s, _)| *s == name) {
            return Err(SignatureError::DuplicateSymbol(name));
        }
        for sort in ty.sorts() {
            if !self.has_sort(sort) {
                return Err(SignatureError::UnknownSort(sort.to_string(), name));
            }
        }
        self.symbols.push((name, ty));
        Ok(())
    }

    pub fn has_sort(&self, name: &str) -> bool {
        self.sorts.iter().any(|s| s == name)
    }

    pub fn sorts(&self) -> &[String] {
        &self.sorts
    }

    pub fn symbols(&self) -> &[(String, Type)] {
        &self.symbols
    }

    pub fn type_of(&self, symbol: &str) -> Option<&Type> {
        self.symbols
            .iter()
            .find(|(s, _)| s == symbol)
            .map(|(_, t)| t)
    }
}

/// An ordered typing context. Order is declaration order; no variable may
/// occur twice.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<(String, Type)>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("duplicate context variable `{0}`")]
pub struct DuplicateVariable(pub String);

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn from_entries(
        entries: impl IntoIterator<Item = (String, Type)>,
    ) -> Result<Context, DuplicateVariable> {
        let mut ctx = Context::new();
        for (name, ty) in entries {
            ctx.push(name, ty)?;
        }
        Ok(ctx)
    }

    pub fn push(&mut self, name: impl Into<String>, ty: Type) -> Result<(), DuplicateVariable> {
        let name = name.into();
        if self.contains(&name) {
            return Err(DuplicateVariable(name));
        }
        self.entries.push((name, ty));
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.iter().any(|(n, _)| n == name)
    }

    pub fn type_of(&self, name: &str) -> Option<&Type> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn entries(&self) -> &[(String, Type)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Restricts the context to the given variables, keeping order.
    pub fn restrict(&self, keep: &BTreeSet<&str>) -> Context {
        Context {
            entries: self
                .entries
                .iter()
                .filter(|(n, _)| keep.contains(n.as_str()))
                .cloned()
                .collect(),
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (n, t)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}:{t}")?;
        }
        write!(f, ")")
    }
}

/// Projection selector for pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Proj {
    Fst,
    Snd,
}

impl Proj {
    pub fn index(self) -> usize {
        match self {
            Proj::Fst => 1,
            Proj::Snd => 2,
        }
    }
}

impl fmt::Display for Proj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pr{}", self.index())
    }
}

/// A term in locally nameless form. `Var` is a free (context) variable,
/// `Bound(i)` the de Bruijn index of an enclosing `Abs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Bound(usize),
    Const(String),
    Unit,
    Abs(Type, Box<Term>),
    App(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Proj(Proj, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn cst(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn abs(ty: Type, body: Term) -> Term {
        Term::Abs(ty, Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// Left-nested application of a head to a list of arguments.
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn proj(p: Proj, t: Term) -> Term {
        Term::Proj(p, Box::new(t))
    }

    /// Decomposes a left-nested application into head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(a.as_ref());
            t = f;
        }
        args.reverse();
        (t, args)
    }

    /// Free (named) variables of the term.
    pub fn free_vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.walk(&mut |t| {
            if let Term::Var(x) = t {
                out.insert(x.as_str());
            }
        });
        out
    }

    /// Occurrence counts of free variables.
    pub fn free_var_counts(&self) -> BTreeMap<&str, usize> {
        let mut out = BTreeMap::new();
        self.walk(&mut |t| {
            if let Term::Var(x) = t {
                *out.entry(x.as_str()).or_insert(0) += 1;
            }
        });
        out
    }

    fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        match self {
            Term::Abs(_, b) => b.walk(f),
            Term::App(a, b) | Term::Pair(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Term::Proj(_, a) => a.walk(f),
            _ => {}
        }
    }

    /// True if the term has a de Bruijn index escaping `depth` binders,
    /// i.e. it is not closed at that binder depth.
    pub fn has_loose(&self, depth: usize) -> bool {
        match self {
            Term::Bound(i) => *i >= depth,
            Term::Abs(_, b) => b.has_loose(depth + 1),
            Term::App(a, b) | Term::Pair(a, b) => a.has_loose(depth) || b.has_loose(depth),
            Term::Proj(_, a) => a.has_loose(depth),
            _ => false,
        }
    }

    /// Largest loose level: max over loose indices of `i - depth`, if any.
    pub fn max_loose_level(&self) -> Option<usize> {
        fn go(t: &Term, depth: usize, best: &mut Option<usize>) {
            match t {
                Term::Bound(i) if *i >= depth => {
                    let lvl = *i - depth;
                    *best = Some(best.map_or(lvl, |b: usize| b.max(lvl)));
                }
                Term::Abs(_, b) => go(b, depth + 1, best),
                Term::App(a, b) | Term::Pair(a, b) => {
                    go(a, depth, best);
                    go(b, depth, best);
                }
                Term::Proj(_, a) => go(a, depth, best),
                _ => {}
            }
        }
        let mut best = None;
        go(self, 0, &mut best);
        best
    }

    /// Shifts loose indices at or above `cutoff` up by `by`.
    pub fn shift(&self, by: usize, cutoff: usize) -> Term {
        if by == 0 {
            return self.clone();
        }
        match self {
            Term::Bound(i) if *i >= cutoff => Term::Bound(i + by),
            Term::Abs(ty, b) => Term::abs(ty.clone(), b.shift(by, cutoff + 1)),
            Term::App(a, b) => Term::app(a.shift(by, cutoff), b.shift(by, cutoff)),
            Term::Pair(a, b) => Term::pair(a.shift(by, cutoff), b.shift(by, cutoff)),
            Term::Proj(p, a) => Term::proj(*p, a.shift(by, cutoff)),
            _ => self.clone(),
        }
    }

    /// Shifts loose indices at or above `cutoff` down by `by`. The caller
    /// must guarantee no index in `[cutoff, cutoff+by)` occurs.
    pub fn unshift(&self, by: usize, cutoff: usize) -> Term {
        if by == 0 {
            return self.clone();
        }
        match self {
            Term::Bound(i) if *i >= cutoff => {
                debug_assert!(*i >= cutoff + by, "unshift would capture");
                Term::Bound(i - by)
            }
            Term::Abs(ty, b) => Term::abs(ty.clone(), b.unshift(by, cutoff + 1)),
            Term::App(a, b) => Term::app(a.unshift(by, cutoff), b.unshift(by, cutoff)),
            Term::Pair(a, b) => Term::pair(a.unshift(by, cutoff), b.unshift(by, cutoff)),
            Term::Proj(p, a) => Term::proj(*p, a.unshift(by, cutoff)),
            _ => self.clone(),
        }
    }

    /// Instantiates the body of an abstraction with `arg`: index 0 at the
    /// outermost level becomes `arg`, deeper loose indices shift down.
    pub fn open(&self, arg: &Term) -> Term {
        fn go(t: &Term, depth: usize, arg: &Term) -> Term {
            match t {
                Term::Bound(i) => {
                    if *i == depth {
                        arg.shift(depth, 0)
                    } else if *i > depth {
                        Term::Bound(i - 1)
                    } else {
                        t.clone()
                    }
                }
                Term::Abs(ty, b) => Term::abs(ty.clone(), go(b, depth + 1, arg)),
                Term::App(a, b) => Term::app(go(a, depth, arg), go(b, depth, arg)),
                Term::Pair(a, b) => Term::pair(go(a, depth, arg), go(b, depth, arg)),
                Term::Proj(p, a) => Term::proj(*p, go(a, depth, arg)),
                _ => t.clone(),
            }
        }
        go(self, 0, arg)
    }

    /// Replaces a single free variable by a term. The replacement's loose
    /// indices are interpreted relative to the root of `self` and are
    /// shifted as they move under binders.
    pub fn subst_var(&self, x: &str, v: &Term) -> Term {
        fn go(t: &Term, depth: usize, x: &str, v: &Term) -> Term {
            match t {
                Term::Var(y) if y == x => v.shift(depth, 0),
                Term::Abs(ty, b) => Term::abs(ty.clone(), go(b, depth + 1, x, v)),
                Term::App(a, b) => Term::app(go(a, depth, x, v), go(b, depth, x, v)),
                Term::Pair(a, b) => Term::pair(go(a, depth, x, v), go(b, depth, x, v)),
                Term::Proj(p, a) => Term::proj(*p, go(a, depth, x, v)),
                _ => t.clone(),
            }
        }
        go(self, 0, x, v)
    }

    /// Renames free variables according to the map.
    pub fn rename_free(&self, map: &BTreeMap<String, String>) -> Term {
        match self {
            Term::Var(x) => match map.get(x) {
                Some(y) => Term::Var(y.clone()),
                None => self.clone(),
            },
            Term::Abs(ty, b) => Term::abs(ty.clone(), b.rename_free(map)),
            Term::App(a, b) => Term::app(a.rename_free(map), b.rename_free(map)),
            Term::Pair(a, b) => Term::pair(a.rename_free(map), b.rename_free(map)),
            Term::Proj(p, a) => Term::proj(*p, a.rename_free(map)),
            _ => self.clone(),
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }
}

/// A position: the path of child indices from the root (empty = root).
/// Children are numbered as in the binary term grammar: applications and
/// pairs have children 1 and 2, abstractions and projections child 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Position {
        let mut v = self.0.clone();
        v.push(i);
        Position(v)
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// Positions are disjoint when neither is a prefix of the other.
    pub fn disjoint_with(&self, other: &Position) -> bool {
        !self.is_prefix_of(other) && !other.is_prefix_of(self)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "]")
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("malformed position `{0}`")]
pub struct PositionParseError(pub String);

impl FromStr for Position {
    type Err = PositionParseError;

    fn from_str(s: &str) -> Result<Position, PositionParseError> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| PositionParseError(s.to_string()))?;
        let inner = inner.trim();
        if inner.is_empty() {
            return Ok(Position::root());
        }
        let mut steps = Vec::new();
        for part in inner.split(',') {
            let n: usize = part
                .trim()
                .parse()
                .map_err(|_| PositionParseError(s.to_string()))?;
            if n == 0 {
                return Err(PositionParseError(s.to_string()));
            }
            steps.push(n);
        }
        Ok(Position(steps))
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("invalid position {0}")]
pub struct InvalidPosition(pub Position);

/// The subterm at a position, per the defining clauses of the binary
/// grammar: `(t1 t2)|i.p = ti|p`, `(\x:T. t)|1.p = t|p`,
/// `<t1,t2>|i.p = ti|p`, `(pri t)|1.p = t|p`.
pub fn subterm_at<'a>(term: &'a Term, pos: &Position) -> Result<&'a Term, InvalidPosition> {
    let mut t = term;
    for (k, &step) in pos.0.iter().enumerate() {
        t = match (t, step) {
            (Term::App(f, _), 1) => f,
            (Term::App(_, a), 2) => a,
            (Term::Abs(_, b), 1) => b,
            (Term::Pair(a, _), 1) => a,
            (Term::Pair(_, b), 2) => b,
            (Term::Proj(_, a), 1) => a,
            _ => return Err(InvalidPosition(Position(pos.0[..=k].to_vec()))),
        };
    }
    Ok(t)
}

/// Replaces the subterm at a position, without any scope or type checks.
/// Loose indices in `replacement` are taken relative to the position.
pub fn splice_at(term: &Term, pos: &Position, replacement: Term) -> Result<Term, InvalidPosition> {
    fn go(
        t: &Term,
        rest: &[usize],
        full: &Position,
        depth: usize,
        replacement: Term,
    ) -> Result<Term, InvalidPosition> {
        let Some((&step, rest2)) = rest.split_first() else {
            return Ok(replacement);
        };
        let bad = || {
            let used = full.0.len() - rest.len() + 1;
            InvalidPosition(Position(full.0[..used].to_vec()))
        };
        Ok(match (t, step) {
            (Term::App(f, a), 1) => {
                Term::app(go(f, rest2, full, depth, replacement)?, a.as_ref().clone())
            }
            (Term::App(f, a), 2) => {
                Term::app(f.as_ref().clone(), go(a, rest2, full, depth, replacement)?)
            }
            (Term::Abs(ty, b), 1) => {
                Term::abs(ty.clone(), go(b, rest2, full, depth + 1, replacement)?)
            }
            (Term::Pair(a, b), 1) => {
                Term::pair(go(a, rest2, full, depth, replacement)?, b.as_ref().clone())
            }
            (Term::Pair(a, b), 2) => {
                Term::pair(a.as_ref().clone(), go(b, rest2, full, depth, replacement)?)
            }
            (Term::Proj(p, a), 1) => Term::proj(*p, go(a, rest2, full, depth, replacement)?),
            _ => return Err(bad()),
        })
    }
    go(term, &pos.0, pos, 0, replacement)
}

/// All positions of a term in preorder (root first, children 1 before 2).
pub fn positions(term: &Term) -> Vec<Position> {
    fn go(t: &Term, here: Position, out: &mut Vec<Position>) {
        out.push(here.clone());
        match t {
            Term::App(a, b) | Term::Pair(a, b) => {
                go(a, here.child(1), out);
                go(b, here.child(2), out);
            }
            Term::Abs(_, b) => go(b, here.child(1), out),
            Term::Proj(_, a) => go(a, here.child(1), out),
            _ => {}
        }
    }
    let mut out = Vec::new();
    go(term, Position::root(), &mut out);
    out
}

/// Alpha equivalence of two terms in the same context. Bound variables
/// are nameless indices, so this is structural equality.
pub fn alpha_equal(t1: &Term, t2: &Term) -> bool {
    t1 == t2
}

/// Canonically renames the free variables of a sequence of terms to
/// `v0, v1, ...` in order of first occurrence across the sequence.
/// Used to compare rule pairs and peaks up to renaming.
pub fn canonical_rename(terms: &[&Term]) -> Vec<Term> {
    let mut map: BTreeMap<String, String> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    for t in terms {
        t.walk(&mut |s| {
            if let Term::Var(x) = s {
                if !map.contains_key(x) {
                    map.insert(x.clone(), format!("v{}", order.len()));
                    order.push(x.clone());
                }
            }
        });
    }
    terms.iter().map(|t| t.rename_free(&map)).collect()
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_term(self))
    }
}

/// Renders a term in the surface syntax, generating fresh display names
/// for binders (`z`, `z1`, `z2`, ...) that avoid the term's free names.
pub fn print_term(term: &Term) -> String {
    print_term_avoiding(term, &BTreeSet::new())
}

/// As [`print_term`], with extra names the binders must avoid (e.g.
/// signature symbols, so the output resolves identically when reparsed).
pub fn print_term_avoiding(term: &Term, avoid: &BTreeSet<String>) -> String {
    let mut used: BTreeSet<String> = term.free_vars().iter().map(|s| s.to_string()).collect();
    used.extend(avoid.iter().cloned());
    let mut names: Vec<String> = Vec::new(); // binder display names, innermost last
    let mut counter = 0usize;
    let mut out = String::new();
    print_rec(term, 0, &used, &mut names, &mut counter, &mut out);
    out
}

fn fresh_binder_name(used: &BTreeSet<String>, taken: &[String], counter: &mut usize) -> String {
    loop {
        let cand = if *counter == 0 {
            "z".to_string()
        } else {
            format!("z{}", *counter)
        };
        *counter += 1;
        if !used.contains(&cand) && !taken.contains(&cand) {
            return cand;
        }
    }
}

// prec 0: lambda, 1: application, 2: atom
fn print_rec(
    t: &Term,
    prec: u8,
    used: &BTreeSet<String>,
    names: &mut Vec<String>,
    counter: &mut usize,
    out: &mut String,
) {
    match t {
        Term::Var(x) => out.push_str(x),
        Term::Const(c) => out.push_str(c),
        Term::Bound(i) => {
            if *i < names.len() {
                out.push_str(&names[names.len() - 1 - i]);
            } else {
                // loose index: render by its level above the root
                out.push_str(&format!("^{}", i - names.len()));
            }
        }
        Term::Unit => out.push_str("()"),
        Term::Abs(ty, b) => {
            if prec > 0 {
                out.push('(');
            }
            let name = fresh_binder_name(used, names, counter);
            out.push('\\');
            out.push_str(&name);
            out.push_str(&format!(":{ty}. "));
            names.push(name);
            print_rec(b, 0, used, names, counter, out);
            names.pop();
            if prec > 0 {
                out.push(')');
            }
        }
        Term::App(a, b) => {
            if prec > 1 {
                out.push('(');
            }
            print_rec(a, 1, used, names, counter, out);
            out.push(' ');
            print_rec(b, 2, used, names, counter, out);
            if prec > 1 {
                out.push(')');
            }
        }
        Term::Pair(a, b) => {
            out.push('<');
            print_rec(a, 0, used, names, counter, out);
            out.push_str(", ");
            print_rec(b, 0, used, names, counter, out);
            out.push('>');
        }
        Term::Proj(p, a) => {
            if prec > 1 {
                out.push('(');
            }
            out.push_str(&format!("pr{} ", p.index()));
            print_rec(a, 2, used, names, counter, out);
            if prec > 1 {
                out.push(')');
            }
        }
    }
}
