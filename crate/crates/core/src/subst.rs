//! Substitutions: finite maps from free variables to terms, applied
//! capture-free. Values may mention de Bruijn levels of binders enclosing
//! the site the substitution is applied at; indices are shifted as values
//! move under binders, so capture cannot occur.

use crate::term::Term;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst {
    map: BTreeMap<String, Term>,
}

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn singleton(x: impl Into<String>, t: Term) -> Subst {
        let mut s = Subst::new();
        s.bind(x, t);
        s
    }

    pub fn bind(&mut self, x: impl Into<String>, t: Term) {
        self.map.insert(x.into(), t);
    }

    pub fn get(&self, x: &str) -> Option<&Term> {
        self.map.get(x)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn domain(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(|s| s.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Applies the substitution to a term. Unmapped variables stay.
    pub fn apply(&self, term: &Term) -> Term {
        if self.map.is_empty() {
            return term.clone();
        }
        self.apply_at(term, 0)
    }

    fn apply_at(&self, term: &Term, depth: usize) -> Term {
        match term {
            Term::Var(x) => match self.map.get(x) {
                Some(v) => v.shift(depth, 0),
                None => term.clone(),
            },
            Term::Abs(ty, b) => Term::abs(ty.clone(), self.apply_at(b, depth + 1)),
            Term::App(a, b) => Term::app(self.apply_at(a, depth), self.apply_at(b, depth)),
            Term::Pair(a, b) => Term::pair(self.apply_at(a, depth), self.apply_at(b, depth)),
            Term::Proj(p, a) => Term::proj(*p, self.apply_at(a, depth)),
            _ => term.clone(),
        }
    }

    /// Pointwise composition: `t.compose(s1, s2)` behaves like applying
    /// `s1` then `s2`.
    pub fn compose(first: &Subst, second: &Subst) -> Subst {
        let mut map: BTreeMap<String, Term> = BTreeMap::new();
        for (x, t) in &first.map {
            map.insert(x.clone(), second.apply(t));
        }
        for (x, t) in &second.map {
            map.entry(x.clone()).or_insert_with(|| t.clone());
        }
        Subst { map }
    }

    /// Keeps only bindings for the given variables.
    pub fn restrict(&self, keep: &BTreeSet<&str>) -> Subst {
        Subst {
            map: self
                .map
                .iter()
                .filter(|(k, _)| keep.contains(k.as_str()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Free variables occurring in the values of the substitution.
    pub fn range_vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        for v in self.map.values() {
            out.extend(v.free_vars());
        }
        out
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, t)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x} -> {t}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<(String, Term)> for Subst {
    fn from_iter<I: IntoIterator<Item = (String, Term)>>(iter: I) -> Subst {
        Subst {
            map: iter.into_iter().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Type;

    #[test]
    fn direct_replacement() {
        // not x {x -> and y z}  =  not (and y z)
        let s = Subst::singleton(
            "x",
            Term::apps(Term::cst("and"), [Term::var("y"), Term::var("z")]),
        );
        let t = Term::app(Term::cst("not"), Term::var("x"));
        assert_eq!(
            s.apply(&t),
            Term::app(
                Term::cst("not"),
                Term::apps(Term::cst("and"), [Term::var("y"), Term::var("z")])
            )
        );
    }

    #[test]
    fn identity_substitution() {
        let s = Subst::singleton("x", Term::var("x"));
        let t = Term::app(
            Term::cst("not"),
            Term::app(Term::cst("not"), Term::var("x")),
        );
        assert_eq!(s.apply(&t), t);
    }

    #[test]
    fn capture_is_impossible() {
        // (\y:U. x) {x -> y}: the binder cannot capture the free y, since
        // the bound occurrence is an index and the value a name.
        let t = Term::abs(Type::base("U"), Term::var("x"));
        let s = Subst::singleton("x", Term::var("y"));
        let r = s.apply(&t);
        assert_eq!(r, Term::abs(Type::base("U"), Term::var("y")));
        // the result's y is free, not the binder
        assert!(r.free_vars().contains("y"));
    }

    #[test]
    fn loose_values_shift_under_binders() {
        // value mentions the binder enclosing the application site
        let s = Subst::singleton("x", Term::Bound(0));
        // \w:U. (f x): at depth 1 the value must become Bound(1)... but the
        // binder is the term's own; Bound(0) at the root refers to the first
        // binder *outside* the term.
        let t = Term::abs(Type::base("U"), Term::app(Term::var("f"), Term::var("x")));
        let r = s.apply(&t);
        assert_eq!(
            r,
            Term::abs(Type::base("U"), Term::app(Term::var("f"), Term::Bound(1)))
        );
    }

    #[test]
    fn composition_pointwise() {
        let s1 = Subst::singleton("x", Term::app(Term::cst("not"), Term::var("y")));
        let s2 = Subst::singleton("y", Term::var("z"));
        let t = Term::app(Term::var("x"), Term::var("y"));
        let both = Subst::compose(&s1, &s2);
        assert_eq!(s2.apply(&s1.apply(&t)), both.apply(&t));
    }
}
