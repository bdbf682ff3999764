//! Shared fixtures for unit tests.

use crate::rewrite::{Prs, Rule};
use crate::term::{Context, Signature, Term, Type};

fn u() -> Type {
    Type::base("U")
}

fn v() -> Type {
    Type::base("V")
}

/// The negation-normal-form system over `not`, `and`, `or`, `all`, `ex`.
pub(crate) fn nnf() -> Prs {
    let mut sig = Signature::new();
    sig.add_sort("U").unwrap();
    sig.add_sort("V").unwrap();
    sig.add_symbol("not", Type::arrow(u(), u())).unwrap();
    sig.add_symbol("and", Type::arrow(u(), Type::arrow(u(), u())))
        .unwrap();
    sig.add_symbol("or", Type::arrow(u(), Type::arrow(u(), u())))
        .unwrap();
    sig.add_symbol("all", Type::arrow(Type::arrow(v(), u()), u()))
        .unwrap();
    sig.add_symbol("ex", Type::arrow(Type::arrow(v(), u()), u()))
        .unwrap();

    let not = |t| Term::app(Term::cst("not"), t);
    let and = |a, b| Term::apps(Term::cst("and"), [a, b]);
    let or = |a, b| Term::apps(Term::cst("or"), [a, b]);
    let quant = |q: &str, body: Term| Term::app(Term::cst(q), Term::abs(v(), body));
    let pz = || Term::app(Term::var("p"), Term::Bound(0));

    let cx = Context::from_entries([("x".to_string(), u())]).unwrap();
    let cxy = Context::from_entries([("x".to_string(), u()), ("y".to_string(), u())]).unwrap();
    let cp = Context::from_entries([("p".to_string(), Type::arrow(v(), u()))]).unwrap();

    let rules = vec![
        Rule::new(&sig, "NotNot", cx, not(not(Term::var("x"))), Term::var("x")).unwrap(),
        Rule::new(
            &sig,
            "NotAnd",
            cxy.clone(),
            not(and(Term::var("x"), Term::var("y"))),
            or(not(Term::var("x")), not(Term::var("y"))),
        )
        .unwrap(),
        Rule::new(
            &sig,
            "NotOr",
            cxy,
            not(or(Term::var("x"), Term::var("y"))),
            and(not(Term::var("x")), not(Term::var("y"))),
        )
        .unwrap(),
        Rule::new(
            &sig,
            "NotAll",
            cp.clone(),
            not(quant("all", pz())),
            quant("ex", not(pz())),
        )
        .unwrap(),
        Rule::new(
            &sig,
            "NotEx",
            cp,
            not(quant("ex", pz())),
            quant("all", not(pz())),
        )
        .unwrap(),
    ];
    Prs::new(sig, rules).unwrap()
}
