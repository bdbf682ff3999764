//! Shared fixtures and generators for the integration suites: the
//! negation-normal-form system plus random well-typed terms, positions,
//! and pattern problems over it.

#![allow(dead_code)]

use hho_core::normalize::beta_delta_normalize;
use hho_core::parse::parse_file;
use hho_core::rewrite::Prs;
use hho_core::term::{positions, Context, Position, Proj, Signature, Term, Type};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const NNF: &str = r#"
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

pub fn nnf() -> Prs {
    parse_file(NNF).expect("fixture parses").1
}

/// The same signature extended with ground constants, so every type the
/// generator builds is inhabited.
pub fn nnf_with_atoms() -> Prs {
    let text = format!("{NNF}\nsig atomA : U\nsig atomB : U\nsig atomC : V\n");
    parse_file(&text).expect("fixture parses").1
}

pub fn u() -> Type {
    Type::base("U")
}

pub fn v() -> Type {
    Type::base("V")
}

/// A context rich enough to inhabit all generated types.
pub fn gen_ctx() -> Context {
    Context::from_entries([
        ("x".to_string(), u()),
        ("y".to_string(), u()),
        ("i".to_string(), v()),
        ("p".to_string(), Type::arrow(v(), u())),
        ("q".to_string(), Type::arrow(u(), u())),
    ])
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random simple type of bounded depth.
pub fn gen_type(rng: &mut ChaCha8Rng, depth: usize) -> Type {
    if depth == 0 {
        return if rng.gen_bool(0.5) { u() } else { v() };
    }
    match rng.gen_range(0..6) {
        0 => u(),
        1 => v(),
        2 => Type::Unit,
        3 => Type::prod(gen_type(rng, depth - 1), gen_type(rng, depth - 1)),
        _ => Type::arrow(gen_type(rng, depth - 1), gen_type(rng, depth - 1)),
    }
}

/// Random well-typed term of the given type over the signature of
/// [`nnf_with_atoms`], the context, and the current binder stack. Injects
/// beta and delta redexes so normalization has work to do.
pub fn gen_term(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    ctx: &Context,
    binders: &mut Vec<Type>,
    ty: &Type,
    fuel: usize,
) -> Term {
    // occasionally wrap in a redex of the same type
    if fuel > 0 && rng.gen_bool(0.15) {
        match rng.gen_range(0..2) {
            0 => {
                let arg_ty = gen_type(rng, 1);
                binders.push(arg_ty.clone());
                let body = gen_term(rng, sig, ctx, binders, ty, fuel - 1);
                binders.pop();
                let arg = gen_term(rng, sig, ctx, binders, &arg_ty, fuel / 2);
                return Term::app(Term::abs(arg_ty, body), arg);
            }
            _ => {
                let other = gen_type(rng, 1);
                let keep = gen_term(rng, sig, ctx, binders, ty, fuel - 1);
                let drop = gen_term(rng, sig, ctx, binders, &other, fuel / 2);
                let (pair, side) = if rng.gen_bool(0.5) {
                    (Term::pair(keep, drop), Proj::Fst)
                } else {
                    (Term::pair(drop, keep), Proj::Snd)
                };
                return Term::proj(side, pair);
            }
        }
    }
    let mut atoms: Vec<Term> = Vec::new();
    for (i, bty) in binders.iter().rev().enumerate() {
        if bty == ty {
            atoms.push(Term::Bound(i));
        }
    }
    for (name, vty) in ctx.entries() {
        if vty == ty {
            atoms.push(Term::var(name.clone()));
        }
    }
    for (name, sty) in sig.symbols() {
        if sty == ty {
            atoms.push(Term::cst(name.clone()));
        }
    }
    match ty {
        Type::Unit => Term::Unit,
        Type::Arrow(dom, cod) => {
            if !atoms.is_empty() && (fuel == 0 || rng.gen_bool(0.3)) {
                atoms[rng.gen_range(0..atoms.len())].clone()
            } else {
                binders.push(dom.as_ref().clone());
                let body = gen_term(rng, sig, ctx, binders, cod, fuel.saturating_sub(1));
                binders.pop();
                Term::abs(dom.as_ref().clone(), body)
            }
        }
        Type::Prod(a, b) => {
            if !atoms.is_empty() && (fuel == 0 || rng.gen_bool(0.3)) {
                atoms[rng.gen_range(0..atoms.len())].clone()
            } else {
                Term::pair(
                    gen_term(rng, sig, ctx, binders, a, fuel.saturating_sub(1)),
                    gen_term(rng, sig, ctx, binders, b, fuel.saturating_sub(1)),
                )
            }
        }
        Type::Base(name) => {
            if fuel == 0 || (!atoms.is_empty() && rng.gen_bool(0.35)) {
                if let Some(a) = pick(rng, &atoms) {
                    return a;
                }
            }
            if name == "U" {
                match rng.gen_range(0..8) {
                    0 | 1 | 2 => Term::app(
                        Term::cst("not"),
                        gen_term(rng, sig, ctx, binders, ty, fuel.saturating_sub(1)),
                    ),
                    3 => Term::apps(
                        Term::cst("and"),
                        [
                            gen_term(rng, sig, ctx, binders, ty, fuel.saturating_sub(1)),
                            gen_term(rng, sig, ctx, binders, ty, fuel.saturating_sub(1)),
                        ],
                    ),
                    4 => Term::apps(
                        Term::cst("or"),
                        [
                            gen_term(rng, sig, ctx, binders, ty, fuel.saturating_sub(1)),
                            gen_term(rng, sig, ctx, binders, ty, fuel.saturating_sub(1)),
                        ],
                    ),
                    5 | 6 => {
                        let q = if rng.gen_bool(0.5) { "all" } else { "ex" };
                        binders.push(v());
                        let body = gen_term(rng, sig, ctx, binders, ty, fuel.saturating_sub(1));
                        binders.pop();
                        Term::app(Term::cst(q), Term::abs(v(), body))
                    }
                    _ => pick(rng, &atoms).unwrap_or_else(|| Term::cst("atomA")),
                }
            } else {
                pick(rng, &atoms).unwrap_or_else(|| Term::cst("atomC"))
            }
        }
    }
}

fn pick(rng: &mut ChaCha8Rng, atoms: &[Term]) -> Option<Term> {
    if atoms.is_empty() {
        None
    } else {
        Some(atoms[rng.gen_range(0..atoms.len())].clone())
    }
}

/// A random valid position of the term.
pub fn gen_position(rng: &mut ChaCha8Rng, t: &Term) -> Position {
    let all = positions(t);
    all[rng.gen_range(0..all.len())].clone()
}

/// Random first-order pattern of type U over flex variables and the two
/// ground atoms; used for the brute-force unifier enumeration.
pub fn gen_fo_pattern(rng: &mut ChaCha8Rng, vars: &[&str], depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.35) {
        return match rng.gen_range(0..vars.len() + 2) {
            0 => Term::cst("atomA"),
            1 => Term::cst("atomB"),
            k => Term::var(vars[k - 2]),
        };
    }
    match rng.gen_range(0..3) {
        0 => Term::app(Term::cst("not"), gen_fo_pattern(rng, vars, depth - 1)),
        1 => Term::apps(
            Term::cst("and"),
            [
                gen_fo_pattern(rng, vars, depth - 1),
                gen_fo_pattern(rng, vars, depth - 1),
            ],
        ),
        _ => Term::apps(
            Term::cst("or"),
            [
                gen_fo_pattern(rng, vars, depth - 1),
                gen_fo_pattern(rng, vars, depth - 1),
            ],
        ),
    }
}

/// Random higher-order pattern of type U: rigid structure over the
/// signature with flex variables applied to the bound variables in scope.
pub fn gen_ho_pattern(
    rng: &mut ChaCha8Rng,
    vars: &[(String, Type)],
    binders: usize,
    depth: usize,
) -> Term {
    if depth == 0 || rng.gen_bool(0.3) {
        // a flex spine applied to some prefix of the bound variables, or
        // an atom
        let candidates: Vec<&(String, Type)> = vars
            .iter()
            .filter(|(_, ty)| ty.uncurry().0.len() <= binders)
            .collect();
        if !candidates.is_empty() && rng.gen_bool(0.7) {
            let (name, ty) = candidates[rng.gen_range(0..candidates.len())];
            let arity = ty.uncurry().0.len();
            // distinct bound variables, innermost-first
            let mut idxs: Vec<usize> = (0..binders).collect();
            for i in (1..idxs.len()).rev() {
                let j = rng.gen_range(0..=i);
                idxs.swap(i, j);
            }
            idxs.truncate(arity);
            return Term::apps(Term::var(name.clone()), idxs.into_iter().map(Term::Bound));
        }
        return if rng.gen_bool(0.5) {
            Term::cst("atomA")
        } else {
            Term::cst("atomB")
        };
    }
    match rng.gen_range(0..4) {
        0 => Term::app(
            Term::cst("not"),
            gen_ho_pattern(rng, vars, binders, depth - 1),
        ),
        1 => Term::apps(
            Term::cst("and"),
            [
                gen_ho_pattern(rng, vars, binders, depth - 1),
                gen_ho_pattern(rng, vars, binders, depth - 1),
            ],
        ),
        _ => {
            let q = if rng.gen_bool(0.5) { "all" } else { "ex" };
            Term::app(
                Term::cst(q),
                Term::abs(v(), gen_ho_pattern(rng, vars, binders + 1, depth - 1)),
            )
        }
    }
}

/// All assignments of the two ground atoms to the given variables.
pub fn ground_assignments(vars: &[&str]) -> Vec<hho_core::Subst> {
    let atoms = [Term::cst("atomA"), Term::cst("atomB")];
    let mut out = vec![hho_core::Subst::new()];
    for &v in vars {
        let mut next = Vec::new();
        for s in &out {
            for a in &atoms {
                let mut s2 = s.clone();
                s2.bind(v.to_string(), a.clone());
                next.push(s2);
            }
        }
        out = next;
    }
    out
}

/// Whether two first-order terms are equal after beta-delta normalization.
pub fn bd_equal(a: &Term, b: &Term) -> bool {
    beta_delta_normalize(a) == beta_delta_normalize(b)
}
