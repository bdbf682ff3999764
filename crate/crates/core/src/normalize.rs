//! Reduction and canonical forms: beta/delta normalization, eta-long
//! expansion, eta collapse, and depairing of product-typed context
//! variables.
//!
//! The canonical representative used throughout the rewrite engine is the
//! eta-long beta-delta-normal form: no beta or projection redex remains,
//! and every subterm of arrow type is an abstraction, every subterm of
//! product type a pair, except where expansion would break normality.

use crate::term::{Context, Proj, Signature, Term, Type};
use crate::typing::{typecheck, typecheck_open, TypeError};

/// Weak head normal form under beta and delta.
fn whnf(t: &Term) -> Term {
    match t {
        Term::App(f, a) => {
            let f = whnf(f);
            if let Term::Abs(_, body) = f {
                whnf(&body.open(a))
            } else {
                Term::app(f, a.as_ref().clone())
            }
        }
        Term::Proj(p, u) => {
            let u = whnf(u);
            if let Term::Pair(x, y) = u {
                let picked = match p {
                    Proj::Fst => *x,
                    Proj::Snd => *y,
                };
                whnf(&picked)
            } else {
                Term::proj(*p, u)
            }
        }
        _ => t.clone(),
    }
}

/// The beta-delta normal form, contracting the leftmost outermost redex
/// first. Terminates on well-typed terms.
pub fn beta_delta_normalize(t: &Term) -> Term {
    let h = whnf(t);
    match h {
        Term::Abs(ty, b) => Term::abs(ty, beta_delta_normalize(&b)),
        Term::Pair(a, b) => Term::pair(beta_delta_normalize(&a), beta_delta_normalize(&b)),
        Term::App(f, a) => {
            // the head is neutral after whnf, so normalizing inside cannot
            // create a new head redex
            Term::app(beta_delta_normalize(&f), beta_delta_normalize(&a))
        }
        Term::Proj(p, u) => Term::proj(p, beta_delta_normalize(&u)),
        atom => atom,
    }
}

/// The beta-delta normal form computed innermost-first (arguments before
/// contraction). Same result as [`beta_delta_normalize`] on well-typed
/// terms; kept as an independent route for confluence checks.
pub fn beta_delta_normalize_innermost(t: &Term) -> Term {
    match t {
        Term::App(f, a) => {
            let a = beta_delta_normalize_innermost(a);
            let f = beta_delta_normalize_innermost(f);
            if let Term::Abs(_, body) = f {
                beta_delta_normalize_innermost(&body.open(&a))
            } else {
                Term::app(f, a)
            }
        }
        Term::Proj(p, u) => {
            let u = beta_delta_normalize_innermost(u);
            if let Term::Pair(x, y) = u {
                match p {
                    Proj::Fst => *x,
                    Proj::Snd => *y,
                }
            } else {
                Term::proj(*p, u)
            }
        }
        Term::Abs(ty, b) => Term::abs(ty.clone(), beta_delta_normalize_innermost(b)),
        Term::Pair(a, b) => Term::pair(
            beta_delta_normalize_innermost(a),
            beta_delta_normalize_innermost(b),
        ),
        _ => t.clone(),
    }
}

/// True if no beta or delta redex occurs.
pub fn is_beta_delta_normal(t: &Term) -> bool {
    match t {
        Term::App(f, a) => {
            !matches!(f.as_ref(), Term::Abs(_, _))
                && is_beta_delta_normal(f)
                && is_beta_delta_normal(a)
        }
        Term::Proj(_, u) => !matches!(u.as_ref(), Term::Pair(_, _)) && is_beta_delta_normal(u),
        Term::Abs(_, b) => is_beta_delta_normal(b),
        Term::Pair(a, b) => is_beta_delta_normal(a) && is_beta_delta_normal(b),
        _ => true,
    }
}

fn uses_bound(t: &Term, k: usize) -> bool {
    match t {
        Term::Bound(i) => *i == k,
        Term::Abs(_, b) => uses_bound(b, k + 1),
        Term::App(a, b) | Term::Pair(a, b) => uses_bound(a, k) || uses_bound(b, k),
        Term::Proj(_, a) => uses_bound(a, k),
        _ => false,
    }
}

/// Fully eta-collapsed form: `\x. t x` with `x` not in `t` becomes `t`,
/// `<pr1 t, pr2 t>` becomes `t`, applied bottom-up to a fixpoint.
pub fn eta_reduce(t: &Term) -> Term {
    match t {
        Term::Abs(ty, b) => {
            let b = eta_reduce(b);
            if let Term::App(f, a) = &b {
                if **a == Term::Bound(0) && !uses_bound(f, 0) {
                    return f.unshift(1, 0);
                }
            }
            Term::abs(ty.clone(), b)
        }
        Term::Pair(a, b) => {
            let a = eta_reduce(a);
            let b = eta_reduce(b);
            if let (Term::Proj(Proj::Fst, u), Term::Proj(Proj::Snd, v)) = (&a, &b) {
                if u == v {
                    return u.as_ref().clone();
                }
            }
            Term::pair(a, b)
        }
        Term::App(a, b) => Term::app(eta_reduce(a), eta_reduce(b)),
        Term::Proj(p, a) => Term::proj(*p, eta_reduce(a)),
        _ => t.clone(),
    }
}

/// The eta-long beta-delta normal form of a well-typed term-in-context.
pub fn eta_long_form(sig: &Signature, ctx: &Context, t: &Term) -> Result<Term, TypeError> {
    let nf = beta_delta_normalize(t);
    let ty = typecheck(sig, ctx, &nf)?;
    let mut binders = Vec::new();
    expand(sig, ctx, &mut binders, &nf, &ty)
}

/// As [`eta_long_form`], for a term with loose indices typed by an
/// explicit binder stack (outermost first).
pub fn eta_long_form_open(
    sig: &Signature,
    ctx: &Context,
    binders: &[Type],
    t: &Term,
) -> Result<Term, TypeError> {
    let nf = beta_delta_normalize(t);
    let ty = typecheck_open(sig, ctx, binders, &nf)?;
    let mut stack = binders.to_vec();
    expand(sig, ctx, &mut stack, &nf, &ty)
}

fn expand(
    sig: &Signature,
    ctx: &Context,
    binders: &mut Vec<Type>,
    t: &Term,
    ty: &Type,
) -> Result<Term, TypeError> {
    match ty {
        Type::Arrow(dom, cod) => {
            if let Term::Abs(bty, body) = t {
                binders.push(bty.clone());
                let body = expand(sig, ctx, binders, body, cod)?;
                binders.pop();
                Ok(Term::abs(bty.clone(), body))
            } else {
                // neutral at arrow type: expand to \x. t x
                let lifted = Term::app(t.shift(1, 0), Term::Bound(0));
                binders.push(dom.as_ref().clone());
                let body = expand(sig, ctx, binders, &lifted, cod)?;
                binders.pop();
                Ok(Term::abs(dom.as_ref().clone(), body))
            }
        }
        Type::Prod(a, b) => {
            if let Term::Pair(x, y) = t {
                Ok(Term::pair(
                    expand(sig, ctx, binders, x, a)?,
                    expand(sig, ctx, binders, y, b)?,
                ))
            } else {
                Ok(Term::pair(
                    expand(sig, ctx, binders, &Term::proj(Proj::Fst, t.clone()), a)?,
                    expand(sig, ctx, binders, &Term::proj(Proj::Snd, t.clone()), b)?,
                ))
            }
        }
        Type::Unit | Type::Base(_) => {
            if matches!(t, Term::Unit) {
                return Ok(Term::Unit);
            }
            Ok(expand_neutral(sig, ctx, binders, t)?.0)
        }
    }
}

fn expand_neutral(
    sig: &Signature,
    ctx: &Context,
    binders: &mut Vec<Type>,
    t: &Term,
) -> Result<(Term, Type), TypeError> {
    match t {
        Term::Var(x) => {
            let ty = ctx
                .type_of(x)
                .cloned()
                .ok_or_else(|| TypeError::UnboundIdentifier(x.clone()))?;
            Ok((t.clone(), ty))
        }
        Term::Const(c) => {
            let ty = sig
                .type_of(c)
                .cloned()
                .ok_or_else(|| TypeError::UnboundIdentifier(c.clone()))?;
            Ok((t.clone(), ty))
        }
        Term::Bound(i) => {
            if *i < binders.len() {
                Ok((t.clone(), binders[binders.len() - 1 - i].clone()))
            } else {
                Err(TypeError::UnboundIndex(*i))
            }
        }
        Term::App(f, a) => {
            let (f, tf) = expand_neutral(sig, ctx, binders, f)?;
            match tf {
                Type::Arrow(dom, cod) => {
                    let a = expand(sig, ctx, binders, a, &dom)?;
                    Ok((Term::app(f, a), *cod))
                }
                other => Err(TypeError::TypeMismatch(format!(
                    "application of non-function of type `{other}`"
                ))),
            }
        }
        Term::Proj(p, u) => {
            let (u, tu) = expand_neutral(sig, ctx, binders, u)?;
            match tu {
                Type::Prod(t1, t2) => {
                    let ty = match p {
                        Proj::Fst => *t1,
                        Proj::Snd => *t2,
                    };
                    Ok((Term::proj(*p, u), ty))
                }
                other => Err(TypeError::TypeMismatch(format!(
                    "projection from non-product of type `{other}`"
                ))),
            }
        }
        Term::Unit => Ok((Term::Unit, Type::Unit)),
        Term::Abs(_, _) | Term::Pair(_, _) => Err(TypeError::TypeMismatch(
            "introduction form in neutral position of a beta-delta normal term".to_string(),
        )),
    }
}

fn flatten_prod(ty: &Type) -> Vec<Type> {
    match ty {
        Type::Prod(a, b) => {
            let mut v = flatten_prod(a);
            v.extend(flatten_prod(b));
            v
        }
        _ => vec![ty.clone()],
    }
}

fn pair_tree(ty: &Type, leaves: &mut impl Iterator<Item = Term>) -> Term {
    match ty {
        Type::Prod(a, b) => {
            let left = pair_tree(a, leaves);
            let right = pair_tree(b, leaves);
            Term::pair(left, right)
        }
        _ => leaves.next().expect("leaf count matches flattened type"),
    }
}

/// The context part of depairing: flattens every product-typed entry into
/// its non-product leaves and returns the substitution sending each split
/// variable to its tree of component pairs.
///
/// Splitting goes left to right in context order; a variable `w` with n
/// non-product leaves becomes `w1, ..., wn` (suffix counters, skipping
/// names already in use, including signature symbols).
pub fn depair_context(sig: &Signature, ctx: &Context) -> (Context, crate::subst::Subst) {
    let mut entries: Vec<(String, Type)> = ctx.entries().to_vec();
    let mut subst = crate::subst::Subst::new();
    let mut i = 0;
    while i < entries.len() {
        if !entries[i].1.is_prod() {
            i += 1;
            continue;
        }
        let (name, ty) = entries[i].clone();
        let leaves = flatten_prod(&ty);
        let mut used: std::collections::BTreeSet<String> =
            entries.iter().map(|(n, _)| n.clone()).collect();
        used.extend(sig.symbols().iter().map(|(n, _)| n.clone()));
        let mut fresh_names = Vec::with_capacity(leaves.len());
        let mut counter = 1usize;
        for _ in 0..leaves.len() {
            loop {
                let cand = format!("{name}{counter}");
                counter += 1;
                if !used.contains(&cand) {
                    used.insert(cand.clone());
                    fresh_names.push(cand);
                    break;
                }
            }
        }
        let mut leaf_terms = fresh_names.iter().map(|n| Term::var(n.clone()));
        subst.bind(name, pair_tree(&ty, &mut leaf_terms));
        let new_entries: Vec<(String, Type)> = fresh_names.into_iter().zip(leaves).collect();
        entries.splice(i..=i, new_entries);
        // stay at i: the spliced leaves are non-product by construction
    }
    let ctx2 = Context::from_entries(entries).expect("fresh names are distinct");
    (ctx2, subst)
}

/// Depaired form of a term-in-context: splits every product-typed context
/// variable `x : T1 * T2` into fresh components, substitutes the pair of
/// components for `x`, and renormalizes. The resulting context has no
/// product type at the top level of any entry.
pub fn depair(sig: &Signature, ctx: &Context, t: &Term) -> (Context, Term) {
    let (ctx2, subst) = depair_context(sig, ctx);
    let term = beta_delta_normalize(&subst.apply(&beta_delta_normalize(t)));
    (ctx2, term)
}
