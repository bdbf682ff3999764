//! Higher-order patterns: recognition, matching, and most general
//! unification.
//!
//! A beta-delta-normal term-in-context is a pattern when, after depairing
//! the context, every free variable occurs applied to arguments that are
//! eta-equivalent to distinct bound variables (projection chains of
//! distinct bound variables are admitted, which is what depairing leaves
//! behind). Unifiability of two patterns is decidable and unifiable
//! patterns have a most general unifier, unique up to renaming.
//!
//! Product types are eliminated before solving: free variables whose type
//! has a product anywhere in its codomain chain are split into fresh
//! components (`x -> \zs. <x1 zs, x2 zs>`), and the split is re-paired in
//! the answer substitution. After the split every solver-side variable has
//! a base or unit codomain, so flexible subterms occur only at base and
//! unit types.

use crate::normalize::{
    beta_delta_normalize, depair, eta_long_form, eta_long_form_open, eta_reduce,
};
use crate::subst::Subst;
use crate::term::{Context, Proj, Signature, Term, Type};
use crate::typing::TypeError;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("not a pattern: {0}")]
    NotAPattern(String),
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// A projection chain over a bound variable, the eta-collapsed shape of an
/// admissible pattern argument. `level` identifies the binder counted from
/// the root of the solved pair of terms (0 = outermost); `projs` are the
/// projections applied to it, outermost first.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Chain {
    level: usize,
    projs: Vec<Proj>,
}

/// Strips a term to `pr* (Bound i)` after eta collapse, if it has that
/// shape. The index is relative to the term's own root.
fn as_raw_chain(t: &Term) -> Option<(usize, Vec<Proj>)> {
    let r = eta_reduce(t);
    let mut projs = Vec::new();
    let mut cur = &r;
    while let Term::Proj(p, inner) = cur {
        projs.push(*p);
        cur = inner;
    }
    match cur {
        Term::Bound(i) => Some((*i, projs)),
        _ => None,
    }
}

fn chain_of_arg(arg: &Term, depth: usize) -> Option<Chain> {
    let (idx, projs) = as_raw_chain(arg)?;
    if idx >= depth {
        return None;
    }
    Some(Chain {
        level: depth - 1 - idx,
        projs,
    })
}

/// Whether the term-in-context is a higher-order pattern. The term is
/// beta-delta-normalized and depaired first; projections of free variables
/// are resolved by the depairing.
pub fn is_pattern(sig: &Signature, ctx: &Context, term: &Term) -> bool {
    let nf = beta_delta_normalize(term);
    let (_, t) = depair(sig, ctx, &nf);
    pattern_ok(&t, 0)
}

fn pattern_ok(t: &Term, depth: usize) -> bool {
    match t {
        Term::Abs(_, b) => pattern_ok(b, depth + 1),
        Term::Pair(a, b) => pattern_ok(a, depth) && pattern_ok(b, depth),
        Term::Proj(_, a) => pattern_ok(a, depth),
        Term::App(_, _) => {
            let (head, args) = t.spine();
            if matches!(head, Term::Var(_)) {
                let mut seen = BTreeSet::new();
                args.iter().all(|a| match chain_of_arg(a, depth) {
                    Some(c) => seen.insert(c.level),
                    None => false,
                })
            } else {
                pattern_ok(head, depth) && args.iter().all(|a| pattern_ok(a, depth))
            }
        }
        _ => true,
    }
}

fn flex_args(args: &[&Term], depth: usize, who: &str) -> Result<Vec<Chain>, PatternError> {
    let mut chains = Vec::with_capacity(args.len());
    let mut seen = BTreeSet::new();
    for a in args {
        let c = chain_of_arg(a, depth).ok_or_else(|| {
            PatternError::NotAPattern(format!(
                "argument `{a}` of variable `{who}` is not a bound variable chain"
            ))
        })?;
        if !seen.insert(c.level) {
            return Err(PatternError::NotAPattern(format!(
                "variable `{who}` is applied to a repeated bound variable"
            )));
        }
        chains.push(c);
    }
    Ok(chains)
}

/// Replaces an occurrence of one of the abstracted chains at this node.
/// `o` is the offset below the side's root, `d` the binder depth of the
/// equation, `n` the number of binders in the value prefix.
fn chain_replace(t: &Term, o: usize, d: usize, chains: &[Chain], n: usize) -> Option<Term> {
    let (idx, projs) = as_raw_chain(t)?;
    if idx < o || idx >= o + d {
        return None;
    }
    let level = (o + d) - 1 - idx;
    let i = chains
        .iter()
        .position(|c| c.level == level && c.projs == projs)?;
    Some(Term::Bound(o + (n - 1 - i)))
}

// ---------------------------------------------------------------------
// Pattern-pattern unification
// ---------------------------------------------------------------------

/// Outcome of a successful unification: the most general unifier, pruned
/// to the problem's free variables, together with the context instances
/// of the unified terms live in (unsolved problem variables plus fresh
/// variables introduced by flex-flex equations).
#[derive(Clone, Debug)]
pub struct Unifier {
    pub subst: Subst,
    pub ctx: Context,
}

struct UnifyState<'a> {
    sig: &'a Signature,
    metas: Vec<(String, Type)>,
    bound: BTreeMap<String, Term>,
    fresh: usize,
}

enum Inverted {
    Ok(Term),
    Clash,
    Prune { meta: String, keep: Vec<usize> },
}

impl<'a> UnifyState<'a> {
    fn meta_type(&self, x: &str) -> Option<&Type> {
        self.metas.iter().find(|(n, _)| n == x).map(|(_, t)| t)
    }

    fn is_meta(&self, x: &str) -> bool {
        self.meta_type(x).is_some()
    }

    fn fresh_meta(&mut self, ty: Type) -> String {
        loop {
            self.fresh += 1;
            let name = format!("${}", self.fresh);
            if self.metas.iter().any(|(n, _)| *n == name) {
                continue;
            }
            self.metas.push((name.clone(), ty));
            return name;
        }
    }

    fn meta_ctx(&self) -> Context {
        Context::from_entries(self.metas.iter().cloned()).expect("meta names are distinct")
    }

    fn current(&self) -> Subst {
        self.bound
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }

    fn bind(&mut self, x: &str, value: Term) -> Result<(), PatternError> {
        let ctx = self.meta_ctx();
        let v = eta_long_form(self.sig, &ctx, &value)?;
        self.bound.insert(x.to_string(), v);
        Ok(())
    }

    /// Splits every variable whose codomain chain contains a product into
    /// components, until all codomains are base or unit.
    fn split_product_codomains(&mut self) -> Result<(), PatternError> {
        loop {
            let target = self.metas.iter().find_map(|(name, ty)| {
                if self.bound.contains_key(name) {
                    return None;
                }
                let (args, cod) = ty.uncurry();
                if cod.is_prod() {
                    Some((
                        name.clone(),
                        args.into_iter().cloned().collect::<Vec<_>>(),
                        cod.clone(),
                    ))
                } else {
                    None
                }
            });
            let Some((name, args, cod)) = target else {
                return Ok(());
            };
            let (tl, tr) = match cod {
                Type::Prod(a, b) => (*a, *b),
                _ => unreachable!(),
            };
            let mk = |cod: &Type| {
                args.iter()
                    .rev()
                    .fold(cod.clone(), |acc, a| Type::arrow(a.clone(), acc))
            };
            let left = self.fresh_meta(mk(&tl));
            let right = self.fresh_meta(mk(&tr));
            let n = args.len();
            let spine =
                |head: &str| Term::apps(Term::var(head), (0..n).map(|i| Term::Bound(n - 1 - i)));
            let body = Term::pair(spine(&left), spine(&right));
            let value = args
                .iter()
                .rev()
                .fold(body, |acc, a| Term::abs(a.clone(), acc));
            self.bind(&name, value)?;
        }
    }

    fn invert(
        &self,
        x: &str,
        t: &Term,
        o: usize,
        d: usize,
        chains: &[Chain],
        n: usize,
    ) -> Result<Inverted, PatternError> {
        if let Some(z) = chain_replace(t, o, d, chains, n) {
            return Ok(Inverted::Ok(z));
        }
        match t {
            Term::Bound(i) => {
                if *i < o {
                    Ok(Inverted::Ok(t.clone()))
                } else {
                    // a binder of the equation that no argument chain covers
                    Ok(Inverted::Clash)
                }
            }
            Term::Const(_) | Term::Unit => Ok(Inverted::Ok(t.clone())),
            Term::Abs(ty, b) => match self.invert(x, b, o + 1, d, chains, n)? {
                Inverted::Ok(b) => Ok(Inverted::Ok(Term::abs(ty.clone(), b))),
                other => Ok(other),
            },
            Term::Pair(a, b) => {
                let a = match self.invert(x, a, o, d, chains, n)? {
                    Inverted::Ok(a) => a,
                    other => return Ok(other),
                };
                match self.invert(x, b, o, d, chains, n)? {
                    Inverted::Ok(b) => Ok(Inverted::Ok(Term::pair(a, b))),
                    other => Ok(other),
                }
            }
            Term::Proj(p, a) => match self.invert(x, a, o, d, chains, n)? {
                Inverted::Ok(a) => Ok(Inverted::Ok(Term::proj(*p, a))),
                other => Ok(other),
            },
            Term::Var(y) => self.invert_meta(x, y, &[], t, o, d, chains, n),
            Term::App(_, _) => {
                let (head, args) = t.spine();
                if let Term::Var(y) = head {
                    self.invert_meta(x, y, &args, t, o, d, chains, n)
                } else {
                    // rigid head: plain structural descent
                    let Term::App(f, a) = t else { unreachable!() };
                    let f = match self.invert(x, f, o, d, chains, n)? {
                        Inverted::Ok(f) => f,
                        other => return Ok(other),
                    };
                    match self.invert(x, a, o, d, chains, n)? {
                        Inverted::Ok(a) => Ok(Inverted::Ok(Term::app(f, a))),
                        other => Ok(other),
                    }
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn invert_meta(
        &self,
        x: &str,
        y: &str,
        args: &[&Term],
        _t: &Term,
        o: usize,
        d: usize,
        chains: &[Chain],
        n: usize,
    ) -> Result<Inverted, PatternError> {
        if y == x {
            return Ok(Inverted::Clash); // occurs check
        }
        // classify the arguments of the inner variable; any argument over
        // an uncovered equation binder forces pruning of that position
        let mut keep = Vec::new();
        for (j, a) in args.iter().enumerate() {
            let (idx, _projs) = as_raw_chain(a).ok_or_else(|| {
                PatternError::NotAPattern(format!(
                    "argument `{a}` of variable `{y}` is not a bound variable chain"
                ))
            })?;
            if idx < o {
                keep.push(j); // bound inside the rigid side
            } else if idx < o + d {
                let level = (o + d) - 1 - idx;
                let (_, projs) = as_raw_chain(a).unwrap();
                if chains.iter().any(|c| c.level == level && c.projs == projs) {
                    keep.push(j);
                } else {
                    // prune this argument of y
                }
            } else {
                keep.push(j);
            }
        }
        if keep.len() != args.len() {
            return Ok(Inverted::Prune {
                meta: y.to_string(),
                keep,
            });
        }
        let mut out = Term::var(y);
        for a in args {
            let a = match self.invert(x, a, o, d, chains, n)? {
                Inverted::Ok(a) => a,
                other => return Ok(other),
            };
            out = Term::app(out, a);
        }
        Ok(Inverted::Ok(out))
    }

    fn apply_prune(&mut self, meta: &str, keep: &[usize]) -> Result<(), PatternError> {
        let ty = self
            .meta_type(meta)
            .cloned()
            .expect("pruned variable is a known metavariable");
        let (arg_tys, cod) = ty.uncurry();
        let arg_tys: Vec<Type> = arg_tys.into_iter().cloned().collect();
        let cod = cod.clone();
        let kept_ty = keep
            .iter()
            .rev()
            .fold(cod, |acc, &j| Type::arrow(arg_tys[j].clone(), acc));
        let fresh = self.fresh_meta(kept_ty);
        let m = arg_tys.len();
        let body = Term::apps(
            Term::var(&fresh),
            keep.iter().map(|&j| Term::Bound(m - 1 - j)),
        );
        let value = arg_tys
            .iter()
            .rev()
            .fold(body, |acc, a| Term::abs(a.clone(), acc));
        self.bind(meta, value)
    }
}

fn abs_prefix(tys: &[Type], body: Term) -> Term {
    tys.iter()
        .rev()
        .fold(body, |acc, t| Term::abs(t.clone(), acc))
}

/// Most general unifier of two patterns of the same type over a shared,
/// depaired context of free variables. Returns `Ok(None)` when the
/// patterns are not unifiable; precondition violations (non-pattern
/// inputs, product-typed context entries) are reported as errors instead.
pub fn unify_patterns(
    sig: &Signature,
    ctx: &Context,
    left: &Term,
    right: &Term,
) -> Result<Option<Unifier>, PatternError> {
    for (n, ty) in ctx.entries() {
        if ty.is_prod() {
            return Err(PatternError::NotAPattern(format!(
                "context variable `{n}` has product type; depair the problem first"
            )));
        }
    }
    let l = eta_long_form(sig, ctx, left)?;
    let r = eta_long_form(sig, ctx, right)?;
    let mut st = UnifyState {
        sig,
        metas: ctx.entries().to_vec(),
        bound: BTreeMap::new(),
        fresh: 0,
    };
    st.split_product_codomains()?;

    let mut work: VecDeque<(usize, Term, Term)> = VecDeque::new();
    work.push_back((0, l, r));
    let mut steps = 0usize;
    while let Some((d, s, t)) = work.pop_front() {
        steps += 1;
        assert!(steps < 100_000, "unification did not terminate");
        let cur = st.current();
        let s = beta_delta_normalize(&cur.apply(&s));
        let t = beta_delta_normalize(&cur.apply(&t));
        if s == t {
            continue;
        }
        match (&s, &t) {
            (Term::Abs(ty1, b1), Term::Abs(ty2, b2)) => {
                if ty1 != ty2 {
                    return Ok(None);
                }
                work.push_back((d + 1, b1.as_ref().clone(), b2.as_ref().clone()));
            }
            (Term::Pair(a1, b1), Term::Pair(a2, b2)) => {
                work.push_back((d, a1.as_ref().clone(), a2.as_ref().clone()));
                work.push_back((d, b1.as_ref().clone(), b2.as_ref().clone()));
            }
            _ => {
                let (hs, args_s) = s.spine();
                let (ht, args_t) = t.spine();
                let s_flex = matches!(hs, Term::Var(x) if st.is_meta(x));
                let t_flex = matches!(ht, Term::Var(x) if st.is_meta(x));
                match (s_flex, t_flex) {
                    (true, true) => {
                        let (Term::Var(xs), Term::Var(xt)) = (hs, ht) else {
                            unreachable!()
                        };
                        let cs = flex_args(&args_s, d, xs)?;
                        let ct = flex_args(&args_t, d, xt)?;
                        if xs == xt {
                            if cs == ct {
                                continue;
                            }
                            let common: Vec<usize> =
                                (0..cs.len()).filter(|&i| cs[i] == ct[i]).collect();
                            let ty = st.meta_type(xs).cloned().expect("known meta");
                            let (arg_tys, cod) = ty.uncurry();
                            let arg_tys: Vec<Type> = arg_tys.into_iter().cloned().collect();
                            let kept_ty = common
                                .iter()
                                .rev()
                                .fold(cod.clone(), |acc, &i| Type::arrow(arg_tys[i].clone(), acc));
                            let w = st.fresh_meta(kept_ty);
                            let nargs = arg_tys.len();
                            let body = Term::apps(
                                Term::var(&w),
                                common.iter().map(|&i| Term::Bound(nargs - 1 - i)),
                            );
                            let xs = xs.to_string();
                            st.bind(&xs, abs_prefix(&arg_tys, body))?;
                        } else {
                            let pairs: Vec<(usize, usize)> = (0..cs.len())
                                .filter_map(|i| ct.iter().position(|c| *c == cs[i]).map(|j| (i, j)))
                                .collect();
                            let ty_s = st.meta_type(xs).cloned().expect("known meta");
                            let ty_t = st.meta_type(xt).cloned().expect("known meta");
                            let (ats, cod) = ty_s.uncurry();
                            let ats: Vec<Type> = ats.into_iter().cloned().collect();
                            let (att, _) = ty_t.uncurry();
                            let att: Vec<Type> = att.into_iter().cloned().collect();
                            let w_ty = pairs
                                .iter()
                                .rev()
                                .fold(cod.clone(), |acc, &(i, _)| Type::arrow(ats[i].clone(), acc));
                            let w = st.fresh_meta(w_ty);
                            let ns = ats.len();
                            let nt = att.len();
                            let body_s = Term::apps(
                                Term::var(&w),
                                pairs.iter().map(|&(i, _)| Term::Bound(ns - 1 - i)),
                            );
                            let body_t = Term::apps(
                                Term::var(&w),
                                pairs.iter().map(|&(_, j)| Term::Bound(nt - 1 - j)),
                            );
                            let xs = xs.to_string();
                            let xt = xt.to_string();
                            st.bind(&xs, abs_prefix(&ats, body_s))?;
                            st.bind(&xt, abs_prefix(&att, body_t))?;
                        }
                    }
                    (true, false) | (false, true) => {
                        let (x, args, rigid) = if s_flex {
                            let Term::Var(x) = hs else { unreachable!() };
                            (x.to_string(), args_s, t.clone())
                        } else {
                            let Term::Var(x) = ht else { unreachable!() };
                            (x.to_string(), args_t, s.clone())
                        };
                        let chains = flex_args(&args, d, &x)?;
                        let nargs = chains.len();
                        match st.invert(&x, &rigid, 0, d, &chains, nargs)? {
                            Inverted::Clash => return Ok(None),
                            Inverted::Prune { meta, keep } => {
                                st.apply_prune(&meta, &keep)?;
                                work.push_back((d, s.clone(), t.clone()));
                            }
                            Inverted::Ok(body) => {
                                let ty = st.meta_type(&x).cloned().expect("known meta");
                                let (arg_tys, _) = ty.uncurry();
                                let arg_tys: Vec<Type> = arg_tys.into_iter().cloned().collect();
                                st.bind(&x, abs_prefix(&arg_tys, body))?;
                            }
                        }
                    }
                    (false, false) => {
                        if hs != ht || args_s.len() != args_t.len() {
                            return Ok(None);
                        }
                        for (a, b) in args_s.iter().zip(args_t.iter()) {
                            work.push_back((d, (*a).clone(), (*b).clone()));
                        }
                    }
                }
            }
        }
    }

    // compose to an idempotent substitution
    let mut subst = st.current();
    loop {
        let next: Subst = subst
            .iter()
            .map(|(k, v)| (k.to_string(), beta_delta_normalize(&subst.apply(v))))
            .collect();
        if next == subst {
            break;
        }
        subst = next;
    }
    let original: BTreeSet<&str> = ctx.entries().iter().map(|(n, _)| n.as_str()).collect();
    let subst = subst.restrict(&original);

    // residual context: unsolved problem variables, then surviving fresh ones
    let mut residual: Vec<(String, Type)> = Vec::new();
    let solved: BTreeSet<&str> = subst.domain().collect();
    for (n, ty) in ctx.entries() {
        if !solved.contains(n.as_str()) {
            residual.push((n.clone(), ty.clone()));
        }
    }
    let used = subst.range_vars();
    for (n, ty) in &st.metas {
        if n.starts_with('$') && used.contains(n.as_str()) {
            residual.push((n.clone(), ty.clone()));
        }
    }
    let ctx2 = Context::from_entries(residual).expect("residual names distinct");
    Ok(Some(Unifier { subst, ctx: ctx2 }))
}

// ---------------------------------------------------------------------
// Pattern matching
// ---------------------------------------------------------------------

struct MatchState<'a> {
    sig: &'a Signature,
    flex: Vec<(String, Type)>,
    subject_ctx: &'a Context,
    outer: &'a [Type],
    bound: BTreeMap<String, Term>,
    splits: BTreeSet<String>,
    fresh: usize,
}

impl<'a> MatchState<'a> {
    fn flex_type(&self, x: &str) -> Option<&Type> {
        self.flex.iter().find(|(n, _)| n == x).map(|(_, t)| t)
    }

    fn is_flex(&self, x: &str) -> bool {
        self.flex_type(x).is_some()
    }

    fn fresh_component(&mut self, ty: Type) -> String {
        loop {
            self.fresh += 1;
            let name = format!("${}", self.fresh);
            if self.flex.iter().any(|(n, _)| *n == name) || self.subject_ctx.contains(&name) {
                continue;
            }
            self.splits.insert(name.clone());
            self.flex.push((name.clone(), ty));
            return name;
        }
    }

    fn eta_value(&self, value: &Term) -> Result<Term, PatternError> {
        Ok(eta_long_form_open(
            self.sig,
            self.subject_ctx,
            self.outer,
            value,
        )?)
    }
}

fn invert_subject(s: &Term, o: usize, d: usize, chains: &[Chain], n: usize) -> Option<Term> {
    if let Some(z) = chain_replace(s, o, d, chains, n) {
        return Some(z);
    }
    match s {
        Term::Bound(i) => {
            if *i < o {
                Some(s.clone())
            } else if *i < o + d {
                None // equation binder not covered by any argument chain
            } else {
                // bound above the match root; reindex under the new prefix
                Some(Term::Bound(*i - d + n))
            }
        }
        Term::Var(_) | Term::Const(_) | Term::Unit => Some(s.clone()),
        Term::Abs(ty, b) => Some(Term::abs(
            ty.clone(),
            invert_subject(b, o + 1, d, chains, n)?,
        )),
        Term::App(a, b) => Some(Term::app(
            invert_subject(a, o, d, chains, n)?,
            invert_subject(b, o, d, chains, n)?,
        )),
        Term::Pair(a, b) => Some(Term::pair(
            invert_subject(a, o, d, chains, n)?,
            invert_subject(b, o, d, chains, n)?,
        )),
        Term::Proj(p, a) => Some(Term::proj(*p, invert_subject(a, o, d, chains, n)?)),
    }
}

/// Matches a pattern against a subject term, treating the subject's free
/// variables as constants. Both sides must be eta-long beta-delta normal;
/// the subject may mention binders above the match root as loose indices,
/// whose types are given by `outer` (outermost first).
///
/// Returns the unique substitution with `pattern * subst` equal to the
/// subject after normalization, `Ok(None)` if there is none, or an error
/// if the pattern side is not actually a pattern.
pub fn match_pattern(
    sig: &Signature,
    flex: &Context,
    subject_ctx: &Context,
    outer: &[Type],
    pattern: &Term,
    subject: &Term,
) -> Result<Option<Subst>, PatternError> {
    let mut st = MatchState {
        sig,
        flex: flex.entries().to_vec(),
        subject_ctx,
        outer,
        bound: BTreeMap::new(),
        splits: BTreeSet::new(),
        fresh: 0,
    };
    // split flex variables with product codomains, as in unification
    let mut pat = pattern.clone();
    loop {
        let target = st.flex.iter().find_map(|(name, ty)| {
            if st.bound.contains_key(name) {
                return None;
            }
            let (args, cod) = ty.uncurry();
            if cod.is_prod() {
                Some((
                    name.clone(),
                    args.into_iter().cloned().collect::<Vec<_>>(),
                    cod.clone(),
                ))
            } else {
                None
            }
        });
        let Some((name, args, cod)) = target else {
            break;
        };
        let (tl, tr) = match cod {
            Type::Prod(a, b) => (*a, *b),
            _ => unreachable!(),
        };
        let mk = |c: &Type| {
            args.iter()
                .rev()
                .fold(c.clone(), |acc, a| Type::arrow(a.clone(), acc))
        };
        let left = st.fresh_component(mk(&tl));
        let right = st.fresh_component(mk(&tr));
        let m = args.len();
        let spine = |h: &str| Term::apps(Term::var(h), (0..m).map(|i| Term::Bound(m - 1 - i)));
        let value = abs_prefix(&args, Term::pair(spine(&left), spine(&right)));
        st.bound.insert(name.clone(), value);
        let one: Subst = [(name.clone(), st.bound[&name].clone())]
            .into_iter()
            .collect();
        pat = beta_delta_normalize(&one.apply(&pat));
    }

    let mut work: VecDeque<(usize, Term, Term)> = VecDeque::new();
    work.push_back((0, pat, subject.clone()));
    while let Some((d, p, s)) = work.pop_front() {
        let cur: Subst = st
            .bound
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let p = beta_delta_normalize(&cur.apply(&p));
        if p == s {
            continue;
        }
        match (&p, &s) {
            (Term::Abs(ty1, b1), Term::Abs(ty2, b2)) => {
                if ty1 != ty2 {
                    return Ok(None);
                }
                work.push_back((d + 1, b1.as_ref().clone(), b2.as_ref().clone()));
            }
            (Term::Pair(a1, b1), Term::Pair(a2, b2)) => {
                work.push_back((d, a1.as_ref().clone(), a2.as_ref().clone()));
                work.push_back((d, b1.as_ref().clone(), b2.as_ref().clone()));
            }
            _ => {
                let (hp, args_p) = p.spine();
                if let Term::Var(x) = hp {
                    if st.is_flex(x) {
                        let chains = flex_args(&args_p, d, x)?;
                        let nargs = chains.len();
                        let Some(body) = invert_subject(&s, 0, d, &chains, nargs) else {
                            return Ok(None);
                        };
                        let ty = st.flex_type(x).cloned().expect("known flex variable");
                        let (arg_tys, _) = ty.uncurry();
                        let arg_tys: Vec<Type> = arg_tys.into_iter().cloned().collect();
                        let value = st.eta_value(&abs_prefix(&arg_tys, body))?;
                        match st.bound.get(x) {
                            Some(prev) if *prev != value => return Ok(None),
                            Some(_) => {}
                            None => {
                                st.bound.insert(x.to_string(), value);
                            }
                        }
                        continue;
                    }
                }
                // rigid-rigid
                let (hs, args_s) = s.spine();
                if hp != hs || args_p.len() != args_s.len() {
                    return Ok(None);
                }
                for (a, b) in args_p.iter().zip(args_s.iter()) {
                    work.push_back((d, (*a).clone(), (*b).clone()));
                }
            }
        }
    }

    // compose split components back into the original variables
    let mut subst: Subst = st
        .bound
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    loop {
        let next: Subst = subst
            .iter()
            .map(|(k, v)| (k.to_string(), beta_delta_normalize(&subst.apply(v))))
            .collect();
        if next == subst {
            break;
        }
        subst = next;
    }
    let original: BTreeSet<&str> = flex.entries().iter().map(|(n, _)| n.as_str()).collect();
    let subst = subst.restrict(&original);
    // a match must determine every component it introduced
    if subst.range_vars().iter().any(|v| st.splits.contains(*v)) {
        return Ok(None);
    }
    Ok(Some(subst))
}
