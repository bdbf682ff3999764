//! Pattern rewriting systems: rules, validation, single-step and traced
//! rewriting modulo the canonical normal form, joinability, and replay of
//! equational derivations.
//!
//! A rewrite step matches a rule's left-hand side against the eta-long
//! beta-delta-normal form of the redex, so the relation implemented here
//! is the one on canonical representatives.

use crate::normalize::{depair_context, eta_long_form, eta_long_form_open, is_beta_delta_normal};
use crate::pattern::{is_pattern, match_pattern, PatternError};
use crate::subst::Subst;
use crate::term::{
    canonical_rename, splice_at, subterm_at, Context, Position, Signature, Term, Type,
};
use crate::typing::{type_at, typecheck, TypeError};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub const DEFAULT_FUEL: usize = 10_000;

/// Redex selection order for rewriting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    LeftmostOutermost,
    RightmostInnermost,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::LeftmostOutermost => write!(f, "leftmost-outermost"),
            Strategy::RightmostInnermost => write!(f, "rightmost-innermost"),
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("unknown strategy `{0}` (expected `leftmost-outermost` or `rightmost-innermost`)")]
pub struct StrategyParseError(pub String);

impl FromStr for Strategy {
    type Err = StrategyParseError;

    fn from_str(s: &str) -> Result<Strategy, StrategyParseError> {
        match s {
            "leftmost-outermost" | "lo" => Ok(Strategy::LeftmostOutermost),
            "rightmost-innermost" | "ri" => Ok(Strategy::RightmostInnermost),
            other => Err(StrategyParseError(other.to_string())),
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("rule `{0}`: {1}")]
    Type(String, TypeError),
    #[error("rule `{0}`: left-hand side has type `{1}` but right-hand side `{2}`")]
    SideTypesDiffer(String, Type, Type),
    #[error(
        "rule `{0}`: right-hand side uses variable `{1}` that is not free in the left-hand side"
    )]
    RhsVariableNotInLhs(String, String),
    #[error("rule name `{0}` declared twice")]
    DuplicateRuleName(String),
}

/// An oriented equation-in-context. The surface fields keep the rule as
/// written; the canonical fields hold the depaired, eta-long beta-delta
/// normal forms used by matching, overlap search and reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub surface_ctx: Context,
    pub surface_lhs: Term,
    pub surface_rhs: Term,
    /// Depaired context: no entry has product type.
    pub ctx: Context,
    pub lhs: Term,
    pub rhs: Term,
    pub ty: Type,
}

impl Rule {
    pub fn new(
        sig: &Signature,
        name: impl Into<String>,
        ctx: Context,
        lhs: Term,
        rhs: Term,
    ) -> Result<Rule, RuleError> {
        let name = name.into();
        let tl = typecheck(sig, &ctx, &lhs).map_err(|e| RuleError::Type(name.clone(), e))?;
        let tr = typecheck(sig, &ctx, &rhs).map_err(|e| RuleError::Type(name.clone(), e))?;
        if tl != tr {
            return Err(RuleError::SideTypesDiffer(name, tl, tr));
        }
        let lhs_vars = lhs.free_vars();
        if let Some(bad) = rhs.free_vars().iter().find(|v| !lhs_vars.contains(*v)) {
            return Err(RuleError::RhsVariableNotInLhs(name, bad.to_string()));
        }
        let (dctx, split) = depair_context(sig, &ctx);
        let dl = eta_long_form(sig, &dctx, &split.apply(&lhs))
            .map_err(|e| RuleError::Type(name.clone(), e))?;
        let dr = eta_long_form(sig, &dctx, &split.apply(&rhs))
            .map_err(|e| RuleError::Type(name.clone(), e))?;
        Ok(Rule {
            name,
            surface_ctx: ctx,
            surface_lhs: lhs,
            surface_rhs: rhs,
            ctx: dctx,
            lhs: dl,
            rhs: dr,
            ty: tl,
        })
    }
}

/// A pattern rewriting system: a signature and an ordered list of rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prs {
    pub sig: Signature,
    pub rules: Vec<Rule>,
}

impl Prs {
    pub fn new(sig: Signature, rules: Vec<Rule>) -> Result<Prs, RuleError> {
        for (i, r) in rules.iter().enumerate() {
            if rules[..i].iter().any(|r2| r2.name == r.name) {
                return Err(RuleError::DuplicateRuleName(r.name.clone()));
            }
        }
        Ok(Prs { sig, rules })
    }

    pub fn rule(&self, name: &str) -> Option<(usize, &Rule)> {
        self.rules.iter().enumerate().find(|(_, r)| r.name == name)
    }

    /// The canonical representative rewriting operates on.
    pub fn canonical(&self, ctx: &Context, term: &Term) -> Result<Term, TypeError> {
        eta_long_form(&self.sig, ctx, term)
    }
}

/// Per-rule validation findings. `true` means the check passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleFindings {
    pub rule: String,
    pub lhs_is_pattern: bool,
    pub rhs_vars_in_lhs: bool,
    pub multisets_equal: bool,
    pub base_type: bool,
    pub sides_normal: bool,
}

impl RuleFindings {
    pub fn ok(&self) -> bool {
        self.lhs_is_pattern
            && self.rhs_vars_in_lhs
            && self.multisets_equal
            && self.base_type
            && self.sides_normal
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub rules: Vec<RuleFindings>,
    /// Rule pairs (possibly a rule with itself) where one is the reverse
    /// of the other up to renaming.
    pub reversed_duplicates: Vec<(String, String)>,
    pub ok: bool,
}

impl ValidationReport {
    /// The findings rewriting and confluence checking depend on: pattern
    /// left-hand sides, right-hand variables contained in the left, base
    /// equation types, normal sides. The multiset and reversed-duplicate
    /// checks are hypotheses of the boundary-matrix theorem only.
    pub fn rewriting_ok(&self) -> bool {
        self.rules
            .iter()
            .all(|r| r.lhs_is_pattern && r.rhs_vars_in_lhs && r.base_type && r.sides_normal)
    }
}

/// Checks the hypotheses the critical-pair and boundary-matrix machinery
/// relies on: pattern left-hand sides, right-hand variables contained in
/// the left, equal free-variable multisets, base equation types,
/// beta-delta-normal sides as written, and no rule being the reverse of
/// another.
pub fn validate_prs(prs: &Prs) -> ValidationReport {
    let mut rules = Vec::new();
    for r in &prs.rules {
        let lhs_vars = r.lhs.free_vars();
        let rhs_vars = r.rhs.free_vars();
        rules.push(RuleFindings {
            rule: r.name.clone(),
            lhs_is_pattern: is_pattern(&prs.sig, &r.ctx, &r.lhs),
            rhs_vars_in_lhs: rhs_vars.iter().all(|v| lhs_vars.contains(v)),
            multisets_equal: r.lhs.free_var_counts() == r.rhs.free_var_counts(),
            base_type: r.ty.is_base(),
            sides_normal: is_beta_delta_normal(&r.surface_lhs)
                && is_beta_delta_normal(&r.surface_rhs),
        });
    }
    let mut reversed = Vec::new();
    for (i, a) in prs.rules.iter().enumerate() {
        for b in prs.rules.iter().skip(i) {
            let rev_a = canonical_rename(&[&a.rhs, &a.lhs]);
            let fwd_b = canonical_rename(&[&b.lhs, &b.rhs]);
            if rev_a == fwd_b {
                reversed.push((a.name.clone(), b.name.clone()));
            }
        }
    }
    let ok = rules.iter().all(RuleFindings::ok) && reversed.is_empty();
    ValidationReport {
        rules,
        reversed_duplicates: reversed,
        ok,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Forward => write!(f, "fwd"),
            Direction::Backward => write!(f, "bwd"),
        }
    }
}

/// One application of a rule: at `pos` in the canonical form of the redex
/// term, with the matching substitution. Replaying the step on its source
/// reproduces its target exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: String,
    pub dir: Direction,
    pub pos: Position,
    pub subst: Subst,
}

/// A rewrite path: the canonical source, the steps taken, and the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub ctx: Context,
    pub source: Term,
    pub steps: Vec<RewriteStep>,
    pub target: Term,
}

impl Trace {
    /// How many times each rule is used (all traced steps are forward).
    pub fn rule_counts(&self) -> BTreeMap<&str, usize> {
        let mut out = BTreeMap::new();
        for s in &self.steps {
            *out.entry(s.rule.as_str()).or_insert(0) += 1;
        }
        out
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("fuel exhausted after {} steps", partial.steps.len())]
    FuelExhausted { partial: Trace },
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// Applies one rule at one position of a canonical term, if it matches.
pub fn apply_rule_at(
    prs: &Prs,
    ctx: &Context,
    term: &Term,
    rule_idx: usize,
    pos: &Position,
) -> Option<(Term, RewriteStep)> {
    apply_rule_at_dir(prs, ctx, term, rule_idx, pos, Direction::Forward).ok()
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ApplyError {
    #[error("position does not exist or is ill-typed: {0}")]
    BadPosition(String),
    #[error("rule does not match at the position")]
    NoMatch,
    #[error("matching requires an explicit substitution: {0}")]
    NeedsSubst(String),
}

fn apply_rule_at_dir(
    prs: &Prs,
    ctx: &Context,
    term: &Term,
    rule_idx: usize,
    pos: &Position,
    dir: Direction,
) -> Result<(Term, RewriteStep), ApplyError> {
    let rule = &prs.rules[rule_idx];
    let (from, to) = match dir {
        Direction::Forward => (&rule.lhs, &rule.rhs),
        Direction::Backward => (&rule.rhs, &rule.lhs),
    };
    let (ty, binders) =
        type_at(&prs.sig, ctx, term, pos).map_err(|e| ApplyError::BadPosition(e.to_string()))?;
    if ty != rule.ty {
        return Err(ApplyError::NoMatch);
    }
    let subject = subterm_at(term, pos).expect("type_at validated the position");
    // rename the rule variables into a reserved namespace so they cannot
    // collide with the subject's free variables
    let ren: BTreeMap<String, String> = rule
        .ctx
        .entries()
        .iter()
        .map(|(n, _)| (n.clone(), format!("%{n}")))
        .collect();
    let flex = Context::from_entries(
        rule.ctx
            .entries()
            .iter()
            .map(|(n, t)| (format!("%{n}"), t.clone())),
    )
    .expect("renamed rule variables stay distinct");
    let pattern = from.rename_free(&ren);
    let theta = match match_pattern(&prs.sig, &flex, ctx, &binders, &pattern, subject) {
        Ok(Some(s)) => s,
        Ok(None) => return Err(ApplyError::NoMatch),
        Err(PatternError::NotAPattern(m)) => return Err(ApplyError::NeedsSubst(m)),
        Err(PatternError::Type(e)) => return Err(ApplyError::BadPosition(e.to_string())),
    };
    // translate the substitution back to the rule's own variable names
    let subst: Subst = rule
        .ctx
        .entries()
        .iter()
        .filter_map(|(n, _)| theta.get(&format!("%{n}")).map(|v| (n.clone(), v.clone())))
        .collect();
    let contractum = eta_long_form_open(&prs.sig, ctx, &binders, &subst.apply(to))
        .expect("instantiated rule side is well-typed");
    let result = splice_at(term, pos, contractum).expect("position validated");
    Ok((
        result,
        RewriteStep {
            rule: rule.name.clone(),
            dir,
            pos: pos.clone(),
            subst,
        },
    ))
}

fn ordered_positions(term: &Term, strategy: Strategy) -> Vec<Position> {
    match strategy {
        Strategy::LeftmostOutermost => crate::term::positions(term),
        Strategy::RightmostInnermost => {
            fn go(t: &Term, here: Position, out: &mut Vec<Position>) {
                match t {
                    Term::App(a, b) | Term::Pair(a, b) => {
                        go(b, here.child(2), out);
                        go(a, here.child(1), out);
                    }
                    Term::Abs(_, b) => go(b, here.child(1), out),
                    Term::Proj(_, a) => go(a, here.child(1), out),
                    _ => {}
                }
                out.push(here);
            }
            let mut out = Vec::new();
            go(term, Position::root(), &mut out);
            out
        }
    }
}

/// One rewrite step at the first position (in strategy order) where some
/// rule matches, trying rules in system order at each position. Returns
/// the canonical result and the step, or nothing when the term is normal
/// for the system.
pub fn rewrite_once(
    prs: &Prs,
    ctx: &Context,
    term: &Term,
    strategy: Strategy,
) -> Result<Option<(Term, RewriteStep)>, TypeError> {
    let t = prs.canonical(ctx, term)?;
    Ok(rewrite_once_canonical(prs, ctx, &t, strategy))
}

fn rewrite_once_canonical(
    prs: &Prs,
    ctx: &Context,
    term: &Term,
    strategy: Strategy,
) -> Option<(Term, RewriteStep)> {
    for pos in ordered_positions(term, strategy) {
        for idx in 0..prs.rules.len() {
            if let Some(hit) = apply_rule_at(prs, ctx, term, idx, &pos) {
                return Some(hit);
            }
        }
    }
    None
}

/// Rewrites to a normal form under the given strategy, recording every
/// step. Fuel bounds the number of steps; running out is an error that
/// carries the partial trace.
pub fn normalize_with_trace(
    prs: &Prs,
    ctx: &Context,
    term: &Term,
    strategy: Strategy,
    fuel: usize,
) -> Result<Trace, RewriteError> {
    let source = prs.canonical(ctx, term)?;
    let mut current = source.clone();
    let mut steps = Vec::new();
    loop {
        match rewrite_once_canonical(prs, ctx, &current, strategy) {
            None => {
                return Ok(Trace {
                    ctx: ctx.clone(),
                    source,
                    steps,
                    target: current,
                })
            }
            Some((next, step)) => {
                if steps.len() >= fuel {
                    return Err(RewriteError::FuelExhausted {
                        partial: Trace {
                            ctx: ctx.clone(),
                            source,
                            steps,
                            target: current,
                        },
                    });
                }
                steps.push(step);
                current = next;
            }
        }
    }
}

/// Whether two terms of the same type rewrite to alpha-equal normal forms.
pub fn joinable(
    prs: &Prs,
    ctx: &Context,
    t1: &Term,
    t2: &Term,
    strategy: Strategy,
    fuel: usize,
) -> Result<bool, RewriteError> {
    let n1 = normalize_with_trace(prs, ctx, t1, strategy, fuel)?;
    let n2 = normalize_with_trace(prs, ctx, t2, strategy, fuel)?;
    Ok(n1.target == n2.target)
}

/// A step of a derivation script: a rule, a direction, a position, and
/// optionally an explicit substitution (required where matching against
/// the reversed rule is ambiguous).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayStep {
    pub rule: String,
    pub dir: Direction,
    pub pos: Position,
    pub subst: Option<Subst>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("step {index} ({rule}): {reason}")]
    StepInapplicable {
        index: usize,
        rule: String,
        reason: String,
    },
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// Machine-checks an equational derivation: applies the given steps in
/// order, backward steps using the reversed orientation, and returns the
/// final term together with the verified steps.
pub fn replay_derivation(
    prs: &Prs,
    ctx: &Context,
    term: &Term,
    script: &[ReplayStep],
) -> Result<(Term, Vec<(RewriteStep, Term)>), ReplayError> {
    let mut current = prs.canonical(ctx, term)?;
    let mut done = Vec::new();
    for (index, step) in script.iter().enumerate() {
        let fail = |reason: String| ReplayError::StepInapplicable {
            index: index + 1,
            rule: step.rule.clone(),
            reason,
        };
        let (idx, rule) = prs
            .rule(&step.rule)
            .ok_or_else(|| fail("no such rule".to_string()))?;
        let (next, applied) = match &step.subst {
            None => apply_rule_at_dir(prs, ctx, &current, idx, &step.pos, step.dir)
                .map_err(|e| fail(e.to_string()))?,
            Some(theta) => {
                let (from, to) = match step.dir {
                    Direction::Forward => (&rule.lhs, &rule.rhs),
                    Direction::Backward => (&rule.rhs, &rule.lhs),
                };
                let (ty, binders) =
                    type_at(&prs.sig, ctx, &current, &step.pos).map_err(|e| fail(e.to_string()))?;
                if ty != rule.ty {
                    return Err(fail(format!(
                        "position has type `{ty}` but the rule rewrites at `{}`",
                        rule.ty
                    )));
                }
                let subject =
                    subterm_at(&current, &step.pos).expect("type_at validated the position");
                let expected = eta_long_form_open(&prs.sig, ctx, &binders, &theta.apply(from))
                    .map_err(|e| fail(e.to_string()))?;
                if expected != *subject {
                    return Err(fail(format!(
                        "substituted side `{expected}` does not equal the subterm `{subject}`"
                    )));
                }
                let contractum = eta_long_form_open(&prs.sig, ctx, &binders, &theta.apply(to))
                    .map_err(|e| fail(e.to_string()))?;
                let result =
                    splice_at(&current, &step.pos, contractum).expect("position validated");
                (
                    result,
                    RewriteStep {
                        rule: rule.name.clone(),
                        dir: step.dir,
                        pos: step.pos.clone(),
                        subst: theta.clone(),
                    },
                )
            }
        };
        current = next;
        done.push((applied, current.clone()));
    }
    Ok((current, done))
}
