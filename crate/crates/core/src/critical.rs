//! Overlap detection, critical peak enumeration, and local confluence.
//!
//! Two rules overlap at a position `p` of the first (outer) rule's
//! left-hand side when the head there is not a free variable and the
//! subterm, abstracted over the binders it uses, unifies with the second
//! (inner) rule's left-hand side abstracted the same way, after renaming
//! the rules apart. Each overlap induces a critical peak: a one-step
//! divergence out of the instantiated superposition, the outer rule
//! rewriting at the root and the inner rule at `p`.

use crate::pattern::unify_patterns;
use crate::rewrite::{apply_rule_at, normalize_with_trace, Prs, RewriteStep, Strategy};
use crate::subst::Subst;
use crate::term::{canonical_rename, subterm_at, Context, Position, Term};
use crate::typing::typed_positions;
use std::collections::{BTreeMap, BTreeSet};

/// An overlap of the inner rule's left-hand side inside the outer rule's,
/// with the unifier that makes them equal.
#[derive(Clone, Debug)]
pub struct Overlap {
    pub outer: usize,
    pub inner: usize,
    /// Position in the outer rule's (depaired) left-hand side.
    pub pos: Position,
    /// Most general unifier over the renamed-apart joint context.
    pub mgu: Subst,
    /// Context of the instantiated superposition.
    pub ctx: Context,
}

/// A critical peak: the superposition and its two diverging single steps.
#[derive(Clone, Debug)]
pub struct CriticalPeak {
    pub outer: usize,
    pub inner: usize,
    pub pos: Position,
    pub mgu: Subst,
    /// Free variables of the peak, in order of first occurrence.
    pub ctx: Context,
    /// The superposition, in canonical form.
    pub source: Term,
    /// Outer rule applied at the root.
    pub left_step: RewriteStep,
    pub left: Term,
    /// Inner rule applied at `pos`.
    pub right_step: RewriteStep,
    pub right: Term,
}

/// Renames the entries of `other` apart from `taken`, priming colliding
/// names.
fn rename_apart(taken: &BTreeSet<String>, other: &Context) -> (Context, BTreeMap<String, String>) {
    let mut taken = taken.clone();
    let mut map = BTreeMap::new();
    let mut entries = Vec::new();
    for (n, ty) in other.entries() {
        let mut cand = n.clone();
        while taken.contains(&cand) {
            cand.push('\'');
        }
        taken.insert(cand.clone());
        if cand != *n {
            map.insert(n.clone(), cand.clone());
        }
        entries.push((cand, ty.clone()));
    }
    (
        Context::from_entries(entries).expect("renamed names are distinct"),
        map,
    )
}

/// Abstracts a subterm over the enclosing binders it actually uses.
/// `levels` are the binder levels (0 = outermost above the position) in
/// binding order; `k` is the total number of binders above the position.
fn close_over(t: &Term, levels: &[usize], k: usize) -> Term {
    fn go(t: &Term, depth: usize, levels: &[usize], k: usize) -> Term {
        match t {
            Term::Bound(i) if *i >= depth => {
                let level = k - 1 - (i - depth);
                let j = levels
                    .iter()
                    .position(|l| *l == level)
                    .expect("every loose binder level was selected");
                Term::Bound(depth + (levels.len() - 1 - j))
            }
            Term::Abs(ty, b) => Term::abs(ty.clone(), go(b, depth + 1, levels, k)),
            Term::App(a, b) => Term::app(go(a, depth, levels, k), go(b, depth, levels, k)),
            Term::Pair(a, b) => Term::pair(go(a, depth, levels, k), go(b, depth, levels, k)),
            Term::Proj(p, a) => Term::proj(*p, go(a, depth, levels, k)),
            _ => t.clone(),
        }
    }
    go(t, 0, levels, k)
}

fn loose_levels(t: &Term, k: usize) -> Vec<usize> {
    fn go(t: &Term, depth: usize, k: usize, out: &mut BTreeSet<usize>) {
        match t {
            Term::Bound(i) if *i >= depth => {
                out.insert(k - 1 - (i - depth));
            }
            Term::Abs(_, b) => go(b, depth + 1, k, out),
            Term::App(a, b) | Term::Pair(a, b) => {
                go(a, depth, k, out);
                go(b, depth, k, out);
            }
            Term::Proj(_, a) => go(a, depth, k, out),
            _ => {}
        }
    }
    let mut out = BTreeSet::new();
    go(t, 0, k, &mut out);
    out.into_iter().collect()
}

/// The head of a term: strip binders, then take the head of the spine.
fn head_of(t: &Term) -> &Term {
    let mut cur = t;
    while let Term::Abs(_, b) = cur {
        cur = b;
    }
    cur.spine().0
}

/// All overlaps of rule `inner` inside rule `outer`, excluding the
/// trivial root overlap of a rule with itself and, at the root, the
/// mirror orientation (only `outer <= inner` is reported there).
pub fn find_overlaps(prs: &Prs, outer: usize, inner: usize) -> Vec<Overlap> {
    let r1 = &prs.rules[outer];
    let r2 = &prs.rules[inner];
    let taken: BTreeSet<String> = r1.ctx.entries().iter().map(|(n, _)| n.clone()).collect();
    let (r2_ctx, ren) = rename_apart(&taken, &r2.ctx);
    let ren_owned: BTreeMap<String, String> = ren;
    let l2 = r2.lhs.rename_free(&ren_owned);

    let mut joint_entries = r1.ctx.entries().to_vec();
    joint_entries.extend(r2_ctx.entries().iter().cloned());
    let joint = Context::from_entries(joint_entries).expect("renamed apart");

    let mut out = Vec::new();
    let tps = typed_positions(&prs.sig, &r1.ctx, &r1.lhs).expect("rule sides are well-typed");
    for tp in tps {
        if tp.ty != r2.ty {
            continue;
        }
        if tp.pos.is_root() && (outer == inner || outer > inner) {
            continue;
        }
        let sub = subterm_at(&r1.lhs, &tp.pos).expect("enumerated position");
        if matches!(head_of(sub), Term::Var(_)) {
            continue;
        }
        let k = tp.binders.len();
        let levels = loose_levels(sub, k);
        let tys: Vec<_> = levels.iter().map(|&l| tp.binders[l].clone()).collect();
        let w1 = tys
            .iter()
            .rev()
            .fold(close_over(sub, &levels, k), |acc, ty| {
                Term::abs(ty.clone(), acc)
            });
        let w2 = tys
            .iter()
            .rev()
            .fold(l2.clone(), |acc, ty| Term::abs(ty.clone(), acc));
        match unify_patterns(&prs.sig, &joint, &w1, &w2) {
            Ok(Some(u)) => {
                let (ctx, mgu) = readable_fresh_names(&joint, u.ctx, u.subst);
                out.push(Overlap {
                    outer,
                    inner,
                    pos: tp.pos,
                    mgu,
                    ctx,
                });
            }
            Ok(None) => {}
            Err(e) => panic!("overlap unification on validated rules failed: {e}"),
        }
    }
    out
}

/// Renames the `$`-variables a unifier introduces to `w`, `w1`, ... so
/// peaks read naturally next to the rules' own variable names.
fn readable_fresh_names(joint: &Context, ctx: Context, mgu: Subst) -> (Context, Subst) {
    let mut taken: BTreeSet<String> = joint.entries().iter().map(|(n, _)| n.clone()).collect();
    taken.extend(
        ctx.entries()
            .iter()
            .filter(|(n, _)| !n.starts_with('$'))
            .map(|(n, _)| n.clone()),
    );
    let mut map: BTreeMap<String, String> = BTreeMap::new();
    let mut counter = 0usize;
    for (n, _) in ctx.entries() {
        if !n.starts_with('$') {
            continue;
        }
        loop {
            let cand = if counter == 0 {
                "w".to_string()
            } else {
                format!("w{counter}")
            };
            counter += 1;
            if !taken.contains(&cand) {
                taken.insert(cand.clone());
                map.insert(n.clone(), cand);
                break;
            }
        }
    }
    if map.is_empty() {
        return (ctx, mgu);
    }
    let entries: Vec<_> = ctx
        .entries()
        .iter()
        .map(|(n, t)| (map.get(n).unwrap_or(n).clone(), t.clone()))
        .collect();
    let ctx = Context::from_entries(entries).expect("renaming keeps names distinct");
    let mgu = mgu
        .iter()
        .map(|(k, v)| (k.to_string(), v.rename_free(&map)))
        .collect();
    (ctx, mgu)
}

fn peak_of_overlap(prs: &Prs, ov: &Overlap) -> CriticalPeak {
    let r1 = &prs.rules[ov.outer];
    let source = crate::normalize::eta_long_form(&prs.sig, &ov.ctx, &ov.mgu.apply(&r1.lhs))
        .expect("instantiated superposition is well-typed");
    let (left, left_step) = apply_rule_at(prs, &ov.ctx, &source, ov.outer, &Position::root())
        .expect("superposition rewrites by its outer rule at the root");
    let (right, right_step) = apply_rule_at(prs, &ov.ctx, &source, ov.inner, &ov.pos)
        .expect("superposition rewrites by its inner rule at the overlap position");
    canonicalize_peak(CriticalPeak {
        outer: ov.outer,
        inner: ov.inner,
        pos: ov.pos.clone(),
        mgu: ov.mgu.clone(),
        ctx: ov.ctx.clone(),
        source,
        left_step,
        left,
        right_step,
        right,
    })
}

/// Restricts the peak's context to the variables that occur, ordered by
/// first occurrence in (source, left, right).
fn canonicalize_peak(mut peak: CriticalPeak) -> CriticalPeak {
    let mut order: Vec<String> = Vec::new();
    for t in [&peak.source, &peak.left, &peak.right] {
        for v in first_occurrences(t) {
            if !order.contains(&v) {
                order.push(v);
            }
        }
    }
    let entries: Vec<_> = order
        .iter()
        .map(|v| {
            let ty = peak
                .ctx
                .type_of(v)
                .expect("peak variable is in the residual context")
                .clone();
            (v.clone(), ty)
        })
        .collect();
    peak.ctx = Context::from_entries(entries).expect("distinct names");
    peak
}

fn first_occurrences(t: &Term) -> Vec<String> {
    fn go(t: &Term, out: &mut Vec<String>) {
        match t {
            Term::Var(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            Term::Abs(_, b) => go(b, out),
            Term::App(a, b) | Term::Pair(a, b) => {
                go(a, out);
                go(b, out);
            }
            Term::Proj(_, a) => go(a, out),
            _ => {}
        }
    }
    let mut out = Vec::new();
    go(t, &mut out);
    out
}

/// Enumerates all critical peaks of the system: every ordered rule pair
/// (self-pairs included), deduplicated up to renaming of the peak's free
/// variables, in (outer, inner, position) order.
pub fn critical_pairs(prs: &Prs) -> Vec<CriticalPeak> {
    let mut peaks: Vec<CriticalPeak> = Vec::new();
    let mut seen: BTreeSet<Vec<Term>> = BTreeSet::new();
    for outer in 0..prs.rules.len() {
        for inner in 0..prs.rules.len() {
            for ov in find_overlaps(prs, outer, inner) {
                let peak = peak_of_overlap(prs, &ov);
                let key = canonical_rename(&[&peak.source, &peak.left, &peak.right]);
                if seen.insert(key) {
                    peaks.push(peak);
                }
            }
        }
    }
    peaks
}

/// Joinability verdict for one critical peak.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Joinable,
    NotJoinable,
    FuelExhausted,
}

#[derive(Clone, Debug)]
pub struct PeakReport {
    pub index: usize,
    pub verdict: Verdict,
    /// Normal forms of the two legs when available.
    pub nf_left: Option<Term>,
    pub nf_right: Option<Term>,
}

#[derive(Clone, Debug)]
pub struct ConfluenceReport {
    pub peaks: Vec<PeakReport>,
    /// `Some(true)` when every peak joins, `Some(false)` when one does
    /// not, `None` when fuel ran out before a decision.
    pub locally_confluent: Option<bool>,
}

/// Checks local confluence by normalizing both legs of every critical
/// peak: the system is locally confluent exactly when every critical
/// branching is joinable.
pub fn local_confluence_check(
    prs: &Prs,
    strategy: Strategy,
    fuel: usize,
) -> (Vec<CriticalPeak>, ConfluenceReport) {
    let peaks = critical_pairs(prs);
    let mut reports = Vec::new();
    for (index, peak) in peaks.iter().enumerate() {
        let left = normalize_with_trace(prs, &peak.ctx, &peak.left, strategy, fuel);
        let right = normalize_with_trace(prs, &peak.ctx, &peak.right, strategy, fuel);
        let report = match (left, right) {
            (Ok(l), Ok(r)) => PeakReport {
                index,
                verdict: if l.target == r.target {
                    Verdict::Joinable
                } else {
                    Verdict::NotJoinable
                },
                nf_left: Some(l.target),
                nf_right: Some(r.target),
            },
            (l, r) => PeakReport {
                index,
                verdict: Verdict::FuelExhausted,
                nf_left: l.ok().map(|t| t.target),
                nf_right: r.ok().map(|t| t.target),
            },
        };
        reports.push(report);
    }
    let locally_confluent = if reports.iter().any(|r| r.verdict == Verdict::NotJoinable) {
        Some(false)
    } else if reports.iter().any(|r| r.verdict == Verdict::FuelExhausted) {
        None
    } else {
        Some(true)
    };
    (
        peaks,
        ConfluenceReport {
            peaks: reports,
            locally_confluent,
        },
    )
}
