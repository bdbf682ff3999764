//! End-to-end checks on systems that use product types: depaired rule
//! contexts, pairs and projections in terms, and pattern variables applied
//! to projection chains of product-typed bound variables.

use hho_core::critical::{critical_pairs, local_confluence_check, Verdict};
use hho_core::homology::lower_bound;
use hho_core::parse::parse_file;
use hho_core::rewrite::{normalize_with_trace, validate_prs, Strategy, DEFAULT_FUEL};
use hho_core::term::{Proj, Term};
use hho_core::Context;

/// Negation over a pairing symbol: the rule context is a single
/// product-typed variable, so every computation runs on its depaired form.
const PAIRS: &str = r#"
sort U
sig not  : U -> U
sig pairf : U * U -> U
sig atomA : U
sig atomB : U

rule NotNot  : (x:U) |- not (not x) => x
rule NotPair : (z:U * U) |- not (pairf z) => pairf <pr2 z, pr1 z>
"#;

#[test]
fn product_context_rule_validates_and_rewrites() {
    let (_, prs) = parse_file(PAIRS).unwrap();
    let report = validate_prs(&prs);
    assert!(report.ok, "{report:?}");
    // the depaired context has two base-typed entries
    let rule = &prs.rules[1];
    assert_eq!(rule.ctx.len(), 2);
    assert!(rule.ctx.entries().iter().all(|(_, t)| !t.is_prod()));

    // not (pairf <atomA, atomB>) -> pairf <atomB, atomA>
    let ctx = Context::new();
    let t = Term::app(
        Term::cst("not"),
        Term::app(
            Term::cst("pairf"),
            Term::pair(Term::cst("atomA"), Term::cst("atomB")),
        ),
    );
    let trace =
        normalize_with_trace(&prs, &ctx, &t, Strategy::LeftmostOutermost, DEFAULT_FUEL).unwrap();
    assert_eq!(
        trace.target,
        Term::app(
            Term::cst("pairf"),
            Term::pair(Term::cst("atomB"), Term::cst("atomA")),
        )
    );
    assert_eq!(trace.steps.len(), 1);
}

#[test]
fn product_system_peaks_join_and_bound() {
    let (_, prs) = parse_file(PAIRS).unwrap();
    let peaks = critical_pairs(&prs);
    // the self-overlap of NotNot and NotNot over NotPair
    assert_eq!(peaks.len(), 2);
    let (_, report) = local_confluence_check(&prs, Strategy::LeftmostOutermost, DEFAULT_FUEL);
    assert!(report.peaks.iter().all(|p| p.verdict == Verdict::Joinable));

    let (bound, matrix) = lower_bound(&prs, Strategy::LeftmostOutermost, DEFAULT_FUEL).unwrap();
    assert_eq!(bound.rules, 2);
    assert_eq!(bound.peaks, 2);
    // the NotPair column is (1, -2): one NotNot against the doubled swap
    let j = matrix
        .columns
        .iter()
        .position(|c| prs.rules[c.peak.inner].name == "NotPair")
        .unwrap();
    let col: Vec<i64> = (0..2).map(|i| matrix.entries[i][j]).collect();
    assert_eq!(col, vec![1, -2]);
    assert_eq!(bound.rank, 1);
    assert_eq!(bound.bound, 1);
}

/// A pattern variable applied to a projection chain of a product-typed
/// bound variable: `p (pr1 w)` under the binder `\w : U * U`.
const CHAINS: &str = r#"
sort U
sig not  : U -> U
sig allp : (U * U -> U) -> U
sig atomA : U

rule NotNot : (x:U) |- not (not x) => x
rule PChain : (p:U -> U) |- not (allp (\w:U * U. p (pr1 w)))
           => allp (\w:U * U. not (p (pr1 w)))
"#;

#[test]
fn projection_chain_arguments_are_patterns() {
    let (_, prs) = parse_file(CHAINS).unwrap();
    let report = validate_prs(&prs);
    assert!(report.ok, "{report:?}");
}

#[test]
fn projection_chain_matching_and_normalization() {
    let (_, prs) = parse_file(CHAINS).unwrap();
    let ctx = Context::new();
    // not (allp (\w. not (not (pr1 w)))) needs PChain (binding p to a
    // chain-shaped function), then NotNot twice under the binder
    let body = |t: Term| Term::app(Term::cst("not"), t);
    let t = body(Term::app(
        Term::cst("allp"),
        Term::abs(
            hho_core::Type::prod(hho_core::Type::base("U"), hho_core::Type::base("U")),
            body(body(Term::proj(Proj::Fst, Term::Bound(0)))),
        ),
    ));
    let trace =
        normalize_with_trace(&prs, &ctx, &t, Strategy::LeftmostOutermost, DEFAULT_FUEL).unwrap();
    let names: Vec<&str> = trace.steps.iter().map(|s| s.rule.as_str()).collect();
    // PChain binds p to the full body \v. not (not v), pushing the outer
    // negation inside; the doubled negation then collapses under the
    // binder, leaving a single one
    assert_eq!(names, ["PChain", "NotNot"]);
    assert_eq!(
        trace.target,
        Term::app(
            Term::cst("allp"),
            Term::abs(
                hho_core::Type::prod(hho_core::Type::base("U"), hho_core::Type::base("U")),
                Term::app(Term::cst("not"), Term::proj(Proj::Fst, Term::Bound(0))),
            )
        )
    );
}

#[test]
fn projection_chain_system_bound() {
    let (_, prs) = parse_file(CHAINS).unwrap();
    let peaks = critical_pairs(&prs);
    assert_eq!(peaks.len(), 2, "{peaks:?}");
    let (bound, matrix) = lower_bound(&prs, Strategy::LeftmostOutermost, DEFAULT_FUEL).unwrap();
    // NotNot over PChain: left leg one NotNot; right leg PChain twice and
    // NotNot once; the NotNot contributions cancel
    let j = matrix
        .columns
        .iter()
        .position(|c| prs.rules[c.peak.inner].name == "PChain")
        .unwrap();
    let col: Vec<i64> = (0..2).map(|i| matrix.entries[i][j]).collect();
    assert_eq!(col, vec![0, -2]);
    assert_eq!(bound.rank, 1);
    assert_eq!(bound.bound, 1);
}
