//! Acceptance suite: one test per criterion, each printing a pass line
//! with the measured facts. Everything here is exact; no tolerances.

mod common;

use common::*;
use hho_core::critical::{critical_pairs, local_confluence_check, Verdict};
use hho_core::homology::lower_bound;
use hho_core::normalize::{beta_delta_normalize, beta_delta_normalize_innermost, eta_long_form};
use hho_core::parse::{parse_file, parse_script};
use hho_core::pattern::unify_patterns;
use hho_core::rewrite::{
    normalize_with_trace, replay_derivation, rewrite_once, validate_prs, Strategy, DEFAULT_FUEL,
};
use hho_core::term::{canonical_rename, positions, splice_at, subterm_at, Context, Term, Type};
use hho_core::typing::typecheck;
use hho_core::Subst;
use std::time::Instant;

#[test]
fn criterion_1_nnf_end_to_end() {
    let start = Instant::now();
    let (_, prs) = parse_file(NNF).expect("system parses");
    assert!(validate_prs(&prs).ok);
    let peaks = critical_pairs(&prs);
    assert_eq!(peaks.len(), 5, "expected exactly 5 critical peaks");

    // superpositions match the five known peaks up to renaming
    let not = |t| Term::app(Term::cst("not"), t);
    let quant = |q: &str| {
        Term::app(
            Term::cst(q),
            Term::abs(v(), Term::app(Term::var("p"), Term::Bound(0))),
        )
    };
    let expected = [
        not(not(not(Term::var("x")))),
        not(not(Term::apps(
            Term::cst("and"),
            [Term::var("x"), Term::var("y")],
        ))),
        not(not(Term::apps(
            Term::cst("or"),
            [Term::var("x"), Term::var("y")],
        ))),
        not(not(quant("all"))),
        not(not(quant("ex"))),
    ];
    for e in &expected {
        assert!(
            peaks
                .iter()
                .any(|p| canonical_rename(&[&p.source]) == canonical_rename(&[e])),
            "missing superposition {e}"
        );
    }

    let (report, _) = lower_bound(&prs, Strategy::LeftmostOutermost, DEFAULT_FUEL).unwrap();
    assert_eq!(report.rank, 2, "rank of the boundary matrix");
    assert_eq!(report.bound, 3, "homological lower bound");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "PASS criterion 1: 5 peaks, rank 2, bound 3 in {:?}",
        elapsed
    );
}

#[test]
fn criterion_2_matrix_column_structure() {
    let (_, prs) = parse_file(NNF).unwrap();
    let (_, matrix) = lower_bound(&prs, Strategy::LeftmostOutermost, DEFAULT_FUEL).unwrap();
    // rows are NotNot, NotAnd, NotOr, NotAll, NotEx in system order
    assert_eq!(
        matrix.rule_names,
        ["NotNot", "NotAnd", "NotOr", "NotAll", "NotEx"]
    );
    let col = |j: usize| -> Vec<i64> { (0..5).map(|i| matrix.entries[i][j]).collect() };
    let support = |c: &[i64]| -> Vec<usize> {
        c.iter()
            .enumerate()
            .filter(|(_, x)| **x != 0)
            .map(|(i, _)| i)
            .collect()
    };
    // identify columns by their peak's inner rule
    let mut by_inner = std::collections::BTreeMap::new();
    for (j, c) in matrix.columns.iter().enumerate() {
        by_inner.insert(prs.rules[c.peak.inner].name.clone(), j);
    }
    let self_col = col(by_inner["NotNot"]);
    assert_eq!(self_col, vec![0; 5], "the self-overlap column is zero");
    for inner in ["NotAnd", "NotOr"] {
        let c = col(by_inner[inner]);
        assert_eq!(support(&c), vec![0, 1, 2], "{inner} column support");
        assert!(c.iter().all(|v| v.abs() == 1 || *v == 0), "unit magnitudes");
    }
    for inner in ["NotAll", "NotEx"] {
        let c = col(by_inner[inner]);
        assert_eq!(support(&c), vec![3, 4], "{inner} column support");
        assert!(c.iter().all(|v| v.abs() == 1 || *v == 0), "unit magnitudes");
    }
    println!("PASS criterion 2: column supports and magnitudes as required");
}

#[test]
fn criterion_3_derivation_replay() {
    // not (and x y) <-NotNot* not (not not x and not not y)
    //               <-NotOr   not (not (or (not x) (not y)))
    //               ->NotNot  or (not x) (not y)
    // over the subsystem {NotNot, NotOr, NotEx}
    let sub = r#"
sort U
sort V
sig not : U -> U
sig and : U -> U -> U
sig or  : U -> U -> U
sig all : (V -> U) -> U
sig ex  : (V -> U) -> U
rule NotNot : (x:U) |- not (not x) => x
rule NotOr  : (x:U, y:U) |- not (or x y)  => and (not x) (not y)
rule NotEx  : (p:V -> U) |- not (ex (\z:V. p z))  => all (\z:V. not (p z))
"#;
    let (_, prs) = parse_file(sub).unwrap();
    let script = "\
term (x:U, y:U) |- not (and x y)
bwd NotNot at [2,1,2]
bwd NotNot at [2,2]
bwd NotOr at [2]
fwd NotNot at []
";
    let (ctx, term, steps) = parse_script(&prs.sig, script).unwrap();
    let (final_term, done) = replay_derivation(&prs, &ctx, &term, &steps).expect("chain replays");
    assert_eq!(done.len(), 4);
    let expected = Term::apps(
        Term::cst("or"),
        [
            Term::app(Term::cst("not"), Term::var("x")),
            Term::app(Term::cst("not"), Term::var("y")),
        ],
    );
    assert_eq!(final_term, expected);
    println!("PASS criterion 3: derivation chain verified, final term or (not x) (not y)");
}

#[test]
fn criterion_4_local_confluence() {
    let (_, prs) = parse_file(NNF).unwrap();
    let (peaks, report) = local_confluence_check(&prs, Strategy::LeftmostOutermost, DEFAULT_FUEL);
    assert_eq!(peaks.len(), 5);
    assert!(report.peaks.iter().all(|p| p.verdict == Verdict::Joinable));
    assert_eq!(report.locally_confluent, Some(true));

    // a conflicting pair of rules yields a non-joinable peak (the exit
    // code is exercised in the frontend suite)
    let bad =
        "sort U\nsig c : U\nsig a : U\nsig b : U\nrule CA : () |- c => a\nrule CB : () |- c => b\n";
    let (_, prs) = parse_file(bad).unwrap();
    assert!(validate_prs(&prs).ok);
    let (peaks, report) = local_confluence_check(&prs, Strategy::LeftmostOutermost, DEFAULT_FUEL);
    assert_eq!(peaks.len(), 1);
    assert_eq!(report.locally_confluent, Some(false));
    println!("PASS criterion 4: all 5 peaks joinable; conflicting system detected");
}

#[test]
fn criterion_5_strategy_invariance() {
    let (_, prs) = parse_file(NNF).unwrap();
    let (lo, _) = lower_bound(&prs, Strategy::LeftmostOutermost, DEFAULT_FUEL).unwrap();
    let (ri, _) = lower_bound(&prs, Strategy::RightmostInnermost, DEFAULT_FUEL).unwrap();
    assert_eq!(lo.rank, 2);
    assert_eq!(ri.rank, 2);
    assert_eq!(lo.bound, 3);
    assert_eq!(ri.bound, 3);
    println!("PASS criterion 5: both strategies give rank 2, bound 3");
}

#[test]
fn criterion_6a_type_preservation() {
    let start = Instant::now();
    let prs = nnf_with_atoms();
    let ctx = gen_ctx();
    let mut r = rng(601);
    let mut rewrites = 0usize;
    for i in 0..1000 {
        // half the samples at the formula sort, where the rules live
        let ty = if i % 2 == 1 { u() } else { gen_type(&mut r, 2) };
        let t = gen_term(&mut r, &prs.sig, &ctx, &mut Vec::new(), &ty, 5);
        assert_eq!(
            typecheck(&prs.sig, &ctx, &t).unwrap(),
            ty,
            "generator is type-correct"
        );
        if i % 2 == 0 {
            // canonical normal form preserves the type
            let long = eta_long_form(&prs.sig, &ctx, &t).unwrap();
            assert_eq!(typecheck(&prs.sig, &ctx, &long).unwrap(), ty);
        } else {
            // a rewrite step (when one exists) preserves the type
            if let Some((next, _)) =
                rewrite_once(&prs, &ctx, &t, Strategy::LeftmostOutermost).unwrap()
            {
                rewrites += 1;
                assert_eq!(typecheck(&prs.sig, &ctx, &next).unwrap(), ty);
            }
        }
    }
    assert!(
        rewrites > 50,
        "sampled terms exercise the rewrite relation: only {rewrites} rewrites"
    );
    println!(
        "PASS criterion 6a: 1000 normalization/rewrite calls preserve types ({rewrites} rewrites) in {:?}",
        start.elapsed()
    );
}

#[test]
fn criterion_6b_beta_delta_confluence() {
    let start = Instant::now();
    let prs = nnf_with_atoms();
    let ctx = gen_ctx();
    let mut r = rng(602);
    for _ in 0..500 {
        let ty = gen_type(&mut r, 2);
        let t = gen_term(&mut r, &prs.sig, &ctx, &mut Vec::new(), &ty, 5);
        let a = beta_delta_normalize(&t);
        let b = beta_delta_normalize_innermost(&t);
        assert_eq!(a, b, "two redex orders agree on {t}");
    }
    println!(
        "PASS criterion 6b: 500 terms, two redex orders, alpha-equal normal forms in {:?}",
        start.elapsed()
    );
}

#[test]
fn criterion_6c_pattern_unification() {
    let start = Instant::now();
    let prs = nnf_with_atoms();
    let mut r = rng(603);
    let mut unified = 0usize;
    let mut checked_ground = 0usize;

    // first-order half: brute-force factorization over a 2-atom universe
    for _ in 0..100 {
        let lvars = ["m1", "m2"];
        let rvars = ["n1", "n2"];
        let l = gen_fo_pattern(&mut r, &lvars, 2);
        let rt = gen_fo_pattern(&mut r, &rvars, 2);
        let mut entries: Vec<(String, Type)> = Vec::new();
        for name in lvars.iter().chain(rvars.iter()) {
            entries.push((name.to_string(), u()));
        }
        let ctx = Context::from_entries(entries).unwrap();
        let mgu = unify_patterns(&prs.sig, &ctx, &l, &rt).expect("patterns are patterns");

        let problem_vars: Vec<&str> = ctx.entries().iter().map(|(n, _)| n.as_str()).collect();
        for sigma in ground_assignments(&problem_vars) {
            let is_unifier = bd_equal(&sigma.apply(&l), &sigma.apply(&rt));
            match &mgu {
                None => assert!(!is_unifier, "missed unifier of {l} and {rt}"),
                Some(uni) => {
                    if !is_unifier {
                        continue;
                    }
                    checked_ground += 1;
                    // sigma factors through the mgu: some ground assignment
                    // to the residual variables reproduces it
                    let residual: Vec<&str> =
                        uni.ctx.entries().iter().map(|(n, _)| n.as_str()).collect();
                    let factors = ground_assignments(&residual).iter().any(|rho| {
                        problem_vars.iter().all(|x| {
                            let via = rho
                                .apply(&uni.subst.get(x).cloned().unwrap_or_else(|| Term::var(*x)));
                            bd_equal(&via, &sigma.apply(&Term::var(*x)))
                        })
                    });
                    assert!(factors, "{sigma} does not factor through {}", uni.subst);
                }
            }
        }
        if mgu.is_some() {
            unified += 1;
        }
    }

    // higher-order half: soundness and idempotence
    for _ in 0..100 {
        let lvars = vec![
            ("m1".to_string(), Type::arrow(v(), u())),
            ("m2".to_string(), u()),
        ];
        let rvars = vec![
            ("n1".to_string(), Type::arrow(v(), u())),
            ("n2".to_string(), u()),
        ];
        let l = gen_ho_pattern(&mut r, &lvars, 0, 3);
        let rt = gen_ho_pattern(&mut r, &rvars, 0, 3);
        let mut entries = lvars.clone();
        entries.extend(rvars.clone());
        let ctx = Context::from_entries(entries).unwrap();
        if let Some(uni) = unify_patterns(&prs.sig, &ctx, &l, &rt).expect("pattern inputs") {
            unified += 1;
            // soundness
            let ls = beta_delta_normalize(&uni.subst.apply(&l));
            let rs = beta_delta_normalize(&uni.subst.apply(&rt));
            assert_eq!(ls, rs, "unifier fails to unify {l} and {rt}");
            // idempotence
            for (x, val) in uni.subst.iter() {
                let once = beta_delta_normalize(val);
                let twice = beta_delta_normalize(&uni.subst.apply(val));
                assert_eq!(once, twice, "not idempotent on {x}");
            }
        }
    }
    assert!(
        unified >= 40,
        "enough problems unify to be meaningful: {unified}"
    );
    assert!(
        checked_ground >= 100,
        "ground factorization exercised: {checked_ground}"
    );
    println!(
        "PASS criterion 6c: 200 pattern problems ({unified} unifiable, {checked_ground} ground factorizations) in {:?}",
        start.elapsed()
    );
}

#[test]
fn criterion_6d_subterm_replace_round_trip() {
    let start = Instant::now();
    let prs = nnf_with_atoms();
    let ctx = gen_ctx();
    let mut r = rng(604);
    for _ in 0..1000 {
        let ty = gen_type(&mut r, 2);
        let t = gen_term(&mut r, &prs.sig, &ctx, &mut Vec::new(), &ty, 4);
        let pos = gen_position(&mut r, &t);
        let sub = subterm_at(&t, &pos).unwrap().clone();
        let back = splice_at(&t, &pos, sub).unwrap();
        assert_eq!(back, t);
    }
    println!(
        "PASS criterion 6d: 1000 subterm/replace round trips in {:?}",
        start.elapsed()
    );
}

#[test]
fn criterion_6e_trivial_bounds() {
    let (_, empty) = parse_file("").unwrap();
    let (report, _) = lower_bound(&empty, Strategy::LeftmostOutermost, DEFAULT_FUEL).unwrap();
    assert_eq!(report.bound, 0);

    let single = "sort U\nsig not : U -> U\nrule Drop : (x:U) |- not x => x\n";
    let (_, prs) = parse_file(single).unwrap();
    let (report, matrix) = lower_bound(&prs, Strategy::LeftmostOutermost, DEFAULT_FUEL).unwrap();
    assert_eq!(matrix.cols(), 0);
    assert_eq!(report.rank, 0);
    assert_eq!(report.bound, 1);
    println!("PASS criterion 6e: empty system bound 0, single non-overlapping rule bound 1");
}

// Additional exactness checks backing criterion 1: the normalization
// traces named by the peak diagrams.
#[test]
fn fig_edges_normalize_as_labelled() {
    let (_, prs) = parse_file(NNF).unwrap();
    let ctx = Context::from_entries([
        ("x".to_string(), u()),
        ("y".to_string(), u()),
        ("p".to_string(), Type::arrow(v(), u())),
    ])
    .unwrap();
    let not = |t| Term::app(Term::cst("not"), t);
    // not (or (not x) (not y)) normalizes by NotOr, NotNot, NotNot
    let t = not(Term::apps(
        Term::cst("or"),
        [not(Term::var("x")), not(Term::var("y"))],
    ));
    let trace =
        normalize_with_trace(&prs, &ctx, &t, Strategy::LeftmostOutermost, DEFAULT_FUEL).unwrap();
    let names: Vec<&str> = trace.steps.iter().map(|s| s.rule.as_str()).collect();
    assert_eq!(names, ["NotOr", "NotNot", "NotNot"]);
    // not (ex (\z. not (p z))) normalizes by NotEx, NotNot
    let t = not(Term::app(
        Term::cst("ex"),
        Term::abs(v(), not(Term::app(Term::var("p"), Term::Bound(0)))),
    ));
    let trace =
        normalize_with_trace(&prs, &ctx, &t, Strategy::LeftmostOutermost, DEFAULT_FUEL).unwrap();
    let names: Vec<&str> = trace.steps.iter().map(|s| s.rule.as_str()).collect();
    assert_eq!(names, ["NotEx", "NotNot"]);
}

// The bound is tight on this example: the replayed subsystem has exactly
// `bound` rules.
#[test]
fn bound_is_tight_on_the_example() {
    let (_, prs) = parse_file(NNF).unwrap();
    let (report, _) = lower_bound(&prs, Strategy::LeftmostOutermost, DEFAULT_FUEL).unwrap();
    assert_eq!(report.bound, 3); // {NotNot, NotOr, NotEx} derives the rest
}

// Sanity for the generators themselves: positions enumerate in preorder
// and generated substitutions are type-correct.
#[test]
fn generator_sanity() {
    let prs = nnf_with_atoms();
    let ctx = gen_ctx();
    let mut r = rng(605);
    for _ in 0..50 {
        let t = gen_term(&mut r, &prs.sig, &ctx, &mut Vec::new(), &u(), 4);
        let ps = positions(&t);
        assert!(!ps.is_empty());
        assert_eq!(ps[0], hho_core::Position::root());
        let _ = Subst::new();
    }
}
