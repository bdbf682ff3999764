//! Structured reports for the frontend commands, renderable as aligned
//! text or as stable JSON documents: fixed field sets, fixed key order
//! (struct order), fixed sequence orders. Identical inputs produce
//! byte-identical output.

use crate::critical::{ConfluenceReport, CriticalPeak, Verdict};
use crate::homology::{BoundReport, BoundaryMatrix, HomotopyBasisEntry};
use crate::parse::print_avoiding;
use crate::rewrite::{apply_rule_at, Prs, RewriteStep, Strategy, Trace, ValidationReport};
use crate::subst::Subst;
use crate::term::{Context, Term};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt::Write as _;

/// How boundary-matrix columns are oriented, printed with every matrix.
pub const ORIENTATION: &str =
    "entry = uses on the outer-rule (left) path minus uses on the inner-rule (right) path";

fn avoid_set(prs: &Prs) -> BTreeSet<String> {
    let mut avoid: BTreeSet<String> = prs.sig.symbols().iter().map(|(n, _)| n.clone()).collect();
    avoid.extend(prs.sig.sorts().iter().cloned());
    avoid
}

pub struct Printer<'a> {
    prs: &'a Prs,
    avoid: BTreeSet<String>,
}

impl<'a> Printer<'a> {
    pub fn new(prs: &'a Prs) -> Printer<'a> {
        Printer {
            prs,
            avoid: avoid_set(prs),
        }
    }

    pub fn term(&self, t: &Term) -> String {
        print_avoiding(t, &self.avoid)
    }

    fn subst(&self, s: &Subst) -> Vec<Binding> {
        s.iter()
            .map(|(var, t)| Binding {
                var: var.to_string(),
                term: self.term(t),
            })
            .collect()
    }

    fn step(&self, ctx: &Context, before: &Term, step: &RewriteStep) -> (Step, Term) {
        let (idx, _) = self
            .prs
            .rule(&step.rule)
            .expect("traced step names a system rule");
        let (after, _) = apply_rule_at(self.prs, ctx, before, idx, &step.pos)
            .expect("traced step replays on its source");
        (
            Step {
                rule: step.rule.clone(),
                dir: step.dir.to_string(),
                position: step.pos.to_string(),
                subst: self.subst(&step.subst),
                result: self.term(&after),
            },
            after,
        )
    }

    pub fn trace(&self, trace: &Trace) -> TraceOut {
        let mut steps = Vec::new();
        let mut current = trace.source.clone();
        for s in &trace.steps {
            let (out, next) = self.step(&trace.ctx, &current, s);
            steps.push(out);
            current = next;
        }
        debug_assert_eq!(current, trace.target);
        TraceOut {
            context: trace.ctx.to_string(),
            source: self.term(&trace.source),
            steps,
            target: self.term(&trace.target),
        }
    }

    pub fn peak(&self, id: &str, peak: &CriticalPeak) -> PeakOut {
        PeakOut {
            id: id.to_string(),
            outer_rule: self.prs.rules[peak.outer].name.clone(),
            inner_rule: self.prs.rules[peak.inner].name.clone(),
            position: peak.pos.to_string(),
            context: peak.ctx.to_string(),
            superposition: self.term(&peak.source),
            left: self.term(&peak.left),
            right: self.term(&peak.right),
            mgu: self.subst(&peak.mgu),
        }
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct Binding {
    pub var: String,
    pub term: String,
}

#[derive(Serialize, Clone, Debug)]
pub struct Step {
    pub rule: String,
    pub dir: String,
    pub position: String,
    pub subst: Vec<Binding>,
    pub result: String,
}

#[derive(Serialize, Clone, Debug)]
pub struct TraceOut {
    pub context: String,
    pub source: String,
    pub steps: Vec<Step>,
    pub target: String,
}

#[derive(Serialize, Clone, Debug)]
pub struct PeakOut {
    pub id: String,
    pub outer_rule: String,
    pub inner_rule: String,
    pub position: String,
    pub context: String,
    pub superposition: String,
    pub left: String,
    pub right: String,
    pub mgu: Vec<Binding>,
}

// ---------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------

#[derive(Serialize, Clone, Debug)]
pub struct RuleFindingsOut {
    pub rule: String,
    pub lhs_is_pattern: bool,
    pub rhs_vars_in_lhs: bool,
    pub multisets_equal: bool,
    pub base_type: bool,
    pub sides_normal: bool,
    pub ok: bool,
}

#[derive(Serialize, Clone, Debug)]
pub struct ValidationOut {
    pub report: String,
    pub ok: bool,
    pub rules: Vec<RuleFindingsOut>,
    pub reversed_duplicates: Vec<[String; 2]>,
}

pub fn validation_out(report: &ValidationReport) -> ValidationOut {
    ValidationOut {
        report: "validation".to_string(),
        ok: report.ok,
        rules: report
            .rules
            .iter()
            .map(|r| RuleFindingsOut {
                rule: r.rule.clone(),
                lhs_is_pattern: r.lhs_is_pattern,
                rhs_vars_in_lhs: r.rhs_vars_in_lhs,
                multisets_equal: r.multisets_equal,
                base_type: r.base_type,
                sides_normal: r.sides_normal,
                ok: r.ok(),
            })
            .collect(),
        reversed_duplicates: report
            .reversed_duplicates
            .iter()
            .map(|(a, b)| [a.clone(), b.clone()])
            .collect(),
    }
}

pub fn validation_text(out: &ValidationOut) -> String {
    let mut s = String::new();
    let mark = |b: bool| if b { "ok" } else { "FAIL" };
    for r in &out.rules {
        let _ = writeln!(
            s,
            "rule {}: pattern lhs: {}; rhs vars in lhs: {}; equal multisets: {}; base type: {}; normal sides: {}",
            r.rule,
            mark(r.lhs_is_pattern),
            mark(r.rhs_vars_in_lhs),
            mark(r.multisets_equal),
            mark(r.base_type),
            mark(r.sides_normal),
        );
    }
    if out.reversed_duplicates.is_empty() {
        let _ = writeln!(s, "reversed duplicates: none");
    } else {
        for [a, b] in &out.reversed_duplicates {
            let _ = writeln!(s, "reversed duplicate: {a} is the reverse of {b}");
        }
    }
    let _ = writeln!(s, "validation: {}", if out.ok { "pass" } else { "fail" });
    s
}

// ---------------------------------------------------------------------
// cps
// ---------------------------------------------------------------------

#[derive(Serialize, Clone, Debug)]
pub struct CpsOut {
    pub report: String,
    pub count: usize,
    pub peaks: Vec<PeakOut>,
}

pub fn cps_out(prs: &Prs, peaks: &[CriticalPeak]) -> CpsOut {
    let p = Printer::new(prs);
    CpsOut {
        report: "critical-pairs".to_string(),
        count: peaks.len(),
        peaks: peaks
            .iter()
            .enumerate()
            .map(|(i, peak)| p.peak(&format!("CP{}", i + 1), peak))
            .collect(),
    }
}

pub fn cps_text(out: &CpsOut) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "critical pairs: {}", out.count);
    for p in &out.peaks {
        let _ = writeln!(
            s,
            "{}: {} over {} at {}",
            p.id, p.outer_rule, p.inner_rule, p.position
        );
        let _ = writeln!(s, "  context:       {}", p.context);
        let _ = writeln!(s, "  superposition: {}", p.superposition);
        let _ = writeln!(s, "  left  ({} at []): {}", p.outer_rule, p.left);
        let _ = writeln!(
            s,
            "  right ({} at {}): {}",
            p.inner_rule, p.position, p.right
        );
    }
    s
}

// ---------------------------------------------------------------------
// confluence
// ---------------------------------------------------------------------

#[derive(Serialize, Clone, Debug)]
pub struct ConfluencePeakOut {
    pub id: String,
    pub superposition: String,
    pub verdict: String,
    pub nf_left: Option<String>,
    pub nf_right: Option<String>,
}

#[derive(Serialize, Clone, Debug)]
pub struct ConfluenceOut {
    pub report: String,
    pub fuel: usize,
    pub locally_confluent: Option<bool>,
    pub peaks: Vec<ConfluencePeakOut>,
}

pub fn confluence_out(
    prs: &Prs,
    peaks: &[CriticalPeak],
    report: &ConfluenceReport,
    fuel: usize,
) -> ConfluenceOut {
    let p = Printer::new(prs);
    ConfluenceOut {
        report: "confluence".to_string(),
        fuel,
        locally_confluent: report.locally_confluent,
        peaks: report
            .peaks
            .iter()
            .map(|r| ConfluencePeakOut {
                id: format!("CP{}", r.index + 1),
                superposition: p.term(&peaks[r.index].source),
                verdict: match r.verdict {
                    Verdict::Joinable => "joinable".to_string(),
                    Verdict::NotJoinable => "not joinable".to_string(),
                    Verdict::FuelExhausted => "fuel exhausted".to_string(),
                },
                nf_left: r.nf_left.as_ref().map(|t| p.term(t)),
                nf_right: r.nf_right.as_ref().map(|t| p.term(t)),
            })
            .collect(),
    }
}

pub fn confluence_text(out: &ConfluenceOut) -> String {
    let mut s = String::new();
    for p in &out.peaks {
        match (&p.nf_left, &p.nf_right) {
            (Some(l), Some(r)) if p.verdict == "joinable" => {
                let _ = writeln!(
                    s,
                    "{}: {} -- joinable, normal form {}",
                    p.id, p.superposition, l
                );
                let _ = r;
            }
            (Some(l), Some(r)) => {
                let _ = writeln!(
                    s,
                    "{}: {} -- {}: left normalizes to {} but right to {}",
                    p.id, p.superposition, p.verdict, l, r
                );
            }
            _ => {
                let _ = writeln!(s, "{}: {} -- {}", p.id, p.superposition, p.verdict);
            }
        }
    }
    let verdict = match out.locally_confluent {
        Some(true) => "locally confluent",
        Some(false) => "not locally confluent",
        None => "undecided (fuel exhausted)",
    };
    let _ = writeln!(s, "verdict: {verdict}");
    s
}

// ---------------------------------------------------------------------
// bound
// ---------------------------------------------------------------------

#[derive(Serialize, Clone, Debug)]
pub struct BoundOut {
    pub report: String,
    pub strategy: String,
    pub fuel: usize,
    pub orientation: String,
    pub rules: Vec<String>,
    pub peaks: Vec<PeakOut>,
    pub matrix: Vec<Vec<i64>>,
    pub rank: usize,
    pub bound: usize,
}

pub fn bound_out(
    prs: &Prs,
    strategy: Strategy,
    fuel: usize,
    report: &BoundReport,
    matrix: &BoundaryMatrix,
) -> BoundOut {
    let p = Printer::new(prs);
    BoundOut {
        report: "bound".to_string(),
        strategy: strategy.to_string(),
        fuel,
        orientation: ORIENTATION.to_string(),
        rules: matrix.rule_names.clone(),
        peaks: matrix
            .columns
            .iter()
            .map(|c| p.peak(&c.id, &c.peak))
            .collect(),
        matrix: matrix.entries.clone(),
        rank: report.rank,
        bound: report.bound,
    }
}

pub fn bound_text(out: &BoundOut) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "rules: {}", out.rules.len());
    let _ = writeln!(s, "critical pairs: {}", out.peaks.len());
    let _ = writeln!(s, "strategy: {}", out.strategy);
    for p in &out.peaks {
        let _ = writeln!(
            s,
            "{}: superposition {} ({} over {} at {})",
            p.id, p.superposition, p.outer_rule, p.inner_rule, p.position
        );
    }
    if !out.rules.is_empty() && !out.peaks.is_empty() {
        let _ = writeln!(s, "second boundary matrix ({}):", out.orientation);
        let name_w = out.rules.iter().map(String::len).max().unwrap_or(0);
        let mut cells: Vec<Vec<String>> = Vec::new();
        let header: Vec<String> = out.peaks.iter().map(|p| p.id.clone()).collect();
        for row in &out.matrix {
            cells.push(row.iter().map(|v| v.to_string()).collect());
        }
        let col_w: Vec<usize> = header
            .iter()
            .enumerate()
            .map(|(j, h)| {
                cells
                    .iter()
                    .map(|r| r[j].len())
                    .chain([h.len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut line = format!("{:name_w$}", "");
        for (j, h) in header.iter().enumerate() {
            let _ = write!(line, "  {:>w$}", h, w = col_w[j]);
        }
        let _ = writeln!(s, "{line}");
        for (i, name) in out.rules.iter().enumerate() {
            let mut line = format!("{name:name_w$}");
            for (j, cell) in cells[i].iter().enumerate() {
                let _ = write!(line, "  {:>w$}", cell, w = col_w[j]);
            }
            let _ = writeln!(s, "{line}");
        }
    }
    let _ = writeln!(s, "rank: {}", out.rank);
    let _ = writeln!(s, "lower bound: {}", out.bound);
    s
}

// ---------------------------------------------------------------------
// basis
// ---------------------------------------------------------------------

#[derive(Serialize, Clone, Debug)]
pub struct BasisEntryOut {
    pub id: String,
    pub left: TraceOut,
    pub right: TraceOut,
}

#[derive(Serialize, Clone, Debug)]
pub struct BasisOut {
    pub report: String,
    pub strategy: String,
    pub fuel: usize,
    pub entries: Vec<BasisEntryOut>,
}

pub fn basis_out(
    prs: &Prs,
    strategy: Strategy,
    fuel: usize,
    basis: &[HomotopyBasisEntry],
) -> BasisOut {
    let p = Printer::new(prs);
    BasisOut {
        report: "basis".to_string(),
        strategy: strategy.to_string(),
        fuel,
        entries: basis
            .iter()
            .map(|e| BasisEntryOut {
                id: e.id.clone(),
                left: p.trace(&e.left),
                right: p.trace(&e.right),
            })
            .collect(),
    }
}

fn trace_text(s: &mut String, label: &str, t: &TraceOut) {
    let _ = writeln!(s, "  {label}: {}", t.source);
    for step in &t.steps {
        let _ = writeln!(
            s,
            "    --{} {} at {}--> {}",
            step.dir, step.rule, step.position, step.result
        );
    }
}

pub fn basis_text(out: &BasisOut) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "homotopy basis entries: {}", out.entries.len());
    for e in &out.entries {
        let _ = writeln!(s, "{}:", e.id);
        trace_text(&mut s, "left ", &e.left);
        trace_text(&mut s, "right", &e.right);
    }
    s
}

// ---------------------------------------------------------------------
// normalize
// ---------------------------------------------------------------------

#[derive(Serialize, Clone, Debug)]
pub struct NormalizeOut {
    pub report: String,
    pub strategy: String,
    pub fuel: usize,
    pub trace: TraceOut,
}

pub fn normalize_out(prs: &Prs, strategy: Strategy, fuel: usize, trace: &Trace) -> NormalizeOut {
    let p = Printer::new(prs);
    NormalizeOut {
        report: "normalize".to_string(),
        strategy: strategy.to_string(),
        fuel,
        trace: p.trace(trace),
    }
}

pub fn normalize_text(out: &NormalizeOut) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "input: {} |- {}", out.trace.context, out.trace.source);
    for step in &out.trace.steps {
        let _ = writeln!(
            s,
            "  --{} at {}--> {}",
            step.rule, step.position, step.result
        );
    }
    let _ = writeln!(s, "steps: {}", out.trace.steps.len());
    let _ = writeln!(s, "normal form: {}", out.trace.target);
    s
}

// ---------------------------------------------------------------------
// replay
// ---------------------------------------------------------------------

#[derive(Serialize, Clone, Debug)]
pub struct ReplayOut {
    pub report: String,
    pub context: String,
    pub source: String,
    pub steps: Vec<Step>,
    pub final_term: String,
}

pub fn replay_out(
    prs: &Prs,
    ctx: &Context,
    source: &Term,
    steps: &[(RewriteStep, Term)],
    final_term: &Term,
) -> ReplayOut {
    let p = Printer::new(prs);
    ReplayOut {
        report: "replay".to_string(),
        context: ctx.to_string(),
        source: p.term(source),
        steps: steps
            .iter()
            .map(|(step, after)| Step {
                rule: step.rule.clone(),
                dir: step.dir.to_string(),
                position: step.pos.to_string(),
                subst: p.subst(&step.subst),
                result: p.term(after),
            })
            .collect(),
        final_term: p.term(final_term),
    }
}

pub fn replay_text(out: &ReplayOut) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "source: {} |- {}", out.context, out.source);
    for step in &out.steps {
        let _ = writeln!(
            s,
            "  --{} {} at {}--> {}",
            step.dir, step.rule, step.position, step.result
        );
    }
    let _ = writeln!(s, "derivation verified; final term: {}", out.final_term);
    s
}
