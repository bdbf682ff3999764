//! The second boundary matrix of a complete pattern rewriting system, its
//! exact rank over the rationals, and the induced lower bound on the size
//! of any equivalent equation system.
//!
//! The matrix has one row per rule and one column per critical pair. For
//! a peak `t <- u -> s`, both legs are normalized along fixed rewriting
//! paths (the diverging step included); the (i,j) entry is the number of
//! times rule i is used on the left path minus the number of times on the
//! right path. The lower bound is `#rules - rank`: no equation system
//! equivalent to the input can have fewer equations.

use crate::critical::{critical_pairs, CriticalPeak};
use crate::rewrite::{normalize_with_trace, Prs, RewriteError, Strategy, Trace};
use num_bigint::BigInt;
use thiserror::Error;

/// One column's provenance: the peak and the two normalizing traces,
/// starting at the superposition and ending in the shared normal form.
#[derive(Clone, Debug)]
pub struct Column {
    pub id: String,
    pub peak: CriticalPeak,
    pub left: Trace,
    pub right: Trace,
}

/// Rows are rules in system order, columns critical pairs in enumeration
/// order; entries are exact integers.
#[derive(Clone, Debug)]
pub struct BoundaryMatrix {
    pub rule_names: Vec<String>,
    pub entries: Vec<Vec<i64>>,
    pub columns: Vec<Column>,
}

impl BoundaryMatrix {
    pub fn rows(&self) -> usize {
        self.rule_names.len()
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }
}

#[derive(Error, Debug)]
pub enum HomologyError {
    #[error("critical pair {peak} is not joinable; the system is not confluent")]
    NotJoinable { peak: String },
    #[error("fuel exhausted while normalizing critical pair {peak}")]
    FuelExhausted { peak: String },
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// Builds the second boundary matrix by normalizing both legs of every
/// critical peak under the given strategy.
pub fn build_d2(
    prs: &Prs,
    strategy: Strategy,
    fuel: usize,
) -> Result<BoundaryMatrix, HomologyError> {
    let peaks = critical_pairs(prs);
    let rule_names: Vec<String> = prs.rules.iter().map(|r| r.name.clone()).collect();
    let mut entries = vec![Vec::with_capacity(peaks.len()); rule_names.len()];
    let mut columns = Vec::with_capacity(peaks.len());
    for (j, peak) in peaks.into_iter().enumerate() {
        let id = format!("CP{}", j + 1);
        let fuelled = |r: Result<Trace, RewriteError>| match r {
            Ok(t) => Ok(t),
            Err(RewriteError::FuelExhausted { .. }) => {
                Err(HomologyError::FuelExhausted { peak: id.clone() })
            }
            Err(e) => Err(HomologyError::Rewrite(e)),
        };
        let tail_left = fuelled(normalize_with_trace(
            prs, &peak.ctx, &peak.left, strategy, fuel,
        ))?;
        let tail_right = fuelled(normalize_with_trace(
            prs,
            &peak.ctx,
            &peak.right,
            strategy,
            fuel,
        ))?;
        if tail_left.target != tail_right.target {
            return Err(HomologyError::NotJoinable { peak: id });
        }
        let with_step = |step: &crate::rewrite::RewriteStep, tail: &Trace| Trace {
            ctx: peak.ctx.clone(),
            source: peak.source.clone(),
            steps: std::iter::once(step.clone())
                .chain(tail.steps.iter().cloned())
                .collect(),
            target: tail.target.clone(),
        };
        let left = with_step(&peak.left_step, &tail_left);
        let right = with_step(&peak.right_step, &tail_right);
        let lc = left.rule_counts();
        let rc = right.rule_counts();
        for (i, name) in rule_names.iter().enumerate() {
            let n = *lc.get(name.as_str()).unwrap_or(&0) as i64;
            let m = *rc.get(name.as_str()).unwrap_or(&0) as i64;
            entries[i].push(n - m);
        }
        columns.push(Column {
            id,
            peak,
            left,
            right,
        });
    }
    Ok(BoundaryMatrix {
        rule_names,
        entries,
        columns,
    })
}

/// Exact rank over the rationals by fraction-free (Bareiss) elimination
/// with arbitrary-precision integers. No floating point is involved.
pub fn rational_rank(matrix: &[Vec<i64>]) -> usize {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut m: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let zero = BigInt::from(0);
    let mut prev = BigInt::from(1);
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| m[r][col] != zero) else {
            continue;
        };
        m.swap(row, p);
        for r in row + 1..rows {
            for c in col + 1..cols {
                let num = &m[row][col] * &m[r][c] - &m[r][col] * &m[row][c];
                debug_assert!((&num % &prev) == zero, "fraction-free step stays integral");
                m[r][c] = num / &prev;
            }
            m[r][col] = zero.clone();
        }
        prev = m[row][col].clone();
        row += 1;
    }
    row
}

/// Summary of the homological bound computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub rules: usize,
    pub peaks: usize,
    pub rank: usize,
    pub bound: usize,
}

/// The lower bound `#rules - rank(D2)` on the number of equations of any
/// system equivalent to the input. Requires all critical pairs joinable;
/// completeness of the system itself is the caller's assertion.
pub fn lower_bound(
    prs: &Prs,
    strategy: Strategy,
    fuel: usize,
) -> Result<(BoundReport, BoundaryMatrix), HomologyError> {
    let matrix = build_d2(prs, strategy, fuel)?;
    let rank = rational_rank(&matrix.entries);
    let report = BoundReport {
        rules: matrix.rows(),
        peaks: matrix.cols(),
        rank,
        bound: matrix.rows() - rank,
    };
    Ok((report, matrix))
}

/// One generator of the homotopy basis: the two parallel paths out of a
/// critical branching, each leg followed by its chosen normalization.
#[derive(Clone, Debug)]
pub struct HomotopyBasisEntry {
    pub id: String,
    pub left: Trace,
    pub right: Trace,
}

/// The homotopy basis a finite complete system obtains from its critical
/// branchings: exactly the data underlying the boundary matrix columns,
/// exported with full traces.
pub fn homotopy_basis(
    prs: &Prs,
    strategy: Strategy,
    fuel: usize,
) -> Result<Vec<HomotopyBasisEntry>, HomologyError> {
    let matrix = build_d2(prs, strategy, fuel)?;
    Ok(matrix
        .columns
        .into_iter()
        .map(|c| HomotopyBasisEntry {
            id: c.id,
            left: c.left,
            right: c.right,
        })
        .collect())
}
