//! Difference distribution tables and differential uniformity.
//!
//! delta(f) = max over alpha != 0 and beta of the number of solutions x to
//! f(x+alpha) + f(x) = beta. Three paths are provided: the exhaustive O(q^2)
//! scan, an O(q) fast path for monomials (every row of the table of x^d is a
//! scaled copy of the alpha=1 row), and a seeded row-sampling mode for fields
//! where O(q^2) is out of reach. Sampled reports are lower bounds and say so
//! in their `mode` field.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspace::PolyFunc;
use crate::gf2m::{Elt, Field, FieldDesc};
use crate::rng::SplitMix64;

/// Cap for the exhaustive O(q^2) scan.
pub const EXHAUSTIVE_M_MAX: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DdtMode {
    #[serde(rename = "exhaustive")]
    Exhaustive,
    #[serde(rename = "monomial-fast")]
    MonomialFast,
    #[serde(rename = "sampled")]
    Sampled,
}

/// One row of the difference distribution table: solution counts per beta
/// for a fixed nonzero alpha. Zero counts are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DdtRow {
    pub alpha: Elt,
    pub counts: BTreeMap<Elt, u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub alpha: Elt,
    pub beta: Elt,
}

/// Result of a uniformity computation. In `Exhaustive` and `MonomialFast`
/// modes `delta` is exact; in `Sampled` mode it is a lower bound over the
/// rows examined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DdtReport {
    pub delta: u32,
    pub witness: Witness,
    /// count value -> number of (alpha, beta) cells with that count, over
    /// the rows examined (the alpha=1 row only in monomial-fast mode).
    pub spectrum: BTreeMap<u32, u64>,
    pub mode: DdtMode,
    pub field: FieldDesc,
    pub rows_examined: u64,
}

/// Reusable q-sized histogram; cleared between rows through the touched
/// list so sparse rows do not pay O(q) zeroing.
struct RowScratch {
    hist: Vec<u32>,
    touched: Vec<Elt>,
}

struct RowSummary {
    max: u32,
    beta: Elt,
    spectrum: BTreeMap<u32, u64>,
    nonzero_cells: u64,
}

impl RowScratch {
    fn new(q: usize) -> Self {
        RowScratch {
            hist: vec![0; q],
            touched: Vec::new(),
        }
    }

    fn scan(&mut self, table: &[Elt], alpha: Elt) -> RowSummary {
        debug_assert!(alpha != 0);
        for x in 0..table.len() {
            let beta = table[x] ^ table[x ^ alpha as usize];
            if self.hist[beta as usize] == 0 {
                self.touched.push(beta);
            }
            self.hist[beta as usize] += 1;
        }
        let mut max = 0u32;
        let mut best_beta = 0 as Elt;
        let mut spectrum = BTreeMap::new();
        for &beta in &self.touched {
            let c = self.hist[beta as usize];
            if c > max || (c == max && beta < best_beta) {
                max = c;
                best_beta = beta;
            }
            *spectrum.entry(c).or_insert(0u64) += 1;
        }
        let nonzero_cells = self.touched.len() as u64;
        for &beta in &self.touched {
            self.hist[beta as usize] = 0;
        }
        self.touched.clear();
        RowSummary {
            max,
            beta: best_beta,
            spectrum,
            nonzero_cells,
        }
    }
}

/// The DDT row for `alpha != 0`, computed in one O(q) pass.
pub fn ddt_row(f: &PolyFunc, alpha: Elt) -> Result<DdtRow> {
    if alpha == 0 {
        return Err(Error::BadArgument {
            what: "DDT rows are indexed by nonzero alpha".into(),
        });
    }
    let table = f.eval_table();
    let mut counts: BTreeMap<Elt, u32> = BTreeMap::new();
    for x in 0..table.len() {
        *counts.entry(table[x] ^ table[x ^ alpha as usize]).or_insert(0) += 1;
    }
    Ok(DdtRow { alpha, counts })
}

struct Best {
    delta: u32,
    witness: Witness,
    spectrum: BTreeMap<u32, u64>,
    nonzero_cells: u64,
}

fn merge_best(mut a: Best, b: Best) -> Best {
    if b.delta > a.delta
        || (b.delta == a.delta
            && (b.witness.alpha, b.witness.beta) < (a.witness.alpha, a.witness.beta))
    {
        a.delta = b.delta;
        a.witness = b.witness;
    }
    for (c, n) in b.spectrum {
        *a.spectrum.entry(c).or_insert(0) += n;
    }
    a.nonzero_cells += b.nonzero_cells;
    a
}

fn scan_rows(table: &[Elt], alphas: &[Elt]) -> Best {
    let q = table.len();
    alphas
        .par_iter()
        .map_init(
            || RowScratch::new(q),
            |scratch, &alpha| {
                let row = scratch.scan(table, alpha);
                Best {
                    delta: row.max,
                    witness: Witness {
                        alpha,
                        beta: row.beta,
                    },
                    spectrum: row.spectrum,
                    nonzero_cells: row.nonzero_cells,
                }
            },
        )
        .reduce(
            || Best {
                delta: 0,
                witness: Witness {
                    alpha: Elt::MAX,
                    beta: Elt::MAX,
                },
                spectrum: BTreeMap::new(),
                nonzero_cells: 0,
            },
            merge_best,
        )
}

fn finish_report(
    field: &Field,
    mut best: Best,
    mode: DdtMode,
    rows: u64,
) -> DdtReport {
    let zero_cells = rows * field.q() - best.nonzero_cells;
    if zero_cells > 0 {
        *best.spectrum.entry(0).or_insert(0) += zero_cells;
    }
    DdtReport {
        delta: best.delta,
        witness: best.witness,
        spectrum: best.spectrum,
        mode,
        field: field.descriptor(),
        rows_examined: rows,
    }
}

/// Exact delta(f) by the full O(q^2) scan, m <= 16. The witness is the
/// lexicographically smallest (alpha, beta) attaining the maximum.
pub fn delta_exhaustive(f: &PolyFunc) -> Result<DdtReport> {
    let field = f.field();
    if field.m() > EXHAUSTIVE_M_MAX {
        return Err(Error::FieldTooLarge {
            m: field.m(),
            limit: EXHAUSTIVE_M_MAX,
            what: "delta_exhaustive (use delta_sampled)",
        });
    }
    let table = f.eval_table();
    let alphas: Vec<Elt> = (1..field.q() as Elt).collect();
    let best = scan_rows(&table, &alphas);
    Ok(finish_report(field, best, DdtMode::Exhaustive, alphas.len() as u64))
}

/// Exact delta(x^d) in O(q) time: substituting x = alpha*u shows every row
/// is a scaled copy of the alpha=1 row, so the maximum over that single row
/// is the maximum over the whole table.
pub fn delta_monomial(d: u64, field: &Field) -> Result<DdtReport> {
    let q = field.q();
    if d < 3 || d > q - 1 {
        return Err(Error::BadArgument {
            what: format!("monomial fast path needs 3 <= d <= q-1, got d={d}"),
        });
    }
    let table: Vec<Elt> = (0..q as Elt).map(|u| field.pow(u, d)).collect();
    let mut scratch = RowScratch::new(q as usize);
    let row = scratch.scan(&table, 1);
    let best = Best {
        delta: row.max,
        witness: Witness {
            alpha: 1,
            beta: row.beta,
        },
        spectrum: row.spectrum,
        nonzero_cells: row.nonzero_cells,
    };
    Ok(finish_report(field, best, DdtMode::MonomialFast, 1))
}

/// Lower bound on delta(f) from `alpha_budget` seeded pseudo-random distinct
/// nonzero rows (all rows when the budget covers them). The report's mode is
/// always `Sampled` so it cannot be mistaken for an exact value.
pub fn delta_sampled(f: &PolyFunc, alpha_budget: u64, seed: u64) -> Result<DdtReport> {
    if alpha_budget == 0 {
        return Err(Error::BadArgument {
            what: "alpha_budget must be at least 1".into(),
        });
    }
    let field = f.field();
    let q = field.q();
    let alphas: Vec<Elt> = if alpha_budget >= q - 1 {
        (1..q as Elt).collect()
    } else {
        let mut rng = SplitMix64::new(seed);
        let mut seen = std::collections::HashSet::new();
        let mut picked = Vec::with_capacity(alpha_budget as usize);
        while picked.len() < alpha_budget as usize {
            let a = 1 + rng.below(q - 1) as Elt;
            if seen.insert(a) {
                picked.push(a);
            }
        }
        picked.sort_unstable();
        picked
    };
    let table = f.eval_table();
    let best = scan_rows(&table, &alphas);
    Ok(finish_report(field, best, DdtMode::Sampled, alphas.len() as u64))
}
