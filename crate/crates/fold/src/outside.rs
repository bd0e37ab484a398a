//! Outside pass and marginal probabilities.

use std::collections::BTreeMap;

use crate::grammar::{Cell, Factor, Grammar, Table, TABLES};
use crate::semiring::Boltzmann;
use crate::tables::Tables;
use crate::{Error, Result};

/// Marginals of the Boltzmann ensemble. All keys are in linear coordinates.
#[derive(Clone, Debug)]
pub struct PairingProbabilities {
    pub n_r: usize,
    pub n_s: usize,
    pub partition: f64,
    /// Arc `(i, j)` to probability.
    pub pairs: BTreeMap<(usize, usize), f64>,
    /// Hybrid `(outer R, inner R, inner S, outer S)` to probability.
    pub hybrids: BTreeMap<(usize, usize, usize, usize), f64>,
    /// Gap structure `(a, x1, x2, p)`, outer arc `(a, p)` and innermost arc `(x1, x2)`.
    pub gaps: BTreeMap<(usize, usize, usize, usize), f64>,
    /// Hybrid probabilities summed over the S interval.
    pub target: BTreeMap<(usize, usize), f64>,
    /// Gap probabilities summed over the last two indices.
    pub paring: BTreeMap<(usize, usize), f64>,
    grammar: Grammar,
    cells: Vec<Vec<f64>>,
}

impl PairingProbabilities {
    pub fn compute(tables: &Tables<Boltzmann>) -> Result<Self> {
        let q = tables.root().0;
        if !q.is_finite() {
            return Err(Error::Overflow);
        }
        let grammar = tables.grammar().clone();
        let order = grammar.fill_order();
        let mut outside: Vec<Vec<f64>> =
            TABLES.iter().map(|&t| vec![0.0; grammar.table_len(t)]).collect();
        let root = grammar.root();
        outside[Grammar::slot(root.table)][grammar.index(root)] = 1.0;
        let mut pairs = BTreeMap::new();
        for &cell in order.iter().rev() {
            let o = outside[Grammar::slot(cell.table)][grammar.index(cell)];
            if o == 0.0 {
                continue;
            }
            grammar.productions(cell, &mut |factor, children| {
                let f = tables.factor(factor).0;
                let mut vals = [1.0; 3];
                for (v, &c) in vals.iter_mut().zip(children) {
                    *v = tables.get(c).0;
                }
                let total = f * vals.iter().product::<f64>();
                if total == 0.0 {
                    return;
                }
                if let Factor::Arc { i, j, .. } = factor {
                    *pairs.entry((i as usize, j as usize)).or_insert(0.0) += o * total / q;
                }
                for (k, &c) in children.iter().enumerate() {
                    let others: f64 =
                        vals.iter().enumerate().filter(|&(m, _)| m != k).map(|(_, v)| v).product();
                    outside[Grammar::slot(c.table)][grammar.index(c)] += o * f * others;
                }
            });
        }
        let mut cells = outside;
        for &t in &TABLES {
            let slot = Grammar::slot(t);
            for (o, v) in cells[slot].iter_mut().zip(tables.table(t)) {
                *o = *o * v.0 / q;
            }
        }

        let n_r = grammar.n_r();
        let mut hybrids = BTreeMap::new();
        let mut gaps = BTreeMap::new();
        let mut target = BTreeMap::new();
        let mut paring = BTreeMap::new();
        for &cell in &order {
            let p = cells[Grammar::slot(cell.table)][grammar.index(cell)];
            if p == 0.0 {
                continue;
            }
            let (i, j, h, l) = (cell.i as usize, cell.j as usize, cell.h as usize, cell.l as usize);
            match cell.table {
                Table::Hy => {
                    hybrids.insert((i, j, n_r + h, n_r + l), p);
                    *target.entry((i, j)).or_insert(0.0) += p;
                }
                Table::GR | Table::GS => {
                    let off = if cell.table == Table::GS { n_r } else { 0 };
                    gaps.insert((off + i, off + j, off + h, off + l), p);
                    *paring.entry((off + i, off + j)).or_insert(0.0) += p;
                }
                _ => {}
            }
        }
        Ok(PairingProbabilities {
            n_r,
            n_s: grammar.n_s(),
            partition: q,
            pairs,
            hybrids,
            gaps,
            target,
            paring,
            grammar,
            cells,
        })
    }

    /// Probability that a derivation uses `cell`.
    pub fn cell_probability(&self, cell: Cell) -> f64 {
        self.cells[Grammar::slot(cell.table)][self.grammar.index(cell)]
    }

    /// All cell probabilities of one table, in storage order.
    pub fn table_probabilities(&self, t: Table) -> &[f64] {
        &self.cells[Grammar::slot(t)]
    }

    pub fn pair(&self, i: usize, j: usize) -> f64 {
        self.pairs.get(&(i, j)).copied().unwrap_or(0.0)
    }

    /// Probability that vertex `v` is unpaired.
    pub fn unpaired(&self, v: usize) -> f64 {
        let paired: f64 = self.pairs.iter().filter(|(&(i, j), _)| i == v || j == v).map(|(_, p)| p).sum();
        1.0 - paired
    }
}
