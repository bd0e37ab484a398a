//! Semiring-generic table storage and the inside fill.

use rand::Rng;

use rrfold_core::SequencePair;

use crate::energy::EnergyModel;
use crate::grammar::{Cell, Factor, Grammar, Table, TABLES};
use crate::semiring::{Boltzmann, Count, MinPlus, Semiring};

/// Filled inside tables for one sequence pair.
#[derive(Clone, Debug)]
pub struct Tables<S> {
    grammar: Grammar,
    pair: SequencePair,
    model: EnergyModel,
    values: Vec<Vec<S>>,
    arc: Vec<S>,
    arc_stacked: Vec<S>,
}

impl<S: Semiring> Tables<S> {
    /// Runs the inside pass. Inputs are assumed validated.
    pub fn fill(pair: &SequencePair, model: &EnergyModel) -> Self {
        let grammar = Grammar::new(pair, model);
        let n = pair.len();
        let mut arc = vec![S::zero(); (n + 1) * (n + 1)];
        let mut arc_stacked = arc.clone();
        for i in 1..=n {
            for j in i + 1..=n {
                if let Some(e) = model.arc_energy(pair, i, j) {
                    arc[i * (n + 1) + j] = S::weight(e, model.rt);
                    arc_stacked[i * (n + 1) + j] = S::weight(e + model.stack_bonus, model.rt);
                }
            }
        }
        let values = TABLES.iter().map(|&t| vec![S::zero(); grammar.table_len(t)]).collect();
        let mut tables = Tables { grammar, pair: pair.clone(), model: model.clone(), values, arc, arc_stacked };
        for cell in tables.grammar.fill_order() {
            let v = tables.evaluate(cell);
            let idx = tables.grammar.index(cell);
            tables.values[Grammar::slot(cell.table)][idx] = v;
        }
        tables
    }

    fn evaluate(&self, cell: Cell) -> S {
        let mut acc = S::zero();
        self.grammar.productions(cell, &mut |factor, children| {
            if let Some(w) = self.weigh(factor, children) {
                acc.plus(w);
            }
        });
        acc
    }

    /// Weight of one production, `None` if it vanishes.
    pub(crate) fn weigh(&self, factor: Factor, children: &[Cell]) -> Option<S> {
        let mut w = self.factor(factor);
        for &c in children {
            let v = self.get(c);
            if v.is_zero() {
                return None;
            }
            w = w.times(v);
        }
        Some(w)
    }

    pub(crate) fn factor(&self, factor: Factor) -> S {
        match factor {
            Factor::One => S::one(),
            Factor::Arc { i, j, stacked } => {
                let idx = i as usize * (self.pair.len() + 1) + j as usize;
                if stacked {
                    self.arc_stacked[idx].clone()
                } else {
                    self.arc[idx].clone()
                }
            }
        }
    }

    pub fn get(&self, cell: Cell) -> &S {
        &self.values[Grammar::slot(cell.table)][self.grammar.index(cell)]
    }

    pub(crate) fn table(&self, t: Table) -> &[S] {
        &self.values[Grammar::slot(t)]
    }

    pub fn root(&self) -> &S {
        self.get(self.grammar.root())
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn pair(&self) -> &SequencePair {
        &self.pair
    }

    pub fn model(&self) -> &EnergyModel {
        &self.model
    }

    /// Walks one derivation from the root, letting `choose` pick a production
    /// among the non-vanishing ones. Returns the emitted arcs and the visited cells.
    pub(crate) fn derive<C>(&self, mut choose: C) -> (Vec<(usize, usize)>, Vec<Cell>)
    where
        C: FnMut(&S, &[(Factor, S, [Option<Cell>; 3])]) -> usize,
    {
        let mut arcs = Vec::new();
        let mut visited = Vec::new();
        let mut stack = vec![self.grammar.root()];
        let mut options = Vec::new();
        while let Some(cell) = stack.pop() {
            visited.push(cell);
            options.clear();
            self.grammar.productions(cell, &mut |factor, children| {
                if let Some(w) = self.weigh(factor, children) {
                    let mut kids = [None; 3];
                    for (k, &c) in kids.iter_mut().zip(children) {
                        *k = Some(c);
                    }
                    options.push((factor, w, kids));
                }
            });
            if options.is_empty() {
                continue;
            }
            let (factor, _, kids) = &options[choose(self.get(cell), &options)];
            if let Factor::Arc { i, j, .. } = *factor {
                arcs.push((i as usize, j as usize));
            }
            stack.extend(kids.iter().rev().flatten());
        }
        arcs.sort_unstable();
        (arcs, visited)
    }

    /// Allocated cells per table, for the dimension audit.
    pub fn shape(&self) -> Vec<(Table, usize, usize)> {
        TABLES.iter().map(|&t| (t, t.arity(), self.values[Grammar::slot(t)].len())).collect()
    }
}

impl Tables<MinPlus> {
    /// First minimal production at every step, in rule order.
    pub fn traceback(&self) -> Vec<(usize, usize)> {
        self.traceback_derivation().0
    }

    pub fn traceback_derivation(&self) -> (Vec<(usize, usize)>, Vec<Cell>) {
        self.derive(|best, options| {
            let tol = 1e-9 * best.0.abs().max(1.0);
            options.iter().position(|(_, w, _)| (w.0 - best.0).abs() <= tol).unwrap_or(0)
        })
    }
}

impl Tables<Boltzmann> {
    /// One stochastic derivation: productions chosen in proportion to their weight.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<(usize, usize)> {
        self.sample_derivation(rng).0
    }

    pub fn sample_derivation<R: Rng>(&self, rng: &mut R) -> (Vec<(usize, usize)>, Vec<Cell>) {
        self.derive(|_, options| {
            let total: f64 = options.iter().map(|(_, w, _)| w.0).sum();
            let mut r = rng.gen::<f64>() * total;
            for (k, (_, w, _)) in options.iter().enumerate() {
                r -= w.0;
                if r < 0.0 {
                    return k;
                }
            }
            options.len() - 1
        })
    }
}

/// Tables filled in a semiring chosen at run time.
#[derive(Clone, Debug)]
pub enum DpState {
    Count(Tables<Count>),
    MinPlus(Tables<MinPlus>),
    Boltzmann(Tables<Boltzmann>),
}

/// Semiring selector for [`crate::fill_tables`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SemiringChoice {
    Count,
    MinPlus,
    Boltzmann,
}

impl DpState {
    pub fn grammar(&self) -> &Grammar {
        match self {
            DpState::Count(t) => t.grammar(),
            DpState::MinPlus(t) => t.grammar(),
            DpState::Boltzmann(t) => t.grammar(),
        }
    }

    pub fn shape(&self) -> Vec<(Table, usize, usize)> {
        match self {
            DpState::Count(t) => t.shape(),
            DpState::MinPlus(t) => t.shape(),
            DpState::Boltzmann(t) => t.shape(),
        }
    }

    pub fn as_partition(&self) -> Option<&Tables<Boltzmann>> {
        match self {
            DpState::Boltzmann(t) => Some(t),
            _ => None,
        }
    }
}
