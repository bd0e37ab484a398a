//! Brute-force ground truth for the folding engine.
//!
//! Every partial matching that respects the pairing rules and the hairpin
//! minimum is generated and kept iff all its irreducible shadows have genus
//! zero. Counts, partition sums and marginals are then plain sums over the
//! surviving structures.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;

use rrfold_core::shadow::is_gamma_structure;
use rrfold_core::{Arc, Diagram, SequencePair};
use rrfold_fold::{EnergyModel, Error, InteractionStructure, Result};

/// Hard cap on `n_R + n_S`.
pub const MAX_LEN: usize = 16;

/// Exact aggregates over all genus-zero interaction structures.
#[derive(Clone, Debug)]
pub struct OracleResult {
    /// Sorted by arc list.
    pub structures: Vec<InteractionStructure>,
    pub count: BigUint,
    pub partition: f64,
    pub pairs: BTreeMap<Arc, f64>,
    /// `(outer R, inner R, inner S, outer S)` of each maximal hybrid.
    pub hybrids: BTreeMap<(usize, usize, usize, usize), f64>,
    /// `(a, x1, x2, p)`: outermost arc `(a, p)` and innermost arc `(x1, x2)` of
    /// the interior arcs of one strand crossing the same exterior arcs.
    pub gaps: BTreeMap<(usize, usize, usize, usize), f64>,
    pub target: BTreeMap<(usize, usize), f64>,
    pub paring: BTreeMap<(usize, usize), f64>,
}

/// Neumaier-compensated sum.
#[derive(Clone, Copy, Default)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    fn value(self) -> f64 {
        self.s + self.c
    }
}

struct Enumerator<'a> {
    pair: &'a SequencePair,
    model: &'a EnergyModel,
    n_r: usize,
    n: usize,
}

impl Enumerator<'_> {
    fn energy(&self, i: usize, j: usize) -> Option<f64> {
        let (a, b) = (self.pair.base(i), self.pair.base(j));
        if i <= self.n_r && j > self.n_r {
            self.model.exterior.get(a, b)
        } else {
            self.model.interior.get(a, b)
        }
    }

    fn same_strand(&self, i: usize, j: usize) -> Option<bool> {
        if j <= self.n_r {
            Some(true)
        } else if i > self.n_r {
            Some(false)
        } else {
            None
        }
    }

    /// Extends `arcs` by pairing or skipping each vertex from `v` on.
    fn extend(&self, v: usize, partner: &mut Vec<usize>, arcs: &mut Vec<Arc>, out: &mut Vec<Vec<Arc>>) {
        if v > self.n {
            if self.admissible(partner, arcs) {
                let mut a = arcs.clone();
                a.sort_unstable();
                out.push(a);
            }
            return;
        }
        if partner[v] != 0 {
            return self.extend(v + 1, partner, arcs, out);
        }
        self.extend(v + 1, partner, arcs, out);
        for w in v + 1..=self.n {
            if partner[w] == 0 && self.allowed(v, w, arcs) {
                partner[v] = w;
                partner[w] = v;
                arcs.push((v, w));
                self.extend(v + 1, partner, arcs, out);
                arcs.pop();
                partner[v] = 0;
                partner[w] = 0;
            }
        }
    }

    // Two crossing arcs on one strand already form a genus-one shadow, and
    // adding arcs never lowers genus, so the branch can be cut.
    fn allowed(&self, v: usize, w: usize, arcs: &[Arc]) -> bool {
        if self.energy(v, w).is_none() {
            return false;
        }
        match self.same_strand(v, w) {
            None => true,
            Some(r) => !arcs
                .iter()
                .any(|&(a, b)| self.same_strand(a, b) == Some(r) && a < v && v < b && b < w),
        }
    }

    fn admissible(&self, partner: &[usize], arcs: &[Arc]) -> bool {
        for &(i, j) in arcs {
            if self.same_strand(i, j).is_some()
                && (i + 1..j).all(|k| partner[k] == 0)
                && j - i - 1 < self.model.theta
            {
                return false;
            }
        }
        let d = Diagram::two_backbone(self.n_r, self.n - self.n_r, arcs.to_vec())
            .expect("enumerated arcs form a matching");
        is_gamma_structure(&d, 0)
    }

    fn structure_energy(&self, arcs: &[Arc]) -> f64 {
        let mut e = 0.0;
        for &(i, j) in arcs {
            e += self.energy(i, j).expect("pairable");
            if j > i + 2
                && arcs.binary_search(&(i + 1, j - 1)).is_ok()
                && self.same_strand(i, j) == self.same_strand(i + 1, j - 1)
            {
                e += self.model.stack_bonus;
            }
        }
        e
    }
}

fn partners(n: usize, arcs: &[Arc]) -> Vec<usize> {
    let mut p = vec![0; n + 2];
    for &(i, j) in arcs {
        p[i] = j;
        p[j] = i;
    }
    p
}

/// Maximal hybrids: chains of exterior arcs where consecutive arcs enclose
/// only unpaired vertices between them.
pub fn hybrids(n_r: usize, arcs: &[Arc]) -> Vec<(usize, usize, usize, usize)> {
    let n = arcs.iter().map(|a| a.1).max().unwrap_or(0);
    let p = partners(n, arcs);
    let exterior = |i: usize, j: usize| i <= n_r && j > n_r;
    let next = |i: usize, l: usize| -> Option<(usize, usize)> {
        let i1 = (i + 1..l).find(|&k| p[k] != 0)?;
        let l1 = (i1..l).rev().find(|&k| p[k] != 0)?;
        (p[i1] == l1 && i1 < l1 && exterior(i1, l1)).then_some((i1, l1))
    };
    let inner: Vec<Arc> = arcs
        .iter()
        .filter(|&&(i, j)| exterior(i, j))
        .filter_map(|&(i, l)| next(i, l))
        .collect();
    let mut out = Vec::new();
    for &(i, l) in arcs {
        if !exterior(i, l) || inner.contains(&(i, l)) {
            continue;
        }
        let (mut a, mut b) = (i, l);
        while let Some((a1, b1)) = next(a, b) {
            a = a1;
            b = b1;
        }
        out.push((i, a, b, l));
    }
    out
}

/// Interior arcs crossing at least one exterior arc, grouped by strand and
/// crossed set; each group reported as `(a, x1, x2, p)`.
pub fn gap_blocks(n_r: usize, arcs: &[Arc]) -> Vec<(usize, usize, usize, usize)> {
    let exterior: Vec<Arc> = arcs.iter().copied().filter(|&(i, j)| i <= n_r && j > n_r).collect();
    let mut groups: BTreeMap<(bool, Vec<Arc>), Vec<Arc>> = BTreeMap::new();
    for &(i, j) in arcs {
        if i <= n_r && j > n_r {
            continue;
        }
        let crossed: Vec<Arc> =
            exterior.iter().copied().filter(|&e| rrfold_core::arcs_cross((i, j), e)).collect();
        if !crossed.is_empty() {
            groups.entry((j <= n_r, crossed)).or_default().push((i, j));
        }
    }
    groups
        .into_values()
        .map(|g| {
            let outer = *g.iter().min().expect("nonempty group");
            let inner = *g.iter().max().expect("nonempty group");
            (outer.0, inner.0, inner.1, outer.1)
        })
        .collect()
}

fn normalize<K: Ord>(m: BTreeMap<K, Sum>, q: f64) -> BTreeMap<K, f64> {
    m.into_iter().map(|(k, s)| (k, s.value() / q)).collect()
}

/// Every valid genus-zero structure of `pair`, with exact aggregates.
pub fn enumerate_structures(pair: &SequencePair, model: &EnergyModel) -> Result<OracleResult> {
    model.validate()?;
    if pair.len() > MAX_LEN {
        return Err(Error::LengthCap { len: pair.len(), cap: MAX_LEN });
    }
    let en = Enumerator { pair, model, n_r: pair.r().len(), n: pair.len() };
    let n = en.n;
    let firsts: Vec<Arc> = (1..=n)
        .flat_map(|v| (v + 1..=n).map(move |w| (v, w)))
        .filter(|&(v, w)| en.energy(v, w).is_some())
        .collect();
    let mut lists: Vec<Vec<Vec<Arc>>> = firsts
        .par_iter()
        .map(|&(v, w)| {
            let mut partner = vec![0; n + 2];
            partner[v] = w;
            partner[w] = v;
            let mut arcs = vec![(v, w)];
            let mut out = Vec::new();
            en.extend(v + 1, &mut partner, &mut arcs, &mut out);
            out
        })
        .collect();
    if en.admissible(&vec![0; n + 2], &[]) {
        lists.push(vec![vec![]]);
    }
    let mut all: Vec<Vec<Arc>> = lists.into_iter().flatten().collect();
    all.sort_unstable();

    let mut q = Sum::default();
    let weighted: Vec<(Vec<Arc>, f64, f64)> = all
        .into_iter()
        .map(|arcs| {
            let e = en.structure_energy(&arcs);
            let w = (-e / model.rt).exp();
            q.add(w);
            (arcs, e, w)
        })
        .collect();
    let partition = q.value();
    if !partition.is_finite() {
        return Err(Error::Overflow);
    }

    let mut pairs: BTreeMap<Arc, Sum> = BTreeMap::new();
    let mut hyb: BTreeMap<(usize, usize, usize, usize), Sum> = BTreeMap::new();
    let mut gap: BTreeMap<(usize, usize, usize, usize), Sum> = BTreeMap::new();
    let mut structures = Vec::with_capacity(weighted.len());
    for (arcs, e, w) in weighted {
        for &a in &arcs {
            pairs.entry(a).or_default().add(w);
        }
        for k in hybrids(en.n_r, &arcs) {
            hyb.entry(k).or_default().add(w);
        }
        for k in gap_blocks(en.n_r, &arcs) {
            gap.entry(k).or_default().add(w);
        }
        let mut s = InteractionStructure::new(pair, model, arcs);
        s.energy = e;
        s.probability = Some(w / partition);
        structures.push(s);
    }
    let pairs = normalize(pairs, partition);
    let hybrids = normalize(hyb, partition);
    let gaps = normalize(gap, partition);
    let mut target = BTreeMap::new();
    for (&(i, j, _, _), &p) in &hybrids {
        *target.entry((i, j)).or_insert(0.0) += p;
    }
    let mut paring = BTreeMap::new();
    for (&(a, x1, _, _), &p) in &gaps {
        *paring.entry((a, x1)).or_insert(0.0) += p;
    }
    Ok(OracleResult {
        count: BigUint::from(structures.len()),
        structures,
        partition,
        pairs,
        hybrids,
        gaps,
        target,
        paring,
    })
}
