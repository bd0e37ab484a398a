//! Fatgraph invariants of diagrams.
//!
//! In the collapsed model each backbone is a single fat vertex whose
//! half-edges are the paired vertices in left-to-right order, closed up
//! cyclically. A boundary component is an orbit of `x -> succ(partner(x))`;
//! its length counts the arc sides traversed.

use serde::{Deserialize, Serialize};

use crate::diagram::{Arc, Diagram};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FatgraphReport {
    pub r: usize,
    pub boundary_lengths: Vec<usize>,
    pub chi: i64,
    pub genus_total: usize,
    pub genus_per_component: Vec<usize>,
}

/// Backbone indices grouped into connected components, in order of their
/// smallest backbone.
pub fn backbone_components(d: &Diagram) -> Vec<Vec<usize>> {
    let b = d.num_backbones();
    let mut comp: Vec<usize> = (0..b).collect();
    for &(i, j) in d.arcs() {
        let (x, y) = (comp[d.backbone_of(i)], comp[d.backbone_of(j)]);
        if x != y {
            let (keep, drop) = (x.min(y), x.max(y));
            comp.iter_mut().filter(|c| **c == drop).for_each(|c| *c = keep);
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    for k in 0..b {
        if comp[k] == k {
            out.push((0..b).filter(|&m| comp[m] == k).collect());
        }
    }
    out
}

/// Boundary cycles of the collapsed model, as sequences of half-edges (paired
/// vertices) in walk order. Each backbone without arcs contributes one empty
/// cycle.
pub fn boundary_cycles(d: &Diagram) -> Vec<Vec<usize>> {
    let partner = d.partners();
    let mut succ = vec![0; d.n() + 1];
    let mut cycles = Vec::new();
    for &(lo, hi) in d.backbones() {
        let ends: Vec<usize> = (lo..=hi).filter(|&v| partner[v] != 0).collect();
        if ends.is_empty() {
            cycles.push(Vec::new());
        }
        for (k, &v) in ends.iter().enumerate() {
            succ[v] = ends[(k + 1) % ends.len()];
        }
    }
    let mut seen = vec![false; d.n() + 1];
    for v in 1..=d.n() {
        if partner[v] == 0 || seen[v] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = v;
        while !seen[x] {
            seen[x] = true;
            cyc.push(x);
            x = succ[partner[x]];
        }
        cycles.push(cyc);
    }
    cycles
}

pub fn boundary_components(d: &Diagram) -> FatgraphReport {
    let cycles = boundary_cycles(d);
    let comps = backbone_components(d);
    let mut genus_per_component = Vec::with_capacity(comps.len());
    for comp in &comps {
        let in_comp = |v: usize| comp.contains(&d.backbone_of(v));
        let n = d.arcs().iter().filter(|a| in_comp(a.0)).count();
        let empty = comp
            .iter()
            .filter(|&&k| {
                let (lo, hi) = d.backbones()[k];
                !d.arcs().iter().any(|&(i, j)| (lo..=hi).contains(&i) || (lo..=hi).contains(&j))
            })
            .count();
        let r = empty + cycles.iter().filter(|c| !c.is_empty() && in_comp(c[0])).count();
        let twice_g = 2 + n as i64 - r as i64 - comp.len() as i64;
        debug_assert!(twice_g >= 0 && twice_g % 2 == 0);
        genus_per_component.push((twice_g / 2) as usize);
    }
    FatgraphReport {
        r: cycles.len(),
        boundary_lengths: cycles.iter().map(Vec::len).collect(),
        chi: d.num_backbones() as i64 - d.num_arcs() as i64,
        genus_total: genus_per_component.iter().sum(),
        genus_per_component,
    }
}

pub fn genus(d: &Diagram) -> usize {
    boundary_components(d).genus_total
}

/// Index into `boundary_cycles(d)` of the cycle through the corner between the
/// last and the first half-edge of the first non-empty backbone.
pub fn first_boundary(d: &Diagram, cycles: &[Vec<usize>]) -> Option<usize> {
    let partner = d.partners();
    let &(lo, hi) = d.backbones().iter().find(|&&(lo, hi)| (lo..=hi).any(|v| partner[v] != 0))?;
    let last = (lo..=hi).rev().find(|&v| partner[v] != 0)?;
    cycles.iter().position(|c| c.contains(&partner[last]))
}

/// Boundary count of the inflated model, where every vertex is a fat vertex
/// with cyclic order (right backbone edge, arc, left backbone edge).
pub fn inflated_boundary_count(d: &Diagram) -> usize {
    // Dart slots: 0 right backbone edge, 1 arc, 2 left backbone edge.
    let partner = d.partners();
    let n = d.n();
    let mut has = vec![[false; 3]; n + 1];
    for &(lo, hi) in d.backbones() {
        for v in lo..=hi {
            has[v] = [v < hi, partner[v] != 0, v > lo];
        }
    }
    let next_at = |v: usize, s: usize| -> usize {
        (1..=3).map(|k| (s + k) % 3).find(|&t| has[v][t]).unwrap()
    };
    let mut seen = vec![[false; 3]; n + 1];
    // A backbone with no vertices is still a disc.
    let mut faces = d.backbones().iter().filter(|&&(lo, hi)| hi < lo).count();
    for v in 1..=n {
        if !has[v].iter().any(|&h| h) {
            faces += 1;
            continue;
        }
        for s in 0..3 {
            if !has[v][s] || seen[v][s] {
                continue;
            }
            faces += 1;
            let (mut x, mut t) = (v, s);
            while !seen[x][t] {
                seen[x][t] = true;
                let (y, u) = match t {
                    0 => (x + 1, 2),
                    1 => (partner[x], 1),
                    _ => (x - 1, 0),
                };
                x = y;
                t = next_at(y, u);
            }
        }
    }
    faces
}

/// Joins the 3' end of `R` to the 5' end of `S`.
pub fn glue_alpha(e: &Diagram) -> Result<Diagram> {
    if !e.is_two_backbone() {
        return Err(Error::NotTwoBackbones);
    }
    Diagram::one_backbone(e.n(), e.arcs().to_vec())
}

/// `R = R1 R2` and `S = S2 S1`: `e2` is inserted into the gap of `e1`.
pub fn product_bullet(e1: &Diagram, e2: &Diagram) -> Result<Diagram> {
    if !e1.is_two_backbone() || !e2.is_two_backbone() {
        return Err(Error::NotTwoBackbones);
    }
    let (n1, m1) = (e1.r_len(), e1.n() - e1.r_len());
    let (n2, m2) = (e2.r_len(), e2.n() - e2.r_len());
    let nr = n1 + n2;
    let map1 = |v: usize| if v <= n1 { v } else { nr + m2 + (v - n1) };
    let map2 = |v: usize| if v <= n2 { n1 + v } else { nr + (v - n2) };
    let arcs: Vec<Arc> = e1
        .arcs()
        .iter()
        .map(|&(i, j)| (map1(i), map1(j)))
        .chain(e2.arcs().iter().map(|&(i, j)| (map2(i), map2(j))))
        .collect();
    Diagram::two_backbone(nr, m1 + m2, arcs)
}
