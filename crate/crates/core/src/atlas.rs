//! Exhaustive shadow atlases and the explicit `S_l` family.

use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::{arcs_cross, Arc, Diagram};
use crate::dotbracket::render_structure;
use crate::shadow::{is_irreducible, shadow, Shadow};
use crate::topology::{boundary_cycles, first_boundary, genus};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Enumerated,
    Constructed,
    CutFrom { source: Diagram, position: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtlasEntry {
    pub shadow: Shadow,
    pub genus: usize,
    pub arcs: usize,
    pub irreducible: bool,
    pub provenance: Provenance,
    pub structure: String,
}

impl AtlasEntry {
    fn new(d: Diagram, provenance: Provenance) -> Self {
        let s = shadow(&d);
        debug_assert_eq!(s.diagram, d);
        AtlasEntry {
            genus: s.genus,
            arcs: d.num_arcs(),
            irreducible: s.is_irreducible,
            structure: render_structure(&d).unwrap_or_default(),
            provenance,
            shadow: s,
        }
    }

    pub fn diagram(&self) -> &Diagram {
        &self.shadow.diagram
    }
}

/// True iff `d` is its own shadow.
pub fn is_shadow(d: &Diagram) -> bool {
    shadow(d).diagram == *d
}

/// Backtracking over perfect matchings of `1..=points`, always pairing the
/// smallest free point. Prunes on stacks, on the genus of the partial
/// matching (adding an arc never lowers genus) and on arcs that can no longer
/// be crossed.
///
/// With `cuts` set, the matching is searched on one backbone with genus bound
/// `g + 1` and at most one stack, and each leaf is tried at every cut that
/// breaks its stack; cutting lowers genus by at most one.
struct Search {
    points: usize,
    g: usize,
    cuts: bool,
    partner: Vec<usize>,
    succ: Vec<usize>,
    seen: Vec<bool>,
    stacks: usize,
    found: Vec<(usize, Vec<Arc>)>,
}

impl Search {
    fn new(points: usize, g: usize, cuts: bool) -> Self {
        Search {
            points,
            g,
            cuts,
            partner: vec![0; points + 2],
            succ: vec![0; points + 2],
            seen: vec![false; points + 2],
            stacks: 0,
            found: Vec::new(),
        }
    }

    fn arcs(&self) -> Vec<Arc> {
        (1..=self.points).filter(|&v| self.partner[v] > v).map(|v| (v, self.partner[v])).collect()
    }

    /// Genus of the placed arcs on one backbone.
    fn partial_genus(&mut self) -> usize {
        let p = &self.partner;
        let mut first = 0;
        let mut prev = 0;
        let mut arcs = 0;
        for v in 1..=self.points {
            if p[v] != 0 {
                if prev == 0 {
                    first = v;
                } else {
                    self.succ[prev] = v;
                }
                prev = v;
                arcs += usize::from(p[v] > v);
            }
        }
        if prev == 0 {
            return 0;
        }
        self.succ[prev] = first;
        let mut cycles = 0;
        for v in 1..=self.points {
            self.seen[v] = false;
        }
        for v in 1..=self.points {
            if p[v] == 0 || self.seen[v] {
                continue;
            }
            cycles += 1;
            let mut x = v;
            while !self.seen[x] {
                self.seen[x] = true;
                x = self.succ[p[x]];
            }
        }
        (1 + arcs - cycles) / 2
    }

    /// An arc whose interior is fully matched internally stays non-crossing.
    fn sealed(&self, a: usize, b: usize) -> bool {
        (a + 1..b).all(|v| self.partner[v] != 0 && a < self.partner[v] && self.partner[v] < b)
    }

    fn leaf(&mut self) {
        let arcs = self.arcs();
        if !arcs.iter().all(|&a| arcs.iter().any(|&b| arcs_cross(a, b))) {
            return;
        }
        if !self.cuts {
            if self.stacks == 0 && self.partial_genus() == self.g {
                self.found.push((self.points, arcs));
            }
            return;
        }
        let p = &self.partner;
        for cut in 1..self.points {
            // Stacks across the cut survive only where the cut separates them.
            let broken = |i: usize, j: usize| i == cut || j - 1 == cut;
            let ok = arcs.iter().all(|&(i, j)| {
                !(j >= i + 3 && p[i + 1] == j - 1) || broken(i, j)
            });
            if !ok {
                continue;
            }
            let d = Diagram::two_backbone(cut, self.points - cut, arcs.clone()).unwrap();
            if genus(&d) == self.g && is_irreducible(&d) {
                self.found.push((cut, arcs.clone()));
            }
        }
    }

    fn place(&mut self, i: usize, j: usize) {
        let stacked = i > 1 && j < self.points && self.partner[i - 1] == j + 1;
        let limit = if self.cuts { 1 } else { 0 };
        if stacked && self.stacks == limit {
            return;
        }
        self.stacks += usize::from(stacked);
        self.partner[i] = j;
        self.partner[j] = i;
        let bound = self.g + usize::from(self.cuts);
        let ok = !self.sealed(i, j)
            && (1..i).all(|a| {
                let b = self.partner[a];
                b < a || !((a < i && i < b) || (a < j && j < b)) || !self.sealed(a, b)
            })
            && self.partial_genus() <= bound;
        if ok {
            self.go();
        }
        self.partner[i] = 0;
        self.partner[j] = 0;
        self.stacks -= usize::from(stacked);
    }

    fn go(&mut self) {
        let Some(i) = (1..=self.points).find(|&v| self.partner[v] == 0) else {
            self.leaf();
            return;
        };
        for j in i + 1..=self.points {
            if self.partner[j] == 0 {
                self.place(i, j);
            }
        }
    }
}

/// Matchings with `arcs` arcs, tagged with the length of the first backbone.
fn search(arcs: usize, g: usize, cuts: bool) -> Vec<(usize, Vec<Arc>)> {
    let points = 2 * arcs;
    let mut found: Vec<(usize, Vec<Arc>)> = (2..=points)
        .into_par_iter()
        .flat_map_iter(|j| {
            let mut s = Search::new(points, g, cuts);
            s.place(1, j);
            s.found
        })
        .collect();
    found.sort();
    found
}

/// All shadows of genus `g` over one backbone. Empty for `g = 0`.
pub fn enumerate_shadows_one_backbone(g: usize) -> Result<Vec<AtlasEntry>> {
    if g > 3 {
        return Err(Error::ResourceLimit(format!("one-backbone atlas capped at genus 3, got {g}")));
    }
    if g == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for n in 2 * g..=6 * g - 2 {
        for (_, arcs) in search(n, g, false) {
            let d = Diagram::one_backbone(2 * n, arcs).unwrap();
            out.push(AtlasEntry::new(d, Provenance::Enumerated));
        }
    }
    Ok(out)
}

/// Arc-count window for irreducible two-backbone shadows of genus `g`.
pub fn two_backbone_arc_bounds(g: usize) -> (usize, usize) {
    if g == 0 {
        (2, 4)
    } else {
        (2 * g + 1, 6 * (g + 1) - 2)
    }
}

/// All non-trivial irreducible shadows of genus `g` over two backbones.
pub fn enumerate_irreducible_two_backbone(g: usize) -> Result<Vec<AtlasEntry>> {
    if g > 1 {
        return Err(Error::ResourceLimit(format!("two-backbone atlas capped at genus 1, got {g}")));
    }
    let (lo, hi) = two_backbone_arc_bounds(g);
    let mut out = Vec::new();
    for n in lo..=hi {
        for (cut, arcs) in search(n, g, true) {
            let d = Diagram::two_backbone(cut, 2 * n - cut, arcs).unwrap();
            out.push(AtlasEntry::new(d, Provenance::Enumerated));
        }
    }
    out.sort_by(|a, b| a.diagram().cmp(b.diagram()));
    Ok(out)
}

/// Splits a one-backbone diagram between `position` and `position + 1`.
pub fn cut_backbone(s: &Diagram, position: usize) -> Result<Diagram> {
    if s.num_backbones() != 1 {
        return Err(Error::BadPartition("cutting needs a single backbone".into()));
    }
    if position == 0 || position >= s.n() {
        return Err(Error::OutOfRange { value: position, range: format!("1..{}", s.n()) });
    }
    Diagram::two_backbone(position, s.n() - position, s.arcs().to_vec())
}

/// Cuts every genus-1 one-backbone shadow at every position and keeps the
/// non-trivial irreducible genus-0 shadows, deduplicated.
pub fn cut_derived_genus0() -> Vec<AtlasEntry> {
    let mut out: Vec<AtlasEntry> = Vec::new();
    for src in enumerate_shadows_one_backbone(1).unwrap() {
        let d = src.diagram();
        for p in 1..d.n() {
            let e = cut_backbone(d, p).unwrap();
            let s = shadow(&e);
            let fresh = out.iter().all(|x| *x.diagram() != e);
            if s.diagram == e && s.is_irreducible && s.is_nontrivial && s.genus == 0 && fresh {
                out.push(AtlasEntry::new(e, Provenance::CutFrom { source: d.clone(), position: p }));
            }
        }
    }
    out.sort_by(|a, b| a.diagram().cmp(b.diagram()));
    out
}

/// Boundary lengths with the first boundary component listed first.
pub fn boundary_profile(d: &Diagram) -> (usize, Vec<usize>) {
    let cycles = boundary_cycles(d);
    let first = first_boundary(d, &cycles).unwrap_or(0);
    let mut rest: Vec<usize> =
        cycles.iter().enumerate().filter(|&(k, _)| k != first).map(|(_, c)| c.len()).collect();
    rest.sort_unstable();
    (cycles.get(first).map_or(0, Vec::len), rest)
}

/// Inserts an arc with endpoints in gaps `a <= b`, where gap `k` lies just
/// after vertex `k`.
fn insert_arc(d: &Diagram, a: usize, b: usize) -> Diagram {
    let shift = |v: usize| v + usize::from(v > a) + usize::from(v > b);
    let mut arcs: Vec<Arc> = d.arcs().iter().map(|&(i, j)| (shift(i), shift(j))).collect();
    arcs.push((a + 1, b + 2));
    Diagram::one_backbone(d.n() + 2, arcs).unwrap()
}

/// `S_l` of genus `g`: start from `2g` mutually crossing arcs and insert
/// arcs from the 5' end, each splitting a length-3 boundary component off the
/// first one.
pub fn construct_s_sequence(g: usize, l: usize) -> Result<Shadow> {
    if g == 0 || l < 2 * g || l > 6 * g - 2 {
        return Err(Error::OutOfRange { value: l, range: format!("2g..=6g-2 with g = {g} >= 1") });
    }
    let mut d = Diagram::one_backbone(4 * g, (1..=2 * g).map(|k| (k, k + 2 * g)).collect()).unwrap();
    for _ in 2 * g..l {
        let cycles = boundary_cycles(&d).len();
        let (first, rest) = boundary_profile(&d);
        let threes = rest.iter().filter(|&&x| x == 3).count();
        let n = d.n();
        let next = (0..=n)
            .flat_map(|a| (a..=n).map(move |b| (a, b)))
            .map(|(a, b)| insert_arc(&d, a, b))
            .find(|e| {
                if !is_shadow(e) || genus(e) != g || boundary_cycles(e).len() != cycles + 1 {
                    return false;
                }
                let (f, r) = boundary_profile(e);
                f + 1 == first && r.iter().filter(|&&x| x == 3).count() == threes + 1
            })
            .ok_or_else(|| Error::ResourceLimit(format!("no admissible insertion for g = {g}")))?;
        d = next;
    }
    Ok(shadow(&d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_zero_one_backbone_is_empty() {
        assert!(enumerate_shadows_one_backbone(0).unwrap().is_empty());
        assert!(matches!(enumerate_shadows_one_backbone(4), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn four_genus_one_shadows() {
        let atlas = enumerate_shadows_one_backbone(1).unwrap();
        assert_eq!(atlas.len(), 4);
        let mut sizes: Vec<usize> = atlas.iter().map(|e| e.arcs).collect();
        sizes.dedup();
        assert_eq!(sizes, vec![2, 3, 4]);
    }

    #[test]
    fn seven_genus_zero_two_backbone_shadows() {
        let atlas = enumerate_irreducible_two_backbone(0).unwrap();
        assert_eq!(atlas.len(), 7);
        let cut = cut_derived_genus0();
        let a: Vec<&Diagram> = atlas.iter().map(AtlasEntry::diagram).collect();
        let b: Vec<&Diagram> = cut.iter().map(AtlasEntry::diagram).collect();
        assert_eq!(a, b);
        for l in 2..=4 {
            assert!(atlas.iter().any(|e| e.arcs == l));
        }
    }

    #[test]
    fn s_sequence_examples() {
        let s = construct_s_sequence(1, 2).unwrap();
        assert_eq!(s.diagram.arcs(), &[(1, 3), (2, 4)]);
        assert_eq!(boundary_profile(&s.diagram), (4, vec![]));
        let s = construct_s_sequence(2, 4).unwrap();
        assert_eq!((s.genus, boundary_cycles(&s.diagram).len()), (2, 1));
        let s = construct_s_sequence(2, 10).unwrap();
        assert_eq!((s.genus, s.diagram.num_arcs()), (2, 10));
        assert_eq!(boundary_profile(&s.diagram), (2, vec![3; 6]));
        assert!(s.is_irreducible);
        assert!(construct_s_sequence(2, 11).is_err());
        assert!(construct_s_sequence(0, 0).is_err());
    }

    #[test]
    fn cut_examples() {
        let h = Diagram::one_backbone(4, vec![(1, 3), (2, 4)]).unwrap();
        assert_eq!(genus(&cut_backbone(&h, 2).unwrap()), 0);
        assert!(genus(&cut_backbone(&h, 1).unwrap()) <= 1);
        assert!(cut_backbone(&h, 0).is_err());
        assert!(cut_backbone(&h, 4).is_err());
    }
}
