//! Shadow projection, crossing components and the irreducible decomposition.

use serde::Serialize;

use crate::diagram::{arcs_cross, Arc, Diagram};
use crate::topology::{genus, glue_alpha};
use crate::{Error, Result};

/// A diagram with no non-crossing arcs, no isolated vertices and no stacks of
/// size greater than one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Shadow {
    pub diagram: Diagram,
    pub is_nontrivial: bool,
    pub is_irreducible: bool,
    pub genus: usize,
}

impl Shadow {
    fn from_projected(diagram: Diagram) -> Self {
        let partner = diagram.partners();
        let is_nontrivial = diagram.num_arcs() > 0
            && diagram.backbones().iter().all(|&(lo, hi)| (lo..=hi).any(|v| partner[v] != 0));
        Shadow {
            is_irreducible: is_irreducible(&diagram),
            genus: genus(&diagram),
            is_nontrivial,
            diagram,
        }
    }
}

/// Arcs carry the index of the arc they descend from.
#[derive(Clone)]
struct Work {
    lengths: Vec<usize>,
    arcs: Vec<(usize, usize, usize)>,
}

impl Work {
    fn from_diagram(d: &Diagram) -> Self {
        Work {
            lengths: d.backbone_lengths(),
            arcs: d.arcs().iter().enumerate().map(|(k, &(i, j))| (i, j, k)).collect(),
        }
    }

    fn backbone_of(&self, v: usize) -> usize {
        let mut hi = 0;
        for (k, &len) in self.lengths.iter().enumerate() {
            hi += len;
            if v <= hi {
                return k;
            }
        }
        self.lengths.len() - 1
    }

    /// Drops unpaired vertices and relabels; returns whether anything changed.
    fn compact(&mut self) -> bool {
        let n: usize = self.lengths.iter().sum();
        let mut paired = vec![false; n + 1];
        for &(i, j, _) in &self.arcs {
            paired[i] = true;
            paired[j] = true;
        }
        let mut label = vec![0; n + 1];
        let mut next = 0;
        let mut lengths = vec![0; self.lengths.len()];
        let mut v = 0;
        for (k, &len) in self.lengths.iter().enumerate() {
            for _ in 0..len {
                v += 1;
                if paired[v] {
                    next += 1;
                    label[v] = next;
                    lengths[k] += 1;
                }
            }
        }
        let changed = next != n;
        for a in &mut self.arcs {
            a.0 = label[a.0];
            a.1 = label[a.1];
        }
        self.arcs.sort_unstable();
        self.lengths = lengths;
        changed
    }

    fn remove_noncrossing(&mut self) -> bool {
        let before = self.arcs.len();
        let arcs = self.arcs.clone();
        self.arcs.retain(|&(i, j, t)| {
            arcs.iter().any(|&(x, y, u)| u != t && arcs_cross((i, j), (x, y)))
        });
        self.arcs.len() != before
    }

    /// Removes every arc `(i+1, j-1)` sitting directly under an arc `(i, j)`
    /// with both steps inside one backbone. Returns the removed tags.
    fn collapse_stacks(&mut self) -> Vec<usize> {
        let n: usize = self.lengths.iter().sum();
        let mut partner = vec![0; n + 2];
        for &(i, j, _) in &self.arcs {
            partner[i] = j;
            partner[j] = i;
        }
        let mut inner = Vec::new();
        for &(i, j, _) in &self.arcs {
            if j >= i + 3
                && partner[i + 1] == j - 1
                && self.backbone_of(i) == self.backbone_of(i + 1)
                && self.backbone_of(j - 1) == self.backbone_of(j)
            {
                inner.push((i + 1, j - 1));
            }
        }
        let mut removed = Vec::new();
        self.arcs.retain(|&(i, j, t)| {
            let drop = inner.contains(&(i, j));
            if drop {
                removed.push(t);
            }
            !drop
        });
        removed
    }

    /// Iterates removal, compaction and stack collapse to a fixed point.
    fn project(&mut self) -> Vec<usize> {
        let mut collapsed = Vec::new();
        loop {
            let mut changed = self.remove_noncrossing();
            changed |= self.compact();
            let gone = self.collapse_stacks();
            changed |= !gone.is_empty();
            collapsed.extend(gone);
            changed |= self.compact();
            if !changed {
                return collapsed;
            }
        }
    }

    fn to_diagram(&self) -> Diagram {
        Diagram::from_lengths(&self.lengths, self.arcs.iter().map(|&(i, j, _)| (i, j)).collect())
            .expect("projection keeps a valid matching")
    }
}

/// The shadow projection: remove non-crossing arcs, delete isolated vertices
/// and collapse stacks until nothing changes. The backbone count is kept.
pub fn shadow(d: &Diagram) -> Shadow {
    let mut w = Work::from_diagram(d);
    w.project();
    Shadow::from_projected(w.to_diagram())
}

/// Connected components of the crossing graph, each sorted, in order of their
/// leftmost endpoint.
pub fn crossing_components(d: &Diagram) -> Vec<Vec<Arc>> {
    let arcs = d.arcs();
    let mut comp: Vec<usize> = (0..arcs.len()).collect();
    fn root(c: &mut [usize], mut x: usize) -> usize {
        while c[x] != x {
            c[x] = c[c[x]];
            x = c[x];
        }
        x
    }
    for a in 0..arcs.len() {
        for b in a + 1..arcs.len() {
            if arcs_cross(arcs[a], arcs[b]) {
                let (x, y) = (root(&mut comp, a), root(&mut comp, b));
                comp[x.max(y)] = x.min(y);
            }
        }
    }
    let mut out: Vec<Vec<Arc>> = Vec::new();
    let mut slot = vec![usize::MAX; arcs.len()];
    for a in 0..arcs.len() {
        let r = root(&mut comp, a);
        if slot[r] == usize::MAX {
            slot[r] = out.len();
            out.push(Vec::new());
        }
        out[slot[r]].push(arcs[a]);
    }
    out
}

/// At least two arcs and a connected crossing graph.
pub fn is_irreducible(d: &Diagram) -> bool {
    d.num_arcs() >= 2 && crossing_components(d).len() == 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ShadowClass {
    I1,
    #[serde(rename = "I2_0")]
    I20,
    #[serde(rename = "I2_1")]
    I21,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RemovalStep {
    pub class: ShadowClass,
    pub genus: usize,
    pub shadow: Diagram,
    /// Arcs of the input diagram making up this shadow.
    pub arcs: Vec<Arc>,
    /// Input arcs folded into a neighbour by stacks the removal induced.
    pub collapsed: Vec<Arc>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IrreducibleDecomposition {
    #[serde(rename = "I1")]
    pub i1: Vec<Diagram>,
    #[serde(rename = "I2_0")]
    pub i2_0: Vec<Diagram>,
    #[serde(rename = "I2_1")]
    pub i2_1: Vec<Diagram>,
    pub trace: Vec<RemovalStep>,
}

impl IrreducibleDecomposition {
    pub fn len(&self) -> usize {
        self.trace.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trace.is_empty()
    }

    pub fn shadows(&self) -> impl Iterator<Item = &RemovalStep> {
        self.trace.iter()
    }
}

struct Piece {
    arcs: Vec<Arc>,
    shadow: Diagram,
    original: Vec<Arc>,
    collapsed: Vec<Arc>,
    two_backbone: bool,
}

/// Projects `d`, splits the projection into crossing components and
/// classifies the shadow of each. One-backbone shadows are removed first,
/// innermost first; two-backbone shadows follow in order of their leftmost
/// `S` vertex.
pub fn irreducible_shadows(d: &Diagram) -> IrreducibleDecomposition {
    let mut w = Work::from_diagram(d);
    w.project();
    let projected = w.to_diagram();
    let origin: Vec<Arc> = w.arcs.iter().map(|&(_, _, t)| d.arcs()[t]).collect();
    let index_of = |a: Arc| projected.arcs().binary_search(&a).unwrap();

    let mut pieces: Vec<Piece> = crossing_components(&projected)
        .into_iter()
        .map(|arcs| {
            let sub = projected.with_arcs(arcs.clone()).unwrap();
            let mut sw = Work::from_diagram(&sub);
            let collapsed = sw.project().into_iter().map(|t| origin[index_of(arcs[t])]).collect();
            let kept: Vec<Arc> = sw.arcs.iter().map(|&(_, _, t)| arcs[t]).collect();
            let two_backbone = sw.lengths.iter().all(|&l| l > 0) && sw.lengths.len() == 2;
            let shadow = if two_backbone || sw.lengths.len() == 1 {
                sw.to_diagram()
            } else {
                let n = sw.lengths.iter().sum();
                Diagram::one_backbone(n, sw.arcs.iter().map(|&(i, j, _)| (i, j)).collect()).unwrap()
            };
            let mut original: Vec<Arc> = arcs.iter().map(|&a| origin[index_of(a)]).collect();
            original.sort_unstable();
            Piece { arcs: kept, shadow, original, collapsed, two_backbone }
        })
        .collect();

    let mut order: Vec<usize> = Vec::with_capacity(pieces.len());
    let mut ones: Vec<usize> = (0..pieces.len()).filter(|&k| !pieces[k].two_backbone).collect();
    while !ones.is_empty() {
        let nested_in = |outer: &Piece, inner: &Piece| {
            let lo = inner.arcs.iter().map(|a| a.0).min().unwrap();
            let hi = inner.arcs.iter().map(|a| a.1).max().unwrap();
            outer.arcs.iter().any(|a| a.0 < lo && hi < a.1)
        };
        let pick = ones
            .iter()
            .copied()
            .filter(|&k| !ones.iter().any(|&m| m != k && nested_in(&pieces[k], &pieces[m])))
            .min_by_key(|&k| pieces[k].arcs[0].0)
            .unwrap();
        order.push(pick);
        ones.retain(|&k| k != pick);
    }
    let r_len = projected.r_len();
    let mut twos: Vec<usize> = (0..pieces.len()).filter(|&k| pieces[k].two_backbone).collect();
    twos.sort_by_key(|&k| {
        pieces[k].arcs.iter().flat_map(|&(i, j)| [i, j]).filter(|&v| v > r_len).min()
    });
    order.extend(twos);

    let mut out = IrreducibleDecomposition::default();
    for k in order {
        let p = std::mem::replace(
            &mut pieces[k],
            Piece { arcs: vec![], shadow: projected.clone(), original: vec![], collapsed: vec![], two_backbone: false },
        );
        let g = genus(&p.shadow);
        let class = if !p.two_backbone {
            ShadowClass::I1
        } else if genus(&glue_alpha(&p.shadow).unwrap()) == g {
            ShadowClass::I20
        } else {
            ShadowClass::I21
        };
        match class {
            ShadowClass::I1 => out.i1.push(p.shadow.clone()),
            ShadowClass::I20 => out.i2_0.push(p.shadow.clone()),
            ShadowClass::I21 => out.i2_1.push(p.shadow.clone()),
        }
        out.trace.push(RemovalStep {
            class,
            genus: g,
            shadow: p.shadow,
            arcs: p.original,
            collapsed: p.collapsed,
        });
    }
    out
}

/// Largest genus among the irreducible shadows, 0 when there are none.
pub fn gamma(d: &Diagram) -> usize {
    irreducible_shadows(d).trace.iter().map(|s| s.genus).max().unwrap_or(0)
}

pub fn is_gamma_structure(d: &Diagram, gamma_bound: usize) -> bool {
    gamma(d) <= gamma_bound
}

/// Genus of a two-backbone diagram assembled from its irreducible shadows.
pub fn genus_by_decomposition(e: &Diagram) -> Result<usize> {
    if !e.is_two_backbone() {
        return Err(Error::NotTwoBackbones);
    }
    let dec = irreducible_shadows(e);
    if dec.i2_0.is_empty() && dec.i2_1.is_empty() {
        return Err(Error::NoExteriorIrreducible);
    }
    let sum: usize = dec
        .trace
        .iter()
        .map(|s| match s.class {
            ShadowClass::I21 => s.genus + 1,
            _ => s.genus,
        })
        .sum();
    Ok(if dec.i2_0.is_empty() { sum - 1 } else { sum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dotbracket::parse_structure;
    use crate::topology::product_bullet;

    fn one(n: usize, arcs: &[Arc]) -> Diagram {
        Diagram::one_backbone(n, arcs.to_vec()).unwrap()
    }

    #[test]
    fn shadow_examples() {
        let s = shadow(&one(8, &[(1, 8), (2, 4), (3, 5)]));
        assert_eq!(s.diagram, one(4, &[(1, 3), (2, 4)]));
        let s = shadow(&parse_structure("((..))..((.))").unwrap());
        assert_eq!(s.diagram, one(0, &[]));
        let stacked = one(8, &[(1, 6), (2, 5), (3, 8), (4, 7)]);
        let s = shadow(&stacked);
        assert_eq!(s.diagram, one(4, &[(1, 3), (2, 4)]));
        assert_eq!(s.genus, genus(&stacked));
        assert!(s.is_irreducible && s.is_nontrivial);
        // Four mutually crossing arcs hold no stack at all.
        let s4 = one(8, &[(1, 5), (2, 6), (3, 7), (4, 8)]);
        assert_eq!(shadow(&s4).diagram, s4);
        assert_eq!(shadow(&s4).genus, 2);
    }

    #[test]
    fn empty_two_backbone_projection() {
        let d = parse_structure("((...))&..").unwrap();
        let s = shadow(&d);
        assert_eq!(s.diagram.backbone_lengths(), vec![0, 0]);
        assert!(!s.is_nontrivial);
    }

    #[test]
    fn stacks_need_one_backbone_per_side() {
        // (2,3) sits under (1,4) but 2 and 3 are on different backbones.
        let d = Diagram::two_backbone(2, 4, vec![(1, 4), (2, 3), (5, 6)]).unwrap();
        let w = shadow(&d);
        assert_eq!(w.diagram.num_arcs(), 0);
        let split = Diagram::two_backbone(1, 3, vec![(1, 4), (2, 3)]).unwrap();
        assert!(Work::from_diagram(&split).collapse_stacks().is_empty());
        let nested = Diagram::two_backbone(2, 2, vec![(1, 4), (2, 3)]).unwrap();
        assert_eq!(Work::from_diagram(&nested).collapse_stacks(), vec![1]);
    }

    #[test]
    fn component_examples() {
        assert_eq!(crossing_components(&one(4, &[(1, 3), (2, 4)])).len(), 1);
        assert_eq!(crossing_components(&one(4, &[(1, 4), (2, 3)])).len(), 2);
        assert_eq!(crossing_components(&one(6, &[(1, 3), (2, 5), (4, 6)])).len(), 1);
        assert!(!is_irreducible(&one(2, &[(1, 2)])));
    }

    #[test]
    fn decomposition_examples() {
        let hybrid = Diagram::two_backbone(2, 2, vec![(1, 3), (2, 4)]).unwrap();
        let dec = irreducible_shadows(&hybrid);
        assert_eq!((dec.i1.len(), dec.i2_0.len(), dec.i2_1.len()), (0, 0, 1));
        assert_eq!(dec.i2_1[0], hybrid);
        let h = one(4, &[(1, 3), (2, 4)]);
        assert_eq!(irreducible_shadows(&h).i1, vec![h]);
    }

    #[test]
    fn decomposition_order_and_trace() {
        // An H-type pseudoknot on R nested under the two crossing families of
        // a two-backbone shadow, next to a second crossing hybrid.
        let hybrid = Diagram::two_backbone(2, 2, vec![(1, 3), (2, 4)]).unwrap();
        let pk = Diagram::two_backbone(4, 0, vec![(1, 3), (2, 4)]).unwrap();
        let inner = product_bullet(&pk, &hybrid).unwrap();
        let d = product_bullet(&hybrid, &inner).unwrap();
        let dec = irreducible_shadows(&d);
        assert_eq!(dec.trace.len(), 3);
        assert_eq!(dec.trace[0].class, ShadowClass::I1);
        assert_eq!(dec.trace[1].class, ShadowClass::I21);
        assert_eq!(dec.trace[2].class, ShadowClass::I21);
        // The second removal holds the leftmost S vertex.
        let s_min = |step: &RemovalStep| {
            step.arcs.iter().flat_map(|&(i, j)| [i, j]).filter(|&v| v > d.r_len()).min().unwrap()
        };
        assert!(s_min(&dec.trace[1]) < s_min(&dec.trace[2]));
        let all: usize = dec.trace.iter().map(|s| s.arcs.len()).sum();
        assert_eq!(all, d.num_arcs());
    }

    #[test]
    fn induced_stacks_are_logged() {
        // A pseudoknot inside the gap of a crossed stem: removing it leaves
        // (2, 13) and (7, 12) stacked.
        let d = one(14, &[(1, 10), (2, 13), (3, 5), (4, 6), (7, 12), (11, 14)]);
        let dec = irreducible_shadows(&d);
        assert_eq!(dec.trace[0].arcs, vec![(3, 5), (4, 6)]);
        let big = &dec.trace[1];
        assert_eq!(big.collapsed, vec![(7, 12)]);
        assert_eq!(big.shadow.num_arcs(), 3);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(&parse_structure("((..))&.(.)").unwrap()), 0);
        let hybrid = Diagram::two_backbone(2, 2, vec![(1, 3), (2, 4)]).unwrap();
        assert_eq!(gamma(&hybrid), 0);
        assert!(is_gamma_structure(&hybrid, 0));
        assert_eq!(gamma(&parse_structure("(([..))]").unwrap()), 1);
    }

    #[test]
    fn lemma_examples() {
        let hybrid = Diagram::two_backbone(2, 2, vec![(1, 3), (2, 4)]).unwrap();
        assert_eq!(genus_by_decomposition(&hybrid), Ok(0));
        let hh = product_bullet(&hybrid, &hybrid).unwrap();
        assert_eq!(genus_by_decomposition(&hh), Ok(genus(&hh)));
        let nested = Diagram::two_backbone(2, 2, vec![(1, 4), (2, 3)]).unwrap();
        assert_eq!(genus_by_decomposition(&nested), Err(Error::NoExteriorIrreducible));
        assert_eq!(genus_by_decomposition(&one(2, &[])), Err(Error::NotTwoBackbones));
    }
}
