use serde::{Deserialize, Serialize};

use rrfold_core::dotbracket::render_structure;
use rrfold_core::{Arc, ArcKind, Diagram, SequencePair};

use crate::energy::{arc_kind, EnergyModel};

/// A folded interaction structure in linear coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteractionStructure {
    pub n_r: usize,
    pub n_s: usize,
    pub arcs: Vec<(Arc, ArcKind)>,
    pub energy: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub probability: Option<f64>,
}

impl InteractionStructure {
    pub fn new(pair: &SequencePair, model: &EnergyModel, mut arcs: Vec<Arc>) -> Self {
        arcs.sort_unstable();
        let n_r = pair.r().len();
        let energy = model.structure_energy(pair, &arcs).unwrap_or(f64::INFINITY);
        InteractionStructure {
            n_r,
            n_s: pair.s().len(),
            arcs: arcs.iter().map(|&(i, j)| ((i, j), arc_kind(n_r, i, j))).collect(),
            energy,
            probability: None,
        }
    }

    pub fn arc_list(&self) -> Vec<Arc> {
        self.arcs.iter().map(|&(a, _)| a).collect()
    }

    pub fn diagram(&self) -> Diagram {
        Diagram::two_backbone(self.n_r, self.n_s, self.arc_list())
            .expect("structure arcs form a matching")
    }

    /// Extended dot-bracket, `R&S`.
    pub fn dot_bracket(&self) -> String {
        render_structure(&self.diagram()).unwrap_or_default()
    }

    /// Number of arcs of each kind, `(interior R, interior S, exterior)`.
    pub fn kind_counts(&self) -> (usize, usize, usize) {
        let count = |k| self.arcs.iter().filter(|&&(_, kind)| kind == k).count();
        (count(ArcKind::InteriorR), count(ArcKind::InteriorS), count(ArcKind::Exterior))
    }
}
