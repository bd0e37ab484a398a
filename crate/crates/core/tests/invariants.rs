use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rrfold_core::dotbracket::{parse_structure, render_structure};
use rrfold_core::shadow::{irreducible_shadows, shadow};
use rrfold_core::topology::{
    backbone_components, boundary_components, genus, glue_alpha, inflated_boundary_count,
    product_bullet,
};
use rrfold_core::{arcs_cross, ArcKind, Diagram, Error};

fn random_diagram(seed: u64, backbones: usize, max_arcs: usize) -> Diagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(0..=2 * max_arcs + 4);
    let arcs = rng.gen_range(0..=max_arcs.min(n / 2));
    let mut verts: Vec<usize> = (1..=n).collect();
    verts.shuffle(&mut rng);
    let pairs = verts.chunks(2).take(arcs).map(|c| (c[0], c[1])).collect();
    if backbones == 1 {
        Diagram::one_backbone(n, pairs).unwrap()
    } else {
        let cut = rng.gen_range(0..=n);
        Diagram::two_backbone(cut, n - cut, pairs).unwrap()
    }
}

fn any_diagram() -> impl Strategy<Value = Diagram> {
    (any::<u64>(), 1usize..=2, 0usize..=12).prop_map(|(s, b, m)| random_diagram(s, b, m))
}

fn two_backbone() -> impl Strategy<Value = Diagram> {
    (any::<u64>(), 0usize..=8).prop_map(|(s, m)| random_diagram(s, 2, m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn crossing_is_symmetric_and_irreflexive(d in any_diagram()) {
        for &a in d.arcs() {
            prop_assert!(!arcs_cross(a, a));
            for &b in d.arcs() {
                prop_assert_eq!(arcs_cross(a, b), arcs_cross(b, a));
            }
        }
    }

    #[test]
    fn arc_kinds_partition(d in two_backbone()) {
        let total: usize = [ArcKind::InteriorR, ArcKind::InteriorS, ArcKind::Exterior]
            .iter()
            .map(|&k| d.arcs_of_kind(k).len())
            .sum();
        prop_assert_eq!(total, d.num_arcs());
    }

    #[test]
    fn dot_bracket_round_trip(d in any_diagram()) {
        match render_structure(&d) {
            Ok(text) => prop_assert_eq!(parse_structure(&text).unwrap(), d),
            Err(e) => prop_assert_eq!(e, Error::LayerOverflow),
        }
    }

    #[test]
    fn ap_implies_no_zigzag(d in two_backbone()) {
        if d.is_ap_structure().unwrap().is_ap {
            prop_assert!(d.detect_zigzag().unwrap().is_none());
        }
    }

    #[test]
    fn euler_relation_per_component(d in any_diagram()) {
        let rep = boundary_components(&d);
        prop_assert_eq!(rep.boundary_lengths.iter().sum::<usize>(), 2 * d.num_arcs());
        prop_assert_eq!(rep.r, rep.boundary_lengths.len());
        prop_assert_eq!(rep.chi, d.num_backbones() as i64 - d.num_arcs() as i64);
        let comps = backbone_components(&d);
        prop_assert_eq!(comps.len(), rep.genus_per_component.len());
        // Summed over components: 2c - 2g - r = b - n.
        let c = comps.len() as i64;
        let g = rep.genus_total as i64;
        prop_assert_eq!(2 * c - 2 * g - rep.r as i64, rep.chi);
    }

    #[test]
    fn collapsing_backbones_preserves_boundaries(d in any_diagram()) {
        prop_assert_eq!(inflated_boundary_count(&d), boundary_components(&d).r);
    }

    #[test]
    fn gluing_raises_genus_by_at_most_one(d in two_backbone()) {
        let g = genus(&d);
        let ga = genus(&glue_alpha(&d).unwrap());
        prop_assert!(ga == g || ga == g + 1);
    }

    #[test]
    fn product_is_associative_and_unital(a in two_backbone(), b in two_backbone(), c in two_backbone()) {
        let unit = Diagram::two_backbone(0, 0, vec![]).unwrap();
        prop_assert_eq!(&product_bullet(&a, &unit).unwrap(), &a);
        prop_assert_eq!(&product_bullet(&unit, &a).unwrap(), &a);
        let left = product_bullet(&product_bullet(&a, &b).unwrap(), &c).unwrap();
        let right = product_bullet(&a, &product_bullet(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn shadow_is_idempotent(d in any_diagram()) {
        let s = shadow(&d);
        prop_assert_eq!(&shadow(&s.diagram).diagram, &s.diagram);
        prop_assert_eq!(s.diagram.num_backbones(), d.num_backbones());
    }

    #[test]
    fn shadow_preserves_genus_on_one_backbone(s in any::<u64>(), m in 0usize..=12) {
        let d = random_diagram(s, 1, m);
        prop_assert_eq!(shadow(&d).genus, genus(&d));
    }

    #[test]
    fn decomposition_covers_the_shadow(d in any_diagram()) {
        let s = shadow(&d);
        let dec = irreducible_shadows(&d);
        let covered: usize = dec.trace.iter().map(|st| st.arcs.len()).sum();
        prop_assert_eq!(covered, s.diagram.num_arcs());
        for step in &dec.trace {
            let again = shadow(&step.shadow);
            prop_assert_eq!(&again.diagram, &step.shadow);
            prop_assert!(again.is_irreducible);
            for &a in &step.arcs {
                prop_assert!(d.arcs().contains(&a));
            }
        }
    }
}

#[test]
fn sigma_can_lower_genus_over_two_backbones() {
    // (4,5) is non-crossing but non-separating; deleting it drops a handle.
    let d = Diagram::two_backbone(4, 4, vec![(1, 3), (2, 6), (4, 5), (7, 8)]).unwrap();
    assert_eq!(genus(&d), 1);
    let s = shadow(&d);
    assert_eq!(s.diagram, Diagram::two_backbone(3, 1, vec![(1, 3), (2, 4)]).unwrap());
    assert_eq!(s.genus, 0);
}
