use rrfold_core::atlas::{
    boundary_profile, construct_s_sequence, cut_backbone, enumerate_irreducible_two_backbone,
    enumerate_shadows_one_backbone, is_shadow,
};
use rrfold_core::topology::{genus, glue_alpha};

#[test]
fn genus_one_atlas_is_closed_under_cut_and_glue() {
    for e in enumerate_shadows_one_backbone(1).unwrap() {
        let d = e.diagram();
        assert!(is_shadow(d));
        for p in 1..d.n() {
            let c = cut_backbone(d, p).unwrap();
            let g = genus(&c);
            assert!(g == e.genus || g + 1 == e.genus);
            assert_eq!(glue_alpha(&c).unwrap().arcs(), d.arcs());
        }
    }
}

#[test]
fn s_sequence_lies_in_the_atlas() {
    for g in 1..=2 {
        let atlas = enumerate_shadows_one_backbone(g).unwrap();
        for l in 2 * g..=6 * g - 2 {
            let s = construct_s_sequence(g, l).unwrap();
            assert_eq!((s.genus, s.diagram.num_arcs()), (g, l));
            assert!(s.is_irreducible);
            assert!(atlas.iter().any(|e| *e.diagram() == s.diagram), "S_{l} of genus {g}");
            // Each insertion splits one length-3 component off the first one.
            let (first, rest) = boundary_profile(&s.diagram);
            assert_eq!(first, 4 * g - (l - 2 * g));
            assert_eq!(rest, vec![3; l - 2 * g]);
        }
    }
}

#[test]
fn s_sequence_genus_three() {
    let s = construct_s_sequence(3, 16).unwrap();
    assert_eq!((s.genus, s.diagram.num_arcs()), (3, 16));
    assert_eq!(boundary_profile(&s.diagram), (2, vec![3; 10]));
}

#[test]
fn genus_one_two_backbone_bounds() {
    let atlas = enumerate_irreducible_two_backbone(1).unwrap();
    assert!(!atlas.is_empty());
    for e in &atlas {
        assert!((3..=10).contains(&e.arcs), "{}", e.structure);
        assert_eq!(e.genus, 1);
        assert!(e.irreducible && e.shadow.is_nontrivial);
    }
}
