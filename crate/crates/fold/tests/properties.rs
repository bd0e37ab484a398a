use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rrfold_core::atlas::enumerate_irreducible_two_backbone;
use rrfold_core::shadow::is_gamma_structure;
use rrfold_fold::grammar::TABLES;
use rrfold_fold::{
    boltzmann_sample, count_structures, fill_tables, mfe, pairing_probabilities, partition_function,
    Boltzmann, EnergyModel, InteractionStructure, Nonterminal, SemiringChoice, SequencePair, Table,
    Tables,
};
use rrfold_oracle::{enumerate_structures, hybrids};

fn pair(max: usize) -> impl Strategy<Value = SequencePair> {
    let strand = move || proptest::string::string_regex(&format!("[ACGU]{{0,{max}}}")).unwrap();
    (strand(), strand())
        .prop_filter("nonempty", |(r, s)| !(r.is_empty() && s.is_empty()))
        .prop_map(|(r, s)| SequencePair::new(&r, &s).unwrap())
}

fn valid(s: &InteractionStructure, p: &SequencePair, m: &EnergyModel) -> bool {
    let d = s.diagram();
    let partners = d.partners();
    let theta_ok = s.arcs.iter().all(|&((i, j), kind)| {
        kind == rrfold_core::ArcKind::Exterior
            || (i + 1..j).any(|k| partners[k] != 0)
            || j - i > m.theta
    });
    theta_ok
        && is_gamma_structure(&d, 0)
        && s.arc_list().iter().all(|&(i, j)| m.arc_energy(p, i, j).is_some())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn emitted_structures_are_valid(p in pair(8), seed in any::<u64>()) {
        let m = EnergyModel::default();
        let (_, best) = mfe(&p, &m).unwrap();
        prop_assert!(valid(&best, &p, &m));
        for s in boltzmann_sample(&p, &m, 25, seed).unwrap() {
            prop_assert!(valid(&s, &p, &m), "{:?}", s.arcs);
        }
    }

    #[test]
    fn sampled_hybrids_are_maximal(p in pair(8), seed in any::<u64>()) {
        let m = EnergyModel::default();
        let t = Tables::<Boltzmann>::fill(&p, &m);
        let n_r = p.r().len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..25 {
            let (arcs, cells) = t.sample_derivation(&mut rng);
            let maximal: BTreeSet<_> = hybrids(n_r, &arcs).into_iter().collect();
            let blocks: BTreeSet<_> = cells
                .iter()
                .filter(|c| c.table == Table::Hy)
                .map(|c| (c.i as usize, c.j as usize, n_r + c.h as usize, n_r + c.l as usize))
                .collect();
            prop_assert_eq!(blocks, maximal);
        }
    }

    #[test]
    fn semirings_are_coherent(p in pair(8)) {
        let m = EnergyModel::default();
        let q = partition_function(&p, &m).unwrap();
        let (e, s) = mfe(&p, &m).unwrap();
        prop_assert!((-e / m.rt).exp() <= q * (1.0 + 1e-12));
        prop_assert!((s.energy - e).abs() < 1e-9);
        prop_assert!(q >= 1.0);
        let count = count_structures(&p, &m).unwrap();
        let flat = partition_function(&p, &EnergyModel::zero()).unwrap();
        prop_assert_eq!(flat, count.to_string().parse::<f64>().unwrap());
    }

    #[test]
    fn cell_marginals_are_probabilities(p in pair(6)) {
        let probs = pairing_probabilities(&p, &EnergyModel::default()).unwrap();
        for t in TABLES {
            for &x in probs.table_probabilities(t) {
                prop_assert!((-1e-12..=1.0 + 1e-9).contains(&x), "{:?} {}", t, x);
            }
        }
        for &x in probs.pairs.values() {
            prop_assert!(x > 0.0 && x <= 1.0 + 1e-9);
        }
        for v in 1..=p.len() {
            prop_assert!(probs.unpaired(v) >= -1e-9);
        }
    }

    #[test]
    fn partition_is_monotone_in_pair_energy(p in pair(6), delta in 0.1..2.0f64) {
        let base = EnergyModel::default();
        let mut lower = base.clone();
        lower.exterior.gc -= delta;
        prop_assert!(partition_function(&p, &lower).unwrap() >= partition_function(&p, &base).unwrap());
    }
}

#[test]
fn every_genus_zero_shadow_folds() {
    // G at left endpoints, C at right endpoints: the shadow is the unique all-paired optimum.
    let m = EnergyModel { theta: 0, ..Default::default() };
    let shadows = enumerate_irreducible_two_backbone(0).unwrap();
    assert_eq!(shadows.len(), 7);
    for e in shadows {
        let d = e.diagram();
        let mut seq = vec!['A'; d.n()];
        for &(i, j) in d.arcs() {
            seq[i - 1] = 'G';
            seq[j - 1] = 'C';
        }
        let n_r = d.r_len();
        let r: String = seq[..n_r].iter().collect();
        let s: String = seq[n_r..].iter().collect();
        let p = SequencePair::new(&r, &s).unwrap();
        let (energy, best) = mfe(&p, &m).unwrap();
        assert_eq!(energy, -3.0 * d.num_arcs() as f64, "{}", e.structure);
        assert!(valid(&best, &p, &m));
        let oracle = enumerate_structures(&p, &m).unwrap();
        assert!(oracle.structures.iter().any(|o| o.arc_list() == d.arcs()));
        assert_eq!(count_structures(&p, &m).unwrap(), oracle.count);
    }
}

#[test]
fn tables_have_at_most_four_indices() {
    let p = SequencePair::new("GGACU", "AGUCC").unwrap();
    let state = fill_tables(&p, &EnergyModel::default(), SemiringChoice::MinPlus).unwrap();
    let shape = state.shape();
    assert_eq!(shape.len(), TABLES.len());
    assert!(shape.iter().all(|&(_, arity, _)| arity <= 4));
    let used: BTreeSet<Nonterminal> = shape.iter().map(|&(t, _, _)| t.nonterminal()).collect();
    assert_eq!(used.into_iter().collect::<Vec<_>>(), Nonterminal::ALL.to_vec());
    // O(n^4) storage: every 4-index table fits in (n_R+1)^2 (n_S+1)^2 cells or the strand analogue.
    let bound = 7usize.pow(4);
    assert!(shape.iter().all(|&(_, _, len)| len <= bound));
}

#[test]
fn samples_follow_the_seed() {
    let p = SequencePair::new("GGUAC", "GUACC").unwrap();
    let m = EnergyModel::default();
    let a = boltzmann_sample(&p, &m, 200, 11).unwrap();
    assert_eq!(a, boltzmann_sample(&p, &m, 200, 11).unwrap());
    assert_ne!(a, boltzmann_sample(&p, &m, 200, 12).unwrap());
}
