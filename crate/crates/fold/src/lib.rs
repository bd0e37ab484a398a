//! Genus-zero folding of RNA-RNA interaction structures.
//!
//! The grammar is unambiguous, so the same recursions count structures, find
//! the minimum free energy, compute the partition function, and drive
//! outside probabilities and stochastic sampling.

pub mod energy;
mod error;
pub mod grammar;
pub mod outside;
pub mod semiring;
pub mod structure;
pub mod tables;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use energy::{EnergyModel, PairEnergies};
pub use error::{Error, Result};
pub use grammar::{Cell, Nonterminal, Table};
pub use outside::PairingProbabilities;
pub use rrfold_core::SequencePair;
pub use semiring::{Boltzmann, Count, MinPlus, Semiring};
pub use structure::InteractionStructure;
pub use tables::{DpState, SemiringChoice, Tables};

/// Builds a sequence pair, reporting bad characters as [`Error::InvalidAlphabet`].
pub fn sequence_pair(r: &str, s: &str) -> Result<SequencePair> {
    Ok(SequencePair::new(r, s)?)
}

fn check(pair: &SequencePair, model: &EnergyModel) -> Result<()> {
    model.validate()?;
    model.check_length(pair)
}

pub fn fill_tables(pair: &SequencePair, model: &EnergyModel, semiring: SemiringChoice) -> Result<DpState> {
    check(pair, model)?;
    Ok(match semiring {
        SemiringChoice::Count => DpState::Count(Tables::fill(pair, model)),
        SemiringChoice::MinPlus => DpState::MinPlus(Tables::fill(pair, model)),
        SemiringChoice::Boltzmann => DpState::Boltzmann(partition_tables(pair, model)?),
    })
}

pub fn count_structures(pair: &SequencePair, model: &EnergyModel) -> Result<BigUint> {
    check(pair, model)?;
    Ok(Tables::<Count>::fill(pair, model).root().0.clone())
}

/// Minimum free energy and one structure attaining it.
pub fn mfe(pair: &SequencePair, model: &EnergyModel) -> Result<(f64, InteractionStructure)> {
    check(pair, model)?;
    let tables = Tables::<MinPlus>::fill(pair, model);
    let structure = InteractionStructure::new(pair, model, tables.traceback());
    Ok((tables.root().0, structure))
}

fn partition_tables(pair: &SequencePair, model: &EnergyModel) -> Result<Tables<Boltzmann>> {
    check(pair, model)?;
    let tables = Tables::<Boltzmann>::fill(pair, model);
    if !tables.root().0.is_finite() {
        return Err(Error::Overflow);
    }
    Ok(tables)
}

pub fn partition_function(pair: &SequencePair, model: &EnergyModel) -> Result<f64> {
    Ok(partition_tables(pair, model)?.root().0)
}

pub fn pairing_probabilities(pair: &SequencePair, model: &EnergyModel) -> Result<PairingProbabilities> {
    PairingProbabilities::compute(&partition_tables(pair, model)?)
}

/// Marginals from already filled tables.
pub fn probabilities_from(state: &DpState) -> Result<PairingProbabilities> {
    PairingProbabilities::compute(state.as_partition().ok_or(Error::RequiresPartitionTables)?)
}

pub fn boltzmann_sample(
    pair: &SequencePair,
    model: &EnergyModel,
    k: usize,
    seed: u64,
) -> Result<Vec<InteractionStructure>> {
    sample_from(&DpState::Boltzmann(partition_tables(pair, model)?), k, seed)
}

/// `k` independent draws from already filled tables; deterministic in `seed`.
pub fn sample_from(state: &DpState, k: usize, seed: u64) -> Result<Vec<InteractionStructure>> {
    let tables = state.as_partition().ok_or(Error::RequiresPartitionTables)?;
    let (pair, model) = (tables.pair(), tables.model());
    let q = tables.root().0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..k)
        .map(|_| {
            let mut s = InteractionStructure::new(pair, model, tables.sample(&mut rng));
            s.probability = Some((-s.energy / model.rt).exp() / q);
            s
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(r: &str, s: &str) -> SequencePair {
        SequencePair::new(r, s).unwrap()
    }

    #[test]
    fn count_examples() {
        let m = EnergyModel::default();
        assert_eq!(count_structures(&pair("AA", "UU"), &m).unwrap(), BigUint::from(7u8));
        assert_eq!(count_structures(&pair("G", "C"), &m).unwrap(), BigUint::from(2u8));
        assert_eq!(count_structures(&pair("AA", "GG"), &m).unwrap(), BigUint::from(1u8));
        assert_eq!(count_structures(&pair("AAA", ""), &m).unwrap(), BigUint::from(1u8));
    }

    #[test]
    fn empty_intervals_are_one() {
        let t = Tables::<Count>::fill(&pair("GC", "GC"), &EnergyModel::default());
        let g = t.grammar();
        for (i, h) in [(1, 1), (3, 3), (1, 3), (3, 1)] {
            let c = Cell { table: Table::I, i, j: i - 1, h, l: h - 1 };
            assert_eq!(t.get(c).0, BigUint::from(1u8));
        }
        assert!(g.table_len(Table::I) > 0);
    }

    #[test]
    fn mfe_examples() {
        let m = EnergyModel::default();
        let (e, s) = mfe(&pair("GGG", "CCC"), &m).unwrap();
        assert_eq!(e, -9.0);
        assert_eq!(s.arc_list(), vec![(1, 6), (2, 5), (3, 4)]);
        assert_eq!(s.energy, -9.0);
        let (e, s) = mfe(&pair("AA", "GG"), &m).unwrap();
        assert_eq!(e, 0.0);
        assert!(s.arcs.is_empty());
    }

    #[test]
    fn partition_examples() {
        let m = EnergyModel::default();
        let q = partition_function(&pair("AA", "UU"), &m).unwrap();
        let expect = 1.0 + 4.0 * (2.0f64 / 0.6).exp() + 2.0 * (4.0f64 / 0.6).exp();
        assert!((q - expect).abs() <= 1e-12 * expect);
        assert_eq!(partition_function(&pair("AA", "UU"), &EnergyModel::zero()).unwrap(), 7.0);
    }

    #[test]
    fn probability_examples() {
        let p = pairing_probabilities(&pair("AA", "UU"), &EnergyModel::zero()).unwrap();
        assert!((p.pair(1, 3) - 2.0 / 7.0).abs() < 1e-12);
        let root = Cell { table: Table::I, i: 1, j: 2, h: 1, l: 2 };
        assert!((p.cell_probability(root) - 1.0).abs() < 1e-12);
        let state = fill_tables(&pair("AA", "UU"), &EnergyModel::zero(), SemiringChoice::Count).unwrap();
        assert_eq!(probabilities_from(&state).unwrap_err(), Error::RequiresPartitionTables);
    }

    #[test]
    fn errors() {
        let m = EnergyModel { max_len: 3, ..Default::default() };
        assert_eq!(count_structures(&pair("AA", "UU"), &m).unwrap_err(), Error::LengthCap { len: 4, cap: 3 });
        assert!(matches!(sequence_pair("AX", "U"), Err(Error::InvalidAlphabet { ch: 'X', .. })));
        let hot = EnergyModel { rt: 1e-3, ..Default::default() };
        assert_eq!(partition_function(&pair("GGGGGGGGGG", "CCCCCCCCCC"), &hot).unwrap_err(), Error::Overflow);
    }

    #[test]
    fn sampling_is_seeded() {
        let p = pair("GGAC", "GUCC");
        let m = EnergyModel::default();
        let a = boltzmann_sample(&p, &m, 20, 7).unwrap();
        assert_eq!(a, boltzmann_sample(&p, &m, 20, 7).unwrap());
        assert!(a.iter().all(|s| s.probability.unwrap() > 0.0));
    }
}
