use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Values a grammar can be evaluated in.
pub trait Semiring: Clone + std::fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// Accumulate an alternative.
    fn plus(&mut self, other: Self);
    fn times(&self, other: &Self) -> Self;
    /// Value of one arc with the given energy.
    fn weight(energy: f64, rt: f64) -> Self;
}

/// Structure counting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Count(pub BigUint);

impl Semiring for Count {
    fn zero() -> Self {
        Count(BigUint::zero())
    }
    fn one() -> Self {
        Count(BigUint::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn plus(&mut self, other: Self) {
        self.0 += other.0;
    }
    fn times(&self, other: &Self) -> Self {
        Count(&self.0 * &other.0)
    }
    fn weight(_: f64, _: f64) -> Self {
        Self::one()
    }
}

/// Minimum energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinPlus(pub f64);

impl Semiring for MinPlus {
    fn zero() -> Self {
        MinPlus(f64::INFINITY)
    }
    fn one() -> Self {
        MinPlus(0.0)
    }
    fn is_zero(&self) -> bool {
        self.0 == f64::INFINITY
    }
    fn plus(&mut self, other: Self) {
        if other.0 < self.0 {
            self.0 = other.0;
        }
    }
    fn times(&self, other: &Self) -> Self {
        MinPlus(self.0 + other.0)
    }
    fn weight(energy: f64, _: f64) -> Self {
        MinPlus(energy)
    }
}

/// Sum of Boltzmann weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Boltzmann(pub f64);

impl Semiring for Boltzmann {
    fn zero() -> Self {
        Boltzmann(0.0)
    }
    fn one() -> Self {
        Boltzmann(1.0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0.0
    }
    fn plus(&mut self, other: Self) {
        self.0 += other.0;
    }
    fn times(&self, other: &Self) -> Self {
        Boltzmann(self.0 * other.0)
    }
    fn weight(energy: f64, rt: f64) -> Self {
        Boltzmann((-energy / rt).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities() {
        let mut a = MinPlus(2.0);
        a.plus(MinPlus::zero());
        assert_eq!(a.times(&MinPlus::one()), MinPlus(2.0));
        assert!(MinPlus::zero().times(&a).is_zero());
        let mut c = Count::one();
        c.plus(Count::one());
        assert_eq!(c.times(&c).0, BigUint::from(4u8));
        assert!((Boltzmann::weight(-0.6, 0.6).0 - std::f64::consts::E).abs() < 1e-12);
    }
}
