use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tolerances;

pub type Operator = Matrix2<Complex64>;

/// One invertible 2x2 operator per qubit, `ops[k]` acting on qubit `k + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperatorChain {
    ops: Vec<Operator>,
    dets: Vec<Complex64>,
}

impl LocalOperatorChain {
    /// Builds a chain, rejecting any operator with `|det|` below the default
    /// invertibility floor.
    pub fn new(ops: Vec<Operator>) -> Result<Self> {
        Self::with_floor(ops, tolerances::INVERTIBILITY_FLOOR)
    }

    pub fn with_floor(ops: Vec<Operator>, floor: f64) -> Result<Self> {
        let dets: Vec<Complex64> = ops.iter().map(|m| m.determinant()).collect();
        for (index, d) in dets.iter().enumerate() {
            let det_abs = d.norm();
            if det_abs == 0.0 || det_abs < floor {
                return Err(Error::Singular {
                    index,
                    det_abs,
                    floor,
                });
            }
        }
        Ok(Self { ops, dets })
    }

    pub fn identity(n: usize) -> Self {
        Self::uniform(n, Operator::identity()).expect("identity is invertible")
    }

    /// The same operator on every qubit.
    pub fn uniform(n: usize, op: Operator) -> Result<Self> {
        Self::with_floor(vec![op; n], 0.0)
    }

    pub fn n(&self) -> usize {
        self.ops.len()
    }

    pub fn ops(&self) -> &[Operator] {
        &self.ops
    }

    pub fn dets(&self) -> &[Complex64] {
        &self.dets
    }

    /// `Π_k |det F^(k)|`.
    pub fn det_abs_product(&self) -> f64 {
        self.dets.iter().map(|d| d.norm()).product()
    }

    /// Chain equivalent to applying `self` and then `next`: per qubit,
    /// `next.ops[k] * self.ops[k]`.
    pub fn then(&self, next: &LocalOperatorChain) -> Result<Self> {
        if next.n() != self.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                got: next.n(),
            });
        }
        let ops = self.ops.iter().zip(&next.ops).map(|(a, b)| b * a).collect();
        Self::with_floor(ops, 0.0)
    }
}

pub fn pauli_x() -> Operator {
    let (o, i) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    Operator::new(o, i, i, o)
}

pub fn diag(a: Complex64, b: Complex64) -> Operator {
    Operator::new(a, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), b)
}

/// Draw counts from a sampling run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SamplerStats {
    pub drawn: u64,
    pub accepted: u64,
}

impl SamplerStats {
    pub fn acceptance_rate(&self) -> f64 {
        if self.drawn == 0 {
            0.0
        } else {
            self.accepted as f64 / self.drawn as f64
        }
    }

    pub fn merge(&mut self, other: SamplerStats) {
        self.drawn += other.drawn;
        self.accepted += other.accepted;
    }
}

/// Rejection sampler for random invertible local operators.
///
/// Entries have real and imaginary parts uniform on `[-1, 1]`; matrices with
/// `|det|` below `floor` are redrawn. Output is a pure function of the seed.
#[derive(Clone, Copy, Debug)]
pub struct IloSampler {
    pub floor: f64,
}

impl Default for IloSampler {
    fn default() -> Self {
        Self {
            floor: tolerances::INVERTIBILITY_FLOOR,
        }
    }
}

impl IloSampler {
    pub fn sample(&self, n: usize, seed: u64) -> (LocalOperatorChain, SamplerStats) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut stats = SamplerStats::default();
        let entry = |rng: &mut ChaCha8Rng| {
            Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
        };
        let ops = (0..n)
            .map(|_| loop {
                let m = Operator::new(
                    entry(&mut rng),
                    entry(&mut rng),
                    entry(&mut rng),
                    entry(&mut rng),
                );
                stats.drawn += 1;
                if m.determinant().norm() >= self.floor {
                    stats.accepted += 1;
                    break m;
                }
            })
            .collect();
        let chain = LocalOperatorChain::with_floor(ops, self.floor)
            .expect("sampled operators satisfy the floor");
        (chain, stats)
    }
}

/// Seeded random chain with the default invertibility floor.
pub fn random_ilo(n: usize, seed: u64) -> LocalOperatorChain {
    IloSampler::default().sample(n, seed).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(random_ilo(3, 42), random_ilo(3, 42));
        assert_ne!(random_ilo(3, 42), random_ilo(3, 43));
    }

    #[test]
    fn floor_is_respected() {
        for seed in 0..200 {
            let c = random_ilo(4, seed);
            assert!(c.dets().iter().all(|d| d.norm() >= 0.05));
        }
    }

    #[test]
    fn acceptance_rate_is_recorded() {
        let sampler = IloSampler::default();
        let mut stats = SamplerStats::default();
        for seed in 0..1000 {
            stats.merge(sampler.sample(2, seed).1);
        }
        assert_eq!(stats.accepted, 2000);
        assert!(stats.drawn >= 2000);
        let rate = stats.acceptance_rate();
        assert!(rate > 0.0 && rate <= 1.0);
    }

    #[test]
    fn singular_operators_rejected() {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let singular = Operator::new(one, one, one, one);
        assert!(matches!(
            LocalOperatorChain::new(vec![Operator::identity(), singular]),
            Err(Error::Singular { index: 1, .. })
        ));
        let small = diag(Complex64::new(0.01, 0.0), one);
        assert!(LocalOperatorChain::new(vec![small]).is_err());
        assert!(LocalOperatorChain::with_floor(vec![small], 0.001).is_ok());
        assert!(LocalOperatorChain::uniform(2, diag(z, one)).is_err());
    }

    #[test]
    fn composition_multiplies_per_qubit() {
        let a = random_ilo(3, 1);
        let b = random_ilo(3, 2);
        let ab = a.then(&b).unwrap();
        for k in 0..3 {
            assert!((ab.ops()[k] - b.ops()[k] * a.ops()[k]).norm() < 1e-15);
            assert!((ab.dets()[k] - a.dets()[k] * b.dets()[k]).norm() < 1e-14);
        }
    }
}
