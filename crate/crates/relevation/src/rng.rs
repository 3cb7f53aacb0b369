//! Counter-based uniform streams.
//!
//! Every simulated quantity in this crate is driven by draws that are pure
//! functions of `(master seed, replication index, draw index)`. Replications
//! can therefore be computed in any order, on any number of threads, and
//! still produce bit-identical paths. The generator is a keyed sequence of
//! 64-bit finalizer rounds (the SplitMix64 / Murmur3 avalanche function),
//! which is the usual construction for counter-mode RNGs.

use crate::error::{Error, Result};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const ROUND2: u64 = 0xbf58_476d_1ce4_e5b9;
const ROUND3: u64 = 0x94d0_49bb_1331_11eb;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(ROUND2);
    z = (z ^ (z >> 27)).wrapping_mul(ROUND3);
    z ^ (z >> 31)
}

/// Raw keyed counter hash. Exposed so tests can verify stream purity.
#[inline]
pub fn mix3(seed: u64, replication: u64, counter: u64) -> u64 {
    let mut z = mix(seed.wrapping_add(GOLDEN));
    z = mix(z ^ replication.wrapping_mul(ROUND2).wrapping_add(GOLDEN));
    mix(z ^ counter.wrapping_mul(ROUND3).wrapping_add(GOLDEN))
}

/// Maps 64 random bits to the open interval `(0, 1)`.
///
/// Uses the top 52 bits and centers them on half-steps. With 52 bits the
/// value `k + 0.5` is always exactly representable, so neither endpoint is
/// reachable and `-ln(u)` is always finite. (With 53 bits the largest
/// numerator would round up to 2^53 and produce exactly 1.0.)
#[inline]
pub fn bits_to_unit_open(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / 4_503_599_627_370_496.0)
}

/// Source of uniform draws on `(0, 1)`.
///
/// Implemented by the deterministic [`CounterStream`] for production use and
/// by [`SliceStream`] for tests that pin exact draws.
pub trait UniformSource {
    fn next_uniform(&mut self) -> f64;
}

/// Deterministic stream for one replication.
///
/// Draw `i` equals `bits_to_unit_open(mix3(seed, replication, i))`
/// independently of how many draws were consumed before it, so a path is a
/// pure function of `(seed, replication)`.
#[derive(Debug, Clone)]
pub struct CounterStream {
    seed: u64,
    replication: u64,
    counter: u64,
}

impl CounterStream {
    pub fn new(seed: u64, replication: u64) -> Self {
        Self { seed, replication, counter: 0 }
    }

    /// Random uniform at an explicit draw index, without advancing.
    pub fn at(&self, counter: u64) -> f64 {
        bits_to_unit_open(mix3(self.seed, self.replication, counter))
    }

    pub fn position(&self) -> u64 {
        self.counter
    }
}

impl UniformSource for CounterStream {
    fn next_uniform(&mut self) -> f64 {
        let u = self.at(self.counter);
        self.counter += 1;
        u
    }
}

/// Fixed list of uniforms, optionally cycled. Rejects draws outside `(0, 1)`
/// at construction so downstream samplers never see an invalid uniform.
#[derive(Debug, Clone)]
pub struct SliceStream {
    draws: Vec<f64>,
    index: usize,
    cycle: bool,
}

impl SliceStream {
    pub fn new(draws: &[f64]) -> Result<Self> {
        Self::build(draws, false)
    }

    /// Stream that repeats `draws` forever.
    pub fn cycling(draws: &[f64]) -> Result<Self> {
        Self::build(draws, true)
    }

    fn build(draws: &[f64], cycle: bool) -> Result<Self> {
        if draws.is_empty() {
            return Err(Error::Domain("uniform stream needs at least one draw".into()));
        }
        for &u in draws {
            if !(u > 0.0 && u < 1.0) {
                return Err(Error::Domain(format!(
                    "uniform draw {u} outside the open interval (0, 1)"
                )));
            }
        }
        Ok(Self { draws: draws.to_vec(), index: 0, cycle })
    }
}

impl UniformSource for SliceStream {
    fn next_uniform(&mut self) -> f64 {
        if self.index == self.draws.len() {
            assert!(self.cycle, "fixed uniform stream exhausted after {} draws", self.index);
            self.index = 0;
        }
        let u = self.draws[self.index];
        self.index += 1;
        u
    }
}
