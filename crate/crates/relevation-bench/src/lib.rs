//! Shared fixtures for the benchmarks in `benches/`.

use relevation::{DistributionSequence, LifetimeDistribution};

pub fn dist(s: &str) -> LifetimeDistribution {
    s.parse().expect(s)
}

pub fn iid(s: &str) -> DistributionSequence {
    DistributionSequence::iid(dist(s))
}
