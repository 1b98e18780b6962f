//! Shared inputs for the criterion benches.

use surreal_core::oracle::{Sampler, SamplerConfig};
use surreal_core::{Nf, SurrealNF};

/// A fixed batch of normal forms drawn from the default sampler.
pub fn fragments(seed: u64, n: usize) -> Vec<Nf> {
    let mut s = Sampler::new(SamplerConfig::with_seed(seed));
    (0..n).map(|_| s.fragment()).collect()
}

pub fn constant_free(seed: u64, n: usize) -> Vec<SurrealNF> {
    let mut s = Sampler::new(SamplerConfig::with_seed(seed));
    (0..n).map(|_| SurrealNF::finite(s.constant_free())).collect()
}
