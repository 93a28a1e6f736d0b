//! Shared fixtures for the criterion benchmarks.

use spin7_core::random::Sampler;
use spin7_core::{Endo, KForm};

pub const SEED: u64 = 42;

/// Dense random 4-form and rank-one nilpotent.
pub fn fixtures() -> (KForm, Endo) {
    let mut r = Sampler::new(SEED);
    (r.form(4), r.rank_one_nilpotent())
}
