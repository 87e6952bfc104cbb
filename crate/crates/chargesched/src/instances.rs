//! Seeded benchmark instance generation. A fleet is a pure function of
//! `(mode, n, seed)`: identical inputs always produce identical fleets.

use crate::schedule::RobotSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchMode {
    /// Every charging and cycle time is a power of two: `c = 2^a`, `T = 2^b`,
    /// `a < b <= 5`.
    Pow2,
    /// The pow2 instance with independent ±1 slot noise on `c` and `T`,
    /// re-clamped so `c >= 1` and `f >= 1`.
    Perturbed,
}

impl std::fmt::Display for BenchMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BenchMode::Pow2 => f.write_str("pow2"),
            BenchMode::Perturbed => f.write_str("perturbed"),
        }
    }
}

/// Generates a seeded random fleet of `n` robots.
pub fn generate_fleet(mode: BenchMode, n: usize, seed: u64) -> Vec<RobotSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let b: u32 = rng.gen_range(1..=5);
            let a: u32 = rng.gen_range(0..b);
            let mut charge = 1u64 << a;
            let mut cycle = 1u64 << b;
            if mode == BenchMode::Perturbed {
                let dc: i64 = rng.gen_range(-1..=1);
                let dt: i64 = rng.gen_range(-1..=1);
                charge = (charge as i64 + dc).max(1) as u64;
                cycle = (cycle as i64 + dt).max(charge as i64 + 1) as u64;
            }
            RobotSpec::new(format!("r{i}").as_str(), charge, cycle - charge).unwrap()
        })
        .collect()
}
