//! Seeded sampling. Every stream is a ChaCha8 generator seeded with
//! `seed_from_u64(seed)` and a fixed stream id, so draws do not depend on the
//! platform or on how many checks a scenario runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fuzzy::TGrid;
use crate::space::Vector;

pub const STREAM_SAMPLES: u64 = 0;
pub const STREAM_PARTNERS: u64 = 1;
pub const STREAM_LEVELS: u64 = 2;
pub const STREAM_AXIOM_Y: u64 = 3;
pub const STREAM_AXIOM_Z: u64 = 4;

/// Off-diagonal `(s, t)` pairs added per sample for two-level checks.
pub const OFF_DIAGONAL_PAIRS: usize = 32;

pub fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// A point uniform in the closed Euclidean ball of the given radius, by
/// rejection from the cube `[-radius, radius]^dim`.
pub fn sample_ball(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Vector {
    loop {
        let c: Vec<f64> = (0..dim).map(|_| rng.gen_range(-radius..=radius)).collect();
        if c.iter().map(|v| v * v).sum::<f64>() <= radius * radius {
            return Vector::new(c).expect("finite draw");
        }
    }
}

pub fn sample_points(seed: u64, id: u64, count: usize, dim: usize, radius: f64) -> Vec<Vector> {
    let mut rng = stream(seed, id);
    (0..count).map(|_| sample_ball(&mut rng, dim, radius)).collect()
}

/// For each sample: every diagonal pair `(t, t)` of the grid, then
/// [`OFF_DIAGONAL_PAIRS`] pairs `(s, t)` of distinct grid levels.
pub fn level_pairs(seed: u64, count: usize, grid: &TGrid) -> Vec<Vec<(f64, f64)>> {
    let mut rng = stream(seed, STREAM_LEVELS);
    let g = grid.values();
    (0..count)
        .map(|_| {
            let mut levels: Vec<(f64, f64)> = g.iter().map(|&t| (t, t)).collect();
            for _ in 0..OFF_DIAGONAL_PAIRS {
                let i = rng.gen_range(0..g.len());
                let j = (i + rng.gen_range(1..g.len())) % g.len();
                levels.push((g[i], g[j]));
            }
            levels
        })
        .collect()
}
