//! Seeded generators shared by the integration suites.
#![allow(dead_code)]

use hyperenvy::hyperfree::{GoalMatrix, TargetPoint};
use hyperenvy::linalg::{int, rank, rat, RatMatrix, Rational};
use hyperenvy::measures::{MeasureProfile, StepDensity};
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Breakpoints `0 < c_1 < ... < 1` drawn from the grid of 24ths.
fn random_breakpoints(rng: &mut ChaCha8Rng, cells: usize) -> Vec<Rational> {
    let mut cuts: Vec<usize> = sample(rng, 23, cells - 1).into_iter().map(|c| c + 1).collect();
    cuts.sort_unstable();
    let mut bp = vec![int(0)];
    bp.extend(cuts.into_iter().map(|c| rat(c as i64, 24)));
    bp.push(int(1));
    bp
}

fn random_values(rng: &mut ChaCha8Rng, cells: usize) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..cells).map(|_| rng.gen_range(0..=4)).collect();
        if v.iter().any(|&x| x > 0) {
            return v;
        }
    }
}

/// `n` step densities on a shared grid of at most `max_cells` cells. With
/// `dependent` set, the last density is a copy or midpoint of earlier ones.
pub fn random_profile(rng: &mut ChaCha8Rng, n: usize, max_cells: usize, dependent: bool) -> MeasureProfile {
    let cells = rng.gen_range(1..=max_cells);
    let bp = random_breakpoints(rng, cells);
    let mut densities: Vec<StepDensity> = (0..n)
        .map(|_| {
            let v = random_values(rng, cells).into_iter().map(int).collect();
            StepDensity::normalized(bp.clone(), v).unwrap()
        })
        .collect();
    if dependent && n >= 2 {
        let a = rng.gen_range(0..n - 1);
        let b = rng.gen_range(0..n - 1);
        let mixed = densities[a]
            .values()
            .iter()
            .zip(densities[b].values())
            .map(|(x, y)| (x + y) / int(2))
            .collect();
        densities[n - 1] = StepDensity::new(bp, mixed).unwrap();
    }
    MeasureProfile::new(densities).unwrap()
}

/// A profile whose Gram matrix is nonsingular.
pub fn random_independent_profile(rng: &mut ChaCha8Rng, n: usize, max_cells: usize) -> MeasureProfile {
    assert!(max_cells >= n);
    loop {
        let profile = random_profile(rng, n, max_cells, false);
        if rank(&profile.gram_matrix()) == n {
            return profile;
        }
    }
}

/// Matrix with small integer entries and zero row sums.
pub fn random_zero_row_sum(rng: &mut ChaCha8Rng, n: usize) -> RatMatrix {
    let mut m = RatMatrix::zeros(n, n);
    for i in 0..n {
        let mut sum = 0;
        for j in 0..n - 1 {
            let x = rng.gen_range(-3..=3);
            m[(i, j)] = int(x);
            sum += x;
        }
        m[(i, n - 1)] = int(-sum);
    }
    m
}

/// Nonzero `K = G M` with `M` of zero row sums; such `K` is proper because
/// `G` is symmetric and annihilated by every measure relation.
pub fn random_proper_goal(rng: &mut ChaCha8Rng, g: &RatMatrix) -> GoalMatrix {
    let n = g.rows();
    loop {
        let k = g * &random_zero_row_sum(rng, n);
        if !k.is_zero() {
            return GoalMatrix::new(k).unwrap();
        }
    }
}

pub fn random_target(rng: &mut ChaCha8Rng, n: usize) -> TargetPoint {
    let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = w.iter().sum();
    TargetPoint::new(w.into_iter().map(|x| rat(x, total)).collect()).unwrap()
}

pub fn example_profile() -> MeasureProfile {
    MeasureProfile::new(vec![
        StepDensity::new(vec![int(0), rat(1, 10), int(1)], vec![int(10), int(0)]).unwrap(),
        StepDensity::new(vec![int(0), rat(1, 10), int(1)], vec![int(0), rat(10, 9)]).unwrap(),
        StepDensity::new(vec![int(0), int(1)], vec![int(1)]).unwrap(),
    ])
    .unwrap()
}

pub fn example_goal() -> GoalMatrix {
    GoalMatrix::new(
        RatMatrix::from_rows(vec![
            vec![int(1), int(0), int(-1)],
            vec![rat(-1, 3), rat(1, 9), rat(2, 9)],
            vec![rat(-1, 5), rat(1, 10), rat(1, 10)],
        ])
        .unwrap(),
    )
    .unwrap()
}

pub fn example_sharing_matrix() -> RatMatrix {
    RatMatrix::from_rows(vec![
        vec![rat(1, 2), rat(1, 3), rat(1, 6)],
        vec![rat(5, 18), rat(19, 54), rat(10, 27)],
        vec![rat(3, 10), rat(7, 20), rat(7, 20)],
    ])
    .unwrap()
}
