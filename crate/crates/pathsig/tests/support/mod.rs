//! Independent oracles shared by the integration suites. Everything here
//! computes expected values through routes disjoint from the library
//! implementations they check: quadrature instead of tensor exponentials,
//! enumeration instead of closed-form counts, contraction instead of flows.

#![allow(dead_code)]

use pathsig::{Matrix64, Path64, Tensor64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Count words of length <= n over d letters by explicit enumeration.
pub fn brute_force_word_count(d: usize, n: usize) -> usize {
    fn extend(d: usize, remaining: usize) -> usize {
        if remaining == 0 {
            return 1;
        }
        1 + (0..d).map(|_| extend(d, remaining - 1)).sum::<usize>()
    }
    extend(d, n)
}

/// Iterated integrals of a piecewise-linear path by level-by-level
/// quadrature on a uniform grid with its own interpolation: the prefix
/// integral of each word grows by (midpoint of its parent) · (increment of
/// its last letter) per step. Returns one value per word of length <= depth,
/// level by level, base-d lexicographic within each level.
pub fn riemann_signature(path: &Path64, depth: usize, subdivisions: usize) -> Vec<Vec<f64>> {
    let d = path.dim();
    let times = path.times();
    let points = path.points();
    let (t0, t1) = (times[0], times[times.len() - 1]);
    let interpolate = |t: f64| -> Vec<f64> {
        if t >= t1 {
            return points[points.len() - 1].clone();
        }
        let mut j = 0;
        while times[j + 1] < t {
            j += 1;
        }
        let alpha = (t - times[j]) / (times[j + 1] - times[j]);
        points[j]
            .iter()
            .zip(&points[j + 1])
            .map(|(a, b)| a + alpha * (b - a))
            .collect()
    };

    let mut levels: Vec<Vec<f64>> = (0..=depth).map(|k| vec![0.0; d.pow(k as u32)]).collect();
    levels[0][0] = 1.0;
    if times.len() == 1 {
        return levels;
    }
    let mut prev_point = points[0].clone();
    for step in 0..subdivisions {
        let t = t0 + (t1 - t0) * (step + 1) as f64 / subdivisions as f64;
        let point = interpolate(t);
        let delta: Vec<f64> = point.iter().zip(&prev_point).map(|(b, a)| b - a).collect();
        prev_point = point;
        // ascend levels, keeping the parent level's start and end values
        let mut parent_start = levels[0].clone();
        let mut parent_end = levels[0].clone();
        for k in 1..=depth {
            let start = levels[k].clone();
            for (u, _) in parent_start.iter().enumerate() {
                let mid = 0.5 * (parent_start[u] + parent_end[u]);
                for (i, &dx) in delta.iter().enumerate() {
                    levels[k][u * d + i] += mid * dx;
                }
            }
            parent_start = start;
            parent_end = levels[k].clone();
        }
    }
    levels
}

/// Fetch the oracle value for one word (letters 1-based) from
/// [`riemann_signature`] output.
pub fn oracle_coeff(levels: &[Vec<f64>], word: &[usize], d: usize) -> f64 {
    let mut idx = 0usize;
    for &letter in word {
        idx = idx * d + (letter - 1);
    }
    levels[word.len()][idx]
}

/// Contraction of a truncated signature against matrix words applied in
/// time order: sum over words w of Sig_w · A_{w_k}···A_{w_1}·z0, where
/// A_{w_1} acts first.
pub fn contract_signature(sig: &Tensor64, matrices: &[Matrix64], z0: &[f64]) -> Vec<f64> {
    let shape = sig.shape();
    let mut out = vec![0.0; z0.len()];
    for (idx, word) in shape.words().enumerate() {
        let c = sig.coeffs()[idx];
        if c == 0.0 {
            continue;
        }
        let mut v = z0.to_vec();
        for &letter in &word {
            v = matrices[letter - 1].matvec(&v);
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

/// Signed polygon area by the shoelace formula (first two coordinates).
pub fn shoelace_area(points: &[Vec<f64>]) -> f64 {
    points
        .windows(2)
        .map(|w| 0.5 * (w[0][0] * w[1][1] - w[1][0] * w[0][1]))
        .sum()
}

/// Random walk path starting at the origin with steps in (-scale, scale).
pub fn random_path(rng: &mut ChaCha8Rng, dim: usize, segments: usize, scale: f64) -> Path64 {
    let mut points = vec![vec![0.0; dim]];
    for _ in 0..segments {
        let prev = points.last().unwrap().clone();
        points.push(
            prev.iter()
                .map(|&c| c + rng.gen_range(-scale..scale))
                .collect(),
        );
    }
    Path64::from_points(points).unwrap()
}

/// Closed polygon approximating a circle of the given radius.
pub fn circle_path(samples: usize, radius: f64) -> Path64 {
    let points = (0..=samples)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            vec![radius * theta.cos(), radius * theta.sin()]
        })
        .collect();
    Path64::from_points(points).unwrap()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Max elementwise absolute difference between two coefficient slices.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
