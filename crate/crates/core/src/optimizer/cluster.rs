//! Seeded k-means over sensor positions.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::Point2;

const MAX_ROUNDS: usize = 100;
const CONVERGED: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub centers: Vec<Point2>,
    /// Cluster index of every input point.
    pub assignment: Vec<usize>,
}

fn nearest_center(q: Point2, centers: &[Point2]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, c) in centers.iter().enumerate() {
        let d = q.distance(*c);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

/// k-means++ seeding followed by Lloyd rounds; empty clusters keep their center.
pub fn cluster_sensors(positions: &[Point2], k: usize, seed: u64) -> Result<Clustering> {
    if k == 0 || k > positions.len() {
        return Err(Error::InvalidArgument(format!(
            "cannot form {k} clusters from {} points",
            positions.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = vec![positions[rng.gen_range(0..positions.len())]];
    while centers.len() < k {
        let weights: Vec<f64> = positions
            .iter()
            .map(|q| {
                let d = q.distance(centers[nearest_center(*q, &centers)]);
                d * d
            })
            .collect();
        let next = match WeightedIndex::new(&weights) {
            Ok(w) => w.sample(&mut rng),
            // Every point already coincides with a center.
            Err(_) => rng.gen_range(0..positions.len()),
        };
        centers.push(positions[next]);
    }

    let mut assignment = vec![0; positions.len()];
    for _ in 0..MAX_ROUNDS {
        for (a, q) in assignment.iter_mut().zip(positions) {
            *a = nearest_center(*q, &centers);
        }
        let mut sums = vec![(Point2::ZERO, 0usize); k];
        for (a, q) in assignment.iter().zip(positions) {
            sums[*a].0 += *q;
            sums[*a].1 += 1;
        }
        let mut shift: f64 = 0.0;
        for (c, (sum, count)) in centers.iter_mut().zip(sums) {
            if count > 0 {
                let mean = sum * (1.0 / count as f64);
                shift = shift.max(mean.distance(*c));
                *c = mean;
            }
        }
        if shift < CONVERGED {
            break;
        }
    }
    Ok(Clustering { centers, assignment })
}
