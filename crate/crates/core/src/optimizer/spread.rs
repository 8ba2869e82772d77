//! Scattering sensors around cluster centers and projecting them onto the network.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::Point2;
use crate::network::Network;
use crate::voronoi::SensorSet;
use crate::GEOM_EPS;

const NUDGE: f64 = 1e-6;

/// `per_cluster` points uniform in the disc of radius `rho` around each
/// center, projected onto the network; collisions are nudged along the host segment.
pub fn spread_and_project(
    n: &Network,
    centers: &[Point2],
    per_cluster: usize,
    rho: f64,
    seed: u64,
) -> Result<SensorSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Point2> = Vec::with_capacity(centers.len() * per_cluster);
    for c in centers {
        for _ in 0..per_cluster {
            let r = rho * rng.gen::<f64>().sqrt();
            let theta = TAU * rng.gen::<f64>();
            let q = *c + Point2::new(theta.cos(), theta.sin()) * r;
            let host = n.project(q);
            let s = n.segment(host.segment);
            let dt = NUDGE / s.length();
            let mut x = host.point;
            let mut k: f64 = 1.0;
            while out.iter().any(|o| o.distance(x) <= GEOM_EPS) {
                let sign = if k as usize % 2 == 1 { 1.0 } else { -1.0 };
                let t = (host.t + sign * dt * (k / 2.0).ceil()).clamp(0.0, 1.0);
                x = s.at(t);
                k += 1.0;
            }
            out.push(x);
        }
    }
    SensorSet::new(out)
}
