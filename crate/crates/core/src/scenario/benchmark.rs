//! Synthetic corridor network at the size of the airport case study.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{NetworkSource, OutputConfig, ScenarioConfig};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::network::Network;
use crate::objective::{DensityField, PerformanceSpec};
use crate::optimizer::PipelineConfig;

/// Jittered `cols x rows` grid spanning `[lo, hi]`, thinned at random to
/// `segments` edges while staying connected.
///
/// Interior vertices move by up to 15% of the grid spacing; boundary vertices
/// slide along the boundary and corners stay put.
pub fn grid_network(
    cols: usize,
    rows: usize,
    segments: usize,
    lo: Point2,
    hi: Point2,
    seed: u64,
) -> Result<Network> {
    if cols < 2 || rows < 2 {
        return Err(Error::InvalidArgument("grid needs at least 2 x 2 vertices".into()));
    }
    let full = (cols - 1) * rows + cols * (rows - 1);
    let vcount = cols * rows;
    if segments < vcount - 1 || segments > full {
        return Err(Error::InvalidArgument(format!(
            "a connected {cols}x{rows} grid has between {} and {full} segments, asked for {segments}",
            vcount - 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dx = (hi.x - lo.x) / (cols - 1) as f64;
    let dy = (hi.y - lo.y) / (rows - 1) as f64;
    let jx = 0.15 * dx;
    let jy = 0.15 * dy;
    let mut vertices = Vec::with_capacity(vcount);
    for j in 0..rows {
        for i in 0..cols {
            let mut x = lo.x + dx * i as f64;
            let mut y = lo.y + dy * j as f64;
            let x_edge = i == 0 || i == cols - 1;
            let y_edge = j == 0 || j == rows - 1;
            if !x_edge {
                x += rng.gen_range(-jx..=jx);
            }
            if !y_edge {
                y += rng.gen_range(-jy..=jy);
            }
            vertices.push(Point2::new(x, y));
        }
    }
    let id = |i: usize, j: usize| j * cols + i;
    let mut edges = Vec::with_capacity(full);
    for j in 0..rows {
        for i in 0..cols {
            if i + 1 < cols {
                edges.push([id(i, j), id(i + 1, j)]);
            }
            if j + 1 < rows {
                edges.push([id(i, j), id(i, j + 1)]);
            }
        }
    }
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.shuffle(&mut rng);
    let mut alive = vec![true; edges.len()];
    let mut count = edges.len();
    for e in order {
        if count == segments {
            break;
        }
        alive[e] = false;
        if connected(vcount, &edges, &alive) {
            count -= 1;
        } else {
            alive[e] = true;
        }
    }
    if count != segments {
        return Err(Error::InvalidArgument(format!("could not thin the grid to {segments} segments")));
    }
    let kept = edges.iter().zip(&alive).filter(|(_, a)| **a).map(|(e, _)| *e).collect();
    Network::new(vertices, kept)
}

/// Every vertex reachable from vertex 0 over the live edges.
fn connected(n: usize, edges: &[[usize; 2]], alive: &[bool]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for (e, &[a, b]) in edges.iter().enumerate() {
        if alive[e] {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter().all(|s| *s)
}

/// 63 vertices, 87 segments over `[2, 21] x [1, 11]`, and the eleven-Gaussian density.
pub fn generate_benchmark(seed: u64) -> Result<(Network, DensityField)> {
    let n = grid_network(9, 7, 87, Point2::new(2.0, 1.0), Point2::new(21.0, 11.0), seed)?;
    Ok((n, DensityField::case_study()))
}

/// The case-study scenario on the generated benchmark network.
pub fn benchmark_scenario(seed: u64) -> Result<ScenarioConfig> {
    let (n, density) = generate_benchmark(seed)?;
    Ok(ScenarioConfig {
        network: NetworkSource::Inline(n.to_data()),
        density,
        performance: PerformanceSpec::Tanh { radius: 1.0 },
        pipeline: PipelineConfig {
            rng_seed: seed,
            ..Default::default()
        },
        output: OutputConfig::default(),
    })
}
