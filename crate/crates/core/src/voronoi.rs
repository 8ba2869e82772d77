//! Lexicographic Voronoi allocation on collapsed and full networks, and the
//! Delaunay neighbor graph.

use crate::error::{Error, Result};
use crate::geometry::{Point2, Segment};
use crate::network::{CollapsedNetwork, Network};

/// Ordered sensor positions; the order is the lexicographic tie-break.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorSet {
    positions: Vec<Point2>,
}

impl SensorSet {
    /// Requires at least one sensor, finite coordinates and pairwise distinct positions.
    pub fn new(positions: Vec<Point2>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidArgument("at least one sensor is required".into()));
        }
        if let Some(i) = positions.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument(format!("sensor {i} has a non-finite position")));
        }
        for i in 0..positions.len() {
            for j in i + 1..positions.len() {
                if positions[i] == positions[j] {
                    return Err(Error::Degenerate(format!("sensors {i} and {j} coincide")));
                }
            }
        }
        Ok(SensorSet { positions })
    }

    pub fn positions(&self) -> &[Point2] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn into_positions(self) -> Vec<Point2> {
        self.positions
    }

    /// Copy with sensor `i` moved to `to`.
    pub fn moved(&self, i: usize, to: Point2) -> Result<Self> {
        let mut positions = self.positions.clone();
        positions[i] = to;
        SensorSet::new(positions)
    }
}

/// Index of the nearest sensor, lowest index on ties.
pub(crate) fn nearest(q: Point2, positions: &[Point2]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, p) in positions.iter().enumerate() {
        let d = q.distance(*p);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

/// Owner of every barycenter under the lexicographic rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapsedAllocation {
    owners: Vec<usize>,
    sensors: usize,
}

impl CollapsedAllocation {
    pub fn owners(&self) -> &[usize] {
        &self.owners
    }

    pub fn owner(&self, b: usize) -> usize {
        self.owners[b]
    }

    /// Barycenter indices owned by sensor `i`, ascending.
    pub fn cell(&self, i: usize) -> Vec<usize> {
        (0..self.owners.len()).filter(|&b| self.owners[b] == i).collect()
    }

    pub fn cells(&self) -> Vec<Vec<usize>> {
        let mut cells = vec![Vec::new(); self.sensors];
        for (b, &o) in self.owners.iter().enumerate() {
            cells[o].push(b);
        }
        cells
    }
}

pub fn allocate_barycenters_lex(c: &CollapsedNetwork, p: &SensorSet) -> Result<CollapsedAllocation> {
    Ok(CollapsedAllocation {
        owners: c
            .barycenters()
            .iter()
            .map(|b| nearest(b.position, p.positions()))
            .collect(),
        sensors: p.len(),
    })
}

/// Sub-interval `[t0, t1]` of a network segment and the sensor owning it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellInterval {
    pub t0: f64,
    pub t1: f64,
    pub owner: usize,
}

/// Lexicographic partition of every network segment among the sensors.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkCells {
    per_segment: Vec<Vec<CellInterval>>,
    sensors: usize,
}

impl NetworkCells {
    pub fn segment(&self, k: usize) -> &[CellInterval] {
        &self.per_segment[k]
    }

    pub fn segment_count(&self) -> usize {
        self.per_segment.len()
    }

    /// Parameters in `(0, 1)` where ownership changes along segment `k`.
    pub fn breakpoints(&self, k: usize) -> Vec<f64> {
        let iv = &self.per_segment[k];
        iv[..iv.len() - 1].iter().map(|c| c.t1).collect()
    }

    /// `(segment, t0, t1)` pieces owned by sensor `i`, in segment order.
    pub fn cell(&self, i: usize) -> Vec<(usize, f64, f64)> {
        let mut out = Vec::new();
        for (k, ivs) in self.per_segment.iter().enumerate() {
            for iv in ivs.iter().filter(|iv| iv.owner == i) {
                out.push((k, iv.t0, iv.t1));
            }
        }
        out
    }

    pub fn cells(&self) -> Vec<Vec<(usize, f64, f64)>> {
        let mut out = vec![Vec::new(); self.sensors];
        for (k, ivs) in self.per_segment.iter().enumerate() {
            for iv in ivs {
                out[iv.owner].push((k, iv.t0, iv.t1));
            }
        }
        out
    }
}

pub fn clip_network_cells(n: &Network, p: &SensorSet) -> Result<NetworkCells> {
    Ok(NetworkCells {
        per_segment: n
            .segments()
            .iter()
            .map(|s| segment_intervals(s, p.positions()))
            .collect(),
        sensors: p.len(),
    })
}

/// Breakpoints closer than this in `t` are merged.
const SLIVER: f64 = 1e-12;

/// Lexicographic partition of one segment.
///
/// Along `gamma(t) = a + t d` the squared distance to `p_i` is
/// `|d|^2 t^2 + B_i t + A_i`; dropping the shared quadratic leaves a lower
/// envelope of lines, swept left to right.
pub(crate) fn segment_intervals(s: &Segment, positions: &[Point2]) -> Vec<CellInterval> {
    let a = s.a();
    let d = s.delta();
    let lines: Vec<(f64, f64)> = positions
        .iter()
        .map(|p| {
            let r = a - *p;
            (r.norm_sq(), 2.0 * d.dot(r))
        })
        .collect();
    let scale = lines
        .iter()
        .map(|(a, b)| a.abs() + b.abs())
        .fold(d.norm_sq(), f64::max);
    let tie = 1e-12 * scale;

    // Owner just to the right of `t`: lowest value, then steepest descent, then index.
    let owner_at = |t: f64| -> usize {
        let vals: Vec<f64> = lines.iter().map(|(a, b)| a + b * t).collect();
        let vmin = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let mut best = usize::MAX;
        for (i, &v) in vals.iter().enumerate() {
            if v > vmin + tie {
                continue;
            }
            if best == usize::MAX || lines[i].1 < lines[best].1 - tie {
                best = i;
            }
        }
        best
    };

    let mut out: Vec<CellInterval> = Vec::new();
    let mut t = 0.0;
    let mut owner = owner_at(0.0);
    loop {
        let (ac, bc) = lines[owner];
        let mut next = 1.0;
        for &(aj, bj) in &lines {
            if bj < bc - tie {
                let tj = (aj - ac) / (bc - bj);
                if tj > t && tj < next {
                    next = tj;
                }
            }
        }
        push_interval(&mut out, t, next, owner);
        if next >= 1.0 {
            break;
        }
        t = next;
        let o = owner_at(t);
        if lines[o].1 >= bc {
            // Round-off put the crossing at the current owner; nothing changes hands.
            continue;
        }
        owner = o;
    }
    if let Some(last) = out.last_mut() {
        last.t1 = 1.0;
    }
    out
}

fn push_interval(out: &mut Vec<CellInterval>, t0: f64, t1: f64, owner: usize) {
    if let Some(last) = out.last_mut() {
        if last.owner == owner {
            last.t1 = t1;
            return;
        }
        if t1 - t0 < SLIVER {
            last.t1 = t1;
            return;
        }
        if last.t1 - last.t0 < SLIVER {
            last.owner = owner;
            last.t1 = t1;
            merge_tail(out);
            return;
        }
    }
    out.push(CellInterval { t0, t1, owner });
}

fn merge_tail(out: &mut Vec<CellInterval>) {
    let n = out.len();
    if n >= 2 && out[n - 2].owner == out[n - 1].owner {
        out[n - 2].t1 = out[n - 1].t1;
        out.pop();
    }
}

/// Sensors whose planar Voronoi cells share a boundary of positive length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborGraph {
    adjacency: Vec<Vec<usize>>,
}

impl NeighborGraph {
    /// Neighbors of sensor `i`, ascending.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn are_adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }
}

/// Shortest boundary length counted as a shared Voronoi edge.
const EDGE_MIN: f64 = 1e-9;

/// Length of the part of the `i`/`j` bisector where both are nearest.
///
/// On the bisector `x(s) = (p_i + p_j)/2 + s u`, each other sensor `k`
/// contributes one linear constraint `|x - p_i| <= |x - p_k|` in `s`.
pub(crate) fn shared_boundary(positions: &[Point2], i: usize, j: usize) -> f64 {
    let pi = positions[i];
    let dij = positions[j] - pi;
    let u = dij.perp() * (1.0 / dij.norm());
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (k, pk) in positions.iter().enumerate() {
        if k == i || k == j {
            continue;
        }
        let q = *pk - pi;
        let c = 2.0 * u.dot(q);
        let e = q.norm_sq() - dij.dot(q);
        if c == 0.0 {
            if e < 0.0 {
                return 0.0;
            }
        } else if c > 0.0 {
            hi = hi.min(e / c);
        } else {
            lo = lo.max(e / c);
        }
        if hi <= lo {
            return 0.0;
        }
    }
    hi - lo
}

pub fn delaunay_neighbors(p: &SensorSet) -> Result<NeighborGraph> {
    let pos = p.positions();
    let m = pos.len();
    let mut adjacency = vec![Vec::new(); m];
    for i in 0..m {
        for j in i + 1..m {
            if m <= 2 || shared_boundary(pos, i, j) > EDGE_MIN {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    for a in &mut adjacency {
        a.sort_unstable();
    }
    Ok(NeighborGraph { adjacency })
}
