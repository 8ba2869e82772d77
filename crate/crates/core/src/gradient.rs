//! Derivatives of the multi-center objective.
//!
//! Every planar vector returned here is an ascent direction: the gradient of
//! `H` with respect to one sensor's position, allocation held fixed.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Point2, Segment};
use crate::network::{CollapsedNetwork, Network};
use crate::objective::{Density, PerformanceFunction};
use crate::quadrature::{integrate_split, Tolerance};
use crate::voronoi::{allocate_barycenters_lex, clip_network_cells, NeighborGraph, NetworkCells, SensorSet};
use crate::GEOM_EPS;

/// Distances below this make the distance gradient numerically meaningless.
const SINGULAR_EPS: f64 = 1e-12;

/// Step used to test whether a direction leaves a vertex along the network.
const FEASIBILITY_STEP: f64 = 1e-7;

/// Sensors farther than this from the network are rejected rather than snapped.
pub const SNAP_LIMIT: f64 = 1e-6;

/// Parameters in `[0, 1]` where `|gamma(t) - p| = r`, ascending; a tangency yields one root.
pub fn radius_crossings(s: &Segment, p: Point2, r: f64) -> Vec<f64> {
    let d = s.delta();
    let e = s.a() - p;
    let qa = d.norm_sq();
    let qb = 2.0 * d.dot(e);
    let qc = e.norm_sq() - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    let scale = qb * qb + (4.0 * qa * qc).abs();
    let mut roots = if disc.abs() <= 1e-14 * scale {
        vec![-qb / (2.0 * qa)]
    } else if disc < 0.0 {
        vec![]
    } else {
        // Numerically stable pair.
        let sign = if qb >= 0.0 { 1.0 } else { -1.0 };
        let q = -0.5 * (qb + sign * disc.sqrt());
        let (t1, t2) = (q / qa, qc / q);
        vec![t1.min(t2), t1.max(t2)]
    };
    roots.retain(|t| (0.0..=1.0).contains(t));
    roots.dedup();
    roots
}

/// Integrand `phi(nu, q)` of the segment-derivative kernel: piecewise smooth in
/// `nu`, with jumps at fixed breakpoints.
pub trait JumpKernel: Sync {
    fn breakpoints(&self) -> Vec<f64>;
    fn value(&self, nu: f64, q: Point2) -> f64;
    /// `d phi / d nu` of the piece active at `nu`.
    fn d_nu(&self, nu: f64, q: Point2) -> f64;
    /// `phi(R_i+, q) - phi(R_i-, q)`.
    fn jump(&self, i: usize, q: Point2) -> f64;
}

/// A smooth map `nu(x, q)` from a parameter point and an environment point.
pub trait DistanceMap: Sync {
    fn nu(&self, x: Point2, q: Point2) -> f64;
    fn grad_x(&self, x: Point2, q: Point2) -> Point2;
    fn grad_q(&self, x: Point2, q: Point2) -> Point2;

    /// Parameters along `s` where `nu(x, gamma(t)) = r`.
    fn crossings(&self, s: &Segment, x: Point2, r: f64) -> Vec<f64> {
        const SAMPLES: usize = 512;
        let g = |t: f64| self.nu(x, s.at(t)) - r;
        let mut out = Vec::new();
        let mut t0 = 0.0;
        let mut g0 = g(0.0);
        for i in 1..=SAMPLES {
            let t1 = i as f64 / SAMPLES as f64;
            let g1 = g(t1);
            if g0 == 0.0 {
                out.push(t0);
            } else if g0 * g1 < 0.0 {
                let (mut lo, mut hi, mut glo) = (t0, t1, g0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    let gm = g(mid);
                    if gm * glo > 0.0 {
                        lo = mid;
                        glo = gm;
                    } else {
                        hi = mid;
                    }
                }
                out.push(0.5 * (lo + hi));
            }
            t0 = t1;
            g0 = g1;
        }
        if g0 == 0.0 {
            out.push(1.0);
        }
        out
    }

    /// Parameters where the integrand may lose smoothness other than crossings.
    fn kinks(&self, _s: &Segment, _x: Point2) -> Vec<f64> {
        Vec::new()
    }
}

/// `nu(x, q) = |q - x|`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Euclidean;

impl DistanceMap for Euclidean {
    fn nu(&self, x: Point2, q: Point2) -> f64 {
        q.distance(x)
    }

    fn grad_x(&self, x: Point2, q: Point2) -> Point2 {
        let v = x - q;
        v * (1.0 / v.norm())
    }

    fn grad_q(&self, x: Point2, q: Point2) -> Point2 {
        let v = q - x;
        v * (1.0 / v.norm())
    }

    fn crossings(&self, s: &Segment, x: Point2, r: f64) -> Vec<f64> {
        radius_crossings(s, x, r)
    }

    fn kinks(&self, s: &Segment, x: Point2) -> Vec<f64> {
        vec![s.project_param(x)]
    }
}

/// `phi(nu, q) = f(nu) * density(q)`.
pub struct PerformanceKernel<'a> {
    pub f: &'a PerformanceFunction,
    pub density: &'a dyn Density,
}

impl JumpKernel for PerformanceKernel<'_> {
    fn breakpoints(&self) -> Vec<f64> {
        self.f.breakpoints()
    }

    fn value(&self, nu: f64, q: Point2) -> f64 {
        self.f.value(nu) * self.density.density(q)
    }

    fn d_nu(&self, nu: f64, q: Point2) -> f64 {
        self.f.slope(nu) * self.density.density(q)
    }

    fn jump(&self, i: usize, q: Point2) -> f64 {
        self.f.jumps()[i] * self.density.density(q)
    }
}

/// `d/dx int_s phi(nu(x, q), q) dq` at `x`.
pub fn segment_integral_derivative(
    kernel: &dyn JumpKernel,
    map: &dyn DistanceMap,
    s: &Segment,
    x: Point2,
    tol: Tolerance,
) -> Result<Point2> {
    interval_integral_derivative(kernel, map, s, 0.0, 1.0, x, tol)
}

/// Same derivative over the part of `s` with parameter in `[t0, t1]`.
///
/// The smooth part integrates `d phi / d nu * grad_x nu` between crossings.
/// Each crossing of a breakpoint `R` at `q` adds
/// `(phi(R+, q) - phi(R-, q)) * grad_x nu / |grad_q nu . w|`, `w` the unit
/// direction of `s`: the crossing point moves at rate `grad_x nu / (grad_q nu . w)`.
pub fn interval_integral_derivative(
    kernel: &dyn JumpKernel,
    map: &dyn DistanceMap,
    s: &Segment,
    t0: f64,
    t1: f64,
    x: Point2,
    tol: Tolerance,
) -> Result<Point2> {
    let len = s.length();
    let w = s.direction();
    let mut knots = map.kinks(s, x);
    let mut jump = Point2::ZERO;
    for (i, r) in kernel.breakpoints().into_iter().enumerate() {
        for t in [t0, t1] {
            if (map.nu(x, s.at(t)) - r).abs() <= GEOM_EPS {
                return Err(Error::AssumptionViolated(format!(
                    "breakpoint {r} reached at interval endpoint t = {t}"
                )));
            }
        }
        for t in map.crossings(s, x, r) {
            if t <= t0 || t >= t1 {
                continue;
            }
            let q = s.at(t);
            let slope = map.grad_q(x, q).dot(w);
            if slope.abs() <= GEOM_EPS {
                return Err(Error::AssumptionViolated(format!(
                    "breakpoint {r} crossed tangentially at t = {t}"
                )));
            }
            jump += map.grad_x(x, q) * (kernel.jump(i, q) / slope.abs());
            knots.push(t);
        }
    }
    let smooth = integrate_split(
        |t| {
            let q = s.at(t);
            let nu = map.nu(x, q);
            if nu == 0.0 {
                return Point2::ZERO;
            }
            map.grad_x(x, q) * (kernel.d_nu(nu, q) * len)
        },
        t0,
        t1,
        &knots,
        tol,
    )
    .map_err(|e| Error::Quadrature { segment: usize::MAX, a: e.a, b: e.b })?;
    Ok(smooth + jump)
}

fn check_singular(h: usize, p: Point2, b: Point2) -> Result<f64> {
    let nu = p.distance(b);
    if nu <= SINGULAR_EPS {
        return Err(Error::Singular(format!("sensor {h} sits on the barycenter at {b:?}")));
    }
    Ok(nu)
}

/// Lexicographic gradient of the collapsed objective, one vector per sensor.
pub fn grad_collapsed_lex(
    c: &CollapsedNetwork,
    f: &PerformanceFunction,
    p: &SensorSet,
) -> Result<Vec<Point2>> {
    let alloc = allocate_barycenters_lex(c, p)?;
    let pos = p.positions();
    let mut g = vec![Point2::ZERO; p.len()];
    for (b, &h) in c.barycenters().iter().zip(alloc.owners()) {
        let nu = check_singular(h, pos[h], b.position)?;
        g[h] += (pos[h] - b.position) * (f.derivative(nu)? * b.weight / nu);
    }
    Ok(g)
}

/// Component `h` of [`grad_collapsed_lex`] from sensor `h`, its Delaunay
/// neighbors and the barycenters alone.
pub fn grad_collapsed_local(
    c: &CollapsedNetwork,
    f: &PerformanceFunction,
    p: &SensorSet,
    neighbors: &NeighborGraph,
    h: usize,
) -> Result<Point2> {
    let pos = p.positions();
    let mut peers: Vec<usize> = neighbors.neighbors(h).to_vec();
    peers.push(h);
    peers.sort_unstable();
    let mut g = Point2::ZERO;
    for b in c.barycenters() {
        let mut best = peers[0];
        let mut best_d = f64::INFINITY;
        for &j in &peers {
            let d = b.position.distance(pos[j]);
            if d < best_d {
                best = j;
                best_d = d;
            }
        }
        if best == h {
            let nu = check_singular(h, pos[h], b.position)?;
            g += (pos[h] - b.position) * (f.derivative(nu)? * b.weight / nu);
        }
    }
    Ok(g)
}

/// Gradient of sensor `h`'s full-network cell integral.
pub fn cell_derivative_full(
    n: &Network,
    f: &PerformanceFunction,
    density: &dyn Density,
    p: &SensorSet,
    h: usize,
    cells: &NetworkCells,
    tol: Tolerance,
) -> Result<Point2> {
    let kernel = PerformanceKernel { f, density };
    let x = p.positions()[h];
    let mut g = Point2::ZERO;
    for (k, t0, t1) in cells.cell(h) {
        let s = n.segment(k);
        g += interval_integral_derivative(&kernel, &Euclidean, &s, t0, t1, x, tol).map_err(|e| match e {
            Error::Quadrature { a, b, .. } => Error::Quadrature { segment: k, a, b },
            e => e,
        })?;
    }
    Ok(g)
}

/// [`cell_derivative_full`] for every sensor.
pub fn grad_full(
    n: &Network,
    f: &PerformanceFunction,
    density: &dyn Density,
    p: &SensorSet,
    tol: Tolerance,
) -> Result<Vec<Point2>> {
    let cells = clip_network_cells(n, p)?;
    (0..p.len())
        .into_par_iter()
        .map(|h| cell_derivative_full(n, f, density, p, h, &cells, tol))
        .collect()
}

/// One incident direction at a vertex with its one-sided derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibleDirection {
    pub segment: usize,
    pub direction: Point2,
    pub value: f64,
}

/// Directions leaving a vertex along the network.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleDirections {
    pub vertex: usize,
    pub options: Vec<FeasibleDirection>,
}

impl FeasibleDirections {
    /// Largest positive derivative; lowest option on ties.
    pub fn best(&self) -> Option<FeasibleDirection> {
        let mut best: Option<FeasibleDirection> = None;
        for o in &self.options {
            if o.value > 0.0 && best.map_or(true, |b| o.value > b.value) {
                best = Some(*o);
            }
        }
        best
    }
}

/// Candidate directions at vertex `v` for cell gradient `g`.
///
/// Both orientations of every segment through the vertex are tried; a
/// direction is kept when a short step along it stays on the network.
pub fn feasible_directions(n: &Network, v: usize, g: Point2) -> FeasibleDirections {
    let at = n.vertices()[v];
    let mut options = Vec::new();
    for (k, s) in n.segments().iter().enumerate() {
        if s.project(at).distance > GEOM_EPS {
            continue;
        }
        let w = s.direction();
        for d in [w, -w] {
            let probe = at + d * FEASIBILITY_STEP;
            if s.project(probe).distance <= GEOM_EPS {
                options.push(FeasibleDirection {
                    segment: k,
                    direction: d,
                    value: g.dot(d),
                });
            }
        }
    }
    FeasibleDirections { vertex: v, options }
}

/// Per-sensor derivative in the plane or along the network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SensorDerivative {
    Planar(Point2),
    /// Motion along `segment` in unit `direction` at rate `value`; `segment`
    /// is `None` for a vertex where every feasible direction is non-improving.
    OnEdge {
        segment: Option<usize>,
        direction: Point2,
        value: f64,
        vertex: Option<usize>,
    },
}

impl SensorDerivative {
    pub fn vector(&self) -> Point2 {
        match *self {
            SensorDerivative::Planar(g) => g,
            SensorDerivative::OnEdge { direction, value, .. } => direction * value,
        }
    }

    pub fn magnitude(&self) -> f64 {
        self.vector().norm()
    }
}

/// Restricts the cell gradient `g` of sensor `h` at `position` to the network.
///
/// Away from vertices this is the projection on the host edge; at a vertex it
/// is the best feasible direction, or zero.
pub fn constrain_to_network(n: &Network, h: usize, position: Point2, g: Point2) -> Result<SensorDerivative> {
    if let Some(v) = n.vertex_near(position, GEOM_EPS) {
        let dirs = feasible_directions(n, v, g);
        return Ok(match dirs.best() {
            Some(o) => SensorDerivative::OnEdge {
                segment: Some(o.segment),
                direction: o.direction,
                value: o.value,
                vertex: Some(v),
            },
            None => SensorDerivative::OnEdge {
                segment: None,
                direction: Point2::ZERO,
                value: 0.0,
                vertex: Some(v),
            },
        });
    }
    let host = n.project(position);
    if host.distance > SNAP_LIMIT {
        return Err(Error::OffNetwork { sensor: h, distance: host.distance });
    }
    let w = n.segment(host.segment).direction();
    Ok(SensorDerivative::OnEdge {
        segment: Some(host.segment),
        direction: w,
        value: g.dot(w),
        vertex: None,
    })
}

/// Where the unconstrained cell gradient comes from.
pub enum DerivativeSource<'a> {
    Collapsed {
        collapsed: &'a CollapsedNetwork,
        f: &'a PerformanceFunction,
    },
    Full {
        f: &'a PerformanceFunction,
        density: &'a dyn Density,
        tol: Tolerance,
    },
}

impl DerivativeSource<'_> {
    /// Cell gradients of all sensors.
    pub fn gradients(&self, n: &Network, p: &SensorSet) -> Result<Vec<Point2>> {
        match self {
            DerivativeSource::Collapsed { collapsed, f } => grad_collapsed_lex(collapsed, f, p),
            DerivativeSource::Full { f, density, tol } => grad_full(n, f, *density, p, *tol),
        }
    }
}

/// Network-constrained derivative of sensor `h`.
pub fn dir_deriv_on_network(
    source: &DerivativeSource<'_>,
    p: &SensorSet,
    n: &Network,
    h: usize,
) -> Result<SensorDerivative> {
    let g = match source {
        DerivativeSource::Collapsed { collapsed, f } => grad_collapsed_lex(collapsed, f, p)?[h],
        DerivativeSource::Full { f, density, tol } => {
            let cells = clip_network_cells(n, p)?;
            cell_derivative_full(n, f, *density, p, h, &cells, *tol)?
        }
    };
    constrain_to_network(n, h, p.positions()[h], g)
}
