//! The environment graph, its validation and the collapsed (barycenter) model.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Segment};
use crate::objective::Density;
use crate::GEOM_EPS;

/// A broken network invariant, with the offending indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Empty,
    VertexOutOfRange { segment: usize, vertex: usize },
    NonFiniteVertex(usize),
    SelfLoop(usize),
    CoincidentVertices(usize, usize),
    IsolatedVertex(usize),
    DuplicateSegment(usize, usize),
    Intersection(usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "network has no segments"),
            Violation::VertexOutOfRange { segment, vertex } => {
                write!(f, "segment {segment} references missing vertex {vertex}")
            }
            Violation::NonFiniteVertex(v) => write!(f, "vertex {v} has a non-finite coordinate"),
            Violation::SelfLoop(s) => write!(f, "segment {s} joins a vertex to itself"),
            Violation::CoincidentVertices(i, j) => write!(f, "vertices {i} and {j} coincide"),
            Violation::IsolatedVertex(v) => write!(f, "isolated vertex {v}"),
            Violation::DuplicateSegment(a, b) => write!(f, "segments {a} and {b} are duplicates"),
            Violation::Intersection(a, b) => {
                write!(f, "segment intersection {a}x{b}")
            }
        }
    }
}

/// On-disk form: `{"vertices": [[x, y], ...], "segments": [[i, j], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkData {
    pub vertices: Vec<Point2>,
    pub segments: Vec<[usize; 2]>,
}

impl NetworkData {
    /// Every broken invariant; out-of-range indices are reported rather than panicking.
    pub fn validate(&self) -> Vec<Violation> {
        validate_raw(&self.vertices, &self.segments)
    }
}

/// Planar network `N = (V, S)` of straight segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NetworkData", into = "NetworkData")]
pub struct Network {
    vertices: Vec<Point2>,
    edges: Vec<[usize; 2]>,
    geometry: Vec<Segment>,
    incident: Vec<Vec<usize>>,
}

impl TryFrom<NetworkData> for Network {
    type Error = Error;
    fn try_from(d: NetworkData) -> Result<Self> {
        Network::new(d.vertices, d.segments)
    }
}

impl From<Network> for NetworkData {
    fn from(n: Network) -> Self {
        NetworkData {
            vertices: n.vertices,
            segments: n.edges,
        }
    }
}

/// Closest network point to a query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkPoint {
    pub point: Point2,
    pub segment: usize,
    pub t: f64,
    pub distance: f64,
}

impl Network {
    /// Builds and validates; any violation is an error.
    pub fn new(vertices: Vec<Point2>, segments: Vec<[usize; 2]>) -> Result<Self> {
        let violations = validate_raw(&vertices, &segments);
        if !violations.is_empty() {
            return Err(Error::InvalidNetwork(violations));
        }
        Ok(Self::assemble(vertices, segments))
    }

    /// Builds without validation, so that [`Network::validate`] can report on it.
    ///
    /// Segment indices must be in range.
    pub fn unchecked(vertices: Vec<Point2>, segments: Vec<[usize; 2]>) -> Self {
        Self::assemble(vertices, segments)
    }

    fn assemble(vertices: Vec<Point2>, edges: Vec<[usize; 2]>) -> Self {
        let geometry = edges
            .iter()
            .map(|&[i, j]| Segment::new_unchecked(vertices[i], vertices[j]))
            .collect();
        let mut incident = vec![Vec::new(); vertices.len()];
        for (k, &[i, j]) in edges.iter().enumerate() {
            incident[i].push(k);
            if j != i {
                incident[j].push(k);
            }
        }
        Network {
            vertices,
            edges,
            geometry,
            incident,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let data: NetworkData = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: "<network>".into(),
            message: e.to_string(),
        })?;
        Network::try_from(data)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let data: NetworkData = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.into(),
            message: e.to_string(),
        })?;
        Network::try_from(data)
    }

    pub fn to_data(&self) -> NetworkData {
        self.clone().into()
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate_raw(&self.vertices, &self.edges)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn segment_count(&self) -> usize {
        self.edges.len()
    }

    pub fn segment(&self, k: usize) -> Segment {
        self.geometry[k]
    }

    pub fn segments(&self) -> &[Segment] {
        &self.geometry
    }

    /// Segments incident to vertex `v`.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn total_length(&self) -> f64 {
        self.geometry.iter().map(Segment::length).sum()
    }

    pub fn shortest_segment(&self) -> f64 {
        self.geometry.iter().map(Segment::length).fold(f64::INFINITY, f64::min)
    }

    pub fn longest_segment(&self) -> f64 {
        self.geometry.iter().map(Segment::length).fold(0.0, f64::max)
    }

    /// `(min, max)` corners of the vertex bounding box.
    pub fn bounding_box(&self) -> (Point2, Point2) {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = Point2::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point2::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        (lo, hi)
    }

    /// Closest network point; ties go to the lowest segment index.
    pub fn project(&self, q: Point2) -> NetworkPoint {
        let mut best = NetworkPoint {
            point: q,
            segment: usize::MAX,
            t: 0.0,
            distance: f64::INFINITY,
        };
        for (k, s) in self.geometry.iter().enumerate() {
            let p = s.project(q);
            if p.distance < best.distance {
                best = NetworkPoint {
                    point: p.point,
                    segment: k,
                    t: p.t,
                    distance: p.distance,
                };
            }
        }
        best
    }

    pub fn distance_to(&self, q: Point2) -> f64 {
        self.geometry
            .iter()
            .map(|s| s.project(q).distance)
            .fold(f64::INFINITY, f64::min)
    }

    /// Lowest-index vertex within `tol` of `q`.
    pub fn vertex_near(&self, q: Point2, tol: f64) -> Option<usize> {
        self.vertices.iter().position(|v| v.distance(q) <= tol)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(a.distance(*b));
            }
        }
        d
    }
}

pub fn validate_network(n: &Network) -> Vec<Violation> {
    n.validate()
}

pub fn project_to_network(n: &Network, q: Point2) -> NetworkPoint {
    n.project(q)
}

pub fn network_diameter(n: &Network) -> f64 {
    n.diameter()
}

fn validate_raw(vertices: &[Point2], edges: &[[usize; 2]]) -> Vec<Violation> {
    let mut out = Vec::new();
    if edges.is_empty() {
        out.push(Violation::Empty);
    }
    for (v, p) in vertices.iter().enumerate() {
        if !p.is_finite() {
            out.push(Violation::NonFiniteVertex(v));
        }
    }
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if vertices[i].distance(vertices[j]) <= GEOM_EPS {
                out.push(Violation::CoincidentVertices(i, j));
            }
        }
    }
    let mut used = vec![false; vertices.len()];
    let mut good = vec![true; edges.len()];
    for (k, &[i, j]) in edges.iter().enumerate() {
        for v in [i, j] {
            if v >= vertices.len() {
                out.push(Violation::VertexOutOfRange { segment: k, vertex: v });
                good[k] = false;
            } else {
                used[v] = true;
            }
        }
        if i == j {
            out.push(Violation::SelfLoop(k));
            good[k] = false;
        }
    }
    for (v, u) in used.iter().enumerate() {
        if !u {
            out.push(Violation::IsolatedVertex(v));
        }
    }
    let key = |[i, j]: [usize; 2]| (i.min(j), i.max(j));
    for a in 0..edges.len() {
        for b in a + 1..edges.len() {
            if key(edges[a]) == key(edges[b]) {
                out.push(Violation::DuplicateSegment(a, b));
                good[b] = false;
            }
        }
    }
    for a in 0..edges.len() {
        for b in a + 1..edges.len() {
            if !(good[a] && good[b]) {
                continue;
            }
            let [p1, p2] = edges[a].map(|v| vertices[v]);
            let [q1, q2] = edges[b].map(|v| vertices[v]);
            if ![p1, p2, q1, q2].iter().all(|p| p.is_finite()) || p1 == p2 || q1 == q2 {
                continue;
            }
            if interiors_intersect(p1, p2, q1, q2) {
                out.push(Violation::Intersection(a, b));
            }
        }
    }
    out
}

/// Signed distance of `q` from the line through `a` and `b`.
fn side(a: Point2, b: Point2, q: Point2) -> f64 {
    let d = b - a;
    d.cross(q - a) / d.norm()
}

/// Whether the open segments `(p1, p2)` and `(q1, q2)` share a point.
///
/// Touching at an endpoint is allowed; proper crossings and collinear overlaps
/// of positive length are not.
fn interiors_intersect(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool {
    let d1 = side(p1, p2, q1);
    let d2 = side(p1, p2, q2);
    let d3 = side(q1, q2, p1);
    let d4 = side(q1, q2, p2);
    let on = |d: f64| d.abs() <= GEOM_EPS;
    if on(d1) && on(d2) {
        // Collinear: compare parameter ranges along p.
        let dir = (p2 - p1).normalized().expect("distinct endpoints");
        let (s1, s2) = ((q1 - p1).dot(dir), (q2 - p1).dot(dir));
        let len = p1.distance(p2);
        let lo = s1.min(s2).max(0.0);
        let hi = s1.max(s2).min(len);
        return hi - lo > GEOM_EPS;
    }
    if on(d1) || on(d2) || on(d3) || on(d4) {
        // An endpoint touches the other segment's line: endpoint contact only.
        return false;
    }
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0)
}

/// One weighted barycenter of the collapsed model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Barycenter {
    pub position: Point2,
    pub weight: f64,
    /// Source segment and sub-segment index.
    pub source: (usize, usize),
    pub sub_length: f64,
}

/// The network reduced to sub-segment barycenters with midpoint-rule weights.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapsedNetwork {
    barycenters: Vec<Barycenter>,
    resolution: f64,
}

impl CollapsedNetwork {
    /// Splits each segment into `ceil(len / r)` equal pieces; each barycenter
    /// carries `density(b) * piece_length`.
    pub fn build(n: &Network, r: f64, density: &dyn Density) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidArgument(format!("collapse resolution {r} must be > 0")));
        }
        let mut barycenters = Vec::new();
        for (k, s) in n.segments().iter().enumerate() {
            let len = s.length();
            let mut pieces = ((len / r).ceil() as usize).max(1);
            while len / pieces as f64 > r {
                pieces += 1;
            }
            let sub_length = len / pieces as f64;
            for (j, sub) in s.partition(pieces)?.iter().enumerate() {
                let position = sub.barycenter();
                barycenters.push(Barycenter {
                    position,
                    weight: density.density(position) * sub_length,
                    source: (k, j),
                    sub_length,
                });
            }
        }
        Ok(CollapsedNetwork { barycenters, resolution: r })
    }

    /// Arbitrary weighted points; used to pose small hand-made instances.
    pub fn from_points(points: &[(Point2, f64)]) -> Self {
        CollapsedNetwork {
            barycenters: points
                .iter()
                .enumerate()
                .map(|(i, &(position, weight))| Barycenter {
                    position,
                    weight,
                    source: (i, 0),
                    sub_length: 0.0,
                })
                .collect(),
            resolution: 0.0,
        }
    }

    pub fn barycenters(&self) -> &[Barycenter] {
        &self.barycenters
    }

    pub fn len(&self) -> usize {
        self.barycenters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.barycenters.is_empty()
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn total_weight(&self) -> f64 {
        self.barycenters.iter().map(|b| b.weight).sum()
    }

    /// The same points restricted to the given indices.
    pub fn subset(&self, indices: &[usize]) -> Self {
        CollapsedNetwork {
            barycenters: indices.iter().map(|&i| self.barycenters[i]).collect(),
            resolution: self.resolution,
        }
    }
}

pub fn build_collapsed(n: &Network, r: f64, density: &dyn Density) -> Result<CollapsedNetwork> {
    CollapsedNetwork::build(n, r, density)
}
