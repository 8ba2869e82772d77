//! Points and straight segments in the plane.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or a free vector) in the plane.
///
/// Serialised as a two-element array `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2 { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Point2 {
    pub const ZERO: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn distance(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn normalized(self) -> Option<Point2> {
        let n = self.norm();
        (n > 0.0).then(|| self * (1.0 / n))
    }

    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point2 {
    fn add_assign(&mut self, o: Point2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Closed segment `[a, b]` with `a != b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    a: Point2,
    b: Point2,
}

/// Closest point of a segment to a query point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub point: Point2,
    pub t: f64,
    pub distance: f64,
}

impl Segment {
    pub fn new(a: Point2, b: Point2) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "segment endpoints must be finite, got {a:?} and {b:?}"
            )));
        }
        if a == b {
            return Err(Error::InvalidArgument(format!(
                "segment endpoints coincide at {a:?}"
            )));
        }
        Ok(Segment { a, b })
    }

    /// Skips validation; callers guarantee finite, distinct endpoints.
    pub(crate) fn new_unchecked(a: Point2, b: Point2) -> Self {
        Segment { a, b }
    }

    pub fn a(&self) -> Point2 {
        self.a
    }

    pub fn b(&self) -> Point2 {
        self.b
    }

    /// `b - a`.
    pub fn delta(&self) -> Point2 {
        self.b - self.a
    }

    pub fn length(&self) -> f64 {
        self.delta().norm()
    }

    /// Unit vector from `a` towards `b`.
    pub fn direction(&self) -> Point2 {
        self.delta() * (1.0 / self.length())
    }

    pub fn barycenter(&self) -> Point2 {
        (self.a + self.b) * 0.5
    }

    /// Affine interpolation `a (1 - t) + b t`, without range checks.
    ///
    /// The convex-combination form makes `t = 0`, `t = 1` and `t = 0.5`
    /// reproduce `a`, `b` and [`Segment::barycenter`] bit for bit.
    pub fn at(&self, t: f64) -> Point2 {
        self.a * (1.0 - t) + self.b * t
    }

    pub fn point_at(&self, t: f64) -> Result<Point2> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidArgument(format!(
                "segment parameter {t} outside [0, 1]"
            )));
        }
        Ok(self.at(t))
    }

    /// Sub-segment between two parameters.
    pub fn sub(&self, t0: f64, t1: f64) -> Result<Segment> {
        Segment::new(self.at(t0), self.at(t1))
    }

    /// Splits into `k` equal sub-segments; consecutive pieces share endpoints exactly.
    pub fn partition(&self, k: usize) -> Result<Vec<Segment>> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "a segment cannot be partitioned into 0 pieces".into(),
            ));
        }
        let kf = k as f64;
        let node = |i: usize| match i {
            0 => self.a,
            i if i == k => self.b,
            i => self.at(i as f64 / kf),
        };
        (0..k).map(|i| Segment::new(node(i), node(i + 1))).collect()
    }

    /// Parameter of the orthogonal foot of `q` on the supporting line, clamped to `[0, 1]`.
    pub fn project_param(&self, q: Point2) -> f64 {
        let d = self.delta();
        ((q - self.a).dot(d) / d.norm_sq()).clamp(0.0, 1.0)
    }

    pub fn project(&self, q: Point2) -> Projection {
        let t = self.project_param(q);
        let point = self.at(t);
        Projection {
            point,
            t,
            distance: q.distance(point),
        }
    }
}

pub fn segment_length(s: &Segment) -> f64 {
    s.length()
}

pub fn barycenter(s: &Segment) -> Point2 {
    s.barycenter()
}

pub fn partition_segment(s: &Segment, k: usize) -> Result<Vec<Segment>> {
    s.partition(k)
}

pub fn point_at(s: &Segment, t: f64) -> Result<Point2> {
    s.point_at(t)
}

pub fn project_point_to_segment(q: Point2, s: &Segment) -> Projection {
    s.project(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment {
        Segment::new(Point2::new(ax, ay), Point2::new(bx, by)).unwrap()
    }

    #[test]
    fn lengths() {
        assert_eq!(seg(0.0, 0.0, 3.0, 4.0).length(), 5.0);
        assert_eq!(seg(1.0, 1.0, 1.0, 2.0).length(), 1.0);
        assert_eq!(seg(0.0, 0.0, 2.0, 0.0).length(), 2.0);
    }

    #[test]
    fn barycenters() {
        assert_eq!(seg(0.0, 0.0, 2.0, 4.0).barycenter(), Point2::new(1.0, 2.0));
        assert_eq!(seg(-1.0, 0.0, 1.0, 0.0).barycenter(), Point2::new(0.0, 0.0));
        assert_eq!(seg(0.0, 0.0, 0.0, 3.0).barycenter(), Point2::new(0.0, 1.5));
    }

    #[test]
    fn degenerate_segment_rejected() {
        let p = Point2::new(1.0, 1.0);
        assert!(Segment::new(p, p).is_err());
        assert!(Segment::new(p, Point2::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn partition_thirds() {
        let parts = seg(0.0, 0.0, 3.0, 0.0).partition(3).unwrap();
        let ends: Vec<_> = parts.iter().map(|s| (s.a().x, s.b().x)).collect();
        assert_eq!(ends, vec![(0.0, 1.0), (1.0, 2.0), (2.0, 3.0)]);
        let one = seg(0.0, 0.0, 1.0, 1.0).partition(1).unwrap();
        assert_eq!(one, vec![seg(0.0, 0.0, 1.0, 1.0)]);
        for s in seg(0.0, 0.0, 1.0, 0.0).partition(4).unwrap() {
            assert_eq!(s.length(), 0.25);
        }
        assert!(seg(0.0, 0.0, 1.0, 0.0).partition(0).is_err());
    }

    #[test]
    fn point_at_examples() {
        let s = seg(0.0, 0.0, 2.0, 0.0);
        assert_eq!(s.point_at(0.5).unwrap(), Point2::new(1.0, 0.0));
        assert_eq!(s.point_at(0.0).unwrap(), Point2::new(0.0, 0.0));
        assert_eq!(
            seg(0.0, 0.0, 4.0, 2.0).point_at(0.25).unwrap(),
            Point2::new(1.0, 0.5)
        );
        assert!(s.point_at(1.5).is_err());
        assert!(s.point_at(-0.1).is_err());
    }

    #[test]
    fn projections() {
        let s = seg(0.0, 0.0, 2.0, 0.0);
        let p = s.project(Point2::new(1.0, 1.0));
        assert_eq!((p.point, p.t, p.distance), (Point2::new(1.0, 0.0), 0.5, 1.0));
        let p = s.project(Point2::new(-1.0, 1.0));
        assert_eq!((p.point, p.t), (Point2::new(0.0, 0.0), 0.0));
        assert!((p.distance - 2f64.sqrt()).abs() < 1e-15);
        let p = s.project(Point2::new(1.0, 0.0));
        assert_eq!((p.point, p.t, p.distance), (Point2::new(1.0, 0.0), 0.5, 0.0));
    }

    fn arb_point() -> impl Strategy<Value = Point2> {
        (-50.0..50.0f64, -50.0..50.0f64).prop_map(|(x, y)| Point2::new(x, y))
    }

    fn arb_segment() -> impl Strategy<Value = Segment> {
        (arb_point(), arb_point())
            .prop_filter("distinct endpoints", |(a, b)| a.distance(*b) > 1e-6)
            .prop_map(|(a, b)| Segment::new(a, b).unwrap())
    }

    proptest! {
        #[test]
        fn partition_preserves_length(s in arb_segment(), k in 1usize..64) {
            let parts = s.partition(k).unwrap();
            let total: f64 = parts.iter().map(Segment::length).sum();
            prop_assert!((total - s.length()).abs() <= 1e-12 * s.length());
            prop_assert_eq!(parts[0].a(), s.a());
            prop_assert_eq!(parts[k - 1].b(), s.b());
            for w in parts.windows(2) {
                prop_assert_eq!(w[0].b(), w[1].a());
            }
        }

        #[test]
        fn barycenter_is_midpoint_param(s in arb_segment()) {
            prop_assert_eq!(s.barycenter(), s.point_at(0.5).unwrap());
        }

        #[test]
        fn projection_no_farther_than_endpoints(s in arb_segment(), q in arb_point()) {
            let p = s.project(q);
            prop_assert!(p.distance <= q.distance(s.a()) + 1e-12);
            prop_assert!(p.distance <= q.distance(s.b()) + 1e-12);
            prop_assert!((0.0..=1.0).contains(&p.t));
        }

        #[test]
        fn point_at_monotone(s in arb_segment(), t1 in 0.0..1.0f64, dt in 1e-6..1.0f64) {
            let t2 = (t1 + dt).min(1.0);
            prop_assume!(t2 > t1);
            let d1 = s.point_at(t1).unwrap().distance(s.a());
            let d2 = s.point_at(t2).unwrap().distance(s.a());
            prop_assert!(d1 < d2);
        }
    }
}
