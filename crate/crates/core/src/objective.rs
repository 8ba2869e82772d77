//! Sensor performance profiles, density fields and the multi-center objective.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Segment};
use crate::gradient::radius_crossings;
use crate::network::{CollapsedNetwork, Network};
use crate::quadrature::{integrate_split, Tolerance};
use crate::voronoi::{allocate_barycenters_lex, clip_network_cells, NetworkCells, SensorSet};

/// Importance weight over the plane.
pub trait Density: Sync + Send {
    fn density(&self, q: Point2) -> f64;
}

impl<F> Density for F
where
    F: Fn(Point2) -> f64 + Sync + Send,
{
    fn density(&self, q: Point2) -> f64 {
        self(q)
    }
}

/// Constant density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformDensity(pub f64);

impl Density for UniformDensity {
    fn density(&self, _: Point2) -> f64 {
        self.0
    }
}

/// `a * exp(-((x - cx) / sx)^2 - ((y - cy) / sy)^2)`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gaussian {
    pub a: f64,
    pub cx: f64,
    pub cy: f64,
    pub sx: f64,
    pub sy: f64,
}

impl Gaussian {
    pub fn eval(&self, q: Point2) -> f64 {
        let u = (q.x - self.cx) / self.sx;
        let v = (q.y - self.cy) / self.sy;
        self.a * (-u * u - v * v).exp()
    }
}

/// Sum of anisotropic Gaussians.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityField {
    pub gaussians: Vec<Gaussian>,
}

impl DensityField {
    pub fn new(gaussians: Vec<Gaussian>) -> Result<Self> {
        let d = DensityField { gaussians };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gaussians.iter().enumerate() {
            let finite = [g.a, g.cx, g.cy, g.sx, g.sy].iter().all(|v| v.is_finite());
            if !finite || g.a < 0.0 || g.sx <= 0.0 || g.sy <= 0.0 {
                return Err(Error::config(
                    format!("density.gaussians[{i}]"),
                    "amplitude must be >= 0, widths > 0, all values finite",
                ));
            }
        }
        Ok(())
    }

    /// The eleven-term airport-wing field of the case study.
    pub fn case_study() -> Self {
        const TABLE: [(f64, f64, f64, f64, f64); 11] = [
            (20.0, 4.3, 2.3, 1.5, 1.5),
            (20.0, 5.0, 4.0, 1.5, 1.5),
            (20.0, 6.0, 5.5, 1.5, 1.5),
            (10.0, 3.5, 5.0, 2.0, 2.0),
            (4.0, 9.0, 8.5, 4.0, 4.0),
            (20.0, 12.5, 8.5, 1.5, 1.5),
            (20.0, 13.5, 7.2, 1.5, 1.5),
            (20.0, 15.0, 6.2, 1.5, 1.5),
            (10.0, 14.5, 10.5, 2.0, 2.0),
            (10.0, 17.0, 9.0, 2.0, 2.0),
            (4.0, 20.0, 7.0, 4.0, 2.0),
        ];
        DensityField {
            gaussians: TABLE
                .iter()
                .map(|&(a, cx, cy, sx, sy)| Gaussian { a, cx, cy, sx, sy })
                .collect(),
        }
    }
}

impl Density for DensityField {
    fn density(&self, q: Point2) -> f64 {
        self.gaussians.iter().map(|g| g.eval(q)).sum()
    }
}

pub fn eval_density(d: &DensityField, q: Point2) -> f64 {
    d.density(q)
}

/// One continuously differentiable, non-increasing piece of a performance profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Piece {
    Constant { value: f64 },
    Linear { intercept: f64, slope: f64 },
    Exponential { amplitude: f64, rate: f64 },
    /// Logistic sensing profile at unit radius: `(1 - tanh(6u - 3)) / 2`.
    Tanh,
}

impl Piece {
    pub fn value(&self, u: f64) -> f64 {
        match *self {
            Piece::Constant { value } => value,
            Piece::Linear { intercept, slope } => intercept + slope * u,
            Piece::Exponential { amplitude, rate } => amplitude * (-rate * u).exp(),
            // (1 - tanh z) / 2 == 1 / (1 + e^{2z}) without cancellation in the tail.
            Piece::Tanh => 1.0 / (1.0 + (2.0 * (6.0 * u - 3.0)).exp()),
        }
    }

    pub fn derivative(&self, u: f64) -> f64 {
        match *self {
            Piece::Constant { .. } => 0.0,
            Piece::Linear { slope, .. } => slope,
            Piece::Exponential { amplitude, rate } => -rate * amplitude * (-rate * u).exp(),
            Piece::Tanh => {
                // -3 sech^2(z), sech^2(z) = 4 e^{-2|z|} / (1 + e^{-2|z|})^2
                let e = (-2.0 * (6.0 * u - 3.0).abs()).exp();
                -12.0 * e / ((1.0 + e) * (1.0 + e))
            }
        }
    }

    fn check(&self) -> std::result::Result<(), String> {
        let ok = match *self {
            Piece::Constant { value } => value.is_finite(),
            Piece::Linear { intercept, slope } => intercept.is_finite() && slope.is_finite() && slope <= 0.0,
            Piece::Exponential { amplitude, rate } => {
                amplitude.is_finite() && rate.is_finite() && amplitude >= 0.0 && rate >= 0.0
            }
            Piece::Tanh => true,
        };
        if ok {
            Ok(())
        } else {
            Err(format!("piece {self:?} is not finite and non-increasing"))
        }
    }
}

/// Serialisable description of a performance profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PerformanceSpec {
    Tanh {
        #[serde(rename = "R")]
        radius: f64,
    },
    Piecewise {
        pieces: Vec<Piece>,
        #[serde(default)]
        breakpoints: Vec<f64>,
        /// Radius the breakpoints refer to. When present, the profile is
        /// rescaled in its argument as the sensing radius changes.
        #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
    },
}

/// Non-increasing, piecewise differentiable map from distance to sensing quality.
///
/// Pieces live on half-open intervals `[R_{k-1}, R_k)`. All shapes are defined
/// on a reference scale; `scale` stretches the argument, so the profile at
/// sensing radius `R` is `f(x) = base(x / scale)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceFunction {
    pieces: Vec<Piece>,
    breakpoints: Vec<f64>,
    reference_radius: Option<f64>,
    scale: f64,
}

impl PerformanceFunction {
    pub fn new(pieces: Vec<Piece>, breakpoints: Vec<f64>) -> Result<Self> {
        let f = PerformanceFunction {
            pieces,
            breakpoints,
            reference_radius: None,
            scale: 1.0,
        };
        f.validate()?;
        Ok(f)
    }

    /// The logistic profile `(1 - tanh((x - R/2) / (R/6))) / 2`.
    pub fn tanh(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("sensing radius {radius} must be > 0")));
        }
        Ok(PerformanceFunction {
            pieces: vec![Piece::Tanh],
            breakpoints: vec![],
            reference_radius: Some(1.0),
            scale: radius,
        })
    }

    /// `value` on `[0, radius)`, 0 beyond.
    pub fn step(value: f64, radius: f64) -> Result<Self> {
        Self::new(
            vec![Piece::Constant { value }, Piece::Constant { value: 0.0 }],
            vec![radius],
        )
    }

    pub fn constant(value: f64) -> Self {
        PerformanceFunction {
            pieces: vec![Piece::Constant { value }],
            breakpoints: vec![],
            reference_radius: None,
            scale: 1.0,
        }
    }

    pub fn from_spec(spec: &PerformanceSpec) -> Result<Self> {
        match spec {
            PerformanceSpec::Tanh { radius } => Self::tanh(*radius),
            PerformanceSpec::Piecewise {
                pieces,
                breakpoints,
                radius,
            } => {
                let mut f = Self::new(pieces.clone(), breakpoints.clone())?;
                if let Some(r) = radius {
                    if !(*r > 0.0) {
                        return Err(Error::config("performance.R", "must be > 0"));
                    }
                    f.reference_radius = Some(*r);
                }
                Ok(f)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |reason: String| Err(Error::config("performance", reason));
        if self.pieces.len() != self.breakpoints.len() + 1 {
            return bad(format!(
                "{} pieces need {} breakpoints, got {}",
                self.pieces.len(),
                self.pieces.len().saturating_sub(1),
                self.breakpoints.len()
            ));
        }
        for p in &self.pieces {
            if let Err(e) = p.check() {
                return bad(e);
            }
        }
        if self.breakpoints.iter().any(|r| !(r.is_finite() && *r > 0.0))
            || self.breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return bad("breakpoints must be positive and strictly increasing".into());
        }
        for (k, &r) in self.breakpoints.iter().enumerate() {
            let (left, right) = (self.pieces[k].value(r), self.pieces[k + 1].value(r));
            if right > left + 1e-12 {
                return bad(format!("upward jump at breakpoint {r}"));
            }
        }
        Ok(())
    }

    /// Same profile rescaled to sensing radius `radius`.
    ///
    /// Profiles without a reference radius are returned unchanged.
    pub fn with_radius(&self, radius: f64) -> Self {
        let mut f = self.clone();
        if let Some(r0) = self.reference_radius {
            f.scale = radius / r0;
        }
        f
    }

    /// Sensing radius this profile currently models, when it has one.
    pub fn radius(&self) -> Option<f64> {
        self.reference_radius.map(|r0| r0 * self.scale)
    }

    pub fn to_spec(&self) -> PerformanceSpec {
        match (self.pieces.as_slice(), self.reference_radius) {
            ([Piece::Tanh], Some(r0)) if self.breakpoints.is_empty() => PerformanceSpec::Tanh {
                radius: r0 * self.scale,
            },
            _ => PerformanceSpec::Piecewise {
                pieces: self.pieces.clone(),
                breakpoints: self.breakpoints.clone(),
                radius: self.radius(),
            },
        }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Discontinuity radii in distance units.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.iter().map(|r| r * self.scale).collect()
    }

    /// `f_{k+1}(R_k) - f_k(R_k)` for every breakpoint (non-positive).
    pub fn jumps(&self) -> Vec<f64> {
        self.breakpoints
            .iter()
            .enumerate()
            .map(|(k, &r)| self.pieces[k + 1].value(r) - self.pieces[k].value(r))
            .collect()
    }

    pub fn is_continuous(&self) -> bool {
        self.jumps().iter().all(|j| j.abs() <= 1e-12)
    }

    fn piece_index(&self, u: f64) -> usize {
        self.breakpoints.partition_point(|&r| r <= u)
    }

    /// `f(x)` for `x >= 0`; callers guarantee the sign.
    pub fn value(&self, x: f64) -> f64 {
        let u = x / self.scale;
        self.pieces[self.piece_index(u)].value(u)
    }

    /// Derivative of the active piece (right derivative at breakpoints).
    pub fn slope(&self, x: f64) -> f64 {
        let u = x / self.scale;
        self.pieces[self.piece_index(u)].derivative(u) / self.scale
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::InvalidArgument(format!("distance {x} must be >= 0")));
        }
        Ok(self.value(x))
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        let x = self.eval(x).map(|_| x)?;
        let u = x / self.scale;
        for (k, &r) in self.breakpoints.iter().enumerate() {
            let jump = self.pieces[k + 1].value(r) - self.pieces[k].value(r);
            if u == r && jump != 0.0 {
                return Err(Error::UndefinedDerivative(r * self.scale));
            }
        }
        Ok(self.slope(x))
    }

    /// Upper bound on `|f'|` over `[0, limit]`, by dense sampling.
    pub fn max_abs_slope(&self, limit: f64) -> f64 {
        const N: usize = 20_000;
        (0..=N)
            .map(|i| self.slope(limit * i as f64 / N as f64).abs())
            .fold(0.0, f64::max)
    }
}

pub fn eval_f(f: &PerformanceFunction, x: f64) -> Result<f64> {
    f.eval(x)
}

pub fn eval_f_derivative(f: &PerformanceFunction, x: f64) -> Result<f64> {
    f.derivative(x)
}

fn nearest_distance(q: Point2, p: &SensorSet) -> f64 {
    p.positions()
        .iter()
        .map(|s| q.distance(*s))
        .fold(f64::INFINITY, f64::min)
}

/// Collapsed objective in distance form: `sum_b f(dist(b, P)) w_b`.
pub fn h_collapsed(c: &CollapsedNetwork, f: &PerformanceFunction, p: &SensorSet) -> f64 {
    c.barycenters()
        .iter()
        .map(|b| f.value(nearest_distance(b.position, p)) * b.weight)
        .sum()
}

/// Collapsed objective in max form: `sum_b max_i f(|b - p_i|) w_b`.
pub fn h_collapsed_max(c: &CollapsedNetwork, f: &PerformanceFunction, p: &SensorSet) -> f64 {
    c.barycenters()
        .iter()
        .map(|b| {
            let best = p
                .positions()
                .iter()
                .map(|s| f.value(b.position.distance(*s)))
                .fold(f64::NEG_INFINITY, f64::max);
            best * b.weight
        })
        .sum()
}

/// Per-sensor cell values of the collapsed objective under the lexicographic partition.
pub fn h_cells_collapsed(
    c: &CollapsedNetwork,
    f: &PerformanceFunction,
    p: &SensorSet,
) -> Result<Vec<f64>> {
    let alloc = allocate_barycenters_lex(c, p)?;
    let mut cells = vec![0.0; p.len()];
    for (b, &owner) in c.barycenters().iter().zip(alloc.owners()) {
        cells[owner] += f.value(b.position.distance(p.positions()[owner])) * b.weight;
    }
    Ok(cells)
}

/// Collapsed objective in Voronoi form: sum of the lexicographic cell values.
pub fn h_collapsed_voronoi(
    c: &CollapsedNetwork,
    f: &PerformanceFunction,
    p: &SensorSet,
) -> Result<f64> {
    Ok(h_cells_collapsed(c, f, p)?.iter().sum())
}

pub fn h_cell_collapsed(
    c: &CollapsedNetwork,
    f: &PerformanceFunction,
    p: &SensorSet,
    i: usize,
) -> Result<f64> {
    h_cells_collapsed(c, f, p)?
        .get(i)
        .copied()
        .ok_or_else(|| Error::InvalidArgument(format!("no sensor {i}")))
}

/// Parameters along `s` where the integrand of sensor `p` may lose smoothness:
/// the orthogonal foot of `p` and the crossings of every profile breakpoint.
pub(crate) fn kink_params(s: &Segment, p: Point2, f: &PerformanceFunction) -> Vec<f64> {
    let mut knots = vec![s.project_param(p)];
    for r in f.breakpoints() {
        knots.extend(radius_crossings(s, p, r));
    }
    knots
}

/// `int_{t0}^{t1} f(|gamma(t) - p|) phi(gamma(t)) |b - a| dt` on network segment `seg_idx`.
pub(crate) fn interval_integral(
    s: &Segment,
    seg_idx: usize,
    t0: f64,
    t1: f64,
    p: Point2,
    f: &PerformanceFunction,
    density: &dyn Density,
    tol: Tolerance,
) -> Result<f64> {
    let len = s.length();
    let knots = kink_params(s, p, f);
    integrate_split(
        |t| {
            let q = s.at(t);
            f.value(q.distance(p)) * density.density(q) * len
        },
        t0,
        t1,
        &knots,
        tol,
    )
    .map_err(|e| Error::Quadrature {
        segment: seg_idx,
        a: e.a,
        b: e.b,
    })
}

/// Per-interval contributions of every network segment, following `cells`.
pub(crate) fn interval_contributions(
    n: &Network,
    f: &PerformanceFunction,
    density: &dyn Density,
    p: &SensorSet,
    cells: &NetworkCells,
    tol: Tolerance,
) -> Result<Vec<Vec<f64>>> {
    (0..n.segment_count())
        .map(|k| segment_contributions(n, k, f, density, p.positions(), cells.segment(k), tol))
        .collect()
}

pub(crate) fn segment_contributions(
    n: &Network,
    k: usize,
    f: &PerformanceFunction,
    density: &dyn Density,
    positions: &[Point2],
    intervals: &[crate::voronoi::CellInterval],
    tol: Tolerance,
) -> Result<Vec<f64>> {
    let s = n.segment(k);
    intervals
        .iter()
        .map(|iv| interval_integral(&s, k, iv.t0, iv.t1, positions[iv.owner], f, density, tol))
        .collect()
}

/// Full-network objective: each lexicographic cell integrated against its own sensor.
pub fn h_full(
    n: &Network,
    f: &PerformanceFunction,
    density: &dyn Density,
    p: &SensorSet,
    tol: Tolerance,
) -> Result<f64> {
    Ok(h_cells_full(n, f, density, p, tol)?.iter().sum())
}

pub fn h_cells_full(
    n: &Network,
    f: &PerformanceFunction,
    density: &dyn Density,
    p: &SensorSet,
    tol: Tolerance,
) -> Result<Vec<f64>> {
    let cells = clip_network_cells(n, p)?;
    let contrib = interval_contributions(n, f, density, p, &cells, tol)?;
    let mut out = vec![0.0; p.len()];
    for (k, values) in contrib.iter().enumerate() {
        for (iv, v) in cells.segment(k).iter().zip(values) {
            out[iv.owner] += v;
        }
    }
    Ok(out)
}

pub fn h_cell_full(
    n: &Network,
    f: &PerformanceFunction,
    density: &dyn Density,
    p: &SensorSet,
    tol: Tolerance,
    i: usize,
) -> Result<f64> {
    h_cells_full(n, f, density, p, tol)?
        .get(i)
        .copied()
        .ok_or_else(|| Error::InvalidArgument(format!("no sensor {i}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn tanh_profile_values() {
        let f = PerformanceFunction::tanh(1.0).unwrap();
        assert_eq!(f.eval(0.5).unwrap(), 0.5);
        // (1 - tanh(-3)) / 2
        let expected = 0.5 * (1.0 - (-3.0f64).tanh());
        assert!(close(f.eval(0.0).unwrap(), expected, 1e-15));
        assert!((f.eval(0.0).unwrap() - 0.9975274).abs() < 1e-7);
        assert!(f.eval(-1e-3).is_err());
    }

    #[test]
    fn tanh_profile_slopes() {
        for r in [0.5, 1.0, 10.0] {
            let f = PerformanceFunction::tanh(r).unwrap();
            assert!(close(f.derivative(r / 2.0).unwrap(), -3.0 / r, 1e-14));
            // Closed form -3/R sech^2(6(x - R/2)/R) at an arbitrary point.
            let x = 0.37 * r;
            let z = 6.0 * (x - r / 2.0) / r;
            let sech2 = 1.0 / z.cosh().powi(2);
            assert!(close(f.derivative(x).unwrap(), -3.0 / r * sech2, 1e-13));
        }
        let f = PerformanceFunction::tanh(1.0).unwrap();
        assert!(f.derivative(20.0).unwrap().abs() < 1e-40);
        assert!(f.derivative(20.0).unwrap() <= 0.0);
    }

    #[test]
    fn tanh_at_seven_eighths_radius() {
        let f = PerformanceFunction::tanh(2.0).unwrap();
        let want = 0.5 * (1.0 - (2.25f64).tanh());
        assert!(close(f.value(1.75), want, 1e-14));
        assert!(f.value(1.75) < 0.012);
    }

    #[test]
    fn step_profile_half_open() {
        let f = PerformanceFunction::step(1.0, 2.0).unwrap();
        assert_eq!(f.eval(2.0).unwrap(), 0.0);
        assert_eq!(f.eval(1.999).unwrap(), 1.0);
        assert!(matches!(f.derivative(2.0), Err(Error::UndefinedDerivative(_))));
        assert_eq!(f.derivative(1.0).unwrap(), 0.0);
        assert!(!f.is_continuous());
        assert_eq!(f.jumps(), vec![-1.0]);
    }

    #[test]
    fn constant_piece_has_zero_slope() {
        assert_eq!(PerformanceFunction::constant(3.0).derivative(1.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_increasing_profiles() {
        assert!(PerformanceFunction::new(vec![Piece::Linear { intercept: 0.0, slope: 1.0 }], vec![]).is_err());
        assert!(PerformanceFunction::new(
            vec![Piece::Constant { value: 0.0 }, Piece::Constant { value: 1.0 }],
            vec![1.0]
        )
        .is_err());
        assert!(PerformanceFunction::new(vec![Piece::Tanh], vec![1.0]).is_err());
    }

    #[test]
    fn continuous_piecewise_profile() {
        // 1 - x on [0, 1), 0 afterwards.
        let f = PerformanceFunction::new(
            vec![Piece::Linear { intercept: 1.0, slope: -1.0 }, Piece::Constant { value: 0.0 }],
            vec![1.0],
        )
        .unwrap();
        assert!(f.is_continuous());
        assert_eq!(f.derivative(1.0).unwrap(), 0.0);
        assert_eq!(f.derivative(0.5).unwrap(), -1.0);
    }

    #[test]
    fn rescaling() {
        let f = PerformanceFunction::tanh(10.0).unwrap();
        let g = f.with_radius(1.0);
        assert_eq!(g, PerformanceFunction::tanh(1.0).unwrap());
        assert_eq!(g.radius(), Some(1.0));
        let spec = PerformanceSpec::Piecewise {
            pieces: vec![Piece::Constant { value: 1.0 }, Piece::Constant { value: 0.0 }],
            breakpoints: vec![0.5],
            radius: Some(1.0),
        };
        let h = PerformanceFunction::from_spec(&spec).unwrap().with_radius(4.0);
        assert_eq!(h.breakpoints(), vec![2.0]);
        assert_eq!(h.to_spec(), PerformanceSpec::Piecewise {
            pieces: vec![Piece::Constant { value: 1.0 }, Piece::Constant { value: 0.0 }],
            breakpoints: vec![0.5],
            radius: Some(4.0),
        });
    }

    #[test]
    fn monotone_pieces_sampled() {
        let pieces = [
            Piece::Tanh,
            Piece::Exponential { amplitude: 2.0, rate: 0.7 },
            Piece::Linear { intercept: 1.0, slope: -0.3 },
            Piece::Constant { value: 0.4 },
        ];
        for p in pieces {
            for i in 0..1000 {
                let x = i as f64 * 0.005;
                assert!(p.value(x + 1e-3) <= p.value(x) + 1e-12, "{p:?} at {x}");
            }
        }
    }

    #[test]
    fn density_table() {
        let d = DensityField::case_study();
        assert_eq!(d.gaussians.len(), 11);
        let first = DensityField { gaussians: vec![d.gaussians[0]] };
        assert_eq!(first.density(Point2::new(4.3, 2.3)), 20.0);
        assert_eq!(DensityField::default().density(Point2::new(1.0, 2.0)), 0.0);
        let q = Point2::new(4.3, 2.3);
        let mut direct = 0.0;
        for g in &d.gaussians {
            let e = ((q.x - g.cx) / g.sx).powi(2) + ((q.y - g.cy) / g.sy).powi(2);
            direct += g.a * (-e).exp();
        }
        assert!(close(d.density(q), direct, 1e-14));
        assert!(d.gaussians.iter().any(|g| g.a == 20.0 && g.cx == 12.5 && g.cy == 8.5));
    }

    #[test]
    fn density_validation() {
        let g = Gaussian { a: 1.0, cx: 0.0, cy: 0.0, sx: 0.0, sy: 1.0 };
        assert!(DensityField::new(vec![g]).is_err());
        let g = Gaussian { a: -1.0, cx: 0.0, cy: 0.0, sx: 1.0, sy: 1.0 };
        assert!(DensityField::new(vec![g]).is_err());
    }
}
