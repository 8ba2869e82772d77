//! Central finite-difference checks of the analytic derivatives.
//!
//! Configurations are drawn at random and discarded when they sit within
//! `tie_gap` of an allocation tie or of a profile breakpoint, where the
//! objective is not differentiable and a two-sided difference is meaningless.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::gradient::{grad_collapsed_lex, grad_full};
use crate::network::{CollapsedNetwork, Network};
use crate::objective::{h_collapsed, h_full, Density, PerformanceFunction};
use crate::optimizer::Mode;
use crate::quadrature::Tolerance;
use crate::voronoi::SensorSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheckConfig {
    pub samples: usize,
    pub step: f64,
    pub tie_gap: f64,
    pub quadrature_tol: f64,
    pub r_collapse: f64,
    pub min_sensors: usize,
    pub max_sensors: usize,
    pub seed: u64,
}

impl Default for GradCheckConfig {
    fn default() -> Self {
        GradCheckConfig {
            samples: 100,
            step: 1e-6,
            tie_gap: 1e-3,
            quadrature_tol: 1e-10,
            r_collapse: 0.3,
            min_sensors: 3,
            max_sensors: 10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeReport {
    pub mode: Mode,
    pub samples: usize,
    /// Draws rejected as too close to a tie.
    pub rejected: usize,
    /// Largest `|analytic - fd|_inf / |fd|_inf` over the samples.
    pub max_rel_error: f64,
    pub worst: Option<Vec<Point2>>,
}

/// Relative error of the stacked derivative vector.
pub fn relative_error(analytic: &[f64], fd: &[f64]) -> f64 {
    let diff = analytic.iter().zip(fd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let scale = fd.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

fn second_gap(q: Point2, pos: &[Point2]) -> (f64, f64) {
    let mut d: Vec<f64> = pos.iter().map(|p| q.distance(*p)).collect();
    d.sort_by(f64::total_cmp);
    (d[0], d.get(1).map_or(f64::INFINITY, |s| s - d[0]))
}

fn near_breakpoint(f: &PerformanceFunction, d: f64, gap: f64) -> bool {
    f.breakpoints().iter().any(|r| (d - r).abs() < gap)
}

struct Sampler<'a> {
    n: &'a Network,
    pick: WeightedIndex<f64>,
    lo: Point2,
    hi: Point2,
}

impl<'a> Sampler<'a> {
    fn new(n: &'a Network) -> Result<Self> {
        let lengths: Vec<f64> = n.segments().iter().map(|s| s.length()).collect();
        let pick = WeightedIndex::new(&lengths).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let (lo, hi) = n.bounding_box();
        Ok(Sampler { n, pick, lo, hi })
    }

    /// Plane points anywhere in the bounding box, or network points away from vertices.
    /// Each point comes with its probe directions: the host edge on the network
    /// (where the constrained derivative is the projected cell gradient), the axes in the plane.
    fn draw(&self, rng: &mut ChaCha8Rng, m: usize, on_network: bool) -> Vec<(Point2, Vec<Point2>)> {
        (0..m)
            .map(|_| {
                if on_network {
                    let s = self.n.segment(self.pick.sample(rng));
                    (s.at(rng.gen_range(0.05..=0.95)), vec![s.direction()])
                } else {
                    let x = rng.gen_range(self.lo.x..=self.hi.x);
                    let y = rng.gen_range(self.lo.y..=self.hi.y);
                    (Point2::new(x, y), vec![Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)])
                }
            })
            .collect()
    }
}

/// Finite-difference check of one mode.
pub fn check_mode(
    network: &Network,
    density: &dyn Density,
    f: &PerformanceFunction,
    mode: Mode,
    cfg: &GradCheckConfig,
) -> Result<ModeReport> {
    let collapsed = match mode {
        Mode::NetworkFull => None,
        _ => Some(CollapsedNetwork::build(network, cfg.r_collapse, density)?),
    };
    let tol = Tolerance::uniform(cfg.quadrature_tol);
    let objective = |p: &SensorSet| -> Result<f64> {
        match &collapsed {
            Some(c) => Ok(h_collapsed(c, f, p)),
            None => h_full(network, f, density, p, tol),
        }
    };
    let sampler = Sampler::new(network)?;
    let tag = match mode {
        Mode::PlaneCollapsed => 0,
        Mode::NetworkCollapsed => 1,
        Mode::NetworkFull => 2,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(tag + 1)));
    let mut report = ModeReport {
        mode,
        samples: 0,
        rejected: 0,
        max_rel_error: 0.0,
        worst: None,
    };
    let max_draws = 1000 * cfg.samples.max(1);
    while report.samples < cfg.samples {
        if report.samples + report.rejected >= max_draws {
            return Err(Error::Degenerate(format!(
                "only {} of {} non-degenerate configurations found",
                report.samples, cfg.samples
            )));
        }
        let m = rng.gen_range(cfg.min_sensors..=cfg.max_sensors);
        let draw = sampler.draw(&mut rng, m, mode.on_network());
        let pos: Vec<Point2> = draw.iter().map(|d| d.0).collect();
        if !non_degenerate(network, collapsed.as_ref(), f, &pos, cfg.tie_gap) {
            report.rejected += 1;
            continue;
        }
        let p = SensorSet::new(pos.clone())?;
        let g = match &collapsed {
            Some(c) => grad_collapsed_lex(c, f, &p)?,
            None => grad_full(network, f, density, &p, tol)?,
        };
        let (analytic, fd) = compare(&p, &draw, &g, cfg.step, &objective)?;
        let err = relative_error(&analytic, &fd);
        if err > report.max_rel_error || report.worst.is_none() {
            report.max_rel_error = report.max_rel_error.max(err);
            report.worst = Some(pos);
        }
        report.samples += 1;
    }
    Ok(report)
}

/// Analytic and central-difference derivatives stacked over sensors and probe directions.
fn compare(
    p: &SensorSet,
    draw: &[(Point2, Vec<Point2>)],
    g: &[Point2],
    step: f64,
    objective: &impl Fn(&SensorSet) -> Result<f64>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut analytic = Vec::new();
    let mut fd = Vec::new();
    for (i, (x, dirs)) in draw.iter().enumerate() {
        for &d in dirs {
            analytic.push(g[i].dot(d));
            let plus = objective(&p.moved(i, *x + d * step)?)?;
            let minus = objective(&p.moved(i, *x - d * step)?)?;
            fd.push((plus - minus) / (2.0 * step));
        }
    }
    Ok((analytic, fd))
}

fn non_degenerate(
    n: &Network,
    collapsed: Option<&CollapsedNetwork>,
    f: &PerformanceFunction,
    pos: &[Point2],
    gap: f64,
) -> bool {
    for (i, a) in pos.iter().enumerate() {
        if pos[..i].iter().any(|b| a.distance(*b) < gap) {
            return false;
        }
    }
    match collapsed {
        Some(c) => c.barycenters().iter().all(|b| {
            let (d, second) = second_gap(b.position, pos);
            d >= gap && second >= gap && !near_breakpoint(f, d, gap)
        }),
        None => n.vertices().iter().all(|v| second_gap(*v, pos).1 >= gap),
    }
}

/// One report per mode.
pub fn check_all(
    network: &Network,
    density: &dyn Density,
    f: &PerformanceFunction,
    cfg: &GradCheckConfig,
) -> Result<Vec<ModeReport>> {
    [Mode::PlaneCollapsed, Mode::NetworkCollapsed, Mode::NetworkFull]
        .into_iter()
        .map(|m| check_mode(network, density, f, m, cfg))
        .collect()
}
