#![allow(dead_code)]

use netdeploy::scenario::grid_network;
use netdeploy::{DensityField, Gaussian, Network, Point2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

/// Connected network with exactly `segments` edges (5 to 24) over a random box.
pub fn random_network(rng: &mut ChaCha8Rng, segments: usize) -> Network {
    let (cols, rows) = [(2, 3), (3, 3), (3, 4), (4, 4)]
        .into_iter()
        .find(|&(c, r)| {
            let full = (c - 1) * r + c * (r - 1);
            c * r - 1 <= segments && segments <= full
        })
        .expect("segment count out of range");
    let w = rng.gen_range(3.0..8.0);
    let h = rng.gen_range(3.0..8.0);
    let lo = p(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    grid_network(cols, rows, segments, lo, lo + p(w, h), rng.gen()).unwrap()
}

/// One to three Gaussians inside the network's bounding box.
pub fn random_density(rng: &mut ChaCha8Rng, n: &Network) -> DensityField {
    let (lo, hi) = n.bounding_box();
    let k = rng.gen_range(1..=3);
    DensityField::new(
        (0..k)
            .map(|_| Gaussian {
                a: rng.gen_range(1.0..10.0),
                cx: rng.gen_range(lo.x..=hi.x),
                cy: rng.gen_range(lo.y..=hi.y),
                sx: rng.gen_range(0.5..2.5),
                sy: rng.gen_range(0.5..2.5),
            })
            .collect(),
    )
    .unwrap()
}

/// Points in the bounding box inflated by `pad`.
pub fn plane_points(rng: &mut ChaCha8Rng, n: &Network, m: usize, pad: f64) -> Vec<Point2> {
    let (lo, hi) = n.bounding_box();
    (0..m)
        .map(|_| p(rng.gen_range(lo.x - pad..=hi.x + pad), rng.gen_range(lo.y - pad..=hi.y + pad)))
        .collect()
}

/// Points on random segments, away from the vertices.
pub fn network_points(rng: &mut ChaCha8Rng, n: &Network, m: usize) -> Vec<Point2> {
    (0..m)
        .map(|_| {
            let k = rng.gen_range(0..n.segment_count());
            n.segment(k).at(rng.gen_range(0.05..0.95))
        })
        .collect()
}

/// Nearest sensor by a plain scan; ties to the lowest index.
pub fn brute_owner(q: Point2, pos: &[Point2]) -> usize {
    let mut best = 0;
    for (i, s) in pos.iter().enumerate() {
        if q.distance(*s) < q.distance(pos[best]) {
            best = i;
        }
    }
    best
}

/// Midpoint Riemann sum of `g(q)` along every segment, `samples` points per segment.
pub fn riemann(n: &Network, samples: usize, g: impl Fn(Point2) -> f64) -> f64 {
    n.segments()
        .iter()
        .map(|s| {
            let h = 1.0 / samples as f64;
            let sum: f64 = (0..samples).map(|i| g(s.at((i as f64 + 0.5) * h))).sum();
            sum * h * s.length()
        })
        .sum()
}

/// Non-increasing linear pieces with `jumps` downward jumps at radii in `[0.4, 3]`.
pub fn random_jump_profile(rng: &mut ChaCha8Rng, jumps: usize) -> netdeploy::PerformanceFunction {
    use netdeploy::Piece;
    let mut radii: Vec<f64> = (0..jumps).map(|_| rng.gen_range(0.4..3.0)).collect();
    radii.sort_by(f64::total_cmp);
    let mut pieces = Vec::new();
    let mut intercept = rng.gen_range(2.0..5.0);
    let mut slope = -rng.gen_range(0.0..0.5);
    pieces.push(Piece::Linear { intercept, slope });
    for &r in &radii {
        let left = intercept + slope * r;
        let jump = rng.gen_range(0.1..1.0);
        slope = -rng.gen_range(0.0..0.5);
        intercept = left - jump - slope * r;
        pieces.push(Piece::Linear { intercept, slope });
    }
    netdeploy::PerformanceFunction::new(pieces, radii).unwrap()
}

/// Roots of `|a + t (b - a) - x| = r` in `(0, 1)` by the textbook quadratic formula.
pub fn line_crossings(s: &netdeploy::Segment, x: Point2, r: f64) -> Vec<f64> {
    let d = s.b() - s.a();
    let e = s.a() - x;
    let (qa, qb, qc) = (d.dot(d), 2.0 * d.dot(e), e.dot(e) - r * r);
    let disc = qb * qb - 4.0 * qa * qc;
    if disc <= 0.0 {
        return vec![];
    }
    [(-qb - disc.sqrt()) / (2.0 * qa), (-qb + disc.sqrt()) / (2.0 * qa)]
        .into_iter()
        .filter(|t| *t > 0.0 && *t < 1.0)
        .collect()
}

/// `int_s f(|q - x|) rho(q) dq`, split at the foot of `x` and at every radius crossing.
pub fn split_integral(
    f: &netdeploy::PerformanceFunction,
    rho: &dyn netdeploy::Density,
    s: &netdeploy::Segment,
    x: Point2,
) -> f64 {
    let mut knots = vec![s.project_param(x)];
    for r in f.breakpoints() {
        knots.extend(line_crossings(s, x, r));
    }
    let len = s.length();
    netdeploy::quadrature::integrate_split(
        |t| {
            let q = s.at(t);
            f.value(q.distance(x)) * rho.density(q) * len
        },
        0.0,
        1.0,
        &knots,
        netdeploy::quadrature::Tolerance::uniform(1e-14),
    )
    .unwrap()
}

/// Length of `s` inside the open disc of radius `r` around `x`.
pub fn chord_length(s: &netdeploy::Segment, x: Point2, r: f64) -> f64 {
    let d = s.b() - s.a();
    let e = s.a() - x;
    let (qa, qb, qc) = (d.dot(d), 2.0 * d.dot(e), e.dot(e) - r * r);
    let disc = qb * qb - 4.0 * qa * qc;
    if disc <= 0.0 {
        return 0.0;
    }
    let t0 = ((-qb - disc.sqrt()) / (2.0 * qa)).max(0.0);
    let t1 = ((-qb + disc.sqrt()) / (2.0 * qa)).min(1.0);
    (t1 - t0).max(0.0) * s.length()
}

/// Central difference of `g` at `x` along both axes.
pub fn central_gradient(x: Point2, h: f64, g: impl Fn(Point2) -> f64) -> Point2 {
    Point2::new(
        (g(x + Point2::new(h, 0.0)) - g(x - Point2::new(h, 0.0))) / (2.0 * h),
        (g(x + Point2::new(0.0, h)) - g(x - Point2::new(0.0, h))) / (2.0 * h),
    )
}

/// `|a - b|_inf / |b|_inf`.
pub fn vec_rel_err(a: Point2, b: Point2) -> f64 {
    let scale = b.x.abs().max(b.y.abs());
    (a.x - b.x).abs().max((a.y - b.y).abs()) / scale.max(1e-300)
}

/// A seeded random ascent instance: network of 5 to 20 segments, 3 to 10 sensors.
pub struct Instance {
    pub network: Network,
    pub density: DensityField,
    pub collapsed: netdeploy::CollapsedNetwork,
    pub f: netdeploy::PerformanceFunction,
    pub start: Vec<Point2>,
}

pub fn instance(seed: u64, mode: netdeploy::optimizer::Mode) -> Instance {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let segs = rng.gen_range(5..=20);
    let network = random_network(&mut rng, segs);
    let density = random_density(&mut rng, &network);
    let collapsed = netdeploy::CollapsedNetwork::build(&network, 0.3, &density).unwrap();
    let f = netdeploy::PerformanceFunction::tanh(rng.gen_range(0.8..2.0)).unwrap();
    let m = rng.gen_range(3..=10);
    let start = if mode.on_network() {
        network_points(&mut rng, &network, m)
    } else {
        plane_points(&mut rng, &network, m, 0.5)
    };
    Instance { network, density, collapsed, f, start }
}

/// Runs exactly `iterations` ascent steps at fixed radius, without early stopping.
pub fn run_instance(inst: &Instance, mode: netdeploy::optimizer::Mode, iterations: usize) -> netdeploy::optimizer::DeploymentState {
    use netdeploy::optimizer::{Ascent, AscentParams, Mode, Model};
    let model = match mode {
        Mode::NetworkFull => Model::Full { density: &inst.density, tol: netdeploy::quadrature::Tolerance::uniform(1e-9) },
        _ => Model::Collapsed(&inst.collapsed),
    };
    let params = AscentParams::for_mode(mode, &inst.network, 0.3);
    let eng = Ascent::new(&inst.network, model, mode, inst.f.clone(), params).unwrap();
    let mut state = eng.state(inst.start.clone(), inst.f.radius().unwrap()).unwrap();
    for _ in 0..iterations {
        eng.iterate(&mut state).unwrap();
    }
    state
}
