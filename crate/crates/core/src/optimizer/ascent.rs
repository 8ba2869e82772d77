//! Synchronous gradient ascent with per-sensor backtracking line search.

use rayon::prelude::*;

use super::{DeploymentState, Mode};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::gradient::{constrain_to_network, grad_collapsed_lex, grad_full, SensorDerivative, SNAP_LIMIT};
use crate::network::{CollapsedNetwork, Network};
use crate::objective::{segment_contributions, Density, PerformanceFunction};
use crate::quadrature::Tolerance;
use crate::voronoi::{segment_intervals, CellInterval, SensorSet};
use crate::GEOM_EPS;

/// Objective climbed by the engine.
#[derive(Clone, Copy)]
pub enum Model<'a> {
    Collapsed(&'a CollapsedNetwork),
    Full {
        density: &'a dyn Density,
        tol: Tolerance,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentParams {
    /// Longest trial step, in length units.
    pub delta_max: f64,
    pub max_backtracks: usize,
    /// Sufficient-increase factor; 0 accepts any non-decreasing step.
    pub armijo: f64,
    /// Global retries with halved steps when simultaneous moves lower `H`.
    pub max_retries: usize,
    /// Below this derivative magnitude a configuration counts as critical.
    pub stop_derivative: f64,
    pub history_tol: f64,
}

impl AscentParams {
    /// Defaults: a quarter of the collapse resolution in the plane, a tenth of
    /// the shortest segment on the network.
    pub fn for_mode(mode: Mode, network: &Network, r_collapse: f64) -> Self {
        let delta_max = match mode {
            Mode::PlaneCollapsed => 0.25 * r_collapse,
            _ => 0.1 * network.shortest_segment(),
        };
        AscentParams {
            delta_max,
            max_backtracks: 40,
            armijo: 0.5,
            max_retries: 20,
            stop_derivative: 1e-6,
            history_tol: 1e-9,
        }
    }
}

/// Result of one sensor's line search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchOutcome {
    /// Distance actually moved; 0 when every trial was rejected.
    pub step: f64,
    pub position: Point2,
    /// Change of `H` caused by this move alone.
    pub gain: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorStep {
    pub step: f64,
    pub derivative: f64,
    pub cell_before: f64,
    pub cell_after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub sensors: Vec<SensorStep>,
    pub h_before: f64,
    pub h_after: f64,
    pub max_derivative: f64,
    /// Times the whole iteration was repeated with halved steps.
    pub retries: usize,
}

impl StepReport {
    pub fn steps(&self) -> Vec<f64> {
        self.sensors.iter().map(|s| s.step).collect()
    }

    pub fn moved(&self) -> bool {
        self.sensors.iter().any(|s| s.step > 0.0)
    }
}

/// Allocation and per-cell values frozen at one configuration.
enum Snapshot {
    Collapsed {
        owner: Vec<usize>,
        best: Vec<f64>,
        /// Lexicographic runner-up, `usize::MAX` with a single sensor.
        runner: Vec<(usize, f64)>,
        cells: Vec<f64>,
        value: f64,
    },
    Full {
        intervals: Vec<Vec<CellInterval>>,
        contrib: Vec<Vec<f64>>,
        cells: Vec<f64>,
        value: f64,
    },
}

impl Snapshot {
    fn value(&self) -> f64 {
        match self {
            Snapshot::Collapsed { value, .. } | Snapshot::Full { value, .. } => *value,
        }
    }

    fn cells(&self) -> &[f64] {
        match self {
            Snapshot::Collapsed { cells, .. } | Snapshot::Full { cells, .. } => cells,
        }
    }
}

pub struct Ascent<'a> {
    network: &'a Network,
    model: Model<'a>,
    mode: Mode,
    base: PerformanceFunction,
    f: PerformanceFunction,
    params: AscentParams,
}

impl<'a> Ascent<'a> {
    pub fn new(
        network: &'a Network,
        model: Model<'a>,
        mode: Mode,
        f: PerformanceFunction,
        params: AscentParams,
    ) -> Result<Self> {
        match (mode, &model) {
            (Mode::NetworkFull, Model::Full { .. }) => {}
            (Mode::PlaneCollapsed | Mode::NetworkCollapsed, Model::Collapsed(_)) => {}
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "mode {mode:?} does not match the objective model"
                )))
            }
        }
        if !(params.delta_max > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "delta_max {} must be > 0",
                params.delta_max
            )));
        }
        Ok(Ascent {
            network,
            model,
            mode,
            f: f.clone(),
            base: f,
            params,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn params(&self) -> &AscentParams {
        &self.params
    }

    pub fn performance(&self) -> &PerformanceFunction {
        &self.f
    }

    /// Rescales the performance profile for annealing.
    pub fn set_radius(&mut self, radius: f64) {
        self.f = self.base.with_radius(radius);
    }

    /// Initial state; in network modes sensors within the snap limit are
    /// moved onto the network.
    pub fn state(&self, positions: Vec<Point2>, radius: f64) -> Result<DeploymentState> {
        let positions = if self.mode.on_network() {
            positions
                .into_iter()
                .enumerate()
                .map(|(i, q)| {
                    let host = self.network.project(q);
                    if host.distance > SNAP_LIMIT {
                        Err(Error::OffNetwork { sensor: i, distance: host.distance })
                    } else if host.distance > 0.0 {
                        Ok(host.point)
                    } else {
                        Ok(q)
                    }
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            positions
        };
        let sensors = SensorSet::new(positions)?;
        let h = self.objective(&sensors)?;
        Ok(DeploymentState {
            sensors,
            mode: self.mode,
            radius,
            iteration: 0,
            h_history: vec![h],
        })
    }

    pub fn objective(&self, p: &SensorSet) -> Result<f64> {
        Ok(self.snapshot(p)?.value())
    }

    pub fn cell_values(&self, p: &SensorSet) -> Result<Vec<f64>> {
        Ok(self.snapshot(p)?.cells().to_vec())
    }

    fn snapshot(&self, p: &SensorSet) -> Result<Snapshot> {
        let pos = p.positions();
        let m = pos.len();
        match self.model {
            Model::Collapsed(c) => {
                let nb = c.len();
                let mut owner = Vec::with_capacity(nb);
                let mut best = Vec::with_capacity(nb);
                let mut runner = Vec::with_capacity(nb);
                let mut cells = vec![0.0; m];
                let mut value = 0.0;
                for b in c.barycenters() {
                    let (mut o, mut d1) = (usize::MAX, f64::INFINITY);
                    let (mut r, mut d2) = (usize::MAX, f64::INFINITY);
                    for (i, x) in pos.iter().enumerate() {
                        let d = b.position.distance(*x);
                        if d < d1 {
                            (r, d2) = (o, d1);
                            (o, d1) = (i, d);
                        } else if d < d2 {
                            (r, d2) = (i, d);
                        }
                    }
                    let v = self.f.value(d1) * b.weight;
                    value += v;
                    cells[o] += v;
                    owner.push(o);
                    best.push(d1);
                    runner.push((r, d2));
                }
                Ok(Snapshot::Collapsed { owner, best, runner, cells, value })
            }
            Model::Full { density, tol } => {
                let n = self.network;
                let parts: Vec<(Vec<CellInterval>, Vec<f64>)> = (0..n.segment_count())
                    .into_par_iter()
                    .map(|k| {
                        let iv = segment_intervals(&n.segment(k), pos);
                        let c = segment_contributions(n, k, &self.f, density, pos, &iv, tol)?;
                        Ok((iv, c))
                    })
                    .collect::<Result<_>>()?;
                let mut cells = vec![0.0; m];
                let mut value = 0.0;
                for (iv, c) in &parts {
                    for (x, v) in iv.iter().zip(c) {
                        cells[x.owner] += v;
                        value += v;
                    }
                }
                let (intervals, contrib) = parts.into_iter().unzip();
                Ok(Snapshot::Full { intervals, contrib, cells, value })
            }
        }
    }

    /// Exact change of `H` when sensor `i` alone moves to `x`; `None` when
    /// the trial lands on a barycenter.
    fn gain(&self, snap: &Snapshot, pos: &[Point2], i: usize, x: Point2) -> Result<Option<f64>> {
        match (snap, &self.model) {
            (Snapshot::Collapsed { owner, best, runner, .. }, Model::Collapsed(c)) => {
                let mut delta = 0.0;
                for (b, bary) in c.barycenters().iter().enumerate() {
                    let dn = bary.position.distance(x);
                    if dn <= GEOM_EPS {
                        return Ok(None);
                    }
                    let o = owner[b];
                    let new_d = if o == i {
                        let (j, d2) = runner[b];
                        if j == usize::MAX || dn < d2 || (dn == d2 && i < j) {
                            dn
                        } else {
                            d2
                        }
                    } else if dn < best[b] || (dn == best[b] && i < o) {
                        dn
                    } else {
                        continue;
                    };
                    delta += (self.f.value(new_d) - self.f.value(best[b])) * bary.weight;
                }
                Ok(Some(delta))
            }
            (Snapshot::Full { intervals, contrib, .. }, Model::Full { density, tol }) => {
                let n = self.network;
                let mut moved = pos.to_vec();
                moved[i] = x;
                let mut delta = 0.0;
                for k in 0..n.segment_count() {
                    let iv = segment_intervals(&n.segment(k), &moved);
                    let touched = |ivs: &[CellInterval]| ivs.iter().any(|c| c.owner == i);
                    if !touched(&intervals[k]) && !touched(&iv) {
                        continue;
                    }
                    let fresh = segment_contributions(n, k, &self.f, *density, &moved, &iv, *tol)?;
                    delta += fresh.iter().sum::<f64>() - contrib[k].iter().sum::<f64>();
                }
                Ok(Some(delta))
            }
            _ => unreachable!("snapshot built from the same model"),
        }
    }

    /// Derivative of every sensor: planar, or restricted to the network.
    pub fn derivatives(&self, p: &SensorSet) -> Result<Vec<SensorDerivative>> {
        let g = match self.model {
            Model::Collapsed(c) => grad_collapsed_lex(c, &self.f, p)?,
            Model::Full { density, tol } => grad_full(self.network, &self.f, density, p, tol)?,
        };
        if !self.mode.on_network() {
            return Ok(g.into_iter().map(SensorDerivative::Planar).collect());
        }
        g.into_iter()
            .enumerate()
            .map(|(h, g)| constrain_to_network(self.network, h, p.positions()[h], g))
            .collect()
    }

    /// Backtracking search for sensor `i` along `derivative`, others fixed.
    pub fn line_search(
        &self,
        state: &DeploymentState,
        i: usize,
        derivative: &SensorDerivative,
        delta_max: f64,
    ) -> Result<LineSearchOutcome> {
        let snap = self.snapshot(&state.sensors)?;
        self.search(&snap, state.sensors.positions(), i, derivative, delta_max)
    }

    fn search(
        &self,
        snap: &Snapshot,
        pos: &[Point2],
        i: usize,
        derivative: &SensorDerivative,
        delta_max: f64,
    ) -> Result<LineSearchOutcome> {
        let start = pos[i];
        let stay = LineSearchOutcome { step: 0.0, position: start, gain: 0.0 };
        let rate = derivative.magnitude();
        if rate == 0.0 {
            return Ok(stay);
        }
        let trial: Box<dyn Fn(f64) -> Point2> = match *derivative {
            SensorDerivative::Planar(g) => {
                let u = g * (1.0 / rate);
                Box::new(move |delta| start + u * delta)
            }
            SensorDerivative::OnEdge { segment: Some(k), direction, value, .. } => {
                let s = self.network.segment(k);
                let t0 = s.project_param(start);
                let sign = direction.dot(s.direction()).signum() * value.signum();
                let len = s.length();
                // Clamped at the segment ends, which are exactly its vertices.
                Box::new(move |delta| s.at((t0 + sign * delta / len).clamp(0.0, 1.0)))
            }
            SensorDerivative::OnEdge { segment: None, .. } => return Ok(stay),
        };
        let mut delta = delta_max;
        for _ in 0..=self.params.max_backtracks {
            let x = trial(delta);
            let moved = x.distance(start);
            if moved == 0.0 {
                return Ok(stay);
            }
            let clash = pos
                .iter()
                .enumerate()
                .any(|(j, q)| j != i && q.distance(x) <= GEOM_EPS);
            if !clash {
                if let Some(gain) = self.gain(snap, pos, i, x)? {
                    if gain > 0.0 && gain >= self.params.armijo * rate * moved - 1e-12 {
                        return Ok(LineSearchOutcome { step: moved, position: x, gain });
                    }
                }
            }
            delta *= 0.5;
        }
        Ok(stay)
    }

    /// One synchronous iteration: all sensors search against the same
    /// snapshot and move together.
    pub fn iterate(&self, state: &mut DeploymentState) -> Result<StepReport> {
        let p = state.sensors.clone();
        let snap = self.snapshot(&p)?;
        let h_before = snap.value();
        let derivs = self.derivatives(&p)?;
        let mags: Vec<f64> = derivs.iter().map(SensorDerivative::magnitude).collect();
        let max_derivative = mags.iter().copied().fold(0.0, f64::max);
        let report = |steps: &[f64], after: &[f64], h_after: f64, retries: usize| StepReport {
            sensors: (0..p.len())
                .map(|i| SensorStep {
                    step: steps[i],
                    derivative: mags[i],
                    cell_before: snap.cells()[i],
                    cell_after: after[i],
                })
                .collect(),
            h_before,
            h_after,
            max_derivative,
            retries,
        };
        if max_derivative < self.params.stop_derivative {
            state.iteration += 1;
            state.h_history.push(h_before);
            return Ok(report(&vec![0.0; p.len()], snap.cells(), h_before, 0));
        }
        let mut delta_max = self.params.delta_max;
        for retry in 0..=self.params.max_retries {
            let outcomes: Vec<LineSearchOutcome> = (0..p.len())
                .into_par_iter()
                .map(|i| self.search(&snap, p.positions(), i, &derivs[i], delta_max))
                .collect::<Result<_>>()?;
            let next: Vec<Point2> = outcomes.iter().map(|o| o.position).collect();
            if !too_close(&next) {
                if let Ok(set) = SensorSet::new(next) {
                    let fresh = self.snapshot(&set)?;
                    if fresh.value() >= h_before - self.params.history_tol {
                        let steps: Vec<f64> = outcomes.iter().map(|o| o.step).collect();
                        let r = report(&steps, fresh.cells(), fresh.value(), retry);
                        state.sensors = set;
                        state.iteration += 1;
                        state.h_history.push(fresh.value());
                        return Ok(r);
                    }
                }
            }
            delta_max *= 0.5;
        }
        Err(Error::Degenerate(format!(
            "iteration {} could not find non-decreasing simultaneous moves",
            state.iteration
        )))
    }

    /// Iterates until the derivative vanishes, no sensor moves, or `max_iterations`.
    pub fn run(&self, state: &mut DeploymentState, max_iterations: usize) -> Result<Vec<StepReport>> {
        let mut reports = Vec::new();
        for _ in 0..max_iterations {
            let r = self.iterate(state)?;
            let done = r.max_derivative < self.params.stop_derivative || !r.moved();
            reports.push(r);
            if done {
                break;
            }
        }
        Ok(reports)
    }
}

fn too_close(pos: &[Point2]) -> bool {
    (0..pos.len()).any(|i| (i + 1..pos.len()).any(|j| pos[i].distance(pos[j]) <= GEOM_EPS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{h_collapsed, h_full, UniformDensity};

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn line(len: f64) -> Network {
        Network::new(vec![p(0.0, 0.0), p(len, 0.0)], vec![[0, 1]]).unwrap()
    }

    fn params(delta_max: f64) -> AscentParams {
        AscentParams {
            delta_max,
            ..AscentParams::for_mode(Mode::PlaneCollapsed, &line(1.0), 1.0)
        }
    }

    #[test]
    fn single_sensor_moves_toward_its_barycenter() {
        let n = line(1.0);
        let c = CollapsedNetwork::from_points(&[(p(3.0, 0.0), 1.0)]);
        let f = PerformanceFunction::tanh(4.0).unwrap();
        let eng = Ascent::new(&n, Model::Collapsed(&c), Mode::PlaneCollapsed, f, params(0.1)).unwrap();
        let state = eng.state(vec![p(0.0, 0.0)], 4.0).unwrap();
        let d = eng.derivatives(&state.sensors).unwrap()[0];
        let out = eng.line_search(&state, 0, &d, 0.1).unwrap();
        assert_eq!(out.step, 0.1);
        assert!(out.gain > 0.0);
        assert_eq!(out.position, p(0.1, 0.0));
    }

    #[test]
    fn overshoot_is_halved() {
        let n = line(1.0);
        let c = CollapsedNetwork::from_points(&[(p(1.0, 0.0), 1.0), (p(1.0, 0.5), 1.0)]);
        let f = PerformanceFunction::tanh(1.0).unwrap();
        let eng = Ascent::new(&n, Model::Collapsed(&c), Mode::PlaneCollapsed, f.clone(), params(50.0)).unwrap();
        let state = eng.state(vec![p(0.0, 0.0)], 1.0).unwrap();
        let d = eng.derivatives(&state.sensors).unwrap()[0];
        let out = eng.line_search(&state, 0, &d, 50.0).unwrap();
        assert!(out.step > 0.0 && out.step < 50.0);
        let after = h_collapsed(&c, &f, &SensorSet::new(vec![out.position]).unwrap());
        assert!(after >= state.h_history[0]);
        assert!((after - state.h_history[0] - out.gain).abs() < 1e-12);
    }

    #[test]
    fn zero_direction_stays() {
        let n = line(2.0);
        let c = CollapsedNetwork::from_points(&[(p(0.0, 0.0), 1.0), (p(2.0, 0.0), 1.0)]);
        let f = PerformanceFunction::tanh(1.0).unwrap();
        let eng = Ascent::new(&n, Model::Collapsed(&c), Mode::PlaneCollapsed, f, params(0.1)).unwrap();
        let mut state = eng.state(vec![p(1.0, 0.0)], 1.0).unwrap();
        let r = eng.iterate(&mut state).unwrap();
        assert!(!r.moved());
        assert_eq!(state.h_history, vec![r.h_before, r.h_before]);
        assert_eq!(state.sensors.positions(), &[p(1.0, 0.0)]);
    }

    #[test]
    fn network_motion_clamps_at_vertex() {
        let n = line(1.0);
        let c = CollapsedNetwork::from_points(&[(p(5.0, 0.0), 1.0)]);
        let f = PerformanceFunction::tanh(10.0).unwrap();
        let prm = AscentParams { delta_max: 0.5, ..AscentParams::for_mode(Mode::NetworkCollapsed, &n, 0.3) };
        let eng = Ascent::new(&n, Model::Collapsed(&c), Mode::NetworkCollapsed, f, prm).unwrap();
        let mut state = eng.state(vec![p(0.8, 0.0)], 10.0).unwrap();
        eng.iterate(&mut state).unwrap();
        assert_eq!(state.sensors.positions()[0], p(1.0, 0.0));
        let r = eng.iterate(&mut state).unwrap();
        assert!(!r.moved());
    }

    #[test]
    fn off_network_start_rejected_and_near_points_snapped() {
        let n = line(1.0);
        let c = CollapsedNetwork::from_points(&[(p(0.5, 0.0), 1.0)]);
        let f = PerformanceFunction::tanh(1.0).unwrap();
        let prm = AscentParams::for_mode(Mode::NetworkCollapsed, &n, 0.3);
        let eng = Ascent::new(&n, Model::Collapsed(&c), Mode::NetworkCollapsed, f, prm).unwrap();
        assert!(matches!(eng.state(vec![p(0.2, 0.1)], 1.0), Err(Error::OffNetwork { .. })));
        let s = eng.state(vec![p(0.2, 5e-7)], 1.0).unwrap();
        assert_eq!(s.sensors.positions()[0], p(0.2, 0.0));
    }

    #[test]
    fn full_mode_snapshot_matches_h_full() {
        let n = Network::new(
            vec![p(0.0, 0.0), p(2.0, 0.0), p(2.0, 1.5), p(0.0, 1.0)],
            vec![[0, 1], [1, 2], [2, 3], [3, 0]],
        )
        .unwrap();
        let f = PerformanceFunction::tanh(1.5).unwrap();
        let d = UniformDensity(2.0);
        let tol = Tolerance::uniform(1e-10);
        let prm = AscentParams::for_mode(Mode::NetworkFull, &n, 0.3);
        let eng = Ascent::new(&n, Model::Full { density: &d, tol }, Mode::NetworkFull, f.clone(), prm).unwrap();
        let state = eng.state(vec![p(0.5, 0.0), p(2.0, 1.0), p(0.0, 0.4)], 1.5).unwrap();
        let h = h_full(&n, &f, &d, &state.sensors, tol).unwrap();
        assert!((state.h_history[0] - h).abs() < 1e-12 * h);
        // The local gain agrees with a fresh evaluation.
        let snap = eng.snapshot(&state.sensors).unwrap();
        let x = p(0.9, 0.0);
        let g = eng.gain(&snap, state.sensors.positions(), 0, x).unwrap().unwrap();
        let moved = state.sensors.moved(0, x).unwrap();
        let h2 = h_full(&n, &f, &d, &moved, tol).unwrap();
        assert!((h2 - h - g).abs() < 1e-12 * h);
    }

    #[test]
    fn mode_model_mismatch_rejected() {
        let n = line(1.0);
        let d = UniformDensity(1.0);
        let f = PerformanceFunction::tanh(1.0).unwrap();
        let prm = params(0.1);
        let full = Model::Full { density: &d, tol: Tolerance::default() };
        assert!(Ascent::new(&n, full, Mode::PlaneCollapsed, f, prm).is_err());
    }
}
