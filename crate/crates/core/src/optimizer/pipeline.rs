//! The two-step deployment: clustered ascent in the plane, then on the network.

use std::time::{Duration, Instant};

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{cluster_sensors, spread_and_project, Ascent, AscentParams, Clustering, Mode, Model, RunTrace, TraceRow};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::network::{CollapsedNetwork, Network};
use crate::objective::{Density, PerformanceFunction};
use crate::quadrature::Tolerance;
use crate::voronoi::SensorSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step2Model {
    Collapsed,
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub cluster_count: usize,
    pub sensors_per_cluster: usize,
    pub r_collapse: f64,
    #[serde(rename = "R_initial")]
    pub r_initial: f64,
    #[serde(rename = "R_final")]
    pub r_final: f64,
    pub step1_iterations: usize,
    pub step2_iterations: usize,
    pub spread_radius: f64,
    pub rng_seed: u64,
    pub step2_model: Step2Model,
    pub max_backtracks: usize,
    pub armijo: f64,
    pub max_retries: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_max_step1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_max_step2: Option<f64>,
    pub quadrature_tol: f64,
    /// Starting sensors; drawn along the network when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_sensors: Option<Vec<Point2>>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            cluster_count: 10,
            sensors_per_cluster: 5,
            r_collapse: 0.3,
            r_initial: 10.0,
            r_final: 1.0,
            step1_iterations: 200,
            step2_iterations: 200,
            spread_radius: 0.5,
            rng_seed: 0,
            step2_model: Step2Model::Collapsed,
            max_backtracks: 40,
            armijo: 0.5,
            max_retries: 20,
            delta_max_step1: None,
            delta_max_step2: None,
            quadrature_tol: 1e-9,
            initial_sensors: None,
        }
    }
}

impl PipelineConfig {
    pub fn sensor_count(&self) -> usize {
        self.cluster_count * self.sensors_per_cluster
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        let bad = |field: &str, reason: &str| Err(Error::config(format!("pipeline.{field}"), reason));
        if self.cluster_count == 0 {
            return bad("cluster_count", "must be >= 1");
        }
        if self.sensors_per_cluster == 0 {
            return bad("sensors_per_cluster", "must be >= 1");
        }
        if !positive(self.r_collapse) {
            return bad("r_collapse", "must be > 0");
        }
        if !positive(self.r_initial) {
            return bad("R_initial", "must be > 0");
        }
        if !positive(self.r_final) {
            return bad("R_final", "must be > 0");
        }
        if self.r_final > self.r_initial {
            return bad("R_final", "must not exceed R_initial");
        }
        if self.step1_iterations == 0 {
            return bad("step1_iterations", "must be >= 1");
        }
        if self.step2_iterations == 0 {
            return bad("step2_iterations", "must be >= 1");
        }
        if !positive(self.spread_radius) {
            return bad("spread_radius", "must be > 0");
        }
        if !(self.armijo >= 0.0 && self.armijo < 1.0) {
            return bad("armijo", "must lie in [0, 1)");
        }
        for (field, v) in [("delta_max_step1", self.delta_max_step1), ("delta_max_step2", self.delta_max_step2)] {
            if v.is_some_and(|v| !positive(v)) {
                return bad(field, "must be > 0");
            }
        }
        if !positive(self.quadrature_tol) {
            return bad("quadrature_tol", "must be > 0");
        }
        if let Some(s) = &self.initial_sensors {
            if s.len() != self.sensor_count() {
                return bad(
                    "initial_sensors",
                    &format!("expected cluster_count * sensors_per_cluster = {} positions", self.sensor_count()),
                );
            }
        }
        Ok(())
    }

    fn params(&self, mode: Mode, network: &Network, delta_max: Option<f64>) -> AscentParams {
        let mut p = AscentParams::for_mode(mode, network, self.r_collapse);
        if let Some(d) = delta_max {
            p.delta_max = d;
        }
        p.max_backtracks = self.max_backtracks;
        p.armijo = self.armijo;
        p.max_retries = self.max_retries;
        p
    }
}

/// `R_j = R_i + (R_f - R_i) j / (n - 1)`, `j = 0..n`.
pub fn anneal_schedule(r_initial: f64, r_final: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![r_initial];
    }
    (0..n)
        .map(|j| r_initial + (r_final - r_initial) * j as f64 / (n - 1) as f64)
        .collect()
}

/// Configured starting sensors, or length-weighted uniform draws on the network.
pub fn initial_sensors(config: &PipelineConfig, network: &Network) -> Result<Vec<Point2>> {
    if let Some(s) = &config.initial_sensors {
        return Ok(s.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let lengths: Vec<f64> = network.segments().iter().map(|s| s.length()).collect();
    let pick = WeightedIndex::new(&lengths).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok((0..config.sensor_count())
        .map(|_| network.segment(pick.sample(&mut rng)).at(rng.gen::<f64>()))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub positions: Vec<Point2>,
    pub trace: RunTrace,
}

fn row(iteration: usize, radius: f64, h: f64, sensors: &SensorSet, steps: Vec<f64>) -> TraceRow {
    TraceRow {
        iteration,
        radius,
        h,
        positions: sensors.positions().to_vec(),
        steps,
    }
}

/// Cluster centers climb the collapsed objective in the plane while `R` is annealed.
pub fn run_step1(
    config: &PipelineConfig,
    network: &Network,
    density: &dyn Density,
    f: &PerformanceFunction,
    centers: &[Point2],
) -> Result<StepResult> {
    config.validate()?;
    let collapsed = CollapsedNetwork::build(network, config.r_collapse, density)?;
    let params = config.params(Mode::PlaneCollapsed, network, config.delta_max_step1);
    let mut eng = Ascent::new(network, Model::Collapsed(&collapsed), Mode::PlaneCollapsed, f.clone(), params)?;
    let schedule = anneal_schedule(config.r_initial, config.r_final, config.step1_iterations);
    eng.set_radius(schedule[0]);
    let mut state = eng.state(centers.to_vec(), schedule[0])?;
    let mut trace = RunTrace::default();
    trace.rows.push(row(0, schedule[0], state.h_history[0], &state.sensors, vec![0.0; centers.len()]));
    for (j, &r) in schedule.iter().enumerate() {
        eng.set_radius(r);
        state.radius = r;
        let rep = eng.iterate(&mut state)?;
        trace.rows.push(row(j + 1, r, rep.h_after, &state.sensors, rep.steps()));
    }
    Ok(StepResult {
        positions: state.sensors.into_positions(),
        trace,
    })
}

/// Sensors climb along the network at the final radius.
pub fn run_step2(
    config: &PipelineConfig,
    network: &Network,
    density: &dyn Density,
    f: &PerformanceFunction,
    initial: &[Point2],
) -> Result<StepResult> {
    config.validate()?;
    let r = config.r_final;
    let f = f.with_radius(r);
    let collapsed;
    let (mode, model) = match config.step2_model {
        Step2Model::Collapsed => {
            collapsed = CollapsedNetwork::build(network, config.r_collapse, density)?;
            (Mode::NetworkCollapsed, Model::Collapsed(&collapsed))
        }
        Step2Model::Full => (
            Mode::NetworkFull,
            Model::Full {
                density,
                tol: Tolerance::uniform(config.quadrature_tol),
            },
        ),
    };
    let params = config.params(mode, network, config.delta_max_step2);
    let eng = Ascent::new(network, model, mode, f, params)?;
    let mut state = eng.state(initial.to_vec(), r)?;
    let mut trace = RunTrace::default();
    trace.rows.push(row(0, r, state.h_history[0], &state.sensors, vec![0.0; initial.len()]));
    for j in 0..config.step2_iterations {
        let rep = eng.iterate(&mut state)?;
        trace.rows.push(row(j + 1, r, rep.h_after, &state.sensors, rep.steps()));
        if rep.max_derivative < params.stop_derivative || !rep.moved() {
            break;
        }
    }
    Ok(StepResult {
        positions: state.sensors.into_positions(),
        trace,
    })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Timing {
    pub step1: Duration,
    pub step2: Duration,
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub initial_sensors: Vec<Point2>,
    pub clustering: Clustering,
    pub step1: StepResult,
    pub spread: Vec<Point2>,
    pub step2: StepResult,
    pub timing: Timing,
}

impl PipelineResult {
    pub fn final_sensors(&self) -> &[Point2] {
        &self.step2.positions
    }
}

/// Equality of everything computed; wall-clock timing is ignored.
impl PartialEq for PipelineResult {
    fn eq(&self, o: &Self) -> bool {
        self.initial_sensors == o.initial_sensors
            && self.clustering == o.clustering
            && self.step1 == o.step1
            && self.spread == o.spread
            && self.step2 == o.step2
    }
}

/// Step 1, one spread-and-project round, then step 2; every random draw comes from `rng_seed`.
pub fn run_pipeline(
    config: &PipelineConfig,
    network: &Network,
    density: &dyn Density,
    f: &PerformanceFunction,
) -> Result<PipelineResult> {
    config.validate()?;
    let seed = config.rng_seed;
    let initial = initial_sensors(config, network)?;
    let clustering = cluster_sensors(&initial, config.cluster_count, seed.wrapping_add(1))?;
    let t0 = Instant::now();
    let step1 = run_step1(config, network, density, f, &clustering.centers)?;
    let t1 = Instant::now();
    let spread = spread_and_project(
        network,
        &step1.positions,
        config.sensors_per_cluster,
        config.spread_radius,
        seed.wrapping_add(2),
    )?
    .into_positions();
    let step2 = run_step2(config, network, density, f, &spread)?;
    let t2 = Instant::now();
    Ok(PipelineResult {
        initial_sensors: initial,
        clustering,
        step1,
        spread,
        step2,
        timing: Timing {
            step1: t1 - t0,
            step2: t2 - t1,
        },
    })
}
