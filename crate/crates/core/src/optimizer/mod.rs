//! Discrete-time gradient ascent and the two-step deployment pipeline.

mod ascent;
mod cluster;
mod pipeline;
mod spread;

pub use ascent::{Ascent, AscentParams, LineSearchOutcome, Model, SensorStep, StepReport};
pub use cluster::{cluster_sensors, Clustering};
pub use pipeline::{
    anneal_schedule, initial_sensors, run_pipeline, run_step1, run_step2, PipelineConfig,
    PipelineResult, Step2Model, StepResult, Timing,
};
pub use spread::spread_and_project;

use crate::geometry::Point2;
use crate::voronoi::SensorSet;

/// Where sensors may move and which objective they climb.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Free motion in the plane over the collapsed network.
    PlaneCollapsed,
    /// Motion along network edges over the collapsed network.
    NetworkCollapsed,
    /// Motion along network edges over the full network.
    NetworkFull,
}

impl Mode {
    pub fn on_network(self) -> bool {
        !matches!(self, Mode::PlaneCollapsed)
    }
}

/// Sensor positions plus the objective history of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct DeploymentState {
    pub sensors: SensorSet,
    pub mode: Mode,
    pub radius: f64,
    pub iteration: usize,
    pub h_history: Vec<f64>,
}

/// One row per recorded state: the initial one, then one per iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub radius: f64,
    pub h: f64,
    pub positions: Vec<Point2>,
    pub steps: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunTrace {
    pub rows: Vec<TraceRow>,
}

impl RunTrace {
    pub fn h_values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.h).collect()
    }

    pub fn sensor_count(&self) -> usize {
        self.rows.first().map_or(0, |r| r.positions.len())
    }
}
