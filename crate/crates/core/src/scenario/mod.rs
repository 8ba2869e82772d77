//! Scenario files, the benchmark generator, traces and SVG output.

mod benchmark;
mod svg;
mod trace;

pub use benchmark::{benchmark_scenario, generate_benchmark, grid_network};
pub use svg::{emit_svg, render_svg, SvgOptions};
pub use trace::{read_trace, trace_to_string, write_trace};

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Network, NetworkData};
use crate::objective::{DensityField, PerformanceFunction, PerformanceSpec};
use crate::optimizer::PipelineConfig;

/// Network given inline or as a path relative to the scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NetworkSource {
    File { file: PathBuf },
    Inline(NetworkData),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    pub svg: bool,
    pub contours: bool,
    pub cells: bool,
}

fn default_density() -> DensityField {
    DensityField::case_study()
}

fn default_performance() -> PerformanceSpec {
    PerformanceSpec::Tanh { radius: 1.0 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub network: NetworkSource,
    #[serde(default = "default_density")]
    pub density: DensityField,
    #[serde(default = "default_performance")]
    pub performance: PerformanceSpec,
    #[serde(default)]
    pub pipeline: PipelineConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// A validated scenario with its network resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub network: Network,
    pub density: DensityField,
    pub performance: PerformanceFunction,
}

impl ScenarioConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario config is always serialisable")
    }

    pub fn from_json(text: &str, origin: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            path: origin.into(),
            message: e.to_string(),
        })
    }

    /// Checks every field and resolves the network; `base` anchors relative network paths.
    pub fn resolve(self, base: &Path) -> Result<Scenario> {
        self.density.validate()?;
        let performance = PerformanceFunction::from_spec(&self.performance)?;
        self.pipeline.validate()?;
        let network = match &self.network {
            NetworkSource::Inline(data) => Network::new(data.vertices.clone(), data.segments.clone())?,
            NetworkSource::File { file } => Network::load(base.join(file))?,
        };
        Ok(Scenario {
            density: self.density.clone(),
            config: self,
            network,
            performance,
        })
    }
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new("."));
    ScenarioConfig::from_json(&text, path)?.resolve(base)
}

pub fn save_scenario(config: &ScenarioConfig, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, config.to_json() + "\n").map_err(|e| Error::io(path, e))
}
