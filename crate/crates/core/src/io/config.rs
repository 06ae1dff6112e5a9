use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::io::IoError;
use crate::model::ModelParams;
use crate::scheme::{InitialProfile, Mesh, SchemeOptions, DEFAULT_CFL, METRIC_SUBSTEPS};
use crate::state::MetricState;
use crate::verify::{SupportBox, StudySetup, FIT_LEVELS};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "LIGODUNOV_OUT_DIR";
pub const DEFAULT_THRESHOLD: f64 = 0.8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(default)]
    pub t_start: f64,
    pub t_end: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricConfig {
    /// `A(r_min)`.
    pub boundary: MetricState,
    #[serde(default = "default_substeps")]
    pub substeps: usize,
    /// Include `-A'·∇_A f` in the ODE step.
    #[serde(default = "default_true")]
    pub correction: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Falls back to `$LIGODUNOV_OUT_DIR`, then `out`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<PathBuf>,
    /// Keep every `cadence`-th time level.
    #[serde(default = "default_cadence")]
    pub cadence: usize,
    #[serde(default = "default_true")]
    pub csv: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub levels: Vec<usize>,
    pub boxes: Vec<SupportBox>,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

/// A complete run description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelParams,
    pub mesh: Mesh,
    pub time: TimeConfig,
    pub initial: InitialProfile,
    pub metric: MetricConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub study: Option<StudyConfig>,
}

fn default_cfl() -> f64 {
    DEFAULT_CFL
}
fn default_substeps() -> usize {
    METRIC_SUBSTEPS
}
fn default_true() -> bool {
    true
}
fn default_cadence() -> usize {
    1
}
fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { directory: None, cadence: default_cadence(), csv: true }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str, origin: &Path) -> Result<Self, IoError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
            IoError::Parse { path: origin.to_path_buf(), line, column, message: e.message().to_string() }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configurations always serialize")
    }

    pub fn validate(&self) -> Result<(), IoError> {
        let invalid = |field: &str, message: String| Err(IoError::Invalid { field: field.to_string(), message });
        if let Err((field, message)) = self.model.validate() {
            return invalid(&format!("model.{field}"), message);
        }
        if let Err(e) = self.mesh.validate() {
            return invalid("mesh", e.to_string());
        }
        let t = &self.time;
        if !(t.t_start.is_finite() && t.t_end.is_finite()) {
            return invalid("time", "times must be finite".into());
        }
        if t.t_end < t.t_start {
            return invalid("time.t_end", format!("must not precede t_start = {}, got {}", t.t_start, t.t_end));
        }
        if !(t.cfl > 0.0 && t.cfl <= 0.5) {
            return invalid("time.cfl", format!("cfl must lie in (0, 0.5] to keep fans inside half cells, got {}", t.cfl));
        }
        let model = self.model.build();
        if let Err(e) = self.initial.validate() {
            return invalid("initial", e);
        }
        if self.initial.dim() != model.state_dim() {
            return invalid(
                "initial",
                format!("model {} has {} components, profile has {}", model.id(), model.state_dim(), self.initial.dim()),
            );
        }
        if self.metric.boundary.len() != model.metric_dim() {
            return invalid("metric.boundary", format!("expected {} components", model.metric_dim()));
        }
        if let Err(e) = model.check_metric(&self.metric.boundary) {
            return invalid("metric.boundary", e.to_string());
        }
        if self.metric.substeps == 0 {
            return invalid("metric.substeps", "must be at least 1".into());
        }
        if self.output.cadence == 0 {
            return invalid("output.cadence", "must be at least 1".into());
        }
        if let Some(study) = &self.study {
            if study.levels.len() < FIT_LEVELS {
                return invalid("study.levels", format!("need at least {FIT_LEVELS} mesh levels, got {}", study.levels.len()));
            }
            if study.levels.iter().any(|&n| n < 2) {
                return invalid("study.levels", "every level needs n >= 2".into());
            }
            if study.boxes.is_empty() {
                return invalid("study.boxes", "need at least one test-function box".into());
            }
            for b in &study.boxes {
                if let Err(e) = b.validate(&self.mesh, t.t_start, t.t_end) {
                    return invalid("study.boxes", e.to_string());
                }
            }
            if !study.threshold.is_finite() {
                return invalid("study.threshold", "must be finite".into());
            }
        }
        Ok(())
    }

    pub fn options(&self) -> SchemeOptions {
        SchemeOptions {
            t_start: self.time.t_start,
            t_end: self.time.t_end,
            cfl: self.time.cfl,
            correction: self.metric.correction,
            metric_substeps: self.metric.substeps,
        }
    }

    /// Hash of the sections that determine the computed numbers.
    pub fn hash(&self) -> u64 {
        #[derive(Serialize)]
        struct Physics<'a> {
            model: &'a ModelParams,
            mesh: &'a Mesh,
            time: &'a TimeConfig,
            initial: &'a InitialProfile,
            metric: &'a MetricConfig,
        }
        let text = toml::to_string(&Physics {
            model: &self.model,
            mesh: &self.mesh,
            time: &self.time,
            initial: &self.initial,
            metric: &self.metric,
        })
        .expect("physics sections serialize");
        let digest = Sha256::digest(text.as_bytes());
        u64::from_be_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
    }

    /// Output directory from the config, the environment, or `out`.
    pub fn output_dir(&self) -> PathBuf {
        self.output
            .directory
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn study_setup(&self) -> Option<StudySetup> {
        let study = self.study.as_ref()?;
        Some(StudySetup {
            model: self.model.build(),
            r_min: self.mesh.r_min,
            r_max: self.mesh.r_max,
            initial: self.initial.clone(),
            metric_boundary: self.metric.boundary,
            options: self.options(),
            levels: study.levels.clone(),
            boxes: study.boxes.clone(),
        })
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => IoError::NotFound(path.to_path_buf()),
        _ => IoError::Io(e),
    })?;
    RunConfig::from_toml(&text, path)
}

pub fn write_config(path: &Path, config: &RunConfig) -> Result<(), IoError> {
    std::fs::write(path, config.to_toml())?;
    Ok(())
}

/// One-based line and column of a byte offset.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}
