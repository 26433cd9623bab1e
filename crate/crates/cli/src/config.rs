//! Experiment configuration: TOML file ingestion, CLI overrides, and
//! schema validation with unknown keys rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;
use crate::registry::{registry, ExperimentSpec, ParamKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        match text {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(CliError::Config(format!(
                "format: expected \"csv\" or \"json\", got \"{other}\""
            ))),
        }
    }
}

/// Typed parameter value.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ParamValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    FloatList(Vec<f64>),
}

impl ParamValue {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ParamValue::Bool(_) => "bool",
            ParamValue::Int(_) => "int",
            ParamValue::Float(_) => "float",
            ParamValue::Str(_) => "string",
            ParamValue::FloatList(_) => "float list",
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            ParamValue::Float(x) => Some(*x),
            ParamValue::Int(x) => Some(*x as f64),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            ParamValue::Int(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            ParamValue::Bool(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            ParamValue::Str(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_float_list(&self) -> Option<Vec<f64>> {
        match self {
            ParamValue::FloatList(xs) => Some(xs.clone()),
            _ => None,
        }
    }
}

/// Fully validated experiment invocation.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub trials: u64,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub format: ReportFormat,
    pub params: BTreeMap<String, ParamValue>,
}

impl ExperimentConfig {
    pub fn param_f64(&self, key: &str) -> f64 {
        self.params[key].as_f64().expect("validated float")
    }

    pub fn param_i64(&self, key: &str) -> i64 {
        self.params[key].as_i64().expect("validated int")
    }

    pub fn param_bool(&self, key: &str) -> bool {
        self.params[key].as_bool().expect("validated bool")
    }

    pub fn param_str(&self, key: &str) -> &str {
        self.params[key].as_str().expect("validated string")
    }

    pub fn param_float_list(&self, key: &str) -> Vec<f64> {
        self.params[key].as_float_list().expect("validated list")
    }
}

/// Unvalidated option set collected from the CLI and the config file;
/// CLI values take precedence.
#[derive(Debug, Default, Clone)]
pub struct ConfigDraft {
    pub experiment: Option<String>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub format: Option<ReportFormat>,
    pub params: BTreeMap<String, ParamValue>,
}

const TOP_LEVEL_KEYS: [&str; 6] = ["experiment", "seed", "trials", "out", "format", "params"];

fn convert_value(key: &str, value: &toml::Value) -> Result<ParamValue, CliError> {
    match value {
        toml::Value::Boolean(b) => Ok(ParamValue::Bool(*b)),
        toml::Value::Integer(i) => Ok(ParamValue::Int(*i)),
        toml::Value::Float(x) => Ok(ParamValue::Float(*x)),
        toml::Value::String(s) => Ok(ParamValue::Str(s.clone())),
        toml::Value::Array(items) => {
            let mut list = Vec::with_capacity(items.len());
            for item in items {
                match item {
                    toml::Value::Float(x) => list.push(*x),
                    toml::Value::Integer(i) => list.push(*i as f64),
                    other => {
                        return Err(CliError::Config(format!(
                            "{key}: array entries must be numbers, got {other}"
                        )))
                    }
                }
            }
            Ok(ParamValue::FloatList(list))
        }
        other => Err(CliError::Config(format!(
            "{key}: unsupported value {other}"
        ))),
    }
}

/// Parse a TOML config file into a draft.
pub fn load_config_file(path: &Path) -> Result<ConfigDraft, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;

    for key in table.keys() {
        if !TOP_LEVEL_KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!(
                "{}: unknown key \"{key}\"",
                path.display()
            )));
        }
    }

    let mut draft = ConfigDraft::default();
    if let Some(v) = table.get("experiment") {
        let name = v.as_str().ok_or_else(|| {
            CliError::Config("experiment: expected a string".to_string())
        })?;
        draft.experiment = Some(name.to_string());
    }
    if let Some(v) = table.get("seed") {
        let seed = v
            .as_integer()
            .ok_or_else(|| CliError::Config("seed: expected an integer".to_string()))?;
        draft.seed = Some(seed as u64);
    }
    if let Some(v) = table.get("trials") {
        let trials = v
            .as_integer()
            .filter(|t| *t >= 0)
            .ok_or_else(|| CliError::Config("trials: expected a non-negative integer".to_string()))?;
        draft.trials = Some(trials as u64);
    }
    if let Some(v) = table.get("out") {
        let out = v
            .as_str()
            .ok_or_else(|| CliError::Config("out: expected a string".to_string()))?;
        draft.out_dir = Some(PathBuf::from(out));
    }
    if let Some(v) = table.get("format") {
        let fmt = v
            .as_str()
            .ok_or_else(|| CliError::Config("format: expected a string".to_string()))?;
        draft.format = Some(ReportFormat::parse(fmt)?);
    }
    if let Some(v) = table.get("params") {
        let params = v
            .as_table()
            .ok_or_else(|| CliError::Config("params: expected a table".to_string()))?;
        for (key, value) in params {
            draft.params.insert(key.clone(), convert_value(key, value)?);
        }
    }
    Ok(draft)
}

fn coerce(spec_key: &str, kind: ParamKind, value: ParamValue) -> Result<ParamValue, CliError> {
    let ok = match (kind, &value) {
        (ParamKind::Bool, ParamValue::Bool(_)) => true,
        (ParamKind::Int, ParamValue::Int(_)) => true,
        (ParamKind::Float, ParamValue::Float(_)) => true,
        (ParamKind::Float, ParamValue::Int(i)) => {
            return Ok(ParamValue::Float(*i as f64));
        }
        (ParamKind::Str, ParamValue::Str(_)) => true,
        (ParamKind::FloatList, ParamValue::FloatList(_)) => true,
        _ => false,
    };
    if ok {
        Ok(value)
    } else {
        Err(CliError::Config(format!(
            "{spec_key}: expected {}, got {}",
            kind.name(),
            value.kind_name()
        )))
    }
}

/// Validate a draft against the experiment registry.
pub fn validate(experiment: &str, draft: ConfigDraft) -> Result<ExperimentConfig, CliError> {
    let spec: ExperimentSpec = registry()
        .into_iter()
        .find(|s| s.name == experiment)
        .ok_or_else(|| {
            CliError::Config(format!(
                "experiment: unknown experiment \"{experiment}\" (see `rbw list`)"
            ))
        })?;

    if let Some(name) = &draft.experiment {
        if name != experiment {
            return Err(CliError::Config(format!(
                "experiment: config file names \"{name}\" but \"{experiment}\" was requested"
            )));
        }
    }

    let mut params = BTreeMap::new();
    for p in &spec.params {
        params.insert(p.key.to_string(), p.default.clone());
    }
    for (key, value) in draft.params {
        let Some(param_spec) = spec.params.iter().find(|p| p.key == key) else {
            return Err(CliError::Config(format!(
                "params.{key}: unknown parameter for experiment \"{experiment}\""
            )));
        };
        let coerced = coerce(&format!("params.{key}"), param_spec.kind, value)?;
        if let Some(choices) = param_spec.choices {
            let chosen = coerced.as_str().unwrap_or_default().to_string();
            if !choices.contains(&chosen.as_str()) {
                return Err(CliError::Config(format!(
                    "params.{key}: expected one of {choices:?}, got \"{chosen}\""
                )));
            }
        }
        params.insert(key, coerced);
    }

    let trials = draft.trials.unwrap_or(spec.default_trials);
    if spec.uses_trials && trials == 0 {
        return Err(CliError::Config(format!(
            "trials: experiment \"{experiment}\" needs at least one trial"
        )));
    }

    Ok(ExperimentConfig {
        experiment: experiment.to_string(),
        trials,
        seed: draft.seed.unwrap_or(0),
        out_dir: draft.out_dir.unwrap_or_else(|| PathBuf::from("reports")),
        format: draft.format.unwrap_or(ReportFormat::Csv),
        params,
    })
}
