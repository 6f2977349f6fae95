//! Scenario files, the task runner, JSON reports and golden comparison.
//!
//! A scenario names one curved algebra and a list of tasks; [`run`] executes them in order and
//! embeds task failures in the report instead of aborting. Reports are deterministic given the
//! scenario and seed, apart from the `meta` block, which [`compare_golden`] ignores.

mod golden;
mod scenario;
mod tasks;

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub use golden::{compare_golden, DiffEntry, DiffKind};
pub use scenario::{
    ExcludeSpec, FieldSpec, Generator, GroundKind, GroundSpec, HochschildModel, Scenario, Setup,
    TaskSpec, VarSpec,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WorkbenchError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
    #[error("{kind}: {message}")]
    Task { kind: String, message: String },
    #[error("{0}")]
    Io(String),
}

impl WorkbenchError {
    /// Short name of the underlying failure, e.g. `ImperfectGroundField`.
    pub fn kind(&self) -> String {
        match self {
            WorkbenchError::Task { kind, .. } => kind.clone(),
            other => tasks::error_kind(other),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskResult {
    pub task: String,
    pub ok: bool,
    pub result: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub elapsed_ms: Vec<u128>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub scenario: Scenario,
    pub seed: Option<u64>,
    pub tasks: Vec<TaskResult>,
    pub meta: Meta,
}

impl Report {
    pub fn all_ok(&self) -> bool {
        self.tasks.iter().all(|t| t.ok)
    }

    pub fn task(&self, name: &str) -> Option<&TaskResult> {
        self.tasks.iter().find(|t| t.task == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Run every task of a scenario. `seed` overrides the scenario's own seed.
pub fn run(scenario: &Scenario, seed: Option<u64>) -> Result<Report, WorkbenchError> {
    let seed = seed.or(scenario.seed);
    let mut scenario = scenario.clone();
    scenario.seed = seed;
    scenario.validate()?;
    let setup = scenario.setup()?;
    let mut results = Vec::new();
    let mut elapsed = Vec::new();
    for t in &scenario.tasks {
        let start = Instant::now();
        let r = tasks::run_task(&setup, t, seed);
        elapsed.push(start.elapsed().as_millis());
        results.push(match r {
            Ok(result) => TaskResult {
                task: t.name().into(),
                ok: true,
                result,
                error: None,
            },
            Err(e) => TaskResult {
                task: t.name().into(),
                ok: false,
                result: Value::Null,
                error: Some(serde_json::json!({ "message": e.to_string(), "kind": e.kind() })),
            },
        });
    }
    Ok(Report {
        schema: SCHEMA_VERSION,
        scenario,
        seed,
        tasks: results,
        meta: Meta {
            version: env!("CARGO_PKG_VERSION").into(),
            elapsed_ms: elapsed,
        },
    })
}

pub fn load_scenario(path: &Path) -> Result<Scenario, WorkbenchError> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| WorkbenchError::Io(format!("{}: {e}", path.display())))?;
    Scenario::from_toml(&src)
}

pub fn run_file(path: &Path, seed: Option<u64>) -> Result<Report, WorkbenchError> {
    run(&load_scenario(path)?, seed)
}
