use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::WorkbenchError;
use crate::curved::{CurvedAlgebra, Ground};
use crate::exactalg::{parse_poly, Field, Poly, Ring, Var};

/// A declarative scenario: one curved algebra and an ordered list of tasks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub field: FieldSpec,
    #[serde(rename = "var", default)]
    pub vars: Vec<VarSpec>,
    pub ground: GroundSpec,
    pub curvature: String,
    #[serde(rename = "task", default)]
    pub tasks: Vec<TaskSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    /// 0 for the rationals.
    pub characteristic: u64,
    /// Adjoin a transcendental `s`, giving `F_p(s)`.
    #[serde(default)]
    pub parameter: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarSpec {
    pub name: String,
    #[serde(default = "one")]
    pub weight: i32,
    #[serde(default)]
    pub degree: i32,
}

fn one() -> i32 {
    1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroundKind {
    Field,
    Laurent,
    Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundSpec {
    pub kind: GroundKind,
    /// Declared variables that belong to the ground ring (`polynomial` only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vars: Vec<String>,
    /// Name of the degree-2 Laurent variable (`laurent` only).
    #[serde(default = "default_laurent")]
    pub laurent: String,
}

fn default_laurent() -> String {
    "t".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Generator {
    pub xs: Vec<String>,
    pub ys: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcludeSpec {
    pub g: String,
    #[serde(default = "three")]
    pub max_m: u32,
    #[serde(default = "two")]
    pub degree_bound: i32,
}

fn three() -> u32 {
    3
}

fn two() -> i32 {
    2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HochschildModel {
    /// The one-object curved algebra itself.
    OneObject,
    /// The polynomial ring with zero curvature.
    Polynomial,
    /// `End(X)` for the Koszul generator given in the task.
    Endomorphism,
}

fn default_model() -> HochschildModel {
    HochschildModel::OneObject
}

fn default_true() -> bool {
    true
}

fn default_samples() -> usize {
    100
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskSpec {
    Derham {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<(i64, i64)>,
    },
    Milnor {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<(i64, i64)>,
    },
    Rgamma {
        window: (i64, i64),
        /// Defaults to the curvature with the Laurent variable set to one.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        f: Option<String>,
    },
    SmoothCheck {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        f: Option<String>,
    },
    Support {
        /// Defaults to the singular locus.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ideal: Option<Vec<String>>,
        z: Vec<String>,
    },
    Hochschild {
        #[serde(default = "default_model")]
        model: HochschildModel,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generator: Option<Generator>,
        caps: Vec<usize>,
        window: (i64, i64),
        #[serde(default = "default_true")]
        identities: bool,
    },
    ChernCheck {
        #[serde(default = "default_samples")]
        samples: usize,
        window: (i64, i64),
    },
    AppendixKoszul {
        generator: Generator,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exclude: Option<ExcludeSpec>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        include: Vec<BTreeMap<String, String>>,
        /// Degree bound for the regular-triviality probe, if requested.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        probe: Option<i32>,
    },
    VerifyMain {
        generator: Generator,
        /// Bar-length caps for `End(X)`.
        caps: Vec<usize>,
        /// Caps for the one-object cross-check; skipped when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        one_object_caps: Option<Vec<usize>>,
        window: (i64, i64),
    },
}

impl TaskSpec {
    pub fn name(&self) -> &'static str {
        match self {
            TaskSpec::Derham { .. } => "derham",
            TaskSpec::Milnor { .. } => "milnor",
            TaskSpec::Rgamma { .. } => "rgamma",
            TaskSpec::SmoothCheck { .. } => "smooth_check",
            TaskSpec::Support { .. } => "support",
            TaskSpec::Hochschild { .. } => "hochschild",
            TaskSpec::ChernCheck { .. } => "chern_check",
            TaskSpec::AppendixKoszul { .. } => "appendix_koszul",
            TaskSpec::VerifyMain { .. } => "verify_main",
        }
    }

    fn window(&self) -> Option<(i64, i64)> {
        match self {
            TaskSpec::Derham { window } | TaskSpec::Milnor { window } => *window,
            TaskSpec::Rgamma { window, .. }
            | TaskSpec::Hochschild { window, .. }
            | TaskSpec::ChernCheck { window, .. }
            | TaskSpec::VerifyMain { window, .. } => Some(*window),
            _ => None,
        }
    }

    fn caps(&self) -> Option<&[usize]> {
        match self {
            TaskSpec::Hochschild { caps, .. } | TaskSpec::VerifyMain { caps, .. } => Some(caps),
            _ => None,
        }
    }

    /// Every polynomial the task mentions, with the field path used in error messages.
    fn polys(&self) -> Vec<(String, &str)> {
        let mut out: Vec<(String, &str)> = Vec::new();
        match self {
            TaskSpec::Rgamma { f: Some(f), .. } | TaskSpec::SmoothCheck { f: Some(f) } => {
                out.push(("f".into(), f))
            }
            TaskSpec::Support { ideal, z } => {
                for (i, g) in ideal.iter().flatten().enumerate() {
                    out.push((format!("ideal[{i}]"), g));
                }
                for (i, g) in z.iter().enumerate() {
                    out.push((format!("z[{i}]"), g));
                }
            }
            TaskSpec::Hochschild {
                generator: Some(g), ..
            }
            | TaskSpec::VerifyMain { generator: g, .. } => generator_polys(g, &mut out),
            TaskSpec::AppendixKoszul {
                generator, exclude, ..
            } => {
                generator_polys(generator, &mut out);
                if let Some(e) = exclude {
                    out.push(("exclude.g".into(), &e.g));
                }
            }
            _ => {}
        }
        out
    }
}

fn generator_polys<'a>(g: &'a Generator, out: &mut Vec<(String, &'a str)>) {
    for (i, x) in g.xs.iter().enumerate() {
        out.push((format!("generator.xs[{i}]"), x));
    }
    for (i, y) in g.ys.iter().enumerate() {
        out.push((format!("generator.ys[{i}]"), y));
    }
}

/// Ring and curved algebra described by a scenario.
#[derive(Clone, Debug)]
pub struct Setup {
    pub ring: Arc<Ring>,
    pub alg: CurvedAlgebra,
}

impl Setup {
    pub fn parse(&self, s: &str) -> Result<Poly, WorkbenchError> {
        parse_poly(&self.ring, s).map_err(|e| WorkbenchError::Validation {
            field: s.into(),
            message: e.to_string(),
        })
    }

    /// Parse in the ring with the Laurent variable set to one.
    pub fn parse_stripped(&self, s: &str) -> Result<Poly, WorkbenchError> {
        Ok(self.alg.stripped(&self.parse(s)?))
    }
}

fn invalid(field: impl Into<String>, message: impl ToString) -> WorkbenchError {
    WorkbenchError::Validation {
        field: field.into(),
        message: message.to_string(),
    }
}

/// 1-based line and column of a byte offset.
fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

impl Scenario {
    pub fn from_toml(src: &str) -> Result<Scenario, WorkbenchError> {
        let sc: Scenario = toml::from_str(src).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_col(src, s.start));
            WorkbenchError::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn field(&self) -> Result<Field, WorkbenchError> {
        let p = self.field.characteristic;
        let f = match (p, self.field.parameter) {
            (0, false) => Ok(Field::Rational),
            (0, true) => {
                return Err(invalid(
                    "field.parameter",
                    "a transcendental parameter needs positive characteristic",
                ))
            }
            (p, false) => Field::prime(p),
            (p, true) => Field::rational_function(p),
        };
        f.map_err(|e| invalid("field.characteristic", e))
    }

    /// Build the ring and curved algebra.
    pub fn setup(&self) -> Result<Setup, WorkbenchError> {
        let field = self.field()?;
        let mut vars: Vec<Var> = self
            .vars
            .iter()
            .map(|v| Var::new(&v.name, v.degree, v.weight))
            .collect();
        let ground = match self.ground.kind {
            GroundKind::Field => Ground::Field,
            GroundKind::Polynomial => Ground::Polynomial(self.ground.vars.clone()),
            GroundKind::Laurent => {
                vars.push(Var::laurent(&self.ground.laurent, 2));
                Ground::Laurent
            }
        };
        let ring = Ring::new(field, vars).map_err(|e| invalid("var", e))?;
        let w = parse_poly(&ring, &self.curvature).map_err(|e| invalid("curvature", e))?;
        let alg = CurvedAlgebra::new(&ring, ground, w).map_err(|e| invalid("curvature", e))?;
        Ok(Setup { ring, alg })
    }

    /// Structural checks that do not need any computation beyond parsing.
    pub fn validate(&self) -> Result<(), WorkbenchError> {
        let mut seen = std::collections::BTreeSet::new();
        for (i, v) in self.vars.iter().enumerate() {
            if !seen.insert(v.name.as_str()) {
                return Err(invalid(
                    format!("var[{i}].name"),
                    format!("duplicate variable {}", v.name),
                ));
            }
        }
        if self.ground.kind != GroundKind::Polynomial && !self.ground.vars.is_empty() {
            return Err(invalid(
                "ground.vars",
                "only a polynomial ground ring lists variables",
            ));
        }
        for n in &self.ground.vars {
            if !seen.contains(n.as_str()) {
                return Err(invalid("ground.vars", format!("undeclared variable {n}")));
            }
        }
        let setup = self.setup()?;
        for (i, t) in self.tasks.iter().enumerate() {
            let at = |f: &str| format!("task[{i}].{f}");
            if let Some((lo, hi)) = t.window() {
                if lo > hi {
                    return Err(invalid(at("window"), format!("empty window ({lo}, {hi})")));
                }
            }
            let increasing =
                |caps: &[usize]| !caps.is_empty() && caps.windows(2).all(|w| w[0] < w[1]);
            if t.caps().is_some_and(|c| !increasing(c)) {
                return Err(invalid(at("caps"), "caps must be non-empty and increasing"));
            }
            if let TaskSpec::VerifyMain {
                one_object_caps: Some(c),
                ..
            } = t
            {
                if !increasing(c) {
                    return Err(invalid(
                        at("one_object_caps"),
                        "caps must be non-empty and increasing",
                    ));
                }
            }
            for (field, text) in t.polys() {
                parse_poly(&setup.ring, text).map_err(|e| invalid(at(&field), e))?;
            }
            match t {
                TaskSpec::ChernCheck { .. } if self.seed.is_none() => {
                    return Err(invalid("seed", "sampling tasks need a seed"));
                }
                TaskSpec::Hochschild {
                    model: HochschildModel::Endomorphism,
                    generator: None,
                    ..
                } => {
                    return Err(invalid(
                        at("generator"),
                        "the endomorphism model needs a generator",
                    ));
                }
                TaskSpec::AppendixKoszul { include, .. } => {
                    for (k, pt) in include.iter().enumerate() {
                        for (name, val) in pt {
                            if !seen.contains(name.as_str()) {
                                return Err(invalid(
                                    at(&format!("include[{k}]")),
                                    format!("undeclared variable {name}"),
                                ));
                            }
                            parse_poly(&setup.ring, val)
                                .map_err(|e| invalid(at(&format!("include[{k}].{name}")), e))?;
                        }
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}
