use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::complex::{FiniteComplex, FreeModule, Grading};
use super::matrix::PolyMatrix;
use super::HomError;
use crate::exactalg::{parse_poly, AlgError, Field, MonomialOrder, Poly, Ring, Var};

/// Serializable description of a polynomial ring. `field` is `"Q"`, `"F_p"` or `"F_p(s)"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub field: String,
    pub vars: Vec<Var>,
    pub order: MonomialOrder,
}

impl RingSpec {
    pub fn of(ring: &Ring) -> RingSpec {
        RingSpec {
            field: ring.field.describe(),
            vars: ring.vars.clone(),
            order: ring.order,
        }
    }

    pub fn build(&self) -> Result<Arc<Ring>, AlgError> {
        Ring::with_order(parse_field(&self.field)?, self.vars.clone(), self.order)
    }
}

/// Parse `Q`, `F_p` / `GF(p)`, or `F_p(s)`.
pub fn parse_field(s: &str) -> Result<Field, AlgError> {
    let t = s.trim();
    if t == "Q" || t.eq_ignore_ascii_case("rational") {
        return Ok(Field::Rational);
    }
    let bad = || AlgError::Parse {
        pos: 0,
        msg: format!("unknown field '{s}'"),
    };
    if let Some(rest) = t.strip_prefix("F_") {
        if let Some(p) = rest.strip_suffix("(s)") {
            return Field::rational_function(p.parse().map_err(|_| bad())?);
        }
        return Field::prime(rest.parse().map_err(|_| bad())?);
    }
    if let Some(p) = t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
        return Field::prime(p.parse().map_err(|_| bad())?);
    }
    Err(bad())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub ring: RingSpec,
    /// `"z"` or `"z2"`.
    pub grading: String,
    pub positions: Vec<i64>,
    pub modules: Vec<Vec<i64>>,
    pub differentials: Vec<Vec<Vec<String>>>,
    pub shift: i64,
    pub curvature: String,
}

pub fn complex_to_json(cx: &FiniteComplex) -> ComplexJson {
    ComplexJson {
        ring: RingSpec::of(cx.ring()),
        grading: match cx.grading() {
            Grading::Z { .. } => "z".into(),
            Grading::Z2 => "z2".into(),
        },
        positions: cx.positions(),
        modules: cx.modules().iter().map(|m| m.weights.clone()).collect(),
        differentials: cx.diffs().iter().map(|d| d.strings()).collect(),
        shift: cx.shift(),
        curvature: cx.curvature().to_string(),
    }
}

pub fn complex_from_json(j: &ComplexJson) -> Result<FiniteComplex, HomError> {
    let ring = j.ring.build()?;
    let grading = match j.grading.as_str() {
        "z" => Grading::Z {
            lo: j.positions.first().copied().unwrap_or(0),
        },
        "z2" => Grading::Z2,
        g => return Err(HomError::ShapeMismatch(format!("unknown grading '{g}'"))),
    };
    let modules: Vec<FreeModule> = j
        .modules
        .iter()
        .map(|w| FreeModule::new(w.clone()))
        .collect();
    let mut diffs = Vec::new();
    for (k, d) in j.differentials.iter().enumerate() {
        let cols = modules.get(k).map(|m| m.rank()).unwrap_or(0);
        let rows = d
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| parse_poly(&ring, e))
                    .collect::<Result<Vec<Poly>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        if rows.iter().any(|r| r.len() != cols) {
            return Err(HomError::ShapeMismatch(format!(
                "differential {k} rows must have {cols} entries"
            )));
        }
        diffs.push(PolyMatrix::from_rows(&ring, rows, cols));
    }
    let curvature = parse_poly(&ring, &j.curvature)?;
    if grading == Grading::Z2 {
        let [m0, m1]: [FreeModule; 2] = modules
            .try_into()
            .map_err(|_| HomError::ShapeMismatch("Z/2 complexes have two modules".into()))?;
        let [d0, d1]: [PolyMatrix; 2] = diffs
            .try_into()
            .map_err(|_| HomError::ShapeMismatch("Z/2 complexes have two differentials".into()))?;
        return FiniteComplex::new_curved(&ring, [m0, m1], [d0, d1], j.shift, curvature);
    }
    FiniteComplex::new(&ring, grading, modules, diffs, j.shift)
}
