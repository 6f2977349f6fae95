//! Kähler forms and the twisted de Rham complex `(Ω·_{A/k}, dw ∧ -)`.
//!
//! Forms use only the relative variables of the curved algebra. Module generators `dx_I` carry
//! the weight `Σ_{i∈I} weight(x_i)`, so `dw ∧ -` raises total weight by `weight(w)`. The usual
//! `Σ^{2q}` placement of `Ω^q` is metadata only; positions here are the exterior degrees.

mod forms;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::curved::{quasi_homogeneous_weights, reweight, CurvedAlgebra, CurvedError, Ground};
use crate::exactalg::{
    buchberger, jacobian_ideal, quotient_dimension, AlgError, Field, IdealBasis, MonomialOrder,
    Poly, QuotientDimension, Ring, Var,
};
use crate::homcx::{
    cohomology_window, subsets, CohomologyTable, FiniteComplex, FreeModule, Grading, HomError,
    PolyMatrix,
};

pub use forms::{derham_d, DifferentialForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerhamError {
    #[error("the partial derivatives do not form a regular sequence")]
    NotRegularSequence,
    #[error("ground field {0} is not perfect")]
    ImperfectGroundField(String),
    #[error("curvature is zero")]
    ZeroCurvature,
    #[error("{0} does not have cohomological degree 0")]
    NonzeroWeightInput(String),
    #[error(transparent)]
    Curved(#[from] CurvedError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// The twisted de Rham complex of a curved algebra, positions `0..=n`.
#[derive(Clone, Debug)]
pub struct TwistedDeRham {
    pub alg: CurvedAlgebra,
    pub complex: FiniteComplex,
    /// Ring indices of the relative variables, in the order used for `dx_i`.
    pub relative: Vec<usize>,
    /// `dw` as a 1-form.
    pub dw: DifferentialForm,
}

pub fn twisted_derham(alg: &CurvedAlgebra) -> Result<TwistedDeRham, DerhamError> {
    let ring = alg.ring();
    let rel = alg.relative_vars();
    let n = rel.len();
    let dw = derham_d(&DifferentialForm::function(ring, &rel, alg.w().clone()));
    let layers: Vec<Vec<Vec<usize>>> = (0..=n).map(|q| subsets(n, q)).collect();
    let form_weight = |s: &[usize]| {
        s.iter()
            .map(|&i| ring.vars[rel[i]].weight as i64)
            .sum::<i64>()
    };
    let modules: Vec<FreeModule> = layers
        .iter()
        .map(|l| FreeModule::new(l.iter().map(|s| form_weight(s)).collect()))
        .collect();
    let mut diffs = Vec::new();
    for q in 0..n {
        let mut m = PolyMatrix::zero(ring, layers[q + 1].len(), layers[q].len());
        for (col, s) in layers[q].iter().enumerate() {
            let image = dw.wedge(&DifferentialForm::basis(ring, &rel, s.clone()));
            for (idx, c) in image.terms() {
                let row = layers[q + 1].iter().position(|t| t == idx).unwrap();
                m.set(row, col, c.clone());
            }
        }
        diffs.push(m);
    }
    let shift = alg.w().weight().unwrap_or(0);
    let complex = FiniteComplex::new(ring, Grading::Z { lo: 0 }, modules, diffs, shift)?;
    Ok(TwistedDeRham {
        alg: alg.clone(),
        complex,
        relative: rel,
        dw,
    })
}

/// Jacobian data of the Laurent-stripped curvature in the relative variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorData {
    pub jacobian: Vec<String>,
    pub groebner: Vec<String>,
    pub dim: Option<usize>,
    pub hilbert: BTreeMap<i64, usize>,
    pub regular_sequence: bool,
}

/// `window` is used for the Hilbert counts when the quotient is infinite.
pub fn milnor_data(
    alg: &CurvedAlgebra,
    window: Option<(i64, i64)>,
) -> Result<MilnorData, DerhamError> {
    let (j, gb) = jacobian_gb(alg)?;
    let q = match quotient_dimension(&gb, window) {
        Ok(q) => Some(q),
        Err(AlgError::WindowRequired) | Err(AlgError::InfiniteSlice(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let (dim, hilbert) = match &q {
        Some(QuotientDimension::Finite { dim, hilbert, .. }) => (Some(*dim), hilbert.clone()),
        Some(QuotientDimension::Infinite { hilbert, .. }) => (None, hilbert.clone()),
        None => (None, BTreeMap::new()),
    };
    let relative_ok = stripped_relative_only(alg);
    Ok(MilnorData {
        jacobian: j.strings(),
        groebner: gb.strings(),
        dim,
        hilbert,
        regular_sequence: dim.is_some() && relative_ok,
    })
}

/// True when every variable of the stripped ring is relative (no polynomial ground variables),
/// so a finite Jacobian quotient means the partials form a regular sequence.
fn stripped_relative_only(alg: &CurvedAlgebra) -> bool {
    alg.ring()
        .vars
        .iter()
        .enumerate()
        .all(|(i, v)| v.laurent || !alg.is_ground_var(i))
}

fn jacobian_gb(
    alg: &CurvedAlgebra,
) -> Result<(IdealBasis, crate::exactalg::GroebnerBasis), DerhamError> {
    let ring = alg.stripped_ring();
    let w = alg.stripped_w();
    let rel: Vec<usize> = alg
        .relative_vars()
        .iter()
        .map(|&i| ring.var_index(&alg.ring().vars[i].name))
        .collect::<Result<_, _>>()?;
    let j = jacobian_ideal(&w, &rel)?;
    let gb = buchberger(&j, MonomialOrder::Grevlex)?;
    Ok((j, gb))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CohomologyMode {
    RegularSequence,
    Window(i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedCohomology {
    /// In regular-sequence mode positions are parities and weights are coefficient weights
    /// of `Q/J`; in window mode positions are exterior degrees and weights are total weights.
    pub table: CohomologyTable,
    pub milnor: MilnorData,
    pub mode: String,
    /// Parity of the top exterior degree.
    pub parity: i64,
    /// Weight of `dx_1 ∧ … ∧ dx_n`.
    pub form_shift: i64,
}

pub fn twisted_cohomology(
    tdr: &TwistedDeRham,
    mode: CohomologyMode,
) -> Result<TwistedCohomology, DerhamError> {
    let n = tdr.relative.len() as i64;
    let ring = tdr.alg.ring();
    let form_shift: i64 = tdr
        .relative
        .iter()
        .map(|&i| ring.vars[i].weight as i64)
        .sum();
    match mode {
        CohomologyMode::RegularSequence => {
            let milnor = milnor_data(&tdr.alg, None)?;
            if !milnor.regular_sequence {
                return Err(DerhamError::NotRegularSequence);
            }
            let lo = milnor.hilbert.keys().next().copied().unwrap_or(0);
            let hi = milnor.hilbert.keys().last().copied().unwrap_or(0);
            let mut entries = BTreeMap::new();
            for wgt in lo..=hi {
                entries.insert(
                    (n.rem_euclid(2), wgt),
                    milnor.hilbert.get(&wgt).copied().unwrap_or(0),
                );
                entries.insert((1 - n.rem_euclid(2), wgt), 0);
            }
            Ok(TwistedCohomology {
                table: CohomologyTable {
                    entries,
                    window: (lo, hi),
                    complete: true,
                },
                milnor,
                mode: "regular_sequence".into(),
                parity: n.rem_euclid(2),
                form_shift,
            })
        }
        CohomologyMode::Window(lo, hi) => {
            let table = cohomology_window(&tdr.complex, (lo, hi))?;
            let milnor = milnor_data(&tdr.alg, Some((lo, hi)))?;
            Ok(TwistedCohomology {
                table,
                milnor,
                mode: "window".into(),
                parity: n.rem_euclid(2),
                form_shift,
            })
        }
    }
}

/// Jacobian ideal of the stripped curvature in the relative variables, as a reduced basis.
pub fn sing_locus(alg: &CurvedAlgebra) -> Result<IdealBasis, DerhamError> {
    Ok(jacobian_gb(alg)?.1.to_ideal())
}

/// `(w) + J(w)`, which cuts out `V(w) ∩ Sing(w)`; requires `w ≠ 0` and a perfect ground field.
pub fn nonreg_locus(alg: &CurvedAlgebra) -> Result<IdealBasis, DerhamError> {
    let field = &alg.ring().field;
    if !field.is_perfect() {
        return Err(DerhamError::ImperfectGroundField(field.describe()));
    }
    if alg.w().is_zero() {
        return Err(DerhamError::ZeroCurvature);
    }
    let (j, _) = jacobian_gb(alg)?;
    let w = alg.stripped_w();
    let ideal = j.sum(&IdealBasis::new(w.ring(), vec![w.clone()])?)?;
    Ok(buchberger(&ideal, MonomialOrder::Grevlex)?.to_ideal())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TildeBase {
    Field,
    Polynomial,
}

/// `(Q[t_1..t_c], Σ f_i t_i)` with each `t_i` of cohomological degree 2. Weights of all
/// variables are recomputed to make the curvature quasi-homogeneous.
pub fn tilde_construction(
    q: &Arc<Ring>,
    fs: &[Poly],
    base: TildeBase,
) -> Result<CurvedAlgebra, DerhamError> {
    for f in fs {
        if !f.is_zero() && f.degree() != Some(0) {
            return Err(DerhamError::NonzeroWeightInput(f.to_string()));
        }
    }
    let c = fs.len();
    let mut names = Vec::new();
    for i in 0..c {
        let mut name = if c == 1 {
            "t".to_string()
        } else {
            format!("t{}", i + 1)
        };
        while q.vars.iter().any(|v| v.name == name) {
            name.push('\'');
        }
        names.push(name);
    }
    let mut vars = q.vars.clone();
    vars.extend(names.iter().map(|n| Var::new(n, 2, 1)));
    let ring = Ring::with_order(q.field.clone(), vars, q.order)?;
    let nq = q.nvars();
    let map: Vec<Option<usize>> = (0..nq).map(Some).collect();
    let build = |ring: &Arc<Ring>| -> Result<Poly, AlgError> {
        let mut w = Poly::zero(ring);
        for (i, f) in fs.iter().enumerate() {
            w = w.add(&f.map_into(ring, &map)?.mul(&Poly::var(ring, nq + i)));
        }
        Ok(w)
    };
    let w = build(&ring)?;
    let ring = match quasi_homogeneous_weights(&w) {
        Some(ws) => reweight(&ring, &ws)?,
        None => ring,
    };
    let w = build(&ring)?;
    let ground = match base {
        TildeBase::Field => Ground::Field,
        TildeBase::Polynomial => Ground::Polynomial(names),
    };
    Ok(CurvedAlgebra::new(&ring, ground, w)?)
}

/// Whether the ground field admits the Nonreg computation.
pub fn ground_is_perfect(field: &Field) -> bool {
    field.is_perfect()
}

#[cfg(test)]
mod tests;
