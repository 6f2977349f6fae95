//! Truncated normalized Hochschild complexes of weight-graded curved dg algebras, with the
//! Connes operator and the Chern character into Kähler forms.
//!
//! Every algebra here is a matrix algebra `M_r(R)` over a polynomial ring `R` with positive
//! variable weights, twisted by an odd matrix `D` and carrying a central curvature `h`:
//! one-object curved algebras `(R, w)` have `r = 1, D = 0, h = w`, and endomorphism algebras of
//! curved modules have `D = d_X, h = 0`. Chains are graded by parity (or degree) and by
//! `κ = Σ weight − δ·n`, which every part of the differential raises by exactly `δ`.
//! Sign conventions are listed in [`chains`].

pub mod chains;
mod checks;
mod truncation;

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::curved::{CurvedAlgebra, CurvedError, CurvedModule, Ground};
use crate::exactalg::{AlgError, Field, Mono, Poly, Ring, Scalar};
use crate::homcx::PolyMatrix;

pub use chains::{Chain, ChainVec};
pub use checks::{chern_compatibility_check, identity_report, ChernReport, IdentityReport};
pub use truncation::{
    hochschild_truncated, homology_stabilized, HochschildTruncation, StabilizedTable, Truncation,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HochschildError {
    #[error("weight slices are not finite: {0}")]
    UnboundedWeights(String),
    #[error("the Chern character needs characteristic 0, not {0}")]
    PositiveCharacteristic(u64),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("at least three caps are needed to detect stabilization")]
    TooFewCaps,
    #[error(transparent)]
    Curved(#[from] CurvedError),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// A basis element `m · E_{row,col}` of `M_r(R)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisElem {
    pub row: u16,
    pub col: u16,
    pub mono: Mono,
}

#[derive(Clone, Debug)]
pub struct HochschildAlgebra {
    ring: Arc<Ring>,
    gen_weights: Vec<i64>,
    gen_degrees: Vec<i64>,
    twist: PolyMatrix,
    curvature: Poly,
    delta: i64,
    z_graded: bool,
    label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraDescriptor {
    pub label: String,
    pub field: String,
    pub vars: Vec<String>,
    pub rank: usize,
    pub curvature: String,
    pub twist: Vec<Vec<String>>,
    pub delta: i64,
    pub graded_by: String,
}

impl HochschildAlgebra {
    fn build(
        ring: &Arc<Ring>,
        gen_weights: Vec<i64>,
        gen_degrees: Vec<i64>,
        twist: PolyMatrix,
        curvature: Poly,
        delta: i64,
        label: &str,
    ) -> Result<HochschildAlgebra, HochschildError> {
        if let Some(v) = ring.vars.iter().find(|v| v.laurent || v.weight <= 0) {
            return Err(HochschildError::UnboundedWeights(format!(
                "variable {} has weight {}",
                v.name, v.weight
            )));
        }
        if !curvature.is_zero() && delta <= 0 {
            return Err(HochschildError::UnboundedWeights(
                "curvature of weight zero".into(),
            ));
        }
        let z_graded = true;
        Ok(HochschildAlgebra {
            ring: ring.clone(),
            gen_weights,
            gen_degrees,
            twist,
            curvature,
            delta,
            z_graded,
            label: label.to_string(),
        })
    }

    /// The ground field as a trivial algebra.
    pub fn ground_field(field: &Field) -> Result<HochschildAlgebra, HochschildError> {
        let ring = Ring::new(field.clone(), vec![])?;
        HochschildAlgebra::build(
            &ring,
            vec![0],
            vec![0],
            PolyMatrix::zero(&ring, 1, 1),
            Poly::zero(&ring),
            0,
            "field",
        )
    }

    /// `R` itself, optionally curved by a homogeneous `w` of even weight.
    pub fn polynomial(ring: &Arc<Ring>, w: &Poly) -> Result<HochschildAlgebra, HochschildError> {
        let delta = match w.weight() {
            _ if w.is_zero() => 0,
            Some(d) if d % 2 == 0 => d / 2,
            _ => {
                return Err(HochschildError::Unsupported(format!(
                    "{w} needs an even homogeneous weight"
                )))
            }
        };
        HochschildAlgebra::build(
            ring,
            vec![0],
            vec![0],
            PolyMatrix::zero(ring, 1, 1),
            w.clone(),
            delta,
            "polynomial",
        )
    }

    /// The one-object curved algebra `(A, w)` with the Laurent variable set to one.
    pub fn one_object(alg: &CurvedAlgebra) -> Result<HochschildAlgebra, HochschildError> {
        if matches!(alg.ground(), Ground::Polynomial(_)) {
            return Err(HochschildError::Unsupported(
                "Hochschild chains over a polynomial ground ring".into(),
            ));
        }
        let ring = alg.stripped_ring();
        let mut a = HochschildAlgebra::build(
            &ring,
            vec![0],
            vec![0],
            PolyMatrix::zero(&ring, 1, 1),
            alg.stripped_w(),
            alg.delta(),
            "one_object",
        )?;
        a.z_graded = alg.ring().laurent_index().is_none();
        Ok(a)
    }

    /// `End(X)` of a curved module as a dg algebra: `M_r(A)` twisted by `d_X`.
    pub fn endomorphism(x: &CurvedModule) -> Result<HochschildAlgebra, HochschildError> {
        let alg = x.algebra();
        if matches!(alg.ground(), Ground::Polynomial(_)) {
            return Err(HochschildError::Unsupported(
                "Hochschild chains over a polynomial ground ring".into(),
            ));
        }
        let ring = alg.stripped_ring();
        let d = x.differential().map_into(&ring, |p| alg.stripped(p));
        let mut a = HochschildAlgebra::build(
            &ring,
            x.weights().to_vec(),
            x.degrees().to_vec(),
            d,
            Poly::zero(&ring),
            alg.delta(),
            "endomorphism",
        )?;
        a.z_graded = alg.ring().laurent_index().is_none();
        Ok(a)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.gen_weights.len()
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn curvature(&self) -> &Poly {
        &self.curvature
    }

    pub fn is_curved(&self) -> bool {
        !self.curvature.is_zero()
    }

    pub fn has_twist(&self) -> bool {
        self.twist.entries().any(|(_, _, e)| !e.is_zero())
    }

    /// Whether chains carry a Z-degree (no Laurent variable was set to one).
    pub fn z_graded(&self) -> bool {
        self.z_graded
    }

    pub fn descriptor(&self) -> AlgebraDescriptor {
        AlgebraDescriptor {
            label: self.label.clone(),
            field: self.ring.field.describe(),
            vars: self.ring.vars.iter().map(|v| v.name.clone()).collect(),
            rank: self.rank(),
            curvature: self.curvature.to_string(),
            twist: self.twist.strings(),
            delta: self.delta,
            graded_by: if self.z_graded {
                "degree".into()
            } else {
                "parity".into()
            },
        }
    }

    pub fn weight(&self, b: &BasisElem) -> i64 {
        self.ring.mono_weight(&b.mono) + self.gen_weights[b.row as usize]
            - self.gen_weights[b.col as usize]
    }

    pub fn degree(&self, b: &BasisElem) -> i64 {
        self.ring.mono_degree(&b.mono) + self.gen_degrees[b.row as usize]
            - self.gen_degrees[b.col as usize]
    }

    pub fn parity(&self, b: &BasisElem) -> i64 {
        self.degree(b).rem_euclid(2)
    }

    /// Smallest weight of any basis element.
    pub fn weight_floor(&self) -> i64 {
        let r = self.rank();
        (0..r)
            .flat_map(|i| (0..r).map(move |j| (i, j)))
            .map(|(i, j)| self.gen_weights[i] - self.gen_weights[j])
            .min()
            .unwrap_or(0)
    }

    /// All basis elements of the given weight.
    pub fn basis(&self, weight: i64) -> Vec<BasisElem> {
        let r = self.rank();
        let mut out = Vec::new();
        for i in 0..r {
            for j in 0..r {
                let rest = weight - self.gen_weights[i] + self.gen_weights[j];
                if rest < 0 {
                    continue;
                }
                let monos = self
                    .ring
                    .monomials_of_weight(rest)
                    .expect("weights were checked positive");
                out.extend(monos.into_iter().map(|mono| BasisElem {
                    row: i as u16,
                    col: j as u16,
                    mono,
                }));
            }
        }
        out
    }

    pub fn unit_terms(&self) -> Vec<BasisElem> {
        (0..self.rank())
            .map(|i| BasisElem {
                row: i as u16,
                col: i as u16,
                mono: self.ring.one_mono(),
            })
            .collect()
    }

    /// `E_00 · 1`, the basis element dropped from bar positions; it is `1 - Σ_{i>0} E_ii`.
    pub(crate) fn is_pivot_unit(&self, b: &BasisElem) -> bool {
        b.row == 0 && b.col == 0 && b.mono.iter().all(|&e| e == 0)
    }

    pub fn multiply(&self, a: &BasisElem, b: &BasisElem) -> Option<BasisElem> {
        (a.col == b.row).then(|| BasisElem {
            row: a.row,
            col: b.col,
            mono: a.mono.iter().zip(&b.mono).map(|(x, y)| x + y).collect(),
        })
    }

    /// `d(b) = D·b - (-1)^{|b|} b·D`.
    pub fn differential(&self, b: &BasisElem) -> Vec<(BasisElem, Scalar)> {
        let r = self.rank();
        let mut out: std::collections::BTreeMap<BasisElem, Scalar> = Default::default();
        let mut add = |row: usize, col: usize, p: &Poly, sign: bool| {
            for (m, c) in p.terms() {
                let mono: Mono = m.iter().zip(&b.mono).map(|(x, y)| x + y).collect();
                let key = BasisElem {
                    row: row as u16,
                    col: col as u16,
                    mono,
                };
                let c = if sign { c.neg() } else { c.clone() };
                let e = out.entry(key).or_insert_with(|| self.ring.field.zero());
                *e = e.add(&c);
            }
        };
        let odd = self.parity(b) == 1;
        for k in 0..r {
            let left = self.twist.get(k, b.row as usize);
            if !left.is_zero() {
                add(k, b.col as usize, left, false);
            }
            let right = self.twist.get(b.col as usize, k);
            if !right.is_zero() {
                add(b.row as usize, k, right, !odd);
            }
        }
        out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// The curvature `h · Σ E_ii` as basis terms.
    pub fn curvature_terms(&self) -> Vec<(BasisElem, Scalar)> {
        let mut out = Vec::new();
        for i in 0..self.rank() {
            for (m, c) in self.curvature.terms() {
                out.push((
                    BasisElem {
                        row: i as u16,
                        col: i as u16,
                        mono: m.clone(),
                    },
                    c.clone(),
                ));
            }
        }
        out
    }

    pub fn elem_to_string(&self, b: &BasisElem) -> String {
        let p = Poly::monomial(&self.ring, b.mono.clone(), self.ring.field.one());
        if self.rank() == 1 {
            p.to_string()
        } else {
            format!("{p}*E{}{}", b.row, b.col)
        }
    }
}
