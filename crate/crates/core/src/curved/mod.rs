//! Curved algebras `(A, w)` and their perfect curved modules (matrix factorizations).
//!
//! A module is a free module with generators in given cohomological degrees and an odd
//! differential `d` with `d² = w · id`. For homological work a module is viewed as a
//! Z/2-folded [`FiniteComplex`](crate::homcx::FiniteComplex): even generators in position 0,
//! odd ones in position 1, differentials raising the auxiliary weight by `δ = weight(w) / 2`.

mod endo;
mod module;
mod support;

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::exactalg::{AlgError, Poly, Ring, Var};
use crate::homcx::HomError;

pub use endo::{endomorphism_dga, EndomorphismDga};
pub use module::{enveloping, koszul_curved, psi_tensor, CurvedModule};
pub use support::{
    regular_triviality_probe, support_exclude, support_include, PointHomology, ProbeReport,
    SupportCertificate,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurvedError {
    #[error("d² ≠ w·id; residual {0:?}")]
    CurvatureMismatch(Vec<Vec<String>>),
    #[error("entry ({row},{col}) breaks odd degree: {entry}")]
    OddnessViolation {
        row: usize,
        col: usize,
        entry: String,
    },
    #[error("Σ xᵢyᵢ = {0} differs from the curvature")]
    CurvatureDecompositionInvalid(String),
    #[error("modules live over different curved algebras")]
    GroundRingMismatch,
    #[error("invalid curvature: {0}")]
    BadCurvature(String),
    #[error("entries do not admit consistent generator weights: {0}")]
    NotHomogeneous(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// The ground ring `k` of a curved algebra. A Laurent variable of the ambient ring always
/// belongs to `k`; `Polynomial` additionally lists ordinary variables of `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ground {
    Field,
    Polynomial(Vec<String>),
    Laurent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvedAlgebra {
    ring: Arc<Ring>,
    ground: Ground,
    w: Poly,
}

impl CurvedAlgebra {
    pub fn new(ring: &Arc<Ring>, ground: Ground, w: Poly) -> Result<CurvedAlgebra, CurvedError> {
        if !Ring::same(w.ring(), ring) {
            return Err(CurvedError::Alg(AlgError::MixedAmbient));
        }
        for v in &ring.vars {
            if v.degree % 2 != 0 {
                return Err(CurvedError::BadCurvature(format!(
                    "variable {} has odd degree",
                    v.name
                )));
            }
        }
        if !w.is_zero() {
            if w.degree() != Some(2) {
                return Err(CurvedError::BadCurvature(format!(
                    "{w} is not homogeneous of degree 2"
                )));
            }
            match w.weight() {
                Some(d) if d % 2 == 0 => {}
                _ => {
                    return Err(CurvedError::BadCurvature(format!(
                        "{w} needs an even homogeneous weight"
                    )))
                }
            }
        }
        if let Ground::Polynomial(names) = &ground {
            for n in names {
                ring.var_index(n)?;
            }
        }
        if ground == Ground::Laurent && ring.laurent_index().is_none() {
            return Err(CurvedError::BadCurvature(
                "Laurent ground ring without a Laurent variable".into(),
            ));
        }
        Ok(CurvedAlgebra {
            ring: ring.clone(),
            ground,
            w,
        })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn w(&self) -> &Poly {
        &self.w
    }

    /// Weight shift of odd differentials: half the weight of `w` (zero when `w = 0`).
    pub fn delta(&self) -> i64 {
        self.w.weight().map_or(0, |d| d / 2)
    }

    pub fn is_ground_var(&self, i: usize) -> bool {
        let v = &self.ring.vars[i];
        v.laurent || matches!(&self.ground, Ground::Polynomial(ns) if ns.contains(&v.name))
    }

    /// Variables of `A` over `k`: these carry `dx` in Kähler forms and are doubled in `A ⊗_k A`.
    pub fn relative_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| !self.is_ground_var(i))
            .collect()
    }

    /// Ambient ring with the Laurent variable set to one.
    pub fn stripped_ring(&self) -> Arc<Ring> {
        match self.ring.laurent_index() {
            Some(l) => self.ring.without(&[l]),
            None => self.ring.clone(),
        }
    }

    pub fn stripped(&self, p: &Poly) -> Poly {
        p.strip_laurent(&self.stripped_ring())
    }

    pub fn stripped_w(&self) -> Poly {
        self.stripped(&self.w)
    }
}

/// Smallest quasi-homogeneous weights for the non-Laurent variables of `w`'s ring, doubled
/// when the resulting weight of `w` is odd. Positive weights are preferred; a variable whose
/// weight is forced to zero gets zero. Returns `None` if nothing up to weight 12 fits.
pub fn quasi_homogeneous_weights(w: &Poly) -> Option<Vec<i32>> {
    let ring = w.ring();
    let free: Vec<usize> = (0..ring.nvars())
        .filter(|&i| !ring.vars[i].laurent)
        .collect();
    let fits = |ws: &[i32]| -> Option<i64> {
        let mut it = w.terms().iter().map(|(m, _)| {
            free.iter()
                .zip(ws)
                .map(|(&i, &x)| m[i] as i64 * x as i64)
                .sum::<i64>()
        });
        let d = it.next().unwrap_or(0);
        it.all(|x| x == d).then_some(d)
    };
    let finish = |ws: Vec<i32>, d: i64| {
        let k = if d % 2 != 0 { 2 } else { 1 };
        let mut out = vec![0; ring.nvars()];
        for (&i, x) in free.iter().zip(ws) {
            out[i] = x * k;
        }
        out
    };
    let n = free.len();
    for min in [1, 0] {
        for total in (n as i32 * min).max(1)..=12 * n as i32 {
            let mut found = None;
            compositions(n, total, min, 12, &mut |ws| {
                if found.is_none() {
                    if let Some(d) = fits(ws) {
                        found = Some((ws.to_vec(), d));
                    }
                }
            });
            if let Some((ws, d)) = found {
                return Some(finish(ws, d));
            }
        }
    }
    None
}

fn compositions(n: usize, total: i32, min: i32, max: i32, f: &mut impl FnMut(&[i32])) {
    fn rec(
        i: usize,
        n: usize,
        left: i32,
        min: i32,
        max: i32,
        cur: &mut Vec<i32>,
        f: &mut impl FnMut(&[i32]),
    ) {
        if i == n {
            if left == 0 {
                f(cur);
            }
            return;
        }
        for x in min..=max.min(left) {
            cur.push(x);
            rec(i + 1, n, left - x, min, max, cur, f);
            cur.pop();
        }
    }
    rec(0, n, total, min, max, &mut Vec::new(), f);
}

/// Rebuild `ring` with new auxiliary weights.
pub fn reweight(ring: &Ring, weights: &[i32]) -> Result<Arc<Ring>, AlgError> {
    let vars = ring
        .vars
        .iter()
        .zip(weights)
        .map(|(v, &w)| Var {
            weight: if v.laurent { 0 } else { w },
            ..v.clone()
        })
        .collect();
    Ring::with_order(ring.field.clone(), vars, ring.order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, Field};

    fn ring_with(vars: &[&str]) -> Arc<Ring> {
        let mut vs: Vec<Var> = vars.iter().map(|n| Var::new(n, 0, 1)).collect();
        vs.push(Var::laurent("t", 2));
        Ring::new(Field::Rational, vs).unwrap()
    }

    #[test]
    fn default_weights() {
        let r = ring_with(&["x"]);
        assert_eq!(
            quasi_homogeneous_weights(&parse_poly(&r, "x^3*t").unwrap()),
            Some(vec![2, 0])
        );
        assert_eq!(
            quasi_homogeneous_weights(&parse_poly(&r, "x^2*t").unwrap()),
            Some(vec![1, 0])
        );
        let r = ring_with(&["x", "y"]);
        assert_eq!(
            quasi_homogeneous_weights(&parse_poly(&r, "(x^2+y^2)*t").unwrap()),
            Some(vec![1, 1, 0])
        );
        assert_eq!(
            quasi_homogeneous_weights(&parse_poly(&r, "(x^2+y^3)*t").unwrap()),
            Some(vec![3, 2, 0])
        );
        assert_eq!(
            quasi_homogeneous_weights(&parse_poly(&r, "(x^2*y+y)*t").unwrap()),
            Some(vec![0, 2, 0])
        );
    }

    #[test]
    fn algebra_validation() {
        let r = reweight(&ring_with(&["x"]), &[1, 0]).unwrap();
        let w = parse_poly(&r, "x^2*t").unwrap();
        let a = CurvedAlgebra::new(&r, Ground::Laurent, w).unwrap();
        assert_eq!(a.delta(), 1);
        assert_eq!(a.relative_vars(), vec![0]);
        assert_eq!(a.stripped_w().to_string(), "x^2");
        let bad = parse_poly(&r, "x^2").unwrap();
        assert!(matches!(
            CurvedAlgebra::new(&r, Ground::Laurent, bad),
            Err(CurvedError::BadCurvature(_))
        ));
    }
}
