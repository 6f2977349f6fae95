use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::matrix::PolyMatrix;
use super::HomError;
use crate::exactalg::{Poly, Ring};

/// Free graded module: generator `j` sits in weight `weights[j]`, so `a * e_j` has weight
/// `weight(a) + weights[j]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeModule {
    pub weights: Vec<i64>,
}

impl FreeModule {
    pub fn new(weights: Vec<i64>) -> FreeModule {
        FreeModule { weights }
    }

    pub fn zero() -> FreeModule {
        FreeModule {
            weights: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn concat(parts: &[&FreeModule]) -> FreeModule {
        FreeModule {
            weights: parts
                .iter()
                .flat_map(|m| m.weights.iter().copied())
                .collect(),
        }
    }

    /// Generator weights shifted by `by`.
    pub fn twist(&self, by: i64) -> FreeModule {
        FreeModule {
            weights: self.weights.iter().map(|w| w + by).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Grading {
    /// Positions `lo, lo+1, ...`.
    Z { lo: i64 },
    /// Positions 0 (even) and 1 (odd), differentials in both directions.
    Z2,
}

/// A homogeneous map of free modules. Entry `(i, j)` has weight
/// `source.weights[j] - target.weights[i] + shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: FreeModule,
    pub target: FreeModule,
    pub matrix: PolyMatrix,
    pub shift: i64,
    pub degree: i64,
}

impl ModuleMap {
    pub fn new(
        source: FreeModule,
        target: FreeModule,
        matrix: PolyMatrix,
        shift: i64,
        degree: i64,
    ) -> Result<ModuleMap, HomError> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(HomError::ShapeMismatch(format!(
                "{}x{} matrix for map of ranks {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source.rank(),
                target.rank()
            )));
        }
        check_homogeneous(&source, &target, &matrix, shift, 0)?;
        Ok(ModuleMap {
            source,
            target,
            matrix,
            shift,
            degree,
        })
    }

    pub fn identity(ring: &Arc<Ring>, m: &FreeModule) -> ModuleMap {
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            matrix: PolyMatrix::identity(ring, m.rank()),
            shift: 0,
            degree: 0,
        }
    }
}

pub(crate) fn check_homogeneous(
    source: &FreeModule,
    target: &FreeModule,
    m: &PolyMatrix,
    shift: i64,
    position: i64,
) -> Result<(), HomError> {
    for (i, j, p) in m.entries() {
        if p.is_zero() {
            continue;
        }
        let want = source.weights[j] - target.weights[i] + shift;
        if p.weight() != Some(want) {
            return Err(HomError::NotHomogeneous {
                position,
                row: i,
                col: j,
                entry: p.to_string(),
                expected: want,
            });
        }
    }
    Ok(())
}

/// Bounded complex of free graded modules, or a Z/2-folded (possibly curved) one.
///
/// All differentials share the weight shift `shift`. For Z-graded complexes `diffs[k]`
/// maps `modules[k]` to `modules[k + 1]`; for Z/2 complexes `diffs[0]: M0 -> M1` and
/// `diffs[1]: M1 -> M0`. A curved Z/2 pair satisfies `d∘d = curvature · id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteComplex {
    ring: Arc<Ring>,
    grading: Grading,
    modules: Vec<FreeModule>,
    diffs: Vec<PolyMatrix>,
    shift: i64,
    curvature: Poly,
}

/// Result of [`check_complex`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub offense: Option<Offense>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Offense {
    pub position: i64,
    pub row: usize,
    pub col: usize,
    pub value: String,
}

impl FiniteComplex {
    pub fn new(
        ring: &Arc<Ring>,
        grading: Grading,
        modules: Vec<FreeModule>,
        diffs: Vec<PolyMatrix>,
        shift: i64,
    ) -> Result<FiniteComplex, HomError> {
        let cx = FiniteComplex::assemble(ring, grading, modules, diffs, shift, Poly::zero(ring))?;
        let report = check_complex(&cx);
        if let Some(o) = report.offense {
            return Err(HomError::NotAComplex(o));
        }
        Ok(cx)
    }

    /// Z/2-folded pair with `d∘d = curvature · id` (a matrix factorization when the curvature is nonzero).
    pub fn new_curved(
        ring: &Arc<Ring>,
        modules: [FreeModule; 2],
        diffs: [PolyMatrix; 2],
        shift: i64,
        curvature: Poly,
    ) -> Result<FiniteComplex, HomError> {
        let cx = FiniteComplex::assemble(
            ring,
            Grading::Z2,
            modules.to_vec(),
            diffs.to_vec(),
            shift,
            curvature,
        )?;
        let report = check_complex(&cx);
        if let Some(o) = report.offense {
            return Err(HomError::NotAComplex(o));
        }
        Ok(cx)
    }

    pub(crate) fn assemble(
        ring: &Arc<Ring>,
        grading: Grading,
        modules: Vec<FreeModule>,
        diffs: Vec<PolyMatrix>,
        shift: i64,
        curvature: Poly,
    ) -> Result<FiniteComplex, HomError> {
        let expected = match grading {
            Grading::Z { .. } => modules.len().saturating_sub(1),
            Grading::Z2 => {
                if modules.len() != 2 {
                    return Err(HomError::ShapeMismatch(
                        "Z/2 complexes have exactly two modules".into(),
                    ));
                }
                2
            }
        };
        if diffs.len() != expected {
            return Err(HomError::ShapeMismatch(format!(
                "expected {expected} differentials, got {}",
                diffs.len()
            )));
        }
        if !curvature.is_zero() && grading != Grading::Z2 {
            return Err(HomError::ShapeMismatch(
                "curvature requires Z/2 grading".into(),
            ));
        }
        let n = modules.len();
        for (k, d) in diffs.iter().enumerate() {
            let (s, t) = (&modules[k], &modules[(k + 1) % n]);
            if d.rows() != t.rank() || d.cols() != s.rank() {
                return Err(HomError::ShapeMismatch(format!(
                    "differential {k} has shape {}x{}",
                    d.rows(),
                    d.cols()
                )));
            }
            if !Ring::same(d.ring(), ring) {
                return Err(HomError::AmbientMismatch);
            }
            let pos = match grading {
                Grading::Z { lo } => lo + k as i64,
                Grading::Z2 => k as i64,
            };
            check_homogeneous(s, t, d, shift, pos)?;
        }
        Ok(FiniteComplex {
            ring: ring.clone(),
            grading,
            modules,
            diffs,
            shift,
            curvature,
        })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn curvature(&self) -> &Poly {
        &self.curvature
    }

    pub fn modules(&self) -> &[FreeModule] {
        &self.modules
    }

    pub fn diffs(&self) -> &[PolyMatrix] {
        &self.diffs
    }

    pub fn positions(&self) -> Vec<i64> {
        match self.grading {
            Grading::Z { lo } => (0..self.modules.len() as i64).map(|k| lo + k).collect(),
            Grading::Z2 => vec![0, 1],
        }
    }

    pub fn index_of(&self, pos: i64) -> Option<usize> {
        match self.grading {
            Grading::Z { lo } => {
                let k = pos - lo;
                (k >= 0 && (k as usize) < self.modules.len()).then_some(k as usize)
            }
            Grading::Z2 => Some(pos.rem_euclid(2) as usize),
        }
    }

    /// Module at a position; empty outside the support.
    pub fn module(&self, pos: i64) -> FreeModule {
        self.index_of(pos)
            .map(|k| self.modules[k].clone())
            .unwrap_or_default()
    }

    /// Differential leaving `pos`; a zero matrix of the right shape where none is stored.
    pub fn diff_from(&self, pos: i64) -> PolyMatrix {
        let src = self.module(pos);
        let tgt = self.module(pos + 1);
        match (self.grading, self.index_of(pos)) {
            (Grading::Z2, Some(k)) => self.diffs[k].clone(),
            (Grading::Z { .. }, Some(k)) if k < self.diffs.len() => self.diffs[k].clone(),
            _ => PolyMatrix::zero(&self.ring, tgt.rank(), src.rank()),
        }
    }

    pub fn total_rank(&self) -> usize {
        self.modules.iter().map(|m| m.rank()).sum()
    }

    pub fn has_zero_differential(&self) -> bool {
        self.diffs.iter().all(|d| d.is_zero())
    }

    pub fn is_curved(&self) -> bool {
        !self.curvature.is_zero()
    }
}

/// Check `d∘d = 0` (or `d∘d = w·id` for curved Z/2 pairs) entrywise with exact arithmetic.
pub fn check_complex(cx: &FiniteComplex) -> ValidationReport {
    let positions = cx.positions();
    for &p in &positions {
        let d1 = cx.diff_from(p);
        let d2 = cx.diff_from(p + 1);
        let mut comp = d2.mul(&d1);
        if cx.is_curved() {
            comp = comp.sub(&PolyMatrix::scalar_identity(&cx.curvature, comp.rows()));
        }
        for (i, j, e) in comp.entries() {
            if !e.is_zero() {
                return ValidationReport {
                    valid: false,
                    offense: Some(Offense {
                        position: p,
                        row: i,
                        col: j,
                        value: e.to_string(),
                    }),
                };
            }
        }
    }
    ValidationReport {
        valid: true,
        offense: None,
    }
}

/// Sorted subsets of `{0..n-1}` of size `k`, as sorted index lists in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn gen_weights(gs: &[Poly]) -> Result<Vec<i64>, HomError> {
    gs.iter()
        .map(|g| {
            g.weight()
                .or(if g.is_zero() { Some(0) } else { None })
                .ok_or(HomError::NotHomogeneous {
                    position: 0,
                    row: 0,
                    col: 0,
                    entry: g.to_string(),
                    expected: 0,
                })
        })
        .collect()
}

/// Koszul complex `Kos(g)`: `Λ^k` at position `-k`, contraction `e_i ↦ g_i`, weight preserving.
pub fn koszul(ring: &Arc<Ring>, gs: &[Poly]) -> Result<FiniteComplex, HomError> {
    let n = gs.len();
    let wts = gen_weights(gs)?;
    let layers: Vec<Vec<Vec<usize>>> = (0..=n).rev().map(|k| subsets(n, k)).collect();
    let modules: Vec<FreeModule> = layers
        .iter()
        .map(|l| FreeModule::new(l.iter().map(|s| s.iter().map(|&i| wts[i]).sum()).collect()))
        .collect();
    let mut diffs = Vec::new();
    for step in 0..n {
        let (src, tgt) = (&layers[step], &layers[step + 1]);
        let mut m = PolyMatrix::zero(ring, tgt.len(), src.len());
        for (j, s) in src.iter().enumerate() {
            for (pos, &i) in s.iter().enumerate() {
                let rest: Vec<usize> = s.iter().copied().filter(|&x| x != i).collect();
                let row = tgt.iter().position(|t| *t == rest).unwrap();
                let g = if pos % 2 == 0 {
                    gs[i].clone()
                } else {
                    gs[i].neg()
                };
                m.set(row, j, g);
            }
        }
        diffs.push(m);
    }
    FiniteComplex::new(ring, Grading::Z { lo: -(n as i64) }, modules, diffs, 0)
}

/// Dual Koszul complex `Kos*(g)`: `Λ^k` at position `k`, differential `e_I ↦ Σ g_i e_i ∧ e_I`.
/// Generator `e_I` has weight `-Σ_{i∈I} weight(g_i)`, so the complex is weight preserving and
/// `Kos*(g^l)` embeds into the Čech complex as `A·g^{-l}` in each localized factor.
pub fn koszul_dual(ring: &Arc<Ring>, gs: &[Poly]) -> Result<FiniteComplex, HomError> {
    let n = gs.len();
    let wts = gen_weights(gs)?;
    let layers: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| subsets(n, k)).collect();
    let modules: Vec<FreeModule> = layers
        .iter()
        .map(|l| {
            FreeModule::new(
                l.iter()
                    .map(|s| -s.iter().map(|&i| wts[i]).sum::<i64>())
                    .collect(),
            )
        })
        .collect();
    let mut diffs = Vec::new();
    for k in 0..n {
        let (src, tgt) = (&layers[k], &layers[k + 1]);
        let mut m = PolyMatrix::zero(ring, tgt.len(), src.len());
        for (j, s) in src.iter().enumerate() {
            for i in (0..n).filter(|i| !s.contains(i)) {
                let before = s.iter().filter(|&&x| x < i).count();
                let mut t = s.clone();
                t.push(i);
                t.sort_unstable();
                let row = tgt.iter().position(|u| *u == t).unwrap();
                m.set(
                    row,
                    j,
                    if before % 2 == 0 {
                        gs[i].clone()
                    } else {
                        gs[i].neg()
                    },
                );
            }
        }
        diffs.push(m);
    }
    FiniteComplex::new(ring, Grading::Z { lo: 0 }, modules, diffs, 0)
}
