use std::collections::VecDeque;

use serde::Serialize;

use super::{CurvedAlgebra, CurvedError, Ground};
use crate::exactalg::{Poly, Ring, Var};
use crate::homcx::{complex_to_json, subsets, ComplexJson, FiniteComplex, FreeModule, PolyMatrix};

/// A perfect curved module: free on generators of the given cohomological degrees, with an
/// odd differential `d` satisfying `d² = w · id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvedModule {
    alg: CurvedAlgebra,
    degrees: Vec<i64>,
    weights: Vec<i64>,
    d: PolyMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvedModuleJson {
    pub degrees: Vec<i64>,
    pub complex: ComplexJson,
}

impl CurvedModule {
    /// Generator weights are solved from the entries (each connected block anchored at 0).
    pub fn new(
        alg: &CurvedAlgebra,
        degrees: Vec<i64>,
        d: PolyMatrix,
    ) -> Result<CurvedModule, CurvedError> {
        validate(alg, &degrees, &d)?;
        let weights = solve_weights(alg, &d)?;
        CurvedModule::with_weights(alg, degrees, weights, d)
    }

    pub fn with_weights(
        alg: &CurvedAlgebra,
        degrees: Vec<i64>,
        weights: Vec<i64>,
        d: PolyMatrix,
    ) -> Result<CurvedModule, CurvedError> {
        validate(alg, &degrees, &d)?;
        if weights.len() != degrees.len() {
            return Err(CurvedError::Shape(format!(
                "{} weights for {} generators",
                weights.len(),
                degrees.len()
            )));
        }
        let delta = alg.delta();
        for (i, j, e) in d.entries() {
            if !e.is_zero() && e.weight() != Some(weights[j] - weights[i] + delta) {
                return Err(CurvedError::NotHomogeneous(format!(
                    "entry ({i},{j}) = {e}"
                )));
            }
        }
        Ok(CurvedModule {
            alg: alg.clone(),
            degrees,
            weights,
            d,
        })
    }

    pub fn zero(alg: &CurvedAlgebra) -> CurvedModule {
        CurvedModule {
            alg: alg.clone(),
            degrees: vec![],
            weights: vec![],
            d: PolyMatrix::zero(alg.ring(), 0, 0),
        }
    }

    pub fn algebra(&self) -> &CurvedAlgebra {
        &self.alg
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn differential(&self) -> &PolyMatrix {
        &self.d
    }

    /// Generator indices of each parity, in order.
    pub fn parity_blocks(&self) -> [Vec<usize>; 2] {
        [0, 1].map(|e| {
            (0..self.rank())
                .filter(|&i| self.degrees[i].rem_euclid(2) == e)
                .collect()
        })
    }

    /// The Z/2-folded complex (even generators, odd generators) with curvature `w`.
    pub fn to_complex(&self) -> FiniteComplex {
        let ring = self.alg.ring();
        let blocks = self.parity_blocks();
        let modules =
            [0, 1].map(|e| FreeModule::new(blocks[e].iter().map(|&i| self.weights[i]).collect()));
        let diffs = [0, 1].map(|e| {
            let (src, tgt) = (&blocks[e], &blocks[1 - e]);
            let mut m = PolyMatrix::zero(ring, tgt.len(), src.len());
            for (a, &i) in tgt.iter().enumerate() {
                for (b, &j) in src.iter().enumerate() {
                    m.set(a, b, self.d.get(i, j).clone());
                }
            }
            m
        });
        FiniteComplex::new_curved(ring, modules, diffs, self.alg.delta(), self.alg.w().clone())
            .expect("a validated curved module is a valid curved pair")
    }

    /// Place the two parity components of a Z/2 endomorphism back into one square matrix.
    pub fn assemble_endomorphism(&self, components: &[PolyMatrix], degree: i64) -> PolyMatrix {
        let ring = components
            .first()
            .map(|c| c.ring().clone())
            .unwrap_or_else(|| self.alg.ring().clone());
        let blocks = self.parity_blocks();
        let mut out = PolyMatrix::zero(&ring, self.rank(), self.rank());
        for e in 0..2 {
            let (src, tgt) = (&blocks[e], &blocks[(e + degree.rem_euclid(2) as usize) % 2]);
            for (a, &i) in tgt.iter().enumerate() {
                for (b, &j) in src.iter().enumerate() {
                    out.set(i, j, components[e].get(a, b).clone());
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> CurvedModuleJson {
        CurvedModuleJson {
            degrees: self.degrees.clone(),
            complex: complex_to_json(&self.to_complex()),
        }
    }
}

/// Shape, odd degree and `d² = w·id`.
fn validate(alg: &CurvedAlgebra, degrees: &[i64], d: &PolyMatrix) -> Result<(), CurvedError> {
    let r = degrees.len();
    if d.rows() != r || d.cols() != r {
        return Err(CurvedError::Shape(format!(
            "{} generators, {}x{} differential",
            r,
            d.rows(),
            d.cols()
        )));
    }
    if !Ring::same(d.ring(), alg.ring()) {
        return Err(CurvedError::GroundRingMismatch);
    }
    for (i, j, e) in d.entries() {
        if !e.is_zero() && e.degree() != Some(degrees[j] + 1 - degrees[i]) {
            return Err(CurvedError::OddnessViolation {
                row: i,
                col: j,
                entry: e.to_string(),
            });
        }
    }
    let residual = d.mul(d).sub(&PolyMatrix::scalar_identity(alg.w(), r));
    if !residual.is_zero() {
        return Err(CurvedError::CurvatureMismatch(residual.strings()));
    }
    Ok(())
}

fn solve_weights(alg: &CurvedAlgebra, d: &PolyMatrix) -> Result<Vec<i64>, CurvedError> {
    let r = d.rows();
    let delta = alg.delta();
    let mut w: Vec<Option<i64>> = vec![None; r];
    for start in 0..r {
        if w[start].is_some() {
            continue;
        }
        w[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(k) = queue.pop_front() {
            let wk = w[k].unwrap();
            // column k: entry (i, k) has weight w_k - w_i + δ; row k: entry (k, j) has w_j - w_k + δ
            let mut implied = Vec::new();
            for i in 0..r {
                if let Some(e) = nonzero(d.get(i, k)) {
                    implied.push((i, wk + delta - weight_of(e)?));
                }
                if let Some(e) = nonzero(d.get(k, i)) {
                    implied.push((i, weight_of(e)? + wk - delta));
                }
            }
            for (i, v) in implied {
                match w[i] {
                    None => {
                        w[i] = Some(v);
                        queue.push_back(i);
                    }
                    Some(x) if x != v => {
                        return Err(CurvedError::NotHomogeneous(format!(
                            "generator {i}: {x} vs {v}"
                        )))
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(w.into_iter().map(|x| x.unwrap()).collect())
}

fn nonzero(p: &Poly) -> Option<&Poly> {
    (!p.is_zero()).then_some(p)
}

fn weight_of(p: &Poly) -> Result<i64, CurvedError> {
    p.weight()
        .ok_or_else(|| CurvedError::NotHomogeneous(p.to_string()))
}

/// The Koszul curved module `(Λ(e_1..e_n), d + u)`: `d` contracts `e_i ↦ x_i`, `u` is left
/// multiplication by `Σ e_i y_i`. Basis: subsets of `{1..n}` by size, then lexicographically.
pub fn koszul_curved(
    alg: &CurvedAlgebra,
    xs: &[Poly],
    ys: &[Poly],
) -> Result<CurvedModule, CurvedError> {
    if xs.len() != ys.len() {
        return Err(CurvedError::Shape("xs and ys differ in length".into()));
    }
    let ring = alg.ring();
    let sum = xs
        .iter()
        .zip(ys)
        .fold(Poly::zero(ring), |acc, (x, y)| acc.add(&x.mul(y)));
    if &sum != alg.w() {
        return Err(CurvedError::CurvatureDecompositionInvalid(sum.to_string()));
    }
    let n = xs.len();
    let delta = alg.delta();
    let mut e_deg = Vec::new();
    let mut e_wt = Vec::new();
    for (x, y) in xs.iter().zip(ys) {
        let (dg, wt) = if !x.is_zero() {
            (x.degree(), x.weight().map(|w| w - delta))
        } else if !y.is_zero() {
            (y.degree().map(|d| 2 - d), y.weight().map(|w| delta - w))
        } else {
            (Some(1), Some(0))
        };
        match (dg, wt) {
            (Some(dg), Some(wt)) => {
                e_deg.push(dg - 1);
                e_wt.push(wt);
            }
            _ => return Err(CurvedError::NotHomogeneous(format!("{x} / {y}"))),
        }
    }
    let basis: Vec<Vec<usize>> = (0..=n).flat_map(|k| subsets(n, k)).collect();
    let index = |s: &[usize]| basis.iter().position(|b| b == s).unwrap();
    let mut d = PolyMatrix::zero(ring, basis.len(), basis.len());
    for (col, s) in basis.iter().enumerate() {
        for (pos, &i) in s.iter().enumerate() {
            let rest: Vec<usize> = s.iter().copied().filter(|&k| k != i).collect();
            let term = if pos % 2 == 0 {
                xs[i].clone()
            } else {
                xs[i].neg()
            };
            d.add_at(index(&rest), col, &term);
        }
        for i in (0..n).filter(|i| !s.contains(i)) {
            let before = s.iter().filter(|&&k| k < i).count();
            let mut t = s.clone();
            t.push(i);
            t.sort_unstable();
            let term = if before % 2 == 0 {
                ys[i].clone()
            } else {
                ys[i].neg()
            };
            d.add_at(index(&t), col, &term);
        }
    }
    let degrees = basis
        .iter()
        .map(|s| s.iter().map(|&i| e_deg[i]).sum())
        .collect();
    let weights = basis
        .iter()
        .map(|s| s.iter().map(|&i| e_wt[i]).sum())
        .collect();
    CurvedModule::with_weights(alg, degrees, weights, d)
}

/// `A ⊗_k A` with curvature `w ⊗ 1 - 1 ⊗ w`. Relative variables get primed copies appended;
/// ground variables (including the Laurent one) are shared.
pub fn enveloping(alg: &CurvedAlgebra) -> Result<(CurvedAlgebra, Vec<usize>), CurvedError> {
    let ring = alg.ring();
    let mut vars = ring.vars.clone();
    let mut second: Vec<usize> = (0..ring.nvars()).collect();
    for i in alg.relative_vars() {
        let v = &ring.vars[i];
        second[i] = vars.len();
        vars.push(Var {
            name: format!("{}'", v.name),
            ..v.clone()
        });
    }
    let env = Ring::with_order(ring.field.clone(), vars, ring.order)?;
    let first: Vec<Option<usize>> = (0..ring.nvars()).map(Some).collect();
    let second_map: Vec<Option<usize>> = second.iter().map(|&j| Some(j)).collect();
    let w1 = alg.w().map_into(&env, &first)?;
    let w2 = alg.w().map_into(&env, &second_map)?;
    let ground = match alg.ground() {
        Ground::Polynomial(ns) => Ground::Polynomial(ns.clone()),
        g => g.clone(),
    };
    Ok((CurvedAlgebra::new(&env, ground, w1.sub(&w2))?, second))
}

/// `ψ(X, Y) = X ⊗_k Y*` over the enveloping algebra, with `Y` moved to the primed variables.
/// Generator `(a, b)` sits at index `a * rank(Y) + b`.
pub fn psi_tensor(x: &CurvedModule, y: &CurvedModule) -> Result<CurvedModule, CurvedError> {
    if x.alg != y.alg {
        return Err(CurvedError::GroundRingMismatch);
    }
    let (env, second) = enveloping(&x.alg)?;
    let ring = env.ring().clone();
    let first: Vec<Option<usize>> = (0..x.alg.ring().nvars()).map(Some).collect();
    let second: Vec<Option<usize>> = second.into_iter().map(Some).collect();
    let dx = x.d.map_into(&ring, |p| {
        p.map_into(&ring, &first).expect("all variables mapped")
    });
    let dy = y.d.map_into(&ring, |p| {
        p.map_into(&ring, &second).expect("all variables mapped")
    });
    // d_{Y*}(e_j*) = -(-1)^{|e_j|} Σ_k d_Y[j][k] e_k*
    let mut dual = dy.transpose();
    for j in 0..y.rank() {
        let neg = y.degrees[j].rem_euclid(2) == 0;
        for k in 0..y.rank() {
            let e = dual.get(k, j).clone();
            dual.set(k, j, if neg { e.neg() } else { e });
        }
    }
    let (rx, ry) = (x.rank(), y.rank());
    let mut d = dx.kron(&PolyMatrix::identity(&ring, ry));
    for a in 0..rx {
        let neg = x.degrees[a].rem_euclid(2) == 1;
        let block = dual.signed(neg);
        for b in 0..ry {
            for c in 0..ry {
                d.add_at(a * ry + b, a * ry + c, block.get(b, c));
            }
        }
    }
    let mut degrees = Vec::new();
    let mut weights = Vec::new();
    for a in 0..rx {
        for b in 0..ry {
            degrees.push(x.degrees[a] - y.degrees[b]);
            weights.push(x.weights[a] - y.weights[b]);
        }
    }
    CurvedModule::with_weights(&env, degrees, weights, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, Field};

    pub(crate) fn alg(vars: &[(&str, i32)], w: &str) -> CurvedAlgebra {
        let mut vs: Vec<Var> = vars.iter().map(|(n, wt)| Var::new(n, 0, *wt)).collect();
        vs.push(Var::laurent("t", 2));
        let r = Ring::new(Field::Rational, vs).unwrap();
        CurvedAlgebra::new(&r, Ground::Laurent, parse_poly(&r, w).unwrap()).unwrap()
    }

    fn m(a: &CurvedAlgebra, rows: &[&[&str]]) -> PolyMatrix {
        let r = a.ring();
        let n = rows[0].len();
        PolyMatrix::from_rows(
            r,
            rows.iter()
                .map(|row| row.iter().map(|s| parse_poly(r, s).unwrap()).collect())
                .collect(),
            n,
        )
    }

    #[test]
    fn constructor_examples() {
        let a = alg(&[("x", 1)], "x^2*t");
        let k = CurvedModule::new(&a, vec![0, 1], m(&a, &[&["0", "x*t"], &["x", "0"]])).unwrap();
        assert_eq!(k.weights(), &[0, 0]);
        let bad = CurvedModule::new(&a, vec![0, 1], m(&a, &[&["0", "t"], &["x", "0"]]));
        let Err(CurvedError::CurvatureMismatch(res)) = bad else {
            panic!("{bad:?}")
        };
        assert_eq!(
            res,
            vec![
                vec!["-x^2*t + x*t".to_string(), "0".into()],
                vec!["0".into(), "-x^2*t + x*t".into()]
            ]
        );
        let odd = CurvedModule::new(&a, vec![0, 0], m(&a, &[&["0", "x*t"], &["x", "0"]]));
        assert!(matches!(odd, Err(CurvedError::OddnessViolation { .. })));
        let dg = alg(&[("x", 1)], "0");
        assert!(CurvedModule::new(&dg, vec![0], m(&dg, &[&["0"]])).is_ok());
    }

    #[test]
    fn koszul_matches_matrix_form() {
        let a = alg(&[("x", 1)], "x^2*t");
        let k = koszul_curved(
            &a,
            &[parse_poly(a.ring(), "x").unwrap()],
            &[parse_poly(a.ring(), "x*t").unwrap()],
        )
        .unwrap();
        // basis (1, e): 1 ↦ xt·e, e ↦ x·1
        assert_eq!(k.differential(), &m(&a, &[&["0", "x"], &["x*t", "0"]]));
        assert_eq!(k.degrees(), &[0, -1]);
        // in the basis (e, 1), shifted so e sits in degree 0, this is [[0, xt], [x, 0]]
        let swap = m(&a, &[&["0", "1"], &["1", "0"]]);
        let shown =
            CurvedModule::new(&a, vec![0, 1], swap.mul(k.differential()).mul(&swap)).unwrap();
        assert_eq!(shown.differential(), &m(&a, &[&["0", "x*t"], &["x", "0"]]));
    }

    #[test]
    fn koszul_rank_four() {
        let a = alg(&[("x", 1), ("y", 1)], "(x^2+y^2)*t");
        let p = |s| parse_poly(a.ring(), s).unwrap();
        let k = koszul_curved(&a, &[p("x"), p("y")], &[p("x*t"), p("y*t")]).unwrap();
        assert_eq!(k.rank(), 4);
        assert_eq!(
            k.differential().mul(k.differential()),
            PolyMatrix::scalar_identity(a.w(), 4)
        );
        let err = koszul_curved(&a, &[p("x")], &[p("x*t")]);
        assert!(matches!(
            err,
            Err(CurvedError::CurvatureDecompositionInvalid(_))
        ));
        let one = koszul_curved(&a, &[a.w().clone()], &[p("1")]).unwrap();
        assert_eq!(one.rank(), 2);
    }

    #[test]
    fn enveloping_and_psi() {
        let a = alg(&[("x", 1)], "x^2*t");
        let (env, _) = enveloping(&a).unwrap();
        assert_eq!(env.w(), &parse_poly(env.ring(), "x^2*t - x'^2*t").unwrap());
        let k = koszul_curved(
            &a,
            &[parse_poly(a.ring(), "x").unwrap()],
            &[parse_poly(a.ring(), "x*t").unwrap()],
        )
        .unwrap();
        let psi = psi_tensor(&k, &k).unwrap();
        assert_eq!(psi.rank(), 4);
        assert_eq!(
            psi.differential().mul(psi.differential()),
            PolyMatrix::scalar_identity(psi.algebra().w(), 4)
        );
        let z = psi_tensor(&k, &CurvedModule::zero(&a)).unwrap();
        assert_eq!(z.rank(), 0);
    }
}
