use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::complex::{FiniteComplex, FreeModule};
use super::matrix::PolyMatrix;
use super::ops::strip_laurent;
use super::HomError;
use crate::exactalg::linalg::{self, SparseVec};
use crate::exactalg::{AlgError, Mono, Ring};

/// Per-slice cohomology dimensions on a weight window. Slices inside the window are always
/// present (zeros included); nothing outside it is recorded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    #[serde(serialize_with = "ser_entries")]
    pub entries: BTreeMap<(i64, i64), usize>,
    pub window: (i64, i64),
    pub complete: bool,
}

fn ser_entries<S: Serializer>(m: &BTreeMap<(i64, i64), usize>, s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Row {
        position: i64,
        weight: i64,
        dim: usize,
    }
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for (&(position, weight), &dim) in m {
        seq.serialize_element(&Row {
            position,
            weight,
            dim,
        })?;
    }
    seq.end()
}

impl CohomologyTable {
    pub fn get(&self, position: i64, weight: i64) -> Option<usize> {
        self.entries.get(&(position, weight)).copied()
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0
    }

    /// Nonzero entries only.
    pub fn support(&self) -> Vec<((i64, i64), usize)> {
        self.entries
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(&k, &d)| (k, d))
            .collect()
    }

    /// Sum over positions of a fixed parity, per weight.
    pub fn parity_totals(&self) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for (&(p, w), &d) in &self.entries {
            *out.entry((p.rem_euclid(2), w)).or_insert(0) += d;
        }
        out
    }

    /// Total dimensions `(even, odd)` over the whole window.
    pub fn even_odd(&self) -> (usize, usize) {
        let mut out = (0, 0);
        for (&(p, _), &d) in &self.entries {
            if p.rem_euclid(2) == 0 {
                out.0 += d;
            } else {
                out.1 += d;
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("position,weight,dim\n");
        for (&(p, w), d) in &self.entries {
            s.push_str(&format!("{p},{w},{d}\n"));
        }
        s
    }
}

/// Monomial basis `{mono · e_j}` of one weight slice of a free module.
#[derive(Clone, Debug)]
pub struct SliceBasis {
    pub elems: Vec<(usize, Mono)>,
}

impl SliceBasis {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn index(&self) -> HashMap<(usize, Mono), usize> {
        self.elems
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, e)| (e, k))
            .collect()
    }
}

/// Monomials of the given weight, optionally capped in total degree. Without a cap every
/// variable must have positive weight.
pub(crate) fn monomials(
    ring: &Ring,
    weight: i64,
    degree_bound: Option<i32>,
) -> Result<Vec<Mono>, AlgError> {
    let Some(bound) = degree_bound else {
        return ring.monomials_of_weight(weight);
    };
    if ring.laurent_index().is_some() {
        return Err(AlgError::InfiniteSlice(weight));
    }
    let n = ring.nvars();
    let mut out = Vec::new();
    let mut cur = vec![0i32; n];
    fn rec(r: &Ring, i: usize, left: i32, cur: &mut Vec<i32>, target: i64, out: &mut Vec<Mono>) {
        if i == cur.len() {
            if r.mono_weight(cur) == target {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(r, i + 1, left - e, cur, target, out);
        }
        cur[i] = 0;
    }
    rec(ring, 0, bound, &mut cur, weight, &mut out);
    Ok(out)
}

pub fn slice_basis(
    ring: &Ring,
    module: &FreeModule,
    weight: i64,
    degree_bound: Option<i32>,
) -> Result<SliceBasis, AlgError> {
    let mut elems = Vec::new();
    for (j, &w) in module.weights.iter().enumerate() {
        for m in monomials(ring, weight - w, degree_bound)? {
            elems.push((j, m));
        }
    }
    Ok(SliceBasis { elems })
}

/// Columns of `d` restricted to a source slice; rows are keyed through `rows`, which grows
/// as new target monomials appear.
pub(crate) fn slice_columns(
    d: &PolyMatrix,
    src: &SliceBasis,
    rows: &mut HashMap<(usize, Mono), usize>,
) -> Vec<SparseVec> {
    let one = d.ring().field.one();
    src.elems
        .iter()
        .map(|(j, mono)| {
            let mut col = Vec::new();
            for i in 0..d.rows() {
                let e = d.get(i, *j);
                if e.is_zero() {
                    continue;
                }
                for (m, c) in e.mul_term(mono, &one).into_terms() {
                    let next = rows.len();
                    let k = *rows.entry((i, m)).or_insert(next);
                    col.push((k, c));
                }
            }
            linalg::normalize(col)
        })
        .collect()
}

fn slice_rank(d: &PolyMatrix, src: &SliceBasis) -> usize {
    if src.is_empty() || d.rows() == 0 {
        return 0;
    }
    let mut rows = HashMap::new();
    linalg::rank(&slice_columns(d, src, &mut rows))
}

/// Cohomology dimensions on every position and every weight in `window` (inclusive).
/// A Laurent variable is set to one first; the result is then the Z/2-periodic picture.
pub fn cohomology_window(
    cx: &FiniteComplex,
    window: (i64, i64),
) -> Result<CohomologyTable, HomError> {
    if cx.is_curved() {
        return Err(HomError::Curved);
    }
    let cx = strip_laurent(cx);
    let ring = cx.ring().clone();
    let s = cx.shift();
    let (lo, hi) = window;
    let positions = cx.positions();
    // d_p is needed on source weights m - s for every window weight m, and m for outgoing.
    let mut jobs: Vec<(i64, i64)> = Vec::new();
    for &p in &positions {
        for m in lo..=hi {
            jobs.push((p, m));
            jobs.push((p - 1, m - s));
        }
    }
    jobs.sort_unstable();
    jobs.dedup();
    let ranks: HashMap<(i64, i64), usize> = jobs
        .par_iter()
        .map(|&(p, m)| -> Result<((i64, i64), usize), AlgError> {
            let d = cx.diff_from(p);
            let src = slice_basis(&ring, &cx.module(p), m, None)?;
            Ok(((p, m), slice_rank(&d, &src)))
        })
        .collect::<Result<_, _>>()?;
    let dims: Vec<((i64, i64), usize)> = positions
        .par_iter()
        .flat_map(|&p| (lo..=hi).into_par_iter().map(move |m| (p, m)))
        .map(|(p, m)| -> Result<((i64, i64), usize), AlgError> {
            let n = slice_basis(&ring, &cx.module(p), m, None)?.len();
            Ok(((p, m), n - ranks[&(p, m)] - ranks[&(p - 1, m - s)]))
        })
        .collect::<Result<_, _>>()?;
    Ok(CohomologyTable {
        entries: dims.into_iter().collect(),
        window,
        complete: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, Field, Poly, Var};
    use crate::homcx::complex::{koszul, Grading};
    use std::sync::Arc;

    fn qx(w: i32) -> Arc<Ring> {
        Ring::new(Field::Rational, vec![Var::new("x", 0, w)]).unwrap()
    }

    fn two_term(r: &Arc<Ring>, f: &str, shift: i64) -> FiniteComplex {
        let m = PolyMatrix::from_rows(r, vec![vec![parse_poly(r, f).unwrap()]], 1);
        FiniteComplex::new(
            r,
            Grading::Z { lo: 0 },
            vec![FreeModule::new(vec![0]), FreeModule::new(vec![0])],
            vec![m],
            shift,
        )
        .unwrap()
    }

    #[test]
    fn multiplication_by_x() {
        let r = qx(2);
        let t = cohomology_window(&two_term(&r, "x", 2), (-2, 6)).unwrap();
        assert_eq!(t.support(), vec![((1, 0), 1)]);
        assert_eq!(t.get(1, -4), None);
        assert_eq!(t.get(0, 4), Some(0));
    }

    #[test]
    fn multiplication_by_x_squared() {
        let r = qx(2);
        let t = cohomology_window(&two_term(&r, "x^2", 4), (0, 8)).unwrap();
        assert_eq!(t.support(), vec![((1, 0), 1), ((1, 2), 1)]);
    }

    #[test]
    fn koszul_of_x_matches_quotient() {
        let r = qx(2);
        let k = koszul(&r, &[Poly::var(&r, 0)]).unwrap();
        let t = cohomology_window(&k, (-4, 4)).unwrap();
        // Λ^1 sits at position -1 with weight 2, so H^0 = Q[x]/(x) at weight 0.
        assert_eq!(t.support(), vec![((0, 0), 1)]);
    }

    #[test]
    fn zero_differential_counts_slices() {
        let r = Ring::new(
            Field::Rational,
            vec![Var::new("x", 0, 1), Var::new("y", 0, 1)],
        )
        .unwrap();
        let z = PolyMatrix::zero(&r, 1, 2);
        let cx = FiniteComplex::new(
            &r,
            Grading::Z { lo: 0 },
            vec![FreeModule::new(vec![0, 1]), FreeModule::new(vec![3])],
            vec![z],
            0,
        )
        .unwrap();
        let t = cohomology_window(&cx, (0, 4)).unwrap();
        for m in 0..=4 {
            assert_eq!(t.get(0, m).unwrap(), (m + 1) as usize + m as usize);
            assert_eq!(
                t.get(1, m).unwrap(),
                if m >= 3 { (m - 2) as usize } else { 0 }
            );
        }
        assert!(t.to_csv().starts_with("position,weight,dim\n0,0,1\n"));
    }

    #[test]
    fn infinite_slice_is_an_error() {
        let r = qx(0);
        let cx = two_term(&r, "x", 0);
        assert!(matches!(
            cohomology_window(&cx, (0, 0)),
            Err(HomError::Alg(AlgError::InfiniteSlice(_)))
        ));
    }
}
