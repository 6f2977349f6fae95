use std::collections::HashMap;

use super::cohomology::{slice_basis, slice_columns};
use super::complex::FiniteComplex;
use super::ops::{hom_complex, hom_differential, strip_laurent, strip_map, ChainMap};
use super::HomError;
use crate::exactalg::linalg;
use crate::exactalg::{Mono, Poly};

/// A verified solution of `d∘h + h∘d = target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    pub h: ChainMap,
    pub degree_bound: i32,
}

/// Solve `∂h = target` for `h` of degree -1 with entries of total degree at most
/// `degree_bound`. `Ok(None)` means no solution within the bound. A Laurent variable is set
/// to one first, and the returned `h` lives over the stripped ring.
pub fn find_null_homotopy(
    cx: &FiniteComplex,
    target: &ChainMap,
    degree_bound: i32,
) -> Result<Option<Homotopy>, HomError> {
    let stripped = strip_laurent(cx);
    let target = if cx.ring().laurent_index().is_some() {
        strip_map(target, stripped.ring())
    } else {
        target.clone()
    };
    let cx = stripped;
    if target.degree != 0 {
        return Err(HomError::NotChainMap(format!(
            "target has degree {}",
            target.degree
        )));
    }
    if !hom_differential(&cx, &cx, &target).is_zero() {
        return Err(HomError::NotACycle);
    }
    let ring = cx.ring().clone();
    let hom = hom_complex(&cx, &cx)?;
    let hcx = &hom.complex;
    let h_shift = target.shift - cx.shift();
    let basis = slice_basis(&ring, &hcx.module(-1), h_shift, Some(degree_bound))?;
    let d = hcx.diff_from(-1);
    let mut rows: HashMap<(usize, Mono), usize> = HashMap::new();
    let cols = slice_columns(&d, &basis, &mut rows);
    let mut rhs = Vec::new();
    for (i, p) in hom.pack(&target).into_iter().enumerate() {
        for (m, c) in p.into_terms() {
            let next = rows.len();
            let k = *rows.entry((i, m)).or_insert(next);
            rhs.push((k, c));
        }
    }
    let rhs = linalg::normalize(rhs);
    let Some(x) = linalg::solve(&ring.field, &cols, &rhs) else {
        return Ok(None);
    };
    let mut coords: Vec<Vec<(Mono, crate::exactalg::Scalar)>> =
        vec![Vec::new(); hcx.module(-1).rank()];
    for (k, c) in x.into_iter().enumerate() {
        if !c.is_zero() {
            let (j, m) = &basis.elems[k];
            coords[*j].push((m.clone(), c));
        }
    }
    let v: Vec<Poly> = coords
        .into_iter()
        .map(|t| Poly::from_terms(&ring, t))
        .collect();
    let h = hom.unpack(-1, h_shift, &v);
    let check = hom_differential(&cx, &cx, &h);
    assert!(
        check.components == target.components,
        "homotopy failed exact verification"
    );
    Ok(Some(Homotopy { h, degree_bound }))
}
