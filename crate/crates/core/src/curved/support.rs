use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{CurvedAlgebra, CurvedError, CurvedModule};
use crate::derham::nonreg_locus;
use crate::exactalg::{AlgError, Poly, Ring, Scalar};
use crate::homcx::{
    cohomology_window, find_null_homotopy, hom_complex, strip_laurent, ChainMap, FiniteComplex,
    FreeModule, PolyMatrix,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SupportCertificate {
    /// The fiber of `End(X)` at `point` has nonzero homology.
    In {
        point: BTreeMap<String, String>,
        even: usize,
        odd: usize,
    },
    /// `d∘h + h∘d = g^m · id`, with `h` written out in full over the Laurent-stripped ring.
    Out {
        g: String,
        m: u32,
        h: Vec<Vec<String>>,
    },
}

impl SupportCertificate {
    /// Re-check an OUT certificate by plain matrix multiplication against `X`'s differential.
    pub fn verify(&self, x: &CurvedModule) -> Result<bool, CurvedError> {
        let SupportCertificate::Out { g, m, h } = self else {
            return Ok(true);
        };
        let ring = x.algebra().stripped_ring();
        let parse = |s: &str| crate::exactalg::parse_poly(&ring, s);
        let d = x
            .differential()
            .map_into(&ring, |p| x.algebra().stripped(p));
        let rows = h
            .iter()
            .map(|r| r.iter().map(|e| parse(e)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let hm = PolyMatrix::from_rows(&ring, rows, x.rank());
        let gm = parse(g)?.pow(*m);
        Ok(d.mul(&hm).add(&hm.mul(&d)) == PolyMatrix::scalar_identity(&gm, x.rank()))
    }
}

/// Search `m = 1..=max_m` for a homotopy with `∂h = g^m · id`. `Ok(None)` is not a proof that
/// no such `h` exists: only the stated bounds were explored.
pub fn support_exclude(
    x: &CurvedModule,
    g: &Poly,
    max_m: u32,
    degree_bound: i32,
) -> Result<Option<SupportCertificate>, CurvedError> {
    if g.is_zero() {
        return Err(CurvedError::Alg(AlgError::ZeroDivisorInput));
    }
    let alg = x.algebra();
    let cx = strip_laurent(&x.to_complex());
    let g = alg.stripped(g);
    if g.weight().is_none() {
        return Err(CurvedError::NotHomogeneous(g.to_string()));
    }
    let found =
        (1..=max_m)
            .into_par_iter()
            .map(|m| -> Result<Option<(u32, ChainMap)>, CurvedError> {
                let target = ChainMap::scalar(&cx, &g.pow(m));
                Ok(find_null_homotopy(&cx, &target, degree_bound)?.map(|h| (m, h.h)))
            });
    let mut results: Vec<Result<Option<(u32, ChainMap)>, CurvedError>> = found.collect();
    let mut best = None;
    for r in results.drain(..) {
        if let Some((m, h)) = r? {
            if best.as_ref().is_none_or(|(bm, _)| m < *bm) {
                best = Some((m, h));
            }
        }
    }
    Ok(best.map(|(m, h)| SupportCertificate::Out {
        g: g.to_string(),
        m,
        h: x.assemble_endomorphism(&h.components, -1).strings(),
    }))
}

/// Homology of the fiber of `End(X)` at a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointHomology {
    pub even: usize,
    pub odd: usize,
    pub certificate: Option<SupportCertificate>,
}

/// Specialize `X` at `point` (Laurent variable at one unless given) and compute the Z/2
/// homology of `End(X) ⊗ k(point)`.
pub fn support_include(
    x: &CurvedModule,
    point: &BTreeMap<String, Scalar>,
) -> Result<PointHomology, CurvedError> {
    let alg = x.algebra();
    let ring = alg.ring();
    let field = &ring.field;
    let mut coords = Vec::new();
    for v in &ring.vars {
        let c = match point.get(&v.name) {
            Some(c) => {
                if !field.contains(c) {
                    return Err(CurvedError::Alg(AlgError::CharacteristicMismatch(
                        field.characteristic(),
                        c.characteristic(),
                    )));
                }
                c.clone()
            }
            None if v.laurent => field.one(),
            None => return Err(CurvedError::Alg(AlgError::UnknownVariable(v.name.clone()))),
        };
        coords.push(c);
    }
    let pt_ring = Ring::new(field.clone(), vec![])?;
    let eval = |p: &Poly| Poly::constant(&pt_ring, p.evaluate(&coords));
    let cx = x.to_complex();
    let modules = [0, 1].map(|e| FreeModule::new(vec![0; cx.module(e).rank()]));
    let diffs = [0, 1].map(|e| cx.diffs()[e].map_into(&pt_ring, eval));
    let fiber = FiniteComplex::new_curved(&pt_ring, modules, diffs, 0, eval(alg.w()))?;
    let end = hom_complex(&fiber, &fiber)?;
    let h = cohomology_window(&end.complex, (0, 0))?;
    let (even, odd) = (h.get(0, 0).unwrap_or(0), h.get(1, 0).unwrap_or(0));
    let certificate = (even + odd > 0).then(|| SupportCertificate::In {
        point: ring
            .vars
            .iter()
            .zip(&coords)
            .map(|(v, c)| (v.name.clone(), c.to_string()))
            .collect(),
        even,
        odd,
    });
    Ok(PointHomology {
        even,
        odd,
        certificate,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub applicable: bool,
    pub nonreg: Vec<String>,
    pub contractible: Option<bool>,
    pub agrees_with_lemma: Option<bool>,
    pub note: String,
}

/// When `A/(w)` is regular every perfect curved module should be contractible; test this on
/// `sample` with a `g = 1` homotopy search.
pub fn regular_triviality_probe(
    alg: &CurvedAlgebra,
    sample: &CurvedModule,
    degree_bound: i32,
) -> Result<ProbeReport, CurvedError> {
    if alg.w().is_zero() {
        return Ok(ProbeReport {
            applicable: false,
            nonreg: vec![],
            contractible: None,
            agrees_with_lemma: None,
            note: "precondition failed: w = 0 is a zero divisor".into(),
        });
    }
    let nonreg = match nonreg_locus(alg) {
        Ok(i) => i,
        Err(e) => {
            return Ok(ProbeReport {
                applicable: false,
                nonreg: vec![],
                contractible: None,
                agrees_with_lemma: None,
                note: format!("precondition failed: {e}"),
            })
        }
    };
    let strings = nonreg.strings();
    let unit = nonreg
        .gens()
        .iter()
        .any(|g| g.is_constant() && !g.is_zero());
    if !unit {
        return Ok(ProbeReport {
            applicable: false,
            nonreg: strings,
            contractible: None,
            agrees_with_lemma: None,
            note: "Nonreg is not the unit ideal; the triviality statement does not apply".into(),
        });
    }
    let one = Poly::one(alg.ring());
    let cert = support_exclude(sample, &one, 1, degree_bound)?;
    let contractible = cert.is_some();
    Ok(ProbeReport {
        applicable: true,
        nonreg: strings,
        contractible: Some(contractible),
        agrees_with_lemma: Some(contractible),
        note: if contractible {
            "identity is null-homotopic".into()
        } else {
            "no homotopy within the degree bound".into()
        },
    })
}
