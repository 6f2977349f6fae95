//! Local cohomology `RΓ_Z` of cyclic cohomology presentations, Čech and Koszul-limit models,
//! and the homological-smoothness test for `mf(Q, f)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::derham::{milnor_data, DerhamError, TwistedDeRham};
use crate::exactalg::{
    buchberger, express_in, jacobian_ideal, normal_form, quotient_dimension, saturate,
    saturate_ideal, AlgError, IdealBasis, MonomialOrder, Poly, QuotientDimension, Ring,
};
use crate::homcx::{
    cohomology_window, koszul_dual, strip_laurent, subsets, tensor, CohomologyTable, FiniteComplex,
    HomError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error("cohomology is not presented as one cyclic module per parity: {0}")]
    NonCyclicPresentation(String),
    #[error("ground field {0} is not perfect")]
    ImperfectGroundField(String),
    #[error("{0} is a unit")]
    UnitInput(String),
    #[error(transparent)]
    Derham(#[from] DerhamError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// Cohomology given as `Q/I_p` in each parity `p` (absent parities are zero). Weights are
/// the coefficient weights of `Q`.
#[derive(Clone, Debug)]
pub struct CyclicPresentation {
    pub ring: Arc<Ring>,
    pub pieces: BTreeMap<i64, IdealBasis>,
}

impl CyclicPresentation {
    pub fn new(
        ring: &Arc<Ring>,
        pieces: Vec<(i64, IdealBasis)>,
    ) -> Result<CyclicPresentation, LocalError> {
        let mut map = BTreeMap::new();
        for (p, i) in pieces {
            if !Ring::same(i.ring(), ring) {
                return Err(AlgError::MixedAmbient.into());
            }
            if map.insert(p.rem_euclid(2), i).is_some() {
                return Err(LocalError::NonCyclicPresentation(format!(
                    "two summands in parity {}",
                    p.rem_euclid(2)
                )));
            }
        }
        Ok(CyclicPresentation {
            ring: ring.clone(),
            pieces: map,
        })
    }

    /// Per-(parity, weight) dimensions of the presented module on `window`.
    pub fn dims(&self, window: (i64, i64)) -> Result<BTreeMap<(i64, i64), usize>, LocalError> {
        let mut out = BTreeMap::new();
        for p in 0..2 {
            for w in window.0..=window.1 {
                out.insert((p, w), 0);
            }
        }
        for (&p, ideal) in &self.pieces {
            let gb = buchberger(ideal, MonomialOrder::Grevlex)?;
            let q = quotient_dimension(&gb, Some(window))?;
            for (&w, &d) in q.hilbert() {
                if (window.0..=window.1).contains(&w) {
                    out.insert((p, w), d);
                }
            }
        }
        Ok(out)
    }
}

/// The cyclic presentation of twisted de Rham cohomology, over the Laurent-stripped ring.
/// Available when the partials form a regular sequence (`Q/J` in parity `n`) or when
/// `dw = 0` in one variable (`Q` in both parities).
pub fn presentation_from_derham(tdr: &TwistedDeRham) -> Result<CyclicPresentation, LocalError> {
    let alg = &tdr.alg;
    let ring = alg.stripped_ring();
    let n = tdr.relative.len() as i64;
    let milnor = milnor_data(alg, None)?;
    if milnor.regular_sequence {
        let gens = milnor
            .groebner
            .iter()
            .map(|s| crate::exactalg::parse_poly(&ring, s))
            .collect::<Result<Vec<_>, _>>()?;
        return CyclicPresentation::new(&ring, vec![(n, IdealBasis::new(&ring, gens)?)]);
    }
    if tdr.dw.is_zero() && n <= 1 {
        let pieces = (0..=n).map(|q| (q, IdealBasis::zero(&ring))).collect();
        return CyclicPresentation::new(&ring, pieces);
    }
    Err(LocalError::NonCyclicPresentation(
        "neither a regular sequence nor a one-variable zero differential".into(),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    FinitelyGenerated,
    NotFinitelyGenerated,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RGammaTable {
    /// `parity -> weight -> dim`; empty when the verdict is undetermined.
    pub dims: BTreeMap<i64, BTreeMap<i64, usize>>,
    pub window: (i64, i64),
    /// Weights are multiples of this unit: 1 except on the univariate Laurent path, where they
    /// count powers of the variable.
    pub weight_unit: i64,
    pub verdict: Verdict,
    pub path: String,
    /// `(I_p : f^∞)` per parity.
    pub saturations: BTreeMap<i64, Vec<String>>,
    pub witness: Option<String>,
}

impl RGammaTable {
    pub fn get(&self, parity: i64, weight: i64) -> Option<usize> {
        self.dims.get(&parity.rem_euclid(2))?.get(&weight).copied()
    }

    pub fn total(&self) -> (usize, usize) {
        let sum = |p: i64| self.dims.get(&p).map_or(0, |m| m.values().sum());
        (sum(0), sum(1))
    }
}

fn nest(flat: BTreeMap<(i64, i64), usize>) -> BTreeMap<i64, BTreeMap<i64, usize>> {
    let mut out: BTreeMap<i64, BTreeMap<i64, usize>> = BTreeMap::new();
    for ((p, w), d) in flat {
        out.entry(p).or_default().insert(w, d);
    }
    out
}

/// `RΓ_{V(f)} H = Σ⁻¹ cone(H → H[1/f])` on a weight window, by the first applicable of:
/// `f` a unit (zero), `f` nilpotent on every piece (copy of `H`), univariate `Q/(0)` with
/// `f` a monomial (`F[x,1/x]/F[x]` in the opposite parity). Otherwise undetermined.
pub fn rgamma_principal(
    h: &CyclicPresentation,
    f: &Poly,
    window: (i64, i64),
) -> Result<RGammaTable, LocalError> {
    if !Ring::same(f.ring(), &h.ring) {
        return Err(AlgError::MixedAmbient.into());
    }
    let mut saturations = BTreeMap::new();
    let mut sats = BTreeMap::new();
    for (&p, ideal) in &h.pieces {
        let s = if f.is_zero() {
            IdealBasis::zero(&h.ring)
        } else {
            saturate(ideal, f)?
        };
        saturations.insert(p, s.strings());
        sats.insert(p, s);
    }
    let zero_table = || {
        let mut flat = BTreeMap::new();
        for p in 0..2 {
            for w in window.0..=window.1 {
                flat.insert((p, w), 0);
            }
        }
        nest(flat)
    };
    if f.is_constant() && !f.is_zero() {
        return Ok(RGammaTable {
            dims: zero_table(),
            window,
            weight_unit: 1,
            verdict: Verdict::FinitelyGenerated,
            path: "unit".into(),
            saturations,
            witness: None,
        });
    }
    let is_unit = |i: &IdealBasis| i.gens().iter().any(|g| g.is_constant() && !g.is_zero());
    if sats.values().all(is_unit) {
        return Ok(RGammaTable {
            dims: nest(h.dims(window)?),
            window,
            weight_unit: 1,
            verdict: Verdict::FinitelyGenerated,
            path: "nilpotent".into(),
            saturations,
            witness: None,
        });
    }
    let univariate = h.ring.nvars() == 1 && f.len() == 1 && !f.is_constant();
    if univariate {
        let x_weight = h.ring.vars[0].weight as i64;
        let mut flat = BTreeMap::new();
        for p in 0..2 {
            for w in window.0..=window.1 {
                flat.insert((p, w), 0);
            }
        }
        let mut ok = true;
        for (&p, ideal) in &h.pieces {
            if is_unit(&sats[&p]) {
                // f-torsion piece: survives unchanged
                let gb = buchberger(ideal, MonomialOrder::Grevlex)?;
                if let QuotientDimension::Finite { basis, .. } = quotient_dimension(&gb, None)? {
                    for m in basis {
                        let w = m[0] as i64;
                        if (window.0..=window.1).contains(&w) {
                            *flat.get_mut(&(p, w)).unwrap() += 1;
                        }
                    }
                } else {
                    ok = false;
                }
            } else if ideal.is_zero() {
                // F[x,1/x]/F[x] spanned by x^{-k}, k ≥ 1, one parity up
                for w in window.0..=window.1.min(-1) {
                    *flat.get_mut(&((p + 1).rem_euclid(2), w)).unwrap() += 1;
                }
            } else {
                ok = false;
            }
        }
        if ok {
            let x = &h.ring.vars[0].name;
            return Ok(RGammaTable {
                dims: nest(flat),
                window,
                weight_unit: x_weight.max(1),
                verdict: Verdict::NotFinitelyGenerated,
                path: "univariate_laurent".into(),
                saturations,
                witness: Some(format!(
                    "{x}^-k for every k >= 1 is a nonzero class of F[{x},1/{x}]/F[{x}]"
                )),
            });
        }
    }
    Ok(RGammaTable {
        dims: BTreeMap::new(),
        window,
        weight_unit: 1,
        verdict: Verdict::Undetermined,
        path: "undetermined".into(),
        saturations,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportVerdict {
    pub not_supported: bool,
    /// `(I : Z^∞)`; a non-unit ideal shows `H` survives localization away from `Z`.
    pub saturation: Vec<String>,
}

/// Whether `Q/I` fails to be supported on `V(z_1, …, z_r)`.
pub fn not_supported_on_v(ideal: &IdealBasis, z: &[Poly]) -> Result<SupportVerdict, LocalError> {
    let sat = saturate_ideal(ideal, z)?;
    let unit = sat.gens().iter().any(|g| g.is_constant() && !g.is_zero());
    Ok(SupportVerdict {
        not_supported: !unit,
        saturation: sat.strings(),
    })
}

/// Either `f^m (1 - b f) = Σ c_i ∂_i f` exhibiting `1 ∈ (J : f^∞) + (f)`, or the ideal
/// `(J : f^∞) + (f)` when it is proper.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmoothnessCertificate {
    Membership {
        m: u32,
        b: String,
        cofactors: Vec<String>,
    },
    ProperIdeal {
        ideal: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessReport {
    pub smooth: bool,
    pub jacobian: Vec<String>,
    pub saturation: Vec<String>,
    pub certificate: SmoothnessCertificate,
}

/// Decide whether the origin is an isolated singular value of `f`, i.e. `1 ∈ (J : f^∞) + (f)`.
pub fn smoothness_check(f: &Poly) -> Result<SmoothnessReport, LocalError> {
    let ring = f.ring().clone();
    if !ring.field.is_perfect() {
        return Err(LocalError::ImperfectGroundField(ring.field.describe()));
    }
    if f.is_constant() {
        return Err(LocalError::UnitInput(f.to_string()));
    }
    let all: Vec<usize> = (0..ring.nvars()).collect();
    let j = jacobian_ideal(f, &all)?;
    let k = if j.is_zero() {
        IdealBasis::zero(&ring)
    } else {
        saturate(&j, f)?
    };
    let sum = k.sum(&IdealBasis::new(&ring, vec![f.clone()])?)?;
    let gb = buchberger(&sum, MonomialOrder::Grevlex)?;
    let report = |smooth, certificate| SmoothnessReport {
        smooth,
        jacobian: j.strings(),
        saturation: k.strings(),
        certificate,
    };
    if !gb.is_unit() {
        return Ok(report(
            false,
            SmoothnessCertificate::ProperIdeal {
                ideal: gb.strings(),
            },
        ));
    }
    // 1 = κ + b f with κ ∈ (J : f^∞), then f^m κ ∈ J for the least such m
    let one = Poly::one(&ring);
    let mut gens: Vec<Poly> = k.gens().to_vec();
    gens.push(f.clone());
    let (kappa, b) = (0..=12)
        .find_map(|bound| express_in(&gens, &one, bound))
        .map(|c| {
            (
                one.sub(&c.last().unwrap().mul(f)),
                c.last().unwrap().clone(),
            )
        })
        .expect("1 lies in the ideal, so a bounded representation exists");
    let jgb = buchberger(&j, MonomialOrder::Grevlex)?;
    let mut m = 0;
    let mut target = kappa.clone();
    while !normal_form(&target, &jgb)?.is_zero() {
        m += 1;
        target = target.mul(f);
    }
    let partials: Vec<Poly> = j.gens().to_vec();
    let deg = target.total_degree().unwrap_or(0) as i32;
    let cofactors = (0..=deg + 8)
        .find_map(|bound| express_in(&partials, &target, bound))
        .expect("target lies in J");
    let check = partials
        .iter()
        .zip(&cofactors)
        .fold(Poly::zero(&ring), |acc, (p, c)| acc.add(&p.mul(c)));
    assert_eq!(check, f.pow(m).mul(&one.sub(&b.mul(f))));
    Ok(report(
        true,
        SmoothnessCertificate::Membership {
            m,
            b: b.to_string(),
            cofactors: cofactors.iter().map(|c| c.to_string()).collect(),
        },
    ))
}

/// The augmented Čech complex of `g_1..g_c`: position `k` is `⊕_{|I|=k} A[1/g_I]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CechComplex {
    pub gens: Vec<String>,
    /// For each position, the index sets whose product is inverted.
    pub terms: Vec<Vec<Vec<usize>>>,
}

pub fn cech_complex(gens: &[Poly]) -> CechComplex {
    let c = gens.len();
    CechComplex {
        gens: gens.iter().map(|g| g.to_string()).collect(),
        terms: (0..=c).map(|k| subsets(c, k)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulLimit {
    /// Cohomology of `Kos*(g^l) ⊗ L` for `l = 1..=l_max`.
    pub stages: Vec<CohomologyTable>,
    /// Per `(position, weight)`: whether the last three stages agree.
    pub stabilized: BTreeMap<(i64, i64), bool>,
}

impl KoszulLimit {
    pub fn last(&self) -> &CohomologyTable {
        self.stages.last().expect("l_max >= 1")
    }

    pub fn all_stabilized(&self) -> bool {
        self.stabilized.values().all(|&b| b)
    }

    /// Stabilized values folded to parities; `None` if any slice has not stabilized.
    pub fn parity_dims(&self) -> Option<BTreeMap<(i64, i64), usize>> {
        self.all_stabilized().then(|| self.last().parity_totals())
    }
}

/// `Kos*(g_1^l, …, g_c^l) ⊗ L` for growing `l`; the transition maps are the identity in
/// Koszul degree 0 and multiplication by `g_i` on each dual generator, so the degree-`k`
/// generators are placed at weight `-l·Σ wt(g_i)` to make the colimit graded.
pub fn rgamma_koszul_limit(
    l: &FiniteComplex,
    gens: &[Poly],
    l_max: u32,
    window: (i64, i64),
) -> Result<KoszulLimit, LocalError> {
    let l = strip_laurent(l);
    let ring = l.ring().clone();
    let stages = (1..=l_max)
        .map(|e| -> Result<CohomologyTable, LocalError> {
            let powers: Vec<Poly> = gens.iter().map(|g| g.pow(e)).collect();
            let kos = koszul_dual(&ring, &powers)?;
            Ok(cohomology_window(&tensor(&kos, &l)?, window)?)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut stabilized = BTreeMap::new();
    let last = stages.last().expect("l_max >= 1");
    for (&key, &d) in &last.entries {
        let tail = &stages[stages.len().saturating_sub(3)..];
        stabilized.insert(
            key,
            tail.len() == 3 && tail.iter().all(|t| t.get(key.0, key.1) == Some(d)),
        );
    }
    Ok(KoszulLimit { stages, stabilized })
}
