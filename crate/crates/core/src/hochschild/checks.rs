use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::chains::{Chain, ChainVec};
use super::truncation::ChainEnumerator;
use super::{HochschildAlgebra, HochschildError};
use crate::derham::{derham_d, DifferentialForm};
use crate::exactalg::linalg;

/// Exhaustive identity checks on every chain of the window slices up to the cap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub chains: usize,
    pub d2: bool,
    pub b2: bool,
    pub bbbb: bool,
    /// `ch ∘ b = dw ∧ ch`; `None` when the Chern character is unavailable.
    pub chain_map: Option<bool>,
    /// `ch ∘ B = d ∘ ch`.
    pub connes_derham: Option<bool>,
    pub failures: Vec<String>,
}

impl IdentityReport {
    pub fn ok(&self) -> bool {
        self.d2
            && self.b2
            && self.bbbb
            && self.chain_map != Some(false)
            && self.connes_derham != Some(false)
    }
}

fn sum(alg: &HochschildAlgebra, a: &ChainVec, b: &ChainVec) -> ChainVec {
    let mut out = a.clone();
    for (c, x) in b {
        alg.push_normalized(&mut out, c.clone(), x.clone());
    }
    out
}

fn has_chern(alg: &HochschildAlgebra) -> bool {
    alg.rank() == 1 && alg.ring().field.characteristic() == 0
}

fn dw(alg: &HochschildAlgebra) -> DifferentialForm {
    let ring = alg.ring();
    let rel: Vec<usize> = (0..ring.nvars()).collect();
    derham_d(&DifferentialForm::function(
        ring,
        &rel,
        alg.curvature().clone(),
    ))
}

#[derive(Default)]
struct Outcome {
    d2: bool,
    b2: bool,
    bbbb: bool,
    chain_map: bool,
    connes: bool,
}

fn check_chain(
    alg: &HochschildAlgebra,
    c: &Chain,
    dw: Option<&DifferentialForm>,
) -> Result<Outcome, HochschildError> {
    let single: ChainVec = [(c.clone(), alg.ring().field.one())].into_iter().collect();
    let d = alg.hochschild_d(c);
    let b = alg.connes_b(c);
    let dd = alg.apply(&d, |x| alg.hochschild_d(x));
    let bb = alg.apply(&b, |x| alg.connes_b(x));
    let mixed = sum(
        alg,
        &alg.apply(&d, |x| alg.connes_b(x)),
        &alg.apply(&b, |x| alg.hochschild_d(x)),
    );
    let mut out = Outcome {
        d2: dd.is_empty(),
        b2: bb.is_empty(),
        bbbb: mixed.is_empty(),
        chain_map: true,
        connes: true,
    };
    if let Some(dw) = dw {
        let ch = alg.chern_vec(&single)?;
        out.chain_map = alg.chern_vec(&d)? == dw.wedge(&ch);
        out.connes = alg.chern_vec(&b)? == derham_d(&ch);
    }
    Ok(out)
}

pub fn identity_report(
    alg: &HochschildAlgebra,
    cap: usize,
    window: (i64, i64),
) -> Result<IdentityReport, HochschildError> {
    let mut chains = Vec::new();
    let mut en = ChainEnumerator::new(alg);
    for kappa in window.0..=window.1 {
        chains.extend(en.slice(kappa, cap));
    }
    let chern = has_chern(alg);
    let form = chern.then(|| dw(alg));
    let results: Vec<(Chain, Outcome)> = chains
        .par_iter()
        .map(|c| check_chain(alg, c, form.as_ref()).map(|o| (c.clone(), o)))
        .collect::<Result<_, _>>()?;
    let mut rep = IdentityReport {
        chains: results.len(),
        d2: true,
        b2: true,
        bbbb: true,
        chain_map: chern.then_some(true),
        connes_derham: chern.then_some(true),
        failures: Vec::new(),
    };
    for (c, o) in &results {
        let name = alg.chain_to_string(c);
        for (ok, what) in [
            (o.d2, "b^2"),
            (o.b2, "B^2"),
            (o.bbbb, "bB+Bb"),
            (o.chain_map, "ch b"),
            (o.connes, "ch B"),
        ] {
            if !ok && rep.failures.len() < 20 {
                rep.failures.push(format!("{what} on {name}"));
            }
        }
        rep.d2 &= o.d2;
        rep.b2 &= o.b2;
        rep.bbbb &= o.bbbb;
        if chern {
            rep.chain_map = Some(rep.chain_map.unwrap() && o.chain_map);
            rep.connes_derham = Some(rep.connes_derham.unwrap() && o.connes);
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurjectivityProbe {
    pub form_degree: usize,
    pub weight: i64,
    pub forms: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChernReport {
    pub seed: u64,
    pub samples: usize,
    pub chain_map_ok: bool,
    pub connes_ok: bool,
    pub failures: Vec<String>,
    /// Rank of `ch` on chains of length `q` against the dimension of each form slice.
    pub surjectivity: Vec<SurjectivityProbe>,
}

impl ChernReport {
    pub fn ok(&self) -> bool {
        self.chain_map_ok && self.connes_ok && self.surjectivity.iter().all(|p| p.rank == p.forms)
    }
}

fn random_vec(
    alg: &HochschildAlgebra,
    en: &mut ChainEnumerator,
    rng: &mut ChaCha8Rng,
    max_len: usize,
    max_weight: i64,
) -> ChainVec {
    let mut out = ChainVec::new();
    let terms = rng.random_range(1..=3);
    for _ in 0..100 {
        if out.len() >= terms {
            break;
        }
        let n = rng.random_range(0..=max_len);
        let w = rng.random_range(0..=max_weight + n as i64);
        let pool = en.chains(w, n);
        if pool.is_empty() {
            continue;
        }
        let c = pool[rng.random_range(0..pool.len())].clone();
        let mut x = 0;
        while x == 0 {
            x = rng.random_range(-4i64..=4);
        }
        alg.push_normalized(&mut out, c, alg.ring().field.from_i64(x));
    }
    out
}

fn form_coords(
    f: &DifferentialForm,
    index: &mut HashMap<(Vec<usize>, Vec<i32>), usize>,
) -> linalg::SparseVec {
    let mut v = Vec::new();
    for (idx, p) in f.terms() {
        for (m, c) in p.terms() {
            let k = index.len();
            let k = *index.entry((idx.clone(), m.to_vec())).or_insert(k);
            v.push((k, c.clone()));
        }
    }
    linalg::normalize(v)
}

/// Number of forms `m·dx_I` with `|I| = q` and total weight `weight`.
fn form_slice_dim(alg: &HochschildAlgebra, q: usize, weight: i64) -> usize {
    let ring = alg.ring();
    let n = ring.nvars();
    let mut count = 0;
    let mut subset = vec![false; n];
    fn walk(k: usize, left: usize, subset: &mut Vec<bool>, f: &mut dyn FnMut(&[bool])) {
        if k == subset.len() {
            if left == 0 {
                f(subset);
            }
            return;
        }
        walk(k + 1, left, subset, f);
        if left > 0 {
            subset[k] = true;
            walk(k + 1, left - 1, subset, f);
            subset[k] = false;
        }
    }
    walk(0, q, &mut subset, &mut |s: &[bool]| {
        let wt: i64 = s
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| ring.vars[i].weight as i64)
            .sum();
        if weight >= wt {
            count += ring.monomials_of_weight(weight - wt).map_or(0, |m| m.len());
        }
    });
    count
}

/// Random-sample check of `ch ∘ b = dw ∧ ch` and `ch ∘ B = d ∘ ch`, plus a rank probe showing
/// that `ch` reaches every form slice in the window.
pub fn chern_compatibility_check(
    alg: &HochschildAlgebra,
    samples: usize,
    window: (i64, i64),
    seed: u64,
) -> Result<ChernReport, HochschildError> {
    let p = alg.ring().field.characteristic();
    if p != 0 {
        return Err(HochschildError::PositiveCharacteristic(p));
    }
    if alg.rank() != 1 {
        return Err(HochschildError::Unsupported(
            "the Chern character is defined here for one-object algebras".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut en = ChainEnumerator::new(alg);
    let max_weight = window.1.max(1);
    let vecs: Vec<ChainVec> = (0..samples)
        .map(|_| random_vec(alg, &mut en, &mut rng, 3, max_weight))
        .collect();
    let form = dw(alg);
    let outcomes: Vec<(bool, bool)> = vecs
        .par_iter()
        .map(|v| {
            let ch = alg.chern_vec(v)?;
            let d = alg.apply(v, |c| alg.hochschild_d(c));
            let b = alg.apply(v, |c| alg.connes_b(c));
            Ok((
                alg.chern_vec(&d)? == form.wedge(&ch),
                alg.chern_vec(&b)? == derham_d(&ch),
            ))
        })
        .collect::<Result<_, HochschildError>>()?;
    let mut failures = Vec::new();
    for (i, &(a, b)) in outcomes.iter().enumerate() {
        if !(a && b) && failures.len() < 20 {
            failures.push(format!("sample {i}"));
        }
    }
    let mut surjectivity = Vec::new();
    let n = alg.ring().nvars();
    for q in 0..=n {
        for weight in window.0.max(0)..=window.1 {
            let forms = form_slice_dim(alg, q, weight);
            let mut index = HashMap::new();
            let cols: Vec<_> = en
                .chains(weight, q)
                .iter()
                .map(|c| alg.chern(c).map(|f| form_coords(&f, &mut index)))
                .collect::<Result<_, _>>()?;
            surjectivity.push(SurjectivityProbe {
                form_degree: q,
                weight,
                forms,
                rank: linalg::rank(&cols),
            });
        }
    }
    Ok(ChernReport {
        seed,
        samples,
        chain_map_ok: outcomes.iter().all(|o| o.0),
        connes_ok: outcomes.iter().all(|o| o.1),
        failures,
        surjectivity,
    })
}
