use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::chains::Chain;
use super::{AlgebraDescriptor, BasisElem, HochschildAlgebra, HochschildError};
use crate::exactalg::linalg;
use crate::homcx::CohomologyTable;

/// How the infinite complex is cut down to finite slices.
///
/// Without curvature the chains of bar length `≤ cap` form a subcomplex. With curvature the
/// differential never lowers the total weight, so chains of weight `> κ + δ·cap` form a
/// subcomplex and slice `κ` is computed in the quotient by it; this keeps bar length `≤ cap`
/// in the slice itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Truncation {
    BarLength { cap: usize },
    WeightQuotient { cap: usize },
}

impl Truncation {
    pub fn for_algebra(alg: &HochschildAlgebra, cap: usize) -> Truncation {
        if alg.is_curved() {
            Truncation::WeightQuotient { cap }
        } else {
            Truncation::BarLength { cap }
        }
    }

    pub fn cap(&self) -> usize {
        match *self {
            Truncation::BarLength { cap } | Truncation::WeightQuotient { cap } => cap,
        }
    }

    /// Longest chain kept in slice `kappa` when computing homology at slice `center`.
    fn max_len(&self, alg: &HochschildAlgebra, center: i64, kappa: i64) -> Option<usize> {
        match *self {
            Truncation::BarLength { cap } => Some(cap),
            Truncation::WeightQuotient { cap } => {
                let d = alg.delta();
                let top = center + d * cap as i64;
                (top >= kappa).then(|| ((top - kappa) / d) as usize)
            }
        }
    }
}

/// Enumerates normalized chains by `(κ, length)`, caching basis elements by weight.
pub(crate) struct ChainEnumerator<'a> {
    alg: &'a HochschildAlgebra,
    floor: i64,
    bases: HashMap<i64, (Vec<BasisElem>, Vec<BasisElem>)>,
}

impl<'a> ChainEnumerator<'a> {
    pub(crate) fn new(alg: &'a HochschildAlgebra) -> ChainEnumerator<'a> {
        ChainEnumerator {
            alg,
            floor: alg.weight_floor(),
            bases: HashMap::new(),
        }
    }

    fn basis(&mut self, w: i64) -> &(Vec<BasisElem>, Vec<BasisElem>) {
        let alg = self.alg;
        self.bases.entry(w).or_insert_with(|| {
            let all = alg.basis(w);
            let bar = all
                .iter()
                .filter(|b| !alg.is_pivot_unit(b))
                .cloned()
                .collect();
            (all, bar)
        })
    }

    /// All chains of exactly `n` bar factors and total weight `weight`.
    pub(crate) fn chains(&mut self, weight: i64, n: usize) -> Vec<Chain> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n + 1);
        self.rec(weight, n + 1, &mut cur, &mut out);
        out
    }

    fn rec(&mut self, left: i64, slots: usize, cur: &mut Vec<BasisElem>, out: &mut Vec<Chain>) {
        if slots == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let lo = self.floor;
        let hi = left - self.floor * (slots as i64 - 1);
        let first = cur.is_empty();
        for w in lo..=hi {
            let elems = {
                let (all, bar) = self.basis(w);
                if first {
                    all.clone()
                } else {
                    bar.clone()
                }
            };
            for b in elems {
                cur.push(b);
                self.rec(left - w, slots - 1, cur, out);
                cur.pop();
            }
        }
    }

    /// Chains in slice `kappa` with at most `max_len` bar factors.
    pub(crate) fn slice(&mut self, kappa: i64, max_len: usize) -> Vec<Chain> {
        let d = self.alg.delta();
        let mut out = Vec::new();
        for n in 0..=max_len {
            out.extend(self.chains(kappa + d * n as i64, n));
        }
        out
    }
}

fn group_by_position(alg: &HochschildAlgebra, chains: Vec<Chain>) -> BTreeMap<i64, Vec<Chain>> {
    let mut out: BTreeMap<i64, Vec<Chain>> = BTreeMap::new();
    for c in chains {
        out.entry(alg.chain_position(&c)).or_default().push(c);
    }
    out
}

/// Rank of the differential on `sources`, keeping only targets with at most `max_len` bar
/// factors. The flag reports whether any term was dropped.
fn truncated_rank(
    alg: &HochschildAlgebra,
    sources: &[Chain],
    max_len: Option<usize>,
) -> (usize, bool) {
    let mut index: HashMap<Chain, usize> = HashMap::new();
    let mut dropped = false;
    let mut cols = Vec::with_capacity(sources.len());
    for c in sources {
        let mut col = Vec::new();
        for (t, x) in alg.hochschild_d(c) {
            if max_len.is_none_or(|m| t.len() - 1 > m) {
                dropped = true;
                continue;
            }
            let k = index.len();
            let k = *index.entry(t).or_insert(k);
            col.push((k, x));
        }
        cols.push(linalg::normalize(col));
    }
    (linalg::rank(&cols), dropped)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HochschildTruncation {
    pub algebra: AlgebraDescriptor,
    pub truncation: Truncation,
    pub window: (i64, i64),
    /// Homology by `(position, κ)`; positions are degrees or parities per the descriptor.
    pub table: CohomologyTable,
    #[serde(serialize_with = "ser_pairs")]
    pub chain_counts: BTreeMap<(i64, i64), usize>,
    /// Slices whose outgoing differential lost terms to the truncation.
    pub boundary: Vec<(i64, i64)>,
}

fn ser_pairs<S: serde::Serializer>(
    m: &BTreeMap<(i64, i64), usize>,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|(&(p, k), &d)| (p, k, d)))
}

/// `((position, κ), homology, chains, dropped)`.
type SliceRow = ((i64, i64), usize, usize, bool);

/// Homology of the truncated normalized Hochschild complex on the `κ` window.
pub fn hochschild_truncated(
    alg: &HochschildAlgebra,
    cap: usize,
    window: (i64, i64),
) -> Result<HochschildTruncation, HochschildError> {
    if window.0 > window.1 {
        return Err(HochschildError::Unsupported("empty window".into()));
    }
    let trunc = Truncation::for_algebra(alg, cap);
    let d = alg.delta();
    let results: Vec<Vec<SliceRow>> = (window.0..=window.1)
        .into_par_iter()
        .map(|kappa| {
            let mut en = ChainEnumerator::new(alg);
            let here = group_by_position(
                alg,
                en.slice(kappa, trunc.max_len(alg, kappa, kappa).unwrap_or(0)),
            );
            let below = match trunc.max_len(alg, kappa, kappa - d) {
                Some(m) => group_by_position(alg, en.slice(kappa - d, m)),
                None => BTreeMap::new(),
            };
            let up_len = trunc.max_len(alg, kappa, kappa + d);
            let mut rows = Vec::new();
            for (&p, chains) in &here {
                let (out_rank, dropped) = truncated_rank(alg, chains, up_len);
                let prev = below
                    .iter()
                    .find(|(&q, _)| alg.next_position(q) == p)
                    .map(|(_, c)| c);
                let in_rank = prev.map_or(0, |c| {
                    truncated_rank(alg, c, Some(trunc.max_len(alg, kappa, kappa).unwrap_or(0))).0
                });
                rows.push((
                    (p, kappa),
                    chains.len() - out_rank - in_rank,
                    chains.len(),
                    dropped,
                ));
            }
            rows
        })
        .collect();
    let mut entries = BTreeMap::new();
    let mut chain_counts = BTreeMap::new();
    let mut boundary = Vec::new();
    for (key, dim, count, dropped) in results.into_iter().flatten() {
        entries.insert(key, dim);
        chain_counts.insert(key, count);
        if dropped {
            boundary.push(key);
        }
    }
    Ok(HochschildTruncation {
        algebra: alg.descriptor(),
        truncation: trunc,
        window,
        table: CohomologyTable {
            entries,
            window,
            complete: true,
        },
        chain_counts,
        boundary,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizedTable {
    pub caps: Vec<usize>,
    pub per_cap: Vec<CohomologyTable>,
    /// Values at the largest cap; trust only slices marked stabilized.
    pub table: CohomologyTable,
    #[serde(serialize_with = "ser_flags")]
    pub stabilized: BTreeMap<(i64, i64), bool>,
    pub all_stabilized: bool,
}

fn ser_flags<S: serde::Serializer>(
    m: &BTreeMap<(i64, i64), bool>,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|(&(p, k), &b)| (p, k, b)))
}

impl StabilizedTable {
    /// Stabilized totals `(even, odd)`, or `None` if some slice has not settled.
    pub fn stable_parity_totals(&self) -> Option<(usize, usize)> {
        self.all_stabilized.then(|| self.table.even_odd())
    }
}

/// Homology at each cap; a slice is stabilized when the last three caps agree on it.
pub fn homology_stabilized(
    alg: &HochschildAlgebra,
    caps: &[usize],
    window: (i64, i64),
) -> Result<StabilizedTable, HochschildError> {
    if caps.len() < 3 {
        return Err(HochschildError::TooFewCaps);
    }
    let per_cap: Vec<CohomologyTable> = caps
        .iter()
        .map(|&c| hochschild_truncated(alg, c, window).map(|t| t.table))
        .collect::<Result<_, _>>()?;
    let keys: BTreeSet<(i64, i64)> = per_cap
        .iter()
        .flat_map(|t| t.entries.keys().copied())
        .collect();
    let last3 = &per_cap[per_cap.len() - 3..];
    let mut stabilized = BTreeMap::new();
    let mut entries = BTreeMap::new();
    for k in keys {
        let vals: Vec<usize> = last3
            .iter()
            .map(|t| t.entries.get(&k).copied().unwrap_or(0))
            .collect();
        stabilized.insert(k, vals.iter().all(|&v| v == vals[0]));
        entries.insert(k, vals[2]);
    }
    let all_stabilized = stabilized.values().all(|&b| b);
    Ok(StabilizedTable {
        caps: caps.to_vec(),
        per_cap,
        table: CohomologyTable {
            entries,
            window,
            complete: all_stabilized,
        },
        stabilized,
        all_stabilized,
    })
}
