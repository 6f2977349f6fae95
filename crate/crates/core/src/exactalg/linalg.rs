//! Sparse exact elimination over a field.
//!
//! Vectors are sorted `(index, coefficient)` lists. Pivots sit at the smallest index of
//! each stored row and are normalised to one, so reducing a vector is one left-to-right sweep.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::ToPrimitive;

use super::scalar::{Field, Scalar};

pub type SparseVec = Vec<(usize, Scalar)>;

/// `a - c*b` for sorted sparse vectors.
pub fn axpy(a: &SparseVec, c: &Scalar, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, b[j].1.mul(c).neg()));
            j += 1;
        } else {
            let v = a[i].1.sub(&b[j].1.mul(c));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_vec(v: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x.mul(c))).collect()
}

/// Sort, merge duplicates and drop zeros.
pub fn normalize(mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some((j, d)) if *j == i => *d = d.add(&c),
            _ => out.push((i, c)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

/// Incremental row echelon form, optionally tracking how each pivot row was assembled
/// from the inserted vectors.
#[derive(Clone, Debug)]
pub struct Echelon {
    pivots: HashMap<usize, (SparseVec, SparseVec)>,
    track: bool,
    inserted: usize,
}

impl Echelon {
    pub fn new(track: bool) -> Echelon {
        Echelon {
            pivots: HashMap::new(),
            track,
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `v`; returns the remainder and the combination `c` with `v - remainder = sum c_k * inserted_k`.
    fn reduce(&self, mut v: SparseVec) -> (SparseVec, SparseVec) {
        let mut comb: SparseVec = Vec::new();
        let mut k = 0;
        while k < v.len() {
            let (col, c) = (v[k].0, v[k].1.clone());
            if let Some((row, t)) = self.pivots.get(&col) {
                v = axpy(&v, &c, row);
                if self.track {
                    comb = normalize(comb.into_iter().chain(scale_vec(t, &c)).collect());
                }
            } else {
                k += 1;
            }
        }
        (v, comb)
    }

    /// Insert a vector; returns true if it was independent of the previous ones.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let id = self.inserted;
        self.inserted += 1;
        let (r, comb) = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let inv = r[0].1.inv().unwrap();
        let row = scale_vec(&r, &inv);
        let t = if self.track {
            // r = v_id - comb, so row = inv * (e_id - comb)
            let field = r[0].1.field();
            let mut t = vec![(id, field.one())];
            t.extend(comb.into_iter().map(|(i, c)| (i, c.neg())));
            scale_vec(&normalize(t), &inv)
        } else {
            Vec::new()
        };
        self.pivots.insert(row[0].0, (row, t));
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).0.is_empty()
    }

    /// Express `v` as a combination of inserted vectors (requires tracking).
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        assert!(self.track, "express needs a tracking echelon");
        let (r, comb) = self.reduce(v.clone());
        r.is_empty().then_some(comb)
    }
}

pub fn rank(cols: &[SparseVec]) -> usize {
    if let Some(r) = integer_rank(cols) {
        return r;
    }
    let mut e = Echelon::new(false);
    for c in cols {
        e.insert(c.clone());
    }
    e.rank()
}

type IntVec = Vec<(usize, i64)>;

fn to_int(c: &Scalar) -> Option<i64> {
    match c {
        Scalar::Q(q) if q.is_integer() => q.to_integer().to_i64(),
        _ => None,
    }
}

/// `a·v - b·row` with checked arithmetic, divided by the gcd of its entries.
fn int_combine(v: &IntVec, a: i64, b: i64, row: &IntVec) -> Option<IntVec> {
    let mut out = Vec::with_capacity(v.len() + row.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < row.len() {
        let (idx, x) = if j >= row.len() || (i < v.len() && v[i].0 < row[j].0) {
            i += 1;
            (v[i - 1].0, v[i - 1].1.checked_mul(a)?)
        } else if i >= v.len() || row[j].0 < v[i].0 {
            j += 1;
            (row[j - 1].0, row[j - 1].1.checked_mul(b)?.checked_neg()?)
        } else {
            i += 1;
            j += 1;
            (
                v[i - 1].0,
                v[i - 1]
                    .1
                    .checked_mul(a)?
                    .checked_sub(row[j - 1].1.checked_mul(b)?)?,
            )
        };
        if x != 0 {
            out.push((idx, x));
        }
    }
    let g = out.iter().fold(0i64, |g, e| g.gcd(&e.1));
    if g > 1 {
        for e in &mut out {
            e.1 /= g;
        }
    }
    Some(out)
}

/// Fraction-free elimination in machine integers; `None` when an entry is not an integer or
/// an intermediate value overflows.
/// Rows are relabelled sparsest first and short columns go first, which keeps fill-in low.
fn integer_rank(cols: &[SparseVec]) -> Option<usize> {
    let mut count: HashMap<usize, usize> = HashMap::new();
    for c in cols {
        for (i, _) in c {
            *count.entry(*i).or_default() += 1;
        }
    }
    let mut rows: Vec<(usize, usize)> = count.into_iter().map(|(i, n)| (n, i)).collect();
    rows.sort_unstable();
    let label: HashMap<usize, usize> = rows.iter().enumerate().map(|(k, &(_, i))| (i, k)).collect();
    let mut order: Vec<&SparseVec> = cols.iter().collect();
    order.sort_by_key(|c| c.len());
    let mut pivots: HashMap<usize, IntVec> = HashMap::new();
    for c in order {
        let mut v: IntVec = c
            .iter()
            .map(|(i, x)| to_int(x).map(|x| (label[i], x)))
            .collect::<Option<_>>()?;
        v.sort_unstable_by_key(|e| e.0);
        let mut k = 0;
        while k < v.len() {
            match pivots.get(&v[k].0) {
                Some(row) => {
                    let (lead, x) = (row[0].1, v[k].1);
                    let g = lead.gcd(&x);
                    v = int_combine(&v, lead / g, x / g, row)?;
                }
                None => k += 1,
            }
        }
        if let Some(&(i, _)) = v.first() {
            pivots.insert(i, v);
        }
    }
    Some(pivots.len())
}

/// Solve `sum_j x_j cols[j] = rhs`; returns a dense solution vector.
pub fn solve(field: &Field, cols: &[SparseVec], rhs: &SparseVec) -> Option<Vec<Scalar>> {
    let mut e = Echelon::new(true);
    for c in cols {
        e.insert(c.clone());
    }
    let comb = e.express(rhs)?;
    let mut x = vec![field.zero(); cols.len()];
    for (i, c) in comb {
        x[i] = c;
    }
    Some(x)
}

/// Basis of the kernel of the linear map whose columns are `cols`.
pub fn kernel(field: &Field, cols: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::new(true);
    let mut out = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        if !e.insert(c.clone()) {
            let comb = e.express(c).unwrap();
            let mut k = vec![(j, field.one())];
            k.extend(comb.into_iter().map(|(i, x)| (i, x.neg())));
            out.push(normalize(k));
        }
    }
    out
}
