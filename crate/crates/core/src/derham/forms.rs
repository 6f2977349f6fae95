use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::exactalg::{Poly, Ring};

/// A Kähler form `Σ f_I dx_I`. Index sets are sorted positions into `relative`.
#[derive(Clone, PartialEq, Eq)]
pub struct DifferentialForm {
    ring: Arc<Ring>,
    relative: Vec<usize>,
    terms: BTreeMap<Vec<usize>, Poly>,
}

impl DifferentialForm {
    pub fn zero(ring: &Arc<Ring>, relative: &[usize]) -> DifferentialForm {
        DifferentialForm {
            ring: ring.clone(),
            relative: relative.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn function(ring: &Arc<Ring>, relative: &[usize], f: Poly) -> DifferentialForm {
        let mut out = DifferentialForm::zero(ring, relative);
        out.add_term(vec![], f);
        out
    }

    /// `dx_I` for a sorted index set.
    pub fn basis(ring: &Arc<Ring>, relative: &[usize], idx: Vec<usize>) -> DifferentialForm {
        let mut out = DifferentialForm::zero(ring, relative);
        out.add_term(idx, Poly::one(ring));
        out
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exterior degree, if homogeneous.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|k| k.len());
        let d = it.next().unwrap_or(0);
        it.all(|x| x == d).then_some(d)
    }

    fn add_term(&mut self, idx: Vec<usize>, f: Poly) {
        if f.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&idx) {
            Some(g) => g.add(&f),
            None => f,
        };
        if !sum.is_zero() {
            self.terms.insert(idx, sum);
        }
    }

    pub fn add(&self, o: &DifferentialForm) -> DifferentialForm {
        let mut out = self.clone();
        for (k, f) in &o.terms {
            out.add_term(k.clone(), f.clone());
        }
        out
    }

    pub fn scale(&self, p: &Poly) -> DifferentialForm {
        let mut out = DifferentialForm::zero(&self.ring, &self.relative);
        for (k, f) in &self.terms {
            out.add_term(k.clone(), f.mul(p));
        }
        out
    }

    pub fn wedge(&self, o: &DifferentialForm) -> DifferentialForm {
        let mut out = DifferentialForm::zero(&self.ring, &self.relative);
        for (a, f) in &self.terms {
            for (b, g) in &o.terms {
                if let Some((idx, neg)) = merge(a, b) {
                    let c = f.mul(g);
                    out.add_term(idx, if neg { c.neg() } else { c });
                }
            }
        }
        out
    }
}

/// Concatenate two sorted index sets; `None` if they meet, otherwise the sorted union and
/// whether the sorting permutation is odd.
fn merge(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for &x in a {
        for &y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    let mut idx: Vec<usize> = a.iter().chain(b).copied().collect();
    idx.sort_unstable();
    Some((idx, inversions % 2 == 1))
}

/// `d(f dx_I) = Σ_i ∂_i f dx_i ∧ dx_I`.
pub fn derham_d(form: &DifferentialForm) -> DifferentialForm {
    let mut out = DifferentialForm::zero(&form.ring, &form.relative);
    for (idx, f) in &form.terms {
        for (pos, &v) in form.relative.iter().enumerate() {
            let df = f.derivative(v);
            if df.is_zero() {
                continue;
            }
            if let Some((j, neg)) = merge(&[pos], idx) {
                out.add_term(j, if neg { df.neg() } else { df });
            }
        }
    }
    out
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, c)| {
                let d: Vec<String> = idx
                    .iter()
                    .map(|&i| format!("d{}", self.ring.vars[self.relative[i]].name))
                    .collect();
                if d.is_empty() {
                    c.to_string()
                } else {
                    format!("({c})*{}", d.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form({self})")
    }
}
