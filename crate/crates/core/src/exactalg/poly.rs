use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::scalar::{Field, Scalar, PARAM};
use super::AlgError;

pub type Mono = Vec<i32>;

/// A ring variable. `degree` is the cohomological degree (even for curved carriers),
/// `weight` the auxiliary grading used to cut complexes into finite slices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Var {
    pub name: String,
    pub degree: i32,
    pub weight: i32,
    pub laurent: bool,
}

impl Var {
    pub fn new(name: &str, degree: i32, weight: i32) -> Var {
        Var {
            name: name.to_string(),
            degree,
            weight,
            laurent: false,
        }
    }

    pub fn laurent(name: &str, degree: i32) -> Var {
        Var {
            name: name.to_string(),
            degree,
            weight: 0,
            laurent: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    /// Elimination order: grevlex on the first `k` variables, ties broken by grevlex on the rest.
    Block(usize),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[i32], b: &[i32]) -> Ordering {
        match *self {
            MonomialOrder::Grevlex => grevlex(a, b),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Block(k) => {
                let k = k.min(a.len());
                grevlex(&a[..k], &b[..k]).then_with(|| grevlex(&a[k..], &b[k..]))
            }
        }
    }
}

fn grevlex(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&e| e as i64).sum();
    let db: i64 = b.iter().map(|&e| e as i64).sum();
    da.cmp(&db).then_with(|| {
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}

/// Polynomial ring `F[x_1..x_n]`, possibly with one Laurent variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    pub field: Field,
    pub vars: Vec<Var>,
    pub order: MonomialOrder,
}

impl Ring {
    pub fn new(field: Field, vars: Vec<Var>) -> Result<Arc<Ring>, AlgError> {
        Ring::with_order(field, vars, MonomialOrder::Grevlex)
    }

    pub fn with_order(
        field: Field,
        vars: Vec<Var>,
        order: MonomialOrder,
    ) -> Result<Arc<Ring>, AlgError> {
        for (i, v) in vars.iter().enumerate() {
            let ok = v
                .name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic())
                && v.name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
            if !ok {
                return Err(AlgError::BadVariableName(v.name.clone()));
            }
            if matches!(field, Field::RationalFunction(_)) && v.name == PARAM {
                return Err(AlgError::BadVariableName(v.name.clone()));
            }
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(AlgError::BadVariableName(v.name.clone()));
            }
        }
        if vars.iter().filter(|v| v.laurent).count() > 1 {
            return Err(AlgError::BadVariableName(
                "more than one Laurent variable".into(),
            ));
        }
        Ok(Arc::new(Ring { field, vars, order }))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize, AlgError> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| AlgError::UnknownVariable(name.to_string()))
    }

    pub fn laurent_index(&self) -> Option<usize> {
        self.vars.iter().position(|v| v.laurent)
    }

    pub fn reorder(&self, order: MonomialOrder) -> Arc<Ring> {
        Arc::new(Ring {
            field: self.field.clone(),
            vars: self.vars.clone(),
            order,
        })
    }

    /// Same ring with the listed variables removed.
    pub fn without(&self, drop: &[usize]) -> Arc<Ring> {
        let vars = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, v)| v.clone())
            .collect();
        Arc::new(Ring {
            field: self.field.clone(),
            vars,
            order: self.order,
        })
    }

    pub fn mono_weight(&self, m: &[i32]) -> i64 {
        m.iter()
            .zip(&self.vars)
            .map(|(&e, v)| e as i64 * v.weight as i64)
            .sum()
    }

    pub fn mono_degree(&self, m: &[i32]) -> i64 {
        m.iter()
            .zip(&self.vars)
            .map(|(&e, v)| e as i64 * v.degree as i64)
            .sum()
    }

    pub fn one_mono(&self) -> Mono {
        vec![0; self.vars.len()]
    }

    pub fn same(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    /// Monomials of the given weight; requires all variables to have positive weight
    /// (Laurent variables excluded).
    pub fn monomials_of_weight(&self, weight: i64) -> Result<Vec<Mono>, AlgError> {
        if self.vars.iter().any(|v| v.laurent || v.weight <= 0) {
            return Err(AlgError::InfiniteSlice(weight));
        }
        let mut out = Vec::new();
        let mut cur = self.one_mono();
        fn rec(r: &Ring, i: usize, left: i64, cur: &mut Mono, out: &mut Vec<Mono>) {
            if i == r.vars.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let w = r.vars[i].weight as i64;
            let mut e = 0;
            while e as i64 * w <= left {
                cur[i] = e;
                rec(r, i + 1, left - e as i64 * w, cur, out);
                e += 1;
            }
            cur[i] = 0;
        }
        if weight >= 0 {
            rec(self, 0, weight, &mut cur, &mut out);
        }
        out.sort_by(|a, b| self.order.cmp(b, a));
        Ok(out)
    }
}

pub fn mono_mul(a: &[i32], b: &[i32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn mono_divides(a: &[i32], b: &[i32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn mono_div(b: &[i32], a: &[i32]) -> Mono {
    b.iter().zip(a).map(|(x, y)| x - y).collect()
}

pub fn mono_lcm(a: &[i32], b: &[i32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// Sparse polynomial; terms are kept sorted in decreasing monomial order with nonzero coefficients.
#[derive(Clone)]
pub struct Poly {
    ring: Arc<Ring>,
    terms: Vec<(Mono, Scalar)>,
}

impl PartialEq for Poly {
    fn eq(&self, o: &Poly) -> bool {
        Ring::same(&self.ring, &o.ring) && self.terms == o.terms
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.terms.hash(h)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> Poly {
        Poly::from_terms(ring, vec![(ring.one_mono(), c)])
    }

    pub fn one(ring: &Arc<Ring>) -> Poly {
        Poly::constant(ring, ring.field.one())
    }

    pub fn from_i64(ring: &Arc<Ring>, n: i64) -> Poly {
        Poly::constant(ring, ring.field.from_i64(n))
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Poly {
        let mut m = ring.one_mono();
        m[i] = 1;
        Poly::from_terms(ring, vec![(m, ring.field.one())])
    }

    pub fn monomial(ring: &Arc<Ring>, m: Mono, c: Scalar) -> Poly {
        Poly::from_terms(ring, vec![(m, c)])
    }

    pub fn from_terms(ring: &Arc<Ring>, mut terms: Vec<(Mono, Scalar)>) -> Poly {
        let order = ring.order;
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Mono, Scalar)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add(&c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly {
            ring: ring.clone(),
            terms: out,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Mono, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, Scalar)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.iter().all(|&e| e == 0))
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.is_constant() && self.terms[0].1.is_one()
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms
            .iter()
            .find(|(m, _)| m.iter().all(|&e| e == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.ring.field.zero())
    }

    pub fn coeff(&self, m: &[i32]) -> Scalar {
        self.terms
            .iter()
            .find(|(n, _)| n.as_slice() == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.ring.field.zero())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_mono(&self) -> Option<&Mono> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.terms.first().map(|t| &t.1)
    }

    fn check(&self, o: &Poly) {
        assert!(
            Ring::same(&self.ring, &o.ring),
            "polynomials from different rings combined"
        );
    }

    pub fn add(&self, o: &Poly) -> Poly {
        self.check(o);
        let order = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            match order.cmp(&self.terms[i].0, &o.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(o.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].1.add(&o.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Poly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, d)| (m.clone(), d.mul(c)))
                .collect(),
        }
    }

    /// Multiply by the term `c * x^m`; monomial orders are compatible with multiplication,
    /// so the term order is preserved.
    pub fn mul_term(&self, m: &[i32], c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(n, d)| (mono_mul(n, m), d.mul(c)))
                .collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        self.check(o);
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.ring);
        }
        let mut acc = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (m, c) in &self.terms {
            for (n, d) in &o.terms {
                acc.push((mono_mul(m, n), c.mul(d)));
            }
        }
        Poly::from_terms(&self.ring, acc)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Scale so that the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) => self.scale(&c.inv().unwrap()),
        }
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms
            .iter()
            .map(|(m, _)| m.iter().map(|&e| e as i64).sum())
            .max()
    }

    /// Weight if every term has the same auxiliary weight.
    pub fn weight(&self) -> Option<i64> {
        let mut it = self.terms.iter().map(|(m, _)| self.ring.mono_weight(m));
        let w = it.next()?;
        it.all(|x| x == w).then_some(w)
    }

    /// Cohomological degree if homogeneous.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.iter().map(|(m, _)| self.ring.mono_degree(m));
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m[i] != 0)
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.terms.iter().any(|(m, _)| m.iter().any(|&e| e < 0))
    }

    /// Formal partial derivative; coefficients are multiplied in the field, so `p * x^(p-1)`
    /// vanishes in characteristic `p`.
    pub fn derivative(&self, i: usize) -> Poly {
        let f = &self.ring.field;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m[i] != 0)
            .map(|(m, c)| {
                let mut n = m.clone();
                n[i] -= 1;
                (n, c.mul(&f.from_i64(m[i] as i64)))
            })
            .collect();
        Poly::from_terms(&self.ring, terms)
    }

    /// Substitute a scalar for variable `i` (the variable stays in the ring with exponent 0).
    pub fn eval_var(&self, i: usize, v: &Scalar) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let e = m[i];
                let factor = if e >= 0 {
                    v.pow(e as u64)
                } else {
                    v.inv()
                        .expect("zero substituted for inverted variable")
                        .pow((-e) as u64)
                };
                let mut n = m.clone();
                n[i] = 0;
                (n, c.mul(&factor))
            })
            .collect();
        Poly::from_terms(&self.ring, terms)
    }

    /// Move into another ring; `map[i]` is the target index of source variable `i`,
    /// `None` meaning the variable must not occur.
    pub fn map_into(&self, target: &Arc<Ring>, map: &[Option<usize>]) -> Result<Poly, AlgError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut n = target.one_mono();
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => n[j] += e,
                    None => return Err(AlgError::UnknownVariable(self.ring.vars[i].name.clone())),
                }
            }
            terms.push((n, c.clone()));
        }
        Ok(Poly::from_terms(target, terms))
    }

    /// Re-sort the same polynomial under the order of `target`, which must have the same variables.
    pub fn reorder(&self, target: &Arc<Ring>) -> Poly {
        debug_assert_eq!(self.ring.vars, target.vars);
        Poly::from_terms(target, self.terms.clone())
    }

    /// Set the Laurent variable to one and drop it from the ring.
    pub fn strip_laurent(&self, target: &Arc<Ring>) -> Poly {
        let Some(l) = self.ring.laurent_index() else {
            return self.clone().reorder_if_needed(target);
        };
        let map: Vec<Option<usize>> = (0..self.ring.nvars())
            .map(|i| {
                if i == l {
                    None
                } else {
                    Some(if i < l { i } else { i - 1 })
                }
            })
            .collect();
        self.eval_var(l, &self.ring.field.one())
            .map_into(target, &map)
            .expect("laurent variable evaluated")
    }

    fn reorder_if_needed(self, target: &Arc<Ring>) -> Poly {
        if Ring::same(&self.ring, target) {
            self
        } else {
            self.reorder(target)
        }
    }

    /// Evaluate at a full point.
    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        let f = &self.ring.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&point[i].pow(e as u64));
                } else if e < 0 {
                    t = t.mul(
                        &point[i]
                            .inv()
                            .expect("zero substituted for inverted variable")
                            .pow((-e) as u64),
                    );
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.looks_negative();
            let mag = if neg { c.neg() } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| {
                    let name = &self.ring.vars[i].name;
                    if e == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            let coeff = if mag.is_compound() {
                format!("({mag})")
            } else {
                mag.to_string()
            };
            if factors.is_empty() {
                write!(f, "{coeff}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", coeff, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring_xy() -> Arc<Ring> {
        Ring::new(
            Field::Rational,
            vec![Var::new("x", 0, 1), Var::new("y", 0, 1)],
        )
        .unwrap()
    }

    #[test]
    fn grevlex_breaks_ties_on_last_variable() {
        let o = MonomialOrder::Grevlex;
        assert_eq!(o.cmp(&[1, 1, 0], &[0, 2, 0]), Ordering::Greater);
        assert_eq!(o.cmp(&[2, 0, 0], &[0, 1, 1]), Ordering::Greater);
        assert_eq!(o.cmp(&[0, 0, 3], &[1, 0, 0]), Ordering::Greater);
    }

    #[test]
    fn arithmetic_and_printing() {
        let r = ring_xy();
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let f = x.mul(&x).sub(&y).add(&Poly::from_i64(&r, 3));
        assert_eq!(f.to_string(), "x^2 - y + 3");
        let g = f.mul(&f).sub(&f.mul(&f));
        assert!(g.is_zero());
        assert_eq!(x.mul(&y).weight(), Some(2));
        assert_eq!(f.weight(), None);
    }

    #[test]
    fn derivative_in_char_p() {
        let r = Ring::new(Field::Prime(3), vec![Var::new("x", 0, 1)]).unwrap();
        let x = Poly::var(&r, 0);
        assert!(x.pow(3).derivative(0).is_zero());
        assert_eq!(x.pow(4).derivative(0).to_string(), "x^3");
    }

    #[test]
    fn strip_laurent_sets_t_to_one() {
        let r = Ring::new(
            Field::Rational,
            vec![Var::new("x", 0, 1), Var::laurent("t", 2)],
        )
        .unwrap();
        let q = r.without(&[1]);
        let x = Poly::var(&r, 0);
        let t = Poly::var(&r, 1);
        let f = x.mul(&x).mul(&t).add(&x.mul(&t));
        assert_eq!(f.strip_laurent(&q).to_string(), "x^2 + x");
    }

    #[test]
    fn monomials_of_weight_counts() {
        let r = Ring::new(
            Field::Rational,
            vec![Var::new("x", 0, 1), Var::new("y", 0, 2)],
        )
        .unwrap();
        assert_eq!(r.monomials_of_weight(4).unwrap().len(), 3);
        assert_eq!(r.monomials_of_weight(-1).unwrap().len(), 0);
    }
}
